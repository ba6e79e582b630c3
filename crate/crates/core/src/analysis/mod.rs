//! Static stability maps, iso-lines, and fixed-point analysis of the feedback map.

pub mod contour;
pub mod fixed_point;
pub mod grid;

pub use contour::{extract_contour, ContourSet};
pub use fixed_point::{
    analyze_fixed_point, bifurcation_curve, bifurcation_surface, linearized_feedback,
    FixedPointReport, Stability,
};
pub use grid::{amplification_grid, stability_grid, GridField, GridScan, GridSpec};
