//! Configuration, artifact writers and subcommand orchestration.

pub mod config;
pub mod csv;
pub mod manifest;
pub mod run;
pub mod svg;

pub use config::{parse_config, RunConfig, RunSection, SimMode};
pub use manifest::{OutputEntry, RunManifest};
pub use run::{run_subcommand, Subcommand};
pub use svg::{emit_svg, PlotArtifact};
