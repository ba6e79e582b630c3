//! Beta-dependent gamma-feedback dynamics.
//!
//! Static stability maps for the gamma-squeeze threshold, deterministic and
//! stochastic recursive hedging-feedback simulations, and fixed-point analysis
//! of the feedback map, with CSV/SVG artifact emission and a reproducible CLI.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod model;
pub mod rng;
pub mod stochastic;

pub use error::{Error, Result};
pub use model::{Impact, ModelParams};
