//! Lock-step vicious walkers: exact combinatorics, two numerical routes to the
//! finite-size law of the leftmost walker, the GOE Tracy–Widom distribution via
//! Painlevé II, and Monte Carlo sampling over path configurations.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod combinatorics;
pub mod error;
pub mod exact_dist;
pub mod io;
pub mod painleve;
pub mod precision;
pub mod quad;
pub mod sampler;
pub mod verify;

pub use error::{Error, Result};
pub use precision::PrecisionPolicy;
