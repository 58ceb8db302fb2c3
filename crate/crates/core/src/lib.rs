//! Minkowski–Lyapunov functions and robust positively invariant sets for
//! linear dynamics `x⁺ = Ax`.
//!
//! Everything is expressed through gauge (Minkowski) and support functions of
//! convex sets that contain the origin in their interior. Sets are kept in
//! implicit form ([`sets::SetExpr`]) so that evaluation and certification work
//! in any dimension; explicit polytopes are only built by the fixed-point
//! recursion in [`fixed_point`] and by 2-D export helpers.

pub mod bench;
pub mod cli;
pub mod config;
pub mod duality;
pub mod error;
pub mod fixed_point;
pub mod numerics;
pub mod inclusion;
pub mod mlf;
pub mod sampling;
pub mod sets;

pub use config::Tolerances;
pub use error::{Error, ErrorClass, Result};
pub use numerics::Matrix;
pub use sets::{Ellipsoid, HPolytope, SetExpr, VPolytope};
