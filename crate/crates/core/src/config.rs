//! Numerical tolerances and iteration limits shared by every module.
//!
//! All comparisons below are absolute unless the field name says otherwise.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Slack on `gauge(x) <= 1` membership tests.
    pub membership: f64,
    /// Slack on set-inclusion margins. A margin `<= inclusion` counts as holding.
    pub inclusion: f64,
    /// Relative deflation threshold of the Hessenberg QR eigenvalue iteration.
    pub eigen: f64,
    /// Pivot threshold of the simplex tableau (relative to unit-normalized rows).
    pub lp_pivot: f64,
    /// Largest admissible condition number when inverting an ellipsoid shape matrix.
    pub max_condition: f64,
    /// Stopping tolerance of the fixed-point set recursion.
    pub fixed_point: f64,
    /// Hausdorff fallback tolerance of the set recursion.
    pub hausdorff: f64,
    /// Default cap of the minimal-power search.
    pub power_cap: usize,
    /// Default iteration cap of the set recursion.
    pub max_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        DEFAULTS
    }
}

pub const DEFAULTS: Tolerances = Tolerances {
    membership: 1e-9,
    inclusion: 1e-9,
    eigen: 1e-12,
    lp_pivot: 1e-12,
    max_condition: 1e12,
    fixed_point: 1e-9,
    hausdorff: 1e-8,
    power_cap: 10_000,
    max_iter: 1000,
};
