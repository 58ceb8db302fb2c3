//! Dense linear algebra and linear programming kernels.

mod eigen;
mod lp;
mod matrix;

pub use eigen::{eigenvalues, spectral_radius, sym_eig_max, symmetric_eigen};
pub use lp::{solve_lp, LpProblem, LpSolution, LpStatus};
pub(crate) use lp::solve_lp_raw;
pub use matrix::{dot, mat_pow, norm1, norm2, norm_inf, Matrix};
