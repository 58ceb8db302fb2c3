//! The G-map `G(S) = {x : γ_S(Ax) + γ_Q(x) <= 1}` on H-polytopes and the
//! recursion `S_{k+1} = G(S_k)`, `S_0 = Q`, whose limit is the unit ball of the
//! fundamental Minkowski–Lyapunov function `Σᵢ γ_Q(Aⁱx)`.
//!
//! Row counts multiply by `|Q|` per step before redundancy removal, so the
//! recursion is meant for small dimensions (roughly `n <= 6`).

use serde::{Deserialize, Serialize};

use crate::config::DEFAULTS;
use crate::error::{check_dim, Error, Result};
use crate::inclusion::certify_image_inclusion;
use crate::numerics::{dot, norm2, solve_lp_raw, spectral_radius, LpStatus, Matrix};
use crate::sampling::{normalized, unit_sphere};
use crate::sets::{planar, HPolytope, SetExpr};

/// Rows `sᵢᵀA + qⱼᵀ` for every pair, reduced.
pub fn g_map(s: &HPolytope, a: &Matrix, q: &HPolytope) -> Result<HPolytope> {
    g_map_with_tol(s, a, q, DEFAULTS.membership)
}

fn g_map_with_tol(s: &HPolytope, a: &Matrix, q: &HPolytope, tol: f64) -> Result<HPolytope> {
    if !a.is_square() {
        return Err(Error::InvalidArgument("A must be square".into()));
    }
    check_dim(a.n_rows(), s.dim())?;
    check_dim(a.n_rows(), q.dim())?;
    let pulled: Vec<Vec<f64>> = s.rows().iter().map(|r| a.tr_mul_vec(r)).collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(pulled.len() * q.n_rows());
    for p in &pulled {
        for qr in q.rows() {
            rows.push(p.iter().zip(qr).map(|(x, y)| x + y).collect::<Vec<f64>>());
        }
    }
    reduce_hrep(&HPolytope::new(s.dim(), rows)?, tol)
}

/// Drop rows that are implied by the remaining ones.
///
/// Rows are visited in input order; a row survives iff maximizing it over the
/// other rows still in play exceeds `1 + tol`. Of a group of duplicates the
/// last copy survives.
pub fn reduce_hrep(p: &HPolytope, tol: f64) -> Result<HPolytope> {
    if !p.is_bounded()? {
        return Err(Error::Unbounded);
    }
    let rows = p.rows();
    let mut keep = vec![true; rows.len()];
    for i in 0..rows.len() {
        let others: Vec<&Vec<f64>> = rows.iter().enumerate().filter(|&(j, _)| j != i && keep[j]).map(|(_, r)| r).collect();
        if others.is_empty() {
            continue;
        }
        let sol = solve_lp_raw(&rows[i], &others, DEFAULTS.lp_pivot)?;
        if sol.status == LpStatus::Optimal && sol.value <= 1.0 + tol {
            keep[i] = false;
        }
    }
    let kept = rows.iter().zip(&keep).filter(|(_, &k)| k).map(|(r, _)| r.clone()).collect();
    HPolytope::new(p.dim(), kept)
}

/// Support-function distance estimate between two bounded polytopes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hausdorff {
    pub distance: f64,
    /// `false` when `distance` is only a lower bound (sampled directions).
    pub exact: bool,
}

/// `max_u |σ_P(u) - σ_R(u)|` over normalized rows of both bodies plus
/// `directions` seeded random unit vectors.
///
/// In one and two dimensions the candidate set also contains every normalized
/// vertex difference, which makes the maximum exact.
pub fn hausdorff(p: &HPolytope, r: &HPolytope, directions: usize, seed: u64) -> Result<Hausdorff> {
    check_dim(p.dim(), r.dim())?;
    let mut dirs: Vec<Vec<f64>> = p.rows().iter().chain(r.rows()).filter_map(|v| normalized(v)).collect();
    dirs.extend(unit_sphere(p.dim(), directions, seed));
    if p.dim() > 2 {
        let mut worst = 0.0f64;
        for u in &dirs {
            worst = worst.max((p.support(u)? - r.support(u)?).abs());
        }
        return Ok(Hausdorff { distance: worst, exact: false });
    }
    let vp = planar::vertices_of_rows(p.rows())?;
    let vr = planar::vertices_of_rows(r.rows())?;
    for a in &vp {
        for b in &vr {
            let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            if norm2(&d) > 1e-15 {
                dirs.extend(normalized(&d));
            }
        }
    }
    if p.dim() == 1 {
        dirs.push(vec![1.0]);
        dirs.push(vec![-1.0]);
    }
    let vsupport = |vs: &[Vec<f64>], u: &[f64]| vs.iter().map(|v| dot(v, u)).fold(f64::NEG_INFINITY, f64::max);
    let worst = dirs.iter().map(|u| (vsupport(&vp, u) - vsupport(&vr, u)).abs()).fold(0.0, f64::max);
    Ok(Hausdorff { distance: worst, exact: true })
}

/// Diagnostics for one recursion step `S_k -> S_{k+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepTrace {
    /// `k`.
    pub iteration: usize,
    /// Row count of `S_{k+1}` after reduction.
    pub rows: usize,
    /// Violation margin of `S_k ⊆ S_{k+1}`.
    pub inclusion_margin: f64,
    /// Distance between `S_k` and `S_{k+1}`.
    pub hausdorff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointResult {
    #[serde(rename = "S")]
    pub s: HPolytope,
    /// Index `k` of the returned iterate `S_k`.
    pub iterations: usize,
    /// `S_k ⊆ S_{k+1}` certified, so `S_k` is the limit up to `tol`.
    pub finitely_determined: bool,
    /// Stopping rule met (inclusion or distance) before `max_iter`.
    pub converged: bool,
    pub final_hausdorff: f64,
    pub trace: Vec<StepTrace>,
}

const TRACE_DIRECTIONS: usize = 64;

/// Run `S_{k+1} = G(S_k)` from `S_0 = Q`.
///
/// Stops at the first `k` with `S_k ⊆ S_{k+1}` certified to `tol`
/// (finitely determined, `S_k` returned), else at the first `k` whose step
/// moves the set by at most `tol` in the Hausdorff sense, else after
/// `max_iter` steps with `converged = false`.
pub fn iterate(a: &Matrix, q: &HPolytope, tol: f64, max_iter: usize) -> Result<FixedPointResult> {
    if !a.is_square() {
        return Err(Error::InvalidArgument("A must be square".into()));
    }
    check_dim(a.n_rows(), q.dim())?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let rho = spectral_radius(a, DEFAULTS.eigen)?;
    if rho >= 1.0 {
        return Err(Error::Precondition(format!("spectral radius {rho} is not below 1")));
    }
    let q = reduce_hrep(q, DEFAULTS.membership)?;
    let id = Matrix::identity(q.dim());
    let mut current = q.clone();
    let mut trace = Vec::new();
    for k in 0..max_iter {
        let next = g_map_with_tol(&current, a, &q, DEFAULTS.membership)?;
        let inc = certify_image_inclusion(
            &id,
            &SetExpr::HPolytope(current.clone()),
            &SetExpr::HPolytope(next.clone()),
            tol,
        )?;
        let h = hausdorff(&current, &next, TRACE_DIRECTIONS, k as u64)?;
        trace.push(StepTrace { iteration: k, rows: next.n_rows(), inclusion_margin: inc.margin, hausdorff: h.distance });
        if inc.holds {
            return Ok(FixedPointResult {
                s: current,
                iterations: k,
                finitely_determined: true,
                converged: true,
                final_hausdorff: h.distance,
                trace,
            });
        }
        if h.distance <= tol {
            return Ok(FixedPointResult {
                s: next,
                iterations: k + 1,
                finitely_determined: false,
                converged: true,
                final_hausdorff: h.distance,
                trace,
            });
        }
        current = next;
    }
    let final_hausdorff = trace.last().map_or(f64::INFINITY, |t| t.hausdorff);
    Ok(FixedPointResult {
        s: current,
        iterations: max_iter,
        finitely_determined: false,
        converged: false,
        final_hausdorff,
        trace,
    })
}

/// Largest `|γ_S(Ax) + γ_Q(x) - γ_S(x)|` over seeded unit-sphere samples.
pub fn equation_residual(s: &SetExpr, a: &Matrix, q: &SetExpr, samples: usize, seed: u64) -> Result<f64> {
    check_dim(a.n_rows(), s.dim())?;
    check_dim(a.n_rows(), q.dim())?;
    let mut worst = 0.0f64;
    for x in unit_sphere(s.dim(), samples, seed) {
        let r = s.gauge(&a.mul_vec(&x)?)? + q.gauge(&x)? - s.gauge(&x)?;
        worst = worst.max(r.abs());
    }
    Ok(worst)
}
