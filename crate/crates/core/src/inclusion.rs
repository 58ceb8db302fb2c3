//! Certified image inclusions `MX ⊆ Y` and the minimal-power search built on
//! them.
//!
//! The certificate depends on how `X` and `Y` are represented:
//!
//! * ellipsoid into ellipsoid: `MᵀE_Y M - E_X ⪯ 0`, read off the largest
//!   eigenvalue;
//! * anything with a computable support function into a polytope
//!   `{yⱼᵀx <= 1}`: `maxⱼ σ_X(Mᵀyⱼ) <= 1`, one LP or closed form per row;
//! * a point-listed polytope into anything with a gauge: `maxᵥ γ_Y(Mv) <= 1`;
//! * `Y` an intersection: the inclusion must hold into every member (exact);
//! * `X` an intersection of polytopes and ellipsoids: no exact finite test is
//!   available here, so a member of `X` that maps into `Y` is used as a
//!   sufficient certificate and the report says so.
//!
//! Polar pairs are handled by transposition, `M P* ⊆ R*  ⇔  MᵀR ⊆ P`.

use serde::{Deserialize, Serialize};

use crate::config::DEFAULTS;
use crate::error::{check_dim, Error, Result};
use crate::numerics::{spectral_radius, sym_eig_max, Matrix};
use crate::sets::{polar, scale, Ellipsoid, SetExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InclusionMethod {
    EllipsoidEigen,
    PolytopeLp,
    IntersectionSufficient,
}

/// Outcome of an inclusion certification.
///
/// `margin` is the most violated quantity of the chosen certificate: the
/// largest eigenvalue of `MᵀE_Y M - E_X`, or `max σ - 1` / `max γ - 1` for the
/// polytope routes. The inclusion is reported as holding iff `margin <= tol`,
/// so a margin in `(0, tol]` is a borderline pass that stays visible here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub holds: bool,
    pub method: InclusionMethod,
    pub margin: f64,
}

#[derive(Debug, Clone, Copy)]
struct Verdict {
    margin: f64,
    method: InclusionMethod,
}

const MAX_DEPTH: usize = 8;

/// Decide `MX ⊆ Y`.
pub fn certify_image_inclusion(m: &Matrix, x: &SetExpr, y: &SetExpr, tol: f64) -> Result<InclusionReport> {
    check_dim(x.dim(), m.n_cols())?;
    check_dim(y.dim(), m.n_rows())?;
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument("inclusion tolerance must be nonnegative".into()));
    }
    let v = violation(m, x, y, 0)?;
    Ok(InclusionReport { holds: v.margin <= tol, method: v.method, margin: v.margin })
}

fn unsupported(x: &SetExpr, y: &SetExpr) -> Error {
    Error::Unsupported(format!(
        "no inclusion certificate for {} into {}",
        kind(x),
        kind(y)
    ))
}

fn kind(s: &SetExpr) -> &'static str {
    match s {
        SetExpr::HPolytope(_) => "hpolytope",
        SetExpr::VPolytope(_) => "vpolytope",
        SetExpr::Ellipsoid(_) => "ellipsoid",
        SetExpr::BallInf(_) => "ball-inf",
        SetExpr::Ball1(_) => "ball-1",
        SetExpr::Intersection(_) => "intersection",
        SetExpr::Preimage(..) => "preimage",
        SetExpr::Scaled(..) => "scaled",
        SetExpr::Polar(_) => "polar",
    }
}

/// Concrete polar, or `None` when polarity would only wrap the set.
fn concrete_polar(s: &SetExpr) -> Option<SetExpr> {
    match polar(s) {
        Ok(SetExpr::Polar(_)) | Err(_) => None,
        Ok(p) => Some(p),
    }
}

fn violation(m: &Matrix, x: &SetExpr, y: &SetExpr, depth: usize) -> Result<Verdict> {
    if depth > MAX_DEPTH {
        return Err(unsupported(x, y));
    }
    let next = depth + 1;

    // target side
    match y {
        SetExpr::Intersection(members) => {
            let mut worst: Option<Verdict> = None;
            let mut sufficient = false;
            for member in members {
                let v = violation(m, x, member, next)?;
                sufficient |= v.method == InclusionMethod::IntersectionSufficient;
                if worst.as_ref().is_none_or(|w| v.margin > w.margin) {
                    worst = Some(v);
                }
            }
            let mut w = worst.expect("intersections are nonempty");
            if sufficient {
                w.method = InclusionMethod::IntersectionSufficient;
            }
            return Ok(w);
        }
        SetExpr::Scaled(c, inner) => return violation(&m.scaled(1.0 / c), x, inner, next),
        SetExpr::Preimage(n, inner) => return violation(&n.matmul(m)?, x, inner, next),
        SetExpr::Polar(inner) => {
            if let Some(p) = concrete_polar(inner) {
                return violation(m, x, &p, next);
            }
            return into_symbolic_polar(m, x, inner, y, next);
        }
        _ => {}
    }

    // source side
    match x {
        SetExpr::Scaled(a, inner) => return violation(&m.scaled(*a), inner, y, next),
        SetExpr::Polar(inner) => {
            if let Some(p) = concrete_polar(inner) {
                return violation(m, &p, y, next);
            }
        }
        SetExpr::Preimage(n, inner) => {
            if let SetExpr::Ellipsoid(e) = inner.as_ref() {
                if let Ok(pulled) = Ellipsoid::new(n.transpose().matmul(&e.shape().matmul(n)?)?) {
                    return violation(m, &SetExpr::Ellipsoid(pulled), y, next);
                }
            }
        }
        _ => {}
    }

    if let (SetExpr::Ellipsoid(ex), SetExpr::Ellipsoid(ey)) = (x, y) {
        let s = m.transpose().matmul(&ey.shape().matmul(m)?)?.sub(ex.shape())?;
        return Ok(Verdict { margin: sym_eig_max(&s)?, method: InclusionMethod::EllipsoidEigen });
    }

    if let Some(rows) = y.h_rows() {
        match support_route(m, x, &rows) {
            Ok(margin) => return Ok(Verdict { margin, method: InclusionMethod::PolytopeLp }),
            Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(e),
        }
    }

    if let Some(verts) = x.vertex_list() {
        let margin = vertex_route(m, &verts, y)?;
        return Ok(Verdict { margin, method: InclusionMethod::PolytopeLp });
    }

    if let SetExpr::Intersection(members) = x {
        let mut best: Option<f64> = None;
        for member in members {
            match violation(m, member, y, next) {
                Ok(v) => best = Some(best.map_or(v.margin, |b| b.min(v.margin))),
                Err(Error::Unsupported(_)) => {}
                Err(e) => return Err(e),
            }
        }
        if let Some(margin) = best {
            return Ok(Verdict { margin, method: InclusionMethod::IntersectionSufficient });
        }
        return Err(unsupported(x, y));
    }

    // M X ⊆ Y  ⇔  Mᵀ Y* ⊆ X*
    if let (Some(px), Some(py)) = (concrete_polar(x), concrete_polar(y)) {
        return violation(&m.transpose(), &py, &px, next);
    }
    Err(unsupported(x, y))
}

/// `Y = R*` with no concrete form for `R*`.
fn into_symbolic_polar(m: &Matrix, x: &SetExpr, r: &SetExpr, y: &SetExpr, next: usize) -> Result<Verdict> {
    match x {
        SetExpr::Scaled(a, inner) => return violation(&m.scaled(*a), inner, y, next),
        // M P* ⊆ R*  ⇔  Mᵀ R ⊆ P
        SetExpr::Polar(p) => return violation(&m.transpose(), r, p, next),
        _ => {}
    }
    if let Some(verts) = x.vertex_list() {
        let margin = vertex_route(m, &verts, y)?;
        return Ok(Verdict { margin, method: InclusionMethod::PolytopeLp });
    }
    if let Some(px) = concrete_polar(x) {
        return violation(&m.transpose(), r, &px, next);
    }
    Err(unsupported(x, y))
}

fn support_route(m: &Matrix, x: &SetExpr, rows: &[Vec<f64>]) -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    for row in rows {
        let dir = m.tr_mul_vec(row)?;
        worst = worst.max(x.support(&dir)?);
    }
    Ok(worst - 1.0)
}

fn vertex_route(m: &Matrix, verts: &[Vec<f64>], y: &SetExpr) -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    for v in verts {
        worst = worst.max(y.gauge(&m.mul_vec(v)?)?);
    }
    Ok(worst - 1.0)
}

/// Result of [`minimal_power_k`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSearch {
    pub k: usize,
    pub report: InclusionReport,
}

/// Least `k` in `1..=cap` with `MᵏX ⊆ contraction·X`.
///
/// Powers are accumulated one multiplication per candidate.
pub fn minimal_power_k(m: &Matrix, x: &SetExpr, contraction: f64, cap: usize) -> Result<PowerSearch> {
    minimal_power_k_with_tol(m, x, contraction, cap, DEFAULTS.inclusion)
}

pub fn minimal_power_k_with_tol(
    m: &Matrix,
    x: &SetExpr,
    contraction: f64,
    cap: usize,
    tol: f64,
) -> Result<PowerSearch> {
    if !m.is_square() {
        return Err(Error::InvalidArgument("power search needs a square matrix".into()));
    }
    check_dim(x.dim(), m.n_rows())?;
    if !(contraction > 0.0 && contraction <= 1.0) {
        return Err(Error::Precondition(format!("contraction must lie in (0, 1], got {contraction}")));
    }
    if cap == 0 {
        return Err(Error::Precondition("power cap must be at least 1".into()));
    }
    let rho = spectral_radius(m, DEFAULTS.eigen)?;
    if rho >= 1.0 {
        return Err(Error::Precondition(format!("spectral radius {rho} is not below 1")));
    }
    let target = scale(contraction, x)?;
    let mut power = m.clone();
    let mut best = f64::INFINITY;
    for k in 1..=cap {
        let report = certify_image_inclusion(&power, x, &target, tol)?;
        if report.holds {
            return Ok(PowerSearch { k, report });
        }
        best = best.min(report.margin);
        if k < cap {
            power = m.matmul(&power)?;
        }
    }
    Err(Error::CapExhausted { cap, best_margin: best })
}
