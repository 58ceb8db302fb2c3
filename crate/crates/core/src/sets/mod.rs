//! Convex sets containing the origin in their interior, described through
//! their gauge (Minkowski function) and support function.
//!
//! A [`SetExpr`] is an immutable expression tree. Leaves are polytopes in
//! normalized H-form (`pᵢᵀx <= 1`), V-polytopes, origin-centred ellipsoids
//! `{x : xᵀEx <= 1}` and the unit balls of the 1- and ∞-norms. Inner nodes
//! are intersections, linear preimages `M⁻¹S = {x : Mx ∈ S}`, positive
//! scalings and polars. Gauges compose through
//!
//! * `γ(∩Sᵢ, x) = maxᵢ γ(Sᵢ, x)`
//! * `γ(M⁻¹S, x) = γ(S, Mx)`
//! * `γ(αS, x) = γ(S, x) / α`
//! * `γ(S*, x) = σ(S, x)`
//!
//! so none of these sets is ever built explicitly. Minkowski sums have no node
//! of their own; they appear only as sums of gauges (see [`crate::mlf`]).

mod json;
mod leaves;
pub mod planar;

pub use leaves::{Ellipsoid, HPolytope, VPolytope};

use crate::config::DEFAULTS;
use crate::error::{check_dim, Error, Result};
use crate::numerics::{norm1, norm_inf, solve_lp_raw, LpStatus, Matrix};

/// Upper bound on the number of rows/vertices materialized for a unit ball
/// of the 1-norm (H-form) or ∞-norm (V-form); both grow like `2ⁿ`.
pub(crate) const MAX_BALL_ENUMERATION: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum SetExpr {
    HPolytope(HPolytope),
    VPolytope(VPolytope),
    Ellipsoid(Ellipsoid),
    BallInf(usize),
    Ball1(usize),
    Intersection(Vec<SetExpr>),
    Preimage(Matrix, Box<SetExpr>),
    Scaled(f64, Box<SetExpr>),
    Polar(Box<SetExpr>),
}

impl From<HPolytope> for SetExpr {
    fn from(p: HPolytope) -> Self {
        SetExpr::HPolytope(p)
    }
}

impl From<VPolytope> for SetExpr {
    fn from(p: VPolytope) -> Self {
        SetExpr::VPolytope(p)
    }
}

impl From<Ellipsoid> for SetExpr {
    fn from(e: Ellipsoid) -> Self {
        SetExpr::Ellipsoid(e)
    }
}

impl SetExpr {
    pub fn ball_inf(n: usize) -> Self {
        SetExpr::BallInf(n)
    }

    pub fn ball_1(n: usize) -> Self {
        SetExpr::Ball1(n)
    }

    pub fn dim(&self) -> usize {
        match self {
            SetExpr::HPolytope(p) => p.dim(),
            SetExpr::VPolytope(p) => p.dim(),
            SetExpr::Ellipsoid(e) => e.dim(),
            SetExpr::BallInf(n) | SetExpr::Ball1(n) => *n,
            SetExpr::Intersection(m) => m[0].dim(),
            SetExpr::Preimage(m, _) => m.n_cols(),
            SetExpr::Scaled(_, s) | SetExpr::Polar(s) => s.dim(),
        }
    }

    /// Structural checks: positive dimensions, matching member dimensions,
    /// compatible preimage matrices and positive scalings.
    pub fn validate(&self) -> Result<()> {
        match self {
            SetExpr::BallInf(0) | SetExpr::Ball1(0) => {
                Err(Error::InvalidArgument("ball dimension must be positive".into()))
            }
            SetExpr::HPolytope(_) | SetExpr::VPolytope(_) | SetExpr::Ellipsoid(_) => Ok(()),
            SetExpr::BallInf(_) | SetExpr::Ball1(_) => Ok(()),
            SetExpr::Intersection(members) => {
                let first = members
                    .first()
                    .ok_or_else(|| Error::InvalidArgument("empty intersection".into()))?;
                for m in members {
                    m.validate()?;
                    check_dim(first.dim(), m.dim())?;
                }
                Ok(())
            }
            SetExpr::Preimage(m, inner) => {
                inner.validate()?;
                check_dim(inner.dim(), m.n_rows())
            }
            SetExpr::Scaled(a, inner) => {
                if !(a.is_finite() && *a > 0.0) {
                    return Err(Error::InvalidArgument(format!("scale factor must be positive, got {a}")));
                }
                inner.validate()
            }
            SetExpr::Polar(inner) => inner.validate(),
        }
    }

    /// Gauge `γ(x) = inf{λ >= 0 : x ∈ λS}`.
    pub fn gauge(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        self.gauge_unchecked(x)
    }

    fn gauge_unchecked(&self, x: &[f64]) -> Result<f64> {
        match self {
            SetExpr::HPolytope(p) => Ok(p.gauge(x)),
            SetExpr::VPolytope(p) => p.gauge(x),
            SetExpr::Ellipsoid(e) => Ok(e.gauge(x)),
            SetExpr::BallInf(_) => Ok(norm_inf(x)),
            SetExpr::Ball1(_) => Ok(norm1(x)),
            SetExpr::Intersection(members) => {
                let mut g = 0.0f64;
                for m in members {
                    g = g.max(m.gauge_unchecked(x)?);
                }
                Ok(g)
            }
            SetExpr::Preimage(m, inner) => inner.gauge_unchecked(&m.mul_vec(x)?),
            SetExpr::Scaled(a, inner) => Ok(inner.gauge_unchecked(x)? / a),
            SetExpr::Polar(inner) => inner.support_unchecked(x),
        }
    }

    /// Support function `σ(y) = sup{yᵀx : x ∈ S}`.
    pub fn support(&self, y: &[f64]) -> Result<f64> {
        check_dim(self.dim(), y.len())?;
        self.support_unchecked(y)
    }

    fn support_unchecked(&self, y: &[f64]) -> Result<f64> {
        match self {
            SetExpr::HPolytope(p) => p.support(y),
            SetExpr::VPolytope(p) => Ok(p.support(y)),
            SetExpr::Ellipsoid(e) => e.support(y),
            SetExpr::BallInf(_) => Ok(norm1(y)),
            SetExpr::Ball1(_) => Ok(norm_inf(y)),
            SetExpr::Scaled(a, inner) => Ok(a * inner.support_unchecked(y)?),
            SetExpr::Polar(inner) => inner.gauge_unchecked(y),
            SetExpr::Intersection(_) | SetExpr::Preimage(..) => {
                if let Some(rows) = self.h_rows() {
                    return lp_support(&rows, y);
                }
                if let SetExpr::Preimage(m, inner) = self {
                    if let SetExpr::Ellipsoid(e) = inner.as_ref() {
                        let pulled = Ellipsoid::new(m.transpose().matmul(&e.shape().matmul(m)?)?)
                            .map_err(|_| Error::Unbounded)?;
                        return pulled.support(y);
                    }
                }
                Err(Error::Unsupported(
                    "support of a non-polytopic intersection or preimage".into(),
                ))
            }
        }
    }

    /// Normalized H-form rows when the set is a polytope whose rows are cheap
    /// to list; `None` otherwise.
    pub fn h_rows(&self) -> Option<Vec<Vec<f64>>> {
        match self {
            SetExpr::HPolytope(p) => Some(p.rows().to_vec()),
            SetExpr::BallInf(n) => Some(signed_unit_vectors(*n)),
            SetExpr::Ball1(n) => sign_vectors(*n),
            SetExpr::VPolytope(_) | SetExpr::Ellipsoid(_) => None,
            SetExpr::Intersection(members) => {
                let mut rows = Vec::new();
                for m in members {
                    rows.extend(m.h_rows()?);
                }
                Some(rows)
            }
            SetExpr::Preimage(m, inner) => {
                let rows = inner.h_rows()?;
                rows.iter().map(|r| m.tr_mul_vec(r).ok()).collect()
            }
            SetExpr::Scaled(a, inner) => {
                Some(inner.h_rows()?.into_iter().map(|r| r.into_iter().map(|v| v / a).collect()).collect())
            }
            SetExpr::Polar(inner) => inner.vertex_list(),
        }
    }

    /// A finite point list whose convex hull is the set, when one is cheap to
    /// list; `None` otherwise. Lists may contain non-extreme points.
    pub fn vertex_list(&self) -> Option<Vec<Vec<f64>>> {
        match self {
            SetExpr::VPolytope(p) => Some(p.vertices().to_vec()),
            SetExpr::Ball1(n) => Some(signed_unit_vectors(*n)),
            SetExpr::BallInf(n) => sign_vectors(*n),
            SetExpr::HPolytope(p) if p.dim() <= 2 => planar::vertices_of_rows(p.rows()).ok(),
            SetExpr::Scaled(a, inner) => {
                Some(inner.vertex_list()?.into_iter().map(|v| v.into_iter().map(|x| x * a).collect()).collect())
            }
            SetExpr::Polar(inner) => inner.h_rows(),
            _ => None,
        }
    }

    pub fn is_polytopic(&self) -> bool {
        match self {
            SetExpr::HPolytope(_) | SetExpr::VPolytope(_) | SetExpr::BallInf(_) | SetExpr::Ball1(_) => true,
            SetExpr::Ellipsoid(_) => false,
            SetExpr::Intersection(m) => m.iter().all(SetExpr::is_polytopic),
            SetExpr::Preimage(_, s) | SetExpr::Scaled(_, s) | SetExpr::Polar(s) => s.is_polytopic(),
        }
    }

    /// `x ∈ S` by the defining description of each node, never through a
    /// closed-form gauge. Used by [`gauge_oracle`].
    pub fn member(&self, x: &[f64]) -> Result<bool> {
        check_dim(self.dim(), x.len())?;
        self.member_unchecked(x)
    }

    fn member_unchecked(&self, x: &[f64]) -> Result<bool> {
        Ok(match self {
            SetExpr::HPolytope(p) => p.rows().iter().all(|r| crate::numerics::dot(r, x) <= 1.0),
            SetExpr::VPolytope(p) => {
                // x ∈ conv(V) iff yᵀx <= 1 for all y in the polar {vᵢᵀy <= 1}
                let sol = solve_lp_raw(x, p.vertices(), DEFAULTS.lp_pivot)?;
                sol.status == LpStatus::Optimal && sol.value <= 1.0
            }
            SetExpr::Ellipsoid(e) => e.shape().quad_form(x)? <= 1.0,
            SetExpr::BallInf(_) => x.iter().all(|v| v.abs() <= 1.0),
            SetExpr::Ball1(_) => x.iter().map(|v| v.abs()).sum::<f64>() <= 1.0,
            SetExpr::Intersection(members) => {
                for m in members {
                    if !m.member_unchecked(x)? {
                        return Ok(false);
                    }
                }
                true
            }
            SetExpr::Preimage(m, inner) => inner.member_unchecked(&m.mul_vec(x)?)?,
            SetExpr::Scaled(a, inner) => {
                let y: Vec<f64> = x.iter().map(|v| v / a).collect();
                inner.member_unchecked(&y)?
            }
            SetExpr::Polar(inner) => inner.support_unchecked(x)? <= 1.0,
        })
    }
}

fn signed_unit_vectors(n: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[i] = s;
            out.push(e);
        }
    }
    out
}

fn sign_vectors(n: usize) -> Option<Vec<Vec<f64>>> {
    if n >= 63 || (1usize << n) > MAX_BALL_ENUMERATION {
        return None;
    }
    Some(
        (0..(1usize << n))
            .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 }).collect())
            .collect(),
    )
}

pub(crate) fn lp_support(rows: &[Vec<f64>], y: &[f64]) -> Result<f64> {
    let sol = solve_lp_raw(y, rows, DEFAULTS.lp_pivot)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.value.max(0.0)),
        LpStatus::Unbounded => Err(Error::Unbounded),
    }
}

pub fn gauge(set: &SetExpr, x: &[f64]) -> Result<f64> {
    set.gauge(x)
}

pub fn support(set: &SetExpr, y: &[f64]) -> Result<f64> {
    set.support(y)
}

/// Polar set `{y : yᵀx <= 1 ∀x ∈ S}`.
///
/// Concrete for polytopes (rows and vertices swap), ellipsoids (inverse shape
/// matrix) and the 1/∞ balls; other expressions get a symbolic `Polar` node.
pub fn polar(set: &SetExpr) -> Result<SetExpr> {
    Ok(match set {
        SetExpr::HPolytope(p) => {
            if !p.is_bounded()? {
                return Err(Error::OriginNotInterior("polar of an unbounded polytope".into()));
            }
            SetExpr::VPolytope(VPolytope::new(p.dim(), p.rows().to_vec())?)
        }
        SetExpr::VPolytope(p) => {
            let h = HPolytope::new(p.dim(), p.vertices().to_vec())?;
            if !h.is_bounded()? {
                return Err(Error::OriginNotInterior("origin is not inside the vertex hull".into()));
            }
            SetExpr::HPolytope(h)
        }
        SetExpr::Ellipsoid(e) => SetExpr::Ellipsoid(e.polar()?),
        SetExpr::BallInf(n) => SetExpr::Ball1(*n),
        SetExpr::Ball1(n) => SetExpr::BallInf(*n),
        SetExpr::Polar(inner) => inner.as_ref().clone(),
        SetExpr::Scaled(a, inner) => SetExpr::Scaled(1.0 / a, Box::new(polar(inner)?)),
        SetExpr::Intersection(_) | SetExpr::Preimage(..) => SetExpr::Polar(Box::new(set.clone())),
    })
}

/// `M⁻¹S = {x : Mx ∈ S}`.
pub fn preimage(m: &Matrix, set: &SetExpr) -> Result<SetExpr> {
    check_dim(set.dim(), m.n_rows())?;
    Ok(match set {
        SetExpr::HPolytope(p) => {
            let rows = p.rows().iter().map(|r| m.tr_mul_vec(r)).collect::<Result<Vec<_>>>()?;
            SetExpr::HPolytope(HPolytope::new(m.n_cols(), rows)?)
        }
        _ => SetExpr::Preimage(m.clone(), Box::new(set.clone())),
    })
}

pub fn intersect(sets: &[SetExpr]) -> Result<SetExpr> {
    let first = sets.first().ok_or_else(|| Error::InvalidArgument("empty intersection".into()))?;
    let mut flat = Vec::with_capacity(sets.len());
    for s in sets {
        check_dim(first.dim(), s.dim())?;
        match s {
            SetExpr::Intersection(inner) => flat.extend(inner.iter().cloned()),
            other => flat.push(other.clone()),
        }
    }
    if flat.len() == 1 {
        return Ok(flat.pop().unwrap());
    }
    if flat.iter().all(|s| matches!(s, SetExpr::HPolytope(_))) {
        let rows = flat
            .iter()
            .flat_map(|s| match s {
                SetExpr::HPolytope(p) => p.rows().to_vec(),
                _ => unreachable!(),
            })
            .collect();
        return Ok(SetExpr::HPolytope(HPolytope::new(first.dim(), rows)?));
    }
    Ok(SetExpr::Intersection(flat))
}

/// `αS` for `α > 0`.
pub fn scale(alpha: f64, set: &SetExpr) -> Result<SetExpr> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("scale factor must be positive, got {alpha}")));
    }
    if alpha == 1.0 {
        return Ok(set.clone());
    }
    Ok(match set {
        SetExpr::HPolytope(p) => SetExpr::HPolytope(p.scaled(alpha)),
        SetExpr::VPolytope(p) => SetExpr::VPolytope(p.scaled(alpha)),
        SetExpr::Ellipsoid(e) => SetExpr::Ellipsoid(e.scaled(alpha)?),
        SetExpr::Scaled(b, inner) => {
            let ab = alpha * b;
            if ab == 1.0 {
                inner.as_ref().clone()
            } else {
                SetExpr::Scaled(ab, inner.clone())
            }
        }
        _ => SetExpr::Scaled(alpha, Box::new(set.clone())),
    })
}

/// `γ(S, x) <= 1 + tol`.
pub fn contains(set: &SetExpr, x: &[f64], tol: f64) -> Result<bool> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument("tolerance must be nonnegative".into()));
    }
    Ok(set.gauge(x)? <= 1.0 + tol)
}

/// Gauge by bisection on `λ` using only the membership test `x ∈ λS`.
///
/// Independent of the closed-form rules in [`SetExpr::gauge`]; the returned
/// value is within `tol` of the true gauge.
pub fn gauge_oracle(set: &SetExpr, x: &[f64], tol: f64) -> Result<f64> {
    check_dim(set.dim(), x.len())?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("oracle tolerance must be positive".into()));
    }
    if x.iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }
    let inside = |lambda: f64| -> Result<bool> {
        let y: Vec<f64> = x.iter().map(|v| v / lambda).collect();
        set.member_unchecked(&y)
    };
    let mut lo = 0.0;
    let mut hi = 1.0;
    while !inside(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::Unbounded);
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inside(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests;
