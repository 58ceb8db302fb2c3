//! Robust positively invariant sets as polars of Minkowski–Lyapunov sets.
//!
//! If `S ⊆ G(S)` for the dynamics `A` and base set `Q`, then `Z = S*`
//! satisfies `AᵀZ ⊕ Q* ⊆ Z`; the maximal fixed point gives the minimal such
//! `Z`. `Z` is kept implicit through `σ_Z = γ_S`.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::mlf::MlfCertificate;
use crate::numerics::Matrix;
use crate::sampling::{normalized, unit_sphere};
use crate::sets::{HPolytope, SetExpr};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RpiSource {
    Certificate(MlfCertificate),
    Polytope(HPolytope),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RpiKind {
    /// Polar of a certificate set: invariant, generally not minimal.
    Invariant,
    /// Polar of a fixed point of the set recursion.
    Minimal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RpiSet {
    pub source: RpiSource,
    pub kind: RpiKind,
}

pub fn polar_rpi(source: RpiSource) -> RpiSet {
    let kind = match source {
        RpiSource::Certificate(_) => RpiKind::Invariant,
        RpiSource::Polytope(_) => RpiKind::Minimal,
    };
    RpiSet { source, kind }
}

impl RpiSet {
    pub fn dim(&self) -> usize {
        match &self.source {
            RpiSource::Certificate(c) => c.dim(),
            RpiSource::Polytope(p) => p.dim(),
        }
    }

    /// `σ_Z(y) = γ_S(y)`.
    pub fn support(&self, y: &[f64]) -> Result<f64> {
        check_dim(self.dim(), y.len())?;
        match &self.source {
            RpiSource::Certificate(c) => c.eval(y),
            RpiSource::Polytope(p) => Ok(p.gauge(y)),
        }
    }

    /// Explicit `Z` for polytope sources (a point-listed polar node).
    pub fn as_set(&self) -> Result<SetExpr> {
        match &self.source {
            RpiSource::Polytope(p) => Ok(SetExpr::Polar(Box::new(SetExpr::HPolytope(p.clone())))),
            RpiSource::Certificate(c) => match c.explicit_hrep() {
                Ok(h) => Ok(SetExpr::Polar(Box::new(SetExpr::HPolytope(h)))),
                Err(_) => Err(Error::Unsupported("certificate set has no explicit form".into())),
            },
        }
    }

    fn facet_directions(&self) -> Vec<Vec<f64>> {
        match &self.source {
            RpiSource::Polytope(p) => p.rows().iter().filter_map(|r| normalized(r)).collect(),
            RpiSource::Certificate(_) => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RpiReport {
    /// `max_y σ_Z(Ay) + σ_W(y) - σ_Z(y)`; `<= 0` means `AᵀZ ⊕ W ⊆ Z` on the
    /// sampled directions.
    pub max_violation: f64,
    /// `max_y |σ_Z(Ay) + σ_W(y) - σ_Z(y)|`; zero for `AᵀZ ⊕ W = Z`.
    pub equation_residual: f64,
    pub directions: usize,
    pub seed: u64,
}

/// Check `AᵀZ ⊕ W ⊆ Z` through support functions over `directions` seeded
/// unit vectors plus the normalized facet rows of `S` and `W` when known.
pub fn verify_rpi(z: &RpiSet, a: &Matrix, w: &SetExpr, directions: usize, seed: u64) -> Result<RpiReport> {
    if directions == 0 {
        return Err(Error::InvalidArgument("at least one direction is required".into()));
    }
    if !a.is_square() {
        return Err(Error::InvalidArgument("A must be square".into()));
    }
    check_dim(z.dim(), a.n_rows())?;
    check_dim(z.dim(), w.dim())?;
    let mut dirs = unit_sphere(z.dim(), directions, seed);
    dirs.extend(z.facet_directions());
    if let Some(rows) = w.h_rows() {
        dirs.extend(rows.iter().filter_map(|r| normalized(r)));
    }
    let mut max_violation = f64::NEG_INFINITY;
    let mut equation_residual = 0.0f64;
    for y in &dirs {
        let r = z.support(&a.mul_vec(y)?)? + w.support(y)? - z.support(y)?;
        max_violation = max_violation.max(r);
        equation_residual = equation_residual.max(r.abs());
    }
    Ok(RpiReport { max_violation, equation_residual, directions, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed_point::iterate;
    use crate::mlf::construct_max;
    use crate::sets::{polar, support};

    #[test]
    fn scalar_fundamental_set() {
        let z = polar_rpi(RpiSource::Polytope(HPolytope::interval(0.5).unwrap()));
        assert_eq!(z.kind, RpiKind::Minimal);
        assert_eq!(z.support(&[1.0]).unwrap(), 2.0);
        assert_eq!(support(&z.as_set().unwrap(), &[-1.0]).unwrap(), 2.0);
        let w = SetExpr::HPolytope(HPolytope::interval(1.0).unwrap());
        let r = verify_rpi(&z, &Matrix::scalar(0.5), &w, 16, 0).unwrap();
        assert_eq!(r.max_violation, 0.0);
        assert_eq!(r.equation_residual, 0.0);
    }

    #[test]
    fn certificate_polar_is_invariant() {
        let a = Matrix::from_rows(&[[1.0, 1.0], [-0.72, -0.7]]).unwrap();
        let q = SetExpr::Ball1(2);
        let cert = construct_max(&a, &q, None, 1000).unwrap();
        let z = polar_rpi(RpiSource::Certificate(cert));
        assert_eq!(z.kind, RpiKind::Invariant);
        let r = verify_rpi(&z, &a, &polar(&q).unwrap(), 2000, 3).unwrap();
        assert!(r.max_violation <= 1e-8);
        assert!(r.equation_residual > 0.0);
    }

    #[test]
    fn support_identity_on_polytopes() {
        let s = HPolytope::from_rows(vec![vec![1.0, 0.3], vec![-0.5, 1.0], vec![-0.7, -0.9], vec![0.6, -1.2]]).unwrap();
        let z = polar_rpi(RpiSource::Polytope(s.clone()));
        let zs = z.as_set().unwrap();
        for y in unit_sphere(2, 200, 4) {
            assert!((support(&zs, &y).unwrap() - s.gauge(&y)).abs() <= 1e-10);
        }
    }

    #[test]
    fn fixed_point_polar_satisfies_equation() {
        let a = Matrix::from_rows(&[[0.5, 0.4], [-0.3, 0.6]]).unwrap();
        let q = HPolytope::from_rows(SetExpr::BallInf(2).h_rows().unwrap()).unwrap();
        let fp = iterate(&a, &q, 1e-10, 200).unwrap();
        let z = polar_rpi(RpiSource::Polytope(fp.s));
        let r = verify_rpi(&z, &a, &SetExpr::Ball1(2), 1000, 1).unwrap();
        assert!(r.equation_residual <= 1e-7, "{}", r.equation_residual);
    }

    #[test]
    fn dimension_checks() {
        let z = polar_rpi(RpiSource::Polytope(HPolytope::interval(1.0).unwrap()));
        assert!(verify_rpi(&z, &Matrix::identity(2), &SetExpr::Ball1(2), 4, 0).is_err());
        assert!(verify_rpi(&z, &Matrix::scalar(0.5), &SetExpr::Ball1(1), 0, 0).is_err());
    }

    #[test]
    fn json_embeds_source() {
        let z = polar_rpi(RpiSource::Polytope(HPolytope::interval(0.5).unwrap()));
        let s = serde_json::to_string(&z).unwrap();
        assert!(s.contains("\"polytope\"") && s.contains("\"minimal\""));
        assert_eq!(serde_json::from_str::<RpiSet>(&s).unwrap(), z);
    }
}
