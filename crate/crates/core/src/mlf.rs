//! Implicitly represented Minkowski–Lyapunov functions.
//!
//! Two parameterizations are supported, both built from a C-set `Q` and a
//! certified power inclusion:
//!
//! * max form: `V(x) = (1-γ)⁻¹ max_{i<k} γ_Q((A/γ)ⁱx)` with `(A/γ)ᵏQ ⊆ Q`,
//!   `γ ∈ (ρ(A), 1)`;
//! * sum form: `V(x) = (1-γ)⁻¹ Σ_{i<k} γ_Q(Aⁱx)` with `(Aᵀ)ᵏQ* ⊆ γQ*`,
//!   `γ ∈ (0, 1)`.
//!
//! In both cases `V(Ax) + γ_Q(x) <= V(x)` for every `x`.

use serde::{Deserialize, Serialize};

use crate::config::DEFAULTS;
use crate::error::{check_dim, Error, Result};
use crate::inclusion::{minimal_power_k, InclusionReport};
use crate::numerics::{spectral_radius, Matrix};
use crate::sampling::unit_sphere;
use crate::sets::{polar, HPolytope, SetExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MlfForm {
    Max,
    Sum,
}

impl std::str::FromStr for MlfForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(MlfForm::Max),
            "sum" => Ok(MlfForm::Sum),
            other => Err(Error::InvalidArgument(format!("unknown form {other:?}, expected max or sum"))),
        }
    }
}

/// A self-contained certificate: dynamics, base set and the certified `(γ, k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CertificateJson")]
pub struct MlfCertificate {
    pub form: MlfForm,
    pub gamma: f64,
    pub k: usize,
    pub rho: f64,
    #[serde(rename = "A")]
    pub a: Matrix,
    #[serde(rename = "Q")]
    pub q: SetExpr,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateJson {
    form: MlfForm,
    gamma: f64,
    k: usize,
    rho: f64,
    #[serde(rename = "A")]
    a: Matrix,
    #[serde(rename = "Q")]
    q: SetExpr,
}

impl TryFrom<CertificateJson> for MlfCertificate {
    type Error = Error;

    fn try_from(j: CertificateJson) -> Result<Self> {
        let cert = MlfCertificate { form: j.form, gamma: j.gamma, k: j.k, rho: j.rho, a: j.a, q: j.q };
        cert.check_shape()?;
        Ok(cert)
    }
}

impl MlfCertificate {
    pub fn dim(&self) -> usize {
        self.a.n_rows()
    }

    /// Structural checks only; the inclusion itself is not re-certified.
    fn check_shape(&self) -> Result<()> {
        if !self.a.is_square() {
            return Err(Error::InvalidArgument("A must be square".into()));
        }
        check_dim(self.a.n_rows(), self.q.dim())?;
        if self.k == 0 {
            return Err(Error::InvalidArgument("k must be positive".into()));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::InvalidArgument(format!("gamma {} not in (0, 1)", self.gamma)));
        }
        Ok(())
    }

    /// `V(x)`; the orbit is generated one matrix-vector product at a time.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        let mut p = x.to_vec();
        let mut acc = 0.0f64;
        for i in 0..self.k {
            if i > 0 {
                p = self.a.mul_vec(&p)?;
                if self.form == MlfForm::Max {
                    p.iter_mut().for_each(|v| *v /= self.gamma);
                }
            }
            let g = self.q.gauge(&p)?;
            acc = match self.form {
                MlfForm::Max => acc.max(g),
                MlfForm::Sum => acc + g,
            };
        }
        Ok(acc / (1.0 - self.gamma))
    }

    /// Largest value of `V(Ax) + γ_Q(x) - V(x)` over seeded unit-sphere samples.
    pub fn verify_inequality(&self, samples: usize, seed: u64) -> Result<InequalityReport> {
        if samples == 0 {
            return Err(Error::InvalidArgument("at least one sample is required".into()));
        }
        let mut best = InequalityReport { max_violation: f64::NEG_INFINITY, argmax: Vec::new() };
        for x in unit_sphere(self.dim(), samples, seed) {
            let r = self.residual(&x)?;
            if r > best.max_violation {
                best = InequalityReport { max_violation: r, argmax: x };
            }
        }
        Ok(best)
    }

    /// `V(Ax) + γ_Q(x) - V(x)`.
    pub fn residual(&self, x: &[f64]) -> Result<f64> {
        Ok(self.eval(&self.a.mul_vec(x)?)? + self.q.gauge(x)? - self.eval(x)?)
    }

    /// Unreduced H-representation of the unit sublevel set of a max-form
    /// certificate over a polytopic base set.
    pub fn explicit_hrep(&self) -> Result<HPolytope> {
        if self.form != MlfForm::Max {
            return Err(Error::Unsupported("sum-form sublevel sets have no finite H-form here".into()));
        }
        let base = self
            .q
            .h_rows()
            .ok_or_else(|| Error::Unsupported("base set has no H-representation".into()))?;
        let c = 1.0 / (1.0 - self.gamma);
        let step = self.a.scaled(1.0 / self.gamma);
        let mut current = base;
        let mut rows = Vec::with_capacity(current.len() * self.k);
        for i in 0..self.k {
            if i > 0 {
                current = current.iter().map(|r| step.tr_mul_vec(r)).collect::<Result<_>>()?;
            }
            rows.extend(current.iter().map(|r| r.iter().map(|v| v * c).collect::<Vec<_>>()));
        }
        HPolytope::new(self.dim(), rows)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub max_violation: f64,
    pub argmax: Vec<f64>,
}

/// `(ρ(A) + 1) / 2`.
pub fn default_gamma(rho: f64) -> f64 {
    0.5 * (rho + 1.0)
}

fn stable_rho(a: &Matrix, q: &SetExpr) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::InvalidArgument("A must be square".into()));
    }
    check_dim(a.n_rows(), q.dim())?;
    q.validate()?;
    let rho = spectral_radius(a, DEFAULTS.eigen)?;
    if rho >= 1.0 {
        return Err(Error::Precondition(format!("spectral radius {rho} is not below 1")));
    }
    Ok(rho)
}

/// Max-form certificate with the least admissible `k`.
pub fn construct_max(a: &Matrix, q: &SetExpr, gamma: Option<f64>, cap: usize) -> Result<MlfCertificate> {
    let rho = stable_rho(a, q)?;
    let gamma = gamma.unwrap_or_else(|| default_gamma(rho));
    if !(gamma > rho && gamma < 1.0) {
        return Err(Error::Precondition(format!("gamma {gamma} must lie in (rho, 1) = ({rho}, 1)")));
    }
    let search = minimal_power_k(&a.scaled(1.0 / gamma), q, 1.0, cap)?;
    Ok(MlfCertificate { form: MlfForm::Max, gamma, k: search.k, rho, a: a.clone(), q: q.clone() })
}

/// Sum-form certificate with the least admissible `k`.
pub fn construct_sum(a: &Matrix, q: &SetExpr, gamma: Option<f64>, cap: usize) -> Result<MlfCertificate> {
    let rho = stable_rho(a, q)?;
    let gamma = gamma.unwrap_or_else(|| default_gamma(rho));
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Precondition(format!("gamma {gamma} must lie in (0, 1)")));
    }
    let search = minimal_power_k(&a.transpose(), &polar(q)?, gamma, cap)?;
    Ok(MlfCertificate { form: MlfForm::Sum, gamma, k: search.k, rho, a: a.clone(), q: q.clone() })
}

/// Inclusion report backing a certificate, recomputed from scratch.
pub fn recertify(cert: &MlfCertificate) -> Result<InclusionReport> {
    use crate::inclusion::certify_image_inclusion;
    use crate::numerics::mat_pow;
    use crate::sets::scale;
    match cert.form {
        MlfForm::Max => {
            let p = mat_pow(&cert.a.scaled(1.0 / cert.gamma), cert.k)?;
            certify_image_inclusion(&p, &cert.q, &cert.q, DEFAULTS.inclusion)
        }
        MlfForm::Sum => {
            let qp = polar(&cert.q)?;
            let p = mat_pow(&cert.a.transpose(), cert.k)?;
            certify_image_inclusion(&p, &qp, &scale(cert.gamma, &qp)?, DEFAULTS.inclusion)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::Ellipsoid;

    fn interval() -> SetExpr {
        SetExpr::HPolytope(HPolytope::interval(1.0).unwrap())
    }

    fn fig1() -> Matrix {
        Matrix::from_rows(&[[1.0, 1.0], [-0.72, -0.7]]).unwrap()
    }

    #[test]
    fn scalar_max() {
        let c = construct_max(&Matrix::scalar(0.5), &interval(), Some(0.75), 100).unwrap();
        assert_eq!(c.k, 1);
        for x in [-2.0, -0.5, 0.0, 0.3, 1.0] {
            assert!((c.eval(&[x]).unwrap() - 4.0 * f64::abs(x)).abs() < 1e-12);
        }
        assert_eq!(c.eval(&[0.5]).unwrap(), 2.0);
        let h = c.explicit_hrep().unwrap();
        assert_eq!(h.rows(), &[vec![4.0], vec![-4.0]]);
        let r = c.verify_inequality(20, 1).unwrap();
        assert!((r.max_violation + 1.0).abs() < 1e-12);
    }

    #[test]
    fn scalar_sum() {
        let c = construct_sum(&Matrix::scalar(0.5), &interval(), Some(0.5), 100).unwrap();
        assert_eq!(c.k, 1);
        assert_eq!(c.eval(&[1.0]).unwrap(), 2.0);
        let c2 = construct_sum(&Matrix::scalar(0.5), &interval(), Some(0.25), 100).unwrap();
        assert_eq!(c2.k, 2);
        let r = c.verify_inequality(20, 1).unwrap();
        assert!(r.max_violation.abs() < 1e-12);
    }

    #[test]
    fn gamma_bounds() {
        let a = Matrix::scalar(0.5);
        assert!(matches!(construct_max(&a, &interval(), Some(0.5), 10), Err(Error::Precondition(_))));
        assert!(matches!(construct_sum(&a, &interval(), Some(1.0), 10), Err(Error::Precondition(_))));
        assert!(matches!(construct_max(&Matrix::scalar(1.0), &interval(), None, 10), Err(Error::Precondition(_))));
    }

    #[test]
    fn fig1_default_gamma_both_forms() {
        let q = SetExpr::Ball1(2);
        for cert in [
            construct_max(&fig1(), &q, None, 1000).unwrap(),
            construct_sum(&fig1(), &q, None, 1000).unwrap(),
        ] {
            assert!((cert.gamma - 0.6).abs() < 1e-12);
            assert!(recertify(&cert).unwrap().holds);
            assert!(cert.verify_inequality(2000, 5).unwrap().max_violation <= 1e-8);
            assert_eq!(cert.eval(&[0.0, 0.0]).unwrap(), 0.0);
        }
    }

    #[test]
    fn explicit_hrep_matches_eval() {
        let a = Matrix::from_rows(&[[0.4, 0.5], [-0.3, 0.6]]).unwrap();
        let c = construct_max(&a, &SetExpr::BallInf(2), None, 1000).unwrap();
        let h = c.explicit_hrep().unwrap();
        for x in unit_sphere(2, 1000, 9) {
            let x: Vec<f64> = x.iter().map(|v| v * 3.0).collect();
            assert!((h.gauge(&x) - c.eval(&x).unwrap()).abs() <= 1e-10);
        }
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let e = SetExpr::Ellipsoid(Ellipsoid::new(Matrix::diag(&[2.0, 1.0])).unwrap());
        let c = construct_sum(&fig1(), &e, Some(0.5), 1000).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: MlfCertificate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["form"], "sum");
        assert!(v["A"]["rows"].is_array());
        let bad = s.replace("\"k\":", "\"k\":0,\"x\":");
        assert!(serde_json::from_str::<MlfCertificate>(&bad).is_err());
    }
}
