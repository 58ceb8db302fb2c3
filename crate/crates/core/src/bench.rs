//! Random strictly stable instances and the minimal-`k` timing protocol:
//! `Q = B∞ⁿ`, `γ = (ρ(A)+1)/2`, least `k` with `(A/γ)ᵏQ ⊆ Q`.

use std::io::Write;
use std::time::Instant;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::config::DEFAULTS;
use crate::error::{Error, Result};
use crate::inclusion::minimal_power_k;
use crate::mlf::{MlfCertificate, MlfForm};
use crate::numerics::{spectral_radius, Matrix};
use crate::sampling::rng;
use crate::sets::SetExpr;

/// Range of the target spectral radius drawn per row.
pub const RHO_RANGE: (f64, f64) = (0.975, 0.999);

pub const DEFAULT_DIMS: [usize; 7] = [2, 3, 5, 8, 13, 21, 34];

const MAX_REDRAWS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    /// Realized `ρ(A)`.
    pub rho: f64,
    /// Least `k`, or `None` when the search hit the cap.
    pub k: Option<usize>,
    pub time_ms: f64,
    pub seed: u64,
    /// Contraction used in the search, `(ρ* + 1)/2`.
    #[serde(skip)]
    pub gamma: f64,
    #[serde(skip)]
    pub matrix: Option<Matrix>,
}

impl BenchRow {
    /// Max-form certificate for a successful row.
    pub fn certificate(&self) -> Option<MlfCertificate> {
        let a = self.matrix.clone()?;
        Some(MlfCertificate {
            form: MlfForm::Max,
            gamma: self.gamma,
            k: self.k?,
            rho: self.rho,
            a,
            q: SetExpr::BallInf(self.n),
        })
    }
}

/// Standard-normal draw rescaled so that `ρ = rho_target`.
pub fn random_stable_matrix(n: usize, rho_target: f64, seed: u64) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if !(rho_target > 0.0 && rho_target < 1.0) {
        return Err(Error::InvalidArgument(format!("target spectral radius {rho_target} not in (0, 1)")));
    }
    let mut g = rng(seed);
    for _ in 0..MAX_REDRAWS {
        let data: Vec<f64> = (0..n * n).map(|_| StandardNormal.sample(&mut g)).collect();
        let m = Matrix::new(n, n, data)?;
        let rho = spectral_radius(&m, DEFAULTS.eigen)?;
        if rho > 1e-8 {
            return Ok(m.scaled(rho_target / rho));
        }
    }
    Err(Error::NonConvergence(format!("{MAX_REDRAWS} draws had zero spectral radius")))
}

/// One protocol row for dimension `n`.
pub fn table1_protocol(n: usize, seed: u64, cap: usize) -> Result<BenchRow> {
    let rho_target = rng(seed ^ 0x5248_4f00).gen_range(RHO_RANGE.0..=RHO_RANGE.1);
    let a = random_stable_matrix(n, rho_target, seed)?;
    let rho = spectral_radius(&a, DEFAULTS.eigen)?;
    let gamma = 0.5 * (rho_target + 1.0);
    let q = SetExpr::BallInf(n);
    let started = Instant::now();
    let k = match minimal_power_k(&a.scaled(1.0 / gamma), &q, 1.0, cap) {
        Ok(s) => Some(s.k),
        Err(Error::CapExhausted { .. }) => None,
        Err(e) => return Err(e),
    };
    let time_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok(BenchRow { n, rho, k, time_ms, seed, gamma, matrix: Some(a) })
}

/// Per-row seed derived from the batch seed.
pub fn row_seed(batch_seed: u64, n: usize) -> u64 {
    batch_seed.wrapping_add((n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// One row per dimension; rows that fail keep `k = None` instead of aborting.
pub fn run_benchmark(dims: &[usize], seed: u64, cap: usize) -> Result<Vec<BenchRow>> {
    if dims.is_empty() {
        return Err(Error::InvalidArgument("no dimensions given".into()));
    }
    dims.iter()
        .map(|&n| {
            let s = row_seed(seed, n);
            table1_protocol(n, s, cap).or_else(|e| match e {
                Error::InvalidArgument(_) => Err(e),
                _ => Ok(BenchRow { n, rho: f64::NAN, k: None, time_ms: 0.0, seed: s, gamma: f64::NAN, matrix: None }),
            })
        })
        .collect()
}

pub fn write_csv<W: Write>(rows: &[BenchRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "n,rho,k,time_ms,seed")?;
    for r in rows {
        let k = r.k.map(|k| k.to_string()).unwrap_or_default();
        writeln!(out, "{},{:.12},{},{:.3},{}", r.n, r.rho, k, r.time_ms, r.seed)?;
    }
    Ok(())
}
