//! Seeded sampling helpers. All randomness in the crate goes through here.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::numerics::norm2;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` points drawn uniformly from the unit sphere in `Rⁿ`.
pub fn unit_sphere(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let nv = norm2(&v);
        if nv > 1e-12 {
            out.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    out
}

pub fn normalized(v: &[f64]) -> Option<Vec<f64>> {
    let nv = norm2(v);
    (nv > 0.0).then(|| v.iter().map(|x| x / nv).collect())
}
