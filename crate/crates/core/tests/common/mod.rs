//! Seeded instance generators shared by the integration targets.
#![allow(dead_code)]

pub mod checks;

use mlyap::bench::random_stable_matrix;
use mlyap::sampling::rng;
use mlyap::sets::intersect;
use mlyap::{Ellipsoid, HPolytope, Matrix, SetExpr, VPolytope};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn normal(g: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(g)
}

pub fn normal_matrix(n: usize, g: &mut ChaCha8Rng) -> Matrix {
    Matrix::new(n, n, (0..n * n).map(|_| normal(g)).collect()).unwrap()
}

/// Well-conditioned invertible matrix: identity plus a small random part.
pub fn near_identity(n: usize, g: &mut ChaCha8Rng) -> Matrix {
    let r = normal_matrix(n, g).scaled(0.3 / (n as f64).sqrt());
    let mut rows = r.rows_vec();
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] += 1.0;
    }
    Matrix::from_rows(&rows).unwrap()
}

/// `E = BᵀB + 0.25·I` with `B` standard normal over `√n`.
pub fn random_ellipsoid(n: usize, g: &mut ChaCha8Rng) -> Ellipsoid {
    let b = normal_matrix(n, g).scaled(1.0 / (n as f64).sqrt());
    let e = b.transpose().matmul(&b).unwrap();
    let mut rows = e.rows_vec();
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] += 0.25;
    }
    Ellipsoid::new(Matrix::from_rows(&rows).unwrap()).unwrap()
}

/// Bounded H-polytope: the box rows plus random extra cuts, all with rhs 1.
pub fn random_hpolytope(n: usize, extra: usize, g: &mut ChaCha8Rng) -> HPolytope {
    let mut rows = SetExpr::BallInf(n).h_rows().unwrap();
    for r in rows.iter_mut() {
        let s = g.gen_range(0.5..1.5);
        r.iter_mut().for_each(|v| *v *= s);
    }
    for _ in 0..extra {
        rows.push((0..n).map(|_| normal(g)).collect());
    }
    HPolytope::from_rows(rows).unwrap()
}

/// Cross-polytope vertices stretched at random, plus random points.
pub fn random_vpolytope(n: usize, extra: usize, g: &mut ChaCha8Rng) -> VPolytope {
    let mut verts = SetExpr::Ball1(n).vertex_list().unwrap();
    for v in verts.iter_mut() {
        let s = g.gen_range(0.5..2.0);
        v.iter_mut().for_each(|x| *x *= s);
    }
    for _ in 0..extra {
        verts.push((0..n).map(|_| normal(g)).collect());
    }
    VPolytope::from_vertices(verts).unwrap()
}

/// Five composite expressions mixing every node type.
pub fn composite_sets(n: usize, seed: u64) -> Vec<SetExpr> {
    let mut g = rng(seed);
    let e = SetExpr::Ellipsoid(random_ellipsoid(n, &mut g));
    let m = near_identity(n, &mut g);
    let h = SetExpr::HPolytope(random_hpolytope(n, 3, &mut g));
    let v = SetExpr::VPolytope(random_vpolytope(n, 3, &mut g));
    vec![
        intersect(&[SetExpr::BallInf(n), e.clone()]).unwrap(),
        SetExpr::Preimage(m.clone(), Box::new(SetExpr::Ball1(n))),
        SetExpr::Scaled(0.7, Box::new(SetExpr::Intersection(vec![h.clone(), SetExpr::Ball1(n)]))),
        SetExpr::Polar(Box::new(SetExpr::Preimage(m.clone(), Box::new(e.clone())))),
        SetExpr::Intersection(vec![
            SetExpr::Preimage(m, Box::new(SetExpr::BallInf(n))),
            SetExpr::Scaled(1.3, Box::new(SetExpr::Ball1(n))),
            v,
        ]),
    ]
}

/// Stable matrix with spectral radius drawn in `[lo, hi]`.
pub fn stable_matrix(n: usize, lo: f64, hi: f64, seed: u64) -> Matrix {
    let rho = rng(seed ^ 0xA5A5).gen_range(lo..=hi);
    random_stable_matrix(n, rho, seed).unwrap()
}

/// The four base-set families used by the soundness sweep.
pub fn base_set(kind: usize, n: usize, seed: u64) -> SetExpr {
    let mut g = rng(seed);
    match kind % 4 {
        0 => SetExpr::BallInf(n),
        1 => SetExpr::Ball1(n),
        2 => SetExpr::Ellipsoid(random_ellipsoid(n, &mut g)),
        _ => intersect(&[SetExpr::BallInf(n), SetExpr::Ellipsoid(random_ellipsoid(n, &mut g))]).unwrap(),
    }
}

pub fn random_points(n: usize, count: usize, scale: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut g = rng(seed);
    (0..count).map(|_| (0..n).map(|_| scale * normal(&mut g)).collect()).collect()
}

pub fn fig1() -> Matrix {
    Matrix::from_rows(&[[1.0, 1.0], [-0.72, -0.7]]).unwrap()
}
