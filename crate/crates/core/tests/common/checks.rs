//! Oracle and property checks shared by the test targets and the acceptance
//! report. Each returns its worst observation so callers can both assert and
//! print it.

use mlyap::fixed_point::{g_map, reduce_hrep};
use mlyap::inclusion::certify_image_inclusion;
use mlyap::mlf::{construct_max, construct_sum};
use mlyap::sampling::rng;
use mlyap::sets::{gauge_oracle, polar, preimage};
use mlyap::{HPolytope, Matrix, SetExpr};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use super::{
    base_set, composite_sets, near_identity, random_ellipsoid, random_hpolytope, random_points, random_vpolytope,
    stable_matrix,
};

/// Largest relative gap between closed-form and bisection gauges over
/// 1000 points per set, five composite sets, dimensions 2 to 4.
pub fn gauge_oracle_gap() -> f64 {
    let mut worst = 0.0f64;
    for (n, seed) in [(2, 1u64), (3, 2), (4, 3)] {
        for (idx, set) in composite_sets(n, seed).into_iter().enumerate() {
            for x in random_points(n, 1000, 1.0, seed * 100 + idx as u64) {
                let g = set.gauge(&x).unwrap();
                let o = gauge_oracle(&set, &x, 1e-10).unwrap();
                worst = worst.max((g - o).abs() / g.max(1.0));
            }
        }
    }
    worst
}

/// Membership disagreements between the G-map polytope and
/// `γ_S(Ax) + γ_Q(x) <= 1`, skipping points within `1e-9` of the boundary.
/// Returns `(disagreements, points checked)`.
pub fn g_map_disagreements() -> (usize, usize) {
    let mut g = rng(77);
    let (mut bad, mut checked) = (0, 0);
    for trial in 0..4u64 {
        let n = 2 + (trial as usize % 2);
        let a = stable_matrix(n, 0.3, 0.9, trial);
        let s = random_hpolytope(n, 2, &mut g);
        let q = HPolytope::from_rows(SetExpr::Ball1(n).h_rows().unwrap()).unwrap();
        let gs = g_map(&s, &a, &q).unwrap();
        for x in random_points(n, 1000, 0.6, 1000 + trial) {
            let def = s.gauge(&a.mul_vec(&x).unwrap()) + q.gauge(&x);
            if (def - 1.0).abs() <= 1e-9 {
                continue;
            }
            checked += 1;
            if (gs.gauge(&x) <= 1.0) != (def <= 1.0) {
                bad += 1;
            }
        }
    }
    (bad, checked)
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(Config { cases, failure_persistence: None, ..Config::default() }, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

fn dim_and_vec() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (1usize..=4).prop_flat_map(|n| (Just(n), prop::collection::vec(-5.0f64..5.0, n)))
}

/// A random concrete set whose polar is concrete.
fn polar_friendly(kind: u8, n: usize, seed: u64) -> SetExpr {
    let mut g = rng(seed);
    match kind % 5 {
        0 => SetExpr::HPolytope(random_hpolytope(n, 2, &mut g)),
        1 => SetExpr::VPolytope(random_vpolytope(n, 2, &mut g)),
        2 => SetExpr::Ellipsoid(random_ellipsoid(n, &mut g)),
        3 => SetExpr::BallInf(n),
        _ => SetExpr::Ball1(n),
    }
}

pub fn gauge_homogeneity(cases: u32) -> Result<(), String> {
    let lambdas = vec![0.0, 1e-3, 0.5, 2.0, 7.25, 10.0];
    run(cases, (dim_and_vec(), any::<u64>(), 0usize..5, prop::sample::select(lambdas)), |((n, x), seed, idx, lambda)| {
        let set = &composite_sets(n, seed)[idx];
        let g = set.gauge(&x).unwrap();
        let lx: Vec<f64> = x.iter().map(|v| v * lambda).collect();
        let gl = set.gauge(&lx).unwrap();
        prop_assert!((gl - lambda * g).abs() <= 1e-12 * lambda * g, "{} vs {}", gl, lambda * g);
        Ok(())
    })
}

pub fn intersection_max_rule(cases: u32) -> Result<(), String> {
    run(cases, (dim_and_vec(), any::<u64>()), |((n, x), seed)| {
        let members = composite_sets(n, seed);
        let expected = members.iter().map(|m| m.gauge(&x).unwrap()).fold(0.0, f64::max);
        prop_assert_eq!(SetExpr::Intersection(members).gauge(&x).unwrap(), expected);
        Ok(())
    })
}

/// Symbolic preimages match exactly; H-form preimages (rows folded through
/// the matrix) match to `1e-12` relative.
pub fn preimage_rule(cases: u32) -> Result<(), String> {
    run(cases, (dim_and_vec(), any::<u64>(), 0usize..5), |((n, x), seed, idx)| {
        let mut g = rng(seed);
        let m = near_identity(n, &mut g);
        let inner = composite_sets(n, seed ^ 1)[idx].clone();
        let symbolic = SetExpr::Preimage(m.clone(), Box::new(inner.clone()));
        let mx = m.mul_vec(&x).unwrap();
        let direct = inner.gauge(&mx).unwrap();
        prop_assert_eq!(symbolic.gauge(&x).unwrap(), direct);

        let h = SetExpr::HPolytope(random_hpolytope(n, 2, &mut g));
        let folded = preimage(&m, &h).unwrap();
        prop_assert!(matches!(folded, SetExpr::HPolytope(_)));
        let direct = h.gauge(&mx).unwrap();
        prop_assert!((folded.gauge(&x).unwrap() - direct).abs() <= 1e-12 * direct.max(1.0));
        Ok(())
    })
}

pub fn polar_involution(cases: u32) -> Result<(), String> {
    run(cases, (dim_and_vec(), any::<u64>(), any::<u8>()), |((n, x), seed, kind)| {
        let s = polar_friendly(kind, n, seed);
        let back = polar(&polar(&s).unwrap()).unwrap();
        let (a, b) = (s.gauge(&x).unwrap(), back.gauge(&x).unwrap());
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0), "{} vs {}", a, b);
        Ok(())
    })
}

pub fn support_gauge_polarity(cases: u32) -> Result<(), String> {
    run(cases, (dim_and_vec(), any::<u64>(), any::<u8>()), |((n, y), seed, kind)| {
        let s = polar_friendly(kind, n, seed);
        let sigma = s.support(&y).unwrap();
        let g = polar(&s).unwrap().gauge(&y).unwrap();
        prop_assert!((sigma - g).abs() <= 1e-10 * sigma.max(1.0), "{} vs {}", sigma, g);
        Ok(())
    })
}

pub fn reduction_preserves_set(cases: u32) -> Result<(), String> {
    run(cases, (1usize..=3, 0usize..12, any::<u64>()), |(n, extra, seed)| {
        let mut g = rng(seed);
        let mut rows = random_hpolytope(n, extra, &mut g).rows().to_vec();
        // a duplicate and a dilated copy guarantee something to remove
        rows.push(rows[0].clone());
        rows.push(rows[1].iter().map(|v| v * 0.5).collect());
        let p = HPolytope::from_rows(rows).unwrap();
        let r = reduce_hrep(&p, 1e-9).unwrap();
        prop_assert!(r.n_rows() < p.n_rows());
        let id = Matrix::identity(n);
        let (ps, rs) = (SetExpr::HPolytope(p), SetExpr::HPolytope(r));
        prop_assert!(certify_image_inclusion(&id, &ps, &rs, 1e-9).unwrap().holds);
        prop_assert!(certify_image_inclusion(&id, &rs, &ps, 1e-9).unwrap().holds);
        Ok(())
    })
}

pub fn certificate_homogeneity(cases: u32) -> Result<(), String> {
    let strategy = (2usize..=4, any::<u64>(), 0usize..4, any::<bool>(), prop::collection::vec(-5.0f64..5.0, 4));
    run(cases, strategy, |(n, seed, kind, sum, x)| {
        let a = stable_matrix(n, 0.3, 0.9, seed);
        let q = base_set(kind, n, seed);
        let cert = if sum { construct_sum(&a, &q, Some(0.5), 10_000) } else { construct_max(&a, &q, None, 10_000) }.unwrap();
        let x = &x[..n];
        let v = cert.eval(x).unwrap();
        prop_assert_eq!(cert.eval(&vec![0.0; n]).unwrap(), 0.0);
        if x.iter().any(|&c| c != 0.0) {
            prop_assert!(v > 0.0);
        }
        for lambda in [0.0, 0.5, 2.0, 10.0] {
            let lx: Vec<f64> = x.iter().map(|c| c * lambda).collect();
            prop_assert!((cert.eval(&lx).unwrap() - lambda * v).abs() <= 1e-12 * lambda * v);
        }
        Ok(())
    })
}
