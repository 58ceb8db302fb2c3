use super::*;

fn ell(d: &[f64]) -> SetExpr {
    SetExpr::Ellipsoid(Ellipsoid::new(Matrix::diag(d)).unwrap())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn gauge_examples() {
    assert_eq!(gauge(&SetExpr::BallInf(2), &[0.5, -0.25]).unwrap(), 0.5);
    assert_eq!(gauge(&ell(&[1.0, 1.0]), &[3.0, 4.0]).unwrap(), 5.0);
    let both = intersect(&[SetExpr::BallInf(2), ell(&[4.0, 4.0])]).unwrap();
    assert_eq!(gauge(&both, &[0.5, 0.0]).unwrap(), 1.0);
}

#[test]
fn gauge_dimension_mismatch() {
    assert!(matches!(
        gauge(&SetExpr::BallInf(2), &[1.0]),
        Err(Error::DimensionMismatch { expected: 2, found: 1 })
    ));
}

#[test]
fn support_examples() {
    assert_eq!(support(&SetExpr::BallInf(2), &[1.0, -2.0]).unwrap(), 3.0);
    assert_eq!(support(&ell(&[1.0, 1.0]), &[3.0, 4.0]).unwrap(), 5.0);
    let h = SetExpr::HPolytope(HPolytope::from_rows(SetExpr::BallInf(2).h_rows().unwrap()).unwrap());
    assert!(close(support(&h, &[1.0, 1.0]).unwrap(), 2.0, 1e-12));
}

#[test]
fn support_errors() {
    let slab = SetExpr::HPolytope(HPolytope::from_rows(vec![vec![0.0, 1.0], vec![0.0, -1.0]]).unwrap());
    assert_eq!(support(&slab, &[1.0, 0.0]), Err(Error::Unbounded));
    let mixed = intersect(&[SetExpr::BallInf(2), ell(&[2.0, 2.0])]).unwrap();
    assert!(matches!(support(&mixed, &[1.0, 0.0]), Err(Error::Unsupported(_))));
}

#[test]
fn polytopic_intersection_support_uses_stacked_rows() {
    let s = intersect(&[SetExpr::BallInf(2), SetExpr::Scaled(1.5, Box::new(SetExpr::Ball1(2)))]).unwrap();
    // corner (1, 0.5) of the clipped square
    assert!(close(support(&s, &[1.0, 1.0]).unwrap(), 1.5, 1e-12));
}

#[test]
fn polar_examples() {
    assert_eq!(polar(&SetExpr::Ball1(2)).unwrap(), SetExpr::BallInf(2));
    assert_eq!(polar(&SetExpr::BallInf(3)).unwrap(), SetExpr::Ball1(3));
    let p = polar(&ell(&[4.0, 1.0])).unwrap();
    match p {
        SetExpr::Ellipsoid(e) => {
            assert!(close(e.shape()[(0, 0)], 0.25, 1e-15));
            assert!(close(e.shape()[(1, 1)], 1.0, 1e-15));
        }
        other => panic!("{other:?}"),
    }
    let h = SetExpr::HPolytope(HPolytope::from_rows(vec![vec![1.0, 0.5], vec![-1.0, 0.2], vec![0.0, -2.0]]).unwrap());
    let back = polar(&polar(&h).unwrap()).unwrap();
    assert_eq!(back, h);
}

#[test]
fn polar_requires_interior_origin() {
    let slab = SetExpr::HPolytope(HPolytope::from_rows(vec![vec![0.0, 1.0], vec![0.0, -1.0]]).unwrap());
    assert!(matches!(polar(&slab), Err(Error::OriginNotInterior(_))));
    let off = SetExpr::VPolytope(VPolytope::from_vertices(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap());
    assert!(matches!(polar(&off), Err(Error::OriginNotInterior(_))));
}

#[test]
fn preimage_examples() {
    let box_h = SetExpr::HPolytope(HPolytope::from_rows(SetExpr::BallInf(2).h_rows().unwrap()).unwrap());
    let p = preimage(&Matrix::identity(2).scaled(2.0), &box_h).unwrap();
    assert!(matches!(p, SetExpr::HPolytope(_)));
    assert!(close(gauge(&p, &[0.5, 0.0]).unwrap(), 1.0, 1e-15));
    assert!(close(gauge(&p, &[0.25, -0.5]).unwrap(), 1.0, 1e-15));

    let e = ell(&[2.0, 3.0]);
    let id = preimage(&Matrix::identity(2), &e).unwrap();
    for x in [[1.0, 2.0], [-0.3, 0.1]] {
        assert_eq!(gauge(&id, &x).unwrap(), gauge(&e, &x).unwrap());
    }

    let i = SetExpr::HPolytope(HPolytope::interval(1.0).unwrap());
    let wide = preimage(&Matrix::scalar(0.5), &i).unwrap();
    assert!(close(gauge(&wide, &[2.0]).unwrap(), 1.0, 1e-15));
    assert!(preimage(&Matrix::identity(3), &e).is_err());
}

#[test]
fn intersect_examples() {
    assert_eq!(intersect(&[SetExpr::BallInf(2)]).unwrap(), SetExpr::BallInf(2));
    let nested = intersect(&[SetExpr::BallInf(2), scale(2.0, &SetExpr::BallInf(2)).unwrap()]).unwrap();
    for x in [[0.3, -0.9], [2.0, 1.0], [0.0, 0.1]] {
        assert_eq!(gauge(&nested, &x).unwrap(), gauge(&SetExpr::BallInf(2), &x).unwrap());
    }
    let h = |rows: Vec<Vec<f64>>| SetExpr::HPolytope(HPolytope::from_rows(rows).unwrap());
    let a = h(SetExpr::BallInf(2).h_rows().unwrap());
    let b = h(SetExpr::Ball1(2).h_rows().unwrap());
    match intersect(&[a, b]).unwrap() {
        SetExpr::HPolytope(p) => assert_eq!(p.n_rows(), 8),
        other => panic!("{other:?}"),
    }
    assert!(intersect(&[]).is_err());
}

#[test]
fn scale_examples() {
    let s = scale(2.0, &SetExpr::BallInf(2)).unwrap();
    assert_eq!(gauge(&s, &[1.0, 0.0]).unwrap(), 0.5);
    assert_eq!(scale(1.0, &SetExpr::Ball1(2)).unwrap(), SetExpr::Ball1(2));
    let q = scale(0.25, &SetExpr::Ball1(1)).unwrap();
    assert!(contains(&q, &[0.25], 0.0).unwrap());
    assert!(!contains(&q, &[0.2501], 0.0).unwrap());
    assert!(contains(&q, &[-0.25], 0.0).unwrap());
    assert!(scale(0.0, &SetExpr::Ball1(1)).is_err());
    assert!(scale(-1.0, &SetExpr::Ball1(1)).is_err());
    let h = SetExpr::HPolytope(HPolytope::interval(1.0).unwrap());
    assert_eq!(gauge(&scale(4.0, &h).unwrap(), &[1.0]).unwrap(), 0.25);
}

#[test]
fn contains_examples() {
    assert!(contains(&SetExpr::BallInf(2), &[1.0, 1.0], 0.0).unwrap());
    assert!(!contains(&SetExpr::BallInf(2), &[1.001, 0.0], 0.0).unwrap());
    for s in [SetExpr::BallInf(3), SetExpr::Ball1(3), ell(&[1.0, 2.0, 3.0])] {
        assert!(contains(&s, &[0.0, 0.0, 0.0], 0.0).unwrap());
    }
    assert!(contains(&SetExpr::BallInf(1), &[0.0], -1.0).is_err());
}

#[test]
fn oracle_examples() {
    let g = gauge_oracle(&SetExpr::BallInf(2), &[0.5, -0.25], 1e-9).unwrap();
    assert!(close(g, 0.5, 1e-9));
    let g = gauge_oracle(&ell(&[1.0, 1.0]), &[3.0, 4.0], 1e-9).unwrap();
    assert!(close(g, 5.0, 1e-9));
    assert_eq!(gauge_oracle(&SetExpr::Ball1(2), &[0.0, 0.0], 1e-9).unwrap(), 0.0);
    assert!(gauge_oracle(&SetExpr::Ball1(2), &[1.0, 0.0], 0.0).is_err());
}

#[test]
fn polar_node_swaps_gauge_and_support() {
    let e = ell(&[3.0, 0.5]);
    let mixed = intersect(&[SetExpr::BallInf(2), e]).unwrap();
    let p = polar(&mixed).unwrap();
    assert!(matches!(p, SetExpr::Polar(_)));
    let y = [0.7, -1.3];
    assert_eq!(support(&p, &y).unwrap(), gauge(&mixed, &y).unwrap());
}

#[test]
fn vpolytope_gauge_via_polar_lp() {
    let v = SetExpr::VPolytope(VPolytope::from_vertices(vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]]).unwrap());
    for x in [[0.3, 0.2], [-1.0, 2.0], [0.0, -0.5]] {
        assert!(close(gauge(&v, &x).unwrap(), x[0].abs() + x[1].abs(), 1e-12));
    }
}

#[test]
fn ill_conditioned_ellipsoid_refuses_polarity() {
    let e = Ellipsoid::new(Matrix::diag(&[1.0, 1e-13])).unwrap();
    assert!(matches!(e.polar(), Err(Error::IllConditioned(_))));
    // gauge still works
    assert!(close(e.gauge(&[1.0, 0.0]), 1.0, 1e-15));
}
