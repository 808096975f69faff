use std::collections::BTreeSet;
use std::f64::consts::PI;

use paircorr::geometry::unit_ball_volume;
use paircorr::pointsets::{
    primitive_density, radial_check, wedge_check, wedge_count, write_points, Boundary, LatticePointSet, PointKind,
    WedgeSpec,
};
use paircorr_testkit::lattice;
use proptest::prelude::*;

fn set(n: u32, r: f64, kind: PointKind, boundary: Boundary) -> LatticePointSet {
    LatticePointSet::new(n, r, kind, boundary).unwrap()
}

#[test]
fn enumeration_matches_cube_scan() {
    for n in 1..=4u32 {
        for r in [0.0, 0.5, 1.0, 1.5, 2.0, 2.9, 3.0, 4.2] {
            for (boundary, closed) in [(Boundary::Closed, true), (Boundary::Open, false)] {
                let want = lattice::cube_scan(n as usize, r, closed);
                let integer: Vec<Vec<i64>> = set(n, r, PointKind::Integer, boundary).enumerate().unwrap().collect();
                assert_eq!(integer, want, "n={n} r={r} {boundary:?}");

                let primitive: Vec<Vec<i64>> = set(n, r, PointKind::Primitive, boundary).enumerate().unwrap().collect();
                let want_primitive: Vec<Vec<i64>> = want.into_iter().filter(|p| lattice::is_primitive(p)).collect();
                assert_eq!(primitive, want_primitive, "primitive n={n} r={r} {boundary:?}");
            }
        }
    }
}

#[test]
fn counts_match_enumeration() {
    for n in 1..=5u32 {
        for r in [1.0, 2.5, 3.7, 6.0] {
            for kind in [PointKind::Integer, PointKind::Primitive] {
                for boundary in [Boundary::Open, Boundary::Closed] {
                    let s = set(n, r, kind, boundary);
                    assert_eq!(s.count().unwrap(), s.enumerate().unwrap().count() as u64, "n={n} r={r}");
                }
            }
        }
    }
}

#[test]
fn known_counts() {
    assert_eq!(set(2, 10.0, PointKind::Integer, Boundary::Closed).count().unwrap(), 317);
    assert_eq!(set(3, 1.5, PointKind::Integer, Boundary::Closed).count().unwrap(), 19);
    assert_eq!(set(1, 2.5, PointKind::Integer, Boundary::Open).count().unwrap(), 5);
    let unit: Vec<Vec<i64>> = set(2, 1.0, PointKind::Primitive, Boundary::Closed).enumerate().unwrap().collect();
    assert_eq!(unit, vec![vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]]);
}

#[test]
fn enumeration_is_deterministic_and_sorted() {
    let s = set(3, 7.5, PointKind::Primitive, Boundary::Closed);
    let a: Vec<Vec<i64>> = s.enumerate().unwrap().collect();
    let b: Vec<Vec<i64>> = s.enumerate().unwrap().collect();
    assert_eq!(a, b);
    assert!(a.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn primitive_points_are_integer_points() {
    let integer: BTreeSet<Vec<i64>> = set(3, 9.0, PointKind::Integer, Boundary::Closed).enumerate().unwrap().collect();
    for p in set(3, 9.0, PointKind::Primitive, Boundary::Closed).enumerate().unwrap() {
        assert!(integer.contains(&p), "{p:?}");
    }
}

#[test]
fn integer_set_is_symmetric() {
    let points: BTreeSet<Vec<i64>> = set(3, 6.3, PointKind::Integer, Boundary::Closed).enumerate().unwrap().collect();
    for p in &points {
        let flipped: Vec<i64> = p.iter().map(|x| -x).collect();
        let swapped = vec![p[2], p[0], p[1]];
        assert!(points.contains(&flipped) && points.contains(&swapped));
    }
    for axis in [[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]] {
        let s = set(3, 12.0, PointKind::Integer, Boundary::Closed);
        let w = WedgeSpec::new(axis.to_vec(), PI / 5.0, 12.0).unwrap();
        let base = WedgeSpec::along_first_axis(3, PI / 5.0, 12.0).unwrap();
        assert_eq!(wedge_count(&s, &w).unwrap(), wedge_count(&s, &base).unwrap());
    }
}

#[test]
fn gauss_growth() {
    let count = set(2, 100.0, PointKind::Integer, Boundary::Closed).count().unwrap();
    let ratio = count as f64 / 100f64.powi(2) / unit_ball_volume(2);
    assert!((ratio - 1.0).abs() < 0.05, "{ratio}");
}

#[test]
fn primitive_fraction_tends_to_inverse_zeta() {
    let integer = set(2, 200.0, PointKind::Integer, Boundary::Closed).count().unwrap();
    let primitive = set(2, 200.0, PointKind::Primitive, Boundary::Closed).count().unwrap();
    let ratio = primitive as f64 / integer as f64;
    assert!((ratio - 6.0 / PI / PI).abs() < 0.01, "{ratio}");
    assert!((primitive_density(2).unwrap() - 6.0 / PI / PI).abs() < 1e-12);
    assert!((primitive_density(4).unwrap() - 90.0 / PI.powi(4)).abs() < 1e-12);
}

#[test]
fn radial_ratios() {
    let r = radial_check(PointKind::Integer, Boundary::Closed, 2, 100.0, 2.0).unwrap();
    assert!((r - 1.0).abs() < 0.01, "{r}");
    assert_eq!(radial_check(PointKind::Integer, Boundary::Closed, 2, 1234.5, 1.0).unwrap(), 1.0);
    let r = radial_check(PointKind::Primitive, Boundary::Closed, 3, 30.0, 1.5).unwrap();
    assert!((r - 1.0).abs() < 0.02, "{r}");
    assert!(radial_check(PointKind::Primitive, Boundary::Closed, 2, 0.5, 2.0).is_err());
}

#[test]
fn wedge_ratios() {
    let s = set(2, 300.0, PointKind::Integer, Boundary::Closed);
    let full = WedgeSpec::along_first_axis(2, PI, 40.0).unwrap();
    assert_eq!(wedge_check(&s, &full).unwrap(), 1.0);
    let half = WedgeSpec::along_first_axis(2, PI / 2.0, 200.0).unwrap();
    assert!((wedge_check(&s, &half).unwrap() - 1.0).abs() < 0.01);
    let narrow = WedgeSpec::along_first_axis(2, PI / 6.0, 300.0).unwrap();
    assert!((wedge_check(&s, &narrow).unwrap() - 1.0).abs() < 0.02);
    assert!(WedgeSpec::along_first_axis(2, 0.0, 10.0).is_err());
    assert!(WedgeSpec::new(vec![1.0, 1.0], 1.0, 10.0).is_err());
}

#[test]
fn budget_guard_reports_estimate() {
    let big = set(8, 40.0, PointKind::Integer, Boundary::Closed);
    let err = big.count().unwrap_err().to_string();
    assert!(err.contains("estimated"), "{err}");
}

#[test]
fn point_export_format() {
    let s = set(2, 1.0, PointKind::Integer, Boundary::Closed);
    let cloud = s.points().unwrap();
    let mut out = Vec::new();
    write_points(&mut out, cloud.iter()).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), "-1 0\n0 -1\n0 0\n0 1\n1 0\n");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn emitted_points_respect_invariants(n in 1u32..4, r in 0.0f64..8.0, primitive: bool, open: bool) {
        let kind = if primitive { PointKind::Primitive } else { PointKind::Integer };
        let boundary = if open { Boundary::Open } else { Boundary::Closed };
        for p in set(n, r, kind, boundary).enumerate().unwrap() {
            let norm_sq = p.iter().map(|x| x * x).sum::<i64>() as f64;
            let inside = if open { norm_sq < r * r } else { norm_sq <= r * r };
            prop_assert!(inside);
            if primitive {
                prop_assert!(lattice::is_primitive(&p));
            }
        }
    }
}
