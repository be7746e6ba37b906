use pennycrack::models::{
    annulus_residual, disc_residual, solve_annulus_reduction, solve_disc_recurrence,
    solve_disc_reduction, AnnulusProblem, CoefficientSetAnnulus, CoefficientSetDisc, DiscProblem,
    DEFAULT_K, DEFAULT_N,
};
use proptest::prelude::*;
use std::f64::consts::PI;

#[test]
fn methods_agree_on_reference_lambdas() {
    for lambda in [0.1, 0.3, 0.5, 0.7] {
        let p = DiscProblem::new(lambda, 1.0).unwrap();
        let red = solve_disc_reduction(&p, DEFAULT_N).unwrap();
        let (_, rec) = solve_disc_recurrence(&p, DEFAULT_N, DEFAULT_K).unwrap();
        let worst = red
            .a_plus
            .iter()
            .zip(&rec.a_plus)
            .fold(0.0f64, |w, (x, y)| w.max((x - y).abs()));
        assert!(worst <= 1e-9, "lambda {lambda}: {worst:e}");
    }
}

#[test]
fn truncation_converges_geometrically() {
    // only pairs where the coarse error is still above roundoff say anything
    for lambda in [0.7, 0.8, 0.9] {
        let p = DiscProblem::new(lambda, 1.0).unwrap();
        let a0 = |n| solve_disc_reduction(&p, n).unwrap().a_plus[0];
        let mut checked = 0;
        for n in [10usize, 15, 20, 30] {
            let e1 = (a0(n) - a0(2 * n)).abs();
            let e2 = (a0(2 * n) - a0(4 * n)).abs();
            if e1 < 1e-12 {
                continue;
            }
            checked += 1;
            assert!(e2 / e1 <= lambda * lambda + 0.05, "lambda {lambda} N {n}: {e1:e} {e2:e}");
        }
        assert!(checked > 0 || lambda < 0.8);
    }
}

#[test]
fn seed_rows_exact() {
    let ds = 1.7;
    let p = DiscProblem::new(0.4, ds).unwrap();
    let (t, _) = solve_disc_recurrence(&p, 30, 40).unwrap();
    for n in 0..t.rows() {
        assert_eq!(t.b[n][0], 0.0);
        let want = -ds / (2.0 * PI * (n as f64 + 0.5));
        assert!((t.a[n][0] - want).abs() <= 1e-15 * want.abs());
    }
}

#[test]
fn annulus_degenerates_to_disc() {
    let disc = solve_disc_reduction(&DiscProblem::new(0.5, 1.0).unwrap(), 40).unwrap();
    let ann = solve_annulus_reduction(&AnnulusProblem::new(0.0, 0.5, 1.0).unwrap(), 40).unwrap();
    for (x, y) in disc.a_plus.iter().zip(&ann.a_plus) {
        assert!((x - y).abs() <= 1e-12);
    }
    assert!(ann.a_minus.iter().all(|&v| v == 0.0));
    assert!(ann.b_plus.iter().all(|&v| v == 0.0));
}

#[test]
fn coefficient_sets_round_trip_bitwise() {
    let p = DiscProblem::new(0.6, 0.3).unwrap();
    let c = solve_disc_reduction(&p, 25).unwrap();
    let back: CoefficientSetDisc = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
    for (x, y) in c.a_plus.iter().zip(&back.a_plus).chain(c.b_minus.iter().zip(&back.b_minus)) {
        assert_eq!(x.to_bits(), y.to_bits());
    }
    let a = solve_annulus_reduction(&AnnulusProblem::new(0.2, 0.5, 1.0).unwrap(), 20).unwrap();
    let back: CoefficientSetAnnulus =
        serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
    assert_eq!(a, back);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn a_plus_is_negative(lambda in 0.01f64..0.95, ds in 0.01f64..10.0) {
        let p = DiscProblem::new(lambda, ds).unwrap();
        let c = solve_disc_reduction(&p, 40).unwrap();
        // entries that underflow to zero carry no sign
        prop_assert!(c.a_plus.iter().all(|&a| a < 0.0 || a.abs() < 1e-300));
        prop_assert!(c.a_plus[0] < 0.0);
    }

    #[test]
    fn coefficients_decay_geometrically(lambda in 0.05f64..0.9) {
        let p = DiscProblem::new(lambda, 1.0).unwrap();
        let c = solve_disc_reduction(&p, 40).unwrap();
        for n in 2..20 {
            if c.a_plus[n].abs() < 1e-250 {
                break;
            }
            let ratio = (c.a_plus[n + 1] / c.a_plus[n]).abs();
            prop_assert!(ratio <= lambda * lambda * 1.05, "n={} ratio={}", n, ratio);
        }
    }

    #[test]
    fn reduction_residual_small(lambda in 0.01f64..0.95, ds in 0.01f64..10.0) {
        let p = DiscProblem::new(lambda, ds).unwrap();
        let c = solve_disc_reduction(&p, 40).unwrap();
        let scale = c.a_plus.iter().chain(&c.b_minus).fold(ds, |m, v| m.max(v.abs()));
        prop_assert!(disc_residual(&p, &c) <= 1e-12 * scale);
    }

    #[test]
    fn annulus_residual_small(l0 in 0.02f64..0.4, gap in 0.05f64..0.5) {
        let l1 = (l0 + gap).min(0.9);
        let p = AnnulusProblem::new(l0, l1, 1.0).unwrap();
        let c = solve_annulus_reduction(&p, 40).unwrap();
        prop_assert!(annulus_residual(&p, &c).unwrap() <= 1e-11);
    }
}
