use pennycrack::factorization::{
    analyticity_defect_disc, boundary_residual, contour_samples, determinant_deviation,
    determinants, factor_system_residual_annulus, factor_system_residual_disc,
    partial_index_estimate, solve_factor_columns_annulus, solve_factor_columns_disc,
    FactorMatrices,
};
use pennycrack::{Complex64, Side};
use proptest::prelude::*;

fn relative_variance(ds: &[Complex64]) -> f64 {
    let n = ds.len() as f64;
    let mean = ds.iter().sum::<Complex64>() / n;
    ds.iter().map(|d| (d - mean).norm_sqr()).sum::<f64>() / n / mean.norm_sqr()
}

fn random_points(seed: u64) -> Vec<Complex64> {
    // small LCG; the runner's own RNG drives the seed
    let mut state = seed | 1;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    (0..50)
        .map(|_| Complex64::new(0.5, -20.0 + 40.0 * next()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn disc_determinant_constant(seed in any::<u64>(), lambda in 0.1f64..0.8) {
        let f = solve_factor_columns_disc(lambda, 60).unwrap();
        let pts = random_points(seed);
        for side in [Side::Plus, Side::Minus] {
            let ds = determinants(&f, side, &pts).unwrap();
            prop_assert!(relative_variance(&ds) <= 1e-16);
        }
    }

    #[test]
    fn annulus_determinant_constant(seed in any::<u64>()) {
        let f = solve_factor_columns_annulus(0.2, 0.5, 60).unwrap();
        let pts = random_points(seed);
        for side in [Side::Plus, Side::Minus] {
            let ds = determinants(&f, side, &pts).unwrap();
            prop_assert!(relative_variance(&ds) <= 1e-16);
        }
    }
}

#[test]
fn determinant_values() {
    let samples = contour_samples(20);
    for lambda in [0.3, 0.5, 0.7] {
        let f = solve_factor_columns_disc(lambda, 60).unwrap();
        let (dp, dm) = determinant_deviation(&f, &samples).unwrap();
        assert!(dp <= 1e-9 && dm <= 1e-9, "{dp:e} {dm:e}");
    }
    let f = solve_factor_columns_annulus(0.2, 0.5, 60).unwrap();
    assert_eq!(f.expected_det(Side::Plus), 1.0 / 0.4);
    assert_eq!(f.expected_det(Side::Minus), 1.0 / 2.0);
    let (dp, dm) = determinant_deviation(&f, &samples).unwrap();
    assert!(dp <= 1e-8 && dm <= 1e-8, "{dp:e} {dm:e}");
}

#[test]
fn boundary_equation_holds() {
    let samples = contour_samples(20);
    let f = solve_factor_columns_disc(0.5, 60).unwrap();
    assert!(boundary_residual(&f, &samples).unwrap() <= 1e-8);
    let f = solve_factor_columns_annulus(0.2, 0.5, 60).unwrap();
    assert!(boundary_residual(&f, &samples).unwrap() <= 1e-7);
}

#[test]
fn analyticity_defect_decays() {
    let lambda: f64 = 0.8;
    let d1 = analyticity_defect_disc(&solve_factor_columns_disc(lambda, 10).unwrap()).tail_rows;
    let d2 = analyticity_defect_disc(&solve_factor_columns_disc(lambda, 20).unwrap()).tail_rows;
    assert!(d2 / d1 <= lambda * lambda + 0.05, "{d1:e} {d2:e}");
}

#[test]
fn column_systems_solved() {
    for lambda in [0.2, 0.5, 0.9] {
        let f = solve_factor_columns_disc(lambda, 60).unwrap();
        assert!(factor_system_residual_disc(&f) <= 1e-12);
    }
    let f = solve_factor_columns_annulus(0.2, 0.5, 60).unwrap();
    assert!(factor_system_residual_annulus(&f) <= 1e-12);
}

#[test]
fn partial_indices_vanish() {
    let disc = solve_factor_columns_disc(0.5, 60).unwrap();
    let ann = solve_factor_columns_annulus(0.2, 0.5, 60).unwrap();
    for side in [Side::Plus, Side::Minus] {
        for r in [
            partial_index_estimate(&disc, side).unwrap(),
            partial_index_estimate(&ann, side).unwrap(),
        ] {
            assert!(r.indices.iter().all(|&k| k == 0), "{r:?}");
            assert!(r.max_fit_distance <= 0.1);
            assert!(r.determinant_order.abs() <= 0.1);
        }
    }
}
