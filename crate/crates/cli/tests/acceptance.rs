//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use pennycrack::factorization::{
    analyticity_defect_annulus, analyticity_defect_disc, boundary_residual, contour_samples,
    determinant_deviation, partial_index_estimate, solve_factor_columns_annulus,
    solve_factor_columns_disc, FactorMatrices,
};
use pennycrack::fields::continuity_defects;
use pennycrack::models::{
    solve_annulus_reduction, solve_disc_recurrence, solve_disc_reduction, AnnulusProblem,
    DiscProblem,
};
use pennycrack::specfun::{f_m_limit, gauss_2f1};
use pennycrack::Side;
use pennycrack_cli::config::RunConfig;
use pennycrack_cli::run::{run_figures, run_sif_sweep};
use pennycrack_cli::table::FieldTable;
use pennycrack_oracle as oracle;

const N: usize = 60;
const K: usize = 120;

const SEED_REL: f64 = 1e-13;
const SEED_TIME: Duration = Duration::from_secs(1);
const ASYMPTOTIC_REL: f64 = 1e-12;
const ASYMPTOTIC_TIME: Duration = Duration::from_secs(1);
const SIF_GAP_WIDE: f64 = 0.05;
const SIF_GAP_NARROW: f64 = 0.005;
const SIF_TIME: Duration = Duration::from_secs(5);
const CONTINUITY_TOL: f64 = 1e-9;
const CONTINUITY_TIME: Duration = Duration::from_secs(2);
const DET_DISC_TOL: f64 = 1e-9;
const DET_ANNULUS_TOL: f64 = 1e-8;
const DET_TIME: Duration = Duration::from_secs(10);
const BOUNDARY_DISC_TOL: f64 = 1e-8;
const BOUNDARY_ANNULUS_TOL: f64 = 1e-7;
const DECAY_SLACK: f64 = 0.05;
const INDEX_FIT_TOL: f64 = 0.1;
const METHOD_TOL: f64 = 1e-9;
const DEGENERATE_TOL: f64 = 1e-12;
const HYP_REL: f64 = 1e-10;
const ARCSINE_REL: f64 = 1e-11;
const LIMIT_REL: f64 = 1e-15;
const FIGURES_TIME: Duration = Duration::from_secs(30);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn lambda_seeds() -> Outcome {
    let start = Instant::now();
    let p = DiscProblem::new(0.5, 1.0).unwrap();
    let (t, _) = solve_disc_recurrence(&p, 10, 10).unwrap();
    let (p3, p4, p5) = (PI.powi(3), PI.powi(4), PI.powi(5));
    let printed = [
        (0, 0, -1.0 / PI),
        (1, 0, -1.0 / (3.0 * PI)),
        (2, 0, -1.0 / (5.0 * PI)),
        (0, 1, -4.0 / p3),
        (0, 2, -16.0 / p5),
        (1, 1, -4.0 / (3.0 * p3)),
        (1, 2, -16.0 / (3.0 * p5)),
        (0, 3, -4.0 / p3 * (16.0 / p4 + 2.0 / 9.0)),
        (0, 4, -64.0 / p5 * (4.0 / p4 + 1.0 / 9.0)),
    ];
    let worst = printed
        .iter()
        .map(|&(n, k, v)| rel(t.a[n][k], v))
        .fold(0.0, f64::max);
    let dt = start.elapsed();
    outcome(
        worst <= SEED_REL && dt < SEED_TIME,
        format!("max rel err {worst:.2e} (tol {SEED_REL:.0e}), {dt:.2?}"),
    )
}

fn asymptotic_coefficients() -> Outcome {
    let start = Instant::now();
    let p = DiscProblem::new(0.5, 1.0).unwrap();
    let (t, _) = solve_disc_recurrence(&p, 10, 10).unwrap();
    let c = t.sum_coefficients();
    let (p2, p4) = (PI * PI, PI.powi(4));
    // bracket of the small-λ expansion, common factor 4/π^{3/2} removed
    let printed = [
        1.0,
        4.0 / p2,
        16.0 / p4 + 1.0 / 3.0,
        4.0 / p2 * (16.0 / p4 + 5.0 / 9.0),
        256.0 / (p4 * p4) + 112.0 / (9.0 * p4) + 1.0 / 5.0,
    ];
    let worst = printed
        .iter()
        .enumerate()
        .map(|(j, &v)| rel(-PI * c[j], v))
        .fold(0.0, f64::max);
    let dt = start.elapsed();
    outcome(
        worst <= ASYMPTOTIC_REL && dt < ASYMPTOTIC_TIME,
        format!("max rel err {worst:.2e} (tol {ASYMPTOTIC_REL:.0e}), {dt:.2?}"),
    )
}

fn sif_sweep() -> Outcome {
    let start = Instant::now();
    let cfg = RunConfig::default();
    let lambdas: Vec<f64> = (1..=60).map(|k| 0.6 * k as f64 / 60.0).collect();
    let t = run_sif_sweep(&cfg, &lambdas).unwrap();
    let dt = start.elapsed();
    let (mut wide, mut narrow) = (0.0f64, 0.0f64);
    for row in &t.branches[0].rows {
        let gap = rel(row[2], row[1]);
        wide = wide.max(gap);
        if row[0] <= 0.3 {
            narrow = narrow.max(gap);
        }
    }
    outcome(
        wide <= SIF_GAP_WIDE && narrow <= SIF_GAP_NARROW && dt < SIF_TIME,
        format!(
            "gap {:.3}% for λ<=0.6 (tol {}%), {:.4}% for λ<=0.3 (tol {}%), {dt:.2?}",
            100.0 * wide,
            100.0 * SIF_GAP_WIDE,
            100.0 * narrow,
            100.0 * SIF_GAP_NARROW
        ),
    )
}

fn continuity() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for lambda in [0.3, 0.5, 0.7] {
        let p = DiscProblem::new(lambda, 1.0).unwrap();
        let c = solve_disc_reduction(&p, N).unwrap();
        let (d1, d2) = continuity_defects(&p, &c).unwrap();
        worst = worst.max(d1).max(d2);
    }
    let dt = start.elapsed();
    outcome(
        worst <= CONTINUITY_TOL && dt < CONTINUITY_TIME,
        format!("max defect {worst:.2e} (tol {CONTINUITY_TOL:.0e}), {dt:.2?}"),
    )
}

fn determinants() -> Outcome {
    let start = Instant::now();
    let samples = contour_samples(20);
    let disc = solve_factor_columns_disc(0.5, N).unwrap();
    let (dp, dm) = determinant_deviation(&disc, &samples).unwrap();
    let ann = solve_factor_columns_annulus(0.2, 0.5, N).unwrap();
    let (ap, am) = determinant_deviation(&ann, &samples).unwrap();
    let dt = start.elapsed();
    outcome(
        dp.max(dm) <= DET_DISC_TOL && ap.max(am) <= DET_ANNULUS_TOL && dt < DET_TIME,
        format!(
            "disc {:.2e} (tol {DET_DISC_TOL:.0e}), annulus {:.2e} (tol {DET_ANNULUS_TOL:.0e}), {dt:.2?}",
            dp.max(dm),
            ap.max(am)
        ),
    )
}

fn boundary() -> Outcome {
    let samples = contour_samples(20);
    let lambda: f64 = 0.5;
    let (l0, l1): (f64, f64) = (0.2, 0.5);
    let disc = solve_factor_columns_disc(lambda, N).unwrap();
    let ann = solve_factor_columns_annulus(l0, l1, N).unwrap();
    let rd = boundary_residual(&disc, &samples).unwrap();
    let ra = boundary_residual(&ann, &samples).unwrap();
    // X⁺ − G₀X⁻ vanishes identically in the truncated entries, so the decay
    // in N is read from the residues of the rows the truncation drops
    let coarse = solve_factor_columns_disc(lambda, N / 2).unwrap();
    let ratio_d = analyticity_defect_disc(&disc).tail_rows / analyticity_defect_disc(&coarse).tail_rows;
    let coarse = solve_factor_columns_annulus(l0, l1, N / 2).unwrap();
    let ratio_a =
        analyticity_defect_annulus(&ann).tail_rows / analyticity_defect_annulus(&coarse).tail_rows;
    let bound_d = lambda * lambda + DECAY_SLACK;
    let bound_a = l1 * l1 + DECAY_SLACK;
    outcome(
        rd <= BOUNDARY_DISC_TOL && ra <= BOUNDARY_ANNULUS_TOL && ratio_d <= bound_d && ratio_a <= bound_a,
        format!(
            "residual disc {rd:.2e} (tol {BOUNDARY_DISC_TOL:.0e}), annulus {ra:.2e} (tol {BOUNDARY_ANNULUS_TOL:.0e}); \
             N=30→60 ratio disc {ratio_d:.2e} (tol {bound_d}), annulus {ratio_a:.2e} (tol {bound_a})"
        ),
    )
}

fn index_fit(f: &impl FactorMatrices) -> (bool, f64) {
    let mut zero = true;
    let mut dist: f64 = 0.0;
    for side in [Side::Plus, Side::Minus] {
        match partial_index_estimate(f, side) {
            Ok(r) => {
                zero &= r.indices.iter().all(|&k| k == 0);
                dist = dist.max(r.max_fit_distance);
            }
            Err(_) => return (false, f64::INFINITY),
        }
    }
    (zero, dist)
}

fn partial_indices() -> Outcome {
    let (zd, dd) = index_fit(&solve_factor_columns_disc(0.5, N).unwrap());
    let (za, da) = index_fit(&solve_factor_columns_annulus(0.2, 0.5, N).unwrap());
    outcome(
        zd && za && dd <= INDEX_FIT_TOL && da <= INDEX_FIT_TOL,
        format!(
            "indices zero: disc {zd}, annulus {za}; fit distance {:.2e} (tol {INDEX_FIT_TOL})",
            dd.max(da)
        ),
    )
}

fn dual_methods() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 1..=14 {
        let lambda = 0.05 * k as f64;
        let p = DiscProblem::new(lambda, 1.0).unwrap();
        let red = solve_disc_reduction(&p, N).unwrap();
        let (_, rec) = solve_disc_recurrence(&p, N, K).unwrap();
        for (x, y) in red.a_plus.iter().zip(&rec.a_plus).chain(red.b_minus.iter().zip(&rec.b_minus)) {
            worst = worst.max((x - y).abs());
        }
    }
    let disc = solve_disc_reduction(&DiscProblem::new(0.5, 1.0).unwrap(), N).unwrap();
    let ann = solve_annulus_reduction(&AnnulusProblem::new(0.0, 0.5, 1.0).unwrap(), N).unwrap();
    let degenerate = disc
        .a_plus
        .iter()
        .zip(&ann.a_plus)
        .chain(disc.b_minus.iter().zip(&ann.b_minus))
        .fold(0.0f64, |w, (x, y)| w.max((x - y).abs()));
    outcome(
        worst <= METHOD_TOL && degenerate <= DEGENERATE_TOL,
        format!(
            "reduction vs recurrence {worst:.2e} (tol {METHOD_TOL:.0e}), annulus at λ0=0 vs disc {degenerate:.2e} (tol {DEGENERATE_TOL:.0e})"
        ),
    )
}

fn special_functions() -> Outcome {
    let mut hyp: f64 = 0.0;
    for m in [0usize, 1, 2, 3, 5, 8, 13, 21, 34, 59] {
        let mf = m as f64;
        for j in 0..=19 {
            let x = 0.95 * j as f64 / 19.0;
            let a = gauss_2f1(0.5, mf + 0.5, mf + 1.5, x).unwrap();
            hyp = hyp.max(rel(a, oracle::hyp2f1(0.5, mf + 0.5, mf + 1.5, x)));
            let b = gauss_2f1(1.5, 0.5 - mf, 1.5 - mf, x).unwrap();
            // this family has roots in x, where only the absolute error is meaningful
            let want = oracle::hyp2f1(1.5, 0.5 - mf, 1.5 - mf, x);
            hyp = hyp.max((b - want).abs() / want.abs().max(1.0));
        }
    }
    let mut arcsine: f64 = 0.0;
    for k in 0..50 {
        let x = 0.999 * (k as f64 + 0.5) / 50.0;
        arcsine = arcsine.max(rel(gauss_2f1(0.5, 0.5, 1.5, x * x).unwrap(), x.asin() / x));
    }
    let mut limit: f64 = 0.0;
    let (mut rising, mut fact) = (1.0, 1.0);
    for m in 0..60usize {
        if m > 0 {
            rising *= 0.5 + m as f64;
            fact *= m as f64;
        }
        limit = limit.max(rel(f_m_limit(m), PI * rising / (2.0 * fact)));
    }
    outcome(
        hyp <= HYP_REL && arcsine <= ARCSINE_REL && limit <= LIMIT_REL,
        format!(
            "2F1 vs 256-bit series {hyp:.2e} (tol {HYP_REL:.0e}), arcsine {arcsine:.2e} (tol {ARCSINE_REL:.0e}), f_m(1) {limit:.2e} (tol {LIMIT_REL:.0e})"
        ),
    )
}

fn figures() -> Outcome {
    let start = Instant::now();
    let dir = std::env::temp_dir().join(format!("pennycrack-acceptance-{}", std::process::id()));
    let cfg = RunConfig::default();
    let paths = run_figures(&cfg, &dir).unwrap();
    let dt = start.elapsed();
    let read = |i: usize| FieldTable::from_csv(&std::fs::read_to_string(&paths[i]).unwrap()).unwrap();
    let stress = read(0);
    let disp = read(2);
    let _ = std::fs::remove_dir_all(&dir);

    let contact = stress.branch("contact").unwrap();
    let negative = contact
        .rows
        .iter()
        .filter(|r| r[0] / cfg.lambda <= 0.99)
        .all(|r| r[1] < 0.0);
    let mut edge: f64 = 0.0;
    for b in &disp.branches {
        let first = b.rows.first().unwrap()[1];
        let last = b.rows.last().unwrap()[1];
        edge = edge.max((first - cfg.delta_over_a).abs()).max(last.abs());
    }
    outcome(
        paths.len() == 3 && disp.branches.len() == 3 && negative && edge <= CONTINUITY_TOL && dt < FIGURES_TIME,
        format!(
            "{} tables, contact branch negative on r/b<=0.99: {negative}, endpoint defect {edge:.2e} (tol {CONTINUITY_TOL:.0e}), {dt:.2?}",
            paths.len()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("recurrence seeds", lambda_seeds),
        ("asymptotic SIF coefficients", asymptotic_coefficients),
        ("exact vs asymptotic SIF sweep", sif_sweep),
        ("displacement continuity", continuity),
        ("determinant identities", determinants),
        ("boundary factorization residual", boundary),
        ("partial indices", partial_indices),
        ("dual-method equivalence", dual_methods),
        ("special-function oracles", special_functions),
        ("figure regeneration", figures),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {:>2} {name}: {}", i + 1, o.detail);
        if !o.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
