//! Subcommand implementations. Each returns data; writing is left to the caller.

use std::fmt;
use std::path::{Path, PathBuf};

use pennycrack::factorization::{
    analyticity_defect_annulus, analyticity_defect_disc, boundary_residual, contour_samples,
    determinant_deviation, factor_system_residual_annulus, factor_system_residual_disc,
    partial_index_estimate, solve_factor_columns_annulus, solve_factor_columns_disc,
    FactorMatrices,
};
use pennycrack::fields::{
    continuity_defects, displacement, displacement_edges, near_tip_sif, sif_exact, stress_contact,
    stress_contact_with, stress_outer, stress_outer_with, StressForm,
};
use pennycrack::models::{
    annulus_residual, disc_residual, solve_annulus_reduction, solve_disc_recurrence,
    solve_disc_reduction, AnnulusProblem, CoefficientSetAnnulus, CoefficientSetDisc, DiscProblem,
};
use pennycrack::specfun::gauss_2f1;
use pennycrack::Side;
use serde::{Deserialize, Serialize};

use crate::config::{ConfigError, Model, OutputFormat, RunConfig};
use crate::table::{fmt_f64, FieldTable, CODE_VERSION};

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Numeric(pennycrack::Error),
    Io(std::io::Error),
    Verification(Report),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Io(_) => 1,
            RunError::Numeric(_) | RunError::Verification(_) => 2,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "config error: {e}"),
            RunError::Numeric(e) => write!(f, "numerical error: {e}"),
            RunError::Io(e) => write!(f, "i/o error: {e}"),
            RunError::Verification(r) => {
                write!(f, "verification failed:")?;
                for c in r.checks.iter().filter(|c| !c.passed) {
                    write!(f, " {} ({} > {})", c.name, c.measured, c.tolerance)?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<pennycrack::Error> for RunError {
    fn from(e: pennycrack::Error) -> Self {
        RunError::Numeric(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

pub type RunResult<T> = std::result::Result<T, RunError>;

fn require_disc(cfg: &RunConfig, what: &str) -> RunResult<()> {
    if cfg.model == Model::Annulus {
        return Err(ConfigError::new("model", format!("{what} is available for the disc model only")).into());
    }
    Ok(())
}

// ---------------------------------------------------------------- solve

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Solution {
    Disc {
        version: String,
        problem: DiscProblem,
        coefficients: CoefficientSetDisc,
    },
    Annulus {
        version: String,
        problem: AnnulusProblem,
        coefficients: CoefficientSetAnnulus,
    },
}

impl Solution {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("solution serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_table(&self, cfg: &RunConfig) -> FieldTable {
        match self {
            Solution::Disc { coefficients: c, .. } => {
                let mut t = FieldTable::new(cfg.header(), &["n", "a_plus", "b_minus"]);
                let rows = (0..c.a_plus.len())
                    .map(|n| vec![n as f64, c.a_plus[n], c.b_minus[n]])
                    .collect();
                t.push_branch("coefficients", rows);
                t
            }
            Solution::Annulus { coefficients: c, .. } => {
                let mut t = FieldTable::new(
                    cfg.header(),
                    &["n", "a_plus", "a_minus", "b_plus", "b_minus"],
                );
                let rows = (0..c.a_plus.len())
                    .map(|n| vec![n as f64, c.a_plus[n], c.a_minus[n], c.b_plus[n], c.b_minus[n]])
                    .collect();
                t.push_branch("coefficients", rows);
                t
            }
        }
    }

    pub fn render(&self, cfg: &RunConfig) -> String {
        match cfg.output_format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_table(cfg).to_csv(),
        }
    }
}

pub fn run_solve(cfg: &RunConfig) -> RunResult<Solution> {
    cfg.validate()?;
    let version = CODE_VERSION.to_string();
    Ok(match cfg.model {
        Model::Disc => {
            let problem = cfg.disc_problem(cfg.lambda)?;
            let coefficients = solve_disc_reduction(&problem, cfg.truncation_n)?;
            Solution::Disc {
                version,
                problem,
                coefficients,
            }
        }
        Model::Annulus => {
            let problem = cfg.annulus_problem()?;
            let coefficients = solve_annulus_reduction(&problem, cfg.truncation_n)?;
            Solution::Annulus {
                version,
                problem,
                coefficients,
            }
        }
    })
}

// ---------------------------------------------------------------- grids

/// `r/b` from 0 to `1 − gap`, geometric in the distance to 1.
pub fn contact_grid(points: usize, gap: f64) -> Vec<f64> {
    (0..points)
        .map(|k| 1.0 - gap.powf(k as f64 / (points - 1) as f64))
        .collect()
}

/// `r/a` from `1 + gap` to `outer_max`, geometric in the distance to 1.
pub fn outer_grid(points: usize, gap: f64, outer_max: f64) -> Vec<f64> {
    let span = (outer_max - 1.0) / gap;
    (0..points)
        .map(|k| 1.0 + gap * span.powf(k as f64 / (points - 1) as f64))
        .collect()
}

/// `r/a` on `[λ, 1]`, clustered at both ends.
pub fn face_grid(points: usize, lambda: f64) -> Vec<f64> {
    (0..points)
        .map(|k| {
            if k == 0 {
                lambda
            } else if k == points - 1 {
                1.0
            } else {
                let t = k as f64 / (points - 1) as f64;
                lambda + (1.0 - lambda) * 0.5 * (1.0 - (std::f64::consts::PI * t).cos())
            }
        })
        .collect()
}

// ---------------------------------------------------------------- fields

fn solve_disc(cfg: &RunConfig, lambda: f64) -> RunResult<(DiscProblem, CoefficientSetDisc)> {
    let p = cfg.disc_problem(lambda)?;
    let c = solve_disc_reduction(&p, cfg.truncation_n)?;
    Ok((p, c))
}

/// `θ₁σ_z(r, 0)` under the disc (`contact`) and ahead of the tip (`outer`).
pub fn run_stress(cfg: &RunConfig) -> RunResult<FieldTable> {
    cfg.validate()?;
    require_disc(cfg, "stress")?;
    let (p, c) = solve_disc(cfg, cfg.lambda)?;
    let g = &cfg.grid;
    let contact = contact_grid(g.points, g.edge_gap)
        .into_iter()
        .map(|rb| Ok(vec![rb * p.lambda, stress_contact(&p, &c, rb)?]))
        .collect::<RunResult<Vec<_>>>()?;
    let outer = outer_grid(g.points, g.edge_gap, g.outer_max)
        .into_iter()
        .map(|ra| Ok(vec![ra, stress_outer(&p, &c, ra)?]))
        .collect::<RunResult<Vec<_>>>()?;
    let mut t = FieldTable::new(cfg.header(), &["r_over_a", "value"]);
    t.push_branch("contact", contact);
    t.push_branch("outer", outer);
    Ok(t)
}

/// Normalized `θ₁a^{−1/2}K_I/δ₀`, exact and five-term, over a λ grid. With a
/// shear modulus the dimensional `K_I` columns are appended.
pub fn run_sif_sweep(cfg: &RunConfig, lambdas: &[f64]) -> RunResult<FieldTable> {
    cfg.validate()?;
    require_disc(cfg, "sif")?;
    let dimensional = cfg.shear_modulus.is_some();
    let mut columns = vec!["lambda", "normalized_exact", "normalized_asymptotic"];
    if dimensional {
        columns.extend(["k1_exact", "k1_asymptotic"]);
    }
    let mut rows = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let mut row = if lambda == 0.0 {
            vec![0.0; columns.len()]
        } else {
            let (p, c) = solve_disc(cfg, lambda)?;
            let s = sif_exact(&p, &c);
            let mut row = vec![lambda, s.normalized, s.normalized_asymptotic];
            if dimensional {
                row.extend([s.k1_exact, s.k1_asymptotic]);
            }
            row
        };
        row[0] = lambda;
        rows.push(row);
    }
    let mut header = cfg.header();
    header.retain(|(k, _)| k != "lambda");
    let mut t = FieldTable::new(header, &columns);
    t.push_branch("sif", rows);
    Ok(t)
}

pub fn default_sif_lambdas(cfg: &RunConfig) -> Vec<f64> {
    let n = cfg.grid.sif_points;
    (0..n)
        .map(|k| cfg.grid.sif_lambda_max * k as f64 / (n - 1) as f64)
        .collect()
}

/// `u_z(r, 0⁺)/a` on `b <= r <= a` for each λ of the grid. The end rows are
/// the closed-form limits at `r = b⁺` and `r = a⁻`.
pub fn run_displacement(cfg: &RunConfig) -> RunResult<FieldTable> {
    cfg.validate()?;
    require_disc(cfg, "displacement")?;
    let mut header = cfg.header();
    header.retain(|(k, _)| k != "lambda");
    let mut t = FieldTable::new(header, &["r_over_a", "value"]);
    for &lambda in &cfg.grid.displacement_lambdas {
        let (p, c) = solve_disc(cfg, lambda)?;
        let (at_b, at_a) = displacement_edges(&p, &c)?;
        let grid = face_grid(cfg.grid.points, lambda);
        let last = grid.len() - 1;
        let rows = grid
            .iter()
            .enumerate()
            .map(|(k, &r)| {
                let v = match k {
                    0 => at_b,
                    k if k == last => at_a,
                    _ => displacement(&p, &c, r)?,
                };
                Ok(vec![r, v])
            })
            .collect::<RunResult<Vec<_>>>()?;
        t.push_branch(format!("lambda={lambda}"), rows);
    }
    Ok(t)
}

// ---------------------------------------------------------------- verify

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, measured: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            measured,
            tolerance,
            // NaN never passes
            passed: measured <= tolerance,
        });
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            OutputFormat::Csv => {
                let mut out = format!("# version={}\nname,measured,tolerance,passed\n", self.version);
                for c in &self.checks {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        c.name,
                        fmt_f64(c.measured),
                        fmt_f64(c.tolerance),
                        c.passed
                    ));
                }
                out
            }
        }
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |w, (x, y)| w.max((x - y).abs()))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn index_distance(f: &impl FactorMatrices) -> RunResult<f64> {
    let mut worst: f64 = 0.0;
    for side in [Side::Plus, Side::Minus] {
        match partial_index_estimate(f, side) {
            Ok(r) => {
                let nonzero = r.indices.iter().any(|&k| k != 0);
                worst = worst.max(if nonzero { f64::INFINITY } else { r.max_fit_distance });
            }
            Err(pennycrack::Error::FitAmbiguity { .. }) => return Ok(f64::INFINITY),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(worst)
}

/// Re-measures every invariant of the solver stack.
pub fn run_verify(cfg: &RunConfig) -> RunResult<Report> {
    cfg.validate()?;
    let n = cfg.truncation_n;
    let mut r = Report {
        version: CODE_VERSION.to_string(),
        checks: Vec::new(),
    };
    let lambda = match cfg.model {
        Model::Disc => cfg.lambda,
        Model::Annulus => cfg.lambda1,
    };

    let (p, c) = solve_disc(cfg, lambda)?;
    let scale = c.a_plus.iter().chain(&c.b_minus).fold(p.delta_star, |m, v| m.max(v.abs()));
    r.push("disc_system_residual", disc_residual(&p, &c) / scale, 1e-12);

    let (table, _) = solve_disc_recurrence(&p, n, cfg.order_k)?;
    let seed = (0..table.rows()).fold(0.0f64, |w, k| {
        let want = -p.delta_star / (2.0 * std::f64::consts::PI * (k as f64 + 0.5));
        w.max(rel(table.a[k][0], want)).max(table.b[k][0].abs())
    });
    r.push("recurrence_seed_rows", seed, 1e-15);

    let mut agree: f64 = 0.0;
    for l in [0.1, 0.3, 0.5, 0.7] {
        let q = cfg.disc_problem(l)?;
        let red = solve_disc_reduction(&q, n)?;
        let (_, rec) = solve_disc_recurrence(&q, n, cfg.order_k)?;
        agree = agree.max(max_abs_diff(&red.a_plus, &rec.a_plus) / q.delta_star);
    }
    r.push("reduction_recurrence_agreement", agree, 1e-9);

    let sign = c.a_plus.iter().filter(|&&a| a >= 0.0 && a.abs() > 1e-300).count();
    r.push("a_plus_negative_violations", sign as f64, 0.0);

    let ap = cfg.annulus_problem()?;
    let ac = solve_annulus_reduction(&ap, n)?;
    let ascale = [&ac.a_plus, &ac.a_minus, &ac.b_plus, &ac.b_minus]
        .iter()
        .flat_map(|v| v.iter())
        .fold(ap.delta_star, |m, v| m.max(v.abs()));
    r.push("annulus_system_residual", annulus_residual(&ap, &ac)? / ascale, 1e-12);

    let degenerate = AnnulusProblem { lambda0: 0.0, ..ap };
    let dc = solve_annulus_reduction(&degenerate, n)?;
    let dd = solve_disc_reduction(&degenerate.as_disc(), n)?;
    r.push(
        "annulus_disc_degeneration",
        max_abs_diff(&dc.a_plus, &dd.a_plus) / ap.delta_star,
        1e-12,
    );

    let mut wide: f64 = 0.0;
    let mut narrow: f64 = 0.0;
    for k in 1..=60 {
        let l = 0.6 * k as f64 / 60.0;
        let (q, qc) = solve_disc(cfg, l)?;
        let s = sif_exact(&q, &qc);
        let d = rel(s.normalized_asymptotic, s.normalized);
        wide = wide.max(d);
        if l <= 0.3 {
            narrow = narrow.max(d);
        }
    }
    r.push("sif_asymptotic_gap_to_0.6", wide, 0.05);
    r.push("sif_asymptotic_gap_to_0.3", narrow, 0.005);

    let k = sif_exact(&p, &c).k1_exact;
    r.push("near_tip_sif", rel(near_tip_sif(&p, &c, 1.0 + 1e-6)?, k), 0.01);

    let mut cont: f64 = 0.0;
    let mut dual: f64 = 0.0;
    for l in [0.3, 0.5, 0.7] {
        let (q, qc) = solve_disc(cfg, l)?;
        let (d1, d2) = continuity_defects(&q, &qc)?;
        cont = cont.max(d1.max(d2) / q.delta_over_a());
        for j in 0..=20 {
            let rb = 0.6 + 0.35 * j as f64 / 20.0;
            let h = stress_contact_with(&q, &qc, rb, StressForm::Hypergeometric)?;
            let g = stress_contact_with(&q, &qc, rb, StressForm::Polynomial)?;
            dual = dual.max(rel(g, h));
            let ra = 1.05 + 0.35 * j as f64 / 20.0;
            let h = stress_outer_with(&q, &qc, ra, StressForm::Hypergeometric)?;
            let g = stress_outer_with(&q, &qc, ra, StressForm::Polynomial)?;
            dual = dual.max(rel(g, h));
        }
    }
    r.push("continuity_defects", cont, 1e-9);
    r.push("dual_representation", dual, 1e-9);

    let mut positive = 0usize;
    for l in [0.3, 0.5] {
        let (q, qc) = solve_disc(cfg, l)?;
        for j in 0..=99 {
            if stress_contact(&q, &qc, 0.99 * j as f64 / 99.0)? >= 0.0 {
                positive += 1;
            }
        }
    }
    r.push("contact_stress_sign_violations", positive as f64, 0.0);

    let mut arcsine: f64 = 0.0;
    for j in 0..50 {
        let x = 0.999 * j as f64 / 49.0;
        let want = if x == 0.0 { 1.0 } else { x.asin() / x };
        arcsine = arcsine.max(rel(gauss_2f1(0.5, 0.5, 1.5, x * x)?, want));
    }
    r.push("arcsine_identity", arcsine, 1e-11);

    let samples = contour_samples(20);
    let fd = solve_factor_columns_disc(lambda, n)?;
    let fa = solve_factor_columns_annulus(ap.lambda0, ap.lambda1, n)?;
    r.push("disc_factor_system_residual", factor_system_residual_disc(&fd), 1e-12);
    r.push("annulus_factor_system_residual", factor_system_residual_annulus(&fa), 1e-12);
    let (dp, dm) = determinant_deviation(&fd, &samples)?;
    r.push("disc_det_plus", dp, 1e-9);
    r.push("disc_det_minus", dm, 1e-9);
    let (dp, dm) = determinant_deviation(&fa, &samples)?;
    r.push("annulus_det_plus", dp, 1e-8);
    r.push("annulus_det_minus", dm, 1e-8);
    r.push("disc_boundary_residual", boundary_residual(&fd, &samples)?, 1e-8);
    r.push("annulus_boundary_residual", boundary_residual(&fa, &samples)?, 1e-7);

    let half = (n / 2).max(1);
    let coarse = analyticity_defect_disc(&solve_factor_columns_disc(lambda, half)?).tail_rows;
    let fine = analyticity_defect_disc(&fd).tail_rows;
    r.push("disc_truncation_decay_ratio", fine / coarse, lambda * lambda + 0.05);
    let coarse_a = analyticity_defect_annulus(&solve_factor_columns_annulus(ap.lambda0, ap.lambda1, half)?).tail_rows;
    let fine_a = analyticity_defect_annulus(&fa).tail_rows;
    r.push(
        "annulus_truncation_decay_ratio",
        fine_a / coarse_a,
        ap.lambda1 * ap.lambda1 + 0.05,
    );

    r.push("disc_partial_index_fit", index_distance(&fd)?, 0.1);
    r.push("annulus_partial_index_fit", index_distance(&fa)?, 0.1);
    Ok(r)
}

// ---------------------------------------------------------------- figures

/// Writes the stress, SIF and displacement tables into `dir`.
pub fn run_figures(cfg: &RunConfig, dir: &Path) -> RunResult<Vec<PathBuf>> {
    cfg.validate()?;
    require_disc(cfg, "figures")?;
    std::fs::create_dir_all(dir)?;
    let ext = cfg.output_format.extension();
    let tables = [
        ("fig1_stress", run_stress(cfg)?),
        ("fig2_sif", run_sif_sweep(cfg, &default_sif_lambdas(cfg))?),
        ("fig3_displacement", run_displacement(cfg)?),
    ];
    let mut written = Vec::with_capacity(tables.len());
    for (name, t) in tables {
        let path = dir.join(format!("{name}.{ext}"));
        std::fs::write(&path, t.render(cfg.output_format))?;
        written.push(path);
    }
    Ok(written)
}
