//! Canonical factorization `G₀(s) = X⁺(s) [X⁻(s)]⁻¹` on the contour
//! `Re s = 1/2`.
//!
//! Disc (2×2): with `c_l = Ψ_l⁺ + δ_{l1}`, `d_l = Ω_l⁻ + δ_{l2}`,
//!
//! ```text
//! X⁺ = [ (λ^{−s} cot(πs/2) c_l + d_l)/2 ]    X⁻ = [ (c_l + λ^s tan(πs/2) d_l)/2 ]
//!      [ c_l                            ]         [ d_l / λ                      ]
//! ```
//!
//! Annulus (3×3): with `P⁺ = Ψ_l⁺ + δ_{l1}`, `P⁻ = Ψ_l⁻ + δ_{l3}`,
//! `Ω = Ω_l⁺ + Ω_l⁻ + δ_{l2}`, `q = λ₀/λ₁`, `T = tan(πs/2)`, `C = cot(πs/2)`,
//!
//! ```text
//! X⁺ = [ (λ₁^{−s} C P⁺ + Ω)/2, (q^{−s} T Ω + P⁻)/λ₀, P⁺ ]ᵀ
//! X⁻ = [ (λ₁^s T Ω + P⁺)/2,    (q^s C P⁻ + Ω)/λ₁,    P⁻/2 ]ᵀ
//! ```
//!
//! The boundary relation `X⁺ = G₀X⁻` holds identically in the coefficients,
//! so its residual only measures roundoff. The truncation error shows up in
//! the residues of `X±` at the poles inside their own half-planes, reported
//! by the `analyticity_defect` functions.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::models::solve_dense;
use crate::specfun::{tan_half_pi, POLE_GUARD};
use crate::{Error, Result, Side};

/// Contour abscissa.
pub const GAMMA: f64 = 0.5;

/// Coefficients of one column of the factorization matrices. Families that a
/// model does not use are empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorColumn {
    /// 1-based column index `l`; the Kronecker sources are `δ_{lk}`.
    pub column: usize,
    pub a_plus: Vec<f64>,
    pub a_minus: Vec<f64>,
    pub b_plus: Vec<f64>,
    pub b_minus: Vec<f64>,
}

/// λ-power table of one disc column: `A_{l,n} = λ^{2n+1} Σ_k a_{n,k} λ^k`,
/// `B_{l,n} = λ^{2n} Σ_k b_{n,k} λ^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorRecurrence {
    pub column: usize,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub order_k: usize,
}

/// Both disc columns, by reduction and by recurrence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscFactorization {
    pub lambda: f64,
    pub truncation_n: usize,
    /// Reduction solution; used by the evaluators.
    pub columns: Vec<FactorColumn>,
    pub recurrence_columns: Vec<FactorColumn>,
    pub tables: Vec<FactorRecurrence>,
}

/// The three annulus columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnulusFactorization {
    pub lambda0: f64,
    pub lambda1: f64,
    pub truncation_n: usize,
    pub columns: Vec<FactorColumn>,
}

/// Common interface of the two factorizations.
pub trait FactorMatrices {
    fn dim(&self) -> usize;
    fn eval_x(&self, side: Side, s: Complex64) -> Result<DMatrix<Complex64>>;
    fn g0(&self, s: Complex64) -> Result<DMatrix<Complex64>>;
    /// Constant value of `det X±`.
    fn expected_det(&self, side: Side) -> f64;
}

fn kron(l: usize, k: usize) -> f64 {
    if l == k {
        1.0
    } else {
        0.0
    }
}

fn check_lambda(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must lie in (0, 1), got {v}"),
        })
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter {
            name: "truncation_n",
            reason: "must be at least 1".into(),
        })
    } else {
        Ok(())
    }
}

/// Solves the disc column systems
///
/// ```text
/// A_{l,n} = (λ^{2n+1}/π) (Σ_m B_{l,m}/(n+m+1/2) + 2δ_{l2})
/// B_{l,n} = (λ^{2n}/π)   (Σ_m A_{l,m}/(n+m+1/2) − 2δ_{l1})
/// ```
///
/// by reduction and by the λ-power recurrence of order `2n`.
pub fn solve_factor_columns_disc(lambda: f64, n: usize) -> Result<DiscFactorization> {
    check_lambda("lambda", lambda)?;
    check_n(n)?;
    let mut columns = Vec::with_capacity(2);
    let mut recurrence_columns = Vec::with_capacity(2);
    let mut tables = Vec::with_capacity(2);
    for l in 1..=2 {
        columns.push(factor_column_disc_reduction(lambda, l, n)?);
        let (table, col) = factor_column_disc_recurrence(lambda, l, n, 2 * n)?;
        recurrence_columns.push(col);
        tables.push(table);
    }
    Ok(DiscFactorization {
        lambda,
        truncation_n: n,
        columns,
        recurrence_columns,
        tables,
    })
}

fn factor_column_disc_reduction(lambda: f64, l: usize, n: usize) -> Result<FactorColumn> {
    // unknowns (B_0, A_0, B_1, A_1, …)
    let mut m = DMatrix::<f64>::identity(2 * n, 2 * n);
    let mut rhs = DVector::<f64>::zeros(2 * n);
    for row in 0..n {
        let pb = lambda.powi(2 * row as i32) / PI;
        let pa = lambda.powi(2 * row as i32 + 1) / PI;
        for col in 0..n {
            let w = 1.0 / ((row + col) as f64 + 0.5);
            m[(2 * row, 2 * col + 1)] -= pb * w;
            m[(2 * row + 1, 2 * col)] -= pa * w;
        }
        rhs[2 * row] = -2.0 * pb * kron(l, 1);
        rhs[2 * row + 1] = 2.0 * pa * kron(l, 2);
    }
    let x = solve_dense(m, rhs)?;
    Ok(FactorColumn {
        column: l,
        a_plus: (0..n).map(|k| x[2 * k + 1]).collect(),
        a_minus: Vec::new(),
        b_plus: Vec::new(),
        b_minus: (0..n).map(|k| x[2 * k]).collect(),
    })
}

/// λ-power recurrence for disc column `l`:
///
/// ```text
/// b_{n,k} = (1/π) Σ_{2m+1 <= k} a_{m,k−2m−1}/(n+m+1/2) − [k = 0] 2δ_{l1}/π
/// a_{n,k} = (1/π) Σ_{2m <= k}   b_{m,k−2m}  /(n+m+1/2) + [k = 0] 2δ_{l2}/π
/// ```
///
/// The `m = k/2` term of the second sum and the `b_{0,0}` contribution to
/// `a_{n,0}` are needed for column 1, where `b_{m,0} = −2/π`.
pub fn factor_column_disc_recurrence(
    lambda: f64,
    l: usize,
    n: usize,
    k: usize,
) -> Result<(FactorRecurrence, FactorColumn)> {
    check_lambda("lambda", lambda)?;
    check_n(n)?;
    if !(1..=2).contains(&l) || k == 0 {
        return Err(Error::InvalidParameter {
            name: "column",
            reason: format!("column {l} / order {k} out of range"),
        });
    }
    let rows = n.max(k / 2 + 1);
    let mut a = vec![vec![0.0; k]; rows];
    let mut b = vec![vec![0.0; k]; rows];
    for kk in 0..k {
        for row in 0..rows {
            let mut sum = 0.0;
            for m in (0..rows).take_while(|&m| 2 * m < kk) {
                sum += a[m][kk - 2 * m - 1] / ((row + m) as f64 + 0.5);
            }
            b[row][kk] = sum / PI;
            if kk == 0 {
                b[row][kk] -= 2.0 * kron(l, 1) / PI;
            }
        }
        for row in 0..rows {
            let mut sum = 0.0;
            for m in (0..rows).take_while(|&m| 2 * m <= kk) {
                sum += b[m][kk - 2 * m] / ((row + m) as f64 + 0.5);
            }
            a[row][kk] = sum / PI;
            if kk == 0 {
                a[row][kk] += 2.0 * kron(l, 2) / PI;
            }
        }
    }
    let horner = |coef: &[f64]| coef.iter().rev().fold(0.0, |acc, &c| acc * lambda + c);
    let column = FactorColumn {
        column: l,
        a_plus: (0..n)
            .map(|row| lambda.powi(2 * row as i32 + 1) * horner(&a[row]))
            .collect(),
        a_minus: Vec::new(),
        b_plus: Vec::new(),
        b_minus: (0..n)
            .map(|row| lambda.powi(2 * row as i32) * horner(&b[row]))
            .collect(),
    };
    Ok((
        FactorRecurrence {
            column: l,
            a,
            b,
            order_k: k,
        },
        column,
    ))
}

/// Back-substitution residual of the disc column systems.
pub fn factor_system_residual_disc(f: &DiscFactorization) -> f64 {
    let lam = f.lambda;
    let mut worst: f64 = 0.0;
    for col in &f.columns {
        let l = col.column;
        let n = col.a_plus.len();
        for row in 0..n {
            let (mut sa, mut sb) = (0.0, 0.0);
            for m in 0..n {
                let w = 1.0 / ((row + m) as f64 + 0.5);
                sa += col.a_plus[m] * w;
                sb += col.b_minus[m] * w;
            }
            let ra = col.a_plus[row] - lam.powi(2 * row as i32 + 1) / PI * (sb + 2.0 * kron(l, 2));
            let rb = col.b_minus[row] - lam.powi(2 * row as i32) / PI * (sa - 2.0 * kron(l, 1));
            worst = worst.max(ra.abs()).max(rb.abs());
        }
    }
    worst
}

fn real_sum(coef: &[f64], s: f64, pole: impl Fn(usize) -> f64) -> f64 {
    coef.iter()
        .enumerate()
        .map(|(m, &c)| c / (s - pole(m)))
        .sum()
}

fn complex_sum(coef: &[f64], s: Complex64, pole: impl Fn(usize) -> f64) -> Complex64 {
    coef.iter()
        .enumerate()
        .map(|(m, &c)| c / (s - pole(m)))
        .sum()
}

// Ψ⁺ poles at 2m+1, Ψ⁻ at −2m−1, Ω⁺ at 2m+2, Ω⁻ at −2m.
fn pole_psi_plus(m: usize) -> f64 {
    2.0 * m as f64 + 1.0
}
fn pole_psi_minus(m: usize) -> f64 {
    -(2.0 * m as f64) - 1.0
}
fn pole_omega_plus(m: usize) -> f64 {
    2.0 * m as f64 + 2.0
}
fn pole_omega_minus(m: usize) -> f64 {
    -(2.0 * m as f64)
}

fn check_off_lattice(s: Complex64) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = s.re.round();
    if Complex64::new(s.re - n, s.im).norm() < POLE_GUARD {
        return Err(Error::Pole {
            at: s.re,
            index: n as i64,
        });
    }
    Ok(())
}

fn cpow(base: f64, s: Complex64) -> Complex64 {
    (s * base.ln()).exp()
}

impl DiscFactorization {
    fn entries(&self, l: usize, s: Complex64) -> (Complex64, Complex64) {
        let col = &self.columns[l - 1];
        let c = complex_sum(&col.a_plus, s, pole_psi_plus) + kron(l, 1);
        let d = complex_sum(&col.b_minus, s, pole_omega_minus) + kron(l, 2);
        (c, d)
    }
}

impl FactorMatrices for DiscFactorization {
    fn dim(&self) -> usize {
        2
    }

    fn eval_x(&self, side: Side, s: Complex64) -> Result<DMatrix<Complex64>> {
        check_off_lattice(s)?;
        let lam = self.lambda;
        let t = tan_half_pi(s);
        let mut x = DMatrix::<Complex64>::zeros(2, 2);
        for l in 1..=2 {
            let (c, d) = self.entries(l, s);
            let (top, bottom) = match side {
                Side::Plus => (0.5 * (cpow(lam, -s) / t * c + d), c),
                Side::Minus => (0.5 * (c + cpow(lam, s) * t * d), d / lam),
            };
            x[(0, l - 1)] = top;
            x[(1, l - 1)] = bottom;
        }
        Ok(x)
    }

    fn g0(&self, s: Complex64) -> Result<DMatrix<Complex64>> {
        check_off_lattice(s)?;
        let lam = self.lambda;
        let t = tan_half_pi(s);
        Ok(DMatrix::from_row_slice(
            2,
            2,
            &[
                cpow(lam, -s) / t,
                Complex64::new(0.0, 0.0),
                Complex64::new(2.0, 0.0),
                -cpow(lam, s + 1.0) * t,
            ],
        ))
    }

    fn expected_det(&self, side: Side) -> f64 {
        match side {
            Side::Plus => -0.5,
            Side::Minus => 0.5 / self.lambda,
        }
    }
}

/// `X±(s)` for the disc.
pub fn eval_x_disc(side: Side, s: Complex64, f: &DiscFactorization) -> Result<DMatrix<Complex64>> {
    f.eval_x(side, s)
}

/// Residues of `X±` at the poles lying inside their own half-planes,
/// split into the rows kept by the truncation (roundoff only) and the next
/// `N` rows beyond it (pure truncation error).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticityDefect {
    pub solved_rows: f64,
    pub tail_rows: f64,
}

impl AnalyticityDefect {
    pub fn total(&self) -> f64 {
        self.solved_rows.max(self.tail_rows)
    }
}

fn track(defect: &mut AnalyticityDefect, n: usize, truncation: usize, value: f64) {
    let slot = if n < truncation {
        &mut defect.solved_rows
    } else {
        &mut defect.tail_rows
    };
    *slot = slot.max(value.abs());
}

fn coef(v: &[f64], n: usize) -> f64 {
    v.get(n).copied().unwrap_or(0.0)
}

/// Residues of `X⁺` at `s = −2n` and of `X⁻` at `s = 2n + 1`, `n < 2N`.
pub fn analyticity_defect_disc(f: &DiscFactorization) -> AnalyticityDefect {
    let lam = f.lambda;
    let big_n = f.truncation_n;
    let mut defect = AnalyticityDefect {
        solved_rows: 0.0,
        tail_rows: 0.0,
    };
    for col in &f.columns {
        let l = col.column;
        for n in 0..2 * big_n {
            let s_plus = -(2.0 * n as f64);
            let c = real_sum(&col.a_plus, s_plus, pole_psi_plus) + kron(l, 1);
            let res_plus = 0.5 * (lam.powi(2 * n as i32) * 2.0 / PI * c + coef(&col.b_minus, n));
            let s_minus = 2.0 * n as f64 + 1.0;
            let d = real_sum(&col.b_minus, s_minus, pole_omega_minus) + kron(l, 2);
            let res_minus =
                0.5 * (coef(&col.a_plus, n) - 2.0 / PI * lam.powi(2 * n as i32 + 1) * d);
            track(&mut defect, n, big_n, res_plus);
            track(&mut defect, n, big_n, res_minus);
        }
    }
    defect
}

/// Solves the annulus column systems for `l = 1, 2, 3`:
///
/// ```text
/// B⁻_n = (2λ₁^{2n}/π)   (Σ A⁺_m/(2n+2m+1) − δ_{l1})
/// A⁺_n = (2λ₁^{2n+1}/π) (Σ B⁻_m/(2n+2m+1) + Σ B⁺_m/(2n−2m−1) + δ_{l2})
/// A⁻_n = −(2q^{2n+1}/π) (Σ B⁺_m/(2n+2m+3) + Σ B⁻_m/(2n−2m+1) − δ_{l2})
/// B⁺_n = −(2q^{2n+2}/π) (Σ A⁻_m/(2n+2m+3) + δ_{l3})
/// ```
pub fn solve_factor_columns_annulus(
    lambda0: f64,
    lambda1: f64,
    n: usize,
) -> Result<AnnulusFactorization> {
    check_lambda("lambda1", lambda1)?;
    if !(lambda0 > 0.0 && lambda0 < lambda1) {
        return Err(Error::InvalidParameter {
            name: "lambda0",
            reason: format!("must satisfy 0 < lambda0 < lambda1 = {lambda1}, got {lambda0}"),
        });
    }
    check_n(n)?;
    let q = lambda0 / lambda1;
    // unknowns interleaved per n as (B⁻, A⁺, A⁻, B⁺)
    let idx = |family: usize, k: usize| 4 * k + family;
    let (bm, ap, am, bp) = (0, 1, 2, 3);
    let mut m = DMatrix::<f64>::identity(4 * n, 4 * n);
    for row in 0..n {
        let r = 2.0 * row as f64;
        let p_bm = 2.0 * lambda1.powi(2 * row as i32) / PI;
        let p_ap = 2.0 * lambda1.powi(2 * row as i32 + 1) / PI;
        let p_am = -2.0 * q.powi(2 * row as i32 + 1) / PI;
        let p_bp = -2.0 * q.powi(2 * row as i32 + 2) / PI;
        for col in 0..n {
            let c = 2.0 * col as f64;
            m[(idx(bm, row), idx(ap, col))] -= p_bm / (r + c + 1.0);
            m[(idx(ap, row), idx(bm, col))] -= p_ap / (r + c + 1.0);
            m[(idx(ap, row), idx(bp, col))] -= p_ap / (r - c - 1.0);
            m[(idx(am, row), idx(bp, col))] -= p_am / (r + c + 3.0);
            m[(idx(am, row), idx(bm, col))] -= p_am / (r - c + 1.0);
            m[(idx(bp, row), idx(am, col))] -= p_bp / (r + c + 3.0);
        }
    }
    let lu = m.clone().lu();
    let mut columns = Vec::with_capacity(3);
    for l in 1..=3 {
        let mut rhs = DVector::<f64>::zeros(4 * n);
        for row in 0..n {
            rhs[idx(bm, row)] = -2.0 * lambda1.powi(2 * row as i32) / PI * kron(l, 1);
            rhs[idx(ap, row)] = 2.0 * lambda1.powi(2 * row as i32 + 1) / PI * kron(l, 2);
            rhs[idx(am, row)] = 2.0 * q.powi(2 * row as i32 + 1) / PI * kron(l, 2);
            rhs[idx(bp, row)] = -2.0 * q.powi(2 * row as i32 + 2) / PI * kron(l, 3);
        }
        let x = match lu.solve(&rhs) {
            Some(x) if x.iter().all(|v| v.is_finite()) => x,
            _ => solve_dense(m.clone(), rhs)?,
        };
        let take = |family: usize| (0..n).map(|k| x[idx(family, k)]).collect::<Vec<_>>();
        columns.push(FactorColumn {
            column: l,
            a_plus: take(ap),
            a_minus: take(am),
            b_plus: take(bp),
            b_minus: take(bm),
        });
    }
    Ok(AnnulusFactorization {
        lambda0,
        lambda1,
        truncation_n: n,
        columns,
    })
}

/// Back-substitution residual of the annulus column systems.
pub fn factor_system_residual_annulus(f: &AnnulusFactorization) -> f64 {
    let (l1, q) = (f.lambda1, f.lambda0 / f.lambda1);
    let mut worst: f64 = 0.0;
    for col in &f.columns {
        let l = col.column;
        let n = col.a_plus.len();
        for row in 0..n {
            let r = 2.0 * row as f64;
            let mut s = [0.0; 6];
            for m in 0..n {
                let c = 2.0 * m as f64;
                s[0] += col.a_plus[m] / (r + c + 1.0);
                s[1] += col.b_minus[m] / (r + c + 1.0);
                s[2] += col.b_plus[m] / (r - c - 1.0);
                s[3] += col.b_plus[m] / (r + c + 3.0);
                s[4] += col.b_minus[m] / (r - c + 1.0);
                s[5] += col.a_minus[m] / (r + c + 3.0);
            }
            let res = [
                col.b_minus[row] - 2.0 * l1.powi(2 * row as i32) / PI * (s[0] - kron(l, 1)),
                col.a_plus[row]
                    - 2.0 * l1.powi(2 * row as i32 + 1) / PI * (s[1] + s[2] + kron(l, 2)),
                col.a_minus[row] + 2.0 * q.powi(2 * row as i32 + 1) / PI * (s[3] + s[4] - kron(l, 2)),
                col.b_plus[row] + 2.0 * q.powi(2 * row as i32 + 2) / PI * (s[5] + kron(l, 3)),
            ];
            worst = res.iter().fold(worst, |w, v| w.max(v.abs()));
        }
    }
    worst
}

struct AnnulusEntries {
    p_plus: Complex64,
    p_minus: Complex64,
    omega: Complex64,
}

impl AnnulusFactorization {
    fn entries(&self, l: usize, s: Complex64) -> AnnulusEntries {
        let col = &self.columns[l - 1];
        AnnulusEntries {
            p_plus: complex_sum(&col.a_plus, s, pole_psi_plus) + kron(l, 1),
            p_minus: complex_sum(&col.a_minus, s, pole_psi_minus) + kron(l, 3),
            omega: complex_sum(&col.b_plus, s, pole_omega_plus)
                + complex_sum(&col.b_minus, s, pole_omega_minus)
                + kron(l, 2),
        }
    }
}

impl FactorMatrices for AnnulusFactorization {
    fn dim(&self) -> usize {
        3
    }

    fn eval_x(&self, side: Side, s: Complex64) -> Result<DMatrix<Complex64>> {
        check_off_lattice(s)?;
        let (l0, l1) = (self.lambda0, self.lambda1);
        let q = l0 / l1;
        let t = tan_half_pi(s);
        let mut x = DMatrix::<Complex64>::zeros(3, 3);
        for l in 1..=3 {
            let e = self.entries(l, s);
            let column = match side {
                Side::Plus => [
                    0.5 * (cpow(l1, -s) / t * e.p_plus + e.omega),
                    (cpow(q, -s) * t * e.omega + e.p_minus) / l0,
                    e.p_plus,
                ],
                Side::Minus => [
                    0.5 * (cpow(l1, s) * t * e.omega + e.p_plus),
                    (cpow(q, s) / t * e.p_minus + e.omega) / l1,
                    0.5 * e.p_minus,
                ],
            };
            for (row, v) in column.into_iter().enumerate() {
                x[(row, l - 1)] = v;
            }
        }
        Ok(x)
    }

    fn g0(&self, s: Complex64) -> Result<DMatrix<Complex64>> {
        check_off_lattice(s)?;
        let (l0, l1) = (self.lambda0, self.lambda1);
        let t = tan_half_pi(s);
        let zero = Complex64::new(0.0, 0.0);
        Ok(DMatrix::from_row_slice(
            3,
            3,
            &[
                cpow(l1, -s) / t,
                zero,
                zero,
                zero,
                cpow(l0 / l1, -s - 1.0) * t,
                zero,
                Complex64::new(2.0, 0.0),
                -cpow(l1, s + 1.0) * t,
                2.0 * cpow(l0, s),
            ],
        ))
    }

    fn expected_det(&self, side: Side) -> f64 {
        match side {
            Side::Plus => 0.5 / self.lambda0,
            Side::Minus => 0.25 / self.lambda1,
        }
    }
}

/// `X±(s)` for the annulus.
pub fn eval_x_annulus(
    side: Side,
    s: Complex64,
    f: &AnnulusFactorization,
) -> Result<DMatrix<Complex64>> {
    f.eval_x(side, s)
}

/// Residues of `χ₁⁺` at `−2n`, `χ₂⁺` at `−2n − 1`, `χ₁⁻` at `2n + 1` and
/// `χ₂⁻` at `2n + 2`, `n < 2N`.
pub fn analyticity_defect_annulus(f: &AnnulusFactorization) -> AnalyticityDefect {
    let (l0, l1) = (f.lambda0, f.lambda1);
    let q = l0 / l1;
    let big_n = f.truncation_n;
    let mut defect = AnalyticityDefect {
        solved_rows: 0.0,
        tail_rows: 0.0,
    };
    for col in &f.columns {
        let l = col.column;
        let p_plus = |s: f64| real_sum(&col.a_plus, s, pole_psi_plus) + kron(l, 1);
        let p_minus = |s: f64| real_sum(&col.a_minus, s, pole_psi_minus) + kron(l, 3);
        let omega = |s: f64| {
            real_sum(&col.b_plus, s, pole_omega_plus)
                + real_sum(&col.b_minus, s, pole_omega_minus)
                + kron(l, 2)
        };
        for n in 0..2 * big_n {
            let nf = n as f64;
            let e = 2 * n as i32;
            let r1 = 0.5 * (l1.powi(e) * 2.0 / PI * p_plus(-2.0 * nf) + coef(&col.b_minus, n));
            let r2 = (coef(&col.a_minus, n) - 2.0 / PI * q.powi(e + 1) * omega(-2.0 * nf - 1.0)) / l0;
            let r3 = 0.5 * (coef(&col.a_plus, n) - 2.0 / PI * l1.powi(e + 1) * omega(2.0 * nf + 1.0));
            let r4 = (coef(&col.b_plus, n) + 2.0 / PI * q.powi(e + 2) * p_minus(2.0 * nf + 2.0)) / l1;
            for r in [r1, r2, r3, r4] {
                track(&mut defect, n, big_n, r);
            }
        }
    }
    defect
}

/// `count` points on `Re s = γ` with `|Im s|` log-spaced over `[0.1, 10]`,
/// alternating in sign.
pub fn contour_samples(count: usize) -> Vec<Complex64> {
    let pairs = count.div_ceil(2);
    let mut out = Vec::with_capacity(count);
    for k in 0..pairs {
        let frac = if pairs > 1 {
            k as f64 / (pairs - 1) as f64
        } else {
            0.5
        };
        let im = 10f64.powf(-1.0 + 2.0 * frac);
        out.push(Complex64::new(GAMMA, im));
        if out.len() < count {
            out.push(Complex64::new(GAMMA, -im));
        }
    }
    out
}

fn max_entry(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc: f64, z| acc.max(z.norm()))
}

/// `max_s ‖X⁺(s) − G₀(s)X⁻(s)‖_max`; zero for no samples.
pub fn boundary_residual(f: &impl FactorMatrices, samples: &[Complex64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &s in samples {
        let xp = f.eval_x(Side::Plus, s)?;
        let xm = f.eval_x(Side::Minus, s)?;
        let g0 = f.g0(s)?;
        worst = worst.max(max_entry(&(xp - g0 * xm)));
    }
    Ok(worst)
}

pub fn boundary_residual_disc(f: &DiscFactorization, samples: &[Complex64]) -> Result<f64> {
    boundary_residual(f, samples)
}

pub fn boundary_residual_annulus(f: &AnnulusFactorization, samples: &[Complex64]) -> Result<f64> {
    boundary_residual(f, samples)
}

/// `det X±(s)` at each sample.
pub fn determinants(
    f: &impl FactorMatrices,
    side: Side,
    samples: &[Complex64],
) -> Result<Vec<Complex64>> {
    samples
        .iter()
        .map(|&s| Ok(f.eval_x(side, s)?.determinant()))
        .collect()
}

/// `max_s |det X±(s) − expected|` for both sides.
pub fn determinant_deviation(f: &impl FactorMatrices, samples: &[Complex64]) -> Result<(f64, f64)> {
    let dev = |side| -> Result<f64> {
        let expected = f.expected_det(side);
        Ok(determinants(f, side, samples)?
            .iter()
            .fold(0.0, |w: f64, d| w.max((d - expected).norm())))
    };
    Ok((dev(Side::Plus)?, dev(Side::Minus)?))
}

/// Fitted orders at infinity of the columns of `X⁺` or `X⁻`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialIndexReport {
    pub side: Side,
    /// Fitted column orders before rounding.
    pub column_orders: Vec<f64>,
    pub indices: Vec<i64>,
    /// Largest distance between a fitted order and its rounded value.
    pub max_fit_distance: f64,
    /// Fitted order of `det X±`.
    pub determinant_order: f64,
}

const FIT_POINTS: usize = 9;
const FIT_TOLERANCE: f64 = 0.2;

fn fit_points() -> Vec<f64> {
    // t = 2k + 1/2 keeps s = ∓t off both pole lattices and makes tan = ±1
    (0..FIT_POINTS)
        .map(|i| {
            let t = 100.0 * 100f64.powf(i as f64 / (FIT_POINTS - 1) as f64);
            2.0 * (t / 2.0).round() + 0.5
        })
        .collect()
}

fn log_slope(ts: &[f64], values: &[f64]) -> f64 {
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Orders at infinity of the columns of `X±`, sampled along the real axis
/// inside the half-plane where `X±` is analytic (`s = −t` for `X⁺`,
/// `s = t` for `X⁻`, `t ∈ [10², 10⁴]`). The order of a column is the
/// smallest order among its nonvanishing entries.
pub fn partial_index_estimate(f: &impl FactorMatrices, side: Side) -> Result<PartialIndexReport> {
    let ts = fit_points();
    let sign = match side {
        Side::Plus => -1.0,
        Side::Minus => 1.0,
    };
    let dim = f.dim();
    let mut samples = Vec::with_capacity(ts.len());
    for &t in &ts {
        samples.push(f.eval_x(side, Complex64::new(sign * t, 0.0))?);
    }
    let mut column_orders = Vec::with_capacity(dim);
    let mut indices = Vec::with_capacity(dim);
    let mut max_fit_distance: f64 = 0.0;
    for col in 0..dim {
        let mut order = f64::INFINITY;
        for row in 0..dim {
            let mags: Vec<f64> = samples.iter().map(|x| x[(row, col)].norm()).collect();
            if mags.iter().any(|&v| v == 0.0 || !v.is_finite()) {
                continue;
            }
            order = order.min(-log_slope(&ts, &mags));
        }
        if !order.is_finite() {
            return Err(Error::FitAmbiguity {
                column: col + 1,
                order,
            });
        }
        let rounded = order.round();
        let distance = (order - rounded).abs();
        if distance > FIT_TOLERANCE {
            return Err(Error::FitAmbiguity {
                column: col + 1,
                order,
            });
        }
        max_fit_distance = max_fit_distance.max(distance);
        column_orders.push(order);
        indices.push(rounded as i64);
    }
    let dets: Vec<f64> = samples.iter().map(|x| x.determinant().norm()).collect();
    let determinant_order = -log_slope(&ts, &dets);
    Ok(PartialIndexReport {
        side,
        column_orders,
        indices,
        max_fit_distance,
        determinant_order,
    })
}
