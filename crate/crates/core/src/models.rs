//! Pole-removal coefficient systems for the disc and annulus inclusions.
//!
//! Disc (`0 <= r <= b`, `λ = b/a`):
//!
//! ```text
//! B⁻_n = (2λ^{2n}/π) Σ_m A⁺_m / (n + m + 1/2)
//! A⁺_n = (λ^{2n+1}/2π) [Σ_m B⁻_m / (n + m + 1/2) + 2ω₁⁻(2n + 1)]
//! ```
//!
//! Annulus (`c <= r <= b`, `λ₀ = c/a`, `λ₁ = b/a`) couples four families
//! `A±_n`, `B±_n`; see [`solve_annulus_reduction`].

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::specfun::{self, POLE_GUARD, SERIES_MAX_TERMS};
use crate::{Error, Result, Side};

/// Default number of equations per coefficient family.
pub const DEFAULT_N: usize = 60;
/// Default number of λ-powers in the recurrence expansion.
pub const DEFAULT_K: usize = 120;
/// Above this value of `(λ₀/λ₁)²` the `ω̃` functions use the `2F1` form.
pub const OMEGA_TILDE_SWITCH: f64 = 0.75;

const SQRT_PI: f64 = 1.772_453_850_905_516;

fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be positive and finite, got {value}")))
    }
}

fn check_load(delta_star: f64) -> Result<()> {
    if delta_star.is_finite() && delta_star >= 0.0 {
        Ok(())
    } else {
        Err(invalid(
            "delta_star",
            format!("must be nonnegative and finite, got {delta_star}"),
        ))
    }
}

fn check_truncation(n: usize) -> Result<()> {
    if n == 0 {
        Err(invalid("truncation_n", "must be at least 1"))
    } else {
        Ok(())
    }
}

/// Flat disc of radius `b = λa` wedged into a crack of radius `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscProblem {
    pub lambda: f64,
    /// `δ* = 2δ / (a θ₁ √π)`.
    pub delta_star: f64,
    /// `θ₁ = (1 − ν)/G`; only used to restore dimensions.
    pub theta1: f64,
    pub a_radius: f64,
}

impl DiscProblem {
    /// Nondimensional problem with `θ₁ = 1` and `a = 1`.
    pub fn new(lambda: f64, delta_star: f64) -> Result<Self> {
        let p = Self {
            lambda,
            delta_star,
            theta1: 1.0,
            a_radius: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds the problem from the indentation ratio `δ/a`.
    pub fn from_delta_over_a(lambda: f64, delta_over_a: f64, theta1: f64, a_radius: f64) -> Result<Self> {
        check_positive("theta1", theta1)?;
        let p = Self {
            lambda,
            delta_star: 2.0 * delta_over_a / (theta1 * SQRT_PI),
            theta1,
            a_radius,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(invalid(
                "lambda",
                format!("must lie in (0, 1), got {}", self.lambda),
            ));
        }
        check_load(self.delta_star)?;
        check_positive("theta1", self.theta1)?;
        check_positive("a_radius", self.a_radius)
    }

    /// `δ/a` recovered from `δ*`.
    pub fn delta_over_a(&self) -> f64 {
        0.5 * self.delta_star * self.theta1 * SQRT_PI
    }
}

/// Flat annulus `λ₀a <= r <= λ₁a`. `λ₀ = 0` is accepted and reduces to the disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusProblem {
    pub lambda0: f64,
    pub lambda1: f64,
    pub delta_star: f64,
    pub theta1: f64,
    pub a_radius: f64,
}

impl AnnulusProblem {
    pub fn new(lambda0: f64, lambda1: f64, delta_star: f64) -> Result<Self> {
        let p = Self {
            lambda0,
            lambda1,
            delta_star,
            theta1: 1.0,
            a_radius: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda1 > 0.0 && self.lambda1 < 1.0) {
            return Err(invalid(
                "lambda1",
                format!("must lie in (0, 1), got {}", self.lambda1),
            ));
        }
        if !(self.lambda0 >= 0.0 && self.lambda0 < self.lambda1) {
            return Err(invalid(
                "lambda0",
                format!(
                    "must satisfy 0 <= lambda0 < lambda1 = {}, got {}",
                    self.lambda1, self.lambda0
                ),
            ));
        }
        check_load(self.delta_star)?;
        check_positive("theta1", self.theta1)?;
        check_positive("a_radius", self.a_radius)
    }

    /// `q = λ₀/λ₁`.
    pub fn ratio(&self) -> f64 {
        self.lambda0 / self.lambda1
    }

    /// `δ/(aθ₁) = δ*√π/2`.
    fn load(&self) -> f64 {
        0.5 * self.delta_star * SQRT_PI
    }

    /// The disc problem obtained at `λ₀ = 0`.
    pub fn as_disc(&self) -> DiscProblem {
        DiscProblem {
            lambda: self.lambda1,
            delta_star: self.delta_star,
            theta1: self.theta1,
            a_radius: self.a_radius,
        }
    }
}

/// Solved disc coefficients `A⁺_n`, `B⁻_n`, `n < truncation_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSetDisc {
    pub a_plus: Vec<f64>,
    pub b_minus: Vec<f64>,
    pub truncation_n: usize,
}

/// Solved annulus coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSetAnnulus {
    pub a_plus: Vec<f64>,
    pub a_minus: Vec<f64>,
    pub b_plus: Vec<f64>,
    pub b_minus: Vec<f64>,
    pub truncation_n: usize,
}

/// λ-power coefficients: `A⁺_n = λ^{2n+1} Σ_k a_{n,k} λ^k`,
/// `B⁻_n = λ^{2n} Σ_k b_{n,k} λ^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceTable {
    /// `a[n][k]`; rows beyond the requested `N` are kept because the
    /// recurrence needs them up to `n = K/2`.
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub order_k: usize,
}

impl RecurrenceTable {
    pub fn rows(&self) -> usize {
        self.a.len()
    }

    /// Coefficients `c_j` of `Σ_n A⁺_n = Σ_j c_j λ^{j+1}`, `j < K`.
    pub fn sum_coefficients(&self) -> Vec<f64> {
        (0..self.order_k)
            .map(|j| {
                (0..=j / 2)
                    .filter(|&n| n < self.rows())
                    .map(|n| self.a[n][j - 2 * n])
                    .sum()
            })
            .collect()
    }
}

/// `ω₁±(s)` for the flat disc: `ω₁⁻ = −δ*/s`, `ω₁⁺ = (δ*/s)(√π/L⁺(s) − 1)`.
pub fn omega1_disc(side: Side, s: f64, p: &DiscProblem) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::NonFinite);
    }
    if s.abs() < POLE_GUARD {
        return Err(Error::Pole { at: s, index: 0 });
    }
    match side {
        Side::Minus => Ok(-p.delta_star / s),
        Side::Plus => {
            let recip = specfun::l_plus_recip_real(s)?;
            Ok(p.delta_star / s * (SQRT_PI * recip - 1.0))
        }
    }
}

pub(crate) fn solve_dense(m: DMatrix<f64>, rhs: DVector<f64>) -> Result<DVector<f64>> {
    let lu = m.clone().lu();
    match lu.solve(&rhs) {
        Some(x) if x.iter().all(|v| v.is_finite()) => Ok(x),
        _ => {
            let sv = m.singular_values();
            let max = sv.max();
            let min = sv.min();
            Err(Error::Singular {
                condition: if min > 0.0 { max / min } else { f64::INFINITY },
            })
        }
    }
}

/// Solves the disc system truncated to `n` equations per family.
///
/// Unknowns are interleaved as `(B⁻_0, A⁺_0, B⁻_1, A⁺_1, …)`.
pub fn solve_disc_reduction(p: &DiscProblem, n: usize) -> Result<CoefficientSetDisc> {
    p.validate()?;
    check_truncation(n)?;
    let lam = p.lambda;
    let ib = |k: usize| 2 * k;
    let ia = |k: usize| 2 * k + 1;
    let mut m = DMatrix::<f64>::identity(2 * n, 2 * n);
    let mut rhs = DVector::<f64>::zeros(2 * n);
    for row in 0..n {
        let pb = 2.0 * lam.powi(2 * row as i32) / PI;
        let pa = lam.powi(2 * row as i32 + 1) / (2.0 * PI);
        for col in 0..n {
            let w = 1.0 / ((row + col) as f64 + 0.5);
            m[(ib(row), ia(col))] -= pb * w;
            m[(ia(row), ib(col))] -= pa * w;
        }
        rhs[ia(row)] = pa * 2.0 * omega1_disc(Side::Minus, 2.0 * row as f64 + 1.0, p)?;
    }
    let x = solve_dense(m, rhs)?;
    Ok(CoefficientSetDisc {
        a_plus: (0..n).map(|k| x[ia(k)]).collect(),
        b_minus: (0..n).map(|k| x[ib(k)]).collect(),
        truncation_n: n,
    })
}

/// Fills the λ-power table to order `k` and sums it into `A⁺_n`, `B⁻_n`.
///
/// Comparing powers of λ in the disc system gives
///
/// ```text
/// b_{n,k} = (2/π)  Σ_{2m+1 <= k} a_{m,k-2m-1} / (n + m + 1/2)
/// a_{n,k} = (1/2π) Σ_{2m <= k}   b_{m,k-2m}   / (n + m + 1/2) − [k = 0] δ*/(π(2n + 1))
/// ```
///
/// so `b_{n,0} = 0` and `a_{n,0} = −δ*/(2π(n + 1/2))`.
pub fn solve_disc_recurrence(
    p: &DiscProblem,
    n: usize,
    k: usize,
) -> Result<(RecurrenceTable, CoefficientSetDisc)> {
    p.validate()?;
    check_truncation(n)?;
    if k == 0 {
        return Err(invalid("order_k", "must be at least 1"));
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
            b[row][kk] = 2.0 / PI * sum;
        }
        for row in 0..rows {
            let mut sum = 0.0;
            for m in (0..rows).take_while(|&m| 2 * m <= kk) {
                sum += b[m][kk - 2 * m] / ((row + m) as f64 + 0.5);
            }
            a[row][kk] = sum / (2.0 * PI);
            if kk == 0 {
                a[row][kk] -= p.delta_star / (PI * (2.0 * row as f64 + 1.0));
            }
        }
    }
    let lam = p.lambda;
    let horner = |coef: &[f64]| coef.iter().rev().fold(0.0, |acc, &c| acc * lam + c);
    let coefficients = CoefficientSetDisc {
        a_plus: (0..n)
            .map(|row| lam.powi(2 * row as i32 + 1) * horner(&a[row]))
            .collect(),
        b_minus: (0..n)
            .map(|row| lam.powi(2 * row as i32) * horner(&b[row]))
            .collect(),
        truncation_n: n,
    };
    Ok((RecurrenceTable { a, b, order_k: k }, coefficients))
}

/// Max over the truncated disc equations of `|LHS − RHS|`.
pub fn disc_residual(p: &DiscProblem, c: &CoefficientSetDisc) -> f64 {
    let lam = p.lambda;
    let n = c.truncation_n.min(c.a_plus.len()).min(c.b_minus.len());
    let mut worst: f64 = 0.0;
    for row in 0..n {
        let (mut sa, mut sb) = (0.0, 0.0);
        for col in 0..n {
            let w = 1.0 / ((row + col) as f64 + 0.5);
            sa += c.a_plus[col] * w;
            sb += c.b_minus[col] * w;
        }
        let rb = c.b_minus[row] - 2.0 * lam.powi(2 * row as i32) / PI * sa;
        let ra = c.a_plus[row]
            - lam.powi(2 * row as i32 + 1) / (2.0 * PI)
                * (sb - 2.0 * p.delta_star / (2.0 * row as f64 + 1.0));
        worst = worst.max(rb.abs()).max(ra.abs());
    }
    worst
}

/// How the `ω̃±` functions are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OmegaTildeMethod {
    Series,
    Hypergeometric,
    /// Series for `q² <= 0.75`, `2F1` above.
    Auto,
}

/// Which of `ω₁`, `ω₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OmegaIndex {
    One,
    Two,
}

fn lattice_pole(s: f64, first: f64) -> Option<i64> {
    // poles at first + 2n
    let n = ((s - first) / 2.0).round();
    if n >= 0.0 && (s - first - 2.0 * n).abs() < POLE_GUARD {
        Some(n as i64)
    } else {
        None
    }
}

fn sum_weighted_series(
    s: f64,
    weight0: f64,
    next_weight: impl Fn(f64, usize) -> f64,
    pole: impl Fn(usize) -> f64,
) -> Result<f64> {
    let mut w = weight0;
    let mut sum = 0.0;
    let last_pole_index = (s.abs() / 2.0).ceil() as usize + 1;
    for n in 0..SERIES_MAX_TERMS {
        let term = w / (s - pole(n));
        sum += term;
        if n > last_pole_index && (term.abs() < 1e-16 * sum.abs() || w == 0.0) {
            return Ok(sum);
        }
        w = next_weight(w, n);
    }
    Err(Error::Convergence {
        terms: SERIES_MAX_TERMS,
    })
}

/// `ω̃⁺(s) = (2/π) Σ_n Γ(n+3/2)/(n+1)! · q^{2n+2} / (s − 2n − 2)`.
pub fn omega_tilde_plus(s: f64, q: f64, method: OmegaTildeMethod) -> Result<f64> {
    if !(s.is_finite() && q.is_finite()) {
        return Err(Error::NonFinite);
    }
    if !(0.0..1.0).contains(&q) {
        return Err(Error::Domain {
            what: "omega_tilde ratio",
            value: q,
        });
    }
    if q == 0.0 {
        return Ok(0.0);
    }
    if let Some(n) = lattice_pole(s, 2.0) {
        return Err(Error::Pole { at: s, index: n });
    }
    let q2 = q * q;
    let use_hyp = match method {
        OmegaTildeMethod::Series => false,
        OmegaTildeMethod::Hypergeometric => true,
        OmegaTildeMethod::Auto => q2 > OMEGA_TILDE_SWITCH,
    };
    if use_hyp {
        if s.abs() < POLE_GUARD {
            return Err(Error::Pole { at: s, index: 0 });
        }
        let f = specfun::gauss_2f1(-s / 2.0, 0.5, 1.0 - s / 2.0, q2)?;
        return Ok(2.0 / (SQRT_PI * s) * (f - 1.0));
    }
    // Γ(3/2)/1! = √π/2
    let series = sum_weighted_series(
        s,
        0.5 * SQRT_PI * q2,
        |w, n| w * (n as f64 + 1.5) / (n as f64 + 2.0) * q2,
        |n| 2.0 * n as f64 + 2.0,
    )?;
    Ok(2.0 / PI * series)
}

/// `ω̃⁻(s) = (1/π) Σ_n Γ(n+1/2)/n! · q^{2n+1} / (s + 2n + 1)`.
pub fn omega_tilde_minus(s: f64, q: f64, method: OmegaTildeMethod) -> Result<f64> {
    if !(s.is_finite() && q.is_finite()) {
        return Err(Error::NonFinite);
    }
    if !(0.0..1.0).contains(&q) {
        return Err(Error::Domain {
            what: "omega_tilde ratio",
            value: q,
        });
    }
    if q == 0.0 {
        return Ok(0.0);
    }
    if let Some(n) = lattice_pole(-s, 1.0) {
        return Err(Error::Pole { at: s, index: n });
    }
    let q2 = q * q;
    let use_hyp = match method {
        OmegaTildeMethod::Series => false,
        OmegaTildeMethod::Hypergeometric => true,
        OmegaTildeMethod::Auto => q2 > OMEGA_TILDE_SWITCH,
    };
    if use_hyp {
        let f = specfun::gauss_2f1((s + 1.0) / 2.0, 0.5, (s + 3.0) / 2.0, q2)?;
        return Ok(q / (SQRT_PI * (s + 1.0)) * f);
    }
    let series = sum_weighted_series(
        s,
        SQRT_PI * q,
        |w, n| w * (n as f64 + 0.5) / (n as f64 + 1.0) * q2,
        |n| -(2.0 * n as f64 + 1.0),
    )?;
    Ok(series / PI)
}

/// `ω₁±(s)`, `ω₂±(s)` for the flat annulus.
pub fn omega_annulus_flat(
    which: OmegaIndex,
    side: Side,
    s: f64,
    p: &AnnulusProblem,
    method: OmegaTildeMethod,
) -> Result<f64> {
    p.validate()?;
    if !s.is_finite() {
        return Err(Error::NonFinite);
    }
    let q = p.ratio();
    let k = p.load();
    let zero_guard = || {
        if s.abs() < POLE_GUARD {
            Err(Error::Pole { at: s, index: 0 })
        } else {
            Ok(())
        }
    };
    match (which, side) {
        (OmegaIndex::One, Side::Plus) => {
            zero_guard()?;
            let recip = specfun::l_plus_recip_real(s)?;
            Ok(k * (2.0 / s * (recip - 1.0 / SQRT_PI) - omega_tilde_plus(s, q, method)?))
        }
        (OmegaIndex::One, Side::Minus) => {
            zero_guard()?;
            let recip = specfun::l_plus_recip_real(s)?;
            let shifted = if recip == 0.0 { 0.0 } else { 2.0 / s * recip * q.powf(s) };
            Ok(k * (-2.0 / (s * SQRT_PI) + shifted - omega_tilde_plus(s, q, method)?))
        }
        (OmegaIndex::Two, Side::Plus) => {
            zero_guard()?;
            let lm = specfun::l_minus_real(s)?;
            Ok(k * (q.powf(-s) * lm / s - omega_tilde_minus(s, q, method)?))
        }
        (OmegaIndex::Two, Side::Minus) => {
            zero_guard()?;
            let lm = specfun::l_minus_real(s)?;
            Ok(k * (lm / s - omega_tilde_minus(s, q, method)?))
        }
    }
}

#[derive(Clone, Copy)]
enum Family {
    BMinus,
    APlus,
    AMinus,
    BPlus,
}

fn annulus_index(f: Family, n: usize) -> usize {
    4 * n
        + match f {
            Family::BMinus => 0,
            Family::APlus => 1,
            Family::AMinus => 2,
            Family::BPlus => 3,
        }
}

struct AnnulusForcing {
    a_plus: Vec<f64>,
    a_minus: Vec<f64>,
    b_plus: Vec<f64>,
}

// Bracketed ω terms of each equation: 2ω₁⁻(2n+1), −2ω₁⁺(−2n−1), −2ω₂⁻(2n+2).
fn annulus_forcing(p: &AnnulusProblem, n: usize) -> Result<AnnulusForcing> {
    let m = OmegaTildeMethod::Auto;
    let mut f = AnnulusForcing {
        a_plus: Vec::with_capacity(n),
        a_minus: Vec::with_capacity(n),
        b_plus: Vec::with_capacity(n),
    };
    for row in 0..n {
        let r = row as f64;
        f.a_plus
            .push(2.0 * omega_annulus_flat(OmegaIndex::One, Side::Minus, 2.0 * r + 1.0, p, m)?);
        f.a_minus
            .push(-2.0 * omega_annulus_flat(OmegaIndex::One, Side::Plus, -2.0 * r - 1.0, p, m)?);
        f.b_plus
            .push(-2.0 * omega_annulus_flat(OmegaIndex::Two, Side::Minus, 2.0 * r + 2.0, p, m)?);
    }
    Ok(f)
}

/// Solves the truncated annulus system (`4N` unknowns, interleaved per `n`
/// as `B⁻_n, A⁺_n, A⁻_n, B⁺_n`):
///
/// ```text
/// B⁻_n = (2λ₁^{2n}/π) Σ A⁺_m/(n+m+1/2)
/// A⁺_n = (λ₁^{2n+1}/2π) [Σ B⁻_m/(n+m+1/2) + Σ B⁺_m/(n−m−1/2) + 2ω₁⁻(2n+1)]
/// A⁻_n = −(q^{2n+1}/2π) [Σ B⁺_m/(n+m+3/2) + Σ B⁻_m/(n−m+1/2) − 2ω₁⁺(−2n−1)]
/// B⁺_n = −(2q^{2n+2}/π) [Σ A⁻_m/(n+m+3/2) − 2ω₂⁻(2n+2)]
/// ```
///
/// At `λ₀ = 0` the disc system is solved instead and `A⁻`, `B⁺` are zero.
pub fn solve_annulus_reduction(p: &AnnulusProblem, n: usize) -> Result<CoefficientSetAnnulus> {
    p.validate()?;
    check_truncation(n)?;
    if p.lambda0 == 0.0 {
        let disc = solve_disc_reduction(&p.as_disc(), n)?;
        return Ok(CoefficientSetAnnulus {
            a_plus: disc.a_plus,
            a_minus: vec![0.0; n],
            b_plus: vec![0.0; n],
            b_minus: disc.b_minus,
            truncation_n: n,
        });
    }
    let l1 = p.lambda1;
    let q = p.ratio();
    let forcing = annulus_forcing(p, n)?;
    let idx = annulus_index;
    let mut m = DMatrix::<f64>::identity(4 * n, 4 * n);
    let mut rhs = DVector::<f64>::zeros(4 * n);
    for row in 0..n {
        let r = row as f64;
        let p_bm = 2.0 * l1.powi(2 * row as i32) / PI;
        let p_ap = l1.powi(2 * row as i32 + 1) / (2.0 * PI);
        let p_am = -q.powi(2 * row as i32 + 1) / (2.0 * PI);
        let p_bp = -2.0 * q.powi(2 * row as i32 + 2) / PI;
        for col in 0..n {
            let c = col as f64;
            m[(idx(Family::BMinus, row), idx(Family::APlus, col))] -= p_bm / (r + c + 0.5);
            m[(idx(Family::APlus, row), idx(Family::BMinus, col))] -= p_ap / (r + c + 0.5);
            m[(idx(Family::APlus, row), idx(Family::BPlus, col))] -= p_ap / (r - c - 0.5);
            m[(idx(Family::AMinus, row), idx(Family::BPlus, col))] -= p_am / (r + c + 1.5);
            m[(idx(Family::AMinus, row), idx(Family::BMinus, col))] -= p_am / (r - c + 0.5);
            m[(idx(Family::BPlus, row), idx(Family::AMinus, col))] -= p_bp / (r + c + 1.5);
        }
        rhs[idx(Family::APlus, row)] = p_ap * forcing.a_plus[row];
        rhs[idx(Family::AMinus, row)] = p_am * forcing.a_minus[row];
        rhs[idx(Family::BPlus, row)] = p_bp * forcing.b_plus[row];
    }
    let x = solve_dense(m, rhs)?;
    let take = |f: Family| (0..n).map(|k| x[idx(f, k)]).collect::<Vec<_>>();
    Ok(CoefficientSetAnnulus {
        a_plus: take(Family::APlus),
        a_minus: take(Family::AMinus),
        b_plus: take(Family::BPlus),
        b_minus: take(Family::BMinus),
        truncation_n: n,
    })
}

/// Max over the truncated annulus equations of `|LHS − RHS|`.
pub fn annulus_residual(p: &AnnulusProblem, c: &CoefficientSetAnnulus) -> Result<f64> {
    let n = c.truncation_n;
    if [&c.a_plus, &c.a_minus, &c.b_plus, &c.b_minus]
        .iter()
        .any(|v| v.len() < n)
    {
        return Err(invalid("coefficients", "shorter than truncation_n"));
    }
    let l1 = p.lambda1;
    let q = p.ratio();
    let forcing = if p.lambda0 == 0.0 {
        // the coupling prefactors vanish; only the A⁺ forcing survives
        AnnulusForcing {
            a_plus: (0..n)
                .map(|row| {
                    omega1_disc(Side::Minus, 2.0 * row as f64 + 1.0, &p.as_disc()).map(|w| 2.0 * w)
                })
                .collect::<Result<_>>()?,
            a_minus: vec![0.0; n],
            b_plus: vec![0.0; n],
        }
    } else {
        annulus_forcing(p, n)?
    };
    let mut worst: f64 = 0.0;
    for row in 0..n {
        let r = row as f64;
        let mut s = [0.0; 6];
        for col in 0..n {
            let cf = col as f64;
            s[0] += c.a_plus[col] / (r + cf + 0.5);
            s[1] += c.b_minus[col] / (r + cf + 0.5);
            s[2] += c.b_plus[col] / (r - cf - 0.5);
            s[3] += c.b_plus[col] / (r + cf + 1.5);
            s[4] += c.b_minus[col] / (r - cf + 0.5);
            s[5] += c.a_minus[col] / (r + cf + 1.5);
        }
        let res = [
            c.b_minus[row] - 2.0 * l1.powi(2 * row as i32) / PI * s[0],
            c.a_plus[row]
                - l1.powi(2 * row as i32 + 1) / (2.0 * PI) * (s[1] + s[2] + forcing.a_plus[row]),
            c.a_minus[row]
                + q.powi(2 * row as i32 + 1) / (2.0 * PI) * (s[3] + s[4] + forcing.a_minus[row]),
            c.b_plus[row] + 2.0 * q.powi(2 * row as i32 + 2) / PI * (s[5] + forcing.b_plus[row]),
        ];
        worst = res.iter().fold(worst, |w, v| w.max(v.abs()));
    }
    Ok(worst)
}
