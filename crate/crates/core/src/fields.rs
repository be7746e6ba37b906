//! Stress, stress intensity factor and crack-face displacement for the disc.
//!
//! Stresses are reported as `θ₁σ_z(r, 0)`, displacements as `u_z(r, 0⁺)/a`.
//! With `y = 1 − x` and `x` the squared radial ratio, the contact stress is
//!
//! ```text
//! θ₁σ_z = −δ*/(λ√(πy)) − (1/(2λ√π)) Σ B⁻_m/(m − 1/2) F(3/2, 1/2 − m; 3/2 − m; x)
//!       = (1/(λ√(πy))) [−δ* + Σ B⁻_m Σ_{j<=m} (−m)_j/(1/2)_j y^j]
//! ```
//!
//! and ahead of the tip (`x = a²/r²`)
//!
//! ```text
//! θ₁σ_z = (1/√π)(a/r)³ Σ A⁺_m/(m − 1/2) F(3/2, 1/2 − m; 3/2 − m; x)
//!       = −(2/√(πy))(a/r)³ Σ A⁺_m Σ_{j<=m} (−m)_j/(1/2)_j y^j
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::models::{CoefficientSetDisc, DiscProblem};
use crate::specfun::{f_m, f_m_limit, gauss_2f1};
use crate::{Error, Result};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Contact stress switches to the polynomial form above this `r/b`.
pub const CONTACT_SWITCH: f64 = 0.8;
/// Outer stress switches to the polynomial form below this `r/a`.
pub const OUTER_SWITCH: f64 = 1.2;

/// Which representation of a stress series to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StressForm {
    /// `2F1` series, fast away from the singular endpoint.
    Hypergeometric,
    /// Finite double sum with the square-root factor pulled out.
    Polynomial,
    Auto,
}

/// One sampled point of a field curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub r_over_a: f64,
    pub value: f64,
}

/// Stress intensity factor at `r = a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SifResult {
    /// `Σ A⁺_m`.
    pub raw_sum: f64,
    /// `K_I = −2√a Σ A⁺_m`.
    pub k1_exact: f64,
    /// `K_I` from the five-term small-λ expansion.
    pub k1_asymptotic: f64,
    /// `θ₁ a^{−1/2} K_I / δ₀` with `δ₀ = δ/a`.
    pub normalized: f64,
    pub normalized_asymptotic: f64,
}

fn coefficient_count(c: &CoefficientSetDisc) -> usize {
    c.truncation_n.min(c.a_plus.len()).min(c.b_minus.len())
}

// Σ_m coef_m/(m − 1/2) F(3/2, 1/2 − m; 3/2 − m; x)
fn hypergeometric_sum(coef: &[f64], x: f64) -> Result<f64> {
    let mut sum = 0.0;
    for (m, &cm) in coef.iter().enumerate() {
        if cm == 0.0 {
            continue;
        }
        let mf = m as f64;
        sum += cm / (mf - 0.5) * gauss_2f1(1.5, 0.5 - mf, 1.5 - mf, x)?;
    }
    Ok(sum)
}

// Σ_m coef_m Σ_{j<=m} (−m)_j/(1/2)_j y^j
fn polynomial_sum(coef: &[f64], y: f64) -> f64 {
    let mut sum = 0.0;
    for (m, &cm) in coef.iter().enumerate() {
        let mut term = 1.0;
        let mut inner = 1.0;
        for j in 0..m {
            let jf = j as f64;
            term *= (jf - m as f64) / (jf + 0.5) * y;
            inner += term;
        }
        sum += cm * inner;
    }
    sum
}

/// `θ₁σ_z(r, 0⁺)` under the disc, `0 <= r/b < 1`.
pub fn stress_contact(p: &DiscProblem, c: &CoefficientSetDisc, r_over_b: f64) -> Result<f64> {
    stress_contact_with(p, c, r_over_b, StressForm::Auto)
}

pub fn stress_contact_with(
    p: &DiscProblem,
    c: &CoefficientSetDisc,
    r_over_b: f64,
    form: StressForm,
) -> Result<f64> {
    if !r_over_b.is_finite() {
        return Err(Error::NonFinite);
    }
    if !(0.0..1.0).contains(&r_over_b) {
        return Err(Error::Domain {
            what: "stress_contact r/b",
            value: r_over_b,
        });
    }
    let lam = p.lambda;
    let b = &c.b_minus[..coefficient_count(c)];
    let x = r_over_b * r_over_b;
    let y = 1.0 - x;
    let form = match form {
        StressForm::Auto if r_over_b <= CONTACT_SWITCH => StressForm::Hypergeometric,
        StressForm::Auto => StressForm::Polynomial,
        f => f,
    };
    let value = match form {
        StressForm::Polynomial => (polynomial_sum(b, y) - p.delta_star) / (lam * (PI * y).sqrt()),
        _ => {
            -p.delta_star / (lam * (PI * y).sqrt())
                - hypergeometric_sum(b, x)? / (2.0 * lam * SQRT_PI)
        }
    };
    Ok(p.theta1 * value)
}

/// `θ₁σ_z(r, 0)` ahead of the crack tip, `r/a > 1`.
pub fn stress_outer(p: &DiscProblem, c: &CoefficientSetDisc, r_over_a: f64) -> Result<f64> {
    stress_outer_with(p, c, r_over_a, StressForm::Auto)
}

pub fn stress_outer_with(
    p: &DiscProblem,
    c: &CoefficientSetDisc,
    r_over_a: f64,
    form: StressForm,
) -> Result<f64> {
    if !r_over_a.is_finite() {
        return Err(Error::NonFinite);
    }
    if r_over_a <= 1.0 {
        return Err(Error::Domain {
            what: "stress_outer r/a",
            value: r_over_a,
        });
    }
    let a = &c.a_plus[..coefficient_count(c)];
    let x = 1.0 / (r_over_a * r_over_a);
    let y = 1.0 - x;
    let cube = x * x.sqrt();
    let form = match form {
        StressForm::Auto if r_over_a >= OUTER_SWITCH => StressForm::Hypergeometric,
        StressForm::Auto => StressForm::Polynomial,
        f => f,
    };
    let value = match form {
        StressForm::Polynomial => -2.0 / (PI * y).sqrt() * cube * polynomial_sum(a, y),
        _ => cube / SQRT_PI * hypergeometric_sum(a, x)?,
    };
    Ok(p.theta1 * value)
}

/// `√(2π(r/a − 1)) σ_z(r, 0)`, which tends to `K_I/√a` as `r → a⁺`.
pub fn near_tip_sif(p: &DiscProblem, c: &CoefficientSetDisc, r_over_a: f64) -> Result<f64> {
    Ok((2.0 * PI * (r_over_a - 1.0)).sqrt() * stress_outer(p, c, r_over_a)? / p.theta1)
}

const ASYMPTOTIC_TERMS: usize = 5;

/// Coefficients of `λ, λ², …, λ⁵` in the normalized small-λ expansion,
/// before the common factor `4/π^{3/2}`.
pub fn sif_asymptotic_coefficients() -> [f64; ASYMPTOTIC_TERMS] {
    let p2 = PI * PI;
    let p4 = p2 * p2;
    [
        1.0,
        4.0 / p2,
        16.0 / p4 + 1.0 / 3.0,
        4.0 / p2 * (16.0 / p4 + 5.0 / 9.0),
        256.0 / (p4 * p4) + 112.0 / (9.0 * p4) + 0.2,
    ]
}

/// Normalized `θ₁ a^{−1/2} K_I/δ₀` from the first `n_terms` powers of λ.
pub fn sif_asymptotic(lambda: f64, n_terms: usize) -> Result<f64> {
    if !(1..=ASYMPTOTIC_TERMS).contains(&n_terms) {
        return Err(Error::InvalidParameter {
            name: "n_terms",
            reason: format!("must be between 1 and {ASYMPTOTIC_TERMS}, got {n_terms}"),
        });
    }
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::Domain {
            what: "sif_asymptotic lambda",
            value: lambda,
        });
    }
    let coef = sif_asymptotic_coefficients();
    let poly = coef[..n_terms]
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * lambda + c);
    Ok(4.0 / (PI * SQRT_PI) * lambda * poly)
}

/// Exact `K_I` and its normalized form, next to the five-term expansion.
pub fn sif_exact(p: &DiscProblem, c: &CoefficientSetDisc) -> SifResult {
    let raw_sum: f64 = c.a_plus[..coefficient_count(c)].iter().sum();
    let root_a = p.a_radius.sqrt();
    let normalized = if p.delta_star == 0.0 {
        0.0
    } else {
        -4.0 * raw_sum / (p.delta_star * SQRT_PI)
    };
    let normalized_asymptotic =
        sif_asymptotic(p.lambda, ASYMPTOTIC_TERMS).expect("lambda validated by DiscProblem");
    // K_I = normalized · √a δ₀/θ₁
    let scale = root_a * p.delta_over_a() / p.theta1;
    SifResult {
        raw_sum,
        k1_exact: -2.0 * root_a * raw_sum,
        k1_asymptotic: normalized_asymptotic * scale,
        normalized,
        normalized_asymptotic,
    }
}

// χ₁ = −(δ*/√π) asin(λ/r) + (λ/(√π r)) Σ B_m/(2m+1) f_m(λ²/r²) − (2/√π) Σ A_m/(2m+1) f_m(r²)
// with each f_m supplied by the caller so the endpoint limits can be plugged in.
fn chi1(
    p: &DiscProblem,
    c: &CoefficientSetDisc,
    asin_term: f64,
    inner_factor: f64,
    inner: impl Fn(usize) -> Result<f64>,
    outer: impl Fn(usize) -> Result<f64>,
) -> Result<f64> {
    let n = coefficient_count(c);
    let mut sb = 0.0;
    let mut sa = 0.0;
    for m in 0..n {
        let w = 1.0 / (2.0 * m as f64 + 1.0);
        if c.b_minus[m] != 0.0 {
            sb += c.b_minus[m] * w * inner(m)?;
        }
        if c.a_plus[m] != 0.0 {
            sa += c.a_plus[m] * w * outer(m)?;
        }
    }
    Ok((-p.delta_star * asin_term + inner_factor * sb - 2.0 * sa) / SQRT_PI)
}

/// `u_z(r, 0⁺)/a` on the open crack face `b < r < a`.
pub fn displacement(p: &DiscProblem, c: &CoefficientSetDisc, r_over_a: f64) -> Result<f64> {
    if !r_over_a.is_finite() {
        return Err(Error::NonFinite);
    }
    let lam = p.lambda;
    if !(r_over_a > lam && r_over_a < 1.0) {
        return Err(Error::Domain {
            what: "displacement r/a",
            value: r_over_a,
        });
    }
    let xi = (lam / r_over_a).powi(2);
    let xo = r_over_a * r_over_a;
    let value = chi1(
        p,
        c,
        (lam / r_over_a).asin(),
        lam / r_over_a,
        |m| f_m(m, xi),
        |m| f_m(m, xo),
    )?;
    Ok(-p.theta1 * value)
}

/// Closed-form limits `(u_z(b⁺)/a, u_z(a⁻)/a)`, with `f_m(1)` taken exactly.
pub fn displacement_edges(p: &DiscProblem, c: &CoefficientSetDisc) -> Result<(f64, f64)> {
    let lam = p.lambda;
    let x = lam * lam;
    let at_b = chi1(
        p,
        c,
        0.5 * PI,
        1.0,
        |m| Ok(f_m_limit(m)),
        |m| f_m(m, x),
    )?;
    let at_a = chi1(p, c, lam.asin(), lam, |m| f_m(m, x), |m| Ok(f_m_limit(m)))?;
    Ok((-p.theta1 * at_b, -p.theta1 * at_a))
}

/// `(|u_z(b⁺)/a − δ/a|, |u_z(a⁻)/a|)`; both vanish up to truncation error.
pub fn continuity_defects(p: &DiscProblem, c: &CoefficientSetDisc) -> Result<(f64, f64)> {
    let (at_b, at_a) = displacement_edges(p, c)?;
    Ok(((at_b - p.delta_over_a()).abs(), at_a.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::solve_disc_reduction;

    fn solved(lambda: f64) -> (DiscProblem, CoefficientSetDisc) {
        let p = DiscProblem::new(lambda, 1.0).unwrap();
        let c = solve_disc_reduction(&p, 60).unwrap();
        (p, c)
    }

    #[test]
    fn contact_reference_values() {
        let (p, c) = solved(0.5);
        let s0 = stress_contact(&p, &c, 0.0).unwrap();
        let s8 = stress_contact(&p, &c, 0.8).unwrap();
        assert!((s0 + 1.4017).abs() < 1e-4, "{s0}");
        assert!((s8 + 2.3923).abs() < 1e-4, "{s8}");
    }

    #[test]
    fn contact_without_coefficients() {
        let p = DiscProblem::new(0.01, 1.0).unwrap();
        let c = CoefficientSetDisc {
            a_plus: vec![0.0; 3],
            b_minus: vec![0.0; 3],
            truncation_n: 3,
        };
        let s = stress_contact(&p, &c, 0.0).unwrap();
        assert!((s + 1.0 / (0.01 * SQRT_PI)).abs() < 1e-12);
    }

    #[test]
    fn domains() {
        let (p, c) = solved(0.5);
        assert!(stress_contact(&p, &c, 1.0).is_err());
        assert!(stress_outer(&p, &c, 1.0).is_err());
        assert!(displacement(&p, &c, 0.5).is_err());
        assert!(displacement(&p, &c, 1.0).is_err());
        assert!(sif_asymptotic(0.3, 6).is_err());
        assert!(sif_asymptotic(0.3, 0).is_err());
    }

    #[test]
    fn outer_branch_is_tensile_near_tip() {
        let (p, c) = solved(0.5);
        let s = stress_outer(&p, &c, 1.2).unwrap();
        assert!((s - 0.2474).abs() < 1e-4, "{s}");
    }

    #[test]
    fn near_tip_limit_matches_sif() {
        let (p, c) = solved(0.5);
        let sif = sif_exact(&p, &c);
        let tip = near_tip_sif(&p, &c, 1.0 + 1e-6).unwrap();
        assert!((tip - sif.k1_exact).abs() < 1e-2 * sif.k1_exact.abs());
    }

    #[test]
    fn asymptotic_first_terms() {
        let lam = 0.2;
        let one = sif_asymptotic(lam, 1).unwrap();
        assert!((one - 4.0 * lam / (PI * SQRT_PI)).abs() < 1e-16);
        let two = sif_asymptotic(lam, 2).unwrap();
        let expected = 4.0 / (PI * SQRT_PI) * 4.0 / (PI * PI) * lam * lam;
        assert!((two - one - expected).abs() < 1e-16);
    }

    #[test]
    fn continuity_at_half() {
        let (p, c) = solved(0.5);
        let (db, da) = continuity_defects(&p, &c).unwrap();
        assert!(db < 1e-9 && da < 1e-9, "{db} {da}");
        let (p, c) = solved(0.1);
        let (db, da) = continuity_defects(&p, &c).unwrap();
        assert!(db < 1e-12 && da < 1e-12, "{db} {da}");
    }

    #[test]
    fn zero_load_has_no_defect() {
        let p = DiscProblem::new(0.5, 0.0).unwrap();
        let c = solve_disc_reduction(&p, 10).unwrap();
        assert_eq!(continuity_defects(&p, &c).unwrap(), (0.0, 0.0));
        assert_eq!(sif_exact(&p, &c).normalized, 0.0);
    }

    #[test]
    fn sampled_displacement_approaches_edges() {
        let (p, c) = solved(0.5);
        let (ub, ua) = displacement_edges(&p, &c).unwrap();
        let near_b = displacement(&p, &c, 0.5 + 1e-10).unwrap();
        let near_a = displacement(&p, &c, 1.0 - 1e-10).unwrap();
        assert!((near_b - ub).abs() < 1e-4);
        assert!((near_a - ua).abs() < 1e-4);
    }
}
