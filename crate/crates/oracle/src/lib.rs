//! Reference values computed in 256-bit floating point.
//!
//! These are deliberately simple (shifted Stirling series, raw Maclaurin
//! sums) so that they share no code path with the library under test.

use astro_float::{BigFloat, Consts, RoundingMode};

const PREC: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

// Bernoulli numbers B_2 … B_20 as (numerator, denominator).
const BERNOULLI: [(f64, f64); 10] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
];

fn big(x: f64) -> BigFloat {
    BigFloat::from_f64(x, PREC)
}

fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    x.to_string()
        .parse()
        .expect("BigFloat prints as a decimal number")
}

fn add(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.add(b, PREC, RM)
}

fn sub(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.sub(b, PREC, RM)
}

fn mul(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.mul(b, PREC, RM)
}

fn div(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.div(b, PREC, RM)
}

fn consts() -> Consts {
    Consts::new().expect("constant cache")
}

fn half_ln_two_pi(cc: &mut Consts) -> BigFloat {
    let two_pi = mul(&cc.pi(PREC, RM), &big(2.0));
    mul(&two_pi.ln(PREC, RM, cc), &big(0.5))
}

fn bernoulli_weight(k: usize) -> BigFloat {
    // B_{2k} / (2k (2k − 1)), k >= 1
    let (num, den) = BERNOULLI[k - 1];
    let two_k = 2.0 * k as f64;
    div(&big(num), &mul(&big(den), &big(two_k * (two_k - 1.0))))
}

const SHIFT: usize = 50;

/// `Γ(x)` for `x > 0`, as `Γ(x + 50) / Π_{k<50} (x + k)` with the Stirling
/// series at `x + 50`.
pub fn gamma(x: f64) -> f64 {
    assert!(x > 0.0, "oracle gamma expects a positive argument");
    let mut cc = consts();
    let z = big(x);
    let mut prod = big(1.0);
    for k in 0..SHIFT {
        prod = mul(&prod, &add(&z, &big(k as f64)));
    }
    let w = add(&z, &big(SHIFT as f64));
    let mut lg = sub(
        &mul(&sub(&w, &big(0.5)), &w.ln(PREC, RM, &mut cc)),
        &w,
    );
    lg = add(&lg, &half_ln_two_pi(&mut cc));
    let w2 = mul(&w, &w);
    let mut pow = w.clone();
    for k in 1..=BERNOULLI.len() {
        lg = add(&lg, &div(&bernoulli_weight(k), &pow));
        pow = mul(&pow, &w2);
    }
    to_f64(&div(&lg.exp(PREC, RM, &mut cc), &prod))
}

#[derive(Clone)]
struct Complex {
    re: BigFloat,
    im: BigFloat,
}

impl Complex {
    fn new(re: BigFloat, im: BigFloat) -> Self {
        Self { re, im }
    }

    fn real(x: f64) -> Self {
        Self::new(big(x), big(0.0))
    }

    fn add(&self, o: &Self) -> Self {
        Self::new(add(&self.re, &o.re), add(&self.im, &o.im))
    }

    fn sub(&self, o: &Self) -> Self {
        Self::new(sub(&self.re, &o.re), sub(&self.im, &o.im))
    }

    fn mul(&self, o: &Self) -> Self {
        Self::new(
            sub(&mul(&self.re, &o.re), &mul(&self.im, &o.im)),
            add(&mul(&self.re, &o.im), &mul(&self.im, &o.re)),
        )
    }

    fn recip(&self) -> Self {
        let d = add(&mul(&self.re, &self.re), &mul(&self.im, &self.im));
        Self::new(div(&self.re, &d), div(&self.im, &d).neg())
    }

    fn scale(&self, k: &BigFloat) -> Self {
        Self::new(mul(&self.re, k), mul(&self.im, k))
    }

    fn ln(&self, cc: &mut Consts) -> Self {
        let m2 = add(&mul(&self.re, &self.re), &mul(&self.im, &self.im));
        let modulus = mul(&m2.ln(PREC, RM, cc), &big(0.5));
        Self::new(modulus, atan2(&self.im, &self.re, cc))
    }
}

fn atan2(y: &BigFloat, x: &BigFloat, cc: &mut Consts) -> BigFloat {
    let pi = cc.pi(PREC, RM);
    if x.is_zero() {
        let half = mul(&pi, &big(0.5));
        return if y.is_negative() { half.neg() } else { half };
    }
    let base = div(y, x).atan(PREC, RM, cc);
    if x.is_positive() {
        base
    } else if y.is_negative() {
        sub(&base, &pi)
    } else {
        add(&base, &pi)
    }
}

/// Principal `log Γ(z)` as `(re, im)`: the recursion
/// `log Γ(z + 1) = log z + log Γ(z)` shifts `z` until `Re z >= 40` and the
/// Stirling series is summed there. Intended for `Re z > −100`, off the poles.
pub fn ln_gamma_complex(re: f64, im: f64) -> (f64, f64) {
    assert!(re > -100.0, "oracle log-gamma expects Re z > -100");
    let steps = (40.0 - re).max(0.0).ceil() as usize;
    let mut cc = consts();
    let z = Complex::new(big(re), big(im));
    let mut logs = Complex::real(0.0);
    for k in 0..steps {
        logs = logs.add(&z.add(&Complex::real(k as f64)).ln(&mut cc));
    }
    let w = z.add(&Complex::real(steps as f64));
    let mut sum = w
        .sub(&Complex::real(0.5))
        .mul(&w.ln(&mut cc))
        .sub(&w)
        .add(&Complex::new(half_ln_two_pi(&mut cc), big(0.0)));
    let inv = w.recip();
    let inv2 = inv.mul(&inv);
    let mut pow = inv;
    for k in 1..=BERNOULLI.len() {
        sum = sum.add(&pow.scale(&bernoulli_weight(k)));
        pow = pow.mul(&inv2);
    }
    let out = sum.sub(&logs);
    (to_f64(&out.re), to_f64(&out.im))
}

/// Raw Maclaurin series of `2F1(a, b; c; x)` in 256-bit arithmetic, summed
/// until the terms drop below `1e-40` of the partial sum.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> f64 {
    assert!((0.0..1.0).contains(&x), "oracle series needs 0 <= x < 1");
    let (a, b, c, x) = (big(a), big(b), big(c), big(x));
    let mut term = big(1.0);
    let mut sum = big(1.0);
    for k in 0..2_000_000u32 {
        let kf = big(f64::from(k));
        let num = mul(&add(&a, &kf), &add(&b, &kf));
        let den = mul(&add(&c, &kf), &add(&kf, &big(1.0)));
        term = mul(&mul(&term, &div(&num, &den)), &x);
        sum = add(&sum, &term);
        // stop once the term is 2^-133 ≈ 1e-40 below the sum
        let small = match (term.exponent(), sum.exponent()) {
            (Some(et), Some(es)) => i64::from(et) < i64::from(es) - 133,
            _ => term.is_zero(),
        };
        if term.is_zero() || small {
            return to_f64(&sum);
        }
    }
    panic!("oracle 2F1 series did not converge");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_quarter() {
        let g = gamma(0.25);
        assert!((g - 3.625_609_908_221_908_3).abs() < 1e-15);
        assert!((gamma(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-15);
        assert!((gamma(6.0) - 120.0).abs() < 1e-12);
    }

    #[test]
    fn ln_gamma_on_real_axis() {
        let (re, im) = ln_gamma_complex(3.0, 0.0);
        assert!((re - 2f64.ln()).abs() < 1e-15);
        assert_eq!(im, 0.0);
        let (re, _) = ln_gamma_complex(0.5, 0.0);
        assert!((re - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-15);
    }

    #[test]
    fn series_closed_form() {
        // 2F1(1/2, 1/2; 3/2; x²) = asin(x)/x
        let v = hyp2f1(0.5, 0.5, 1.5, 0.25);
        assert!((v - std::f64::consts::PI / 3.0).abs() < 1e-15);
    }
}
