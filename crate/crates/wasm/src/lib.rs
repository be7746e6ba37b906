//! Curves for the browser demo. Every export returns a flat `[x0, y0, x1, y1, ...]`
//! array so the page can plot it without further decoding.

use pennycrack::fields::{displacement, displacement_edges, sif_exact, stress_contact, stress_outer};
use pennycrack::models::{solve_disc_reduction, CoefficientSetDisc, DiscProblem, DEFAULT_N};
use wasm_bindgen::prelude::*;

const EDGE_GAP: f64 = 1e-4;
const OUTER_MAX: f64 = 2.0;

fn solve(lambda: f64, delta_over_a: f64) -> Result<(DiscProblem, CoefficientSetDisc), String> {
    let p = DiscProblem::from_delta_over_a(lambda, delta_over_a, 1.0, 1.0).map_err(|e| e.to_string())?;
    let c = solve_disc_reduction(&p, DEFAULT_N).map_err(|e| e.to_string())?;
    Ok((p, c))
}

fn check_points(points: usize) -> Result<(), String> {
    if points < 2 {
        return Err(format!("need at least 2 points, got {points}"));
    }
    Ok(())
}

/// `θ₁σ_z` against `r/a`: the contact branch, a NaN separator, then the branch
/// ahead of the tip.
pub fn stress_points(lambda: f64, delta_over_a: f64, points: usize) -> Result<Vec<f64>, String> {
    check_points(points)?;
    let (p, c) = solve(lambda, delta_over_a)?;
    let last = (points - 1) as f64;
    let mut out = Vec::with_capacity(4 * points + 2);
    for k in 0..points {
        let rb = 1.0 - EDGE_GAP.powf(k as f64 / last);
        out.push(rb * lambda);
        out.push(stress_contact(&p, &c, rb).map_err(|e| e.to_string())?);
    }
    out.extend([f64::NAN, f64::NAN]);
    let span = (OUTER_MAX - 1.0) / EDGE_GAP;
    for k in 0..points {
        let ra = 1.0 + EDGE_GAP * span.powf(k as f64 / last);
        out.push(ra);
        out.push(stress_outer(&p, &c, ra).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

/// `u_z/a` on the free crack face `λ <= r/a <= 1`.
pub fn displacement_points(lambda: f64, delta_over_a: f64, points: usize) -> Result<Vec<f64>, String> {
    check_points(points)?;
    let (p, c) = solve(lambda, delta_over_a)?;
    let (at_b, at_a) = displacement_edges(&p, &c).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(2 * points);
    for k in 0..points {
        let (r, v) = if k == 0 {
            (lambda, at_b)
        } else if k == points - 1 {
            (1.0, at_a)
        } else {
            let t = k as f64 / (points - 1) as f64;
            let r = lambda + (1.0 - lambda) * 0.5 * (1.0 - (std::f64::consts::PI * t).cos());
            (r, displacement(&p, &c, r).map_err(|e| e.to_string())?)
        };
        out.extend([r, v]);
    }
    Ok(out)
}

/// Normalized SIF against λ on `[0, lambda_max]` as `[λ, exact, asymptotic]` triples.
pub fn sif_points(delta_over_a: f64, lambda_max: f64, points: usize) -> Result<Vec<f64>, String> {
    check_points(points)?;
    if !(lambda_max > 0.0 && lambda_max < 1.0) {
        return Err(format!("lambda_max must lie in (0, 1), got {lambda_max}"));
    }
    let mut out = Vec::with_capacity(3 * points);
    for k in 0..points {
        let lambda = lambda_max * k as f64 / (points - 1) as f64;
        if lambda == 0.0 {
            out.extend([0.0, 0.0, 0.0]);
            continue;
        }
        let (p, c) = solve(lambda, delta_over_a)?;
        let s = sif_exact(&p, &c);
        out.extend([lambda, s.normalized, s.normalized_asymptotic]);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn stress_curves(lambda: f64, delta_over_a: f64, points: usize) -> Result<Vec<f64>, JsError> {
    stress_points(lambda, delta_over_a, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn displacement_curve(lambda: f64, delta_over_a: f64, points: usize) -> Result<Vec<f64>, JsError> {
    displacement_points(lambda, delta_over_a, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sif_curve(delta_over_a: f64, lambda_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    sif_points(delta_over_a, lambda_max, points).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stress_layout() {
        let v = stress_points(0.5, 0.05, 20).unwrap();
        assert_eq!(v.len(), 82);
        assert!(v[40].is_nan() && v[41].is_nan());
        // compressive under the disc, tensile ahead of the tip
        assert!(v[1] < 0.0);
        assert!(v[43] > 0.0);
        assert!((v[42] - (1.0 + EDGE_GAP)).abs() < 1e-15);
    }

    #[test]
    fn displacement_ends() {
        let v = displacement_points(0.4, 0.05, 30).unwrap();
        assert_eq!(v[0], 0.4);
        assert_eq!(v[58], 1.0);
        assert!(v[59].abs() < 1e-12, "{}", v[59]);
    }

    #[test]
    fn sif_rows() {
        let v = sif_points(0.05, 0.6, 7).unwrap();
        assert_eq!(v.len(), 21);
        assert_eq!(&v[..3], &[0.0, 0.0, 0.0]);
        for row in v[3..].chunks(3) {
            assert!(row[1] > 0.0);
            assert!((row[2] - row[1]).abs() < 0.05 * row[1]);
        }
    }

    #[test]
    fn bad_input_is_an_error() {
        assert!(stress_points(1.2, 0.05, 10).is_err());
        assert!(sif_points(0.05, 1.0, 10).is_err());
        assert!(displacement_points(0.5, 0.05, 1).is_err());
    }
}
