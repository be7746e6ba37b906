//! Analytical solution of a penny-shaped crack wedged open by a flat rigid
//! inclusion: a disc (`0 <= r <= b`) or an annulus (`c <= r <= b`) planted
//! between the crack faces.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: Gamma, Pochhammer, Gauss `2F1`, and the Mellin kernel
//!   `L(s)` of the Weber–Sonin integral with its `L = L⁺ / (2 L⁻)` split.
//! * [`models`]: the infinite linear systems for the pole-removal
//!   coefficients, solved by truncation ("reduction") and, for the disc,
//!   by λ-power recurrences.
//! * [`fields`]: contact stress, stress ahead of the crack tip, stress
//!   intensity factor and crack-face displacement for the disc model.
//! * [`factorization`]: the canonical factorization matrices `X±(s)` of the
//!   2×2 and 3×3 matrix coefficients, determinant identities and partial
//!   indices.
//!
//! Everything is nondimensional: lengths are scaled by the crack radius `a`,
//! stresses are reported as `θ₁·σ_z` with `θ₁ = (1 − ν)/G`, and the load
//! enters through `δ* = 2δ / (a θ₁ √π)`.

pub mod factorization;
pub mod fields;
pub mod models;
pub mod specfun;

pub use num_complex::Complex64;

/// Errors raised by the numerical layer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// The argument sits on (or within `1e-9` of) a pole.
    #[error("pole at {at} (pole index {index})")]
    Pole { at: f64, index: i64 },
    #[error("{what}: argument {value} outside the admissible domain")]
    Domain { what: &'static str, value: f64 },
    #[error("non-finite argument")]
    NonFinite,
    #[error("series failed to converge within {terms} terms")]
    Convergence { terms: usize },
    #[error("truncated linear system is singular (condition estimate {condition:e})")]
    Singular { condition: f64 },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("column {column}: fitted order {order:.3} is not within 0.2 of an integer")]
    FitAmbiguity { column: usize, order: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Which half-plane a `±` quantity belongs to.
///
/// `Plus` functions are analytic to the left of the contour `Re s = γ`,
/// `Minus` functions to the right of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}
