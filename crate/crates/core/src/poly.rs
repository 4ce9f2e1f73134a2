//! Horner evaluation for polynomials stored in ascending coefficient order.

/// Evaluates `c[0] + c[1] x + ... + c[n] x^n`.
#[inline]
pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Sum of `|c_k| |x|^k`, the natural scale for a residual of [`horner`].
pub fn horner_scale(coeffs: &[f64], x: f64) -> f64 {
    coeffs
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * x.abs() + c.abs())
}
