//! Schlicht coefficients of `f` in terms of Caratheodory coefficients, the
//! Hankel and Fekete-Szego functionals, and the extremal series.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::caratheodory::CaratheodoryCoeffs;
use crate::error::{Error, Result};

/// The order `alpha` in `[0, 1)` of the starlike class.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Order(f64);

impl Order {
    pub fn new(alpha: f64) -> Result<Self> {
        if (0.0..1.0).contains(&alpha) {
            Ok(Order(alpha))
        } else {
            Err(Error::domain("alpha", alpha, "0 <= alpha < 1"))
        }
    }

    #[inline]
    pub fn alpha(self) -> f64 {
        self.0
    }

    /// `1 - alpha`.
    #[inline]
    pub fn beta(self) -> f64 {
        1.0 - self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchlichtCoeffs {
    pub a2: Complex64,
    pub a3: Complex64,
    pub a4: Complex64,
    pub a5: Complex64,
}

impl SchlichtCoeffs {
    pub fn new(a2: Complex64, a3: Complex64, a4: Complex64, a5: Complex64) -> Self {
        SchlichtCoeffs { a2, a3, a4, a5 }
    }

    pub fn real(a2: f64, a3: f64, a4: f64, a5: f64) -> Self {
        Self::new(a2.into(), a3.into(), a4.into(), a5.into())
    }
}

/// `a2..a5` of `f` with `z f'/f = p` expressed through the coefficients of
/// `p` after the order-`alpha` normalisation.
pub fn schlicht_coeffs(order: Order, p: &CaratheodoryCoeffs) -> Result<SchlichtCoeffs> {
    p.validate()?;
    Ok(schlicht_unchecked(order, p))
}

pub(crate) fn schlicht_unchecked(order: Order, p: &CaratheodoryCoeffs) -> SchlichtCoeffs {
    let b = order.beta();
    let p1 = p.p1;
    let (p2, p3, p4) = (p.p2, p.p3, p.p4);
    let a2 = Complex64::from(p1 * b);
    let a3 = b / 2.0 * (p2 + p1 * p1 * b);
    let a4 = b / 6.0 * (2.0 * p3 + 3.0 * p1 * p2 * b + p1.powi(3) * b * b);
    let a5 = b / 24.0
        * (6.0 * p4
            + b * (3.0 * p2 * p2 + 8.0 * p1 * p3)
            + b * b * (6.0 * p1 * p1 * p2 + p1.powi(4) * b));
    SchlichtCoeffs { a2, a3, a4, a5 }
}

/// `H_{3,1} = 2 a2 a3 a4 - a3^3 - a4^2 - a2^2 a5 + a3 a5`.
pub fn hankel3(c: &SchlichtCoeffs) -> Complex64 {
    let SchlichtCoeffs { a2, a3, a4, a5 } = *c;
    2.0 * a2 * a3 * a4 - a3 * a3 * a3 - a4 * a4 - a2 * a2 * a5 + a3 * a5
}

/// `H_{2,2} = a2 a4 - a3^2`.
pub fn hankel2(c: &SchlichtCoeffs) -> Complex64 {
    c.a2 * c.a4 - c.a3 * c.a3
}

/// `a3 - lambda a2^2`.
pub fn fekete_szego(c: &SchlichtCoeffs, lambda: Complex64) -> Complex64 {
    c.a3 - lambda * c.a2 * c.a2
}

/// Sharp bound `(1 - alpha) max{1, |3 - 2 alpha - 4 lambda (1 - alpha)|}` of
/// `|a3 - lambda a2^2|`.
pub fn fekete_szego_bound(order: Order, lambda: Complex64) -> f64 {
    let b = order.beta();
    let k = (3.0 - 2.0 * order.alpha() - 4.0 * lambda * b).norm();
    b * k.max(1.0)
}

/// Taylor coefficients `a1..a_{n_max}` of the function with
/// `z f'/f = (1 + (1 - 2 alpha) z^3) / (1 - z^3)`.
///
/// Uses `(n - 1) a_n = 2 (1 - alpha) (a_{n-3} + a_{n-6} + ...)`, `a1 = 1`.
pub fn extremal_coeffs(order: Order, n_max: usize) -> Result<Vec<f64>> {
    if n_max < 1 {
        return Err(Error::domain("n_max", n_max as f64, "n_max >= 1"));
    }
    let two_b = 2.0 * order.beta();
    // a[0] is a1.
    let mut a = vec![0.0; n_max];
    a[0] = 1.0;
    for n in 2..=n_max {
        if n % 3 != 1 {
            continue;
        }
        let tail: f64 = (1..)
            .map(|j| n as i64 - 3 * j)
            .take_while(|&m| m >= 1)
            .map(|m| a[m as usize - 1])
            .sum();
        a[n - 1] = two_b * tail / (n - 1) as f64;
    }
    Ok(a)
}

/// `a2..a5` of the extremal function: `(0, 0, 2(1-alpha)/3, 0)`.
pub fn extremal_schlicht(order: Order) -> SchlichtCoeffs {
    let a = extremal_coeffs(order, 5).expect("n_max = 5 is valid");
    SchlichtCoeffs::real(a[1], a[2], a[3], a[4])
}

/// `a_n -> e^{i (n-1) theta} a_n`, the coefficients of `e^{-i theta} f(e^{i theta} z)`.
pub fn rotate_coeffs(c: &SchlichtCoeffs, theta: f64) -> SchlichtCoeffs {
    let w = |k: f64| Complex64::from_polar(1.0, k * theta);
    SchlichtCoeffs {
        a2: w(1.0) * c.a2,
        a3: w(2.0) * c.a3,
        a4: w(3.0) * c.a4,
        a5: w(4.0) * c.a5,
    }
}
