//! Bisection with bracket certificates for the thresholds in `alpha` and the
//! `p`-root of the stationarity polynomial on the `x = 0` face.

use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};
use crate::functionals::Order;
use crate::poly::horner;
use crate::surface;

pub const MAX_ITER: u32 = 200;
pub const DEFAULT_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RootTarget {
    #[serde(rename = "alpha0")]
    Alpha0,
    #[serde(rename = "alpha1")]
    Alpha1,
    #[serde(rename = "alpha2")]
    Alpha2,
    #[serde(rename = "beta0")]
    Beta0,
    #[serde(rename = "stationary_p")]
    StationaryP,
    #[serde(rename = "custom")]
    Custom,
}

impl RootTarget {
    pub fn name(self) -> &'static str {
        match self {
            RootTarget::Alpha0 => "alpha0",
            RootTarget::Alpha1 => "alpha1",
            RootTarget::Alpha2 => "alpha2",
            RootTarget::Beta0 => "beta0",
            RootTarget::StationaryP => "stationary_p",
            RootTarget::Custom => "custom",
        }
    }
}

impl fmt::Display for RootTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootResult {
    pub target: RootTarget,
    /// Final bracket; `f` changes sign across it.
    pub bracket: (f64, f64),
    pub root: f64,
    /// `f(root)`, or a scale-relative value where noted.
    pub residual: f64,
    pub iterations: u32,
}

fn eval(f: &impl Fn(f64) -> f64, at: f64) -> Result<f64> {
    let value = f(at);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { at, value })
    }
}

/// Bisects `f` on `[lo, hi]` until the bracket is no wider than `tol` (or
/// stops shrinking in floating point). The root is the final midpoint.
pub fn root_bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<RootResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain("tol", tol, "tol > 0"));
    }
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::domain("hi", hi, "lo < hi"));
    }
    let (mut a, mut b) = (lo, hi);
    let mut fa = eval(&f, a)?;
    let fb = eval(&f, b)?;
    if fa == 0.0 {
        return Ok(exact(a, lo, hi));
    }
    if fb == 0.0 {
        return Ok(exact(b, lo, hi));
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }
    let mut iterations = 0;
    while b - a > tol && iterations < MAX_ITER {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        iterations += 1;
        let fm = eval(&f, mid)?;
        if fm == 0.0 {
            a = mid;
            b = mid;
            break;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    let root = 0.5 * (a + b);
    Ok(RootResult {
        target: RootTarget::Custom,
        bracket: (a, b),
        root,
        residual: f(root),
        iterations,
    })
}

fn exact(at: f64, lo: f64, hi: f64) -> RootResult {
    RootResult {
        target: RootTarget::Custom,
        bracket: (lo.min(at), hi.max(at)),
        root: at,
        residual: 0.0,
        iterations: 0,
    }
}

fn tagged(target: RootTarget, r: Result<RootResult>) -> RootResult {
    // Brackets below are fixed and certified by the tests, so failure here is
    // a programming error.
    let mut r = r.unwrap_or_else(|e| panic!("{target}: {e}"));
    r.target = target;
    r
}

/// `8a^2 - 10a + 3`, the negated numerator factor of the `x = 0` face
/// critical point.
pub const BETA_COEFFS: [f64; 3] = [3.0, -10.0, 8.0];
/// `153 - 1437a + 3118a^2 - 2484a^3 + 648a^4`.
pub const E_COEFFS: [f64; 5] = [153.0, -1437.0, 3118.0, -2484.0, 648.0];

pub fn e_poly(a: f64) -> f64 {
    horner(&E_COEFFS, a)
}

/// Smallest positive root of `N`, the pole of `L` and `P`.
pub fn alpha0() -> RootResult {
    tagged(
        RootTarget::Alpha0,
        root_bisect(surface::n_poly, 0.28, 0.29, DEFAULT_TOL),
    )
}

/// Upper end of the range on which `2L(alpha)` is a real point of `(0, 2)`.
///
/// Past `alpha0` both `N` and the numerator of `L^2` are negative; the
/// numerator crosses zero at `alpha1` and `L` stops being real.
pub fn alpha1() -> RootResult {
    tagged(
        RootTarget::Alpha1,
        root_bisect(surface::l_numerator, 0.3, 0.45, DEFAULT_TOL),
    )
}

/// Smallest positive root of `E`; the residual is relative to the
/// coefficient scale.
pub fn alpha2() -> RootResult {
    let mut r = tagged(
        RootTarget::Alpha2,
        root_bisect(e_poly, 0.14, 0.15, DEFAULT_TOL),
    );
    let scale: f64 = E_COEFFS
        .iter()
        .enumerate()
        .map(|(k, c)| (c * r.root.powi(k as i32)).abs())
        .sum();
    r.residual /= scale;
    r
}

/// Smallest positive root of `-3 + 10a - 8a^2`.
pub fn beta0() -> RootResult {
    tagged(
        RootTarget::Beta0,
        root_bisect(|a| horner(&BETA_COEFFS, a), 0.4, 0.6, DEFAULT_TOL),
    )
}

/// The degree-8 factor of the stationarity polynomial in `p` (the full
/// polynomial is `p` times this).
pub fn stationary_factor(order: Order, p: f64) -> f64 {
    let a = order.alpha();
    let t = 1.0 - 2.0 * a;
    let p2 = p * p;
    let c0 = 49152.0 * t;
    let c2 = -3072.0 * horner(&[25.0, -68.0, 36.0], a);
    let c4 = 16.0 * horner(&[2427.0, -7890.0, 6020.0, 616.0, -1024.0], a);
    let c6 = -128.0 * horner(&[48.0, -153.0, 20.0, 340.0, -352.0, 96.0], a);
    let c8 = -t * t * e_poly(a);
    horner(&[c0, c2, c4, c6, c8], p2)
}

pub fn stationary_poly(order: Order, p: f64) -> f64 {
    p * stationary_factor(order, p)
}

const STATIONARY_SCAN_CELLS: usize = 2000;

/// Smallest root of the stationarity polynomial in `(0, 2)`, located by a
/// uniform sign scan followed by bisection.
pub fn stationary_p_root(order: Order) -> Option<RootResult> {
    let f = |p: f64| stationary_factor(order, p);
    let h = 2.0 / STATIONARY_SCAN_CELLS as f64;
    let mut lo = h * 1e-6;
    let mut f_lo = f(lo);
    for k in 1..=STATIONARY_SCAN_CELLS {
        let hi = if k == STATIONARY_SCAN_CELLS {
            2.0 - h * 1e-6
        } else {
            k as f64 * h
        };
        let f_hi = f(hi);
        if f_lo.signum() != f_hi.signum() || f_hi == 0.0 {
            return root_bisect(f, lo, hi, DEFAULT_TOL).ok().map(|mut r| {
                r.target = RootTarget::StationaryP;
                r
            });
        }
        lo = hi;
        f_lo = f_hi;
    }
    None
}

/// Smallest `p` in `(0, 2)` at which the `x = 0` face critical point enters
/// `(0, 1)`, or `None` when it never does.
pub fn face_x0_threshold(order: Order) -> Option<RootResult> {
    let a = order.alpha();
    let k = 17.0 - 18.0 * a;
    let c = horner(&BETA_COEFFS, a);
    if k <= 8.0 || c <= 0.0 {
        return None;
    }
    // y0 = 1 where 2 (k p^2 - 32) = c p^3, to the right of the pole.
    let g = |p: f64| 2.0 * (k * p * p - 32.0) - c * p * p * p;
    let pole = (32.0 / k).sqrt();
    let lo = pole * (1.0 + 1e-12);
    if g(2.0) <= 0.0 {
        return None;
    }
    root_bisect(g, lo, 2.0, DEFAULT_TOL).ok()
}
