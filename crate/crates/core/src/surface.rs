//! The bound surface `Z(p, x, y)` over the cuboid `[0,2] x [0,1] x [0,1]`.
//!
//! After substituting the Caratheodory parametrization into `H_{3,1}` one
//! gets
//!
//! ```text
//! 1152 H_{3,1} = D1(p, g) + D2(p, g) e + D3(p, g) e^2 + Phi(p, g, e) r
//! ```
//!
//! and the triangle inequality with `x = |g|`, `y = |e|` gives the real
//! surface
//!
//! ```text
//! 1152 Z = z1(p, x) + z2(p, x) y + z3(p, x) y^2 + z4(p, x) (1 - y^2).
//! ```
//!
//! The face restrictions, edge restrictions and the closed forms for the
//! stationary point on the `x = 1` face live here as well. Degenerate
//! denominators and radicands are encoded as `None`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::caratheodory::{CaratheodoryParams, DISK_SLACK};
use crate::error::{Error, Result};
use crate::functionals::Order;
use crate::poly::horner;
use crate::roots;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuboidPoint {
    pub p: f64,
    pub x: f64,
    pub y: f64,
}

impl CuboidPoint {
    pub fn new(p: f64, x: f64, y: f64) -> Result<Self> {
        let pt = CuboidPoint { p, x, y };
        pt.validate()?;
        Ok(pt)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=2.0).contains(&self.p) {
            return Err(Error::domain("p", self.p, "0 <= p <= 2"));
        }
        if !(0.0..=1.0).contains(&self.x) {
            return Err(Error::domain("x", self.x, "0 <= x <= 1"));
        }
        if !(0.0..=1.0).contains(&self.y) {
            return Err(Error::domain("y", self.y, "0 <= y <= 1"));
        }
        Ok(())
    }

    /// Projects onto the cuboid.
    pub fn clamped(p: f64, x: f64, y: f64) -> Self {
        CuboidPoint {
            p: p.clamp(0.0, 2.0),
            x: x.clamp(0.0, 1.0),
            y: y.clamp(0.0, 1.0),
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.p, self.x, self.y]
    }

    pub fn is_corner(&self) -> bool {
        (self.p == 0.0 || self.p == 2.0)
            && (self.x == 0.0 || self.x == 1.0)
            && (self.y == 0.0 || self.y == 1.0)
    }
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=2.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain("p", p, "0 <= p <= 2"))
    }
}

fn check_unit(name: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::domain(name, v, "0 <= value <= 1"))
    }
}

fn check_disk(name: &'static str, z: Complex64) -> Result<()> {
    let m = z.norm();
    if m.is_finite() && m <= 1.0 + DISK_SLACK {
        Ok(())
    } else {
        Err(Error::domain(name, m, "modulus at most 1"))
    }
}

/// `alpha (1 - 2 alpha)^2 (3 - 2 alpha)`, the `p^6` coefficient shared by
/// `z1` and every face with `y` or `x` fixed.
#[inline]
fn sextic_lead(a: f64) -> f64 {
    let t = 1.0 - 2.0 * a;
    a * t * t * (3.0 - 2.0 * a)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaTerms {
    pub d1: Complex64,
    pub d2: Complex64,
    pub d3: Complex64,
}

/// The coefficients of `1, eta, eta^2` in `1152 H_{3,1}`.
pub fn delta_terms(order: Order, p: f64, gamma: Complex64) -> Result<DeltaTerms> {
    check_p(p)?;
    check_disk("gamma", gamma)?;
    Ok(delta_unchecked(order, p, gamma))
}

fn delta_unchecked(order: Order, p: f64, g: Complex64) -> DeltaTerms {
    let a = order.alpha();
    let b2 = order.beta() * order.beta();
    let q = 4.0 - p * p;
    let p2 = p * p;
    let p4 = p2 * p2;
    let g2 = g * g;
    let g3 = g2 * g;
    let g4 = g2 * g2;
    let ga2 = g.norm_sqr();
    let d1 = b2
        * (sextic_lead(a) * p4 * p2 - (2.0 - 15.0 * a + 18.0 * a * a) * p2 * g2 * q * q
            + p2 * g4 * q * q
            - (10.0 - 15.0 * a) * p2 * g3 * q * q
            + 36.0 * a * g3 * q * q
            + (3.0 - 12.0 * a * a * a + 32.0 * a * a - 19.0 * a) * p4 * g * q
            + (3.0 - 16.0 * a * a + 2.0 * a) * p4 * g2 * q
            - 9.0 * (1.0 - 2.0 * a) * p4 * g3 * q
            - 36.0 * (1.0 - 2.0 * a) * p2 * g2 * q);
    let common = 4.0 * (1.0 - ga2) * q * b2;
    let d2 = common
        * ((8.0 * a * a - 10.0 * a + 3.0) * p2 * p
            + 9.0 * (1.0 - 2.0 * a) * p2 * p * g
            + (5.0 - 12.0 * a) * p * g * q
            - p * g2 * q);
    let d3 = common * (-8.0 * q - ga2 * q + 9.0 * (1.0 - 2.0 * a) * p2 * g.conj());
    DeltaTerms { d1, d2, d3 }
}

/// The coefficient of `rho` in `1152 H_{3,1}`.
pub fn phi_term(order: Order, p: f64, gamma: Complex64, eta: Complex64) -> Result<Complex64> {
    check_p(p)?;
    check_disk("gamma", gamma)?;
    check_disk("eta", eta)?;
    Ok(phi_unchecked(order, p, gamma, eta))
}

fn phi_unchecked(order: Order, p: f64, g: Complex64, e: Complex64) -> Complex64 {
    let a = order.alpha();
    let b2 = order.beta() * order.beta();
    let q = 4.0 - p * p;
    36.0 * (1.0 - g.norm_sqr()) * q * (1.0 - e.norm_sqr()) * b2 * (q * g - (1.0 - 2.0 * a) * p * p)
}

/// `H_{3,1}` assembled from the decomposition. Agrees with the direct
/// coefficient route `hankel3(schlicht_coeffs(..))`.
pub fn hankel3_decomposed(order: Order, params: &CaratheodoryParams) -> Result<Complex64> {
    params.validate()?;
    Ok(hankel3_decomposed_unchecked(order, params))
}

pub(crate) fn hankel3_decomposed_unchecked(order: Order, s: &CaratheodoryParams) -> Complex64 {
    let DeltaTerms { d1, d2, d3 } = delta_unchecked(order, s.p1, s.gamma);
    let phi = phi_unchecked(order, s.p1, s.gamma, s.eta);
    (d1 + d2 * s.eta + d3 * s.eta * s.eta + phi * s.rho) / 1152.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZTerms {
    pub z1: f64,
    pub z2: f64,
    pub z3: f64,
    pub z4: f64,
}

impl ZTerms {
    /// `Z` at height `y` for the `(p, x)` these terms were built from.
    #[inline]
    pub fn at(&self, y: f64) -> f64 {
        (self.z1 + self.z2 * y + self.z3 * y * y + self.z4 * (1.0 - y * y)) / 1152.0
    }
}

pub fn z_terms(order: Order, p: f64, x: f64) -> Result<ZTerms> {
    check_p(p)?;
    check_unit("x", x)?;
    Ok(z_terms_unchecked(order, p, x))
}

pub(crate) fn z_terms_unchecked(order: Order, p: f64, x: f64) -> ZTerms {
    let a = order.alpha();
    let b2 = order.beta() * order.beta();
    let q = 4.0 - p * p;
    let p2 = p * p;
    let p4 = p2 * p2;
    let x2 = x * x;
    let x3 = x2 * x;
    let x4 = x2 * x2;
    let z1 = b2
        * (sextic_lead(a) * p4 * p2
            + (2.0 - 15.0 * a + 18.0 * a * a) * p2 * x2 * q * q
            + p2 * x4 * q * q
            + (10.0 - 15.0 * a) * p2 * x3 * q * q
            + 36.0 * a * x3 * q * q
            + (3.0 - 12.0 * a * a * a + 32.0 * a * a - 19.0 * a) * p4 * x * q
            + (3.0 - 16.0 * a * a + 2.0 * a) * p4 * x2 * q
            + 9.0 * (1.0 - 2.0 * a) * p4 * x3 * q
            + 36.0 * (1.0 - 2.0 * a) * p2 * x2 * q);
    let common = 4.0 * (1.0 - x2) * q * b2;
    let z2 = common
        * ((8.0 * a * a - 10.0 * a + 3.0) * p2 * p
            + 9.0 * (1.0 - 2.0 * a) * p2 * p * x
            + (5.0 - 12.0 * a) * p * x * q
            + p * x2 * q);
    let z3 = common * (8.0 * q + x2 * q + 9.0 * (1.0 - 2.0 * a) * p2 * x);
    let z4 = 36.0 * (1.0 - x2) * q * b2 * (q * x + (1.0 - 2.0 * a) * p2);
    ZTerms { z1, z2, z3, z4 }
}

pub fn big_z(order: Order, pt: CuboidPoint) -> Result<f64> {
    pt.validate()?;
    Ok(big_z_unchecked(order, pt))
}

#[inline]
pub(crate) fn big_z_unchecked(order: Order, pt: CuboidPoint) -> f64 {
    z_terms_unchecked(order, pt.p, pt.x).at(pt.y)
}

/// Central-difference gradient of `Z`, one-sided where a coordinate sits on
/// the boundary.
pub fn z_gradient(order: Order, pt: CuboidPoint, h: f64) -> [f64; 3] {
    let hi = [2.0, 1.0, 1.0];
    let base = pt.as_array();
    let mut grad = [0.0; 3];
    for k in 0..3 {
        let mut lo_pt = base;
        let mut hi_pt = base;
        lo_pt[k] = (base[k] - h).max(0.0);
        hi_pt[k] = (base[k] + h).min(hi[k]);
        let f = |c: [f64; 3]| {
            big_z_unchecked(
                order,
                CuboidPoint {
                    p: c[0],
                    x: c[1],
                    y: c[2],
                },
            )
        };
        grad[k] = (f(hi_pt) - f(lo_pt)) / (hi_pt[k] - lo_pt[k]);
    }
    grad
}

// ---------------------------------------------------------------------------
// Faces
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Face {
    P0,
    P2,
    X0,
    X1,
    Y0,
    Y1,
}

impl Face {
    pub const ALL: [Face; 6] = [Face::P0, Face::P2, Face::X0, Face::X1, Face::Y0, Face::Y1];

    /// Parameter ranges `(u, v)` of the face.
    pub fn ranges(self) -> [(f64, f64); 2] {
        match self {
            Face::P0 | Face::P2 => [(0.0, 1.0), (0.0, 1.0)],
            Face::X0 | Face::X1 => [(0.0, 2.0), (0.0, 1.0)],
            Face::Y0 | Face::Y1 => [(0.0, 2.0), (0.0, 1.0)],
        }
    }

    /// Cuboid point for face coordinates: `(x, y)` on `p` faces, `(p, y)` on
    /// `x` faces, `(p, x)` on `y` faces.
    pub fn point(self, u: f64, v: f64) -> CuboidPoint {
        match self {
            Face::P0 => CuboidPoint { p: 0.0, x: u, y: v },
            Face::P2 => CuboidPoint { p: 2.0, x: u, y: v },
            Face::X0 => CuboidPoint { p: u, x: 0.0, y: v },
            Face::X1 => CuboidPoint { p: u, x: 1.0, y: v },
            Face::Y0 => CuboidPoint { p: u, x: v, y: 0.0 },
            Face::Y1 => CuboidPoint { p: u, x: v, y: 1.0 },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Face::P0 => "P0",
            Face::P2 => "P2",
            Face::X0 => "X0",
            Face::X1 => "X1",
            Face::Y0 => "Y0",
            Face::Y1 => "Y1",
        }
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Face {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Face::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidId(s.to_string()))
    }
}

fn check_range(name: &'static str, v: f64, (lo, hi): (f64, f64)) -> Result<()> {
    if v >= lo && v <= hi {
        Ok(())
    } else {
        Err(Error::domain(
            name,
            v,
            "outside the face/edge parameter range",
        ))
    }
}

/// `Z` on `p = 0`.
pub fn p0_face(order: Order, x: f64, y: f64) -> f64 {
    let a = order.alpha();
    let b2 = order.beta() * order.beta();
    let x2 = x * x;
    b2 * ((1.0 - x2) * ((8.0 + x2) * y * y + 9.0 * x * (1.0 - y * y)) + 9.0 * x2 * x * a) / 18.0
}

/// `Z` on `p = 2`; constant.
pub fn p2_face(order: Order) -> f64 {
    order.beta() * order.beta() * sextic_lead(order.alpha()) / 18.0
}

/// `Z` on `x = 0`.
pub fn x0_face(order: Order, p: f64, y: f64) -> f64 {
    let a = order.alpha();
    let b2 = order.beta() * order.beta();
    let q = 4.0 - p * p;
    let p2 = p * p;
    b2 / 1152.0
        * (sextic_lead(a) * p2 * p2 * p2
            + 36.0 * (1.0 - 2.0 * a) * p2 * q * (1.0 - y * y)
            + 32.0 * q * q * y * y
            + 4.0 * (3.0 - 10.0 * a + 8.0 * a * a) * p2 * p * y * q)
}

/// `Z` on `x = 1`; independent of `y`.
pub fn x1_face(order: Order, p: f64) -> f64 {
    let a = order.alpha();
    let b2 = order.beta() * order.beta();
    let p2 = p * p;
    b2 / 576.0
        * (288.0 * a + 16.0 * p2 * (11.0 - 33.0 * a + 9.0 * a * a)
            - 8.0 * p2 * p2 * quartic_b(a)
            - p2 * p2 * p2 * n_poly(a))
}

/// `Z` on `y = 0`.
pub fn y0_face(order: Order, p: f64, x: f64) -> f64 {
    let a = order.alpha();
    let b2 = order.beta() * order.beta();
    let p2 = p * p;
    let x2 = x * x;
    let x3 = x2 * x;
    let x4 = x2 * x2;
    let lin6 = -3.0 + 19.0 * a - 32.0 * a * a + 12.0 * a * a * a;
    b2 / 1152.0
        * (576.0 * (x - x3 * (1.0 - a))
            + 16.0
                * p2
                * (9.0 - 18.0 * x + x4 + x3 * (28.0 - 33.0 * a) - 18.0 * a
                    + x2 * (2.0 - 15.0 * a + 18.0 * a * a))
            - 4.0
                * p2
                * p2
                * (9.0 + 2.0 * x4 + x3 * (20.0 - 21.0 * a) - 18.0 * a
                    + x2 * (1.0 - 32.0 * a + 52.0 * a * a)
                    + x * (-12.0 + 19.0 * a - 32.0 * a * a + 12.0 * a * a * a))
            + p2 * p2 * p2 * sextic_in_x(a, x, lin6))
}

#[inline]
fn sextic_in_x(a: f64, x: f64, lin6: f64) -> f64 {
    let x2 = x * x;
    x2 * x2 + sextic_lead(a) + x2 * x * (1.0 + 3.0 * a) - x2 * (1.0 + 17.0 * a - 34.0 * a * a)
        + x * lin6
}

/// `Z` on `y = 1`, expanded in powers of `p`.
pub fn y1_face(order: Order, p: f64, x: f64) -> f64 {
    let a = order.alpha();
    let b2 = order.beta() * order.beta();
    let a2 = a * a;
    let a3 = a2 * a;
    let x2 = x * x;
    let x3 = x2 * x;
    let x4 = x2 * x2;
    let w = 1.0 - x2;
    let c0 = 64.0 * (8.0 - 7.0 * x2 - x4 + 9.0 * a * x3);
    let c1 = 64.0 * x * w * (5.0 + x - 12.0 * a);
    let c2 = 16.0
        * (3.0 * x4
            + x3 * (1.0 - 15.0 * a)
            + x2 * (25.0 - 33.0 * a + 18.0 * a2)
            + x * (9.0 - 18.0 * a)
            - 16.0);
    let c3 = 16.0 * w * (3.0 - 10.0 * a + 8.0 * a2 - x * (1.0 - 6.0 * a) - 2.0 * x2);
    let c4 = -4.0
        * (3.0 * x4
            + x3 * (2.0 - 3.0 * a)
            + x2 * (17.0 - 50.0 * a + 52.0 * a2)
            + x * (6.0 + a - 32.0 * a2 + 12.0 * a3)
            - 8.0);
    let c5 = 4.0 * w * (x2 - x * (4.0 - 6.0 * a) - 3.0 + 10.0 * a - 8.0 * a2);
    let c6 = sextic_in_x(a, x, -3.0 + 19.0 * a - 32.0 * a2 + 12.0 * a3);
    b2 / 1152.0 * horner(&[c0, c1, c2, c3, c4, c5, c6], p)
}

pub fn face_value(face: Face, order: Order, u: f64, v: f64) -> Result<f64> {
    let [ru, rv] = face.ranges();
    check_range("u", u, ru)?;
    check_range("v", v, rv)?;
    Ok(match face {
        Face::P0 => p0_face(order, u, v),
        Face::P2 => p2_face(order),
        Face::X0 => x0_face(order, u, v),
        Face::X1 => x1_face(order, u),
        Face::Y0 => y0_face(order, u, v),
        Face::Y1 => y1_face(order, u, v),
    })
}

// ---------------------------------------------------------------------------
// Edges
// ---------------------------------------------------------------------------

/// Edges of the cuboid, grouped by the restriction that covers them.
///
/// `R3` covers both `x = 1` edges in `p`; `CP2` covers the four edges on
/// `p = 2`; `CP0X1` is the `y` edge at `p = 0, x = 1`; `P0X0` is the `y`
/// edge at `p = 0, x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Edge {
    R1,
    R2,
    R3,
    R4,
    R5,
    #[serde(rename = "C_P2")]
    CP2,
    #[serde(rename = "C_P0X1")]
    CP0X1,
    P0X0,
}

impl Edge {
    pub const ALL: [Edge; 8] = [
        Edge::R1,
        Edge::R2,
        Edge::R3,
        Edge::R4,
        Edge::R5,
        Edge::CP2,
        Edge::CP0X1,
        Edge::P0X0,
    ];

    pub fn range(self) -> (f64, f64) {
        match self {
            Edge::R1 | Edge::R2 | Edge::R3 => (0.0, 2.0),
            _ => (0.0, 1.0),
        }
    }

    /// Representative cuboid point; `CP2` maps to `(2, t, 0)`, `R3` to
    /// `(t, 1, 0)`.
    pub fn point(self, t: f64) -> CuboidPoint {
        match self {
            Edge::R1 => CuboidPoint {
                p: t,
                x: 0.0,
                y: 0.0,
            },
            Edge::R2 => CuboidPoint {
                p: t,
                x: 0.0,
                y: 1.0,
            },
            Edge::R3 => CuboidPoint {
                p: t,
                x: 1.0,
                y: 0.0,
            },
            Edge::R4 => CuboidPoint {
                p: 0.0,
                x: t,
                y: 1.0,
            },
            Edge::R5 => CuboidPoint {
                p: 0.0,
                x: t,
                y: 0.0,
            },
            Edge::CP2 => CuboidPoint {
                p: 2.0,
                x: t,
                y: 0.0,
            },
            Edge::CP0X1 => CuboidPoint {
                p: 0.0,
                x: 1.0,
                y: t,
            },
            Edge::P0X0 => CuboidPoint {
                p: 0.0,
                x: 0.0,
                y: t,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Edge::R1 => "R1",
            Edge::R2 => "R2",
            Edge::R3 => "R3",
            Edge::R4 => "R4",
            Edge::R5 => "R5",
            Edge::CP2 => "C_P2",
            Edge::CP0X1 => "C_P0X1",
            Edge::P0X0 => "P0X0",
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Edge {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Edge::ALL
            .into_iter()
            .find(|e| e.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidId(s.to_string()))
    }
}

/// `Z(p, 0, 0)`.
pub fn r1(order: Order, p: f64) -> f64 {
    let a = order.alpha();
    let p2 = p * p;
    p2 * order.beta().powi(2)
        * (1.0 - 2.0 * a)
        * (144.0 - 36.0 * p2 + p2 * p2 * a * (3.0 - 8.0 * a + 4.0 * a * a))
        / 1152.0
}

/// `Z(p, 0, 1)`.
pub fn r2(order: Order, p: f64) -> f64 {
    let a = order.alpha();
    let q = 4.0 - p * p;
    let p3 = p * p * p;
    order.beta().powi(2)
        * (32.0 * q * q + sextic_lead(a) * p3 * p3 + 4.0 * p3 * q * (3.0 - 10.0 * a + 8.0 * a * a))
        / 1152.0
}

/// `Z(0, x, 1)`.
pub fn r4(order: Order, x: f64) -> f64 {
    let x2 = x * x;
    order.beta().powi(2) * (8.0 - 7.0 * x2 - x2 * x2 + 9.0 * x2 * x * order.alpha()) / 18.0
}

/// `Z(0, x, 0)`.
pub fn r5(order: Order, x: f64) -> f64 {
    let b = order.beta();
    x * (1.0 - b * x * x) * b * b / 2.0
}

pub fn edge_value(edge: Edge, order: Order, t: f64) -> Result<f64> {
    check_range("t", t, edge.range())?;
    Ok(match edge {
        Edge::R1 => r1(order, t),
        Edge::R2 => r2(order, t),
        Edge::R3 => x1_face(order, t),
        Edge::R4 => r4(order, t),
        Edge::R5 => r5(order, t),
        Edge::CP2 => p2_face(order),
        Edge::CP0X1 => x1_p0_value(order),
        Edge::P0X0 => 4.0 * order.beta().powi(2) * t * t / 9.0,
    })
}

/// `Z(0, 1, y) = alpha (1 - alpha)^2 / 2`.
pub fn x1_p0_value(order: Order) -> f64 {
    order.alpha() * order.beta().powi(2) / 2.0
}

/// `R(alpha) = sqrt(3 (3 - 3 alpha + 8 alpha^2 - 4 alpha^3))`.
pub fn r_of_alpha(order: Order) -> f64 {
    let a = order.alpha();
    (3.0 * (3.0 - 3.0 * a + 8.0 * a * a - 4.0 * a * a * a)).sqrt()
}

/// Maximiser and maximum of `r1` on `[0, 2]` from its closed form, valid
/// for `alpha` in `[0, 1/2)`.
pub fn r1_max(order: Order) -> Option<(f64, f64)> {
    let a = order.alpha();
    if a == 0.0 {
        return Some((2f64.sqrt(), 0.125));
    }
    if a >= 0.5 {
        return None;
    }
    let r = r_of_alpha(order);
    let den = 3.0 * a - 8.0 * a * a + 4.0 * a * a * a;
    let arg = 2.0 * ((3.0 - r) / den).sqrt();
    let value =
        order.beta().powi(2) * (3.0 - r) * (-3.0 + 6.0 * a - 16.0 * a * a + 8.0 * a * a * a + r)
            / (6.0 * (3.0 - 2.0 * a).powi(2) * a * a * (1.0 - 2.0 * a));
    Some((arg, value))
}

/// `delta3 = 1 / sqrt(3 (1 - alpha))`, the maximiser of `r5`.
pub fn delta3(order: Order) -> f64 {
    1.0 / (3.0 * order.beta()).sqrt()
}

/// `max r5 = (1 - alpha)^2 / (3 sqrt(3 (1 - alpha)))`, attained inside
/// `[0, 1]` when `alpha <= 2/3`.
pub fn r5_max(order: Order) -> Option<f64> {
    let d = delta3(order);
    if d > 1.0 {
        return None;
    }
    Some(order.beta().powi(2) / (3.0 * (3.0 * order.beta()).sqrt()))
}

// ---------------------------------------------------------------------------
// Critical points
// ---------------------------------------------------------------------------

fn case_one_parts(a: f64, p: f64, x: f64) -> (f64, f64) {
    let num = 4.0 * x * p * (5.0 + x - 12.0 * a)
        + p * p * p * (3.0 - x * x - 10.0 * a + 8.0 * a * a + x * (4.0 - 6.0 * a));
    let den = 2.0 * (1.0 - x) * (-4.0 * (8.0 - x) + p * p * (17.0 - x - 18.0 * a));
    (num, den)
}

/// Whether the inequality required for an interior critical point holds at
/// `(p, x)`, i.e. `den > num` in `y0 = num / den`.
pub fn case_one_inequality(order: Order, p: f64, x: f64) -> bool {
    let (num, den) = case_one_parts(order.alpha(), p, x);
    den - num > 0.0
}

/// Root `y0` of `dZ/dy = 0` at interior `(p, x)`, when it lies in `(0, 1)`.
pub fn interior_y_crit(order: Order, p: f64, x: f64) -> Option<f64> {
    if !(p > 0.0 && p < 2.0 && x > 0.0 && x < 1.0) {
        return None;
    }
    let (num, den) = case_one_parts(order.alpha(), p, x);
    if den == 0.0 {
        return None;
    }
    let y0 = num / den;
    (y0 > 0.0 && y0 < 1.0).then_some(y0)
}

/// Root `y0` of `ds2/dy = 0` on the face `x = 0`, when it lies in `(0, 1)`.
pub fn face_x0_y_crit(order: Order, p: f64) -> Option<f64> {
    if !(p > 0.0 && p < 2.0) {
        return None;
    }
    let (num, den) = face_x0_parts(order.alpha(), p);
    if den == 0.0 {
        return None;
    }
    let y0 = num / den;
    (y0 > 0.0 && y0 < 1.0).then_some(y0)
}

pub(crate) fn face_x0_parts(a: f64, p: f64) -> (f64, f64) {
    let num = p * p * p * (3.0 - 10.0 * a + 8.0 * a * a);
    let den = 2.0 * (17.0 * p * p - 32.0 - 18.0 * p * p * a);
    (num, den)
}

/// Raw `y0` on the face `x = 0` regardless of range; `None` only on a zero
/// denominator.
pub fn face_x0_y_raw(order: Order, p: f64) -> Option<f64> {
    let (num, den) = face_x0_parts(order.alpha(), p);
    (den != 0.0).then(|| num / den)
}

// ---------------------------------------------------------------------------
// Closed forms on the x = 1 face
// ---------------------------------------------------------------------------

/// `1 - 4a + 6a^2 - 16a^3 + 4a^4`.
pub const N_COEFFS: [f64; 5] = [1.0, -4.0, 6.0, -16.0, 4.0];
/// Radicand of `M`: `133 - 751a + 1497a^2 - 1630a^3 + 1666a^4 - 708a^5 + 144a^6`.
pub const M_SQ_COEFFS: [f64; 7] = [133.0, -751.0, 1497.0, -1630.0, 1666.0, -708.0, 144.0];

pub fn n_poly(a: f64) -> f64 {
    horner(&N_COEFFS, a)
}

/// `5 - 13a + 5a^2 + 3a^3`.
fn quartic_b(a: f64) -> f64 {
    horner(&[5.0, -13.0, 5.0, 3.0], a)
}

/// `-10 + 26a - 10a^2 - 6a^3 + M`, the numerator of `L^2`.
pub fn l_numerator(a: f64) -> f64 {
    horner(&[-10.0, 26.0, -10.0, -6.0], a) + horner(&M_SQ_COEFFS, a).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lmn {
    pub l: Option<f64>,
    pub m: f64,
    pub n: f64,
}

/// `L`, `M`, `N` for the stationary point `p0 = 2L` of `Z(p, 1, y)`.
pub fn lmn(order: Order) -> Lmn {
    let a = order.alpha();
    let m_sq = horner(&M_SQ_COEFFS, a);
    let m = m_sq.sqrt();
    let n = n_poly(a);
    let l = if n == 0.0 || m_sq < 0.0 {
        None
    } else {
        let rad = l_numerator(a) / (3.0 * n);
        (rad >= 0.0).then(|| rad.sqrt())
    };
    Lmn { l, m, n }
}

/// Half-width of the neighbourhood of `alpha0` on which `P(alpha)` refuses
/// to evaluate its `0/0` closed form.
pub const P_ALPHA_POLE_GUARD: f64 = 1e-9;

/// Closed form `P(alpha)` of the maximum of `Z(p, 1, y)` over `p`.
pub fn p_of_alpha(order: Order) -> Result<f64> {
    let a = order.alpha();
    let a0 = roots::alpha0().root;
    let a1 = roots::alpha1().root;
    if a >= a1 {
        return Err(Error::domain("alpha", a, "alpha < alpha1"));
    }
    if (a - a0).abs() < P_ALPHA_POLE_GUARD {
        return Err(Error::domain("alpha", a, "alpha != alpha0"));
    }
    let Lmn { l, m, n } = lmn(order);
    if l.is_none() {
        return Err(Error::domain("alpha", a, "L(alpha) real"));
    }
    let t = horner(&[-10.0, 26.0, -10.0, -6.0], a) + m;
    let k = horner(&[11.0, -33.0, 9.0], a);
    let value = order.beta().powi(2) / 486.0
        * (243.0 * a
            - 18.0 * k * (-t) / n
            - 12.0 * quartic_b(a) * t * t / (n * n)
            - 2.0 * t * t * t / (n * n));
    Ok(value)
}
