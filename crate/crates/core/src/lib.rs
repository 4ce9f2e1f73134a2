//! Numerical laboratory for the sharp bound `|H_{3,1}(f)| <= 4(1-alpha)^2/9`
//! on starlike functions of order `alpha`.
//!
//! The crate is organised bottom-up:
//!
//! - [`caratheodory`]: coefficients of positive-real-part functions, their
//!   parametrization by `(p1, gamma, eta, rho)` and a seeded sampler.
//! - [`functionals`]: the coefficient map to `a2..a5`, Hankel and
//!   Fekete-Szego functionals, and the extremal function's series.
//! - [`surface`]: the complex decomposition of `H_{3,1}`, the real majorant
//!   `Z(p, x, y)` over the cuboid `[0,2] x [0,1] x [0,1]`, its face and edge
//!   restrictions and the associated closed forms.
//! - [`roots`]: bisection with bracket certificates for every threshold the
//!   analysis depends on.
//! - [`optimizer`]: grid + compass maximisation of `Z` and the randomized
//!   lower-bound probe.
//! - [`verify`]: scans, cross-checks and figure data built on the above.
//! - [`cli`] and [`report`]: the `hankel-lab` command line and its CSV/JSON
//!   output.

pub mod caratheodory;
pub mod cli;
pub mod error;
pub mod functionals;
pub mod optimizer;
pub mod poly;
pub mod report;
pub mod roots;
pub mod surface;
pub mod verify;

pub use caratheodory::{CaratheodoryCoeffs, CaratheodoryParams};
pub use error::{Error, Result};
pub use functionals::{Order, SchlichtCoeffs};
pub use surface::CuboidPoint;

/// The sharp bound `4(1-alpha)^2/9`.
pub fn sharp_bound(order: Order) -> f64 {
    let b = 1.0 - order.alpha();
    4.0 * b * b / 9.0
}
