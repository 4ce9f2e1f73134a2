//! Coefficients of functions with positive real part and their
//! `(p1, gamma, eta, rho)` parametrization.
//!
//! A function `p(z) = 1 + p1 z + p2 z^2 + ...` in the Caratheodory class has
//! `|pk| <= 2`. After a rotation `p1` may be taken real in `[0, 2]`, and the
//! next three coefficients are then polynomials in `p1` and three points of
//! the closed unit disk.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::ops::Range;

use crate::error::{Error, Result};

/// Rounding slack allowed when checking `|z| <= 1` and `|pk| <= 2`.
pub(crate) const DISK_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaratheodoryParams {
    pub p1: f64,
    pub gamma: Complex64,
    pub eta: Complex64,
    pub rho: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaratheodoryCoeffs {
    pub p1: f64,
    pub p2: Complex64,
    pub p3: Complex64,
    pub p4: Complex64,
}

impl CaratheodoryParams {
    pub fn new(p1: f64, gamma: Complex64, eta: Complex64, rho: Complex64) -> Result<Self> {
        let params = CaratheodoryParams {
            p1,
            gamma,
            eta,
            rho,
        };
        params.validate()?;
        Ok(params)
    }

    /// Convenience constructor for real disk parameters.
    pub fn real(p1: f64, gamma: f64, eta: f64, rho: f64) -> Result<Self> {
        Self::new(p1, gamma.into(), eta.into(), rho.into())
    }

    /// The configuration `p1 = 0, gamma = 0, eta = 1, rho = 0`, which yields
    /// `p(z) = (1 + z^3) / (1 - z^3)` up to order four.
    pub fn extremal() -> Self {
        CaratheodoryParams {
            p1: 0.0,
            gamma: Complex64::new(0.0, 0.0),
            eta: Complex64::new(1.0, 0.0),
            rho: Complex64::new(0.0, 0.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_p1(self.p1)?;
        check_disk("gamma", self.gamma)?;
        check_disk("eta", self.eta)?;
        check_disk("rho", self.rho)
    }
}

impl CaratheodoryCoeffs {
    pub fn new(p1: f64, p2: Complex64, p3: Complex64, p4: Complex64) -> Result<Self> {
        let c = CaratheodoryCoeffs { p1, p2, p3, p4 };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p1.is_finite() && self.p1.abs() <= 2.0 + DISK_SLACK) {
            return Err(Error::domain("p1", self.p1, "|p1| <= 2"));
        }
        for (name, v) in [("p2", self.p2), ("p3", self.p3), ("p4", self.p4)] {
            let m = v.norm();
            if !(m.is_finite() && m <= 2.0 + DISK_SLACK) {
                return Err(Error::domain(name, m, "|pk| <= 2"));
            }
        }
        Ok(())
    }
}

fn check_p1(p1: f64) -> Result<()> {
    if (0.0..=2.0).contains(&p1) {
        Ok(())
    } else {
        Err(Error::domain("p1", p1, "0 <= p1 <= 2"))
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

// Unchecked kernels; callers validate first.

fn p2_raw(p1: f64, gamma: Complex64) -> Complex64 {
    let q = 4.0 - p1 * p1;
    (p1 * p1 + gamma * q) / 2.0
}

fn p3_raw(p1: f64, gamma: Complex64, eta: Complex64) -> Complex64 {
    let q = 4.0 - p1 * p1;
    let g2 = gamma.norm_sqr();
    (p1.powi(3) + 2.0 * p1 * q * gamma - p1 * q * gamma * gamma + 2.0 * q * (1.0 - g2) * eta) / 4.0
}

fn p4_raw(params: &CaratheodoryParams) -> Complex64 {
    let CaratheodoryParams {
        p1,
        gamma,
        eta,
        rho,
    } = *params;
    let q = 4.0 - p1 * p1;
    let p1sq = p1 * p1;
    let g2 = gamma.norm_sqr();
    let e2 = eta.norm_sqr();
    let inner = p1sq * (gamma * gamma - 3.0 * gamma + 3.0) + 4.0 * gamma;
    let tail = p1 * (gamma - 1.0) * eta + gamma.conj() * eta * eta - (1.0 - e2) * rho;
    (p1sq * p1sq + q * gamma * inner - 4.0 * q * (1.0 - g2) * tail) / 8.0
}

/// `p2 = (p1^2 + gamma (4 - p1^2)) / 2`.
pub fn p2_of(p1: f64, gamma: Complex64) -> Result<Complex64> {
    check_p1(p1)?;
    check_disk("gamma", gamma)?;
    Ok(p2_raw(p1, gamma))
}

/// `p3 = (p1^3 + 2 p1 q gamma - p1 q gamma^2 + 2 q (1 - |gamma|^2) eta) / 4`
/// with `q = 4 - p1^2`.
pub fn p3_of(p1: f64, gamma: Complex64, eta: Complex64) -> Result<Complex64> {
    check_p1(p1)?;
    check_disk("gamma", gamma)?;
    check_disk("eta", eta)?;
    Ok(p3_raw(p1, gamma, eta))
}

pub fn p4_of(params: &CaratheodoryParams) -> Result<Complex64> {
    params.validate()?;
    Ok(p4_raw(params))
}

pub fn coeffs_from_params(params: &CaratheodoryParams) -> Result<CaratheodoryCoeffs> {
    params.validate()?;
    Ok(CaratheodoryCoeffs {
        p1: params.p1,
        p2: p2_raw(params.p1, params.gamma),
        p3: p3_raw(params.p1, params.gamma, params.eta),
        p4: p4_raw(params),
    })
}

/// Number of 32-bit generator words consumed per sample (seven `f64` draws).
const WORDS_PER_SAMPLE: u128 = 14;

fn disk_point<R: Rng>(rng: &mut R) -> Complex64 {
    let theta = TAU * rng.gen::<f64>();
    let radius = rng.gen::<f64>().sqrt();
    Complex64::from_polar(radius, theta)
}

fn draw<R: Rng>(rng: &mut R) -> CaratheodoryParams {
    let p1 = 2.0 * rng.gen::<f64>();
    let gamma = disk_point(rng);
    let eta = disk_point(rng);
    let rho = disk_point(rng);
    CaratheodoryParams {
        p1,
        gamma,
        eta,
        rho,
    }
}

fn stream_at(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(index as u128 * WORDS_PER_SAMPLE);
    rng
}

/// The `index`-th sample of the stream for `seed`.
///
/// The stream is counter based: sample `i` depends only on `(seed, i)`, so
/// any sub-range can be produced independently.
pub fn sample_param(seed: u64, index: u64) -> CaratheodoryParams {
    draw(&mut stream_at(seed, index))
}

/// Samples `range.start..range.end` of the stream for `seed`.
pub fn sample_range(seed: u64, range: Range<u64>) -> Vec<CaratheodoryParams> {
    if range.is_empty() {
        return Vec::new();
    }
    let mut rng = stream_at(seed, range.start);
    range.map(|_| draw(&mut rng)).collect()
}

/// `count` parameter tuples with `p1` uniform on `[0, 2]` and `gamma`, `eta`,
/// `rho` area-uniform on the closed unit disk.
pub fn sample_params(seed: u64, count: usize) -> Vec<CaratheodoryParams> {
    sample_range(seed, 0..count as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn p2_examples() {
        assert_eq!(p2_of(2.0, c(0.3, -0.7)).unwrap(), c(2.0, 0.0));
        assert_eq!(p2_of(0.0, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(p2_of(1.0, c(1.0, 0.0)).unwrap(), c(2.0, 0.0));
    }

    #[test]
    fn p3_examples() {
        assert_eq!(p3_of(2.0, c(0.2, 0.1), c(-0.5, 0.5)).unwrap(), c(2.0, 0.0));
        assert_eq!(p3_of(0.0, c(0.0, 0.0), c(1.0, 0.0)).unwrap(), c(2.0, 0.0));
        assert_eq!(p3_of(1.0, c(1.0, 0.0), c(0.4, -0.3)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn p4_examples() {
        let at = |p1, g: Complex64, e: Complex64, r: Complex64| {
            p4_of(&CaratheodoryParams::new(p1, g, e, r).unwrap()).unwrap()
        };
        assert_eq!(at(2.0, c(0.5, 0.5), c(0.1, 0.0), c(0.0, 1.0)), c(2.0, 0.0));
        assert_eq!(at(0.0, c(0.0, 0.0), c(1.0, 0.0), c(0.6, 0.2)), c(0.0, 0.0));
        assert_eq!(at(1.0, c(1.0, 0.0), c(0.3, 0.3), c(-0.9, 0.0)), c(2.0, 0.0));
    }

    #[test]
    fn coeff_bundles() {
        let k = coeffs_from_params(&CaratheodoryParams::real(2.0, 0.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(
            (k.p1, k.p2, k.p3, k.p4),
            (2.0, c(2.0, 0.0), c(2.0, 0.0), c(2.0, 0.0))
        );
        let e = coeffs_from_params(&CaratheodoryParams::extremal()).unwrap();
        assert_eq!(
            (e.p1, e.p2, e.p3, e.p4),
            (0.0, c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0))
        );
        let z = coeffs_from_params(&CaratheodoryParams::real(0.0, 0.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!((z.p2, z.p3, z.p4), (c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)));
    }

    #[test]
    fn domain_errors() {
        assert!(p2_of(2.5, c(0.0, 0.0)).is_err());
        assert!(p2_of(-0.1, c(0.0, 0.0)).is_err());
        assert!(p2_of(1.0, c(1.0, 1.0)).is_err());
        assert!(p3_of(1.0, c(0.0, 0.0), c(0.0, 1.5)).is_err());
        assert!(p2_of(f64::NAN, c(0.0, 0.0)).is_err());
        let bad = CaratheodoryParams {
            p1: 1.0,
            gamma: c(0.0, 0.0),
            eta: c(0.0, 0.0),
            rho: c(2.0, 0.0),
        };
        assert!(p4_of(&bad).is_err());
        assert!(coeffs_from_params(&bad).is_err());
        assert!(CaratheodoryCoeffs::new(1.0, c(2.1, 0.0), c(0.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn sampler_is_deterministic_and_sliceable() {
        assert!(sample_params(7, 0).is_empty());
        let a = sample_params(7, 500);
        let b = sample_params(7, 500);
        assert_eq!(a, b);
        assert_ne!(a, sample_params(8, 500));
        let tail = sample_range(7, 123..500);
        assert_eq!(&a[123..], &tail[..]);
        assert_eq!(a[321], sample_param(7, 321));
    }

    #[test]
    fn sampler_value_stability() {
        // Frozen bit patterns; a change here breaks reproducibility of
        // every seeded report.
        let s = sample_param(42, 0);
        let t = sample_param(42, 123_456);
        let bits: Vec<u64> = [s.p1, s.gamma.re, s.rho.im, t.p1, t.eta.re]
            .iter()
            .map(|v| v.to_bits())
            .collect();
        assert_eq!(
            bits,
            [
                0x3ff5d217f6a72bab,
                0x3fe3e9047b431cdb,
                0x3fdcbb4afb66aa09,
                0x3fda9f0f0fc659e4,
                0xbfcbf68d5314c9b8,
            ]
        );
    }

    #[test]
    fn sampled_params_respect_invariants() {
        for s in sample_params(2024, 100_000) {
            assert!((0.0..=2.0).contains(&s.p1));
            for z in [s.gamma, s.eta, s.rho] {
                assert!(z.norm() <= 1.0 + DISK_SLACK);
            }
            s.validate().unwrap();
        }
    }

    #[test]
    fn sampled_coefficients_bounded_by_two() {
        for s in sample_params(99, 100_000) {
            let k = coeffs_from_params(&s).unwrap();
            assert!(k.p2.norm() <= 2.0 + 1e-12, "{s:?}");
            assert!(k.p3.norm() <= 2.0 + 1e-12, "{s:?}");
            assert!(k.p4.norm() <= 2.0 + 1e-12, "{s:?}");
        }
    }

    #[test]
    fn disk_sampling_is_area_uniform() {
        // P(|z| <= 1/2) = 1/4 under area-uniform sampling.
        let n = 200_000;
        let inner = sample_params(5, n)
            .iter()
            .filter(|s| s.gamma.norm() <= 0.5)
            .count();
        let frac = inner as f64 / n as f64;
        assert!((frac - 0.25).abs() < 0.005, "{frac}");
    }

    #[test]
    fn boundary_collapse_at_p1_two() {
        for mut s in sample_params(11, 2_000) {
            s.p1 = 2.0;
            let k = coeffs_from_params(&s).unwrap();
            assert_eq!(k.p2, c(2.0, 0.0));
            assert_eq!(k.p3, c(2.0, 0.0));
            assert_eq!(k.p4, c(2.0, 0.0));
        }
    }

    #[test]
    fn unimodular_gamma_kills_eta_in_p3() {
        let unit = [
            c(1.0, 0.0),
            c(-1.0, 0.0),
            c(0.0, 1.0),
            c(0.0, -1.0),
            c(0.6, 0.8),
        ];
        for g in unit {
            assert_eq!(g.norm_sqr(), 1.0);
            for s in sample_params(3, 200) {
                let a = p3_of(s.p1, g, s.eta).unwrap();
                let b = p3_of(s.p1, g, s.rho).unwrap();
                assert_eq!(a, b);
                let with = |eta| {
                    p4_of(&CaratheodoryParams {
                        p1: s.p1,
                        gamma: g,
                        eta,
                        rho: s.rho,
                    })
                };
                assert_eq!(with(s.eta).unwrap(), with(s.gamma).unwrap());
            }
        }
    }
}
