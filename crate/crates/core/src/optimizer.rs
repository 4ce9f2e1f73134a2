//! Maximisation of `Z` over the cuboid and the randomized lower-bound probe.
//!
//! All parallel reductions use a total order on candidates (value, then
//! index), so results do not depend on the number of worker threads.

use rayon::prelude::*;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::caratheodory::{coeffs_from_params, sample_range, CaratheodoryParams};
use crate::error::{Error, Result};
use crate::functionals::{hankel3, schlicht_unchecked, Order};
use crate::surface::{
    big_z_unchecked, case_one_inequality, edge_value, face_value, interior_y_crit, z_gradient,
    z_terms_unchecked, CuboidPoint, Edge, Face,
};

/// Number of grid starts refined by [`global_max`].
pub const REFINE_STARTS: usize = 8;
/// Finite-difference step and threshold used by [`interior_critical_scan`].
pub const CRITICAL_FD_STEP: f64 = 1e-6;
pub const CRITICAL_GRAD_TOL: f64 = 1e-6;

const PROBE_CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub grid_steps: (usize, usize, usize),
    pub refine_tol: f64,
    pub refine_max_iter: usize,
    pub seed: u64,
    pub sample_count: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            grid_steps: (201, 101, 101),
            refine_tol: 1e-10,
            refine_max_iter: 10_000,
            seed: 0,
            sample_count: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let (np, nx, ny) = self.grid_steps;
        for (name, n) in [("np", np), ("nx", nx), ("ny", ny)] {
            if n < 2 {
                return Err(Error::domain(name, n as f64, "grid steps >= 2"));
            }
        }
        if self.refine_tol.is_nan() || self.refine_tol < 1e-14 {
            return Err(Error::domain(
                "refine_tol",
                self.refine_tol,
                "refine_tol >= 1e-14",
            ));
        }
        if self.refine_max_iter == 0 {
            return Err(Error::domain(
                "refine_max_iter",
                0.0,
                "refine_max_iter >= 1",
            ));
        }
        Ok(())
    }

    fn grid_point(&self, (i, j, k): (usize, usize, usize)) -> CuboidPoint {
        let (np, nx, ny) = self.grid_steps;
        CuboidPoint {
            p: lattice(i, np, 2.0),
            x: lattice(j, nx, 1.0),
            y: lattice(k, ny, 1.0),
        }
    }
}

/// `k`-th of `n` equally spaced points on `[0, hi]`, with exact endpoints.
fn lattice(k: usize, n: usize, hi: f64) -> f64 {
    if k + 1 == n {
        hi
    } else {
        hi * k as f64 / (n - 1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MaxSource {
    Grid,
    Refined,
    Corner,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxReport {
    pub value: f64,
    pub argmax: CuboidPoint,
    pub source: MaxSource,
    pub evaluations: u64,
}

fn source_of(pt: CuboidPoint, otherwise: MaxSource) -> MaxSource {
    if pt.is_corner() {
        MaxSource::Corner
    } else {
        otherwise
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    value: f64,
    index: (usize, usize, usize),
}

impl Candidate {
    /// Better candidates sort first.
    fn rank(&self, other: &Self) -> Ordering {
        other
            .value
            .total_cmp(&self.value)
            .then_with(|| self.index.cmp(&other.index))
    }
}

/// The best `REFINE_STARTS` candidates seen so far, best first.
#[derive(Debug, Clone, Default)]
struct TopK {
    items: Vec<Candidate>,
    evaluations: u64,
}

impl TopK {
    fn push(&mut self, c: Candidate) {
        self.evaluations += 1;
        if self.items.len() == REFINE_STARTS
            && c.rank(self.items.last().expect("full")) != Ordering::Less
        {
            return;
        }
        let at = self.items.partition_point(|e| e.rank(&c) == Ordering::Less);
        self.items.insert(at, c);
        self.items.truncate(REFINE_STARTS);
    }

    fn merge(mut self, other: TopK) -> TopK {
        let evals = self.evaluations + other.evaluations;
        for c in other.items {
            self.push(c);
        }
        self.evaluations = evals;
        self
    }
}

fn grid_top(order: Order, cfg: &OptimizerConfig) -> TopK {
    let (np, nx, ny) = cfg.grid_steps;
    (0..np)
        .into_par_iter()
        .map(|i| {
            let mut top = TopK::default();
            let p = lattice(i, np, 2.0);
            for j in 0..nx {
                let terms = z_terms_unchecked(order, p, lattice(j, nx, 1.0));
                for k in 0..ny {
                    top.push(Candidate {
                        value: terms.at(lattice(k, ny, 1.0)),
                        index: (i, j, k),
                    });
                }
            }
            top
        })
        .reduce(TopK::default, TopK::merge)
}

/// Maximum of `Z` over the regular grid with `cfg.grid_steps` points per
/// axis, endpoints included.
pub fn grid_max(order: Order, cfg: &OptimizerConfig) -> Result<MaxReport> {
    cfg.validate()?;
    let top = grid_top(order, cfg);
    Ok(report_from_grid(cfg, &top))
}

fn report_from_grid(cfg: &OptimizerConfig, top: &TopK) -> MaxReport {
    let best = top.items[0];
    let argmax = cfg.grid_point(best.index);
    MaxReport {
        value: best.value,
        argmax,
        source: source_of(argmax, MaxSource::Grid),
        evaluations: top.evaluations,
    }
}

/// Compass ascent from `start`, projected onto the cuboid.
///
/// Each sweep tries `+-step` along `p`, `x`, `y` (scaled by the axis
/// length) and takes the first improvement; a sweep without improvement
/// halves the step.
pub fn refine_local(order: Order, start: CuboidPoint, cfg: &OptimizerConfig) -> Result<MaxReport> {
    cfg.validate()?;
    start.validate()?;
    let (np, nx, ny) = cfg.grid_steps;
    let spans = [2.0, 1.0, 1.0];
    let mut step = 1.0 / (np.max(nx).max(ny) - 1) as f64;
    let mut cur = start.as_array();
    let mut value = big_z_unchecked(order, start);
    let mut evaluations = 1u64;
    let mut iter = 0;
    while step >= cfg.refine_tol && iter < cfg.refine_max_iter {
        iter += 1;
        let mut improved = false;
        'sweep: for axis in 0..3 {
            for sign in [1.0, -1.0] {
                let mut cand = cur;
                cand[axis] = (cur[axis] + sign * step * spans[axis]).clamp(0.0, spans[axis]);
                if cand[axis] == cur[axis] {
                    continue;
                }
                let v = big_z_unchecked(order, to_point(cand));
                evaluations += 1;
                if v > value {
                    cur = cand;
                    value = v;
                    improved = true;
                    break 'sweep;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    let argmax = to_point(cur);
    let moved = argmax != start;
    Ok(MaxReport {
        value,
        argmax,
        source: source_of(
            argmax,
            if moved {
                MaxSource::Refined
            } else {
                MaxSource::Grid
            },
        ),
        evaluations,
    })
}

fn to_point(c: [f64; 3]) -> CuboidPoint {
    CuboidPoint {
        p: c[0],
        x: c[1],
        y: c[2],
    }
}

/// Grid maximum followed by compass refinement from the best
/// `REFINE_STARTS` grid points.
pub fn global_max(order: Order, cfg: &OptimizerConfig) -> Result<MaxReport> {
    cfg.validate()?;
    let top = grid_top(order, cfg);
    let mut best = report_from_grid(cfg, &top);
    let mut evaluations = best.evaluations;
    for c in &top.items {
        let r = refine_local(order, cfg.grid_point(c.index), cfg)?;
        evaluations += r.evaluations;
        if r.value > best.value {
            best = r;
        }
    }
    best.evaluations = evaluations;
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeReport {
    pub value: f64,
    pub witness: CaratheodoryParams,
    /// Stream index of the witness; `None` for the built-in extremal one.
    pub index: Option<u64>,
    pub samples: u64,
}

/// `|H_{3,1}|` through the coefficient route, never the decomposition.
pub fn probe_value(order: Order, params: &CaratheodoryParams) -> Result<f64> {
    let c = coeffs_from_params(params)?;
    Ok(hankel3(&schlicht_unchecked(order, &c)).norm())
}

/// Largest `|H_{3,1}|` over the extremal configuration and
/// `cfg.sample_count` seeded samples.
pub fn probe_max(order: Order, cfg: &OptimizerConfig) -> Result<ProbeReport> {
    let extremal = CaratheodoryParams::extremal();
    let start = (probe_value(order, &extremal)?, None::<u64>, extremal);
    let chunks = cfg.sample_count.div_ceil(PROBE_CHUNK);
    let better = |a: (f64, Option<u64>, CaratheodoryParams),
                  b: (f64, Option<u64>, CaratheodoryParams)| {
        match b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)) {
            Ordering::Greater => b,
            _ => a,
        }
    };
    let found = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<_> {
            let lo = c * PROBE_CHUNK;
            let hi = (lo + PROBE_CHUNK).min(cfg.sample_count);
            let mut best: Option<(f64, Option<u64>, CaratheodoryParams)> = None;
            for (off, s) in sample_range(cfg.seed, lo..hi).into_iter().enumerate() {
                let cand = (probe_value(order, &s)?, Some(lo + off as u64), s);
                best = Some(match best {
                    None => cand,
                    Some(b) => better(b, cand),
                });
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?;
    let (value, index, witness) = found.into_iter().flatten().fold(start, better);
    Ok(ProbeReport {
        value,
        witness,
        index,
        samples: cfg.sample_count,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalEntry {
    pub p: f64,
    pub x: f64,
    pub y0: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalScanReport {
    /// Interior `(p, x)` grid points visited.
    pub points: u64,
    /// Points at which the inequality needed for an interior critical
    /// point holds.
    pub inequality_holds: u64,
    /// Points with `y0` in `(0, 1)`.
    pub y0_inside: u64,
    pub entries: Vec<CriticalEntry>,
}

/// Looks for interior critical points of `Z` on the `(np, nx)` part of the
/// grid: points with `y0` in `(0, 1)` and every gradient component below
/// `CRITICAL_GRAD_TOL`.
pub fn interior_critical_scan(order: Order, cfg: &OptimizerConfig) -> Result<CriticalScanReport> {
    cfg.validate()?;
    let (np, nx, _) = cfg.grid_steps;
    let rows: Vec<_> = (1..np - 1)
        .into_par_iter()
        .map(|i| {
            let p = lattice(i, np, 2.0);
            let mut row = CriticalScanReport {
                points: 0,
                inequality_holds: 0,
                y0_inside: 0,
                entries: Vec::new(),
            };
            for j in 1..nx - 1 {
                let x = lattice(j, nx, 1.0);
                row.points += 1;
                if case_one_inequality(order, p, x) {
                    row.inequality_holds += 1;
                }
                let Some(y0) = interior_y_crit(order, p, x) else {
                    continue;
                };
                row.y0_inside += 1;
                let g = z_gradient(order, CuboidPoint { p, x, y: y0 }, CRITICAL_FD_STEP);
                if g.iter().all(|c| c.abs() < CRITICAL_GRAD_TOL) {
                    let grad_norm = g.iter().map(|c| c * c).sum::<f64>().sqrt();
                    row.entries.push(CriticalEntry {
                        p,
                        x,
                        y0,
                        grad_norm,
                    });
                }
            }
            row
        })
        .collect();
    let mut out = CriticalScanReport {
        points: 0,
        inequality_holds: 0,
        y0_inside: 0,
        entries: Vec::new(),
    };
    for r in rows {
        out.points += r.points;
        out.inequality_holds += r.inequality_holds;
        out.y0_inside += r.y0_inside;
        out.entries.extend(r.entries);
    }
    Ok(out)
}

/// `|H_{3,1}|` of a parameter tuple rotated by `theta`; used to check
/// rotation invariance from the parameter side.
pub fn rotated_value(order: Order, params: &CaratheodoryParams, theta: f64) -> Result<f64> {
    let c = coeffs_from_params(params)?;
    let s = crate::functionals::rotate_coeffs(&schlicht_unchecked(order, &c), theta);
    Ok(hankel3(&s).norm())
}

/// Lattice resolution used for the per-face and per-edge maxima.
pub const FACE_LATTICE: (usize, usize) = (201, 101);
pub const EDGE_LATTICE: usize = 2001;

/// Largest value of each face restriction over a `FACE_LATTICE` grid of its
/// parameter square.
pub fn face_maxima(order: Order) -> BTreeMap<Face, f64> {
    let (nu, nv) = FACE_LATTICE;
    Face::ALL
        .into_iter()
        .map(|face| {
            let [(u0, u1), (v0, v1)] = face.ranges();
            let mut best = f64::NEG_INFINITY;
            for i in 0..nu {
                let u = u0 + lattice(i, nu, u1 - u0);
                for j in 0..nv {
                    let v = v0 + lattice(j, nv, v1 - v0);
                    let z = face_value(face, order, u, v).expect("lattice inside face");
                    best = best.max(z);
                }
            }
            (face, best)
        })
        .collect()
}

/// Largest value of each edge restriction over `EDGE_LATTICE` points.
pub fn edge_maxima(order: Order) -> BTreeMap<Edge, f64> {
    Edge::ALL
        .into_iter()
        .map(|edge| {
            let (lo, hi) = edge.range();
            let best = (0..EDGE_LATTICE)
                .map(|k| {
                    edge_value(edge, order, lo + lattice(k, EDGE_LATTICE, hi - lo))
                        .expect("lattice inside edge")
                })
                .fold(f64::NEG_INFINITY, f64::max);
            (edge, best)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sharp_bound;

    fn ord(a: f64) -> Order {
        Order::new(a).unwrap()
    }

    fn small() -> OptimizerConfig {
        OptimizerConfig {
            grid_steps: (41, 21, 21),
            ..Default::default()
        }
    }

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig::default().validate().is_ok());
        let bad = OptimizerConfig {
            grid_steps: (1, 5, 5),
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = OptimizerConfig {
            refine_tol: 1e-15,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = OptimizerConfig {
            refine_max_iter: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn lattice_endpoints_exact() {
        assert_eq!(lattice(0, 201, 2.0), 0.0);
        assert_eq!(lattice(200, 201, 2.0), 2.0);
        assert_eq!(lattice(100, 101, 1.0), 1.0);
    }

    #[test]
    fn topk_keeps_best_in_order() {
        let mut t = TopK::default();
        for (n, v) in [3.0, 1.0, 3.0, 5.0, 0.0, 2.0, 4.0, 6.0, 7.0, 8.0, 9.0]
            .into_iter()
            .enumerate()
        {
            t.push(Candidate {
                value: v,
                index: (n, 0, 0),
            });
        }
        let vals: Vec<f64> = t.items.iter().map(|c| c.value).collect();
        assert_eq!(vals, [9.0, 8.0, 7.0, 6.0, 5.0, 4.0, 3.0, 3.0]);
        assert_eq!(t.items[6].index, (0, 0, 0));
        assert_eq!(t.evaluations, 11);
    }

    #[test]
    fn grid_max_small_examples() {
        for a in [0.0, 0.3] {
            let r = grid_max(ord(a), &small()).unwrap();
            assert!((r.value - sharp_bound(ord(a))).abs() < 1e-14);
            assert_eq!(
                r.argmax,
                CuboidPoint {
                    p: 0.0,
                    x: 0.0,
                    y: 1.0
                }
            );
            assert_eq!(r.source, MaxSource::Corner);
            assert_eq!(r.evaluations, 41 * 21 * 21);
        }
        // (1 - alpha)^2 factor
        assert!(grid_max(ord(0.999), &small()).unwrap().value < 1e-6);
    }

    #[test]
    fn report_value_matches_argmax() {
        let r = global_max(ord(0.2), &small()).unwrap();
        assert!((crate::surface::big_z(ord(0.2), r.argmax).unwrap() - r.value).abs() <= 1e-14);
    }

    #[test]
    fn refine_fixed_point_at_corner() {
        let start = CuboidPoint::new(0.0, 0.0, 1.0).unwrap();
        for a in [0.0, 0.2] {
            let r = refine_local(ord(a), start, &small()).unwrap();
            assert_eq!(r.argmax, start);
            assert_eq!(r.value, sharp_bound(ord(a)));
        }
    }

    #[test]
    fn refine_reaches_x1_stationary_value() {
        let start = CuboidPoint::new(1.43, 1.0, 0.0).unwrap();
        let r = refine_local(ord(0.0), start, &OptimizerConfig::default()).unwrap();
        assert!((r.value - 0.319594).abs() < 2e-6, "{r:?}");
        let closed = crate::surface::p_of_alpha(ord(0.0)).unwrap();
        assert!((r.value - closed).abs() < 1e-12);
        assert_eq!(r.source, MaxSource::Refined);
    }

    #[test]
    fn refine_is_monotone() {
        let cfg = small();
        for (p, x, y) in [(0.3, 0.4, 0.5), (1.9, 0.1, 0.2), (1.0, 0.9, 0.0)] {
            let start = CuboidPoint::new(p, x, y).unwrap();
            let r = refine_local(ord(0.1), start, &cfg).unwrap();
            assert!(r.value >= crate::surface::big_z(ord(0.1), start).unwrap());
        }
    }

    #[test]
    fn serial_and_parallel_agree() {
        let cfg = OptimizerConfig {
            grid_steps: (61, 31, 31),
            sample_count: 20_000,
            ..Default::default()
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        for a in [0.0, 0.17] {
            let par = global_max(ord(a), &cfg).unwrap();
            let ser = pool.install(|| global_max(ord(a), &cfg)).unwrap();
            assert_eq!(par, ser);
            let par = probe_max(ord(a), &cfg).unwrap();
            let ser = pool.install(|| probe_max(ord(a), &cfg)).unwrap();
            assert_eq!(par, ser);
        }
    }

    #[test]
    fn probe_without_samples_is_extremal() {
        for a in [0.0, 0.25, 0.5, 0.9] {
            let r = probe_max(ord(a), &OptimizerConfig::default()).unwrap();
            assert!((r.value - sharp_bound(ord(a))).abs() <= 1e-15);
            assert_eq!(r.index, None);
            assert_eq!(r.witness, CaratheodoryParams::extremal());
        }
    }

    #[test]
    fn probe_never_beats_bound() {
        let cfg = OptimizerConfig {
            sample_count: 50_000,
            seed: 3,
            ..Default::default()
        };
        for a in [0.0, 0.2, 0.36] {
            let r = probe_max(ord(a), &cfg).unwrap();
            assert!(r.value <= sharp_bound(ord(a)) + 1e-12);
        }
    }

    #[test]
    fn corner_floor() {
        let cfg = small();
        for a in [0.0, 0.3] {
            let r = global_max(ord(a), &cfg).unwrap();
            for p in [0.0, 2.0] {
                for x in [0.0, 1.0] {
                    for y in [0.0, 1.0] {
                        let z = crate::surface::big_z(ord(a), CuboidPoint { p, x, y }).unwrap();
                        assert!(r.value >= z);
                    }
                }
            }
        }
    }

    #[test]
    fn critical_scan_small_grid() {
        let cfg = OptimizerConfig {
            grid_steps: (81, 41, 2),
            ..Default::default()
        };
        let r = interior_critical_scan(ord(0.1), &cfg).unwrap();
        assert_eq!(r.points, 79 * 39);
        assert!(r.entries.is_empty());
        assert!(r.inequality_holds > 0);
    }

    #[test]
    fn rotation_leaves_modulus() {
        let s = crate::caratheodory::sample_param(1, 7);
        let v = probe_value(ord(0.2), &s).unwrap();
        for t in [0.3, 1.0, 2.5] {
            let w = rotated_value(ord(0.2), &s, t).unwrap();
            assert!((v - w).abs() <= 1e-14 * v.max(1e-3));
        }
    }
}
