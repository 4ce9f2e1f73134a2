//! The verification runs behind the command line: bound scans, the
//! decomposition cross-check, the nephroid case, the extremal table and
//! the figure data.

use serde::Serialize;
use std::f64::consts::TAU;

use crate::caratheodory::{sample_range, CaratheodoryParams};
use crate::error::{Error, Result};
use crate::functionals::{extremal_coeffs, extremal_schlicht, hankel3, Order};
use crate::optimizer::{
    edge_maxima, face_maxima, global_max, probe_max, probe_value, rotated_value, OptimizerConfig,
};
use crate::poly::horner;
use crate::report::{fmt_fixed12, fmt_num, fmt_opt, BoundScanRow, CsvTable, RowStatus};
use crate::roots;
use crate::sharp_bound;
use crate::surface::{
    self, big_z_unchecked, delta_terms, hankel3_decomposed_unchecked, lmn, p_of_alpha, phi_term,
    z_terms_unchecked, CuboidPoint,
};

pub const DEFAULT_WINDOW: f64 = 0.02;
/// `|global max - bound|` allowed for a verified row.
pub const BOUND_TOL: f64 = 1e-8;
/// Slack allowed for the probe above the bound and above the grid maximum.
pub const PROBE_TOL: f64 = 1e-12;
pub const PROBE_GRID_TOL: f64 = 1e-10;
/// Tolerances of the cross-check suites.
pub const IDENTITY_TOL: f64 = 1e-10;
pub const ROTATION_TOL: f64 = 1e-10;
pub const MAJORANT_TOL: f64 = 1e-12;
const MAX_REPORTED_FAILURES: usize = 5;

/// `alpha` values `min, min + step, ...` up to `max`, rounded to 12
/// decimals so that printed grids are exact.
pub fn alpha_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(0.0..1.0).contains(&min) {
        return Err(Error::domain("alpha_min", min, "0 <= alpha_min < 1"));
    }
    if !(max >= min && max < 1.0) {
        return Err(Error::domain(
            "alpha_max",
            max,
            "alpha_min <= alpha_max < 1",
        ));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::domain("alpha_step", step, "alpha_step > 0"));
    }
    let n = ((max - min) / step + 1e-9).floor() as usize;
    Ok((0..=n)
        .map(|k| ((min + k as f64 * step) * 1e12).round() / 1e12)
        .filter(|a| *a <= max && *a < 1.0)
        .collect())
}

/// `alpha` lies in the verified range `[0, alpha1)`.
pub fn in_theorem_range(alpha: f64) -> bool {
    (0.0..roots::alpha1().root).contains(&alpha)
}

pub fn in_alpha0_window(alpha: f64, window: f64) -> bool {
    (alpha - roots::alpha0().root).abs() <= window
}

pub fn classify(alpha: f64, bound: f64, grid_max: f64, probe: f64, window: f64) -> RowStatus {
    if in_alpha0_window(alpha, window) {
        return RowStatus::ExcludedWindow;
    }
    if !in_theorem_range(alpha) {
        return RowStatus::Observation;
    }
    let ok = (grid_max - bound).abs() <= BOUND_TOL
        && probe <= bound + PROBE_TOL
        && probe <= grid_max + PROBE_GRID_TOL;
    if ok {
        RowStatus::Verified
    } else {
        RowStatus::Violation
    }
}

pub fn scan_row(order: Order, cfg: &OptimizerConfig, window: f64) -> Result<BoundScanRow> {
    let bound = sharp_bound(order);
    let g = global_max(order, cfg)?;
    let probe = probe_max(order, cfg)?;
    Ok(BoundScanRow {
        alpha: order.alpha(),
        bound_closed_form: bound,
        grid_max: g.value,
        argmax: g.argmax,
        probe_max: probe.value,
        face_maxima: face_maxima(order),
        edge_maxima: edge_maxima(order),
        p_alpha: p_of_alpha(order).ok(),
        status: classify(order.alpha(), bound, g.value, probe.value, window),
    })
}

pub fn scan(alphas: &[f64], cfg: &OptimizerConfig, window: f64) -> Result<Vec<BoundScanRow>> {
    alphas
        .iter()
        .map(|&a| scan_row(Order::new(a)?, cfg, window))
        .collect()
}

// ---------------------------------------------------------------------------
// Cross-check
// ---------------------------------------------------------------------------

/// The linear-in-`x` coefficient of `z1` is nonnegative, which is what the
/// termwise majorant needs. It turns negative just above `alpha = 0.2627`.
pub fn majorant_asserted(alpha: f64) -> bool {
    horner(&[3.0, -19.0, 32.0, -12.0], alpha) >= 0.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossFailure {
    pub check: &'static str,
    /// Sample index, `None` for the forced configurations.
    pub index: Option<u64>,
    pub params: CaratheodoryParams,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossRow {
    pub alpha: f64,
    pub samples: u64,
    /// Worst `|decomposed - direct| / max(|direct|, bound)`.
    pub identity_worst: f64,
    /// Worst relative change of `|H|` under rotation.
    pub rotation_worst: f64,
    pub majorant_asserted: bool,
    /// Worst excess of `|D_k|` over `z_k` (and `|H|` over `Z`), relative to
    /// `max(z_k, 1)`; negative means dominated.
    pub majorant_worst: f64,
    /// `| |H(extremal)| - bound | / bound`.
    pub extremal_residual: f64,
    pub passed: bool,
    pub failures: Vec<CrossFailure>,
}

struct Tally {
    identity: f64,
    rotation: f64,
    majorant: f64,
    failures: Vec<CrossFailure>,
    failed: bool,
}

impl Tally {
    fn new() -> Self {
        Tally {
            identity: 0.0,
            rotation: 0.0,
            majorant: f64::NEG_INFINITY,
            failures: Vec::new(),
            failed: false,
        }
    }

    fn fail(
        &mut self,
        check: &'static str,
        index: Option<u64>,
        params: CaratheodoryParams,
        residual: f64,
    ) {
        self.failed = true;
        if self.failures.len() < MAX_REPORTED_FAILURES {
            self.failures.push(CrossFailure {
                check,
                index,
                params,
                residual,
            });
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.identity = self.identity.max(other.identity);
        self.rotation = self.rotation.max(other.rotation);
        self.majorant = self.majorant.max(other.majorant);
        self.failed |= other.failed;
        for f in other.failures {
            if self.failures.len() < MAX_REPORTED_FAILURES {
                self.failures.push(f);
            }
        }
        self
    }
}

fn check_one(
    order: Order,
    assert_majorant: bool,
    index: Option<u64>,
    s: &CaratheodoryParams,
) -> Result<Tally> {
    let mut t = Tally::new();
    let bound = sharp_bound(order);
    let direct = probe_direct(order, s)?;
    let dec = hankel3_decomposed_unchecked(order, s);
    let identity = (dec - direct).norm() / direct.norm().max(bound);
    t.identity = identity;
    if identity.is_nan() || identity > IDENTITY_TOL {
        t.fail("identity", index, *s, identity);
    }

    let theta = TAU * ((index.unwrap_or(0) as f64 + 0.5) * 0.618_033_988_749_895).fract();
    let rotated = rotated_value(order, s, theta)?;
    let rotation = (rotated - direct.norm()).abs() / direct.norm().max(bound);
    t.rotation = rotation;
    if rotation.is_nan() || rotation > ROTATION_TOL {
        t.fail("rotation", index, *s, rotation);
    }

    let x = s.gamma.norm().min(1.0);
    let y = s.eta.norm().min(1.0);
    let d = delta_terms(order, s.p1, s.gamma)?;
    let z = z_terms_unchecked(order, s.p1, x);
    let phi = phi_term(order, s.p1, s.gamma, s.eta)?;
    let zz = big_z_unchecked(order, CuboidPoint { p: s.p1, x, y });
    let rel = |lhs: f64, rhs: f64| (lhs - rhs) / rhs.max(1.0);
    let excess = [
        rel(d.d1.norm(), z.z1),
        rel(d.d2.norm(), z.z2),
        rel(d.d3.norm(), z.z3),
        rel(phi.norm(), z.z4 * (1.0 - y * y)),
        rel(dec.norm(), zz),
    ]
    .into_iter()
    .fold(f64::NEG_INFINITY, f64::max);
    t.majorant = excess;
    if assert_majorant && excess > MAJORANT_TOL {
        t.fail("majorant", index, *s, excess);
    }
    Ok(t)
}

fn probe_direct(order: Order, s: &CaratheodoryParams) -> Result<num_complex::Complex64> {
    let c = crate::caratheodory::coeffs_from_params(s)?;
    Ok(hankel3(&crate::functionals::schlicht_coeffs(order, &c)?))
}

/// Runs the identity, rotation and majorant suites at `alpha` over
/// `samples` seeded samples plus the extremal and zero configurations.
pub fn crosscheck_alpha(order: Order, samples: u64, seed: u64) -> Result<CrossRow> {
    use rayon::prelude::*;
    let assert_majorant = majorant_asserted(order.alpha());
    let bound = sharp_bound(order);
    let extremal = CaratheodoryParams::extremal();
    let zero = CaratheodoryParams::real(0.0, 0.0, 0.0, 0.0)?;
    let mut tally = check_one(order, assert_majorant, None, &extremal)?.merge(check_one(
        order,
        assert_majorant,
        None,
        &zero,
    )?);

    let extremal_residual =
        (probe_value(order, &extremal)? - bound).abs() / bound.max(f64::MIN_POSITIVE);
    if extremal_residual > 1e-14 {
        tally.fail("extremal", None, extremal, extremal_residual);
    }

    const CHUNK: u64 = 4096;
    let chunks: Vec<Tally> = (0..samples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| -> Result<Tally> {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(samples);
            let mut acc = Tally::new();
            for (off, s) in sample_range(seed, lo..hi).iter().enumerate() {
                acc = acc.merge(check_one(order, assert_majorant, Some(lo + off as u64), s)?);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    for c in chunks {
        tally = tally.merge(c);
    }
    Ok(CrossRow {
        alpha: order.alpha(),
        samples,
        identity_worst: tally.identity,
        rotation_worst: tally.rotation,
        majorant_asserted: assert_majorant,
        majorant_worst: tally.majorant,
        extremal_residual,
        passed: !tally.failed,
        failures: tally.failures,
    })
}

pub fn cross_table(rows: &[CrossRow]) -> CsvTable {
    let mut t = CsvTable::new([
        "alpha",
        "samples",
        "identity_worst",
        "rotation_worst",
        "majorant_asserted",
        "majorant_worst",
        "extremal_residual",
        "status",
    ]);
    for r in rows {
        t.push(vec![
            fmt_num(r.alpha),
            r.samples.to_string(),
            fmt_num(r.identity_worst),
            fmt_num(r.rotation_worst),
            r.majorant_asserted.to_string(),
            fmt_num(r.majorant_worst),
            fmt_num(r.extremal_residual),
            if r.passed { "pass" } else { "fail" }.to_string(),
        ]);
    }
    t
}

// ---------------------------------------------------------------------------
// Roots, nephroid, extremal
// ---------------------------------------------------------------------------

pub fn root_rows() -> Vec<roots::RootResult> {
    vec![
        roots::alpha0(),
        roots::alpha1(),
        roots::alpha2(),
        roots::beta0(),
    ]
}

pub fn roots_table(rows: &[roots::RootResult]) -> CsvTable {
    let mut t = CsvTable::new([
        "target",
        "bracket_lo",
        "bracket_hi",
        "root",
        "residual",
        "iterations",
    ]);
    for r in rows {
        t.push(vec![
            r.target.to_string(),
            fmt_num(r.bracket.0),
            fmt_num(r.bracket.1),
            fmt_num(r.root),
            fmt_num(r.residual),
            r.iterations.to_string(),
        ]);
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Nephroid {
    pub alpha: f64,
    pub bound: f64,
    pub bound_exact: f64,
    pub in_theorem_range: bool,
}

/// Order of the nephroid-type class obtained as `r -> 1` in
/// `1 - (1 + r^2)^{3/2} / 3`.
pub fn nephroid() -> Nephroid {
    let r: f64 = 1.0;
    let alpha = 1.0 - (1.0 + r * r).powf(1.5) / 3.0;
    let order = Order::new(alpha).expect("nephroid order inside [0, 1)");
    let a0 = roots::alpha0().root;
    Nephroid {
        alpha,
        bound: sharp_bound(order),
        bound_exact: 32.0 / 81.0,
        in_theorem_range: in_theorem_range(alpha) && alpha != a0,
    }
}

pub fn nephroid_table(n: &Nephroid) -> CsvTable {
    let mut t = CsvTable::new(["quantity", "value"]);
    t.push(vec!["alpha".into(), fmt_num(n.alpha)]);
    t.push(vec!["bound".into(), fmt_num(n.bound)]);
    t.push(vec!["bound_exact".into(), fmt_num(n.bound_exact)]);
    t.push(vec![
        "in_theorem_range".into(),
        n.in_theorem_range.to_string(),
    ]);
    t
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalReport {
    pub alpha: f64,
    /// `a_1, ..., a_{n_max}`.
    pub coefficients: Vec<f64>,
    pub hankel3: f64,
    pub bound: f64,
    pub ratio: f64,
}

pub fn extremal(order: Order, n_max: usize) -> Result<ExtremalReport> {
    let coefficients = extremal_coeffs(order, n_max)?;
    let h = hankel3(&extremal_schlicht(order));
    let bound = sharp_bound(order);
    Ok(ExtremalReport {
        alpha: order.alpha(),
        coefficients,
        hankel3: h.re,
        bound,
        ratio: h.norm() / bound,
    })
}

pub fn extremal_table(r: &ExtremalReport) -> CsvTable {
    let mut t = CsvTable::new(["quantity", "value"]);
    for (n, a) in r.coefficients.iter().enumerate() {
        t.push(vec![format!("a{}", n + 1), fmt_num(*a)]);
    }
    t.push(vec!["hankel3".into(), fmt_num(r.hankel3)]);
    t.push(vec!["bound".into(), fmt_num(r.bound)]);
    t.push(vec!["ratio".into(), fmt_fixed12(r.ratio)]);
    t
}

// ---------------------------------------------------------------------------
// Figure data
// ---------------------------------------------------------------------------

pub const FIGURE_STEP: f64 = 0.001;

fn figure_alphas(hi: f64, inclusive: bool) -> Vec<f64> {
    let n = (hi / FIGURE_STEP).floor() as usize;
    (0..=n)
        .map(|k| (k as f64 * FIGURE_STEP * 1e12).round() / 1e12)
        .filter(|a| if inclusive { *a <= hi } else { *a < hi })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureARow {
    pub alpha: f64,
    /// Smallest root in `(0, 2)` of the `x = 0` face stationarity polynomial.
    pub stationary_root: Option<f64>,
    /// Critical height on `x = 0` at that root; outside `(0, 1)` throughout.
    pub stationary_y0: Option<f64>,
    /// Smallest `p` at which the `x = 0` critical height enters `(0, 1)`.
    pub x0_threshold: Option<f64>,
}

pub fn figure_a() -> Vec<FigureARow> {
    figure_alphas(roots::alpha2().root + 0.05, true)
        .into_iter()
        .map(|a| {
            let o = Order::new(a).expect("figure alpha");
            let root = roots::stationary_p_root(o).map(|r| r.root);
            FigureARow {
                alpha: a,
                stationary_root: root,
                stationary_y0: root.and_then(|p| surface::face_x0_y_raw(o, p)),
                x0_threshold: roots::face_x0_threshold(o).map(|r| r.root),
            }
        })
        .collect()
}

pub fn figure_a_table(rows: &[FigureARow]) -> CsvTable {
    let mut t = CsvTable::new(["alpha", "stationary_root", "stationary_y0", "x0_threshold"]);
    for r in rows {
        t.push(vec![
            fmt_num(r.alpha),
            fmt_opt(r.stationary_root),
            fmt_opt(r.stationary_y0),
            fmt_opt(r.x0_threshold),
        ]);
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum P0Status {
    Real,
    RealOutOfRange,
    Imaginary,
    Pole,
}

impl P0Status {
    pub fn name(self) -> &'static str {
        match self {
            P0Status::Real => "real",
            P0Status::RealOutOfRange => "real_out_of_range",
            P0Status::Imaginary => "imaginary",
            P0Status::Pole => "pole",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureBRow {
    pub alpha: f64,
    pub re_p0: Option<f64>,
    pub im_p0: Option<f64>,
    pub status: P0Status,
}

/// `p0 = 2L(alpha)` split into real and imaginary parts.
pub fn p0_of(order: Order) -> FigureBRow {
    let a = order.alpha();
    let v = lmn(order);
    if v.n == 0.0 {
        return FigureBRow {
            alpha: a,
            re_p0: None,
            im_p0: None,
            status: P0Status::Pole,
        };
    }
    let l_sq = surface::l_numerator(a) / (3.0 * v.n);
    if l_sq >= 0.0 {
        let p0 = 2.0 * l_sq.sqrt();
        let status = if p0 > 0.0 && p0 < 2.0 {
            P0Status::Real
        } else {
            P0Status::RealOutOfRange
        };
        FigureBRow {
            alpha: a,
            re_p0: Some(p0),
            im_p0: Some(0.0),
            status,
        }
    } else {
        FigureBRow {
            alpha: a,
            re_p0: Some(0.0),
            im_p0: Some(2.0 * (-l_sq).sqrt()),
            status: P0Status::Imaginary,
        }
    }
}

pub fn figure_b() -> Vec<FigureBRow> {
    figure_alphas(0.5, true)
        .into_iter()
        .map(|a| p0_of(Order::new(a).expect("figure alpha")))
        .collect()
}

pub fn figure_b_table(rows: &[FigureBRow]) -> CsvTable {
    let mut t = CsvTable::new(["alpha", "re_p0", "im_p0", "status"]);
    for r in rows {
        t.push(vec![
            fmt_num(r.alpha),
            fmt_opt(r.re_p0),
            fmt_opt(r.im_p0),
            r.status.name().into(),
        ]);
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureCRow {
    pub alpha: f64,
    pub bound: f64,
    pub r5_max: Option<f64>,
    pub p2_constant: f64,
    pub x1_p0: f64,
    pub p_alpha: Option<f64>,
}

pub fn upper_bounds(order: Order) -> FigureCRow {
    FigureCRow {
        alpha: order.alpha(),
        bound: sharp_bound(order),
        r5_max: surface::r5_max(order),
        p2_constant: surface::p2_face(order),
        x1_p0: surface::x1_p0_value(order),
        p_alpha: p_of_alpha(order).ok(),
    }
}

pub fn figure_c() -> Vec<FigureCRow> {
    figure_alphas(roots::alpha1().root, false)
        .into_iter()
        .map(|a| upper_bounds(Order::new(a).expect("figure alpha")))
        .collect()
}

pub fn figure_c_table(rows: &[FigureCRow]) -> CsvTable {
    let mut t = CsvTable::new([
        "alpha",
        "bound",
        "r5_max",
        "p2_constant",
        "x1_p0",
        "p_alpha",
    ]);
    for r in rows {
        t.push(vec![
            fmt_num(r.alpha),
            fmt_num(r.bound),
            fmt_opt(r.r5_max),
            fmt_num(r.p2_constant),
            fmt_num(r.x1_p0),
            fmt_opt(r.p_alpha),
        ]);
    }
    t
}
