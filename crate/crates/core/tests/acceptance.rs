//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::process::ExitCode;
use std::time::Instant;

use hankel_lab::caratheodory::CaratheodoryParams;
use hankel_lab::optimizer::{global_max, interior_critical_scan, probe_max, OptimizerConfig};
use hankel_lab::surface::{self, CuboidPoint};
use hankel_lab::{cli, roots, verify, Order};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ord(a: f64) -> Order {
    Order::new(a).expect("alpha in [0, 1)")
}

/// Independent bound oracle.
fn bound(a: f64) -> f64 {
    4.0 * (1.0 - a) * (1.0 - a) / 9.0
}

/// Independent bisection oracle for roots of a polynomial on a bracket.
fn oracle_root(coeffs: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let f = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
    assert!(f(lo) * f(hi) < 0.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn theorem_grid() -> Vec<f64> {
    let a0 = oracle_root(&[1.0, -4.0, 6.0, -16.0, 4.0], 0.28, 0.29);
    (0..=9)
        .map(|k| k as f64 * 0.04)
        .filter(|a| (a - a0).abs() > 0.02)
        .collect()
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        std::iter::once("hankel-lab").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).expect("utf-8 output"))
}

fn csv_value(csv: &str, key: &str) -> Option<String> {
    csv.lines()
        .find_map(|l| l.strip_prefix(&format!("{key},")).map(str::to_string))
}

fn c1_theorem_bound() -> Outcome {
    let start = Instant::now();
    let cfg = OptimizerConfig::default();
    let mut worst: f64 = 0.0;
    let grid = theorem_grid();
    for &a in &grid {
        let r = global_max(ord(a), &cfg).map_err(|e| e.to_string())?;
        let err = (r.value - bound(a)).abs();
        worst = worst.max(err);
        if err > 1e-8 {
            return Err(format!("alpha={a}: max {} vs bound {}", r.value, bound(a)));
        }
        if r.argmax
            != (CuboidPoint {
                p: 0.0,
                x: 0.0,
                y: 1.0,
            })
        {
            return Err(format!("alpha={a}: argmax {:?}", r.argmax));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 60.0 {
        return Err(format!("runtime {secs:.1}s"));
    }
    Ok(format!(
        "{} alphas, worst |max - bound| = {worst:.2e}, argmax (0,0,1), {secs:.2}s",
        grid.len()
    ))
}

fn c2_alpha_zero() -> Outcome {
    let r = global_max(ord(0.0), &OptimizerConfig::default()).map_err(|e| e.to_string())?;
    let err = (r.value - 4.0 / 9.0).abs();
    if err <= 1e-10 {
        Ok(format!(
            "global max at alpha=0 is {} (err {err:.1e})",
            r.value
        ))
    } else {
        Err(format!(
            "global max {} differs from 4/9 by {err:e}",
            r.value
        ))
    }
}

fn c3_nephroid() -> Outcome {
    let (code, out) = run_cli(&["nephroid"]);
    if code != 0 {
        return Err(format!("exit {code}"));
    }
    let alpha: f64 = csv_value(&out, "alpha")
        .ok_or("no alpha row")?
        .parse()
        .map_err(|_| "alpha")?;
    let oracle_alpha = 1.0 - 2.0 * 2f64.sqrt() / 3.0;
    let n = verify::nephroid();
    let bound_err = (n.bound - 32.0 / 81.0).abs();
    if (alpha - 0.057191).abs() > 1e-6 || (alpha - oracle_alpha).abs() > 1e-12 {
        return Err(format!("alpha {alpha}"));
    }
    if bound_err > 1e-12 || csv_value(&out, "in_theorem_range").as_deref() != Some("true") {
        return Err(format!("bound {} (err {bound_err:e})", n.bound));
    }
    Ok(format!(
        "alpha = {alpha}, bound = {} (32/81 err {bound_err:.1e})",
        n.bound
    ))
}

fn c4_roots() -> Outcome {
    let a1 = roots::alpha1();
    let b0 = roots::beta0();
    let a0 = roots::alpha0();
    let a2 = roots::alpha2();
    let beta_formula = (10.0 - (100.0f64 - 96.0).sqrt()) / 16.0;
    let a0_oracle = oracle_root(&[1.0, -4.0, 6.0, -16.0, 4.0], 0.28, 0.29);
    let a2_oracle = oracle_root(&[153.0, -1437.0, 3118.0, -2484.0, 648.0], 0.14, 0.15);
    let checks = [
        (
            (a1.root - 0.370803).abs() <= 1e-4,
            format!("alpha1 = {}", a1.root),
        ),
        (
            (b0.root - 0.5).abs() <= 1e-14 && (beta_formula - 0.5).abs() <= 1e-15,
            format!("beta0 = {}", b0.root),
        ),
        (
            (0.28..=0.29).contains(&a0.root)
                && a0.residual.abs() < 1e-12
                && (a0.root - a0_oracle).abs() < 1e-13,
            format!("alpha0 = {} (residual {:.1e})", a0.root, a0.residual),
        ),
        (
            (0.14..=0.15).contains(&a2.root)
                && a2.residual.abs() < 1e-9
                && (a2.root - a2_oracle).abs() < 1e-13,
            format!("alpha2 = {} (residual {:.1e})", a2.root, a2.residual),
        ),
    ];
    let detail = checks
        .iter()
        .map(|c| c.1.clone())
        .collect::<Vec<_>>()
        .join(", ");
    if checks.iter().all(|c| c.0) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c5_sharpness_witness() -> Outcome {
    let mut alphas = theorem_grid();
    alphas.push(0.5);
    let mut worst_excess = f64::NEG_INFINITY;
    for &a in &alphas {
        let none = probe_max(ord(a), &OptimizerConfig::default()).map_err(|e| e.to_string())?;
        if (none.value - bound(a)).abs() > 4.0 * f64::EPSILON * bound(a)
            || none.witness != CaratheodoryParams::extremal()
        {
            return Err(format!(
                "alpha={a}: witness value {} vs {}",
                none.value,
                bound(a)
            ));
        }
        let cfg = OptimizerConfig {
            sample_count: 1_000_000,
            seed: 1,
            ..Default::default()
        };
        let r = probe_max(ord(a), &cfg).map_err(|e| e.to_string())?;
        let excess = r.value - bound(a);
        worst_excess = worst_excess.max(excess);
        if excess > 1e-12 {
            return Err(format!(
                "alpha={a}: probe {} exceeds bound by {excess:e}",
                r.value
            ));
        }
    }
    Ok(format!(
        "extremal witness attains the bound at {} alphas; 1e6 samples each, worst excess {worst_excess:.2e}",
        alphas.len()
    ))
}

fn c6_crosscheck() -> Outcome {
    let (code, out) = run_cli(&["crosscheck", "--samples", "100000", "--seed", "7"]);
    let mut worst: f64 = 0.0;
    for line in out.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        worst = worst.max(f[2].parse::<f64>().map_err(|_| format!("bad row {line}"))?);
    }
    if code == 0 && worst < 1e-10 {
        Ok(format!(
            "exit 0, worst relative identity residual {worst:.2e}"
        ))
    } else {
        Err(format!("exit {code}, worst residual {worst:e}"))
    }
}

fn c7_face_dominance() -> Outcome {
    let mut margin = f64::INFINITY;
    for a in theorem_grid() {
        let b = 1.0 - a;
        let others = [
            b * b / (3.0 * (3.0 * b).sqrt()),
            a * b * b * (1.0 - 2.0 * a).powi(2) * (3.0 - 2.0 * a) / 18.0,
            a * b * b / 2.0,
            surface::p_of_alpha(ord(a)).map_err(|e| e.to_string())?,
        ];
        for v in others {
            let m = bound(a) - v;
            margin = margin.min(m);
            if m.is_nan() || m < 1e-6 {
                return Err(format!("alpha={a}: margin {m:e}"));
            }
        }
    }
    Ok(format!("smallest margin {margin:.4e}"))
}

fn c8_p_alpha() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut at_zero = (0.0, 0.0);
    for a in theorem_grid() {
        // s3 independently from its printed polynomial in p.
        let b = 1.0 - a;
        let n = 1.0 - 4.0 * a + 6.0 * a * a - 16.0 * a.powi(3) + 4.0 * a.powi(4);
        let s3 = |p: f64| {
            let p2 = p * p;
            b * b / 576.0
                * (288.0 * a + 16.0 * p2 * (11.0 - 33.0 * a + 9.0 * a * a)
                    - 8.0 * p2 * p2 * (5.0 - 13.0 * a + 5.0 * a * a + 3.0 * a.powi(3))
                    - p2 * p2 * p2 * n)
        };
        let dense = (0..=200_000)
            .map(|k| s3(k as f64 * 1e-5))
            .fold(f64::NEG_INFINITY, f64::max);
        let closed = surface::p_of_alpha(ord(a)).map_err(|e| e.to_string())?;
        let err = (closed - dense).abs();
        worst = worst.max(err);
        if err >= 1e-8 {
            return Err(format!("alpha={a}: closed {closed} vs dense {dense}"));
        }
        if a == 0.0 {
            at_zero = (closed, dense);
        }
    }
    if (at_zero.0 - 0.319594).abs() > 1e-5 || (at_zero.1 - 0.319594).abs() > 1e-5 {
        return Err(format!("alpha=0 values {at_zero:?}"));
    }
    Ok(format!(
        "worst |P - dense max| = {worst:.2e}; alpha=0: {:.6}",
        at_zero.0
    ))
}

fn c9_no_interior_critical() -> Outcome {
    let cfg = OptimizerConfig {
        grid_steps: (201, 101, 2),
        ..Default::default()
    };
    let mut detail = Vec::new();
    for a in [0.0, 0.1, 0.2, 0.3] {
        let r = interior_critical_scan(ord(a), &cfg).map_err(|e| e.to_string())?;
        if !r.entries.is_empty() {
            return Err(format!(
                "alpha={a}: {} critical points, first {:?}",
                r.entries.len(),
                r.entries[0]
            ));
        }
        detail.push(format!(
            "alpha={a}: y0 inside at {}/{}",
            r.y0_inside, r.points
        ));
    }
    Ok(format!(
        "no interior critical points ({})",
        detail.join("; ")
    ))
}

fn c10_half_observation() -> Outcome {
    let cfg = OptimizerConfig {
        sample_count: 1_000_000,
        seed: 2,
        ..Default::default()
    };
    let r = probe_max(ord(0.5), &cfg).map_err(|e| e.to_string())?;
    if r.value <= 1.0 / 9.0 + 1e-12 {
        Ok(format!(
            "probe max at alpha=1/2 over 1e6 samples = {} (1/9 = {})",
            r.value,
            1.0 / 9.0
        ))
    } else {
        Err(format!("probe max {} exceeds 1/9", r.value))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("sharp bound on the alpha grid", c1_theorem_bound),
        ("alpha = 0 gives 4/9", c2_alpha_zero),
        ("nephroid order and 32/81", c3_nephroid),
        ("root values and certificates", c4_roots),
        ("sharpness witness and probe", c5_sharpness_witness),
        ("decomposition cross-check", c6_crosscheck),
        ("face and edge dominance", c7_face_dominance),
        ("closed form P(alpha) vs dense scan", c8_p_alpha),
        ("no interior critical points", c9_no_interior_critical),
        ("alpha = 1/2 observation", c10_half_observation),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d}", k + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
