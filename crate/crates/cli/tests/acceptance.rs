//! Acceptance checks. Run with `cargo test --test acceptance`; prints one line per criterion.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use stlmon_core::formula::to_nnf;
use stlmon_core::monitor::{MonitorConfig, StreamMonitor};
use stlmon_core::semantics::{
    offline_robustness, online_robust_interval, smooth_max, smooth_min, violation_causation,
};
use stlmon_core::{parse_spec, CausationConfig, Decls64, Trace64};

const GOLDEN_TOL: f64 = 1e-12;
const ORACLE_TOL: f64 = 1e-9;
const CONTAIN_TOL: f64 = 1e-9;
const SMOOTH_SLACK: f64 = 1e-9;
const MIN_STEPS_PER_SEC: f64 = 1e4;

type Check = fn() -> Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn speed_fixture() -> (stlmon_core::Formula64, Decls64, Trace64) {
    let spec = parse_spec::<f64>(SPEED_SPEC).unwrap();
    (to_nnf(&spec.formula).unwrap(), spec.decls, speed_trace())
}

fn golden_causation() -> Result<String, String> {
    let (f, decls, tr) = speed_fixture();
    let r = violation_causation(
        &tr.prefix(25).unwrap(),
        &f,
        &decls,
        0.0,
        &CausationConfig::exact(100.0),
    )
    .map_err(|e| e.to_string())?;
    ensure((r.value - 5.0).abs() <= GOLDEN_TOL, || {
        format!("causation {} != 5", r.value)
    })?;
    Ok(format!(
        "causation(b=25, mu=0) = {} (tol {GOLDEN_TOL:e})",
        r.value
    ))
}

fn masking_contrast() -> Result<String, String> {
    let (f, decls, tr) = speed_fixture();
    let cfg = CausationConfig::exact(100.0);
    let mut up = Vec::new();
    let mut cau = Vec::new();
    for b in 20..=25 {
        let p = tr.prefix(b).unwrap();
        up.push(
            online_robust_interval(&p, &f, &decls, 0.0, Some(100.0))
                .unwrap()
                .upper,
        );
        cau.push(
            violation_causation(&p, &f, &decls, 0.0, &cfg)
                .unwrap()
                .value,
        );
    }
    ensure(up.windows(2).all(|w| w[1] <= w[0]), || {
        format!("upper bound not non-increasing: {up:?}")
    })?;
    ensure(cau[1..].windows(2).all(|w| w[1] > w[0]), || {
        format!("causation not increasing: {cau:?}")
    })?;
    Ok(format!("upper {up:?}, causation {cau:?}"))
}

fn oracle_equivalence() -> Result<String, String> {
    let mut rng = rng(2024);
    let decls = two_var_decls();
    let mut worst = 0.0f64;
    for case in 0..1000 {
        let f = random_formula(&mut rng, 3, &["x", "y"], 1.0, false);
        let n = rng.gen_range(1..=12);
        let tr = random_trace(&mut rng, n, &["x", "y"], 1.0);
        let want = literal_rho(&f, &tr, &decls, 0, tr.duration());
        let got = offline_robustness(&tr, &f, &decls, 0.0, None).map_err(|e| e.to_string())?;
        ensure(close(got, want, ORACLE_TOL), || {
            format!("case {case}: {f}: {got} vs {want}")
        })?;
        if want.is_finite() {
            worst = worst.max((got - want).abs());
        }
    }
    Ok(format!(
        "1000 cases, max |diff| = {worst:e} (tol {ORACLE_TOL:e})"
    ))
}

fn interval_containment() -> Result<String, String> {
    let grid = [-1.0, 0.0, 1.0];
    let decls = Decls64::new().with("x", -1.0, 1.0).unwrap();
    let mut rng = rng(99);
    let mut checked = 0usize;
    for case in 0..100 {
        let f = random_formula(&mut rng, 3, &["x"], 1.0, false);
        let rows: Vec<Vec<f64>> = (0..6).map(|_| vec![grid[rng.gen_range(0..3)]]).collect();
        let base = Trace64::new(1.0, vec!["x".into()], rows.clone()).unwrap();
        let mut prev: Option<stlmon_core::Interval64> = None;
        for b in 0..6 {
            let ri = online_robust_interval(&base.prefix(b).unwrap(), &f, &decls, 0.0, None)
                .map_err(|e| e.to_string())?;
            let free = 5 - b;
            for code in 0..3usize.pow(free as u32) {
                let mut c = code;
                let mut r = rows[..=b].to_vec();
                for _ in 0..free {
                    r.push(vec![grid[c % 3]]);
                    c /= 3;
                }
                let tr = Trace64::new(1.0, vec!["x".into()], r).unwrap();
                let rho = offline_robustness(&tr, &f, &decls, 0.0, None).unwrap();
                ensure(ri.contains(rho, CONTAIN_TOL), || {
                    format!("case {case} b={b}: {rho} outside {ri}")
                })?;
                checked += 1;
            }
            if let Some(p) = prev {
                ensure(p.lower <= ri.lower && ri.upper <= p.upper, || {
                    format!("case {case}: {ri} escapes {p}")
                })?;
            }
            prev = Some(ri);
        }
        ensure(prev.unwrap().width() == 0.0, || {
            format!("case {case}: no collapse at the horizon")
        })?;
    }
    Ok(format!(
        "100 formulas, {checked} completions contained, nested, collapsed"
    ))
}

fn smoothing_bounds() -> Result<String, String> {
    let mut rng = rng(7);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=8);
        let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(-100.0..=100.0)).collect();
        let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
        for beta in [1.0, 10.0, 100.0] {
            let gap = (n as f64).ln() / beta;
            let hi = smooth_max(&xs, beta).unwrap();
            let lo = smooth_min(&xs, beta).unwrap();
            ensure(
                max - SMOOTH_SLACK <= hi && hi <= max + gap + SMOOTH_SLACK,
                || format!("smooth_max {xs:?} beta {beta}"),
            )?;
            ensure(
                min - gap - SMOOTH_SLACK <= lo && lo <= min + SMOOTH_SLACK,
                || format!("smooth_min {xs:?} beta {beta}"),
            )?;
        }
    }
    Ok("10^4 vectors x 3 temperatures within ln(n)/beta".into())
}

fn window_constants() -> Result<String, String> {
    let specs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs");
    let mut seen = Vec::new();
    for (file, want) in [("cartpole.stl", 11), ("hopper.stl", 16)] {
        let out = Command::new(env!("CARGO_BIN_EXE_stlmon"))
            .args(["window-info", "--dt", "1", "--spec"])
            .arg(specs.join(file))
            .output()
            .map_err(|e| e.to_string())?;
        let text = String::from_utf8_lossy(&out.stdout);
        let k: usize = text
            .lines()
            .find_map(|l| l.strip_prefix("k "))
            .and_then(|k| k.trim().parse().ok())
            .ok_or_else(|| format!("{file}: unexpected output {text:?}"))?;
        ensure(k == want, || format!("{file}: k = {k}, expected {want}"))?;
        seen.push(format!("{file} k={k}"));
    }
    Ok(seen.join(", "))
}

fn throughput() -> Result<String, String> {
    let specs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs");
    let src = std::fs::read_to_string(specs.join("hopper.stl")).unwrap();
    let spec = parse_spec::<f64>(&src).unwrap();
    let f = to_nnf(&spec.formula).unwrap();
    let names: Vec<String> = spec.decls.names().to_vec();
    let mut rng = rng(5);
    let steps = 5000usize;
    let rows: Vec<Vec<f64>> = (0..steps)
        .map(|_| {
            vec![
                rng.gen_range(0.5..1.5),
                rng.gen_range(-1.2..1.2),
                rng.gen_range(-1.0..1.0),
            ]
        })
        .collect();
    let mut cfg = MonitorConfig::new(1.0, 1000.0);
    cfg.smooth = true;
    let episodes = steps / 1000;
    let start = Instant::now();
    for e in 0..episodes {
        let mut m = StreamMonitor::new(&f, &spec.decls, &names, cfg).map_err(|e| e.to_string())?;
        ensure(m.k() == 16, || format!("k = {}", m.k()))?;
        for row in &rows[e * 1000..(e + 1) * 1000] {
            m.push(row.clone()).map_err(|e| e.to_string())?;
        }
    }
    let rate = steps as f64 / start.elapsed().as_secs_f64().max(1e-9);
    ensure(rate >= MIN_STEPS_PER_SEC, || {
        format!("{rate:.0} steps/s below {MIN_STEPS_PER_SEC:.0}")
    })?;
    Ok(format!(
        "{rate:.0} steps/s over {steps} steps, k=16 (floor {MIN_STEPS_PER_SEC:.0})"
    ))
}

fn main() -> ExitCode {
    let checks: [(&str, Check, Duration); 7] = [
        ("golden-causation", golden_causation, Duration::from_secs(1)),
        ("masking-contrast", masking_contrast, Duration::from_secs(1)),
        (
            "oracle-equivalence",
            oracle_equivalence,
            Duration::from_secs(30),
        ),
        (
            "interval-containment",
            interval_containment,
            Duration::from_secs(60),
        ),
        (
            "smoothing-bounds",
            smoothing_bounds,
            Duration::from_secs(10),
        ),
        (
            "window-constants",
            window_constants,
            Duration::from_secs(30),
        ),
        ("throughput", throughput, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, check, budget) in checks {
        let start = Instant::now();
        let res = check();
        let took = start.elapsed();
        let res = res.and_then(|m| {
            if took <= budget {
                Ok(m)
            } else {
                Err(format!("{m}; took {took:?}, budget {budget:?}"))
            }
        });
        match res {
            Ok(m) => println!("PASS {name:<22} {m} [{:.3}s]", took.as_secs_f64()),
            Err(m) => {
                failed += 1;
                println!("FAIL {name:<22} {m} [{:.3}s]", took.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
