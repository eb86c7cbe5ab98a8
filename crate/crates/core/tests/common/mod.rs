#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use stlmon_core::formula::{predicate_bounds, Expr};
use stlmon_core::{Decls64, Formula64, TimeInterval, Trace64};

/// Static `(r_min, r_max)` of `f` by direct recursion over the tree.
pub fn static_bounds(f: &Formula64, decls: &Decls64) -> (f64, f64) {
    match f {
        Formula64::True => (f64::INFINITY, f64::INFINITY),
        Formula64::Atom(p) => {
            predicate_bounds(p, decls).unwrap_or((f64::NEG_INFINITY, f64::INFINITY))
        }
        Formula64::Not(g) => {
            let (lo, hi) = static_bounds(g, decls);
            (-hi, -lo)
        }
        Formula64::And(a, b) | Formula64::Until(_, a, b) => {
            let (a, b) = (static_bounds(a, decls), static_bounds(b, decls));
            (a.0.min(b.0), a.1.min(b.1))
        }
        Formula64::Or(a, b) => {
            let (a, b) = (static_bounds(a, decls), static_bounds(b, decls));
            (a.0.max(b.0), a.1.max(b.1))
        }
        Formula64::Implies(a, b) => {
            let (a, b) = (static_bounds(a, decls), static_bounds(b, decls));
            ((-a.1).max(b.0), (-a.0).max(b.1))
        }
        Formula64::Always(_, g) | Formula64::Eventually(_, g) => static_bounds(g, decls),
    }
}

/// Sample indices whose time lies in `[mu + l, mu + u]`, checked one by one.
fn instants(n: usize, dt: f64, mu: usize, i: &TimeInterval<f64>, horizon: f64) -> Vec<usize> {
    let t0 = mu as f64 * dt;
    let u = i.upper().unwrap_or(horizon.max(i.lower()));
    (0..n)
        .filter(|&t| {
            let tt = t as f64 * dt;
            tt >= t0 + i.lower() - 1e-9 && tt <= t0 + u + 1e-9
        })
        .collect()
}

/// Robustness by the textbook recursion, no sharing and no sliding windows.
pub fn literal_rho(f: &Formula64, tr: &Trace64, decls: &Decls64, mu: usize, horizon: f64) -> f64 {
    let n = tr.len();
    let dt = tr.dt();
    let rec = |g: &Formula64, t: usize| literal_rho(g, tr, decls, t, horizon);
    match f {
        Formula64::True => f64::INFINITY,
        Formula64::Atom(p) => {
            let row = &tr.samples()[mu];
            p.expr
                .eval(&|name: &str| row[tr.column_index(name).unwrap()])
        }
        Formula64::Not(g) => -rec(g, mu),
        Formula64::And(a, b) => rec(a, mu).min(rec(b, mu)),
        Formula64::Or(a, b) => rec(a, mu).max(rec(b, mu)),
        Formula64::Implies(a, b) => (-rec(a, mu)).max(rec(b, mu)),
        Formula64::Always(i, g) => {
            let ts = instants(n, dt, mu, i, horizon);
            if ts.is_empty() {
                return static_bounds(g, decls).1;
            }
            ts.into_iter()
                .map(|t| rec(g, t))
                .fold(f64::INFINITY, f64::min)
        }
        Formula64::Eventually(i, g) => {
            let ts = instants(n, dt, mu, i, horizon);
            if ts.is_empty() {
                return static_bounds(g, decls).0;
            }
            ts.into_iter()
                .map(|t| rec(g, t))
                .fold(f64::NEG_INFINITY, f64::max)
        }
        Formula64::Until(i, a, b) => {
            let ts = instants(n, dt, mu, i, horizon);
            if ts.is_empty() {
                return static_bounds(f, decls).0;
            }
            let r1max = static_bounds(a, decls).1;
            ts.into_iter()
                .map(|t| {
                    let inner = (mu..t).map(|s| rec(a, s)).fold(f64::INFINITY, f64::min);
                    let inner = if t == mu { r1max } else { inner };
                    rec(b, t).min(inner)
                })
                .fold(f64::NEG_INFINITY, f64::max)
        }
    }
}

/// Qualitative satisfaction with strict atoms `f > 0`. `None` where the recursion meets an
/// empty index set, whose truth value is a convention rather than a fact about the trace.
pub fn boolean_sat(f: &Formula64, tr: &Trace64, mu: usize, horizon: f64) -> Option<bool> {
    let n = tr.len();
    let dt = tr.dt();
    let rec = |g: &Formula64, t: usize| boolean_sat(g, tr, t, horizon);
    let all = |it: &mut dyn Iterator<Item = Option<bool>>| {
        let mut acc = Some(true);
        for v in it {
            match v {
                Some(false) => return Some(false),
                None => acc = None,
                _ => {}
            }
        }
        acc
    };
    let any = |it: &mut dyn Iterator<Item = Option<bool>>| {
        let mut acc = Some(false);
        for v in it {
            match v {
                Some(true) => return Some(true),
                None => acc = None,
                _ => {}
            }
        }
        acc
    };
    match f {
        Formula64::True => Some(true),
        Formula64::Atom(p) => {
            let row = &tr.samples()[mu];
            Some(
                p.expr
                    .eval(&|name: &str| row[tr.column_index(name).unwrap()])
                    > 0.0,
            )
        }
        Formula64::Not(g) => rec(g, mu).map(|b| !b),
        Formula64::And(a, b) => all(&mut [rec(a, mu), rec(b, mu)].into_iter()),
        Formula64::Or(a, b) => any(&mut [rec(a, mu), rec(b, mu)].into_iter()),
        Formula64::Implies(a, b) => any(&mut [rec(a, mu).map(|x| !x), rec(b, mu)].into_iter()),
        Formula64::Always(i, g) => {
            let ts = instants(n, dt, mu, i, horizon);
            if ts.is_empty() {
                return None;
            }
            all(&mut ts.into_iter().map(|t| rec(g, t)))
        }
        Formula64::Eventually(i, g) => {
            let ts = instants(n, dt, mu, i, horizon);
            if ts.is_empty() {
                return None;
            }
            any(&mut ts.into_iter().map(|t| rec(g, t)))
        }
        Formula64::Until(i, a, b) => {
            let ts = instants(n, dt, mu, i, horizon);
            if ts.is_empty() {
                return None;
            }
            any(&mut ts.into_iter().map(|t| {
                let hold = all(&mut (mu..t).map(|s| rec(a, s)));
                all(&mut [rec(b, t), hold].into_iter())
            }))
        }
    }
}

pub fn two_var_decls() -> Decls64 {
    Decls64::new()
        .with("x", -2.0, 2.0)
        .unwrap()
        .with("y", -2.0, 2.0)
        .unwrap()
}

pub fn random_atom(rng: &mut ChaCha8Rng, vars: &[&str]) -> Formula64 {
    let v = Expr::var(vars[rng.gen_range(0..vars.len())]);
    let c = Expr::Const(f64::from(rng.gen_range(-4..=4)) * 0.25);
    let e = match rng.gen_range(0..4) {
        0 => Expr::sub(v, c),
        1 => Expr::sub(c, v),
        2 if vars.len() > 1 => Expr::sub(Expr::var(vars[0]), Expr::var(vars[1])),
        _ => Expr::add(v, c),
    };
    Formula64::atom(e)
}

pub fn random_interval(rng: &mut ChaCha8Rng, dt: f64) -> TimeInterval<f64> {
    let l = rng.gen_range(0..3);
    if rng.gen_bool(0.15) {
        return TimeInterval::unbounded(l as f64 * dt).unwrap();
    }
    let u = l + rng.gen_range(0..4);
    TimeInterval::bounded(l as f64 * dt, u as f64 * dt).unwrap()
}

/// Random formula of depth at most `depth` over {and, or, G, F, U}, optionally with not/implies.
pub fn random_formula(
    rng: &mut ChaCha8Rng,
    depth: usize,
    vars: &[&str],
    dt: f64,
    full: bool,
) -> Formula64 {
    if depth <= 1 || rng.gen_bool(0.2) {
        return random_atom(rng, vars);
    }
    let ops = if full { 7 } else { 5 };
    let sub = |r: &mut ChaCha8Rng| random_formula(r, depth - 1, vars, dt, full);
    match rng.gen_range(0..ops) {
        0 => Formula64::and(sub(rng), sub(rng)),
        1 => Formula64::or(sub(rng), sub(rng)),
        2 => {
            let i = random_interval(rng, dt);
            Formula64::always(i, sub(rng))
        }
        3 => {
            let i = random_interval(rng, dt);
            Formula64::eventually(i, sub(rng))
        }
        4 => {
            let i = random_interval(rng, dt);
            Formula64::until(i, sub(rng), sub(rng))
        }
        5 => Formula64::not(sub(rng)),
        _ => Formula64::implies(sub(rng), sub(rng)),
    }
}

pub fn random_trace(rng: &mut ChaCha8Rng, n: usize, names: &[&str], dt: f64) -> Trace64 {
    let samples = (0..n)
        .map(|_| names.iter().map(|_| rng.gen_range(-2.0..=2.0)).collect())
        .collect();
    Trace64::new(dt, names.iter().map(|s| s.to_string()).collect(), samples).unwrap()
}

/// Robustness values agree when equal, both infinite with the same sign, or within `tol`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol
}

pub const SPEED_SPEC: &str = "var v in [0, 20]\nvar a in [-5, 5]\nspec G[0,100] (v > 5 || a > 0)";

/// Speed/acceleration trace: cruising, slowing down into a violation at t = 20, recovering.
pub fn speed_trace() -> Trace64 {
    let mut rows = Vec::new();
    for t in 0..=20 {
        let v = if t <= 10 {
            15.0
        } else {
            15.0 - f64::from(11 * (t - 10)) / 10.0
        };
        let a = if t <= 10 { 0.0 } else { -1.0 };
        rows.push(vec![v, a]);
    }
    for (v, a) in [(5.0, 0.5), (6.0, 0.5), (7.0, 0.5), (8.5, 0.5), (10.0, -2.0)] {
        rows.push(vec![v, a]);
    }
    Trace64::new(1.0, vec!["v".into(), "a".into()], rows).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}
