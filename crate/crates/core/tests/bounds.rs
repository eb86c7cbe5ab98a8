mod common;

use common::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use stlmon_core::formula::{predicate_bounds, Expr};
use stlmon_core::{Decls64, Predicate};

fn decls() -> Decls64 {
    Decls64::new()
        .with("x", -3.0, 2.0)
        .unwrap()
        .with("y", -1.0, 4.0)
        .unwrap()
        .with("z", 0.5, 1.5)
        .unwrap()
}

fn random_expr(rng: &mut ChaCha8Rng, depth: usize) -> Expr<f64> {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..4) {
            0 => Expr::Const(f64::from(rng.gen_range(-3..=3))),
            1 => Expr::var("x"),
            2 => Expr::var("y"),
            _ => Expr::var("z"),
        };
    }
    let a = random_expr(rng, depth - 1);
    match rng.gen_range(0..5) {
        0 => Expr::add(a, random_expr(rng, depth - 1)),
        1 => Expr::sub(a, random_expr(rng, depth - 1)),
        2 => Expr::mul(a, random_expr(rng, depth - 1)),
        3 => Expr::neg(a),
        // z stays away from zero, so this division is always defined
        _ => Expr::div(a, Expr::var("z")),
    }
}

#[test]
fn bounds_enclose_sampled_values() {
    let d = decls();
    let mut rng = rng(29);
    for _ in 0..200 {
        let e = random_expr(&mut rng, 3);
        let (lo, hi) = predicate_bounds(&Predicate::new(e.clone()), &d).unwrap();
        for _ in 0..50 {
            let (x, y, z) = (
                rng.gen_range(-3.0..=2.0),
                rng.gen_range(-1.0..=4.0),
                rng.gen_range(0.5..=1.5),
            );
            let v = e.eval(&|n: &str| match n {
                "x" => x,
                "y" => y,
                _ => z,
            });
            assert!(
                v >= lo - 1e-9 && v <= hi + 1e-9,
                "{e}: {v} outside [{lo}, {hi}]"
            );
        }
    }
}

#[test]
fn product_bounds_are_tight_on_a_mesh() {
    let d = decls();
    let e = Expr::mul(Expr::var("x"), Expr::var("y"));
    let (lo, hi) = predicate_bounds(&Predicate::new(e.clone()), &d).unwrap();
    let (mut mn, mut mx) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..100 {
        for j in 0..100 {
            let x = -3.0 + 5.0 * f64::from(i) / 99.0;
            let y = -1.0 + 5.0 * f64::from(j) / 99.0;
            let v = e.eval(&|n: &str| if n == "x" { x } else { y });
            mn = mn.min(v);
            mx = mx.max(v);
        }
    }
    assert!(lo <= mn && mx <= hi);
    assert!((lo - mn).abs() < 1e-12 && (hi - mx).abs() < 1e-12);
    assert_eq!((lo, hi), (-12.0, 8.0));
}
