mod common;

use common::*;
use rand::Rng;
use stlmon_core::formula::to_nnf;
use stlmon_core::semantics::offline_robustness;

#[test]
fn optimized_offline_matches_literal_recursion() {
    let mut rng = rng(7);
    let decls = two_var_decls();
    for case in 0..1000 {
        let dt = if case % 4 == 0 { 0.5 } else { 1.0 };
        let f = random_formula(&mut rng, 3, &["x", "y"], dt, false);
        let n = rng.gen_range(1..=12);
        let tr = random_trace(&mut rng, n, &["x", "y"], dt);
        let mu = rng.gen_range(0..n);
        let horizon = tr.duration();
        let want = literal_rho(&f, &tr, &decls, mu, horizon);
        let got = offline_robustness(&tr, &f, &decls, mu as f64 * dt, None).unwrap();
        assert!(
            close(got, want, 1e-9),
            "case {case}: {f} at {mu}: {got} vs {want}"
        );
    }
}

#[test]
fn nnf_rewrite_preserves_robustness() {
    let mut rng = rng(11);
    let decls = two_var_decls();
    for case in 0..1000 {
        let f = random_formula(&mut rng, 3, &["x", "y"], 1.0, true);
        let n = rng.gen_range(1..=12);
        let tr = random_trace(&mut rng, n, &["x", "y"], 1.0);
        let want = literal_rho(&f, &tr, &decls, 0, tr.duration());
        match to_nnf(&f) {
            Ok(g) => {
                let got = offline_robustness(&tr, &g, &decls, 0.0, None).unwrap();
                assert!(
                    close(got, want, 1e-9),
                    "case {case}: {f} vs {g}: {got} vs {want}"
                );
            }
            // negated until has no NNF in this fragment
            Err(stlmon_core::Error::NnfUnsupported(_)) => {}
            Err(e) => panic!("case {case}: {e}"),
        }
    }
}

#[test]
fn robustness_sign_is_sound() {
    let mut rng = rng(13);
    let decls = two_var_decls();
    let mut decided = 0;
    for _ in 0..1000 {
        let f = random_formula(&mut rng, 3, &["x", "y"], 1.0, false);
        let n = rng.gen_range(1..=12);
        let tr = random_trace(&mut rng, n, &["x", "y"], 1.0);
        let rho = offline_robustness(&tr, &f, &decls, 0.0, None).unwrap();
        let Some(sat) = boolean_sat(&f, &tr, 0, tr.duration()) else {
            continue;
        };
        decided += 1;
        if rho > 0.0 {
            assert!(sat, "{f}: rho {rho} but violated");
        }
        if rho < 0.0 {
            assert!(!sat, "{f}: rho {rho} but satisfied");
        }
    }
    assert!(decided > 300);
}

#[test]
fn off_grid_instant_is_rejected() {
    let tr = speed_trace();
    let spec = stlmon_core::parse_spec::<f64>(SPEED_SPEC).unwrap();
    let err = offline_robustness(&tr, &spec.formula, &spec.decls, 0.5, None).unwrap_err();
    assert!(matches!(err, stlmon_core::Error::GridMismatch(_)));
    let err = offline_robustness(&tr, &spec.formula, &spec.decls, 40.0, None).unwrap_err();
    assert!(matches!(err, stlmon_core::Error::GridMismatch(_)));
}

#[test]
fn f32_and_f64_agree() {
    let spec64 = stlmon_core::parse_spec::<f64>(SPEED_SPEC).unwrap();
    let spec32 = stlmon_core::parse_spec::<f32>(SPEED_SPEC).unwrap();
    let tr = speed_trace();
    let tr32 = stlmon_core::Trace32::new(
        1.0,
        tr.names().to_vec(),
        tr.samples()
            .iter()
            .map(|r| r.iter().map(|&x| x as f32).collect())
            .collect(),
    )
    .unwrap();
    let a = offline_robustness(&tr, &spec64.formula, &spec64.decls, 0.0, None).unwrap();
    let b = offline_robustness(&tr32, &spec32.formula, &spec32.decls, 0.0, None).unwrap();
    assert!((a - f64::from(b)).abs() < 1e-5);
}
