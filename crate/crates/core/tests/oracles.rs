//! Comparisons against independently generated values (mpmath fixtures) and
//! against the exact finite-N layer.

use cginibre::exact::{exact_a11, exact_logz, exact_op, log_eval_poly, lue_gap_probability, ExactContext};
use cginibre::geometry::{ModelParams, Regime};
use cginibre::opasymp::{a11_asymp, p_asymp, GEvaluator};
use cginibre::painleve::{airy, hastings_mcleod};
use num_complex::Complex64;
use serde_json::Value;

fn fixtures() -> Value {
    let raw = include_str!("fixtures/reference_values.json");
    serde_json::from_str(raw).unwrap()
}

fn f(v: &Value, k: &str) -> f64 {
    v[k].as_f64().unwrap()
}

fn u(v: &Value, k: &str) -> usize {
    v[k].as_u64().unwrap() as usize
}

#[test]
fn log_z_matches_gram_quadrature() {
    for row in fixtures()["log_z"].as_array().unwrap() {
        let (n, m, a) = (u(row, "n"), u(row, "m"), f(row, "a"));
        let ctx = ExactContext::new(n, m, a, 256).unwrap();
        let got = exact_logz(&ctx).unwrap().to_f64();
        let want = f(row, "value");
        assert!((got - want).abs() < 1e-10, "N={n} m={m} a={a}: {got} vs {want}");
    }
}

#[test]
fn lue_gap_matches_direct_integration() {
    for row in fixtures()["lue_gap"].as_array().unwrap() {
        let (n, al, t, nw) = (u(row, "n"), u(row, "alpha"), f(row, "t"), u(row, "n_w"));
        let got = lue_gap_probability(n, al, t, nw, 256).unwrap().to_f64();
        let want = f(row, "value");
        assert!((got / want - 1.0).abs() < 1e-10, "n={n} alpha={al} t={t}: {got} vs {want}");
    }
}

#[test]
fn airy_matches_reference() {
    for row in fixtures()["airy"].as_array().unwrap() {
        let x = f(row, "x");
        let (ai, aip) = airy(x);
        assert!((ai / f(row, "ai") - 1.0).abs() < 1e-12, "Ai({x}) = {ai}");
        assert!((aip / f(row, "aip") - 1.0).abs() < 1e-12, "Ai'({x}) = {aip}");
    }
}

#[test]
fn tracy_widom_matches_taylor_reference() {
    let sol = hastings_mcleod(-10.0, 8.0, 1e-12).unwrap();
    for row in fixtures()["tracy_widom"].as_array().unwrap() {
        let t = f(row, "t");
        let q = sol.hm_q(t).unwrap();
        assert!((q / f(row, "hm_q") - 1.0).abs() < 1e-9, "q({t}) = {q}");
        let lf = sol.log_cdf(t).unwrap();
        let want = f(row, "log_F");
        assert!((lf - want).abs() < 1e-10 * want.abs().max(1e-2), "log F({t}) = {lf} vs {want}");
    }
}

fn op_rel_error(a: f64, n: usize, z: Complex64) -> f64 {
    let co = exact_op(&ExactContext::new(n, n, a, 1024).unwrap()).unwrap();
    let lp = log_eval_poly(&co, z, 1024);
    let ge = GEvaluator::new(ModelParams::new(a, 1.0).unwrap()).unwrap();
    ((p_asymp(&ge, z, n as u64).unwrap().log_value - lp).exp() - 1.0).norm()
}

#[test]
fn pre_op_error_is_second_order() {
    for z in [Complex64::new(0.0, 3.0), Complex64::new(-2.5, 1.5)] {
        let e: Vec<f64> = [8, 16, 32].iter().map(|&n| op_rel_error(1.2, n, z)).collect();
        for w in e.windows(2) {
            let r = w[0] / w[1];
            assert!((3.0..=5.0).contains(&r), "z={z}: ratio {r}, errors {e:?}");
        }
    }
}

#[test]
fn post_op_error_decays_geometrically() {
    let z = Complex64::new(3.0, 0.0);
    let e: Vec<f64> = [4, 8, 12, 16].iter().map(|&n| op_rel_error(0.2, n, z)).collect();
    for w in e.windows(2) {
        assert!(w[1] < w[0] / 10.0, "{e:?}");
    }
    assert!(op_rel_error(0.2, 24, z) < 1e-10);
}

#[test]
fn a11_pre_next_order_is_small() {
    let (a, c) = (1.2, 1.0);
    let mut prev = f64::INFINITY;
    for n in [4usize, 8, 16] {
        let exact = exact_a11(&ExactContext::new(n, n, a, 512).unwrap()).unwrap().to_f64();
        let d = (n as f64 * (exact - a11_asymp(n as u64, a, c, Regime::Pre).unwrap())).abs();
        assert!(d < prev && d < 1e-3, "N={n}: {d}");
        prev = d;
    }
}

#[test]
fn a11_post_matches_exact() {
    let (a, c) = (0.2, 1.0);
    for (n, tol) in [(8usize, 1e-5), (16, 1e-8), (24, 1e-11)] {
        let exact = exact_a11(&ExactContext::new(n, n, a, 512).unwrap()).unwrap().to_f64();
        let asym = a11_asymp(n as u64, a, c, Regime::Post).unwrap();
        assert!((exact - asym).abs() < tol, "N={n}: {exact} vs {asym}");
    }
}
