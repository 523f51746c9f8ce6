//! End-to-end acceptance checks, run without the libtest harness so each
//! check always prints its PASS/FAIL line. Exits nonzero if any check fails.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::{binomial, poly, window_integral_oracle, SUITE};
use mahlerk::asymptotics::{offwindow_envelope, limit_formula};
use mahlerk::laurent::{classify_circle_roots, LaurentPolynomial};
use mahlerk::measure::{jensen_measure, log_power_window_integral, mk_bruteforce, mk_quadrature, QuadratureConfig};
use mahlerk::{Complex64, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<String, String>;
/// (number, name, check, wall-clock budget in seconds)
type Criterion = (u32, &'static str, fn() -> Check, u64);

fn cli_json(args: &[&str]) -> Value {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = mahlerk::cli::run(std::iter::once("mahlerk").chain(args.iter().copied()), &mut out, &mut err);
    assert_eq!(code, 0, "{args:?}: {}", String::from_utf8_lossy(&err));
    serde_json::from_slice(&out).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn final_scaled(report: &Value) -> f64 {
    f(&report["payload"]["rows"].as_array().unwrap().last().unwrap()["scaled"])
}

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn quad(p: &LaurentPolynomial, k: usize) -> f64 {
    mk_quadrature(p, k, &QuadratureConfig::default()).unwrap().value
}

fn c1_z_plus_one() -> Check {
    let report = cli_json(&["converge", "z+1", "--kmax", "30"]);
    let s = final_scaled(&report);
    ensure((s - 1.0 / PI).abs() <= 1e-3, format!("|m_30|/30! = {s:.12}, 1/π = {:.12}", 1.0 / PI))
}

fn c2_family() -> Check {
    for n in 1..=8 {
        let l = limit_formula(&poly(&format!("z^{n}-1")), 1e-9).map_err(|e| e.to_string())?;
        let v = l.value.ok_or(format!("z^{n}-1: infinite limit"))?;
        if (v - 1.0 / PI).abs() > 1e-10 {
            return Err(format!("limit(z^{n}-1) = {v}"));
        }
    }
    let s = final_scaled(&cli_json(&["converge", "z^2-1", "--kmax", "30"]));
    ensure(
        (s - 1.0 / PI).abs() <= 1e-3,
        format!("limit(z^n-1) = 1/π for n ≤ 8; z²-1 at k=30: {s:.12}"),
    )
}

fn c3_window_integral() -> Check {
    let v40 = log_power_window_integral(3.0, 0.1, 40).map_err(|e| e.to_string())?;
    if (v40 - 2.0 / 3.0).abs() > 1e-6 {
        return Err(format!("value(40) = {v40}"));
    }
    let mut worst: f64 = 0.0;
    for k in 1..=20 {
        let closed = log_power_window_integral(3.0, 0.1, k).map_err(|e| e.to_string())?;
        let numeric = window_integral_oracle(3.0, 0.1, k);
        worst = worst.max((closed - numeric).abs());
    }
    ensure(worst <= 1e-9, format!("value(40) = {v40:.12}; worst closed-form gap k ≤ 20: {worst:.2e}"))
}

fn c4_decay() -> Check {
    let p = poly("2*z+1");
    let series = mahlerk::measure::mk_quadrature_series(&p, 30, &QuadratureConfig::default()).unwrap();
    for r in &series[2..] {
        let env = offwindow_envelope(1.0, 3.0, 1.0, r.k).unwrap();
        if r.scaled > env + 1e-10 {
            return Err(format!("k = {}: scaled {} > envelope {}", r.k, r.scaled, env));
        }
    }
    let s30 = series[30].scaled;
    ensure(s30 < 1e-8, format!("scaled ≤ envelope for k = 2..30; scaled(30) = {s30:.3e}"))
}

fn c5_repeated_root() -> Check {
    let report = cli_json(&["converge", "(z-1)^2", "--kmax", "25"]);
    let rows = report["payload"]["rows"].as_array().unwrap();
    let first_big = rows.iter().find(|r| f(&r["scaled"]) > 10.0).map(|r| r["k"].as_u64().unwrap());
    let verdict = report["payload"]["verdict"].as_str().unwrap();
    let l = limit_formula(&poly("(z-1)^2"), 1e-9).unwrap();
    let witness = l.divergence_witness.map(|w| w.angle);
    ensure(
        first_big.is_some() && verdict == "diverging" && !l.finite && witness == Some(0.0),
        format!("scaled > 10 first at k = {first_big:?}; verdict {verdict}; witness t = {witness:?}"),
    )
}

fn c6_jensen() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    while checked < 20 {
        let degree = rng.random_range(1..=6);
        let coeffs: Vec<Complex64> = (0..=degree)
            .map(|_| Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)))
            .collect();
        let p = LaurentPolynomial::from_dense(0, coeffs);
        match classify_circle_roots(&p, 1e-9) {
            Err(Error::AmbiguousClassification { .. }) => continue,
            Err(e) => return Err(e.to_string()),
            Ok(_) => {}
        }
        let q = quad(&p, 1);
        let j = jensen_measure(&p).unwrap();
        worst = worst.max((q - j).abs());
        checked += 1;
    }
    ensure(worst <= 1e-7, format!("20 random polynomials, worst |quad - Jensen| = {worst:.2e}"))
}

fn c7_oracle() -> Check {
    let mut worst: f64 = 0.0;
    for text in SUITE {
        let p = poly(text);
        for k in 1..=8 {
            let b = mk_bruteforce(&p, k, 10).map_err(|e| e.to_string())?.value;
            let diff = (quad(&p, k) - b).abs();
            if diff > worst {
                worst = diff;
            }
        }
    }
    ensure(worst <= 1e-7, format!("4 polynomials × k = 1..8, worst |quad - bruteforce| = {worst:.2e}"))
}

fn c8_known_value() -> Check {
    let p = poly("z+1");
    let exact = PI * PI / 12.0;
    let q = quad(&p, 2);
    let b = mk_bruteforce(&p, 2, 10).unwrap().value;
    ensure(
        (q - exact).abs() <= 1e-6 && (b - exact).abs() <= 1e-6,
        format!("m_2(z+1): quadrature {q:.10}, bruteforce {b:.10}, π²/12 = {exact:.10}"),
    )
}

fn c9_properties() -> Check {
    let w = Complex64::from_polar(1.0, 2.0 * PI * 0.137);
    let mut worst = [0.0f64; 4];
    for text in SUITE {
        let p = poly(text);
        let rotated = p.rotate_argument(w);
        let shifted = p.shift(3);
        let reciprocal = p.reciprocal();
        let base: Vec<f64> = (0..=6).map(|k| quad(&p, k)).collect();
        for (k, &b) in base.iter().enumerate().skip(1) {
            worst[0] = worst[0].max((quad(&rotated, k) - b).abs());
            worst[1] = worst[1].max((quad(&shifted, k) - b).abs());
            worst[2] = worst[2].max((quad(&reciprocal, k) - b).abs());
        }
        for c in [Complex64::new(2.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(0.0, 3.0)] {
            let scaled = p.scale(c);
            let lc = c.norm().ln();
            for k in 1..=6 {
                let expected: f64 = (0..=k).map(|j| binomial(k, j) * lc.powi(j as i32) * base[k - j]).sum();
                worst[3] = worst[3].max((quad(&scaled, k) - expected).abs());
            }
        }
    }
    let ok = worst[0] <= 1e-7 && worst[1] <= 1e-9 && worst[2] <= 1e-7 && worst[3] <= 1e-6;
    ensure(
        ok,
        format!(
            "rotation {:.1e}, monomial {:.1e}, reciprocal {:.1e}, scaling {:.1e}",
            worst[0], worst[1], worst[2], worst[3]
        ),
    )
}

fn main() {
    let checks: [Criterion; 9] = [
        (1, "z+1 converges to 1/π", c1_z_plus_one, 5),
        (2, "z^n-1 family", c2_family, 10),
        (3, "window log-power integral", c3_window_integral, 1),
        (4, "off-circle decay under the envelope", c4_decay, 5),
        (5, "repeated circle root diverges", c5_repeated_root, 5),
        (6, "Jensen consistency", c6_jensen, 10),
        (7, "quadrature vs brute force", c7_oracle, 20),
        (8, "m_2(z+1) = π²/12", c8_known_value, 5),
        (9, "invariances and scaling identity", c9_properties, 30),
    ];
    let optimized = !cfg!(debug_assertions);
    let mut failures = Vec::new();
    for (n, name, check, budget) in checks {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        // Wall-clock budgets only mean something in an optimized build.
        let slow = optimized && elapsed > Duration::from_secs(budget);
        let (status, detail) = match (&result, slow) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget} s budget")),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        println!("criterion {n} [{status}] {name}: {detail} ({:.2} s)", elapsed.as_secs_f64());
        if status == "FAIL" {
            failures.push(n);
        }
    }
    if failures.is_empty() {
        println!("acceptance: all {} criteria passed", checks.len());
    } else {
        println!("acceptance: failed criteria {failures:?}");
        std::process::exit(1);
    }
}
