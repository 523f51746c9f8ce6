//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use mahlerk::laurent::{parse_polynomial, LaurentPolynomial};
use mahlerk::Complex64;

pub fn poly(text: &str) -> LaurentPolynomial {
    parse_polynomial(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

/// The fixed suite used by the oracle and invariance checks.
pub const SUITE: [&str; 4] = ["z+1", "z^2-1", "2*z+1", "(z-1)*(z-i)"];

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

pub fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Adaptive Simpson with an absolute tolerance.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            left + right + diff / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `∫_{-w}^{w} |log(c|s|)|^k / k! ds` straight from the definition, after the
/// substitution `s = w·e^{-v}` that removes the endpoint singularity.
pub fn window_integral_oracle(c: f64, w: f64, k: usize) -> f64 {
    let l = (c * w).ln();
    let kf = factorial(k);
    let f = |v: f64| w * (-v).exp() * (l - v).abs().powi(k as i32) / kf;
    // e^{-v} v^k / k! is negligible beyond v = k + 80.
    let top = k as f64 + 80.0;
    let mut total = 0.0;
    let mut a = 0.0;
    while a < top {
        total += adaptive_simpson(&f, a, a + 1.0, 1e-15);
        a += 1.0;
    }
    2.0 * total
}

/// `P(z)` at `e^{2πit}` by direct term summation.
pub fn naive_on_circle(p: &LaurentPolynomial, t: f64) -> Complex64 {
    p.terms()
        .map(|(e, c)| c * Complex64::from_polar(1.0, std::f64::consts::TAU * t * e as f64))
        .sum()
}
