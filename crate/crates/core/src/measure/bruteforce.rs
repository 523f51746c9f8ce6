//! Independent oracle for `m_k(P)`: tanh-sinh quadrature between consecutive
//! circle-root angles, with `log|P|` taken from the root factorization.
//!
//! The double-exponential substitution clusters nodes at the endpoints fast
//! enough to absorb the logarithmic singularities, and the node offsets from
//! each endpoint are formed directly so `|e^{2πit} - z_j| = 2|sin(π·offset)|`
//! keeps full relative accuracy. No local linear model is involved.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::logpow::{ln_factorial, scaled_power};
use crate::laurent::{classify_circle_roots, find_roots_with, unit, LaurentPolynomial, DEFAULT_CIRCLE_TOLERANCE};
use crate::par::{self, Execution};
use crate::{Error, Result};

/// Highest supported refinement level (step `2^-level`).
pub const MAX_LEVEL: u32 = 12;
/// Successive levels differing by more than this (relative to `max(1, |m_k|)`)
/// raise a warning.
pub const LEVEL_AGREEMENT: f64 = 1e-8;
/// Truncation of the substitution variable: endpoint offsets reach ~1e-304.
const U_MAX: f64 = 6.1;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub k: usize,
    pub level: u32,
    /// Signed `m_k(P)` at `level`.
    pub value: f64,
    /// `m_k(P)/k!` at `level`.
    pub signed_scaled: f64,
    /// Signed `m_k(P)` at `level - 1` (equal to `value` when `level = 0`).
    pub previous_value: f64,
    pub warning: Option<String>,
}

impl BruteForceResult {
    pub fn scaled(&self) -> f64 {
        self.signed_scaled.abs()
    }

    pub fn level_difference(&self) -> f64 {
        (self.value - self.previous_value).abs()
    }
}

struct Factorization {
    log_lead: f64,
    /// `(angle, multiplicity)` sorted by angle.
    circle: Vec<(f64, usize)>,
    off: Vec<(Complex64, usize)>,
}

impl Factorization {
    /// `log|P(e^{2πix})|` on the segment between circle roots `ia` and `ib`
    /// with exact endpoint offsets `da = x - a`, `db = b - x`.
    fn log_abs(&self, x: f64, da: f64, db: f64, ia: Option<usize>, ib: Option<usize>) -> f64 {
        let mut acc = self.log_lead;
        for (i, &(angle, m)) in self.circle.iter().enumerate() {
            let d = match (Some(i) == ia, Some(i) == ib) {
                (true, true) => da.min(db),
                (true, false) => da,
                (false, true) => db,
                (false, false) => x - angle,
            };
            acc += m as f64 * (2.0 * (PI * d).sin().abs()).ln();
        }
        let z = unit(x);
        for &(r, m) in &self.off {
            acc += m as f64 * (z - r).norm().ln();
        }
        acc
    }
}

struct Segment {
    a: f64,
    b: f64,
    ia: Option<usize>,
    ib: Option<usize>,
}

fn segments(circle: &[(f64, usize)]) -> Vec<Segment> {
    let m = circle.len();
    if m == 0 {
        return vec![Segment { a: 0.0, b: 1.0, ia: None, ib: None }];
    }
    (0..m)
        .map(|j| {
            let (b, ib) = if j + 1 < m { (circle[j + 1].0, j + 1) } else { (circle[0].0 + 1.0, 0) };
            Segment { a: circle[j].0, b, ia: Some(j), ib: Some(ib) }
        })
        .collect()
}

/// Signed `m_k/k!` by tanh-sinh with step `2^-level`.
fn tanh_sinh(f: &Factorization, segs: &[Segment], k: usize, level: u32, exec: Execution) -> f64 {
    let h = 0.5f64.powi(level as i32);
    let n = (U_MAX / h).ceil() as i64;
    let nodes: Vec<i64> = (-n..=n).collect();
    let mut total = 0.0;
    for seg in segs {
        let len = seg.b - seg.a;
        let terms = par::map(exec, &nodes, |&j| {
            let u = j as f64 * h;
            let v = FRAC_PI_2 * u.sinh();
            let q = (-2.0 * v.abs()).exp();
            let small = len * q / (1.0 + q);
            if small == 0.0 {
                return 0.0;
            }
            let big = len / (1.0 + q);
            let (da, db, x) = if v >= 0.0 { (big, small, seg.b - small) } else { (small, big, seg.a + small) };
            let weight = h * 0.5 * len * FRAC_PI_2 * u.cosh() * 4.0 * q / ((1.0 + q) * (1.0 + q));
            weight * scaled_power(f.log_abs(x, da, db, seg.ia, seg.ib), k)
        });
        total += terms.iter().sum::<f64>();
    }
    total
}

/// [`mk_bruteforce_with`] with the default circle tolerance, in parallel.
pub fn mk_bruteforce(p: &LaurentPolynomial, k: usize, level: u32) -> Result<BruteForceResult> {
    mk_bruteforce_with(p, k, level, DEFAULT_CIRCLE_TOLERANCE, Execution::default())
}

/// `m_k(P)` by double-exponential quadrature at `level` (at most
/// [`MAX_LEVEL`]), compared against `level - 1`.
pub fn mk_bruteforce_with(
    p: &LaurentPolynomial,
    k: usize,
    level: u32,
    circle_tolerance: f64,
    exec: Execution,
) -> Result<BruteForceResult> {
    if level > MAX_LEVEL {
        return Err(Error::Precondition(format!("level {level} exceeds {MAX_LEVEL}")));
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let circle: Vec<(f64, usize)> = classify_circle_roots(p, circle_tolerance)?
        .into_iter()
        .map(|c| (c.angle, c.multiplicity))
        .collect();
    let off = find_roots_with(p, circle_tolerance)?
        .into_iter()
        .filter(|r| !r.on_unit_circle)
        .map(|r| (r.value, r.multiplicity))
        .collect();
    let lead = *p.root_polynomial().last().expect("nonzero polynomial");
    let fact = Factorization { log_lead: lead.norm().ln(), circle, off };
    let segs = segments(&fact.circle);

    let signed_scaled = tanh_sinh(&fact, &segs, k, level, exec);
    let previous = if level == 0 { signed_scaled } else { tanh_sinh(&fact, &segs, k, level - 1, exec) };
    let factorial = ln_factorial(k).exp();
    let value = signed_scaled * factorial;
    let previous_value = previous * factorial;
    let diff = (value - previous_value).abs();
    let warning = (diff > LEVEL_AGREEMENT * value.abs().max(1.0)).then(|| {
        format!("levels {} and {level} differ by {diff:e}", level.saturating_sub(1))
    });
    Ok(BruteForceResult { k, level, value, signed_scaled, previous_value, warning })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_polynomial;

    #[test]
    fn k_zero_is_one() {
        for level in [4, 8] {
            let r = mk_bruteforce(&parse_polynomial("z+1").unwrap(), 0, level).unwrap();
            assert!((r.value - 1.0).abs() < 1e-12, "level {level}: {}", r.value);
        }
    }

    #[test]
    fn classical_measure_of_z_plus_one_vanishes() {
        let r = mk_bruteforce(&parse_polynomial("z+1").unwrap(), 1, 10).unwrap();
        assert!(r.value.abs() < 1e-9, "{}", r.value);
        assert!(r.warning.is_none());
    }

    #[test]
    fn successive_levels_agree() {
        let p = parse_polynomial("z+1").unwrap();
        let a = mk_bruteforce(&p, 2, 10).unwrap();
        let b = mk_bruteforce(&p, 2, 11).unwrap();
        assert!((a.value - b.value).abs() < 1e-9);
        assert!((a.value - PI * PI / 12.0).abs() < 1e-9);
    }

    #[test]
    fn level_cap() {
        let p = parse_polynomial("z+1").unwrap();
        assert!(matches!(mk_bruteforce(&p, 1, 13), Err(Error::Precondition(_))));
    }

    #[test]
    fn coarse_level_warns() {
        let p = parse_polynomial("z - 0.99").unwrap();
        let r = mk_bruteforce(&p, 4, 1).unwrap();
        assert!(r.warning.is_some());
    }
}
