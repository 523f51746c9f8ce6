use std::f64::consts::TAU;

use crate::laurent::{CircleRootSet, LaurentPolynomial};
use crate::{Error, Result};

/// Minimum number of samples spread over the complement.
pub const MIN_SAMPLES: usize = 4096;

/// Bounds `0 < lower ≤ |P(e^{2πit})| ≤ upper` on the complement `A` of the
/// windows, with `complement_measure = μA`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffWindowBounds {
    pub lower: f64,
    pub upper: f64,
    pub complement_measure: f64,
}

/// Sample `|P|` densely on `A`. The sampled minimum is lowered by a Lipschitz
/// bound over half the sample spacing (but never below half the minimum) so
/// that `lower` stays valid between samples.
pub fn offwindow_bounds(p: &LaurentPolynomial, windows: &CircleRootSet) -> Result<OffWindowBounds> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let measure = windows.complement_measure;
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    let mut spacing: f64 = 0.0;
    for (a, b) in windows.complement_intervals() {
        let n = ((MIN_SAMPLES as f64 * (b - a) / measure).ceil() as usize).max(1);
        let h = (b - a) / n as f64;
        spacing = spacing.max(h);
        for i in 0..=n {
            let t = if i == n { b } else { a + h * i as f64 };
            let v = p.evaluate_on_circle(t).norm();
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if !(lo > 0.0) {
        return Err(Error::WindowConstruction(
            "|P| vanishes on the complement of the windows; a circle root was missed".into(),
        ));
    }
    // |d/dt P(e^{2πit})| ≤ 2π Σ |e·c_e|.
    let lipschitz: f64 = TAU * p.terms().map(|(e, c)| e.unsigned_abs() as f64 * c.norm()).sum::<f64>();
    let lower = (lo - 0.5 * spacing * lipschitz).max(0.5 * lo);
    Ok(OffWindowBounds { lower, upper: hi, complement_measure: measure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{circle_roots, circle_roots_with, parse_polynomial, WindowPolicy};

    #[test]
    fn no_windows() {
        let p = parse_polynomial("2*z+1").unwrap();
        let w = circle_roots(&p, 1e-9).unwrap();
        let b = offwindow_bounds(&p, &w).unwrap();
        // |2e^{2πit} + 1| ranges over [1, 3], extremes at t = 1/2 and t = 0.
        assert_eq!(b.upper, 3.0);
        assert!(b.lower <= 1.0 && b.lower > 0.99);
        assert_eq!(b.complement_measure, 1.0);
    }

    #[test]
    fn with_window() {
        let p = parse_polynomial("z+1").unwrap();
        let w = circle_roots_with(&p, 1e-9, 0.1, WindowPolicy::Fixed(0.1)).unwrap();
        let b = offwindow_bounds(&p, &w).unwrap();
        assert_eq!(b.upper, 2.0);
        assert!((b.complement_measure - 0.8).abs() < 1e-15);
        // |1 + e^{2πit}| = 2|cos πt|, smallest on A at the window edge t = 0.4.
        let edge = 2.0 * (std::f64::consts::PI * 0.4).cos();
        assert!(b.lower <= edge && b.lower > 0.5 * edge, "{b:?} {edge}");
    }

    #[test]
    fn constant() {
        let p = parse_polynomial("3").unwrap();
        let w = circle_roots(&p, 1e-9).unwrap();
        let b = offwindow_bounds(&p, &w).unwrap();
        assert_eq!((b.lower, b.upper, b.complement_measure), (3.0, 3.0, 1.0));
    }
}
