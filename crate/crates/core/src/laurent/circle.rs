//! Unit-circle roots and the disjoint windows `(t_j - δ, t_j + δ)` around them.

use num_complex::Complex64;

use super::roots::{angle_of, find_roots_with, Root};
use super::{unit, LaurentPolynomial};
use crate::{Error, Result};

/// Default `||z| - 1|` below which a root counts as lying on the circle.
pub const DEFAULT_CIRCLE_TOLERANCE: f64 = 1e-9;
/// Default relative tolerance of the local model `|P| ≈ a·(2π|s|)^m` on a window.
pub const DEFAULT_LOCAL_MODEL_EPSILON: f64 = 0.1;

/// Largest and smallest candidate window half-widths, `2^-3` and `2^-20`.
const DELTA_EXPONENTS: std::ops::RangeInclusive<i32> = 3..=20;
/// Samples per window side used to verify a half-width.
const SAMPLES_PER_SIDE: usize = 128;

/// A root on the unit circle with its local data.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleRoot {
    pub root: Root,
    /// `t_j` in `[0, 1)`.
    pub angle: f64,
    /// The root projected onto the circle, `e^{2πi t_j}`.
    pub point: Complex64,
    pub multiplicity: usize,
    /// `|P'(z_j)|`.
    pub derivative_abs: f64,
    /// `|P^{(m)}(z_j)|/m!` for multiplicity `m`: `|P| ≈ local_scale·|z - z_j|^m`.
    pub local_scale: f64,
}

/// One window entry of a [`CircleRootSet`].
pub type CircleEntry = CircleRoot;

/// How the window half-width is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum WindowPolicy {
    /// Largest `2^-j`, `3 ≤ j ≤ 20`, that passes the sampling checks, capped by
    /// a third of the smallest angular gap.
    #[default]
    Auto,
    /// A caller-supplied half-width; must keep the windows disjoint and `|P| < 1`.
    Fixed(f64),
}

/// Circle roots sorted by angle, their common window half-width and the
/// measure of the complement `A = [0, 1] \ ⋃ windows`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleRootSet {
    pub entries: Vec<CircleRoot>,
    pub delta: f64,
    pub complement_measure: f64,
}

impl CircleRootSet {
    /// Complement pieces as `(start, end)` with `start < end`, possibly
    /// extending past 1 for the piece that wraps around.
    pub fn complement_intervals(&self) -> Vec<(f64, f64)> {
        let n = self.entries.len();
        if n == 0 {
            return vec![(0.0, 1.0)];
        }
        (0..n)
            .filter_map(|j| {
                let a = self.entries[j].angle + self.delta;
                let b = if j + 1 < n {
                    self.entries[j + 1].angle
                } else {
                    self.entries[0].angle + 1.0
                } - self.delta;
                (b > a).then_some((a, b))
            })
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Roots within `tolerance` of the circle, sorted by angle.
///
/// Fails with [`Error::AmbiguousClassification`] when a root's distance from
/// the circle lies in `(tolerance, 2·tolerance]`.
pub fn classify_circle_roots(p: &LaurentPolynomial, tolerance: f64) -> Result<Vec<CircleRoot>> {
    if !(tolerance > 0.0) {
        return Err(Error::Precondition("circle tolerance must be positive".into()));
    }
    let roots = find_roots_with(p, tolerance)?;
    if let Some(r) = roots.iter().find(|r| {
        let d = r.circle_distance().abs();
        d > tolerance && d <= 2.0 * tolerance
    }) {
        return Err(Error::AmbiguousClassification {
            re: r.value.re,
            im: r.value.im,
            distance: r.circle_distance().abs(),
            tolerance,
        });
    }
    let dp = p.derivative();
    let lift = p.root_polynomial();
    let mut out: Vec<CircleRoot> = roots
        .into_iter()
        .filter(|r| r.on_unit_circle)
        .map(|root| {
            let angle = angle_of(root.value);
            let point = unit(angle);
            let m = root.multiplicity;
            let taylor = super::taylor_at(lift, point, m);
            CircleRoot {
                angle,
                point,
                multiplicity: m,
                derivative_abs: dp.eval_unchecked(point).norm(),
                local_scale: taylor[m].norm(),
                root,
            }
        })
        .collect();
    out.sort_by(|a, b| a.angle.total_cmp(&b.angle));
    Ok(out)
}

/// Smallest angular gap between consecutive circle roots, modulo 1.
fn min_gap(entries: &[CircleRoot]) -> f64 {
    if entries.len() < 2 {
        return 1.0;
    }
    let n = entries.len();
    (0..n)
        .map(|j| {
            let next = if j + 1 < n {
                entries[j + 1].angle
            } else {
                entries[0].angle + 1.0
            };
            next - entries[j].angle
        })
        .fold(f64::INFINITY, f64::min)
}

/// Checks `|P| < 1` on sampled window points and, when `epsilon` is given, the
/// local model `|P(z_j e^{2πis})| ≈ local_scale·(2π|s|)^m` within `epsilon`.
fn window_ok(p: &LaurentPolynomial, entry: &CircleRoot, delta: f64, epsilon: Option<f64>) -> bool {
    let m = entry.multiplicity as i32;
    (1..=SAMPLES_PER_SIDE).all(|i| {
        let s = delta * i as f64 / SAMPLES_PER_SIDE as f64;
        [s, -s].iter().all(|&s| {
            let value = p.eval_unchecked(entry.point * unit(s)).norm();
            if !(value < 1.0) {
                return false;
            }
            match epsilon {
                None => true,
                Some(eps) => {
                    let model = entry.local_scale * (std::f64::consts::TAU * s.abs()).powi(m);
                    (value / model - 1.0).abs() <= eps
                }
            }
        })
    })
}

/// [`circle_roots_with`] using [`WindowPolicy::Auto`] and
/// [`DEFAULT_LOCAL_MODEL_EPSILON`].
pub fn circle_roots(p: &LaurentPolynomial, tolerance: f64) -> Result<CircleRootSet> {
    circle_roots_with(p, tolerance, DEFAULT_LOCAL_MODEL_EPSILON, WindowPolicy::Auto)
}

/// Locate the circle roots of `P` and build disjoint windows around them on
/// which `|P| < 1`.
pub fn circle_roots_with(
    p: &LaurentPolynomial,
    tolerance: f64,
    epsilon: f64,
    policy: WindowPolicy,
) -> Result<CircleRootSet> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Precondition("model epsilon must lie in (0, 1)".into()));
    }
    let entries = classify_circle_roots(p, tolerance)?;
    if entries.is_empty() {
        return Ok(CircleRootSet {
            entries,
            delta: 0.0,
            complement_measure: 1.0,
        });
    }
    let gap = min_gap(&entries);
    let delta = match policy {
        WindowPolicy::Fixed(delta) => {
            if !(delta > 0.0) || 2.0 * delta >= gap {
                return Err(Error::WindowConstruction(format!(
                    "half-width {delta} does not give disjoint windows (smallest gap {gap})"
                )));
            }
            if let Some(e) = entries.iter().find(|e| !window_ok(p, e, delta, None)) {
                return Err(Error::WindowConstruction(format!(
                    "|P| reaches 1 within {delta} of t = {}",
                    e.angle
                )));
            }
            delta
        }
        WindowPolicy::Auto => {
            let cap = gap / 3.0;
            DELTA_EXPONENTS
                .map(|j| 2f64.powi(-j).min(cap))
                .find(|&d| entries.iter().all(|e| window_ok(p, e, d, Some(epsilon))))
                .ok_or_else(|| {
                    Error::WindowConstruction(format!(
                        "no half-width down to 2^-20 keeps |P| < 1 and the local model within {epsilon}"
                    ))
                })?
        }
    };
    Ok(CircleRootSet {
        complement_measure: 1.0 - 2.0 * delta * entries.len() as f64,
        entries,
        delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_polynomial;

    fn set(text: &str) -> CircleRootSet {
        circle_roots(&parse_polynomial(text).unwrap(), DEFAULT_CIRCLE_TOLERANCE).unwrap()
    }

    #[test]
    fn z_squared_minus_one() {
        let s = set("z^2-1");
        assert_eq!(s.entries.len(), 2);
        assert_eq!(s.entries[0].angle, 0.0);
        assert!((s.entries[1].angle - 0.5).abs() < 1e-15);
        for e in &s.entries {
            assert!((e.derivative_abs - 2.0).abs() < 1e-12);
        }
        assert!((s.complement_measure - (1.0 - 4.0 * s.delta)).abs() < 1e-15);
    }

    #[test]
    fn no_circle_roots() {
        let s = set("2*z+1");
        assert!(s.entries.is_empty());
        assert_eq!(s.complement_measure, 1.0);
        assert_eq!(s.complement_intervals(), vec![(0.0, 1.0)]);
    }

    #[test]
    fn fourth_roots_of_unity() {
        let s = set("z^4-1");
        let angles: Vec<f64> = s.entries.iter().map(|e| e.angle).collect();
        for (a, b) in angles.iter().zip([0.0, 0.25, 0.5, 0.75]) {
            assert!((a - b).abs() < 1e-15);
        }
        // |P'(ζ)| = |4ζ³| = 4.
        assert!(s.entries.iter().all(|e| (e.derivative_abs - 4.0).abs() < 1e-12));
        assert!(s.delta <= 0.125);
    }

    #[test]
    fn windows_disjoint_and_below_one() {
        for text in ["z+1", "z^8-1", "(z-1)*(z-i)", "z^3 - 2*z + 1", "(z-1)^2"] {
            let p = parse_polynomial(text).unwrap();
            let s = circle_roots(&p, DEFAULT_CIRCLE_TOLERANCE).unwrap();
            assert!(2.0 * s.delta < min_gap(&s.entries), "{text}");
            for e in &s.entries {
                for i in 0..=64 {
                    let t = e.angle + s.delta * (2.0 * i as f64 / 64.0 - 1.0);
                    if i != 32 {
                        assert!(p.evaluate_on_circle(t).norm() < 1.0, "{text} t={t}");
                    }
                }
            }
            let covered: f64 = s.complement_intervals().iter().map(|(a, b)| b - a).sum();
            assert!((covered - s.complement_measure).abs() < 1e-12);
        }
    }

    #[test]
    fn repeated_root_window() {
        let s = set("(z-1)^2");
        assert_eq!(s.entries.len(), 1);
        assert_eq!(s.entries[0].multiplicity, 2);
        assert!(s.entries[0].derivative_abs < 1e-12);
        assert!((s.entries[0].local_scale - 1.0).abs() < 1e-12);
        assert_eq!(s.delta, 0.125);
    }

    #[test]
    fn fixed_delta() {
        let p = parse_polynomial("z+1").unwrap();
        let s = circle_roots_with(&p, 1e-9, 0.1, WindowPolicy::Fixed(0.1)).unwrap();
        assert_eq!(s.delta, 0.1);
        assert!((s.complement_measure - 0.8).abs() < 1e-15);
        let wide = circle_roots_with(&p, 1e-9, 0.1, WindowPolicy::Fixed(0.3));
        assert!(matches!(wide, Err(Error::WindowConstruction(_))));
        let q = parse_polynomial("z^2-1").unwrap();
        let overlap = circle_roots_with(&q, 1e-9, 0.1, WindowPolicy::Fixed(0.25));
        assert!(matches!(overlap, Err(Error::WindowConstruction(_))));
    }

    #[test]
    fn ambiguity_band_is_an_error() {
        // Root at 1 + 1.5e-9: between tol and 2·tol.
        let p = parse_polynomial("z - 1.0000000015").unwrap();
        let r = classify_circle_roots(&p, 1e-9);
        assert!(matches!(r, Err(Error::AmbiguousClassification { .. })));
        // Clearly inside the tolerance or clearly outside the band is fine.
        assert_eq!(classify_circle_roots(&p, 1e-8).unwrap().len(), 1);
        assert!(classify_circle_roots(&p, 1e-10).unwrap().is_empty());
    }

    #[test]
    fn large_derivative_shrinks_delta() {
        let p = parse_polynomial("100*z + 100").unwrap();
        let s = set("100*z+100");
        assert!(s.delta < 1.0 / (200.0 * std::f64::consts::PI));
        assert!(p.evaluate_on_circle(0.5 + s.delta).norm() < 1.0);
    }
}
