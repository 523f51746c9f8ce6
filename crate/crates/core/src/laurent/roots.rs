//! Simultaneous root finding on the ordinary lift `z^m·P(z)`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{deflate, horner, taylor_at, LaurentPolynomial, DEFAULT_CIRCLE_TOLERANCE};
use crate::{Error, Result};

/// Iteration cap for the Aberth–Ehrlich sweep.
pub const MAX_ROOT_ITERATIONS: usize = 200;
/// Relative backward-error bound every returned root must satisfy.
pub const ROOT_RESIDUAL_TOLERANCE: f64 = 1e-12;
/// Distinct roots closer than this are merged into one repeated root.
const MERGE_RADIUS: f64 = 1e-7;
/// Candidate radius for the first clustering pass; candidates are confirmed
/// by the Taylor-coefficient test before being merged.
const CANDIDATE_RADIUS: f64 = 1e-3;

/// A distinct root of `P` with its multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
    pub on_unit_circle: bool,
    /// `t` in `[0, 1)` with `value ≈ e^{2πit}`; present iff `on_unit_circle`.
    pub angle: Option<f64>,
    /// `|P(value)|`.
    pub residual: f64,
}

impl Root {
    /// Signed distance `|value| - 1` from the unit circle.
    pub fn circle_distance(&self) -> f64 {
        self.value.norm() - 1.0
    }
}

/// `Σ |a_e| |z|^e`: the rounding scale for evaluating `p` at `z`.
fn abs_scale(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

fn derivative_coeffs(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(e, c)| c * e as f64)
        .collect()
}

/// Fujiwara's bound on the root moduli of `coeffs` (ascending, degree ≥ 1).
fn fujiwara_bound(coeffs: &[Complex64]) -> f64 {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].norm();
    let mut bound: f64 = 0.0;
    for j in 1..=n {
        let mut ratio = coeffs[n - j].norm() / lead;
        if j == n {
            ratio /= 2.0;
        }
        bound = bound.max(ratio.powf(1.0 / j as f64));
    }
    2.0 * bound
}

/// Aberth–Ehrlich iteration. Returns the approximations and the worst relative
/// residual.
fn aberth(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    if n == 1 {
        return Ok(vec![-coeffs[0] / coeffs[1]]);
    }
    let dcoeffs = derivative_coeffs(coeffs);
    let radius = fujiwara_bound(coeffs);
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| {
            let r = radius * (1.0 + 0.01 * (j % 3) as f64);
            Complex64::from_polar(r, TAU * j as f64 / n as f64 + 0.4)
        })
        .collect();
    let mut frozen = vec![false; n];
    let mut iterations = 0;
    while iterations < MAX_ROOT_ITERATIONS && frozen.iter().any(|f| !f) {
        iterations += 1;
        for j in 0..n {
            if frozen[j] {
                continue;
            }
            let p = horner(coeffs, z[j]);
            if p.norm() <= 8.0 * f64::EPSILON * abs_scale(coeffs, z[j]) {
                frozen[j] = true;
                continue;
            }
            let dp = horner(&dcoeffs, z[j]);
            let w = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&i| i != j)
                .map(|i| (z[j] - z[i]).inv())
                .sum();
            let step = w / (Complex64::new(1.0, 0.0) - w * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[j] -= step;
            if step.norm() <= 2.0 * f64::EPSILON * z[j].norm() {
                frozen[j] = true;
            }
        }
    }
    let worst = z
        .iter()
        .map(|&r| horner(coeffs, r).norm() / abs_scale(coeffs, r))
        .fold(0.0, f64::max);
    if !(worst <= ROOT_RESIDUAL_TOLERANCE) {
        return Err(Error::NoConvergence {
            iterations,
            residual: worst,
        });
    }
    Ok(z)
}

/// Whether the approximations in `group` are one root of multiplicity
/// `group.len()` at their centroid, judged by how fast the Taylor coefficients
/// `p^{(j)}(c)/j!` vanish for `j < r`.
fn confirm_cluster(coeffs: &[Complex64], centroid: Complex64, r: usize) -> bool {
    let taylor = taylor_at(coeffs, centroid, r);
    let lead = taylor[r].norm();
    if lead == 0.0 {
        return false;
    }
    let abs: Vec<Complex64> = coeffs.iter().map(|c| Complex64::new(c.norm(), 0.0)).collect();
    let noise = horner(&abs, Complex64::new(centroid.norm(), 0.0)).re;
    let scale = centroid.norm().max(1.0);
    // An r-fold root is only resolvable to about (eps·Σ|c_i||z|^i / |T_r|)^{1/r}.
    let floor = 16.0 * (f64::EPSILON * noise / lead).powf(1.0 / r as f64);
    (0..r).all(|j| {
        let spread = (taylor[j].norm() / (binomial(r, j) * lead)).powf(1.0 / (r - j) as f64);
        spread <= (MERGE_RADIUS * scale).max(floor)
    })
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Single-linkage grouping of `idx` under `radius` (relative for |z| > 1).
fn link(z: &[Complex64], idx: &[usize], radius: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; idx.len()];
    for s in 0..idx.len() {
        if assigned[s] {
            continue;
        }
        assigned[s] = true;
        let mut group = vec![idx[s]];
        let mut head = 0;
        while head < group.len() {
            let a = z[group[head]];
            for t in 0..idx.len() {
                if !assigned[t] {
                    let b = z[idx[t]];
                    if (a - b).norm() <= radius * a.norm().max(b.norm()).max(1.0) {
                        assigned[t] = true;
                        group.push(idx[t]);
                    }
                }
            }
            head += 1;
        }
        group.sort_unstable();
        groups.push(group);
    }
    groups
}

fn cluster(
    coeffs: &[Complex64],
    z: &[Complex64],
    idx: &[usize],
    radius: f64,
    out: &mut Vec<(Complex64, usize)>,
) {
    for group in link(z, idx, radius) {
        let centroid = group.iter().map(|&i| z[i]).sum::<Complex64>() / group.len() as f64;
        if group.len() == 1 {
            out.push((z[group[0]], 1));
        } else if confirm_cluster(coeffs, centroid, group.len()) {
            out.push((centroid, group.len()));
        } else if radius > MERGE_RADIUS * 1e-2 {
            cluster(coeffs, z, &group, radius / 10.0, out);
        } else {
            out.extend(group.iter().map(|&i| (z[i], 1)));
        }
    }
}

/// Newton polishing of a simple root; keeps the better of the two.
fn polish(coeffs: &[Complex64], dcoeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..3 {
        let p = horner(coeffs, z);
        let dp = horner(dcoeffs, z);
        if dp == Complex64::new(0.0, 0.0) {
            break;
        }
        let next = z - p / dp;
        if horner(coeffs, next).norm() < p.norm() {
            z = next;
        } else {
            break;
        }
    }
    z
}

/// Distinct nonzero roots of `P` with multiplicities, classified against the
/// unit circle with [`DEFAULT_CIRCLE_TOLERANCE`].
pub fn find_roots(p: &LaurentPolynomial) -> Result<Vec<Root>> {
    find_roots_with(p, DEFAULT_CIRCLE_TOLERANCE)
}

/// [`find_roots`] with an explicit circle tolerance: a root is on the circle
/// when `||z| - 1| ≤ circle_tolerance`.
///
/// Roots are sorted by argument, then modulus. Constants and monomials have no
/// (nonzero) roots.
pub fn find_roots_with(p: &LaurentPolynomial, circle_tolerance: f64) -> Result<Vec<Root>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let coeffs = p.root_polynomial();
    if coeffs.len() < 2 {
        return Ok(Vec::new());
    }
    let approx = aberth(coeffs)?;
    let idx: Vec<usize> = (0..approx.len()).collect();
    let mut clusters = Vec::new();
    cluster(coeffs, &approx, &idx, CANDIDATE_RADIUS, &mut clusters);

    let dcoeffs = derivative_coeffs(coeffs);
    let mut roots: Vec<Root> = clusters
        .into_iter()
        .map(|(value, multiplicity)| {
            let value = if multiplicity == 1 {
                polish(coeffs, &dcoeffs, value)
            } else {
                // An r-fold root is a simple root of the (r-1)-th derivative.
                let mut d = coeffs.to_vec();
                for _ in 1..multiplicity {
                    d = derivative_coeffs(&d);
                }
                polish(&d, &derivative_coeffs(&d), value)
            };
            let on_unit_circle = (value.norm() - 1.0).abs() <= circle_tolerance;
            let angle = on_unit_circle.then(|| angle_of(value));
            Root {
                value,
                multiplicity,
                on_unit_circle,
                angle,
                residual: p.eval_unchecked(value).norm(),
            }
        })
        .collect();
    roots.sort_by(|a, b| {
        angle_of(a.value)
            .total_cmp(&angle_of(b.value))
            .then(a.value.norm().total_cmp(&b.value.norm()))
    });
    Ok(roots)
}

/// `arg(z)/2π` reduced to `[0, 1)`.
pub(crate) fn angle_of(z: Complex64) -> f64 {
    let t = z.arg() / TAU;
    let t = if t < 0.0 { t + 1.0 } else { t };
    if t >= 1.0 {
        0.0
    } else {
        t
    }
}

/// `P(z)/(z - root)^multiplicity` on the ordinary lift.
pub(crate) fn deflated_lift(p: &LaurentPolynomial, root: Complex64, multiplicity: usize) -> Vec<Complex64> {
    let mut q = p.root_polynomial().to_vec();
    for _ in 0..multiplicity {
        q = deflate(&q, root);
    }
    q
}
