//! The large-`k` limit of `|m_k(P)|/k!` and convergence studies against it.
//!
//! The limit is `(1/π) Σ 1/|P'(z_j)|` over the roots `z_j` of `P` on the unit
//! circle, or `∞` when one of those roots is repeated.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::laurent::{classify_circle_roots, LaurentPolynomial};
use crate::measure::{
    ln_factorial, mk_quadrature_series_with_windows, offwindow_bounds, windows_for, MeasureStatus,
    OffWindowBounds, QuadratureConfig,
};
use crate::{Error, Result};

/// A circle root counts as repeated when `|P'(z_j)|` falls below this times
/// `Σ|c_e|`, even if clustering reported it as simple.
pub const DERIVATIVE_THRESHOLD: f64 = 1e-8;
/// Default largest `k` of a convergence study.
pub const DEFAULT_K_MAX: usize = 40;
/// Floor of the relative study tolerance.
pub const STUDY_TOLERANCE: f64 = 1e-4;

/// One `(t_j, |P'(z_j)|, 1/(π|P'(z_j)|))` term of the limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitContribution {
    pub angle: f64,
    pub derivative_abs: f64,
    pub term: f64,
}

/// The circle root that makes the limit infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceWitness {
    pub angle: f64,
    pub root: Complex64,
    pub multiplicity: usize,
    pub derivative_abs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitValue {
    pub finite: bool,
    /// Present iff `finite`.
    pub value: Option<f64>,
    /// Terms of the simple circle roots.
    pub contributions: Vec<LimitContribution>,
    /// Present iff not `finite`.
    pub divergence_witness: Option<DivergenceWitness>,
}

impl LimitValue {
    /// The limit as a float, `+∞` in the divergent case.
    pub fn as_f64(&self) -> f64 {
        self.value.unwrap_or(f64::INFINITY)
    }
}

/// `lim |m_k(P)|/k!`.
pub fn limit_formula(p: &LaurentPolynomial, tolerance: f64) -> Result<LimitValue> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let entries = classify_circle_roots(p, tolerance)?;
    let threshold = DERIVATIVE_THRESHOLD * p.coefficient_norm();
    let is_repeated = |m: usize, d: f64| m >= 2 || d < threshold;
    let witness = entries
        .iter()
        .find(|e| is_repeated(e.multiplicity, e.derivative_abs))
        .map(|e| DivergenceWitness {
            angle: e.angle,
            root: e.point,
            multiplicity: e.multiplicity,
            derivative_abs: e.derivative_abs,
        });
    let contributions: Vec<LimitContribution> = entries
        .iter()
        .filter(|e| !is_repeated(e.multiplicity, e.derivative_abs))
        .map(|e| LimitContribution {
            angle: e.angle,
            derivative_abs: e.derivative_abs,
            term: 1.0 / (PI * e.derivative_abs),
        })
        .collect();
    let finite = witness.is_none();
    Ok(LimitValue {
        finite,
        value: finite.then(|| contributions.iter().map(|c| c.term).sum()),
        contributions,
        divergence_witness: witness,
    })
}

/// `μA · max(|log b|, |log B|)^k / k!`, an upper bound for the complement's
/// share of `|m_k|/k!`.
pub fn offwindow_envelope(b: f64, big_b: f64, mu_a: f64, k: usize) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::Domain(format!("envelope needs b > 0, got {b}")));
    }
    if !(big_b >= b) || !(0.0..=1.0).contains(&mu_a) {
        return Err(Error::Precondition(format!(
            "envelope needs b ≤ B and 0 ≤ μA ≤ 1, got b = {b}, B = {big_b}, μA = {mu_a}"
        )));
    }
    let m = b.ln().abs().max(big_b.ln().abs());
    if m == 0.0 || mu_a == 0.0 {
        return Ok(if k == 0 { mu_a } else { 0.0 });
    }
    Ok(mu_a * (k as f64 * m.ln() - ln_factorial(k)).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Converged,
    Diverging,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Converged => "converged",
            Verdict::Diverging => "diverging",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub k: usize,
    /// Signed `m_k(P)`.
    pub mk: f64,
    /// `|m_k(P)|/k!`.
    pub scaled: f64,
    /// `scaled / limit` when the limit is finite and positive.
    pub ratio: Option<f64>,
    /// Complement bound from [`offwindow_envelope`].
    pub envelope: Option<f64>,
    pub error_estimate: f64,
    pub status: MeasureStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// Sorted by `k`, strictly increasing, starting at `k = 1`.
    pub rows: Vec<ConvergenceRow>,
    pub limit: LimitValue,
    pub bounds: Option<OffWindowBounds>,
    pub verdict: Verdict,
    /// Whether `|scaled - limit|` is non-increasing over the second half of the
    /// rows; `None` without a finite limit.
    pub eventually_monotone: Option<bool>,
    /// Relative tolerance the verdict was judged with.
    pub study_tolerance: f64,
    pub warnings: Vec<String>,
}

fn verdict(rows: &[ConvergenceRow], limit: &LimitValue) -> (Verdict, f64) {
    let n = rows.len();
    let last3 = &rows[n - 3..];
    let err3 = last3.iter().map(|r| r.error_estimate).fold(0.0, f64::max);
    if rows.iter().any(|r| r.status == MeasureStatus::Diverging) {
        return (Verdict::Diverging, STUDY_TOLERANCE);
    }
    let mut tolerance = STUDY_TOLERANCE.max(err3);
    if let Some(l) = limit.value {
        let converged = if l > 0.0 {
            tolerance = STUDY_TOLERANCE.max(err3 / l);
            last3.iter().all(|r| r.ratio.is_some_and(|q| (q - 1.0).abs() <= 10.0 * tolerance))
        } else {
            last3.iter().all(|r| r.scaled <= 10.0 * tolerance)
        };
        if converged {
            return (Verdict::Converged, tolerance);
        }
    }
    let first = &rows[n.saturating_sub(5)];
    let last = &rows[n - 1];
    let grows = last.scaled >= 2.0 * first.scaled;
    let above_limit = limit.value.is_none_or(|l| last.scaled > 2.0 * l);
    if grows && above_limit {
        (Verdict::Diverging, tolerance)
    } else {
        (Verdict::Inconclusive, tolerance)
    }
}

fn monotone_tail(rows: &[ConvergenceRow], limit: &LimitValue) -> Option<bool> {
    let l = limit.value?;
    let tail = &rows[rows.len() / 2..];
    Some(tail.windows(2).all(|w| {
        let slack = w[0].error_estimate + w[1].error_estimate + 16.0 * f64::EPSILON * l;
        (w[1].scaled - l).abs() <= (w[0].scaled - l).abs() + slack
    }))
}

/// Compute `|m_k(P)|/k!` for `k = 1..=k_max` and judge it against the limit.
pub fn convergence_study(p: &LaurentPolynomial, k_max: usize, cfg: &QuadratureConfig) -> Result<ConvergenceReport> {
    if k_max < 3 {
        return Err(Error::Precondition(format!("k_max must be at least 3, got {k_max}")));
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let windows = windows_for(p, cfg)?;
    let limit = limit_formula(p, cfg.circle_tolerance)?;
    let bounds = offwindow_bounds(p, &windows).ok();
    let series = mk_quadrature_series_with_windows(p, &windows, k_max, cfg)?;
    let mut warnings: Vec<String> = Vec::new();
    for w in series.iter().flat_map(|r| &r.warnings) {
        if !warnings.contains(w) {
            warnings.push(w.clone());
        }
    }
    let rows: Vec<ConvergenceRow> = series
        .iter()
        .skip(1)
        .map(|r| ConvergenceRow {
            k: r.k,
            mk: r.value,
            scaled: r.scaled,
            ratio: limit.value.filter(|l| *l > 0.0).map(|l| r.scaled / l),
            envelope: bounds.and_then(|b| offwindow_envelope(b.lower, b.upper, b.complement_measure, r.k).ok()),
            error_estimate: r.error_estimate,
            status: r.status,
        })
        .collect();
    let (verdict, study_tolerance) = verdict(&rows, &limit);
    let eventually_monotone = monotone_tail(&rows, &limit);
    if eventually_monotone == Some(false) {
        warnings.push("|scaled - limit| is not monotone over the second half of the study".into());
    }
    Ok(ConvergenceReport {
        rows,
        limit,
        bounds,
        verdict,
        eventually_monotone,
        study_tolerance,
        warnings,
    })
}
