//! `m_k(P)` by window-decomposed Gauss quadrature.
//!
//! `[0, 1]` is split into windows `(t_j - δ, t_j + δ)` around the circle roots
//! and the complement `A`. On `A` the integrand is smooth and composite Gauss
//! panels are refined adaptively. Each window side is covered by geometrically
//! graded panels down to `δ·ratio^M`; the remaining sliver next to the root is
//! closed analytically with the local model `|P| ≈ a·(2π|s|)^m`, bracketed
//! between `a(1 ∓ ε)` and evaluated with the log-power antiderivative.
//!
//! Inside a window `log|P|` is computed as `m·log(2|sin πs|) + log|Q|` where
//! `Q = lift/(z - z_j)^m`, so it keeps full relative accuracy at distances far
//! below the rounding level of a direct evaluation.
//!
//! All integrals are accumulated for every `k` in `0..=k_max` at once, in
//! units of `1/k!`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::gauss::Rule;
use super::logpow::{ln_factorial, scaled_log_power_antiderivative, scaled_power};
use crate::laurent::{
    circle_roots_with, horner, unit, CircleRoot, CircleRootSet, LaurentPolynomial, WindowPolicy,
};
use crate::par::{self, Execution};
use crate::{Error, Result};

/// `|m_k|/k!` above this is reported as diverging.
pub const OVERFLOW_GUARD: f64 = 1e100;
/// Bisection depth cap for complement panels.
const MAX_REFINEMENT_DEPTH: usize = 40;

/// Tuning knobs for [`mk_quadrature`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    /// Gauss nodes per panel.
    pub panel_order: usize,
    /// Ratio between consecutive graded window panels.
    pub grading_ratio: f64,
    /// Number of graded panels per window side.
    pub grading_depth: usize,
    /// Initial panel count on the complement.
    pub smooth_panels: usize,
    /// Tolerance of the local model used to pick δ and bracket the tail.
    pub local_model_epsilon: f64,
    pub circle_tolerance: f64,
    /// Absolute refinement target on the complement, in units of `1/k!`.
    pub target_tolerance: f64,
    pub window: WindowPolicy,
    pub execution: Execution,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            panel_order: 16,
            grading_ratio: 0.5,
            grading_depth: 60,
            smooth_panels: 64,
            local_model_epsilon: 0.1,
            circle_tolerance: 1e-9,
            target_tolerance: 1e-10,
            window: WindowPolicy::Auto,
            execution: Execution::default(),
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Precondition(format!("invalid quadrature config: {what}")));
        if self.panel_order == 0 || self.grading_depth == 0 || self.smooth_panels == 0 {
            return bad("panel_order, grading_depth and smooth_panels must be positive");
        }
        if !(self.grading_ratio > 0.0 && self.grading_ratio < 1.0) {
            return bad("grading_ratio must lie in (0, 1)");
        }
        if !(self.local_model_epsilon > 0.0 && self.local_model_epsilon < 1.0) {
            return bad("local_model_epsilon must lie in (0, 1)");
        }
        if !(self.circle_tolerance > 0.0 && self.target_tolerance > 0.0) {
            return bad("tolerances must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionKind {
    /// Window around the circle root at `angle`.
    Window { angle: f64, multiplicity: usize },
    /// The closed complement `A`.
    Complement,
}

/// Signed share of `m_k/k!` contributed by one region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionContribution {
    pub kind: RegionKind,
    pub scaled: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureStatus {
    Ok,
    /// `|m_k|/k!` passed [`OVERFLOW_GUARD`] or overflowed.
    Diverging,
}

/// `m_k(P)` with its scaled magnitude and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct HigherMeasureResult {
    pub k: usize,
    /// Signed `m_k(P)`; may be infinite for very large `k`.
    pub value: f64,
    /// `|m_k(P)|/k!`.
    pub scaled: f64,
    /// `m_k(P)/k!` with its sign.
    pub signed_scaled: f64,
    /// Absolute error bound on `signed_scaled`.
    pub error_estimate: f64,
    pub breakdown: Vec<RegionContribution>,
    pub status: MeasureStatus,
    pub warnings: Vec<String>,
}

/// Per-`k` sums.
type Sums = Vec<f64>;

fn add_into(acc: &mut [f64], other: &[f64]) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a += b;
    }
}

fn accumulate(acc: &mut [f64], weight: f64, log_value: f64) {
    for (k, a) in acc.iter_mut().enumerate() {
        *a += weight * scaled_power(log_value, k);
    }
}

/// Window-local integrand `log|P(z_j e^{2πis})|`.
struct WindowIntegrand {
    point: Complex64,
    multiplicity: usize,
    deflated: Vec<Complex64>,
}

impl WindowIntegrand {
    fn new(p: &LaurentPolynomial, entry: &CircleRoot) -> Self {
        WindowIntegrand {
            point: entry.point,
            multiplicity: entry.multiplicity,
            deflated: crate::laurent::deflated_lift(p, entry.point, entry.multiplicity),
        }
    }

    fn log_abs(&self, s: f64) -> f64 {
        let q = horner(&self.deflated, self.point * unit(s)).norm();
        self.multiplicity as f64 * (2.0 * (PI * s).sin().abs()).ln() + q.ln()
    }

    /// `|P|/(a (2π|s|)^m) - 1` at offset `s`.
    fn model_deviation(&self, s: f64, scale: f64) -> f64 {
        let q = horner(&self.deflated, self.point * unit(s)).norm();
        let sinc = (PI * s).sin() / (PI * s);
        (q / scale * sinc.abs().powi(self.multiplicity as i32) - 1.0).abs()
    }
}

/// One graded window panel, in local offset `s` (`a < b`, same sign).
#[derive(Clone, Copy)]
struct WindowPanel {
    window: usize,
    a: f64,
    b: f64,
}

struct PanelResult {
    fine: Sums,
    diff: Sums,
}

fn gauss_sums(rule: &Rule, a: f64, b: f64, k_max: usize, f: &impl Fn(f64) -> f64) -> Sums {
    let mut acc = vec![0.0; k_max + 1];
    for (x, w) in rule.on(a, b) {
        accumulate(&mut acc, w, f(x));
    }
    acc
}

fn refine_pair(rule: &Rule, a: f64, b: f64, k_max: usize, f: &impl Fn(f64) -> f64) -> (Sums, Sums) {
    let mid = 0.5 * (a + b);
    (gauss_sums(rule, a, mid, k_max, f), gauss_sums(rule, mid, b, k_max, f))
}

/// Analytic tail on `[0, h]` of one window side, bracketing the local model.
/// Returns `(midpoint, half_gap)` per `k`.
fn tail_sums(scale: f64, multiplicity: usize, h: f64, epsilon: f64, k_max: usize) -> (Sums, Sums) {
    let m = multiplicity as f64;
    let bracket = |factor: f64| -> Sums {
        // |P| ≈ a(1±ε)(2π s)^m = (c s)^m with c = 2π (a(1±ε))^{1/m}.
        let c = TAU * (scale * factor).powf(1.0 / m);
        (0..=k_max)
            .map(|k| {
                let s = scaled_log_power_antiderivative(c * h, k).unwrap_or(f64::NAN);
                if s == 0.0 {
                    return 0.0;
                }
                let mag = (k as f64 * m.ln() - c.ln() + s.abs().ln()).exp();
                mag.copysign(s)
            })
            .collect()
    };
    let lo = bracket(1.0 - epsilon);
    let hi = bracket(1.0 + epsilon);
    let mid = lo.iter().zip(&hi).map(|(x, y)| 0.5 * (x + y)).collect();
    let gap = lo.iter().zip(&hi).map(|(x, y)| 0.5 * (x - y).abs()).collect();
    (mid, gap)
}

struct ComplementPanel {
    a: f64,
    b: f64,
    depth: usize,
    coarse: Sums,
}

/// Evaluate `log|P(e^{2πit})|`, nudging `t` by one ulp on an exact zero.
fn complement_log(p: &LaurentPolynomial, t: f64, nudged: &std::sync::atomic::AtomicUsize) -> f64 {
    let mut t = t;
    for _ in 0..8 {
        let v = p.evaluate_on_circle(t).norm();
        if v > 0.0 {
            return v.ln();
        }
        nudged.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        t = t.next_up();
    }
    f64::NEG_INFINITY
}

/// Integrals over the complement `A`; returns `(value, error)` per `k` and
/// warnings.
fn integrate_complement(
    p: &LaurentPolynomial,
    windows: &CircleRootSet,
    k_max: usize,
    cfg: &QuadratureConfig,
    rule: &Rule,
) -> (Sums, Sums, Vec<String>) {
    use std::sync::atomic::{AtomicUsize, Ordering};
    let nudged = AtomicUsize::new(0);
    let f = |t: f64| complement_log(p, t, &nudged);
    let measure = windows.complement_measure;
    let mut seeds = Vec::new();
    for (a, b) in windows.complement_intervals() {
        let n = ((cfg.smooth_panels as f64 * (b - a) / measure).round() as usize).max(1);
        let h = (b - a) / n as f64;
        for i in 0..n {
            let lo = a + h * i as f64;
            let hi = if i + 1 == n { b } else { a + h * (i + 1) as f64 };
            seeds.push((lo, hi));
        }
    }
    let mut pending: Vec<ComplementPanel> = par::map(cfg.execution, &seeds, |&(a, b)| ComplementPanel {
        a,
        b,
        depth: 0,
        coarse: gauss_sums(rule, a, b, k_max, &f),
    });
    let mut accepted: Vec<(f64, Sums, Sums)> = Vec::new();
    let mut capped = 0usize;
    while !pending.is_empty() {
        let halves = par::map(cfg.execution, &pending, |panel| refine_pair(rule, panel.a, panel.b, k_max, &f));
        let mut next = Vec::new();
        for (panel, (left, right)) in pending.into_iter().zip(halves) {
            let fine: Sums = left.iter().zip(&right).map(|(x, y)| x + y).collect();
            let diff: Sums = fine.iter().zip(&panel.coarse).map(|(x, y)| (x - y).abs()).collect();
            let worst = diff.iter().cloned().fold(0.0, f64::max);
            let local_tol = cfg.target_tolerance * (panel.b - panel.a) / measure;
            if worst <= local_tol || !worst.is_finite() || panel.depth >= MAX_REFINEMENT_DEPTH {
                if worst > local_tol {
                    capped += 1;
                }
                accepted.push((panel.a, fine, diff));
            } else {
                let mid = 0.5 * (panel.a + panel.b);
                next.push(ComplementPanel { a: panel.a, b: mid, depth: panel.depth + 1, coarse: left });
                next.push(ComplementPanel { a: mid, b: panel.b, depth: panel.depth + 1, coarse: right });
            }
        }
        pending = next;
    }
    accepted.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut value = vec![0.0; k_max + 1];
    let mut error = vec![0.0; k_max + 1];
    for (_, fine, diff) in &accepted {
        add_into(&mut value, fine);
        add_into(&mut error, diff);
    }
    let mut warnings = Vec::new();
    let n = nudged.load(Ordering::Relaxed);
    if n > 0 {
        warnings.push(format!("{n} quadrature node(s) hit an exact zero of P and were moved by one ulp"));
    }
    if capped > 0 {
        warnings.push(format!(
            "{capped} complement panel(s) reached the refinement depth cap before meeting the tolerance"
        ));
    }
    (value, error, warnings)
}

/// Window integrals; returns per-window `(value, error)` per `k`.
fn integrate_windows(
    p: &LaurentPolynomial,
    windows: &CircleRootSet,
    k_max: usize,
    cfg: &QuadratureConfig,
    rule: &Rule,
) -> Vec<(Sums, Sums)> {
    let integrands: Vec<WindowIntegrand> = windows.entries.iter().map(|e| WindowIntegrand::new(p, e)).collect();
    let delta = windows.delta;
    let r = cfg.grading_ratio;
    let mut panels = Vec::new();
    for w in 0..windows.entries.len() {
        for side in [1.0, -1.0] {
            let mut outer = delta;
            for _ in 0..cfg.grading_depth {
                let inner = outer * r;
                let (a, b) = if side > 0.0 { (inner, outer) } else { (-outer, -inner) };
                panels.push(WindowPanel { window: w, a, b });
                outer = inner;
            }
        }
    }
    let results: Vec<PanelResult> = par::map(cfg.execution, &panels, |panel| {
        let f = |s: f64| integrands[panel.window].log_abs(s);
        let coarse = gauss_sums(rule, panel.a, panel.b, k_max, &f);
        let (left, right) = refine_pair(rule, panel.a, panel.b, k_max, &f);
        let fine: Sums = left.iter().zip(&right).map(|(x, y)| x + y).collect();
        let diff = fine.iter().zip(&coarse).map(|(x, y)| (x - y).abs()).collect();
        PanelResult { fine, diff }
    });
    let h = delta * r.powi(cfg.grading_depth as i32);
    let mut out: Vec<(Sums, Sums)> = windows
        .entries
        .iter()
        .zip(&integrands)
        .map(|(entry, integrand)| {
            let scale = entry.local_scale;
            let deviation = integrand.model_deviation(h, scale).max(integrand.model_deviation(-h, scale));
            let epsilon = cfg.local_model_epsilon.min((4.0 * deviation).max(16.0 * f64::EPSILON));
            let (mid, gap) = tail_sums(scale, entry.multiplicity, h, epsilon, k_max);
            // Two sides share the same bracket.
            let value = mid.iter().map(|x| 2.0 * x).collect();
            let error = gap.iter().map(|x| 2.0 * x).collect();
            (value, error)
        })
        .collect();
    for (panel, res) in panels.iter().zip(&results) {
        let (value, error) = &mut out[panel.window];
        add_into(value, &res.fine);
        add_into(error, &res.diff);
    }
    out
}

/// Integrals for `k = 0..=k_max` over precomputed windows.
pub fn mk_quadrature_series_with_windows(
    p: &LaurentPolynomial,
    windows: &CircleRootSet,
    k_max: usize,
    cfg: &QuadratureConfig,
) -> Result<Vec<HigherMeasureResult>> {
    cfg.validate()?;
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let rule = Rule::new(cfg.panel_order);
    let window_sums = integrate_windows(p, windows, k_max, cfg, &rule);
    let (comp_value, comp_error, warnings) = integrate_complement(p, windows, k_max, cfg, &rule);

    Ok((0..=k_max)
        .map(|k| {
            let mut breakdown: Vec<RegionContribution> = windows
                .entries
                .iter()
                .zip(&window_sums)
                .map(|(entry, (value, error))| RegionContribution {
                    kind: RegionKind::Window {
                        angle: entry.angle,
                        multiplicity: entry.multiplicity,
                    },
                    scaled: value[k],
                    error_estimate: error[k],
                })
                .collect();
            breakdown.push(RegionContribution {
                kind: RegionKind::Complement,
                scaled: comp_value[k],
                error_estimate: comp_error[k],
            });
            let signed_scaled: f64 = breakdown.iter().map(|r| r.scaled).sum();
            let error_estimate: f64 = breakdown.iter().map(|r| r.error_estimate).sum();
            let scaled = signed_scaled.abs();
            let status = if scaled.is_finite() && scaled <= OVERFLOW_GUARD {
                MeasureStatus::Ok
            } else {
                MeasureStatus::Diverging
            };
            HigherMeasureResult {
                k,
                value: signed_scaled * ln_factorial(k).exp(),
                scaled,
                signed_scaled,
                error_estimate,
                breakdown,
                status,
                warnings: warnings.clone(),
            }
        })
        .collect())
}

/// Windows for `P` under `cfg`.
pub fn windows_for(p: &LaurentPolynomial, cfg: &QuadratureConfig) -> Result<CircleRootSet> {
    cfg.validate()?;
    circle_roots_with(p, cfg.circle_tolerance, cfg.local_model_epsilon, cfg.window)
}

/// `m_k(P)` for every `k` in `0..=k_max`, sharing one set of integrand samples.
pub fn mk_quadrature_series(
    p: &LaurentPolynomial,
    k_max: usize,
    cfg: &QuadratureConfig,
) -> Result<Vec<HigherMeasureResult>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let windows = windows_for(p, cfg)?;
    mk_quadrature_series_with_windows(p, &windows, k_max, cfg)
}

/// `m_k(P) = ∫₀¹ log^k |P(e^{2πit})| dt`.
pub fn mk_quadrature(p: &LaurentPolynomial, k: usize, cfg: &QuadratureConfig) -> Result<HigherMeasureResult> {
    let mut series = mk_quadrature_series(p, k, cfg)?;
    Ok(series.pop().expect("series covers 0..=k"))
}
