//! `m_k(P)`: Jensen's formula for `k = 1`, window-decomposed quadrature for
//! all `k`, an independent double-exponential oracle, and off-window bounds.

mod bounds;
mod bruteforce;
mod gauss;
mod logpow;
mod quadrature;

use crate::laurent::{find_roots, LaurentPolynomial};
use crate::{Error, Result};

pub use bounds::{offwindow_bounds, OffWindowBounds, MIN_SAMPLES};
pub use bruteforce::{mk_bruteforce, mk_bruteforce_with, BruteForceResult, LEVEL_AGREEMENT, MAX_LEVEL};
pub use logpow::{
    ln_factorial, log_power_antiderivative, log_power_window_integral, scaled_log_power_antiderivative,
    scaled_power,
};
pub use quadrature::{
    mk_quadrature, mk_quadrature_series, mk_quadrature_series_with_windows, windows_for, HigherMeasureResult,
    MeasureStatus, QuadratureConfig, RegionContribution, RegionKind, OVERFLOW_GUARD,
};

/// Classical Mahler measure `log|a| + Σ log max(1, |r_j|)` over the roots of
/// the ordinary lift with leading coefficient `a`.
pub fn jensen_measure(p: &LaurentPolynomial) -> Result<f64> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lead = p.root_polynomial().last().expect("nonzero polynomial").norm();
    let roots = find_roots(p)?;
    Ok(lead.ln()
        + roots
            .iter()
            .map(|r| r.multiplicity as f64 * r.value.norm().max(1.0).ln())
            .sum::<f64>())
}
