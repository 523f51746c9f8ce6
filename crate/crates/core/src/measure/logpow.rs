//! Closed forms for `∫₀^x log^k u du` and the scaled window integral.

use crate::{Error, Result};

const TABLE_LEN: usize = 4096;

/// `ln n!`, tabulated by cumulative summation; Stirling beyond the table.
pub fn ln_factorial(n: usize) -> f64 {
    use std::sync::OnceLock;
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(TABLE_LEN);
        t.push(0.0);
        for j in 1..TABLE_LEN {
            t.push(t[j - 1] + (j as f64).ln());
        }
        t
    });
    if n < TABLE_LEN {
        return table[n];
    }
    let x = n as f64 + 1.0;
    (x - 0.5) * x.ln() - x + 0.5 * std::f64::consts::TAU.ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3))
}

/// `L^k/k!` evaluated as `±exp(k ln|L| - ln k!)`.
pub fn scaled_power(log_value: f64, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if log_value == 0.0 {
        return 0.0;
    }
    let mag = (k as f64 * log_value.abs().ln() - ln_factorial(k)).exp();
    if log_value < 0.0 && k % 2 == 1 {
        -mag
    } else {
        mag
    }
}

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("log-power integral needs 0 < x < ∞, got {x}")))
    }
}

/// `(1/k!) ∫₀^x log^k u du = (-1)^k x Σ_{n=0}^{k} (-log x)^n / n!`.
///
/// Terms are formed in log space and summed from the smallest magnitude up
/// with compensation; for `x ≤ 1` they all share one sign.
pub fn scaled_log_power_antiderivative(x: f64, k: usize) -> Result<f64> {
    check_x(x)?;
    let l = x.ln();
    if l == 0.0 {
        return Ok(if k.is_multiple_of(2) { 1.0 } else { -1.0 });
    }
    let ln_abs = l.abs().ln();
    let mut terms: Vec<f64> = (0..=k)
        .map(|n| {
            let mag = (l + n as f64 * ln_abs - ln_factorial(n)).exp();
            // (-l)^n is negative only for odd n when l > 0.
            let sign_n = if l > 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
            sign_n * mag
        })
        .collect();
    terms.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let sum = compensated_sum(terms);
    Ok(if k % 2 == 1 { -sum } else { sum })
}

/// `∫₀^x log^k u du = x log^k x + x Σ_{j=1}^{k} (-1)^j k! log^{k-j} x / (k-j)!`.
///
/// Overflows to ±∞ once `k!` exceeds the `f64` range; use
/// [`scaled_log_power_antiderivative`] for large `k`.
pub fn log_power_antiderivative(x: f64, k: usize) -> Result<f64> {
    if k == 0 {
        check_x(x)?;
        return Ok(x);
    }
    let scaled = scaled_log_power_antiderivative(x, k)?;
    Ok(scaled * ln_factorial(k).exp())
}

/// `(1/k!) |∫_{t₀-w}^{t₀+w} log^k |c(t - t₀)| dt| = (2/c) |(1/k!) ∫₀^{cw} log^k u du|`.
///
/// Requires `c·w ≤ 1` so the integrand has one sign; tends to `2/c` as `k → ∞`.
pub fn log_power_window_integral(c: f64, half_width: f64, k: usize) -> Result<f64> {
    if !(c > 0.0 && half_width > 0.0) {
        return Err(Error::Domain(format!(
            "window integral needs c > 0 and half-width > 0, got c = {c}, w = {half_width}"
        )));
    }
    if k == 0 {
        return Err(Error::Precondition("window integral needs k ≥ 1".into()));
    }
    if c * half_width > 1.0 {
        return Err(Error::Precondition(format!(
            "c·w = {} exceeds 1; the integrand is not sign-definite",
            c * half_width
        )));
    }
    Ok(2.0 / c * scaled_log_power_antiderivative(c * half_width, k)?.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antiderivative_examples() {
        assert!((log_power_antiderivative(1.0, 1).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(log_power_antiderivative(0.7, 0).unwrap(), 0.7);
        assert!((log_power_antiderivative(1.0, 2).unwrap() - 2.0).abs() < 1e-14);
        // x = 1 gives (-1)^k k!.
        for k in 0..=20usize {
            let want = if k % 2 == 0 { 1.0 } else { -1.0 } * ln_factorial(k).exp();
            let got = log_power_antiderivative(1.0, k).unwrap();
            assert!((got - want).abs() <= 1e-12 * want.abs(), "k={k}");
        }
    }

    #[test]
    fn antiderivative_matches_series_form() {
        // Direct evaluation of x log^k x + x Σ (-1)^j k!/(k-j)! log^{k-j} x.
        for &x in &[0.1, 0.5, 2.0, 3.7] {
            for k in 1..=12usize {
                let l = f64::ln(x);
                let kf = ln_factorial(k).exp();
                let mut direct = x * l.powi(k as i32);
                for j in 1..=k {
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    direct += x * sign * kf / ln_factorial(k - j).exp() * l.powi((k - j) as i32);
                }
                let got = log_power_antiderivative(x, k).unwrap();
                assert!((got - direct).abs() <= 1e-11 * direct.abs().max(1.0), "x={x} k={k}");
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(log_power_antiderivative(0.0, 3), Err(Error::Domain(_))));
        assert!(matches!(log_power_antiderivative(-1.0, 0), Err(Error::Domain(_))));
        assert!(matches!(log_power_window_integral(3.0, 0.5, 2), Err(Error::Precondition(_))));
        assert!(matches!(log_power_window_integral(1.0, 1.0, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn window_integral_examples() {
        assert!((log_power_window_integral(1.0, 1.0, 1).unwrap() - 2.0).abs() < 1e-15);
        let big = log_power_window_integral(std::f64::consts::TAU, 0.05, 80).unwrap();
        assert!((big - 1.0 / std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn scaled_power_signs() {
        assert_eq!(scaled_power(0.0, 0), 1.0);
        assert_eq!(scaled_power(0.0, 3), 0.0);
        assert!((scaled_power(-2.0, 3) + 8.0 / 6.0).abs() < 1e-14);
        assert!((scaled_power(-2.0, 2) - 2.0).abs() < 1e-14);
        // No overflow where L^k itself would overflow.
        let v = scaled_power(-700.0, 400);
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn ln_factorial_continuity() {
        let a = ln_factorial(TABLE_LEN - 1) + (TABLE_LEN as f64).ln();
        assert!((ln_factorial(TABLE_LEN) - a).abs() < 1e-9 * a);
    }
}
