use num_complex::Complex64;

use super::LaurentPolynomial;

/// Shortest round-trip decimal rendering; scientific outside `[1e-5, 1e16)`.
pub(crate) fn number(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn monomial(e: i32) -> String {
    match e {
        0 => String::new(),
        1 => "z".to_string(),
        _ => format!("z^{e}"),
    }
}

/// Returns `(negative, body)` for one term.
fn term(c: Complex64, e: i32) -> (bool, String) {
    let mono = monomial(e);
    if c.im == 0.0 {
        let negative = c.re < 0.0;
        let mag = c.re.abs();
        let body = if e == 0 {
            number(mag)
        } else if mag == 1.0 {
            mono
        } else {
            format!("{}*{mono}", number(mag))
        };
        return (negative, body);
    }
    let lit = if c.re == 0.0 {
        format!("({}i)", number(c.im))
    } else {
        let sign = if c.im < 0.0 { '-' } else { '+' };
        format!("({}{sign}{}i)", number(c.re), number(c.im.abs()))
    };
    if e == 0 {
        (false, lit)
    } else {
        (false, format!("{lit}*{mono}"))
    }
}

/// Deterministic descending-exponent rendering, reparsable by
/// [`parse_polynomial`](super::parse_polynomial) to the identical coefficients.
pub fn format_polynomial(p: &LaurentPolynomial) -> String {
    let mut out = String::new();
    for (i, (e, c)) in p.terms().rev().enumerate() {
        let (negative, body) = term(c, e);
        match (i, negative) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
