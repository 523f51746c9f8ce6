//! Laurent polynomials `P(z) ∈ ℂ[z, z⁻¹]`.
//!
//! A [`LaurentPolynomial`] is kept in canonical trimmed form: the coefficients
//! at the lowest and highest exponent are nonzero, and the zero polynomial has
//! no coefficients at all.

mod circle;
mod format;
mod parse;
mod roots;

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

pub use circle::{
    circle_roots, circle_roots_with, classify_circle_roots, CircleEntry, CircleRoot, CircleRootSet,
    WindowPolicy, DEFAULT_CIRCLE_TOLERANCE, DEFAULT_LOCAL_MODEL_EPSILON,
};
pub use parse::parse_polynomial;
pub use roots::{find_roots, find_roots_with, Root, MAX_ROOT_ITERATIONS, ROOT_RESIDUAL_TOLERANCE};
pub(crate) use roots::deflated_lift;

/// A Laurent polynomial with complex `f64` coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentPolynomial {
    /// Exponent of `coeffs[0]`.
    lowest: i32,
    /// Dense coefficients from `lowest` upwards; trimmed on both ends.
    coeffs: Vec<Complex64>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(c, 0)
    }

    /// `c·z^exponent`.
    pub fn monomial(c: Complex64, exponent: i32) -> Self {
        Self::from_dense(exponent, vec![c])
    }

    /// Build from coefficients listed from `lowest` upwards. Zero coefficients
    /// at either end are trimmed.
    pub fn from_dense(lowest: i32, coeffs: Vec<Complex64>) -> Self {
        let mut p = LaurentPolynomial { lowest, coeffs };
        p.trim();
        p
    }

    /// Build from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, Complex64)>,
    {
        let mut map: BTreeMap<i32, Complex64> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_default() += c;
        }
        map.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        let (Some(&lo), Some(&hi)) = (map.keys().next(), map.keys().next_back()) else {
            return Self::zero();
        };
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo) as usize + 1];
        for (e, c) in map {
            coeffs[(e - lo) as usize] = c;
        }
        Self::from_dense(lo, coeffs)
    }

    /// Ordinary polynomial from ascending real coefficients.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::from_dense(0, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    fn trim(&mut self) {
        let zero = Complex64::new(0.0, 0.0);
        while self.coeffs.last() == Some(&zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| **c == zero).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.lowest += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.lowest = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient (`0` for the zero polynomial).
    pub fn min_exponent(&self) -> i32 {
        self.lowest
    }

    /// Highest exponent with a nonzero coefficient (`0` for the zero polynomial).
    pub fn max_exponent(&self) -> i32 {
        if self.is_zero() {
            0
        } else {
            self.lowest + self.coeffs.len() as i32 - 1
        }
    }

    /// Coefficient of `z^exponent`.
    pub fn coefficient(&self, exponent: i32) -> Complex64 {
        let idx = exponent as i64 - self.lowest as i64;
        if idx < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs.get(idx as usize).copied().unwrap_or_default()
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(move |(i, c)| (self.lowest + i as i32, *c))
    }

    /// Sparse exponent → coefficient view.
    pub fn to_map(&self) -> BTreeMap<i32, Complex64> {
        self.terms().collect()
    }

    /// `Σ |c_e|`.
    pub fn coefficient_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.terms().count()
    }

    /// `P(z)`: Horner on the nonnegative part plus Horner in `1/z` on the
    /// negative part.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if self.lowest < 0 && z == Complex64::new(0.0, 0.0) {
            return Err(Error::Domain(
                "cannot evaluate a polynomial with negative exponents at z = 0".into(),
            ));
        }
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        if self.is_zero() {
            return zero;
        }
        let hi = self.max_exponent();
        let mut acc = zero;
        if hi >= 0 {
            let start = self.lowest.max(0);
            for e in (start..=hi).rev() {
                acc = acc * z + self.coefficient(e);
            }
            if start > 0 {
                acc *= z.powi(start);
            }
        }
        if self.lowest < 0 {
            let w = z.inv();
            let top = hi.min(-1);
            // c_{-1} w + c_{-2} w^2 + ... with Horner from the most negative exponent.
            let mut neg = zero;
            for e in self.lowest..=top {
                neg = neg * w + self.coefficient(e);
            }
            neg *= w.powi(-top);
            acc += neg;
        }
        acc
    }

    /// `f(t) = P(e^{2πit})`.
    pub fn evaluate_on_circle(&self, t: f64) -> Complex64 {
        self.eval_unchecked(unit(t))
    }

    /// Term-wise `e·c·z^{e-1}`.
    pub fn derivative(&self) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(
            self.terms()
                .filter(|(e, _)| *e != 0)
                .map(|(e, c)| (e - 1, c * e as f64)),
        )
    }

    /// `z^{-e_min}·P(z)` as ascending ordinary coefficients (nonzero constant
    /// term), together with `m = max(0, -e_min)`, the shift that clears
    /// negative exponents. When `e_min ≤ 0` the list is exactly `z^m·P`.
    pub fn to_ordinary(&self) -> Result<(Vec<Complex64>, u32)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok((self.coeffs.clone(), (-self.lowest).max(0) as u32))
    }

    /// Coefficients of the lift with the trivial `z^j` factor removed, i.e. the
    /// ordinary polynomial whose roots are the nonzero roots of `P`.
    pub(crate) fn root_polynomial(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `P(w·z)`.
    pub fn rotate_argument(&self, w: Complex64) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(self.terms().map(|(e, c)| (e, c * w.powi(e))))
    }

    /// `P(1/z)`.
    pub fn reciprocal(&self) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(self.terms().map(|(e, c)| (-e, c)))
    }

    /// `z^m·P(z)`.
    pub fn shift(&self, m: i32) -> LaurentPolynomial {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPolynomial {
            lowest: self.lowest + m,
            coeffs: self.coeffs.clone(),
        }
    }

    /// `c·P(z)`.
    pub fn scale(&self, c: Complex64) -> LaurentPolynomial {
        LaurentPolynomial::from_dense(self.lowest, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, n: u32) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::constant(Complex64::new(1.0, 0.0));
        for _ in 0..n {
            out = &out * self;
        }
        out
    }
}

/// `e^{2πit}`.
pub(crate) fn unit(t: f64) -> Complex64 {
    let (s, c) = (TAU * t).sin_cos();
    Complex64::new(c, s)
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format::format_polynomial(self))
    }
}

pub use format::format_polynomial;

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: Self) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(self.terms().chain(rhs.terms()))
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: Self) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(self.terms().chain(rhs.terms().map(|(e, c)| (e, -c))))
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial::from_dense(self.lowest, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: Self) -> LaurentPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPolynomial::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        LaurentPolynomial::from_dense(self.lowest + rhs.lowest, out)
    }
}

/// Horner evaluation of ascending ordinary coefficients.
pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Divide ascending coefficients by `(z - root)`, dropping the remainder.
pub(crate) fn deflate(coeffs: &[Complex64], root: Complex64) -> Vec<Complex64> {
    let n = coeffs.len();
    if n <= 1 {
        return Vec::new();
    }
    let mut q = vec![Complex64::new(0.0, 0.0); n - 1];
    let mut acc = coeffs[n - 1];
    q[n - 2] = acc;
    for i in (1..n - 1).rev() {
        acc = coeffs[i] + acc * root;
        q[i - 1] = acc;
    }
    q
}

/// Taylor coefficients `p^{(j)}(c)/j!`, `j = 0..=count`, of ascending
/// coefficients at `c`.
pub(crate) fn taylor_at(coeffs: &[Complex64], c: Complex64, count: usize) -> Vec<Complex64> {
    let mut work = coeffs.to_vec();
    let mut out = Vec::with_capacity(count + 1);
    for _ in 0..=count {
        if work.is_empty() {
            out.push(Complex64::new(0.0, 0.0));
            continue;
        }
        out.push(horner(&work, c));
        work = deflate(&work, c);
    }
    out
}
