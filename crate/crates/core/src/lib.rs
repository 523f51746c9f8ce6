//! Higher Mahler measures of Laurent polynomials.
//!
//! The `k`-higher Mahler measure of a Laurent polynomial `P` is
//! `m_k(P) = ∫₀¹ log^k |P(e^{2πit})| dt`. As `k → ∞` the ratio `|m_k(P)|/k!`
//! tends to `(1/π) Σ 1/|P'(z_j)|`, the sum running over the roots of `P` on
//! the unit circle, and diverges when one of those roots is repeated.
//!
//! The crate is split into:
//!
//! * [`laurent`]: representation, parsing, evaluation and root location.
//! * [`measure`]: `m_k` by window-decomposed Gauss quadrature with an analytic
//!   tail, an independent double-exponential oracle, and Jensen's formula.
//! * [`asymptotics`]: the limit formula and convergence studies.
//! * [`cli`]: the `mahlerk` command-line front end.
//!
//! Inner loops run on rayon when the `parallel` feature is enabled (the
//! default). Reductions always happen in a fixed sequential order, so
//! [`Execution::Sequential`] and [`Execution::Parallel`] give bit-identical
//! results.

// `!(x > 0.0)` and friends are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
mod error;
pub mod laurent;
pub mod measure;
mod par;

pub use error::{Error, Result};
pub use par::Execution;

pub use num_complex::Complex64;
