//! Prabhakar (three-parameter Mittag-Leffler) functions built from one-sided
//! stable densities.
//!
//! The kernel `x^(b-1) E^g_{a,b}(-lambda x^a)` is evaluated three independent
//! ways: its power series, numeric Laplace inversion of its closed-form
//! transform, and a gamma-weighted mixture over the scale of Riemann-Liouville
//! fractional integrals of one-sided stable densities. The mixture also
//! defines the four-parameter Pollard distribution, whose density, moments,
//! tilted transforms and samplers live in [`distributions`].
//!
//! Module map:
//!
//! | module | contents |
//! |---|---|
//! | [`numerics`] | log-gamma, adaptive Gauss-Kronrod, semi-infinite truncation, Laplace transform and Talbot inversion |
//! | [`stable`] | one-sided stable law: density, CDF, sampler, infinite-divisibility residual |
//! | [`fracint`] | Riemann-Liouville integrals, including stable-density fast paths |
//! | [`mlf`] | Mittag-Leffler and Prabhakar series, kernels and transforms |
//! | [`mixture`] | gamma mixtures of fractional integrals |
//! | [`distributions`] | Pollard family, generalised Mittag-Leffler law, sampling, complete-monotonicity check |
//! | [`cli`] | batch front-end used by the `prabhakar` binary |

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod distributions;
pub mod error;
pub mod fracint;
pub mod mixture;
pub mod mlf;
pub mod numerics;
pub mod stable;

pub use error::{Error, Result};
