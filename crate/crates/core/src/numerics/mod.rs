//! Shared numeric kernels.

mod gamma;
pub mod interp;
mod laplace;
mod quad;
pub mod series;

pub use gamma::{gamma, ln_abs_recip_gamma, ln_gamma, ln_sinc, log_gamma, recip_gamma, sin_pi};
pub use laplace::{inverse_laplace, inverse_laplace_checked, laplace_numeric};
pub use quad::{integrate, integrate_power_weight, integrate_semiinf, integrate_semiinf_scaled, DecayHint, Endpoints, NumResult, QuadSpec};
