//! Distributions on `t > 0` whose Laplace transforms are Prabhakar functions.
//!
//! `R^ν_{α,μ}` has density `(1/Γ(μ)) {I^ν f_α(·|t)}(1) t^{μ-1}`; for base
//! parameters `(α, β, γ, θ)` this is `Q` (mass `1/Γ(β+θ)`), and `P = Γ(β+θ) Q`
//! is a probability law with transform `Γ(β+θ) E^{γ+θ/α}_{α,β+θ}(-λ)`.
//! The Pollard law `P_α` is `(α, 1, 1, 0)` and the generalised
//! Mittag-Leffler law `P_{α,θ}` is `(α, 1, 1, θ)`.

use rand::Rng;
use rand_distr::{Beta, Distribution, Gamma};

use crate::error::{Error, Result};
use crate::fracint::{rl_stable_standard, RlTable};
use crate::mixture::{base_to_composite, BaseParams, MixtureParams};
use crate::mlf::prabhakar_value;
use crate::numerics::interp::MonotoneCubic;
use crate::numerics::{integrate, integrate_semiinf_scaled, ln_gamma, DecayHint, Endpoints, NumResult, QuadSpec};
use crate::stable::{standard_kanter, zolotarev_a0, zolotarev_excess, StandardStable};

fn is_variant_b(alpha: f64, nu: f64) -> bool {
    (nu - (1.0 - alpha)).abs() <= 1e-12
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0) || t.is_nan() {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    Ok(())
}

/// `ln` of the `R` density from `ln {I^ν f_α}(t^{-1/α})`.
fn ln_r_density(m: &MixtureParams, t: f64, ln_g: f64) -> f64 {
    (m.mu - 1.0 + (m.nu - 1.0) / m.alpha) * t.ln() + ln_g - ln_gamma(m.mu)
}

/// `α = 1`: `(1/Γ(μ)) h_ν(1-t) t^{μ-1}` on `(0, 1)`.
fn ln_r_density_unit(m: &MixtureParams, t: f64) -> f64 {
    if t >= 1.0 {
        return f64::NEG_INFINITY;
    }
    (m.nu - 1.0) * (-t).ln_1p() - ln_gamma(m.nu) + (m.mu - 1.0) * t.ln() - ln_gamma(m.mu)
}

fn degenerate_atom() -> Error {
    Error::Degenerate("alpha = 1 with beta = alpha*gamma is a point mass at t = 1".into())
}

/// `ln {I^ν f_α}(y)` without tables: the density itself for `ν = 0`,
/// `y f_α(y)/α` for `ν = 1 - α`, an RL quadrature otherwise.
fn ln_rl_direct(alpha: f64, nu: f64, y: f64, spec: &QuadSpec) -> Result<f64> {
    if nu == 0.0 || is_variant_b(alpha, nu) {
        let lf = StandardStable::new(alpha)?.ln_pdf(y, spec)?;
        return Ok(if nu == 0.0 { lf } else { y.ln() + lf - alpha.ln() });
    }
    Ok(rl_stable_standard(alpha, nu, y, spec)?.value.ln())
}

/// Density of `Q^γ_{α,β,θ}` at `t`.
pub fn q_density(b: &BaseParams, t: f64, spec: &QuadSpec) -> Result<f64> {
    Ok(ln_q_density(b, t, spec)?.exp())
}

fn ln_q_density(b: &BaseParams, t: f64, spec: &QuadSpec) -> Result<f64> {
    check_t(t)?;
    let m = base_to_composite(b)?;
    if m.alpha == 1.0 {
        if m.nu == 0.0 {
            return Err(degenerate_atom());
        }
        return Ok(ln_r_density_unit(&m, t));
    }
    let ln_g = ln_rl_direct(m.alpha, m.nu, t.powf(-1.0 / m.alpha), spec)?;
    Ok(ln_r_density(&m, t, ln_g))
}

/// Density of the probability law `P^γ_{α,β,θ}` at `t`.
pub fn p_density(b: &BaseParams, t: f64, spec: &QuadSpec) -> Result<f64> {
    Ok((ln_q_density(b, t, spec)? + ln_gamma(b.beta + b.theta)).exp())
}

fn ln_moment(b: &BaseParams, q: f64) -> f64 {
    let mu = b.mu();
    ln_gamma(b.beta + b.theta) + ln_gamma(mu + q) - ln_gamma(mu) - ln_gamma(b.beta + b.alpha * q + b.theta)
}

/// `∫ t^n dP`.
pub fn p_moment(b: &BaseParams, n: u32) -> Result<f64> {
    b.validate()?;
    Ok(ln_moment(b, n as f64).exp())
}

/// `Γ(β+θ) E^{γ+θ/α}_{α,β+θ}(-λ)`, the Laplace transform of `P`.
pub fn p_laplace_closed(b: &BaseParams, lambda: f64, spec: &QuadSpec) -> Result<f64> {
    p_tilted_closed(b, 0.0, lambda, spec)
}

fn p_tilted_closed(b: &BaseParams, q: f64, lambda: f64, spec: &QuadSpec) -> Result<f64> {
    b.validate()?;
    let mu = b.mu();
    if !(q > -mu) {
        return Err(Error::Domain(format!("q must exceed -gamma-theta/alpha = {}, got {q}", -mu)));
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Parameter(format!("lambda must be non-negative, got {lambda}")));
    }
    let p = crate::mlf::PrabhakarTriple::new(b.alpha, b.beta + b.alpha * q + b.theta, mu + q)?;
    let scale = (ln_gamma(b.beta + b.theta) + ln_gamma(mu + q) - ln_gamma(mu)).exp();
    Ok(scale * prabhakar_value(&p, -lambda, spec)?)
}

/// `∫ e^{-λt} t^q dP` from the closed form, checked against quadrature to `1e-6`.
pub fn p_tilted_laplace(b: &BaseParams, q: f64, lambda: f64, spec: &QuadSpec) -> Result<f64> {
    let closed = p_tilted_closed(b, q, lambda, spec)?;
    let numeric = PollardLaw::new(*b, spec)?.expect(q, lambda, spec)?.value;
    if (closed - numeric).abs() > 1e-6 * (1.0 + closed.abs()) {
        return Err(Error::Mismatch { what: "tilted Laplace transform", left: closed, right: numeric });
    }
    Ok(closed.max(0.0))
}

/// `P_α(t) = 1 - F_α(t^{-1/α})`.
pub fn pollard_cdf(alpha: f64, t: f64, spec: &QuadSpec) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("pollard_cdf needs 0 < alpha < 1, got {alpha}")));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("t must be non-negative, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    StandardStable::new(alpha)?.sf(t.powf(-1.0 / alpha), spec)
}

/// Density of `P_{α,θ}`, `Γ(1+θ)/Γ(1+θ/α) (1/α) f_α(t^{-1/α}) t^{(θ-1)/α-1}`.
pub fn gml_density(alpha: f64, theta: f64, t: f64) -> Result<f64> {
    if !(theta > -alpha) {
        return Err(Error::Domain(format!("theta must exceed -alpha = {}, got {theta}", -alpha)));
    }
    p_density(&BaseParams::new(alpha, 1.0, 1.0, theta)?, t, &QuadSpec::default())
}

#[derive(Debug, Clone)]
enum Kernel {
    /// `ν = 0`: the density table.
    Density(RlTable),
    /// `ν = 1 - α`: `y f_α(y)/α` from the density table.
    Shifted(RlTable),
    Rl(RlTable),
    Unit,
}

/// The three-parameter law `R^ν_{α,μ}` with tabulated density.
#[derive(Debug, Clone)]
pub struct MixtureLawR {
    params: MixtureParams,
    kernel: Kernel,
}

impl MixtureLawR {
    /// Fails with `Degenerate` at `α = 1, ν = 0` (a point mass).
    pub fn new(params: MixtureParams, spec: &QuadSpec) -> Result<Self> {
        let m = MixtureParams::new(params.alpha, params.nu, params.mu)?;
        let kernel = if m.alpha == 1.0 {
            if m.nu == 0.0 {
                return Err(degenerate_atom());
            }
            Kernel::Unit
        } else if m.nu == 0.0 {
            Kernel::Density(RlTable::new(m.alpha, 0.0, spec)?)
        } else if is_variant_b(m.alpha, m.nu) {
            Kernel::Shifted(RlTable::new(m.alpha, 0.0, spec)?)
        } else {
            Kernel::Rl(RlTable::new(m.alpha, m.nu, spec)?)
        };
        Ok(Self { params: m, kernel })
    }

    pub fn params(&self) -> MixtureParams {
        self.params
    }

    pub fn ln_density(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return f64::NEG_INFINITY;
        }
        let m = &self.params;
        let y = || t.powf(-1.0 / m.alpha);
        let ln_g = match &self.kernel {
            Kernel::Unit => return ln_r_density_unit(m, t),
            Kernel::Density(tab) | Kernel::Rl(tab) => tab.ln_eval(y()),
            Kernel::Shifted(tab) => {
                let y = y();
                y.ln() + tab.ln_eval(y) - m.alpha.ln()
            }
        };
        if ln_g == f64::NEG_INFINITY {
            return ln_g;
        }
        ln_r_density(m, t, ln_g)
    }

    pub fn density(&self, t: f64) -> f64 {
        self.ln_density(t).exp()
    }

    /// Leading power of the density at the origin.
    fn origin_exponent(&self) -> f64 {
        let m = &self.params;
        if m.nu == 0.0 { m.mu } else { m.mu - 1.0 }
    }

    /// `∫ t^q e^{-λt} dR`, with `scale` the typical size of `t`.
    pub fn expect(&self, q: f64, lambda: f64, scale: f64, spec: &QuadSpec) -> Result<NumResult> {
        let f = |t: f64| {
            let ld = self.ln_density(t);
            if ld == f64::NEG_INFINITY { 0.0 } else { (q * t.ln() - lambda * t + ld).exp() }
        };
        let origin = self.origin_exponent() + q;
        if let Kernel::Unit = self.kernel {
            return integrate(f, 0.0, 1.0, spec, Endpoints::both(origin, self.params.nu - 1.0));
        }
        let hint = if lambda > 0.0 {
            DecayHint::Exponential { rate: lambda }
        } else {
            DecayHint::PowerLaw { exponent: -2.0 }
        };
        integrate_semiinf_scaled(f, spec, hint, Some(origin), scale)
    }

    /// `∫_a^b dR`.
    pub fn mass_between(&self, a: f64, b: f64, spec: &QuadSpec) -> Result<NumResult> {
        let f = |t: f64| self.density(t);
        if a <= 0.0 {
            integrate(f, 0.0, b, spec, Endpoints::left(self.origin_exponent()))
        } else {
            integrate(f, a, b, spec, Endpoints::SMOOTH)
        }
    }
}

/// The four-parameter law `P^γ_{α,β,θ}`, with `Q = P / Γ(β+θ)`.
#[derive(Debug, Clone)]
pub struct PollardLaw {
    base: BaseParams,
    /// `None` for the point mass at `t = 1`.
    law: Option<MixtureLawR>,
    ln_norm: f64,
}

impl PollardLaw {
    pub fn new(base: BaseParams, spec: &QuadSpec) -> Result<Self> {
        let m = base_to_composite(&base)?;
        let law = match MixtureLawR::new(m, spec) {
            Ok(l) => Some(l),
            Err(Error::Degenerate(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(Self { base, law, ln_norm: ln_gamma(base.beta + base.theta) })
    }

    pub fn base(&self) -> BaseParams {
        self.base
    }

    pub fn is_point_mass(&self) -> bool {
        self.law.is_none()
    }

    fn law(&self) -> Result<&MixtureLawR> {
        self.law.as_ref().ok_or_else(degenerate_atom)
    }

    pub fn q_density(&self, t: f64) -> Result<f64> {
        Ok(self.law()?.density(t))
    }

    pub fn p_density(&self, t: f64) -> Result<f64> {
        Ok((self.law()?.ln_density(t) + self.ln_norm).exp())
    }

    pub fn moment(&self, n: u32) -> f64 {
        ln_moment(&self.base, n as f64).exp()
    }

    /// `∫ t^q e^{-λt} dP` by quadrature.
    pub fn expect(&self, q: f64, lambda: f64, spec: &QuadSpec) -> Result<NumResult> {
        let Some(law) = &self.law else {
            return Ok(NumResult::exact((-lambda).exp()));
        };
        let scale = ln_moment(&self.base, 1.0).exp();
        Ok(law.expect(q, lambda, scale, spec)?.scale(self.ln_norm.exp()))
    }

    pub fn mass(&self, spec: &QuadSpec) -> Result<NumResult> {
        self.expect(0.0, 0.0, spec)
    }

    /// `P(T <= t)` by quadrature.
    pub fn cdf(&self, t: f64, spec: &QuadSpec) -> Result<f64> {
        let Some(law) = &self.law else {
            return Ok(if t >= 1.0 { 1.0 } else { 0.0 });
        };
        if t <= 0.0 {
            return Ok(0.0);
        }
        let v = law.mass_between(0.0, t, spec)?.value * self.ln_norm.exp();
        Ok(v.clamp(0.0, 1.0))
    }
}

/// Largest `θ/α` for which the tilted sampler is used.
pub const MAX_TILT: f64 = 5.0;
const MAX_REJECTIONS: usize = 1_000_000;
const CDF_NODES: usize = 1024;
const TAIL_QUANTILE: f64 = 1e-6;

/// Which sampling strategy a [`PollardSampler`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerRoute {
    PointMass,
    Beta,
    Transform,
    TiltedRejection,
    InverseCdf,
}

#[derive(Debug, Clone)]
enum Strategy {
    PointMass,
    Beta(Beta<f64>),
    Transform,
    /// `E ~ Gamma(1+c)`, `U ∝ A(U)^{-c}` by rejection under `A0^{-c}`.
    Tilted { c: f64, energy: Gamma<f64> },
    InverseCdf(InverseCdf),
}

/// Draws from `P^γ_{α,β,θ}`.
///
/// `(α, 1, 1, 0)` uses `T = S^{-α}` with `S` standard stable. `(α, 1, 1, θ)`
/// with `0 < θ/α <= 5` tilts Kanter's representation `T = (E/A(U))^{1-α}` by
/// `T^{θ/α}`, which factors into a gamma energy and a rejection step on `U`.
/// Everything else inverts a tabulated CDF.
#[derive(Debug, Clone)]
pub struct PollardSampler {
    alpha: f64,
    strategy: Strategy,
}

impl PollardSampler {
    pub fn new(b: &BaseParams, spec: &QuadSpec) -> Result<Self> {
        let m = base_to_composite(b)?;
        let alpha = m.alpha;
        let pollard_shape = b.beta == 1.0 && b.gamma == 1.0;
        let strategy = if alpha == 1.0 {
            if m.nu == 0.0 {
                Strategy::PointMass
            } else {
                Strategy::Beta(
                    Beta::new(m.mu, m.nu).map_err(|e| Error::Sampling(format!("beta sampler: {e}")))?,
                )
            }
        } else if pollard_shape && b.theta == 0.0 {
            Strategy::Transform
        } else if pollard_shape && b.theta > 0.0 && b.theta / alpha <= MAX_TILT {
            let c = (1.0 - alpha) * b.theta / alpha;
            let energy = Gamma::new(1.0 + c, 1.0).map_err(|e| Error::Sampling(format!("gamma sampler: {e}")))?;
            Strategy::Tilted { c, energy }
        } else {
            Strategy::InverseCdf(InverseCdf::new(&PollardLaw::new(*b, spec)?, spec)?)
        };
        Ok(Self { alpha, strategy })
    }

    pub fn route(&self) -> SamplerRoute {
        match self.strategy {
            Strategy::PointMass => SamplerRoute::PointMass,
            Strategy::Beta(_) => SamplerRoute::Beta,
            Strategy::Transform => SamplerRoute::Transform,
            Strategy::Tilted { .. } => SamplerRoute::TiltedRejection,
            Strategy::InverseCdf(_) => SamplerRoute::InverseCdf,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        let a = self.alpha;
        match &self.strategy {
            Strategy::PointMass => Ok(1.0),
            Strategy::Beta(d) => Ok(d.sample(rng)),
            Strategy::Transform => Ok(standard_kanter(a, rng).powf(-a)),
            Strategy::Tilted { c, energy } => {
                for _ in 0..MAX_REJECTIONS {
                    let u = rng.random::<f64>() * std::f64::consts::PI;
                    if u == 0.0 {
                        continue;
                    }
                    // (A0 / A(u))^c
                    let accept = (-c * zolotarev_excess(a, u).ln_1p()).exp();
                    if rng.random::<f64>() < accept {
                        let e = energy.sample(rng);
                        return Ok((e / (zolotarev_a0(a) * (1.0 + zolotarev_excess(a, u)))).powf(1.0 - a));
                    }
                }
                Err(Error::Sampling(format!(
                    "tilted rejection accepted nothing in {MAX_REJECTIONS} proposals; use the inverse-CDF route"
                )))
            }
            Strategy::InverseCdf(table) => Ok(table.quantile(rng.random::<f64>())),
        }
    }

    pub fn sample_n<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        (0..n).map(|_| self.sample(rng)).collect()
    }
}

/// `n` draws from `P^γ_{α,β,θ}`.
pub fn p_sample<R: Rng + ?Sized>(b: &BaseParams, n: usize, rng: &mut R) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Parameter("sample count must be at least 1".into()));
    }
    PollardSampler::new(b, &QuadSpec::default())?.sample_n(n, rng)
}

/// Quantile function from the CDF on log-spaced nodes between the
/// `1e-6` and `1 - 1e-6` quantiles, interpolated monotonically in
/// `(F, ln t)` and extended by the end slopes in `(ln F, ln t)` and
/// `(ln(1-F), ln t)`.
#[derive(Debug, Clone)]
struct InverseCdf {
    interp: MonotoneCubic,
    ln_t: Vec<f64>,
    cdf: Vec<f64>,
}

impl InverseCdf {
    fn new(law: &PollardLaw, spec: &QuadSpec) -> Result<Self> {
        let r = law.law()?;
        let norm = law.ln_norm.exp();
        let mean = law.moment(1);
        let lower = |t: f64| Ok::<f64, Error>(r.mass_between(0.0, t, spec)?.value * norm);
        let upper = |t: f64| -> Result<f64> {
            let tail = integrate_semiinf_scaled(|s| r.density(t + s), spec, DecayHint::PowerLaw { exponent: -2.0 }, None, t);
            Ok(tail?.value * norm)
        };
        let t_lo = bracket_level(&lower, mean, TAIL_QUANTILE, false)?;
        let t_hi = bracket_level(&upper, mean, TAIL_QUANTILE, true)?;
        let (l0, l1) = (t_lo.ln(), t_hi.ln());
        let ln_t: Vec<f64> = (0..CDF_NODES).map(|i| l0 + (l1 - l0) * i as f64 / (CDF_NODES - 1) as f64).collect();
        let mut cdf = Vec::with_capacity(CDF_NODES);
        let mut acc = lower(t_lo)?;
        cdf.push(acc);
        for w in ln_t.windows(2) {
            acc += r.mass_between(w[0].exp(), w[1].exp(), spec)?.value * norm;
            cdf.push(acc);
        }
        let total = acc + upper(t_hi)?;
        let mut xs = Vec::with_capacity(CDF_NODES);
        let mut ys = Vec::with_capacity(CDF_NODES);
        for (f, lt) in cdf.iter().zip(&ln_t) {
            let f = f / total;
            if xs.last().is_none_or(|&last| f > last) {
                xs.push(f);
                ys.push(*lt);
            }
        }
        if xs.len() < 4 {
            return Err(Error::Sampling("CDF table collapsed to fewer than four distinct nodes".into()));
        }
        Ok(Self { interp: MonotoneCubic::new(xs.clone(), ys.clone()), ln_t: ys, cdf: xs })
    }

    fn quantile(&self, u: f64) -> f64 {
        let n = self.cdf.len();
        let (f0, fn_) = (self.cdf[0], self.cdf[n - 1]);
        if u < f0 {
            let s = (self.ln_t[1] - self.ln_t[0]) / (self.cdf[1] / f0).ln();
            return (self.ln_t[0] + s * (u.max(f64::MIN_POSITIVE) / f0).ln()).exp();
        }
        if u > fn_ {
            let s = (self.ln_t[n - 1] - self.ln_t[n - 2]) / ((1.0 - fn_) / (1.0 - self.cdf[n - 2])).ln();
            return (self.ln_t[n - 1] + s * ((1.0 - u).max(f64::EPSILON) / (1.0 - fn_)).ln()).exp();
        }
        self.interp.eval(u).exp()
    }
}

/// `t` with `mass(t) = level`, by doubling from `start` and bisecting in
/// `ln t`; `mass` decreases in `t` when `decreasing`.
fn bracket_level<F: Fn(f64) -> Result<f64>>(mass: &F, start: f64, level: f64, decreasing: bool) -> Result<f64> {
    let beyond = |m: f64| m < level;
    let step = if decreasing { 2.0 } else { 0.5 };
    let (mut inside, mut outside) = (start, start);
    let mut found = false;
    for _ in 0..200 {
        outside *= step;
        if beyond(mass(outside)?) {
            found = true;
            break;
        }
        inside = outside;
    }
    if !found {
        return Err(Error::Sampling(format!("no {level:e} quantile bracket from t = {start}")));
    }
    let (mut a, mut b) = (inside.ln(), outside.ln());
    for _ in 0..40 {
        let mid = 0.5 * (a + b);
        if beyond(mass(mid.exp())?) {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(b.exp())
}

/// First failure of the alternating-sign test.
#[derive(Debug, Clone, PartialEq)]
pub struct CmViolation {
    pub order: usize,
    pub lambda: f64,
    /// `(-1)^k Δ^k f` at the offending node.
    pub value: f64,
    pub tolerance: f64,
}

/// Outcome of [`cm_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct CmReport {
    pub passed: bool,
    pub max_order: usize,
    pub spacing: f64,
    /// Per order, the smallest `(-1)^k Δ^k f + tol_k`.
    pub margins: Vec<f64>,
    pub violation: Option<CmViolation>,
    pub note: Option<String>,
}

/// Finite-difference test of complete monotonicity on a uniform grid:
/// `(-1)^k Δ^k f >= -tol_k`, `tol_k = 1e-8 (2/h)^k max|f|`, for
/// `k = 0..=max_order`. A necessary condition only.
pub fn cm_check<F: Fn(f64) -> f64>(f: F, lambda_grid: &[f64], max_order: usize) -> CmReport {
    let values: Vec<f64> = lambda_grid.iter().map(|&l| f(l)).collect();
    cm_check_values(&values, lambda_grid, max_order)
}

/// [`cm_check`] on precomputed values `f(λ_i)`.
pub fn cm_check_values(values: &[f64], lambda_grid: &[f64], max_order: usize) -> CmReport {
    let fail = |note: String, spacing: f64| CmReport {
        passed: false,
        max_order,
        spacing,
        margins: Vec::new(),
        violation: None,
        note: Some(note),
    };
    let n = lambda_grid.len();
    if n < max_order + 1 || n < 2 {
        return fail(format!("grid of {n} points cannot support order {max_order}"), f64::NAN);
    }
    let h = (lambda_grid[n - 1] - lambda_grid[0]) / (n - 1) as f64;
    let uniform = lambda_grid
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs().max(1.0));
    if !(h > 0.0) || !uniform {
        return fail("grid must be ascending with uniform spacing".into(), h);
    }
    if values.len() != n {
        return fail(format!("{} values for {n} grid points", values.len()), h);
    }
    let mut diff = values.to_vec();
    if diff.iter().any(|v| !v.is_finite()) {
        return fail("function is not finite on the grid".into(), h);
    }
    let fmax = diff.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut margins = Vec::with_capacity(max_order + 1);
    let mut violation = None;
    for k in 0..=max_order {
        if k > 0 {
            diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let tol = 1e-8 * (2.0 / h).powi(k as i32) * fmax;
        let mut margin = f64::INFINITY;
        for (i, d) in diff.iter().enumerate() {
            let v = sign * d;
            margin = margin.min(v + tol);
            if v < -tol && violation.is_none() {
                violation = Some(CmViolation { order: k, lambda: lambda_grid[i], value: v, tolerance: tol });
            }
        }
        margins.push(margin);
    }
    CmReport { passed: violation.is_none(), max_order, spacing: h, margins, violation, note: None }
}

/// `λ_i = i h`, `i = 1..=n`, spanning `(0, upper]`.
pub fn uniform_grid(upper: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| upper * i as f64 / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gamma;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn bp(a: f64, b: f64, g: f64, th: f64) -> BaseParams {
        BaseParams::new(a, b, g, th).unwrap()
    }

    /// `α = 1/2` Pollard law: half-normal with `p(t) = e^{-t²/4}/√π`.
    fn half_normal(t: f64) -> f64 {
        (-t * t / 4.0).exp() / PI.sqrt()
    }

    fn grid() -> Vec<BaseParams> {
        vec![
            bp(0.5, 1.0, 1.0, 0.0),
            bp(0.5, 0.5, 1.0, 0.0),
            bp(0.3, 1.0, 1.0, 0.4),
            bp(0.7, 1.5, 1.0, -0.3),
            bp(0.9, 2.0, 1.5, 0.7),
            bp(0.6, 1.2, 0.8, 0.3),
            bp(1.0, 3.0, 1.5, 0.5),
        ]
    }

    #[test]
    fn levy_values() {
        let spec = QuadSpec::default();
        let q = q_density(&bp(0.5, 1.0, 1.0, 0.0), 1.0, &spec).unwrap();
        assert!(rel(q, 0.439_391_289_467_722_4) < 1e-12, "{q}");
        let q = q_density(&bp(0.5, 0.5, 1.0, 0.0), 1.0, &spec).unwrap();
        assert!(rel(q, 0.219_695_644_733_861_2) < 1e-12, "{q}");
        for t in [0.1, 0.7, 2.0, 5.0] {
            let p = p_density(&bp(0.5, 1.0, 1.0, 0.0), t, &spec).unwrap();
            assert!(rel(p, half_normal(t)) < 1e-11, "{t}: {p}");
        }
    }

    #[test]
    fn beta_reduction() {
        let spec = QuadSpec::default();
        for (b, g, th) in [(2.0, 1.0, 0.0), (3.0, 1.5, 0.5)] {
            let (a1, b1) = (g + th, b - g);
            let c = gamma(a1 + b1) / (gamma(a1) * gamma(b1));
            let law = PollardLaw::new(bp(1.0, b, g, th), &spec).unwrap();
            for t in [0.05f64, 0.3, 0.5, 0.9] {
                let want = c * t.powf(a1 - 1.0) * (1.0f64 - t).powf(b1 - 1.0);
                assert!(rel(p_density(&bp(1.0, b, g, th), t, &spec).unwrap(), want) < 1e-10);
                assert!(rel(law.p_density(t).unwrap(), want) < 1e-10);
            }
            assert_eq!(p_density(&bp(1.0, b, g, th), 1.5, &spec).unwrap(), 0.0);
        }
        assert!(matches!(q_density(&bp(1.0, 1.0, 1.0, 0.0), 0.5, &spec), Err(Error::Degenerate(_))));
    }

    #[test]
    fn mass_and_moments() {
        let spec = QuadSpec::default();
        for b in grid() {
            let law = PollardLaw::new(b, &spec).unwrap();
            let mass = law.mass(&spec).unwrap().value;
            assert!((mass - 1.0).abs() < 1e-8, "{b:?}: mass {mass}");
            for n in 1..=3 {
                let num = law.expect(n as f64, 0.0, &spec).unwrap().value;
                let exact = p_moment(&b, n).unwrap();
                assert!(rel(num, exact) < 1e-6, "{b:?} n={n}: {num} vs {exact}");
            }
        }
        assert!(rel(p_moment(&bp(0.5, 1.0, 1.0, 0.0), 1).unwrap(), 2.0 / PI.sqrt()) < 1e-14);
        assert_eq!(p_moment(&bp(0.7, 2.0, 1.5, 0.2), 0).unwrap(), 1.0);
    }

    #[test]
    fn q_mass_is_reciprocal_gamma() {
        let spec = QuadSpec::default();
        let b = bp(0.7, 1.5, 1.0, 0.4);
        let law = PollardLaw::new(b, &spec).unwrap();
        let f = |t: f64| law.q_density(t).unwrap();
        let m = integrate(f, 0.0, 1.0, &spec, Endpoints::left(b.mu() - 1.0)).unwrap().value
            + integrate_semiinf_scaled(|s| f(1.0 + s), &spec, DecayHint::PowerLaw { exponent: -2.0 }, None, 1.0)
                .unwrap()
                .value;
        assert!(rel(m, 1.0 / gamma(b.beta + b.theta)) < 1e-8, "{m}");
    }

    #[test]
    fn tabulated_matches_direct() {
        let spec = QuadSpec::default();
        for b in grid() {
            let law = PollardLaw::new(b, &spec).unwrap();
            let r = MixtureLawR::new(base_to_composite(&b).unwrap(), &spec).unwrap();
            for t in [0.2, 0.8, 1.5, 3.0] {
                let direct = q_density(&b, t, &spec).unwrap();
                let tab = law.q_density(t).unwrap();
                assert_eq!(tab, r.density(t));
                assert!((tab - direct).abs() <= 1e-10 * (direct + 1e-300), "{b:?} t={t}: {tab} vs {direct}");
            }
        }
    }

    #[test]
    fn tilted_transform() {
        let spec = QuadSpec::default();
        let b = bp(0.5, 1.0, 1.0, 0.0);
        let v = p_tilted_laplace(&b, 0.0, 1.0, &spec).unwrap();
        assert!(rel(v, crate::mlf::ml1(0.5, -1.0).unwrap()) < 1e-12);
        let v = p_tilted_laplace(&b, 0.5, 1.0, &spec).unwrap();
        let num = integrate_semiinf_scaled(
            |t| t.sqrt() * (-t).exp() * half_normal(t),
            &spec,
            DecayHint::Exponential { rate: 1.0 },
            Some(0.5),
            1.0,
        )
        .unwrap()
        .value;
        assert!((v - num).abs() < 1e-9, "{v} vs {num}");
        for b in grid() {
            let m = p_tilted_laplace(&b, 2.0, 0.0, &spec).unwrap();
            assert!(rel(m, p_moment(&b, 2).unwrap()) < 1e-12);
            p_tilted_laplace(&b, 0.3, 2.0, &spec).unwrap();
        }
        assert!(matches!(p_tilted_laplace(&b, -1.5, 1.0, &spec), Err(Error::Domain(_))));
    }

    #[test]
    fn pollard_cdf_values() {
        let spec = QuadSpec::default();
        let v = pollard_cdf(0.5, 1.0, &spec).unwrap();
        assert!((v - libm::erf(0.5)).abs() < 1e-13, "{v}");
        for t in [0.1, 0.5, 2.0, 6.0] {
            assert!((pollard_cdf(0.5, t, &spec).unwrap() - libm::erf(t / 2.0)).abs() < 1e-12);
        }
        assert!(pollard_cdf(0.5, 1e3, &spec).unwrap() == 1.0);
        let b = bp(0.7, 1.0, 1.0, 0.0);
        let mut prev = 0.0;
        for i in 1..40 {
            let t = 0.1 * i as f64;
            let c = pollard_cdf(0.7, t, &spec).unwrap();
            assert!(c >= prev);
            prev = c;
            let h = 1e-4 * t;
            let d = (pollard_cdf(0.7, t + h, &spec).unwrap() - pollard_cdf(0.7, t - h, &spec).unwrap()) / (2.0 * h);
            assert!((d - p_density(&b, t, &spec).unwrap()).abs() < 1e-6, "t={t}");
        }
        let law = PollardLaw::new(b, &spec).unwrap();
        for t in [0.3, 1.0, 2.5] {
            assert!((law.cdf(t, &spec).unwrap() - pollard_cdf(0.7, t, &spec).unwrap()).abs() < 1e-7);
        }
    }

    #[test]
    fn gml_identities() {
        let spec = QuadSpec::default();
        for (a, th) in [(0.5, 0.0), (0.5, 0.8), (0.7, -0.4), (0.3, 2.0)] {
            for t in [0.3, 1.0, 2.2] {
                let g = gml_density(a, th, t).unwrap();
                assert_eq!(g, p_density(&bp(a, 1.0, 1.0, th), t, &spec).unwrap());
                let tilt = gamma(1.0 + th) / gamma(1.0 + th / a) * t.powf(th / a)
                    * p_density(&bp(a, 1.0, 1.0, 0.0), t, &spec).unwrap();
                assert!(rel(g, tilt) < 1e-12, "{a},{th},{t}");
            }
            let law = PollardLaw::new(bp(a, 1.0, 1.0, th), &spec).unwrap();
            for n in 1..=2 {
                let want = gamma(1.0 + th) * gamma(1.0 + n as f64 + th / a)
                    / (gamma(1.0 + th / a) * gamma(1.0 + a * n as f64 + th));
                assert!(rel(law.expect(n as f64, 0.0, &spec).unwrap().value, want) < 1e-7);
            }
        }
        assert!(matches!(gml_density(0.5, -0.5, 1.0), Err(Error::Domain(_))));
    }

    fn mean_and_se(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, (v / n).sqrt())
    }

    #[test]
    fn samplers_match_moments() {
        let spec = QuadSpec::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (b, route) in [
            (bp(0.5, 1.0, 1.0, 0.0), SamplerRoute::Transform),
            (bp(0.5, 1.0, 1.0, 0.6), SamplerRoute::TiltedRejection),
            (bp(0.8, 1.0, 1.0, 2.0), SamplerRoute::TiltedRejection),
            (bp(0.5, 1.0, 1.0, -0.2), SamplerRoute::InverseCdf),
            (bp(0.6, 1.2, 0.8, 0.3), SamplerRoute::InverseCdf),
            (bp(1.0, 3.0, 1.5, 0.5), SamplerRoute::Beta),
        ] {
            let s = PollardSampler::new(&b, &spec).unwrap();
            assert_eq!(s.route(), route);
            let xs = s.sample_n(40_000, &mut rng).unwrap();
            let (m, se) = mean_and_se(&xs);
            let want = p_moment(&b, 1).unwrap();
            assert!((m - want).abs() < 4.0 * se, "{b:?}: {m} vs {want} (se {se})");
            let lt: Vec<f64> = xs.iter().map(|t| (-t).exp()).collect();
            let (m, se) = mean_and_se(&lt);
            let want = p_laplace_closed(&b, 1.0, &spec).unwrap();
            assert!((m - want).abs() < 4.0 * se, "{b:?}: {m} vs {want} (se {se})");
        }
        let atom = PollardSampler::new(&bp(1.0, 1.0, 1.0, 0.3), &spec).unwrap();
        assert_eq!(atom.sample(&mut rng).unwrap(), 1.0);
        assert!(p_sample(&bp(0.5, 1.0, 1.0, 0.0), 0, &mut rng).is_err());
    }

    #[test]
    fn inverse_cdf_quantiles() {
        let spec = QuadSpec::default();
        let law = PollardLaw::new(bp(0.5, 1.0, 1.0, -0.2), &spec).unwrap();
        let inv = InverseCdf::new(&law, &spec).unwrap();
        for u in [1e-7, 1e-3, 0.1, 0.5, 0.9, 0.999] {
            let t = inv.quantile(u);
            let c = law.cdf(t, &spec).unwrap();
            assert!((c - u).abs() < 1e-6 + 1e-3 * u.min(1.0 - u), "{u}: {c}");
        }
    }

    #[test]
    fn cm_checks() {
        let g = uniform_grid(10.0, 100);
        assert!(cm_check(|l| (-l).exp(), &g, 6).passed);
        let r = cm_check(f64::cos, &g, 5);
        assert!(!r.passed && r.violation.unwrap().order <= 2);
        let spec = QuadSpec::default();
        for b in grid() {
            let r = cm_check(|l| p_laplace_closed(&b, l, &spec).unwrap(), &g, 5);
            assert!(r.passed, "{b:?}: {r:?}");
        }
        assert!(!cm_check(f64::exp, &[0.1, 0.2, 0.4], 1).passed);
        assert!(cm_check(|l| -l, &g, 1).violation.unwrap().order == 0);
    }
}
