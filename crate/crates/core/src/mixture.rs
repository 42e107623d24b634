//! Gamma mixtures of Riemann-Liouville integrals of stable densities,
//!
//! `M^ν_{α,μ}(x|λ) = (1/Γ(μ)) ∫_0^∞ {I^ν f_α(·|t)}(x) t^{μ-1} e^{-λt} dt`,
//!
//! which reproduce the Prabhakar kernel `x^{β+θ-1} E^{γ+θ/α}_{α,β+θ}(-λx^α)`
//! under `ν = β - αγ`, `μ = γ + θ/α`.

use crate::error::{Error, Result};
use crate::fracint::{rl_integral, rl_point_mass, rl_stable_standard, RlTable};
use crate::mlf::PrabhakarTriple;
use crate::numerics::{integrate_semiinf_scaled, ln_gamma, DecayHint, NumResult, QuadSpec};
use crate::stable::{StableLaw, StandardStable};

/// The unnormalised weight `t^{μ-1} e^{-λt} / Γ(μ) dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaWeight {
    mu: f64,
    lambda: f64,
}

impl GammaWeight {
    pub fn new(mu: f64, lambda: f64) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::Parameter(format!("gamma shape mu must be positive, got {mu}")));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::Parameter(format!("gamma rate lambda must be non-negative, got {lambda}")));
        }
        Ok(Self { mu, lambda })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn density(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        ((self.mu - 1.0) * t.ln() - self.lambda * t - ln_gamma(self.mu)).exp()
    }

    /// `λ^{-μ}`, infinite at `λ = 0`.
    pub fn total_mass(&self) -> f64 {
        self.lambda.powf(-self.mu)
    }
}

/// The four base parameters `(α, β, γ, θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub theta: f64,
}

impl BaseParams {
    /// Requires `0 < α <= 1`, `γ > 0`, `β >= αγ`, `θ > -αγ`.
    pub fn new(alpha: f64, beta: f64, gamma: f64, theta: f64) -> Result<Self> {
        let b = Self { alpha, beta, gamma, theta };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        let Self { alpha, beta, gamma, theta } = *self;
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Parameter(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::Parameter(format!("gamma must be positive, got {gamma}")));
        }
        if !beta.is_finite() || beta < alpha * gamma {
            return Err(Error::Parameter(format!(
                "beta must be at least alpha*gamma = {}, got {beta}",
                alpha * gamma
            )));
        }
        if !theta.is_finite() || theta <= -alpha * gamma {
            return Err(Error::Parameter(format!(
                "theta must exceed -alpha*gamma = {}, got {theta}",
                -alpha * gamma
            )));
        }
        Ok(())
    }

    /// `ν = β - αγ`.
    pub fn nu(&self) -> f64 {
        (self.beta - self.alpha * self.gamma).max(0.0)
    }

    /// `μ = γ + θ/α`.
    pub fn mu(&self) -> f64 {
        self.gamma + self.theta / self.alpha
    }

    /// `(α, β+θ, γ+θ/α)`.
    pub fn prabhakar_triple(&self) -> PrabhakarTriple {
        PrabhakarTriple { alpha: self.alpha, beta: self.beta + self.theta, gamma: self.mu() }
    }
}

/// The composite parameters `(α, ν, μ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureParams {
    pub alpha: f64,
    pub nu: f64,
    pub mu: f64,
}

impl MixtureParams {
    pub fn new(alpha: f64, nu: f64, mu: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Parameter(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if !(nu >= 0.0) || !nu.is_finite() {
            return Err(Error::Parameter(format!("nu must be non-negative, got {nu}")));
        }
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::Parameter(format!("mu must be positive, got {mu}")));
        }
        Ok(Self { alpha, nu, mu })
    }
}

pub fn base_to_composite(b: &BaseParams) -> Result<MixtureParams> {
    b.validate()?;
    MixtureParams::new(b.alpha, b.nu(), b.mu())
}

fn check_point(lambda: f64, x: f64) -> Result<()> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Parameter(format!("lambda must be non-negative, got {lambda}")));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x must be positive, got {x}")));
    }
    Ok(())
}

/// Evaluates `M^ν_{α,μ}(x|λ)` for fixed `(α, ν)` across `μ`, `λ` and `x`,
/// sharing one memo table of `{I^ν f_α}`.
#[derive(Debug, Clone)]
pub struct MixtureEvaluator {
    alpha: f64,
    nu: f64,
    table: Option<RlTable>,
}

impl MixtureEvaluator {
    pub fn new(alpha: f64, nu: f64, spec: &QuadSpec) -> Result<Self> {
        MixtureParams::new(alpha, nu, 1.0)?;
        let table = if alpha < 1.0 { Some(RlTable::new(alpha, nu, spec)?) } else { None };
        Ok(Self { alpha, nu, table })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `{I^ν f_α}(y)` from the memo table (`α < 1`).
    pub fn rl_value(&self, y: f64) -> Option<f64> {
        self.table.as_ref().map(|t| t.eval(y))
    }

    pub fn eval(&self, mu: f64, lambda: f64, x: f64, spec: &QuadSpec) -> Result<NumResult> {
        MixtureParams::new(self.alpha, self.nu, mu)?;
        check_point(lambda, x)?;
        let lg = ln_gamma(mu);
        let Some(table) = &self.table else {
            return point_mass_mixture(self.nu, mu, lambda, x, spec);
        };
        let a = self.alpha;
        let nu = self.nu;
        // t^{μ+(ν-1)/α-1} e^{-λt} g(x t^{-1/α}) / Γ(μ)
        let p = mu + (nu - 1.0) / a - 1.0;
        let lx = x.ln();
        let integrand = |t: f64| {
            let lt = t.ln();
            let lg_y = table.ln_eval((lx - lt / a).exp());
            if lg_y == f64::NEG_INFINITY {
                return 0.0;
            }
            (p * lt - lambda * t + lg_y - lg).exp()
        };
        let origin = if nu == 0.0 { mu } else { mu - 1.0 };
        let hint = if lambda > 0.0 {
            DecayHint::Exponential { rate: lambda }
        } else {
            DecayHint::PowerLaw { exponent: -2.0 }
        };
        let xa = x.powf(a);
        let scale = xa / (1.0 + lambda * xa);
        let r = integrate_semiinf_scaled(integrand, spec, hint, Some(origin), scale)?;
        Ok(NumResult { value: r.value.max(0.0), ..r })
    }
}

/// `α = 1`: `{I^ν δ(·-t)}(x) = h_ν(x-t)`, so the mixture is the RL integral of
/// the weight itself; `ν = 0` picks the weight at `x`.
fn point_mass_mixture(nu: f64, mu: f64, lambda: f64, x: f64, spec: &QuadSpec) -> Result<NumResult> {
    let lg = ln_gamma(mu);
    let w = |t: f64| if t <= 0.0 { 0.0 } else { ((mu - 1.0) * t.ln() - lambda * t - lg).exp() };
    if nu == 0.0 {
        return Ok(NumResult::exact(w(x)));
    }
    rl_integral(w, nu, x, spec, Some(mu - 1.0))
}

/// `M^ν_{α,μ}(x|λ)` through the scaled `t`-integral over a per-call memo table.
pub fn mixture_eval(m: &MixtureParams, lambda: f64, x: f64, spec: &QuadSpec) -> Result<NumResult> {
    MixtureEvaluator::new(m.alpha, m.nu, spec)?.eval(m.mu, lambda, x, spec)
}

/// The single-integral variants `ν = 0` (a) and `ν = 1 - α` (b), which use
/// the stable density directly instead of an RL integral.
pub fn mixture_eval_special(b: &BaseParams, lambda: f64, x: f64, spec: &QuadSpec) -> Result<NumResult> {
    b.validate()?;
    check_point(lambda, x)?;
    let a = b.alpha;
    let nu = b.nu();
    let mu = b.mu();
    let variant_b = (nu - (1.0 - a)).abs() <= 1e-12;
    if nu != 0.0 && !variant_b {
        return Err(Error::Route(format!(
            "no single-integral variant for nu = {nu}: needs nu = 0 or nu = 1 - alpha = {}",
            1.0 - a
        )));
    }
    if a == 1.0 {
        return point_mass_mixture(0.0, mu, lambda, x, spec);
    }
    let base = StandardStable::new(a)?;
    let inner = spec.relative(spec.rel_tol.min(1e-12));
    let lg = ln_gamma(mu);
    let (prefactor, p) = if variant_b {
        (x / a, (b.beta + b.theta - 2.0) / a - 1.0)
    } else {
        (1.0, (b.beta + b.theta - 1.0) / a - 1.0)
    };
    let lx = x.ln();
    let failure = std::cell::RefCell::new(None);
    let integrand = |t: f64| {
        let lt = t.ln();
        match base.ln_pdf((lx - lt / a).exp(), &inner) {
            Ok(lf) if lf == f64::NEG_INFINITY => 0.0,
            Ok(lf) => (p * lt - lambda * t + lf - lg).exp(),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let hint = if lambda > 0.0 {
        DecayHint::Exponential { rate: lambda }
    } else {
        DecayHint::PowerLaw { exponent: -2.0 }
    };
    let xa = x.powf(a);
    let origin = if variant_b { mu - 1.0 } else { mu };
    let r = integrate_semiinf_scaled(integrand, spec, hint, Some(origin), xa / (1.0 + lambda * xa));
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(r?.scale(prefactor))
}

/// `{I^ν f_α(·|t)}(x)` with the scaled density inside the integrand.
fn rl_of_scaled_density(alpha: f64, nu: f64, t: f64, x: f64, spec: &QuadSpec) -> Result<f64> {
    if alpha == 1.0 {
        return rl_point_mass(nu, t, x);
    }
    let law = StableLaw::new(alpha, t)?;
    let base = StandardStable::new(alpha)?;
    let c = t.powf(-1.0 / alpha);
    let inner = spec.relative(spec.rel_tol.min(1e-12));
    debug_assert_eq!(law.scale(), t);
    Ok(rl_integral(|u| c * base.pdf(u * c, &inner).unwrap_or(f64::NAN), nu, x, &inner, None)?.value)
}

/// Largest of `|t^{γ+θ'/α} {I^ν f_α(·|t)}(x) - t^{(β+θ'-1)/α} {I^ν f_α}(x t^{-1/α})|`
/// over `θ' ∈ {θ, θ₂}`; the two sides differ only by the `t^{θ/α}` tilt.
pub fn theta_shift_residual(b: &BaseParams, theta2: f64, t: f64, x: f64) -> Result<f64> {
    b.validate()?;
    BaseParams { theta: theta2, ..*b }.validate()?;
    if !(t > 0.0) || !(x > 0.0) {
        return Err(Error::Domain(format!("t and x must be positive, got t = {t}, x = {x}")));
    }
    let spec = QuadSpec::default();
    let a = b.alpha;
    let nu = b.nu();
    if a == 1.0 && nu == 0.0 {
        return Err(Error::Degenerate("alpha = 1 with nu = 0 has no pointwise RL value".into()));
    }
    let direct = rl_of_scaled_density(a, nu, t, x, &spec)?;
    let standard = if a == 1.0 {
        rl_point_mass(nu, 1.0, x / t)?
    } else {
        rl_stable_standard(a, nu, x * t.powf(-1.0 / a), &spec)?.value
    };
    let mut worst = 0.0f64;
    for th in [b.theta, theta2] {
        let lhs = t.powf(b.gamma + th / a) * direct;
        let rhs = t.powf((b.beta + th - 1.0) / a) * standard;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mlf::{ml1, prabhakar_kernel};
    use crate::numerics::gamma;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn composite_map() {
        let m = base_to_composite(&BaseParams::new(0.5, 1.0, 1.0, 0.0).unwrap()).unwrap();
        assert_eq!((m.nu, m.mu), (0.5, 1.0));
        let m = base_to_composite(&BaseParams::new(0.5, 0.5, 1.0, 0.0).unwrap()).unwrap();
        assert_eq!((m.nu, m.mu), (0.0, 1.0));
        let m = base_to_composite(&BaseParams::new(0.5, 1.0, 1.0, -0.4).unwrap()).unwrap();
        assert!((m.mu - 0.2).abs() < 1e-15);
        let e = BaseParams::new(0.5, 1.0, 1.0, -0.5).unwrap_err();
        assert!(e.to_string().contains("theta must exceed -alpha*gamma"));
        assert!(BaseParams::new(0.5, 0.4, 1.0, 0.0).is_err());
        assert!(BaseParams::new(1.5, 2.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn gamma_weight() {
        let w = GammaWeight::new(2.0, 3.0).unwrap();
        assert!(rel(w.total_mass(), 1.0 / 9.0) < 1e-15);
        assert!(rel(w.density(1.0), (-3f64).exp()) < 1e-15);
        assert!(GammaWeight::new(0.0, 1.0).is_err());
        assert!(GammaWeight::new(1.0, 0.0).unwrap().total_mass().is_infinite());
    }

    #[test]
    fn reproduces_mittag_leffler() {
        let spec = QuadSpec::default();
        let b = BaseParams::new(0.5, 1.0, 1.0, 0.0).unwrap();
        let m = base_to_composite(&b).unwrap();
        let v = mixture_eval(&m, 1.0, 1.0, &spec).unwrap().value;
        assert!((v - ml1(0.5, -1.0).unwrap()).abs() < 1e-8, "{v}");
    }

    #[test]
    fn zero_rate_gives_reciprocal_gamma() {
        let spec = QuadSpec::default();
        for (a, beta, g, th) in [(0.5, 1.0, 1.0, 0.0), (0.7, 1.5, 1.0, 0.7), (0.3, 2.0, 1.5, -0.2)] {
            let b = BaseParams::new(a, beta, g, th).unwrap();
            let v = mixture_eval(&base_to_composite(&b).unwrap(), 0.0, 1.0, &spec).unwrap().value;
            assert!(rel(v, 1.0 / gamma(beta + th)) < 1e-8, "{a},{beta},{g},{th}: {v}");
        }
    }

    #[test]
    fn point_mass_mixture_closed_form() {
        let spec = QuadSpec::default();
        let m = base_to_composite(&BaseParams::new(1.0, 2.0, 1.0, 0.0).unwrap()).unwrap();
        let v = mixture_eval(&m, 1.0, 1.0, &spec).unwrap().value;
        assert!(rel(v, 1.0 - (-1f64).exp()) < 1e-10);
        let p = BaseParams::new(1.0, 2.0, 1.0, 0.0).unwrap().prabhakar_triple();
        assert!(rel(prabhakar_kernel(&p, 1.0, 1.0).unwrap(), 1.0 - (-1f64).exp()) < 1e-14);
    }

    #[test]
    fn matches_series_on_sample_grid() {
        let spec = QuadSpec::default();
        for (a, beta, g, th) in [(0.5, 1.0, 1.0, 0.0), (0.6, 1.2, 0.8, 0.3), (0.9, 2.0, 1.5, -0.4), (0.3, 0.3, 1.0, 0.7)] {
            let b = BaseParams::new(a, beta, g, th).unwrap();
            let m = base_to_composite(&b).unwrap();
            let ev = MixtureEvaluator::new(m.alpha, m.nu, &spec).unwrap();
            for lambda in [0.5, 2.0] {
                for x in [0.25, 1.0, 4.0] {
                    let Ok(s) = prabhakar_kernel(&b.prabhakar_triple(), lambda, x) else { continue };
                    let v = ev.eval(m.mu, lambda, x, &spec).unwrap().value;
                    assert!((v - s).abs() <= 1e-6 * (1.0 + s.abs()), "{b:?} λ={lambda} x={x}: {v} vs {s}");
                }
            }
        }
    }

    #[test]
    fn special_variants() {
        let spec = QuadSpec::default();
        let b = BaseParams::new(0.5, 1.0, 1.0, 0.0).unwrap();
        let v = mixture_eval_special(&b, 1.0, 1.0, &spec).unwrap().value;
        assert!((v - ml1(0.5, -1.0).unwrap()).abs() < 1e-9, "{v}");
        let general = mixture_eval(&base_to_composite(&b).unwrap(), 1.0, 1.0, &spec).unwrap().value;
        assert!((v - general).abs() < 1e-7);
        let a = BaseParams::new(0.5, 0.5, 1.0, 0.0).unwrap();
        let v = mixture_eval_special(&a, 0.0, 1.0, &spec).unwrap().value;
        assert!(rel(v, 1.0 / std::f64::consts::PI.sqrt()) < 1e-9, "{v}");
        let c = BaseParams::new(0.7, 1.0, 1.0, 0.2).unwrap();
        let v = mixture_eval_special(&c, 0.8, 1.3, &spec).unwrap().value;
        let g = mixture_eval(&base_to_composite(&c).unwrap(), 0.8, 1.3, &spec).unwrap().value;
        assert!((v - g).abs() < 1e-7, "{v} vs {g}");
        assert!(matches!(
            mixture_eval_special(&BaseParams::new(0.5, 1.3, 1.0, 0.0).unwrap(), 1.0, 1.0, &spec),
            Err(Error::Route(_))
        ));
    }

    #[test]
    fn theta_shift() {
        for (b, th2) in [
            (BaseParams::new(0.5, 1.0, 1.0, 0.0).unwrap(), 0.0),
            (BaseParams::new(0.5, 1.0, 1.0, 0.7).unwrap(), -0.3),
            (BaseParams::new(0.7, 1.4, 1.2, 0.1).unwrap(), 0.9),
            (BaseParams::new(1.0, 2.0, 1.0, 0.0).unwrap(), 0.5),
        ] {
            let r = theta_shift_residual(&b, th2, 2.0, 1.0).unwrap();
            assert!(r < 1e-9, "{b:?}: {r}");
        }
    }

    #[test]
    fn nonincreasing_in_rate() {
        let spec = QuadSpec::default();
        let ev = MixtureEvaluator::new(0.6, 0.5, &spec).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..12 {
            let v = ev.eval(1.3, 0.5 * i as f64, 1.0, &spec).unwrap().value;
            assert!(v <= prev && v >= 0.0);
            prev = v;
        }
    }

    #[test]
    fn index_close_to_one_with_small_order() {
        let spec = QuadSpec::default();
        let (a, beta, g) = (0.9995, 1.6431, 1.6434);
        let ev = MixtureEvaluator::new(a, beta - a * g, &spec).unwrap();
        let triple = crate::mlf::PrabhakarTriple::new(a, beta, g).unwrap();
        for x in [0.1, 1.0, 2.0] {
            let m = ev.eval(g, 2.9, x, &spec).unwrap().value;
            let s = prabhakar_kernel(&triple, 2.9, x).unwrap();
            assert!((m - s).abs() < 1e-9 * s, "x={x}: {m} vs {s}");
        }
    }
}
