//! One-sided stable laws `F_α(x|t)` with Laplace transform `exp(-t s^α)`.
//!
//! The standard density (`t = 1`) is evaluated by a hybrid scheme: the
//! convergent inverse-power series above a per-α switch point and the
//! Zolotarev single integral over `(0, π)` below it. The scaled law follows
//! from `f_α(x|t) = t^{-1/α} f_α(x t^{-1/α})`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{OnceLock, RwLock};

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};
use crate::numerics::{integrate, ln_abs_recip_gamma, ln_gamma, ln_sinc, recip_gamma, Endpoints, NumResult, QuadSpec};

/// Internal relative tolerance for the Zolotarev integrals.
const ZOLOTAREV_TOL: f64 = 1e-13;
/// Terms used to decide where the inverse-power series takes over.
const SWITCH_TERMS: usize = 60;
const SERIES_MAX_TERMS: usize = 400;

/// A one-sided stable law with index `alpha ∈ (0, 1]` and scale `t > 0`.
///
/// `alpha = 1` is the point mass at `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableLaw {
    alpha: f64,
    t: f64,
}

impl StableLaw {
    pub fn new(alpha: f64, t: f64) -> Result<Self> {
        check_index(alpha)?;
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Parameter(format!("stable scale t must be positive, got {t}")));
        }
        Ok(Self { alpha, t })
    }

    pub fn standard(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn scale(&self) -> f64 {
        self.t
    }

    pub fn is_degenerate(&self) -> bool {
        self.alpha == 1.0
    }

    /// `E[e^{-sX}] = exp(-t s^α)`.
    pub fn laplace(&self, s: f64) -> f64 {
        (-self.t * s.powf(self.alpha)).exp()
    }

    pub fn pdf(&self, x: f64, spec: &QuadSpec) -> Result<f64> {
        stable_pdf(self, x, spec)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        stable_sample(self, rng)
    }
}

/// Laplace exponent `ψ(s) = s^α` and Lévy density `ρ(x) = α x^{-α-1}/Γ(1-α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyExponent {
    alpha: f64,
}

impl LevyExponent {
    pub fn new(alpha: f64) -> Result<Self> {
        check_index(alpha)?;
        Ok(Self { alpha })
    }

    pub fn psi(&self, s: f64) -> f64 {
        if s <= 0.0 {
            0.0
        } else {
            s.powf(self.alpha)
        }
    }

    /// Lévy density of the subordinator. Zero for `α = 1` (pure drift).
    pub fn levy_density(&self, x: f64) -> f64 {
        if x <= 0.0 || self.alpha == 1.0 {
            return 0.0;
        }
        self.alpha * x.powf(-self.alpha - 1.0) * recip_gamma(1.0 - self.alpha)
    }

    /// `x ρ(x) = α x^{-α}/Γ(1-α)`, the kernel of the infinite-divisibility identity.
    pub fn levy_kernel(&self, x: f64) -> f64 {
        if x <= 0.0 || self.alpha == 1.0 {
            return 0.0;
        }
        self.alpha * x.powf(-self.alpha) * recip_gamma(1.0 - self.alpha)
    }
}

fn check_index(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Parameter(format!("stable index must lie in (0, 1], got {alpha}")));
    }
    Ok(())
}

fn check_proper_index(alpha: f64) -> Result<()> {
    if alpha == 1.0 {
        return Err(Error::Domain("alpha = 1 is the point mass; it has no density".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Parameter(format!("stable index must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

/// Partial sum of `Σ_{k≥0} (-1)^k y^{ν-1-αk} / (k! Γ(ν-αk))`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesValue {
    pub value: f64,
    pub abs_sum: f64,
    /// Bound on the first omitted term.
    pub tail: f64,
}

/// `{I^ν f_α}(y)` by its large-argument series: `ν = 0` is the density,
/// `ν = 1` the CDF. Stops after three consecutive negligible terms or at
/// `max_terms`.
pub(crate) fn wright_series(alpha: f64, nu: f64, y: f64, max_terms: usize) -> SeriesValue {
    let ly = y.ln();
    let mut sum = crate::numerics::series::CompensatedSum::new();
    let bound = |k: usize| {
        let e = nu - alpha * k as f64;
        // |1/Γ(e)| <= Γ(1-e)/π for e < 1
        let lr = if e >= 1.0 { -ln_gamma(e) } else { ln_gamma(1.0 - e) - PI.ln() };
        ((e - 1.0) * ly - ln_gamma(k as f64 + 1.0) + lr).exp()
    };
    let mut quiet = 0;
    let mut k = 0;
    while k < max_terms {
        let e = nu - alpha * k as f64;
        let (lr, sign) = ln_abs_recip_gamma(e);
        if sign != 0.0 {
            let mag = ((e - 1.0) * ly - ln_gamma(k as f64 + 1.0) + lr).exp();
            let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum.add(parity * sign * mag);
        }
        k += 1;
        let s = sum.value().abs();
        if s > 0.0 && bound(k) < 1e-17 * s {
            quiet += 1;
            if quiet == 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    SeriesValue { value: sum.value(), abs_sum: sum.abs_sum(), tail: bound(k) }
}

fn series_accepted(alpha: f64, nu: f64, y: f64) -> bool {
    let s = wright_series(alpha, nu, y, SWITCH_TERMS);
    s.value > 0.0 && s.tail < 1e-16 * s.value && s.abs_sum <= 10.0 * s.value
}

/// Smallest `y` from which the large-argument series of `{I^ν f_α}` is
/// trusted: 60 terms reach relative increment `1e-16` with cancellation
/// ratio at most 10. Cached per `(α, ν)`.
pub(crate) fn series_switch(alpha: f64, nu: f64) -> f64 {
    static CACHE: OnceLock<RwLock<HashMap<(u64, u64), f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    let key = (alpha.to_bits(), nu.to_bits());
    if let Some(v) = cache.read().expect("switch cache poisoned").get(&key) {
        return *v;
    }
    let v = scan_switch(alpha, nu);
    cache.write().expect("switch cache poisoned").insert(key, v);
    v
}

fn scan_switch(alpha: f64, nu: f64) -> f64 {
    // walk down in powers of two until the criterion first fails
    let mut hi = 2f64.powi(40);
    if !series_accepted(alpha, nu, hi) {
        return f64::INFINITY;
    }
    let mut lo;
    let mut j = 39;
    loop {
        let y = 2f64.powi(j);
        if j < -200 {
            return y;
        }
        if !series_accepted(alpha, nu, y) {
            lo = y;
            break;
        }
        hi = y;
        j -= 1;
    }
    for _ in 0..24 {
        let mid = (lo * hi).sqrt();
        if series_accepted(alpha, nu, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Kanter's function `A(φ) = (sin αφ / sin φ)^{1/(1-α)} sin((1-α)φ) / sin αφ`
/// on `(0, π)`; increasing from `A(0+) = α^{α/(1-α)}(1-α)` to infinity.
pub fn zolotarev_a(alpha: f64, phi: f64) -> f64 {
    let sa = (alpha * phi).sin();
    (sa / phi.sin()).powf(1.0 / (1.0 - alpha)) * ((1.0 - alpha) * phi).sin() / sa
}

pub(crate) fn zolotarev_a0(alpha: f64) -> f64 {
    alpha.powf(alpha / (1.0 - alpha)) * (1.0 - alpha)
}

/// `ln(A(φ)/A0)` without cancellation near `φ = 0`.
fn zolotarev_log_ratio(alpha: f64, phi: f64) -> f64 {
    let la = ln_sinc(alpha * phi);
    (la - ln_sinc(phi)) / (1.0 - alpha) + ln_sinc((1.0 - alpha) * phi) - la
}

/// `A(φ)/A0 - 1` without cancellation near `φ = 0`.
pub(crate) fn zolotarev_excess(alpha: f64, phi: f64) -> f64 {
    zolotarev_log_ratio(alpha, phi).exp_m1()
}

/// `ln(z A0 (A(φ)/A0 - 1))` from `ln(z A0)` and `ln(A/A0)`.
fn log_exponent(ln_za0: f64, l: f64) -> f64 {
    let ln_d = if l > 30.0 { l + (-(-l).exp()).ln_1p() } else { l.exp_m1().ln() };
    ln_za0 + ln_d
}

/// Point `φ` where `z A0 (A(φ)/A0 - 1)` reaches `level`, by bisection in `ln φ`.
fn zolotarev_level(alpha: f64, ln_za0: f64, level: f64) -> f64 {
    let target = level.ln();
    let (mut lo, mut hi) = ((1e-300f64).ln(), PI.ln());
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if log_exponent(ln_za0, zolotarev_log_ratio(alpha, mid.exp())) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).exp()
}

/// `ln ∫_0^π exp(w(ln(A(φ)/A0)) - z (A(φ) - A0)) dφ` for `z = e^{ln_z}`, split
/// at exponent levels so the peak is resolved for every `z`. The integrand
/// is scaled by its value at the peak of `ln(A/A0) - z (A - A0)`, so `z`
/// below the underflow threshold stays usable.
fn zolotarev_log_integral<W: Fn(f64) -> f64>(alpha: f64, ln_z: f64, log_weight: W, spec: &QuadSpec) -> Result<f64> {
    const LEVELS: [f64; 11] = [1e-30, 1e-20, 1e-12, 1e-6, 1e-3, 0.05, 0.5, 4.0, 32.0, 256.0, 745.0];
    let ln_za0 = ln_z + zolotarev_a0(alpha).ln();
    let l_peak = (-ln_za0).max(0.0);
    let shift = log_weight(l_peak) - log_exponent(ln_za0, l_peak).exp();
    let g = |phi: f64| {
        let l = zolotarev_log_ratio(alpha, phi);
        if !l.is_finite() {
            return 0.0;
        }
        let e = log_exponent(ln_za0, l).exp();
        let v = log_weight(l) - e - shift;
        if v.is_nan() || v < -745.0 {
            0.0
        } else {
            v.exp()
        }
    };
    // ln(A/A0) carries rounding amplified by 1/(1-α)
    let tol = spec.rel_tol.min(ZOLOTAREV_TOL).max(64.0 * f64::EPSILON / (1.0 - alpha));
    let mut lo = 0.0;
    let mut total = 0.0f64;
    for (i, level) in LEVELS.iter().enumerate() {
        let hi = zolotarev_level(alpha, ln_za0, *level);
        if hi <= lo {
            continue;
        }
        let piece_spec = if i == 0 {
            spec.relative(tol)
        } else {
            spec.relative(tol).with_abs_tol(tol * total.abs())
        };
        total += integrate(g, lo, hi, &piece_spec, Endpoints::SMOOTH)?.value;
        lo = hi;
    }
    Ok(shift + total.ln())
}

/// The standard (`t = 1`) one-sided stable law for a fixed `α < 1`, with
/// its series switch points resolved once.
#[derive(Debug, Clone, Copy)]
pub struct StandardStable {
    alpha: f64,
    a0: f64,
    pdf_switch: f64,
    cdf_switch: f64,
}

impl StandardStable {
    pub fn new(alpha: f64) -> Result<Self> {
        check_proper_index(alpha)?;
        Ok(Self {
            alpha,
            a0: zolotarev_a0(alpha),
            pdf_switch: series_switch(alpha, 0.0),
            cdf_switch: series_switch(alpha, 1.0),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Abscissa from which the density uses the inverse-power series.
    pub fn pdf_switch(&self) -> f64 {
        self.pdf_switch
    }

    pub fn cdf_switch(&self) -> f64 {
        self.cdf_switch
    }

    fn ln_z(&self, x: f64) -> f64 {
        -self.alpha / (1.0 - self.alpha) * x.ln()
    }

    fn z(&self, x: f64) -> f64 {
        self.ln_z(x).exp()
    }

    /// `ln f_α(x)` by the Zolotarev integral, valid for every `x > 0`.
    pub fn ln_pdf_integral(&self, x: f64, spec: &QuadSpec) -> Result<f64> {
        let a = self.alpha;
        let z = self.z(x);
        if !z.is_finite() {
            return Ok(f64::NEG_INFINITY);
        }
        let li = zolotarev_log_integral(a, self.ln_z(x), |l| l, spec)?;
        Ok((a * self.a0 / ((1.0 - a) * PI)).ln() - x.ln() / (1.0 - a) - z * self.a0 + li)
    }

    /// `f_α(x)` by the inverse-power series, meaningful for large `x`.
    pub fn pdf_series(&self, x: f64) -> f64 {
        wright_series(self.alpha, 0.0, x, SERIES_MAX_TERMS).value
    }

    pub fn ln_pdf(&self, x: f64, spec: &QuadSpec) -> Result<f64> {
        if x <= 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        if x >= self.pdf_switch {
            Ok(self.pdf_series(x).ln())
        } else {
            self.ln_pdf_integral(x, spec)
        }
    }

    pub fn pdf(&self, x: f64, spec: &QuadSpec) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        if x >= self.pdf_switch {
            return Ok(self.pdf_series(x));
        }
        // the Zolotarev integral is at most π once z A0 >= 1
        let a = self.alpha;
        let za0 = self.z(x) * self.a0;
        let bound = (a * self.a0 / (1.0 - a)).ln() - x.ln() / (1.0 - a) - za0;
        if za0 >= 1.0 && bound < -750.0 {
            return Ok(0.0);
        }
        Ok(self.ln_pdf_integral(x, spec)?.exp())
    }

    /// `F_α(x) = (1/π) ∫_0^π exp(-z A(φ)) dφ` below the switch.
    fn cdf_integral(&self, x: f64, spec: &QuadSpec) -> Result<f64> {
        let z = self.z(x);
        if !z.is_finite() {
            return Ok(0.0);
        }
        let li = zolotarev_log_integral(self.alpha, self.ln_z(x), |_| 0.0, spec)?;
        Ok((li - z * self.a0 - PI.ln()).exp())
    }

    pub fn cdf(&self, x: f64, spec: &QuadSpec) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        if x.is_infinite() {
            return Ok(1.0);
        }
        if x >= self.cdf_switch {
            Ok((1.0 - self.sf_tail(x)).clamp(0.0, 1.0))
        } else {
            Ok(self.cdf_integral(x, spec)?.clamp(0.0, 1.0))
        }
    }

    /// Survival function `1 - F_α(x)`, accurate in the right tail.
    pub fn sf(&self, x: f64, spec: &QuadSpec) -> Result<f64> {
        if x <= 0.0 {
            return Ok(1.0);
        }
        if x.is_infinite() {
            return Ok(0.0);
        }
        if x >= self.cdf_switch {
            Ok(self.sf_tail(x).clamp(0.0, 1.0))
        } else {
            Ok((1.0 - self.cdf_integral(x, spec)?).clamp(0.0, 1.0))
        }
    }

    /// `Σ_{k≥1} (-1)^{k+1} x^{-αk}/(k! Γ(1-αk))` summed without the unit term.
    fn sf_tail(&self, x: f64) -> f64 {
        let a = self.alpha;
        let ly = x.ln();
        let mut sum = crate::numerics::series::CompensatedSum::new();
        let mut quiet = 0;
        for k in 1..SERIES_MAX_TERMS {
            let e = 1.0 - a * k as f64;
            let (lr, sign) = ln_abs_recip_gamma(e);
            let lmag = -a * k as f64 * ly - ln_gamma(k as f64 + 1.0);
            if sign != 0.0 {
                let parity = if k % 2 == 1 { 1.0 } else { -1.0 };
                sum.add(parity * sign * (lmag + lr).exp());
            }
            let next_bound = (lmag - a * ly - (k as f64 + 1.0).ln() + ln_gamma(a * (k + 1) as f64) - PI.ln()).exp();
            let s = sum.value().abs();
            if s > 0.0 && next_bound < 1e-17 * s {
                quiet += 1;
                if quiet == 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        sum.value()
    }

    /// `F_α^{-1}(p)` by bisection in `ln x`.
    pub fn quantile(&self, p: f64, spec: &QuadSpec) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain(format!("quantile level must lie in (0, 1), got {p}")));
        }
        let (mut lo, mut hi) = (-1.0f64, 1.0f64);
        while self.cdf(lo.exp(), spec)? > p {
            lo *= 2.0;
            if lo < -1e3 {
                break;
            }
        }
        while self.cdf(hi.exp(), spec)? < p {
            hi *= 2.0;
            if hi > 1e4 {
                break;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 1e-15 * mid.abs().max(1.0) {
                break;
            }
            if self.cdf(mid.exp(), spec)? < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((0.5 * (lo + hi)).exp())
    }
}

/// `f_α(x)`, the density of the standard law.
pub fn stable_pdf_standard(alpha: f64, x: f64, spec: &QuadSpec) -> Result<f64> {
    StandardStable::new(alpha)?.pdf(x, spec)
}

/// `f_α(x|t) = t^{-1/α} f_α(x t^{-1/α})`.
pub fn stable_pdf(law: &StableLaw, x: f64, spec: &QuadSpec) -> Result<f64> {
    if law.is_degenerate() {
        return Err(Error::Degenerate(format!("point mass at t = {} has no density", law.t)));
    }
    let c = law.t.powf(-1.0 / law.alpha);
    Ok(c * stable_pdf_standard(law.alpha, x * c, spec)?)
}

/// `F_α(x)` for the standard law.
pub fn stable_cdf(alpha: f64, x: f64, spec: &QuadSpec) -> Result<f64> {
    StandardStable::new(alpha)?.cdf(x, spec)
}

/// One draw by Kanter's representation `(A(U)/E)^{(1-α)/α} t^{1/α}`,
/// `U ~ U(0, π)`, `E ~ Exp(1)`.
pub fn stable_sample<R: Rng + ?Sized>(law: &StableLaw, rng: &mut R) -> f64 {
    if law.is_degenerate() {
        return law.t;
    }
    standard_kanter(law.alpha, rng) * law.t.powf(1.0 / law.alpha)
}

pub(crate) fn standard_kanter<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let u = loop {
        let u: f64 = rng.random::<f64>() * PI;
        if u > 0.0 {
            break u;
        }
    };
    let e: f64 = Exp1.sample(rng);
    (zolotarev_a(alpha, u) / e).powf((1.0 - alpha) / alpha)
}

/// `x f_α(x|t) - α t {I^{1-α} f_α(·|t)}(x)`, written as the convolution
/// `t ∫_0^x (x-u)ρ(x-u) f_α(u|t) du` of the Lévy kernel with the density.
pub fn id_identity_residual(alpha: f64, t: f64, x: f64, spec: &QuadSpec) -> Result<f64> {
    check_proper_index(alpha)?;
    if !(x > 0.0) {
        return Err(Error::Domain(format!("id_identity_residual requires x > 0, got {x}")));
    }
    let law = StableLaw::new(alpha, t)?;
    let c = t.powf(-1.0 / alpha);
    let base = StandardStable::new(alpha)?;
    let levy = LevyExponent::new(alpha)?;
    let inner = spec.relative(spec.rel_tol.min(1e-12));
    // in the lag d = x - u so the kernel argument carries no cancellation
    let conv: NumResult = integrate(
        |d| {
            let f = base.pdf((x - d) * c, &inner).unwrap_or(f64::NAN) * c;
            levy.levy_kernel(d) * f
        },
        0.0,
        x,
        &inner,
        Endpoints::left(-alpha),
    )?;
    let lhs = x * stable_pdf(&law, x, spec)?;
    Ok(lhs - t * conv.value)
}
