//! Adaptive Gauss-Kronrod quadrature on finite and semi-infinite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and budgets shared by every integral, series and inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Truncation criterion for semi-infinite integrals, relative to the value.
    pub tail_cutoff_mass: f64,
    pub inversion_nodes: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 4000,
            tail_cutoff_mass: 1e-14,
            inversion_nodes: 48,
        }
    }
}

impl QuadSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::Parameter(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::Parameter(format!("abs_tol must be non-negative, got {}", self.abs_tol)));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::Parameter("max_subdivisions must be at least 1".into()));
        }
        if self.inversion_nodes < 8 {
            return Err(Error::Parameter(format!(
                "inversion_nodes must be at least 8, got {}",
                self.inversion_nodes
            )));
        }
        Ok(())
    }

    /// Same budgets, different relative tolerance and no absolute floor.
    pub fn relative(&self, rel_tol: f64) -> Self {
        Self { rel_tol, abs_tol: 0.0, ..*self }
    }

    pub fn with_abs_tol(&self, abs_tol: f64) -> Self {
        Self { abs_tol, ..*self }
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// A quadrature outcome. `err_estimate` is an estimate, not a guarantee.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumResult {
    pub value: f64,
    pub err_estimate: f64,
    pub evaluations: usize,
}

impl NumResult {
    pub fn exact(value: f64) -> Self {
        Self { value, err_estimate: 0.0, evaluations: 1 }
    }

    pub fn scale(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            err_estimate: self.err_estimate * factor.abs(),
            evaluations: self.evaluations,
        }
    }

    pub fn merge(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            err_estimate: self.err_estimate + other.err_estimate,
            evaluations: self.evaluations + other.evaluations,
        }
    }
}

/// Algebraic endpoint behaviour: `f(u) ~ (u-a)^left` and `f(u) ~ (b-u)^right`.
/// Exponents must exceed -1.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Endpoints {
    pub left: Option<f64>,
    pub right: Option<f64>,
}

impl Endpoints {
    pub const SMOOTH: Self = Self { left: None, right: None };

    pub fn left(p: f64) -> Self {
        Self { left: Some(p), right: None }
    }

    pub fn right(q: f64) -> Self {
        Self { left: None, right: Some(q) }
    }

    pub fn both(p: f64, q: f64) -> Self {
        Self { left: Some(p), right: Some(q) }
    }
}

/// How the integrand decays beyond the truncation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayHint {
    /// `|f(t)| <= |f(T)| e^{-rate (t-T)}` for `t > T`.
    Exponential { rate: f64 },
    /// `|f(t)| <= |f(T)| (t/T)^exponent` for `t > T`, `exponent < -1`.
    PowerLaw { exponent: f64 },
}

// 21-point Kronrod rule with embedded 10-point Gauss rule (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// One Gauss-Kronrod panel: (estimate, error estimate).
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive bisection on a smooth integrand.
fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadSpec) -> Result<NumResult> {
    let mut heap = BinaryHeap::new();
    let (v, e) = gk21(f, a, b);
    heap.push(Panel { a, b, value: v, err: e });
    let mut evaluations = 21;
    let mut total = v;
    let mut total_err = e;
    // panels too narrow to split further
    let mut frozen_value = 0.0;
    let mut frozen_err = 0.0;
    let mut splits = 0;

    loop {
        if !total.is_finite() {
            return Err(Error::Domain(format!("non-finite integrand on [{a}, {b}]")));
        }
        if total_err <= spec.tolerance(total) {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || (worst.b - worst.a) <= 1e-15 * (worst.a.abs() + worst.b.abs()) {
            frozen_value += worst.value;
            frozen_err += worst.err;
            continue;
        }
        if splits >= spec.max_subdivisions {
            heap.push(worst);
            return Err(Error::Convergence {
                what: "adaptive quadrature",
                estimate: total,
                err_estimate: total_err,
            });
        }
        splits += 1;
        let (v1, e1) = gk21(f, worst.a, mid);
        let (v2, e2) = gk21(f, mid, worst.b);
        evaluations += 42;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Panel { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, err: e2 });
        // periodic resummation keeps the running total free of drift
        if splits % 64 == 0 {
            total = frozen_value + heap.iter().map(|p| p.value).sum::<f64>();
            total_err = frozen_err + heap.iter().map(|p| p.err).sum::<f64>();
        }
    }
    let value = frozen_value + heap.iter().map(|p| p.value).sum::<f64>();
    let err_estimate = frozen_err + heap.iter().map(|p| p.err).sum::<f64>();
    Ok(NumResult { value, err_estimate, evaluations })
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p > -1.0) || !p.is_finite() {
        return Err(Error::Domain(format!("endpoint exponent must exceed -1, got {p}")));
    }
    Ok(())
}

/// `∫_a^b f(u) du` over `[a, a + len]` with `f ~ (u-a)^p`, via `u = a + v^{1/(1+p)}`.
fn left_singular<F: Fn(f64) -> f64>(f: &F, a: f64, len: f64, p: f64, spec: &QuadSpec) -> Result<NumResult> {
    let k = 1.0 / (1.0 + p);
    let vmax = len.powf(1.0 + p);
    let g = |v: f64| {
        let d = v.powf(k);
        f(a + d) * k * d / v
    };
    adaptive(&g, 0.0, vmax, spec)
}

/// Mirror image of [`left_singular`] for `f ~ (b-u)^q` at the right end.
fn right_singular<F: Fn(f64) -> f64>(f: &F, b: f64, len: f64, q: f64, spec: &QuadSpec) -> Result<NumResult> {
    let k = 1.0 / (1.0 + q);
    let vmax = len.powf(1.0 + q);
    let g = |v: f64| {
        let d = v.powf(k);
        f(b - d) * k * d / v
    };
    adaptive(&g, 0.0, vmax, spec)
}

/// `∫_a^b f(u) du`.
///
/// Declared algebraic endpoint singularities are removed by the power
/// substitution `v = (u-a)^{1+p}` (and its mirror at `b`); with both ends
/// declared the interval is split at the midpoint.
pub fn integrate<F>(f: F, a: f64, b: f64, spec: &QuadSpec, ends: Endpoints) -> Result<NumResult>
where
    F: Fn(f64) -> f64,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("integrate requires finite a < b, got [{a}, {b}]")));
    }
    let left = ends.left.filter(|p| *p != 0.0);
    let right = ends.right.filter(|q| *q != 0.0);
    if let Some(p) = left {
        check_exponent(p)?;
    }
    if let Some(q) = right {
        check_exponent(q)?;
    }
    match (left, right) {
        (None, None) => adaptive(&f, a, b, spec),
        (Some(p), None) => left_singular(&f, a, b - a, p, spec),
        (None, Some(q)) => right_singular(&f, b, b - a, q, spec),
        (Some(p), Some(q)) => {
            let half = 0.5 * (b - a);
            let sub = QuadSpec { abs_tol: 0.5 * spec.abs_tol, ..*spec };
            let l = left_singular(&f, a, half, p, &sub)?;
            let r = right_singular(&f, b, half, q, &sub)?;
            Ok(l.merge(r))
        }
    }
}

/// `∫_a^b (u-a)^p f(u) du` for a regular `f`, via `u = a + v^{1/(1+p)}`.
///
/// The weight is absorbed exactly, so `p` close to `-1` is safe where
/// `(u-a)^p` would overflow at underflowed `u - a`.
pub fn integrate_power_weight<F>(f: F, a: f64, b: f64, p: f64, spec: &QuadSpec) -> Result<NumResult>
where
    F: Fn(f64) -> f64,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("integrate requires finite a < b, got [{a}, {b}]")));
    }
    check_exponent(p)?;
    let k = 1.0 / (1.0 + p);
    let vmax = (b - a).powf(1.0 + p);
    let mut r = adaptive(&|v: f64| f(a + v.powf(k)), 0.0, vmax, &spec.with_abs_tol(spec.abs_tol * (1.0 + p)))?;
    r.value *= k;
    r.err_estimate *= k;
    Ok(r)
}

/// `∫_0^∞ f(t) dt` with the first panel `[0, scale]`.
///
/// Panels double in width until the hinted tail bound beyond the current
/// truncation point drops below `tail_cutoff_mass · |value|`.
pub fn integrate_semiinf_scaled<F>(
    f: F,
    spec: &QuadSpec,
    hint: DecayHint,
    origin_exponent: Option<f64>,
    scale: f64,
) -> Result<NumResult>
where
    F: Fn(f64) -> f64,
{
    match hint {
        DecayHint::Exponential { rate } if !(rate > 0.0) => {
            return Err(Error::Domain(format!("exponential decay rate must be positive, got {rate}")));
        }
        DecayHint::PowerLaw { exponent } if !(exponent < -1.0) => {
            return Err(Error::Domain(format!(
                "power-law decay exponent {exponent} is not integrable (needs < -1)"
            )));
        }
        _ => {}
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Domain(format!("panel scale must be positive, got {scale}")));
    }
    let ends = origin_exponent.map_or(Endpoints::SMOOTH, Endpoints::left);
    let mut acc = integrate(&f, 0.0, scale, spec, ends)?;
    let mut lo = scale;
    let mut width = scale;
    let tail_bound = |t: f64| {
        let probe = f(t).abs().max(f(t * 1.0625).abs());
        match hint {
            DecayHint::Exponential { rate } => probe / rate,
            DecayHint::PowerLaw { exponent } => probe * t / (-exponent - 1.0),
        }
    };
    const MAX_PANELS: usize = 160;
    for _ in 0..MAX_PANELS {
        let tail = tail_bound(lo);
        acc.evaluations += 2;
        if acc.value != 0.0 && tail <= spec.tail_cutoff_mass * acc.value.abs() {
            return Ok(acc);
        }
        let hi = lo + width;
        let panel_spec = QuadSpec { abs_tol: spec.tolerance(acc.value) * 0.05, ..*spec };
        acc = acc.merge(integrate(&f, lo, hi, &panel_spec, Endpoints::SMOOTH)?);
        lo = hi;
        width *= 2.0;
    }
    // Very slow power-law tails: add the hinted tail and account for it.
    let tail = tail_bound(lo);
    let mut out = acc;
    out.value += tail;
    out.err_estimate += tail;
    if tail <= spec.tolerance(out.value) {
        Ok(out)
    } else {
        Err(Error::Convergence {
            what: "semi-infinite truncation",
            estimate: out.value,
            err_estimate: out.err_estimate,
        })
    }
}

/// `∫_0^∞ f(t) dt`, first panel of unit width or `1/rate`.
pub fn integrate_semiinf<F>(f: F, spec: &QuadSpec, hint: DecayHint, origin_exponent: Option<f64>) -> Result<NumResult>
where
    F: Fn(f64) -> f64,
{
    let scale = match hint {
        DecayHint::Exponential { rate } if rate > 0.0 => 1.0 / rate,
        _ => 1.0,
    };
    integrate_semiinf_scaled(f, spec, hint, origin_exponent, scale)
}
