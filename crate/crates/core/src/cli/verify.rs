//! The invariant suite behind `verify`: each check evaluates a property on a
//! fixed or seeded grid and reports its worst residual against a tolerance.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::args::Suite;
use crate::distributions::{cm_check, cm_check_values, p_density, p_laplace_closed, uniform_grid, PollardLaw, PollardSampler, SamplerRoute};
use crate::error::{Error, Result};
use crate::fracint::{rl_integral, rl_stable};
use crate::mixture::{theta_shift_residual, BaseParams, MixtureEvaluator};
use crate::mlf::{ml1, prabhakar_kernel, prabhakar_laplace_closed, prabhakar_via_inversion, PrabhakarTriple};
use crate::numerics::{gamma, laplace_numeric, QuadSpec};
use crate::stable::{id_identity_residual, stable_pdf, StableLaw};

/// Result of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub skipped: usize,
    /// Worst `|a - b| / scale` over the cases.
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub note: String,
}

/// Accumulates `residual <= tolerance` cases.
struct Tally {
    name: &'static str,
    tolerance: f64,
    cases: usize,
    skipped: usize,
    worst: f64,
    failures: usize,
    first_failure: Option<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            cases: 0,
            skipped: 0,
            worst: 0.0,
            failures: 0,
            first_failure: None,
            notes: Vec::new(),
        }
    }

    fn record(&mut self, residual: f64, label: impl FnOnce() -> String) {
        self.cases += 1;
        if residual.is_nan() || residual > self.tolerance {
            self.failures += 1;
            self.first_failure.get_or_insert_with(|| format!("{} (residual {residual:.3e})", label()));
        }
        if !(residual <= self.worst) {
            self.worst = residual;
        }
    }

    fn result(&mut self, r: Result<f64>, label: impl FnOnce() -> String) {
        match r {
            Ok(v) => self.record(v, label),
            Err(e) => {
                self.cases += 1;
                self.failures += 1;
                self.first_failure.get_or_insert_with(|| format!("{}: {e}", label()));
            }
        }
    }

    fn finish(self) -> CheckOutcome {
        let mut notes = self.notes;
        if let Some(f) = self.first_failure {
            notes.insert(0, format!("{} failing, first {f}", self.failures));
        }
        CheckOutcome {
            name: self.name,
            cases: self.cases,
            skipped: self.skipped,
            max_residual: self.worst,
            tolerance: self.tolerance,
            passed: self.failures == 0 && self.cases > 0,
            note: notes.join("; "),
        }
    }
}

fn agreement(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

/// Draws an in-range `(α, β, γ, θ)`: `ν = β - αγ` is `0`, `1 - α` or
/// uniform on `(0, 1.5)`, and `θ` lies in `(-0.9αγ, 1.5)`.
pub fn random_base<R: Rng>(rng: &mut R) -> BaseParams {
    let alpha: f64 = rng.random_range(0.3..1.0);
    let gamma: f64 = rng.random_range(0.5..2.0);
    let nu = match rng.random_range(0..4) {
        0 => 0.0,
        1 => 1.0 - alpha,
        _ => rng.random_range(0.05..1.5),
    };
    let ag = alpha * gamma;
    let theta = rng.random_range(-0.9 * ag..1.5);
    BaseParams::new(alpha, ag + nu, gamma, theta).expect("drawn inside the parameter domain")
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Series against mixture for the Prabhakar kernel on the full grid
/// `α ∈ {0.3, 0.5, 0.7, 0.9, 1}`, `(β, γ) ∈ {(1,1), (1.5,1), (α,1), (2,1.5)}`,
/// `θ ∈ {-αγ/2, 0, 0.7}`, `λ ∈ {0, 0.5, 2}`, `x ∈ {1/4, 1, 4}`, within
/// `1e-6 (1 + |series|)`. Where the series refuses, mixture is compared with
/// inversion instead.
pub fn routes(spec: &QuadSpec) -> Vec<CheckOutcome> {
    let mut points = Vec::new();
    for alpha in [0.3, 0.5, 0.7, 0.9, 1.0] {
        for (beta, gamma) in [(1.0, 1.0), (1.5, 1.0), (alpha, 1.0), (2.0, 1.5)] {
            for theta in [-alpha * gamma / 2.0, 0.0, 0.7] {
                for lambda in [0.0, 0.5, 2.0] {
                    for x in [0.25, 1.0, 4.0] {
                        points.push((alpha, beta, gamma, theta, lambda, x));
                    }
                }
            }
        }
    }
    let mut keys: BTreeMap<(u64, u64), (f64, f64)> = BTreeMap::new();
    for &(a, b, g, th, _, _) in &points {
        if let Ok(bp) = BaseParams::new(a, b, g, th) {
            keys.insert((a.to_bits(), bp.nu().to_bits()), (a, bp.nu()));
        }
    }
    let evaluators: BTreeMap<(u64, u64), Result<MixtureEvaluator>> = keys
        .into_par_iter()
        .map(|(k, (a, nu))| (k, MixtureEvaluator::new(a, nu, spec)))
        .collect();

    enum Row {
        Invalid,
        Compared(f64),
        Refused(Result<f64>),
        Failed(Error),
    }
    let rows: Vec<Row> = points
        .par_iter()
        .map(|&(a, b, g, th, lambda, x)| {
            let Ok(bp) = BaseParams::new(a, b, g, th) else { return Row::Invalid };
            let ev = match &evaluators[&(a.to_bits(), bp.nu().to_bits())] {
                Ok(ev) => ev,
                Err(e) => return Row::Failed(e.clone()),
            };
            let mixture = match ev.eval(bp.mu(), lambda, x, spec) {
                Ok(m) => m.value,
                Err(e) => return Row::Failed(e),
            };
            let triple = bp.prabhakar_triple();
            match prabhakar_kernel(&triple, lambda, x) {
                Ok(series) => Row::Compared(agreement(mixture, series)),
                Err(Error::Route(_)) => Row::Refused(
                    prabhakar_via_inversion(&triple, lambda, x, spec).map(|inv| agreement(mixture, inv)),
                ),
                Err(e) => Row::Failed(e),
            }
        })
        .collect();

    let mut main = Tally::new("routes", 1e-6);
    let mut fallback = Tally::new("routes-refused-points", 1e-6);
    let mut invalid = 0;
    for (row, &(a, b, g, th, l, x)) in rows.into_iter().zip(&points) {
        let label = || format!("alpha={a} beta={b} gamma={g} theta={th} lambda={l} x={x}");
        match row {
            Row::Invalid => invalid += 1,
            Row::Compared(r) => main.record(r, label),
            Row::Refused(r) => {
                main.skipped += 1;
                fallback.result(r, label);
            }
            Row::Failed(e) => main.result(Err(e), label),
        }
    }
    main.notes.push(format!("{invalid} grid points outside the parameter domain"));
    main.notes.push(format!("{} points refused by the series", main.skipped));
    fallback.notes.push("mixture against inversion where the series refuses".into());
    let mut out = vec![main.finish()];
    if fallback.cases > 0 {
        out.push(fallback.finish());
    }
    out
}

/// Numeric Laplace transform of the kernel against `s^{αγ-β}/(λ+s^α)^γ` on
/// 50 seeded points, absolute `1e-6`. The kernel falls back to the mixture
/// route where the series refuses.
pub fn laplace(seed: u64, spec: &QuadSpec) -> Vec<CheckOutcome> {
    let mut rng = rng_for(seed, 2);
    let points: Vec<(BaseParams, f64, f64)> = (0..50)
        .map(|_| {
            let b = random_base(&mut rng);
            let b = BaseParams { theta: 0.0, ..b };
            (b, rng.random_range(0.0..3.0), rng.random_range(0.5..3.0))
        })
        .collect();
    let residuals: Vec<Result<f64>> = points
        .par_iter()
        .map(|&(b, lambda, s)| {
            let triple = PrabhakarTriple::new(b.alpha, b.beta, b.gamma)?;
            let ev = MixtureEvaluator::new(b.alpha, b.nu(), spec)?;
            let failure = RefCell::new(None);
            let kernel = |x: f64| match prabhakar_kernel(&triple, lambda, x) {
                Ok(v) => v,
                Err(_) => ev.eval(b.gamma, lambda, x, spec).map(|r| r.value).unwrap_or_else(|e| {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                }),
            };
            let numeric = laplace_numeric(kernel, s, spec, Some(b.beta - 1.0));
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            Ok((numeric?.value - prabhakar_laplace_closed(&triple, lambda, s)?).abs())
        })
        .collect();
    let mut t = Tally::new("laplace", 1e-6);
    for (r, (b, l, s)) in residuals.into_iter().zip(&points) {
        t.result(r, || format!("{b:?} lambda={l} s={s}"));
    }
    vec![t.finish()]
}

/// Talbot inversion against the series on 20 seeded points with
/// `α ∈ [0.6, 1]`, `|z| <= 5`, absolute `1e-7`.
pub fn inversion(seed: u64, spec: &QuadSpec) -> Vec<CheckOutcome> {
    let mut rng = rng_for(seed, 3);
    let mut points = Vec::new();
    let mut resampled = 0;
    while points.len() < 20 {
        let alpha: f64 = rng.random_range(0.6..=1.0);
        let p = PrabhakarTriple::new(alpha, rng.random_range(0.5..2.5), rng.random_range(0.5..2.0)).unwrap();
        let lambda: f64 = rng.random_range(0.1..3.0);
        let z: f64 = rng.random_range(0.05..5.0);
        let x = (z / lambda).powf(1.0 / alpha);
        match prabhakar_kernel(&p, lambda, x) {
            Ok(series) => points.push((p, lambda, x, series)),
            Err(_) => resampled += 1,
        }
    }
    let residuals: Vec<Result<f64>> = points
        .par_iter()
        .map(|&(p, lambda, x, series)| Ok((prabhakar_via_inversion(&p, lambda, x, spec)? - series).abs()))
        .collect();
    let mut t = Tally::new("inversion", 1e-7);
    for (r, (p, l, x, _)) in residuals.into_iter().zip(&points) {
        t.result(r, || format!("{p:?} lambda={l} x={x}"));
    }
    t.notes.push(format!("{resampled} draws resampled after series refusal"));
    vec![t.finish()]
}

/// Mass within `1e-8` and moments `n = 1..3` within `1e-6 max(1, m_n)` for
/// 20 seeded parameter sets.
pub fn mass_moments(seed: u64, spec: &QuadSpec) -> Vec<CheckOutcome> {
    let mut rng = rng_for(seed, 4);
    let sets: Vec<BaseParams> = (0..20).map(|_| random_base(&mut rng)).collect();
    let results: Vec<Result<(f64, Vec<f64>)>> = sets
        .par_iter()
        .map(|b| {
            let law = PollardLaw::new(*b, spec)?;
            let mass = (law.mass(spec)?.value - 1.0).abs();
            let moments = (1..=3)
                .map(|n| {
                    let exact = law.moment(n);
                    Ok((law.expect(n as f64, 0.0, spec)?.value - exact).abs() / exact.max(1.0))
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok((mass, moments))
        })
        .collect();
    let mut mass = Tally::new("mass", 1e-8);
    let mut moments = Tally::new("moments", 1e-6);
    for (r, b) in results.into_iter().zip(&sets) {
        match r {
            Ok((m, ms)) => {
                mass.record(m, || format!("{b:?}"));
                for (n, v) in ms.into_iter().enumerate() {
                    moments.record(v, || format!("{b:?} n={}", n + 1));
                }
            }
            Err(e) => mass.result(Err(e), || format!("{b:?}")),
        }
    }
    vec![mass.finish(), moments.finish()]
}

/// `10^5` draws of `T = S^{-1/2}`: `E e^{-λT}` for `λ ∈ {0.5, 1, 2}` and `E T`
/// within 3 standard errors of `E_{1/2}(-λ)` and `2/√π`.
pub fn monte_carlo(seed: u64) -> Vec<CheckOutcome> {
    let mut t = Tally::new("monte-carlo", 3.0);
    let b = BaseParams::new(0.5, 1.0, 1.0, 0.0).unwrap();
    let sampler = match PollardSampler::new(&b, &QuadSpec::default()) {
        Ok(s) if s.route() == SamplerRoute::Transform => s,
        Ok(_) => {
            t.result(Err(Error::Sampling("expected the stable transform route".into())), String::new);
            return vec![t.finish()];
        }
        Err(e) => {
            t.result(Err(e), String::new);
            return vec![t.finish()];
        }
    };
    let mut rng = rng_for(seed, 5);
    let draws = match sampler.sample_n(100_000, &mut rng) {
        Ok(d) => d,
        Err(e) => {
            t.result(Err(e), String::new);
            return vec![t.finish()];
        }
    };
    let z_score = |values: Vec<f64>, exact: f64| {
        let n = values.len() as f64;
        let m = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m - exact).abs() / (var / n).sqrt()
    };
    for lambda in [0.5, 1.0, 2.0] {
        let exact = ml1(0.5, -lambda).unwrap();
        t.record(z_score(draws.iter().map(|d| (-lambda * d).exp()).collect(), exact), || {
            format!("laplace lambda={lambda}")
        });
    }
    t.record(z_score(draws.clone(), 2.0 / PI.sqrt()), || "mean".into());
    t.notes.push("residuals in standard errors".into());
    vec![t.finish()]
}

/// `α = 1`: densities against `Beta(γ+θ, β-γ)` within `1e-10` relative, and
/// a Kolmogorov-Smirnov test of the sampler at the 1% level.
pub fn beta(seed: u64, spec: &QuadSpec) -> Vec<CheckOutcome> {
    const KS_CRITICAL_1PCT: f64 = 1.6276;
    let mut dens = Tally::new("beta-density", 1e-10);
    let mut ks = Tally::new("beta-ks", KS_CRITICAL_1PCT);
    for (k, (b, g, th)) in [(2.0, 1.0, 0.0), (3.0, 1.5, 0.5)].into_iter().enumerate() {
        let bp = BaseParams::new(1.0, b, g, th).unwrap();
        let (p, q) = (g + th, b - g);
        let c = gamma(p + q) / (gamma(p) * gamma(q));
        let law = match PollardLaw::new(bp, spec) {
            Ok(l) => l,
            Err(e) => {
                dens.result(Err(e), || format!("{bp:?}"));
                continue;
            }
        };
        for i in 1..20 {
            let t = i as f64 / 20.0;
            let want = c * t.powf(p - 1.0) * (1.0 - t).powf(q - 1.0);
            for got in [p_density(&bp, t, spec), law.p_density(t)] {
                dens.result(got.map(|v| ((v - want) / want).abs()), || format!("{bp:?} t={t}"));
            }
        }
        let n = 10_000;
        let draws = PollardSampler::new(&bp, spec).and_then(|s| s.sample_n(n, &mut rng_for(seed, 60 + k as u64)));
        let stat = draws.and_then(|mut d| {
            d.sort_by(f64::total_cmp);
            let cdf: Vec<f64> = d.par_iter().map(|&t| law.cdf(t, spec)).collect::<Result<_>>()?;
            let dmax = cdf.iter().enumerate().fold(0.0f64, |m, (i, &f)| {
                m.max((f - i as f64 / n as f64).abs()).max(((i + 1) as f64 / n as f64 - f).abs())
            });
            Ok(dmax * (n as f64).sqrt())
        });
        ks.result(stat, || format!("{bp:?}"));
    }
    ks.notes.push("residual is sqrt(n) D".into());
    vec![dens.finish(), ks.finish()]
}

/// `x f(x|t) = α t {I^{1-α} f_α(·|t)}(x)` through the Lévy-kernel convolution,
/// within `1e-7 (1 + x f(x|t))`.
pub fn id_identity(spec: &QuadSpec) -> Vec<CheckOutcome> {
    let mut grid = Vec::new();
    for alpha in [0.3, 0.5, 0.8] {
        for t in [0.5, 1.0, 2.0] {
            for x in [0.3, 1.0, 3.0] {
                grid.push((alpha, t, x));
            }
        }
    }
    let residuals: Vec<Result<f64>> = grid
        .par_iter()
        .map(|&(alpha, t, x)| {
            let xf = x * stable_pdf(&StableLaw::new(alpha, t)?, x, spec)?;
            Ok(id_identity_residual(alpha, t, x, spec)?.abs() / (1.0 + xf))
        })
        .collect();
    let mut tally = Tally::new("id-identity", 1e-7);
    for (r, (a, t, x)) in residuals.into_iter().zip(&grid) {
        tally.result(r, || format!("alpha={a} t={t} x={x}"));
    }
    vec![tally.finish()]
}

/// `I^{ν₂} I^{ν₁} f = I^{ν₁+ν₂} f` for `f(u) = e^{-u}(1+u²)`,
/// `ν₁, ν₂ ∈ {0.3, 0.7}`, `x ∈ {0.5, 1.7, 4}`, absolute `1e-6`.
pub fn semigroup(spec: &QuadSpec) -> Vec<CheckOutcome> {
    let f = |u: f64| (-u).exp() * (1.0 + u * u);
    let mut grid = Vec::new();
    for n1 in [0.3, 0.7] {
        for n2 in [0.3, 0.7] {
            for x in [0.5, 1.7, 4.0] {
                grid.push((n1, n2, x));
            }
        }
    }
    let residuals: Vec<Result<f64>> = grid
        .par_iter()
        .map(|&(n1, n2, x)| {
            let failure = RefCell::new(None);
            let inner = |y: f64| {
                rl_integral(f, n1, y, spec, None).map(|r| r.value).unwrap_or_else(|e| {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                })
            };
            let twice = rl_integral(inner, n2, x, spec, Some(n1));
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            Ok((twice?.value - rl_integral(f, n1 + n2, x, spec, None)?.value).abs())
        })
        .collect();
    let mut t = Tally::new("semigroup", 1e-6);
    for (r, (n1, n2, x)) in residuals.into_iter().zip(&grid) {
        t.result(r, || format!("nu1={n1} nu2={n2} x={x}"));
    }
    vec![t.finish()]
}

/// `{I^ν f_α(·|t)}(x)` by quadrature of the scaled density against
/// `t^{(ν-1)/α} {I^ν f_α}(x t^{-1/α})`, absolute `1e-6`, on
/// `α ∈ {0.3, 0.5, 0.7}`, `ν ∈ {0.4, 1.3}`, `t ∈ {0.5, 2}`, `x ∈ {0.8, 2}`.
pub fn scaling(spec: &QuadSpec) -> Vec<CheckOutcome> {
    let mut grid = Vec::new();
    for alpha in [0.3, 0.5, 0.7] {
        for nu in [0.4, 1.3] {
            for t in [0.5, 2.0] {
                for x in [0.8, 2.0] {
                    grid.push((alpha, nu, t, x));
                }
            }
        }
    }
    let residuals: Vec<Result<f64>> = grid
        .par_iter()
        .map(|&(alpha, nu, t, x)| {
            let law = StableLaw::new(alpha, t)?;
            let failure = RefCell::new(None);
            let pdf = |u: f64| {
                stable_pdf(&law, u, spec).unwrap_or_else(|e| {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                })
            };
            let direct = rl_integral(pdf, nu, x, spec, None);
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            Ok((direct?.value - rl_stable(alpha, nu, t, x, spec)?.value).abs())
        })
        .collect();
    let mut tally = Tally::new("scaling", 1e-6);
    for (r, (a, n, t, x)) in residuals.into_iter().zip(&grid) {
        tally.result(r, || format!("alpha={a} nu={n} t={t} x={x}"));
    }
    vec![tally.finish()]
}

/// The `θ`-shift of the scaling identity, absolute `1e-9`.
pub fn theta_shift() -> Vec<CheckOutcome> {
    let mut grid = Vec::new();
    for (a, b, g, th, th2) in [
        (0.5, 1.0, 1.0, 0.0, 0.6),
        (0.3, 0.8, 1.2, -0.1, 1.0),
        (0.7, 1.4, 1.2, 0.1, 0.9),
        (0.9, 2.0, 1.5, 0.7, -0.5),
        (1.0, 2.0, 1.0, 0.0, 0.5),
    ] {
        for t in [0.5, 2.0] {
            for x in [0.7, 1.5] {
                grid.push((BaseParams::new(a, b, g, th).unwrap(), th2, t, x));
            }
        }
    }
    let residuals: Vec<Result<f64>> =
        grid.par_iter().map(|&(b, th2, t, x)| theta_shift_residual(&b, th2, t, x)).collect();
    let mut tally = Tally::new("theta-shift", 1e-9);
    for (r, (b, th2, t, x)) in residuals.into_iter().zip(&grid) {
        tally.result(r, || format!("{b:?} theta2={th2} t={t} x={x}"));
    }
    vec![tally.finish()]
}

/// Complete monotonicity of `Γ(β+θ) E^{γ+θ/α}_{α,β+θ}(-λ)` to order 5 on
/// `λ ∈ (0, 10]` for 10 seeded parameter sets, and rejection of `cos λ`.
pub fn cm(seed: u64, spec: &QuadSpec) -> Vec<CheckOutcome> {
    let mut rng = rng_for(seed, 9);
    let sets: Vec<BaseParams> = (0..10).map(|_| random_base(&mut rng)).collect();
    let grid = uniform_grid(10.0, 100);
    let reports: Vec<Result<crate::distributions::CmReport>> = sets
        .par_iter()
        .map(|b| {
            let values: Vec<f64> = grid.iter().map(|&l| p_laplace_closed(b, l, spec)).collect::<Result<_>>()?;
            Ok(cm_check_values(&values, &grid, 5))
        })
        .collect();
    let mut pass = Tally::new("cm", 0.0);
    for (r, b) in reports.into_iter().zip(&sets) {
        pass.result(
            r.map(|rep| match rep.violation {
                None if rep.passed => 0.0,
                Some(v) => (v.tolerance - v.value).max(f64::MIN_POSITIVE),
                None => f64::INFINITY,
            }),
            || format!("{b:?}"),
        );
    }
    pass.notes.push("residual is the worst sign violation beyond tolerance".into());
    let mut counter = Tally::new("cm-counterexample", 2.0);
    let rep = cm_check(f64::cos, &grid, 5);
    counter.record(rep.violation.map_or(f64::INFINITY, |v| v.order as f64), || "cos".into());
    counter.notes.push("residual is the first failing order for cos".into());
    vec![pass.finish(), counter.finish()]
}

/// Runs the requested checks in a fixed order.
pub fn run_suite(suites: &[Suite], seed: u64, spec: &QuadSpec) -> Vec<CheckOutcome> {
    let all = suites.contains(&Suite::All);
    let want = |s: Suite| all || suites.contains(&s);
    let mut out = Vec::new();
    if want(Suite::Routes) {
        out.extend(routes(spec));
    }
    if want(Suite::Laplace) {
        out.extend(laplace(seed, spec));
    }
    if want(Suite::Inversion) {
        out.extend(inversion(seed, spec));
    }
    if want(Suite::MassMoments) {
        out.extend(mass_moments(seed, spec));
    }
    if want(Suite::MonteCarlo) {
        out.extend(monte_carlo(seed));
    }
    if want(Suite::Beta) {
        out.extend(beta(seed, spec));
    }
    if want(Suite::Id) {
        out.extend(id_identity(spec));
    }
    if want(Suite::Semigroup) {
        out.extend(semigroup(spec));
    }
    if want(Suite::Scaling) {
        out.extend(scaling(spec));
    }
    if want(Suite::ThetaShift) {
        out.extend(theta_shift());
    }
    if want(Suite::Cm) {
        out.extend(cm(seed, spec));
    }
    out
}
