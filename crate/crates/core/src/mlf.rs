//! Mittag-Leffler and Prabhakar functions by power series, their Laplace
//! transforms, and evaluation by numeric Laplace inversion.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::series::CompensatedSum;
use crate::numerics::{inverse_laplace_checked, ln_gamma, QuadSpec};

/// Largest `|z|` accepted by the series route.
pub const Z_MAX: f64 = 30.0;
/// Largest accepted `Σ|T_k| / |Σ T_k|`; beyond it round-off in the
/// alternating sum exceeds the error budget.
pub const MAX_CANCELLATION: f64 = 1e7;
const MAX_TERMS: usize = 20_000;

/// Parameters `(α, β, γ)` of `E^γ_{α,β}(z) = Σ (γ)_k z^k / (k! Γ(αk+β))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrabhakarTriple {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl PrabhakarTriple {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::Parameter(format!("alpha must be non-negative, got {alpha}")));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Parameter(format!("beta must be positive, got {beta}")));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::Parameter(format!("gamma must be positive, got {gamma}")));
        }
        Ok(Self { alpha, beta, gamma })
    }

    /// `E_α = E^1_{α,1}`.
    pub fn mittag_leffler(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0, 1.0)
    }

    fn ln_coefficient(&self, k: usize) -> f64 {
        let k = k as f64;
        ln_gamma(self.gamma + k) - ln_gamma(self.gamma) - ln_gamma(k + 1.0) - ln_gamma(self.alpha * k + self.beta)
    }
}

fn check_argument(alpha: f64, z: f64) -> Result<()> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("argument must be finite, got {z}")));
    }
    if z.abs() > Z_MAX {
        return Err(Error::Route(format!(
            "|z| = {} exceeds the series bound {Z_MAX}; use the mixture or inversion route",
            z.abs()
        )));
    }
    if alpha == 0.0 && z.abs() >= 1.0 {
        return Err(Error::Route(format!("alpha = 0 series diverges at |z| = {} >= 1", z.abs())));
    }
    Ok(())
}

/// Sums `Σ sign_k exp(ln_mag(k))` until three consecutive terms fall below
/// `1e-18` of the partial sum, refusing heavy cancellation.
fn sum_series<L: Fn(usize) -> f64>(ln_mag: L, negative: bool) -> Result<f64> {
    let mut sum = CompensatedSum::new();
    let mut quiet = 0;
    for k in 0..MAX_TERMS {
        let mag = ln_mag(k).exp();
        if !mag.is_finite() || !sum.abs_sum().is_finite() {
            return Err(Error::Route(format!(
                "series terms overflow at k = {k}; use the mixture or inversion route"
            )));
        }
        let term = if negative && k % 2 == 1 { -mag } else { mag };
        sum.add(term);
        let s = sum.value().abs();
        if mag < 1e-18 * s || (mag == 0.0 && s == 0.0 && k > 0) {
            quiet += 1;
            if quiet == 3 {
                let v = sum.value();
                if sum.abs_sum() > MAX_CANCELLATION * v.abs() {
                    return Err(Error::Route(format!(
                        "alternating series loses {:.1} digits to cancellation; use the mixture or inversion route",
                        (sum.abs_sum() / v.abs()).log10()
                    )));
                }
                return Ok(v);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Convergence { what: "power series", estimate: sum.value(), err_estimate: f64::INFINITY })
}

/// `E_α(z) = Σ z^k / Γ(αk + 1)`.
pub fn ml1(alpha: f64, z: f64) -> Result<f64> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::Parameter(format!("alpha must be non-negative, got {alpha}")));
    }
    check_argument(alpha, z)?;
    if z == 0.0 {
        return Ok(1.0);
    }
    let lz = z.abs().ln();
    sum_series(|k| k as f64 * lz - ln_gamma(alpha * k as f64 + 1.0), z < 0.0)
}

/// `E^γ_{α,β}(z)`.
pub fn prabhakar_series(p: &PrabhakarTriple, z: f64) -> Result<f64> {
    check_argument(p.alpha, z)?;
    if z == 0.0 {
        return Ok((-ln_gamma(p.beta)).exp());
    }
    let lz = z.abs().ln();
    sum_series(|k| p.ln_coefficient(k) + k as f64 * lz, z < 0.0)
}

/// `x^{β-1} E^γ_{α,β}(-λ x^α)`.
pub fn prabhakar_kernel(p: &PrabhakarTriple, lambda: f64, x: f64) -> Result<f64> {
    check_kernel_args(lambda, x)?;
    Ok(x.powf(p.beta - 1.0) * prabhakar_series(p, -lambda * x.powf(p.alpha))?)
}

fn check_kernel_args(lambda: f64, x: f64) -> Result<()> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Parameter(format!("lambda must be non-negative, got {lambda}")));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x must be positive, got {x}")));
    }
    Ok(())
}

/// `s^{αγ-β} / (λ + s^α)^γ` for `s > 0`.
pub fn prabhakar_laplace_closed(p: &PrabhakarTriple, lambda: f64, s: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!("closed-form transform needs s > 0, got {s}")));
    }
    if !(lambda >= 0.0) {
        return Err(Error::Parameter(format!("lambda must be non-negative, got {lambda}")));
    }
    let ls = s.ln();
    Ok(((p.alpha * p.gamma - p.beta) * ls - p.gamma * (lambda + (p.alpha * ls).exp()).ln()).exp())
}

/// The Prabhakar kernel at `x` by Talbot inversion of its transform.
pub fn prabhakar_via_inversion(p: &PrabhakarTriple, lambda: f64, x: f64, spec: &QuadSpec) -> Result<f64> {
    check_kernel_args(lambda, x)?;
    let e1 = p.alpha * p.gamma - p.beta;
    let transform = |s: Complex64| {
        let sa = s.powf(p.alpha);
        s.powf(e1) / (sa + lambda).powf(p.gamma)
    };
    Ok(inverse_laplace_checked(transform, x, spec)?.value)
}

/// `E^γ_{α,β}(z)`, `z <= 0`, as the inverted kernel at `x = 1`, `λ = -z`.
pub fn prabhakar_inversion_value(p: &PrabhakarTriple, z: f64, spec: &QuadSpec) -> Result<f64> {
    if !(z <= 0.0) {
        return Err(Error::Domain(format!("inversion route covers z <= 0, got {z}")));
    }
    prabhakar_via_inversion(p, -z, 1.0, spec)
}

/// `E^γ_{α,β}(z)` by the series, falling back to inversion for `z <= 0`
/// when the series refuses.
pub fn prabhakar_value(p: &PrabhakarTriple, z: f64, spec: &QuadSpec) -> Result<f64> {
    match prabhakar_series(p, z) {
        Err(Error::Route(_)) if z <= 0.0 && p.alpha > 0.0 => prabhakar_inversion_value(p, z, spec),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{gamma, inverse_laplace, laplace_numeric};
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn elementary_values() {
        assert_eq!(ml1(0.7, 0.0).unwrap(), 1.0);
        assert!(rel(ml1(1.0, -2.0).unwrap(), (-2f64).exp()) < 1e-14);
        assert!(rel(ml1(2.0, -1.0).unwrap(), 1f64.cos()) < 1e-14);
        let p = PrabhakarTriple::new(0.6, 1.7, 0.8).unwrap();
        assert!(rel(prabhakar_series(&p, 0.0).unwrap(), 1.0 / gamma(1.7)) < 1e-15);
        let geo = PrabhakarTriple::new(0.0, 1.0, 1.0).unwrap();
        assert!(rel(prabhakar_series(&geo, 0.5).unwrap(), 2.0) < 1e-15);
    }

    #[test]
    fn matches_high_precision_reference() {
        // 60-digit series sums
        let cases = [
            (0.5, 1.0, 1.0, -1.0, 0.427_583_576_155_807_004_41),
            (0.6, 1.2, 0.8, -1.5, 0.477_013_573_738_802_903_43),
            (0.7, 1.5, 1.1, -1.710_775_359_985_901, 0.369_003_858_490_316_483_98),
            (0.9, 2.0, 1.5, -3.0, 0.149_569_632_260_240_616_32),
            (0.3, 1.0, 1.0, -2.0, 0.290_232_226_167_875_355_04),
            (1.0, 2.0, 1.0, -1.0, 0.632_120_558_828_557_678_4),
            (0.6, 1.4, 1.3, -0.687_447_215_445_590_4, 0.569_628_736_309_150_553_39),
        ];
        for (a, b, g, z, want) in cases {
            let p = PrabhakarTriple::new(a, b, g).unwrap();
            let got = prabhakar_series(&p, z).unwrap();
            assert!(rel(got, want) < 1e-9, "({a},{b},{g};{z}): {got} vs {want}");
        }
    }

    #[test]
    fn refuses_out_of_budget_arguments() {
        let p = PrabhakarTriple::mittag_leffler(0.5).unwrap();
        assert!(matches!(prabhakar_series(&p, -31.0), Err(Error::Route(_))));
        assert!(matches!(ml1(0.3, -3.03), Err(Error::Route(_))));
        // about 1e8 amplification
        assert!(matches!(ml1(0.5, -4.0), Err(Error::Route(_))));
        let q = PrabhakarTriple::new(0.0, 1.0, 1.0).unwrap();
        assert!(matches!(prabhakar_series(&q, -1.0), Err(Error::Route(_))));
    }

    #[test]
    fn reduces_to_one_parameter_function() {
        for a in [0.2, 0.5, 0.8, 1.0] {
            for z in [-2.0, -0.7, 0.3, 1.5] {
                let p = PrabhakarTriple::mittag_leffler(a).unwrap();
                match (prabhakar_series(&p, z), ml1(a, z)) {
                    (Ok(x), Ok(y)) => assert!((x - y).abs() <= 1e-14 * y.abs().max(1.0), "{a} {z}"),
                    (Err(Error::Route(_)), Err(Error::Route(_))) => {}
                    other => panic!("routes differ at {a} {z}: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn kernel_values() {
        let p = PrabhakarTriple::new(0.7, 1.5, 1.1).unwrap();
        assert!(rel(prabhakar_kernel(&p, 0.0, 2.0).unwrap(), 2f64.sqrt() / gamma(1.5)) < 1e-14);
        let m = PrabhakarTriple::mittag_leffler(0.5).unwrap();
        assert_eq!(prabhakar_kernel(&m, 1.0, 1.0).unwrap(), ml1(0.5, -1.0).unwrap());
        assert!(prabhakar_kernel(&m, -1.0, 1.0).is_err());
        assert!(prabhakar_kernel(&m, 1.0, 0.0).is_err());
    }

    #[test]
    fn closed_transform() {
        let p = PrabhakarTriple::new(0.5, 1.2, 0.9).unwrap();
        let v = prabhakar_laplace_closed(&p, 1.0, 2.0).unwrap();
        assert!(rel(v, 2f64.powf(-0.75) / (1.0 + 2f64.sqrt()).powf(0.9)) < 1e-14);
        assert!(rel(prabhakar_laplace_closed(&p, 0.0, 3.0).unwrap(), 3f64.powf(-1.2)) < 1e-14);
        let m = PrabhakarTriple::mittag_leffler(0.4).unwrap();
        let s: f64 = 1.7;
        let v = prabhakar_laplace_closed(&m, 2.0, s).unwrap();
        assert!(rel(v, s.powf(-0.6) / (2.0 + s.powf(0.4))) < 1e-14);
        assert!(prabhakar_laplace_closed(&p, 1.0, 0.0).is_err());
    }

    #[test]
    fn kernel_transform_matches_closed_form() {
        let spec = QuadSpec::default();
        let p = PrabhakarTriple::new(0.7, 1.5, 1.1).unwrap();
        // past the series budget the kernel comes from inversion
        let kernel = |x: f64| prabhakar_kernel(&p, 2.0, x).or_else(|_| prabhakar_via_inversion(&p, 2.0, x, &spec)).unwrap();
        let v = laplace_numeric(kernel, 1.0, &spec, None).unwrap().value;
        assert!((v - 3f64.powf(-1.1)).abs() < 1e-6, "{v}");
        let q = PrabhakarTriple::new(0.8, 0.9, 1.2).unwrap();
        let s = 2.0;
        let v = laplace_numeric(
            |x| prabhakar_kernel(&q, 0.5, x).unwrap(),
            s,
            &spec.relative(1e-10),
            Some(q.beta - 1.0),
        )
        .unwrap()
        .value;
        assert!(rel(v, prabhakar_laplace_closed(&q, 0.5, s).unwrap()) < 1e-6);
    }

    #[test]
    fn inversion_route() {
        let spec = QuadSpec::default();
        let e = PrabhakarTriple::new(1.0, 1.0, 1.0).unwrap();
        assert!(rel(prabhakar_via_inversion(&e, 1.0, 2.0, &spec).unwrap(), (-2f64).exp()) < 1e-9);
        let m = PrabhakarTriple::mittag_leffler(0.5).unwrap();
        let v = prabhakar_via_inversion(&m, 1.0, 1.0, &spec).unwrap();
        assert!((v - ml1(0.5, -1.0).unwrap()).abs() < 1e-8);
        let p = PrabhakarTriple::new(0.6, 1.4, 1.3).unwrap();
        let v = prabhakar_via_inversion(&p, 0.5, 1.7, &spec).unwrap();
        assert!((v - prabhakar_kernel(&p, 0.5, 1.7).unwrap()).abs() < 1e-7);
        let w = inverse_laplace(|s: Complex64| s.powf(-0.5) / (s.powf(0.5) + 1.0), 1.0, &spec).unwrap();
        assert!((w - ml1(0.5, -1.0).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn nonincreasing_in_lambda() {
        let p = PrabhakarTriple::new(0.6, 1.3, 1.4).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..40 {
            let v = prabhakar_series(&p, -0.1 * i as f64).unwrap();
            assert!(v <= prev);
            prev = v;
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn series_and_inversion_agree(a in 0.55f64..1.0, b in 0.6f64..2.5, g in 0.3f64..2.0, lam in 0.0f64..4.0) {
            let p = PrabhakarTriple::new(a, b, g).unwrap();
            let spec = QuadSpec::default();
            if let Ok(s) = prabhakar_series(&p, -lam) {
                let v = prabhakar_inversion_value(&p, -lam, &spec).unwrap();
                prop_assert!((s - v).abs() < 1e-7 * (1.0 + s.abs()), "{} vs {}", s, v);
            }
        }
    }
}
