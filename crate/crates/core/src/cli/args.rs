use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::table::Format;
use crate::numerics::QuadSpec;

/// A parameter given as `v`, `a,b,c`, or `start:stop:count` (inclusive, linear).
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep(pub Vec<f64>);

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        let values = match parts.as_slice() {
            [one] => one.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
            [start, stop, count] => {
                let (a, b) = (num(start)?, num(stop)?);
                let n: usize = count.trim().parse().map_err(|_| format!("sweep count must be an integer: {count:?}"))?;
                match n {
                    0 => return Err("sweep count must be at least 1".into()),
                    1 => vec![a],
                    _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
                }
            }
            _ => return Err(format!("expected v, a,b,c or start:stop:count, got {s:?}")),
        };
        if values.is_empty() {
            return Err("empty sweep".into());
        }
        Ok(Sweep(values))
    }
}

/// Non-negative integers as `n`, `a,b` or `a..b` (inclusive).
#[derive(Debug, Clone, PartialEq)]
pub struct Orders(pub Vec<u32>);

impl FromStr for Orders {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let int = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("not a non-negative integer: {t:?}"));
        let values = if let Some((a, b)) = s.split_once("..") {
            let (a, b) = (int(a)?, int(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty range {s:?}"));
            }
            (a..=b).collect()
        } else {
            s.split(',').map(int).collect::<Result<Vec<_>, _>>()?
        };
        Ok(Orders(values))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Route {
    Series,
    Mixture,
    Inversion,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Series => "series",
            Route::Mixture => "mixture",
            Route::Inversion => "inversion",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Routes,
    Laplace,
    Inversion,
    MassMoments,
    MonteCarlo,
    Beta,
    Id,
    Semigroup,
    Scaling,
    ThetaShift,
    Cm,
}

#[derive(Debug, Parser)]
#[command(name = "prabhakar", version, about = "Prabhakar functions through gamma mixtures of stable densities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; defaults to stdout, or `<dir>/<command>.<ext>` when an output directory is set.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Default output directory.
    #[arg(long, global = true, env = "PRABHAKAR_OUTPUT_DIR")]
    pub output_dir: Option<PathBuf>,
    /// Random seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance of integrals and inversions.
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Absolute tolerance of integrals.
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    /// Subdivision budget of adaptive quadrature.
    #[arg(long, global = true)]
    pub max_subdivisions: Option<usize>,
    /// Talbot contour nodes.
    #[arg(long, global = true)]
    pub inversion_nodes: Option<usize>,
}

impl Common {
    pub fn spec(&self) -> QuadSpec {
        let d = QuadSpec::default();
        QuadSpec {
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            max_subdivisions: self.max_subdivisions.unwrap_or(d.max_subdivisions),
            inversion_nodes: self.inversion_nodes.unwrap_or(d.inversion_nodes),
            ..d
        }
    }
}

#[derive(Debug, Args, Clone)]
pub struct BaseSweep {
    #[arg(long)]
    pub alpha: Sweep,
    #[arg(long)]
    pub beta: Sweep,
    #[arg(long)]
    pub gamma: Sweep,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub theta: Sweep,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mittag-Leffler function E_α(z).
    EvalMl {
        #[arg(long)]
        alpha: Sweep,
        #[arg(long, allow_hyphen_values = true)]
        z: Sweep,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Route::Series, Route::Inversion])]
        routes: Vec<Route>,
        /// Largest accepted route disagreement, relative to 1 + |value|.
        #[arg(long, default_value_t = 1e-6)]
        agree_tol: f64,
    },
    /// Prabhakar kernel x^{β+θ-1} E^{γ+θ/α}_{α,β+θ}(-λ x^α) by several routes.
    EvalPrabhakar {
        #[command(flatten)]
        base: BaseSweep,
        #[arg(long)]
        lambda: Sweep,
        #[arg(long)]
        x: Sweep,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Route::Series, Route::Mixture, Route::Inversion])]
        routes: Vec<Route>,
        /// Largest accepted route disagreement, relative to 1 + |value|.
        #[arg(long, default_value_t = 1e-6)]
        agree_tol: f64,
    },
    /// One-sided stable density and distribution function.
    EvalStable {
        #[arg(long)]
        alpha: Sweep,
        /// Scale parameter t of the law with transform e^{-t s^α}.
        #[arg(long, default_value = "1")]
        t: Sweep,
        #[arg(long)]
        x: Sweep,
    },
    /// Gamma mixture M^ν_{α,μ}(x|λ) in composite parameters.
    EvalMixture {
        #[arg(long)]
        alpha: Sweep,
        #[arg(long)]
        nu: Sweep,
        #[arg(long)]
        mu: Sweep,
        #[arg(long)]
        lambda: Sweep,
        #[arg(long)]
        x: Sweep,
    },
    /// Densities q and p of the four-parameter law.
    Density {
        #[command(flatten)]
        base: BaseSweep,
        #[arg(long)]
        t: Sweep,
    },
    /// Analytic and quadrature moments of the four-parameter law.
    Moments {
        #[command(flatten)]
        base: BaseSweep,
        #[arg(long, default_value = "0..3")]
        n: Orders,
    },
    /// Draws from the four-parameter law with a moment summary.
    Sample {
        #[command(flatten)]
        base: BaseSweep,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Emit only the moment summary.
        #[arg(long)]
        summary_only: bool,
    },
    /// Invariant suite with a pass/fail table.
    Verify {
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Suite::All])]
        suite: Vec<Suite>,
    },
    /// Finite-difference complete-monotonicity test of λ ↦ Γ(β+θ) E^{γ+θ/α}_{α,β+θ}(-λ).
    CmCheck {
        #[command(flatten)]
        base: BaseSweep,
        #[arg(long, default_value_t = 10.0)]
        lambda_max: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 5)]
        order: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::EvalMl { .. } => "eval-ml",
            Command::EvalPrabhakar { .. } => "eval-prabhakar",
            Command::EvalStable { .. } => "eval-stable",
            Command::EvalMixture { .. } => "eval-mixture",
            Command::Density { .. } => "density",
            Command::Moments { .. } => "moments",
            Command::Sample { .. } => "sample",
            Command::Verify { .. } => "verify",
            Command::CmCheck { .. } => "cm-check",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweeps() {
        assert_eq!("0.5".parse::<Sweep>().unwrap().0, vec![0.5]);
        assert_eq!("1,2.5".parse::<Sweep>().unwrap().0, vec![1.0, 2.5]);
        assert_eq!("0:1:3".parse::<Sweep>().unwrap().0, vec![0.0, 0.5, 1.0]);
        assert_eq!("2:9:1".parse::<Sweep>().unwrap().0, vec![2.0]);
        assert!("0:1:0".parse::<Sweep>().is_err());
        assert!("0:1".parse::<Sweep>().is_err());
        assert!("a".parse::<Sweep>().is_err());
    }

    #[test]
    fn orders() {
        assert_eq!("0..3".parse::<Orders>().unwrap().0, vec![0, 1, 2, 3]);
        assert_eq!("2".parse::<Orders>().unwrap().0, vec![2]);
        assert_eq!("1,4".parse::<Orders>().unwrap().0, vec![1, 4]);
        assert!("3..1".parse::<Orders>().is_err());
    }

    #[test]
    fn parses_commands() {
        let c = Cli::try_parse_from([
            "prabhakar", "eval-prabhakar", "--alpha", "0.5", "--beta", "1", "--gamma", "1", "--theta", "0",
            "--lambda", "1", "--x", "1", "--routes", "series,mixture",
        ])
        .unwrap();
        let Command::EvalPrabhakar { routes, .. } = c.command else { panic!() };
        assert_eq!(routes, vec![Route::Series, Route::Mixture]);
        let c = Cli::try_parse_from(["prabhakar", "verify", "--suite", "all", "--seed", "0"]).unwrap();
        assert_eq!(c.common.seed, 0);
        assert!(Cli::try_parse_from(["prabhakar", "moments", "--alpha", "0.5"]).is_err());
    }
}
