use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::args::{BaseSweep, Route, Suite};
use super::table::{Cell, Table};
use super::verify::run_suite;
use crate::distributions::{cm_check_values, p_laplace_closed, q_density, uniform_grid, PollardLaw, PollardSampler};
use crate::error::{Error, Result};
use crate::mixture::{BaseParams, MixtureEvaluator};
use crate::mlf::{prabhakar_kernel, prabhakar_series, prabhakar_via_inversion, PrabhakarTriple};
use crate::numerics::{ln_gamma, QuadSpec};
use crate::stable::{stable_cdf, stable_pdf, StableLaw};

/// A table plus whether any requested check failed.
pub struct Outcome {
    pub table: Table,
    pub failed: bool,
}

/// Cartesian product, first list varying slowest.
fn product(lists: &[&[f64]]) -> Vec<Vec<f64>> {
    lists.iter().fold(vec![Vec::new()], |acc, list| {
        acc.iter()
            .flat_map(|prefix| {
                list.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

fn base_points(b: &BaseSweep, extra: &[&[f64]]) -> Vec<Vec<f64>> {
    let mut lists: Vec<&[f64]> = vec![&b.alpha.0, &b.beta.0, &b.gamma.0, &b.theta.0];
    lists.extend_from_slice(extra);
    product(&lists)
}

fn num_cells(p: &[f64]) -> Vec<Cell> {
    p.iter().map(|&v| Cell::Num(v)).collect()
}

/// The violated constraint, without the error-kind prefix.
fn constraint(e: &Error) -> String {
    match e {
        Error::Parameter(m) | Error::Domain(m) => m.clone(),
        other => other.to_string(),
    }
}

/// Fails with the first row's message when no row of the sweep is valid.
fn require_some_valid(errors: &[Option<String>]) -> Result<()> {
    if !errors.is_empty() && errors.iter().all(Option::is_some) {
        return Err(Error::Parameter(errors[0].clone().unwrap_or_default()));
    }
    Ok(())
}

/// One row of route values with pairwise deviations.
struct RouteRow {
    invalid: Option<String>,
    values: Vec<Option<f64>>,
    notes: Vec<String>,
}

fn route_table(
    names: &[&str],
    points: &[Vec<f64>],
    routes: &[Route],
    rows: Vec<RouteRow>,
    agree_tol: f64,
) -> Result<Outcome> {
    require_some_valid(&rows.iter().map(|r| r.invalid.clone()).collect::<Vec<_>>())?;
    let mut columns: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    columns.push("status".into());
    columns.extend(routes.iter().map(|r| r.name().to_string()));
    let mut pairs = Vec::new();
    for i in 0..routes.len() {
        for j in i + 1..routes.len() {
            pairs.push((i, j));
            columns.push(format!("dev_{}_{}", routes[i].name(), routes[j].name()));
        }
    }
    columns.push("note".into());
    let mut table = Table::new(&columns);
    let mut failed = false;
    for (p, row) in points.iter().zip(rows) {
        let mut cells = num_cells(p);
        if let Some(msg) = row.invalid {
            cells.push("invalid".into());
            cells.extend(std::iter::repeat_n(Cell::Empty, routes.len() + pairs.len()));
            cells.push(msg.into());
            table.push(cells);
            continue;
        }
        let mut notes = row.notes;
        let mut disagree = false;
        let devs: Vec<Cell> = pairs
            .iter()
            .map(|&(i, j)| match (row.values[i], row.values[j]) {
                (Some(a), Some(b)) => {
                    let d = (a - b).abs();
                    if !(d <= agree_tol * (1.0 + a.abs())) {
                        disagree = true;
                        notes.push(format!("{} and {} disagree", routes[i].name(), routes[j].name()));
                    }
                    Cell::Num(d)
                }
                _ => Cell::Empty,
            })
            .collect();
        failed |= disagree;
        let status = if disagree {
            "mismatch"
        } else if row.values.iter().all(Option::is_some) {
            "ok"
        } else {
            "partial"
        };
        cells.push(status.into());
        cells.extend(row.values.iter().map(|&v| Cell::from(v)));
        cells.extend(devs);
        cells.push(notes.join("; ").into());
        table.push(cells);
    }
    Ok(Outcome { table, failed })
}

/// Mixture evaluators shared across rows, one per `(α, ν)`.
fn evaluators(keys: impl IntoIterator<Item = (f64, f64)>, spec: &QuadSpec) -> BTreeMap<(u64, u64), Result<MixtureEvaluator>> {
    let keys: BTreeMap<(u64, u64), (f64, f64)> =
        keys.into_iter().map(|(a, nu)| ((a.to_bits(), nu.to_bits()), (a, nu))).collect();
    keys.into_par_iter().map(|(k, (a, nu))| (k, MixtureEvaluator::new(a, nu, spec))).collect()
}

fn mixture_value(
    evs: &BTreeMap<(u64, u64), Result<MixtureEvaluator>>,
    alpha: f64,
    nu: f64,
    mu: f64,
    lambda: f64,
    x: f64,
    spec: &QuadSpec,
) -> Result<f64> {
    match &evs[&(alpha.to_bits(), nu.to_bits())] {
        Ok(ev) => Ok(ev.eval(mu, lambda, x, spec)?.value),
        Err(e) => Err(e.clone()),
    }
}

fn collect_route(values: &mut Vec<Option<f64>>, notes: &mut Vec<String>, route: Route, r: Result<f64>) {
    match r {
        Ok(v) => values.push(Some(v)),
        Err(e) => {
            values.push(None);
            notes.push(format!("{}: {e}", route.name()));
        }
    }
}

pub fn eval_ml(alpha: &[f64], z: &[f64], routes: &[Route], agree_tol: f64, spec: &QuadSpec) -> Result<Outcome> {
    let points = product(&[alpha, z]);
    let evs = if routes.contains(&Route::Mixture) {
        evaluators(alpha.iter().filter(|&&a| a > 0.0 && a <= 1.0).map(|&a| (a, 1.0 - a)), spec)
    } else {
        BTreeMap::new()
    };
    let rows = points
        .par_iter()
        .map(|p| {
            let (a, z) = (p[0], p[1]);
            let triple = match PrabhakarTriple::mittag_leffler(a) {
                Ok(t) => t,
                Err(e) => return RouteRow { invalid: Some(constraint(&e)), values: vec![], notes: vec![] },
            };
            let mut values = Vec::new();
            let mut notes = Vec::new();
            for &r in routes {
                let v = match r {
                    Route::Series => prabhakar_series(&triple, z),
                    Route::Inversion => {
                        if z <= 0.0 {
                            prabhakar_via_inversion(&triple, -z, 1.0, spec)
                        } else {
                            Err(Error::Route("inversion covers z <= 0".into()))
                        }
                    }
                    Route::Mixture => {
                        if !(a > 0.0 && a <= 1.0) || z > 0.0 {
                            Err(Error::Route("mixture covers 0 < alpha <= 1 and z <= 0".into()))
                        } else {
                            mixture_value(&evs, a, 1.0 - a, 1.0, -z, 1.0, spec)
                        }
                    }
                };
                collect_route(&mut values, &mut notes, r, v);
            }
            RouteRow { invalid: None, values, notes }
        })
        .collect();
    route_table(&["alpha", "z"], &points, routes, rows, agree_tol)
}

pub fn eval_prabhakar(
    base: &BaseSweep,
    lambda: &[f64],
    x: &[f64],
    routes: &[Route],
    agree_tol: f64,
    spec: &QuadSpec,
) -> Result<Outcome> {
    let points = base_points(base, &[lambda, x]);
    let params: Vec<Result<BaseParams>> = points.iter().map(|p| BaseParams::new(p[0], p[1], p[2], p[3])).collect();
    let evs = if routes.contains(&Route::Mixture) {
        evaluators(params.iter().flatten().map(|b| (b.alpha, b.nu())), spec)
    } else {
        BTreeMap::new()
    };
    let rows = points
        .par_iter()
        .zip(&params)
        .map(|(p, b)| {
            let b = match b {
                Ok(b) => b,
                Err(e) => return RouteRow { invalid: Some(constraint(e)), values: vec![], notes: vec![] },
            };
            let (l, x) = (p[4], p[5]);
            let triple = b.prabhakar_triple();
            let mut values = Vec::new();
            let mut notes = Vec::new();
            for &r in routes {
                let v = match r {
                    Route::Series => prabhakar_kernel(&triple, l, x),
                    Route::Mixture => mixture_value(&evs, b.alpha, b.nu(), b.mu(), l, x, spec),
                    Route::Inversion => prabhakar_via_inversion(&triple, l, x, spec),
                };
                collect_route(&mut values, &mut notes, r, v);
            }
            RouteRow { invalid: None, values, notes }
        })
        .collect();
    route_table(&["alpha", "beta", "gamma", "theta", "lambda", "x"], &points, routes, rows, agree_tol)
}

pub fn eval_stable(alpha: &[f64], t: &[f64], x: &[f64], spec: &QuadSpec) -> Result<Outcome> {
    let points = product(&[alpha, t, x]);
    let rows: Vec<(Option<String>, Vec<Cell>)> = points
        .par_iter()
        .map(|p| {
            let (a, t, x) = (p[0], p[1], p[2]);
            let law = match StableLaw::new(a, t) {
                Ok(l) => l,
                Err(e) => return (Some(constraint(&e)), vec!["invalid".into(), Cell::Empty, Cell::Empty, constraint(&e).into()]),
            };
            let pdf = stable_pdf(&law, x, spec);
            let cdf = if law.is_degenerate() {
                Ok(if x >= t { 1.0 } else { 0.0 })
            } else {
                stable_cdf(a, x * t.powf(-1.0 / a), spec)
            };
            let notes: Vec<String> = [("pdf", &pdf), ("cdf", &cdf)]
                .iter()
                .filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{n}: {e}")))
                .collect();
            let status = if notes.is_empty() { "ok" } else { "partial" };
            (None, vec![status.into(), pdf.ok().into(), cdf.ok().into(), notes.join("; ").into()])
        })
        .collect();
    require_some_valid(&rows.iter().map(|r| r.0.clone()).collect::<Vec<_>>())?;
    let mut table = Table::new(&["alpha", "t", "x", "status", "pdf", "cdf", "note"]);
    for (p, (_, cells)) in points.iter().zip(rows) {
        table.push([num_cells(p), cells].concat());
    }
    Ok(Outcome { table, failed: false })
}

pub fn eval_mixture(alpha: &[f64], nu: &[f64], mu: &[f64], lambda: &[f64], x: &[f64], spec: &QuadSpec) -> Result<Outcome> {
    let points = product(&[alpha, nu, mu, lambda, x]);
    let evs = evaluators(
        product(&[alpha, nu]).into_iter().filter(|k| k[0] > 0.0 && k[0] <= 1.0 && k[1] >= 0.0).map(|k| (k[0], k[1])),
        spec,
    );
    let rows: Vec<(Option<String>, Vec<Cell>)> = points
        .par_iter()
        .map(|p| {
            let invalid = |e: Error| (Some(constraint(&e)), vec!["invalid".into(), Cell::Empty, Cell::Empty, constraint(&e).into()]);
            let ev = match evs.get(&(p[0].to_bits(), p[1].to_bits())) {
                Some(Ok(ev)) => ev,
                Some(Err(e)) => return invalid(e.clone()),
                None => return invalid(crate::mixture::MixtureParams::new(p[0], p[1], p[2]).err().unwrap_or(Error::Parameter("invalid (alpha, nu)".into()))),
            };
            match ev.eval(p[2], p[3], p[4], spec) {
                Ok(r) => (None, vec!["ok".into(), r.value.into(), r.err_estimate.into(), Cell::Text(String::new())]),
                Err(e @ (Error::Parameter(_) | Error::Domain(_))) => invalid(e),
                Err(e) => (None, vec!["failed".into(), Cell::Empty, Cell::Empty, e.to_string().into()]),
            }
        })
        .collect();
    require_some_valid(&rows.iter().map(|r| r.0.clone()).collect::<Vec<_>>())?;
    let mut table = Table::new(&["alpha", "nu", "mu", "lambda", "x", "status", "value", "err_estimate", "note"]);
    for (p, (_, cells)) in points.iter().zip(rows) {
        table.push([num_cells(p), cells].concat());
    }
    Ok(Outcome { table, failed: false })
}

pub fn density(base: &BaseSweep, t: &[f64], spec: &QuadSpec) -> Result<Outcome> {
    let points = base_points(base, &[t]);
    let rows: Vec<(Option<String>, Vec<Cell>)> = points
        .par_iter()
        .map(|p| {
            let b = match BaseParams::new(p[0], p[1], p[2], p[3]) {
                Ok(b) => b,
                Err(e) => return (Some(constraint(&e)), vec!["invalid".into(), Cell::Empty, Cell::Empty, constraint(&e).into()]),
            };
            match q_density(&b, p[4], spec) {
                Ok(q) => {
                    let pd = q * ln_gamma(b.beta + b.theta).exp();
                    (None, vec!["ok".into(), q.into(), pd.into(), Cell::Text(String::new())])
                }
                Err(e) => (None, vec!["failed".into(), Cell::Empty, Cell::Empty, e.to_string().into()]),
            }
        })
        .collect();
    require_some_valid(&rows.iter().map(|r| r.0.clone()).collect::<Vec<_>>())?;
    let mut table = Table::new(&["alpha", "beta", "gamma", "theta", "t", "status", "q", "p", "note"]);
    for (p, (_, cells)) in points.iter().zip(rows) {
        table.push([num_cells(p), cells].concat());
    }
    Ok(Outcome { table, failed: false })
}

/// Per-parameter-set rows, `Err` for invalid sets.
fn per_set<T: Send>(base: &BaseSweep, f: impl Fn(BaseParams) -> T + Sync) -> (Vec<Vec<f64>>, Vec<std::result::Result<T, String>>) {
    let sets = base_points(base, &[]);
    let out = sets
        .par_iter()
        .map(|p| BaseParams::new(p[0], p[1], p[2], p[3]).map(&f).map_err(|e| constraint(&e)))
        .collect();
    (sets, out)
}

pub fn moments(base: &BaseSweep, orders: &[u32], spec: &QuadSpec) -> Result<Outcome> {
    let (sets, results) = per_set(base, |b| {
        let law = PollardLaw::new(b, spec);
        orders
            .iter()
            .map(|&n| {
                let law = law.as_ref().map_err(Clone::clone)?;
                let exact = law.moment(n);
                let numeric = law.expect(n as f64, 0.0, spec)?.value;
                Ok((exact, numeric))
            })
            .collect::<Vec<Result<(f64, f64)>>>()
    });
    require_some_valid(&results.iter().map(|r| r.as_ref().err().cloned()).collect::<Vec<_>>())?;
    let mut table = Table::new(&["alpha", "beta", "gamma", "theta", "n", "status", "analytic", "numeric", "deviation", "note"]);
    let mut failed = false;
    for (p, r) in sets.iter().zip(results) {
        match r {
            Err(msg) => {
                for &n in orders {
                    table.push([num_cells(p), vec![n.into(), "invalid".into(), Cell::Empty, Cell::Empty, Cell::Empty, msg.clone().into()]].concat());
                }
            }
            Ok(rows) => {
                for (&n, row) in orders.iter().zip(rows) {
                    let cells = match row {
                        Ok((exact, numeric)) => {
                            let dev = (numeric - exact).abs() / exact.max(1.0);
                            let ok = dev <= 1e-6;
                            failed |= !ok;
                            vec![
                                n.into(),
                                if ok { "ok" } else { "mismatch" }.into(),
                                exact.into(),
                                numeric.into(),
                                dev.into(),
                                Cell::Text(String::new()),
                            ]
                        }
                        Err(e) => {
                            let exact = crate::distributions::p_moment(&BaseParams::new(p[0], p[1], p[2], p[3])?, n)?;
                            vec![n.into(), "partial".into(), exact.into(), Cell::Empty, Cell::Empty, e.to_string().into()]
                        }
                    };
                    table.push([num_cells(p), cells].concat());
                }
            }
        }
    }
    Ok(Outcome { table, failed })
}

pub fn sample(base: &BaseSweep, count: usize, summary_only: bool, seed: u64, spec: &QuadSpec) -> Result<Outcome> {
    if count < 2 {
        return Err(Error::Parameter(format!("count must be at least 2, got {count}")));
    }
    let sets = base_points(base, &[]);
    // outer error: parameter set outside the domain; inner: sampler failure
    type Draws = std::result::Result<Result<(Vec<f64>, &'static str)>, String>;
    let results: Vec<Draws> = sets
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let b = BaseParams::new(p[0], p[1], p[2], p[3]).map_err(|e| constraint(&e))?;
            Ok(PollardSampler::new(&b, spec).and_then(|s| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                let route = match s.route() {
                    crate::distributions::SamplerRoute::PointMass => "point-mass",
                    crate::distributions::SamplerRoute::Beta => "beta",
                    crate::distributions::SamplerRoute::Transform => "stable-transform",
                    crate::distributions::SamplerRoute::TiltedRejection => "tilted-rejection",
                    crate::distributions::SamplerRoute::InverseCdf => "inverse-cdf",
                };
                Ok((s.sample_n(count, &mut rng)?, route))
            }))
        })
        .collect();
    require_some_valid(&results.iter().map(|r| r.as_ref().err().cloned()).collect::<Vec<_>>())?;
    let mut table = Table::new(&["alpha", "beta", "gamma", "theta", "kind", "index", "value", "analytic", "std_error", "note"]);
    for (p, r) in sets.iter().zip(results) {
        let row = |kind: &str, idx: usize, v: Cell, a: Cell, se: Cell, note: String| {
            [num_cells(p), vec![kind.into(), idx.into(), v, a, se, note.into()]].concat()
        };
        match r {
            Err(msg) => table.push(row("invalid", 0, Cell::Empty, Cell::Empty, Cell::Empty, msg)),
            Ok(Err(e)) => table.push(row("failed", 0, Cell::Empty, Cell::Empty, Cell::Empty, e.to_string())),
            Ok(Ok((draws, route))) => {
                if !summary_only {
                    for (i, &d) in draws.iter().enumerate() {
                        table.push(row("draw", i, d.into(), Cell::Empty, Cell::Empty, String::new()));
                    }
                }
                let b = BaseParams::new(p[0], p[1], p[2], p[3])?;
                let n = draws.len() as f64;
                for k in 1..=3u32 {
                    let pw: Vec<f64> = draws.iter().map(|d| d.powi(k as i32)).collect();
                    let m = pw.iter().sum::<f64>() / n;
                    let var = pw.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0);
                    let exact = crate::distributions::p_moment(&b, k)?;
                    table.push(row("moment", k as usize, m.into(), exact.into(), (var / n).sqrt().into(), route.into()));
                }
            }
        }
    }
    Ok(Outcome { table, failed: false })
}

pub fn verify(suites: &[Suite], seed: u64, spec: &QuadSpec) -> Result<Outcome> {
    let outcomes = run_suite(suites, seed, spec);
    let mut table = Table::new(&["check", "cases", "skipped", "max_residual", "tolerance", "status", "note"]);
    let mut failed = false;
    for o in outcomes {
        failed |= !o.passed;
        table.push(vec![
            o.name.into(),
            o.cases.into(),
            o.skipped.into(),
            o.max_residual.into(),
            o.tolerance.into(),
            if o.passed { "pass" } else { "fail" }.into(),
            o.note.into(),
        ]);
    }
    Ok(Outcome { table, failed })
}

pub fn cm(base: &BaseSweep, lambda_max: f64, points: usize, order: usize, spec: &QuadSpec) -> Result<Outcome> {
    if !(lambda_max > 0.0) || points < 2 {
        return Err(Error::Parameter("cm-check needs lambda-max > 0 and at least 2 points".into()));
    }
    let grid = uniform_grid(lambda_max, points);
    let (sets, results) = per_set(base, |b| {
        let values: Result<Vec<f64>> = grid.iter().map(|&l| p_laplace_closed(&b, l, spec)).collect();
        values.map(|v| cm_check_values(&v, &grid, order))
    });
    require_some_valid(&results.iter().map(|r| r.as_ref().err().cloned()).collect::<Vec<_>>())?;
    let mut table = Table::new(&[
        "alpha", "beta", "gamma", "theta", "status", "passed", "violation_order", "violation_lambda", "min_margin", "note",
    ]);
    let mut failed = false;
    for (p, r) in sets.iter().zip(results) {
        let cells = match r {
            Err(msg) => vec!["invalid".into(), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, msg.into()],
            Ok(Err(e)) => {
                failed = true;
                vec!["failed".into(), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, e.to_string().into()]
            }
            Ok(Ok(rep)) => {
                failed |= !rep.passed;
                let min_margin = rep.margins.iter().copied().fold(f64::INFINITY, f64::min);
                vec![
                    if rep.passed { "ok" } else { "fail" }.into(),
                    rep.passed.into(),
                    rep.violation.as_ref().map_or(Cell::Empty, |v| v.order.into()),
                    rep.violation.as_ref().map_or(Cell::Empty, |v| v.lambda.into()),
                    if min_margin.is_finite() { min_margin.into() } else { Cell::Empty },
                    rep.note.unwrap_or_default().into(),
                ]
            }
        };
        table.push([num_cells(p), cells].concat());
    }
    Ok(Outcome { table, failed })
}
