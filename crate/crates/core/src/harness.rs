//! Benchmark matrices: run solvers over sampled instances, time them, and
//! summarize the results.
//!
//! Seeds: a [`RunSpec`] carries base instance and solver seeds; repetition
//! `k` uses `derive_seed(base, [k])` for both. Matrices expanded from a
//! master seed use
//!
//! ```text
//! instance base = derive_seed(master, [1, d, n])
//! solver base   = derive_seed(master, [2, solver tag, d, n])
//! ```
//!
//! so every solver at a given `(n, d, k)` sees the same graph.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{approximation_ratio_of, density_of, large_d_bounds, BoundsTable};
use crate::exact::exact_mis;
use crate::graph::Graph;
use crate::greedy::{greedy_min_degree, greedy_random};
use crate::independent_set::{validate_is, IndependentSet};
use crate::mcmc::{parallel_tempering, simulated_annealing, AnnealSchedule, PtConfig};
use crate::rng::{derive_seed, RNG_ALGORITHM};
use crate::rrg::{sample_rrg_detailed, RrgParams, SamplerMethod};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Degrees of the large-degree benchmark preset.
pub const HARD_BENCHMARK_DEGREES: [usize; 2] = [20, 100];

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("InsufficientPoints: scaling fit needs >= 3 distinct n, got {0}")]
    InsufficientPoints(usize),
    #[error("MixedRecords: scaling fit needs one solver and one degree, got {0}")]
    MixedRecords(String),
    #[error("UnknownFormat: '{0}' (expected csv, json-lines or plot-table)")]
    UnknownFormat(String),
    #[error("malformed record at line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SolverSpec {
    Ga,
    Dga,
    Sa { schedule: AnnealSchedule },
    Pt { config: PtConfig },
    Exact,
}

impl SolverSpec {
    pub fn id(&self) -> &'static str {
        match self {
            SolverSpec::Ga => "ga",
            SolverSpec::Dga => "dga",
            SolverSpec::Sa { .. } => "sa",
            SolverSpec::Pt { .. } => "pt",
            SolverSpec::Exact => "exact",
        }
    }

    /// Stable tag mixed into derived solver seeds.
    pub fn tag(&self) -> u64 {
        match self {
            SolverSpec::Ga => 1,
            SolverSpec::Dga => 2,
            SolverSpec::Sa { .. } => 3,
            SolverSpec::Pt { .. } => 4,
            SolverSpec::Exact => 5,
        }
    }

    pub fn sa_production() -> Self {
        SolverSpec::Sa {
            schedule: AnnealSchedule::production(),
        }
    }

    pub fn pt_production() -> Self {
        SolverSpec::Pt {
            config: PtConfig::production(),
        }
    }

    pub fn check(&self) -> Result<(), String> {
        match self {
            SolverSpec::Sa { schedule } => schedule.check().map_err(|e| e.to_string()),
            SolverSpec::Pt { config } => config.check().map_err(|e| e.to_string()),
            _ => Ok(()),
        }
    }

    /// Runs the solver. Only the exact solver can fail (instance too large).
    pub fn solve(&self, g: &Graph, seed: u64) -> Result<IndependentSet, String> {
        Ok(match self {
            SolverSpec::Ga => greedy_random(g, seed),
            SolverSpec::Dga => greedy_min_degree(g, seed),
            SolverSpec::Sa { schedule } => simulated_annealing(g, schedule, seed),
            SolverSpec::Pt { config } => parallel_tempering(g, config, seed),
            SolverSpec::Exact => exact_mis(g).map_err(|e| e.to_string())?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub solver: SolverSpec,
    pub n: usize,
    pub d: usize,
    pub instance_seed: u64,
    pub solver_seed: u64,
    pub repetitions: usize,
    #[serde(default)]
    pub sampler: SamplerMethod,
}

impl RunSpec {
    /// Spec whose seeds are derived from `master` and its coordinates.
    pub fn derived(
        solver: SolverSpec,
        n: usize,
        d: usize,
        repetitions: usize,
        master: u64,
    ) -> Self {
        let instance_seed = derive_seed(master, &[1, d as u64, n as u64]);
        let solver_seed = derive_seed(master, &[2, solver.tag(), d as u64, n as u64]);
        RunSpec {
            solver,
            n,
            d,
            instance_seed,
            solver_seed,
            repetitions,
            sampler: SamplerMethod::Auto,
        }
    }

    /// `(instance seed, solver seed)` used by repetition `k`.
    pub fn seeds(&self, k: usize) -> (u64, u64) {
        (
            derive_seed(self.instance_seed, &[k as u64]),
            derive_seed(self.solver_seed, &[k as u64]),
        )
    }
}

/// Outcome of one `(spec, repetition)` run. Failed runs carry `error` and
/// `valid = false`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub solver: String,
    pub params: SolverSpec,
    pub n: usize,
    pub d: usize,
    pub repetition: usize,
    pub instance_seed: u64,
    pub solver_seed: u64,
    pub sampler: Option<String>,
    pub alpha: Option<usize>,
    pub density: Option<f64>,
    pub ar: Option<f64>,
    /// Solver phase only, seconds.
    pub time_s: Option<f64>,
    /// Instance generation, seconds.
    pub gen_time_s: Option<f64>,
    /// Generation + solver + validation, seconds.
    pub total_time_s: f64,
    pub valid: bool,
    pub error: Option<String>,
    pub version: String,
    pub rng: String,
}

impl BenchRecord {
    fn failure(
        spec: &RunSpec,
        rep: usize,
        seeds: (u64, u64),
        error: String,
        total_time_s: f64,
    ) -> Self {
        BenchRecord {
            solver: spec.solver.id().to_string(),
            params: spec.solver.clone(),
            n: spec.n,
            d: spec.d,
            repetition: rep,
            instance_seed: seeds.0,
            solver_seed: seeds.1,
            sampler: None,
            alpha: None,
            density: None,
            ar: None,
            time_s: None,
            gen_time_s: None,
            total_time_s,
            valid: false,
            error: Some(error),
            version: VERSION.to_string(),
            rng: RNG_ALGORITHM.to_string(),
        }
    }

    /// Whether the record may enter statistics and fits.
    pub fn accepted(&self) -> bool {
        self.valid && self.error.is_none() && self.alpha.is_some()
    }
}

fn seconds(start: Instant) -> f64 {
    // Clamp so recorded times stay strictly positive even on coarse clocks.
    start.elapsed().as_secs_f64().max(1e-9)
}

/// Executes repetition `rep` of `spec`. Errors and panics become failure
/// records.
pub fn execute_run(spec: &RunSpec, rep: usize, bounds: &BoundsTable) -> BenchRecord {
    let seeds = spec.seeds(rep);
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        execute_inner(spec, rep, seeds, bounds, start)
    }));
    match outcome {
        Ok(Ok(record)) => record,
        Ok(Err(msg)) => BenchRecord::failure(spec, rep, seeds, msg, seconds(start)),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            BenchRecord::failure(spec, rep, seeds, format!("panic: {msg}"), seconds(start))
        }
    }
}

fn execute_inner(
    spec: &RunSpec,
    rep: usize,
    seeds: (u64, u64),
    bounds: &BoundsTable,
    start: Instant,
) -> Result<BenchRecord, String> {
    spec.solver.check()?;
    let params = RrgParams::new(spec.n, spec.d, seeds.0).with_method(spec.sampler);
    let sample = sample_rrg_detailed(&params).map_err(|e| e.to_string())?;
    let gen_time_s = seconds(start);

    let solve_start = Instant::now();
    let set = spec.solver.solve(&sample.graph, seeds.1)?;
    let time_s = seconds(solve_start);

    let valid = validate_is(&sample.graph, &set).map_err(|e| e.to_string())?;
    let alpha = set.size();
    Ok(BenchRecord {
        solver: spec.solver.id().to_string(),
        params: spec.solver.clone(),
        n: spec.n,
        d: spec.d,
        repetition: rep,
        instance_seed: seeds.0,
        solver_seed: seeds.1,
        sampler: Some(sample.method.id().to_string()),
        alpha: Some(alpha),
        density: Some(density_of(alpha, spec.n)),
        ar: approximation_ratio_of(alpha, spec.n, spec.d, bounds).ok(),
        time_s: Some(time_s),
        gen_time_s: Some(gen_time_s),
        total_time_s: seconds(start),
        valid,
        error: (!valid).then(|| "solver output is not an independent set".to_string()),
        version: VERSION.to_string(),
        rng: RNG_ALGORITHM.to_string(),
    })
}

/// Runs every `(spec, repetition)` on up to `workers` threads. Records are
/// handed to `sink` from the calling thread in matrix order as soon as all
/// earlier ones are done, and are also returned in that order.
pub fn run_benchmark<F>(
    matrix: &[RunSpec],
    bounds: &BoundsTable,
    workers: usize,
    mut sink: F,
) -> Result<Vec<BenchRecord>, HarnessError>
where
    F: FnMut(&BenchRecord) -> Result<(), HarnessError>,
{
    let jobs: Vec<(usize, usize)> = matrix
        .iter()
        .enumerate()
        .flat_map(|(i, s)| (0..s.repetitions).map(move |k| (i, k)))
        .collect();
    let mut records = Vec::with_capacity(jobs.len());

    if workers <= 1 {
        for &(i, k) in &jobs {
            let r = execute_run(&matrix[i], k, bounds);
            sink(&r)?;
            records.push(r);
        }
        return Ok(records);
    }

    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, BenchRecord)>();
    std::thread::scope(|scope| -> Result<(), HarnessError> {
        for _ in 0..workers.min(jobs.len()) {
            let tx = tx.clone();
            let (next, jobs) = (&next, &jobs);
            scope.spawn(move || loop {
                let j = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(i, k)) = jobs.get(j) else { break };
                if tx.send((j, execute_run(&matrix[i], k, bounds))).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut pending = BTreeMap::new();
        for (j, r) in rx {
            pending.insert(j, r);
            while let Some(r) = pending.remove(&records.len()) {
                if let Err(e) = sink(&r) {
                    // Stop handing out work; running jobs finish and are dropped.
                    next.store(jobs.len(), Ordering::Relaxed);
                    return Err(e);
                }
                records.push(r);
            }
        }
        Ok(())
    })?;
    Ok(records)
}

/// Sink writing one JSON object per line, flushed after every record.
pub fn jsonl_sink<W: Write>(mut out: W) -> impl FnMut(&BenchRecord) -> Result<(), HarnessError> {
    move |r| {
        let line = serde_json::to_string(r).map_err(std::io::Error::other)?;
        writeln!(out, "{line}")?;
        out.flush()?;
        Ok(())
    }
}

/// Parses line-delimited records; blank lines are skipped.
pub fn parse_records(text: &str) -> Result<Vec<BenchRecord>, HarnessError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| HarnessError::MalformedRecord {
                line: i + 1,
                reason: e.to_string(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    pub n_min: usize,
    pub n_max: usize,
    /// `(n, median solver time)` points used.
    pub points: Vec<(usize, f64)>,
}

pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of no values");
    values.sort_by(|a, b| a.total_cmp(b));
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    }
}

/// Sample mean and standard deviation (n - 1 denominator; 0 for one value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Least squares of `ln(median solver time)` on `ln n` over accepted
/// records of a single solver and degree.
pub fn fit_scaling(records: &[BenchRecord]) -> Result<ScalingFit, HarnessError> {
    let accepted: Vec<&BenchRecord> = records.iter().filter(|r| r.accepted()).collect();
    if let Some(first) = accepted.first() {
        if let Some(other) = accepted
            .iter()
            .find(|r| r.solver != first.solver || r.d != first.d)
        {
            return Err(HarnessError::MixedRecords(format!(
                "({}, d={}) and ({}, d={})",
                first.solver, first.d, other.solver, other.d
            )));
        }
    }
    let mut by_n: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in &accepted {
        if let Some(t) = r.time_s {
            by_n.entry(r.n).or_default().push(t);
        }
    }
    if by_n.len() < 3 {
        return Err(HarnessError::InsufficientPoints(by_n.len()));
    }
    let points: Vec<(usize, f64)> = by_n
        .into_iter()
        .map(|(n, mut ts)| (n, median(&mut ts)))
        .collect();
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, t)| t.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(ScalingFit {
        exponent: slope,
        prefactor: intercept.exp(),
        r_squared,
        n_min: points.first().unwrap().0,
        n_max: points.last().unwrap().0,
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportFormat {
    Csv,
    JsonLines,
    PlotTable,
}

impl FromStr for ReportFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json-lines" | "jsonl" => Ok(ReportFormat::JsonLines),
            "plot-table" => Ok(ReportFormat::PlotTable),
            other => Err(HarnessError::UnknownFormat(other.to_string())),
        }
    }
}

pub const CSV_HEADER: &str = "solver,d,n,seed,alpha,density,ar,time_s,valid";

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Reference values print with at least three decimals (0.99 -> 0.990).
fn ref_value(v: f64) -> String {
    let s = v.to_string();
    match s.split_once('.') {
        Some((_, frac)) if frac.len() >= 3 => s,
        _ => format!("{v:.3}"),
    }
}

/// Renders records. Ratios are recomputed against `bounds`, so a report can
/// use bounds that were not known when the records were produced. Output
/// depends only on the records and their order.
pub fn emit_report(records: &[BenchRecord], bounds: &BoundsTable, format: ReportFormat) -> String {
    let ar_of = |r: &BenchRecord| {
        r.alpha
            .and_then(|a| approximation_ratio_of(a, r.n, r.d, bounds).ok())
    };
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for r in records {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    r.solver,
                    r.d,
                    r.n,
                    r.instance_seed,
                    opt(r.alpha),
                    opt(r.density),
                    opt(ar_of(r)),
                    opt(r.time_s),
                    r.valid
                );
            }
        }
        ReportFormat::JsonLines => {
            for r in records {
                out.push_str(&serde_json::to_string(r).expect("records serialize"));
                out.push('\n');
            }
        }
        ReportFormat::PlotTable => plot_table(records, bounds, &mut out),
    }
    out
}

fn plot_table(records: &[BenchRecord], bounds: &BoundsTable, out: &mut String) {
    let mut groups: BTreeMap<(String, usize), BTreeMap<usize, Vec<&BenchRecord>>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.accepted()) {
        groups
            .entry((r.solver.clone(), r.d))
            .or_default()
            .entry(r.n)
            .or_default()
            .push(r);
    }
    let excluded = records.iter().filter(|r| !r.accepted()).count();
    if excluded > 0 {
        let _ = writeln!(out, "# excluded {excluded} failed or invalid records");
    }
    for ((solver, d), by_n) in &groups {
        let row = bounds.get(*d);
        let rho_ub = row.and_then(|r| r.rho_ub);
        let _ = match rho_ub {
            Some(ub) => writeln!(out, "# solver={solver} d={d} rho_ub={ub}"),
            None => writeln!(
                out,
                "# solver={solver} d={d} rho_ub=none (raw densities only)"
            ),
        };
        if let Some(row) = row {
            let refs: Vec<String> = row
                .reference_lines()
                .into_iter()
                .map(|(k, v)| format!("{k}={}", ref_value(v)))
                .collect();
            if !refs.is_empty() {
                let _ = writeln!(out, "# reference {}", refs.join(" "));
            }
        }
        if rho_ub.is_none() && *d >= 2 {
            let b = large_d_bounds(*d);
            let _ = writeln!(
                out,
                "# large-d rho_alg={:.6} rho_max={:.6}",
                b.rho_alg, b.rho_max
            );
        }
        let _ = writeln!(
            out,
            "n,runs,mean_density,std_density,mean_ar,std_ar,median_time_s"
        );
        let mut above_one = Vec::new();
        for (n, rs) in by_n {
            let dens: Vec<f64> = rs
                .iter()
                .map(|r| density_of(r.alpha.unwrap(), r.n))
                .collect();
            let (md, sd) = mean_std(&dens);
            let (mar, sar) = match rho_ub {
                Some(ub) => {
                    let ars: Vec<f64> = dens.iter().map(|x| x / ub).collect();
                    let (m, s) = mean_std(&ars);
                    if m > 1.0 {
                        above_one.push(*n);
                    }
                    (m.to_string(), s.to_string())
                }
                None => (String::new(), String::new()),
            };
            let mut times: Vec<f64> = rs.iter().filter_map(|r| r.time_s).collect();
            let mt = if times.is_empty() {
                String::new()
            } else {
                median(&mut times).to_string()
            };
            let _ = writeln!(out, "{n},{},{md},{sd},{mar},{sar},{mt}", rs.len());
        }
        if !above_one.is_empty() {
            let _ = writeln!(
                out,
                "# note: mean ar > 1 at n={:?}; the bound is asymptotic and not clamped",
                above_one
            );
        }
        out.push('\n');
    }
}

/// Large-degree benchmark: d in {20, 100}, solvers GA, DGA, SA and PT with
/// production settings, one spec per `(d, solver, n, seed index)`.
pub fn hard_benchmark_matrix(n_values: &[usize], seeds: usize, master_seed: u64) -> Vec<RunSpec> {
    hard_benchmark_matrix_with(
        n_values,
        seeds,
        master_seed,
        AnnealSchedule::production(),
        PtConfig::production(),
    )
}

/// [`hard_benchmark_matrix`] with explicit annealing and tempering settings.
pub fn hard_benchmark_matrix_with(
    n_values: &[usize],
    seeds: usize,
    master_seed: u64,
    schedule: AnnealSchedule,
    config: PtConfig,
) -> Vec<RunSpec> {
    let solvers = [
        SolverSpec::Ga,
        SolverSpec::Dga,
        SolverSpec::Sa { schedule },
        SolverSpec::Pt { config },
    ];
    let mut specs = Vec::new();
    for d in HARD_BENCHMARK_DEGREES {
        for solver in &solvers {
            for &n in n_values {
                for s in 0..seeds {
                    let instance_seed =
                        derive_seed(master_seed, &[1, d as u64, n as u64, s as u64]);
                    let solver_seed = derive_seed(
                        master_seed,
                        &[2, solver.tag(), d as u64, n as u64, s as u64],
                    );
                    specs.push(RunSpec {
                        solver: solver.clone(),
                        n,
                        d,
                        instance_seed,
                        solver_seed,
                        repetitions: 1,
                        sampler: SamplerMethod::Auto,
                    });
                }
            }
        }
    }
    specs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::builtin_bounds;

    fn synthetic(n: usize, t: f64) -> BenchRecord {
        BenchRecord {
            solver: "dga".into(),
            params: SolverSpec::Dga,
            n,
            d: 3,
            repetition: 0,
            instance_seed: 1,
            solver_seed: 2,
            sampler: Some("configuration-restart".into()),
            alpha: Some(n * 2 / 5),
            density: Some(0.4),
            ar: None,
            time_s: Some(t),
            gen_time_s: Some(0.1),
            total_time_s: t + 0.1,
            valid: true,
            error: None,
            version: VERSION.into(),
            rng: RNG_ALGORITHM.into(),
        }
    }

    #[test]
    fn exact_power_laws() {
        let ns = [1000usize, 10_000, 100_000, 1_000_000];
        let lin: Vec<_> = ns.iter().map(|&n| synthetic(n, 3.0 * n as f64)).collect();
        let fit = fit_scaling(&lin).unwrap();
        assert!((fit.exponent - 1.0).abs() < 1e-6);
        assert!((fit.prefactor - 3.0).abs() < 1e-6);
        assert!((fit.r_squared - 1.0).abs() < 1e-9);
        let quad: Vec<_> = ns
            .iter()
            .map(|&n| synthetic(n, 1e-9 * (n as f64).powi(2)))
            .collect();
        assert!((fit_scaling(&quad).unwrap().exponent - 2.0).abs() < 1e-6);
    }

    #[test]
    fn fit_needs_three_sizes_and_one_group() {
        let two = vec![synthetic(10, 1.0), synthetic(100, 2.0), synthetic(100, 3.0)];
        assert!(matches!(
            fit_scaling(&two),
            Err(HarnessError::InsufficientPoints(2))
        ));
        let mut mixed = vec![
            synthetic(10, 1.0),
            synthetic(100, 2.0),
            synthetic(1000, 3.0),
        ];
        mixed[1].d = 5;
        assert!(matches!(
            fit_scaling(&mixed),
            Err(HarnessError::MixedRecords(_))
        ));
    }

    #[test]
    fn fit_uses_median_and_skips_invalid() {
        let mut rs = vec![
            synthetic(10, 10.0),
            synthetic(10, 10.0),
            synthetic(10, 1e6),
            synthetic(100, 100.0),
            synthetic(1000, 1000.0),
        ];
        let mut bad = synthetic(1000, 1e9);
        bad.valid = false;
        rs.push(bad);
        let fit = fit_scaling(&rs).unwrap();
        assert!((fit.exponent - 1.0).abs() < 1e-9);
    }

    #[test]
    fn csv_report() {
        let b = builtin_bounds();
        assert_eq!(
            emit_report(&[], &b, ReportFormat::Csv),
            format!("{CSV_HEADER}\n")
        );
        let r = synthetic(1000, 0.5);
        let csv = emit_report(&[r], &b, ReportFormat::Csv);
        let row = csv.lines().nth(1).unwrap();
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[..6], ["dga", "3", "1000", "1", "400", "0.4"]);
        assert!((fields[6].parse::<f64>().unwrap() - 0.4 / 0.45537).abs() < 1e-12);
        assert_eq!(fields[7..], ["0.5", "true"]);
    }

    #[test]
    fn plot_table_reference_lines() {
        let b = builtin_bounds();
        let table = emit_report(&[synthetic(1000, 0.5)], &b, ReportFormat::PlotTable);
        assert!(
            table.contains("# reference ar_1rsb=0.990 ar_mcmc=0.984 ar_bpr=0.987"),
            "{table}"
        );
        let mut r = synthetic(1000, 0.5);
        r.d = 20;
        let table = emit_report(&[r], &b, ReportFormat::PlotTable);
        assert!(table.contains("rho_ub=none"));
        assert!(table.contains("rho_alg=0.149787"));
    }

    #[test]
    fn report_formats_parse() {
        assert_eq!("csv".parse::<ReportFormat>().unwrap(), ReportFormat::Csv);
        assert!(matches!(
            "xml".parse::<ReportFormat>(),
            Err(HarnessError::UnknownFormat(_))
        ));
    }

    #[test]
    fn hard_matrix_shape() {
        let m = hard_benchmark_matrix(&[10_000], 5, 0);
        assert_eq!(m.len(), 40);
        let ds: std::collections::BTreeSet<usize> = m.iter().map(|s| s.d).collect();
        assert_eq!(ds.into_iter().collect::<Vec<_>>(), vec![20, 100]);
        assert!(hard_benchmark_matrix(&[], 5, 0).is_empty());
    }

    #[test]
    fn records_round_trip_through_jsonl() {
        let mut buf = Vec::new();
        let r = synthetic(10, 0.25);
        jsonl_sink(&mut buf)(&r).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(parse_records(&text).unwrap(), vec![r]);
        assert!(matches!(
            parse_records("{}\nnot json\n"),
            Err(HarnessError::MalformedRecord { line: 1, .. })
        ));
    }
}
