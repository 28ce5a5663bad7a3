//! `misbench`: generate random regular graphs, solve maximum independent set
//! instances, run benchmark matrices and render reports.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage or parameter error.

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use misbench_core::bounds::{approximation_ratio, builtin_bounds, density, BoundsTable};
use misbench_core::config::{load_bounds_file, BenchConfig};
use misbench_core::graph::{parse_graph, serialize_graph, validate_graph, GraphFormat};
use misbench_core::harness::{
    emit_report, jsonl_sink, parse_records, run_benchmark, ReportFormat, SolverSpec,
};
use misbench_core::mcmc::{AnnealSchedule, PtConfig, Ramp};
use misbench_core::rrg::{sample_rrg_detailed, RrgParams, SamplerMethod, DEFAULT_MAX_RESTARTS};

const FORMATS_HELP: &str = "\
Formats:
  edge-list  first line 'n m', then m lines 'u v' (0-indexed)
  dimacs     'p edge n m' header, 'e u v' lines (1-indexed), 'c' comments
  IS output  'alpha k' then k ascending vertex ids, one per line
  records    one JSON object per line (see `bench`)
  csv        solver,d,n,seed,alpha,density,ar,time_s,valid";

#[derive(Parser)]
#[command(name = "misbench", version, about = "Maximum independent set benchmarks on random regular graphs", after_help = FORMATS_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    EdgeList,
    Dimacs,
}

impl From<FormatArg> for GraphFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::EdgeList => GraphFormat::EdgeList,
            FormatArg::Dimacs => GraphFormat::Dimacs,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplerArg {
    Auto,
    Exact,
    Pairing,
}

impl From<SamplerArg> for SamplerMethod {
    fn from(s: SamplerArg) -> Self {
        match s {
            SamplerArg::Auto => SamplerMethod::Auto,
            SamplerArg::Exact => SamplerMethod::Exact,
            SamplerArg::Pairing => SamplerMethod::Pairing,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Ga,
    Dga,
    Sa,
    Pt,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum RampArg {
    Linear,
    Geometric,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random d-regular graph.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "edge-list")]
        format: FormatArg,
        #[arg(long, value_enum, default_value = "auto")]
        sampler: SamplerArg,
        #[arg(long, default_value_t = DEFAULT_MAX_RESTARTS)]
        max_restarts: u64,
    },
    /// Solve one graph file; the set goes to stdout, a summary to stderr.
    Solve {
        graph: PathBuf,
        #[arg(long, value_enum)]
        solver: SolverArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "edge-list")]
        format: FormatArg,
        /// Annealing: initial chemical potential.
        #[arg(long, default_value_t = 0.0)]
        mu_start: f64,
        /// Annealing: final chemical potential.
        #[arg(long, default_value_t = 12.0)]
        mu_end: f64,
        /// Annealing: number of sweeps.
        #[arg(long, default_value_t = 20_000)]
        sweeps: usize,
        #[arg(long, value_enum, default_value = "linear")]
        ramp: RampArg,
        /// Tempering: number of replicas (geometric potentials).
        #[arg(long, default_value_t = 8)]
        replicas: usize,
        #[arg(long, default_value_t = 0.5)]
        mu_min: f64,
        #[arg(long, default_value_t = 12.0)]
        mu_max: f64,
        #[arg(long, default_value_t = 20_000)]
        rounds: usize,
        /// Defaults to rounds / 2.
        #[arg(long)]
        warmup_rounds: Option<usize>,
        #[arg(long, default_value_t = 1)]
        sweeps_per_round: usize,
    },
    /// Run a benchmark matrix described by a TOML config file.
    Bench { config: PathBuf },
    /// Render a report from a records file.
    Report {
        records: PathBuf,
        /// csv, json-lines or plot-table.
        #[arg(long, default_value = "csv")]
        format: String,
        /// TOML file with extra [[bounds]] rows.
        #[arg(long)]
        bounds: Option<PathBuf>,
        /// Output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Error carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
    }
}

fn runtime(message: impl ToString) -> Failure {
    Failure {
        code: 1,
        message: message.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen {
            n,
            d,
            seed,
            out,
            format,
            sampler,
            max_restarts,
        } => cmd_gen(
            n,
            d,
            seed,
            out.as_deref(),
            format.into(),
            sampler.into(),
            max_restarts,
        ),
        Command::Solve {
            graph,
            solver,
            seed,
            format,
            mu_start,
            mu_end,
            sweeps,
            ramp,
            replicas,
            mu_min,
            mu_max,
            rounds,
            warmup_rounds,
            sweeps_per_round,
        } => {
            let ramp = match ramp {
                RampArg::Linear => Ramp::Linear,
                RampArg::Geometric => Ramp::Geometric,
            };
            build_solver(
                solver,
                (mu_start, mu_end, sweeps, ramp),
                (
                    replicas,
                    mu_min,
                    mu_max,
                    rounds,
                    warmup_rounds,
                    sweeps_per_round,
                ),
            )
            .and_then(|spec| cmd_solve(&graph, &spec, seed, format.into()))
        }
        Command::Bench { config } => cmd_bench(&config),
        Command::Report {
            records,
            format,
            bounds,
            out,
        } => cmd_report(&records, &format, bounds.as_deref(), out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => {
            fs::write(p, text).map_err(|e| runtime(format!("cannot write {}: {e}", p.display())))
        }
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| runtime(format!("cannot write stdout: {e}"))),
    }
}

fn cmd_gen(
    n: usize,
    d: usize,
    seed: u64,
    out: Option<&Path>,
    format: GraphFormat,
    sampler: SamplerMethod,
    max_restarts: u64,
) -> Result<(), Failure> {
    let params = RrgParams::new(n, d, seed)
        .with_method(sampler)
        .with_max_restarts(max_restarts);
    let sample = sample_rrg_detailed(&params).map_err(usage)?;
    write_output(out, &serialize_graph(&sample.graph, format))?;
    eprintln!(
        "n={n} d={d} seed={seed} sampler={} attempts={}",
        sample.method.id(),
        sample.attempts
    );
    Ok(())
}

fn build_solver(
    solver: SolverArg,
    (mu_start, mu_end, sweeps, ramp): (f64, f64, usize, Ramp),
    (replicas, mu_min, mu_max, rounds, warmup, sweeps_per_round): (
        usize,
        f64,
        f64,
        usize,
        Option<usize>,
        usize,
    ),
) -> Result<SolverSpec, Failure> {
    Ok(match solver {
        SolverArg::Ga => SolverSpec::Ga,
        SolverArg::Dga => SolverSpec::Dga,
        SolverArg::Exact => SolverSpec::Exact,
        SolverArg::Sa => SolverSpec::Sa {
            schedule: AnnealSchedule::new(mu_start, mu_end, sweeps, ramp).map_err(usage)?,
        },
        SolverArg::Pt => SolverSpec::Pt {
            config: PtConfig::geometric(mu_min, mu_max, replicas, sweeps_per_round, rounds)
                .and_then(|c| c.with_warmup(warmup.unwrap_or(rounds / 2)))
                .map_err(usage)?,
        },
    })
}

fn cmd_solve(
    path: &Path,
    solver: &SolverSpec,
    seed: u64,
    format: GraphFormat,
) -> Result<(), Failure> {
    let file =
        File::open(path).map_err(|e| usage(format!("cannot open {}: {e}", path.display())))?;
    let g = parse_graph(BufReader::new(file), format).map_err(usage)?;
    let start = Instant::now();
    let set = solver.solve(&g, seed).map_err(usage)?;
    let elapsed = start.elapsed().as_secs_f64();
    write_output(None, &set.serialize())?;

    let mut summary = format!("solver={} alpha={}", solver.id(), set.size());
    if g.n() > 0 {
        summary.push_str(&format!(" density={:.6}", density(&set, g.n())));
    }
    if let Some(d) = validate_graph(&g, None).is_regular {
        if let Ok(ar) = approximation_ratio(&set, g.n(), d, &builtin_bounds()) {
            summary.push_str(&format!(" ar={ar:.6}"));
        }
    }
    summary.push_str(&format!(" time_s={elapsed:.6}"));
    eprintln!("{summary}");
    Ok(())
}

fn cmd_bench(config_path: &Path) -> Result<(), Failure> {
    let cfg = BenchConfig::load(config_path).map_err(usage)?;
    let matrix = cfg.matrix().map_err(usage)?;
    let bounds = cfg.bounds_table().map_err(usage)?;

    if let Some(dir) = cfg.records.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir)
            .map_err(|e| runtime(format!("cannot create {}: {e}", dir.display())))?;
    }
    let file = File::create(&cfg.records)
        .map_err(|e| runtime(format!("cannot create {}: {e}", cfg.records.display())))?;
    let records = run_benchmark(
        &matrix,
        &bounds,
        cfg.workers,
        jsonl_sink(BufWriter::new(file)),
    )
    .map_err(|e| runtime(format!("benchmark aborted: {e}")))?;

    if let Some(report) = &cfg.report {
        write_output(
            Some(report),
            &emit_report(&records, &bounds, cfg.report_format),
        )?;
    }
    let failed = records.iter().filter(|r| !r.accepted()).count();
    eprintln!(
        "{} records written to {} ({failed} failed)",
        records.len(),
        cfg.records.display()
    );
    Ok(())
}

fn cmd_report(
    path: &Path,
    format: &str,
    bounds: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let format: ReportFormat = format.parse().map_err(usage)?;
    let bounds: BoundsTable = match bounds {
        Some(p) => load_bounds_file(p).map_err(usage)?,
        None => builtin_bounds(),
    };
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let records = parse_records(&text).map_err(runtime)?;
    write_output(out, &emit_report(&records, &bounds, format))
}
