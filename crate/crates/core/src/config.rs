//! TOML configuration for benchmark matrices.
//!
//! ```toml
//! master_seed = 2022        # root of all derived seeds (default 0)
//! workers = 1               # concurrent runs (default 1)
//! records = "records.jsonl" # line-delimited records, appended as runs finish
//! report = "report.csv"     # optional
//! report_format = "csv"     # csv | json-lines | plot-table
//! sampler = "auto"          # auto | exact | pairing
//!
//! [sa]                      # optional; defaults to the production schedule
//! mu_start = 0.0
//! mu_end = 12.0
//! sweeps = 20000
//! ramp = "linear"           # linear | geometric
//!
//! [pt]                      # optional; defaults to the production config
//! mu_min = 0.5              # geometric spacing, or give `potentials = [...]`
//! mu_max = 12.0
//! replicas = 8
//! sweeps_per_round = 1
//! rounds = 20000
//! warmup_rounds = 10000     # default rounds / 2
//!
//! [[run]]                   # any number of blocks
//! solvers = ["ga", "dga"]   # ga | dga | sa | pt | exact
//! n = [10000, 100000]
//! d = [3, 5]
//! repetitions = 5
//!
//! [hard_benchmark]          # optional preset: d in {20, 100}, GA/DGA/SA/PT
//! n = [10000]
//! seeds = 3
//!
//! [[bounds]]                # extra rows for the bounds table
//! d = 20
//! rho_ub = 0.2              # and optionally ar_1rsb, ar_mcmc, ar_bpr
//! ```
//!
//! Relative paths are resolved against the configuration file's directory.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::bounds::{builtin_bounds, BoundsRow, BoundsTable};
use crate::harness::{hard_benchmark_matrix_with, ReportFormat, RunSpec, SolverSpec};
use crate::mcmc::{AnnealSchedule, PtConfig, Ramp};
use crate::rrg::SamplerMethod;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

fn one() -> usize {
    1
}

fn csv() -> ReportFormat {
    ReportFormat::Csv
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "one")]
    pub workers: usize,
    pub records: PathBuf,
    pub report: Option<PathBuf>,
    #[serde(default = "csv")]
    pub report_format: ReportFormat,
    #[serde(default)]
    pub sampler: SamplerMethod,
    pub sa: Option<SaSection>,
    pub pt: Option<PtSection>,
    #[serde(default)]
    pub run: Vec<RunBlock>,
    pub hard_benchmark: Option<HardBenchmarkBlock>,
    #[serde(default)]
    pub bounds: Vec<BoundsRow>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaSection {
    #[serde(default)]
    pub mu_start: f64,
    pub mu_end: Option<f64>,
    pub sweeps: Option<usize>,
    #[serde(default)]
    pub ramp: Ramp,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PtSection {
    pub potentials: Option<Vec<f64>>,
    pub mu_min: Option<f64>,
    pub mu_max: Option<f64>,
    pub replicas: Option<usize>,
    pub sweeps_per_round: Option<usize>,
    pub rounds: Option<usize>,
    pub warmup_rounds: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunBlock {
    pub solvers: Vec<String>,
    pub n: Vec<usize>,
    pub d: Vec<usize>,
    #[serde(default = "one")]
    pub repetitions: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardBenchmarkBlock {
    pub n: Vec<usize>,
    pub seeds: usize,
}

/// Standalone bounds extension file: just `[[bounds]]` rows.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundsFile {
    #[serde(default)]
    bounds: Vec<BoundsRow>,
}

/// Builtin bounds extended by the `[[bounds]]` rows of a TOML file.
pub fn load_bounds_file(path: &Path) -> Result<BoundsTable, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let file: BoundsFile = toml::from_str(&text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let mut t = builtin_bounds();
    t.extend(file.bounds)
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    Ok(t)
}

impl BenchConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let cfg: BenchConfig =
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    /// Reads and parses `path`, resolving relative output paths against
    /// its directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = BenchConfig::from_toml_str(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.records = base.join(&cfg.records);
        cfg.report = cfg.report.map(|p| base.join(p));
        Ok(cfg)
    }

    fn check(&self) -> Result<(), ConfigError> {
        if self.workers == 0 {
            return Err(ConfigError::Invalid("workers must be >= 1".into()));
        }
        if self.run.is_empty() && self.hard_benchmark.is_none() {
            return Err(ConfigError::Invalid(
                "no [[run]] blocks and no [hard_benchmark] preset".into(),
            ));
        }
        for block in &self.run {
            if block.repetitions == 0 {
                return Err(ConfigError::Invalid("repetitions must be >= 1".into()));
            }
            for s in &block.solvers {
                self.solver(s)?;
            }
        }
        self.bounds_table()?;
        Ok(())
    }

    pub fn sa_schedule(&self) -> Result<AnnealSchedule, ConfigError> {
        let prod = AnnealSchedule::production();
        let Some(sa) = &self.sa else { return Ok(prod) };
        AnnealSchedule::new(
            sa.mu_start,
            sa.mu_end.unwrap_or(prod.mu_end),
            sa.sweeps.unwrap_or(prod.sweeps),
            sa.ramp,
        )
        .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn pt_config(&self) -> Result<PtConfig, ConfigError> {
        let Some(pt) = &self.pt else {
            return Ok(PtConfig::production());
        };
        let prod = PtConfig::production();
        let sweeps = pt.sweeps_per_round.unwrap_or(prod.sweeps_per_round);
        let rounds = pt.rounds.unwrap_or(prod.rounds);
        let invalid = |e: crate::mcmc::McmcError| ConfigError::Invalid(e.to_string());
        let cfg = match &pt.potentials {
            Some(p) => {
                if pt.mu_min.is_some() || pt.mu_max.is_some() || pt.replicas.is_some() {
                    return Err(ConfigError::Invalid(
                        "[pt] takes either potentials or mu_min/mu_max/replicas".into(),
                    ));
                }
                PtConfig::new(p.clone(), sweeps, rounds).map_err(invalid)?
            }
            None => PtConfig::geometric(
                pt.mu_min.unwrap_or(0.5),
                pt.mu_max.unwrap_or(12.0),
                pt.replicas.unwrap_or(8),
                sweeps,
                rounds,
            )
            .map_err(invalid)?,
        };
        cfg.with_warmup(pt.warmup_rounds.unwrap_or(rounds / 2))
            .map_err(invalid)
    }

    pub fn solver(&self, id: &str) -> Result<SolverSpec, ConfigError> {
        Ok(match id {
            "ga" => SolverSpec::Ga,
            "dga" => SolverSpec::Dga,
            "sa" => SolverSpec::Sa {
                schedule: self.sa_schedule()?,
            },
            "pt" => SolverSpec::Pt {
                config: self.pt_config()?,
            },
            "exact" => SolverSpec::Exact,
            other => return Err(ConfigError::Invalid(format!("unknown solver '{other}'"))),
        })
    }

    /// Builtin bounds extended (or overridden) by the `[[bounds]]` rows.
    pub fn bounds_table(&self) -> Result<BoundsTable, ConfigError> {
        let mut t = builtin_bounds();
        t.extend(self.bounds.iter().copied())
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(t)
    }

    /// `[[run]]` blocks in order (solver, then n, then d), followed by the
    /// hard-benchmark preset if present.
    pub fn matrix(&self) -> Result<Vec<RunSpec>, ConfigError> {
        let mut specs = Vec::new();
        for block in &self.run {
            for s in &block.solvers {
                let solver = self.solver(s)?;
                for &n in &block.n {
                    for &d in &block.d {
                        let mut spec = RunSpec::derived(
                            solver.clone(),
                            n,
                            d,
                            block.repetitions,
                            self.master_seed,
                        );
                        spec.sampler = self.sampler;
                        specs.push(spec);
                    }
                }
            }
        }
        if let Some(hb) = &self.hard_benchmark {
            let mut preset = hard_benchmark_matrix_with(
                &hb.n,
                hb.seeds,
                self.master_seed,
                self.sa_schedule()?,
                self.pt_config()?,
            );
            for spec in &mut preset {
                spec.sampler = self.sampler;
            }
            specs.extend(preset);
        }
        Ok(specs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let cfg = BenchConfig::from_toml_str(
            r#"
            records = "r.jsonl"
            [[run]]
            solvers = ["dga"]
            n = [100]
            d = [3]
            "#,
        )
        .unwrap();
        let m = cfg.matrix().unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].repetitions, 1);
        assert_eq!(cfg.report_format, ReportFormat::Csv);
    }

    #[test]
    fn preset_and_sections() {
        let cfg = BenchConfig::from_toml_str(
            r#"
            records = "r.jsonl"
            master_seed = 9
            [sa]
            mu_end = 8.0
            sweeps = 100
            [pt]
            potentials = [1.0, 2.0, 4.0]
            rounds = 50
            [hard_benchmark]
            n = [1000]
            seeds = 2
            [[bounds]]
            d = 20
            rho_ub = 0.25
            "#,
        )
        .unwrap();
        let m = cfg.matrix().unwrap();
        assert_eq!(m.len(), 2 * 4 * 2);
        let sa = m.iter().find(|s| s.solver.id() == "sa").unwrap();
        assert_eq!(
            sa.solver,
            SolverSpec::Sa {
                schedule: AnnealSchedule::new(0.0, 8.0, 100, Ramp::Linear).unwrap()
            }
        );
        let pt = cfg.pt_config().unwrap();
        assert_eq!(pt.potentials, vec![1.0, 2.0, 4.0]);
        assert_eq!(pt.warmup_rounds, 25);
        assert_eq!(cfg.bounds_table().unwrap().rho_ub(20), Some(0.25));
    }

    #[test]
    fn schema_errors() {
        let bad = [
            "records = 'x'\n[[run]]\nsolvers=['dga']\nn=[10]\nd=[3]\nbogus=1\n",
            "records = 'x'\n[[run]]\nsolvers=['gnn']\nn=[10]\nd=[3]\n",
            "records = 'x'\n",
            "[[run]]\nsolvers=['dga']\nn=[10]\nd=[3]\n",
            "records = 'x'\nworkers = 0\n[[run]]\nsolvers=['dga']\nn=[10]\nd=[3]\n",
            "records = 'x'\n[[run]]\nsolvers=['dga']\nn=[10]\nd=[3]\n[[bounds]]\nd=20\nrho_ub=2.0\n",
            "records = 'x'\nreport_format='xml'\n[[run]]\nsolvers=['dga']\nn=[10]\nd=[3]\n",
        ];
        for text in bad {
            assert!(
                BenchConfig::from_toml_str(text).is_err(),
                "accepted: {text}"
            );
        }
    }
}
