//! Monte Carlo on the hard-core model: simulated annealing and parallel
//! tempering.
//!
//! The chain lives on independent sets only. A state is weighted by
//! `exp(mu * |S|)`. Each proposal picks a uniform vertex `v`:
//!
//! * occupied: delete it, accepted with probability `exp(-mu)`;
//! * free with no occupied neighbor: insert it (always accepted, `mu >= 0`);
//! * free with exactly one occupied neighbor `w`: hop the particle from `w`
//!   to `v` (size-preserving, always accepted);
//! * otherwise: reject.
//!
//! Constraint violations are never proposed, so every state visited is a
//! valid independent set. Without hops the chain freezes once deletions
//! become rare and annealing stalls well short of the reference ratios.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::independent_set::IndependentSet;
use crate::rng::{seeded_rng, split_streams, Rng};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum McmcError {
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("invalid parallel tempering config: {0}")]
    Config(String),
}

/// Occupation state of the hard-core gas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardCoreState {
    occupied: Vec<bool>,
    /// Number of occupied neighbors of each vertex.
    blocked: Vec<u32>,
    size: usize,
}

impl HardCoreState {
    pub fn empty(n: usize) -> Self {
        HardCoreState {
            occupied: vec![false; n],
            blocked: vec![0; n],
            size: 0,
        }
    }

    /// State occupying exactly `set`. Panics if `set` is not independent in `g`.
    pub fn from_set(g: &Graph, set: &IndependentSet) -> Self {
        let mut s = HardCoreState::empty(g.n());
        for &v in set.members() {
            assert_eq!(
                s.blocked[v as usize], 0,
                "vertex {v} conflicts with the set"
            );
            s.insert(g, v as usize);
        }
        s
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_occupied(&self, v: usize) -> bool {
        self.occupied[v]
    }

    pub fn to_set(&self) -> IndependentSet {
        IndependentSet::from_flags(&self.occupied)
    }

    #[inline]
    fn insert(&mut self, g: &Graph, v: usize) {
        self.occupied[v] = true;
        self.size += 1;
        for &w in g.neighbors(v as u32) {
            self.blocked[w as usize] += 1;
        }
    }

    #[inline]
    fn delete(&mut self, g: &Graph, v: usize) {
        self.occupied[v] = false;
        self.size -= 1;
        for &w in g.neighbors(v as u32) {
            self.blocked[w as usize] -= 1;
        }
    }

    /// Recomputes everything from scratch: occupied vertices pairwise
    /// non-adjacent, blocked counts and size consistent.
    pub fn audit(&self, g: &Graph) -> Result<(), String> {
        if self.occupied.len() != g.n() {
            return Err("state size does not match graph".into());
        }
        let mut size = 0;
        for v in g.vertices() {
            let occ_nbrs = g
                .neighbors(v)
                .iter()
                .filter(|&&w| self.occupied[w as usize])
                .count() as u32;
            if occ_nbrs != self.blocked[v as usize] {
                return Err(format!(
                    "vertex {v}: blocked count {} != {occ_nbrs}",
                    self.blocked[v as usize]
                ));
            }
            if self.occupied[v as usize] {
                size += 1;
                if occ_nbrs > 0 {
                    return Err(format!("occupied vertex {v} has an occupied neighbor"));
                }
            }
        }
        if size != self.size {
            return Err(format!("size {} != recount {size}", self.size));
        }
        Ok(())
    }
}

/// `n` Metropolis single-vertex proposals at chemical potential `mu >= 0`.
/// Returns the number of accepted moves.
pub fn mcmc_sweep(state: &mut HardCoreState, g: &Graph, mu: f64, rng: &mut Rng) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    let p_delete = (-mu).exp();
    let mut accepted = 0;
    for _ in 0..n {
        let v = rng.random_range(0..n as u32) as usize;
        if state.occupied[v] {
            if p_delete >= 1.0 || rng.random::<f64>() < p_delete {
                state.delete(g, v);
                accepted += 1;
            }
        } else if state.blocked[v] == 0 {
            state.insert(g, v);
            accepted += 1;
        } else if state.blocked[v] == 1 {
            // Hop: the unique occupied neighbor's particle moves to v. Size
            // is unchanged and the reverse hop is proposed with the same
            // probability, so it is always accepted.
            let w = *g
                .neighbors(v as u32)
                .iter()
                .find(|&&w| state.occupied[w as usize])
                .expect("blocked count 1 implies an occupied neighbor")
                as usize;
            state.delete(g, w);
            state.insert(g, v);
            accepted += 1;
        }
    }
    accepted
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ramp {
    #[default]
    Linear,
    Geometric,
}

/// Chemical potential ramp for annealing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    pub mu_start: f64,
    pub mu_end: f64,
    pub sweeps: usize,
    #[serde(default)]
    pub ramp: Ramp,
}

impl AnnealSchedule {
    pub fn new(mu_start: f64, mu_end: f64, sweeps: usize, ramp: Ramp) -> Result<Self, McmcError> {
        let s = AnnealSchedule {
            mu_start,
            mu_end,
            sweeps,
            ramp,
        };
        s.check()?;
        Ok(s)
    }

    /// Linear ramp 0 -> 12 over 20000 sweeps.
    pub fn production() -> Self {
        AnnealSchedule {
            mu_start: 0.0,
            mu_end: 12.0,
            sweeps: 20_000,
            ramp: Ramp::Linear,
        }
    }

    pub fn check(&self) -> Result<(), McmcError> {
        if !(self.mu_start.is_finite() && self.mu_end.is_finite()) {
            return Err(McmcError::Schedule("potentials must be finite".into()));
        }
        if self.mu_start < 0.0 || self.mu_end < self.mu_start {
            return Err(McmcError::Schedule(format!(
                "need 0 <= mu_start <= mu_end, got {} -> {}",
                self.mu_start, self.mu_end
            )));
        }
        if self.ramp == Ramp::Geometric && self.mu_start == 0.0 {
            return Err(McmcError::Schedule(
                "geometric ramp needs mu_start > 0".into(),
            ));
        }
        Ok(())
    }

    /// Potential used on sweep `k` of `sweeps`.
    pub fn mu_at(&self, k: usize) -> f64 {
        if self.sweeps <= 1 {
            return self.mu_end;
        }
        let x = k as f64 / (self.sweeps - 1) as f64;
        match self.ramp {
            Ramp::Linear => self.mu_start + (self.mu_end - self.mu_start) * x,
            Ramp::Geometric => self.mu_start * (self.mu_end / self.mu_start).powf(x),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnnealOutcome {
    /// Largest state seen at a sweep boundary.
    pub best: IndependentSet,
    /// Best-so-far size after each sweep.
    pub best_trace: Vec<usize>,
    pub accepted: u64,
}

pub fn simulated_annealing(g: &Graph, schedule: &AnnealSchedule, seed: u64) -> IndependentSet {
    simulated_annealing_traced(g, schedule, seed).best
}

pub fn simulated_annealing_traced(
    g: &Graph,
    schedule: &AnnealSchedule,
    seed: u64,
) -> AnnealOutcome {
    let mut rng = seeded_rng(seed);
    let mut state = HardCoreState::empty(g.n());
    let mut best = state.occupied.clone();
    let mut best_size = 0;
    let mut best_trace = Vec::with_capacity(schedule.sweeps);
    let mut accepted = 0u64;
    for k in 0..schedule.sweeps {
        accepted += mcmc_sweep(&mut state, g, schedule.mu_at(k), &mut rng) as u64;
        if state.size > best_size {
            best_size = state.size;
            best.copy_from_slice(&state.occupied);
        }
        best_trace.push(best_size);
    }
    AnnealOutcome {
        best: IndependentSet::from_flags(&best),
        best_trace,
        accepted,
    }
}

/// Replica potentials and run length for parallel tempering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PtConfig {
    /// Non-decreasing list of potentials, one replica each.
    pub potentials: Vec<f64>,
    pub sweeps_per_round: usize,
    pub rounds: usize,
    /// Leading rounds during which every replica's potential ramps linearly
    /// from `potentials[0]` to its own value. Included in `rounds`.
    #[serde(default)]
    pub warmup_rounds: usize,
}

impl PtConfig {
    pub fn new(
        potentials: Vec<f64>,
        sweeps_per_round: usize,
        rounds: usize,
    ) -> Result<Self, McmcError> {
        let c = PtConfig {
            potentials,
            sweeps_per_round,
            rounds,
            warmup_rounds: 0,
        };
        c.check()?;
        Ok(c)
    }

    /// `replicas` potentials spaced geometrically over `[mu_min, mu_max]`.
    pub fn geometric(
        mu_min: f64,
        mu_max: f64,
        replicas: usize,
        sweeps_per_round: usize,
        rounds: usize,
    ) -> Result<Self, McmcError> {
        if replicas < 2 || mu_min <= 0.0 {
            return Err(McmcError::Config(
                "geometric spacing needs >= 2 replicas and mu_min > 0".into(),
            ));
        }
        let ratio = mu_max / mu_min;
        let potentials = (0..replicas)
            .map(|i| mu_min * ratio.powf(i as f64 / (replicas - 1) as f64))
            .collect();
        PtConfig::new(potentials, sweeps_per_round, rounds)
    }

    pub fn with_warmup(mut self, warmup_rounds: usize) -> Result<Self, McmcError> {
        self.warmup_rounds = warmup_rounds;
        self.check()?;
        Ok(self)
    }

    /// 8 replicas geometric in [0.5, 12], one sweep between swap attempts,
    /// 20000 rounds of which the first 10000 warm up.
    pub fn production() -> Self {
        PtConfig::geometric(0.5, 12.0, 8, 1, 20_000)
            .and_then(|c| c.with_warmup(10_000))
            .expect("valid production config")
    }

    /// Potential of replica `i` during round `round`.
    pub fn potential_at(&self, i: usize, round: usize) -> f64 {
        let target = self.potentials[i];
        if round >= self.warmup_rounds {
            return target;
        }
        let base = self.potentials[0];
        base + (target - base) * round as f64 / self.warmup_rounds as f64
    }

    pub fn check(&self) -> Result<(), McmcError> {
        if self.potentials.len() < 2 {
            return Err(McmcError::Config("need at least 2 replicas".into()));
        }
        if self.potentials.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(McmcError::Config(
                "potentials must be finite and >= 0".into(),
            ));
        }
        if self.potentials.windows(2).any(|w| w[1] < w[0]) {
            return Err(McmcError::Config("potentials must be ascending".into()));
        }
        if self.sweeps_per_round == 0 {
            return Err(McmcError::Config(
                "sweeps_per_round must be positive".into(),
            ));
        }
        if self.warmup_rounds > self.rounds {
            return Err(McmcError::Config("warmup_rounds exceeds rounds".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct PtOutcome {
    pub best: IndependentSet,
    /// Best-so-far size after each round.
    pub best_trace: Vec<usize>,
    /// Per adjacent pair `(i, i+1)`: attempted and accepted swaps.
    pub swap_attempts: Vec<u64>,
    pub swap_accepts: Vec<u64>,
    /// Final set size held at each potential.
    pub final_sizes: Vec<usize>,
}

impl PtOutcome {
    pub fn swap_acceptance(&self) -> Vec<f64> {
        self.swap_attempts
            .iter()
            .zip(&self.swap_accepts)
            .map(|(&a, &s)| if a == 0 { 0.0 } else { s as f64 / a as f64 })
            .collect()
    }
}

pub fn parallel_tempering(g: &Graph, config: &PtConfig, seed: u64) -> IndependentSet {
    parallel_tempering_traced(g, config, seed).best
}

// Replica sweeps run in parallel only above this many vertices.
const PARALLEL_MIN_N: usize = 4096;

/// Replica slot `i` runs at `potentials[i]` (ramped during warm-up); a swap
/// exchanges the states held by two adjacent slots. Each slot owns a generator split from
/// `seed`, and swap decisions use a separate stream, so results do not
/// depend on thread scheduling.
pub fn parallel_tempering_traced(g: &Graph, config: &PtConfig, seed: u64) -> PtOutcome {
    let replicas = config.potentials.len();
    let mut streams = split_streams(seed, replicas + 1);
    let mut swap_rng = streams.pop().unwrap();
    let mut slots: Vec<(HardCoreState, Rng)> = streams
        .into_iter()
        .map(|rng| (HardCoreState::empty(g.n()), rng))
        .collect();

    let mut best = vec![false; g.n()];
    let mut best_size = 0;
    let mut best_trace = Vec::with_capacity(config.rounds);
    let mut swap_attempts = vec![0u64; replicas - 1];
    let mut swap_accepts = vec![0u64; replicas - 1];
    let parallel = g.n() >= PARALLEL_MIN_N;

    for round in 0..config.rounds {
        let potentials: Vec<f64> = (0..replicas)
            .map(|i| config.potential_at(i, round))
            .collect();
        let advance = |(i, (state, rng)): (usize, &mut (HardCoreState, Rng))| {
            for _ in 0..config.sweeps_per_round {
                mcmc_sweep(state, g, potentials[i], rng);
            }
        };
        if parallel {
            slots.par_iter_mut().enumerate().for_each(advance);
        } else {
            slots.iter_mut().enumerate().for_each(advance);
        }

        for (state, _) in &slots {
            if state.size > best_size {
                best_size = state.size;
                best.copy_from_slice(&state.occupied);
            }
        }
        best_trace.push(best_size);

        for i in 0..replicas - 1 {
            let (lo, hi) = (potentials[i], potentials[i + 1]);
            let (s_lo, s_hi) = (slots[i].0.size as f64, slots[i + 1].0.size as f64);
            let log_ratio = (lo - hi) * (s_hi - s_lo);
            swap_attempts[i] += 1;
            if log_ratio >= 0.0 || swap_rng.random::<f64>() < log_ratio.exp() {
                let (a, b) = slots.split_at_mut(i + 1);
                std::mem::swap(&mut a[i].0, &mut b[0].0);
                swap_accepts[i] += 1;
            }
        }
    }

    PtOutcome {
        best: IndependentSet::from_flags(&best),
        best_trace,
        swap_attempts,
        swap_accepts,
        final_sizes: slots.iter().map(|(s, _)| s.size).collect(),
    }
}
