//! Simulation of strategies in a fixed environment, belief-trace statistics
//! and brute-force oracles for small instances.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64(seed)`; run `i`
//! of a batch uses stream `i`, so batches are reproducible and independent
//! of thread scheduling.

mod oracle;
mod strategy;
mod trace;

pub use oracle::{exact_memoryless_parity_oracle, markov_chain_parity, OracleResult, MAX_STRATEGIES};
pub use strategy::{
    random_strategy, Controller, FiniteStrategy, MemoryStrategy, RuleSpec, StrategySpec,
    ThresholdRule, ThresholdStrategy, UpdateSpec,
};
pub use trace::{belief_trace_stats, TraceStats};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::model::{Memdp, ParityObjective, Run};
use strategy::{cumulative, pick};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("strategy picks {action}, which is not enabled at {state}")]
    DisabledAction { state: String, action: String },
    #[error("unknown {0}")]
    UnknownName(String),
    #[error("invalid strategy: {0}")]
    BadStrategy(String),
    #[error("environment index {0} out of range")]
    BadEnvironment(usize),
    #[error("state index {0} out of range")]
    BadState(usize),
    #[error("instance too large: {0} memoryless strategies exceed the limit")]
    TooLarge(u128),
}

/// The generator for run `index` of a batch seeded with `seed`.
pub fn run_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Float cumulative tables for one environment.
struct Sampler {
    cum: Vec<Vec<Vec<(usize, f64)>>>,
    absorbing: Vec<bool>,
}

impl Sampler {
    fn new(m: &Memdp, env: usize) -> Self {
        let cum = m.delta[env]
            .iter()
            .map(|row| row.iter().map(cumulative).collect())
            .collect();
        let absorbing = (0..m.num_states())
            .map(|q| {
                m.delta[env][q]
                    .iter()
                    .all(|d| d.len() == 1 && d[0].0 == q)
            })
            .collect();
        Sampler { cum, absorbing }
    }
}

fn check_inputs(
    m: &Memdp,
    env: usize,
    strategy: &FiniteStrategy,
    start: usize,
) -> Result<(), SimError> {
    if env >= m.num_envs() {
        return Err(SimError::BadEnvironment(env));
    }
    if start >= m.num_states() {
        return Err(SimError::BadState(start));
    }
    strategy.check(m)
}

fn step_run(
    m: &Memdp,
    sampler: &Sampler,
    strategy: &FiniteStrategy,
    start: usize,
    horizon: u64,
    rng: &mut ChaCha8Rng,
    stop_when_absorbed: bool,
) -> Run {
    let mut run = Run::new(start);
    let mut ctl = strategy.controller();
    let mut q = start;
    for _ in 0..horizon {
        if stop_when_absorbed && sampler.absorbing[q] {
            break;
        }
        let a = ctl.act(q, rng);
        let slot = m.slot(q, a).expect("checked strategy");
        let next = pick(&sampler.cum[q][slot], rng);
        ctl.observe(m, q, a, next);
        run.push(a, next);
        q = next;
    }
    run
}

/// A run of exactly `horizon` steps in environment `env`.
pub fn sample_run(
    m: &Memdp,
    env: usize,
    strategy: &FiniteStrategy,
    start: usize,
    horizon: u64,
    seed: u64,
) -> Result<Run, SimError> {
    check_inputs(m, env, strategy, start)?;
    let sampler = Sampler::new(m, env);
    let mut rng = run_rng(seed, 0);
    Ok(step_run(m, &sampler, strategy, start, horizon, &mut rng, false))
}

/// Runs of a batch, run `i` drawn from stream `i`.
pub fn sample_runs(
    m: &Memdp,
    env: usize,
    strategy: &FiniteStrategy,
    start: usize,
    runs: u64,
    horizon: u64,
    seed: u64,
) -> Result<Vec<Run>, SimError> {
    check_inputs(m, env, strategy, start)?;
    let sampler = Sampler::new(m, env);
    Ok((0..runs)
        .into_par_iter()
        .map(|i| {
            let mut rng = run_rng(seed, i);
            step_run(m, &sampler, strategy, start, horizon, &mut rng, false)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub runs: u64,
    /// Runs that reached an absorbing state before the horizon.
    pub absorbed: u64,
    /// Fraction of runs scored heuristically; the estimate can be off by
    /// at most this much.
    pub bias_bound: f64,
}

/// Monte-Carlo estimate of the parity probability. Absorbed runs are scored
/// by the sink's priority, the rest by the highest priority seen in the
/// second half of the horizon.
pub fn mc_parity_estimate(
    m: &Memdp,
    obj: &ParityObjective,
    env: usize,
    strategy: &FiniteStrategy,
    start: usize,
    runs: u64,
    horizon: u64,
    seed: u64,
) -> Result<McEstimate, SimError> {
    check_inputs(m, env, strategy, start)?;
    let runs = runs.max(1);
    let sampler = Sampler::new(m, env);
    let (wins, absorbed) = (0..runs)
        .into_par_iter()
        .map(|i| {
            let mut rng = run_rng(seed, i);
            let run = step_run(m, &sampler, strategy, start, horizon, &mut rng, true);
            let last = run.head();
            if sampler.absorbing[last] {
                (obj.priority[last].is_multiple_of(2) as u64, 1u64)
            } else {
                let states: Vec<usize> = run.states().collect();
                let from = states.len() / 2;
                let top = states[from..].iter().map(|&q| obj.priority[q]).max().unwrap_or(0);
                ((top % 2 == 0) as u64, 0)
            }
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let p = wins as f64 / runs as f64;
    Ok(McEstimate {
        estimate: p,
        stderr: (p * (1.0 - p) / runs as f64).sqrt(),
        runs,
        absorbed,
        bias_bound: (runs - absorbed) as f64 / runs as f64,
    })
}
