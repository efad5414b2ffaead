//! Finitely representable strategies and their JSON form.

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

use super::SimError;
use crate::belief::{update, Belief};
use crate::model::{normalize_dist, Dist, Memdp};
use crate::rational::{parse_rat, rat, to_f64, Rat};

#[derive(Debug, Clone, PartialEq)]
pub enum FiniteStrategy {
    /// One action per state.
    Memoryless(Vec<usize>),
    FiniteMemory(MemoryStrategy),
    BeliefThreshold(ThresholdStrategy),
}

/// `choice[mem][q]` is a distribution over actions; after `(a, q')` the
/// memory moves to `update[(mem, a, q')]`, or stays if no entry exists.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryStrategy {
    pub initial: usize,
    pub choice: Vec<Vec<Dist>>,
    pub update: HashMap<(usize, usize, usize), usize>,
}

/// Tracks the environment belief from `prior`. At a state with a rule the
/// action depends on whether `b(env) >= at_least`; elsewhere `default`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdStrategy {
    pub prior: Belief,
    pub default: Vec<usize>,
    pub rules: Vec<ThresholdRule>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdRule {
    pub state: usize,
    pub env: usize,
    pub at_least: Rat,
    pub then: usize,
    pub otherwise: usize,
}

impl FiniteStrategy {
    /// Checks that every action the strategy can pick is enabled.
    pub fn check(&self, m: &Memdp) -> Result<(), SimError> {
        let enabled = |q: usize, a: usize| -> Result<(), SimError> {
            if q >= m.num_states() || a >= m.actions.len() {
                return Err(SimError::BadStrategy(format!("index out of range ({q}, {a})")));
            }
            if m.slot(q, a).is_none() {
                return Err(SimError::DisabledAction {
                    state: m.states.name(q).into(),
                    action: m.actions.name(a).into(),
                });
            }
            Ok(())
        };
        let table = |t: &[usize]| -> Result<(), SimError> {
            if t.len() != m.num_states() {
                return Err(SimError::BadStrategy("action table must cover every state".into()));
            }
            t.iter().enumerate().try_for_each(|(q, &a)| enabled(q, a))
        };
        match self {
            FiniteStrategy::Memoryless(t) => table(t),
            FiniteStrategy::FiniteMemory(s) => {
                if s.initial >= s.choice.len() {
                    return Err(SimError::BadStrategy("initial memory out of range".into()));
                }
                for row in &s.choice {
                    if row.len() != m.num_states() {
                        return Err(SimError::BadStrategy(
                            "choice table must cover every state".into(),
                        ));
                    }
                    for (q, d) in row.iter().enumerate() {
                        let total: Rat = d.iter().map(|(_, p)| p).sum();
                        if !total.is_one() || d.iter().any(|(_, p)| p <= &Rat::zero()) {
                            return Err(SimError::BadStrategy(format!(
                                "action distribution at {} does not sum to 1",
                                m.states.name(q)
                            )));
                        }
                        d.iter().try_for_each(|(a, _)| enabled(q, *a))?;
                    }
                }
                if s.update.values().any(|&n| n >= s.choice.len()) {
                    return Err(SimError::BadStrategy("memory update out of range".into()));
                }
                Ok(())
            }
            FiniteStrategy::BeliefThreshold(s) => {
                table(&s.default)?;
                if s.prior.len() != m.num_envs() {
                    return Err(SimError::BadStrategy("prior arity mismatch".into()));
                }
                for r in &s.rules {
                    if r.env >= m.num_envs() {
                        return Err(SimError::BadStrategy("rule environment out of range".into()));
                    }
                    enabled(r.state, r.then)?;
                    enabled(r.state, r.otherwise)?;
                }
                Ok(())
            }
        }
    }

    pub fn controller(&self) -> Controller<'_> {
        let (mem, belief) = match self {
            FiniteStrategy::Memoryless(_) => (0, None),
            FiniteStrategy::FiniteMemory(s) => (s.initial, None),
            FiniteStrategy::BeliefThreshold(s) => (0, Some(s.prior.clone())),
        };
        let cum = match self {
            FiniteStrategy::FiniteMemory(s) => s
                .choice
                .iter()
                .map(|row| row.iter().map(cumulative).collect())
                .collect(),
            _ => Vec::new(),
        };
        Controller {
            strategy: self,
            mem,
            belief,
            cum,
        }
    }
}

pub(crate) fn cumulative(d: &Dist) -> Vec<(usize, f64)> {
    let mut acc = 0.0;
    d.iter()
        .map(|(t, p)| {
            acc += to_f64(p);
            (*t, acc)
        })
        .collect()
}

pub(crate) fn pick(cum: &[(usize, f64)], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.gen::<f64>() * cum.last().map_or(1.0, |c| c.1);
    cum.iter()
        .find(|(_, c)| u < *c)
        .or(cum.last())
        .expect("nonempty distribution")
        .0
}

/// Per-run execution state of a strategy.
pub struct Controller<'a> {
    strategy: &'a FiniteStrategy,
    mem: usize,
    belief: Option<Belief>,
    cum: Vec<Vec<Vec<(usize, f64)>>>,
}

impl Controller<'_> {
    pub fn act(&self, q: usize, rng: &mut impl Rng) -> usize {
        match self.strategy {
            FiniteStrategy::Memoryless(t) => t[q],
            FiniteStrategy::FiniteMemory(_) => pick(&self.cum[self.mem][q], rng),
            FiniteStrategy::BeliefThreshold(s) => {
                let b = self.belief.as_ref().expect("threshold strategies track a belief");
                match s.rules.iter().find(|r| r.state == q) {
                    Some(r) if b.get(r.env) >= &r.at_least => r.then,
                    Some(r) => r.otherwise,
                    None => s.default[q],
                }
            }
        }
    }

    pub fn observe(&mut self, m: &Memdp, q: usize, a: usize, next: usize) {
        match self.strategy {
            FiniteStrategy::Memoryless(_) => {}
            FiniteStrategy::FiniteMemory(s) => {
                if let Some(&n) = s.update.get(&(self.mem, a, next)) {
                    self.mem = n;
                }
            }
            FiniteStrategy::BeliefThreshold(_) => {
                let b = self.belief.take().expect("belief present");
                self.belief = Some(update(&b, q, a, next, m).belief);
            }
        }
    }

    pub fn memory(&self) -> usize {
        self.mem
    }
}

/// A strategy with `memory` states, uniformly random action weights from
/// `{1..4}/sum`, and a random memory update on every observed transition.
pub fn random_strategy(m: &Memdp, memory: usize, rng: &mut impl Rng) -> FiniteStrategy {
    let memory = memory.max(1);
    let choice = (0..memory)
        .map(|_| {
            (0..m.num_states())
                .map(|q| {
                    let ws: Vec<i64> = m.enabled[q].iter().map(|_| rng.gen_range(1..=4)).collect();
                    let total: i64 = ws.iter().sum();
                    normalize_dist(
                        m.enabled[q]
                            .iter()
                            .zip(ws)
                            .map(|(&a, w)| (a, rat(w, total)))
                            .collect(),
                    )
                })
                .collect()
        })
        .collect();
    let mut update = HashMap::new();
    for mem in 0..memory {
        for q in 0..m.num_states() {
            for (slot, &a) in m.enabled[q].iter().enumerate() {
                for e in 0..m.num_envs() {
                    for (t, _) in &m.delta[e][q][slot] {
                        update
                            .entry((mem, a, *t))
                            .or_insert_with(|| rng.gen_range(0..memory));
                    }
                }
            }
        }
    }
    FiniteStrategy::FiniteMemory(MemoryStrategy {
        initial: 0,
        choice,
        update,
    })
}

/// JSON form of [`FiniteStrategy`], using names and rational strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StrategySpec {
    /// Unlisted states play their first enabled action.
    Memoryless { actions: BTreeMap<String, String> },
    FiniteMemory {
        memory: usize,
        #[serde(default)]
        initial: usize,
        /// One table per memory state: state -> action -> probability.
        choice: Vec<BTreeMap<String, BTreeMap<String, String>>>,
        #[serde(default)]
        update: Vec<UpdateSpec>,
    },
    BeliefThreshold {
        prior: BTreeMap<String, String>,
        #[serde(default)]
        default: BTreeMap<String, String>,
        rules: Vec<RuleSpec>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UpdateSpec {
    pub memory: usize,
    pub action: String,
    pub state: String,
    pub next: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleSpec {
    pub state: String,
    pub env: String,
    pub at_least: String,
    pub then: String,
    #[serde(rename = "else")]
    pub otherwise: String,
}

impl StrategySpec {
    pub fn parse(text: &str) -> Result<Self, SimError> {
        serde_json::from_str(text).map_err(|e| SimError::BadStrategy(e.to_string()))
    }

    /// Resolves names against `m` and checks the result.
    pub fn resolve(&self, m: &Memdp) -> Result<FiniteStrategy, SimError> {
        let state = |s: &str| {
            m.states
                .get(s)
                .ok_or_else(|| SimError::UnknownName(format!("state {s}")))
        };
        let action = |s: &str| {
            m.actions
                .get(s)
                .ok_or_else(|| SimError::UnknownName(format!("action {s}")))
        };
        let prob = |s: &str| {
            parse_rat(s).map_err(|e| SimError::BadStrategy(format!("probability {s}: {e}")))
        };
        let table = |map: &BTreeMap<String, String>| -> Result<Vec<usize>, SimError> {
            let mut t: Vec<usize> = m.enabled.iter().map(|en| en[0]).collect();
            for (s, a) in map {
                t[state(s)?] = action(a)?;
            }
            Ok(t)
        };
        let strat = match self {
            StrategySpec::Memoryless { actions } => FiniteStrategy::Memoryless(table(actions)?),
            StrategySpec::FiniteMemory {
                memory,
                initial,
                choice,
                update,
            } => {
                if choice.len() != *memory {
                    return Err(SimError::BadStrategy(format!(
                        "expected {memory} choice tables, found {}",
                        choice.len()
                    )));
                }
                let mut rows = Vec::with_capacity(*memory);
                for tab in choice {
                    let mut row: Vec<Dist> = m
                        .enabled
                        .iter()
                        .map(|en| vec![(en[0], Rat::one())])
                        .collect();
                    for (s, dist) in tab {
                        let mut d = Vec::new();
                        for (a, p) in dist {
                            d.push((action(a)?, prob(p)?));
                        }
                        row[state(s)?] = normalize_dist(d);
                    }
                    rows.push(row);
                }
                let mut up = HashMap::new();
                for u in update {
                    up.insert((u.memory, action(&u.action)?, state(&u.state)?), u.next);
                }
                FiniteStrategy::FiniteMemory(MemoryStrategy {
                    initial: *initial,
                    choice: rows,
                    update: up,
                })
            }
            StrategySpec::BeliefThreshold {
                prior,
                default,
                rules,
            } => {
                let mut w = vec![Rat::zero(); m.num_envs()];
                for (e, p) in prior {
                    let i = m
                        .environments
                        .get(e)
                        .ok_or_else(|| SimError::UnknownName(format!("environment {e}")))?;
                    w[i] = prob(p)?;
                }
                let prior =
                    Belief::new(w).map_err(|e| SimError::BadStrategy(format!("prior: {e}")))?;
                let mut rs = Vec::new();
                for r in rules {
                    rs.push(ThresholdRule {
                        state: state(&r.state)?,
                        env: m
                            .environments
                            .get(&r.env)
                            .ok_or_else(|| SimError::UnknownName(format!("environment {}", r.env)))?,
                        at_least: prob(&r.at_least)?,
                        then: action(&r.then)?,
                        otherwise: action(&r.otherwise)?,
                    });
                }
                FiniteStrategy::BeliefThreshold(ThresholdStrategy {
                    prior,
                    default: table(default)?,
                    rules: rs,
                })
            }
        };
        strat.check(m)?;
        Ok(strat)
    }
}
