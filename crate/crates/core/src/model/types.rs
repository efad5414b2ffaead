use num_traits::{One, Zero};
use std::collections::HashMap;

use crate::rational::Rat;

/// Sparse distribution over dense state indices: sorted by state, strictly
/// positive weights, summing to one.
pub type Dist = Vec<(usize, Rat)>;

pub fn dist_prob(d: &Dist, q: usize) -> Rat {
    match d.binary_search_by_key(&q, |(s, _)| *s) {
        Ok(i) => d[i].1.clone(),
        Err(_) => Rat::zero(),
    }
}

pub fn dirac(q: usize) -> Dist {
    vec![(q, Rat::one())]
}

/// Sorts by successor, merges duplicates and drops zero weights.
pub fn normalize_dist(mut d: Vec<(usize, Rat)>) -> Dist {
    d.sort_by_key(|(s, _)| *s);
    let mut out: Dist = Vec::with_capacity(d.len());
    for (s, p) in d {
        match out.last_mut() {
            Some((t, acc)) if *t == s => *acc += p,
            _ => out.push((s, p)),
        }
    }
    out.retain(|(_, p)| !p.is_zero());
    out
}

/// Interning table for string identifiers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Names {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Names {
    pub fn new<I, S>(it: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut n = Names::default();
        for s in it {
            n.push(s.into());
        }
        n
    }

    /// Appends a name, returning its index (or the existing index).
    pub fn push(&mut self, s: String) -> usize {
        if let Some(&i) = self.index.get(&s) {
            return i;
        }
        let i = self.names.len();
        self.index.insert(s.clone(), i);
        self.names.push(s);
        i
    }

    pub fn get(&self, s: &str) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    pub fn as_slice(&self) -> &[String] {
        &self.names
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mdp {
    pub states: Names,
    pub actions: Names,
    /// Enabled actions per state, sorted ascending.
    pub enabled: Vec<Vec<usize>>,
    /// `delta[q][i]` is the distribution of `(q, enabled[q][i])`.
    pub delta: Vec<Vec<Dist>>,
}

impl Mdp {
    pub fn num_states(&self) -> usize {
        self.enabled.len()
    }

    pub fn slot(&self, q: usize, a: usize) -> Option<usize> {
        self.enabled[q].binary_search(&a).ok()
    }

    pub fn dist(&self, q: usize, a: usize) -> Option<&Dist> {
        self.slot(q, a).map(|i| &self.delta[q][i])
    }

    /// Iterates `(action, distribution)` pairs enabled at `q`.
    pub fn choices(&self, q: usize) -> impl Iterator<Item = (usize, &Dist)> {
        self.enabled[q].iter().copied().zip(self.delta[q].iter())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Memdp {
    pub states: Names,
    pub actions: Names,
    pub environments: Names,
    /// Enabled actions per state, identical across environments.
    pub enabled: Vec<Vec<usize>>,
    /// `delta[e][q][i]` is the distribution of `(q, enabled[q][i])` in `e`.
    pub delta: Vec<Vec<Vec<Dist>>>,
}

impl Memdp {
    pub fn num_states(&self) -> usize {
        self.enabled.len()
    }

    pub fn num_envs(&self) -> usize {
        self.delta.len()
    }

    pub fn slot(&self, q: usize, a: usize) -> Option<usize> {
        self.enabled[q].binary_search(&a).ok()
    }

    pub fn dist(&self, e: usize, q: usize, a: usize) -> Option<&Dist> {
        self.slot(q, a).map(|i| &self.delta[e][q][i])
    }

    /// Whether the environments disagree on `(q, slot)`.
    pub fn slot_distinguishing(&self, q: usize, slot: usize) -> bool {
        let first = &self.delta[0][q][slot];
        self.delta[1..].iter().any(|d| &d[q][slot] != first)
    }

    /// The projection onto a single environment.
    pub fn slice(&self, e: usize) -> Mdp {
        Mdp {
            states: self.states.clone(),
            actions: self.actions.clone(),
            enabled: self.enabled.clone(),
            delta: self.delta[e].clone(),
        }
    }

    /// Lifts an MDP to a one-environment MEMDP.
    pub fn from_mdp(mdp: &Mdp, env_name: &str) -> Memdp {
        Memdp {
            states: mdp.states.clone(),
            actions: mdp.actions.clone(),
            environments: Names::new([env_name]),
            enabled: mdp.enabled.clone(),
            delta: vec![mdp.delta.clone()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityObjective {
    pub priority: Vec<u32>,
}

impl ParityObjective {
    pub fn new(priority: Vec<u32>) -> Self {
        ParityObjective { priority }
    }

    pub fn max_priority(&self) -> u32 {
        self.priority.iter().copied().max().unwrap_or(0)
    }

    /// Shifts every priority by one, swapping winning and losing runs.
    pub fn complement(&self) -> Self {
        ParityObjective::new(self.priority.iter().map(|p| p + 1).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pomdp {
    pub states: Names,
    pub actions: Names,
    pub enabled: Vec<Vec<usize>>,
    pub delta: Vec<Vec<Dist>>,
    pub observations: Names,
    pub obs: Vec<usize>,
}

impl Pomdp {
    pub fn num_states(&self) -> usize {
        self.enabled.len()
    }

    pub fn slot(&self, q: usize, a: usize) -> Option<usize> {
        self.enabled[q].binary_search(&a).ok()
    }

    pub fn dist(&self, q: usize, a: usize) -> Option<&Dist> {
        self.slot(q, a).map(|i| &self.delta[q][i])
    }

    /// The underlying MDP, forgetting observations.
    pub fn as_mdp(&self) -> Mdp {
        Mdp {
            states: self.states.clone(),
            actions: self.actions.clone(),
            enabled: self.enabled.clone(),
            delta: self.delta.clone(),
        }
    }
}

/// A finite run `q0 (a1 q1) ... (an qn)` over dense indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Run {
    pub start: usize,
    pub steps: Vec<(usize, usize)>,
}

impl Run {
    pub fn new(start: usize) -> Self {
        Run {
            start,
            steps: Vec::new(),
        }
    }

    pub fn head(&self) -> usize {
        self.steps.last().map_or(self.start, |&(_, q)| q)
    }

    pub fn push(&mut self, a: usize, q: usize) {
        self.steps.push((a, q));
    }

    /// Number of states in the run.
    pub fn len(&self) -> usize {
        self.steps.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn states(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.start).chain(self.steps.iter().map(|&(_, q)| q))
    }

    /// Iterates transitions `(q, a, q')`.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let mut prev = self.start;
        self.steps.iter().map(move |&(a, q)| {
            let t = (prev, a, q);
            prev = q;
            t
        })
    }
}
