//! Beliefs over environments and their Bayesian updates along runs.

use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::model::{Dist, Memdp, Names, Run};
use crate::rational::{fmt_rat, floor_dyadic, pow2, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BeliefError {
    #[error("belief weights sum to {0}, not 1")]
    BadSum(String),
    #[error("belief weight {0} outside [0,1]")]
    OutOfRange(String),
    #[error("belief has {got} weights but the model has {want} environments")]
    Arity { got: usize, want: usize },
    #[error("cannot truncate a belief whose support has a single element")]
    SingletonSupport,
}

/// A distribution over environments, indexed densely.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Belief {
    w: Vec<Rat>,
}

impl Belief {
    pub fn new(w: Vec<Rat>) -> Result<Self, BeliefError> {
        if let Some(x) = w.iter().find(|x| x.is_negative() || **x > Rat::one()) {
            return Err(BeliefError::OutOfRange(fmt_rat(x)));
        }
        let s: Rat = w.iter().sum();
        if !s.is_one() {
            return Err(BeliefError::BadSum(fmt_rat(&s)));
        }
        Ok(Belief { w })
    }

    pub fn uniform(k: usize) -> Self {
        Self::uniform_over(k, &(0..k).collect::<Vec<_>>())
    }

    pub fn uniform_over(k: usize, support: &[usize]) -> Self {
        let share = Rat::new(1.into(), (support.len() as i64).into());
        let mut w = vec![Rat::zero(); k];
        for &e in support {
            w[e] = share.clone();
        }
        Belief { w }
    }

    pub fn dirac(k: usize, e: usize) -> Self {
        let mut w = vec![Rat::zero(); k];
        w[e] = Rat::one();
        Belief { w }
    }

    /// Two-environment belief `(x, 1 - x)`.
    pub fn pair(x: Rat) -> Self {
        let y = Rat::one() - &x;
        Belief { w: vec![x, y] }
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn weights(&self) -> &[Rat] {
        &self.w
    }

    pub fn get(&self, e: usize) -> &Rat {
        &self.w[e]
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.w.len()).filter(|&e| self.w[e].is_positive()).collect()
    }

    pub fn support_size(&self) -> usize {
        self.w.iter().filter(|x| x.is_positive()).count()
    }

    pub fn is_dirac(&self) -> bool {
        self.support_size() == 1
    }

    /// Smallest positive weight and its environment (lowest index on ties).
    pub fn min_positive(&self) -> (usize, &Rat) {
        let mut best: Option<(usize, &Rat)> = None;
        for (e, x) in self.w.iter().enumerate() {
            if x.is_positive() && best.is_none_or(|(_, b)| x < b) {
                best = Some((e, x));
            }
        }
        best.expect("belief has nonempty support")
    }

    pub fn display<'a>(&'a self, names: &'a Names) -> BeliefDisplay<'a> {
        BeliefDisplay { b: self, names }
    }

    pub fn to_json(&self, names: &Names) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        for (e, x) in self.w.iter().enumerate() {
            m.insert(names.name(e).to_string(), serde_json::Value::String(fmt_rat(x)));
        }
        serde_json::Value::Object(m)
    }
}

pub struct BeliefDisplay<'a> {
    b: &'a Belief,
    names: &'a Names,
}

impl fmt::Display for BeliefDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (e, x) in self.b.w.iter().enumerate() {
            if e > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {}", self.names.name(e), x)?;
        }
        write!(f, "}}")
    }
}

/// `p[b,q,a]`: the successor distribution mixed over environments.
pub fn successor_dist(b: &Belief, q: usize, a: usize, m: &Memdp) -> Dist {
    let slot = m.slot(q, a).expect("action enabled at state");
    mix(b, m, q, slot)
}

pub(crate) fn mix(b: &Belief, m: &Memdp, q: usize, slot: usize) -> Dist {
    let mut acc: Vec<(usize, Rat)> = Vec::new();
    for (e, we) in b.w.iter().enumerate() {
        if we.is_zero() {
            continue;
        }
        for (t, p) in &m.delta[e][q][slot] {
            acc.push((*t, we * p));
        }
    }
    crate::model::normalize_dist(acc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Update {
    pub belief: Belief,
    /// The observed successor had probability zero under `b`.
    pub degenerate: bool,
}

/// Bayesian posterior `λ[b,q,a,q']`.
pub fn update(b: &Belief, q: usize, a: usize, q_next: usize, m: &Memdp) -> Update {
    let slot = m.slot(q, a).expect("action enabled at state");
    update_slot(b, m, q, slot, q_next)
}

pub(crate) fn update_slot(b: &Belief, m: &Memdp, q: usize, slot: usize, q_next: usize) -> Update {
    let mut w = Vec::with_capacity(b.w.len());
    let mut total = Rat::zero();
    for (e, we) in b.w.iter().enumerate() {
        let x = if we.is_zero() {
            Rat::zero()
        } else {
            we * crate::model::dist_prob(&m.delta[e][q][slot], q_next)
        };
        total += &x;
        w.push(x);
    }
    if total.is_zero() {
        return Update {
            belief: Belief::uniform_over(b.len(), &b.support()),
            degenerate: true,
        };
    }
    for x in &mut w {
        if !x.is_zero() {
            *x /= &total;
        }
    }
    Update {
        belief: Belief { w },
        degenerate: false,
    }
}

/// Beliefs after each prefix of `run`, starting with `b` itself.
pub fn likelihood_trace(b: &Belief, run: &Run, m: &Memdp) -> Vec<Belief> {
    let mut out = Vec::with_capacity(run.len());
    out.push(b.clone());
    for (q, a, t) in run.transitions() {
        let next = update(out.last().unwrap(), q, a, t, m).belief;
        out.push(next);
    }
    out
}

/// Total-variation distance.
pub fn diff(b: &Belief, b2: &Belief) -> Rat {
    assert_eq!(b.len(), b2.len(), "beliefs over different environment sets");
    let s: Rat = b.w.iter().zip(&b2.w).map(|(x, y)| (x - y).abs()).sum();
    s / Rat::from_integer(2.into())
}

/// Removes the smallest positive weight, moving its mass to the
/// lowest-index other support member.
pub fn truncate(b: &Belief) -> Result<Belief, BeliefError> {
    let supp = b.support();
    if supp.len() < 2 {
        return Err(BeliefError::SingletonSupport);
    }
    let (drop, mass) = b.min_positive();
    let mass = mass.clone();
    let into = *supp.iter().find(|&&e| e != drop).unwrap();
    let mut w = b.w.clone();
    w[drop] = Rat::zero();
    w[into] += mass;
    Ok(Belief { w })
}

/// Rounds weights down onto the `2^-bits` grid, keeping every support
/// member at least `2^-bits` and giving the slack to the largest weight.
/// Returns the rounded belief and its distance to `b`.
pub fn round_dyadic(b: &Belief, bits: u32) -> (Belief, Rat) {
    let unit = pow2(-(bits as i64));
    let top = (0..b.len()).max_by(|&x, &y| b.w[x].cmp(&b.w[y]).then(y.cmp(&x))).unwrap();
    let mut w: Vec<Rat> = b
        .w
        .iter()
        .map(|x| {
            if x.is_zero() {
                Rat::zero()
            } else {
                floor_dyadic(x, bits).max(unit.clone())
            }
        })
        .collect();
    let rest: Rat = w
        .iter()
        .enumerate()
        .filter(|(e, _)| *e != top)
        .map(|(_, x)| x.clone())
        .sum();
    w[top] = Rat::one() - rest;
    assert!(w[top].is_positive(), "grid too coarse for this belief");
    let r = Belief { w };
    let d = diff(b, &r);
    (r, d)
}

/// Pairs `(q,a)` where some successor is impossible in `e_from` yet
/// possible in `e_to`.
pub fn revealing_pairs(m: &Memdp, e_from: usize, e_to: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for q in 0..m.num_states() {
        for (slot, &a) in m.enabled[q].iter().enumerate() {
            if is_revealing(m, q, slot, e_from, e_to) {
                out.push((q, a));
            }
        }
    }
    out
}

pub(crate) fn is_revealing(m: &Memdp, q: usize, slot: usize, e_from: usize, e_to: usize) -> bool {
    let from = &m.delta[e_from][q][slot];
    m.delta[e_to][q][slot]
        .iter()
        .any(|(t, _)| from.binary_search_by_key(t, |(s, _)| *s).is_err())
}
