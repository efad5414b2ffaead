//! POMDP beliefs and entropy, the Dirac-preservation check, and the
//! translations between Dirac-preserving POMDPs and MEMDPs.

mod reduce;

pub use reduce::{memdp_from_pomdp, memdp_to_pomdp, Embedding, Reduction, TupleState};

use num_traits::{One, Zero};
use std::collections::BTreeMap;

use crate::belief::Belief;
use crate::interval::Interval;
use crate::model::{ParityObjective, Pomdp};
use crate::rational::{log2_interval, rat_interval, Rat};

/// A belief over POMDP states.
pub type StateBelief = Belief;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PomdpError {
    #[error("belief has {got} entries, model has {want} states")]
    BeliefArity { got: usize, want: usize },
    #[error("action {action} is not enabled at {state}")]
    ActionNotEnabled { state: String, action: String },
    #[error("not Dirac-preserving: ({state}, {action}) reaches several states observed as {observation}")]
    NotDiracPreserving {
        state: String,
        action: String,
        observation: String,
    },
    #[error("priorities differ on states {0} and {1}, which share an observation")]
    ObjectiveNotCompatible(String, String),
    #[error("belief support spans observations {0} and {1}")]
    SupportNotCompatible(String, String),
    #[error("states {0} and {1} share an observation but not their actions")]
    ActionSetMismatch(String, String),
    #[error("reduction exceeded {0} tuple states")]
    TooLarge(usize),
}

/// A state-action pair that can split a Dirac belief.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiracViolation {
    pub state: usize,
    pub action: usize,
    pub observation: usize,
}

impl DiracViolation {
    pub fn into_error(self, p: &Pomdp) -> PomdpError {
        PomdpError::NotDiracPreserving {
            state: p.states.name(self.state).to_string(),
            action: p.actions.name(self.action).to_string(),
            observation: p.observations.name(self.observation).to_string(),
        }
    }
}

/// Probability of each compatible observation after playing `a` from `b`,
/// with the corresponding posterior.
pub fn pomdp_successor(
    b: &StateBelief,
    a: usize,
    p: &Pomdp,
) -> Result<BTreeMap<usize, (Rat, StateBelief)>, PomdpError> {
    let n = p.num_states();
    if b.len() != n {
        return Err(PomdpError::BeliefArity {
            got: b.len(),
            want: n,
        });
    }
    let mut mass: BTreeMap<usize, Vec<Rat>> = BTreeMap::new();
    for q in b.support() {
        let Some(d) = p.dist(q, a) else {
            return Err(PomdpError::ActionNotEnabled {
                state: p.states.name(q).to_string(),
                action: p.actions.name(a).to_string(),
            });
        };
        for (t, x) in d {
            let row = mass
                .entry(p.obs[*t])
                .or_insert_with(|| vec![Rat::zero(); n]);
            row[*t] += b.get(q) * x;
        }
    }
    Ok(mass
        .into_iter()
        .map(|(o, w)| {
            let total: Rat = w.iter().sum();
            let post = w.into_iter().map(|x| x / &total).collect();
            (o, (total, Belief::new(post).expect("posterior is normalized")))
        })
        .collect())
}

/// Base-2 entropy, as an enclosure a few ulps wide.
pub fn entropy(b: &Belief) -> Interval {
    let mut acc = Interval::point(0.0);
    for w in b.weights() {
        if w.is_zero() || w.is_one() {
            continue;
        }
        acc = acc + rat_interval(w) * log2_interval(w);
    }
    let h = -acc;
    Interval::new(h.lo.max(0.0), h.hi.max(0.0))
}

/// `sum over o of p(b,a,o) * H(posterior_o)`.
pub fn expected_posterior_entropy(
    b: &StateBelief,
    a: usize,
    p: &Pomdp,
) -> Result<Interval, PomdpError> {
    let mut acc = Interval::point(0.0);
    for (_, (pr, post)) in pomdp_successor(b, a, p)? {
        acc = acc + rat_interval(&pr) * entropy(&post);
    }
    Ok(Interval::new(acc.lo.max(0.0), acc.hi.max(0.0)))
}

/// First `(q, a, o)` whose successors observed as `o` number more than one.
pub fn dirac_violation(p: &Pomdp) -> Option<DiracViolation> {
    for q in 0..p.num_states() {
        for (slot, &a) in p.enabled[q].iter().enumerate() {
            let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
            for (t, _) in &p.delta[q][slot] {
                let o = p.obs[*t];
                if *seen.entry(o).or_insert(*t) != *t {
                    return Some(DiracViolation {
                        state: q,
                        action: a,
                        observation: o,
                    });
                }
            }
        }
    }
    None
}

/// Whether Dirac beliefs stay Dirac, equivalently whether expected entropy
/// never increases.
pub fn is_dirac_preserving(p: &Pomdp) -> bool {
    dirac_violation(p).is_none()
}

/// A Dirac belief and action whose expected posterior entropy is positive.
pub fn entropy_increase_witness(
    p: &Pomdp,
    v: &DiracViolation,
) -> (StateBelief, usize, Interval) {
    let b = Belief::dirac(p.num_states(), v.state);
    let h = expected_posterior_entropy(&b, v.action, p).expect("violation is enabled");
    (b, v.action, h)
}

/// Priorities agree on states sharing an observation. Returns the first
/// offending pair otherwise.
pub fn observation_conflict(p: &Pomdp, obj: &ParityObjective) -> Option<(usize, usize)> {
    let mut first: BTreeMap<usize, usize> = BTreeMap::new();
    for q in 0..p.num_states() {
        let r = *first.entry(p.obs[q]).or_insert(q);
        if obj.priority[r] != obj.priority[q] {
            return Some((r, q));
        }
    }
    None
}

pub fn is_observation_compatible(p: &Pomdp, obj: &ParityObjective) -> bool {
    observation_conflict(p, obj).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{dirac, Names};
    use crate::rational::rat;

    /// s0 -a-> {s1: 1/3, s2: 2/3}, s1 and s2 share observation "x".
    fn splitter() -> Pomdp {
        Pomdp {
            states: Names::new(["s0", "s1", "s2"]),
            actions: Names::new(["a"]),
            enabled: vec![vec![0]; 3],
            delta: vec![
                vec![vec![(1, rat(1, 3)), (2, rat(2, 3))]],
                vec![vec![(0, rat(1, 2)), (1, rat(1, 2))]],
                vec![dirac(2)],
            ],
            observations: Names::new(["o", "x"]),
            obs: vec![0, 1, 1],
        }
    }

    #[test]
    fn hand_bayes() {
        let p = splitter();
        let b = Belief::uniform(3);
        let post = pomdp_successor(&b, 0, &p).unwrap();
        // o: s1 -> s0 with 1/3 * 1/2 = 1/6.
        let (po, bo) = &post[&0];
        assert_eq!(po, &rat(1, 6));
        assert_eq!(bo.weights(), &[rat(1, 1), rat(0, 1), rat(0, 1)]);
        // x: s1 gets 1/9 + 1/6 = 5/18, s2 gets 2/9 + 1/3 = 10/18.
        let (px, bx) = &post[&1];
        assert_eq!(px, &rat(5, 6));
        assert_eq!(bx.weights(), &[rat(0, 1), rat(1, 3), rat(2, 3)]);
    }

    #[test]
    fn entropies() {
        assert_eq!(entropy(&Belief::dirac(3, 1)), Interval::point(0.0));
        assert!(entropy(&Belief::uniform(4)).contains(2.0));
        let h = entropy(&Belief::new(vec![rat(1, 4), rat(3, 4)]).unwrap());
        let expect = 2.0 - 0.75 * 3f64.log2();
        assert!(h.contains(expect) || (h.mid() - expect).abs() < 1e-15);
        assert!(h.width() < 2f64.powi(-30));
        assert!((h.mid() - 0.811278).abs() < 1e-6);
    }

    #[test]
    fn splitter_is_not_dirac_preserving() {
        let p = splitter();
        let v = dirac_violation(&p).unwrap();
        assert_eq!((v.state, v.action, v.observation), (0, 0, 1));
        let (b, _, h) = entropy_increase_witness(&p, &v);
        assert!(entropy(&b).hi == 0.0);
        assert!(h.lo > 0.0);
    }

    #[test]
    fn fully_observable_is_dirac_preserving() {
        let mut p = splitter();
        p.observations = Names::new(["o0", "o1", "o2"]);
        p.obs = vec![0, 1, 2];
        assert!(is_dirac_preserving(&p));
        let post = pomdp_successor(&Belief::dirac(3, 0), 0, &p).unwrap();
        assert!(post.values().all(|(_, b)| b.is_dirac()));
        assert!(is_observation_compatible(&p, &ParityObjective::new(vec![0, 1, 2])));
    }

    #[test]
    fn shared_observation_conflict() {
        let p = splitter();
        assert!(!is_observation_compatible(&p, &ParityObjective::new(vec![0, 1, 2])));
        assert!(is_observation_compatible(&p, &ParityObjective::new(vec![0, 2, 2])));
    }
}
