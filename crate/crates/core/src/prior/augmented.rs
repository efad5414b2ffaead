//! The MDP obtained from an MEMDP by cutting every distinguishing pair
//! into a win/lose lottery.

use num_traits::{One, Zero};
use std::collections::HashMap;

use crate::belief::{mix, Belief};
use crate::model::{normalize_dist, Dist, Mdp, Memdp, Names, ParityObjective};
use crate::rational::Rat;

#[derive(Debug, Clone)]
pub struct AugmentedMdp {
    pub mdp: Mdp,
    pub objective: ParityObjective,
    pub win: usize,
    pub lose: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AugmentError {
    #[error("continuation value missing for ({state}, {action}, {succ})")]
    Missing {
        state: String,
        action: String,
        succ: String,
    },
    #[error("continuation value for ({state}, {action}, {succ}) is outside [0,1]")]
    OutOfRange {
        state: String,
        action: String,
        succ: String,
    },
}

/// Continuation values `v(q, a, q')` keyed by dense indices.
pub type Continuations = HashMap<(usize, usize, usize), Rat>;

/// `w(q,a) = sum over q' of p[b,q,a](q') * v(q,a,q')`.
pub fn win_weight(p: &Dist, v: impl Fn(usize) -> Rat) -> Rat {
    p.iter().map(|(t, x)| x * v(*t)).sum()
}

pub(crate) fn lottery(w: Rat, win: usize, lose: usize) -> Dist {
    let l = Rat::one() - &w;
    normalize_dist(vec![(win, w), (lose, l)])
}

/// Builds the augmented MDP over `Q + {q_win, q_lose}`. Distinguishing
/// pairs of the model become lotteries between the two sinks.
pub fn mdp_from_memdp(
    m: &Memdp,
    obj: &ParityObjective,
    b: &Belief,
    v: &Continuations,
) -> Result<AugmentedMdp, AugmentError> {
    let n = m.num_states();
    let (win, lose) = (n, n + 1);
    let mut states = m.states.clone();
    states.push(fresh(&m.states, "q_win"));
    states.push(fresh(&m.states, "q_lose"));
    let e0 = b.support()[0];
    let mut delta = Vec::with_capacity(n + 2);
    for q in 0..n {
        let mut row = Vec::with_capacity(m.enabled[q].len());
        for (slot, &a) in m.enabled[q].iter().enumerate() {
            if !m.slot_distinguishing(q, slot) {
                row.push(m.delta[e0][q][slot].clone());
                continue;
            }
            let p = mix(b, m, q, slot);
            let mut w = Rat::zero();
            for (t, x) in &p {
                let name = || {
                    (
                        m.states.name(q).to_string(),
                        m.actions.name(a).to_string(),
                        m.states.name(*t).to_string(),
                    )
                };
                let Some(val) = v.get(&(q, a, *t)) else {
                    let (state, action, succ) = name();
                    return Err(AugmentError::Missing { state, action, succ });
                };
                if val < &Rat::zero() || val > &Rat::one() {
                    let (state, action, succ) = name();
                    return Err(AugmentError::OutOfRange { state, action, succ });
                }
                w += x * val;
            }
            row.push(lottery(w, win, lose));
        }
        delta.push(row);
    }
    let all: Vec<usize> = (0..m.actions.len()).collect();
    delta.push(vec![vec![(win, Rat::one())]; all.len()]);
    delta.push(vec![vec![(lose, Rat::one())]; all.len()]);
    let mut enabled = m.enabled.clone();
    enabled.push(all.clone());
    enabled.push(all);
    let mut priority = obj.priority.clone();
    priority.push(0);
    priority.push(1);
    Ok(AugmentedMdp {
        mdp: Mdp {
            states,
            actions: m.actions.clone(),
            enabled,
            delta,
        },
        objective: ParityObjective::new(priority),
        win,
        lose,
    })
}

fn fresh(names: &Names, base: &str) -> String {
    let mut s = base.to_string();
    while names.get(&s).is_some() {
        s.push('\'');
    }
    s
}
