//! Optimal values of MDPs with parity objectives.
//!
//! The value of a state is its maximal probability of reaching the union of
//! end components in which the highest priority can be kept even.

mod graph;
mod linsolve;
mod reach;

pub use graph::{mecs_within, scc, EndComponent};
pub use linsolve::{solve as solve_linear, Singular};
pub use reach::{almost_sure, can_reach, max_reach, max_reach_float};

use num_traits::Zero;
use serde::Serialize;

use crate::model::{Dist, Mdp, ParityObjective};
use crate::rational::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueTable {
    pub values: Vec<Rat>,
    /// Bound on the distance to the true values; zero when exact.
    pub accuracy: Rat,
}

impl ValueTable {
    pub fn exact(values: Vec<Rat>) -> Self {
        ValueTable {
            values,
            accuracy: Rat::zero(),
        }
    }
}

pub fn mec_decomposition(mdp: &Mdp) -> Vec<EndComponent> {
    mecs_within(&mdp.delta, &vec![true; mdp.num_states()])
}

/// Union of end components that can be kept even-winning with probability 1.
pub fn winning_mec_union(mdp: &Mdp, obj: &ParityObjective) -> Vec<bool> {
    winning_union_raw(&mdp.delta, &obj.priority)
}

pub(crate) fn winning_union_raw(choices: &[Vec<Dist>], priority: &[u32]) -> Vec<bool> {
    let n = choices.len();
    let mut win = vec![false; n];
    let mut work: Vec<Vec<bool>> = vec![vec![true; n]];
    while let Some(subset) = work.pop() {
        for ec in mecs_within(choices, &subset) {
            let top = ec.states.iter().map(|&q| priority[q]).max().unwrap();
            if top % 2 == 0 {
                for &q in &ec.states {
                    win[q] = true;
                }
            } else {
                let mut rest = vec![false; n];
                let mut any = false;
                for &q in &ec.states {
                    if priority[q] != top {
                        rest[q] = true;
                        any = true;
                    }
                }
                if any {
                    work.push(rest);
                }
            }
        }
    }
    win
}

pub(crate) fn parity_values_raw(choices: &[Vec<Dist>], priority: &[u32]) -> Vec<Rat> {
    let win = winning_union_raw(choices, priority);
    max_reach(choices, &win)
}

/// Maximal reachability probabilities into `target`.
pub fn reachability_value(mdp: &Mdp, target: &[bool]) -> ValueTable {
    ValueTable::exact(max_reach(&mdp.delta, target))
}

/// Exact optimal parity values.
pub fn parity_value(mdp: &Mdp, obj: &ParityObjective) -> ValueTable {
    ValueTable::exact(parity_values_raw(&mdp.delta, &obj.priority))
}

#[derive(Debug, Clone, Serialize)]
pub struct FloatValues {
    pub values: Vec<f64>,
    /// Largest change in the final value-iteration sweep.
    pub residual: f64,
}

/// Value iteration on the reachability reduction, in `f64`.
pub fn parity_value_float(mdp: &Mdp, obj: &ParityObjective, tol: f64) -> FloatValues {
    let win = winning_mec_union(mdp, obj);
    let (values, residual) = max_reach_float(&mdp.delta, &win, tol, 1_000_000);
    FloatValues { values, residual }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{dirac, Names};
    use crate::rational::rat;

    fn mdp(delta: Vec<Vec<Dist>>) -> Mdp {
        let n = delta.len();
        let enabled = delta.iter().map(|ds| (0..ds.len()).collect()).collect();
        Mdp {
            states: Names::new((0..n).map(|i| format!("s{i}"))),
            actions: Names::new(["a", "b"]),
            enabled,
            delta,
        }
    }

    #[test]
    fn priority_extremes() {
        let m = mdp(vec![
            vec![vec![(0, rat(1, 2)), (1, rat(1, 2))]],
            vec![dirac(0), dirac(1)],
        ]);
        let all_even = ParityObjective::new(vec![2, 2]);
        assert!(parity_value(&m, &all_even).values.iter().all(|v| *v == rat(1, 1)));
        let all_odd = ParityObjective::new(vec![1, 3]);
        assert!(parity_value(&m, &all_odd).values.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn controllable_cycle_through_even() {
        // 0 (pri 1) <-> 1 (pri 2): the 2 is seen infinitely often.
        let m = mdp(vec![vec![dirac(1)], vec![dirac(0), dirac(1)]]);
        let obj = ParityObjective::new(vec![1, 2]);
        assert_eq!(winning_mec_union(&m, &obj), vec![true, true]);
        let obj = ParityObjective::new(vec![3, 2]);
        // Staying at 1 forever avoids the 3.
        assert_eq!(winning_mec_union(&m, &obj), vec![false, true]);
        assert_eq!(parity_value(&m, &obj).values, vec![rat(1, 1), rat(1, 1)]);
    }

    #[test]
    fn singleton_mecs_by_parity() {
        let m = mdp(vec![
            vec![vec![(1, rat(1, 4)), (2, rat(3, 4))]],
            vec![dirac(1)],
            vec![dirac(2)],
        ]);
        let obj = ParityObjective::new(vec![0, 2, 1]);
        assert_eq!(winning_mec_union(&m, &obj), vec![false, true, false]);
        assert_eq!(parity_value(&m, &obj).values[0], rat(1, 4));
        let f = parity_value_float(&m, &obj, 1e-12);
        assert!((f.values[0] - 0.25).abs() < 1e-12);
    }
}
