//! Approximate prior values by recursion on environment beliefs.
//!
//! At a belief `b`, every distinguishing pair is replaced by a lottery whose
//! winning probability is the mixture of the values of its successors under
//! the updated beliefs. Those values come from recursive calls; the
//! recursion stops when the support is a single environment, and a belief
//! is truncated when one of its weights gets small or when the budget `n`
//! of distinguishing steps runs out.

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::{HashMap, VecDeque};
use std::rc::Rc;

use super::augmented::lottery;
use super::constants::{compute_constants, ConstantsError};
use crate::belief::{mix, truncate, update_slot, Belief};
use crate::model::{Dist, Memdp, ParityObjective};
use crate::parity::{parity_values_raw, ValueTable};
use crate::rational::{ceil_log2, floor_dyadic, fmt_rat, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PriorError {
    #[error("gamma must lie in (0,1), got {0}")]
    BadGamma(String),
    #[error("belief has {got} weights but the model has {want} environments")]
    BeliefArity { got: usize, want: usize },
    #[error("state index {0} out of range")]
    BadState(usize),
    #[error(transparent)]
    Constants(#[from] ConstantsError),
    #[error("recursion deeper than {0} calls; lower the depth budget")]
    DepthLimit(u64),
}

/// Nesting limit for recursive calls. Each level keeps a few kilobytes of
/// state alive, so deeper runs are refused rather than exhausting memory.
pub const MAX_RECURSION: u64 = 250_000;

#[derive(Debug, Clone, Default, Serialize)]
pub struct PriorStats {
    /// Budget of distinguishing steps used on every reset.
    pub reset_depth: u64,
    /// The budget the accuracy guarantee requires.
    pub required_depth: u64,
    /// Bits of the grid continuation values are rounded down to.
    pub grid_bits: u32,
    pub calls: u64,
    pub memo_hits: u64,
    pub mdp_solves: u64,
    pub truncations: u64,
    /// Truncations caused by an exhausted budget rather than a small weight.
    pub forced_truncations: u64,
    pub max_depth: u64,
    pub degenerate_updates: u64,
}

#[derive(Debug, Clone)]
pub struct PriorResult {
    pub table: ValueTable,
    /// False when a depth override replaced the required budget.
    pub guaranteed: bool,
    pub stats: PriorStats,
}

type Table = Rc<HashMap<usize, Rat>>;

struct Solver<'a> {
    m: &'a Memdp,
    pri: &'a [u32],
    eps_a: Rat,
    reset: u64,
    bits: u32,
    slices: Vec<Option<Table>>,
    memo: HashMap<(Belief, u64, Vec<usize>), Table>,
    stats: PriorStats,
}

impl<'a> Solver<'a> {
    fn slice(&mut self, e: usize) -> Table {
        if let Some(t) = &self.slices[e] {
            return t.clone();
        }
        self.stats.mdp_solves += 1;
        let v = parity_values_raw(&self.m.delta[e], self.pri);
        let t: Table = Rc::new(v.into_iter().enumerate().collect());
        self.slices[e] = Some(t.clone());
        t
    }

    fn solve(&mut self, b: &Belief, n: u64, roots: &[usize], depth: u64) -> Result<Table, PriorError> {
        if depth > MAX_RECURSION {
            return Err(PriorError::DepthLimit(MAX_RECURSION));
        }
        stacker::maybe_grow(256 * 1024, 8 * 1024 * 1024, || {
            self.solve_inner(b, n, roots, depth)
        })
    }

    fn solve_inner(
        &mut self,
        b: &Belief,
        n: u64,
        roots: &[usize],
        depth: u64,
    ) -> Result<Table, PriorError> {
        self.stats.calls += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let supp = b.support();
        if supp.len() == 1 {
            return Ok(self.slice(supp[0]));
        }
        let (_, min_w) = b.min_positive();
        if n == 0 || min_w <= &self.eps_a {
            self.stats.truncations += 1;
            if min_w > &self.eps_a {
                self.stats.forced_truncations += 1;
            }
            let t = truncate(b).expect("support has at least two elements");
            return self.solve(&t, self.reset, roots, depth + 1);
        }

        let m = self.m;
        let e0 = supp[0];
        let dstg = |q: usize, slot: usize| {
            let first = &m.delta[e0][q][slot];
            supp[1..].iter().any(|&e| &m.delta[e][q][slot] != first)
        };

        // States reachable from the roots without crossing a distinguishing pair.
        let mut local = HashMap::new();
        let mut order = Vec::new();
        let mut queue: VecDeque<usize> = VecDeque::new();
        let mut sorted_roots = roots.to_vec();
        sorted_roots.sort_unstable();
        sorted_roots.dedup();
        for &r in &sorted_roots {
            local.insert(r, order.len());
            order.push(r);
            queue.push_back(r);
        }
        while let Some(q) = queue.pop_front() {
            for slot in 0..m.enabled[q].len() {
                if dstg(q, slot) {
                    continue;
                }
                for (t, _) in &m.delta[e0][q][slot] {
                    if !local.contains_key(t) {
                        local.insert(*t, order.len());
                        order.push(*t);
                        queue.push_back(*t);
                    }
                }
            }
        }
        let mut closure = order.clone();
        closure.sort_unstable();
        let key = (b.clone(), n, closure);
        if let Some(t) = self.memo.get(&key) {
            self.stats.memo_hits += 1;
            return Ok(t.clone());
        }

        let k = order.len();
        let (win, lose) = (k, k + 1);
        let mut choices: Vec<Vec<Dist>> = Vec::with_capacity(k + 2);
        for &q in &order {
            let mut row = Vec::with_capacity(m.enabled[q].len());
            for slot in 0..m.enabled[q].len() {
                if !dstg(q, slot) {
                    row.push(
                        m.delta[e0][q][slot]
                            .iter()
                            .map(|(t, p)| (local[t], p.clone()))
                            .collect(),
                    );
                    continue;
                }
                let p = mix(b, m, q, slot);
                let mut w = Rat::zero();
                for (t, x) in &p {
                    let u = update_slot(b, m, q, slot, *t);
                    if u.degenerate {
                        self.stats.degenerate_updates += 1;
                    }
                    let child = u.belief;
                    let n_child = if child.support_size() < supp.len() {
                        self.reset
                    } else {
                        n - 1
                    };
                    let vals = self.solve(&child, n_child, &[*t], depth + 1)?;
                    let v = floor_dyadic(&vals[t], self.bits);
                    w += x * v;
                }
                row.push(lottery(w, win, lose));
            }
            choices.push(row);
        }
        choices.push(vec![vec![(win, Rat::one())]]);
        choices.push(vec![vec![(lose, Rat::one())]]);
        let mut pri: Vec<u32> = order.iter().map(|&q| self.pri[q]).collect();
        pri.push(0);
        pri.push(1);
        self.stats.mdp_solves += 1;
        let vals = parity_values_raw(&choices, &pri);
        let table: Table = Rc::new(order.iter().copied().zip(vals).collect());
        self.memo.insert(key, table.clone());
        Ok(table)
    }
}

fn check_inputs(m: &Memdp, b: &Belief, gamma: &Rat) -> Result<(), PriorError> {
    if !gamma.is_positive() || gamma >= &Rat::one() {
        return Err(PriorError::BadGamma(fmt_rat(gamma)));
    }
    if b.len() != m.num_envs() {
        return Err(PriorError::BeliefArity {
            got: b.len(),
            want: m.num_envs(),
        });
    }
    Ok(())
}

fn run(
    m: &Memdp,
    obj: &ParityObjective,
    b: &Belief,
    gamma: &Rat,
    depth_override: Option<u64>,
    roots: &[usize],
) -> Result<(Vec<(usize, Rat)>, bool, PriorStats), PriorError> {
    check_inputs(m, b, gamma)?;
    if let Some(&q) = roots.iter().find(|&&q| q >= m.num_states()) {
        return Err(PriorError::BadState(q));
    }
    let k = Rat::from_integer((m.num_envs() as i64).into());
    let eps_a = gamma / (Rat::from_integer(3.into()) * k);
    let (required, reset) = if b.support_size() == 1 {
        (0, depth_override.unwrap_or(0))
    } else {
        // With only Dirac rows the constants give m = 0, which would truncate
        // before the first distinguishing step; one step always shrinks the
        // support there, so a budget of one is exact.
        let c = compute_constants(m, &eps_a)?;
        let need = c.m.max(1);
        (need, depth_override.unwrap_or(need))
    };
    let grid = Rat::from_integer(reset.max(1).into()) / &eps_a;
    let bits = ceil_log2(&grid).max(0) as u32;
    let mut s = Solver {
        m,
        pri: &obj.priority,
        eps_a,
        reset,
        bits,
        slices: vec![None; m.num_envs()],
        memo: HashMap::new(),
        stats: PriorStats {
            reset_depth: reset,
            required_depth: required,
            grid_bits: bits,
            ..Default::default()
        },
    };
    let t = s.solve(b, reset, roots, 0)?;
    let vals = roots.iter().map(|&q| (q, t[&q].clone())).collect();
    let guaranteed = depth_override.is_none_or(|d| d >= required);
    Ok((vals, guaranteed, s.stats))
}

/// Values of all states under prior `b`, each within `gamma` of the prior
/// value unless a depth override is given.
pub fn prior_value(
    m: &Memdp,
    obj: &ParityObjective,
    b: &Belief,
    gamma: &Rat,
    depth_override: Option<u64>,
) -> Result<PriorResult, PriorError> {
    let roots: Vec<usize> = (0..m.num_states()).collect();
    let (vals, guaranteed, stats) = run(m, obj, b, gamma, depth_override, &roots)?;
    let accuracy = if b.support_size() == 1 {
        Rat::zero()
    } else {
        gamma.clone()
    };
    Ok(PriorResult {
        table: ValueTable {
            values: vals.into_iter().map(|(_, v)| v).collect(),
            accuracy,
        },
        guaranteed,
        stats,
    })
}

/// Value of a single state; explores only what that state can reach.
pub fn prior_value_at(
    m: &Memdp,
    obj: &ParityObjective,
    b: &Belief,
    q: usize,
    gamma: &Rat,
    depth_override: Option<u64>,
) -> Result<(Rat, bool, PriorStats), PriorError> {
    let (vals, guaranteed, stats) = run(m, obj, b, gamma, depth_override, &[q])?;
    Ok((vals[0].1.clone(), guaranteed, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{card_game, CardGame, D, W};
    use crate::parity::parity_value;
    use crate::rational::{rat, to_f64};

    #[test]
    fn card_game_uniform_is_two_thirds() {
        let (m, obj) = card_game(&CardGame::symmetric(rat(1, 1)));
        let g = rat(1, 100);
        let r = prior_value(&m, &obj, &Belief::uniform(2), &g, None).unwrap();
        let v = &r.table.values[D];
        assert!((v - rat(2, 3)).abs() <= g, "got {}", to_f64(v));
        assert!(r.guaranteed);
        assert_eq!(r.table.values[W], rat(1, 1));
        assert!(r.stats.max_depth <= 2 * (r.stats.reset_depth + 1));
    }

    #[test]
    fn dirac_reproduces_slice() {
        let (m, obj) = card_game(&CardGame::symmetric(rat(1, 3)));
        for e in 0..2 {
            let r = prior_value(&m, &obj, &Belief::dirac(2, e), &rat(1, 8), None).unwrap();
            assert_eq!(r.table.values, parity_value(&m.slice(e), &obj).values);
            assert!(r.table.accuracy.is_zero());
        }
    }

    #[test]
    fn single_state_query_matches_full_table() {
        let (m, obj) = card_game(&CardGame::asymmetric(rat(1, 1)));
        let b = Belief::new(vec![rat(5, 9), rat(4, 9)]).unwrap();
        let full = prior_value(&m, &obj, &b, &rat(1, 20), None).unwrap();
        let (v, _, _) = prior_value_at(&m, &obj, &b, D, &rat(1, 20), None).unwrap();
        assert_eq!(v, full.table.values[D]);
    }

    #[test]
    fn override_forfeits_guarantee() {
        let (m, obj) = card_game(&CardGame::symmetric(rat(1, 2)));
        let r = prior_value(&m, &obj, &Belief::uniform(2), &rat(1, 8), Some(3)).unwrap();
        assert!(!r.guaranteed);
        assert!(r.stats.forced_truncations > 0);
    }

    #[test]
    fn deterministic_split_is_not_truncated() {
        use crate::model::{dirac, Names};
        // s0 moves to the even sink in E1 and to the odd sink in E2.
        let row = |t| vec![vec![dirac(t)], vec![dirac(1)], vec![dirac(2)]];
        let m = Memdp {
            states: Names::new(["s0", "s1", "s2"]),
            actions: Names::new(["a"]),
            environments: Names::new(["E1", "E2"]),
            enabled: vec![vec![0]; 3],
            delta: vec![row(1), row(2)],
        };
        let obj = ParityObjective::new(vec![1, 0, 1]);
        let b = Belief::new(vec![rat(5, 11), rat(6, 11)]).unwrap();
        let (v, ..) = prior_value_at(&m, &obj, &b, 0, &rat(1, 16), None).unwrap();
        assert_eq!(v, rat(5, 11));
    }

    #[test]
    fn rejects_bad_gamma() {
        let (m, obj) = card_game(&CardGame::symmetric(rat(1, 1)));
        assert!(prior_value(&m, &obj, &Belief::uniform(2), &rat(0, 1), None).is_err());
        assert!(prior_value(&m, &obj, &Belief::uniform(3), &rat(1, 2), None).is_err());
    }
}
