use num_traits::{One, Pow, Signed, Zero};

use crate::belief::{is_revealing, update, Belief};
use crate::interval::Interval;
use crate::model::{dist_prob, Memdp, Run};
use crate::rational::{log2_interval, Rat};

/// Belief statistics along one run. Pair-indexed tables are `[e'][e]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStats {
    /// Visits to distinguishing state-action pairs.
    pub nb_dstg: u64,
    /// Visits to `e'/e`-revealing pairs.
    pub nb_rev: Vec<Vec<u64>>,
    /// Smallest weight of each environment over all prefixes.
    pub min_belief: Vec<Rat>,
    pub final_belief: Belief,
    /// Product of `delta_e'/delta_e` at the observed successor over the
    /// distinguishing, not `e'/e`-revealing steps. `None` once a step had
    /// probability zero under `e`.
    pub ratio_product: Vec<Vec<Option<Rat>>>,
    pub degenerate_updates: u64,
}

impl TraceStats {
    /// `log2` of `ratio_product`, i.e. the sum of the per-step log-ratios.
    pub fn log_ratio_sum(&self, e2: usize, e: usize) -> Option<Interval> {
        self.ratio_product[e2][e].as_ref().map(log2_interval)
    }

    /// Every prefix keeps every environment's weight above `eps`.
    pub fn never_small(&self, eps: &Rat) -> bool {
        self.min_belief.iter().all(|w| w > eps)
    }

    /// Checks `(b(e')/b(e)) * product * ratio_max^nb_rev >= lk(e')/lk(e)`
    /// exactly. `None` when a side is undefined.
    pub fn ratio_bound_holds(&self, b: &Belief, e2: usize, e: usize, ratio_max: &Rat) -> Option<bool> {
        if self.degenerate_updates > 0 || b.get(e).is_zero() || self.final_belief.get(e).is_zero() {
            return None;
        }
        let prod = self.ratio_product[e2][e].as_ref()?;
        let lhs = b.get(e2) / b.get(e) * prod * Pow::pow(ratio_max, self.nb_rev[e2][e]);
        let rhs = self.final_belief.get(e2) / self.final_belief.get(e);
        Some(lhs >= rhs)
    }
}

pub fn belief_trace_stats(run: &Run, b: &Belief, m: &Memdp) -> TraceStats {
    let k = m.num_envs();
    let mut nb_dstg = 0;
    let mut nb_rev = vec![vec![0u64; k]; k];
    let mut ratio: Vec<Vec<Option<Rat>>> = vec![vec![Some(Rat::one()); k]; k];
    let mut min_belief = b.weights().to_vec();
    let mut cur = b.clone();
    let mut degenerate = 0;
    for (q, a, t) in run.transitions() {
        let slot = m.slot(q, a).expect("run follows enabled actions");
        if !m.slot_distinguishing(q, slot) {
            continue;
        }
        nb_dstg += 1;
        for e2 in 0..k {
            for e in 0..k {
                if e2 == e {
                    continue;
                }
                if is_revealing(m, q, slot, e2, e) {
                    nb_rev[e2][e] += 1;
                    continue;
                }
                let (p2, p) = (
                    dist_prob(&m.delta[e2][q][slot], t),
                    dist_prob(&m.delta[e][q][slot], t),
                );
                let cell = &mut ratio[e2][e];
                if p.is_zero() {
                    *cell = None;
                } else if let Some(r) = cell.as_mut() {
                    *r *= p2 / p;
                }
            }
        }
        let u = update(&cur, q, a, t, m);
        degenerate += u.degenerate as u64;
        cur = u.belief;
        for (lo, w) in min_belief.iter_mut().zip(cur.weights()) {
            if w < lo {
                *lo = w.clone();
            }
        }
    }
    debug_assert!(min_belief.iter().all(|w| !w.is_negative()));
    TraceStats {
        nb_dstg,
        nb_rev,
        min_belief,
        final_belief: cur,
        ratio_product: ratio,
        degenerate_updates: degenerate,
    }
}
