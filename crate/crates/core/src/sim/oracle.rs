//! Brute force over pure memoryless strategies. Shares no code with the
//! parity solver: the induced chains are classified by transitive closure
//! and solved by a separate elimination routine.

use num_traits::{One, Zero};

use super::SimError;
use crate::model::{Mdp, ParityObjective};
use crate::parity::ValueTable;
use crate::rational::Rat;

pub const MAX_STRATEGIES: u128 = 1_000_000;

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub table: ValueTable,
    pub strategies: u64,
}

/// Parity probabilities of the chain induced by picking `slots[q]` at `q`.
pub fn markov_chain_parity(mdp: &Mdp, obj: &ParityObjective, slots: &[usize]) -> Vec<Rat> {
    let n = mdp.num_states();
    let mut reach = vec![vec![false; n]; n];
    for q in 0..n {
        for (t, _) in &mdp.delta[q][slots[q]] {
            reach[q][*t] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let in_bscc: Vec<bool> = (0..n)
        .map(|q| (0..n).all(|j| !reach[q][j] || reach[j][q]))
        .collect();
    let good: Vec<bool> = (0..n)
        .map(|q| {
            in_bscc[q]
                && (0..n)
                    .filter(|&j| reach[q][j])
                    .map(|j| obj.priority[j])
                    .max()
                    .is_some_and(|p| p % 2 == 0)
        })
        .collect();
    let live: Vec<usize> = (0..n)
        .filter(|&q| !in_bscc[q] && (0..n).any(|j| good[j] && reach[q][j]))
        .collect();
    let mut x: Vec<Rat> = good
        .iter()
        .map(|&g| if g { Rat::one() } else { Rat::zero() })
        .collect();
    if live.is_empty() {
        return x;
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &q) in live.iter().enumerate() {
        pos[q] = i;
    }
    let m = live.len();
    let mut a = vec![vec![Rat::zero(); m + 1]; m];
    for (i, &q) in live.iter().enumerate() {
        a[i][i] = Rat::one();
        for (t, p) in &mdp.delta[q][slots[q]] {
            if pos[*t] != usize::MAX {
                a[i][pos[*t]] -= p;
            } else if good[*t] {
                a[i][m] += p;
            }
        }
    }
    for (i, v) in gauss(a).into_iter().enumerate() {
        x[live[i]] = v;
    }
    x
}

/// Gauss-Jordan on an augmented matrix known to be nonsingular.
fn gauss(mut a: Vec<Vec<Rat>>) -> Vec<Rat> {
    let m = a.len();
    for c in 0..m {
        let p = (c..m).find(|&r| !a[r][c].is_zero()).expect("nonsingular chain system");
        a.swap(c, p);
        let inv = a[c][c].recip();
        for v in a[c].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in c..=m {
                    let d = &f * &a[c][k];
                    a[r][k] -= d;
                }
            }
        }
    }
    a.into_iter().map(|row| row[m].clone()).collect()
}

/// Optimal values as the pointwise maximum over every pure memoryless
/// strategy.
pub fn exact_memoryless_parity_oracle(
    mdp: &Mdp,
    obj: &ParityObjective,
) -> Result<OracleResult, SimError> {
    let n = mdp.num_states();
    let radix: Vec<usize> = mdp.enabled.iter().map(Vec::len).collect();
    let mut count: u128 = 1;
    for &r in &radix {
        count = count.saturating_mul(r as u128);
        if count > MAX_STRATEGIES {
            return Err(SimError::TooLarge(count));
        }
    }
    let mut best = vec![Rat::zero(); n];
    let mut slots = vec![0usize; n];
    let mut enumerated = 0u64;
    loop {
        let v = markov_chain_parity(mdp, obj, &slots);
        for (b, x) in best.iter_mut().zip(v) {
            if x > *b {
                *b = x;
            }
        }
        enumerated += 1;
        let mut i = 0;
        while i < n {
            slots[i] += 1;
            if slots[i] < radix[i] {
                break;
            }
            slots[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    Ok(OracleResult {
        table: ValueTable::exact(best),
        strategies: enumerated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{dirac, Names};
    use crate::rational::rat;

    fn mdp(delta: Vec<Vec<crate::model::Dist>>) -> Mdp {
        Mdp {
            states: Names::new((0..delta.len()).map(|i| format!("s{i}"))),
            actions: Names::new(["a", "b"]),
            enabled: delta.iter().map(|r| (0..r.len()).collect()).collect(),
            delta,
        }
    }

    #[test]
    fn even_self_loop() {
        let m = mdp(vec![vec![dirac(0)]]);
        let r = exact_memoryless_parity_oracle(&m, &ParityObjective::new(vec![2])).unwrap();
        assert_eq!(r.table.values, vec![rat(1, 1)]);
    }

    #[test]
    fn coin_to_sinks() {
        let m = mdp(vec![
            vec![vec![(1, rat(1, 2)), (2, rat(1, 2))]],
            vec![dirac(1)],
            vec![dirac(2)],
        ]);
        let r = exact_memoryless_parity_oracle(&m, &ParityObjective::new(vec![1, 0, 1])).unwrap();
        assert_eq!(r.table.values[0], rat(1, 2));
    }

    #[test]
    fn choice_between_coins() {
        let m = mdp(vec![
            vec![
                vec![(1, rat(1, 3)), (2, rat(2, 3))],
                vec![(0, rat(1, 2)), (1, rat(1, 4)), (2, rat(1, 4))],
            ],
            vec![dirac(1)],
            vec![dirac(2)],
        ]);
        let r = exact_memoryless_parity_oracle(&m, &ParityObjective::new(vec![1, 2, 1])).unwrap();
        // Looping via b gives 1/4 / (1 - 1/2) = 1/2 > 1/3.
        assert_eq!(r.table.values[0], rat(1, 2));
        assert_eq!(r.strategies, 2);
    }

    #[test]
    fn guard_trips() {
        let row: Vec<crate::model::Dist> = (0..10).map(dirac).collect();
        let mut m = mdp(vec![row; 10]);
        m.actions = Names::new((0..10).map(|i| format!("a{i}")));
        assert!(matches!(
            exact_memoryless_parity_oracle(&m, &ParityObjective::new(vec![0; 10])),
            Err(SimError::TooLarge(_))
        ));
    }
}
