use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::belief::Belief;
use crate::rational::{ceil_log2, Rat};

/// Beliefs whose weights are multiples of `1/(k * 2^(N+1))`, with
/// `N = ceil(log2(1/eps))`. Every belief lies within distance `eps/2` of
/// some grid point.
#[derive(Debug, Clone)]
pub struct BeliefGrid {
    pub resolution: u32,
    pub k: usize,
    /// Common denominator `k * 2^(N+1)`.
    pub denom: u64,
}

pub fn belief_grid(k: usize, eps: &Rat) -> BeliefGrid {
    assert!(k >= 1, "grid needs at least one environment");
    assert!(
        eps.is_positive() && eps < &Rat::one(),
        "epsilon must lie in (0,1)"
    );
    let n = ceil_log2(&eps.recip()).max(0) as u32;
    assert!(n < 40, "grid resolution too fine");
    BeliefGrid {
        resolution: n,
        k,
        denom: (k as u64) << (n + 1),
    }
}

impl BeliefGrid {
    /// Number of grid points, `C(D + k - 1, k - 1)`.
    pub fn len(&self) -> u128 {
        let (d, k) = (self.denom as u128, self.k as u128);
        let mut c: u128 = 1;
        for i in 1..k {
            c = c * (d + i) / i;
        }
        c
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> GridIter {
        GridIter {
            k: self.k,
            denom: self.denom,
            cur: Some(vec![0; self.k.saturating_sub(1)]),
        }
    }
}

/// Streams grid points in lexicographic order of their first `k-1` weights.
pub struct GridIter {
    k: usize,
    denom: u64,
    cur: Option<Vec<u64>>,
}

impl Iterator for GridIter {
    type Item = Belief;

    fn next(&mut self) -> Option<Belief> {
        let cur = self.cur.as_mut()?;
        let d = BigInt::from(self.denom);
        let used: u64 = cur.iter().sum();
        let mut w: Vec<Rat> = cur
            .iter()
            .map(|&c| Rat::new(BigInt::from(c), d.clone()))
            .collect();
        w.push(Rat::new(BigInt::from(self.denom - used), d));
        let b = Belief::new(w).expect("grid weights sum to one");

        // Odometer step: bump the rightmost counter that still fits.
        let mut prefix = 0u64;
        let mut bump = None;
        for (j, &c) in cur.iter().enumerate() {
            prefix += c;
            if prefix < self.denom {
                bump = Some(j);
            }
        }
        match bump {
            Some(j) => {
                cur[j] += 1;
                for c in cur[j + 1..].iter_mut() {
                    *c = 0;
                }
            }
            None => self.cur = None,
        }
        if self.k == 1 {
            self.cur = None;
        }
        Some(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belief::diff;
    use crate::rational::rat;

    #[test]
    fn two_envs_at_one_half() {
        let g = belief_grid(2, &rat(1, 2));
        assert_eq!(g.resolution, 1);
        assert_eq!(g.denom, 8);
        let pts: Vec<Belief> = g.iter().collect();
        assert_eq!(pts.len(), 9);
        assert_eq!(g.len(), 9);
        assert_eq!(pts[0].weights(), &[rat(0, 1), rat(1, 1)]);
        assert_eq!(pts[8].weights(), &[rat(1, 1), rat(0, 1)]);
    }

    #[test]
    fn single_env_is_dirac() {
        let pts: Vec<Belief> = belief_grid(1, &rat(1, 8)).iter().collect();
        assert_eq!(pts, vec![Belief::dirac(1, 0)]);
    }

    #[test]
    fn three_env_count_matches_formula() {
        let g = belief_grid(3, &rat(1, 2));
        assert_eq!(g.iter().count() as u128, g.len());
        // Every enumerated point is distinct.
        let mut v: Vec<Belief> = g.iter().collect();
        v.sort();
        v.dedup();
        assert_eq!(v.len() as u128, g.len());
    }

    #[test]
    fn covers_within_half_eps() {
        let eps = rat(1, 4);
        let g = belief_grid(3, &eps);
        let pts: Vec<Belief> = g.iter().collect();
        let b = Belief::new(vec![rat(1, 7), rat(2, 7), rat(4, 7)]).unwrap();
        let best = pts.iter().map(|p| diff(p, &b)).min().unwrap();
        assert!(best <= eps / rat(2, 1));
    }
}
