//! Universal values: the worst case over environments equals the infimum of
//! prior values over all priors.

mod grid;
mod inf_f;

pub use grid::{belief_grid, BeliefGrid, GridIter};
pub use inf_f::{call_bound, inf_f_search, InfResult};

use num_traits::{One, Signed};
use rayon::prelude::*;
use std::collections::HashMap;

use crate::belief::Belief;
use crate::model::{Memdp, ParityObjective};
use crate::prior::{prior_value_at, PriorError};
use crate::rational::{rat, Rat};

#[derive(Debug, thiserror::Error)]
pub enum UniError {
    #[error("epsilon must lie in (0,1), got {0}")]
    BadEpsilon(String),
    #[error("bisection needs exactly 2 environments, model has {0}")]
    NotTwoEnvironments(usize),
    #[error(transparent)]
    Prior(#[from] PriorError),
}

#[derive(Debug, Clone, Default)]
pub struct UniOptions {
    /// Passed through to every prior-value call.
    pub depth_override: Option<u64>,
    /// Evaluate grid points on the rayon pool.
    pub parallel: bool,
}

#[derive(Debug, Clone)]
pub struct UniResult {
    pub value: Rat,
    /// Prior at which `value` was obtained.
    pub minimizer: Belief,
    /// Prior-value calls made.
    pub evaluations: u64,
    /// False if any prior-value call ran with a depth below the guaranteed one.
    pub guaranteed: bool,
    /// Recursive search calls (bisection only).
    pub search_calls: Option<u32>,
}

fn check_eps(eps: &Rat) -> Result<(), UniError> {
    if !eps.is_positive() || eps >= &Rat::one() {
        return Err(UniError::BadEpsilon(crate::rational::fmt_rat(eps)));
    }
    Ok(())
}

/// Minimum of prior values (with `gamma = eps/2`) over the belief grid.
pub fn uni_value_grid(
    m: &Memdp,
    obj: &ParityObjective,
    q: usize,
    eps: &Rat,
    opts: &UniOptions,
) -> Result<UniResult, UniError> {
    check_eps(eps)?;
    let gamma = eps / rat(2, 1);
    let grid = belief_grid(m.num_envs(), eps);
    let eval = |(i, b): (usize, Belief)| -> Result<(Rat, usize, Belief, bool), PriorError> {
        let (v, g, _) = prior_value_at(m, obj, &b, q, &gamma, opts.depth_override)?;
        Ok((v, i, b, g))
    };
    let pick = |a: (Rat, usize, Belief, bool), b: (Rat, usize, Belief, bool)| {
        let g = a.3 && b.3;
        let mut best = if (&b.0, b.1) < (&a.0, a.1) { b } else { a };
        best.3 = g;
        best
    };
    let best = if opts.parallel {
        grid.iter()
            .enumerate()
            .par_bridge()
            .map(eval)
            .try_reduce_with(|a, b| Ok(pick(a, b)))
            .expect("grid is never empty")?
    } else {
        let mut acc: Option<(Rat, usize, Belief, bool)> = None;
        for item in grid.iter().enumerate() {
            let r = eval(item)?;
            acc = Some(match acc {
                None => r,
                Some(a) => pick(a, r),
            });
        }
        acc.expect("grid is never empty")
    };
    Ok(UniResult {
        value: best.0,
        minimizer: best.2,
        evaluations: grid.len() as u64,
        guaranteed: best.3,
        search_calls: None,
    })
}

/// Trisection over `b_x = (x, 1-x)` for two-environment models.
pub fn uni_value_two_env(
    m: &Memdp,
    obj: &ParityObjective,
    q: usize,
    eps: &Rat,
    opts: &UniOptions,
) -> Result<UniResult, UniError> {
    check_eps(eps)?;
    if m.num_envs() != 2 {
        return Err(UniError::NotTwoEnvironments(m.num_envs()));
    }
    let mut cache: HashMap<(Rat, Rat), Rat> = HashMap::new();
    let mut guaranteed = true;
    let mut evaluations = 0u64;
    let r = inf_f_search(
        |x, tol| {
            if let Some(v) = cache.get(&(x.clone(), tol.clone())) {
                return Ok(v.clone());
            }
            let b = Belief::pair(x.clone());
            let (v, g, _) = prior_value_at(m, obj, &b, q, tol, opts.depth_override)?;
            evaluations += 1;
            guaranteed &= g;
            cache.insert((x.clone(), tol.clone()), v.clone());
            Ok::<_, PriorError>(v)
        },
        eps,
    )?;
    Ok(UniResult {
        value: r.value,
        minimizer: Belief::pair(r.argmin),
        evaluations,
        guaranteed,
        search_calls: Some(r.calls),
    })
}
