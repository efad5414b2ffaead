use num_traits::{One, Signed};
use serde::Serialize;

use super::solver::{prior_value_at, PriorError, PriorStats};
use crate::belief::Belief;
use crate::model::{Memdp, ParityObjective};
use crate::rational::{fmt_rat, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GapAnswer {
    Yes,
    No,
}

impl std::fmt::Display for GapAnswer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GapAnswer::Yes => "YES",
            GapAnswer::No => "NO",
        })
    }
}

#[derive(Debug, Clone)]
pub struct GapDecision {
    pub answer: GapAnswer,
    /// The approximate value the decision was based on.
    pub value: Rat,
    pub gamma: Rat,
    pub stats: PriorStats,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GapError {
    #[error("alpha must lie in (0,1), got {0}")]
    BadAlpha(String),
    #[error("epsilon must lie in (0,1), got {0}")]
    BadEpsilon(String),
    #[error(transparent)]
    Prior(#[from] PriorError),
}

/// Answers YES when the prior value at `q` is at least `alpha` and NO when it
/// is at most `alpha - eps`; either answer may come back in between.
pub fn gap_decide(
    m: &Memdp,
    obj: &ParityObjective,
    b: &Belief,
    q: usize,
    alpha: &Rat,
    eps: &Rat,
) -> Result<GapDecision, GapError> {
    if !alpha.is_positive() || alpha >= &Rat::one() {
        return Err(GapError::BadAlpha(fmt_rat(alpha)));
    }
    if !eps.is_positive() || eps >= &Rat::one() {
        return Err(GapError::BadEpsilon(fmt_rat(eps)));
    }
    let gamma = eps / Rat::from_integer(3.into());
    let (value, _, stats) = prior_value_at(m, obj, b, q, &gamma, None)?;
    let threshold = alpha - eps / Rat::from_integer(2.into());
    let answer = if value >= threshold {
        GapAnswer::Yes
    } else {
        GapAnswer::No
    };
    Ok(GapDecision {
        answer,
        value,
        gamma,
        stats,
    })
}
