//! Values under a prior distribution over environments.

mod augmented;
mod constants;
mod gap;
mod solver;

pub use augmented::{mdp_from_memdp, win_weight, AugmentError, AugmentedMdp, Continuations};
pub use constants::{compute_constants, ratios, ConstantsError, GammaConstants, Ratios, Real};
pub use gap::{gap_decide, GapAnswer, GapDecision, GapError};
pub use solver::{prior_value, prior_value_at, PriorError, PriorResult, PriorStats, MAX_RECURSION};
