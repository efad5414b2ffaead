//! Solvers for multiple-environment MDPs (MEMDPs) with parity objectives.
//!
//! An MEMDP shares states and actions across a finite set of environments,
//! each with its own transition function. The environment is fixed before a
//! run starts and never revealed. This crate computes
//!
//! * exact optimal values of ordinary MDPs with parity objectives ([`parity`]),
//! * approximations of the value under a prior over environments ([`prior`]),
//! * worst-case (universal) values by minimizing over priors ([`universal`]),
//! * the reduction between Dirac-preserving POMDPs and MEMDPs ([`pomdp`]),
//!
//! plus a simulation layer with independent brute-force oracles ([`sim`]).
//! All probabilities are exact rationals.

pub mod belief;
pub mod catalog;
pub mod interval;
pub mod model;
pub mod parity;
pub mod pomdp;
pub mod prior;
pub mod rational;
pub mod sim;
pub mod universal;

pub use belief::Belief;
pub use model::{Mdp, Memdp, ParityObjective, Pomdp};
pub use rational::Rat;
