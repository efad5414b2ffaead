//! Models: MDPs, multiple-environment MDPs, POMDPs and parity objectives.

mod io;
mod types;
mod validate;

pub use io::{
    memdp_to_json, model_to_json, parse_model, parse_weights, serialize_model,
    validate_document, Model, ModelError, ModelKind, ParsedModel,
};
pub use types::{
    dirac, dist_prob, normalize_dist, Dist, Mdp, Memdp, Names, ParityObjective, Pomdp, Run,
};
pub use validate::{validate, validate_mdp, Issue, ValidationReport};

/// A distinguishing state-action pair with every ordered pair of
/// environments that disagree on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinguishingPair {
    pub state: usize,
    pub action: usize,
    pub witnesses: Vec<(usize, usize)>,
}

pub fn distinguishing_pairs(m: &Memdp) -> Vec<DistinguishingPair> {
    let k = m.num_envs();
    let mut out = Vec::new();
    for q in 0..m.num_states() {
        for (slot, &a) in m.enabled[q].iter().enumerate() {
            let mut witnesses = Vec::new();
            for e in 0..k {
                for f in 0..k {
                    if e != f && m.delta[e][q][slot] != m.delta[f][q][slot] {
                        witnesses.push((e, f));
                    }
                }
            }
            if !witnesses.is_empty() {
                out.push(DistinguishingPair {
                    state: q,
                    action: a,
                    witnesses,
                });
            }
        }
    }
    out
}

/// Dense lookup `is_dstg[q][slot]`.
pub fn distinguishing_table(m: &Memdp) -> Vec<Vec<bool>> {
    (0..m.num_states())
        .map(|q| {
            (0..m.enabled[q].len())
                .map(|slot| m.slot_distinguishing(q, slot))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RestrictError {
    #[error("environment subset is empty")]
    Empty,
    #[error("environment index {0} is not declared")]
    Unknown(usize),
}

/// Keeps only the given environments, in declaration order.
pub fn restrict(m: &Memdp, envs: &[usize]) -> Result<Memdp, RestrictError> {
    if envs.is_empty() {
        return Err(RestrictError::Empty);
    }
    if let Some(&e) = envs.iter().find(|&&e| e >= m.num_envs()) {
        return Err(RestrictError::Unknown(e));
    }
    let mut keep: Vec<usize> = envs.to_vec();
    keep.sort_unstable();
    keep.dedup();
    Ok(Memdp {
        states: m.states.clone(),
        actions: m.actions.clone(),
        environments: Names::new(keep.iter().map(|&e| m.environments.name(e).to_string())),
        enabled: m.enabled.clone(),
        delta: keep.iter().map(|&e| m.delta[e].clone()).collect(),
    })
}
