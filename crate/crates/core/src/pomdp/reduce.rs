use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{dirac_violation, observation_conflict, PomdpError, StateBelief};
use crate::belief::Belief;
use crate::model::{dirac, normalize_dist, Dist, Memdp, Names, ParityObjective, Pomdp};
use crate::rational::Rat;

/// The product POMDP `Q x E` observed through the MEMDP state.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub pomdp: Pomdp,
    /// `index[q][e]` is the product state `(q, e)`.
    pub index: Vec<Vec<usize>>,
}

impl Embedding {
    /// Priorities of `(q, e)` copied from `q`.
    pub fn lift_objective(&self, obj: &ParityObjective) -> ParityObjective {
        ParityObjective::new(self.pomdp.obs.iter().map(|&q| obj.priority[q]).collect())
    }

    /// The state belief putting `env[e]` on `(q, e)`.
    pub fn belief_at(&self, q: usize, env: &Belief) -> StateBelief {
        let n = self.pomdp.num_states();
        let mut w = vec![Rat::default(); n];
        for (e, x) in env.weights().iter().enumerate() {
            w[self.index[q][e]] = x.clone();
        }
        Belief::new(w).expect("environment belief is normalized")
    }
}

pub fn memdp_to_pomdp(m: &Memdp) -> Embedding {
    let k = m.num_envs();
    let n = m.num_states();
    let mut states = Names::default();
    let mut index = vec![vec![0; k]; n];
    for q in 0..n {
        for e in 0..k {
            index[q][e] = states.push(format!(
                "{}@{}",
                m.states.name(q),
                m.environments.name(e)
            ));
        }
    }
    let mut enabled = Vec::with_capacity(n * k);
    let mut delta = Vec::with_capacity(n * k);
    let mut obs = Vec::with_capacity(n * k);
    for q in 0..n {
        for e in 0..k {
            enabled.push(m.enabled[q].clone());
            delta.push(
                m.delta[e][q]
                    .iter()
                    .map(|d| d.iter().map(|(t, x)| (index[*t][e], x.clone())).collect())
                    .collect(),
            );
            obs.push(q);
        }
    }
    Embedding {
        pomdp: Pomdp {
            states,
            actions: m.actions.clone(),
            enabled,
            delta,
            observations: m.states.clone(),
            obs,
        },
        index,
    }
}

/// A tuple of POMDP states indexed by the support, `None` standing for a
/// branch that has become incompatible with the observations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TupleState(pub Vec<Option<usize>>);

impl TupleState {
    pub fn is_bottom(&self) -> bool {
        self.0.iter().all(Option::is_none)
    }

    fn first(&self) -> Option<usize> {
        self.0.iter().flatten().next().copied()
    }

    fn name(&self, p: &Pomdp) -> String {
        let parts: Vec<&str> = self
            .0
            .iter()
            .map(|t| t.map_or("⊥", |q| p.states.name(q)))
            .collect();
        format!("({})", parts.join(","))
    }
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub memdp: Memdp,
    /// The starting belief restricted to its support, one environment per
    /// support state.
    pub belief: Belief,
    pub objective: ParityObjective,
    pub initial: usize,
    pub tuples: Vec<TupleState>,
}

const MAX_TUPLES: usize = 1_000_000;

/// Builds the MEMDP whose environments are the support states of `b`,
/// exploring only tuple states reachable from the initial tuple.
pub fn memdp_from_pomdp(
    p: &Pomdp,
    b: &StateBelief,
    obj: &ParityObjective,
) -> Result<Reduction, PomdpError> {
    let n = p.num_states();
    if b.len() != n {
        return Err(PomdpError::BeliefArity {
            got: b.len(),
            want: n,
        });
    }
    if let Some(v) = dirac_violation(p) {
        return Err(v.into_error(p));
    }
    if let Some((q1, q2)) = observation_conflict(p, obj) {
        return Err(PomdpError::ObjectiveNotCompatible(
            p.states.name(q1).into(),
            p.states.name(q2).into(),
        ));
    }
    let support = b.support();
    if let Some(&s) = support.iter().find(|&&s| p.obs[s] != p.obs[support[0]]) {
        return Err(PomdpError::SupportNotCompatible(
            p.observations.name(p.obs[support[0]]).into(),
            p.observations.name(p.obs[s]).into(),
        ));
    }

    // Successor by observation: (q, slot) -> o -> (q', p).
    let succ: Vec<Vec<BTreeMap<usize, (usize, Rat)>>> = (0..n)
        .map(|q| {
            p.delta[q]
                .iter()
                .map(|d| d.iter().map(|(t, x)| (p.obs[*t], (*t, x.clone()))).collect())
                .collect()
        })
        .collect();

    let k = support.len();
    let all_actions: Vec<usize> = (0..p.actions.len()).collect();
    let mut tuples: Vec<TupleState> = Vec::new();
    let mut ids: HashMap<TupleState, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |t: TupleState,
                      tuples: &mut Vec<TupleState>,
                      queue: &mut VecDeque<usize>|
     -> Result<usize, PomdpError> {
        if let Some(&i) = ids.get(&t) {
            return Ok(i);
        }
        if tuples.len() >= MAX_TUPLES {
            return Err(PomdpError::TooLarge(MAX_TUPLES));
        }
        let i = tuples.len();
        ids.insert(t.clone(), i);
        tuples.push(t);
        queue.push_back(i);
        Ok(i)
    };
    let init = TupleState(support.iter().map(|&s| Some(s)).collect());
    intern(init, &mut tuples, &mut queue)?;

    let mut enabled: Vec<Vec<usize>> = Vec::new();
    // rows[i][slot][s]
    let mut rows: Vec<Vec<Vec<Dist>>> = Vec::new();
    while let Some(i) = queue.pop_front() {
        let t = tuples[i].clone();
        let Some(lead) = t.first() else {
            enabled.push(all_actions.clone());
            rows.push(vec![vec![dirac(i); k]; all_actions.len()]);
            continue;
        };
        let o_t = p.obs[lead];
        for q in t.0.iter().flatten() {
            assert_eq!(p.obs[*q], o_t, "tuple entries must share an observation");
            if p.enabled[*q] != p.enabled[lead] {
                return Err(PomdpError::ActionSetMismatch(
                    p.states.name(lead).into(),
                    p.states.name(*q).into(),
                ));
            }
        }
        let acts = p.enabled[lead].clone();
        let mut row = Vec::with_capacity(acts.len());
        for slot in 0..acts.len() {
            // Every observation any branch can produce, mapped to its tuple.
            let mut target: BTreeMap<usize, usize> = BTreeMap::new();
            for q in t.0.iter().flatten() {
                for &o in succ[*q][slot].keys() {
                    if target.contains_key(&o) {
                        continue;
                    }
                    let next = TupleState(
                        t.0.iter()
                            .map(|e| e.and_then(|q| succ[q][slot].get(&o).map(|(u, _)| *u)))
                            .collect(),
                    );
                    target.insert(o, intern(next, &mut tuples, &mut queue)?);
                }
            }
            let mut per_env = Vec::with_capacity(k);
            for e in &t.0 {
                let d = match e {
                    None => {
                        let bot = intern(TupleState(vec![None; k]), &mut tuples, &mut queue)?;
                        dirac(bot)
                    }
                    Some(q) => normalize_dist(
                        succ[*q][slot]
                            .iter()
                            .map(|(o, (_, x))| (target[o], x.clone()))
                            .collect(),
                    ),
                };
                per_env.push(d);
            }
            row.push(per_env);
        }
        enabled.push(acts);
        rows.push(row);
    }

    let size = tuples.len();
    debug_assert!((size as f64) <= ((n + 1) as f64).powi(k as i32));
    let mut states = Names::default();
    for t in &tuples {
        states.push(t.name(p));
    }
    let delta: Vec<Vec<Vec<Dist>>> = (0..k)
        .map(|e| {
            rows.iter()
                .map(|row| row.iter().map(|per_env| per_env[e].clone()).collect())
                .collect()
        })
        .collect();
    let priority = tuples
        .iter()
        .map(|t| t.first().map_or(1, |q| obj.priority[q]))
        .collect();
    let belief = Belief::new(support.iter().map(|&s| b.get(s).clone()).collect())
        .expect("support weights sum to one");
    Ok(Reduction {
        memdp: Memdp {
            states,
            actions: p.actions.clone(),
            environments: Names::new(support.iter().map(|&s| p.states.name(s))),
            enabled,
            delta,
        },
        belief,
        objective: ParityObjective::new(priority),
        initial: 0,
        tuples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{card_game, CardGame, D};
    use crate::model::validate;
    use crate::pomdp::{is_dirac_preserving, is_observation_compatible};
    use crate::prior::prior_value_at;
    use crate::rational::rat;

    #[test]
    fn embedding_shape() {
        let (m, obj) = card_game(&CardGame::symmetric(rat(1, 1)));
        let emb = memdp_to_pomdp(&m);
        assert_eq!(emb.pomdp.num_states(), 12);
        assert_eq!(emb.pomdp.observations.len(), 6);
        assert_eq!(emb.pomdp.states.name(emb.index[D][1]), "D@E2");
        assert!(is_dirac_preserving(&emb.pomdp));
        assert!(is_observation_compatible(&emb.pomdp, &emb.lift_objective(&obj)));
    }

    #[test]
    fn card_game_round_trip() {
        let (m, obj) = card_game(&CardGame::symmetric(rat(1, 1)));
        let emb = memdp_to_pomdp(&m);
        let b = emb.belief_at(D, &Belief::uniform(2));
        let red = memdp_from_pomdp(&emb.pomdp, &b, &emb.lift_objective(&obj)).unwrap();
        assert!(validate(&red.memdp).is_valid());
        assert_eq!(red.memdp.num_envs(), 2);
        let gamma = rat(1, 100);
        let (v0, ..) = prior_value_at(&m, &obj, &Belief::uniform(2), D, &gamma, None).unwrap();
        let (v1, ..) =
            prior_value_at(&red.memdp, &red.objective, &red.belief, red.initial, &gamma, None)
                .unwrap();
        assert_eq!(v0, v1);
        for t in &red.tuples {
            let o: Vec<usize> = t.0.iter().flatten().map(|&q| emb.pomdp.obs[q]).collect();
            assert!(o.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn single_support_is_the_reachable_mdp() {
        let (m, obj) = card_game(&CardGame::symmetric(rat(1, 1)));
        let emb = memdp_to_pomdp(&m);
        let b = emb.belief_at(D, &Belief::dirac(2, 0));
        let red = memdp_from_pomdp(&emb.pomdp, &b, &emb.lift_objective(&obj)).unwrap();
        assert_eq!(red.memdp.num_envs(), 1);
        // D, C1, C2, G, W, L are all reachable in E1, no bottom needed.
        assert_eq!(red.memdp.num_states(), 6);
        assert!(red.tuples.iter().all(|t| !t.is_bottom()));
    }

    #[test]
    fn rejects_split_and_mixed_support() {
        let (m, obj) = card_game(&CardGame::symmetric(rat(1, 1)));
        let emb = memdp_to_pomdp(&m);
        let lifted = emb.lift_objective(&obj);
        let mut mixed = vec![rat(0, 1); 12];
        mixed[emb.index[D][0]] = rat(1, 2);
        mixed[emb.index[crate::catalog::G][1]] = rat(1, 2);
        let b = Belief::new(mixed).unwrap();
        assert!(matches!(
            memdp_from_pomdp(&emb.pomdp, &b, &lifted),
            Err(PomdpError::SupportNotCompatible(..))
        ));
        let mut merged = emb.pomdp.clone();
        merged.obs = vec![0; 12];
        merged.observations = Names::new(["o"]);
        let uniform = ParityObjective::new(vec![1; 12]);
        assert!(matches!(
            memdp_from_pomdp(&merged, &Belief::dirac(12, 0), &uniform),
            Err(PomdpError::NotDiracPreserving { .. })
        ));
    }
}
