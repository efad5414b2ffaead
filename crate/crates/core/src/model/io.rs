//! JSON interchange format.
//!
//! ```json
//! {"type":"memdp","states":["q0","q1"],"actions":["a"],"environments":["E1","E2"],
//!  "transitions":{"E1":{"q0":{"a":{"q1":"1/2","q0":"1/2"}},"q1":{"a":{"q1":1}}},
//!                 "E2":{"q0":{"a":{"q1":1}},"q1":{"a":{"q1":1}}}},
//!  "priority":{"q0":1,"q1":2}}
//! ```
//!
//! `mdp` and `pomdp` documents drop the environment level of `transitions`;
//! `pomdp` documents add `observations` and `obs_map`. Probabilities are
//! `"num/den"` strings, integers, or `[num, den]` pairs.

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Deserialize;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

use super::types::{normalize_dist, Dist, Mdp, Memdp, Names, ParityObjective, Pomdp};
use super::validate::{Issue, ValidationReport};
use crate::rational::{fmt_rat, int, parse_rat, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Mdp,
    Memdp,
    Pomdp,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Mdp => "mdp",
            ModelKind::Memdp => "memdp",
            ModelKind::Pomdp => "pomdp",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Mdp(Mdp),
    Memdp(Memdp),
    Pomdp(Pomdp),
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::Mdp(_) => ModelKind::Mdp,
            Model::Memdp(_) => ModelKind::Memdp,
            Model::Pomdp(_) => ModelKind::Pomdp,
        }
    }

    pub fn states(&self) -> &Names {
        match self {
            Model::Mdp(m) => &m.states,
            Model::Memdp(m) => &m.states,
            Model::Pomdp(m) => &m.states,
        }
    }

    /// Views the model as an MEMDP; an MDP becomes a single environment.
    pub fn into_memdp(self) -> Option<Memdp> {
        match self {
            Model::Memdp(m) => Some(m),
            Model::Mdp(m) => Some(Memdp::from_mdp(&m, "E")),
            Model::Pomdp(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedModel {
    pub model: Model,
    pub objective: ParityObjective,
    /// Warnings raised while validating; errors abort parsing.
    pub warnings: Vec<Issue>,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ModelError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid model: {}", .0.summary())]
    Invalid(ValidationReport),
}

#[derive(Debug, Deserialize)]
struct RawDoc {
    #[serde(rename = "type")]
    kind: String,
    states: Vec<String>,
    actions: Vec<String>,
    #[serde(default)]
    environments: Option<Vec<String>>,
    transitions: Value,
    #[serde(default)]
    priority: Option<Map<String, Value>>,
    #[serde(default)]
    observations: Option<Vec<String>>,
    #[serde(default)]
    obs_map: Option<Map<String, Value>>,
}

fn syntax(e: serde_json::Error) -> ModelError {
    ModelError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Parses and validates a model document.
pub fn parse_model(text: &str) -> Result<ParsedModel, ModelError> {
    let (report, built) = check_document(text)?;
    match built {
        Some((model, objective)) if report.is_valid() => Ok(ParsedModel {
            model,
            objective,
            warnings: report.warnings,
        }),
        _ => Err(ModelError::Invalid(report)),
    }
}

/// Validates a document, reporting every violation found. Only syntax
/// errors are returned as `Err`.
pub fn validate_document(text: &str) -> Result<ValidationReport, ModelError> {
    check_document(text).map(|(r, _)| r)
}

fn check_document(
    text: &str,
) -> Result<(ValidationReport, Option<(Model, ParityObjective)>), ModelError> {
    let value: Value = serde_json::from_str(text).map_err(syntax)?;
    let raw: RawDoc = serde_json::from_value(value).map_err(|e| ModelError::Syntax {
        line: 0,
        column: 0,
        message: e.to_string(),
    })?;
    let mut b = Builder::default();
    let built = b.build(raw);
    Ok((b.report, built))
}

#[derive(Default)]
struct Builder {
    report: ValidationReport,
}

/// Transition rows of one environment: per state, per action, raw entries.
type Rows = Vec<BTreeMap<usize, Vec<(usize, Rat)>>>;

impl Builder {
    fn err(&mut self, code: &'static str, msg: String) {
        self.report.errors.push(Issue::new(code, msg));
    }

    fn warn(&mut self, code: &'static str, msg: String) {
        self.report.warnings.push(Issue::new(code, msg));
    }

    fn names(&mut self, what: &str, list: &[String]) -> Names {
        let mut n = Names::default();
        for s in list {
            if n.get(s).is_some() {
                self.err("duplicate-id", format!("duplicate {what} id `{s}`"));
            }
            n.push(s.clone());
        }
        n
    }

    fn build(&mut self, raw: RawDoc) -> Option<(Model, ParityObjective)> {
        let kind = match raw.kind.as_str() {
            "mdp" => ModelKind::Mdp,
            "memdp" => ModelKind::Memdp,
            "pomdp" => ModelKind::Pomdp,
            other => {
                self.err("bad-type", format!("unknown model type `{other}`"));
                return None;
            }
        };
        let states = self.names("state", &raw.states);
        let actions = self.names("action", &raw.actions);
        if states.is_empty() {
            self.err("no-states", "model declares no states".into());
        }
        if actions.is_empty() {
            self.err("no-actions", "model declares no actions".into());
        }
        let envs = match (kind, &raw.environments) {
            (ModelKind::Memdp, Some(list)) if !list.is_empty() => self.names("environment", list),
            (ModelKind::Memdp, _) => {
                self.err("no-environments", "memdp declares no environments".into());
                return None;
            }
            (_, Some(list)) if !list.is_empty() => {
                self.warn(
                    "ignored-field",
                    format!("`environments` is ignored for type `{}`", kind.as_str()),
                );
                Names::new(["E"])
            }
            _ => Names::new(["E"]),
        };
        if !self.report.is_valid() {
            return None;
        }

        let rows: Vec<Rows> = if kind == ModelKind::Memdp {
            let Some(obj) = raw.transitions.as_object() else {
                self.err("bad-transitions", "`transitions` must be an object".into());
                return None;
            };
            for key in obj.keys() {
                if envs.get(key).is_none() {
                    self.err(
                        "dangling-environment",
                        format!("transitions mention undeclared environment `{key}`"),
                    );
                }
            }
            envs.iter()
                .map(|e| match obj.get(e) {
                    Some(v) => self.rows(v, &states, &actions, Some(e)),
                    None => {
                        self.err(
                            "missing-environment",
                            format!("environment `{e}` has no transitions"),
                        );
                        vec![BTreeMap::new(); states.len()]
                    }
                })
                .collect()
        } else {
            vec![self.rows(&raw.transitions, &states, &actions, None)]
        };

        let (enabled, delta) = self.finish_rows(rows, &states, &actions, &envs)?;
        let objective = self.priorities(raw.priority.as_ref(), &states);

        let model = match kind {
            ModelKind::Mdp => Model::Mdp(Mdp {
                states,
                actions,
                enabled,
                delta: delta.into_iter().next().unwrap(),
            }),
            ModelKind::Memdp => Model::Memdp(Memdp {
                states,
                actions,
                environments: envs,
                enabled,
                delta,
            }),
            ModelKind::Pomdp => {
                let (observations, obs) =
                    self.observations(raw.observations.as_deref(), raw.obs_map.as_ref(), &states);
                let pomdp = Pomdp {
                    states,
                    actions,
                    enabled,
                    delta: delta.into_iter().next().unwrap(),
                    observations,
                    obs,
                };
                if self.report.is_valid() {
                    self.check_observation_actions(&pomdp);
                }
                Model::Pomdp(pomdp)
            }
        };
        if kind != ModelKind::Pomdp && (raw.observations.is_some() || raw.obs_map.is_some()) {
            self.warn(
                "ignored-field",
                format!("observations are ignored for type `{}`", kind.as_str()),
            );
        }
        let objective = objective?;
        if self.report.is_valid() {
            Some((model, objective))
        } else {
            None
        }
    }

    fn prob(&mut self, v: &Value, ctx: &str) -> Option<Rat> {
        let r = match v {
            Value::String(s) => match parse_rat(s) {
                Ok(r) => r,
                Err(e) => {
                    self.err("bad-probability", format!("{ctx}: {e}"));
                    return None;
                }
            },
            Value::Number(n) => match n.as_i64() {
                Some(i) => int(i),
                None => {
                    self.err(
                        "bad-probability",
                        format!("{ctx}: numeric probabilities must be integers; write `\"p/q\"`"),
                    );
                    return None;
                }
            },
            Value::Array(pair) if pair.len() == 2 => {
                match (pair[0].as_i64(), pair[1].as_i64()) {
                    (Some(n), Some(d)) if d != 0 => Rat::new(n.into(), d.into()),
                    _ => {
                        self.err(
                            "bad-probability",
                            format!("{ctx}: expected an integer pair [num, den]"),
                        );
                        return None;
                    }
                }
            }
            _ => {
                self.err("bad-probability", format!("{ctx}: unsupported value {v}"));
                return None;
            }
        };
        if r.is_negative() || r > Rat::one() {
            self.err(
                "bad-probability",
                format!("{ctx}: probability {} outside [0,1]", fmt_rat(&r)),
            );
            return None;
        }
        Some(r)
    }

    fn rows(&mut self, v: &Value, states: &Names, actions: &Names, env: Option<&str>) -> Rows {
        let mut rows: Rows = vec![BTreeMap::new(); states.len()];
        let at = |s: &str| match env {
            Some(e) => format!("{s} in environment `{e}`"),
            None => s.to_string(),
        };
        let Some(obj) = v.as_object() else {
            self.err("bad-transitions", at("transitions must be an object"));
            return rows;
        };
        for (qs, per_action) in obj {
            let Some(q) = states.get(qs) else {
                self.err(
                    "dangling-state",
                    at(&format!("transitions mention undeclared state `{qs}`")),
                );
                continue;
            };
            let Some(per_action) = per_action.as_object() else {
                self.err("bad-transitions", at(&format!("state `{qs}`: expected an object")));
                continue;
            };
            for (as_, succs) in per_action {
                let Some(a) = actions.get(as_) else {
                    self.err(
                        "dangling-action",
                        at(&format!("state `{qs}` uses undeclared action `{as_}`")),
                    );
                    continue;
                };
                let Some(succs) = succs.as_object() else {
                    self.err(
                        "bad-transitions",
                        at(&format!("({qs}, {as_}): expected an object")),
                    );
                    continue;
                };
                let mut entries = Vec::new();
                let mut ok = true;
                for (ts, p) in succs {
                    let ctx = at(&format!("({qs}, {as_}) -> {ts}"));
                    let Some(t) = states.get(ts) else {
                        self.err(
                            "dangling-state",
                            format!("{ctx}: undeclared successor state `{ts}`"),
                        );
                        ok = false;
                        continue;
                    };
                    match self.prob(p, &ctx) {
                        Some(r) => entries.push((t, r)),
                        None => ok = false,
                    }
                }
                if ok {
                    let total: Rat = entries.iter().map(|(_, p)| p.clone()).sum();
                    if total != Rat::one() {
                        self.err(
                            "bad-sum",
                            at(&format!(
                                "({qs}, {as_}): distribution does not sum to 1 (sum is {})",
                                fmt_rat(&total)
                            )),
                        );
                    }
                }
                rows[q].insert(a, entries);
            }
        }
        rows
    }

    fn finish_rows(
        &mut self,
        rows: Vec<Rows>,
        states: &Names,
        actions: &Names,
        envs: &Names,
    ) -> Option<(Vec<Vec<usize>>, Vec<Vec<Vec<Dist>>>)> {
        let n = states.len();
        let mut incoming = vec![false; n];
        for env_rows in &rows {
            for (q, row) in env_rows.iter().enumerate() {
                for entries in row.values() {
                    for (t, p) in entries {
                        if !p.is_zero() && *t != q {
                            incoming[*t] = true;
                        }
                    }
                }
            }
        }
        let mut enabled = Vec::with_capacity(n);
        let mut absorbing_fill = vec![false; n];
        for q in 0..n {
            let first: Vec<usize> = rows[0][q].keys().copied().collect();
            for (e, env_rows) in rows.iter().enumerate().skip(1) {
                let other: Vec<usize> = env_rows[q].keys().copied().collect();
                if other != first {
                    let fmt = |v: &[usize]| {
                        v.iter()
                            .map(|&a| actions.name(a))
                            .collect::<Vec<_>>()
                            .join(",")
                    };
                    self.err(
                        "env-mismatch",
                        format!(
                            "environments must share (Q,A): state `{}` enables {{{}}} in `{}` but {{{}}} in `{}`",
                            states.name(q),
                            fmt(&first),
                            envs.name(0),
                            fmt(&other),
                            envs.name(e)
                        ),
                    );
                }
            }
            if first.is_empty() {
                if incoming[q] {
                    self.err(
                        "empty-actions",
                        format!("state `{}` has an empty action set", states.name(q)),
                    );
                } else {
                    self.warn(
                        "unreferenced-state",
                        format!(
                            "state `{}` is declared but unused; treated as absorbing",
                            states.name(q)
                        ),
                    );
                    absorbing_fill[q] = true;
                }
                enabled.push((0..actions.len()).collect::<Vec<_>>());
            } else {
                enabled.push(first);
            }
        }
        let mut used = vec![false; actions.len()];
        for (q, row) in rows[0].iter().enumerate() {
            if !absorbing_fill[q] {
                for &a in row.keys() {
                    used[a] = true;
                }
            }
        }
        for (a, u) in used.iter().enumerate() {
            if !u && !actions.is_empty() {
                self.warn(
                    "unused-action",
                    format!("action `{}` is never enabled", actions.name(a)),
                );
            }
        }
        if !self.report.is_valid() {
            return None;
        }
        let delta = rows
            .into_iter()
            .map(|env_rows| {
                env_rows
                    .into_iter()
                    .enumerate()
                    .map(|(q, row)| {
                        if absorbing_fill[q] {
                            vec![vec![(q, Rat::one())]; actions.len()]
                        } else {
                            row.into_values().map(normalize_dist).collect()
                        }
                    })
                    .collect()
            })
            .collect();
        Some((enabled, delta))
    }

    fn priorities(
        &mut self,
        raw: Option<&Map<String, Value>>,
        states: &Names,
    ) -> Option<ParityObjective> {
        let Some(raw) = raw else {
            self.err("missing-priority", "model has no `priority` map".into());
            return None;
        };
        let mut pr: Vec<Option<u32>> = vec![None; states.len()];
        for (s, v) in raw {
            let Some(q) = states.get(s) else {
                self.err(
                    "dangling-state",
                    format!("priority given for undeclared state `{s}`"),
                );
                continue;
            };
            match v.as_u64().and_then(|x| x.to_u32()) {
                Some(p) => pr[q] = Some(p),
                None => self.err(
                    "bad-priority",
                    format!("state `{s}`: priority must be a nonnegative integer, got {v}"),
                ),
            }
        }
        let mut out = Vec::with_capacity(states.len());
        for (q, p) in pr.into_iter().enumerate() {
            match p {
                Some(p) => out.push(p),
                None => {
                    self.err(
                        "missing-priority",
                        format!("state `{}` has no priority", states.name(q)),
                    );
                    out.push(0);
                }
            }
        }
        Some(ParityObjective::new(out))
    }

    fn observations(
        &mut self,
        decl: Option<&[String]>,
        map: Option<&Map<String, Value>>,
        states: &Names,
    ) -> (Names, Vec<usize>) {
        let observations = match decl {
            Some(list) => self.names("observation", list),
            None => {
                self.err("missing-observations", "pomdp declares no observations".into());
                Names::default()
            }
        };
        let mut obs = vec![usize::MAX; states.len()];
        match map {
            None => self.err("missing-obs-map", "pomdp has no `obs_map`".into()),
            Some(map) => {
                for (s, o) in map {
                    let Some(q) = states.get(s) else {
                        self.err(
                            "dangling-state",
                            format!("obs_map mentions undeclared state `{s}`"),
                        );
                        continue;
                    };
                    match o.as_str().and_then(|o| observations.get(o)) {
                        Some(i) => obs[q] = i,
                        None => self.err(
                            "dangling-observation",
                            format!("state `{s}` maps to undeclared observation {o}"),
                        ),
                    }
                }
                for (q, &o) in obs.iter().enumerate() {
                    if o == usize::MAX && map.get(states.name(q)).is_none() {
                        self.err(
                            "missing-observation",
                            format!("state `{}` has no observation", states.name(q)),
                        );
                    }
                }
            }
        }
        (observations, obs)
    }

    fn check_observation_actions(&mut self, p: &Pomdp) {
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        for q in 0..p.num_states() {
            match seen.get(&p.obs[q]) {
                Some(&r) if p.enabled[r] != p.enabled[q] => self.err(
                    "obs-action-mismatch",
                    format!(
                        "states `{}` and `{}` share observation `{}` but enable different actions",
                        p.states.name(r),
                        p.states.name(q),
                        p.observations.name(p.obs[q])
                    ),
                ),
                Some(_) => {}
                None => {
                    seen.insert(p.obs[q], q);
                }
            }
        }
    }
}

fn dist_json(d: &Dist, states: &Names) -> Value {
    let mut m = Map::new();
    for (t, p) in d {
        m.insert(states.name(*t).to_string(), Value::String(fmt_rat(p)));
    }
    Value::Object(m)
}

fn table_json(enabled: &[Vec<usize>], delta: &[Vec<Dist>], states: &Names, actions: &Names) -> Value {
    let mut m = Map::new();
    for (q, acts) in enabled.iter().enumerate() {
        let mut row = Map::new();
        for (i, &a) in acts.iter().enumerate() {
            row.insert(actions.name(a).to_string(), dist_json(&delta[q][i], states));
        }
        m.insert(states.name(q).to_string(), Value::Object(row));
    }
    Value::Object(m)
}

fn priority_json(obj: &ParityObjective, states: &Names) -> Value {
    let mut m = Map::new();
    for (q, p) in obj.priority.iter().enumerate() {
        m.insert(states.name(q).to_string(), json!(p));
    }
    Value::Object(m)
}

/// Canonical JSON form of a model.
pub fn model_to_json(model: &Model, obj: &ParityObjective) -> Value {
    match model {
        Model::Mdp(m) => json!({
            "type": "mdp",
            "states": m.states.as_slice(),
            "actions": m.actions.as_slice(),
            "transitions": table_json(&m.enabled, &m.delta, &m.states, &m.actions),
            "priority": priority_json(obj, &m.states),
        }),
        Model::Memdp(m) => memdp_to_json(m, obj),
        Model::Pomdp(p) => {
            let mut om = Map::new();
            for (q, &o) in p.obs.iter().enumerate() {
                om.insert(
                    p.states.name(q).to_string(),
                    Value::String(p.observations.name(o).to_string()),
                );
            }
            json!({
                "type": "pomdp",
                "states": p.states.as_slice(),
                "actions": p.actions.as_slice(),
                "transitions": table_json(&p.enabled, &p.delta, &p.states, &p.actions),
                "priority": priority_json(obj, &p.states),
                "observations": p.observations.as_slice(),
                "obs_map": Value::Object(om),
            })
        }
    }
}

pub fn memdp_to_json(m: &Memdp, obj: &ParityObjective) -> Value {
    let mut tr = Map::new();
    for (e, d) in m.delta.iter().enumerate() {
        tr.insert(
            m.environments.name(e).to_string(),
            table_json(&m.enabled, d, &m.states, &m.actions),
        );
    }
    json!({
        "type": "memdp",
        "states": m.states.as_slice(),
        "actions": m.actions.as_slice(),
        "environments": m.environments.as_slice(),
        "transitions": Value::Object(tr),
        "priority": priority_json(obj, &m.states),
    })
}

pub fn serialize_model(model: &Model, obj: &ParityObjective) -> String {
    serde_json::to_string_pretty(&model_to_json(model, obj)).expect("json values serialize")
}

/// Parses a belief given as `{"id": "p/q", ...}` over the given names.
pub fn parse_weights(text: &str, names: &Names) -> Result<Vec<Rat>, String> {
    let map: Map<String, Value> =
        serde_json::from_str(text).map_err(|e| format!("belief is not a JSON object: {e}"))?;
    let mut w = vec![Rat::zero(); names.len()];
    for (k, v) in &map {
        let i = names
            .get(k)
            .ok_or_else(|| format!("belief mentions unknown id `{k}`"))?;
        w[i] = match v {
            Value::String(s) => parse_rat(s).map_err(|e| e.to_string())?,
            Value::Number(n) => n
                .as_i64()
                .map(int)
                .ok_or_else(|| format!("weight of `{k}` must be a rational string"))?,
            _ => return Err(format!("weight of `{k}` must be a rational string")),
        };
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    const SINGLE: &str = r#"{"type":"mdp","states":["q"],"actions":["a"],
        "transitions":{"q":{"a":{"q":"1/1"}}},"priority":{"q":0}}"#;

    #[test]
    fn single_state_mdp() {
        let p = parse_model(SINGLE).unwrap();
        let Model::Mdp(m) = &p.model else { panic!() };
        assert_eq!(m.delta[0][0], vec![(0, rat(1, 1))]);
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn bad_sum_is_reported() {
        let t = r#"{"type":"mdp","states":["q","r"],"actions":["a"],
            "transitions":{"q":{"a":{"q":"1/2","r":"1/3"}},"r":{"a":{"r":1}}},"priority":{"q":0,"r":0}}"#;
        let Err(ModelError::Invalid(r)) = parse_model(t) else {
            panic!()
        };
        assert!(r.errors[0].message.contains("distribution does not sum to 1"));
    }

    #[test]
    fn syntax_error_has_position() {
        let Err(ModelError::Syntax { line, column, .. }) = parse_model("{\n  \"type\": ,}") else {
            panic!()
        };
        assert_eq!(line, 2);
        assert!(column > 0);
    }

    #[test]
    fn env_action_mismatch() {
        let t = r#"{"type":"memdp","states":["q"],"actions":["a","b"],"environments":["E1","E2"],
            "transitions":{"E1":{"q":{"a":{"q":1}}},"E2":{"q":{"b":{"q":1}}}},"priority":{"q":0}}"#;
        let r = validate_document(t).unwrap();
        assert!(r.errors.iter().any(|i| i.message.contains("environments must share (Q,A)")));
    }

    #[test]
    fn unreferenced_state_is_a_warning() {
        let t = r#"{"type":"mdp","states":["q","spare"],"actions":["a"],
            "transitions":{"q":{"a":{"q":1}}},"priority":{"q":0,"spare":1}}"#;
        let p = parse_model(t).unwrap();
        assert_eq!(p.warnings.len(), 1);
        assert_eq!(p.warnings[0].code, "unreferenced-state");
    }

    #[test]
    fn accepts_integer_pairs_and_zero_entries() {
        let t = r#"{"type":"mdp","states":["q","r"],"actions":["a"],
            "transitions":{"q":{"a":{"q":[1,2],"r":"1/2"}},"r":{"a":{"r":1,"q":0}}},"priority":{"q":0,"r":1}}"#;
        let p = parse_model(t).unwrap();
        let Model::Mdp(m) = &p.model else { panic!() };
        assert_eq!(m.delta[1][0], vec![(1, rat(1, 1))]);
    }

    #[test]
    fn round_trip_is_identity() {
        let p = parse_model(SINGLE).unwrap();
        let s = serialize_model(&p.model, &p.objective);
        let p2 = parse_model(&s).unwrap();
        assert_eq!(p.model, p2.model);
        assert_eq!(serialize_model(&p2.model, &p2.objective), s);
    }

    #[test]
    fn pomdp_requires_total_obs_map() {
        let t = r#"{"type":"pomdp","states":["q","r"],"actions":["a"],
            "transitions":{"q":{"a":{"r":1}},"r":{"a":{"r":1}}},"priority":{"q":0,"r":0},
            "observations":["o"],"obs_map":{"q":"o"}}"#;
        let r = validate_document(t).unwrap();
        assert!(r.errors.iter().any(|i| i.code == "missing-observation"));
    }
}
