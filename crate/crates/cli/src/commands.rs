use std::path::{Path, PathBuf};
use std::time::Instant;

use memdp::belief::Belief;
use memdp::model::{memdp_to_json, parse_model, parse_weights, validate_document, Memdp, Model, ModelError, Names, ParsedModel};
use memdp::parity::parity_value;
use memdp::pomdp::{
    dirac_violation, entropy_increase_witness, memdp_from_pomdp, observation_conflict, PomdpError,
};
use memdp::prior::{compute_constants, gap_decide, prior_value, prior_value_at, ConstantsError, GapError, PriorError};
use memdp::rational::fmt_rat;
use memdp::sim::{belief_trace_stats, mc_parity_estimate, sample_runs, SimError, StrategySpec};
use memdp::universal::{uni_value_grid, uni_value_two_env, UniError, UniOptions, UniResult};
use memdp::Rat;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::report::{accuracy_note, digest, human, number, CommandResult};
use crate::Method;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Guard(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Guard(_) => 2,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<PriorError> for CliError {
    fn from(e: PriorError) -> Self {
        match e {
            PriorError::DepthLimit(_) | PriorError::Constants(ConstantsError::Overflow(_)) => {
                CliError::Guard(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ConstantsError> for CliError {
    fn from(e: ConstantsError) -> Self {
        PriorError::from(e).into()
    }
}

impl From<UniError> for CliError {
    fn from(e: UniError) -> Self {
        match e {
            UniError::Prior(p) => p.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<GapError> for CliError {
    fn from(e: GapError) -> Self {
        match e {
            GapError::Prior(p) => p.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::TooLarge(_) => CliError::Guard(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<PomdpError> for CliError {
    fn from(e: PomdpError) -> Self {
        match e {
            PomdpError::TooLarge(_) => CliError::Guard(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub struct Context {
    pub json: bool,
    pub parallel: bool,
    pub argv: Vec<String>,
}

/// Everything a command produced, before rendering.
struct Outcome {
    outputs: Value,
    accuracy: Option<Rat>,
    warnings: Vec<String>,
    text: String,
}

type CmdResult = Result<u8, CliError>;

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(Vec<u8>, ParsedModel), CliError> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))?;
    Ok((bytes, parse_model(&text)?))
}

fn as_memdp(model: Model) -> Result<Memdp, CliError> {
    model
        .into_memdp()
        .ok_or_else(|| CliError::Input("this command needs an mdp or memdp model, not a pomdp".into()))
}

fn parse_belief(text: &str, names: &Names) -> Result<Belief, CliError> {
    if text.trim() == "uniform" {
        return Ok(Belief::uniform(names.len()));
    }
    let w = parse_weights(text, names).map_err(CliError::Input)?;
    Belief::new(w).map_err(|e| CliError::Input(format!("invalid belief: {e}")))
}

fn state_index(names: &Names, state: Option<&str>) -> Result<usize, CliError> {
    match state {
        None => Ok(0),
        Some(s) => names
            .get(s)
            .ok_or_else(|| CliError::Input(format!("unknown state `{s}`"))),
    }
}

fn emit(ctx: &Context, command: &str, files: &[&[u8]], start: Instant, out: Outcome) {
    if ctx.json {
        let res = CommandResult {
            command: command.to_string(),
            argv: ctx.argv.clone(),
            inputs_digest: digest(files, &ctx.argv),
            outputs: out.outputs,
            accuracy: out.accuracy.as_ref().map(fmt_rat),
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
            warnings: out.warnings,
        };
        println!("{}", serde_json::to_string_pretty(&res).expect("json values serialize"));
    } else {
        for w in &out.warnings {
            eprintln!("warning: {w}");
        }
        print!("{}", out.text);
    }
}

fn issues(list: &[memdp::model::Issue]) -> Value {
    json!(list
        .iter()
        .map(|i| json!({"code": i.code, "message": i.message}))
        .collect::<Vec<_>>())
}

pub fn validate(ctx: &Context, path: &Path) -> CmdResult {
    let start = Instant::now();
    let bytes = read(path)?;
    let text = String::from_utf8_lossy(&bytes);
    let report = validate_document(&text)?;
    let mut t = String::new();
    for e in &report.errors {
        t.push_str(&format!("error [{}]: {}\n", e.code, e.message));
    }
    for w in &report.warnings {
        t.push_str(&format!("warning [{}]: {}\n", w.code, w.message));
    }
    t.push_str(if report.is_valid() { "valid\n" } else { "invalid\n" });
    let valid = report.is_valid();
    emit(
        ctx,
        "validate",
        &[&bytes],
        start,
        Outcome {
            outputs: json!({
                "valid": valid,
                "errors": issues(&report.errors),
                "warnings": issues(&report.warnings),
            }),
            accuracy: Some(Rat::zero()),
            warnings: vec![],
            text: t,
        },
    );
    Ok(if valid { 0 } else { 1 })
}

fn value_map(names: &Names, vals: &[Rat], acc: Option<&Rat>) -> Value {
    let mut m = Map::new();
    for (q, v) in vals.iter().enumerate() {
        m.insert(names.name(q).to_string(), number(v, acc));
    }
    Value::Object(m)
}

fn value_lines(names: &Names, vals: &[Rat], indent: &str) -> String {
    vals.iter()
        .enumerate()
        .map(|(q, v)| format!("{indent}{}: {}\n", names.name(q), human(v)))
        .collect()
}

pub fn mdp_parity(ctx: &Context, path: &Path) -> CmdResult {
    let start = Instant::now();
    let (bytes, parsed) = load(path)?;
    let zero = Rat::zero();
    let (outputs, text) = match &parsed.model {
        Model::Mdp(m) => {
            let v = parity_value(m, &parsed.objective).values;
            (
                json!({"values": value_map(&m.states, &v, Some(&zero))}),
                value_lines(&m.states, &v, ""),
            )
        }
        Model::Memdp(m) => {
            let mut envs = Map::new();
            let mut text = String::new();
            for e in 0..m.num_envs() {
                let v = parity_value(&m.slice(e), &parsed.objective).values;
                let name = m.environments.name(e);
                envs.insert(name.to_string(), value_map(&m.states, &v, Some(&zero)));
                text.push_str(&format!("{name}:\n{}", value_lines(&m.states, &v, "  ")));
            }
            (json!({"environments": envs}), text)
        }
        Model::Pomdp(_) => {
            return Err(CliError::Input("mdp-parity needs an mdp or memdp model".into()));
        }
    };
    emit(
        ctx,
        "mdp-parity",
        &[&bytes],
        start,
        Outcome {
            outputs,
            accuracy: Some(zero),
            warnings: parsed.warnings.iter().map(|w| w.message.clone()).collect(),
            text,
        },
    );
    Ok(0)
}

fn forfeited(max_depth: Option<u64>, guaranteed: bool) -> Vec<String> {
    match max_depth {
        Some(d) if !guaranteed => vec![format!(
            "--max-depth {d} is below the required depth; the accuracy guarantee is forfeited"
        )],
        _ => vec![],
    }
}

pub fn prior_value_cmd(
    ctx: &Context,
    path: &Path,
    belief: &str,
    gamma: &Rat,
    max_depth: Option<u64>,
    state: Option<&str>,
) -> CmdResult {
    let start = Instant::now();
    let (bytes, parsed) = load(path)?;
    let obj = parsed.objective;
    let m = as_memdp(parsed.model)?;
    let b = parse_belief(belief, &m.environments)?;
    let exact = b.support_size() == 1;
    let (outputs_vals, guaranteed, stats, text);
    let acc_if = |g: bool| if !g { None } else if exact { Some(Rat::zero()) } else { Some(gamma.clone()) };
    match state {
        Some(s) => {
            let q = state_index(&m.states, Some(s))?;
            let (v, g, st) = prior_value_at(&m, &obj, &b, q, gamma, max_depth)?;
            let acc = acc_if(g);
            text = format!(
                "prior value at {} under {}: {} [{}]\n",
                m.states.name(q),
                b.display(&m.environments),
                human(&v),
                accuracy_note(acc.as_ref())
            );
            outputs_vals = json!({"state": m.states.name(q), "value": number(&v, acc.as_ref())});
            guaranteed = g;
            stats = st;
        }
        None => {
            let r = prior_value(&m, &obj, &b, gamma, max_depth)?;
            let acc = acc_if(r.guaranteed);
            text = format!(
                "prior values under {} [{}]:\n{}",
                b.display(&m.environments),
                accuracy_note(acc.as_ref()),
                value_lines(&m.states, &r.table.values, "  ")
            );
            outputs_vals = json!({"values": value_map(&m.states, &r.table.values, acc.as_ref())});
            guaranteed = r.guaranteed;
            stats = r.stats;
        }
    }
    let mut outputs = outputs_vals;
    outputs["belief"] = b.to_json(&m.environments);
    outputs["gamma"] = json!(fmt_rat(gamma));
    outputs["guaranteed"] = json!(guaranteed);
    outputs["stats"] = serde_json::to_value(&stats).expect("stats serialize");
    let mut warnings: Vec<String> = parsed.warnings.iter().map(|w| w.message.clone()).collect();
    warnings.extend(forfeited(max_depth, guaranteed));
    emit(
        ctx,
        "prior-value",
        &[&bytes],
        start,
        Outcome {
            outputs,
            accuracy: acc_if(guaranteed),
            warnings,
            text,
        },
    );
    Ok(0)
}

pub fn gap(ctx: &Context, path: &Path, belief: &str, alpha: &Rat, eps: &Rat, state: Option<&str>) -> CmdResult {
    let start = Instant::now();
    let (bytes, parsed) = load(path)?;
    let obj = parsed.objective;
    let m = as_memdp(parsed.model)?;
    let b = parse_belief(belief, &m.environments)?;
    let q = state_index(&m.states, state)?;
    let d = gap_decide(&m, &obj, &b, q, alpha, eps)?;
    let text = format!(
        "prior value at {} is {} within {}\n{}\n",
        m.states.name(q),
        human(&d.value),
        d.gamma,
        d.answer
    );
    emit(
        ctx,
        "gap",
        &[&bytes],
        start,
        Outcome {
            outputs: json!({
                "answer": d.answer.to_string(),
                "state": m.states.name(q),
                "belief": b.to_json(&m.environments),
                "alpha": fmt_rat(alpha),
                "eps": fmt_rat(eps),
                "value": number(&d.value, Some(&d.gamma)),
            }),
            accuracy: Some(d.gamma.clone()),
            warnings: parsed.warnings.iter().map(|w| w.message.clone()).collect(),
            text,
        },
    );
    Ok(0)
}

pub fn uni_value(
    ctx: &Context,
    path: &Path,
    eps: &Rat,
    method: Method,
    state: Option<&str>,
    max_depth: Option<u64>,
) -> CmdResult {
    let start = Instant::now();
    let (bytes, parsed) = load(path)?;
    let obj = parsed.objective;
    let m = as_memdp(parsed.model)?;
    let q = state_index(&m.states, state)?;
    let opts = UniOptions {
        depth_override: max_depth,
        parallel: ctx.parallel,
    };
    let r: UniResult = match method {
        Method::Grid => uni_value_grid(&m, &obj, q, eps, &opts)?,
        Method::Bisect => uni_value_two_env(&m, &obj, q, eps, &opts)?,
    };
    let acc = r.guaranteed.then(|| eps.clone());
    let text = format!(
        "universal value at {}: {} [{}]\nminimizing prior: {}\nprior-value evaluations: {}\n",
        m.states.name(q),
        human(&r.value),
        accuracy_note(acc.as_ref()),
        r.minimizer.display(&m.environments),
        r.evaluations
    );
    let mut warnings: Vec<String> = parsed.warnings.iter().map(|w| w.message.clone()).collect();
    warnings.extend(forfeited(max_depth, r.guaranteed));
    emit(
        ctx,
        "uni-value",
        &[&bytes],
        start,
        Outcome {
            outputs: json!({
                "state": m.states.name(q),
                "method": match method { Method::Grid => "grid", Method::Bisect => "bisect" },
                "eps": fmt_rat(eps),
                "value": number(&r.value, acc.as_ref()),
                "minimizer": r.minimizer.to_json(&m.environments),
                "evaluations": r.evaluations,
                "search_calls": r.search_calls,
                "guaranteed": r.guaranteed,
            }),
            accuracy: acc,
            warnings,
            text,
        },
    );
    Ok(0)
}

pub fn constants(ctx: &Context, path: &Path, eps: &Rat) -> CmdResult {
    let start = Instant::now();
    let (bytes, parsed) = load(path)?;
    let m = as_memdp(parsed.model)?;
    let c = compute_constants(&m, eps)?;
    let enclosure = |r: &memdp::prior::Real| match &r.exact {
        Some(x) => x.to_string(),
        None => format!("[{:.9}, {:.9}]", r.iv.lo, r.iv.hi),
    };
    let text = format!(
        "ratio_min = {}\nratio_max = {}\nratio_min_gt1 = {}\np_min = {}\niota = {}\neta = {}\nn1 = {}\nn2 = {}\nn3 = {}\nm = {}\n",
        c.ratio_min,
        c.ratio_max,
        c.ratio_min_gt1,
        c.p_min,
        enclosure(&c.iota),
        enclosure(&c.eta),
        c.n1,
        c.n2,
        c.n3,
        c.m
    );
    let mut outputs = serde_json::to_value(&c).expect("constants serialize");
    outputs["eps"] = json!(fmt_rat(eps));
    emit(
        ctx,
        "constants",
        &[&bytes],
        start,
        Outcome {
            outputs,
            accuracy: Some(Rat::zero()),
            warnings: vec![],
            text,
        },
    );
    Ok(0)
}

pub fn pomdp_check(ctx: &Context, path: &Path) -> CmdResult {
    let start = Instant::now();
    let (bytes, parsed) = load(path)?;
    let Model::Pomdp(p) = &parsed.model else {
        return Err(CliError::Input("pomdp check needs a pomdp model".into()));
    };
    let mut text = String::new();
    let violation = dirac_violation(p);
    let (viol_json, witness_json) = match &violation {
        None => {
            text.push_str("Dirac-preserving: yes\n");
            (Value::Null, Value::Null)
        }
        Some(v) => {
            let (b, a, h) = entropy_increase_witness(p, v);
            let q = b.support()[0];
            text.push_str(&format!(
                "Dirac-preserving: no; ({}, {}) reaches several states observed as {}\n\
                 witness: Dirac belief on {} then {} raises the expected entropy from 0 to [{:.6}, {:.6}]\n",
                p.states.name(v.state),
                p.actions.name(v.action),
                p.observations.name(v.observation),
                p.states.name(q),
                p.actions.name(a),
                h.lo,
                h.hi
            ));
            (
                json!({
                    "state": p.states.name(v.state),
                    "action": p.actions.name(v.action),
                    "observation": p.observations.name(v.observation),
                }),
                json!({
                    "belief": b.to_json(&p.states),
                    "action": p.actions.name(a),
                    "expected_entropy": {"lo": h.lo, "hi": h.hi},
                }),
            )
        }
    };
    let conflict = observation_conflict(p, &parsed.objective);
    let conflict_json = match conflict {
        None => {
            text.push_str("observation-compatible objective: yes\n");
            Value::Null
        }
        Some((a, b)) => {
            text.push_str(&format!(
                "observation-compatible objective: no; {} and {} share an observation but not a priority\n",
                p.states.name(a),
                p.states.name(b)
            ));
            json!([p.states.name(a), p.states.name(b)])
        }
    };
    emit(
        ctx,
        "pomdp check",
        &[&bytes],
        start,
        Outcome {
            outputs: json!({
                "dirac_preserving": violation.is_none(),
                "violation": viol_json,
                "witness": witness_json,
                "observation_compatible": conflict_json.is_null(),
                "conflict": conflict_json,
            }),
            accuracy: Some(Rat::zero()),
            warnings: parsed.warnings.iter().map(|w| w.message.clone()).collect(),
            text,
        },
    );
    Ok(0)
}

pub fn pomdp_convert(ctx: &Context, path: &Path, belief: &str) -> CmdResult {
    let start = Instant::now();
    let (bytes, parsed) = load(path)?;
    let Model::Pomdp(p) = &parsed.model else {
        return Err(CliError::Input("pomdp convert needs a pomdp model".into()));
    };
    let b = parse_belief(belief, &p.states)?;
    let red = memdp_from_pomdp(p, &b, &parsed.objective)?;
    let doc = json!({
        "model": memdp_to_json(&red.memdp, &red.objective),
        "belief": red.belief.to_json(&red.memdp.environments),
        "initial": red.memdp.states.name(red.initial),
    });
    let text = format!("{}\n", serde_json::to_string_pretty(&doc).expect("json values serialize"));
    emit(
        ctx,
        "pomdp convert",
        &[&bytes],
        start,
        Outcome {
            outputs: doc,
            accuracy: Some(Rat::zero()),
            warnings: parsed.warnings.iter().map(|w| w.message.clone()).collect(),
            text,
        },
    );
    Ok(0)
}

pub struct SimArgs {
    pub model: PathBuf,
    pub env: String,
    pub strategy: PathBuf,
    pub runs: u64,
    pub horizon: u64,
    pub seed: u64,
    pub stats: bool,
    pub state: Option<String>,
    pub belief: String,
}

pub fn simulate(ctx: &Context, a: &SimArgs) -> CmdResult {
    let start = Instant::now();
    let (bytes, parsed) = load(&a.model)?;
    let obj = parsed.objective;
    let m = as_memdp(parsed.model)?;
    let env = m
        .environments
        .get(&a.env)
        .ok_or_else(|| CliError::Input(format!("unknown environment `{}`", a.env)))?;
    let q = state_index(&m.states, a.state.as_deref())?;
    let sbytes = read(&a.strategy)?;
    let strat = StrategySpec::parse(&String::from_utf8_lossy(&sbytes))?.resolve(&m)?;
    let est = mc_parity_estimate(&m, &obj, env, &strat, q, a.runs, a.horizon, a.seed)?;
    let mut text = format!(
        "estimate {:.6} (stderr {:.6}, {} runs, {} absorbed, bias at most {:.6})\n",
        est.estimate, est.stderr, est.runs, est.absorbed, est.bias_bound
    );
    let mut outputs = json!({
        "env": a.env,
        "state": m.states.name(q),
        "runs": est.runs,
        "horizon": a.horizon,
        "seed": a.seed,
        "estimate": {"decimal": format!("{:.6}", est.estimate), "stderr": format!("{:.6}", est.stderr)},
        "absorbed": est.absorbed,
        "bias_bound": format!("{:.6}", est.bias_bound),
    });
    let mut warnings = vec![];
    if est.bias_bound > 0.0 {
        warnings.push(format!(
            "{:.6} of the runs were not absorbed and were scored by their tail",
            est.bias_bound
        ));
    }
    if a.stats {
        let b = parse_belief(&a.belief, &m.environments)?;
        let runs = sample_runs(&m, env, &strat, q, a.runs, a.horizon, a.seed)?;
        let k = m.num_envs();
        let mut total_dstg = 0u64;
        let mut max_dstg = 0u64;
        let mut min_belief = b.weights().to_vec();
        let mut zero_operating = 0u64;
        let mut degenerate = 0u64;
        let mut rev = vec![vec![0u64; k]; k];
        for run in &runs {
            let s = belief_trace_stats(run, &b, &m);
            total_dstg += s.nb_dstg;
            max_dstg = max_dstg.max(s.nb_dstg);
            for (lo, w) in min_belief.iter_mut().zip(&s.min_belief) {
                if w < lo {
                    *lo = w.clone();
                }
            }
            if !b.get(env).is_zero() && s.min_belief[env].is_zero() {
                zero_operating += 1;
            }
            degenerate += s.degenerate_updates;
            for (row, srow) in rev.iter_mut().zip(&s.nb_rev) {
                for (x, y) in row.iter_mut().zip(srow) {
                    *x += y;
                }
            }
        }
        let n = runs.len().max(1) as f64;
        let mut mins = Map::new();
        for (e, w) in min_belief.iter().enumerate() {
            mins.insert(m.environments.name(e).to_string(), json!(fmt_rat(w)));
        }
        text.push_str(&format!(
            "distinguishing visits: mean {:.6}, max {max_dstg}\nsmallest belief per environment: {}\n\
             runs where {} lost all weight: {zero_operating}\n",
            total_dstg as f64 / n,
            Belief::new(min_belief.clone())
                .map(|x| x.display(&m.environments).to_string())
                .unwrap_or_else(|_| format!("{:?}", min_belief.iter().map(|x| x.to_string()).collect::<Vec<_>>())),
            a.env
        ));
        outputs["trace_stats"] = json!({
            "prior": b.to_json(&m.environments),
            "mean_nb_dstg": format!("{:.6}", total_dstg as f64 / n),
            "max_nb_dstg": max_dstg,
            "total_nb_rev": rev,
            "min_belief": mins,
            "operating_env_zero_runs": zero_operating,
            "degenerate_updates": degenerate,
        });
    }
    emit(
        ctx,
        "simulate",
        &[&bytes, &sbytes],
        start,
        Outcome {
            outputs,
            accuracy: None,
            warnings,
            text,
        },
    );
    Ok(0)
}
