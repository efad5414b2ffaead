use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::types::{Dist, Memdp, Mdp};
use crate::rational::{fmt_rat, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub code: &'static str,
    pub message: String,
}

impl Issue {
    pub fn new(code: &'static str, message: String) -> Self {
        Issue { code, message }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.errors.is_empty() && self.warnings.is_empty()
    }

    pub fn summary(&self) -> String {
        self.errors
            .iter()
            .map(|i| i.message.as_str())
            .collect::<Vec<_>>()
            .join("; ")
    }
}

fn check_table(
    r: &mut ValidationReport,
    n: usize,
    enabled: &[Vec<usize>],
    delta: &[Vec<Dist>],
    label: &dyn Fn(usize, usize) -> String,
) {
    if delta.len() != n {
        r.errors.push(Issue::new(
            "shape",
            format!("transition table has {} rows for {} states", delta.len(), n),
        ));
        return;
    }
    for q in 0..n {
        if enabled[q].is_empty() {
            r.errors.push(Issue::new(
                "empty-actions",
                format!("{} has an empty action set", label(q, usize::MAX)),
            ));
        }
        if delta[q].len() != enabled[q].len() {
            r.errors.push(Issue::new(
                "shape",
                format!("{}: row width does not match its action set", label(q, usize::MAX)),
            ));
            continue;
        }
        for (i, d) in delta[q].iter().enumerate() {
            let a = enabled[q][i];
            let mut total = Rat::zero();
            for (t, p) in d {
                if *t >= n {
                    r.errors.push(Issue::new(
                        "dangling-state",
                        format!("{}: successor index {t} out of range", label(q, a)),
                    ));
                }
                if !p.is_positive() || p > &Rat::one() {
                    r.errors.push(Issue::new(
                        "bad-probability",
                        format!("{}: probability {} outside (0,1]", label(q, a), fmt_rat(p)),
                    ));
                }
                total += p;
            }
            if !total.is_one() {
                r.errors.push(Issue::new(
                    "bad-sum",
                    format!(
                        "{}: distribution does not sum to 1 (sum is {})",
                        label(q, a),
                        fmt_rat(&total)
                    ),
                ));
            }
        }
    }
}

pub fn validate_mdp(m: &Mdp) -> ValidationReport {
    let mut r = ValidationReport::default();
    let label = |q: usize, a: usize| {
        if a == usize::MAX {
            format!("state `{}`", m.states.name(q))
        } else {
            format!("({}, {})", m.states.name(q), m.actions.name(a))
        }
    };
    check_table(&mut r, m.num_states(), &m.enabled, &m.delta, &label);
    r
}

/// Checks the invariants of a built MEMDP.
pub fn validate(m: &Memdp) -> ValidationReport {
    let mut r = ValidationReport::default();
    if m.delta.is_empty() {
        r.errors
            .push(Issue::new("no-environments", "memdp has no environments".into()));
        return r;
    }
    if m.environments.len() != m.delta.len() {
        r.errors.push(Issue::new(
            "shape",
            "environment list and transition tables differ in length".into(),
        ));
    }
    for (e, d) in m.delta.iter().enumerate() {
        let label = |q: usize, a: usize| {
            let env = m.environments.iter().nth(e).unwrap_or("?");
            if a == usize::MAX {
                format!("state `{}` in `{env}`", m.states.name(q))
            } else {
                format!("({}, {}) in `{env}`", m.states.name(q), m.actions.name(a))
            }
        };
        check_table(&mut r, m.num_states(), &m.enabled, d, &label);
    }
    r
}
