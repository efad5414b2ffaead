//! Exact maximal reachability probabilities.

use num_traits::{One, Zero};
use std::collections::VecDeque;

use super::graph::mecs_within;
use super::linsolve::solve;
use crate::model::Dist;
use crate::rational::{to_f64, Rat};

/// States with a path of positive probability into `target`.
pub fn can_reach(choices: &[Vec<Dist>], target: &[bool]) -> Vec<bool> {
    let n = choices.len();
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (q, ds) in choices.iter().enumerate() {
        for d in ds {
            for (t, _) in d {
                pred[*t].push(q);
            }
        }
    }
    let mut seen = target.to_vec();
    let mut queue: VecDeque<usize> = (0..n).filter(|&q| target[q]).collect();
    while let Some(t) = queue.pop_front() {
        for &p in &pred[t] {
            if !seen[p] {
                seen[p] = true;
                queue.push_back(p);
            }
        }
    }
    seen
}

/// States from which `target` is reached almost surely under some strategy.
pub fn almost_sure(choices: &[Vec<Dist>], target: &[bool]) -> Vec<bool> {
    let n = choices.len();
    let mut u = vec![true; n];
    loop {
        let mut r = target.to_vec();
        loop {
            let mut grew = false;
            for q in 0..n {
                if r[q] || !u[q] {
                    continue;
                }
                let ok = choices[q].iter().any(|d| {
                    d.iter().all(|(t, _)| u[*t]) && d.iter().any(|(t, _)| r[*t])
                });
                if ok {
                    r[q] = true;
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        if r == u {
            return u;
        }
        u = r;
    }
}

/// Maximal probability of eventually reaching `target`, exactly.
pub fn max_reach(choices: &[Vec<Dist>], target: &[bool]) -> Vec<Rat> {
    let n = choices.len();
    let reach = can_reach(choices, target);
    let one = almost_sure(choices, target);
    let maybe: Vec<bool> = (0..n).map(|q| reach[q] && !one[q]).collect();
    let mut values: Vec<Rat> = (0..n)
        .map(|q| if one[q] { Rat::one() } else { Rat::zero() })
        .collect();
    if !maybe.iter().any(|&b| b) {
        return values;
    }

    // Collapse end components among the undecided states.
    let mut node = vec![usize::MAX; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for ec in mecs_within(choices, &maybe) {
        for &q in &ec.states {
            node[q] = members.len();
        }
        members.push(ec.states);
    }
    for q in 0..n {
        if maybe[q] && node[q] == usize::MAX {
            node[q] = members.len();
            members.push(vec![q]);
        }
    }
    let k = members.len();

    // Quotient actions: (node successors with probabilities, mass to `one`).
    struct Exit {
        to: Vec<(usize, Rat)>,
        win: Rat,
    }
    let exits: Vec<Vec<Exit>> = members
        .iter()
        .enumerate()
        .map(|(v, states)| {
            let mut out = Vec::new();
            for &q in states {
                for d in &choices[q] {
                    if d.iter().all(|(t, _)| node[*t] == v) {
                        continue;
                    }
                    let mut to: Vec<(usize, Rat)> = Vec::new();
                    let mut win = Rat::zero();
                    for (t, p) in d {
                        if one[*t] {
                            win += p;
                        } else if maybe[*t] {
                            match to.iter_mut().find(|(w, _)| *w == node[*t]) {
                                Some((_, acc)) => *acc += p,
                                None => to.push((node[*t], p.clone())),
                            }
                        }
                    }
                    out.push(Exit { to, win });
                }
            }
            debug_assert!(!out.is_empty(), "undecided node without exits");
            out
        })
        .collect();

    // Float value iteration picks a good starting strategy.
    let fexits: Vec<Vec<(Vec<(usize, f64)>, f64)>> = exits
        .iter()
        .map(|es| {
            es.iter()
                .map(|e| {
                    (
                        e.to.iter().map(|(w, p)| (*w, to_f64(p))).collect(),
                        to_f64(&e.win),
                    )
                })
                .collect()
        })
        .collect();
    let mut fv = vec![0.0f64; k];
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for v in 0..k {
            let best = fexits[v]
                .iter()
                .map(|(to, w)| w + to.iter().map(|(u, p)| p * fv[*u]).sum::<f64>())
                .fold(0.0, f64::max);
            delta = delta.max((best - fv[v]).abs());
            fv[v] = best;
        }
        if delta < 1e-13 {
            break;
        }
    }
    let mut strategy: Vec<usize> = (0..k)
        .map(|v| {
            let mut best = 0;
            let mut best_val = f64::NEG_INFINITY;
            for (i, (to, w)) in fexits[v].iter().enumerate() {
                let x = w + to.iter().map(|(u, p)| p * fv[*u]).sum::<f64>();
                if x > best_val + 1e-12 {
                    best_val = x;
                    best = i;
                }
            }
            best
        })
        .collect();

    // Exact policy iteration; every strategy is proper on the quotient.
    let x = loop {
        let mut a = vec![vec![Rat::zero(); k]; k];
        let mut b = vec![Rat::zero(); k];
        for v in 0..k {
            let e = &exits[v][strategy[v]];
            a[v][v] += Rat::one();
            for (w, p) in &e.to {
                a[v][*w] -= p;
            }
            b[v] = e.win.clone();
        }
        let x = solve(a, b).expect("quotient has no end components");
        let mut switched = false;
        for v in 0..k {
            let mut best = strategy[v];
            let mut best_val = x[v].clone();
            for (i, e) in exits[v].iter().enumerate() {
                let mut val = e.win.clone();
                for (w, p) in &e.to {
                    val += p * &x[*w];
                }
                if val > best_val {
                    best_val = val;
                    best = i;
                }
            }
            if best != strategy[v] {
                strategy[v] = best;
                switched = true;
            }
        }
        if !switched {
            break x;
        }
    };
    for q in 0..n {
        if maybe[q] {
            values[q] = x[node[q]].clone();
        }
    }
    values
}

/// Float value iteration for maximal reachability from below. Returns the
/// values and the last sweep's largest change.
pub fn max_reach_float(
    choices: &[Vec<Dist>],
    target: &[bool],
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, f64) {
    let n = choices.len();
    let reach = can_reach(choices, target);
    let fchoices: Vec<Vec<Vec<(usize, f64)>>> = choices
        .iter()
        .map(|ds| {
            ds.iter()
                .map(|d| d.iter().map(|(t, p)| (*t, to_f64(p))).collect())
                .collect()
        })
        .collect();
    let mut v: Vec<f64> = (0..n).map(|q| if target[q] { 1.0 } else { 0.0 }).collect();
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        residual = 0.0;
        for q in 0..n {
            if target[q] || !reach[q] {
                continue;
            }
            let best = fchoices[q]
                .iter()
                .map(|d| d.iter().map(|(t, p)| p * v[*t]).sum::<f64>())
                .fold(0.0, f64::max);
            residual = residual.max((best - v[q]).abs());
            v[q] = best;
        }
        if residual < tol {
            break;
        }
    }
    (v, residual)
}
