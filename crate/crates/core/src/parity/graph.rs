//! Strongly connected components and end components.

use crate::model::Dist;

/// Tarjan's algorithm (iterative). `succ(v, buf)` appends successors of `v`.
/// Only nodes with `alive[v]` are visited. Returns the component id of each
/// alive node (`usize::MAX` elsewhere) and the component count.
pub fn scc<F>(n: usize, alive: &[bool], mut succ: F) -> (Vec<usize>, usize)
where
    F: FnMut(usize, &mut Vec<usize>),
{
    const NONE: usize = usize::MAX;
    let mut index = vec![NONE; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![NONE; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut ncomp = 0;
    // (node, successors, cursor)
    let mut call: Vec<(usize, Vec<usize>, usize)> = Vec::new();

    for root in 0..n {
        if !alive[root] || index[root] != NONE {
            continue;
        }
        let mut buf = Vec::new();
        succ(root, &mut buf);
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, buf, 0));

        while let Some((v, succs, cursor)) = call.last_mut() {
            let v = *v;
            if *cursor < succs.len() {
                let w = succs[*cursor];
                *cursor += 1;
                if !alive[w] {
                    continue;
                }
                if index[w] == NONE {
                    let mut buf = Vec::new();
                    succ(w, &mut buf);
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, buf, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some((u, _, _)) = call.last() {
                    low[*u] = low[*u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    (comp, ncomp)
}

/// An end component: states and, per member state, the allowed action slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndComponent {
    pub states: Vec<usize>,
    /// `(state, slots)` for every member, sorted by state.
    pub actions: Vec<(usize, Vec<usize>)>,
}

/// Maximal end components of the sub-MDP induced by `subset`, using only
/// actions whose support stays inside `subset`.
pub fn mecs_within(choices: &[Vec<Dist>], subset: &[bool]) -> Vec<EndComponent> {
    let n = choices.len();
    let mut alive = subset.to_vec();
    let mut allowed: Vec<Vec<bool>> = choices
        .iter()
        .enumerate()
        .map(|(q, ds)| {
            ds.iter()
                .map(|d| alive[q] && d.iter().all(|(t, _)| alive[*t]))
                .collect()
        })
        .collect();

    loop {
        // Drop states left without actions, and actions entering dead states.
        let mut changed = true;
        while changed {
            changed = false;
            for q in 0..n {
                if alive[q] && !allowed[q].iter().any(|&b| b) {
                    alive[q] = false;
                    changed = true;
                }
            }
            if changed {
                for q in 0..n {
                    for (i, d) in choices[q].iter().enumerate() {
                        if allowed[q][i] && (!alive[q] || d.iter().any(|(t, _)| !alive[*t])) {
                            allowed[q][i] = false;
                        }
                    }
                }
            }
        }

        let (comp, _) = scc(n, &alive, |v, buf| {
            for (i, d) in choices[v].iter().enumerate() {
                if allowed[v][i] {
                    buf.extend(d.iter().map(|(t, _)| *t));
                }
            }
        });

        let mut split = false;
        for q in 0..n {
            if !alive[q] {
                continue;
            }
            for (i, d) in choices[q].iter().enumerate() {
                if allowed[q][i] && d.iter().any(|(t, _)| comp[*t] != comp[q]) {
                    allowed[q][i] = false;
                    split = true;
                }
            }
        }
        if !split {
            let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
            for q in 0..n {
                if alive[q] {
                    groups.entry(comp[q]).or_default().push(q);
                }
            }
            let mut out: Vec<EndComponent> = groups
                .into_values()
                .map(|states| {
                    let actions = states
                        .iter()
                        .map(|&q| {
                            let slots = (0..choices[q].len()).filter(|&i| allowed[q][i]).collect();
                            (q, slots)
                        })
                        .collect();
                    EndComponent { states, actions }
                })
                .collect();
            out.sort_by_key(|ec| ec.states[0]);
            return out;
        }
    }
}
