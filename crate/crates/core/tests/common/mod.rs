//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use memdp::model::{normalize_dist, Dist, Mdp, Memdp, Names, ParityObjective, Pomdp};
use memdp::rational::rat;
use memdp::Belief;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A distribution over `targets` whose weights are multiples of `1/d`,
/// `d <= 8`.
pub fn random_dist(r: &mut impl Rng, targets: &[usize]) -> Dist {
    let size = r.gen_range(1..=targets.len().min(3));
    let picked: Vec<usize> = targets.choose_multiple(r, size).copied().collect();
    let d = r.gen_range(size as i64..=8);
    // Split d into `size` positive parts.
    let mut cuts: Vec<i64> = (1..d).collect::<Vec<_>>();
    cuts.shuffle(r);
    let mut cuts: Vec<i64> = cuts.into_iter().take(size - 1).collect();
    cuts.sort();
    let mut prev = 0;
    let mut out = Vec::with_capacity(size);
    for (i, &t) in picked.iter().enumerate() {
        let next = if i + 1 == size { d } else { cuts[i] };
        out.push((t, rat(next - prev, d)));
        prev = next;
    }
    normalize_dist(out)
}

fn random_enabled(r: &mut impl Rng, actions: usize) -> Vec<usize> {
    let mut en: Vec<usize> = (0..actions).filter(|_| r.gen_bool(0.6)).collect();
    if en.is_empty() {
        en.push(r.gen_range(0..actions));
    }
    en
}

fn names(prefix: &str, n: usize) -> Names {
    Names::new((0..n).map(|i| format!("{prefix}{i}")))
}

pub fn random_priorities(r: &mut impl Rng, n: usize, max: u32) -> ParityObjective {
    ParityObjective::new((0..n).map(|_| r.gen_range(0..=max)).collect())
}

pub fn random_mdp(r: &mut impl Rng, n: usize, actions: usize) -> Mdp {
    let all: Vec<usize> = (0..n).collect();
    let enabled: Vec<Vec<usize>> = (0..n).map(|_| random_enabled(r, actions)).collect();
    let delta = enabled
        .iter()
        .map(|en| en.iter().map(|_| random_dist(r, &all)).collect())
        .collect();
    Mdp {
        states: names("q", n),
        actions: names("a", actions),
        enabled,
        delta,
    }
}

/// Environment 0 is random; each other environment copies each row with
/// probability `1 - p_diff` and redraws it otherwise.
pub fn random_memdp(r: &mut impl Rng, n: usize, actions: usize, envs: usize, p_diff: f64) -> Memdp {
    let base = random_mdp(r, n, actions);
    let all: Vec<usize> = (0..n).collect();
    let mut delta = vec![base.delta.clone()];
    for _ in 1..envs {
        delta.push(
            base.delta
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|d| if r.gen_bool(p_diff) { random_dist(r, &all) } else { d.clone() })
                        .collect()
                })
                .collect(),
        );
    }
    Memdp {
        states: base.states,
        actions: base.actions,
        environments: names("E", envs),
        enabled: base.enabled,
        delta,
    }
}

/// Two environments over `n` states whose last `sinks` states are
/// absorbing; every distinguishing transition moves into the sinks.
pub fn random_sink_memdp(r: &mut impl Rng, n: usize, sinks: usize, actions: usize) -> Memdp {
    let live = n - sinks;
    let all: Vec<usize> = (0..n).collect();
    let sink_ids: Vec<usize> = (live..n).collect();
    let mut enabled = Vec::with_capacity(n);
    let mut d0 = Vec::with_capacity(n);
    let mut d1 = Vec::with_capacity(n);
    for q in 0..n {
        if q >= live {
            let en: Vec<usize> = (0..actions).collect();
            d0.push(en.iter().map(|_| vec![(q, rat(1, 1))]).collect());
            d1.push(en.iter().map(|_| vec![(q, rat(1, 1))]).collect());
            enabled.push(en);
            continue;
        }
        let en = random_enabled(r, actions);
        let mut r0 = Vec::new();
        let mut r1 = Vec::new();
        for _ in &en {
            if r.gen_bool(0.5) {
                let d = random_dist(r, &all);
                r0.push(d.clone());
                r1.push(d);
            } else {
                r0.push(random_dist(r, &sink_ids));
                r1.push(random_dist(r, &sink_ids));
            }
        }
        enabled.push(en);
        d0.push(r0);
        d1.push(r1);
    }
    Memdp {
        states: names("q", n),
        actions: names("a", actions),
        environments: names("E", 2),
        enabled,
        delta: vec![d0, d1],
    }
}

/// A belief with weights `x/8`, full support.
pub fn random_full_belief(r: &mut impl Rng, k: usize) -> Belief {
    loop {
        let w: Vec<i64> = (0..k).map(|_| r.gen_range(1..=8)).collect();
        let total: i64 = w.iter().sum();
        if let Ok(b) = Belief::new(w.iter().map(|&x| rat(x, total)).collect()) {
            return b;
        }
    }
}

/// A POMDP where every `(q, a)` reaches at most one state per observation.
pub fn random_dirac_preserving_pomdp(r: &mut impl Rng, n: usize, obs: usize, actions: usize) -> Pomdp {
    let o: Vec<usize> = (0..n).map(|q| if q < obs { q } else { r.gen_range(0..obs) }).collect();
    let mut enabled_by_obs: Vec<Vec<usize>> = (0..obs).map(|_| random_enabled(r, actions)).collect();
    for en in enabled_by_obs.iter_mut() {
        en.sort();
    }
    let enabled: Vec<Vec<usize>> = o.iter().map(|&x| enabled_by_obs[x].clone()).collect();
    let delta = enabled
        .iter()
        .map(|en| {
            en.iter()
                .map(|_| {
                    // One representative per observation.
                    let mut reps: Vec<usize> = Vec::new();
                    for x in 0..obs {
                        let members: Vec<usize> = (0..n).filter(|&q| o[q] == x).collect();
                        reps.push(*members.choose(r).unwrap());
                    }
                    random_dist(r, &reps)
                })
                .collect()
        })
        .collect();
    Pomdp {
        states: names("s", n),
        actions: names("a", actions),
        enabled,
        delta,
        observations: names("o", obs),
        obs: o,
    }
}

/// A POMDP with arbitrary transitions; observation classes share actions.
pub fn random_pomdp(r: &mut impl Rng, n: usize, obs: usize, actions: usize) -> Pomdp {
    let mut p = random_dirac_preserving_pomdp(r, n, obs, actions);
    let all: Vec<usize> = (0..n).collect();
    for row in p.delta.iter_mut() {
        for d in row.iter_mut() {
            *d = random_dist(r, &all);
        }
    }
    p
}
