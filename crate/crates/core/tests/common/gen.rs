//! Seeded random instances.

use std::sync::Arc;

use hdts::builders::{action_only, boundary, cube, discrete, double_transition};
use hdts::colim::{colimit, DiagramSpec};
use hdts::homsearch::{enumerate_homs_arc, is_cubical, SearchLimits};
use hdts::{Hdts, HdtsMap, Label, TransitionKey};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ALPHABET: [&str; 2] = ["a", "b"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn label(s: &str) -> Label {
    Label::new(s).unwrap()
}

pub fn random_label(rng: &mut impl Rng) -> Label {
    label(ALPHABET.choose(rng).unwrap())
}

pub fn random_labels(rng: &mut impl Rng, n: usize) -> Vec<Label> {
    (0..n).map(|_| random_label(rng)).collect()
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_states: usize,
    pub max_actions: usize,
    pub max_dim: usize,
}

pub const SMALL: Shape = Shape {
    max_states: 4,
    max_actions: 4,
    max_dim: 4,
};

/// A random seed set, unclosed. Higher transitions come with some of their
/// splittings so that the coherence rule has premises to fire on.
pub fn random_seeds(rng: &mut impl Rng, shape: Shape) -> Hdts {
    let ns = rng.gen_range(1..=shape.max_states);
    let na = rng.gen_range(1..=shape.max_actions);
    let states: Vec<String> = (0..ns).map(|i| format!("s{i}")).collect();
    let actions: Vec<(String, Label)> = (0..na)
        .map(|i| (format!("u{i}"), random_label(rng)))
        .collect();
    let ids: Vec<&str> = actions.iter().map(|(a, _)| a.as_str()).collect();
    let mut ts = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let d = rng.gen_range(1..=shape.max_dim);
        let m: Vec<&str> = if d <= na && rng.gen_bool(0.6) {
            ids.choose_multiple(rng, d).copied().collect()
        } else {
            (0..d).map(|_| *ids.choose(rng).unwrap()).collect()
        };
        let a = states.choose(rng).unwrap().as_str();
        let b = states.choose(rng).unwrap().as_str();
        ts.push(TransitionKey::new(a, m.iter().copied(), b));
        if d >= 2 {
            for _ in 0..rng.gen_range(0..=5) {
                let mask = rng.gen_range(1..(1usize << d) - 1);
                let first = (0..d).filter(|i| mask & (1 << i) != 0).map(|i| m[i]);
                let second = (0..d).filter(|i| mask & (1 << i) == 0).map(|i| m[i]);
                let nu = states.choose(rng).unwrap().as_str();
                ts.push(TransitionKey::new(a, first, nu));
                ts.push(TransitionKey::new(nu, second, b));
            }
        }
    }
    for _ in 0..rng.gen_range(0..=2) {
        let a = states.choose(rng).unwrap().as_str();
        let b = states.choose(rng).unwrap().as_str();
        ts.push(TransitionKey::new(a, [*ids.choose(rng).unwrap()], b));
    }
    Hdts::from_parts(states, actions, ts)
}

pub fn random_whdts(rng: &mut impl Rng, shape: Shape) -> Hdts {
    random_seeds(rng, shape).close().unwrap()
}

/// A small standard block: a cube, a double transition or a square boundary.
pub fn random_block(rng: &mut impl Rng, max_dim: usize) -> Hdts {
    match rng.gen_range(0..5) {
        0..=2 => {
            let n = rng.gen_range(0..=max_dim);
            cube(&random_labels(rng, n))
        }
        3 => double_transition(&random_label(rng)),
        _ if max_dim >= 2 => boundary(&random_labels(rng, 2)),
        _ => cube(&random_labels(rng, 1)),
    }
}

/// Colimit of a few blocks glued at random states (and, with `glue_actions`,
/// at random equally-labelled actions).
pub fn random_glued(
    rng: &mut impl Rng,
    max_parts: usize,
    max_dim: usize,
    glue_actions: bool,
) -> Hdts {
    let parts: Vec<Arc<Hdts>> = (0..rng.gen_range(1..=max_parts))
        .map(|_| Arc::new(random_block(rng, max_dim)))
        .collect();
    let n = parts.len();
    let mut d = DiagramSpec::new(parts.clone());
    for _ in 0..rng.gen_range(0..=n + 1) {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if rng.gen_bool(0.3) {
            // glue the ends of two equally-labelled edges, making them parallel
            let edges = |k: usize| -> Vec<(String, String, Label)> {
                parts[k]
                    .transitions_of_dimension(1)
                    .map(|t| {
                        let l = parts[k].label_of(&t.actions()[0]).unwrap().clone();
                        (t.source().to_string(), t.target().to_string(), l)
                    })
                    .collect()
            };
            let Some((s1, t1, l)) = edges(i).choose(rng).cloned() else {
                continue;
            };
            let same: Vec<_> = edges(j).into_iter().filter(|e| e.2 == l).collect();
            let Some((s2, t2, _)) = same.choose(rng).cloned() else {
                continue;
            };
            let ends = Arc::new(discrete(["p", "q"]));
            let k = d.objects.len();
            d.objects.push(ends.clone());
            d = d
                .arrow(
                    k,
                    i,
                    HdtsMap::from_pairs(
                        ends.clone(),
                        parts[i].clone(),
                        [("p", s1.as_str()), ("q", t1.as_str())],
                        [],
                    ),
                )
                .arrow(
                    k,
                    j,
                    HdtsMap::from_pairs(
                        ends,
                        parts[j].clone(),
                        [("p", s2.as_str()), ("q", t2.as_str())],
                        [],
                    ),
                );
        } else if glue_actions && rng.gen_bool(0.4) {
            let Some((u, l)) = parts[i]
                .actions()
                .iter()
                .collect::<Vec<_>>()
                .choose(rng)
                .map(|(u, l)| ((*u).clone(), (*l).clone()))
            else {
                continue;
            };
            let same: Vec<&String> = parts[j]
                .actions()
                .iter()
                .filter(|(_, k)| **k == l)
                .map(|(v, _)| v)
                .collect();
            let Some(v) = same.choose(rng) else { continue };
            let glue = Arc::new(action_only(&l));
            let k = d.objects.len();
            d.objects.push(glue.clone());
            d = d
                .arrow(
                    k,
                    i,
                    HdtsMap::from_pairs(
                        glue.clone(),
                        parts[i].clone(),
                        [],
                        [(l.as_str(), u.as_str())],
                    ),
                )
                .arrow(
                    k,
                    j,
                    HdtsMap::from_pairs(glue, parts[j].clone(), [], [(l.as_str(), v.as_str())]),
                );
        } else {
            let s = parts[i]
                .states()
                .iter()
                .collect::<Vec<_>>()
                .choose(rng)
                .map(|s| (*s).clone())
                .unwrap();
            let t = parts[j]
                .states()
                .iter()
                .collect::<Vec<_>>()
                .choose(rng)
                .map(|s| (*s).clone())
                .unwrap();
            let point = Arc::new(discrete(["p"]));
            let k = d.objects.len();
            d.objects.push(point.clone());
            d = d
                .arrow(
                    k,
                    i,
                    HdtsMap::from_pairs(point.clone(), parts[i].clone(), [("p", s.as_str())], []),
                )
                .arrow(
                    k,
                    j,
                    HdtsMap::from_pairs(point, parts[j].clone(), [("p", t.as_str())], []),
                );
        }
    }
    (*colimit(&d).unwrap().object).clone()
}

/// A random cubical system built from blocks.
pub fn random_cubical(rng: &mut impl Rng, max_parts: usize, max_dim: usize) -> Hdts {
    loop {
        let x = random_glued(rng, max_parts, max_dim, true);
        if is_cubical(&x) {
            return x;
        }
    }
}

/// Cubical or not, at most `shape` in size: either a closed random seed
/// set or a glued block, possibly perturbed.
pub fn random_instance(rng: &mut impl Rng, shape: Shape) -> Hdts {
    loop {
        let x = if rng.gen_bool(0.5) {
            random_whdts(rng, shape)
        } else {
            let x = random_glued(rng, 2, shape.max_dim.min(3), true);
            perturb(rng, x)
        };
        if x.states().len() <= shape.max_states
            && x.actions().len() <= shape.max_actions
            && x.max_dimension() <= shape.max_dim
        {
            return x;
        }
    }
}

/// Drops a transition, adds an unused action, or leaves `x` alone.
pub fn perturb(rng: &mut impl Rng, x: Hdts) -> Hdts {
    match rng.gen_range(0..4) {
        0 if !x.transitions().is_empty() => {
            let ts: Vec<TransitionKey> = x.transitions().iter().cloned().collect();
            let drop = ts.choose(rng).unwrap().clone();
            let states: Vec<String> = x.states().iter().cloned().collect();
            let actions: Vec<(String, Label)> = x
                .actions()
                .iter()
                .map(|(a, l)| (a.clone(), l.clone()))
                .collect();
            // the remaining set may need closing again, which can bring it back
            Hdts::from_parts(states, actions, ts.into_iter().filter(|t| *t != drop))
                .close()
                .unwrap()
        }
        1 => {
            let mut y = x;
            y.add_action("fresh", random_label(rng));
            y
        }
        _ => x,
    }
}

/// A random map between cubical systems, into an unrelated system, a larger
/// one, or a quotient of the source.
pub fn random_cubical_map(rng: &mut impl Rng) -> HdtsMap {
    loop {
        let x = Arc::new(random_cubical(rng, 2, 2));
        let y = match rng.gen_range(0..3) {
            0 => Arc::new(random_cubical(rng, 2, 2)),
            1 => {
                let extra = random_cubical(rng, 1, 2);
                let sum = hdts::colim::coproduct(&[(*x).clone(), extra]).object;
                Arc::new(quotient_some_actions(rng, &sum))
            }
            _ => Arc::new(quotient_some_actions(rng, &x)),
        };
        if !is_cubical(&y) {
            continue;
        }
        let homs = enumerate_homs_arc(&x, &y, SearchLimits::results(64)).unwrap();
        if let Some(f) = homs.maps.choose(rng) {
            return f.clone();
        }
    }
}

/// Merges a random subset of equally-labelled action pairs and closes.
pub fn quotient_some_actions(rng: &mut impl Rng, x: &Hdts) -> Hdts {
    let mut cur = x.clone();
    for _ in 0..rng.gen_range(0..=2) {
        let pairs = hdts::functors::label_candidates(&cur);
        let Some((kept, absorbed)) = pairs.choose(rng).cloned() else {
            break;
        };
        let states: Vec<String> = cur.states().iter().cloned().collect();
        let actions: Vec<(String, Label)> = cur
            .actions()
            .iter()
            .filter(|(a, _)| **a != absorbed)
            .map(|(a, l)| (a.clone(), l.clone()))
            .collect();
        let ts: Vec<TransitionKey> = cur
            .transitions()
            .iter()
            .map(|t| {
                TransitionKey::new(
                    t.source(),
                    t.actions().iter().map(|a| {
                        if *a == absorbed {
                            kept.as_str()
                        } else {
                            a.as_str()
                        }
                    }),
                    t.target(),
                )
            })
            .collect();
        cur = Hdts::from_parts(states, actions, ts).close().unwrap();
    }
    cur
}

/// A random cubical system in which some equally-labelled edges have had
/// their ends identified, so that they become parallel.
pub fn random_with_parallels(rng: &mut impl Rng, max_parts: usize, max_dim: usize) -> Hdts {
    loop {
        let x = Arc::new(random_cubical(rng, max_parts, max_dim));
        let edges: Vec<(String, String, Label)> = x
            .transitions_of_dimension(1)
            .map(|t| {
                (
                    t.source().to_string(),
                    t.target().to_string(),
                    x.label_of(&t.actions()[0]).unwrap().clone(),
                )
            })
            .collect();
        let ends = Arc::new(discrete(["p", "q"]));
        let mut d = DiagramSpec::new(vec![x.clone()]);
        for _ in 0..rng.gen_range(1..=2) {
            let Some((s1, t1, l)) = edges.choose(rng).cloned() else {
                break;
            };
            let same: Vec<_> = edges.iter().filter(|e| e.2 == l).collect();
            let (s2, t2, _) = same.choose(rng).unwrap();
            let k = d.objects.len();
            d.objects.push(ends.clone());
            d = d
                .arrow(
                    k,
                    0,
                    HdtsMap::from_pairs(
                        ends.clone(),
                        x.clone(),
                        [("p", s1.as_str()), ("q", t1.as_str())],
                        [],
                    ),
                )
                .arrow(
                    k,
                    0,
                    HdtsMap::from_pairs(
                        ends.clone(),
                        x.clone(),
                        [("p", s2.as_str()), ("q", t2.as_str())],
                        [],
                    ),
                );
        }
        let y = (*colimit(&d).unwrap().object).clone();
        if is_cubical(&y) {
            return y;
        }
    }
}
