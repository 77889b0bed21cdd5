//! Coherence closure on canonical multiset transitions.
//!
//! Rule: for every `(α, M, β)` with `|M| ≥ 3`, every split `M = B ⊎ C ⊎ D`
//! into nonempty parts, and states `ν1`, `ν2` such that `(α, B, ν1)`,
//! `(ν1, C ⊎ D, β)`, `(α, B ⊎ C, ν2)` and `(ν2, D, β)` are present, the
//! transition `(ν1, C, ν2)` is present.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::hash::Hash;

use crate::error::{HdtsError, Result};
use crate::label::Label;
use crate::model::{ActionId, StateId, TransitionKey};

/// A transition over arbitrary id types, action list sorted.
pub(crate) type RawTransition<S, A> = (S, Vec<A>, S);

type Split3<A> = (Vec<A>, Vec<A>, Vec<A>);

/// Least superset of `seeds` closed under the coherence rule.
pub fn coherence_closure(
    states: &BTreeSet<StateId>,
    actions: &BTreeMap<ActionId, Label>,
    seeds: &BTreeSet<TransitionKey>,
) -> Result<BTreeSet<TransitionKey>> {
    for t in seeds {
        for s in [t.source(), t.target()] {
            if !states.contains(s) {
                return Err(HdtsError::UnknownState(s.to_string()));
            }
        }
        for a in t.actions() {
            if !actions.contains_key(a) {
                return Err(HdtsError::UnknownAction(a.clone()));
            }
        }
    }
    let raw = seeds.iter().cloned().map(TransitionKey::into_parts);
    Ok(close(raw)
        .into_iter()
        .map(|(s, a, t)| TransitionKey::from_sorted(s, a, t))
        .collect())
}

/// Splits of a sorted multiset into three nonempty sorted parts, deduplicated.
pub(crate) fn three_way_splits<A: Ord + Clone + Hash>(m: &[A]) -> Vec<(Vec<A>, Vec<A>, Vec<A>)> {
    let n = m.len();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut assign = vec![0u8; n];
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        for slot in assign.iter_mut() {
            *slot = (c % 3) as u8;
            c /= 3;
        }
        let mut parts: [Vec<A>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for (i, &slot) in assign.iter().enumerate() {
            parts[slot as usize].push(m[i].clone());
        }
        if parts.iter().any(Vec::is_empty) {
            continue;
        }
        let [b, c, d] = parts;
        if seen.insert((b.clone(), c.clone(), d.clone())) {
            out.push((b, c, d));
        }
    }
    out
}

/// Splits of a sorted multiset into two nonempty sorted parts, deduplicated.
pub(crate) fn two_way_splits<A: Ord + Clone + Hash>(m: &[A]) -> Vec<(Vec<A>, Vec<A>)> {
    let n = m.len();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 1..(1usize << n).saturating_sub(1) {
        let (mut b, mut c) = (Vec::new(), Vec::new());
        for (i, a) in m.iter().enumerate() {
            if mask & (1 << i) != 0 {
                b.push(a.clone());
            } else {
                c.push(a.clone());
            }
        }
        if seen.insert((b.clone(), c.clone())) {
            out.push((b, c));
        }
    }
    out
}

pub(crate) fn merge_sorted<A: Ord + Clone>(x: &[A], y: &[A]) -> Vec<A> {
    let mut v: Vec<A> = x.iter().chain(y).cloned().collect();
    v.sort();
    v
}

/// Transition set with source- and target-keyed indexes.
pub(crate) struct TransitionIndex<S, A> {
    set: HashSet<RawTransition<S, A>>,
    targets: HashMap<(S, Vec<A>), HashSet<S>>,
    sources: HashMap<(Vec<A>, S), HashSet<S>>,
}

impl<S, A> TransitionIndex<S, A>
where
    S: Ord + Clone + Hash,
    A: Ord + Clone + Hash,
{
    pub(crate) fn new() -> Self {
        TransitionIndex {
            set: HashSet::new(),
            targets: HashMap::new(),
            sources: HashMap::new(),
        }
    }

    pub(crate) fn insert(&mut self, t: RawTransition<S, A>) -> bool {
        if self.set.contains(&t) {
            return false;
        }
        let (s, m, d) = &t;
        self.targets
            .entry((s.clone(), m.clone()))
            .or_default()
            .insert(d.clone());
        self.sources
            .entry((m.clone(), d.clone()))
            .or_default()
            .insert(s.clone());
        self.set.insert(t)
    }

    /// States `ν` with both `(from, first, ν)` and `(ν, second, to)` present.
    pub(crate) fn middles(&self, from: &S, first: &[A], second: &[A], to: &S) -> Vec<S> {
        let (Some(outs), Some(ins)) = (
            self.targets.get(&(from.clone(), first.to_vec())),
            self.sources.get(&(second.to_vec(), to.clone())),
        ) else {
            return Vec::new();
        };
        let mut v: Vec<S> = outs.intersection(ins).cloned().collect();
        v.sort();
        v
    }

    pub(crate) fn contains(&self, t: &RawTransition<S, A>) -> bool {
        self.set.contains(t)
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = &RawTransition<S, A>> {
        self.set.iter()
    }

    pub(crate) fn into_set(self) -> HashSet<RawTransition<S, A>> {
        self.set
    }
}

/// Generic fixpoint closure. Action lists must already be sorted.
pub(crate) fn close<S, A>(
    seeds: impl IntoIterator<Item = RawTransition<S, A>>,
) -> BTreeSet<RawTransition<S, A>>
where
    S: Ord + Clone + Hash,
    A: Ord + Clone + Hash,
{
    let mut index = TransitionIndex::new();
    for t in seeds {
        index.insert(t);
    }
    let mut splits_cache: HashMap<Vec<A>, Vec<Split3<A>>> = HashMap::new();
    loop {
        let mut fresh = Vec::new();
        let mut big: Vec<RawTransition<S, A>> = index
            .iter()
            .filter(|(_, m, _)| m.len() >= 3)
            .cloned()
            .collect();
        big.sort();
        for (alpha, m, beta) in &big {
            let splits = splits_cache
                .entry(m.clone())
                .or_insert_with(|| three_way_splits(m));
            for (b, c, d) in splits.iter() {
                let cd = merge_sorted(c, d);
                let nu1s = index.middles(alpha, b, &cd, beta);
                if nu1s.is_empty() {
                    continue;
                }
                let bc = merge_sorted(b, c);
                let nu2s = index.middles(alpha, &bc, d, beta);
                for nu1 in &nu1s {
                    for nu2 in &nu2s {
                        let t = (nu1.clone(), c.clone(), nu2.clone());
                        if !index.contains(&t) {
                            fresh.push(t);
                        }
                    }
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        for t in fresh {
            index.insert(t);
        }
    }
    index.into_set().into_iter().collect()
}
