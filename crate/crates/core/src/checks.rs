//! Structural predicates on systems and maps.

use std::collections::{BTreeSet, HashMap};

use crate::closure::{self, TransitionIndex};
use crate::map::HdtsMap;
use crate::model::Hdts;

fn index(x: &Hdts) -> TransitionIndex<&str, &str> {
    let mut idx = TransitionIndex::new();
    for t in x.transitions() {
        idx.insert((
            t.source(),
            t.actions().iter().map(String::as_str).collect(),
            t.target(),
        ));
    }
    idx
}

pub fn is_coherence_closed(x: &Hdts) -> bool {
    match closure::coherence_closure(x.states(), x.actions(), x.transitions()) {
        Ok(c) => &c == x.transitions(),
        Err(_) => false,
    }
}

/// Number of intermediate states for every split of every higher transition;
/// the minimum and maximum over all of them.
fn witness_range(x: &Hdts) -> Option<(usize, usize)> {
    let idx = index(x);
    let mut range: Option<(usize, usize)> = None;
    for t in x.transitions().iter().filter(|t| t.dimension() >= 2) {
        let m: Vec<&str> = t.actions().iter().map(String::as_str).collect();
        for (b, c) in closure::two_way_splits(&m) {
            let k = idx.middles(&t.source(), &b, &c, &t.target()).len();
            range = Some(match range {
                None => (k, k),
                Some((lo, hi)) => (lo.min(k), hi.max(k)),
            });
        }
    }
    range
}

/// Intermediate state axiom: every split of every higher transition passes
/// through some state.
pub fn check_isa(x: &Hdts) -> bool {
    witness_range(x).is_none_or(|(lo, _)| lo >= 1)
}

/// Unique intermediate state: every split has exactly one witness.
pub fn check_csa2(x: &Hdts) -> bool {
    witness_range(x).is_none_or(|(lo, hi)| lo == 1 && hi == 1)
}

/// Every action occurs in some 1-transition.
pub fn check_all_actions_used(x: &Hdts) -> bool {
    let used: BTreeSet<&str> = x
        .transitions_of_dimension(1)
        .map(|t| t.actions()[0].as_str())
        .collect();
    x.actions().keys().all(|a| used.contains(a.as_str()))
}

/// No two distinct equally-labelled actions realise 1-transitions with the
/// same endpoints.
pub fn check_csa1(x: &Hdts) -> bool {
    let mut seen: HashMap<(&str, &str, &crate::label::Label), &str> = HashMap::new();
    for t in x.transitions_of_dimension(1) {
        let a = t.actions()[0].as_str();
        let Some(label) = x.label_of(a) else { continue };
        match seen.insert((t.source(), t.target(), label), a) {
            Some(prev) if prev != a => return false,
            _ => {}
        }
    }
    true
}

/// Monomorphism: injective on states and on actions.
pub fn is_mono(f: &HdtsMap) -> bool {
    f.is_state_injective() && f.is_action_injective()
}

/// Cofibration: injective on actions.
pub fn is_cofibration(f: &HdtsMap) -> bool {
    f.is_action_injective()
}
