//! Standard objects: cubes, pure transitions, boundaries, double transitions,
//! discrete systems and bare actions, plus the canonical maps between them.
//!
//! Cube corners are fixed-width bit strings (`"010"`); the single corner of
//! the 0-cube is `"()"`. The action on axis `i` (1-based) is `"label#i"`.

use std::sync::Arc;

use crate::label::Label;
use crate::map::HdtsMap;
use crate::model::{Hdts, TransitionKey};

pub const EMPTY_CORNER: &str = "()";

/// Name of the corner with bitmask `mask` (bit `i` is coordinate `i + 1`).
pub fn corner_name(n: usize, mask: usize) -> String {
    if n == 0 {
        return EMPTY_CORNER.to_string();
    }
    (0..n)
        .map(|i| if mask & (1 << i) != 0 { '1' } else { '0' })
        .collect()
}

pub fn axis_action(labels: &[Label], axis: usize) -> String {
    format!("{}#{}", labels[axis], axis + 1)
}

fn axis_actions(labels: &[Label]) -> Vec<(String, Label)> {
    (0..labels.len())
        .map(|i| (axis_action(labels, i), labels[i].clone()))
        .collect()
}

/// The n-cube on the given labels (n = `labels.len()`).
pub fn cube(labels: &[Label]) -> Hdts {
    let n = labels.len();
    let full = (1usize << n) - 1;
    let states: Vec<String> = (0..=full).map(|m| corner_name(n, m)).collect();
    let mut transitions = Vec::new();
    for from in 0..=full {
        // every nonempty subset of the zero coordinates of `from`
        let free = full & !from;
        let mut flip = free;
        while flip != 0 {
            let acts: Vec<String> = (0..n)
                .filter(|i| flip & (1 << i) != 0)
                .map(|i| axis_action(labels, i))
                .collect();
            transitions.push(TransitionKey::new(
                corner_name(n, from),
                acts,
                corner_name(n, from | flip),
            ));
            flip = (flip - 1) & free;
        }
    }
    Hdts::from_parts(states, axis_actions(labels), transitions)
}

/// The pure n-transition: two corners and a single n-transition between them.
pub fn pure_transition(labels: &[Label]) -> Hdts {
    let n = labels.len();
    let lo = corner_name(n, 0);
    let hi = corner_name(n, (1usize << n) - 1);
    let mut transitions = Vec::new();
    if n > 0 {
        let acts: Vec<String> = (0..n).map(|i| axis_action(labels, i)).collect();
        transitions.push(TransitionKey::new(lo.clone(), acts, hi.clone()));
    }
    Hdts::from_parts([lo, hi], axis_actions(labels), transitions)
}

/// The cube with its top-dimensional transition removed.
pub fn boundary(labels: &[Label]) -> Hdts {
    let n = labels.len();
    let c = cube(labels);
    let (states, actions, transitions, _) = c.into_parts();
    Hdts::from_parts(
        states,
        actions,
        transitions.into_iter().filter(|t| t.dimension() != n),
    )
}

/// One action `x` realised by the two disjoint transitions `1 → 2`, `3 → 4`.
pub fn double_transition(x: &Label) -> Hdts {
    let id = x.as_str();
    Hdts::from_parts(
        ["1", "2", "3", "4"],
        [(id, x.clone())],
        [
            TransitionKey::new("1", [id], "2"),
            TransitionKey::new("3", [id], "4"),
        ],
    )
}

pub fn discrete<S: Into<String>>(states: impl IntoIterator<Item = S>) -> Hdts {
    Hdts::from_parts(states, Vec::<(String, Label)>::new(), [])
}

/// No states, one action `x`, no transitions.
pub fn action_only(x: &Label) -> Hdts {
    Hdts::from_parts(Vec::<String>::new(), [(x.as_str(), x.clone())], [])
}

/// The inclusion of the pure n-transition into the n-cube.
pub fn ext_inclusion(labels: &[Label]) -> HdtsMap {
    HdtsMap::inclusion(Arc::new(pure_transition(labels)), Arc::new(cube(labels)))
}

/// The inclusion of the bare action `x` into the 1-cube on `x`.
pub fn action_inclusion(x: &Label) -> HdtsMap {
    let c = cube(std::slice::from_ref(x));
    let target = axis_action(std::slice::from_ref(x), 0);
    HdtsMap::from_pairs(
        Arc::new(action_only(x)),
        Arc::new(c),
        [],
        [(x.as_str(), target.as_str())],
    )
}

/// Two disjoint 1-cubes on `x` folded onto the double transition `dd{x}`.
/// The edges are `"0:0" → "0:1"` and `"1:0" → "1:1"`, with actions `"0:x#1"`
/// and `"1:x#1"`; both go to the single action of `dd{x}`.
pub fn fold_map(x: &Label) -> HdtsMap {
    let a = axis_action(std::slice::from_ref(x), 0);
    let (a0, a1) = (format!("0:{a}"), format!("1:{a}"));
    let src = Hdts::from_parts(
        ["0:0", "0:1", "1:0", "1:1"],
        [(a0.clone(), x.clone()), (a1.clone(), x.clone())],
        [
            TransitionKey::new("0:0", [a0.as_str()], "0:1"),
            TransitionKey::new("1:0", [a1.as_str()], "1:1"),
        ],
    );
    HdtsMap::from_pairs(
        Arc::new(src),
        Arc::new(double_transition(x)),
        [("0:0", "1"), ("0:1", "2"), ("1:0", "3"), ("1:1", "4")],
        [(a0.as_str(), x.as_str()), (a1.as_str(), x.as_str())],
    )
}

/// Sub-system on the given corners of the n-cube, with no actions.
pub fn cube_corners(labels: &[Label], masks: &[usize]) -> HdtsMap {
    let n = labels.len();
    let d = discrete(masks.iter().map(|&m| corner_name(n, m)));
    HdtsMap::inclusion(Arc::new(d), Arc::new(cube(labels)))
}
