//! Cylinder and path objects, the homotopy relation on maps, and the two
//! weak-equivalence deciders.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use crate::colim::{label_matchings, pair_id};
use crate::error::{HdtsError, Result};
use crate::functors::{csa1_map, cts_coreflector, label_collapse_map};
use crate::homsearch::{enumerate_homs_arc, is_cubical, SearchLimits};
use crate::label::Label;
use crate::map::HdtsMap;
use crate::model::{Hdts, TransitionKey};
use crate::validate::validate_map;

/// Three-valued answer for searches that may hit their limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Undecided,
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

#[derive(Clone, Debug)]
pub struct Cylinder {
    pub object: Arc<Hdts>,
    pub gamma0: HdtsMap,
    pub gamma1: HdtsMap,
    pub sigma: HdtsMap,
}

fn bit_action(u: &str, bit: u8) -> String {
    format!("({u},{bit})")
}

/// Same states; each action `u` becomes `(u,0)` and `(u,1)`; a transition
/// exists iff forgetting the bits gives a transition of `x`.
pub fn cylinder(x: &Hdts) -> Cylinder {
    let xa = Arc::new(x.clone());
    let mut actions = Vec::new();
    for (u, l) in x.actions() {
        for bit in [0, 1] {
            actions.push((bit_action(u, bit), l.clone()));
        }
    }
    let mut transitions = BTreeSet::new();
    for t in x.transitions() {
        let n = t.dimension();
        for mask in 0..1usize << n {
            let acts = t
                .actions()
                .iter()
                .enumerate()
                .map(|(i, u)| bit_action(u, u8::from(mask & (1 << i) != 0)));
            transitions.insert(TransitionKey::new(t.source(), acts, t.target()));
        }
    }
    let object = Arc::new(Hdts::from_parts(
        x.states().iter().cloned(),
        actions,
        transitions,
    ));
    let ids: BTreeMap<String, String> = x.states().iter().map(|s| (s.clone(), s.clone())).collect();
    let gamma = |bit: u8| {
        HdtsMap::new(
            xa.clone(),
            object.clone(),
            ids.clone(),
            x.actions()
                .keys()
                .map(|u| (u.clone(), bit_action(u, bit)))
                .collect(),
        )
    };
    let sigma = HdtsMap::new(
        object.clone(),
        xa.clone(),
        ids.clone(),
        x.actions()
            .keys()
            .flat_map(|u| [0, 1].map(|b| (bit_action(u, b), u.clone())))
            .collect(),
    );
    Cylinder {
        gamma0: gamma(0),
        gamma1: gamma(1),
        sigma,
        object,
    }
}

/// Same states; actions are pairs `(u-,u+)` of equally-labelled actions; a
/// transition exists iff each of its `2^n` mixtures is a transition of `y`.
pub fn path_object_whdts(y: &Hdts) -> Hdts {
    let mut actions = Vec::new();
    for (u, lu) in y.actions() {
        for (v, lv) in y.actions() {
            if lu == lv {
                actions.push((pair_id(u, v), lu.clone()));
            }
        }
    }
    let mut by_ends: BTreeMap<(&str, &str, usize), Vec<&TransitionKey>> = BTreeMap::new();
    for t in y.transitions() {
        by_ends
            .entry((t.source(), t.target(), t.dimension()))
            .or_default()
            .push(t);
    }
    let labelled = |t: &TransitionKey| -> Vec<(String, Label)> {
        t.actions()
            .iter()
            .map(|a| (a.clone(), y.label_of(a).expect("known action").clone()))
            .collect()
    };
    let mut transitions = BTreeSet::new();
    for ((from, to, n), ts) in &by_ends {
        for lo in ts {
            let lo_l = labelled(lo);
            let lo_r: Vec<(&str, &Label)> = lo_l.iter().map(|(a, l)| (a.as_str(), l)).collect();
            for hi in ts {
                let hi_l = labelled(hi);
                let hi_r: Vec<(&str, &Label)> = hi_l.iter().map(|(a, l)| (a.as_str(), l)).collect();
                for m in label_matchings(&lo_r, &hi_r) {
                    let all_mixtures = (0..1usize << n).all(|mask| {
                        let mix =
                            m.iter()
                                .enumerate()
                                .map(|(i, (a, b))| if mask & (1 << i) != 0 { *b } else { *a });
                        y.has_transition(&TransitionKey::new(*from, mix, *to))
                    });
                    if all_mixtures {
                        transitions.insert(TransitionKey::new(
                            *from,
                            m.iter().map(|(a, b)| pair_id(a, b)),
                            *to,
                        ));
                    }
                }
            }
        }
    }
    Hdts::from_parts(y.states().iter().cloned(), actions, transitions)
}

pub fn path_object_cts(y: &Hdts) -> Result<Hdts> {
    Ok((*cts_coreflector(&path_object_whdts(y))?.object).clone())
}

/// A map out of the cylinder restricting to `f` and `g` on its two ends.
#[derive(Clone, Debug)]
pub struct HomotopyWitness {
    pub h: HdtsMap,
    pub f: HdtsMap,
    pub g: HdtsMap,
}

/// The unique candidate `H: cyl(X) → Y` with `H∘γ0 = f`, `H∘γ1 = g`, when it
/// preserves transitions. Needs `f` and `g` to agree on states.
pub fn elementary_homotopy(f: &HdtsMap, g: &HdtsMap) -> Result<Option<HomotopyWitness>> {
    if f.src() != g.src() || f.dst() != g.dst() {
        return Err(HdtsError::Precondition(
            "maps have different domains or codomains".into(),
        ));
    }
    if f.state_map() != g.state_map() {
        return Ok(None);
    }
    let cyl = cylinder(f.src());
    let mut action_map = BTreeMap::new();
    for u in f.src().actions().keys() {
        let (Some(a), Some(b)) = (f.action(u), g.action(u)) else {
            return Err(HdtsError::UnknownAction(u.clone()));
        };
        action_map.insert(bit_action(u, 0), a.to_string());
        action_map.insert(bit_action(u, 1), b.to_string());
    }
    let h = HdtsMap::new(
        cyl.object,
        f.dst().clone(),
        f.state_map().clone(),
        action_map,
    );
    if !validate_map(&h).ok() {
        return Ok(None);
    }
    Ok(Some(HomotopyWitness {
        h,
        f: f.clone(),
        g: g.clone(),
    }))
}

/// Whether `f` and `g` are connected by a chain of elementary homotopies.
/// `Undecided` when the hom enumeration was cut short.
pub fn homotopic(f: &HdtsMap, g: &HdtsMap, limits: SearchLimits) -> Result<Verdict> {
    if f.src() != g.src() || f.dst() != g.dst() {
        return Err(HdtsError::Precondition(
            "maps have different domains or codomains".into(),
        ));
    }
    if f.same_assignment(g) {
        return Ok(Verdict::True);
    }
    if f.state_map() != g.state_map() {
        return Ok(Verdict::False);
    }
    let homs = enumerate_homs_arc(f.src(), f.dst(), limits)?;
    if homs.truncated {
        return Ok(Verdict::Undecided);
    }
    // elementary homotopies never move states, so only maps agreeing with f
    // on states can be reached
    let nodes: Vec<&HdtsMap> = homs
        .maps
        .iter()
        .filter(|h| h.state_map() == f.state_map())
        .collect();
    let Some(start) = nodes.iter().position(|h| h.same_assignment(f)) else {
        return Err(HdtsError::Precondition(
            "first map is not a valid map".into(),
        ));
    };
    let Some(goal) = nodes.iter().position(|h| h.same_assignment(g)) else {
        return Err(HdtsError::Precondition(
            "second map is not a valid map".into(),
        ));
    };
    let mut seen = vec![false; nodes.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(i) = queue.pop_front() {
        if i == goal {
            return Ok(Verdict::True);
        }
        for j in 0..nodes.len() {
            if seen[j] {
                continue;
            }
            if elementary_homotopy(nodes[i], nodes[j])?.is_some()
                || elementary_homotopy(nodes[j], nodes[i])?.is_some()
            {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    Ok(Verdict::False)
}

fn require_cubical(f: &HdtsMap) -> Result<()> {
    if !is_cubical(f.src()) || !is_cubical(f.dst()) {
        return Err(HdtsError::Precondition(
            "weak equivalences are decided between cubical systems".into(),
        ));
    }
    Ok(())
}

/// Weak equivalence of the left-determined structure: the CSA1 reflection
/// of `f` is an isomorphism.
pub fn we_left_determined(f: &HdtsMap) -> Result<bool> {
    require_cubical(f)?;
    Ok(csa1_map(f)?.is_isomorphism())
}

/// Weak equivalence of the cubification-localized structure: the label
/// collapse of `f` is an isomorphism.
pub fn we_cub_localized(f: &HdtsMap) -> Result<bool> {
    require_cubical(f)?;
    Ok(label_collapse_map(f)?.is_isomorphism())
}
