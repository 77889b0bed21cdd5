//! The cubical coreflector, cubification, the CSA1 reflector and the label
//! collapse, each with its structural map and its action on maps.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::closure::two_way_splits;
use crate::error::{HdtsError, Result};
use crate::homsearch::{cube_maps_indexed, is_cubical};
use crate::indexed::Indexed;
use crate::label::Label;
use crate::map::HdtsMap;
use crate::model::{ActionId, Hdts, TransitionKey};

/// One step of the construction, in the order it was applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceStep {
    DropAction(ActionId),
    DropTransition(TransitionKey),
    /// `absorbed` is identified with `kept`, then transitions are closed.
    MergeActions {
        kept: ActionId,
        absorbed: ActionId,
    },
    /// A new action made of the listed 1-transition occurrences.
    GlueEdges {
        action: ActionId,
        edges: Vec<ActionId>,
    },
}

/// Picks one of the current merge candidates by index.
pub type MergeChooser<'a> = dyn FnMut(&[(ActionId, ActionId)]) -> usize + 'a;

#[derive(Clone, Debug)]
pub struct FunctorResult {
    pub object: Arc<Hdts>,
    /// Counit `F(X) → X` for the coreflector and cubification, unit
    /// `X → F(X)` for the two quotient functors.
    pub structural_map: HdtsMap,
    pub trace: Vec<TraceStep>,
}

impl FunctorResult {
    /// Applies the trace to `x` again. `None` when the trace describes a
    /// construction that is not a quotient or restriction of `x`.
    pub fn replay(&self, x: &Hdts) -> Result<Option<Hdts>> {
        replay(&self.trace, x)
    }
}

pub fn replay(trace: &[TraceStep], x: &Hdts) -> Result<Option<Hdts>> {
    let mut cur = x.clone();
    for step in trace {
        cur = match step {
            TraceStep::DropAction(a) => {
                let (states, mut actions, transitions, sigma) = cur.into_parts();
                actions.remove(a);
                Hdts::from_parts(
                    states,
                    actions,
                    transitions.into_iter().filter(|t| !t.actions().contains(a)),
                )
                .with_declared_sigma(sigma)
            }
            TraceStep::DropTransition(t) => {
                let (states, actions, mut transitions, sigma) = cur.into_parts();
                transitions.remove(t);
                Hdts::from_parts(states, actions, transitions).with_declared_sigma(sigma)
            }
            TraceStep::MergeActions { kept, absorbed } => merge_actions(cur, kept, absorbed)?,
            TraceStep::GlueEdges { .. } => return Ok(None),
        };
    }
    Ok(Some(cur))
}

/// Identifies `absorbed` with `kept` and closes.
fn merge_actions(x: Hdts, kept: &str, absorbed: &str) -> Result<Hdts> {
    let (states, mut actions, transitions, sigma) = x.into_parts();
    actions.remove(absorbed);
    let transitions: Vec<TransitionKey> = transitions
        .into_iter()
        .map(|t| {
            let (s, acts, e) = t.into_parts();
            let acts = acts
                .into_iter()
                .map(|a| if a == absorbed { kept.to_string() } else { a });
            TransitionKey::new(s, acts, e)
        })
        .collect();
    Hdts::from_parts(states, actions, transitions)
        .with_declared_sigma(sigma)
        .close()
}

/// Transitions that are the top of some cube map: every two-way split of
/// the actions passes through an intermediate state.
fn fillable(xi: &Indexed, t: &crate::indexed::IdxTransition) -> bool {
    t.actions.len() == 1
        || two_way_splits(&t.actions).iter().all(|(b, c)| {
            let ins = xi.sources(c, t.target);
            xi.targets(t.source, b).iter().any(|m| ins.contains(m))
        })
}

/// Largest cubical sub-system: all states, the actions used in
/// 1-transitions, and the closure of the transitions that are tops of cube
/// maps. The structural map is the inclusion into `x`.
pub fn cts_coreflector(x: &Hdts) -> Result<FunctorResult> {
    let xa = Arc::new(x.clone());
    let xi = Indexed::new(&xa)?;
    let kept: Vec<TransitionKey> = xi
        .transitions
        .iter()
        .filter(|t| fillable(&xi, t))
        .map(|t| {
            TransitionKey::new(
                xi.states[t.source],
                t.actions.iter().map(|&a| xi.actions[a]),
                xi.states[t.target],
            )
        })
        .collect();
    let used: BTreeSet<&str> = x
        .transitions_of_dimension(1)
        .map(|t| t.actions()[0].as_str())
        .collect();
    let actions: Vec<(String, Label)> = x
        .actions()
        .iter()
        .filter(|(a, _)| used.contains(a.as_str()))
        .map(|(a, l)| (a.clone(), l.clone()))
        .collect();
    let object = Hdts::from_parts(x.states().iter().cloned(), actions, kept)
        .with_declared_sigma(x.declared_sigma().cloned())
        .close()?;
    let mut trace: Vec<TraceStep> = x
        .actions()
        .keys()
        .filter(|a| !used.contains(a.as_str()))
        .map(|a| TraceStep::DropAction(a.clone()))
        .collect();
    trace.extend(
        x.transitions()
            .iter()
            .filter(|t| {
                !object.has_transition(t) && t.actions().iter().all(|a| used.contains(a.as_str()))
            })
            .map(|t| TraceStep::DropTransition(t.clone())),
    );
    let object = Arc::new(object);
    Ok(FunctorResult {
        structural_map: HdtsMap::inclusion(object.clone(), xa.clone()),
        object,
        trace,
    })
}

/// The coreflector applied to `f: X → Y`, as a map between the two
/// coreflections.
pub fn cts_coreflector_map(f: &HdtsMap) -> Result<HdtsMap> {
    let cx = cts_coreflector(f.src())?.object;
    let cy = cts_coreflector(f.dst())?.object;
    let state_map = f.state_map().clone();
    let action_map = cx
        .actions()
        .keys()
        .map(|a| {
            f.action(a)
                .map(|b| (a.clone(), b.to_string()))
                .ok_or_else(|| HdtsError::UnknownAction(a.clone()))
        })
        .collect::<Result<_>>()?;
    Ok(HdtsMap::new(cx, cy, state_map, action_map))
}

fn edge_name(action: &str, from: &str, to: &str) -> String {
    format!("{action}@{from}->{to}")
}

/// Colimit of all cube maps into `x`, with its counit into `x`.
///
/// States are those of `x`. Actions are the 1-transitions of `x`, where two
/// are identified whenever they are parallel edges along one axis of a cube
/// map. Transitions are the closure of the images of the top transitions of
/// all cube maps.
pub fn cubification(x: &Hdts) -> Result<FunctorResult> {
    let xa = Arc::new(x.clone());
    let xi = Indexed::new(&xa)?;
    let cubes = cube_maps_indexed(&xi, x.max_dimension());

    let mut edges: Vec<(String, usize, usize, usize)> = xi
        .transitions
        .iter()
        .filter(|t| t.actions.len() == 1)
        .map(|t| {
            let a = t.actions[0];
            (
                edge_name(xi.actions[a], xi.states[t.source], xi.states[t.target]),
                t.source,
                a,
                t.target,
            )
        })
        .collect();
    edges.sort();
    let index: HashMap<(usize, usize, usize), usize> = edges
        .iter()
        .enumerate()
        .map(|(i, (_, s, a, t))| ((*s, *a, *t), i))
        .collect();
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let edge_at = |c: &crate::homsearch::IdxCube, axis: usize, mask: usize| -> usize {
        index[&(c.corners[mask], c.axes[axis], c.corners[mask | (1 << axis)])]
    };
    for c in cubes.iter().filter(|c| c.axes.len() >= 2) {
        let n = c.axes.len();
        for axis in 0..n {
            let first = edge_at(c, axis, 0);
            for mask in (0..1usize << n).filter(|m| m & (1 << axis) == 0) {
                let e = edge_at(c, axis, mask);
                let (ra, rb) = (find(&mut parent, first), find(&mut parent, e));
                if ra != rb {
                    let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                    parent[hi] = lo;
                }
            }
        }
    }
    let roots: Vec<usize> = (0..edges.len()).map(|i| find(&mut parent, i)).collect();
    let class_name = |i: usize| edges[roots[i]].0.clone();

    let mut transitions = BTreeSet::new();
    for c in cubes.iter().filter(|c| !c.axes.is_empty()) {
        let n = c.axes.len();
        let acts: Vec<String> = (0..n).map(|axis| class_name(edge_at(c, axis, 0))).collect();
        transitions.insert(TransitionKey::new(
            xi.states[c.corners[0]],
            acts,
            xi.states[c.corners[(1 << n) - 1]],
        ));
    }
    let mut members: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut actions = Vec::new();
    let mut action_map = BTreeMap::new();
    for (i, (name, _, a, _)) in edges.iter().enumerate() {
        members.entry(class_name(i)).or_default().push(name.clone());
        if roots[i] == i {
            actions.push((name.clone(), xi.labels[*a].clone()));
            action_map.insert(name.clone(), xi.actions[*a].to_string());
        }
    }
    let object = Hdts::from_parts(x.states().iter().cloned(), actions, transitions)
        .with_declared_sigma(x.declared_sigma().cloned())
        .close()?;
    let object = Arc::new(object);
    let state_map = x.states().iter().map(|s| (s.clone(), s.clone())).collect();
    let trace = members
        .into_iter()
        .map(|(action, edges)| TraceStep::GlueEdges { action, edges })
        .collect();
    Ok(FunctorResult {
        structural_map: HdtsMap::new(object.clone(), xa, state_map, action_map),
        object,
        trace,
    })
}

/// Pairs of distinct equally-labelled actions realising 1-transitions with
/// the same endpoints, as `(smaller, larger)`, sorted.
pub fn csa1_candidates(x: &Hdts) -> Vec<(ActionId, ActionId)> {
    let mut groups: BTreeMap<(&str, &str, &Label), BTreeSet<&str>> = BTreeMap::new();
    for t in x.transitions_of_dimension(1) {
        let a = t.actions()[0].as_str();
        if let Some(l) = x.label_of(a) {
            groups
                .entry((t.source(), t.target(), l))
                .or_default()
                .insert(a);
        }
    }
    let mut out = BTreeSet::new();
    for acts in groups.values() {
        let acts: Vec<&str> = acts.iter().copied().collect();
        for i in 0..acts.len() {
            for j in i + 1..acts.len() {
                out.insert((acts[i].to_string(), acts[j].to_string()));
            }
        }
    }
    out.into_iter().collect()
}

/// Pairs of distinct actions with the same label.
pub fn label_candidates(x: &Hdts) -> Vec<(ActionId, ActionId)> {
    let mut by_label: BTreeMap<&Label, Vec<&str>> = BTreeMap::new();
    for (a, l) in x.actions() {
        by_label.entry(l).or_default().push(a);
    }
    let mut out = Vec::new();
    for acts in by_label.values() {
        for i in 0..acts.len() {
            for j in i + 1..acts.len() {
                out.push((acts[i].to_string(), acts[j].to_string()));
            }
        }
    }
    out.sort();
    out
}

/// Repeatedly merges one candidate pair chosen by `choose` until there are
/// none left. The merged action keeps the smaller id.
fn merge_until_stable(
    x: &Hdts,
    candidates: fn(&Hdts) -> Vec<(ActionId, ActionId)>,
    choose: &mut MergeChooser,
) -> Result<FunctorResult> {
    let xa = Arc::new(x.clone());
    let mut cur = x.clone();
    let mut class: BTreeMap<ActionId, ActionId> =
        x.actions().keys().map(|a| (a.clone(), a.clone())).collect();
    let mut trace = Vec::new();
    loop {
        let cands = candidates(&cur);
        if cands.is_empty() {
            break;
        }
        let (kept, absorbed) = cands[choose(&cands) % cands.len()].clone();
        cur = merge_actions(cur, &kept, &absorbed)?;
        for v in class.values_mut() {
            if *v == absorbed {
                *v = kept.clone();
            }
        }
        trace.push(TraceStep::MergeActions { kept, absorbed });
    }
    let object = Arc::new(cur);
    let state_map = x.states().iter().map(|s| (s.clone(), s.clone())).collect();
    Ok(FunctorResult {
        structural_map: HdtsMap::new(xa, object.clone(), state_map, class),
        object,
        trace,
    })
}

/// Least quotient satisfying CSA1, with its unit `X → CSA1(X)`.
pub fn csa1_reflector(x: &Hdts) -> Result<FunctorResult> {
    csa1_reflector_by(x, &mut |_| 0)
}

/// As [`csa1_reflector`], with the merge order decided by `choose`, which
/// receives the current candidate pairs and returns an index into them.
pub fn csa1_reflector_by(x: &Hdts, choose: &mut MergeChooser) -> Result<FunctorResult> {
    merge_until_stable(x, csa1_candidates, choose)
}

/// Merges all equally-labelled actions of a cubical system, with its unit.
pub fn label_collapse(x: &Hdts) -> Result<FunctorResult> {
    label_collapse_by(x, &mut |_| 0)
}

pub fn label_collapse_by(x: &Hdts, choose: &mut MergeChooser) -> Result<FunctorResult> {
    if !is_cubical(x) {
        return Err(HdtsError::Precondition(
            "label collapse needs a cubical system (intermediate states and every action used)"
                .into(),
        ));
    }
    merge_until_stable(x, label_candidates, choose)
}

/// Map between quotients induced by `f`, given the units of both ends.
fn induced(f: &HdtsMap, ux: &FunctorResult, uy: &FunctorResult) -> Result<HdtsMap> {
    let (qx, qy) = (&ux.structural_map, &uy.structural_map);
    let mut action_map: BTreeMap<ActionId, ActionId> = BTreeMap::new();
    for a in f.src().actions().keys() {
        let img = f
            .action(a)
            .and_then(|b| qy.action(b))
            .ok_or_else(|| HdtsError::UnknownAction(a.clone()))?;
        let class = qx
            .action(a)
            .ok_or_else(|| HdtsError::UnknownAction(a.clone()))?;
        match action_map.insert(class.to_string(), img.to_string()) {
            Some(prev) if prev != img => {
                return Err(HdtsError::Precondition(format!(
                    "induced map is not well defined on action class {class}"
                )))
            }
            _ => {}
        }
    }
    Ok(HdtsMap::new(
        ux.object.clone(),
        uy.object.clone(),
        f.state_map().clone(),
        action_map,
    ))
}

pub fn csa1_map(f: &HdtsMap) -> Result<HdtsMap> {
    induced(f, &csa1_reflector(f.src())?, &csa1_reflector(f.dst())?)
}

pub fn label_collapse_map(f: &HdtsMap) -> Result<HdtsMap> {
    induced(f, &label_collapse(f.src())?, &label_collapse(f.dst())?)
}
