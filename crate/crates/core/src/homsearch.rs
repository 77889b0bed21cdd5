//! Enumeration of maps between finite systems, lifting and injectivity
//! checks, isomorphism search and cube-map enumeration.
//!
//! The search assigns variables (states and actions of the domain) in a
//! fixed order derived from the domain's transitions, and checks each
//! transition as soon as its last component is assigned. Every variable has
//! an explicit candidate list; lifting constraints, label preservation and
//! isomorphism invariants are all expressed by shrinking those lists.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::builders::{axis_action, corner_name, cube};
use crate::checks::{check_all_actions_used, check_isa};
use crate::error::{HdtsError, Result};
use crate::indexed::Indexed;
use crate::label::Label;
use crate::map::HdtsMap;
use crate::model::Hdts;

pub const DEFAULT_MAX_NODES: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_nodes: usize,
    pub max_results: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_nodes: DEFAULT_MAX_NODES,
            max_results: usize::MAX,
        }
    }
}

impl SearchLimits {
    pub fn results(max_results: usize) -> Self {
        SearchLimits {
            max_results,
            ..Self::default()
        }
    }
}

/// Result of an enumeration. `truncated` is set when either limit cut the
/// search short, in which case `maps` is a prefix of the full answer.
#[derive(Clone, Debug)]
pub struct HomSet {
    pub maps: Vec<HdtsMap>,
    pub truncated: bool,
}

pub(crate) struct Domains {
    pub states: Vec<Vec<usize>>,
    pub actions: Vec<Vec<usize>>,
}

impl Domains {
    /// Unconstrained apart from label preservation.
    pub fn labelled(src: &Indexed, dst: &Indexed) -> Self {
        let all: Vec<usize> = (0..dst.states.len()).collect();
        let mut by_label: HashMap<&Label, Vec<usize>> = HashMap::new();
        for (i, l) in dst.labels.iter().enumerate() {
            by_label.entry(*l).or_default().push(i);
        }
        Domains {
            states: vec![all; src.states.len()],
            actions: src
                .labels
                .iter()
                .map(|l| by_label.get(l).cloned().unwrap_or_default())
                .collect(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Flow {
    Continue,
    Stop,
}

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Outcome {
    pub truncated: bool,
}

#[derive(Clone, Copy)]
enum Var {
    State(usize),
    Action(usize),
}

const UNSET: usize = usize::MAX;

struct Engine<'a, 'b> {
    src: &'b Indexed<'a>,
    dst: &'b Indexed<'a>,
    domains: &'b Domains,
    injective: bool,
    order: Vec<Var>,
    checks: Vec<Vec<usize>>,
    states: Vec<usize>,
    actions: Vec<usize>,
    used_states: Vec<bool>,
    used_actions: Vec<bool>,
    nodes: usize,
    max_nodes: usize,
    truncated: bool,
    stopped: bool,
    buf: Vec<usize>,
}

impl<'a, 'b> Engine<'a, 'b> {
    fn new(
        src: &'b Indexed<'a>,
        dst: &'b Indexed<'a>,
        domains: &'b Domains,
        injective: bool,
        max_nodes: usize,
    ) -> Self {
        let ns = src.states.len();
        let na = src.actions.len();
        let mut pos_state = vec![UNSET; ns];
        let mut pos_action = vec![UNSET; na];
        let mut order = Vec::with_capacity(ns + na);
        let mut by_dim: Vec<usize> = (0..src.transitions.len()).collect();
        by_dim.sort_by_key(|&i| src.transitions[i].actions.len());
        for &ti in &by_dim {
            let t = &src.transitions[ti];
            for &a in &t.actions {
                if pos_action[a] == UNSET {
                    pos_action[a] = order.len();
                    order.push(Var::Action(a));
                }
            }
            for s in [t.source, t.target] {
                if pos_state[s] == UNSET {
                    pos_state[s] = order.len();
                    order.push(Var::State(s));
                }
            }
        }
        for (a, pos) in pos_action.iter_mut().enumerate() {
            if *pos == UNSET {
                *pos = order.len();
                order.push(Var::Action(a));
            }
        }
        for (s, pos) in pos_state.iter_mut().enumerate() {
            if *pos == UNSET {
                *pos = order.len();
                order.push(Var::State(s));
            }
        }
        let mut checks = vec![Vec::new(); order.len()];
        for (ti, t) in src.transitions.iter().enumerate() {
            let last = t
                .actions
                .iter()
                .map(|&a| pos_action[a])
                .chain([pos_state[t.source], pos_state[t.target]])
                .max()
                .unwrap_or(0);
            checks[last].push(ti);
        }
        Engine {
            src,
            dst,
            domains,
            injective,
            order,
            checks,
            states: vec![UNSET; ns],
            actions: vec![UNSET; na],
            used_states: vec![false; dst.states.len()],
            used_actions: vec![false; dst.actions.len()],
            nodes: 0,
            max_nodes,
            truncated: false,
            stopped: false,
            buf: Vec::new(),
        }
    }

    fn transitions_hold(&mut self, pos: usize) -> bool {
        for &ti in &self.checks[pos] {
            let t = &self.src.transitions[ti];
            self.buf.clear();
            self.buf.push(self.states[t.source]);
            self.buf.push(self.states[t.target]);
            let start = self.buf.len();
            for &a in &t.actions {
                self.buf.push(self.actions[a]);
            }
            self.buf[start..].sort_unstable();
            if !self.dst.has_encoded(&self.buf) {
                return false;
            }
        }
        true
    }

    fn run(&mut self, pos: usize, visit: &mut dyn FnMut(&[usize], &[usize]) -> Flow) {
        if self.stopped || self.truncated {
            return;
        }
        if pos == self.order.len() {
            if visit(&self.states, &self.actions) == Flow::Stop {
                self.stopped = true;
            }
            return;
        }
        let domains = self.domains;
        match self.order[pos] {
            Var::State(s) => {
                for &v in &domains.states[s] {
                    if self.injective && self.used_states[v] {
                        continue;
                    }
                    self.nodes += 1;
                    if self.nodes > self.max_nodes {
                        self.truncated = true;
                        return;
                    }
                    self.states[s] = v;
                    if self.transitions_hold(pos) {
                        if self.injective {
                            self.used_states[v] = true;
                        }
                        self.run(pos + 1, visit);
                        if self.injective {
                            self.used_states[v] = false;
                        }
                    }
                    self.states[s] = UNSET;
                    if self.stopped || self.truncated {
                        return;
                    }
                }
            }
            Var::Action(a) => {
                for &v in &domains.actions[a] {
                    if self.injective && self.used_actions[v] {
                        continue;
                    }
                    self.nodes += 1;
                    if self.nodes > self.max_nodes {
                        self.truncated = true;
                        return;
                    }
                    self.actions[a] = v;
                    if self.transitions_hold(pos) {
                        if self.injective {
                            self.used_actions[v] = true;
                        }
                        self.run(pos + 1, visit);
                        if self.injective {
                            self.used_actions[v] = false;
                        }
                    }
                    self.actions[a] = UNSET;
                    if self.stopped || self.truncated {
                        return;
                    }
                }
            }
        }
    }
}

/// Runs the backtracking search, calling `visit` on every complete map.
pub(crate) fn search(
    src: &Indexed,
    dst: &Indexed,
    domains: &Domains,
    injective: bool,
    max_nodes: usize,
    visit: &mut dyn FnMut(&[usize], &[usize]) -> Flow,
) -> Outcome {
    let mut engine = Engine::new(src, dst, domains, injective, max_nodes);
    engine.run(0, visit);
    Outcome {
        truncated: engine.truncated,
    }
}

pub(crate) fn to_map(
    src: &Indexed,
    dst: &Indexed,
    src_arc: &Arc<Hdts>,
    dst_arc: &Arc<Hdts>,
    states: &[usize],
    actions: &[usize],
) -> HdtsMap {
    let state_map: BTreeMap<String, String> = states
        .iter()
        .enumerate()
        .map(|(i, &v)| (src.states[i].to_string(), dst.states[v].to_string()))
        .collect();
    let action_map: BTreeMap<String, String> = actions
        .iter()
        .enumerate()
        .map(|(i, &v)| (src.actions[i].to_string(), dst.actions[v].to_string()))
        .collect();
    HdtsMap::new(src_arc.clone(), dst_arc.clone(), state_map, action_map)
}

fn collect(
    x: &Arc<Hdts>,
    y: &Arc<Hdts>,
    domains: impl FnOnce(&Indexed, &Indexed) -> Option<Domains>,
    injective: bool,
    limits: SearchLimits,
) -> Result<HomSet> {
    let xi = Indexed::new(x)?;
    let yi = Indexed::new(y)?;
    let Some(domains) = domains(&xi, &yi) else {
        return Ok(HomSet {
            maps: Vec::new(),
            truncated: false,
        });
    };
    let mut maps = Vec::new();
    let mut hit_cap = false;
    let outcome = search(
        &xi,
        &yi,
        &domains,
        injective,
        limits.max_nodes,
        &mut |s, a| {
            if maps.len() >= limits.max_results {
                hit_cap = true;
                return Flow::Stop;
            }
            maps.push(to_map(&xi, &yi, x, y, s, a));
            Flow::Continue
        },
    );
    Ok(HomSet {
        maps,
        truncated: outcome.truncated || hit_cap,
    })
}

/// All maps `x → y`, in a deterministic order.
pub fn enumerate_homs(x: &Hdts, y: &Hdts, limits: SearchLimits) -> Result<HomSet> {
    enumerate_homs_arc(&Arc::new(x.clone()), &Arc::new(y.clone()), limits)
}

pub fn enumerate_homs_arc(x: &Arc<Hdts>, y: &Arc<Hdts>, limits: SearchLimits) -> Result<HomSet> {
    collect(
        x,
        y,
        |xi, yi| Some(Domains::labelled(xi, yi)),
        false,
        limits,
    )
}

/// A commutative square to be filled by a diagonal `B → X`.
#[derive(Clone, Debug)]
pub enum LiftingSquare {
    /// `left: A → B`, `top: A → X`, `right: X → Y`, `bottom: B → Y`.
    Against {
        left: HdtsMap,
        right: HdtsMap,
        top: HdtsMap,
        bottom: HdtsMap,
    },
    /// Square against `X → 1`: only `left: A → B` and `top: A → X`.
    Injectivity { left: HdtsMap, top: HdtsMap },
}

impl LiftingSquare {
    fn left(&self) -> &HdtsMap {
        match self {
            LiftingSquare::Against { left, .. } | LiftingSquare::Injectivity { left, .. } => left,
        }
    }

    fn top(&self) -> &HdtsMap {
        match self {
            LiftingSquare::Against { top, .. } | LiftingSquare::Injectivity { top, .. } => top,
        }
    }

    pub fn commutes(&self) -> bool {
        let (left, top) = (self.left(), self.top());
        if left.src() != top.src() {
            return false;
        }
        let LiftingSquare::Against { right, bottom, .. } = self else {
            return true;
        };
        if left.dst() != bottom.src() || top.dst() != right.src() || right.dst() != bottom.dst() {
            return false;
        }
        let src = left.src();
        let states_ok = src.states().iter().all(|a| {
            let via_top = top.state(a).and_then(|x| right.state(x));
            let via_left = left.state(a).and_then(|b| bottom.state(b));
            via_top.is_some() && via_top == via_left
        });
        let actions_ok = src.actions().keys().all(|a| {
            let via_top = top.action(a).and_then(|x| right.action(x));
            let via_left = left.action(a).and_then(|b| bottom.action(b));
            via_top.is_some() && via_top == via_left
        });
        states_ok && actions_ok
    }
}

/// Candidate lists for a diagonal `B → X` of the square, or `None` when two
/// elements of `A` with the same image in `B` go to different places in `X`.
fn lift_domains(square: &LiftingSquare, bi: &Indexed, xi: &Indexed) -> Option<Domains> {
    let (left, top) = (square.left(), square.top());
    let mut domains = Domains::labelled(bi, xi);
    let mut fixed_states: Vec<Option<usize>> = vec![None; bi.states.len()];
    let mut fixed_actions: Vec<Option<usize>> = vec![None; bi.actions.len()];
    for (a, b) in left.state_map() {
        let bidx = bi.state_idx(b)?;
        let xidx = xi.state_idx(top.state(a)?)?;
        match fixed_states[bidx] {
            Some(prev) if prev != xidx => return None,
            _ => fixed_states[bidx] = Some(xidx),
        }
    }
    for (a, b) in left.action_map() {
        let bidx = bi.action_idx(b)?;
        let xidx = xi.action_idx(top.action(a)?)?;
        match fixed_actions[bidx] {
            Some(prev) if prev != xidx => return None,
            _ => fixed_actions[bidx] = Some(xidx),
        }
    }
    for (i, f) in fixed_states.iter().enumerate() {
        if let Some(v) = f {
            domains.states[i] = vec![*v];
        }
    }
    for (i, f) in fixed_actions.iter().enumerate() {
        if let Some(v) = f {
            domains.actions[i].retain(|c| c == v);
        }
    }
    if let LiftingSquare::Against { right, bottom, .. } = square {
        for (i, dom) in domains.states.iter_mut().enumerate() {
            let want = bottom.state(bi.states[i]);
            dom.retain(|&x| right.state(xi.states[x]) == want);
        }
        for (i, dom) in domains.actions.iter_mut().enumerate() {
            let want = bottom.action(bi.actions[i]);
            dom.retain(|&x| right.action(xi.actions[x]) == want);
        }
    }
    Some(domains)
}

/// All diagonal fillers of a commuting square.
pub fn enumerate_lifts(square: &LiftingSquare, limits: SearchLimits) -> Result<HomSet> {
    if !square.commutes() {
        return Err(HdtsError::NonCommutingSquare);
    }
    let b = square.left().dst().clone();
    let x = square.top().dst().clone();
    collect(&b, &x, |bi, xi| lift_domains(square, bi, xi), false, limits)
}

/// A diagonal filler of the square, if one exists.
pub fn exists_lift(square: &LiftingSquare) -> Result<Option<HdtsMap>> {
    let set = enumerate_lifts(square, SearchLimits::results(1))?;
    if set.maps.is_empty() && set.truncated {
        return Err(HdtsError::SearchLimit(DEFAULT_MAX_NODES));
    }
    Ok(set.maps.into_iter().next())
}

/// Every map `A → x` extends along `f: A → B`.
pub fn is_injective_wrt(x: &Hdts, f: &HdtsMap) -> Result<bool> {
    extension_counts(x, f, 1).map(|counts| counts.iter().all(|&c| c >= 1))
}

/// Every map `A → x` extends uniquely along `f: A → B`.
pub fn is_orthogonal_wrt(x: &Hdts, f: &HdtsMap) -> Result<bool> {
    extension_counts(x, f, 2).map(|counts| counts.iter().all(|&c| c == 1))
}

/// For each map `A → x`, the number of its extensions along `f`, capped.
fn extension_counts(x: &Hdts, f: &HdtsMap, cap: usize) -> Result<Vec<usize>> {
    let x = Arc::new(x.clone());
    let tops = enumerate_homs_arc(f.src(), &x, SearchLimits::default())?;
    if tops.truncated {
        return Err(HdtsError::SearchLimit(DEFAULT_MAX_NODES));
    }
    let mut counts = Vec::with_capacity(tops.maps.len());
    for top in tops.maps {
        let square = LiftingSquare::Injectivity {
            left: f.clone(),
            top,
        };
        let lifts = enumerate_lifts(&square, SearchLimits::results(cap))?;
        if lifts.truncated && lifts.maps.len() < cap {
            return Err(HdtsError::SearchLimit(DEFAULT_MAX_NODES));
        }
        counts.push(lifts.maps.len());
    }
    Ok(counts)
}

type StateSignature = Vec<(u8, usize, Vec<Label>)>;

fn state_signatures(x: &Indexed) -> Vec<StateSignature> {
    let mut sigs: Vec<StateSignature> = vec![Vec::new(); x.states.len()];
    for t in &x.transitions {
        let mut labels: Vec<Label> = t.actions.iter().map(|&a| x.labels[a].clone()).collect();
        labels.sort();
        let dim = t.actions.len();
        let kind = if t.source == t.target { 2 } else { 0 };
        sigs[t.source].push((kind, dim, labels.clone()));
        if t.source != t.target {
            sigs[t.target].push((1, dim, labels));
        }
    }
    for s in &mut sigs {
        s.sort();
    }
    sigs
}

fn action_signatures(x: &Indexed) -> Vec<(Label, Vec<usize>)> {
    let mut dims: Vec<Vec<usize>> = vec![Vec::new(); x.actions.len()];
    for t in &x.transitions {
        for &a in &t.actions {
            dims[a].push(t.actions.len());
        }
    }
    dims.iter_mut().for_each(|d| d.sort_unstable());
    x.labels.iter().map(|l| (*l).clone()).zip(dims).collect()
}

fn same_multiset<T: Ord + Clone>(a: &[T], b: &[T]) -> bool {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    a.sort();
    b.sort();
    a == b
}

/// An isomorphism `x → y`, if one exists.
pub fn is_isomorphic(x: &Hdts, y: &Hdts) -> Result<Option<HdtsMap>> {
    if x.states().len() != y.states().len()
        || x.actions().len() != y.actions().len()
        || x.transitions().len() != y.transitions().len()
    {
        return Ok(None);
    }
    let xa = Arc::new(x.clone());
    let ya = Arc::new(y.clone());
    let set = collect(
        &xa,
        &ya,
        |xi, yi| {
            let (xs, ys) = (state_signatures(xi), state_signatures(yi));
            let (xa, ya) = (action_signatures(xi), action_signatures(yi));
            if !same_multiset(&xs, &ys) || !same_multiset(&xa, &ya) {
                return None;
            }
            Some(Domains {
                states: xs
                    .iter()
                    .map(|s| (0..ys.len()).filter(|&j| &ys[j] == s).collect())
                    .collect(),
                actions: xa
                    .iter()
                    .map(|s| (0..ya.len()).filter(|&j| &ya[j] == s).collect())
                    .collect(),
            })
        },
        true,
        SearchLimits::results(1),
    )?;
    if set.maps.is_empty() && set.truncated {
        return Err(HdtsError::SearchLimit(DEFAULT_MAX_NODES));
    }
    Ok(set.maps.into_iter().next())
}

/// A map from the cube on `labels` into some system.
#[derive(Clone, Debug)]
pub struct CubeMap {
    pub labels: Vec<Label>,
    pub map: HdtsMap,
}

impl CubeMap {
    pub fn dimension(&self) -> usize {
        self.labels.len()
    }
}

/// Index form of a cube map: the action on each axis and the state at each
/// corner (indexed by bitmask).
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IdxCube {
    pub axes: Vec<usize>,
    pub corners: Vec<usize>,
}

pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All cube maps into `x` up to dimension `max_dim`.
///
/// Each cube map of dimension `n ≥ 1` sends the top transition onto some
/// n-transition of `x`; fixing that and an ordering of its actions along the
/// axes, a corner assignment is a map iff every transition leaving `0_n` or
/// entering `1_n` is preserved. Those conditions involve one free corner
/// each, so the corner candidates are independent and the maps are their
/// cartesian product.
pub(crate) fn cube_maps_indexed(x: &Indexed, max_dim: usize) -> Vec<IdxCube> {
    let mut out: Vec<IdxCube> = (0..x.states.len())
        .map(|s| IdxCube {
            axes: Vec::new(),
            corners: vec![s],
        })
        .collect();
    for t in &x.transitions {
        let n = t.actions.len();
        if n == 0 || n > max_dim {
            continue;
        }
        let full = (1usize << n) - 1;
        let mut axes = t.actions.clone();
        loop {
            let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(full + 1);
            let mut dead = false;
            for mask in 0..=full {
                let cands = if mask == 0 {
                    vec![t.source]
                } else if mask == full {
                    vec![t.target]
                } else {
                    let mut b: Vec<usize> = (0..n)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| axes[i])
                        .collect();
                    let mut c: Vec<usize> = (0..n)
                        .filter(|i| mask & (1 << i) == 0)
                        .map(|i| axes[i])
                        .collect();
                    b.sort_unstable();
                    c.sort_unstable();
                    let ins = x.sources(&c, t.target);
                    let mut v: Vec<usize> = x
                        .targets(t.source, &b)
                        .iter()
                        .copied()
                        .filter(|s| ins.contains(s))
                        .collect();
                    v.sort_unstable();
                    v.dedup();
                    v
                };
                if cands.is_empty() {
                    dead = true;
                    break;
                }
                candidates.push(cands);
            }
            if !dead {
                let mut pick = vec![0usize; full + 1];
                loop {
                    out.push(IdxCube {
                        axes: axes.clone(),
                        corners: pick
                            .iter()
                            .enumerate()
                            .map(|(m, &k)| candidates[m][k])
                            .collect(),
                    });
                    let mut m = 0;
                    while m <= full {
                        pick[m] += 1;
                        if pick[m] < candidates[m].len() {
                            break;
                        }
                        pick[m] = 0;
                        m += 1;
                    }
                    if m > full {
                        break;
                    }
                }
            }
            if !next_permutation(&mut axes) {
                break;
            }
        }
    }
    out
}

pub(crate) fn cube_to_map(
    x: &Indexed,
    x_arc: &Arc<Hdts>,
    cube_cache: &mut HashMap<Vec<Label>, Arc<Hdts>>,
    c: &IdxCube,
) -> CubeMap {
    let labels: Vec<Label> = c.axes.iter().map(|&a| x.labels[a].clone()).collect();
    let n = labels.len();
    let dom = cube_cache
        .entry(labels.clone())
        .or_insert_with(|| Arc::new(cube(&labels)))
        .clone();
    let state_map = c
        .corners
        .iter()
        .enumerate()
        .map(|(mask, &s)| (corner_name(n, mask), x.states[s].to_string()))
        .collect();
    let action_map = c
        .axes
        .iter()
        .enumerate()
        .map(|(i, &a)| (axis_action(&labels, i), x.actions[a].to_string()))
        .collect();
    CubeMap {
        labels,
        map: HdtsMap::new(dom, x_arc.clone(), state_map, action_map),
    }
}

/// Every cube map into `x`, of every dimension up to the largest transition.
pub fn enumerate_cube_maps(x: &Hdts) -> Result<Vec<CubeMap>> {
    let xa = Arc::new(x.clone());
    let xi = Indexed::new(&xa)?;
    let mut cache = HashMap::new();
    Ok(cube_maps_indexed(&xi, x.max_dimension())
        .iter()
        .map(|c| cube_to_map(&xi, &xa, &mut cache, c))
        .collect())
}

/// Union of subcubes: intermediate state axiom plus every action used.
pub fn is_cubical(x: &Hdts) -> bool {
    check_isa(x) && check_all_actions_used(x)
}
