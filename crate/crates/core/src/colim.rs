//! Finite colimits, binary products and unions of subobjects.
//!
//! Colimits are computed at the level of sets (a union-find quotient of the
//! disjoint union of states and of actions), after which the images of all
//! transitions are closed under the coherence rule. Each class is
//! represented by its least member, ordered by object index and then id.
//! Output ids are the plain ids of the representatives when those are
//! pairwise distinct, and `"i:id"` (object index `i`) otherwise.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{HdtsError, Result};
use crate::homsearch::next_permutation;
use crate::label::Label;
use crate::map::HdtsMap;
use crate::model::{Hdts, TransitionKey};
use crate::validate::validate_map;

/// A colimit object together with one cocone map per diagram object.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub object: Arc<Hdts>,
    pub maps: Vec<HdtsMap>,
}

#[derive(Clone, Debug)]
pub struct Product {
    pub object: Arc<Hdts>,
    pub left: HdtsMap,
    pub right: HdtsMap,
}

#[derive(Clone, Debug)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub map: HdtsMap,
}

#[derive(Clone, Debug, Default)]
pub struct DiagramSpec {
    pub objects: Vec<Arc<Hdts>>,
    pub arrows: Vec<Arrow>,
}

impl DiagramSpec {
    pub fn new(objects: Vec<Arc<Hdts>>) -> Self {
        DiagramSpec {
            objects,
            arrows: Vec::new(),
        }
    }

    pub fn arrow(mut self, from: usize, to: usize, map: HdtsMap) -> Self {
        self.arrows.push(Arrow { from, to, map });
        self
    }

    /// Index bounds, endpoint agreement and validity of every arrow.
    pub fn check(&self) -> Result<()> {
        for (k, a) in self.arrows.iter().enumerate() {
            let (Some(src), Some(dst)) = (self.objects.get(a.from), self.objects.get(a.to)) else {
                return Err(HdtsError::Precondition(format!(
                    "arrow {k} refers to a missing object"
                )));
            };
            if a.map.src().as_ref() != src.as_ref() || a.map.dst().as_ref() != dst.as_ref() {
                return Err(HdtsError::Precondition(format!(
                    "arrow {k} does not go from object {} to object {}",
                    a.from, a.to
                )));
            }
            let report = validate_map(&a.map);
            if !report.ok() {
                return Err(HdtsError::Invalid(report));
            }
        }
        Ok(())
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    /// The smaller index becomes the root, so roots are least members.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Tagged elements `(object, id)` in sorted order, with their positions.
struct Tagged<'a> {
    elems: Vec<(usize, &'a str)>,
    pos: HashMap<(usize, &'a str), usize>,
}

impl<'a> Tagged<'a> {
    fn new(ids: impl Iterator<Item = (usize, &'a str)>) -> Self {
        let elems: Vec<(usize, &str)> = ids.collect();
        let pos = elems.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        Tagged { elems, pos }
    }

    fn at(&self, obj: usize, id: &str) -> Result<usize> {
        self.pos
            .get(&(obj, id))
            .copied()
            .ok_or_else(|| HdtsError::Precondition(format!("id {id:?} missing from object {obj}")))
    }

    /// Output name for every element, via its class representative.
    fn names(&self, uf: &mut UnionFind) -> Vec<String> {
        let roots: Vec<usize> = (0..self.elems.len()).map(|i| uf.find(i)).collect();
        let reps: BTreeSet<usize> = roots.iter().copied().collect();
        let plain: BTreeSet<&str> = reps.iter().map(|&r| self.elems[r].1).collect();
        let tag = plain.len() != reps.len();
        roots
            .iter()
            .map(|&r| {
                let (obj, id) = self.elems[r];
                if tag {
                    format!("{obj}:{id}")
                } else {
                    id.to_string()
                }
            })
            .collect()
    }
}

fn quotient(objects: &[Arc<Hdts>], arrows: &[Arrow]) -> Result<Colimit> {
    let states = Tagged::new(
        objects
            .iter()
            .enumerate()
            .flat_map(|(i, x)| x.states().iter().map(move |s| (i, s.as_str()))),
    );
    let actions = Tagged::new(
        objects
            .iter()
            .enumerate()
            .flat_map(|(i, x)| x.actions().keys().map(move |a| (i, a.as_str()))),
    );
    let mut suf = UnionFind::new(states.elems.len());
    let mut auf = UnionFind::new(actions.elems.len());
    for a in arrows {
        for (s, t) in a.map.state_map() {
            suf.union(states.at(a.from, s)?, states.at(a.to, t)?);
        }
        for (u, v) in a.map.action_map() {
            auf.union(actions.at(a.from, u)?, actions.at(a.to, v)?);
        }
    }
    let state_names = states.names(&mut suf);
    let action_names = actions.names(&mut auf);

    let mut labels: BTreeMap<&str, &Label> = BTreeMap::new();
    for (i, (obj, id)) in actions.elems.iter().enumerate() {
        let label = objects[*obj].label_of(id).expect("tagged action exists");
        match labels.insert(&action_names[i], label) {
            Some(prev) if prev != label => {
                return Err(HdtsError::Precondition(format!(
                    "action class {} mixes labels {prev} and {label}",
                    action_names[i]
                )))
            }
            _ => {}
        }
    }

    let mut transitions = BTreeSet::new();
    for (i, x) in objects.iter().enumerate() {
        for t in x.transitions() {
            let acts = t
                .actions()
                .iter()
                .map(|a| actions.at(i, a).map(|k| action_names[k].clone()))
                .collect::<Result<Vec<_>>>()?;
            transitions.insert(TransitionKey::new(
                state_names[states.at(i, t.source())?].clone(),
                acts,
                state_names[states.at(i, t.target())?].clone(),
            ));
        }
    }
    let object = Hdts::from_parts(
        state_names.iter().cloned(),
        labels.iter().map(|(a, l)| (a.to_string(), (*l).clone())),
        transitions,
    )
    .close()?;
    let object = Arc::new(object);

    let mut maps = Vec::with_capacity(objects.len());
    for (i, x) in objects.iter().enumerate() {
        let state_map = x
            .states()
            .iter()
            .map(|s| Ok((s.clone(), state_names[states.at(i, s)?].clone())))
            .collect::<Result<_>>()?;
        let action_map = x
            .actions()
            .keys()
            .map(|a| Ok((a.clone(), action_names[actions.at(i, a)?].clone())))
            .collect::<Result<_>>()?;
        maps.push(HdtsMap::new(
            x.clone(),
            object.clone(),
            state_map,
            action_map,
        ));
    }
    Ok(Colimit { object, maps })
}

pub fn coproduct(parts: &[Hdts]) -> Colimit {
    let objects: Vec<Arc<Hdts>> = parts.iter().cloned().map(Arc::new).collect();
    quotient(&objects, &[]).expect("coproduct of well-formed systems")
}

pub fn coproduct_arc(parts: &[Arc<Hdts>]) -> Result<Colimit> {
    quotient(parts, &[])
}

/// Pushout of `f: A → X` and `g: A → Y`; cocone maps are `[X → P, Y → P]`.
pub fn pushout(f: &HdtsMap, g: &HdtsMap) -> Result<Colimit> {
    if f.src() != g.src() {
        return Err(HdtsError::Precondition(
            "pushout legs have different domains".into(),
        ));
    }
    let d = DiagramSpec::new(vec![f.dst().clone(), g.dst().clone(), f.src().clone()])
        .arrow(2, 0, f.clone())
        .arrow(2, 1, g.clone());
    let mut c = colimit(&d)?;
    c.maps.truncate(2);
    Ok(c)
}

pub fn colimit(d: &DiagramSpec) -> Result<Colimit> {
    d.check()?;
    quotient(&d.objects, &d.arrows)
}

/// All label-respecting bijections between the positions of two action
/// lists, as lists of pairs, deduplicated. Empty if the label multisets
/// differ.
pub(crate) fn label_matchings<'a>(
    left: &[(&'a str, &'a Label)],
    right: &[(&'a str, &'a Label)],
) -> Vec<Vec<(&'a str, &'a str)>> {
    if left.len() != right.len() {
        return Vec::new();
    }
    let mut groups: BTreeMap<&Label, (Vec<&str>, Vec<&str>)> = BTreeMap::new();
    for (a, l) in left {
        groups.entry(*l).or_default().0.push(a);
    }
    for (b, l) in right {
        groups.entry(*l).or_default().1.push(b);
    }
    if groups.values().any(|(l, r)| l.len() != r.len()) {
        return Vec::new();
    }
    let mut results: Vec<Vec<(&str, &str)>> = vec![Vec::new()];
    for (mut ls, mut rs) in groups.into_values() {
        ls.sort_unstable();
        rs.sort_unstable();
        let mut perms = Vec::new();
        loop {
            perms.push(rs.clone());
            if !next_permutation(&mut rs) {
                break;
            }
        }
        let mut next = Vec::with_capacity(results.len() * perms.len());
        for partial in &results {
            for p in &perms {
                let mut v = partial.clone();
                v.extend(ls.iter().copied().zip(p.iter().copied()));
                next.push(v);
            }
        }
        results = next;
    }
    let mut seen = BTreeSet::new();
    results
        .into_iter()
        .filter_map(|mut v| {
            v.sort_unstable();
            seen.insert(v.clone()).then_some(v)
        })
        .collect()
}

pub(crate) fn pair_id(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

pub fn product(x: &Hdts, y: &Hdts) -> Product {
    product_arc(&Arc::new(x.clone()), &Arc::new(y.clone()))
}

pub fn product_arc(x: &Arc<Hdts>, y: &Arc<Hdts>) -> Product {
    let mut states = Vec::new();
    for a in x.states() {
        for b in y.states() {
            states.push(pair_id(a, b));
        }
    }
    let mut actions = Vec::new();
    for (u, lu) in x.actions() {
        for (v, lv) in y.actions() {
            if lu == lv {
                actions.push((pair_id(u, v), lu.clone()));
            }
        }
    }
    let mut transitions = BTreeSet::new();
    for t in x.transitions() {
        let left: Vec<(&str, &Label)> = t
            .actions()
            .iter()
            .map(|a| (a.as_str(), x.label_of(a).expect("known action")))
            .collect();
        for s in y
            .transitions()
            .iter()
            .filter(|s| s.dimension() == t.dimension())
        {
            let right: Vec<(&str, &Label)> = s
                .actions()
                .iter()
                .map(|a| (a.as_str(), y.label_of(a).expect("known action")))
                .collect();
            for m in label_matchings(&left, &right) {
                transitions.insert(TransitionKey::new(
                    pair_id(t.source(), s.source()),
                    m.iter().map(|(u, v)| pair_id(u, v)),
                    pair_id(t.target(), s.target()),
                ));
            }
        }
    }
    let object = Arc::new(Hdts::from_parts(states, actions, transitions));
    let mut lmap = (BTreeMap::new(), BTreeMap::new());
    let mut rmap = (BTreeMap::new(), BTreeMap::new());
    for a in x.states() {
        for b in y.states() {
            lmap.0.insert(pair_id(a, b), a.clone());
            rmap.0.insert(pair_id(a, b), b.clone());
        }
    }
    for (u, lu) in x.actions() {
        for (v, lv) in y.actions() {
            if lu == lv {
                lmap.1.insert(pair_id(u, v), u.clone());
                rmap.1.insert(pair_id(u, v), v.clone());
            }
        }
    }
    Product {
        left: HdtsMap::new(object.clone(), x.clone(), lmap.0, lmap.1),
        right: HdtsMap::new(object.clone(), y.clone(), rmap.0, rmap.1),
        object,
    }
}

/// Sub-system of the common codomain generated by the images of `maps`:
/// image states and actions, and the closure of the image transitions.
pub fn image_union(dst: &Arc<Hdts>, maps: &[HdtsMap]) -> Result<(Arc<Hdts>, HdtsMap)> {
    let mut states = BTreeSet::new();
    let mut actions = BTreeMap::new();
    let mut transitions = BTreeSet::new();
    for f in maps {
        if f.dst() != dst {
            return Err(HdtsError::Precondition(
                "maps do not share a codomain".into(),
            ));
        }
        for s in f.src().states() {
            let img = f
                .state(s)
                .ok_or_else(|| HdtsError::UnknownState(s.clone()))?;
            states.insert(img.to_string());
        }
        for a in f.src().actions().keys() {
            let img = f
                .action(a)
                .ok_or_else(|| HdtsError::UnknownAction(a.clone()))?;
            let label = dst
                .label_of(img)
                .ok_or_else(|| HdtsError::UnknownAction(img.to_string()))?;
            actions.insert(img.to_string(), label.clone());
        }
        for t in f.src().transitions() {
            transitions.insert(
                f.image(t)
                    .ok_or_else(|| HdtsError::UnknownState(t.to_string()))?,
            );
        }
    }
    let sub = Arc::new(Hdts::from_parts(states, actions, transitions).close()?);
    let inc = HdtsMap::inclusion(sub.clone(), dst.clone());
    Ok((sub, inc))
}

pub fn union_subobjects(dst: &Arc<Hdts>, monos: &[HdtsMap]) -> Result<(Arc<Hdts>, HdtsMap)> {
    for (k, m) in monos.iter().enumerate() {
        let report = validate_map(m);
        if !report.ok() {
            return Err(HdtsError::Invalid(report));
        }
        if !crate::checks::is_mono(m) {
            return Err(HdtsError::Precondition(format!(
                "map {k} is not a monomorphism"
            )));
        }
    }
    image_union(dst, monos)
}
