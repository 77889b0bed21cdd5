//! Open maps with respect to a set of cube paths, the greatest bisimulation
//! for 1-cube paths, and bisimilarity with span witnesses.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::builders::{corner_name, cube, discrete};
use crate::colim::{pair_id, product};
use crate::error::{HdtsError, Result};
use crate::functors::cts_coreflector;
use crate::homsearch::{enumerate_homs_arc, exists_lift, is_cubical, LiftingSquare, SearchLimits};
use crate::label::Label;
use crate::map::HdtsMap;
use crate::model::{Hdts, StateId};

/// A finite set of cube paths, each given by its axis labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathSet {
    pub paths: Vec<Vec<Label>>,
}

impl PathSet {
    pub fn new(paths: Vec<Vec<Label>>) -> Self {
        PathSet { paths }
    }

    pub fn all_one_cubes<'a>(labels: impl IntoIterator<Item = &'a Label>) -> Self {
        let set: BTreeSet<&Label> = labels.into_iter().collect();
        PathSet {
            paths: set.into_iter().map(|l| vec![l.clone()]).collect(),
        }
    }
}

/// Every path in `paths` starting at a state of the source lifts along `f`:
/// the right lifting property against `{0_n} ⊂ C_n` for each path.
pub fn is_open(f: &HdtsMap, paths: &PathSet) -> Result<bool> {
    for labels in &paths.paths {
        let c = Arc::new(cube(labels));
        let origin = corner_name(labels.len(), 0);
        let corner = Arc::new(discrete([origin.clone()]));
        let left = HdtsMap::inclusion(corner.clone(), c.clone());
        let bottoms = enumerate_homs_arc(&c, f.dst(), SearchLimits::default())?;
        if bottoms.truncated {
            return Err(HdtsError::SearchLimit(SearchLimits::default().max_nodes));
        }
        for bottom in &bottoms.maps {
            let start = bottom.state(&origin).expect("total map");
            for s in f
                .src()
                .states()
                .iter()
                .filter(|s| f.state(s) == Some(start))
            {
                let top = HdtsMap::from_pairs(
                    corner.clone(),
                    f.src().clone(),
                    [(origin.as_str(), s.as_str())],
                    [],
                );
                let square = LiftingSquare::Against {
                    left: left.clone(),
                    right: f.clone(),
                    top,
                    bottom: bottom.clone(),
                };
                if exists_lift(&square)?.is_none() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub left: Arc<Hdts>,
    pub right: Arc<Hdts>,
    pub pairs: BTreeSet<(StateId, StateId)>,
}

impl Relation {
    pub fn is_left_total(&self) -> bool {
        self.left
            .states()
            .iter()
            .all(|a| self.pairs.iter().any(|(x, _)| x == a))
    }

    pub fn is_right_total(&self) -> bool {
        self.right
            .states()
            .iter()
            .all(|b| self.pairs.iter().any(|(_, y)| y == b))
    }
}

/// Labelled 1-transitions out of each state: `state -> [(label, target)]`.
fn moves(x: &Hdts) -> BTreeMap<&str, Vec<(&Label, &str)>> {
    let mut out: BTreeMap<&str, Vec<(&Label, &str)>> = BTreeMap::new();
    for t in x.transitions_of_dimension(1) {
        let label = x.label_of(&t.actions()[0]).expect("known action");
        out.entry(t.source()).or_default().push((label, t.target()));
    }
    out
}

/// Whether every move of `a` is answered by some move of `b` landing in the
/// relation, as given by `related(a', b')`.
fn simulates(
    ma: &[(&Label, &str)],
    mb: &[(&Label, &str)],
    related: impl Fn(&str, &str) -> bool,
) -> bool {
    ma.iter()
        .all(|(l, a2)| mb.iter().any(|(k, b2)| k == l && related(a2, b2)))
}

/// Largest relation in which every 1-cube path from either side of a pair
/// is matched by an equally-labelled path from the other side ending in a
/// related pair. Computed by deleting violating pairs until stable.
pub fn greatest_bisimulation(x: &Hdts, y: &Hdts) -> Relation {
    let (mx, my) = (moves(x), moves(y));
    let none = Vec::new();
    let mut pairs: BTreeSet<(String, String)> = x
        .states()
        .iter()
        .flat_map(|a| y.states().iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    loop {
        let bad: Vec<(String, String)> = pairs
            .iter()
            .filter(|(a, b)| {
                let ma = mx.get(a.as_str()).unwrap_or(&none);
                let mb = my.get(b.as_str()).unwrap_or(&none);
                let related = |p: &str, q: &str| pairs.contains(&(p.to_string(), q.to_string()));
                !simulates(ma, mb, related) || !simulates(mb, ma, |q, p| related(p, q))
            })
            .cloned()
            .collect();
        if bad.is_empty() {
            break;
        }
        for p in bad {
            pairs.remove(&p);
        }
    }
    Relation {
        left: Arc::new(x.clone()),
        right: Arc::new(y.clone()),
        pairs,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BisimMode {
    /// Existence of a bisimulation relation, which the empty relation
    /// always provides.
    Literal,
    /// The greatest bisimulation must relate every state on both sides.
    Total,
}

/// `left: apex → X`, `right: apex → Y`.
#[derive(Clone, Debug)]
pub struct Span {
    pub apex: Arc<Hdts>,
    pub left: HdtsMap,
    pub right: HdtsMap,
}

#[derive(Clone, Debug)]
pub struct BisimResult {
    pub holds: bool,
    pub relation: Relation,
    pub span: Option<Span>,
}

/// Restriction of `X × Y` to the pairs of `r`, made cubical, with its two
/// projections.
pub fn span_from_relation(r: &Relation) -> Result<Span> {
    let p = product(&r.left, &r.right);
    let keep: BTreeSet<String> = r.pairs.iter().map(|(a, b)| pair_id(a, b)).collect();
    let restricted = Hdts::from_parts(
        keep.iter().cloned(),
        p.object
            .actions()
            .iter()
            .map(|(a, l)| (a.clone(), l.clone())),
        p.object
            .transitions()
            .iter()
            .filter(|t| keep.contains(t.source()) && keep.contains(t.target()))
            .cloned(),
    );
    let apex = cts_coreflector(&restricted)?.object;
    let leg = |proj: &HdtsMap, dst: &Arc<Hdts>| {
        HdtsMap::new(
            apex.clone(),
            dst.clone(),
            apex.states()
                .iter()
                .map(|s| (s.clone(), proj.state(s).expect("pair state").to_string()))
                .collect(),
            apex.actions()
                .keys()
                .map(|a| (a.clone(), proj.action(a).expect("pair action").to_string()))
                .collect(),
        )
    };
    Ok(Span {
        left: leg(&p.left, &r.left),
        right: leg(&p.right, &r.right),
        apex,
    })
}

/// Bisimilarity for 1-cube paths over the labels of both systems.
///
/// When the answer is positive the result carries a span whose legs have
/// been checked to be open.
pub fn bisimilar(x: &Hdts, y: &Hdts, mode: BisimMode) -> Result<BisimResult> {
    if !is_cubical(x) || !is_cubical(y) {
        return Err(HdtsError::Precondition(
            "bisimilarity is decided between cubical systems".into(),
        ));
    }
    let relation = greatest_bisimulation(x, y);
    let holds = match mode {
        BisimMode::Literal => true,
        BisimMode::Total => relation.is_left_total() && relation.is_right_total(),
    };
    let span = if holds {
        let span = span_from_relation(&relation)?;
        let labels: BTreeSet<Label> = x.sigma().union(&y.sigma()).cloned().collect();
        let paths = PathSet::all_one_cubes(&labels);
        if !is_open(&span.left, &paths)? || !is_open(&span.right, &paths)? {
            return Err(HdtsError::Precondition(
                "span legs built from the relation are not open".into(),
            ));
        }
        Some(span)
    } else {
        None
    };
    Ok(BisimResult {
        holds,
        relation,
        span,
    })
}
