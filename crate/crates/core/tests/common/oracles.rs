//! Slow reference implementations, written without the library's search
//! engine or closure code.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use hdts::builders::{cube, double_transition};
use hdts::colim::{colimit, DiagramSpec};
use hdts::{Hdts, HdtsMap, Label, TransitionKey};

type Tuple = (String, Vec<String>, String);

fn permutations(v: &[String]) -> Vec<Vec<String>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = BTreeSet::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head.clone());
            out.insert(p);
        }
    }
    out.into_iter().collect()
}

/// Closure computed on ordered action tuples, closed under permutation,
/// with the rule applied at every pair of cut points.
pub fn ordered_closure(x: &Hdts) -> BTreeSet<TransitionKey> {
    let mut set: BTreeSet<Tuple> = BTreeSet::new();
    for t in x.transitions() {
        for p in permutations(t.actions()) {
            set.insert((t.source().to_string(), p, t.target().to_string()));
        }
    }
    loop {
        let mut new = Vec::new();
        for (a, w, b) in &set {
            let n = w.len();
            for i in 1..n {
                for j in i + 1..n {
                    for n1 in x.states() {
                        if !set.contains(&(a.clone(), w[..i].to_vec(), n1.clone()))
                            || !set.contains(&(n1.clone(), w[i..].to_vec(), b.clone()))
                        {
                            continue;
                        }
                        for n2 in x.states() {
                            if set.contains(&(a.clone(), w[..j].to_vec(), n2.clone()))
                                && set.contains(&(n2.clone(), w[j..].to_vec(), b.clone()))
                            {
                                let mid = w[i..j].to_vec();
                                for p in permutations(&mid) {
                                    let t = (n1.clone(), p, n2.clone());
                                    if !set.contains(&t) {
                                        new.push(t);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        if new.is_empty() {
            break;
        }
        set.extend(new);
    }
    set.into_iter()
        .map(|(a, w, b)| TransitionKey::new(a, w, b))
        .collect()
}

pub type Assignment = (BTreeMap<String, String>, BTreeMap<String, String>);

/// All label- and transition-preserving assignments `src → dst`: every
/// action map, then states by depth-first extension.
pub fn brute_homs(src: &Hdts, dst: &Hdts) -> Vec<Assignment> {
    let acts: Vec<(&String, &Label)> = src.actions().iter().collect();
    let cands: Vec<Vec<&String>> = acts
        .iter()
        .map(|(_, l)| {
            dst.actions()
                .iter()
                .filter(|(_, k)| k == l)
                .map(|(b, _)| b)
                .collect()
        })
        .collect();
    let states: Vec<&String> = src.states().iter().collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; acts.len()];
    if cands.iter().any(Vec::is_empty) {
        return out;
    }
    loop {
        let amap: BTreeMap<String, String> = acts
            .iter()
            .zip(&choice)
            .enumerate()
            .map(|(i, ((a, _), &c))| ((*a).clone(), cands[i][c].clone()))
            .collect();
        let mut smap = BTreeMap::new();
        extend_states(src, dst, &states, &amap, &mut smap, &mut out);
        // odometer
        let mut k = 0;
        loop {
            if k == choice.len() {
                return out;
            }
            choice[k] += 1;
            if choice[k] < cands[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn extend_states(
    src: &Hdts,
    dst: &Hdts,
    states: &[&String],
    amap: &BTreeMap<String, String>,
    smap: &mut BTreeMap<String, String>,
    out: &mut Vec<Assignment>,
) {
    let Some((&s, rest)) = states.split_first() else {
        out.push((smap.clone(), amap.clone()));
        return;
    };
    for d in dst.states() {
        smap.insert(s.clone(), d.clone());
        let ok =
            src.transitions()
                .iter()
                .all(|t| match (smap.get(t.source()), smap.get(t.target())) {
                    (Some(a), Some(b)) => dst.has_transition(&TransitionKey::new(
                        a.as_str(),
                        t.actions().iter().map(|u| amap[u].as_str()),
                        b.as_str(),
                    )),
                    _ => true,
                });
        if ok {
            extend_states(src, dst, rest, amap, smap, out);
        }
        smap.remove(s);
    }
}

/// Every assignment of states and actions, kept when it preserves labels
/// and transitions. Only for tiny systems.
pub fn full_scan_hom_count(src: &Hdts, dst: &Hdts) -> usize {
    let ss: Vec<&String> = src.states().iter().collect();
    let sa: Vec<&String> = src.actions().keys().collect();
    let ds: Vec<&String> = dst.states().iter().collect();
    let da: Vec<&String> = dst.actions().keys().collect();
    if (!ss.is_empty() && ds.is_empty()) || (!sa.is_empty() && da.is_empty()) {
        return 0;
    }
    let total_s = ds.len().pow(ss.len() as u32);
    let total_a = da.len().pow(sa.len() as u32);
    let mut count = 0;
    for cs in 0..total_s {
        let smap: BTreeMap<&str, &str> = digits(cs, ds.len(), ss.len())
            .into_iter()
            .enumerate()
            .map(|(i, d)| (ss[i].as_str(), ds[d].as_str()))
            .collect();
        for ca in 0..total_a {
            let amap: BTreeMap<&str, &str> = digits(ca, da.len(), sa.len())
                .into_iter()
                .enumerate()
                .map(|(i, d)| (sa[i].as_str(), da[d].as_str()))
                .collect();
            let labels_ok = amap.iter().all(|(a, b)| src.label_of(a) == dst.label_of(b));
            let trans_ok = src.transitions().iter().all(|t| {
                dst.has_transition(&TransitionKey::new(
                    smap[t.source()],
                    t.actions().iter().map(|u| amap[u.as_str()]),
                    smap[t.target()],
                ))
            });
            if labels_ok && trans_ok {
                count += 1;
            }
        }
    }
    count
}

fn digits(mut code: usize, base: usize, len: usize) -> Vec<usize> {
    (0..len)
        .map(|_| {
            let d = code % base.max(1);
            code /= base.max(1);
            d
        })
        .collect()
}

/// Label tuples over `labels` of every length up to `max_dim`.
fn label_tuples(labels: &[Label], max_dim: usize) -> Vec<Vec<Label>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_dim {
        let mut next = Vec::new();
        for t in &layer {
            for l in labels {
                let mut t2: Vec<Label> = t.clone();
                t2.push(l.clone());
                next.push(t2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Colimit of the comma category of `types` over `x` (every map from every
/// type, and every commuting triangle between them), with the induced map
/// into `x`.
pub fn comma_colimit(x: &Hdts, types: &[Hdts]) -> (Arc<Hdts>, HdtsMap) {
    let types: Vec<Arc<Hdts>> = types.iter().cloned().map(Arc::new).collect();
    let mut objects: Vec<(usize, Assignment)> = Vec::new();
    for (i, t) in types.iter().enumerate() {
        for f in brute_homs(t, x) {
            objects.push((i, f));
        }
    }
    let mut between: HashMap<(usize, usize), Vec<Assignment>> = HashMap::new();
    let xa = Arc::new(x.clone());
    let mut diagram = DiagramSpec::new(objects.iter().map(|(i, _)| types[*i].clone()).collect());
    for (p, (ti, f)) in objects.iter().enumerate() {
        for (q, (tj, g)) in objects.iter().enumerate() {
            let homs = between
                .entry((*ti, *tj))
                .or_insert_with(|| brute_homs(&types[*ti], &types[*tj]));
            for (hs, ha) in homs.iter() {
                let commutes = hs.iter().all(|(s, t)| g.0[t] == f.0[s])
                    && ha.iter().all(|(a, b)| g.1[b] == f.1[a]);
                if commutes {
                    diagram = diagram.arrow(
                        p,
                        q,
                        HdtsMap::new(
                            types[*ti].clone(),
                            types[*tj].clone(),
                            hs.clone(),
                            ha.clone(),
                        ),
                    );
                }
            }
        }
    }
    let c = colimit(&diagram).expect("comma colimit");
    let mut smap = BTreeMap::new();
    let mut amap = BTreeMap::new();
    for ((_, f), leg) in objects.iter().zip(&c.maps) {
        for (s, t) in leg.state_map() {
            let prev = smap.insert(t.clone(), f.0[s].clone());
            assert!(
                prev.is_none_or(|p| p == f.0[s]),
                "induced map is not well defined"
            );
        }
        for (a, b) in leg.action_map() {
            let prev = amap.insert(b.clone(), f.1[a].clone());
            assert!(
                prev.is_none_or(|p| p == f.1[a]),
                "induced map is not well defined"
            );
        }
    }
    let q = HdtsMap::new(c.object.clone(), xa, smap, amap);
    (c.object, q)
}

/// Cubes on the labels of `x` up to `max_dim`, plus the double transitions.
pub fn cubical_types(x: &Hdts, max_dim: usize) -> Vec<Hdts> {
    let labels: Vec<Label> = x.sigma().into_iter().collect();
    let mut out: Vec<Hdts> = label_tuples(&labels, max_dim)
        .iter()
        .map(|t| cube(t))
        .collect();
    out.extend(labels.iter().map(double_transition));
    out
}

pub fn cube_types(x: &Hdts, max_dim: usize) -> Vec<Hdts> {
    let labels: Vec<Label> = x.sigma().into_iter().collect();
    label_tuples(&labels, max_dim)
        .iter()
        .map(|t| cube(t))
        .collect()
}

/// The sub-system of `x` that is the image of `q`.
pub fn image(q: &HdtsMap) -> Hdts {
    let x = q.dst();
    let states: BTreeSet<String> = q.state_map().values().cloned().collect();
    let actions: Vec<(String, Label)> = q
        .action_map()
        .values()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|a| (a.clone(), x.label_of(a).unwrap().clone()))
        .collect();
    Hdts::from_parts(
        states,
        actions,
        q.src().transitions().iter().map(|t| q.image(t).unwrap()),
    )
}

/// Relations between the states of `x` and `y` in which each step of
/// either side is answered on the other. Returns the union of all of them.
pub fn brute_greatest_bisimulation(x: &Hdts, y: &Hdts) -> BTreeSet<(String, String)> {
    let mx = steps(x);
    let my = steps(y);
    let all: Vec<(String, String)> = x
        .states()
        .iter()
        .flat_map(|a| y.states().iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    assert!(all.len() <= 20, "too many pairs for subset enumeration");
    let mut union = BTreeSet::new();
    for mask in 0u32..(1 << all.len()) {
        let r: BTreeSet<&(String, String)> = (0..all.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| &all[i])
            .collect();
        let answered =
            |p: &str, q: &str, mp: &[(Label, String)], mq: &[(Label, String)], flip: bool| {
                let _ = (p, q);
                mp.iter().all(|(l, p2)| {
                    mq.iter().any(|(k, q2)| {
                        let pair = if flip {
                            (q2.clone(), p2.clone())
                        } else {
                            (p2.clone(), q2.clone())
                        };
                        k == l && r.contains(&pair)
                    })
                })
            };
        let ok = r.iter().all(|(p, q)| {
            let mp = mx.get(p).map(Vec::as_slice).unwrap_or(&[]);
            let mq = my.get(q).map(Vec::as_slice).unwrap_or(&[]);
            answered(p, q, mp, mq, false) && answered(q, p, mq, mp, true)
        });
        if ok {
            union.extend(r.into_iter().cloned());
        }
    }
    union
}

/// Steps out of each state, found as maps from the labelled 1-cubes.
fn steps(x: &Hdts) -> BTreeMap<String, Vec<(Label, String)>> {
    let mut out: BTreeMap<String, Vec<(Label, String)>> = BTreeMap::new();
    for l in x.sigma() {
        let c = cube(std::slice::from_ref(&l));
        for (s, _) in brute_homs(&c, x) {
            out.entry(s["0"].clone())
                .or_default()
                .push((l.clone(), s["1"].clone()));
        }
    }
    out
}

/// Product computed from ordered action tuples: a transition of `x` read in
/// one order, against every ordering of a transition of `y` with the same
/// label word.
pub fn ordered_product(x: &Hdts, y: &Hdts) -> Hdts {
    let pid = |a: &str, b: &str| format!("({a},{b})");
    let states: Vec<String> = x
        .states()
        .iter()
        .flat_map(|a| y.states().iter().map(move |b| pid(a, b)))
        .collect();
    let actions: Vec<(String, Label)> = x
        .actions()
        .iter()
        .flat_map(|(a, l)| {
            y.actions()
                .iter()
                .filter(move |(_, k)| *k == l)
                .map(move |(b, _)| (pid(a, b), l.clone()))
        })
        .collect();
    let mut ts = Vec::new();
    for t in x.transitions() {
        for s in y
            .transitions()
            .iter()
            .filter(|s| s.dimension() == t.dimension())
        {
            for p in permutations(s.actions()) {
                let same = t
                    .actions()
                    .iter()
                    .zip(&p)
                    .all(|(u, v)| x.label_of(u) == y.label_of(v));
                if same {
                    ts.push(TransitionKey::new(
                        pid(t.source(), s.source()),
                        t.actions().iter().zip(&p).map(|(u, v)| pid(u, v)),
                        pid(t.target(), s.target()),
                    ));
                }
            }
        }
    }
    Hdts::from_parts(states, actions, ts)
}

/// Right lifting property of `x → 1` against `f`, by brute force: every map
/// from the source of `f` extends along `f`.
pub fn brute_injective(x: &Hdts, f: &HdtsMap) -> bool {
    let ext = brute_homs(f.dst(), x);
    brute_homs(f.src(), x).iter().all(|(gs, ga)| {
        ext.iter().any(|(hs, ha)| {
            f.state_map().iter().all(|(s, t)| hs[t] == gs[s])
                && f.action_map().iter().all(|(a, b)| ha[b] == ga[a])
        })
    })
}

/// Injectivity against the pure-transition inclusions of dimension 2 up to
/// `max_dim` and the action inclusions, over the labels of `x`.
pub fn cubical_by_injectivity(x: &Hdts, max_dim: usize) -> bool {
    let labels: Vec<Label> = x.sigma().into_iter().collect();
    let exts = label_tuples(&labels, max_dim)
        .into_iter()
        .filter(|t| t.len() >= 2)
        .map(|t| hdts::builders::ext_inclusion(&t));
    let acts = labels.iter().map(hdts::builders::action_inclusion);
    exts.chain(acts).all(|f| brute_injective(x, &f))
}
