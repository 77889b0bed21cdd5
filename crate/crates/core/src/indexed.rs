//! Integer-indexed view of a system used by the search and quotient code.
//! Indices follow the sorted order of ids, so sorting index lists agrees with
//! sorting the corresponding ids.

use std::collections::{HashMap, HashSet};

use crate::error::{HdtsError, Result};
use crate::label::Label;
use crate::model::Hdts;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct IdxTransition {
    pub source: usize,
    pub actions: Vec<usize>,
    pub target: usize,
}

pub(crate) struct Indexed<'a> {
    pub states: Vec<&'a str>,
    pub actions: Vec<&'a str>,
    pub labels: Vec<&'a Label>,
    pub transitions: Vec<IdxTransition>,
    /// Encoded as `[source, target, actions...]`.
    lookup: HashSet<Vec<usize>>,
    state_index: HashMap<&'a str, usize>,
    action_index: HashMap<&'a str, usize>,
    out: HashMap<(usize, Vec<usize>), Vec<usize>>,
    inn: HashMap<(Vec<usize>, usize), Vec<usize>>,
}

impl<'a> Indexed<'a> {
    pub fn new(hdts: &'a Hdts) -> Result<Self> {
        let states: Vec<&str> = hdts.states().iter().map(String::as_str).collect();
        let actions: Vec<&str> = hdts.actions().keys().map(String::as_str).collect();
        let labels: Vec<&Label> = hdts.actions().values().collect();
        let state_index: HashMap<&str, usize> =
            states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let action_index: HashMap<&str, usize> =
            actions.iter().enumerate().map(|(i, a)| (*a, i)).collect();
        let mut transitions = Vec::with_capacity(hdts.transitions().len());
        let mut lookup = HashSet::new();
        let mut out: HashMap<(usize, Vec<usize>), Vec<usize>> = HashMap::new();
        let mut inn: HashMap<(Vec<usize>, usize), Vec<usize>> = HashMap::new();
        for t in hdts.transitions() {
            let source = *state_index
                .get(t.source())
                .ok_or_else(|| HdtsError::UnknownState(t.source().to_string()))?;
            let target = *state_index
                .get(t.target())
                .ok_or_else(|| HdtsError::UnknownState(t.target().to_string()))?;
            let acts = t
                .actions()
                .iter()
                .map(|a| {
                    action_index
                        .get(a.as_str())
                        .copied()
                        .ok_or_else(|| HdtsError::UnknownAction(a.clone()))
                })
                .collect::<Result<Vec<usize>>>()?;
            let mut key = vec![source, target];
            key.extend(&acts);
            lookup.insert(key);
            out.entry((source, acts.clone())).or_default().push(target);
            inn.entry((acts.clone(), target)).or_default().push(source);
            transitions.push(IdxTransition {
                source,
                actions: acts,
                target,
            });
        }
        Ok(Indexed {
            states,
            actions,
            labels,
            transitions,
            lookup,
            state_index,
            action_index,
            out,
            inn,
        })
    }

    pub fn state_idx(&self, s: &str) -> Option<usize> {
        self.state_index.get(s).copied()
    }

    pub fn action_idx(&self, a: &str) -> Option<usize> {
        self.action_index.get(a).copied()
    }

    pub fn has_encoded(&self, key: &[usize]) -> bool {
        self.lookup.contains(key)
    }

    pub fn targets(&self, source: usize, actions: &[usize]) -> &[usize] {
        self.out
            .get(&(source, actions.to_vec()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn sources(&self, actions: &[usize], target: usize) -> &[usize] {
        self.inn
            .get(&(actions.to_vec(), target))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}
