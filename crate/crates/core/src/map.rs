use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{HdtsError, Result};
use crate::model::{ActionId, Hdts, StateId, TransitionKey};

/// A structure-preserving map between two systems.
///
/// Construction is unchecked; [`crate::validate::validate_map`] reports
/// missing assignments, label changes and transitions that are not preserved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HdtsMap {
    src: Arc<Hdts>,
    dst: Arc<Hdts>,
    state_map: BTreeMap<StateId, StateId>,
    action_map: BTreeMap<ActionId, ActionId>,
}

impl HdtsMap {
    pub fn new(
        src: Arc<Hdts>,
        dst: Arc<Hdts>,
        state_map: BTreeMap<StateId, StateId>,
        action_map: BTreeMap<ActionId, ActionId>,
    ) -> Self {
        HdtsMap {
            src,
            dst,
            state_map,
            action_map,
        }
    }

    /// Convenience constructor from borrowed pairs.
    pub fn from_pairs<'a>(
        src: Arc<Hdts>,
        dst: Arc<Hdts>,
        states: impl IntoIterator<Item = (&'a str, &'a str)>,
        actions: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Self {
        HdtsMap::new(
            src,
            dst,
            states
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            actions
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        )
    }

    pub fn identity(x: Arc<Hdts>) -> Self {
        let state_map = x.states().iter().map(|s| (s.clone(), s.clone())).collect();
        let action_map = x.actions().keys().map(|a| (a.clone(), a.clone())).collect();
        HdtsMap::new(x.clone(), x, state_map, action_map)
    }

    /// Inclusion of `src` into `dst` by name; both must share the ids of `src`.
    pub fn inclusion(src: Arc<Hdts>, dst: Arc<Hdts>) -> Self {
        let state_map = src
            .states()
            .iter()
            .map(|s| (s.clone(), s.clone()))
            .collect();
        let action_map = src
            .actions()
            .keys()
            .map(|a| (a.clone(), a.clone()))
            .collect();
        HdtsMap::new(src, dst, state_map, action_map)
    }

    pub fn src(&self) -> &Arc<Hdts> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<Hdts> {
        &self.dst
    }

    pub fn state_map(&self) -> &BTreeMap<StateId, StateId> {
        &self.state_map
    }

    pub fn action_map(&self) -> &BTreeMap<ActionId, ActionId> {
        &self.action_map
    }

    pub fn state(&self, s: &str) -> Option<&str> {
        self.state_map.get(s).map(String::as_str)
    }

    pub fn action(&self, a: &str) -> Option<&str> {
        self.action_map.get(a).map(String::as_str)
    }

    /// Image of a transition, re-sorted; `None` if some component is unmapped.
    pub fn image(&self, t: &TransitionKey) -> Option<TransitionKey> {
        let s = self.state(t.source())?;
        let d = self.state(t.target())?;
        let acts: Option<Vec<&str>> = t.actions().iter().map(|a| self.action(a)).collect();
        Some(TransitionKey::new(s, acts?, d))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &HdtsMap) -> Result<HdtsMap> {
        if *self.dst != *other.src {
            return Err(HdtsError::NotComposable);
        }
        let state_map = self
            .state_map
            .iter()
            .filter_map(|(k, v)| other.state(v).map(|w| (k.clone(), w.to_string())))
            .collect();
        let action_map = self
            .action_map
            .iter()
            .filter_map(|(k, v)| other.action(v).map(|w| (k.clone(), w.to_string())))
            .collect();
        Ok(HdtsMap::new(
            self.src.clone(),
            other.dst.clone(),
            state_map,
            action_map,
        ))
    }

    pub fn is_state_injective(&self) -> bool {
        is_injective(&self.state_map)
    }

    pub fn is_action_injective(&self) -> bool {
        is_injective(&self.action_map)
    }

    /// Bijective on states and actions, and the image of the transitions is
    /// exactly the target's transition set.
    pub fn is_isomorphism(&self) -> bool {
        if self.state_map.len() != self.src.states().len()
            || self.action_map.len() != self.src.actions().len()
            || self.src.states().len() != self.dst.states().len()
            || self.src.actions().len() != self.dst.actions().len()
            || self.src.transitions().len() != self.dst.transitions().len()
        {
            return false;
        }
        if !self.is_state_injective() || !self.is_action_injective() {
            return false;
        }
        let images: Option<BTreeSet<TransitionKey>> = self
            .src
            .transitions()
            .iter()
            .map(|t| self.image(t))
            .collect();
        match images {
            Some(images) => &images == self.dst.transitions(),
            None => false,
        }
    }

    /// Same assignments as `other` (domains and codomains are not compared).
    pub fn same_assignment(&self, other: &HdtsMap) -> bool {
        self.state_map == other.state_map && self.action_map == other.action_map
    }
}

fn is_injective(m: &BTreeMap<String, String>) -> bool {
    let image: BTreeSet<&String> = m.values().collect();
    image.len() == m.len()
}
