//! Finite weak higher dimensional transition systems.
//!
//! A transition is stored once per permutation orbit: the action list of a
//! [`TransitionKey`] is always sorted, so the multiset axiom holds by
//! construction and two keys are equal exactly when they denote the same
//! orbit of ordered transitions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::closure;
use crate::error::Result;
use crate::label::Label;

pub type StateId = String;
pub type ActionId = String;

/// Default bound on the dimension of a stored transition.
pub const DEFAULT_MAX_DIMENSION: usize = 8;

/// Canonical representative `(source, sorted action multiset, target)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionKey {
    source: StateId,
    actions: Vec<ActionId>,
    target: StateId,
}

impl TransitionKey {
    /// Builds the canonical key; the action list is sorted. An empty action
    /// list is representable so that validation can report it.
    pub fn new<S, A, I>(source: S, actions: I, target: S) -> Self
    where
        S: Into<StateId>,
        A: Into<ActionId>,
        I: IntoIterator<Item = A>,
    {
        let mut actions: Vec<ActionId> = actions.into_iter().map(Into::into).collect();
        actions.sort();
        TransitionKey {
            source: source.into(),
            actions,
            target: target.into(),
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn actions(&self) -> &[ActionId] {
        &self.actions
    }

    pub fn dimension(&self) -> usize {
        self.actions.len()
    }

    pub(crate) fn from_sorted(source: StateId, actions: Vec<ActionId>, target: StateId) -> Self {
        debug_assert!(actions.windows(2).all(|w| w[0] <= w[1]));
        TransitionKey {
            source,
            actions,
            target,
        }
    }

    pub(crate) fn into_parts(self) -> (StateId, Vec<ActionId>, StateId) {
        (self.source, self.actions, self.target)
    }
}

impl fmt::Display for TransitionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {{{}}}, {})",
            self.source,
            self.actions.join(","),
            self.target
        )
    }
}

pub(crate) type Parts = (
    BTreeSet<StateId>,
    BTreeMap<ActionId, Label>,
    BTreeSet<TransitionKey>,
    Option<BTreeSet<Label>>,
);

/// A finite weak HDTS: states, labelled actions and canonical transitions.
///
/// Construction does not validate; see [`crate::validate::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Hdts {
    states: BTreeSet<StateId>,
    actions: BTreeMap<ActionId, Label>,
    transitions: BTreeSet<TransitionKey>,
    sigma: Option<BTreeSet<Label>>,
}

impl Hdts {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_parts<S, A>(
        states: impl IntoIterator<Item = S>,
        actions: impl IntoIterator<Item = (A, Label)>,
        transitions: impl IntoIterator<Item = TransitionKey>,
    ) -> Self
    where
        S: Into<StateId>,
        A: Into<ActionId>,
    {
        Hdts {
            states: states.into_iter().map(Into::into).collect(),
            actions: actions.into_iter().map(|(a, l)| (a.into(), l)).collect(),
            transitions: transitions.into_iter().collect(),
            sigma: None,
        }
    }

    pub fn with_sigma(mut self, sigma: impl IntoIterator<Item = Label>) -> Self {
        self.sigma = Some(sigma.into_iter().collect());
        self
    }

    pub(crate) fn with_declared_sigma(mut self, sigma: Option<BTreeSet<Label>>) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn add_state(&mut self, id: impl Into<StateId>) -> &mut Self {
        self.states.insert(id.into());
        self
    }

    pub fn add_action(&mut self, id: impl Into<ActionId>, label: Label) -> &mut Self {
        self.actions.insert(id.into(), label);
        self
    }

    pub fn add_transition(&mut self, key: TransitionKey) -> &mut Self {
        self.transitions.insert(key);
        self
    }

    pub fn states(&self) -> &BTreeSet<StateId> {
        &self.states
    }

    pub fn actions(&self) -> &BTreeMap<ActionId, Label> {
        &self.actions
    }

    pub fn transitions(&self) -> &BTreeSet<TransitionKey> {
        &self.transitions
    }

    pub fn has_state(&self, id: &str) -> bool {
        self.states.contains(id)
    }

    pub fn label_of(&self, action: &str) -> Option<&Label> {
        self.actions.get(action)
    }

    pub fn has_transition(&self, key: &TransitionKey) -> bool {
        self.transitions.contains(key)
    }

    /// The declared label universe, if any.
    pub fn declared_sigma(&self) -> Option<&BTreeSet<Label>> {
        self.sigma.as_ref()
    }

    /// The declared label universe, or the labels in use when undeclared.
    pub fn sigma(&self) -> BTreeSet<Label> {
        match &self.sigma {
            Some(s) => s.clone(),
            None => self.actions.values().cloned().collect(),
        }
    }

    pub fn max_dimension(&self) -> usize {
        self.transitions
            .iter()
            .map(TransitionKey::dimension)
            .max()
            .unwrap_or(0)
    }

    pub fn transitions_of_dimension(&self, n: usize) -> impl Iterator<Item = &TransitionKey> {
        self.transitions.iter().filter(move |t| t.dimension() == n)
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty() && self.actions.is_empty()
    }

    /// Replaces the transitions by their coherence closure.
    pub fn close(self) -> Result<Hdts> {
        let transitions =
            closure::coherence_closure(&self.states, &self.actions, &self.transitions)?;
        Ok(Hdts {
            transitions,
            ..self
        })
    }

    pub(crate) fn into_parts(self) -> Parts {
        (self.states, self.actions, self.transitions, self.sigma)
    }
}
