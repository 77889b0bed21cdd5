use std::fmt;

use crate::closure;
use crate::label::is_valid_token;
use crate::map::HdtsMap;
use crate::model::{Hdts, DEFAULT_MAX_DIMENSION};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: &'static str,
    pub element: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    fn push(&mut self, rule: &'static str, element: impl fmt::Display) {
        self.violations.push(Violation {
            rule,
            element: element.to_string(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", v.rule, v.element)?;
        }
        Ok(())
    }
}

pub fn validate(x: &Hdts) -> ValidationReport {
    validate_with_cap(x, DEFAULT_MAX_DIMENSION)
}

/// Full check: ids, references, dimension cap, labels against sigma, and
/// closure under the coherence rule (skipped if references are broken).
pub fn validate_with_cap(x: &Hdts, cap: usize) -> ValidationReport {
    let mut report = structural(x, cap);
    if report.ok() && !is_closed(x) {
        report.push(
            "coherence",
            "transition set is not closed under the coherence rule",
        );
    }
    report
}

/// Everything except the coherence check.
pub(crate) fn structural(x: &Hdts, cap: usize) -> ValidationReport {
    let mut report = ValidationReport::default();
    for s in x.states() {
        if !is_valid_token(s) {
            report.push("invalid-id", format!("state {s:?}"));
        }
    }
    for a in x.actions().keys() {
        if !is_valid_token(a) {
            report.push("invalid-id", format!("action {a:?}"));
        }
    }
    if let Some(sigma) = x.declared_sigma() {
        for (a, l) in x.actions() {
            if !sigma.contains(l) {
                report.push("label-not-in-sigma", format!("{a} labelled {l}"));
            }
        }
    }
    for t in x.transitions() {
        if t.dimension() == 0 {
            report.push("empty-transition", t);
        }
        if t.dimension() > cap {
            report.push("dimension-cap", t);
        }
        for s in [t.source(), t.target()] {
            if !x.has_state(s) {
                report.push("unknown-state", format!("{s} in {t}"));
            }
        }
        for a in t.actions() {
            if x.label_of(a).is_none() {
                report.push("unknown-action", format!("{a} in {t}"));
            }
        }
    }
    report
}

fn is_closed(x: &Hdts) -> bool {
    match closure::coherence_closure(x.states(), x.actions(), x.transitions()) {
        Ok(c) => &c == x.transitions(),
        Err(_) => false,
    }
}

pub fn validate_map(f: &HdtsMap) -> ValidationReport {
    let mut report = ValidationReport::default();
    let (src, dst) = (f.src(), f.dst());
    for s in src.states() {
        match f.state(s) {
            None => report.push("state-map-total", s),
            Some(img) if !dst.has_state(img) => {
                report.push("unknown-state-image", format!("{s} -> {img}"))
            }
            _ => {}
        }
    }
    for (a, label) in src.actions() {
        match f.action(a) {
            None => report.push("action-map-total", a),
            Some(img) => match dst.label_of(img) {
                None => report.push("unknown-action-image", format!("{a} -> {img}")),
                Some(l) if l != label => report.push(
                    "label-preservation",
                    format!("{a} ({label}) -> {img} ({l})"),
                ),
                _ => {}
            },
        }
    }
    for s in f.state_map().keys() {
        if !src.has_state(s) {
            report.push("unknown-state", format!("state map entry {s}"));
        }
    }
    for a in f.action_map().keys() {
        if src.label_of(a).is_none() {
            report.push("unknown-action", format!("action map entry {a}"));
        }
    }
    if report.ok() {
        for t in src.transitions() {
            match f.image(t) {
                Some(img) if dst.has_transition(&img) => {}
                Some(img) => report.push("transition-preservation", format!("{t} -> {img}")),
                None => report.push("transition-preservation", t),
            }
        }
    }
    report
}
