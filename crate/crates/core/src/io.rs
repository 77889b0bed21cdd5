//! JSON documents for systems, maps, diagrams, relations and spans.
//!
//! Output is canonical: every list is sorted and the text is pretty-printed
//! with a trailing newline, so equal values serialize to identical bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bisim::{Relation, Span};
use crate::colim::DiagramSpec;
use crate::error::{HdtsError, Result};
use crate::label::Label;
use crate::map::HdtsMap;
use crate::model::{Hdts, TransitionKey, DEFAULT_MAX_DIMENSION};
use crate::validate::{structural, validate_map, ValidationReport, Violation};

pub const FORMAT_VERSION: u32 = 1;

/// What to do with transition sets that are not closed under coherence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ClosureMode {
    /// Reject them.
    #[default]
    Require,
    /// Close them on load.
    Apply,
    /// Accept them as they are.
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionEntry {
    pub id: String,
    pub label: Label,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionEntry {
    pub from: String,
    pub actions: Vec<String>,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<Label>>,
    pub states: Vec<String>,
    pub actions: Vec<ActionEntry>,
    pub transitions: Vec<TransitionEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub format_version: u32,
    pub src_doc: Document,
    pub dst_doc: Document,
    pub state_map: BTreeMap<String, String>,
    pub action_map: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowEntry {
    pub from: usize,
    pub to: usize,
    pub state_map: BTreeMap<String, String>,
    pub action_map: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDocument {
    pub format_version: u32,
    pub objects: Vec<Document>,
    pub arrows: Vec<ArrowEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationDocument {
    pub format_version: u32,
    pub left: Document,
    pub right: Document,
    pub pairs: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanDocument {
    pub format_version: u32,
    pub apex: Document,
    pub left: MapDocument,
    pub right: MapDocument,
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: Option<u32>,
}

fn syntax(e: serde_json::Error) -> HdtsError {
    HdtsError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Parses `text` as `T`, checking the version field first so that a newer
/// document is reported as such rather than as a shape mismatch.
fn from_text<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    if let Ok(VersionProbe {
        format_version: Some(v),
    }) = serde_json::from_str::<VersionProbe>(text)
    {
        if v != FORMAT_VERSION {
            return Err(HdtsError::Version {
                found: v,
                expected: FORMAT_VERSION,
            });
        }
    }
    serde_json::from_str(text).map_err(syntax)
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(HdtsError::Version {
            found: v,
            expected: FORMAT_VERSION,
        });
    }
    Ok(())
}

fn to_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

impl Document {
    pub fn from_hdts(x: &Hdts) -> Self {
        Document {
            format_version: FORMAT_VERSION,
            sigma: x.declared_sigma().map(|s| s.iter().cloned().collect()),
            states: x.states().iter().cloned().collect(),
            actions: x
                .actions()
                .iter()
                .map(|(id, label)| ActionEntry {
                    id: id.clone(),
                    label: label.clone(),
                })
                .collect(),
            transitions: x
                .transitions()
                .iter()
                .map(|t| TransitionEntry {
                    from: t.source().to_string(),
                    actions: t.actions().to_vec(),
                    to: t.target().to_string(),
                })
                .collect(),
        }
    }

    /// Builds and validates the system described by the document.
    pub fn to_hdts(&self, mode: ClosureMode) -> Result<Hdts> {
        check_version(self.format_version)?;
        let mut report = ValidationReport::default();
        let mut seen = BTreeSet::new();
        for s in &self.states {
            if !seen.insert(s.as_str()) {
                report.violations.push(Violation {
                    rule: "duplicate-id",
                    element: format!("state {s:?}"),
                });
            }
        }
        let mut seen = BTreeSet::new();
        for a in &self.actions {
            if !seen.insert(a.id.as_str()) {
                report.violations.push(Violation {
                    rule: "duplicate-id",
                    element: format!("action {:?}", a.id),
                });
            }
        }
        let mut x = Hdts::from_parts(
            self.states.iter().cloned(),
            self.actions.iter().map(|a| (a.id.clone(), a.label.clone())),
            self.transitions.iter().map(|t| {
                TransitionKey::new(t.from.as_str(), t.actions.iter().cloned(), t.to.as_str())
            }),
        );
        if let Some(sigma) = &self.sigma {
            x = x.with_sigma(sigma.iter().cloned());
        }
        report
            .violations
            .extend(structural(&x, DEFAULT_MAX_DIMENSION).violations);
        if !report.ok() {
            return Err(HdtsError::Invalid(report));
        }
        match mode {
            ClosureMode::Skip => Ok(x),
            ClosureMode::Apply => x.close(),
            ClosureMode::Require => {
                let closed = x.clone().close()?;
                if closed != x {
                    report.violations.push(Violation {
                        rule: "coherence",
                        element: format!(
                            "{} transition(s) missing from the closure",
                            closed.transitions().len() - x.transitions().len()
                        ),
                    });
                    return Err(HdtsError::Invalid(report));
                }
                Ok(x)
            }
        }
    }
}

pub fn parse(text: &str, mode: ClosureMode) -> Result<Hdts> {
    from_text::<Document>(text)?.to_hdts(mode)
}

pub fn serialize(x: &Hdts) -> String {
    to_text(&Document::from_hdts(x))
}

impl MapDocument {
    pub fn from_map(f: &HdtsMap) -> Self {
        MapDocument {
            format_version: FORMAT_VERSION,
            src_doc: Document::from_hdts(f.src()),
            dst_doc: Document::from_hdts(f.dst()),
            state_map: f.state_map().clone(),
            action_map: f.action_map().clone(),
        }
    }

    pub fn to_map(&self, mode: ClosureMode) -> Result<HdtsMap> {
        check_version(self.format_version)?;
        let src = Arc::new(self.src_doc.to_hdts(mode)?);
        let dst = Arc::new(self.dst_doc.to_hdts(mode)?);
        checked_map(src, dst, &self.state_map, &self.action_map)
    }
}

fn checked_map(
    src: Arc<Hdts>,
    dst: Arc<Hdts>,
    state_map: &BTreeMap<String, String>,
    action_map: &BTreeMap<String, String>,
) -> Result<HdtsMap> {
    let f = HdtsMap::new(src, dst, state_map.clone(), action_map.clone());
    let report = validate_map(&f);
    if !report.ok() {
        return Err(HdtsError::Invalid(report));
    }
    Ok(f)
}

pub fn parse_map(text: &str, mode: ClosureMode) -> Result<HdtsMap> {
    from_text::<MapDocument>(text)?.to_map(mode)
}

pub fn serialize_map(f: &HdtsMap) -> String {
    to_text(&MapDocument::from_map(f))
}

pub fn parse_diagram(text: &str, mode: ClosureMode) -> Result<DiagramSpec> {
    let doc: DiagramDocument = from_text(text)?;
    let objects = doc
        .objects
        .iter()
        .map(|o| o.to_hdts(mode).map(Arc::new))
        .collect::<Result<Vec<_>>>()?;
    let mut d = DiagramSpec::new(objects.clone());
    for (k, a) in doc.arrows.iter().enumerate() {
        let (Some(src), Some(dst)) = (objects.get(a.from), objects.get(a.to)) else {
            return Err(HdtsError::Precondition(format!(
                "arrow {k} refers to a missing object"
            )));
        };
        d = d.arrow(
            a.from,
            a.to,
            checked_map(src.clone(), dst.clone(), &a.state_map, &a.action_map)?,
        );
    }
    Ok(d)
}

pub fn serialize_diagram(d: &DiagramSpec) -> String {
    to_text(&DiagramDocument {
        format_version: FORMAT_VERSION,
        objects: d.objects.iter().map(|o| Document::from_hdts(o)).collect(),
        arrows: d
            .arrows
            .iter()
            .map(|a| ArrowEntry {
                from: a.from,
                to: a.to,
                state_map: a.map.state_map().clone(),
                action_map: a.map.action_map().clone(),
            })
            .collect(),
    })
}

pub fn serialize_relation(r: &Relation) -> String {
    to_text(&RelationDocument {
        format_version: FORMAT_VERSION,
        left: Document::from_hdts(&r.left),
        right: Document::from_hdts(&r.right),
        pairs: r.pairs.iter().cloned().collect(),
    })
}

pub fn serialize_span(s: &Span) -> String {
    to_text(&SpanDocument {
        format_version: FORMAT_VERSION,
        apex: Document::from_hdts(&s.apex),
        left: MapDocument::from_map(&s.left),
        right: MapDocument::from_map(&s.right),
    })
}

pub fn parse_span(text: &str, mode: ClosureMode) -> Result<Span> {
    let doc: SpanDocument = from_text(text)?;
    let apex = Arc::new(doc.apex.to_hdts(mode)?);
    let leg = |m: &MapDocument| -> Result<HdtsMap> {
        let f = m.to_map(mode)?;
        if f.src().as_ref() != apex.as_ref() {
            return Err(HdtsError::Precondition(
                "span leg does not start at the apex".into(),
            ));
        }
        Ok(HdtsMap::new(
            apex.clone(),
            f.dst().clone(),
            f.state_map().clone(),
            f.action_map().clone(),
        ))
    };
    Ok(Span {
        left: leg(&doc.left)?,
        right: leg(&doc.right)?,
        apex: apex.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::*;

    fn l(s: &str) -> Label {
        Label::new(s).unwrap()
    }

    const EDGE: &str = r#"{
  "format_version": 1,
  "states": [
    "0",
    "1"
  ],
  "actions": [
    {
      "id": "x#1",
      "label": "x"
    }
  ],
  "transitions": [
    {
      "from": "0",
      "actions": [
        "x#1"
      ],
      "to": "1"
    }
  ]
}
"#;

    #[test]
    fn golden_edge() {
        assert_eq!(serialize(&cube(&[l("x")])), EDGE);
        assert_eq!(parse(EDGE, ClosureMode::Require).unwrap(), cube(&[l("x")]));
    }

    #[test]
    fn round_trip() {
        for x in [
            cube(&[l("a"), l("b"), l("c")]),
            double_transition(&l("x")),
            boundary(&[l("a"), l("a")]),
            discrete(["p"]).with_sigma([l("x"), l("y")]),
            Hdts::empty(),
        ] {
            let text = serialize(&x);
            let back = parse(&text, ClosureMode::Require).unwrap();
            assert_eq!(back, x);
            assert_eq!(serialize(&back), text);
        }
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = parse(
            "{\n  \"format_version\": 1,\n  \"states\": [,]\n}",
            ClosureMode::Require,
        )
        .unwrap_err();
        match err {
            HdtsError::Syntax { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = EDGE.replace("\"states\"", "\"extra\": 0, \"states\"");
        assert!(matches!(
            parse(&text, ClosureMode::Require),
            Err(HdtsError::Syntax { .. })
        ));
    }

    #[test]
    fn version_gate() {
        let text = EDGE.replace("\"format_version\": 1", "\"format_version\": 2");
        assert!(matches!(
            parse(&text, ClosureMode::Require),
            Err(HdtsError::Version {
                found: 2,
                expected: 1
            })
        ));
    }

    #[test]
    fn closure_modes() {
        let seeds = Hdts::from_parts(
            ["a", "b", "n1", "n2"],
            [("u1", l("x")), ("u2", l("x")), ("u3", l("x"))],
            [
                TransitionKey::new("a", ["u1", "u2", "u3"], "b"),
                TransitionKey::new("a", ["u1"], "n1"),
                TransitionKey::new("n1", ["u2", "u3"], "b"),
                TransitionKey::new("a", ["u1", "u2"], "n2"),
                TransitionKey::new("n2", ["u3"], "b"),
            ],
        );
        let text = serialize(&seeds);
        match parse(&text, ClosureMode::Require) {
            Err(HdtsError::Invalid(r)) => assert!(r.has("coherence")),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(parse(&text, ClosureMode::Skip).unwrap(), seeds);
        assert_eq!(
            parse(&text, ClosureMode::Apply).unwrap(),
            seeds.clone().close().unwrap()
        );
    }

    #[test]
    fn rule_named_violations() {
        let text = EDGE.replace("\"x#1\"\n      ]", "\"y#1\"\n      ]");
        match parse(&text, ClosureMode::Require) {
            Err(HdtsError::Invalid(r)) => assert!(r.has("unknown-action"), "{r}"),
            other => panic!("unexpected {other:?}"),
        }
        let dup = EDGE.replace("\"1\"\n  ]", "\"1\",\n    \"1\"\n  ]");
        match parse(&dup, ClosureMode::Require) {
            Err(HdtsError::Invalid(r)) => assert!(r.has("duplicate-id"), "{r}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn map_round_trip() {
        let f = action_inclusion(&l("x"));
        let text = serialize_map(&f);
        let g = parse_map(&text, ClosureMode::Require).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn diagram_round_trip() {
        let inc = action_inclusion(&l("x"));
        let d = DiagramSpec::new(vec![
            inc.dst().clone(),
            inc.dst().clone(),
            inc.src().clone(),
        ])
        .arrow(2, 0, inc.clone())
        .arrow(2, 1, inc);
        let text = serialize_diagram(&d);
        let back = parse_diagram(&text, ClosureMode::Require).unwrap();
        assert_eq!(serialize_diagram(&back), text);
    }
}
