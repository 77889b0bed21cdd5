use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::HdtsError;

/// An element of the label universe.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Label(String);

impl Label {
    pub fn new(text: impl Into<String>) -> Result<Self, HdtsError> {
        let text = text.into();
        if is_valid_token(&text) {
            Ok(Label(text))
        } else {
            Err(HdtsError::InvalidLabel(text))
        }
    }

    /// Parses a list of labels, failing on the first invalid one.
    pub fn list<S: AsRef<str>>(texts: &[S]) -> Result<Vec<Label>, HdtsError> {
        texts.iter().map(|t| Label::new(t.as_ref())).collect()
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_valid_token(text: &str) -> bool {
    !text.is_empty() && text.chars().all(|c| !c.is_whitespace() && !c.is_control())
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Label {
    type Err = HdtsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Label::new(s)
    }
}

impl TryFrom<String> for Label {
    type Error = HdtsError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Label::new(value)
    }
}

impl From<Label> for String {
    fn from(label: Label) -> String {
        label.0
    }
}

impl AsRef<str> for Label {
    fn as_ref(&self) -> &str {
        &self.0
    }
}
