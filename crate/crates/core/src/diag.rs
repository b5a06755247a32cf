use std::fmt;

use serde::{Deserialize, Serialize};

/// A skipped unit of work: which input, which game or start position within
/// it, and why. Displays as one tab-separated line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub source: String,
    pub ordinal: Option<usize>,
    pub reason: String,
}

impl Diagnostic {
    pub fn new(
        source: impl Into<String>,
        ordinal: Option<usize>,
        reason: impl Into<String>,
    ) -> Self {
        Diagnostic {
            source: source.into(),
            ordinal,
            reason: reason.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ordinal {
            Some(n) => write!(f, "{}\t{}\t{}", self.source, n, self.reason),
            None => write!(f, "{}\t-\t{}", self.source, self.reason),
        }
    }
}
