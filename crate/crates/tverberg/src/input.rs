//! Point-set documents: `{"dim": d, "points": [[...], ...], "labels": [...]}`.
//!
//! Coordinates are JSON integers or exact fraction strings such as `"-3/4"`.
//! Floating-point literals are rejected, because converting them silently
//! would change which verdicts hold.

use std::fmt;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tverberg_core::{PointSet, Rat, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub dim: usize,
    pub points: Vec<Vector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug)]
pub enum InputError {
    Io(std::io::Error),
    /// Syntax or type error at a 1-based line and column.
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    Invalid(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Io(e) => write!(f, "cannot read input: {e}"),
            InputError::Parse { line, column, message } => {
                write!(f, "line {line}, column {column}: {message}")
            }
            InputError::Invalid(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl std::error::Error for InputError {}

impl InputDocument {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let doc: InputDocument = serde_json::from_str(text).map_err(|e| {
            // serde_json appends " at line L column C"; keep only the message
            let full = e.to_string();
            let message = match full.rfind(" at line ") {
                Some(cut) => full[..cut].to_string(),
                None => full,
            };
            InputError::Parse { line: e.line(), column: e.column(), message }
        })?;
        doc.point_set()?;
        Ok(doc)
    }

    /// Reads from `path`, or from standard input when `path` is `None` or `-`.
    pub fn load(path: Option<&Path>) -> Result<Self, InputError> {
        let text = match path {
            Some(p) if p != Path::new("-") => std::fs::read_to_string(p).map_err(InputError::Io)?,
            _ => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(InputError::Io)?;
                s
            }
        };
        Self::parse(&text)
    }

    pub fn from_point_set(s: &PointSet) -> Self {
        InputDocument { dim: s.dim(), points: s.points().to_vec(), labels: None }
    }

    pub fn point_set(&self) -> Result<PointSet, InputError> {
        if let Some(labels) = &self.labels {
            if labels.len() != self.points.len() {
                return Err(InputError::Invalid(format!("{} labels for {} points", labels.len(), self.points.len())));
            }
        }
        PointSet::new(self.dim, self.points.clone()).map_err(|e| InputError::Invalid(e.to_string()))
    }

    /// Label of point `i` (0-based), defaulting to its 1-based index.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => (i + 1).to_string(),
        }
    }
}

/// Comma-separated exact coordinates, e.g. `1/2,-3`.
pub fn parse_point(text: &str) -> Result<Vector, String> {
    text.split(',')
        .map(|c| c.trim().parse::<Rat>().map_err(|e| format!("bad coordinate '{}': {e}", c.trim())))
        .collect()
}

/// Comma-separated 1-based indices, e.g. `1,3,5`.
pub fn parse_indices(text: &str) -> Result<Vec<usize>, String> {
    text.split(',').map(|c| c.trim().parse::<usize>().map_err(|_| format!("bad index '{}'", c.trim()))).collect()
}
