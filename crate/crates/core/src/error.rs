use thiserror::Error;

use crate::signature::Violation;

/// A located failure in the concrete syntax. Positions are byte offsets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("polarity error at {pos}: {msg}")]
    Polarity { pos: usize, msg: String },
    #[error("unknown zone `{zone}` at {pos}")]
    UnknownZone { pos: usize, zone: String },
    #[error("reserved atom name `{name}` at {pos}")]
    Reserved { pos: usize, name: String },
}

impl ParseError {
    pub fn pos(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::Polarity { pos, .. }
            | ParseError::UnknownZone { pos, .. }
            | ParseError::Reserved { pos, .. } => *pos,
        }
    }

    pub(crate) fn shifted(self, by: usize) -> Self {
        match self {
            ParseError::Syntax { pos, msg } => ParseError::Syntax { pos: pos + by, msg },
            ParseError::Polarity { pos, msg } => ParseError::Polarity { pos: pos + by, msg },
            ParseError::UnknownZone { pos, zone } => ParseError::UnknownZone { pos: pos + by, zone },
            ParseError::Reserved { pos, name } => ParseError::Reserved { pos: pos + by, name },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid signature: {}", render_violations(.0))]
    Signature(Vec<Violation>),
    #[error("ill-formed sequent: {0}")]
    IllFormed(String),
    #[error("class mismatch: {0}")]
    ClassMismatch(String),
    #[error("encoding error: {0}")]
    Encoding(String),
    #[error("search exceeded the node budget of {budget} sequents")]
    ResourceLimit { budget: u64 },
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
    #[error("malformed json: {0}")]
    Json(String),
}

fn render_violations(vs: &[Violation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
