use thiserror::Error;

use crate::model::{Link, Violation};
use crate::Rational;

/// Errors produced by the analysis routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid network: {}", format_violations(.0))]
    InvalidNetwork(Vec<Violation>),

    #[error("size limit exceeded: {what} (limit {limit})")]
    SizeLimit { what: String, limit: usize },

    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("not found: {0}")]
    NotFound(String),

    #[error("{0}")]
    LinkDeficit(Box<LinkDeficit>),
}

/// A link asked to carry more than its scheduled time allows.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("link {}->{} over budget: flow {required} exceeds available {available} (deficit {})",
    .link.0, .link.1, .required - .available)]
pub struct LinkDeficit {
    pub link: Link,
    pub required: Rational,
    pub available: Rational,
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
