use thiserror::Error;

use crate::vbase::{Backend, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid object: {}", render_violations(.0))]
    InvariantViolation(Vec<Violation>),

    #[error("size limit exceeded: {what} needs {requested}, cap is {cap}")]
    SizeLimitExceeded {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    #[error("backend mismatch: expected {expected}, found {found}")]
    BackendMismatch { expected: Backend, found: Backend },

    #[error("morphisms are not composable or not parallel: {0}")]
    Shape(String),

    #[error("lifting square does not commute")]
    NonCommutingSquare,

    #[error("(Surj, Inj) is not a factorization system on {0}")]
    NoFactorizationSystem(Backend),

    #[error("not strongly connected: no morphism from part {from} to part {to}")]
    NotStronglyConnected { from: usize, to: usize },

    #[error("parse error at {line}:{col}: expected {expected}")]
    Parse {
        line: usize,
        col: usize,
        expected: String,
    },

    #[error("arity mismatch: `{op}` takes {expected} arguments, got {found}")]
    ArityMismatch {
        op: String,
        expected: usize,
        found: usize,
    },

    #[error("unknown operation `{0}`")]
    UnknownOp(String),

    #[error("unknown variable `{0}`")]
    UnknownVar(String),

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("family is not context-respecting at depth {depth}: {detail}")]
    UncertifiedFamily { depth: usize, detail: String },

    #[error("term of depth {needed} exceeds the configured depth {depth}")]
    DepthExhausted { depth: usize, needed: usize },

    #[error("no witness within bounds: {0}")]
    NoWitnessInBounds(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("internal invariant broken: {0}")]
    Invariant(String),
}

fn render_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
