//! The acceptance criteria as runnable checks, grouped into named suites.

mod criteria;
pub mod samples;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::Limits;

pub use criteria::run_criterion;

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Number of instances examined.
    pub checked: usize,
    pub detail: serde_json::Value,
}

pub const NAMES: [(u8, &str); 12] = [
    (1, "graph counterexample"),
    (2, "factorization and orthogonality"),
    (3, "injections are monic on points"),
    (4, "surjections cancel and pull back"),
    (5, "monad preserves surjections"),
    (6, "chain arity breaks preservation"),
    (7, "equations survive products, subalgebras, split quotients"),
    (8, "mu-pure equals split"),
    (9, "least derivable distance is the path metric"),
    (10, "product/coequalizer gap in Met"),
    (11, "closure satisfies synthesized equations"),
    (12, "cotensors satisfy equations"),
];

pub const SUITES: [&str; 5] = ["section2", "section3", "section4", "appendix", "all"];

/// Criterion ids of a named suite.
pub fn suite_ids(name: &str) -> Option<Vec<u8>> {
    Some(match name {
        "section2" => vec![1, 2, 3, 4],
        "section3" => vec![5, 6, 9],
        "section4" => vec![7, 8, 11, 12],
        "appendix" => vec![10],
        "all" => (1..=12).collect(),
        _ => return None,
    })
}

pub fn run_suite(name: &str, limits: &Limits) -> Result<Vec<Outcome>> {
    let ids = suite_ids(name).ok_or_else(|| Error::Unsupported(format!("unknown suite `{name}`")))?;
    ids.into_iter().map(|id| run_criterion(id, limits)).collect()
}
