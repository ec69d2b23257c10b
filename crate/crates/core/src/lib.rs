//! A desk-scale workbench for discrete equational theories over the
//! enriched bases `Pos`, `Met`, `Gra` and `MGra`.
//!
//! Everything here is finite and exact: distances are rationals extended
//! with `∞`, every universal property is checked by exhaustive enumeration,
//! and every theorem-level statement is probed at explicit size and depth
//! bounds.

pub mod algebra;
pub mod birkhoff;
pub mod counterexamples;
pub mod dist;
pub mod error;
pub mod limits;
pub mod suite;
pub mod theory;
pub mod factor;
pub mod freeterm;
pub mod vbase;

pub use dist::Dist;
pub use error::{Error, Result};
pub use limits::Limits;
