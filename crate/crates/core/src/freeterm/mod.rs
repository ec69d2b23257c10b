//! Depth-bounded free algebras, the monad action on morphisms, and the
//! discreteness and surjection-preservation probes.

mod bank;
mod engine;
mod free;
mod probes;

pub use bank::{Node, TermBank};
pub use engine::Deduction;
pub use free::{
    certify_equation, derive, free_algebra, monad_map, parse_equation, transport_classes, Derived, FreeAlgebraApprox,
};
pub use probes::{
    check_discrete, monad_surjectivity, preserves_surjections_probe, DiscreteReport, SurjectivityFailure,
    SurjectivityReport,
};
