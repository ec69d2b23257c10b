//! Closure operators on classes of finite algebras, μ-purity, equation
//! synthesis from a class, and the bounded variety probe.

mod closure;
mod probe;
mod synth;

pub use closure::{closure, closure_step, is_mu_pure, ClosureOp, ClosureResult, ClosureSpec};
pub use probe::{variety_probe, Finding, SingleComponent, VarietyReport};
pub use synth::{synthesize_equations, EquationSet, SynthEquation, SynthesisSpec};
