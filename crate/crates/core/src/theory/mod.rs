//! Signatures, contexts, axioms and equations, with a text format.

mod ast;
mod lexer;
mod parser;
mod render;

pub use ast::{Axiom, Context, Equation, Hypothesis, Judgment, OpDecl, Signature, Term, Theory};
pub use parser::{parse_context, parse_equation_raw, parse_judgment, parse_term, parse_theory};
pub use render::{equation_json, render_axiom, render_context, render_equation, render_judgment, render_theory, theory_json};
