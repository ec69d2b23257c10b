use crate::theory::{Context, Term, Theory};

use super::{Algebra, UNDEF};

#[derive(Clone, Debug)]
enum Step {
    Var(usize),
    App(usize, usize),
    Missing,
}

/// A term flattened to postfix over the variable positions of a context,
/// for repeated evaluation under many assignments.
#[derive(Clone, Debug)]
pub struct CompiledTerm {
    steps: Vec<Step>,
}

impl CompiledTerm {
    pub fn new(t: &Term, ctx: &Context, theory: &Theory) -> CompiledTerm {
        let mut steps = Vec::new();
        push(t, ctx, theory, &mut steps);
        CompiledTerm { steps }
    }

    /// Value under the assignment `points[i]` for the `i`-th context
    /// variable; [`UNDEF`] if an argument tuple leaves an operation's domain.
    pub fn eval(&self, alg: &Algebra, points: &[usize], stack: &mut Vec<usize>) -> usize {
        stack.clear();
        let n = alg.len();
        for s in &self.steps {
            match *s {
                Step::Var(i) => stack.push(points[i]),
                Step::Missing => stack.push(UNDEF),
                Step::App(op, k) => {
                    let base = stack.len() - k;
                    let mut idx = 0usize;
                    let mut undef = op == usize::MAX;
                    for &a in &stack[base..] {
                        if undef || a == UNDEF {
                            undef = true;
                            break;
                        }
                        idx = idx * n + a;
                    }
                    stack.truncate(base);
                    stack.push(if undef { UNDEF } else { alg.tables[op][idx] });
                }
            }
        }
        stack.pop().unwrap_or(UNDEF)
    }
}

fn push(t: &Term, ctx: &Context, theory: &Theory, steps: &mut Vec<Step>) {
    match t {
        Term::Var(v) => steps.push(ctx.index_of(v).map_or(Step::Missing, Step::Var)),
        Term::App(op, args) => {
            for a in args {
                push(a, ctx, theory, steps);
            }
            match theory.signature.op(op) {
                Some((k, _)) => steps.push(Step::App(k, args.len())),
                None => steps.push(Step::App(usize::MAX, args.len())),
            }
        }
    }
}
