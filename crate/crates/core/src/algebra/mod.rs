//! Finite algebras of a theory: evaluation, the algebra check, satisfaction
//! of equations, and products, subalgebras, quotients and cotensors.

mod canon;
mod constructions;
mod enumerate;
mod eval;
mod json;

use std::sync::Arc;

use serde::Serialize;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::theory::{Context, Equation, Judgment, Term, Theory};
use crate::vbase::{decode_tuple, encode_tuple, enumerate_constrained, Backend, FiniteObject, Morphism};

pub use canon::{algebra_key, is_isomorphic_algebra, AlgebraKey};
pub use constructions::{
    cotensor_algebra, product_algebra, quotients, split_quotients, split_section, subalgebras, terminal_algebra,
    Quotient,
};
pub use enumerate::enumerate_algebras;
pub use eval::CompiledTerm;
pub use json::{algebra_from_json, algebra_to_json, RawAlgebra};

/// Marks argument tuples outside an operation's domain (tuples that are
/// not morphisms out of a non-discrete arity).
pub const UNDEF: usize = usize::MAX;

#[derive(Clone, Debug)]
pub struct Algebra {
    pub theory: Arc<Theory>,
    pub carrier: Arc<FiniteObject>,
    /// Per operation, its value on each argument tuple, indexed in mixed
    /// radix with the first argument most significant.
    pub tables: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AlgebraViolation {
    /// Table has the wrong length or a value outside the carrier.
    Shape { op: String, detail: String },
    /// The interpretation is not a morphism out of the power object.
    NotAMorphism { op: String, lhs: Vec<String>, rhs: Vec<String> },
    /// An axiom fails under the assignment.
    Axiom { axiom: String, assignment: Vec<(String, String)> },
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraCheck {
    pub ok: bool,
    pub violations: Vec<AlgebraViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Satisfaction {
    pub holds: bool,
    /// Lexicographically least violating assignment.
    pub witness: Option<Vec<(String, String)>>,
    /// The index into `Y` at which the families differ.
    pub component: Option<usize>,
}

impl Algebra {
    /// An algebra from raw tables; off-domain entries are normalized to
    /// [`UNDEF`]. Shapes are checked here, laws by [`Algebra::check`].
    pub fn new(theory: Arc<Theory>, carrier: Arc<FiniteObject>, tables: Vec<Vec<usize>>) -> Result<Algebra> {
        if carrier.backend() != theory.backend() {
            return Err(Error::BackendMismatch {
                expected: theory.backend(),
                found: carrier.backend(),
            });
        }
        let ops = theory.signature.ops.clone();
        if tables.len() != ops.len() {
            return Err(Error::Shape(format!("{} tables for {} operations", tables.len(), ops.len())));
        }
        let n = carrier.len();
        let mut a = Algebra { theory, carrier, tables };
        for k in 0..ops.len() {
            let want = n.checked_pow(ops[k].arg_count() as u32).unwrap_or(usize::MAX);
            if a.tables[k].len() != want {
                return Err(Error::Shape(format!("table of `{}` has {} entries, expected {want}", ops[k].name, a.tables[k].len())));
            }
            for idx in 0..want {
                if !a.in_domain(k, idx) {
                    a.tables[k][idx] = UNDEF;
                } else if a.tables[k][idx] >= n {
                    return Err(Error::Shape(format!("table of `{}` leaves the carrier", ops[k].name)));
                }
            }
        }
        Ok(a)
    }

    pub fn from_fn(theory: Arc<Theory>, carrier: Arc<FiniteObject>, f: impl Fn(usize, &[usize]) -> usize) -> Result<Algebra> {
        let n = carrier.len();
        let tables = theory
            .signature
            .ops
            .iter()
            .enumerate()
            .map(|(k, op)| {
                let radices = vec![n; op.arg_count()];
                let size = n.pow(op.arg_count() as u32);
                (0..size).map(|idx| f(k, &decode_tuple(idx, &radices))).collect()
            })
            .collect();
        Algebra::new(theory, carrier, tables)
    }

    pub fn backend(&self) -> Backend {
        self.carrier.backend()
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn arity(&self, op: usize) -> usize {
        self.theory.signature.ops[op].arg_count()
    }

    pub fn radices(&self, op: usize) -> Vec<usize> {
        vec![self.len(); self.arity(op)]
    }

    /// Is the tuple at `idx` a morphism from the arity of `op` into the carrier?
    pub fn in_domain(&self, op: usize, idx: usize) -> bool {
        let decl = &self.theory.signature.ops[op];
        if decl.is_discrete() {
            return true;
        }
        tuple_respects(&decl.arity.object, &self.carrier, &decode_tuple(idx, &self.radices(op)))
    }

    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        self.tables[op][encode_tuple(args, &self.radices(op))]
    }

    /// Value of `t` under `assignment`.
    pub fn evaluate(&self, t: &Term, assignment: &dyn Fn(&str) -> Option<usize>) -> Result<usize> {
        match t {
            Term::Var(v) => assignment(v).ok_or_else(|| Error::UnboundVariable(v.clone())),
            Term::App(op, args) => {
                let (k, _) = self
                    .theory
                    .signature
                    .op(op)
                    .ok_or_else(|| Error::UnknownOp(op.clone()))?;
                let vals = args.iter().map(|a| self.evaluate(a, assignment)).collect::<Result<Vec<_>>>()?;
                if vals.contains(&UNDEF) {
                    return Ok(UNDEF);
                }
                Ok(self.apply(k, &vals))
            }
        }
    }

    /// Interpretations are morphisms and every axiom holds under every
    /// morphism from its context.
    pub fn check(&self) -> AlgebraCheck {
        let mut violations = self.morphism_violations(true);
        if violations.is_empty() {
            for ax in &self.theory.axioms {
                if let Some(assignment) = self.axiom_failure(&ax.context, &ax.judgment) {
                    violations.push(AlgebraViolation::Axiom {
                        axiom: ax.name.clone(),
                        assignment,
                    });
                    break;
                }
            }
        }
        AlgebraCheck {
            ok: violations.is_empty(),
            violations,
        }
    }

    pub fn is_algebra(&self) -> bool {
        self.check().ok
    }

    /// Pairs of domain tuples whose images break the order (or expand
    /// distances in the max metric).
    pub(crate) fn morphism_violations(&self, first_only: bool) -> Vec<AlgebraViolation> {
        let mut out = Vec::new();
        let c = &self.carrier;
        for (k, op) in self.theory.signature.ops.iter().enumerate() {
            let radices = self.radices(k);
            let dom: Vec<(usize, Vec<usize>)> = (0..self.tables[k].len())
                .filter(|&i| self.tables[k][i] != UNDEF)
                .map(|i| (i, decode_tuple(i, &radices)))
                .collect();
            for (i, s) in &dom {
                for (j, t) in &dom {
                    let (fs, ft) = (self.tables[k][*i], self.tables[k][*j]);
                    let bad = match c.backend() {
                        Backend::Pos => s.iter().zip(t).all(|(a, b)| c.leq(*a, *b)) && !c.leq(fs, ft),
                        _ => {
                            let bound = s.iter().zip(t).map(|(a, b)| c.dist(*a, *b)).fold(Dist::ZERO, Dist::max);
                            c.dist(fs, ft) > bound
                        }
                    };
                    if bad {
                        let l = |v: &[usize]| v.iter().map(|&x| c.label(x).to_string()).collect();
                        out.push(AlgebraViolation::NotAMorphism {
                            op: op.name.clone(),
                            lhs: l(s),
                            rhs: l(t),
                        });
                        if first_only {
                            return out;
                        }
                    }
                }
            }
        }
        out
    }

    fn axiom_failure(&self, ctx: &Context, j: &Judgment) -> Option<Vec<(String, String)>> {
        let (l, r) = j.sides();
        let (cl, cr) = (CompiledTerm::new(l, ctx, &self.theory), CompiledTerm::new(r, ctx, &self.theory));
        let c = &self.carrier;
        let mut witness = None;
        let mut stack = Vec::new();
        enumerate_constrained(&ctx.object, c, |_, _| true, |a| {
            let (x, y) = (cl.eval(self, a.points(), &mut stack), cr.eval(self, a.points(), &mut stack));
            let ok = x != UNDEF
                && y != UNDEF
                && match j {
                    Judgment::Eq(..) => x == y,
                    Judgment::Leq(..) => c.leq(x, y),
                    Judgment::Dist(_, _, e) => c.dist(x, y) <= *e,
                };
            if !ok {
                witness = Some(assignment_labels(ctx, c, a.points()));
            }
            ok
        });
        witness
    }

    /// Does every morphism `X → carrier` make the two families agree?
    pub fn satisfies(&self, e: &Equation) -> Satisfaction {
        let ps: Vec<CompiledTerm> = e.p.iter().map(|t| CompiledTerm::new(t, &e.x, &self.theory)).collect();
        let qs: Vec<CompiledTerm> = e.q.iter().map(|t| CompiledTerm::new(t, &e.x, &self.theory)).collect();
        let mut out = Satisfaction {
            holds: true,
            witness: None,
            component: None,
        };
        let mut stack = Vec::new();
        enumerate_constrained(&e.x.object, &self.carrier, |_, _| true, |a| {
            for (y, (p, q)) in ps.iter().zip(&qs).enumerate() {
                if p.eval(self, a.points(), &mut stack) != q.eval(self, a.points(), &mut stack) {
                    out = Satisfaction {
                        holds: false,
                        witness: Some(assignment_labels(&e.x, &self.carrier, a.points())),
                        component: Some(y),
                    };
                    return false;
                }
            }
            true
        });
        out
    }

    pub fn satisfies_all(&self, es: &[Equation]) -> bool {
        es.iter().all(|e| self.satisfies(e).holds)
    }

    /// Is `h: self.carrier → other.carrier` a homomorphism?
    pub fn is_homomorphism(&self, other: &Algebra, h: &Morphism) -> bool {
        (0..self.tables.len()).all(|k| {
            let radices = self.radices(k);
            (0..self.tables[k].len()).all(|i| {
                let v = self.tables[k][i];
                if v == UNDEF {
                    return true;
                }
                let image: Vec<usize> = decode_tuple(i, &radices).into_iter().map(|a| h.apply(a)).collect();
                other.apply(k, &image) == h.apply(v)
            })
        })
    }
}

pub(crate) fn assignment_labels(ctx: &Context, c: &FiniteObject, points: &[usize]) -> Vec<(String, String)> {
    ctx.vars
        .iter()
        .zip(points)
        .map(|(v, &p)| (v.clone(), c.label(p).to_string()))
        .collect()
}

/// Is `tuple` (indexed by the points of `arity`) a morphism `arity → c`?
pub(crate) fn tuple_respects(arity: &FiniteObject, c: &FiniteObject, tuple: &[usize]) -> bool {
    let n = arity.len();
    (0..n).all(|i| {
        (0..n).all(|j| match arity.backend() {
            Backend::Pos => !arity.leq(i, j) || c.leq(tuple[i], tuple[j]),
            _ => c.dist(tuple[i], tuple[j]) <= arity.dist(i, j),
        })
    })
}
