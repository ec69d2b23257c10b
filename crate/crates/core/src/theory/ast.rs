use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::vbase::{shortest_paths, Backend, FiniteObject, Structure};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn app(op: &str, args: Vec<Term>) -> Term {
        Term::App(op.to_string(), args)
    }

    /// Variables have depth 0; an application is one deeper than its
    /// deepest argument (constants have depth 1).
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Term::Var(v) => {
                out.insert(v);
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Replace every variable by `f(name)`.
    pub fn substitute(&self, f: &dyn Fn(&str) -> Term) -> Term {
        match self {
            Term::Var(v) => f(v),
            Term::App(op, args) => Term::App(op.clone(), args.iter().map(|a| a.substitute(f)).collect()),
        }
    }

    pub fn rename(&self, f: &dyn Fn(&str) -> String) -> Term {
        self.substitute(&|v| Term::Var(f(v)))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(op, args) => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    Leq(String, String),
    Dist(String, String, Dist),
}

/// A finite object over named variables, remembering the hypotheses it was
/// written with. `object` is their closure: the generated order, or the
/// shortest-path metric.
#[derive(Clone, Debug)]
pub struct Context {
    pub vars: Vec<String>,
    pub hyps: Vec<Hypothesis>,
    pub object: Arc<FiniteObject>,
}

impl PartialEq for Context {
    fn eq(&self, other: &Context) -> bool {
        self.vars == other.vars && self.hyps == other.hyps && self.object.backend() == other.object.backend()
    }
}

impl Context {
    pub fn new(backend: Backend, vars: Vec<String>, hyps: Vec<Hypothesis>) -> Result<Context> {
        let idx = |v: &str| {
            vars.iter()
                .position(|x| x == v)
                .ok_or_else(|| Error::UnknownVar(v.to_string()))
        };
        let object = match backend {
            Backend::Pos => {
                let mut pairs = Vec::new();
                for h in &hyps {
                    match h {
                        Hypothesis::Leq(a, b) => pairs.push((idx(a)?, idx(b)?)),
                        Hypothesis::Dist(..) => return Err(Error::Unsupported("distance hypothesis over pos".into())),
                    }
                }
                FiniteObject::poset(&vars, &pairs)?
            }
            Backend::Met => {
                let n = vars.len();
                let mut d = vec![vec![Dist::Inf; n]; n];
                for (i, row) in d.iter_mut().enumerate() {
                    row[i] = Dist::ZERO;
                }
                for h in &hyps {
                    match h {
                        Hypothesis::Dist(a, b, e) => {
                            let (i, j) = (idx(a)?, idx(b)?);
                            if i != j {
                                d[i][j] = d[i][j].min(*e);
                                d[j][i] = d[i][j];
                            }
                        }
                        Hypothesis::Leq(..) => return Err(Error::Unsupported("order hypothesis over met".into())),
                    }
                }
                shortest_paths(&mut d);
                FiniteObject::metric(&vars, d)?
            }
            b => return Err(Error::Unsupported(format!("contexts over {b}"))),
        };
        Ok(Context {
            vars,
            hyps,
            object: Arc::new(object),
        })
    }

    /// The context whose closure is `object`, one hypothesis per
    /// nontrivial relation.
    pub fn from_object(object: &FiniteObject) -> Result<Context> {
        let n = object.len();
        let l = |i: usize| object.label(i).to_string();
        let hyps = match object.structure() {
            Structure::Pos(_) => (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| i != j && object.leq(i, j))
                .map(|(i, j)| Hypothesis::Leq(l(i), l(j)))
                .collect(),
            Structure::Met(_) => (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| object.dist(i, j).is_finite())
                .map(|(i, j)| Hypothesis::Dist(l(i), l(j), object.dist(i, j)))
                .collect(),
            _ => return Err(Error::Unsupported(format!("contexts over {}", object.backend()))),
        };
        Context::new(object.backend(), object.labels().to_vec(), hyps)
    }

    pub fn discrete(backend: Backend, vars: Vec<String>) -> Result<Context> {
        Context::new(backend, vars, vec![])
    }

    /// The one-point context `[*]`.
    pub fn singleton(backend: Backend) -> Context {
        Context::discrete(backend, vec!["*".into()]).expect("one point is valid")
    }

    pub fn backend(&self) -> Backend {
        self.object.backend()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, v: &str) -> Option<usize> {
        self.vars.iter().position(|x| x == v)
    }

    /// `[0, …, n-1]` without hypotheses: written as the bare number `n`.
    pub fn is_numbered(&self) -> bool {
        self.hyps.is_empty() && self.vars.iter().enumerate().all(|(i, v)| *v == i.to_string())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OpDecl {
    pub name: String,
    pub arity: Context,
}

impl OpDecl {
    pub fn arg_count(&self) -> usize {
        self.arity.len()
    }

    pub fn is_discrete(&self) -> bool {
        self.arity.object.is_discrete()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Signature {
    pub backend: Backend,
    pub ops: Vec<OpDecl>,
}

impl Signature {
    pub fn op(&self, name: &str) -> Option<(usize, &OpDecl)> {
        self.ops.iter().enumerate().find(|(_, o)| o.name == name)
    }

    pub fn all_discrete(&self) -> bool {
        self.ops.iter().all(OpDecl::is_discrete)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Judgment {
    Eq(Term, Term),
    Leq(Term, Term),
    Dist(Term, Term, Dist),
}

impl Judgment {
    pub fn sides(&self) -> (&Term, &Term) {
        match self {
            Judgment::Eq(a, b) | Judgment::Leq(a, b) | Judgment::Dist(a, b, _) => (a, b),
        }
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            Judgment::Eq(..) => "eq",
            Judgment::Leq(..) => "ineq",
            Judgment::Dist(..) => "qeq",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axiom {
    pub name: String,
    pub context: Context,
    pub judgment: Judgment,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Theory {
    pub name: String,
    pub signature: Signature,
    pub axioms: Vec<Axiom>,
}

impl Theory {
    pub fn backend(&self) -> Backend {
        self.signature.backend
    }

    /// A theory with the given signature and no axioms.
    pub fn free(name: &str, signature: Signature) -> Theory {
        Theory {
            name: name.to_string(),
            signature,
            axioms: vec![],
        }
    }
}

/// Two `Y`-indexed families of terms over `X`: the pair `p, q : FY → FX`.
#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    pub y: Context,
    pub x: Context,
    pub p: Vec<Term>,
    pub q: Vec<Term>,
}

impl Equation {
    /// The single-point equation `p == q` over `x`.
    pub fn simple(x: Context, p: Term, q: Term) -> Equation {
        Equation {
            y: Context::singleton(x.backend()),
            x,
            p: vec![p],
            q: vec![q],
        }
    }
}
