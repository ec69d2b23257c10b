//! Bounded deduction for inequational and quantitative logic in context.
//!
//! Both logics share one table: `rel[s][t]` is the least derivable bound on
//! the pair. Over `Pos` a bound is `0` (derivably `s ≤ t`) or `∞`; over
//! `Met` it is the least derivable `ε` with `d(s, t) ≤ ε`. Transitivity is
//! then addition, and congruence takes the maximum over arguments. Only
//! well-formed terms take part: an application is well-formed when its
//! arguments derivably respect the structure of the operation's arity.

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::theory::{Context, Judgment, Term, Theory};
use crate::vbase::Backend;

use super::bank::{Node, TermBank};

#[derive(Clone, Debug)]
enum Pat {
    Var(usize),
    App(usize, Vec<Pat>),
}

#[derive(Clone, Copy, Debug)]
enum Kind {
    Eq,
    Leq,
    Dist(Dist),
}

struct CompiledAxiom {
    nvars: usize,
    lhs: Pat,
    rhs: Pat,
    kind: Kind,
    /// Closure of the axiom's context, as `(i, j, bound)` requirements.
    premises: Vec<(usize, usize, Dist)>,
}

/// Structural requirements on the arguments of an operation.
fn arity_constraints(ctx: &Context) -> Vec<(usize, usize, Dist)> {
    let x = &ctx.object;
    let n = x.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            match x.backend() {
                Backend::Pos if x.leq(i, j) => out.push((i, j, Dist::ZERO)),
                Backend::Met if i < j && x.dist(i, j).is_finite() => out.push((i, j, x.dist(i, j))),
                _ => {}
            }
        }
    }
    out
}

fn compile(t: &Term, ctx: &Context, theory: &Theory) -> Pat {
    match t {
        Term::Var(v) => Pat::Var(ctx.index_of(v).expect("resolved at parse time")),
        Term::App(op, args) => Pat::App(
            theory.signature.op(op).expect("resolved at parse time").0,
            args.iter().map(|a| compile(a, ctx, theory)).collect(),
        ),
    }
}

/// The result of running the rules to a fixpoint over one context.
#[derive(Clone, Debug)]
pub struct Deduction {
    pub bank: TermBank,
    pub backend: Backend,
    pub depth: usize,
    pub wf: Vec<bool>,
    rel: Vec<Vec<Dist>>,
    pub rounds: usize,
}

const MAX_ROUNDS: usize = 10_000;

impl Deduction {
    pub fn run(theory: &Theory, ctx: &Context, depth: usize, limits: &Limits) -> Result<Deduction> {
        let bank = TermBank::generate(&ctx.vars, &theory.signature, depth, limits.max_terms)?;
        Deduction::with_bank(theory, ctx, bank, depth)
    }

    pub fn with_bank(theory: &Theory, ctx: &Context, bank: TermBank, depth: usize) -> Result<Deduction> {
        if theory.backend() != ctx.backend() {
            return Err(Error::BackendMismatch {
                expected: theory.backend(),
                found: ctx.backend(),
            });
        }
        let n = bank.len();
        let backend = theory.backend();
        let mut rel = vec![vec![Dist::Inf; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = Dist::ZERO;
        }
        for h in &ctx.hyps {
            match h {
                crate::theory::Hypothesis::Leq(a, b) => {
                    let (a, b) = (bank.var(ctx.index_of(a).unwrap()), bank.var(ctx.index_of(b).unwrap()));
                    rel[a][b] = Dist::ZERO;
                }
                crate::theory::Hypothesis::Dist(a, b, e) => {
                    let (a, b) = (bank.var(ctx.index_of(a).unwrap()), bank.var(ctx.index_of(b).unwrap()));
                    rel[a][b] = rel[a][b].min(*e);
                    rel[b][a] = rel[a][b];
                }
            }
        }
        let wf = (0..n).map(|i| matches!(bank.node(i), Node::Var(_))).collect();
        let mut ded = Deduction {
            bank,
            backend,
            depth,
            wf,
            rel,
            rounds: 0,
        };
        let axioms: Vec<CompiledAxiom> = theory
            .axioms
            .iter()
            .map(|a| {
                let (l, r) = a.judgment.sides();
                CompiledAxiom {
                    nvars: a.context.len(),
                    lhs: compile(l, &a.context, theory),
                    rhs: compile(r, &a.context, theory),
                    kind: match &a.judgment {
                        Judgment::Eq(..) => Kind::Eq,
                        Judgment::Leq(..) => Kind::Leq,
                        Judgment::Dist(_, _, e) => Kind::Dist(*e),
                    },
                    premises: arity_constraints(&a.context),
                }
            })
            .collect();
        let arities: Vec<Vec<(usize, usize, Dist)>> =
            theory.signature.ops.iter().map(|o| arity_constraints(&o.arity)).collect();
        ded.saturate(&axioms, &arities)?;
        Ok(ded)
    }

    fn set(&mut self, s: usize, t: usize, b: Dist) -> bool {
        let mut changed = false;
        if b < self.rel[s][t] {
            self.rel[s][t] = b;
            changed = true;
        }
        if self.backend == Backend::Met && b < self.rel[t][s] {
            self.rel[t][s] = b;
            changed = true;
        }
        changed
    }

    fn saturate(&mut self, axioms: &[CompiledAxiom], arities: &[Vec<(usize, usize, Dist)>]) -> Result<()> {
        let n = self.bank.len();
        loop {
            self.rounds += 1;
            if self.rounds > MAX_ROUNDS {
                return Err(Error::Invariant("deduction did not converge".into()));
            }
            let mut changed = self.transitivity();
            for t in 0..n {
                if self.wf[t] {
                    continue;
                }
                if let Node::App(op, args) = self.bank.node(t) {
                    let ok = args.iter().all(|&a| self.wf[a])
                        && arities[*op].iter().all(|&(i, j, b)| self.rel[args[i]][args[j]] <= b);
                    if ok {
                        self.wf[t] = true;
                        changed = true;
                    }
                }
            }
            let apps: Vec<usize> = (0..n)
                .filter(|&t| self.wf[t] && matches!(self.bank.node(t), Node::App(..)))
                .collect();
            for &s in &apps {
                for &t in &apps {
                    if s == t {
                        continue;
                    }
                    let (Node::App(o1, a1), Node::App(o2, a2)) = (self.bank.node(s), self.bank.node(t)) else {
                        unreachable!()
                    };
                    if o1 != o2 {
                        continue;
                    }
                    let mut b = Dist::ZERO;
                    for (x, y) in a1.iter().zip(a2.iter()) {
                        b = b.max(self.rel[*x][*y]);
                        if b == Dist::Inf {
                            break;
                        }
                    }
                    if b < self.rel[s][t] {
                        changed |= self.set(s, t, b);
                    }
                }
            }
            for ax in axioms {
                changed |= self.apply_axiom(ax);
            }
            if !changed {
                return Ok(());
            }
        }
    }

    fn transitivity(&mut self) -> bool {
        let live: Vec<usize> = (0..self.bank.len()).filter(|&t| self.wf[t]).collect();
        let mut changed = false;
        if self.backend == Backend::Pos {
            // Boolean closure on bitsets.
            let m = live.len();
            let words = m.div_ceil(64);
            let mut bits = vec![vec![0u64; words]; m];
            for (i, &s) in live.iter().enumerate() {
                for (j, &t) in live.iter().enumerate() {
                    if self.rel[s][t] == Dist::ZERO {
                        bits[i][j / 64] |= 1 << (j % 64);
                    }
                }
            }
            for k in 0..m {
                let row_k = bits[k].clone();
                for row in bits.iter_mut() {
                    if row[k / 64] >> (k % 64) & 1 == 1 {
                        for (w, r) in row.iter_mut().zip(&row_k) {
                            *w |= *r;
                        }
                    }
                }
            }
            for (i, &s) in live.iter().enumerate() {
                for (j, &t) in live.iter().enumerate() {
                    if bits[i][j / 64] >> (j % 64) & 1 == 1 && self.rel[s][t] != Dist::ZERO {
                        self.rel[s][t] = Dist::ZERO;
                        changed = true;
                    }
                }
            }
            return changed;
        }
        for &k in &live {
            for &i in &live {
                let ik = self.rel[i][k];
                if ik == Dist::Inf {
                    continue;
                }
                for &j in &live {
                    let kj = self.rel[k][j];
                    if kj == Dist::Inf {
                        continue;
                    }
                    let via = ik + kj;
                    if via < self.rel[i][j] {
                        self.rel[i][j] = via;
                        changed = true;
                    }
                }
            }
        }
        changed
    }

    fn matches(&self, pat: &Pat, id: usize, sigma: &mut [Option<usize>]) -> bool {
        match pat {
            Pat::Var(v) => match sigma[*v] {
                Some(bound) => bound == id,
                None => {
                    sigma[*v] = Some(id);
                    true
                }
            },
            Pat::App(op, ps) => match self.bank.node(id) {
                Node::App(o, args) if o == op => ps.iter().zip(args.iter()).all(|(p, &a)| self.matches(p, a, sigma)),
                _ => false,
            },
        }
    }

    fn instantiate(&self, pat: &Pat, sigma: &[usize]) -> Option<usize> {
        match pat {
            Pat::Var(v) => Some(sigma[*v]),
            Pat::App(op, ps) => {
                let args = ps.iter().map(|p| self.instantiate(p, sigma)).collect::<Option<Vec<_>>>()?;
                self.bank.lookup(&Node::App(*op, args.into_boxed_slice()))
            }
        }
    }

    fn apply_axiom(&mut self, ax: &CompiledAxiom) -> bool {
        let live: Vec<usize> = (0..self.bank.len()).filter(|&t| self.wf[t]).collect();
        let mut seeds: Vec<Vec<Option<usize>>> = Vec::new();
        // Anchor on the side that binds more variables.
        let count = |p: &Pat| {
            let mut s = vec![None; ax.nvars];
            fn walk(p: &Pat, s: &mut [Option<usize>]) {
                match p {
                    Pat::Var(v) => s[*v] = Some(0),
                    Pat::App(_, ps) => ps.iter().for_each(|q| walk(q, s)),
                }
            }
            walk(p, &mut s);
            s.iter().filter(|x| x.is_some()).count()
        };
        let anchor = if count(&ax.lhs) >= count(&ax.rhs) { &ax.lhs } else { &ax.rhs };
        for &u in &live {
            let mut sigma = vec![None; ax.nvars];
            if self.matches(anchor, u, &mut sigma) {
                seeds.push(sigma);
            }
        }
        let mut updates = Vec::new();
        for seed in seeds {
            let free: Vec<usize> = (0..ax.nvars).filter(|&v| seed[v].is_none()).collect();
            if !free.is_empty() && live.is_empty() {
                continue;
            }
            let mut pick = vec![0usize; free.len()];
            loop {
                let mut sigma: Vec<usize> = seed.iter().map(|s| s.unwrap_or(0)).collect();
                for (k, &v) in free.iter().enumerate() {
                    sigma[v] = live[pick[k]];
                }
                let admissible = ax.premises.iter().all(|&(i, j, b)| self.rel[sigma[i]][sigma[j]] <= b);
                if admissible {
                    if let (Some(l), Some(r)) = (self.instantiate(&ax.lhs, &sigma), self.instantiate(&ax.rhs, &sigma)) {
                        if self.wf[l] && self.wf[r] {
                            updates.push((l, r));
                        }
                    }
                }
                if free.is_empty() || !crate::vbase::bump(&mut pick, live.len()) {
                    break;
                }
            }
        }
        let mut changed = false;
        for (l, r) in updates {
            changed |= match ax.kind {
                Kind::Eq => self.set(l, r, Dist::ZERO) | self.set(r, l, Dist::ZERO),
                Kind::Leq => self.set(l, r, Dist::ZERO),
                Kind::Dist(e) => self.set(l, r, e),
            };
        }
        changed
    }

    /// Least derivable bound: `0` or `∞` over `Pos`, the least `ε` over `Met`.
    pub fn bound(&self, s: usize, t: usize) -> Dist {
        self.rel[s][t]
    }

    pub fn leq(&self, s: usize, t: usize) -> bool {
        self.rel[s][t] == Dist::ZERO
    }

    pub fn equal(&self, s: usize, t: usize) -> bool {
        self.rel[s][t] == Dist::ZERO && self.rel[t][s] == Dist::ZERO
    }

    pub fn well_formed(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.bank.len()).filter(|&t| self.wf[t])
    }
}
