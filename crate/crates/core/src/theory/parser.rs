//! Recursive-descent parser for theory files and equations.
//!
//! ```text
//! theory   ::= "theory" ident "over" ("pos" | "met") "{" item* "}"
//! item     ::= "op" ident ":" (nat | ctx) ";"
//!            | ("eq" | "ineq" | "qeq") ident ":" "context" ctx "|-" judgment ";"
//! ctx      ::= "[" (entry (("," | "|") entry)*)? "]"
//! entry    ::= ident | "*" | ident "<=" ident | "d" "(" ident "," ident ")" "<=" dist
//! judgment ::= term ("=" | "==") term | term "<=" term | "d" "(" term "," term ")" "<=" dist
//! term     ::= ident | ident "(" (term ("," term)*)? ")"
//! dist     ::= nat | nat "/" nat | "inf" | "∞"
//! equation ::= "contextY" ctx ";" "contextX" ctx "|-" family ("=" | "==") family ";"?
//! family   ::= term | "(" term ("," term)* ")"
//! ```
//!
//! A bare identifier in a term is a variable if the context declares it,
//! otherwise a constant. `d` is reserved for distances and cannot name an
//! operation.

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::vbase::Backend;

use super::ast::{Axiom, Context, Equation, Hypothesis, Judgment, OpDecl, Signature, Term, Theory};
use super::lexer::{lex, Tok, Token};

/// A term before names are resolved against a context and signature.
#[derive(Clone, Debug)]
struct RawTerm {
    name: String,
    args: Option<Vec<RawTerm>>,
}

enum RawJudgment {
    Eq(RawTerm, RawTerm),
    Leq(RawTerm, RawTerm),
    Dist(RawTerm, RawTerm, Dist),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Parse {
            line: t.line,
            col: t.col,
            expected: expected.to_string(),
        })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(s) if *s == sym) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.fail(&format!("`{sym}`"))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => self.fail(&format!("`{kw}`")),
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail("an identifier"),
        }
    }

    /// A variable name: an identifier, or a numeral as in numbered contexts.
    fn var_name(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Nat(n) => {
                self.bump();
                Ok(n.to_string())
            }
            _ => self.ident(),
        }
    }

    fn nat(&mut self) -> Result<i64> {
        match *self.peek() {
            Tok::Nat(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.fail("a number"),
        }
    }

    fn dist(&mut self) -> Result<Dist> {
        if matches!(self.peek(), Tok::Ident(s) if s == "inf") {
            self.bump();
            return Ok(Dist::Inf);
        }
        let num = self.nat()?;
        if self.eat("/") {
            let den = self.nat()?;
            if den == 0 {
                return self.fail("a nonzero denominator");
            }
            Ok(Dist::ratio(num, den))
        } else {
            Ok(Dist::int(num))
        }
    }

    fn is_dist_start(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == "d") && self.peek_at(1) == &Tok::Sym("(")
    }

    fn context(&mut self, backend: Backend) -> Result<Context> {
        self.expect("[")?;
        let mut vars: Vec<String> = Vec::new();
        let mut hyps = Vec::new();
        let declare = |v: &str, vars: &mut Vec<String>| {
            if !vars.iter().any(|x| x == v) {
                vars.push(v.to_string());
            }
        };
        if !self.eat("]") {
            loop {
                if self.eat("*") {
                    declare("*", &mut vars);
                } else if self.is_dist_start() {
                    self.bump();
                    self.expect("(")?;
                    let a = self.var_name()?;
                    self.expect(",")?;
                    let b = self.var_name()?;
                    self.expect(")")?;
                    self.expect("<=")?;
                    let e = self.dist()?;
                    if backend != Backend::Met {
                        return self.fail("an order hypothesis `x <= y` (distances need `over met`)");
                    }
                    declare(&a, &mut vars);
                    declare(&b, &mut vars);
                    hyps.push(Hypothesis::Dist(a, b, e));
                } else {
                    let a = self.var_name()?;
                    declare(&a, &mut vars);
                    if self.eat("<=") {
                        let b = self.var_name()?;
                        if backend != Backend::Pos {
                            return self.fail("a distance hypothesis `d(x, y) <= e` (orders need `over pos`)");
                        }
                        declare(&b, &mut vars);
                        hyps.push(Hypothesis::Leq(a, b));
                    }
                }
                if self.eat("]") {
                    break;
                }
                if !(self.eat(",") || self.eat("|")) {
                    return self.fail("`,`, `|` or `]`");
                }
            }
        }
        Context::new(backend, vars, hyps)
    }

    fn raw_term(&mut self) -> Result<RawTerm> {
        if let Tok::Nat(n) = *self.peek() {
            self.bump();
            return Ok(RawTerm { name: n.to_string(), args: None });
        }
        let name = self.ident()?;
        if !self.eat("(") {
            return Ok(RawTerm { name, args: None });
        }
        let mut args = Vec::new();
        if !self.eat(")") {
            loop {
                args.push(self.raw_term()?);
                if self.eat(")") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(RawTerm { name, args: Some(args) })
    }

    fn judgment(&mut self) -> Result<RawJudgment> {
        if self.is_dist_start() {
            self.bump();
            self.expect("(")?;
            let a = self.raw_term()?;
            self.expect(",")?;
            let b = self.raw_term()?;
            self.expect(")")?;
            self.expect("<=")?;
            return Ok(RawJudgment::Dist(a, b, self.dist()?));
        }
        let a = self.raw_term()?;
        if self.eat("<=") {
            return Ok(RawJudgment::Leq(a, self.raw_term()?));
        }
        if self.eat("==") || self.eat("=") {
            return Ok(RawJudgment::Eq(a, self.raw_term()?));
        }
        self.fail("`=`, `==` or `<=`")
    }

    fn family(&mut self) -> Result<Vec<RawTerm>> {
        if !self.eat("(") {
            return Ok(vec![self.raw_term()?]);
        }
        let mut out = vec![self.raw_term()?];
        while self.eat(",") {
            out.push(self.raw_term()?);
        }
        self.expect(")")?;
        Ok(out)
    }

    fn end(&mut self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.fail("end of input")
        }
    }
}

fn resolve(raw: &RawTerm, ctx: &Context, sig: &Signature) -> Result<Term> {
    match &raw.args {
        None if ctx.index_of(&raw.name).is_some() => Ok(Term::Var(raw.name.clone())),
        None => match sig.op(&raw.name) {
            Some((_, op)) if op.arg_count() == 0 => Ok(Term::App(raw.name.clone(), vec![])),
            Some((_, op)) => Err(Error::ArityMismatch {
                op: raw.name.clone(),
                expected: op.arg_count(),
                found: 0,
            }),
            None => Err(Error::UnknownVar(raw.name.clone())),
        },
        Some(args) => {
            let (_, op) = sig.op(&raw.name).ok_or_else(|| Error::UnknownOp(raw.name.clone()))?;
            if op.arg_count() != args.len() {
                return Err(Error::ArityMismatch {
                    op: raw.name.clone(),
                    expected: op.arg_count(),
                    found: args.len(),
                });
            }
            let args = args.iter().map(|a| resolve(a, ctx, sig)).collect::<Result<_>>()?;
            Ok(Term::App(raw.name.clone(), args))
        }
    }
}

pub fn parse_theory(text: &str) -> Result<Theory> {
    let mut p = Parser::new(text)?;
    p.keyword("theory")?;
    let name = p.ident()?;
    p.keyword("over")?;
    let backend = match p.ident()?.as_str() {
        "pos" => Backend::Pos,
        "met" => Backend::Met,
        _ => {
            p.pos -= 1;
            return p.fail("`pos` or `met`");
        }
    };
    p.expect("{")?;
    let mut ops: Vec<OpDecl> = Vec::new();
    let mut raw_axioms = Vec::new();
    while !p.eat("}") {
        let kw = p.ident()?;
        match kw.as_str() {
            "op" => {
                if matches!(p.peek(), Tok::Ident(s) if s == "d") {
                    return p.fail("an operation name (`d` is reserved)");
                }
                let name = p.ident()?;
                if ops.iter().any(|o| o.name == name) {
                    p.pos -= 1;
                    return p.fail(&format!("a fresh operation name (`{name}` is already declared)"));
                }
                p.expect(":")?;
                let arity = match p.peek() {
                    Tok::Nat(_) => {
                        let n = p.nat()? as usize;
                        Context::discrete(backend, (0..n).map(|i| i.to_string()).collect())?
                    }
                    _ => p.context(backend)?,
                };
                p.expect(";")?;
                ops.push(OpDecl { name, arity });
            }
            "eq" | "ineq" | "qeq" => {
                let (line, col) = (p.toks[p.pos].line, p.toks[p.pos].col);
                let name = p.ident()?;
                p.expect(":")?;
                p.keyword("context")?;
                let ctx = p.context(backend)?;
                p.expect("|-")?;
                let j = p.judgment()?;
                p.expect(";")?;
                let ok = matches!(
                    (kw.as_str(), &j, backend),
                    ("eq", RawJudgment::Eq(..), _)
                        | ("ineq", RawJudgment::Leq(..), Backend::Pos)
                        | ("qeq", RawJudgment::Dist(..), Backend::Met)
                );
                if !ok {
                    let expected = match kw.as_str() {
                        "eq" => "an equation `s = t`",
                        "ineq" => "an inequation `s <= t` over pos",
                        _ => "a distance bound `d(s, t) <= e` over met",
                    };
                    return Err(Error::Parse {
                        line,
                        col,
                        expected: expected.into(),
                    });
                }
                raw_axioms.push((name, ctx, j));
            }
            _ => {
                p.pos -= 1;
                return p.fail("`op`, `eq`, `ineq`, `qeq` or `}`");
            }
        }
    }
    p.end()?;
    let signature = Signature { backend, ops };
    let axioms = raw_axioms
        .into_iter()
        .map(|(name, context, j)| {
            let r = |t: &RawTerm| resolve(t, &context, &signature);
            let judgment = match &j {
                RawJudgment::Eq(a, b) => Judgment::Eq(r(a)?, r(b)?),
                RawJudgment::Leq(a, b) => Judgment::Leq(r(a)?, r(b)?),
                RawJudgment::Dist(a, b, e) => Judgment::Dist(r(a)?, r(b)?, *e),
            };
            Ok(Axiom { name, context, judgment })
        })
        .collect::<Result<_>>()?;
    Ok(Theory { name, signature, axioms })
}

/// Parse an equation without certifying its families.
pub fn parse_equation_raw(text: &str, theory: &Theory) -> Result<Equation> {
    let backend = theory.backend();
    let mut p = Parser::new(text)?;
    p.keyword("contextY")?;
    let y = p.context(backend)?;
    p.expect(";")?;
    p.keyword("contextX")?;
    let x = p.context(backend)?;
    p.expect("|-")?;
    let fp = p.family()?;
    if !(p.eat("==") || p.eat("=")) {
        return p.fail("`==`");
    }
    let fq = p.family()?;
    p.eat(";");
    p.end()?;
    for fam in [&fp, &fq] {
        if fam.len() != y.len() {
            return Err(Error::ArityMismatch {
                op: "family".into(),
                expected: y.len(),
                found: fam.len(),
            });
        }
    }
    let r = |fam: &[RawTerm]| -> Result<Vec<Term>> { fam.iter().map(|t| resolve(t, &x, &theory.signature)).collect() };
    let (pt, qt) = (r(&fp)?, r(&fq)?);
    Ok(Equation { y, x, p: pt, q: qt })
}

/// Parse a term over `ctx`.
pub fn parse_term(text: &str, ctx: &Context, sig: &Signature) -> Result<Term> {
    let mut p = Parser::new(text)?;
    let raw = p.raw_term()?;
    p.end()?;
    resolve(&raw, ctx, sig)
}

/// Parse a judgment such as `s = t`, `s <= t` or `d(s, t) <= 1/2` over `ctx`.
pub fn parse_judgment(text: &str, ctx: &Context, sig: &Signature) -> Result<Judgment> {
    let mut p = Parser::new(text)?;
    let j = p.judgment()?;
    p.end()?;
    let r = |t: &RawTerm| resolve(t, ctx, sig);
    Ok(match &j {
        RawJudgment::Eq(a, b) => Judgment::Eq(r(a)?, r(b)?),
        RawJudgment::Leq(a, b) => Judgment::Leq(r(a)?, r(b)?),
        RawJudgment::Dist(a, b, e) => Judgment::Dist(r(a)?, r(b)?, *e),
    })
}

/// Parse a bare context literal such as `[x, y | x <= y]`.
pub fn parse_context(text: &str, backend: Backend) -> Result<Context> {
    let mut p = Parser::new(text)?;
    let c = p.context(backend)?;
    p.end()?;
    Ok(c)
}
