use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::theory::{Signature, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Var(usize),
    App(usize, Box<[usize]>),
}

/// Hash-consed terms of bounded depth over a fixed variable list, numbered
/// by depth, then operation, then arguments.
#[derive(Clone, Debug)]
pub struct TermBank {
    nodes: Vec<Node>,
    depth: Vec<usize>,
    index: HashMap<Node, usize>,
    vars: Vec<String>,
    ops: Vec<String>,
    arities: Vec<usize>,
}

impl TermBank {
    /// Every term of depth `≤ depth` over `vars`.
    pub fn generate(vars: &[String], sig: &Signature, depth: usize, cap: usize) -> Result<TermBank> {
        let mut bank = TermBank {
            nodes: Vec::new(),
            depth: Vec::new(),
            index: HashMap::new(),
            vars: vars.to_vec(),
            ops: sig.ops.iter().map(|o| o.name.clone()).collect(),
            arities: sig.ops.iter().map(|o| o.arg_count()).collect(),
        };
        for v in 0..vars.len() {
            bank.push(Node::Var(v), 0);
        }
        // `lower` terms have depth < level-1, `prev` terms depth ≤ level-1.
        let mut lower = 0;
        for level in 1..=depth {
            let prev = bank.len();
            let mut needed: u128 = 0;
            for &k in &bank.arities {
                let fresh = if level == 1 {
                    (prev as u128).pow(k as u32)
                } else {
                    (prev as u128).pow(k as u32) - (lower as u128).pow(k as u32)
                };
                needed += fresh;
            }
            if prev as u128 + needed > cap as u128 {
                return Err(Error::SizeLimitExceeded {
                    what: "terms",
                    requested: prev as u128 + needed,
                    cap: cap as u128,
                });
            }
            for op in 0..bank.ops.len() {
                let k = bank.arities[op];
                if k == 0 {
                    if level == 1 {
                        bank.push(Node::App(op, Box::new([])), 1);
                    }
                    continue;
                }
                if prev == 0 {
                    continue;
                }
                let mut args = vec![0usize; k];
                loop {
                    let d = args.iter().map(|&a| bank.depth[a]).max().unwrap_or(0);
                    if d + 1 == level {
                        bank.push(Node::App(op, args.clone().into_boxed_slice()), level);
                    }
                    if !crate::vbase::bump(&mut args, prev) {
                        break;
                    }
                }
            }
            lower = prev;
        }
        Ok(bank)
    }

    fn push(&mut self, node: Node, depth: usize) {
        self.index.insert(node.clone(), self.nodes.len());
        self.nodes.push(node);
        self.depth.push(depth);
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    pub fn depth(&self, id: usize) -> usize {
        self.depth[id]
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn lookup(&self, node: &Node) -> Option<usize> {
        self.index.get(node).copied()
    }

    pub fn var(&self, v: usize) -> usize {
        self.lookup(&Node::Var(v)).expect("variables are always present")
    }

    pub fn find(&self, t: &Term) -> Option<usize> {
        match t {
            Term::Var(v) => self.vars.iter().position(|x| x == v).map(|i| self.var(i)),
            Term::App(op, args) => {
                let op = self.ops.iter().position(|o| o == op)?;
                let args = args.iter().map(|a| self.find(a)).collect::<Option<Vec<_>>>()?;
                self.lookup(&Node::App(op, args.into_boxed_slice()))
            }
        }
    }

    pub fn term(&self, id: usize) -> Term {
        match &self.nodes[id] {
            Node::Var(v) => Term::Var(self.vars[*v].clone()),
            Node::App(op, args) => Term::App(self.ops[*op].clone(), args.iter().map(|&a| self.term(a)).collect()),
        }
    }

    /// Translate every term of `self` into `other` after renaming variable
    /// `v` to `other`'s variable `rename[v]`; `None` where the image is
    /// missing.
    pub fn transport(&self, other: &TermBank, rename: &[usize]) -> Vec<Option<usize>> {
        let mut out: Vec<Option<usize>> = Vec::with_capacity(self.len());
        for node in &self.nodes {
            let image = match node {
                Node::Var(v) => Some(other.var(rename[*v])),
                Node::App(op, args) => args
                    .iter()
                    .map(|&a| out[a])
                    .collect::<Option<Vec<_>>>()
                    .and_then(|args| other.lookup(&Node::App(*op, args.into_boxed_slice()))),
            };
            out.push(image);
        }
        out
    }
}
