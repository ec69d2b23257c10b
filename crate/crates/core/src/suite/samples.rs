//! The sample theories and equations shipped under `theories/`.

use std::sync::Arc;

use crate::error::Result;
use crate::freeterm::parse_equation;
use crate::limits::Limits;
use crate::theory::{parse_theory, Equation, Theory};

pub const OM: &str = include_str!("../../theories/om.thy");
pub const CHAIN: &str = include_str!("../../theories/chain.thy");
pub const OSG: &str = include_str!("../../theories/osg.thy");
pub const OSG_COMM: &str = include_str!("../../theories/osg_comm.eq");
pub const UNARY: &str = include_str!("../../theories/unary.thy");
pub const UNARY_CONTRACT: &str = include_str!("../../theories/unary_contract.eq");

fn load(text: &str) -> Arc<Theory> {
    Arc::new(parse_theory(text).expect("shipped theories parse"))
}

/// Ordered monoids in which comparable elements commute.
pub fn om() -> Arc<Theory> {
    load(OM)
}

/// One operation with the two-element chain as arity.
pub fn chain() -> Arc<Theory> {
    load(CHAIN)
}

pub fn osg() -> Arc<Theory> {
    load(OSG)
}

pub fn unary() -> Arc<Theory> {
    load(UNARY)
}

/// A sample theory paired with the equation set used against it.
pub fn with_equations(limits: &Limits) -> Result<Vec<(Arc<Theory>, Vec<Equation>)>> {
    let osg = osg();
    let unary = unary();
    let comm = parse_equation(OSG_COMM.trim(), &osg, 1, limits)?;
    let contract = parse_equation(UNARY_CONTRACT.trim(), &unary, 1, limits)?;
    Ok(vec![(osg, vec![comm]), (unary, vec![contract])])
}
