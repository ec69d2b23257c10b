//! `{"theory": name, "carrier": object, "interp": {op: [[arg.., value], ..]}}`,
//! one row per in-domain argument tuple, elements by label.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theory::Theory;
use crate::vbase::json::RawObject;
use crate::vbase::decode_tuple;

use super::{Algebra, UNDEF};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawAlgebra {
    pub theory: String,
    pub carrier: RawObject,
    #[serde(default)]
    pub interp: BTreeMap<String, Vec<Vec<String>>>,
}

pub fn algebra_from_json(text: &str, theory: &Arc<Theory>) -> Result<Algebra> {
    let raw: RawAlgebra = serde_json::from_str(text).map_err(|e| Error::Shape(e.to_string()))?;
    raw.validate(theory)
}

pub fn algebra_to_json(a: &Algebra) -> serde_json::Value {
    serde_json::to_value(RawAlgebra::from_algebra(a)).expect("algebras serialize")
}

impl RawAlgebra {
    pub fn validate(&self, theory: &Arc<Theory>) -> Result<Algebra> {
        if self.theory != theory.name {
            return Err(Error::Shape(format!("algebra is for `{}`, not `{}`", self.theory, theory.name)));
        }
        for name in self.interp.keys() {
            if theory.signature.op(name).is_none() {
                return Err(Error::UnknownOp(name.clone()));
            }
        }
        let carrier = Arc::new(self.carrier.validate()?);
        let n = carrier.len();
        let find = |l: &str| carrier.index_of(l).ok_or_else(|| Error::UnknownVar(l.to_string()));
        let shell = Algebra::from_fn(theory.clone(), carrier.clone(), |_, _| 0)?;
        let mut tables = shell.tables.clone();
        for (k, op) in theory.signature.ops.iter().enumerate() {
            let arity = op.arg_count();
            let mut seen = vec![false; tables[k].len()];
            for row in self.interp.get(&op.name).map(Vec::as_slice).unwrap_or(&[]) {
                if row.len() != arity + 1 {
                    return Err(Error::ArityMismatch {
                        op: op.name.clone(),
                        expected: arity,
                        found: row.len().saturating_sub(1),
                    });
                }
                let args = row[..arity].iter().map(|l| find(l)).collect::<Result<Vec<_>>>()?;
                let idx = args.iter().fold(0, |acc, &a| acc * n + a);
                if tables[k][idx] == UNDEF {
                    return Err(Error::Shape(format!("`{}` row ({}) is outside its arity", op.name, row[..arity].join(", "))));
                }
                if seen[idx] {
                    return Err(Error::Shape(format!("`{}` row ({}) appears twice", op.name, row[..arity].join(", "))));
                }
                seen[idx] = true;
                tables[k][idx] = find(&row[arity])?;
            }
            if let Some(idx) = (0..tables[k].len()).find(|&i| tables[k][i] != UNDEF && !seen[i]) {
                let missing: Vec<&str> = decode_tuple(idx, &vec![n; arity]).into_iter().map(|a| carrier.label(a)).collect();
                return Err(Error::Shape(format!("`{}` misses row ({})", op.name, missing.join(", "))));
            }
        }
        Algebra::new(theory.clone(), carrier, tables)
    }

    pub fn from_algebra(a: &Algebra) -> RawAlgebra {
        let c = &a.carrier;
        let interp = a
            .theory
            .signature
            .ops
            .iter()
            .enumerate()
            .map(|(k, op)| {
                let radices = a.radices(k);
                let rows = a.tables[k]
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != UNDEF)
                    .map(|(idx, &v)| {
                        let mut row: Vec<String> = decode_tuple(idx, &radices).into_iter().map(|x| c.label(x).to_string()).collect();
                        row.push(c.label(v).to_string());
                        row
                    })
                    .collect();
                (op.name.clone(), rows)
            })
            .collect();
        RawAlgebra {
            theory: a.theory.name.clone(),
            carrier: RawObject::from_object(c),
            interp,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::max_monoid;

    #[test]
    fn round_trip() {
        let a = max_monoid(3);
        let text = algebra_to_json(&a).to_string();
        let b = algebra_from_json(&text, &a.theory).unwrap();
        assert_eq!(a.tables, b.tables);
        assert_eq!(a.carrier.labels(), b.carrier.labels());
    }

    #[test]
    fn missing_and_bad_rows() {
        let a = max_monoid(2);
        let mut raw = RawAlgebra::from_algebra(&a);
        raw.interp.get_mut("mul").unwrap().pop();
        let err = raw.validate(&a.theory).unwrap_err();
        assert!(matches!(err, Error::Shape(ref m) if m.contains("misses")));
        let mut raw = RawAlgebra::from_algebra(&a);
        raw.interp.get_mut("mul").unwrap()[0].push("0".into());
        assert!(matches!(raw.validate(&a.theory).unwrap_err(), Error::ArityMismatch { .. }));
    }
}
