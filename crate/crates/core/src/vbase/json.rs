//! JSON interchange for objects and morphisms.
//!
//! Objects: `{"backend": "pos|met|gra|mgra", "elements": [...], "structure": {...}}`
//! with `leq` pairs (pos), an upper-triangular `dist` table (met: row `i`
//! lists `d(e_i, e_j)` for `j > i`), symmetric `edges` pairs (gra), or
//! `edges`/`src`/`tgt` (mgra). Morphisms: `{"dom", "cod", "map", "edge_map"}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dist::Dist;
use crate::error::{Error, Result};

use super::morphism::Morphism;
use super::object::{Backend, FiniteObject, MultiEdges, Structure};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawObject {
    pub backend: Backend,
    pub elements: Vec<String>,
    #[serde(default)]
    pub structure: RawStructure,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RawStructure {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leq: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<Vec<Vec<Dist>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub src: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tgt: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub dom: RawObject,
    pub cod: RawObject,
    pub map: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub edge_map: BTreeMap<String, String>,
}

fn lookup(x: &[String], label: &str) -> Result<usize> {
    x.iter()
        .position(|l| l == label)
        .ok_or_else(|| Error::UnknownVar(label.to_string()))
}

impl RawObject {
    pub fn validate(&self) -> Result<FiniteObject> {
        let labels = self.elements.clone();
        let n = labels.len();
        let s = &self.structure;
        let structure = match self.backend {
            Backend::Pos => {
                let mut m: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
                for (a, b) in s.leq.iter().flatten() {
                    m[lookup(&labels, a)?][lookup(&labels, b)?] = true;
                }
                Structure::Pos(m)
            }
            Backend::Met => {
                let mut d = vec![vec![Dist::ZERO; n]; n];
                let rows = s.dist.clone().unwrap_or_default();
                for i in 0..n {
                    let row = rows.get(i).cloned().unwrap_or_default();
                    if row.len() != n - i - 1 {
                        return Err(Error::Shape(format!("dist row {i} should have {} entries", n - i - 1)));
                    }
                    for (k, v) in row.into_iter().enumerate() {
                        d[i][i + 1 + k] = v;
                        d[i + 1 + k][i] = v;
                    }
                }
                Structure::Met(d)
            }
            Backend::Gra => {
                let mut a = vec![vec![false; n]; n];
                let pairs: Vec<(String, String)> = match &s.edges {
                    Some(v) => serde_json::from_value(v.clone()).map_err(|e| Error::Shape(e.to_string()))?,
                    None => vec![],
                };
                for (x, y) in pairs {
                    a[lookup(&labels, &x)?][lookup(&labels, &y)?] = true;
                }
                Structure::Gra(a)
            }
            Backend::MGra => {
                if let Some(vs) = &s.vertices {
                    if *vs != labels {
                        return Err(Error::Shape("`vertices` must equal `elements`".into()));
                    }
                }
                let edges: Vec<String> = match &s.edges {
                    Some(v) => serde_json::from_value(v.clone()).map_err(|e| Error::Shape(e.to_string()))?,
                    None => vec![],
                };
                let empty = BTreeMap::new();
                let (src, tgt) = (s.src.as_ref().unwrap_or(&empty), s.tgt.as_ref().unwrap_or(&empty));
                let end = |m: &BTreeMap<String, String>, e: &str| -> Result<usize> {
                    match m.get(e) {
                        Some(v) => lookup(&labels, v),
                        // Dangling ends are reported by validation.
                        None => Ok(usize::MAX),
                    }
                };
                Structure::MGra(MultiEdges {
                    src: edges.iter().map(|e| end(src, e)).collect::<Result<_>>()?,
                    tgt: edges.iter().map(|e| end(tgt, e)).collect::<Result<_>>()?,
                    labels: edges,
                })
            }
        };
        FiniteObject::new(labels, structure)
    }

    pub fn from_object(x: &FiniteObject) -> RawObject {
        let n = x.len();
        let l = |i: usize| x.label(i).to_string();
        let mut s = RawStructure::default();
        match x.structure() {
            Structure::Pos(_) => {
                s.leq = Some(
                    (0..n)
                        .flat_map(|i| (0..n).map(move |j| (i, j)))
                        .filter(|&(i, j)| i != j && x.leq(i, j))
                        .map(|(i, j)| (l(i), l(j)))
                        .collect(),
                )
            }
            Structure::Met(_) => s.dist = Some((0..n).map(|i| (i + 1..n).map(|j| x.dist(i, j)).collect()).collect()),
            Structure::Gra(_) => {
                let pairs: Vec<(String, String)> = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| x.adj(i, j))
                    .map(|(i, j)| (l(i), l(j)))
                    .collect();
                s.edges = Some(serde_json::to_value(pairs).expect("pairs serialize"));
            }
            Structure::MGra(e) => {
                s.edges = Some(serde_json::to_value(&e.labels).expect("labels serialize"));
                s.src = Some((0..e.len()).map(|k| (e.labels[k].clone(), l(e.src[k]))).collect());
                s.tgt = Some((0..e.len()).map(|k| (e.labels[k].clone(), l(e.tgt[k]))).collect());
            }
        }
        RawObject {
            backend: x.backend(),
            elements: x.labels().to_vec(),
            structure: s,
        }
    }
}

impl RawMorphism {
    pub fn validate(&self) -> Result<Morphism> {
        let dom = Arc::new(self.dom.validate()?);
        let cod = Arc::new(self.cod.validate()?);
        let points = dom
            .labels()
            .iter()
            .map(|a| {
                let b = self.map.get(a).ok_or_else(|| Error::UnboundVariable(a.clone()))?;
                cod.index_of(b).ok_or_else(|| Error::UnknownVar(b.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        let edges = match (dom.edges(), cod.edges()) {
            (Some(de), Some(ce)) => de
                .labels
                .iter()
                .map(|a| {
                    let b = self.edge_map.get(a).ok_or_else(|| Error::UnboundVariable(a.clone()))?;
                    ce.labels
                        .iter()
                        .position(|l| l == b)
                        .ok_or_else(|| Error::UnknownVar(b.clone()))
                })
                .collect::<Result<Vec<_>>>()?,
            _ => vec![],
        };
        Morphism::new(dom, cod, points, edges)
    }

    pub fn from_morphism(f: &Morphism) -> RawMorphism {
        let (d, c) = (f.dom(), f.cod());
        RawMorphism {
            dom: RawObject::from_object(d),
            cod: RawObject::from_object(c),
            map: (0..d.len()).map(|i| (d.label(i).to_string(), c.label(f.apply(i)).to_string())).collect(),
            edge_map: match (d.edges(), c.edges()) {
                (Some(de), Some(ce)) => (0..de.len())
                    .map(|k| (de.labels[k].clone(), ce.labels[f.edges()[k]].clone()))
                    .collect(),
                _ => BTreeMap::new(),
            },
        }
    }
}

pub fn object_from_json(text: &str) -> Result<FiniteObject> {
    let raw: RawObject = serde_json::from_str(text).map_err(|e| Error::Shape(e.to_string()))?;
    raw.validate()
}

pub fn morphism_from_json(text: &str) -> Result<Morphism> {
    let raw: RawMorphism = serde_json::from_str(text).map_err(|e| Error::Shape(e.to_string()))?;
    raw.validate()
}
