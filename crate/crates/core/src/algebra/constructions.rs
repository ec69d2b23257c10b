use std::collections::HashMap;
use std::sync::Arc;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::theory::Theory;
use crate::vbase::{
    decode_tuple, encode_tuple, enumerate_constrained, enumerate_morphisms, induced_subobject, product_many, quotient,
    Backend, FiniteObject, Morphism, Structure,
};

use super::{tuple_respects, Algebra, UNDEF};

/// The one-point algebra.
pub fn terminal_algebra(theory: &Arc<Theory>) -> Algebra {
    let carrier = Arc::new(FiniteObject::terminal(theory.backend()));
    Algebra::from_fn(theory.clone(), carrier, |_, _| 0).expect("constant tables on a point are well-shaped")
}

/// Product of a nonempty list of algebras of one theory, with projections.
pub fn product_algebra(parts: &[Algebra], limits: &Limits) -> Result<(Algebra, Vec<Morphism>)> {
    let first = parts
        .first()
        .ok_or_else(|| Error::Shape("product of no algebras; use terminal_algebra".into()))?;
    if parts.iter().any(|p| !Arc::ptr_eq(&p.theory, &first.theory) && *p.theory != *first.theory) {
        return Err(Error::Shape("product of algebras of different theories".into()));
    }
    let carriers: Vec<Arc<FiniteObject>> = parts.iter().map(|p| p.carrier.clone()).collect();
    let cone = product_many(&carriers, limits)?;
    let radices: Vec<usize> = parts.iter().map(|p| p.len()).collect();
    let alg = Algebra::from_fn(first.theory.clone(), cone.object.clone(), |k, args| {
        let comps: Vec<Vec<usize>> = args.iter().map(|&a| decode_tuple(a, &radices)).collect();
        let mut out = Vec::with_capacity(parts.len());
        for (j, p) in parts.iter().enumerate() {
            let col: Vec<usize> = comps.iter().map(|c| c[j]).collect();
            let v = p.apply(k, &col);
            if v == UNDEF {
                // Off the product's domain too; normalized away by `new`.
                return 0;
            }
            out.push(v);
        }
        encode_tuple(&out, &radices)
    })?;
    Ok((alg, cone.legs))
}

/// Every full subobject closed under the operations, by increasing bitmask
/// of elements, with its inclusion.
pub fn subalgebras(a: &Algebra, limits: &Limits) -> Result<Vec<(Algebra, Morphism)>> {
    let n = a.len();
    limits.check_maps("subalgebras", n, 2)?;
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let inside = |i: usize| mask >> i & 1 == 1;
        let closed = (0..a.tables.len()).all(|k| {
            let radices = a.radices(k);
            a.tables[k].iter().enumerate().all(|(idx, &v)| {
                v == UNDEF || inside(v) || !decode_tuple(idx, &radices).into_iter().all(inside)
            })
        });
        if !closed {
            continue;
        }
        let keep: Vec<usize> = (0..n).filter(|&i| inside(i)).collect();
        let incl = induced_subobject(&a.carrier, &keep, &[]);
        let pos = |i: usize| keep.iter().position(|&k| k == i).expect("closed subset");
        let sub = Algebra::from_fn(a.theory.clone(), incl.dom().clone(), |k, args| {
            let v = a.apply(k, &args.iter().map(|&x| keep[x]).collect::<Vec<_>>());
            if v == UNDEF {
                0
            } else {
                pos(v)
            }
        })?;
        out.push((sub, incl));
    }
    Ok(out)
}

/// A quotient algebra with its carrier map and, when one exists, a
/// structure-preserving section of it.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: Algebra,
    pub map: Morphism,
    pub section: Option<Morphism>,
}

/// Every quotient algebra: partitions of the carrier (restricted growth
/// order) whose quotient object keeps the classes apart and through which
/// the operations descend to a valid algebra.
pub fn quotients(a: &Algebra, limits: &Limits) -> Result<Vec<Quotient>> {
    let n = a.len();
    let bell = bell_number(n);
    if bell > limits.max_maps {
        return Err(Error::SizeLimitExceeded {
            what: "carrier partitions",
            requested: bell,
            cap: limits.max_maps,
        });
    }
    let mut out = Vec::new();
    let mut cls = vec![0usize; n];
    partitions(&mut cls, 0, 0, &mut |cls| {
        if let Some(q) = descend(a, cls) {
            out.push(q);
        }
    });
    Ok(out)
}

/// The quotients that admit a section.
pub fn split_quotients(a: &Algebra, limits: &Limits) -> Result<Vec<Quotient>> {
    Ok(quotients(a, limits)?.into_iter().filter(|q| q.section.is_some()).collect())
}

/// Least morphism `s` (lexicographic) with `s` followed by `q` the identity.
pub fn split_section(q: &Morphism) -> Option<Morphism> {
    let mut found = None;
    enumerate_constrained(q.cod(), q.dom(), |b, a| q.apply(a) == b, |s| {
        if s.then(q).is_ok_and(|c| c.is_identity()) {
            found = Some(s);
            false
        } else {
            true
        }
    });
    found
}

fn descend(a: &Algebra, cls: &[usize]) -> Option<Quotient> {
    let m = cls.iter().max().map_or(0, |&c| c + 1);
    let (b, q) = quotient(&a.carrier, cls).ok()?;
    if b.len() != m {
        return None;
    }
    let mut tables = Vec::with_capacity(a.tables.len());
    for k in 0..a.tables.len() {
        let arity = a.arity(k);
        let mut table = vec![UNDEF; m.pow(arity as u32)];
        let radices = a.radices(k);
        for (idx, &v) in a.tables[k].iter().enumerate() {
            if v == UNDEF {
                continue;
            }
            let image: Vec<usize> = decode_tuple(idx, &radices).into_iter().map(|x| q.apply(x)).collect();
            let slot = &mut table[encode_tuple(&image, &vec![m; arity])];
            if *slot == UNDEF {
                *slot = q.apply(v);
            } else if *slot != q.apply(v) {
                return None;
            }
        }
        let decl = &a.theory.signature.ops[k];
        for (idx, &v) in table.iter().enumerate() {
            if v == UNDEF && tuple_respects(&decl.arity.object, &b, &decode_tuple(idx, &vec![m; arity])) {
                return None;
            }
        }
        tables.push(table);
    }
    let algebra = Algebra::new(a.theory.clone(), b, tables).ok()?;
    if !algebra.is_algebra() {
        return None;
    }
    let section = split_section(&q);
    Some(Quotient { algebra, map: q, section })
}

/// Restricted growth strings of length `cls.len()`.
fn partitions(cls: &mut Vec<usize>, i: usize, used: usize, visit: &mut impl FnMut(&[usize])) {
    if i == cls.len() {
        visit(cls);
        return;
    }
    for c in 0..=used {
        cls[i] = c;
        partitions(cls, i + 1, used.max(c + 1), visit);
    }
}

fn bell_number(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let y = next.last().unwrap().saturating_add(x);
            next.push(y);
        }
        row = next;
    }
    row[0]
}

/// The algebra of morphisms `V → carrier(A)` under the pointwise structure
/// (order, or sup distance) and pointwise operations.
pub fn cotensor_algebra(v: &Arc<FiniteObject>, a: &Algebra, limits: &Limits) -> Result<Algebra> {
    let backend = a.backend();
    if !matches!(backend, Backend::Pos | Backend::Met) {
        return Err(Error::Unsupported(format!("cotensors over {backend}")));
    }
    if v.backend() != backend {
        return Err(Error::BackendMismatch { expected: backend, found: v.backend() });
    }
    let maps: Vec<Vec<usize>> = enumerate_morphisms(v, &a.carrier, limits)?
        .into_iter()
        .map(|f| f.points().to_vec())
        .collect();
    limits.check_carrier("cotensor", maps.len())?;
    let c = &a.carrier;
    let labels: Vec<String> = maps
        .iter()
        .map(|f| format!("[{}]", f.iter().map(|&x| c.label(x)).collect::<Vec<_>>().join(",")))
        .collect();
    let pts = 0..v.len();
    let structure = match backend {
        Backend::Pos => Structure::Pos(
            maps.iter()
                .map(|f| maps.iter().map(|g| pts.clone().all(|i| c.leq(f[i], g[i]))).collect())
                .collect(),
        ),
        _ => Structure::Met(
            maps.iter()
                .map(|f| maps.iter().map(|g| pts.clone().map(|i| c.dist(f[i], g[i])).fold(Dist::ZERO, Dist::max)).collect())
                .collect(),
        ),
    };
    let carrier = Arc::new(FiniteObject::new(labels, structure)?);
    let index: HashMap<&[usize], usize> = maps.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
    let alg = Algebra::from_fn(a.theory.clone(), carrier, |k, args| {
        let value: Vec<usize> = pts
            .clone()
            .map(|i| a.apply(k, &args.iter().map(|&f| maps[f][i]).collect::<Vec<_>>()))
            .collect();
        // Misses happen off the domain (normalized away) or when `A` is invalid.
        index.get(value.as_slice()).copied().unwrap_or(0)
    })?;
    {
        for k in 0..alg.tables.len() {
            let radices = alg.radices(k);
            for (idx, &val) in alg.tables[k].iter().enumerate() {
                if val == UNDEF {
                    continue;
                }
                let args = decode_tuple(idx, &radices);
                let value: Vec<usize> = pts
                    .clone()
                    .map(|i| a.apply(k, &args.iter().map(|&f| maps[f][i]).collect::<Vec<_>>()))
                    .collect();
                if !index.contains_key(value.as_slice()) {
                    return Err(Error::Invariant(format!(
                        "pointwise `{}` leaves the cotensor carrier",
                        a.theory.signature.ops[k].name
                    )));
                }
            }
        }
    }
    Ok(alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::canon::is_isomorphic_algebra;
    use crate::algebra::tests::max_monoid;
    use crate::freeterm::parse_equation;
    use crate::theory::parse_theory;

    fn l() -> Limits {
        Limits::default()
    }

    #[test]
    fn product_with_terminal_is_iso() {
        let a = max_monoid(2);
        let t = terminal_algebra(&a.theory);
        let (p, legs) = product_algebra(&[a.clone(), t], &l()).unwrap();
        assert!(p.is_algebra());
        assert!(is_isomorphic_algebra(&p, &a));
        assert!(p.is_homomorphism(&a, &legs[0]));
    }

    #[test]
    fn square_is_commutative() {
        let a = max_monoid(2);
        let (sq, _) = product_algebra(&[a.clone(), a.clone()], &l()).unwrap();
        assert_eq!(sq.len(), 4);
        assert!(sq.is_algebra());
        let comm = parse_equation("contextY [*] ; contextX [x, y] |- mul(x,y) == mul(y,x)", &a.theory, 1, &l()).unwrap();
        assert!(sq.satisfies(&comm).holds);
    }

    #[test]
    fn subalgebras_of_max_monoid() {
        let subs = subalgebras(&max_monoid(2), &l()).unwrap();
        let carriers: Vec<Vec<usize>> = subs.iter().map(|(_, i)| i.points().to_vec()).collect();
        assert_eq!(carriers, vec![vec![0], vec![0, 1]]);
        let bare = Arc::new(parse_theory("theory b over pos { }").unwrap());
        let a = Algebra::from_fn(bare, Arc::new(FiniteObject::chain(3)), |_, _| 0).unwrap();
        assert_eq!(subalgebras(&a, &l()).unwrap().len(), 8);
    }

    #[test]
    fn quotients_and_sections() {
        let bare = Arc::new(parse_theory("theory b over pos { }").unwrap());
        let anti = Algebra::from_fn(bare.clone(), Arc::new(FiniteObject::antichain(2)), |_, _| 0).unwrap();
        let qs = split_quotients(&anti, &l()).unwrap();
        assert_eq!(qs.len(), 2);
        assert_eq!(qs[0].algebra.len(), 1);
        assert!(qs[1].map.is_identity());
        assert!(qs[1].section.as_ref().unwrap().is_identity());
        // Antichain onto the chain is bijective but has no monotone section.
        let chain = Arc::new(FiniteObject::chain(2));
        let f = Morphism::new(Arc::new(FiniteObject::antichain(2)), chain, vec![0, 1], vec![]).unwrap();
        assert!(split_section(&f).is_none());
    }

    #[test]
    fn max_monoid_quotients_descend() {
        let a = max_monoid(3);
        let qs = quotients(&a, &l()).unwrap();
        // Congruences of max on a 3-chain that keep order: interval partitions.
        let sizes: Vec<usize> = qs.iter().map(|q| q.algebra.len()).collect();
        assert_eq!(sizes, vec![1, 2, 2, 3]);
        assert!(qs.iter().all(|q| q.section.is_some() && q.algebra.is_algebra()));
    }

    #[test]
    fn cotensor_of_max_monoid() {
        let a = max_monoid(2);
        let v = Arc::new(FiniteObject::chain(2));
        let c = cotensor_algebra(&v, &a, &l()).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.is_algebra());
        let comm = parse_equation("contextY [*] ; contextX [x, y] |- mul(x,y) == mul(y,x)", &a.theory, 1, &l()).unwrap();
        assert!(c.satisfies(&comm).holds);
        let unit = Arc::new(FiniteObject::unit(Backend::Pos));
        assert!(is_isomorphic_algebra(&cotensor_algebra(&unit, &a, &l()).unwrap(), &a));
    }

    #[test]
    fn metric_cotensor_is_valid() {
        let t = Arc::new(parse_theory("theory u over met { op u : 1; }").unwrap());
        let three = Arc::new(
            FiniteObject::metric_from_pairs(&["a", "b", "c"], &[(0, 1, Dist::int(1)), (1, 2, Dist::int(1)), (0, 2, Dist::int(2))])
                .unwrap(),
        );
        let a = Algebra::from_fn(t, three.clone(), |_, x| x[0]).unwrap();
        let v = Arc::new(FiniteObject::metric_from_pairs(&["p", "q"], &[(0, 1, Dist::int(1))]).unwrap());
        let c = cotensor_algebra(&v, &a, &l()).unwrap();
        assert!(c.is_algebra());
        assert!(c.len() > 3);
    }

    #[test]
    fn bell_numbers() {
        assert_eq!((0..6).map(bell_number).collect::<Vec<_>>(), vec![1, 1, 2, 5, 15, 52]);
    }
}
