use std::sync::Arc;

use proptest::prelude::*;

use wb_core::dist::Dist;
use wb_core::limits::Limits;
use wb_core::vbase::{
    coequalizer, copair, coproduct, discretize, enumerate_morphisms, enumerate_objects, hom_points, hom_points_map,
    product, Backend, FiniteObject, Morphism,
};

fn objects(backend: Backend, max: usize) -> Vec<Arc<FiniteObject>> {
    enumerate_objects(backend, max, &Limits::default().met_grid)
        .into_iter()
        .map(Arc::new)
        .collect()
}

/// Structure preservation checked straight from the definitions.
fn preserves(x: &FiniteObject, y: &FiniteObject, p: &[usize]) -> bool {
    let n = x.len();
    (0..n).all(|i| {
        (0..n).all(|j| match x.backend() {
            Backend::Pos => !x.leq(i, j) || y.leq(p[i], p[j]),
            Backend::Met => y.dist(p[i], p[j]) <= x.dist(i, j),
            Backend::Gra => !x.adj(i, j) || y.adj(p[i], p[j]),
            Backend::MGra => unreachable!(),
        })
    })
}

fn all_functions(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|f| {
                (0..m).map(move |v| {
                    let mut g = f.clone();
                    g.push(v);
                    g
                })
            })
            .collect();
    }
    out
}

#[test]
fn enumeration_is_complete_and_sound() {
    let limits = Limits::default();
    for backend in [Backend::Pos, Backend::Met, Backend::Gra] {
        let objs = objects(backend, 3);
        for x in &objs {
            for y in &objs {
                let mut got: Vec<Vec<usize>> = enumerate_morphisms(x, y, &limits)
                    .unwrap()
                    .iter()
                    .map(|f| f.points().to_vec())
                    .collect();
                let mut want: Vec<Vec<usize>> = all_functions(x.len(), y.len())
                    .into_iter()
                    .filter(|p| preserves(x, y, p))
                    .collect();
                got.sort();
                want.sort();
                assert_eq!(got, want, "{backend} {x:?} -> {y:?}");
            }
        }
    }
}

#[test]
fn products_are_universal() {
    let limits = Limits::default();
    for backend in [Backend::Pos, Backend::Met] {
        let objs = objects(backend, 2);
        for x in &objs {
            for y in &objs {
                let cone = product(x, y, &limits).unwrap();
                for z in &objs {
                    let into: Vec<Morphism> = enumerate_morphisms(z, &cone.object, &limits).unwrap();
                    for a in enumerate_morphisms(z, x, &limits).unwrap() {
                        for b in enumerate_morphisms(z, y, &limits).unwrap() {
                            let hits = into
                                .iter()
                                .filter(|h| {
                                    h.then(&cone.legs[0]).unwrap().same_map(&a) && h.then(&cone.legs[1]).unwrap().same_map(&b)
                                })
                                .count();
                            assert_eq!(hits, 1);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn coproducts_are_universal() {
    let limits = Limits::default();
    for backend in [Backend::Pos, Backend::Met, Backend::Gra] {
        let objs = objects(backend, 2);
        for x in &objs {
            for y in &objs {
                let cone = coproduct(&[x.clone(), y.clone()]).unwrap();
                for z in &objs {
                    let out: Vec<Morphism> = enumerate_morphisms(&cone.object, z, &limits).unwrap();
                    for a in enumerate_morphisms(x, z, &limits).unwrap() {
                        for b in enumerate_morphisms(y, z, &limits).unwrap() {
                            let hits = out
                                .iter()
                                .filter(|h| {
                                    cone.legs[0].then(h).unwrap().same_map(&a) && cone.legs[1].then(h).unwrap().same_map(&b)
                                })
                                .count();
                            assert_eq!(hits, 1);
                            let c = copair(&cone, &[a.clone(), b.clone()]).unwrap();
                            assert!(cone.legs[0].then(&c).unwrap().same_map(&a));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn coequalizers_are_universal() {
    let limits = Limits::default();
    for backend in [Backend::Pos, Backend::Met] {
        let objs = objects(backend, 2);
        let targets = objects(backend, 3);
        for x in &objs {
            for y in &targets {
                let maps = enumerate_morphisms(x, y, &limits).unwrap();
                for f in &maps {
                    for g in &maps {
                        let (_, q) = coequalizer(f, g).unwrap();
                        assert!(f.then(&q).unwrap().same_map(&g.then(&q).unwrap()));
                        for z in &objs {
                            let via: Vec<Morphism> = enumerate_morphisms(q.cod(), z, &limits).unwrap();
                            for h in enumerate_morphisms(y, z, &limits).unwrap() {
                                let coequalizes = f.then(&h).unwrap().same_map(&g.then(&h).unwrap());
                                let hits = via.iter().filter(|u| q.then(u).unwrap().same_map(&h)).count();
                                assert_eq!(hits, usize::from(coequalizes));
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn discretization_counit_is_the_point_inclusion() {
    for backend in [Backend::Pos, Backend::Met, Backend::Gra] {
        for x in objects(backend, 3) {
            let d = discretize(&x);
            assert!(d.discrete.is_discrete());
            assert_eq!(d.counit.points(), hom_points(&x).as_slice());
            assert_eq!(hom_points_map(&d.counit).len(), hom_points(&d.discrete).len());
        }
    }
}

#[test]
fn point_functor_preserves_composition_and_identities() {
    let limits = Limits::default();
    for backend in [Backend::Pos, Backend::Gra] {
        let objs = objects(backend, 2);
        for x in &objs {
            let id = Morphism::identity(x);
            assert!(hom_points_map(&id).iter().all(|&(p, q)| p == q));
            for y in &objs {
                for z in &objs {
                    for f in enumerate_morphisms(x, y, &limits).unwrap() {
                        for g in enumerate_morphisms(y, z, &limits).unwrap() {
                            let fg = hom_points_map(&f.then(&g).unwrap());
                            let gf: Vec<(usize, usize)> =
                                hom_points_map(&f).into_iter().map(|(p, q)| (p, g.apply(q))).collect();
                            assert_eq!(fg, gf);
                            let pts_g: Vec<usize> = hom_points_map(&g).iter().map(|&(p, _)| p).collect();
                            assert!(hom_points_map(&f).iter().all(|(_, q)| pts_g.contains(q)));
                        }
                    }
                }
            }
        }
    }
}

fn floyd(mut d: Vec<Vec<Dist>>) -> Vec<Vec<Dist>> {
    let n = d.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

fn weight() -> impl Strategy<Value = Dist> {
    prop_oneof![
        Just(Dist::ratio(1, 2)),
        Just(Dist::int(1)),
        Just(Dist::int(2)),
        Just(Dist::int(3)),
        Just(Dist::Inf)
    ]
}

/// A metric space closed under shortest paths, with 2 to 5 points.
fn metric_space() -> impl Strategy<Value = FiniteObject> {
    (2usize..=5).prop_flat_map(|n| {
        proptest::collection::vec(weight(), n * (n - 1) / 2).prop_map(move |ws| {
            let mut d = vec![vec![Dist::ZERO; n]; n];
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    d[i][j] = ws[k];
                    d[j][i] = ws[k];
                    k += 1;
                }
            }
            let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
            FiniteObject::metric(&labels, floyd(d)).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn met_coequalizer_is_the_glued_path_metric(x in metric_space(), i in 0usize..5, j in 0usize..5) {
        let x = Arc::new(x);
        let n = x.len();
        let (i, j) = (i % n, j % n);
        let one = Arc::new(FiniteObject::unit(Backend::Met));
        let f = Morphism::new(one.clone(), x.clone(), vec![i], vec![]).unwrap();
        let g = Morphism::new(one, x.clone(), vec![j], vec![]).unwrap();
        let (q_obj, q) = coequalizer(&f, &g).unwrap();
        let mut d: Vec<Vec<Dist>> = (0..n).map(|a| (0..n).map(|b| x.dist(a, b)).collect()).collect();
        d[i][j] = Dist::ZERO;
        d[j][i] = Dist::ZERO;
        let glued = floyd(d);
        for a in 0..n {
            for b in 0..n {
                prop_assert_eq!(q_obj.dist(q.apply(a), q.apply(b)), glued[a][b]);
                prop_assert_eq!(q.apply(a) == q.apply(b), glued[a][b].is_zero());
            }
        }
    }

    #[test]
    fn met_product_is_the_sup_metric(x in metric_space(), y in metric_space()) {
        let (x, y) = (Arc::new(x), Arc::new(y));
        let cone = product(&x, &y, &Limits::default()).unwrap();
        let p = &cone.object;
        for a in 0..p.len() {
            for b in 0..p.len() {
                let (l, r) = (&cone.legs[0], &cone.legs[1]);
                prop_assert_eq!(p.dist(a, b), x.dist(l.apply(a), l.apply(b)).max(y.dist(r.apply(a), r.apply(b))));
            }
        }
    }
}
