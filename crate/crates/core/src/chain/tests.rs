use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::*;
use rand::Rng;
use crate::sample::{random_free_complex, random_unimodular, rng, ComplexBounds};

fn z() -> RingSpec {
    RingSpec::Integers
}

fn zm(m: i64) -> RingSpec {
    RingSpec::modulo(m)
}

fn mat(rows: usize, cols: usize, v: &[i64]) -> Matrix {
    Matrix::from_i64(rows, cols, v)
}

fn form(m: &Module) -> String {
    format!("{}", m.canonical_form())
}

/// `R^{r_0} ← R^{r_1} ← …` given as `(ranks, matrices)`.
fn free(ring: RingSpec, ranks: &[usize], d: &[&[i64]]) -> Complex {
    let ms = (1..ranks.len()).map(|n| mat(ranks[n - 1], ranks[n], d[n - 1])).collect();
    Arc::new(ChainComplex::free(ring, ranks, ms).unwrap())
}

/// `Z/4 -2-> Z/4` in degrees 1, 0.
fn periodic2() -> Complex {
    free(zm(4), &[1, 1], &[&[2]])
}

/// `Z/2` in degrees 0 and 1 with zero differential, over `Z/4`.
fn split2() -> Complex {
    let m = FgModule::cyclic(zm(4), 2);
    Arc::new(ChainComplex::from_matrices(zm(4), vec![m.clone(), m], vec![mat(1, 1, &[0])]).unwrap())
}

#[test]
fn doubling_homology() {
    let c = free(z(), &[1, 1], &[&[2]]);
    assert_eq!(form(&c.homology_module(0)), "Z/2");
    assert_eq!(form(&c.homology_module(1)), "0");
    assert_eq!(form(&c.homology_module(7)), "0");
}

#[test]
fn sphere_homology() {
    let c = ChainComplex::sphere(z(), 3);
    for n in 0..6 {
        let expected = if n == 3 { "Z" } else { "0" };
        assert_eq!(form(&c.homology_module(n)), expected);
    }
}

#[test]
fn rejects_non_complex() {
    let r = ChainComplex::free(z(), &[1, 1, 1], vec![mat(1, 1, &[1]), mat(1, 1, &[1])]);
    assert!(matches!(r, Err(Error::NotAChainComplex { .. })));
}

#[test]
fn postnikov_kills_top_class() {
    let c = Arc::new(ChainComplex::sphere(z(), 1));
    let (p, r) = postnikov_section(&c, 0);
    assert_eq!(p.top(), 2);
    assert_eq!(p.diff(2).matrix(), &mat(1, 1, &[1]));
    for n in 0..4 {
        assert!(p.homology_module(n).is_zero());
    }
    assert!(ChainMap::new(r.source().clone(), r.target().clone(), r.components().to_vec()).is_ok());
}

#[test]
fn postnikov_of_zero_differential() {
    let c = free(z(), &[1, 1], &[&[0]]);
    let (p, _) = postnikov_section(&c, 0);
    assert_eq!(form(&p.homology_module(0)), "Z");
    assert_eq!(form(&p.homology_module(1)), "0");
}

#[test]
fn postnikov_random_homology_profile() {
    let mut g = rng(11);
    for _ in 0..60 {
        let c = Arc::new(random_free_complex(&mut g, &z(), ComplexBounds { max_top: 5, max_rank: 3, max_entry: 3 }));
        for n in 0..=c.top() {
            let (p, r) = postnikov_section(&c, n);
            assert!(ChainMap::new(r.source().clone(), r.target().clone(), r.components().to_vec()).is_ok());
            for k in 0..=c.top() + 2 {
                let hp = p.homology_module(k);
                if k <= n {
                    assert!(hp.isomorphic(&c.homology_module(k)));
                    assert!(r.on_homology(k).is_iso());
                } else {
                    assert!(hp.is_zero());
                }
            }
        }
    }
}

#[test]
fn k_invariant_is_chain_map_with_expected_homology() {
    let c = free(z(), &[1, 1, 1], &[&[3], &[0]]);
    let (e, k, p) = k_invariant(&c, 0);
    assert!(ChainMap::new(p.clone(), e.clone(), k.components().to_vec()).is_ok());
    assert!(e.homology_module(2).isomorphic(&c.homology_module(1)));
}

#[test]
fn k_invariants_of_free_integer_complexes_vanish() {
    let mut g = rng(5);
    for _ in 0..25 {
        let c = Arc::new(random_free_complex(&mut g, &z(), ComplexBounds { max_top: 4, max_rank: 3, max_entry: 3 }));
        for n in 0..c.top() {
            let (e, k, p) = k_invariant(&c, n);
            let classes = homotopy_classes(&p, &e).unwrap();
            let kq = classes.replacement.q.then(&k);
            let h = classes.nullhomotopy(&kq).expect("null-homotopic");
            assert!(h.verify(&kq, &ChainMap::zero(kq.source().clone(), e.clone())));
        }
    }
}

#[test]
fn periodic_k_invariant_is_essential() {
    let c = periodic2();
    let (e, k, p) = k_invariant(&c, 0);
    let classes = homotopy_classes(&p, &e).unwrap();
    let kq = classes.replacement.q.then(&k);
    assert!(!classes.is_nullhomotopic(&kq));
    assert!(classes.nullhomotopy(&kq).is_none());
}

#[test]
fn three_term_periodic_k_invariants() {
    let c = free(zm(4), &[1, 1, 1], &[&[2], &[2]]);
    let essential = |n: usize| {
        let (e, k, p) = k_invariant(&c, n);
        let classes = homotopy_classes(&p, &e).unwrap();
        !classes.is_nullhomotopic(&classes.replacement.q.then(&k))
    };
    assert!(!essential(0));
    assert!(essential(1));
}

#[test]
fn classes_into_zero_are_trivial() {
    let c = free(z(), &[2, 1], &[&[1, 2]]);
    let d = Arc::new(ChainComplex::zero(z()));
    assert!(homotopy_classes(&c, &d).unwrap().group().is_zero());
}

#[test]
fn classes_from_sphere_are_homology() {
    let d = free(z(), &[1, 2, 1], &[&[0, 0], &[2, 0]]);
    for k in 0..3 {
        let s = Arc::new(ChainComplex::sphere(z(), k));
        let g = homotopy_classes(&s, &d).unwrap();
        assert!(g.group().isomorphic(&d.homology_module(k)));
    }
}

#[test]
fn classes_between_moore_objects() {
    // E(Z/2, 1) and E(Z/2, 2) over Z: [.,.] = Ext(Z/2, Z/2) = Z/2.
    let e1 = free(z(), &[0, 1, 1], &[&[], &[2]]);
    let e2 = free(z(), &[0, 0, 1, 1], &[&[], &[], &[2]]);
    let g = homotopy_classes(&e1, &e2).unwrap();
    assert_eq!(form(g.group()), "Z/2");
    for x in g.all_classes().unwrap() {
        let f = g.class_to_map(&x);
        assert!(ChainMap::new(f.source().clone(), f.target().clone(), f.components().to_vec()).is_ok());
        assert_eq!(g.map_to_class(&f).unwrap(), x);
    }
}

#[test]
fn sphere_into_shifted_em_vanishes() {
    let em = |n: usize| {
        let mut ranks = vec![0; n];
        ranks.push(1);
        let ms: Vec<Matrix> = (1..=n).map(|i| Matrix::zeros(ranks[i - 1], ranks[i])).collect();
        Arc::new(ChainComplex::free(z(), &ranks, ms).unwrap())
    };
    let target = em(2);
    for k in 0..4 {
        let s = Arc::new(ChainComplex::sphere(z(), k));
        let g = homotopy_classes(&s, &target).unwrap();
        assert_eq!(g.group().is_zero(), k != 2);
    }
}

#[test]
fn nonfree_source_is_replaced() {
    // Z/2 in degree 0 over Z: replaced by Z -2-> Z.
    let c = Arc::new(ChainComplex::concentrated(Arc::new(FgModule::cyclic(z(), 2)), 0));
    let d = Arc::new(ChainComplex::concentrated(Arc::new(FgModule::cyclic(z(), 2)), 1));
    let g = homotopy_classes(&c, &d).unwrap();
    assert!(!g.replacement.identity);
    assert!(g.replacement.q.is_quasi_iso());
    assert_eq!(form(g.group()), "Z/2");
}

#[test]
fn cone_examples() {
    let c = free(z(), &[2, 1], &[&[1, 3]]);
    let (cone, inc, proj) = mapping_cone(&ChainMap::identity(c.clone()));
    assert!(cone.is_acyclic());
    let cone = Arc::new(cone);
    assert!(ChainMap::new(inc.source().clone(), cone.clone(), inc.components().to_vec()).is_ok());
    assert!(ChainMap::new(cone.clone(), proj.target().clone(), proj.components().to_vec()).is_ok());

    let a = free(z(), &[1], &[]);
    let b = free(z(), &[1, 1], &[&[0]]);
    let (cone, _, _) = mapping_cone(&ChainMap::zero(a.clone(), b.clone()));
    assert_eq!(form(&cone.homology_module(0)), "Z");
    assert_eq!(form(&cone.homology_module(1)), "Z^2");

    let p = ChainMap::from_matrices(a.clone(), a.clone(), vec![mat(1, 1, &[5])]).unwrap();
    let (cone, _, _) = mapping_cone(&p);
    assert_eq!(form(&cone.homology_module(0)), "Z/5");
    assert!(cone.homology_module(1).is_zero());
}

#[test]
fn base_change_examples() {
    let c = free(z(), &[1, 1], &[&[2]]);
    let c2 = base_change(&c, &zm(2)).unwrap();
    assert!(c2.diff(1).is_zero());
    assert_eq!(form(&c2.homology_module(0)), "Z/2");
    assert_eq!(form(&c2.homology_module(1)), "Z/2");
    assert_eq!(base_change(&c, &z()).unwrap(), *c);
    let c3 = free(z(), &[1, 1], &[&[3]]);
    assert!(base_change(&c3, &zm(2)).unwrap().is_acyclic());
}

#[test]
fn base_change_is_functorial() {
    let mut g = rng(3);
    for _ in 0..20 {
        let c = Arc::new(random_free_complex(&mut g, &z(), ComplexBounds { max_top: 3, max_rank: 3, max_entry: 3 }));
        // Automorphisms by conjugating with unimodular bases give composable pairs.
        let (f, _) = conjugate(&mut g, &c);
        let (h, _) = conjugate(&mut g, f.target());
        let ring = zm(6);
        let lhs = base_change_map(&f.then(&h), &ring).unwrap();
        let rhs = base_change_map(&f, &ring).unwrap().then(&base_change_map(&h, &ring).unwrap());
        for n in 0..=c.top() {
            assert_eq!(lhs.comp(n).matrix(), rhs.comp(n).matrix());
        }
    }
}

/// A random isomorphic copy `d` of `c` with the isomorphism `c → d`.
fn conjugate(g: &mut crate::sample::SampleRng, c: &Complex) -> (ChainMap, Complex) {
    let us: Vec<(Matrix, Matrix)> = (0..=c.top()).map(|n| random_unimodular(g, c.term(n).gens(), 6)).collect();
    let ranks: Vec<usize> = (0..=c.top()).map(|n| c.term(n).gens()).collect();
    let ds = (1..=c.top())
        .map(|n| us[n - 1].0.mul(c.diff(n).matrix()).mul(&us[n].1))
        .collect();
    let d = Arc::new(ChainComplex::free(c.ring().clone(), &ranks, ds).unwrap());
    let f = ChainMap::from_matrices(c.clone(), d.clone(), us.iter().map(|u| u.0.clone()).collect()).unwrap();
    (f, d)
}

#[test]
fn identity_equivalence() {
    let c = free(z(), &[2, 2, 1], &[&[1, 0, 0, 2], &[0, 0]]);
    let eq = find_homotopy_equivalence(&c, &c).unwrap().unwrap();
    assert!(eq.verify());
}

#[test]
fn equivalences_of_shuffled_complexes_with_contractible_summands() {
    let mut g = rng(17);
    for _ in 0..40 {
        let c = Arc::new(random_free_complex(&mut g, &z(), ComplexBounds { max_top: 4, max_rank: 3, max_entry: 3 }));
        let (_, d) = conjugate(&mut g, &c);
        // Add a cone of the identity on Z in degrees (k+1, k).
        let k = g.gen_range(0..=d.top());
        let mut ranks = vec![0; k + 2];
        ranks[k] = 1;
        ranks[k + 1] = 1;
        let ms = (1..ranks.len())
            .map(|n| {
                let mut m = Matrix::zeros(ranks[n - 1], ranks[n]);
                if n == k + 1 {
                    m.set(0, 0, Int::ONE);
                }
                m
            })
            .collect();
        let contractible = ChainComplex::free(z(), &ranks, ms).unwrap();
        let d = Arc::new(d.direct_sum(&contractible));
        let eq = find_homotopy_equivalence(&c, &d).unwrap().expect("equal homology");
        assert!(eq.verify());
    }
}

#[test]
fn minimal_model_is_a_retract() {
    let mut g = rng(23);
    for _ in 0..40 {
        let c = Arc::new(random_free_complex(&mut g, &z(), ComplexBounds::default()));
        let (r, f, gm, h) = minimal_model(&c).unwrap();
        assert!(ChainMap::new(c.clone(), r.clone(), f.components().to_vec()).is_ok());
        assert!(ChainMap::new(r.clone(), c.clone(), gm.components().to_vec()).is_ok());
        let fg = gm.then(&f);
        assert_eq!(fg, ChainMap::identity(r.clone()));
        assert!(h.verify(&ChainMap::identity(c.clone()), &f.then(&gm)));
    }
}

#[test]
fn different_homology_has_no_equivalence() {
    let c = free(z(), &[1, 1], &[&[2]]);
    let d = free(z(), &[1, 1], &[&[3]]);
    assert!(find_homotopy_equivalence(&c, &d).unwrap().is_none());
}

#[test]
fn periodic_is_not_equivalent_to_split() {
    let c = periodic2();
    let d = split2();
    assert!(c.homology_module(0).isomorphic(&d.homology_module(0)));
    assert!(c.homology_module(1).isomorphic(&d.homology_module(1)));
    assert!(find_homotopy_equivalence(&c, &d).unwrap().is_none());
    assert!(find_quasi_iso(&c, &d).unwrap().is_none());
}

#[test]
fn finite_equivalence_found_between_isomorphic_copies() {
    let c = free(zm(4), &[1, 2], &[&[2, 1]]);
    let d = free(zm(4), &[1, 2], &[&[1, 2]]);
    let eq = find_homotopy_equivalence(&c, &d).unwrap().expect("isomorphic");
    assert!(eq.verify());
    let q = find_quasi_iso(&c, &d).unwrap().expect("isomorphic");
    assert!(q.is_quasi_iso());
}
