use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::chain::find_homotopy_equivalence;
use crate::homalg::{enumerate_extensions, extensions_equivalent, hom, Ext1};
use crate::sample::{random_free_complex, rng, ComplexBounds};

fn z() -> RingSpec {
    RingSpec::Integers
}

fn cyc(n: i64) -> Module {
    Arc::new(FgModule::cyclic(z(), n))
}

fn form(m: &Module) -> String {
    format!("{}", m.canonical_form())
}

fn klein() -> Module {
    Arc::new(FgModule::new(z(), 2, vec![vec![Int::from(2), Int::ZERO], vec![Int::ZERO, Int::from(2)]]))
}

fn family() -> Vec<Module> {
    vec![cyc(2), cyc(3), cyc(4), klein()]
}

#[test]
fn em_of_free_module_is_a_sphere() {
    let e = em_object(&Arc::new(FgModule::free(z(), 1)), 3);
    assert_eq!(e.realization.top(), 3);
    assert_eq!(e.realization.term(3).gens(), 1);
    assert_eq!(form(&e.realization.homology_module(3)), "Z");
}

#[test]
fn em_of_z2_is_the_moore_complex() {
    let e = em_object(&cyc(2), 1);
    let r = &e.realization;
    assert_eq!(r.top(), 2);
    assert_eq!(r.diff(2).matrix(), &Matrix::from_i64(1, 1, &[2]));
    for k in 0..=3 {
        let h = form(&r.homology_module(k));
        assert_eq!(h, if k == 1 { "Z/2" } else { "0" });
    }
}

#[test]
fn em_homology_is_concentrated() {
    for m in family() {
        for n in 0..4 {
            let e = em_object(&m, n);
            for k in 0..=n + 2 {
                let h = e.realization.homology_module(k);
                if k == n {
                    assert!(h.isomorphic(&m));
                } else {
                    assert!(h.is_zero());
                }
            }
        }
    }
    let r = RingSpec::modulo(4);
    let m = Arc::new(FgModule::cyclic(r, 2));
    let e = em_object(&m, 2);
    assert!(e.realization.homology_module(2).isomorphic(&m));
    assert!(e.realization.homology_module(1).is_zero());
}

#[test]
fn presentations_of_the_same_module_are_equivalent() {
    // Z/2 ⊕ Z/4 on two generators, and on three with g1 + g3 = 0.
    let a: Module = Arc::new(FgModule::from_form(z(), &[Int::from(2), Int::from(4)], 0));
    let v = |xs: [i64; 3]| xs.iter().map(|&x| Int::from(x)).collect::<Vec<_>>();
    let b: Module = Arc::new(FgModule::new(z(), 3, vec![v([2, 0, 0]), v([0, 4, 0]), v([1, 0, 1])]));
    assert!(a.isomorphic(&b));
    let (ea, eb) = (em_object(&a, 2), em_object(&b, 2));
    let w = find_homotopy_equivalence(&ea.realization, &eb.realization).unwrap().unwrap();
    assert!(w.verify());
}

#[test]
fn cohomology_vanishes_on_spheres_off_dimension() {
    for m in family() {
        for n in 0..4 {
            for k in 0..5 {
                let s = Arc::new(ChainComplex::sphere(z(), k));
                let g = cohomology_group(&s, &m, n).unwrap();
                if k == n {
                    assert!(g.isomorphic(&m));
                } else {
                    assert!(g.is_zero(), "H^{}(S^{}; {})", n, k, form(&m));
                }
            }
        }
    }
}

#[test]
fn fundamental_class_is_identity_in_hom() {
    for m in family() {
        let c = fundamental_class(&m, 2).unwrap();
        assert!(!c.is_zero());
        assert!(c.round_trips());
        assert!(c.classes.group().isomorphic(&hom(&m, &m).unwrap()));
    }
}

#[test]
fn cohomology_is_additive() {
    let mut r = rng(11);
    let b = ComplexBounds {
        max_top: 3,
        max_rank: 3,
        max_entry: 3,
    };
    for i in 0..20 {
        let x = Arc::new(random_free_complex(&mut r, &z(), b));
        let y = Arc::new(random_free_complex(&mut r, &z(), b));
        let s = Arc::new(x.direct_sum(&y));
        let m = &family()[i % 4];
        for n in 0..3 {
            let gs = cohomology_group(&s, m, n).unwrap();
            let gx = cohomology_group(&x, m, n).unwrap();
            let gy = cohomology_group(&y, m, n).unwrap();
            let prod = crate::module::direct_sum(&z(), &[&gx, &gy]);
            assert!(gs.isomorphic(&prod));
        }
    }
}

#[test]
fn split_extension_has_zero_class_and_back() {
    for a in family() {
        for b in family() {
            let split = ExtensionClass::from_cocycle(&b, &a, &vec![Int::ZERO; a.relations().rank() * b.gens()]).unwrap();
            let c = extension_to_class(&split, 2).unwrap();
            assert!(c.is_zero());
            let e = class_to_extension(&c).unwrap();
            assert!(extensions_equivalent(&e, &split).unwrap());
        }
    }
}

#[test]
fn z4_gives_the_nonzero_class() {
    let ext = enumerate_extensions(&cyc(2), &cyc(2)).unwrap();
    assert_eq!(ext.len(), 2);
    let nonsplit = ext.iter().find(|e| form(&e.total) == "Z/4").unwrap();
    let c = extension_to_class(nonsplit, 2).unwrap();
    assert_eq!(form(c.classes.group()), "Z/2");
    assert!(!c.is_zero());
    assert!(c.round_trips());
    let back = class_to_extension(&c).unwrap();
    assert_eq!(form(&back.total), "Z/4");
}

/// Every class of `[E(J″, n), E(J′, n+1)]` against the brute-force
/// enumeration of extensions.
fn check_bijection(quotient: &Module, sub: &Module, n: usize) {
    let reps = enumerate_extensions(quotient, sub).unwrap();
    let (_, _, hc) = extension_classes(quotient, sub, n).unwrap();
    let order = hc.group().order().unwrap();
    let ext1 = Ext1::new(quotient, sub).unwrap();
    assert_eq!(order, ext1.module().order().unwrap());
    assert_eq!(Int::from(reps.len()), order);
    let mut seen: Vec<Vec<Int>> = Vec::new();
    for e in &reps {
        let c = extension_to_class(e, n).unwrap();
        assert!(!seen.contains(&c.coords));
        seen.push(c.coords.clone());
        let back = class_to_extension(&c).unwrap();
        assert!(extensions_equivalent(&back, e).unwrap());
        assert_eq!(extension_to_class(&back, n).unwrap().coords, c.coords);
    }
    for coords in hc.all_classes().unwrap() {
        let c = CohomologyClass {
            coords,
            ..extension_to_class(&reps[0], n).unwrap()
        };
        let e = class_to_extension(&c).unwrap();
        assert_eq!(extension_to_class(&e, n).unwrap().coords, c.coords);
        assert_eq!(reps.iter().filter(|r| extensions_equivalent(r, &e).unwrap()).count(), 1);
    }
}

#[test]
fn bijection_with_extensions_over_the_test_family() {
    for a in family() {
        for b in family() {
            for n in [2, 3] {
                check_bijection(&a, &b, n);
            }
        }
    }
}

#[test]
fn bijection_over_z_mod_4() {
    let r = RingSpec::modulo(4);
    let two: Module = Arc::new(FgModule::cyclic(r.clone(), 2));
    let four: Module = Arc::new(FgModule::free(r, 1));
    for (a, b) in [(&two, &two), (&two, &four), (&four, &two)] {
        check_bijection(a, b, 2);
    }
}

#[test]
fn classes_are_stable_in_dimension() {
    for a in family() {
        for b in family() {
            let g: Vec<String> = (0..5).map(|n| form(extension_classes(&a, &b, n).unwrap().2.group())).collect();
            assert!(g.iter().all(|x| *x == g[0]));
        }
    }
}

#[test]
fn classes_are_natural_in_the_sub_module() {
    // Push out along Z/2 -2-> Z/4; the class moves by composing with E(j, n+1).
    let j = ModuleMap::new(cyc(2), cyc(4), Matrix::from_i64(1, 1, &[2])).unwrap();
    for quotient in family() {
        for e in enumerate_extensions(&quotient, &cyc(2)).unwrap() {
            let c = e.cocycle().unwrap();
            let pushed: Vec<Int> = c.chunks(1).flat_map(|x| j.apply(x)).collect();
            let e2 = ExtensionClass::from_cocycle(&cyc(4), &quotient, &pushed).unwrap();
            for n in [2, 3] {
                let c1 = extension_to_class(&e, n).unwrap();
                let c2 = extension_to_class(&e2, n).unwrap();
                let ej = em_map(&j, n + 1).unwrap();
                let moved = c1.representative().then(&ej);
                assert_eq!(c2.classes.map_to_class(&moved).unwrap(), c2.coords);
            }
        }
    }
}

#[test]
fn allowability_trivial_cases() {
    let x = em_object(&cyc(2), 4);
    let k_id = fundamental_class(&cyc(2), 4).unwrap();
    let k_zero = CohomologyClass {
        coords: vec![Int::ZERO; k_id.coords.len()],
        ..k_id.clone()
    };
    for e in enumerate_extensions(&cyc(2), &cyc(2)).unwrap() {
        assert!(is_allowable(&e, &k_zero, 2).unwrap());
        let split = form(&e.total) != "Z/4";
        // The identity k-invariant obstructs exactly the nonsplit extension.
        assert_eq!(is_allowable(&e, &k_id, 2).unwrap(), split);
    }
    assert!(is_allowable(&enumerate_extensions(&cyc(2), &cyc(2)).unwrap()[0], &k_id, 3).is_err());
    drop(x);
}

#[test]
fn allowability_over_z_mod_4() {
    let r = RingSpec::modulo(4);
    let two: Module = Arc::new(FgModule::cyclic(r.clone(), 2));
    let k_id = fundamental_class(&two, 3).unwrap();
    for e in enumerate_extensions(&two, &two).unwrap() {
        let c = extension_to_class(&e, 3).unwrap();
        assert_eq!(is_allowable(&e, &k_id, 1).unwrap(), c.is_zero());
    }
}
