//! The acceptance suite: one line per criterion, nonzero exit on any failure.
//! Run with `cargo test -p moore-tower --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use moore_tower_core::chain::{
    base_change, find_homotopy_equivalence, homotopy_classes, k_invariant, postnikov_section, ChainComplex,
    ChainMap, Complex,
};
use moore_tower_core::compare::{comparison_les, mod_p_homotopy, snake_oracle, spiral_sequence};
use moore_tower_core::emext::{class_to_extension, extension_classes, extension_to_class};
use moore_tower_core::homalg::{enumerate_extensions, extensions_equivalent};
use moore_tower_core::lift::{brute_force_realize, corpus_bounds, enumerate_lifts, z4_corpus, LiftProblem};
use moore_tower_core::sample::{
    random_bisimplicial, random_free_complex, random_simplicial, rng, BisimplicialBounds, ComplexBounds,
};
use moore_tower_core::simplicial::{dold_kan, homotopy_groups, moore_complex, postnikov_section_simplicial};
use moore_tower_core::{FgModule, Int, Matrix, Module, RingSpec};
use rayon::prelude::*;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn z() -> RingSpec {
    RingSpec::Integers
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Duration, limit: Duration) -> Result<(), String> {
    ensure(t < limit, || format!("took {:.1} s, limit {} s", t.as_secs_f64(), limit.as_secs()))
}

fn dold_kan_roundtrip() -> Verdict {
    let start = Instant::now();
    let mut g = rng(0xacc1);
    let inputs: Vec<ChainComplex> = (0..200).map(|_| random_free_complex(&mut g, &z(), ComplexBounds::default())).collect();
    inputs.par_iter().enumerate().try_for_each(|(i, c)| {
        let x = dold_kan(c, c.top() + 1);
        x.validate().map_err(|e| format!("complex {}: {}", i, e))?;
        let n = moore_complex(&x).normalized.trimmed();
        ensure(n.extended_to(c.top()) == c.extended_to(n.top()).minimized().0, || format!("complex {}: N(Γc) ≠ c", i))?;
        for k in 0..=c.top() {
            let pi = homotopy_groups(&x, k).map_err(|e| e.to_string())?;
            ensure(pi.isomorphic(&c.homology_module(k)), || format!("complex {}: π_{} ≇ H_{}", i, k, k))?;
        }
        Ok::<(), String>(())
    })?;
    let t = start.elapsed();
    within(t, Duration::from_secs(30))?;
    Ok(format!("200 complexes in {:.1} s", t.as_secs_f64()))
}

fn postnikov_axioms() -> Verdict {
    let mut g = rng(0xacc2);
    let complexes: Vec<Complex> = (0..200).map(|_| Arc::new(random_free_complex(&mut g, &z(), ComplexBounds::default()))).collect();
    complexes.par_iter().enumerate().try_for_each(|(i, c)| {
        for n in 0..=c.top() {
            let (p, r) = postnikov_section(c, n);
            ChainMap::new(r.source().clone(), r.target().clone(), r.components().to_vec())
                .map_err(|e| format!("complex {}: section map: {}", i, e))?;
            for k in 0..=c.top() + 2 {
                let hp = p.homology_module(k);
                let ok = if k <= n { hp.isomorphic(&c.homology_module(k)) && r.on_homology(k).is_iso() } else { hp.is_zero() };
                ensure(ok, || format!("complex {}: H_{} of P_{}", i, k, n))?;
            }
        }
        Ok::<(), String>(())
    })?;
    let small = ComplexBounds {
        max_top: 3,
        max_rank: 2,
        max_entry: 3,
    };
    let trunc = 5;
    let modules: Vec<_> = (0..100).map(|_| random_simplicial(&mut g, &z(), small, trunc)).collect();
    modules.par_iter().enumerate().try_for_each(|(i, x)| {
        for n in 0..=trunc - 2 {
            let (p, r) = postnikov_section_simplicial(x, n).map_err(|e| format!("module {}: {}", i, e))?;
            p.validate().map_err(|e| e.to_string())?;
            r.validate().map_err(|e| e.to_string())?;
            for k in 0..trunc {
                let pk = homotopy_groups(&p, k).map_err(|e| e.to_string())?;
                let ok = if k <= n {
                    pk.isomorphic(&*homotopy_groups(x, k).map_err(|e| e.to_string())?)
                } else {
                    pk.is_zero()
                };
                ensure(ok, || format!("module {}: π_{} of P_{}", i, k, n))?;
            }
        }
        Ok::<(), String>(())
    })?;
    Ok("200 complexes and 100 simplicial modules".into())
}

fn periodic() -> Complex {
    let r = RingSpec::modulo(4);
    Arc::new(ChainComplex::free(r, &[1, 1], vec![Matrix::from_i64(1, 1, &[2])]).unwrap())
}

fn split() -> Complex {
    let r = RingSpec::modulo(4);
    let m = FgModule::cyclic(r.clone(), 2);
    Arc::new(ChainComplex::from_matrices(r, vec![m.clone(), m], vec![Matrix::from_i64(1, 1, &[0])]).unwrap())
}

fn k_invariant_dichotomy() -> Verdict {
    let mut g = rng(0xacc3);
    let inputs: Vec<Complex> = (0..100)
        .map(|_| Arc::new(random_free_complex(&mut g, &z(), ComplexBounds { max_top: 4, max_rank: 3, max_entry: 3 })))
        .collect();
    let certified: usize = inputs
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let mut count = 0;
            for n in 0..c.top() {
                let (e, k, p) = k_invariant(c, n);
                let classes = homotopy_classes(&p, &e).map_err(|e| e.to_string())?;
                let kq = classes.replacement.q.then(&k);
                let h = classes.nullhomotopy(&kq).ok_or_else(|| format!("complex {}: k_{} is essential", i, n))?;
                ensure(h.verify(&kq, &ChainMap::zero(kq.source().clone(), e.clone())), || {
                    format!("complex {}: null-homotopy of k_{} fails", i, n)
                })?;
                count += 1;
            }
            Ok::<usize, String>(count)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;

    let c = periodic();
    let (e, k, p) = k_invariant(&c, 0);
    let classes = homotopy_classes(&p, &e).map_err(|e| e.to_string())?;
    let kq = classes.replacement.q.then(&k);
    ensure(!classes.is_nullhomotopic(&kq) && classes.nullhomotopy(&kq).is_none(), || "periodic k_0 is null".into())?;
    let d = split();
    for n in 0..=1 {
        ensure(c.homology_module(n).isomorphic(&d.homology_module(n)), || format!("split complex differs in H_{}", n))?;
    }
    let eq = find_homotopy_equivalence(&c, &d).map_err(|e| e.to_string())?;
    ensure(eq.is_none(), || "periodic complex is equivalent to the split one".into())?;
    Ok(format!("100 complexes, {} null k-invariants certified; periodic k_0 essential, no equivalence to the split complex", certified))
}

fn family() -> Vec<(&'static str, Module)> {
    let cyc = |n: i64| Arc::new(FgModule::cyclic(z(), n));
    let klein = Arc::new(FgModule::from_form(z(), &[Int::from(2), Int::from(2)], 0));
    vec![("Z/2", cyc(2)), ("Z/3", cyc(3)), ("Z/4", cyc(4)), ("Z/2+Z/2", klein)]
}

fn extension_bijection() -> Verdict {
    let fam = family();
    let mut z2z2 = 0;
    for (qn, quotient) in &fam {
        for (sn, sub) in &fam {
            let at = |m: String| format!("({}, {}): {}", qn, sn, m);
            let reps = enumerate_extensions(quotient, sub).map_err(|e| at(e.to_string()))?;
            let mut orders = Vec::new();
            for n in [2, 3] {
                let (_, _, hc) = extension_classes(quotient, sub, n).map_err(|e| at(e.to_string()))?;
                let order = hc.group().order().ok_or_else(|| at("infinite cohomology".into()))?;
                ensure(Int::from(reps.len()) == order, || at(format!("{} extensions, {} classes at n = {}", reps.len(), order, n)))?;
                orders.push(order);
                let mut seen: Vec<Vec<Int>> = Vec::new();
                for e in &reps {
                    let c = extension_to_class(e, n).map_err(|e| at(e.to_string()))?;
                    ensure(!seen.contains(&c.coords), || at(format!("two extensions share a class at n = {}", n)))?;
                    seen.push(c.coords.clone());
                    let back = class_to_extension(&c).map_err(|e| at(e.to_string()))?;
                    let same = extensions_equivalent(&back, e).map_err(|e| at(e.to_string()))?;
                    let again = extension_to_class(&back, n).map_err(|e| at(e.to_string()))?;
                    ensure(same && again.coords == c.coords, || at(format!("roundtrip fails at n = {}", n)))?;
                }
            }
            ensure(orders[0] == orders[1], || at("count depends on n".into()))?;
            if *qn == "Z/2" && *sn == "Z/2" {
                z2z2 = reps.len();
            }
        }
    }
    ensure(z2z2 == 2, || format!("(Z/2, Z/2) gives {} classes", z2z2))?;
    Ok("16 pairs, n = 2 and 3; (Z/2, Z/2) gives 2".into())
}

fn mod_p_sequence() -> Verdict {
    let mut g = rng(0xacc5);
    let b = ComplexBounds {
        max_top: 3,
        max_rank: 3,
        max_entry: 3,
    };
    let inputs: Vec<_> = (0..200).map(|_| random_simplicial(&mut g, &z(), b, 4)).collect();
    inputs.par_iter().enumerate().try_for_each(|(i, x)| {
        for p in [2, 3] {
            for k in 1..=3 {
                let r = mod_p_homotopy(x, p, k).map_err(|e| format!("module {}: {}", i, e))?;
                ensure(r.ses.joints.len() == 3 && r.ses.is_exact() && r.ses.recheck(), || {
                    format!("module {}, p = {}, k = {}: {:?}", i, p, k, r.ses.joints)
                })?;
            }
        }
        Ok::<(), String>(())
    })?;
    Ok("200 simplicial modules, p = 2 and 3, k = 1..3".into())
}

fn spiral() -> Verdict {
    let start = Instant::now();
    let mut g = rng(0xacc6);
    let inputs: Vec<_> = (0..100).map(|_| random_bisimplicial(&mut g, &z(), BisimplicialBounds::default())).collect();
    let joints: usize = inputs
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            x.validate().map_err(|e| format!("input {}: {}", i, e))?;
            let (pt, qt) = (x.external_truncation(), x.internal_truncation());
            let r = spiral_sequence(x, pt - 2, qt - 1).map_err(|e| format!("input {}: {}", i, e))?;
            ensure(r.is_exact(), || format!("input {}: not exact", i))?;
            ensure(r.h0_iso.iter().all(|&(_, b)| b), || format!("input {}: h_0 is not an isomorphism", i))?;
            ensure(r.all_verified(), || format!("input {}: loop identification fails", i))?;
            ensure(r.sequences.iter().all(|(_, s)| s.recheck()), || format!("input {}: recheck fails", i))?;
            Ok::<usize, String>(r.sequences.iter().map(|(_, s)| s.joints.len()).sum())
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let t = start.elapsed();
    within(t, Duration::from_secs(300))?;
    Ok(format!("100 bisimplicial modules, {} joints, {:.1} s", joints, t.as_secs_f64()))
}

fn comparison() -> Verdict {
    let mut g = rng(0xacc7);
    let inputs: Vec<_> = (0..200).map(|_| random_free_complex(&mut g, &z(), ComplexBounds::default())).collect();
    inputs.par_iter().enumerate().try_for_each(|(i, x)| {
        let p = [2, 3][i % 2];
        let (lo, hi) = (0, x.top() + 1);
        let (gamma, r) = comparison_les(x, &RingSpec::modulo(p), lo, hi).map_err(|e| format!("complex {}: {}", i, e))?;
        ensure(r.is_exact() && r.recheck(), || format!("complex {}: not exact", i))?;
        let o = snake_oracle(x, p, lo, hi).map_err(|e| format!("complex {}: {}", i, e))?;
        for n in lo..=hi {
            let j = n - lo;
            let base = 3 * (hi - n);
            let ok = gamma.get(n).is_some_and(|g| g.isomorphic(&o.gamma[j]))
                && r.maps[base + 1].image().module.isomorphic(&o.image_h[j])
                && r.maps[base + 2].image().module.isomorphic(&o.image_boundary[j]);
            ensure(ok, || format!("complex {}: Γ_{} disagrees with the snake oracle", i, n))?;
        }
        Ok::<(), String>(())
    })?;
    Ok("200 complexes, p = 2 and 3, Γ matches the snake oracle".into())
}

/// Independent of the tower: reduce mod 4 and search for an equivalence.
fn realizes(x: &Complex, target: &Complex) -> Result<bool, String> {
    let tx = Arc::new(base_change(x, target.ring()).map_err(|e| e.to_string())?);
    Ok(find_homotopy_equivalence(&tx, target).map_err(|e| e.to_string())?.is_some_and(|h| h.verify()))
}

fn lifting() -> Verdict {
    let start = Instant::now();
    let corpus = z4_corpus();
    ensure(corpus.len() >= 20, || format!("corpus has {} targets", corpus.len()))?;
    let bounds = corpus_bounds();
    let results: Vec<(bool, usize)> = corpus
        .par_iter()
        .map(|entry| {
            let at = |m: String| format!("{}: {}", entry.name, m);
            let problem = Arc::new(LiftProblem::new(entry.target.clone(), bounds).map_err(|e| at(e.to_string()))?);
            let search = enumerate_lifts(&problem).map_err(|e| at(e.to_string()))?;
            let brute = brute_force_realize(&problem).map_err(|e| at(e.to_string()))?;
            ensure(search.realizable() || search.exhausted, || at("tower search did not finish".into()))?;
            ensure(search.realizable() == brute.witness.is_some(), || {
                at(format!("tower says {}, brute force says {}", search.realizable(), brute.witness.is_some()))
            })?;
            for l in &search.lifts {
                ensure(l.complex.ring().is_integers() && l.complex.is_free(), || at("lift is not free over Z".into()))?;
                ensure(realizes(&l.complex, &entry.target)?, || at("a lift fails the base-change check".into()))?;
            }
            if let Some(w) = &brute.witness {
                ensure(realizes(w, &entry.target)?, || at("brute-force witness fails the check".into()))?;
            }
            Ok::<(bool, usize), String>((search.realizable(), search.lifts.len()))
        })
        .collect::<Result<_, _>>()?;
    let unrealizable = results.iter().filter(|r| !r.0).count();
    ensure(unrealizable >= 1, || "no unrealizable target in the corpus".into())?;
    let t = start.elapsed();
    within(t, Duration::from_secs(600))?;
    let lifts: usize = results.iter().map(|r| r.1).sum();
    Ok(format!(
        "{} targets, {} unrealizable, {} lifts verified, {:.1} s",
        results.len(),
        unrealizable,
        lifts,
        t.as_secs_f64()
    ))
}

fn determinism() -> Verdict {
    let n = common::check_corpus(false)?;
    Ok(format!("{} corpus entries byte-identical across two runs and with the goldens", n))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("Dold-Kan roundtrip", dold_kan_roundtrip),
        ("Postnikov axioms", postnikov_axioms),
        ("k-invariant dichotomy", k_invariant_dichotomy),
        ("extension bijection", extension_bijection),
        ("mod-p short exact sequence", mod_p_sequence),
        ("spiral exact sequence", spiral),
        ("comparison sequence", comparison),
        ("lifting against brute force", lifting),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {}", msg))
        });
        match verdict {
            Ok(detail) => println!("criterion {}: PASS  {} ({})", i + 1, name, detail),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {} ({})", i + 1, name, why);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
