use super::*;

fn z4(ranks: &[usize], d: &[&[i64]]) -> Complex {
    let mats = d
        .iter()
        .enumerate()
        .map(|(k, v)| Matrix::from_i64(ranks[k], ranks[k + 1], v))
        .collect();
    Arc::new(ChainComplex::free(RingSpec::modulo(4), ranks, mats).unwrap())
}

fn problem(g: Complex) -> Arc<LiftProblem> {
    Arc::new(LiftProblem::new(g, corpus_bounds()).unwrap())
}

#[test]
fn point_lifts_to_the_integers() {
    let p = problem(z4(&[1], &[]));
    let s = enumerate_lifts(&p).unwrap();
    assert!(s.exhausted);
    assert_eq!(s.lifts.len(), 1);
    assert!(verify_lift(&p, &s.lifts[0].complex).unwrap());
}

#[test]
fn moore_complex_lifts() {
    let p = problem(z4(&[1, 1], &[&[2]]));
    let s = enumerate_lifts(&p).unwrap();
    assert!(s.realizable(), "{:?}", s.certificates);
    for l in &s.lifts {
        assert!(verify_lift(&p, &l.complex).unwrap());
    }
}

#[test]
fn periodic_complex_is_obstructed() {
    let p = problem(z4(&[1, 1, 1], &[&[2], &[2]]));
    let s = enumerate_lifts(&p).unwrap();
    assert!(s.exhausted);
    assert!(!s.realizable());
    assert!(s.certificates.iter().any(|c| c.reason == DeadEnd::NonzeroObstruction), "{:?}", s.certificates);
}

type Small = Vec<Vec<i64>>;

/// Gaussian elimination of unit entries over `Z/4`: a unit `u = d_k[i][j]`
/// splits off a contractible pair, leaving the Schur complement in degree
/// `k` and deleting row `j` of `d_{k+1}` and column `i` of `d_{k−1}`.
fn reduce_z4(mut d: Vec<Small>) -> Vec<Small> {
    loop {
        let pivot = d.iter().enumerate().find_map(|(k, m)| {
            m.iter()
                .enumerate()
                .find_map(|(i, row)| row.iter().position(|x| x % 2 != 0).map(|j| (k, i, j)))
        });
        let Some((k, i, j)) = pivot else {
            return d;
        };
        let uinv = d[k][i][j].rem_euclid(4); // units mod 4 are self-inverse
        let m = &d[k];
        let schur: Small = (0..m.len())
            .filter(|&a| a != i)
            .map(|a| {
                (0..m[a].len())
                    .filter(|&b| b != j)
                    .map(|b| (m[a][b] - m[a][j] * uinv * m[i][b]).rem_euclid(4))
                    .collect()
            })
            .collect();
        d[k] = schur;
        if k + 1 < d.len() {
            d[k + 1].remove(j);
        }
        if k >= 1 {
            for row in d[k - 1].iter_mut() {
                row.remove(i);
            }
        }
    }
}

/// Realizability of a free `Z/4` complex by reduction to `F_2`: in a minimal
/// model every differential is `2A`, and a lift exists exactly when
/// consecutive `A` compose to zero mod 2.
fn realizable_mod_two(g: &Complex) -> bool {
    let d: Vec<Small> = (1..=g.top())
        .map(|k| {
            let m = g.diff(k);
            let m = m.matrix();
            (0..m.rows())
                .map(|a| (0..m.cols()).map(|b| m.get(a, b).to_i64().unwrap().rem_euclid(4)).collect())
                .collect()
        })
        .collect();
    let halves: Vec<Small> = reduce_z4(d)
        .into_iter()
        .map(|m| m.into_iter().map(|row| row.into_iter().map(|x| x / 2).collect()).collect())
        .collect();
    halves.windows(2).all(|w| {
        let (a, b) = (&w[0], &w[1]);
        let inner = b.len();
        a.iter().all(|row| {
            (0..b.first().map_or(0, |r| r.len()))
                .all(|c| (0..inner).map(|t| row[t] * b[t][c]).sum::<i64>() % 2 == 0)
        })
    })
}

#[test]
fn corpus_tower_agrees_with_brute_force() {
    let corpus = z4_corpus();
    assert!(corpus.len() >= 20);
    let mut unrealizable = 0;
    for e in corpus {
        let p = problem(e.target.clone());
        let s = enumerate_lifts(&p).unwrap();
        let b = brute_force_realize(&p).unwrap();
        assert!(s.exhausted, "{}", e.name);
        assert_eq!(s.realizable(), b.witness.is_some(), "{}", e.name);
        assert_eq!(s.realizable(), realizable_mod_two(&e.target), "{}", e.name);
        for l in &s.lifts {
            assert!(verify_lift(&p, &l.complex).unwrap(), "{}", e.name);
        }
        if let Some(w) = &b.witness {
            assert!(verify_lift(&p, w).unwrap(), "{}", e.name);
        }
        if !s.realizable() {
            unrealizable += 1;
            assert!(!s.certificates.is_empty(), "{}", e.name);
        }
    }
    assert!(unrealizable >= 1);
}

#[test]
fn ledger_stages_are_coherent() {
    let p = problem(z4(&[1, 2, 1], &[&[2, 2], &[2, 2]]));
    let s = enumerate_lifts(&p).unwrap();
    for l in &s.lifts {
        let stages = &l.ledger.stages;
        assert_eq!(stages[0].n, -1);
        for (i, st) in stages.iter().enumerate() {
            assert_eq!(st.n, i as isize - 1);
            assert_eq!(st.modules.len(), i);
            let level = (st.n + 1) as usize;
            let rep = st.rho.representative();
            assert!((0..=level).all(|k| rep.on_homology(k).is_iso()));
            if let Some(ch) = &st.choice {
                ch.extension.validate().unwrap();
                assert!(ch.chi.is_zero());
                assert!(ch.allowable_count >= 1 && ch.lift_count >= 1);
            }
            if let Some(phat) = &st.structure_map {
                assert!(ChainMap::from_matrices(
                    phat.source().clone(),
                    phat.target().clone(),
                    phat.components().iter().map(|c| c.matrix().clone()).collect()
                )
                .is_ok());
            }
        }
    }
}

#[test]
fn canonical_lift_replaces_full_cyclic_summands() {
    let m = Int::from(4i64);
    let k = FgModule::from_form(RingSpec::modulo(4), &[Int::from(2i64), m.clone()], 0);
    let l = canonical_lift(&k, &m);
    assert_eq!(l.canonical_form().free_rank, 1);
    assert_eq!(l.canonical_form().factors, vec![Int::from(2i64)]);
}

#[test]
fn section_projection_composes_with_postnikov_maps() {
    let mut r = crate::sample::rng(11);
    for _ in 0..20 {
        let c = Arc::new(crate::sample::random_free_complex(&mut r, &RingSpec::Integers, Default::default()));
        for n in 0..2 {
            let sp = section_projection(&c, n).unwrap();
            let (_, r1) = postnikov_section(&c, n + 1);
            let (_, r0) = postnikov_section(&c, n);
            let via = r1.then(&sp);
            for k in 0..=c.top() {
                assert_eq!(via.comp(k).matrix(), r0.comp(k).matrix());
            }
            let id = ChainMap::identity(c.clone());
            let pm = postnikov_map(&id, n).unwrap();
            assert!(pm.components().iter().all(|f| f.matrix() == &Matrix::identity(f.source().gens())));
        }
    }
}

#[test]
fn modified_section_kills_the_mod_m_kernel() {
    let m = Int::from(4i64);
    let mut r = crate::sample::rng(12);
    for _ in 0..20 {
        let c = Arc::new(crate::sample::random_free_complex(&mut r, &RingSpec::Integers, Default::default()));
        for n in 0..2 {
            let (xhat, phat, pcheck) = modified_postnikov_section(&c, n, &m).unwrap();
            for k in 0..=n {
                assert!(phat.on_homology(k).is_iso());
                assert!(pcheck.on_homology(k).is_iso());
            }
            // H_{n+1} of the section is the image of H_{n+1} X in H_{n+1} T X.
            let (khat, _) = modified_k_invariant(&c, n, &m).unwrap();
            assert!(xhat.homology_module(n + 1).isomorphic(&khat.target.module));
            assert!(phat.on_homology(n + 1).is_surjective());
            assert!(xhat.homology_module(n + 2).is_zero());
            assert!(khat.round_trips());
        }
    }
}

#[test]
fn integer_targets_are_rejected() {
    let c = Arc::new(ChainComplex::sphere(RingSpec::Integers, 0));
    assert!(LiftProblem::new(c, corpus_bounds()).is_err());
}
