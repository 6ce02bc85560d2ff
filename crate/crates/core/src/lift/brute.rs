//! Exhaustive search for a lift inside the bounds, used as an oracle for the
//! tower. Candidates are enumerated by rank profile, then by differential in
//! lexicographic order of entries, pruned by `d² = 0` over `Z` and by the
//! homology of `X ⊗ Z/m` degree by degree; survivors are tested with a
//! homotopy-equivalence search.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::{LiftBounds, LiftProblem};
use crate::chain::{base_change, find_homotopy_equivalence, ChainComplex, Complex};
use crate::error::Result;
use crate::matrix::Matrix;
use crate::module::{homology_at, CanonicalForm, FgModule, ModuleMap};
use crate::ring::RingSpec;
use crate::sample::{random_free_complex, rng, ComplexBounds};

#[derive(Clone, Debug)]
pub struct BruteForceReport {
    /// The first candidate in enumeration order with `X ⊗ Z/m ≃ G`.
    pub witness: Option<Complex>,
    /// Candidates reaching the final equivalence test.
    pub examined: u64,
    /// Differentials enumerated, including pruned ones.
    pub visited: u64,
}

type HomKey = (usize, usize, usize, Vec<i64>, Vec<i64>);

struct Search<'a> {
    problem: &'a LiftProblem,
    m: i64,
    entry: i64,
    target: Vec<CanonicalForm>,
    ranks: Vec<usize>,
    /// `mats[k−1]` is `d_k`, row-major `ranks[k−1] × ranks[k]`.
    mats: Vec<Vec<i64>>,
    cache: BTreeMap<HomKey, CanonicalForm>,
    examined: u64,
    visited: u64,
}

fn to_matrix(rows: usize, cols: usize, v: &[i64]) -> Matrix {
    Matrix::from_i64(rows, cols, v)
}

impl Search<'_> {
    /// `H_j(T X)` from `d_j` (absent at `j = 0`) and `d_{j+1}` (absent at the top).
    fn homology(&mut self, j: usize) -> CanonicalForm {
        let top = self.ranks.len() - 1;
        let r = |k: Option<usize>| k.map_or(0, |k| self.ranks[k]);
        let below = j.checked_sub(1);
        let above = if j < top { Some(j + 1) } else { None };
        let red = |v: Option<&Vec<i64>>| -> Vec<i64> {
            v.map_or(Vec::new(), |v| v.iter().map(|x| x.rem_euclid(self.m)).collect())
        };
        let dj = if j >= 1 { Some(&self.mats[j - 1]) } else { None };
        let dj1 = if j < top { Some(&self.mats[j]) } else { None };
        let key = (r(below), self.ranks[j], r(above), red(dj), red(dj1));
        if let Some(f) = self.cache.get(&key) {
            return f.clone();
        }
        let ring = self.problem.ring.clone();
        let free = |n: usize| Arc::new(FgModule::free(ring.clone(), n));
        let (a, b, c) = (free(key.2), free(key.1), free(key.0));
        let f = ModuleMap::from_parts(a, b.clone(), to_matrix(key.1, key.2, &key.4));
        let g = ModuleMap::from_parts(b, c, to_matrix(key.0, key.1, &key.3));
        let form = homology_at(&f, &g).module.canonical_form().clone();
        self.cache.insert(key, form.clone());
        form
    }

    /// Chooses `d_k` for `k = 1, …, top`; returns a witness when found.
    fn choose(&mut self, k: usize) -> Result<Option<Complex>> {
        let top = self.ranks.len() - 1;
        if k > top {
            if self.homology(top) != self.target[top] {
                return Ok(None);
            }
            return self.finish();
        }
        let (rows, cols) = (self.ranks[k - 1], self.ranks[k]);
        let len = rows * cols;
        let mut v = vec![-self.entry; len];
        loop {
            self.visited += 1;
            if self.composes_to_zero(k, &v, rows, cols) {
                self.mats.push(v.clone());
                if self.homology(k - 1) == self.target[k - 1] {
                    if let Some(w) = self.choose(k + 1)? {
                        return Ok(Some(w));
                    }
                }
                self.mats.pop();
            }
            if !odometer(&mut v, self.entry) {
                return Ok(None);
            }
        }
    }

    fn composes_to_zero(&self, k: usize, v: &[i64], rows: usize, cols: usize) -> bool {
        if k < 2 {
            return true;
        }
        let prev = &self.mats[k - 2];
        let outer = self.ranks[k - 2];
        (0..outer).all(|i| {
            (0..cols).all(|j| (0..rows).map(|t| prev[i * rows + t] * v[t * cols + j]).sum::<i64>() == 0)
        })
    }

    fn finish(&mut self) -> Result<Option<Complex>> {
        self.examined += 1;
        let top = self.ranks.len() - 1;
        let d = (1..=top)
            .map(|k| to_matrix(self.ranks[k - 1], self.ranks[k], &self.mats[k - 1]))
            .collect();
        let x = Arc::new(ChainComplex::free(RingSpec::Integers, &self.ranks, d)?);
        let tx = Arc::new(base_change(&x, &self.problem.ring)?);
        match find_homotopy_equivalence(&tx, &self.problem.target)? {
            Some(h) if h.verify() => Ok(Some(x)),
            _ => Ok(None),
        }
    }
}

/// Advances a vector with entries in `[−e, e]`; false after the last one.
fn odometer(v: &mut [i64], e: i64) -> bool {
    for x in v.iter_mut().rev() {
        if *x < e {
            *x += 1;
            return true;
        }
        *x = -e;
    }
    false
}

fn profiles(top: usize, max_rank: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..=top {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=max_rank).map(move |r| {
                    let mut q = p.clone();
                    q.push(r);
                    q
                })
            })
            .collect();
    }
    out
}

fn euler(ranks: &[usize]) -> i64 {
    ranks
        .iter()
        .enumerate()
        .map(|(k, &r)| if k % 2 == 0 { r as i64 } else { -(r as i64) })
        .sum()
}

/// Searches degreewise free complexes over `Z` with top degree at most
/// `max_degree`, ranks at most `max_rank` and entries in
/// `[−max_entry, max_entry]`.
pub fn brute_force_realize(problem: &LiftProblem) -> Result<BruteForceReport> {
    let b = problem.bounds;
    let m = problem
        .modulus
        .to_i64()
        .ok_or_else(|| crate::Error::Precondition("modulus does not fit in 64 bits".into()))?;
    let g = &problem.target;
    let top = b.max_degree;
    let mut report = BruteForceReport {
        witness: None,
        examined: 0,
        visited: 0,
    };
    let target: Vec<CanonicalForm> = (0..=top.max(g.top())).map(|k| g.homology_module(k).canonical_form().clone()).collect();
    if target[top + 1..].iter().any(|f| !f.is_zero()) {
        return Ok(report);
    }
    let chi = if g.is_free() {
        Some(euler(&g.terms().iter().map(|t| t.gens()).collect::<Vec<_>>()))
    } else {
        None
    };
    let mut search = Search {
        problem,
        m,
        entry: b.max_entry,
        target,
        ranks: Vec::new(),
        mats: Vec::new(),
        cache: BTreeMap::new(),
        examined: 0,
        visited: 0,
    };
    for ranks in profiles(top, b.max_rank) {
        if chi.is_some_and(|c| c != euler(&ranks)) {
            continue;
        }
        search.ranks = ranks;
        search.mats.clear();
        if let Some(w) = search.choose(1)? {
            report.witness = Some(w);
            break;
        }
    }
    report.examined = search.examined;
    report.visited = search.visited;
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub target: Complex,
}

fn z4(ranks: &[usize], d: &[&[i64]]) -> Complex {
    let ring = RingSpec::modulo(4);
    let mats = d
        .iter()
        .enumerate()
        .map(|(k, v)| to_matrix(ranks[k], ranks[k + 1], v))
        .collect();
    Arc::new(ChainComplex::free(ring, ranks, mats).expect("corpus entries are complexes"))
}

/// Deterministic targets over `Z/4` with top degree at most 3, ranks at
/// most 2 and entries in `[0, 3]`: hand-built cases, among them
/// unrealizable ones, followed by seeded random complexes.
pub fn z4_corpus() -> Vec<CorpusEntry> {
    let mut out: Vec<CorpusEntry> = [
        ("point", z4(&[1], &[])),
        ("shifted-point", z4(&[0, 0, 1], &[&[], &[]])),
        ("zero-differential", z4(&[1, 1], &[&[0]])),
        ("moore-two", z4(&[1, 1], &[&[2]])),
        ("contractible", z4(&[1, 1], &[&[1]])),
        ("moore-two-shifted", z4(&[0, 1, 1], &[&[], &[2]])),
        ("periodic-three", z4(&[1, 1, 1], &[&[2], &[2]])),
        ("periodic-four", z4(&[1, 1, 1, 1], &[&[2], &[2], &[2]])),
        ("periodic-three-shifted", z4(&[0, 1, 1, 1], &[&[], &[2], &[2]])),
        ("periodic-three-plus-point", z4(&[2, 1, 1], &[&[2, 0], &[2]])),
        ("diagonal", z4(&[2, 2], &[&[2, 0, 0, 1]])),
        ("two-by-two-periodic", z4(&[1, 2, 1], &[&[2, 0], &[2, 0]])),
        ("two-by-two-realizable", z4(&[1, 2, 1], &[&[2, 2], &[2, 2]])),
        ("mixed-top", z4(&[1, 1, 1, 1], &[&[2], &[0], &[2]])),
    ]
    .into_iter()
    .map(|(n, c)| CorpusEntry {
        name: String::from(n),
        target: c,
    })
    .collect();
    let ring = RingSpec::modulo(4);
    let bounds = ComplexBounds {
        max_top: 3,
        max_rank: 2,
        max_entry: 3,
    };
    let mut r = rng(0x5eed_0004);
    let mut k = 0;
    while out.len() < 24 {
        let c = random_free_complex(&mut r, &ring, bounds);
        // Resample degenerate draws that would only repeat the point.
        if c.top() == 0 && r.gen_bool(0.5) {
            continue;
        }
        out.push(CorpusEntry {
            name: format!("random-{}", k),
            target: Arc::new(c),
        });
        k += 1;
    }
    out
}

/// Bounds used for the corpus.
pub fn corpus_bounds() -> LiftBounds {
    LiftBounds {
        max_degree: 3,
        max_rank: 2,
        max_entry: 3,
    }
}
