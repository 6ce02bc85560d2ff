//! The Dold–Kan functor `Γ`: `(ΓC)_n = ⊕_{σ: [n] ↠ [k]} C_k`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{SimplicialMap, SimplicialModule};
use crate::chain::{ChainComplex, ChainMap};
use crate::error::Result;
use crate::matrix::Matrix;
use crate::module::{direct_sum, FgModule, Module, ModuleMap};

/// A surjection `[n] ↠ [k]`, stored as its non-decreasing value sequence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Surjection {
    pub k: usize,
    pub seq: Vec<u8>,
}

/// How a face acts on the summand indexed by a surjection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum FaceAction {
    Identity,
    /// The image misses `0`: apply the differential.
    Boundary,
    Zero,
}

/// All surjections out of `[n]`, ordered by `k` and then lexicographically.
pub fn surjections(n: usize) -> Vec<Surjection> {
    // Bit `p − 1` of the mask set: the value steps up at position `p`.
    let mut out: Vec<Surjection> = (0u32..1 << n)
        .map(|mask| {
            let mut seq = Vec::with_capacity(n + 1);
            let mut v = 0u8;
            seq.push(0);
            for p in 1..=n {
                if mask >> (p - 1) & 1 == 1 {
                    v += 1;
                }
                seq.push(v);
            }
            Surjection { k: v as usize, seq }
        })
        .collect();
    out.sort();
    out
}

/// Number of surjections `[n] ↠ [k]`, i.e. `C(n, k)`.
pub fn surjection_count(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut c: usize = 1;
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    c
}

/// `σ ∘ δ^i`, factored as `ι ∘ τ`.
pub(crate) fn face_of(s: &Surjection, i: usize) -> (FaceAction, Surjection) {
    let v = s.seq[i];
    let mut seq = s.seq.clone();
    seq.remove(i);
    if seq.contains(&v) {
        return (FaceAction::Identity, Surjection { k: s.k, seq });
    }
    for x in seq.iter_mut() {
        if *x > v {
            *x -= 1;
        }
    }
    let t = Surjection { k: s.k - 1, seq };
    if v == 0 {
        (FaceAction::Boundary, t)
    } else {
        (FaceAction::Zero, t)
    }
}

/// `σ ∘ σ^j`.
pub(crate) fn degen_of(s: &Surjection, j: usize) -> Surjection {
    let mut seq = s.seq.clone();
    seq.insert(j, s.seq[j]);
    Surjection { k: s.k, seq }
}

/// Summand layout of one level.
pub(crate) struct Layout {
    pub sums: Vec<Surjection>,
    pub offsets: Vec<usize>,
    pub index: BTreeMap<Surjection, usize>,
    pub total: usize,
}

impl Layout {
    pub fn new(n: usize, rank: impl Fn(usize) -> usize) -> Layout {
        let sums = surjections(n);
        let mut offsets = Vec::with_capacity(sums.len());
        let mut total = 0;
        let mut index = BTreeMap::new();
        for (t, s) in sums.iter().enumerate() {
            offsets.push(total);
            total += rank(s.k);
            index.insert(s.clone(), t);
        }
        Layout {
            sums,
            offsets,
            index,
            total,
        }
    }

    pub fn offset(&self, s: &Surjection) -> usize {
        self.offsets[self.index[s]]
    }
}

/// `Γ(c)` through level `n`.
pub fn dold_kan(c: &ChainComplex, level: usize) -> SimplicialModule {
    let ring = c.ring().clone();
    let layouts: Vec<Layout> = (0..=level).map(|n| Layout::new(n, |k| c.term(k).gens())).collect();
    let levels: Vec<Module> = layouts
        .iter()
        .map(|l| {
            let parts: Vec<Module> = l.sums.iter().map(|s| c.term(s.k)).collect();
            let refs: Vec<&FgModule> = parts.iter().map(|m| m.as_ref()).collect();
            Arc::new(direct_sum(&ring, &refs))
        })
        .collect();
    let faces = (0..=level)
        .map(|n| {
            if n == 0 {
                return Vec::new();
            }
            (0..=n)
                .map(|i| {
                    let mut m = Matrix::zeros(layouts[n - 1].total, layouts[n].total);
                    for (t, s) in layouts[n].sums.iter().enumerate() {
                        let col = layouts[n].offsets[t];
                        let (act, tau) = face_of(s, i);
                        let row = layouts[n - 1].offset(&tau);
                        match act {
                            FaceAction::Identity => m.set_block(row, col, &Matrix::identity(c.term(s.k).gens())),
                            FaceAction::Boundary => m.set_block(row, col, c.diff(s.k).matrix()),
                            FaceAction::Zero => {}
                        }
                    }
                    ModuleMap::from_parts(levels[n].clone(), levels[n - 1].clone(), m)
                })
                .collect()
        })
        .collect();
    let degens = (0..level)
        .map(|n| {
            (0..=n)
                .map(|j| {
                    let mut m = Matrix::zeros(layouts[n + 1].total, layouts[n].total);
                    for (t, s) in layouts[n].sums.iter().enumerate() {
                        let row = layouts[n + 1].offset(&degen_of(s, j));
                        m.set_block(row, layouts[n].offsets[t], &Matrix::identity(c.term(s.k).gens()));
                    }
                    ModuleMap::from_parts(levels[n].clone(), levels[n + 1].clone(), m)
                })
                .collect()
        })
        .collect();
    SimplicialModule::from_parts(ring, levels, faces, degens).expect("Γ has consistent shapes")
}

/// `Γ(f)`: `f_k` on every summand indexed by a surjection onto `[k]`.
pub fn dold_kan_map(f: &ChainMap, level: usize) -> Result<SimplicialMap> {
    let src = Arc::new(dold_kan(f.source(), level));
    let tgt = Arc::new(dold_kan(f.target(), level));
    let comps = (0..=level)
        .map(|n| {
            let ls = Layout::new(n, |k| f.source().term(k).gens());
            let lt = Layout::new(n, |k| f.target().term(k).gens());
            let mut m = Matrix::zeros(lt.total, ls.total);
            for (t, s) in ls.sums.iter().enumerate() {
                m.set_block(lt.offsets[t], ls.offsets[t], f.comp(s.k).matrix());
            }
            ModuleMap::from_parts(src.level(n), tgt.level(n), m)
        })
        .collect();
    SimplicialMap::new(src, tgt, comps)
}
