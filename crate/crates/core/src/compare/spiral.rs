//! The spiral sequence of a bisimplicial module, built from explicit
//! lattices in the ambient coordinates of each `X_{n,k}` (external `n`,
//! internal `k`).
//!
//! For a sub-object `A ⊆ X_n` cut out by external faces, `π_k A` is
//! `L / N` with `L` the internal Moore cycles of `A_k` and `N` the internal
//! boundaries `d_0(N_{k+1} A)` plus relations.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{zero_module, ExactSequenceReport};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, Solver};
use crate::matrix::Matrix;
use crate::module::{induced_map, power, ModuleMap, SubQuotient};
use crate::simplicial::{matching_object, BisimplicialModule};

/// `Ωπ♮_{n−1,k} ≅ π♮_{n−1,k+1}`, represented by `Ker j_{n,k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopCheck {
    pub n: usize,
    pub k: usize,
    pub isomorphic: bool,
}

#[derive(Clone, Debug)]
pub struct SpiralReport {
    /// One sequence per internal degree `k`.
    pub sequences: Vec<(usize, ExactSequenceReport)>,
    pub h0_iso: Vec<(usize, bool)>,
    pub loops: Vec<LoopCheck>,
}

impl SpiralReport {
    pub fn is_exact(&self) -> bool {
        self.sequences.iter().all(|(_, r)| r.is_exact())
    }

    pub fn all_verified(&self) -> bool {
        self.is_exact() && self.h0_iso.iter().all(|&(_, b)| b) && self.loops.iter().all(|l| l.isomorphic)
    }
}

/// Which external faces cut out the sub-object of `X_n`.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Sub {
    All,
    /// `C_n X`: `d_i = 0` for `i ≥ 1`.
    Chains,
    /// `Z_n X`: `d_i = 0` for all `i`.
    Cycles,
}

struct Slices<'a> {
    x: &'a BisimplicialModule,
}

/// `L / N` with the lattices in `Z^{gens X_{n,k}}`.
struct Pair {
    l: Lattice,
    n: Lattice,
}

impl<'a> Slices<'a> {
    fn rels(&self, n: usize, k: usize) -> Lattice {
        self.x.term(n, k).relations().clone()
    }

    fn dim(&self, n: usize, k: usize) -> usize {
        self.x.term(n, k).gens()
    }

    /// `{v : f_i v ∈ rel}` for the listed maps, intersected with `base`.
    fn kernel_of(&self, base: Lattice, maps: &[&ModuleMap]) -> Lattice {
        if maps.is_empty() {
            return base;
        }
        let stacked = maps
            .iter()
            .map(|f| f.matrix().clone())
            .reduce(|a, b| a.vstack(&b))
            .expect("nonempty");
        let tgt = power(maps[0].target(), maps.len());
        base.intersect(&tgt.relations().preimage(&stacked))
    }

    fn ext_sub(&self, s: Sub, n: usize, k: usize) -> Lattice {
        let full = Lattice::full(self.dim(n, k));
        let from = match s {
            Sub::All => return full,
            Sub::Chains => 1,
            Sub::Cycles => 0,
        };
        if n == 0 {
            return full;
        }
        let faces: Vec<&ModuleMap> = (from..=n).map(|i| self.x.ext_face(n, i, k)).collect();
        self.kernel_of(full, &faces)
    }

    /// Internal Moore chains of the sub-object at internal level `k`.
    fn moore_chains(&self, s: Sub, n: usize, k: usize) -> Lattice {
        let a = self.ext_sub(s, n, k);
        if k == 0 {
            return a;
        }
        let faces: Vec<&ModuleMap> = (1..=k).map(|i| self.x.int_face(n, k, i)).collect();
        self.kernel_of(a, &faces)
    }

    fn pi(&self, s: Sub, n: usize, k: usize) -> Pair {
        let c = self.moore_chains(s, n, k);
        let l = if k == 0 { c } else { self.kernel_of(c, &[self.x.int_face(n, k, 0)]) };
        let above = self.moore_chains(s, n, k + 1);
        let b = above.image(self.x.int_face(n, k + 1, 0).matrix()).sum(&self.rels(n, k));
        Pair { l, n: b }
    }
}

struct Degree<'a> {
    s: Slices<'a>,
    k: usize,
    /// `π_k X_n` for every external `n` in range.
    x: Vec<Pair>,
}

impl<'a> Degree<'a> {
    fn face(&self, n: usize, i: usize) -> &Matrix {
        self.s.x.ext_face(n, i, self.k).matrix()
    }

    /// `C_n(π_k X)`, or `Z_n(π_k X)` when `with_d0`.
    fn pi_chains(&self, n: usize, with_d0: bool) -> Lattice {
        let mut l = self.x[n].l.clone();
        if n == 0 {
            return l;
        }
        for i in (if with_d0 { 0 } else { 1 })..=n {
            l = l.intersect(&self.x[n - 1].n.preimage(self.face(n, i)));
        }
        l
    }

    /// `π♮_{n,k} = π_k Z_n / d_0(π_k C_{n+1})`.
    fn natural(&self, n: usize) -> SubQuotient {
        let z = self.s.pi(Sub::Cycles, n, self.k);
        let c = self.s.pi(Sub::Chains, n + 1, self.k);
        let n_lat = z.n.sum(&c.l.image(self.face(n + 1, 0)));
        SubQuotient::new(self.s.x.ring().clone(), &z.l, &n_lat)
    }

    /// `π_n π_k X`.
    fn pipi(&self, n: usize) -> SubQuotient {
        let z = self.pi_chains(n, true);
        let b = self.pi_chains(n + 1, false).image(self.face(n + 1, 0)).sum(&self.x[n].n);
        SubQuotient::new(self.s.x.ring().clone(), &z, &b)
    }

    /// `Ker(j_n: π_k Z_n X → π_k C_n X)`.
    fn ker_j(&self, n: usize) -> SubQuotient {
        let z = self.s.pi(Sub::Cycles, n, self.k);
        let c = self.s.pi(Sub::Chains, n, self.k);
        SubQuotient::new(self.s.x.ring().clone(), &z.l.intersect(&c.n), &z.n)
    }

    /// `∂⋆_n: π_n π_k X → Ker j_{n−1}`: move a representative into `C_n X`
    /// by an internal boundary, then apply the external `d_0`.
    fn boundary(&self, n: usize, from: &SubQuotient, to: &SubQuotient) -> Result<ModuleMap> {
        let k = self.k;
        let b = self.x[n].n.basis_matrix();
        let rel = self.s.rels(n - 1, k).basis_matrix();
        let (g1, r, s) = (self.s.dim(n - 1, k), b.cols(), rel.cols());
        // Σ_i F_i b t + rel r_i = −F_i z for i = 1..n.
        let mut sys = Matrix::zeros(n * g1, r + n * s);
        for i in 1..=n {
            sys.set_block((i - 1) * g1, 0, &self.face(n, i).mul(&b));
            sys.set_block((i - 1) * g1, r + (i - 1) * s, &rel);
        }
        let solver = Solver::new(&sys);
        let mut cols = Vec::with_capacity(from.module.gens());
        for j in 0..from.module.gens() {
            let z = from.inc.column(j);
            let mut rhs = Vec::with_capacity(n * g1);
            for i in 1..=n {
                rhs.extend(self.face(n, i).mul_vec(&z).into_iter().map(|v| -&v));
            }
            let t = solver
                .solve(&rhs)
                .ok_or_else(|| Error::IllDefinedMap(format!("no Moore-chain representative at ({}, {})", n, k)))?;
            let mut lifted = z;
            for (a, c) in lifted.iter_mut().zip(b.mul_vec(&t[..r])) {
                *a += &c;
            }
            let y = self.face(n, 0).mul_vec(&lifted);
            cols.push(to.coords(&y).ok_or_else(|| {
                Error::IllDefinedMap(format!("d_0 of a lifted class leaves Ker j at ({}, {})", n - 1, k))
            })?);
        }
        ModuleMap::new(from.module.clone(), to.module.clone(), Matrix::from_columns(to.module.gens(), &cols))
    }
}

/// Reedy fibrancy: each `δ_n: X_n → M_n X` is an internal fibration, i.e.
/// the normalized chains of its cokernel vanish in positive internal degrees.
pub fn check_reedy_fibrant(x: &BisimplicialModule) -> Result<()> {
    let (pt, qt) = (x.external_truncation(), x.internal_truncation());
    let columns: Vec<_> = (0..=qt).map(|q| x.column(q)).collect();
    for n in 1..=pt {
        // Per internal level: matching lattice and δ-image, in (X_{n−1,q})^{n+1}.
        let mut mlat = Vec::with_capacity(qt + 1);
        let mut image = Vec::with_capacity(qt + 1);
        for (q, col) in columns.iter().enumerate() {
            let m = matching_object(col, n)?;
            let stacked = (0..=n)
                .map(|i| x.ext_face(n, i, q).matrix().clone())
                .reduce(|a, b| a.vstack(&b))
                .expect("n ≥ 1");
            let prod = power(&x.term(n - 1, q), n + 1);
            mlat.push(m.sub.lattice().clone());
            image.push(Lattice::column_span(&stacked).sum(prod.relations()));
        }
        for k in 1..=qt {
            let face = |i: usize| {
                let f = x.int_face(n - 1, k, i).matrix();
                let mut m = f.clone();
                for _ in 0..n {
                    m = m.block_diag(f);
                }
                m
            };
            let mut chains = mlat[k].clone();
            for i in 1..=k {
                chains = chains.intersect(&image[k - 1].preimage(&face(i)));
            }
            if !image[k].contains_lattice(&chains) {
                return Err(Error::NotFibrant { level: n });
            }
        }
    }
    Ok(())
}

/// The spiral sequence
/// `… π_{n+1}π_k → Ωπ♮_{n−1} → π♮_n → π_nπ_k → … → π♮_0 → π_0π_k → 0`
/// for external degrees `0..=n_top` and internal degrees `0..=k_top`.
pub fn spiral_sequence(x: &BisimplicialModule, n_top: usize, k_top: usize) -> Result<SpiralReport> {
    let (pt, qt) = (x.external_truncation(), x.internal_truncation());
    if n_top + 2 > pt {
        return Err(Error::InsufficientTruncation {
            needed: n_top + 2,
            available: pt,
        });
    }
    if k_top + 1 > qt {
        return Err(Error::InsufficientTruncation {
            needed: k_top + 1,
            available: qt,
        });
    }
    check_reedy_fibrant(x)?;
    let ring = x.ring().clone();
    let mut sequences = Vec::new();
    let mut h0_iso = Vec::new();
    let mut loops = Vec::new();
    let mut naturals: Vec<Vec<SubQuotient>> = Vec::new();
    let s = Slices { x };
    for k in 0..=k_top {
        let xs = (0..=n_top + 2).map(|n| s.pi(Sub::All, n, k)).collect();
        let d = Degree { s: Slices { x }, k, x: xs };
        let mut labels: Vec<String> = Vec::new();
        let mut terms = Vec::new();
        let mut maps = Vec::new();
        let first = d.pipi(n_top + 1);
        labels.push(format!("pi_{} pi_{}", n_top + 1, k));
        terms.push(first.module.clone());
        let mut prev = first;
        let mut prev_n = n_top + 1;
        for n in (0..=n_top).rev() {
            let kj = d.ker_j(n);
            maps.push(d.boundary(prev_n, &prev, &kj)?);
            labels.push(format!("Omega pinat_{} ({})", n as i64 - 1, k));
            terms.push(kj.module.clone());
            let nat = d.natural(n);
            maps.push(induced_map(&kj, &nat, &Matrix::identity(s.dim(n, k)))?);
            labels.push(format!("pinat_{} ({})", n, k));
            terms.push(nat.module.clone());
            let pp = d.pipi(n);
            let h = induced_map(&nat, &pp, &Matrix::identity(s.dim(n, k)))?;
            if n == 0 {
                h0_iso.push((k, h.is_iso()));
            }
            maps.push(h);
            labels.push(format!("pi_{} pi_{}", n, k));
            terms.push(pp.module.clone());
            prev = pp;
            prev_n = n;
        }
        let zero = zero_module(&ring);
        maps.push(ModuleMap::zero(prev.module.clone(), zero.clone()));
        labels.push("0".into());
        terms.push(zero);
        let construction = format!("spiral sequence at internal degree {}", k);
        sequences.push((k, ExactSequenceReport::assemble(&construction, labels, terms, maps)));
        naturals.push((0..=n_top).map(|n| d.natural(n)).collect());
    }
    // Ker j_{n,k} ≅ π♮_{n−1,k+1} wherever both sides are in range.
    for (k, (_, report)) in sequences.iter().enumerate() {
        if k + 1 >= naturals.len() {
            break;
        }
        for n in 1..=n_top {
            // Position of Ker j_n in the sequence: 1 + 3 (n_top − n).
            let kj = &report.terms[1 + 3 * (n_top - n)];
            let up = &naturals[k + 1][n - 1].module;
            loops.push(LoopCheck {
                n,
                k,
                isomorphic: kj.isomorphic(up),
            });
        }
    }
    Ok(SpiralReport {
        sequences,
        h0_iso,
        loops,
    })
}
