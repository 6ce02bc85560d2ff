//! Sublattices of `Z^n` in canonical column Hermite form, plus the exact
//! linear solver built on the same elimination.
//!
//! Canonical basis: each basis vector `b_j` has a pivot row `p_j` (its first
//! nonzero entry), pivots strictly increase and are positive, and every
//! earlier vector's entry at a later pivot row lies in `[0, b_k[p_k])`.
//! Two lattices are equal iff their canonical bases are equal.

use alloc::vec;
use alloc::vec::Vec;

use crate::int::Int;
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<Int>>,
    pivots: Vec<usize>,
}

/// Column echelon form of a generator list, optionally with the unimodular
/// transform that produced it. Only the first `top` rows are eliminated.
struct Echelon {
    /// Pivot columns first (in pivot order), then the zero-top columns.
    cols: Vec<Vec<Int>>,
    pivots: Vec<usize>,
}


#[inline]
fn axpy(dst: &mut [Int], k: &Int, src: &[Int]) {
    // dst -= k * src
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            d.sub_mul(k, s);
        }
    }
}

/// Column-echelonizes `cols` on rows `0..top`. Columns may be longer than
/// `top`; the tail rows are carried along (this is how transforms are tracked).
fn echelon(mut cols: Vec<Vec<Int>>, top: usize) -> Echelon {
    let mut pivots = Vec::new();
    let mut next = 0usize;
    for row in 0..top {
        if next >= cols.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for c in next..cols.len() {
                let v = &cols[c][row];
                if v.is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(c),
                    Some(b) if v.abs() < cols[b][row].abs() => best = Some(c),
                    _ => {}
                }
            }
            let Some(b) = best else { break };
            cols.swap(next, b);
            let (head, tail) = cols.split_at_mut(next + 1);
            let piv = &head[next];
            let p = piv[row].clone();
            let mut remaining = false;
            for c in tail.iter_mut() {
                if c[row].is_zero() {
                    continue;
                }
                let q = c[row].div_round(&p);
                axpy(c, &q, piv);
                if !c[row].is_zero() {
                    remaining = true;
                }
            }
            if !remaining {
                if cols[next][row].is_negative() {
                    for v in cols[next].iter_mut() {
                        *v = -core::mem::take(v);
                    }
                }
                pivots.push(row);
                next += 1;
                break;
            }
        }
    }
    Echelon { cols, pivots }
}

/// Reduces earlier pivot columns at later pivot rows into `[0, pivot)`.
fn reduce_echelon(cols: &mut [Vec<Int>], pivots: &[usize]) {
    for k in 0..pivots.len() {
        let pk = pivots[k];
        let (head, tail) = cols.split_at_mut(k);
        let bk = &tail[0];
        for bj in head.iter_mut() {
            if bj[pk].is_zero() {
                continue;
            }
            let q = bj[pk].div_floor(&bk[pk]);
            axpy(bj, &q, bk);
        }
    }
}

impl Lattice {
    pub fn zero(dim: usize) -> Lattice {
        Lattice {
            dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// `m · Z^dim`.
    pub fn scaled_full(dim: usize, m: &Int) -> Lattice {
        if m.is_zero() {
            return Lattice::zero(dim);
        }
        let m = m.abs();
        let basis = (0..dim)
            .map(|i| {
                let mut v = vec![Int::ZERO; dim];
                v[i] = m.clone();
                v
            })
            .collect();
        Lattice {
            dim,
            basis,
            pivots: (0..dim).collect(),
        }
    }

    pub fn full(dim: usize) -> Lattice {
        Lattice::scaled_full(dim, &Int::ONE)
    }

    pub fn from_generators(dim: usize, gens: Vec<Vec<Int>>) -> Lattice {
        let gens: Vec<Vec<Int>> = gens
            .into_iter()
            .filter(|g| {
                debug_assert_eq!(g.len(), dim);
                g.iter().any(|v| !v.is_zero())
            })
            .collect();
        let e = echelon(gens, dim);
        let r = e.pivots.len();
        let mut cols = e.cols;
        cols.truncate(r);
        reduce_echelon(&mut cols, &e.pivots);
        Lattice {
            dim,
            basis: cols,
            pivots: e.pivots,
        }
    }

    /// Lattice spanned by the columns of `m`.
    pub fn column_span(m: &Matrix) -> Lattice {
        Lattice::from_generators(m.rows(), m.columns())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Int>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.dim, &self.basis)
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.dim && self.basis.iter().zip(&self.pivots).all(|(b, &p)| b[p].is_one())
    }

    /// Canonical representative of `v + L`.
    pub fn reduce(&self, v: &[Int]) -> Vec<Int> {
        let mut v = v.to_vec();
        self.reduce_in_place(&mut v);
        v
    }

    pub fn reduce_in_place(&self, v: &mut [Int]) {
        debug_assert_eq!(v.len(), self.dim);
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let q = v[p].div_floor(&b[p]);
            axpy(v, &q, b);
        }
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        if other.is_zero() || self.contains_lattice(other) {
            return self.clone();
        }
        let mut g = self.basis.clone();
        g.extend(other.basis.iter().cloned());
        Lattice::from_generators(self.dim, g)
    }

    pub fn add_generators(&self, gens: Vec<Vec<Int>>) -> Lattice {
        let extra: Vec<Vec<Int>> = gens.into_iter().filter(|g| !self.contains(g)).collect();
        if extra.is_empty() {
            return self.clone();
        }
        let mut g = self.basis.clone();
        g.extend(extra);
        Lattice::from_generators(self.dim, g)
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        if self.is_zero() || other.is_zero() {
            return Lattice::zero(self.dim);
        }
        if other.contains_lattice(self) {
            return self.clone();
        }
        if self.contains_lattice(other) {
            return other.clone();
        }
        let b = self.basis_matrix();
        preimage(&b, other).image(&b)
    }

    /// Image of the lattice under `m` (as a lattice in `Z^{m.rows}`).
    pub fn image(&self, m: &Matrix) -> Lattice {
        let gens = self.basis.iter().map(|b| m.mul_vec(b)).collect();
        Lattice::from_generators(m.rows(), gens)
    }

    /// `{x : m x ∈ self}`.
    pub fn preimage(&self, m: &Matrix) -> Lattice {
        assert_eq!(m.rows(), self.dim);
        preimage(m, self)
    }

    /// Index `[self : sub]` when finite (full rank of `sub` relative to self).
    /// Returns `None` if `sub` has smaller rank.
    pub fn index_of(&self, sub: &Lattice) -> Option<Int> {
        if sub.rank() != self.rank() {
            return None;
        }
        let a: Int = self
            .basis
            .iter()
            .zip(&self.pivots)
            .fold(Int::ONE, |acc, (b, &p)| acc * b[p].clone());
        let b: Int = sub
            .basis
            .iter()
            .zip(&sub.pivots)
            .fold(Int::ONE, |acc, (b, &p)| acc * b[p].clone());
        Some(b.div_exact(&a))
    }

    /// Coordinates of `v ∈ L` in the canonical basis; `None` when `v ∉ L`.
    pub fn coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        let mut v = v.to_vec();
        let mut out = Vec::with_capacity(self.rank());
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if !b[p].divides(&v[p]) {
                return None;
            }
            let q = v[p].div_exact(&b[p]);
            axpy(&mut v, &q, b);
            out.push(q);
        }
        if v.iter().all(|x| x.is_zero()) {
            Some(out)
        } else {
            None
        }
    }
}

/// Lattice of integer solutions of `m x = 0`.
pub fn kernel(m: &Matrix) -> Lattice {
    let (rows, n) = (m.rows(), m.cols());
    if n == 0 {
        return Lattice::zero(0);
    }
    let cols: Vec<Vec<Int>> = (0..n)
        .map(|j| {
            let mut c = m.column(j);
            c.resize(rows + n, Int::ZERO);
            c[rows + j] = Int::ONE;
            c
        })
        .collect();
    let e = echelon(cols, rows);
    let r = e.pivots.len();
    let gens = e.cols[r..].iter().map(|c| c[rows..].to_vec()).collect();
    Lattice::from_generators(n, gens)
}

/// `{x : m x ∈ target}`.
pub fn preimage(m: &Matrix, target: &Lattice) -> Lattice {
    let n = m.cols();
    if target.is_zero() {
        return kernel(m);
    }
    if target.is_full() {
        return Lattice::full(n);
    }
    let aug = m.hstack(&target.basis_matrix());
    let k = kernel(&aug);
    let gens = k.basis.iter().map(|v| v[..n].to_vec()).collect();
    Lattice::from_generators(n, gens)
}

/// Reusable solver for `A x = b` over the integers.
#[derive(Clone, Debug)]
pub struct Solver {
    rows: usize,
    pivots: Vec<usize>,
    /// Echelon columns, top part only.
    h: Vec<Vec<Int>>,
    /// Matching transform columns: `A t_j = h_j`.
    t: Vec<Vec<Int>>,
    cols: usize,
}

impl Solver {
    pub fn new(a: &Matrix) -> Solver {
        let (rows, n) = (a.rows(), a.cols());
        let cols: Vec<Vec<Int>> = (0..n)
            .map(|j| {
                let mut c = a.column(j);
                c.resize(rows + n, Int::ZERO);
                c[rows + j] = Int::ONE;
                c
            })
            .collect();
        let e = echelon(cols, rows);
        let r = e.pivots.len();
        let mut h = Vec::with_capacity(r);
        let mut t = Vec::with_capacity(r);
        for c in e.cols.into_iter().take(r) {
            h.push(c[..rows].to_vec());
            t.push(c[rows..].to_vec());
        }
        Solver {
            rows,
            pivots: e.pivots,
            h,
            t,
            cols: n,
        }
    }

    /// Some `x` with `A x = b`, or `None`.
    pub fn solve(&self, b: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(b.len(), self.rows);
        let mut r = b.to_vec();
        let mut x = vec![Int::ZERO; self.cols];
        let mut prev = 0usize;
        for ((h, t), &p) in self.h.iter().zip(&self.t).zip(&self.pivots) {
            if r[prev..p].iter().any(|v| !v.is_zero()) {
                return None;
            }
            if !h[p].divides(&r[p]) {
                return None;
            }
            let q = r[p].div_exact(&h[p]);
            if !q.is_zero() {
                axpy(&mut r, &q, h);
                for (xi, ti) in x.iter_mut().zip(t) {
                    if !ti.is_zero() {
                        xi.add_mul(&q, ti);
                    }
                }
            }
            prev = p + 1;
        }
        if r.iter().all(|v| v.is_zero()) {
            Some(x)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn canonical_basis_independent_of_generator_order() {
        let a = Lattice::from_generators(2, vec![iv(&[2, 4]), iv(&[6, 8])]);
        let b = Lattice::from_generators(2, vec![iv(&[6, 8]), iv(&[2, 4]), iv(&[8, 12])]);
        assert_eq!(a, b);
        assert_eq!(a.rank(), 2);
        assert!(a.contains(&iv(&[8, 12])));
        assert!(!a.contains(&iv(&[1, 0])));
    }

    #[test]
    fn kernel_of_rank_one_map() {
        let m = Matrix::from_i64(1, 3, &[2, 4, 6]);
        let k = kernel(&m);
        assert_eq!(k.rank(), 2);
        for b in k.basis() {
            assert!(m.mul_vec(b).iter().all(|v| v.is_zero()));
        }
        assert!(k.contains(&iv(&[1, 1, -1])));
        assert!(k.contains(&iv(&[2, -1, 0])));
    }

    #[test]
    fn solver_finds_integer_solutions_only() {
        let a = Matrix::from_i64(2, 2, &[2, 0, 0, 3]);
        let s = Solver::new(&a);
        assert_eq!(s.solve(&iv(&[4, 9])), Some(iv(&[2, 3])));
        assert_eq!(s.solve(&iv(&[1, 0])), None);
    }

    #[test]
    fn preimage_of_even_lattice() {
        let m = Matrix::from_i64(1, 1, &[3]);
        let t = Lattice::scaled_full(1, &Int::from(2));
        let p = preimage(&m, &t);
        assert_eq!(p, Lattice::scaled_full(1, &Int::from(2)));
    }
}
