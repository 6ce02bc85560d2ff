//! Seeded random generators for test and benchmark inputs.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use alloc::sync::Arc;

use crate::chain::ChainComplex;
use crate::int::Int;
use crate::lattice::{preimage, Lattice};
use crate::matrix::Matrix;
use crate::module::FgModule;
use crate::ring::RingSpec;
use crate::simplicial::{dold_kan, dold_kan_bisimplicial, BisimplicialModule, DoubleComplex, SimplicialModule};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape bounds for random complexes.
#[derive(Clone, Copy, Debug)]
pub struct ComplexBounds {
    pub max_top: usize,
    pub max_rank: usize,
    pub max_entry: i64,
}

impl Default for ComplexBounds {
    fn default() -> Self {
        ComplexBounds {
            max_top: 5,
            max_rank: 4,
            max_entry: 3,
        }
    }
}

fn entry_ok(v: &Int, bound: i64) -> bool {
    v.to_i64().is_some_and(|x| x.abs() <= bound)
}

/// A degreewise free complex with `|entries| ≤ max_entry`. Each column of
/// `d_{n+1}` is a small multiple of a small combination of a basis of
/// `ker d_n`, resampled until it fits the entry bound.
pub fn random_free_complex<R: Rng>(rng: &mut R, ring: &RingSpec, b: ComplexBounds) -> ChainComplex {
    let top = rng.gen_range(0..=b.max_top);
    let ranks: Vec<usize> = (0..=top).map(|_| rng.gen_range(0..=b.max_rank)).collect();
    let m = ring.characteristic();
    let mut ds: Vec<Matrix> = Vec::new();
    for n in 1..=top {
        let kernel = if n == 1 {
            Lattice::full(ranks[0])
        } else {
            preimage(&ds[n - 2], &Lattice::scaled_full(ranks[n - 2], &m))
        };
        let basis = kernel.basis().to_vec();
        let rows = ranks[n - 1];
        let mut cols = Vec::with_capacity(ranks[n]);
        for _ in 0..ranks[n] {
            let mut col = vec![Int::ZERO; rows];
            for _ in 0..8 {
                let mut cand = vec![Int::ZERO; rows];
                for v in &basis {
                    let c = Int::from(rng.gen_range(-1i64..=1));
                    for (x, y) in cand.iter_mut().zip(v) {
                        x.add_mul(&c, y);
                    }
                }
                let s = Int::from(rng.gen_range(1i64..=3));
                for x in cand.iter_mut() {
                    *x *= &s;
                    *x = ring.reduce(x);
                }
                if cand.iter().all(|x| entry_ok(x, b.max_entry)) {
                    col = cand;
                    break;
                }
            }
            cols.push(col);
        }
        ds.push(Matrix::from_columns(rows, &cols));
    }
    ChainComplex::free(ring.clone(), &ranks, ds).expect("columns lie in the kernel")
}

/// A random integer matrix with entries in `[-bound, bound]`.
pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> Matrix {
    let data = (0..rows * cols).map(|_| Int::from(rng.gen_range(-bound..=bound))).collect();
    Matrix::from_vec(rows, cols, data)
}

/// A random unimodular matrix: a product of elementary operations.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> (Matrix, Matrix) {
    let mut u = Matrix::identity(n);
    let mut inv = Matrix::identity(n);
    if n < 2 {
        return (u, inv);
    }
    for _ in 0..steps {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let k = Int::from(rng.gen_range(-1i64..=1));
        // u ← E u with E = I + k e_{ab}; inv ← inv E⁻¹.
        u.add_row_multiple(a, b, &k);
        inv.add_col_multiple(b, a, &-k);
    }
    (u, inv)
}

/// `Γ` of a random free complex through `truncation`, in a scrambled basis.
pub fn random_simplicial<R: Rng>(rng: &mut R, ring: &RingSpec, b: ComplexBounds, truncation: usize) -> SimplicialModule {
    let c = random_free_complex(rng, ring, b);
    let x = dold_kan(&c, truncation);
    let (u, ui): (Vec<Matrix>, Vec<Matrix>) = x
        .levels()
        .iter()
        .map(|l| random_unimodular(rng, l.gens(), 2 * l.gens()))
        .unzip();
    x.transport(&u, &ui)
}

/// Shape bounds for random bisimplicial modules.
#[derive(Clone, Copy, Debug)]
pub struct BisimplicialBounds {
    pub max_external: usize,
    pub max_internal: usize,
    /// Per-bidegree rank of the underlying double complex.
    pub max_rank: usize,
    pub max_entry: i64,
}

impl Default for BisimplicialBounds {
    fn default() -> Self {
        BisimplicialBounds {
            max_external: 4,
            max_internal: 4,
            max_rank: 3,
            max_entry: 3,
        }
    }
}

/// Double complex under construction: `ranks[a][b]`, `h[a][b]`, `v[a][b]`
/// kept as dense blocks and grown by direct sums.
struct Grid {
    ranks: Vec<Vec<usize>>,
    h: Vec<Vec<Matrix>>,
    v: Vec<Vec<Matrix>>,
}

impl Grid {
    fn new(at: usize, bt: usize) -> Grid {
        Grid {
            ranks: vec![vec![0; bt + 1]; at + 1],
            h: vec![vec![Matrix::zeros(0, 0); bt + 1]; at + 1],
            v: vec![vec![Matrix::zeros(0, 0); bt + 1]; at + 1],
        }
    }

    fn fits(&self, add: &[(usize, usize, usize)], cap: usize) -> bool {
        add.iter().all(|&(a, b, r)| self.ranks[a][b] + r <= cap)
    }

    /// Direct sum with a piece given by ranks and its `h`, `v` blocks.
    fn add(&mut self, pr: &[Vec<usize>], ph: &dyn Fn(usize, usize) -> Matrix, pv: &dyn Fn(usize, usize) -> Matrix) {
        let (at, bt) = (self.ranks.len(), self.ranks[0].len());
        let piece = |a: usize, b: usize| if a < at && b < bt { pr[a][b] } else { 0 };
        for a in 0..at {
            for b in 0..bt {
                if a >= 1 {
                    let mut m = Matrix::zeros(self.ranks[a - 1][b] + piece(a - 1, b), self.ranks[a][b] + piece(a, b));
                    m.set_block(0, 0, &self.h[a][b]);
                    m.set_block(self.ranks[a - 1][b], self.ranks[a][b], &ph(a, b));
                    self.h[a][b] = m;
                }
                if b >= 1 {
                    let mut m = Matrix::zeros(self.ranks[a][b - 1] + piece(a, b - 1), self.ranks[a][b] + piece(a, b));
                    m.set_block(0, 0, &self.v[a][b]);
                    m.set_block(self.ranks[a][b - 1], self.ranks[a][b], &pv(a, b));
                    self.v[a][b] = m;
                }
            }
        }
        for a in 0..at {
            for b in 0..bt {
                self.ranks[a][b] += piece(a, b);
            }
        }
        for a in 0..at {
            for b in 0..bt {
                if a == 0 {
                    self.h[a][b] = Matrix::zeros(0, self.ranks[a][b]);
                }
                if b == 0 {
                    self.v[a][b] = Matrix::zeros(0, self.ranks[a][b]);
                }
            }
        }
    }
}

/// A double complex whose rows of internal degree `≥ 1` are horizontally
/// acyclic, so that `Γ ⊗ Γ` of it is Reedy fibrant. Built from an arbitrary
/// row 0, pieces `(V →id V)` with `V` a vertical complex, and contractible
/// pieces `(W →id W)` in row 1 mapped into row 0.
pub fn random_fibrant_double_complex<R: Rng>(
    rng: &mut R,
    ring: &RingSpec,
    at: usize,
    bt: usize,
    max_rank: usize,
    max_entry: i64,
) -> DoubleComplex {
    let mut g = Grid::new(at, bt);
    let row0 = random_free_complex(
        rng,
        ring,
        ComplexBounds {
            max_top: at,
            max_rank,
            max_entry,
        },
    );
    let mut pr = vec![vec![0; bt + 1]; at + 1];
    for a in 0..=row0.top() {
        pr[a][0] = row0.term(a).gens();
    }
    g.add(
        &pr,
        &|a, b| {
            if b == 0 {
                row0.diff(a).matrix().clone()
            } else {
                Matrix::zeros(pr[a - 1][b], pr[a][b])
            }
        },
        &|a, b| Matrix::zeros(pr[a][b - 1], pr[a][b]),
    );
    if at >= 1 {
        for _ in 0..rng.gen_range(0..=2) {
            let a = rng.gen_range(0..at);
            let vc = random_free_complex(
                rng,
                ring,
                ComplexBounds {
                    max_top: bt,
                    max_rank: max_rank.min(2),
                    max_entry,
                },
            );
            let add: Vec<(usize, usize, usize)> =
                (0..=vc.top()).flat_map(|b| [(a, b, vc.term(b).gens()), (a + 1, b, vc.term(b).gens())]).collect();
            if !g.fits(&add, max_rank) {
                continue;
            }
            let mut pr = vec![vec![0; bt + 1]; at + 1];
            for &(x, y, r) in &add {
                pr[x][y] = r;
            }
            g.add(
                &pr,
                &|x, y| {
                    if x == a + 1 {
                        Matrix::identity(pr[x][y])
                    } else {
                        Matrix::zeros(pr[x - 1][y], pr[x][y])
                    }
                },
                &|x, y| {
                    if (x == a || x == a + 1) && y <= vc.top() {
                        vc.diff(y).matrix().clone()
                    } else {
                        Matrix::zeros(pr[x][y - 1], pr[x][y])
                    }
                },
            );
        }
    }
    if at >= 1 && bt >= 1 {
        for _ in 0..rng.gen_range(0..=2) {
            let a = rng.gen_range(0..at);
            if !g.fits(&[(a, 1, 1), (a + 1, 1, 1)], max_rank) {
                continue;
            }
            let mut pr = vec![vec![0; bt + 1]; at + 1];
            pr[a][1] = 1;
            pr[a + 1][1] = 1;
            let (r0, r1) = (g.ranks[a][1], g.ranks[a + 1][1]);
            g.add(
                &pr,
                &|x, y| {
                    if x == a + 1 && y == 1 {
                        Matrix::identity(1)
                    } else {
                        Matrix::zeros(pr[x - 1][y], pr[x][y])
                    }
                },
                &|x, y| Matrix::zeros(pr[x][y - 1], pr[x][y]),
            );
            // v: (a+1, 1) → (a+1, 0) is φ, and (a, 1) → (a, 0) is h φ.
            let phi = random_matrix(rng, g.ranks[a + 1][0], 1, 1);
            let hphi = g.h[a + 1][0].mul(&phi);
            let hphi = Matrix::from_columns(hphi.rows(), &[hphi.column(0).iter().map(|x| ring.reduce(x)).collect()]);
            g.v[a + 1][1].set_block(0, r1, &phi);
            g.v[a][1].set_block(0, r0, &hphi);
        }
    }
    let terms = g
        .ranks
        .iter()
        .map(|row| row.iter().map(|&r| Arc::new(FgModule::free(ring.clone(), r))).collect())
        .collect();
    DoubleComplex {
        ring: ring.clone(),
        terms,
        h: g.h,
        v: g.v,
    }
}

/// `Γ ⊗ Γ` of [`random_fibrant_double_complex`] with random truncations and
/// a scrambled basis in every bidegree.
pub fn random_bisimplicial<R: Rng>(rng: &mut R, ring: &RingSpec, b: BisimplicialBounds) -> BisimplicialModule {
    let pt = rng.gen_range(2..=b.max_external.max(2));
    let qt = rng.gen_range(1..=b.max_internal.max(1));
    let d = random_fibrant_double_complex(rng, ring, pt.min(2), qt.min(2), b.max_rank, b.max_entry);
    let x = dold_kan_bisimplicial(&d, pt, qt).expect("generated double complexes are valid");
    let mut u = Vec::with_capacity(pt + 1);
    let mut ui = Vec::with_capacity(pt + 1);
    for p in 0..=pt {
        let (a, c): (Vec<Matrix>, Vec<Matrix>) = (0..=qt)
            .map(|q| {
                let n = x.term(p, q).gens();
                random_unimodular(rng, n, 2 * n)
            })
            .unzip();
        u.push(a);
        ui.push(c);
    }
    x.transport(&u, &ui)
}
