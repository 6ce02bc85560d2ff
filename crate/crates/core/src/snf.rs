//! Smith normal form with both transforms and their inverses.

use crate::int::Int;
use crate::matrix::Matrix;
use crate::ring::RingSpec;

/// `d = u · a · v`, with `u_inv = u⁻¹` and `v_inv = v⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub u: Matrix,
    pub u_inv: Matrix,
    pub d: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
}

impl Smith {
    /// Diagonal entries (length `min(rows, cols)`).
    pub fn diagonal(&self) -> alloc::vec::Vec<Int> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

struct State {
    a: Matrix,
    u: Matrix,
    u_inv: Matrix,
    v: Matrix,
    v_inv: Matrix,
}

impl State {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// row_i -= q row_t
    fn sub_row(&mut self, i: usize, t: usize, q: &Int) {
        let nq = -q;
        self.a.add_row_multiple(i, t, &nq);
        self.u.add_row_multiple(i, t, &nq);
        self.u_inv.add_col_multiple(t, i, q);
    }

    /// col_j -= q col_t
    fn sub_col(&mut self, j: usize, t: usize, q: &Int) {
        let nq = -q;
        self.a.add_col_multiple(j, t, &nq);
        self.v.add_col_multiple(j, t, &nq);
        self.v_inv.add_row_multiple(t, j, q);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
}

/// Smith normal form over `Z`.
///
/// Pivot: smallest absolute value in the active block, ties broken by the
/// lowest `(row, col)`. Eliminations use rounded quotients; the diagonal is
/// non-negative and forms a divisibility chain.
pub fn smith_z(a: &Matrix) -> Smith {
    let (m, n) = (a.rows(), a.cols());
    let mut s = State {
        a: a.clone(),
        u: Matrix::identity(m),
        u_inv: Matrix::identity(m),
        v: Matrix::identity(n),
        v_inv: Matrix::identity(n),
    };
    let k = m.min(n);
    for t in 0..k {
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = s.a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) if x.abs() < s.a.get(bi, bj).abs() => best = Some((i, j)),
                    _ => {}
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap_rows(t, pi);
        s.swap_cols(t, pj);
        loop {
            let p = s.a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                if !s.a.get(i, t).is_zero() {
                    let q = s.a.get(i, t).div_round(&p);
                    s.sub_row(i, t, &q);
                    clean &= s.a.get(i, t).is_zero();
                }
            }
            for j in t + 1..n {
                if !s.a.get(t, j).is_zero() {
                    let q = s.a.get(t, j).div_round(&p);
                    s.sub_col(j, t, &q);
                    clean &= s.a.get(t, j).is_zero();
                }
            }
            if !clean {
                // A remainder smaller than the pivot survived: re-pivot on it.
                let mut best = (t, t);
                for i in t + 1..m {
                    let x = s.a.get(i, t);
                    if !x.is_zero() && x.abs() < s.a.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    let x = s.a.get(t, j);
                    if !x.is_zero() && x.abs() < s.a.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                s.swap_rows(t, best.0);
                s.swap_cols(t, best.1);
                continue;
            }
            let mut bad = None;
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if !p.divides(s.a.get(i, j)) {
                        bad = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad {
                Some(i) => {
                    // row_t += row_i brings a non-multiple into the pivot row.
                    let one = Int::from(-1);
                    s.sub_row(t, i, &one);
                }
                None => break,
            }
        }
        if s.a.get(t, t).is_negative() {
            s.negate_row(t);
        }
    }
    Smith {
        u: s.u,
        u_inv: s.u_inv,
        d: s.a,
        v: s.v,
        v_inv: s.v_inv,
    }
}

/// Smith normal form over the given ring. Over `Z/m` the integer form of the
/// lift is reduced and each diagonal entry rescaled by a unit to `gcd(d, m)`,
/// so the diagonal is a divisibility chain of divisors of `m` (0 for `m`).
pub fn smith(ring: &RingSpec, a: &Matrix) -> Smith {
    match ring {
        RingSpec::Integers => smith_z(a),
        RingSpec::Mod(m) => {
            let lifted = a.reduce_mod(m);
            let mut s = smith_z(&lifted);
            let k = s.d.rows().min(s.d.cols());
            for i in 0..k {
                let d = s.d.get(i, i).mod_floor(m);
                if d.is_zero() {
                    s.d.set(i, i, Int::ZERO);
                    continue;
                }
                let g = d.gcd(m);
                let unit = unit_lift(&d.div_exact(&g), &m.div_exact(&g), m);
                let inv = unit.mod_inverse(m).expect("unit");
                s.u.scale_row(i, &inv);
                for r in 0..s.u_inv.rows() {
                    let v = s.u_inv.get(r, i) * &unit;
                    s.u_inv.set(r, i, v);
                }
                s.d.set(i, i, g);
            }
            s.u = s.u.reduce_mod(m);
            s.u_inv = s.u_inv.reduce_mod(m);
            s.v = s.v.reduce_mod(m);
            s.v_inv = s.v_inv.reduce_mod(m);
            s.d = s.d.reduce_mod(m);
            s
        }
    }
}

/// A unit `u` modulo `m` with `u ≡ c (mod m')`, where `gcd(c, m') = 1` and `m' | m`.
fn unit_lift(c: &Int, m_prime: &Int, m: &Int) -> Int {
    let mut u = c.mod_floor(m_prime);
    if u.is_zero() {
        u = m_prime.clone();
    }
    loop {
        if u.gcd(m).is_one() {
            return u;
        }
        u = u + m_prime.clone();
    }
}
