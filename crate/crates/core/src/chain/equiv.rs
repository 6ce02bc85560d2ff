//! Homotopy equivalences: the reduced Smith model of a free complex over `Z`
//! and an exhaustive linear search over finite homotopy-class groups.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::hom::{homotopy_classes, HomotopyClasses};
use super::{ChainComplex, ChainHomotopy, ChainMap, Complex};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::lattice::Solver;
use crate::matrix::Matrix;
use crate::module::ModuleMap;
use crate::snf::smith_z;

/// `g ∘ f ≃ id_c` via `h` and `f ∘ g ≃ id_d` via `k`.
#[derive(Clone, Debug)]
pub struct HomotopyEquivalence {
    pub f: ChainMap,
    pub g: ChainMap,
    pub h: ChainHomotopy,
    pub k: ChainHomotopy,
}

impl HomotopyEquivalence {
    pub fn verify(&self) -> bool {
        let gf = self.f.then(&self.g);
        let fg = self.g.then(&self.f);
        self.h.verify(&ChainMap::identity(self.f.source().clone()), &gf)
            && self.k.verify(&ChainMap::identity(self.f.target().clone()), &fg)
    }
}

/// Cap on enumerated classes in the finite search.
pub const SEARCH_LIMIT: usize = 1 << 16;

/// A Smith-adapted basis of one degree.
struct Adapted {
    /// Columns are the new basis in old coordinates.
    basis: Matrix,
    inv: Matrix,
    /// Indices of basis vectors that are cycles, in Smith order of `d_{n+1}`.
    z: Vec<usize>,
    /// `(index, a, z-position in degree n−1)` with `d w = a · z`.
    w: Vec<(usize, Int, usize)>,
    /// For each entry of `z`: the factor by which it is hit (0 if never).
    hit: Vec<Int>,
}

/// The reduced model `R` of a degreewise free complex over `Z`, with
/// `f: c → R`, `g: R → c`, `f ∘ g = id_R` and `h: id_c ≃ g ∘ f`.
///
/// `R_n` is generated by the torsion cycles (factors ascending), then the free
/// cycles, then the non-cycles whose boundary is a torsion cycle. `R` depends
/// only on the homology of `c`.
pub fn minimal_model(c: &Complex) -> Result<(Complex, ChainMap, ChainMap, ChainHomotopy)> {
    if !c.ring().is_integers() || !c.is_free() {
        return Err(Error::Precondition("the reduced model needs a free complex over Z".into()));
    }
    let top = c.top();
    let mut deg: Vec<Adapted> = Vec::with_capacity(top + 1);
    let n0 = c.term(0).gens();
    deg.push(Adapted {
        basis: Matrix::identity(n0),
        inv: Matrix::identity(n0),
        z: (0..n0).collect(),
        w: Vec::new(),
        hit: Vec::new(),
    });
    for n in 0..=top {
        let next_gens = if n < top { c.term(n + 1).gens() } else { 0 };
        let dn1 = if n < top {
            c.diff(n + 1).matrix().clone()
        } else {
            Matrix::zeros(c.term(n).gens(), 0)
        };
        let cur = &deg[n];
        // Rows of d_{n+1} in the adapted basis, restricted to cycles.
        let a = cur.inv.mul(&dn1).select_rows(&cur.z);
        let s = smith_z(&a);
        let diag = s.diagonal();
        let r = diag.iter().filter(|d| !d.is_zero()).count();
        let zcols = cur.basis.select_columns(&cur.z);
        let new_z = zcols.mul(&s.u_inv);
        let mut basis = cur.basis.clone();
        for (t, &j) in cur.z.iter().enumerate() {
            for i in 0..basis.rows() {
                basis.set(i, j, new_z.get(i, t).clone());
            }
        }
        let inv = inverse_unimodular(&basis, &cur.inv, &cur.z, &s.u);
        let mut hit = vec![Int::ZERO; cur.z.len()];
        for t in 0..r {
            hit[t] = diag[t].clone();
        }
        deg[n].basis = basis;
        deg[n].inv = inv;
        deg[n].hit = hit;
        if n < top {
            // Next degree: columns of v; the first r are non-cycles.
            let w = (0..r).map(|t| (t, diag[t].clone(), t)).collect();
            deg.push(Adapted {
                basis: s.v.clone(),
                inv: s.v_inv.clone(),
                z: (r..next_gens).collect(),
                w,
                hit: Vec::new(),
            });
        }
    }
    // Reduced generators per degree, in old coordinates.
    let mut keep: Vec<Vec<usize>> = Vec::new();
    let mut ranks = Vec::new();
    for dg in &deg {
        let mut ks = Vec::new();
        for (t, &j) in dg.z.iter().enumerate() {
            if dg.hit[t].is_zero() {
                continue;
            }
            if !dg.hit[t].is_one() {
                ks.push(j);
            }
        }
        for (t, &j) in dg.z.iter().enumerate() {
            if dg.hit[t].is_zero() {
                ks.push(j);
            }
        }
        for (j, a, _) in &dg.w {
            if !a.is_one() {
                ks.push(*j);
            }
        }
        ranks.push(ks.len());
        keep.push(ks);
    }
    // Differential of R: d w = a z, positions looked up in keep.
    let mut dmats = Vec::new();
    for n in 1..=top {
        let mut m = Matrix::zeros(ranks[n - 1], ranks[n]);
        let prev = &deg[n - 1];
        for (col, j) in keep[n].iter().enumerate() {
            if let Some((_, a, zt)) = deg[n].w.iter().find(|(jj, _, _)| jj == j) {
                let zj = prev.z[*zt];
                let row = keep[n - 1].iter().position(|x| *x == zj).expect("torsion cycle kept");
                m.set(row, col, a.clone());
            }
        }
        dmats.push(m);
    }
    let model = Arc::new(ChainComplex::free(c.ring().clone(), &ranks, dmats)?);
    let fcomps = (0..=top)
        .map(|n| {
            let m = deg[n].inv.select_rows(&keep[n]);
            ModuleMap::from_parts(c.term(n), model.term(n), m)
        })
        .collect();
    let gcomps = (0..=top)
        .map(|n| {
            let m = deg[n].basis.select_columns(&keep[n]);
            ModuleMap::from_parts(model.term(n), c.term(n), m)
        })
        .collect();
    // h(z_u) = w_u on unit pieces.
    let hcomps = (0..=top)
        .map(|n| {
            let rows = c.term(n + 1).gens();
            let cols = c.term(n).gens();
            let mut e = Matrix::zeros(rows, cols);
            if n < top {
                for (j, a, zt) in &deg[n + 1].w {
                    if a.is_one() {
                        e.set(*j, deg[n].z[*zt], Int::ONE);
                    }
                }
            }
            let m = if n < top {
                deg[n + 1].basis.mul(&e).mul(&deg[n].inv)
            } else {
                e
            };
            ModuleMap::from_parts(c.term(n), c.term(n + 1), m)
        })
        .collect();
    let f = ChainMap::from_parts(c.clone(), model.clone(), fcomps);
    let g = ChainMap::from_parts(model, c.clone(), gcomps);
    Ok((f.target().clone(), f, g, ChainHomotopy { comps: hcomps }))
}

/// Inverse of `basis` after replacing the `z` columns by `z · u⁻¹`: the
/// corresponding rows of the old inverse are multiplied by `u`.
fn inverse_unimodular(basis: &Matrix, old_inv: &Matrix, z: &[usize], u: &Matrix) -> Matrix {
    let mut inv = old_inv.clone();
    let zrows = old_inv.select_rows(z);
    let new_rows = u.mul(&zrows);
    for (t, &j) in z.iter().enumerate() {
        for k in 0..inv.cols() {
            inv.set(j, k, new_rows.get(t, k).clone());
        }
    }
    debug_assert_eq!(basis.mul(&inv), Matrix::identity(basis.rows()));
    inv
}

fn same_homology(c: &ChainComplex, d: &ChainComplex) -> bool {
    let top = c.top().max(d.top());
    (0..=top).all(|n| c.homology_module(n).isomorphic(&d.homology_module(n)))
}

/// Searches for a chain homotopy equivalence `c ⇄ d`.
///
/// Over `Z` with free terms the reduced models are compared directly, so a
/// witness is found exactly when the homology agrees. Otherwise the homotopy
/// classes `[c, d]` are enumerated; for each candidate whose homology map is an
/// isomorphism, left and right homotopy inverses are solved for linearly.
/// `None` is a certified negative when all Hom spaces are finite.
pub fn find_homotopy_equivalence(c: &Complex, d: &Complex) -> Result<Option<HomotopyEquivalence>> {
    if c.ring() != d.ring() {
        return Err(Error::RingMismatch);
    }
    if !same_homology(c, d) {
        return Ok(None);
    }
    if c.ring().is_integers() {
        if !c.is_free() || !d.is_free() {
            return Err(Error::Precondition("complexes over Z must be degreewise free".into()));
        }
        let (rc, fc, gc, hc) = minimal_model(c)?;
        let (rd, fd, gd, hd) = minimal_model(d)?;
        let top = rc.top().max(rd.top());
        if rc.extended_to(top).trimmed() != rd.extended_to(top).trimmed() {
            return Err(Error::SearchBoundExceeded("reduced models disagree despite equal homology".into()));
        }
        // R_c = R_d, so g ∘ f = g_c ∘ f_c and f ∘ g = g_d ∘ f_d.
        let rd_as_rc = retarget(&fd, &rc);
        let rc_as_rd = retarget(&fc, &rd);
        let f = rc_as_rd.then(&gd);
        let g = rd_as_rc.then(&gc);
        let eq = HomotopyEquivalence {
            h: hc,
            k: hd,
            f,
            g,
        };
        debug_assert!(eq.verify());
        return Ok(Some(eq));
    }
    if !c.is_finite() || !d.is_finite() {
        return Err(Error::SearchBoundExceeded("Hom spaces are infinite".into()));
    }
    let cd = HomotopyClasses::strict(c, d)?;
    let dc = HomotopyClasses::strict(d, c)?;
    let cc = HomotopyClasses::strict(c, c)?;
    let dd = HomotopyClasses::strict(d, d)?;
    let order = cd.group().order().expect("finite");
    if order > Int::from(SEARCH_LIMIT) {
        return Err(Error::SearchBoundExceeded(alloc::format!("{} classes of maps", order)));
    }
    let id_c = cc.map_to_class(&ChainMap::identity(c.clone())).expect("identity");
    let id_d = dd.map_to_class(&ChainMap::identity(d.clone())).expect("identity");
    for x in cd.all_classes()? {
        let f = cd.class_to_map(&x);
        let top = c.top().max(d.top());
        if !(0..=top).all(|n| f.on_homology(n).is_iso()) {
            continue;
        }
        // g ↦ [g ∘ f] and g ↦ [f ∘ g] are linear in the class of g.
        let left = solve_linear(&dc, &cc, &id_c, |g| f.then(g))?;
        let right = solve_linear(&dc, &dd, &id_d, |g| g.then(&f))?;
        if let (Some(gl), Some(_)) = (left, right) {
            let g = dc.class_to_map(&gl);
            let h = cc
                .nullhomotopy(&ChainMap::identity(c.clone()).sub(&f.then(&g)))
                .expect("g is a left inverse");
            let k = dd
                .nullhomotopy(&ChainMap::identity(d.clone()).sub(&g.then(&f)))
                .expect("a left inverse of an equivalence is two-sided");
            return Ok(Some(HomotopyEquivalence { f, g, h, k }));
        }
    }
    Ok(None)
}

/// Solves `[op(g)] = target` for a class `g` in `src`.
fn solve_linear<F>(src: &HomotopyClasses, dst: &HomotopyClasses, target: &[Int], op: F) -> Result<Option<Vec<Int>>>
where
    F: Fn(&ChainMap) -> ChainMap,
{
    let k = src.group().gens();
    let mut cols = Vec::with_capacity(k);
    for j in 0..k {
        let mut e = vec![Int::ZERO; k];
        e[j] = Int::ONE;
        let g = src.class_to_map(&e);
        let c = dst
            .map_to_class(&op(&g))
            .ok_or_else(|| Error::NotAChainMap { degree: 0 })?;
        cols.push(c);
    }
    let m = Matrix::from_columns(dst.group().gens(), &cols);
    let aug = m.hstack(&dst.group().relation_matrix());
    Ok(Solver::new(&aug)
        .solve(target)
        .map(|x| src.group().reduce(&x[..k])))
}

/// Same matrices, with the target replaced by an equal complex.
fn retarget(f: &ChainMap, tgt: &Complex) -> ChainMap {
    let comps = f
        .components()
        .iter()
        .enumerate()
        .map(|(n, m)| ModuleMap::from_parts(f.source().term(n), tgt.term(n), m.matrix().clone()))
        .collect();
    ChainMap::from_parts(f.source().clone(), tgt.clone(), comps)
}

/// A quasi-isomorphism `c → d` from a degreewise free `c`, by exhaustive
/// search over `[c, d]`; `None` is certified when the group is finite.
pub fn find_quasi_iso(c: &Complex, d: &Complex) -> Result<Option<ChainMap>> {
    if c.ring() != d.ring() {
        return Err(Error::RingMismatch);
    }
    if !same_homology(c, d) {
        return Ok(None);
    }
    let classes = homotopy_classes(c, d)?;
    let Some(order) = classes.group().order() else {
        return Err(Error::SearchBoundExceeded("infinitely many classes".into()));
    };
    if order > Int::from(SEARCH_LIMIT) {
        return Err(Error::SearchBoundExceeded(alloc::format!("{} classes of maps", order)));
    }
    let q = classes.source().clone();
    let top = q.top().max(d.top());
    let hs: Vec<_> = (0..=top).map(|n| (q.homology(n), d.homology(n))).collect();
    for x in classes.all_classes()? {
        let f = classes.class_to_map(&x);
        let ok = hs.iter().enumerate().all(|(n, (a, b))| {
            crate::module::induced_map(a, b, f.comp(n).matrix())
                .map(|m| m.is_iso())
                .unwrap_or(false)
        });
        if ok {
            return Ok(Some(f));
        }
    }
    Ok(None)
}
