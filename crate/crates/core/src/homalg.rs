//! Hom, Ext¹ and Tor₁ from the relation presentation, and a brute-force
//! enumerator of extensions used as an independent oracle.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::int::Int;
use crate::lattice::{preimage, Lattice};
use crate::matrix::Matrix;
use crate::module::{homology_at, power, FgModule, Module, ModuleMap, SubQuotient};
use crate::ring::RingSpec;

/// First two stages of a free resolution of `a` over its ring:
/// `F2 -k-> F1 -r-> F0 = R^g`. Over `Z` the relation basis is independent so
/// `F2 = 0`; over `Z/m`, `F2` spans `{y : r y ∈ m Z^g}`.
pub struct Resolution {
    pub r: Matrix,
    pub k: Matrix,
}

pub fn resolution(a: &FgModule) -> Resolution {
    let r = a.relation_matrix();
    let s = r.cols();
    let k = match a.ring() {
        RingSpec::Integers => Matrix::zeros(s, 0),
        RingSpec::Mod(m) => {
            let target = Lattice::scaled_full(a.gens(), m);
            let pre = if s == 0 {
                Lattice::zero(0)
            } else {
                preimage(&r, &target)
            };
            pre.basis_matrix()
        }
    };
    Resolution { r, k }
}

fn check_ring(a: &FgModule, b: &FgModule) -> Result<()> {
    if a.ring() != b.ring() {
        Err(Error::RingMismatch)
    } else {
        Ok(())
    }
}

/// `Hom(A, B)`; elements are `B.gens × A.gens` matrices flattened column-major.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub src: Module,
    pub tgt: Module,
    pub sq: SubQuotient,
}

impl HomSpace {
    pub fn new(a: &Module, b: &Module) -> Result<HomSpace> {
        check_ring(a, b)?;
        let (g, h) = (a.gens(), b.gens());
        let r = a.relation_matrix();
        let s = r.cols();
        let cond = r.transpose().kron(&Matrix::identity(h));
        let l = if s == 0 {
            Lattice::full(g * h)
        } else {
            preimage(&cond, power(b, s).relations())
        };
        let n = power(b, g).relations().clone();
        let sq = SubQuotient::new(a.ring().clone(), &l, &n);
        Ok(HomSpace {
            src: a.clone(),
            tgt: b.clone(),
            sq,
        })
    }

    pub fn module(&self) -> &Module {
        &self.sq.module
    }

    pub fn map_of(&self, coords: &[Int]) -> ModuleMap {
        let v = self.sq.inc.mul_vec(coords);
        let m = Matrix::from_vec_columns(self.tgt.gens(), self.src.gens(), &v);
        ModuleMap::from_parts(self.src.clone(), self.tgt.clone(), m)
    }

    pub fn coords_of(&self, f: &ModuleMap) -> Vec<Int> {
        self.sq
            .coords(&f.matrix().vec_columns())
            .expect("a well-defined map lies in the Hom lattice")
    }

    /// Every homomorphism (finite Hom only), in canonical coordinate order.
    pub fn all_maps(&self) -> Result<Vec<ModuleMap>> {
        Ok(self
            .module()
            .coordinate_tuples()?
            .iter()
            .map(|c| self.map_of(c))
            .collect())
    }
}

/// `Ext¹(A, B)` as the middle homology of `B^g → B^s → B^t`; elements are
/// cocycles on the relation basis of `A`.
#[derive(Clone, Debug)]
pub struct Ext1 {
    pub a: Module,
    pub b: Module,
    pub res_r: Matrix,
    pub sq: SubQuotient,
}

impl Ext1 {
    pub fn new(a: &Module, b: &Module) -> Result<Ext1> {
        check_ring(a, b)?;
        let res = resolution(a);
        let (g, h) = (a.gens(), b.gens());
        let (s, t) = (res.r.cols(), res.k.cols());
        let bg = Arc::new(power(b, g));
        let bs = Arc::new(power(b, s));
        let bt = Arc::new(power(b, t));
        let id = Matrix::identity(h);
        let f = ModuleMap::from_parts(bg, bs.clone(), res.r.transpose().kron(&id));
        let k = ModuleMap::from_parts(bs, bt, res.k.transpose().kron(&id));
        let sq = homology_at(&f, &k);
        Ok(Ext1 {
            a: a.clone(),
            b: b.clone(),
            res_r: res.r,
            sq,
        })
    }

    pub fn module(&self) -> &Module {
        &self.sq.module
    }

    /// Class of a cocycle (a vector in `B^s`, block `j` = value on relator `j`).
    pub fn class_of(&self, cocycle: &[Int]) -> Option<Vec<Int>> {
        self.sq.coords(cocycle)
    }

    pub fn cocycle_of(&self, coords: &[Int]) -> Vec<Int> {
        self.sq.inc.mul_vec(coords)
    }
}

pub fn hom(a: &Module, b: &Module) -> Result<Module> {
    Ok(HomSpace::new(a, b)?.module().clone())
}

pub fn hom_and_ext(a: &Module, b: &Module) -> Result<(Module, Module)> {
    Ok((hom(a, b)?, Ext1::new(a, b)?.module().clone()))
}

/// `Tor₁(A, B)` as the middle homology of `B^t → B^s → B^g`.
pub fn tor1(a: &Module, b: &Module) -> Result<Module> {
    check_ring(a, b)?;
    let res = resolution(a);
    let (g, h) = (a.gens(), b.gens());
    let (s, t) = (res.r.cols(), res.k.cols());
    let id = Matrix::identity(h);
    let bg = Arc::new(power(b, g));
    let bs = Arc::new(power(b, s));
    let bt = Arc::new(power(b, t));
    let f = ModuleMap::from_parts(bt, bs.clone(), res.k.kron(&id));
    let k = ModuleMap::from_parts(bs, bg, res.r.kron(&id));
    Ok(homology_at(&f, &k).module.clone())
}

/// `A ⊗ B`.
pub fn tensor(a: &Module, b: &Module) -> Result<Module> {
    check_ring(a, b)?;
    let (g, h) = (a.gens(), b.gens());
    let mut rels = Vec::new();
    for r in a.relations().basis() {
        for j in 0..h {
            let mut v = vec![Int::ZERO; g * h];
            for i in 0..g {
                v[i * h + j] = r[i].clone();
            }
            rels.push(v);
        }
    }
    for i in 0..g {
        for r in b.relations().basis() {
            let mut v = vec![Int::ZERO; g * h];
            v[i * h..(i + 1) * h].clone_from_slice(r);
            rels.push(v);
        }
    }
    let full = FgModule::new(a.ring().clone(), g * h, rels);
    Ok(Arc::new(full.minimal().0))
}

/// `0 → sub → total → quotient → 0`.
#[derive(Clone, Debug)]
pub struct ExtensionClass {
    pub sub: Module,
    pub quotient: Module,
    pub total: Module,
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
}

impl ExtensionClass {
    pub fn validate(&self) -> Result<()> {
        if !self.inclusion.is_injective() {
            return Err(Error::Precondition("extension inclusion is not injective".into()));
        }
        if !self.projection.is_surjective() {
            return Err(Error::Precondition("extension projection is not surjective".into()));
        }
        let im = self.inclusion.image();
        let ker = self.projection.kernel();
        if im.lattice() != ker.lattice() {
            return Err(Error::Precondition("extension is not exact in the middle".into()));
        }
        Ok(())
    }

    /// Cocycle on the relation basis of the quotient: choose lifts `ℓ_j` of the
    /// quotient generators, then relator `r` gives `Σ r_i ℓ_i ∈ sub`.
    pub fn cocycle(&self) -> Result<Vec<Int>> {
        let q = &self.quotient;
        let lifts = lift_generators(&self.projection)?;
        let inc_solver = SubQuotientSolver::new(&self.inclusion);
        let mut out = Vec::new();
        for r in q.relations().basis() {
            let mut x = vec![Int::ZERO; self.total.gens()];
            for (ri, l) in r.iter().zip(&lifts) {
                if ri.is_zero() {
                    continue;
                }
                for (xv, lv) in x.iter_mut().zip(l) {
                    xv.add_mul(ri, lv);
                }
            }
            let s = inc_solver
                .preimage(&x)
                .ok_or_else(|| Error::Precondition("relator lift not in the sub-module".into()))?;
            out.extend(s);
        }
        Ok(out)
    }

    /// Standard model `(sub ⊕ R^q) / ⟨(−c_j, r_j)⟩` of a cocycle.
    pub fn from_cocycle(sub: &Module, quotient: &Module, c: &[Int]) -> Result<ExtensionClass> {
        check_ring(sub, quotient)?;
        let (h, q) = (sub.gens(), quotient.gens());
        let mut rels = Vec::new();
        for r in sub.relations().basis() {
            let mut v = vec![Int::ZERO; h + q];
            v[..h].clone_from_slice(r);
            rels.push(v);
        }
        for (j, r) in quotient.relations().basis().iter().enumerate() {
            let mut v = vec![Int::ZERO; h + q];
            for i in 0..h {
                v[i] = -c[j * h + i].clone();
            }
            v[h..].clone_from_slice(r);
            rels.push(v);
        }
        let total = Arc::new(FgModule::new(sub.ring().clone(), h + q, rels));
        let inc = Matrix::identity(h).vstack(&Matrix::zeros(q, h));
        let proj = Matrix::zeros(q, h).hstack(&Matrix::identity(q));
        let inclusion = ModuleMap::new(sub.clone(), total.clone(), inc)?;
        let projection = ModuleMap::new(total.clone(), quotient.clone(), proj)?;
        Ok(ExtensionClass {
            sub: sub.clone(),
            quotient: quotient.clone(),
            total,
            inclusion,
            projection,
        })
    }
}

/// Preimages of each quotient generator under a surjection.
pub fn lift_generators(p: &ModuleMap) -> Result<Vec<Vec<Int>>> {
    let tgt = p.target();
    let aug = p.matrix().hstack(&tgt.relation_matrix());
    let solver = crate::lattice::Solver::new(&aug);
    let n = p.source().gens();
    (0..tgt.gens())
        .map(|j| {
            let mut e = vec![Int::ZERO; tgt.gens()];
            e[j] = Int::ONE;
            solver
                .solve(&e)
                .map(|x| p.source().reduce(&x[..n]))
                .ok_or_else(|| Error::Precondition("projection is not surjective".into()))
        })
        .collect()
}

/// Solves `f(y) = x` in the target of an injective (or any) map.
pub struct SubQuotientSolver {
    solver: crate::lattice::Solver,
    n: usize,
    src: Module,
}

impl SubQuotientSolver {
    pub fn new(f: &ModuleMap) -> SubQuotientSolver {
        let aug = f.matrix().hstack(&f.target().relation_matrix());
        SubQuotientSolver {
            solver: crate::lattice::Solver::new(&aug),
            n: f.source().gens(),
            src: f.source().clone(),
        }
    }

    pub fn preimage(&self, x: &[Int]) -> Option<Vec<Int>> {
        self.solver.solve(x).map(|y| self.src.reduce(&y[..self.n]))
    }
}

/// Whether two extensions of `quotient` by `sub` (in standard cocycle form,
/// same sub and quotient) are equivalent, by exhaustive search for
/// `θ = [[1, X], [0, 1]]` commuting with inclusion and projection.
pub fn standard_extensions_equivalent(e1: &ExtensionClass, e2: &ExtensionClass) -> Result<bool> {
    let (h, q) = (e1.sub.gens(), e1.quotient.gens());
    let sub_elems = e1.sub.elements()?;
    let mut idx = vec![0usize; q];
    loop {
        let mut m = Matrix::identity(h + q);
        for (j, &k) in idx.iter().enumerate() {
            for i in 0..h {
                m.set(i, h + j, sub_elems[k][i].clone());
            }
        }
        if ModuleMap::new(e1.total.clone(), e2.total.clone(), m).is_ok() {
            return Ok(true);
        }
        let mut pos = 0;
        loop {
            if pos == q {
                return Ok(false);
            }
            idx[pos] += 1;
            if idx[pos] < sub_elems.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Whether two extensions with the same ends are equivalent, by searching
/// every `θ: J₁ → J₂` with `p₂θ = p₁` (lift plus an element of the sub) for
/// one that also satisfies `θ i₁ = i₂`. Any such `θ` is an isomorphism.
pub fn extensions_equivalent(e1: &ExtensionClass, e2: &ExtensionClass) -> Result<bool> {
    if e1.sub.relations() != e2.sub.relations() || e1.quotient.relations() != e2.quotient.relations() {
        return Err(Error::Precondition("extensions have different ends".into()));
    }
    let sub_elems = e1.sub.elements()?;
    let lifts = lift_generators(&e2.projection)?;
    let (j1, j2) = (e1.total.gens(), e2.total.gens());
    let base: Vec<Vec<Int>> = (0..j1)
        .map(|g| {
            let pg = e1.projection.matrix().column(g);
            let mut x = vec![Int::ZERO; j2];
            for (c, l) in pg.iter().zip(&lifts) {
                for (xv, lv) in x.iter_mut().zip(l) {
                    xv.add_mul(c, lv);
                }
            }
            x
        })
        .collect();
    let shifts: Vec<Vec<Int>> = sub_elems.iter().map(|s| e2.inclusion.apply(s)).collect();
    let mut idx = vec![0usize; j1];
    loop {
        let cols: Vec<Vec<Int>> = (0..j1)
            .map(|g| {
                let mut v = base[g].clone();
                for (a, b) in v.iter_mut().zip(&shifts[idx[g]]) {
                    *a += b;
                }
                v
            })
            .collect();
        if let Ok(theta) = ModuleMap::new(e1.total.clone(), e2.total.clone(), Matrix::from_columns(j2, &cols)) {
            if e1.inclusion.then(&theta).sub(&e2.inclusion).is_zero() {
                return Ok(true);
            }
        }
        let mut pos = 0;
        loop {
            if pos == j1 {
                return Ok(false);
            }
            idx[pos] += 1;
            if idx[pos] < shifts.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// One representative per equivalence class of extensions
/// `0 → sub → J → quotient → 0`, found by enumerating all cochains on the
/// relators of `quotient`, keeping those whose total module has the right
/// order, and merging classes by searching explicit isomorphisms.
pub fn enumerate_extensions(quotient: &Module, sub: &Module) -> Result<Vec<ExtensionClass>> {
    check_ring(quotient, sub)?;
    if !quotient.is_finite() || !sub.is_finite() {
        return Err(Error::UnsupportedOracleInput(
            "extension enumeration needs finite modules".into(),
        ));
    }
    let order = quotient.order().unwrap() * sub.order().unwrap();
    let s = quotient.relations().rank();
    let elems = sub.elements()?;
    let mut reps: Vec<ExtensionClass> = Vec::new();
    let mut idx = vec![0usize; s];
    loop {
        let c: Vec<Int> = idx.iter().flat_map(|&k| elems[k].iter().cloned()).collect();
        let e = ExtensionClass::from_cocycle(sub, quotient, &c)?;
        if e.total.order() == Some(order.clone()) {
            let mut known = false;
            for r in &reps {
                if standard_extensions_equivalent(r, &e)? {
                    known = true;
                    break;
                }
            }
            if !known {
                reps.push(e);
            }
        }
        let mut pos = s;
        loop {
            if pos == 0 {
                return Ok(reps);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < elems.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::CanonicalForm;

    fn z() -> RingSpec {
        RingSpec::Integers
    }
    fn cyc(n: i64) -> Module {
        Arc::new(FgModule::cyclic(z(), n))
    }
    fn form(m: &Module) -> CanonicalForm {
        m.canonical_form().clone()
    }
    fn tors(f: &[i64]) -> CanonicalForm {
        CanonicalForm {
            free_rank: 0,
            factors: f.iter().map(|&x| Int::from(x)).collect(),
        }
    }

    #[test]
    fn ext_of_free_vanishes() {
        let a = Arc::new(FgModule::free(z(), 1));
        let (_, e) = hom_and_ext(&a, &cyc(4)).unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn ext_zn_z_is_zn() {
        let b = Arc::new(FgModule::free(z(), 1));
        for n in 2..7 {
            let (h, e) = hom_and_ext(&cyc(n), &b).unwrap();
            assert!(h.is_zero());
            assert_eq!(form(&e), tors(&[n]));
        }
    }

    #[test]
    fn hom_and_ext_z2_z4() {
        let (h, e) = hom_and_ext(&cyc(2), &cyc(4)).unwrap();
        assert_eq!(form(&h), tors(&[2]));
        assert_eq!(form(&e), tors(&[2]));
    }

    #[test]
    fn tor_examples() {
        assert_eq!(form(&tor1(&cyc(4), &cyc(6)).unwrap()), tors(&[2]));
        assert_eq!(form(&tor1(&cyc(2), &cyc(2)).unwrap()), tors(&[2]));
        let f = Arc::new(FgModule::free(z(), 2));
        assert!(tor1(&f, &cyc(3)).unwrap().is_zero());
    }

    #[test]
    fn extension_counts() {
        assert_eq!(enumerate_extensions(&cyc(2), &cyc(2)).unwrap().len(), 2);
        assert_eq!(enumerate_extensions(&cyc(2), &cyc(3)).unwrap().len(), 1);
        let zero = Arc::new(FgModule::zero(z()));
        assert_eq!(enumerate_extensions(&cyc(4), &zero).unwrap().len(), 1);
    }

    #[test]
    fn z4_over_z4_ring_has_no_extensions_by_itself() {
        let r = RingSpec::modulo(4);
        let a = Arc::new(FgModule::free(r, 1));
        let (h, e) = hom_and_ext(&a, &a).unwrap();
        assert_eq!(form(&h), tors(&[4]));
        assert!(e.is_zero());
        assert_eq!(enumerate_extensions(&a, &a).unwrap().len(), 1);
    }
}
