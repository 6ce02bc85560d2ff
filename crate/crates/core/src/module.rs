//! Finitely generated modules as cokernels of relation lattices, maps between
//! them, and subquotients with witnessing maps.
//!
//! A module over `Z/m` is stored as a `Z`-module whose relation lattice
//! contains `m · Z^g`; Hom and linear maps are the same over either view.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::int::Int;
use crate::lattice::{preimage, Lattice};
use crate::matrix::Matrix;
use crate::ring::RingSpec;
use crate::snf::smith_z;

pub type Module = Arc<FgModule>;

/// Isomorphism type: `⊕ Z/d_i ⊕ Z^free`, with `d_1 | d_2 | …` and each `d_i > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub free_rank: usize,
    pub factors: Vec<Int>,
}

impl CanonicalForm {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.factors.is_empty()
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for d in &self.factors {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "Z/{}", d)?;
        }
        if self.free_rank > 0 {
            if !first {
                write!(f, " + ")?;
            }
            if self.free_rank == 1 {
                write!(f, "Z")?;
            } else {
                write!(f, "Z^{}", self.free_rank)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FgModule {
    ring: RingSpec,
    gens: usize,
    rels: Lattice,
    form: CanonicalForm,
    /// Rows: torsion coordinates (one per factor) then free coordinates.
    to_can: Matrix,
    /// Columns: generators' images of the canonical summands.
    from_can: Matrix,
}

impl fmt::Debug for FgModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgModule[{} on {} gens: {}]", self.ring, self.gens, self.form)
    }
}

impl FgModule {
    /// Module `R^gens / ⟨relations⟩`.
    pub fn new(ring: RingSpec, gens: usize, relations: Vec<Vec<Int>>) -> FgModule {
        let mut rel = relations;
        if let RingSpec::Mod(m) = &ring {
            for i in 0..gens {
                let mut v = vec![Int::ZERO; gens];
                v[i] = m.clone();
                rel.push(v);
            }
        }
        FgModule::from_lattice(ring, Lattice::from_generators(gens, rel))
    }

    /// Presentation by a relation matrix whose columns are relators.
    pub fn from_presentation(ring: RingSpec, rel: &Matrix) -> FgModule {
        FgModule::new(ring, rel.rows(), rel.columns())
    }

    /// Caller guarantees `m·Z^g ⊆ rels` over `Z/m`.
    pub fn from_lattice(ring: RingSpec, rels: Lattice) -> FgModule {
        let gens = rels.dim();
        let r = rels.rank();
        let s = smith_z(&rels.basis_matrix());
        let diag = s.diagonal();
        let mut keep = Vec::new();
        let mut factors = Vec::new();
        for (i, d) in diag.iter().enumerate().take(r) {
            if !d.is_one() {
                keep.push(i);
                factors.push(d.clone());
            }
        }
        let free_rank = gens - r;
        keep.extend(r..gens);
        let to_can = s.u.select_rows(&keep);
        let from_can = s.u_inv.select_columns(&keep);
        FgModule {
            ring,
            gens,
            rels,
            form: CanonicalForm { free_rank, factors },
            to_can,
            from_can,
        }
    }

    pub fn zero(ring: RingSpec) -> FgModule {
        FgModule::new(ring, 0, Vec::new())
    }

    pub fn free(ring: RingSpec, rank: usize) -> FgModule {
        FgModule::new(ring, rank, Vec::new())
    }

    /// `Z/n` over the integers (or the ring's version of it).
    pub fn cyclic(ring: RingSpec, n: i64) -> FgModule {
        FgModule::new(ring, 1, vec![vec![Int::from(n)]])
    }

    /// `⊕ Z/d_i ⊕ R^free` on exactly `factors.len() + free` generators.
    pub fn from_form(ring: RingSpec, factors: &[Int], free: usize) -> FgModule {
        let g = factors.len() + free;
        let rels = factors
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut v = vec![Int::ZERO; g];
                v[i] = d.clone();
                v
            })
            .collect();
        FgModule::new(ring, g, rels)
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &Lattice {
        &self.rels
    }

    pub fn relation_matrix(&self) -> Matrix {
        self.rels.basis_matrix()
    }

    pub fn canonical_form(&self) -> &CanonicalForm {
        &self.form
    }

    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.form.free_rank == 0
    }

    /// Free over the ring on its given generators (no relations beyond `m`).
    pub fn is_free_on_generators(&self) -> bool {
        match &self.ring {
            RingSpec::Integers => self.rels.is_zero(),
            RingSpec::Mod(m) => self.rels == Lattice::scaled_full(self.gens, m),
        }
    }

    pub fn isomorphic(&self, other: &FgModule) -> bool {
        self.ring == other.ring && self.form == other.form
    }

    pub fn order(&self) -> Option<Int> {
        if !self.is_finite() {
            return None;
        }
        Some(self.form.factors.iter().fold(Int::ONE, |a, d| a * d.clone()))
    }

    /// Number of canonical coordinates (torsion summands, then free ones).
    pub fn can_len(&self) -> usize {
        self.form.factors.len() + self.form.free_rank
    }

    pub fn to_can(&self) -> &Matrix {
        &self.to_can
    }

    pub fn from_can(&self) -> &Matrix {
        &self.from_can
    }

    /// Canonical representative of the class of `x`.
    pub fn reduce(&self, x: &[Int]) -> Vec<Int> {
        self.rels.reduce(x)
    }

    pub fn is_zero_element(&self, x: &[Int]) -> bool {
        self.rels.contains(x)
    }

    /// Canonical coordinates, torsion entries reduced into `[0, d_i)`.
    pub fn coords(&self, x: &[Int]) -> Vec<Int> {
        let mut c = self.to_can.mul_vec(x);
        for (ci, d) in c.iter_mut().zip(&self.form.factors) {
            *ci = ci.mod_floor(d);
        }
        c
    }

    pub fn from_coords(&self, c: &[Int]) -> Vec<Int> {
        self.reduce(&self.from_can.mul_vec(c))
    }

    /// All elements as generator vectors, in lexicographic order of canonical
    /// coordinates. Errors on infinite modules.
    pub fn elements(&self) -> Result<Vec<Vec<Int>>> {
        Ok(self
            .coordinate_tuples()?
            .iter()
            .map(|c| self.from_coords(c))
            .collect())
    }

    pub fn coordinate_tuples(&self) -> Result<Vec<Vec<Int>>> {
        if !self.is_finite() {
            return Err(Error::UnsupportedOracleInput(alloc::format!(
                "module {} is infinite",
                self.form
            )));
        }
        Ok(mixed_radix(&self.form.factors))
    }

    /// Isomorphic module on exactly `can_len()` generators with diagonal
    /// relations, with `from_min` (gens × k) and `to_min` (k × gens).
    pub fn minimal(&self) -> (FgModule, Matrix, Matrix) {
        let m = FgModule::from_form(self.ring.clone(), &self.form.factors, self.form.free_rank);
        (m, self.from_can.clone(), self.to_can.clone())
    }

    pub fn is_minimal(&self) -> bool {
        self.gens == self.can_len()
    }
}

/// All tuples `(c_i)` with `0 ≤ c_i < radix_i`, lexicographic.
pub fn mixed_radix(radix: &[Int]) -> Vec<Vec<Int>> {
    let mut out = vec![Vec::new()];
    for d in radix {
        let n = d.to_i64().expect("small radix");
        let mut next = Vec::with_capacity(out.len() * n as usize);
        for prefix in &out {
            for v in 0..n {
                let mut p = prefix.clone();
                p.push(Int::from(v));
                next.push(p);
            }
        }
        out = next;
    }
    out
}

pub fn direct_sum(ring: &RingSpec, parts: &[&FgModule]) -> FgModule {
    let g: usize = parts.iter().map(|p| p.gens()).sum();
    let mut rels = Vec::new();
    let mut off = 0;
    for p in parts {
        assert_eq!(p.ring(), ring, "direct sum over mixed rings");
        for b in p.relations().basis() {
            let mut v = vec![Int::ZERO; g];
            v[off..off + p.gens()].clone_from_slice(b);
            rels.push(v);
        }
        off += p.gens();
    }
    FgModule::from_lattice(ring.clone(), Lattice::from_generators(g, rels))
}

/// `k` copies of `m`, block by block.
pub fn power(m: &FgModule, k: usize) -> FgModule {
    let parts: Vec<&FgModule> = (0..k).map(|_| m).collect();
    direct_sum(m.ring(), &parts)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModuleMap {
    src: Module,
    tgt: Module,
    /// `tgt.gens × src.gens`, columns canonically reduced modulo target relations.
    mat: Matrix,
}

impl fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleMap({:?} -> {:?}: {:?})", self.src, self.tgt, self.mat)
    }
}

fn reduce_columns(tgt: &FgModule, mat: &Matrix) -> Matrix {
    if tgt.relations().is_zero() {
        return mat.clone();
    }
    let cols: Vec<Vec<Int>> = (0..mat.cols()).map(|j| tgt.reduce(&mat.column(j))).collect();
    Matrix::from_columns(mat.rows(), &cols)
}

impl ModuleMap {
    /// Validates shape, ring and well-definedness.
    pub fn new(src: Module, tgt: Module, mat: Matrix) -> Result<ModuleMap> {
        if src.ring() != tgt.ring() {
            return Err(Error::RingMismatch);
        }
        if mat.rows() != tgt.gens() || mat.cols() != src.gens() {
            return Err(Error::Shape(alloc::format!(
                "map matrix is {}x{}, expected {}x{}",
                mat.rows(),
                mat.cols(),
                tgt.gens(),
                src.gens()
            )));
        }
        for (k, r) in src.relations().basis().iter().enumerate() {
            if !tgt.relations().contains(&mat.mul_vec(r)) {
                return Err(Error::IllDefinedMap(alloc::format!(
                    "relation {} of the source is not sent into the target relations",
                    k
                )));
            }
        }
        let mat = reduce_columns(&tgt, &mat);
        Ok(ModuleMap { src, tgt, mat })
    }

    /// Internal constructor for maps that are well defined by construction.
    pub fn from_parts(src: Module, tgt: Module, mat: Matrix) -> ModuleMap {
        debug_assert_eq!((mat.rows(), mat.cols()), (tgt.gens(), src.gens()));
        let mat = reduce_columns(&tgt, &mat);
        ModuleMap { src, tgt, mat }
    }

    pub fn zero(src: Module, tgt: Module) -> ModuleMap {
        let mat = Matrix::zeros(tgt.gens(), src.gens());
        ModuleMap { src, tgt, mat }
    }

    pub fn identity(m: Module) -> ModuleMap {
        let mat = reduce_columns(&m, &Matrix::identity(m.gens()));
        ModuleMap {
            src: m.clone(),
            tgt: m,
            mat,
        }
    }

    pub fn source(&self) -> &Module {
        &self.src
    }

    pub fn target(&self) -> &Module {
        &self.tgt
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        self.tgt.reduce(&self.mat.mul_vec(x))
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleMap) -> ModuleMap {
        debug_assert_eq!(self.tgt.gens(), other.src.gens());
        ModuleMap {
            src: self.src.clone(),
            tgt: other.tgt.clone(),
            mat: reduce_columns(&other.tgt, &other.mat.mul(&self.mat)),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleMap) -> ModuleMap {
        other.then(self)
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            mat: reduce_columns(&self.tgt, &self.mat.add(&other.mat)),
        }
    }

    pub fn sub(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            mat: reduce_columns(&self.tgt, &self.mat.sub(&other.mat)),
        }
    }

    pub fn neg(&self) -> ModuleMap {
        ModuleMap {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            mat: reduce_columns(&self.tgt, &self.mat.neg()),
        }
    }

    pub fn scale(&self, k: &Int) -> ModuleMap {
        ModuleMap {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            mat: reduce_columns(&self.tgt, &self.mat.scale(k)),
        }
    }

    /// Matrix on canonical coordinates (`tgt.can_len × src.can_len`).
    pub fn canonical_matrix(&self) -> Matrix {
        let k = self.src.can_len();
        let cols: Vec<Vec<Int>> = (0..k)
            .map(|j| {
                let x = self.src.from_can().column(j);
                self.tgt.coords(&self.mat.mul_vec(&x))
            })
            .collect();
        Matrix::from_columns(self.tgt.can_len(), &cols)
    }

    pub fn kernel(&self) -> SubQuotient {
        let l = preimage(&self.mat, self.tgt.relations());
        SubQuotient::new(self.src.ring().clone(), &l, self.src.relations())
    }

    pub fn image(&self) -> SubQuotient {
        let l = Lattice::column_span(&self.mat).sum(self.tgt.relations());
        SubQuotient::new(self.src.ring().clone(), &l, self.tgt.relations())
    }

    /// Cokernel as a minimal module with the projection from the target.
    pub fn cokernel(&self) -> (Module, ModuleMap) {
        let rels = Lattice::column_span(&self.mat).sum(self.tgt.relations());
        let full = FgModule::from_lattice(self.tgt.ring().clone(), rels);
        let (min, _from, to) = full.minimal();
        let min = Arc::new(min);
        let proj = ModuleMap::from_parts(self.tgt.clone(), min.clone(), to);
        (min, proj)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().module.is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_zero()
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// `L / N` for lattices `N ⊆ L ⊆ Z^g`, presented minimally.
#[derive(Clone, Debug)]
pub struct SubQuotient {
    pub module: Module,
    /// `g × k`: ambient representatives of the minimal generators.
    pub inc: Matrix,
    lattice: Lattice,
    /// `k × rank(L)`: from coordinates in the basis of `L` to minimal generators.
    to_min: Matrix,
}

impl SubQuotient {
    pub fn new(ring: RingSpec, l: &Lattice, n: &Lattice) -> SubQuotient {
        debug_assert!(l.contains_lattice(n));
        let bl = l.basis_matrix();
        let rels = preimage(&bl, n);
        let pres = FgModule::from_lattice(ring, rels);
        let (min, from, to) = pres.minimal();
        SubQuotient {
            module: Arc::new(min),
            inc: bl.mul(&from),
            lattice: l.clone(),
            to_min: to,
        }
    }

    /// Minimal coordinates of an ambient vector lying in `L`.
    pub fn coords(&self, x: &[Int]) -> Option<Vec<Int>> {
        let y = self.lattice.coordinates(x)?;
        Some(self.module.reduce(&self.to_min.mul_vec(&y)))
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Inclusion into the ambient module whose relations are `N`.
    pub fn inclusion_into(&self, ambient: &Module) -> ModuleMap {
        ModuleMap::from_parts(self.module.clone(), ambient.clone(), self.inc.clone())
    }
}

/// `ker g / im f` for `A -f-> B -g-> C`.
pub fn homology_at(f: &ModuleMap, g: &ModuleMap) -> SubQuotient {
    let b = f.target();
    let z = preimage(g.matrix(), g.target().relations());
    let bd = Lattice::column_span(f.matrix()).sum(b.relations());
    SubQuotient::new(b.ring().clone(), &z, &bd)
}

/// Map induced on subquotients by an ambient matrix carrying `L` into `L'`
/// and `N` into `N'`.
pub fn induced_map(from: &SubQuotient, to: &SubQuotient, ambient: &Matrix) -> Result<ModuleMap> {
    let k = from.module.gens();
    let mut cols = Vec::with_capacity(k);
    for j in 0..k {
        let x = ambient.mul_vec(&from.inc.column(j));
        let c = to.coords(&x).ok_or_else(|| {
            Error::IllDefinedMap(alloc::format!("generator {} leaves the target subquotient", j))
        })?;
        cols.push(c);
    }
    ModuleMap::new(
        from.module.clone(),
        to.module.clone(),
        Matrix::from_columns(to.module.gens(), &cols),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(m: FgModule) -> Module {
        Arc::new(m)
    }

    #[test]
    fn single_relator_gives_cyclic() {
        let m = FgModule::cyclic(RingSpec::Integers, 2);
        assert_eq!(m.canonical_form().factors, vec![Int::from(2)]);
        assert_eq!(m.canonical_form().free_rank, 0);
    }

    #[test]
    fn diag_two_three_is_z6() {
        let m = FgModule::from_presentation(RingSpec::Integers, &Matrix::from_i64(2, 2, &[2, 0, 0, 3]));
        assert_eq!(m.canonical_form().factors, vec![Int::from(6)]);
        assert_eq!(m.order(), Some(Int::from(6)));
    }

    #[test]
    fn free_rank_two() {
        let m = FgModule::free(RingSpec::Integers, 2);
        assert_eq!(m.canonical_form().free_rank, 2);
    }

    #[test]
    fn doubling_on_z4() {
        let ring = RingSpec::modulo(4);
        let a = arc(FgModule::free(ring, 1));
        let f = ModuleMap::new(a.clone(), a.clone(), Matrix::from_i64(1, 1, &[2])).unwrap();
        assert_eq!(f.kernel().module.canonical_form().factors, vec![Int::from(2)]);
        assert_eq!(f.image().module.canonical_form().factors, vec![Int::from(2)]);
        assert_eq!(f.cokernel().0.canonical_form().factors, vec![Int::from(2)]);
    }

    #[test]
    fn ill_defined_map_rejected() {
        let z2 = arc(FgModule::cyclic(RingSpec::Integers, 2));
        let z = arc(FgModule::free(RingSpec::Integers, 1));
        assert!(ModuleMap::new(z2, z, Matrix::from_i64(1, 1, &[1])).is_err());
    }

    #[test]
    fn coords_roundtrip_on_elements() {
        let m = FgModule::from_presentation(
            RingSpec::Integers,
            &Matrix::from_i64(2, 2, &[2, 4, 6, 8]),
        );
        let els = m.elements().unwrap();
        assert_eq!(els.len(), 8);
        for (t, e) in m.coordinate_tuples().unwrap().iter().zip(&els) {
            assert_eq!(&m.coords(e), t);
        }
    }
}
