//! Bounded, non-negatively graded chain complexes of presented modules.

mod equiv;
mod hom;

pub use equiv::{find_homotopy_equivalence, find_quasi_iso, minimal_model, HomotopyEquivalence};
pub use hom::{cofibrant_replacement, homotopy_classes, CofibrantReplacement, HomComplex, HomotopyClasses};

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::int::Int;
use crate::lattice::{preimage, Lattice, Solver};
use crate::matrix::Matrix;
use crate::module::{direct_sum, homology_at, induced_map, FgModule, Module, ModuleMap, SubQuotient};
use crate::ring::RingSpec;

pub type Complex = Arc<ChainComplex>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainComplex {
    ring: RingSpec,
    terms: Vec<Module>,
    /// `d[i]` is `d_{i+1}: terms[i+1] → terms[i]`.
    d: Vec<ModuleMap>,
}

impl ChainComplex {
    /// Validates ring agreement, shapes and `d ∘ d = 0`.
    pub fn new(ring: RingSpec, terms: Vec<Module>, d: Vec<ModuleMap>) -> Result<ChainComplex> {
        let terms = if terms.is_empty() {
            vec![Arc::new(FgModule::zero(ring.clone()))]
        } else {
            terms
        };
        if d.len() + 1 != terms.len() {
            return Err(Error::Shape(alloc::format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len() - 1,
                d.len()
            )));
        }
        for t in &terms {
            if t.ring() != &ring {
                return Err(Error::RingMismatch);
            }
        }
        for (i, di) in d.iter().enumerate() {
            if di.source().as_ref() != terms[i + 1].as_ref() || di.target().as_ref() != terms[i].as_ref() {
                return Err(Error::Shape(alloc::format!("d_{} has the wrong endpoints", i + 1)));
            }
        }
        for i in 1..d.len() {
            if !d[i].then(&d[i - 1]).is_zero() {
                return Err(Error::NotAChainComplex { degree: i });
            }
        }
        Ok(ChainComplex { ring, terms, d })
    }

    /// From raw relation presentations and differential matrices.
    pub fn from_matrices(ring: RingSpec, terms: Vec<FgModule>, d: Vec<Matrix>) -> Result<ChainComplex> {
        let terms: Vec<Module> = terms.into_iter().map(Arc::new).collect();
        if d.len() + 1 != terms.len().max(1) {
            return Err(Error::Shape("differential count must be one less than term count".into()));
        }
        let mut maps = Vec::with_capacity(d.len());
        for (i, m) in d.into_iter().enumerate() {
            maps.push(ModuleMap::new(terms[i + 1].clone(), terms[i].clone(), m)?);
        }
        ChainComplex::new(ring, terms, maps)
    }

    /// Free complex `R^{r_0} ← R^{r_1} ← …` with the given matrices.
    pub fn free(ring: RingSpec, ranks: &[usize], d: Vec<Matrix>) -> Result<ChainComplex> {
        let terms = ranks.iter().map(|&r| FgModule::free(ring.clone(), r)).collect();
        ChainComplex::from_matrices(ring, terms, d)
    }

    pub fn zero(ring: RingSpec) -> ChainComplex {
        ChainComplex::new(ring, Vec::new(), Vec::new()).unwrap()
    }

    /// The module `m` concentrated in degree `k`.
    pub fn concentrated(m: Module, k: usize) -> ChainComplex {
        let ring = m.ring().clone();
        let z = Arc::new(FgModule::zero(ring.clone()));
        let mut terms = vec![z.clone(); k];
        terms.push(m);
        let d = (0..k)
            .map(|i| ModuleMap::zero(terms[i + 1].clone(), terms[i].clone()))
            .collect();
        ChainComplex::new(ring, terms, d).unwrap()
    }

    /// `R[k]`.
    pub fn sphere(ring: RingSpec, k: usize) -> ChainComplex {
        ChainComplex::concentrated(Arc::new(FgModule::free(ring, 1)), k)
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn top(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn terms(&self) -> &[Module] {
        &self.terms
    }

    pub fn term(&self, n: usize) -> Module {
        self.terms
            .get(n)
            .cloned()
            .unwrap_or_else(|| Arc::new(FgModule::zero(self.ring.clone())))
    }

    pub fn differentials(&self) -> &[ModuleMap] {
        &self.d
    }

    /// `d_n: C_n → C_{n−1}`; zero outside `1..=top`.
    pub fn diff(&self, n: usize) -> ModuleMap {
        if n >= 1 && n <= self.top() {
            self.d[n - 1].clone()
        } else {
            let tgt = if n == 0 {
                Arc::new(FgModule::zero(self.ring.clone()))
            } else {
                self.term(n - 1)
            };
            ModuleMap::zero(self.term(n), tgt)
        }
    }

    pub fn homology(&self, n: usize) -> SubQuotient {
        homology_at(&self.diff(n + 1), &self.diff(n))
    }

    pub fn homology_module(&self, n: usize) -> Module {
        self.homology(n).module
    }

    /// `Z_n = ker d_n` as a subquotient of `C_n`.
    pub fn cycles(&self, n: usize) -> SubQuotient {
        self.diff(n).kernel()
    }

    /// `B_n = im d_{n+1}` as a subquotient of `C_n`.
    pub fn boundaries(&self, n: usize) -> SubQuotient {
        self.diff(n + 1).image()
    }

    pub fn is_free(&self) -> bool {
        self.terms.iter().all(|t| t.is_free_on_generators())
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| t.is_finite())
    }

    /// Highest degree with nonzero homology, if any.
    pub fn homology_top(&self) -> Option<usize> {
        (0..=self.top()).rev().find(|&n| !self.homology_module(n).is_zero())
    }

    pub fn is_acyclic(&self) -> bool {
        self.homology_top().is_none()
    }

    /// Copy padded with zero terms up to degree `n`.
    pub fn extended_to(&self, n: usize) -> ChainComplex {
        if n <= self.top() {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        let mut d = self.d.clone();
        while terms.len() <= n {
            let z = Arc::new(FgModule::zero(self.ring.clone()));
            d.push(ModuleMap::zero(z.clone(), terms.last().unwrap().clone()));
            terms.push(z);
        }
        ChainComplex {
            ring: self.ring.clone(),
            terms,
            d,
        }
    }

    /// Drops zero terms above the highest nonzero one.
    pub fn trimmed(&self) -> ChainComplex {
        let mut top = self.top();
        while top > 0 && self.terms[top].gens() == 0 {
            top -= 1;
        }
        ChainComplex {
            ring: self.ring.clone(),
            terms: self.terms[..=top].to_vec(),
            d: self.d[..top].to_vec(),
        }
    }

    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        let top = self.top().max(other.top());
        let a = self.extended_to(top);
        let b = other.extended_to(top);
        let terms: Vec<Module> = (0..=top)
            .map(|n| Arc::new(direct_sum(&self.ring, &[&a.terms[n], &b.terms[n]])))
            .collect();
        let d = (1..=top)
            .map(|n| {
                let m = a.d[n - 1].matrix().block_diag(b.d[n - 1].matrix());
                ModuleMap::from_parts(terms[n].clone(), terms[n - 1].clone(), m)
            })
            .collect();
        ChainComplex {
            ring: self.ring.clone(),
            terms,
            d,
        }
    }

    /// `(ΣC)_n = C_{n−1}` with differential `−d`.
    pub fn suspension(&self) -> ChainComplex {
        let z = Arc::new(FgModule::zero(self.ring.clone()));
        let mut terms = vec![z];
        terms.extend(self.terms.iter().cloned());
        let mut d = vec![ModuleMap::zero(terms[1].clone(), terms[0].clone())];
        d.extend(self.d.iter().map(|m| m.neg()));
        ChainComplex {
            ring: self.ring.clone(),
            terms,
            d,
        }
    }

    /// Change of presentation in every degree by minimal modules; returns the
    /// minimized complex and the isomorphism `self → minimized`.
    pub fn minimized(&self) -> (ChainComplex, ChainMap) {
        let mut to = Vec::new();
        let mut from = Vec::new();
        let mut terms = Vec::new();
        for t in &self.terms {
            let (m, f, tm) = t.minimal();
            terms.push(Arc::new(m));
            from.push(f);
            to.push(tm);
        }
        let d = (1..=self.top())
            .map(|n| {
                let m = to[n - 1].mul(self.d[n - 1].matrix()).mul(&from[n]);
                ModuleMap::from_parts(terms[n].clone(), terms[n - 1].clone(), m)
            })
            .collect();
        let min = ChainComplex {
            ring: self.ring.clone(),
            terms,
            d,
        };
        let src = Arc::new(self.clone());
        let tgt = Arc::new(min.clone());
        let comps = (0..=self.top())
            .map(|n| ModuleMap::from_parts(self.terms[n].clone(), tgt.terms[n].clone(), to[n].clone()))
            .collect();
        (min, ChainMap::from_parts(src, tgt, comps))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    src: Complex,
    tgt: Complex,
    /// One component per degree `0..=src.top()`.
    comps: Vec<ModuleMap>,
}

impl ChainMap {
    pub fn new(src: Complex, tgt: Complex, comps: Vec<ModuleMap>) -> Result<ChainMap> {
        if comps.len() != src.top() + 1 {
            return Err(Error::Shape("one component per source degree".into()));
        }
        for (n, f) in comps.iter().enumerate() {
            if f.source().as_ref() != src.term(n).as_ref() || f.target().as_ref() != tgt.term(n).as_ref() {
                return Err(Error::Shape(alloc::format!("component {} has the wrong endpoints", n)));
            }
        }
        let m = ChainMap { src, tgt, comps };
        m.check()?;
        Ok(m)
    }

    /// Builds from component matrices, validating well-definedness.
    pub fn from_matrices(src: Complex, tgt: Complex, mats: Vec<Matrix>) -> Result<ChainMap> {
        let mut comps = Vec::new();
        for (n, m) in mats.into_iter().enumerate() {
            comps.push(ModuleMap::new(src.term(n), tgt.term(n), m)?);
        }
        ChainMap::new(src, tgt, comps)
    }

    pub fn from_parts(src: Complex, tgt: Complex, comps: Vec<ModuleMap>) -> ChainMap {
        ChainMap { src, tgt, comps }
    }

    fn check(&self) -> Result<()> {
        for n in 1..=self.src.top() + 1 {
            let left = self.comp(n).then(&self.tgt.diff(n));
            let right = self.src.diff(n).then(&self.comp(n - 1));
            if left.matrix() != right.matrix() {
                return Err(Error::NotAChainMap { degree: n });
            }
        }
        Ok(())
    }

    pub fn identity(c: Complex) -> ChainMap {
        let comps = c.terms.iter().map(|t| ModuleMap::identity(t.clone())).collect();
        ChainMap {
            src: c.clone(),
            tgt: c,
            comps,
        }
    }

    pub fn zero(src: Complex, tgt: Complex) -> ChainMap {
        let comps = (0..=src.top())
            .map(|n| ModuleMap::zero(src.term(n), tgt.term(n)))
            .collect();
        ChainMap { src, tgt, comps }
    }

    pub fn source(&self) -> &Complex {
        &self.src
    }

    pub fn target(&self) -> &Complex {
        &self.tgt
    }

    pub fn components(&self) -> &[ModuleMap] {
        &self.comps
    }

    pub fn comp(&self, n: usize) -> ModuleMap {
        self.comps
            .get(n)
            .cloned()
            .unwrap_or_else(|| ModuleMap::zero(self.src.term(n), self.tgt.term(n)))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ChainMap) -> ChainMap {
        let comps = (0..=self.src.top())
            .map(|n| self.comp(n).then(&other.comp(n)))
            .collect();
        ChainMap {
            src: self.src.clone(),
            tgt: other.tgt.clone(),
            comps,
        }
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect();
        ChainMap {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            comps,
        }
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.sub(b)).collect();
        ChainMap {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            comps,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// `H_n(f)` on minimal homology modules.
    pub fn on_homology(&self, n: usize) -> ModuleMap {
        let hs = self.src.homology(n);
        let ht = self.tgt.homology(n);
        induced_map(&hs, &ht, self.comp(n).matrix()).expect("chain maps preserve cycles and boundaries")
    }

    pub fn is_quasi_iso(&self) -> bool {
        let top = self.src.top().max(self.tgt.top());
        (0..=top).all(|n| self.on_homology(n).is_iso())
    }
}

/// `f − g = d H + H d`, with `H_n: C_n → D_{n+1}`.
#[derive(Clone, Debug)]
pub struct ChainHomotopy {
    pub comps: Vec<ModuleMap>,
}

impl ChainHomotopy {
    pub fn verify(&self, f: &ChainMap, g: &ChainMap) -> bool {
        let src = f.source();
        let tgt = f.target();
        let h = |n: usize| -> ModuleMap {
            self.comps
                .get(n)
                .cloned()
                .unwrap_or_else(|| ModuleMap::zero(src.term(n), tgt.term(n + 1)))
        };
        for n in 0..=src.top() {
            let diff = f.comp(n).sub(&g.comp(n));
            let mut rhs = h(n).then(&tgt.diff(n + 1));
            if n >= 1 {
                rhs = rhs.add(&src.diff(n).then(&h(n - 1)));
            }
            if diff.matrix() != rhs.matrix() {
                return false;
            }
        }
        true
    }
}

/// `cone_n = B_n ⊕ A_{n−1}`, `d(b, a) = (db + f a, −da)`; returns the cone,
/// the inclusion of `B` and the projection onto `ΣA`.
pub fn mapping_cone(f: &ChainMap) -> (ChainComplex, ChainMap, ChainMap) {
    let a = f.source();
    let b = f.target();
    let ring = a.ring().clone();
    let top = b.top().max(a.top() + 1);
    let terms: Vec<Module> = (0..=top)
        .map(|n| {
            let an = if n == 0 {
                Arc::new(FgModule::zero(ring.clone()))
            } else {
                a.term(n - 1)
            };
            Arc::new(direct_sum(&ring, &[&b.term(n), &an]))
        })
        .collect();
    let d = (1..=top)
        .map(|n| {
            let (bn, bm) = (b.term(n).gens(), b.term(n - 1).gens());
            let an1 = a.term(n - 1).gens();
            let an2 = if n >= 2 { a.term(n - 2).gens() } else { 0 };
            let mut m = Matrix::zeros(bm + an2, bn + an1);
            m.set_block(0, 0, b.diff(n).matrix());
            m.set_block(0, bn, f.comp(n - 1).matrix());
            if n >= 2 {
                m.set_block(bm, bn, &a.diff(n - 1).matrix().neg());
            }
            ModuleMap::from_parts(terms[n].clone(), terms[n - 1].clone(), m)
        })
        .collect();
    let cone = Arc::new(ChainComplex {
        ring: ring.clone(),
        terms,
        d,
    });
    let inc = (0..=b.top())
        .map(|n| {
            let bn = b.term(n).gens();
            let rows = cone.term(n).gens();
            let m = Matrix::identity(bn).vstack(&Matrix::zeros(rows - bn, bn));
            ModuleMap::from_parts(b.term(n), cone.term(n), m)
        })
        .collect();
    let sa = Arc::new(a.suspension());
    let proj = (0..=top)
        .map(|n| {
            let bn = b.term(n).gens();
            let an = sa.term(n).gens();
            let m = Matrix::zeros(an, bn).hstack(&Matrix::identity(an));
            ModuleMap::from_parts(cone.term(n), sa.term(n), m)
        })
        .collect();
    let inclusion = ChainMap::from_parts(b.clone(), cone.clone(), inc);
    let projection = ChainMap::from_parts(cone.clone(), sa, proj);
    ((*cone).clone(), inclusion, projection)
}

/// `P_n C`: equal to `C` through degree `n+1`, `Z_{n+1}` in degree `n+2`
/// mapping in by inclusion, zero above. `r` is the identity through `n+1`
/// and `∂_{n+2}` corestricted to the cycles in degree `n+2`.
pub fn postnikov_section(c: &Complex, n: usize) -> (Complex, ChainMap) {
    let ring = c.ring().clone();
    let z = c.cycles(n + 1);
    let mut terms: Vec<Module> = (0..=n + 1).map(|i| c.term(i)).collect();
    terms.push(z.module.clone());
    let mut d: Vec<ModuleMap> = (1..=n + 1).map(|i| c.diff(i)).collect();
    d.push(z.inclusion_into(&c.term(n + 1)));
    let p = Arc::new(ChainComplex { ring, terms, d });
    let comps = (0..=c.top())
        .map(|i| {
            if i <= n + 1 {
                ModuleMap::identity(c.term(i))
            } else if i == n + 2 {
                let dn = c.diff(n + 2);
                let cols: Vec<Vec<Int>> = (0..dn.source().gens())
                    .map(|j| z.coords(&dn.matrix().column(j)).expect("boundaries are cycles"))
                    .collect();
                let m = Matrix::from_columns(z.module.gens(), &cols);
                ModuleMap::from_parts(c.term(n + 2), z.module.clone(), m)
            } else {
                ModuleMap::zero(c.term(i), p.term(i))
            }
        })
        .collect();
    (p.clone(), ChainMap::from_parts(c.clone(), p, comps))
}

/// `e`: `Z_{n+1}` in degree `n+2` and `B_{n+1}` in degree `n+3` (inclusion),
/// with `k = id` from the degree-`(n+2)` term of `P_n C`.
pub fn k_invariant(c: &Complex, n: usize) -> (Complex, ChainMap, Complex) {
    let ring = c.ring().clone();
    let (p, _) = postnikov_section(c, n);
    let z = c.cycles(n + 1);
    let b = c.boundaries(n + 1);
    let incl_cols: Vec<Vec<Int>> = (0..b.module.gens())
        .map(|j| z.coords(&b.inc.column(j)).expect("boundaries are cycles"))
        .collect();
    let zero = Arc::new(FgModule::zero(ring.clone()));
    let mut terms = vec![zero.clone(); n + 2];
    terms.push(z.module.clone());
    terms.push(b.module.clone());
    let mut d: Vec<ModuleMap> = (1..n + 2).map(|i| ModuleMap::zero(terms[i].clone(), terms[i - 1].clone())).collect();
    d.push(ModuleMap::zero(terms[n + 2].clone(), terms[n + 1].clone()));
    d.push(ModuleMap::from_parts(
        b.module.clone(),
        z.module.clone(),
        Matrix::from_columns(z.module.gens(), &incl_cols),
    ));
    let e = Arc::new(ChainComplex { ring, terms, d });
    let comps = (0..=p.top())
        .map(|i| {
            if i == n + 2 {
                ModuleMap::identity(p.term(i))
            } else {
                ModuleMap::zero(p.term(i), e.term(i))
            }
        })
        .collect();
    let k = ChainMap::from_parts(p.clone(), e.clone(), comps);
    (e, k, p)
}

/// Degreewise `⊗ R/m` of a complex over `Z`; also applies to maps.
pub fn base_change(c: &ChainComplex, target: &RingSpec) -> Result<ChainComplex> {
    if !c.ring().is_integers() {
        if c.ring() == target {
            return Ok(c.clone());
        }
        return Err(Error::Precondition("base change starts from a complex over Z".into()));
    }
    if target.is_integers() {
        return Ok(c.clone());
    }
    let terms: Vec<Module> = c
        .terms
        .iter()
        .map(|t| Arc::new(FgModule::new(target.clone(), t.gens(), t.relations().basis().to_vec())))
        .collect();
    let d = c
        .d
        .iter()
        .enumerate()
        .map(|(i, m)| ModuleMap::from_parts(terms[i + 1].clone(), terms[i].clone(), m.matrix().clone()))
        .collect();
    Ok(ChainComplex {
        ring: target.clone(),
        terms,
        d,
    })
}

pub fn base_change_map(f: &ChainMap, target: &RingSpec) -> Result<ChainMap> {
    let src = Arc::new(base_change(f.source(), target)?);
    let tgt = Arc::new(base_change(f.target(), target)?);
    let comps = f
        .comps
        .iter()
        .enumerate()
        .map(|(n, m)| ModuleMap::from_parts(src.term(n), tgt.term(n), m.matrix().clone()))
        .collect();
    Ok(ChainMap::from_parts(src, tgt, comps))
}

/// Solve `d x ≡ b` in a module map sense: some `x ∈ src` with `f(x) = b`.
pub fn solve_preimage(f: &ModuleMap, b: &[Int]) -> Option<Vec<Int>> {
    let aug = f.matrix().hstack(&f.target().relation_matrix());
    let s = Solver::new(&aug);
    let n = f.source().gens();
    s.solve(b).map(|x| f.source().reduce(&x[..n]))
}

/// `{x ∈ C_n : d x ∈ L}` for a lattice `L` in `C_{n−1}` containing its relations.
pub fn preimage_lattice(f: &ModuleMap, l: &Lattice) -> Lattice {
    preimage(f.matrix(), l)
}

#[cfg(test)]
mod tests;
