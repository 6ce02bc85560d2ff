//! Internal Hom complexes, homotopy classes of chain maps and cofibrant
//! (degreewise free) replacement.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::{ChainComplex, ChainHomotopy, ChainMap, Complex};
use crate::error::Result;
use crate::homalg::HomSpace;
use crate::int::Int;
use crate::lattice::{Lattice, Solver};
use crate::matrix::Matrix;
use crate::module::{direct_sum, homology_at, FgModule, Module, ModuleMap, SubQuotient};

/// `Hom(C, D)_k = ∏_i Hom(C_i, D_{i+k})`.
#[derive(Clone, Debug)]
pub struct HomDegree {
    pub k: isize,
    /// `(i, Hom(C_i, D_{i+k}), offset)`.
    pub parts: Vec<(usize, HomSpace, usize)>,
    pub module: Module,
}

impl HomDegree {
    fn new(c: &ChainComplex, d: &ChainComplex, k: isize) -> Result<HomDegree> {
        let mut parts = Vec::new();
        let mut off = 0;
        for i in 0..=c.top() {
            let j = i as isize + k;
            if j < 0 || j as usize > d.top() {
                continue;
            }
            let hs = HomSpace::new(&c.term(i), &d.term(j as usize))?;
            let g = hs.module().gens();
            if g == 0 {
                continue;
            }
            parts.push((i, hs, off));
            off += g;
        }
        let mods: Vec<&FgModule> = parts.iter().map(|(_, h, _)| h.module().as_ref()).collect();
        let module = Arc::new(direct_sum(c.ring(), &mods));
        Ok(HomDegree { k, parts, module })
    }

    fn part(&self, i: usize) -> Option<&(usize, HomSpace, usize)> {
        self.parts.iter().find(|p| p.0 == i)
    }

    /// Component maps `C_i → D_{i+k}` of an element.
    pub fn components(&self, x: &[Int]) -> Vec<(usize, ModuleMap)> {
        self.parts
            .iter()
            .map(|(i, hs, off)| (*i, hs.map_of(&x[*off..*off + hs.module().gens()])))
            .collect()
    }

    /// Element from component maps (missing components are zero).
    pub fn element(&self, comps: &[(usize, ModuleMap)]) -> Vec<Int> {
        let mut x = vec![Int::ZERO; self.module.gens()];
        for (i, f) in comps {
            if let Some((_, hs, off)) = self.part(*i) {
                let c = hs.coords_of(f);
                x[*off..*off + c.len()].clone_from_slice(&c);
            } else {
                debug_assert!(f.is_zero(), "nonzero component outside the Hom degree");
            }
        }
        x
    }
}

/// Degrees −1, 0, 1 of the Hom complex and the two differentials between them.
#[derive(Clone, Debug)]
pub struct HomComplex {
    pub src: Complex,
    pub tgt: Complex,
    pub deg: [HomDegree; 3],
    /// `D_1: Hom_1 → Hom_0`.
    pub d1: ModuleMap,
    /// `D_0: Hom_0 → Hom_{−1}`.
    pub d0: ModuleMap,
}

/// `(D f)_i = d f_i − (−1)^k f_{i−1} d`.
fn hom_differential(c: &ChainComplex, d: &ChainComplex, from: &HomDegree, to: &HomDegree) -> ModuleMap {
    let k = from.k;
    let sign = if k % 2 == 0 { Int::from(-1) } else { Int::ONE };
    let mut mat = Matrix::zeros(to.module.gens(), from.module.gens());
    for (i, hs, off) in &from.parts {
        let i = *i;
        let j = (i as isize + k) as usize;
        for g in 0..hs.module().gens() {
            let mut e = vec![Int::ZERO; hs.module().gens()];
            e[g] = Int::ONE;
            let f = hs.map_of(&e);
            let mut col = vec![Int::ZERO; to.module.gens()];
            if j >= 1 {
                if let Some((_, hs2, off2)) = to.part(i) {
                    let df = f.then(&d.diff(j));
                    let v = hs2.coords_of(&df);
                    for (t, x) in v.into_iter().enumerate() {
                        col[off2 + t] += &x;
                    }
                }
            }
            if i < c.top() {
                if let Some((_, hs2, off2)) = to.part(i + 1) {
                    let fd = c.diff(i + 1).then(&f).scale(&sign);
                    let v = hs2.coords_of(&fd);
                    for (t, x) in v.into_iter().enumerate() {
                        col[off2 + t] += &x;
                    }
                }
            }
            for (r, x) in col.into_iter().enumerate() {
                mat.set(r, off + g, x);
            }
        }
    }
    ModuleMap::from_parts(from.module.clone(), to.module.clone(), mat)
}

impl HomComplex {
    pub fn new(c: &Complex, d: &Complex) -> Result<HomComplex> {
        let m1 = HomDegree::new(c, d, -1)?;
        let h0 = HomDegree::new(c, d, 0)?;
        let h1 = HomDegree::new(c, d, 1)?;
        let d1 = hom_differential(c, d, &h1, &h0);
        let d0 = hom_differential(c, d, &h0, &m1);
        Ok(HomComplex {
            src: c.clone(),
            tgt: d.clone(),
            deg: [m1, h0, h1],
            d1,
            d0,
        })
    }

    pub fn hom0(&self) -> &HomDegree {
        &self.deg[1]
    }

    pub fn hom1(&self) -> &HomDegree {
        &self.deg[2]
    }
}

/// A degreewise free complex `Q` with a map `q: Q → C` that is a
/// quasi-isomorphism through degree `truncation − 1` and surjective on
/// homology in degree `truncation`.
#[derive(Clone, Debug)]
pub struct CofibrantReplacement {
    pub q: ChainMap,
    pub truncation: usize,
    /// True when `C` was already degreewise free and `q` is the identity.
    pub identity: bool,
}

/// Builds `Q` degree by degree. In degree `i` the generators are (a) one per
/// element of `K_{i−1} = {x ∈ Z_{i−1}Q : q x ∈ B_{i−1}C}` modulo existing
/// relations, with `d = x` and `q` a solved preimage, then (b) one cycle per
/// minimal generator of `H_i C`.
pub fn cofibrant_replacement(c: &Complex, truncation: usize) -> CofibrantReplacement {
    if c.is_free() {
        return CofibrantReplacement {
            q: ChainMap::identity(c.clone()),
            truncation,
            identity: true,
        };
    }
    let ring = c.ring().clone();
    let char = ring.characteristic();
    let mut ranks: Vec<usize> = Vec::new();
    let mut dmats: Vec<Matrix> = Vec::new();
    let mut qmats: Vec<Matrix> = Vec::new();
    for i in 0..=truncation {
        let ci = c.term(i);
        let mut dcols: Vec<Vec<Int>> = Vec::new();
        let mut qcols: Vec<Vec<Int>> = Vec::new();
        let prev = if i >= 1 { ranks[i - 1] } else { 0 };
        if i >= 1 && prev > 0 {
            let rel_prev = Lattice::scaled_full(prev, &char);
            let z_prev = if i >= 2 {
                let rel_pp = Lattice::scaled_full(ranks[i - 2], &char);
                crate::lattice::preimage(&dmats[i - 2], &rel_pp)
            } else {
                Lattice::full(prev)
            };
            let bc = c.boundaries(i - 1).lattice().clone();
            let k = z_prev.intersect(&crate::lattice::preimage(&qmats[i - 1], &bc));
            let sq = SubQuotient::new(ring.clone(), &k, &rel_prev);
            let dci = c.diff(i);
            let aug = dci.matrix().hstack(&c.term(i - 1).relation_matrix());
            let solver = Solver::new(&aug);
            for j in 0..sq.module.gens() {
                let x = sq.inc.column(j);
                let target = qmats[i - 1].mul_vec(&x);
                let y = solver.solve(&target).expect("q(K) lies in the boundaries");
                dcols.push(x);
                qcols.push(ci.reduce(&y[..ci.gens()]));
            }
        }
        let h = c.homology(i);
        for j in 0..h.module.gens() {
            dcols.push(vec![Int::ZERO; prev]);
            qcols.push(ci.reduce(&h.inc.column(j)));
        }
        ranks.push(dcols.len());
        if i >= 1 {
            dmats.push(Matrix::from_columns(prev, &dcols));
        }
        qmats.push(Matrix::from_columns(ci.gens(), &qcols));
    }
    let qc = ChainComplex::free(ring, &ranks, dmats).expect("replacement is a complex");
    let qc = Arc::new(qc);
    let comps = (0..=truncation)
        .map(|i| ModuleMap::from_parts(qc.term(i), c.term(i), qmats[i].clone()))
        .collect();
    CofibrantReplacement {
        q: ChainMap::from_parts(qc, c.clone(), comps),
        truncation,
        identity: false,
    }
}

/// `[C, D]` as `H_0 Hom(Q, D)` with `Q` a cofibrant replacement of `C`.
#[derive(Clone, Debug)]
pub struct HomotopyClasses {
    pub replacement: CofibrantReplacement,
    pub hom: HomComplex,
    pub h0: SubQuotient,
    solver: Solver,
}

pub fn homotopy_classes(c: &Complex, d: &Complex) -> Result<HomotopyClasses> {
    let trunc = c.top().max(d.top()) + 1;
    let rep = cofibrant_replacement(c, trunc);
    HomotopyClasses::with_replacement(rep, d)
}

impl HomotopyClasses {
    pub fn with_replacement(rep: CofibrantReplacement, d: &Complex) -> Result<HomotopyClasses> {
        let q = rep.q.source().clone();
        let hom = HomComplex::new(&q, d)?;
        let h0 = homology_at(&hom.d1, &hom.d0);
        let aug = hom.d1.matrix().hstack(&hom.hom0().module.relation_matrix());
        let solver = Solver::new(&aug);
        Ok(HomotopyClasses {
            replacement: rep,
            hom,
            h0,
            solver,
        })
    }

    /// Classes computed directly on `C` (no replacement): strict homotopy
    /// classes of chain maps `C → D`.
    pub fn strict(c: &Complex, d: &Complex) -> Result<HomotopyClasses> {
        let rep = CofibrantReplacement {
            q: ChainMap::identity(c.clone()),
            truncation: c.top(),
            identity: true,
        };
        HomotopyClasses::with_replacement(rep, d)
    }

    pub fn group(&self) -> &Module {
        &self.h0.module
    }

    pub fn source(&self) -> &Complex {
        self.replacement.q.source()
    }

    pub fn target(&self) -> &Complex {
        &self.hom.tgt
    }

    /// A representative chain map `Q → D` of the class with these coordinates.
    pub fn class_to_map(&self, coords: &[Int]) -> ChainMap {
        let x = self.h0.inc.mul_vec(coords);
        self.element_to_map(&x)
    }

    fn element_to_map(&self, x: &[Int]) -> ChainMap {
        let q = self.source();
        let d = self.target();
        let comps_sparse = self.hom.hom0().components(x);
        let comps = (0..=q.top())
            .map(|i| {
                comps_sparse
                    .iter()
                    .find(|(j, _)| *j == i)
                    .map(|(_, f)| f.clone())
                    .unwrap_or_else(|| ModuleMap::zero(q.term(i), d.term(i)))
            })
            .collect();
        ChainMap::from_parts(q.clone(), d.clone(), comps)
    }

    /// Class of a chain map out of `Q`.
    pub fn map_to_class(&self, f: &ChainMap) -> Option<Vec<Int>> {
        let comps: Vec<(usize, ModuleMap)> = f.components().iter().cloned().enumerate().collect();
        let x = self.hom.hom0().element(&comps);
        self.h0.coords(&x)
    }

    pub fn is_nullhomotopic(&self, f: &ChainMap) -> bool {
        match self.map_to_class(f) {
            Some(c) => c.iter().all(|v| v.is_zero()),
            None => false,
        }
    }

    /// Explicit `H` with `f = d H + H d`, if one exists.
    pub fn nullhomotopy(&self, f: &ChainMap) -> Option<ChainHomotopy> {
        let comps: Vec<(usize, ModuleMap)> = f.components().iter().cloned().enumerate().collect();
        let x = self.hom.hom0().element(&comps);
        let y = self.solver.solve(&x)?;
        let n1 = self.hom.hom1().module.gens();
        let hs = self.hom.hom1().components(&y[..n1]);
        let q = self.source();
        let d = self.target();
        let comps = (0..=q.top())
            .map(|i| {
                hs.iter()
                    .find(|(j, _)| *j == i)
                    .map(|(_, h)| h.clone())
                    .unwrap_or_else(|| ModuleMap::zero(q.term(i), d.term(i + 1)))
            })
            .collect();
        Some(ChainHomotopy { comps })
    }

    /// All classes of a finite group, in canonical coordinate order.
    pub fn all_classes(&self) -> Result<Vec<Vec<Int>>> {
        self.group().coordinate_tuples()
    }
}
