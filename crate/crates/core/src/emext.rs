//! Eilenberg–Mac Lane complexes, cohomology as homotopy classes into them,
//! and the correspondence between extensions `0 → J′ → J → J″ → 0` and
//! classes in `[E(J″, n), E(J′, n+1)]`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::chain::{homotopy_classes, mapping_cone, ChainComplex, ChainMap, Complex, HomotopyClasses};
use crate::error::{Error, Result};
use crate::homalg::{lift_generators, ExtensionClass, SubQuotientSolver};
use crate::int::Int;
use crate::lattice::Solver;
use crate::matrix::Matrix;
use crate::module::{FgModule, Module, ModuleMap};
use crate::ring::RingSpec;

/// `E(M, n)`: homology `M` in degree `n` and nothing else.
#[derive(Clone, Debug)]
pub struct EMObject {
    pub module: Module,
    pub dimension: usize,
    /// Over `Z`: the relation basis `Z^r → Z^g` in degrees `n+1, n`, which is
    /// injective. Over `Z/m`: `M` itself in degree `n`.
    pub realization: Complex,
}

pub fn em_object(m: &Module, n: usize) -> EMObject {
    let ring = m.ring().clone();
    let realization = match ring {
        RingSpec::Integers => {
            let r = m.relations().basis_matrix();
            // A free module has no relation term.
            let top = if r.cols() == 0 { n } else { n + 1 };
            let mut ranks = vec![0; top + 1];
            ranks[n] = m.gens();
            if top > n {
                ranks[n + 1] = r.cols();
            }
            let d = (1..=top)
                .map(|k| if k == n + 1 { r.clone() } else { Matrix::zeros(ranks[k - 1], ranks[k]) })
                .collect();
            ChainComplex::free(ring, &ranks, d).expect("a single differential is a complex")
        }
        RingSpec::Mod(_) => ChainComplex::concentrated(m.clone(), n),
    };
    EMObject {
        module: m.clone(),
        dimension: n,
        realization: Arc::new(realization),
    }
}

/// `E(Λ, 0)`, the classifying object.
pub fn classifying_object(lambda: &Module) -> EMObject {
    em_object(lambda, 0)
}

/// Extended EM object `E_Λ(M, n) = E(M, n) ⊕ BΛ`; the module action is the
/// ring action, so the twisted product is a direct sum.
pub fn extended_em_object(m: &Module, lambda: &Module, n: usize) -> Complex {
    let e = em_object(m, n);
    Arc::new(e.realization.direct_sum(&classifying_object(lambda).realization))
}

/// `E(f, n): E(M, n) → E(M′, n)` for a module map `f: M → M′`.
pub fn em_map(f: &ModuleMap, n: usize) -> Result<ChainMap> {
    let (a, b) = (em_object(f.source(), n), em_object(f.target(), n));
    let src = a.realization.clone();
    let tgt = b.realization.clone();
    let mut mats: Vec<Matrix> = (0..=src.top())
        .map(|k| Matrix::zeros(tgt.term(k).gens(), src.term(k).gens()))
        .collect();
    mats[n] = f.matrix().clone();
    if f.source().ring().is_integers() && src.top() > n {
        // Relation basis vectors go to relations of the target; record coordinates.
        let rels = f.target().relations();
        let cols: Vec<Vec<Int>> = f
            .source()
            .relations()
            .basis()
            .iter()
            .map(|r| {
                rels.coordinates(&f.matrix().mul_vec(r))
                    .ok_or_else(|| Error::IllDefinedMap("relation leaves the target relations".into()))
            })
            .collect::<Result<_>>()?;
        mats[n + 1] = Matrix::from_columns(rels.rank(), &cols);
    }
    ChainMap::from_matrices(src, tgt, mats)
}

/// An element of `H^n(X; M) = [X, E(M, n)]`.
#[derive(Clone, Debug)]
pub struct CohomologyClass {
    pub source: Complex,
    pub target: EMObject,
    /// Set when the source is itself an EM object, as for classifying classes.
    pub source_em: Option<EMObject>,
    pub classes: Arc<HomotopyClasses>,
    /// Coordinates in `classes.group()`.
    pub coords: Vec<Int>,
}

impl CohomologyClass {
    /// A chain map out of the cofibrant replacement of the source.
    pub fn representative(&self) -> ChainMap {
        self.classes.class_to_map(&self.coords)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// The representative maps back to the same coordinates.
    pub fn round_trips(&self) -> bool {
        self.classes.map_to_class(&self.representative()).as_deref() == Some(&self.coords[..])
    }
}

pub fn cohomology(x: &Complex, m: &Module, n: usize) -> Result<(EMObject, HomotopyClasses)> {
    let e = em_object(m, n);
    let hc = homotopy_classes(x, &e.realization)?;
    Ok((e, hc))
}

pub fn cohomology_group(x: &Complex, m: &Module, n: usize) -> Result<Module> {
    Ok(cohomology(x, m, n)?.1.group().clone())
}

/// Class of a chain map `X → E(M, n)` (out of `X` itself when `X` is free,
/// otherwise out of its cofibrant replacement).
pub fn class_of_map(f: &ChainMap, target: &EMObject, classes: Arc<HomotopyClasses>) -> Result<CohomologyClass> {
    let coords = classes
        .map_to_class(f)
        .ok_or_else(|| Error::Precondition("map is not a cycle of the Hom complex".into()))?;
    Ok(CohomologyClass {
        source: classes.replacement.q.target().clone(),
        target: target.clone(),
        source_em: None,
        classes,
        coords,
    })
}

/// The classes `[E(J″, n), E(J′, n+1)]` receiving extensions of `J″` by `J′`.
pub fn extension_classes(quotient: &Module, sub: &Module, n: usize) -> Result<(EMObject, EMObject, HomotopyClasses)> {
    if quotient.ring() != sub.ring() {
        return Err(Error::RingMismatch);
    }
    let src = em_object(quotient, n);
    let tgt = em_object(sub, n + 1);
    let hc = homotopy_classes(&src.realization, &tgt.realization)?;
    Ok((src, tgt, hc))
}

/// With `W = Q_n` free and `φ: W → J″` its augmentation, lift `φ` to
/// `φ′: W → J`; `φ′` carries `B_n = d(Q_{n+1})` into `J′`, and `ψ = φ′ ∘ d`
/// on `Q_{n+1}` is the classifying map.
pub fn extension_to_class(ext: &ExtensionClass, n: usize) -> Result<CohomologyClass> {
    ext.validate()?;
    let (src, tgt, hc) = extension_classes(&ext.quotient, &ext.sub, n)?;
    let q = hc.source().clone();
    let phi = hc.replacement.q.comp(n);
    let lifts = lift_generators(&ext.projection)?;
    let jg = ext.total.gens();
    let phi_prime: Vec<Vec<Int>> = (0..q.term(n).gens())
        .map(|w| {
            let mut x = vec![Int::ZERO; jg];
            for (c, l) in phi.matrix().column(w).iter().zip(&lifts) {
                if c.is_zero() {
                    continue;
                }
                for (xv, lv) in x.iter_mut().zip(l) {
                    xv.add_mul(c, lv);
                }
            }
            x
        })
        .collect();
    let phi_prime = Matrix::from_columns(jg, &phi_prime);
    let inc = SubQuotientSolver::new(&ext.inclusion);
    let d = q.diff(n + 1);
    let cols: Vec<Vec<Int>> = (0..q.term(n + 1).gens())
        .map(|k| {
            let y = phi_prime.mul_vec(&d.matrix().column(k));
            inc.preimage(&y)
                .ok_or_else(|| Error::Precondition("lifted boundary leaves the sub-module".into()))
        })
        .collect::<Result<_>>()?;
    let psi = Matrix::from_columns(ext.sub.gens(), &cols);
    let t = tgt.realization.clone();
    let mats: Vec<Matrix> = (0..=q.top())
        .map(|k| if k == n + 1 { psi.clone() } else { Matrix::zeros(t.term(k).gens(), q.term(k).gens()) })
        .collect();
    let f = ChainMap::from_matrices(q, t, mats)?;
    let coords = hc
        .map_to_class(&f)
        .ok_or_else(|| Error::Precondition("classifying map is not a chain map".into()))?;
    Ok(CohomologyClass {
        source: src.realization.clone(),
        target: tgt,
        source_em: Some(src),
        classes: Arc::new(hc),
        coords,
    })
}

/// Homotopy fiber of a representative `ψ: Q → E(J′, n+1)`: its `π_n` is
/// `H_{n+1}` of the cone, and the long exact sequence
/// `0 = H_{n+1}Q → J′ → H_{n+1}(cone ψ) → H_n Q = J″ → H_n E(J′, n+1) = 0`
/// is the extension.
pub fn class_to_extension(psi: &CohomologyClass) -> Result<ExtensionClass> {
    let src = psi
        .source_em
        .as_ref()
        .ok_or_else(|| Error::Precondition("class does not start at an EM object".into()))?;
    let n = src.dimension;
    if psi.target.dimension != n + 1 {
        return Err(Error::Precondition("class must raise the EM dimension by one".into()));
    }
    let (quotient, sub) = (src.module.clone(), psi.target.module.clone());
    let f = psi.representative();
    let q = f.source().clone();
    let (cone, _, _) = mapping_cone(&f);
    let h = cone.homology(n + 1);
    let total = h.module.clone();
    let e_gens = psi.target.realization.term(n + 1).gens();
    let width = cone.term(n + 1).gens();
    let inc_cols: Vec<Vec<Int>> = (0..sub.gens())
        .map(|i| {
            let mut v = vec![Int::ZERO; width];
            v[i] = Int::ONE;
            h.coords(&v)
                .ok_or_else(|| Error::Precondition("sub-module generator is not a cone cycle".into()))
        })
        .collect::<Result<_>>()?;
    let qn = psi.classes.replacement.q.comp(n);
    let proj_cols: Vec<Vec<Int>> = (0..total.gens())
        .map(|j| qn.matrix().mul_vec(&h.inc.column(j)[e_gens..]))
        .collect();
    let inclusion = ModuleMap::new(sub.clone(), total.clone(), Matrix::from_columns(total.gens(), &inc_cols))?;
    let projection = ModuleMap::new(total.clone(), quotient.clone(), Matrix::from_columns(quotient.gens(), &proj_cols))?;
    let ext = ExtensionClass {
        sub,
        quotient,
        total,
        inclusion,
        projection,
    };
    ext.validate()?;
    debug_assert_eq!(q.term(n).gens(), width - e_gens);
    Ok(ext)
}

/// `g: P → Q` with `q ∘ g = f`, built degree by degree for a free `P` through
/// degree `top`; needs `q` degreewise onto with exact kernel there.
fn lift_along(q: &ChainMap, f: &ChainMap, top: usize) -> Result<Vec<Matrix>> {
    let p = f.source();
    let qc = q.source();
    let mut out: Vec<Matrix> = Vec::new();
    for k in 0..=top.min(p.top()) {
        let (qk, ck) = (qc.term(k), q.target().term(k));
        let mut sys = q.comp(k).matrix().clone();
        let mut rels = ck.relation_matrix();
        if k >= 1 {
            let qk1 = qc.term(k - 1);
            sys = sys.vstack(qc.diff(k).matrix());
            rels = rels.block_diag(&qk1.relation_matrix());
        }
        let aug = sys.hstack(&rels);
        let solver = Solver::new(&aug);
        let cols: Vec<Vec<Int>> = (0..p.term(k).gens())
            .map(|j| {
                let mut rhs = f.comp(k).matrix().column(j);
                if k >= 1 {
                    rhs.extend(out[k - 1].mul_vec(&p.diff(k).matrix().column(j)));
                }
                solver
                    .solve(&rhs)
                    .map(|y| qk.reduce(&y[..qk.gens()]))
                    .ok_or_else(|| Error::Precondition("map does not lift along the replacement".into()))
            })
            .collect::<Result<_>>()?;
        out.push(Matrix::from_columns(qk.gens(), &cols));
    }
    Ok(out)
}

/// Whether `[ψ] ∘ k̂ = 0` for `ψ` classifying `ext` in dimension `n+2` and
/// `k̂ ∈ H^{n+2}(X; J″)`.
pub fn is_allowable(ext: &ExtensionClass, khat: &CohomologyClass, n: usize) -> Result<bool> {
    if khat.target.dimension != n + 2 {
        return Err(Error::Precondition("k-invariant must have dimension n + 2".into()));
    }
    if khat.target.module.gens() != ext.quotient.gens()
        || khat.target.module.relations() != ext.quotient.relations()
    {
        return Err(Error::Precondition("k-invariant target differs from the extension quotient".into()));
    }
    let psi = extension_to_class(ext, n + 2)?;
    let k = khat.representative();
    let lifted = lift_along(&psi.classes.replacement.q, &k, psi.classes.source().top())?;
    let psi_rep = psi.representative();
    let x = k.source().clone();
    let e = psi.target.realization.clone();
    let mats: Vec<Matrix> = (0..=x.top())
        .map(|i| match lifted.get(i) {
            Some(g) => psi_rep.comp(i).matrix().mul(g),
            None => Matrix::zeros(e.term(i).gens(), x.term(i).gens()),
        })
        .collect();
    let composite = ChainMap::from_matrices(x, e.clone(), mats)?;
    let classes = HomotopyClasses::with_replacement(khat.classes.replacement.clone(), &e)?;
    Ok(classes.is_nullhomotopic(&composite))
}

/// `E(M, n)` with its class `id ∈ H^n(E(M, n); M)`.
pub fn fundamental_class(m: &Module, n: usize) -> Result<CohomologyClass> {
    let e = em_object(m, n);
    let hc = Arc::new(homotopy_classes(&e.realization, &e.realization)?);
    let id = hc.replacement.q.clone();
    let mut c = class_of_map(&id, &e, hc)?;
    c.source_em = Some(e);
    Ok(c)
}

pub fn zero_em(ring: &RingSpec, n: usize) -> EMObject {
    em_object(&Arc::new(FgModule::zero(ring.clone())), n)
}

#[cfg(test)]
mod tests;
