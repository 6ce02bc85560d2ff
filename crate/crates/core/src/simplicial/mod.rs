//! Truncated simplicial modules: simplicial identities, matching and
//! latching objects, Moore chains and cycles, Dold–Kan, homotopy groups and
//! Postnikov sections by coskeletal filling.

mod bisimplicial;
mod dold_kan;

pub use bisimplicial::{dold_kan_bisimplicial, BisimplicialModule, DoubleComplex, SimplicialMap};
pub use dold_kan::{dold_kan, dold_kan_map, surjection_count, surjections, Surjection};

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::chain::{ChainComplex, Complex};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::lattice::{preimage, Lattice};
use crate::matrix::Matrix;
use crate::module::{direct_sum, induced_map, power, FgModule, Module, ModuleMap, SubQuotient};
use crate::ring::RingSpec;

/// Levels `0..=N` with faces `d_i: X_n → X_{n−1}` and degeneracies
/// `s_j: X_n → X_{n+1}` (the latter only for `n < N`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialModule {
    ring: RingSpec,
    levels: Vec<Module>,
    /// `faces[n][i]`, empty at `n = 0`.
    faces: Vec<Vec<ModuleMap>>,
    /// `degens[n][j]` for `n < N`.
    degens: Vec<Vec<ModuleMap>>,
}

impl SimplicialModule {
    /// Validates shapes, rings and every simplicial identity.
    pub fn new(
        ring: RingSpec,
        levels: Vec<Module>,
        faces: Vec<Vec<ModuleMap>>,
        degens: Vec<Vec<ModuleMap>>,
    ) -> Result<SimplicialModule> {
        let x = SimplicialModule::from_parts(ring, levels, faces, degens)?;
        x.validate()?;
        Ok(x)
    }

    /// Checks shapes only.
    pub fn from_parts(
        ring: RingSpec,
        levels: Vec<Module>,
        faces: Vec<Vec<ModuleMap>>,
        degens: Vec<Vec<ModuleMap>>,
    ) -> Result<SimplicialModule> {
        if levels.is_empty() {
            return Err(Error::Shape("a simplicial module needs level 0".into()));
        }
        let top = levels.len() - 1;
        if faces.len() != top + 1 || degens.len() != top {
            return Err(Error::Shape("one face list per level and one degeneracy list below the top".into()));
        }
        for (n, l) in levels.iter().enumerate() {
            if l.ring() != &ring {
                return Err(Error::RingMismatch);
            }
            let nf = if n == 0 { 0 } else { n + 1 };
            if faces[n].len() != nf {
                return Err(Error::Shape(alloc::format!("level {} needs {} faces", n, nf)));
            }
            for f in &faces[n] {
                if f.source().as_ref() != l.as_ref() || f.target().as_ref() != levels[n - 1].as_ref() {
                    return Err(Error::Shape(alloc::format!("a face at level {} has the wrong endpoints", n)));
                }
            }
            if n < top {
                if degens[n].len() != n + 1 {
                    return Err(Error::Shape(alloc::format!("level {} needs {} degeneracies", n, n + 1)));
                }
                for s in &degens[n] {
                    if s.source().as_ref() != l.as_ref() || s.target().as_ref() != levels[n + 1].as_ref() {
                        return Err(Error::Shape(alloc::format!(
                            "a degeneracy at level {} has the wrong endpoints",
                            n
                        )));
                    }
                }
            }
        }
        Ok(SimplicialModule {
            ring,
            levels,
            faces,
            degens,
        })
    }

    /// All simplicial identities, reported as `(level, i, j)` of the first
    /// failure; `level` is the source level of the composite.
    pub fn validate(&self) -> Result<()> {
        let top = self.truncation();
        let eq = |a: &ModuleMap, b: &ModuleMap| a.matrix() == b.matrix();
        for n in 2..=top {
            for j in 0..=n {
                for i in 0..j {
                    // d_i d_j = d_{j−1} d_i
                    if !eq(&self.face(n, j).then(&self.face(n - 1, i)), &self.face(n, i).then(&self.face(n - 1, j - 1))) {
                        return Err(Error::SimplicialIdentity { level: n, i, j, identity: "d_i d_j = d_{j-1} d_i" });
                    }
                }
            }
        }
        for n in 0..top.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    // s_i s_j = s_{j+1} s_i
                    if !eq(&self.degen(n, j).then(&self.degen(n + 1, i)), &self.degen(n, i).then(&self.degen(n + 1, j + 1))) {
                        return Err(Error::SimplicialIdentity { level: n, i, j, identity: "s_i s_j = s_{j+1} s_i" });
                    }
                }
            }
        }
        for n in 0..top {
            for j in 0..=n {
                let s = self.degen(n, j);
                for i in 0..=n + 1 {
                    let lhs = s.then(&self.face(n + 1, i));
                    let (ok, name) = if i < j {
                        (eq(&lhs, &self.face(n, i).then(&self.degen(n - 1, j - 1))), "d_i s_j = s_{j-1} d_i")
                    } else if i == j || i == j + 1 {
                        (eq(&lhs, &ModuleMap::identity(self.level(n))), "d_i s_j = id")
                    } else {
                        (eq(&lhs, &self.face(n, i - 1).then(&self.degen(n - 1, j))), "d_i s_j = s_j d_{i-1}")
                    };
                    if !ok {
                        return Err(Error::SimplicialIdentity { level: n, i, j, identity: name });
                    }
                }
            }
        }
        Ok(())
    }

    /// The constant simplicial module on `a`.
    pub fn constant(a: Module, truncation: usize) -> SimplicialModule {
        let id = ModuleMap::identity(a.clone());
        let levels = vec![a.clone(); truncation + 1];
        let faces = (0..=truncation)
            .map(|n| if n == 0 { Vec::new() } else { vec![id.clone(); n + 1] })
            .collect();
        let degens = (0..truncation).map(|n| vec![id.clone(); n + 1]).collect();
        SimplicialModule {
            ring: a.ring().clone(),
            levels,
            faces,
            degens,
        }
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    /// The truncation level `N`.
    pub fn truncation(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[Module] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> Module {
        self.levels[n].clone()
    }

    pub fn face(&self, n: usize, i: usize) -> ModuleMap {
        self.faces[n][i].clone()
    }

    pub fn degen(&self, n: usize, j: usize) -> ModuleMap {
        self.degens[n][j].clone()
    }

    pub fn faces(&self) -> &[Vec<ModuleMap>] {
        &self.faces
    }

    pub fn degeneracies(&self) -> &[Vec<ModuleMap>] {
        &self.degens
    }

    /// Levels `0..=n`.
    pub fn truncated(&self, n: usize) -> SimplicialModule {
        let n = n.min(self.truncation());
        SimplicialModule {
            ring: self.ring.clone(),
            levels: self.levels[..=n].to_vec(),
            faces: self.faces[..=n].to_vec(),
            degens: self.degens[..n].to_vec(),
        }
    }

    /// Transport along levelwise changes of generators: `u[n]` is invertible
    /// with inverse `u_inv[n]`, and new coordinates are `u[n] · old`.
    pub fn transport(&self, u: &[Matrix], u_inv: &[Matrix]) -> SimplicialModule {
        let levels: Vec<Module> = self
            .levels
            .iter()
            .enumerate()
            .map(|(n, l)| {
                let rels = l.relations().basis().iter().map(|v| u[n].mul_vec(v)).collect();
                Arc::new(FgModule::new(self.ring.clone(), l.gens(), rels))
            })
            .collect();
        let conj = |f: &ModuleMap, a: usize, b: usize| {
            let m = u[b].mul(f.matrix()).mul(&u_inv[a]);
            ModuleMap::from_parts(levels[a].clone(), levels[b].clone(), m)
        };
        let faces = self
            .faces
            .iter()
            .enumerate()
            .map(|(n, fs)| fs.iter().map(|f| conj(f, n, n - 1)).collect())
            .collect();
        let degens = self
            .degens
            .iter()
            .enumerate()
            .map(|(n, ss)| ss.iter().map(|s| conj(s, n, n + 1)).collect())
            .collect();
        SimplicialModule {
            ring: self.ring.clone(),
            levels,
            faces,
            degens,
        }
    }
}

/// `M_n X ⊆ (X_{n−1})^{n+1}` with `δ_n = (d_0, …, d_n)` corestricted.
#[derive(Clone, Debug)]
pub struct MatchingObject {
    pub module: Module,
    /// `X_n → M_n X`.
    pub delta: ModuleMap,
    /// Minimal generators as tuples in `(X_{n−1})^{n+1}`.
    pub sub: SubQuotient,
}

impl MatchingObject {
    /// The `k`-th projection `M_n X → X_{n−1}`.
    pub fn projection(&self, x: &SimplicialModule, n: usize, k: usize) -> ModuleMap {
        let g = x.level(n - 1).gens();
        let m = self.sub.inc.block(k * g, 0, g, self.sub.inc.cols());
        ModuleMap::from_parts(self.module.clone(), x.level(n - 1), m)
    }
}

fn check_level(x: &SimplicialModule, n: usize) -> Result<()> {
    if n > x.truncation() {
        return Err(Error::InsufficientTruncation {
            needed: n,
            available: x.truncation(),
        });
    }
    Ok(())
}

/// The tuples `(x_0, …, x_n)` in `X_{n−1}` with `d_i x_j = d_{j−1} x_i` for
/// `i < j`, as a submodule of the product, given faces `X_{n−1} → X_{n−2}`.
pub(crate) fn matching_lattice(ring: &RingSpec, prev: &Module, faces: &[ModuleMap], n: usize) -> SubQuotient {
    let g = prev.gens();
    let prod = power(prev, n + 1);
    if n <= 1 {
        return SubQuotient::new(ring.clone(), &Lattice::full(prod.gens()), prod.relations());
    }
    let pp = faces[0].target().clone();
    let h = pp.gens();
    let pairs: Vec<(usize, usize)> = (0..=n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let mut eqm = Matrix::zeros(pairs.len() * h, (n + 1) * g);
    for (r, &(i, j)) in pairs.iter().enumerate() {
        // d_i x_j − d_{j−1} x_i
        eqm.set_block(r * h, j * g, faces[i].matrix());
        eqm.set_block(r * h, i * g, &faces[j - 1].matrix().neg());
    }
    let target = power(&pp, pairs.len());
    let l = preimage(&eqm, target.relations());
    SubQuotient::new(ring.clone(), &l, prod.relations())
}

pub fn matching_object(x: &SimplicialModule, n: usize) -> Result<MatchingObject> {
    check_level(x, n)?;
    let ring = x.ring().clone();
    if n == 0 {
        let z = Arc::new(FgModule::zero(ring.clone()));
        let sub = SubQuotient::new(ring, &Lattice::zero(0), &Lattice::zero(0));
        return Ok(MatchingObject {
            delta: ModuleMap::zero(x.level(0), z.clone()),
            module: sub.module.clone(),
            sub,
        });
    }
    let faces_below: Vec<ModuleMap> = if n >= 2 { x.faces[n - 1].clone() } else { Vec::new() };
    let sub = matching_lattice(&ring, &x.level(n - 1), &faces_below, n);
    let stacked = (0..=n)
        .map(|i| x.face(n, i).matrix().clone())
        .reduce(|a, b| a.vstack(&b))
        .expect("n ≥ 1");
    let cols: Vec<Vec<Int>> = (0..x.level(n).gens())
        .map(|k| sub.coords(&stacked.column(k)).expect("faces satisfy the matching equations"))
        .collect();
    let delta = ModuleMap::from_parts(x.level(n), sub.module.clone(), Matrix::from_columns(sub.module.gens(), &cols));
    Ok(MatchingObject {
        module: sub.module.clone(),
        delta,
        sub,
    })
}

/// `L_n X = (⊕_{j<n} X_{n−1}) / ⟨copy_j(s_i y) − copy_i(s_{j−1} y) : i < j⟩`
/// with `σ(copy_j x) = s_j x`.
#[derive(Clone, Debug)]
pub struct LatchingObject {
    pub module: Module,
    pub sigma: ModuleMap,
    /// Presentation on `n` copies of the generators of `X_{n−1}`.
    pub presentation: Module,
    /// Presentation → minimal module.
    pub to_min: Matrix,
}

pub fn latching_object(x: &SimplicialModule, n: usize) -> Result<LatchingObject> {
    check_level(x, n)?;
    let ring = x.ring().clone();
    if n == 0 {
        let z = Arc::new(FgModule::zero(ring.clone()));
        return Ok(LatchingObject {
            module: z.clone(),
            sigma: ModuleMap::zero(z.clone(), x.level(0)),
            presentation: z,
            to_min: Matrix::zeros(0, 0),
        });
    }
    let prev = x.level(n - 1);
    let g = prev.gens();
    let mut rels: Vec<Vec<Int>> = Vec::new();
    for c in 0..n {
        for v in prev.relations().basis() {
            let mut r = vec![Int::ZERO; n * g];
            r[c * g..(c + 1) * g].clone_from_slice(v);
            rels.push(r);
        }
    }
    if n >= 2 {
        let pp = x.level(n - 2);
        for j in 0..n {
            for i in 0..j {
                let a = x.degen(n - 2, i);
                let b = x.degen(n - 2, j - 1);
                for y in 0..pp.gens() {
                    let mut r = vec![Int::ZERO; n * g];
                    for t in 0..g {
                        r[j * g + t] += a.matrix().get(t, y);
                        r[i * g + t] -= b.matrix().get(t, y);
                    }
                    rels.push(r);
                }
            }
        }
    }
    let pres = Arc::new(FgModule::new(ring, n * g, rels));
    let (min, from, to) = pres.minimal();
    let min = Arc::new(min);
    let stacked = (0..n)
        .map(|j| x.degen(n - 1, j).matrix().clone())
        .reduce(|a, b| a.hstack(&b))
        .expect("n ≥ 1");
    let sigma = ModuleMap::new(min.clone(), x.level(n), stacked.mul(&from))?;
    Ok(LatchingObject {
        module: min,
        sigma,
        presentation: pres,
        to_min: to,
    })
}

/// Moore chains `C_n X = ∩_{i≥1} ker d_i`, cycles `Z_n X = ∩_{i≥0} ker d_i`
/// and the normalized complex `(C_* X, d_0)` through level `N`.
#[derive(Clone, Debug)]
pub struct MooreComplex {
    pub chains: Vec<SubQuotient>,
    pub cycles: Vec<SubQuotient>,
    pub normalized: Complex,
}

fn faces_kernel(x: &SimplicialModule, n: usize, from: usize) -> SubQuotient {
    let lvl = x.level(n);
    if n == 0 || from > n {
        return SubQuotient::new(x.ring().clone(), &Lattice::full(lvl.gens()), lvl.relations());
    }
    let stacked = (from..=n)
        .map(|i| x.face(n, i).matrix().clone())
        .reduce(|a, b| a.vstack(&b))
        .expect("nonempty");
    let tgt = power(&x.level(n - 1), n + 1 - from);
    let l = preimage(&stacked, tgt.relations());
    SubQuotient::new(x.ring().clone(), &l, lvl.relations())
}

pub fn moore_complex(x: &SimplicialModule) -> MooreComplex {
    let top = x.truncation();
    let chains: Vec<SubQuotient> = (0..=top).map(|n| faces_kernel(x, n, 1)).collect();
    let cycles: Vec<SubQuotient> = (0..=top)
        .map(|n| if n == 0 { faces_kernel(x, 0, 1) } else { faces_kernel(x, n, 0) })
        .collect();
    let terms: Vec<Module> = chains.iter().map(|c| c.module.clone()).collect();
    let d = (1..=top)
        .map(|n| induced_map(&chains[n], &chains[n - 1], x.face(n, 0).matrix()).expect("d_0 preserves Moore chains"))
        .collect();
    let normalized = Arc::new(ChainComplex::new(x.ring().clone(), terms, d).expect("d_0 d_0 = 0 on Moore chains"));
    MooreComplex {
        chains,
        cycles,
        normalized,
    }
}

/// `π_n X = H_n(N X)`; needs level `n + 1`.
pub fn homotopy_groups(x: &SimplicialModule, n: usize) -> Result<Module> {
    if n + 1 > x.truncation() {
        return Err(Error::InsufficientTruncation {
            needed: n + 1,
            available: x.truncation(),
        });
    }
    let m = moore_complex(&x.truncated(n + 1));
    Ok(m.normalized.homology_module(n))
}

/// `P_n X`: equal to `X` through level `n + 1`, and `M_k(P_n X)` in every
/// level `k ≥ n + 2` up to the truncation of `X`. Returns `r: X → P_n X`.
pub fn postnikov_section_simplicial(x: &SimplicialModule, n: usize) -> Result<(SimplicialModule, SimplicialMap)> {
    if x.truncation() < n + 2 {
        return Err(Error::InsufficientTruncation {
            needed: n + 2,
            available: x.truncation(),
        });
    }
    let top = x.truncation();
    let ring = x.ring().clone();
    let base = x.truncated(n + 1);
    let mut levels = base.levels.clone();
    let mut faces = base.faces.clone();
    let mut degens = base.degens.clone();
    let mut r: Vec<ModuleMap> = (0..=n + 1).map(|k| ModuleMap::identity(x.level(k))).collect();
    for k in n + 2..=top {
        let prev = levels[k - 1].clone();
        let sub = matching_lattice(&ring, &prev, &faces[k - 1], k);
        let lvl = sub.module.clone();
        let g = prev.gens();
        let fk: Vec<ModuleMap> = (0..=k)
            .map(|i| ModuleMap::from_parts(lvl.clone(), prev.clone(), sub.inc.block(i * g, 0, g, sub.inc.cols())))
            .collect();
        // s_j y = (d_0 s_j y, …, d_k s_j y) via the mixed identities.
        let sk: Vec<ModuleMap> = (0..k)
            .map(|j| {
                let parts: Vec<Matrix> = (0..=k)
                    .map(|i| {
                        if i < j {
                            faces[k - 1][i].then(&degens[k - 2][j - 1]).matrix().clone()
                        } else if i == j || i == j + 1 {
                            Matrix::identity(g)
                        } else {
                            faces[k - 1][i - 1].then(&degens[k - 2][j]).matrix().clone()
                        }
                    })
                    .collect();
                let stacked = parts.into_iter().reduce(|a, b| a.vstack(&b)).expect("k ≥ 1");
                let cols: Vec<Vec<Int>> = (0..g)
                    .map(|c| sub.coords(&stacked.column(c)).expect("degenerate tuples match"))
                    .collect();
                ModuleMap::from_parts(prev.clone(), lvl.clone(), Matrix::from_columns(lvl.gens(), &cols))
            })
            .collect();
        // r_k y = (r_{k−1} d_i y)_i
        let stacked = (0..=k)
            .map(|i| x.face(k, i).then(&r[k - 1]).matrix().clone())
            .reduce(|a, b| a.vstack(&b))
            .expect("k ≥ 1");
        let cols: Vec<Vec<Int>> = (0..x.level(k).gens())
            .map(|c| sub.coords(&stacked.column(c)).expect("faces of x match"))
            .collect();
        r.push(ModuleMap::from_parts(x.level(k), lvl.clone(), Matrix::from_columns(lvl.gens(), &cols)));
        levels.push(lvl);
        faces.push(fk);
        degens.push(sk);
    }
    let p = SimplicialModule::from_parts(ring, levels, faces, degens)?;
    debug_assert!(p.validate().is_ok());
    let p = Arc::new(p);
    let map = SimplicialMap::from_parts(Arc::new(x.clone()), p.clone(), r);
    Ok(((*p).clone(), map))
}

/// `⊕` levelwise.
pub fn direct_sum_simplicial(a: &SimplicialModule, b: &SimplicialModule) -> SimplicialModule {
    let top = a.truncation().min(b.truncation());
    let levels: Vec<Module> = (0..=top)
        .map(|n| Arc::new(direct_sum(a.ring(), &[&a.level(n), &b.level(n)])))
        .collect();
    let faces = (0..=top)
        .map(|n| {
            if n == 0 {
                return Vec::new();
            }
            (0..=n)
                .map(|i| {
                    let m = a.face(n, i).matrix().block_diag(b.face(n, i).matrix());
                    ModuleMap::from_parts(levels[n].clone(), levels[n - 1].clone(), m)
                })
                .collect()
        })
        .collect();
    let degens = (0..top)
        .map(|n| {
            (0..=n)
                .map(|j| {
                    let m = a.degen(n, j).matrix().block_diag(b.degen(n, j).matrix());
                    ModuleMap::from_parts(levels[n].clone(), levels[n + 1].clone(), m)
                })
                .collect()
        })
        .collect();
    SimplicialModule {
        ring: a.ring().clone(),
        levels,
        faces,
        degens,
    }
}

#[cfg(test)]
mod tests;
