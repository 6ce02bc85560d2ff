//! Simplicial maps, and bisimplicial modules stored as a grid `X_{p,q}` with
//! external index `p` and internal index `q`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use super::dold_kan::{degen_of, face_of, FaceAction, Layout};
use super::SimplicialModule;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::{direct_sum, FgModule, Module, ModuleMap};
use crate::ring::RingSpec;

/// Levelwise maps commuting with faces and degeneracies.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    src: Arc<SimplicialModule>,
    tgt: Arc<SimplicialModule>,
    comps: Vec<ModuleMap>,
}

impl SimplicialMap {
    pub fn new(src: Arc<SimplicialModule>, tgt: Arc<SimplicialModule>, comps: Vec<ModuleMap>) -> Result<SimplicialMap> {
        let m = SimplicialMap::from_parts(src, tgt, comps);
        m.validate()?;
        Ok(m)
    }

    pub fn from_parts(src: Arc<SimplicialModule>, tgt: Arc<SimplicialModule>, comps: Vec<ModuleMap>) -> SimplicialMap {
        SimplicialMap { src, tgt, comps }
    }

    pub fn validate(&self) -> Result<()> {
        let top = self.src.truncation().min(self.tgt.truncation());
        if self.comps.len() < top + 1 {
            return Err(Error::Shape("one component per level".into()));
        }
        for n in 1..=top {
            for i in 0..=n {
                let a = self.src.face(n, i).then(&self.comps[n - 1]);
                let b = self.comps[n].then(&self.tgt.face(n, i));
                if a.matrix() != b.matrix() {
                    return Err(Error::SimplicialIdentity { level: n, i, j: i, identity: "f d_i = d_i f" });
                }
            }
        }
        for n in 0..top {
            for j in 0..=n {
                let a = self.src.degen(n, j).then(&self.comps[n + 1]);
                let b = self.comps[n].then(&self.tgt.degen(n, j));
                if a.matrix() != b.matrix() {
                    return Err(Error::SimplicialIdentity { level: n, i: j, j, identity: "f s_j = s_j f" });
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<SimplicialModule> {
        &self.src
    }

    pub fn target(&self) -> &Arc<SimplicialModule> {
        &self.tgt
    }

    pub fn components(&self) -> &[ModuleMap] {
        &self.comps
    }

    pub fn comp(&self, n: usize) -> &ModuleMap {
        &self.comps[n]
    }
}

/// `X_{p,q}` for `p ≤ P`, `q ≤ Q`; external operators change `p`, internal
/// ones change `q`, and the two structures commute.
#[derive(Clone, Debug)]
pub struct BisimplicialModule {
    ring: RingSpec,
    /// `terms[p][q]`.
    terms: Vec<Vec<Module>>,
    /// `ext_faces[p][i][q]: X_{p,q} → X_{p−1,q}`.
    ext_faces: Vec<Vec<Vec<ModuleMap>>>,
    /// `ext_degens[p][j][q]: X_{p,q} → X_{p+1,q}`.
    ext_degens: Vec<Vec<Vec<ModuleMap>>>,
    /// `int_faces[p][q][i]: X_{p,q} → X_{p,q−1}`.
    int_faces: Vec<Vec<Vec<ModuleMap>>>,
    /// `int_degens[p][q][j]: X_{p,q} → X_{p,q+1}`.
    int_degens: Vec<Vec<Vec<ModuleMap>>>,
}

impl BisimplicialModule {
    pub fn new(
        ring: RingSpec,
        terms: Vec<Vec<Module>>,
        ext_faces: Vec<Vec<Vec<ModuleMap>>>,
        ext_degens: Vec<Vec<Vec<ModuleMap>>>,
        int_faces: Vec<Vec<Vec<ModuleMap>>>,
        int_degens: Vec<Vec<Vec<ModuleMap>>>,
    ) -> Result<BisimplicialModule> {
        let x = BisimplicialModule {
            ring,
            terms,
            ext_faces,
            ext_degens,
            int_faces,
            int_degens,
        };
        x.validate()?;
        Ok(x)
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn external_truncation(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn internal_truncation(&self) -> usize {
        self.terms[0].len() - 1
    }

    pub fn term(&self, p: usize, q: usize) -> Module {
        self.terms[p][q].clone()
    }

    pub fn ext_face(&self, p: usize, i: usize, q: usize) -> &ModuleMap {
        &self.ext_faces[p][i][q]
    }

    pub fn ext_degen(&self, p: usize, j: usize, q: usize) -> &ModuleMap {
        &self.ext_degens[p][j][q]
    }

    pub fn int_face(&self, p: usize, q: usize, i: usize) -> &ModuleMap {
        &self.int_faces[p][q][i]
    }

    pub fn int_degen(&self, p: usize, q: usize, j: usize) -> &ModuleMap {
        &self.int_degens[p][q][j]
    }

    /// The internal simplicial module `X_{p,•}`.
    pub fn row(&self, p: usize) -> SimplicialModule {
        SimplicialModule::from_parts(
            self.ring.clone(),
            self.terms[p].clone(),
            self.int_faces[p].clone(),
            self.int_degens[p][..self.internal_truncation()].to_vec(),
        )
        .expect("validated shapes")
    }

    /// The external simplicial module `X_{•,q}`.
    pub fn column(&self, q: usize) -> SimplicialModule {
        let p_top = self.external_truncation();
        let levels = (0..=p_top).map(|p| self.terms[p][q].clone()).collect();
        let faces = (0..=p_top)
            .map(|p| self.ext_faces[p].iter().map(|fs| fs[q].clone()).collect())
            .collect();
        let degens = (0..p_top)
            .map(|p| self.ext_degens[p].iter().map(|ss| ss[q].clone()).collect())
            .collect();
        SimplicialModule::from_parts(self.ring.clone(), levels, faces, degens).expect("validated shapes")
    }

    /// Shapes, identities in each direction and commutation of the two
    /// structures.
    pub fn validate(&self) -> Result<()> {
        let pt = self.terms.len();
        if pt == 0 || self.terms.iter().any(|r| r.len() != self.terms[0].len() || r.is_empty()) {
            return Err(Error::Shape("a bisimplicial module needs a rectangular grid".into()));
        }
        if self.ext_faces.len() != pt || self.ext_degens.len() + 1 != pt || self.int_faces.len() != pt {
            return Err(Error::Shape("operator lists do not match the grid".into()));
        }
        let (p_top, q_top) = (self.external_truncation(), self.internal_truncation());
        for p in 0..=p_top {
            if self.int_faces[p].len() != q_top + 1 || self.int_degens[p].len() < q_top {
                return Err(Error::Shape("internal operator lists do not match the grid".into()));
            }
            if self.ext_faces[p].len() != if p == 0 { 0 } else { p + 1 } {
                return Err(Error::Shape("external face lists do not match the grid".into()));
            }
            for fs in &self.ext_faces[p] {
                if fs.len() != q_top + 1 {
                    return Err(Error::Shape("external faces need one map per internal level".into()));
                }
            }
        }
        for p in 0..p_top {
            if self.ext_degens[p].len() != p + 1 || self.ext_degens[p].iter().any(|ss| ss.len() != q_top + 1) {
                return Err(Error::Shape("external degeneracy lists do not match the grid".into()));
            }
        }
        for p in 0..=p_top {
            self.row(p).validate()?;
        }
        for q in 0..=q_top {
            self.column(q).validate()?;
        }
        let eq = |a: &ModuleMap, b: &ModuleMap| a.matrix() == b.matrix();
        let fail = |p: usize, i: usize, j: usize, identity: &'static str| {
            Err(Error::SimplicialIdentity { level: p, i, j, identity })
        };
        for p in 0..=p_top {
            for q in 0..=q_top {
                // External faces and degeneracies against internal faces.
                if q >= 1 {
                    for i in 0..=q {
                        let vi = self.int_face(p, q, i);
                        if p >= 1 {
                            for e in 0..=p {
                                let a = self.ext_face(p, e, q).then(self.int_face(p - 1, q, i));
                                let b = vi.then(self.ext_face(p, e, q - 1));
                                if !eq(&a, &b) {
                                    return fail(p, e, i, "external d_e commutes with internal d_i");
                                }
                            }
                        }
                        if p < p_top {
                            for e in 0..=p {
                                let a = self.ext_degen(p, e, q).then(self.int_face(p + 1, q, i));
                                let b = vi.then(self.ext_degen(p, e, q - 1));
                                if !eq(&a, &b) {
                                    return fail(p, e, i, "external s_e commutes with internal d_i");
                                }
                            }
                        }
                    }
                }
                if q < q_top {
                    for j in 0..=q {
                        let vj = self.int_degen(p, q, j);
                        if p >= 1 {
                            for e in 0..=p {
                                let a = self.ext_face(p, e, q).then(self.int_degen(p - 1, q, j));
                                let b = vj.then(self.ext_face(p, e, q + 1));
                                if !eq(&a, &b) {
                                    return fail(p, e, j, "external d_e commutes with internal s_j");
                                }
                            }
                        }
                        if p < p_top {
                            for e in 0..=p {
                                let a = self.ext_degen(p, e, q).then(self.int_degen(p + 1, q, j));
                                let b = vj.then(self.ext_degen(p, e, q + 1));
                                if !eq(&a, &b) {
                                    return fail(p, e, j, "external s_e commutes with internal s_j");
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Transport along invertible changes of generators per bidegree.
    pub fn transport(&self, u: &[Vec<Matrix>], u_inv: &[Vec<Matrix>]) -> BisimplicialModule {
        let terms: Vec<Vec<Module>> = self
            .terms
            .iter()
            .enumerate()
            .map(|(p, row)| {
                row.iter()
                    .enumerate()
                    .map(|(q, m)| {
                        let rels = m.relations().basis().iter().map(|v| u[p][q].mul_vec(v)).collect();
                        Arc::new(FgModule::new(self.ring.clone(), m.gens(), rels))
                    })
                    .collect()
            })
            .collect();
        let conj = |f: &ModuleMap, (p, q): (usize, usize), (p2, q2): (usize, usize)| {
            let m = u[p2][q2].mul(f.matrix()).mul(&u_inv[p][q]);
            ModuleMap::from_parts(terms[p][q].clone(), terms[p2][q2].clone(), m)
        };
        let ext_faces = self
            .ext_faces
            .iter()
            .enumerate()
            .map(|(p, fs)| {
                fs.iter()
                    .map(|f| f.iter().enumerate().map(|(q, m)| conj(m, (p, q), (p - 1, q))).collect())
                    .collect()
            })
            .collect();
        let ext_degens = self
            .ext_degens
            .iter()
            .enumerate()
            .map(|(p, ss)| {
                ss.iter()
                    .map(|s| s.iter().enumerate().map(|(q, m)| conj(m, (p, q), (p + 1, q))).collect())
                    .collect()
            })
            .collect();
        let int_faces = self
            .int_faces
            .iter()
            .enumerate()
            .map(|(p, row)| {
                row.iter()
                    .enumerate()
                    .map(|(q, fs)| fs.iter().map(|m| conj(m, (p, q), (p, q - 1))).collect())
                    .collect()
            })
            .collect();
        let int_degens = self
            .int_degens
            .iter()
            .enumerate()
            .map(|(p, row)| {
                row.iter()
                    .enumerate()
                    .map(|(q, ss)| ss.iter().map(|m| conj(m, (p, q), (p, q + 1))).collect())
                    .collect()
            })
            .collect();
        BisimplicialModule {
            ring: self.ring.clone(),
            terms,
            ext_faces,
            ext_degens,
            int_faces,
            int_degens,
        }
    }
}

/// A first-quadrant double complex with commuting differentials
/// `h: D_{a,b} → D_{a−1,b}` and `v: D_{a,b} → D_{a,b−1}`.
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    pub ring: RingSpec,
    /// `terms[a][b]`.
    pub terms: Vec<Vec<Module>>,
    /// `h[a][b]` for `a ≥ 1` (entries at `a = 0` are ignored).
    pub h: Vec<Vec<Matrix>>,
    /// `v[a][b]` for `b ≥ 1`.
    pub v: Vec<Vec<Matrix>>,
}

impl DoubleComplex {
    pub fn validate(&self) -> Result<()> {
        let (at, bt) = (self.terms.len(), self.terms[0].len());
        for a in 0..at {
            for b in 0..bt {
                let r = |x: usize, y: usize| self.terms[x][y].clone();
                if a >= 1 {
                    ModuleMap::new(r(a, b), r(a - 1, b), self.h[a][b].clone())?;
                }
                if b >= 1 {
                    ModuleMap::new(r(a, b), r(a, b - 1), self.v[a][b].clone())?;
                }
                let zero = |m: &Matrix, t: &Module| m.columns().iter().all(|c| t.is_zero_element(c));
                if a >= 2 && !zero(&self.h[a - 1][b].mul(&self.h[a][b]), &r(a - 2, b)) {
                    return Err(Error::NotAChainComplex { degree: a });
                }
                if b >= 2 && !zero(&self.v[a][b - 1].mul(&self.v[a][b]), &r(a, b - 2)) {
                    return Err(Error::NotAChainComplex { degree: b });
                }
                if a >= 1 && b >= 1 {
                    let hv = self.v[a - 1][b].mul(&self.h[a][b]);
                    let vh = self.h[a][b - 1].mul(&self.v[a][b]);
                    if !zero(&hv.sub(&vh), &r(a - 1, b - 1)) {
                        return Err(Error::NotAChainMap { degree: a });
                    }
                }
            }
        }
        Ok(())
    }

    fn term(&self, a: usize, b: usize) -> Option<&Module> {
        self.terms.get(a).and_then(|r| r.get(b))
    }

    fn gens(&self, a: usize, b: usize) -> usize {
        self.term(a, b).map_or(0, |m| m.gens())
    }
}

/// `Γ ⊗ Γ` of a double complex: `X_{p,q} = ⊕_{σ: [p]↠[a], τ: [q]↠[b]} D_{a,b}`,
/// external operators acting through `h`, internal ones through `v`.
pub fn dold_kan_bisimplicial(d: &DoubleComplex, p_top: usize, q_top: usize) -> Result<BisimplicialModule> {
    d.validate()?;
    let ring = d.ring.clone();
    // Layout of X_{p,q}: pairs (σ, τ) ordered by σ then τ.
    struct Grid {
        lp: Layout,
        lq: Layout,
        offs: Vec<Vec<usize>>,
        total: usize,
    }
    let grid = |p: usize, q: usize| -> Grid {
        let lp = Layout::new(p, |_| 1);
        let lq = Layout::new(q, |_| 1);
        let mut offs = Vec::new();
        let mut total = 0;
        for s in &lp.sums {
            let mut row = Vec::new();
            for t in &lq.sums {
                row.push(total);
                total += d.gens(s.k, t.k);
            }
            offs.push(row);
        }
        Grid { lp, lq, offs, total }
    };
    let grids: Vec<Vec<Grid>> = (0..=p_top).map(|p| (0..=q_top).map(|q| grid(p, q)).collect()).collect();
    let zero_mod = Arc::new(FgModule::zero(ring.clone()));
    let terms: Vec<Vec<Module>> = (0..=p_top)
        .map(|p| {
            (0..=q_top)
                .map(|q| {
                    let g = &grids[p][q];
                    let mut parts: Vec<Module> = Vec::new();
                    for s in &g.lp.sums {
                        for t in &g.lq.sums {
                            parts.push(d.term(s.k, t.k).cloned().unwrap_or_else(|| zero_mod.clone()));
                        }
                    }
                    let refs: Vec<&FgModule> = parts.iter().map(|m| m.as_ref()).collect();
                    Arc::new(direct_sum(&ring, &refs))
                })
                .collect()
        })
        .collect();
    let hmat = |a: usize, b: usize| -> Matrix {
        if a >= 1 && a < d.terms.len() && b < d.terms[0].len() {
            d.h[a][b].clone()
        } else {
            Matrix::zeros(d.gens(a.wrapping_sub(1), b), d.gens(a, b))
        }
    };
    let vmat = |a: usize, b: usize| -> Matrix {
        if b >= 1 && a < d.terms.len() && b < d.terms[0].len() {
            d.v[a][b].clone()
        } else {
            Matrix::zeros(d.gens(a, b.wrapping_sub(1)), d.gens(a, b))
        }
    };
    // External operator: acts on σ, identity on τ.
    let ext_op = |p: usize, q: usize, p2: usize, act: &dyn Fn(&super::Surjection) -> (FaceAction, super::Surjection)| {
        let (g, g2) = (&grids[p][q], &grids[p2][q]);
        let mut m = Matrix::zeros(g2.total, g.total);
        for (si, s) in g.lp.sums.iter().enumerate() {
            let (a, s2) = act(s);
            let si2 = g2.lp.index[&s2];
            for (ti, t) in g.lq.sums.iter().enumerate() {
                let (r, c) = (g2.offs[si2][ti], g.offs[si][ti]);
                match a {
                    FaceAction::Identity => m.set_block(r, c, &Matrix::identity(d.gens(s.k, t.k))),
                    FaceAction::Boundary => m.set_block(r, c, &hmat(s.k, t.k)),
                    FaceAction::Zero => {}
                }
            }
        }
        ModuleMap::from_parts(terms[p][q].clone(), terms[p2][q].clone(), m)
    };
    let int_op = |p: usize, q: usize, q2: usize, act: &dyn Fn(&super::Surjection) -> (FaceAction, super::Surjection)| {
        let (g, g2) = (&grids[p][q], &grids[p][q2]);
        let mut m = Matrix::zeros(g2.total, g.total);
        for (ti, t) in g.lq.sums.iter().enumerate() {
            let (a, t2) = act(t);
            let ti2 = g2.lq.index[&t2];
            for (si, s) in g.lp.sums.iter().enumerate() {
                let (r, c) = (g2.offs[si][ti2], g.offs[si][ti]);
                match a {
                    FaceAction::Identity => m.set_block(r, c, &Matrix::identity(d.gens(s.k, t.k))),
                    FaceAction::Boundary => m.set_block(r, c, &vmat(s.k, t.k)),
                    FaceAction::Zero => {}
                }
            }
        }
        ModuleMap::from_parts(terms[p][q].clone(), terms[p][q2].clone(), m)
    };
    let ext_faces = (0..=p_top)
        .map(|p| {
            if p == 0 {
                return Vec::new();
            }
            (0..=p)
                .map(|i| (0..=q_top).map(|q| ext_op(p, q, p - 1, &|s| face_of(s, i))).collect())
                .collect()
        })
        .collect();
    let ext_degens = (0..p_top)
        .map(|p| {
            (0..=p)
                .map(|j| (0..=q_top).map(|q| ext_op(p, q, p + 1, &|s| (FaceAction::Identity, degen_of(s, j)))).collect())
                .collect()
        })
        .collect();
    let int_faces = (0..=p_top)
        .map(|p| {
            (0..=q_top)
                .map(|q| {
                    if q == 0 {
                        return Vec::new();
                    }
                    (0..=q).map(|i| int_op(p, q, q - 1, &|t| face_of(t, i))).collect()
                })
                .collect()
        })
        .collect();
    let int_degens = (0..=p_top)
        .map(|p| {
            (0..q_top)
                .map(|q| (0..=q).map(|j| int_op(p, q, q + 1, &|t| (FaceAction::Identity, degen_of(t, j)))).collect())
                .collect()
        })
        .collect();
    Ok(BisimplicialModule {
        ring,
        terms,
        ext_faces,
        ext_degens,
        int_faces,
        int_degens,
    })
}
