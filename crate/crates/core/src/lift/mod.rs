//! Lifting a complex `G` over `Z/m` to a complex `X` over `Z` with
//! `X ⊗ Z/m ≃ G`, by an obstruction tower.
//!
//! Stage `n` holds `X̂⟨n⟩ = ⊕_{k≤n} E(J_k, k) ⊕ E(I_{n+1}, n+1)` over `Z` and
//! a class `ρ̂ ∈ [G, P_{n+1} T X̂⟨n⟩]` that is an isomorphism on `H_k` for
//! `k ≤ n+1`, where `T = − ⊗ Z/m`. A stage is extended by (a) checking that
//! the obstruction `χ_n = k_{n+1}(T X̂⟨n⟩) ∘ ρ̂` vanishes, (b) choosing a lift
//! of `ρ̂` through `P_{n+2} → P_{n+1}`, (c) splitting its effect on
//! `H_{n+2}` into kernel, image and cokernel, and (d) choosing an allowable
//! extension `0 → K′ → J_{n+1} → I_{n+1} → 0`. Every choice point is
//! enumerated, so the search is exhaustive up to the isomorphism types fixed
//! at each stage.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::chain::{
    base_change, base_change_map, cofibrant_replacement, find_homotopy_equivalence, k_invariant, mapping_cone,
    postnikov_section, solve_preimage, ChainComplex, ChainMap, CofibrantReplacement, Complex, HomotopyClasses,
};
use crate::emext::{class_of_map, em_map, em_object, is_allowable, CohomologyClass};
use crate::error::{Error, Result};
use crate::homalg::{Ext1, ExtensionClass};
use crate::int::Int;
use crate::lattice::Lattice;
use crate::matrix::Matrix;
use crate::module::{FgModule, Module, ModuleMap, SubQuotient};
use crate::ring::RingSpec;

mod brute;

pub use brute::{brute_force_realize, corpus_bounds, z4_corpus, BruteForceReport, CorpusEntry};

/// Search bounds shared by the tower and the brute-force oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LiftBounds {
    pub max_degree: usize,
    pub max_rank: usize,
    pub max_entry: i64,
}

impl Default for LiftBounds {
    fn default() -> Self {
        LiftBounds {
            max_degree: 3,
            max_rank: 2,
            max_entry: 3,
        }
    }
}

/// Nodes visited before the tower search gives up.
pub const NODE_BUDGET: usize = 20_000;

#[derive(Clone, Debug)]
pub struct LiftProblem {
    pub target: Complex,
    pub modulus: Int,
    pub ring: RingSpec,
    pub bounds: LiftBounds,
    /// One replacement of `G` shared by every `[G, −]` in the search, so that
    /// class coordinates at different stages are comparable.
    pub replacement: CofibrantReplacement,
}

impl LiftProblem {
    pub fn new(target: Complex, bounds: LiftBounds) -> Result<LiftProblem> {
        let ring = target.ring().clone();
        let modulus = match &ring {
            RingSpec::Integers => return Err(Error::Precondition("lifting starts from a complex over Z/m".into())),
            RingSpec::Mod(m) => m.clone(),
        };
        if modulus <= Int::ONE {
            return Err(Error::Precondition("modulus must exceed 1".into()));
        }
        let replacement = cofibrant_replacement(&target, target.top() + 6);
        Ok(LiftProblem {
            target,
            modulus,
            ring,
            bounds,
            replacement,
        })
    }

    fn classes_into(&self, d: &Complex) -> Result<HomotopyClasses> {
        HomotopyClasses::with_replacement(self.replacement.clone(), d)
    }
}

/// The same presentation read over `Z`; an `m`-torsion module stays `m`-torsion.
pub fn over_z(m: &FgModule) -> Module {
    Arc::new(FgModule::new(RingSpec::Integers, m.gens(), m.relations().basis().to_vec()))
}

/// The lift `K′` over `Z` of a `Z/m`-module `K̄` with `K′ ⊗ Z/m ≅ K̄` and no
/// summand `Z/m`: free `Z/m` summands become `Z`, smaller cyclic ones stay.
pub fn canonical_lift(kbar: &FgModule, modulus: &Int) -> Module {
    let form = kbar.canonical_form();
    let mut factors = Vec::new();
    let mut free = form.free_rank;
    for d in &form.factors {
        if d == modulus {
            free += 1;
        } else {
            factors.push(d.clone());
        }
    }
    Arc::new(FgModule::from_form(RingSpec::Integers, &factors, free))
}

/// `P_{n+1} Y → P_n Y`: identity through `n+1`, the differential corestricted
/// to `Z_{n+1}` in degree `n+2`, zero in degree `n+3`.
pub fn section_projection(y: &Complex, n: usize) -> Result<ChainMap> {
    let (a, _) = postnikov_section(y, n + 1);
    let (b, _) = postnikov_section(y, n);
    let z = y.cycles(n + 1);
    let mats = (0..=a.top())
        .map(|k| {
            if k <= n + 1 {
                Ok(Matrix::identity(a.term(k).gens()))
            } else if k == n + 2 {
                let d = y.diff(n + 2);
                let cols = (0..d.source().gens())
                    .map(|j| {
                        z.coords(&d.matrix().column(j))
                            .ok_or_else(|| Error::Precondition("boundary outside the cycles".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Matrix::from_columns(z.module.gens(), &cols))
            } else {
                Ok(Matrix::zeros(b.term(k).gens(), a.term(k).gens()))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ChainMap::from_matrices(a, b, mats)
}

/// `P_n f: P_n A → P_n B`.
pub fn postnikov_map(f: &ChainMap, n: usize) -> Result<ChainMap> {
    let (pa, _) = postnikov_section(f.source(), n);
    let (pb, _) = postnikov_section(f.target(), n);
    let za = f.source().cycles(n + 1);
    let zb = f.target().cycles(n + 1);
    let mut mats: Vec<Matrix> = (0..=n + 1).map(|k| f.comp(k).matrix().clone()).collect();
    let fm = f.comp(n + 1);
    let cols = (0..za.module.gens())
        .map(|j| {
            zb.coords(&fm.apply(&za.inc.column(j)))
                .ok_or_else(|| Error::NotAChainMap { degree: n + 1 })
        })
        .collect::<Result<Vec<_>>>()?;
    mats.push(Matrix::from_columns(zb.module.gens(), &cols));
    ChainMap::from_matrices(pa, pb, mats)
}

/// `N = B_{n+1} + m C_{n+1}`, the kernel of `C_{n+1} → T C_{n+1} / B`.
fn mod_m_boundaries(x: &Complex, n: usize, m: &Int) -> Lattice {
    let r = x.term(n + 1).gens();
    x.boundaries(n + 1).lattice().sum(&Lattice::scaled_full(r, m))
}

/// The modified Postnikov section `P̂_n X = P_{n+1} cone(Φ)`, where `Φ`
/// kills the kernel of `H_{n+1} X → H_{n+1} T X`, together with
/// `p̂: P_{n+1} X → P̂_n X` and `p̌: P̂_n X → P_n X`.
pub fn modified_postnikov_section(x: &Complex, n: usize, m: &Int) -> Result<(Complex, ChainMap, ChainMap)> {
    if !x.ring().is_integers() {
        return Err(Error::Precondition("modified sections live over Z".into()));
    }
    let z = x.cycles(n + 1);
    let b = x.boundaries(n + 1);
    let kernel = z.lattice().intersect(&mod_m_boundaries(x, n, m));
    let sq = SubQuotient::new(RingSpec::Integers, &kernel, b.lattice());
    let g = sq.module.gens();
    let mut ranks = vec![0; n + 2];
    ranks[n + 1] = g;
    let d = (1..=n + 1).map(|k| Matrix::zeros(ranks[k - 1], ranks[k])).collect();
    let f = Arc::new(ChainComplex::free(RingSpec::Integers, &ranks, d)?);
    let mats = (0..=n + 1)
        .map(|k| if k == n + 1 { sq.inc.clone() } else { Matrix::zeros(x.term(k).gens(), 0) })
        .collect();
    let phi = ChainMap::from_matrices(f, x.clone(), mats)?;
    let (cone, inclusion, _) = mapping_cone(&phi);
    let cone = Arc::new(cone);
    let (xhat, _) = postnikov_section(&cone, n + 1);
    let inclusion = ChainMap::from_parts(x.clone(), cone.clone(), inclusion.components().to_vec());
    let phat = postnikov_map(&inclusion, n + 1)?;
    let sp = section_projection(&cone, n)?;
    let (pn, _) = postnikov_section(x, n);
    let mats = sp.components().iter().map(|c| c.matrix().clone()).collect();
    let pcheck = ChainMap::from_matrices(xhat, pn, mats)?;
    Ok((phat.target().clone(), phat, pcheck))
}

/// The modified k-invariant `k̂_n ∈ H^{n+2}(P_n X; I)`, with `I` the image of
/// `H_{n+1} X → H_{n+1} T X`. Returns the class and the generators of `I` as
/// cycles of `X`.
pub fn modified_k_invariant(x: &Complex, n: usize, m: &Int) -> Result<(CohomologyClass, Matrix)> {
    let (e, k, p) = k_invariant(x, n);
    let z = x.cycles(n + 1);
    let nl = mod_m_boundaries(x, n, m);
    let sq = SubQuotient::new(RingSpec::Integers, &z.lattice().sum(&nl), &nl);
    let i = Arc::new(FgModule::new(
        RingSpec::Integers,
        sq.module.gens(),
        sq.module.relations().basis().to_vec(),
    ));
    let em = em_object(&i, n + 2);
    let tgt = em.realization.clone();
    let mut mats: Vec<Matrix> = (0..=e.top())
        .map(|d| Matrix::zeros(tgt.term(d).gens(), e.term(d).gens()))
        .collect();
    let cols = (0..z.module.gens())
        .map(|j| {
            sq.coords(&z.inc.column(j))
                .ok_or_else(|| Error::Precondition("cycle outside the image lattice".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let top = Matrix::from_columns(i.gens(), &cols);
    let de = e.diff(n + 3);
    let rel_cols = (0..de.source().gens())
        .map(|j| {
            let v = top.mul_vec(&de.matrix().column(j));
            i.relations()
                .coordinates(&v)
                .ok_or_else(|| Error::Precondition("boundary outside the relations of I".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    mats[n + 3] = Matrix::from_columns(tgt.term(n + 3).gens(), &rel_cols);
    mats[n + 2] = top;
    let to_em = ChainMap::from_matrices(e, tgt.clone(), mats)?;
    let composite = k.then(&to_em);
    let hc = HomotopyClasses::with_replacement(cofibrant_replacement(&p, p.top() + 1), &tgt)?;
    let class = class_of_map(&composite, &em, Arc::new(hc))?;
    Ok((class, sq.inc.clone()))
}

/// Per-degree offsets of summands in a direct sum of complexes.
fn offsets(parts: &[Complex], degree: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(parts.len() + 1);
    let mut acc = 0;
    out.push(0);
    for p in parts {
        acc += p.term(degree).gens();
        out.push(acc);
    }
    out
}

fn sum_complexes(parts: &[Complex]) -> Complex {
    let mut acc = ChainComplex::zero(RingSpec::Integers);
    for p in parts {
        acc = acc.direct_sum(p);
    }
    Arc::new(acc)
}

/// A map between direct sums given by blocks `(source part, target part, map)`.
fn block_map(
    src: &Complex,
    src_parts: &[Complex],
    tgt: &Complex,
    tgt_parts: &[Complex],
    blocks: &[(usize, usize, ChainMap)],
) -> Result<ChainMap> {
    let mats = (0..=src.top())
        .map(|d| {
            let so = offsets(src_parts, d);
            let to = offsets(tgt_parts, d);
            let mut m = Matrix::zeros(tgt.term(d).gens(), src.term(d).gens());
            for (s, t, f) in blocks {
                let c = f.comp(d);
                if c.matrix().rows() > 0 && c.matrix().cols() > 0 {
                    m.set_block(to[*t], so[*s], c.matrix());
                }
            }
            m
        })
        .collect();
    ChainMap::from_matrices(src.clone(), tgt.clone(), mats)
}

/// `H_k` of the lift is split as `0 → I → H_k G → H_k Y → K̄ → 0` around
/// the image `C`.
#[derive(Clone, Debug)]
pub struct KernelImageSplit {
    pub kernel: Module,
    pub image: Module,
    pub cokernel: Module,
}

/// `ρ̂ ∈ [G, P_{n+1} T X̂⟨n⟩]`.
#[derive(Clone, Debug)]
pub struct RhoHat {
    pub classes: Arc<HomotopyClasses>,
    pub coords: Vec<Int>,
}

impl RhoHat {
    pub fn representative(&self) -> ChainMap {
        self.classes.class_to_map(&self.coords)
    }
}

/// The choices made when passing from one stage to the next.
#[derive(Clone, Debug)]
pub struct StageChoice {
    pub chi: CohomologyClass,
    /// The chosen lift in `[G, P_{n+2} T X̂⟨n⟩]` and the number of lifts.
    pub lift_coords: Vec<Int>,
    pub lift_count: usize,
    pub split: KernelImageSplit,
    pub sub: Module,
    pub khat: Option<CohomologyClass>,
    pub extension: ExtensionClass,
    /// Candidates surviving the lattice and allowability filters.
    pub allowable_count: usize,
}

#[derive(Clone, Debug)]
pub struct Stage {
    pub n: isize,
    /// `J_0, …, J_n`.
    pub modules: Vec<Module>,
    /// `I_{n+1}`.
    pub top: Module,
    pub xhat: Complex,
    pub tx: Complex,
    pub rho: RhoHat,
    /// `p̂: X̂⟨n⟩ → X̂⟨n−1⟩` and the choices leading here, absent at the base.
    pub structure_map: Option<ChainMap>,
    pub choice: Option<StageChoice>,
}

impl Stage {
    fn level(&self) -> usize {
        (self.n + 1) as usize
    }

    fn parts(&self) -> Vec<Complex> {
        stage_parts(&self.modules, &self.top)
    }
}

fn stage_parts(modules: &[Module], top: &Module) -> Vec<Complex> {
    let mut parts: Vec<Complex> = modules
        .iter()
        .enumerate()
        .map(|(k, j)| em_object(j, k).realization)
        .collect();
    parts.push(em_object(top, modules.len()).realization);
    parts
}

/// The stages of one branch, from `n = −1` upwards.
#[derive(Clone, Debug)]
pub struct TowerLedger {
    pub problem: Arc<LiftProblem>,
    pub stages: Vec<Stage>,
}

impl TowerLedger {
    pub fn last(&self) -> &Stage {
        self.stages.last().expect("a ledger has a base stage")
    }

    /// `⊕ E(J_k, k)` once the top module has vanished.
    pub fn realization(&self) -> Option<Complex> {
        let s = self.last();
        if !s.top.is_zero() {
            return None;
        }
        Some(Arc::new(s.xhat.trimmed()))
    }
}

/// Why a branch of the search ended without a lift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeadEnd {
    NonzeroObstruction,
    NoLift,
    NoAllowableExtension,
    NoCompatibleEquivalence,
    TopDoesNotVanish,
    FinalCheckFailed,
}

#[derive(Clone, Debug)]
pub struct DeadBranch {
    pub stage: isize,
    pub reason: DeadEnd,
    /// Modules `J_0, …, J_n` and `I_{n+1}` of the branch, as canonical forms.
    pub modules: Vec<String>,
    pub top: String,
    /// For an obstruction: coordinates of `χ_n` and its group.
    pub obstruction: Option<(Vec<Int>, String)>,
}

#[derive(Clone, Debug)]
pub struct Lift {
    pub complex: Complex,
    pub ledger: TowerLedger,
}

#[derive(Clone, Debug)]
pub struct LiftSearch {
    pub lifts: Vec<Lift>,
    pub certificates: Vec<DeadBranch>,
    pub nodes: usize,
    /// False when the node budget ran out.
    pub exhausted: bool,
}

impl LiftSearch {
    pub fn realizable(&self) -> bool {
        !self.lifts.is_empty()
    }
}

fn form(m: &FgModule) -> String {
    format!("{}", m.canonical_form())
}

fn dead(stage: &Stage, reason: DeadEnd, obstruction: Option<(Vec<Int>, String)>) -> DeadBranch {
    DeadBranch {
        stage: stage.n,
        reason,
        modules: stage.modules.iter().map(|m| form(m)).collect(),
        top: form(&stage.top),
        obstruction,
    }
}

/// The induced homomorphism `[G, A] → [G, B]` of composing with `f: A → B`.
fn induced_on_classes(a: &HomotopyClasses, b: &HomotopyClasses, f: &ChainMap) -> Result<ModuleMap> {
    let ga = a.group();
    let cols = (0..ga.gens())
        .map(|j| {
            let mut e = vec![Int::ZERO; ga.gens()];
            e[j] = Int::ONE;
            b.map_to_class(&a.class_to_map(&e).then(f))
                .ok_or_else(|| Error::Precondition("composite is not a chain map".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    ModuleMap::new(ga.clone(), b.group().clone(), Matrix::from_columns(b.group().gens(), &cols))
}

/// All classes `x` with `f(x) = y`, in canonical order of the kernel.
fn fiber(f: &ModuleMap, y: &[Int]) -> Result<Vec<Vec<Int>>> {
    let Some(x0) = solve_preimage(f, y) else {
        return Ok(Vec::new());
    };
    let ker = f.kernel();
    let src = f.source();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for t in ker.module.coordinate_tuples()? {
        let mut x = ker.inc.mul_vec(&t);
        for (a, b) in x.iter_mut().zip(&x0) {
            *a += b;
        }
        let c = src.coords(&x);
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    Ok(out)
}

fn iso_through(rep: &ChainMap, level: usize) -> bool {
    (0..=level).all(|k| rep.on_homology(k).is_iso())
}

/// The base stage `n = −1`: `X̂⟨−1⟩ = E(I_0, 0)` with `I_0 = H_0 G` read
/// over `Z`, and `ρ̂` the first class that is an isomorphism on `H_0`.
pub fn base_ledger(problem: &Arc<LiftProblem>) -> Result<TowerLedger> {
    let h0 = problem.target.homology_module(0);
    let top = over_z(&h0);
    let xhat = sum_complexes(&stage_parts(&[], &top));
    let tx = Arc::new(base_change(&xhat, &problem.ring)?);
    let (p, _) = postnikov_section(&tx, 0);
    let hc = Arc::new(problem.classes_into(&p)?);
    let coords = hc
        .all_classes()?
        .into_iter()
        .find(|c| iso_through(&hc.class_to_map(c), 0))
        .ok_or_else(|| Error::Precondition("no isomorphism on H_0".into()))?;
    Ok(TowerLedger {
        problem: problem.clone(),
        stages: vec![Stage {
            n: -1,
            modules: Vec::new(),
            top,
            xhat,
            tx,
            rho: RhoHat { classes: hc, coords },
            structure_map: None,
            choice: None,
        }],
    })
}

/// `χ_n`: the k-invariant of `T X̂⟨n⟩` pulled back along `ρ̂`, as a class in
/// `H^{n+3}(G; H_{n+2} T X̂⟨n⟩)`.
pub fn obstruction_class(ledger: &TowerLedger) -> Result<CohomologyClass> {
    let s = ledger.last();
    let level = s.level();
    let (e, k, _) = k_invariant(&s.tx, level);
    let h = e.homology(level + 2);
    let em = em_object(&h.module, level + 2);
    let mats = (0..=e.top())
        .map(|d| {
            if d == level + 2 {
                let cols = (0..e.term(d).gens())
                    .map(|j| {
                        let mut v = vec![Int::ZERO; e.term(d).gens()];
                        v[j] = Int::ONE;
                        h.coords(&v).expect("every element of the top term is a cycle")
                    })
                    .collect::<Vec<_>>();
                Matrix::from_columns(h.module.gens(), &cols)
            } else {
                Matrix::zeros(em.realization.term(d).gens(), e.term(d).gens())
            }
        })
        .collect();
    let to_em = ChainMap::from_matrices(e, em.realization.clone(), mats)?;
    let composite = s.rho.representative().then(&k).then(&to_em);
    let hc = ledger.problem.classes_into(&em.realization)?;
    class_of_map(&composite, &em, Arc::new(hc))
}

/// Classes in `[G, P_{n+2} T X̂⟨n⟩]` projecting to `ρ̂`.
pub fn rho_lifts(ledger: &TowerLedger) -> Result<(Arc<HomotopyClasses>, Vec<Vec<Int>>)> {
    let s = ledger.last();
    let level = s.level();
    let (p2, _) = postnikov_section(&s.tx, level + 1);
    let hc2 = Arc::new(ledger.problem.classes_into(&p2)?);
    let proj = section_projection(&s.tx, level)?;
    let induced = induced_on_classes(&hc2, &s.rho.classes, &proj)?;
    let lifts = fiber(&induced, &s.rho.coords)?;
    Ok((hc2, lifts))
}

pub fn kernel_image_split(hc: &HomotopyClasses, coords: &[Int], degree: usize) -> KernelImageSplit {
    let f = hc.class_to_map(coords).on_homology(degree);
    KernelImageSplit {
        kernel: f.kernel().module,
        image: f.image().module,
        cokernel: f.cokernel().0,
    }
}

/// Extensions `0 → K′ → J → I_{n+1} → 0` with `K′ = mJ` inside `J`, and,
/// from stage `0` on, allowable for `k̂_n(X̂⟨n⟩)`. The projection of every
/// returned extension lands on the stage's own `I_{n+1}`.
pub fn classify_pi_extension(
    stage: &Stage,
    sub: &Module,
    modulus: &Int,
) -> Result<(Vec<ExtensionClass>, Option<CohomologyClass>)> {
    let top = stage.top.clone();
    let (quotient, to_top, khat) = if stage.n >= 0 {
        let n = stage.n as usize;
        let (khat, inc) = modified_k_invariant(&stage.xhat, n, modulus)?;
        let parts = stage.parts();
        let off = offsets(&parts, n + 1)[parts.len() - 1];
        let rows: Vec<usize> = (off..off + top.gens()).collect();
        let m = inc.select_rows(&rows);
        let q = khat.target.module.clone();
        let to_top = ModuleMap::new(q.clone(), top.clone(), m)?;
        if !to_top.is_iso() {
            return Err(Error::Precondition("image of H_{n+1} differs from the top module".into()));
        }
        (q, to_top, Some(khat))
    } else {
        (top.clone(), ModuleMap::identity(top.clone()), None)
    };
    let ext1 = Ext1::new(&quotient, sub)?;
    let mut out = Vec::new();
    for coords in ext1.module().coordinate_tuples()? {
        let ext = ExtensionClass::from_cocycle(sub, &quotient, &ext1.cocycle_of(&coords))?;
        let total = &ext.total;
        let rels = total.relations();
        let image = Lattice::column_span(ext.inclusion.matrix()).sum(rels);
        let multiples = Lattice::scaled_full(total.gens(), modulus).sum(rels);
        if image != multiples {
            continue;
        }
        if let Some(k) = &khat {
            if !is_allowable(&ext, k, stage.n as usize)? {
                continue;
            }
        }
        let projection = ext.projection.then(&to_top);
        out.push(ExtensionClass {
            sub: ext.sub.clone(),
            quotient: top.clone(),
            total: ext.total.clone(),
            inclusion: ext.inclusion.clone(),
            projection,
        });
    }
    Ok((out, khat))
}

/// Builds stage `n+1` from a lift and an extension, or `None` when no class
/// `σ ∈ [G, P_{n+2} T X̂⟨n+1⟩]` is compatible with the lift and an
/// isomorphism on `H_{≤n+2}`.
pub fn extend_tower(
    ledger: &TowerLedger,
    hc2: &Arc<HomotopyClasses>,
    choice: StageChoice,
) -> Result<Option<TowerLedger>> {
    let s = ledger.last();
    let problem = &ledger.problem;
    let level = s.level() + 1;
    let mut modules = s.modules.clone();
    modules.push(choice.extension.total.clone());
    let top = over_z(&choice.split.kernel);
    let parts = stage_parts(&modules, &top);
    let xhat = sum_complexes(&parts);
    let old_parts = s.parts();
    let mut blocks: Vec<(usize, usize, ChainMap)> = (0..s.modules.len())
        .map(|k| (k, k, ChainMap::identity(parts[k].clone())))
        .collect();
    let last = s.modules.len();
    let pm = em_map(&choice.extension.projection, last)?;
    blocks.push((last, last, pm));
    let phat = block_map(&xhat, &parts, &s.xhat, &old_parts, &blocks)?;
    let tx = Arc::new(base_change(&xhat, &problem.ring)?);
    let tp = base_change_map(&phat, &problem.ring)?;
    let tp = ChainMap::from_parts(tx.clone(), s.tx.clone(), tp.components().to_vec());
    let ptp = postnikov_map(&tp, level)?;
    let (p, _) = postnikov_section(&tx, level);
    let hc = Arc::new(problem.classes_into(&p)?);
    let induced = induced_on_classes(&hc, hc2, &ptp)?;
    let found = fiber(&induced, &choice.lift_coords)?
        .into_iter()
        .find(|c| iso_through(&hc.class_to_map(c), level));
    let Some(coords) = found else {
        return Ok(None);
    };
    let mut stages = ledger.stages.clone();
    stages.push(Stage {
        n: s.n + 1,
        modules,
        top,
        xhat,
        tx,
        rho: RhoHat { classes: hc, coords },
        structure_map: Some(phat),
        choice: Some(choice),
    });
    Ok(Some(TowerLedger {
        problem: problem.clone(),
        stages,
    }))
}

fn state_key(s: &Stage) -> (Vec<String>, String, Vec<Int>) {
    (s.modules.iter().map(|m| form(m)).collect(), form(&s.top), s.rho.coords.clone())
}

/// Depth-first search over every choice point of the tower. Lifts are
/// reported once per homology type and each is checked independently by
/// searching for a homotopy equivalence `T X ≃ G`.
pub fn enumerate_lifts(problem: &Arc<LiftProblem>) -> Result<LiftSearch> {
    let d = problem.target.top() as isize;
    let mut stack = vec![base_ledger(problem)?];
    let mut search = LiftSearch {
        lifts: Vec::new(),
        certificates: Vec::new(),
        nodes: 0,
        exhausted: true,
    };
    let mut visited = BTreeSet::new();
    let mut found = BTreeSet::new();
    while let Some(ledger) = stack.pop() {
        search.nodes += 1;
        if search.nodes > NODE_BUDGET {
            search.exhausted = false;
            break;
        }
        let s = ledger.last();
        if !visited.insert((s.n, state_key(s))) {
            continue;
        }
        if s.n >= d {
            if !s.top.is_zero() {
                search.certificates.push(dead(s, DeadEnd::TopDoesNotVanish, None));
                continue;
            }
            let x = ledger.realization().expect("top vanished");
            let key: Vec<String> = (0..=x.top()).map(|k| form(&x.homology_module(k))).collect();
            let tx = Arc::new(base_change(&x, &problem.ring)?);
            match find_homotopy_equivalence(&tx, &problem.target)? {
                Some(h) if h.verify() => {
                    if found.insert(key) {
                        search.lifts.push(Lift { complex: x, ledger });
                    }
                }
                _ => search.certificates.push(dead(s, DeadEnd::FinalCheckFailed, None)),
            }
            continue;
        }
        let chi = obstruction_class(&ledger)?;
        if !chi.is_zero() {
            let group = form(chi.classes.group());
            search
                .certificates
                .push(dead(s, DeadEnd::NonzeroObstruction, Some((chi.coords.clone(), group))));
            continue;
        }
        let (hc2, lifts) = rho_lifts(&ledger)?;
        if lifts.is_empty() {
            search.certificates.push(dead(s, DeadEnd::NoLift, None));
            continue;
        }
        let lift_count = lifts.len();
        let mut children = Vec::new();
        for lift in lifts {
            let split = kernel_image_split(&hc2, &lift, s.level() + 1);
            let sub = canonical_lift(&split.cokernel, &problem.modulus);
            let (exts, khat) = classify_pi_extension(s, &sub, &problem.modulus)?;
            if exts.is_empty() {
                search.certificates.push(dead(s, DeadEnd::NoAllowableExtension, None));
                continue;
            }
            let allowable_count = exts.len();
            for ext in exts {
                let choice = StageChoice {
                    chi: chi.clone(),
                    lift_coords: lift.clone(),
                    lift_count,
                    split: split.clone(),
                    sub: sub.clone(),
                    khat: khat.clone(),
                    extension: ext,
                    allowable_count,
                };
                match extend_tower(&ledger, &hc2, choice)? {
                    Some(next) => children.push(next),
                    None => search.certificates.push(dead(s, DeadEnd::NoCompatibleEquivalence, None)),
                }
            }
        }
        // Depth first, earliest choice explored first.
        children.reverse();
        stack.extend(children);
    }
    Ok(search)
}

/// Independent check of a claimed lift: `X` is a complex over `Z` and
/// `X ⊗ Z/m` is homotopy equivalent to the target.
pub fn verify_lift(problem: &LiftProblem, x: &Complex) -> Result<bool> {
    if !x.ring().is_integers() {
        return Ok(false);
    }
    let tx = Arc::new(base_change(x, &problem.ring)?);
    Ok(matches!(find_homotopy_equivalence(&tx, &problem.target)?, Some(h) if h.verify()))
}

#[cfg(test)]
mod tests;
