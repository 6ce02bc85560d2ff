//! The comparison sequence `Γ_n → H_n x → H_n Tx → Γ_{n−1}` for base change
//! and the mod-`p` homotopy sequence.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::{zero_module, ExactSequenceReport};
use crate::chain::{homotopy_classes, mapping_cone, ChainComplex, ChainMap, HomotopyClasses};
use crate::error::{Error, Result};
use crate::homalg::{tensor, tor1};
use crate::int::Int;
use crate::lattice::{preimage, Lattice};
use crate::matrix::Matrix;
use crate::module::{induced_map, FgModule, Module, ModuleMap, SubQuotient};
use crate::ring::RingSpec;
use crate::simplicial::{moore_complex, SimplicialModule};

/// `Γ_n` for `n` in `start..start + groups.len()`.
#[derive(Clone, Debug)]
pub struct GammaGroups {
    pub start: usize,
    pub groups: Vec<Module>,
}

impl GammaGroups {
    pub fn get(&self, n: usize) -> Option<&Module> {
        n.checked_sub(self.start).and_then(|i| self.groups.get(i))
    }
}

/// `Tx` regarded as a complex over `Z`: every term gains the relations `m·Z^g`.
fn restricted_base_change(x: &ChainComplex, target: &RingSpec) -> Result<ChainComplex> {
    let m = target.characteristic();
    let terms: Vec<FgModule> = x
        .terms()
        .iter()
        .map(|t| {
            let rels = t.relations().sum(&Lattice::scaled_full(t.gens(), &m));
            FgModule::from_lattice(RingSpec::Integers, rels)
        })
        .collect();
    let d = x.differentials().iter().map(|f| f.matrix().clone()).collect();
    ChainComplex::from_matrices(RingSpec::Integers, terms, d)
}

struct Cone {
    x: Arc<ChainComplex>,
    tx: Arc<ChainComplex>,
    cone: ChainComplex,
}

fn unit_cone(x: &ChainComplex, target: &RingSpec) -> Result<Cone> {
    if !x.ring().is_integers() {
        return Err(Error::Precondition("the comparison sequence starts from a complex over Z".into()));
    }
    let xa = Arc::new(x.clone());
    let tx = Arc::new(restricted_base_change(x, target)?);
    let ids = x.terms().iter().map(|t| Matrix::identity(t.gens())).collect();
    let eta = ChainMap::from_matrices(xa.clone(), tx.clone(), ids)?;
    let (cone, _, _) = mapping_cone(&eta);
    Ok(Cone { x: xa, tx, cone })
}

/// `cone_n = Tx_n ⊕ x_{n−1}`: inclusion of the first and projection to the second summand.
fn cone_inclusion(c: &Cone, n: usize) -> Matrix {
    let (b, a) = (c.tx.term(n).gens(), c.x.term(n.wrapping_sub(1)).gens());
    let a = if n == 0 { 0 } else { a };
    Matrix::identity(b).vstack(&Matrix::zeros(a, b))
}

fn cone_projection(c: &Cone, n: usize) -> Matrix {
    let (b, a) = (c.tx.term(n).gens(), c.x.term(n - 1).gens());
    Matrix::zeros(a, b).hstack(&Matrix::identity(a))
}

/// The comparison sequence for `x ↦ x ⊗ R` over degrees `lo..=hi`.
///
/// `Γ_n = H_n` of the cocone of the unit `x → Tx`, i.e. `H_{n+1}(cone)`.
/// Terms run `Γ_hi, H_hi x, H_hi Tx, Γ_{hi−1}, …, H_lo Tx, Γ_{lo−1}`, with a
/// trailing zero so surjectivity onto the last term is a checked joint.
pub fn comparison_les(
    x: &ChainComplex,
    target: &RingSpec,
    lo: usize,
    hi: usize,
) -> Result<(GammaGroups, ExactSequenceReport)> {
    if lo > hi {
        return Err(Error::Precondition(format!("empty degree range {}..{}", lo, hi)));
    }
    let c = unit_cone(x, target)?;
    let z = RingSpec::Integers;
    let gamma = |n: usize| c.cone.homology(n + 1);
    let mut labels: Vec<String> = Vec::new();
    let mut terms: Vec<Module> = Vec::new();
    let mut maps: Vec<ModuleMap> = Vec::new();
    for n in (lo..=hi).rev() {
        let (g, hx, htx) = (gamma(n), c.x.homology(n), c.tx.homology(n));
        if n != hi {
            // ∂_{n+1}: H_{n+1} Tx → Γ_n, already pushed as the previous term.
            let prev = c.tx.homology(n + 1);
            maps.push(induced_map(&prev, &g, &cone_inclusion(&c, n + 1))?);
        }
        labels.push(format!("Gamma_{}", n));
        terms.push(g.module.clone());
        maps.push(induced_map(&g, &hx, &cone_projection(&c, n + 1))?);
        labels.push(format!("H_{} x", n));
        terms.push(hx.module.clone());
        maps.push(induced_map(&hx, &htx, &Matrix::identity(x.term(n).gens()))?);
        labels.push(format!("H_{} Tx", n));
        terms.push(htx.module.clone());
    }
    let last = c.tx.homology(lo);
    if lo == 0 {
        // Γ_{−1} = H_0(cone) = coker(H_0 x → H_0 Tx) must vanish.
        labels.push("0".into());
        terms.push(zero_module(&z));
        maps.push(ModuleMap::zero(last.module.clone(), zero_module(&z)));
    } else {
        let g = gamma(lo - 1);
        maps.push(induced_map(&last, &g, &cone_inclusion(&c, lo))?);
        labels.push(format!("Gamma_{}", lo - 1));
        terms.push(g.module.clone());
        let hx = c.x.homology(lo - 1);
        maps.push(induced_map(&g, &hx, &cone_projection(&c, lo))?);
        labels.push(format!("H_{} x", lo - 1));
        terms.push(hx.module.clone());
    }
    let gammas = GammaGroups {
        start: lo,
        groups: (lo..=hi).map(|n| gamma(n).module).collect(),
    };
    let construction = format!("comparison sequence for base change to {}", target);
    Ok((gammas, ExactSequenceReport::assemble(&construction, labels, terms, maps)))
}

/// Vertical maps of the ladder induced by `f: x → y` between the two
/// comparison sequences, in the order of the report's terms.
pub fn comparison_ladder(f: &ChainMap, target: &RingSpec, lo: usize, hi: usize) -> Result<Vec<ModuleMap>> {
    let (cx, cy) = (unit_cone(f.source(), target)?, unit_cone(f.target(), target)?);
    let fm = |n: usize| f.comp(n).matrix().clone();
    let on_cone = |n: usize| {
        let top = fm(n);
        if n == 0 {
            return top;
        }
        let bot = fm(n - 1);
        let mut m = Matrix::zeros(top.rows() + bot.rows(), top.cols() + bot.cols());
        m.set_block(0, 0, &top);
        m.set_block(top.rows(), top.cols(), &bot);
        m
    };
    let mut out = Vec::new();
    let mut push = |from: SubQuotient, to: SubQuotient, m: Matrix| -> Result<()> {
        out.push(induced_map(&from, &to, &m)?);
        Ok(())
    };
    for n in (lo..=hi).rev() {
        push(cx.cone.homology(n + 1), cy.cone.homology(n + 1), on_cone(n + 1))?;
        push(cx.x.homology(n), cy.x.homology(n), fm(n))?;
        push(cx.tx.homology(n), cy.tx.homology(n), fm(n))?;
    }
    if lo == 0 {
        out.push(ModuleMap::zero(zero_module(&RingSpec::Integers), zero_module(&RingSpec::Integers)));
    } else {
        push(cx.cone.homology(lo), cy.cone.homology(lo), on_cone(lo))?;
        push(cx.x.homology(lo - 1), cy.x.homology(lo - 1), fm(lo - 1))?;
    }
    Ok(out)
}

/// Every square `a.maps[i]`, `b.maps[i]`, `v[i]`, `v[i+1]` commutes.
pub fn ladder_commutes(a: &ExactSequenceReport, b: &ExactSequenceReport, v: &[ModuleMap]) -> bool {
    a.maps.len() == b.maps.len()
        && v.len() == a.terms.len()
        && (0..a.maps.len()).all(|i| a.maps[i].then(&v[i + 1]).sub(&v[i].then(&b.maps[i])).is_zero())
}

/// Independent prediction of the comparison data for `⊗ Z/p` on a complex of
/// free modules, from the short exact sequence `0 → x -p-> x → x/p → 0` alone:
/// the fiber of reduction is `p·x ≅ x`, so `Γ_n ≅ H_n x`; the image of
/// `h_n` is `H_n x ⊗ Z/p`; the image of `∂_n` is `Tor(H_{n−1} x, Z/p)`.
#[derive(Clone, Debug)]
pub struct SnakeOracle {
    pub gamma: Vec<Module>,
    pub image_h: Vec<Module>,
    pub image_boundary: Vec<Module>,
}

pub fn snake_oracle(x: &ChainComplex, p: i64, lo: usize, hi: usize) -> Result<SnakeOracle> {
    if !x.ring().is_integers() || !x.is_free() {
        return Err(Error::UnsupportedOracleInput("the snake oracle needs a free complex over Z".into()));
    }
    let zp: Module = Arc::new(FgModule::cyclic(RingSpec::Integers, p));
    let mut out = SnakeOracle {
        gamma: Vec::new(),
        image_h: Vec::new(),
        image_boundary: Vec::new(),
    };
    for n in lo..=hi {
        let h = x.homology_module(n);
        out.gamma.push(h.clone());
        out.image_h.push(tensor(&h, &zp)?);
        let below = if n == 0 { zero_module(&RingSpec::Integers) } else { x.homology_module(n - 1) };
        out.image_boundary.push(tor1(&below, &zp)?);
    }
    Ok(out)
}

/// `π_k(X; Z/p) = [P^k, N X]` with the Moore complex `P^k = (R -p-> R)` in
/// degrees `k, k−1`, and the sequence
/// `0 → π_k X ⊗ Z/p → π_k(X; Z/p) → Tor(π_{k−1} X, Z/p) → 0`.
#[derive(Clone, Debug)]
pub struct ModPHomotopy {
    pub group: Module,
    pub classes: HomotopyClasses,
    pub ses: ExactSequenceReport,
}

fn is_prime(p: i64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn moore_object(ring: &RingSpec, p: i64, k: usize) -> Result<ChainComplex> {
    let mut ranks = vec![0; k + 1];
    ranks[k] = 1;
    ranks[k - 1] = 1;
    let d = (1..=k)
        .map(|i| if i == k { Matrix::from_i64(1, 1, &[p]) } else { Matrix::zeros(ranks[i - 1], ranks[i]) })
        .collect();
    ChainComplex::free(ring.clone(), &ranks, d)
}

pub fn mod_p_homotopy(x: &SimplicialModule, p: i64, k: usize) -> Result<ModPHomotopy> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{} is not prime", p)));
    }
    if k == 0 {
        return Err(Error::Precondition("mod-p homotopy is defined here for k ≥ 1".into()));
    }
    if k + 1 > x.truncation() {
        return Err(Error::InsufficientTruncation {
            needed: k + 1,
            available: x.truncation(),
        });
    }
    let ring = x.ring().clone();
    let nx = moore_complex(&x.truncated(k + 1)).normalized;
    let pk = Arc::new(moore_object(&ring, p, k)?);
    let classes = homotopy_classes(&pk, &nx)?;
    if !classes.replacement.identity {
        return Err(Error::Precondition("the Moore object must be its own cofibrant replacement".into()));
    }
    let group = classes.group().clone();
    let pi = Int::from(p);

    let cycles = |n: usize| {
        if n == 0 {
            Lattice::full(nx.term(0).gens())
        } else {
            preimage(nx.diff(n).matrix(), nx.term(n - 1).relations())
        }
    };
    let bounds = |n: usize| Lattice::column_span(nx.diff(n + 1).matrix()).sum(nx.term(n).relations());
    let scaled = |l: &Lattice| Lattice::from_generators(l.dim(), l.basis().iter().map(|v| scale(v, &pi)).collect());

    // H_k ⊗ Z/p = Z_k / (B_k + p Z_k).
    let zk = cycles(k);
    let tensor_sq = SubQuotient::new(ring.clone(), &zk, &bounds(k).sum(&scaled(&zk)));
    // Tor(H_{k−1}, Z/p) = {w ∈ Z_{k−1} : p w ∈ B_{k−1}} / B_{k−1}.
    let bk1 = bounds(k - 1);
    let g1 = nx.term(k - 1).gens();
    let tor_l = cycles(k - 1).intersect(&preimage(&Matrix::identity(g1).scale(&pi), &bk1));
    let tor_sq = SubQuotient::new(ring.clone(), &tor_l, &bk1);

    let alpha_cols: Vec<Vec<Int>> = (0..tensor_sq.module.gens())
        .map(|j| {
            let z = tensor_sq.inc.column(j);
            let comps = (0..=k)
                .map(|i| {
                    let m = if i == k { Matrix::from_columns(z.len(), &[z.clone()]) } else { Matrix::zeros(nx.term(i).gens(), pk.term(i).gens()) };
                    ModuleMap::from_parts(pk.term(i), nx.term(i), m)
                })
                .collect();
            let f = ChainMap::new(pk.clone(), nx.clone(), comps)?;
            classes
                .map_to_class(&f)
                .ok_or_else(|| Error::IllDefinedMap("cycle does not define a class".into()))
        })
        .collect::<Result<_>>()?;
    let alpha = ModuleMap::new(tensor_sq.module.clone(), group.clone(), Matrix::from_columns(group.gens(), &alpha_cols))?;

    let beta_cols: Vec<Vec<Int>> = (0..group.gens())
        .map(|j| {
            let mut e = vec![Int::ZERO; group.gens()];
            e[j] = Int::ONE;
            let f = classes.class_to_map(&e);
            let w = f.comp(k - 1).matrix().column(0);
            tor_sq
                .coords(&w)
                .ok_or_else(|| Error::IllDefinedMap("bottom cell does not land in p-torsion".into()))
        })
        .collect::<Result<_>>()?;
    let beta = ModuleMap::new(group.clone(), tor_sq.module.clone(), Matrix::from_columns(tor_sq.module.gens(), &beta_cols))?;

    let zero = zero_module(&ring);
    let terms = vec![zero.clone(), tensor_sq.module.clone(), group.clone(), tor_sq.module.clone(), zero.clone()];
    let maps = vec![
        ModuleMap::zero(zero.clone(), tensor_sq.module.clone()),
        alpha,
        beta,
        ModuleMap::zero(tor_sq.module.clone(), zero),
    ];
    let labels = vec![
        "0".into(),
        format!("pi_{} (x) Z/{}", k, p),
        format!("pi_{}(X; Z/{})", k, p),
        format!("Tor(pi_{}, Z/{})", k - 1, p),
        "0".into(),
    ];
    let ses = ExactSequenceReport::assemble("mod-p homotopy short exact sequence", labels, terms, maps);
    Ok(ModPHomotopy { group, classes, ses })
}

fn scale(v: &[Int], s: &Int) -> Vec<Int> {
    v.iter()
        .map(|x| {
            let mut y = x.clone();
            y *= s;
            y
        })
        .collect()
}
