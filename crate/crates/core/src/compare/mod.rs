//! Long exact sequences assembled from explicit module maps, each carrying
//! its own exactness verdicts.

mod les;
mod spiral;

pub use les::{
    comparison_ladder, comparison_les, ladder_commutes, mod_p_homotopy, snake_oracle, GammaGroups, ModPHomotopy,
    SnakeOracle,
};
pub use spiral::{check_reedy_fibrant, spiral_sequence, LoopCheck, SpiralReport};

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::lattice::{preimage, Lattice};
use crate::module::{CanonicalForm, FgModule, Module, ModuleMap, SubQuotient};
use crate::ring::RingSpec;

/// Exactness at one interior term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Joint {
    /// Index into `terms`.
    pub position: usize,
    pub composite_zero: bool,
    pub exact: bool,
    /// `ker(out) / relations` and `im(in) / relations`.
    pub kernel: CanonicalForm,
    pub image: CanonicalForm,
}

/// `terms[0] → terms[1] → …` with `maps[i]: terms[i] → terms[i+1]`.
#[derive(Clone, Debug)]
pub struct ExactSequenceReport {
    pub construction: String,
    pub labels: Vec<String>,
    pub terms: Vec<Module>,
    pub maps: Vec<ModuleMap>,
    pub joints: Vec<Joint>,
}

impl ExactSequenceReport {
    pub fn assemble(construction: &str, labels: Vec<String>, terms: Vec<Module>, maps: Vec<ModuleMap>) -> Self {
        debug_assert_eq!(labels.len(), terms.len());
        debug_assert_eq!(maps.len() + 1, terms.len());
        let joints = (1..terms.len().saturating_sub(1)).map(|i| joint(&maps[i - 1], &maps[i], i)).collect();
        ExactSequenceReport {
            construction: construction.into(),
            labels,
            terms,
            maps,
            joints,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.joints.iter().all(|j| j.exact && j.composite_zero)
    }

    /// Recompute every verdict from the stored terms and maps.
    pub fn recheck(&self) -> bool {
        (1..self.terms.len().saturating_sub(1)).all(|i| joint(&self.maps[i - 1], &self.maps[i], i) == self.joints[i - 1])
    }
}

fn joint(fin: &ModuleMap, fout: &ModuleMap, position: usize) -> Joint {
    let m = fout.source();
    let ring = m.ring().clone();
    let ker = preimage(fout.matrix(), fout.target().relations());
    let im = Lattice::column_span(fin.matrix()).sum(m.relations());
    let composite_zero = fin.then(fout).is_zero();
    Joint {
        position,
        composite_zero,
        exact: ker == im,
        kernel: SubQuotient::new(ring.clone(), &ker, m.relations()).module.canonical_form().clone(),
        image: SubQuotient::new(ring, &im, m.relations()).module.canonical_form().clone(),
    }
}

pub(crate) fn zero_module(ring: &RingSpec) -> Module {
    Arc::new(FgModule::zero(ring.clone()))
}
