//! Exact homological algebra over `Z` and `Z/m`: presented modules, chain
//! complexes, simplicial modules, Eilenberg–Mac Lane objects, comparison and
//! spiral exact sequences, and the obstruction tower for lifting a complex
//! along base change `Z → Z/m`.

#![no_std]

extern crate alloc;

pub mod chain;
pub mod compare;
pub mod emext;
pub mod error;
pub mod homalg;
pub mod int;
pub mod lattice;
pub mod lift;
pub mod matrix;
pub mod module;
pub mod ring;
pub mod sample;
pub mod simplicial;
pub mod snf;

pub use error::{Error, Result};
pub use int::Int;
pub use matrix::Matrix;
pub use module::{CanonicalForm, FgModule, Module, ModuleMap};
pub use ring::RingSpec;
