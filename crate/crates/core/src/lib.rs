//! Modular data of affine Lie algebras and of the diagonal cosets
//! `C(L(k+l,0), L(k,0) ⊗ L(l,0))`.
//!
//! The crate is layered bottom-up:
//!
//! - [`liealg`]: root systems, the normalized invariant form, Weyl-group
//!   walks and Freudenthal multiplicities.
//! - [`affine`]: level-`k` weights, conformal weights, the Kac–Peterson
//!   S-matrix and the simple-current action of `P∨/Q∨`.
//! - [`fusion`]: Verlinde fusion coefficients and quantum dimensions.
//! - [`coset`]: the set Ω of coset module labels, orbit classification,
//!   quantum/global dimensions, the coset S-matrix and coset fusion.
//! - [`characters`]: graded affine characters and branching functions.
//!
//! Heavy loops go through [`Exec`], which dispatches to rayon when the
//! `parallel` feature is enabled and runs sequentially otherwise. Results
//! are identical under both strategies.

pub mod affine;
pub mod characters;
pub mod coset;
mod error;
mod exec;
pub mod fusion;
pub mod liealg;

pub use error::{Error, HypothesisViolation, Result};
pub use exec::Exec;

pub use affine::{LevelSpec, ModularS, SimpleCurrentTable, WeightListing};
pub use characters::{FormalCharacter, QSeries};
pub use coset::{Coset, CosetModularS, CosetSpec, ModuleTriple, OrbitSet};
pub use fusion::{FusionTensor, ModularData};
pub use liealg::{AlgebraSpec, RootDatum, Series, Weight};
