//! A workbench for k-parabolic subspace arrangements of finite reflection
//! groups and the discrete homotopy theory of their Coxeter complexes.
//!
//! The crate is organized around the pipeline
//!
//! * [`coxeter`] — finite Coxeter systems, canonical words, Cayley tables;
//! * [`geometry`] — exact root systems, reflection matrices, fixed subspaces
//!   and pointwise stabilizers;
//! * [`arrangements`] — parabolic subgroups, k-parabolic and coordinate
//!   subspace arrangements, intersection lattices;
//! * [`complex`] — the Coxeter complex, the q-nearness graphs on chambers,
//!   and the attached 2-complexes;
//! * [`homotopy`] — q-loops, homotopy grids, the loop/word dictionary,
//!   homotopy decision with certificates, and presentations of the discrete
//!   fundamental group;
//! * [`relaxed`] — the relaxed group W' obtained by dropping all braid
//!   relations except commutations, its normal forms, and the kernel of the
//!   natural surjection onto W.

pub mod arrangements;
pub mod classify;
pub mod complex;
pub mod coxeter;
pub mod error;
pub mod field;
pub mod geometry;
pub mod homotopy;
pub mod linalg;
pub mod presentation;
pub mod relaxed;
mod roots;
pub mod snf;
pub mod toddcox;
pub mod word;

pub use classify::{classify, CoxeterMatrix, IrreducibleType};
pub use coxeter::{CoxeterSystem, ElemId, Group, GroupElement, SystemId};
pub use error::{Error, Result};
pub use field::{NumberField, Scalar};
pub use word::Word;
