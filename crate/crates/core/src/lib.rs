//! Finite models of extensive contexts: lextensive concrete categories with a
//! proper (E, M) factorization system and closure operators on admissible
//! subobjects, together with exhaustive checkers for how sums interact with
//! subobjects, closure, properness and separation.

pub mod closure;
pub mod context;
pub mod description;
pub mod error;
pub mod factorization;
pub mod hom;
pub mod limits;
pub mod morphism;
pub mod object;
pub mod proper;
pub mod report;
pub mod runner;
pub mod semilattice;
pub mod subobject;
pub mod theorems;

pub use error::{Error, Result};
pub use morphism::{compose, Morphism};
pub use object::{FiniteObject, Flavour, Mask, Obj, Preorder};

/// Largest bound the runner accepts.
pub const MAX_BOUND: usize = 5;
