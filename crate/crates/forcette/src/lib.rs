//! A finite-scale workbench for set-theoretic forcing.
//!
//! `forcette` computes poset forcing, Boolean-valued semantics, and
//! sheaf-theoretic semantics on small finite instances, and verifies the
//! classical equivalences between them by exhaustive enumeration: the
//! poset forcing relation against the Boolean forcing relation, the
//! supremum value of a sentence against its Boolean value, the truth
//! lemma for generic extensions, and the equivalence of sheaf categories
//! over a poset and over its regular-open completion.
//!
//! The crate is organized around the pipeline
//!
//! ```text
//! Poset  --regular-open completion-->  Boolean algebra
//!   |                                       |
//! names, forcing relation          names, Boolean values
//!   |                                       |
//! generic extensions  <----->  sheaf semantics on both sites
//! ```
//!
//! See the `book/` directory for a guided tour with runnable examples.

pub mod cli;
pub mod error;
pub mod extension;
pub mod formula;
pub mod guide;
pub mod hf;
pub mod name;
pub mod poset;
pub mod ro;
pub mod semantics;
pub mod sheaf;
pub mod sweeps;

pub use error::{Error, Result};
