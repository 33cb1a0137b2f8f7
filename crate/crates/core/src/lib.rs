//! Exact computations with the split quartic Cayley algebra: its
//! multiplication and involution, automorphisms and derivations, and group
//! gradings together with their classification.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod exactfield;
pub mod gradings;
pub mod linalg;
pub mod maps;
pub mod verify;

pub use error::{Error, Result};
pub use exactfield::{Rational, Scalar};
