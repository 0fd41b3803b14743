//! Finitary partial Horn logic: parsing, finite partial models, the free-model chase,
//! canonical regular decompositions of homomorphisms and related tools.

pub mod chase;
pub mod cli;
pub mod decompose;
pub mod error;
pub mod gatrank;
pub mod gauge;
pub mod structure;
pub mod syntax;
pub mod topdec;

pub use error::{Error, Result};
