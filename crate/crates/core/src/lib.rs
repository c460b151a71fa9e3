//! Combinatorial Σ¹/Σ² machinery for finitely generated groups: χ-tracks,
//! level sets, filtered Cayley windows, free simplicial set stages and
//! certificate-producing verdict engines.

pub mod backend;
pub mod budget;
pub mod cayley;
pub mod character;
pub mod error;
pub mod presentation;
pub mod rewriting;
pub mod sigma;
pub mod simplicial;
pub mod track;
pub mod word;

pub use backend::{Backend, Factor, Soundness};
pub use budget::{Budgets, Exhausted};
pub use character::{char_value, validate_character, Character, CharacterCheck};
pub use error::{Error, Result};
pub use presentation::{GeneratorSymbol, GroupElement, Presentation};
pub use word::{free_reduce, Letter, Word};

/// Exact rationals used for every character value.
pub type Rational = num_rational::BigRational;
