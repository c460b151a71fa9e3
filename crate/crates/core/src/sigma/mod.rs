//! Σ¹/Σ² verdict engines and the constructive rewrites behind them.

pub mod certificate;
pub mod derivation;
pub mod geometry;
pub mod quotient;
pub mod triangulate;

pub use certificate::*;
pub use derivation::*;
