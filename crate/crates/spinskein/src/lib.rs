//! Exact symbolic engine for the spin planar algebra on `n` spins.
//!
//! The algebra is presented by generators and relations: labelled flat
//! tangles (non-crossing matchings with shaded regions carrying spin
//! labels) modulo the modulus, multiplication and black channel
//! relations.  Everything is computed exactly over the field Q(sqrt n).
//!
//! Module map:
//! - [`exactnum`]: arithmetic in Q(sqrt n),
//! - [`diagram`]: flat tangles, stacking, annular operations, closures,
//! - [`evalfun`]: the partition functionals and normalised traces,
//! - [`basis`]: explicit orthogonal bases and coordinatisation,
//! - [`spinmodel`]: the loop model on the star bipartite graph,
//! - [`shell`]: expression DSL, CLI and the verification harness.

pub mod basis;
pub mod diagram;
pub mod evalfun;
pub mod exactnum;
pub mod shell;
pub mod spinmodel;

mod error;

pub use error::Error;

/// Convenience alias used throughout: fallible operations on the engine.
pub type Result<T> = std::result::Result<T, Error>;
