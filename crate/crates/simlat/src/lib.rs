//! Similar sublattices of rational lattices.
//!
//! A sublattice Λ' of a lattice Λ is *similar* to Λ when some linear map
//! σ with σu · σv = c · (u · v) carries Λ onto Λ'; the factor c is the
//! *norm* of the similarity and fixes the index [Λ : Λ'] = c^(n/2). This
//! crate decides when such maps can exist (local Hilbert-symbol
//! obstructions), finds them by exhaustive Gram-target search, builds
//! them explicitly for a catalog of classical lattices (complex,
//! Eisenstein, and quaternionic multiplications, up to the Leech
//! lattice), and handles the related planar notion of *clean*
//! sublattices, whose points stay away from the boundaries of the
//! sublattice's Voronoi cells.
//!
//! All arithmetic is exact: Gram matrices are rational, vectors are
//! integral, and every enumeration carries an explicit node budget so
//! that a truncated search is reported as such rather than passed off as
//! a proof of absence.

#![forbid(unsafe_code)]

pub mod arith;
pub mod catalog;
pub mod clean;
pub mod construct;
pub mod criteria;
pub mod error;
pub mod golay;
pub mod lattice;
pub mod mat;
pub mod quaternion;
pub mod search;

pub use error::{Error, Result};

/// Compiles and runs every code snippet in the book so the prose can
/// never drift from the library. Each module mirrors one chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/getting-started.md")]
    mod getting_started {}
    #[doc = include_str!("../../../book/src/lattices-and-gram-matrices.md")]
    mod lattices_and_gram_matrices {}
    #[doc = include_str!("../../../book/src/similarity-maps.md")]
    mod similarity_maps {}
    #[doc = include_str!("../../../book/src/necessary-condition.md")]
    mod necessary_condition {}
    #[doc = include_str!("../../../book/src/search-and-spectra.md")]
    mod search_and_spectra {}
    #[doc = include_str!("../../../book/src/explicit-multipliers.md")]
    mod explicit_multipliers {}
    #[doc = include_str!("../../../book/src/clean-sublattices.md")]
    mod clean_sublattices {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    mod command_line {}
}
