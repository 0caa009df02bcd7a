//! Exact chain-level constructions on finitely generated groups.
//!
//! The crate works with the free chain complex `C_•(X)` of a group `X`
//! carrying a word metric: finitely supported chains on nondegenerate tuples,
//! the simplicial boundary, augmentation, weighted ℓ¹ norms, pushforwards and
//! elementary homotopies, combings and the contracting homotopies they
//! induce, and cohomology computed both from the bar complex and from the
//! tree resolution of a free group. Every scalar is an exact rational, so
//! each identity is checked as an equality.
//!
//! | module | contents |
//! |---|---|
//! | [`groups`] | free, free abelian and finite groups; word length, metric, balls |
//! | [`chains`] | chains, boundary, augmentation, norms, control radius, convolution |
//! | [`homotopy`] | pushforward, `H(f,f′)`, combings, contracting homotopy, norm profiles |
//! | [`resolutions`] | bar coboundary, finite-group cohomology, growth classes, `b₀`, `b₁`, `σ` |
//! | [`linalg`] | sparse rational matrices, rank, homology dimensions |
//! | [`rips`] | finite metric spaces, Rips complexes, simplicial homology |
//! | [`json`] | document formats shared with the command-line tool |
//! | [`fixtures`] | seeded random chains and maps |
//!
//! The `book/` directory next to the crates walks through the same material
//! with runnable examples; those examples are compiled as doctests of this
//! crate.

pub mod chains;
pub mod error;
pub mod fixtures;
pub mod groups;
pub mod homotopy;
pub mod json;
pub mod linalg;
pub mod resolutions;
pub mod rips;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

// mdbook cannot run examples that depend on this crate, so each chapter is
// pulled in here and checked by `cargo test --doc`.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/chains.md")]
    mod chains {}
    #[doc = include_str!("../../../book/src/homotopies.md")]
    mod homotopies {}
    #[doc = include_str!("../../../book/src/combings.md")]
    mod combings {}
    #[doc = include_str!("../../../book/src/cohomology.md")]
    mod cohomology {}
    #[doc = include_str!("../../../book/src/rips.md")]
    mod rips {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
