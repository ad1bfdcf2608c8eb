//! Algebraic-geometry codes over small finite fields and the entanglement-assisted
//! quantum (QUENTA) codes built from them.

pub mod agcode;
pub mod bounds;
pub mod error;
pub mod funcfield;
pub mod galois;
pub mod lincode;
pub mod matspace;
pub mod quenta;
pub mod tables;
pub mod verify;
mod series;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/codes.md")]
    mod codes {}
    #[doc = include_str!("../../../book/src/curves.md")]
    mod curves {}
    #[doc = include_str!("../../../book/src/quenta.md")]
    mod quenta {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
