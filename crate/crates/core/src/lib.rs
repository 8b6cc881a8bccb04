//! Transmission through braid-closure scattering devices and quantum graphs.
//!
//! See the guide in `book/` for a tour; its snippets run as doc-tests here.

pub mod braid;
pub mod bracket;
pub mod error;
pub mod families;
pub mod graph;
pub mod laurent;
pub mod sweep;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/representation.md")]
    mod representation {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/bracket.md")]
    mod bracket {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
