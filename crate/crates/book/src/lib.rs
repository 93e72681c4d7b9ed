//! The snippets of the guide in `book/src`, compiled and run as doc-tests.
//!
//! mdbook cannot run examples that depend on workspace crates, so each
//! chapter is pulled in here as the documentation of an empty module.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/transform.md")]
pub mod transform {}
#[doc = include_str!("../../../book/src/resolution.md")]
pub mod resolution {}
#[doc = include_str!("../../../book/src/translation.md")]
pub mod translation {}
#[doc = include_str!("../../../book/src/convolution.md")]
pub mod convolution {}
#[doc = include_str!("../../../book/src/uncertainty.md")]
pub mod uncertainty {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
