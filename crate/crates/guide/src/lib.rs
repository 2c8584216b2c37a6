//! The chapters of `book/`, one module each, so that `cargo test` runs every
//! code block in the guide.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/special-functions.md")]
pub mod special_functions {}
#[doc = include_str!("../../../book/src/bailey-matrices.md")]
pub mod bailey_matrices {}
#[doc = include_str!("../../../book/src/integral-operator.md")]
pub mod integral_operator {}
#[doc = include_str!("../../../book/src/campaigns.md")]
pub mod campaigns {}
#[doc = include_str!("../../../book/src/command-line.md")]
pub mod command_line {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
