//! The book chapters as modules, so that their code blocks run as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/linear-algebra.md")]
pub mod linear_algebra {}

#[doc = include_str!("../../../book/src/groups.md")]
pub mod groups {}

#[doc = include_str!("../../../book/src/cohomology.md")]
pub mod cohomology {}

#[doc = include_str!("../../../book/src/filtered-objects.md")]
pub mod filtered_objects {}

#[doc = include_str!("../../../book/src/ext.md")]
pub mod ext {}

#[doc = include_str!("../../../book/src/comparison.md")]
pub mod comparison {}

#[doc = include_str!("../../../book/src/resolution.md")]
pub mod resolution {}

#[doc = include_str!("../../../book/src/command-line.md")]
pub mod command_line {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}
