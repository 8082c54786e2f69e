//! Exact homological computations for filtered Artin–Tate Galois modules over
//! Z/m at a field point.
//!
//! A finite quotient `G` of an absolute Galois group is given by permutation
//! generators together with a cyclotomic character `χ: G → (Z/m)^×`. On top of
//! that the crate builds permutational modules, finitely filtered objects whose
//! graded pieces are twisted permutational modules, the graded-split exact
//! structure on them, and the Hom/Ext groups of that exact category, compared
//! against truncated group cohomology.

#![allow(clippy::needless_range_loop)]

pub mod acceptance;
pub mod adjunction;
pub mod budget;
pub mod cohomology;
pub mod error;
pub mod ext;
pub mod filtered;
pub mod gmodule;
pub mod group;
pub mod problem;
pub mod report;
pub mod resolution;
pub mod ring;
pub mod theta;
pub mod zm;

pub use error::{Error, Result};
