//! Exact linear algebra over Z/m for arbitrary `m ≥ 2`.
//!
//! Everything downstream (cochains, Hom spaces, Ext groups) reduces to row
//! modules of dense [`ZmMatrix`] values. Spans are compared through the Howell
//! normal form; quotients are decomposed into invariant factors by working one
//! prime power of `m` at a time and recombining by CRT.

pub mod arith;
mod howell;
mod matrix;
mod presentation;

pub use arith::Order;
pub use howell::{
    howell_form, inverse, kernel, row_span_contains, same_row_module, solve, span_order, Solver,
};
pub use matrix::{vec_add, vec_axpy, vec_scale, vec_sub, ZmMatrix};
pub use presentation::{normalize_factors, ModuleShape, ZmModulePresentation};

/// `span(gens) / span(rels)`.
pub fn subquotient(gens: &ZmMatrix, rels: &ZmMatrix) -> crate::Result<ZmModulePresentation> {
    ZmModulePresentation::subquotient(gens, rels)
}

/// Applies a linear map `x ↦ x·A` to every row of `rows`.
pub fn map_rows(rows: &ZmMatrix, a: &ZmMatrix) -> ZmMatrix {
    rows.mul_unchecked(a)
}
