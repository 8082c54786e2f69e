//! Howell normal form and the routines built on it.
//!
//! The Howell form of `A` over Z/m is the unique echelon basis of the row
//! module of `A` such that pivots divide `m`, entries above a pivot are
//! reduced modulo it, and for every `k` the rows with zeros in the first `k`
//! columns span every vector of the module with that property. The last
//! condition is what makes kernel extraction and membership tests correct
//! over a ring with zero divisors.

use super::arith::{self, ext_gcd, normalizing_unit};
use super::matrix::{vec_axpy, ZmMatrix};
use crate::error::{Error, Result};

fn combine_rows(rows: &mut [Vec<u64>], r: usize, i: usize, j: usize, m: u64) {
    let a = rows[r][j];
    let b = rows[i][j];
    let (g, s, t) = ext_gcd(a as i128, b as i128);
    let u = -(b as i128 / g);
    let v = a as i128 / g;
    let (s, t, u, v) = (
        arith::reduce(s, m),
        arith::reduce(t, m),
        arith::reduce(u, m),
        arith::reduce(v, m),
    );
    let cols = rows[r].len();
    for c in 0..cols {
        let x = rows[r][c];
        let y = rows[i][c];
        rows[r][c] = (s * x + t * y) % m;
        rows[i][c] = (u * x + v * y) % m;
    }
}

/// Howell normal form (nonzero rows only).
pub fn howell_form(a: &ZmMatrix) -> ZmMatrix {
    let m = a.modulus();
    let cols = a.cols();
    let mut rows: Vec<Vec<u64>> = a
        .row_vecs()
        .into_iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    let mut r = 0;
    for j in 0..cols {
        if r >= rows.len() {
            break;
        }
        for i in r + 1..rows.len() {
            if rows[i][j] != 0 {
                combine_rows(&mut rows, r, i, j, m);
            }
        }
        let a_rj = rows[r][j];
        if a_rj == 0 {
            continue;
        }
        let u = normalizing_unit(a_rj, m);
        if u != 1 {
            for x in rows[r].iter_mut() {
                *x = (*x * u) % m;
            }
        }
        let g = rows[r][j];
        let pivot_row = rows[r].clone();
        for k in 0..r {
            let q = rows[k][j] / g;
            if q != 0 {
                vec_axpy(&mut rows[k], m - q % m, &pivot_row, m);
            }
        }
        let ann = m / g;
        if ann != m {
            let extra: Vec<u64> = pivot_row.iter().map(|&x| (x * ann) % m).collect();
            if extra.iter().any(|&x| x != 0) {
                rows.push(extra);
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows.retain(|row| row.iter().any(|&x| x != 0));
    ZmMatrix::from_residue_rows(m, cols, &rows)
}

pub(crate) fn pivot_col(row: &[u64]) -> Option<usize> {
    row.iter().position(|&x| x != 0)
}

/// Reduces `v` against a Howell basis; returns the residual and the
/// coefficients used (`v = coeffs · h + residual`).
pub(crate) fn reduce_against(h: &ZmMatrix, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let m = h.modulus();
    let mut res = v.to_vec();
    let mut coeffs = vec![0u64; h.rows()];
    for k in 0..h.rows() {
        let row = h.row(k);
        let p = pivot_col(row).expect("Howell rows are nonzero");
        let g = row[p];
        let q = res[p] / g;
        if q != 0 {
            vec_axpy(&mut res, m - q, row, m);
            coeffs[k] = q;
        }
    }
    (res, coeffs)
}

/// Whether `v` lies in the row module of `a`.
pub fn row_span_contains(a: &ZmMatrix, v: &[u64]) -> bool {
    let h = howell_form(a);
    reduce_against(&h, v).0.iter().all(|&x| x == 0)
}

/// Generators of the left kernel `{x : xA = 0}` (rows of the result).
pub fn kernel(a: &ZmMatrix) -> ZmMatrix {
    let m = a.modulus();
    let n = a.rows();
    let aug = a.hstack(&ZmMatrix::identity(m, n));
    let h = howell_form(&aug);
    let mut rows = Vec::new();
    for k in 0..h.rows() {
        let row = h.row(k);
        if row[..a.cols()].iter().all(|&x| x == 0) {
            rows.push(row[a.cols()..].to_vec());
        }
    }
    ZmMatrix::from_residue_rows(m, n, &rows)
}

/// A row vector `x` with `xA = b`, or `None` if no solution exists.
pub fn solve(a: &ZmMatrix, b: &[u64]) -> Result<Option<Vec<u64>>> {
    if b.len() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {} but the matrix has {} columns",
            b.len(),
            a.cols()
        )));
    }
    let m = a.modulus();
    let n = a.rows();
    let aug = a.hstack(&ZmMatrix::identity(m, n));
    let h = howell_form(&aug);
    let cols = a.cols();
    let mut res: Vec<u64> = b
        .iter()
        .map(|&x| x % m)
        .chain(std::iter::repeat_n(0, n))
        .collect();
    for k in 0..h.rows() {
        let row = h.row(k);
        let p = pivot_col(row).expect("nonzero");
        if p >= cols {
            break;
        }
        let g = row[p];
        let q = res[p] / g;
        if q != 0 {
            vec_axpy(&mut res, m - q, row, m);
        }
    }
    if res[..cols].iter().any(|&x| x != 0) {
        return Ok(None);
    }
    Ok(Some(
        res[cols..].iter().map(|&x| arith::neg(x, m)).collect(),
    ))
}

/// Solves many right-hand sides against the same matrix, sharing one Howell form.
#[derive(Debug)]
pub struct Solver {
    h: ZmMatrix,
    cols: usize,
    n: usize,
}

impl Solver {
    pub fn new(a: &ZmMatrix) -> Self {
        let m = a.modulus();
        let aug = a.hstack(&ZmMatrix::identity(m, a.rows()));
        Solver {
            h: howell_form(&aug),
            cols: a.cols(),
            n: a.rows(),
        }
    }

    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        let m = self.h.modulus();
        let mut res: Vec<u64> = b
            .iter()
            .map(|&x| x % m)
            .chain(std::iter::repeat_n(0, self.n))
            .collect();
        for k in 0..self.h.rows() {
            let row = self.h.row(k);
            let p = pivot_col(row).expect("nonzero");
            if p >= self.cols {
                break;
            }
            let q = res[p] / row[p];
            if q != 0 {
                vec_axpy(&mut res, m - q, row, m);
            }
        }
        if res[..self.cols].iter().any(|&x| x != 0) {
            return None;
        }
        Some(res[self.cols..].iter().map(|&x| arith::neg(x, m)).collect())
    }
}

/// Inverse of a square matrix, if it is invertible over Z/m.
pub fn inverse(a: &ZmMatrix) -> Option<ZmMatrix> {
    if !a.is_square() {
        return None;
    }
    let n = a.rows();
    let m = a.modulus();
    let h = howell_form(&a.hstack(&ZmMatrix::identity(m, n)));
    if h.rows() < n {
        return None;
    }
    for i in 0..n {
        for j in 0..n {
            if h.get(i, j) != u64::from(i == j) {
                return None;
            }
        }
    }
    Some(h.block(0, n, n, n))
}

/// Cardinality of the row module, from the Howell form: each Howell row
/// with pivot `g` contributes a factor `m / g`.
pub fn span_order(a: &ZmMatrix) -> arith::Order {
    let h = howell_form(a);
    let m = a.modulus();
    (0..h.rows()).fold(arith::Order::one(), |acc, k| {
        let g = h.row(k)[pivot_col(h.row(k)).unwrap()];
        acc.mul(&arith::Order::of(m / g))
    })
}

/// Whether two matrices have the same row module.
pub fn same_row_module(a: &ZmMatrix, b: &ZmMatrix) -> bool {
    howell_form(a) == howell_form(b)
}
