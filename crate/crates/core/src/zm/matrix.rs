use std::fmt;

use serde::{Deserialize, Serialize};

use super::arith::{self, MAX_MODULUS};
use crate::error::{Error, Result};

/// Dense matrix over Z/m, row-major, every entry in `[0, m)`.
///
/// Row conventions follow the linear algebra routines: a matrix `A` acts on
/// row vectors by `x ↦ xA`, and its row module is the span of its rows.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZmMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for ZmMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "ZmMatrix mod {} ({}x{}) [",
            self.modulus, self.rows, self.cols
        )?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

pub(crate) fn check_modulus(m: u64) -> Result<()> {
    if !(2..=MAX_MODULUS).contains(&m) {
        return Err(Error::InvalidModulus(m));
    }
    Ok(())
}

impl ZmMatrix {
    pub fn zeros(modulus: u64, rows: usize, cols: usize) -> Self {
        ZmMatrix {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(modulus: u64, n: usize) -> Self {
        let mut out = Self::zeros(modulus, n, n);
        for i in 0..n {
            out.data[i * n + i] = 1 % modulus;
        }
        out
    }

    /// Builds a matrix from signed integer rows, reducing every entry mod `modulus`.
    pub fn from_rows<R: AsRef<[i64]>>(modulus: u64, rows: &[R]) -> Result<Self> {
        check_modulus(modulus)?;
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {} but row 0 has length {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&x| arith::reduce(x as i128, modulus)));
        }
        Ok(ZmMatrix {
            modulus,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from already-reduced rows of residues.
    pub fn from_residue_rows(modulus: u64, cols: usize, rows: &[Vec<u64>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length");
            data.extend(r.iter().map(|&x| x % modulus));
        }
        ZmMatrix {
            modulus,
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_data(modulus: u64, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        let data = data.into_iter().map(|x| x % modulus).collect();
        ZmMatrix {
            modulus,
            rows,
            cols,
            data,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.modulus;
    }

    #[inline]
    pub fn add_to(&mut self, r: usize, c: usize, v: u64) {
        let m = self.modulus;
        let e = &mut self.data[r * self.cols + c];
        *e = arith::add(*e, v % m, m);
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.modulus, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    pub fn mul(&self, other: &ZmMatrix) -> Result<ZmMatrix> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &ZmMatrix) -> ZmMatrix {
        let m = self.modulus;
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            let orow = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o = (*o + a * b) % m;
                }
            }
        }
        ZmMatrix {
            modulus: m,
            rows: self.rows,
            cols: other.cols,
            data: out,
        }
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.rows);
        let m = self.modulus;
        let mut out = vec![0u64; self.cols];
        for (k, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(self.row(k)) {
                *o = (*o + a * b) % m;
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let m = self.modulus;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a * b) % m)
            })
            .collect()
    }

    pub fn add(&self, other: &ZmMatrix) -> ZmMatrix {
        assert_eq!(
            (self.rows, self.cols, self.modulus),
            (other.rows, other.cols, other.modulus)
        );
        let m = self.modulus;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| arith::add(a, b, m))
            .collect();
        ZmMatrix { data, ..*self }
    }

    pub fn sub(&self, other: &ZmMatrix) -> ZmMatrix {
        assert_eq!(
            (self.rows, self.cols, self.modulus),
            (other.rows, other.cols, other.modulus)
        );
        let m = self.modulus;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| arith::sub(a, b, m))
            .collect();
        ZmMatrix { data, ..*self }
    }

    pub fn scale(&self, c: u64) -> ZmMatrix {
        let m = self.modulus;
        let data = self.data.iter().map(|&a| arith::mul(a, c % m, m)).collect();
        ZmMatrix { data, ..*self }
    }

    pub fn neg(&self) -> ZmMatrix {
        let m = self.modulus;
        let data = self.data.iter().map(|&a| arith::neg(a, m)).collect();
        ZmMatrix { data, ..*self }
    }

    /// Kronecker product `self ⊗ other`; index `(i*p + k, j*q + l)`.
    pub fn kron(&self, other: &ZmMatrix) -> ZmMatrix {
        let m = self.modulus;
        let (p, q) = (other.rows, other.cols);
        let mut out = Self::zeros(m, self.rows * p, self.cols * q);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..p {
                    for l in 0..q {
                        out.set(i * p + k, j * q + l, arith::mul(a, other.get(k, l), m));
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &ZmMatrix) -> ZmMatrix {
        assert_eq!(self.rows, other.rows);
        let mut data = Vec::with_capacity(self.rows * (self.cols + other.cols));
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        ZmMatrix {
            modulus: self.modulus,
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    pub fn vstack(&self, other: &ZmMatrix) -> ZmMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        ZmMatrix {
            modulus: self.modulus,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &ZmMatrix) -> ZmMatrix {
        let mut out = Self::zeros(self.modulus, self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        out
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> ZmMatrix {
        let mut out = Self::zeros(self.modulus, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out.data[r * cols + c] = self.get(r0 + r, c0 + c);
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &ZmMatrix) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self.set(r0 + r, c0 + c, b.get(r, c));
            }
        }
    }

    /// Selects rows and columns by index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> ZmMatrix {
        let mut out = Self::zeros(self.modulus, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.data[i * cols.len() + j] = self.get(r, c);
            }
        }
        out
    }

    /// Permutes rows and columns simultaneously: `out[i][j] = self[perm[i]][perm[j]]`.
    pub fn conjugate_by_permutation(&self, perm: &[usize]) -> ZmMatrix {
        self.select(perm, perm)
    }

    /// Reduces entries modulo a divisor `n` of the modulus.
    pub fn reduce_mod(&self, n: u64) -> Result<ZmMatrix> {
        if n < 2 || !self.modulus.is_multiple_of(n) {
            return Err(Error::NotADivisor { n, m: self.modulus });
        }
        Ok(ZmMatrix {
            modulus: n,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a % n).collect(),
        })
    }

    /// Reinterprets residues mod `self.modulus` as residues mod a multiple `big`
    /// using the canonical lifts in `[0, m)`.
    pub fn lift_to(&self, big: u64) -> ZmMatrix {
        assert!(big.is_multiple_of(self.modulus));
        ZmMatrix {
            modulus: big,
            ..self.clone()
        }
    }

    /// Removes all-zero rows.
    pub fn without_zero_rows(&self) -> ZmMatrix {
        let rows: Vec<Vec<u64>> = self
            .row_vecs()
            .into_iter()
            .filter(|r| r.iter().any(|&x| x != 0))
            .collect();
        Self::from_residue_rows(self.modulus, self.cols, &rows)
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = self.get(r, c);
                    if r == c {
                        v == 1 % self.modulus
                    } else if r > c {
                        v == 0
                    } else {
                        true
                    }
                })
            })
    }
}

pub fn vec_add(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| arith::add(x, y, m))
        .collect()
}

pub fn vec_sub(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| arith::sub(x, y, m))
        .collect()
}

pub fn vec_scale(a: &[u64], c: u64, m: u64) -> Vec<u64> {
    a.iter().map(|&x| arith::mul(x, c % m, m)).collect()
}

/// `a += c * b` in place.
pub fn vec_axpy(a: &mut [u64], c: u64, b: &[u64], m: u64) {
    if c.is_multiple_of(m) {
        return;
    }
    let c = c % m;
    for (x, &y) in a.iter_mut().zip(b) {
        *x = (*x + c * y) % m;
    }
}
