//! Presented Z/m-modules: `span(gens) / span(rels)` decomposed into invariant
//! factors, with explicit generators and a coordinate map.
//!
//! The decomposition runs prime by prime: over Z/p^e every nonzero entry is a
//! unit times a power of `p`, so a Smith form is obtained by always pivoting on
//! an entry of minimal valuation.

use serde::{Deserialize, Serialize};

use super::arith::{self, crt_idempotent, factorize, inv, valuation, Order};
use super::howell::{howell_form, kernel, Solver};
use super::matrix::{vec_add, vec_scale, ZmMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct LocalComponent {
    prime: u64,
    /// `p^e`, the exact power dividing the modulus.
    q: u64,
    /// Column transform: local coordinates are `y = x · transform`.
    transform: ZmMatrix,
    /// Rows of `transform^{-1}`: row `i` is the local generator for column `i`.
    transform_inv: ZmMatrix,
    /// Exponent of the cyclic summand attached to each column (0 = trivial).
    exponents: Vec<u32>,
}

/// A finitely generated Z/m-module `span(gens) / span(rels)` with its
/// invariant-factor decomposition `⊕ Z/d_i`, `d_1 | d_2 | …`, `d_i | m`.
#[derive(Clone, Debug)]
pub struct ZmModulePresentation {
    modulus: u64,
    ambient_dim: usize,
    invariant_factors: Vec<u64>,
    /// One ambient vector per invariant factor; generator `i` has order `d_i`.
    generators: Vec<Vec<u64>>,
    basis: ZmMatrix,
    basis_solver: Option<std::sync::Arc<Solver>>,
    relations: ZmMatrix,
    locals: Vec<LocalComponent>,
    /// For each invariant factor and each local component, the column feeding it.
    factor_columns: Vec<Vec<Option<usize>>>,
}

/// Invariant factors and order of a module, without the coordinate machinery.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModuleShape {
    pub modulus: u64,
    pub invariant_factors: Vec<u64>,
}

impl ModuleShape {
    pub fn zero(modulus: u64) -> Self {
        ModuleShape {
            modulus,
            invariant_factors: vec![],
        }
    }

    pub fn from_factors(modulus: u64, factors: &[u64]) -> Self {
        ModuleShape {
            modulus,
            invariant_factors: normalize_factors(factors),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn order(&self) -> Order {
        Order::from_factors(&self.invariant_factors)
    }

    /// Direct sum.
    pub fn sum(&self, other: &ModuleShape) -> ModuleShape {
        let mut all = self.invariant_factors.clone();
        all.extend_from_slice(&other.invariant_factors);
        ModuleShape::from_factors(self.modulus.max(other.modulus), &all)
    }

    pub fn free(modulus: u64, rank: usize) -> Self {
        ModuleShape {
            modulus,
            invariant_factors: vec![modulus; rank],
        }
    }
}

impl std::fmt::Display for ModuleShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Re-normalises an arbitrary list of cyclic orders into invariant factors.
pub fn normalize_factors(factors: &[u64]) -> Vec<u64> {
    use std::collections::BTreeMap;
    let mut per_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &d in factors {
        for (p, e) in factorize(d) {
            per_prime.entry(p).or_default().push(e);
        }
    }
    combine_elementary(&per_prime.into_iter().collect::<Vec<_>>())
}

fn combine_elementary(per_prime: &[(u64, Vec<u32>)]) -> Vec<u64> {
    let mut lists: Vec<(u64, Vec<u32>)> = per_prime
        .iter()
        .map(|(p, es)| {
            let mut es: Vec<u32> = es.iter().copied().filter(|&e| e > 0).collect();
            es.sort_unstable_by(|a, b| b.cmp(a));
            (*p, es)
        })
        .collect();
    lists.retain(|(_, es)| !es.is_empty());
    let t = lists.iter().map(|(_, es)| es.len()).max().unwrap_or(0);
    let mut out: Vec<u64> = (0..t)
        .map(|k| {
            lists
                .iter()
                .map(|(p, es)| es.get(k).map(|&e| p.pow(e)).unwrap_or(1))
                .product()
        })
        .collect();
    out.reverse();
    out
}

impl ZmModulePresentation {
    /// Presents `span(gens) / span(rels)`; every row of `rels` must lie in the
    /// row module of `gens`.
    pub fn subquotient(gens: &ZmMatrix, rels: &ZmMatrix) -> Result<Self> {
        let m = gens.modulus();
        if rels.modulus() != m {
            return Err(Error::ModulusMismatch(m, rels.modulus()));
        }
        if rels.rows() > 0 && rels.cols() != gens.cols() {
            return Err(Error::DimensionMismatch(format!(
                "generators have {} columns, relations {}",
                gens.cols(),
                rels.cols()
            )));
        }
        let basis = howell_form(gens);
        let s = basis.rows();
        let solver = std::sync::Arc::new(Solver::new(&basis));
        let mut rel_rows: Vec<Vec<u64>> = kernel(&basis).row_vecs();
        for i in 0..rels.rows() {
            let c = solver.solve(rels.row(i)).ok_or(Error::NotSubmodule(i))?;
            rel_rows.push(c);
        }
        let relations = ZmMatrix::from_residue_rows(m, s, &rel_rows);
        Ok(Self::build(m, gens.cols(), basis, Some(solver), relations))
    }

    /// The module `(Z/m)^n / span(rels)`.
    pub fn cokernel(rels: &ZmMatrix) -> Result<Self> {
        let m = rels.modulus();
        let n = rels.cols();
        Self::subquotient(&ZmMatrix::identity(m, n), rels)
    }

    fn build(
        m: u64,
        ambient_dim: usize,
        basis: ZmMatrix,
        basis_solver: Option<std::sync::Arc<Solver>>,
        relations: ZmMatrix,
    ) -> Self {
        let s = basis.rows();
        let mut locals = Vec::new();
        for (p, e) in factorize(m) {
            let q = p.pow(e);
            locals.push(local_smith(&relations, p, q, e, s));
        }
        // per prime: columns sorted by descending exponent
        let mut per_prime_cols: Vec<Vec<(usize, u32)>> = locals
            .iter()
            .map(|l| {
                let mut cols: Vec<(usize, u32)> = l
                    .exponents
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (i, e))
                    .collect();
                cols.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
                cols
            })
            .collect();
        let t = per_prime_cols.iter().map(|c| c.len()).max().unwrap_or(0);
        // factor k (descending order) takes the k-th column of each prime
        let mut factors_desc = Vec::with_capacity(t);
        let mut columns_desc = Vec::with_capacity(t);
        for k in 0..t {
            let mut d = 1u64;
            let mut cols = Vec::with_capacity(locals.len());
            for (li, pc) in per_prime_cols.iter_mut().enumerate() {
                match pc.get(k) {
                    Some(&(col, e)) => {
                        d *= locals[li].prime.pow(e);
                        cols.push(Some(col));
                    }
                    None => cols.push(None),
                }
            }
            factors_desc.push(d);
            columns_desc.push(cols);
        }
        factors_desc.reverse();
        columns_desc.reverse();
        let mut generators = Vec::with_capacity(t);
        for cols in &columns_desc {
            let mut coeff = vec![0u64; s];
            for (li, col) in cols.iter().enumerate() {
                if let Some(col) = col {
                    let l = &locals[li];
                    let eps = crt_idempotent(l.q, m);
                    let local_row = l.transform_inv.row(*col);
                    let lifted: Vec<u64> =
                        local_row.iter().map(|&x| arith::mul(x, eps, m)).collect();
                    coeff = vec_add(&coeff, &lifted, m);
                }
            }
            generators.push(basis.left_apply(&coeff));
        }
        ZmModulePresentation {
            modulus: m,
            ambient_dim,
            invariant_factors: factors_desc,
            generators,
            basis,
            basis_solver,
            relations,
            locals,
            factor_columns: columns_desc,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn generators(&self) -> &[Vec<u64>] {
        &self.generators
    }

    pub fn shape(&self) -> ModuleShape {
        ModuleShape {
            modulus: self.modulus,
            invariant_factors: self.invariant_factors.clone(),
        }
    }

    pub fn order(&self) -> Order {
        Order::from_factors(&self.invariant_factors)
    }

    pub fn is_zero(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Relations among the Howell basis of the generating module.
    pub fn relation_matrix(&self) -> &ZmMatrix {
        &self.relations
    }

    /// Rows spanning the submodule that is quotiented out (in ambient coordinates).
    pub fn relation_span(&self) -> ZmMatrix {
        let rows: Vec<Vec<u64>> = (0..self.relations.rows())
            .map(|i| self.basis.left_apply(self.relations.row(i)))
            .collect();
        ZmMatrix::from_residue_rows(self.modulus, self.ambient_dim, &rows)
    }

    /// Coordinates of an ambient vector with respect to the invariant-factor
    /// generators (entry `i` taken mod `d_i`). Errors if the vector is not in
    /// the generating module.
    pub fn coordinates(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in a module of ambient dimension {}",
                v.len(),
                self.ambient_dim
            )));
        }
        let c = match &self.basis_solver {
            Some(s) => s.solve(v),
            None => Solver::new(&self.basis).solve(v),
        }
        .ok_or(Error::NotSubmodule(0))?;
        let local_coords: Vec<Vec<u64>> = self
            .locals
            .iter()
            .map(|l| {
                let cq: Vec<u64> = c.iter().map(|&x| x % l.q).collect();
                l.transform.left_apply(&cq)
            })
            .collect();
        let mut out = Vec::with_capacity(self.invariant_factors.len());
        for (k, cols) in self.factor_columns.iter().enumerate() {
            let d = self.invariant_factors[k];
            // CRT recombination of the local coordinates
            let mut value = 0u64;
            for (li, col) in cols.iter().enumerate() {
                if let Some(col) = col {
                    let l = &self.locals[li];
                    let pe = l.prime.pow(l.exponents[*col]);
                    let local = local_coords[li][*col] % pe;
                    let eps = crt_idempotent(pe, d);
                    value = arith::add(value, arith::mul(local % d, eps, d), d);
                }
            }
            out.push(value % d);
        }
        Ok(out)
    }

    /// Whether `v` represents the zero class.
    pub fn is_zero_class(&self, v: &[u64]) -> Result<bool> {
        Ok(self.coordinates(v)?.iter().all(|&x| x == 0))
    }

    /// Ambient representative of the class with the given coordinates.
    pub fn element(&self, coords: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        let mut out = vec![0u64; self.ambient_dim];
        for (g, &c) in self.generators.iter().zip(coords) {
            out = vec_add(&out, &vec_scale(g, c, m), m);
        }
        out
    }
}

/// Smith form of `rels` reduced mod `q = p^e`, tracking column operations.
fn local_smith(rels: &ZmMatrix, p: u64, q: u64, e: u32, s: usize) -> LocalComponent {
    let mut k: Vec<Vec<u64>> = (0..rels.rows())
        .map(|i| rels.row(i).iter().map(|&x| x % q).collect())
        .collect();
    k.retain(|r| r.iter().any(|&x| x != 0));
    let mut transform = ZmMatrix::identity(q, s);
    let mut tinv = ZmMatrix::identity(q, s);
    let mut exponents = vec![e; s];
    let mut t = 0;
    let nrows = k.len();
    while t < s && t < nrows {
        // pivot of minimal valuation in the lower-right block
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in k.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let v = valuation(x, p);
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        k.swap(t, pi);
        if pj != t {
            for row in k.iter_mut() {
                row.swap(t, pj);
            }
            swap_cols(&mut transform, t, pj);
            swap_rows(&mut tinv, t, pj);
        }
        let pv = p.pow(v);
        let unit_part = k[t][t] / pv;
        let uinv = inv(unit_part % q, q).expect("unit part");
        if uinv != 1 {
            for row in k.iter_mut() {
                row[t] = arith::mul(row[t], uinv, q);
            }
            scale_col(&mut transform, t, uinv);
            scale_row(&mut tinv, t, unit_part % q);
        }
        debug_assert_eq!(k[t][t], pv % q);
        let pivot_row = k[t].clone();
        for row in k.iter_mut().skip(t + 1) {
            let c = row[t] / pv;
            if c != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = arith::sub(*x, arith::mul(c, y, q), q);
                }
            }
        }
        for j in t + 1..s {
            let c = k[t][j] / pv;
            if c != 0 {
                for row in k.iter_mut() {
                    let y = row[t];
                    row[j] = arith::sub(row[j], arith::mul(c, y, q), q);
                }
                // Q: col_j -= c col_t; Q^{-1}: row_t += c row_j
                for r in 0..s {
                    let y = transform.get(r, t);
                    let x = transform.get(r, j);
                    transform.set(r, j, arith::sub(x, arith::mul(c, y, q), q));
                }
                for col in 0..s {
                    let y = tinv.get(j, col);
                    tinv.add_to(t, col, arith::mul(c, y, q));
                }
            }
        }
        exponents[t] = v;
        t += 1;
    }
    LocalComponent {
        prime: p,
        q,
        transform,
        transform_inv: tinv,
        exponents,
    }
}

fn swap_cols(a: &mut ZmMatrix, i: usize, j: usize) {
    for r in 0..a.rows() {
        let (x, y) = (a.get(r, i), a.get(r, j));
        a.set(r, i, y);
        a.set(r, j, x);
    }
}

fn swap_rows(a: &mut ZmMatrix, i: usize, j: usize) {
    for c in 0..a.cols() {
        let (x, y) = (a.get(i, c), a.get(j, c));
        a.set(i, c, y);
        a.set(j, c, x);
    }
}

fn scale_col(a: &mut ZmMatrix, i: usize, u: u64) {
    let m = a.modulus();
    for r in 0..a.rows() {
        let x = a.get(r, i);
        a.set(r, i, arith::mul(x, u, m));
    }
}

fn scale_row(a: &mut ZmMatrix, i: usize, u: u64) {
    let m = a.modulus();
    for c in 0..a.cols() {
        let x = a.get(i, c);
        a.set(i, c, arith::mul(x, u, m));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(m: u64, rows: &[&[i64]]) -> ZmMatrix {
        ZmMatrix::from_rows(m, rows).unwrap()
    }

    #[test]
    fn examples() {
        let p =
            ZmModulePresentation::subquotient(&ZmMatrix::identity(2, 1), &ZmMatrix::zeros(2, 0, 1))
                .unwrap();
        assert_eq!(p.invariant_factors(), &[2]);
        let p =
            ZmModulePresentation::subquotient(&ZmMatrix::identity(4, 1), &mat(4, &[&[2]])).unwrap();
        assert_eq!(p.invariant_factors(), &[2]);
        let g = mat(6, &[&[1, 2], &[0, 3]]);
        let p = ZmModulePresentation::subquotient(&g, &g).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn rels_outside_gens_rejected() {
        let r = ZmModulePresentation::subquotient(&mat(4, &[&[2]]), &mat(4, &[&[1]]));
        assert!(matches!(r, Err(Error::NotSubmodule(0))));
    }

    #[test]
    fn mixed_primes() {
        // (Z/12)^2 / <(2,0),(0,3)> = Z/2 + Z/3 = Z/6
        let p = ZmModulePresentation::cokernel(&mat(12, &[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(p.invariant_factors(), &[6]);
        let gens = p.generators().to_vec();
        assert_eq!(p.coordinates(&gens[0]).unwrap(), vec![1]);
        // Z/4 + Z/6 = Z/2 + Z/12
        let p = ZmModulePresentation::cokernel(&mat(12, &[&[4, 0], &[0, 6]])).unwrap();
        assert_eq!(p.invariant_factors(), &[2, 12]);
        for (i, g) in p.generators().iter().enumerate() {
            let mut e = vec![0; 2];
            e[i] = 1;
            assert_eq!(p.coordinates(g).unwrap(), e);
        }
    }

    #[test]
    fn normalize() {
        assert_eq!(normalize_factors(&[2, 3, 4]), vec![2, 12]);
        assert_eq!(normalize_factors(&[1, 1]), Vec::<u64>::new());
    }
}
