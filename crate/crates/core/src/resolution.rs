//! A nonadditive functorial free resolution `P(A)` of a complex of finite
//! Z/m-modules, with section, projection and the shuffle-type product.
//!
//! `P_0^j` is free on symbols `[a]`, `a ∈ A^j \ {0}`; `P_i^j` (`i > 0`) is free on
//! symbols `⟨p⟩` for nonzero `p ∈ P_{i−1}^j` killed by `π` (when `i = 1`) or by
//! `∂` (when `i > 1`). Differentials: `∂⟨p⟩ = p`, `∂[a] = 0`, `d[a] = [da]`,
//! `d⟨p⟩ = ⟨−dp⟩`. Elements are formal combinations of nested symbol trees, so
//! two symbols are equal exactly when their contents are.
//!
//! Only terms with `i < depth` are enumerated; the term at `i = depth` is
//! represented by its image under `∂`, which is all cycles of the previous
//! term.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::zm::{kernel, span_order, subquotient, ModuleShape, ZmMatrix, ZmModulePresentation};

/// A bounded complex `A^lo → … → A^hi` of finite Z/m-modules `⊕ Z/d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteComplex {
    modulus: u64,
    lowest: i64,
    modules: Vec<Vec<u64>>,
    /// `differentials[k]` maps generators of degree `lowest + k` to the next degree
    differentials: Vec<ZmMatrix>,
    /// per degree and generator: `(degree, generator)` of each tensor factor
    labels: Vec<Vec<Vec<(i64, usize)>>>,
}

/// JSON form of a complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDescriptor {
    pub modulus: u64,
    #[serde(default)]
    pub lowest_degree: i64,
    /// Invariant factors of each term.
    pub modules: Vec<Vec<u64>>,
    /// One matrix per consecutive pair; row `i` is the image of generator `i`.
    #[serde(default)]
    pub differentials: Vec<Vec<Vec<u64>>>,
}

impl FiniteComplex {
    pub fn new(
        modulus: u64,
        lowest: i64,
        modules: Vec<Vec<u64>>,
        differentials: Vec<ZmMatrix>,
    ) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        for (k, factors) in modules.iter().enumerate() {
            if let Some(&d) = factors
                .iter()
                .find(|&&d| d < 2 || !modulus.is_multiple_of(d))
            {
                return Err(Error::InvalidObject(format!(
                    "term {k}: factor {d} does not divide {modulus}"
                )));
            }
        }
        if differentials.len() + 1 != modules.len().max(1) {
            return Err(Error::DimensionMismatch(format!(
                "{} terms need {} differentials, got {}",
                modules.len(),
                modules.len().saturating_sub(1),
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            let (src, dst) = (&modules[k], &modules[k + 1]);
            if d.rows() != src.len() || d.cols() != dst.len() || d.modulus() != modulus {
                return Err(Error::DimensionMismatch(format!(
                    "differential {k} has the wrong shape"
                )));
            }
            for (i, &di) in src.iter().enumerate() {
                for (l, &el) in dst.iter().enumerate() {
                    if di * d.get(i, l) % el != 0 {
                        return Err(Error::InvalidObject(format!(
                            "differential {k} is not well defined on generator {i}"
                        )));
                    }
                }
            }
        }
        let labels = modules
            .iter()
            .enumerate()
            .map(|(k, f)| (0..f.len()).map(|i| vec![(lowest + k as i64, i)]).collect())
            .collect();
        let c = FiniteComplex {
            modulus,
            lowest,
            modules,
            differentials,
            labels,
        };
        for j in c.lowest..c.highest() {
            for e in c.elements(j) {
                if !c.is_zero_elem(j + 2, &c.differential(j + 1, &c.differential(j, &e))) {
                    return Err(Error::InvalidObject(format!(
                        "d² ≠ 0 starting in degree {j}"
                    )));
                }
            }
        }
        Ok(c)
    }

    pub fn from_descriptor(desc: &ComplexDescriptor) -> Result<Self> {
        let mut diffs = Vec::new();
        for (k, rows) in desc.differentials.iter().enumerate() {
            let cols = desc.modules.get(k + 1).map_or(0, Vec::len);
            if rows.iter().any(|r| r.len() != cols) {
                return Err(Error::schema(
                    format!("differentials[{k}]"),
                    "row length differs from the target rank",
                ));
            }
            diffs.push(ZmMatrix::from_residue_rows(desc.modulus, cols, rows));
        }
        Self::new(
            desc.modulus,
            desc.lowest_degree,
            desc.modules.clone(),
            diffs,
        )
    }

    /// `Z/m` in degree 0.
    pub fn unit(modulus: u64) -> Self {
        Self::new(modulus, 0, vec![vec![modulus]], vec![]).expect("unit complex")
    }

    /// A single module in degree 0.
    pub fn module(modulus: u64, factors: &[u64]) -> Result<Self> {
        Self::new(modulus, 0, vec![factors.to_vec()], vec![])
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn lowest(&self) -> i64 {
        self.lowest
    }

    pub fn highest(&self) -> i64 {
        self.lowest + self.modules.len() as i64 - 1
    }

    /// Invariant factors of `A^j` (empty outside the range).
    pub fn factors(&self, j: i64) -> &[u64] {
        self.slot(j).map_or(&[], |k| &self.modules[k])
    }

    fn slot(&self, j: i64) -> Option<usize> {
        (j >= self.lowest && j <= self.highest()).then(|| (j - self.lowest) as usize)
    }

    /// Number of elements of `A^j`.
    pub fn size(&self, j: i64) -> u128 {
        self.factors(j).iter().map(|&d| d as u128).product()
    }

    pub fn normalize(&self, j: i64, v: &[u64]) -> Vec<u64> {
        v.iter()
            .zip(self.factors(j))
            .map(|(&x, &d)| x % d)
            .collect()
    }

    pub fn is_zero_elem(&self, j: i64, v: &[u64]) -> bool {
        self.normalize(j, v).iter().all(|&x| x == 0)
    }

    pub fn add(&self, j: i64, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(self.factors(j))
            .map(|((&x, &y), &d)| (x + y) % d)
            .collect()
    }

    pub fn neg(&self, j: i64, a: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(self.factors(j))
            .map(|(&x, &d)| (d - x % d) % d)
            .collect()
    }

    /// All elements of `A^j` in lexicographic order.
    pub fn elements(&self, j: i64) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for &d in self.factors(j) {
            out = out
                .into_iter()
                .flat_map(|v| (0..d).map(move |x| [v.clone(), vec![x]].concat()))
                .collect();
        }
        out
    }

    pub fn differential(&self, j: i64, a: &[u64]) -> Vec<u64> {
        match (self.slot(j), self.slot(j + 1)) {
            (Some(k), Some(_)) => self.normalize(j + 1, &self.differentials[k].left_apply(a)),
            _ => vec![0; self.factors(j + 1).len()],
        }
    }

    /// `A ⊗ B` with `d(a ⊗ b) = da ⊗ b + (−1)^{|a|} a ⊗ db`.
    pub fn tensor(&self, other: &FiniteComplex) -> Result<FiniteComplex> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        let m = self.modulus;
        let lo = self.lowest + other.lowest;
        let hi = self.highest() + other.highest();
        let mut modules = Vec::new();
        let mut labels = Vec::new();
        for n in lo..=hi {
            let mut f = Vec::new();
            let mut l = Vec::new();
            for ja in self.lowest..=self.highest() {
                let jb = n - ja;
                for (i, &d) in self.factors(ja).iter().enumerate() {
                    for (k, &e) in other.factors(jb).iter().enumerate() {
                        f.push(crate::zm::arith::gcd(d, e));
                        l.push([self.labels_at(ja, i), other.labels_at(jb, k)].concat());
                    }
                }
            }
            modules.push(f);
            labels.push(l);
        }
        let mut t = FiniteComplex {
            modulus: m,
            lowest: lo,
            modules,
            differentials: vec![],
            labels,
        };
        let mut diffs = Vec::new();
        for n in lo..hi {
            let mut d = ZmMatrix::zeros(m, t.factors(n).len(), t.factors(n + 1).len());
            for ja in self.lowest..=self.highest() {
                let jb = n - ja;
                for i in 0..self.factors(ja).len() {
                    for k in 0..other.factors(jb).len() {
                        let row = t.tensor_index(self, other, ja, i, jb, k);
                        let da = self.differential(ja, &unit(self.factors(ja).len(), i));
                        for (i2, &c) in da.iter().enumerate() {
                            if c != 0 {
                                let col = t.tensor_index(self, other, ja + 1, i2, jb, k);
                                d.set(row, col, (d.get(row, col) + c) % m);
                            }
                        }
                        let db = other.differential(jb, &unit(other.factors(jb).len(), k));
                        let sign = if ja.rem_euclid(2) == 0 { 1 } else { m - 1 };
                        for (k2, &c) in db.iter().enumerate() {
                            if c != 0 {
                                let col = t.tensor_index(self, other, ja, i, jb + 1, k2);
                                d.set(row, col, (d.get(row, col) + sign * c) % m);
                            }
                        }
                    }
                }
            }
            diffs.push(d);
        }
        t.differentials = diffs;
        Ok(t)
    }

    fn labels_at(&self, j: i64, i: usize) -> Vec<(i64, usize)> {
        self.labels[self.slot(j).expect("degree in range")][i].clone()
    }

    /// Position of `e_i ⊗ f_k` (degrees `ja`, `jb`) in `self = a ⊗ b`.
    fn tensor_index(
        &self,
        a: &FiniteComplex,
        b: &FiniteComplex,
        ja: i64,
        i: usize,
        jb: i64,
        k: usize,
    ) -> usize {
        let mut off = 0;
        for j in a.lowest..ja {
            off += a.factors(j).len() * b.factors(ja + jb - j).len();
        }
        off + i * b.factors(jb).len() + k
    }

    /// `a ⊗ b` for `a ∈ A^ja`, `b ∈ B^jb`, inside `self = A ⊗ B`.
    pub fn tensor_element(
        &self,
        a_cx: &FiniteComplex,
        b_cx: &FiniteComplex,
        ja: i64,
        a: &[u64],
        jb: i64,
        b: &[u64],
    ) -> Vec<u64> {
        let n = ja + jb;
        let mut out = vec![0u64; self.factors(n).len()];
        for (i, &x) in a.iter().enumerate() {
            for (k, &y) in b.iter().enumerate() {
                if x * y != 0 {
                    let idx = self.tensor_index(a_cx, b_cx, ja, i, jb, k);
                    out[idx] = (out[idx] + x * y) % self.modulus;
                }
            }
        }
        self.normalize(n, &out)
    }

    /// Transports an element along a relabelling of tensor factors: `keep`
    /// lists which factor positions of `self` survive (in order), and the
    /// remaining positions must be unit factors.
    pub fn transport(
        &self,
        target: &FiniteComplex,
        j: i64,
        v: &[u64],
        keep: &[usize],
    ) -> Result<Vec<u64>> {
        let mut index: HashMap<Vec<(i64, usize)>, usize> = HashMap::new();
        for (g, l) in target.labels[target.slot(j).ok_or(Error::AmbientMismatch)?]
            .iter()
            .enumerate()
        {
            index.insert(l.clone(), g);
        }
        let mut out = vec![0u64; target.factors(j).len()];
        for (g, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let lab = &self.labels[self.slot(j).expect("degree")][g];
            let key: Vec<(i64, usize)> = keep.iter().map(|&p| lab[p]).collect();
            let &t = index
                .get(&key)
                .ok_or_else(|| Error::InvalidObject("labels do not match".into()))?;
            out[t] = (out[t] + x) % self.modulus;
        }
        Ok(target.normalize(j, &out))
    }

    fn relations(&self, j: i64) -> ZmMatrix {
        let f = self.factors(j);
        let rows: Vec<Vec<u64>> = f
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != self.modulus)
            .map(|(i, &d)| (0..f.len()).map(|c| if c == i { d } else { 0 }).collect())
            .collect();
        ZmMatrix::from_residue_rows(self.modulus, f.len(), &rows)
    }

    fn diff_matrix(&self, j: i64) -> ZmMatrix {
        match (self.slot(j), self.slot(j + 1)) {
            (Some(k), Some(_)) => self.differentials[k].clone(),
            _ => ZmMatrix::zeros(
                self.modulus,
                self.factors(j).len(),
                self.factors(j + 1).len(),
            ),
        }
    }

    /// `H^n(A)`.
    pub fn homology(&self, n: i64) -> Result<ZmModulePresentation> {
        let m = self.modulus;
        let r = self.factors(n).len();
        let rel = self.relations(n);
        let k = kernel(&self.diff_matrix(n).vstack(&self.relations(n + 1)));
        let rows: Vec<usize> = (0..k.rows()).collect();
        let cols: Vec<usize> = (0..r).collect();
        let cycles = k.select(&rows, &cols);
        let bounds = self.diff_matrix(n - 1).vstack(&rel);
        let all = cycles.vstack(&bounds);
        if r == 0 {
            return subquotient(&ZmMatrix::zeros(m, 0, 0), &ZmMatrix::zeros(m, 0, 0));
        }
        subquotient(&all, &bounds)
    }
}

fn unit(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// A generator of some `P_i^j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// `[a]` for a nonzero `a ∈ A^j`.
    Bracket(Vec<u64>),
    /// `⟨p⟩` for a nonzero cycle `p` one resolution degree lower.
    Angle(Box<PElement>),
}

/// Maps `(degree, element)` of one complex to an element of another.
pub type BracketMap<'a> = &'a dyn Fn(i64, &[u64]) -> Result<Vec<u64>>;

/// A homogeneous element of `P_i^j`: a finite Z/m-combination of symbols.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PElement {
    modulus: u64,
    res: usize,
    degree: i64,
    terms: BTreeMap<Symbol, u64>,
}

impl PElement {
    pub fn zero(modulus: u64, res: usize, degree: i64) -> Self {
        PElement {
            modulus,
            res,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Resolution degree `i`.
    pub fn resolution_degree(&self) -> usize {
        self.res
    }

    /// Complex degree `j`.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Total degree `j − i`, the sign-relevant degree.
    pub fn total_degree(&self) -> i64 {
        self.degree - self.res as i64
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Symbol, u64)> {
        self.terms.iter().map(|(s, &c)| (s, c))
    }

    fn single(modulus: u64, res: usize, degree: i64, s: Symbol) -> Self {
        let mut e = Self::zero(modulus, res, degree);
        e.terms.insert(s, 1);
        e
    }

    fn add_term(&mut self, s: Symbol, c: u64) {
        let c = c % self.modulus;
        if c == 0 {
            return;
        }
        let m = self.modulus;
        let entry = self.terms.entry(s).or_insert(0);
        *entry = (*entry + c) % m;
        self.terms.retain(|_, v| *v != 0);
    }

    fn check_same(&self, other: &PElement) -> Result<()> {
        if self.modulus != other.modulus || self.res != other.res || self.degree != other.degree {
            return Err(Error::DimensionMismatch(format!(
                "P_{}^{} vs P_{}^{}",
                self.res, self.degree, other.res, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PElement) -> Result<PElement> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (s, &c) in &other.terms {
            out.add_term(s.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: u64) -> PElement {
        let mut out = Self::zero(self.modulus, self.res, self.degree);
        for (s, &x) in &self.terms {
            out.add_term(s.clone(), x * (c % self.modulus));
        }
        out
    }

    pub fn neg(&self) -> PElement {
        self.scale(self.modulus - 1)
    }

    pub fn sub(&self, other: &PElement) -> Result<PElement> {
        self.add(&other.neg())
    }

    /// `⟨p⟩` without validating that `p` is a cycle.
    fn angle_unchecked(p: PElement) -> PElement {
        if p.is_zero() {
            return Self::zero(p.modulus, p.res + 1, p.degree);
        }
        Self::single(p.modulus, p.res + 1, p.degree, Symbol::Angle(Box::new(p)))
    }

    /// `⟨p⟩`, defined when `π(p) = 0` (resolution degree 0) or `∂p = 0`.
    pub fn angle(cx: &FiniteComplex, p: PElement) -> Result<PElement> {
        let ok = if p.res == 0 {
            cx.is_zero_elem(p.degree, &projection(cx, &p))
        } else {
            p.boundary().is_zero()
        };
        if !ok {
            return Err(Error::InvalidObject(
                "angle symbol of an element that is not a cycle".into(),
            ));
        }
        Ok(Self::angle_unchecked(p))
    }

    /// `∂`: `⟨p⟩ ↦ p`, `[a] ↦ 0`.
    pub fn boundary(&self) -> PElement {
        if self.res == 0 {
            return Self::zero(self.modulus, 0, self.degree);
        }
        let mut out = Self::zero(self.modulus, self.res - 1, self.degree);
        for (s, &c) in &self.terms {
            if let Symbol::Angle(p) = s {
                for (t, &x) in &p.terms {
                    out.add_term(t.clone(), x * c);
                }
            }
        }
        out
    }

    /// The internal differential: `[a] ↦ [da]`, `⟨p⟩ ↦ ⟨−dp⟩`.
    pub fn d(&self, cx: &FiniteComplex) -> PElement {
        let mut out = Self::zero(self.modulus, self.res, self.degree + 1);
        for (s, &c) in &self.terms {
            match s {
                Symbol::Bracket(a) => {
                    let da = cx.differential(self.degree, a);
                    if !cx.is_zero_elem(self.degree + 1, &da) {
                        out.add_term(Symbol::Bracket(da), c);
                    }
                }
                Symbol::Angle(p) => {
                    let inner = p.d(cx).neg();
                    if !inner.is_zero() {
                        out.add_term(Symbol::Angle(Box::new(inner)), c);
                    }
                }
            }
        }
        out
    }

    /// Rewrites every bracket through `f` (used to compare along isomorphisms of
    /// the underlying complexes); `f` maps `(degree, element)` to an element.
    pub fn map_brackets(&self, f: BracketMap<'_>) -> Result<PElement> {
        let mut out = Self::zero(self.modulus, self.res, self.degree);
        for (s, &c) in &self.terms {
            match s {
                Symbol::Bracket(a) => {
                    let b = f(self.degree, a)?;
                    if b.iter().any(|&x| x != 0) {
                        out.add_term(Symbol::Bracket(b), c);
                    }
                }
                Symbol::Angle(p) => {
                    let q = p.map_brackets(f)?;
                    if !q.is_zero() {
                        out.add_term(Symbol::Angle(Box::new(q)), c);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `s(a) = [a]`, with `s(0) = 0`.
pub fn section(cx: &FiniteComplex, j: i64, a: &[u64]) -> PElement {
    let a = cx.normalize(j, a);
    if a.iter().all(|&x| x == 0) {
        return PElement::zero(cx.modulus(), 0, j);
    }
    PElement::single(cx.modulus(), 0, j, Symbol::Bracket(a))
}

/// `π([a]) = a`, `π⟨p⟩ = 0`.
pub fn projection(cx: &FiniteComplex, x: &PElement) -> Vec<u64> {
    let n = cx.factors(x.degree).len();
    let mut out = vec![0u64; n];
    if x.res == 0 {
        for (s, &c) in &x.terms {
            if let Symbol::Bracket(a) = s {
                for (o, &v) in out.iter_mut().zip(a) {
                    *o = (*o + c * v) % cx.modulus();
                }
            }
        }
    }
    cx.normalize(x.degree, &out)
}

/// Complexes needed to multiply elements of `P(A)` and `P(B)`.
#[derive(Clone, Copy, Debug)]
pub struct ProductContext<'a> {
    pub left: &'a FiniteComplex,
    pub right: &'a FiniteComplex,
    pub tensor: &'a FiniteComplex,
    /// Largest resolution degree a product may reach.
    pub depth: usize,
}

/// The product `P(A) ⊗ P(B) → P(A ⊗ B)`:
/// `[a]×[b] = [a⊗b]`, `⟨p⟩×[b] = ⟨p×[b]⟩`, `[a]×⟨q⟩ = ⟨(−1)^{|a|}[a]×q⟩`,
/// `⟨p⟩×⟨q⟩ = ⟨p×⟨q⟩ − (−1)^{|p|}⟨p⟩×q⟩`.
pub fn shuffle_product(ctx: ProductContext<'_>, x: &PElement, y: &PElement) -> Result<PElement> {
    let res = x.res + y.res;
    if res > ctx.depth {
        return Err(Error::DepthExhausted(res));
    }
    let m = ctx.tensor.modulus();
    let mut out = PElement::zero(m, res, x.degree + y.degree);
    for (s, &c) in &x.terms {
        for (t, &e) in &y.terms {
            let p = symbol_product(ctx, s, x.res, x.degree, t, y.res, y.degree)?;
            out = out.add(&p.scale(c * e % m))?;
        }
    }
    Ok(out)
}

fn sign(m: u64, exponent: i64) -> u64 {
    if exponent.rem_euclid(2) == 0 {
        1
    } else {
        m - 1
    }
}

fn symbol_product(
    ctx: ProductContext<'_>,
    s: &Symbol,
    sres: usize,
    sdeg: i64,
    t: &Symbol,
    tres: usize,
    tdeg: i64,
) -> Result<PElement> {
    let m = ctx.tensor.modulus();
    match (s, t) {
        (Symbol::Bracket(a), Symbol::Bracket(b)) => {
            let ab = ctx
                .tensor
                .tensor_element(ctx.left, ctx.right, sdeg, a, tdeg, b);
            Ok(section(ctx.tensor, sdeg + tdeg, &ab))
        }
        (Symbol::Angle(p), Symbol::Bracket(_)) => {
            let rhs = PElement::single(m, tres, tdeg, t.clone());
            Ok(PElement::angle_unchecked(shuffle_product(ctx, p, &rhs)?))
        }
        (Symbol::Bracket(_), Symbol::Angle(q)) => {
            let lhs = PElement::single(m, sres, sdeg, s.clone());
            Ok(PElement::angle_unchecked(
                shuffle_product(ctx, &lhs, q)?.scale(sign(m, sdeg)),
            ))
        }
        (Symbol::Angle(p), Symbol::Angle(q)) => {
            let whole_p = PElement::single(m, sres, sdeg, s.clone());
            let whole_q = PElement::single(m, tres, tdeg, t.clone());
            let first = shuffle_product(ctx, p, &whole_q)?;
            let second = shuffle_product(ctx, &whole_p, q)?.scale(sign(m, p.total_degree()));
            Ok(PElement::angle_unchecked(first.sub(&second)?))
        }
    }
}

/// One enumerated term `P_i^j`.
#[derive(Clone, Debug)]
struct Term {
    symbols: Vec<Symbol>,
    index: HashMap<Symbol, usize>,
}

impl Term {
    fn new(symbols: Vec<Symbol>) -> Self {
        let index = symbols
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        Term { symbols, index }
    }

    fn len(&self) -> usize {
        self.symbols.len()
    }
}

/// `P(A)` with terms enumerated below `depth`.
#[derive(Clone, Debug)]
pub struct TruncatedResolution {
    complex: FiniteComplex,
    depth: usize,
    terms: BTreeMap<(usize, i64), Term>,
    /// generators of the cycles of `P_{depth−1}^j`, the image of `P_depth^j`
    cycles: BTreeMap<i64, ZmMatrix>,
    /// number of free generators of `P_depth^j`
    top_rank: BTreeMap<i64, u128>,
}

/// Enumerates a row span.
fn span_elements(gens: &ZmMatrix, limit: usize) -> Result<Vec<Vec<u64>>> {
    let m = gens.modulus();
    let zero = vec![0u64; gens.cols()];
    let mut seen: HashSet<Vec<u64>> = HashSet::from([zero.clone()]);
    let mut out = vec![zero];
    let mut frontier = 0;
    while frontier < out.len() {
        let v = out[frontier].clone();
        frontier += 1;
        for r in 0..gens.rows() {
            let w: Vec<u64> = v
                .iter()
                .zip(gens.row(r))
                .map(|(&a, &b)| (a + b) % m)
                .collect();
            if seen.insert(w.clone()) {
                out.push(w);
                if out.len() > limit + 1 {
                    return Err(Error::budget(
                        "resolution term",
                        out.len() as u128,
                        limit as u128,
                    ));
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

impl TruncatedResolution {
    pub fn complex(&self) -> &FiniteComplex {
        &self.complex
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Free rank of `P_i^j`.
    pub fn rank(&self, i: usize, j: i64) -> u128 {
        if i == self.depth {
            return self.top_rank.get(&j).copied().unwrap_or(0);
        }
        self.terms.get(&(i, j)).map_or(0, |t| t.len() as u128)
    }

    /// The enumerated generators of `P_i^j`, `i < depth`.
    pub fn basis(&self, i: usize, j: i64) -> Vec<PElement> {
        let m = self.complex.modulus();
        self.terms
            .get(&(i, j))
            .map(|t| {
                t.symbols
                    .iter()
                    .map(|s| PElement::single(m, i, j, s.clone()))
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Symbols `⟨q⟩` for the cycle generators `q` of `P_{depth−1}^j`.
    pub fn top_generators(&self, j: i64) -> Vec<PElement> {
        let Some(z) = self.cycles.get(&j) else {
            return Vec::new();
        };
        z.row_vecs()
            .iter()
            .map(|v| PElement::angle_unchecked(self.element(self.depth - 1, j, v)))
            .collect()
    }

    fn len(&self, i: usize, j: i64) -> usize {
        self.terms.get(&(i, j)).map_or(0, Term::len)
    }

    /// Element with the given coordinates in the basis of `P_i^j`.
    pub fn element(&self, i: usize, j: i64, coords: &[u64]) -> PElement {
        let m = self.complex.modulus();
        let mut e = PElement::zero(m, i, j);
        if let Some(t) = self.terms.get(&(i, j)) {
            for (s, &c) in t.symbols.iter().zip(coords) {
                e.add_term(s.clone(), c);
            }
        }
        e
    }

    /// Coordinates of an element of an enumerated term.
    pub fn coordinates(&self, x: &PElement) -> Result<Vec<u64>> {
        let n = self.len(x.res, x.degree);
        let mut out = vec![0u64; n];
        if x.is_zero() {
            return Ok(out);
        }
        let t = self
            .terms
            .get(&(x.res, x.degree))
            .ok_or(Error::OutsideWindow {
                degree: x.res as i64,
                lo: 0,
                hi: self.depth as i64 - 1,
            })?;
        for (s, &c) in &x.terms {
            let &i = t.index.get(s).ok_or_else(|| {
                Error::InvalidObject("symbol outside the enumerated basis".into())
            })?;
            out[i] = c;
        }
        Ok(out)
    }

    fn boundary_matrix(&self, i: usize, j: i64) -> Result<ZmMatrix> {
        let rows = self
            .basis(i, j)
            .iter()
            .map(|b| self.coordinates(&b.boundary()))
            .collect::<Result<Vec<_>>>()?;
        Ok(ZmMatrix::from_residue_rows(
            self.complex.modulus(),
            self.len(i - 1, j),
            &rows,
        ))
    }

    fn d_matrix(&self, i: usize, j: i64) -> Result<ZmMatrix> {
        let rows = self
            .basis(i, j)
            .iter()
            .map(|b| self.coordinates(&b.d(&self.complex)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ZmMatrix::from_residue_rows(
            self.complex.modulus(),
            self.len(i, j + 1),
            &rows,
        ))
    }

    /// Total degrees in which the truncation does not affect homology.
    pub fn safe_window(&self) -> (i64, i64) {
        (
            self.complex.lowest() - self.depth as i64 + 1,
            self.complex.highest(),
        )
    }
}

/// Builds `P(A)` up to resolution degree `depth ≥ 1`.
pub fn build_p(
    complex: &FiniteComplex,
    depth: usize,
    budget: &Budget,
) -> Result<TruncatedResolution> {
    if depth == 0 {
        return Err(Error::DepthExhausted(0));
    }
    let m = complex.modulus();
    let limit = budget.resolution_rank;
    let mut res = TruncatedResolution {
        complex: complex.clone(),
        depth,
        terms: BTreeMap::new(),
        cycles: BTreeMap::new(),
        top_rank: BTreeMap::new(),
    };
    for j in complex.lowest()..=complex.highest() {
        if complex.size(j) > limit as u128 + 1 {
            return Err(Error::budget(
                format!("P_0^{j}"),
                complex.size(j) - 1,
                limit as u128,
            ));
        }
        let symbols: Vec<Symbol> = complex
            .elements(j)
            .into_iter()
            .filter(|a| a.iter().any(|&x| x != 0))
            .map(Symbol::Bracket)
            .collect();
        res.terms.insert((0, j), Term::new(symbols));
        for i in 1..=depth {
            let prev = res.len(i - 1, j);
            // kernel of π (then of ∂) on P_{i−1}^j
            let cycles = if i == 1 {
                let rows: Vec<Vec<u64>> = res
                    .basis(0, j)
                    .iter()
                    .map(|b| projection(complex, b))
                    .collect();
                let pi = ZmMatrix::from_residue_rows(m, complex.factors(j).len(), &rows);
                let k = kernel(&pi.vstack(&complex.relations(j)));
                let r: Vec<usize> = (0..k.rows()).collect();
                let c: Vec<usize> = (0..prev).collect();
                k.select(&r, &c)
            } else {
                kernel(&res.boundary_matrix(i - 1, j)?)
            };
            let count = span_order(&cycles).as_u128().unwrap_or(u128::MAX);
            if i == depth {
                res.top_rank.insert(j, count - 1);
                res.cycles.insert(j, cycles);
                break;
            }
            if count > limit as u128 + 1 {
                return Err(Error::budget(
                    format!("P_{i}^{j}"),
                    count - 1,
                    limit as u128,
                ));
            }
            let symbols: Vec<Symbol> = span_elements(&cycles, limit)?
                .into_iter()
                .filter(|v| v.iter().any(|&x| x != 0))
                .map(|v| Symbol::Angle(Box::new(res.element(i - 1, j, &v))))
                .collect();
            res.terms.insert((i, j), Term::new(symbols));
        }
    }
    Ok(res)
}

/// Outcome of checking the structural identities of a resolution.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub boundary_squared: bool,
    pub d_squared: bool,
    pub anticommute: bool,
    pub retraction: bool,
    pub projection_chain_map: bool,
    pub exact_below_depth: bool,
    pub elements_checked: usize,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.boundary_squared
            && self.d_squared
            && self.anticommute
            && self.retraction
            && self.projection_chain_map
            && self.exact_below_depth
    }
}

/// Checks `∂² = 0`, `d² = 0`, `∂d + d∂ = 0`, `π∘s = id`, `πd = dπ` and
/// exactness of each column below the depth.
pub fn verify_identities(res: &TruncatedResolution) -> Result<IdentityReport> {
    let cx = &res.complex;
    let mut rep = IdentityReport {
        boundary_squared: true,
        d_squared: true,
        anticommute: true,
        retraction: true,
        projection_chain_map: true,
        exact_below_depth: true,
        elements_checked: 0,
    };
    for j in cx.lowest()..=cx.highest() {
        for a in cx.elements(j) {
            rep.retraction &= projection(cx, &section(cx, j, &a)) == cx.normalize(j, &a);
        }
        for i in 0..=res.depth {
            let elems = if i == res.depth {
                res.top_generators(j)
            } else {
                res.basis(i, j)
            };
            for x in elems {
                rep.elements_checked += 1;
                rep.boundary_squared &= x.boundary().boundary().is_zero();
                rep.d_squared &= x.d(cx).d(cx).is_zero();
                rep.anticommute &= x.d(cx).boundary().add(&x.boundary().d(cx))?.is_zero();
                if i == 0 {
                    rep.projection_chain_map &=
                        projection(cx, &x.d(cx)) == cx.differential(j, &projection(cx, &x));
                }
            }
        }
        // column exactness: π onto A^j, then im ∂_{i+1} = ker ∂_i for i < depth
        let pi_rows: Vec<Vec<u64>> = res.basis(0, j).iter().map(|b| projection(cx, b)).collect();
        let pi = ZmMatrix::from_residue_rows(cx.modulus(), cx.factors(j).len(), &pi_rows);
        let image = pi.vstack(&cx.relations(j));
        rep.exact_below_depth &= span_order(&image)
            == span_order(&ZmMatrix::identity(cx.modulus(), cx.factors(j).len()));
        for i in 1..res.depth {
            let cycles = if i == 1 {
                let k = kernel(&pi.vstack(&cx.relations(j)));
                let r: Vec<usize> = (0..k.rows()).collect();
                let c: Vec<usize> = (0..res.len(0, j)).collect();
                k.select(&r, &c)
            } else {
                kernel(&res.boundary_matrix(i - 1, j)?)
            };
            let bounds = res.boundary_matrix(i, j)?;
            rep.exact_below_depth &= span_order(&cycles) == span_order(&bounds);
        }
    }
    Ok(rep)
}

/// Homology comparison in one total degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiIsoDegree {
    pub degree: i64,
    pub resolution: ModuleShape,
    pub complex: ModuleShape,
    pub agree: bool,
}

/// Compares `H^n(Tot P(A))` with `H^n(A)` for `n` in `degrees`.
pub fn verify_quasi_iso(
    res: &TruncatedResolution,
    degrees: std::ops::RangeInclusive<i64>,
) -> Result<Vec<QuasiIsoDegree>> {
    let (lo, hi) = res.safe_window();
    if let Some(&bad) = [*degrees.start(), *degrees.end()]
        .iter()
        .find(|&&n| n < lo || n > hi)
    {
        return Err(Error::OutsideWindow {
            degree: bad,
            lo,
            hi,
        });
    }
    degrees
        .map(|n| {
            let resolution = total_homology(res, n)?.shape();
            let complex = res.complex.homology(n)?.shape();
            Ok(QuasiIsoDegree {
                degree: n,
                agree: resolution == complex,
                resolution,
                complex,
            })
        })
        .collect()
}

/// Block layout of the total complex in degree `n`: `(i, j, ambient size)`;
/// `i = depth` stands for the cycle module of `P_{depth−1}^j`.
fn total_blocks(res: &TruncatedResolution, n: i64) -> Vec<(usize, i64, usize)> {
    (0..=res.depth)
        .filter_map(|i| {
            let j = n + i as i64;
            let size = if i == res.depth {
                res.len(i - 1, j)
            } else {
                res.len(i, j)
            };
            (size > 0).then_some((i, j, size))
        })
        .collect()
}

fn total_generators(res: &TruncatedResolution, n: i64) -> ZmMatrix {
    let m = res.complex.modulus();
    let blocks = total_blocks(res, n);
    let width: usize = blocks.iter().map(|b| b.2).sum();
    let mut out = ZmMatrix::zeros(m, 0, width);
    let mut off = 0;
    for &(i, j, size) in &blocks {
        let g = if i == res.depth {
            res.cycles[&j].clone()
        } else {
            ZmMatrix::identity(m, size)
        };
        let mut blk = ZmMatrix::zeros(m, g.rows(), width);
        blk.set_block(0, off, &g);
        out = out.vstack(&blk);
        off += size;
    }
    out
}

fn total_differential(res: &TruncatedResolution, n: i64) -> Result<ZmMatrix> {
    let m = res.complex.modulus();
    let src = total_blocks(res, n);
    let dst = total_blocks(res, n + 1);
    let offsets = |blocks: &[(usize, i64, usize)]| {
        let mut acc = 0;
        blocks
            .iter()
            .map(|b| {
                let o = acc;
                acc += b.2;
                ((b.0, b.1), o)
            })
            .collect::<HashMap<_, _>>()
    };
    let (so, dof) = (offsets(&src), offsets(&dst));
    let width_s: usize = src.iter().map(|b| b.2).sum();
    let width_d: usize = dst.iter().map(|b| b.2).sum();
    let mut d = ZmMatrix::zeros(m, width_s, width_d);
    for &(i, j, _) in &src {
        let r0 = so[&(i, j)];
        if i == res.depth {
            // ∂ is the inclusion of cycles, d acts as −d of the previous column
            if let Some(&c0) = dof.get(&(i - 1, j)) {
                d.set_block(r0, c0, &ZmMatrix::identity(m, res.len(i - 1, j)));
            }
            if let Some(&c0) = dof.get(&(i, j + 1)) {
                d.set_block(r0, c0, &res.d_matrix(i - 1, j)?.neg());
            }
            continue;
        }
        if i > 0 {
            if let Some(&c0) = dof.get(&(i - 1, j)) {
                d.set_block(r0, c0, &res.boundary_matrix(i, j)?);
            }
        }
        if let Some(&c0) = dof.get(&(i, j + 1)) {
            d.set_block(r0, c0, &res.d_matrix(i, j)?);
        }
    }
    Ok(d)
}

fn total_homology(res: &TruncatedResolution, n: i64) -> Result<ZmModulePresentation> {
    let m = res.complex.modulus();
    let gens = total_generators(res, n);
    if gens.cols() == 0 {
        return subquotient(&ZmMatrix::zeros(m, 0, 0), &ZmMatrix::zeros(m, 0, 0));
    }
    let image = gens.mul_unchecked(&total_differential(res, n)?);
    let k = kernel(&image);
    let cycles = k.mul_unchecked(&gens);
    let prev = total_generators(res, n - 1);
    let bounds = if prev.cols() == 0 {
        ZmMatrix::zeros(m, 0, gens.cols())
    } else {
        prev.mul_unchecked(&total_differential(res, n - 1)?)
    };
    subquotient(&cycles.vstack(&bounds), &bounds)
}

/// A shipped complex.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub name: String,
    #[serde(flatten)]
    pub complex: ComplexDescriptor,
}

/// A stored pair `(a, b)` with `s(a + b) ≠ s(a) + s(b)`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdditivityWitness {
    pub complex: String,
    pub degree: i64,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Corpus {
    pub depth: usize,
    pub complexes: Vec<CorpusEntry>,
    pub non_additivity_witness: AdditivityWitness,
}

/// The shipped corpus of small complexes over Z/2 and Z/4.
pub fn corpus() -> Result<Corpus> {
    serde_json::from_str(include_str!("../data/resolution_corpus.json"))
        .map_err(|e| Error::schema("resolution_corpus.json", e.to_string()))
}

impl Corpus {
    pub fn complex(&self, name: &str) -> Result<FiniteComplex> {
        let entry = self
            .complexes
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::schema("complex", format!("unknown complex {name}")))?;
        FiniteComplex::from_descriptor(&entry.complex)
    }
}

/// Whether `s(a + b) ≠ s(a) + s(b)`.
pub fn is_nonadditive_pair(cx: &FiniteComplex, j: i64, a: &[u64], b: &[u64]) -> Result<bool> {
    let lhs = section(cx, j, &cx.add(j, a, b));
    let rhs = section(cx, j, a).add(&section(cx, j, b))?;
    Ok(lhs != rhs)
}

/// Whether every angle symbol in `x` wraps a cycle, recursively.
pub fn is_well_formed(cx: &FiniteComplex, x: &PElement) -> bool {
    x.terms.keys().all(|s| match s {
        Symbol::Bracket(a) => !cx.is_zero_elem(x.degree, a),
        Symbol::Angle(p) => {
            let cycle = if p.res == 0 {
                cx.is_zero_elem(p.degree, &projection(cx, p))
            } else {
                p.boundary().is_zero()
            };
            cycle && is_well_formed(cx, p)
        }
    })
}

/// Pass/fail of each product identity, with the first failing input.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProductReport {
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub bracket_rule: bool,
    pub well_formed: bool,
    pub boundary_leibniz: bool,
    pub projection_multiplicative: bool,
    pub section_multiplicative: bool,
    pub unit: bool,
    pub associative: bool,
    /// Only checked over Z/2, where the symmetry needs no signs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<bool>,
    /// `d(x×y) − dx×y ∓ x×dy` is nonzero in general but always lies in `ker π`.
    pub d_defect_in_kernel_of_projection: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl ProductReport {
    pub fn all_pass(&self) -> bool {
        self.bracket_rule
            && self.well_formed
            && self.boundary_leibniz
            && self.projection_multiplicative
            && self.section_multiplicative
            && self.unit
            && self.associative
            && self.symmetric.unwrap_or(true)
            && self.d_defect_in_kernel_of_projection
    }

    fn record(
        &mut self,
        ok: bool,
        flag: fn(&mut Self) -> &mut bool,
        what: &str,
        x: &PElement,
        y: &PElement,
    ) {
        let f = flag(self);
        if !ok && *f {
            *f = false;
            self.failures.push(format!(
                "{what}: P_{}^{} × P_{}^{}",
                x.res, x.degree, y.res, y.degree
            ));
        }
    }
}

/// Homogeneous elements of `P(A)` up to resolution degree `depth`: the
/// enumerated bases plus the top generators.
fn sample_elements(res: &TruncatedResolution) -> Vec<PElement> {
    let cx = res.complex();
    let mut out = Vec::new();
    for j in cx.lowest()..=cx.highest() {
        for i in 0..res.depth() {
            out.extend(res.basis(i, j));
        }
        out.extend(res.top_generators(j));
    }
    out
}

/// Checks the product identities on all pairs of generators of `P(A)` with
/// resolution degrees summing to at most the depth, and on `triples` sampled
/// triples.
pub fn verify_products(
    res: &TruncatedResolution,
    triples: usize,
    seed: u64,
) -> Result<ProductReport> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    let a = res.complex();
    let m = a.modulus();
    let depth = res.depth();
    let aa = a.tensor(a)?;
    let ctx = ProductContext {
        left: a,
        right: a,
        tensor: &aa,
        depth,
    };
    let mut rep = ProductReport {
        bracket_rule: true,
        well_formed: true,
        boundary_leibniz: true,
        projection_multiplicative: true,
        section_multiplicative: true,
        unit: true,
        associative: true,
        symmetric: (m == 2).then_some(true),
        d_defect_in_kernel_of_projection: true,
        ..Default::default()
    };
    let elems = sample_elements(res);
    let k = FiniteComplex::unit(m);
    let ka = k.tensor(a)?;
    let ak = a.tensor(&k)?;
    let one = section(&k, 0, &[1]);
    for x in &elems {
        let left = shuffle_product(
            ProductContext {
                left: &k,
                right: a,
                tensor: &ka,
                depth,
            },
            &one,
            x,
        )?;
        let right = shuffle_product(
            ProductContext {
                left: a,
                right: &k,
                tensor: &ak,
                depth,
            },
            x,
            &one,
        )?;
        let ok = left.map_brackets(&|j, v| ka.transport(a, j, v, &[1]))? == *x
            && right.map_brackets(&|j, v| ak.transport(a, j, v, &[0]))? == *x;
        rep.record(ok, |r| &mut r.unit, "unit", &one, x);
    }
    let swap = |j: i64, v: &[u64]| aa.transport(&aa, j, v, &[1, 0]);
    for x in &elems {
        for y in &elems {
            if x.res + y.res > depth {
                continue;
            }
            rep.pairs_checked += 1;
            let xy = shuffle_product(ctx, x, y)?;
            rep.record(
                xy.res == x.res + y.res
                    && xy.degree == x.degree + y.degree
                    && is_well_formed(&aa, &xy),
                |r| &mut r.well_formed,
                "well-formed",
                x,
                y,
            );
            // ∂ vanishes on resolution degree 0, so those terms drop out
            let mut rhs = PElement::zero(m, xy.res.saturating_sub(1), xy.degree);
            if x.res > 0 {
                rhs = rhs.add(&shuffle_product(ctx, &x.boundary(), y)?)?;
            }
            if y.res > 0 {
                rhs = rhs.add(
                    &shuffle_product(ctx, x, &y.boundary())?.scale(sign(m, x.total_degree())),
                )?;
            }
            rep.record(
                rhs == xy.boundary(),
                |r| &mut r.boundary_leibniz,
                "∂-Leibniz",
                x,
                y,
            );
            let pa = projection(a, x);
            let pb = projection(a, y);
            let pxy = aa.tensor_element(a, a, x.degree, &pa, y.degree, &pb);
            rep.record(
                projection(&aa, &xy) == pxy,
                |r| &mut r.projection_multiplicative,
                "π multiplicative",
                x,
                y,
            );
            if x.res == 0 && y.res == 0 {
                let sxy = section(&aa, x.degree + y.degree, &pxy);
                rep.record(xy == sxy, |r| &mut r.bracket_rule, "[a]×[b] = [a⊗b]", x, y);
                rep.record(
                    shuffle_product(ctx, &section(a, x.degree, &pa), &section(a, y.degree, &pb))?
                        == sxy,
                    |r| &mut r.section_multiplicative,
                    "s multiplicative",
                    x,
                    y,
                );
            }
            if rep.symmetric.is_some() {
                let yx = shuffle_product(ctx, y, x)?.map_brackets(&swap)?;
                rep.record(
                    yx == xy,
                    |r| r.symmetric.as_mut().expect("set"),
                    "symmetry",
                    x,
                    y,
                );
            }
            let dx = shuffle_product(ctx, &x.d(a), y)?;
            let xdy = shuffle_product(ctx, x, &y.d(a))?.scale(sign(m, x.total_degree()));
            let defect = xy.d(&aa).sub(&dx.add(&xdy)?)?;
            rep.record(
                aa.is_zero_elem(defect.degree, &projection(&aa, &defect)),
                |r| &mut r.d_defect_in_kernel_of_projection,
                "d-defect in ker π",
                x,
                y,
            );
        }
    }
    // associativity on sampled triples, compared in the flattened triple tensor
    let left3 = aa.tensor(a)?;
    let right3 = a.tensor(&aa)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut tries = 0;
    while rep.triples_checked < triples && tries < 20 * triples && !elems.is_empty() {
        tries += 1;
        let (x, y, z) = (
            elems.choose(&mut rng).expect("nonempty"),
            elems.choose(&mut rng).expect("nonempty"),
            elems.choose(&mut rng).expect("nonempty"),
        );
        if x.res + y.res + z.res > depth {
            continue;
        }
        rep.triples_checked += 1;
        let xy = shuffle_product(ctx, x, y)?;
        let lhs = shuffle_product(
            ProductContext {
                left: &aa,
                right: a,
                tensor: &left3,
                depth,
            },
            &xy,
            z,
        )?;
        let yz = shuffle_product(ctx, y, z)?;
        let rhs = shuffle_product(
            ProductContext {
                left: a,
                right: &aa,
                tensor: &right3,
                depth,
            },
            x,
            &yz,
        )?
        .map_brackets(&|j, v| right3.transport(&left3, j, v, &[0, 1, 2]))?;
        rep.record(lhs == rhs, |r| &mut r.associative, "associativity", x, &yz);
    }
    Ok(rep)
}

/// Full check of one corpus complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PCheckReport {
    pub name: String,
    pub depth: usize,
    /// `(i, j, rank of P_i^j)`.
    pub ranks: Vec<(usize, i64, String)>,
    pub identities: IdentityReport,
    pub quasi_isomorphism: Vec<QuasiIsoDegree>,
    pub products: ProductReport,
    pub passed: bool,
}

/// Builds `P(A)` and checks every identity, the quasi-isomorphism on the
/// safe window and the product identities.
pub fn check_complex(
    name: &str,
    cx: &FiniteComplex,
    depth: usize,
    seed: u64,
    budget: &Budget,
) -> Result<PCheckReport> {
    let res = build_p(cx, depth, budget)?;
    let identities = verify_identities(&res)?;
    let (lo, hi) = res.safe_window();
    let quasi_isomorphism = verify_quasi_iso(&res, lo..=hi)?;
    let products = verify_products(&res, 64, seed)?;
    let mut ranks = Vec::new();
    for j in cx.lowest()..=cx.highest() {
        for i in 0..=depth {
            ranks.push((i, j, res.rank(i, j).to_string()));
        }
    }
    let passed =
        identities.all_pass() && quasi_isomorphism.iter().all(|q| q.agree) && products.all_pass();
    Ok(PCheckReport {
        name: name.to_string(),
        depth,
        ranks,
        identities,
        quasi_isomorphism,
        products,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn small_ranks() {
        let z2 = FiniteComplex::module(2, &[2]).unwrap();
        let r = build_p(&z2, 2, &b()).unwrap();
        assert_eq!((r.rank(0, 0), r.rank(1, 0)), (1, 0));
        let z4 = FiniteComplex::module(4, &[4]).unwrap();
        let r = build_p(&z4, 2, &b()).unwrap();
        assert_eq!((r.rank(0, 0), r.rank(1, 0)), (3, 15));
        let zero = FiniteComplex::module(2, &[]).unwrap();
        let r = build_p(&zero, 2, &b()).unwrap();
        assert_eq!((r.rank(0, 0), r.rank(1, 0), r.rank(2, 0)), (0, 0, 0));
    }

    #[test]
    fn section_is_not_additive() {
        let cx = FiniteComplex::module(2, &[2, 2]).unwrap();
        assert!(section(&cx, 0, &[0, 0]).is_zero());
        assert!(is_nonadditive_pair(&cx, 0, &[1, 0], &[0, 1]).unwrap());
        for a in cx.elements(0) {
            assert_eq!(projection(&cx, &section(&cx, 0, &a)), a);
        }
    }

    #[test]
    fn quasi_isomorphism_examples() {
        let z2 = FiniteComplex::module(2, &[2]).unwrap();
        let r = build_p(&z2, 2, &b()).unwrap();
        let q = verify_quasi_iso(&r, -1..=0).unwrap();
        assert!(q.iter().all(|d| d.agree));
        assert_eq!(q[1].resolution.invariant_factors, vec![2]);
        assert!(matches!(
            verify_quasi_iso(&r, -3..=0),
            Err(Error::OutsideWindow { .. })
        ));

        let id = FiniteComplex::new(4, 0, vec![vec![4], vec![4]], vec![ZmMatrix::identity(4, 1)])
            .unwrap();
        let r = build_p(&id, 2, &b()).unwrap();
        let q = verify_quasi_iso(&r, -1..=1).unwrap();
        assert!(q.iter().all(|d| d.agree && d.resolution.is_zero()));
        assert!(verify_identities(&r).unwrap().all_pass());
    }

    #[test]
    fn bracket_products() {
        let a = FiniteComplex::module(2, &[2, 2]).unwrap();
        let k = FiniteComplex::unit(2);
        let t = a.tensor(&a).unwrap();
        let ctx = ProductContext {
            left: &a,
            right: &a,
            tensor: &t,
            depth: 2,
        };
        let x = section(&a, 0, &[1, 0]);
        let y = section(&a, 0, &[1, 1]);
        let xy = shuffle_product(ctx, &x, &y).unwrap();
        assert_eq!(
            xy,
            section(&t, 0, &t.tensor_element(&a, &a, 0, &[1, 0], 0, &[1, 1]))
        );
        // unit: [1] × [a] = [1 ⊗ a] ↦ [a]
        let ka = k.tensor(&a).unwrap();
        let ctx = ProductContext {
            left: &k,
            right: &a,
            tensor: &ka,
            depth: 2,
        };
        let p = shuffle_product(ctx, &section(&k, 0, &[1]), &y).unwrap();
        let back = p
            .map_brackets(&|j, v| ka.transport(&a, j, v, &[1]))
            .unwrap();
        assert_eq!(back, y);
    }

    #[test]
    fn angle_times_bracket() {
        let a = FiniteComplex::module(2, &[2, 2]).unwrap();
        let t = a.tensor(&a).unwrap();
        let ctx = ProductContext {
            left: &a,
            right: &a,
            tensor: &t,
            depth: 2,
        };
        // p = [e1] + [e2] + [e1 + e2] has π(p) = 0
        let p = section(&a, 0, &[1, 0])
            .add(&section(&a, 0, &[0, 1]))
            .unwrap()
            .add(&section(&a, 0, &[1, 1]))
            .unwrap();
        let angle = PElement::angle(&a, p.clone()).unwrap();
        let bb = section(&a, 0, &[0, 1]);
        let prod = shuffle_product(ctx, &angle, &bb).unwrap();
        assert_eq!(prod.boundary(), shuffle_product(ctx, &p, &bb).unwrap());
        assert!(PElement::angle(&a, section(&a, 0, &[1, 0])).is_err());
        let deep = shuffle_product(ProductContext { depth: 1, ..ctx }, &angle, &angle);
        assert_eq!(deep, Err(Error::DepthExhausted(2)));
    }

    #[test]
    fn shipped_corpus_passes() {
        let corpus = corpus().unwrap();
        for entry in &corpus.complexes {
            let cx = FiniteComplex::from_descriptor(&entry.complex).unwrap();
            let rep = check_complex(&entry.name, &cx, corpus.depth, 7, &b()).unwrap();
            assert!(rep.passed, "{}: {:?}", entry.name, rep);
        }
        let w = &corpus.non_additivity_witness;
        assert!(
            is_nonadditive_pair(&corpus.complex(&w.complex).unwrap(), w.degree, &w.a, &w.b)
                .unwrap()
        );
    }

    #[test]
    fn d_is_not_a_derivation_of_the_product() {
        let a = FiniteComplex::from_descriptor(&ComplexDescriptor {
            modulus: 2,
            lowest_degree: 0,
            modules: vec![vec![2, 2], vec![2]],
            differentials: vec![vec![vec![1], vec![1]]],
        })
        .unwrap();
        let aa = a.tensor(&a).unwrap();
        let ctx = ProductContext {
            left: &a,
            right: &a,
            tensor: &aa,
            depth: 2,
        };
        let (x, y) = (section(&a, 0, &[1, 0]), section(&a, 0, &[0, 1]));
        let defect = shuffle_product(ctx, &x, &y)
            .unwrap()
            .d(&aa)
            .sub(
                &shuffle_product(ctx, &x.d(&a), &y)
                    .unwrap()
                    .add(&shuffle_product(ctx, &x, &y.d(&a)).unwrap())
                    .unwrap(),
            )
            .unwrap();
        assert!(!defect.is_zero());
        assert!(aa.is_zero_elem(1, &projection(&aa, &defect)));
    }

    #[test]
    fn budget_names_the_oversized_term() {
        let cx = FiniteComplex::module(4, &[4, 2]).unwrap();
        let err = build_p(
            &cx,
            2,
            &Budget {
                resolution_rank: 100,
                ..b()
            },
        )
        .unwrap_err();
        assert!(
            matches!(err, Error::BudgetExceeded { ref what, .. } if what == "P_1^0"),
            "{err}"
        );
    }
}
