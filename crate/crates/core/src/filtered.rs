//! Finitely filtered objects with twisted permutational graded pieces.
//!
//! An object is stored in split-plus-unipotent normal form: the underlying
//! module is `⊕_w gr^w`, blocks ordered by descending weight (so `F^k` is an
//! initial segment), and the total action is block upper triangular,
//! `ρ(g) = ρ_gr(g) (1 + u(g))` with `u(g)` strictly weight-raising. Maps are
//! weight-nondecreasing block matrices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmodule::{subgroup_index_map, GModule, TwistCharacter};
use crate::group::{GSet, Group, Subgroup};
use crate::zm::arith;
use crate::zm::{inverse, kernel, same_row_module, solve, span_order, Order, ZmMatrix};

/// Which exact structure an object lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    /// Twisted permutational graded pieces, graded-split admissible triples.
    F,
    /// Arbitrary Z/m-free graded pieces, graded-split admissible triples.
    Fprime,
    /// Arbitrary graded pieces, graded-exact admissible triples (reporting only).
    Fsecond,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::F => "F",
            Mode::Fprime => "Fprime",
            Mode::Fsecond => "Fsecond",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F" => Ok(Mode::F),
            "Fprime" => Ok(Mode::Fprime),
            "Fsecond" => Ok(Mode::Fsecond),
            other => Err(Error::schema("mode", format!("unknown mode {other:?}"))),
        }
    }
}

/// `Z/m[S] ⊗ μ^{⊗j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationalObject {
    gset: GSet,
    twist: i64,
    chi: TwistCharacter,
}

impl PermutationalObject {
    pub fn new(gset: GSet, chi: &TwistCharacter, twist: i64) -> Result<Self> {
        if gset.group() != chi.group() {
            return Err(Error::AmbientMismatch);
        }
        Ok(PermutationalObject {
            gset,
            twist,
            chi: chi.clone(),
        })
    }

    /// `M_cc` of the cover attached to `h`: the permutation module `Z/m[G/H]`.
    pub fn mcc(h: &Subgroup, chi: &TwistCharacter) -> Result<Self> {
        Self::new(GSet::coset_space(h), chi, 0)
    }

    pub fn gset(&self) -> &GSet {
        &self.gset
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn rank(&self) -> usize {
        self.gset.size()
    }

    pub fn module(&self) -> GModule {
        GModule::twisted_permutation(&self.gset, &self.chi, self.twist).expect("same group")
    }

    /// The object placed in filtration weight equal to its twist.
    pub fn to_filtered(&self, mode: Mode) -> FilteredObject {
        FilteredObject::split(
            mode,
            &self.chi,
            vec![Piece::permutational(
                self.gset.clone(),
                &self.chi,
                self.twist,
            )],
        )
        .expect("single permutational piece")
    }
}

/// One graded piece `gr^w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    weight: i64,
    gset: Option<GSet>,
    module: GModule,
}

impl Piece {
    pub fn permutational(gset: GSet, chi: &TwistCharacter, weight: i64) -> Piece {
        let module = GModule::twisted_permutation(&gset, chi, weight).expect("same group");
        Piece {
            weight,
            gset: Some(gset),
            module,
        }
    }

    /// A general graded piece (not allowed in mode F).
    pub fn general(module: GModule, weight: i64) -> Piece {
        Piece {
            weight,
            gset: None,
            module,
        }
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn gset(&self) -> Option<&GSet> {
        self.gset.as_ref()
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    fn merge(&self, other: &Piece) -> Result<Piece> {
        let module = self.module.direct_sum(&other.module)?;
        let gset = match (&self.gset, &other.gset) {
            (Some(a), Some(b)) => Some(a.disjoint_union(b)?),
            _ => None,
        };
        Ok(Piece {
            weight: self.weight,
            gset,
            module,
        })
    }
}

/// A filtered object in `(gr, u)` normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredObject {
    mode: Mode,
    chi: TwistCharacter,
    pieces: Vec<Piece>,
    offsets: Vec<usize>,
    rank: usize,
    action: Vec<ZmMatrix>,
}

/// A basis permutation with scalars: stored vector `pos` equals `scale` times
/// the source basis vector (used to transport maps between constructions).
pub type BasisMap = Vec<(usize, u64)>;

impl FilteredObject {
    fn check_pieces(mode: Mode, chi: &TwistCharacter, pieces: &mut Vec<Piece>) -> Result<()> {
        pieces.retain(|p| p.rank() > 0);
        pieces.sort_by_key(|p| std::cmp::Reverse(p.weight));
        for w in pieces.windows(2) {
            if w[0].weight == w[1].weight {
                return Err(Error::InvalidObject(format!(
                    "weight {} listed twice",
                    w[0].weight
                )));
            }
        }
        for p in pieces.iter() {
            if p.module.group() != chi.group() {
                return Err(Error::AmbientMismatch);
            }
            if p.module.modulus() != chi.modulus() {
                return Err(Error::ModulusMismatch(chi.modulus(), p.module.modulus()));
            }
            if mode == Mode::F && p.gset.is_none() {
                return Err(Error::ModeMismatch(format!(
                    "graded piece of weight {} is not permutational, which mode F requires",
                    p.weight
                )));
            }
        }
        Ok(())
    }

    fn layout(pieces: &[Piece]) -> (Vec<usize>, usize) {
        let mut offsets = Vec::with_capacity(pieces.len());
        let mut acc = 0;
        for p in pieces {
            offsets.push(acc);
            acc += p.rank();
        }
        (offsets, acc)
    }

    fn graded_action(chi: &TwistCharacter, pieces: &[Piece], rank: usize) -> Vec<ZmMatrix> {
        let m = chi.modulus();
        (0..chi.group().order())
            .map(|g| {
                let mut a = ZmMatrix::zeros(m, rank, rank);
                let mut off = 0;
                for p in pieces {
                    a.set_block(off, off, p.module.action(g));
                    off += p.rank();
                }
                a
            })
            .collect()
    }

    /// The split object `⊕ gr^w` (zero gluing).
    pub fn split(mode: Mode, chi: &TwistCharacter, mut pieces: Vec<Piece>) -> Result<Self> {
        Self::check_pieces(mode, chi, &mut pieces)?;
        let (offsets, rank) = Self::layout(&pieces);
        let action = Self::graded_action(chi, &pieces, rank);
        Ok(FilteredObject {
            mode,
            chi: chi.clone(),
            pieces,
            offsets,
            rank,
            action,
        })
    }

    /// Object with gluing `u(s)` given per generator (full `rank × rank`
    /// matrices, strictly weight-raising); the action is extended along words
    /// and checked to be a homomorphism.
    pub fn with_gluing(
        mode: Mode,
        chi: &TwistCharacter,
        pieces: Vec<Piece>,
        gluing: &[ZmMatrix],
    ) -> Result<Self> {
        let base = Self::split(mode, chi, pieces)?;
        let group = chi.group();
        if gluing.len() != group.generators().len() {
            return Err(Error::DimensionMismatch(format!(
                "{} gluing matrices for {} generators",
                gluing.len(),
                group.generators().len()
            )));
        }
        let m = chi.modulus();
        let id = ZmMatrix::identity(m, base.rank);
        let mut gen_action = Vec::with_capacity(gluing.len());
        for (k, u) in gluing.iter().enumerate() {
            if u.rows() != base.rank || u.cols() != base.rank || u.modulus() != m {
                return Err(Error::DimensionMismatch(format!(
                    "gluing matrix {k} has the wrong shape"
                )));
            }
            if !base.is_strictly_raising(u) {
                return Err(Error::InvalidObject(format!(
                    "gluing matrix {k} is not strictly weight-raising"
                )));
            }
            let s = group.generator_indices()[k];
            gen_action.push(base.action[s].mul_unchecked(&id.add(u)));
        }
        let action = group.extend_from_generators(id, &gen_action, |g, p| g.mul_unchecked(p));
        let obj = FilteredObject { action, ..base };
        obj.verify()?;
        Ok(obj)
    }

    /// Object with a given total action; verifies the normal form.
    pub fn from_total_action(
        mode: Mode,
        chi: &TwistCharacter,
        pieces: Vec<Piece>,
        action: Vec<ZmMatrix>,
    ) -> Result<Self> {
        let base = Self::split(mode, chi, pieces)?;
        if action.len() != chi.group().order() {
            return Err(Error::DimensionMismatch(
                "one action matrix per group element is required".into(),
            ));
        }
        let obj = FilteredObject { action, ..base };
        obj.verify()?;
        Ok(obj)
    }

    fn verify(&self) -> Result<()> {
        let g = self.group();
        let gr = Self::graded_action(&self.chi, &self.pieces, self.rank);
        for x in 0..g.order() {
            let a = &self.action[x];
            if a.rows() != self.rank || a.cols() != self.rank || a.modulus() != self.modulus() {
                return Err(Error::DimensionMismatch(format!(
                    "action matrix of element {x} has the wrong shape"
                )));
            }
            if !self.is_filtered_endo(a) {
                return Err(Error::InvalidObject(format!(
                    "action of element {x} does not preserve the filtration"
                )));
            }
            for (i, p) in self.pieces.iter().enumerate() {
                let o = self.offsets[i];
                if a.block(o, o, p.rank(), p.rank()) != gr[x].block(o, o, p.rank(), p.rank()) {
                    return Err(Error::InvalidObject(format!(
                        "action of element {x} does not induce the stated graded piece of weight {}",
                        p.weight
                    )));
                }
            }
        }
        if self.action[g.identity()] != ZmMatrix::identity(self.modulus(), self.rank) {
            return Err(Error::NotAHomomorphism(
                "identity does not act trivially".into(),
            ));
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                if self.action[g.mul(a, b)] != self.action[a].mul_unchecked(&self.action[b]) {
                    return Err(Error::NotAHomomorphism(format!(
                        "filtered action fails on elements {a}, {b}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Unit object `Z/m(0)`.
    pub fn unit(mode: Mode, chi: &TwistCharacter) -> Self {
        Self::tate(mode, chi, 0)
    }

    /// Tate object `Z/m(j)`: `μ^{⊗j}` in weight `j`.
    pub fn tate(mode: Mode, chi: &TwistCharacter, j: i64) -> Self {
        PermutationalObject::new(GSet::point(chi.group()), chi, j)
            .expect("point")
            .to_filtered(mode)
    }

    pub fn zero(mode: Mode, chi: &TwistCharacter) -> Self {
        Self::split(mode, chi, vec![]).expect("empty")
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn chi(&self) -> &TwistCharacter {
        &self.chi
    }

    pub fn group(&self) -> &Group {
        self.chi.group()
    }

    pub fn modulus(&self) -> u64 {
        self.chi.modulus()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn action(&self, g: usize) -> &ZmMatrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[ZmMatrix] {
        &self.action
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }

    /// `[w_min, w_max]`, or `None` for the zero object.
    pub fn window(&self) -> Option<(i64, i64)> {
        Some((self.pieces.last()?.weight, self.pieces.first()?.weight))
    }

    pub fn weights(&self) -> Vec<i64> {
        self.pieces.iter().map(|p| p.weight).collect()
    }

    /// Weight of each basis vector.
    pub fn basis_weights(&self) -> Vec<i64> {
        self.pieces
            .iter()
            .flat_map(|p| std::iter::repeat_n(p.weight, p.rank()))
            .collect()
    }

    pub fn piece_index(&self, w: i64) -> Option<usize> {
        self.pieces.iter().position(|p| p.weight == w)
    }

    /// Index range of the weight-`w` block (empty if absent).
    pub fn block_range(&self, w: i64) -> std::ops::Range<usize> {
        match self.piece_index(w) {
            Some(i) => self.offsets[i]..self.offsets[i] + self.pieces[i].rank(),
            None => 0..0,
        }
    }

    /// The gluing `u(g) = ρ_gr(g)^{-1} ρ(g) − 1`.
    pub fn gluing(&self, g: usize) -> ZmMatrix {
        let gr = Self::graded_action(&self.chi, &self.pieces, self.rank);
        let inv = inverse(&gr[g]).expect("graded action is invertible");
        inv.mul_unchecked(&self.action[g])
            .sub(&ZmMatrix::identity(self.modulus(), self.rank))
    }

    pub fn is_split(&self) -> bool {
        self.action == Self::graded_action(&self.chi, &self.pieces, self.rank)
    }

    /// Underlying G-module.
    pub fn module(&self) -> GModule {
        GModule::from_parts(self.group(), self.modulus(), self.rank, self.action.clone())
    }

    /// Associated graded G-module.
    pub fn graded_module(&self) -> GModule {
        GModule::from_parts(
            self.group(),
            self.modulus(),
            self.rank,
            Self::graded_action(&self.chi, &self.pieces, self.rank),
        )
    }

    fn is_filtered_endo(&self, a: &ZmMatrix) -> bool {
        let w = self.basis_weights();
        (0..self.rank).all(|i| (0..self.rank).all(|j| w[i] >= w[j] || a.get(i, j) == 0))
    }

    fn is_strictly_raising(&self, a: &ZmMatrix) -> bool {
        let w = self.basis_weights();
        (0..self.rank).all(|i| (0..self.rank).all(|j| w[i] > w[j] || a.get(i, j) == 0))
    }

    pub fn check_compatible(&self, other: &FilteredObject) -> Result<()> {
        if self.mode != other.mode {
            return Err(Error::ModeMismatch(format!(
                "{} vs {}",
                self.mode, other.mode
            )));
        }
        if self.chi != other.chi {
            if self.group() != other.group() {
                return Err(Error::AmbientMismatch);
            }
            if self.modulus() != other.modulus() {
                return Err(Error::ModulusMismatch(self.modulus(), other.modulus()));
            }
            return Err(Error::InvalidObject(
                "objects use different twist characters".into(),
            ));
        }
        Ok(())
    }

    /// Reorders a concatenated basis into descending weight; `groups[w]` lists
    /// the contributing (piece, old start, len) in order.
    fn assemble(
        mode: Mode,
        chi: &TwistCharacter,
        groups: BTreeMap<i64, Vec<(Piece, usize)>>,
        old_action: &[ZmMatrix],
    ) -> Result<(Self, Vec<usize>)> {
        let mut pieces = Vec::new();
        let mut perm = Vec::new();
        for (w, parts) in groups.into_iter().rev() {
            let mut merged: Option<Piece> = None;
            for (p, start) in parts {
                perm.extend(start..start + p.rank());
                merged = Some(match merged {
                    None => Piece { weight: w, ..p },
                    Some(acc) => acc.merge(&Piece { weight: w, ..p })?,
                });
            }
            if let Some(p) = merged {
                pieces.push(p);
            }
        }
        let action: Vec<ZmMatrix> = old_action
            .iter()
            .map(|a| a.conjugate_by_permutation(&perm))
            .collect();
        let obj = Self::from_total_action(mode, chi, pieces, action)?;
        Ok((obj, perm))
    }

    /// Direct sum; the new basis lists, per weight, the pieces of `self` first.
    pub fn direct_sum(&self, other: &FilteredObject) -> Result<FilteredObject> {
        Ok(self.direct_sum_with_basis(other)?.0)
    }

    /// Direct sum with `perm[new] = old`, old indices being `self` then `other`.
    pub fn direct_sum_with_basis(
        &self,
        other: &FilteredObject,
    ) -> Result<(FilteredObject, Vec<usize>)> {
        self.check_compatible(other)?;
        let mut groups: BTreeMap<i64, Vec<(Piece, usize)>> = BTreeMap::new();
        for (i, p) in self.pieces.iter().enumerate() {
            groups
                .entry(p.weight)
                .or_default()
                .push((p.clone(), self.offsets[i]));
        }
        for (i, p) in other.pieces.iter().enumerate() {
            groups
                .entry(p.weight)
                .or_default()
                .push((p.clone(), self.rank + other.offsets[i]));
        }
        let action: Vec<ZmMatrix> = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        Self::assemble(self.mode, &self.chi, groups, &action)
    }

    /// Tensor product with filtration `F^k = Σ F^i ⊗ F^{k−i}`.
    pub fn tensor(&self, other: &FilteredObject) -> Result<FilteredObject> {
        Ok(self.tensor_with_basis(other)?.0)
    }

    /// Tensor product with `perm[new] = i * rank(other) + j` for `e_i ⊗ f_j`.
    pub fn tensor_with_basis(
        &self,
        other: &FilteredObject,
    ) -> Result<(FilteredObject, Vec<usize>)> {
        self.check_compatible(other)?;
        let r2 = other.rank;
        let mut pieces_by_weight: BTreeMap<i64, Vec<Piece>> = BTreeMap::new();
        let mut perm_by_weight: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (a, pa) in self.pieces.iter().enumerate() {
            for (b, pb) in other.pieces.iter().enumerate() {
                let w = pa.weight + pb.weight;
                let module = pa.module.tensor(&pb.module)?;
                let gset = match (&pa.gset, &pb.gset) {
                    (Some(x), Some(y)) => Some(x.product(y)?),
                    _ => None,
                };
                pieces_by_weight.entry(w).or_default().push(Piece {
                    weight: w,
                    gset,
                    module,
                });
                let perm = perm_by_weight.entry(w).or_default();
                for x in 0..pa.rank() {
                    for y in 0..pb.rank() {
                        perm.push((self.offsets[a] + x) * r2 + other.offsets[b] + y);
                    }
                }
            }
        }
        let mut pieces = Vec::new();
        let mut perm = Vec::new();
        for (w, parts) in pieces_by_weight.into_iter().rev() {
            let mut it = parts.into_iter();
            let first = it.next().expect("nonempty");
            let merged = it.try_fold(first, |acc, p| acc.merge(&p))?;
            pieces.push(merged);
            perm.extend(perm_by_weight.remove(&w).expect("same keys"));
        }
        let action: Vec<ZmMatrix> = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.kron(b).conjugate_by_permutation(&perm))
            .collect();
        Ok((
            Self::from_total_action(self.mode, &self.chi, pieces, action)?,
            perm,
        ))
    }

    /// `X ⊗ Z/m(j)`: weights shift by `j`, pieces twist by `χ^j`.
    pub fn twist(&self, j: i64) -> Result<FilteredObject> {
        self.tensor(&FilteredObject::tate(self.mode, &self.chi, j))
    }

    /// Dual object: `ρ(g^{-1})^T`, weights negated, block order reversed
    /// (the order inside each block is kept).
    pub fn dual(&self) -> Result<FilteredObject> {
        let g = self.group();
        let mut pieces = Vec::new();
        let mut perm = Vec::new();
        for (i, p) in self.pieces.iter().enumerate().rev() {
            perm.extend(self.offsets[i]..self.offsets[i] + p.rank());
            pieces.push(Piece {
                weight: -p.weight,
                gset: p.gset.clone(),
                module: p.module.dual(),
            });
        }
        let action = (0..g.order())
            .map(|x| {
                self.action[g.inv(x)]
                    .transpose()
                    .conjugate_by_permutation(&perm)
            })
            .collect();
        Self::from_total_action(self.mode, &self.chi, pieces, action)
    }

    /// Index of basis vector `i` of `self` inside `dual()`.
    pub fn dual_position(&self, i: usize) -> usize {
        let mut acc = 0;
        for (k, p) in self.pieces.iter().enumerate().rev() {
            let o = self.offsets[k];
            if (o..o + p.rank()).contains(&i) {
                return acc + (i - o);
            }
            acc += p.rank();
        }
        panic!("basis index {i} out of range")
    }

    /// Reduction to coefficients Z/n for `n | m`.
    pub fn coefficient_change(&self, n: u64) -> Result<FilteredObject> {
        let chi = self.chi.reduce_mod(n)?;
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                Ok(match &p.gset {
                    Some(s) => Piece::permutational(s.clone(), &chi, p.weight),
                    None => Piece::general(p.module.reduce_mod(n)?, p.weight),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let action = self
            .action
            .iter()
            .map(|a| a.reduce_mod(n))
            .collect::<Result<Vec<_>>>()?;
        Self::from_total_action(self.mode, &chi, pieces, action)
    }

    /// Restriction to a subgroup, over the subgroup's own group.
    pub fn restrict(&self, h: &Subgroup) -> Result<FilteredObject> {
        let chi = self.chi.restrict(h)?;
        let (_, embed) = h.as_group();
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                Ok(match &p.gset {
                    Some(s) => {
                        Piece::permutational(s.restrict(h)?.0.rebase(chi.group())?, &chi, p.weight)
                    }
                    None => Piece::general(p.module.restrict(h)?.rebase(chi.group())?, p.weight),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let action = embed.iter().map(|&g| self.action[g].clone()).collect();
        Self::from_total_action(self.mode, &chi, pieces, action)
    }

    /// Induction to the ambient group of `h`, where `self` lives over `h` as a
    /// group and `chi` is the ambient character restricting to `self.chi()`.
    pub fn induce(&self, h: &Subgroup, chi: &TwistCharacter) -> Result<FilteredObject> {
        Ok(self.induce_with_basis(h, chi)?.0)
    }

    /// Induction, also returning for each raw basis vector `r_i ⊗ e_k`
    /// (index `i * rank + k`) its stored position `n` and scalar `c` with
    /// `r_i ⊗ e_k = c · f_n`.
    pub fn induce_with_basis(
        &self,
        h: &Subgroup,
        chi: &TwistCharacter,
    ) -> Result<(FilteredObject, BasisMap)> {
        if h.group() != chi.group() {
            return Err(Error::AmbientMismatch);
        }
        let local = subgroup_index_map(h, self.group())?;
        for &x in h.elements() {
            if chi.value(x) != self.chi.value(local[x]) || chi.modulus() != self.modulus() {
                return Err(Error::InvalidObject(
                    "ambient character does not restrict to the object's character".into(),
                ));
            }
        }
        let big = h.group();
        let ca = h.coset_action();
        let k = ca.num_cosets();
        let r = self.rank;
        let m = self.modulus();
        let mut pieces = Vec::new();
        // stored position -> (raw index, c_n) with f_n = c_n · raw
        let mut order: Vec<(usize, u64)> = Vec::new();
        for (pi, p) in self.pieces.iter().enumerate() {
            let o = self.offsets[pi];
            // permutational pieces need the basis change f = χ^w(r_i)^{-1} (r_i ⊗ e_s)
            let twist_scalars: Vec<u64> = if p.gset.is_some() {
                ca.reps.iter().map(|&g| chi.power(g, -p.weight)).collect()
            } else {
                vec![1 % m; k]
            };
            for (i, &c) in twist_scalars.iter().enumerate() {
                for s in 0..p.rank() {
                    order.push((i * r + o + s, c));
                }
            }
            let piece = match &p.gset {
                Some(s) => {
                    let n = s.size();
                    let gen_images: Vec<Vec<usize>> = big
                        .generator_indices()
                        .iter()
                        .map(|&g| {
                            (0..k * n)
                                .map(|pt| {
                                    let (i, x) = (pt / n, pt % n);
                                    let (j, hh) = ca.act(g, i);
                                    j * n + s.act(local[hh], x)
                                })
                                .collect()
                        })
                        .collect();
                    Piece::permutational(
                        GSet::from_generator_action(big, k * n, &gen_images)?,
                        chi,
                        p.weight,
                    )
                }
                None => Piece::general(p.module.induce(h)?, p.weight),
            };
            pieces.push(piece);
        }
        let mut raw_to_stored = vec![(0usize, 0u64); k * r];
        for (n, &(raw, c)) in order.iter().enumerate() {
            let ci = arith::inv(c, m).expect("unit");
            raw_to_stored[raw] = (n, ci);
        }
        let action = (0..big.order())
            .map(|g| {
                let mut a = ZmMatrix::zeros(m, k * r, k * r);
                for i in 0..k {
                    let (j, hh) = ca.act(g, i);
                    let blk = &self.action[local[hh]];
                    for x in 0..r {
                        for y in 0..r {
                            let v = blk.get(x, y);
                            if v == 0 {
                                continue;
                            }
                            // raw: e_(i,y) ↦ v e_(j,x); stored f = c·raw
                            let (n_src, inv_src) = raw_to_stored[i * r + y];
                            let (n_dst, inv_dst) = raw_to_stored[j * r + x];
                            let c_src = arith::inv(inv_src, m).expect("unit");
                            let val = arith::mul(arith::mul(v, c_src, m), inv_dst, m);
                            a.set(n_dst, n_src, val);
                        }
                    }
                }
                a
            })
            .collect();
        let obj = Self::from_total_action(self.mode, chi, pieces, action)?;
        Ok((obj, raw_to_stored))
    }

    /// Positions allowed for a filtered map `self → target` (row-major in a
    /// `rank(target) × rank(self)` matrix), and the strictly raising subset.
    pub fn hom_positions(&self, target: &FilteredObject) -> (Vec<usize>, Vec<usize>) {
        let ws = self.basis_weights();
        let wt = target.basis_weights();
        let mut fil = Vec::new();
        let mut plus = Vec::new();
        for (i, &a) in wt.iter().enumerate() {
            for (j, &b) in ws.iter().enumerate() {
                if a >= b {
                    fil.push(i * self.rank + j);
                }
                if a > b {
                    plus.push(i * self.rank + j);
                }
            }
        }
        (fil, plus)
    }

    /// The Z/m-module of filtered maps `self → target` under conjugation,
    /// restricted to the given coordinate positions (an invariant subspace).
    pub fn hom_submodule(&self, target: &FilteredObject, positions: &[usize]) -> Result<GModule> {
        self.check_compatible(target)?;
        let full = self.module().hom_module(&target.module())?;
        let action = full
            .actions()
            .iter()
            .map(|a| a.select(positions, positions))
            .collect();
        Ok(GModule::from_parts(
            self.group(),
            self.modulus(),
            positions.len(),
            action,
        ))
    }
}

/// A filtration-preserving equivariant map, as a `rank(target) × rank(source)` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredMap {
    source: FilteredObject,
    target: FilteredObject,
    matrix: ZmMatrix,
}

impl FilteredMap {
    pub fn new(source: &FilteredObject, target: &FilteredObject, matrix: ZmMatrix) -> Result<Self> {
        source.check_compatible(target)?;
        if matrix.rows() != target.rank
            || matrix.cols() != source.rank
            || matrix.modulus() != source.modulus()
        {
            return Err(Error::DimensionMismatch(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.rank,
                source.rank
            )));
        }
        let ws = source.basis_weights();
        let wt = target.basis_weights();
        for i in 0..target.rank {
            for j in 0..source.rank {
                if matrix.get(i, j) != 0 && wt[i] < ws[j] {
                    return Err(Error::InvalidObject(format!(
                        "map lowers weight: entry ({i}, {j}) sends weight {} to {}",
                        ws[j], wt[i]
                    )));
                }
            }
        }
        for &g in source.group().generator_indices() {
            if target.action[g].mul_unchecked(&matrix) != matrix.mul_unchecked(&source.action[g]) {
                return Err(Error::InvalidObject("map is not equivariant".into()));
            }
        }
        Ok(FilteredMap {
            source: source.clone(),
            target: target.clone(),
            matrix,
        })
    }

    pub fn identity(x: &FilteredObject) -> Self {
        FilteredMap {
            source: x.clone(),
            target: x.clone(),
            matrix: ZmMatrix::identity(x.modulus(), x.rank),
        }
    }

    pub fn zero(source: &FilteredObject, target: &FilteredObject) -> Self {
        FilteredMap {
            source: source.clone(),
            target: target.clone(),
            matrix: ZmMatrix::zeros(source.modulus(), target.rank, source.rank),
        }
    }

    pub fn source(&self) -> &FilteredObject {
        &self.source
    }

    pub fn target(&self) -> &FilteredObject {
        &self.target
    }

    pub fn matrix(&self) -> &ZmMatrix {
        &self.matrix
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FilteredMap) -> Result<FilteredMap> {
        if self.target != other.source {
            return Err(Error::DimensionMismatch("maps are not composable".into()));
        }
        Ok(FilteredMap {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: other.matrix.mul_unchecked(&self.matrix),
        })
    }

    /// Graded component `gr^w` as a matrix.
    pub fn graded(&self, w: i64) -> ZmMatrix {
        let rt = self.target.block_range(w);
        let rs = self.source.block_range(w);
        self.matrix.block(rt.start, rs.start, rt.len(), rs.len())
    }

    /// The inverse, if the map is an isomorphism of filtered objects.
    pub fn inverse(&self) -> Option<FilteredMap> {
        let inv = inverse(&self.matrix)?;
        FilteredMap::new(&self.target, &self.source, inv).ok()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.inverse().is_some()
    }
}

/// Outcome of an admissibility test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Admissibility {
    /// Admissible; per weight, an equivariant section of `gr^w E → gr^w M`
    /// (empty in mode `Fsecond`, where no splitting is required).
    Admissible {
        splittings: Vec<(i64, ZmMatrix)>,
    },
    NotAdmissible {
        reason: String,
    },
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible { .. })
    }
}

fn is_injective(a: &ZmMatrix) -> bool {
    span_order(&kernel(&a.transpose())).is_one()
}

fn is_surjective(a: &ZmMatrix) -> bool {
    let m = a.modulus();
    span_order(&a.transpose()) == Order::of(m).pow(a.rows())
}

/// An equivariant `s` with `p s = 1`, for graded actions `rho_e`, `rho_m`.
pub fn equivariant_section(
    p: &ZmMatrix,
    rho_e: &[&ZmMatrix],
    rho_m: &[&ZmMatrix],
) -> Option<ZmMatrix> {
    let m = p.modulus();
    let (rm, re) = (p.rows(), p.cols());
    let unknowns = re * rm;
    let eqs = rm * rm + rho_e.len() * re * rm;
    let mut a = ZmMatrix::zeros(m, unknowns, eqs);
    let mut rhs = vec![0u64; eqs];
    let mut col = 0;
    for i in 0..rm {
        for j in 0..rm {
            for k in 0..re {
                a.add_to(k * rm + j, col, p.get(i, k));
            }
            rhs[col] = u64::from(i == j) % m;
            col += 1;
        }
    }
    for (re_g, rm_g) in rho_e.iter().zip(rho_m) {
        for i in 0..re {
            for j in 0..rm {
                for k in 0..re {
                    a.add_to(k * rm + j, col, re_g.get(i, k));
                }
                for b in 0..rm {
                    a.add_to(i * rm + b, col, arith::neg(rm_g.get(b, j), m));
                }
                col += 1;
            }
        }
    }
    let x = solve(&a, &rhs).ok().flatten()?;
    Some(ZmMatrix::from_data(m, re, rm, x))
}

/// Tests whether `N →i E →p M` is an admissible triple in the mode of the objects.
pub fn check_admissible(i: &FilteredMap, p: &FilteredMap) -> Result<Admissibility> {
    if i.target != p.source {
        return Err(Error::DimensionMismatch(
            "the maps are not composable".into(),
        ));
    }
    let mode = i.source.mode;
    if !p.matrix.mul_unchecked(&i.matrix).is_zero() {
        return Ok(Admissibility::NotAdmissible {
            reason: "the composite is nonzero".into(),
        });
    }
    let (n, e, mo) = (&i.source, &i.target, &p.target);
    let mut weights: Vec<i64> = n.weights();
    weights.extend(e.weights());
    weights.extend(mo.weights());
    weights.sort_unstable_by(|a, b| b.cmp(a));
    weights.dedup();
    let mut splittings = Vec::new();
    for w in weights {
        let iw = i.graded(w);
        let pw = p.graded(w);
        if !is_injective(&iw) {
            return Ok(Admissibility::NotAdmissible {
                reason: format!("gr^{w} of the first map is not injective"),
            });
        }
        if !is_surjective(&pw) {
            return Ok(Admissibility::NotAdmissible {
                reason: format!("gr^{w} of the second map is not surjective"),
            });
        }
        if !same_row_module(&kernel(&pw.transpose()), &iw.transpose()) {
            return Ok(Admissibility::NotAdmissible {
                reason: format!("gr^{w} is not exact in the middle"),
            });
        }
        if mode == Mode::Fsecond {
            continue;
        }
        let gens = e.group().generator_indices();
        let ee = e.graded_module();
        let mm = mo.graded_module();
        let (re, rm) = (e.block_range(w), mo.block_range(w));
        let ge: Vec<ZmMatrix> = gens
            .iter()
            .map(|&g| ee.action(g).block(re.start, re.start, re.len(), re.len()))
            .collect();
        let gm: Vec<ZmMatrix> = gens
            .iter()
            .map(|&g| mm.action(g).block(rm.start, rm.start, rm.len(), rm.len()))
            .collect();
        match equivariant_section(
            &pw,
            &ge.iter().collect::<Vec<_>>(),
            &gm.iter().collect::<Vec<_>>(),
        ) {
            Some(s) => splittings.push((w, s)),
            None => {
                return Ok(Admissibility::NotAdmissible {
                    reason: format!("gr^{w} admits no equivariant splitting"),
                })
            }
        }
    }
    Ok(Admissibility::Admissible { splittings })
}

/// The canonical triple `N → N ⊕ M → M`.
pub fn split_triple(n: &FilteredObject, m: &FilteredObject) -> Result<(FilteredMap, FilteredMap)> {
    let (e, perm) = n.direct_sum_with_basis(m)?;
    let md = n.modulus();
    let mut inc = ZmMatrix::zeros(md, e.rank, n.rank);
    let mut proj = ZmMatrix::zeros(md, m.rank, e.rank);
    for (new, &old) in perm.iter().enumerate() {
        if old < n.rank {
            inc.set(new, old, 1);
        } else {
            proj.set(old - n.rank, new, 1);
        }
    }
    Ok((
        FilteredMap::new(n, &e, inc)?,
        FilteredMap::new(&e, m, proj)?,
    ))
}

/// Evaluation `dual(X) ⊗ X → 1` and coevaluation `1 → X ⊗ dual(X)`.
pub fn evaluation_maps(x: &FilteredObject) -> Result<(FilteredMap, FilteredMap)> {
    let d = x.dual()?;
    let unit = FilteredObject::unit(x.mode, &x.chi);
    let m = x.modulus();
    let r = x.rank;
    let (dx, perm_ev) = d.tensor_with_basis(x)?;
    let mut ev = ZmMatrix::zeros(m, 1, r * r);
    for (new, &old) in perm_ev.iter().enumerate() {
        let (a, b) = (old / r, old % r);
        if x.dual_position(b) == a {
            ev.set(0, new, 1);
        }
    }
    let (xd, perm_co) = x.tensor_with_basis(&d)?;
    let mut co = ZmMatrix::zeros(m, r * r, 1);
    for (new, &old) in perm_co.iter().enumerate() {
        let (a, b) = (old / r, old % r);
        if x.dual_position(a) == b {
            co.set(new, 0, 1);
        }
    }
    Ok((
        FilteredMap::new(&dx, &unit, ev)?,
        FilteredMap::new(&unit, &xd, co)?,
    ))
}

/// Projection `Z/m[G/H] → Z/m[G/K]` and transfer `Z/m[G/K] → Z/m[G/H]` for `H ≤ K`;
/// their composite `projection ∘ transfer` is multiplication by `[K : H]`.
pub fn mcc_maps(
    h: &Subgroup,
    k: &Subgroup,
    chi: &TwistCharacter,
    mode: Mode,
) -> Result<(FilteredMap, FilteredMap)> {
    h.same_ambient(k)?;
    if !h.is_subgroup_of(k) {
        return Err(Error::InvalidObject(
            "the first subgroup must be contained in the second".into(),
        ));
    }
    let small = PermutationalObject::mcc(h, chi)?.to_filtered(mode);
    let large = PermutationalObject::mcc(k, chi)?.to_filtered(mode);
    let hc = h.coset_action();
    let kc = k.coset_action();
    let m = chi.modulus();
    let mut proj = ZmMatrix::zeros(m, kc.num_cosets(), hc.num_cosets());
    let mut tr = ZmMatrix::zeros(m, hc.num_cosets(), kc.num_cosets());
    for (i, &rep) in hc.reps.iter().enumerate() {
        let j = kc.coset_of[rep];
        proj.set(j, i, 1);
        tr.set(i, j, 1);
    }
    Ok((
        FilteredMap::new(&small, &large, proj)?,
        FilteredMap::new(&large, &small, tr)?,
    ))
}

/// For a permutational object, an admissible epimorphism from a direct sum of
/// `M_cc(H) ⊗ Z/m(j)` over the orbit stabilizers (here an isomorphism).
pub fn mcc_cover(obj: &PermutationalObject, mode: Mode) -> Result<(FilteredObject, FilteredMap)> {
    let chi = &obj.chi;
    let set = obj.gset();
    let target = obj.to_filtered(mode);
    let mut source = FilteredObject::zero(mode, chi);
    let mut columns: Vec<usize> = Vec::new();
    for orbit in set.orbits() {
        let x = orbit[0];
        let stab = set.stabilizer(x);
        let ca = stab.coset_action();
        let piece =
            PermutationalObject::new(GSet::coset_space(&stab), chi, obj.twist)?.to_filtered(mode);
        source = source.direct_sum(&piece)?;
        for &rep in &ca.reps {
            columns.push(set.act(rep, x));
        }
    }
    let m = chi.modulus();
    let mut a = ZmMatrix::zeros(m, set.size(), columns.len());
    for (c, &pt) in columns.iter().enumerate() {
        a.set(pt, c, 1);
    }
    Ok((source.clone(), FilteredMap::new(&source, &target, a)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn z2_chi(m: u64, v: u64) -> TwistCharacter {
        TwistCharacter::from_generator_values(&FiniteGroup::cyclic(2), m, &[v]).unwrap()
    }

    #[test]
    fn tate_objects_tensor() {
        let chi = z2_chi(4, 3);
        let a = FilteredObject::tate(Mode::F, &chi, 1);
        let b = a.tensor(&a).unwrap();
        assert_eq!(b, FilteredObject::tate(Mode::F, &chi, 2));
        let unit = FilteredObject::unit(Mode::F, &chi);
        assert_eq!(a.tensor(&unit).unwrap(), a);
        assert_eq!(a.dual().unwrap(), FilteredObject::tate(Mode::F, &chi, -1));
    }

    #[test]
    fn regular_tensor_regular() {
        let chi = z2_chi(2, 1);
        let g = chi.group().clone();
        let reg = PermutationalObject::mcc(&g.trivial_subgroup(), &chi)
            .unwrap()
            .to_filtered(Mode::F);
        let t = reg.tensor(&reg).unwrap();
        assert_eq!(t.rank(), 4);
        let s = t.pieces()[0].gset().unwrap();
        assert_eq!(s.orbits().len(), 2);
        assert!(s.orbits().iter().all(|o| o.len() == 2));
    }

    #[test]
    fn augmentation_sequence_admissibility() {
        for (mode, expected) in [(Mode::F, false), (Mode::Fsecond, true)] {
            let chi = z2_chi(2, 1);
            let g = chi.group().clone();
            let reg = PermutationalObject::mcc(&g.trivial_subgroup(), &chi)
                .unwrap()
                .to_filtered(mode);
            let one = FilteredObject::unit(mode, &chi);
            let norm =
                FilteredMap::new(&one, &reg, ZmMatrix::from_rows(2, &[[1], [1]]).unwrap()).unwrap();
            let aug =
                FilteredMap::new(&reg, &one, ZmMatrix::from_rows(2, &[[1, 1]]).unwrap()).unwrap();
            assert_eq!(
                check_admissible(&norm, &aug).unwrap().is_admissible(),
                expected,
                "{mode}"
            );
        }
    }

    #[test]
    fn canonical_triple_is_admissible() {
        let chi = z2_chi(4, 3);
        let a = FilteredObject::tate(Mode::F, &chi, 0);
        let b = FilteredObject::tate(Mode::F, &chi, 1);
        let (i, p) = split_triple(&b, &a).unwrap();
        assert!(check_admissible(&i, &p).unwrap().is_admissible());
        let (i, p) = split_triple(&a, &a).unwrap();
        assert!(check_admissible(&i, &p).unwrap().is_admissible());
    }

    #[test]
    fn gluing_validation() {
        let chi = z2_chi(2, 1);
        let pieces = vec![
            Piece::permutational(GSet::point(chi.group()), &chi, 1),
            Piece::permutational(GSet::point(chi.group()), &chi, 0),
        ];
        let u = ZmMatrix::from_rows(2, &[[0, 1], [0, 0]]).unwrap();
        let e = FilteredObject::with_gluing(Mode::F, &chi, pieces.clone(), &[u]).unwrap();
        assert!(!e.is_split());
        let bad = ZmMatrix::from_rows(2, &[[0, 0], [1, 0]]).unwrap();
        assert!(FilteredObject::with_gluing(Mode::F, &chi, pieces, &[bad]).is_err());
    }

    #[test]
    fn coefficient_change_reduces_character() {
        let chi = z2_chi(4, 3);
        let x = FilteredObject::tate(Mode::F, &chi, 1);
        let y = x.coefficient_change(2).unwrap();
        assert!(y.chi().is_trivial());
        assert_eq!(y.action(1).get(0, 0), 1);
        assert_eq!(x.coefficient_change(4).unwrap(), x);
        assert!(x.coefficient_change(3).is_err());
    }

    #[test]
    fn induce_restrict_unit() {
        let g = FiniteGroup::symmetric(3);
        let chi = TwistCharacter::trivial(&g, 3);
        for h in g.subgroups_up_to_conjugacy(48).unwrap() {
            let unit_h = FilteredObject::unit(Mode::F, &chi.restrict(&h).unwrap());
            let ind = unit_h.induce(&h, &chi).unwrap();
            assert_eq!(
                ind,
                PermutationalObject::mcc(&h, &chi)
                    .unwrap()
                    .to_filtered(Mode::F)
            );
        }
    }

    #[test]
    fn mcc_degree_identity() {
        let g = FiniteGroup::symmetric(3);
        let chi = TwistCharacter::trivial(&g, 4);
        let subs = g.all_subgroups(48).unwrap();
        for h in &subs {
            for k in &subs {
                if !h.is_subgroup_of(k) {
                    continue;
                }
                let (p, t) = mcc_maps(h, k, &chi, Mode::F).unwrap();
                let comp = t.then(&p).unwrap();
                let d = (k.order() / h.order()) as u64;
                assert_eq!(
                    comp.matrix(),
                    &ZmMatrix::identity(4, p.target().rank()).scale(d)
                );
            }
        }
    }

    #[test]
    fn evaluation_maps_exist() {
        let chi = z2_chi(4, 3);
        let pieces = vec![
            Piece::permutational(GSet::point(chi.group()), &chi, 1),
            Piece::permutational(GSet::point(chi.group()), &chi, 0),
        ];
        let u = ZmMatrix::from_rows(4, &[[0, 2], [0, 0]]).unwrap();
        let x = FilteredObject::with_gluing(Mode::F, &chi, pieces, &[u]).unwrap();
        evaluation_maps(&x).unwrap();
        assert_eq!(x.dual().unwrap().dual().unwrap(), x);
    }
}
