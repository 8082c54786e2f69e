//! Hom and Ext¹ in the filtered exact categories.
//!
//! For `M, N` in normal form, write `Hom^fil` for weight-nondecreasing linear
//! maps `M → N` under `g·φ = ρ_N(g) φ ρ_M(g)^{-1}` and `Hom⁺` for the strictly
//! raising ones. An admissible extension of `M` by `N` is the object
//! `ρ_E = [[ρ_N, c ρ_M], [0, ρ_M]]` for a cocycle `c ∈ Z¹(G, Hom⁺)`, and two
//! cocycles give equivalent extensions exactly when they differ by the
//! coboundary of a filtered map. Hence
//! `Ext¹ = Z¹(G, Hom⁺) / {dφ : φ ∈ Hom^fil, dφ strictly raising}`, which is
//! the image of `H¹(G, Hom⁺) → H¹(G, Hom^fil)`.

use std::collections::HashMap;

use crate::budget::Budget;
use crate::cohomology::{bar_differential, cochain_dim};
use crate::error::{Error, Result};
use crate::filtered::{check_admissible, Admissibility, FilteredMap, FilteredObject, Mode};
use crate::gmodule::GModule;
use crate::zm::{kernel, subquotient, ZmMatrix, ZmModulePresentation};

/// `Hom_F(M, N)` with generators as explicit filtered maps.
#[derive(Clone, Debug)]
pub struct HomGroup {
    presentation: ZmModulePresentation,
    source: FilteredObject,
    target: FilteredObject,
    positions: Vec<usize>,
}

impl HomGroup {
    pub fn presentation(&self) -> &ZmModulePresentation {
        &self.presentation
    }

    pub fn shape(&self) -> crate::zm::ModuleShape {
        self.presentation.shape()
    }

    /// Expands a vector in filtered-Hom coordinates to a full map matrix.
    pub fn matrix_of(&self, coords: &[u64]) -> ZmMatrix {
        expand(&self.source, &self.target, &self.positions, coords)
    }

    /// Generators as filtered maps.
    pub fn generators(&self) -> Vec<FilteredMap> {
        self.presentation
            .generators()
            .iter()
            .map(|v| {
                FilteredMap::new(&self.source, &self.target, self.matrix_of(v))
                    .expect("fixed points are maps")
            })
            .collect()
    }

    /// Coordinates of a filtered map in terms of the invariant-factor generators.
    pub fn coordinates(&self, f: &FilteredMap) -> Result<Vec<u64>> {
        let r = self.source.rank();
        let v: Vec<u64> = self
            .positions
            .iter()
            .map(|&p| f.matrix().get(p / r, p % r))
            .collect();
        self.presentation.coordinates(&v)
    }
}

fn expand(
    source: &FilteredObject,
    target: &FilteredObject,
    positions: &[usize],
    coords: &[u64],
) -> ZmMatrix {
    let r = source.rank();
    let mut a = ZmMatrix::zeros(source.modulus(), target.rank(), r);
    for (&p, &c) in positions.iter().zip(coords) {
        a.set(p / r, p % r, c);
    }
    a
}

/// `Hom_F(M, N)`: fixed points of the filtered Hom module.
pub fn hom_f(m: &FilteredObject, n: &FilteredObject) -> Result<HomGroup> {
    m.check_compatible(n)?;
    let (fil, _) = m.hom_positions(n);
    let module = m.hom_submodule(n, &fil)?;
    let fixed = module.fixed_points();
    let empty = ZmMatrix::zeros(m.modulus(), 0, fil.len());
    let presentation = subquotient(&fixed, &empty)?;
    Ok(HomGroup {
        presentation,
        source: m.clone(),
        target: n.clone(),
        positions: fil,
    })
}

/// An extension `N → E → M` with its admissibility witness.
#[derive(Clone, Debug)]
pub struct Extension {
    pub object: FilteredObject,
    pub inclusion: FilteredMap,
    pub projection: FilteredMap,
    pub witness: Admissibility,
}

/// `Ext¹_F(M, N)` with cocycle representatives.
#[derive(Clone, Debug)]
pub struct Ext1Group {
    presentation: ZmModulePresentation,
    source: FilteredObject,
    target: FilteredObject,
    plus_positions: Vec<usize>,
    plus_module: GModule,
}

impl Ext1Group {
    pub fn presentation(&self) -> &ZmModulePresentation {
        &self.presentation
    }

    pub fn shape(&self) -> crate::zm::ModuleShape {
        self.presentation.shape()
    }

    /// The strictly raising Hom module whose 1-cocycles present the group.
    pub fn cocycle_module(&self) -> &GModule {
        &self.plus_module
    }

    /// Positions of `Hom⁺` inside a `rank(N) × rank(M)` matrix (row-major).
    pub fn plus_positions(&self) -> &[usize] {
        &self.plus_positions
    }

    /// Cocycles in `C¹(G, Hom⁺)` generating the invariant-factor summands.
    pub fn representatives(&self) -> &[Vec<u64>] {
        self.presentation.generators()
    }

    /// Class of a strictly raising cocycle.
    pub fn class_of(&self, cocycle: &[u64]) -> Result<Vec<u64>> {
        self.presentation.coordinates(cocycle)
    }

    /// The value `c(g)` of a cochain as a `rank(N) × rank(M)` matrix.
    pub fn cocycle_value(&self, cocycle: &[u64], g: usize) -> ZmMatrix {
        let m = self.source.modulus();
        if g == 0 {
            return ZmMatrix::zeros(m, self.target.rank(), self.source.rank());
        }
        let k = self.plus_positions.len();
        expand(
            &self.source,
            &self.target,
            &self.plus_positions,
            &cocycle[(g - 1) * k..g * k],
        )
    }

    /// The extension attached to a cocycle.
    pub fn extension(&self, cocycle: &[u64]) -> Result<Extension> {
        let values: Vec<ZmMatrix> = (0..self.source.group().order())
            .map(|g| self.cocycle_value(cocycle, g))
            .collect();
        extension_from_values(&self.source, &self.target, &values)
    }

    /// Explicit extensions for the invariant-factor generators.
    pub fn extensions(&self) -> Result<Vec<Extension>> {
        self.representatives()
            .iter()
            .map(|c| self.extension(c))
            .collect()
    }
}

/// Builds `E` with `ρ_E(g) = [[ρ_N(g), c(g) ρ_M(g)], [0, ρ_M(g)]]`, reordered by
/// weight, and checks admissibility of `N → E → M`.
pub fn extension_from_values(
    m: &FilteredObject,
    n: &FilteredObject,
    c: &[ZmMatrix],
) -> Result<Extension> {
    let (split, perm) = n.direct_sum_with_basis(m)?;
    let (rn, rm) = (n.rank(), m.rank());
    let md = m.modulus();
    let action: Vec<ZmMatrix> = (0..m.group().order())
        .map(|g| {
            let mut a = n.action(g).direct_sum(m.action(g));
            a.set_block(0, rn, &c[g].mul_unchecked(m.action(g)));
            a.conjugate_by_permutation(&perm)
        })
        .collect();
    let object =
        FilteredObject::from_total_action(n.mode(), n.chi(), split.pieces().to_vec(), action)?;
    let mut inc = ZmMatrix::zeros(md, rn + rm, rn);
    let mut proj = ZmMatrix::zeros(md, rm, rn + rm);
    for (new, &old) in perm.iter().enumerate() {
        if old < rn {
            inc.set(new, old, 1);
        } else {
            proj.set(old - rn, new, 1);
        }
    }
    let inclusion = FilteredMap::new(n, &object, inc)?;
    let projection = FilteredMap::new(&object, m, proj)?;
    let witness = check_admissible(&inclusion, &projection)?;
    Ok(Extension {
        object,
        inclusion,
        projection,
        witness,
    })
}

/// `Ext¹_F(M, N)`; modes `F` and `Fprime` only.
pub fn ext1(m: &FilteredObject, n: &FilteredObject, budget: &Budget) -> Result<Ext1Group> {
    m.check_compatible(n)?;
    if m.mode() == Mode::Fsecond {
        return Err(Error::Unsupported(
            "Ext in mode Fsecond is reported through the theta report, not classified by extensions".into(),
        ));
    }
    let (fil, plus) = m.hom_positions(n);
    let fil_mod = m.hom_submodule(n, &fil)?;
    let plus_mod = m.hom_submodule(n, &plus)?;
    let md = m.modulus();
    let z1 = kernel(&bar_differential(&plus_mod, 1, budget)?);
    // φ ∈ Hom^fil whose coboundary is strictly raising
    let d0 = bar_differential(&fil_mod, 0, budget)?;
    let kf = fil.len();
    let tuples = d0.cols().checked_div(kf).unwrap_or(0);
    let plus_set: std::collections::HashMap<usize, usize> =
        plus.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut graded_cols = Vec::new();
    let mut plus_cols = Vec::new();
    for t in 0..tuples {
        for (i, p) in fil.iter().enumerate() {
            if plus_set.contains_key(p) {
                plus_cols.push(t * kf + i);
            } else {
                graded_cols.push(t * kf + i);
            }
        }
    }
    let all_rows: Vec<usize> = (0..kf).collect();
    let graded_part = d0.select(&all_rows, &graded_cols);
    let allowed = kernel(&graded_part);
    let rels = allowed.mul_unchecked(&d0.select(&all_rows, &plus_cols));
    let rels = if rels.rows() == 0 {
        ZmMatrix::zeros(md, 0, cochain_dim(&plus_mod, 1))
    } else {
        rels
    };
    let presentation = subquotient(&z1, &rels)?;
    Ok(Ext1Group {
        presentation,
        source: m.clone(),
        target: n.clone(),
        plus_positions: plus,
        plus_module: plus_mod,
    })
}

/// Bounds of the brute-force oracle's domain.
pub const ORACLE_MAX_GROUP: usize = 4;
pub const ORACLE_MAX_MODULUS: u64 = 4;
pub const ORACLE_MAX_RANK: usize = 4;

/// Independent enumeration of `Ext¹_F(M, N)`: every filtered gluing `X(s)` on
/// generators, kept when it defines an action and the triple is graded
/// split, modulo `X ↦ X + φρ_M − ρ_Nφ`; the group structure comes from
/// counting `d`-torsion under Baer sum (`X₁ + X₂`).
pub fn ext1_bruteforce_oracle(
    m: &FilteredObject,
    n: &FilteredObject,
) -> Result<ZmModulePresentation> {
    m.check_compatible(n)?;
    let g = m.group();
    let md = m.modulus();
    if g.order() > ORACLE_MAX_GROUP
        || md > ORACLE_MAX_MODULUS
        || m.rank() + n.rank() > ORACLE_MAX_RANK
    {
        return Err(Error::budget(
            "oracle domain (|G|, m, rank sum)",
            (g.order() as u128) * 1_000_000 + (md as u128) * 1000 + (m.rank() + n.rank()) as u128,
            (ORACLE_MAX_GROUP as u128) * 1_000_000
                + (ORACLE_MAX_MODULUS as u128) * 1000
                + ORACLE_MAX_RANK as u128,
        ));
    }
    if m.mode() == Mode::Fsecond {
        return Err(Error::Unsupported(
            "the oracle classifies graded-split extensions only".into(),
        ));
    }
    let oracle = Oracle::new(m, n);
    let classes = oracle.classes();
    Ok(oracle.group_structure(&classes))
}

struct Oracle<'a> {
    m: &'a FilteredObject,
    n: &'a FilteredObject,
    md: u64,
    /// allowed (row, col) positions of a weight-nondecreasing `N × M` block
    fil: Vec<(usize, usize)>,
    gens: Vec<usize>,
}

/// A candidate gluing: values of `X(g)` (flattened over `fil`) for every element.
type Gluing = Vec<Vec<u64>>;

impl<'a> Oracle<'a> {
    fn new(m: &'a FilteredObject, n: &'a FilteredObject) -> Self {
        let wm = m.basis_weights();
        let wn = n.basis_weights();
        let mut fil = Vec::new();
        for (i, &a) in wn.iter().enumerate() {
            for (j, &b) in wm.iter().enumerate() {
                if a >= b {
                    fil.push((i, j));
                }
            }
        }
        Oracle {
            m,
            n,
            md: m.modulus(),
            fil,
            gens: m.group().generator_indices().to_vec(),
        }
    }

    fn to_matrix(&self, v: &[u64]) -> ZmMatrix {
        let mut a = ZmMatrix::zeros(self.md, self.n.rank(), self.m.rank());
        for (&(i, j), &x) in self.fil.iter().zip(v) {
            a.set(i, j, x);
        }
        a
    }

    fn to_vec(&self, a: &ZmMatrix) -> Vec<u64> {
        self.fil.iter().map(|&(i, j)| a.get(i, j)).collect()
    }

    /// Block matrix `[[ρ_N, X], [0, ρ_M]]` in the concatenated basis.
    fn block(&self, g: usize, x: &ZmMatrix) -> ZmMatrix {
        let mut a = self.n.action(g).direct_sum(self.m.action(g));
        a.set_block(0, self.n.rank(), x);
        a
    }

    fn all_vectors(&self, len: usize) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * self.md as usize);
            for v in &out {
                for x in 0..self.md {
                    let mut w = v.clone();
                    w.push(x);
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }

    /// Extends generator gluings along words; `None` if not an action.
    fn extend(&self, gen_values: &[Vec<u64>]) -> Option<Gluing> {
        let g = self.m.group();
        let gen_blocks: Vec<ZmMatrix> = self
            .gens
            .iter()
            .zip(gen_values)
            .map(|(&s, v)| self.block(s, &self.to_matrix(v)))
            .collect();
        let rn = self.n.rank();
        let rm = self.m.rank();
        let id = ZmMatrix::identity(self.md, rn + rm);
        let all = g.extend_from_generators(id, &gen_blocks, |a, b| a.mul_unchecked(b));
        for a in 0..g.order() {
            for b in 0..g.order() {
                if all[g.mul(a, b)] != all[a].mul_unchecked(&all[b]) {
                    return None;
                }
            }
        }
        Some(
            all.iter()
                .map(|a| self.to_vec(&a.block(0, rn, rn, rm)))
                .collect(),
        )
    }

    /// Brute-force search for graded equivariant sections `[t; 1]` in each weight.
    fn graded_split(&self, gl: &Gluing) -> bool {
        let wn = self.n.basis_weights();
        let wm = self.m.basis_weights();
        let mut weights: Vec<i64> = wm.clone();
        weights.dedup();
        for w in weights {
            let ni: Vec<usize> = (0..wn.len()).filter(|&i| wn[i] == w).collect();
            let mi: Vec<usize> = (0..wm.len()).filter(|&i| wm[i] == w).collect();
            let graded: Vec<ZmMatrix> = (0..self.m.group().order())
                .map(|g| self.to_matrix(&gl[g]).select(&ni, &mi))
                .collect();
            if graded.iter().all(|x| x.is_zero()) {
                continue;
            }
            let found = self.all_vectors(ni.len() * mi.len()).into_iter().any(|t| {
                let t = ZmMatrix::from_data(self.md, ni.len(), mi.len(), t);
                self.gens.iter().all(|&s| {
                    // section s ↦ [t; 1]: ρ_N t + X = t ρ_M on the weight-w blocks
                    let rn = self.n.action(s).select(&ni, &ni);
                    let rm = self.m.action(s).select(&mi, &mi);
                    rn.mul_unchecked(&t).add(&graded[s]) == t.mul_unchecked(&rm)
                })
            });
            if !found {
                return false;
            }
        }
        true
    }

    fn admissible_gluings(&self) -> Vec<Gluing> {
        let g = self.m.group();
        let id = ZmMatrix::identity(self.md, self.n.rank() + self.m.rank());
        // necessary condition per generator: the block has the generator's order
        let choices: Vec<Vec<Vec<u64>>> = self
            .gens
            .iter()
            .map(|&s| {
                let mut order = 1;
                let mut x = s;
                while x != g.identity() {
                    x = g.mul(x, s);
                    order += 1;
                }
                self.all_vectors(self.fil.len())
                    .into_iter()
                    .filter(|v| {
                        let b = self.block(s, &self.to_matrix(v));
                        (1..order).fold(b.clone(), |acc, _| acc.mul_unchecked(&b)) == id
                    })
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; self.gens.len()];
        if choices.iter().any(|c| c.is_empty()) {
            return out;
        }
        loop {
            let gen_values: Vec<Vec<u64>> = idx
                .iter()
                .zip(&choices)
                .map(|(&i, c)| c[i].clone())
                .collect();
            if let Some(gl) = self.extend(&gen_values) {
                if self.graded_split(&gl) {
                    out.push(gl);
                }
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return out;
                }
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// Orbit of a gluing under filtered conjugation `X ↦ X + φρ_M − ρ_Nφ`.
    fn orbit<'p>(
        &'p self,
        gl: &'p Gluing,
        phis: &'p [ZmMatrix],
    ) -> impl Iterator<Item = Gluing> + 'p {
        let g = self.m.group();
        let xs: Vec<ZmMatrix> = gl.iter().map(|v| self.to_matrix(v)).collect();
        phis.iter().map(move |phi| {
            (0..g.order())
                .map(|x| {
                    let y = xs[x]
                        .add(&phi.mul_unchecked(self.m.action(x)))
                        .sub(&self.n.action(x).mul_unchecked(phi));
                    self.to_vec(&y)
                })
                .collect()
        })
    }

    /// Admissible gluings up to filtered conjugation, with a lookup from every
    /// admissible gluing to the index of its class.
    fn classes(&self) -> (usize, HashMap<Gluing, usize>) {
        let phis: Vec<ZmMatrix> = self
            .all_vectors(self.fil.len())
            .iter()
            .map(|v| self.to_matrix(v))
            .collect();
        let mut class_of = HashMap::new();
        let mut count = 0;
        for gl in self.admissible_gluings() {
            if class_of.contains_key(&gl) {
                continue;
            }
            for y in self.orbit(&gl, &phis) {
                class_of.insert(y, count);
            }
            count += 1;
        }
        (count, class_of)
    }

    /// Invariant factors from torsion counts `#{x : d x = 0}` for prime powers `d | m`.
    fn group_structure(
        &self,
        (count, class_of): &(usize, HashMap<Gluing, usize>),
    ) -> ZmModulePresentation {
        let md = self.md;
        let mut reps: Vec<Option<&Gluing>> = vec![None; *count];
        for (gl, &c) in class_of {
            reps[c].get_or_insert(gl);
        }
        let zero = class_of[&vec![vec![0; self.fil.len()]; self.m.group().order()]];
        // multiples of a cocycle are cocycles, so every scaled class is in the table
        let scaled_class = |gl: &Gluing, d: u64| -> usize {
            let y: Gluing = gl
                .iter()
                .map(|v| v.iter().map(|&x| (x * d) % md).collect())
                .collect();
            class_of[&y]
        };
        let mut factors: Vec<u64> = Vec::new();
        for (p, e) in crate::zm::arith::factorize(md) {
            // t_k = log_p #{x : p^k x = 0}; multiplicity of exponent ≥ k is t_k − t_{k−1}
            let mut t = vec![0u32];
            for k in 1..=e {
                let d = p.pow(k);
                let count = reps
                    .iter()
                    .flatten()
                    .filter(|c| scaled_class(c, d) == zero)
                    .count();
                t.push(crate::zm::arith::valuation(count as u64, p));
            }
            for k in 1..=e as usize {
                let at_least_k = t[k] - t[k - 1];
                let at_least_next = if k < e as usize { t[k + 1] - t[k] } else { 0 };
                for _ in 0..(at_least_k - at_least_next) {
                    factors.push(p.pow(k as u32));
                }
            }
        }
        let factors = crate::zm::normalize_factors(&factors);
        let n = factors.len();
        let rels: Vec<Vec<u64>> = factors
            .iter()
            .enumerate()
            .map(|(i, &d)| (0..n).map(|j| if i == j { d % md } else { 0 }).collect())
            .collect();
        ZmModulePresentation::cokernel(&ZmMatrix::from_residue_rows(md, n, &rels))
            .expect("diagonal relations")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtered::Piece;
    use crate::gmodule::TwistCharacter;
    use crate::group::FiniteGroup;

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn hom_examples() {
        let g = FiniteGroup::cyclic(2);
        let chi = TwistCharacter::from_generator_values(&g, 4, &[3]).unwrap();
        let one = FilteredObject::unit(Mode::F, &chi);
        let h = hom_f(&one, &one).unwrap();
        assert_eq!(h.shape().invariant_factors, vec![4]);
        let idc = h.coordinates(&FilteredMap::identity(&one)).unwrap();
        assert_eq!(idc, vec![1]);
        let t1 = FilteredObject::tate(Mode::F, &chi, 1);
        assert_eq!(hom_f(&one, &t1).unwrap().shape().invariant_factors, vec![2]);
        assert!(hom_f(&t1, &one).unwrap().shape().is_zero());
    }

    #[test]
    fn ext1_examples() {
        let g = FiniteGroup::cyclic(2);
        let chi = TwistCharacter::trivial(&g, 2);
        let one = FilteredObject::unit(Mode::F, &chi);
        let t1 = FilteredObject::tate(Mode::F, &chi, 1);
        assert!(ext1(&one, &one, &budget()).unwrap().shape().is_zero());
        let e = ext1(&one, &t1, &budget()).unwrap();
        assert_eq!(e.shape().invariant_factors, vec![2]);
        for ext in e.extensions().unwrap() {
            assert!(ext.witness.is_admissible());
            assert!(!ext.object.is_split());
        }
        assert!(ext1(&t1, &one, &budget()).unwrap().shape().is_zero());
    }

    #[test]
    fn oracle_examples() {
        let g = FiniteGroup::cyclic(2);
        let chi = TwistCharacter::trivial(&g, 2);
        let one = FilteredObject::unit(Mode::F, &chi);
        let t1 = FilteredObject::tate(Mode::F, &chi, 1);
        assert!(ext1_bruteforce_oracle(&one, &one).unwrap().is_zero());
        assert_eq!(
            ext1_bruteforce_oracle(&one, &t1)
                .unwrap()
                .invariant_factors(),
            &[2]
        );
    }

    #[test]
    fn fsecond_is_rejected() {
        let g = FiniteGroup::cyclic(2);
        let chi = TwistCharacter::trivial(&g, 2);
        let one = FilteredObject::unit(Mode::Fsecond, &chi);
        assert!(matches!(
            ext1(&one, &one, &budget()),
            Err(Error::Unsupported(_))
        ));
    }

    fn sample_objects(chi: &TwistCharacter, mode: Mode) -> Vec<FilteredObject> {
        let g = chi.group();
        let mut out: Vec<FilteredObject> = (-1..=2)
            .map(|j| FilteredObject::tate(mode, chi, j))
            .collect();
        let regular = crate::group::GSet::coset_space(&g.trivial_subgroup());
        if regular.size() <= 2 {
            for w in 0..=1 {
                let piece = Piece::permutational(regular.clone(), chi, w);
                out.push(FilteredObject::split(mode, chi, vec![piece]).unwrap());
            }
        }
        let one = FilteredObject::unit(mode, chi);
        let t1 = FilteredObject::tate(mode, chi, 1);
        for ext in ext1(&one, &t1, &budget()).unwrap().extensions().unwrap() {
            out.push(ext.object);
        }
        out
    }

    #[test]
    fn engine_agrees_with_oracle() {
        let groups = [
            FiniteGroup::cyclic(2),
            FiniteGroup::cyclic(3),
            FiniteGroup::cyclic(4),
            FiniteGroup::klein_four(),
        ];
        for g in &groups {
            for m in 2..=ORACLE_MAX_MODULUS {
                for values in g.characters(m) {
                    let chi = TwistCharacter::new(g, m, values.clone()).unwrap();
                    for mode in [Mode::F, Mode::Fprime] {
                        let objs = sample_objects(&chi, mode);
                        for a in &objs {
                            for b in &objs {
                                if a.rank() + b.rank() > ORACLE_MAX_RANK {
                                    continue;
                                }
                                let engine = ext1(a, b, &budget()).unwrap();
                                let oracle = ext1_bruteforce_oracle(a, b).unwrap();
                                assert_eq!(
                                    engine.shape().invariant_factors,
                                    oracle.invariant_factors(),
                                    "|G|={} m={m} chi={values:?} {mode} weights {:?} -> {:?}",
                                    g.order(),
                                    a.basis_weights(),
                                    b.basis_weights()
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}
