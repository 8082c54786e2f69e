//! Explicit comparison maps for induction and restriction of filtered
//! objects: both Frobenius adjunctions on Hom and Ext¹, the projection
//! formula, and the double-coset decomposition of a product of coset spaces.
//!
//! Each check builds the comparison map itself and verifies that it is a
//! bijection, rather than only comparing invariant factors.

use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ext::{ext1, hom_f, Ext1Group};
use crate::filtered::{FilteredMap, FilteredObject, Mode, PermutationalObject};
use crate::gmodule::TwistCharacter;
use crate::group::{double_cosets, GSet, Subgroup};
use crate::zm::arith::{self, Order};
use crate::zm::{span_order, ModuleShape, ZmMatrix};

/// Outcome of one comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub statement: String,
    /// The side computed over the ambient group.
    pub ambient: ModuleShape,
    /// The side computed over the subgroup (or the other side of an isomorphism).
    pub local: ModuleShape,
    /// Order of the image of the explicit comparison map.
    pub image: Order,
    pub holds: bool,
}

impl Witness {
    fn new(statement: String, ambient: ModuleShape, local: ModuleShape, image: Order) -> Self {
        let holds = ambient == local && image == ambient.order();
        Witness {
            statement,
            ambient,
            local,
            image,
            holds,
        }
    }
}

/// `Ind_H X` with, for each raw vector `r_i ⊗ e_k`, its stored index and the
/// scalar `s` with `r_i ⊗ e_k = s · f_n`.
struct Induced {
    object: FilteredObject,
    raw: Vec<(usize, u64)>,
    reps: Vec<usize>,
    rank: usize,
}

impl Induced {
    fn new(x: &FilteredObject, h: &Subgroup, chi: &TwistCharacter) -> Result<Self> {
        let (object, raw) = x.induce_with_basis(h, chi)?;
        Ok(Induced {
            object,
            raw,
            reps: h.coset_representatives(),
            rank: x.rank(),
        })
    }

    fn stored(&self, coset: usize, k: usize) -> (usize, u64) {
        self.raw[coset * self.rank + k]
    }
}

fn local_index(h: &Subgroup, hg: &crate::group::Group) -> Result<Vec<usize>> {
    let big = h.group();
    let mut local = vec![usize::MAX; big.order()];
    for &x in h.elements() {
        local[x] = hg.index_of(big.element(x)).ok_or(Error::AmbientMismatch)?;
    }
    Ok(local)
}

fn inv(c: u64, m: u64) -> u64 {
    arith::inv(c, m).expect("basis scalars are units")
}

/// Order of the subgroup of `⊕ Z/d_i` spanned by coordinate rows.
fn image_order(factors: &[u64], m: u64, coords: &[Vec<u64>]) -> Order {
    let n = factors.len();
    let rels: Vec<Vec<u64>> = factors
        .iter()
        .enumerate()
        .map(|(i, &d)| (0..n).map(|j| if i == j { d % m } else { 0 }).collect())
        .collect();
    let rel = ZmMatrix::from_residue_rows(m, n, &rels);
    let all = ZmMatrix::from_residue_rows(m, n, coords).vstack(&rel);
    span_order(&all)
        .div(&span_order(&rel))
        .expect("relations lie in the span")
}

fn flatten(a: &ZmMatrix) -> Vec<u64> {
    (0..a.rows())
        .flat_map(|i| (0..a.cols()).map(move |j| a.get(i, j)))
        .collect()
}

/// `Hom_G(Ind X, Y) ≅ Hom_H(X, Res Y)` through `φ ↦ (r_i ⊗ x ↦ r_i φ(x))`.
pub fn hom_left(x: &FilteredObject, h: &Subgroup, y: &FilteredObject) -> Result<Witness> {
    let m = y.modulus();
    let ind = Induced::new(x, h, y.chi())?;
    let res_y = y.restrict(h)?;
    let local = hom_f(x, &res_y)?;
    let ambient = hom_f(&ind.object, y)?;
    let mut images = Vec::new();
    for phi in local.generators() {
        let mut big = ZmMatrix::zeros(m, y.rank(), ind.object.rank());
        for (i, &r) in ind.reps.iter().enumerate() {
            let col = y.action(r).mul_unchecked(phi.matrix());
            for k in 0..x.rank() {
                let (n, s) = ind.stored(i, k);
                let si = inv(s, m);
                for row in 0..y.rank() {
                    big.set(row, n, col.get(row, k) * si % m);
                }
            }
        }
        images.push(flatten(FilteredMap::new(&ind.object, y, big)?.matrix()));
    }
    let image = span_order(&ZmMatrix::from_residue_rows(
        m,
        y.rank() * ind.object.rank(),
        &images,
    ));
    Ok(Witness::new(
        "Hom(Ind X, Y) = Hom(X, Res Y)".into(),
        ambient.shape(),
        local.shape(),
        image,
    ))
}

/// `Hom_G(Y, Ind X) ≅ Hom_H(Res Y, X)` through `ψ ↦ (y ↦ Σ r_i ⊗ ψ(r_i⁻¹ y))`.
pub fn hom_right(y: &FilteredObject, x: &FilteredObject, h: &Subgroup) -> Result<Witness> {
    let m = y.modulus();
    let g = y.group().clone();
    let ind = Induced::new(x, h, y.chi())?;
    let res_y = y.restrict(h)?;
    let local = hom_f(&res_y, x)?;
    let ambient = hom_f(y, &ind.object)?;
    let mut images = Vec::new();
    for psi in local.generators() {
        let big = coinduced_map(&ind, x.rank(), m, |i| {
            psi.matrix().mul_unchecked(y.action(g.inv(ind.reps[i])))
        });
        images.push(flatten(FilteredMap::new(y, &ind.object, big)?.matrix()));
    }
    let image = span_order(&ZmMatrix::from_residue_rows(
        m,
        y.rank() * ind.object.rank(),
        &images,
    ));
    Ok(Witness::new(
        "Hom(Y, Ind X) = Hom(Res Y, X)".into(),
        ambient.shape(),
        local.shape(),
        image,
    ))
}

/// `Σ_i E_i · block(i)`, where `E_i` places `X` in the summand of coset `i`.
fn coinduced_map(
    ind: &Induced,
    rank_x: usize,
    m: u64,
    block: impl Fn(usize) -> ZmMatrix,
) -> ZmMatrix {
    let cols = block(0).cols();
    let mut out = ZmMatrix::zeros(m, ind.object.rank(), cols);
    for i in 0..ind.reps.len() {
        let b = block(i);
        for k in 0..rank_x {
            let (n, s) = ind.stored(i, k);
            for c in 0..cols {
                out.set(n, c, (out.get(n, c) + s * b.get(k, c)) % m);
            }
        }
    }
    out
}

/// Packs values `C(g)` into a normalized 1-cochain of `Hom⁺`; fails if a value
/// leaves the strictly raising positions.
fn cochain(group: &Ext1Group, values: &[ZmMatrix], source_rank: usize) -> Result<Vec<u64>> {
    let plus = group.plus_positions();
    let mut out = Vec::with_capacity((values.len() - 1) * plus.len());
    for v in &values[1..] {
        let mut inside = vec![false; v.rows() * v.cols()];
        for &p in plus {
            inside[p] = true;
            out.push(v.get(p / source_rank, p % source_rank));
        }
        if flatten(v)
            .iter()
            .zip(&inside)
            .any(|(&e, &ok)| e != 0 && !ok)
        {
            return Err(Error::InvalidObject(
                "comparison cocycle is not strictly weight-raising".into(),
            ));
        }
    }
    Ok(out)
}

/// `Ext¹_G(Ind X, Y) ≅ Ext¹_H(X, Res Y)`: induce an extension, then push out
/// along the counit `Ind Res Y → Y`.
pub fn ext_left(
    x: &FilteredObject,
    h: &Subgroup,
    y: &FilteredObject,
    budget: &Budget,
) -> Result<Witness> {
    let m = y.modulus();
    let g = y.group().clone();
    let ind = Induced::new(x, h, y.chi())?;
    let res_y = y.restrict(h)?;
    let local_index = local_index(h, res_y.group())?;
    let local = ext1(x, &res_y, budget)?;
    let ambient = ext1(&ind.object, y, budget)?;
    let ca = h.coset_action();
    let mut coords = Vec::new();
    for c in local.representatives() {
        let values: Vec<ZmMatrix> = (0..g.order())
            .map(|a| {
                let mut v = ZmMatrix::zeros(m, y.rank(), ind.object.rank());
                for (j, &r) in ind.reps.iter().enumerate() {
                    // g⁻¹ r_j = r_i h′, so r_j⁻¹ g r_i = h′⁻¹
                    let (_, hp) = ca.act(g.inv(a), j);
                    let block = y
                        .action(r)
                        .mul_unchecked(&local.cocycle_value(c, local_index[g.inv(hp)]));
                    for k in 0..x.rank() {
                        let (n, s) = ind.stored(j, k);
                        let si = inv(s, m);
                        for row in 0..y.rank() {
                            v.set(row, n, block.get(row, k) * si % m);
                        }
                    }
                }
                v
            })
            .collect();
        coords.push(ambient.class_of(&cochain(&ambient, &values, ind.object.rank())?)?);
    }
    let image = image_order(ambient.presentation().invariant_factors(), m, &coords);
    Ok(Witness::new(
        "Ext1(Ind X, Y) = Ext1(X, Res Y)".into(),
        ambient.shape(),
        local.shape(),
        image,
    ))
}

/// `Ext¹_G(Y, Ind X) ≅ Ext¹_H(Res Y, X)`: induce an extension, then pull back
/// along the unit `Y → Ind Res Y`.
pub fn ext_right(
    y: &FilteredObject,
    x: &FilteredObject,
    h: &Subgroup,
    budget: &Budget,
) -> Result<Witness> {
    let m = y.modulus();
    let g = y.group().clone();
    let ind = Induced::new(x, h, y.chi())?;
    let res_y = y.restrict(h)?;
    let local_index = local_index(h, res_y.group())?;
    let local = ext1(&res_y, x, budget)?;
    let ambient = ext1(y, &ind.object, budget)?;
    let ca = h.coset_action();
    let mut coords = Vec::new();
    for c in local.representatives() {
        let values: Vec<ZmMatrix> = (0..g.order())
            .map(|a| {
                coinduced_map(&ind, x.rank(), m, |j| {
                    let (_, hp) = ca.act(g.inv(a), j);
                    local
                        .cocycle_value(c, local_index[g.inv(hp)])
                        .mul_unchecked(y.action(g.inv(ind.reps[j])))
                })
            })
            .collect();
        coords.push(ambient.class_of(&cochain(&ambient, &values, y.rank())?)?);
    }
    let image = image_order(ambient.presentation().invariant_factors(), m, &coords);
    Ok(Witness::new(
        "Ext1(Y, Ind X) = Ext1(Res Y, X)".into(),
        ambient.shape(),
        local.shape(),
        image,
    ))
}

fn iso_witness(
    statement: String,
    map: Result<FilteredMap>,
    rank_l: usize,
    rank_r: usize,
    m: u64,
) -> Witness {
    let ambient = ModuleShape::free(m, rank_l);
    let local = ModuleShape::free(m, rank_r);
    match map {
        Ok(f) if f.is_isomorphism() => {
            Witness::new(statement, ambient.clone(), local, ambient.order())
        }
        Ok(f) => {
            let image = span_order(&f.matrix().transpose());
            Witness {
                statement,
                ambient,
                local,
                image,
                holds: false,
            }
        }
        Err(_) => Witness {
            statement,
            ambient,
            local,
            image: Order::one(),
            holds: false,
        },
    }
}

fn inverse_perm(perm: &[usize]) -> Vec<usize> {
    let mut out = vec![0; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        out[old] = new;
    }
    out
}

/// `Ind(X ⊗ Res Y) ≅ Ind X ⊗ Y` through `r_i ⊗ x ⊗ y ↦ (r_i ⊗ x) ⊗ r_i y`.
pub fn projection_formula(x: &FilteredObject, h: &Subgroup, y: &FilteredObject) -> Result<Witness> {
    let m = y.modulus();
    let res_y = y.restrict(h)?;
    let (inner, inner_perm) = x.tensor_with_basis(&res_y)?;
    let lhs = Induced::new(&inner, h, y.chi())?;
    let ind_x = Induced::new(x, h, y.chi())?;
    let (rhs, rhs_perm) = ind_x.object.tensor_with_basis(y)?;
    let rhs_pos = inverse_perm(&rhs_perm);
    let ry = y.rank();
    let mut a = ZmMatrix::zeros(m, rhs.rank(), lhs.object.rank());
    for (i, &r) in lhs.reps.iter().enumerate() {
        let act = y.action(r);
        for (t, &raw) in inner_perm.iter().enumerate() {
            let (xa, yb) = (raw / ry, raw % ry);
            let (n, s) = lhs.stored(i, t);
            let (n2, s2) = ind_x.stored(i, xa);
            let scale = s2 * inv(s, m) % m;
            for b2 in 0..ry {
                let v = act.get(b2, yb);
                if v != 0 {
                    let row = rhs_pos[n2 * ry + b2];
                    a.set(row, n, (a.get(row, n) + scale * v) % m);
                }
            }
        }
    }
    let map = FilteredMap::new(&lhs.object, &rhs, a);
    Ok(iso_witness(
        "Ind(X (x) Res Y) = Ind X (x) Y".into(),
        map,
        lhs.object.rank(),
        rhs.rank(),
        m,
    ))
}

/// `Z/m[G/H] ⊗ Z/m[G/K] ≅ ⊕_{HxK} Z/m[G/(H^x ∩ K)]` through the G-set map
/// `a(H^x ∩ K) ↦ (a x⁻¹ H, a K)`.
pub fn double_coset_decomposition(
    h: &Subgroup,
    k: &Subgroup,
    chi: &TwistCharacter,
) -> Result<Witness> {
    let g = h.group().clone();
    let m = chi.modulus();
    let (gh, gk) = (GSet::coset_space(h), GSet::coset_space(k));
    let product = gh.product(&gk)?;
    let (ch, ck) = (h.coset_action(), k.coset_action());
    let mut union = GSet::empty(&g);
    let mut points = Vec::new();
    for dc in double_cosets(h, k)? {
        let x = dc.representative;
        union = union.disjoint_union(&GSet::coset_space(&dc.intersection))?;
        for a in dc.intersection.coset_representatives() {
            let first = ch.coset_of[g.mul(a, g.inv(x))];
            let second = ck.coset_of[a];
            points.push(first * gk.size() + second);
        }
    }
    let lhs = PermutationalObject::new(product, chi, 0)?.to_filtered(Mode::F);
    let rhs = PermutationalObject::new(union, chi, 0)?.to_filtered(Mode::F);
    let mut a = ZmMatrix::zeros(m, lhs.rank(), rhs.rank());
    for (col, &row) in points.iter().enumerate() {
        a.set(row, col, 1);
    }
    let map = FilteredMap::new(&rhs, &lhs, a);
    Ok(iso_witness(
        "G/H x G/K = sum of G/(H^x n K)".into(),
        map,
        lhs.rank(),
        rhs.rank(),
        m,
    ))
}

/// Every comparison for every pair of subgroups of the character's group.
///
/// Objects over `H` are `Z/m(0)` and `Z/m(1)`; objects over `G` are Tate
/// objects and the coset modules `Z/m[G/K]` in weights 0 and 1.
pub fn check_all(chi: &TwistCharacter, budget: &Budget) -> Result<Vec<Witness>> {
    let g = chi.group().clone();
    let subgroups = g.all_subgroups(budget.subgroup_bound)?;
    let mut ambient_objects = vec![
        FilteredObject::tate(Mode::F, chi, 0),
        FilteredObject::tate(Mode::F, chi, 1),
    ];
    for k in g.subgroups_up_to_conjugacy(budget.subgroup_bound)? {
        if !k.is_whole() {
            for w in [0, 1] {
                ambient_objects.push(
                    PermutationalObject::new(GSet::coset_space(&k), chi, w)?.to_filtered(Mode::F),
                );
            }
        }
    }
    let mut out = Vec::new();
    for h in &subgroups {
        let chi_h = chi.restrict(h)?;
        let local_objects = [
            FilteredObject::tate(Mode::F, &chi_h, 0),
            FilteredObject::tate(Mode::F, &chi_h, 1),
        ];
        for x in &local_objects {
            for y in &ambient_objects {
                out.push(hom_left(x, h, y)?);
                out.push(hom_right(y, x, h)?);
                out.push(ext_left(x, h, y, budget)?);
                out.push(ext_right(y, x, h, budget)?);
                out.push(projection_formula(x, h, y)?);
            }
        }
        for k in &subgroups {
            out.push(double_coset_decomposition(h, k, chi)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    #[test]
    fn z2_regular_module() {
        let g = FiniteGroup::cyclic(2);
        let chi = TwistCharacter::trivial(&g, 2);
        let e = g.trivial_subgroup();
        let chi_e = chi.restrict(&e).unwrap();
        let x = FilteredObject::tate(Mode::F, &chi_e, 0);
        let y = FilteredObject::tate(Mode::F, &chi, 1);
        let w = hom_left(&x, &e, &FilteredObject::tate(Mode::F, &chi, 0)).unwrap();
        assert!(w.holds, "{w:?}");
        assert_eq!(w.ambient, ModuleShape::from_factors(2, &[2]));
        // no cocycles over the trivial group
        let w = ext_left(&x, &e, &y, &Budget::default()).unwrap();
        assert!(w.holds && w.local.is_zero(), "{w:?}");
        let w = double_coset_decomposition(&e, &e, &chi).unwrap();
        assert!(w.holds);
        assert_eq!(w.ambient.invariant_factors.len(), 4);
    }

    #[test]
    fn index_two_in_cyclic_four() {
        let g = FiniteGroup::cyclic(4);
        let chi = TwistCharacter::trivial(&g, 2);
        let h = g.closure(&[g.mul(g.generator_indices()[0], g.generator_indices()[0])]);
        let chi_h = chi.restrict(&h).unwrap();
        let b = Budget::default();
        let one_h = FilteredObject::tate(Mode::F, &chi_h, 0);
        let w = ext_left(&one_h, &h, &FilteredObject::tate(Mode::F, &chi, 1), &b).unwrap();
        assert!(w.holds, "{w:?}");
        assert_eq!(w.local, ModuleShape::from_factors(2, &[2]));
        let w = ext_right(&FilteredObject::tate(Mode::F, &chi, -1), &one_h, &h, &b).unwrap();
        assert!(w.holds, "{w:?}");
        assert_eq!(w.local, ModuleShape::from_factors(2, &[2]));
    }

    #[test]
    fn s3_with_sign_character() {
        let g = FiniteGroup::symmetric(3);
        for values in g.characters(4) {
            let chi = TwistCharacter::new(&g, 4, values).unwrap();
            let ws = check_all(&chi, &Budget::default()).unwrap();
            let bad: Vec<_> = ws.iter().filter(|w| !w.holds).collect();
            assert!(bad.is_empty(), "{bad:?}");
        }
    }

    #[test]
    fn a_wrong_map_is_caught() {
        let g = FiniteGroup::cyclic(2);
        let chi = TwistCharacter::trivial(&g, 2);
        let x = FilteredObject::tate(Mode::F, &chi, 0);
        let zero = FilteredMap::new(&x, &x, ZmMatrix::zeros(2, 1, 1));
        assert!(!iso_witness("zero".into(), zero, 1, 1, 2).holds);
    }
}
