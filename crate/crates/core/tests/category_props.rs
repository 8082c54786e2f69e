//! The filtered categories: generation by coset modules, exactness of the
//! standard functors, Mackey decomposition, the normal form, and Ext¹.

use std::collections::BTreeMap;

use artin_tate::adjunction::{ext_left, ext_right};
use artin_tate::budget::Budget;
use artin_tate::cohomology::cohomology;
use artin_tate::ext::{ext1, hom_f, Extension};
use artin_tate::filtered::{
    check_admissible, mcc_cover, split_triple, FilteredMap, FilteredObject, Mode,
    PermutationalObject, Piece,
};
use artin_tate::gmodule::{GModule, TwistCharacter};
use artin_tate::group::{double_cosets, FiniteGroup, GSet, Group, Subgroup};
use artin_tate::problem::{
    FilteredDescriptor, GSetDescriptor, ObjectDescriptor, PieceDescriptor, Problem, ProblemFile,
    TwistDescriptor,
};
use artin_tate::zm::ZmMatrix;
use proptest::prelude::*;

fn groups() -> Vec<Group> {
    vec![
        FiniteGroup::trivial(),
        FiniteGroup::cyclic(2),
        FiniteGroup::cyclic(3),
        FiniteGroup::cyclic(4),
        FiniteGroup::klein_four(),
        FiniteGroup::symmetric(3),
    ]
}

fn characters() -> Vec<TwistCharacter> {
    let mut out = Vec::new();
    for g in groups() {
        for m in 2..=4 {
            for values in g.characters(m) {
                out.push(TwistCharacter::new(&g, m, values).unwrap());
            }
        }
    }
    out
}

fn character() -> impl Strategy<Value = TwistCharacter> {
    let all = characters();
    any::<prop::sample::Index>().prop_map(move |i| all[i.index(all.len())].clone())
}

fn budget() -> Budget {
    Budget::default()
}

fn subgroup(chi: &TwistCharacter, pick: prop::sample::Index) -> Subgroup {
    let subs = chi.group().all_subgroups(48).unwrap();
    subs[pick.index(subs.len())].clone()
}

fn coset_piece(chi: &TwistCharacter, pick: prop::sample::Index, weight: i64) -> Piece {
    Piece::permutational(GSet::coset_space(&subgroup(chi, pick)), chi, weight)
}

/// A split object with one coset-module piece per requested weight.
fn split_object(
    chi: &TwistCharacter,
    weights: &[i64],
    picks: &[prop::sample::Index],
) -> FilteredObject {
    let pieces = weights
        .iter()
        .zip(picks)
        .map(|(&w, &p)| coset_piece(chi, p, w))
        .collect();
    FilteredObject::split(Mode::F, chi, pieces).unwrap()
}

/// An admissible extension of a weight-0 coset module by a weight-1 one,
/// for a cocycle chosen by `coeffs` among the Ext¹ generators.
fn extension(chi: &TwistCharacter, picks: [prop::sample::Index; 2], coeffs: &[u64]) -> Extension {
    let m = FilteredObject::split(Mode::F, chi, vec![coset_piece(chi, picks[0], 0)]).unwrap();
    let n = FilteredObject::split(Mode::F, chi, vec![coset_piece(chi, picks[1], 1)]).unwrap();
    let group = ext1(&m, &n, &budget()).unwrap();
    let md = chi.modulus();
    let len = artin_tate::cohomology::cochain_dim(group.cocycle_module(), 1);
    let mut cocycle = vec![0u64; len];
    for (rep, &c) in group.representatives().iter().zip(coeffs.iter().cycle()) {
        for (x, r) in cocycle.iter_mut().zip(rep) {
            *x = (*x + c * r) % md;
        }
    }
    group.extension(&cocycle).unwrap()
}

/// `f ⊗ 1_X` in the bases chosen by `tensor_with_basis`.
fn tensor_map(f: &FilteredMap, x: &FilteredObject) -> FilteredMap {
    let (src, ps) = f.source().tensor_with_basis(x).unwrap();
    let (tgt, pt) = f.target().tensor_with_basis(x).unwrap();
    let r = x.rank();
    let mut a = ZmMatrix::zeros(x.modulus(), tgt.rank(), src.rank());
    for (i, &ot) in pt.iter().enumerate() {
        for (j, &os) in ps.iter().enumerate() {
            if ot % r == os % r {
                a.set(i, j, f.matrix().get(ot / r, os / r));
            }
        }
    }
    FilteredMap::new(&src, &tgt, a).unwrap()
}

/// A map between objects whose bases are unchanged by a functor.
fn transport(f: &FilteredMap, source: &FilteredObject, target: &FilteredObject) -> FilteredMap {
    let a = f.matrix().reduce_mod(source.modulus()).unwrap();
    FilteredMap::new(source, target, a).unwrap()
}

fn assert_admissible(i: &FilteredMap, p: &FilteredMap) -> Result<(), TestCaseError> {
    let verdict = check_admissible(i, p).unwrap();
    prop_assert!(verdict.is_admissible(), "{:?}", verdict);
    Ok(())
}

/// The problem-file form of an object in mode F with permutational pieces.
fn descriptor(x: &FilteredObject) -> ObjectDescriptor {
    let g = x.group();
    let gens = g.generator_indices();
    let weights = x
        .pieces()
        .iter()
        .map(|p| {
            let s = p.gset().expect("permutational piece");
            let gset = GSetDescriptor {
                size: s.size(),
                generators: gens
                    .iter()
                    .map(|&k| s.action_of(k).iter().map(|y| y + 1).collect())
                    .collect(),
            };
            let piece = PieceDescriptor {
                gset: Some(gset),
                cosets: None,
                module: None,
                twist: Some(p.weight()),
            };
            (p.weight().to_string(), piece)
        })
        .collect();
    // u(s) = ρ_gr(s)⁻¹ ρ(s) − 1
    let graded = x.graded_module();
    let id = ZmMatrix::identity(x.modulus(), x.rank());
    let u = gens
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            let u = graded.action(g.inv(s)).mul(x.action(s)).unwrap().sub(&id);
            (
                k.to_string(),
                (0..u.rows())
                    .map(|i| (0..u.cols()).map(|j| u.get(i, j)).collect())
                    .collect(),
            )
        })
        .collect();
    ObjectDescriptor::Filtered(FilteredDescriptor {
        mode: Some(x.mode()),
        weights,
        u,
    })
}

fn roundtrip(x: &FilteredObject) -> FilteredObject {
    let file = ProblemFile {
        modulus: x.modulus(),
        group: x.group().descriptor(),
        twist: Some(TwistDescriptor {
            character: x.chi().values().to_vec(),
        }),
        mode: Mode::F,
        seed: None,
        budget: Budget::default(),
        objects: BTreeMap::from([("x".to_string(), descriptor(x))]),
        queries: Vec::new(),
    };
    let text = serde_json::to_string(&file).unwrap();
    let parsed = artin_tate::problem::parse_problem(&text).unwrap();
    Problem::resolve(parsed)
        .unwrap()
        .objects
        .remove("x")
        .unwrap()
}

fn index() -> impl Strategy<Value = prop::sample::Index> {
    any::<prop::sample::Index>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn permutational_objects_are_covered_by_coset_modules(
        chi in character(),
        picks in prop::collection::vec(index(), 1..=3),
        extra in index(),
        j in -1i64..=2,
    ) {
        let g = chi.group().clone();
        let mut set = GSet::empty(&g);
        for p in &picks {
            set = set.disjoint_union(&GSet::coset_space(&subgroup(&chi, *p))).unwrap();
        }
        let obj = PermutationalObject::new(set, &chi, j).unwrap();
        let (source, cover) = mcc_cover(&obj, Mode::F).unwrap();
        prop_assert!(cover.is_isomorphism());
        let zero = FilteredObject::zero(Mode::F, &chi);
        assert_admissible(&FilteredMap::zero(&zero, &source), &cover)?;
        // a redundant summand becomes the kernel of an admissible epimorphism
        let spare = PermutationalObject::new(GSet::coset_space(&subgroup(&chi, extra)), &chi, j)
            .unwrap()
            .to_filtered(Mode::F);
        let (inc, proj) = split_triple(&spare, &source).unwrap();
        assert_admissible(&inc, &proj.then(&cover).unwrap())?;
    }

    #[test]
    fn tensoring_preserves_admissible_triples(
        chi in character(),
        picks in (index(), index()),
        coeffs in prop::collection::vec(0u64..4, 1..=3),
        x_picks in prop::collection::vec(index(), 2),
        x_weights in prop::sample::select(vec![vec![0], vec![1], vec![-1], vec![1, 0], vec![2, -1]]),
    ) {
        let e = extension(&chi, [picks.0, picks.1], &coeffs);
        prop_assume!(e.object.rank() <= 6);
        prop_assert!(e.witness.is_admissible());
        let x = split_object(&chi, &x_weights, &x_picks);
        prop_assume!(x.rank() * e.object.rank() <= 24);
        assert_admissible(&tensor_map(&e.inclusion, &x), &tensor_map(&e.projection, &x))?;
        // and with a glued object as the second factor
        let y = extension(&chi, [x_picks[0], x_picks[1]], &[1]).object;
        prop_assume!(y.rank() * e.object.rank() <= 24);
        assert_admissible(&tensor_map(&e.inclusion, &y), &tensor_map(&e.projection, &y))?;
    }

    #[test]
    fn restriction_and_coefficient_change_preserve_admissible_triples(
        chi in character(),
        picks in (index(), index(), index()),
        coeffs in prop::collection::vec(0u64..4, 1..=3),
    ) {
        let e = extension(&chi, [picks.0, picks.1], &coeffs);
        let h = subgroup(&chi, picks.2);
        let (n, mid, m) = (e.inclusion.source(), &e.object, e.projection.target());
        let (rn, rmid, rm) = (n.restrict(&h).unwrap(), mid.restrict(&h).unwrap(), m.restrict(&h).unwrap());
        assert_admissible(&transport(&e.inclusion, &rn, &rmid), &transport(&e.projection, &rmid, &rm))?;
        let md = chi.modulus();
        for d in (2..=md).filter(|d| md % d == 0) {
            let (cn, cmid, cm) =
                (n.coefficient_change(d).unwrap(), mid.coefficient_change(d).unwrap(), m.coefficient_change(d).unwrap());
            assert_admissible(&transport(&e.inclusion, &cn, &cmid), &transport(&e.projection, &cmid, &cm))?;
        }
    }

    #[test]
    fn normal_form_survives_serialization(
        chi in character(),
        picks in (index(), index()),
        coeffs in prop::collection::vec(0u64..4, 1..=3),
        probe in index(),
    ) {
        let e = extension(&chi, [picks.0, picks.1], &coeffs);
        let back = roundtrip(&e.object);
        prop_assert_eq!(&back, &e.object);
        let p = split_object(&chi, &[0], &[probe]);
        prop_assert_eq!(hom_f(&back, &p).unwrap().shape(), hom_f(&e.object, &p).unwrap().shape());
        prop_assert_eq!(hom_f(&p, &back).unwrap().shape(), hom_f(&p, &e.object).unwrap().shape());
        prop_assert_eq!(
            ext1(&p, &back, &budget()).unwrap().shape(),
            ext1(&p, &e.object, &budget()).unwrap().shape()
        );
    }

    #[test]
    fn ext1_between_tate_objects_is_group_cohomology(chi in character(), a in -1i64..=2, b in -1i64..=2) {
        let src = FilteredObject::tate(Mode::F, &chi, a);
        let tgt = FilteredObject::tate(Mode::F, &chi, b);
        let ext = ext1(&src, &tgt, &budget()).unwrap().shape();
        if b > a {
            let h1 = cohomology(&GModule::mu_tensor(&chi, b - a), 1, &budget()).unwrap();
            prop_assert_eq!(ext, h1.shape());
        } else {
            prop_assert!(ext.order().is_one());
        }
    }

    #[test]
    fn ext1_vanishes_against_lower_weights(
        chi in character(),
        picks in prop::collection::vec(index(), 4),
        low in -1i64..=0,
        gap in 0i64..=2,
    ) {
        // every weight of the target is at most every weight of the source
        let target = split_object(&chi, &[low, low - 1], &picks[..2]);
        let source = split_object(&chi, &[low + gap + 1, low + gap], &picks[2..]);
        prop_assert!(ext1(&source, &target, &budget()).unwrap().shape().order().is_one());
        let glued = extension(&chi, [picks[0], picks[1]], &[1]).object.twist(low + gap + 1).unwrap();
        prop_assert!(ext1(&glued, &target.twist(-1).unwrap(), &budget()).unwrap().shape().order().is_one());
    }

    #[test]
    fn ext1_adjunctions_for_induction(
        chi in character(),
        picks in (index(), index()),
        wx in 0i64..=1,
        wy in 0i64..=1,
    ) {
        let h = subgroup(&chi, picks.0);
        let chi_h = chi.restrict(&h).unwrap();
        let x = FilteredObject::tate(Mode::F, &chi_h, wx);
        let y = split_object(&chi, &[wy], &[picks.1]);
        prop_assume!(h.index() * y.rank() <= 6);
        let left = ext_left(&x, &h, &y, &budget()).unwrap();
        prop_assert!(left.holds, "{:?}", left);
        let right = ext_right(&y, &x, &h, &budget()).unwrap();
        prop_assert!(right.holds, "{:?}", right);
    }
}

/// `y ↦ #{cosets aL ⊆ H : a⁻¹ y a ∈ L}` for `L ≤ H`.
fn fixed_cosets(g: &Group, h: &Subgroup, l: &Subgroup, y: usize) -> usize {
    let fixing = h
        .elements()
        .iter()
        .filter(|&&a| l.contains(g.mul(g.mul(g.inv(a), y), a)))
        .count();
    fixing / l.order()
}

fn trace(a: &ZmMatrix) -> u64 {
    (0..a.rows()).map(|i| a.get(i, i)).sum::<u64>() % a.modulus()
}

#[test]
fn restricted_coset_modules_decompose_by_double_cosets() {
    // the modulus exceeds every fixed-point count, so traces are exact counts
    const M: u64 = 97;
    let named = [
        FiniteGroup::cyclic(6),
        FiniteGroup::klein_four(),
        FiniteGroup::symmetric(3),
        FiniteGroup::dihedral(4),
        FiniteGroup::dihedral(6),
        FiniteGroup::symmetric(4),
    ];
    for g in named {
        let chi = TwistCharacter::trivial(&g, M);
        let subs = g.all_subgroups(48).unwrap();
        for k in &subs {
            let induced = PermutationalObject::mcc(k, &chi)
                .unwrap()
                .to_filtered(Mode::F);
            for h in &subs {
                let restricted = induced.restrict(h).unwrap();
                let (_, embed) = h.as_group();
                let parts = double_cosets(k, h).unwrap();
                for (local, &y) in embed.iter().enumerate() {
                    let expected: usize = parts
                        .iter()
                        .map(|d| fixed_cosets(&g, h, &d.intersection, y))
                        .sum();
                    assert_eq!(
                        trace(restricted.action(local)),
                        expected as u64,
                        "|G|={} |H|={} |K|={}",
                        g.order(),
                        h.order(),
                        k.order()
                    );
                }
            }
        }
    }
}
