//! Group cohomology: Shapiro's lemma, annihilation by |G|, long exact
//! sequences and associativity of the cup product.

use artin_tate::budget::Budget;
use artin_tate::cohomology::{
    cochain_dim, cohomology, cup, image_order, induced_map, is_cocycle, push_cochain,
};
use artin_tate::gmodule::{GModule, TwistCharacter};
use artin_tate::group::{FiniteGroup, GSet, Group, Subgroup};
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

/// `(χ, H)` for every group above, modulus 2..=4, character and subgroup.
fn cases() -> Vec<(TwistCharacter, Subgroup)> {
    let mut out = Vec::new();
    for g in groups() {
        for m in 2..=4 {
            for values in g.characters(m) {
                let chi = TwistCharacter::new(&g, m, values).unwrap();
                for h in g.all_subgroups(48).unwrap() {
                    out.push((chi.clone(), h));
                }
            }
        }
    }
    out
}

fn case() -> impl Strategy<Value = (TwistCharacter, Subgroup)> {
    let all = cases();
    any::<prop::sample::Index>().prop_map(move |i| all[i.index(all.len())].clone())
}

fn budget() -> Budget {
    Budget::default()
}

/// `0 → μ^j·N → Z/m[G/H](j) → C → 0` with `N` the sum of the basis vectors,
/// returned as `(A, B, C, f: A → B, g: B → C)`.
fn norm_sequence(
    h: &Subgroup,
    chi: &TwistCharacter,
    j: i64,
) -> (GModule, GModule, GModule, ZmMatrix, ZmMatrix) {
    let b = GModule::twisted_permutation(&GSet::coset_space(h), chi, j).unwrap();
    let a = GModule::mu_tensor(chi, j);
    let k = b.rank();
    let m = chi.modulus();
    let f = ZmMatrix::from_data(m, k, 1, vec![1; k]);
    // C has basis the images of e_0..e_{k-2}; e_{k-1} ≡ -(e_0 + ... + e_{k-2})
    let mut g = ZmMatrix::zeros(m, k - 1, k);
    for i in 0..k - 1 {
        g.set(i, i, 1);
        g.set(i, k - 1, m - 1);
    }
    let lift = ZmMatrix::identity(m, k).block(0, 0, k, k - 1);
    let group = chi.group();
    let action: Vec<ZmMatrix> = (0..group.order())
        .map(|x| g.mul(b.action(x)).unwrap().mul(&lift).unwrap())
        .collect();
    let c = GModule::new(group, m, k - 1, action).unwrap();
    (a, b, c, f, g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shapiro((chi, h) in case(), j in -1i64..=2, i in 0usize..=3) {
        let local = chi.restrict(&h).unwrap();
        let m_local = GModule::mu_tensor(&local, j);
        let induced = m_local.induce(&h).unwrap();
        let big = cohomology(&induced, i, &budget()).unwrap();
        let small = cohomology(&m_local, i, &budget()).unwrap();
        prop_assert_eq!(big.shape(), small.shape());
    }

    #[test]
    fn group_order_kills_positive_degrees((chi, h) in case(), j in -1i64..=2, i in 1usize..=3) {
        let module = GModule::twisted_permutation(&GSet::coset_space(&h), &chi, j).unwrap();
        let n = chi.group().order() as u64;
        for &d in cohomology(&module, i, &budget()).unwrap().invariant_factors() {
            prop_assert_eq!(n % d, 0, "factor {} does not divide |G| = {}", d, n);
        }
    }

    #[test]
    fn long_exact_sequence_bookkeeping((chi, h) in case(), j in 0i64..=1, i in 0usize..=2) {
        prop_assume!(h.index() >= 2);
        let (a, b, c, f, g) = norm_sequence(&h, &chi, j);
        prop_assert!(a.is_equivariant(&b, &f));
        prop_assert!(b.is_equivariant(&c, &g));
        let ha = cohomology(&a, i, &budget()).unwrap();
        let hb = cohomology(&b, i, &budget()).unwrap();
        let hc = cohomology(&c, i, &budget()).unwrap();
        let ha1 = cohomology(&a, i + 1, &budget()).unwrap();
        let hb1 = cohomology(&b, i + 1, &budget()).unwrap();
        let fi = induced_map(&ha, &hb, &f).unwrap();
        let gi = induced_map(&hb, &hc, &g).unwrap();
        let fi1 = induced_map(&ha1, &hb1, &f).unwrap();
        // exact at H^i(B): g∘f = 0 and |im f| = |ker g|
        for z in ha.representatives() {
            let in_b = push_cochain(&a, i, &f, z);
            prop_assert!(hc.is_coboundary(&push_cochain(&b, i, &g, &in_b)).unwrap());
        }
        let im_f = image_order(&fi, &hb);
        let im_g = image_order(&gi, &hc);
        prop_assert_eq!(im_f.mul(&im_g), hb.shape().order());
        // exact at H^i(C) and H^{i+1}(A): |H^i C| = |im g| · |ker(H^{i+1} A → H^{i+1} B)|
        let ker_f1 = ha1.shape().order().div(&image_order(&fi1, &hb1)).unwrap();
        prop_assert_eq!(hc.shape().order(), im_g.mul(&ker_f1));
        // H^0 is left exact
        if i == 0 {
            prop_assert_eq!(image_order(&fi, &hb), ha.shape().order());
        }
    }

    #[test]
    fn cup_product_is_associative(
        (chi, _h) in case(),
        degrees in (0usize..=1, 0usize..=1, 0usize..=1),
        twists in (0i64..=1, 0i64..=1, 0i64..=1),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 3),
    ) {
        let (p, q, r) = degrees;
        let mods = [GModule::mu_tensor(&chi, twists.0), GModule::mu_tensor(&chi, twists.1), GModule::mu_tensor(&chi, twists.2)];
        let hs = [
            cohomology(&mods[0], p, &budget()).unwrap(),
            cohomology(&mods[1], q, &budget()).unwrap(),
            cohomology(&mods[2], r, &budget()).unwrap(),
        ];
        let pick = |k: usize| -> Vec<u64> {
            let reps = hs[k].representatives();
            if reps.is_empty() {
                vec![0; cochain_dim(&mods[k], [p, q, r][k])]
            } else {
                reps[picks[k].index(reps.len())].clone()
            }
        };
        let (a, b, c) = (pick(0), pick(1), pick(2));
        let ab = cup(&mods[0], p, &a, &mods[1], q, &b).unwrap();
        let ab_mod = mods[0].tensor(&mods[1]).unwrap();
        let bc = cup(&mods[1], q, &b, &mods[2], r, &c).unwrap();
        let bc_mod = mods[1].tensor(&mods[2]).unwrap();
        let left = cup(&ab_mod, p + q, &ab, &mods[2], r, &c).unwrap();
        let right = cup(&mods[0], p, &a, &bc_mod, q + r, &bc).unwrap();
        prop_assert_eq!(&left, &right);
        let abc_mod = ab_mod.tensor(&mods[2]).unwrap();
        prop_assert!(is_cocycle(&abc_mod, p + q + r, &left, &budget()).unwrap());
    }
}
