//! Subgroup enumeration against brute force, double cosets, and G-set
//! constructions.

use std::collections::BTreeSet;

use artin_tate::group::{double_cosets, FiniteGroup, GSet, Group, Perm};
use proptest::prelude::*;

const BOUND: usize = 48;

fn perm(images: &[u32]) -> Perm {
    images.iter().map(|&x| x - 1).collect()
}

fn named_groups() -> Vec<(&'static str, Group)> {
    let g = |deg, gens: &[&[u32]]| {
        FiniteGroup::from_generators(deg, gens.iter().map(|p| perm(p)).collect()).unwrap()
    };
    let mut out: Vec<(&str, Group)> = vec![
        ("1", FiniteGroup::trivial()),
        ("V4", FiniteGroup::klein_four()),
    ];
    for (name, n) in [
        ("Z2", 2),
        ("Z3", 3),
        ("Z4", 4),
        ("Z5", 5),
        ("Z6", 6),
        ("Z7", 7),
        ("Z8", 8),
        ("Z12", 12),
    ] {
        out.push((name, FiniteGroup::cyclic(n)));
    }
    out.extend([
        ("S3", FiniteGroup::symmetric(3)),
        ("S4", FiniteGroup::symmetric(4)),
        ("D4", FiniteGroup::dihedral(4)),
        ("D5", FiniteGroup::dihedral(5)),
        ("D6", FiniteGroup::dihedral(6)),
        ("A4", g(4, &[&[2, 3, 1, 4], &[2, 1, 4, 3]])),
        (
            "Z2^3",
            g(
                6,
                &[
                    &[2, 1, 3, 4, 5, 6],
                    &[1, 2, 4, 3, 5, 6],
                    &[1, 2, 3, 4, 6, 5],
                ],
            ),
        ),
        ("Z2xZ4", g(6, &[&[2, 1, 3, 4, 5, 6], &[1, 2, 4, 5, 6, 3]])),
        (
            "Q8",
            g(8, &[&[2, 4, 6, 7, 3, 8, 1, 5], &[3, 5, 4, 8, 7, 2, 6, 1]]),
        ),
        (
            "Z3xS3",
            g(
                6,
                &[
                    &[2, 3, 1, 4, 5, 6],
                    &[1, 2, 3, 5, 6, 4],
                    &[1, 2, 3, 5, 4, 6],
                ],
            ),
        ),
    ]);
    out
}

/// All subsets containing the identity and closed under multiplication.
fn brute_force_subgroup_count(g: &Group) -> usize {
    let n = g.order();
    (0u32..1 << n)
        .filter(|&mask| {
            mask & 1 == 1
                && (0..n).all(|a| {
                    mask >> a & 1 == 0
                        || (0..n).all(|b| mask >> b & 1 == 0 || mask >> g.mul(a, b) & 1 == 1)
                })
        })
        .count()
}

#[test]
fn named_groups_have_the_expected_orders() {
    let orders: Vec<(&str, usize)> = named_groups()
        .iter()
        .map(|(n, g)| (*n, g.order()))
        .collect();
    for (name, order) in orders {
        let expected = match name {
            "1" => 1,
            "V4" | "Z4" => 4,
            "S3" | "Z6" => 6,
            "S4" => 24,
            "D4" | "Z8" | "Z2^3" | "Z2xZ4" | "Q8" => 8,
            "D5" => 10,
            "D6" | "A4" | "Z12" => 12,
            "Z3xS3" => 18,
            n => n[1..].parse().unwrap(),
        };
        assert_eq!(order, expected, "{name}");
    }
    let q8 = named_groups()
        .into_iter()
        .find(|(n, _)| *n == "Q8")
        .unwrap()
        .1;
    let involutions = (0..8)
        .filter(|&x| x != q8.identity() && q8.mul(x, x) == q8.identity())
        .count();
    assert_eq!(involutions, 1);
}

#[test]
fn subgroup_counts_match_brute_force() {
    for (name, g) in named_groups() {
        if g.order() > 8 {
            continue;
        }
        let subgroups = g.all_subgroups(BOUND).unwrap();
        assert_eq!(subgroups.len(), brute_force_subgroup_count(&g), "{name}");
        let distinct: BTreeSet<Vec<usize>> =
            subgroups.iter().map(|h| h.elements().to_vec()).collect();
        assert_eq!(distinct.len(), subgroups.len(), "{name}: duplicates");
        let known = match name {
            "Z8" => 4,
            "D4" => 10,
            "Q8" => 6,
            "Z2^3" => 16,
            "Z2xZ4" => 8,
            _ => continue,
        };
        assert_eq!(subgroups.len(), known, "{name}");
    }
}

#[test]
fn conjugacy_classes_partition_the_subgroups() {
    for (name, g) in named_groups() {
        let all = g.all_subgroups(BOUND).unwrap();
        let reps = g.subgroups_up_to_conjugacy(BOUND).unwrap();
        let mut covered = BTreeSet::new();
        for r in &reps {
            let class: BTreeSet<Vec<usize>> = (0..g.order())
                .map(|x| r.conjugate(x).elements().to_vec())
                .collect();
            assert!(
                class.is_disjoint(&covered),
                "{name}: two representatives are conjugate"
            );
            covered.extend(class);
        }
        assert_eq!(covered.len(), all.len(), "{name}");
    }
}

#[test]
fn mackey_cardinality_for_every_subgroup_pair() {
    for (name, g) in named_groups() {
        let subs = g.all_subgroups(BOUND).unwrap();
        for h in &subs {
            for k in &subs {
                let dcs = double_cosets(h, k).unwrap();
                let total: usize = dcs.iter().map(|d| g.order() / d.intersection.order()).sum();
                assert_eq!(
                    total,
                    h.index() * k.index(),
                    "{name}: |H|={} |K|={}",
                    h.order(),
                    k.order()
                );
                // double cosets partition G and |HxK| = |H||K|/|H^x ∩ K|
                assert_eq!(dcs.iter().map(|d| d.size).sum::<usize>(), g.order());
                for d in &dcs {
                    assert_eq!(d.size * d.intersection.order(), h.order() * k.order());
                }
            }
        }
    }
}

#[test]
fn product_of_coset_spaces_decomposes_by_double_cosets() {
    for (name, g) in named_groups() {
        if g.order() > 12 {
            continue;
        }
        let subs = g.subgroups_up_to_conjugacy(BOUND).unwrap();
        for h in &subs {
            for k in &subs {
                let prod = GSet::coset_space(h).product(&GSet::coset_space(k)).unwrap();
                let mut stabilizers: Vec<usize> = prod
                    .orbits()
                    .iter()
                    .map(|o| prod.stabilizer(o[0]).order())
                    .collect();
                let mut expected: Vec<usize> = double_cosets(h, k)
                    .unwrap()
                    .iter()
                    .map(|d| d.intersection.order())
                    .collect();
                stabilizers.sort();
                expected.sort();
                assert_eq!(stabilizers, expected, "{name}");
            }
        }
    }
}

fn assert_is_action(s: &GSet) {
    let g = s.group();
    for a in 0..g.order() {
        for b in 0..g.order() {
            for x in 0..s.size() {
                assert_eq!(s.act(g.mul(a, b), x), s.act(a, s.act(b, x)));
            }
        }
    }
    for x in 0..s.size() {
        assert_eq!(s.act(g.identity(), x), x);
    }
}

#[test]
fn unions_and_products_are_actions() {
    for (_, g) in named_groups() {
        if g.order() > 12 {
            continue;
        }
        let spaces: Vec<GSet> = g
            .subgroups_up_to_conjugacy(BOUND)
            .unwrap()
            .iter()
            .map(GSet::coset_space)
            .collect();
        for a in &spaces {
            for b in &spaces {
                let u = a.disjoint_union(b).unwrap();
                let p = a.product(b).unwrap();
                assert_is_action(&u);
                assert_is_action(&p);
                let (fa, fb) = (a.fixed_point_counts(), b.fixed_point_counts());
                let fu: Vec<usize> = fa.iter().zip(&fb).map(|(x, y)| x + y).collect();
                let fp: Vec<usize> = fa.iter().zip(&fb).map(|(x, y)| x * y).collect();
                assert_eq!(u.fixed_point_counts(), fu);
                assert_eq!(p.fixed_point_counts(), fp);
            }
        }
    }
}

#[test]
fn restriction_of_a_coset_space_follows_mackey() {
    for (name, g) in named_groups() {
        if g.order() > 12 {
            continue;
        }
        let subs = g.all_subgroups(BOUND).unwrap();
        for h in &subs {
            for k in &subs {
                let (res, _) = GSet::coset_space(h).restrict(k).unwrap();
                let mut orbit_sizes: Vec<usize> = res.orbits().iter().map(|o| o.len()).collect();
                // K-orbits on G/H are K/(K ∩ xHx⁻¹), one per double coset K x H
                let mut expected: Vec<usize> = double_cosets(k, h)
                    .unwrap()
                    .iter()
                    .map(|d| k.order() / d.intersection.order())
                    .collect();
                orbit_sizes.sort();
                expected.sort();
                assert_eq!(orbit_sizes, expected, "{name}");
            }
        }
    }
}

fn random_group() -> impl Strategy<Value = Group> {
    (2usize..=5)
        .prop_flat_map(|n| {
            prop::collection::vec(
                Just((0..n as u32).collect::<Vec<u32>>()).prop_shuffle(),
                1..=2,
            )
        })
        .prop_map(|gens| FiniteGroup::from_generators(gens[0].len(), gens).unwrap())
        .prop_filter("order at most 24", |g| g.order() <= 24)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_permutation_groups_satisfy_mackey(g in random_group(), picks in prop::collection::vec(any::<prop::sample::Index>(), 2)) {
        let subs = g.all_subgroups(BOUND).unwrap();
        let h = &subs[picks[0].index(subs.len())];
        let k = &subs[picks[1].index(subs.len())];
        let total: usize = double_cosets(h, k).unwrap().iter().map(|d| g.order() / d.intersection.order()).sum();
        prop_assert_eq!(total, h.index() * k.index());
        // Lagrange and closure
        prop_assert_eq!(g.order() % h.order(), 0);
        for &a in h.elements() {
            prop_assert!(h.contains(g.inv(a)));
            for &b in h.elements() {
                prop_assert!(h.contains(g.mul(a, b)));
            }
        }
    }
}
