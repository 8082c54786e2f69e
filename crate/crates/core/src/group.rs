//! Finite permutation groups, subgroups, double cosets and G-sets.
//!
//! A [`FiniteGroup`] stands in for a finite quotient of an absolute Galois
//! group. Elements are indexed `0..order`, index 0 is the identity, and the
//! product `a * b` is the composite permutation `x ↦ a(b(x))`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on the group order for subgroup-lattice computations.
pub const DEFAULT_SUBGROUP_BOUND: usize = 48;
/// Hard bound on the order of an enumerated group (the multiplication table is dense).
pub const MAX_GROUP_ORDER: usize = 4096;

pub type Perm = Vec<u32>;

/// JSON group descriptor: `{"degree": n, "generators": [[images...], ...]}`, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub degree: usize,
    #[serde(default)]
    pub generators: Vec<Vec<usize>>,
}

#[derive(Debug)]
pub struct FiniteGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    table: Vec<u32>,
    inverses: Vec<usize>,
    gen_indices: Vec<usize>,
    /// BFS tree: element `i > 0` equals `gen[parent.1] * elements[parent.0]`.
    parents: Vec<(usize, usize)>,
}

pub type Group = Arc<FiniteGroup>;

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}
impl Eq for FiniteGroup {}

fn compose(a: &[u32], b: &[u32]) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

fn check_perm(p: &[u32], degree: usize) -> Result<()> {
    if p.len() != degree {
        return Err(Error::InvalidPermutation(format!(
            "generator has {} images but the degree is {degree}",
            p.len()
        )));
    }
    let mut seen = vec![false; degree];
    for &x in p {
        let x = x as usize;
        if x >= degree || seen[x] {
            return Err(Error::InvalidPermutation(format!(
                "{p:?} is not a permutation of 0..{degree}"
            )));
        }
        seen[x] = true;
    }
    Ok(())
}

impl FiniteGroup {
    /// Enumerates the group generated by 0-based permutations of `0..degree`.
    pub fn from_generators(degree: usize, generators: Vec<Perm>) -> Result<Group> {
        for g in &generators {
            check_perm(g, degree)?;
        }
        let id: Perm = (0..degree as u32).collect();
        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0usize);
        let mut parents = vec![(0, 0)];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (gi, g) in generators.iter().enumerate() {
                let y = compose(g, &elements[x]);
                if !index.contains_key(&y) {
                    if elements.len() >= MAX_GROUP_ORDER {
                        return Err(Error::budget(
                            "group order",
                            elements.len() + 1,
                            MAX_GROUP_ORDER,
                        ));
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                    parents.push((x, gi));
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        let n = elements.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&compose(&elements[a], &elements[b])] as u32;
            }
        }
        let inverses = (0..n)
            .map(|a| (0..n).find(|&b| table[a * n + b] == 0).expect("group"))
            .collect();
        let gen_indices = generators.iter().map(|g| index[g]).collect();
        Ok(Arc::new(FiniteGroup {
            degree,
            generators,
            elements,
            index,
            table,
            inverses,
            gen_indices,
            parents,
        }))
    }

    /// Builds a group from the JSON descriptor (1-based images).
    pub fn from_descriptor(desc: &GroupDescriptor) -> Result<Group> {
        let gens = desc
            .generators
            .iter()
            .map(|g| {
                g.iter()
                    .map(|&x| {
                        if x == 0 || x > desc.degree {
                            Err(Error::InvalidPermutation(format!(
                                "image {x} outside 1..={}",
                                desc.degree
                            )))
                        } else {
                            Ok((x - 1) as u32)
                        }
                    })
                    .collect::<Result<Perm>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_generators(desc.degree, gens)
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        GroupDescriptor {
            degree: self.degree,
            generators: self
                .generators
                .iter()
                .map(|g| g.iter().map(|&x| x as usize + 1).collect())
                .collect(),
        }
    }

    pub fn trivial() -> Group {
        Self::from_generators(1, vec![]).expect("trivial group")
    }

    /// Cyclic group of order `n` acting regularly on `n` points.
    pub fn cyclic(n: usize) -> Group {
        let g: Perm = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        Self::from_generators(n, vec![g]).expect("cyclic group")
    }

    pub fn symmetric(n: usize) -> Group {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Perm = (0..n as u32).collect();
            t.swap(0, 1);
            gens.push(t);
        }
        if n >= 3 {
            gens.push((0..n as u32).map(|i| (i + 1) % n as u32).collect());
        }
        Self::from_generators(n.max(1), gens).expect("symmetric group")
    }

    /// Dihedral group of order `2n` on the vertices of an `n`-gon.
    pub fn dihedral(n: usize) -> Group {
        let r: Perm = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        let s: Perm = (0..n as u32).map(|i| (n as u32 - i) % n as u32).collect();
        Self::from_generators(n, vec![r, s]).expect("dihedral group")
    }

    /// Klein four-group on 4 points.
    pub fn klein_four() -> Group {
        Self::from_generators(4, vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]]).expect("Klein group")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn identity(&self) -> usize {
        0
    }
    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }
    /// Element indices of the generators.
    pub fn generator_indices(&self) -> &[usize] {
        &self.gen_indices
    }
    pub fn element(&self, i: usize) -> &[u32] {
        &self.elements[i]
    }
    pub fn index_of(&self, p: &[u32]) -> Option<usize> {
        self.index.get(p).copied()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.elements.len() + b] as usize
    }
    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `g^{-1} h g`.
    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        self.mul(self.inv(g), self.mul(h, g))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Elements in BFS order with the generator word data, for extending maps
    /// defined on generators: element `i > 0` is `gen[k] * element[j]` where
    /// `(j, k) = parent(i)`.
    pub fn parent(&self, i: usize) -> (usize, usize) {
        self.parents[i]
    }

    /// Extends values on generators to all elements through the BFS words,
    /// using `op(gen_value, parent_value)`.
    pub fn extend_from_generators<T: Clone>(
        &self,
        identity: T,
        gen_values: &[T],
        op: impl Fn(&T, &T) -> T,
    ) -> Vec<T> {
        let mut out: Vec<T> = Vec::with_capacity(self.order());
        out.push(identity);
        for i in 1..self.order() {
            let (p, k) = self.parents[i];
            let v = op(&gen_values[k], &out[p]);
            out.push(v);
        }
        out
    }

    pub fn whole(self: &Arc<Self>) -> Subgroup {
        Subgroup::from_elements(self, (0..self.order()).collect())
    }

    pub fn trivial_subgroup(self: &Arc<Self>) -> Subgroup {
        Subgroup::from_elements(self, vec![0])
    }

    /// Closure of a set of elements under multiplication.
    pub fn closure(self: &Arc<Self>, seeds: &[usize]) -> Subgroup {
        let mut set: BTreeSet<usize> = BTreeSet::from([0]);
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &s in seeds {
                let y = self.mul(s, x);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Subgroup::from_elements(self, set.into_iter().collect())
    }

    /// Every subgroup, sorted by order then by element list.
    pub fn all_subgroups(self: &Arc<Self>, bound: usize) -> Result<Vec<Subgroup>> {
        if self.order() > bound {
            return Err(Error::budget(
                "group order for subgroup enumeration (raise the subgroup bound explicitly)",
                self.order(),
                bound,
            ));
        }
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let trivial = vec![0usize];
        found.insert(trivial.clone());
        let mut queue = VecDeque::from([trivial]);
        while let Some(h) = queue.pop_front() {
            let members: BTreeSet<usize> = h.iter().copied().collect();
            for g in 0..self.order() {
                if members.contains(&g) {
                    continue;
                }
                let mut seeds = h.clone();
                seeds.push(g);
                let k = self.closure(&seeds).elements;
                if found.insert(k.clone()) {
                    queue.push_back(k);
                }
            }
        }
        let mut subs: Vec<Vec<usize>> = found.into_iter().collect();
        subs.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        Ok(subs
            .into_iter()
            .map(|e| Subgroup::from_elements(self, e))
            .collect())
    }

    /// One representative per conjugacy class of subgroups: the class member
    /// whose sorted element list is lexicographically least.
    pub fn subgroups_up_to_conjugacy(self: &Arc<Self>, bound: usize) -> Result<Vec<Subgroup>> {
        let all = self.all_subgroups(bound)?;
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut reps = Vec::new();
        for h in &all {
            if seen.contains(&h.elements) {
                continue;
            }
            let class: BTreeSet<Vec<usize>> =
                (0..self.order()).map(|g| h.conjugate(g).elements).collect();
            let canonical = class.iter().min().expect("nonempty").clone();
            seen.extend(class);
            let mut rep = Subgroup::from_elements(self, canonical);
            rep.canonical = true;
            reps.push(rep);
        }
        reps.sort_by(|a, b| a.order().cmp(&b.order()).then(a.elements.cmp(&b.elements)));
        Ok(reps)
    }

    /// All homomorphisms to the cyclic group of units of Z/m, as value tables.
    pub fn characters(&self, m: u64) -> Vec<Vec<u64>> {
        let units: Vec<u64> = (1..m)
            .filter(|&u| crate::zm::arith::gcd(u, m) == 1)
            .collect();
        let k = self.generators.len();
        let mut out = BTreeSet::new();
        let mut choice = vec![0usize; k];
        loop {
            let gen_vals: Vec<u64> = choice.iter().map(|&c| units[c]).collect();
            let vals = self.extend_from_generators(1 % m, &gen_vals, |g, p| (g * p) % m);
            let ok = (0..self.order()).all(|a| {
                (0..self.order()).all(|b| vals[self.mul(a, b)] == (vals[a] * vals[b]) % m)
            });
            if ok {
                out.insert(vals);
            }
            let mut i = 0;
            loop {
                if i == k {
                    return out.into_iter().collect();
                }
                choice[i] += 1;
                if choice[i] < units.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }
}

/// A subgroup of a given ambient group, stored as a sorted element list.
#[derive(Clone, Debug)]
pub struct Subgroup {
    group: Group,
    elements: Vec<usize>,
    canonical: bool,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        *self.group == *other.group && self.elements == other.elements
    }
}
impl Eq for Subgroup {}

impl Subgroup {
    fn from_elements(group: &Group, mut elements: Vec<usize>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Subgroup {
            group: group.clone(),
            elements,
            canonical: false,
        }
    }

    /// Validates closure and builds a subgroup from element indices.
    pub fn new(group: &Group, elements: Vec<usize>) -> Result<Self> {
        let s = Self::from_elements(group, elements);
        let set: BTreeSet<usize> = s.elements.iter().copied().collect();
        if !set.contains(&0) || s.elements.iter().any(|&a| a >= group.order()) {
            return Err(Error::InvalidObject(
                "subgroup must contain the identity".into(),
            ));
        }
        for &a in &s.elements {
            if !set.contains(&group.inv(a))
                || s.elements.iter().any(|&b| !set.contains(&group.mul(a, b)))
            {
                return Err(Error::InvalidObject("element set is not closed".into()));
            }
        }
        Ok(s)
    }

    /// Subgroup generated by the given permutations (0-based).
    pub fn generated_by(group: &Group, gens: &[Perm]) -> Result<Self> {
        let idx = gens
            .iter()
            .map(|p| {
                group.index_of(p).ok_or_else(|| {
                    Error::InvalidObject(format!("{p:?} is not an element of the group"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(group.closure(&idx))
    }

    pub fn group(&self) -> &Group {
        &self.group
    }
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn index(&self) -> usize {
        self.group.order() / self.order()
    }
    pub fn is_canonical(&self) -> bool {
        self.canonical
    }
    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }
    pub fn is_whole(&self) -> bool {
        self.order() == self.group.order()
    }

    pub fn same_ambient(&self, other: &Subgroup) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    /// `g^{-1} H g`.
    pub fn conjugate(&self, g: usize) -> Subgroup {
        let els = self
            .elements
            .iter()
            .map(|&h| self.group.conjugate(h, g))
            .collect();
        Subgroup::from_elements(&self.group, els)
    }

    pub fn intersection(&self, other: &Subgroup) -> Result<Subgroup> {
        self.same_ambient(other)?;
        let els = self
            .elements
            .iter()
            .copied()
            .filter(|&x| other.contains(x))
            .collect();
        Ok(Subgroup::from_elements(&self.group, els))
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    /// Left cosets `gH`, ordered by their least element; each coset sorted.
    pub fn left_cosets(&self) -> Vec<Vec<usize>> {
        let g = &self.group;
        let mut assigned = vec![false; g.order()];
        let mut out = Vec::new();
        for x in 0..g.order() {
            if assigned[x] {
                continue;
            }
            let mut c: Vec<usize> = self.elements.iter().map(|&h| g.mul(x, h)).collect();
            c.sort_unstable();
            for &y in &c {
                assigned[y] = true;
            }
            out.push(c);
        }
        out
    }

    /// Representatives of the left cosets (least element of each).
    pub fn coset_representatives(&self) -> Vec<usize> {
        self.left_cosets().iter().map(|c| c[0]).collect()
    }

    /// For `g` and coset index `i`, the coset index `j` and `h ∈ H` with
    /// `g · r_i = r_j · h`.
    pub fn coset_action(&self) -> CosetAction {
        let g = &self.group;
        let cosets = self.left_cosets();
        let mut coset_of = vec![0usize; g.order()];
        for (i, c) in cosets.iter().enumerate() {
            for &x in c {
                coset_of[x] = i;
            }
        }
        let reps: Vec<usize> = cosets.iter().map(|c| c[0]).collect();
        let n = g.order();
        let k = reps.len();
        let mut target = vec![0usize; n * k];
        let mut cocycle = vec![0usize; n * k];
        for a in 0..n {
            for (i, &r) in reps.iter().enumerate() {
                let y = g.mul(a, r);
                let j = coset_of[y];
                target[a * k + i] = j;
                cocycle[a * k + i] = g.mul(g.inv(reps[j]), y);
            }
        }
        CosetAction {
            reps,
            coset_of,
            target,
            cocycle,
        }
    }

    /// The subgroup as a group in its own right, with the embedding of its
    /// element indices into the ambient group.
    pub fn as_group(&self) -> (Group, Vec<usize>) {
        // greedy generating set, in ambient index order
        let mut gens: Vec<usize> = Vec::new();
        let mut span = self.group.closure(&[]);
        for &x in &self.elements {
            if !span.contains(x) {
                gens.push(x);
                span = self.group.closure(&gens);
            }
        }
        let perms: Vec<Perm> = gens
            .iter()
            .map(|&x| self.group.element(x).to_vec())
            .collect();
        let sub =
            FiniteGroup::from_generators(self.group.degree(), perms).expect("subgroup enumerates");
        let embed = (0..sub.order())
            .map(|i| self.group.index_of(sub.element(i)).expect("element"))
            .collect();
        (sub, embed)
    }
}

/// Tabulated left action of `G` on `G/H` with its `H`-valued cocycle.
#[derive(Clone, Debug)]
pub struct CosetAction {
    pub reps: Vec<usize>,
    pub coset_of: Vec<usize>,
    target: Vec<usize>,
    cocycle: Vec<usize>,
}

impl CosetAction {
    pub fn num_cosets(&self) -> usize {
        self.reps.len()
    }
    /// `(j, h)` with `g · r_i = r_j · h`.
    pub fn act(&self, g: usize, i: usize) -> (usize, usize) {
        let k = self.reps.len();
        (self.target[g * k + i], self.cocycle[g * k + i])
    }
}

/// A double coset `H g K` with its representative and `H^g ∩ K`, `H^g = g^{-1} H g`.
#[derive(Clone, Debug)]
pub struct DoubleCoset {
    pub representative: usize,
    pub size: usize,
    pub intersection: Subgroup,
}

/// Partition of `G` into double cosets `H g K`, ordered by least element.
pub fn double_cosets(h: &Subgroup, k: &Subgroup) -> Result<Vec<DoubleCoset>> {
    h.same_ambient(k)?;
    let g = h.group().clone();
    let mut assigned = vec![false; g.order()];
    let mut out = Vec::new();
    for x in 0..g.order() {
        if assigned[x] {
            continue;
        }
        let mut size = 0;
        for &a in h.elements() {
            for &b in k.elements() {
                let y = g.mul(g.mul(a, x), b);
                if !assigned[y] {
                    assigned[y] = true;
                    size += 1;
                }
            }
        }
        let intersection = h.conjugate(x).intersection(k)?;
        out.push(DoubleCoset {
            representative: x,
            size,
            intersection,
        });
    }
    Ok(out)
}

/// A finite set with a left `G`-action; `action[g][x]` is the image of point `x`.
#[derive(Clone, Debug)]
pub struct GSet {
    group: Group,
    size: usize,
    action: Vec<Vec<usize>>,
}

impl PartialEq for GSet {
    fn eq(&self, other: &Self) -> bool {
        *self.group == *other.group && self.action == other.action
    }
}
impl Eq for GSet {}

impl GSet {
    /// Builds a G-set from the action of each group element, checking that it
    /// is a homomorphism into the symmetric group.
    pub fn new(group: &Group, size: usize, action: Vec<Vec<usize>>) -> Result<Self> {
        if action.len() != group.order() || action.iter().any(|a| a.len() != size) {
            return Err(Error::DimensionMismatch(
                "G-set action table has the wrong shape".into(),
            ));
        }
        let s = GSet {
            group: group.clone(),
            size,
            action,
        };
        s.verify()?;
        Ok(s)
    }

    /// Builds a G-set from generator images (0-based), extended along words.
    pub fn from_generator_action(
        group: &Group,
        size: usize,
        gen_images: &[Vec<usize>],
    ) -> Result<Self> {
        if gen_images.len() != group.generators().len() {
            return Err(Error::DimensionMismatch(format!(
                "{} generator actions given for {} generators",
                gen_images.len(),
                group.generators().len()
            )));
        }
        for img in gen_images {
            let p: Perm = img.iter().map(|&x| x as u32).collect();
            check_perm(&p, size)?;
        }
        let id: Vec<usize> = (0..size).collect();
        let action =
            group.extend_from_generators(id, gen_images, |g, p| p.iter().map(|&x| g[x]).collect());
        Self::new(group, size, action)
    }

    fn verify(&self) -> Result<()> {
        let g = &self.group;
        if self.action[0].iter().enumerate().any(|(i, &x)| i != x) {
            return Err(Error::NotAHomomorphism(
                "identity does not act trivially".into(),
            ));
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                let ab = g.mul(a, b);
                for x in 0..self.size {
                    if self.action[ab][x] != self.action[a][self.action[b][x]] {
                        return Err(Error::NotAHomomorphism(format!(
                            "G-set action fails on elements {a}, {b}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn point(group: &Group) -> Self {
        GSet {
            group: group.clone(),
            size: 1,
            action: vec![vec![0]; group.order()],
        }
    }

    pub fn empty(group: &Group) -> Self {
        GSet {
            group: group.clone(),
            size: 0,
            action: vec![vec![]; group.order()],
        }
    }

    /// `G/H` with points indexed as in [`Subgroup::left_cosets`].
    pub fn coset_space(h: &Subgroup) -> Self {
        let ca = h.coset_action();
        let g = h.group();
        let k = ca.num_cosets();
        let action = (0..g.order())
            .map(|a| (0..k).map(|i| ca.act(a, i).0).collect())
            .collect();
        GSet {
            group: g.clone(),
            size: k,
            action,
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }
    pub fn size(&self) -> usize {
        self.size
    }
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }
    pub fn action_of(&self, g: usize) -> &[usize] {
        &self.action[g]
    }

    pub fn disjoint_union(&self, other: &GSet) -> Result<GSet> {
        if *self.group != *other.group {
            return Err(Error::AmbientMismatch);
        }
        let n = self.size;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.iter().copied().chain(b.iter().map(|&y| y + n)).collect())
            .collect();
        Ok(GSet {
            group: self.group.clone(),
            size: n + other.size,
            action,
        })
    }

    /// Cartesian product; point `(x, y)` has index `x * |other| + y`.
    pub fn product(&self, other: &GSet) -> Result<GSet> {
        if *self.group != *other.group {
            return Err(Error::AmbientMismatch);
        }
        let m = other.size;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut v = vec![0; self.size * m];
                for x in 0..self.size {
                    for y in 0..m {
                        v[x * m + y] = a[x] * m + b[y];
                    }
                }
                v
            })
            .collect();
        Ok(GSet {
            group: self.group.clone(),
            size: self.size * m,
            action,
        })
    }

    /// Orbits, each sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for x in 0..self.size {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> =
                (0..self.group.order()).map(|g| self.action[g][x]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn stabilizer(&self, x: usize) -> Subgroup {
        let els = (0..self.group.order())
            .filter(|&g| self.action[g][x] == x)
            .collect();
        Subgroup::from_elements(&self.group, els)
    }

    /// Restriction to a subgroup, as a G-set over the subgroup's own group.
    pub fn restrict(&self, h: &Subgroup) -> Result<(GSet, Vec<usize>)> {
        if *self.group != **h.group() {
            return Err(Error::AmbientMismatch);
        }
        let (hg, embed) = h.as_group();
        let action = embed.iter().map(|&g| self.action[g].clone()).collect();
        Ok((
            GSet {
                group: hg,
                size: self.size,
                action,
            },
            embed,
        ))
    }

    /// Re-expresses the G-set over an equal group value (same element order).
    pub fn rebase(&self, group: &Group) -> Result<GSet> {
        if *self.group != **group {
            return Err(Error::AmbientMismatch);
        }
        Ok(GSet {
            group: group.clone(),
            size: self.size,
            action: self.action.clone(),
        })
    }

    /// Number of fixed points of each element (the permutation character).
    pub fn fixed_point_counts(&self) -> Vec<usize> {
        self.action
            .iter()
            .map(|a| a.iter().enumerate().filter(|(i, &x)| *i == x).count())
            .collect()
    }
}

/// A homomorphism of finite groups, tabulated on elements.
#[derive(Clone, Debug)]
pub struct GroupHom {
    pub source: Group,
    pub target: Group,
    pub map: Vec<usize>,
}

impl GroupHom {
    /// Extends generator images (element indices of the target) along words
    /// and checks the homomorphism property on all pairs.
    pub fn from_generator_images(source: &Group, target: &Group, images: &[usize]) -> Result<Self> {
        if images.len() != source.generators().len() {
            return Err(Error::DimensionMismatch(format!(
                "{} generator images for {} generators",
                images.len(),
                source.generators().len()
            )));
        }
        if images.iter().any(|&x| x >= target.order()) {
            return Err(Error::InvalidObject(
                "generator image is not a target element".into(),
            ));
        }
        let map = source.extend_from_generators(0usize, images, |g, p| target.mul(*g, *p));
        let hom = GroupHom {
            source: source.clone(),
            target: target.clone(),
            map,
        };
        hom.verify()?;
        Ok(hom)
    }

    /// Generator images given as target permutations (0-based).
    pub fn from_generator_perms(source: &Group, target: &Group, images: &[Perm]) -> Result<Self> {
        let idx = images
            .iter()
            .map(|p| {
                target.index_of(p).ok_or_else(|| {
                    Error::NotAHomomorphism(format!("{p:?} is not in the target group"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_generator_images(source, target, &idx)
    }

    pub fn identity(g: &Group) -> Self {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            map: (0..g.order()).collect(),
        }
    }

    fn verify(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        for a in 0..s.order() {
            for b in 0..s.order() {
                if self.map[s.mul(a, b)] != t.mul(self.map[a], self.map[b]) {
                    return Err(Error::NotAHomomorphism(format!(
                        "fails on source elements {a}, {b}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, g: usize) -> usize {
        self.map[g]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.order()];
        for &x in &self.map {
            hit[x] = true;
        }
        hit.into_iter().all(|b| b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_examples() {
        let z2 = FiniteGroup::from_generators(2, vec![vec![1, 0]]).unwrap();
        assert_eq!(z2.order(), 2);
        let s3 = FiniteGroup::from_descriptor(&GroupDescriptor {
            degree: 3,
            generators: vec![vec![2, 1, 3], vec![2, 3, 1]],
        })
        .unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(FiniteGroup::from_generators(3, vec![]).unwrap().order(), 1);
        assert!(FiniteGroup::from_generators(3, vec![vec![1, 0]]).is_err());
    }

    #[test]
    fn subgroup_class_counts() {
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(z2.subgroups_up_to_conjugacy(48).unwrap().len(), 2);
        let s3 = FiniteGroup::symmetric(3);
        let classes = s3.subgroups_up_to_conjugacy(48).unwrap();
        let orders: Vec<usize> = classes.iter().map(|h| h.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
        assert!(classes.iter().all(|h| h.is_canonical()));
        assert_eq!(
            FiniteGroup::trivial()
                .subgroups_up_to_conjugacy(48)
                .unwrap()
                .len(),
            1
        );
        let s4 = FiniteGroup::symmetric(4);
        assert!(s4.subgroups_up_to_conjugacy(8).is_err());
        assert_eq!(s4.subgroups_up_to_conjugacy(48).unwrap().len(), 11);
    }

    #[test]
    fn double_coset_examples() {
        let g = FiniteGroup::symmetric(3);
        let whole = g.whole();
        let dc = double_cosets(&whole, &whole).unwrap();
        assert_eq!(dc.len(), 1);
        assert!(dc[0].intersection.is_whole());

        let z2 = FiniteGroup::cyclic(2);
        let e = z2.trivial_subgroup();
        let dc = double_cosets(&e, &e).unwrap();
        assert_eq!(dc.len(), 2);
        assert!(dc.iter().all(|d| d.intersection.order() == 1));

        let classes = g.subgroups_up_to_conjugacy(48).unwrap();
        let (c2, c3) = (&classes[1], &classes[2]);
        let dc = double_cosets(c3, c2).unwrap();
        assert_eq!(dc.len(), 1);
        assert_eq!(dc[0].intersection.order(), 1);
    }

    #[test]
    fn coset_action_cocycle() {
        let g = FiniteGroup::symmetric(3);
        let h = &g.subgroups_up_to_conjugacy(48).unwrap()[1];
        let ca = h.coset_action();
        for a in 0..g.order() {
            for i in 0..ca.num_cosets() {
                let (j, x) = ca.act(a, i);
                assert!(h.contains(x));
                assert_eq!(g.mul(a, ca.reps[i]), g.mul(ca.reps[j], x));
            }
        }
    }

    #[test]
    fn characters_of_z2() {
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(z2.characters(4).len(), 2);
        assert_eq!(z2.characters(3).len(), 2);
        assert_eq!(FiniteGroup::cyclic(3).characters(4).len(), 1);
    }
}
