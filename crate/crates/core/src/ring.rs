//! The big graded ring of diagonal Ext between permutation modules, and the
//! cobar complex of its quadratic dual coalgebra.
//!
//! Objects are `P_H = Z/m[G/H]` for `H` up to conjugacy. The degree-`n`
//! component is `A_n = ⊕ H^n(G, Hom(P, P') ⊗ μ^{⊗n})`, with composition given by
//! cup product followed by composition of maps. With `R = ker(A_1 ⊗ A_1 → A_2)`
//! (tensors over `A_0`) and `T_j = A_1^{⊗j}`, internal degree `j` of the cobar
//! complex is the lattice complex of the submodules
//! `W_p = A_1^{⊗p} ⊗ R ⊗ A_1^{⊗(j−p−2)}` of `T_j`. Its diagonal cohomology is the
//! quadratic part of `A`; classes off the diagonal obstruct Koszulity.
//! Nothing computed here is a certified Ext value.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::budget::Budget;
use crate::cohomology::{cohomology, cup, push_cochain, CohomologyGroup};
use crate::error::{Error, Result};
use crate::gmodule::{GModule, TwistCharacter};
use crate::group::{GSet, Subgroup};
use crate::zm::{
    kernel, span_order, subquotient, ModuleShape, Order, ZmMatrix, ZmModulePresentation,
};

/// Label attached to every probe result.
pub const CONJECTURE_FACING: &str = "CONJECTURE-FACING";

/// `table[a][b]`: coordinates of a product, `None` when not composable.
type ProductTable = Vec<Vec<Option<Vec<u64>>>>;

/// A generating object `Z/m[G/H]`.
#[derive(Clone, Debug)]
pub struct RingObject {
    pub subgroup: Subgroup,
    pub module: GModule,
}

#[derive(Clone, Debug)]
struct Block {
    source: usize,
    target: usize,
    module: GModule,
    group: CohomologyGroup,
    offset: usize,
}

#[derive(Clone, Debug)]
struct Component {
    blocks: Vec<Block>,
    /// additive order of each generator
    orders: Vec<u64>,
    /// block of each generator
    owner: Vec<usize>,
}

impl Component {
    fn len(&self) -> usize {
        self.orders.len()
    }

    fn relations(&self, m: u64) -> ZmMatrix {
        let n = self.len();
        let rows: Vec<Vec<u64>> = self
            .orders
            .iter()
            .enumerate()
            .filter(|(_, &d)| d % m != 0)
            .map(|(i, &d)| (0..n).map(|c| if c == i { d } else { 0 }).collect())
            .collect();
        ZmMatrix::from_residue_rows(m, n, &rows)
    }
}

/// The big graded ring in degrees `0..=n_max`, with all products tabulated.
#[derive(Clone, Debug)]
pub struct BigGradedRing {
    chi: TwistCharacter,
    objects: Vec<RingObject>,
    components: Vec<Component>,
    /// `products[(n, k)][a][b]`: coordinates of `a·b` in `A_{n+k}`, `None` if not composable
    products: BTreeMap<(usize, usize), ProductTable>,
}

/// Assembles `A_0, …, A_{n_max}` and the multiplication tables.
pub fn big_ring(chi: &TwistCharacter, n_max: usize, budget: &Budget) -> Result<BigGradedRing> {
    budget.check_degree(n_max)?;
    let g = chi.group();
    let m = chi.modulus();
    let objects: Vec<RingObject> = g
        .subgroups_up_to_conjugacy(budget.subgroup_bound)?
        .into_iter()
        .map(|h| {
            let module = GModule::permutation(&GSet::coset_space(&h), m);
            RingObject {
                subgroup: h,
                module,
            }
        })
        .collect();
    let mut components = Vec::new();
    for n in 0..=n_max {
        let mut blocks = Vec::new();
        let mut orders = Vec::new();
        let mut owner = Vec::new();
        for s in 0..objects.len() {
            for t in 0..objects.len() {
                let module = objects[s]
                    .module
                    .hom_module(&objects[t].module)?
                    .tensor(&GModule::mu_tensor(chi, n as i64))?;
                let group = cohomology(&module, n, budget)?;
                let offset = orders.len();
                for &d in group.invariant_factors() {
                    orders.push(d);
                    owner.push(blocks.len());
                }
                blocks.push(Block {
                    source: s,
                    target: t,
                    module,
                    group,
                    offset,
                });
            }
        }
        components.push(Component {
            blocks,
            orders,
            owner,
        });
    }
    let mut ring = BigGradedRing {
        chi: chi.clone(),
        objects,
        components,
        products: BTreeMap::new(),
    };
    for n in 0..=n_max {
        for k in 0..=n_max - n {
            let table = ring.product_table(n, k)?;
            ring.products.insert((n, k), table);
        }
    }
    Ok(ring)
}

impl BigGradedRing {
    pub fn modulus(&self) -> u64 {
        self.chi.modulus()
    }

    pub fn character(&self) -> &TwistCharacter {
        &self.chi
    }

    pub fn objects(&self) -> &[RingObject] {
        &self.objects
    }

    pub fn max_degree(&self) -> usize {
        self.components.len() - 1
    }

    /// Index of `Z/m = Z/m[G/G]`, the unit object.
    pub fn unit_index(&self) -> usize {
        self.objects
            .iter()
            .position(|o| o.subgroup.index() == 1)
            .expect("the whole group is a subgroup")
    }

    pub fn component(&self, n: usize) -> ModuleShape {
        ModuleShape::from_factors(self.modulus(), &self.components[n].orders)
    }

    /// `H^n(G, Hom(P_source, P_target) ⊗ μ^{⊗n})`.
    pub fn block(&self, n: usize, source: usize, target: usize) -> ModuleShape {
        let b = self.components[n]
            .blocks
            .iter()
            .find(|b| b.source == source && b.target == target)
            .expect("block");
        b.group.shape()
    }

    /// Number of generators of `A_n`.
    pub fn rank(&self, n: usize) -> usize {
        self.components[n].len()
    }

    /// `(source, target)` of generator `i` of `A_n`.
    pub fn endpoints(&self, n: usize, i: usize) -> (usize, usize) {
        let c = &self.components[n];
        let b = &c.blocks[c.owner[i]];
        (b.source, b.target)
    }

    /// Coordinates of the product of generators `a ∈ A_n`, `b ∈ A_k`, or `None`
    /// if they do not compose (`a ∘ b` needs `source(a) = target(b)`).
    pub fn product(&self, n: usize, a: usize, k: usize, b: usize) -> Option<&[u64]> {
        self.products.get(&(n, k)).and_then(|t| t[a][b].as_deref())
    }

    /// Product of arbitrary coordinate vectors.
    pub fn multiply(&self, n: usize, x: &[u64], k: usize, y: &[u64]) -> Vec<u64> {
        let m = self.modulus();
        let mut out = vec![0u64; self.rank(n + k)];
        for (a, &xa) in x.iter().enumerate() {
            for (b, &yb) in y.iter().enumerate() {
                if xa * yb % m == 0 {
                    continue;
                }
                if let Some(p) = self.product(n, a, k, b) {
                    for (o, &v) in out.iter_mut().zip(p) {
                        *o = (*o + xa * yb % m * v) % m;
                    }
                }
            }
        }
        self.reduce(n + k, &out)
    }

    /// Reduces coordinates modulo the generator orders.
    pub fn reduce(&self, n: usize, x: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(&self.components[n].orders)
            .map(|(&v, &d)| v % d)
            .collect()
    }

    fn product_table(&self, n: usize, k: usize) -> Result<Vec<Vec<Option<Vec<u64>>>>> {
        let (cn, ck, cnk) = (
            &self.components[n],
            &self.components[k],
            &self.components[n + k],
        );
        let mut table = vec![vec![None; ck.len()]; cn.len()];
        for a in 0..cn.len() {
            let ba = &cn.blocks[cn.owner[a]];
            let alpha = ba.group.representatives()[a - ba.offset].clone();
            for b in 0..ck.len() {
                let bb = &ck.blocks[ck.owner[b]];
                if ba.source != bb.target {
                    continue;
                }
                let beta = &bb.group.representatives()[b - bb.offset];
                let prod = cup(&ba.module, n, &alpha, &bb.module, k, beta)?;
                let (r2, r1, r0) = (
                    self.objects[ba.target].module.rank(),
                    self.objects[ba.source].module.rank(),
                    self.objects[bb.source].module.rank(),
                );
                let compose = composition_matrix(self.modulus(), r2, r1, r0);
                let src = ba.module.tensor(&bb.module)?;
                let pushed = push_cochain(&src, n + k, &compose, &prod);
                let target = cnk
                    .blocks
                    .iter()
                    .find(|x| x.source == bb.source && x.target == ba.target)
                    .expect("every block is present");
                let coords = target.group.class_of(&pushed)?;
                let mut full = vec![0u64; cnk.len()];
                full[target.offset..target.offset + coords.len()].copy_from_slice(&coords);
                table[a][b] = Some(full);
            }
        }
        Ok(table)
    }
}

/// `Hom(P1, P2) ⊗ Hom(P0, P1) → Hom(P0, P2)` on row-major flattenings.
fn composition_matrix(m: u64, r2: usize, r1: usize, r0: usize) -> ZmMatrix {
    let mut f = ZmMatrix::zeros(m, r2 * r0, r2 * r1 * r1 * r0);
    for i in 0..r2 {
        for l in 0..r1 {
            for c in 0..r0 {
                f.set(i * r0 + c, (i * r1 + l) * (r1 * r0) + l * r0 + c, 1);
            }
        }
    }
    f
}

/// `A_1^{⊗j}` over `A_0`, on composable tuples of degree-1 generators.
struct TensorPower {
    tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    relations: ZmMatrix,
}

impl TensorPower {
    fn len(&self) -> usize {
        self.tuples.len()
    }
}

fn all_tuples(base: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..base).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

impl BigGradedRing {
    fn composable(&self, t: &[usize]) -> bool {
        t.windows(2)
            .all(|w| self.endpoints(1, w[0]).0 == self.endpoints(1, w[1]).1)
    }

    /// `(source, target)` of a composable tuple.
    fn tuple_endpoints(&self, t: &[usize]) -> (usize, usize) {
        (
            self.endpoints(1, *t.last().expect("nonempty")).0,
            self.endpoints(1, t[0]).1,
        )
    }

    fn tensor_power(
        &self,
        j: usize,
        ends: Option<(usize, usize)>,
        budget: &Budget,
    ) -> Result<TensorPower> {
        let m = self.modulus();
        let n1 = self.rank(1);
        let n0 = self.rank(0);
        budget.check_matrix("tensor power", n1.pow(j as u32), n1.pow(j as u32))?;
        let keep =
            |t: &[usize]| self.composable(t) && ends.is_none_or(|e| self.tuple_endpoints(t) == e);
        let candidates = all_tuples(n1, j);
        let tuples: Vec<Vec<usize>> = candidates.iter().filter(|t| keep(t)).cloned().collect();
        let index: HashMap<Vec<usize>, usize> = tuples
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        let orders = &self.components[1].orders;
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for t in &tuples {
            let d = t
                .iter()
                .fold(m, |acc, &x| crate::zm::arith::gcd(acc, orders[x]));
            if d != m {
                let mut row = vec![0u64; tuples.len()];
                row[index[t]] = d;
                rows.push(row);
            }
        }
        // (x·a) ⊗ y = x ⊗ (a·y) for a ∈ A_0
        for t in &candidates {
            for p in 0..j.saturating_sub(1) {
                for a in 0..n0 {
                    let mut row = vec![0u64; tuples.len()];
                    let mut nonzero = false;
                    if let Some(xa) = self.product(1, t[p], 0, a) {
                        for (c, &v) in xa.iter().enumerate() {
                            let mut s = t.clone();
                            s[p] = c;
                            if let (Some(&i), true) = (index.get(&s), v != 0) {
                                row[i] = (row[i] + v) % m;
                                nonzero = true;
                            }
                        }
                    }
                    if let Some(ay) = self.product(0, a, 1, t[p + 1]) {
                        for (c, &v) in ay.iter().enumerate() {
                            let mut s = t.clone();
                            s[p + 1] = c;
                            if let (Some(&i), true) = (index.get(&s), v != 0) {
                                row[i] = (row[i] + m - v) % m;
                                nonzero = true;
                            }
                        }
                    }
                    if nonzero && row.iter().any(|&x| x != 0) {
                        rows.push(row);
                    }
                }
            }
        }
        let relations = ZmMatrix::from_residue_rows(m, tuples.len(), &rows);
        Ok(TensorPower {
            tuples,
            index,
            relations,
        })
    }

    /// Multiplication `T_j → A_j` as a matrix (rows indexed by tuples).
    fn multiplication(&self, tp: &TensorPower, j: usize) -> ZmMatrix {
        let rows: Vec<Vec<u64>> = tp
            .tuples
            .iter()
            .map(|t| {
                let mut acc = self.reduce(1, &unit_vec(self.rank(1), t[0]));
                for (deg, &x) in t.iter().enumerate().skip(1) {
                    acc = self.multiply(deg, &acc, 1, &unit_vec(self.rank(1), x));
                }
                acc
            })
            .collect();
        ZmMatrix::from_residue_rows(self.modulus(), self.rank(j), &rows)
    }

    /// Generators of `R = ker(T_2 → A_2)`, as vectors over tuples of `T_2`.
    fn quadratic_relations(&self, budget: &Budget) -> Result<(TensorPower, ZmMatrix)> {
        let t2 = self.tensor_power(2, None, budget)?;
        let mult = self.multiplication(&t2, 2);
        let stacked = mult.vstack(&self.components[2].relations(self.modulus()));
        let k = kernel(&stacked);
        let cols: Vec<usize> = (0..t2.len()).collect();
        let rows: Vec<usize> = (0..k.rows()).collect();
        let r = k.select(&rows, &cols);
        Ok((t2, r))
    }
}

fn unit_vec(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn intersect(u: &ZmMatrix, v: &ZmMatrix) -> ZmMatrix {
    let k = kernel(&u.vstack(v));
    let rows: Vec<usize> = (0..k.rows()).collect();
    let cols: Vec<usize> = (0..u.rows()).collect();
    k.select(&rows, &cols).mul_unchecked(u)
}

/// The lattice complex of internal degree `j`, restricted to tuples with the
/// given endpoints.
struct CobarDegree {
    ambient: usize,
    relations: ZmMatrix,
    /// `W_p` for `p = 0..j−1`, each containing the relations
    walls: Vec<ZmMatrix>,
    j: usize,
}

impl BigGradedRing {
    fn cobar_degree(
        &self,
        j: usize,
        ends: Option<(usize, usize)>,
        budget: &Budget,
    ) -> Result<CobarDegree> {
        if j == 0 || j > self.max_degree().max(1) {
            return Err(Error::OutsideWindow {
                degree: j as i64,
                lo: 1,
                hi: self.max_degree() as i64,
            });
        }
        let m = self.modulus();
        let tp = self.tensor_power(j, ends, budget)?;
        let n = tp.len();
        let mut walls = Vec::new();
        if j >= 2 {
            let (t2, r) = self.quadratic_relations(budget)?;
            for p in 0..j - 1 {
                let mut frames: Vec<(Vec<usize>, Vec<usize>)> = tp
                    .tuples
                    .iter()
                    .map(|t| (t[..p].to_vec(), t[p + 2..].to_vec()))
                    .collect();
                frames.sort();
                frames.dedup();
                let mut rows: Vec<Vec<u64>> = Vec::new();
                for (pre, suf) in &frames {
                    for rel in r.row_vecs() {
                        let mut row = vec![0u64; n];
                        for (pair, &c) in t2.tuples.iter().zip(&rel) {
                            if c == 0 {
                                continue;
                            }
                            let t: Vec<usize> =
                                pre.iter().chain(pair).chain(suf).copied().collect();
                            if let Some(&i) = tp.index.get(&t) {
                                row[i] = (row[i] + c) % m;
                            }
                        }
                        rows.push(row);
                    }
                }
                walls.push(ZmMatrix::from_residue_rows(m, n, &rows).vstack(&tp.relations));
            }
        }
        Ok(CobarDegree {
            ambient: n,
            relations: tp.relations,
            walls,
            j,
        })
    }
}

impl CobarDegree {
    /// `W_S` for the positions in `mask` (all of `T_j` when empty).
    fn wall(&self, mask: u32) -> ZmMatrix {
        let m = self.relations.modulus();
        let mut acc = ZmMatrix::identity(m, self.ambient);
        for (p, w) in self.walls.iter().enumerate() {
            if mask & (1 << p) != 0 {
                acc = intersect(&acc, w);
            }
        }
        acc
    }

    /// Cut sets of cobar degree `k`, i.e. with `k − 1` cuts among `j − 1` positions.
    fn cuts(&self, k: usize) -> Vec<u32> {
        if k == 0 || k > self.j {
            return Vec::new();
        }
        (0u32..1 << (self.j - 1))
            .filter(|c| c.count_ones() as usize == k - 1)
            .collect()
    }

    fn full(&self) -> u32 {
        (1u32 << (self.j - 1)) - 1
    }

    /// Generators of `Cob^k` inside `T_j^{#cuts}`.
    fn generators(&self, k: usize) -> ZmMatrix {
        let cuts = self.cuts(k);
        let n = self.ambient;
        let m = self.relations.modulus();
        let mut out = ZmMatrix::zeros(m, 0, n * cuts.len());
        for (b, &c) in cuts.iter().enumerate() {
            let w = self.wall(self.full() & !c);
            let mut block = ZmMatrix::zeros(m, w.rows(), n * cuts.len());
            block.set_block(0, b * n, &w);
            out = out.vstack(&block);
        }
        out
    }

    fn block_relations(&self, k: usize) -> ZmMatrix {
        let cuts = self.cuts(k);
        let n = self.ambient;
        let m = self.relations.modulus();
        let mut out = ZmMatrix::zeros(m, 0, n * cuts.len());
        for b in 0..cuts.len() {
            let mut block = ZmMatrix::zeros(m, self.relations.rows(), n * cuts.len());
            block.set_block(0, b * n, &self.relations);
            out = out.vstack(&block);
        }
        out
    }

    /// `d: Cob^k → Cob^{k+1}`, adding one cut with a Koszul sign.
    fn differential(&self, k: usize) -> ZmMatrix {
        let src = self.cuts(k);
        let dst = self.cuts(k + 1);
        let n = self.ambient;
        let m = self.relations.modulus();
        let mut d = ZmMatrix::zeros(m, n * src.len(), n * dst.len());
        for (a, &c) in src.iter().enumerate() {
            for p in 0..self.j - 1 {
                if c & (1 << p) != 0 {
                    continue;
                }
                let b = dst
                    .iter()
                    .position(|&x| x == c | (1 << p))
                    .expect("cut set");
                let sign = if (c & ((1 << p) - 1)).count_ones() % 2 == 0 {
                    1
                } else {
                    m - 1
                };
                for i in 0..n {
                    d.set(a * n + i, b * n + i, sign);
                }
            }
        }
        d
    }

    fn cohomology(&self, k: usize) -> Result<ZmModulePresentation> {
        let m = self.relations.modulus();
        let gens = self.generators(k);
        let rels = self.block_relations(k);
        let width = gens.cols();
        if width == 0 {
            return subquotient(&ZmMatrix::zeros(m, 0, 0), &ZmMatrix::zeros(m, 0, 0));
        }
        let cocycles = if k < self.j {
            let image = gens.mul_unchecked(&self.differential(k));
            let kk = kernel(&image.vstack(&self.block_relations(k + 1)));
            let rows: Vec<usize> = (0..kk.rows()).collect();
            let cols: Vec<usize> = (0..gens.rows()).collect();
            kk.select(&rows, &cols).mul_unchecked(&gens)
        } else {
            gens
        };
        let boundaries = if k > 1 {
            self.generators(k - 1)
                .mul_unchecked(&self.differential(k - 1))
        } else {
            ZmMatrix::zeros(m, 0, width)
        };
        let rels_all = boundaries.vstack(&rels);
        subquotient(&cocycles.vstack(&rels_all), &rels_all)
    }
}

/// `H^{k,j}` of the cobar complex of the quadratic dual of `A`.
pub fn cobar_cohomology(
    ring: &BigGradedRing,
    k: usize,
    j: usize,
    budget: &Budget,
) -> Result<ZmModulePresentation> {
    ring.cobar_degree(j, None, budget)?.cohomology(k)
}

/// `H^{k,j}` restricted to maps from object `source` to object `target`.
pub fn cobar_cohomology_between(
    ring: &BigGradedRing,
    k: usize,
    j: usize,
    source: usize,
    target: usize,
    budget: &Budget,
) -> Result<ZmModulePresentation> {
    ring.cobar_degree(j, Some((source, target)), budget)?
        .cohomology(k)
}

/// Probe data for one internal degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeDegree {
    pub internal_degree: usize,
    /// `(k, H^{k,j})` for `1 ≤ k ≤ j`
    pub cobar: Vec<(usize, ModuleShape)>,
    pub diagonal: ModuleShape,
    pub ring_component: ModuleShape,
    /// Order of the image of `A_1^{⊗j} → A_j`.
    pub products_order: Order,
    /// `A_j` is spanned by products of degree-1 elements.
    pub generated_in_degree_one: bool,
    /// The quadratic part maps isomorphically onto the products.
    pub quadratic: bool,
    pub off_diagonal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulProbe {
    pub label: &'static str,
    pub degrees: Vec<ProbeDegree>,
    /// No off-diagonal cobar classes and `A` quadratic in the probed range.
    pub diagonal_concentrated: bool,
}

/// Compares cobar cohomology with `A` in internal degrees `1..=n`.
pub fn koszulity_probe(ring: &BigGradedRing, n: usize, budget: &Budget) -> Result<KoszulProbe> {
    let m = ring.modulus();
    let mut degrees = Vec::new();
    for j in 1..=n {
        let cx = ring.cobar_degree(j, None, budget)?;
        let cobar: Vec<(usize, ModuleShape)> = (1..=j)
            .map(|k| cx.cohomology(k).map(|h| (k, h.shape())))
            .collect::<Result<_>>()?;
        let diagonal = cobar.last().expect("k = j").1.clone();
        let off_diagonal = cobar[..j - 1].iter().any(|(_, s)| !s.is_zero());
        let tp = ring.tensor_power(j, None, budget)?;
        let rel = ring.components[j].relations(m);
        let images = ring.multiplication(&tp, j).vstack(&rel);
        let products_order = span_order(&images)
            .div(&span_order(&rel))
            .expect("relations lie in the span");
        let ring_component = ring.component(j);
        degrees.push(ProbeDegree {
            internal_degree: j,
            generated_in_degree_one: products_order == ring_component.order(),
            quadratic: products_order == diagonal.order(),
            cobar,
            diagonal,
            ring_component,
            products_order,
            off_diagonal,
        });
    }
    let diagonal_concentrated = degrees.iter().all(|d| !d.off_diagonal && d.quadratic);
    Ok(KoszulProbe {
        label: CONJECTURE_FACING,
        degrees,
        diagonal_concentrated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{double_cosets, FiniteGroup};

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn trivial_group_ring() {
        let chi = TwistCharacter::trivial(&FiniteGroup::trivial(), 3);
        let ring = big_ring(&chi, 2, &b()).unwrap();
        assert_eq!(ring.component(0).invariant_factors, vec![3]);
        assert!(ring.component(1).is_zero());
        let probe = koszulity_probe(&ring, 2, &b()).unwrap();
        assert!(probe.diagonal_concentrated);
        assert!(probe.degrees.iter().all(|d| d.diagonal.is_zero()));
        assert_eq!(probe.label, CONJECTURE_FACING);
    }

    #[test]
    fn z2_ring_is_polynomial() {
        let chi = TwistCharacter::trivial(&FiniteGroup::cyclic(2), 2);
        let ring = big_ring(&chi, 3, &b()).unwrap();
        // A_0: Hom_G among Z/2[G] and Z/2
        assert_eq!(ring.component(0).invariant_factors, vec![2; 5]);
        for n in 1..=3 {
            assert_eq!(ring.component(n).invariant_factors, vec![2]);
        }
        let u = ring.unit_index();
        for j in 1..=2 {
            let d = cobar_cohomology_between(&ring, j, j, u, u, &b()).unwrap();
            assert_eq!(d.invariant_factors(), &[2]);
        }
        let probe = koszulity_probe(&ring, 3, &b()).unwrap();
        assert!(probe.diagonal_concentrated, "{probe:?}");
    }

    #[test]
    fn composition_is_associative() {
        let chi = TwistCharacter::trivial(&FiniteGroup::symmetric(3), 2);
        let ring = big_ring(&chi, 2, &b()).unwrap();
        let degs = [(0, 0, 0), (0, 1, 0), (1, 0, 1), (1, 1, 0), (0, 0, 2)];
        for &(p, q, r) in &degs {
            for a in 0..ring.rank(p) {
                for bb in 0..ring.rank(q) {
                    for c in 0..ring.rank(r) {
                        let ea = unit_vec(ring.rank(p), a);
                        let eb = unit_vec(ring.rank(q), bb);
                        let ec = unit_vec(ring.rank(r), c);
                        let left = ring.multiply(p + q, &ring.multiply(p, &ea, q, &eb), r, &ec);
                        let right = ring.multiply(p, &ea, q + r, &ring.multiply(q, &eb, r, &ec));
                        assert_eq!(left, right, "degrees {p},{q},{r}: {a},{bb},{c}");
                    }
                }
            }
        }
    }

    #[test]
    fn blocks_follow_the_double_coset_formula() {
        let g = FiniteGroup::symmetric(3);
        let chi = TwistCharacter::trivial(&g, 2);
        let ring = big_ring(&chi, 1, &b()).unwrap();
        for (s, os) in ring.objects().iter().enumerate() {
            for (t, ot) in ring.objects().iter().enumerate() {
                for n in 0..=1 {
                    let mut factors = Vec::new();
                    for dc in double_cosets(&os.subgroup, &ot.subgroup).unwrap() {
                        let sub = chi.restrict(&dc.intersection).unwrap();
                        let h = cohomology(&GModule::mu_tensor(&sub, n as i64), n, &b()).unwrap();
                        factors.extend_from_slice(h.invariant_factors());
                    }
                    assert_eq!(ring.block(n, s, t), ModuleShape::from_factors(2, &factors));
                }
            }
        }
    }
}
