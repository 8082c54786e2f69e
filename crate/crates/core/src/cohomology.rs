//! Group cohomology through the normalized inhomogeneous bar complex.
//!
//! An `n`-cochain is a function `(G \ {e})^n → M`, stored as a flat vector:
//! the tuple `(g_1, …, g_n)` has mixed-radix index `Σ (g_k − 1)(|G|−1)^{n−k}`
//! and its value occupies `rank(M)` consecutive coordinates. Cochains are row
//! vectors and the differential is the matrix `D_n` with `dφ = φ · D_n`.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gmodule::GModule;
use crate::group::{Group, GroupHom};
use crate::zm::{kernel, subquotient, ModuleShape, ZmMatrix, ZmModulePresentation};

/// Number of non-identity tuples of length `n`.
fn tuple_count(group: &Group, n: usize) -> usize {
    (group.order() - 1).pow(n as u32)
}

/// Decodes a tuple index into element indices (all non-identity).
fn decode(group: &Group, n: usize, mut t: usize) -> Vec<usize> {
    let base = group.order() - 1;
    let mut out = vec![0; n];
    for k in (0..n).rev() {
        out[k] = t % base + 1;
        t /= base;
    }
    out
}

/// Encodes a tuple; `None` if some entry is the identity (normalized cochains vanish there).
fn encode(group: &Group, tuple: &[usize]) -> Option<usize> {
    let base = group.order() - 1;
    let mut t = 0;
    for &g in tuple {
        if g == 0 {
            return None;
        }
        t = t * base + (g - 1);
    }
    Some(t)
}

/// Dimension of `C^n(G, M)` over Z/m.
pub fn cochain_dim(module: &GModule, n: usize) -> usize {
    tuple_count(module.group(), n) * module.rank()
}

/// The differential `D_n : C^n → C^{n+1}` as a `dim C^n × dim C^{n+1}` matrix.
pub fn bar_differential(module: &GModule, n: usize, budget: &Budget) -> Result<ZmMatrix> {
    let g = module.group();
    let r = module.rank();
    let m = module.modulus();
    let rows = cochain_dim(module, n);
    let cols = cochain_dim(module, n + 1);
    budget.check_matrix("bar differential", rows, cols)?;
    let mut d = ZmMatrix::zeros(m, rows, cols);
    if r == 0 || (n > 0 && g.order() == 1) {
        return Ok(d);
    }
    for s in 0..tuple_count(g, n + 1) {
        let tuple = decode(g, n + 1, s);
        let out0 = s * r;
        // g_1 · φ(g_2, …, g_{n+1})
        let tail = encode(g, &tuple[1..]).expect("non-identity entries");
        let act = module.action(tuple[0]);
        for c in 0..r {
            for c2 in 0..r {
                let v = act.get(c2, c);
                if v != 0 {
                    d.add_to(tail * r + c, out0 + c2, v);
                }
            }
        }
        // (−1)^i φ(…, g_i g_{i+1}, …)
        for i in 0..n {
            let mut merged = Vec::with_capacity(n);
            merged.extend_from_slice(&tuple[..i]);
            merged.push(g.mul(tuple[i], tuple[i + 1]));
            merged.extend_from_slice(&tuple[i + 2..]);
            if let Some(t) = encode(g, &merged) {
                let sign = if (i + 1) % 2 == 0 { 1 } else { m - 1 };
                for c in 0..r {
                    d.add_to(t * r + c, out0 + c, sign);
                }
            }
        }
        // (−1)^{n+1} φ(g_1, …, g_n)
        let head = encode(g, &tuple[..n]).expect("non-identity entries");
        let sign = if (n + 1).is_multiple_of(2) { 1 } else { m - 1 };
        for c in 0..r {
            d.add_to(head * r + c, out0 + c, sign);
        }
    }
    Ok(d)
}

/// `H^n(G, M) = Z^n / B^n` with cocycle representatives.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    degree: usize,
    module: GModule,
    presentation: ZmModulePresentation,
}

impl CohomologyGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn presentation(&self) -> &ZmModulePresentation {
        &self.presentation
    }

    pub fn shape(&self) -> ModuleShape {
        self.presentation.shape()
    }

    pub fn invariant_factors(&self) -> &[u64] {
        self.presentation.invariant_factors()
    }

    /// One cocycle per invariant factor; the `i`-th generates a summand `Z/d_i`.
    pub fn representatives(&self) -> &[Vec<u64>] {
        self.presentation.generators()
    }

    /// Coordinates of the class of a cocycle.
    pub fn class_of(&self, cocycle: &[u64]) -> Result<Vec<u64>> {
        self.presentation.coordinates(cocycle)
    }

    /// A cocycle representing the class with the given coordinates.
    pub fn cocycle(&self, coords: &[u64]) -> Vec<u64> {
        self.presentation.element(coords)
    }

    pub fn is_coboundary(&self, cocycle: &[u64]) -> Result<bool> {
        self.presentation.is_zero_class(cocycle)
    }
}

/// Cocycles, coboundaries and the differential in one degree.
#[derive(Clone, Debug)]
pub struct BarData {
    pub cocycles: ZmMatrix,
    pub coboundaries: ZmMatrix,
}

pub fn bar_data(module: &GModule, n: usize, budget: &Budget) -> Result<BarData> {
    budget.check_degree(n)?;
    let dn = bar_differential(module, n, budget)?;
    let aug = cochain_dim(module, n);
    budget.check_matrix("cocycle computation", aug, dn.cols() + aug)?;
    let cocycles = kernel(&dn);
    let coboundaries = if n == 0 {
        ZmMatrix::zeros(module.modulus(), 0, cochain_dim(module, 0))
    } else {
        bar_differential(module, n - 1, budget)?.without_zero_rows()
    };
    Ok(BarData {
        cocycles,
        coboundaries,
    })
}

/// `H^n(G, M)`.
pub fn cohomology(module: &GModule, n: usize, budget: &Budget) -> Result<CohomologyGroup> {
    let data = bar_data(module, n, budget)?;
    let presentation = subquotient(&data.cocycles, &data.coboundaries)?;
    Ok(CohomologyGroup {
        degree: n,
        module: module.clone(),
        presentation,
    })
}

/// Whether a cochain is a cocycle.
pub fn is_cocycle(module: &GModule, n: usize, cochain: &[u64], budget: &Budget) -> Result<bool> {
    let d = bar_differential(module, n, budget)?;
    Ok(d.left_apply(cochain).iter().all(|&x| x == 0))
}

/// Cup product of cochains: `(a ∪ b)(g_1…g_{p+q}) = a(g_1…g_p) ⊗ (g_1⋯g_p)·b(g_{p+1}…)`,
/// with values in `M ⊗ N` (basis order of [`GModule::tensor`]).
pub fn cup(
    m_mod: &GModule,
    p: usize,
    a: &[u64],
    n_mod: &GModule,
    q: usize,
    b: &[u64],
) -> Result<Vec<u64>> {
    m_mod.check_compatible(n_mod)?;
    if a.len() != cochain_dim(m_mod, p) || b.len() != cochain_dim(n_mod, q) {
        return Err(Error::DimensionMismatch(
            "cochain length does not match its degree".into(),
        ));
    }
    let g = m_mod.group();
    let md = m_mod.modulus();
    let (rm, rn) = (m_mod.rank(), n_mod.rank());
    let (ta, tb) = (tuple_count(g, p), tuple_count(g, q));
    let mut out = vec![0u64; ta * tb * rm * rn];
    for i in 0..ta {
        let head = decode(g, p, i);
        let prod = head.iter().fold(g.identity(), |acc, &x| g.mul(acc, x));
        let av = &a[i * rm..(i + 1) * rm];
        if av.iter().all(|&x| x == 0) {
            continue;
        }
        let act = n_mod.action(prod);
        for j in 0..tb {
            let bv = act.apply(&b[j * rn..(j + 1) * rn]);
            let base = (i * tb + j) * rm * rn;
            for (x, &ax) in av.iter().enumerate() {
                if ax == 0 {
                    continue;
                }
                for (y, &by) in bv.iter().enumerate() {
                    out[base + x * rn + y] = (out[base + x * rn + y] + ax * by) % md;
                }
            }
        }
    }
    Ok(out)
}

/// Applies a module map `f` (matrix `rank(N) × rank(M)`) valuewise to a cochain.
pub fn push_cochain(source: &GModule, n: usize, f: &ZmMatrix, cochain: &[u64]) -> Vec<u64> {
    let r = source.rank();
    if r == 0 {
        return vec![0; tuple_count(source.group(), n) * f.rows()];
    }
    cochain.chunks(r).flat_map(|v| f.apply(v)).collect()
}

/// The map `H^n(M) → H^n(N)` induced by an equivariant `f`, as a matrix
/// whose row `i` holds the coordinates of the image of generator `i`.
pub fn induced_map(
    source: &CohomologyGroup,
    target: &CohomologyGroup,
    f: &ZmMatrix,
) -> Result<ZmMatrix> {
    if !source.module.is_equivariant(&target.module, f) {
        return Err(Error::InvalidObject(
            "map of coefficient modules is not equivariant".into(),
        ));
    }
    let rows = source
        .representatives()
        .iter()
        .map(|z| target.class_of(&push_cochain(&source.module, source.degree, f, z)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ZmMatrix::from_residue_rows(
        source.module.modulus(),
        target.invariant_factors().len(),
        &rows,
    ))
}

/// Pulls an `n`-cochain on the quotient back along `hom: G → Q`.
pub fn inflate_cochain(
    hom: &GroupHom,
    module_q: &GModule,
    n: usize,
    cochain: &[u64],
) -> Result<Vec<u64>> {
    if *hom.target != **module_q.group() {
        return Err(Error::AmbientMismatch);
    }
    let g = &hom.source;
    let q = &hom.target;
    let r = module_q.rank();
    let mut out = vec![0u64; tuple_count(g, n) * r];
    for t in 0..tuple_count(g, n) {
        let tuple: Vec<usize> = decode(g, n, t).into_iter().map(|x| hom.apply(x)).collect();
        if let Some(s) = encode(q, &tuple) {
            out[t * r..(t + 1) * r].copy_from_slice(&cochain[s * r..(s + 1) * r]);
        }
    }
    Ok(out)
}

/// Inflation `H^n(Q, M) → H^n(G, M)` as a coordinate matrix, together with
/// the cohomology of the pulled-back module.
pub fn inflation(
    hom: &GroupHom,
    source: &CohomologyGroup,
    budget: &Budget,
) -> Result<(CohomologyGroup, ZmMatrix)> {
    let pulled = source.module.pullback(hom)?;
    let target = cohomology(&pulled, source.degree, budget)?;
    let rows = source
        .representatives()
        .iter()
        .map(|z| target.class_of(&inflate_cochain(hom, &source.module, source.degree, z)?))
        .collect::<Result<Vec<_>>>()?;
    let mat = ZmMatrix::from_residue_rows(
        source.module.modulus(),
        target.invariant_factors().len(),
        &rows,
    );
    Ok((target, mat))
}

/// Order of the image of a coordinate map (rows = images of generators).
pub fn image_order(map: &ZmMatrix, target: &CohomologyGroup) -> crate::zm::Order {
    let gens: Vec<Vec<u64>> = (0..map.rows())
        .map(|i| target.cocycle(map.row(i)))
        .collect();
    let gens = ZmMatrix::from_residue_rows(
        target.module.modulus(),
        target.presentation.ambient_dim(),
        &gens,
    );
    let rels = target.presentation.relation_span();
    let all = gens.vstack(&rels);
    subquotient(&all, &rels)
        .map(|p| p.order())
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodule::TwistCharacter;
    use crate::group::FiniteGroup;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn h0_is_fixed_points() {
        for g in [
            FiniteGroup::trivial(),
            FiniteGroup::cyclic(3),
            FiniteGroup::symmetric(3),
        ] {
            let h = cohomology(&GModule::trivial(&g, 4, 1), 0, &b()).unwrap();
            assert_eq!(h.invariant_factors(), &[4]);
        }
    }

    #[test]
    fn z2_with_z2_coefficients() {
        let g = FiniteGroup::cyclic(2);
        let m = GModule::trivial(&g, 2, 1);
        for i in 0..=4 {
            assert_eq!(
                cohomology(&m, i, &b()).unwrap().invariant_factors(),
                &[2],
                "degree {i}"
            );
        }
    }

    #[test]
    fn coprime_order_kills_cohomology() {
        let g = FiniteGroup::cyclic(3);
        let m = GModule::trivial(&g, 2, 1);
        assert!(cohomology(&m, 1, &b()).unwrap().shape().is_zero());
        assert!(cohomology(&m, 2, &b()).unwrap().shape().is_zero());
    }

    #[test]
    fn cup_square_of_z2_generator_is_nonzero() {
        let g = FiniteGroup::cyclic(2);
        let m = GModule::trivial(&g, 2, 1);
        let h1 = cohomology(&m, 1, &b()).unwrap();
        let x = h1.representatives()[0].clone();
        let mm = m.tensor(&m).unwrap();
        let sq = cup(&m, 1, &x, &m, 1, &x).unwrap();
        assert!(is_cocycle(&mm, 2, &sq, &b()).unwrap());
        let h2 = cohomology(&mm, 2, &b()).unwrap();
        assert!(!h2.is_coboundary(&sq).unwrap());
        let zero = vec![0; x.len()];
        assert!(cup(&m, 1, &x, &m, 1, &zero)
            .unwrap()
            .iter()
            .all(|&v| v == 0));
    }

    #[test]
    fn inflation_z4_to_z2_is_injective_in_degree_one() {
        let z4 = FiniteGroup::cyclic(4);
        let z2 = FiniteGroup::cyclic(2);
        let hom = GroupHom::from_generator_images(&z4, &z2, &[1]).unwrap();
        let m = GModule::trivial(&z2, 2, 1);
        let h1 = cohomology(&m, 1, &b()).unwrap();
        let (target, mat) = inflation(&hom, &h1, &b()).unwrap();
        assert_eq!(target.invariant_factors(), &[2]);
        assert_eq!(mat.data(), &[1]);
        // identity map acts as identity
        let (same, id) = inflation(&GroupHom::identity(&z2), &h1, &b()).unwrap();
        assert_eq!(same.invariant_factors(), &[2]);
        assert_eq!(id.data(), &[1]);
    }

    #[test]
    fn sign_twist_over_z4() {
        let g = FiniteGroup::cyclic(2);
        let chi = TwistCharacter::from_generator_values(&g, 4, &[3]).unwrap();
        let mu = GModule::mu_tensor(&chi, 1);
        assert_eq!(cohomology(&mu, 0, &b()).unwrap().invariant_factors(), &[2]);
        assert_eq!(cohomology(&mu, 1, &b()).unwrap().invariant_factors(), &[2]);
        assert_eq!(cohomology(&mu, 2, &b()).unwrap().invariant_factors(), &[2]);
    }

    #[test]
    fn degree_cap_is_enforced() {
        let g = FiniteGroup::cyclic(2);
        let budget = Budget {
            degree_cap: 2,
            ..Budget::default()
        };
        let err = cohomology(&GModule::trivial(&g, 2, 1), 3, &budget).unwrap_err();
        assert!(err.is_budget());
    }
}
