//! Finitely generated Z/m[G]-modules that are free over Z/m, with twist
//! characters, restriction, induction and internal Hom.
//!
//! Actions use the column-vector convention: `ρ(g)` acts on column vectors and
//! `ρ(gh) = ρ(g) ρ(h)`.

use crate::error::{Error, Result};
use crate::group::{GSet, Group, GroupHom, Subgroup};
use crate::zm::arith::{self, pow_signed};
use crate::zm::{inverse, kernel, ZmMatrix};

/// A character `χ: G → (Z/m)^×`, tabulated on elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistCharacter {
    group: Group,
    modulus: u64,
    values: Vec<u64>,
}

impl TwistCharacter {
    /// Validates unit values and multiplicativity on all pairs.
    pub fn new(group: &Group, modulus: u64, values: Vec<u64>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        if values.len() != group.order() {
            return Err(Error::DimensionMismatch(format!(
                "character has {} values for a group of order {}",
                values.len(),
                group.order()
            )));
        }
        let values: Vec<u64> = values.into_iter().map(|v| v % modulus).collect();
        for &v in &values {
            if arith::gcd(v, modulus) != 1 {
                return Err(Error::NotAUnit(v, modulus));
            }
        }
        let n = group.order();
        for a in 0..n {
            for b in 0..n {
                if values[group.mul(a, b)] != arith::mul(values[a], values[b], modulus) {
                    return Err(Error::NotAHomomorphism(format!(
                        "character fails on elements {a}, {b}"
                    )));
                }
            }
        }
        Ok(TwistCharacter {
            group: group.clone(),
            modulus,
            values,
        })
    }

    /// Extends values given on the generators.
    pub fn from_generator_values(group: &Group, modulus: u64, gen_values: &[u64]) -> Result<Self> {
        if gen_values.len() != group.generators().len() {
            return Err(Error::DimensionMismatch(format!(
                "{} character values for {} generators",
                gen_values.len(),
                group.generators().len()
            )));
        }
        let gv: Vec<u64> = gen_values.iter().map(|v| v % modulus).collect();
        let values =
            group.extend_from_generators(1 % modulus, &gv, |g, p| arith::mul(*g, *p, modulus));
        Self::new(group, modulus, values)
    }

    pub fn trivial(group: &Group, modulus: u64) -> Self {
        TwistCharacter {
            group: group.clone(),
            modulus,
            values: vec![1 % modulus; group.order()],
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn value(&self, g: usize) -> u64 {
        self.values[g]
    }

    /// `χ(g)^j` for any integer `j`.
    pub fn power(&self, g: usize, j: i64) -> u64 {
        pow_signed(self.values[g], j, self.modulus).expect("character values are units")
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 1 % self.modulus)
    }

    /// Reduction modulo a divisor `n` of the modulus.
    pub fn reduce_mod(&self, n: u64) -> Result<Self> {
        if n < 2 || !self.modulus.is_multiple_of(n) {
            return Err(Error::NotADivisor { n, m: self.modulus });
        }
        Ok(TwistCharacter {
            group: self.group.clone(),
            modulus: n,
            values: self.values.iter().map(|v| v % n).collect(),
        })
    }

    /// Restriction to a subgroup, as a character of the subgroup's own group.
    pub fn restrict(&self, h: &Subgroup) -> Result<Self> {
        if **h.group() != *self.group {
            return Err(Error::AmbientMismatch);
        }
        let (hg, embed) = h.as_group();
        Ok(TwistCharacter {
            group: hg,
            modulus: self.modulus,
            values: embed.iter().map(|&g| self.values[g]).collect(),
        })
    }

    /// Pullback along a group homomorphism into this character's group.
    pub fn pullback(&self, hom: &GroupHom) -> Result<Self> {
        if *hom.target != *self.group {
            return Err(Error::AmbientMismatch);
        }
        Ok(TwistCharacter {
            group: hom.source.clone(),
            modulus: self.modulus,
            values: hom.map.iter().map(|&g| self.values[g]).collect(),
        })
    }

    /// The same character over an equal group value.
    pub fn rebase(&self, group: &Group) -> Result<Self> {
        if **group != *self.group {
            return Err(Error::AmbientMismatch);
        }
        Ok(TwistCharacter {
            group: group.clone(),
            ..self.clone()
        })
    }
}

/// A Z/m-free module of finite rank with a `G`-action, one matrix per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    group: Group,
    modulus: u64,
    rank: usize,
    action: Vec<ZmMatrix>,
}

impl GModule {
    /// Validates shapes, invertibility and the homomorphism property.
    pub fn new(group: &Group, modulus: u64, rank: usize, action: Vec<ZmMatrix>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        if action.len() != group.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} action matrices for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        for a in &action {
            if a.modulus() != modulus {
                return Err(Error::ModulusMismatch(modulus, a.modulus()));
            }
            if a.rows() != rank || a.cols() != rank {
                return Err(Error::DimensionMismatch(format!(
                    "action matrix is not {rank}x{rank}"
                )));
            }
        }
        let module = GModule {
            group: group.clone(),
            modulus,
            rank,
            action,
        };
        module.verify()?;
        Ok(module)
    }

    /// Extends generator matrices along words, then verifies.
    pub fn from_generator_action(
        group: &Group,
        modulus: u64,
        rank: usize,
        gens: &[ZmMatrix],
    ) -> Result<Self> {
        if gens.len() != group.generators().len() {
            return Err(Error::DimensionMismatch(format!(
                "{} generator matrices for {} generators",
                gens.len(),
                group.generators().len()
            )));
        }
        for a in gens {
            if a.modulus() != modulus {
                return Err(Error::ModulusMismatch(modulus, a.modulus()));
            }
            if a.rows() != rank || a.cols() != rank {
                return Err(Error::DimensionMismatch(format!(
                    "generator matrix is not {rank}x{rank}"
                )));
            }
        }
        let action =
            group.extend_from_generators(ZmMatrix::identity(modulus, rank), gens, |g, p| {
                g.mul_unchecked(p)
            });
        Self::new(group, modulus, rank, action)
    }

    fn verify(&self) -> Result<()> {
        let g = &self.group;
        let id = ZmMatrix::identity(self.modulus, self.rank);
        if self.action[g.identity()] != id {
            return Err(Error::NotAHomomorphism(
                "identity does not act trivially".into(),
            ));
        }
        for (i, a) in self.action.iter().enumerate() {
            if inverse(a).is_none() {
                return Err(Error::InvalidObject(format!(
                    "action of element {i} is not invertible"
                )));
            }
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                if self.action[g.mul(a, b)] != self.action[a].mul_unchecked(&self.action[b]) {
                    return Err(Error::NotAHomomorphism(format!(
                        "action fails on elements {a}, {b}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Internal constructor for actions that are correct by construction.
    pub(crate) fn from_parts(
        group: &Group,
        modulus: u64,
        rank: usize,
        action: Vec<ZmMatrix>,
    ) -> Self {
        debug_assert_eq!(action.len(), group.order());
        GModule {
            group: group.clone(),
            modulus,
            rank,
            action,
        }
    }

    pub fn trivial(group: &Group, modulus: u64, rank: usize) -> Self {
        let id = ZmMatrix::identity(modulus, rank);
        GModule::from_parts(group, modulus, rank, vec![id; group.order()])
    }

    pub fn zero(group: &Group, modulus: u64) -> Self {
        GModule::trivial(group, modulus, 0)
    }

    /// `μ_m^{⊗j}`: rank one, `g` acting by `χ(g)^j`.
    pub fn mu_tensor(chi: &TwistCharacter, j: i64) -> Self {
        let m = chi.modulus();
        let action = (0..chi.group().order())
            .map(|g| ZmMatrix::from_data(m, 1, 1, vec![chi.power(g, j)]))
            .collect();
        GModule::from_parts(chi.group(), m, 1, action)
    }

    /// `Z/m[S] ⊗ μ^{⊗j}`: basis `e_x`, `g e_x = χ(g)^j e_{gx}`.
    pub fn twisted_permutation(set: &GSet, chi: &TwistCharacter, j: i64) -> Result<Self> {
        if set.group() != chi.group() {
            return Err(Error::AmbientMismatch);
        }
        let m = chi.modulus();
        let n = set.size();
        let action = (0..set.group().order())
            .map(|g| {
                let c = chi.power(g, j);
                let mut a = ZmMatrix::zeros(m, n, n);
                for x in 0..n {
                    a.set(set.act(g, x), x, c);
                }
                a
            })
            .collect();
        Ok(GModule::from_parts(chi.group(), m, n, action))
    }

    pub fn permutation(set: &GSet, modulus: u64) -> Self {
        GModule::twisted_permutation(set, &TwistCharacter::trivial(set.group(), modulus), 0)
            .expect("same group by construction")
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self, g: usize) -> &ZmMatrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[ZmMatrix] {
        &self.action
    }

    pub fn check_compatible(&self, other: &GModule) -> Result<()> {
        if *self.group != *other.group {
            return Err(Error::AmbientMismatch);
        }
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &GModule) -> Result<GModule> {
        self.check_compatible(other)?;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        Ok(GModule::from_parts(
            &self.group,
            self.modulus,
            self.rank + other.rank,
            action,
        ))
    }

    /// Tensor product over Z/m; basis `e_i ⊗ f_j` at index `i * rank(other) + j`.
    pub fn tensor(&self, other: &GModule) -> Result<GModule> {
        self.check_compatible(other)?;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.kron(b))
            .collect();
        Ok(GModule::from_parts(
            &self.group,
            self.modulus,
            self.rank * other.rank,
            action,
        ))
    }

    /// Contragredient: `g ↦ ρ(g^{-1})^T`.
    pub fn dual(&self) -> GModule {
        let g = &self.group;
        let action = (0..g.order())
            .map(|x| self.action[g.inv(x)].transpose())
            .collect();
        GModule::from_parts(g, self.modulus, self.rank, action)
    }

    /// `Hom(self, target)` with `g·φ = ρ_N(g) φ ρ_M(g)^{-1}`; the map `φ`
    /// (a `rank(N) × rank(M)` matrix) is flattened row-major.
    pub fn hom_module(&self, target: &GModule) -> Result<GModule> {
        self.check_compatible(target)?;
        let g = &self.group;
        let action = (0..g.order())
            .map(|x| target.action[x].kron(&self.action[g.inv(x)].transpose()))
            .collect();
        Ok(GModule::from_parts(
            g,
            self.modulus,
            self.rank * target.rank,
            action,
        ))
    }

    /// Rows spanning the fixed submodule `{v : ρ(g) v = v for all g}`.
    pub fn fixed_points(&self) -> ZmMatrix {
        let m = self.modulus;
        let id = ZmMatrix::identity(m, self.rank);
        let mut stacked = ZmMatrix::zeros(m, self.rank, 0);
        for &s in self.group.generator_indices() {
            stacked = stacked.hstack(&self.action[s].sub(&id).transpose());
        }
        kernel(&stacked)
    }

    /// Restriction to a subgroup, over the subgroup's own group.
    pub fn restrict(&self, h: &Subgroup) -> Result<GModule> {
        if **h.group() != *self.group {
            return Err(Error::AmbientMismatch);
        }
        let (hg, embed) = h.as_group();
        let action = embed.iter().map(|&g| self.action[g].clone()).collect();
        Ok(GModule::from_parts(&hg, self.modulus, self.rank, action))
    }

    /// Pullback along a homomorphism into this module's group.
    pub fn pullback(&self, hom: &GroupHom) -> Result<GModule> {
        if *hom.target != *self.group {
            return Err(Error::AmbientMismatch);
        }
        let action = hom.map.iter().map(|&q| self.action[q].clone()).collect();
        Ok(GModule::from_parts(
            &hom.source,
            self.modulus,
            self.rank,
            action,
        ))
    }

    /// The same module over an equal group value.
    pub fn rebase(&self, group: &Group) -> Result<GModule> {
        if **group != *self.group {
            return Err(Error::AmbientMismatch);
        }
        Ok(GModule {
            group: group.clone(),
            ..self.clone()
        })
    }

    /// Induction from the group of `self`, which must be `h` as a group in its
    /// own right. Basis `r_i ⊗ e_c` at index `i * rank + c`, with
    /// `g (r_i ⊗ v) = r_j ⊗ h v` where `g r_i = r_j h`.
    pub fn induce(&self, h: &Subgroup) -> Result<GModule> {
        let big = h.group();
        let local = subgroup_index_map(h, &self.group)?;
        let ca = h.coset_action();
        let k = ca.num_cosets();
        let r = self.rank;
        let m = self.modulus;
        let action = (0..big.order())
            .map(|g| {
                let mut a = ZmMatrix::zeros(m, k * r, k * r);
                for i in 0..k {
                    let (j, hh) = ca.act(g, i);
                    a.set_block(j * r, i * r, &self.action[local[hh]]);
                }
                a
            })
            .collect();
        Ok(GModule::from_parts(big, m, k * r, action))
    }

    /// Reduction modulo a divisor `n` of the modulus.
    pub fn reduce_mod(&self, n: u64) -> Result<GModule> {
        let action = self
            .action
            .iter()
            .map(|a| a.reduce_mod(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(GModule::from_parts(&self.group, n, self.rank, action))
    }

    /// Whether `f` (a `rank(target) × rank(self)` matrix) intertwines the actions.
    pub fn is_equivariant(&self, target: &GModule, f: &ZmMatrix) -> bool {
        f.rows() == target.rank
            && f.cols() == self.rank
            && self
                .group
                .generator_indices()
                .iter()
                .all(|&g| target.action[g].mul_unchecked(f) == f.mul_unchecked(&self.action[g]))
    }
}

/// For a subgroup `h` of `G` and a group `hg` equal to `h` as a permutation
/// group, maps each ambient index in `h` to its index in `hg`
/// (entries outside `h` are `usize::MAX`).
pub(crate) fn subgroup_index_map(h: &Subgroup, hg: &Group) -> Result<Vec<usize>> {
    let big = h.group();
    if hg.order() != h.order() || hg.degree() != big.degree() {
        return Err(Error::AmbientMismatch);
    }
    let mut local = vec![usize::MAX; big.order()];
    for &x in h.elements() {
        local[x] = hg.index_of(big.element(x)).ok_or(Error::AmbientMismatch)?;
    }
    Ok(local)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn sign_character() -> TwistCharacter {
        let g = FiniteGroup::cyclic(2);
        TwistCharacter::from_generator_values(&g, 4, &[3]).unwrap()
    }

    #[test]
    fn mu_tensor_examples() {
        let chi = sign_character();
        let m0 = GModule::mu_tensor(&chi, 0);
        assert_eq!(m0, GModule::trivial(chi.group(), 4, 1));
        let m1 = GModule::mu_tensor(&chi, 1);
        assert_eq!(m1.action(1).get(0, 0), 3);
        let m2 = GModule::mu_tensor(&chi, 2);
        assert_eq!(m2.action(1).get(0, 0), 1);
        assert_eq!(GModule::mu_tensor(&chi, -1).action(1).get(0, 0), 3);
    }

    #[test]
    fn character_validation() {
        let g = FiniteGroup::cyclic(2);
        assert!(TwistCharacter::from_generator_values(&g, 4, &[2]).is_err());
        let z3 = FiniteGroup::cyclic(3);
        // 3 is a unit mod 4 but has order 2, not dividing 3
        assert!(TwistCharacter::from_generator_values(&z3, 4, &[3]).is_err());
    }

    #[test]
    fn induce_and_restrict_examples() {
        let g = FiniteGroup::cyclic(2);
        let e = g.trivial_subgroup();
        let (eg, _) = e.as_group();
        let triv = GModule::trivial(&eg, 2, 1);
        let ind = triv.induce(&e).unwrap();
        assert_eq!(ind.rank(), 2);
        assert_eq!(
            ind.action(1),
            &ZmMatrix::from_rows(2, &[[0, 1], [1, 0]]).unwrap()
        );
        let back = ind.restrict(&e).unwrap();
        assert_eq!(back, GModule::trivial(back.group(), 2, 2));
        // H = G: induction and restriction are identities
        let whole = g.whole();
        let (gg, _) = whole.as_group();
        let m = GModule::trivial(&gg, 2, 1);
        assert_eq!(m.induce(&whole).unwrap().rank(), 1);
    }

    #[test]
    fn induction_of_trivial_is_permutation_module() {
        let g = FiniteGroup::symmetric(3);
        for h in g.subgroups_up_to_conjugacy(48).unwrap() {
            let (hg, _) = h.as_group();
            let ind = GModule::trivial(&hg, 3, 1).induce(&h).unwrap();
            let perm = GModule::permutation(&GSet::coset_space(&h), 3);
            assert_eq!(ind.actions(), perm.actions());
        }
    }

    #[test]
    fn hom_fixed_points() {
        let g = FiniteGroup::cyclic(2);
        let reg = GModule::permutation(&GSet::coset_space(&g.trivial_subgroup()), 2);
        let triv = GModule::trivial(&g, 2, 1);
        let hom = reg.hom_module(&triv).unwrap();
        let fixed = hom.fixed_points();
        assert_eq!(crate::zm::span_order(&fixed).as_u128(), Some(2));
        assert!(reg.is_equivariant(&triv, &ZmMatrix::from_rows(2, &[[1, 1]]).unwrap()));
        let end = reg.hom_module(&reg).unwrap();
        let id: Vec<u64> = ZmMatrix::identity(2, 2).data().to_vec();
        assert!(crate::zm::row_span_contains(&end.fixed_points(), &id));
    }
}
