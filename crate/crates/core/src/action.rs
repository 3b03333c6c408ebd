//! Group actions: a group acting on a group by automorphisms, a group
//! acting on a finite set, and the compatible pairs used by quotient
//! groupoids. Also the coinduced action, which is the module underlying
//! the nonabelian Shapiro isomorphism.

use std::collections::HashMap;

use crate::error::{Error, Limits, Result, sat_pow};
use crate::group::{is_permutation, FiniteGroup, GroupHom, Subgroup};

/// An action of `gamma` on the group `module` by automorphisms;
/// `act[g]` is the image table of the automorphism attached to `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaGroupAction {
    pub gamma: FiniteGroup,
    pub module: FiniteGroup,
    act: Vec<Vec<usize>>,
}

impl GammaGroupAction {
    pub fn new(gamma: FiniteGroup, module: FiniteGroup, act: Vec<Vec<usize>>) -> Result<Self> {
        if act.len() != gamma.order() {
            return Err(Error::MalformedInput(
                "need one automorphism per group element".into(),
            ));
        }
        let a = GammaGroupAction { gamma, module, act };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<()> {
        for (g, map) in self.act.iter().enumerate() {
            if map.len() != self.module.order() || !is_permutation(map) {
                return Err(Error::MalformedInput(format!(
                    "action of {g} is not a bijection of the module"
                )));
            }
            if map[0] != 0 {
                return Err(Error::MalformedInput(format!(
                    "action of {g} does not fix the identity"
                )));
            }
            for a in 0..self.module.order() {
                for b in 0..self.module.order() {
                    if map[self.module.mul(a, b)] != self.module.mul(map[a], map[b]) {
                        return Err(Error::MalformedInput(format!(
                            "action of {g} is not multiplicative at ({a},{b})"
                        )));
                    }
                }
            }
        }
        for a in 0..self.module.order() {
            if self.act[0][a] != a {
                return Err(Error::MalformedInput(
                    "identity of gamma must act as the identity".into(),
                ));
            }
        }
        for g in 0..self.gamma.order() {
            for h in 0..self.gamma.order() {
                let gh = self.gamma.mul(g, h);
                for a in 0..self.module.order() {
                    if self.act[gh][a] != self.act[g][self.act[h][a]] {
                        return Err(Error::MalformedInput(format!(
                            "act({g}*{h}) differs from act({g}) after act({h})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn apply(&self, g: usize, m: usize) -> usize {
        self.act[g][m]
    }

    pub fn automorphism(&self, g: usize) -> &[usize] {
        &self.act[g]
    }

    pub fn trivial(gamma: FiniteGroup, module: FiniteGroup) -> Self {
        let id: Vec<usize> = (0..module.order()).collect();
        let act = vec![id; gamma.order()];
        GammaGroupAction { gamma, module, act }
    }

    /// Action of a cyclic-of-even-order or any group through inversion on an
    /// abelian module: every element of even order acts by m -> m^{-1}.
    /// Requires a homomorphism gamma -> Z/2; here we use the given sign map.
    pub fn by_signs(gamma: FiniteGroup, module: FiniteGroup, signs: &[bool]) -> Result<Self> {
        if !module.is_abelian() {
            return Err(Error::NotAbelian("inversion action".into()));
        }
        let id: Vec<usize> = (0..module.order()).collect();
        let inv: Vec<usize> = (0..module.order()).map(|m| module.inv(m)).collect();
        let act = signs
            .iter()
            .map(|&s| if s { inv.clone() } else { id.clone() })
            .collect();
        GammaGroupAction::new(gamma, module, act)
    }

    /// The inversion action of Z/2 on an abelian module.
    pub fn inversion(module: FiniteGroup) -> Result<Self> {
        GammaGroupAction::by_signs(FiniteGroup::cyclic(2), module, &[false, true])
    }

    /// Builds the action from automorphisms attached to generators of gamma,
    /// extending along word decompositions and validating the result.
    pub fn from_generator_images(
        gamma: FiniteGroup,
        module: FiniteGroup,
        gens: &[usize],
        gen_autos: &[Vec<usize>],
    ) -> Result<Self> {
        if gens.len() != gen_autos.len() {
            return Err(Error::MalformedInput(
                "one automorphism per generator required".into(),
            ));
        }
        if gamma.subgroup(gens).order() != gamma.order() {
            return Err(Error::MalformedInput(
                "listed elements do not generate gamma".into(),
            ));
        }
        let decomp = gamma.word_decomposition(gens)?;
        let id: Vec<usize> = (0..module.order()).collect();
        let mut act: Vec<Option<Vec<usize>>> = vec![None; gamma.order()];
        act[0] = Some(id);
        let mut remaining = gamma.order() - 1;
        while remaining > 0 {
            let mut progressed = false;
            for g in 1..gamma.order() {
                if act[g].is_some() {
                    continue;
                }
                let (prev, gi) = decomp[g].expect("generated");
                if let Some(prev_map) = act[prev].clone() {
                    // g = prev * gens[gi], so act(g) = act(prev) after act(gen)
                    let gen_map = &gen_autos[gi];
                    let map: Vec<usize> =
                        (0..module.order()).map(|m| prev_map[gen_map[m]]).collect();
                    act[g] = Some(map);
                    remaining -= 1;
                    progressed = true;
                }
            }
            if !progressed {
                return Err(Error::MalformedInput("could not extend action".into()));
            }
        }
        GammaGroupAction::new(gamma, module, act.into_iter().map(|m| m.unwrap()).collect())
    }

    /// The fixed subgroup `{m : act(g)(m) = m for all g}`.
    pub fn fixed_subgroup(&self) -> Subgroup {
        let fixed: Vec<usize> = (0..self.module.order())
            .filter(|&m| (0..self.gamma.order()).all(|g| self.act[g][m] == m))
            .collect();
        self.module.subgroup(&fixed)
    }

    /// Restricts the action to a stable subgroup of the module, giving an
    /// action of gamma on the subgroup's induced group.
    pub fn restrict_module(&self, sub: &Subgroup) -> Result<GammaGroupAction> {
        for g in 0..self.gamma.order() {
            for &m in &sub.elements {
                if !sub.contains(self.act[g][m]) {
                    return Err(Error::NotStable { gamma: g });
                }
            }
        }
        let act: Vec<Vec<usize>> = (0..self.gamma.order())
            .map(|g| {
                sub.elements
                    .iter()
                    .map(|&m| sub.index_of(self.act[g][m]).expect("stable"))
                    .collect()
            })
            .collect();
        GammaGroupAction::new(self.gamma.clone(), sub.group.clone(), act)
    }

    /// Restricts along a subgroup of gamma, acting on the same module.
    pub fn restrict_gamma(&self, sub: &Subgroup) -> GammaGroupAction {
        let act: Vec<Vec<usize>> = sub
            .elements
            .iter()
            .map(|&g| self.act[g].clone())
            .collect();
        GammaGroupAction {
            gamma: sub.group.clone(),
            module: self.module.clone(),
            act,
        }
    }

    /// The induced action of `gamma / n` on the fixed points of `n`, for a
    /// normal subgroup `n` of gamma acting through the given projection.
    pub fn induced_on_fixed(&self, n: &Subgroup) -> Result<(GammaGroupAction, GroupHom)> {
        let restricted = self.restrict_gamma(n);
        let fixed = restricted.fixed_subgroup();
        let (quot, proj) = self.gamma.quotient(n)?;
        // the action of a coset on M^N through any representative
        let mut reps = vec![usize::MAX; quot.order()];
        for g in 0..self.gamma.order() {
            let c = proj.apply(g);
            if reps[c] == usize::MAX {
                reps[c] = g;
            }
        }
        let mut act = Vec::with_capacity(quot.order());
        for c in 0..quot.order() {
            let g = reps[c];
            let map: Vec<usize> = fixed
                .elements
                .iter()
                .map(|&m| {
                    fixed
                        .index_of(self.act[g][m])
                        .ok_or_else(|| Error::MalformedInput("fixed set not stable".into()))
                })
                .collect::<Result<_>>()?;
            act.push(map);
        }
        // well-definedness: all representatives agree on the fixed subgroup
        for g in 0..self.gamma.order() {
            let c = proj.apply(g);
            for (i, &m) in fixed.elements.iter().enumerate() {
                if self.act[g][m] != fixed.embed(act[c][i]) {
                    return Err(Error::MalformedInput(
                        "quotient action not well defined on fixed points".into(),
                    ));
                }
            }
        }
        let action = GammaGroupAction::new(quot, fixed.group.clone(), act)?;
        Ok((action, proj))
    }
}

/// An action of a finite group on a finite indexed set; `perms[g]` is the
/// permutation attached to `g`. This serves both for the acting group of a
/// quotient groupoid and for the auxiliary Galois action on the set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetAction {
    pub group: FiniteGroup,
    pub degree: usize,
    perms: Vec<Vec<usize>>,
}

impl SetAction {
    pub fn new(group: FiniteGroup, degree: usize, perms: Vec<Vec<usize>>) -> Result<Self> {
        if perms.len() != group.order() {
            return Err(Error::MalformedInput("one permutation per element".into()));
        }
        for (g, p) in perms.iter().enumerate() {
            if p.len() != degree || !is_permutation(p) {
                return Err(Error::MalformedInput(format!(
                    "action of {g} is not a permutation of the carrier"
                )));
            }
        }
        for x in 0..degree {
            if perms[0][x] != x {
                return Err(Error::MalformedInput("identity must act trivially".into()));
            }
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = group.mul(g, h);
                for x in 0..degree {
                    if perms[gh][x] != perms[g][perms[h][x]] {
                        return Err(Error::MalformedInput(format!(
                            "perm({g}*{h}) differs from perm({g}) after perm({h})"
                        )));
                    }
                }
            }
        }
        Ok(SetAction { group, degree, perms })
    }

    #[inline]
    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.perms[g][x]
    }

    pub fn trivial(group: FiniteGroup, degree: usize) -> Self {
        let id: Vec<usize> = (0..degree).collect();
        SetAction {
            perms: vec![id; group.order()],
            group,
            degree,
        }
    }

    /// The left translation action of a group on itself.
    pub fn left_translation(group: FiniteGroup) -> Self {
        let perms: Vec<Vec<usize>> = (0..group.order())
            .map(|g| (0..group.order()).map(|x| group.mul(g, x)).collect())
            .collect();
        SetAction {
            degree: group.order(),
            group,
            perms,
        }
    }

    /// The action on a one-point set.
    pub fn point(group: FiniteGroup) -> Self {
        SetAction::trivial(group, 1)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.degree)
            .filter(|&x| (0..self.group.order()).all(|g| self.perms[g][x] == x))
            .collect()
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut orbits = Vec::new();
        for x in 0..self.degree {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> =
                (0..self.group.order()).map(|g| self.perms[g][x]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }

    pub fn is_free(&self) -> bool {
        (0..self.degree)
            .all(|x| (1..self.group.order()).all(|g| self.perms[g][x] != x))
    }

    /// The action of gamma on the set underlying the module of a group
    /// action (forgetting multiplication).
    pub fn from_group_action(a: &GammaGroupAction) -> Self {
        SetAction {
            group: a.gamma.clone(),
            degree: a.module.order(),
            perms: (0..a.gamma.order()).map(|g| a.automorphism(g).to_vec()).collect(),
        }
    }
}

/// A group G acting on a set X together with a compatible action of gamma
/// on both: beta(A(g, x)) = A(alpha(g), beta(x)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivariantPair {
    /// gamma acting on G by automorphisms
    pub group_action: GammaGroupAction,
    /// gamma acting on X
    pub set_action: SetAction,
    /// G acting on X
    pub module_action: SetAction,
}

impl EquivariantPair {
    pub fn new(
        group_action: GammaGroupAction,
        set_action: SetAction,
        module_action: SetAction,
    ) -> Result<Self> {
        if set_action.group != group_action.gamma {
            return Err(Error::MalformedInput(
                "set action must be an action of the same gamma".into(),
            ));
        }
        if module_action.group != group_action.module {
            return Err(Error::MalformedInput(
                "module action must be an action of the module group".into(),
            ));
        }
        if module_action.degree != set_action.degree {
            return Err(Error::MalformedInput("carrier sizes differ".into()));
        }
        let p = EquivariantPair {
            group_action,
            set_action,
            module_action,
        };
        p.check_compatibility()?;
        Ok(p)
    }

    fn check_compatibility(&self) -> Result<()> {
        let gam = &self.group_action.gamma;
        let g_ord = self.group_action.module.order();
        for gamma in 0..gam.order() {
            for g in 0..g_ord {
                for x in 0..self.set_action.degree {
                    let lhs = self.set_action.apply(gamma, self.module_action.apply(g, x));
                    let rhs = self
                        .module_action
                        .apply(self.group_action.apply(gamma, g), self.set_action.apply(gamma, x));
                    if lhs != rhs {
                        return Err(Error::MalformedInput(format!(
                            "compatibility square fails at (gamma={gamma}, g={g}, x={x})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The fixed pair: G^Gamma acting on X^Gamma.
    pub fn fixed_pair(&self) -> (Subgroup, Vec<usize>, SetAction) {
        let fixed_group = self.group_action.fixed_subgroup();
        let fixed_set = self.set_action.fixed_points();
        let pos: HashMap<usize, usize> =
            fixed_set.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let perms: Vec<Vec<usize>> = fixed_group
            .elements
            .iter()
            .map(|&g| {
                fixed_set
                    .iter()
                    .map(|&x| pos[&self.module_action.apply(g, x)])
                    .collect()
            })
            .collect();
        let action = SetAction::new(fixed_group.group.clone(), fixed_set.len(), perms)
            .expect("fixed action is an action");
        (fixed_group, fixed_set, action)
    }
}

/// The coinduced module Map_{Gamma'}(Gamma, H) together with the data needed
/// to move between its indexed carrier and equivariant maps. Elements are
/// indexed by their value tuple on the coset representatives, most
/// significant coordinate first.
#[derive(Debug, Clone)]
pub struct CoinducedAction {
    pub action: GammaGroupAction,
    /// the subgroup Gamma' of Gamma (in Gamma's indexing)
    pub gamma_prime: Subgroup,
    /// action of Gamma' (as its own group) on H
    pub inner: GammaGroupAction,
    /// least-index representatives of the right cosets Gamma' \ Gamma,
    /// identity first
    pub reps: Vec<usize>,
    /// for each element of Gamma: (index of its coset, the tau in Gamma'
    /// with gamma = tau * rep)
    decomposition: Vec<(usize, usize)>,
}

impl CoinducedAction {
    pub fn h_order(&self) -> usize {
        self.inner.module.order()
    }

    pub fn index_count(&self) -> usize {
        self.reps.len()
    }

    /// The value tuple of a carrier element on the coset representatives.
    pub fn tuple_of(&self, elt: usize) -> Vec<usize> {
        let h = self.h_order();
        let k = self.index_count();
        let mut v = vec![0usize; k];
        let mut rest = elt;
        for i in (0..k).rev() {
            v[i] = rest % h;
            rest /= h;
        }
        v
    }

    pub fn elt_of_tuple(&self, tuple: &[usize]) -> usize {
        let h = self.h_order();
        tuple.iter().fold(0usize, |acc, &v| acc * h + v)
    }

    /// The value of a carrier element at an arbitrary gamma, using
    /// equivariance: x(tau * rep_i) = tau . x(rep_i).
    pub fn value_at(&self, elt: usize, gamma: usize) -> usize {
        let (coset, tau) = self.decomposition[gamma];
        let tuple = self.tuple_of(elt);
        self.inner.apply(tau, tuple[coset])
    }

    /// Decomposes gamma as (coset index i, tau) with gamma = tau * reps[i].
    pub fn decompose(&self, gamma: usize) -> (usize, usize) {
        self.decomposition[gamma]
    }
}

/// Builds the coinduced action of Gamma on Map_{Gamma'}(Gamma, H) with the
/// right-translation action (gamma0 . x)(gamma) = x(gamma * gamma0).
///
/// `inner` must be an action of the induced group of `gamma_prime` on H.
pub fn coinduced_action(
    gamma: &FiniteGroup,
    gamma_prime: &Subgroup,
    inner: &GammaGroupAction,
    limits: &Limits,
) -> Result<CoinducedAction> {
    if inner.gamma != gamma_prime.group {
        return Err(Error::MalformedInput(
            "inner action must be an action of the subgroup".into(),
        ));
    }
    // right cosets Gamma' \ Gamma keyed by least member; identity coset first
    let mut coset_of = vec![usize::MAX; gamma.order()];
    let mut reps: Vec<usize> = Vec::new();
    for g in 0..gamma.order() {
        if coset_of[g] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(g);
        for &t in &gamma_prime.elements {
            coset_of[gamma.mul(t, g)] = c;
        }
    }
    let k = reps.len();
    let h = inner.module.order();
    let carrier = sat_pow(h, k as u32);
    limits.check_carrier("coinduced carrier", carrier.min(u64::MAX) as usize)?;
    let n = carrier as usize;

    let mut decomposition = vec![(0usize, 0usize); gamma.order()];
    for g in 0..gamma.order() {
        let c = coset_of[g];
        // tau = g * rep^{-1} lies in Gamma'
        let tau_parent = gamma.mul(g, gamma.inv(reps[c]));
        let tau = gamma_prime
            .index_of(tau_parent)
            .ok_or_else(|| Error::MalformedInput("coset decomposition failed".into()))?;
        decomposition[g] = (c, tau);
    }

    // carrier group: pointwise products of value tuples
    let mut table = vec![0u32; n * n];
    let mut tup_a = vec![0usize; k];
    let mut tup_b = vec![0usize; k];
    let mut tup_c = vec![0usize; k];
    for a in 0..n {
        decode(a, h, &mut tup_a);
        for b in 0..n {
            decode(b, h, &mut tup_b);
            for i in 0..k {
                tup_c[i] = inner.module.mul(tup_a[i], tup_b[i]);
            }
            table[a * n + b] = encode(&tup_c, h) as u32;
        }
    }
    // associativity holds coordinatewise, so skip the cubic scan
    let module = FiniteGroup::from_table_trusted(n, table)?;

    // action of gamma0: new_tuple[i] = tau_i . old_tuple[j_i] where
    // reps[i] * gamma0 = tau_i * reps[j_i]
    let mut act = Vec::with_capacity(gamma.order());
    for g0 in 0..gamma.order() {
        let moves: Vec<(usize, usize)> = (0..k)
            .map(|i| {
                let target = gamma.mul(reps[i], g0);
                decomposition[target]
            })
            .collect();
        let mut map = vec![0usize; n];
        let mut tup = vec![0usize; k];
        let mut new_tup = vec![0usize; k];
        for (x, slot) in map.iter_mut().enumerate() {
            decode(x, h, &mut tup);
            for i in 0..k {
                let (j, tau) = moves[i];
                new_tup[i] = inner.apply(tau, tup[j]);
            }
            *slot = encode(&new_tup, h);
        }
        act.push(map);
    }
    let action = GammaGroupAction::new(gamma.clone(), module, act)?;
    Ok(CoinducedAction {
        action,
        gamma_prime: gamma_prime.clone(),
        inner: inner.clone(),
        reps,
        decomposition,
    })
}

fn decode(mut x: usize, h: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = x % h;
        x /= h;
    }
}

fn encode(tuple: &[usize], h: usize) -> usize {
    tuple.iter().fold(0, |acc, &v| acc * h + v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inversion_action_on_z3() {
        let a = GammaGroupAction::inversion(FiniteGroup::cyclic(3)).unwrap();
        assert_eq!(a.apply(1, 1), 2);
        assert_eq!(a.apply(1, 2), 1);
        assert_eq!(a.fixed_subgroup().elements, vec![0]);
    }

    #[test]
    fn trivial_action_fixes_everything() {
        let m = FiniteGroup::symmetric(3);
        let a = GammaGroupAction::trivial(FiniteGroup::cyclic(2), m.clone());
        assert_eq!(a.fixed_subgroup().order(), 6);
    }

    #[test]
    fn inversion_on_z4_fixes_the_involution() {
        let a = GammaGroupAction::inversion(FiniteGroup::cyclic(4)).unwrap();
        // pointwise check oracle
        let fixed: Vec<usize> = (0..4).filter(|&m| a.apply(1, m) == m).collect();
        assert_eq!(fixed, vec![0, 2]);
        assert_eq!(a.fixed_subgroup().elements, vec![0, 2]);
    }

    #[test]
    fn coinduced_from_trivial_subgroup_is_a_product_with_swap() {
        let z2 = FiniteGroup::cyclic(2);
        let gp = z2.subgroup(&[]);
        let inner = GammaGroupAction::trivial(gp.group.clone(), FiniteGroup::cyclic(2));
        let c = coinduced_action(&z2, &gp, &inner, &Limits::default()).unwrap();
        assert_eq!(c.action.module.order(), 4);
        assert!(c.action.module.is_isomorphic_to(&FiniteGroup::klein_four()));
        // the nontrivial gamma element swaps the two coordinates
        let x = c.elt_of_tuple(&[1, 0]);
        let y = c.elt_of_tuple(&[0, 1]);
        assert_eq!(c.action.apply(1, x), y);
        assert_eq!(c.action.apply(1, y), x);
    }

    #[test]
    fn coinduced_from_full_group_is_the_original_action() {
        let z3 = FiniteGroup::cyclic(3);
        let s3 = FiniteGroup::symmetric(3);
        let full = s3.subgroup(&(0..6).collect::<Vec<_>>());
        // S3 acting on Z/3 through the sign: odd permutations invert
        let signs: Vec<bool> = (0..6).map(|g| full.group.element_order(g) == 2).collect();
        let inner = GammaGroupAction::by_signs(full.group.clone(), z3.clone(), &signs).unwrap();
        let c = coinduced_action(&s3, &full, &inner, &Limits::default()).unwrap();
        assert_eq!(c.action.module.order(), 3);
        for g in 0..6 {
            for m in 0..3 {
                assert_eq!(c.action.apply(g, m), inner.apply(g, m));
            }
        }
    }

    #[test]
    fn coinduced_carrier_order_is_h_to_the_index() {
        let s3 = FiniteGroup::symmetric(3);
        let three_cycle = s3.elements().find(|&g| s3.element_order(g) == 3).unwrap();
        let gp = s3.subgroup(&[three_cycle]);
        let inner = GammaGroupAction::trivial(gp.group.clone(), FiniteGroup::cyclic(2));
        let c = coinduced_action(&s3, &gp, &inner, &Limits::default()).unwrap();
        // index 2, |H| = 2 -> order 4, with S3 permuting two coordinates
        assert_eq!(c.action.module.order(), 4);
        let transposition = s3.elements().find(|&g| s3.element_order(g) == 2).unwrap();
        let x = c.elt_of_tuple(&[1, 0]);
        assert_ne!(c.action.apply(transposition, x), x);
    }

    #[test]
    fn size_guard_rejects_large_coinduction() {
        let s3 = FiniteGroup::symmetric(3);
        let gp = s3.subgroup(&[]);
        let inner = GammaGroupAction::trivial(gp.group.clone(), FiniteGroup::cyclic(8));
        let err = coinduced_action(&s3, &gp, &inner, &Limits::default()).unwrap_err();
        assert!(matches!(err, Error::SizeGuard { .. }));
    }

    #[test]
    fn equivariant_pair_compatibility_is_checked() {
        let z2 = FiniteGroup::cyclic(2);
        let z3 = FiniteGroup::cyclic(3);
        let ga = GammaGroupAction::inversion(z3.clone()).unwrap();
        // gamma acts on the set Z/3 by inversion, G = Z/3 by translation
        let beta = SetAction::new(
            z2.clone(),
            3,
            vec![vec![0, 1, 2], vec![0, 2, 1]],
        )
        .unwrap();
        let translation = SetAction::left_translation(z3.clone());
        let pair = EquivariantPair::new(ga.clone(), beta, translation.clone()).unwrap();
        let (fg, fx, _) = pair.fixed_pair();
        assert_eq!(fg.order(), 1);
        assert_eq!(fx, vec![0]);

        // an incompatible pair: gamma trivial on the set but inverting G
        let beta_bad = SetAction::trivial(z2, 3);
        assert!(EquivariantPair::new(ga, beta_bad, translation).is_err());
    }

    #[test]
    fn induced_action_on_fixed_points() {
        // Gamma = Z/4 acting on Z/5 with generator acting by x -> 2x
        // (order 4 automorphism); N = Z/2 inside acts by x -> 4x = -x.
        let z4 = FiniteGroup::cyclic(4);
        let z5 = FiniteGroup::cyclic(5);
        let double: Vec<usize> = (0..5).map(|x| (2 * x) % 5).collect();
        let a = GammaGroupAction::from_generator_images(z4.clone(), z5, &[1], &[double]).unwrap();
        let n = z4.subgroup(&[2]);
        let (induced, _) = a.induced_on_fixed(&n).unwrap();
        // -x fixes only 0, so the induced module is trivial
        assert_eq!(induced.module.order(), 1);
        assert_eq!(induced.gamma.order(), 2);
    }
}
