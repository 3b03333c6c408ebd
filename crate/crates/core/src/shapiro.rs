//! The nonabelian Shapiro isomorphism H^1(Gamma, Map_{Gamma'}(Gamma, H))
//! <-> H^1(Gamma', H), in both directions. The forward map restricts the
//! domain and evaluates at the identity; the inverse rebuilds a cocycle
//! valued in the coinduced module from a transversal, with the free
//! choices pinned to the identity so the construction is deterministic.

use crate::action::CoinducedAction;
use crate::cohomology::{h1, Cocycle, H1Set, PointedMap};
use crate::error::{Error, Limits, Result};

/// Computes H^1 on both sides of the Shapiro isomorphism.
pub fn h1_both_sides(c: &CoinducedAction, limits: &Limits) -> Result<(H1Set, H1Set)> {
    let outer = h1(&c.action, limits)?;
    let inner = h1(&c.inner, limits)?;
    Ok((outer, inner))
}

/// The forward direction on a single cocycle: restrict to Gamma' and push
/// forward by evaluation at the identity.
pub fn forward_cocycle(c: &CoinducedAction, sigma: &Cocycle) -> Cocycle {
    let values = c
        .gamma_prime
        .elements
        .iter()
        .map(|&t| c.value_at(sigma.values[t], 0))
        .collect();
    Cocycle { values }
}

/// The forward map on classes. Verifies well-definedness by pushing every
/// member of every class, and that the image really is a cocycle.
pub fn shapiro_forward(c: &CoinducedAction, outer: &H1Set, inner: &H1Set) -> Result<PointedMap> {
    if outer.action != c.action {
        return Err(Error::MalformedInput(
            "H1 set was not built from this coinduced action".into(),
        ));
    }
    if inner.action != c.inner {
        return Err(Error::MalformedInput(
            "target H1 set does not match the inner action".into(),
        ));
    }
    let mut class_map = vec![usize::MAX; outer.class_count()];
    for (i, sigma) in outer.cocycles.iter().enumerate() {
        let image = forward_cocycle(c, sigma);
        if !image.verify(&c.inner) {
            return Err(Error::MalformedInput("forward image is not a cocycle".into()));
        }
        let cls = inner
            .class_of_cocycle(&image)
            .ok_or_else(|| Error::MalformedInput("image missing from target Z1".into()))?;
        let src = outer.class_of[i];
        if class_map[src] == usize::MAX {
            class_map[src] = cls;
        } else if class_map[src] != cls {
            return Err(Error::MalformedInput(
                "forward map is not constant on classes".into(),
            ));
        }
    }
    PointedMap::new(
        outer.class_count(),
        inner.class_count(),
        outer.basepoint,
        inner.basepoint,
        class_map,
    )
}

/// The inverse direction on a single cocycle of (Gamma', H), following the
/// explicit construction: fix a transversal {gamma_i} of the right cosets,
/// pin the free values h_i to the identity, put x_gamma(1) = phi(tau) for
/// gamma = tau * gamma_i, and complete with
/// x_gamma(gamma') = x_{gamma'}(1)^{-1} * x_{gamma' * gamma}(1).
///
/// `reps` must contain one element per right coset of Gamma', with the
/// identity representing the identity coset.
pub fn shapiro_inverse_cocycle(
    c: &CoinducedAction,
    reps: &[usize],
    phi: &Cocycle,
) -> Result<Cocycle> {
    validate_transversal(c, reps)?;
    if !phi.verify(&c.inner) {
        return Err(Error::MalformedInput(
            "input is not a cocycle of (Gamma', H)".into(),
        ));
    }
    let gamma = &c.action.gamma;
    // which coset each chosen representative covers, so evaluation can use
    // the caller's transversal rather than the canonical one
    let mut rep_of_coset = vec![0usize; c.index_count()];
    for &r in reps {
        rep_of_coset[c.decompose(r).0] = r;
    }
    // e(g) = phi(tau) for g = tau * chosen_rep; the pinned h_i contribute
    // nothing since they are identities
    let eval_at_one: Vec<usize> = (0..gamma.order())
        .map(|g| {
            let coset = c.decompose(g).0;
            let rep = rep_of_coset[coset];
            let tau_parent = gamma.mul(g, gamma.inv(rep));
            let tau = c
                .gamma_prime
                .index_of(tau_parent)
                .expect("transversal decomposition stays in Gamma'");
            phi.values[tau]
        })
        .collect();
    let h_group = &c.inner.module;
    let mut values = Vec::with_capacity(gamma.order());
    for g in 0..gamma.order() {
        // the value tuple uses the canonical representatives of the carrier:
        // x_g(r) = e(r)^{-1} * e(r * g)
        let tuple: Vec<usize> = c
            .reps
            .iter()
            .map(|&r| h_group.mul(h_group.inv(eval_at_one[r]), eval_at_one[gamma.mul(r, g)]))
            .collect();
        values.push(c.elt_of_tuple(&tuple));
    }
    let sigma = Cocycle { values };
    if !sigma.verify(&c.action) {
        return Err(Error::MalformedInput(
            "inverse construction did not produce a cocycle".into(),
        ));
    }
    Ok(sigma)
}

fn validate_transversal(c: &CoinducedAction, reps: &[usize]) -> Result<()> {
    let k = c.index_count();
    if reps.len() != k {
        return Err(Error::BadRepresentatives(format!(
            "need {k} representatives, got {}",
            reps.len()
        )));
    }
    let mut seen = vec![false; k];
    for &r in reps {
        if r >= c.action.gamma.order() {
            return Err(Error::BadRepresentatives(format!("{r} out of range")));
        }
        let (coset, _) = c.decompose(r);
        if seen[coset] {
            return Err(Error::BadRepresentatives(format!(
                "two representatives for coset {coset}"
            )));
        }
        seen[coset] = true;
    }
    if !reps.contains(&0) {
        return Err(Error::BadRepresentatives(
            "identity must represent the identity coset".into(),
        ));
    }
    Ok(())
}

/// The inverse map on classes, built from the canonical (least-index)
/// transversal. Checks that it is a section of the forward map cocycle by
/// cocycle.
pub fn shapiro_inverse(c: &CoinducedAction, outer: &H1Set, inner: &H1Set) -> Result<PointedMap> {
    let mut class_map = vec![usize::MAX; inner.class_count()];
    for (i, phi) in inner.cocycles.iter().enumerate() {
        let sigma = shapiro_inverse_cocycle(c, &c.reps, phi)?;
        let cls = outer
            .class_of_cocycle(&sigma)
            .ok_or_else(|| Error::MalformedInput("inverse image missing from Z1".into()))?;
        let back = forward_cocycle(c, &sigma);
        if &back != phi {
            return Err(Error::MalformedInput(
                "inverse is not a section of the forward map".into(),
            ));
        }
        let src = inner.class_of[i];
        if class_map[src] == usize::MAX {
            class_map[src] = cls;
        } else if class_map[src] != cls {
            return Err(Error::MalformedInput(
                "inverse map is not constant on classes".into(),
            ));
        }
    }
    PointedMap::new(
        inner.class_count(),
        outer.class_count(),
        inner.basepoint,
        outer.basepoint,
        class_map,
    )
}

/// Round-trip report for one coinduced instance.
#[derive(Debug, Clone)]
pub struct ShapiroReport {
    pub outer_classes: usize,
    pub inner_classes: usize,
    pub forward_after_inverse_is_identity: bool,
    pub inverse_after_forward_is_identity: bool,
}

impl ShapiroReport {
    pub fn is_bijection(&self) -> bool {
        self.outer_classes == self.inner_classes
            && self.forward_after_inverse_is_identity
            && self.inverse_after_forward_is_identity
    }
}

/// Verifies that the forward and inverse maps are mutually inverse
/// bijections of pointed sets for one coinduced action.
pub fn shapiro_round_trip(c: &CoinducedAction, limits: &Limits) -> Result<ShapiroReport> {
    let (outer, inner) = h1_both_sides(c, limits)?;
    let fwd = shapiro_forward(c, &outer, &inner)?;
    let inv = shapiro_inverse(c, &outer, &inner)?;
    let forward_after_inverse_is_identity =
        (0..inner.class_count()).all(|cls| fwd.map[inv.map[cls]] == cls);
    let inverse_after_forward_is_identity =
        (0..outer.class_count()).all(|cls| inv.map[fwd.map[cls]] == cls);
    Ok(ShapiroReport {
        outer_classes: outer.class_count(),
        inner_classes: inner.class_count(),
        forward_after_inverse_is_identity,
        inverse_after_forward_is_identity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::GammaGroupAction;
    use crate::action::coinduced_action;
    use crate::group::FiniteGroup;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn coinduced_h1_from_trivial_subgroup_is_a_singleton() {
        // H^1(Gamma, Map(Gamma, H)) = H^1({1}, H) = 1
        let z2 = FiniteGroup::cyclic(2);
        for h in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric(3)] {
            let gp = z2.subgroup(&[]);
            let inner = GammaGroupAction::trivial(gp.group.clone(), h);
            let c = coinduced_action(&z2, &gp, &inner, &lim()).unwrap();
            let (outer, inner_h1) = h1_both_sides(&c, &lim()).unwrap();
            assert_eq!(outer.class_count(), 1);
            assert_eq!(inner_h1.class_count(), 1);
        }
    }

    #[test]
    fn forward_map_preserves_the_basepoint() {
        let z2 = FiniteGroup::cyclic(2);
        let gp = z2.subgroup(&[]);
        let inner = GammaGroupAction::trivial(gp.group.clone(), FiniteGroup::cyclic(2));
        let c = coinduced_action(&z2, &gp, &inner, &lim()).unwrap();
        let (outer, inner_h1) = h1_both_sides(&c, &lim()).unwrap();
        let fwd = shapiro_forward(&c, &outer, &inner_h1).unwrap();
        assert_eq!(fwd.map[outer.basepoint], inner_h1.basepoint);
    }

    #[test]
    fn index_one_case_is_a_bijection() {
        // Gamma' = Gamma: the carrier is H with the original action and
        // the forward map is evaluation at 1
        let z4 = FiniteGroup::cyclic(4);
        let full = z4.subgroup(&[1]);
        let inv_map: Vec<usize> = (0..5).map(|x| (5 - x) % 5).collect();
        let inner = GammaGroupAction::from_generator_images(
            full.group.clone(),
            FiniteGroup::cyclic(5),
            &[1],
            &[inv_map],
        )
        .unwrap();
        let c = coinduced_action(&z4, &full, &inner, &lim()).unwrap();
        let report = shapiro_round_trip(&c, &lim()).unwrap();
        assert!(report.is_bijection(), "{report:?}");
    }

    #[test]
    fn s3_coinduction_round_trip() {
        let s3 = FiniteGroup::symmetric(3);
        let three_cycle = s3.elements().find(|&g| s3.element_order(g) == 3).unwrap();
        let gp = s3.subgroup(&[three_cycle]);
        let inner = GammaGroupAction::trivial(gp.group.clone(), FiniteGroup::cyclic(4));
        let c = coinduced_action(&s3, &gp, &inner, &lim()).unwrap();
        let report = shapiro_round_trip(&c, &lim()).unwrap();
        assert!(report.is_bijection(), "{report:?}");
    }

    #[test]
    fn nontrivial_inner_action_round_trip() {
        // Gamma = Z/2 x Z/2, Gamma' = first factor inverting Z/3
        let v4 = FiniteGroup::klein_four();
        let gp = v4.subgroup(&[2]); // (1, 0)
        let inner_action = GammaGroupAction::inversion(FiniteGroup::cyclic(3)).unwrap();
        // reindex: gp.group is Z/2 with the same table
        let inner = GammaGroupAction::new(
            gp.group.clone(),
            inner_action.module.clone(),
            vec![vec![0, 1, 2], vec![0, 2, 1]],
        )
        .unwrap();
        let c = coinduced_action(&v4, &gp, &inner, &lim()).unwrap();
        let report = shapiro_round_trip(&c, &lim()).unwrap();
        assert!(report.is_bijection(), "{report:?}");
        // H^1(Z/2 inverting Z/3) = 1, so both sides are singletons
        assert_eq!(report.inner_classes, 1);
    }

    #[test]
    fn bad_transversals_are_rejected() {
        let z2 = FiniteGroup::cyclic(2);
        let gp = z2.subgroup(&[]);
        let inner = GammaGroupAction::trivial(gp.group.clone(), FiniteGroup::cyclic(2));
        let c = coinduced_action(&z2, &gp, &inner, &lim()).unwrap();
        let phi = Cocycle::trivial(1);
        assert!(matches!(
            shapiro_inverse_cocycle(&c, &[0, 0], &phi),
            Err(Error::BadRepresentatives(_))
        ));
        assert!(matches!(
            shapiro_inverse_cocycle(&c, &[0], &phi),
            Err(Error::BadRepresentatives(_))
        ));
        assert!(matches!(
            shapiro_inverse_cocycle(&c, &[1, 7], &phi),
            Err(Error::BadRepresentatives(_))
        ));
    }

    #[test]
    fn trivial_class_round_trips_to_trivial_class() {
        let z2 = FiniteGroup::cyclic(2);
        let gp = z2.subgroup(&[]);
        let inner = GammaGroupAction::trivial(gp.group.clone(), FiniteGroup::symmetric(3));
        let c = coinduced_action(&z2, &gp, &inner, &lim()).unwrap();
        let phi = Cocycle::trivial(1);
        let sigma = shapiro_inverse_cocycle(&c, &c.reps, &phi).unwrap();
        assert!(sigma.is_trivial());
    }
}
