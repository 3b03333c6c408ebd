//! Weak actions of a finite group on a finite groupoid: one endofunctor
//! per group element plus coherence isomorphisms, subject to the unit and
//! associativity axioms of a weak functor out of the delooping of the
//! group. Weak equivariant maps carry the comparison isomorphisms between
//! the two ways around each naturality square.
//!
//! Composition is diagrammatic ("f then g") and the coherence data
//! eta_comp(first, second) is an isomorphism F(second * first) ->
//! F(second) after F(first), matching the order in which the two group
//! elements act.

use std::sync::Arc;

use crate::action::{EquivariantPair, GammaGroupAction, SetAction};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::groupoid::{classifying_groupoid, ActionGroupoid, FiniteGroupoid, GFunctor, NatIso};

/// A weak action of `gamma` on `base`.
#[derive(Debug, Clone)]
pub struct WeakAction {
    pub gamma: FiniteGroup,
    pub base: Arc<FiniteGroupoid>,
    pub functors: Vec<GFunctor>,
    /// eta_id : Id -> F(1)
    pub eta_id: NatIso,
    /// eta_comp(first, second) at index `first * |gamma| + second`:
    /// F(second * first) -> F(second) after F(first)
    pub eta_comp: Vec<NatIso>,
}

/// A named violation of the weak-functor axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeakActionViolation {
    BadFunctor { gamma: usize, reason: String },
    BadEtaId { reason: String },
    BadEtaComp { first: usize, second: usize, reason: String },
    UnitLeft { gamma: usize, object: usize },
    UnitRight { gamma: usize, object: usize },
    Associativity { first: usize, second: usize, third: usize, object: usize },
}

impl WeakAction {
    pub fn eta_comp(&self, first: usize, second: usize) -> &NatIso {
        &self.eta_comp[first * self.gamma.order() + second]
    }

    /// A strict action: the functors compose on the nose and all coherence
    /// data are identities. Verified.
    pub fn strict(
        gamma: FiniteGroup,
        base: Arc<FiniteGroupoid>,
        functors: Vec<GFunctor>,
    ) -> Result<WeakAction> {
        if functors.len() != gamma.order() {
            return Err(Error::MalformedInput("one functor per group element".into()));
        }
        for (g, f) in functors.iter().enumerate() {
            if f.source != base || f.target != base {
                return Err(Error::MalformedInput(format!(
                    "functor {g} is not an endofunctor of the base"
                )));
            }
        }
        let id_functor = GFunctor::identity(base.clone());
        if functors[0] != id_functor {
            return Err(Error::MalformedInput(
                "strict action requires F(1) to be the identity functor".into(),
            ));
        }
        for g in 0..gamma.order() {
            for h in 0..gamma.order() {
                // "h then g" composes to the functor of g * h
                let composed = functors[h].compose(&functors[g]);
                if composed != functors[gamma.mul(g, h)] {
                    return Err(Error::MalformedInput(format!(
                        "functors do not compose strictly at ({g},{h})"
                    )));
                }
            }
        }
        let eta_id = NatIso::identity(&id_functor);
        let n = gamma.order();
        let mut eta_comp = Vec::with_capacity(n * n);
        for first in 0..n {
            for second in 0..n {
                let composed = functors[gamma.mul(second, first)].clone();
                eta_comp.push(NatIso::identity(&composed));
            }
        }
        let w = WeakAction { gamma, base, functors, eta_id, eta_comp };
        let violations = check_weak_action(&w);
        if !violations.is_empty() {
            return Err(Error::MalformedInput(format!(
                "strict action fails the axioms: {violations:?}"
            )));
        }
        Ok(w)
    }

    /// The trivial action: every group element acts as the identity.
    pub fn trivial(gamma: FiniteGroup, base: Arc<FiniteGroupoid>) -> WeakAction {
        let id = GFunctor::identity(base.clone());
        let functors = vec![id; gamma.order()];
        WeakAction::strict(gamma, base, functors).expect("trivial action is strict")
    }

    /// The strict action on the one-object groupoid of the module induced
    /// by an action of gamma by automorphisms.
    pub fn on_classifying(a: &GammaGroupAction) -> (ActionGroupoid, WeakAction) {
        let ag = classifying_groupoid(&a.module);
        let base = ag.groupoid.clone();
        let functors: Vec<GFunctor> = (0..a.gamma.order())
            .map(|g| {
                GFunctor::new(
                    base.clone(),
                    base.clone(),
                    vec![0],
                    (0..a.module.order()).map(|m| a.apply(g, m)).collect(),
                )
                .expect("automorphism induces a functor")
            })
            .collect();
        let w = WeakAction::strict(a.gamma.clone(), base, functors)
            .expect("automorphisms give a strict action");
        (ag, w)
    }

    /// The strict action on the action groupoid [X/G] induced by a
    /// compatible pair: objects move by the set action, morphisms by the
    /// group action.
    pub fn on_action_groupoid(pair: &EquivariantPair) -> (ActionGroupoid, WeakAction) {
        let ag = ActionGroupoid::new(pair.module_action.clone());
        let base = ag.groupoid.clone();
        let gamma = pair.group_action.gamma.clone();
        let functors: Vec<GFunctor> = (0..gamma.order())
            .map(|gam| {
                let obj_map: Vec<usize> = (0..pair.set_action.degree)
                    .map(|x| pair.set_action.apply(gam, x))
                    .collect();
                let mor_map: Vec<usize> = ag
                    .labels
                    .iter()
                    .map(|&(g, x)| {
                        ag.morphism(
                            pair.group_action.apply(gam, g),
                            pair.set_action.apply(gam, x),
                        )
                    })
                    .collect();
                GFunctor::new(base.clone(), base.clone(), obj_map, mor_map)
                    .expect("compatible pair induces functors")
            })
            .collect();
        let w = WeakAction::strict(gamma, base, functors)
            .expect("compatible pair gives a strict action");
        (ag, w)
    }

    /// Whether all coherence data are identity isomorphisms.
    pub fn is_strict(&self) -> bool {
        let id_components = |iso: &NatIso, f: &GFunctor| {
            iso.components
                .iter()
                .enumerate()
                .all(|(x, &c)| c == self.base.identity(f.obj_map[x]))
        };
        id_components(&self.eta_id, &self.functors[0])
            && (0..self.gamma.order()).all(|first| {
                (0..self.gamma.order()).all(|second| {
                    let f = &self.functors[self.gamma.mul(second, first)];
                    id_components(self.eta_comp(first, second), f)
                })
            })
    }
}

/// Exhaustive verification of the weak-functor axioms: functor validity,
/// naturality and endpoints of all coherence data, the two unit laws and
/// the associativity coherence, at every object and every triple.
pub fn check_weak_action(w: &WeakAction) -> Vec<WeakActionViolation> {
    let mut out = Vec::new();
    let n = w.gamma.order();
    let base = &w.base;

    if w.functors.len() != n || w.eta_comp.len() != n * n {
        out.push(WeakActionViolation::BadFunctor {
            gamma: 0,
            reason: "wrong number of functors or coherence cells".into(),
        });
        return out;
    }
    for (g, f) in w.functors.iter().enumerate() {
        if f.source != *base || f.target != *base {
            out.push(WeakActionViolation::BadFunctor {
                gamma: g,
                reason: "not an endofunctor of the base".into(),
            });
            return out;
        }
    }
    let id_functor = GFunctor::identity(base.clone());
    if let Err(e) = w.eta_id.validate(&id_functor, &w.functors[0]) {
        out.push(WeakActionViolation::BadEtaId { reason: e.to_string() });
    }
    for first in 0..n {
        for second in 0..n {
            let source = &w.functors[w.gamma.mul(second, first)];
            let target = w.functors[first].compose(&w.functors[second]);
            if let Err(e) = w.eta_comp(first, second).validate(source, &target) {
                out.push(WeakActionViolation::BadEtaComp {
                    first,
                    second,
                    reason: e.to_string(),
                });
            }
        }
    }
    if !out.is_empty() {
        return out;
    }

    // unit laws, componentwise:
    //   eta_comp(g, 1)(x) = eta_id at F(g)(x)
    //   eta_comp(1, g)(x) = F(g) applied to eta_id at x
    for g in 0..n {
        for x in 0..base.n_objects() {
            let lhs = w.eta_comp(g, 0).at(x);
            let rhs = w.eta_id.at(w.functors[g].on_obj(x));
            if lhs != rhs {
                out.push(WeakActionViolation::UnitLeft { gamma: g, object: x });
            }
            let lhs2 = w.eta_comp(0, g).at(x);
            let rhs2 = w.functors[g].on_mor(w.eta_id.at(x));
            if lhs2 != rhs2 {
                out.push(WeakActionViolation::UnitRight { gamma: g, object: x });
            }
        }
    }

    // associativity coherence over all triples and objects:
    //   eta(g2*g1, g3)(x) then F(g3)(eta(g1, g2)(x))
    //     = eta(g1, g3*g2)(x) then eta(g2, g3) at F(g1)(x)
    for g1 in 0..n {
        for g2 in 0..n {
            for g3 in 0..n {
                let left_first = w.eta_comp(w.gamma.mul(g2, g1), g3);
                let inner = w.eta_comp(g1, g2);
                let right_first = w.eta_comp(g1, w.gamma.mul(g3, g2));
                let outer = w.eta_comp(g2, g3);
                for x in 0..base.n_objects() {
                    let lhs =
                        base.then(left_first.at(x), w.functors[g3].on_mor(inner.at(x)));
                    let rhs =
                        base.then(right_first.at(x), outer.at(w.functors[g1].on_obj(x)));
                    if lhs != rhs {
                        out.push(WeakActionViolation::Associativity {
                            first: g1,
                            second: g2,
                            third: g3,
                            object: x,
                        });
                    }
                }
            }
        }
    }
    out
}

/// A weak equivariant map between weak actions of the same group: a base
/// functor together with, for each group element, the comparison
/// isomorphism eps(g): alpha after F(g) -> G(g) after alpha.
#[derive(Debug, Clone)]
pub struct WeakEquivariantMap {
    pub source: WeakAction,
    pub target: WeakAction,
    pub alpha: GFunctor,
    /// eps[g] has components alpha(F(g)(x)) -> G(g)(alpha(x))
    pub eps: Vec<NatIso>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeakMapViolation {
    Structural { reason: String },
    BadEps { gamma: usize, reason: String },
    Unit { object: usize },
    Hexagon { first: usize, second: usize, object: usize },
}

impl WeakEquivariantMap {
    pub fn new(
        source: WeakAction,
        target: WeakAction,
        alpha: GFunctor,
        eps: Vec<NatIso>,
    ) -> Result<WeakEquivariantMap> {
        let m = WeakEquivariantMap { source, target, alpha, eps };
        let violations = m.check();
        if !violations.is_empty() {
            return Err(Error::MalformedInput(format!(
                "weak equivariant map fails the axioms: {violations:?}"
            )));
        }
        Ok(m)
    }

    /// A strictly commuting map between strict actions, with identity eps.
    pub fn strict(source: WeakAction, target: WeakAction, alpha: GFunctor) -> Result<Self> {
        let n = source.gamma.order();
        let mut eps = Vec::with_capacity(n);
        for g in 0..n {
            let composed = source.functors[g].compose(&alpha);
            let other = alpha.compose(&target.functors[g]);
            if composed.obj_map != other.obj_map || composed.mor_map != other.mor_map {
                return Err(Error::MalformedInput(format!(
                    "alpha does not commute strictly with the actions at {g}"
                )));
            }
            eps.push(NatIso::identity(&composed));
        }
        WeakEquivariantMap::new(source, target, alpha, eps)
    }

    /// self then other: composes the base functors and pastes the
    /// comparison cells.
    pub fn compose(&self, other: &WeakEquivariantMap) -> Result<WeakEquivariantMap> {
        let alpha = self.alpha.compose(&other.alpha);
        let big = &other.target.base;
        let eps = (0..self.source.gamma.order())
            .map(|g| NatIso {
                components: (0..self.source.base.n_objects())
                    .map(|x| {
                        big.then(
                            other.alpha.on_mor(self.eps[g].at(x)),
                            other.eps[g].at(self.alpha.on_obj(x)),
                        )
                    })
                    .collect(),
            })
            .collect();
        WeakEquivariantMap::new(self.source.clone(), other.target.clone(), alpha, eps)
    }

    /// The identity map of a weak action.
    pub fn identity(action: &WeakAction) -> WeakEquivariantMap {
        let alpha = GFunctor::identity(action.base.clone());
        let eps = (0..action.gamma.order())
            .map(|g| NatIso::identity(&action.functors[g]))
            .collect();
        WeakEquivariantMap {
            source: action.clone(),
            target: action.clone(),
            alpha,
            eps,
        }
    }

    pub fn check(&self) -> Vec<WeakMapViolation> {
        let mut out = Vec::new();
        let n = self.source.gamma.order();
        if self.source.gamma != self.target.gamma {
            out.push(WeakMapViolation::Structural {
                reason: "source and target have different groups".into(),
            });
            return out;
        }
        if self.alpha.source != self.source.base || self.alpha.target != self.target.base {
            out.push(WeakMapViolation::Structural {
                reason: "alpha does not go between the bases".into(),
            });
            return out;
        }
        if self.eps.len() != n {
            out.push(WeakMapViolation::Structural {
                reason: "one eps per group element".into(),
            });
            return out;
        }
        for g in 0..n {
            let src = self.source.functors[g].compose(&self.alpha);
            let tgt = self.alpha.compose(&self.target.functors[g]);
            if let Err(e) = self.eps[g].validate(&src, &tgt) {
                out.push(WeakMapViolation::BadEps { gamma: g, reason: e.to_string() });
            }
        }
        if !out.is_empty() {
            return out;
        }
        let src_base = &self.source.base;
        let tgt_base = &self.target.base;
        // unit: alpha(eta_id^F at x) then eps(1)_x = eta_id^G at alpha(x)
        for x in 0..src_base.n_objects() {
            let lhs = tgt_base.then(
                self.alpha.on_mor(self.source.eta_id.at(x)),
                self.eps[0].at(x),
            );
            let rhs = self.target.eta_id.at(self.alpha.on_obj(x));
            if lhs != rhs {
                out.push(WeakMapViolation::Unit { object: x });
            }
        }
        // hexagon: for g acting first and g' second, at every object x:
        //   eps(g'*g)_x then etaG(g, g') at alpha(x)
        //     = alpha(etaF(g, g')_x) then eps(g') at F(g)(x)
        //       then G(g')(eps(g)_x)
        let gam = &self.source.gamma;
        for g in 0..n {
            for gp in 0..n {
                for x in 0..src_base.n_objects() {
                    let lhs = tgt_base.then(
                        self.eps[gam.mul(gp, g)].at(x),
                        self.target.eta_comp(g, gp).at(self.alpha.on_obj(x)),
                    );
                    let mid = tgt_base.then(
                        self.alpha.on_mor(self.source.eta_comp(g, gp).at(x)),
                        self.eps[gp].at(self.source.functors[g].on_obj(x)),
                    );
                    let rhs =
                        tgt_base.then(mid, self.target.functors[gp].on_mor(self.eps[g].at(x)));
                    if lhs != rhs {
                        out.push(WeakMapViolation::Hexagon {
                            first: g,
                            second: gp,
                            object: x,
                        });
                    }
                }
            }
        }
        out
    }
}

/// Gauge-twists a weak action by a family of natural automorphisms
/// v[g]: F(g) -> F(g). The functors stay the same; the coherence data pick
/// up the v's so that (Id, v) becomes a weak equivariant map from the
/// input to the twist.
pub fn gauge_twist(w: &WeakAction, v: &[NatIso]) -> Result<(WeakAction, WeakEquivariantMap)> {
    let n = w.gamma.order();
    if v.len() != n {
        return Err(Error::MalformedInput("one gauge per group element".into()));
    }
    for g in 0..n {
        v[g].validate(&w.functors[g], &w.functors[g])
            .map_err(|e| Error::MalformedInput(format!("gauge at {g}: {e}")))?;
    }
    let base = &w.base;
    // eta'_id = eta_id then v(1)
    let eta_id = NatIso {
        components: (0..base.n_objects())
            .map(|x| base.then(w.eta_id.at(x), v[0].at(x)))
            .collect(),
    };
    // eta'(g, g') = v(g'*g)^{-1} then eta(g, g') then the horizontal
    // composite of v(g) and v(g'), whose component at x is
    // F(g')(v(g)_x) then v(g') at F(g)(x)
    let mut eta_comp = Vec::with_capacity(n * n);
    for first in 0..n {
        for second in 0..n {
            let composed_elt = w.gamma.mul(second, first);
            let components = (0..base.n_objects())
                .map(|x| {
                    let start = base.inverse(v[composed_elt].at(x));
                    let mid = base.then(start, w.eta_comp(first, second).at(x));
                    let horiz = base.then(
                        w.functors[second].on_mor(v[first].at(x)),
                        v[second].at(w.functors[first].on_obj(x)),
                    );
                    base.then(mid, horiz)
                })
                .collect();
            eta_comp.push(NatIso { components });
        }
    }
    let twisted = WeakAction {
        gamma: w.gamma.clone(),
        base: w.base.clone(),
        functors: w.functors.clone(),
        eta_id,
        eta_comp,
    };
    let violations = check_weak_action(&twisted);
    if !violations.is_empty() {
        return Err(Error::MalformedInput(format!(
            "gauge twist broke the axioms: {violations:?}"
        )));
    }
    let map = WeakEquivariantMap::new(
        w.clone(),
        twisted.clone(),
        GFunctor::identity(w.base.clone()),
        v.to_vec(),
    )?;
    Ok((twisted, map))
}

/// A genuinely weak action on the one-object groupoid of a group: the
/// functors come from the group action, and the coherence cells are the
/// values of a normalized central 2-cochain z: Gamma x Gamma -> Z(module).
/// The axioms hold exactly when z is a 2-cocycle; the constructor verifies
/// them and fails otherwise.
pub fn central_twist_on_classifying(
    a: &GammaGroupAction,
    z: &dyn Fn(usize, usize) -> usize,
) -> Result<WeakAction> {
    let (_, strict) = WeakAction::on_classifying(a);
    let n = a.gamma.order();
    let base = strict.base.clone();
    // over a one-object groupoid, a natural automorphism of F(g) is the
    // same thing as a central element of the module
    let mut eta_comp = Vec::with_capacity(n * n);
    for first in 0..n {
        for second in 0..n {
            eta_comp.push(NatIso { components: vec![z(first, second)] });
        }
    }
    let eta_id = NatIso { components: vec![z(0, 0)] };
    let w = WeakAction {
        gamma: strict.gamma,
        base,
        functors: strict.functors,
        eta_id,
        eta_comp,
    };
    let violations = check_weak_action(&w);
    if !violations.is_empty() {
        return Err(Error::MalformedInput(format!(
            "central data is not a normalized 2-cocycle: {violations:?}"
        )));
    }
    Ok(w)
}

/// Central elements of a group.
pub fn center(g: &FiniteGroup) -> Vec<usize> {
    g.elements()
        .filter(|&z| g.elements().all(|h| g.mul(z, h) == g.mul(h, z)))
        .collect()
}

/// The strict weak action of a group on a discrete groupoid through a set
/// action.
pub fn on_discrete(sa: &SetAction) -> (Arc<FiniteGroupoid>, WeakAction) {
    let base = Arc::new(FiniteGroupoid::discrete(sa.degree));
    let functors: Vec<GFunctor> = (0..sa.group.order())
        .map(|g| {
            let map: Vec<usize> = (0..sa.degree).map(|x| sa.apply(g, x)).collect();
            GFunctor::new(base.clone(), base.clone(), map.clone(), map)
                .expect("permutation induces a functor")
        })
        .collect();
    let w = WeakAction::strict(sa.group.clone(), base.clone(), functors)
        .expect("set action gives a strict action");
    (base, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_action_passes() {
        let base = Arc::new(FiniteGroupoid::delooping(&FiniteGroup::cyclic(3)));
        let w = WeakAction::trivial(FiniteGroup::klein_four(), base);
        assert!(check_weak_action(&w).is_empty());
        assert!(w.is_strict());
    }

    #[test]
    fn strict_action_from_homomorphism_passes() {
        let a = GammaGroupAction::inversion(FiniteGroup::cyclic(5)).unwrap();
        let (_, w) = WeakAction::on_classifying(&a);
        assert!(check_weak_action(&w).is_empty());
    }

    #[test]
    fn perturbed_unit_cell_is_named() {
        let a = GammaGroupAction::trivial(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3));
        let (_, mut w) = WeakAction::on_classifying(&a);
        // perturb eta_comp(1, 0), which the left unit law pins to eta_id
        w.eta_comp[2] = NatIso { components: vec![1] };
        let violations = check_weak_action(&w);
        assert!(violations
            .iter()
            .any(|v| matches!(v, WeakActionViolation::UnitLeft { gamma: 1, .. })));
    }

    #[test]
    fn perturbed_composition_cell_breaks_associativity() {
        // over Z/4 the indicator cochain at (1,1) is not a 2-cocycle
        let a = GammaGroupAction::trivial(FiniteGroup::cyclic(4), FiniteGroup::cyclic(3));
        let (_, mut w) = WeakAction::on_classifying(&a);
        w.eta_comp[1 * 4 + 1] = NatIso { components: vec![1] };
        let violations = check_weak_action(&w);
        assert!(violations
            .iter()
            .any(|v| matches!(v, WeakActionViolation::Associativity { .. })));
    }

    #[test]
    fn central_two_cocycle_gives_a_weak_action() {
        // Gamma = Z/2 x Z/2 acting trivially on Z/2; the cup-product
        // 2-cocycle z((a,b),(c,d)) = b*c gives a genuinely weak action
        let v4 = FiniteGroup::klein_four();
        let a = GammaGroupAction::trivial(v4, FiniteGroup::cyclic(2));
        let z = |g: usize, h: usize| -> usize {
            let b = g % 2;
            let c = h / 2;
            (b * c) % 2
        };
        let w = central_twist_on_classifying(&a, &z).unwrap();
        assert!(check_weak_action(&w).is_empty());
        assert!(!w.is_strict());
    }

    #[test]
    fn non_cocycle_central_data_is_rejected() {
        let z4 = FiniteGroup::cyclic(4);
        let a = GammaGroupAction::trivial(z4, FiniteGroup::cyclic(2));
        let z = |g: usize, h: usize| -> usize { usize::from(g == 1 && h == 0) };
        assert!(central_twist_on_classifying(&a, &z).is_err());
    }

    #[test]
    fn gauge_twist_keeps_the_axioms_and_gives_a_map() {
        let a = GammaGroupAction::trivial(FiniteGroup::cyclic(2), FiniteGroup::cyclic(4));
        let (_, w) = WeakAction::on_classifying(&a);
        let v = vec![
            NatIso::identity(&w.functors[0]),
            NatIso { components: vec![2] },
        ];
        let (twisted, map) = gauge_twist(&w, &v).unwrap();
        assert!(check_weak_action(&twisted).is_empty());
        assert!(map.check().is_empty());
    }

    #[test]
    fn strict_map_between_classifying_actions() {
        // inclusion Z/2 -> Z/4 with gamma = Z/2 acting by inversion on both
        let a_small = GammaGroupAction::inversion(FiniteGroup::cyclic(2)).unwrap();
        let a_big = GammaGroupAction::inversion(FiniteGroup::cyclic(4)).unwrap();
        let (_, w_small) = WeakAction::on_classifying(&a_small);
        let (_, w_big) = WeakAction::on_classifying(&a_big);
        let alpha = GFunctor::new(
            w_small.base.clone(),
            w_big.base.clone(),
            vec![0],
            vec![0, 2],
        )
        .unwrap();
        let m = WeakEquivariantMap::strict(w_small, w_big, alpha).unwrap();
        assert!(m.check().is_empty());
    }

    #[test]
    fn equivariant_pair_action_is_strict_and_valid() {
        let z2 = FiniteGroup::cyclic(2);
        let z3 = FiniteGroup::cyclic(3);
        let ga = GammaGroupAction::inversion(z3.clone()).unwrap();
        let beta = SetAction::new(z2, 3, vec![vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
        let translation = SetAction::left_translation(z3);
        let pair = EquivariantPair::new(ga, beta, translation).unwrap();
        let (_, w) = WeakAction::on_action_groupoid(&pair);
        assert!(check_weak_action(&w).is_empty());
        assert!(w.is_strict());
    }
}
