//! Finite models of the adelic double quotients: a "rational" group HQ
//! embedded equivariantly in an "adelic" group HA, a level subgroup K,
//! and an auxiliary HQ-set Y. The module builds the three presentations
//! of the double quotient, compares the fixed-point groupoid of the big
//! quotient with the quotient of fixed data, and computes the two
//! cohomological obstructions that govern when the comparison is an
//! equivalence.

use std::collections::HashMap;

use crate::action::{EquivariantPair, GammaGroupAction, SetAction};
use crate::cohomology::{exact_sequence_check, h1, induced_h1_map, CosetSpace, ExactnessReport};
use crate::error::{Error, Limits, Result};
use crate::group::{FiniteGroup, GroupHom, Subgroup};
use crate::groupoid::{
    equivalence_check, iso_classes, ActionGroupoid, EquivalenceVerdict, GFunctor,
};
use crate::hfp::{homotopy_fixed_points, induced_hfp_functor, HfpGroupoid};
use crate::weak::{WeakAction, WeakEquivariantMap};

/// The toy datum: a gamma-equivariant embedding HQ -> HA, a gamma-stable
/// level K inside HA, and a finite HQ-set Y with a compatible gamma
/// action.
#[derive(Debug, Clone)]
pub struct ToyShimuraDatum {
    /// gamma acting on HQ
    pub hq_action: GammaGroupAction,
    /// gamma acting on HA
    pub ha_action: GammaGroupAction,
    /// the injective equivariant embedding HQ -> HA
    pub embed: GroupHom,
    /// HQ acting on Y
    pub y_hq: SetAction,
    /// gamma acting on Y
    pub y_gamma: SetAction,
    /// the level: a gamma-stable subgroup of HA
    pub k: Subgroup,
}

impl ToyShimuraDatum {
    pub fn new(
        hq_action: GammaGroupAction,
        ha_action: GammaGroupAction,
        embed: GroupHom,
        y_hq: SetAction,
        y_gamma: SetAction,
        k: Subgroup,
    ) -> Result<ToyShimuraDatum> {
        if hq_action.gamma != ha_action.gamma || y_gamma.group != hq_action.gamma {
            return Err(Error::MalformedInput("gamma must be shared".into()));
        }
        if embed.source != hq_action.module || embed.target != ha_action.module {
            return Err(Error::MalformedInput("embedding endpoints mismatch".into()));
        }
        if !embed.is_injective() {
            return Err(Error::MalformedInput("embedding must be injective".into()));
        }
        for g in 0..hq_action.gamma.order() {
            for h in 0..hq_action.module.order() {
                if embed.apply(hq_action.apply(g, h)) != ha_action.apply(g, embed.apply(h)) {
                    return Err(Error::MalformedInput(format!(
                        "embedding is not equivariant at (gamma={g}, h={h})"
                    )));
                }
            }
        }
        if y_hq.group != hq_action.module || y_hq.degree != y_gamma.degree {
            return Err(Error::MalformedInput("Y actions mismatch".into()));
        }
        for g in 0..hq_action.gamma.order() {
            for h in 0..hq_action.module.order() {
                for y in 0..y_hq.degree {
                    let lhs = y_gamma.apply(g, y_hq.apply(h, y));
                    let rhs = y_hq.apply(hq_action.apply(g, h), y_gamma.apply(g, y));
                    if lhs != rhs {
                        return Err(Error::MalformedInput(format!(
                            "Y compatibility fails at (gamma={g}, h={h}, y={y})"
                        )));
                    }
                }
            }
        }
        for g in 0..hq_action.gamma.order() {
            for &m in &k.elements {
                if !k.contains(ha_action.apply(g, m)) {
                    return Err(Error::NotStable { gamma: g });
                }
            }
        }
        Ok(ToyShimuraDatum { hq_action, ha_action, embed, y_hq, y_gamma, k })
    }

    pub fn gamma(&self) -> &FiniteGroup {
        &self.hq_action.gamma
    }

    /// The fixed datum: HQ^G, HA^G, Y^G and K^G with the trivial group
    /// acting, plus the element lists embedding each piece back into the
    /// original datum.
    pub fn fixed_datum(&self) -> Result<FixedDatum> {
        let gq = self.hq_action.fixed_subgroup();
        let ga = self.ha_action.fixed_subgroup();
        let x: Vec<usize> = self.y_gamma.fixed_points();
        let trivial = FiniteGroup::trivial();

        let embed_map: Vec<usize> = gq
            .elements
            .iter()
            .map(|&h| {
                ga.index_of(self.embed.apply(h))
                    .expect("image of a fixed element is fixed")
            })
            .collect();
        let embed = GroupHom::new(gq.group.clone(), ga.group.clone(), embed_map)?;

        let x_pos: HashMap<usize, usize> = x.iter().enumerate().map(|(i, &y)| (y, i)).collect();
        let y_hq_perms: Vec<Vec<usize>> = gq
            .elements
            .iter()
            .map(|&h| x.iter().map(|&y| x_pos[&self.y_hq.apply(h, y)]).collect())
            .collect();
        let y_hq = SetAction::new(gq.group.clone(), x.len(), y_hq_perms)?;
        let y_gamma = SetAction::trivial(trivial.clone(), x.len());

        let k_fixed: Vec<usize> = self
            .k
            .elements
            .iter()
            .copied()
            .filter(|&m| ga.contains(m))
            .collect();
        let k_sub_elems: Vec<usize> = k_fixed
            .iter()
            .map(|&m| ga.index_of(m).expect("filtered"))
            .collect();
        let k = ga.group.subgroup(&k_sub_elems);

        let datum = ToyShimuraDatum::new(
            GammaGroupAction::trivial(trivial.clone(), gq.group.clone()),
            GammaGroupAction::trivial(trivial, ga.group.clone()),
            embed,
            y_hq,
            y_gamma,
            k,
        )?;
        Ok(FixedDatum {
            datum,
            gq_elements: gq.elements,
            ga_elements: ga.elements,
            x_elements: x,
            k_gamma_elements: k_fixed,
        })
    }
}

/// The fixed datum with its embeddings back into the parent.
#[derive(Debug, Clone)]
pub struct FixedDatum {
    pub datum: ToyShimuraDatum,
    pub gq_elements: Vec<usize>,
    pub ga_elements: Vec<usize>,
    pub x_elements: Vec<usize>,
    pub k_gamma_elements: Vec<usize>,
}

/// The three presentations of the double quotient as action groupoids
/// with their strict gamma actions, and the two vertical comparison
/// functors out of the middle one.
pub struct Presentations {
    /// HA / K with its gamma action
    pub ha_cosets: CosetSpace,
    /// [HQ \ (Y x HA/K)]
    pub p1: ActionGroupoid,
    pub w1: WeakAction,
    /// [(HQ x K) \ (Y x HA)]
    pub p2: ActionGroupoid,
    pub w2: WeakAction,
    /// [(HQ \ (Y x HA)) / K]
    pub p3: ActionGroupoid,
    pub w3: WeakAction,
    /// orbit index of each point of Y x HA under HQ
    pub s3_orbit_of: Vec<usize>,
    pub v1: WeakEquivariantMap,
    pub v2: WeakEquivariantMap,
    pub v1_verdict: EquivalenceVerdict,
    pub v2_verdict: EquivalenceVerdict,
    n_ha: usize,
    n_cosets: usize,
}

impl Presentations {
    /// carrier index of (y, coset) in Y x HA/K
    pub fn s1_index(&self, y: usize, coset: usize) -> usize {
        y * self.n_cosets + coset
    }

    /// carrier index of (y, g) in Y x HA
    pub fn t_index(&self, y: usize, g: usize) -> usize {
        y * self.n_ha + g
    }

    pub fn both_vertical_equivalences(&self) -> bool {
        self.v1_verdict.is_equivalence() && self.v2_verdict.is_equivalence()
    }
}

/// Builds the three presentations and checks that both vertical functors
/// are equivalences.
pub fn double_quotient_presentations(
    d: &ToyShimuraDatum,
    limits: &Limits,
) -> Result<Presentations> {
    let gamma = d.gamma().clone();
    let hq = &d.hq_action.module;
    let ha = &d.ha_action.module;
    let n_y = d.y_hq.degree;
    let n_ha = ha.order();
    limits.check_carrier("double quotient carrier", n_y * n_ha)?;
    // the middle presentation stores |HQ x K|^2 entries per carrier point
    let hqk_order = (hq.order() * d.k.group.order()) as u64;
    limits.check_candidates(
        "middle presentation composition table",
        hqk_order
            .saturating_mul(hqk_order)
            .saturating_mul((n_y * n_ha) as u64),
    )?;

    let ha_cosets = CosetSpace::new(&d.ha_action, &d.k)?;
    let n_cosets = ha_cosets.len();

    // P1: HQ acting on Y x HA/K
    let s1_of = |y: usize, c: usize| y * n_cosets + c;
    let p1_perms: Vec<Vec<usize>> = (0..hq.order())
        .map(|h| {
            let eh = d.embed.apply(h);
            (0..n_y * n_cosets)
                .map(|s| {
                    let (y, c) = (s / n_cosets, s % n_cosets);
                    s1_of(
                        d.y_hq.apply(h, y),
                        ha_cosets.coset_of[ha.mul(eh, ha_cosets.reps[c])],
                    )
                })
                .collect()
        })
        .collect();
    let p1_module = SetAction::new(hq.clone(), n_y * n_cosets, p1_perms)?;
    let p1_gamma_perms: Vec<Vec<usize>> = (0..gamma.order())
        .map(|g| {
            (0..n_y * n_cosets)
                .map(|s| {
                    let (y, c) = (s / n_cosets, s % n_cosets);
                    s1_of(d.y_gamma.apply(g, y), ha_cosets.gamma_perm[g][c])
                })
                .collect()
        })
        .collect();
    let p1_gamma = SetAction::new(gamma.clone(), n_y * n_cosets, p1_gamma_perms)?;
    let p1_pair = EquivariantPair::new(d.hq_action.clone(), p1_gamma, p1_module)?;
    let (p1, w1) = WeakAction::on_action_groupoid(&p1_pair);

    // P2: HQ x K acting on Y x HA by (h, k) . (y, g) = (hy, h g k^{-1})
    let k_group = &d.k.group;
    let hqk = hq.direct_product(k_group);
    let t_of = |y: usize, g: usize| y * n_ha + g;
    let p2_perms: Vec<Vec<usize>> = (0..hqk.order())
        .map(|hk| {
            let h = hk / k_group.order();
            let kk = hk % k_group.order();
            let eh = d.embed.apply(h);
            let ek_inv = ha.inv(d.k.embed(kk));
            (0..n_y * n_ha)
                .map(|t| {
                    let (y, g) = (t / n_ha, t % n_ha);
                    t_of(d.y_hq.apply(h, y), ha.mul(ha.mul(eh, g), ek_inv))
                })
                .collect()
        })
        .collect();
    let p2_module = SetAction::new(hqk.clone(), n_y * n_ha, p2_perms)?;
    let hqk_act: Vec<Vec<usize>> = (0..gamma.order())
        .map(|g| {
            (0..hqk.order())
                .map(|hk| {
                    let h = hk / k_group.order();
                    let kk = hk % k_group.order();
                    let h2 = d.hq_action.apply(g, h);
                    let k2 = d
                        .k
                        .index_of(d.ha_action.apply(g, d.k.embed(kk)))
                        .expect("K is stable");
                    h2 * k_group.order() + k2
                })
                .collect()
        })
        .collect();
    let hqk_action = GammaGroupAction::new(gamma.clone(), hqk, hqk_act)?;
    let p2_gamma_perms: Vec<Vec<usize>> = (0..gamma.order())
        .map(|g| {
            (0..n_y * n_ha)
                .map(|t| {
                    let (y, gg) = (t / n_ha, t % n_ha);
                    t_of(d.y_gamma.apply(g, y), d.ha_action.apply(g, gg))
                })
                .collect()
        })
        .collect();
    let p2_gamma = SetAction::new(gamma.clone(), n_y * n_ha, p2_gamma_perms)?;
    let p2_pair = EquivariantPair::new(hqk_action, p2_gamma, p2_module)?;
    let (p2, w2) = WeakAction::on_action_groupoid(&p2_pair);

    // P3: K acting on the HQ-orbits of Y x HA by right translation
    let mut s3_orbit_of = vec![usize::MAX; n_y * n_ha];
    let mut orbit_count = 0;
    for t in 0..n_y * n_ha {
        if s3_orbit_of[t] != usize::MAX {
            continue;
        }
        let oi = orbit_count;
        orbit_count += 1;
        let mut stack = vec![t];
        s3_orbit_of[t] = oi;
        while let Some(u) = stack.pop() {
            let (y, g) = (u / n_ha, u % n_ha);
            for h in 0..hq.order() {
                let v = t_of(d.y_hq.apply(h, y), ha.mul(d.embed.apply(h), g));
                if s3_orbit_of[v] == usize::MAX {
                    s3_orbit_of[v] = oi;
                    stack.push(v);
                }
            }
        }
    }
    let mut orbit_rep = vec![usize::MAX; orbit_count];
    for t in (0..n_y * n_ha).rev() {
        orbit_rep[s3_orbit_of[t]] = t;
    }
    let p3_perms: Vec<Vec<usize>> = (0..k_group.order())
        .map(|kk| {
            let ek_inv = ha.inv(d.k.embed(kk));
            orbit_rep
                .iter()
                .map(|&t| {
                    let (y, g) = (t / n_ha, t % n_ha);
                    s3_orbit_of[t_of(y, ha.mul(g, ek_inv))]
                })
                .collect()
        })
        .collect();
    let p3_module = SetAction::new(k_group.clone(), orbit_count, p3_perms)?;
    let k_gamma_action = d.ha_action.restrict_module(&d.k)?;
    let p3_gamma_perms: Vec<Vec<usize>> = (0..gamma.order())
        .map(|g| {
            orbit_rep
                .iter()
                .map(|&t| {
                    let (y, gg) = (t / n_ha, t % n_ha);
                    s3_orbit_of[t_of(d.y_gamma.apply(g, y), d.ha_action.apply(g, gg))]
                })
                .collect()
        })
        .collect();
    let p3_gamma = SetAction::new(gamma.clone(), orbit_count, p3_gamma_perms)?;
    let p3_pair = EquivariantPair::new(k_gamma_action, p3_gamma, p3_module)?;
    let (p3, w3) = WeakAction::on_action_groupoid(&p3_pair);

    // vertical functor P2 -> P1: forget the K-coordinate
    let v1_obj: Vec<usize> = (0..n_y * n_ha)
        .map(|t| {
            let (y, g) = (t / n_ha, t % n_ha);
            s1_of(y, ha_cosets.coset_of[g])
        })
        .collect();
    let v1_mor: Vec<usize> = p2
        .labels
        .iter()
        .map(|&(hk, t)| {
            let h = hk / k_group.order();
            p1.morphism(h, v1_obj[t])
        })
        .collect();
    let v1_functor = GFunctor::new(p2.groupoid.clone(), p1.groupoid.clone(), v1_obj, v1_mor)?;
    let v1 = WeakEquivariantMap::strict(w2.clone(), w1.clone(), v1_functor)?;
    let v1_verdict = equivalence_check(&v1.alpha);

    // vertical functor P2 -> P3: forget the HQ-coordinate
    let v2_obj: Vec<usize> = (0..n_y * n_ha).map(|t| s3_orbit_of[t]).collect();
    let v2_mor: Vec<usize> = p2
        .labels
        .iter()
        .map(|&(hk, t)| {
            let kk = hk % k_group.order();
            p3.morphism(kk, v2_obj[t])
        })
        .collect();
    let v2_functor = GFunctor::new(p2.groupoid.clone(), p3.groupoid.clone(), v2_obj, v2_mor)?;
    let v2 = WeakEquivariantMap::strict(w2.clone(), w3.clone(), v2_functor)?;
    let v2_verdict = equivalence_check(&v2.alpha);

    Ok(Presentations {
        ha_cosets,
        p1,
        w1,
        p2,
        w2,
        p3,
        w3,
        s3_orbit_of,
        v1,
        v2,
        v1_verdict,
        v2_verdict,
        n_ha,
        n_cosets,
    })
}

/// Report of the fixed-point comparison for a toy datum.
#[derive(Debug)]
pub struct ComparisonReport {
    /// verdict of [GQ \ (X x GA/K^G)] -> [HQ \ (Y x HA/K)]^{hG}
    pub comparison: EquivalenceVerdict,
    /// verdict of the route through the third presentation
    pub alternate: EquivalenceVerdict,
    /// the two routes agree (strict functor equality through P2)
    pub routes_agree: bool,
    pub presentations_ok: bool,
    pub h1_k_classes: usize,
    pub h1_k_trivial: bool,
    /// classes of H^1(G, HQ) killed in H^1(G, HA)
    pub kernel_obstruction: Vec<usize>,
    pub kernel_trivial: bool,
    /// induced functors between fixed points of the presentations are
    /// equivalences
    pub induced_equivalences_ok: bool,
}

impl ComparisonReport {
    pub fn both_obstructions_vanish(&self) -> bool {
        self.h1_k_trivial && self.kernel_trivial
    }

    /// The theorem direction: vanishing obstructions force an equivalence.
    /// The structural facts (presentations, route agreement, induced
    /// equivalences) must hold in every case.
    pub fn theorems_hold(&self) -> bool {
        self.presentations_ok
            && self.routes_agree
            && self.induced_equivalences_ok
            && (!self.both_obstructions_vanish() || self.comparison.is_equivalence())
            && (self.comparison.is_equivalence() == self.alternate.is_equivalence())
    }
}

/// An identity-family direct functor from an action groupoid of fixed data
/// into the fixed points of a bigger action groupoid.
fn direct_functor_into_hfp(
    small: &ActionGroupoid,
    hfp: &HfpGroupoid,
    big: &ActionGroupoid,
    gamma_order: usize,
    obj_map_base: impl Fn(usize) -> usize,
    mor_label_base: impl Fn(usize, usize) -> usize,
) -> Result<GFunctor> {
    let mut obj_map = Vec::with_capacity(small.groupoid.n_objects());
    for o in 0..small.groupoid.n_objects() {
        let base_obj = obj_map_base(o);
        let tau = vec![big.morphism(0, base_obj); gamma_order];
        let image = hfp.object_index(base_obj, &tau).ok_or_else(|| {
            Error::MalformedInput("fixed object does not give a fixed point".into())
        })?;
        obj_map.push(image);
    }
    let mut mor_map = Vec::with_capacity(small.labels.len());
    for m in small.groupoid.morphisms() {
        let (g, o) = small.labels[m];
        let base_mor = mor_label_base(g, o);
        let image = hfp
            .morphism_index(obj_map[o], base_mor)
            .ok_or_else(|| Error::MalformedInput("fixed morphism missing upstairs".into()))?;
        mor_map.push(image);
    }
    GFunctor::new(small.groupoid.clone(), hfp.groupoid.clone(), obj_map, mor_map)
}

/// Builds the comparison [GQ \ (X x GA/K^G)] -> [HQ \ (Y x HA/K)]^{hG}
/// both directly and through the swapped presentation, computes the two
/// obstructions independently, and reports the verdicts.
pub fn fixed_point_comparison(d: &ToyShimuraDatum, limits: &Limits) -> Result<ComparisonReport> {
    let pres_h = double_quotient_presentations(d, limits)?;
    let fixed = d.fixed_datum()?;
    let pres_g = double_quotient_presentations(&fixed.datum, limits)?;

    let hfp1 = homotopy_fixed_points(&pres_h.w1, limits)?;
    let hfp2 = homotopy_fixed_points(&pres_h.w2, limits)?;
    let hfp3 = homotopy_fixed_points(&pres_h.w3, limits)?;
    let v1_h = induced_hfp_functor(&pres_h.v1, &hfp2, &hfp1)?;
    let v2_h = induced_hfp_functor(&pres_h.v2, &hfp2, &hfp3)?;
    let induced_equivalences_ok =
        equivalence_check(&v1_h).is_equivalence() && equivalence_check(&v2_h).is_equivalence();

    let gamma_order = d.gamma().order();
    let k_ord = d.k.group.order();
    let k_g_ord = fixed.datum.k.group.order();
    let n_ga = fixed.ga_elements.len().max(1);

    // the direct comparison on the first presentation
    let nc_g = pres_g.ha_cosets.len();
    let to_s1 = |o: usize| -> usize {
        let (xi, ci) = (o / nc_g, o % nc_g);
        let y = fixed.x_elements[xi];
        let rep_small = pres_g.ha_cosets.reps[ci];
        let g_big = fixed.ga_elements[rep_small];
        pres_h.s1_index(y, pres_h.ha_cosets.coset_of[g_big])
    };
    let direct = direct_functor_into_hfp(
        &pres_g.p1,
        &hfp1,
        &pres_h.p1,
        gamma_order,
        to_s1,
        |g_sub, o| pres_h.p1.morphism(fixed.gq_elements[g_sub], to_s1(o)),
    )?;
    let comparison = equivalence_check(&direct);

    // the middle comparison on the second presentation
    let to_t = |o: usize| -> usize {
        let (xi, gi) = (o / n_ga, o % n_ga);
        pres_h.t_index(fixed.x_elements[xi], fixed.ga_elements[gi])
    };
    let middle = direct_functor_into_hfp(
        &pres_g.p2,
        &hfp2,
        &pres_h.p2,
        gamma_order,
        to_t,
        |hk_sub, o| {
            let h = fixed.gq_elements[hk_sub / k_g_ord];
            let kk = fixed.k_gamma_elements[hk_sub % k_g_ord];
            let hk_big = h * k_ord + d.k.index_of(kk).expect("fixed level element");
            pres_h.p2.morphism(hk_big, to_t(o))
        },
    )?;

    // the alternate comparison on the third presentation
    let to_s3 = |o: usize| -> usize {
        let t_small = pres_g
            .s3_orbit_of
            .iter()
            .position(|&orb| orb == o)
            .expect("orbit has a point");
        let (xi, gi) = (t_small / n_ga, t_small % n_ga);
        pres_h.s3_orbit_of[pres_h.t_index(fixed.x_elements[xi], fixed.ga_elements[gi])]
    };
    let alternate_functor = direct_functor_into_hfp(
        &pres_g.p3,
        &hfp3,
        &pres_h.p3,
        gamma_order,
        to_s3,
        |k_sub, o| {
            let kk = fixed.k_gamma_elements[k_sub];
            pres_h
                .p3
                .morphism(d.k.index_of(kk).expect("fixed level element"), to_s3(o))
        },
    )?;
    let alternate = equivalence_check(&alternate_functor);

    // route agreement through the middle presentation
    let left_route = pres_g.v1.alpha.compose(&direct);
    let right_route = middle.compose(&v1_h);
    let left_route_3 = pres_g.v2.alpha.compose(&alternate_functor);
    let right_route_3 = middle.compose(&v2_h);
    let routes_agree = left_route == right_route && left_route_3 == right_route_3;

    // obstruction (a): H^1(Gamma, K)
    let k_action = d.ha_action.restrict_module(&d.k)?;
    let h1_k = h1(&k_action, limits)?;
    // obstruction (b): classes of H^1(Gamma, HQ) dying in H^1(Gamma, HA)
    let h1_hq = h1(&d.hq_action, limits)?;
    let h1_ha = h1(&d.ha_action, limits)?;
    let loc = induced_h1_map(&d.embed, &h1_hq, &h1_ha)?;
    let kernel_obstruction = loc.kernel();
    let kernel_trivial = kernel_obstruction == vec![h1_hq.basepoint];

    Ok(ComparisonReport {
        comparison,
        alternate,
        routes_agree,
        presentations_ok: pres_h.both_vertical_equivalences()
            && pres_g.both_vertical_equivalences(),
        h1_k_classes: h1_k.class_count(),
        h1_k_trivial: h1_k.is_trivial(),
        kernel_obstruction,
        kernel_trivial,
        induced_equivalences_ok,
    })
}

/// Report of the abelian ("torus") sequence analysis for a datum with Y a
/// point.
#[derive(Debug)]
pub struct TorusReport {
    /// exactness of 1 -> K^G -> HA^G -> (HA/K)^G -> H1(K) -> H1(HA)
    pub sequence_level: ExactnessReport,
    /// the same sequence for the image of HQ inside HA/K
    pub sequence_quotient: ExactnessReport,
    /// the natural map GQ \ GA / K^G -> (HQ \ HA / K)^G
    pub phi_bijective: bool,
    pub h1_k_trivial: bool,
    pub kernel_trivial: bool,
    /// HQ meets K trivially (the finite stand-in for neatness)
    pub neat: bool,
    /// when H1(K) is trivial and the intersection is trivial, the map is
    /// a bijection exactly when the kernel obstruction vanishes
    pub conditional_iff_holds: bool,
}

impl TorusReport {
    pub fn all_pass(&self) -> bool {
        self.sequence_level.all_pass()
            && self.sequence_quotient.all_pass()
            && self.conditional_iff_holds
    }
}

/// The abelian sequence analysis: checks pointed-set exactness of the
/// fixed-point sequences and identifies the bijectivity obstruction of
/// the double-quotient comparison with the kernel of localization.
pub fn torus_sequence_report(d: &ToyShimuraDatum, limits: &Limits) -> Result<TorusReport> {
    if !d.hq_action.module.is_abelian() {
        return Err(Error::NotAbelian("HQ".into()));
    }
    if !d.ha_action.module.is_abelian() {
        return Err(Error::NotAbelian("HA".into()));
    }
    if d.y_hq.degree != 1 {
        return Err(Error::MalformedInput("torus analysis needs Y a point".into()));
    }
    let ha = &d.ha_action.module;

    let sequence_level = exact_sequence_check(&d.ha_action, &d.k, limits)?;

    // S = HA/K as a group with its gamma action
    let (s_group, proj) = ha.quotient(&d.k)?;
    let s_act: Vec<Vec<usize>> = (0..d.gamma().order())
        .map(|g| {
            let mut map = vec![0usize; s_group.order()];
            for a in 0..ha.order() {
                map[proj.apply(a)] = proj.apply(d.ha_action.apply(g, a));
            }
            map
        })
        .collect();
    let s_action = GammaGroupAction::new(d.gamma().clone(), s_group.clone(), s_act)?;
    let hq_image: Vec<usize> = (0..d.hq_action.module.order())
        .map(|h| proj.apply(d.embed.apply(h)))
        .collect();
    let hq_bar = s_group.subgroup(&hq_image);
    let sequence_quotient = exact_sequence_check(&s_action, &hq_bar, limits)?;

    // phi: GQ \ GA / K^G -> (HQ \ HA / K)^G computed directly
    let ga = d.ha_action.fixed_subgroup();
    let gq = d.hq_action.fixed_subgroup();
    let k_fixed: Vec<usize> = d
        .k
        .elements
        .iter()
        .copied()
        .filter(|&m| ga.contains(m))
        .collect();
    let mut fixed_class = vec![usize::MAX; ha.order()];
    let mut fixed_classes = 0usize;
    for &g0 in &ga.elements {
        if fixed_class[g0] != usize::MAX {
            continue;
        }
        let c = fixed_classes;
        fixed_classes += 1;
        let mut stack = vec![g0];
        fixed_class[g0] = c;
        while let Some(g) = stack.pop() {
            for &q in &gq.elements {
                for &kk in &k_fixed {
                    let g2 = ha.mul(ha.mul(d.embed.apply(q), g), kk);
                    if fixed_class[g2] == usize::MAX {
                        fixed_class[g2] = c;
                        stack.push(g2);
                    }
                }
            }
        }
    }
    let mut double_coset = vec![usize::MAX; ha.order()];
    let mut n_double = 0usize;
    for g0 in 0..ha.order() {
        if double_coset[g0] != usize::MAX {
            continue;
        }
        let c = n_double;
        n_double += 1;
        let mut stack = vec![g0];
        double_coset[g0] = c;
        while let Some(g) = stack.pop() {
            for q in 0..d.hq_action.module.order() {
                for &kk in &d.k.elements {
                    let g2 = ha.mul(ha.mul(d.embed.apply(q), g), kk);
                    if double_coset[g2] == usize::MAX {
                        double_coset[g2] = c;
                        stack.push(g2);
                    }
                }
            }
        }
    }
    let gamma_fixed_double: Vec<usize> = (0..n_double)
        .filter(|&c| {
            (0..ha.order()).filter(|&g| double_coset[g] == c).all(|g| {
                (0..d.gamma().order()).all(|gam| double_coset[d.ha_action.apply(gam, g)] == c)
            })
        })
        .collect();
    let mut image_of = vec![usize::MAX; fixed_classes];
    for &g in &ga.elements {
        image_of[fixed_class[g]] = double_coset[g];
    }
    let mut seen = vec![false; n_double];
    let mut injective = true;
    for &img in image_of.iter() {
        if std::mem::replace(&mut seen[img], true) {
            injective = false;
        }
    }
    let surjective = gamma_fixed_double.iter().all(|&c| seen[c]);
    let phi_bijective = injective && surjective;

    let k_action = d.ha_action.restrict_module(&d.k)?;
    let h1_k_trivial = h1(&k_action, limits)?.is_trivial();
    let h1_hq = h1(&d.hq_action, limits)?;
    let h1_ha = h1(&d.ha_action, limits)?;
    let loc = induced_h1_map(&d.embed, &h1_hq, &h1_ha)?;
    let kernel_trivial = loc.has_trivial_kernel();

    let neat = (1..d.hq_action.module.order()).all(|h| !d.k.contains(d.embed.apply(h)));
    let conditional_iff_holds = !(h1_k_trivial && neat) || (phi_bijective == kernel_trivial);

    Ok(TorusReport {
        sequence_level,
        sequence_quotient,
        phi_bijective,
        h1_k_trivial,
        kernel_trivial,
        neat,
        conditional_iff_holds,
    })
}

/// Report of the discreteness check.
#[derive(Debug)]
pub struct DiscreteReport {
    pub free: bool,
    pub both_obstructions_vanish: bool,
    pub max_automorphism_order: usize,
    /// all automorphism groups in the fixed-point groupoid are trivial
    pub discrete: bool,
}

/// When HQ x K acts freely on Y x HA and both obstructions vanish, every
/// automorphism group in the fixed points of the double quotient is
/// trivial. `require_free` makes a non-free action a typed error.
pub fn discrete_groupoid_check(
    d: &ToyShimuraDatum,
    require_free: bool,
    limits: &Limits,
) -> Result<DiscreteReport> {
    let pres = double_quotient_presentations(d, limits)?;
    let ha = &d.ha_action.module;
    let n_ha = ha.order();
    let mut free = true;
    'outer: for t in 0..d.y_hq.degree * n_ha {
        let (y, g) = (t / n_ha, t % n_ha);
        for h in 0..d.hq_action.module.order() {
            for kk in 0..d.k.group.order() {
                if h == 0 && kk == 0 {
                    continue;
                }
                let moved = (
                    d.y_hq.apply(h, y),
                    ha.mul(ha.mul(d.embed.apply(h), g), ha.inv(d.k.embed(kk))),
                );
                if moved == (y, g) {
                    free = false;
                    break 'outer;
                }
            }
        }
    }
    if require_free && !free {
        return Err(Error::NotFree("HQ x K does not act freely on Y x HA".into()));
    }
    let report = fixed_point_comparison(d, limits)?;
    let hfp1 = homotopy_fixed_points(&pres.w1, limits)?;
    let classes = iso_classes(&hfp1.groupoid);
    let max_automorphism_order = classes
        .automorphism_groups
        .iter()
        .map(|g| g.order())
        .max()
        .unwrap_or(1);
    Ok(DiscreteReport {
        free,
        both_obstructions_vanish: report.both_obstructions_vanish(),
        max_automorphism_order,
        discrete: max_automorphism_order == 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    /// HQ = HA = K = Z/2 with trivial Z/2 action and Y a point.
    fn obstructed_datum() -> ToyShimuraDatum {
        let z2 = FiniteGroup::cyclic(2);
        let g = FiniteGroup::cyclic(2);
        let k = g.subgroup(&[1]);
        ToyShimuraDatum::new(
            GammaGroupAction::trivial(z2.clone(), g.clone()),
            GammaGroupAction::trivial(z2.clone(), g.clone()),
            GroupHom::identity(&g),
            SetAction::point(g),
            SetAction::point(z2),
            k,
        )
        .unwrap()
    }

    /// HA = Map(Z/2, Z/3) with the swap action, K = HA, HQ = Z/3 diagonal.
    fn coinduced_datum() -> ToyShimuraDatum {
        let z2 = FiniteGroup::cyclic(2);
        let z3 = FiniteGroup::cyclic(3);
        let v9 = z3.direct_product(&z3);
        let swap: Vec<usize> = (0..9).map(|x| (x % 3) * 3 + x / 3).collect();
        let ha_action =
            GammaGroupAction::from_generator_images(z2.clone(), v9.clone(), &[1], &[swap])
                .unwrap();
        let diag: Vec<usize> = (0..3).map(|x| x * 3 + x).collect();
        let embed = GroupHom::new(z3.clone(), v9.clone(), diag).unwrap();
        let k = v9.subgroup(&[1, 3]);
        ToyShimuraDatum::new(
            GammaGroupAction::trivial(z2.clone(), z3.clone()),
            ha_action,
            embed,
            SetAction::point(z3),
            SetAction::point(z2),
            k,
        )
        .unwrap()
    }

    #[test]
    fn presentations_are_equivalences_for_the_counterexample() {
        let d = obstructed_datum();
        let pres = double_quotient_presentations(&d, &lim()).unwrap();
        assert!(pres.both_vertical_equivalences());
    }

    #[test]
    fn k_trivial_makes_middle_and_outer_presentations_coincide() {
        let z2 = FiniteGroup::cyclic(2);
        let z4 = FiniteGroup::cyclic(4);
        let d = ToyShimuraDatum::new(
            GammaGroupAction::inversion(z4.clone()).unwrap(),
            GammaGroupAction::inversion(z4.clone()).unwrap(),
            GroupHom::identity(&z4),
            SetAction::point(z4.clone()),
            SetAction::point(z2),
            z4.subgroup(&[]),
        )
        .unwrap();
        let pres = double_quotient_presentations(&d, &lim()).unwrap();
        assert!(pres.both_vertical_equivalences());
        assert_eq!(pres.p1.groupoid.n_objects(), pres.p2.groupoid.n_objects());
    }

    #[test]
    fn hq_trivial_reduces_all_presentations_to_the_level_quotient() {
        let z2 = FiniteGroup::cyclic(2);
        let z4 = FiniteGroup::cyclic(4);
        let triv = FiniteGroup::trivial();
        let d = ToyShimuraDatum::new(
            GammaGroupAction::trivial(z2.clone(), triv.clone()),
            GammaGroupAction::inversion(z4.clone()).unwrap(),
            GroupHom::new(triv.clone(), z4.clone(), vec![0]).unwrap(),
            SetAction::point(triv),
            SetAction::point(z2),
            z4.subgroup(&[2]),
        )
        .unwrap();
        let pres = double_quotient_presentations(&d, &lim()).unwrap();
        assert!(pres.both_vertical_equivalences());
        assert_eq!(pres.p3.groupoid.n_objects(), 4);
    }

    #[test]
    fn obstructed_counterexample_fails_essential_surjectivity() {
        let d = obstructed_datum();
        let report = fixed_point_comparison(&d, &lim()).unwrap();
        assert!(!report.h1_k_trivial);
        assert_eq!(report.h1_k_classes, 2);
        assert!(report.kernel_trivial);
        assert!(report.comparison.fully_faithful);
        assert!(!report.comparison.essentially_surjective);
        assert!(report.theorems_hold(), "{report:?}");
    }

    #[test]
    fn trivial_gamma_comparison_is_always_an_equivalence() {
        let triv = FiniteGroup::trivial();
        let s3 = FiniteGroup::symmetric(3);
        let transposition = s3.elements().find(|&g| s3.element_order(g) == 2).unwrap();
        let k = s3.subgroup(&[transposition]);
        let d = ToyShimuraDatum::new(
            GammaGroupAction::trivial(triv.clone(), s3.clone()),
            GammaGroupAction::trivial(triv.clone(), s3.clone()),
            GroupHom::identity(&s3),
            SetAction::left_translation(s3.clone()),
            SetAction::trivial(triv, 6),
            k,
        )
        .unwrap();
        let report = fixed_point_comparison(&d, &lim()).unwrap();
        assert!(report.both_obstructions_vanish());
        assert!(report.comparison.is_equivalence());
        assert!(report.theorems_hold(), "{report:?}");
    }

    #[test]
    fn coinduced_datum_has_vanishing_obstructions_and_equivalence() {
        let d = coinduced_datum();
        let report = fixed_point_comparison(&d, &lim()).unwrap();
        assert!(report.h1_k_trivial);
        assert!(report.kernel_trivial);
        assert!(report.comparison.is_equivalence(), "{report:?}");
        assert!(report.theorems_hold(), "{report:?}");
    }

    #[test]
    fn torus_sequence_on_the_z4_datum() {
        let z4 = FiniteGroup::cyclic(4);
        let z2 = FiniteGroup::cyclic(2);
        let d = ToyShimuraDatum::new(
            GammaGroupAction::inversion(z4.clone()).unwrap(),
            GammaGroupAction::inversion(z4.clone()).unwrap(),
            GroupHom::identity(&z4),
            SetAction::point(z4.clone()),
            SetAction::point(z2),
            z4.subgroup(&[2]),
        )
        .unwrap();
        let report = torus_sequence_report(&d, &lim()).unwrap();
        assert!(report.sequence_level.all_pass());
        assert!(report.sequence_quotient.all_pass());
        assert_eq!(report.sequence_level.delta_image_size, 2);
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn torus_sequence_degenerate_k_equals_ha() {
        let z4 = FiniteGroup::cyclic(4);
        let z2 = FiniteGroup::cyclic(2);
        let d = ToyShimuraDatum::new(
            GammaGroupAction::inversion(z4.clone()).unwrap(),
            GammaGroupAction::inversion(z4.clone()).unwrap(),
            GroupHom::identity(&z4),
            SetAction::point(z4.clone()),
            SetAction::point(z2),
            z4.subgroup(&[1]),
        )
        .unwrap();
        let report = torus_sequence_report(&d, &lim()).unwrap();
        assert!(report.sequence_level.all_pass());
        assert!(report.phi_bijective);
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn torus_report_rejects_nonabelian_input() {
        let triv = FiniteGroup::trivial();
        let s3 = FiniteGroup::symmetric(3);
        let d = ToyShimuraDatum::new(
            GammaGroupAction::trivial(triv.clone(), s3.clone()),
            GammaGroupAction::trivial(triv.clone(), s3.clone()),
            GroupHom::identity(&s3),
            SetAction::point(s3.clone()),
            SetAction::point(triv),
            s3.subgroup(&[]),
        )
        .unwrap();
        assert!(matches!(torus_sequence_report(&d, &lim()), Err(Error::NotAbelian(_))));
    }

    #[test]
    fn coinduced_torus_datum_is_bijective() {
        let d = coinduced_datum();
        let report = torus_sequence_report(&d, &lim()).unwrap();
        assert!(report.h1_k_trivial);
        assert!(report.kernel_trivial);
        assert!(report.phi_bijective);
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn free_datum_with_vanishing_obstructions_is_discrete() {
        // HQ trivial, K acting freely by right translation
        let z2 = FiniteGroup::cyclic(2);
        let z3 = FiniteGroup::cyclic(3);
        let triv = FiniteGroup::trivial();
        let d = ToyShimuraDatum::new(
            GammaGroupAction::trivial(z2.clone(), triv.clone()),
            GammaGroupAction::inversion(z3.clone()).unwrap(),
            GroupHom::new(triv.clone(), z3.clone(), vec![0]).unwrap(),
            SetAction::point(triv),
            SetAction::point(z2),
            z3.subgroup(&[1]),
        )
        .unwrap();
        let report = discrete_groupoid_check(&d, true, &lim()).unwrap();
        assert!(report.free);
        assert!(report.both_obstructions_vanish);
        assert!(report.discrete, "{report:?}");
    }

    #[test]
    fn non_free_datum_is_refused_when_flagged() {
        let d = obstructed_datum();
        assert!(matches!(
            discrete_groupoid_check(&d, true, &lim()),
            Err(Error::NotFree(_))
        ));
        let report = discrete_groupoid_check(&d, false, &lim()).unwrap();
        assert!(!report.free);
    }
}
