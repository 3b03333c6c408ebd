//! Homotopy fixed points of weak actions on finite groupoids, the induced
//! functors of weak equivariant maps, fiber products of weak actions, and
//! the classifying/quotient fixed-point comparisons.
//!
//! An object of the fixed-point groupoid is a base object together with a
//! coherent family tau of isomorphisms to all its translates; a morphism
//! is a base morphism commuting with the two families. Everything is
//! enumerated and the defining squares are verified at every pair.

use std::collections::HashMap;
use std::sync::Arc;

use crate::action::{EquivariantPair, GammaGroupAction, SetAction};
use crate::cohomology::{enumerate_cocycles, h1, EnumMode, H1Set};
use crate::error::{Error, Limits, Result};
use crate::groupoid::{
    equivalence_check, two_fiber_product, ActionGroupoid, EquivalenceVerdict,
    FiberProductGroupoid, FiniteGroupoid, GFunctor, NatIso,
};
use crate::weak::{check_weak_action, WeakAction, WeakEquivariantMap};

/// How to enumerate the tau families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HfpMode {
    /// Enumerate tau on a minimal generating set of gamma and complete
    /// the family through the coherence square before verifying all pairs.
    #[default]
    GeneratorConstrained,
    /// Enumerate tau on every nonidentity group element directly.
    Full,
}

/// The groupoid of homotopy fixed points, with bookkeeping back to the
/// base groupoid.
#[derive(Debug, Clone)]
pub struct HfpGroupoid {
    pub groupoid: Arc<FiniteGroupoid>,
    pub action: WeakAction,
    /// object id -> (base object, tau: per-gamma base morphism)
    pub objects: Vec<(usize, Vec<usize>)>,
    /// morphism id -> underlying base morphism
    pub mor_base: Vec<usize>,
    obj_index: HashMap<(usize, Vec<usize>), usize>,
    mor_index: HashMap<(usize, usize), usize>,
}

impl HfpGroupoid {
    pub fn object_index(&self, base_object: usize, tau: &[usize]) -> Option<usize> {
        self.obj_index.get(&(base_object, tau.to_vec())).copied()
    }

    /// Morphism id from its source hfp object and underlying base morphism.
    pub fn morphism_index(&self, source: usize, base_mor: usize) -> Option<usize> {
        self.mor_index.get(&(source, base_mor)).copied()
    }

    /// The forgetful functor to the base groupoid.
    pub fn forgetful(&self) -> GFunctor {
        GFunctor::new(
            self.groupoid.clone(),
            self.action.base.clone(),
            self.objects.iter().map(|&(x, _)| x).collect(),
            self.mor_base.clone(),
        )
        .expect("forgetful map is a functor")
    }
}

/// Whether tau satisfies the coherence square at every pair:
/// tau(g'*g) then eta(g, g')(x) = tau(g') then F(g')(tau(g)).
fn tau_coherent(w: &WeakAction, x: usize, tau: &[usize]) -> bool {
    let base = &w.base;
    let n = w.gamma.order();
    for g in 0..n {
        for gp in 0..n {
            let lhs = base.then(tau[w.gamma.mul(gp, g)], w.eta_comp(g, gp).at(x));
            let rhs = base.then(tau[gp], w.functors[gp].on_mor(tau[g]));
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Enumerates the homotopy fixed points of a weak action.
pub fn homotopy_fixed_points(w: &WeakAction, limits: &Limits) -> Result<HfpGroupoid> {
    homotopy_fixed_points_with_mode(w, HfpMode::default(), limits)
}

pub fn homotopy_fixed_points_with_mode(
    w: &WeakAction,
    mode: HfpMode,
    limits: &Limits,
) -> Result<HfpGroupoid> {
    let violations = check_weak_action(w);
    if !violations.is_empty() {
        return Err(Error::MalformedInput(format!(
            "input is not a weak action: {violations:?}"
        )));
    }
    let base = &w.base;
    let n = w.gamma.order();

    let mut objects: Vec<(usize, Vec<usize>)> = Vec::new();
    match mode {
        HfpMode::Full => {
            let mut budget: u64 = 0;
            for x in 0..base.n_objects() {
                let mut prod: u64 = 1;
                for g in 1..n {
                    prod = prod.saturating_mul(base.hom(x, w.functors[g].on_obj(x)).len() as u64);
                }
                budget = budget.saturating_add(prod);
            }
            limits.check_candidates("homotopy fixed point search (full mode)", budget)?;
            for x in 0..base.n_objects() {
                let mut tau = vec![usize::MAX; n];
                tau[0] = w.eta_id.at(x);
                full_search(w, x, &mut tau, 1, &mut objects);
            }
        }
        HfpMode::GeneratorConstrained => {
            let gens = w.gamma.minimal_generating_set();
            let decomp = w.gamma.word_decomposition(&gens)?;
            let mut budget: u64 = 0;
            for x in 0..base.n_objects() {
                let mut prod: u64 = 1;
                for &g in &gens {
                    prod = prod.saturating_mul(base.hom(x, w.functors[g].on_obj(x)).len() as u64);
                }
                budget = budget.saturating_add(prod);
            }
            limits.check_candidates("homotopy fixed point search (generator mode)", budget)?;
            let order = bfs_order(n, &decomp);
            for x in 0..base.n_objects() {
                let mut gen_tau = vec![usize::MAX; gens.len()];
                gen_search(w, x, &gens, &decomp, &order, &mut gen_tau, 0, &mut objects);
            }
        }
    }
    objects.sort();

    let obj_index: HashMap<(usize, Vec<usize>), usize> = objects
        .iter()
        .enumerate()
        .map(|(i, o)| (o.clone(), i))
        .collect();

    // morphisms: base morphisms intertwining the two tau families
    let mut ends = Vec::new();
    let mut mor_base = Vec::new();
    let mut mor_index = HashMap::new();
    for (oi, (x, tau)) in objects.iter().enumerate() {
        for (oj, (y, tau2)) in objects.iter().enumerate() {
            for &f in base.hom(*x, *y) {
                let ok = (0..n)
                    .all(|g| base.then(f, tau2[g]) == base.then(tau[g], w.functors[g].on_mor(f)));
                if ok {
                    mor_index.insert((oi, f), mor_base.len());
                    ends.push((oi, oj));
                    mor_base.push(f);
                }
            }
        }
    }
    let identities: Vec<usize> = objects
        .iter()
        .enumerate()
        .map(|(oi, (x, _))| mor_index[&(oi, base.identity(*x))])
        .collect();
    let mut compose = HashMap::new();
    for (m1, &b1) in mor_base.iter().enumerate() {
        let mid = ends[m1].1;
        for (m2, &b2) in mor_base.iter().enumerate() {
            if ends[m2].0 != mid {
                continue;
            }
            compose.insert((m1, m2), mor_index[&(ends[m1].0, base.then(b1, b2))]);
        }
    }
    let groupoid = Arc::new(FiniteGroupoid::new(objects.len(), ends, identities, compose)?);
    debug_assert!(groupoid.check_groupoid().is_empty());
    Ok(HfpGroupoid {
        groupoid,
        action: w.clone(),
        objects,
        mor_base,
        obj_index,
        mor_index,
    })
}

fn bfs_order(n: usize, decomp: &[Option<(usize, usize)>]) -> Vec<usize> {
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    placed[0] = true;
    let mut frontier = vec![0usize];
    while let Some(g) = frontier.pop() {
        order.push(g);
        for h in 0..n {
            if !placed[h] {
                if let Some((prev, _)) = decomp[h] {
                    if prev == g {
                        placed[h] = true;
                        frontier.push(h);
                    }
                }
            }
        }
    }
    order
}

fn full_search(
    w: &WeakAction,
    x: usize,
    tau: &mut Vec<usize>,
    g: usize,
    out: &mut Vec<(usize, Vec<usize>)>,
) {
    let n = w.gamma.order();
    if g == n {
        if tau_coherent(w, x, tau) {
            out.push((x, tau.clone()));
        }
        return;
    }
    let candidates: Vec<usize> = w.base.hom(x, w.functors[g].on_obj(x)).to_vec();
    for c in candidates {
        tau[g] = c;
        full_search(w, x, tau, g + 1, out);
    }
    tau[g] = usize::MAX;
}

#[allow(clippy::too_many_arguments)]
fn gen_search(
    w: &WeakAction,
    x: usize,
    gens: &[usize],
    decomp: &[Option<(usize, usize)>],
    order: &[usize],
    gen_tau: &mut Vec<usize>,
    pos: usize,
    out: &mut Vec<(usize, Vec<usize>)>,
) {
    if pos < gens.len() {
        let g = gens[pos];
        let candidates: Vec<usize> = w.base.hom(x, w.functors[g].on_obj(x)).to_vec();
        for c in candidates {
            gen_tau[pos] = c;
            gen_search(w, x, gens, decomp, order, gen_tau, pos + 1, out);
        }
        gen_tau[pos] = usize::MAX;
        return;
    }
    // complete the family along the tree:
    //   tau(prev * gen) = (tau(prev) then F(prev)(tau(gen)))
    //                     then eta(gen, prev)(x)^{-1}
    let n = w.gamma.order();
    let base = &w.base;
    let mut tau = vec![usize::MAX; n];
    tau[0] = w.eta_id.at(x);
    for &e in order.iter().skip(1) {
        let (prev, gi) = decomp[e].expect("decomposed");
        let g = gens[gi];
        let forward = base.then(tau[prev], w.functors[prev].on_mor(gen_tau[gi]));
        tau[e] = base.then(forward, base.inverse(w.eta_comp(g, prev).at(x)));
    }
    for (gi, &g) in gens.iter().enumerate() {
        if tau[g] != gen_tau[gi] {
            return;
        }
    }
    if tau_coherent(w, x, &tau) {
        out.push((x, tau));
    }
}

/// The functor between fixed-point groupoids induced by a weak equivariant
/// map: on objects (x, tau) -> (alpha(x), {alpha(tau_g) then eps(g)_x}),
/// on morphisms the image under alpha.
pub fn induced_hfp_functor(
    m: &WeakEquivariantMap,
    source: &HfpGroupoid,
    target: &HfpGroupoid,
) -> Result<GFunctor> {
    let mut obj_map = Vec::with_capacity(source.objects.len());
    for (x, tau) in &source.objects {
        let kappa: Vec<usize> = (0..m.source.gamma.order())
            .map(|g| m.target.base.then(m.alpha.on_mor(tau[g]), m.eps[g].at(*x)))
            .collect();
        let image = target
            .object_index(m.alpha.on_obj(*x), &kappa)
            .ok_or_else(|| {
                Error::MalformedInput("induced object missing from the target fixed points".into())
            })?;
        obj_map.push(image);
    }
    let mut mor_map = Vec::with_capacity(source.mor_base.len());
    for mm in source.groupoid.morphisms() {
        let src_obj = source.groupoid.source(mm);
        let image = target
            .morphism_index(obj_map[src_obj], m.alpha.on_mor(source.mor_base[mm]))
            .ok_or_else(|| Error::MalformedInput("induced morphism missing from the target".into()))?;
        mor_map.push(image);
    }
    GFunctor::new(source.groupoid.clone(), target.groupoid.clone(), obj_map, mor_map)
}

/// The canonical weak action on the 2-fiber product of the bases of two
/// weak equivariant maps with a common target. The twisted isomorphism of
/// an object (a, b, f) under g is
/// eps_delta(g)_a then H(g)(f) then eps_epsilon(g)_b^{-1}.
pub fn weak_action_on_fiber_product(
    delta: &WeakEquivariantMap,
    epsilon: &WeakEquivariantMap,
) -> Result<(FiberProductGroupoid, WeakAction)> {
    if delta.target.base != epsilon.target.base || delta.source.gamma != epsilon.source.gamma {
        return Err(Error::MalformedInput(
            "maps must share the target action and the group".into(),
        ));
    }
    let fp = two_fiber_product(&delta.alpha, &epsilon.alpha)?;
    let gamma = delta.source.gamma.clone();
    let h_base = &delta.target.base;
    let f_act = &delta.source;
    let g_act = &epsilon.source;
    let h_act = &delta.target;

    let twisted_iso = |g: usize, a: usize, b: usize, f: usize| -> usize {
        let step = h_base.then(delta.eps[g].at(a), h_act.functors[g].on_mor(f));
        h_base.then(step, h_base.inverse(epsilon.eps[g].at(b)))
    };

    let mut functors = Vec::with_capacity(gamma.order());
    for g in 0..gamma.order() {
        let obj_map: Vec<usize> = fp
            .objects
            .iter()
            .map(|&(a, b, f)| {
                fp.object_index(
                    f_act.functors[g].on_obj(a),
                    g_act.functors[g].on_obj(b),
                    twisted_iso(g, a, b, f),
                )
                .expect("twisted object stays in the fiber product")
            })
            .collect();
        let mor_map: Vec<usize> = fp
            .groupoid
            .morphisms()
            .map(|m| {
                let (x, y) = fp.mor_labels[m];
                let src = fp.groupoid.source(m);
                fp.morphism_index(
                    obj_map[src],
                    (f_act.functors[g].on_mor(x), g_act.functors[g].on_mor(y)),
                )
                .expect("twisted morphism stays in the fiber product")
            })
            .collect();
        functors.push(GFunctor::new(fp.groupoid.clone(), fp.groupoid.clone(), obj_map, mor_map)?);
    }

    // coherence data: componentwise pairs of the source coherence data,
    // with components starting at the object carried by `from`
    let pair_iso = |fa: &NatIso, gb: &NatIso, from: &GFunctor| -> NatIso {
        let components = (0..fp.objects.len())
            .map(|oi| {
                let (a, b, _) = fp.objects[oi];
                let src = from.on_obj(oi);
                fp.morphism_index(src, (fa.at(a), gb.at(b)))
                    .expect("coherence pair is a fiber product morphism")
            })
            .collect();
        NatIso { components }
    };
    let id_functor = GFunctor::identity(fp.groupoid.clone());
    let eta_id = pair_iso(&f_act.eta_id, &g_act.eta_id, &id_functor);
    let mut eta_comp = Vec::with_capacity(gamma.order() * gamma.order());
    for first in 0..gamma.order() {
        for second in 0..gamma.order() {
            let from = functors[gamma.mul(second, first)].clone();
            eta_comp.push(pair_iso(
                f_act.eta_comp(first, second),
                g_act.eta_comp(first, second),
                &from,
            ));
        }
    }
    let action = WeakAction {
        gamma,
        base: fp.groupoid.clone(),
        functors,
        eta_id,
        eta_comp,
    };
    let violations = check_weak_action(&action);
    if !violations.is_empty() {
        return Err(Error::MalformedInput(format!(
            "fiber product action fails the axioms: {violations:?}"
        )));
    }
    Ok((fp, action))
}

/// Report for the comparison between the fiber product of fixed points and
/// the fixed points of the fiber product.
#[derive(Debug)]
pub struct BetaReport {
    pub verdict: EquivalenceVerdict,
    pub lhs_objects: usize,
    pub rhs_objects: usize,
}

/// Builds the comparison F^h x_{H^h} G^h -> (F x_H G)^h of the two ways of
/// mixing fixed points with fiber products, and checks it is an
/// equivalence.
pub fn beta_comparison(
    delta: &WeakEquivariantMap,
    epsilon: &WeakEquivariantMap,
    limits: &Limits,
) -> Result<BetaReport> {
    let hfp_f = homotopy_fixed_points(&delta.source, limits)?;
    let hfp_g = homotopy_fixed_points(&epsilon.source, limits)?;
    let hfp_h = homotopy_fixed_points(&delta.target, limits)?;
    let delta_h = induced_hfp_functor(delta, &hfp_f, &hfp_h)?;
    let eps_h = induced_hfp_functor(epsilon, &hfp_g, &hfp_h)?;
    let lhs = two_fiber_product(&delta_h, &eps_h)?;

    let (fp, action) = weak_action_on_fiber_product(delta, epsilon)?;
    let rhs = homotopy_fixed_points(&action, limits)?;

    // on objects: ((a, tau), (b, sigma), f) -> ((a, b, base f), (tau, sigma))
    let n = delta.source.gamma.order();
    let mut obj_map = Vec::with_capacity(lhs.objects.len());
    for &(fo, go, f_hfp_mor) in &lhs.objects {
        let (a, tau) = &hfp_f.objects[fo];
        let (b, sigma) = &hfp_g.objects[go];
        let f_base = hfp_h.mor_base[f_hfp_mor];
        let p_obj = fp
            .object_index(*a, *b, f_base)
            .ok_or_else(|| Error::MalformedInput("beta object missing downstairs".into()))?;
        let rho: Vec<usize> = (0..n)
            .map(|g| {
                fp.morphism_index(p_obj, (tau[g], sigma[g]))
                    .ok_or_else(|| Error::MalformedInput("beta tau pair missing".into()))
            })
            .collect::<Result<_>>()?;
        let image = rhs
            .object_index(p_obj, &rho)
            .ok_or_else(|| Error::MalformedInput("beta image is not a fixed point".into()))?;
        obj_map.push(image);
    }
    let mut mor_map = Vec::with_capacity(lhs.mor_labels.len());
    for m in lhs.groupoid.morphisms() {
        let (x_hfp, y_hfp) = lhs.mor_labels[m];
        let src = lhs.groupoid.source(m);
        let pair = (hfp_f.mor_base[x_hfp], hfp_g.mor_base[y_hfp]);
        let src_p = rhs.objects[obj_map[src]].0;
        let base_mor = fp
            .morphism_index(src_p, pair)
            .ok_or_else(|| Error::MalformedInput("beta morphism missing downstairs".into()))?;
        let image = rhs
            .morphism_index(obj_map[src], base_mor)
            .ok_or_else(|| Error::MalformedInput("beta morphism not compatible".into()))?;
        mor_map.push(image);
    }
    let beta = GFunctor::new(lhs.groupoid.clone(), rhs.groupoid.clone(), obj_map, mor_map)?;
    Ok(BetaReport {
        verdict: equivalence_check(&beta),
        lhs_objects: lhs.objects.len(),
        rhs_objects: rhs.objects.len(),
    })
}

/// The action groupoid of the module twist-conjugating its cocycles,
/// together with the comparison functor into the fixed points of the
/// one-object groupoid. An object sigma goes to the family
/// tau(g) = sigma(g)^{-1}; a morphism m goes to itself.
pub struct CocycleTorsorReport {
    pub cocycle_groupoid: ActionGroupoid,
    pub fixed_points: HfpGroupoid,
    pub comparison: GFunctor,
    pub verdict: EquivalenceVerdict,
}

pub fn cocycle_torsor_groupoid(
    a: &GammaGroupAction,
    limits: &Limits,
) -> Result<CocycleTorsorReport> {
    let z1 = enumerate_cocycles(a, EnumMode::default(), limits)?;
    let index: HashMap<Vec<usize>, usize> = z1
        .iter()
        .enumerate()
        .map(|(i, c)| (c.values.clone(), i))
        .collect();
    let perms: Vec<Vec<usize>> = (0..a.module.order())
        .map(|m| z1.iter().map(|c| index[&c.twist(a, m).values]).collect())
        .collect();
    let twist_action = SetAction::new(a.module.clone(), z1.len(), perms)?;
    let cocycle_groupoid = ActionGroupoid::new(twist_action);

    let (_, w) = WeakAction::on_classifying(a);
    let fixed_points = homotopy_fixed_points(&w, limits)?;

    // in the one-object groupoid the morphism ids are the module elements
    let mut obj_map = Vec::with_capacity(z1.len());
    for c in &z1 {
        let tau: Vec<usize> = c.values.iter().map(|&v| a.module.inv(v)).collect();
        let image = fixed_points
            .object_index(0, &tau)
            .ok_or_else(|| Error::MalformedInput("cocycle does not give a fixed point".into()))?;
        obj_map.push(image);
    }
    let mut mor_map = Vec::with_capacity(cocycle_groupoid.labels.len());
    for m in cocycle_groupoid.groupoid.morphisms() {
        let (g, sigma) = cocycle_groupoid.labels[m];
        let image = fixed_points
            .morphism_index(obj_map[sigma], g)
            .ok_or_else(|| Error::MalformedInput("twist is not a fixed morphism".into()))?;
        mor_map.push(image);
    }
    let comparison = GFunctor::new(
        cocycle_groupoid.groupoid.clone(),
        fixed_points.groupoid.clone(),
        obj_map,
        mor_map,
    )?;
    let verdict = equivalence_check(&comparison);
    Ok(CocycleTorsorReport {
        cocycle_groupoid,
        fixed_points,
        comparison,
        verdict,
    })
}

/// Verdict of the classifying-stack comparison B(G^Gamma) -> (BG)^{hGamma}.
#[derive(Debug)]
pub struct ClassifyingReport {
    pub verdict: EquivalenceVerdict,
    pub h1: H1Set,
    pub fixed_point_classes: usize,
    /// fully faithful always, and equivalence exactly when H^1 is trivial
    pub dichotomy_holds: bool,
}

/// Builds B(G^Gamma) -> (BG)^{hGamma} through the trivial family and
/// checks full faithfulness and the equivalence dichotomy against H^1.
pub fn classifying_fixed_points_check(
    a: &GammaGroupAction,
    limits: &Limits,
) -> Result<ClassifyingReport> {
    let (_, w) = WeakAction::on_classifying(a);
    let fixed_points = homotopy_fixed_points(&w, limits)?;
    let fixed_group = a.fixed_subgroup();
    let bg_fixed = Arc::new(FiniteGroupoid::delooping(&fixed_group.group));

    let trivial_tau: Vec<usize> = vec![0; a.gamma.order()];
    let base_obj = fixed_points
        .object_index(0, &trivial_tau)
        .ok_or_else(|| Error::MalformedInput("trivial family is not a fixed point".into()))?;
    let mor_map: Vec<usize> = (0..fixed_group.order())
        .map(|m| {
            fixed_points
                .morphism_index(base_obj, fixed_group.embed(m))
                .ok_or_else(|| Error::MalformedInput("fixed element is not a fixed morphism".into()))
        })
        .collect::<Result<_>>()?;
    let functor = GFunctor::new(
        bg_fixed,
        fixed_points.groupoid.clone(),
        vec![base_obj],
        mor_map,
    )?;
    let verdict = equivalence_check(&functor);
    let h1_set = h1(a, limits)?;
    let classes = crate::groupoid::iso_classes(&fixed_points.groupoid);
    let dichotomy_holds = verdict.fully_faithful
        && (verdict.is_equivalence() == h1_set.is_trivial())
        && classes.classes.len() == h1_set.class_count();
    Ok(ClassifyingReport {
        verdict,
        h1: h1_set,
        fixed_point_classes: classes.classes.len(),
        dichotomy_holds,
    })
}

/// Report of the quotient fixed-point comparison for an equivariant pair.
#[derive(Debug)]
pub struct QuotientReport {
    /// the map [X^Gamma / G^Gamma] -> [X/G]^{hGamma}
    pub direct: EquivalenceVerdict,
    /// the comparison into [X/G]^{hGamma} x_{(BG)^{hGamma}} B(G^Gamma)
    pub cartesian: EquivalenceVerdict,
    pub h1_trivial: bool,
    /// whether the direct verdict agreed with H^1-triviality on this
    /// input; one direction is a theorem, the other is logged per input
    pub converse_observed: bool,
}

impl QuotientReport {
    /// The unconditional statements: the square is 2-Cartesian, and
    /// triviality of H^1 forces the direct map to be an equivalence.
    pub fn theorems_hold(&self) -> bool {
        self.cartesian.is_equivalence() && (!self.h1_trivial || self.direct.is_equivalence())
    }
}

/// Builds both comparisons for a compatible pair: the direct functor
/// [X^Gamma / G^Gamma] -> [X/G]^{hGamma}, and the functor into the 2-fiber
/// product of [X/G]^{hGamma} and B(G^Gamma) over (BG)^{hGamma}.
pub fn quotient_fixed_points_check(
    pair: &EquivariantPair,
    limits: &Limits,
) -> Result<QuotientReport> {
    let (ag, w) = WeakAction::on_action_groupoid(pair);
    let hfp_xg = homotopy_fixed_points(&w, limits)?;
    let gamma_order = pair.group_action.gamma.order();

    let (fixed_group, fixed_set, fixed_action) = pair.fixed_pair();
    let fixed_ag = ActionGroupoid::new(fixed_action);

    // direct functor: a fixed point with the identity family
    let mut d_obj = Vec::with_capacity(fixed_set.len());
    for &x in &fixed_set {
        let tau: Vec<usize> = vec![ag.morphism(0, x); gamma_order];
        let image = hfp_xg
            .object_index(x, &tau)
            .ok_or_else(|| Error::MalformedInput("fixed point missing upstairs".into()))?;
        d_obj.push(image);
    }
    let mut d_mor = Vec::with_capacity(fixed_ag.labels.len());
    for m in fixed_ag.groupoid.morphisms() {
        let (g_sub, x_sub) = fixed_ag.labels[m];
        let base_mor = ag.morphism(fixed_group.embed(g_sub), fixed_set[x_sub]);
        let image = hfp_xg
            .morphism_index(d_obj[x_sub], base_mor)
            .ok_or_else(|| Error::MalformedInput("fixed morphism missing upstairs".into()))?;
        d_mor.push(image);
    }
    let direct_functor = GFunctor::new(
        fixed_ag.groupoid.clone(),
        hfp_xg.groupoid.clone(),
        d_obj.clone(),
        d_mor,
    )?;
    let direct = equivalence_check(&direct_functor);

    // classifying side and the forgetful induced functor
    let (bg_ag, w_bg) = WeakAction::on_classifying(&pair.group_action);
    let hfp_bg = homotopy_fixed_points(&w_bg, limits)?;
    let forget_alpha = GFunctor::new(
        ag.groupoid.clone(),
        bg_ag.groupoid.clone(),
        vec![0; ag.groupoid.n_objects()],
        ag.labels.iter().map(|&(g, _)| g).collect(),
    )?;
    let forget = WeakEquivariantMap::strict(w.clone(), w_bg.clone(), forget_alpha)?;
    let u = induced_hfp_functor(&forget, &hfp_xg, &hfp_bg)?;

    let bg_fixed = Arc::new(FiniteGroupoid::delooping(&fixed_group.group));
    let trivial_tau = vec![0usize; gamma_order];
    let bg_base_obj = hfp_bg
        .object_index(0, &trivial_tau)
        .ok_or_else(|| Error::MalformedInput("trivial family missing".into()))?;
    let v = GFunctor::new(
        bg_fixed,
        hfp_bg.groupoid.clone(),
        vec![bg_base_obj],
        (0..fixed_group.order())
            .map(|m| {
                hfp_bg
                    .morphism_index(bg_base_obj, fixed_group.embed(m))
                    .ok_or_else(|| Error::MalformedInput("fixed morphism missing".into()))
            })
            .collect::<Result<_>>()?,
    )?;

    let fp = two_fiber_product(&u, &v)?;
    // comparison into the fiber product: x -> (direct(x), *, identity)
    let mut c_obj = Vec::with_capacity(fixed_set.len());
    for (i, _) in fixed_set.iter().enumerate() {
        let upstairs = d_obj[i];
        let in_bg = u.on_obj(upstairs);
        let triple = fp
            .object_index(upstairs, 0, hfp_bg.groupoid.identity(in_bg))
            .ok_or_else(|| Error::MalformedInput("comparison square does not close".into()))?;
        c_obj.push(triple);
    }
    let mut c_mor = Vec::with_capacity(fixed_ag.labels.len());
    for m in fixed_ag.groupoid.morphisms() {
        let (g_sub, x_sub) = fixed_ag.labels[m];
        let upstairs = direct_functor.on_mor(m);
        let image = fp
            .morphism_index(c_obj[x_sub], (upstairs, g_sub))
            .ok_or_else(|| Error::MalformedInput("comparison morphism missing".into()))?;
        c_mor.push(image);
    }
    let comparison = GFunctor::new(fixed_ag.groupoid.clone(), fp.groupoid.clone(), c_obj, c_mor)?;
    let cartesian = equivalence_check(&comparison);

    let h1_set = h1(&pair.group_action, limits)?;
    let h1_trivial = h1_set.is_trivial();
    Ok(QuotientReport {
        converse_observed: direct.is_equivalence() == h1_trivial,
        direct,
        cartesian,
        h1_trivial,
    })
}

#[cfg(test)]
mod tests {
    use crate::group::FiniteGroup;
    use super::*;
    use crate::weak::central_twist_on_classifying;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn trivial_gamma_fixed_points_recover_the_base() {
        let base = Arc::new(FiniteGroupoid::discrete(3));
        let w = WeakAction::trivial(FiniteGroup::trivial(), base);
        let hfp = homotopy_fixed_points(&w, &lim()).unwrap();
        assert_eq!(hfp.groupoid.n_objects(), 3);
        assert_eq!(hfp.groupoid.n_morphisms(), 3);
    }

    #[test]
    fn trivial_action_on_discrete_base_recovers_the_base() {
        let base = Arc::new(FiniteGroupoid::discrete(4));
        let w = WeakAction::trivial(FiniteGroup::cyclic(3), base);
        let hfp = homotopy_fixed_points(&w, &lim()).unwrap();
        assert_eq!(hfp.groupoid.n_objects(), 4);
    }

    #[test]
    fn bz2_with_trivial_z2_action_has_two_classes_with_full_automorphisms() {
        let a = GammaGroupAction::trivial(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
        let (_, w) = WeakAction::on_classifying(&a);
        let hfp = homotopy_fixed_points(&w, &lim()).unwrap();
        let classes = crate::groupoid::iso_classes(&hfp.groupoid);
        assert_eq!(classes.classes.len(), 2);
        for aut in &classes.automorphism_groups {
            assert_eq!(aut.order(), 2);
        }
    }

    #[test]
    fn hfp_modes_agree() {
        let cases = vec![
            GammaGroupAction::trivial(FiniteGroup::klein_four(), FiniteGroup::cyclic(2)),
            GammaGroupAction::inversion(FiniteGroup::cyclic(4)).unwrap(),
            GammaGroupAction::trivial(FiniteGroup::symmetric(3), FiniteGroup::cyclic(3)),
        ];
        for a in cases {
            let (_, w) = WeakAction::on_classifying(&a);
            let pruned =
                homotopy_fixed_points_with_mode(&w, HfpMode::GeneratorConstrained, &lim()).unwrap();
            let full = homotopy_fixed_points_with_mode(&w, HfpMode::Full, &lim()).unwrap();
            assert_eq!(pruned.objects, full.objects);
            assert_eq!(pruned.mor_base, full.mor_base);
        }
    }

    #[test]
    fn obstructed_weak_action_has_no_fixed_points() {
        // a nontrivial central 2-cocycle obstructs every equivariant
        // structure on the trivial torsor
        let v4 = FiniteGroup::klein_four();
        let a = GammaGroupAction::trivial(v4, FiniteGroup::cyclic(2));
        let z = |g: usize, h: usize| -> usize { ((g % 2) * (h / 2)) % 2 };
        let w = central_twist_on_classifying(&a, &z).unwrap();
        let hfp = homotopy_fixed_points(&w, &lim()).unwrap();
        assert_eq!(hfp.groupoid.n_objects(), 0);
    }

    #[test]
    fn cocycle_torsor_comparison_is_an_equivalence() {
        for a in [
            GammaGroupAction::trivial(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)),
            GammaGroupAction::inversion(FiniteGroup::cyclic(3)).unwrap(),
            GammaGroupAction::trivial(FiniteGroup::cyclic(3), FiniteGroup::symmetric(3)),
        ] {
            let report = cocycle_torsor_groupoid(&a, &lim()).unwrap();
            assert!(report.verdict.is_equivalence());
            let h1_set = h1(&a, &lim()).unwrap();
            let classes = crate::groupoid::iso_classes(&report.fixed_points.groupoid);
            assert_eq!(classes.classes.len(), h1_set.class_count());
        }
    }

    #[test]
    fn trivial_gamma_cocycle_groupoid_has_one_class() {
        let a = GammaGroupAction::trivial(FiniteGroup::trivial(), FiniteGroup::symmetric(3));
        let report = cocycle_torsor_groupoid(&a, &lim()).unwrap();
        let classes = crate::groupoid::iso_classes(&report.cocycle_groupoid.groupoid);
        assert_eq!(classes.classes.len(), 1);
    }

    #[test]
    fn classifying_dichotomy_for_inverted_z3() {
        let a = GammaGroupAction::inversion(FiniteGroup::cyclic(3)).unwrap();
        let report = classifying_fixed_points_check(&a, &lim()).unwrap();
        assert!(report.verdict.is_equivalence());
        assert!(report.dichotomy_holds);
    }

    #[test]
    fn classifying_counterexample_z2_trivial_on_z2() {
        let a = GammaGroupAction::trivial(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
        let report = classifying_fixed_points_check(&a, &lim()).unwrap();
        assert!(report.verdict.fully_faithful);
        assert!(!report.verdict.essentially_surjective);
        assert_eq!(report.fixed_point_classes, 2);
        assert!(report.dichotomy_holds);
    }

    #[test]
    fn classifying_trivial_gamma_is_equivalence() {
        let a = GammaGroupAction::trivial(FiniteGroup::trivial(), FiniteGroup::symmetric(3));
        let report = classifying_fixed_points_check(&a, &lim()).unwrap();
        assert!(report.verdict.is_equivalence());
        assert!(report.dichotomy_holds);
    }

    #[test]
    fn quotient_check_on_a_point_reduces_to_classifying() {
        let z2 = FiniteGroup::cyclic(2);
        let g = FiniteGroup::cyclic(2);
        let pair = EquivariantPair::new(
            GammaGroupAction::trivial(z2.clone(), g.clone()),
            SetAction::point(z2),
            SetAction::point(g),
        )
        .unwrap();
        let report = quotient_fixed_points_check(&pair, &lim()).unwrap();
        assert!(report.cartesian.is_equivalence());
        assert!(!report.direct.is_equivalence());
        assert!(!report.h1_trivial);
        assert!(report.theorems_hold());
        assert!(report.converse_observed);
    }

    #[test]
    fn quotient_check_translation_example() {
        // Z/2 inverting Z/3 acting on itself by translation: H^1 trivial,
        // both maps are equivalences
        let z3 = FiniteGroup::cyclic(3);
        let ga = GammaGroupAction::inversion(z3.clone()).unwrap();
        let beta = SetAction::new(
            FiniteGroup::cyclic(2),
            3,
            vec![vec![0, 1, 2], vec![0, 2, 1]],
        )
        .unwrap();
        let pair = EquivariantPair::new(ga, beta, SetAction::left_translation(z3)).unwrap();
        let report = quotient_fixed_points_check(&pair, &lim()).unwrap();
        assert!(report.h1_trivial);
        assert!(report.direct.is_equivalence());
        assert!(report.cartesian.is_equivalence());
        assert!(report.theorems_hold());
    }

    #[test]
    fn quotient_converse_can_fail_and_is_only_logged() {
        // G = Z/2 swapping two points, gamma = Z/2 acting trivially:
        // H^1 is nontrivial but the direct map is still an equivalence
        let z2 = FiniteGroup::cyclic(2);
        let g = FiniteGroup::cyclic(2);
        let swap = SetAction::new(g.clone(), 2, vec![vec![0, 1], vec![1, 0]]).unwrap();
        let pair = EquivariantPair::new(
            GammaGroupAction::trivial(z2.clone(), g),
            SetAction::trivial(z2, 2),
            swap,
        )
        .unwrap();
        let report = quotient_fixed_points_check(&pair, &lim()).unwrap();
        assert!(report.theorems_hold());
        assert!(!report.h1_trivial);
        assert!(report.direct.is_equivalence());
        assert!(!report.converse_observed);
    }

    #[test]
    fn induced_functor_of_identity_is_identity() {
        let a = GammaGroupAction::inversion(FiniteGroup::cyclic(4)).unwrap();
        let (_, w) = WeakAction::on_classifying(&a);
        let hfp = homotopy_fixed_points(&w, &lim()).unwrap();
        let id_map = WeakEquivariantMap::identity(&w);
        let induced = induced_hfp_functor(&id_map, &hfp, &hfp).unwrap();
        assert_eq!(induced.obj_map, (0..hfp.groupoid.n_objects()).collect::<Vec<_>>());
        assert!(equivalence_check(&induced).is_equivalence());
    }

    #[test]
    fn beta_comparison_identity_diagram() {
        let a = GammaGroupAction::inversion(FiniteGroup::cyclic(3)).unwrap();
        let (_, w) = WeakAction::on_classifying(&a);
        let id = WeakEquivariantMap::identity(&w);
        let report = beta_comparison(&id, &id, &lim()).unwrap();
        assert!(report.verdict.is_equivalence(), "{report:?}");
    }

    #[test]
    fn beta_comparison_bk_to_bg() {
        // BK -> BG <- BK with strict inversion actions, K = {0, 2} in Z/4
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
        let report = beta_comparison(&m, &m, &lim()).unwrap();
        assert!(report.verdict.is_equivalence(), "{report:?}");
    }

    #[test]
    fn fiber_product_action_of_strict_inputs_is_strict() {
        let a = GammaGroupAction::inversion(FiniteGroup::cyclic(3)).unwrap();
        let (_, w) = WeakAction::on_classifying(&a);
        let id = WeakEquivariantMap::identity(&w);
        let (_, action) = weak_action_on_fiber_product(&id, &id).unwrap();
        assert!(action.is_strict());
        assert!(check_weak_action(&action).is_empty());
    }
}
