//! The bundled verification corpora: named small groups, exhaustive
//! action enumeration where feasible, and seeded generators for the
//! randomized suites. Every generator is deterministic given its seed, so
//! two runs of a suite traverse identical instances.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::action::{
    coinduced_action, CoinducedAction, EquivariantPair, GammaGroupAction, SetAction,
};
use crate::cohomology::{PGroupInstance, Tower};
use crate::error::{sat_pow, Limits, Result};
use crate::group::{FiniteGroup, GroupHom, Subgroup};
use crate::groupoid::NatIso;
use crate::shimura::ToyShimuraDatum;
use crate::weak::{center, gauge_twist, WeakAction, WeakEquivariantMap};

#[derive(Debug, Clone)]
pub struct NamedGroup {
    pub name: &'static str,
    pub group: FiniteGroup,
}

fn named(name: &'static str, group: FiniteGroup) -> NamedGroup {
    NamedGroup { name, group }
}

/// The acting groups used throughout the acceptance corpora.
pub fn standard_gammas() -> Vec<NamedGroup> {
    vec![
        named("Z2", FiniteGroup::cyclic(2)),
        named("Z3", FiniteGroup::cyclic(3)),
        named("Z4", FiniteGroup::cyclic(4)),
        named("V4", FiniteGroup::klein_four()),
        named("S3", FiniteGroup::symmetric(3)),
    ]
}

/// All isomorphism classes of groups of order at most 8.
pub fn groups_up_to_8() -> Vec<NamedGroup> {
    vec![
        named("1", FiniteGroup::trivial()),
        named("Z2", FiniteGroup::cyclic(2)),
        named("Z3", FiniteGroup::cyclic(3)),
        named("Z4", FiniteGroup::cyclic(4)),
        named("V4", FiniteGroup::klein_four()),
        named("Z5", FiniteGroup::cyclic(5)),
        named("Z6", FiniteGroup::cyclic(6)),
        named("S3", FiniteGroup::symmetric(3)),
        named("Z7", FiniteGroup::cyclic(7)),
        named("Z8", FiniteGroup::cyclic(8)),
        named(
            "Z4xZ2",
            FiniteGroup::cyclic(4).direct_product(&FiniteGroup::cyclic(2)),
        ),
        named("Z2^3", {
            let z2 = FiniteGroup::cyclic(2);
            z2.direct_product(&z2).direct_product(&z2)
        }),
        named("D4", FiniteGroup::dihedral(4)),
        named("Q8", FiniteGroup::quaternion()),
    ]
}

/// All isomorphism classes of groups of order at most 12, except the
/// dicyclic group of order 12.
pub fn groups_up_to_12() -> Vec<NamedGroup> {
    let mut out = groups_up_to_8();
    out.extend([
        named("Z9", FiniteGroup::cyclic(9)),
        named(
            "Z3^2",
            FiniteGroup::cyclic(3).direct_product(&FiniteGroup::cyclic(3)),
        ),
        named("Z10", FiniteGroup::cyclic(10)),
        named("D5", FiniteGroup::dihedral(5)),
        named("Z11", FiniteGroup::cyclic(11)),
        named("Z12", FiniteGroup::cyclic(12)),
        named(
            "Z6xZ2",
            FiniteGroup::cyclic(6).direct_product(&FiniteGroup::cyclic(2)),
        ),
        named("D6", FiniteGroup::dihedral(6)),
        named("A4", FiniteGroup::alternating4()),
    ]);
    out
}

/// Base groups for the randomized exact-sequence corpus, order at most 24.
pub fn exactness_pool() -> Vec<NamedGroup> {
    let mut out = groups_up_to_12();
    out.extend([
        named("Z16", FiniteGroup::cyclic(16)),
        named(
            "Z4^2",
            FiniteGroup::cyclic(4).direct_product(&FiniteGroup::cyclic(4)),
        ),
        named("Z18", FiniteGroup::cyclic(18)),
        named("Z20", FiniteGroup::cyclic(20)),
        named("D8", FiniteGroup::dihedral(8)),
        named(
            "Z3xS3",
            FiniteGroup::cyclic(3).direct_product(&FiniteGroup::symmetric(3)),
        ),
        named("S4", FiniteGroup::symmetric(4)),
        named("Z24", FiniteGroup::cyclic(24)),
        named(
            "Z2xA4",
            FiniteGroup::cyclic(2).direct_product(&FiniteGroup::alternating4()),
        ),
    ]);
    out
}

/// The automorphism group of a small group, as a Cayley table over the
/// lexicographically sorted automorphism list. The i-th group element is
/// the i-th table in the returned list.
pub fn automorphism_group(m: &FiniteGroup) -> (FiniteGroup, Vec<Vec<usize>>) {
    let auts = m.automorphisms();
    let index: std::collections::HashMap<&[usize], usize> = auts
        .iter()
        .enumerate()
        .map(|(i, a)| (a.as_slice(), i))
        .collect();
    let n = auts.len();
    let mut table = vec![0u32; n * n];
    for (a, pa) in auts.iter().enumerate() {
        for (b, pb) in auts.iter().enumerate() {
            // product a * b applies b first
            let comp: Vec<usize> = (0..m.order()).map(|x| pa[pb[x]]).collect();
            table[a * n + b] = index[comp.as_slice()] as u32;
        }
    }
    let group = FiniteGroup::from_table(n, table).expect("automorphisms form a group");
    (group, auts)
}

/// Every action of `gamma` on `module`, as long as the automorphism group
/// stays within `max_aut` elements; beyond that, the trivial action plus
/// the inversion action when one exists.
pub fn all_actions(
    gamma: &FiniteGroup,
    module: &FiniteGroup,
    max_aut: usize,
) -> Vec<(String, GammaGroupAction)> {
    let auts = module.automorphisms();
    if auts.len() > max_aut {
        let mut out = vec![(
            "trivial".to_string(),
            GammaGroupAction::trivial(gamma.clone(), module.clone()),
        )];
        if module.is_abelian() && gamma.order() % 2 == 0 {
            if let Some(signs) = sign_character(gamma) {
                if let Ok(a) = GammaGroupAction::by_signs(gamma.clone(), module.clone(), &signs) {
                    out.push(("inversion".to_string(), a));
                }
            }
        }
        return out;
    }
    let (aut_group, perms) = automorphism_group(module);
    gamma
        .homs_to(&aut_group)
        .into_iter()
        .enumerate()
        .map(|(i, hom)| {
            let act: Vec<Vec<usize>> = hom.iter().map(|&a| perms[a].clone()).collect();
            let action = GammaGroupAction::new(gamma.clone(), module.clone(), act)
                .expect("hom into Aut gives an action");
            (format!("act{i}"), action)
        })
        .collect()
}

/// A surjection onto Z/2 when one exists, as a sign vector.
fn sign_character(gamma: &FiniteGroup) -> Option<Vec<bool>> {
    let z2 = FiniteGroup::cyclic(2);
    gamma
        .homs_to(&z2)
        .into_iter()
        .find(|h| h.iter().any(|&x| x == 1))
        .map(|h| h.iter().map(|&x| x == 1).collect())
}

/// One Shapiro instance: a coinduced action that fits the guards.
pub struct ShapiroCase {
    pub label: String,
    pub coinduced: CoinducedAction,
}

/// Every (gamma, subgroup, H, action) combination over the standard acting
/// groups and all groups of order at most 8 whose coinduced carrier and
/// cocycle search space fit the guards.
pub fn shapiro_corpus(limits: &Limits) -> Vec<ShapiroCase> {
    let mut out = Vec::new();
    for gam in standard_gammas() {
        let d_gamma = gam.group.minimal_generating_set().len().max(1) as u32;
        for (si, sub) in gam.group.all_subgroups().into_iter().enumerate() {
            let index = gam.group.order() / sub.order();
            for h in groups_up_to_8() {
                if h.group.order() == 1 && index > 1 {
                    // the trivial H only contributes the index-1 instance
                    continue;
                }
                let carrier = sat_pow(h.group.order(), index as u32);
                if carrier > limits.max_carrier as u64 {
                    continue;
                }
                if sat_pow(carrier as usize, d_gamma) > limits.max_candidates {
                    continue;
                }
                for (aname, inner) in all_actions(&sub.group, &h.group, 200) {
                    let c = coinduced_action(&gam.group, &sub, &inner, limits)
                        .expect("guards were checked");
                    out.push(ShapiroCase {
                        label: format!("{}/sub{}/{}/{}", gam.name, si, h.name, aname),
                        coinduced: c,
                    });
                }
            }
        }
    }
    out
}

/// The coprime-order triviality corpus: p-groups of order at most 64 with
/// acting groups of coprime order.
pub fn p_group_corpus() -> Vec<PGroupInstance> {
    let z2 = FiniteGroup::cyclic(2);
    let z3 = FiniteGroup::cyclic(3);
    let z4 = FiniteGroup::cyclic(4);
    let v4 = FiniteGroup::klein_four();
    let s3 = FiniteGroup::symmetric(3);

    let odd_modules: Vec<(&str, FiniteGroup, usize)> = vec![
        ("Z3", FiniteGroup::cyclic(3), 3),
        ("Z9", FiniteGroup::cyclic(9), 3),
        ("Z27", FiniteGroup::cyclic(27), 3),
        (
            "Z3^2",
            FiniteGroup::cyclic(3).direct_product(&FiniteGroup::cyclic(3)),
            3,
        ),
        (
            "Z9xZ3",
            FiniteGroup::cyclic(9).direct_product(&FiniteGroup::cyclic(3)),
            3,
        ),
        (
            "Z3^3",
            FiniteGroup::cyclic(3)
                .direct_product(&FiniteGroup::cyclic(3))
                .direct_product(&FiniteGroup::cyclic(3)),
            3,
        ),
        ("Heis3", FiniteGroup::heisenberg(3), 3),
        ("Z5", FiniteGroup::cyclic(5), 5),
        ("Z25", FiniteGroup::cyclic(25), 5),
        (
            "Z5^2",
            FiniteGroup::cyclic(5).direct_product(&FiniteGroup::cyclic(5)),
            5,
        ),
        ("Z7", FiniteGroup::cyclic(7), 7),
        ("Z49", FiniteGroup::cyclic(49), 7),
        ("Z11", FiniteGroup::cyclic(11), 11),
        ("Z13", FiniteGroup::cyclic(13), 13),
    ];
    let even_modules: Vec<(&str, FiniteGroup, usize)> = vec![
        ("Z2", FiniteGroup::cyclic(2), 2),
        ("Z4", FiniteGroup::cyclic(4), 2),
        ("Z8", FiniteGroup::cyclic(8), 2),
        ("Z16", FiniteGroup::cyclic(16), 2),
        ("Z32", FiniteGroup::cyclic(32), 2),
        ("Z64", FiniteGroup::cyclic(64), 2),
        ("V4", FiniteGroup::klein_four(), 2),
        (
            "Z2^3",
            {
                let z2 = FiniteGroup::cyclic(2);
                z2.direct_product(&z2).direct_product(&z2)
            },
            2,
        ),
        (
            "Z4xZ4",
            FiniteGroup::cyclic(4).direct_product(&FiniteGroup::cyclic(4)),
            2,
        ),
        ("D4", FiniteGroup::dihedral(4), 2),
        ("Q8", FiniteGroup::quaternion(), 2),
        (
            "Z2^4",
            {
                let z2 = FiniteGroup::cyclic(2);
                let v = z2.direct_product(&z2);
                v.direct_product(&v)
            },
            2,
        ),
    ];

    let mut out = Vec::new();
    for (gname, gam) in [("Z2", &z2), ("Z4", &z4), ("V4", &v4)] {
        for (mname, m, p) in &odd_modules {
            let max_aut = if m.order() <= 27 { 200 } else { 0 };
            for (aname, action) in all_actions(gam, m, max_aut) {
                out.push(PGroupInstance {
                    action,
                    p: *p,
                    label: format!("{gname} on {mname} ({aname})"),
                });
            }
        }
    }
    for (mname, m, p) in &odd_modules {
        if *p == 3 {
            continue;
        }
        let max_aut = if m.order() <= 25 { 200 } else { 0 };
        for (aname, action) in all_actions(&s3, m, max_aut) {
            out.push(PGroupInstance {
                action,
                p: *p,
                label: format!("S3 on {mname} ({aname})"),
            });
        }
    }
    for (mname, m, p) in &even_modules {
        let max_aut = if m.order() <= 16 { 200 } else { 0 };
        for (aname, action) in all_actions(&z3, m, max_aut) {
            out.push(PGroupInstance {
                action,
                p: *p,
                label: format!("Z3 on {mname} ({aname})"),
            });
        }
    }
    out
}

pub struct TowerCase {
    pub label: String,
    pub tower: Tower,
}

/// Cyclic p-power towers for p in {3, 5} of depth 3, the Heisenberg tower
/// mod 3 topped by the group over Z/9, and the Heisenberg tower mod 5
/// over its abelianization, all with an order-2 action.
pub fn tower_corpus() -> Vec<TowerCase> {
    let mut out = Vec::new();
    for p in [3usize, 5] {
        let levels: Vec<GammaGroupAction> = (1..=3)
            .map(|k| GammaGroupAction::inversion(FiniteGroup::cyclic(p.pow(k))).unwrap())
            .collect();
        let projections: Vec<GroupHom> = (1..3)
            .map(|k| {
                let big = p.pow(k as u32 + 1);
                let small = p.pow(k as u32);
                GroupHom::new(
                    FiniteGroup::cyclic(big),
                    FiniteGroup::cyclic(small),
                    (0..big).map(|x| x % small).collect(),
                )
                .unwrap()
            })
            .collect();
        out.push(TowerCase {
            label: format!("Z/{p}^n tower"),
            tower: Tower::new(levels, projections, p).unwrap(),
        });
    }
    // Heisenberg mod 3: (Z/3)^2 <- Heis(3) <- Heis(9), negating the two
    // off-center coordinates
    {
        let p = 3usize;
        let ab = FiniteGroup::cyclic(p).direct_product(&FiniteGroup::cyclic(p));
        let h3 = FiniteGroup::heisenberg(p);
        let h9 = FiniteGroup::heisenberg(p * p);
        let neg_heis = |m: usize, g: &FiniteGroup| -> Vec<usize> {
            (0..g.order())
                .map(|x| {
                    let (a, b, c) = (x / (m * m), (x / m) % m, x % m);
                    ((m - a) % m) * m * m + ((m - b) % m) * m + c
                })
                .collect()
        };
        let act_ab = GammaGroupAction::inversion(ab.clone()).unwrap();
        let act_h3 = GammaGroupAction::from_generator_images(
            FiniteGroup::cyclic(2),
            h3.clone(),
            &[1],
            &[neg_heis(p, &h3)],
        )
        .unwrap();
        let act_h9 = GammaGroupAction::from_generator_images(
            FiniteGroup::cyclic(2),
            h9.clone(),
            &[1],
            &[neg_heis(p * p, &h9)],
        )
        .unwrap();
        let proj_center = GroupHom::new(
            h3.clone(),
            ab.clone(),
            (0..h3.order())
                .map(|x| {
                    let (a, b) = (x / (p * p), (x / p) % p);
                    a * p + b
                })
                .collect(),
        )
        .unwrap();
        let proj_mod3 = GroupHom::new(
            h9.clone(),
            h3.clone(),
            (0..h9.order())
                .map(|x| {
                    let m = p * p;
                    let (a, b, c) = (x / (m * m), (x / m) % m, x % m);
                    (a % p) * p * p + (b % p) * p + (c % p)
                })
                .collect(),
        )
        .unwrap();
        out.push(TowerCase {
            label: "Heisenberg mod 3 tower".to_string(),
            tower: Tower::new(
                vec![act_ab, act_h3, act_h9],
                vec![proj_center, proj_mod3],
                p,
            )
            .unwrap(),
        });
    }
    // Heisenberg mod 5 over its abelianization
    {
        let p = 5usize;
        let ab = FiniteGroup::cyclic(p).direct_product(&FiniteGroup::cyclic(p));
        let h5 = FiniteGroup::heisenberg(p);
        let neg: Vec<usize> = (0..h5.order())
            .map(|x| {
                let (a, b, c) = (x / (p * p), (x / p) % p, x % p);
                ((p - a) % p) * p * p + ((p - b) % p) * p + c
            })
            .collect();
        let act_ab = GammaGroupAction::inversion(ab.clone()).unwrap();
        let act_h5 = GammaGroupAction::from_generator_images(
            FiniteGroup::cyclic(2),
            h5.clone(),
            &[1],
            &[neg],
        )
        .unwrap();
        let proj = GroupHom::new(
            h5.clone(),
            ab.clone(),
            (0..h5.order())
                .map(|x| {
                    let (a, b) = (x / (p * p), (x / p) % p);
                    a * p + b
                })
                .collect(),
        )
        .unwrap();
        out.push(TowerCase {
            label: "Heisenberg mod 5 tower".to_string(),
            tower: Tower::new(vec![act_ab, act_h5], vec![proj], p).unwrap(),
        });
    }
    out
}

pub struct ExactnessCase {
    pub label: String,
    pub action: GammaGroupAction,
    pub k: Subgroup,
}

/// Fixed-seed random (G, K, gamma) instances with |G| at most 24. Every
/// instance has a gamma-stable K, so the sequence is defined; exactness
/// is the thing under test.
pub fn exactness_corpus(seed: u64, count: usize) -> Vec<ExactnessCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = exactness_pool();
    let gammas = standard_gammas();
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < count && tries < count * 50 {
        tries += 1;
        let g = &pool[rng.gen_range(0..pool.len())];
        let gam = &gammas[rng.gen_range(0..gammas.len())];
        let actions = all_actions(&gam.group, &g.group, 250);
        let (aname, action) = &actions[rng.gen_range(0..actions.len())];
        let stable: Vec<Subgroup> = g
            .group
            .all_subgroups()
            .into_iter()
            .filter(|s| {
                (0..gam.group.order())
                    .all(|gg| s.elements.iter().all(|&m| s.contains(action.apply(gg, m))))
            })
            .collect();
        let k = stable[rng.gen_range(0..stable.len())].clone();
        out.push(ExactnessCase {
            label: format!(
                "#{} {} with {} ({aname}), |K|={}",
                out.len(),
                g.name,
                gam.name,
                k.order()
            ),
            action: action.clone(),
            k,
        });
    }
    out
}

/// All corpus actions for the cocycle-torsor and classifying suites:
/// every action of the acceptance acting groups on every group of order
/// at most 12 (automorphism groups permitting).
pub fn torsor_actions_corpus() -> Vec<(String, GammaGroupAction)> {
    let gammas: Vec<NamedGroup> = standard_gammas()
        .into_iter()
        .filter(|g| g.name != "Z4")
        .collect();
    let mut out = Vec::new();
    for gam in &gammas {
        for m in groups_up_to_12() {
            for (aname, action) in all_actions(&gam.group, &m.group, 200) {
                out.push((format!("{} on {} ({aname})", gam.name, m.name), action));
            }
        }
    }
    out
}

/// Equivariant pairs for the quotient comparison: classifying patterns,
/// translation patterns and seeded random pairs.
pub fn quotient_pair_corpus(seed: u64) -> Vec<(String, EquivariantPair)> {
    let mut out: Vec<(String, EquivariantPair)> = Vec::new();
    let z2 = FiniteGroup::cyclic(2);
    let z3 = FiniteGroup::cyclic(3);

    // the mandatory counterexample on a point
    out.push((
        "Z2 trivial on Z2, X a point".into(),
        EquivariantPair::new(
            GammaGroupAction::trivial(z2.clone(), z2.clone()),
            SetAction::point(z2.clone()),
            SetAction::point(z2.clone()),
        )
        .unwrap(),
    ));
    // the translation example
    {
        let ga = GammaGroupAction::inversion(z3.clone()).unwrap();
        let beta = SetAction::new(z2.clone(), 3, vec![vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
        out.push((
            "Z2 inverting Z3 on itself".into(),
            EquivariantPair::new(ga, beta, SetAction::left_translation(z3.clone())).unwrap(),
        ));
    }
    // the logged converse failure: free swap with trivial gamma
    {
        let swap = SetAction::new(z2.clone(), 2, vec![vec![0, 1], vec![1, 0]]).unwrap();
        out.push((
            "Z2 trivial on Z2 swapping two points".into(),
            EquivariantPair::new(
                GammaGroupAction::trivial(z2.clone(), z2.clone()),
                SetAction::trivial(z2.clone(), 2),
                swap,
            )
            .unwrap(),
        ));
    }

    // classifying patterns for a spread of actions
    for (label, action) in torsor_actions_corpus()
        .into_iter()
        .filter(|(_, a)| a.module.order() <= 8)
    {
        out.push((
            format!("{label}, X a point"),
            EquivariantPair::new(
                action.clone(),
                SetAction::point(action.gamma.clone()),
                SetAction::point(action.module.clone()),
            )
            .unwrap(),
        ));
    }
    // translation patterns
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..20 {
        let pool = groups_up_to_8();
        let g = &pool[rng.gen_range(0..pool.len())];
        let gammas = standard_gammas();
        let gam = &gammas[rng.gen_range(0..gammas.len())];
        let actions = all_actions(&gam.group, &g.group, 200);
        let (_, action) = &actions[rng.gen_range(0..actions.len())];
        let beta = SetAction::from_group_action(action);
        let pair = EquivariantPair::new(
            action.clone(),
            beta,
            SetAction::left_translation(g.group.clone()),
        )
        .unwrap();
        out.push((format!("fuzz #{i}: {} translating {}", gam.name, g.name), pair));
    }
    out
}

pub struct BetaCase {
    pub label: String,
    pub delta: WeakEquivariantMap,
    pub epsilon: WeakEquivariantMap,
}

/// Fixed-seed weak-action fiber product instances with |gamma| at most 4:
/// strict inclusion diagrams BK -> BG <- BK', optionally pushed into a
/// gauge-twisted target so the comparison cells are nonidentity.
pub fn beta_corpus(seed: u64, count: usize) -> Result<Vec<BetaCase>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gammas: Vec<NamedGroup> = standard_gammas()
        .into_iter()
        .filter(|g| g.group.order() <= 4)
        .collect();
    let pool = groups_up_to_8();
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < count && tries < count * 100 {
        tries += 1;
        let gam = &gammas[rng.gen_range(0..gammas.len())];
        let g = &pool[rng.gen_range(0..pool.len())];
        if g.group.order() > 6 {
            continue;
        }
        let actions = all_actions(&gam.group, &g.group, 200);
        let (aname, action) = &actions[rng.gen_range(0..actions.len())];
        let (_, w_big) = WeakAction::on_classifying(action);

        let stable: Vec<Subgroup> = g
            .group
            .all_subgroups()
            .into_iter()
            .filter(|s| {
                (0..gam.group.order())
                    .all(|gg| s.elements.iter().all(|&m| s.contains(action.apply(gg, m))))
            })
            .collect();
        let sub1 = stable[rng.gen_range(0..stable.len())].clone();
        let sub2 = stable[rng.gen_range(0..stable.len())].clone();
        let restricted = |sub: &Subgroup| -> Result<WeakEquivariantMap> {
            let small_action = action.restrict_module(sub)?;
            let (_, w_small) = WeakAction::on_classifying(&small_action);
            let alpha = crate::groupoid::GFunctor::new(
                w_small.base.clone(),
                w_big.base.clone(),
                vec![0],
                (0..sub.order()).map(|m| sub.embed(m)).collect(),
            )?;
            WeakEquivariantMap::strict(w_small, w_big.clone(), alpha)
        };
        let mut delta = restricted(&sub1)?;
        let mut epsilon = restricted(&sub2)?;

        // half the time, gauge-twist the target by central elements so the
        // instance carries nonidentity comparison cells
        let mut twisted = false;
        let z = center(&g.group);
        if z.len() > 1 && rng.gen_bool(0.5) {
            let v: Vec<NatIso> = (0..gam.group.order())
                .map(|gg| NatIso {
                    components: vec![if gg == 0 { 0 } else { z[rng.gen_range(0..z.len())] }],
                })
                .collect();
            if let Ok((_, gauge)) = gauge_twist(&w_big, &v) {
                delta = delta.compose(&gauge)?;
                epsilon = epsilon.compose(&gauge)?;
                twisted = true;
            }
        }
        out.push(BetaCase {
            label: format!(
                "#{} {} on {} ({aname}), |K|={}, |K'|={}{}",
                out.len(),
                gam.name,
                g.name,
                sub1.order(),
                sub2.order(),
                if twisted { ", twisted" } else { "" }
            ),
            delta,
            epsilon,
        });
    }
    Ok(out)
}

/// A coinduced toy datum: HA = Map(gamma, G0) with the translation action,
/// K = the tuples valued in K0, HQ = G0 embedded diagonally with the
/// trivial action.
pub fn coinduced_shimura_datum(
    gamma: &FiniteGroup,
    g0: &FiniteGroup,
    k0_gens: &[usize],
    translate_y: bool,
    limits: &Limits,
) -> Result<ToyShimuraDatum> {
    let trivial_sub = gamma.subgroup(&[]);
    let inner = GammaGroupAction::trivial(trivial_sub.group.clone(), g0.clone());
    let c = coinduced_action(gamma, &trivial_sub, &inner, limits)?;
    let ha = c.action.module.clone();
    let n = gamma.order();
    let embed_map: Vec<usize> = (0..g0.order())
        .map(|x| c.elt_of_tuple(&vec![x; n]))
        .collect();
    let embed = GroupHom::new(g0.clone(), ha.clone(), embed_map)?;
    let k0 = g0.subgroup(k0_gens);
    let k_elements: Vec<usize> = (0..ha.order())
        .filter(|&e| c.tuple_of(e).iter().all(|&v| k0.contains(v)))
        .collect();
    let k = ha.subgroup(&k_elements);
    let hq_action = GammaGroupAction::trivial(gamma.clone(), g0.clone());
    let (y_hq, y_gamma) = if translate_y {
        (
            SetAction::left_translation(g0.clone()),
            SetAction::trivial(gamma.clone(), g0.order()),
        )
    } else {
        (SetAction::point(g0.clone()), SetAction::point(gamma.clone()))
    };
    ToyShimuraDatum::new(hq_action, c.action, embed, y_hq, y_gamma, k)
}

/// The obstructed counterexample: HQ = HA = K = G with the trivial gamma
/// action and Y a point.
pub fn obstructed_shimura_datum(gamma: &FiniteGroup, g: &FiniteGroup) -> ToyShimuraDatum {
    let all: Vec<usize> = (1..g.order()).collect();
    let k = g.subgroup(&all);
    ToyShimuraDatum::new(
        GammaGroupAction::trivial(gamma.clone(), g.clone()),
        GammaGroupAction::trivial(gamma.clone(), g.clone()),
        GroupHom::identity(g),
        SetAction::point(g.clone()),
        SetAction::point(gamma.clone()),
        k,
    )
    .expect("counterexample datum is valid")
}

/// At least `min_count` toy data: coinduced (Shapiro-trivial) families,
/// obstructed counterexamples, and fixed-seed random data built from
/// stable subgroups.
pub fn shimura_corpus(
    seed: u64,
    min_count: usize,
    limits: &Limits,
) -> Result<Vec<(String, ToyShimuraDatum)>> {
    let mut out: Vec<(String, ToyShimuraDatum)> = Vec::new();
    let z2 = FiniteGroup::cyclic(2);
    let z3 = FiniteGroup::cyclic(3);
    let v4 = FiniteGroup::klein_four();

    // coinduced data: the level obstruction dies by the coinduction, and
    // the diagonal H^1 vanishes when the orders are coprime
    for (gname, gamma) in [("Z2", &z2), ("Z3", &z3), ("V4", &v4)] {
        for (g0name, g0) in [
            ("Z2", FiniteGroup::cyclic(2)),
            ("Z3", FiniteGroup::cyclic(3)),
            ("Z4", FiniteGroup::cyclic(4)),
        ] {
            let coprime = num_gcd(gamma.order(), g0.order()) == 1;
            if !coprime && !(gname == "Z2" && g0name == "Z2") {
                continue;
            }
            if sat_pow(g0.order(), gamma.order() as u32) > limits.max_carrier as u64 {
                continue;
            }
            for (kname, k_gens) in [("full", vec![1usize]), ("trivial", vec![])] {
                let d = coinduced_shimura_datum(gamma, &g0, &k_gens, false, limits)?;
                out.push((format!("coinduced {gname} {g0name} K0={kname}"), d));
            }
        }
    }
    out.push((
        "coinduced Z2 Z3 K0=full, Y=G0".into(),
        coinduced_shimura_datum(&z2, &z3, &[1], true, limits)?,
    ));

    out.push(("obstructed Z2 on Z2".into(), obstructed_shimura_datum(&z2, &z2)));
    out.push((
        "obstructed Z2 on Z4".into(),
        obstructed_shimura_datum(&z2, &FiniteGroup::cyclic(4)),
    ));
    out.push(("obstructed V4 on Z2".into(), obstructed_shimura_datum(&v4, &z2)));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<NamedGroup> = groups_up_to_12()
        .into_iter()
        .filter(|g| g.group.order() >= 2)
        .collect();
    let gammas = standard_gammas();
    let mut tries = 0;
    while out.len() < min_count && tries < min_count * 100 {
        tries += 1;
        let ha_named = &pool[rng.gen_range(0..pool.len())];
        let gam = &gammas[rng.gen_range(0..gammas.len())];
        let actions = all_actions(&gam.group, &ha_named.group, 200);
        let (aname, ha_action) = &actions[rng.gen_range(0..actions.len())];
        let stable: Vec<Subgroup> = ha_named
            .group
            .all_subgroups()
            .into_iter()
            .filter(|s| {
                (0..gam.group.order())
                    .all(|gg| s.elements.iter().all(|&m| s.contains(ha_action.apply(gg, m))))
            })
            .collect();
        let hq_sub = stable[rng.gen_range(0..stable.len())].clone();
        let k = stable[rng.gen_range(0..stable.len())].clone();
        let hqk = (hq_sub.order() * k.order()) as u64;
        if hqk * hqk * (ha_named.group.order() as u64) > 2_000_000 {
            continue;
        }
        let hq_action = ha_action.restrict_module(&hq_sub)?;
        let embed = hq_sub.inclusion(&ha_named.group);
        let use_translation = rng.gen_bool(0.3) && hq_sub.order() <= 6;
        let (y_hq, y_gamma) = if use_translation {
            let beta_perms: Vec<Vec<usize>> = (0..gam.group.order())
                .map(|gg| (0..hq_sub.order()).map(|y| hq_action.apply(gg, y)).collect())
                .collect();
            (
                SetAction::left_translation(hq_sub.group.clone()),
                SetAction::new(gam.group.clone(), hq_sub.order(), beta_perms)?,
            )
        } else {
            (
                SetAction::point(hq_sub.group.clone()),
                SetAction::point(gam.group.clone()),
            )
        };
        let datum =
            ToyShimuraDatum::new(hq_action, ha_action.clone(), embed, y_hq, y_gamma, k)?;
        out.push((
            format!(
                "fuzz #{}: {} on {} ({aname}), |HQ|={}, |K|={}{}",
                out.len(),
                gam.name,
                ha_named.name,
                hq_sub.order(),
                datum.k.order(),
                if use_translation { ", Y=HQ" } else { "" }
            ),
            datum,
        ));
    }
    Ok(out)
}

fn num_gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_corpora_are_nonempty_and_labeled() {
        let lim = Limits::default();
        assert!(shapiro_corpus(&lim).len() > 100);
        assert!(p_group_corpus().len() > 40);
        assert_eq!(tower_corpus().len(), 4);
        assert_eq!(exactness_corpus(7, 25).len(), 25);
        assert!(torsor_actions_corpus().len() > 60);
    }

    #[test]
    fn exactness_corpus_is_deterministic() {
        let a = exactness_corpus(11, 10);
        let b = exactness_corpus(11, 10);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.label, y.label);
            assert_eq!(x.action, y.action);
            assert_eq!(x.k.elements, y.k.elements);
        }
        let c = exactness_corpus(12, 10);
        assert!(a.iter().zip(&c).any(|(x, y)| x.label != y.label));
    }

    #[test]
    fn beta_corpus_produces_valid_maps() {
        let cases = beta_corpus(3, 5).unwrap();
        assert_eq!(cases.len(), 5);
        for case in &cases {
            assert!(case.delta.check().is_empty(), "{}", case.label);
            assert!(case.epsilon.check().is_empty(), "{}", case.label);
        }
    }

    #[test]
    fn shimura_corpus_reaches_the_requested_size() {
        let lim = Limits::default();
        let corpus = shimura_corpus(5, 20, &lim).unwrap();
        assert!(corpus.len() >= 20);
    }

    #[test]
    fn coinduced_datum_obstructions_vanish() {
        let lim = Limits::default();
        let z2 = FiniteGroup::cyclic(2);
        let z3 = FiniteGroup::cyclic(3);
        let d = coinduced_shimura_datum(&z2, &z3, &[1], false, &lim).unwrap();
        let report = crate::shimura::fixed_point_comparison(&d, &lim).unwrap();
        assert!(report.both_obstructions_vanish());
        assert!(report.comparison.is_equivalence());
    }
}
