//! Finite groupoids with explicit hom-sets, functors between them, natural
//! isomorphisms, two-sided fiber products and decidable equivalence
//! checking. The composition convention is diagrammatic throughout:
//! `compose(f, g)` is "f then g", so in a one-object groupoid on a group G
//! it is the product g * f.

use std::collections::HashMap;
use std::sync::Arc;

use crate::action::SetAction;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// A finite groupoid: indexed objects, a global list of morphisms with
/// sources and targets, explicit (possibly empty) hom-sets per ordered
/// pair, identities and a composition table over composable pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    n_objects: usize,
    src: Vec<usize>,
    dst: Vec<usize>,
    homs: Vec<Vec<usize>>,
    identities: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
    inverses: Vec<usize>,
}

/// A named violation of the groupoid axioms, produced by `check_groupoid`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupoidViolation {
    MissingIdentity { object: usize },
    IdentityNotNeutral { morphism: usize },
    MissingComposite { first: usize, then: usize },
    CompositeWrongEnds { first: usize, then: usize },
    NotAssociative { first: usize, second: usize, third: usize },
    NotInvertible { morphism: usize },
}

impl FiniteGroupoid {
    /// Assembles a groupoid from raw data and computes inverses. Fails only
    /// on structural nonsense (bad indices); axiom violations are reported
    /// by `check_groupoid` instead so they can be inspected as data.
    pub fn new(
        n_objects: usize,
        ends: Vec<(usize, usize)>,
        identities: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Result<FiniteGroupoid> {
        let n_mors = ends.len();
        if identities.len() != n_objects {
            return Err(Error::MalformedInput("one identity per object".into()));
        }
        if ends.iter().any(|&(s, d)| s >= n_objects || d >= n_objects) {
            return Err(Error::MalformedInput("morphism endpoint out of range".into()));
        }
        if identities.iter().any(|&m| m >= n_mors) {
            return Err(Error::MalformedInput("identity id out of range".into()));
        }
        if compose
            .iter()
            .any(|(&(f, g), &h)| f >= n_mors || g >= n_mors || h >= n_mors)
        {
            return Err(Error::MalformedInput("compose entry out of range".into()));
        }
        let src: Vec<usize> = ends.iter().map(|&(s, _)| s).collect();
        let dst: Vec<usize> = ends.iter().map(|&(_, d)| d).collect();
        let mut homs = vec![Vec::new(); n_objects * n_objects];
        for m in 0..n_mors {
            homs[src[m] * n_objects + dst[m]].push(m);
        }
        // inverses: the unique g with f.g = id(src f) and g.f = id(dst f);
        // left at usize::MAX when absent so check_groupoid can name it
        let mut inverses = vec![usize::MAX; n_mors];
        for f in 0..n_mors {
            for &g in &homs[dst[f] * n_objects + src[f]] {
                if compose.get(&(f, g)) == Some(&identities[src[f]])
                    && compose.get(&(g, f)) == Some(&identities[dst[f]])
                {
                    inverses[f] = g;
                    break;
                }
            }
        }
        Ok(FiniteGroupoid {
            n_objects,
            src,
            dst,
            homs,
            identities,
            compose,
            inverses,
        })
    }

    pub fn n_objects(&self) -> usize {
        self.n_objects
    }

    pub fn n_morphisms(&self) -> usize {
        self.src.len()
    }

    pub fn source(&self, m: usize) -> usize {
        self.src[m]
    }

    pub fn target(&self, m: usize) -> usize {
        self.dst[m]
    }

    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        &self.homs[x * self.n_objects + y]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    /// f then g; panics if the pair is not composable (callers only compose
    /// matched ends).
    pub fn then(&self, f: usize, g: usize) -> usize {
        *self
            .compose
            .get(&(f, g))
            .unwrap_or_else(|| panic!("morphisms {f} and {g} are not composable"))
    }

    pub fn inverse(&self, m: usize) -> usize {
        let i = self.inverses[m];
        assert!(i != usize::MAX, "morphism {m} has no inverse");
        i
    }

    pub fn morphisms(&self) -> std::ops::Range<usize> {
        0..self.src.len()
    }

    /// Exhaustive axiom scan. An empty list means the data is a groupoid.
    pub fn check_groupoid(&self) -> Vec<GroupoidViolation> {
        let mut out = Vec::new();
        for x in 0..self.n_objects {
            let id = self.identities[x];
            if self.src[id] != x || self.dst[id] != x {
                out.push(GroupoidViolation::MissingIdentity { object: x });
            }
        }
        for m in self.morphisms() {
            let (s, d) = (self.src[m], self.dst[m]);
            let left = self.compose.get(&(self.identities[s], m));
            let right = self.compose.get(&(m, self.identities[d]));
            if left != Some(&m) || right != Some(&m) {
                out.push(GroupoidViolation::IdentityNotNeutral { morphism: m });
            }
        }
        for f in self.morphisms() {
            for g in self.morphisms() {
                if self.dst[f] != self.src[g] {
                    continue;
                }
                match self.compose.get(&(f, g)) {
                    None => out.push(GroupoidViolation::MissingComposite { first: f, then: g }),
                    Some(&h) => {
                        if self.src[h] != self.src[f] || self.dst[h] != self.dst[g] {
                            out.push(GroupoidViolation::CompositeWrongEnds { first: f, then: g });
                        }
                    }
                }
            }
        }
        for f in self.morphisms() {
            for g in self.morphisms() {
                if self.dst[f] != self.src[g] {
                    continue;
                }
                let fg = match self.compose.get(&(f, g)) {
                    Some(&h) => h,
                    None => continue,
                };
                for h in self.morphisms() {
                    if self.dst[g] != self.src[h] {
                        continue;
                    }
                    let gh = match self.compose.get(&(g, h)) {
                        Some(&k) => k,
                        None => continue,
                    };
                    if self.compose.get(&(fg, h)) != self.compose.get(&(f, gh)) {
                        out.push(GroupoidViolation::NotAssociative {
                            first: f,
                            second: g,
                            third: h,
                        });
                    }
                }
            }
        }
        for m in self.morphisms() {
            if self.inverses[m] == usize::MAX {
                out.push(GroupoidViolation::NotInvertible { morphism: m });
            }
        }
        out
    }

    /// The one-object groupoid on a group: morphisms are group elements and
    /// "f then g" is the product g * f.
    pub fn delooping(group: &FiniteGroup) -> FiniteGroupoid {
        let n = group.order();
        let ends = vec![(0usize, 0usize); n];
        let mut compose = HashMap::with_capacity(n * n);
        for f in 0..n {
            for g in 0..n {
                compose.insert((f, g), group.mul(g, f));
            }
        }
        FiniteGroupoid::new(1, ends, vec![0], compose).expect("delooping is well formed")
    }

    /// The discrete groupoid: only identities.
    pub fn discrete(n_objects: usize) -> FiniteGroupoid {
        let ends = (0..n_objects).map(|x| (x, x)).collect();
        let compose = (0..n_objects).map(|x| ((x, x), x)).collect();
        FiniteGroupoid::new(n_objects, ends, (0..n_objects).collect(), compose)
            .expect("discrete groupoid is well formed")
    }

    /// Hom(x, x) as a finite group, re-indexed with the identity first and
    /// the remaining morphisms in id order. Returns the group and the list
    /// of morphism ids in group-element order.
    pub fn automorphism_group(&self, x: usize) -> (FiniteGroup, Vec<usize>) {
        let mut mors: Vec<usize> = self.hom(x, x).to_vec();
        mors.sort_unstable();
        let id = self.identities[x];
        let pos = mors.iter().position(|&m| m == id).expect("identity present");
        mors.swap(0, pos);
        let index: HashMap<usize, usize> =
            mors.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let n = mors.len();
        let mut table = vec![0u32; n * n];
        for (a, &ma) in mors.iter().enumerate() {
            for (b, &mb) in mors.iter().enumerate() {
                // group product a * b acts as "b then a"
                table[a * n + b] = index[&self.then(mb, ma)] as u32;
            }
        }
        let group = FiniteGroup::from_table(n, table).expect("hom-set is a group");
        (group, mors)
    }
}

/// The action groupoid of a group acting on a set: objects are the points,
/// Hom(x, y) = {g : g.x = y}, composition is the group operation.
#[derive(Debug, Clone)]
pub struct ActionGroupoid {
    pub groupoid: Arc<FiniteGroupoid>,
    pub action: SetAction,
    /// morphism id -> (group element, source point)
    pub labels: Vec<(usize, usize)>,
    mor_index: HashMap<(usize, usize), usize>,
}

impl ActionGroupoid {
    pub fn new(action: SetAction) -> ActionGroupoid {
        let g_ord = action.group.order();
        let n = action.degree;
        let mut ends = Vec::with_capacity(g_ord * n);
        let mut labels = Vec::with_capacity(g_ord * n);
        let mut mor_index = HashMap::with_capacity(g_ord * n);
        for x in 0..n {
            for g in 0..g_ord {
                let id = labels.len();
                ends.push((x, action.apply(g, x)));
                labels.push((g, x));
                mor_index.insert((g, x), id);
            }
        }
        let identities: Vec<usize> = (0..n).map(|x| mor_index[&(0, x)]).collect();
        let mut compose = HashMap::new();
        for (m, &(g, x)) in labels.iter().enumerate() {
            let gx = action.apply(g, x);
            for h in 0..g_ord {
                let m2 = mor_index[&(h, gx)];
                let hg = action.group.mul(h, g);
                compose.insert((m, m2), mor_index[&(hg, x)]);
            }
        }
        let groupoid = FiniteGroupoid::new(n, ends, identities, compose)
            .expect("action groupoid is well formed");
        ActionGroupoid {
            groupoid: Arc::new(groupoid),
            action,
            labels,
            mor_index,
        }
    }

    pub fn morphism(&self, g: usize, x: usize) -> usize {
        self.mor_index[&(g, x)]
    }
}

/// The one-object groupoid on G realized as the action groupoid of G on a
/// point, so that classifying-stack computations share the action groupoid
/// plumbing.
pub fn classifying_groupoid(group: &FiniteGroup) -> ActionGroupoid {
    ActionGroupoid::new(SetAction::point(group.clone()))
}

/// A functor between finite groupoids, stored by its object and morphism
/// image tables.
#[derive(Debug, Clone, PartialEq)]
pub struct GFunctor {
    pub source: Arc<FiniteGroupoid>,
    pub target: Arc<FiniteGroupoid>,
    pub obj_map: Vec<usize>,
    pub mor_map: Vec<usize>,
}

impl GFunctor {
    pub fn new(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        obj_map: Vec<usize>,
        mor_map: Vec<usize>,
    ) -> Result<GFunctor> {
        let f = GFunctor { source, target, obj_map, mor_map };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        if self.obj_map.len() != self.source.n_objects()
            || self.mor_map.len() != self.source.n_morphisms()
        {
            return Err(Error::MalformedInput("functor tables have wrong length".into()));
        }
        for m in self.source.morphisms() {
            let fm = self.mor_map[m];
            if fm >= self.target.n_morphisms()
                || self.target.source(fm) != self.obj_map[self.source.source(m)]
                || self.target.target(fm) != self.obj_map[self.source.target(m)]
            {
                return Err(Error::MalformedInput(format!(
                    "functor breaks sources/targets at morphism {m}"
                )));
            }
        }
        for x in 0..self.source.n_objects() {
            if self.mor_map[self.source.identity(x)] != self.target.identity(self.obj_map[x]) {
                return Err(Error::MalformedInput(format!(
                    "functor breaks the identity at object {x}"
                )));
            }
        }
        for f in self.source.morphisms() {
            for g in self.source.morphisms() {
                if self.source.target(f) != self.source.source(g) {
                    continue;
                }
                let lhs = self.mor_map[self.source.then(f, g)];
                let rhs = self.target.then(self.mor_map[f], self.mor_map[g]);
                if lhs != rhs {
                    return Err(Error::MalformedInput(format!(
                        "functor breaks composition at ({f}, {g})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn identity(groupoid: Arc<FiniteGroupoid>) -> GFunctor {
        GFunctor {
            obj_map: (0..groupoid.n_objects()).collect(),
            mor_map: (0..groupoid.n_morphisms()).collect(),
            source: groupoid.clone(),
            target: groupoid,
        }
    }

    #[inline]
    pub fn on_obj(&self, x: usize) -> usize {
        self.obj_map[x]
    }

    #[inline]
    pub fn on_mor(&self, m: usize) -> usize {
        self.mor_map[m]
    }

    /// self then other.
    pub fn compose(&self, other: &GFunctor) -> GFunctor {
        assert!(
            Arc::ptr_eq(&self.target, &other.source) || self.target == other.source,
            "functors are not composable"
        );
        GFunctor {
            source: self.source.clone(),
            target: other.target.clone(),
            obj_map: self.obj_map.iter().map(|&x| other.obj_map[x]).collect(),
            mor_map: self.mor_map.iter().map(|&m| other.mor_map[m]).collect(),
        }
    }
}

/// A natural isomorphism between parallel functors, stored by its
/// per-object components in the target groupoid. In a groupoid every
/// natural transformation is invertible, so validation only checks
/// endpoints and naturality.
#[derive(Debug, Clone, PartialEq)]
pub struct NatIso {
    pub components: Vec<usize>,
}

impl NatIso {
    pub fn new(source: &GFunctor, target: &GFunctor, components: Vec<usize>) -> Result<NatIso> {
        let iso = NatIso { components };
        iso.validate(source, target)?;
        Ok(iso)
    }

    pub fn identity(f: &GFunctor) -> NatIso {
        NatIso {
            components: (0..f.source.n_objects())
                .map(|x| f.target.identity(f.obj_map[x]))
                .collect(),
        }
    }

    pub fn validate(&self, source: &GFunctor, target: &GFunctor) -> Result<()> {
        let base = &source.source;
        let cod = &source.target;
        if self.components.len() != base.n_objects() {
            return Err(Error::MalformedInput("one component per object".into()));
        }
        for x in 0..base.n_objects() {
            let c = self.components[x];
            if cod.source(c) != source.obj_map[x] || cod.target(c) != target.obj_map[x] {
                return Err(Error::MalformedInput(format!(
                    "component at {x} has wrong endpoints"
                )));
            }
        }
        for m in base.morphisms() {
            let x = base.source(m);
            let y = base.target(m);
            // F(m) then c_y == c_x then G(m)
            let lhs = cod.then(source.mor_map[m], self.components[y]);
            let rhs = cod.then(self.components[x], target.mor_map[m]);
            if lhs != rhs {
                return Err(Error::MalformedInput(format!(
                    "naturality fails at morphism {m}"
                )));
            }
        }
        Ok(())
    }

    pub fn inverse(&self, cod: &FiniteGroupoid) -> NatIso {
        NatIso {
            components: self.components.iter().map(|&c| cod.inverse(c)).collect(),
        }
    }

    #[inline]
    pub fn at(&self, x: usize) -> usize {
        self.components[x]
    }
}

/// Searches for a natural isomorphism between parallel functors by
/// backtracking over per-object components with full naturality
/// verification. Returns the first one in component order.
pub fn natural_isomorphism(f: &GFunctor, g: &GFunctor) -> Option<NatIso> {
    assert!(f.source == g.source && f.target == g.target, "functors not parallel");
    let base = &f.source;
    let cod = &f.target;
    let n = base.n_objects();
    let mut components = vec![usize::MAX; n];

    fn consistent(
        base: &FiniteGroupoid,
        cod: &FiniteGroupoid,
        f: &GFunctor,
        g: &GFunctor,
        components: &[usize],
        upto: usize,
    ) -> bool {
        for m in base.morphisms() {
            let x = base.source(m);
            let y = base.target(m);
            if x > upto || y > upto {
                continue;
            }
            if cod.then(f.mor_map[m], components[y]) != cod.then(components[x], g.mor_map[m]) {
                return false;
            }
        }
        true
    }

    fn go(
        base: &FiniteGroupoid,
        cod: &FiniteGroupoid,
        f: &GFunctor,
        g: &GFunctor,
        components: &mut Vec<usize>,
        x: usize,
    ) -> bool {
        if x == base.n_objects() {
            return true;
        }
        let candidates: Vec<usize> = cod.hom(f.obj_map[x], g.obj_map[x]).to_vec();
        for c in candidates {
            components[x] = c;
            if consistent(base, cod, f, g, components, x)
                && go(base, cod, f, g, components, x + 1)
            {
                return true;
            }
        }
        components[x] = usize::MAX;
        false
    }

    if go(base, cod, f, g, &mut components, 0) {
        Some(NatIso { components })
    } else {
        None
    }
}

/// The verdict of `equivalence_check`, with witnesses for the failures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceVerdict {
    pub fully_faithful: bool,
    /// an ordered pair of source objects where the hom map is not bijective
    pub ff_witness: Option<(usize, usize)>,
    pub essentially_surjective: bool,
    /// a target object isomorphic to no image object
    pub es_witness: Option<usize>,
}

impl EquivalenceVerdict {
    pub fn is_equivalence(&self) -> bool {
        self.fully_faithful && self.essentially_surjective
    }
}

/// Decides whether a functor is an equivalence: every hom-set map must be
/// bijective and every target object isomorphic to an image object.
pub fn equivalence_check(f: &GFunctor) -> EquivalenceVerdict {
    let src = &f.source;
    let tgt = &f.target;
    let mut fully_faithful = true;
    let mut ff_witness = None;
    'pairs: for x in 0..src.n_objects() {
        for y in 0..src.n_objects() {
            let dom = src.hom(x, y);
            let cod = tgt.hom(f.obj_map[x], f.obj_map[y]);
            let mut images: Vec<usize> = dom.iter().map(|&m| f.mor_map[m]).collect();
            images.sort_unstable();
            let distinct = {
                let mut v = images.clone();
                v.dedup();
                v.len()
            };
            if distinct != dom.len() || distinct != cod.len() {
                fully_faithful = false;
                ff_witness = Some((x, y));
                break 'pairs;
            }
        }
    }
    let mut essentially_surjective = true;
    let mut es_witness = None;
    for t in 0..tgt.n_objects() {
        let hit = (0..src.n_objects()).any(|x| !tgt.hom(f.obj_map[x], t).is_empty());
        if !hit {
            essentially_surjective = false;
            es_witness = Some(t);
            break;
        }
    }
    EquivalenceVerdict {
        fully_faithful,
        ff_witness,
        essentially_surjective,
        es_witness,
    }
}

/// Isomorphism classes of a groupoid with the automorphism group of the
/// least representative of each class.
#[derive(Debug)]
pub struct IsoClasses {
    /// sorted object lists, ordered by least member
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// automorphism group of the least member of each class
    pub automorphism_groups: Vec<FiniteGroup>,
}

pub fn iso_classes(g: &FiniteGroupoid) -> IsoClasses {
    let n = g.n_objects();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let cid = classes.len();
        let members: Vec<usize> = (0..n).filter(|&y| !g.hom(x, y).is_empty()).collect();
        for &y in &members {
            class_of[y] = cid;
        }
        classes.push(members);
    }
    let automorphism_groups = classes
        .iter()
        .map(|cls| g.automorphism_group(cls[0]).0)
        .collect();
    IsoClasses { classes, class_of, automorphism_groups }
}

/// The full subgroupoid on the least representative of every isomorphism
/// class, with its inclusion functor.
pub fn skeleton(g: &Arc<FiniteGroupoid>) -> (Arc<FiniteGroupoid>, GFunctor) {
    let classes = iso_classes(g);
    let reps: Vec<usize> = classes.classes.iter().map(|c| c[0]).collect();
    subgroupoid(g, &reps)
}

/// The full subgroupoid on a set of objects, with its inclusion.
pub fn subgroupoid(g: &Arc<FiniteGroupoid>, objects: &[usize]) -> (Arc<FiniteGroupoid>, GFunctor) {
    let obj_index: HashMap<usize, usize> =
        objects.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut keep: Vec<usize> = Vec::new();
    let mut mor_index = HashMap::new();
    for m in g.morphisms() {
        if obj_index.contains_key(&g.source(m)) && obj_index.contains_key(&g.target(m)) {
            mor_index.insert(m, keep.len());
            keep.push(m);
        }
    }
    let ends: Vec<(usize, usize)> = keep
        .iter()
        .map(|&m| (obj_index[&g.source(m)], obj_index[&g.target(m)]))
        .collect();
    let identities: Vec<usize> = objects.iter().map(|&x| mor_index[&g.identity(x)]).collect();
    let mut compose = HashMap::new();
    for (a, &ma) in keep.iter().enumerate() {
        for (b, &mb) in keep.iter().enumerate() {
            if g.target(ma) == g.source(mb) {
                compose.insert((a, b), mor_index[&g.then(ma, mb)]);
            }
        }
    }
    let sub = Arc::new(
        FiniteGroupoid::new(objects.len(), ends, identities, compose)
            .expect("full subgroupoid is well formed"),
    );
    let inclusion = GFunctor {
        source: sub.clone(),
        target: g.clone(),
        obj_map: objects.to_vec(),
        mor_map: keep,
    };
    (sub, inclusion)
}

/// The 2-fiber product of F: A -> C and G: B -> C. Objects are triples
/// (a, b, f) with f: F(a) -> G(b); morphisms are pairs making the square
/// commute.
#[derive(Debug, Clone)]
pub struct FiberProductGroupoid {
    pub groupoid: Arc<FiniteGroupoid>,
    /// object id -> (object of A, object of B, morphism of C)
    pub objects: Vec<(usize, usize, usize)>,
    /// morphism id -> (morphism of A, morphism of B)
    pub mor_labels: Vec<(usize, usize)>,
    pub left_projection: GFunctor,
    pub right_projection: GFunctor,
    obj_index: HashMap<(usize, usize, usize), usize>,
    mor_index: HashMap<(usize, (usize, usize)), usize>,
}

impl FiberProductGroupoid {
    pub fn object_index(&self, a: usize, b: usize, f: usize) -> Option<usize> {
        self.obj_index.get(&(a, b, f)).copied()
    }

    pub fn morphism_index(&self, source: usize, pair: (usize, usize)) -> Option<usize> {
        self.mor_index.get(&(source, pair)).copied()
    }
}

pub fn two_fiber_product(f: &GFunctor, g: &GFunctor) -> Result<FiberProductGroupoid> {
    if f.target != g.target {
        return Err(Error::MalformedInput("fiber product needs a common base".into()));
    }
    let a_gpd = &f.source;
    let b_gpd = &g.source;
    let c_gpd = &f.target;

    let mut objects = Vec::new();
    let mut obj_index = HashMap::new();
    for a in 0..a_gpd.n_objects() {
        for b in 0..b_gpd.n_objects() {
            for &iso in c_gpd.hom(f.obj_map[a], g.obj_map[b]) {
                obj_index.insert((a, b, iso), objects.len());
                objects.push((a, b, iso));
            }
        }
    }
    let mut ends = Vec::new();
    let mut mor_labels = Vec::new();
    let mut mor_index = HashMap::new();
    for (oi, &(a, b, iso)) in objects.iter().enumerate() {
        // every pair (X, Y) out of (a, b) determines a unique target triple
        // through the commuting square: iso then G(Y) = F(X) then iso'
        for a2 in 0..a_gpd.n_objects() {
            for &x in a_gpd.hom(a, a2) {
                for b2 in 0..b_gpd.n_objects() {
                    for &y in b_gpd.hom(b, b2) {
                        let long = c_gpd.then(iso, g.mor_map[y]);
                        let iso2 = c_gpd.then(c_gpd.inverse(f.mor_map[x]), long);
                        let o2 = obj_index[&(a2, b2, iso2)];
                        mor_index.insert((oi, (x, y)), mor_labels.len());
                        ends.push((oi, o2));
                        mor_labels.push((x, y));
                    }
                }
            }
        }
    }
    let identities: Vec<usize> = objects
        .iter()
        .enumerate()
        .map(|(oi, &(a, b, _))| mor_index[&(oi, (a_gpd.identity(a), b_gpd.identity(b)))])
        .collect();
    let mut compose = HashMap::new();
    for (m, &(x, y)) in mor_labels.iter().enumerate() {
        let mid_obj = ends[m].1;
        for (m2, &(x2, y2)) in mor_labels.iter().enumerate() {
            if ends[m2].0 != mid_obj {
                continue;
            }
            let xc = a_gpd.then(x, x2);
            let yc = b_gpd.then(y, y2);
            compose.insert((m, m2), mor_index[&(ends[m].0, (xc, yc))]);
        }
    }
    let groupoid = Arc::new(FiniteGroupoid::new(objects.len(), ends, identities, compose)?);
    let left_projection = GFunctor::new(
        groupoid.clone(),
        a_gpd.clone(),
        objects.iter().map(|&(a, _, _)| a).collect(),
        mor_labels.iter().map(|&(x, _)| x).collect(),
    )?;
    let right_projection = GFunctor::new(
        groupoid.clone(),
        b_gpd.clone(),
        objects.iter().map(|&(_, b, _)| b).collect(),
        mor_labels.iter().map(|&(_, y)| y).collect(),
    )?;
    Ok(FiberProductGroupoid {
        groupoid,
        objects,
        mor_labels,
        left_projection,
        right_projection,
        obj_index,
        mor_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    #[test]
    fn delooping_passes_the_axiom_scan() {
        let g = FiniteGroupoid::delooping(&FiniteGroup::symmetric(3));
        assert!(g.check_groupoid().is_empty());
        assert_eq!(g.n_objects(), 1);
        assert_eq!(g.n_morphisms(), 6);
    }

    #[test]
    fn broken_table_is_reported() {
        // a two-object graph with a morphism that has no inverse
        let ends = vec![(0, 0), (1, 1), (0, 1)];
        let mut compose = HashMap::new();
        compose.insert((0, 0), 0);
        compose.insert((1, 1), 1);
        compose.insert((0, 2), 2);
        compose.insert((2, 1), 2);
        let g = FiniteGroupoid::new(2, ends, vec![0, 1], compose).unwrap();
        let violations = g.check_groupoid();
        assert!(violations
            .iter()
            .any(|v| matches!(v, GroupoidViolation::NotInvertible { morphism: 2 })));
    }

    #[test]
    fn action_groupoid_of_trivial_group_is_discrete() {
        let a = SetAction::trivial(FiniteGroup::trivial(), 4);
        let ag = ActionGroupoid::new(a);
        assert!(ag.groupoid.check_groupoid().is_empty());
        assert_eq!(ag.groupoid.n_morphisms(), 4);
        let classes = iso_classes(&ag.groupoid);
        assert_eq!(classes.classes.len(), 4);
        assert!(classes.automorphism_groups.iter().all(|g| g.order() == 1));
    }

    #[test]
    fn action_groupoid_on_a_point_is_the_delooping() {
        let ag = classifying_groupoid(&FiniteGroup::symmetric(3));
        assert!(ag.groupoid.check_groupoid().is_empty());
        assert_eq!(ag.groupoid.n_objects(), 1);
        let (aut, _) = ag.groupoid.automorphism_group(0);
        assert!(aut.is_isomorphic_to(&FiniteGroup::symmetric(3)));
    }

    #[test]
    fn z2_swapping_two_points_is_connected_with_trivial_aut() {
        let z2 = FiniteGroup::cyclic(2);
        let swap = SetAction::new(z2, 2, vec![vec![0, 1], vec![1, 0]]).unwrap();
        let ag = ActionGroupoid::new(swap);
        assert!(ag.groupoid.check_groupoid().is_empty());
        assert_eq!(ag.groupoid.n_morphisms(), 4);
        assert_eq!(ag.groupoid.hom(0, 1).len(), 1);
        let classes = iso_classes(&ag.groupoid);
        assert_eq!(classes.classes.len(), 1);
        assert_eq!(classes.automorphism_groups[0].order(), 1);
    }

    #[test]
    fn iso_classes_of_z2_inverting_z3_as_a_set() {
        let z2 = FiniteGroup::cyclic(2);
        let inv = SetAction::new(z2, 3, vec![vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
        let ag = ActionGroupoid::new(inv);
        let classes = iso_classes(&ag.groupoid);
        assert_eq!(classes.classes, vec![vec![0], vec![1, 2]]);
        assert_eq!(classes.automorphism_groups[0].order(), 2);
        assert_eq!(classes.automorphism_groups[1].order(), 1);
    }

    #[test]
    fn identity_functor_is_an_equivalence() {
        let g = Arc::new(FiniteGroupoid::delooping(&FiniteGroup::cyclic(4)));
        let id = GFunctor::identity(g);
        let verdict = equivalence_check(&id);
        assert!(verdict.is_equivalence());
    }

    #[test]
    fn skeleton_inclusion_is_an_equivalence() {
        let z2 = FiniteGroup::cyclic(2);
        let inv = SetAction::new(z2, 3, vec![vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
        let ag = ActionGroupoid::new(inv);
        let (_, inclusion) = skeleton(&ag.groupoid);
        assert!(equivalence_check(&inclusion).is_equivalence());
    }

    #[test]
    fn collapse_to_trivial_group_is_not_fully_faithful() {
        let bz2 = Arc::new(FiniteGroupoid::delooping(&FiniteGroup::cyclic(2)));
        let pt = Arc::new(FiniteGroupoid::delooping(&FiniteGroup::trivial()));
        let collapse = GFunctor::new(bz2, pt, vec![0], vec![0, 0]).unwrap();
        let verdict = equivalence_check(&collapse);
        assert!(!verdict.fully_faithful);
        assert_eq!(verdict.ff_witness, Some((0, 0)));
        assert!(verdict.essentially_surjective);
    }

    #[test]
    fn fiber_product_against_identity_is_equivalent_to_source() {
        let g = Arc::new(FiniteGroupoid::delooping(&FiniteGroup::cyclic(3)));
        let id = GFunctor::identity(g.clone());
        let f = GFunctor::identity(g);
        let fp = two_fiber_product(&f, &id).unwrap();
        assert!(fp.groupoid.check_groupoid().is_empty());
        // projection to the source is an equivalence (f is tautological)
        assert!(equivalence_check(&fp.left_projection).is_equivalence());
    }

    #[test]
    fn fiber_product_of_constant_functors_is_a_product() {
        // two discrete one-object groupoids over a discrete base
        let pt = Arc::new(FiniteGroupoid::discrete(1));
        let a = Arc::new(FiniteGroupoid::discrete(2));
        let b = Arc::new(FiniteGroupoid::discrete(3));
        let fa = GFunctor::new(a, pt.clone(), vec![0, 0], vec![0, 0]).unwrap();
        let fb = GFunctor::new(b, pt, vec![0, 0, 0], vec![0, 0, 0]).unwrap();
        let fp = two_fiber_product(&fa, &fb).unwrap();
        assert_eq!(fp.groupoid.n_objects(), 6);
        assert!(fp.groupoid.check_groupoid().is_empty());
    }

    #[test]
    fn double_coset_count_in_bh_to_bg_fiber_product() {
        // BH -> BG <- BH for H <= G: iso classes of the fiber product
        // biject with the double cosets H \ G / H
        let s3 = FiniteGroup::symmetric(3);
        let transposition = s3.elements().find(|&g| s3.element_order(g) == 2).unwrap();
        let h = s3.subgroup(&[transposition]);
        let bg = Arc::new(FiniteGroupoid::delooping(&s3));
        let bh = Arc::new(FiniteGroupoid::delooping(&h.group));
        let incl = GFunctor::new(
            bh.clone(),
            bg.clone(),
            vec![0],
            (0..h.order()).map(|m| h.embed(m)).collect(),
        )
        .unwrap();
        let fp = two_fiber_product(&incl, &incl).unwrap();
        let classes = iso_classes(&fp.groupoid);

        // oracle: enumerate double cosets directly
        let mut seen = vec![false; s3.order()];
        let mut double_cosets = 0;
        for g in s3.elements() {
            if seen[g] {
                continue;
            }
            double_cosets += 1;
            for &h1 in &h.elements {
                for &h2 in &h.elements {
                    seen[s3.mul(s3.mul(h1, g), h2)] = true;
                }
            }
        }
        assert_eq!(classes.classes.len(), double_cosets);
    }

    #[test]
    fn natural_isomorphism_search_finds_conjugation() {
        // two functors BZ3 -> BS3 given by conjugate embeddings
        let z3 = FiniteGroup::cyclic(3);
        let s3 = FiniteGroup::symmetric(3);
        let c3 = s3.elements().find(|&g| s3.element_order(g) == 3).unwrap();
        let bz3 = Arc::new(FiniteGroupoid::delooping(&z3));
        let bs3 = Arc::new(FiniteGroupoid::delooping(&s3));
        let f = GFunctor::new(
            bz3.clone(),
            bs3.clone(),
            vec![0],
            vec![0, c3, s3.mul(c3, c3)],
        )
        .unwrap();
        let t = s3.elements().find(|&g| s3.element_order(g) == 2).unwrap();
        let conj = GFunctor::new(
            bz3,
            bs3,
            vec![0],
            vec![0, s3.conj(t, c3), s3.conj(t, s3.mul(c3, c3))],
        )
        .unwrap();
        assert!(natural_isomorphism(&f, &conj).is_some());
    }

    #[test]
    fn automorphism_group_extraction_matches_stabilizer() {
        let z4 = FiniteGroup::cyclic(4);
        // Z/4 acting on Z/2 cosets: stabilizer of a point is {0, 2}
        let perms: Vec<Vec<usize>> = (0..4).map(|g| vec![g % 2, (g + 1) % 2]).collect();
        let act = SetAction::new(z4, 2, perms).unwrap();
        let ag = ActionGroupoid::new(act);
        let (aut, _) = ag.groupoid.automorphism_group(0);
        assert_eq!(aut.order(), 2);
    }
}
