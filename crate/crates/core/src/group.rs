//! Finite groups as indexed Cayley tables.
//!
//! Every group in this crate is a table over element indices `0..order`
//! with the identity pinned at index 0. That makes all downstream checks
//! exhaustive and branch-free: associativity scans, cocycle verification
//! and fixed-point comparisons are plain table lookups.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};

/// A finite group given by its full composition table.
///
/// `table[a * order + b]` is the index of `a * b`. Index 0 is always the
/// identity and `inv[a]` the two-sided inverse of `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
}

impl FiniteGroup {
    /// Builds a group from a raw row-major table, verifying all axioms.
    pub fn from_table(order: usize, table: Vec<u32>) -> Result<FiniteGroup> {
        if order == 0 {
            return Err(Error::MalformedInput("group of order 0".into()));
        }
        if table.len() != order * order {
            return Err(Error::MalformedInput(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if table.iter().any(|&x| x as usize >= order) {
            return Err(Error::MalformedInput("table entry out of range".into()));
        }
        let inv = compute_inverses(order, &table)?;
        let g = FiniteGroup { order, table, inv };
        g.validate()?;
        Ok(g)
    }

    /// Builds a group from a table known to be valid (internal constructors).
    /// Inverse computation still checks that each element has one.
    fn from_table_unchecked(order: usize, table: Vec<u32>) -> FiniteGroup {
        let inv = compute_inverses(order, &table).expect("internal table must be a group");
        FiniteGroup { order, table, inv }
    }

    /// Builds a group whose associativity is guaranteed by construction
    /// (coordinatewise products of validated groups). Runs the quadratic
    /// checks only, so large carriers stay affordable.
    pub(crate) fn from_table_trusted(order: usize, table: Vec<u32>) -> Result<FiniteGroup> {
        if order == 0 || table.len() != order * order {
            return Err(Error::MalformedInput("bad table shape".into()));
        }
        let inv = compute_inverses(order, &table)?;
        let g = FiniteGroup { order, table, inv };
        for a in 0..order {
            if g.mul(0, a) != a || g.mul(a, 0) != a {
                return Err(Error::MalformedInput("index 0 is not the identity".into()));
            }
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// a * b * a^{-1}
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.inv(a))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Full axiom scan: identity at 0, Latin square, associativity, inverses.
    /// Cost is O(order^3); call it on anything parsed from the outside, and
    /// on constructed groups inside tests.
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(Error::MalformedInput(format!(
                    "index 0 is not a two-sided identity at {a}"
                )));
            }
        }
        // Latin square: every row and column is a permutation.
        let mut seen = vec![false; n];
        for a in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                let c = self.mul(a, b);
                if seen[c] {
                    return Err(Error::MalformedInput(format!("row {a} repeats {c}")));
                }
                seen[c] = true;
            }
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                let c = self.mul(b, a);
                if seen[c] {
                    return Err(Error::MalformedInput(format!("column {a} repeats {c}")));
                }
                seen[c] = true;
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::MalformedInput(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        for a in 0..n {
            let i = self.inv(a);
            if self.mul(a, i) != 0 || self.mul(i, a) != 0 {
                return Err(Error::MalformedInput(format!("bad inverse for {a}")));
            }
        }
        Ok(())
    }

    /// Cyclic group of order n, written additively on indices.
    pub fn cyclic(n: usize) -> FiniteGroup {
        let table = (0..n)
            .flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32))
            .collect();
        FiniteGroup::from_table_unchecked(n, table)
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::cyclic(1)
    }

    /// Direct product; element (a, b) has index `a * other.order + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let n = self.order * other.order;
        let mut table = vec![0u32; n * n];
        for a1 in 0..self.order {
            for b1 in 0..other.order {
                let x = a1 * other.order + b1;
                for a2 in 0..self.order {
                    for b2 in 0..other.order {
                        let y = a2 * other.order + b2;
                        table[x * n + y] =
                            (self.mul(a1, a2) * other.order + other.mul(b1, b2)) as u32;
                    }
                }
            }
        }
        FiniteGroup::from_table_unchecked(n, table)
    }

    pub fn klein_four() -> FiniteGroup {
        let z2 = FiniteGroup::cyclic(2);
        z2.direct_product(&z2)
    }

    /// The group generated by permutations of `0..degree`. Elements are
    /// indexed in lexicographic order of their permutation word, so the
    /// identity lands at index 0 and the indexing is deterministic.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Result<FiniteGroup> {
        for g in gens {
            if g.len() != degree || !is_permutation(g) {
                return Err(Error::MalformedInput(format!(
                    "generator {g:?} is not a permutation of 0..{degree}"
                )));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
        seen.insert(id.clone());
        queue.push_back(id);
        while let Some(p) = queue.pop_front() {
            for g in gens {
                // apply p first, then g
                let q: Vec<usize> = (0..degree).map(|i| g[p[i]]).collect();
                if seen.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
        let mut elems: Vec<Vec<usize>> = seen.into_iter().collect();
        elems.sort();
        let index: HashMap<&[usize], usize> =
            elems.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for (a, pa) in elems.iter().enumerate() {
            for (b, pb) in elems.iter().enumerate() {
                // product "a * b" acts by b first, then a
                let prod: Vec<usize> = (0..degree).map(|i| pa[pb[i]]).collect();
                table[a * n + b] = index[prod.as_slice()] as u32;
            }
        }
        Ok(FiniteGroup::from_table_unchecked(n, table))
    }

    pub fn symmetric(degree: usize) -> FiniteGroup {
        if degree <= 1 {
            return FiniteGroup::trivial();
        }
        let swap: Vec<usize> = {
            let mut v: Vec<usize> = (0..degree).collect();
            v.swap(0, 1);
            v
        };
        let cycle: Vec<usize> = (0..degree).map(|i| (i + 1) % degree).collect();
        FiniteGroup::from_permutations(degree, &[swap, cycle]).expect("valid generators")
    }

    pub fn dihedral(n: usize) -> FiniteGroup {
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        FiniteGroup::from_permutations(n, &[rot, refl]).expect("valid generators")
    }

    pub fn alternating4() -> FiniteGroup {
        FiniteGroup::from_permutations(4, &[vec![1, 0, 3, 2], vec![1, 2, 0, 3]])
            .expect("valid generators")
    }

    /// Quaternion group of order 8: {1, -1, i, -i, j, -j, k, -k}.
    pub fn quaternion() -> FiniteGroup {
        // encode q = (s, u) with sign s in {0,1} and unit u in {1,i,j,k}
        // index = u * 2 + s, so 1 = 0, -1 = 1, i = 2, -i = 3, ...
        let unit_mul = |a: usize, b: usize| -> (usize, usize) {
            // returns (sign flip, unit) for a*b over units 0=1,1=i,2=j,3=k
            match (a, b) {
                (0, x) => (0, x),
                (x, 0) => (0, x),
                (1, 1) => (1, 0),
                (2, 2) => (1, 0),
                (3, 3) => (1, 0),
                (1, 2) => (0, 3),
                (2, 1) => (1, 3),
                (2, 3) => (0, 1),
                (3, 2) => (1, 1),
                (3, 1) => (0, 2),
                (1, 3) => (1, 2),
                _ => unreachable!(),
            }
        };
        let n = 8;
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let (ua, sa) = (a / 2, a % 2);
                let (ub, sb) = (b / 2, b % 2);
                let (flip, u) = unit_mul(ua, ub);
                let s = (sa + sb + flip) % 2;
                table[a * n + b] = (u * 2 + s) as u32;
            }
        }
        FiniteGroup::from_table_unchecked(n, table)
    }

    /// Heisenberg group over Z/m: unipotent upper triangular 3x3 matrices.
    /// Element (a, b, c) has index `a*m^2 + b*m + c`; order is m^3.
    pub fn heisenberg(m: usize) -> FiniteGroup {
        let n = m * m * m;
        let mut table = vec![0u32; n * n];
        let idx = |a: usize, b: usize, c: usize| a * m * m + b * m + c;
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let x = idx(a, b, c);
                    for a2 in 0..m {
                        for b2 in 0..m {
                            for c2 in 0..m {
                                let y = idx(a2, b2, c2);
                                table[x * n + y] = idx(
                                    (a + a2) % m,
                                    (b + b2) % m,
                                    (c + c2 + a * b2) % m,
                                ) as u32;
                            }
                        }
                    }
                }
            }
        }
        FiniteGroup::from_table_unchecked(n, table)
    }

    /// Closure of a generating set, returned as a canonical subgroup.
    pub fn subgroup(&self, gens: &[usize]) -> Subgroup {
        let mut members = vec![false; self.order];
        members[0] = true;
        let mut queue: VecDeque<usize> = VecDeque::new();
        queue.push_back(0);
        for &g in gens {
            if !members[g] {
                members[g] = true;
                queue.push_back(g);
            }
        }
        // close under products with generators and inverses
        let mut elems: Vec<usize> = Vec::new();
        while let Some(x) = queue.pop_front() {
            elems.push(x);
            let candidates: Vec<usize> = gens
                .iter()
                .flat_map(|&g| [self.mul(x, g), self.mul(x, self.inv(g))])
                .collect();
            for c in candidates {
                if !members[c] {
                    members[c] = true;
                    queue.push_back(c);
                }
            }
        }
        elems.sort_unstable();
        Subgroup::from_sorted_elements(self, elems)
    }

    /// All subgroups, each as a sorted element list. Exhaustive closure walk:
    /// repeatedly extend known subgroups by one element until stable.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut known: HashSet<Vec<usize>> = HashSet::new();
        let trivial = vec![0usize];
        known.insert(trivial.clone());
        let mut frontier = vec![trivial];
        while let Some(h) = frontier.pop() {
            for g in 1..self.order {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let sub = self.subgroup(&gens);
                if known.insert(sub.elements.clone()) {
                    frontier.push(sub.elements.clone());
                }
            }
        }
        let mut result: Vec<Vec<usize>> = known.into_iter().collect();
        result.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        result
            .into_iter()
            .map(|e| Subgroup::from_sorted_elements(self, e))
            .collect()
    }

    pub fn is_normal(&self, sub: &Subgroup) -> bool {
        self.normality_witness(sub).is_none()
    }

    fn normality_witness(&self, sub: &Subgroup) -> Option<usize> {
        for g in 0..self.order {
            for &h in &sub.elements {
                if !sub.contains(self.conj(g, h)) {
                    return Some(g);
                }
            }
        }
        None
    }

    /// Quotient by a normal subgroup. Cosets are indexed by their least
    /// member, in increasing order, so the coset of the identity is index 0.
    pub fn quotient(&self, n_sub: &Subgroup) -> Result<(FiniteGroup, GroupHom)> {
        if let Some(by) = self.normality_witness(n_sub) {
            return Err(Error::NotNormal { by });
        }
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps: Vec<usize> = Vec::new();
        for g in 0..self.order {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(g);
            for &h in &n_sub.elements {
                coset_of[self.mul(g, h)] = c;
            }
        }
        let m = reps.len();
        let mut table = vec![0u32; m * m];
        for (a, &ra) in reps.iter().enumerate() {
            for (b, &rb) in reps.iter().enumerate() {
                table[a * m + b] = coset_of[self.mul(ra, rb)] as u32;
            }
        }
        let quot = FiniteGroup::from_table_unchecked(m, table);
        let proj = GroupHom::new(self.clone(), quot.clone(), coset_of)?;
        Ok((quot, proj))
    }

    /// A smallest generating sequence, found by brute force over tuples in
    /// index order. Deterministic; intended for the small groups that play
    /// the role of the acting group.
    pub fn minimal_generating_set(&self) -> Vec<usize> {
        if self.order == 1 {
            return vec![];
        }
        for size in 1..=self.order.min(8) {
            let mut tuple = vec![0usize; size];
            if self.search_generators(&mut tuple, 0, size) {
                return tuple;
            }
        }
        (1..self.order).collect()
    }

    fn search_generators(&self, tuple: &mut Vec<usize>, pos: usize, size: usize) -> bool {
        if pos == size {
            return self.subgroup(tuple).order() == self.order;
        }
        let start = if pos == 0 { 1 } else { tuple[pos - 1] + 1 };
        for g in start..self.order {
            tuple[pos] = g;
            if self.search_generators(tuple, pos + 1, size) {
                return true;
            }
        }
        false
    }

    /// Word decompositions of every element over the given generators:
    /// `decomp[x] = Some((prev, gen_index))` with `x = prev * gens[gen_index]`,
    /// and `None` exactly for the identity. Errors if the set does not generate.
    pub fn word_decomposition(&self, gens: &[usize]) -> Result<Vec<Option<(usize, usize)>>> {
        let mut decomp: Vec<Option<(usize, usize)>> = vec![None; self.order];
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::new();
        queue.push_back(0usize);
        while let Some(x) = queue.pop_front() {
            for (i, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    decomp[y] = Some((x, i));
                    queue.push_back(y);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::MalformedInput(
                "generators do not generate the group".into(),
            ));
        }
        Ok(decomp)
    }

    /// All automorphisms, each as an image table. Enumerates images of a
    /// minimal generating set with element-order pruning, then verifies
    /// multiplicativity. Guarded by the candidate budget.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let gens = self.minimal_generating_set();
        if gens.is_empty() {
            return vec![vec![0]];
        }
        let decomp = self.word_decomposition(&gens).expect("gens generate");
        let orders: Vec<usize> = (0..self.order).map(|g| self.element_order(g)).collect();
        let mut result = Vec::new();
        let mut images = vec![0usize; gens.len()];
        self.search_automorphisms(&gens, &decomp, &orders, &mut images, 0, &mut result);
        result.sort();
        result
    }

    fn search_automorphisms(
        &self,
        gens: &[usize],
        decomp: &[Option<(usize, usize)>],
        orders: &[usize],
        images: &mut Vec<usize>,
        pos: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if pos == gens.len() {
            if let Some(map) = self.extend_hom(self, decomp, images) {
                if is_permutation(&map) {
                    out.push(map);
                }
            }
            return;
        }
        for img in 0..self.order {
            if orders[img] != orders[gens[pos]] {
                continue;
            }
            images[pos] = img;
            self.search_automorphisms(gens, decomp, orders, images, pos + 1, out);
        }
    }

    /// Extends generator images to a full map using word decompositions and
    /// verifies it is a homomorphism. Returns None if it is not.
    pub fn extend_hom(
        &self,
        target: &FiniteGroup,
        decomp: &[Option<(usize, usize)>],
        images: &[usize],
    ) -> Option<Vec<usize>> {
        let mut map = vec![0usize; self.order];
        // decomp is in BFS order from the identity, so prev is always set
        // before x; a second pass in index order would not guarantee that,
        // so walk elements repeatedly until all are assigned.
        let mut assigned = vec![false; self.order];
        assigned[0] = true;
        let mut remaining = self.order - 1;
        while remaining > 0 {
            let mut progressed = false;
            for x in 1..self.order {
                if assigned[x] {
                    continue;
                }
                let (prev, gi) = decomp[x].expect("non-identity has a decomposition");
                if assigned[prev] {
                    map[x] = target.mul(map[prev], images[gi]);
                    assigned[x] = true;
                    remaining -= 1;
                    progressed = true;
                }
            }
            if !progressed {
                return None;
            }
        }
        for a in 0..self.order {
            for b in 0..self.order {
                if map[self.mul(a, b)] != target.mul(map[a], map[b]) {
                    return None;
                }
            }
        }
        Some(map)
    }

    /// All homomorphisms self -> target, via generator images. Only meant
    /// for small sources (the acting groups); cost is |target|^d.
    pub fn homs_to(&self, target: &FiniteGroup) -> Vec<Vec<usize>> {
        let gens = self.minimal_generating_set();
        if gens.is_empty() {
            return vec![vec![0]];
        }
        let decomp = self.word_decomposition(&gens).expect("gens generate");
        let mut result = Vec::new();
        let mut images = vec![0usize; gens.len()];
        self.search_homs(target, &gens, &decomp, &mut images, 0, &mut result);
        result.sort();
        result
    }

    fn search_homs(
        &self,
        target: &FiniteGroup,
        gens: &[usize],
        decomp: &[Option<(usize, usize)>],
        images: &mut Vec<usize>,
        pos: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if pos == gens.len() {
            if let Some(map) = self.extend_hom(target, decomp, images) {
                out.push(map);
            }
            return;
        }
        for img in 0..target.order() {
            // order of the image must divide the order of the generator
            if self.element_order(gens[pos]) % target.element_order(img) != 0 {
                continue;
            }
            images[pos] = img;
            self.search_homs(target, gens, decomp, images, pos + 1, out);
        }
    }

    /// Isomorphism test by generator-image search.
    pub fn is_isomorphic_to(&self, other: &FiniteGroup) -> bool {
        if self.order != other.order {
            return false;
        }
        let mut mine: Vec<usize> = (0..self.order).map(|g| self.element_order(g)).collect();
        let mut theirs: Vec<usize> = (0..other.order).map(|g| other.element_order(g)).collect();
        mine.sort_unstable();
        theirs.sort_unstable();
        if mine != theirs {
            return false;
        }
        self.homs_to(other)
            .iter()
            .any(|map| is_permutation(map))
    }
}

fn compute_inverses(order: usize, table: &[u32]) -> Result<Vec<u32>> {
    let mut inv = vec![u32::MAX; order];
    for a in 0..order {
        for b in 0..order {
            if table[a * order + b] == 0 && table[b * order + a] == 0 {
                inv[a] = b as u32;
                break;
            }
        }
        if inv[a] == u32::MAX {
            return Err(Error::MalformedInput(format!("element {a} has no inverse")));
        }
    }
    Ok(inv)
}

pub fn is_permutation(map: &[usize]) -> bool {
    let mut seen = vec![false; map.len()];
    for &x in map {
        if x >= map.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// A subgroup: the chosen elements of the parent (sorted by parent index)
/// together with the induced group on re-indexed elements. `embed` maps a
/// subgroup index to the parent index; re-indexing preserves order, so the
/// identity stays at index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: Vec<usize>,
    pub group: FiniteGroup,
    parent_index: HashMap<usize, usize>,
}

impl Subgroup {
    fn from_sorted_elements(parent: &FiniteGroup, elements: Vec<usize>) -> Subgroup {
        debug_assert!(elements[0] == 0);
        let parent_index: HashMap<usize, usize> =
            elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let m = elements.len();
        let mut table = vec![0u32; m * m];
        for (a, &ea) in elements.iter().enumerate() {
            for (b, &eb) in elements.iter().enumerate() {
                table[a * m + b] = parent_index[&parent.mul(ea, eb)] as u32;
            }
        }
        Subgroup {
            group: FiniteGroup::from_table_unchecked(m, table),
            elements,
            parent_index,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, parent_elt: usize) -> bool {
        self.parent_index.contains_key(&parent_elt)
    }

    /// Subgroup index of a parent element, if it lies in the subgroup.
    pub fn index_of(&self, parent_elt: usize) -> Option<usize> {
        self.parent_index.get(&parent_elt).copied()
    }

    /// Parent element of a subgroup index.
    pub fn embed(&self, sub_elt: usize) -> usize {
        self.elements[sub_elt]
    }

    /// The inclusion as a GroupHom into the parent.
    pub fn inclusion(&self, parent: &FiniteGroup) -> GroupHom {
        GroupHom::new(self.group.clone(), parent.clone(), self.elements.clone())
            .expect("inclusion is a homomorphism")
    }
}

/// A homomorphism between finite groups, stored as an image table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    pub source: FiniteGroup,
    pub target: FiniteGroup,
    pub map: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: FiniteGroup, target: FiniteGroup, map: Vec<usize>) -> Result<GroupHom> {
        if map.len() != source.order() {
            return Err(Error::MalformedInput("hom map has wrong length".into()));
        }
        if map[0] != 0 {
            return Err(Error::MalformedInput("hom does not fix the identity".into()));
        }
        for a in 0..source.order() {
            if map[a] >= target.order() {
                return Err(Error::MalformedInput("hom image out of range".into()));
            }
            for b in 0..source.order() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(Error::MalformedInput(format!(
                        "map is not multiplicative at ({a},{b})"
                    )));
                }
            }
        }
        Ok(GroupHom { source, target, map })
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        self.map.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        for &x in &self.map {
            seen[x] = true;
        }
        seen.iter().all(|&s| s)
    }

    /// Kernel as a subgroup of the source.
    pub fn kernel(&self) -> Subgroup {
        let elems: Vec<usize> = (0..self.source.order()).filter(|&a| self.map[a] == 0).collect();
        self.source.subgroup(&elems)
    }

    pub fn identity(group: &FiniteGroup) -> GroupHom {
        GroupHom {
            source: group.clone(),
            target: group.clone(),
            map: (0..group.order()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups_are_valid() {
        for n in 1..=12 {
            FiniteGroup::cyclic(n).validate().unwrap();
        }
    }

    #[test]
    fn symmetric_three_has_order_six() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        s3.validate().unwrap();
        assert!(!s3.is_abelian());
    }

    #[test]
    fn quaternion_is_valid_and_has_one_involution() {
        let q8 = FiniteGroup::quaternion();
        q8.validate().unwrap();
        let involutions: Vec<usize> =
            q8.elements().filter(|&g| g != 0 && q8.element_order(g) == 2).collect();
        assert_eq!(involutions.len(), 1);
    }

    #[test]
    fn heisenberg_three_is_nonabelian_of_order_27() {
        let h = FiniteGroup::heisenberg(3);
        assert_eq!(h.order(), 27);
        h.validate().unwrap();
        assert!(!h.is_abelian());
        assert!(h.elements().all(|g| h.element_order(g) % 3 == 0 || g == 0));
    }

    #[test]
    fn subgroup_closure_of_involution_in_z4() {
        let z4 = FiniteGroup::cyclic(4);
        let s = z4.subgroup(&[2]);
        assert_eq!(s.elements, vec![0, 2]);
        assert_eq!(s.group.order(), 2);
    }

    #[test]
    fn empty_generating_set_gives_trivial_subgroup() {
        let s3 = FiniteGroup::symmetric(3);
        let s = s3.subgroup(&[]);
        assert_eq!(s.elements, vec![0]);
    }

    #[test]
    fn three_cycle_generates_order_three_subgroup_of_s3() {
        let s3 = FiniteGroup::symmetric(3);
        let three_cycle = s3.elements().find(|&g| s3.element_order(g) == 3).unwrap();
        // oracle: close by direct multiplication
        let mut expected = vec![0usize, three_cycle];
        expected.push(s3.mul(three_cycle, three_cycle));
        expected.sort_unstable();
        let s = s3.subgroup(&[three_cycle]);
        assert_eq!(s.elements, expected);
    }

    #[test]
    fn quotient_of_z4_by_z2_is_z2() {
        let z4 = FiniteGroup::cyclic(4);
        let n = z4.subgroup(&[2]);
        let (q, proj) = z4.quotient(&n).unwrap();
        assert_eq!(q.order(), 2);
        assert!(proj.is_surjective());
        assert_eq!(proj.kernel().elements, vec![0, 2]);
    }

    #[test]
    fn quotient_by_trivial_subgroup_is_the_group() {
        let s3 = FiniteGroup::symmetric(3);
        let n = s3.subgroup(&[]);
        let (q, proj) = s3.quotient(&n).unwrap();
        assert_eq!(q.order(), 6);
        assert!(proj.is_injective());
        assert!(q.is_isomorphic_to(&s3));
    }

    #[test]
    fn quotient_of_q8_by_center_is_klein_four() {
        let q8 = FiniteGroup::quaternion();
        let center_elts: Vec<usize> = q8
            .elements()
            .filter(|&z| q8.elements().all(|g| q8.mul(z, g) == q8.mul(g, z)))
            .collect();
        let center = q8.subgroup(&center_elts);
        assert_eq!(center.order(), 2);
        // oracle: coset table computed directly through quotient()
        let (q, _) = q8.quotient(&center).unwrap();
        assert_eq!(q.order(), 4);
        assert!(q.is_isomorphic_to(&FiniteGroup::klein_four()));
        assert!(!q.is_isomorphic_to(&FiniteGroup::cyclic(4)));
    }

    #[test]
    fn non_normal_subgroup_is_rejected() {
        let s3 = FiniteGroup::symmetric(3);
        let transposition = s3.elements().find(|&g| s3.element_order(g) == 2).unwrap();
        let h = s3.subgroup(&[transposition]);
        assert!(matches!(s3.quotient(&h), Err(Error::NotNormal { .. })));
    }

    #[test]
    fn all_subgroups_of_s3() {
        let s3 = FiniteGroup::symmetric(3);
        let subs = s3.all_subgroups();
        // 1 trivial + 3 of order 2 + 1 of order 3 + S3 itself
        assert_eq!(subs.len(), 6);
        let mut orders: Vec<usize> = subs.iter().map(|s| s.order()).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
    }

    #[test]
    fn automorphisms_of_klein_four_form_s3() {
        let v4 = FiniteGroup::klein_four();
        assert_eq!(v4.automorphisms().len(), 6);
        let z4 = FiniteGroup::cyclic(4);
        assert_eq!(z4.automorphisms().len(), 2);
    }

    #[test]
    fn minimal_generators_of_klein_four() {
        let v4 = FiniteGroup::klein_four();
        assert_eq!(v4.minimal_generating_set().len(), 2);
        let z6 = FiniteGroup::cyclic(6);
        assert_eq!(z6.minimal_generating_set().len(), 1);
    }

    #[test]
    fn isomorphism_distinguishes_s3_from_z6() {
        let s3 = FiniteGroup::symmetric(3);
        let z6 = FiniteGroup::cyclic(6);
        assert!(!s3.is_isomorphic_to(&z6));
        assert!(s3.is_isomorphic_to(&FiniteGroup::dihedral(3)));
    }

    #[test]
    fn malformed_tables_are_rejected() {
        // not a Latin square
        assert!(FiniteGroup::from_table(2, vec![0, 0, 0, 0]).is_err());
        // identity not at 0
        assert!(FiniteGroup::from_table(2, vec![1, 0, 0, 1]).is_err());
    }
}
