//! Finite groups as Cayley tables.
//!
//! Element `0` is always the identity. Every table that enters the crate
//! goes through [`FiniteGroup::from_table`], which checks the group axioms and
//! reports the first violation it finds.

use std::collections::{BTreeSet, HashSet, VecDeque};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("table is not square: row {row} has {len} entries, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("entry {value} at ({row}, {col}) is out of range for order {order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("element 0 is not the identity: 0*{h} = {left}, {h}*0 = {right}")]
    NoIdentity { h: usize, left: usize, right: usize },
    #[error("not a Latin square: value {value} repeats in {line} {index}")]
    NotLatin {
        line: &'static str,
        index: usize,
        value: usize,
    },
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("element index {index} out of range for order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("empty group table")]
    Empty,
}

/// A finite group on `{0, .., n-1}` with identity `0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a Cayley table (`table[g][h] = g*h`).
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotSquare {
                    row: r,
                    len: row.len(),
                    order: n,
                });
            }
            if let Some((c, &v)) = row.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(GroupError::EntryOutOfRange {
                    row: r,
                    col: c,
                    value: v,
                    order: n,
                });
            }
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        Self::from_flat(n, table)
    }

    /// Validates a flat row-major table whose entries are already in range.
    pub fn from_flat(n: usize, table: Vec<usize>) -> Result<Self, GroupError> {
        assert_eq!(table.len(), n * n, "flat table has wrong length");
        for h in 0..n {
            let left = table[h];
            let right = table[h * n];
            if left != h || right != h {
                return Err(GroupError::NoIdentity { h, left, right });
            }
        }
        let mut seen = vec![usize::MAX; n];
        for r in 0..n {
            for c in 0..n {
                let v = table[r * n + c];
                if seen[v] == r {
                    return Err(GroupError::NotLatin {
                        line: "row",
                        index: r,
                        value: v,
                    });
                }
                seen[v] = r;
            }
        }
        let mut seen = vec![usize::MAX; n];
        for c in 0..n {
            for r in 0..n {
                let v = table[r * n + c];
                if seen[v] == c {
                    return Err(GroupError::NotLatin {
                        line: "column",
                        index: c,
                        value: v,
                    });
                }
                seen[v] = c;
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b];
                for c in 0..n {
                    if table[ab * n + c] != table[a * n + table[b * n + c]] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let mut inverse = vec![0; n];
        for g in 0..n {
            inverse[g] = (0..n).find(|&h| table[g * n + h] == 0).expect("Latin row contains 0");
        }
        Ok(FiniteGroup { order: n, table, inverse })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverse
    }

    pub fn row(&self, a: usize) -> &[usize] {
        &self.table[a * self.order..(a + 1) * self.order]
    }

    pub fn flat_table(&self) -> &[usize] {
        &self.table
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| self.row(a).to_vec()).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    /// `g h g^-1`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// The group with `a *' b = b * a`.
    pub fn opposite(&self) -> Self {
        let n = self.order;
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = self.mul(b, a);
            }
        }
        FiniteGroup {
            order: n,
            table,
            inverse: self.inverse.clone(),
        }
    }

    /// Transports the law along a permutation `perm` of the elements
    /// (`perm[old] = new`). `perm[0]` must be `0`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.order;
        assert_eq!(perm[0], 0, "relabelling must fix the identity");
        let mut table = vec![0; n * n];
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[perm[a]] = perm[self.inv(a)];
            for b in 0..n {
                table[perm[a] * n + perm[b]] = perm[self.mul(a, b)];
            }
        }
        FiniteGroup { order: n, table, inverse }
    }

    fn check_index(&self, g: usize) -> Result<(), GroupError> {
        if g >= self.order {
            return Err(GroupError::IndexOutOfRange {
                index: g,
                order: self.order,
            });
        }
        Ok(())
    }

    fn check_indices(&self, set: &[usize]) -> Result<(), GroupError> {
        set.iter().try_for_each(|&g| self.check_index(g))
    }

    // ----- constructions -----

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        Self::from_flat(n, table).expect("cyclic table is a group")
    }

    /// Direct product with elements `(a, b) -> a * |B| + b`.
    pub fn direct_product(a: &Self, b: &Self) -> Self {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let (xa, xb) = (x / nb, x % nb);
                let (ya, yb) = (y / nb, y % nb);
                table[x * n + y] = a.mul(xa, ya) * nb + b.mul(xb, yb);
            }
        }
        Self::from_flat(n, table).expect("direct product is a group")
    }

    /// Elementary abelian 2-group of rank `k`, realized as XOR on `0..2^k`.
    pub fn elementary_abelian_2(k: u32) -> Self {
        let n = 1usize << k;
        let table = (0..n * n).map(|i| (i / n) ^ (i % n)).collect();
        Self::from_flat(n, table).expect("xor table is a group")
    }

    /// Closes a set of permutations of `0..degree` under composition and
    /// returns the resulting group. Elements are numbered in BFS order from
    /// the identity permutation; composition is `(p * q)(x) = p(q(x))`.
    pub fn from_permutation_generators(degree: usize, gens: &[Vec<usize>]) -> Self {
        let elements = close_permutations(degree, gens);
        Self::from_permutation_list(&elements)
    }

    fn from_permutation_list(elements: &[Vec<usize>]) -> Self {
        let n = elements.len();
        let index: std::collections::HashMap<&Vec<usize>, usize> =
            elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut table = vec![0; n * n];
        for (i, p) in elements.iter().enumerate() {
            for (j, q) in elements.iter().enumerate() {
                let pq: Vec<usize> = q.iter().map(|&x| p[x]).collect();
                table[i * n + j] = index[&pq];
            }
        }
        Self::from_flat(n, table).expect("permutation group is a group")
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            let mut t: Vec<usize> = (0..degree).collect();
            t.swap(0, 1);
            gens.push(t);
            let cycle: Vec<usize> = (0..degree).map(|i| (i + 1) % degree).collect();
            gens.push(cycle);
        }
        Self::from_permutation_generators(degree, &gens)
    }

    pub fn alternating(degree: usize) -> Self {
        // 3-cycles (0 1 i) generate A_n.
        let gens: Vec<Vec<usize>> = (2..degree)
            .map(|i| {
                let mut p: Vec<usize> = (0..degree).collect();
                p[0] = 1;
                p[1] = i;
                p[i] = 0;
                p
            })
            .collect();
        Self::from_permutation_generators(degree, &gens)
    }

    /// Dihedral group of order `2m` acting on the vertices of an `m`-gon.
    pub fn dihedral(m: usize) -> Self {
        assert!(m >= 3, "dihedral group needs at least three vertices");
        let rot: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
        let refl: Vec<usize> = (0..m).map(|i| (m - i) % m).collect();
        Self::from_permutation_generators(m, &[rot, refl])
    }

    /// Dicyclic group of order `4m`: `⟨a, x | a^{2m} = 1, x² = a^m, x a x⁻¹ = a⁻¹⟩`.
    /// Element `a^k x^j` has index `k + 2m j`.
    pub fn dicyclic(m: usize) -> Self {
        assert!(m >= 2, "dicyclic group needs m >= 2");
        let r = 2 * m;
        let n = 2 * r;
        let mut table = vec![0; n * n];
        for p in 0..n {
            let (k, j) = (p % r, p / r);
            for q in 0..n {
                let (l, i) = (q % r, q / r);
                table[p * n + q] = match (j, i) {
                    (0, _) => (k + l) % r + r * i,
                    (_, 0) => (k + r - l) % r + r,
                    _ => (k + r - l + m) % r,
                };
            }
        }
        Self::from_flat(n, table).expect("dicyclic table is a group")
    }

    /// Quaternion group of order 8 via its regular permutation action.
    pub fn quaternion() -> Self {
        // Elements 1, i, j, k, -1, -i, -j, -k encoded as sign * 4 + unit.
        let unit_mul = |a: usize, b: usize| -> (usize, usize) {
            // returns (sign, unit) for units 0=1, 1=i, 2=j, 3=k
            const T: [[(usize, usize); 4]; 4] = [
                [(0, 0), (0, 1), (0, 2), (0, 3)],
                [(0, 1), (1, 0), (0, 3), (1, 2)],
                [(0, 2), (1, 3), (1, 0), (0, 1)],
                [(0, 3), (0, 2), (1, 1), (1, 0)],
            ];
            T[a][b]
        };
        let mut table = vec![0; 64];
        for x in 0..8 {
            for y in 0..8 {
                let (s, u) = unit_mul(x % 4, y % 4);
                let sign = (x / 4 + y / 4 + s) % 2;
                table[x * 8 + y] = sign * 4 + u;
            }
        }
        Self::from_flat(8, table).expect("quaternion table is a group")
    }

    // ----- subgroup tools -----

    /// Subgroup generated by `set`, as a sorted element list.
    pub fn generated_subgroup(&self, set: &[usize]) -> Result<Vec<usize>, GroupError> {
        self.check_indices(set)?;
        Ok(self.closure_unchecked(set))
    }

    fn closure_unchecked(&self, set: &[usize]) -> Vec<usize> {
        let n = self.order;
        let mut member = vec![false; n];
        member[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let gens: Vec<usize> = set.iter().copied().filter(|&g| g != 0).collect();
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..n).filter(|&g| member[g]).collect()
    }

    /// True iff `set` (any order, no duplicates needed) is a subgroup.
    pub fn is_subgroup(&self, set: &[usize]) -> Result<bool, GroupError> {
        self.check_indices(set)?;
        let member = self.membership(set);
        if !member[0] {
            return Ok(false);
        }
        let elems: Vec<usize> = (0..self.order).filter(|&g| member[g]).collect();
        Ok(elems
            .iter()
            .all(|&a| elems.iter().all(|&b| member[self.mul(a, self.inv(b))])))
    }

    fn membership(&self, set: &[usize]) -> Vec<bool> {
        let mut member = vec![false; self.order];
        for &g in set {
            member[g] = true;
        }
        member
    }

    /// True iff the subgroup `sub` is normal. `sub` must be a subgroup.
    pub fn is_normal(&self, sub: &[usize]) -> Result<bool, GroupError> {
        self.check_indices(sub)?;
        let member = self.membership(sub);
        Ok((0..self.order).all(|g| sub.iter().all(|&h| member[self.conjugate(g, h)])))
    }

    /// Smallest normal subgroup containing `set`.
    pub fn normal_closure(&self, set: &[usize]) -> Result<Vec<usize>, GroupError> {
        self.check_indices(set)?;
        let mut current = self.closure_unchecked(set);
        loop {
            let member = self.membership(&current);
            let mut extra: Vec<usize> = Vec::new();
            for g in 0..self.order {
                for &h in &current {
                    let c = self.conjugate(g, h);
                    if !member[c] && !extra.contains(&c) {
                        extra.push(c);
                    }
                }
            }
            if extra.is_empty() {
                return Ok(current);
            }
            extra.extend(current.iter().copied());
            current = self.closure_unchecked(&extra);
        }
    }

    /// `[A, B]`, generated by all commutators `a^-1 b^-1 a b`.
    pub fn commutator_subgroup(&self, a: &[usize], b: &[usize]) -> Result<Vec<usize>, GroupError> {
        self.check_indices(a)?;
        self.check_indices(b)?;
        let comms: BTreeSet<usize> = a
            .iter()
            .flat_map(|&x| b.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.commutator(x, y))
            .collect();
        Ok(self.closure_unchecked(&comms.into_iter().collect::<Vec<_>>()))
    }

    /// `G, [G,G], [[G,G],[G,G]], ...` up to the first repeat.
    pub fn derived_series(&self) -> Vec<Vec<usize>> {
        let mut series = vec![(0..self.order).collect::<Vec<_>>()];
        loop {
            let last = series.last().expect("nonempty");
            let next = self.commutator_subgroup(last, last).expect("indices in range");
            if next.len() == last.len() {
                return series;
            }
            series.push(next);
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().is_some_and(|s| s.len() == 1)
    }

    /// No normal subgroups besides the trivial one and the whole group.
    /// The trivial group is not simple.
    pub fn is_abstractly_simple(&self) -> bool {
        if self.order == 1 {
            return false;
        }
        (1..self.order).all(|g| self.normal_closure(&[g]).expect("in range").len() == self.order)
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    /// Every subgroup, each as a sorted element list, in canonical order
    /// (by size, then lexicographically).
    pub fn all_subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: HashSet<Vec<usize>> = HashSet::new();
        let trivial = vec![0];
        found.insert(trivial.clone());
        let mut frontier = vec![trivial];
        while let Some(h) = frontier.pop() {
            let member = self.membership(&h);
            for g in 1..self.order {
                if member[g] {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let k = self.closure_unchecked(&gens);
                if found.insert(k.clone()) {
                    frontier.push(k);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Subgroups mapped to themselves by every given automorphism.
    pub fn characteristic_subgroups(&self, automorphisms: &[GroupHom]) -> Vec<Vec<usize>> {
        self.all_subgroups()
            .into_iter()
            .filter(|h| is_stable_under(h, automorphisms.iter().map(|a| a.map.as_slice())))
            .collect()
    }

    /// A generating set built greedily: repeatedly add the element that
    /// enlarges the generated subgroup the most (ties to the smallest index).
    pub fn greedy_generators(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut current = vec![0usize];
        while current.len() < self.order {
            let member = self.membership(&current);
            let mut best: Option<(usize, Vec<usize>)> = None;
            for g in 1..self.order {
                if member[g] {
                    continue;
                }
                let mut trial = gens.clone();
                trial.push(g);
                let sub = self.closure_unchecked(&trial);
                if best.as_ref().is_none_or(|(_, b)| sub.len() > b.len()) {
                    best = Some((g, sub));
                }
            }
            let (g, sub) = best.expect("a non-member exists");
            gens.push(g);
            current = sub;
        }
        gens
    }

    /// Sorted multiset of element orders.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order).map(|g| self.element_order(g)).collect();
        v.sort_unstable();
        v
    }

    pub fn derived_length_profile(&self) -> Vec<usize> {
        self.derived_series().iter().map(Vec::len).collect()
    }
}

/// True iff every map sends `set` into itself.
pub fn is_stable_under<'a>(set: &[usize], maps: impl IntoIterator<Item = &'a [usize]>) -> bool {
    let max = set.iter().copied().max().unwrap_or(0);
    let mut member = vec![false; max + 1];
    for &x in set {
        member[x] = true;
    }
    maps.into_iter()
        .all(|m| set.iter().all(|&x| m[x] <= max && member[m[x]]))
}

fn close_permutations(degree: usize, gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..degree).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
    let mut elements = vec![id];
    let mut i = 0;
    while i < elements.len() {
        for g in gens {
            let p: Vec<usize> = g.iter().map(|&x| elements[i][x]).collect();
            if seen.insert(p.clone()) {
                elements.push(p);
            }
        }
        i += 1;
    }
    elements
}

/// A map between element indices. The source and target groups are carried
/// by the caller.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GroupHom {
    pub map: Vec<usize>,
}

impl GroupHom {
    pub fn identity(n: usize) -> Self {
        GroupHom { map: (0..n).collect() }
    }

    pub fn is_homomorphism(&self, source: &FiniteGroup, target: &FiniteGroup) -> bool {
        self.map.len() == source.order()
            && self.map[0] == 0
            && self.map.iter().all(|&x| x < target.order())
            && (0..source.order()).all(|g| {
                (0..source.order()).all(|h| self.map[source.mul(g, h)] == target.mul(self.map[g], self.map[h]))
            })
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.map.len()];
        self.map.iter().all(|&x| x < seen.len() && !std::mem::replace(&mut seen[x], true))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        GroupHom {
            map: other.map.iter().map(|&x| self.map[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        GroupHom { map: inv }
    }
}

/// Backtracking search for injective homomorphisms `source -> target` that
/// are determined by images of `source`'s greedy generators. Calls `visit`
/// with each complete bijective map; stops early when `visit` returns false.
pub(crate) fn search_isomorphisms(source: &FiniteGroup, target: &FiniteGroup, mut visit: impl FnMut(&[usize]) -> bool) {
    let n = source.order();
    if n != target.order() {
        return;
    }
    let gens = source.greedy_generators();
    let target_orders: Vec<usize> = (0..n).map(|g| target.element_order(g)).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let o = source.element_order(g);
            (0..n).filter(|&t| target_orders[t] == o).collect()
        })
        .collect();
    let mut images = Vec::with_capacity(gens.len());
    let mut map = vec![usize::MAX; n];
    extend_partial_hom(source, target, &[], &[], &mut map);
    recurse(source, target, &gens, &candidates, &mut images, &mut map, &mut visit);

    fn recurse(
        source: &FiniteGroup,
        target: &FiniteGroup,
        gens: &[usize],
        candidates: &[Vec<usize>],
        images: &mut Vec<usize>,
        map: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        let level = images.len();
        if level == gens.len() {
            return visit(map);
        }
        for &img in &candidates[level] {
            images.push(img);
            let ok = extend_partial_hom(source, target, &gens[..=level], images, map);
            if ok && !recurse(source, target, gens, candidates, images, map, visit) {
                images.pop();
                return false;
            }
            images.pop();
        }
        true
    }
}

/// Recomputes `map` on the subgroup generated by `gens` from the generator
/// images. Returns false if the images are inconsistent or not injective.
fn extend_partial_hom(
    source: &FiniteGroup,
    target: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
    map: &mut [usize],
) -> bool {
    map.fill(usize::MAX);
    let mut used = vec![false; target.order()];
    map[0] = 0;
    used[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (&g, &img) in gens.iter().zip(images) {
            let y = source.mul(x, g);
            let fy = target.mul(map[x], img);
            if map[y] == usize::MAX {
                if used[fy] {
                    return false;
                }
                used[fy] = true;
                map[y] = fy;
                queue.push_back(y);
            } else if map[y] != fy {
                return false;
            }
        }
    }
    true
}

/// All automorphisms, sorted lexicographically by their map arrays. The
/// identity is always first.
pub fn automorphisms(g: &FiniteGroup) -> Vec<GroupHom> {
    let mut out = Vec::new();
    search_isomorphisms(g, g, |m| {
        out.push(GroupHom { map: m.to_vec() });
        true
    });
    out.sort();
    out.dedup();
    out
}

/// An explicit isomorphism `a -> b`, if one exists.
pub fn find_isomorphism(a: &FiniteGroup, b: &FiniteGroup) -> Option<GroupHom> {
    if a.order() != b.order()
        || a.order_profile() != b.order_profile()
        || a.center().len() != b.center().len()
        || a.derived_length_profile() != b.derived_length_profile()
    {
        return None;
    }
    let mut found = None;
    search_isomorphisms(a, b, |m| {
        found = Some(GroupHom { map: m.to_vec() });
        false
    });
    found
}

pub fn isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Index of an element of the holomorph: a translation and an index into
/// the canonically sorted automorphism list.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct HolomorphElement {
    pub translation: usize,
    pub automorphism: usize,
}

/// The holomorph `G ⋊ Aut(G)` without a materialized Cayley table.
///
/// Multiplication is `(x, φ)(y, ψ) = (x·φ(y), φ∘ψ)`; it acts on `G` by
/// `(x, φ)·g = x·φ(g)`.
#[derive(Clone, Debug)]
pub struct Holomorph {
    base: FiniteGroup,
    auts: Vec<GroupHom>,
    /// `compose[i * |A| + j]` is the index of `auts[i] ∘ auts[j]`.
    compose: Vec<usize>,
}

impl Holomorph {
    pub fn new(base: &FiniteGroup) -> Self {
        let auts = automorphisms(base);
        let index: std::collections::HashMap<&[usize], usize> =
            auts.iter().enumerate().map(|(i, a)| (a.map.as_slice(), i)).collect();
        let na = auts.len();
        let mut compose = vec![0; na * na];
        for i in 0..na {
            for j in 0..na {
                let c = auts[i].compose(&auts[j]);
                compose[i * na + j] = index[c.map.as_slice()];
            }
        }
        Holomorph {
            base: base.clone(),
            auts,
            compose,
        }
    }

    pub fn base(&self) -> &FiniteGroup {
        &self.base
    }

    pub fn automorphisms(&self) -> &[GroupHom] {
        &self.auts
    }

    pub fn aut_count(&self) -> usize {
        self.auts.len()
    }

    pub fn order(&self) -> usize {
        self.base.order() * self.auts.len()
    }

    pub fn identity(&self) -> HolomorphElement {
        HolomorphElement {
            translation: 0,
            automorphism: 0,
        }
    }

    #[inline]
    pub fn compose_auts(&self, i: usize, j: usize) -> usize {
        self.compose[i * self.auts.len() + j]
    }

    #[inline]
    pub fn apply_aut(&self, i: usize, g: usize) -> usize {
        self.auts[i].map[g]
    }

    #[inline]
    pub fn mul(&self, p: HolomorphElement, q: HolomorphElement) -> HolomorphElement {
        HolomorphElement {
            translation: self.base.mul(p.translation, self.apply_aut(p.automorphism, q.translation)),
            automorphism: self.compose_auts(p.automorphism, q.automorphism),
        }
    }

    /// `(x, φ)·g = x·φ(g)`.
    #[inline]
    pub fn act(&self, p: HolomorphElement, g: usize) -> usize {
        self.base.mul(p.translation, self.apply_aut(p.automorphism, g))
    }

    pub fn element_index(&self, p: HolomorphElement) -> usize {
        p.translation * self.auts.len() + p.automorphism
    }

    pub fn element_at(&self, index: usize) -> HolomorphElement {
        HolomorphElement {
            translation: index / self.auts.len(),
            automorphism: index % self.auts.len(),
        }
    }

    /// Cayley table of the holomorph; element `(x, φ)` gets index
    /// `x * |Aut| + φ`, so the identity `(0, id)` is `0`.
    pub fn to_group(&self) -> FiniteGroup {
        let n = self.order();
        let mut table = vec![0; n * n];
        for i in 0..n {
            let p = self.element_at(i);
            for j in 0..n {
                table[i * n + j] = self.element_index(self.mul(p, self.element_at(j)));
            }
        }
        FiniteGroup::from_flat(n, table).expect("holomorph is a group")
    }
}

/// The holomorph as a Cayley-table group. Only practical for small bases.
pub fn holomorph(g: &FiniteGroup) -> FiniteGroup {
    Holomorph::new(g).to_group()
}
