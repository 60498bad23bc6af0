//! Finite skew braces.
//!
//! A brace here is a pair of group laws on `{0, .., n-1}` sharing the
//! identity `0` and satisfying `a∘(b·c) = (a∘b)·a⁻¹·(a∘c)`. The additive law
//! is `dot`, the multiplicative law is `circ`.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::group::{search_isomorphisms, FiniteGroup, GroupError, GroupHom, Holomorph, HolomorphElement};

pub const DEFAULT_ORDER_BOUND: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraceError {
    #[error("orders differ: dot has {dot}, circ has {circ}")]
    OrderMismatch { dot: usize, circ: usize },
    #[error("identity mismatch: dot identity is 0, circ identity is {circ_identity}")]
    IdentityMismatch { circ_identity: usize },
    #[error("brace identity fails at (a, b, c) = ({a}, {b}, {c})")]
    BraceIdentityViolation { a: usize, b: usize, c: usize },
    #[error("not an ideal: {0}")]
    NotAnIdeal(IdealFailure),
    #[error("order {order} exceeds the configured bound {bound}")]
    OrderBoundExceeded { order: usize, bound: usize },
    #[error("subgroup is not characteristic in the additive group")]
    NotCharacteristic,
    #[error("set is not a regular subgroup of the holomorph")]
    NotRegular,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A validated finite skew brace with its λ-maps cached.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FiniteSkewBrace {
    dot: FiniteGroup,
    circ: FiniteGroup,
    /// `lambda[a * n + x] = λ_a(x)`.
    lambda: Vec<usize>,
}

/// Checks the brace identity on every triple and returns the brace.
pub fn verify_brace(dot: &FiniteGroup, circ: &FiniteGroup) -> Result<FiniteSkewBrace, BraceError> {
    let n = dot.order();
    if circ.order() != n {
        return Err(BraceError::OrderMismatch {
            dot: n,
            circ: circ.order(),
        });
    }
    for a in 0..n {
        let a_inv = dot.inv(a);
        for b in 0..n {
            let ab = circ.mul(a, b);
            let left_part = dot.mul(ab, a_inv);
            for c in 0..n {
                let lhs = circ.mul(a, dot.mul(b, c));
                let rhs = dot.mul(left_part, circ.mul(a, c));
                if lhs != rhs {
                    return Err(BraceError::BraceIdentityViolation { a, b, c });
                }
            }
        }
    }
    Ok(FiniteSkewBrace::new_unchecked(dot.clone(), circ.clone()))
}

/// Validates two raw tables and then the brace identity. A circ table whose
/// identity is not `0` is reported as an identity mismatch.
pub fn verify_brace_tables(dot: Vec<Vec<usize>>, circ: Vec<Vec<usize>>) -> Result<FiniteSkewBrace, BraceError> {
    let dot = FiniteGroup::from_table(dot)?;
    let circ = match FiniteGroup::from_table(circ.clone()) {
        Ok(g) => g,
        Err(GroupError::NoIdentity { .. }) => {
            let n = circ.len();
            let e = (0..n).find(|&e| (0..n).all(|h| circ[e].get(h) == Some(&h) && circ[h].get(e) == Some(&h)));
            return Err(match e {
                Some(e) => BraceError::IdentityMismatch { circ_identity: e },
                None => BraceError::Group(FiniteGroup::from_table(circ).unwrap_err()),
            });
        }
        Err(e) => return Err(e.into()),
    };
    verify_brace(&dot, &circ)
}

impl FiniteSkewBrace {
    fn new_unchecked(dot: FiniteGroup, circ: FiniteGroup) -> Self {
        let n = dot.order();
        let mut lambda = vec![0; n * n];
        for a in 0..n {
            let a_inv = dot.inv(a);
            for x in 0..n {
                lambda[a * n + x] = dot.mul(a_inv, circ.mul(a, x));
            }
        }
        FiniteSkewBrace { dot, circ, lambda }
    }

    pub fn trivial(g: &FiniteGroup) -> Self {
        Self::new_unchecked(g.clone(), g.clone())
    }

    pub fn almost_trivial(g: &FiniteGroup) -> Self {
        Self::new_unchecked(g.clone(), g.opposite())
    }

    pub fn order(&self) -> usize {
        self.dot.order()
    }

    pub fn dot(&self) -> &FiniteGroup {
        &self.dot
    }

    pub fn circ(&self) -> &FiniteGroup {
        &self.circ
    }

    /// `λ_a` as a permutation: `λ_a(x) = a⁻¹·(a∘x)`.
    pub fn lambda(&self, a: usize) -> &[usize] {
        let n = self.order();
        &self.lambda[a * n..(a + 1) * n]
    }

    #[inline]
    pub fn lambda_at(&self, a: usize, x: usize) -> usize {
        self.lambda[a * self.order() + x]
    }

    /// `x * y = λ_x(y)·y⁻¹`.
    pub fn star(&self, x: usize, y: usize) -> usize {
        self.dot.mul(self.lambda_at(x, y), self.dot.inv(y))
    }

    /// Commutator in the multiplicative group.
    pub fn circ_commutator(&self, x: usize, y: usize) -> usize {
        self.circ.commutator(x, y)
    }

    pub fn classify_triviality(&self) -> Triviality {
        if self.circ == self.dot {
            Triviality::Trivial
        } else if self.circ == self.dot.opposite() {
            Triviality::AlmostTrivial
        } else {
            Triviality::Neither
        }
    }

    /// Checks each ideal condition on `set`.
    pub fn ideal_check(&self, set: &[usize]) -> Result<IdealCheck, BraceError> {
        let n = self.order();
        if let Some(&bad) = set.iter().find(|&&g| g >= n) {
            return Err(GroupError::IndexOutOfRange { index: bad, order: n }.into());
        }
        let mut member = vec![false; n];
        for &g in set {
            member[g] = true;
        }
        let elems: Vec<usize> = (0..n).filter(|&g| member[g]).collect();
        let dot_subgroup = self.dot.is_subgroup(&elems)?;
        let dot_normal = dot_subgroup && self.dot.is_normal(&elems)?;
        let circ_normal = self.circ.is_subgroup(&elems)? && self.circ.is_normal(&elems)?;
        let lambda_stable = (0..n).all(|a| elems.iter().all(|&x| member[self.lambda_at(a, x)]));
        Ok(IdealCheck {
            dot_subgroup,
            dot_normal,
            circ_normal,
            lambda_stable,
        })
    }

    pub fn is_ideal(&self, set: &[usize]) -> Result<bool, BraceError> {
        Ok(self.ideal_check(set)?.is_ideal())
    }

    /// Every ideal, canonically sorted (by size, then lexicographically).
    pub fn all_ideals(&self, bound: usize) -> Result<Vec<BraceIdeal>, BraceError> {
        self.check_bound(bound)?;
        let subgroups = self.dot.all_subgroups();
        Ok(self.ideals_among(&subgroups))
    }

    /// Filters precomputed subgroups of `dot` down to the ideals.
    pub fn ideals_among(&self, dot_subgroups: &[Vec<usize>]) -> Vec<BraceIdeal> {
        dot_subgroups
            .iter()
            .filter(|h| self.is_ideal_subgroup(h))
            .map(|h| BraceIdeal { elements: h.clone() })
            .collect()
    }

    /// Ideal test for a set already known to be a sorted dot-subgroup.
    fn is_ideal_subgroup(&self, h: &[usize]) -> bool {
        let n = self.order();
        let mut member = vec![false; n];
        for &x in h {
            member[x] = true;
        }
        h.iter().all(|&x| (0..n).all(|a| member[self.lambda_at(a, x)]))
            && h.iter().all(|&x| (0..n).all(|g| member[self.dot.conjugate(g, x)]))
            && h.iter().all(|&x| (0..n).all(|g| member[self.circ.conjugate(g, x)]))
    }

    pub fn is_simple(&self, bound: usize) -> Result<bool, BraceError> {
        Ok(self.order() > 1 && self.all_ideals(bound)?.len() == 2)
    }

    fn check_bound(&self, bound: usize) -> Result<(), BraceError> {
        if self.order() > bound {
            return Err(BraceError::OrderBoundExceeded {
                order: self.order(),
                bound,
            });
        }
        Ok(())
    }

    /// Quotient by an ideal. Cosets are numbered by their smallest element,
    /// so the coset of `0` is `0`. Returns the quotient and the projection.
    pub fn quotient(&self, ideal: &[usize]) -> Result<(FiniteSkewBrace, Vec<usize>), BraceError> {
        let check = self.ideal_check(ideal)?;
        if let Some(f) = check.first_failure() {
            return Err(BraceError::NotAnIdeal(f));
        }
        let n = self.order();
        let mut proj = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if proj[g] != usize::MAX {
                continue;
            }
            let k = reps.len();
            reps.push(g);
            for &h in ideal {
                proj[self.dot.mul(g, h)] = k;
            }
        }
        let m = reps.len();
        let mut dot_t = vec![0; m * m];
        let mut circ_t = vec![0; m * m];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                dot_t[i * m + j] = proj[self.dot.mul(a, b)];
                circ_t[i * m + j] = proj[self.circ.mul(a, b)];
            }
        }
        let dot = FiniteGroup::from_flat(m, dot_t)?;
        let circ = FiniteGroup::from_flat(m, circ_t)?;
        let q = verify_brace(&dot, &circ)?;
        Ok((q, proj))
    }

    /// Smallest ideal containing `set`: subgroup closure, then normal closure
    /// in dot, then in circ, then λ-orbits, repeated until nothing changes.
    pub fn ideal_generated(&self, set: &[usize]) -> Result<Vec<usize>, BraceError> {
        let n = self.order();
        let mut current = self.dot.generated_subgroup(set)?;
        loop {
            let before = current.len();
            current = self.dot.normal_closure(&current)?;
            current = self.circ.normal_closure(&current)?;
            let mut member = vec![false; n];
            for &x in &current {
                member[x] = true;
            }
            let mut orbit = current.clone();
            for a in 0..n {
                for &x in &current {
                    let y = self.lambda_at(a, x);
                    if !member[y] {
                        member[y] = true;
                        orbit.push(y);
                    }
                }
            }
            current = self.dot.generated_subgroup(&orbit)?;
            if current.len() == before && self.is_ideal_subgroup(&current) {
                return Ok(current);
            }
        }
    }

    /// `[I, J]_B`: the smallest ideal containing the dot commutators, the
    /// circ commutators and the star products of elements of `i` and `j`.
    pub fn brace_commutator(&self, i: &[usize], j: &[usize]) -> Result<Vec<usize>, BraceError> {
        let mut gens = Vec::with_capacity(3 * i.len() * j.len());
        for &x in i {
            for &y in j {
                gens.push(self.dot.commutator(x, y));
                gens.push(self.circ.commutator(x, y));
                gens.push(self.star(x, y));
            }
        }
        gens.sort_unstable();
        gens.dedup();
        self.ideal_generated(&gens)
    }

    /// `∂⁰ = G`, `∂ⁿ⁺¹ = [∂ⁿ, ∂ⁿ]_B`, up to the first repeat.
    pub fn derived_series(&self) -> DerivedSeries {
        let mut terms = vec![BraceIdeal {
            elements: (0..self.order()).collect(),
        }];
        loop {
            let last = &terms.last().expect("nonempty").elements;
            let next = self.brace_commutator(last, last).expect("elements in range");
            if next.len() == last.len() {
                break;
            }
            terms.push(BraceIdeal { elements: next });
        }
        let solvable = terms.last().is_some_and(|t| t.elements.len() == 1);
        DerivedSeries { terms, solvable }
    }

    /// Characteristic-subgroup criteria for `h`, given `Aut(dot)`.
    pub fn criterion_checks(&self, h: &[usize], dot_automorphisms: &[GroupHom]) -> Result<CriterionReport, BraceError> {
        let n = self.order();
        if !self.dot.is_subgroup(h)? {
            return Err(BraceError::NotCharacteristic);
        }
        let mut member = vec![false; n];
        for &x in h {
            member[x] = true;
        }
        let characteristic = dot_automorphisms.iter().all(|a| h.iter().all(|&x| member[a.map[x]]));
        if !characteristic {
            return Err(BraceError::NotCharacteristic);
        }
        // H * G ⊆ H (generators of H*G all land in H).
        let char_star = h.iter().all(|&x| (0..n).all(|g| member[self.star(x, g)]));
        // H ⊆ ker(λ_H): λ_h(g)H = gH, i.e. g⁻¹·λ_h(g) ∈ H.
        let fund_lemma_lhs = h
            .iter()
            .all(|&x| (0..n).all(|g| member[self.dot.mul(self.dot.inv(g), self.lambda_at(x, g))]));
        let fund_lemma_rhs = self.is_ideal(h)?;
        Ok(CriterionReport {
            char_star,
            fund_lemma_lhs,
            fund_lemma_rhs,
        })
    }

    /// `{(a, λ_a)}` inside the holomorph of `dot`.
    pub fn regular_embedding(&self, hol: &Holomorph) -> Result<Vec<HolomorphElement>, BraceError> {
        let index: HashMap<&[usize], usize> = hol
            .automorphisms()
            .iter()
            .enumerate()
            .map(|(i, a)| (a.map.as_slice(), i))
            .collect();
        (0..self.order())
            .map(|a| {
                index
                    .get(self.lambda(a))
                    .map(|&k| HolomorphElement {
                        translation: a,
                        automorphism: k,
                    })
                    .ok_or(BraceError::NotRegular)
            })
            .collect()
    }

    /// A bijection that is an isomorphism for both laws, if one exists.
    pub fn find_isomorphism(&self, other: &FiniteSkewBrace) -> Option<GroupHom> {
        if self.order() != other.order() {
            return None;
        }
        let n = self.order();
        let mut found = None;
        search_isomorphisms(&self.dot, &other.dot, |m| {
            let ok = (0..n).all(|a| (0..n).all(|b| m[self.circ.mul(a, b)] == other.circ.mul(m[a], m[b])));
            if ok {
                found = Some(GroupHom { map: m.to_vec() });
            }
            !ok
        });
        found
    }

    pub fn is_isomorphic(&self, other: &FiniteSkewBrace) -> bool {
        self.find_isomorphism(other).is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Triviality {
    Trivial,
    AlmostTrivial,
    Neither,
}

impl std::fmt::Display for Triviality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Triviality::Trivial => "trivial",
            Triviality::AlmostTrivial => "almost trivial",
            Triviality::Neither => "neither",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BraceIdeal {
    pub elements: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealFailure {
    NotDotSubgroup,
    NotDotNormal,
    NotCircNormal,
    NotLambdaStable,
}

impl std::fmt::Display for IdealFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            IdealFailure::NotDotSubgroup => "not a subgroup of the additive group",
            IdealFailure::NotDotNormal => "not normal in the additive group",
            IdealFailure::NotCircNormal => "not a normal subgroup of the multiplicative group",
            IdealFailure::NotLambdaStable => "not stable under every lambda map",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdealCheck {
    pub dot_subgroup: bool,
    pub dot_normal: bool,
    pub circ_normal: bool,
    pub lambda_stable: bool,
}

impl IdealCheck {
    pub fn is_ideal(&self) -> bool {
        self.first_failure().is_none()
    }

    pub fn first_failure(&self) -> Option<IdealFailure> {
        if !self.dot_subgroup {
            Some(IdealFailure::NotDotSubgroup)
        } else if !self.dot_normal {
            Some(IdealFailure::NotDotNormal)
        } else if !self.circ_normal {
            Some(IdealFailure::NotCircNormal)
        } else if !self.lambda_stable {
            Some(IdealFailure::NotLambdaStable)
        } else {
            None
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedSeries {
    pub terms: Vec<BraceIdeal>,
    pub solvable: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CriterionReport {
    pub char_star: bool,
    pub fund_lemma_lhs: bool,
    pub fund_lemma_rhs: bool,
}

/// Rebuilds the brace from a regular subgroup of `hol`: `a∘b = r_a·b` where
/// `r_a` is the unique element sending `0` to `a`.
pub fn brace_from_regular_subgroup(
    hol: &Holomorph,
    elements: &[HolomorphElement],
) -> Result<FiniteSkewBrace, BraceError> {
    let n = hol.base().order();
    if elements.len() != n {
        return Err(BraceError::NotRegular);
    }
    let mut by_translation = vec![usize::MAX; n];
    for e in elements {
        if by_translation[e.translation] != usize::MAX {
            return Err(BraceError::NotRegular);
        }
        by_translation[e.translation] = e.automorphism;
    }
    let mut table = vec![0; n * n];
    for a in 0..n {
        let r = HolomorphElement {
            translation: a,
            automorphism: by_translation[a],
        };
        for b in 0..n {
            table[a * n + b] = hol.act(r, b);
        }
    }
    let circ = FiniteGroup::from_flat(n, table).map_err(|_| BraceError::NotRegular)?;
    verify_brace(hol.base(), &circ)
}

/// All skew braces with the given additive group, one per regular subgroup
/// of the holomorph, sorted by circ table.
pub fn enumerate_braces(additive: &FiniteGroup, bound: usize) -> Result<Vec<FiniteSkewBrace>, BraceError> {
    let n = additive.order();
    if n > bound {
        return Err(BraceError::OrderBoundExceeded { order: n, bound });
    }
    let hol = Holomorph::new(additive);
    let subgroups = regular_subgroups(&hol);
    let mut braces: Vec<FiniteSkewBrace> = subgroups
        .par_iter()
        .map(|r| brace_from_regular_subgroup(&hol, r).expect("search yields regular subgroups"))
        .collect();
    braces.sort_by(|a, b| a.circ.flat_table().cmp(b.circ.flat_table()));
    braces.dedup();
    Ok(braces)
}

const EMPTY: u32 = u32::MAX;

/// Every regular subgroup of the holomorph, each as its `n` elements sorted
/// by translation.
///
/// Depth-first: at each node the current subgroup acts semiregularly (no
/// two elements share a translation). Branch on the smallest translation it
/// does not reach and try every automorphism for it. Each regular subgroup
/// is reached along exactly one path, so no deduplication is needed.
pub fn regular_subgroups(hol: &Holomorph) -> Vec<Vec<HolomorphElement>> {
    let n = hol.base().order();
    let mut root = vec![EMPTY; n];
    root[0] = 0;
    if n == 1 {
        return vec![collect_elements(&root)];
    }
    let first = 1;
    let mut out: Vec<Vec<HolomorphElement>> = (0..hol.aut_count())
        .into_par_iter()
        .flat_map_iter(|phi| {
            let mut found = Vec::new();
            let gen = HolomorphElement {
                translation: first,
                automorphism: phi,
            };
            if let Some(slots) = close_with(hol, &[gen]) {
                search(hol, vec![gen], slots, &mut found);
            }
            found
        })
        .collect();
    out.sort();
    out
}

fn search(hol: &Holomorph, gens: Vec<HolomorphElement>, slots: Vec<u32>, found: &mut Vec<Vec<HolomorphElement>>) {
    let Some(next) = slots.iter().position(|&s| s == EMPTY) else {
        found.push(collect_elements(&slots));
        return;
    };
    for phi in 0..hol.aut_count() {
        let mut g = gens.clone();
        g.push(HolomorphElement {
            translation: next,
            automorphism: phi,
        });
        if let Some(s) = close_with(hol, &g) {
            search(hol, g, s, found);
        }
    }
}

fn collect_elements(slots: &[u32]) -> Vec<HolomorphElement> {
    slots
        .iter()
        .enumerate()
        .map(|(t, &a)| HolomorphElement {
            translation: t,
            automorphism: a as usize,
        })
        .collect()
}

/// Closes `gens` under multiplication. Fails as soon as two elements share a
/// translation, or if the size does not divide `n`.
fn close_with(hol: &Holomorph, gens: &[HolomorphElement]) -> Option<Vec<u32>> {
    let n = hol.base().order();
    let mut slots = vec![EMPTY; n];
    slots[0] = 0;
    let mut queue = vec![hol.identity()];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for &g in gens {
            let y = hol.mul(x, g);
            let s = &mut slots[y.translation];
            if *s == EMPTY {
                *s = y.automorphism as u32;
                queue.push(y);
            } else if *s != y.automorphism as u32 {
                return None;
            }
        }
    }
    if !n.is_multiple_of(queue.len()) {
        return None;
    }
    Some(slots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        FiniteGroup::symmetric(3)
    }

    fn a3_of(g: &FiniteGroup) -> Vec<usize> {
        let all: Vec<usize> = g.elements().collect();
        g.commutator_subgroup(&all, &all).unwrap()
    }

    #[test]
    fn trivial_and_almost_trivial_are_braces() {
        let g = s3();
        let b = verify_brace(&g, &g).unwrap();
        assert_eq!(b.classify_triviality(), Triviality::Trivial);
        assert!((0..6).all(|a| b.lambda(a) == (0..6).collect::<Vec<_>>().as_slice()));
        let op = verify_brace(&g, &g.opposite()).unwrap();
        assert_eq!(op.classify_triviality(), Triviality::AlmostTrivial);
    }

    #[test]
    fn almost_trivial_lambda_is_conjugation() {
        let g = s3();
        let b = FiniteSkewBrace::almost_trivial(&g);
        for a in 0..6 {
            for x in 0..6 {
                assert_eq!(b.lambda_at(a, x), g.mul(g.mul(g.inv(a), x), a));
                assert_eq!(b.star(a, x), g.mul(g.mul(g.mul(g.inv(a), x), a), g.inv(x)));
            }
        }
    }

    #[test]
    fn star_with_identity_is_identity() {
        let b = FiniteSkewBrace::almost_trivial(&s3());
        assert!((0..6).all(|x| b.star(x, 0) == 0));
        let t = FiniteSkewBrace::trivial(&s3());
        assert!((0..6).all(|x| (0..6).all(|y| t.star(x, y) == 0)));
    }

    /// Brute-force reference for the brace identity.
    fn identity_holds(dot: &FiniteGroup, circ: &FiniteGroup) -> bool {
        let n = dot.order();
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    circ.mul(a, dot.mul(b, c)) == dot.mul(dot.mul(circ.mul(a, b), dot.inv(a)), circ.mul(a, c))
                })
            })
        })
    }

    #[test]
    fn brace_identity_agrees_with_brute_force() {
        let c4 = FiniteGroup::cyclic(4);
        let perms = [[0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3], [0, 2, 3, 1], [0, 3, 1, 2], [0, 3, 2, 1]];
        let mut violations = 0;
        for circ_base in [FiniteGroup::elementary_abelian_2(2), c4.clone()] {
            for p in perms {
                let circ = circ_base.relabel(&p);
                let expected = identity_holds(&c4, &circ);
                match verify_brace(&c4, &circ) {
                    Ok(_) => assert!(expected),
                    Err(BraceError::BraceIdentityViolation { a, b, c }) => {
                        assert!(!expected);
                        violations += 1;
                        let lhs = circ.mul(a, c4.mul(b, c));
                        let rhs = c4.mul(c4.mul(circ.mul(a, b), c4.inv(a)), circ.mul(a, c));
                        assert_ne!(lhs, rhs);
                    }
                    Err(e) => panic!("unexpected error {e:?}"),
                }
            }
        }
        assert!(violations > 0);
        // There is only one Klein table with identity 0 on four points, and it
        // is a circ law for C4.
        assert!(verify_brace(&c4, &FiniteGroup::elementary_abelian_2(2)).is_ok());
    }

    #[test]
    fn order_mismatch() {
        assert!(matches!(
            verify_brace(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3)),
            Err(BraceError::OrderMismatch { dot: 2, circ: 3 })
        ));
    }

    #[test]
    fn identity_mismatch_from_raw_tables() {
        let dot = vec![vec![0, 1], vec![1, 0]];
        let circ = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(
            verify_brace_tables(dot, circ).unwrap_err(),
            BraceError::IdentityMismatch { circ_identity: 1 }
        );
    }

    #[test]
    fn ideals_of_small_braces() {
        let b = FiniteSkewBrace::trivial(&FiniteGroup::cyclic(4));
        let ideals = b.all_ideals(DEFAULT_ORDER_BOUND).unwrap();
        let sizes: Vec<usize> = ideals.iter().map(|i| i.elements.len()).collect();
        assert_eq!(sizes, vec![1, 2, 4]);

        let v4 = FiniteGroup::elementary_abelian_2(2);
        let t = FiniteSkewBrace::trivial(&v4);
        assert_eq!(t.all_ideals(60).unwrap().len(), v4.all_subgroups().len());

        let g = s3();
        let at = FiniteSkewBrace::almost_trivial(&g);
        assert!(at.is_ideal(&a3_of(&g)).unwrap());
        assert!(at.is_ideal(&[0]).unwrap());
        assert!(at.is_ideal(&(0..6).collect::<Vec<_>>()).unwrap());
        assert_eq!(at.all_ideals(60).unwrap().len(), 3);
    }

    #[test]
    fn order_bound_is_enforced() {
        let b = FiniteSkewBrace::trivial(&FiniteGroup::cyclic(8));
        assert!(matches!(
            b.all_ideals(4),
            Err(BraceError::OrderBoundExceeded { order: 8, bound: 4 })
        ));
        assert!(matches!(
            enumerate_braces(&FiniteGroup::cyclic(8), 4),
            Err(BraceError::OrderBoundExceeded { .. })
        ));
    }

    #[test]
    fn quotients() {
        let g = s3();
        let at = FiniteSkewBrace::almost_trivial(&g);
        let (q, proj) = at.quotient(&a3_of(&g)).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(q.classify_triviality(), Triviality::Trivial);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(proj[g.mul(a, b)], q.dot().mul(proj[a], proj[b]));
                assert_eq!(proj[at.circ().mul(a, b)], q.circ().mul(proj[a], proj[b]));
            }
        }
        let (one, _) = at.quotient(&(0..6).collect::<Vec<_>>()).unwrap();
        assert_eq!(one.order(), 1);
        let (same, proj) = at.quotient(&[0]).unwrap();
        assert_eq!(proj, (0..6).collect::<Vec<_>>());
        assert_eq!(same, at);
    }

    #[test]
    fn quotient_by_non_ideal_fails() {
        let g = s3();
        let at = FiniteSkewBrace::almost_trivial(&g);
        // A subgroup of order 2 is not normal in S3.
        let t = (1..6).find(|&x| g.element_order(x) == 2).unwrap();
        assert_eq!(
            at.quotient(&[0, t]).unwrap_err(),
            BraceError::NotAnIdeal(IdealFailure::NotDotNormal)
        );
        assert!(at.quotient(&[0, 1, 2]).unwrap_err().to_string().starts_with("not an ideal"));
    }

    #[test]
    fn derived_series_examples() {
        let t = FiniteSkewBrace::trivial(&FiniteGroup::cyclic(6));
        let ds = t.derived_series();
        assert_eq!(ds.terms.len(), 2);
        assert!(ds.solvable);

        let g = s3();
        let at = FiniteSkewBrace::almost_trivial(&g);
        let ds = at.derived_series();
        let sizes: Vec<usize> = ds.terms.iter().map(|t| t.elements.len()).collect();
        assert_eq!(sizes, vec![6, 3, 1]);
        assert_eq!(ds.terms[1].elements, a3_of(&g));
        assert!(ds.solvable);
    }

    #[test]
    fn criterion_checks_on_trivial_subgroups() {
        let g = s3();
        let at = FiniteSkewBrace::almost_trivial(&g);
        let auts = crate::group::automorphisms(&g);
        for h in [vec![0], (0..6).collect::<Vec<_>>()] {
            let r = at.criterion_checks(&h, &auts).unwrap();
            assert!(r.char_star && r.fund_lemma_lhs && r.fund_lemma_rhs);
        }
        let t = (1..6).find(|&x| g.element_order(x) == 2).unwrap();
        assert_eq!(at.criterion_checks(&[0, t], &auts), Err(BraceError::NotCharacteristic));
    }

    #[test]
    fn enumeration_of_tiny_groups() {
        assert_eq!(enumerate_braces(&FiniteGroup::trivial(), 60).unwrap().len(), 1);
        let c2 = enumerate_braces(&FiniteGroup::cyclic(2), 60).unwrap();
        assert_eq!(c2.len(), 1);
        assert_eq!(c2[0].classify_triviality(), Triviality::Trivial);
    }

    #[test]
    fn regular_embedding_round_trip() {
        let g = s3();
        let hol = Holomorph::new(&g);
        for b in [FiniteSkewBrace::trivial(&g), FiniteSkewBrace::almost_trivial(&g)] {
            let emb = b.regular_embedding(&hol).unwrap();
            assert_eq!(brace_from_regular_subgroup(&hol, &emb).unwrap(), b);
        }
        let triv = FiniteSkewBrace::trivial(&g).regular_embedding(&hol).unwrap();
        assert!(triv.iter().all(|e| e.automorphism == 0));
    }

    #[test]
    fn brace_isomorphism_detects_relabelling() {
        let g = s3();
        let at = FiniteSkewBrace::almost_trivial(&g);
        let perm = [0, 2, 1, 4, 3, 5];
        let relabelled = verify_brace(&g.relabel(&perm), &g.opposite().relabel(&perm)).unwrap();
        assert!(at.is_isomorphic(&relabelled));
        assert!(!at.is_isomorphic(&FiniteSkewBrace::trivial(&g)));
    }
}
