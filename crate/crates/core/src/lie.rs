//! Lie algebras and post-Lie algebras given by rational structure constants.
//!
//! A Lie algebra stores its bracket as a [`BilinearMap`] with
//! `[e_i, e_j] = sum_k c[i][j][k] e_k`. A post-Lie algebra adds a second
//! bilinear product `▷` and derives the sub-adjacent bracket
//! `[x, y]∘ = [x, y]· + x▷y − y▷x`.

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{
    bilinear_closure, largest_invariant_subspace, operator_closure, rational_roots, rat, BilinearMap,
    LinalgError, Rational, RationalMatrix, RationalSubspace,
};

/// Largest dimension for which ideal enumeration is complete.
pub const LOWDIM_LIMIT: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("bracket is not antisymmetric at ({}, {}, {})", .i + 1, .j + 1, .k + 1)]
    NotAntisymmetric { i: usize, j: usize, k: usize },
    #[error("Jacobi identity fails on basis triple ({}, {}, {})", .i + 1, .j + 1, .k + 1)]
    JacobiViolation { i: usize, j: usize, k: usize },
    #[error("post-Lie axiom ({}) fails at ({}, {}, {})", roman(*.axiom), .i + 1, .j + 1, .k + 1)]
    AxiomViolation { axiom: u8, i: usize, j: usize, k: usize },
    #[error("dimension {dim} exceeds the supported limit {limit}")]
    DimTooLarge { dim: usize, limit: usize },
    #[error("ideal search incomplete over the rationals: an irrational eigenvalue can carry an invariant subspace")]
    IncompleteOverRationals,
    #[error("algebra is not semisimple")]
    NotSemisimple,
    #[error("multiplicative algebra is not simple")]
    CircNotSimple,
    #[error("sub-adjacent bracket fails Jacobi at ({}, {}, {}) although the axioms hold", .i + 1, .j + 1, .k + 1)]
    CircNotLie { i: usize, j: usize, k: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn roman(axiom: u8) -> &'static str {
    match axiom {
        1 => "i",
        2 => "ii",
        3 => "iii",
        _ => "?",
    }
}

/// A Lie algebra over the rationals in a fixed basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LieAlgebra {
    bracket: BilinearMap,
}

impl LieAlgebra {
    /// Validates antisymmetry and the Jacobi identity.
    pub fn new(bracket: BilinearMap) -> Result<Self, LieError> {
        check_antisymmetric(&bracket)?;
        check_jacobi(&bracket)?;
        Ok(LieAlgebra { bracket })
    }

    /// Builds the bracket from entries `(i, j, k, c)` with `i < j`, filling in
    /// `[e_j, e_i] = -[e_i, e_j]`.
    pub fn from_upper(dim: usize, entries: &[(usize, usize, usize, Rational)]) -> Result<Self, LieError> {
        Self::new(antisymmetric_completion(dim, entries)?)
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            bracket: BilinearMap::zero(dim),
        }
    }

    /// `sl₂` in the basis `(h, e, f)`: `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
    pub fn sl2() -> Self {
        Self::from_upper(3, &[(0, 1, 1, rat(2)), (0, 2, 2, rat(-2)), (1, 2, 0, rat(1))]).expect("sl2 is a Lie algebra")
    }

    /// `so(3)`: `[e1,e2] = e3`, `[e2,e3] = e1`, `[e3,e1] = e2`.
    pub fn so3() -> Self {
        Self::from_upper(3, &[(0, 1, 2, rat(1)), (1, 2, 0, rat(1)), (0, 2, 1, rat(-1))]).expect("so3 is a Lie algebra")
    }

    /// The solvable algebra `[e1,e2] = e2`, `[e1,e3] = -e3`, `[e2,e3] = 0`.
    pub fn a1_1_circ() -> Self {
        Self::from_upper(3, &[(0, 1, 1, rat(1)), (0, 2, 2, rat(-1))]).expect("a1_1 circ is a Lie algebra")
    }

    /// Block direct sum.
    pub fn direct_sum(a: &Self, b: &Self) -> Self {
        let (da, db) = (a.dim(), b.dim());
        let n = da + db;
        let mut br = BilinearMap::zero(n);
        for i in 0..da {
            for j in 0..da {
                for k in 0..da {
                    br.set(i, j, k, a.bracket.get(i, j, k).clone());
                }
            }
        }
        for i in 0..db {
            for j in 0..db {
                for k in 0..db {
                    br.set(da + i, da + j, da + k, b.bracket.get(i, j, k).clone());
                }
            }
        }
        LieAlgebra { bracket: br }
    }

    pub fn negated(&self) -> Self {
        LieAlgebra {
            bracket: self.bracket.map_entries(|x| -x),
        }
    }

    pub fn dim(&self) -> usize {
        self.bracket.dim()
    }

    pub fn bracket(&self) -> &BilinearMap {
        &self.bracket
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.is_zero()
    }

    pub fn bracket_vectors(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        self.bracket.apply(x, y)
    }

    /// Matrix of `ad e_i`.
    pub fn ad(&self, i: usize) -> RationalMatrix {
        self.bracket.left_operator(i)
    }

    pub fn ad_matrices(&self) -> Vec<RationalMatrix> {
        (0..self.dim()).map(|i| self.ad(i)).collect()
    }

    /// Span of `[x, y]` for `x` in `a`, `y` in `b`.
    pub fn bracket_span(&self, a: &RationalSubspace, b: &RationalSubspace) -> RationalSubspace {
        bracket_span(&self.bracket, a, b)
    }

    pub fn ideal_generated(&self, seed: &RationalSubspace) -> Result<RationalSubspace, LieError> {
        Ok(bilinear_closure(seed, std::slice::from_ref(&self.bracket), self.dim())?)
    }

    pub fn is_ideal(&self, s: &RationalSubspace) -> Result<bool, LieError> {
        Ok(is_invariant(s, &self.ad_matrices())?)
    }

    /// `L, [L,L], ...` until it stabilizes.
    pub fn derived_series(&self) -> Vec<RationalSubspace> {
        let mut series = vec![RationalSubspace::full(self.dim())];
        loop {
            let last = series.last().expect("nonempty");
            let span = self.bracket_span(last, last);
            let next = self.ideal_generated(&span).expect("dimensions agree");
            if next == *last {
                return series;
            }
            series.push(next);
        }
    }

    /// `L, [L,L], [L,[L,L]], ...` until it stabilizes.
    pub fn lower_central_series(&self) -> Vec<RationalSubspace> {
        let full = RationalSubspace::full(self.dim());
        let mut series = vec![full.clone()];
        loop {
            let last = series.last().expect("nonempty");
            let next = self.bracket_span(&full, last);
            if next == *last {
                return series;
            }
            series.push(next);
        }
    }

    pub fn center(&self) -> RationalSubspace {
        let n = self.dim();
        let mut rows = Vec::with_capacity(n * n);
        for ad in self.ad_matrices() {
            rows.extend(ad.row_vecs());
        }
        let stacked = RationalMatrix::from_rows_with_cols(rows, n).expect("square ad matrices");
        RationalSubspace::span(n, &stacked.kernel()).expect("kernel vectors have ambient length")
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().is_some_and(RationalSubspace::is_zero)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().is_some_and(RationalSubspace::is_zero)
    }

    /// `K(e_i, e_j) = tr(ad e_i ∘ ad e_j)`.
    pub fn killing_form(&self) -> RationalMatrix {
        let ads = self.ad_matrices();
        let n = self.dim();
        let mut k = RationalMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let t = ads[i].mul(&ads[j]).expect("square").trace();
                k.set(i, j, t.clone());
                k.set(j, i, t);
            }
        }
        k
    }

    /// Cartan's criterion: semisimple iff the Killing form is nondegenerate.
    pub fn is_semisimple(&self) -> bool {
        self.dim() > 0 && !self.killing_form().determinant().is_zero()
    }

    /// Nonabelian with no ideals besides `0` and `L`.
    pub fn is_simple(&self) -> Result<bool, LieError> {
        if self.is_abelian() {
            return Ok(false);
        }
        if self.dim() <= LOWDIM_LIMIT {
            let lattice = self.all_ideals_lowdim()?;
            return Ok(lattice.families.is_empty() && lattice.ideals.len() == 2);
        }
        if !self.is_semisimple() {
            return Ok(false);
        }
        let count = self.simple_summand_count()?;
        Ok(count.count == 1 && !count.non_split)
    }

    /// Complete ideal list in dimension at most three.
    pub fn all_ideals_lowdim(&self) -> Result<IdealLattice, LieError> {
        invariant_subspaces_lowdim(self.dim(), &self.ad_matrices())
    }

    /// Number of simple summands of a semisimple algebra, read off from its
    /// centroid (the maps commuting with every `ad`).
    pub fn simple_summand_count(&self) -> Result<SummandCount, LieError> {
        if !self.is_semisimple() {
            return Err(LieError::NotSemisimple);
        }
        let centroid = self.centroid();
        let d = centroid.len();
        // Summands whose centroid is the rationals each contribute one
        // distinct rational eigenvalue to a generic centroid element.
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut best = SummandCount {
            count: 0,
            non_split: true,
        };
        for attempt in 0..8 {
            let n = self.dim();
            let mut t = RationalMatrix::zeros(n, n);
            for (idx, b) in centroid.iter().enumerate() {
                let c = if attempt == 0 { rat(idx as i64 + 1) } else { rat(rng.gen_range(-20..=20)) };
                t = t.add(&b.scale(&c)).expect("same shape");
            }
            let (roots, rest) = rational_roots(&t.characteristic_polynomial());
            let split = rest.len() <= 1;
            let count = roots.len() + usize::from(!split);
            if split && roots.len() == d {
                return Ok(SummandCount {
                    count: d,
                    non_split: false,
                });
            }
            if count > best.count {
                best.count = count;
            }
        }
        Ok(best)
    }

    /// Basis of the centroid as matrices.
    pub fn centroid(&self) -> Vec<RationalMatrix> {
        let n = self.dim();
        let ads = self.ad_matrices();
        // Unknown T (n*n entries, row-major); constraints T ad_i - ad_i T = 0.
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for ad in &ads {
            for r in 0..n {
                for c in 0..n {
                    let mut row = vec![Rational::zero(); n * n];
                    // (T ad)[r][c] = sum_m T[r][m] ad[m][c]
                    for m in 0..n {
                        row[r * n + m] += ad.get(m, c);
                    }
                    // (ad T)[r][c] = sum_m ad[r][m] T[m][c]
                    for m in 0..n {
                        row[m * n + c] -= ad.get(r, m);
                    }
                    rows.push(row);
                }
            }
        }
        let system = RationalMatrix::from_rows_with_cols(rows, n * n).expect("rows have n*n entries");
        system
            .kernel()
            .into_iter()
            .map(|v| {
                let rows = v.chunks(n).map(<[Rational]>::to_vec).collect();
                RationalMatrix::from_rows(rows).expect("square")
            })
            .collect()
    }
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bracket(f, "c", &self.bracket, true)
    }
}

fn write_bracket(f: &mut fmt::Formatter<'_>, tag: &str, t: &BilinearMap, upper_only: bool) -> fmt::Result {
    for (i, j, k, v) in t.nonzero_entries() {
        if !upper_only || i < j {
            writeln!(f, "{tag} {} {} {} {}", i + 1, j + 1, k + 1, crate::linalg::format_rational(v))?;
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SummandCount {
    pub count: usize,
    /// The centroid did not split over the rationals; `count` is a lower bound.
    pub non_split: bool,
}

pub fn antisymmetric_completion(
    dim: usize,
    entries: &[(usize, usize, usize, Rational)],
) -> Result<BilinearMap, LieError> {
    let mut br = BilinearMap::zero(dim);
    for (i, j, k, c) in entries {
        let (i, j, k) = (*i, *j, *k);
        if i >= dim || j >= dim || k >= dim {
            return Err(LinalgError::DimensionMismatch {
                expected: dim,
                found: i.max(j).max(k) + 1,
            }
            .into());
        }
        if i == j && !c.is_zero() {
            return Err(LieError::NotAntisymmetric { i, j, k });
        }
        br.set(i, j, k, c.clone());
        br.set(j, i, k, -c.clone());
    }
    Ok(br)
}

pub fn check_antisymmetric(bracket: &BilinearMap) -> Result<(), LieError> {
    let n = bracket.dim();
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                if *bracket.get(i, j, k) != -bracket.get(j, i, k).clone() {
                    return Err(LieError::NotAntisymmetric { i, j, k });
                }
            }
        }
    }
    Ok(())
}

/// Jacobi identity `[x,[y,z]] + [y,[z,x]] + [z,[x,y]] = 0` on basis triples.
pub fn check_jacobi(bracket: &BilinearMap) -> Result<(), LieError> {
    let n = bracket.dim();
    let e = |i: usize| crate::linalg::unit_vector(n, i);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (x, y, z) = (e(i), e(j), e(k));
                let t1 = bracket.apply(&x, bracket.basis_product(j, k));
                let t2 = bracket.apply(&y, bracket.basis_product(k, i));
                let t3 = bracket.apply(&z, bracket.basis_product(i, j));
                if t1.iter().zip(&t2).zip(&t3).any(|((a, b), c)| !(a + b + c).is_zero()) {
                    return Err(LieError::JacobiViolation { i, j, k });
                }
            }
        }
    }
    Ok(())
}

fn bracket_span(t: &BilinearMap, a: &RationalSubspace, b: &RationalSubspace) -> RationalSubspace {
    let mut vectors = Vec::new();
    for x in a.basis_vectors() {
        for y in b.basis_vectors() {
            vectors.push(t.apply(&x, &y));
        }
    }
    RationalSubspace::span(t.dim(), &vectors).expect("bracket output has ambient length")
}

fn is_invariant(s: &RationalSubspace, ops: &[RationalMatrix]) -> Result<bool, LinalgError> {
    for op in ops {
        if !s.image_under(op)?.is_subspace_of(s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Ideals of a low-dimensional algebra (or, more generally, the subspaces
/// invariant under a family of operators).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealLattice {
    /// Isolated members including `0` and the whole space, canonically sorted.
    pub ideals: Vec<RationalSubspace>,
    /// Continuous families; empty unless some eigenspace has dimension ≥ 2.
    pub families: Vec<IdealFamily>,
}

impl IdealLattice {
    pub fn has_continuous_family(&self) -> bool {
        !self.families.is_empty()
    }

    /// Number of proper nonzero members, or `None` if there are infinitely many.
    pub fn proper_count(&self) -> Option<usize> {
        if self.has_continuous_family() {
            return None;
        }
        Some(self.ideals.iter().filter(|s| !s.is_zero() && !s.is_full()).count())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealFamily {
    /// Every line inside this subspace.
    Lines(RationalSubspace),
    /// The kernel of every nonzero functional in this span (of functionals).
    Hyperplanes(RationalSubspace),
}

/// All subspaces invariant under every operator, for ambient dimension at
/// most three. Lines come from common eigenvectors, hyperplanes from common
/// eigenvectors of the transposes.
pub fn invariant_subspaces_lowdim(dim: usize, ops: &[RationalMatrix]) -> Result<IdealLattice, LieError> {
    if dim > LOWDIM_LIMIT {
        return Err(LieError::DimTooLarge {
            dim,
            limit: LOWDIM_LIMIT,
        });
    }
    let mut ideals = vec![RationalSubspace::zero(dim)];
    let mut families = Vec::new();
    if dim >= 1 {
        ideals.push(RationalSubspace::full(dim));
    }
    if dim >= 2 {
        for space in common_eigenspaces(dim, ops)? {
            if space.dim() == 1 {
                ideals.push(space);
            } else {
                families.push(IdealFamily::Lines(space));
            }
        }
    }
    if dim == 3 {
        let transposed: Vec<RationalMatrix> = ops.iter().map(RationalMatrix::transpose).collect();
        for space in common_eigenspaces(dim, &transposed)? {
            if space.dim() == 1 {
                let f = space.basis().row(0).to_vec();
                let hyperplane = RationalSubspace::span(
                    dim,
                    &RationalMatrix::from_rows(vec![f]).expect("one row").kernel(),
                )?;
                ideals.push(hyperplane);
            } else {
                families.push(IdealFamily::Hyperplanes(space));
            }
        }
    }
    ideals.sort();
    ideals.dedup();
    Ok(IdealLattice { ideals, families })
}

/// Maximal subspaces on which every operator acts as a rational scalar.
fn common_eigenspaces(dim: usize, ops: &[RationalMatrix]) -> Result<Vec<RationalSubspace>, LieError> {
    let mut spaces = vec![RationalSubspace::full(dim)];
    for op in ops {
        let (roots, rest) = rational_roots(&op.characteristic_polynomial());
        if rest.len() > 1 {
            // Any invariant line with an irrational eigenvalue lies in
            // ker rest(op), together with its Galois conjugates; their span
            // is a rational invariant subspace there.
            let k = RationalSubspace::span(dim, &op.eval_polynomial(&rest).kernel())?;
            let w = largest_invariant_subspace(&k, ops)?;
            if !w.is_zero() && has_real_root(&rest) && commutes_on(op, ops, &w)? {
                return Err(LieError::IncompleteOverRationals);
            }
        }
        let mut next = Vec::new();
        for w in &spaces {
            for mu in &roots {
                let shifted = op.sub(&RationalMatrix::identity(dim).scale(mu))?;
                let eig = RationalSubspace::span(dim, &shifted.kernel())?;
                let part = w.intersection(&eig)?;
                if !part.is_zero() {
                    next.push(part);
                }
            }
        }
        spaces = next;
    }
    spaces.sort();
    Ok(spaces)
}

/// The cofactor left by `rational_roots` has degree at most three here and
/// is irreducible, so its roots are simple and the eigenvectors of `op` on
/// `w` are common to all operators exactly when they commute with `op` there.
fn commutes_on(op: &RationalMatrix, ops: &[RationalMatrix], w: &RationalSubspace) -> Result<bool, LinalgError> {
    for other in ops {
        let comm = other.mul(op)?.sub(&op.mul(other)?)?;
        if !w.image_under(&comm)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn has_real_root(poly: &[Rational]) -> bool {
    match poly.len() {
        3 => &poly[1] * &poly[1] - rat(4) * &poly[0] * &poly[2] > Rational::zero(),
        n => n % 2 == 0,
    }
}

/// A post-Lie algebra: a Lie bracket `dot`, a product `▷` and the derived
/// sub-adjacent bracket `circ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PostLieAlgebra {
    dot: LieAlgebra,
    triangle: BilinearMap,
    circ: LieAlgebra,
}

/// `[x,y]∘ = [x,y]· + x▷y − y▷x`. The result is not checked for Jacobi.
pub fn sub_adjacent(dot: &LieAlgebra, triangle: &BilinearMap) -> Result<BilinearMap, LieError> {
    Ok(dot.bracket().add(triangle)?.sub(&triangle.opposite())?)
}

/// Verifies every post-Lie axiom for `(dot, circ, ▷)` on basis triples:
/// (i) `[x,y]∘ − [x,y]· = x▷y − y▷x`;
/// (ii) `x▷[y,z]· = [x▷y, z]· + [y, x▷z]·`;
/// (iii) `[x,y]∘▷z = x▷(y▷z) − y▷(x▷z)`.
pub fn check_postlie_quadruple(dot: &BilinearMap, circ: &BilinearMap, triangle: &BilinearMap) -> Result<(), LieError> {
    let n = dot.dim();
    for m in [circ, triangle] {
        if m.dim() != n {
            return Err(LinalgError::DimensionMismatch {
                expected: n,
                found: m.dim(),
            }
            .into());
        }
    }
    let e = |i: usize| crate::linalg::unit_vector(n, i);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let lhs = circ.get(i, j, k) - dot.get(i, j, k);
                let rhs = triangle.get(i, j, k) - triangle.get(j, i, k);
                if lhs != rhs {
                    return Err(LieError::AxiomViolation { axiom: 1, i, j, k });
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let x = e(i);
                let lhs = triangle.apply(&x, dot.basis_product(j, k));
                let a = dot.apply(triangle.basis_product(i, j), &e(k));
                let b = dot.apply(&e(j), triangle.basis_product(i, k));
                if lhs.iter().zip(a.iter().zip(&b)).any(|(l, (p, q))| *l != p + q) {
                    return Err(LieError::AxiomViolation { axiom: 2, i, j, k });
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let lhs = triangle.apply(circ.basis_product(i, j), &e(k));
                let a = triangle.apply(&e(i), triangle.basis_product(j, k));
                let b = triangle.apply(&e(j), triangle.basis_product(i, k));
                if lhs.iter().zip(a.iter().zip(&b)).any(|(l, (p, q))| *l != p - q) {
                    return Err(LieError::AxiomViolation { axiom: 3, i, j, k });
                }
            }
        }
    }
    Ok(())
}

/// Builds the post-Lie algebra with the sub-adjacent bracket as `circ`,
/// checking every axiom and then Jacobi for `circ`.
pub fn check_postlie(dot: &LieAlgebra, triangle: &BilinearMap) -> Result<PostLieAlgebra, LieError> {
    let circ = sub_adjacent(dot, triangle)?;
    check_postlie_quadruple(dot.bracket(), &circ, triangle)?;
    if let Err(LieError::JacobiViolation { i, j, k }) = check_jacobi(&circ) {
        return Err(LieError::CircNotLie { i, j, k });
    }
    Ok(PostLieAlgebra {
        dot: dot.clone(),
        triangle: triangle.clone(),
        circ: LieAlgebra { bracket: circ },
    })
}

impl PostLieAlgebra {
    pub fn dim(&self) -> usize {
        self.dot.dim()
    }

    pub fn dot(&self) -> &LieAlgebra {
        &self.dot
    }

    pub fn circ(&self) -> &LieAlgebra {
        &self.circ
    }

    pub fn triangle(&self) -> &BilinearMap {
        &self.triangle
    }

    /// `▷ = 0`, `circ = dot`.
    pub fn trivial(dot: &LieAlgebra) -> Self {
        check_postlie(dot, &BilinearMap::zero(dot.dim())).expect("zero product is post-Lie")
    }

    /// `x▷y = −[x,y]·`, `circ = −dot`.
    pub fn negated_bracket(dot: &LieAlgebra) -> Self {
        check_postlie(dot, &dot.bracket().map_entries(|x| -x)).expect("negated bracket is post-Lie")
    }

    /// Abelian `dot` on `R^3` with `e1▷e2 = e2`, `e1▷e3 = −e3`,
    /// `e2▷e3 = e1`, `e3▷e2 = e1`.
    pub fn a1_1() -> Self {
        let mut t = BilinearMap::zero(3);
        t.set(0, 1, 1, rat(1));
        t.set(0, 2, 2, rat(-1));
        t.set(1, 2, 0, rat(1));
        t.set(2, 1, 0, rat(1));
        check_postlie(&LieAlgebra::abelian(3), &t).expect("a1_1 product is post-Lie")
    }

    /// Matrix of `y -> e_i ▷ y`.
    pub fn triangle_operator(&self, i: usize) -> RationalMatrix {
        self.triangle.left_operator(i)
    }

    /// Every operator a brace ideal must be invariant under: `ad· e_i`,
    /// `ad∘ e_i` and `e_i ▷ ·`.
    pub fn ideal_operators(&self) -> Vec<RationalMatrix> {
        let n = self.dim();
        let mut ops = Vec::with_capacity(3 * n);
        ops.extend(self.dot.ad_matrices());
        ops.extend(self.circ.ad_matrices());
        ops.extend((0..n).map(|i| self.triangle_operator(i)));
        ops
    }

    pub fn brace_ideal_test(&self, s: &RationalSubspace) -> Result<IdealReport, LieError> {
        if s.ambient_dim() != self.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dim(),
                found: s.ambient_dim(),
            }
            .into());
        }
        let n = self.dim();
        let triangle_ops: Vec<RationalMatrix> = (0..n).map(|i| self.triangle_operator(i)).collect();
        Ok(IdealReport {
            subspace: s.clone(),
            dot_ideal: self.dot.is_ideal(s)?,
            circ_ideal: self.circ.is_ideal(s)?,
            triangle_stable: is_invariant(s, &triangle_ops)?,
        })
    }

    /// Subspaces that pass every flag of [`brace_ideal_test`](Self::brace_ideal_test).
    pub fn brace_ideals_lowdim(&self) -> Result<IdealLattice, LieError> {
        invariant_subspaces_lowdim(self.dim(), &self.ideal_operators())
    }

    /// True iff no proper nonzero subspace is a brace ideal.
    pub fn is_simple_brace_infinitesimal(&self) -> Result<bool, LieError> {
        if self.dim() == 0 {
            return Ok(false);
        }
        Ok(self.brace_ideals_lowdim()?.proper_count() == Some(0))
    }

    /// `∂⁰ = L`; `∂ⁿ⁺¹` is the smallest brace ideal containing
    /// `[I,I]·`, `[I,I]∘` and `I▷I` for `I = ∂ⁿ`.
    pub fn brace_derived_series(&self) -> Result<(Vec<RationalSubspace>, bool), LieError> {
        let n = self.dim();
        if n > LOWDIM_LIMIT {
            return Err(LieError::DimTooLarge {
                dim: n,
                limit: LOWDIM_LIMIT,
            });
        }
        let ops = self.ideal_operators();
        let mut series = vec![RationalSubspace::full(n)];
        loop {
            let last = series.last().expect("nonempty");
            let seed = self
                .dot
                .bracket_span(last, last)
                .sum(&self.circ.bracket_span(last, last))?
                .sum(&bracket_span(&self.triangle, last, last))?;
            let next = operator_closure(&seed, &ops)?;
            if next == *last {
                break;
            }
            series.push(next);
        }
        let solvable = series.last().is_some_and(RationalSubspace::is_zero);
        Ok((series, solvable))
    }

    /// Which case of the simple-circ rigidity dichotomy this structure is in.
    pub fn rigidity_classify(&self) -> Result<Rigidity, LieError> {
        if !self.circ.is_simple()? {
            return Err(LieError::CircNotSimple);
        }
        if self.triangle.is_zero() {
            return Ok(Rigidity::CaseI);
        }
        let neg = self.dot.bracket().map_entries(|x| -x);
        if self.triangle == neg {
            return Ok(Rigidity::CaseII);
        }
        let n = self.dim();
        let mut mismatches = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.triangle.get(i, j, k) != neg.get(i, j, k) {
                        mismatches.push((i, j, k));
                    }
                }
            }
        }
        Ok(Rigidity::Violation { mismatches })
    }
}

impl fmt::Display for PostLieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bracket(f, "c", self.dot.bracket(), true)?;
        write_bracket(f, "t", &self.triangle, false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealReport {
    pub subspace: RationalSubspace,
    pub dot_ideal: bool,
    pub circ_ideal: bool,
    pub triangle_stable: bool,
}

impl IdealReport {
    pub fn all_flags(&self) -> bool {
        self.dot_ideal && self.circ_ideal && self.triangle_stable
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rigidity {
    /// `▷ = 0` and `circ = dot`.
    CaseI,
    /// `▷ = −[·,·]` and `circ = −dot`.
    CaseII,
    /// Neither; lists the entries where `▷` differs from `−[·,·]`.
    Violation { mismatches: Vec<(usize, usize, usize)> },
}

/// Uniformly random tensor with entries `p/q`, `|p| <= 3`, `q in 1..=3`.
pub fn random_rational_tensor(dim: usize, rng: &mut impl Rng) -> BilinearMap {
    let data = (0..dim * dim * dim)
        .map(|_| {
            let p: i64 = rng.gen_range(-3..=3);
            let q: i64 = rng.gen_range(1..=3);
            crate::linalg::ratio(p, q)
        })
        .collect();
    BilinearMap::from_flat(dim, data).expect("dim^3 entries")
}
