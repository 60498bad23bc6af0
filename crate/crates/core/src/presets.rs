//! Named built-in structures.
//!
//! Group names are products of factors joined by `x`, for example `s3`,
//! `c4xc2` or `c3xc2cubed`. Factors are `c<n>` (cyclic), `d<m>` (dihedral of
//! order `2m`), `dic<m>` (dicyclic of order `4m`), `s<n>`, `a<n>`, `q8` and
//! `v4`; a factor may end in `squared` or `cubed`. Brace names are a group name followed by `_trivial` or
//! `_opposite`.

use crate::brace::FiniteSkewBrace;
use crate::group::FiniteGroup;
use crate::grouplaw::{preset_brace_law, BraceLaw};
use crate::lie::{LieAlgebra, PostLieAlgebra};

/// Keeps preset groups small enough for table-based algorithms.
const MAX_PRESET_ORDER: usize = 5040;

fn factor(token: &str) -> Option<FiniteGroup> {
    let (base, power) = if let Some(b) = token.strip_suffix("cubed") {
        (b, 3)
    } else if let Some(b) = token.strip_suffix("squared") {
        (b, 2)
    } else {
        (token, 1)
    };
    let g = match base {
        "q8" => FiniteGroup::quaternion(),
        "v4" => FiniteGroup::elementary_abelian_2(2),
        _ if base.starts_with("dic") => {
            let m: usize = base[3..].parse().ok().filter(|&m| m >= 2 && 4 * m <= MAX_PRESET_ORDER)?;
            FiniteGroup::dicyclic(m)
        }
        _ => {
            let (kind, digits) = base.split_at(base.len().min(1));
            let n: usize = digits.parse().ok().filter(|&n| n >= 1)?;
            match kind {
                "c" if n <= MAX_PRESET_ORDER => FiniteGroup::cyclic(n),
                "d" if n >= 3 && 2 * n <= MAX_PRESET_ORDER => FiniteGroup::dihedral(n),
                "s" if n <= 7 => FiniteGroup::symmetric(n),
                "a" if (2..=7).contains(&n) => FiniteGroup::alternating(n),
                _ => return None,
            }
        }
    };
    let mut out = g.clone();
    for _ in 1..power {
        out = checked_product(&out, &g)?;
    }
    Some(out)
}

fn checked_product(a: &FiniteGroup, b: &FiniteGroup) -> Option<FiniteGroup> {
    (a.order() * b.order() <= MAX_PRESET_ORDER).then(|| FiniteGroup::direct_product(a, b))
}

pub fn group(name: &str) -> Option<FiniteGroup> {
    let mut tokens = name.split('x');
    let mut g = factor(tokens.next()?)?;
    for t in tokens {
        g = checked_product(&g, &factor(t)?)?;
    }
    Some(g)
}

pub fn brace(name: &str) -> Option<FiniteSkewBrace> {
    if let Some(g) = name.strip_suffix("_trivial") {
        return group(g).map(|g| FiniteSkewBrace::trivial(&g));
    }
    if let Some(g) = name.strip_suffix("_opposite") {
        return group(g).map(|g| FiniteSkewBrace::almost_trivial(&g));
    }
    None
}

pub fn lie_algebra(name: &str) -> Option<LieAlgebra> {
    if let Some(n) = name.strip_prefix("abelian_").and_then(|d| d.parse::<usize>().ok()) {
        return (n >= 1).then(|| LieAlgebra::abelian(n));
    }
    Some(match name {
        "sl2" => LieAlgebra::sl2(),
        "so3" => LieAlgebra::so3(),
        "a1_1_circ" => LieAlgebra::a1_1_circ(),
        "sl2xsl2" => LieAlgebra::direct_sum(&LieAlgebra::sl2(), &LieAlgebra::sl2()),
        _ => return None,
    })
}

/// Post-Lie names: `<lie>_case1` (`▷ = 0`), `<lie>_case2` (`▷ = −[·,·]`)
/// and `a1_1`.
pub fn postlie(name: &str) -> Option<PostLieAlgebra> {
    if name == "a1_1" {
        return Some(PostLieAlgebra::a1_1());
    }
    if let Some(l) = name.strip_suffix("_case1") {
        return lie_algebra(l).map(|l| PostLieAlgebra::trivial(&l));
    }
    if let Some(l) = name.strip_suffix("_case2") {
        return lie_algebra(l).map(|l| PostLieAlgebra::negated_bracket(&l));
    }
    None
}

pub fn brace_law(name: &str) -> Option<BraceLaw> {
    preset_brace_law(name)
}

/// One line per preset family, for listings.
pub fn catalog() -> Vec<(&'static str, &'static str)> {
    vec![
        ("group", "c<n> d<m> dic<m> s<n> a<n> q8 v4, factors joined by x, suffix squared/cubed (e.g. c3xc2cubed)"),
        ("brace", "<group>_trivial <group>_opposite"),
        ("liealg", "sl2 so3 a1_1_circ sl2xsl2 abelian_<n>"),
        ("postlie", "a1_1 <liealg>_case1 <liealg>_case2"),
        ("bracelaw", PRESET_LAWS_LINE),
    ]
}

const PRESET_LAWS_LINE: &str = "a1_1_model a1_1_model_xyz affine2d affine2d_almost_trivial abelian_<n>";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouplaw::PRESET_LAWS;

    #[test]
    fn group_names() {
        assert_eq!(group("c3xc2cubed").unwrap().order(), 24);
        assert!(group("c3xc2cubed").unwrap().is_abelian());
        assert_eq!(group("s4").unwrap().order(), 24);
        assert_eq!(group("d4").unwrap().order(), 8);
        assert_eq!(group("c4xc2").unwrap().order(), 8);
        assert!(group("c0").is_none());
        assert!(group("z5").is_none());
        assert!(group("s9").is_none());
        assert!(group("c100xc100").is_none());
        assert!(group("d2").is_none());
        assert!(group("dic1").is_none());
        let dic3 = group("dic3").unwrap();
        assert_eq!(dic3.order(), 12);
        assert!(!dic3.is_abelian());
        assert_eq!(dic3.center().len(), 2);
        for other in ["a4", "d6", "c6xc2", "c12"] {
            assert!(!crate::group::isomorphic(&dic3, &group(other).unwrap()));
        }
        assert!(crate::group::isomorphic(&group("dic2").unwrap(), &group("q8").unwrap()));
    }

    #[test]
    fn other_names() {
        assert_eq!(brace("s3_opposite").unwrap().order(), 6);
        assert!(brace("s3").is_none());
        assert_eq!(lie_algebra("sl2xsl2").unwrap().dim(), 6);
        assert_eq!(postlie("sl2_case2").unwrap().circ(), &LieAlgebra::sl2().negated());
        assert!(brace_law("a1_1_model").is_some());
        assert_eq!(PRESET_LAWS.join(" ").replace("abelian_n", "abelian_<n>"), PRESET_LAWS_LINE);
    }
}
