//! Brute-force reference implementations that share no code with the
//! library's search algorithms.

#![allow(dead_code)]

/// Every group table on `0..n` with identity `0`, found by filling a Latin
/// square whose first row and column are fixed and keeping the associative
/// ones.
pub fn all_group_tables(n: usize) -> Vec<Vec<usize>> {
    let mut t = vec![usize::MAX; n * n];
    for i in 0..n {
        t[i] = i;
        t[i * n] = i;
    }
    let mut out = Vec::new();
    fill(&mut t, n, n + 1, &mut out);
    out
}

fn fill(t: &mut Vec<usize>, n: usize, pos: usize, out: &mut Vec<Vec<usize>>) {
    if pos >= n * n {
        if associative(t, n) {
            out.push(t.clone());
        }
        return;
    }
    let (r, c) = (pos / n, pos % n);
    if c == 0 {
        fill(t, n, pos + 1, out);
        return;
    }
    for v in 0..n {
        let row_ok = (0..c).all(|j| t[r * n + j] != v);
        let col_ok = (0..r).all(|i| t[i * n + c] != v);
        if row_ok && col_ok {
            t[pos] = v;
            fill(t, n, pos + 1, out);
        }
    }
    t[pos] = usize::MAX;
}

pub fn associative(t: &[usize], n: usize) -> bool {
    (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| t[t[a * n + b] * n + c] == t[a * n + t[b * n + c]])))
}

pub fn inverse(t: &[usize], n: usize, a: usize) -> usize {
    (0..n).find(|&b| t[a * n + b] == 0).expect("group table")
}

/// `a∘(b·c) = (a∘b)·a⁻¹·(a∘c)` for all triples.
pub fn is_brace(dot: &[usize], circ: &[usize], n: usize) -> bool {
    let m = |t: &[usize], x: usize, y: usize| t[x * n + y];
    (0..n).all(|a| {
        let ai = inverse(dot, n, a);
        (0..n).all(|b| {
            (0..n).all(|c| {
                let lhs = m(circ, a, m(dot, b, c));
                let rhs = m(dot, m(dot, m(circ, a, b), ai), m(circ, a, c));
                lhs == rhs
            })
        })
    })
}

/// Number of circ tables with identity `0` forming a skew brace with `dot`.
pub fn brace_count(dot: &[usize], n: usize) -> usize {
    all_group_tables(n).iter().filter(|c| is_brace(dot, c, n)).count()
}

/// Whether `set` is an ideal, straight from the definition.
pub fn is_ideal(dot: &[usize], circ: &[usize], n: usize, set: &[usize]) -> bool {
    let mut member = vec![false; n];
    for &x in set {
        member[x] = true;
    }
    if !member[0] {
        return false;
    }
    let m = |t: &[usize], x: usize, y: usize| t[x * n + y];
    for &x in set {
        for &y in set {
            if !member[m(dot, x, inverse(dot, n, y))] {
                return false;
            }
        }
        for g in 0..n {
            let gi = inverse(dot, n, g);
            if !member[m(dot, m(dot, g, x), gi)] {
                return false;
            }
            let ci = inverse(circ, n, g);
            if !member[m(circ, m(circ, g, x), ci)] {
                return false;
            }
            let lambda = m(dot, inverse(dot, n, g), m(circ, g, x));
            if !member[lambda] {
                return false;
            }
        }
    }
    true
}

/// All ideals by testing every subset containing `0`, sorted by size then
/// lexicographically.
pub fn all_ideals(dot: &[usize], circ: &[usize], n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << (n - 1)) {
        let mut set = vec![0];
        set.extend((1..n).filter(|i| mask >> (i - 1) & 1 == 1));
        if is_ideal(dot, circ, n, &set) {
            out.push(set);
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}
