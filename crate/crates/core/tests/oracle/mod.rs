//! Slow, independent reference implementations used only by tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] != 0) else { return 0 };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        (sign * a[n - 1][n - 1]) as i64
    }
}

/// Rank over GF(2).
pub fn rank_mod2(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<u8>> = m.iter().map(|r| r.iter().map(|x| x.rem_euclid(2) as u8).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| a[i][c] == 1) else { continue };
        a.swap(p, rank);
        for i in 0..a.len() {
            if i != rank && a[i][c] == 1 {
                let pivot = a[rank].clone();
                a[i].iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= y);
            }
        }
        rank += 1;
    }
    rank
}

/// Sylvester's criterion.
pub fn is_negative_definite(q: &[Vec<i64>]) -> bool {
    (1..=q.len()).all(|k| {
        let lead: Vec<Vec<i64>> = q[..k].iter().map(|r| r[..k].to_vec()).collect();
        let d = det(&lead);
        if k % 2 == 1 {
            d < 0
        } else {
            d > 0
        }
    })
}

/// All vectors in `Z^n` with squared length `norm`.
fn vectors_of_norm(n: usize, norm: i64) -> Vec<Vec<i64>> {
    let bound = (norm as f64).sqrt() as i64 + 1;
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    fn go(i: usize, left: i64, bound: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == cur.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in -bound..=bound {
            if x * x <= left {
                cur[i] = x;
                go(i + 1, left - x * x, bound, cur, out);
            }
        }
        cur[i] = 0;
    }
    go(0, norm, bound, &mut cur, &mut out);
    out
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Every `n × cols` integer matrix `A` with `A Aᵗ = −Q`, found row by row
/// with no symmetry reduction.
pub fn naive_subsets(q: &[Vec<i64>], cols: usize) -> Vec<Vec<Vec<i64>>> {
    let n = q.len();
    let candidates: Vec<Vec<Vec<i64>>> = (0..n).map(|i| vectors_of_norm(cols, -q[i][i])).collect();
    let mut out = Vec::new();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    fn go(i: usize, q: &[Vec<i64>], cand: &[Vec<Vec<i64>>], rows: &mut Vec<Vec<i64>>, out: &mut Vec<Vec<Vec<i64>>>) {
        if i == q.len() {
            out.push(rows.clone());
            return;
        }
        for v in &cand[i] {
            if (0..i).all(|k| dot(&rows[k], v) == -q[i][k]) {
                rows.push(v.clone());
                go(i + 1, q, cand, rows, out);
                rows.pop();
            }
        }
    }
    go(0, q, &candidates, &mut rows, &mut out);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every image of `a` under signed column permutations.
pub fn orbit(a: &[Vec<i64>]) -> Vec<Vec<Vec<i64>>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for perm in permutations(cols) {
        for signs in 0u32..(1 << cols) {
            out.push(
                a.iter()
                    .map(|r| (0..cols).map(|j| if signs >> j & 1 == 1 { -r[perm[j]] } else { r[perm[j]] }).collect())
                    .collect(),
            );
        }
    }
    out
}

/// Orbit representative: the lexicographically smallest image.
pub fn orbit_min(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    orbit(a).into_iter().min().unwrap_or_default()
}

pub fn naive_orbits(q: &[Vec<i64>], cols: usize) -> BTreeSet<Vec<Vec<i64>>> {
    naive_subsets(q, cols).iter().map(|a| orbit_min(a)).collect()
}

/// `[a_1, …, a_n]⁻` as a reduced fraction.
pub fn continued_fraction(a: &[i64]) -> (i64, i64) {
    let (mut p, mut q) = (1i64, 0i64);
    for &x in a.iter().rev() {
        // x − q/p = (x p − q) / p
        let np = x * p - q;
        q = p;
        p = np;
    }
    let g = gcd(p, q);
    (p / g, q / g)
}

/// `L(p, a) ≅ L(p, b)` preserving orientation, by search for `a·b ≡ 1` or `a ≡ b`.
pub fn lens_homeomorphic(p: i64, a: i64, b: i64) -> bool {
    let (a, b) = (a.rem_euclid(p), b.rem_euclid(p));
    a == b || (a * b).rem_euclid(p) == 1 % p
}

/// `L(p, b) ≅ −L(p, a) = L(p, p − a)`.
pub fn lens_mirror(p: i64, a: i64, b: i64) -> bool {
    lens_homeomorphic(p, p - a, b)
}

/// Brute force over all perfect matchings of the summands.
pub fn lens_sum_embeds(summands: &[(i64, i64)]) -> bool {
    if summands.iter().any(|(p, _)| p % 2 == 0) {
        return false;
    }
    fn matchable(items: &[(i64, i64)]) -> bool {
        let Some((&first, rest)) = items.split_first() else { return true };
        (0..rest.len()).any(|i| {
            let (p, q) = first;
            let (p2, q2) = rest[i];
            let mut others = rest.to_vec();
            others.remove(i);
            p == p2 && lens_mirror(p, q, q2) && matchable(&others)
        })
    }
    matchable(summands)
}

/// Components of the pretzel link, by tracing arcs through the diagram:
/// tangles side by side, a vertical twist region of `a` crossings each,
/// adjacent tangles joined at top and bottom and the outer ends closed up.
pub fn pretzel_components(strands: &[i64]) -> usize {
    let n = strands.len();
    // Endpoints 4i + {0: top-left, 1: top-right, 2: bottom-left, 3: bottom-right}.
    let mut parent: Vec<usize> = (0..4 * n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut join = |a: usize, b: usize| {
        let (x, y) = (find(&mut parent, a), find(&mut parent, b));
        parent[x] = y;
    };
    for (i, &a) in strands.iter().enumerate() {
        let t = 4 * i;
        if a % 2 == 0 {
            join(t, t + 2);
            join(t + 1, t + 3);
        } else {
            join(t, t + 3);
            join(t + 1, t + 2);
        }
        let u = 4 * ((i + 1) % n);
        join(t + 1, u);
        join(t + 3, u + 2);
    }
    let roots: BTreeSet<usize> = (0..4 * n).map(|x| find(&mut parent, x)).collect();
    roots.len()
}

/// `|H_1|` of the double branched cover of `P(a_1, …, a_n)` from the Goeritz
/// form: `|Σ_i Π_{j≠i} a_j|`.
pub fn goeritz_order(strands: &[i64]) -> i64 {
    (0..strands.len())
        .map(|i| strands.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, a)| a).product::<i64>())
        .sum::<i64>()
        .abs()
}

/// Seifert class of a pretzel cover: fibres `(|a|, sign a mod |a|)` for the
/// strands with `|a| ≥ 2` and Euler number `Σ 1/a_i`, compared up to
/// orientation.
pub type SeifertKey = (Vec<(i64, i64)>, (i64, i64));

pub fn pretzel_key(strands: &[i64]) -> SeifertKey {
    let key = |sign: i64| {
        let mut fibres: Vec<(i64, i64)> =
            strands.iter().filter(|a| a.abs() >= 2).map(|&a| (a.abs(), (sign * a.signum()).rem_euclid(a.abs()))).collect();
        fibres.sort();
        let (mut num, mut den) = (0i64, 1i64);
        for &a in strands {
            num = num * a + sign * den;
            den *= a;
            let g = gcd(num, den);
            num /= g;
            den /= g;
        }
        if den < 0 {
            num = -num;
            den = -den;
        }
        (fibres, (num, den))
    };
    key(1).min(key(-1))
}

/// Strand multisets of the four embeddable families and the open family,
/// each with the family tag, for strand sizes up to `bound`.
pub fn theorem_families(bound: i64) -> Vec<(&'static str, Vec<i64>)> {
    let mut out = Vec::new();
    let sizes: Vec<i64> = (-bound..=bound).filter(|a: &i64| a.abs() >= 2).collect();
    for &a in &sizes {
        out.push(("embeds", vec![a, -a, a]));
        out.push(("embeds", vec![a, -a, a, -a]));
        out.push(("embeds", vec![a + 1, -a, a, -a]));
        out.push(("embeds", vec![a - 1, -a, a, -a]));
        for &b in &sizes {
            if b % 2 != 0 {
                out.push(("embeds", vec![a, -a, b, -b]));
            }
        }
    }
    for l in -bound..=bound {
        if l.abs() >= 2 {
            out.push(("open", vec![2 * l - 1, -2 * l - 1, -2 * l * l]));
        }
    }
    out.retain(|(_, s)| !s.contains(&0));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected {
    Embeds,
    Open,
    Obstructed,
}

/// The pretzel classification, matched by Seifert class so that covers
/// that are diffeomorphic through a ±1 strand are recognized.
pub fn pretzel_expected(strands: &[i64], bound: i64) -> Expected {
    let key = pretzel_key(strands);
    let fams = theorem_families(bound);
    if fams.iter().any(|(t, s)| *t == "embeds" && pretzel_key(s) == key) {
        Expected::Embeds
    } else if fams.iter().any(|(t, s)| *t == "open" && pretzel_key(s) == key) {
        Expected::Open
    } else {
        Expected::Obstructed
    }
}
