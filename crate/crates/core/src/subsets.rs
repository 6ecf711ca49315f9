//! Combinatorics of linear subsets: rows `v_i` of a matrix `A` whose
//! pairwise products (under the negative diagonal pairing) form a disjoint
//! union of chains.
//!
//! Rows are `i64` vectors; the Euclidean dot product `x·y` is the negative of
//! the pairing, so a vertex of weight `−a` has `|v|² = a`.

use std::collections::HashSet;
use std::ops::Range;

use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::linalg::{cokernel, image_subgroup, FiniteAbelianGroup, IntMatrix, Subgroup};
use crate::plumbing::eval_continued_fraction;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubsetError {
    #[error("not a linear subset: rows {0} and {1} violate the chain shape")]
    NotLinear(usize, usize),
    #[error("contraction hypothesis violated at coordinate {0}")]
    BadContraction(usize),
    #[error("expansion data does not give a final (-2) vector")]
    BadExpansion,
}

fn dot(x: &[i64], y: &[i64]) -> i64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm(x: &[i64]) -> i64 {
    dot(x, x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetGraph {
    /// Vertex weights `v_i·v_i` under the negative pairing, so all ≤ −2.
    pub weights: Vec<i64>,
    /// Consecutive index ranges of the connected components.
    pub components: Vec<Range<usize>>,
}

impl SubsetGraph {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn i_of_component(&self, c: &Range<usize>) -> i64 {
        self.weights[c.clone()].iter().map(|w| -w - 3).sum()
    }

    pub fn chain_weights(&self, c: &Range<usize>) -> Vec<i64> {
        self.weights[c.clone()].to_vec()
    }
}

pub fn subset_graph(rows: &[Vec<i64>]) -> Result<SubsetGraph, SubsetError> {
    let n = rows.len();
    let mut components: Vec<Range<usize>> = Vec::new();
    for i in 0..n {
        if norm(&rows[i]) < 2 {
            return Err(SubsetError::NotLinear(i, i));
        }
        for j in i + 1..n {
            let d = dot(&rows[i], &rows[j]);
            let ok = if j == i + 1 { d == 0 || d == -1 } else { d == 0 };
            if !ok {
                return Err(SubsetError::NotLinear(i, j));
            }
        }
        match components.last_mut() {
            Some(c) if i > 0 && dot(&rows[i - 1], &rows[i]) == -1 => c.end = i + 1,
            _ => components.push(i..i + 1),
        }
    }
    Ok(SubsetGraph { weights: rows.iter().map(|r| -norm(r)).collect(), components })
}

/// `I(S) = Σ (−v_i·v_i − 3)`.
pub fn i_of(rows: &[Vec<i64>]) -> i64 {
    rows.iter().map(|r| norm(r) - 3).sum()
}

/// Groups of row indices linked through shared supported coordinates.
pub fn irreducible_decomposition(rows: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = rows.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let cols = rows.first().map_or(0, Vec::len);
    for j in 0..cols {
        let mut first: Option<usize> = None;
        for i in 0..n {
            if rows[i][j] != 0 {
                match first {
                    None => first = Some(i),
                    Some(f) => {
                        let (a, b) = (find(&mut parent, f), find(&mut parent, i));
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_of[r] == usize::MAX {
            root_of[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_of[r]].push(i);
    }
    groups
}

/// Removes `v_s` and the `j`-th coordinate; `j` must be supported by exactly
/// `v_s` and one other `v_t`, both with entry ±1, and `|v_t|² ≥ 3`.
pub fn contract(rows: &[Vec<i64>], s: usize, j: usize) -> Result<Vec<Vec<i64>>, SubsetError> {
    let support: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][j] != 0).collect();
    let [a, b] = support[..] else {
        return Err(SubsetError::BadContraction(j));
    };
    let t = match (a == s, b == s) {
        (true, _) => b,
        (_, true) => a,
        _ => return Err(SubsetError::BadContraction(j)),
    };
    if rows[s][j].abs() != 1 || rows[t][j].abs() != 1 || norm(&rows[t]) < 3 {
        return Err(SubsetError::BadContraction(j));
    }
    Ok(rows
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != s)
        .map(|(_, r)| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
        .collect())
}

/// Data for adding a final (−2) vector: a new coordinate `c` (appended) gets
/// `sign_t` in `v_t`; the new row `sign_s·e_c + sign_x·e_x` is inserted at
/// `position`. `t` indexes rows before insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ExpansionSite {
    pub t: usize,
    pub x: usize,
    pub sign_t: i64,
    pub sign_s: i64,
    pub sign_x: i64,
    pub position: usize,
}

pub fn expand_final_minus2(rows: &[Vec<i64>], site: &ExpansionSite) -> Result<Vec<Vec<i64>>, SubsetError> {
    let cols = rows.first().map_or(0, Vec::len);
    if site.t >= rows.len() || site.x >= cols || site.position > rows.len() {
        return Err(SubsetError::BadExpansion);
    }
    let mut out: Vec<Vec<i64>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.push(if i == site.t { site.sign_t } else { 0 });
            r
        })
        .collect();
    let mut leaf = vec![0; cols + 1];
    leaf[site.x] = site.sign_x;
    leaf[cols] = site.sign_s;
    out.insert(site.position, leaf);
    let g = subset_graph(&out).map_err(|_| SubsetError::BadExpansion)?;
    let p = site.position;
    let degree = [p.checked_sub(1), Some(p + 1)]
        .into_iter()
        .flatten()
        .filter(|&q| q < out.len() && dot(&out[p], &out[q]) == -1)
        .count();
    if degree != 1 || g.weights[p] != -2 {
        return Err(SubsetError::BadExpansion);
    }
    Ok(out)
}

/// All final (−2) expansions that attach the new leaf to an end of `comp`
/// with the new coordinate shared with a vector of `comp`.
pub fn expansion_sites(rows: &[Vec<i64>], comp: &Range<usize>) -> Vec<ExpansionSite> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for position in [comp.start, comp.end] {
        let end = if position == comp.start { comp.start } else { comp.end - 1 };
        for t in comp.clone() {
            for x in 0..cols {
                for sign_t in [1, -1] {
                    for sign_s in [1, -1] {
                        for sign_x in [1, -1] {
                            let site = ExpansionSite { t, x, sign_t, sign_s, sign_x, position };
                            let Ok(new) = expand_final_minus2(rows, &site) else { continue };
                            let end_new = if end >= position { end + 1 } else { end };
                            if dot(&new[position], &new[end_new]) == -1 {
                                out.push(site);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BadComponent {
    pub component: Range<usize>,
    /// Minus the weight of the reduced component.
    pub n: i64,
    /// The component's chain evaluates to `p/q`.
    pub p: i64,
    pub q: i64,
    /// `(m, k)` with `p = m²n` and `q ≡ (mnk+1)^(±1) mod p`.
    pub witness: Option<(i64, i64)>,
}

fn is_base_triple(c: &[Vec<i64>]) -> Option<i64> {
    let [a, b, d] = c else { return None };
    let support = |v: &Vec<i64>| -> Vec<usize> { (0..v.len()).filter(|&k| v[k] != 0).collect() };
    let sa = support(a);
    let ok = norm(a) == 2 && norm(d) == 2 && sa.len() == 2 && sa == support(d) && norm(b) >= 3;
    ok.then(|| norm(b) - 1)
}

/// Searches contractions of final (−2) leaves inside `rows[comp]` for the
/// base triple. Coordinates used outside the component are frozen.
fn bad_reduction(rows: &[Vec<i64>], comp: &Range<usize>) -> Option<i64> {
    let cols = rows.first().map_or(0, Vec::len);
    let frozen: Vec<bool> =
        (0..cols).map(|j| rows.iter().enumerate().any(|(i, r)| !comp.contains(&i) && r[j] != 0)).collect();
    let start: Vec<Vec<i64>> = rows[comp.clone()].to_vec();
    let mut seen = HashSet::new();
    fn go(c: Vec<Vec<i64>>, frozen: &[bool], seen: &mut HashSet<Vec<Vec<i64>>>) -> Option<i64> {
        if let Some(n) = is_base_triple(&c) {
            return Some(n);
        }
        if c.len() <= 3 || !seen.insert(c.clone()) {
            return None;
        }
        if c.iter().flatten().any(|x| x.abs() > 1) {
            return None;
        }
        let last = c.len() - 1;
        for s in [0, last] {
            if norm(&c[s]) != 2 {
                continue;
            }
            for j in 0..frozen.len() {
                if frozen[j] || c[s][j] == 0 {
                    continue;
                }
                let others: Vec<usize> = (0..c.len()).filter(|&i| i != s && c[i][j] != 0).collect();
                let [t] = others[..] else { continue };
                if norm(&c[t]) < 3 {
                    continue;
                }
                let mut next = c.clone();
                next[t][j] = 0;
                next.remove(s);
                if let Some(n) = go(next, frozen, seen) {
                    return Some(n);
                }
            }
        }
        None
    }
    go(start, &frozen, &mut seen)
}

/// `p/q` of a chain with the given (negative) weights.
pub fn chain_fraction(weights: &[i64]) -> (i64, i64) {
    let cf: Vec<i64> = weights.iter().map(|w| -w).collect();
    let v = eval_continued_fraction(&cf).expect("chain weights ≤ −2");
    (v.numer().to_i64().expect("small"), v.denom().to_i64().expect("small"))
}

pub(crate) fn mod_inverse(q: i64, p: i64) -> Option<i64> {
    let e = q.rem_euclid(p).extended_gcd(&p);
    (e.gcd == 1).then(|| e.x.rem_euclid(p))
}

fn bad_witness(p: i64, q: i64, n: i64) -> Option<(i64, i64)> {
    if p % n != 0 {
        return None;
    }
    let m = exact_sqrt(p / n)?;
    let qi = mod_inverse(q, p)?;
    (1..m.max(2))
        .filter(|&k| m.gcd(&k) == 1)
        .find(|&k| {
            let r = (m * n * k + 1).rem_euclid(p);
            r == q.rem_euclid(p) || r == qi
        })
        .map(|k| (m, k))
}

fn exact_sqrt(x: i64) -> Option<i64> {
    let r = num_integer::Roots::sqrt(&x);
    (r * r == x).then_some(r)
}

pub fn detect_bad_components(rows: &[Vec<i64>]) -> Result<Vec<BadComponent>, SubsetError> {
    let g = subset_graph(rows)?;
    let mut out = Vec::new();
    for comp in &g.components {
        if comp.len() < 3 {
            continue;
        }
        if let Some(n) = bad_reduction(rows, comp) {
            let (p, q) = chain_fraction(&g.chain_weights(comp));
            out.push(BadComponent { component: comp.clone(), n, p, q, witness: bad_witness(p, q, n) });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Complementarity {
    Complementary,
    WeakComplementary,
    Neither,
}

pub fn complementary_pair_test(c1: &[i64], c2: &[i64]) -> Complementarity {
    let (p1, q1) = chain_fraction(c1);
    let (p2, q2) = chain_fraction(c2);
    if p1 != p2 {
        return Complementarity::Neither;
    }
    if (q1 + q2) % p1 == 0 {
        Complementarity::Complementary
    } else if (q1 * q2 + 1) % p1 == 0 {
        Complementarity::WeakComplementary
    } else {
        Complementarity::Neither
    }
}

/// `G(S) = coker(−A Aᵗ)` and `H(S) = im A / im Q`.
pub fn subset_groups(rows: &[Vec<i64>]) -> (FiniteAbelianGroup, Subgroup) {
    let cols = rows.first().map_or(0, Vec::len);
    let a = IntMatrix::from_rows_with_cols(rows, cols);
    let q = -&(&a * &a.transpose());
    let g = cokernel(&q);
    let h = image_subgroup(&g, &a);
    (g, h)
}

/// `G(S) ≅ H(S) ⊕ H(S)`.
pub fn is_double_subset(rows: &[Vec<i64>]) -> bool {
    let (g, h) = subset_groups(rows);
    g.free_rank() == 0 && FiniteAbelianGroup::doubled_factors(&h.invariant_factors) == g.invariant_factors()
}

/// Whether `p` is 1, so `S` bounds an integral homology sphere.
pub fn is_unimodular(rows: &[Vec<i64>]) -> bool {
    subset_groups(rows).0.order().is_one()
}
