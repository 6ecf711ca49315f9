//! Enumeration of integer matrices `A` with `A Aᵗ = −Q`, up to signed
//! column permutations.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_integer::Roots;
use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{inertia, IntMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `n` vectors in `Z^n`.
    Square,
    /// `n` vectors in `Z^(n−1)`, for corank-1 forms.
    Rectangular,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LatticeSubset {
    pub a: IntMatrix,
    pub mode: Mode,
}

impl LatticeSubset {
    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.a.to_i64_rows().expect("subset entries fit in i64")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("matrix is not negative definite")]
    NotDefinite,
    #[error("matrix is not negative semi-definite of corank 1")]
    NotSemidefinite,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix entries are too large for the search")]
    TooLarge,
    #[error("budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    /// Stop after this many subsets (the list is then incomplete).
    pub limit: Option<usize>,
    /// Abort with [`LatticeError::BudgetExhausted`] after this many search nodes.
    pub budget: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub subsets: Vec<LatticeSubset>,
    pub nodes: u64,
    /// False only when `limit` cut the search short.
    pub complete: bool,
}

pub fn verify_factorization(a: &IntMatrix, q: &IntMatrix) -> bool {
    a.rows() == q.rows() && q.is_square() && a * &a.transpose() == -q
}

/// Normal form under signed column permutations: each column's first
/// nonzero entry is positive and columns are in descending lexicographic order.
pub fn canonical_form(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    let mut columns: Vec<Vec<i64>> = (0..cols)
        .map(|j| {
            let mut c: Vec<i64> = rows.iter().map(|r| r[j]).collect();
            if c.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                c.iter_mut().for_each(|x| *x = -*x);
            }
            c
        })
        .collect();
    columns.sort_unstable_by(|a, b| b.cmp(a));
    (0..n).map(|i| columns.iter().map(|c| c[i]).collect()).collect()
}

/// Greedy row order: start from the largest norm, then keep taking rows
/// adjacent to something already placed, breaking ties by larger norm.
fn search_order(g: &[Vec<i64>]) -> Vec<usize> {
    let n = g.len();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&i| !placed[i])
            .max_by_key(|&i| {
                let linked = order.iter().any(|&s: &usize| g[i][s] != 0);
                (linked, g[i][i], std::cmp::Reverse(i))
            })
            .expect("unplaced row");
        placed[next] = true;
        order.push(next);
    }
    order
}

struct Shared<'a> {
    nodes: &'a AtomicU64,
    budget: Option<u64>,
    exhausted: &'a AtomicBool,
}

struct Search<'a> {
    g: Vec<Vec<i64>>,
    cols: usize,
    limit: Option<usize>,
    shared: &'a Shared<'a>,
    rows: Vec<Vec<i64>>,
    found: Vec<Vec<Vec<i64>>>,
    local_nodes: u64,
}

/// Per-row data derived from the rows placed so far.
struct RowContext {
    same_as_prev: Vec<bool>,
    zero_prefix: Vec<bool>,
    /// suffix[s][j] = sum of squares of rows[s][j..].
    suffix: Vec<Vec<i64>>,
}

enum Flow {
    Continue,
    Stop,
}

impl<'a> Search<'a> {
    fn context(&self) -> RowContext {
        let t = self.rows.len();
        let col_eq = |a: usize, b: usize| (0..t).all(|s| self.rows[s][a] == self.rows[s][b]);
        let same_as_prev = (0..self.cols).map(|j| j > 0 && col_eq(j, j - 1)).collect();
        let zero_prefix = (0..self.cols).map(|j| (0..t).all(|s| self.rows[s][j] == 0)).collect();
        let suffix = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = vec![0i64; self.cols + 1];
                for j in (0..self.cols).rev() {
                    acc[j] = acc[j + 1] + r[j] * r[j];
                }
                acc
            })
            .collect();
        RowContext { same_as_prev, zero_prefix, suffix }
    }

    fn tick(&mut self) -> bool {
        self.local_nodes += 1;
        if self.local_nodes.is_multiple_of(1024) {
            let total = self.shared.nodes.fetch_add(1024, Ordering::Relaxed) + 1024;
            if self.shared.budget.is_some_and(|b| total > b) {
                self.shared.exhausted.store(true, Ordering::Relaxed);
            }
        }
        !self.shared.exhausted.load(Ordering::Relaxed)
    }

    fn flush(&mut self) {
        let extra = self.local_nodes % 1024;
        let total = self.shared.nodes.fetch_add(extra, Ordering::Relaxed) + extra;
        if self.shared.budget.is_some_and(|b| total > b) {
            self.shared.exhausted.store(true, Ordering::Relaxed);
        }
        self.local_nodes -= extra;
    }

    fn place_row(&mut self) -> Flow {
        let t = self.rows.len();
        if t == self.g.len() {
            self.found.push(self.rows.clone());
            return match self.limit {
                Some(l) if self.found.len() >= l => Flow::Stop,
                _ => Flow::Continue,
            };
        }
        let ctx = self.context();
        let mut residual: Vec<i64> = (0..t).map(|s| self.g[t][s]).collect();
        let mut x = vec![0i64; self.cols];
        self.fill(&ctx, 0, self.g[t][t], &mut residual, &mut x)
    }

    fn fill(&mut self, ctx: &RowContext, j: usize, rem: i64, residual: &mut [i64], x: &mut [i64]) -> Flow {
        if rem == 0 {
            // Everything else must be zero.
            if residual.iter().any(|&d| d != 0) {
                return Flow::Continue;
            }
            if j < self.cols && j > 0 && ctx.same_as_prev[j] && x[j - 1] < 0 {
                return Flow::Continue;
            }
            x[j..].iter_mut().for_each(|v| *v = 0);
            self.rows.push(x.to_vec());
            let flow = self.place_row();
            self.rows.pop();
            return flow;
        }
        if j == self.cols {
            return Flow::Continue;
        }
        for (s, &d) in residual.iter().enumerate() {
            if (d as i128) * (d as i128) > (rem as i128) * (ctx.suffix[s][j] as i128) {
                return Flow::Continue;
            }
        }
        let bound = rem.sqrt();
        let mut hi = bound;
        if ctx.same_as_prev[j] {
            hi = hi.min(x[j - 1]);
        }
        let lo = if ctx.zero_prefix[j] { 0 } else { -bound };
        let mut v = hi;
        while v >= lo {
            if !self.tick() {
                return Flow::Stop;
            }
            x[j] = v;
            for (s, d) in residual.iter_mut().enumerate() {
                *d -= v * self.rows[s][j];
            }
            let flow = self.fill(ctx, j + 1, rem - v * v, residual, x);
            for (s, d) in residual.iter_mut().enumerate() {
                *d += v * self.rows[s][j];
            }
            x[j] = 0;
            if let Flow::Stop = flow {
                return Flow::Stop;
            }
            v -= 1;
        }
        Flow::Continue
    }
}

/// Non-increasing non-negative vectors of length `cols` with squared norm `norm`.
fn first_rows(norm: i64, cols: usize) -> Vec<Vec<i64>> {
    fn go(norm: i64, cap: i64, left: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if norm == 0 {
            let mut v = cur.clone();
            v.resize(cur.len() + left, 0);
            out.push(v);
            return;
        }
        if left == 0 {
            return;
        }
        let mut v = cap.min(norm.sqrt());
        while v >= 1 {
            // Remaining entries are at most v each.
            if v * v * left as i64 >= norm {
                cur.push(v);
                go(norm - v * v, v, left - 1, cur, out);
                cur.pop();
            }
            v -= 1;
        }
    }
    let mut out = Vec::new();
    go(norm, i64::MAX, cols, &mut Vec::new(), &mut out);
    out
}

pub fn enumerate_subsets(q: &IntMatrix, mode: Mode, opts: &SearchOptions) -> Result<Enumeration, LatticeError> {
    if !q.is_symmetric() {
        return Err(LatticeError::NotSymmetric);
    }
    let n = q.rows();
    let inert = inertia(q);
    match mode {
        Mode::Square if inert.negative != n => return Err(LatticeError::NotDefinite),
        Mode::Rectangular if inert.negative + 1 != n || inert.zero != 1 => {
            return Err(LatticeError::NotSemidefinite)
        }
        _ => {}
    }
    let cols = match mode {
        Mode::Square => n,
        Mode::Rectangular => n - 1,
    };
    let neg = q.to_i64_rows().ok_or(LatticeError::TooLarge)?;
    if neg.iter().flatten().any(|x| x.abs() > 1 << 20) {
        return Err(LatticeError::TooLarge);
    }
    let order = search_order(&neg.iter().map(|r| r.iter().map(|x| -x).collect()).collect::<Vec<_>>());
    let g: Vec<Vec<i64>> = order.iter().map(|&i| order.iter().map(|&j| -neg[i][j]).collect()).collect();

    let nodes = AtomicU64::new(0);
    let exhausted = AtomicBool::new(false);
    let shared = Shared { nodes: &nodes, budget: opts.budget, exhausted: &exhausted };
    let new_search = |rows: Vec<Vec<i64>>| Search {
        g: g.clone(),
        cols,
        limit: opts.limit,
        shared: &shared,
        rows,
        found: Vec::new(),
        local_nodes: 0,
    };

    let mut complete = true;
    let raw: Vec<Vec<Vec<i64>>> = if n == 0 {
        vec![Vec::new()]
    } else if opts.limit.is_some() {
        let mut s = new_search(Vec::new());
        if let Flow::Stop = s.place_row() {
            complete = false;
        }
        s.flush();
        s.found
    } else {
        let starts = first_rows(g[0][0], cols);
        starts
            .into_par_iter()
            .map(|row| {
                let mut s = new_search(vec![row]);
                s.place_row();
                s.flush();
                s.found
            })
            .flatten()
            .collect()
    };
    if exhausted.load(Ordering::Relaxed) {
        return Err(LatticeError::BudgetExhausted { nodes: nodes.load(Ordering::Relaxed) });
    }

    // Back to the caller's row order, then a canonical representative per orbit.
    let mut canon: Vec<Vec<Vec<i64>>> = raw
        .into_iter()
        .map(|rows| {
            let mut original = vec![Vec::new(); n];
            for (k, &i) in order.iter().enumerate() {
                original[i] = rows[k].clone();
            }
            canonical_form(&original)
        })
        .collect();
    canon.sort();
    canon.dedup();
    let subsets = canon
        .into_iter()
        .map(|rows| LatticeSubset { a: IntMatrix::from_rows_with_cols(&rows, cols), mode })
        .collect();
    Ok(Enumeration { subsets, nodes: nodes.load(Ordering::Relaxed), complete })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all(q: &IntMatrix) -> Vec<Vec<Vec<i64>>> {
        enumerate_subsets(q, Mode::Square, &SearchOptions::default())
            .unwrap()
            .subsets
            .iter()
            .map(|s| s.rows())
            .collect()
    }

    #[test]
    fn small_examples() {
        assert!(all(&IntMatrix::from_rows(&[[-2, 1], [1, -2]])).is_empty());
        assert_eq!(all(&IntMatrix::from_rows(&[[-4]])), vec![vec![vec![2]]]);
        let q = IntMatrix::from_rows(&[[-3, 0, 0], [0, -2, 1], [0, 1, -2]]);
        let found = all(&q);
        let expected = canonical_form(&[vec![1, 1, 1], vec![1, -1, 0], vec![0, 1, -1]]);
        assert!(found.contains(&expected));
        let id = all(&IntMatrix::from_rows(&[[-1, 0], [0, -1]]));
        assert_eq!(id, vec![vec![vec![1, 0], vec![0, 1]]]);
    }

    #[test]
    fn factorization_check() {
        let a = IntMatrix::from_rows(&[[1, 1, 1], [1, -1, 0], [0, 1, -1]]);
        let q = IntMatrix::from_rows(&[[-3, 0, 0], [0, -2, 1], [0, 1, -2]]);
        assert!(verify_factorization(&a, &q));
        assert!(verify_factorization(&IntMatrix::identity(3), &-&IntMatrix::identity(3)));
        assert!(!verify_factorization(&IntMatrix::from_rows(&[[1]]), &IntMatrix::from_rows(&[[-4]])));
    }

    #[test]
    fn rectangular_rank_one() {
        let q = IntMatrix::from_rows(&[[-1, 1], [1, -1]]);
        let e = enumerate_subsets(&q, Mode::Rectangular, &SearchOptions::default()).unwrap();
        assert_eq!(e.subsets.len(), 1);
        assert_eq!(e.subsets[0].rows(), vec![vec![1], vec![-1]]);
        assert!(enumerate_subsets(&q, Mode::Square, &SearchOptions::default()).is_err());
    }

    #[test]
    fn budget_and_limit() {
        let q = IntMatrix::from_rows(&[[-3, 0, 0], [0, -2, 1], [0, 1, -2]]);
        let err = enumerate_subsets(&q, Mode::Square, &SearchOptions { limit: None, budget: Some(1) });
        assert!(matches!(err, Err(LatticeError::BudgetExhausted { .. })));
        let one = enumerate_subsets(&q, Mode::Square, &SearchOptions { limit: Some(1), budget: None }).unwrap();
        assert_eq!(one.subsets.len(), 1);
    }

    #[test]
    fn canonical_form_is_orbit_invariant() {
        let a = vec![vec![1, -1, 0], vec![0, 1, 1]];
        let b = vec![vec![1, 1, 0], vec![0, 1, -1]];
        let perm: Vec<Vec<i64>> = a.iter().map(|r| vec![-r[2], r[1], -r[0]]).collect();
        assert_eq!(canonical_form(&a), canonical_form(&perm));
        assert_ne!(canonical_form(&a), canonical_form(&b));
    }
}
