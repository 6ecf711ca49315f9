//! Smith and Hermite normal forms over the integers, plus exact inertia of
//! symmetric forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `u * m * v == d`, with `u`, `v` unimodular and `d` diagonal with a
/// non-negative divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d[i][i]` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = min_abs_entry(&a, t) else {
                return SmithForm { u, d: a, v };
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, t)] / &a[(t, t)]);
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&a[(t, j)] / &a[(t, t)]);
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row and retry.
            let p = a[(t, t)].clone();
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    a.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d: a, v }
}

/// Triangular basis of the lattice spanned by `generators` in `Z^dim`.
///
/// Returns a `dim x dim` lower-triangular matrix whose columns form a basis,
/// or `None` if the generators do not span a full-rank lattice.
pub fn hermite_basis(generators: &[Vec<BigInt>], dim: usize) -> Option<IntMatrix> {
    let mut slots: Vec<Option<Vec<BigInt>>> = vec![None; dim];
    for g in generators {
        assert_eq!(g.len(), dim);
        let mut g = g.clone();
        for i in 0..dim {
            if g[i].is_zero() {
                continue;
            }
            match &mut slots[i] {
                None => {
                    slots[i] = Some(g);
                    break;
                }
                Some(b) => {
                    let e = b[i].extended_gcd(&g[i]);
                    let (bi, gi) = (&b[i] / &e.gcd, &g[i] / &e.gcd);
                    let nb: Vec<BigInt> =
                        b.iter().zip(&g).map(|(x, y)| &e.x * x + &e.y * y).collect();
                    let ng: Vec<BigInt> = b.iter().zip(&g).map(|(x, y)| &gi * x - &bi * y).collect();
                    *b = nb;
                    g = ng;
                }
            }
        }
    }
    let mut h = IntMatrix::zeros(dim, dim);
    for (i, slot) in slots.into_iter().enumerate() {
        let mut b = slot?;
        if b[i].is_negative() {
            b.iter_mut().for_each(|x| *x = -std::mem::take(x));
        }
        for (j, x) in b.into_iter().enumerate() {
            h[(j, i)] = x;
        }
    }
    // Reduce entries below the diagonal modulo the pivot of their row.
    for j in 0..dim {
        for i in 0..j {
            let q = h[(j, i)].div_floor(&h[(j, j)]);
            if !q.is_zero() {
                h.add_col_multiple(i, j, &-q);
            }
        }
    }
    Some(h)
}

/// Solves `h * x = b` for lower-triangular `h`, requiring an integral solution.
pub fn solve_lower_triangular(h: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    let n = h.rows();
    let mut x = IntMatrix::zeros(n, b.cols());
    for c in 0..b.cols() {
        for j in 0..n {
            let mut s = b[(j, c)].clone();
            for i in 0..j {
                s -= &h[(j, i)] * &x[(i, c)];
            }
            let (q, r) = s.div_rem(&h[(j, j)]);
            if !r.is_zero() {
                return None;
            }
            x[(j, c)] = q;
        }
    }
    Some(x)
}

/// Counts of positive, negative and zero eigenvalues of a symmetric matrix,
/// by exact congruence diagonalisation over the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

pub fn inertia(m: &IntMatrix) -> Inertia {
    assert!(m.is_symmetric(), "inertia of a non-symmetric matrix");
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| BigRational::from_integer(m[(i, j)].clone())).collect())
        .collect();
    let mut out = Inertia { positive: 0, negative: 0, zero: 0 };
    let mut k = 0;
    while k < n {
        if a[k][k].is_zero() {
            if let Some(p) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                a.swap(k, p);
                for row in a.iter_mut() {
                    row.swap(k, p);
                }
            } else if let Some(p) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // a[k][k] = a[p][p] = 0 and a[k][p] != 0: add row/col p to k.
                for j in 0..n {
                    let t = a[p][j].clone();
                    a[k][j] += t;
                }
                for i in 0..n {
                    let t = a[i][p].clone();
                    a[i][k] += t;
                }
            } else {
                out.zero += 1;
                k += 1;
                continue;
            }
        }
        let piv = a[k][k].clone();
        if piv.is_positive() {
            out.positive += 1;
        } else {
            out.negative += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &piv;
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
        for i in k + 1..n {
            a[k][i] = BigRational::zero();
            a[i][k] = BigRational::zero();
        }
        k += 1;
    }
    out
}
