use std::fmt;
use std::ops::{Index, IndexMut, Mul, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

/// Dense integer matrix with arbitrary-precision entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Builds a matrix from small-integer rows. Panics if the rows are ragged.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_fn(n, m, |i, j| {
            let r = rows[i].as_ref();
            assert_eq!(r.len(), m, "ragged rows");
            BigInt::from(r[j])
        })
    }

    /// Builds a matrix with `cols` columns from row data; allows zero rows.
    pub fn from_rows_with_cols<R: AsRef<[i64]>>(rows: &[R], cols: usize) -> Self {
        Self::from_fn(rows.len(), cols, |i, j| BigInt::from(rows[i].as_ref()[j]))
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in entries.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn block_diagonal(blocks: &[IntMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += t;
        }
    }

    /// col[dst] += k * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += t;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = -x;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let x = std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = -x;
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v.div_floor(&prev);
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    /// Unimodular means square with determinant ±1.
    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.determinant().abs().is_one()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        IntMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| &self[(i, k)] * &rhs[(k, j)]).sum()
        })
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, "]")
    }
}

struct RowSer<'a>(&'a [BigInt]);

impl Serialize for RowSer<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for x in self.0 {
            match x.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&x.to_string())?,
            }
        }
        seq.end()
    }
}

// Row-major nested arrays; entries beyond i64 become decimal strings.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(&RowSer(self.row(i)))?;
        }
        seq.end()
    }
}
