//! Manifold descriptions (lens sums, Seifert fibred spaces, pretzel covers)
//! and their standard plumbing 4-manifolds.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::linalg::{cokernel, inertia, FiniteAbelianGroup, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlumbingError {
    #[error("({p},{q}) must satisfy p > q > 0 with gcd 1")]
    BadLensParameters { p: i64, q: i64 },
    #[error("division by zero in continued fraction tail")]
    DivisionByZero,
    #[error("Seifert invariant ({a},{b}) needs a > 1 and gcd(a,b) = 1")]
    BadSeifertInvariant { a: i64, b: i64 },
    #[error("orientation yields e < 0 with orientable base")]
    NegativeEuler,
    #[error("pretzel covers need 3 or 4 strands, got {0}")]
    StrandCount(usize),
    #[error("pretzel strands must be nonzero")]
    ZeroStrand,
}

/// Negative continued fraction `p/q = [a_1, …, a_n]⁻` with every `a_j ≥ 2`.
pub fn neg_continued_fraction(p: i64, q: i64) -> Result<Vec<i64>, PlumbingError> {
    if !(p > q && q > 0) || p.gcd(&q) != 1 {
        return Err(PlumbingError::BadLensParameters { p, q });
    }
    let (mut p, mut q) = (p, q);
    let mut out = Vec::new();
    while q > 0 {
        // ceil(p/q), then p/q = a - q'/q with 0 <= q' < q.
        let a = (p + q - 1) / q;
        out.push(a);
        let r = a * q - p;
        p = q;
        q = r;
    }
    Ok(out)
}

/// `a_1 − 1/(a_2 − 1/(… − 1/a_n))`.
pub fn eval_continued_fraction(seq: &[i64]) -> Result<BigRational, PlumbingError> {
    let mut it = seq.iter().rev();
    let Some(&last) = it.next() else {
        return Err(PlumbingError::DivisionByZero);
    };
    let mut v = BigRational::from_integer(last.into());
    for &a in it {
        if v.is_zero() {
            return Err(PlumbingError::DivisionByZero);
        }
        v = BigRational::from_integer(a.into()) - v.recip();
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Base {
    /// Orientable surface of genus g.
    Orientable(u32),
    /// Connected sum of k ≥ 1 projective planes.
    NonOrientable(u32),
}

impl Base {
    pub fn is_orientable(self) -> bool {
        matches!(self, Base::Orientable(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SeifertManifold {
    pub base: Base,
    pub r: i64,
    pub invariants: Vec<(i64, i64)>,
}

impl SeifertManifold {
    pub fn new(base: Base, r: i64, invariants: Vec<(i64, i64)>) -> Result<Self, PlumbingError> {
        for &(a, b) in &invariants {
            if a < 2 || a.gcd(&b) != 1 {
                return Err(PlumbingError::BadSeifertInvariant { a, b });
            }
        }
        Ok(SeifertManifold { base, r, invariants })
    }

    pub fn euler(&self) -> BigRational {
        let mut e = BigRational::from_integer((-self.r).into());
        for &(a, b) in &self.invariants {
            e += BigRational::new(b.into(), a.into());
        }
        e
    }

    /// Every `b` moved into `(−a, 0)`, with `r` shifted so the manifold is unchanged.
    pub fn normalized(&self) -> SeifertManifold {
        let mut r = self.r;
        let invariants = self
            .invariants
            .iter()
            .map(|&(a, b)| {
                let nb = b.rem_euclid(a) - a;
                r -= (b - nb) / a;
                (a, nb)
            })
            .collect();
        SeifertManifold { base: self.base, r, invariants }
    }

    /// The same manifold with reversed orientation.
    pub fn reversed(&self) -> SeifertManifold {
        SeifertManifold {
            base: self.base,
            r: -self.r,
            invariants: self.invariants.iter().map(|&(a, b)| (a, -b)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LensSum {
    pub summands: Vec<(i64, i64)>,
}

impl LensSum {
    pub fn new(summands: Vec<(i64, i64)>) -> Result<Self, PlumbingError> {
        for &(p, q) in &summands {
            if !(p > q && q > 0) || p.gcd(&q) != 1 {
                return Err(PlumbingError::BadLensParameters { p, q });
            }
        }
        Ok(LensSum { summands })
    }

    pub fn reversed(&self) -> LensSum {
        LensSum { summands: self.summands.iter().map(|&(p, q)| (p, p - q)).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PretzelCover {
    pub strands: Vec<i64>,
}

impl PretzelCover {
    pub fn new(strands: Vec<i64>) -> Result<Self, PlumbingError> {
        if !(3..=4).contains(&strands.len()) {
            return Err(PlumbingError::StrandCount(strands.len()));
        }
        if strands.contains(&0) {
            return Err(PlumbingError::ZeroStrand);
        }
        Ok(PretzelCover { strands })
    }

    pub fn mirror(&self) -> PretzelCover {
        PretzelCover { strands: self.strands.iter().map(|a| -a).collect() }
    }

    /// The cover only depends on the strand multiset.
    pub fn sorted_strands(&self) -> Vec<i64> {
        let mut s = self.strands.clone();
        s.sort_unstable();
        s
    }

    /// `Y(S²; 0; (|a_i|, sign a_i))`, with ±1 strands folded into the central framing.
    pub fn to_seifert(&self) -> SeifertManifold {
        let mut r = 0;
        let mut invariants = Vec::new();
        for &a in &self.strands {
            if a.abs() == 1 {
                r -= a;
            } else {
                invariants.push((a.abs(), a.signum()));
            }
        }
        SeifertManifold { base: Base::Orientable(0), r, invariants }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Manifold {
    S3,
    Lens(LensSum),
    Seifert(SeifertManifold),
    Pretzel(PretzelCover),
}

impl Manifold {
    pub fn reversed(&self) -> Manifold {
        match self {
            Manifold::S3 => Manifold::S3,
            Manifold::Lens(l) => Manifold::Lens(l.reversed()),
            Manifold::Seifert(s) => Manifold::Seifert(s.reversed()),
            Manifold::Pretzel(p) => Manifold::Pretzel(p.mirror()),
        }
    }

    /// Seifert data for the manifolds that have it.
    pub fn seifert(&self) -> Option<SeifertManifold> {
        match self {
            Manifold::Seifert(s) => Some(s.clone()),
            Manifold::Pretzel(p) => Some(p.to_seifert()),
            _ => None,
        }
    }

    /// `e(Y)` for Seifert descriptions.
    pub fn euler(&self) -> Option<BigRational> {
        self.seifert().map(|s| s.euler())
    }
}

fn fmt_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Orientable(0) => write!(f, "S2"),
            Base::Orientable(g) => write!(f, "O({g})"),
            Base::NonOrientable(k) => write!(f, "N({k})"),
        }
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Manifold::S3 => write!(f, "S3"),
            Manifold::Lens(l) => {
                for (i, (p, q)) in l.summands.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "lens({p},{q})")?;
                }
                Ok(())
            }
            Manifold::Seifert(s) => {
                write!(f, "seifert({}; {}", s.base, s.r)?;
                for (i, (a, b)) in s.invariants.iter().enumerate() {
                    write!(f, "{}({a},{b})", if i == 0 { "; " } else { "," })?;
                }
                write!(f, ")")
            }
            Manifold::Pretzel(p) => {
                write!(f, "pretzel(")?;
                fmt_list(f, &p.strands)?;
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Positive,
    Negative,
}

/// Weighted plumbing forest. Vertex order: central vertex first (if any),
/// then each leg or chain from the vertex nearest the centre outwards.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlumbingTree {
    pub weights: Vec<i64>,
    pub edges: Vec<(usize, usize)>,
    pub central: Option<usize>,
    pub base_nonorientable: bool,
    /// Vertex ranges of the legs/chains, in input order.
    pub legs: Vec<std::ops::Range<usize>>,
}

impl PlumbingTree {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn incidence_matrix(&self) -> IntMatrix {
        let n = self.weights.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, &w) in self.weights.iter().enumerate() {
            m[(i, i)] = w.into();
        }
        for &(i, j) in &self.edges {
            m[(i, j)] += 1;
            m[(j, i)] += 1;
        }
        m
    }

    fn push_chain(&mut self, cf: &[i64], attach: Option<usize>) {
        let start = self.weights.len();
        for (k, &a) in cf.iter().enumerate() {
            let v = self.weights.len();
            self.weights.push(-a);
            if k > 0 {
                self.edges.push((v - 1, v));
            } else if let Some(c) = attach {
                self.edges.push((c, v));
            }
        }
        self.legs.push(start..self.weights.len());
    }

    fn empty(central: Option<i64>, base_nonorientable: bool) -> Self {
        PlumbingTree {
            weights: central.into_iter().collect(),
            edges: Vec::new(),
            central: central.map(|_| 0),
            base_nonorientable,
            legs: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Definiteness {
    NegativeDefinite,
    NegativeSemidefinite { corank: usize },
    Indefinite,
}

pub fn definiteness(q: &IntMatrix) -> Definiteness {
    let i = inertia(q);
    if i.positive > 0 {
        Definiteness::Indefinite
    } else if i.zero == 0 {
        Definiteness::NegativeDefinite
    } else {
        Definiteness::NegativeSemidefinite { corank: i.zero }
    }
}

/// Linear chains for `L(p_1,q_1) # …`.
pub fn lens_plumbing(l: &LensSum) -> PlumbingTree {
    let mut t = PlumbingTree::empty(None, false);
    for &(p, q) in &l.summands {
        let cf = neg_continued_fraction(p, q).expect("validated lens parameters");
        t.push_chain(&cf, None);
    }
    t
}

/// Star plumbing (orientable base) or bare legs (non-orientable base) on
/// the normalized invariants of `y` as given; no orientation flip.
pub fn seifert_plumbing(y: &SeifertManifold) -> Result<PlumbingTree, PlumbingError> {
    let n = y.normalized();
    let orientable = y.base.is_orientable();
    if orientable && y.euler().is_negative() {
        return Err(PlumbingError::NegativeEuler);
    }
    let mut t = PlumbingTree::empty(orientable.then_some(n.r), !orientable);
    for &(a, b) in &n.invariants {
        let cf = neg_continued_fraction(a, -b).expect("normalized invariant");
        t.push_chain(&cf, t.central);
    }
    Ok(t)
}

pub fn plumbing_tree(m: &Manifold, orientation: Orientation) -> Result<PlumbingTree, PlumbingError> {
    let m = match orientation {
        Orientation::Positive => m.clone(),
        Orientation::Negative => m.reversed(),
    };
    match &m {
        Manifold::S3 => Ok(PlumbingTree::empty(None, false)),
        Manifold::Lens(l) => Ok(lens_plumbing(l)),
        Manifold::Seifert(s) => seifert_plumbing(s),
        Manifold::Pretzel(p) => seifert_plumbing(&p.to_seifert()),
    }
}

/// The orientation whose standard plumbing is negative (semi-)definite.
/// Lens sums and non-orientable bases prefer the given orientation.
pub fn definite_orientation(m: &Manifold) -> Orientation {
    match m.seifert() {
        Some(s) if s.base.is_orientable() && s.euler().is_negative() => Orientation::Negative,
        _ => Orientation::Positive,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homology {
    pub b1: usize,
    pub torsion: FiniteAbelianGroup,
}

/// Presentation of `H_1(Y(F; r; (a_i, b_i)))` on the generators
/// `q_1..q_n, h, v_1..v_k` (crosscaps, non-orientable base only).
fn seifert_presentation(y: &SeifertManifold) -> (IntMatrix, usize) {
    let n = y.invariants.len();
    let (crosscaps, handles) = match y.base {
        Base::Orientable(g) => (0, 2 * g as usize),
        Base::NonOrientable(k) => (k as usize, 0),
    };
    let gens = n + 1 + crosscaps;
    let h = n;
    let mut rels: Vec<Vec<BigInt>> = Vec::new();
    for (i, &(a, b)) in y.invariants.iter().enumerate() {
        let mut row = vec![BigInt::zero(); gens];
        row[i] = a.into();
        row[h] = b.into();
        rels.push(row);
    }
    let mut row = vec![BigInt::zero(); gens];
    for x in row.iter_mut().take(n) {
        *x = 1.into();
    }
    row[h] = y.r.into();
    for j in 0..crosscaps {
        row[n + 1 + j] = 2.into();
    }
    rels.push(row);
    if crosscaps > 0 {
        let mut row = vec![BigInt::zero(); gens];
        row[h] = 2.into();
        rels.push(row);
    }
    // Columns are relations: coker of the generator-by-relation matrix.
    let m = IntMatrix::from_fn(gens, rels.len(), |i, j| rels[j][i].clone());
    (m, handles)
}

pub fn first_homology(m: &Manifold) -> Homology {
    match m {
        Manifold::S3 => Homology { b1: 0, torsion: FiniteAbelianGroup::trivial() },
        Manifold::Lens(l) => {
            let orders: Vec<BigInt> = l.summands.iter().map(|&(p, _)| p.into()).collect();
            Homology { b1: 0, torsion: FiniteAbelianGroup::from_orders(&orders) }
        }
        _ => {
            let s = m.seifert().expect("Seifert data");
            let (pres, handles) = seifert_presentation(&s);
            let g = cokernel(&pres);
            let torsion = FiniteAbelianGroup::from_orders(g.invariant_factors());
            Homology { b1: g.free_rank() + handles, torsion }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(neg_continued_fraction(3, 1).unwrap(), vec![3]);
        assert_eq!(neg_continued_fraction(12, 5).unwrap(), vec![3, 2, 3]);
        assert_eq!(neg_continued_fraction(7, 4).unwrap(), vec![2, 4]);
        assert!(neg_continued_fraction(4, 2).is_err());
        assert_eq!(eval_continued_fraction(&[2, -3, -2]).unwrap(), rat(12, 5));
        assert_eq!(eval_continued_fraction(&[3, 2, 3]).unwrap(), rat(12, 5));
        assert_eq!(eval_continued_fraction(&[5]).unwrap(), rat(5, 1));
        assert!(eval_continued_fraction(&[2, 0]).is_err());
    }

    #[test]
    fn euler_and_normalization() {
        let y = SeifertManifold::new(Base::Orientable(0), 0, vec![(3, 1), (3, -1), (3, 1)]).unwrap();
        assert_eq!(y.euler(), rat(1, 3));
        let n = y.normalized();
        assert_eq!(n.r, -2);
        assert_eq!(n.invariants, vec![(3, -2), (3, -1), (3, -2)]);
        assert_eq!(n.euler(), y.euler());

        let ex = SeifertManifold::new(Base::Orientable(0), 0, vec![(4, 1), (4, 1), (12, -7)]).unwrap();
        assert_eq!(ex.euler(), rat(-1, 12));
        let m = ex.reversed().normalized();
        assert_eq!(m.r, -1);
        assert_eq!(m.invariants, vec![(4, -1), (4, -1), (12, -5)]);

        let z = SeifertManifold::new(Base::Orientable(0), 0, vec![(2, 1), (2, -1), (3, 1), (3, -1)]).unwrap();
        assert!(z.euler().is_zero());
    }

    #[test]
    fn lens_chains() {
        let l = Manifold::Lens(LensSum::new(vec![(3, 1), (3, 2)]).unwrap());
        let t = plumbing_tree(&l, Orientation::Positive).unwrap();
        assert_eq!(t.weights, vec![-3, -2, -2]);
        assert_eq!(t.edges, vec![(1, 2)]);
        assert_eq!(definiteness(&t.incidence_matrix()), Definiteness::NegativeDefinite);
    }

    #[test]
    fn pretzel_star() {
        let y = Manifold::Pretzel(PretzelCover::new(vec![3, -3, 3]).unwrap());
        let t = plumbing_tree(&y, Orientation::Positive).unwrap();
        assert_eq!(t.weights, vec![-2, -2, -2, -3, -2, -2]);
        assert_eq!(t.edges, vec![(0, 1), (1, 2), (0, 3), (0, 4), (4, 5)]);
        assert_eq!(definiteness(&t.incidence_matrix()), Definiteness::NegativeDefinite);
        // |H_1| = |e| * 27 = 9.
        assert_eq!(t.incidence_matrix().determinant().abs(), BigInt::from(9));
        assert!(plumbing_tree(&y, Orientation::Negative).is_err());
        assert_eq!(first_homology(&y).torsion.order(), BigInt::from(9));
    }

    #[test]
    fn semidefinite_star() {
        let y = Manifold::Pretzel(PretzelCover::new(vec![2, -2, 2, -2]).unwrap());
        let t = plumbing_tree(&y, Orientation::Positive).unwrap();
        assert_eq!(
            definiteness(&t.incidence_matrix()),
            Definiteness::NegativeSemidefinite { corank: 1 }
        );
        assert_eq!(definiteness(&IntMatrix::from_rows(&[[1]])), Definiteness::Indefinite);
    }

    #[test]
    fn nonorientable_drops_centre() {
        let y = SeifertManifold::new(Base::NonOrientable(1), 0, vec![(3, 1), (3, -1)]).unwrap();
        let t = plumbing_tree(&Manifold::Seifert(y.clone()), Orientation::Positive).unwrap();
        assert_eq!(t.central, None);
        let mut w = t.weights.clone();
        w.sort_unstable();
        assert_eq!(w, vec![-3, -2, -2]);
        let h = first_homology(&Manifold::Seifert(y));
        assert_eq!(h.b1, 0);
        assert_eq!(h.torsion.order(), BigInt::from(36));
    }

    #[test]
    fn homology_examples() {
        let l = Manifold::Lens(LensSum::new(vec![(3, 1)]).unwrap());
        assert_eq!(first_homology(&l).torsion.invariant_factors(), &[BigInt::from(3)]);
        let y = Manifold::Pretzel(PretzelCover::new(vec![1, 2, 2, 2]).unwrap());
        assert_eq!(first_homology(&y).torsion.order(), BigInt::from(20));
        let z = Manifold::Pretzel(PretzelCover::new(vec![2, -2, 2, -2]).unwrap());
        assert_eq!(first_homology(&z).b1, 1);
        let g = SeifertManifold::new(Base::Orientable(2), 1, vec![(3, 1)]).unwrap();
        assert_eq!(first_homology(&Manifold::Seifert(g)).b1, 4);
    }
}
