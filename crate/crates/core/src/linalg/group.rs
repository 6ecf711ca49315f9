//! Finitely generated abelian groups presented as cokernels, and subgroups
//! of their torsion parts.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::ser;

use super::normal_form::{hermite_basis, smith_normal_form, solve_lower_triangular};
use super::{IntMatrix, LinalgError};

/// `Z^free_rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_m` with `d_i | d_{i+1}` and every `d_i ≥ 2`.
///
/// When the group arises as a cokernel, `projection` maps ambient vectors to
/// torsion coordinates (reduce the i-th coordinate mod `d_i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<BigInt>,
    free_rank: usize,
    projection: Option<IntMatrix>,
}

impl FiniteAbelianGroup {
    /// The group `⊕ Z/f` for arbitrary positive orders `f`, put into
    /// invariant-factor form.
    pub fn from_orders(orders: &[BigInt]) -> Self {
        let diag = IntMatrix::diagonal(orders);
        let snf = smith_normal_form(&diag);
        let invariant_factors = snf.diagonal().into_iter().filter(|d| !d.is_one()).collect();
        FiniteAbelianGroup { invariant_factors, free_rank: 0, projection: None }
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { invariant_factors: Vec::new(), free_rank: 0, projection: None }
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    /// Number of torsion coordinates.
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Order of the torsion subgroup.
    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    /// Dimension of `G ⊗ Z/2`.
    pub fn mod2_rank(&self) -> usize {
        self.free_rank + self.invariant_factors.iter().filter(|d| d.is_even()).count()
    }

    /// Torsion coordinates of an ambient vector.
    pub fn project(&self, v: &[BigInt]) -> Vec<BigInt> {
        let p = self.projection.as_ref().expect("group has no ambient presentation");
        p.mul_vec(v)
            .into_iter()
            .zip(&self.invariant_factors)
            .map(|(x, d)| x.mod_floor(d))
            .collect()
    }

    pub fn is_element(&self, x: &[BigInt]) -> bool {
        x.len() == self.rank()
            && x.iter().zip(&self.invariant_factors).all(|(a, d)| !a.is_negative() && a < d)
    }

    pub fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        x.iter().zip(&self.invariant_factors).map(|(a, d)| a.mod_floor(d)).collect()
    }

    /// Prime-power elementary divisors with multiplicities.
    pub fn elementary_divisors(&self) -> BTreeMap<BigInt, usize> {
        let mut out = BTreeMap::new();
        for d in &self.invariant_factors {
            for q in prime_power_parts(d) {
                *out.entry(q).or_insert(0) += 1;
            }
        }
        out
    }

    /// Whether the torsion subgroup is isomorphic to some `K ⊕ K`.
    pub fn is_double(&self) -> bool {
        self.elementary_divisors().values().all(|m| m % 2 == 0)
    }

    /// Torsion of `self ⊕ self`.
    pub fn doubled_factors(factors: &[BigInt]) -> Vec<BigInt> {
        let twice: Vec<BigInt> = factors.iter().chain(factors).cloned().collect();
        FiniteAbelianGroup::from_orders(&twice).invariant_factors
    }
}

fn prime_power_parts(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            let mut q = BigInt::one();
            while n.is_multiple_of(&p) {
                n /= &p;
                q *= &p;
            }
            out.push(q);
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

/// Whether `n` is a perfect square (n ≥ 0).
pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// `Z^rows / im M`, with the projection taken from the Smith transform.
pub fn cokernel(m: &IntMatrix) -> FiniteAbelianGroup {
    let snf = smith_normal_form(m);
    let n = m.rows();
    let diag = snf.diagonal();
    let mut factors = Vec::new();
    let mut proj_rows = Vec::new();
    let mut free_rank = 0;
    for i in 0..n {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            free_rank += 1;
        } else if !d.is_one() {
            factors.push(d);
            proj_rows.push(i);
        }
    }
    let projection = IntMatrix::from_fn(proj_rows.len(), n, |r, j| snf.u[(proj_rows[r], j)].clone());
    FiniteAbelianGroup { invariant_factors: factors, free_rank, projection: Some(projection) }
}

/// Subgroup of the torsion part of a group, given by generators in torsion
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subgroup {
    #[serde(skip)]
    pub parent_factors: Vec<BigInt>,
    #[serde(serialize_with = "ser::int_rows")]
    pub generators: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "ser::int")]
    pub order: BigInt,
    #[serde(serialize_with = "ser::ints")]
    pub invariant_factors: Vec<BigInt>,
}

impl Subgroup {
    pub fn is_trivial(&self) -> bool {
        self.order.is_one()
    }
}

/// Lifts the generators to `Z^m`, adds the relation lattice and reads off
/// the quotient `Λ'/Λ` from a triangular basis of `Λ'`.
pub fn subgroup_from_generators(
    g: &FiniteAbelianGroup,
    gens: &[Vec<BigInt>],
) -> Result<Subgroup, LinalgError> {
    let m = g.rank();
    for x in gens {
        if !g.is_element(x) {
            return Err(LinalgError::NotAnElement { len: x.len(), rank: m });
        }
    }
    let d = g.invariant_factors();
    let mut lattice: Vec<Vec<BigInt>> = gens.to_vec();
    for (i, di) in d.iter().enumerate() {
        let mut e = vec![BigInt::zero(); m];
        e[i] = di.clone();
        lattice.push(e);
    }
    let h = hermite_basis(&lattice, m).expect("relation lattice has full rank");
    let rel = IntMatrix::diagonal(d);
    let x = solve_lower_triangular(&h, &rel).expect("relations lie in the generated lattice");
    let snf = smith_normal_form(&x);
    let invariant_factors: Vec<BigInt> =
        snf.diagonal().into_iter().filter(|f| !f.is_one()).collect();
    let order = g.order() / h.determinant().abs();
    debug_assert_eq!(order, invariant_factors.iter().product::<BigInt>());
    Ok(Subgroup {
        parent_factors: d.to_vec(),
        generators: gens.to_vec(),
        order,
        invariant_factors,
    })
}

pub fn subgroup_sum(g: &FiniteAbelianGroup, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let gens: Vec<Vec<BigInt>> = a.generators.iter().chain(&b.generators).cloned().collect();
    subgroup_from_generators(g, &gens).expect("generators come from subgroups of g")
}

/// The image of `A`'s columns in `G = coker Q`, i.e. `im A / im Q`.
pub fn image_subgroup(g: &FiniteAbelianGroup, a: &IntMatrix) -> Subgroup {
    let mut gens: Vec<Vec<BigInt>> = (0..a.cols())
        .map(|j| g.project(&a.column(j)))
        .filter(|x| x.iter().any(|c| !c.is_zero()))
        .collect();
    gens.sort();
    gens.dedup();
    subgroup_from_generators(g, &gens).expect("projected columns are elements")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectSumTest {
    pub is_direct_sum: bool,
    pub isomorphic: bool,
    #[serde(serialize_with = "ser::int")]
    pub intersection_order: BigInt,
}

/// Decides whether `G = H1 ⊕ H2` internally and whether `H1 ≅ H2`.
pub fn direct_sum_test(g: &FiniteAbelianGroup, h1: &Subgroup, h2: &Subgroup) -> DirectSumTest {
    let sum = subgroup_sum(g, h1, h2);
    let total = g.order();
    let prod = &h1.order * &h2.order;
    DirectSumTest {
        is_direct_sum: prod == total && sum.order == total,
        isomorphic: h1.invariant_factors == h2.invariant_factors,
        intersection_order: prod / &sum.order,
    }
}
