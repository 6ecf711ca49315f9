//! Embedding obstructions packaged as verdicts over plumbing forms and
//! Seifert data.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::lattice::{enumerate_subsets, LatticeError, LatticeSubset, Mode, SearchOptions};
use crate::linalg::{
    cokernel, direct_sum_test, image_subgroup, is_perfect_square, FiniteAbelianGroup, IntMatrix, Subgroup,
};
use crate::plumbing::{Homology, LensSum, SeifertManifold};
use crate::subsets::mod_inverse;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Obstructed,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct ObstructionResult {
    pub name: &'static str,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    pub notes: String,
}

impl ObstructionResult {
    fn new(name: &'static str, verdict: Verdict, certificate: Option<Certificate>, notes: impl Into<String>) -> Self {
        ObstructionResult { name, verdict, certificate, notes: notes.into() }
    }

    pub fn is_obstructed(&self) -> bool {
        self.verdict == Verdict::Obstructed
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Two subsets whose images split the cokernel as required.
    SubsetPair { form: IntMatrix, first: IntMatrix, second: IntMatrix, first_image: Subgroup, second_image: Subgroup },
    /// A single subset; used for the corank-one case.
    Subset { form: IntMatrix, subset: IntMatrix },
    /// The search finished without finding an admissible configuration.
    Exhaustive { form: IntMatrix, subsets: usize, admissible: usize, nodes: u64 },
    /// Torsion invariant factors of the relevant group.
    Torsion {
        #[serde(serialize_with = "crate::linalg::ser::ints")]
        factors: Vec<BigInt>,
    },
    /// Seifert or lens parameters left without a partner.
    Unpaired { items: Vec<(i64, i64)> },
    /// Two even-order fibres that break the even-order clause.
    EvenFibres { first: (i64, i64), second: (i64, i64) },
    /// μ̄ values against the required number of zeros.
    MuBar { components: usize, values: Vec<i64>, vanishing: usize, threshold: usize },
}

fn search(q: &IntMatrix, mode: Mode, budget: Option<u64>, limit: Option<usize>) -> Result<(Vec<LatticeSubset>, u64), String> {
    match enumerate_subsets(q, mode, &SearchOptions { limit, budget }) {
        Ok(e) => Ok((e.subsets, e.nodes)),
        Err(LatticeError::BudgetExhausted { nodes }) => Err(format!("search budget exhausted after {nodes} nodes")),
        Err(e) => Err(e.to_string()),
    }
}

/// Every class of `im A / im Q` must contain `A x` for some `x ∈ {±1}^n`.
/// Such vectors are automatically characteristic for `Q`. Forms whose
/// cokernel has even order are outside the hypothesis and return `true`,
/// as do subsets with more than 40 columns, where enumeration is out of reach.
pub fn char_vector_criterion(a: &IntMatrix, q: &IntMatrix) -> bool {
    let g = cokernel(q);
    if g.order().is_even() || g.free_rank() > 0 {
        return true;
    }
    let h = image_subgroup(&g, a);
    let target = h.order.to_usize().expect("small subgroup");
    let n = a.cols();
    if target == 1 || n == 0 {
        return true;
    }
    if n > 40 {
        return true;
    }
    let mods: Vec<i64> = g.invariant_factors().iter().map(|d| d.to_i64().expect("small factor")).collect();
    let cols: Vec<Vec<i64>> = (0..n)
        .map(|j| g.project(&a.column(j)).iter().map(|x| x.to_i64().expect("reduced")).collect())
        .collect();
    let reduce = |v: &mut Vec<i64>| {
        for (x, d) in v.iter_mut().zip(&mods) {
            *x = x.rem_euclid(*d);
        }
    };
    let neg = |v: &[i64]| -> Vec<i64> { v.iter().zip(&mods).map(|(x, d)| (-x).rem_euclid(*d)).collect() };

    // Gray code over x_1..x_{n-1} with x_0 = +1; −x covers the other half.
    let mut s: Vec<i64> = vec![0; mods.len()];
    for c in &cols {
        for (x, y) in s.iter_mut().zip(c) {
            *x += y;
        }
    }
    reduce(&mut s);
    let mut signs = vec![1i64; n];
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    seen.insert(neg(&s));
    seen.insert(s.clone());
    let steps: u64 = 1 << (n - 1);
    for i in 1..steps {
        if seen.len() >= target {
            break;
        }
        let j = i.trailing_zeros() as usize + 1;
        for (x, y) in s.iter_mut().zip(&cols[j]) {
            *x -= 2 * signs[j] * y;
        }
        signs[j] = -signs[j];
        reduce(&mut s);
        seen.insert(neg(&s));
        seen.insert(s.clone());
    }
    seen.len() >= target
}

/// Looks for subsets `A₁, A₂` of `Q` whose images split `coker Q` as
/// `H₁ ⊕ H₂` with `H₁ ≅ H₂`. The same subset may serve twice only when the
/// cokernel is trivial. For odd-order cokernels each subset must also pass
/// [`char_vector_criterion`].
pub fn double_subset_obstruction(q: &IntMatrix, budget: Option<u64>) -> ObstructionResult {
    const NAME: &str = "double_subset";
    let g = cokernel(q);
    if g.free_rank() > 0 {
        return ObstructionResult::new(NAME, Verdict::Inconclusive, None, "form is degenerate");
    }
    let order = g.order();
    if !is_perfect_square(&order) {
        let cert = Certificate::Torsion { factors: g.invariant_factors().to_vec() };
        return ObstructionResult::new(NAME, Verdict::Obstructed, Some(cert), format!("|coker Q| = {order} is not a square"));
    }
    let root = order.sqrt();
    let (subsets, nodes) = match search(q, Mode::Square, budget, None) {
        Ok(r) => r,
        Err(e) => return ObstructionResult::new(NAME, Verdict::Inconclusive, None, e),
    };
    let odd = order.is_odd();
    let mut seen_images = HashSet::new();
    let candidates: Vec<(&LatticeSubset, Subgroup)> = subsets
        .iter()
        .filter_map(|s| {
            let h = image_subgroup(&g, &s.a);
            (h.order == root && (!odd || char_vector_criterion(&s.a, q)) && seen_images.insert(h.generators.clone()))
                .then_some((s, h))
        })
        .collect();
    let trivial = g.is_trivial();
    for (i, (a1, h1)) in candidates.iter().enumerate() {
        for (a2, h2) in &candidates[i..] {
            if std::ptr::eq(*a1, *a2) && !trivial {
                continue;
            }
            let t = direct_sum_test(&g, h1, h2);
            if t.is_direct_sum && t.isomorphic && t.intersection_order.is_one() {
                let cert = Certificate::SubsetPair {
                    form: q.clone(),
                    first: a1.a.clone(),
                    second: a2.a.clone(),
                    first_image: h1.clone(),
                    second_image: h2.clone(),
                };
                return ObstructionResult::new(NAME, Verdict::Pass, Some(cert), "");
            }
        }
    }
    let cert = Certificate::Exhaustive { form: q.clone(), subsets: subsets.len(), admissible: candidates.len(), nodes };
    ObstructionResult::new(
        NAME,
        Verdict::Obstructed,
        Some(cert),
        format!("{} subsets, {} with admissible image, no complementary pair", subsets.len(), candidates.len()),
    )
}

/// Corank-one forms: some `n × (n−1)` matrix `A` with `A Aᵗ = −Q` must exist.
pub fn semidefinite_obstruction(q: &IntMatrix, budget: Option<u64>) -> ObstructionResult {
    const NAME: &str = "semidefinite";
    match search(q, Mode::Rectangular, budget, Some(1)) {
        Ok((subsets, nodes)) => match subsets.into_iter().next() {
            Some(s) => ObstructionResult::new(
                NAME,
                Verdict::Pass,
                Some(Certificate::Subset { form: q.clone(), subset: s.a }),
                "",
            ),
            None => ObstructionResult::new(
                NAME,
                Verdict::Obstructed,
                Some(Certificate::Exhaustive { form: q.clone(), subsets: 0, admissible: 0, nodes }),
                "no rectangular subset",
            ),
        },
        Err(e) => ObstructionResult::new(NAME, Verdict::Inconclusive, None, e),
    }
}

/// Non-orientable bases: subsets `A₁, A₂` with `coker Q ≅ Hᵢ ⊕ Hᵢ` and
/// `|H₁ ∩ H₂| ≤ 2`. Whether `H₁ ≅ H₂` is forced is left open, so it is not checked.
pub fn nonorientable_obstruction(q: &IntMatrix, budget: Option<u64>) -> ObstructionResult {
    const NAME: &str = "nonorientable";
    if q.rows() == 0 {
        return ObstructionResult::new(NAME, Verdict::Pass, None, "empty form");
    }
    let g = cokernel(q);
    if !g.is_double() {
        let cert = Certificate::Torsion { factors: g.invariant_factors().to_vec() };
        return ObstructionResult::new(NAME, Verdict::Obstructed, Some(cert), "coker Q is not of the form H ⊕ H");
    }
    let (subsets, nodes) = match search(q, Mode::Square, budget, None) {
        Ok(r) => r,
        Err(e) => return ObstructionResult::new(NAME, Verdict::Inconclusive, None, e),
    };
    let two = BigInt::from(2);
    let mut seen_images = HashSet::new();
    let candidates: Vec<(&LatticeSubset, Subgroup)> = subsets
        .iter()
        .filter_map(|s| {
            let h = image_subgroup(&g, &s.a);
            (FiniteAbelianGroup::doubled_factors(&h.invariant_factors) == g.invariant_factors()
                && seen_images.insert(h.generators.clone()))
            .then_some((s, h))
        })
        .collect();
    for (i, (a1, h1)) in candidates.iter().enumerate() {
        for (a2, h2) in &candidates[i..] {
            if direct_sum_test(&g, h1, h2).intersection_order <= two {
                let cert = Certificate::SubsetPair {
                    form: q.clone(),
                    first: a1.a.clone(),
                    second: a2.a.clone(),
                    first_image: h1.clone(),
                    second_image: h2.clone(),
                };
                return ObstructionResult::new(NAME, Verdict::Pass, Some(cert), "");
            }
        }
    }
    let cert = Certificate::Exhaustive { form: q.clone(), subsets: subsets.len(), admissible: candidates.len(), nodes };
    ObstructionResult::new(NAME, Verdict::Obstructed, Some(cert), "no pair of subsets with small intersection")
}

/// The torsion of `H₁` of a 3-manifold in S⁴ has the form `K ⊕ K`.
pub fn homology_square_obstruction(h: &Homology) -> ObstructionResult {
    const NAME: &str = "homology_square";
    let cert = Some(Certificate::Torsion { factors: h.torsion.invariant_factors().to_vec() });
    if h.torsion.is_double() {
        ObstructionResult::new(NAME, Verdict::Pass, cert, "")
    } else {
        ObstructionResult::new(NAME, Verdict::Obstructed, cert, "torsion of H1 is not of the form K ⊕ K")
    }
}

/// Items left over after pairing each item with one whose key is its
/// mirror key. Self-mirror keys pair among themselves.
fn unpaired<K: Ord + Clone>(items: &[(i64, i64)], key: impl Fn(i64, i64) -> K, mirror: impl Fn(i64, i64) -> K) -> Vec<(i64, i64)> {
    let mut groups: BTreeMap<K, Vec<(i64, i64)>> = BTreeMap::new();
    for &(a, b) in items {
        groups.entry(key(a, b)).or_default().push((a, b));
    }
    let mut done: HashSet<usize> = HashSet::new();
    let keys: Vec<K> = groups.keys().cloned().collect();
    let mut left = Vec::new();
    for (i, k) in keys.iter().enumerate() {
        if done.contains(&i) {
            continue;
        }
        done.insert(i);
        let mine = &groups[k];
        let (a, b) = mine[0];
        let m = mirror(a, b);
        if &m == k {
            if mine.len() % 2 == 1 {
                left.push(mine[0]);
            }
            continue;
        }
        let other = groups.get(&m).map_or(&[][..], |v| v.as_slice());
        if let Ok(j) = keys.binary_search(&m) {
            done.insert(j);
        }
        let n = mine.len().min(other.len());
        left.extend_from_slice(&mine[n..]);
        left.extend_from_slice(&other[n..]);
    }
    left
}

/// Homeomorphism class of `L(p, q)`: the smaller of `q` and `q⁻¹` mod `p`.
pub fn lens_class(p: i64, q: i64) -> (i64, i64) {
    let q = q.rem_euclid(p);
    let inv = mod_inverse(q, p).unwrap_or(q);
    (p, q.min(inv))
}

/// Summands that cannot be matched with a mirror partner.
pub fn unmatched_lens_summands(l: &LensSum) -> Vec<(i64, i64)> {
    unpaired(&l.summands, lens_class, |p, q| lens_class(p, -q))
}

/// A lens sum embeds exactly when every order is odd and the summands pair
/// off into mirror images.
pub fn lens_pairing_obstruction(l: &LensSum) -> ObstructionResult {
    const NAME: &str = "lens_pairing";
    let even: Vec<(i64, i64)> = l.summands.iter().copied().filter(|(p, _)| p % 2 == 0).collect();
    if !even.is_empty() {
        return ObstructionResult::new(
            NAME,
            Verdict::Obstructed,
            Some(Certificate::Unpaired { items: even }),
            "a summand has even order",
        );
    }
    let left = unmatched_lens_summands(l);
    if left.is_empty() {
        ObstructionResult::new(NAME, Verdict::Pass, None, "")
    } else {
        ObstructionResult::new(NAME, Verdict::Obstructed, Some(Certificate::Unpaired { items: left }), "no mirror partner")
    }
}

/// Invariants that cannot be put in pairs `(a, b), (a, −b)`.
pub fn uncomplemented(invariants: &[(i64, i64)]) -> Vec<(i64, i64)> {
    unpaired(invariants, |a, b| (a, b.rem_euclid(a)), |a, b| (a, (-b).rem_euclid(a)))
}

/// Invariants that cannot be put in pairs `(a, b), (a, −b)` or `(a, b), (a, −b⁻¹)`.
pub fn weakly_uncomplemented(invariants: &[(i64, i64)]) -> Vec<(i64, i64)> {
    unpaired(invariants, lens_class, |a, b| lens_class(a, -b))
}

/// Orientable base with `e = 0`: invariants come in complementary pairs.
pub fn complementary_pairing_obstruction(y: &SeifertManifold) -> ObstructionResult {
    const NAME: &str = "complementary_pairing";
    let left = uncomplemented(&y.invariants);
    if left.is_empty() {
        ObstructionResult::new(NAME, Verdict::Pass, None, "")
    } else {
        ObstructionResult::new(
            NAME,
            Verdict::Obstructed,
            Some(Certificate::Unpaired { items: left }),
            "invariants do not form complementary pairs",
        )
    }
}

/// Non-orientable base: weak complementary pairs, and any two even-order
/// fibres share `a` with `b` in `{±b', ±b'⁻¹}`.
pub fn weak_pairing_obstruction(y: &SeifertManifold) -> ObstructionResult {
    const NAME: &str = "weak_complementary_pairing";
    let left = weakly_uncomplemented(&y.invariants);
    if !left.is_empty() {
        return ObstructionResult::new(
            NAME,
            Verdict::Obstructed,
            Some(Certificate::Unpaired { items: left }),
            "invariants do not form weak complementary pairs",
        );
    }
    let even: Vec<(i64, i64)> = y.invariants.iter().copied().filter(|(a, _)| a % 2 == 0).collect();
    let mut notes = String::new();
    if even.len() > 2 {
        notes = "more than two even-order fibres; every pair checked".into();
    }
    for (i, &(a1, b1)) in even.iter().enumerate() {
        for &(a2, b2) in &even[i + 1..] {
            let allowed = a1 == a2 && {
                let inv = mod_inverse(b2, a2).expect("coprime invariant");
                [b2, -b2, inv, -inv].iter().any(|c| (b1 - c).rem_euclid(a1) == 0)
            };
            if !allowed {
                return ObstructionResult::new(
                    NAME,
                    Verdict::Obstructed,
                    Some(Certificate::EvenFibres { first: (a1, b1), second: (a2, b2) }),
                    "even-order fibres are incompatible",
                );
            }
        }
    }
    ObstructionResult::new(NAME, Verdict::Pass, None, notes)
}
