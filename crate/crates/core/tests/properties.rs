mod oracle;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use s4embed::classifier::{decide_lens_sum, decide_pretzel, Options};
use s4embed::lattice::{canonical_form, enumerate_subsets, verify_factorization, Mode, SearchOptions};
use s4embed::linalg::IntMatrix;
use s4embed::obstructions::{char_vector_criterion, double_subset_obstruction, Certificate, Verdict};
use s4embed::plumbing::{
    definite_orientation, first_homology, lens_plumbing, plumbing_tree, Base, LensSum, Manifold, Orientation, PretzelCover, SeifertManifold,
};
use s4embed::spin::{mubar_threshold, spin_profile, wu_sets};
use s4embed::subsets::{i_of, subset_graph};

fn lens() -> impl Strategy<Value = (i64, i64)> {
    (2i64..=13).prop_flat_map(|p| (Just(p), 1..p)).prop_filter("coprime", |(p, q)| oracle::gcd(*p, *q) == 1)
}

fn strands(len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop_oneof![-6i64..=-2, 2i64..=6], len)
}

fn seifert_s2() -> impl Strategy<Value = SeifertManifold> {
    let inv = (2i64..8).prop_flat_map(|a| (Just(a), -10i64..10)).prop_filter("coprime", |(a, b)| oracle::gcd(*a, *b) == 1);
    (-3i64..3, prop::collection::vec(inv, 1..5))
        .prop_map(|(r, inv)| SeifertManifold::new(Base::Orientable(0), r, inv).unwrap())
}

/// A signed permutation of `cols` columns, as (permutation, signs).
fn signed_perm(cols: usize) -> impl Strategy<Value = (Vec<usize>, Vec<i64>)> {
    (Just((0..cols).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(prop_oneof![Just(1i64), Just(-1)], cols))
}

fn apply(rows: &[Vec<i64>], (perm, signs): &(Vec<usize>, Vec<i64>)) -> Vec<Vec<i64>> {
    rows.iter().map(|r| perm.iter().zip(signs).map(|(&j, s)| s * r[j]).collect()).collect()
}

fn rows_of(q: &IntMatrix) -> Vec<Vec<i64>> {
    q.to_i64_rows().unwrap()
}

/// Subsets of the chain for a one- or two-summand lens sum.
fn lens_subsets(s: &[(i64, i64)]) -> (IntMatrix, Vec<Vec<Vec<i64>>>) {
    let q = lens_plumbing(&LensSum::new(s.to_vec()).unwrap()).incidence_matrix();
    let e = enumerate_subsets(&q, Mode::Square, &SearchOptions::default()).unwrap();
    (q, e.subsets.iter().map(|x| x.rows()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn canonical_form_ignores_signed_column_permutations(
        (rows, sp) in (1usize..=4).prop_flat_map(|c| (prop::collection::vec(prop::collection::vec(-2i64..=2, c), 1..5), signed_perm(c)))
    ) {
        prop_assert_eq!(canonical_form(&apply(&rows, &sp)), canonical_form(&rows));
    }

    #[test]
    fn linear_invariants_ignore_signed_column_permutations(s in prop::collection::vec(lens(), 1..=2), seed in any::<u64>()) {
        let (_, subsets) = lens_subsets(&s);
        for rows in subsets {
            let cols = rows[0].len();
            let mut perm: Vec<usize> = (0..cols).collect();
            perm.rotate_left(seed as usize % cols.max(1));
            let signs: Vec<i64> = (0..cols).map(|j| if seed >> (j % 64) & 1 == 1 { -1 } else { 1 }).collect();
            let moved = apply(&rows, &(perm, signs));
            prop_assert_eq!(i_of(&moved), i_of(&rows));
            prop_assert_eq!(subset_graph(&moved).unwrap().component_count(), subset_graph(&rows).unwrap().component_count());
        }
    }

    #[test]
    fn char_criterion_ignores_signed_column_permutations(s in prop::collection::vec(lens(), 1..=2), seed in any::<u64>()) {
        let (q, subsets) = lens_subsets(&s);
        for rows in subsets {
            let cols = rows[0].len();
            let mut perm: Vec<usize> = (0..cols).collect();
            perm.rotate_right(seed as usize % cols.max(1));
            let signs: Vec<i64> = (0..cols).map(|j| if seed >> (j % 64) & 1 == 0 { -1 } else { 1 }).collect();
            let moved = apply(&rows, &(perm, signs));
            prop_assert_eq!(
                char_vector_criterion(&IntMatrix::from_rows(&moved), &q),
                char_vector_criterion(&IntMatrix::from_rows(&rows), &q)
            );
        }
    }

    #[test]
    fn standard_plumbing_is_definite_exactly_when_euler_positive(y in seifert_s2()) {
        let m = Manifold::Seifert(y.clone());
        let e = y.euler();
        match plumbing_tree(&m, Orientation::Positive) {
            Err(_) => prop_assert!(e.is_negative()),
            Ok(t) => {
                let q = rows_of(&t.incidence_matrix());
                prop_assert_eq!(oracle::is_negative_definite(&q), e.is_positive());
                prop_assert_eq!(oracle::det(&q) == 0, e.is_zero());
            }
        }
    }

    #[test]
    fn homology_order_is_determinant(y in seifert_s2()) {
        let m = Manifold::Seifert(y);
        let h = first_homology(&m);
        let t = plumbing_tree(&m, definite_orientation(&m)).unwrap();
        let d = oracle::det(&rows_of(&t.incidence_matrix()));
        if d == 0 {
            prop_assert!(h.b1 > 0);
        } else {
            prop_assert_eq!(h.b1, 0);
            prop_assert_eq!(h.torsion.order(), BigInt::from(d.abs()));
        }
    }

    #[test]
    fn pretzel_homology_matches_goeritz(s in strands(3..=4)) {
        let h = first_homology(&Manifold::Pretzel(PretzelCover::new(s.clone()).unwrap()));
        let g = oracle::goeritz_order(&s);
        if g == 0 {
            prop_assert!(h.b1 > 0);
        } else {
            prop_assert_eq!(h.torsion.order(), BigInt::from(g));
        }
    }

    #[test]
    fn pass_certificates_factor_the_form(s in prop::collection::vec(lens().prop_filter("odd", |(p, _)| p % 2 == 1), 1..=2)) {
        let mut l = s.clone();
        l.extend(s.iter().map(|&(p, q)| (p, p - q)));
        let q = lens_plumbing(&LensSum::new(l).unwrap()).incidence_matrix();
        let r = double_subset_obstruction(&q, None);
        prop_assert_eq!(r.verdict, Verdict::Pass);
        let Some(Certificate::SubsetPair { form, first, second, first_image, second_image }) = r.certificate else {
            return Err(TestCaseError::fail("missing pair certificate"));
        };
        prop_assert!(verify_factorization(&first, &form));
        prop_assert!(verify_factorization(&second, &form));
        prop_assert_eq!(&first_image.order * &second_image.order, form.determinant().abs());
    }

    #[test]
    fn obstruction_survives_larger_budgets(s in prop::collection::vec(lens(), 1..=2), budget in 1u64..2000) {
        let q = lens_plumbing(&LensSum::new(s).unwrap()).incidence_matrix();
        let small = double_subset_obstruction(&q, Some(budget));
        if small.is_obstructed() {
            prop_assert!(double_subset_obstruction(&q, Some(budget * 10)).is_obstructed());
            prop_assert!(double_subset_obstruction(&q, None).is_obstructed());
        }
    }

    #[test]
    fn lens_decision_ignores_inverse_and_order(s in prop::collection::vec(lens(), 1..=3), flip in any::<u8>()) {
        let opts = Options::default();
        let base = decide_lens_sum(&LensSum::new(s.clone()).unwrap(), &opts).status;
        let mut moved: Vec<(i64, i64)> = s
            .iter()
            .enumerate()
            .map(|(i, &(p, q))| {
                let inv = (1..p).find(|x| (x * q) % p == 1).unwrap();
                (p, if flip >> i & 1 == 1 { inv } else { q })
            })
            .collect();
        moved.reverse();
        prop_assert_eq!(decide_lens_sum(&LensSum::new(moved).unwrap(), &opts).status, base);
    }

    #[test]
    fn wu_sets_form_an_affine_space(s in strands(3..=4)) {
        let m = Manifold::Pretzel(PretzelCover::new(s).unwrap());
        let q = plumbing_tree(&m, definite_orientation(&m)).unwrap().incidence_matrix();
        let rows = rows_of(&q);
        let sets = wu_sets(&q).unwrap();
        prop_assert_eq!(sets.len(), 1 << (rows.len() - oracle::rank_mod2(&rows)));
        for w in &sets {
            for (i, r) in rows.iter().enumerate() {
                let lhs: i64 = r.iter().zip(w).map(|(x, &b)| x * b as i64).sum();
                prop_assert_eq!((lhs - r[i]).rem_euclid(2), 0);
            }
        }
    }

    #[test]
    fn mubar_changes_sign_with_orientation(s in strands(3..=4)) {
        let m = Manifold::Pretzel(PretzelCover::new(s).unwrap());
        let a = spin_profile(&m).unwrap();
        let b = spin_profile(&m.reversed()).unwrap();
        let mut neg: Vec<i64> = b.mu_values.iter().map(|x| -x).collect();
        neg.sort();
        prop_assert_eq!(a.vanishing(), b.vanishing());
        prop_assert_eq!(a.mu_values, neg);
    }

    #[test]
    fn thresholds_double_plus_one(k in 1usize..20) {
        prop_assert_eq!(mubar_threshold(k + 2), 2 * mubar_threshold(k) + 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn pretzel_decision_ignores_order_and_mirror(s in strands(3..=4), seed in any::<usize>()) {
        let opts = Options::default();
        let p = PretzelCover::new(s.clone()).unwrap();
        let base = decide_pretzel(&p, &opts).unwrap().status;
        let mut moved = s;
        let len = moved.len();
        moved.rotate_left(seed % len);
        if seed % 2 == 1 {
            moved.reverse();
        }
        prop_assert_eq!(decide_pretzel(&PretzelCover::new(moved.clone()).unwrap(), &opts).unwrap().status, base);
        prop_assert_eq!(decide_pretzel(&PretzelCover::new(moved).unwrap().mirror(), &opts).unwrap().status, base);
    }
}

#[test]
fn lens_class_matches_brute_force() {
    use s4embed::obstructions::lens_class;
    for p in 2..=30i64 {
        let qs: Vec<i64> = (1..p).filter(|&q| oracle::gcd(p, q) == 1).collect();
        for &a in &qs {
            for &b in &qs {
                assert_eq!(lens_class(p, a) == lens_class(p, b), oracle::lens_homeomorphic(p, a, b), "L({p},{a}) vs L({p},{b})");
            }
        }
    }
}
