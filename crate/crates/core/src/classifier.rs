//! Decision procedures for the three input classes, the catalog of known
//! embeddings, and the merge of all obstructions into one status.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::obstructions::{
    complementary_pairing_obstruction, double_subset_obstruction, homology_square_obstruction,
    lens_pairing_obstruction, nonorientable_obstruction, semidefinite_obstruction, uncomplemented,
    weak_pairing_obstruction, ObstructionResult, Verdict,
};
use crate::plumbing::{
    definite_orientation, first_homology, plumbing_tree, Base, LensSum, Manifold, PretzelCover, SeifertManifold,
};
use crate::spin::mubar_obstruction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Embeds,
    Obstructed,
    Unknown,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Embeds => "EMBEDS",
            Status::Obstructed => "OBSTRUCTED",
            Status::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Decision {
    pub status: Status,
    pub reason: String,
    pub obstructions: Vec<ObstructionResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifierError {
    #[error("catalog entry {entry} conflicts with completed obstruction {obstruction}")]
    Conflict { entry: &'static str, obstruction: &'static str },
    #[error("expected 3 or 4 strands, got {0}")]
    StrandCount(usize),
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    /// Search-node budget per obstruction.
    pub budget: Option<u64>,
    /// Run only these obstructions; empty means all.
    pub only: Vec<String>,
}

impl Options {
    pub fn with_budget(budget: u64) -> Self {
        Options { budget: Some(budget), only: Vec::new() }
    }

    fn wants(&self, name: &str) -> bool {
        self.only.is_empty() || self.only.iter().any(|n| n == name)
    }
}

/// Names of every obstruction `full_report` may run.
pub const OBSTRUCTION_NAMES: &[&str] = &[
    "homology_square",
    "lens_pairing",
    "double_subset",
    "double_subset_reversed",
    "complementary_pairing",
    "weak_complementary_pairing",
    "semidefinite",
    "nonorientable",
    "mubar",
];

/// Orientation-free normal form of Seifert data: normalized invariants in
/// sorted order, taking the smaller of the two orientations.
pub fn seifert_class(y: &SeifertManifold) -> (Base, i64, Vec<(i64, i64)>) {
    let key = |s: &SeifertManifold| {
        let n = s.normalized();
        let mut inv = n.invariants;
        inv.sort_unstable();
        (n.base, n.r, inv)
    };
    key(y).min(key(&y.reversed()))
}

/// Pretzel covers that embed by the band-move constructions, with strand
/// sizes up to `bound`, tagged with their family.
fn embeddable_pretzels(bound: i64) -> Vec<(&'static str, Vec<i64>)> {
    let mut out = Vec::new();
    let sizes = || (-bound..=bound).filter(|a| a.abs() >= 2);
    for a in sizes() {
        out.push(("pretzel(a,-a,a)", vec![a, -a, a]));
        out.push(("pretzel(a,-a,a,-a)", vec![a, -a, a, -a]));
        for d in [a + 1, a - 1] {
            if d != 0 {
                out.push(("pretzel(a+-1,-a,a,-a)", vec![d, -a, a, -a]));
            }
        }
        for b in sizes().filter(|b| b % 2 != 0) {
            out.push(("pretzel(a,-a,b,-b)", vec![a, -a, b, -b]));
        }
    }
    out
}

/// Members `(2λ−1, −2λ−1, −2λ²)` of the open family with fibres up to `bound`.
fn open_family(bound: i64) -> Vec<Vec<i64>> {
    (-bound..=bound)
        .filter(|l| l.abs() >= 2 && 2 * l * l <= bound)
        .map(|l| vec![2 * l - 1, -2 * l - 1, -2 * l * l])
        .collect()
}

fn max_fibre(y: &SeifertManifold) -> i64 {
    y.invariants.iter().map(|&(a, _)| a).max().unwrap_or(1)
}

fn matches_pretzel(y: &SeifertManifold, strands: &[i64]) -> bool {
    PretzelCover::new(strands.to_vec()).is_ok_and(|p| seifert_class(&p.to_seifert()) == seifert_class(y))
}

/// The Seifert space of the worked example that embeds after a band move.
fn worked_example() -> SeifertManifold {
    SeifertManifold { base: Base::Orientable(0), r: 0, invariants: vec![(4, 1), (4, 1), (12, -7)] }
}

/// Name of the catalog entry containing `m`, if any.
pub fn catalog_lookup(m: &Manifold) -> Option<&'static str> {
    match m {
        Manifold::S3 => Some("s3"),
        Manifold::Lens(l) => lens_embeds(l).then_some("mirror_paired_lens_sum"),
        _ => {
            let y = m.seifert()?;
            if y.base != Base::Orientable(0) {
                return None;
            }
            if y.euler().is_zero() && y.invariants.iter().all(|(a, _)| a % 2 == 1) && uncomplemented(&y.invariants).is_empty()
            {
                return Some("complementary_odd_seifert");
            }
            if seifert_class(&y) == seifert_class(&worked_example()) {
                return Some("seifert(S2;0;(4,1),(4,1),(12,-7))");
            }
            let bound = max_fibre(&y) + 2;
            embeddable_pretzels(bound).into_iter().find(|(_, s)| matches_pretzel(&y, s)).map(|(name, _)| name)
        }
    }
}

/// Whether `m` lies in the family whose embedding question is open.
pub fn in_open_family(m: &Manifold) -> bool {
    let Some(y) = m.seifert() else { return false };
    y.base == Base::Orientable(0) && open_family(max_fibre(&y)).iter().any(|s| matches_pretzel(&y, s))
}

fn lens_embeds(l: &LensSum) -> bool {
    !lens_pairing_obstruction(l).is_obstructed()
}

/// Every obstruction that applies to `m`, each run to completion or budget.
pub fn run_obstructions(m: &Manifold, opts: &Options) -> Vec<ObstructionResult> {
    let mut out = Vec::new();
    let mut run = |name: &str, f: &dyn Fn() -> ObstructionResult| {
        if opts.wants(name) {
            out.push(f());
        }
    };
    run("homology_square", &|| homology_square_obstruction(&first_homology(m)));
    match m {
        Manifold::S3 => {}
        Manifold::Lens(l) => {
            run("lens_pairing", &|| lens_pairing_obstruction(l));
            let q = crate::plumbing::lens_plumbing(l).incidence_matrix();
            run("double_subset", &|| double_subset_obstruction(&q, opts.budget));
            let q = crate::plumbing::lens_plumbing(&l.reversed()).incidence_matrix();
            run("double_subset_reversed", &|| {
                let mut r = double_subset_obstruction(&q, opts.budget);
                r.name = "double_subset_reversed";
                r
            });
        }
        Manifold::Seifert(_) | Manifold::Pretzel(_) => {
            let y = m.seifert().expect("Seifert data");
            match y.base {
                Base::NonOrientable(_) => {
                    run("weak_complementary_pairing", &|| weak_pairing_obstruction(&y));
                    let q = plumbing_tree(m, definite_orientation(m)).expect("legs only").incidence_matrix();
                    run("nonorientable", &|| nonorientable_obstruction(&q, opts.budget));
                }
                Base::Orientable(g) => {
                    let e = y.euler();
                    if e.is_zero() {
                        run("complementary_pairing", &|| complementary_pairing_obstruction(&y));
                    }
                    if g == 0 {
                        let q = plumbing_tree(m, definite_orientation(m)).expect("definite side").incidence_matrix();
                        if e.is_zero() {
                            run("semidefinite", &|| semidefinite_obstruction(&q, opts.budget));
                        } else {
                            run("double_subset", &|| double_subset_obstruction(&q, opts.budget));
                        }
                        run("mubar", &|| mubar_obstruction(m));
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub status: Status,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog: Option<&'static str>,
    pub obstructions: Vec<ObstructionResult>,
}

/// Runs every applicable obstruction and merges: a completed obstruction
/// gives OBSTRUCTED, a catalog hit gives EMBEDS, both at once is an error.
pub fn full_report(m: &Manifold, opts: &Options) -> Result<Report, ClassifierError> {
    let obstructions = run_obstructions(m, opts);
    let catalog = catalog_lookup(m);
    let first_obstructed = obstructions.iter().find(|o| o.verdict == Verdict::Obstructed).map(|o| o.name);
    let (status, reason) = match (first_obstructed, catalog) {
        (Some(obstruction), Some(entry)) => return Err(ClassifierError::Conflict { entry, obstruction }),
        (Some(o), None) => (Status::Obstructed, o.to_string()),
        (None, Some(entry)) => (Status::Embeds, format!("catalog:{entry}")),
        (None, None) if in_open_family(m) => (Status::Unknown, "open family (2l-1,-2l-1,-2l^2)".to_string()),
        (None, None) => {
            let inconclusive = obstructions.iter().any(|o| o.verdict == Verdict::Inconclusive);
            let why = if inconclusive { "some obstruction was inconclusive" } else { "no obstruction applies" };
            (Status::Unknown, why.to_string())
        }
    };
    Ok(Report { status, reason, catalog, obstructions })
}

/// Lens sums embed exactly when every order is odd and the summands come
/// in mirror pairs. Small sums also carry the subset search as a cross-check.
pub fn decide_lens_sum(l: &LensSum, opts: &Options) -> Decision {
    let pairing = lens_pairing_obstruction(l);
    let status = if pairing.is_obstructed() { Status::Obstructed } else { Status::Embeds };
    let reason = if pairing.is_obstructed() { pairing.notes.clone() } else { "mirror pairs".to_string() };
    let mut obstructions = vec![pairing];
    let size: usize = l.summands.iter().map(|&(p, q)| crate::plumbing::neg_continued_fraction(p, q).map_or(0, |c| c.len())).sum();
    if size <= 12 {
        for side in [l.clone(), l.reversed()] {
            let q = crate::plumbing::lens_plumbing(&side).incidence_matrix();
            obstructions.push(double_subset_obstruction(&q, opts.budget));
        }
    }
    Decision { status, reason, obstructions }
}

fn first_obstruction(obs: &[ObstructionResult]) -> Option<&ObstructionResult> {
    obs.iter().find(|o| o.is_obstructed())
}

pub fn decide_seifert(y: &SeifertManifold, opts: &Options) -> Decision {
    let m = Manifold::Seifert(y.clone());
    let obstructions = run_obstructions(&m, opts);
    let (status, reason) = if let Some(o) = first_obstruction(&obstructions) {
        (Status::Obstructed, o.name.to_string())
    } else if let Some(entry) = catalog_lookup(&m) {
        (Status::Embeds, format!("catalog:{entry}"))
    } else {
        (Status::Unknown, "no obstruction applies".to_string())
    };
    Decision { status, reason, obstructions }
}

/// Whether the strands satisfy the size hypotheses of the pretzel
/// classification: at most one strand of size one, and only with four strands.
pub fn in_pretzel_range(p: &PretzelCover) -> bool {
    let units = p.strands.iter().filter(|a| a.abs() == 1).count();
    units == 0 || (units == 1 && p.strands.len() == 4)
}

/// Classification of 3- and 4-strand pretzel covers: the four embeddable
/// families, the open family, and everything else obstructed. Inputs outside
/// the size hypotheses go through the Seifert route.
pub fn decide_pretzel(p: &PretzelCover, opts: &Options) -> Result<Decision, ClassifierError> {
    if !(3..=4).contains(&p.strands.len()) {
        return Err(ClassifierError::StrandCount(p.strands.len()));
    }
    let m = Manifold::Pretzel(p.clone());
    if !in_pretzel_range(p) {
        return Ok(decide_seifert(&p.to_seifert(), opts));
    }
    let y = p.to_seifert();
    let bound = max_fibre(&y) + 2;
    if let Some((family, _)) = embeddable_pretzels(bound).into_iter().find(|(_, s)| matches_pretzel(&y, s)) {
        return Ok(Decision { status: Status::Embeds, reason: format!("family {family}"), obstructions: Vec::new() });
    }
    if in_open_family(&m) {
        return Ok(Decision {
            status: Status::Unknown,
            reason: "open family (2l-1,-2l-1,-2l^2)".to_string(),
            obstructions: Vec::new(),
        });
    }
    let obstructions = run_obstructions(&m, opts);
    let reason = match first_obstruction(&obstructions) {
        Some(o) => o.name.to_string(),
        None => "outside the embeddable families".to_string(),
    };
    Ok(Decision { status: Status::Obstructed, reason, obstructions })
}

/// Sorted strand multisets of the embeddable families, up to mirror, with
/// entries in `[-bound, bound]`.
pub fn embeddable_strand_sets(bound: i64) -> BTreeSet<Vec<i64>> {
    embeddable_pretzels(bound)
        .into_iter()
        .filter(|(_, s)| s.iter().all(|a| a.abs() <= bound))
        .flat_map(|(_, s)| {
            let p = PretzelCover { strands: s };
            [p.sorted_strands(), p.mirror().sorted_strands()]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pretzel(s: &[i64]) -> Manifold {
        Manifold::Pretzel(PretzelCover::new(s.to_vec()).unwrap())
    }

    fn lens(s: &[(i64, i64)]) -> LensSum {
        LensSum::new(s.to_vec()).unwrap()
    }

    #[test]
    fn lens_decisions() {
        let o = Options::default();
        assert_eq!(decide_lens_sum(&lens(&[(3, 1), (3, 2)]), &o).status, Status::Embeds);
        assert_eq!(decide_lens_sum(&lens(&[(2, 1), (2, 1)]), &o).status, Status::Obstructed);
        assert_eq!(decide_lens_sum(&lens(&[(5, 1), (5, 1)]), &o).status, Status::Obstructed);
    }

    #[test]
    fn seifert_decisions() {
        let o = Options::default();
        let s2 = |inv: Vec<(i64, i64)>| SeifertManifold::new(Base::Orientable(0), 0, inv).unwrap();
        assert_eq!(decide_seifert(&s2(vec![(5, 1), (5, -1)]), &o).status, Status::Embeds);
        assert_eq!(decide_seifert(&s2(vec![(4, 1), (4, 1), (12, -7)]), &o).status, Status::Embeds);
        let non = SeifertManifold::new(Base::NonOrientable(1), 0, vec![(3, 1), (2, 1)]).unwrap();
        assert_eq!(decide_seifert(&non, &o).status, Status::Obstructed);
    }

    #[test]
    fn pretzel_decisions() {
        let o = Options::default();
        let d = |s: &[i64]| decide_pretzel(&PretzelCover::new(s.to_vec()).unwrap(), &o).unwrap().status;
        assert_eq!(d(&[3, -3, 3]), Status::Embeds);
        assert_eq!(d(&[3, -5, -8]), Status::Unknown);
        assert_eq!(d(&[1, -4, -4, -4]), Status::Obstructed);
        assert_eq!(d(&[2, -2, 2, -1]), Status::Embeds);
    }

    #[test]
    fn reports() {
        let o = Options::default();
        let r = full_report(&pretzel(&[2, -2, 3, -3]), &o).unwrap();
        assert_eq!(r.status, Status::Embeds);
        assert!(r.obstructions.iter().all(|x| x.verdict == Verdict::Pass));
        let r = full_report(&Manifold::Lens(lens(&[(5, 1), (5, 1)])), &o).unwrap();
        assert_eq!(r.status, Status::Obstructed);
        assert_eq!(full_report(&Manifold::S3, &o).unwrap().status, Status::Embeds);
    }

    #[test]
    fn classes_ignore_orientation_and_order() {
        let a = PretzelCover::new(vec![3, -3, 3]).unwrap().to_seifert();
        let b = PretzelCover::new(vec![-3, 3, -3]).unwrap().to_seifert();
        assert_eq!(seifert_class(&a), seifert_class(&b));
        let c = PretzelCover::new(vec![2, -2, 2]).unwrap().to_seifert();
        let d = PretzelCover::new(vec![-1, 2, 2, 2]).unwrap().to_seifert();
        assert_eq!(seifert_class(&c), seifert_class(&d));
    }
}
