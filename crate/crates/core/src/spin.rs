//! Spin structures on plumbed 3-manifolds via Wu sets, and the μ̄ invariant.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::obstructions::{Certificate, ObstructionResult, Verdict};
use crate::linalg::{inertia, solve_mod2, IntMatrix, LinalgError};
use crate::plumbing::{definite_orientation, plumbing_tree, Manifold, Orientation, PlumbingError, PretzelCover};

/// Characteristic 0/1 vectors: `Q w ≡ diag(Q) (mod 2)`.
pub fn wu_sets(q: &IntMatrix) -> Result<Vec<Vec<u8>>, LinalgError> {
    let diag: Vec<BigInt> = (0..q.rows()).map(|i| q[(i, i)].clone()).collect();
    Ok(solve_mod2(q, &diag)?.enumerate())
}

/// `σ(Q) − wᵀ Q w` for the 0/1 lift of `w`.
pub fn mu_bar(q: &IntMatrix, w: &[u8]) -> i64 {
    let sigma = inertia(q).signature();
    let n = q.rows();
    let mut ww = BigInt::from(0);
    for i in 0..n {
        for j in 0..n {
            if w[i] == 1 && w[j] == 1 {
                ww += &q[(i, j)];
            }
        }
    }
    sigma - ww.to_i64().expect("small self-intersection")
}

/// Number of components of the pretzel link with the given strands.
pub fn link_components(strands: &[i64]) -> usize {
    let even = strands.iter().filter(|a| *a % 2 == 0).count();
    match even {
        0 if strands.len() % 2 == 1 => 1,
        0 => 2,
        m => m,
    }
}

/// Minimum number of spin structures with vanishing μ̄ on the double
/// branched cover of a `k`-component link whose cover embeds in S⁴.
pub fn mubar_threshold(k: usize) -> usize {
    assert!(k >= 1);
    if k % 2 == 1 {
        (1 << k.div_ceil(2)) - 1
    } else {
        3 * (1 << ((k - 2) / 2)) - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpinProfile {
    pub spin_count: usize,
    /// μ̄ for each spin structure, in the orientation of the input, sorted.
    pub mu_values: Vec<i64>,
    pub wu_sets: Vec<Vec<u8>>,
    pub link_components: Option<usize>,
}

impl SpinProfile {
    pub fn vanishing(&self) -> usize {
        self.mu_values.iter().filter(|&&m| m == 0).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpinError {
    #[error(transparent)]
    Plumbing(#[from] PlumbingError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Wu sets and μ̄ values computed on the standard plumbing of whichever
/// orientation makes it (semi-)definite. μ̄ changes sign with orientation.
pub fn spin_profile(m: &Manifold) -> Result<SpinProfile, SpinError> {
    let orientation = definite_orientation(m);
    let q = plumbing_tree(m, orientation)?.incidence_matrix();
    let sets = wu_sets(&q)?;
    let sign = if orientation == Orientation::Negative { -1 } else { 1 };
    let mut mu_values: Vec<i64> = sets.iter().map(|w| sign * mu_bar(&q, w)).collect();
    mu_values.sort_unstable();
    let link_components = match m {
        Manifold::Pretzel(p) => Some(link_components(&p.strands)),
        _ => None,
    };
    Ok(SpinProfile { spin_count: sets.len(), mu_values, wu_sets: sets, link_components })
}

pub fn pretzel_spin_profile(p: &PretzelCover) -> Result<SpinProfile, SpinError> {
    spin_profile(&Manifold::Pretzel(p.clone()))
}

/// Counts spin structures with vanishing μ̄ against the threshold for the
/// number of link components.
pub fn mubar_embedding_obstruction(p: &PretzelCover) -> ObstructionResult {
    mubar_obstruction(&Manifold::Pretzel(p.clone()))
}

/// Same count for any double branched cover of a link. Seifert spaces over
/// S² cover Montesinos links; the component count is read off the number of
/// spin structures, `2^(k−1)`.
pub fn mubar_obstruction(m: &Manifold) -> ObstructionResult {
    let name = "mubar";
    let profile = match spin_profile(m) {
        Ok(s) => s,
        Err(e) => {
            return ObstructionResult { name, verdict: Verdict::Inconclusive, certificate: None, notes: e.to_string() }
        }
    };
    let k = profile.link_components.unwrap_or(profile.spin_count.trailing_zeros() as usize + 1);
    let threshold = mubar_threshold(k);
    let vanishing = profile.vanishing();
    let verdict = if vanishing < threshold { Verdict::Obstructed } else { Verdict::Pass };
    let notes = if verdict == Verdict::Obstructed {
        format!("{vanishing} spin structures with vanishing mu-bar, at least {threshold} needed")
    } else {
        String::new()
    };
    let certificate = Some(Certificate::MuBar { components: k, values: profile.mu_values, vanishing, threshold });
    ObstructionResult { name, verdict, certificate, notes }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FurutaCase {
    /// Closed-up side is a rational homology ball.
    RationalBall,
    /// Rational homology S¹ × D³.
    CircleHomology,
    /// Rational homology S² × D².
    SphereHomology,
}

/// The 10/8-type inequalities. `trivial` means `X = D⁴` in the first case.
pub fn furuta_check(case: FurutaCase, b2: i64, sigma_terms: &[i64], trivial: bool) -> bool {
    let sigma: i64 = sigma_terms.iter().sum();
    match case {
        FurutaCase::RationalBall => trivial || 4 * b2 >= 5 * sigma.abs() + 8,
        FurutaCase::CircleHomology => b2 == 1 || 4 * b2 >= 5 * sigma.abs() + 12,
        FurutaCase::SphereHomology => 4 * b2 >= 5 * sigma.abs() + 4,
    }
}
