//! Exact integer linear algebra.

mod group;
mod matrix;
mod mod2;
mod normal_form;
pub(crate) mod ser;

pub use group::{
    cokernel, direct_sum_test, image_subgroup, is_perfect_square, subgroup_from_generators, subgroup_sum,
    DirectSumTest, FiniteAbelianGroup, Subgroup,
};
pub use matrix::IntMatrix;
pub use mod2::{solve_mod2, Mod2Solutions};
pub use normal_form::{
    hermite_basis, inertia, smith_normal_form, solve_lower_triangular, Inertia, SmithForm,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("element has {len} coordinates but the group has rank {rank}, or is out of range")]
    NotAnElement { len: usize, rank: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("inconsistent system over GF(2)")]
    Inconsistent,
}
