//! Exact integer linear algebra: Smith normal form, finitely generated
//! abelian groups and homology of integer complexes.

mod complex;
mod group;
mod lattice;
mod matrix;
mod reduce;
mod snf;

pub use complex::{induced_between, ChainMap, Direction, Homology, IntChainComplex};
pub use group::{cokernel_presentation, group_from_presentation, FGAbelianGroup, GroupHom, Subquotient};
pub use lattice::{kernel_basis, span_basis, unimodular_inverse, Solver};
pub use matrix::IntMatrix;
pub use reduce::{induced_between_reduced, ReducedComplex};
pub use snf::{invariant_factors, smith_normal_form, Snf};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("image of torsion generator {generator} has incompatible order")]
    NotWellDefined { generator: usize },
    #[error("vector does not lie in the lattice")]
    NotInLattice,
    #[error("differential squares to a nonzero map leaving degree {degree}")]
    NotAComplex { degree: i64 },
    #[error("chain map does not commute with differentials in degree {degree}")]
    NonCommuting { degree: i64 },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("cannot parse group `{0}`")]
    Parse(String),
}
