//! Exact Schubert calculus on adjoint and coadjoint homogeneous spaces.
//!
//! The crate computes structure constants for the Schubert basis of the
//! cohomology of the classical (co)adjoint partial flag varieties — the
//! two-step flag variety `Fl(1, n-1; n)`, the Lagrangian and orthogonal
//! Grassmannians of 2-planes `LG(2, 2n)`, `OG(2, 2n+1)`, `OG(2, 2n)`, the
//! adjoint/coadjoint projective spaces and quadrics of types `B`/`C`, and
//! both rank-two quotients of `G2`.  Schubert classes are indexed by small
//! diagrams (one or two rows of boxes plus a distinguished top box), products
//! are evaluated by closed combinatorial rules, and every rule can be
//! cross-checked against an independent Weyl-group localization oracle.
//!
//! All arithmetic is exact: coefficients are rational during intermediate
//! steps and are checked to be nonnegative integers on output.

pub mod amult;
pub mod dmult;
pub mod lr2;
pub mod nonzero;
pub mod oracle;
pub mod rootsys;
pub mod shapes;

pub use amult::{multiply, ClassCombo};
pub use shapes::{Charge, Family, Shape};

/// Errors surfaced by shape parsing, validation and exact arithmetic.
#[derive(Debug, thiserror::Error)]
pub enum RydError {
    /// The requested rank is outside the range supported for the Lie type.
    #[error("rank {rank} is not supported for type {family:?}")]
    BadRank {
        family: rootsys::SysFamily,
        rank: usize,
    },
    /// A diagram failed validation for its family.
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    /// A string could not be parsed.
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
    /// Two arguments belong to different families or different ranks.
    #[error("family mismatch: {0}")]
    FamilyMismatch(String),
    /// An exact computation produced a non-integer where an integer is required.
    #[error("non-integral coefficient {coeff} on {shape}")]
    NonIntegral { coeff: String, shape: String },
    /// Catch-all for invalid arguments.
    #[error("{0}")]
    Invalid(String),
}
