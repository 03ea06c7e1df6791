//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by lattice algebra, coset normalization, distribution
/// operations and the detection fitter.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A lattice basis with zero determinant was supplied.
    #[error("singular basis: determinant is zero")]
    SingularBasis,

    /// An intersection of lattice-like subgroups has rank below the ambient
    /// dimension. Carries the achieved rank and a basis (one generator per
    /// entry, rational strings) of the intersection subgroup.
    #[error("intersection has rank {rank} < ambient dimension; not a full-rank lattice")]
    RankDeficientIntersection {
        rank: usize,
        basis: Vec<Vec<String>>,
    },

    /// `index_in` was called with a lattice that is not contained in the other.
    #[error("not a sublattice")]
    NotASublattice,

    /// Vector/point dimension does not match the ambient dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Fewer than two points were supplied where pairwise distances are needed.
    #[error("too few points: need at least 2, got {got}")]
    TooFewPoints { got: usize },

    /// An operation requiring exact rational data was called on numeric-mode
    /// values.
    #[error("operation requires exact rational mode, got numeric-mode data")]
    NumericModeUnsupported,

    /// Set algebra over leaves whose lattices admit no full-rank rational
    /// intersection. Never occurs for rational leaves; reserved for
    /// numeric-mode misuse.
    #[error("incommensurable leaves in coset expression")]
    IncommensurableLeaves,

    /// The Neumann-series reciprocal needs the constant term to dominate the
    /// rest of the W-norm.
    #[error("not dominated: |f - c| has W-norm {tail_norm} >= |c| = {center_abs}")]
    NotDominated { tail_norm: f64, center_abs: f64 },

    /// Partial sums do not determine a growth slope.
    #[error("degenerate data: partial sums admit no log-log slope")]
    DegenerateData,

    /// A term flavor cannot be transformed in the requested composition.
    #[error("unsupported term: {0}")]
    UnsupportedTerm(String),

    /// The certified tail bound could not be brought below the tolerance.
    #[error("nonconvergent tail: bound {bound} > tolerance {tol} at radius {radius}")]
    NonconvergentTail { bound: f64, tol: f64, radius: f64 },

    /// No candidate coset covers at least two cloud points.
    #[error("no fit: no candidate coset covers two or more points")]
    NoFit,

    /// Malformed or version-incompatible document.
    #[error("document error: {0}")]
    Document(String),
}
