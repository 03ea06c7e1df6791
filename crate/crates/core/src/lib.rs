//! Exact arithmetic for temperate distributions with locally finite support:
//! full-rank rational lattices and their cosets, finite set algebra over
//! cosets, comb distributions with derivative terms and trigonometric-sum
//! coefficients, a symbolic Fourier transform closed on that class, and
//! numerical verification against Gaussian-Hermite test functions.

pub mod comb;
pub mod coset_ring;
pub mod detect;
pub mod error;
pub mod fourier;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod scalar;
pub mod testfn;
pub mod wfunc;

pub use comb::{CombDistribution, CombSupport, CombTerm};
pub use coset_ring::{CosetExpression, NormalizedSystem};
pub use detect::{CosetFit, PointCloud};
pub use error::Error;
pub use lattice::{Coset, Lattice, Point};
pub use scalar::{CScalar, Scalar, Vector};
pub use testfn::TestFunction;
pub use wfunc::WFunction;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
