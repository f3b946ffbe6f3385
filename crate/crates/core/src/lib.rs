//! Exact-arithmetic construction of highest weight representations of the
//! affine Lie algebra of sl(2) through vector coherent states.
//!
//! The crate builds, over arbitrary-precision rationals:
//!
//! - sparse graded polynomials in the variable families x_k, y_k, z_k
//!   ([`poly`]);
//! - the finite-dimensional sl(2) module V0 ([`sl2`]) and the abstract
//!   affine algebra with its involution ([`affine`]);
//! - the generalized Verma module, its contravariant form, Gram matrices
//!   and singular vectors ([`verma`]);
//! - every generator as a locally finite differential operator on
//!   P(X, Y, Z) tensor V0 ([`realize`]);
//! - the coherent-state map intertwining the two and carrying the form's
//!   kernel to zero ([`vcs`]).
//!
//! The [`suite`] module packages the exact verification suites (bracket
//! homomorphism, grading, intertwining, contravariance, semidefiniteness,
//! kernel theorem) used by the CLI and the acceptance tests.

pub mod affine;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod realize;
pub mod report;
pub mod scalar;
pub mod sl2;
pub mod suite;
pub mod vcs;
pub mod verma;

pub use affine::{bracket, pbw_less, BracketResult, GenFamily, GeneratorLabel};
pub use error::Error;
pub use poly::{Family, Monomial, Polynomial, VarRef};
pub use realize::{Realization, RealizedOperator, VcsVector, ZCache};
pub use scalar::Scalar;
pub use sl2::{Sl2Gen, Sl2Irrep, V0Vector};
pub use verma::{PbwMonomial, VermaModule, WVector, WeightSpaceKey};
