//! Exact algebra used by the cross-ratio degree solver: prime and rational
//! fields, dense univariate and sparse multivariate polynomials, resultants,
//! factorization over prime fields, and arithmetic in `F[t]/(m)` with
//! on-demand splitting of the modulus.

pub mod factor;
pub mod field;
pub mod mpoly;
pub mod primes;
pub mod quotient;
pub mod resultant;
pub mod upoly;

pub use field::{Field, PrimeField, RationalField};
pub use mpoly::{Algebra, MPoly, Monomial};
pub use quotient::{evaluate_with_splitting, Quotient, Split, SplitOr, Uniform};
pub use upoly::UPoly;
