//! Exact-arithmetic constructions for multiple Meixner polynomials (first and
//! second kind) and multiple Charlier polynomials, together with everything
//! needed to verify them: explicit and Rodrigues evaluations, generating
//! function expansions, nearest-neighbor recurrences, discrete orthogonality
//! with rigorous tail bounds, square-summability probes, and truncated
//! Fock-lattice oscillator Hamiltonians whose common eigenstates are built
//! from the polynomial values.
//!
//! Every scalar is an arbitrary-precision rational; identities are checked by
//! exact equality, never by floating-point closeness. The only irrational
//! outputs (normalization constants, radius estimates) carry explicit rational
//! brackets or are clearly labeled as empirical decimals.

pub mod error;
pub mod multiindex;
pub mod oscillator;
pub mod orthocheck;
pub mod poly;
pub mod polyfam;
pub mod rational;
pub mod recurrence;
pub mod series;
pub mod summability;

pub use error::{Error, Result};
pub use multiindex::MultiIndex;
pub use poly::DensePoly;
pub use rational::Rational;
pub use series::TruncatedSeries;
