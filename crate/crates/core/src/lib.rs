//! Coefficient machinery for the class U(λ) of normalized analytic functions.
//!
//! - [`series`]: truncated power series with composition and reversion, in
//!   exact rational or float complex arithmetic.
//! - [`schwarz`]: Schwarz-function jets `(c1, c2, c3)`, the admissible region
//!   for U(λ) and deterministic samplers over it.
//! - [`ulambda`]: coefficients from jets, inverse coefficients, the
//!   Fekete–Szegő functional, the extremal function, defect and membership
//!   scans.
//! - [`verify`]: search-based checks of the coefficient bounds and the
//!   two-variable reduction for `|A4|`.
//! - [`pipeline`]: config-driven verification runs.

pub mod error;
pub mod pipeline;
pub mod scalar;
pub mod schwarz;
pub mod series;
pub mod ulambda;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex;
pub use num_rational::BigRational;
pub use scalar::{ExactComplex, Mode, Real};
pub use schwarz::{JetConstraintProfile, SampleStrategy, SchwarzJet};
pub use series::{AnySeries, NormalizedSeries, Series};
pub use ulambda::{FunctionModel, InverseTriple, ULambdaParams};
pub use verify::{BoundReport, FunctionalKind, SearchConfig};
