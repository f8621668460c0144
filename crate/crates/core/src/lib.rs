//! Exact q-series machinery for modular equations of eta quotients.
//!
//! The pipelines turn power sums of (reciprocal) roots, recognized as
//! polynomials in `j`, `gamma2` and `gamma3`, into modular polynomials via
//! Newton's identities. Every pipeline is generic over the coefficient ring
//! so the same code runs exactly or modulo word-sized primes.

pub mod coeff;
pub mod crt;
pub mod double_eta;
pub mod error;
pub mod format;
pub mod forms;
pub mod kiepert;
pub mod newton;
pub mod numeric;
pub mod poly;
pub mod recognize;
pub mod series;

pub use coeff::{Coeff, Fp, SeriesCoeff};
pub use error::{Error, Result};
pub use poly::{GammaPoly, ModEqPoly, Mono, NormalPoly};
pub use series::{FracSeries, ResidueSeries, Series};
