use num_rational::Ratio;
use thiserror::Error;

/// Errors raised anywhere in the series, recognition and equation pipelines.
///
/// Variants name the invariant that failed so the CLI can surface them
/// verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot invert a series whose leading coefficient is zero or not invertible")]
    ZeroLeadingCoefficient,

    #[error("inverse of an exact series with more than one term needs an explicit truncation")]
    ExactInverse,

    #[error("coefficient at q^{exponent} requested but the series is only known below q^{precision}")]
    PrecisionExceeded {
        exponent: Ratio<i64>,
        precision: Ratio<i64>,
    },

    #[error("non-integer coefficient {value} at q^{exponent}")]
    NonIntegerCoefficient { exponent: Ratio<i64>, value: String },

    #[error("residual after recognition has order {0} (expected >= 1)")]
    ResidualNotPositiveOrder(Ratio<i64>),

    #[error("series is not a polynomial in j: residual has order {0}")]
    NonzeroResidual(Ratio<i64>),

    #[error("series known only below q^{0}, recognition needs the q^0 coefficient")]
    InsufficientPrecision(Ratio<i64>),

    #[error("valuation denominator {0} does not divide 6")]
    UnsupportedDenominator(i64),

    #[error("no gamma2^i gamma3^b twist makes the exponents of the series integral")]
    NoIntegralTwist,

    #[error("recognized polynomial has degree {degree} but only powers up to {max} were prepared")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error("Newton recurrence produced a non-integral coefficient at step {0}")]
    NonIntegralCoefficient(usize),

    #[error("inconsistent scaling while reversing the polynomial: {0}")]
    InconsistentScaling(String),

    #[error("unsupported prime {0}: the single-prime pipeline needs a prime p > 3")]
    UnsupportedPrime(u64),

    #[error("no modular equation in gamma2/gamma3 for the pair ({0}, {1})")]
    UnsupportedPair(u64, u64),

    #[error("exponent e = {given} does not match the admissible value {expected} for this pair")]
    ExponentMismatch { given: u32, expected: u32 },

    #[error("parameter invariant violated: {0}")]
    InvariantViolation(String),

    #[error("prefactor zeta24^{zeta24} * sqrt({prime})^{half_power} is not rational")]
    PrefactorNotRational {
        zeta24: i64,
        prime: u64,
        half_power: i64,
    },

    #[error("power sums need k != 0")]
    ZeroPowerIndex,

    #[error("property check failed: {0}")]
    PropertyCheckFailed(String),

    #[error("prime {0} is not admissible for this task")]
    InadmissiblePrime(u64),

    #[error("CRT reconstruction did not stabilise within {0} primes")]
    NotConverged(usize),

    #[error("neither +f nor -f annihilates the equation (residuals {plus:.3e} / {minus:.3e})")]
    NoVanishingSign { plus: f64, minus: f64 },

    #[error("q-series evaluation did not converge: last term {last:.3e} vs sum {sum:.3e}")]
    ConvergenceWarning { last: f64, sum: f64 },

    #[error("need at least one sample point")]
    NoSamples,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
