//! Exact and asymptotic probabilities of structural properties of random
//! directed graphs near their phase transition.

pub mod scalar;
pub mod series;
pub mod quadrature;
pub mod airy;
pub mod airy_integrals;
pub mod deformed_exp;
pub mod strong;
pub mod families;
pub mod oracle;
pub mod asymptotics;

pub use scalar::{BigRational, Coeff, HPComplex, HPReal, RingTag, ScalarError, DEFAULT_PRECISION};
pub use series::{BivariateSeries, SeriesError, TreeKind, TruncatedSeries};
