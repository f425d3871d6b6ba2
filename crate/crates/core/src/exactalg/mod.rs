//! Exact rational arithmetic: polynomials, determinants, resultants,
//! Gröbner bases and Sturm sequences.

mod det;
mod groebner;
mod modular;
mod mpoly;
mod resultant;
mod sturm;
mod upoly;

use thiserror::Error;

pub use det::{det_rational, mat_det};
pub use groebner::{groebner_lex, GroebnerBasis, MonomialOrder, MAX_VARS};
pub use modular::{modular_eliminate, ModularElimination, ShapeForm};
pub use mpoly::{MPoly, Monomial};
pub use resultant::resultant;
pub use sturm::{sturm_count, SturmChain};
pub use upoly::{is_squarefree, upoly_gcd, UPoly};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("matrix is not square: {rows} rows but a row of length {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix of size {0} is too large for symbolic expansion")]
    MatrixTooLarge(usize),
    #[error("variable counts differ: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("gcd of two zero polynomials is undefined")]
    ZeroGcd,
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial is not square-free")]
    NotSquareFree,
    #[error("polynomial has degree 0 in variable x{}", .0 + 1)]
    ZeroDegreeInVariable(usize),
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("variable order must be a permutation of all variables")]
    BadVariableOrder,
    #[error("{0} variables exceeds the supported maximum of {MAX_VARS}")]
    TooManyVariables(usize),
    #[error("monomial exponent overflow")]
    ExponentOverflow,
    #[error("modular lifting did not stabilise after {0} primes")]
    LiftingFailed(usize),
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `n / d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
