//! Exact arithmetic over the field of multivariate rational functions.
//!
//! The ground field is the rationals. The distinguished variable `t`
//! parametrizes deformation curves and supports a valuation and a limit
//! at zero; every other variable is a generic family parameter.

mod expr;
mod poly;
mod scalar;
mod sym;

pub use expr::{parse_expression, parse_scalar, parse_with_location, ExprMode, Parsed, Radical, SqrtExpr};
pub use poly::{gcd as poly_gcd, Polynomial};
pub use scalar::Scalar;
pub use sym::Sym;

/// Exact rational number: arbitrary-precision, always reduced,
/// denominator positive.
pub type Rational = num_rational::BigRational;

pub(crate) type Int = num_bigint::BigInt;

use num_traits::{Signed, Zero};

/// The exact square root of a rational, when it is the square of a rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rational::zero());
    }
    let num_root = r.numer().sqrt();
    let den_root = r.denom().sqrt();
    if &(&num_root * &num_root) == r.numer() && &(&den_root * &den_root) == r.denom() {
        Some(Rational::new(num_root, den_root))
    } else {
        None
    }
}
