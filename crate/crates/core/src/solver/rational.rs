//! Exact fraction type used for LP values and bound comparisons.
//!
//! Backed by `num_rational::BigRational`, which keeps values reduced with a
//! positive denominator, exactly the invariants the bound chain relies on.

use num_bigint::BigInt;

pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat_int<T: Into<BigInt>>(n: T) -> Rational {
    Rational::from_integer(n.into())
}

/// Rational from a numerator/denominator pair.
pub fn rat<T: Into<BigInt>, U: Into<BigInt>>(num: T, den: U) -> Rational {
    Rational::new(num.into(), den.into())
}

/// `base^exp` as a big integer.
pub fn big_pow(base: u32, exp: u32) -> BigInt {
    BigInt::from(base).pow(exp)
}

/// Ceiling of `a / b` for positive `b`.
pub fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    assert!(b > &BigInt::from(0));
    (a + b - 1) / b
}
