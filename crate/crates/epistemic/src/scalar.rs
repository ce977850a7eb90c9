//! The scalar field the engine computes over.
//!
//! All linear algebra is generic over [`Scalar`], a field with an involutive
//! conjugation and an ordered real part. The shipped instantiation is the
//! Gaussian rationals `Complex<BigRational>`: every predicate downstream is an
//! exact equality, so floating-point types are deliberately not supported.

use std::fmt::Debug;
use std::str::FromStr;

use num::bigint::BigInt;
use num::traits::{Num, Signed};
use num::{BigRational, Complex, One, Zero};
use thiserror::Error;

/// A field with conjugation, suitable for exact Hilbert-space computations.
///
/// `conj` must be an involution, `x * x.conj()` must have zero imaginary part
/// and nonnegative real part, and equality must be decidable exactly.
pub trait Scalar: Num + Clone + PartialEq + Debug {
    /// The ordered field of real parts.
    type Real: Num + Clone + PartialEq + PartialOrd + Debug;

    fn conj(&self) -> Self;
    fn real_part(&self) -> Self::Real;
    fn is_real(&self) -> bool;
    fn from_real(r: Self::Real) -> Self;
}

impl Scalar for Complex<BigRational> {
    type Real = BigRational;

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn real_part(&self) -> BigRational {
        self.re.clone()
    }

    fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    fn from_real(r: BigRational) -> Self {
        Complex::new(r, BigRational::zero())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid rational literal {input:?}: expected -?<digits>(/<digits>)? with nonzero denominator")]
pub struct ParseRationalError {
    pub input: String,
}

/// Parses the rational literal grammar `-?<digits>(/<digits>)?`.
///
/// The result is stored reduced with a positive denominator, so `"2/4"` and
/// `"1/2"` load identically.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseRationalError> {
    let err = || ParseRationalError { input: s.to_owned() };
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let num_body = num_str.strip_prefix('-').unwrap_or(num_str);
    if !digits(num_body) || !den_str.map_or(true, digits) {
        return Err(err());
    }
    let numer = BigInt::from_str(num_str).map_err(|_| err())?;
    let denom = match den_str {
        Some(d) => BigInt::from_str(d).map_err(|_| err())?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(numer, denom))
}

/// Renders a rational as `n` or `n/d`, the inverse of [`parse_rational`].
pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

/// Renders a Gaussian rational for human-facing output, e.g. `1`, `-1/2i`,
/// `1/2+1/3i`.
pub fn format_scalar(z: &Complex<BigRational>) -> String {
    if z.im.is_zero() {
        return format_rational(&z.re);
    }
    let im = if z.im.is_one() {
        "i".to_owned()
    } else if (-z.im.clone()).is_one() {
        "-i".to_owned()
    } else {
        format!("{}i", format_rational(&z.im))
    };
    if z.re.is_zero() {
        im
    } else if z.im.is_positive() {
        format!("{}+{}", format_rational(&z.re), im)
    } else {
        format!("{}{}", format_rational(&z.re), im)
    }
}
