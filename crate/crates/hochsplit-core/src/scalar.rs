//! Scalar abstraction: double-precision complex numbers by default, with an
//! exact mode (rational real and imaginary parts) for golden tests.
//!
//! All norm identities in this crate are exact statements about elements of
//! l1 spaces. The float mode verifies them to roundoff; the exact mode
//! verifies them on the nose for rational data.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Real coefficient field used for norms, tails and certified bounds.
pub trait RealScalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// Embeds the exact value of an `f64` (every finite float is rational).
    fn from_f64(x: f64) -> Self;

    fn from_u32(n: u32) -> Self;

    /// Lossy conversion for reporting.
    fn to_f64(&self) -> f64;

    /// Rejects NaN/infinity in float mode; always true in exact mode.
    fn is_valid(&self) -> bool;

    fn pown(&self, n: usize) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            k >>= 1;
        }
        acc
    }

    fn max_with(self, other: Self) -> Self {
        if self < other {
            other
        } else {
            self
        }
    }
}

impl RealScalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }

    fn from_u32(n: u32) -> Self {
        f64::from(n)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_valid(&self) -> bool {
        self.is_finite()
    }
}

impl RealScalar for BigRational {
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("cannot embed a non-finite float")
    }

    fn from_u32(n: u32) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_valid(&self) -> bool {
        true
    }
}

/// Complex scalar over a [`RealScalar`] field.
///
/// Division is deliberately absent: every algorithm in this crate is
/// division-free on the coefficient side (root deflation replaces division by
/// the Blaschke factor), which is what keeps the exact mode exact.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
{
    type Real: RealScalar;

    fn conj(&self) -> Self;

    /// Squared modulus; always exact in exact mode.
    fn abs_sq(&self) -> Self::Real;

    /// Modulus. In exact mode this is defined for values whose modulus is
    /// rational (real or purely imaginary values, and Pythagorean pairs);
    /// it panics otherwise. All golden-test data stays inside that subfield.
    fn abs(&self) -> Self::Real;

    fn from_re_im(re: Self::Real, im: Self::Real) -> Self;

    fn from_real(re: Self::Real) -> Self {
        Self::from_re_im(re, Self::Real::zero())
    }

    /// Embeds the exact values of an `f64` pair.
    fn from_f64_parts(re: f64, im: f64) -> Self {
        Self::from_re_im(Self::Real::from_f64(re), Self::Real::from_f64(im))
    }

    fn scale(&self, r: &Self::Real) -> Self;

    fn to_c64(&self) -> Complex64;

    fn is_valid(&self) -> bool;

    fn pown(&self, n: usize) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            k >>= 1;
        }
        acc
    }
}

impl Scalar for Complex64 {
    type Real = f64;

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn abs_sq(&self) -> f64 {
        self.norm_sqr()
    }

    fn abs(&self) -> f64 {
        self.norm()
    }

    fn from_re_im(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }

    fn scale(&self, r: &f64) -> Self {
        self * r
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn is_valid(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Complex number with exact rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ExactComplex { re, im }
    }

    /// Rational `p/q + (r/s)i` from integer parts.
    pub fn from_ratio(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        ExactComplex {
            re: BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            im: BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        }
    }
}

/// Exact square root of a nonnegative rational, when the result is rational.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(BigRational::zero());
    }
    let num = r.numer();
    let den = r.denom();
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &(&sn * &sn) == num && &(&sd * &sd) == den {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

impl Add for ExactComplex {
    type Output = ExactComplex;

    fn add(self, rhs: ExactComplex) -> ExactComplex {
        ExactComplex {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for ExactComplex {
    type Output = ExactComplex;

    fn sub(self, rhs: ExactComplex) -> ExactComplex {
        ExactComplex {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for ExactComplex {
    type Output = ExactComplex;

    fn mul(self, rhs: ExactComplex) -> ExactComplex {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        ExactComplex { re, im }
    }
}

impl Neg for ExactComplex {
    type Output = ExactComplex;

    fn neg(self) -> ExactComplex {
        ExactComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Zero for ExactComplex {
    fn zero() -> Self {
        ExactComplex {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for ExactComplex {
    fn one() -> Self {
        ExactComplex {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }
}

impl Scalar for ExactComplex {
    type Real = BigRational;

    fn conj(&self) -> Self {
        ExactComplex {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    fn abs_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn abs(&self) -> BigRational {
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        rational_sqrt(&self.abs_sq())
            .expect("exact mode requires values with rational modulus")
    }

    fn from_re_im(re: BigRational, im: BigRational) -> Self {
        ExactComplex { re, im }
    }

    fn scale(&self, r: &BigRational) -> Self {
        ExactComplex {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            RealScalar::to_f64(&self.re),
            RealScalar::to_f64(&self.im),
        )
    }

    fn is_valid(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_mul_matches_float() {
        let a = ExactComplex::from_ratio(1, 2, -1, 3);
        let b = ExactComplex::from_ratio(2, 5, 3, 7);
        let prod = a.clone() * b.clone();
        let fa = a.to_c64();
        let fb = b.to_c64();
        let fp = prod.to_c64();
        assert!((fp - fa * fb).norm() < 1e-15);
    }

    #[test]
    fn rational_sqrt_perfect_squares() {
        let r = BigRational::new(BigInt::from(9), BigInt::from(16));
        assert_eq!(
            rational_sqrt(&r),
            Some(BigRational::new(BigInt::from(3), BigInt::from(4)))
        );
        let nr = BigRational::new(BigInt::from(2), BigInt::from(1));
        assert_eq!(rational_sqrt(&nr), None);
    }

    #[test]
    fn pythagorean_modulus_is_exact() {
        // |3/5 + (4/5)i| = 1
        let z = ExactComplex::from_ratio(3, 5, 4, 5);
        assert_eq!(z.abs(), BigRational::one());
    }

    #[test]
    fn powu_matches_repeated_multiplication() {
        let z = ExactComplex::from_ratio(1, 2, 1, 3);
        let mut acc = ExactComplex::one();
        for _ in 0..7 {
            acc = acc * z.clone();
        }
        assert_eq!(z.pown(7), acc);
        assert_eq!(z.pown(0), ExactComplex::one());
    }
}
