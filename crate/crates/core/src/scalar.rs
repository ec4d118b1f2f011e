//! Arbitrary-precision scalars.
//!
//! `HPReal` and `HPComplex` wrap MPFR/MPC values; the precision travels with
//! every value and mixed-precision arithmetic is rejected instead of being
//! silently coerced. `BigRational` is GMP's always-canonical rational.
//!
//! The [`Coeff`] trait is the ring interface used by the series code. It is
//! implemented for `rug::Rational`, `rug::Float` and `rug::Complex` and, in
//! `series`, for truncated series themselves.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};
use std::fmt;

pub use rug::Rational as BigRational;

/// Working precision used when nothing else is requested.
pub const DEFAULT_PRECISION: u32 = 192;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScalarError {
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("precision mismatch: {left} vs {right} bits")]
    PrecisionMismatch { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
}

/// Tag naming the coefficient ring of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingTag {
    Rational,
    HpReal,
    HpComplex,
    Series,
}

#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct HPReal(Float);

impl HPReal {
    pub fn from_f64(prec: u32, v: f64) -> Self {
        HPReal(Float::with_val(prec, v))
    }

    pub fn from_float(f: Float) -> Self {
        HPReal(f)
    }

    pub fn from_rational(prec: u32, r: &Rational) -> Self {
        HPReal(Float::with_val(prec, r))
    }

    pub fn parse(prec: u32, s: &str) -> Result<Self, ScalarError> {
        let v = Float::parse(s).map_err(|_| ScalarError::Domain("unparsable number"))?;
        Ok(HPReal(Float::with_val(prec, v)))
    }

    pub fn precision(&self) -> u32 {
        self.0.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    fn same(&self, o: &HPReal) -> Result<u32, ScalarError> {
        if self.precision() != o.precision() {
            return Err(ScalarError::PrecisionMismatch { left: self.precision(), right: o.precision() });
        }
        Ok(self.precision())
    }

    pub fn add(&self, o: &HPReal) -> Result<HPReal, ScalarError> {
        let p = self.same(o)?;
        Ok(HPReal(Float::with_val(p, &self.0 + &o.0)))
    }

    pub fn sub(&self, o: &HPReal) -> Result<HPReal, ScalarError> {
        let p = self.same(o)?;
        Ok(HPReal(Float::with_val(p, &self.0 - &o.0)))
    }

    pub fn mul(&self, o: &HPReal) -> Result<HPReal, ScalarError> {
        let p = self.same(o)?;
        Ok(HPReal(Float::with_val(p, &self.0 * &o.0)))
    }

    pub fn div(&self, o: &HPReal) -> Result<HPReal, ScalarError> {
        let p = self.same(o)?;
        if o.0.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(HPReal(Float::with_val(p, &self.0 / &o.0)))
    }

    pub fn pow(&self, o: &HPReal) -> Result<HPReal, ScalarError> {
        let p = self.same(o)?;
        if self.0.is_sign_negative() && !o.0.is_integer() {
            return Err(ScalarError::Domain("negative base with non-integer exponent"));
        }
        Ok(HPReal(Float::with_val(p, (&self.0).pow(&o.0))))
    }

    pub fn exp(&self) -> HPReal {
        HPReal(self.0.clone().exp())
    }

    pub fn log(&self) -> Result<HPReal, ScalarError> {
        if self.0.is_zero() || self.0.is_sign_negative() {
            return Err(ScalarError::Domain("log of a non-positive number"));
        }
        Ok(HPReal(self.0.clone().ln()))
    }

    pub fn sqrt(&self) -> Result<HPReal, ScalarError> {
        if self.0.is_sign_negative() && !self.0.is_zero() {
            return Err(ScalarError::Domain("sqrt of a negative number"));
        }
        Ok(HPReal(self.0.clone().sqrt()))
    }

    /// Decimal logarithm of |x|, valid far outside the f64 exponent range.
    pub fn log10_abs(&self) -> f64 {
        log10_abs(&self.0)
    }
}

impl fmt::Display for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HPComplex(Complex);

impl HPComplex {
    pub fn new(re: &HPReal, im: &HPReal) -> Result<Self, ScalarError> {
        re.same(im)?;
        Ok(HPComplex(Complex::with_val(re.precision(), (&re.0, &im.0))))
    }

    pub fn from_complex(c: Complex) -> Self {
        HPComplex(c)
    }

    pub fn precision(&self) -> u32 {
        self.0.prec().0
    }

    pub fn re(&self) -> HPReal {
        HPReal(self.0.real().clone())
    }

    pub fn im(&self) -> HPReal {
        HPReal(self.0.imag().clone())
    }

    pub fn as_complex(&self) -> &Complex {
        &self.0
    }

    pub fn into_complex(self) -> Complex {
        self.0
    }

    fn same(&self, o: &HPComplex) -> Result<u32, ScalarError> {
        if self.precision() != o.precision() {
            return Err(ScalarError::PrecisionMismatch { left: self.precision(), right: o.precision() });
        }
        Ok(self.precision())
    }

    pub fn add(&self, o: &HPComplex) -> Result<HPComplex, ScalarError> {
        let p = self.same(o)?;
        Ok(HPComplex(Complex::with_val(p, &self.0 + &o.0)))
    }

    pub fn sub(&self, o: &HPComplex) -> Result<HPComplex, ScalarError> {
        let p = self.same(o)?;
        Ok(HPComplex(Complex::with_val(p, &self.0 - &o.0)))
    }

    pub fn mul(&self, o: &HPComplex) -> Result<HPComplex, ScalarError> {
        let p = self.same(o)?;
        Ok(HPComplex(Complex::with_val(p, &self.0 * &o.0)))
    }

    pub fn div(&self, o: &HPComplex) -> Result<HPComplex, ScalarError> {
        let p = self.same(o)?;
        if o.0.real().is_zero() && o.0.imag().is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(HPComplex(Complex::with_val(p, &self.0 / &o.0)))
    }

    pub fn exp(&self) -> HPComplex {
        HPComplex(self.0.clone().exp())
    }

    pub fn log(&self) -> Result<HPComplex, ScalarError> {
        if self.0.real().is_zero() && self.0.imag().is_zero() {
            return Err(ScalarError::Domain("log of zero"));
        }
        Ok(HPComplex(self.0.clone().ln()))
    }
}

pub fn rat_add(a: &BigRational, b: &BigRational) -> BigRational {
    Rational::from(a + b)
}

pub fn rat_mul(a: &BigRational, b: &BigRational) -> BigRational {
    Rational::from(a * b)
}

pub fn rat_div(a: &BigRational, b: &BigRational) -> Result<BigRational, ScalarError> {
    if *b == 0 {
        return Err(ScalarError::DivisionByZero);
    }
    Ok(Rational::from(a / b))
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

pub fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn float(prec: u32, v: f64) -> Float {
    Float::with_val(prec, v)
}

/// `2^(num/den)` at the given precision.
pub fn pow2_frac(prec: u32, num: i64, den: i64) -> Float {
    let e = Float::with_val(prec, num) / den;
    Float::with_val(prec, 2u32).pow(e)
}

/// Decimal logarithm of |x| that never overflows or underflows.
pub fn log10_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log10() + e as f64 * std::f64::consts::LOG10_2
}

/// Binary logarithm of |z|.
pub fn log2_abs_c(z: &Complex) -> f64 {
    let a = log2_abs(z.real());
    let b = log2_abs(z.imag());
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + 0.5 * ((2f64).powf(2.0 * (a - m)) + (2f64).powf(2.0 * (b - m))).log2()
}

pub fn log2_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log2() + e as f64
}

/// Ring operations needed by truncated power series.
pub trait Coeff: Clone + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn from_i64_like(&self, v: i64) -> Self;
    fn from_rational_like(&self, v: &Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Division; callers guarantee a nonzero (unit) divisor.
    fn div(&self, o: &Self) -> Self;
    fn ring_tag(&self) -> RingTag;
    /// Same ring and, for floating rings, same precision.
    fn compatible(&self, o: &Self) -> bool;
    /// `self += a * b`.
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = self.add(&a.mul(b));
    }
    /// Exponential of a constant term; `None` when it leaves the ring.
    fn exp_opt(&self) -> Option<Self>;
    /// Principal logarithm of a constant term; `None` when it leaves the ring.
    fn ln_opt(&self) -> Option<Self>;
    fn is_one(&self) -> bool {
        self.sub(&self.from_i64_like(1)).is_zero()
    }
}

impl Coeff for Rational {
    fn zero_like(&self) -> Self {
        Rational::new()
    }
    fn from_i64_like(&self, v: i64) -> Self {
        Rational::from(v)
    }
    fn from_rational_like(&self, v: &Rational) -> Self {
        v.clone()
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, o: &Self) -> Self {
        Rational::from(self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Rational::from(self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Rational::from(self * o)
    }
    fn neg(&self) -> Self {
        Rational::from(-self)
    }
    fn div(&self, o: &Self) -> Self {
        Rational::from(self / o)
    }
    fn ring_tag(&self) -> RingTag {
        RingTag::Rational
    }
    fn compatible(&self, _o: &Self) -> bool {
        true
    }
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self += Rational::from(a * b);
    }
    fn exp_opt(&self) -> Option<Self> {
        (*self == 0).then(|| Rational::from(1))
    }
    fn ln_opt(&self) -> Option<Self> {
        (*self == 1).then(Rational::new)
    }
}

impl Coeff for Float {
    fn zero_like(&self) -> Self {
        Float::new(self.prec())
    }
    fn from_i64_like(&self, v: i64) -> Self {
        Float::with_val(self.prec(), v)
    }
    fn from_rational_like(&self, v: &Rational) -> Self {
        Float::with_val(self.prec(), v)
    }
    fn is_zero(&self) -> bool {
        Float::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self * o)
    }
    fn neg(&self) -> Self {
        Float::with_val(self.prec(), -self)
    }
    fn div(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self / o)
    }
    fn ring_tag(&self) -> RingTag {
        RingTag::HpReal
    }
    fn compatible(&self, o: &Self) -> bool {
        self.prec() == o.prec()
    }
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn exp_opt(&self) -> Option<Self> {
        Some(self.clone().exp())
    }
    fn ln_opt(&self) -> Option<Self> {
        (*self > 0).then(|| self.clone().ln())
    }
}

impl Coeff for Complex {
    fn zero_like(&self) -> Self {
        Complex::new(self.prec())
    }
    fn from_i64_like(&self, v: i64) -> Self {
        Complex::with_val(self.prec(), v)
    }
    fn from_rational_like(&self, v: &Rational) -> Self {
        Complex::with_val(self.prec(), v)
    }
    fn is_zero(&self) -> bool {
        self.real().is_zero() && self.imag().is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Complex::with_val(self.prec(), self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Complex::with_val(self.prec(), self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Complex::with_val(self.prec(), self * o)
    }
    fn neg(&self) -> Self {
        Complex::with_val(self.prec(), -self)
    }
    fn div(&self, o: &Self) -> Self {
        Complex::with_val(self.prec(), self / o)
    }
    fn ring_tag(&self) -> RingTag {
        RingTag::HpComplex
    }
    fn compatible(&self, o: &Self) -> bool {
        self.prec() == o.prec()
    }
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn exp_opt(&self) -> Option<Self> {
        Some(self.clone().exp())
    }
    fn ln_opt(&self) -> Option<Self> {
        (!Coeff::is_zero(self)).then(|| self.clone().ln())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_zero_is_one() {
        assert_eq!(HPReal::from_f64(128, 0.0).exp().to_f64(), 1.0);
    }

    #[test]
    fn sqrt_squared() {
        let two = HPReal::from_f64(128, 2.0);
        let r = two.sqrt().unwrap();
        let back = r.mul(&r).unwrap();
        let err = Float::with_val(128, back.as_float() - 2u32).abs();
        let ulp = Float::with_val(128, Float::i_exp(1, 2 - 128));
        assert!(err <= ulp * 2u32);
    }

    #[test]
    fn exp_of_minus_5000_does_not_underflow() {
        let v = HPReal::from_f64(128, -5000.0).exp();
        assert!(!v.as_float().is_zero());
        let expected = -5000.0 / std::f64::consts::LN_10;
        assert!((v.log10_abs() - expected).abs() < 1e-9);
    }

    #[test]
    fn precision_mismatch_is_an_error() {
        let a = HPReal::from_f64(64, 1.0);
        let b = HPReal::from_f64(128, 1.0);
        assert!(matches!(a.add(&b), Err(ScalarError::PrecisionMismatch { .. })));
    }

    #[test]
    fn domain_errors() {
        let m = HPReal::from_f64(64, -1.0);
        assert!(m.log().is_err());
        assert!(m.sqrt().is_err());
        assert!(HPReal::from_f64(64, 1.0).div(&HPReal::from_f64(64, 0.0)).is_err());
    }

    #[test]
    fn rational_basics() {
        let a = Rational::from((1, 3));
        let b = Rational::from((1, 6));
        assert_eq!(rat_add(&a, &b), Rational::from((1, 2)));
        let c = Rational::from((17, 8));
        assert_eq!(rat_mul(&c, &Rational::from((8, 17))), 1);
        assert!(rat_div(&c, &Rational::new()).is_err());
    }

    #[test]
    fn wright_constant_first_value() {
        let num = factorial(6);
        let den = Integer::from(32) * 9 * factorial(2) * factorial(3);
        assert_eq!(Rational::from((num, den)), Rational::from((5, 24)));
    }

    #[test]
    fn doubling_precision_is_stable() {
        let lo = Float::with_val(128, 3).ln() * Float::with_val(128, 7).sqrt();
        let hi = Float::with_val(256, 3).ln() * Float::with_val(256, 7).sqrt();
        let rel = Float::with_val(256, &hi - &lo) / &hi;
        assert!(rel.abs() < Float::with_val(64, Float::i_exp(1, -(128 - 8))));
    }

    #[test]
    fn complex_ops() {
        let a = HPComplex::new(&HPReal::from_f64(96, 1.0), &HPReal::from_f64(96, 2.0)).unwrap();
        let b = a.mul(&a).unwrap();
        assert_eq!(b.re().to_f64(), -3.0);
        assert_eq!(b.im().to_f64(), 4.0);
        assert!(a.div(&HPComplex::from_complex(Complex::new(96))).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rat() -> impl Strategy<Value = Rational> {
            (-50i64..50, 1i64..40).prop_map(|(n, d)| Rational::from((n, d)))
        }

        proptest! {
            #[test]
            fn rational_field_laws(a in rat(), b in rat(), c in rat()) {
                let ab_c = rat_mul(&rat_mul(&a, &b), &c);
                let a_bc = rat_mul(&a, &rat_mul(&b, &c));
                prop_assert_eq!(ab_c, a_bc);
                let lhs = rat_mul(&a, &rat_add(&b, &c));
                let rhs = rat_add(&rat_mul(&a, &b), &rat_mul(&a, &c));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
