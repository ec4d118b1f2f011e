//! Truncated formal power series.
//!
//! Coefficients are always stored as *ordinary* coefficients of `z^n`: the
//! `1/n!` of an exponential generating function is folded into `c_n`. The
//! exponential Hadamard product therefore re-inserts `n!` explicitly.
//!
//! A bivariate series is a series in `z` whose coefficients are series in
//! `w` ([`BivariateSeries`]); every operation below works unchanged on it.

use crate::scalar::{Coeff, RingTag};
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};
use std::fmt;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("series has a zero constant term")]
    Singular,
    #[error("coefficient rings or precisions differ")]
    RingMismatch,
    #[error("constant term {0} is not allowed here")]
    BadConstant(&'static str),
    #[error("argument lies on the branch cut [1/e, +inf)")]
    BranchCut,
    #[error("iteration did not converge")]
    NoConvergence,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<T> {
    coeffs: Vec<T>,
}

/// Series in `z` with coefficients that are series in `w`.
pub type BivariateSeries<T> = TruncatedSeries<TruncatedSeries<T>>;

impl<T: Coeff> TruncatedSeries<T> {
    /// Builds a series from `c_0..c_N`. Panics on an empty vector.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series has at least one coefficient");
        TruncatedSeries { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> T) -> Self {
        TruncatedSeries::new((0..=order).map(f).collect())
    }

    pub fn zero(proto: &T, order: usize) -> Self {
        TruncatedSeries::from_fn(order, |_| proto.zero_like())
    }

    pub fn constant(c: T, order: usize) -> Self {
        let z = c.zero_like();
        TruncatedSeries::from_fn(order, |n| if n == 0 { c.clone() } else { z.clone() })
    }

    pub fn one(proto: &T, order: usize) -> Self {
        TruncatedSeries::constant(proto.from_i64_like(1), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &T {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn ring_tag(&self) -> RingTag {
        self.coeffs[0].ring_tag()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        TruncatedSeries::new(self.coeffs[..=n].to_vec())
    }

    fn check(&self, o: &Self) -> Result<usize, SeriesError> {
        if !self.coeffs[0].compatible(&o.coeffs[0]) {
            return Err(SeriesError::RingMismatch);
        }
        Ok(self.order().min(o.order()))
    }

    pub fn add(&self, o: &Self) -> Result<Self, SeriesError> {
        let n = self.check(o)?;
        Ok(TruncatedSeries::from_fn(n, |k| self.coeffs[k].add(&o.coeffs[k])))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, SeriesError> {
        let n = self.check(o)?;
        Ok(TruncatedSeries::from_fn(n, |k| self.coeffs[k].sub(&o.coeffs[k])))
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn scale(&self, c: &T) -> Self {
        TruncatedSeries::new(self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    /// Schoolbook product, truncated to the smaller order.
    pub fn mul(&self, o: &Self) -> Result<Self, SeriesError> {
        let n = self.check(o)?;
        Ok(TruncatedSeries::from_fn(n, |k| {
            let mut acc = self.coeffs[0].zero_like();
            for j in 0..=k {
                acc.add_mul_assign(&self.coeffs[j], &o.coeffs[k - j]);
            }
            acc
        }))
    }

    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(SeriesError::Singular);
        }
        let n = self.order();
        let mut out: Vec<T> = Vec::with_capacity(n + 1);
        out.push(a0.from_i64_like(1).div(a0));
        for k in 1..=n {
            let mut acc = a0.zero_like();
            for j in 1..=k {
                acc.add_mul_assign(&self.coeffs[j], &out[k - j]);
            }
            out.push(acc.neg().div(a0));
        }
        Ok(TruncatedSeries::new(out))
    }

    /// `self / o` by the division recurrence (no explicit reciprocal).
    pub fn div(&self, o: &Self) -> Result<Self, SeriesError> {
        let n = self.check(o)?;
        let b0 = &o.coeffs[0];
        if b0.is_zero() {
            return Err(SeriesError::Singular);
        }
        let mut out: Vec<T> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc.add_mul_assign(&o.coeffs[j].neg(), &out[k - j]);
            }
            out.push(acc.div(b0));
        }
        Ok(TruncatedSeries::new(out))
    }

    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return TruncatedSeries::zero(&self.coeffs[0], 0);
        }
        TruncatedSeries::from_fn(self.order() - 1, |k| {
            self.coeffs[k + 1].mul(&self.coeffs[0].from_i64_like(k as i64 + 1))
        })
    }

    /// Antiderivative with zero constant term; order grows by one.
    pub fn integral(&self) -> Self {
        let z = self.coeffs[0].zero_like();
        TruncatedSeries::from_fn(self.order() + 1, |k| {
            if k == 0 {
                z.clone()
            } else {
                self.coeffs[k - 1].div(&z.from_i64_like(k as i64))
            }
        })
    }

    pub fn exp(&self) -> Result<Self, SeriesError> {
        let f0 = self.coeffs[0].exp_opt().ok_or(SeriesError::BadConstant("nonzero"))?;
        let n = self.order();
        let mut out: Vec<T> = Vec::with_capacity(n + 1);
        out.push(f0);
        for k in 1..=n {
            let mut acc = self.coeffs[0].zero_like();
            for j in 1..=k {
                let jg = self.coeffs[j].mul(&self.coeffs[0].from_i64_like(j as i64));
                acc.add_mul_assign(&jg, &out[k - j]);
            }
            out.push(acc.div(&self.coeffs[0].from_i64_like(k as i64)));
        }
        Ok(TruncatedSeries::new(out))
    }

    pub fn log(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0].is_zero() {
            return Err(SeriesError::Singular);
        }
        let g0 = self.coeffs[0].ln_opt().ok_or(SeriesError::BadConstant("not one"))?;
        let n = self.order();
        if n == 0 {
            return Ok(TruncatedSeries::new(vec![g0]));
        }
        let q = self.derivative().div(&self.truncate(n - 1))?;
        let mut out = q.integral().into_coeffs();
        out[0] = g0;
        Ok(TruncatedSeries::new(out))
    }

    /// `z -> c z`.
    pub fn scale_arg(&self, c: &T) -> Self {
        let mut p = c.from_i64_like(1);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            out.push(x.mul(&p));
            p = p.mul(c);
        }
        TruncatedSeries::new(out)
    }

    /// Exponential Hadamard product: `c_n = a_n b_n n!`.
    pub fn hadamard_exp(&self, o: &Self) -> Result<Self, SeriesError> {
        let n = self.check(o)?;
        let mut fact = Integer::from(1);
        Ok(TruncatedSeries::from_fn(n, |k| {
            if k > 0 {
                fact *= k as u32;
            }
            let f = self.coeffs[0].from_rational_like(&Rational::from(&fact));
            self.coeffs[k].mul(&o.coeffs[k]).mul(&f)
        }))
    }

    /// Multiplication by `z^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        let z = self.coeffs[0].zero_like();
        TruncatedSeries::from_fn(self.order(), |n| if n < k { z.clone() } else { self.coeffs[n - k].clone() })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl<T: Coeff + fmt::Display> TruncatedSeries<T> {
    /// Decimal rendering of each coefficient, for JSON dumps.
    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl<T: Coeff> BivariateSeries<T> {
    /// Rectangular bivariate series with `c[n][m]` from `f(n, m)`.
    pub fn bivariate(nz: usize, nw: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        TruncatedSeries::from_fn(nz, |n| TruncatedSeries::from_fn(nw, |m| f(n, m)))
    }

    /// Coefficient of `z^n w^m`.
    pub fn coeff_extract(&self, n: usize, m: usize) -> &T {
        self.coeff(n).coeff(m)
    }
}

impl<T: Coeff> Coeff for TruncatedSeries<T> {
    fn zero_like(&self) -> Self {
        TruncatedSeries::zero(&self.coeffs[0], self.order())
    }
    fn from_i64_like(&self, v: i64) -> Self {
        TruncatedSeries::constant(self.coeffs[0].from_i64_like(v), self.order())
    }
    fn from_rational_like(&self, v: &Rational) -> Self {
        TruncatedSeries::constant(self.coeffs[0].from_rational_like(v), self.order())
    }
    fn is_zero(&self) -> bool {
        TruncatedSeries::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        TruncatedSeries::add(self, o).expect("compatible series")
    }
    fn sub(&self, o: &Self) -> Self {
        TruncatedSeries::sub(self, o).expect("compatible series")
    }
    fn mul(&self, o: &Self) -> Self {
        TruncatedSeries::mul(self, o).expect("compatible series")
    }
    fn neg(&self) -> Self {
        TruncatedSeries::neg(self)
    }
    fn div(&self, o: &Self) -> Self {
        TruncatedSeries::div(self, o).expect("unit divisor")
    }
    fn ring_tag(&self) -> RingTag {
        RingTag::Series
    }
    fn compatible(&self, o: &Self) -> bool {
        self.order() == o.order() && self.coeffs[0].compatible(&o.coeffs[0])
    }
    fn exp_opt(&self) -> Option<Self> {
        self.exp().ok()
    }
    fn ln_opt(&self) -> Option<Self> {
        self.log().ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeKind {
    /// Rooted labelled trees, `T = z e^T`.
    T,
    /// Unrooted labelled trees, `U = T - T^2/2`.
    U,
}

/// Exact series of `T` or `U` to order `n`.
pub fn tree_series(which: TreeKind, n: usize) -> TruncatedSeries<Rational> {
    let t = TruncatedSeries::from_fn(n, |k| {
        if k == 0 {
            Rational::new()
        } else {
            let num = Integer::from(k).pow(k as u32 - 1);
            Rational::from((num, Integer::from(Integer::factorial(k as u32))))
        }
    });
    match which {
        TreeKind::T => t,
        TreeKind::U => {
            let half = Rational::from((1, 2));
            let t2 = t.mul(&t).expect("same ring").scale(&half);
            t.sub(&t2).expect("same ring")
        }
    }
}

/// Value of `T(x)` or `U(x)` on the principal branch.
pub fn tree_eval(which: TreeKind, x: &Complex) -> Result<Complex, SeriesError> {
    let prec = x.prec().0;
    let t = tree_t(x)?;
    Ok(match which {
        TreeKind::T => t,
        TreeKind::U => {
            let sq = Complex::with_val(prec, &t * &t) / 2u32;
            Complex::with_val(prec, &t - &sq)
        }
    })
}

fn tree_t(x: &Complex) -> Result<Complex, SeriesError> {
    let prec = x.prec().0;
    if x.real().is_zero() && x.imag().is_zero() {
        return Ok(Complex::new(prec));
    }
    let e = Float::with_val(prec, 1u32).exp();
    let inv_e = Float::with_val(prec, 1u32) / &e;
    if x.imag().is_zero() && *x.real() > inv_e {
        return Err(SeriesError::BranchCut);
    }
    let d = Complex::with_val(prec, 1u32 - Complex::with_val(prec, x * &e));
    let tol = Float::with_val(prec, Float::i_exp(1, 12 - prec as i32));
    if d.clone().abs().real().to_f64() < 0.25 {
        return puiseux_t(&d, &tol);
    }
    // Newton on T - x e^T = 0.
    let mut t = if x.clone().abs().real().to_f64() < 0.3 {
        let x2 = Complex::with_val(prec, x * x);
        let x3 = Complex::with_val(prec, &x2 * x);
        Complex::with_val(prec, x + &x2) + Complex::with_val(prec, &x3 * 3u32) / 2u32
    } else {
        let s = Complex::with_val(prec, &d * 2u32).sqrt();
        let lin = Complex::with_val(prec, &d * 2u32) / 3u32;
        Complex::with_val(prec, 1u32 - s) + lin
    };
    for _ in 0..400 {
        let ex = Complex::with_val(prec, t.clone().exp() * x);
        let f = Complex::with_val(prec, &t - &ex);
        let fp = Complex::with_val(prec, 1u32 - &ex);
        let step = Complex::with_val(prec, &f / &fp);
        t -= &step;
        if step.abs().real() <= &Float::with_val(prec, t.clone().abs().real() * &tol) {
            return Ok(t);
        }
    }
    Err(SeriesError::NoConvergence)
}

/// Near `x = 1/e` solve `S sqrt(q(S)) = sqrt(2(1 - e x))` with `T = 1 - S`,
/// where `q(S) = 2 (1 - (1 - S) e^S) / S^2` is evaluated by its series.
fn puiseux_t(d: &Complex, tol: &Float) -> Result<Complex, SeriesError> {
    let prec = d.prec().0;
    let y = Complex::with_val(prec, d * 2u32).sqrt();
    if y.real().is_zero() && y.imag().is_zero() {
        return Ok(Complex::with_val(prec, 1u32));
    }
    let mut s = y.clone();
    for _ in 0..200 {
        let (q, dq) = q_series(&s);
        let rq = q.sqrt();
        // h(S) = S sqrt(q) - y, h'(S) = sqrt(q) + S q'/(2 sqrt q)
        let h = Complex::with_val(prec, &s * &rq) - &y;
        let hp = Complex::with_val(prec, &rq + Complex::with_val(prec, &s * &dq) / Complex::with_val(prec, &rq * 2u32));
        let step = Complex::with_val(prec, &h / &hp);
        s -= &step;
        if step.abs().real() <= &Float::with_val(prec, s.clone().abs().real() * tol) {
            return Ok(Complex::with_val(prec, 1u32 - s));
        }
    }
    Err(SeriesError::NoConvergence)
}

fn q_series(s: &Complex) -> (Complex, Complex) {
    let prec = s.prec().0;
    let mut q = Complex::new(prec);
    let mut dq = Complex::new(prec);
    let mut pw = Complex::with_val(prec, 1u32); // s^(k-2)
    let mut pw_prev = Complex::new(prec); // s^(k-3)
    let mut fact = Float::with_val(prec, 2u32); // k!
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32) - 8));
    for k in 2u32..10_000 {
        if k > 2 {
            fact *= k;
        }
        let c = Float::with_val(prec, 2 * (k - 1)) / &fact;
        let term = Complex::with_val(prec, &pw * &c);
        q += &term;
        if k > 2 {
            dq += Complex::with_val(prec, &pw_prev * &c) * (k - 2);
        }
        if k > 6 && term.abs().real() < &eps {
            break;
        }
        pw_prev = pw.clone();
        pw *= s;
    }
    (q, dq)
}

/// `1/e` at the given precision, used by callers working near the singularity.
pub fn inv_e(prec: u32) -> Float {
    Float::with_val(prec, 1u32) / Float::with_val(prec, 1u32).exp()
}

#[allow(dead_code)]
fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_series(order: usize, sign: i64) -> TruncatedSeries<Rational> {
        TruncatedSeries::from_fn(order, |k| {
            let f = Integer::from(Integer::factorial(k as u32));
            let s = if sign < 0 && k % 2 == 1 { -1 } else { 1 };
            Rational::from((Integer::from(s), f))
        })
    }

    /// Multigraphic set function `Set(z, w) = sum e^{-n^2 w/2} z^n/n!` at a float `w`.
    fn set_series(order: usize, w: &Float) -> TruncatedSeries<Float> {
        let prec = w.prec();
        TruncatedSeries::from_fn(order, |k| {
            let e = Float::with_val(prec, -((k * k) as i64)) * w / 2u32;
            e.exp() / Float::with_val(prec, Integer::from(Integer::factorial(k as u32)))
        })
    }

    #[test]
    fn reciprocal_of_exp_minus_z() {
        let a = exp_series(20, -1);
        assert_eq!(a.reciprocal().unwrap(), exp_series(20, 1));
    }

    #[test]
    fn derivative_of_exp() {
        let a = exp_series(15, 1);
        assert_eq!(a.derivative(), exp_series(14, 1));
    }

    #[test]
    fn exp_log_round_trip() {
        let a = exp_series(12, -1).scale_arg(&Rational::from((2, 3)));
        let l = a.log().unwrap();
        assert_eq!(l.exp().unwrap(), a);
        let x = TruncatedSeries::new(vec![Rational::new(), Rational::from(1), Rational::from((1, 2))]);
        assert!(x.reciprocal().is_err());
        assert!(x.log().is_err());
    }

    #[test]
    fn hadamard_of_exponentials() {
        let e = exp_series(10, 1);
        assert_eq!(e.hadamard_exp(&e).unwrap(), e);
    }

    #[test]
    fn hadamard_with_set_gives_deformed_exponential() {
        let prec = 128;
        let w = Float::with_val(prec, 0.3);
        let set = set_series(20, &w);
        let em = TruncatedSeries::from_fn(20, |k| {
            let s = if k % 2 == 1 { -1 } else { 1 };
            Float::with_val(prec, s) / Float::with_val(prec, Integer::from(Integer::factorial(k as u32)))
        });
        let phi = em.hadamard_exp(&set).unwrap();
        let expected = set.scale_arg(&Float::with_val(prec, -1));
        for k in 0..=20 {
            let d = Float::with_val(prec, phi.coeff(k) - expected.coeff(k)).abs();
            assert!(d < 1e-30);
        }
    }

    #[test]
    fn hadamard_with_z_exp_minus_z_is_minus_z_derivative() {
        let prec = 160;
        let n = 20;
        let w = Float::with_val(prec, 0.7);
        let set = set_series(n, &w);
        let zem = TruncatedSeries::from_fn(n, |k| {
            if k == 0 {
                return Float::new(prec);
            }
            let s = if (k - 1) % 2 == 1 { -1 } else { 1 };
            Float::with_val(prec, s) / Float::with_val(prec, Integer::from(Integer::factorial(k as u32 - 1)))
        });
        let lhs = zem.hadamard_exp(&set).unwrap();
        let phi = set.scale_arg(&Float::with_val(prec, -1));
        let rhs = phi.derivative().shift(1).neg();
        for k in 0..n {
            let d = Float::with_val(prec, lhs.coeff(k) - rhs.coeff(k)).abs();
            assert!(d < 1e-35, "k={k}");
        }
    }

    #[test]
    fn ring_mismatch_detected() {
        let a = TruncatedSeries::new(vec![Float::with_val(64, 1)]);
        let b = TruncatedSeries::new(vec![Float::with_val(128, 1)]);
        assert_eq!(a.hadamard_exp(&b), Err(SeriesError::RingMismatch));
    }

    #[test]
    fn tree_coefficients() {
        let t = tree_series(TreeKind::T, 6);
        assert_eq!(*t.coeff(1), 1);
        assert_eq!(*t.coeff(3), Rational::from((3, 2)));
        // fixed point T = z exp(T) to order 6
        let e = t.exp().unwrap().shift(1);
        assert_eq!(e, t);
        let u = tree_series(TreeKind::U, 6);
        assert_eq!(*u.coeff(3), Rational::from((1, 2)));
    }

    #[test]
    fn tree_values() {
        let prec = 128;
        let z = Complex::new(prec);
        assert!(tree_eval(TreeKind::T, &z).unwrap().real().is_zero());
        let x = Complex::with_val(prec, inv_e(prec));
        let t = tree_eval(TreeKind::T, &x).unwrap();
        assert!(Float::with_val(prec, t.real() - 1u32).abs() < 1e-30);
        let u = tree_eval(TreeKind::U, &x).unwrap();
        assert!(Float::with_val(prec, u.real() - 0.5f64).abs() < 1e-30);
        let cut = Complex::with_val(prec, 0.5);
        assert_eq!(tree_eval(TreeKind::T, &cut), Err(SeriesError::BranchCut));
    }

    #[test]
    fn tree_series_matches_fixed_point_numerically() {
        let prec = 128;
        let ts = tree_series(TreeKind::T, 60);
        for xv in [-0.3, -0.1, 0.05, 0.2, 0.3] {
            let x = Float::with_val(prec, xv);
            let mut sum = Float::new(prec);
            let mut p = Float::with_val(prec, 1u32);
            for k in 0..=60 {
                sum += Float::with_val(prec, ts.coeff(k)) * &p;
                p *= &x;
            }
            let resid = Float::with_val(prec, &sum * Float::with_val(prec, -&sum).exp()) - &x;
            assert!(resid.abs() < 1e-7, "x={xv}");
            let direct = tree_eval(TreeKind::T, &Complex::with_val(prec, &x)).unwrap();
            assert!(Float::with_val(prec, direct.real() - &sum).abs() < 1e-7);
        }
    }

    #[test]
    fn tree_near_singularity_and_complex() {
        let prec = 192;
        for xv in [0.3678, 0.36, 0.35, 0.2] {
            let x = Complex::with_val(prec, xv);
            let t = tree_eval(TreeKind::T, &x).unwrap();
            let back = Complex::with_val(prec, &t * Complex::with_val(prec, -&t).exp());
            let d = Complex::with_val(prec, &back - &x).abs().real().to_f64();
            assert!(d < 1e-40, "x={xv} d={d}");
        }
        let x = Complex::with_val(prec, (0.4, 0.05));
        let t = tree_eval(TreeKind::T, &x).unwrap();
        let back = Complex::with_val(prec, &t * Complex::with_val(prec, -&t).exp());
        assert!(Complex::with_val(prec, &back - &x).abs().real().to_f64() < 1e-40);
    }

    #[test]
    fn bivariate_log_of_inverse_pair_vanishes() {
        let mg = multigraph_series(5, 5);
        let inv = mg.reciprocal().unwrap();
        let prod = mg.mul(&inv).unwrap();
        assert!(prod.log().unwrap().is_zero());
        assert_eq!(*mg.coeff_extract(0, 0), 1);
    }

    fn multigraph_series(nz: usize, nw: usize) -> BivariateSeries<Rational> {
        TruncatedSeries::bivariate(nz, nw, |n, m| {
            // e^{n^2 w/2}: coefficient n^{2m} / (2^m m! n!)
            let num = Integer::from(n).pow(2 * m as u32);
            let den = Integer::from(Integer::factorial(n as u32))
                * Integer::from(Integer::factorial(m as u32))
                * (Integer::from(1) << m as u32);
            Rational::from((num, den))
        })
    }

    #[test]
    fn first_strong_constant_from_bivariate_log() {
        // s_1 = -[z^2 w^3] (1 - wz)^2 log(MG (.)_z 1/MG)
        let mg = multigraph_series(2, 3);
        let h = mg.hadamard_exp(&mg.reciprocal().unwrap()).unwrap();
        let l = h.log().unwrap();
        let factor = TruncatedSeries::bivariate(2, 3, |n, m| {
            if n != m {
                return Rational::new();
            }
            match n {
                0 => Rational::from(1),
                1 => Rational::from(-2),
                2 => Rational::from(1),
                _ => Rational::new(),
            }
        });
        let prod = factor.mul(&l).unwrap();
        assert_eq!(Rational::from(-prod.coeff_extract(2, 3)), Rational::from((1, 2)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn series(order: usize) -> impl Strategy<Value = TruncatedSeries<Rational>> {
            proptest::collection::vec((-9i64..10, 1i64..6), order + 1).prop_map(|v| {
                TruncatedSeries::new(v.into_iter().map(|(a, b)| Rational::from((a, b))).collect())
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]
            #[test]
            fn ring_laws(a in series(6), b in series(6), c in series(6)) {
                let l = a.mul(&b).unwrap().mul(&c).unwrap();
                let r = a.mul(&b.mul(&c).unwrap()).unwrap();
                prop_assert_eq!(l, r);
                prop_assert_eq!(a.hadamard_exp(&b).unwrap(), b.hadamard_exp(&a).unwrap());
                let lin = a.add(&c).unwrap().hadamard_exp(&b).unwrap();
                let split = a.hadamard_exp(&b).unwrap().add(&c.hadamard_exp(&b).unwrap()).unwrap();
                prop_assert_eq!(lin, split);
            }

            #[test]
            fn inverse_and_exp_log(a in series(7)) {
                prop_assume!(*a.coeff(0) != 0);
                let one = TruncatedSeries::one(&Rational::new(), 7);
                prop_assert_eq!(a.mul(&a.reciprocal().unwrap()).unwrap(), one);
                let unit = a.scale(&Rational::from(a.coeff(0).clone().recip()));
                prop_assert_eq!(unit.log().unwrap().exp().unwrap(), unit);
            }
        }
    }
}
