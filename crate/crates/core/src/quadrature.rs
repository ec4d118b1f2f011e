//! Tanh-sinh quadrature on a finite interval for vectors of complex integrands.
//!
//! All integrands of a batch share abscissae so expensive per-node work
//! (Airy evaluations) is done once per node.

use rug::float::Constant;
use rug::{Complex, Float};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadratureError {
    #[error("quadrature did not reach tolerance {target:e}; achieved {achieved:e}")]
    NotConverged { target: f64, achieved: f64 },
}

#[derive(Debug, Clone)]
pub struct QuadResult {
    pub values: Vec<Complex>,
    /// Largest relative change between the last two levels.
    pub error: f64,
    pub level: u32,
    pub evaluations: usize,
}

/// Integrates every component of `f` over `[a, b]`.
///
/// Converged when every component changes by less than `tol * |value|`
/// (or `tol * abs_floor`, whichever is larger) between two levels.
pub fn tanh_sinh_batch(
    a: &Float,
    b: &Float,
    width: usize,
    tol: f64,
    abs_floor: f64,
    max_level: u32,
    mut f: impl FnMut(&Float) -> Vec<Complex>,
) -> Result<QuadResult, QuadratureError> {
    let prec = a.prec().max(b.prec());
    let half_pi = Float::with_val(prec, Constant::Pi) / 2u32;
    let radius = Float::with_val(prec, b - a) / 2u32;
    // weights drop below 2^-prec beyond this parameter
    let t_max = (2.0 * (prec as f64 * std::f64::consts::LN_2 + 20.0) / std::f64::consts::PI).ln();

    let mut evaluations = 0usize;
    let mut node = |t: &Float, acc: &mut Vec<Complex>| {
        let sh = Float::with_val(prec, t.sinh_ref()) * &half_pi;
        let ch = Float::with_val(prec, t.cosh_ref()) * &half_pi;
        let csh = Float::with_val(prec, sh.cosh_ref());
        // distance to the nearer endpoint, so nodes never land on it
        let x = if sh.is_sign_negative() {
            let e = Float::with_val(prec, -Float::with_val(prec, &sh * 2u32)).exp() + 1u32;
            Float::with_val(prec, &radius * 2u32) / e + a
        } else {
            let e = Float::with_val(prec, Float::with_val(prec, &sh * 2u32)).exp() + 1u32;
            Float::with_val(prec, b - Float::with_val(prec, &radius * 2u32) / e)
        };
        let wgt = ch / Float::with_val(prec, &csh * &csh) * &radius;
        let vals = f(&x);
        evaluations += 1;
        for (s, v) in acc.iter_mut().zip(vals) {
            *s += v * &wgt;
        }
    };

    let zero = Complex::new(prec);
    // level 0: integer multiples of h = 1
    let mut sums = vec![zero.clone(); width];
    let n0 = t_max.ceil() as i64;
    for i in -n0..=n0 {
        node(&Float::with_val(prec, i), &mut sums);
    }
    let mut h = Float::with_val(prec, 1u32);
    let mut prev: Vec<Complex> = sums.iter().map(|s| Complex::with_val(prec, s * &h)).collect();
    let mut err = f64::INFINITY;
    for level in 1..=max_level {
        h /= 2u32;
        // new odd nodes at this level
        let steps = (t_max / h.to_f64()).ceil() as i64;
        let mut i = -steps + if steps % 2 == 0 { 1 } else { 0 };
        while i <= steps {
            let t = Float::with_val(prec, i) * &h;
            node(&t, &mut sums);
            i += 2;
        }
        let cur: Vec<Complex> = sums.iter().map(|s| Complex::with_val(prec, s * &h)).collect();
        err = 0.0;
        let mut ok = true;
        for (c, p) in cur.iter().zip(prev.iter()) {
            let diff = Complex::with_val(prec, c - p).abs().real().to_f64();
            let mag = c.clone().abs().real().to_f64().max(abs_floor);
            let rel = diff / mag;
            err = err.max(rel);
            if !(diff <= tol * mag) {
                ok = false;
            }
        }
        prev = cur;
        if ok && level >= 3 {
            return Ok(QuadResult { values: prev, error: err, level, evaluations });
        }
    }
    Err(QuadratureError::NotConverged { target: tol, achieved: err })
}

/// Single-integrand convenience wrapper.
pub fn tanh_sinh(
    a: &Float,
    b: &Float,
    tol: f64,
    max_level: u32,
    mut f: impl FnMut(&Float) -> Complex,
) -> Result<(Complex, f64), QuadratureError> {
    let r = tanh_sinh_batch(a, b, 1, tol, 1e-300, max_level, |x| vec![f(x)])?;
    Ok((r.values.into_iter().next().unwrap(), r.error))
}
