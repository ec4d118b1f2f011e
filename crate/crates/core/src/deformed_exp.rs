//! Deformed exponentials `phi_r(z, w; F)` and their simple-graphic twins.
//!
//! Both are evaluated from the weighted series
//! `sum_n [z^n]((1 - wz)^r e^{-z} F(wz)) * weight(n) * z^n`
//! with `weight(n) = e^{-n^2 w/2}` (multigraphic) or
//! `(1 + w)^{-n(n-1)/2}` (simple graphic). Writing
//! `n! [z^n](...) = (-1)^n P(n)`, where `P(n) = sum_j h_j (-w)^j n(n-1)...(n-j+1)`
//! and `h_j` are the coefficients of `(1 - x)^r F(x)`, every term is a real
//! multiple of `(-z)^n weight(n) / n!`. The sum cancels heavily near the
//! roots, so the working precision is sized from the largest term.

use crate::airy::{ai_general, ai_root, AiryError};
use crate::scalar::{log2_abs, log2_abs_c, pow2_frac};
use crate::series::{tree_eval, SeriesError, TreeKind, TruncatedSeries};
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DeformedExpError {
    #[error("series did not reach the requested accuracy: partial value {partial:e}, error bound 2^{log2_bound}")]
    NoConvergence { partial: f64, log2_bound: f64 },
    #[error("w must be positive")]
    NonPositiveW,
    #[error("could not isolate zero {j}; try a smaller w or a higher precision")]
    BasinAmbiguity { j: u32 },
    #[error("regime precondition violated: {0}")]
    Regime(&'static str),
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error(transparent)]
    Airy(#[from] AiryError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// The entire function `F` inside `phi_r(z, w; F)`.
#[derive(Debug, Clone, PartialEq)]
pub enum EntireFnSpec {
    One,
    Monomial(u32),
    /// `exp(C_k(x))` with `C_k(x) = x + x^2/2 + ... + x^k/k`.
    ExpCk(u32),
    /// Polynomial (ascending coefficients) times `exp(C_k(x))`; `k = 0` drops the exponential.
    PolyTimesExp { coeffs: Vec<Rational>, k: u32 },
}

/// Which weights the Hadamard product uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GGFKind {
    Multigraphic,
    SimpleGraphic,
}

impl EntireFnSpec {
    /// `(polynomial, k)` with `F = polynomial * exp(C_k)`.
    pub fn normalized(&self) -> (Vec<Rational>, u32) {
        match self {
            EntireFnSpec::One => (vec![Rational::from(1)], 0),
            EntireFnSpec::Monomial(k) => {
                let mut c = vec![Rational::new(); *k as usize];
                c.push(Rational::from(1));
                (c, 0)
            }
            EntireFnSpec::ExpCk(k) => (vec![Rational::from(1)], *k),
            EntireFnSpec::PolyTimesExp { coeffs, k } => (coeffs.clone(), *k),
        }
    }

    /// False when the polynomial part has a nonzero root, which the root
    /// theorems exclude.
    pub fn nonvanishing_off_origin(&self) -> bool {
        let (p, _) = self.normalized();
        p.iter().filter(|c| **c != 0).count() == 1
    }

    /// `x F(x)`.
    pub fn times_x(&self) -> EntireFnSpec {
        let (mut p, k) = self.normalized();
        p.insert(0, Rational::new());
        EntireFnSpec::PolyTimesExp { coeffs: p, k }
    }

    /// `x F'(x)`.
    pub fn x_derivative(&self) -> EntireFnSpec {
        let (p, k) = self.normalized();
        // F' = (P' + P C_k') e^{C_k}, C_k' = 1 + x + ... + x^{k-1}
        let mut q = vec![Rational::new(); p.len() + k as usize + 1];
        for (i, c) in p.iter().enumerate().skip(1) {
            q[i - 1] += Rational::from(c * i as u32);
        }
        for (i, c) in p.iter().enumerate() {
            for e in 0..k as usize {
                q[i + e] += c;
            }
        }
        q.insert(0, Rational::new());
        while q.len() > 1 && *q.last().unwrap() == 0 {
            q.pop();
        }
        EntireFnSpec::PolyTimesExp { coeffs: q, k }
    }

    /// Maclaurin coefficients in any coefficient ring, via the linear
    /// recurrence `(n+1) E_{n+1} = E_n + ... + E_{n-k+1}` for `E = exp(C_k)`.
    pub fn taylor_in<T: crate::scalar::Coeff>(&self, proto: &T, len: usize) -> Vec<T> {
        let (p, k) = self.normalized();
        let mut e: Vec<T> = Vec::with_capacity(len);
        for n in 0..len {
            if n == 0 {
                e.push(proto.from_i64_like(1));
                continue;
            }
            let mut acc = proto.zero_like();
            for j in 0..(k as usize).min(n) {
                acc = acc.add(&e[n - 1 - j]);
            }
            e.push(acc.div(&proto.from_i64_like(n as i64)));
        }
        let mut out = vec![proto.zero_like(); len];
        for (i, c) in p.iter().enumerate().take(len) {
            if *c == 0 {
                continue;
            }
            let c = proto.from_rational_like(c);
            for j in 0..len - i {
                out[i + j].add_mul_assign(&c, &e[j]);
            }
        }
        out
    }

    /// Exact Maclaurin coefficients `F_0..F_{len-1}`.
    pub fn taylor_rational(&self, len: usize) -> Vec<Rational> {
        let (p, k) = self.normalized();
        let e = exp_ck(Rational::new(), k, len);
        let mut out = vec![Rational::new(); len];
        for (i, c) in p.iter().enumerate().take(len) {
            for j in 0..len - i {
                out[i + j] += Rational::from(c * &e[j]);
            }
        }
        out
    }

    /// Maclaurin coefficients at precision `prec`.
    pub fn taylor_float(&self, prec: u32, len: usize) -> Vec<Float> {
        let (p, k) = self.normalized();
        let e = exp_ck(Float::new(prec), k, len);
        let mut out = vec![Float::new(prec); len];
        for (i, c) in p.iter().enumerate().take(len) {
            let c = Float::with_val(prec, c);
            for j in 0..len - i {
                out[i + j] += Float::with_val(prec, &c * &e[j]);
            }
        }
        out
    }

    pub fn eval(&self, x: &Complex) -> Complex {
        let prec = x.prec().0;
        let (p, k) = self.normalized();
        let mut acc = Complex::new(prec);
        for c in p.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc * c_k(x, k).exp()
    }

    /// `(F(1), F'(1))`.
    pub fn at_one(&self, prec: u32) -> (Float, Float) {
        let one = Complex::with_val(prec, 1);
        let f = self.eval(&one).real().clone();
        let df = self.x_derivative().eval(&one).real().clone();
        (f, df)
    }
}

fn c_k(x: &Complex, k: u32) -> Complex {
    let prec = x.prec().0;
    let mut s = Complex::new(prec);
    let mut pw = Complex::with_val(prec, 1);
    for i in 1..=k {
        pw *= x;
        s += Complex::with_val(prec, &pw / i);
    }
    s
}

fn exp_ck<T: crate::scalar::Coeff>(proto: T, k: u32, len: usize) -> Vec<T> {
    let order = len.max(1) - 1;
    let ck = TruncatedSeries::from_fn(order, |i| {
        if i >= 1 && i <= k as usize {
            proto.from_rational_like(&Rational::from((1, i as u32)))
        } else {
            proto.zero_like()
        }
    });
    ck.exp().expect("zero constant term").into_coeffs()
}

/// Values of `d^k/dz^k` of the weighted series for `k = 0..=kmax`.
#[derive(Debug, Clone)]
pub struct PhiSums {
    pub derivatives: Vec<Complex>,
    pub log2_max_term: f64,
    pub log2_abs_err: f64,
    pub terms: usize,
    pub working_prec: u32,
}

/// `log2` of the largest `|z|^n weight(n) / n!` and the index past which
/// terms stay below `peak - drop`.
fn base_profile(log2_z: f64, w: f64, kind: GGFKind, drop: f64) -> (f64, usize) {
    let lw = match kind {
        GGFKind::Multigraphic => w / (2.0 * std::f64::consts::LN_2),
        GGFKind::SimpleGraphic => (1.0 + w).log2() / 2.0,
    };
    let mut l = 0.0f64;
    let mut peak = 0.0f64;
    let mut n = 0usize;
    loop {
        n += 1;
        let nf = n as f64;
        let wt = match kind {
            GGFKind::Multigraphic => -(2.0 * nf - 1.0) * lw,
            GGFKind::SimpleGraphic => -2.0 * (nf - 1.0) * lw,
        };
        l += log2_z + wt - nf.log2();
        peak = peak.max(l);
        let ratio = log2_z + wt - nf.log2();
        if ratio < -1.0 && l < peak - drop {
            return (peak, n);
        }
        if n > 50_000_000 {
            return (peak, n);
        }
    }
}

/// Coefficients of `(1 - x)^r F(x)` at precision `prec`.
fn inner_coeffs(r: i64, f: &EntireFnSpec, prec: u32, len: usize) -> Vec<Float> {
    let ft = f.taylor_float(prec, len);
    let mut g = vec![Float::new(prec); len];
    let mut bin = vec![Float::new(prec); len];
    if r >= 0 {
        for (j, b) in bin.iter_mut().enumerate().take((r as usize + 1).min(len)) {
            let c = Float::with_val(prec, crate::scalar::binomial(r as u32, j as u32));
            *b = if j % 2 == 1 { -c } else { c };
        }
    } else {
        let m = (-r) as u32;
        for (j, b) in bin.iter_mut().enumerate() {
            *b = Float::with_val(prec, crate::scalar::binomial(m + j as u32 - 1, j as u32));
        }
    }
    for i in 0..len {
        if bin[i].is_zero() {
            continue;
        }
        for j in 0..len - i {
            g[i + j] += Float::with_val(prec, &bin[i] * &ft[j]);
        }
    }
    g
}

fn weight_param_f64(w: &Float) -> f64 {
    w.to_f64()
}

/// Fixed-precision evaluation with `F`'s argument scaled by `inner` instead
/// of `w`; `phi_r` itself is `inner = w`.
fn sums_at(
    z: &Complex,
    w: &Float,
    inner: &Float,
    r: i64,
    f: &EntireFnSpec,
    kind: GGFKind,
    kmax: usize,
    wprec: u32,
) -> Result<PhiSums, DeformedExpError> {
    if *w <= 0 {
        return Err(DeformedExpError::NonPositiveW);
    }
    let p = wprec;
    let wf = weight_param_f64(w);
    let log2_z = log2_abs_c(z);
    let (peak, n_end) = if log2_z.is_finite() {
        base_profile(log2_z, wf, kind, p as f64 + 40.0)
    } else {
        (0.0, kmax + 1)
    };

    // number of inner coefficients that matter up to n_end
    let sn = (inner.to_f64().abs() * n_end as f64).max(1e-300).log2();
    let mut len = 16usize;
    let h = loop {
        let cand = len >= n_end + 1 || {
            let g = inner_coeffs(r, f, 64, len + 4);
            (len..len + 4).all(|j| log2_abs(&g[j]) + j as f64 * sn < -(p as f64) - 20.0)
        };
        if cand {
            break inner_coeffs(r, f, p, len.min(n_end + 1));
        }
        len *= 2;
    };
    let mut b = Vec::with_capacity(h.len());
    let mut pw = Float::with_val(p, 1);
    let neg_s = Float::with_val(p, -inner);
    for hj in &h {
        b.push(Float::with_val(p, hj * &pw));
        pw *= &neg_s;
    }
    let poly_at = |n: usize| -> Float {
        let top = (b.len() - 1).min(n);
        let mut acc = b[top].clone();
        for j in (0..top).rev() {
            acc *= (n - j) as u64;
            acc += &b[j];
        }
        acc
    };

    let mut out = vec![Complex::new(p); kmax + 1];
    if z.real().is_zero() && z.imag().is_zero() {
        // only the n = k term survives
        let mut wt = Float::with_val(p, 1);
        for (k, o) in out.iter_mut().enumerate() {
            if k > 0 {
                wt *= weight_ratio(w, kind, k, p);
            }
            let mut v = Float::with_val(p, poly_at(k) * &wt);
            if k % 2 == 1 {
                v = -v;
            }
            *o = Complex::with_val(p, v);
        }
        return Ok(PhiSums { derivatives: out, log2_max_term: 0.0, log2_abs_err: -(p as f64), terms: kmax + 1, working_prec: p });
    }

    let zabs = Float::with_val(p, z.abs_ref());
    let real_axis = z.imag().is_zero();
    let sign_step = z.real().is_sign_negative(); // (-z)^n sign when real
    let unit = if real_axis { None } else { Some(Complex::with_val(p, -z) / &zabs) };
    let mut phase = Complex::with_val(p, 1);

    let mut ratio_mult = match kind {
        GGFKind::Multigraphic => Float::with_val(p, w / 2u32).exp().recip(),
        GGFKind::SimpleGraphic => Float::with_val(p, 1),
    };
    let step = match kind {
        GGFKind::Multigraphic => Float::with_val(p, -w).exp(),
        GGFKind::SimpleGraphic => Float::with_val(p, w + 1u32).recip(),
    };

    let mut base = Float::with_val(p, 1);
    let mut sums = vec![Float::new(p); kmax + 1];
    let mut csums = vec![Complex::new(p); kmax + 1];
    let mut max_l2 = f64::NEG_INFINITY;
    let mut small_run = 0usize;
    let mut n = 0usize;
    let cap = n_end.saturating_mul(4).max(1000);
    loop {
        if n > 0 {
            base *= &zabs;
            base *= &ratio_mult;
            base /= n as u64;
            ratio_mult *= &step;
            if let Some(u) = &unit {
                phase *= u;
            }
        }
        let pn = poly_at(n);
        let t0 = Float::with_val(p, &base * &pn);
        let mut ff = 1u64;
        let mut l2_term = f64::NEG_INFINITY;
        for k in 0..=kmax {
            if k > n {
                break;
            }
            if k > 0 {
                ff = ff.saturating_mul((n - k + 1) as u64);
            }
            let mut t = Float::with_val(p, &t0 * ff);
            l2_term = l2_term.max(log2_abs(&t));
            if unit.is_none() {
                if sign_step == false && n % 2 == 1 {
                    t = -t;
                }
                sums[k] += t;
            } else {
                csums[k] += Complex::with_val(p, &phase * &t);
            }
        }
        max_l2 = max_l2.max(l2_term);
        let past_peak = n > 0 && {
            let l = log2_z + match kind {
                GGFKind::Multigraphic => -(2.0 * n as f64 + 1.0) * wf / (2.0 * std::f64::consts::LN_2),
                GGFKind::SimpleGraphic => -(n as f64) * (1.0 + wf).log2(),
            } - ((n + 1) as f64).log2();
            l < -1.0
        };
        if past_peak && l2_term < max_l2 - p as f64 - 4.0 && n >= kmax {
            small_run += 1;
            if small_run >= 8 && n >= n_end.min(n) {
                break;
            }
        } else {
            small_run = 0;
        }
        n += 1;
        if n > cap {
            let partial = if unit.is_none() { sums[0].to_f64() } else { csums[0].real().to_f64() };
            return Err(DeformedExpError::NoConvergence { partial, log2_bound: max_l2 - p as f64 });
        }
    }
    let _ = peak;
    let zinv = if kmax > 0 { Some(Complex::with_val(p, z.recip_ref())) } else { None };
    let mut zpow = Complex::with_val(p, 1);
    for k in 0..=kmax {
        let v = if unit.is_none() { Complex::with_val(p, &sums[k]) } else { csums[k].clone() };
        if k > 0 {
            zpow *= zinv.as_ref().unwrap();
        }
        out[k] = Complex::with_val(p, &v * &zpow);
    }
    let log2_abs_err = max_l2 - p as f64 + (n as f64 + 1.0).log2() + 2.0;
    Ok(PhiSums { derivatives: out, log2_max_term: max_l2, log2_abs_err, terms: n + 1, working_prec: p })
}

/// `weight(k) / weight(k - 1)`.
fn weight_ratio(w: &Float, kind: GGFKind, k: usize, p: u32) -> Float {
    match kind {
        GGFKind::Multigraphic => Float::with_val(p, -Float::with_val(p, w * (2 * k as u64 - 1)) / 2u32).exp(),
        GGFKind::SimpleGraphic => Float::with_val(p, w + 1u32).pow(-(k as i64 - 1)),
    }
}

/// Rough `log2 |phi(z, w)|` from `e^{-U(zw)/w}`, used to seed the precision.
fn magnitude_guess(z: &Complex, w: &Float) -> f64 {
    let wf = w.to_f64();
    let x = Complex::with_val(64, z * w);
    let lim = (-1.0f64).exp() * (1.0 - 1e-6);
    let ax = log2_abs_c(&x);
    let x = if ax.is_finite() && ax.exp2() > lim {
        Complex::with_val(64, &x * (lim / ax.exp2()))
    } else {
        x
    };
    match tree_eval(TreeKind::U, &x) {
        Ok(u) => -(u.real().to_f64()) / wf / std::f64::consts::LN_2,
        Err(_) => 0.0,
    }
}

/// Evaluates derivatives `0..=kmax`, adapting the working precision until
/// component `which` carries the input precision.
fn adaptive(
    z: &Complex,
    w: &Float,
    inner: &Float,
    r: i64,
    f: &EntireFnSpec,
    kind: GGFKind,
    kmax: usize,
    which: usize,
) -> Result<PhiSums, DeformedExpError> {
    if *w <= 0 {
        return Err(DeformedExpError::NonPositiveW);
    }
    let target = z.prec().0.max(w.prec());
    let log2_z = log2_abs_c(z);
    let peak = if log2_z.is_finite() { base_profile(log2_z, w.to_f64(), kind, 60.0).0 } else { 0.0 };
    let guess = magnitude_guess(z, w) - which as f64 * log2_z.max(0.0);
    let mut wprec = target + 64 + (peak - guess).max(0.0).ceil() as u32;
    let mut last = None;
    for _ in 0..8 {
        let s = sums_at(z, w, inner, r, f, kind, kmax, wprec)?;
        let mag = log2_abs_c(&s.derivatives[which]);
        let resolved = mag - s.log2_abs_err;
        if resolved >= target as f64 + 8.0 {
            return Ok(s);
        }
        let extra = if resolved > 8.0 { (target as f64 + 40.0 - resolved).ceil() as u32 } else { wprec };
        wprec += extra;
        last = Some(s);
        if wprec > 1 << 22 {
            break;
        }
    }
    let s = last.expect("at least one pass");
    Err(DeformedExpError::NoConvergence {
        partial: s.derivatives[which].real().to_f64(),
        log2_bound: s.log2_abs_err,
    })
}

/// `phi_r(z, w; F)` (multigraphic) or its simple-graphic twin, to the
/// precision of `z`.
pub fn phi_eval(z: &Complex, w: &Float, r: i64, f: &EntireFnSpec, kind: GGFKind) -> Result<Complex, DeformedExpError> {
    let s = adaptive(z, w, w, r, f, kind, 0, 0)?;
    Ok(Complex::with_val(z.prec().0, &s.derivatives[0]))
}

/// `d^k/dz^k phi_r(z, w; F)` by termwise differentiation of the series.
pub fn phi_derivative(
    z: &Complex,
    w: &Float,
    r: i64,
    f: &EntireFnSpec,
    kind: GGFKind,
    k: usize,
) -> Result<Complex, DeformedExpError> {
    let s = adaptive(z, w, w, r, f, kind, k, k)?;
    Ok(Complex::with_val(z.prec().0, &s.derivatives[k]))
}

/// Real-argument convenience wrapper.
pub fn phi_real(z: &Float, w: &Float, r: i64, f: &EntireFnSpec, kind: GGFKind) -> Result<Float, DeformedExpError> {
    let zc = Complex::with_val(z.prec(), z);
    Ok(phi_eval(&zc, w, r, f, kind)?.real().clone())
}

fn check_root_args(r01: i64, f: &EntireFnSpec) -> Result<(), DeformedExpError> {
    if r01 != 0 && r01 != 1 {
        return Err(DeformedExpError::Unsupported("zeros are available for r = 0 and r = 1"));
    }
    if !f.nonvanishing_off_origin() {
        return Err(DeformedExpError::Unsupported("F must not vanish away from the origin"));
    }
    Ok(())
}

/// Three-term asymptotic estimate of the `j`-th zero of `phi_0` (`r01 = 0`)
/// or `phi_1` (`r01 = 1`); the same for both kinds.
pub fn root_asymptotic(j: u32, w: &Float, r01: i64, f: &EntireFnSpec) -> Result<Float, DeformedExpError> {
    check_root_args(r01, f)?;
    let p = w.prec();
    let a = ai_root(j, r01 == 1, p)?;
    let (f1, df1) = f.at_one(p);
    let ratio = Float::with_val(p, &df1 / &f1);
    let sixth = Float::with_val(p, 1) / 6u32;
    let w23 = Float::with_val(p, w.clone().pow(Float::with_val(p, 2) / 3u32));
    let mut inner = Float::with_val(p, 1) - Float::with_val(p, &a * pow2_frac(p, -1, 3)) * &w23;
    let lin = if r01 == 0 { Float::with_val(p, &ratio - &sixth) } else { Float::with_val(p, &ratio + &sixth) };
    inner += Float::with_val(p, &lin * w);
    let e = Float::with_val(p, 1).exp();
    Ok(inner / Float::with_val(p, e * w))
}

fn value_and_slope(
    x: &Float,
    w: &Float,
    r: i64,
    f: &EntireFnSpec,
    kind: GGFKind,
    wprec: u32,
) -> Result<(Float, Float), DeformedExpError> {
    let z = Complex::with_val(wprec, x);
    let s = sums_at(&z, w, w, r, f, kind, 1, wprec)?;
    Ok((s.derivatives[0].real().clone(), s.derivatives[1].real().clone()))
}

fn sign_at(x: &Float, w: &Float, r: i64, f: &EntireFnSpec, kind: GGFKind) -> Result<i32, DeformedExpError> {
    let v = phi_real(x, w, r, f, kind)?;
    Ok(if v.is_sign_negative() { -1 } else { 1 })
}

/// `j`-th real zero (ordered by modulus) of `phi_0` or `phi_1`, to the
/// precision of `w`.
///
/// Newton with a bisection safeguard inside a bracket built from the
/// asymptotic seeds of zeros `j-1, j, j+1`. When that bracket holds no
/// sign change (large `w`), the positive axis is scanned from the origin.
pub fn find_root(j: u32, w: &Float, r01: i64, f: &EntireFnSpec, kind: GGFKind) -> Result<Float, DeformedExpError> {
    check_root_args(r01, f)?;
    if j == 0 {
        return Err(DeformedExpError::Airy(AiryError::BadIndex));
    }
    let p = w.prec();
    let seed = root_asymptotic(j, w, r01, f)?;
    let next = root_asymptotic(j + 1, w, r01, f)?;
    let prev = if j > 1 { Some(root_asymptotic(j - 1, w, r01, f)?) } else { None };
    let gap = Float::with_val(p, &next - &seed);
    let hi = Float::with_val(p, &seed + &next) / 2u32;
    let lo = match &prev {
        Some(q) => Float::with_val(p, q + &seed) / 2u32,
        None => Float::with_val(p, &seed - Float::with_val(p, &gap / 2u32)),
    };
    let bracket = if lo > 0 && gap > 0 {
        let sl = sign_at(&lo, w, r01, f, kind)?;
        let sh = sign_at(&hi, w, r01, f, kind)?;
        (sl != sh).then(|| (lo.clone(), hi.clone(), sl))
    } else {
        None
    };
    let (a, b, sa) = match bracket {
        Some(br) => br,
        None => scan_for_root(j, w, r01, f, kind, &next)?,
    };
    let x0 = if seed > a && seed < b { seed } else { Float::with_val(p, &a + &b) / 2u32 };
    polish(x0, a, b, sa, w, r01, f, kind)
}

/// Finds the `j`-th sign change on the positive axis.
fn scan_for_root(
    j: u32,
    w: &Float,
    r01: i64,
    f: &EntireFnSpec,
    kind: GGFKind,
    beyond: &Float,
) -> Result<(Float, Float, i32), DeformedExpError> {
    let p = w.prec();
    let limit = Float::with_val(p, beyond * 4u32).max(&Float::with_val(p, 8));
    let step = Float::with_val(p, &limit / 400u32);
    let mut x = Float::new(p);
    let mut s = sign_at(&x, w, r01, f, kind)?;
    let mut seen = 0;
    while x < limit {
        let y = Float::with_val(p, &x + &step);
        let t = sign_at(&y, w, r01, f, kind)?;
        if t != s {
            seen += 1;
            if seen == j {
                return Ok((x, y, s));
            }
        }
        x = y;
        s = t;
    }
    Err(DeformedExpError::BasinAmbiguity { j })
}

fn polish(
    x0: Float,
    mut a: Float,
    mut b: Float,
    sa: i32,
    w: &Float,
    r: i64,
    f: &EntireFnSpec,
    kind: GGFKind,
) -> Result<Float, DeformedExpError> {
    let p = w.prec();
    // size the working precision once, from the slope at the starting point
    let probe = adaptive(&Complex::with_val(p, &x0), w, w, r, f, kind, 1, 1)?;
    let wprec = probe.working_prec;
    let mut x = Float::with_val(wprec, &x0);
    for _ in 0..200 {
        let (v, d) = value_and_slope(&x, w, r, f, kind, wprec)?;
        let sv = if v.is_sign_negative() { -1 } else { 1 };
        if v.is_zero() {
            return Ok(Float::with_val(p, &x));
        }
        if sv == sa {
            a = Float::with_val(p, &x);
        } else {
            b = Float::with_val(p, &x);
        }
        let mut nx = Float::with_val(wprec, &x - Float::with_val(wprec, &v / &d));
        if !(nx > a && nx < b) || d.is_zero() {
            nx = Float::with_val(wprec, &a + &b) / 2u32;
        }
        let dx = Float::with_val(wprec, &nx - &x).abs();
        x = nx;
        if log2_abs(&dx) < log2_abs(&x) - p as f64 - 4.0 {
            return Ok(Float::with_val(p, &x));
        }
    }
    Err(DeformedExpError::NoConvergence { partial: x.to_f64(), log2_bound: 0.0 })
}

/// Derivative of order `k` at the `j`-th zero, computed and predicted.
#[derive(Debug, Clone)]
pub struct DerivativeAtRoot {
    pub root: Float,
    pub numeric: Float,
    pub asymptotic: Float,
    pub ratio: Float,
}

pub fn dphi_at_root(
    j: u32,
    w: &Float,
    r01: i64,
    f: &EntireFnSpec,
    kind: GGFKind,
    k: usize,
) -> Result<DerivativeAtRoot, DeformedExpError> {
    if k == 0 {
        return Err(DeformedExpError::Unsupported("derivative order must be at least 1"));
    }
    if r01 == 0 && k != 1 {
        return Err(DeformedExpError::Unsupported("only the first derivative is predicted for r = 0"));
    }
    let p = w.prec();
    let root = find_root(j, w, r01, f, kind)?;
    let numeric = phi_derivative(&Complex::with_val(p, &root), w, r01, f, kind, k)?.real().clone();
    let asymptotic = derivative_asymptotic(j, w, r01, f, kind, k)?;
    let ratio = Float::with_val(p, &numeric / &asymptotic);
    Ok(DerivativeAtRoot { root, numeric, asymptotic, ratio })
}

/// Leading-order prediction of `d^k/dz^k phi_r` at its `j`-th zero.
pub fn derivative_asymptotic(
    j: u32,
    w: &Float,
    r01: i64,
    f: &EntireFnSpec,
    kind: GGFKind,
    k: usize,
) -> Result<Float, DeformedExpError> {
    check_root_args(r01, f)?;
    let p = w.prec();
    let (f1, df1) = f.at_one(p);
    let ratio = Float::with_val(p, &df1 / &f1);
    let sqrt_2pi = Float::with_val(p, Float::with_val(p, Constant::Pi) * 2u32).sqrt();
    let inv_2w = Float::with_val(p, w.clone().recip() / 2u32);
    let w13 = Float::with_val(p, w.clone().pow(Float::with_val(p, 1) / 3u32));
    let simple = kind == GGFKind::SimpleGraphic;
    if r01 == 0 {
        let a = ai_root(j, false, p)?;
        let dai = crate::airy::ai_prime(&Complex::with_val(p, &a)).real().clone();
        let e_const = if simple { Float::with_val(p, 11) / 12u32 } else { Float::with_val(p, 7) / 6u32 };
        let kappa = Float::with_val(p, &sqrt_2pi * pow2_frac(p, 2, 3)) * e_const.exp() * dai;
        let expo = Float::with_val(p, -&inv_2w) + Float::with_val(p, &a * pow2_frac(p, -1, 3)) / &w13 - &ratio;
        let w16 = Float::with_val(p, w.clone().pow(Float::with_val(p, 1) / 6u32));
        Ok(-(kappa * w16 * expo.exp() * f1))
    } else {
        let a = ai_root(j, true, p)?;
        let ai_a = crate::airy::ai(&Complex::with_val(p, &a)).real().clone();
        let kappa = Float::with_val(p, &sqrt_2pi * 2u32) * &a * ai_a;
        let shift = if simple { Float::with_val(p, 5) / 12u32 } else { Float::with_val(p, 1) / 6u32 };
        let expo = Float::with_val(p, -&inv_2w) + Float::with_val(p, &a * pow2_frac(p, -1, 3)) / &w13
            - (shift + &ratio)
            + k as u32;
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let v = Float::with_val(p, w.sqrt_ref()) * kappa * f1 * expo.exp() * (k as u32);
        Ok(if sign < 0 { -v } else { v })
    }
}

/// Which regime formula of the uniform approximation to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApproxPart {
    /// Away from the singularity: `e^{-U/w} (1 - T)^{r - 1/2} F(T)`.
    A,
    /// Intermediate range, Airy function of `2^{-2/3} theta^2`.
    B,
    /// `1 - ezw = tau w^{2/3}`, Airy function of `2^{1/3} tau`.
    C,
    /// Part C with the `w^{1/3}` correction, `r` in {0, 1}.
    CRefined,
}

/// Exponent `eps` separating parts A and B.
pub const REGIME_EPS: f64 = 1.0 / 12.0;
/// Constant `K` in `|ezw| <= 1 + K w^{2/3}` and the bound on `|tau|` for part C.
pub const REGIME_K: f64 = 8.0;

/// Leading-order approximation of `phi_r(z, w; F)` (or the simple-graphic
/// twin) in the chosen regime.
pub fn uniform_approx(
    part: ApproxPart,
    z: &Complex,
    w: &Float,
    r: i64,
    f: &EntireFnSpec,
    kind: GGFKind,
) -> Result<Complex, DeformedExpError> {
    if *w <= 0 {
        return Err(DeformedExpError::NonPositiveW);
    }
    let p = z.prec().0.max(w.prec());
    let wf = w.to_f64();
    let zw = Complex::with_val(p, z * w);
    let e = Float::with_val(p, 1).exp();
    let ezw = Complex::with_val(p, &zw * &e);
    let ezw_abs = Float::with_val(p, ezw.abs_ref()).to_f64();
    let simple = kind == GGFKind::SimpleGraphic;
    let w13 = Float::with_val(p, w.clone().pow(Float::with_val(p, 1) / 3u32));
    let w23 = Float::with_val(p, &w13 * &w13);
    let sqrt_2pi = Float::with_val(p, Float::with_val(p, Constant::Pi) * 2u32).sqrt();
    let (f1, df1) = f.at_one(p);

    let prefactor = |rr: i64| -> Float {
        let mut c = Float::with_val(p, &sqrt_2pi * pow2_frac(p, rr + 1, 3));
        c *= Float::with_val(p, w.clone().pow(Float::with_val(p, 2 * rr - 1) / 6u32));
        if rr.rem_euclid(2) == 1 {
            c = -c;
        }
        if simple {
            c *= Float::with_val(p, Float::with_val(p, -1) / 4u32).exp();
        }
        c
    };

    match part {
        ApproxPart::A | ApproxPart::B => {
            if ezw_abs > 1.0 + REGIME_K * wf.powf(2.0 / 3.0) {
                return Err(DeformedExpError::Regime("|ezw| <= 1 + K w^(2/3)"));
            }
            let t = tree_eval(TreeKind::T, &zw)?;
            let u = tree_eval(TreeKind::U, &zw)?;
            let one_minus_t = Complex::with_val(p, 1 - &t);
            let gap = 1.0 - Float::with_val(p, t.abs_ref()).to_f64();
            let upper = wf.powf(1.0 / 3.0 - REGIME_EPS);
            let lead = Complex::with_val(p, -Complex::with_val(p, &u / w)).exp();
            if part == ApproxPart::A {
                if gap < upper {
                    return Err(DeformedExpError::Regime("1 - |T(zw)| >= w^(1/3 - eps)"));
                }
                let pw = Complex::with_val(p, one_minus_t.ln_ref()) * Float::with_val(p, Float::with_val(p, 2 * r - 1) / 2u32);
                let mut v = lead * pw.exp() * f.eval(&t);
                if simple {
                    v *= Complex::with_val(p, -Complex::with_val(p, &u / 2u32)).exp();
                }
                Ok(v)
            } else {
                if gap > upper {
                    return Err(DeformedExpError::Regime("1 - |T(zw)| <= w^(1/3 - eps)"));
                }
                if gap < wf.powf(1.0 / 3.0) {
                    return Err(DeformedExpError::Regime("1 - |T(zw)| >= w^(1/3)"));
                }
                let theta = Complex::with_val(p, &one_minus_t / &w13);
                let th2 = Complex::with_val(p, theta.square_ref());
                let arg = Complex::with_val(p, &th2 * pow2_frac(p, -2, 3));
                let ai = ai_general(r, &arg);
                let th3 = Complex::with_val(p, &th2 * &theta) / 3u32;
                let ex = Complex::with_val(p, th3 + lead.ln()).exp();
                Ok(ex * ai * prefactor(r) * &f1)
            }
        }
        ApproxPart::C | ApproxPart::CRefined => {
            let tau = Complex::with_val(p, 1 - &ezw) / &w23;
            if Float::with_val(p, tau.abs_ref()).to_f64() > REGIME_K {
                return Err(DeformedExpError::Regime("|tau| bounded (|tau| <= K)"));
            }
            let arg = Complex::with_val(p, &tau * pow2_frac(p, 1, 3));
            let expo = Complex::with_val(p, &tau / &w13) - Float::with_val(p, w.clone().recip() / 2u32);
            let ex = expo.exp();
            let body = if part == ApproxPart::C {
                Complex::with_val(p, ai_general(r, &arg) * &f1)
            } else {
                if r != 0 && r != 1 {
                    return Err(DeformedExpError::Unsupported("the refined form exists for r = 0 and r = 1"));
                }
                let ai = crate::airy::ai(&arg);
                let dai = crate::airy::ai_prime(&arg);
                let c13 = pow2_frac(p, 1, 3);
                let tau2 = Complex::with_val(p, tau.square_ref());
                let five6 = Float::with_val(p, 5) / 6u32;
                if r == 0 {
                    let mut corr = Complex::with_val(p, &tau2 * &five6) * &ai * &f1;
                    corr -= Complex::with_val(p, &dai * &c13) * &f1 / 6u32;
                    corr += Complex::with_val(p, &dai * &c13) * &df1;
                    Complex::with_val(p, &ai * &f1) + corr * &w13
                } else {
                    let lin = Float::with_val(p, Float::with_val(p, &df1 * 6u32) + &f1) / 3u32 * pow2_frac(p, -1, 3);
                    let mut corr = Complex::with_val(p, &tau * &lin) * &ai;
                    corr += Complex::with_val(p, &tau2 * &five6) * &dai * &f1;
                    Complex::with_val(p, &dai * &f1) + corr * &w13
                }
            };
            Ok(body * ex * prefactor(r))
        }
    }
}

/// `tau` such that `z = (1 - tau w^{2/3}) / (ew)`.
pub fn z_from_tau(tau: &Float, w: &Float) -> Float {
    let p = tau.prec().max(w.prec());
    let w23 = Float::with_val(p, w.clone().pow(Float::with_val(p, 2) / 3u32));
    let e = Float::with_val(p, 1).exp();
    (Float::with_val(p, 1) - Float::with_val(p, tau * &w23)) / Float::with_val(p, e * w)
}

#[cfg(test)]
fn phi_with_inner(
    z: &Complex,
    w: &Float,
    inner: &Float,
    r: i64,
    f: &EntireFnSpec,
    kind: GGFKind,
) -> Result<Complex, DeformedExpError> {
    Ok(adaptive(z, w, inner, r, f, kind, 0, 0)?.derivatives[0].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: u32 = 128;

    fn fl(v: f64) -> Float {
        Float::with_val(P, v)
    }

    fn cx(re: f64, im: f64) -> Complex {
        Complex::with_val(P, (re, im))
    }

    fn rel(a: &Complex, b: &Complex) -> f64 {
        let d = Complex::with_val(P, a - b);
        Float::with_val(P, d.abs_ref()).to_f64() / Float::with_val(P, b.abs_ref()).to_f64()
    }

    #[test]
    fn value_at_origin_is_f_of_zero() {
        let w = fl(0.3);
        let cases = [
            (EntireFnSpec::One, 1.0),
            (EntireFnSpec::ExpCk(2), 1.0),
            (EntireFnSpec::Monomial(2), 0.0),
            (EntireFnSpec::PolyTimesExp { coeffs: vec![Rational::from(3), Rational::from(1)], k: 1 }, 3.0),
        ];
        for (f, want) in cases {
            for r in [-2, 0, 1, 3] {
                for kind in [GGFKind::Multigraphic, GGFKind::SimpleGraphic] {
                    let v = sums_at(&cx(0.0, 0.0), &w, &w, r, &f, kind, 0, P).unwrap();
                    assert!((v.derivatives[0].real().to_f64() - want).abs() < 1e-30, "{f:?} r={r}");
                }
            }
        }
    }

    #[test]
    fn small_w_limit_is_exponential() {
        let v = phi_real(&fl(0.5), &fl(1e-4), 0, &EntireFnSpec::One, GGFKind::Multigraphic).unwrap();
        assert!((v.to_f64() / (-0.5f64).exp() - 1.0).abs() < 0.01);
    }

    #[test]
    fn simple_kind_is_a_change_of_variables() {
        let w = fl(0.3);
        let alpha = Float::with_val(P, w.ln_1p_ref());
        let beta = Float::with_val(P, Float::with_val(P, &w + 1u32).sqrt());
        let z = cx(1.0, 0.0);
        let zb = Complex::with_val(P, &z * &beta);
        let a = phi_eval(&z, &w, 0, &EntireFnSpec::One, GGFKind::SimpleGraphic).unwrap();
        let b = phi_eval(&zb, &alpha, 0, &EntireFnSpec::One, GGFKind::Multigraphic).unwrap();
        assert!(rel(&a, &b) < 1e-20);
        // general r and F: same coefficients, weights routed through the multigraphic path
        let f = EntireFnSpec::ExpCk(2);
        let inner = w.clone();
        let a = phi_eval(&z, &w, 1, &f, GGFKind::SimpleGraphic).unwrap();
        let b = phi_with_inner(&zb, &alpha, &inner, 1, &f, GGFKind::Multigraphic).unwrap();
        assert!(rel(&a, &b) < 1e-20);
    }

    #[test]
    fn series_matches_direct_coefficients() {
        // phi_1(z, w; e^x) from explicitly expanded coefficients
        let (z, w) = (0.7f64, 0.4f64);
        let f = EntireFnSpec::ExpCk(1);
        let got = phi_real(&fl(z), &fl(w), 1, &f, GGFKind::Multigraphic).unwrap().to_f64();
        let mut want = 0.0;
        for n in 0..80usize {
            // [z^n] (1 - wz) e^{-z} e^{wz} = [z^n](1 - wz) e^{-(1-w)z}
            let c = |m: usize| -> f64 {
                let mut f = 1.0;
                for i in 1..=m {
                    f *= -(1.0 - w) / i as f64;
                }
                f
            };
            let cn = c(n) - if n > 0 { w * c(n - 1) } else { 0.0 };
            want += cn * (-((n * n) as f64) * w / 2.0).exp() * z.powi(n as i32);
        }
        assert!((got - want).abs() < 1e-13);
    }

    #[test]
    fn conjugate_symmetry_and_realness() {
        let w = fl(0.2);
        let f = EntireFnSpec::ExpCk(2);
        let a = phi_eval(&cx(1.3, 0.8), &w, 1, &f, GGFKind::Multigraphic).unwrap();
        let b = phi_eval(&cx(1.3, -0.8), &w, 1, &f, GGFKind::Multigraphic).unwrap();
        assert!(rel(&a, &b.conj()) < 1e-30);
        let c = phi_eval(&cx(1.3, 0.0), &w, 1, &f, GGFKind::Multigraphic).unwrap();
        assert!(c.imag().is_zero());
    }

    #[test]
    fn derivative_identity() {
        // d/dz phi_1 = (1/z)(-phi_0(.; x) - phi_1(.; x)/w + phi_1(.; x F'))
        let z = cx(0.5, 0.0);
        let w = fl(0.2);
        let kind = GGFKind::Multigraphic;
        for f in [EntireFnSpec::One, EntireFnSpec::ExpCk(2)] {
            let lhs = phi_derivative(&z, &w, 1, &f, kind, 1).unwrap();
            let xf = f.times_x();
            let a = phi_eval(&z, &w, 0, &xf, kind).unwrap();
            let b = phi_eval(&z, &w, 1, &xf, kind).unwrap();
            let c = if f == EntireFnSpec::One {
                Complex::new(P)
            } else {
                phi_eval(&z, &w, 1, &f.x_derivative(), kind).unwrap()
            };
            let rhs = (Complex::with_val(P, -a) - Complex::with_val(P, &b / &w) + c) / &z;
            assert!(rel(&lhs, &rhs) < 1e-20, "{f:?}");
        }
    }

    #[test]
    fn x_derivative_of_exp_c2() {
        // x (1 + x) e^{x + x^2/2}
        let d = EntireFnSpec::ExpCk(2).x_derivative();
        assert_eq!(
            d,
            EntireFnSpec::PolyTimesExp { coeffs: vec![Rational::new(), Rational::from(1), Rational::from(1)], k: 2 }
        );
    }

    #[test]
    fn simple_deformed_exponential_first_zero() {
        let w = Float::with_val(96, 1);
        let r = find_root(1, &w, 0, &EntireFnSpec::One, GGFKind::SimpleGraphic).unwrap();
        assert!((r.to_f64() - 1.488079).abs() < 1e-5, "{r}");
        let v = phi_real(&r, &w, 0, &EntireFnSpec::One, GGFKind::SimpleGraphic).unwrap();
        assert!(v.to_f64().abs() < 1e-20);
    }

    #[test]
    fn first_zero_leading_term() {
        let mut last = f64::INFINITY;
        for w in [1e-2, 1e-3] {
            let w = Float::with_val(96, w);
            let r = find_root(1, &w, 0, &EntireFnSpec::One, GGFKind::Multigraphic).unwrap();
            let scaled = (r * &w * Float::with_val(96, 1).exp()).to_f64();
            let gap = (scaled - 1.0).abs();
            assert!(gap < last && gap < 0.2, "{scaled}");
            last = gap;
        }
    }

    #[test]
    fn root_asymptotic_gap_shrinks_like_w_four_thirds() {
        let gap = |w: f64| {
            let w = Float::with_val(96, w);
            let a = find_root(1, &w, 0, &EntireFnSpec::One, GGFKind::Multigraphic).unwrap();
            let b = root_asymptotic(1, &w, 0, &EntireFnSpec::One).unwrap();
            ((a - &b) / b).to_f64().abs()
        };
        let factor = gap(1e-2) / gap(1e-3);
        assert!((10.0..=40.0).contains(&factor), "{factor}");
    }

    #[test]
    fn root_asymptotic_formula() {
        let w = Float::with_val(96, 1e-3);
        let a1 = ai_root(1, false, 96).unwrap().to_f64();
        let e = std::f64::consts::E;
        let want = (1.0 - a1 * 2f64.powf(-1.0 / 3.0) * 1e-2 - 1e-3 / 6.0) / (e * 1e-3);
        let got = root_asymptotic(1, &w, 0, &EntireFnSpec::One).unwrap().to_f64();
        assert!((got / want - 1.0).abs() < 1e-12);
        // F = e^x shifts the linear term to 1/6 - 1
        let got = root_asymptotic(1, &w, 0, &EntireFnSpec::ExpCk(1)).unwrap().to_f64();
        let want = (1.0 - a1 * 2f64.powf(-1.0 / 3.0) * 1e-2 + 1e-3 * 5.0 / 6.0) / (e * 1e-3);
        assert!((got / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zeros_interlace() {
        // a'_1 > a_1 > a'_2 > a_2 and z decreases in the Airy zero
        let w = Float::with_val(96, 1e-3);
        let f = EntireFnSpec::One;
        let k = GGFKind::Multigraphic;
        let r1 = find_root(1, &w, 0, &f, k).unwrap();
        let r2 = find_root(2, &w, 0, &f, k).unwrap();
        let s1 = find_root(1, &w, 1, &f, k).unwrap();
        let s2 = find_root(2, &w, 1, &f, k).unwrap();
        assert!(s1 < r1 && r1 < s2 && s2 < r2, "{s1} {r1} {s2} {r2}");
    }

    #[test]
    fn derivative_at_zero_matches_prediction() {
        let w = Float::with_val(96, 1e-3);
        let d = dphi_at_root(1, &w, 0, &EntireFnSpec::One, GGFKind::Multigraphic, 1).unwrap();
        assert!((d.ratio.to_f64() - 1.0).abs() < 0.15, "{}", d.ratio);
    }

    #[test]
    fn second_over_first_derivative_at_phi1_zero() {
        let w = Float::with_val(96, 1e-3);
        let f = EntireFnSpec::One;
        let k = GGFKind::Multigraphic;
        let d1 = dphi_at_root(1, &w, 1, &f, k, 1).unwrap();
        let d2 = dphi_at_root(1, &w, 1, &f, k, 2).unwrap();
        let ratio = (d2.numeric / d1.numeric).to_f64();
        let want = -2.0 * std::f64::consts::E;
        assert!((ratio / want - 1.0).abs() < 0.1, "{ratio}");
        assert!((d1.ratio.to_f64() - 1.0).abs() < 0.3, "{}", d1.ratio);
    }

    #[test]
    fn part_a_away_from_singularity() {
        let w = Float::with_val(P, 1e-3);
        // zw = T e^{-T} with T = 1/2
        let zw = 0.5 * (-0.5f64).exp();
        let z = Complex::with_val(P, Float::with_val(P, zw) / &w);
        let f = EntireFnSpec::ExpCk(1);
        for r in [0, 1, 2] {
            let exact = phi_eval(&z, &w, r, &f, GGFKind::Multigraphic).unwrap();
            let approx = uniform_approx(ApproxPart::A, &z, &w, r, &f, GGFKind::Multigraphic).unwrap();
            assert!(rel(&approx, &exact) < 0.01, "r={r}");
        }
    }

    #[test]
    fn part_c_at_tau_zero() {
        let w = Float::with_val(P, 1e-3);
        let z = Complex::with_val(P, z_from_tau(&Float::new(P), &w));
        let approx = uniform_approx(ApproxPart::C, &z, &w, 0, &EntireFnSpec::One, GGFKind::Multigraphic).unwrap();
        let sqrt_2pi = (2.0 * std::f64::consts::PI).sqrt();
        let ai0 = 0.355_028_053_887_817_2;
        let log_want = (sqrt_2pi * 2f64.powf(1.0 / 3.0) * 1e-3f64.powf(-1.0 / 6.0) * ai0).ln() - 500.0;
        let log_got = Float::with_val(P, approx.abs_ref()).ln().to_f64();
        assert!((log_got - log_want).abs() < 1e-12);
        let exact = phi_eval(&z, &w, 0, &EntireFnSpec::One, GGFKind::Multigraphic).unwrap();
        let e = rel(&approx, &exact);
        assert!(e < 0.2, "{e}");
    }

    #[test]
    fn part_c_error_orders() {
        let f = EntireFnSpec::One;
        let k = GGFKind::Multigraphic;
        let err = |w: f64, part: ApproxPart| {
            let w = Float::with_val(96, w);
            let z = Complex::with_val(96, z_from_tau(&Float::with_val(96, 0.5), &w));
            let exact = phi_eval(&z, &w, 0, &f, k).unwrap();
            let a = uniform_approx(part, &z, &w, 0, &f, k).unwrap();
            (Complex::with_val(96, &a / &exact) - 1u32).abs().real().to_f64()
        };
        let slope = |part| (err(1e-3, part) / err(1e-2, part)).log10() / -1.0;
        let c = slope(ApproxPart::C);
        let refined = slope(ApproxPart::CRefined);
        assert!((c - 1.0 / 3.0).abs() < 0.1, "{c}");
        assert!((refined - 2.0 / 3.0).abs() < 0.1, "{refined}");
    }

    #[test]
    fn refined_part_c_at_airy_zero() {
        let w = Float::with_val(P, 1e-3);
        let a1 = ai_root(1, false, P).unwrap();
        let tau = Float::with_val(P, &a1 * pow2_frac(P, -1, 3));
        let z = Complex::with_val(P, z_from_tau(&tau, &w));
        let f = EntireFnSpec::One;
        let lead = uniform_approx(ApproxPart::C, &z, &w, 0, &f, GGFKind::Multigraphic).unwrap();
        let refined = uniform_approx(ApproxPart::CRefined, &z, &w, 0, &f, GGFKind::Multigraphic).unwrap();
        assert!(Float::with_val(P, lead.abs_ref()) < Float::with_val(P, refined.abs_ref()) * 1e-30);
        assert!(!refined.real().is_zero());
    }

    #[test]
    fn regime_violations_are_named() {
        let w = Float::with_val(P, 1e-3);
        let z = Complex::with_val(P, z_from_tau(&Float::new(P), &w));
        let e = uniform_approx(ApproxPart::A, &z, &w, 0, &EntireFnSpec::One, GGFKind::Multigraphic).unwrap_err();
        assert!(e.to_string().contains("1 - |T(zw)|"));
        let far = Complex::with_val(P, 10);
        let e = uniform_approx(ApproxPart::C, &far, &w, 0, &EntireFnSpec::One, GGFKind::Multigraphic).unwrap_err();
        assert!(e.to_string().contains("tau"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn conjugates(re in -2.0f64..4.0, im in -3.0f64..3.0, w in 0.05f64..1.0, r in -1i64..3) {
            let w = Float::with_val(P, w);
            let f = EntireFnSpec::ExpCk(1);
            for kind in [GGFKind::Multigraphic, GGFKind::SimpleGraphic] {
                let a = phi_eval(&cx(re, im), &w, r, &f, kind).unwrap();
                let b = phi_eval(&cx(re, -im), &w, r, &f, kind).unwrap();
                let d = Complex::with_val(P, &a - b.conj());
                let scale = Float::with_val(P, a.abs_ref()).to_f64().max(1e-30);
                prop_assert!(Float::with_val(P, d.abs_ref()).to_f64() <= 1e-30 * scale);
            }
        }
    }
}
