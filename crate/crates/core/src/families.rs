//! Graphic generating functions of digraph families and exact finite-n
//! probabilities in the three random models.
//!
//! Every family GGF has the shape `c * w^k * phi_a(z, w; F) / phi_b(z, w; G)^e`
//! with `e` in {1, 2}. The deformed exponentials are built directly as
//! power series, so the same code runs over exact rationals (simple and
//! strict models at rational `p`) and over high-precision floats.

use crate::deformed_exp::EntireFnSpec;
use crate::scalar::{binomial, factorial, Coeff};
use crate::series::TruncatedSeries;
use crate::strong::{a_r_polynomial, StrongError, StrongVariant};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Multidigraphs with Poisson(p) arc multiplicities, loops included.
    MD,
    /// Simple digraphs, each ordered pair independently with probability p.
    D2,
    /// Strict digraphs: each unordered pair gets one of its two arcs with
    /// probability p each, or nothing.
    SD,
}

impl ModelKind {
    /// `a` in `w = p / (1 - a p)`; zero for multidigraphs (`w = p`).
    pub fn shift(self) -> u32 {
        match self {
            ModelKind::MD => 0,
            ModelKind::D2 => 1,
            ModelKind::SD => 2,
        }
    }

    fn cycle_fn(self) -> EntireFnSpec {
        match self {
            ModelKind::MD => EntireFnSpec::One,
            ModelKind::D2 => EntireFnSpec::ExpCk(1),
            ModelKind::SD => EntireFnSpec::ExpCk(2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Acyclic,
    Elementary,
    /// Exactly one complex component, whose kernel is one given kernel of
    /// excess `r` and deficiency `d` (multidigraphs only).
    OneComplexKernel { r: u32, d: u32 },
    /// Exactly one complex component, of excess `r` (simple and strict).
    OneComplexExcess(u32),
    /// Exactly one complex component, which is bicyclic.
    Bicyclic,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FamilyError {
    #[error("{0}")]
    Invalid(&'static str),
    #[error("edge probability out of range for this model: {0}")]
    OutOfRange(&'static str),
    #[error("{0}")]
    Unsupported(&'static str),
    #[error("no stable value up to {prec} bits")]
    NoConvergence { prec: u32 },
    #[error(transparent)]
    Strong(#[from] StrongError),
}

/// How the edge probability is given.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeProb {
    Fixed(Rational),
    /// `p = lambda / n`.
    Scaled(Rational),
    /// `p = (1 + mu n^{-1/3}) / n`.
    Window(Rational),
}

impl EdgeProb {
    pub fn to_float(&self, n: u64, prec: u32) -> Float {
        match self {
            EdgeProb::Fixed(p) => Float::with_val(prec, p),
            EdgeProb::Scaled(l) => Float::with_val(prec, l) / n,
            EdgeProb::Window(mu) => {
                let t = Float::with_val(prec, n).cbrt().recip();
                (t * Float::with_val(prec, mu) + 1u32) / n
            }
        }
    }

    /// Exact value when it is rational.
    pub fn to_rational(&self, n: u64) -> Option<Rational> {
        match self {
            EdgeProb::Fixed(p) => Some(p.clone()),
            EdgeProb::Scaled(l) => Some(Rational::from(l / n)),
            EdgeProb::Window(mu) => {
                if *mu == 0 {
                    return Some(Rational::from((1, n)));
                }
                let c = Integer::from(n).root(3);
                if Integer::from(c.clone().pow(3)) != n {
                    return None;
                }
                let inner = Rational::from(mu / c) + 1u32;
                Some(inner / n)
            }
        }
    }
}

/// Polynomial in `p`, ascending rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbPolynomial {
    pub coeffs: Vec<Rational>,
}

impl ProbPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rational::new());
        }
        ProbPolynomial { coeffs }
    }

    pub fn eval(&self, p: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= p;
            acc += c;
        }
        acc
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

impl std::fmt::Display for ProbPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == 0 && !(first && i + 1 == self.coeffs.len()) {
                continue;
            }
            if !first {
                write!(f, " {} ", if *c < 0 { '-' } else { '+' })?;
            } else if *c < 0 {
                write!(f, "-")?;
            }
            first = false;
            let a = Rational::from(c.abs_ref());
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*p")?,
                _ => write!(f, "{a}*p^{i}")?,
            }
        }
        Ok(())
    }
}

/// `c * w^k * phi_a(F) / phi_b(G)^e`.
#[derive(Debug, Clone)]
struct Shape {
    numer: Option<(i64, EntireFnSpec)>,
    denom: (i64, EntireFnSpec),
    squared: bool,
    w_power: u32,
    constant: Rational,
}

fn shape(family: FamilySpec, model: ModelKind) -> Result<Shape, FamilyError> {
    let cycles = model.cycle_fn();
    Ok(match family {
        FamilySpec::Acyclic => Shape {
            numer: None,
            denom: (0, EntireFnSpec::One),
            squared: false,
            w_power: 0,
            constant: Rational::from(1),
        },
        FamilySpec::Elementary => Shape {
            numer: None,
            denom: (1, cycles),
            squared: false,
            w_power: 0,
            constant: Rational::from(1),
        },
        FamilySpec::OneComplexKernel { r, d } => {
            if model != ModelKind::MD {
                return Err(FamilyError::Invalid("a fixed kernel is only available for multidigraphs"));
            }
            if r == 0 || d >= 2 * r {
                return Err(FamilyError::Invalid("need r >= 1 and 0 <= d <= 2r - 1"));
            }
            Shape {
                numer: Some((1 - 3 * r as i64 + d as i64, EntireFnSpec::Monomial(2 * r - d))),
                denom: (1, cycles),
                squared: true,
                w_power: r,
                constant: Rational::from((Integer::from(1), factorial(2 * r - d))),
            }
        }
        FamilySpec::OneComplexExcess(r) => {
            let variant = match model {
                ModelKind::MD => {
                    return Err(FamilyError::Invalid("excess aggregation is only available for simple and strict digraphs"))
                }
                ModelKind::D2 => StrongVariant::Simple,
                ModelKind::SD => StrongVariant::Strict,
            };
            let a = a_r_polynomial(r, variant)?;
            Shape {
                numer: Some((1 - 3 * r as i64, EntireFnSpec::PolyTimesExp { coeffs: a.coeffs, k: model.shift() })),
                denom: (1, cycles),
                squared: true,
                w_power: r,
                constant: Rational::from(1),
            }
        }
        FamilySpec::Bicyclic => {
            let q = |v: &[i64]| v.iter().map(|&c| Rational::from(c)).collect::<Vec<_>>();
            let f = match model {
                ModelKind::MD => EntireFnSpec::Monomial(1),
                ModelKind::D2 => EntireFnSpec::PolyTimesExp { coeffs: q(&[0, 0, 0, 3, -2]), k: 1 },
                ModelKind::SD => EntireFnSpec::PolyTimesExp { coeffs: q(&[0, 0, 0, 0, 3, -1, -1]), k: 2 },
            };
            Shape {
                numer: Some((-2, f)),
                denom: (1, cycles),
                squared: true,
                w_power: 1,
                constant: Rational::from((1, 2)),
            }
        }
    })
}

/// Hadamard weights `e^{-n^2 w/2}` (multi) or `(1 + w)^{-C(n,2)}` (simple).
fn weights<T: Coeff>(model: ModelKind, w: &T, order: usize) -> Result<Vec<T>, FamilyError> {
    let mut out = Vec::with_capacity(order + 1);
    match model {
        ModelKind::MD => {
            for n in 0..=order {
                let e = w.from_rational_like(&Rational::from((-((n * n) as i64), 2))).mul(w);
                out.push(e.exp_opt().ok_or(FamilyError::Unsupported("multidigraph weights need a floating ring"))?);
            }
        }
        ModelKind::D2 | ModelKind::SD => {
            let one = w.from_i64_like(1);
            let inv = one.div(&one.add(w));
            let mut step = one.clone();
            let mut cur = one;
            for _ in 0..=order {
                out.push(cur.clone());
                cur = cur.mul(&step);
                step = step.mul(&inv);
            }
        }
    }
    Ok(out)
}

/// Power series of `phi_r(z, w; F)`: `sum_n weight_n [y^n] e^{-y} (1 - wy)^r F(wy) z^n`.
fn phi_series<T: Coeff>(r: i64, f: &EntireFnSpec, w: &T, wts: &[T]) -> TruncatedSeries<T> {
    let len = wts.len();
    let ft = f.taylor_in(w, len);
    let mut g = vec![w.zero_like(); len];
    for j in 0..len {
        let b = if r >= 0 {
            if j as i64 > r {
                break;
            }
            let c = Rational::from(binomial(r as u32, j as u32));
            if j % 2 == 1 {
                -c
            } else {
                c
            }
        } else {
            Rational::from(binomial((-r) as u32 + j as u32 - 1, j as u32))
        };
        let b = w.from_rational_like(&b);
        for i in 0..len - j {
            g[i + j].add_mul_assign(&b, &ft[i]);
        }
    }
    let mut wk = w.from_i64_like(1);
    for gk in g.iter_mut() {
        *gk = gk.mul(&wk);
        wk = wk.mul(w);
    }
    // signed inverse factorials (-1)^j / j!
    let mut ef = Vec::with_capacity(len);
    ef.push(w.from_i64_like(1));
    for j in 1..len {
        let prev: &T = &ef[j - 1];
        ef.push(prev.div(&w.from_i64_like(-(j as i64))));
    }
    TruncatedSeries::from_fn(len - 1, |n| {
        let mut acc = w.zero_like();
        for k in 0..=n {
            if !g[k].is_zero() {
                acc.add_mul_assign(&g[k], &ef[n - k]);
            }
        }
        acc.mul(&wts[n])
    })
}

fn ggf_parts<T: Coeff>(
    sh: &Shape,
    model: ModelKind,
    w: &T,
    order: usize,
) -> Result<(Option<TruncatedSeries<T>>, TruncatedSeries<T>, T), FamilyError> {
    let wts = weights(model, w, order)?;
    let numer = sh.numer.as_ref().map(|(r, f)| phi_series(*r, f, w, &wts));
    let den = phi_series(sh.denom.0, &sh.denom.1, w, &wts);
    let mut recip = den.reciprocal().expect("phi has constant term F(0) = 1");
    if sh.squared {
        recip = recip.mul(&recip).expect("same ring");
    }
    let mut c = w.from_rational_like(&sh.constant);
    for _ in 0..sh.w_power {
        c = c.mul(w);
    }
    Ok((numer, recip, c))
}

fn ggf_generic<T: Coeff>(family: FamilySpec, model: ModelKind, w: &T, order: usize) -> Result<TruncatedSeries<T>, FamilyError> {
    let sh = shape(family, model)?;
    let (numer, recip, c) = ggf_parts(&sh, model, w, order)?;
    let h = match numer {
        Some(nm) => nm.mul(&recip).expect("same ring"),
        None => recip,
    };
    Ok(h.scale(&c))
}

fn coefficient<T: Coeff>(family: FamilySpec, model: ModelKind, w: &T, n: usize) -> Result<T, FamilyError> {
    let sh = shape(family, model)?;
    let (numer, recip, c) = ggf_parts(&sh, model, w, n)?;
    let v = match numer {
        Some(nm) => {
            let mut acc = w.zero_like();
            for i in 0..=n {
                acc.add_mul_assign(nm.coeff(i), recip.coeff(n - i));
            }
            acc
        }
        None => recip.coeff(n).clone(),
    };
    Ok(v.mul(&c))
}

/// GGF of the family to order `n` in `z`, at weight parameter `w`
/// (multi-graphic weights for `MD`, graphic weights otherwise).
pub fn family_ggf(family: FamilySpec, model: ModelKind, w: &Float, order: usize) -> Result<TruncatedSeries<Float>, FamilyError> {
    if *w <= 0 {
        return Err(FamilyError::OutOfRange("w must be positive"));
    }
    ggf_generic(family, model, w, order)
}

/// Same GGF over exact rationals (simple and strict models only).
pub fn family_ggf_rational(
    family: FamilySpec,
    model: ModelKind,
    w: &Rational,
    order: usize,
) -> Result<TruncatedSeries<Rational>, FamilyError> {
    if model == ModelKind::MD {
        return Err(FamilyError::Unsupported("multidigraph weights are transcendental in w"));
    }
    ggf_generic(family, model, w, order)
}

fn check_p_rational(model: ModelKind, p: &Rational) -> Result<(), FamilyError> {
    if *p < 0 {
        return Err(FamilyError::OutOfRange("p must be nonnegative"));
    }
    match model {
        ModelKind::MD => Ok(()),
        ModelKind::D2 if *p >= 1 => Err(FamilyError::OutOfRange("simple digraphs need p < 1")),
        ModelKind::SD if Rational::from(p * 2u32) >= 1 => Err(FamilyError::OutOfRange("strict digraphs need p < 1/2")),
        _ => Ok(()),
    }
}

/// `w = p / (1 - a p)`.
pub fn weight_parameter(model: ModelKind, p: &Float) -> Float {
    let a = model.shift();
    let den = Float::with_val(p.prec(), 1u32) - Float::with_val(p.prec(), p * a);
    Float::with_val(p.prec(), p / den)
}

/// Exact probability at a rational `p` (simple and strict models).
pub fn probability_rational(family: FamilySpec, model: ModelKind, n: u32, p: &Rational) -> Result<Rational, FamilyError> {
    check_p_rational(model, p)?;
    if model == ModelKind::MD {
        return Err(FamilyError::Unsupported("multidigraph probabilities are transcendental in p"));
    }
    let den = Rational::from(1u32) - Rational::from(p * model.shift());
    let w = Rational::from(p / &den);
    let c = coefficient(family, model, &w, n as usize)?;
    let pairs = (n as u64 * (n as u64).saturating_sub(1) / 2) as i32;
    let q = Rational::from(1u32) - p;
    let pre = q.pow(pairs) * Rational::from(factorial(n));
    Ok(c * pre)
}

/// Exact polynomial in `p` (simple and strict models, `n <= 8`).
pub fn probability_series_in_p(family: FamilySpec, model: ModelKind, n: u32) -> Result<ProbPolynomial, FamilyError> {
    if model == ModelKind::MD {
        return Err(FamilyError::Unsupported("multidigraph probabilities are not polynomials in p"));
    }
    if n > 8 {
        return Err(FamilyError::Invalid("n <= 8 for the symbolic path"));
    }
    let deg = (n * n.saturating_sub(1)) as usize;
    let xs: Vec<Rational> = (0..=deg).map(|k| Rational::from((1, k as u32 + 3))).collect();
    let ys = xs
        .iter()
        .map(|x| probability_rational(family, model, n, x))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ProbPolynomial::new(interpolate(&xs, &ys)))
}

/// Newton divided differences, expanded to monomial coefficients.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> Vec<Rational> {
    let m = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..m {
        for i in (j..m).rev() {
            let num = Rational::from(&dd[i] - &dd[i - 1]);
            let den = Rational::from(&xs[i] - &xs[i - j]);
            dd[i] = num / den;
        }
    }
    let mut poly = vec![Rational::new(); m];
    for i in (0..m).rev() {
        // poly = poly * (x - xs[i]) + dd[i]
        let mut next = vec![Rational::new(); m];
        for k in 0..m - 1 {
            if poly[k] != 0 {
                next[k + 1] += &poly[k];
                next[k] -= Rational::from(&poly[k] * &xs[i]);
            }
        }
        next[0] += &dd[i];
        poly = next;
    }
    poly
}

/// Result of a precision-escalated evaluation.
#[derive(Debug, Clone)]
pub struct ExactProbability {
    pub value: Float,
    pub digits: u32,
    pub working_prec: u32,
}

const MAX_PREC: u32 = 1 << 20;

/// `P` at one fixed working precision.
pub fn probability_at_prec(family: FamilySpec, model: ModelKind, n: u32, p: &EdgeProb, prec: u32) -> Result<Float, FamilyError> {
    let pf = p.to_float(n as u64, prec);
    if pf < 0 {
        return Err(FamilyError::OutOfRange("p must be nonnegative"));
    }
    let two_p = Float::with_val(prec, &pf * 2u32);
    match model {
        ModelKind::D2 if pf >= 1 => return Err(FamilyError::OutOfRange("simple digraphs need p < 1")),
        ModelKind::SD if two_p >= 1 => return Err(FamilyError::OutOfRange("strict digraphs need p < 1/2")),
        _ => {}
    }
    let w = weight_parameter(model, &pf);
    let c = coefficient(family, model, &w, n as usize)?;
    // n! and the model prefactor meet in the exponent
    let mut log_pre = Float::with_val(prec, n + 1).ln_gamma();
    match model {
        ModelKind::MD => {
            let sq = Float::with_val(prec, (n as u64) * (n as u64));
            log_pre -= sq * &pf / 2u32;
        }
        ModelKind::D2 | ModelKind::SD => {
            let pairs = (n as u64) * (n as u64).saturating_sub(1) / 2;
            let l = Float::with_val(prec, 1u32) - &pf;
            log_pre += l.ln() * pairs;
        }
    }
    Ok(c * log_pre.exp())
}

/// Probability with automatic precision escalation: two evaluations at
/// different precisions must agree to `digits` significant digits (or to
/// far below that in absolute terms).
pub fn probability_exact(family: FamilySpec, model: ModelKind, n: u32, p: &EdgeProb, digits: u32) -> Result<ExactProbability, FamilyError> {
    shape(family, model)?;
    let digit_bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32;
    // the coefficient recurrences lose about n (1 - log2(np)/2) bits
    let lambda = (p.to_float(n as u64, 64).to_f64() * n as f64).max(1e-3);
    let per_vertex = (1.1 - 0.55 * lambda.log2()).clamp(0.4, 2.0);
    let mut prec = 96 + digit_bits + (per_vertex * n as f64).ceil() as u32;
    while prec <= MAX_PREC {
        let hi = prec + (prec / 8).max(64);
        let a = probability_at_prec(family, model, n, p, prec)?;
        let b = probability_at_prec(family, model, n, p, hi)?;
        let diff = Float::with_val(hi, &a - &b).abs();
        let rel = Float::with_val(hi, 10u32).pow(-((digits + 2) as i32));
        let floor = Float::with_val(hi, 10u32).pow(-((digits + 30) as i32));
        let mag = Float::with_val(hi, b.abs_ref());
        if diff <= Float::with_val(hi, &rel * &mag) || diff <= floor {
            return Ok(ExactProbability { value: b, digits, working_prec: hi });
        }
        prec *= 2;
    }
    Err(FamilyError::NoConvergence { prec: MAX_PREC })
}

fn scaled_trunc(r: &Rational, shift: i64) -> Integer {
    let ten = Integer::from(10);
    let scaled = if shift >= 0 {
        Rational::from(r * ten.pow(shift as u32))
    } else {
        Rational::from(r / ten.pow((-shift) as u32))
    };
    scaled.abs().trunc().numer().clone()
}

fn with_point(m: &Integer, frac: usize) -> String {
    let mut s = m.to_string();
    if frac == 0 {
        return s;
    }
    if s.len() <= frac {
        s = format!("{}{}", "0".repeat(frac + 1 - s.len()), s);
    }
    s.insert(s.len() - frac, '.');
    s
}

/// `digits` significant decimal digits, truncated toward zero. Values far
/// from unity use scientific notation.
pub fn to_digits(x: &Float, digits: u32) -> String {
    let digits = digits.max(1) as i64;
    let Some(r) = x.to_rational() else { return x.to_string() };
    if r == 0 {
        return "0".into();
    }
    let mut e = crate::scalar::log10_abs(x).floor() as i64;
    let lo = Integer::from(10).pow((digits - 1) as u32);
    let hi = Integer::from(&lo * 10);
    let mut m = scaled_trunc(&r, digits - 1 - e);
    while m >= hi {
        e += 1;
        m = scaled_trunc(&r, digits - 1 - e);
    }
    while m < lo {
        e -= 1;
        m = scaled_trunc(&r, digits - 1 - e);
    }
    let sign = if r < 0 { "-" } else { "" };
    if (-6..15).contains(&e) {
        let frac = digits - 1 - e;
        if frac >= 0 {
            format!("{sign}{}", with_point(&m, frac as usize))
        } else {
            format!("{sign}{m}{}", "0".repeat((-frac) as usize))
        }
    } else {
        format!("{sign}{}e{e}", with_point(&m, (digits - 1) as usize))
    }
}

/// `places` digits after the decimal point, truncated toward zero.
pub fn to_decimals(x: &Float, places: u32) -> String {
    let Some(r) = x.to_rational() else { return x.to_string() };
    let m = scaled_trunc(&r, places as i64);
    let sign = if r < 0 && m != 0 { "-" } else { "" };
    format!("{sign}{}", with_point(&m, places as usize))
}
