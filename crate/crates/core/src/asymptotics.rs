//! Leading-order asymptotic probabilities in the sub-, critical and
//! supercritical regimes, with automatic regime selection.

use crate::airy::{ai_general, ai_prime, ai_root, AiryError};
use crate::airy_integrals::{airy_table_i, elementary_critical, phi_rd, varphi, IntegralError};
use crate::families::{probability_exact, EdgeProb, FamilyError, FamilySpec, ModelKind};
use crate::scalar::{factorial, pow2_frac};
use crate::strong::{a_r_polynomial, s_r, StrongError, StrongVariant};
use rug::ops::Pow;
use rug::{Complex, Float, Rational};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// `|mu| <= AUTO_CRITICAL_MU` selects the critical formulas.
pub const AUTO_CRITICAL_MU: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AsymError {
    #[error("regime mismatch: {0}")]
    Regime(&'static str),
    #[error("{0}")]
    Invalid(&'static str),
    #[error(transparent)]
    Airy(#[from] AiryError),
    #[error(transparent)]
    Integral(#[from] IntegralError),
    #[error(transparent)]
    Strong(#[from] StrongError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Regime {
    Subcritical(Float),
    Critical(Float),
    Supercritical(Float),
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Subcritical(_) => "subcritical",
            Regime::Critical(_) => "critical",
            Regime::Supercritical(_) => "supercritical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeChoice {
    Auto,
    Subcritical,
    Critical,
    Supercritical,
}

#[derive(Debug, Clone)]
pub struct AsymValue {
    pub value: Float,
    pub regime: Regime,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
struct AiryConstants {
    a1: Float,
    ai_prime_a1: Float,
    a1p: Float,
    ai_a1p: Float,
}

fn airy_constants(prec: u32) -> Result<AiryConstants, AsymError> {
    static CACHE: OnceLock<Mutex<HashMap<u32, AiryConstants>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().unwrap().get(&prec) {
        return Ok(c.clone());
    }
    let a1 = ai_root(1, false, prec)?;
    let a1p = ai_root(1, true, prec)?;
    let ai_prime_a1 = ai_prime(&Complex::with_val(prec, &a1)).real().clone();
    let ai_a1p = ai_general(0, &Complex::with_val(prec, &a1p)).real().clone();
    let c = AiryConstants { a1, ai_prime_a1, a1p, ai_a1p };
    cache.lock().unwrap().insert(prec, c.clone());
    Ok(c)
}

/// `lambda = n p` and `mu = (lambda - 1) n^{1/3}`.
pub fn lambda_mu(n: u32, p: &EdgeProb, prec: u32) -> (Float, Float) {
    let cube = Float::with_val(prec, n).cbrt();
    match p {
        EdgeProb::Window(mu) => {
            let mu = Float::with_val(prec, mu);
            (Float::with_val(prec, &mu / &cube) + 1u32, mu)
        }
        _ => {
            let lambda = p.to_float(n as u64, prec) * n;
            let mu = Float::with_val(prec, &lambda - 1u32) * &cube;
            (lambda, mu)
        }
    }
}

pub fn select_regime(n: u32, p: &EdgeProb, choice: RegimeChoice, prec: u32) -> Result<Regime, AsymError> {
    let (lambda, mu) = lambda_mu(n, p, prec);
    if lambda < 0 {
        return Err(AsymError::Invalid("lambda must be nonnegative"));
    }
    match choice {
        RegimeChoice::Auto => Ok(if mu.to_f64().abs() <= AUTO_CRITICAL_MU {
            Regime::Critical(mu)
        } else if lambda < 1 {
            Regime::Subcritical(lambda)
        } else {
            Regime::Supercritical(lambda)
        }),
        RegimeChoice::Critical => Ok(Regime::Critical(mu)),
        RegimeChoice::Subcritical if lambda < 1 => Ok(Regime::Subcritical(lambda)),
        RegimeChoice::Subcritical => Err(AsymError::Regime("subcritical formulas need lambda < 1")),
        RegimeChoice::Supercritical if lambda > 1 => Ok(Regime::Supercritical(lambda)),
        RegimeChoice::Supercritical => Err(AsymError::Regime("supercritical formulas need lambda > 1")),
    }
}

/// `(lambda^2 - 1)/(2 lambda) - log lambda`.
pub fn alpha(lambda: &Float) -> Result<Float, AsymError> {
    if *lambda <= 0 {
        return Err(AsymError::Invalid("alpha needs lambda > 0"));
    }
    let p = lambda.prec();
    let sq = Float::with_val(p, lambda.square_ref()) - 1u32;
    Ok(sq / Float::with_val(p, lambda * 2u32) - Float::with_val(p, lambda.ln_ref()))
}

/// `2^{-1/3} lambda^{-1/3} (lambda - 1)`.
pub fn beta(lambda: &Float) -> Float {
    let p = lambda.prec();
    pow2_frac(p, -1, 3) / Float::with_val(p, lambda.cbrt_ref()) * Float::with_val(p, lambda - 1u32)
}

/// `phi(0)`, the critical acyclic constant.
pub fn gamma1(prec: u32) -> Result<Float, AsymError> {
    Ok(varphi(&Float::new(prec))?)
}

/// `2^{-2/3}/Ai'(a_1) lambda^{5/6} e^{(lambda-1)/6}`.
pub fn gamma2(lambda: &Float) -> Result<Float, AsymError> {
    let p = lambda.prec();
    let c = airy_constants(p)?;
    let l56 = Float::with_val(p, lambda.pow(Float::with_val(p, 5) / 6u32));
    let e = (Float::with_val(p, lambda - 1u32) / 6u32).exp();
    Ok(pow2_frac(p, -2, 3) / c.ai_prime_a1 * l56 * e)
}

/// `-lambda^{1/2} e^{-(lambda-1)/6} / (2 a_1' Ai(a_1'))`.
pub fn sigma2(lambda: &Float) -> Result<Float, AsymError> {
    let p = lambda.prec();
    let c = airy_constants(p)?;
    let e = (-Float::with_val(p, lambda - 1u32) / 6u32).exp();
    let den = Float::with_val(p, &c.a1p * &c.ai_a1p) * 2u32;
    Ok(-(Float::with_val(p, lambda.sqrt_ref()) * e) / den)
}

/// `Ai(1 - 3r + d; a_1') / (a_1' Ai(a_1'))^2` with the sign `(-1)^{1+3r-d}`.
fn kernel_airy_ratio(r: u32, d: u32, prec: u32) -> Result<Float, AsymError> {
    let c = airy_constants(prec)?;
    let k = 1 - 3 * r as i64 + d as i64;
    let num = ai_general(k, &Complex::with_val(prec, &c.a1p)).real().clone();
    let den = Float::with_val(prec, &c.a1p * &c.ai_a1p).square();
    let v = num / den;
    Ok(if (1 + 3 * r as i64 - d as i64).rem_euclid(2) == 1 { -v } else { v })
}

fn check_kernel(r: u32, d: u32) -> Result<(), AsymError> {
    if r == 0 || d >= 2 * r {
        return Err(AsymError::Invalid("need r >= 1 and 0 <= d <= 2r - 1"));
    }
    Ok(())
}

/// Supercritical constant for one kernel of excess `r` and deficiency `d`.
pub fn sigma_rd(lambda: &Float, r: u32, d: u32) -> Result<Float, AsymError> {
    check_kernel(r, d)?;
    let p = lambda.prec();
    let pre = pow2_frac(p, -4 - 3 * r as i64 + d as i64, 3);
    let lp = Float::with_val(p, lambda.pow(Float::with_val(p, 1 + 2 * d) / 6u32));
    let e = (Float::with_val(p, 1u32 - Float::with_val(p, lambda)) / 6u32).exp();
    Ok(pre * Float::with_val(p, lambda - 1u32) * lp * e * kernel_airy_ratio(r, d, p)?)
}

/// `delta_1(lambda)`: `e^lambda` (D2), `e^{lambda + lambda^2/2}` (SD), 1 (MD).
pub fn delta1(lambda: &Float, model: ModelKind) -> Float {
    let p = lambda.prec();
    match model {
        ModelKind::MD => Float::with_val(p, 1u32),
        ModelKind::D2 => Float::with_val(p, lambda.exp_ref()),
        ModelKind::SD => (Float::with_val(p, lambda.square_ref()) / 2u32 + lambda).exp(),
    }
}

/// `delta_2(lambda)`: `e^{-lambda^2/4 + 3 lambda/2 - 1/4}` (D2),
/// `e^{-lambda^2/4 + 5 lambda/2 - 3/4}` (SD), 1 (MD).
pub fn delta2(lambda: &Float, model: ModelKind) -> Float {
    let p = lambda.prec();
    let (b, c) = match model {
        ModelKind::MD => return Float::with_val(p, 1u32),
        ModelKind::D2 => (Rational::from((3, 2)), Rational::from((-1, 4))),
        ModelKind::SD => (Rational::from((5, 2)), Rational::from((-3, 4))),
    };
    let quad = -Float::with_val(p, lambda.square_ref()) / 4u32;
    (quad + Float::with_val(p, lambda * Float::with_val(p, &b)) + Float::with_val(p, &c)).exp()
}

fn simple_tilt(lambda: &Float) -> Float {
    let p = lambda.prec();
    let quad = -Float::with_val(p, lambda.square_ref()) / 4u32;
    (quad + Float::with_val(p, lambda / 3u32) - Float::with_val(p, 12u32).recip()).exp()
}

/// `-sqrt(lambda)/(2 a_1' Ai(a_1')) e^{-lambda^2/4 + lambda/3 - 1/12}`.
pub fn omega_elem(lambda: &Float) -> Result<Float, AsymError> {
    let p = lambda.prec();
    let c = airy_constants(p)?;
    let den = Float::with_val(p, &c.a1p * &c.ai_a1p) * 2u32;
    Ok(-Float::with_val(p, lambda.sqrt_ref()) / den * simple_tilt(lambda))
}

/// Supercritical constant for one complex component of excess `r`
/// (simple and strict digraphs).
pub fn omega_r(lambda: &Float, r: u32) -> Result<Float, AsymError> {
    check_kernel(r, 0)?;
    let p = lambda.prec();
    let pre = pow2_frac(p, -4 - 3 * r as i64, 3);
    let l16 = Float::with_val(p, lambda.pow(Float::with_val(p, 6u32).recip()));
    Ok(pre * Float::with_val(p, lambda - 1u32) * l16 * kernel_airy_ratio(r, 0, p)? * simple_tilt(lambda))
}

/// `A_r` of the model's variant evaluated at `lambda`.
pub fn c_r(lambda: &Float, r: u32, model: ModelKind) -> Result<Float, AsymError> {
    let variant = match model {
        ModelKind::MD => StrongVariant::Multi,
        ModelKind::D2 => StrongVariant::Simple,
        ModelKind::SD => StrongVariant::Strict,
    };
    let a = a_r_polynomial(r, variant)?;
    let p = lambda.prec();
    let mut acc = Float::new(p);
    for c in a.coeffs.iter().rev() {
        acc *= lambda;
        acc += Float::with_val(p, c);
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantName {
    Alpha,
    Beta,
    Gamma1,
    Gamma2,
    Sigma2,
    SigmaRd { r: u32, d: u32 },
    Delta1,
    Delta2,
    OmegaElem,
    OmegaR(u32),
    CR(u32),
}

pub fn constant(name: ConstantName, lambda: &Float, model: ModelKind) -> Result<Float, AsymError> {
    match name {
        ConstantName::Alpha => alpha(lambda),
        ConstantName::Beta => Ok(beta(lambda)),
        ConstantName::Gamma1 => gamma1(lambda.prec()),
        ConstantName::Gamma2 => gamma2(lambda),
        ConstantName::Sigma2 => sigma2(lambda),
        ConstantName::SigmaRd { r, d } => sigma_rd(lambda, r, d),
        ConstantName::Delta1 => Ok(delta1(lambda, model)),
        ConstantName::Delta2 => Ok(delta2(lambda, model)),
        ConstantName::OmegaElem => omega_elem(lambda),
        ConstantName::OmegaR(r) => omega_r(lambda, r),
        ConstantName::CR(r) => c_r(lambda, r, model),
    }
}

/// `exp(-alpha n + a beta n^{1/3})` for an Airy zero `a`.
fn supercritical_exp(lambda: &Float, n: u32, zero: &Float) -> Result<Float, AsymError> {
    let p = lambda.prec();
    let cube = Float::with_val(p, n).cbrt();
    let e = -alpha(lambda)? * n + beta(lambda) * zero * cube;
    Ok(e.exp())
}

fn n_pow(n: u32, num: i64, den: i64, prec: u32) -> Float {
    Float::with_val(prec, n).pow(Float::with_val(prec, num) / den)
}

fn window_warning(n: u32, mu: &Float) -> Vec<String> {
    let bound = (n as f64).powf(1.0 / 12.0);
    if mu.to_f64().abs() > bound {
        vec![format!("critical formula applied with |mu| = {:.3} above n^(1/12) = {:.3}", mu.to_f64().abs(), bound)]
    } else {
        Vec::new()
    }
}

pub fn acyclic_asym(n: u32, p: &EdgeProb, model: ModelKind, choice: RegimeChoice, prec: u32) -> Result<AsymValue, AsymError> {
    let regime = select_regime(n, p, choice, prec)?;
    let mut warnings = Vec::new();
    let value = match &regime {
        Regime::Subcritical(l) => delta1(l, model) * Float::with_val(prec, 1u32 - Float::with_val(prec, l)),
        Regime::Critical(mu) => {
            warnings = window_warning(n, mu);
            let one = Float::with_val(prec, 1u32);
            delta1(&one, model) * varphi(mu)? * n_pow(n, -1, 3, prec)
        }
        Regime::Supercritical(l) => {
            if *l == 0 {
                return Err(AsymError::Regime("lambda = 0 is not supercritical"));
            }
            let c = airy_constants(prec)?;
            delta2(l, model) * gamma2(l)? * n_pow(n, -1, 3, prec) * supercritical_exp(l, n, &c.a1)?
        }
    };
    Ok(AsymValue { value, regime, warnings })
}

pub fn elementary_asym(n: u32, p: &EdgeProb, model: ModelKind, choice: RegimeChoice, prec: u32) -> Result<AsymValue, AsymError> {
    let regime = select_regime(n, p, choice, prec)?;
    let mut warnings = Vec::new();
    let value = match &regime {
        Regime::Subcritical(_) => Float::with_val(prec, 1u32),
        Regime::Critical(mu) => {
            warnings = window_warning(n, mu);
            elementary_critical(mu)?
        }
        Regime::Supercritical(l) => {
            let c = airy_constants(prec)?;
            let k = match model {
                ModelKind::MD => sigma2(l)?,
                ModelKind::D2 | ModelKind::SD => omega_elem(l)?,
            };
            k * supercritical_exp(l, n, &c.a1p)?
        }
    };
    Ok(AsymValue { value, regime, warnings })
}

/// One complex component: a given kernel (MD), an excess (D2/SD) or the
/// bicyclic case (all models).
pub fn one_complex_asym(
    n: u32,
    p: &EdgeProb,
    model: ModelKind,
    family: FamilySpec,
    choice: RegimeChoice,
    prec: u32,
) -> Result<AsymValue, AsymError> {
    let regime = select_regime(n, p, choice, prec)?;
    let mut warnings = Vec::new();
    if let Regime::Critical(mu) = &regime {
        warnings = window_warning(n, mu);
    }
    let value = match (family, model) {
        (FamilySpec::OneComplexKernel { r, d }, ModelKind::MD) => kernel_asym(n, r, d, &regime, prec)?,
        (FamilySpec::OneComplexExcess(r), ModelKind::D2 | ModelKind::SD) => excess_asym(n, r, model, &regime, prec)?,
        (FamilySpec::Bicyclic, ModelKind::D2 | ModelKind::SD) => excess_asym(n, 1, model, &regime, prec)?,
        (FamilySpec::Bicyclic, ModelKind::MD) => match &regime {
            // the cubic kernels and the double loop are of the same order here
            Regime::Subcritical(l) => {
                let one_minus = Float::with_val(prec, 1u32 - Float::with_val(prec, l));
                Float::with_val(prec, l.square_ref()) / (one_minus.pow(3u32) * 2u32) / n
            }
            Regime::Critical(mu) => airy_table_i(2, mu)? / 8u32,
            Regime::Supercritical(_) => kernel_asym(n, 1, 0, &regime, prec)?,
        },
        _ => return Err(AsymError::Invalid("family not available for this model")),
    };
    Ok(AsymValue { value, regime, warnings })
}

/// Leading term for one given kernel; the bicyclic supercritical case
/// reuses it with the six cubic kernels folded in.
fn kernel_asym(n: u32, r: u32, d: u32, regime: &Regime, prec: u32) -> Result<Float, AsymError> {
    check_kernel(r, d)?;
    let fact = Float::with_val(prec, factorial(2 * r - d));
    let e = (3 * r - d) as i32;
    let v = match regime {
        Regime::Subcritical(l) => {
            let ratio = Float::with_val(prec, l / Float::with_val(prec, 1u32 - Float::with_val(prec, l)));
            ratio.pow(e) * n_pow(n, -(r as i64), 1, prec)
        }
        Regime::Critical(mu) => phi_rd(r as i64, d as i64, mu)? * n_pow(n, -(d as i64), 3, prec),
        Regime::Supercritical(l) => {
            let c = airy_constants(prec)?;
            sigma_rd(l, r, d)? * n_pow(n, 1 - d as i64, 3, prec) * supercritical_exp(l, n, &c.a1p)?
        }
    };
    Ok(v / fact)
}

fn excess_asym(n: u32, r: u32, model: ModelKind, regime: &Regime, prec: u32) -> Result<Float, AsymError> {
    let s = Float::with_val(prec, &s_r(r)?);
    Ok(match regime {
        Regime::Subcritical(l) => {
            let one_minus = Float::with_val(prec, 1u32 - Float::with_val(prec, l));
            c_r(l, r, model)? * Float::with_val(prec, l.pow(r)) / one_minus.pow(3 * r) * n_pow(n, -(r as i64), 1, prec)
        }
        Regime::Critical(mu) => s * phi_rd(r as i64, 0, mu)?,
        Regime::Supercritical(l) => {
            let c = airy_constants(prec)?;
            s * n_pow(n, 1, 3, prec) * omega_r(l, r)? * supercritical_exp(l, n, &c.a1p)?
        }
    })
}

pub fn probability_asym(
    family: FamilySpec,
    model: ModelKind,
    n: u32,
    p: &EdgeProb,
    choice: RegimeChoice,
    prec: u32,
) -> Result<AsymValue, AsymError> {
    match family {
        FamilySpec::Acyclic => acyclic_asym(n, p, model, choice, prec),
        FamilySpec::Elementary => elementary_asym(n, p, model, choice, prec),
        _ => one_complex_asym(n, p, model, family, choice, prec),
    }
}

/// Critical-window limit as `n -> infinity` (the limit row of the
/// probability tables). Acyclic values are rescaled by `n^{1/3}`.
pub fn window_limit(family: FamilySpec, model: ModelKind, mu: &Float) -> Result<Float, AsymError> {
    let p = mu.prec();
    let one = Float::with_val(p, 1u32);
    Ok(match family {
        FamilySpec::Acyclic => delta1(&one, model) * varphi(mu)?,
        FamilySpec::Elementary => elementary_critical(mu)?,
        FamilySpec::Bicyclic if model == ModelKind::MD => airy_table_i(2, mu)? / 8u32,
        FamilySpec::Bicyclic => Float::with_val(p, &s_r(1)?) * phi_rd(1, 0, mu)?,
        FamilySpec::OneComplexExcess(r) if model != ModelKind::MD => Float::with_val(p, &s_r(r)?) * phi_rd(r as i64, 0, mu)?,
        FamilySpec::OneComplexKernel { r, d: 0 } if model == ModelKind::MD => {
            phi_rd(r as i64, 0, mu)? / Float::with_val(p, factorial(2 * r))
        }
        _ => return Err(AsymError::Invalid("no finite critical limit for this family and model")),
    })
}

#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub n: u32,
    pub exact: Float,
    pub asym: Float,
    /// `log |exact/asym - 1|`.
    pub log_abs_ratio_minus_one: f64,
}

#[derive(Debug, Clone)]
pub struct Convergence {
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of `log |ratio - 1|` against `log n`.
    pub slope: f64,
    pub warnings: Vec<String>,
}

/// Exact against asymptotic probabilities at `p = lambda/n`.
pub fn convergence(family: FamilySpec, model: ModelKind, lambda: &Rational, ns: &[u32], prec: u32) -> Result<Convergence, AsymError> {
    let mut warnings = Vec::new();
    let gap = (lambda.to_f64() - 1.0).abs();
    if gap < 0.1 {
        warnings.push(format!("lambda = {} is close to 1; the fixed-lambda formulas converge slowly", lambda.to_f64()));
    }
    let choice = if *lambda < 1 { RegimeChoice::Subcritical } else { RegimeChoice::Supercritical };
    let p = EdgeProb::Scaled(lambda.clone());
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let exact = probability_exact(family, model, n, &p, 12)?.value;
        let asym = probability_asym(family, model, n, &p, choice, prec)?.value;
        let ratio = Float::with_val(prec, &exact / &asym) - 1u32;
        let l = Float::with_val(prec, ratio.abs_ref()).ln().to_f64();
        rows.push(ConvergenceRow { n, exact, asym, log_abs_ratio_minus_one: l });
    }
    let slope = fit_slope(&rows.iter().map(|r| ((r.n as f64).ln(), r.log_abs_ratio_minus_one)).collect::<Vec<_>>());
    Ok(Convergence { rows, slope, warnings })
}

fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (m * sxy - sx * sy) / (m * sxx - sx * sx)
}
