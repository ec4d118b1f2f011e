//! Integrals along a vertical line `s = theta + i t` of
//! `exp(-mu s - mu^3/6) * prod Ai(k; -2^{1/3} s)^p / prod Ai(k; -2^{1/3} s)^q`,
//! and residue-sum alternatives for two of them.
//!
//! Every named quantity here is a fixed [`AiryKernelSpec`] fed to one
//! quadrature engine.

use crate::airy::{ai_general_many, ai_root, AiryError, AiryOrder};
use crate::quadrature::QuadratureError;
use crate::scalar::{log2_abs_c, pow2_frac};
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IntegralError {
    #[error("integrand does not decay: net denominator power is {0}")]
    NonDecaying(i64),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Airy(#[from] AiryError),
    #[error("imaginary part {imag:e} exceeds tolerance for a real-valued integral")]
    NotReal { imag: f64 },
    #[error("residue series is only used for mu > 0")]
    NonPositiveMu,
    #[error("invalid kernel: excess {r}, deficiency {d}")]
    BadKernel { r: i64, d: i64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AiryKernelSpec {
    /// `(order, power)` factors in the numerator.
    pub numer: Vec<(AiryOrder, u32)>,
    pub denom: Vec<(AiryOrder, u32)>,
    pub mu: Float,
    pub prefactor: Complex,
    /// Real part `theta` of the integration line; `None` picks
    /// [`auto_line`] for this `mu`.
    pub line_offset: Option<f64>,
}

impl AiryKernelSpec {
    pub fn new(numer: Vec<(AiryOrder, u32)>, denom: Vec<(AiryOrder, u32)>, mu: Float, prefactor: Float) -> Self {
        let prec = mu.prec();
        AiryKernelSpec { numer, denom, mu, prefactor: Complex::with_val(prec, prefactor), line_offset: None }
    }

    fn net_decay(&self) -> i64 {
        let d: i64 = self.denom.iter().map(|&(_, p)| p as i64).sum();
        let n: i64 = self.numer.iter().map(|&(_, p)| p as i64).sum();
        d - n
    }

    fn orders(&self) -> impl Iterator<Item = AiryOrder> + '_ {
        self.numer.iter().chain(self.denom.iter()).map(|&(k, _)| k)
    }

    pub fn line(&self) -> f64 {
        self.line_offset.unwrap_or_else(|| auto_line(self.mu.to_f64()))
    }
}

/// Integration line `Re s = theta`. For `mu < 0` the integrand has a saddle
/// near `s = -mu^2/2`; passing through it avoids cancelling a factor
/// `e^{|mu|^3/6}`. For `mu >= 0` the line stays left of the Airy zeros,
/// which sit at `s > 0`.
pub fn auto_line(mu: f64) -> f64 {
    if mu < 0.0 {
        -(0.5f64).max(mu * mu / 2.0)
    } else {
        0.0
    }
}

#[derive(Debug, Clone)]
pub struct ContourValue {
    pub value: Complex,
    pub error: f64,
}

impl ContourValue {
    /// Real part, after checking that the imaginary part is below `tol`
    /// relative to the value.
    pub fn real_checked(&self, tol: f64) -> Result<Float, IntegralError> {
        let im = self.value.imag().to_f64().abs();
        let re = self.value.real().to_f64().abs();
        if im > tol * re.max(1e-300) {
            return Err(IntegralError::NotReal { imag: im });
        }
        Ok(self.value.real().clone())
    }
}

struct Integrand<'a> {
    specs: &'a [AiryKernelSpec],
    orders: Vec<AiryOrder>,
    theta: Float,
    c13: Float,
    mus: Vec<Float>,
    tilts: Vec<Float>,
    p: u32,
}

impl<'a> Integrand<'a> {
    fn new(specs: &'a [AiryKernelSpec], theta: f64, p: u32) -> Self {
        let mut orders = BTreeSet::new();
        for s in specs {
            orders.extend(s.orders());
        }
        let mus: Vec<Float> = specs.iter().map(|s| Float::with_val(p, &s.mu)).collect();
        let tilts = mus.iter().map(|m| Float::with_val(p, m.clone().pow(3u32)) / 6u32).collect();
        Integrand {
            specs,
            orders: orders.into_iter().collect(),
            theta: Float::with_val(p, theta),
            c13: pow2_frac(p, 1, 3),
            mus,
            tilts,
            p,
        }
    }

    /// Integrand without the prefactor at `s = theta + i t`.
    fn eval(&self, t: &Float) -> Vec<Complex> {
        let p = self.p;
        let s = Complex::with_val(p, (&self.theta, t));
        let z = Complex::with_val(p, &s * &self.c13) * -1i32;
        let vals = ai_general_many(&self.orders, &z);
        let at = |k: AiryOrder| &vals[self.orders.binary_search(&k).unwrap()];
        self.specs
            .iter()
            .enumerate()
            .map(|(i, spec)| {
                let expo = Complex::with_val(p, -Complex::with_val(p, &s * &self.mus[i])) - &self.tilts[i];
                let mut v = expo.exp();
                for &(k, pw) in &spec.numer {
                    for _ in 0..pw {
                        v *= at(k);
                    }
                }
                for &(k, pw) in &spec.denom {
                    for _ in 0..pw {
                        v /= at(k);
                    }
                }
                v
            })
            .collect()
    }
}

/// Integrand value (prefactor included) at `s = line + i t`.
pub fn integrand_at(spec: &AiryKernelSpec, t: f64) -> Complex {
    let p = spec.mu.prec() + 32;
    let specs = std::slice::from_ref(spec);
    let f = Integrand::new(specs, spec.line(), p);
    let v = f.eval(&Float::with_val(p, t)).pop().unwrap();
    Complex::with_val(spec.mu.prec(), v * &spec.prefactor)
}

/// `(1/(2 pi i)) int spec ds` along a vertical line, for each spec.
///
/// Specs on one line share nodes, so the Airy factors are computed once per
/// node. For real `mu` the integrand (without prefactor) satisfies
/// `f(-t) = conj f(t)`, so only `t >= 0` is sampled, with the trapezoid
/// rule: the integrand is analytic in a strip around the line and decays
/// like `exp(-(2/3) D |t|^{3/2})`, which makes the rule converge
/// geometrically in `1/h`.
pub fn contour_integral_batch(specs: &[AiryKernelSpec], tol: f64) -> Result<Vec<ContourValue>, IntegralError> {
    if specs.is_empty() {
        return Ok(Vec::new());
    }
    let mut out: Vec<Option<ContourValue>> = vec![None; specs.len()];
    // group by line
    let mut lines: Vec<f64> = specs.iter().map(|s| s.line()).collect();
    lines.sort_by(|a, b| a.partial_cmp(b).unwrap());
    lines.dedup();
    for line in lines {
        let idx: Vec<usize> = (0..specs.len()).filter(|&i| specs[i].line() == line).collect();
        let group: Vec<AiryKernelSpec> = idx.iter().map(|&i| specs[i].clone()).collect();
        let vals = integrate_line(&group, line, tol)?;
        for (i, v) in idx.into_iter().zip(vals) {
            out[i] = Some(v);
        }
    }
    Ok(out.into_iter().map(|v| v.unwrap()).collect())
}

fn integrate_line(specs: &[AiryKernelSpec], theta: f64, tol: f64) -> Result<Vec<ContourValue>, IntegralError> {
    let wprec = specs.iter().map(|s| s.mu.prec()).max().unwrap();
    for s in specs {
        let d = s.net_decay();
        if d < 1 {
            return Err(IntegralError::NonDecaying(d));
        }
    }
    let p = wprec + 32;
    let f = Integrand::new(specs, theta, p);
    let width = specs.len();
    let log_tol = tol.ln();

    // coarse scan at step h0 fixes the truncation point
    let h0 = 0.5f64;
    let mut samples: Vec<Vec<Complex>> = Vec::new();
    let mut peak = vec![f64::NEG_INFINITY; width];
    let mut quiet = 0;
    let mut j = 0usize;
    loop {
        let t = Float::with_val(p, h0 * j as f64);
        let v = f.eval(&t);
        let logs: Vec<f64> = v.iter().map(|x| log2_abs_c(x) * std::f64::consts::LN_2).collect();
        for (pk, l) in peak.iter_mut().zip(&logs) {
            *pk = pk.max(*l);
        }
        samples.push(v);
        let small = logs.iter().zip(&peak).all(|(l, pk)| *l < pk + log_tol - 12.0);
        quiet = if small { quiet + 1 } else { 0 };
        if quiet >= 3 && j >= 4 {
            break;
        }
        j += 1;
        if h0 * j as f64 > 400.0 {
            return Err(QuadratureError::NotConverged { target: tol, achieved: f64::INFINITY }.into());
        }
    }
    let n0 = samples.len() - 1;
    let t_end = h0 * n0 as f64;

    let zero = Complex::new(p);
    let mut sums = vec![zero; width];
    for (k, v) in samples.iter().enumerate() {
        for (s, x) in sums.iter_mut().zip(v) {
            if k == 0 {
                *s += Complex::with_val(p, x / 2u32);
            } else {
                *s += x;
            }
        }
    }
    let estimate = |sums: &[Complex], h: f64| -> Vec<Float> {
        sums.iter().map(|s| Float::with_val(p, s.real() * h)).collect()
    };
    let mut h = h0;
    let mut prev = estimate(&sums, h);
    let mut err = f64::INFINITY;
    for level in 0..10 {
        let last_err = err;
        h /= 2.0;
        let count = (t_end / h).round() as usize;
        let mut i = 1;
        while i <= count {
            let v = f.eval(&Float::with_val(p, h * i as f64));
            for (s, x) in sums.iter_mut().zip(v) {
                *s += x;
            }
            i += 2;
        }
        let cur = estimate(&sums, h);
        err = 0.0;
        let mut ok = true;
        for (c, q) in cur.iter().zip(&prev) {
            let diff = Float::with_val(p, c - q).abs().to_f64();
            let mag = c.to_f64().abs().max(1e-300);
            err = err.max(diff / mag);
            if !(diff <= tol * mag) {
                ok = false;
            }
        }
        prev = cur;
        // successive differences stop shrinking once they reach rounding level
        let floor = level >= 3 && err > last_err / 4.0 && err < tol.sqrt();
        if ok || floor {
            // int_{-inf}^{inf} = 2 Re int_0^inf; then divide by 2 pi
            let pi = Float::with_val(p, Constant::Pi);
            return Ok(prev
                .into_iter()
                .zip(specs)
                .map(|(v, spec)| ContourValue {
                    value: Complex::with_val(wprec, Complex::with_val(p, &spec.prefactor) * (v / &pi)),
                    error: err,
                })
                .collect());
        }
    }
    Err(QuadratureError::NotConverged { target: tol, achieved: err }.into())
}

pub fn contour_integral(spec: &AiryKernelSpec, tol: f64) -> Result<ContourValue, IntegralError> {
    Ok(contour_integral_batch(std::slice::from_ref(spec), tol)?.pop().unwrap())
}

/// Tolerance used by the named wrappers at precision `prec`.
pub fn default_tol(prec: u32) -> f64 {
    (2f64).powi(-((prec as f64 * 0.6) as i32).clamp(24, 300))
}

fn eval_real(spec: &AiryKernelSpec) -> Result<Float, IntegralError> {
    let tol = default_tol(spec.mu.prec());
    contour_integral(spec, tol)?.real_checked(tol.sqrt())
}

pub fn varphi_spec(mu: &Float) -> AiryKernelSpec {
    AiryKernelSpec::new(vec![], vec![(0, 1)], mu.clone(), pow2_frac(mu.prec(), -1, 3))
}

/// `phi(mu) = 2^{-1/3} e^{-mu^3/6} (1/(2 pi i)) int e^{-mu s}/Ai(-2^{1/3} s) ds`.
pub fn varphi(mu: &Float) -> Result<Float, IntegralError> {
    eval_real(&varphi_spec(mu))
}

pub fn elementary_critical_spec(mu: &Float) -> AiryKernelSpec {
    AiryKernelSpec::new(vec![], vec![(1, 1)], mu.clone(), -pow2_frac(mu.prec(), -2, 3))
}

/// Critical-window limit of the probability of being elementary.
pub fn elementary_critical(mu: &Float) -> Result<Float, IntegralError> {
    eval_real(&elementary_critical_spec(mu))
}

pub fn phi_rd_spec(r: i64, d: i64, mu: &Float) -> Result<AiryKernelSpec, IntegralError> {
    if r < 1 || d < 0 || d > 2 * r - 1 {
        return Err(IntegralError::BadKernel { r, d });
    }
    let prec = mu.prec();
    // (-1)^{1+3r-d} 2^{-2/3-r+d/3}
    let mut pre = pow2_frac(prec, -2 - 3 * r + d, 3);
    if (1 + 3 * r - d).rem_euclid(2) == 1 {
        pre = -pre;
    }
    Ok(AiryKernelSpec::new(vec![(1 - 3 * r + d, 1)], vec![(1, 2)], mu.clone(), pre))
}

/// Critical function attached to a kernel of excess `r` and deficiency `d`.
pub fn phi_rd(r: i64, d: i64, mu: &Float) -> Result<Float, IntegralError> {
    eval_real(&phi_rd_spec(r, d, mu)?)
}

pub fn table_i_spec(n: i64, mu: &Float) -> AiryKernelSpec {
    let mut pre = pow2_frac(mu.prec(), 1, 3);
    if n.rem_euclid(2) == 1 {
        pre = -pre;
    }
    AiryKernelSpec::new(vec![(-n, 1)], vec![(1, 2)], mu.clone(), pre)
}

/// `I(n, mu) = (-1)^n/(2 pi i) int Ai(-n; tau)/Ai'(tau)^2 e^{2^{-1/3} mu tau - mu^3/6} d tau`.
pub fn airy_table_i(n: i64, mu: &Float) -> Result<Float, IntegralError> {
    eval_real(&table_i_spec(n, mu))
}

/// `I(n, mu)` on a grid, indexed `[n][mu]`, in one quadrature pass.
pub fn airy_table_i_grid(ns: &[i64], mus: &[Float]) -> Result<Vec<Vec<Float>>, IntegralError> {
    let specs: Vec<AiryKernelSpec> = ns.iter().flat_map(|&n| mus.iter().map(move |m| table_i_spec(n, m))).collect();
    let prec = mus.iter().map(|m| m.prec()).max().unwrap_or(128);
    let tol = default_tol(prec);
    let vals = contour_integral_batch(&specs, tol)?;
    let mut out = Vec::with_capacity(ns.len());
    let mut it = vals.into_iter();
    for _ in ns {
        let mut row = Vec::with_capacity(mus.len());
        for _ in mus {
            row.push(it.next().unwrap().real_checked(tol.sqrt())?);
        }
        out.push(row);
    }
    Ok(out)
}

/// `(1/(2 pi i)) int Ai(-2; tau)/Ai'(tau)^2 d tau`, equal to one.
pub fn identity_minus_two_spec(prec: u32) -> AiryKernelSpec {
    AiryKernelSpec::new(vec![(-2, 1)], vec![(1, 2)], Float::new(prec), pow2_frac(prec, 1, 3))
}

/// `(1/(2 pi i)) int Ai(x)^{-2} dx`, equal to one.
pub fn knessl_spec(prec: u32) -> AiryKernelSpec {
    AiryKernelSpec::new(vec![], vec![(0, 2)], Float::new(prec), pow2_frac(prec, 1, 3))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueKind {
    Acyclic,
    Elementary,
}

#[derive(Debug, Clone)]
pub struct ResidueSum {
    pub value: Float,
    pub first_term: Float,
    /// Size of the last included term; an empirical, not rigorous, bound.
    pub truncation_estimate: f64,
}

/// Residue expansion of `varphi` (acyclic) or `elementary_critical`
/// (elementary) over the first `terms` Airy zeros.
pub fn residue_sum(kind: ResidueKind, mu: &Float, terms: u32) -> Result<ResidueSum, IntegralError> {
    if !mu.is_sign_positive() || mu.is_zero() {
        return Err(IntegralError::NonPositiveMu);
    }
    let prec = mu.prec();
    let c = pow2_frac(prec, -1, 3);
    let tilt = Float::with_val(prec, -Float::with_val(prec, mu.clone().pow(3u32)) / 6u32).exp();
    let mut sum = Float::new(prec);
    let mut first = Float::new(prec);
    let mut last = 0f64;
    for j in 1..=terms {
        let term = match kind {
            ResidueKind::Acyclic => {
                let a = ai_root(j, false, prec)?;
                let d = ai_general_many(&[1], &Complex::with_val(prec, &a)).pop().unwrap();
                let e = (Float::with_val(prec, &a * mu) * &c).exp();
                e / d.real()
            }
            ResidueKind::Elementary => {
                let a = ai_root(j, true, prec)?;
                let v = ai_general_many(&[0], &Complex::with_val(prec, &a)).pop().unwrap();
                let e = (Float::with_val(prec, &a * mu) * &c).exp();
                e / Float::with_val(prec, &a * v.real())
            }
        };
        if j == 1 {
            first = term.clone();
        }
        last = term.to_f64().abs();
        sum += &term;
    }
    let scale = match kind {
        ResidueKind::Acyclic => pow2_frac(prec, -2, 3) * &tilt,
        ResidueKind::Elementary => -Float::with_val(prec, &tilt / 2u32),
    };
    Ok(ResidueSum {
        value: Float::with_val(prec, &sum * &scale),
        first_term: Float::with_val(prec, &first * &scale),
        truncation_estimate: last * scale.to_f64().abs(),
    })
}
