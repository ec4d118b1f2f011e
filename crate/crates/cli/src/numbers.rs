use std::str::FromStr;

use dphase_core::families::{to_decimals, to_digits};
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::CliError;

/// Exact value of a decimal (`0.01`, `-2.5e-3`) or fraction (`1/3`) literal.
pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let bad = || CliError::Usage(format!("cannot read '{s}' as a number"));
    let t = s.trim();
    if t.contains('/') {
        return Rational::from_str(t).map_err(|_| bad());
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{int}{frac}");
    let digits = Integer::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| bad())?;
    let shift = exp - frac.len() as i32;
    let ten = Rational::from(10);
    let scale = if shift >= 0 { Rational::from(ten.pow(shift as u32)) } else { Rational::from(ten.pow(shift)) };
    let v = Rational::from(digits) * scale;
    Ok(if neg { -v } else { v })
}

pub fn float_at(r: &Rational, prec: u32) -> Float {
    Float::with_val(prec, r)
}

/// A value recomputed at two precisions, with the gap as its error bound.
#[derive(Debug, Clone)]
pub struct Certified {
    pub value: Float,
    pub err: Float,
    pub digits: u32,
    pub prec: u32,
}

impl Certified {
    pub fn exact(value: Float, digits: u32) -> Self {
        let prec = value.prec();
        Certified { value, err: Float::new(prec), digits, prec }
    }

    /// Upper end of the error interval in magnitude, so that values sitting
    /// on a digit boundary (like 1 or 1/8) are not truncated to 0.99...
    fn nudged(&self) -> Float {
        let p = self.value.prec();
        if self.value.is_sign_negative() {
            Float::with_val(p, &self.value - &self.err)
        } else {
            Float::with_val(p, &self.value + &self.err)
        }
    }

    pub fn text(&self) -> String {
        to_digits(&self.nudged(), self.digits)
    }

    pub fn decimals(&self, places: u32) -> String {
        to_decimals(&self.nudged(), places)
    }
}

/// Certifies `hi` against a lower-precision `lo`; `extra` is an error
/// bound both runs share (a quadrature tolerance, say) that their gap
/// cannot reveal.
pub fn from_pair(lo: &Float, hi: Float, extra: f64, target: u32, prec: u32) -> Certified {
    let p = hi.prec();
    let err = Float::with_val(p, lo - &hi).abs() + extra;
    let digits = if err.is_zero() {
        target
    } else if hi.is_zero() {
        0
    } else {
        let rel = Float::with_val(p, &err / hi.clone().abs()).to_f64();
        let k = (-rel.log10()).floor() - 1.0;
        if k < 0.0 {
            0
        } else {
            (k as u32).min(target)
        }
    };
    Certified { value: hi, err, digits, prec }
}

/// Runs `f` at `prec` and at twice that, escalating a few times while the
/// two runs agree on fewer than `target` significant digits.
pub fn certify<F>(prec: u32, target: u32, mut f: F) -> Result<(Certified, Vec<String>), CliError>
where
    F: FnMut(u32) -> Result<Float, CliError>,
{
    certify_with_err(prec, target, |p| Ok((f(p)?, 0.0)))
}

/// As [`certify`], for evaluations that also report their own error bound.
pub fn certify_with_err<F>(prec: u32, target: u32, mut f: F) -> Result<(Certified, Vec<String>), CliError>
where
    F: FnMut(u32) -> Result<(Float, f64), CliError>,
{
    let mut prec = prec;
    let mut lo = f(prec)?.0;
    let mut last = None;
    for _ in 0..4 {
        let (hi, extra) = f(2 * prec)?;
        let c = from_pair(&lo, hi.clone(), extra, target, 2 * prec);
        if c.digits >= target {
            return Ok((c, Vec::new()));
        }
        prec *= 2;
        last = Some(c);
        lo = hi;
    }
    match last {
        Some(c) if c.digits > 0 => {
            let w = format!("only {} of {target} digits certified at {} bits", c.digits, c.prec);
            Ok((c, vec![w]))
        }
        _ => Err(CliError::Numerical(format!("no digits certified up to {prec} bits"))),
    }
}

/// Complex literal `re` or `re,im`.
pub fn parse_complex(s: &str, prec: u32) -> Result<Complex, CliError> {
    let (re, im) = match s.split_once(',') {
        Some((a, b)) => (parse_rational(a)?, parse_rational(b)?),
        None => (parse_rational(s)?, Rational::new()),
    };
    Ok(Complex::with_val(prec, (float_at(&re, prec), float_at(&im, prec))))
}
