use std::cell::RefCell;

use dphase_core::airy::{ai_general, ai_root, AiryError};
use dphase_core::airy_integrals::{
    airy_table_i, contour_integral, contour_integral_batch, default_tol, elementary_critical, identity_minus_two_spec, knessl_spec, phi_rd,
    residue_sum, table_i_spec, varphi, IntegralError, ResidueKind,
};
use dphase_core::asymptotics::{self, probability_asym, window_limit, AsymError, RegimeChoice};
use dphase_core::deformed_exp::{find_root, phi_eval, root_asymptotic, DeformedExpError, EntireFnSpec, GGFKind};
use dphase_core::families::{probability_exact, EdgeProb, FamilyError, FamilySpec, ModelKind};
use dphase_core::oracle::{census, exact_poly, md_probability_capped, required_cap, OracleError};
use dphase_core::strong::{a_r_polynomial, e_r, s_r, StrongError, StrongVariant};
use rug::ops::Pow;
use rug::{Complex, Float, Rational};
use serde_json::{json, Value};

use crate::numbers::{certify, certify_with_err, float_at, from_pair, parse_complex, parse_rational, Certified};
use crate::output::{emit_record, emit_table, Format, Record, Table};
use crate::{CliConfig, CliError, InnerFn, IntegralKind, Method, Model, RegimeArg, TableId, Variant, WeightKind};

fn usage(m: impl Into<String>) -> CliError {
    CliError::Usage(m.into())
}

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::NoConvergence { .. } => numerical(e),
            _ => usage(e.to_string()),
        }
    }
}

impl From<AsymError> for CliError {
    fn from(e: AsymError) -> Self {
        match e {
            AsymError::Family(f) => f.into(),
            AsymError::Integral(i) => i.into(),
            AsymError::Airy(a) => a.into(),
            AsymError::Regime(_) | AsymError::Invalid(_) | AsymError::Strong(_) => usage(e.to_string()),
        }
    }
}

impl From<IntegralError> for CliError {
    fn from(e: IntegralError) -> Self {
        match e {
            IntegralError::NonDecaying(_) | IntegralError::NonPositiveMu | IntegralError::BadKernel { .. } => {
                usage(e.to_string())
            }
            _ => numerical(e),
        }
    }
}

impl From<AiryError> for CliError {
    fn from(e: AiryError) -> Self {
        match e {
            AiryError::BadIndex => usage(e.to_string()),
            _ => numerical(e),
        }
    }
}

impl From<DeformedExpError> for CliError {
    fn from(e: DeformedExpError) -> Self {
        match e {
            DeformedExpError::NonPositiveW | DeformedExpError::Regime(_) | DeformedExpError::Unsupported(_) => {
                usage(e.to_string())
            }
            _ => numerical(e),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        usage(e.to_string())
    }
}

impl From<StrongError> for CliError {
    fn from(e: StrongError) -> Self {
        usage(e.to_string())
    }
}

fn model_kind(m: Model) -> ModelKind {
    match m {
        Model::Md => ModelKind::MD,
        Model::D2 => ModelKind::D2,
        Model::Sd => ModelKind::SD,
    }
}

fn model_name(m: Model) -> &'static str {
    match m {
        Model::Md => "md",
        Model::D2 => "d2",
        Model::Sd => "sd",
    }
}

pub fn parse_family(s: &str) -> Result<FamilySpec, CliError> {
    let parts: Vec<&str> = s.split([':', '-']).collect();
    let num = |t: &str| t.parse::<u32>().map_err(|_| usage(format!("bad number '{t}' in family '{s}'")));
    Ok(match parts.as_slice() {
        ["acyclic"] => FamilySpec::Acyclic,
        ["elementary"] => FamilySpec::Elementary,
        ["bicyclic"] => FamilySpec::Bicyclic,
        ["excess", r] => FamilySpec::OneComplexExcess(num(r)?),
        ["kernel", r, d] => FamilySpec::OneComplexKernel { r: num(r)?, d: num(d)? },
        _ => return Err(usage(format!("unknown family '{s}'; expected acyclic, elementary, bicyclic, excess:R or kernel:R:D"))),
    })
}

fn inner_fn(f: InnerFn) -> EntireFnSpec {
    match f {
        InnerFn::One => EntireFnSpec::One,
        InnerFn::Exp1 => EntireFnSpec::ExpCk(1),
        InnerFn::Exp2 => EntireFnSpec::ExpCk(2),
    }
}

fn ggf_kind(k: WeightKind) -> GGFKind {
    match k {
        WeightKind::Multi => GGFKind::Multigraphic,
        WeightKind::Simple => GGFKind::SimpleGraphic,
    }
}

fn finish_record(cfg: &CliConfig, r: Record) -> Result<Vec<String>, CliError> {
    emit_record(&r, cfg.format_or(Format::Json))?;
    Ok(r.warnings)
}

fn finish_table(cfg: &CliConfig, t: Table) -> Result<Vec<String>, CliError> {
    emit_table(&t, cfg.format_or(Format::Csv))?;
    Ok(t.warnings)
}

fn with_value(r: Record, c: &Certified) -> Record {
    r.field("value", c.text()).field("digits", c.digits).field("working_prec", c.prec)
}

/// Absolute quadrature tolerance: the configured one, or a little below the
/// requested digits, but never finer than the working precision supports.
fn quad_tol(cfg: &CliConfig, prec: u32, digits: u32) -> f64 {
    cfg.quadrature_tol.unwrap_or_else(|| default_tol(prec).max(10f64.powi(-(digits as i32) - 14)))
}

/// Exact probability, certified by the library's two-precision protocol.
fn exact_probability(fam: FamilySpec, model: ModelKind, n: u32, ep: &EdgeProb, digits: u32) -> Result<Certified, CliError> {
    let v = probability_exact(fam, model, n, ep, digits + 2)?;
    let p = v.value.prec();
    let err = Float::with_val(p, v.value.abs_ref()) * Float::with_val(p, 10u32).pow(-((digits + 2) as i32));
    Ok(Certified { value: v.value, err, digits, prec: v.working_prec })
}

pub fn prob(
    cfg: &CliConfig,
    family: &str,
    model: Model,
    n: u32,
    edge: [Option<String>; 3],
    method: Method,
    regime: RegimeArg,
) -> Result<Vec<String>, CliError> {
    let fam = parse_family(family)?;
    let mk = model_kind(model);
    if n == 0 {
        return Err(usage("n must be positive"));
    }
    let [p, lambda, mu] = edge;
    let (ep, key, raw) = match (p, lambda, mu) {
        (Some(s), None, None) => (EdgeProb::Fixed(parse_rational(&s)?), "p", s),
        (None, Some(s), None) => (EdgeProb::Scaled(parse_rational(&s)?), "lambda", s),
        (None, None, Some(s)) => (EdgeProb::Window(parse_rational(&s)?), "mu", s),
        _ => return Err(usage("give exactly one of --p, --lambda, --mu")),
    };
    let mut rec = Record::new("prob")
        .input("family", family)
        .input("model", model_name(model))
        .input("n", n)
        .input(key, raw);
    let digits = cfg.target_digits;
    let prec = cfg.precision_bits;
    match method {
        Method::Exact => {
            if n > cfg.series_order_cap {
                return Err(usage(format!("n = {n} exceeds the series order cap {}", cfg.series_order_cap)));
            }
            let c = exact_probability(fam, mk, n, &ep, digits)?;
            rec = with_value(rec, &c).field("method", "exact");
            if fam == FamilySpec::Acyclic {
                let cube = Float::with_val(c.prec, n).cbrt();
                let scaled = Certified {
                    value: Float::with_val(c.prec, &c.value * &cube),
                    err: Float::with_val(c.prec, &c.err * &cube),
                    digits,
                    prec: c.prec,
                };
                rec = rec.field("rescaled_value", scaled.text());
            }
        }
        Method::Asym => {
            let choice = match regime {
                RegimeArg::Auto => RegimeChoice::Auto,
                RegimeArg::Subcritical => RegimeChoice::Subcritical,
                RegimeArg::Critical => RegimeChoice::Critical,
                RegimeArg::Supercritical => RegimeChoice::Supercritical,
            };
            let last = RefCell::new(None);
            let (c, mut warn) = certify(prec, digits, |pr| {
                let v = probability_asym(fam, mk, n, &ep, choice, pr)?;
                let out = v.value.clone();
                *last.borrow_mut() = Some(v);
                Ok(out)
            })?;
            let v = last.into_inner().expect("evaluated at least once");
            warn.extend(v.warnings);
            rec = with_value(rec, &c).field("method", "asym").field("regime", v.regime.name());
            rec.warnings = warn;
        }
        Method::Oracle => match mk {
            ModelKind::MD => {
                if n > 3 {
                    return Err(usage("the multidigraph oracle enumerates n <= 3 only"));
                }
                let pf = ep.to_float(n as u64, prec);
                let (v, bound) = md_probability_capped(n as usize, &pf, fam, required_cap(fam))?;
                let bound = bound.to_f64();
                let c = Certified { err: Float::with_val(prec, bound), value: v, digits, prec };
                let agreed = certified_digits(&c.value, bound, digits);
                let c = Certified { digits: agreed, ..c };
                if agreed < digits {
                    rec.warnings.push(format!("tail bound {bound:e} leaves {agreed} certified digits"));
                }
                rec = with_value(rec, &c).field("method", "oracle").field("tail_bound", bound);
            }
            _ => {
                let pr = ep
                    .to_rational(n as u64)
                    .ok_or_else(|| usage("the enumeration oracle needs a rational edge probability"))?;
                let poly = exact_poly(n as usize, mk, fam)?;
                let exact = poly.eval(&pr);
                let c = Certified::exact(float_at(&exact, prec), digits);
                rec = with_value(rec, &c).field("method", "oracle").field("exact", exact.to_string());
            }
        },
    }
    finish_record(cfg, rec)
}

fn certified_digits(v: &Float, bound: f64, target: u32) -> u32 {
    if bound == 0.0 {
        return target;
    }
    let rel = bound / v.to_f64().abs();
    let k = (-rel.log10()).floor() - 1.0;
    if k < 0.0 {
        0
    } else {
        (k as u32).min(target)
    }
}

const WINDOW_MUS: [i64; 7] = [-3, -2, -1, 0, 1, 2, 3];

fn window_table(cfg: &CliConfig, id: &str, fam: FamilySpec, ns: &[u32]) -> Result<Table, CliError> {
    let mut cols = vec!["n".to_string()];
    cols.extend(WINDOW_MUS.iter().map(|m| format!("mu={m}")));
    let mut t = Table::new(id, cols);
    for &n in ns {
        let mut row = vec![n.to_string()];
        for &mu in &WINDOW_MUS {
            let mut c = exact_probability(fam, ModelKind::MD, n, &EdgeProb::Window(Rational::from(mu)), 9)?;
            if fam == FamilySpec::Acyclic {
                let cube = Float::with_val(c.prec, n).cbrt();
                c.value *= &cube;
                c.err *= &cube;
            }
            row.push(c.decimals(5));
        }
        t.rows.push(row);
    }
    let mut row = vec!["inf".to_string()];
    for &mu in &WINDOW_MUS {
        let (c, w) = certify(cfg.precision_bits, 9, |p| Ok(window_limit(fam, ModelKind::MD, &Float::with_val(p, mu))?))?;
        t.warnings.extend(w);
        row.push(c.decimals(5));
    }
    t.rows.push(row);
    Ok(t)
}

/// Ten decimals from 0.1 upwards, eight significant digits below.
fn airy_cell(c: &Certified) -> String {
    if c.value >= 0.1 {
        c.decimals(10)
    } else {
        Certified { digits: c.digits.min(8), ..c.clone() }.text()
    }
}

fn first_derivative_zero(prec: u32) -> Result<Complex, CliError> {
    Ok(Complex::with_val(prec, ai_root(1, true, prec)?))
}

pub fn table(cfg: &CliConfig, id: TableId, ns: &[u32]) -> Result<Vec<String>, CliError> {
    let prec = cfg.precision_bits;
    let t = match id {
        TableId::AiryValues => {
            let mut t = Table::new("airy_values", vec!["n".into(), "(-1)^n Ai(-n, a1')".into()]);
            for n in 0..=10i64 {
                let (c, w) = certify(prec, 11, |p| {
                    let v = ai_general(-n, &first_derivative_zero(p)?).real().clone();
                    Ok(if n % 2 == 1 { -v } else { v })
                })?;
                t.warnings.extend(w);
                t.rows.push(vec![n.to_string(), airy_cell(&c)]);
            }
            t
        }
        TableId::AiryI => {
            let mus: Vec<i64> = (-4..=4).collect();
            let mut cols = vec!["n".to_string()];
            cols.extend(mus.iter().map(|m| format!("mu={m}")));
            let mut t = Table::new("airy_I", cols);
            let grid = |p: u32| -> Result<Vec<(Float, f64)>, CliError> {
                let specs: Vec<_> =
                    (0..=10).flat_map(|n| mus.iter().map(move |&m| table_i_spec(n, &Float::with_val(p, m)))).collect();
                let tol = quad_tol(cfg, p, 11);
                let vals = contour_integral_batch(&specs, tol)?;
                vals.iter().map(|v| Ok((v.real_checked(1e-6)?, v.error.max(tol)))).collect()
            };
            let lo = grid(prec)?;
            let hi = grid(2 * prec)?;
            let mut short = false;
            for (n, (lo_row, hi_row)) in lo.chunks(mus.len()).zip(hi.chunks(mus.len())).enumerate() {
                let mut row = vec![n.to_string()];
                for ((a, _), (b, e)) in lo_row.iter().zip(hi_row) {
                    let c = from_pair(a, b.clone(), *e, 11, 2 * prec);
                    short |= c.digits < if c.value >= 0.1 { 11 } else { 8 };
                    row.push(airy_cell(&c));
                }
                t.rows.push(row);
            }
            if short {
                t.warnings.push("some entries are not certified to the printed digits".into());
            }
            t
        }
        TableId::Mdag => {
            let mut t = window_table(cfg, "mdag", FamilySpec::Acyclic, ns)?;
            t.notes.insert("scaling", json!("n^(1/3) P"));
            t
        }
        TableId::Elementary => window_table(cfg, "elementary", FamilySpec::Elementary, ns)?,
        TableId::Bicyclic => window_table(cfg, "bicyclic", FamilySpec::Bicyclic, ns)?,
        TableId::SimpleElementary => {
            let models = [ModelKind::SD, ModelKind::D2, ModelKind::MD];
            let mut t = Table::new("simple_elementary", vec!["n".into(), "sd".into(), "d2".into(), "md".into()]);
            for &n in ns {
                let mut row = vec![n.to_string()];
                for &m in &models {
                    let c = exact_probability(FamilySpec::Elementary, m, n, &EdgeProb::Fixed(Rational::from((1, n))), 10)?;
                    row.push(c.decimals(6));
                }
                t.rows.push(row);
            }
            let mut row = vec!["inf".to_string()];
            for &m in &models {
                let (c, w) = certify(prec, 10, |p| Ok(window_limit(FamilySpec::Elementary, m, &Float::new(p))?))?;
                t.warnings.extend(w);
                row.push(c.decimals(6));
            }
            t.rows.push(row);
            t
        }
    };
    finish_table(cfg, t)
}

pub fn convergence(cfg: &CliConfig, family: &str, model: Model, lambda: &str, ns: &[u32]) -> Result<Vec<String>, CliError> {
    let fam = parse_family(family)?;
    let l = parse_rational(lambda)?;
    if ns.len() < 2 {
        return Err(usage("a slope needs at least two values of n"));
    }
    if let Some(&n) = ns.iter().find(|&&n| n > cfg.series_order_cap) {
        return Err(usage(format!("n = {n} exceeds the series order cap {}", cfg.series_order_cap)));
    }
    let conv = asymptotics::convergence(fam, model_kind(model), &l, ns, cfg.precision_bits)?;
    let cols = ["n", "exact", "asym", "log_abs_ratio_minus_one"].map(String::from).to_vec();
    let mut t = Table::new("convergence", cols);
    for r in &conv.rows {
        t.rows.push(vec![
            r.n.to_string(),
            dphase_core::families::to_digits(&r.exact, cfg.target_digits),
            dphase_core::families::to_digits(&r.asym, cfg.target_digits),
            format!("{:.6}", r.log_abs_ratio_minus_one),
        ]);
    }
    t.notes.insert("family", json!(family));
    t.notes.insert("model", json!(model_name(model)));
    t.notes.insert("lambda", json!(lambda));
    t.notes.insert("slope", json!(format!("{:.4}", conv.slope)));
    let expected = if l < 1 { "-1" } else { "-1/3" };
    t.notes.insert("expected_slope", json!(expected));
    t.warnings = conv.warnings;
    finish_table(cfg, t)
}

/// `a3` is the third zero of Ai, `a2prime` the second zero of Ai'.
fn parse_point(s: &str, prec: u32) -> Result<Complex, CliError> {
    if let Some(rest) = s.strip_prefix('a') {
        let (idx, prime) = match rest.strip_suffix("prime") {
            Some(i) => (i, true),
            None => (rest, false),
        };
        let j: u32 = idx.parse().map_err(|_| usage(format!("cannot read '{s}' as an Airy zero")))?;
        return Ok(Complex::with_val(prec, ai_root(j, prime, prec)?));
    }
    parse_complex(s, prec)
}

fn complex_fields(rec: Record, re: &Certified, im: Option<&Certified>) -> Record {
    match im {
        None => with_value(rec, re),
        Some(im) => rec
            .field("value", format!("{},{}", re.text(), im.text()))
            .field("re", re.text())
            .field("im", im.text())
            .field("digits", re.digits.min(im.digits))
            .field("working_prec", re.prec),
    }
}

/// Certify both parts of a complex-valued evaluation.
fn certify_complex<F>(cfg: &CliConfig, f: F) -> Result<(Certified, Option<Certified>, Vec<String>), CliError>
where
    F: Fn(u32) -> Result<Complex, CliError>,
{
    let (re, mut w) = certify(cfg.precision_bits, cfg.target_digits, |p| Ok(f(p)?.real().clone()))?;
    let probe = f(cfg.precision_bits)?;
    if probe.imag().is_zero() {
        return Ok((re, None, w));
    }
    let (im, w2) = certify(cfg.precision_bits, cfg.target_digits, |p| Ok(f(p)?.imag().clone()))?;
    w.extend(w2);
    Ok((re, Some(im), w))
}

pub fn airy(cfg: &CliConfig, k: i64, z: &str) -> Result<Vec<String>, CliError> {
    parse_point(z, cfg.precision_bits)?;
    let (re, im, w) = certify_complex(cfg, |p| Ok(ai_general(k, &parse_point(z, p)?)))?;
    let mut rec = complex_fields(Record::new("airy").input("k", k).input("z", z), &re, im.as_ref());
    rec.warnings = w;
    finish_record(cfg, rec)
}

pub fn integral(
    cfg: &CliConfig,
    kind: IntegralKind,
    mu: Option<&str>,
    n: Option<i64>,
    r: Option<i64>,
    d: Option<i64>,
    terms: u32,
) -> Result<Vec<String>, CliError> {
    let need_mu = || mu.ok_or_else(|| usage("this integral needs --mu")).and_then(parse_rational);
    let tol = |p: u32| quad_tol(cfg, p, cfg.target_digits);
    let mut rec = Record::new("integral").input("kind", format!("{kind:?}").to_lowercase());
    if let Some(m) = mu {
        rec = rec.input("mu", m);
    }
    let (c, w) = match kind {
        IntegralKind::Varphi => {
            let m = need_mu()?;
            certify(cfg.precision_bits, cfg.target_digits, |p| Ok(varphi(&float_at(&m, p))?))?
        }
        IntegralKind::Elementary => {
            let m = need_mu()?;
            certify(cfg.precision_bits, cfg.target_digits, |p| Ok(elementary_critical(&float_at(&m, p))?))?
        }
        IntegralKind::TableI => {
            let m = need_mu()?;
            let n = n.ok_or_else(|| usage("this integral needs --n"))?;
            rec = rec.input("n", n);
            certify(cfg.precision_bits, cfg.target_digits, |p| Ok(airy_table_i(n, &float_at(&m, p))?))?
        }
        IntegralKind::PhiRd => {
            let m = need_mu()?;
            let (r, d) = (r.ok_or_else(|| usage("needs --r"))?, d.ok_or_else(|| usage("needs --d"))?);
            rec = rec.input("r", r).input("d", d);
            certify(cfg.precision_bits, cfg.target_digits, |p| Ok(phi_rd(r, d, &float_at(&m, p))?))?
        }
        IntegralKind::Identity | IntegralKind::Knessl => {
            let spec = |p| if matches!(kind, IntegralKind::Identity) { identity_minus_two_spec(p) } else { knessl_spec(p) };
            certify_with_err(cfg.precision_bits, cfg.target_digits, |p| {
                let v = contour_integral(&spec(p), tol(p))?;
                Ok((v.real_checked(1e-6)?, v.error.max(tol(p))))
            })?
        }
        IntegralKind::ResidueAcyclic | IntegralKind::ResidueElementary => {
            let m = need_mu()?;
            let rk = if matches!(kind, IntegralKind::ResidueAcyclic) { ResidueKind::Acyclic } else { ResidueKind::Elementary };
            rec = rec.input("terms", terms);
            let last = RefCell::new(0f64);
            let out = certify(cfg.precision_bits, cfg.target_digits, |p| {
                let s = residue_sum(rk, &float_at(&m, p), terms)?;
                *last.borrow_mut() = s.truncation_estimate;
                Ok(s.value)
            })?;
            rec = rec.field("truncation_estimate", *last.borrow());
            out
        }
    };
    let mut rec = with_value(rec, &c);
    rec.warnings = w;
    finish_record(cfg, rec)
}

pub fn roots(cfg: &CliConfig, w: &str, kind: WeightKind, j: u32, r: i64, f: InnerFn) -> Result<Vec<String>, CliError> {
    let wr = parse_rational(w)?;
    if r != 0 && r != 1 {
        return Err(usage("--r must be 0 or 1"));
    }
    let spec = inner_fn(f);
    let gk = ggf_kind(kind);
    let (c, warn) = certify(cfg.precision_bits, cfg.target_digits, |p| Ok(find_root(j, &float_at(&wr, p), r, &spec, gk)?))?;
    let mut rec = with_value(
        Record::new("roots").input("w", w).input("j", j).input("r", r).input("kind", format!("{kind:?}").to_lowercase()),
        &c,
    );
    if kind == WeightKind::Multi {
        if let Ok(a) = root_asymptotic(j, &float_at(&wr, cfg.precision_bits), r, &spec) {
            rec = rec.field("asymptotic", a.to_f64());
        }
    }
    rec.warnings = warn;
    finish_record(cfg, rec)
}

pub fn phi(cfg: &CliConfig, z: &str, w: &str, r: i64, kind: WeightKind, f: InnerFn) -> Result<Vec<String>, CliError> {
    let wr = parse_rational(w)?;
    let spec = inner_fn(f);
    let gk = ggf_kind(kind);
    parse_complex(z, cfg.precision_bits)?;
    let (re, im, warn) = certify_complex(cfg, |p| Ok(phi_eval(&parse_complex(z, p)?, &float_at(&wr, p), r, &spec, gk)?))?;
    let mut rec = complex_fields(Record::new("phi").input("z", z).input("w", w).input("r", r), &re, im.as_ref());
    rec.warnings = warn;
    finish_record(cfg, rec)
}

pub fn strong(cfg: &CliConfig, r: u32, variant: Option<Variant>) -> Result<Vec<String>, CliError> {
    let s = s_r(r)?;
    let prec = cfg.precision_bits;
    let mut rec = Record::new("strong")
        .input("r", r)
        .field("value", s.to_string())
        .field("decimal", dphase_core::families::to_digits(&float_at(&s, prec), cfg.target_digits))
        .field("e_r", e_r(r).to_string());
    if let Some(v) = variant {
        let sv = match v {
            Variant::Multi => StrongVariant::Multi,
            Variant::Simple => StrongVariant::Simple,
            Variant::Strict => StrongVariant::Strict,
        };
        let a = a_r_polynomial(r, sv)?;
        let coeffs: Vec<Value> = a.coeffs.iter().map(|c| Value::String(c.to_string())).collect();
        rec = rec
            .input("variant", format!("{v:?}").to_lowercase())
            .field("polynomial", coeffs)
            .field("degree", a.degree())
            .field("degree_bound", sv.degree_bound(r));
    }
    finish_record(cfg, rec)
}

pub fn oracle(cfg: &CliConfig, n: usize, model: Model) -> Result<Vec<String>, CliError> {
    if matches!(model, Model::Md) {
        return Err(usage("the census covers simple digraphs (d2, sd); use prob --method oracle for multidigraphs"));
    }
    let c = census(n, model_kind(model))?;
    let mut t = Table::new("census", ["n", "m", "family", "count"].map(String::from).to_vec());
    for (n, m, fam, cnt) in c.rows() {
        t.rows.push(vec![n.to_string(), m.to_string(), fam, cnt.to_string()]);
    }
    t.notes.insert("model", json!(model_name(model)));
    finish_table(cfg, t)
}
