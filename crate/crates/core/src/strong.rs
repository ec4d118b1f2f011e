//! Exact counting series for strongly connected (multi)digraphs: the
//! bivariate EGFs, the excess polynomials `A_r`, the constants `s_r` and
//! `e_r`, and EGFs of strong multidigraphs with a fixed kernel.
//!
//! Everything is exact rational arithmetic.

use crate::scalar::{binomial, factorial};
use crate::series::{BivariateSeries, TruncatedSeries};
use rug::ops::Pow;
use rug::{Integer, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrongVariant {
    /// Multidigraphs, loops and multiple arcs allowed.
    Multi,
    /// Simple digraphs, 2-cycles allowed.
    Simple,
    /// Strict digraphs, no 2-cycles.
    Strict,
}

impl StrongVariant {
    /// Degree bound of `A_r` for this variant.
    pub fn degree_bound(self, r: u32) -> usize {
        let k = match self {
            StrongVariant::Multi => 2,
            StrongVariant::Simple => 5,
            StrongVariant::Strict => 8,
        };
        (k * r) as usize
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum StrongError {
    #[error("excess must be at least 1")]
    BadExcess,
    #[error("deficiency {d} outside 0..=2r-1 for r = {r}")]
    BadDeficiency { r: u32, d: u32 },
    #[error("excess {0} exceeds the supported range")]
    TooLarge(u32),
}

/// `A_r(z)` for one variant, ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcessPolynomial {
    pub r: u32,
    pub variant: StrongVariant,
    pub coeffs: Vec<Rational>,
}

impl ExcessPolynomial {
    pub fn value(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != 0).unwrap_or(0)
    }
}

fn poly_in_w(nw: usize, f: impl FnMut(usize) -> Rational) -> TruncatedSeries<Rational> {
    TruncatedSeries::from_fn(nw, f)
}

/// `sum_n weight_n(w) z^n / n!` with polynomial-in-`w` weights.
fn graph_series(nz: usize, mut weight: impl FnMut(usize) -> TruncatedSeries<Rational>) -> BivariateSeries<Rational> {
    TruncatedSeries::from_fn(nz, |n| {
        let inv = Rational::from((Integer::from(1), factorial(n as u32)));
        weight(n).scale(&inv)
    })
}

/// `(1 + c w)^e` truncated in `w`.
fn binomial_power(c: i64, e: u64, nw: usize) -> TruncatedSeries<Rational> {
    poly_in_w(nw, |m| {
        if m as u64 > e {
            Rational::new()
        } else {
            let b = Integer::from(Integer::binomial_u(e as u32, m as u32));
            Rational::from(b * Integer::from(c).pow(m as u32))
        }
    })
}

/// Bivariate EGF of strongly connected digraphs of the given variant,
/// `sum c_{n,m} z^n w^m` for `n <= nz`, `m <= nw`.
///
/// Multi: `-log(MG (.) 1/MG)` with `MG = sum e^{n^2 w/2} z^n/n!`; simple:
/// the same with `G = sum (1+w)^{C(n,2)} z^n/n!`; strict: `G` against the
/// inverse of `sum ((1+2w)/(1+w))^{C(n,2)} z^n/n!`. `(.)` is the
/// exponential Hadamard product in `z`.
pub fn strong_egf(variant: StrongVariant, nz: usize, nw: usize) -> BivariateSeries<Rational> {
    let pairs = |n: usize| (n * n.saturating_sub(1) / 2) as u64;
    let (left, right) = match variant {
        StrongVariant::Multi => {
            let mg = graph_series(nz, |n| {
                let half_sq = Rational::from((n * n, 2));
                let mut term = Rational::from(1);
                poly_in_w(nw, |m| {
                    if m > 0 {
                        term *= &half_sq;
                        term /= m as u32;
                    }
                    term.clone()
                })
            });
            (mg.clone(), mg)
        }
        StrongVariant::Simple => {
            let g = graph_series(nz, |n| binomial_power(1, pairs(n), nw));
            (g.clone(), g)
        }
        StrongVariant::Strict => {
            let g = graph_series(nz, |n| binomial_power(1, pairs(n), nw));
            let ratio = graph_series(nz, |n| {
                let num = binomial_power(2, pairs(n), nw);
                let den = binomial_power(1, pairs(n), nw);
                num.div(&den).expect("unit constant term")
            });
            (g, ratio)
        }
    };
    let inv = right.reciprocal().expect("constant term one");
    let h = left.hadamard_exp(&inv).expect("same shape");
    h.log().expect("constant term one").neg()
}

/// `sum_n c_{n, n+r} x^n` for `n <= order`.
fn excess_slice(egf: &BivariateSeries<Rational>, r: u32, order: usize) -> Vec<Rational> {
    (0..=order)
        .map(|n| {
            let m = n + r as usize;
            let row = egf.coeff(n);
            if m <= row.order() {
                row.coeff(m).clone()
            } else {
                Rational::new()
            }
        })
        .collect()
}

fn times_one_minus_x_pow(v: &[Rational], e: u32) -> Vec<Rational> {
    let mut out = vec![Rational::new(); v.len()];
    for (j, o) in out.iter_mut().enumerate() {
        for i in 0..=j.min(e as usize) {
            let b = Rational::from(binomial(e, i as u32));
            let t = Rational::from(&b * &v[j - i]);
            if i % 2 == 1 {
                *o -= t;
            } else {
                *o += t;
            }
        }
    }
    out
}

/// `A_r(z) = (1 - z)^{3r} [y^r] Strong(z/y, y)`, expanded one degree past
/// the variant's bound so the bound itself is checked.
pub fn a_r_polynomial(r: u32, variant: StrongVariant) -> Result<ExcessPolynomial, StrongError> {
    if r == 0 {
        return Err(StrongError::BadExcess);
    }
    if r > 5 {
        return Err(StrongError::TooLarge(r));
    }
    let d = variant.degree_bound(r);
    let order = d + 1;
    let egf = strong_egf(variant, order, order + r as usize);
    let slice = excess_slice(&egf, r, order);
    let mut coeffs = times_one_minus_x_pow(&slice, 3 * r);
    assert!(coeffs[order] == 0, "degree bound violated");
    coeffs.truncate(d + 1);
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
        coeffs.pop();
    }
    Ok(ExcessPolynomial { r, variant, coeffs })
}

/// `s_r = [z^{2r} y^r] (1 - z)^{3r-1} Strong(z/y, y)`: the number of cubic
/// strongly connected multidigraphs of excess `r` over `(2r)! (3r)!`.
pub fn s_r(r: u32) -> Result<Rational, StrongError> {
    if r == 0 {
        return Err(StrongError::BadExcess);
    }
    let n = 2 * r as usize;
    let egf = strong_egf(StrongVariant::Multi, n, n + r as usize);
    let slice = excess_slice(&egf, r, n);
    Ok(times_one_minus_x_pow(&slice, 3 * r - 1)[n].clone())
}

/// `e_r = (6r)! / (2^{5r} 3^{2r} (2r)! (3r)!)`.
pub fn e_r(r: u32) -> Rational {
    let num = factorial(6 * r);
    let den = Integer::from(2).pow(5 * r) * Integer::from(3).pow(2 * r) * factorial(2 * r) * factorial(3 * r);
    Rational::from((num, den))
}

/// EGF of strongly connected multidigraphs whose kernel is one fixed
/// kernel of excess `r` and deficiency `d`:
/// `w^{3r-d} z^{2r-d} / ((3r-d)! (2r-d)! (1 - wz)^{3r-d})`, to order `n`
/// in `z` (and `n + r` in `w`).
pub fn s_rd_egf(r: u32, d: u32, n: usize) -> Result<BivariateSeries<Rational>, StrongError> {
    if r == 0 {
        return Err(StrongError::BadExcess);
    }
    if d >= 2 * r {
        return Err(StrongError::BadDeficiency { r, d });
    }
    let verts = (2 * r - d) as usize;
    let edges = 3 * r - d;
    let scale = Rational::from((Integer::from(1), factorial(edges) * factorial(verts as u32)));
    Ok(BivariateSeries::bivariate(n, n + r as usize, |i, m| {
        if i < verts || m != i + r as usize {
            return Rational::new();
        }
        let k = (i - verts) as u32;
        Rational::from(&scale * binomial(edges + k - 1, k))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    #[test]
    fn low_order_coefficients() {
        let m = strong_egf(StrongVariant::Multi, 3, 4);
        assert_eq!(*m.coeff_extract(1, 0), 1);
        assert_eq!(*m.coeff_extract(1, 1), 1);
        let s = strong_egf(StrongVariant::Simple, 3, 3);
        assert_eq!(*s.coeff_extract(1, 0), 1);
        assert_eq!(*s.coeff_extract(1, 1), 0);
        // two directed triangles on 3 labelled vertices
        assert_eq!(*s.coeff_extract(3, 3), q(1, 3));
        // the 2-cycle is the only strong simple digraph on 2 vertices with 2 arcs
        assert_eq!(*s.coeff_extract(2, 2), q(1, 2));
        let t = strong_egf(StrongVariant::Strict, 3, 3);
        assert_eq!(*t.coeff_extract(2, 2), 0);
        assert_eq!(*t.coeff_extract(3, 3), q(1, 3));
    }

    #[test]
    fn s_r_values() {
        let want = [q(1, 2), q(17, 8), q(275, 12), q(26141, 64), q(1630711, 160)];
        for (r, w) in want.iter().enumerate() {
            assert_eq!(s_r(r as u32 + 1).unwrap(), *w);
        }
    }

    #[test]
    fn wright_constants() {
        assert_eq!(e_r(1), q(5, 24));
        // (12)! / (2^10 3^4 4! 6!) = 385/1152
        assert_eq!(e_r(2), q(385, 1152));
    }

    #[test]
    fn excess_one_polynomials() {
        let m = a_r_polynomial(1, StrongVariant::Multi).unwrap();
        assert_eq!(m.coeffs, vec![q(0, 1), q(1, 2)]);
        let s = a_r_polynomial(1, StrongVariant::Simple).unwrap();
        assert_eq!(s.coeffs, vec![q(0, 1), q(0, 1), q(0, 1), q(3, 2), q(-1, 1)]);
        let t = a_r_polynomial(1, StrongVariant::Strict).unwrap();
        assert_eq!(t.coeffs, vec![q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(3, 2), q(-1, 2), q(-1, 2)]);
    }

    #[test]
    fn values_at_one_agree_and_degrees_bounded() {
        for r in 1..=3 {
            let s = s_r(r).unwrap();
            for v in [StrongVariant::Multi, StrongVariant::Simple, StrongVariant::Strict] {
                let a = a_r_polynomial(r, v).unwrap();
                assert_eq!(a.value(&Rational::from(1)), s, "r={r} {v:?}");
                assert!(a.degree() <= v.degree_bound(r));
            }
        }
    }

    #[test]
    fn kernel_egfs_rebuild_excess_one() {
        // six cubic kernels (d = 0) and one double loop (d = 1)
        let n = 8;
        let s10 = s_rd_egf(1, 0, n).unwrap();
        let s11 = s_rd_egf(1, 1, n).unwrap();
        let strong = strong_egf(StrongVariant::Multi, n, n + 1);
        for i in 0..=n {
            let got = Rational::from(s10.coeff_extract(i, i + 1) * 6u32) + s11.coeff_extract(i, i + 1);
            assert_eq!(got, *strong.coeff_extract(i, i + 1), "n={i}");
        }
        // bicycle EGF w^2 z / (2 (1 - wz)^3)
        for i in 1..=n {
            let want = Rational::from((binomial(i as u32 + 1, 2), Integer::from(2)));
            assert_eq!(*strong.coeff_extract(i, i + 1), want);
        }
    }

    #[test]
    fn kernel_egf_shape() {
        for r in 1..=3u32 {
            for d in 0..2 * r {
                let s = s_rd_egf(r, d, 10).unwrap();
                assert!(s.coeff(0).is_zero());
                let v = (2 * r - d) as usize;
                let want = Rational::from((Integer::from(1), factorial(3 * r - d) * factorial(2 * r - d)));
                assert_eq!(*s.coeff_extract(v, v + r as usize), want);
            }
        }
        assert!(matches!(s_rd_egf(1, 2, 4), Err(StrongError::BadDeficiency { .. })));
    }
}
