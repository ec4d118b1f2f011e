//! Brute-force ground truth: exhaustive enumeration of small digraphs,
//! strong-component classification with kernel reduction, and exact
//! probability polynomials.

use crate::families::{FamilySpec, ModelKind, ProbPolynomial};
use crate::scalar::{binomial, factorial};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use std::collections::BTreeMap;

pub const MAX_CENSUS_N: usize = 5;
pub const MAX_MD_N: usize = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("n = {0} is too large for exhaustive enumeration")]
    TooLarge(usize),
    #[error("multiplicity cap {cap} is too small, need at least {need} for this family")]
    CapTooSmall { cap: u32, need: u32 },
    #[error("{0}")]
    Unsupported(&'static str),
}

/// Multidigraph on `0..n` as a row-major multiplicity matrix (loops on the
/// diagonal).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallDigraph {
    pub n: usize,
    pub mult: Vec<u32>,
}

impl SmallDigraph {
    pub fn empty(n: usize) -> Self {
        SmallDigraph { n, mult: vec![0; n * n] }
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Self {
        let mut g = SmallDigraph::empty(n);
        for &(u, v) in arcs {
            g.mult[u * n + v] += 1;
        }
        g
    }

    pub fn arcs(&self) -> u32 {
        self.mult.iter().sum()
    }

    fn has(&self, u: usize, v: usize) -> bool {
        self.mult[u * self.n + v] > 0
    }
}

/// Strong components in reverse topological order (iterative Tarjan).
pub fn strong_components(g: &SmallDigraph) -> Vec<Vec<usize>> {
    let n = g.n;
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (vertex, next successor to scan)
        let mut call = vec![(root, 0usize)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut it)) = call.last_mut() {
            if *it < n {
                let w = *it;
                *it += 1;
                if !g.has(v, w) {
                    continue;
                }
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentInfo {
    pub size: u32,
    pub edges: u32,
}

impl ComponentInfo {
    pub fn excess(&self) -> i64 {
        self.edges as i64 - self.size as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexInfo {
    pub excess: u32,
    pub kernel_vertices: u32,
    pub kernel_edges: u32,
    pub deficiency: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccProfile {
    pub components: Vec<ComponentInfo>,
    pub is_acyclic: bool,
    pub is_elementary: bool,
    pub complex: Vec<ComplexInfo>,
}

impl SccProfile {
    pub fn is_strongly_connected(&self) -> bool {
        self.components.len() == 1
    }

    pub fn in_family(&self, family: FamilySpec) -> bool {
        match family {
            FamilySpec::Acyclic => self.is_acyclic,
            FamilySpec::Elementary => self.is_elementary,
            FamilySpec::Bicyclic => self.complex.len() == 1 && self.complex[0].excess == 1,
            FamilySpec::OneComplexExcess(r) => self.complex.len() == 1 && self.complex[0].excess == r,
            FamilySpec::OneComplexKernel { r, d } => {
                self.complex.len() == 1 && self.complex[0].excess == r && self.complex[0].deficiency == d
            }
        }
    }
}

/// Suppresses in-degree 1 / out-degree 1 vertices of a strongly connected
/// multidigraph until none remain; returns (vertices, edges).
fn kernel_size(mut m: Vec<Vec<u32>>) -> (u32, u32) {
    let mut alive: Vec<usize> = (0..m.len()).collect();
    loop {
        let found = alive.iter().copied().find(|&v| {
            let indeg: u32 = alive.iter().map(|&u| m[u][v]).sum();
            let outdeg: u32 = alive.iter().map(|&u| m[v][u]).sum();
            indeg == 1 && outdeg == 1 && m[v][v] == 0
        });
        let Some(v) = found else { break };
        let pred = alive.iter().copied().find(|&u| m[u][v] == 1).unwrap();
        let succ = alive.iter().copied().find(|&u| m[v][u] == 1).unwrap();
        m[pred][v] = 0;
        m[v][succ] = 0;
        m[pred][succ] += 1;
        alive.retain(|&u| u != v);
    }
    let edges = alive.iter().map(|&u| alive.iter().map(|&v| m[u][v]).sum::<u32>()).sum();
    (alive.len() as u32, edges)
}

pub fn classify(g: &SmallDigraph) -> SccProfile {
    let comps = strong_components(g);
    let mut components = Vec::with_capacity(comps.len());
    let mut complex = Vec::new();
    for c in &comps {
        let mut edges = 0;
        for &u in c {
            for &v in c {
                edges += g.mult[u * g.n + v];
            }
        }
        let info = ComponentInfo { size: c.len() as u32, edges };
        if info.excess() > 0 {
            let sub: Vec<Vec<u32>> = c.iter().map(|&u| c.iter().map(|&v| g.mult[u * g.n + v]).collect()).collect();
            let (kv, ke) = kernel_size(sub);
            let excess = info.excess() as u32;
            complex.push(ComplexInfo { excess, kernel_vertices: kv, kernel_edges: ke, deficiency: 2 * excess - kv });
        }
        components.push(info);
    }
    let is_acyclic = components.iter().all(|c| c.edges == 0);
    let is_elementary = components.iter().all(|c| c.edges == 0 || c.edges == c.size);
    SccProfile { components, is_acyclic, is_elementary, complex }
}

/// Counts by arc number `m` of every class the families need.
#[derive(Debug, Clone, PartialEq)]
pub struct DigraphCensus {
    pub n: usize,
    pub model: ModelKind,
    pub total: Vec<u64>,
    pub acyclic: Vec<u64>,
    pub elementary: Vec<u64>,
    pub strongly_connected: Vec<u64>,
    /// Exactly one complex component, keyed by its excess.
    pub one_complex: BTreeMap<u32, Vec<u64>>,
}

impl DigraphCensus {
    pub fn family(&self, family: FamilySpec) -> Option<Vec<u64>> {
        match family {
            FamilySpec::Acyclic => Some(self.acyclic.clone()),
            FamilySpec::Elementary => Some(self.elementary.clone()),
            FamilySpec::Bicyclic => Some(self.one_complex_counts(1)),
            FamilySpec::OneComplexExcess(r) => Some(self.one_complex_counts(r)),
            FamilySpec::OneComplexKernel { .. } => None,
        }
    }

    fn one_complex_counts(&self, r: u32) -> Vec<u64> {
        self.one_complex.get(&r).cloned().unwrap_or_else(|| vec![0; self.total.len()])
    }

    /// `(n, m, family, count)` rows.
    pub fn rows(&self) -> Vec<(usize, usize, String, u64)> {
        let mut out = Vec::new();
        let mut push = |name: String, v: &[u64]| {
            for (m, &c) in v.iter().enumerate() {
                out.push((self.n, m, name.clone(), c));
            }
        };
        push("all".into(), &self.total);
        push("acyclic".into(), &self.acyclic);
        push("elementary".into(), &self.elementary);
        push("strong".into(), &self.strongly_connected);
        for (r, v) in &self.one_complex {
            push(format!("one_complex_r{r}"), v);
        }
        out
    }
}

fn for_each_digraph(n: usize, model: ModelKind, mut f: impl FnMut(&SmallDigraph)) -> Result<(), OracleError> {
    if n > MAX_CENSUS_N {
        return Err(OracleError::TooLarge(n));
    }
    let mut g = SmallDigraph::empty(n);
    match model {
        ModelKind::D2 => {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
            for mask in 0u64..(1u64 << pairs.len()) {
                for (i, &(u, v)) in pairs.iter().enumerate() {
                    g.mult[u * n + v] = ((mask >> i) & 1) as u32;
                }
                f(&g);
            }
        }
        ModelKind::SD => {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let total = 3u64.pow(pairs.len() as u32);
            for code in 0..total {
                let mut c = code;
                for &(u, v) in &pairs {
                    let s = c % 3;
                    c /= 3;
                    g.mult[u * n + v] = (s == 1) as u32;
                    g.mult[v * n + u] = (s == 2) as u32;
                }
                f(&g);
            }
        }
        ModelKind::MD => return Err(OracleError::Unsupported("use md_probability_capped for multidigraphs")),
    }
    Ok(())
}

fn max_arcs(n: usize, model: ModelKind) -> usize {
    match model {
        ModelKind::SD => n * n.saturating_sub(1) / 2,
        _ => n * n.saturating_sub(1),
    }
}

pub fn census(n: usize, model: ModelKind) -> Result<DigraphCensus, OracleError> {
    let len = max_arcs(n, model) + 1;
    let mut c = DigraphCensus {
        n,
        model,
        total: vec![0; len],
        acyclic: vec![0; len],
        elementary: vec![0; len],
        strongly_connected: vec![0; len],
        one_complex: BTreeMap::new(),
    };
    for_each_digraph(n, model, |g| {
        let m = g.arcs() as usize;
        let prof = classify(g);
        c.total[m] += 1;
        c.acyclic[m] += prof.is_acyclic as u64;
        c.elementary[m] += prof.is_elementary as u64;
        c.strongly_connected[m] += (n > 0 && prof.is_strongly_connected()) as u64;
        if prof.complex.len() == 1 {
            c.one_complex.entry(prof.complex[0].excess).or_insert_with(|| vec![0; len])[m] += 1;
        }
    })?;
    Ok(c)
}

/// `sum_m count_m p^m (1-p)^{n(n-1)-m}` (D2) or
/// `sum_m count_m p^m (1-2p)^{C(n,2)-m}` (SD).
pub fn exact_poly(n: usize, model: ModelKind, family: FamilySpec) -> Result<ProbPolynomial, OracleError> {
    let c = census(n, model)?;
    let counts = c.family(family).ok_or(OracleError::Unsupported("a fixed kernel is a multidigraph family"))?;
    let top = max_arcs(n, model);
    let slope: i64 = if model == ModelKind::SD { 2 } else { 1 };
    let mut poly = vec![Rational::new(); top + 1];
    for (m, &cnt) in counts.iter().enumerate() {
        if cnt == 0 {
            continue;
        }
        let rest = (top - m) as u32;
        for j in 0..=rest {
            let mut t = Integer::from(cnt) * binomial(rest, j) * Integer::from(slope).pow(j);
            if j % 2 == 1 {
                t = -t;
            }
            poly[m + j as usize] += Rational::from(t);
        }
    }
    Ok(ProbPolynomial::new(poly))
}

/// Smallest multiplicity cap for which lumping `>= cap` into one class
/// leaves membership unchanged.
pub fn required_cap(family: FamilySpec) -> u32 {
    match family {
        FamilySpec::Acyclic => 1,
        FamilySpec::Elementary => 2,
        FamilySpec::Bicyclic => 3,
        FamilySpec::OneComplexExcess(r) | FamilySpec::OneComplexKernel { r, .. } => r + 2,
    }
}

/// Multidigraph probability by enumeration over multiplicity classes
/// `0, 1, ..., cap-1, >= cap` for each ordered pair (loops included).
/// Returns the value and a bound on its total error, which is only the
/// floating-point rounding because the lumping is exact for the family.
pub fn md_probability_capped(n: usize, p: &Float, family: FamilySpec, cap: u32) -> Result<(Float, Float), OracleError> {
    if n > MAX_MD_N {
        return Err(OracleError::TooLarge(n));
    }
    let need = required_cap(family);
    if cap < need {
        return Err(OracleError::CapTooSmall { cap, need });
    }
    let classes = cap as usize + 1;
    let cells = n * n;
    if (classes as f64).powi(cells as i32) > 5e7 {
        return Err(OracleError::TooLarge(n));
    }
    let prec = p.prec();
    // Poisson class masses
    let mut mass = Vec::with_capacity(classes);
    let mut term = Float::with_val(prec, -p).exp();
    let mut below = Float::with_val(prec, 0);
    for k in 0..cap {
        mass.push(term.clone());
        below += &term;
        term *= p;
        term /= k + 1;
    }
    mass.push(Float::with_val(prec, 1u32) - below);

    let mut g = SmallDigraph::empty(n);
    let mut digits = vec![0usize; cells];
    let mut total = Float::with_val(prec, 0);
    let mut configs = 0u64;
    loop {
        for (i, &d) in digits.iter().enumerate() {
            g.mult[i] = d as u32;
        }
        if classify(&g).in_family(family) {
            let mut w = Float::with_val(prec, 1u32);
            for &d in &digits {
                w *= &mass[d];
            }
            total += w;
        }
        configs += 1;
        let mut i = 0;
        while i < cells {
            digits[i] += 1;
            if digits[i] < classes {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == cells {
            break;
        }
    }
    // each product and sum loses at most a few ulps
    let ulp = Float::with_val(prec, 1u32) >> (prec as i32 - 4);
    let bound = ulp * Float::with_val(prec, configs * (cells as u64 + 2));
    Ok((total, bound))
}

/// Number of vertex- and arc-labelled strongly connected kernels with
/// `2r - d` vertices and `3r - d` arcs (every vertex of total degree >= 3).
pub fn kernel_count(r: u32, d: u32) -> Result<Integer, OracleError> {
    if r == 0 || d >= 2 * r {
        return Err(OracleError::Unsupported("need r >= 1 and d <= 2r - 1"));
    }
    let v = (2 * r - d) as usize;
    let e = 3 * r - d;
    if v > 5 || e > 8 {
        return Err(OracleError::TooLarge(v));
    }
    let cells = v * v;
    let mut m = vec![0u32; cells];
    let mut total = Integer::new();
    compositions(&mut m, 0, e, &mut |mult| {
        let g = SmallDigraph { n: v, mult: mult.to_vec() };
        let ok_degree = (0..v).all(|x| {
            let indeg: u32 = (0..v).map(|u| mult[u * v + x]).sum();
            let outdeg: u32 = (0..v).map(|u| mult[x * v + u]).sum();
            indeg >= 1 && outdeg >= 1 && indeg + outdeg >= 3
        });
        if ok_degree && strong_components(&g).len() == 1 {
            let mut ways = factorial(e);
            for &k in mult {
                ways /= factorial(k);
            }
            total += ways;
        }
    });
    Ok(total)
}

fn compositions(m: &mut [u32], i: usize, left: u32, f: &mut impl FnMut(&[u32])) {
    if i + 1 == m.len() {
        m[i] = left;
        f(m);
        return;
    }
    for k in 0..=left {
        m[i] = k;
        compositions(m, i + 1, left - k, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_vertex_census() {
        let c = census(2, ModelKind::D2).unwrap();
        assert_eq!(c.total, vec![1, 2, 1]);
        assert_eq!(c.acyclic, vec![1, 2, 0]);
        assert_eq!(c.elementary, vec![1, 2, 1]);
    }

    #[test]
    fn dag_totals() {
        let want = [1u64, 1, 3, 25, 543];
        for (n, w) in want.iter().enumerate() {
            let c = census(n, ModelKind::D2).unwrap();
            assert_eq!(c.acyclic.iter().sum::<u64>(), *w);
            let s = census(n, ModelKind::SD).unwrap();
            assert_eq!(s.acyclic.iter().sum::<u64>(), *w);
        }
    }

    #[test]
    fn three_cycles_are_elementary() {
        let c = census(3, ModelKind::D2).unwrap();
        // two directed triangles, and the six graphs made of one 2-cycle plus an isolated arc are excluded
        assert_eq!(c.strongly_connected[3], 2);
        assert!(c.elementary[3] >= 2);
    }

    #[test]
    fn classify_basics() {
        let tri = SmallDigraph::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]);
        let p = classify(&tri);
        assert!(p.is_elementary && !p.is_acyclic);
        assert_eq!(p.components, vec![ComponentInfo { size: 3, edges: 3 }]);
        let e = classify(&SmallDigraph::empty(4));
        assert!(e.is_acyclic && e.is_elementary);
        assert_eq!(e.components.len(), 4);
    }

    #[test]
    fn subdivided_kernel() {
        // u -> a -> v, u -> b -> v, v -> u: kernel with two vertices and three arcs
        let g = SmallDigraph::from_arcs(4, &[(0, 2), (2, 1), (0, 3), (3, 1), (1, 0)]);
        let p = classify(&g);
        assert_eq!(p.complex, vec![ComplexInfo { excess: 1, kernel_vertices: 2, kernel_edges: 3, deficiency: 0 }]);
        // figure of eight through one vertex: deficiency one
        let f = SmallDigraph::from_arcs(3, &[(0, 1), (1, 0), (0, 2), (2, 0)]);
        assert_eq!(classify(&f).complex[0].deficiency, 1);
    }

    #[test]
    fn tarjan_order_and_partition() {
        let g = SmallDigraph::from_arcs(5, &[(0, 1), (1, 0), (1, 2), (2, 3), (3, 4), (4, 2)]);
        let comps = strong_components(&g);
        assert_eq!(comps, vec![vec![2, 3, 4], vec![0, 1]]);
    }

    #[test]
    fn small_polynomials() {
        let d = exact_poly(2, ModelKind::D2, FamilySpec::Acyclic).unwrap();
        assert_eq!(d.coeffs, vec![Rational::from(1), Rational::new(), Rational::from(-1)]);
        let s = exact_poly(2, ModelKind::SD, FamilySpec::Acyclic).unwrap();
        assert_eq!(s.coeffs, vec![Rational::from(1)]);
        let e = exact_poly(3, ModelKind::D2, FamilySpec::Elementary).unwrap();
        assert_eq!(e.eval(&Rational::from(1)), 0);
    }

    #[test]
    fn md_single_vertex() {
        let p = Float::with_val(128, 1);
        let (v, tail) = md_probability_capped(1, &p, FamilySpec::Acyclic, 1).unwrap();
        assert!((v - Float::with_val(128, -1).exp()).abs() < 1e-30);
        assert!(tail < 1e-30);
        let small = Float::with_val(128, 1e-6);
        let (v, _) = md_probability_capped(2, &small, FamilySpec::Elementary, 2).unwrap();
        assert!(v > 0.999999);
        assert!(matches!(
            md_probability_capped(2, &p, FamilySpec::Bicyclic, 2),
            Err(OracleError::CapTooSmall { .. })
        ));
    }

    #[test]
    fn kernel_counts_excess_one() {
        assert_eq!(kernel_count(1, 0).unwrap(), 6);
        assert_eq!(kernel_count(1, 1).unwrap(), 1);
    }
}
