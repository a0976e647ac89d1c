//! Schemes of finite type over F_q as finite unions of affine charts, with
//! exact point counting over F_{q^n} and closed points as Frobenius orbits.
//!
//! Counting is brute-force enumeration (parallel over index blocks). One
//! structural shortcut is applied transparently: when a chart variable
//! occurs only as a pure power y^r in a single equation (the shape of
//! Kummer covering charts), the y-roots are counted by the power-residue
//! criterion instead of enumerating the y axis. This is exact and is
//! cross-validated against naive enumeration in the tests.

pub mod poly;

pub use poly::{Poly, Term};

use crate::error::{Error, Result};
use crate::ff::{FieldExtension, FqElem, FqField};
use crate::par;
use poly::EmbeddedPoly;
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

/// Default per-chart tuple budget for enumeration.
pub const DEFAULT_POINT_BUDGET: u128 = 100_000_000;

/// One affine chart: k variables, equations (must vanish), inequations
/// (must not vanish).
#[derive(Clone)]
pub struct Chart {
    pub vars: usize,
    pub eqs: Vec<Poly>,
    pub neqs: Vec<Poly>,
}

/// A scheme presented as a disjoint union of affine charts.
///
/// Point counts and closed-point enumerations are memoized per instance
/// (clones share the memo); repeated L-function passes over the same scheme
/// reuse the enumeration.
#[derive(Clone)]
pub struct Scheme {
    base: FqField,
    charts: Vec<Chart>,
    name: Option<String>,
    zero_dim: bool,
    points_memo: Arc<Mutex<BTreeMap<usize, Arc<Vec<ClosedPoint>>>>>,
    count_memo: Arc<Mutex<BTreeMap<usize, u64>>>,
}

fn fresh_memo() -> (
    Arc<Mutex<BTreeMap<usize, Arc<Vec<ClosedPoint>>>>>,
    Arc<Mutex<BTreeMap<usize, u64>>>,
) {
    (
        Arc::new(Mutex::new(BTreeMap::new())),
        Arc::new(Mutex::new(BTreeMap::new())),
    )
}

/// A closed point: one Frobenius orbit of geometric points of degree d.
/// The orbit is stored as [rep, F(rep), …, F^{d−1}(rep)] where rep is the
/// element with the lexicographically smallest coordinate encoding.
#[derive(Clone, Debug)]
pub struct ClosedPoint {
    chart: usize,
    degree: usize,
    orbit: Vec<Vec<FqElem>>,
}

impl ClosedPoint {
    pub fn chart(&self) -> usize {
        self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn orbit(&self) -> &[Vec<FqElem>] {
        &self.orbit
    }

    pub fn representative(&self) -> &[FqElem] {
        &self.orbit[0]
    }

    /// Coordinate encoding of the representative (deterministic sort key).
    pub fn encoding(&self) -> Vec<u64> {
        self.orbit[0].iter().map(|c| c.encoding()).collect()
    }
}

fn tuple_encoding(t: &[FqElem]) -> Vec<u64> {
    t.iter().map(|c| c.encoding()).collect()
}

impl Scheme {
    pub fn affine(base: &FqField, vars: usize, eqs: Vec<Poly>, neqs: Vec<Poly>) -> Result<Scheme> {
        for p in eqs.iter().chain(&neqs) {
            if p.field() != base || p.vars() != vars {
                return Err(Error::Invalid(
                    "chart polynomial in wrong field or arity".into(),
                ));
            }
        }
        let (points_memo, count_memo) = fresh_memo();
        Ok(Scheme {
            base: base.clone(),
            charts: vec![Chart { vars, eqs, neqs }],
            name: None,
            zero_dim: false,
            points_memo,
            count_memo,
        })
    }

    /// Built-in geometries: "A1", "Gm", "P1" (= A1 ⊔ point(1)), "point(d)".
    pub fn builtin(name: &str, base: &FqField) -> Result<Scheme> {
        match name {
            "A1" => {
                let mut s = Scheme::affine(base, 1, vec![], vec![])?;
                s.name = Some("A1".into());
                Ok(s)
            }
            "Gm" => {
                let x = Poly::var(base, 1, 0);
                let mut s = Scheme::affine(base, 1, vec![], vec![x])?;
                s.name = Some("Gm".into());
                Ok(s)
            }
            "P1" => {
                let a1 = Scheme::builtin("A1", base)?;
                let pt = Scheme::builtin("point(1)", base)?;
                let mut s = a1.disjoint_union(&pt)?;
                s.name = Some("P1".into());
                s.zero_dim = false;
                Ok(s)
            }
            other => {
                if let Some(d) = other
                    .strip_prefix("point(")
                    .and_then(|s| s.strip_suffix(')'))
                {
                    let d: usize = d
                        .parse()
                        .map_err(|_| Error::Invalid(format!("bad point degree in {other}")))?;
                    if d == 0 {
                        return Err(Error::Invalid("point degree must be positive".into()));
                    }
                    let m = poly::smallest_irreducible(base, d)?;
                    let terms: Vec<Term> = m
                        .iter()
                        .enumerate()
                        .map(|(i, c)| Term {
                            exps: vec![i as u32],
                            coeff: c.clone(),
                        })
                        .collect();
                    let eq = Poly::new(base, 1, terms)?;
                    let mut s = Scheme::affine(base, 1, vec![eq], vec![])?;
                    s.name = Some(format!("point({d})"));
                    s.zero_dim = true;
                    Ok(s)
                } else {
                    Err(Error::Invalid(format!("unknown builtin scheme: {other}")))
                }
            }
        }
    }

    pub fn disjoint_union(&self, other: &Scheme) -> Result<Scheme> {
        if self.base != other.base {
            return Err(Error::Invalid(
                "disjoint union needs a common base field".into(),
            ));
        }
        let mut charts = self.charts.clone();
        charts.extend(other.charts.iter().cloned());
        let name = match (&self.name, &other.name) {
            (Some(a), Some(b)) => Some(format!("{a} + {b}")),
            _ => None,
        };
        let (points_memo, count_memo) = fresh_memo();
        Ok(Scheme {
            base: self.base.clone(),
            charts,
            name,
            zero_dim: self.zero_dim && other.zero_dim,
            points_memo,
            count_memo,
        })
    }

    /// Split a single-chart scheme along `cut`: U = {cut ≠ 0},
    /// Z = {cut = 0}. The point partition is asserted at degree 1 (and 2
    /// when cheap).
    pub fn open_closed_split(&self, cut: &Poly) -> Result<(Scheme, Scheme)> {
        if self.charts.len() != 1 {
            return Err(Error::MultiChartSplitUnsupported);
        }
        let chart = &self.charts[0];
        if cut.field() != &self.base || cut.vars() != chart.vars {
            return Err(Error::Invalid(
                "cut polynomial in wrong field or arity".into(),
            ));
        }
        let mut u_chart = chart.clone();
        u_chart.neqs.push(cut.clone());
        let mut z_chart = chart.clone();
        z_chart.eqs.push(cut.clone());
        let (pm_u, cm_u) = fresh_memo();
        let u = Scheme {
            base: self.base.clone(),
            charts: vec![u_chart],
            name: None,
            zero_dim: false,
            points_memo: pm_u,
            count_memo: cm_u,
        };
        let (pm_z, cm_z) = fresh_memo();
        let z = Scheme {
            base: self.base.clone(),
            charts: vec![z_chart],
            name: None,
            zero_dim: self.zero_dim,
            points_memo: pm_z,
            count_memo: cm_z,
        };
        for n in 1..=2usize {
            let size = (self.base.size() as u128).pow((n * chart.vars) as u32);
            if size > 100_000 && n > 1 {
                break;
            }
            let total = self.point_count(n)?;
            let (nu, nz) = (u.point_count(n)?, z.point_count(n)?);
            if total != nu + nz {
                return Err(Error::Invalid(format!(
                    "open/closed split does not partition the F_{{q^{n}}}-points"
                )));
            }
        }
        Ok((u, z))
    }

    pub fn base(&self) -> &FqField {
        &self.base
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: Option<String>) {
        self.name = name;
    }

    pub fn is_zero_dimensional(&self) -> bool {
        self.zero_dim
    }

    /// Mark as zero-dimensional (used when charts are rebuilt from
    /// serialized data; the builders set this automatically).
    pub fn into_zero_dimensional(mut self) -> Scheme {
        self.zero_dim = true;
        self
    }

    /// Exact number of F_{q^n}-points.
    pub fn point_count(&self, n: usize) -> Result<u64> {
        self.point_count_with(n, DEFAULT_POINT_BUDGET, false)
    }

    /// Sequential fallback (identical result; exposed for benchmarks).
    pub fn point_count_sequential(&self, n: usize) -> Result<u64> {
        self.point_count_with(n, DEFAULT_POINT_BUDGET, true)
    }

    pub fn point_count_with(&self, n: usize, budget: u128, sequential: bool) -> Result<u64> {
        if let Some(v) = self.count_memo.lock().unwrap().get(&n) {
            return Ok(*v);
        }
        let ext = FieldExtension::new(&self.base, n)?;
        let mut total = 0u64;
        for chart in &self.charts {
            total += count_chart(chart, &ext, budget, sequential)?;
        }
        self.count_memo.lock().unwrap().insert(n, total);
        Ok(total)
    }

    /// N_1..N_n as a vector.
    pub fn point_counts_upto(&self, n: usize) -> Result<Vec<u64>> {
        (1..=n).map(|k| self.point_count(k)).collect()
    }

    /// Number of closed points of each degree 1..=max_deg, derived from the
    /// point counts by exact Möbius-style inversion.
    pub fn closed_point_degree_counts(&self, max_deg: usize) -> Result<Vec<u64>> {
        let counts = self.point_counts_upto(max_deg)?;
        let mut a = vec![0u64; max_deg + 1];
        for d in 1..=max_deg {
            let mut s = counts[d - 1];
            for e in 1..d {
                if d % e == 0 {
                    s -= (e as u64) * a[e];
                }
            }
            assert!(s % d as u64 == 0, "point counts are not consistent");
            a[d] = s / d as u64;
        }
        Ok(a[1..].to_vec())
    }

    /// All closed points of degree ≤ max_deg, in (degree, chart, encoding)
    /// order.
    pub fn closed_points(&self, max_deg: usize) -> Result<Vec<ClosedPoint>> {
        self.closed_points_with(max_deg, DEFAULT_POINT_BUDGET, false)
    }

    pub fn closed_points_sequential(&self, max_deg: usize) -> Result<Vec<ClosedPoint>> {
        self.closed_points_with(max_deg, DEFAULT_POINT_BUDGET, true)
    }

    pub fn closed_points_with(
        &self,
        max_deg: usize,
        budget: u128,
        sequential: bool,
    ) -> Result<Vec<ClosedPoint>> {
        let mut out = Vec::new();
        for d in 1..=max_deg {
            out.extend(
                self.closed_points_of_degree(d, budget, sequential)?
                    .iter()
                    .cloned(),
            );
        }
        Ok(out)
    }

    /// Closed points of one degree, via the shared extension field.
    pub fn closed_points_of_degree(
        &self,
        d: usize,
        budget: u128,
        sequential: bool,
    ) -> Result<Arc<Vec<ClosedPoint>>> {
        if let Some(pts) = self.points_memo.lock().unwrap().get(&d) {
            return Ok(pts.clone());
        }
        let ext = FieldExtension::new(&self.base, d)?;
        let mut out = Vec::new();
        for (ci, chart) in self.charts.iter().enumerate() {
            let mut pts = chart_closed_points(chart, ci, &ext, d, budget, sequential)?;
            pts.sort_by_key(|p| p.encoding());
            out.extend(pts);
        }
        let out = Arc::new(out);
        self.points_memo.lock().unwrap().insert(d, out.clone());
        Ok(out)
    }
}

/// index → coordinate tuple over the extension field, little-endian digits
fn decode_tuple(ext_field: &FqField, k: usize, mut idx: u128, out: &mut Vec<FqElem>) {
    let q = ext_field.size() as u128;
    out.clear();
    for _ in 0..k {
        out.push(ext_field.element_from_index((idx % q) as u64));
        idx /= q;
    }
}

struct EmbeddedChart {
    eqs: Vec<EmbeddedPoly>,
    neqs: Vec<EmbeddedPoly>,
}

impl EmbeddedChart {
    fn new(chart: &Chart, ext: &FieldExtension) -> EmbeddedChart {
        EmbeddedChart {
            eqs: chart.eqs.iter().map(|p| p.embed(ext)).collect(),
            neqs: chart.neqs.iter().map(|p| p.embed(ext)).collect(),
        }
    }

    fn satisfied(&self, point: &[FqElem]) -> bool {
        self.eqs.iter().all(|p| p.is_zero_at(point))
            && self.neqs.iter().all(|p| !p.is_zero_at(point))
    }
}

/// Detect a variable occurring only as a pure power c·y^r in a single
/// equation (and nowhere else): the solved-power shortcut used by Kummer
/// covering charts.
fn solved_power_var(chart: &Chart) -> Option<(usize, usize, u32, FqElem, Poly)> {
    for v in 0..chart.vars {
        let occurrences: Vec<usize> = (0..chart.eqs.len())
            .filter(|&i| chart.eqs[i].involves(v))
            .collect();
        if occurrences.len() != 1 || chart.neqs.iter().any(|p| p.involves(v)) {
            continue;
        }
        let eq = &chart.eqs[occurrences[0]];
        // split eq into the pure-power part and the rest
        let mut power_terms = Vec::new();
        let mut rest_terms = Vec::new();
        for t in eq.terms() {
            if t.exps[v] > 0 {
                power_terms.push(t.clone());
            } else {
                rest_terms.push(t.clone());
            }
        }
        if power_terms.len() != 1 {
            continue;
        }
        let pt = &power_terms[0];
        if pt.exps.iter().enumerate().any(|(i, &e)| i != v && e > 0) {
            continue;
        }
        let r = pt.exps[v];
        let c = pt.coeff.clone();
        if c.is_zero() {
            continue;
        }
        let rest = Poly::new(eq.field(), chart.vars, rest_terms).expect("valid terms");
        return Some((v, occurrences[0], r, c, rest));
    }
    None
}

/// Number of solutions of y^r = val in the extension field.
fn power_root_count(val: &FqElem, r: u32, q_ext: u64) -> u64 {
    if val.is_zero() {
        return 1;
    }
    let rp = crate::ring::zlin_gcd(r as u64, q_ext - 1);
    if val
        .pow(((q_ext - 1) / rp) as i64)
        .expect("nonzero")
        .is_one()
    {
        rp
    } else {
        0
    }
}

fn count_chart(chart: &Chart, ext: &FieldExtension, budget: u128, sequential: bool) -> Result<u64> {
    let q = ext.top().size() as u128;
    // no constraints: the whole coordinate box (budget still applies, it is
    // part of the operation's contract)
    if chart.eqs.is_empty() && chart.neqs.is_empty() {
        let size = q
            .checked_pow(chart.vars as u32)
            .ok_or(Error::SizeOverflow)?;
        if size > budget {
            return Err(Error::EnumerationTooLarge {
                size,
                bound: budget,
            });
        }
        return u64::try_from(size).map_err(|_| Error::SizeOverflow);
    }
    if let Some((v, eq_idx, r, c, rest)) = solved_power_var(chart) {
        // count over the remaining coordinates; y-roots via the
        // power-residue criterion: c·y^r + rest = 0
        let reduced = Chart {
            vars: chart.vars - 1,
            eqs: chart
                .eqs
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != eq_idx)
                .map(|(_, p)| drop_var(p, v))
                .collect(),
            neqs: chart.neqs.iter().map(|p| drop_var(p, v)).collect(),
        };
        let rest_dropped = drop_var(&rest, v);
        let k = reduced.vars;
        let total = q.checked_pow(k as u32).ok_or(Error::SizeOverflow)?;
        if total > budget {
            return Err(Error::EnumerationTooLarge {
                size: total,
                bound: budget,
            });
        }
        let emb = EmbeddedChart::new(&reduced, ext);
        let rest_emb = rest_dropped.embed(ext);
        let c_emb = ext.embed(&c);
        let c_inv = c_emb
            .inverse()
            .map_err(|_| Error::Invalid("power coefficient not a unit".into()))?;
        let q_ext = ext.top().size();
        let top = ext.top().clone();
        let count_fn = |start: u128, end: u128| -> u64 {
            let mut point = Vec::with_capacity(k);
            let mut cnt = 0u64;
            for idx in start..end {
                decode_tuple(&top, k, idx, &mut point);
                if emb.satisfied(&point) {
                    // y^r = −rest/c
                    let val = rest_emb.eval(&point).neg().mul(&c_inv);
                    cnt += power_root_count(&val, r, q_ext);
                }
            }
            cnt
        };
        return Ok(run_chunked_sum(total as u64, sequential, &count_fn));
    }
    let k = chart.vars;
    let total = q.checked_pow(k as u32).ok_or(Error::SizeOverflow)?;
    if total > budget {
        return Err(Error::EnumerationTooLarge {
            size: total,
            bound: budget,
        });
    }
    let emb = EmbeddedChart::new(chart, ext);
    let top = ext.top().clone();
    let count_fn = |start: u128, end: u128| -> u64 {
        let mut point = Vec::with_capacity(k);
        let mut cnt = 0u64;
        for idx in start..end {
            decode_tuple(&top, k, idx, &mut point);
            if emb.satisfied(&point) {
                cnt += 1;
            }
        }
        cnt
    };
    Ok(run_chunked_sum(total as u64, sequential, &count_fn))
}

const CHUNK: u64 = 1 << 14;

fn run_chunked_sum(total: u64, sequential: bool, f: &(dyn Fn(u128, u128) -> u64 + Sync)) -> u64 {
    let chunks = total.div_ceil(CHUNK).max(1);
    let body = |ci: u64| {
        let start = ci * CHUNK;
        let end = (start + CHUNK).min(total);
        f(start as u128, end as u128)
    };
    if sequential {
        par::sum_indexed_seq(chunks, body)
    } else {
        par::sum_indexed(chunks, body)
    }
}

/// Remove variable v from a polynomial that does not involve it.
fn drop_var(p: &Poly, v: usize) -> Poly {
    debug_assert!(!p.involves(v));
    let terms = p
        .terms()
        .iter()
        .map(|t| {
            let mut exps = t.exps.clone();
            exps.remove(v);
            Term {
                exps,
                coeff: t.coeff.clone(),
            }
        })
        .collect();
    Poly::new(p.field(), p.vars() - 1, terms).expect("valid terms")
}

fn chart_closed_points(
    chart: &Chart,
    chart_index: usize,
    ext: &FieldExtension,
    d: usize,
    budget: u128,
    sequential: bool,
) -> Result<Vec<ClosedPoint>> {
    let q_ext = ext.top().size() as u128;
    let k = chart.vars;
    let total = q_ext.checked_pow(k as u32).ok_or(Error::SizeOverflow)?;
    if total > budget {
        return Err(Error::EnumerationTooLarge {
            size: total,
            bound: budget,
        });
    }
    let emb = EmbeddedChart::new(chart, ext);
    let top = ext.top().clone();
    // proper divisors: maximal ones suffice for the subfield test
    let proper: Vec<usize> = (1..d)
        .filter(|e| d.is_multiple_of(*e) && is_maximal_divisor(*e, d))
        .collect();

    let scan = |idx: u64| -> Option<ClosedPoint> {
        let mut point = Vec::with_capacity(k);
        decode_tuple(&top, k, idx as u128, &mut point);
        if !emb.satisfied(&point) {
            return None;
        }
        // defined over a proper subfield?
        for &e in &proper {
            let mut fixed = true;
            for c in &point {
                let mut y = c.clone();
                for _ in 0..e {
                    y = ext.frobenius(&y);
                }
                if &y != c {
                    fixed = false;
                    break;
                }
            }
            if fixed {
                return None;
            }
        }
        // orbit, and keep only the lexicographically smallest representative
        let mut orbit = Vec::with_capacity(d);
        orbit.push(point.clone());
        let enc0 = tuple_encoding(&point);
        let mut cur = point;
        for _ in 1..d {
            cur = cur.iter().map(|c| ext.frobenius(c)).collect();
            if tuple_encoding(&cur) < enc0 {
                return None;
            }
            orbit.push(cur.clone());
        }
        debug_assert_eq!(
            {
                let back: Vec<FqElem> = cur.iter().map(|c| ext.frobenius(c)).collect();
                tuple_encoding(&back)
            },
            enc0,
            "orbit does not close with period d"
        );
        Some(ClosedPoint {
            chart: chart_index,
            degree: d,
            orbit,
        })
    };

    let pts = if sequential {
        par::filter_map_indexed_seq(total as u64, scan)
    } else {
        par::filter_map_indexed(total as u64, scan)
    };
    Ok(pts)
}

fn is_maximal_divisor(e: usize, d: usize) -> bool {
    // e | d proper; maximal iff d/e is prime
    let q = d / e;
    q >= 2 && (2..q).all(|p| !q.is_multiple_of(p))
}

/// Independent oracle: the number of degree-d closed points of A¹ over F_q
/// by Möbius summation over divisors (necklace formula).
pub fn necklace_count(q: u64, d: usize) -> u64 {
    fn moebius(n: usize) -> i64 {
        let mut n = n;
        let mut m = 1i64;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                m = -m;
            }
            p += 1;
        }
        if n > 1 {
            m = -m;
        }
        m
    }
    let mut s: i64 = 0;
    for e in 1..=d {
        if d.is_multiple_of(e) {
            s += moebius(d / e) * (q.pow(e as u32) as i64);
        }
    }
    (s / d as i64) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FqField {
        match q {
            2 => FqField::new(2, 1).unwrap(),
            3 => FqField::new(3, 1).unwrap(),
            4 => FqField::new(2, 2).unwrap(),
            5 => FqField::new(5, 1).unwrap(),
            _ => panic!(),
        }
    }

    #[test]
    fn builtin_counts() {
        let a1 = Scheme::builtin("A1", &f(2)).unwrap();
        assert_eq!(a1.point_count(1).unwrap(), 2);
        assert_eq!(a1.point_count(3).unwrap(), 8);

        let gm = Scheme::builtin("Gm", &f(5)).unwrap();
        assert_eq!(gm.point_count(1).unwrap(), 4);
        assert_eq!(gm.point_count(2).unwrap(), 24);

        let p1 = Scheme::builtin("P1", &f(3)).unwrap();
        for n in 1..=4 {
            assert_eq!(p1.point_count(n).unwrap(), 3u64.pow(n as u32) + 1);
        }

        let pt2 = Scheme::builtin("point(2)", &f(2)).unwrap();
        assert_eq!(pt2.point_count(1).unwrap(), 0);
        assert_eq!(pt2.point_count(2).unwrap(), 2);
        assert!(pt2.is_zero_dimensional());
    }

    #[test]
    fn elliptic_affine_curve_counts() {
        // y² = x³ − x over F₃: 3 points with y² ≡ 0
        let f3 = f(3);
        let y2 = Poly::monomial(&f3, 2, 1, 2, f3.one());
        let rhs = Poly::monomial(&f3, 2, 0, 3, f3.one()).sub(&Poly::var(&f3, 2, 0));
        let curve = Scheme::affine(&f3, 2, vec![y2.sub(&rhs)], vec![]).unwrap();
        assert_eq!(curve.point_count(1).unwrap(), 3);
        // full scan oracle at n = 2
        let ext = FieldExtension::new(&f3, 2).unwrap();
        let emb = curve.charts()[0].eqs[0].embed(&ext);
        let mut oracle = 0;
        for i in 0..9u64 {
            for j in 0..9u64 {
                let pt = vec![
                    ext.top().element_from_index(i),
                    ext.top().element_from_index(j),
                ];
                if emb.is_zero_at(&pt) {
                    oracle += 1;
                }
            }
        }
        assert_eq!(curve.point_count(2).unwrap(), oracle);
    }

    #[test]
    fn disjoint_union_counts() {
        let pt1 = Scheme::builtin("point(1)", &f(2)).unwrap();
        let pt2 = Scheme::builtin("point(2)", &f(2)).unwrap();
        let s = pt1.disjoint_union(&pt2).unwrap();
        assert!(s.is_zero_dimensional());
        assert_eq!(s.point_count(1).unwrap(), 1);
        assert_eq!(s.point_count(2).unwrap(), 3);
    }

    #[test]
    fn split_a1_at_x() {
        let a1 = Scheme::builtin("A1", &f(5)).unwrap();
        let x = Poly::var(&f(5), 1, 0);
        let (u, z) = a1.open_closed_split(&x).unwrap();
        assert_eq!(u.point_count(1).unwrap(), 4); // Gm
        assert_eq!(z.point_count(1).unwrap(), 1); // origin
        for n in 1..=3 {
            assert_eq!(
                a1.point_count(n).unwrap(),
                u.point_count(n).unwrap() + z.point_count(n).unwrap()
            );
        }
    }

    #[test]
    fn split_curve_at_x() {
        let f3 = f(3);
        let y2 = Poly::monomial(&f3, 2, 1, 2, f3.one());
        let rhs = Poly::monomial(&f3, 2, 0, 3, f3.one()).sub(&Poly::var(&f3, 2, 0));
        let curve = Scheme::affine(&f3, 2, vec![y2.sub(&rhs)], vec![]).unwrap();
        let (_, z) = curve.open_closed_split(&Poly::var(&f3, 2, 0)).unwrap();
        // x = 0 forces y² = 0, one point
        assert_eq!(z.point_count(1).unwrap(), 1);
    }

    #[test]
    fn multi_chart_split_rejected() {
        let p1 = Scheme::builtin("P1", &f(2)).unwrap();
        let x = Poly::var(&f(2), 1, 0);
        assert!(matches!(
            p1.open_closed_split(&x),
            Err(Error::MultiChartSplitUnsupported)
        ));
    }

    #[test]
    fn closed_points_a1_f2() {
        let a1 = Scheme::builtin("A1", &f(2)).unwrap();
        let pts = a1.closed_points(3).unwrap();
        let by_deg: Vec<usize> = (1..=3)
            .map(|d| pts.iter().filter(|p| p.degree() == d).count())
            .collect();
        assert_eq!(by_deg, vec![2, 1, 2]);
        // against the necklace oracle
        for d in 1..=3 {
            assert_eq!(by_deg[d - 1] as u64, necklace_count(2, d));
        }
        // and against the count-derived degree counts
        assert_eq!(a1.closed_point_degree_counts(3).unwrap(), vec![2, 1, 2]);
    }

    #[test]
    fn closed_points_structure() {
        let gm = Scheme::builtin("Gm", &f(5)).unwrap();
        let pts = gm.closed_points(3).unwrap();
        assert_eq!(pts.iter().filter(|p| p.degree() == 1).count(), 4);
        // orbit well-formedness: coordinatewise Frobenius permutes each
        // orbit cyclically with exact period d
        for p in &pts {
            let d = p.degree();
            assert_eq!(p.orbit().len(), d);
            let ext = FieldExtension::new(&f(5), d).unwrap();
            for i in 0..d {
                let next: Vec<FqElem> = p.orbit()[i].iter().map(|c| ext.frobenius(c)).collect();
                assert_eq!(
                    tuple_encoding(&next),
                    tuple_encoding(&p.orbit()[(i + 1) % d])
                );
            }
            // no orbit element lies in a proper subfield
            for e in 1..d {
                if d % e == 0 {
                    let fixed = p.orbit()[0].iter().all(|c| {
                        let mut y = c.clone();
                        for _ in 0..e {
                            y = ext.frobenius(&y);
                        }
                        &y == c
                    });
                    assert!(!fixed);
                }
            }
        }
        // representative is minimal in its orbit
        for p in &pts {
            let enc = p.encoding();
            for o in p.orbit() {
                assert!(enc <= tuple_encoding(o));
            }
        }
    }

    #[test]
    fn count_consistency_identity() {
        // N_n = Σ_{d | n} d · a_d for every test scheme
        for (name, q) in [("A1", 2u64), ("Gm", 5), ("P1", 3), ("point(2)", 2)] {
            let s = Scheme::builtin(name, &f(q)).unwrap();
            let pts = s.closed_points(4).unwrap();
            for n in 1..=4usize {
                let mut total = 0u64;
                for d in 1..=n {
                    if n % d == 0 {
                        total += (d as u64) * pts.iter().filter(|p| p.degree() == d).count() as u64;
                    }
                }
                assert_eq!(s.point_count(n).unwrap(), total, "{name} at n = {n}");
            }
        }
    }

    #[test]
    fn point_scheme_closed_points() {
        let pt2 = Scheme::builtin("point(2)", &f(2)).unwrap();
        let pts = pt2.closed_points(4).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].degree(), 2);
    }

    #[test]
    fn solved_power_shortcut_matches_naive() {
        // y⁴ = x on Gm/F₅ (the Kummer covering chart): the shortcut must
        // agree with naive 2-variable enumeration
        let f5 = f(5);
        let y4 = Poly::monomial(&f5, 2, 1, 4, f5.one());
        let eq = y4.sub(&Poly::var(&f5, 2, 0));
        let x = Poly::var(&f5, 2, 0);
        let y = Scheme::affine(&f5, 2, vec![eq.clone()], vec![x.clone()]).unwrap();
        assert!(solved_power_var(&y.charts()[0]).is_some());
        for n in 1..=3usize {
            let fast = y.point_count(n).unwrap();
            // naive: full 2-variable scan
            let ext = FieldExtension::new(&f5, n).unwrap();
            let emb = EmbeddedChart::new(&y.charts()[0], &ext);
            let q = ext.top().size();
            let mut naive = 0u64;
            let mut point = Vec::new();
            for idx in 0..(q * q) {
                decode_tuple(ext.top(), 2, idx as u128, &mut point);
                if emb.satisfied(&point) {
                    naive += 1;
                }
            }
            assert_eq!(fast, naive, "n = {n}");
        }
    }

    #[test]
    fn budget_enforced() {
        let a1 = Scheme::builtin("A1", &f(5)).unwrap();
        assert!(matches!(
            a1.point_count_with(10, 1000, false),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let gm = Scheme::builtin("Gm", &f(5)).unwrap();
        assert_eq!(
            gm.point_count(4).unwrap(),
            gm.point_count_sequential(4).unwrap()
        );
        let p = gm.closed_points(3).unwrap();
        let s = gm.closed_points_sequential(3).unwrap();
        assert_eq!(p.len(), s.len());
        for (a, b) in p.iter().zip(&s) {
            assert_eq!(a.encoding(), b.encoding());
        }
    }
}
