//! Truncated power series Λ[T]/(T^m): the computational carrier of Λ[[T]].
//!
//! Coefficients live in a finite coefficient [`Ring`]; arithmetic discards
//! every term of degree ≥ m. The indeterminate T is central. There is no
//! exp/log anywhere — the integer-safe log-derivative T·f′·f⁻¹ replaces them.

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::ring::{Ring, RingElem, RingHom, SemilocalRing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Descriptor of Λ[T]/(T^m).
#[derive(Clone, PartialEq)]
pub struct SeriesRing {
    coeff: Ring,
    m: usize,
}

impl fmt::Debug for SeriesRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[T]/(T^{})", self.coeff, self.m)
    }
}

/// An element of Λ[T]/(T^m): length-m coefficient vector, T⁰ first.
#[derive(Clone)]
pub struct TruncSeries {
    ring: SeriesRing,
    coeffs: Vec<RingElem>,
}

impl PartialEq for TruncSeries {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.coeffs == other.coeffs
    }
}
impl Eq for TruncSeries {}

impl SeriesRing {
    pub fn new(coeff: &Ring, m: usize) -> SeriesRing {
        assert!(m >= 1, "truncation order must be at least 1");
        SeriesRing {
            coeff: coeff.clone(),
            m,
        }
    }

    pub fn coeff_ring(&self) -> &Ring {
        &self.coeff
    }

    pub fn truncation(&self) -> usize {
        self.m
    }

    pub fn zero(&self) -> TruncSeries {
        TruncSeries {
            ring: self.clone(),
            coeffs: vec![self.coeff.zero(); self.m],
        }
    }

    pub fn one(&self) -> TruncSeries {
        self.constant(&self.coeff.one())
    }

    pub fn constant(&self, c: &RingElem) -> TruncSeries {
        let mut coeffs = vec![self.coeff.zero(); self.m];
        coeffs[0] = c.clone();
        TruncSeries {
            ring: self.clone(),
            coeffs,
        }
    }

    pub fn from_coeffs(&self, coeffs: Vec<RingElem>) -> TruncSeries {
        assert!(coeffs.len() <= self.m, "too many coefficients");
        let mut c = coeffs;
        c.resize(self.m, self.coeff.zero());
        TruncSeries {
            ring: self.clone(),
            coeffs: c,
        }
    }

    /// c·T^k.
    pub fn monomial(&self, c: &RingElem, k: usize) -> TruncSeries {
        let mut s = self.zero();
        if k < self.m {
            s.coeffs[k] = c.clone();
        }
        s
    }

    /// 1 − u·T^d.
    pub fn one_minus(&self, u: &RingElem, d: usize) -> TruncSeries {
        let mut s = self.one();
        if d < self.m {
            s.coeffs[d] = self.coeff.sub(&s.coeffs[d], u);
        }
        s
    }

    /// Σ_{kd < m} u^k T^{kd}, the inverse of 1 − u·T^d.
    pub fn geometric(&self, u: &RingElem, d: usize) -> TruncSeries {
        assert!(d >= 1);
        let mut s = self.zero();
        let mut pw = self.coeff.one();
        let mut k = 0;
        while k < self.m {
            s.coeffs[k] = pw.clone();
            pw = self.coeff.mul(&pw, u);
            k += d;
        }
        s
    }
}

impl TruncSeries {
    pub fn ring(&self) -> &SeriesRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[RingElem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &RingElem {
        &self.coeffs[k]
    }

    pub fn constant_term(&self) -> &RingElem {
        &self.coeffs[0]
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_compat(&self, other: &TruncSeries) -> Result<()> {
        if self.ring.coeff != other.ring.coeff {
            return Err(Error::RingMismatch);
        }
        if self.ring.m != other.ring.m {
            return Err(Error::TruncationMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_compat(other)?;
        let r = &self.ring.coeff;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| r.add(a, b))
            .collect();
        Ok(TruncSeries {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_compat(other)?;
        let r = &self.ring.coeff;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| r.sub(a, b))
            .collect();
        Ok(TruncSeries {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    pub fn neg(&self) -> TruncSeries {
        let r = &self.ring.coeff;
        TruncSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|a| r.neg(a)).collect(),
        }
    }

    /// Cauchy product truncated at T^m; the left operand's coefficients
    /// multiply from the left, so noncommutative coefficient order is
    /// preserved.
    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_compat(other)?;
        let r = &self.ring.coeff;
        let m = self.ring.m;
        let mut coeffs = vec![r.zero(); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= m {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j] = r.add(&coeffs[i + j], &r.mul(a, b));
                }
            }
        }
        Ok(TruncSeries {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    /// Two-sided inverse, by the coefficient recursion. The constant term
    /// must be a unit of Λ; left/right consistency is asserted.
    pub fn inverse(&self) -> Result<TruncSeries> {
        let r = &self.ring.coeff;
        let m = self.ring.m;
        let c0_inv = r
            .inverse(&self.coeffs[0])
            .map_err(|_| Error::NonUnitConstantTerm)?;
        // right inverse g: f·g = 1, g_k = −f₀⁻¹ Σ_{i=1..k} f_i g_{k−i}
        let mut g = vec![r.zero(); m];
        g[0] = c0_inv.clone();
        for k in 1..m {
            let mut acc = r.zero();
            for i in 1..=k {
                if !self.coeffs[i].is_zero() {
                    acc = r.add(&acc, &r.mul(&self.coeffs[i], &g[k - i]));
                }
            }
            g[k] = r.neg(&r.mul(&c0_inv, &acc));
        }
        let g = TruncSeries {
            ring: self.ring.clone(),
            coeffs: g,
        };
        debug_assert!(self.mul(&g).unwrap().is_one());
        debug_assert!(g.mul(self).unwrap().is_one());
        Ok(g)
    }

    /// Truncate down to m′ ≤ m.
    pub fn truncate(&self, m_new: usize) -> TruncSeries {
        assert!(m_new >= 1 && m_new <= self.ring.m);
        let ring = SeriesRing::new(&self.ring.coeff, m_new);
        TruncSeries {
            ring,
            coeffs: self.coeffs[..m_new].to_vec(),
        }
    }

    /// T ↦ T^e substitution into a given truncation order.
    pub fn substitute_power(&self, e: usize, m_new: usize) -> TruncSeries {
        assert!(e >= 1);
        let ring = SeriesRing::new(&self.ring.coeff, m_new);
        let mut out = ring.zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k * e < m_new {
                out.coeffs[k * e] = c.clone();
            }
        }
        out
    }

    /// The integer-safe logarithmic derivative T·f′·f⁻¹ (commutative Λ
    /// only; this is an oracle tool).
    pub fn log_derivative(&self) -> Result<TruncSeries> {
        if !self.ring.coeff.is_commutative() {
            return Err(Error::NoncommutativeRing);
        }
        let r = &self.ring.coeff;
        let m = self.ring.m;
        // T·f′ has coefficient k·f_k at T^k
        let mut tfp = vec![r.zero(); m];
        for k in 1..m {
            tfp[k] = r.mul(&r.from_u64(k as u64), &self.coeffs[k]);
        }
        let tfp = TruncSeries {
            ring: self.ring.clone(),
            coeffs: tfp,
        };
        tfp.mul(&self.inverse()?)
    }

    /// Apply a coefficient-ring homomorphism coefficientwise.
    pub fn map_coeffs(&self, h: &RingHom) -> TruncSeries {
        assert!(h.source() == &self.ring.coeff, "hom source mismatch");
        let ring = SeriesRing::new(h.target(), self.ring.m);
        let coeffs = self.coeffs.iter().map(|c| h.apply(c)).collect();
        TruncSeries { ring, coeffs }
    }

    pub fn pow(&self, mut k: u64) -> TruncSeries {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            base = base.mul(&base).expect("same ring");
            k >>= 1;
        }
        acc
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // group-ring and product coefficients are bracketed
        let bracket = self.ring.coeff.base_modulus().is_none() || self.ring.coeff.group().is_some();
        let fmt_c = |c: &RingElem| {
            if bracket {
                format!("[{c}]")
            } else {
                format!("{c}")
            }
        };
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let part = match k {
                0 => fmt_c(c),
                1 => format!("{}*T", fmt_c(c)),
                k => format!("{}*T^{k}", fmt_c(c)),
            };
            parts.push(part);
        }
        let body = if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        };
        write!(f, "{body} (mod T^{})", self.ring.m)
    }
}

/// Σ_{kd < m} A^k T^{kd} for a constant matrix A over Λ — the inverse of
/// the series matrix 1 − A·T^d, verified by multiplying back.
pub fn geom_inverse(a: &Mat<Ring>, d: usize, m: usize) -> Mat<SeriesRing> {
    assert!(a.is_square());
    assert!(d >= 1);
    let n = a.rows();
    let sring = SeriesRing::new(a.ring(), m);
    let mut out = Mat::zero(&sring, n, n);
    let mut pw = Mat::identity(a.ring(), n);
    let mut k = 0;
    while k < m {
        for i in 0..n {
            for j in 0..n {
                let mut s = out.at(i, j).clone();
                s = s.add(&sring.monomial(pw.at(i, j), k)).expect("same ring");
                out.set(i, j, s);
            }
        }
        pw = pw.mul(a).expect("same ring");
        k += d;
    }
    debug_assert!({
        let one_minus = one_minus_matrix_t(a, d, m);
        out.mul(&one_minus).unwrap().is_identity() && one_minus.mul(&out).unwrap().is_identity()
    });
    out
}

/// The series matrix 1 − A·T^d.
pub fn one_minus_matrix_t(a: &Mat<Ring>, d: usize, m: usize) -> Mat<SeriesRing> {
    let n = a.rows();
    let sring = SeriesRing::new(a.ring(), m);
    Mat::from_fn(&sring, n, n, |i, j| {
        let mut s = if i == j { sring.one() } else { sring.zero() };
        if d < m {
            let c = sring.coeff.neg(a.at(i, j));
            s = s.add(&sring.monomial(&c, d)).expect("same ring");
        }
        s
    })
}

impl SemilocalRing for SeriesRing {
    type Elem = TruncSeries;

    fn zero(&self) -> TruncSeries {
        SeriesRing::zero(self)
    }
    fn one(&self) -> TruncSeries {
        SeriesRing::one(self)
    }
    fn add(&self, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        a.add(b).expect("series ring mismatch")
    }
    fn neg(&self, a: &TruncSeries) -> TruncSeries {
        a.neg()
    }
    fn mul(&self, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        a.mul(b).expect("series ring mismatch")
    }
    fn is_zero(&self, a: &TruncSeries) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &TruncSeries) -> bool {
        a.is_one()
    }
    fn is_unit(&self, a: &TruncSeries) -> bool {
        // T is nilpotent, so a unit is exactly a unit constant term
        self.coeff.is_unit(&a.coeffs[0])
    }
    fn inverse(&self, a: &TruncSeries) -> Result<TruncSeries> {
        a.inverse()
    }
    fn is_commutative(&self) -> bool {
        self.coeff.is_commutative()
    }
    fn size(&self) -> Option<u128> {
        self.coeff.size().checked_pow(self.m as u32)
    }
    fn enumerate_elems(&self, cap: u128) -> Option<Vec<TruncSeries>> {
        let size = self.size()?;
        if size > cap {
            return None;
        }
        let csize = self.coeff.size();
        let mut out = Vec::with_capacity(size as usize);
        for idx in 0..size {
            let mut coeffs = Vec::with_capacity(self.m);
            let mut k = idx;
            for _ in 0..self.m {
                coeffs.push(self.coeff.element_from_index(k % csize));
                k /= csize;
            }
            out.push(TruncSeries {
                ring: self.clone(),
                coeffs,
            });
        }
        Some(out)
    }
    fn encode_elem(&self, e: &TruncSeries) -> Vec<u64> {
        let mut out = Vec::new();
        for c in &e.coeffs {
            out.extend(c.encode());
        }
        out
    }

    fn pivot_scalars(&self, hints: &[TruncSeries], budget: usize) -> Vec<TruncSeries> {
        // constant-term unimodularity drives the search, so constants from
        // the coefficient ring are the useful candidates
        let mut out: Vec<TruncSeries> = Vec::new();
        let push = |e: TruncSeries, out: &mut Vec<TruncSeries>| {
            if !out.contains(&e) {
                out.push(e);
            }
        };
        for h in hints {
            push(h.clone(), &mut out);
        }
        push(SeriesRing::one(self), &mut out);
        push(SeriesRing::one(self).neg(), &mut out);
        if self.coeff.size() <= crate::ring::PIVOT_FULL_SCAN_CAP {
            for i in 0..self.coeff.size() {
                push(self.constant(&self.coeff.element_from_index(i)), &mut out);
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5e21e5);
            for _ in 0..budget {
                let idx = rng.gen_range(0..self.coeff.size());
                push(self.constant(&self.coeff.element_from_index(idx)), &mut out);
            }
        }
        out
    }

    fn matrix_invertible(&self, rows: &[Vec<TruncSeries>]) -> bool {
        // invertible over Λ[T]/(T^m) iff the constant-term matrix is
        // invertible over Λ
        let const_rows: Vec<Vec<RingElem>> = rows
            .iter()
            .map(|r| r.iter().map(|e| e.coeffs[0].clone()).collect())
            .collect();
        self.coeff.matrix_invertible(&const_rows)
    }
}
