//! Exact arithmetic in finite fields F_q = F_{p^ν} and their extension
//! towers, including Frobenius maps, norms, enumeration, and small discrete
//! logarithms in roots-of-unity subgroups.
//!
//! Fields are deliberately enumeration-scale: every algorithm here is exact
//! and proceeds by direct scanning, never by factorization machinery.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Default cap on direct element enumeration.
pub const DEFAULT_ENUMERATION_BOUND: u128 = 1_000_000;

#[derive(Debug)]
struct FieldData {
    p: u64,
    nu: usize,
    /// Monic modulus, length `nu + 1`, coefficients low-to-high.
    modulus: Vec<u64>,
    size: u64,
    /// `x^k mod modulus` for `k = nu .. 2*nu - 2`, used by multiplication.
    reductions: Vec<Vec<u64>>,
    /// Matrix of the p-power Frobenius in the monomial basis (columns are
    /// images of `x^i`).
    frob_p: OnceLock<Vec<Vec<u64>>>,
}

/// A finite field F_{p^ν}, carried as Z/p[x] modulo a fixed monic
/// irreducible polynomial of degree ν.
///
/// Cloning is cheap; two values compare equal iff they have the same
/// characteristic, degree, and modulus.
#[derive(Clone)]
pub struct FqField(Arc<FieldData>);

/// An element of an [`FqField`], as a length-ν coefficient vector over Z/p
/// (low degree first), always reduced into `[0, p)`.
#[derive(Clone)]
pub struct FqElem {
    field: FqField,
    coeffs: Vec<u64>,
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.nu == other.0.nu
                && self.0.modulus == other.0.modulus)
    }
}
impl Eq for FqField {}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{{{}^{}}}", self.0.p, self.0.nu)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// --- dense univariate arithmetic over Z/p (helpers for modulus scanning) ---

fn poly_trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn poly_rem_modp(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    // b must be monic
    let mut r: Vec<u64> = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !(r.len() == 1 && r[0] == 0) {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let shift = r.len() - 1 - db;
            for i in 0..=db {
                let idx = shift + i;
                r[idx] = (r[idx] + p - lead * b[i] % p) % p;
            }
        }
        r.pop();
        poly_trim(&mut r);
        if r.iter().all(|&c| c == 0) {
            return vec![0];
        }
    }
    poly_trim(&mut r);
    r
}

fn poly_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Irreducibility over Z/p by trial division over all monic divisors of
/// degree at most deg/2. Exact and fine at desk scale.
fn is_irreducible_modp(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            // monic divisor candidate of degree d, little-endian digits of idx
            let mut div = Vec::with_capacity(d + 1);
            let mut k = idx;
            for _ in 0..d {
                div.push(k % p);
                k /= p;
            }
            div.push(1);
            if poly_is_zero(&poly_rem_modp(poly, &div, p)) {
                return false;
            }
        }
    }
    true
}

impl FqField {
    /// Build F_{p^ν}. The modulus is the monic irreducible polynomial of
    /// degree ν over Z/p with the smallest encoding Σ cᵢ pⁱ, so construction
    /// is deterministic across runs. For ν = 1 this is the polynomial `x`.
    pub fn new(p: u64, nu: usize) -> Result<FqField> {
        if !is_prime(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        assert!(nu >= 1, "extension degree must be positive");
        let size = (p as u128)
            .checked_pow(nu as u32)
            .ok_or(Error::SizeOverflow)?;
        let size: u64 = size.try_into().map_err(|_| Error::SizeOverflow)?;

        let mut modulus = None;
        let count = size; // p^nu monic candidates
        for idx in 0..count {
            let mut cand = Vec::with_capacity(nu + 1);
            let mut k = idx;
            for _ in 0..nu {
                cand.push(k % p);
                k /= p;
            }
            cand.push(1);
            if is_irreducible_modp(&cand, p) {
                modulus = Some(cand);
                break;
            }
        }
        let modulus = modulus.expect("an irreducible polynomial of every degree exists");

        // reduction table for x^nu .. x^{2nu-2}
        let mut reductions: Vec<Vec<u64>> = Vec::with_capacity(nu.max(1) - 1);
        let mut cur: Vec<u64> = (0..nu).map(|i| (p - modulus[i] % p) % p).collect(); // x^nu
        reductions.push(cur.clone());
        for _ in 1..nu.saturating_sub(1) {
            // multiply cur by x, reduce
            let carry = cur[nu - 1];
            let mut next = vec![0u64; nu];
            for i in (1..nu).rev() {
                next[i] = cur[i - 1];
            }
            if carry != 0 {
                for i in 0..nu {
                    next[i] = (next[i] + carry * reductions[0][i]) % p;
                }
            }
            reductions.push(next.clone());
            cur = next;
        }

        Ok(FqField(Arc::new(FieldData {
            p,
            nu,
            modulus,
            size,
            reductions,
            frob_p: OnceLock::new(),
        })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn nu(&self) -> usize {
        self.0.nu
    }

    /// Number of elements, q = p^ν.
    pub fn size(&self) -> u64 {
        self.0.size
    }

    /// Modulus coefficients, low degree first, length ν + 1.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FqElem {
        FqElem {
            field: self.clone(),
            coeffs: vec![0; self.0.nu],
        }
    }

    pub fn one(&self) -> FqElem {
        self.from_scalar(1)
    }

    /// Constant element from a residue of Z/p.
    pub fn from_scalar(&self, c: u64) -> FqElem {
        let mut coeffs = vec![0; self.0.nu];
        coeffs[0] = c % self.0.p;
        FqElem {
            field: self.clone(),
            coeffs,
        }
    }

    /// Element from a coefficient vector (low degree first), reduced mod p.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FqElem {
        assert!(coeffs.len() <= self.0.nu, "coefficient vector too long");
        let mut c = vec![0; self.0.nu];
        for (i, &v) in coeffs.iter().enumerate() {
            c[i] = v % self.0.p;
        }
        FqElem {
            field: self.clone(),
            coeffs: c,
        }
    }

    /// The element with encoding `idx` (little-endian base-p digits).
    pub fn element_from_index(&self, idx: u64) -> FqElem {
        debug_assert!(idx < self.0.size);
        let mut coeffs = vec![0; self.0.nu];
        let mut k = idx;
        for c in coeffs.iter_mut() {
            *c = k % self.0.p;
            k /= self.0.p;
        }
        FqElem {
            field: self.clone(),
            coeffs,
        }
    }

    /// All q elements in encoding order, guarded by the default bound.
    pub fn elements(&self) -> Result<impl Iterator<Item = FqElem> + '_> {
        self.elements_bounded(DEFAULT_ENUMERATION_BOUND)
    }

    /// All q elements in encoding order, guarded by an explicit bound.
    pub fn elements_bounded(&self, bound: u128) -> Result<impl Iterator<Item = FqElem> + '_> {
        if (self.0.size as u128) > bound {
            return Err(Error::EnumerationTooLarge {
                size: self.0.size as u128,
                bound,
            });
        }
        Ok((0..self.0.size).map(move |i| self.element_from_index(i)))
    }

    /// Matrix of the p-power Frobenius (computed once per field).
    fn frob_p_matrix(&self) -> &Vec<Vec<u64>> {
        self.0.frob_p.get_or_init(|| {
            let nu = self.0.nu;
            let mut cols = Vec::with_capacity(nu);
            for i in 0..nu {
                let mut basis = vec![0u64; nu];
                basis[i] = 1;
                let e = FqElem {
                    field: self.clone(),
                    coeffs: basis,
                };
                cols.push(e.pow_u64(self.0.p).coeffs);
            }
            cols
        })
    }

    /// a ↦ a^{p^e}, via repeated application of the cached Frobenius matrix.
    pub fn frobenius_power(&self, a: &FqElem, e: usize) -> FqElem {
        assert!(a.field == *self, "element not in this field");
        let cols = self.frob_p_matrix();
        let p = self.0.p;
        let nu = self.0.nu;
        let mut cur = a.coeffs.clone();
        for _ in 0..e {
            let mut next = vec![0u64; nu];
            for (i, c) in cur.iter().enumerate() {
                if *c != 0 {
                    for r in 0..nu {
                        next[r] = (next[r] + c * cols[i][r]) % p;
                    }
                }
            }
            cur = next;
        }
        FqElem {
            field: self.clone(),
            coeffs: cur,
        }
    }

    /// Smallest-encoding element of exact multiplicative order r — the
    /// canonical generator of μ_r. Errors when no such element exists
    /// (r must divide q − 1).
    pub fn mu_generator(&self, r: u64) -> Result<FqElem> {
        if r == 0 || !(self.size() - 1).is_multiple_of(r) {
            return Err(Error::BadOrder { expected: r });
        }
        for idx in 1..self.size() {
            let z = self.element_from_index(idx);
            if z.has_exact_order(r) {
                return Ok(z);
            }
        }
        Err(Error::BadOrder { expected: r })
    }
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}
impl Eq for FqElem {}

impl FqElem {
    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Canonical integer encoding Σ cᵢ pⁱ. Encoding order is the
    /// deterministic order used everywhere (enumeration, representatives).
    pub fn encoding(&self) -> u64 {
        let p = self.field.0.p;
        let mut v = 0u64;
        for &c in self.coeffs.iter().rev() {
            v = v * p + c;
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &FqElem) -> FqElem {
        assert!(self.field == other.field, "field mismatch");
        let p = self.field.0.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + b) % p)
            .collect();
        FqElem {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &FqElem) -> FqElem {
        assert!(self.field == other.field, "field mismatch");
        let p = self.field.0.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + p - b) % p)
            .collect();
        FqElem {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn neg(&self) -> FqElem {
        let p = self.field.0.p;
        let coeffs = self.coeffs.iter().map(|a| (p - a) % p).collect();
        FqElem {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn mul(&self, other: &FqElem) -> FqElem {
        assert!(self.field == other.field, "field mismatch");
        let d = &self.field.0;
        let p = d.p;
        let nu = d.nu;
        // convolution, then reduce high-degree terms via the cached table
        let mut conv = vec![0u64; 2 * nu - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if *b != 0 {
                    conv[i + j] = (conv[i + j] + a * b) % p;
                }
            }
        }
        let mut out = vec![0u64; nu];
        out.copy_from_slice(&conv[..nu]);
        for k in nu..2 * nu - 1 {
            let c = conv[k];
            if c != 0 {
                let red = &d.reductions[k - nu];
                for i in 0..nu {
                    out[i] = (out[i] + c * red[i]) % p;
                }
            }
        }
        FqElem {
            field: self.field.clone(),
            coeffs: out,
        }
    }

    fn pow_u64(&self, mut k: u64) -> FqElem {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// a^k by square-and-multiply; negative k inverts first and requires
    /// a ≠ 0.
    pub fn pow(&self, k: i64) -> Result<FqElem> {
        if k >= 0 {
            Ok(self.pow_u64(k as u64))
        } else {
            let inv = self.inverse()?;
            Ok(inv.pow_u64(k.unsigned_abs()))
        }
    }

    pub fn inverse(&self) -> Result<FqElem> {
        if self.is_zero() {
            return Err(Error::ZeroToNegativePower);
        }
        Ok(self.pow_u64(self.field.size() - 2))
    }

    /// Exact multiplicative order equals r (checks all proper divisors).
    pub fn has_exact_order(&self, r: u64) -> bool {
        if self.is_zero() || !self.pow_u64(r).is_one() {
            return false;
        }
        for d in 1..r {
            if r.is_multiple_of(d) && self.pow_u64(d).is_one() {
                return false;
            }
        }
        true
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let part = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}*x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}*x^{i}"),
            };
            parts.push(part);
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// An extension F_{q^d} of a declared base F_q, with a fixed embedding.
///
/// The embedding sends the base generator to the smallest root (in encoding
/// order) of the base modulus inside the extension, so towers are
/// deterministic. Cross-tower operations are rejected rather than coerced.
pub struct FieldExtension {
    base: FqField,
    top: FqField,
    degree: usize,
    /// powers of the chosen root, `root^0 .. root^{nu_base - 1}`
    gen_powers: Vec<FqElem>,
    /// encoding-of-embedded-element → base element encoding, built lazily
    norm_table: OnceLock<HashMap<u64, u64>>,
    /// matrix of the q-power Frobenius of the top field (q = base size)
    frob_q: OnceLock<Vec<Vec<u64>>>,
}

impl FieldExtension {
    /// F_{q^d} over `base`, with the embedding fixed as documented.
    pub fn new(base: &FqField, d: usize) -> Result<FieldExtension> {
        assert!(d >= 1, "extension degree must be positive");
        let top = FqField::new(base.p(), base.nu() * d)?;
        // find the smallest root of base.modulus in top
        let mut root = None;
        for idx in 0..top.size() {
            let cand = top.element_from_index(idx);
            let mut acc = top.zero();
            // evaluate the base modulus (coefficients in Z/p) at cand
            let mut pw = top.one();
            for &m in base.modulus() {
                if m != 0 {
                    acc = acc.add(&pw.mul(&top.from_scalar(m)));
                }
                pw = pw.mul(&cand);
            }
            if acc.is_zero() {
                root = Some(cand);
                break;
            }
        }
        let root = root.expect("the base modulus splits in the extension");
        let mut gen_powers = Vec::with_capacity(base.nu());
        let mut pw = top.one();
        for _ in 0..base.nu() {
            gen_powers.push(pw.clone());
            pw = pw.mul(&root);
        }
        Ok(FieldExtension {
            base: base.clone(),
            top,
            degree: d,
            gen_powers,
            norm_table: OnceLock::new(),
            frob_q: OnceLock::new(),
        })
    }

    pub fn base(&self) -> &FqField {
        &self.base
    }

    pub fn top(&self) -> &FqField {
        &self.top
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Embed a base element into the extension.
    pub fn embed(&self, a: &FqElem) -> FqElem {
        assert!(*a.field() == self.base, "element not in the declared base");
        let mut acc = self.top.zero();
        for (i, &c) in a.coeffs().iter().enumerate() {
            if c != 0 {
                acc = acc.add(&self.gen_powers[i].mul(&self.top.from_scalar(c)));
            }
        }
        acc
    }

    fn frob_q_matrix(&self) -> &Vec<Vec<u64>> {
        self.frob_q.get_or_init(|| {
            let nu = self.top.nu();
            let mut cols = Vec::with_capacity(nu);
            for i in 0..nu {
                let mut basis = vec![0u64; nu];
                basis[i] = 1;
                let e = FqElem {
                    field: self.top.clone(),
                    coeffs: basis,
                };
                cols.push(self.top.frobenius_power(&e, self.base.nu()).coeffs);
            }
            cols
        })
    }

    /// The q-power Frobenius a ↦ a^q of the top field, q = |base|.
    pub fn frobenius(&self, a: &FqElem) -> FqElem {
        assert!(*a.field() == self.top, "element not in the extension");
        let cols = self.frob_q_matrix();
        let p = self.top.p();
        let nu = self.top.nu();
        let mut next = vec![0u64; nu];
        for (i, c) in a.coeffs().iter().enumerate() {
            if *c != 0 {
                for r in 0..nu {
                    next[r] = (next[r] + c * cols[i][r]) % p;
                }
            }
        }
        FqElem {
            field: self.top.clone(),
            coeffs: next,
        }
    }

    /// Norm down to the base: Π a^{q^i} for i = 0..d−1, returned as a base
    /// element (0 maps to 0).
    pub fn norm(&self, a: &FqElem) -> Result<FqElem> {
        if *a.field() != self.top {
            return Err(Error::NotInTower(format!(
                "element of {:?} has no norm to {:?} along this extension",
                a.field(),
                self.base
            )));
        }
        if a.is_zero() {
            return Ok(self.base.zero());
        }
        let mut acc = a.clone();
        let mut frob = a.clone();
        for _ in 1..self.degree {
            frob = self.frobenius(&frob);
            acc = acc.mul(&frob);
        }
        let table = self.norm_table.get_or_init(|| {
            let mut t = HashMap::with_capacity(self.base.size() as usize);
            for idx in 0..self.base.size() {
                let b = self.base.element_from_index(idx);
                t.insert(self.embed(&b).encoding(), idx);
            }
            t
        });
        let idx = table.get(&acc.encoding()).copied().ok_or_else(|| {
            Error::NotInTower("norm landed outside the embedded base field".into())
        })?;
        Ok(self.base.element_from_index(idx))
    }
}

/// The unique e in [0, r) with ζ^e = z, by scanning the r powers.
///
/// ζ must have exact order r and z must satisfy z^r = 1.
pub fn dlog_in_mu(z: &FqElem, zeta: &FqElem, r: u64) -> Result<u64> {
    if !zeta.has_exact_order(r) {
        return Err(Error::BadOrder { expected: r });
    }
    if !zeta.field().eq(z.field()) || !z.pow_u64(r).is_one() {
        return Err(Error::NotInSubgroup { r });
    }
    let mut pw = z.field().one();
    for e in 0..r {
        if pw == *z {
            return Ok(e);
        }
        pw = pw.mul(zeta);
    }
    unreachable!("z^r = 1 guarantees z is a power of an exact-order-r zeta")
}
