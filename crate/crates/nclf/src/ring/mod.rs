//! Finite coefficient rings Λ: Z/m, group rings Z/m[G], and finite products,
//! together with their units, Jacobson radicals, and ring homomorphisms.
//!
//! These are the finite-level stand-ins for adic rings: all computation fixes
//! one finite quotient, and compatibility across quotients is exercised by
//! the truncation-coherence tests in the L-function layer.

pub mod group;
pub mod hom;
pub(crate) mod zlin;

pub use group::GroupTable;
pub use hom::RingHom;

pub(crate) use zlin::gcd as zlin_gcd;

use crate::error::{Error, Result};
use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Cap on ring size for the definitional Jacobson-radical scan.
pub const RADICAL_SCAN_CAP: u128 = 10_000;
/// Cap on ring size for unit-group enumeration.
pub const UNIT_ENUM_CAP: u128 = 1_000_000;
/// Cap on group-ring size m^g.
pub const GROUP_RING_SIZE_CAP: u128 = 1_000_000_000;

#[derive(Debug)]
pub enum RingData {
    ZMod { m: u64 },
    GroupRing { m: u64, group: GroupTable },
    Product { factors: Vec<Ring> },
}

#[derive(Debug)]
struct RingRepr {
    data: RingData,
    size: u128,
    commutative: bool,
    radical_encodings: OnceLock<BTreeSet<Vec<u64>>>,
}

/// Descriptor of a finite coefficient ring. Cheap to clone.
#[derive(Clone)]
pub struct Ring(Arc<RingRepr>);

/// Element payload; always reduced into `[0, m)` coefficientwise.
#[derive(Clone, PartialEq, Debug)]
pub enum ElemData {
    Z(u64),
    Gr(Vec<u64>),
    Prod(Vec<RingElem>),
}

/// An element of a [`Ring`].
#[derive(Clone)]
pub struct RingElem {
    ring: Ring,
    data: ElemData,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (&self.0.data, &other.0.data) {
            (RingData::ZMod { m: a }, RingData::ZMod { m: b }) => a == b,
            (RingData::GroupRing { m: a, group: g }, RingData::GroupRing { m: b, group: h }) => {
                a == b && g == h
            }
            (RingData::Product { factors: a }, RingData::Product { factors: b }) => a == b,
            _ => false,
        }
    }
}
impl Eq for Ring {}

macro_rules! unreachable_kind {
    () => {
        unreachable!("element payload does not match ring kind")
    };
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.data {
            RingData::ZMod { m } => write!(f, "Z/{m}"),
            RingData::GroupRing { m, group } => write!(f, "Z/{m}[{group:?}]"),
            RingData::Product { factors } => {
                let names: Vec<String> = factors.iter().map(|r| format!("{r:?}")).collect();
                write!(f, "{}", names.join(" x "))
            }
        }
    }
}

impl Ring {
    pub fn zmod(m: u64) -> Result<Ring> {
        if m < 2 {
            return Err(Error::Invalid("modulus must be at least 2".into()));
        }
        Ok(Ring(Arc::new(RingRepr {
            data: RingData::ZMod { m },
            size: m as u128,
            commutative: true,
            radical_encodings: OnceLock::new(),
        })))
    }

    pub fn group_ring(m: u64, group: GroupTable) -> Result<Ring> {
        if m < 2 {
            return Err(Error::Invalid("modulus must be at least 2".into()));
        }
        let size = (m as u128)
            .checked_pow(group.order() as u32)
            .ok_or(Error::SizeOverflow)?;
        if size > GROUP_RING_SIZE_CAP {
            return Err(Error::SizeOverflow);
        }
        let commutative = group.is_abelian();
        Ok(Ring(Arc::new(RingRepr {
            data: RingData::GroupRing { m, group },
            size,
            commutative,
            radical_encodings: OnceLock::new(),
        })))
    }

    pub fn product(factors: Vec<Ring>) -> Result<Ring> {
        if factors.is_empty() {
            return Err(Error::Invalid("product needs at least one factor".into()));
        }
        let mut size: u128 = 1;
        for f in &factors {
            size = size.checked_mul(f.size()).ok_or(Error::SizeOverflow)?;
        }
        let commutative = factors.iter().all(|f| f.is_commutative());
        Ok(Ring(Arc::new(RingRepr {
            data: RingData::Product { factors },
            size,
            commutative,
            radical_encodings: OnceLock::new(),
        })))
    }

    pub fn data(&self) -> &RingData {
        &self.0.data
    }

    pub fn size(&self) -> u128 {
        self.0.size
    }

    pub fn is_commutative(&self) -> bool {
        self.0.commutative
    }

    /// The group table, for group rings.
    pub fn group(&self) -> Option<&GroupTable> {
        match &self.0.data {
            RingData::GroupRing { group, .. } => Some(group),
            _ => None,
        }
    }

    /// The base modulus of a Z/m or Z/m[G] ring.
    pub fn base_modulus(&self) -> Option<u64> {
        match &self.0.data {
            RingData::ZMod { m } | RingData::GroupRing { m, .. } => Some(*m),
            RingData::Product { .. } => None,
        }
    }

    pub fn zero(&self) -> RingElem {
        let data = match &self.0.data {
            RingData::ZMod { .. } => ElemData::Z(0),
            RingData::GroupRing { group, .. } => ElemData::Gr(vec![0; group.order()]),
            RingData::Product { factors } => {
                ElemData::Prod(factors.iter().map(|f| f.zero()).collect())
            }
        };
        RingElem {
            ring: self.clone(),
            data,
        }
    }

    pub fn one(&self) -> RingElem {
        self.from_u64(1)
    }

    /// k·1, the canonical image of an integer.
    pub fn from_u64(&self, k: u64) -> RingElem {
        let data = match &self.0.data {
            RingData::ZMod { m } => ElemData::Z(k % m),
            RingData::GroupRing { m, group } => {
                let mut c = vec![0; group.order()];
                c[group.identity()] = k % m;
                ElemData::Gr(c)
            }
            RingData::Product { factors } => {
                ElemData::Prod(factors.iter().map(|f| f.from_u64(k)).collect())
            }
        };
        RingElem {
            ring: self.clone(),
            data,
        }
    }

    /// Image of an arbitrary-precision integer (reduction mod the
    /// characteristic, componentwise for products).
    pub fn from_bigint(&self, v: &BigInt) -> RingElem {
        match &self.0.data {
            RingData::ZMod { m } | RingData::GroupRing { m, .. } => {
                let r = ((v % m) + m) % m;
                let r: u64 = r.try_into().expect("residue fits");
                self.from_u64(r)
            }
            RingData::Product { factors } => RingElem {
                ring: self.clone(),
                data: ElemData::Prod(factors.iter().map(|f| f.from_bigint(v)).collect()),
            },
        }
    }

    /// Z/m element from a residue.
    pub fn zmod_elem(&self, v: u64) -> RingElem {
        match &self.0.data {
            RingData::ZMod { m } => RingElem {
                ring: self.clone(),
                data: ElemData::Z(v % m),
            },
            _ => panic!("zmod_elem on a non-Z/m ring"),
        }
    }

    /// Group-ring element from a coefficient vector indexed by group element.
    pub fn gr_elem(&self, coeffs: &[u64]) -> RingElem {
        match &self.0.data {
            RingData::GroupRing { m, group } => {
                assert_eq!(
                    coeffs.len(),
                    group.order(),
                    "coefficient count must match order"
                );
                let c = coeffs.iter().map(|&v| v % m).collect();
                RingElem {
                    ring: self.clone(),
                    data: ElemData::Gr(c),
                }
            }
            _ => panic!("gr_elem on a non-group-ring"),
        }
    }

    /// The basis element of a group ring at group index g.
    pub fn gr_basis(&self, g: usize) -> RingElem {
        match &self.0.data {
            RingData::GroupRing { group, .. } => {
                let mut c = vec![0; group.order()];
                c[g] = 1;
                RingElem {
                    ring: self.clone(),
                    data: ElemData::Gr(c),
                }
            }
            _ => panic!("gr_basis on a non-group-ring"),
        }
    }

    pub fn product_elem(&self, parts: Vec<RingElem>) -> RingElem {
        match &self.0.data {
            RingData::Product { factors } => {
                assert_eq!(parts.len(), factors.len());
                for (p, f) in parts.iter().zip(factors) {
                    assert!(p.ring == *f, "component in wrong factor ring");
                }
                RingElem {
                    ring: self.clone(),
                    data: ElemData::Prod(parts),
                }
            }
            _ => panic!("product_elem on a non-product ring"),
        }
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        assert!(a.ring == *self && b.ring == *self, "ring mismatch");
        let data = match (&self.0.data, &a.data, &b.data) {
            (RingData::ZMod { m }, ElemData::Z(x), ElemData::Z(y)) => ElemData::Z((x + y) % m),
            (RingData::GroupRing { m, .. }, ElemData::Gr(x), ElemData::Gr(y)) => {
                ElemData::Gr(x.iter().zip(y).map(|(u, v)| (u + v) % m).collect())
            }
            (RingData::Product { factors }, ElemData::Prod(x), ElemData::Prod(y)) => {
                ElemData::Prod(
                    factors
                        .iter()
                        .zip(x.iter().zip(y))
                        .map(|(f, (u, v))| f.add(u, v))
                        .collect(),
                )
            }
            _ => unreachable_kind!(),
        };
        RingElem {
            ring: self.clone(),
            data,
        }
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        assert!(a.ring == *self, "ring mismatch");
        let data = match (&self.0.data, &a.data) {
            (RingData::ZMod { m }, ElemData::Z(x)) => ElemData::Z((m - x) % m),
            (RingData::GroupRing { m, .. }, ElemData::Gr(x)) => {
                ElemData::Gr(x.iter().map(|v| (m - v) % m).collect())
            }
            (RingData::Product { factors }, ElemData::Prod(x)) => {
                ElemData::Prod(factors.iter().zip(x).map(|(f, u)| f.neg(u)).collect())
            }
            _ => unreachable_kind!(),
        };
        RingElem {
            ring: self.clone(),
            data,
        }
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        assert!(a.ring == *self && b.ring == *self, "ring mismatch");
        let data = match (&self.0.data, &a.data, &b.data) {
            (RingData::ZMod { m }, ElemData::Z(x), ElemData::Z(y)) => ElemData::Z(x * y % m),
            (RingData::GroupRing { m, group }, ElemData::Gr(x), ElemData::Gr(y)) => {
                let g = group.order();
                let mut out = vec![0u64; g];
                for (i, &xi) in x.iter().enumerate() {
                    if xi == 0 {
                        continue;
                    }
                    for (j, &yj) in y.iter().enumerate() {
                        if yj != 0 {
                            let k = group.mul(i, j);
                            out[k] = (out[k] + xi * yj) % m;
                        }
                    }
                }
                ElemData::Gr(out)
            }
            (RingData::Product { factors }, ElemData::Prod(x), ElemData::Prod(y)) => {
                ElemData::Prod(
                    factors
                        .iter()
                        .zip(x.iter().zip(y))
                        .map(|(f, (u, v))| f.mul(u, v))
                        .collect(),
                )
            }
            _ => unreachable_kind!(),
        };
        RingElem {
            ring: self.clone(),
            data,
        }
    }

    pub fn pow(&self, a: &RingElem, mut k: u64) -> RingElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative order of a unit (scans powers; intended for small
    /// orders such as roots of unity).
    pub fn order_of_unit(&self, a: &RingElem) -> u64 {
        let mut x = a.clone();
        let mut n = 1;
        while !x.is_one() {
            x = self.mul(&x, a);
            n += 1;
        }
        n
    }

    pub fn element_from_index(&self, idx: u128) -> RingElem {
        debug_assert!(idx < self.size());
        let data = match &self.0.data {
            RingData::ZMod { .. } => ElemData::Z(idx as u64),
            RingData::GroupRing { m, group } => {
                let mut c = vec![0u64; group.order()];
                let mut k = idx;
                for v in c.iter_mut() {
                    *v = (k % *m as u128) as u64;
                    k /= *m as u128;
                }
                ElemData::Gr(c)
            }
            RingData::Product { factors } => {
                let mut parts = Vec::with_capacity(factors.len());
                let mut k = idx;
                for f in factors {
                    parts.push(f.element_from_index(k % f.size()));
                    k /= f.size();
                }
                ElemData::Prod(parts)
            }
        };
        RingElem {
            ring: self.clone(),
            data,
        }
    }

    pub fn index_of(&self, a: &RingElem) -> u128 {
        assert!(a.ring == *self, "ring mismatch");
        match (&self.0.data, &a.data) {
            (RingData::ZMod { .. }, ElemData::Z(v)) => *v as u128,
            (RingData::GroupRing { m, .. }, ElemData::Gr(c)) => {
                let mut idx: u128 = 0;
                for &v in c.iter().rev() {
                    idx = idx * (*m as u128) + v as u128;
                }
                idx
            }
            (RingData::Product { factors }, ElemData::Prod(parts)) => {
                let mut idx: u128 = 0;
                for (f, p) in factors.iter().zip(parts).rev() {
                    idx = idx * f.size() + f.index_of(p);
                }
                idx
            }
            _ => unreachable_kind!(),
        }
    }

    /// All elements in index order, when the size is within `cap`.
    pub fn elements(&self, cap: u128) -> Result<Vec<RingElem>> {
        if self.size() > cap {
            return Err(Error::EnumerationTooLarge {
                size: self.size(),
                bound: cap,
            });
        }
        Ok((0..self.size())
            .map(|i| self.element_from_index(i))
            .collect())
    }

    /// Right-regular action matrix of `a` over Z/m (group rings): the matrix
    /// of x ↦ x·a on the free Z/m-module with basis G.
    fn right_regular_matrix(&self, a: &RingElem) -> Vec<Vec<u64>> {
        match (&self.0.data, &a.data) {
            (RingData::GroupRing { group, .. }, ElemData::Gr(c)) => {
                let g = group.order();
                let mut mat = vec![vec![0u64; g]; g];
                // image of basis e_h is Σ_k c_k e_{h·k}
                for h in 0..g {
                    for (k, &ck) in c.iter().enumerate() {
                        if ck != 0 {
                            mat[group.mul(h, k)][h] = ck;
                        }
                    }
                }
                mat
            }
            _ => unreachable_kind!(),
        }
    }

    /// Left-regular action matrix of `a` over Z/m (group rings).
    pub(crate) fn left_regular_matrix(&self, a: &RingElem) -> Vec<Vec<u64>> {
        match (&self.0.data, &a.data) {
            (RingData::GroupRing { group, .. }, ElemData::Gr(c)) => {
                let g = group.order();
                let mut mat = vec![vec![0u64; g]; g];
                // image of basis e_h is Σ_k c_k e_{k·h}
                for h in 0..g {
                    for (k, &ck) in c.iter().enumerate() {
                        if ck != 0 {
                            mat[group.mul(k, h)][h] = ck;
                        }
                    }
                }
                mat
            }
            _ => unreachable_kind!(),
        }
    }

    pub fn is_unit(&self, a: &RingElem) -> bool {
        assert!(a.ring == *self, "ring mismatch");
        match (&self.0.data, &a.data) {
            (RingData::ZMod { m }, ElemData::Z(v)) => zlin::gcd(*v, *m) == 1,
            (RingData::GroupRing { m, .. }, ElemData::Gr(_)) => {
                zlin::is_invertible(*m, &self.right_regular_matrix(a))
            }
            (RingData::Product { factors }, ElemData::Prod(parts)) => {
                factors.iter().zip(parts).all(|(f, p)| f.is_unit(p))
            }
            _ => unreachable_kind!(),
        }
    }

    pub fn inverse(&self, a: &RingElem) -> Result<RingElem> {
        assert!(a.ring == *self, "ring mismatch");
        match (&self.0.data, &a.data) {
            (RingData::ZMod { m }, ElemData::Z(v)) => {
                let i = zlin::inv_mod(*v, *m).ok_or(Error::NotAUnit)?;
                Ok(self.zmod_elem(i))
            }
            (RingData::GroupRing { m, group }, ElemData::Gr(_)) => {
                let mat = self.right_regular_matrix(a);
                let inv = zlin::invert(*m, &mat).ok_or(Error::NotAUnit)?;
                // x·a = 1 where x = inv applied to e_identity
                let e = group.identity();
                let coeffs: Vec<u64> = (0..group.order()).map(|r| inv[r][e]).collect();
                let x = self.gr_elem(&coeffs);
                debug_assert!(self.mul(&x, a).is_one() && self.mul(a, &x).is_one());
                Ok(x)
            }
            (RingData::Product { factors }, ElemData::Prod(parts)) => {
                let inv: Result<Vec<RingElem>> = factors
                    .iter()
                    .zip(parts)
                    .map(|(f, p)| f.inverse(p))
                    .collect();
                Ok(RingElem {
                    ring: self.clone(),
                    data: ElemData::Prod(inv?),
                })
            }
            _ => unreachable_kind!(),
        }
    }

    /// Is the integer k invertible in this ring (gcd with every base
    /// modulus is 1)?
    pub fn integer_is_unit(&self, k: u64) -> bool {
        match &self.0.data {
            RingData::ZMod { m } | RingData::GroupRing { m, .. } => zlin::gcd(k % m, *m) == 1,
            RingData::Product { factors } => factors.iter().all(|f| f.integer_is_unit(k)),
        }
    }

    /// The Jacobson radical as an explicit sorted element list, by the
    /// definitional double scan: x is in the radical iff 1 − r·x is a unit
    /// for every r.
    pub fn jacobson_radical(&self) -> Result<Vec<RingElem>> {
        if self.size() > RADICAL_SCAN_CAP {
            return Err(Error::EnumerationTooLarge {
                size: self.size(),
                bound: RADICAL_SCAN_CAP,
            });
        }
        let set = self.0.radical_encodings.get_or_init(|| {
            let one = self.one();
            let elems: Vec<RingElem> = (0..self.size())
                .map(|i| self.element_from_index(i))
                .collect();
            let mut out = BTreeSet::new();
            for x in &elems {
                let ok = elems.iter().all(|r| {
                    let t = self.sub(&one, &self.mul(r, x));
                    self.is_unit(&t)
                });
                if ok {
                    out.insert(x.encode());
                }
            }
            out
        });
        let mut v: Vec<RingElem> = (0..self.size())
            .map(|i| self.element_from_index(i))
            .filter(|e| set.contains(&e.encode()))
            .collect();
        v.sort_by_key(|e| self.index_of(e));
        Ok(v)
    }

    /// Structural radical for the cases with a closed description:
    /// multiples of rad(m) for Z/m, and the ideal generated by ℓ and the
    /// augmentation ideal for Z/ℓⁿ[G] with G an ℓ-group.
    pub fn jacobson_radical_structural(&self) -> Option<Vec<RingElem>> {
        match &self.0.data {
            RingData::ZMod { m } => {
                let r = radical_of_modulus(*m);
                Some(
                    (0..*m)
                        .step_by(r as usize)
                        .map(|v| self.zmod_elem(v))
                        .collect(),
                )
            }
            RingData::GroupRing { m, group } => {
                let l = smallest_prime_factor(*m);
                if !is_prime_power(*m, l) || !is_power_of(group.order() as u64, l) {
                    return None;
                }
                // additive closure of { ℓ·e_h } ∪ { e_{gh} − e_h }
                let g = group.order();
                let mut gens: Vec<RingElem> = Vec::new();
                for h in 0..g {
                    let mut c = vec![0u64; g];
                    c[h] = l % m;
                    gens.push(self.gr_elem(&c));
                    for gg in 0..g {
                        let gh = group.mul(gg, h);
                        if gh != h {
                            let mut c = vec![0u64; g];
                            c[gh] = 1;
                            c[h] = m - 1;
                            gens.push(self.gr_elem(&c));
                        }
                    }
                }
                let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
                let zero = self.zero();
                seen.insert(zero.encode());
                let mut queue = vec![zero];
                let mut head = 0;
                while head < queue.len() {
                    let x = queue[head].clone();
                    head += 1;
                    for gen in &gens {
                        let y = self.add(&x, gen);
                        if seen.insert(y.encode()) {
                            queue.push(y);
                        }
                    }
                }
                queue.sort_by_key(|e| self.index_of(e));
                Some(queue)
            }
            RingData::Product { .. } => None,
        }
    }

    /// Membership in the Jacobson radical, via the memoized radical set for
    /// small rings or the structural shortcut for Z/m.
    pub fn in_radical(&self, a: &RingElem) -> Result<bool> {
        if let RingData::ZMod { m } = &self.0.data {
            if let ElemData::Z(v) = &a.data {
                return Ok(v % radical_of_modulus(*m) == 0);
            }
        }
        let rad = self.jacobson_radical()?;
        Ok(rad.iter().any(|e| e == a))
    }

    /// The unit group, enumerated once and indexed.
    pub fn units(&self) -> Result<UnitGroup> {
        if self.size() > UNIT_ENUM_CAP {
            return Err(Error::EnumerationTooLarge {
                size: self.size(),
                bound: UNIT_ENUM_CAP,
            });
        }
        let mut elems = Vec::new();
        let mut index = HashMap::new();
        for i in 0..self.size() {
            let e = self.element_from_index(i);
            if self.is_unit(&e) {
                index.insert(e.encode(), elems.len());
                elems.push(e);
            }
        }
        Ok(UnitGroup {
            ring: self.clone(),
            elems,
            index,
        })
    }

    /// A unit of exact multiplicative order r. For Z/ℓⁿ this Hensel-lifts a
    /// root of unity from Z/ℓ (requires r | ℓ−1); other rings fall back to a
    /// unit scan.
    pub fn root_of_unity(&self, r: u64) -> Result<RingElem> {
        if r == 1 {
            return Ok(self.one());
        }
        if let RingData::ZMod { m } = &self.0.data {
            let l = smallest_prime_factor(*m);
            if is_prime_power(*m, l) {
                if l == 2 || !(l - 1).is_multiple_of(r) || zlin::gcd(r, l) != 1 {
                    // the Hensel premise (r | ℓ−1, gcd(r, ℓ) = 1) fails;
                    // fall back to scanning the units
                    return self.root_of_unity_by_scan(r);
                }
                // seed of exact order r mod ℓ
                let mut seed = None;
                for a in 2..l {
                    if has_exact_order_mod(a, r, l) {
                        seed = Some(a);
                        break;
                    }
                }
                let seed = seed.ok_or_else(|| {
                    Error::BadCharacterOrder(format!("no element of order {r} mod {l}"))
                })?;
                // Newton lift x ← x − (x^r − 1) / (r·x^{r−1}) mod m
                let m = *m;
                let mut x = seed % m;
                for _ in 0..64 {
                    let xr = pow_mod(x, r, m);
                    if xr == 1 {
                        break;
                    }
                    let deriv = r % m * pow_mod(x, r - 1, m) % m;
                    let dinv = zlin::inv_mod(deriv, m).expect("derivative is a unit");
                    x = (x + m - (xr + m - 1) % m * dinv % m) % m;
                }
                let cand = self.zmod_elem(x);
                if pow_mod(x, r, m) == 1 && self.has_exact_order(&cand, r) {
                    return Ok(cand);
                }
                return Err(Error::BadCharacterOrder(format!(
                    "Hensel lift failed to produce exact order {r} in Z/{m}"
                )));
            }
        }
        self.root_of_unity_by_scan(r)
    }

    fn root_of_unity_by_scan(&self, r: u64) -> Result<RingElem> {
        if self.size() > UNIT_ENUM_CAP {
            return Err(Error::EnumerationTooLarge {
                size: self.size(),
                bound: UNIT_ENUM_CAP,
            });
        }
        for i in 0..self.size() {
            let e = self.element_from_index(i);
            if self.is_unit(&e) && self.has_exact_order(&e, r) {
                return Ok(e);
            }
        }
        Err(Error::BadCharacterOrder(format!(
            "no unit of exact order {r}"
        )))
    }

    /// Exact multiplicative order r (checks r and all proper divisors).
    pub fn has_exact_order(&self, a: &RingElem, r: u64) -> bool {
        if !self.pow(a, r).is_one() {
            return false;
        }
        for d in 1..r {
            if r.is_multiple_of(d) && self.pow(a, d).is_one() {
                return false;
            }
        }
        true
    }
}

fn radical_of_modulus(m: u64) -> u64 {
    let mut r = 1;
    let mut m2 = m;
    let mut d = 2;
    while d * d <= m2 {
        if m2.is_multiple_of(d) {
            r *= d;
            while m2.is_multiple_of(d) {
                m2 /= d;
            }
        }
        d += 1;
    }
    if m2 > 1 {
        r *= m2;
    }
    r
}

fn smallest_prime_factor(m: u64) -> u64 {
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return d;
        }
        d += 1;
    }
    m
}

fn is_prime_power(m: u64, p: u64) -> bool {
    let mut m = m;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

fn is_power_of(n: u64, p: u64) -> bool {
    let mut n = n;
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn has_exact_order_mod(a: u64, r: u64, m: u64) -> bool {
    if pow_mod(a, r, m) != 1 {
        return false;
    }
    for d in 1..r {
        if r.is_multiple_of(d) && pow_mod(a, d, m) == 1 {
            return false;
        }
    }
    true
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.data == other.data
    }
}
impl Eq for RingElem {}

impl RingElem {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn data(&self) -> &ElemData {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            ElemData::Z(v) => *v == 0,
            ElemData::Gr(c) => c.iter().all(|&v| v == 0),
            ElemData::Prod(p) => p.iter().all(|e| e.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    /// Canonical digit encoding (hashable, deterministic).
    pub fn encode(&self) -> Vec<u64> {
        let mut out = Vec::new();
        self.encode_into(&mut out);
        out
    }

    fn encode_into(&self, out: &mut Vec<u64>) {
        match &self.data {
            ElemData::Z(v) => out.push(*v),
            ElemData::Gr(c) => out.extend_from_slice(c),
            ElemData::Prod(p) => {
                for e in p {
                    e.encode_into(out);
                }
            }
        }
    }

    /// Z/m payload, for Z/m elements.
    pub fn as_zmod(&self) -> Option<u64> {
        match &self.data {
            ElemData::Z(v) => Some(*v),
            _ => None,
        }
    }

    pub fn gr_coeffs(&self) -> Option<&[u64]> {
        match &self.data {
            ElemData::Gr(c) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.ring.0.data, &self.data) {
            (_, ElemData::Z(v)) => write!(f, "{v}"),
            (RingData::GroupRing { group, .. }, ElemData::Gr(c)) => {
                let mut parts = Vec::new();
                for (i, &v) in c.iter().enumerate() {
                    if v == 0 {
                        continue;
                    }
                    let part = if i == group.identity() {
                        format!("{v}")
                    } else if v == 1 {
                        group.label(i).to_string()
                    } else {
                        format!("{v}*{}", group.label(i))
                    };
                    parts.push(part);
                }
                if parts.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", parts.join(" + "))
                }
            }
            (_, ElemData::Prod(p)) => {
                write!(f, "(")?;
                for (i, e) in p.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
            _ => unreachable_kind!(),
        }
    }
}

/// The enumerated, indexed unit group of a finite ring.
pub struct UnitGroup {
    ring: Ring,
    elems: Vec<RingElem>,
    index: HashMap<Vec<u64>, usize>,
}

impl UnitGroup {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elem(&self, i: usize) -> &RingElem {
        &self.elems[i]
    }

    pub fn index_of(&self, e: &RingElem) -> Option<usize> {
        self.index.get(&e.encode()).copied()
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        let p = self.ring.mul(&self.elems[i], &self.elems[j]);
        self.index[&p.encode()]
    }

    pub fn inverse(&self, i: usize) -> usize {
        let inv = self.ring.inverse(&self.elems[i]).expect("unit has inverse");
        self.index[&inv.encode()]
    }

    /// Subgroup closure of a set of unit indices.
    pub fn closure(&self, gens: &[usize]) -> BTreeSet<usize> {
        let one = self.index_of(&self.ring.one()).expect("1 is a unit");
        let mut set = BTreeSet::new();
        set.insert(one);
        let mut queue: Vec<usize> = vec![one];
        for &g in gens {
            if set.insert(g) {
                queue.push(g);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &g in gens {
                for y in [self.mul(x, g), self.mul(g, x)] {
                    if set.insert(y) {
                        queue.push(y);
                    }
                }
            }
        }
        set
    }
}

/// Interface the K₁ machinery needs from a finite semilocal ring: exact
/// arithmetic, a decidable unit test, and enough introspection to drive
/// stable-range-1 pivot searches.
pub trait SemilocalRing: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;
    fn is_unit(&self, a: &Self::Elem) -> bool;
    fn inverse(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn is_commutative(&self) -> bool;
    fn size(&self) -> Option<u128>;
    /// All elements in canonical order when the size is within `cap`.
    fn enumerate_elems(&self, cap: u128) -> Option<Vec<Self::Elem>>;
    /// Canonical digit encoding of an element.
    fn encode_elem(&self, e: &Self::Elem) -> Vec<u64>;
    /// Deterministic candidate scalars for pivot searches: the hints first,
    /// then small constants and a seeded pseudorandom sample, then (for
    /// small rings) everything.
    fn pivot_scalars(&self, hints: &[Self::Elem], budget: usize) -> Vec<Self::Elem>;
    /// Exact invertibility of a square matrix over this ring.
    fn matrix_invertible(&self, rows: &[Vec<Self::Elem>]) -> bool;
}

/// Full pivot scan is allowed up to this ring size.
pub(crate) const PIVOT_FULL_SCAN_CAP: u128 = 10_000;

impl SemilocalRing for Ring {
    type Elem = RingElem;

    fn zero(&self) -> RingElem {
        Ring::zero(self)
    }
    fn one(&self) -> RingElem {
        Ring::one(self)
    }
    fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        Ring::add(self, a, b)
    }
    fn neg(&self, a: &RingElem) -> RingElem {
        Ring::neg(self, a)
    }
    fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        Ring::mul(self, a, b)
    }
    fn is_zero(&self, a: &RingElem) -> bool {
        RingElem::is_zero(a)
    }
    fn is_one(&self, a: &RingElem) -> bool {
        RingElem::is_one(a)
    }
    fn is_unit(&self, a: &RingElem) -> bool {
        Ring::is_unit(self, a)
    }
    fn inverse(&self, a: &RingElem) -> Result<RingElem> {
        Ring::inverse(self, a)
    }
    fn is_commutative(&self) -> bool {
        Ring::is_commutative(self)
    }
    fn size(&self) -> Option<u128> {
        Some(Ring::size(self))
    }
    fn enumerate_elems(&self, cap: u128) -> Option<Vec<RingElem>> {
        self.elements(cap).ok()
    }
    fn encode_elem(&self, e: &RingElem) -> Vec<u64> {
        e.encode()
    }

    fn pivot_scalars(&self, hints: &[RingElem], budget: usize) -> Vec<RingElem> {
        let mut out: Vec<RingElem> = Vec::new();
        let push = |e: RingElem, out: &mut Vec<RingElem>| {
            if !out.contains(&e) {
                out.push(e);
            }
        };
        for h in hints {
            push(h.clone(), &mut out);
        }
        push(self.one(), &mut out);
        push(self.neg(&self.one()), &mut out);
        if Ring::size(self) <= PIVOT_FULL_SCAN_CAP {
            for i in 0..Ring::size(self) {
                push(self.element_from_index(i), &mut out);
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_1234);
            for _ in 0..budget {
                let idx = rng.gen_range(0..Ring::size(self));
                push(self.element_from_index(idx), &mut out);
            }
        }
        out
    }

    fn matrix_invertible(&self, rows: &[Vec<RingElem>]) -> bool {
        let n = rows.len();
        match &self.0.data {
            RingData::ZMod { m } => {
                let flat: Vec<Vec<u64>> = rows
                    .iter()
                    .map(|r| r.iter().map(|e| e.as_zmod().unwrap()).collect())
                    .collect();
                zlin::is_invertible(*m, &flat)
            }
            RingData::GroupRing { m, .. } => {
                // blow up to the left-regular representation over Z/m
                let g = self.group().unwrap().order();
                let mut big = vec![vec![0u64; n * g]; n * g];
                for (i, row) in rows.iter().enumerate() {
                    for (j, e) in row.iter().enumerate() {
                        let block = self.left_regular_matrix(e);
                        for r in 0..g {
                            for c in 0..g {
                                big[i * g + r][j * g + c] = block[r][c];
                            }
                        }
                    }
                }
                zlin::is_invertible(*m, &big)
            }
            RingData::Product { factors } => (0..factors.len()).all(|k| {
                let comp: Vec<Vec<RingElem>> = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|e| match &e.data {
                                ElemData::Prod(p) => p[k].clone(),
                                _ => unreachable_kind!(),
                            })
                            .collect()
                    })
                    .collect();
                factors[k].matrix_invertible(&comp)
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z9() -> Ring {
        Ring::zmod(9).unwrap()
    }

    fn z9c2() -> Ring {
        Ring::group_ring(9, GroupTable::cyclic(2)).unwrap()
    }

    #[test]
    fn descriptors() {
        let r = z9();
        assert!(r.is_commutative());
        assert_eq!(r.size(), 9);

        let gr = z9c2();
        assert!(gr.is_commutative());
        assert_eq!(gr.size(), 81);

        let s3 = Ring::group_ring(4, GroupTable::s3()).unwrap();
        assert!(!s3.is_commutative());
        assert_eq!(s3.size(), 4096);
        // witness a noncommuting pair: r and s in S3
        let a = s3.gr_basis(1);
        let b = s3.gr_basis(3);
        assert_ne!(s3.mul(&a, &b), s3.mul(&b, &a));
    }

    #[test]
    fn size_overflow_rejected() {
        assert!(matches!(
            Ring::group_ring(100, GroupTable::q8()),
            Err(Error::SizeOverflow)
        ));
    }

    #[test]
    fn units_and_inverses_zmod() {
        let r = z9();
        let two = r.zmod_elem(2);
        assert!(r.is_unit(&two));
        assert_eq!(r.inverse(&two).unwrap(), r.zmod_elem(5));
        assert!(!r.is_unit(&r.zmod_elem(3)));
        assert!(matches!(r.inverse(&r.zmod_elem(3)), Err(Error::NotAUnit)));
    }

    #[test]
    fn units_and_inverses_group_ring() {
        let gr = z9c2();
        // 3 + 3σ is not a unit, 1 + 3σ is, with (1+3σ)(1−3σ) = 1
        let a = gr.gr_elem(&[3, 3]);
        assert!(!gr.is_unit(&a));
        let b = gr.gr_elem(&[1, 3]);
        assert!(gr.is_unit(&b));
        let binv = gr.inverse(&b).unwrap();
        assert_eq!(binv, gr.gr_elem(&[1, 6]));
        assert!(gr.mul(&b, &binv).is_one());
    }

    #[test]
    fn unit_counts() {
        assert_eq!(z9().units().unwrap().len(), 6);
        assert_eq!(Ring::zmod(4).unwrap().units().unwrap().len(), 2);
        // |R^×| for R = Z/9[C2] ≅ Z/9 × Z/9 (σ ↦ ±1 splitting): 6·6 = 36,
        // matching |R|·(1 − 1/3)² from the two residue fields
        assert_eq!(z9c2().units().unwrap().len(), 36);
    }

    #[test]
    fn radical_examples() {
        let r = z9();
        let rad: Vec<u64> = r
            .jacobson_radical()
            .unwrap()
            .iter()
            .map(|e| e.as_zmod().unwrap())
            .collect();
        assert_eq!(rad, vec![0, 3, 6]);

        let f2 = Ring::zmod(2).unwrap();
        assert_eq!(f2.jacobson_radical().unwrap().len(), 1);

        let z4c2 = Ring::group_ring(4, GroupTable::cyclic(2)).unwrap();
        let rad = z4c2.jacobson_radical().unwrap();
        assert_eq!(rad.len(), 8);
        let structural = z4c2.jacobson_radical_structural().unwrap();
        assert_eq!(rad, structural);
    }

    #[test]
    fn structural_radical_matches_definitional() {
        for ring in [
            Ring::group_ring(9, GroupTable::cyclic(3)).unwrap(),
            Ring::group_ring(8, GroupTable::cyclic(2)).unwrap(),
            Ring::group_ring(4, GroupTable::cyclic(2)).unwrap(),
        ] {
            let d = ring.jacobson_radical().unwrap();
            let s = ring.jacobson_radical_structural().unwrap();
            assert_eq!(d, s, "radical mismatch for {ring:?}");
        }
    }

    #[test]
    fn one_plus_radical_consists_of_units() {
        for ring in [
            z9(),
            z9c2(),
            Ring::group_ring(4, GroupTable::cyclic(2)).unwrap(),
        ] {
            let one = ring.one();
            for x in ring.jacobson_radical().unwrap() {
                assert!(ring.is_unit(&ring.add(&one, &x)));
            }
        }
    }

    #[test]
    fn inverse_is_two_sided_on_random_units() {
        let rings = [z9(), z9c2(), Ring::group_ring(4, GroupTable::s3()).unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ring in &rings {
            let mut found = 0;
            while found < 200 {
                let e = ring.element_from_index(rng.gen_range(0..ring.size()));
                if ring.is_unit(&e) {
                    found += 1;
                    let inv = ring.inverse(&e).unwrap();
                    assert!(ring.mul(&e, &inv).is_one());
                    assert!(ring.mul(&inv, &e).is_one());
                }
            }
        }
    }

    #[test]
    fn product_rings() {
        let p = Ring::product(vec![z9(), Ring::zmod(4).unwrap()]).unwrap();
        assert_eq!(p.size(), 36);
        assert!(p.is_commutative());
        let e = p.product_elem(vec![z9().zmod_elem(2), Ring::zmod(4).unwrap().zmod_elem(3)]);
        assert!(p.is_unit(&e));
        let inv = p.inverse(&e).unwrap();
        assert!(p.mul(&e, &inv).is_one());
        assert_eq!(p.units().unwrap().len(), 12);
    }

    #[test]
    fn root_of_unity_hensel_and_scan() {
        // Z/13: 4th root of unity is 5 (5² = 25 ≡ 12 ≡ −1)
        let z13 = Ring::zmod(13).unwrap();
        let z = z13.root_of_unity(4).unwrap();
        assert!(z13.has_exact_order(&z, 4));
        // Z/9 has no element of order 4 ((Z/9)^× has order 6)
        assert!(z9().root_of_unity(4).is_err());
        // Z/9 does have one of order 2 and of order 6
        assert!(z9().has_exact_order(&z9().root_of_unity(2).unwrap(), 2));
        assert!(z9().has_exact_order(&z9().root_of_unity(6).unwrap(), 6));
        // Z/49: order-3 root via Hensel (3 | 7−1), lifted from 2 mod 7
        let z49 = Ring::zmod(49).unwrap();
        let w = z49.root_of_unity(3).unwrap();
        assert!(z49.has_exact_order(&w, 3));
        // group ring scan: σ has order 2 in Z/9[C2]
        let gr = z9c2();
        let s = gr.root_of_unity(2).unwrap();
        assert!(gr.has_exact_order(&s, 2));
    }

    #[test]
    fn integer_invertibility() {
        assert!(z9().integer_is_unit(5));
        assert!(!z9().integer_is_unit(3));
        assert!(!Ring::group_ring(4, GroupTable::cyclic(2))
            .unwrap()
            .integer_is_unit(2));
    }

    #[test]
    fn element_display() {
        let gr = z9c2();
        let e = gr.gr_elem(&[1, 3]);
        assert_eq!(format!("{e}"), "1 + 3*s");
        assert_eq!(format!("{}", gr.zero()), "0");
        let p = Ring::product(vec![z9(), z9()]).unwrap();
        let e = p.product_elem(vec![z9().zmod_elem(2), z9().zmod_elem(7)]);
        assert_eq!(format!("{e}"), "(2, 7)");
    }

    #[test]
    fn index_roundtrip() {
        for ring in [
            z9(),
            z9c2(),
            Ring::product(vec![z9(), Ring::zmod(4).unwrap()]).unwrap(),
        ] {
            for i in (0..ring.size()).step_by(5) {
                let e = ring.element_from_index(i);
                assert_eq!(ring.index_of(&e), i);
            }
        }
    }

    #[test]
    fn matrix_invertibility_via_regular_representation() {
        let gr = z9c2();
        let one = gr.one();
        let sigma = gr.gr_basis(1);
        // [[1, σ], [σ, 1]] has det 1 − σ² = 0, not invertible
        let rows = vec![
            vec![one.clone(), sigma.clone()],
            vec![sigma.clone(), one.clone()],
        ];
        assert!(!gr.matrix_invertible(&rows));
        // [[1, σ], [0, 1]] is invertible
        let rows = vec![
            vec![one.clone(), sigma.clone()],
            vec![gr.zero(), one.clone()],
        ];
        assert!(gr.matrix_invertible(&rows));
    }
}
