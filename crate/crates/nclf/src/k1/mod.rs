//! K₁ classes of finite semilocal rings.
//!
//! Every class is carried by a 1×1 unit representative obtained from an
//! invertible matrix by elementary moves (stable-range-1 pivot search,
//! row/column clears, Whitehead folding of the diagonal). The move
//! transcript is kept as a replayable certificate.
//!
//! Equality of classes is layered: literal representative equality and
//! Vaserstein-closure membership certify equality exactly; for rings too
//! large to close, a family of sound invariants (commutative-quotient
//! images, reduction mod T) either disproves equality or reports
//! `EqualOnAllInvariants`.

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::ring::{Ring, RingHom, SemilocalRing};
use crate::series::SeriesRing;
use std::collections::BTreeSet;
use std::fmt;

/// Ring-size cap for the explicitly requested Vaserstein closure.
pub const VASERSTEIN_SCAN_CAP: u128 = 10_000;
/// Ring-size cap when the closure is attempted implicitly inside equality
/// testing (the generator pass is quadratic in the ring size).
const VASERSTEIN_AUTO_CAP: u128 = 600;
/// Budget for pseudorandom pivot scalars on large rings.
const PIVOT_RANDOM_BUDGET: usize = 64;
/// Cap on 2^k subset search during pivot creation.
const PIVOT_SUBSET_ROWS_CAP: usize = 12;

/// One elementary (class-preserving) move on a matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum Move<E> {
    /// row_dst += factor · row_src
    AddRow { src: usize, dst: usize, factor: E },
    /// col_dst += col_src · factor
    AddCol { src: usize, dst: usize, factor: E },
    /// (row_a, row_b) ← (row_b, −row_a); determinant-one swap
    SwapRows { a: usize, b: usize },
    /// col_a ← col_a · factor, col_b ← col_b · factor⁻¹ (Whitehead pair)
    ScalePair { a: usize, b: usize, factor: E },
}

/// A replayable elimination transcript: applying `moves` to the source
/// matrix must yield diag(final_unit, 1, …, 1).
#[derive(Clone, Debug)]
pub struct Certificate<E> {
    pub moves: Vec<Move<E>>,
    pub final_unit: E,
}

pub fn apply_move<R: SemilocalRing>(ring: &R, mat: &mut Mat<R>, mv: &Move<R::Elem>) {
    let n = mat.cols();
    let rows = mat.rows();
    match mv {
        Move::AddRow { src, dst, factor } => {
            for j in 0..n {
                let v = ring.add(mat.at(*dst, j), &ring.mul(factor, mat.at(*src, j)));
                mat.set(*dst, j, v);
            }
        }
        Move::AddCol { src, dst, factor } => {
            for i in 0..rows {
                let v = ring.add(mat.at(i, *dst), &ring.mul(mat.at(i, *src), factor));
                mat.set(i, *dst, v);
            }
        }
        Move::SwapRows { a, b } => {
            for j in 0..n {
                let va = mat.at(*a, j).clone();
                let vb = mat.at(*b, j).clone();
                mat.set(*a, j, vb);
                mat.set(*b, j, ring.neg(&va));
            }
        }
        Move::ScalePair { a, b, factor } => {
            let finv = ring
                .inverse(factor)
                .expect("scale-pair factor must be a unit");
            for i in 0..rows {
                mat.set(i, *a, ring.mul(mat.at(i, *a), factor));
                mat.set(i, *b, ring.mul(mat.at(i, *b), &finv));
            }
        }
    }
}

/// Make the (k,k) entry a unit using rows ≥ k, recording the moves.
fn ensure_unit_pivot<R: SemilocalRing>(
    ring: &R,
    w: &mut Mat<R>,
    k: usize,
    moves: &mut Vec<Move<R::Elem>>,
) -> Result<()> {
    let n = w.rows();
    if ring.is_unit(w.at(k, k)) {
        return Ok(());
    }
    // a unit below: one row addition makes the pivot exactly 1
    for j in k + 1..n {
        if ring.is_unit(w.at(j, k)) {
            let uinv = ring.inverse(w.at(j, k))?;
            let t = ring.mul(&ring.sub(&ring.one(), w.at(k, k)), &uinv);
            let mv = Move::AddRow {
                src: j,
                dst: k,
                factor: t,
            };
            apply_move(ring, w, &mv);
            moves.push(mv);
            return Ok(());
        }
    }
    // stable-range-1 search: a + t·b over candidate scalars t, with hints
    // drawn from the column entries
    let hints: Vec<R::Elem> = (k..n).map(|j| w.at(j, k).clone()).collect();
    let scalars = ring.pivot_scalars(&hints, PIVOT_RANDOM_BUDGET);
    for j in k + 1..n {
        if ring.is_zero(w.at(j, k)) {
            continue;
        }
        for t in &scalars {
            let cand = ring.add(w.at(k, k), &ring.mul(t, w.at(j, k)));
            if ring.is_unit(&cand) {
                let mv = Move::AddRow {
                    src: j,
                    dst: k,
                    factor: t.clone(),
                };
                apply_move(ring, w, &mv);
                moves.push(mv);
                return Ok(());
            }
        }
    }
    // subset accumulation for rings with several maximal ideals
    let rows: Vec<usize> = (k + 1..n).collect();
    if rows.len() <= PIVOT_SUBSET_ROWS_CAP {
        for mask in 1u32..(1u32 << rows.len()) {
            let mut cand = w.at(k, k).clone();
            for (bit, &j) in rows.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    cand = ring.add(&cand, w.at(j, k));
                }
            }
            if ring.is_unit(&cand) {
                for (bit, &j) in rows.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        let mv = Move::AddRow {
                            src: j,
                            dst: k,
                            factor: ring.one(),
                        };
                        apply_move(ring, w, &mv);
                        moves.push(mv);
                    }
                }
                debug_assert!(ring.is_unit(w.at(k, k)));
                return Ok(());
            }
        }
    }
    Err(Error::PivotSearchExhausted)
}

/// Reduce an invertible matrix in place to diag(u, 1, …, 1) by
/// class-preserving moves, appending them to `moves`; returns u.
pub fn eliminate_in_place<R: SemilocalRing>(
    ring: &R,
    w: &mut Mat<R>,
    moves: &mut Vec<Move<R::Elem>>,
) -> Result<R::Elem> {
    let n = w.rows();
    for k in 0..n {
        ensure_unit_pivot(ring, w, k, moves)?;
        let uinv = ring.inverse(w.at(k, k))?;
        for j in k + 1..n {
            if !ring.is_zero(w.at(j, k)) {
                let t = ring.neg(&ring.mul(w.at(j, k), &uinv));
                let mv = Move::AddRow {
                    src: k,
                    dst: j,
                    factor: t,
                };
                apply_move(ring, w, &mv);
                moves.push(mv);
            }
        }
        for j in k + 1..n {
            if !ring.is_zero(w.at(k, j)) {
                let s = ring.neg(&ring.mul(&uinv, w.at(k, j)));
                let mv = Move::AddCol {
                    src: k,
                    dst: j,
                    factor: s,
                };
                apply_move(ring, w, &mv);
                moves.push(mv);
            }
        }
    }
    // Whitehead-fold the diagonal into the top-left entry
    for i in (1..n).rev() {
        let u = w.at(i, i).clone();
        if ring.is_one(&u) {
            continue;
        }
        let mv = Move::ScalePair {
            a: i - 1,
            b: i,
            factor: u,
        };
        apply_move(ring, w, &mv);
        moves.push(mv);
    }
    let rep = w.at(0, 0).clone();
    debug_assert!(is_unit_diag(ring, w, &rep));
    Ok(rep)
}

fn reduce_to_unit<R: SemilocalRing>(
    ring: &R,
    mat: &Mat<R>,
) -> Result<(R::Elem, Vec<Move<R::Elem>>)> {
    let mut w = mat.clone();
    let mut moves = Vec::new();
    let rep = eliminate_in_place(ring, &mut w, &mut moves)?;
    Ok((rep, moves))
}

fn is_unit_diag<R: SemilocalRing>(ring: &R, w: &Mat<R>, rep: &R::Elem) -> bool {
    let n = w.rows();
    for i in 0..n {
        for j in 0..n {
            let e = w.at(i, j);
            let ok = if i != j {
                ring.is_zero(e)
            } else if i == 0 {
                e == rep
            } else {
                ring.is_one(e)
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

impl<E: Clone + PartialEq> Certificate<E> {
    /// Replay the transcript from `source` and verify it reaches
    /// diag(final_unit, 1, …, 1).
    pub fn replay<R: SemilocalRing<Elem = E>>(&self, ring: &R, source: &Mat<R>) -> Result<E> {
        let mut w = source.clone();
        for mv in &self.moves {
            apply_move(ring, &mut w, mv);
        }
        if !is_unit_diag(ring, &w, &self.final_unit) {
            return Err(Error::Invalid(
                "certificate replay did not reach the claimed diagonal form".into(),
            ));
        }
        Ok(self.final_unit.clone())
    }
}

/// A class in K₁(R), carried by a unit representative.
#[derive(Clone)]
pub struct K1Class<R: SemilocalRing> {
    ring: R,
    rep: R::Elem,
    certificate: Option<Certificate<R::Elem>>,
}

impl<R: SemilocalRing> PartialEq for K1Class<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.rep == other.rep
    }
}

impl<R: SemilocalRing> fmt::Debug for K1Class<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}] in K1({:?})", self.rep, self.ring)
    }
}

impl<R: SemilocalRing> K1Class<R> {
    pub fn one(ring: &R) -> K1Class<R> {
        K1Class {
            ring: ring.clone(),
            rep: ring.one(),
            certificate: None,
        }
    }

    pub fn of_unit(ring: &R, u: R::Elem) -> Result<K1Class<R>> {
        if !ring.is_unit(&u) {
            return Err(Error::NotAUnit);
        }
        Ok(K1Class {
            ring: ring.clone(),
            rep: u,
            certificate: None,
        })
    }

    /// The class of an invertible square matrix, with elimination
    /// certificate. Invertibility is verified exactly first, so a failed
    /// pivot search is a genuine bug trap.
    pub fn of_matrix(mat: &Mat<R>) -> Result<K1Class<R>> {
        assert!(mat.is_square(), "K1 classes come from square matrices");
        let ring = mat.ring().clone();
        if !mat.is_invertible() {
            return Err(Error::NotInvertible);
        }
        let (rep, moves) = reduce_to_unit(&ring, mat)?;
        Ok(K1Class {
            ring,
            rep: rep.clone(),
            certificate: Some(Certificate {
                moves,
                final_unit: rep,
            }),
        })
    }

    /// Alternating class ∏ [fᵢ]^{(−1)^i} of a degreewise automorphism of a
    /// bounded free complex, given as the list of degree maps.
    pub fn of_complex(mats: &[Mat<R>]) -> Result<K1Class<R>> {
        let mut acc: Option<K1Class<R>> = None;
        for (i, m) in mats.iter().enumerate() {
            let mut c = K1Class::of_matrix(m)?;
            if i % 2 == 1 {
                c = c.inverse();
            }
            acc = Some(match acc {
                None => c,
                Some(a) => a.mul(&c)?,
            });
        }
        acc.ok_or_else(|| Error::Invalid("empty complex".into()))
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn rep(&self) -> &R::Elem {
        &self.rep
    }

    pub fn certificate(&self) -> Option<&Certificate<R::Elem>> {
        self.certificate.as_ref()
    }

    pub fn mul(&self, other: &K1Class<R>) -> Result<K1Class<R>> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(K1Class {
            ring: self.ring.clone(),
            rep: self.ring.mul(&self.rep, &other.rep),
            certificate: None,
        })
    }

    pub fn inverse(&self) -> K1Class<R> {
        K1Class {
            ring: self.ring.clone(),
            rep: self
                .ring
                .inverse(&self.rep)
                .expect("representative is a unit"),
            certificate: None,
        }
    }

    pub fn pow(&self, k: i64) -> K1Class<R> {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = K1Class::one(&self.ring);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base).expect("same ring");
        }
        acc
    }

    /// The determinant value of the class (commutative rings): for classes
    /// built by `of_matrix` this equals the matrix determinant, since every
    /// recorded move has determinant one.
    pub fn det(&self) -> Result<R::Elem> {
        if !self.ring.is_commutative() {
            return Err(Error::NoncommutativeRing);
        }
        Ok(self.rep.clone())
    }
}

/// The subgroup W(R) ⊂ R^× generated by all (1+ab)(1+ba)⁻¹; for semilocal
/// R this is exactly the kernel of R^× → K₁(R).
pub struct VasersteinClosure {
    encodings: BTreeSet<Vec<u64>>,
}

impl VasersteinClosure {
    pub fn len(&self) -> usize {
        self.encodings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.encodings.is_empty()
    }

    pub fn contains<R: SemilocalRing>(&self, ring: &R, e: &R::Elem) -> bool {
        self.encodings.contains(&ring.encode_elem(e))
    }
}

/// Compute W(R) by generator collection and closure. Requires the ring to
/// be enumerable within `cap`.
pub fn vaserstein_closure_capped<R: SemilocalRing>(
    ring: &R,
    cap: u128,
) -> Result<VasersteinClosure> {
    let elems = match ring.enumerate_elems(cap) {
        Some(e) => e,
        None => {
            return Err(Error::EnumerationTooLarge {
                size: ring.size().unwrap_or(u128::MAX),
                bound: cap,
            })
        }
    };
    let one = ring.one();
    let mut gens: Vec<R::Elem> = Vec::new();
    let mut gen_keys = BTreeSet::new();
    for a in &elems {
        for b in &elems {
            let oneab = ring.add(&one, &ring.mul(a, b));
            if !ring.is_unit(&oneab) {
                continue;
            }
            let oneba = ring.add(&one, &ring.mul(b, a));
            let w = ring.mul(&oneab, &ring.inverse(&oneba)?);
            if gen_keys.insert(ring.encode_elem(&w)) {
                gens.push(w);
            }
        }
    }
    // breadth-first products until stable; the generator family is closed
    // under inversion, so one-sided products suffice
    let mut set = BTreeSet::new();
    set.insert(ring.encode_elem(&one));
    let mut queue = vec![one];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head].clone();
        head += 1;
        for g in &gens {
            let y = ring.mul(&x, g);
            if set.insert(ring.encode_elem(&y)) {
                queue.push(y);
            }
        }
    }
    Ok(VasersteinClosure { encodings: set })
}

/// W(R) at the default enumeration cap.
pub fn vaserstein_closure<R: SemilocalRing>(ring: &R) -> Result<VasersteinClosure> {
    vaserstein_closure_capped(ring, VASERSTEIN_SCAN_CAP)
}

/// Outcome of a layered K₁ equality test.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// Representatives coincide, or their quotient lies in W(R).
    EqualCertified,
    /// Every registered invariant agrees but no certificate was found.
    EqualOnAllInvariants,
    /// Some sound invariant differs — a disproof, naming the witness.
    Distinguished(String),
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        !matches!(self, Verdict::Distinguished(_))
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::EqualCertified)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::EqualCertified => write!(f, "EqualCertified"),
            Verdict::EqualOnAllInvariants => write!(f, "EqualOnAllInvariants"),
            Verdict::Distinguished(w) => write!(f, "Distinguished({w})"),
        }
    }
}

/// Shared first layers: literal equality, the commutative decision, and the
/// Vaserstein closure for small rings. `None` means undecided.
fn equal_base<R: SemilocalRing>(a: &K1Class<R>, b: &K1Class<R>) -> Result<Option<Verdict>> {
    if a.ring != b.ring {
        return Err(Error::RingMismatch);
    }
    if a.rep == b.rep {
        return Ok(Some(Verdict::EqualCertified));
    }
    // commutative semilocal rings: K₁ ≅ R^× via det, so distinct unit
    // representatives are a disproof
    if a.ring.is_commutative() {
        return Ok(Some(Verdict::Distinguished(
            "determinant (unit representative) differs over a commutative ring".into(),
        )));
    }
    if a.ring.size().is_some_and(|s| s <= VASERSTEIN_AUTO_CAP) {
        let w = vaserstein_closure_capped(&a.ring, VASERSTEIN_AUTO_CAP)?;
        let d = a.ring.mul(&a.rep, &a.ring.inverse(&b.rep)?);
        return Ok(Some(if w.contains(&a.ring, &d) {
            Verdict::EqualCertified
        } else {
            Verdict::Distinguished("quotient of representatives is not in W(R)".into())
        }));
    }
    Ok(None)
}

/// Layered equality for classes over a finite coefficient ring.
pub fn k1_equal(a: &K1Class<Ring>, b: &K1Class<Ring>, homs: &[RingHom]) -> Result<Verdict> {
    if let Some(v) = equal_base(a, b)? {
        return Ok(v);
    }
    for h in homs {
        if h.source() != &a.ring || !h.target().is_commutative() {
            continue;
        }
        if h.apply(&a.rep) != h.apply(&b.rep) {
            return Ok(Verdict::Distinguished(format!(
                "invariant {} differs",
                h.name()
            )));
        }
    }
    Ok(Verdict::EqualOnAllInvariants)
}

/// Layered equality for classes over Λ[T]/(T^m). Registered coefficient
/// homs with commutative targets are applied coefficientwise; the mod-T
/// reduction recurses into K₁(Λ).
pub fn k1_equal_series(
    a: &K1Class<SeriesRing>,
    b: &K1Class<SeriesRing>,
    homs: &[RingHom],
) -> Result<Verdict> {
    if let Some(v) = equal_base(a, b)? {
        return Ok(v);
    }
    let coeff = a.ring.coeff_ring().clone();
    for h in homs {
        if h.source() != &coeff || !h.target().is_commutative() {
            continue;
        }
        if a.rep.map_coeffs(h) != b.rep.map_coeffs(h) {
            return Ok(Verdict::Distinguished(format!(
                "invariant {} (coefficientwise) differs",
                h.name()
            )));
        }
    }
    // reduction mod T lands in K₁(Λ); a disproof there is a disproof here
    let a0 = K1Class::of_unit(&coeff, a.rep.constant_term().clone())?;
    let b0 = K1Class::of_unit(&coeff, b.rep.constant_term().clone())?;
    if let Verdict::Distinguished(w) = k1_equal(&a0, &b0, homs)? {
        return Ok(Verdict::Distinguished(format!("mod T: {w}")));
    }
    Ok(Verdict::EqualOnAllInvariants)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{GroupTable, RingElem};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z9() -> Ring {
        Ring::zmod(9).unwrap()
    }

    fn rand_elem(ring: &Ring, rng: &mut ChaCha8Rng) -> RingElem {
        ring.element_from_index(rng.gen_range(0..ring.size()))
    }

    fn rand_unit(ring: &Ring, rng: &mut ChaCha8Rng) -> RingElem {
        loop {
            let e = rand_elem(ring, rng);
            if ring.is_unit(&e) {
                return e;
            }
        }
    }

    /// random invertible matrix: unit diagonal times random elementary ops
    fn rand_invertible(ring: &Ring, n: usize, rng: &mut ChaCha8Rng) -> Mat<Ring> {
        let mut m = Mat::from_fn(ring, n, n, |i, j| {
            if i == j {
                rand_unit(ring, rng)
            } else {
                ring.zero()
            }
        });
        for _ in 0..3 * n {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n);
            if n > 1 {
                while j == i {
                    j = rng.gen_range(0..n);
                }
                let mv = if rng.gen_bool(0.5) {
                    Move::AddRow {
                        src: i,
                        dst: j,
                        factor: rand_elem(ring, rng),
                    }
                } else {
                    Move::AddCol {
                        src: i,
                        dst: j,
                        factor: rand_elem(ring, rng),
                    }
                };
                apply_move(ring, &mut m, &mv);
            }
        }
        m
    }

    /// independent determinant oracle: cofactor expansion
    fn naive_det(ring: &Ring, m: &Mat<Ring>) -> RingElem {
        let n = m.rows();
        if n == 1 {
            return m.at(0, 0).clone();
        }
        let mut acc = ring.zero();
        for j in 0..n {
            let minor = Mat::from_fn(ring, n - 1, n - 1, |r, c| {
                m.at(r + 1, if c < j { c } else { c + 1 }).clone()
            });
            let mut term = ring.mul(m.at(0, j), &naive_det(ring, &minor));
            if j % 2 == 1 {
                term = ring.neg(&term);
            }
            acc = ring.add(&acc, &term);
        }
        acc
    }

    #[test]
    fn trivial_classes() {
        let r = z9();
        // identity matrix
        let c = K1Class::of_matrix(&Mat::identity(&r, 3)).unwrap();
        assert!(c.rep().is_one());
        // diag(u, u^{-1})
        let u = r.zmod_elem(2);
        let uinv = r.inverse(&u).unwrap();
        let m = Mat::from_rows(&r, vec![vec![u, r.zero()], vec![r.zero(), uinv]]);
        let c = K1Class::of_matrix(&m).unwrap();
        assert!(c.rep().is_one());
        // elementary matrix
        let m = Mat::from_rows(&r, vec![vec![r.one(), r.one()], vec![r.zero(), r.one()]]);
        let c = K1Class::of_matrix(&m).unwrap();
        assert!(c.rep().is_one());
    }

    #[test]
    fn det_identification_examples() {
        let r = z9();
        // [[0,1],[−1,0]] has det 1
        let m = Mat::from_rows(
            &r,
            vec![vec![r.zero(), r.one()], vec![r.neg(&r.one()), r.zero()]],
        );
        assert!(K1Class::of_matrix(&m).unwrap().rep().is_one());
        // [[2,1],[1,1]] has det 1
        let m = Mat::from_rows(
            &r,
            vec![vec![r.zmod_elem(2), r.one()], vec![r.one(), r.one()]],
        );
        assert!(K1Class::of_matrix(&m).unwrap().rep().is_one());
    }

    #[test]
    fn rep_equals_determinant_on_random_matrices() {
        let rings = [z9(), Ring::group_ring(9, GroupTable::cyclic(2)).unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for ring in &rings {
            for n in 2..=3usize {
                for _ in 0..25 {
                    let m = rand_invertible(ring, n, &mut rng);
                    let c = K1Class::of_matrix(&m).unwrap();
                    assert_eq!(c.rep(), &naive_det(ring, &m), "rep != det for {m:?}");
                }
            }
        }
    }

    #[test]
    fn certificates_replay() {
        let ring = Ring::group_ring(9, GroupTable::cyclic(2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let m = rand_invertible(&ring, 3, &mut rng);
            let c = K1Class::of_matrix(&m).unwrap();
            let cert = c.certificate().unwrap();
            let u = cert.replay(&ring, &m).unwrap();
            assert_eq!(&u, c.rep());
        }
    }

    #[test]
    fn multiplicativity_and_block_triangular() {
        let rings = [z9(), Ring::group_ring(9, GroupTable::cyclic(2)).unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(97);
        for ring in &rings {
            for _ in 0..25 {
                let a = rand_invertible(ring, 2, &mut rng);
                let b = rand_invertible(ring, 2, &mut rng);
                let cab = K1Class::of_matrix(&a.mul(&b).unwrap()).unwrap();
                let ca = K1Class::of_matrix(&a).unwrap();
                let cb = K1Class::of_matrix(&b).unwrap();
                let v = k1_equal(&cab, &ca.mul(&cb).unwrap(), &[]).unwrap();
                assert_eq!(v, Verdict::EqualCertified);

                // block triangular [[A, *], [0, B]]
                let mut block = a.direct_sum(&b).unwrap();
                for i in 0..2 {
                    for j in 0..2 {
                        block.set(i, 2 + j, rand_elem(ring, &mut rng));
                    }
                }
                let cblock = K1Class::of_matrix(&block).unwrap();
                let v = k1_equal(&cblock, &ca.mul(&cb).unwrap(), &[]).unwrap();
                assert_eq!(v, Verdict::EqualCertified);
            }
        }
    }

    #[test]
    fn conjugation_invariance() {
        let ring = z9();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..25 {
            let m = rand_invertible(&ring, 3, &mut rng);
            let p = rand_invertible(&ring, 3, &mut rng);
            let pinv_rows = invert_via_class(&ring, &p);
            let conj = p.mul(&m).unwrap().mul(&pinv_rows).unwrap();
            let v = k1_equal(
                &K1Class::of_matrix(&conj).unwrap(),
                &K1Class::of_matrix(&m).unwrap(),
                &[],
            )
            .unwrap();
            assert_eq!(v, Verdict::EqualCertified);
        }
    }

    /// matrix inverse over a commutative ring via adjugate (test helper)
    fn invert_via_class(ring: &Ring, m: &Mat<Ring>) -> Mat<Ring> {
        let n = m.rows();
        let det = naive_det(ring, m);
        let det_inv = ring.inverse(&det).unwrap();
        Mat::from_fn(ring, n, n, |i, j| {
            // cofactor C_ji
            let minor = Mat::from_fn(ring, n - 1, n - 1, |r, c| {
                m.at(if r < j { r } else { r + 1 }, if c < i { c } else { c + 1 })
                    .clone()
            });
            let mut v = ring.mul(&naive_det(ring, &minor), &det_inv);
            if (i + j) % 2 == 1 {
                v = ring.neg(&v);
            }
            v
        })
    }

    #[test]
    fn stabilization() {
        let ring = z9();
        let u = ring.zmod_elem(2);
        let c1 = K1Class::of_unit(&ring, u.clone()).unwrap();
        let m = Mat::from_rows(
            &ring,
            vec![vec![u, ring.zero()], vec![ring.zero(), ring.one()]],
        );
        let c2 = K1Class::of_matrix(&m).unwrap();
        assert_eq!(k1_equal(&c1, &c2, &[]).unwrap(), Verdict::EqualCertified);
    }

    #[test]
    fn vaserstein_closure_trivial_for_commutative() {
        for ring in [z9(), Ring::group_ring(9, GroupTable::cyclic(2)).unwrap()] {
            let w = vaserstein_closure(&ring).unwrap();
            assert_eq!(w.len(), 1);
        }
    }

    #[test]
    fn vaserstein_closure_f2_s3() {
        // F2[S3] ≅ F2[C2] × M2(F2); K1 = units/W has order 2·1 = 2
        let ring = Ring::group_ring(2, GroupTable::s3()).unwrap();
        let w = vaserstein_closure(&ring).unwrap();
        let units = ring.units().unwrap();
        assert_eq!(units.len(), 12);
        assert_eq!(w.len(), 6);
        // regression: the quotient has order 2
        assert_eq!(units.len() / w.len(), 2);
    }

    #[test]
    fn k1_equal_on_noncommutative_ring_uses_closure() {
        let ring = Ring::group_ring(2, GroupTable::s3()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        // MN vs NM: equal in K1 via the closure
        for _ in 0..10 {
            let a = rand_invertible(&ring, 2, &mut rng);
            let b = rand_invertible(&ring, 2, &mut rng);
            let cab = K1Class::of_matrix(&a.mul(&b).unwrap()).unwrap();
            let cba = K1Class::of_matrix(&b.mul(&a).unwrap()).unwrap();
            let v = k1_equal(&cab, &cba, &[]).unwrap();
            assert_eq!(v, Verdict::EqualCertified);
        }
    }

    #[test]
    fn layered_verdicts_over_large_noncommutative_ring() {
        // Z/4[S3] has 4096 elements: too large for the implicit closure, so
        // equality falls back to the invariant family
        let ring = Ring::group_ring(4, GroupTable::s3()).unwrap();
        let homs = vec![
            crate::ring::RingHom::augmentation(&ring).unwrap(),
            crate::ring::RingHom::abelianization(&ring).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        // MN and NM are equal in K1; representatives differ in general
        let mut saw_layered = false;
        for _ in 0..12 {
            let a = rand_invertible(&ring, 2, &mut rng);
            let b = rand_invertible(&ring, 2, &mut rng);
            let cab = K1Class::of_matrix(&a.mul(&b).unwrap()).unwrap();
            let cba = K1Class::of_matrix(&b.mul(&a).unwrap()).unwrap();
            match k1_equal(&cab, &cba, &homs).unwrap() {
                Verdict::EqualCertified => {}
                Verdict::EqualOnAllInvariants => saw_layered = true,
                Verdict::Distinguished(w) => panic!("MN vs NM distinguished: {w}"),
            }
        }
        assert!(saw_layered, "expected at least one layered verdict");
        // a genuinely different augmentation image is a disproof
        let u = ring.one();
        let v = ring.from_u64(3);
        let cu = K1Class::of_unit(&ring, u).unwrap();
        let cv = K1Class::of_unit(&ring, v).unwrap();
        assert!(matches!(
            k1_equal(&cu, &cv, &homs).unwrap(),
            Verdict::Distinguished(_)
        ));
    }

    #[test]
    fn layered_verdicts_for_series_over_noncommutative_ring() {
        use crate::series::SeriesRing;
        let ring = Ring::group_ring(4, GroupTable::s3()).unwrap();
        let homs = vec![crate::ring::RingHom::augmentation(&ring).unwrap()];
        let sring = SeriesRing::new(&ring, 3);
        // same class twice: certified by representative equality
        let f = sring.one_minus(&ring.from_u64(3), 1);
        let c1 = K1Class::of_unit(&sring, f.clone()).unwrap();
        assert_eq!(
            k1_equal_series(&c1, &c1.clone(), &homs).unwrap(),
            Verdict::EqualCertified
        );
        // different constant terms: distinguished through the mod-T layer
        let g = sring.one_minus(&ring.from_u64(3), 2);
        let c2 = K1Class::of_unit(&sring, g).unwrap();
        match k1_equal_series(&c1, &c2, &homs).unwrap() {
            Verdict::Distinguished(w) => assert!(w.contains("augmentation"), "{w}"),
            other => panic!("expected a disproof, got {other}"),
        }
    }

    #[test]
    fn distinguishes_unequal_classes() {
        let ring = z9();
        let c1 = K1Class::of_unit(&ring, ring.zmod_elem(2)).unwrap();
        let c2 = K1Class::of_unit(&ring, ring.zmod_elem(4)).unwrap();
        assert!(matches!(
            k1_equal(&c1, &c2, &[]).unwrap(),
            Verdict::Distinguished(_)
        ));
    }

    #[test]
    fn noninvertible_rejected() {
        let ring = z9();
        let m = Mat::from_rows(
            &ring,
            vec![
                vec![ring.zmod_elem(3), ring.zero()],
                vec![ring.zero(), ring.one()],
            ],
        );
        assert!(matches!(K1Class::of_matrix(&m), Err(Error::NotInvertible)));
    }

    #[test]
    fn complex_alternating_product() {
        let ring = z9();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let f0 = rand_invertible(&ring, 2, &mut rng);
        let f1 = rand_invertible(&ring, 2, &mut rng);
        let c = K1Class::of_complex(&[f0.clone(), f1.clone()]).unwrap();
        let expect = K1Class::of_matrix(&f0)
            .unwrap()
            .mul(&K1Class::of_matrix(&f1).unwrap().inverse())
            .unwrap();
        assert_eq!(k1_equal(&c, &expect, &[]).unwrap(), Verdict::EqualCertified);
    }
}
