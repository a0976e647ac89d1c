//! Locally constant sheaves presented as Galois coverings plus
//! representations ρ: G → GL_n(Λ).
//!
//! Two covering kinds are supported: Kummer coverings y^r = f(x) with
//! cyclic group C_r and exact Frobenius classes computed through power
//! residue symbols, and explicit tables assigning classes to closed points
//! (the escape hatch for hand-built Frobenius data). The Frobenius
//! convention is geometric (inverse of the arithmetic symbol).

use crate::error::{Error, Result};
use crate::ff::{dlog_in_mu, FieldExtension, FqElem};
use crate::matrix::Mat;
use crate::ring::{GroupTable, Ring, RingElem, RingHom};
use crate::variety::{ClosedPoint, Poly, Scheme};
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

/// Degree up to which Kummer nonvanishing is validated at construction.
pub const KUMMER_VALIDATION_DEPTH: usize = 2;

/// Key identifying a closed point: (chart, degree, representative encoding).
pub type PointKey = (usize, usize, Vec<u64>);

pub fn point_key(x: &ClosedPoint) -> PointKey {
    (x.chart(), x.degree(), x.encoding())
}

pub enum CoveringKind {
    /// The one-sheet covering (trivial group).
    Trivial,
    /// y^r = f(x) with group C_r, unramified because f is invertible on X.
    Kummer { r: u64, f: Poly },
    /// Explicit Frobenius classes per closed point, with optional
    /// per-(chart, degree) defaults for points not listed individually.
    Table {
        classes: BTreeMap<PointKey, usize>,
        defaults: BTreeMap<(usize, usize), usize>,
    },
}

/// A finite Galois covering of a base scheme.
pub struct GaloisCovering {
    base: Scheme,
    group: GroupTable,
    kind: CoveringKind,
    mu_gen: OnceLock<FqElem>,
}

impl GaloisCovering {
    pub fn trivial(base: Scheme) -> Arc<GaloisCovering> {
        Arc::new(GaloisCovering {
            base,
            group: GroupTable::cyclic(1),
            kind: CoveringKind::Trivial,
            mu_gen: OnceLock::new(),
        })
    }

    /// The Kummer covering y^r = f(x). Checks r | q − 1 and validates that
    /// f vanishes nowhere on X up to the given point-count depth.
    pub fn kummer(base: Scheme, r: u64, f: Poly) -> Result<Arc<GaloisCovering>> {
        Self::kummer_with_depth(base, r, f, KUMMER_VALIDATION_DEPTH)
    }

    pub fn kummer_with_depth(
        base: Scheme,
        r: u64,
        f: Poly,
        depth: usize,
    ) -> Result<Arc<GaloisCovering>> {
        let q = base.base().size();
        if r == 0 || !(q - 1).is_multiple_of(r) {
            return Err(Error::BadKummerOrder { r, qm1: q - 1 });
        }
        if base.charts().len() != 1 {
            return Err(Error::Invalid(
                "Kummer coverings need a single-chart base".into(),
            ));
        }
        let chart = &base.charts()[0];
        if f.field() != base.base() || f.vars() != chart.vars {
            return Err(Error::Invalid(
                "Kummer function in wrong field or arity".into(),
            ));
        }
        // adjoining f ≠ 0 must not change any point count up to the depth
        let mut restricted = chart.clone();
        restricted.neqs.push(f.clone());
        let restricted = Scheme::affine(
            base.base(),
            restricted.vars,
            restricted.eqs,
            restricted.neqs,
        )?;
        for n in 1..=depth {
            if base.point_count(n)? != restricted.point_count(n)? {
                return Err(Error::VanishingFunction(n));
            }
        }
        Ok(Arc::new(GaloisCovering {
            base,
            group: GroupTable::cyclic(r as usize),
            kind: CoveringKind::Kummer { r, f },
            mu_gen: OnceLock::new(),
        }))
    }

    /// An explicit table covering with the given group.
    pub fn table(
        base: Scheme,
        group: GroupTable,
        classes: BTreeMap<PointKey, usize>,
    ) -> Result<Arc<GaloisCovering>> {
        Self::table_with_defaults(base, group, classes, BTreeMap::new())
    }

    /// Table covering where points not listed individually fall back to a
    /// class assigned to their whole (chart, degree) stratum.
    pub fn table_with_defaults(
        base: Scheme,
        group: GroupTable,
        classes: BTreeMap<PointKey, usize>,
        defaults: BTreeMap<(usize, usize), usize>,
    ) -> Result<Arc<GaloisCovering>> {
        for c in classes.values().chain(defaults.values()) {
            if *c >= group.order() {
                return Err(Error::Invalid("table class index out of range".into()));
            }
        }
        Ok(Arc::new(GaloisCovering {
            base,
            group,
            kind: CoveringKind::Table { classes, defaults },
            mu_gen: OnceLock::new(),
        }))
    }

    pub fn base(&self) -> &Scheme {
        &self.base
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn kind(&self) -> &CoveringKind {
        &self.kind
    }

    /// The canonical generator of μ_r(F_q): the smallest-encoding element
    /// of exact order r.
    pub fn mu_generator(&self) -> Result<&FqElem> {
        let r = match &self.kind {
            CoveringKind::Kummer { r, .. } => *r,
            _ => {
                return Err(Error::Invalid(
                    "mu generator only exists for Kummer coverings".into(),
                ))
            }
        };
        if let Some(z) = self.mu_gen.get() {
            return Ok(z);
        }
        let z = self.base.base().mu_generator(r)?;
        Ok(self.mu_gen.get_or_init(|| z))
    }

    fn check_on_base(&self, x: &ClosedPoint, ext: &FieldExtension) -> Result<()> {
        if x.chart() >= self.base.charts().len() {
            return Err(Error::PointNotOnBase("chart index out of range".into()));
        }
        let chart = &self.base.charts()[x.chart()];
        if x.representative().len() != chart.vars {
            return Err(Error::PointNotOnBase("coordinate arity mismatch".into()));
        }
        let rep = x.representative();
        for p in &chart.eqs {
            if !p.embed(ext).is_zero_at(rep) {
                return Err(Error::PointNotOnBase("equation does not vanish".into()));
            }
        }
        for p in &chart.neqs {
            if p.embed(ext).is_zero_at(rep) {
                return Err(Error::PointNotOnBase("inequation vanishes".into()));
            }
        }
        Ok(())
    }

    /// The geometric Frobenius class at a closed point, as a group element
    /// index.
    pub fn frob_class(&self, x: &ClosedPoint) -> Result<usize> {
        let ext = FieldExtension::new(self.base.base(), x.degree())?;
        self.frob_class_with(x, &ext)
    }

    /// Same, with a caller-supplied extension of the right degree (used by
    /// the L-function inner loop).
    pub fn frob_class_with(&self, x: &ClosedPoint, ext: &FieldExtension) -> Result<usize> {
        match &self.kind {
            CoveringKind::Trivial => Ok(0),
            CoveringKind::Table { classes, defaults } => classes
                .get(&point_key(x))
                .or_else(|| defaults.get(&(x.chart(), x.degree())))
                .copied()
                .ok_or_else(|| {
                    Error::PointNotOnBase("closed point not covered by the table".into())
                }),
            CoveringKind::Kummer { r, f } => {
                self.check_on_base(x, ext)?;
                let class = self.kummer_class(*r, f, x.representative(), ext)?;
                debug_assert!(
                    x.orbit()
                        .iter()
                        .all(|pt| self.kummer_class(*r, f, pt, ext).unwrap() == class),
                    "Frobenius class depends on the orbit representative"
                );
                Ok(class)
            }
        }
    }

    fn kummer_class(
        &self,
        r: u64,
        f: &Poly,
        rep: &[FqElem],
        ext: &FieldExtension,
    ) -> Result<usize> {
        let alpha = f.embed(ext).eval(rep);
        if alpha.is_zero() {
            return Err(Error::VanishingFunction(ext.degree()));
        }
        let q = self.base.base().size();
        // arithmetic symbol: s = Norm(α)^{(q−1)/r} ∈ μ_r(F_q)
        let s = ext.norm(&alpha)?.pow(((q - 1) / r) as i64)?;
        let zeta = self.mu_generator()?;
        let e = dlog_in_mu(&s, zeta, r)?;
        // geometric Frobenius is the inverse of the arithmetic one
        Ok(((r - e) % r) as usize)
    }
}

/// A locally constant sheaf: a covering plus ρ: G → GL_n(Λ).
#[derive(Clone)]
pub struct SheafRep {
    covering: Arc<GaloisCovering>,
    ring: Ring,
    rank: usize,
    rho: Vec<Mat<Ring>>,
}

impl SheafRep {
    /// The constant sheaf Λ^rank.
    pub fn trivial(covering: Arc<GaloisCovering>, ring: &Ring, rank: usize) -> SheafRep {
        let rho = (0..covering.group().order())
            .map(|_| Mat::identity(ring, rank))
            .collect();
        SheafRep {
            covering,
            ring: ring.clone(),
            rank,
            rho,
        }
    }

    /// Rank-1 character sheaf of a cyclic covering: generator ↦ ζ, where
    /// ζ^r = 1 in Λ.
    pub fn character(
        covering: Arc<GaloisCovering>,
        ring: &Ring,
        zeta: &RingElem,
    ) -> Result<SheafRep> {
        let group = covering.group().clone();
        let gen = group.cyclic_generator().ok_or(Error::NonCyclicGroup)?;
        let r = group.order() as u64;
        if zeta.ring() != ring {
            return Err(Error::RingMismatch);
        }
        if !ring.is_unit(zeta) || !ring.pow(zeta, r).is_one() {
            return Err(Error::BadCharacterOrder(format!(
                "character value must be a unit with zeta^{r} = 1"
            )));
        }
        let mut power_of = vec![0u64; group.order()];
        let mut x = group.identity();
        for k in 0..group.order() {
            power_of[x] = k as u64;
            x = group.mul(x, gen);
        }
        let rho = (0..group.order())
            .map(|g| Mat::from_rows(ring, vec![vec![ring.pow(zeta, power_of[g])]]))
            .collect();
        Ok(SheafRep {
            covering,
            ring: ring.clone(),
            rank: 1,
            rho,
        })
    }

    /// The rank-|G| sheaf of the covering itself: ρ(g) is the permutation
    /// matrix of right translation by g⁻¹ (contragredient regular
    /// representation), entries 0/1 in Λ.
    pub fn regular(covering: Arc<GaloisCovering>, ring: &Ring) -> SheafRep {
        let group = covering.group().clone();
        let n = group.order();
        let rho = (0..n)
            .map(|g| {
                let ginv = group.inverse(g);
                Mat::from_fn(ring, n, n, |i, j| {
                    if i == group.mul(j, ginv) {
                        ring.one()
                    } else {
                        ring.zero()
                    }
                })
            })
            .collect();
        SheafRep {
            covering,
            ring: ring.clone(),
            rank: n,
            rho,
        }
    }

    /// Arbitrary validated representation data.
    pub fn from_rho(
        covering: Arc<GaloisCovering>,
        ring: &Ring,
        rho: Vec<Mat<Ring>>,
    ) -> Result<SheafRep> {
        let group = covering.group().clone();
        if rho.len() != group.order() {
            return Err(Error::Invalid(
                "one matrix per group element required".into(),
            ));
        }
        let rank = rho.first().map_or(0, |m| m.rows());
        for m in &rho {
            if !m.is_square() || m.rows() != rank || m.ring() != ring {
                return Err(Error::Invalid(
                    "representation matrices must be square, same rank and ring".into(),
                ));
            }
            if !m.is_invertible() {
                return Err(Error::NotInvertible);
            }
        }
        if !rho[group.identity()].is_identity() {
            return Err(Error::Invalid(
                "rho(identity) must be the identity matrix".into(),
            ));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                if rho[g].mul(&rho[h])? != rho[group.mul(g, h)] {
                    return Err(Error::Invalid(format!(
                        "rho is not multiplicative on the pair ({g}, {h})"
                    )));
                }
            }
        }
        Ok(SheafRep {
            covering,
            ring: ring.clone(),
            rank,
            rho,
        })
    }

    /// Apply a coefficient-ring homomorphism entrywise.
    pub fn change_of_rings(&self, h: &RingHom) -> Result<SheafRep> {
        if h.source() != &self.ring {
            return Err(Error::RingMismatch);
        }
        let target = h.target().clone();
        let rho = self
            .rho
            .iter()
            .map(|m| m.map(&target, |e| h.apply(e)))
            .collect();
        Ok(SheafRep {
            covering: self.covering.clone(),
            ring: target,
            rank: self.rank,
            rho,
        })
    }

    /// Block-upper-triangular extension of `quot` by `sub` along a cocycle
    /// c: G → Mat(rank_sub × rank_quot). The zero cocycle gives the direct
    /// sum; multiplicativity of the blocks is validated on all pairs.
    pub fn extension(sub: &SheafRep, quot: &SheafRep, cocycle: &[Mat<Ring>]) -> Result<SheafRep> {
        if !Arc::ptr_eq(&sub.covering, &quot.covering) {
            return Err(Error::Invalid("extension needs a common covering".into()));
        }
        if sub.ring != quot.ring {
            return Err(Error::RingMismatch);
        }
        let group = sub.covering.group().clone();
        if cocycle.len() != group.order() {
            return Err(Error::Invalid(
                "one cocycle matrix per group element required".into(),
            ));
        }
        let ring = sub.ring.clone();
        for c in cocycle {
            if c.rows() != sub.rank || c.cols() != quot.rank || c.ring() != &ring {
                return Err(Error::Invalid("cocycle matrices have wrong shape".into()));
            }
        }
        let rank = sub.rank + quot.rank;
        let block = |g: usize| {
            Mat::from_fn(&ring, rank, rank, |i, j| {
                if i < sub.rank && j < sub.rank {
                    sub.rho[g].at(i, j).clone()
                } else if i < sub.rank && j >= sub.rank {
                    cocycle[g].at(i, j - sub.rank).clone()
                } else if i >= sub.rank && j >= sub.rank {
                    quot.rho[g].at(i - sub.rank, j - sub.rank).clone()
                } else {
                    ring.zero()
                }
            })
        };
        let rho: Vec<Mat<Ring>> = (0..group.order()).map(block).collect();
        for g in 0..group.order() {
            for h in 0..group.order() {
                if rho[g].mul(&rho[h])? != rho[group.mul(g, h)] {
                    return Err(Error::CocycleNotMultiplicative(g, h));
                }
            }
        }
        Ok(SheafRep {
            covering: sub.covering.clone(),
            ring,
            rank,
            rho,
        })
    }

    pub fn covering(&self) -> &Arc<GaloisCovering> {
        &self.covering
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// ρ at a group element index — the stalk action of that Frobenius
    /// class.
    pub fn stalk(&self, class: usize) -> &Mat<Ring> {
        &self.rho[class]
    }

    pub fn rho(&self) -> &[Mat<Ring>] {
        &self.rho
    }

    pub fn is_trivial_monodromy(&self) -> bool {
        self.rho.iter().all(|m| m.is_identity())
    }

    /// ρ(Frob_x) for a closed point of the base.
    pub fn frobenius_matrix(&self, x: &ClosedPoint) -> Result<&Mat<Ring>> {
        Ok(&self.rho[self.covering.frob_class(x)?])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FqField;

    fn f5() -> FqField {
        FqField::new(5, 1).unwrap()
    }

    fn gm5() -> Scheme {
        Scheme::builtin("Gm", &f5()).unwrap()
    }

    fn kummer4() -> Arc<GaloisCovering> {
        GaloisCovering::kummer(gm5(), 4, Poly::var(&f5(), 1, 0)).unwrap()
    }

    #[test]
    fn kummer_validation() {
        assert!(GaloisCovering::kummer(gm5(), 4, Poly::var(&f5(), 1, 0)).is_ok());
        assert!(matches!(
            GaloisCovering::kummer(gm5(), 3, Poly::var(&f5(), 1, 0)),
            Err(Error::BadKummerOrder { r: 3, qm1: 4 })
        ));
        let a1 = Scheme::builtin("A1", &f5()).unwrap();
        assert!(matches!(
            GaloisCovering::kummer(a1, 2, Poly::var(&f5(), 1, 0)),
            Err(Error::VanishingFunction(1))
        ));
    }

    #[test]
    fn frob_classes_on_gm_f5() {
        let cov = kummer4();
        let pts = cov.base().closed_points(1).unwrap();
        assert_eq!(pts.len(), 4);
        // α = 1 → class 0; α = 2 = ζ → arithmetic 1 → geometric 3;
        // α = 3 = ζ³ → geometric 1; α = 4 = ζ² → geometric 2
        let mut by_alpha = std::collections::BTreeMap::new();
        for x in &pts {
            let alpha = x.representative()[0].encoding();
            by_alpha.insert(alpha, cov.frob_class(x).unwrap());
        }
        assert_eq!(by_alpha[&1], 0);
        assert_eq!(by_alpha[&2], 3);
        assert_eq!(by_alpha[&3], 1);
        assert_eq!(by_alpha[&4], 2);
    }

    #[test]
    fn trivial_covering_class() {
        let cov = GaloisCovering::trivial(gm5());
        let pts = cov.base().closed_points(2).unwrap();
        for x in &pts {
            assert_eq!(cov.frob_class(x).unwrap(), 0);
        }
    }

    #[test]
    fn equidistribution_of_degree_one_classes() {
        // for f = x the degree-1 classes hit each element of C_r exactly
        // (q−1)/r times
        let cov = kummer4();
        let pts = cov.base().closed_points(1).unwrap();
        let mut counts = vec![0usize; 4];
        for x in &pts {
            counts[cov.frob_class(x).unwrap()] += 1;
        }
        assert_eq!(counts, vec![1, 1, 1, 1]);
    }

    #[test]
    fn table_covering_lookup() {
        let base = Scheme::builtin("point(1)", &f5()).unwrap();
        let pts = base.closed_points(1).unwrap();
        let mut classes = BTreeMap::new();
        classes.insert(point_key(&pts[0]), 1usize);
        let cov = GaloisCovering::table(base, GroupTable::cyclic(2), classes).unwrap();
        assert_eq!(cov.frob_class(&pts[0]).unwrap(), 1);
        // a point not in the table
        let other = Scheme::builtin("point(2)", &f5())
            .unwrap()
            .closed_points(2)
            .unwrap();
        assert!(matches!(
            cov.frob_class(&other[0]),
            Err(Error::PointNotOnBase(_))
        ));
    }

    #[test]
    fn character_sheaf() {
        let z13 = Ring::zmod(13).unwrap();
        let zeta = z13.root_of_unity(4).unwrap();
        let chi = SheafRep::character(kummer4(), &z13, &zeta).unwrap();
        assert_eq!(chi.rank(), 1);
        assert_eq!(chi.stalk(1).at(0, 0), &zeta);
        assert_eq!(chi.stalk(2).at(0, 0), &z13.mul(&zeta, &zeta));
        // trivial character always works
        let triv = SheafRep::character(kummer4(), &z13, &z13.one()).unwrap();
        assert!(triv.is_trivial_monodromy());
        // bad order rejected
        assert!(matches!(
            SheafRep::character(kummer4(), &z13, &z13.zmod_elem(2)),
            Err(Error::BadCharacterOrder(_))
        ));
    }

    #[test]
    fn regular_sheaf() {
        let z13 = Ring::zmod(13).unwrap();
        let reg = SheafRep::regular(kummer4(), &z13);
        assert_eq!(reg.rank(), 4);
        // permutation of order 4 at the generator
        assert!(reg.stalk(1).pow(4).is_identity());
        assert!(!reg.stalk(1).pow(2).is_identity());
        // C2 swap example
        let base = Scheme::builtin("point(1)", &f5()).unwrap();
        let pts = base.closed_points(1).unwrap();
        let mut classes = BTreeMap::new();
        classes.insert(point_key(&pts[0]), 1usize);
        let cov = GaloisCovering::table(base, GroupTable::cyclic(2), classes).unwrap();
        let z9 = Ring::zmod(9).unwrap();
        let reg = SheafRep::regular(cov, &z9);
        assert_eq!(reg.stalk(1).at(0, 1), &z9.one());
        assert_eq!(reg.stalk(1).at(1, 0), &z9.one());
        assert_eq!(reg.stalk(1).at(0, 0), &z9.zero());
    }

    #[test]
    fn change_of_rings_and_functoriality() {
        let z9 = Ring::zmod(9).unwrap();
        let z3 = Ring::zmod(3).unwrap();
        // character with zeta 8 over Z/9 projects to zeta 2 over Z/3
        let base = Scheme::builtin("Gm", &FqField::new(2, 1).unwrap()).unwrap();
        let cov =
            GaloisCovering::kummer(base, 1, Poly::var(&FqField::new(2, 1).unwrap(), 1, 0)).unwrap();
        let _ = cov;
        // use a C2 table covering over F5 instead (r=2 | 4)
        let cov2 = GaloisCovering::kummer(gm5(), 2, Poly::var(&f5(), 1, 0)).unwrap();
        let chi = SheafRep::character(cov2.clone(), &z9, &z9.zmod_elem(8)).unwrap();
        let h = RingHom::zmod_projection(&z9, &z3).unwrap();
        let chi3 = chi.change_of_rings(&h).unwrap();
        assert_eq!(chi3.stalk(1).at(0, 0), &z3.zmod_elem(2));

        // identity hom leaves the sheaf equal
        let id = RingHom::identity(&z9);
        let same = chi.change_of_rings(&id).unwrap();
        assert_eq!(same.stalk(1), chi.stalk(1));

        // functoriality: h2 ∘ h1 entrywise
        let gr = Ring::group_ring(9, GroupTable::cyclic(2)).unwrap();
        let sheaf = SheafRep::character(cov2, &gr, &gr.gr_basis(1)).unwrap();
        let aug = RingHom::augmentation(&gr).unwrap();
        let step1 = sheaf.change_of_rings(&aug).unwrap();
        let step2 = step1.change_of_rings(&h).unwrap();
        // compare against applying the composite by hand
        for g in 0..2 {
            let direct = sheaf.stalk(g).map(&z3, |e| h.apply(&aug.apply(e)));
            assert_eq!(step2.stalk(g), &direct);
        }
    }

    #[test]
    fn extension_validation() {
        let z4 = Ring::zmod(4).unwrap();
        let base = Scheme::builtin("point(1)", &f5()).unwrap();
        let pts = base.closed_points(1).unwrap();
        let mut classes = BTreeMap::new();
        classes.insert(point_key(&pts[0]), 1usize);
        let cov = GaloisCovering::table(base, GroupTable::cyclic(2), classes).unwrap();
        let triv = SheafRep::character(cov.clone(), &z4, &z4.one()).unwrap();
        let sign = SheafRep::character(cov.clone(), &z4, &z4.zmod_elem(3)).unwrap();
        // zero cocycle: direct sum
        let zero = vec![Mat::zero(&z4, 1, 1), Mat::zero(&z4, 1, 1)];
        let ds = SheafRep::extension(&triv, &sign, &zero).unwrap();
        assert_eq!(ds.rank(), 2);
        // c(σ) = [2]: [[1,2],[0,3]]² = I mod 4, a valid extension
        let c = vec![
            Mat::zero(&z4, 1, 1),
            Mat::from_rows(&z4, vec![vec![z4.zmod_elem(2)]]),
        ];
        let ext = SheafRep::extension(&triv, &sign, &c).unwrap();
        assert!(ext.stalk(1).pow(2).is_identity());
        // for two trivial pieces, c(σ) = [1] forces c(σσ) = 2 ≠ 0 mod 4
        let bad = vec![
            Mat::zero(&z4, 1, 1),
            Mat::from_rows(&z4, vec![vec![z4.one()]]),
        ];
        assert!(matches!(
            SheafRep::extension(&triv, &triv, &bad),
            Err(Error::CocycleNotMultiplicative(_, _))
        ));
    }

    #[test]
    fn kummer_rejects_points_off_base() {
        let cov = kummer4();
        // the origin of A1 is not on Gm
        let a1 = Scheme::builtin("A1", &f5()).unwrap();
        let origin = a1
            .closed_points(1)
            .unwrap()
            .into_iter()
            .find(|p| p.representative()[0].is_zero())
            .unwrap();
        assert!(matches!(
            cov.frob_class(&origin),
            Err(Error::PointNotOnBase(_))
        ));
    }

    #[test]
    fn regular_rep_diagonalizes_into_characters() {
        // over Z/13 with ζ of order 4, the Vandermonde matrix V[j][k] = ζ^{jk}
        // intertwines the permutation representation with the diagonal of
        // all four characters: V·ρ(g) = diag(ζ^{−j·g})·V
        let z13 = Ring::zmod(13).unwrap();
        let zeta = z13.root_of_unity(4).unwrap();
        let reg = SheafRep::regular(kummer4(), &z13);
        let v = Mat::from_fn(&z13, 4, 4, |j, k| z13.pow(&zeta, (j * k) as u64));
        for g in 0..4usize {
            let lhs = v.mul(reg.stalk(g)).unwrap();
            let rhs = Mat::from_fn(&z13, 4, 4, |j, k| {
                let chi = z13.pow(&zeta, (j * (4 - g) % 4) as u64);
                z13.mul(&chi, v.at(j, k))
            });
            assert_eq!(lhs, rhs, "g = {g}");
        }
        // and a character hom applied to the rank-1 group-ring sheaf gives
        // the corresponding character sheaf
        let grc4 = Ring::group_ring(13, crate::ring::GroupTable::cyclic(4)).unwrap();
        let gen = grc4.gr_basis(1);
        let rank1 = SheafRep::character(kummer4(), &grc4, &gen).unwrap();
        let h = RingHom::character(&grc4, &z13, &zeta).unwrap();
        let pushed = rank1.change_of_rings(&h).unwrap();
        let chi = SheafRep::character(kummer4(), &z13, &zeta).unwrap();
        for g in 0..4 {
            assert_eq!(pushed.stalk(g), chi.stalk(g));
        }
    }

    #[test]
    fn coboundary_cocycles_are_multiplicative() {
        // c(g) = ρ_sub(g)·B − B·ρ_quot(g) always extends
        let z9 = Ring::zmod(9).unwrap();
        let cov = kummer4();
        let zeta = Ring::zmod(9).unwrap().root_of_unity(2).unwrap();
        let sub = SheafRep::character(cov.clone(), &z9, &z9.one()).unwrap();
        let quot = SheafRep::character(cov.clone(), &z9, &zeta).unwrap();
        let b = Mat::from_rows(&z9, vec![vec![z9.zmod_elem(5)]]);
        let cocycle: Vec<Mat<Ring>> = (0..4)
            .map(|g| {
                sub.stalk(g)
                    .mul(&b)
                    .unwrap()
                    .add(&b.mul(quot.stalk(g)).unwrap().neg())
                    .unwrap()
            })
            .collect();
        assert!(SheafRep::extension(&sub, &quot, &cocycle).is_ok());
    }
}
