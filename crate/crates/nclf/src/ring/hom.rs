//! Ring homomorphisms between finite coefficient rings: characters of cyclic
//! group rings, abelianization, augmentation, and modulus projections.
//!
//! These realize the one-term change-of-rings bimodules; every constructed
//! hom is validated (1 ↦ 1, additive and multiplicative on sampled pairs)
//! before it is handed out.

use super::{ElemData, Ring, RingData, RingElem};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

#[derive(Clone, Debug)]
pub enum HomKind {
    Identity,
    ZModProjection,
    Augmentation,
    Character {
        zeta: RingElem,
        /// exponent of the chosen generator for each group element
        power_of: Vec<u64>,
    },
    Abelianization {
        class_of: Vec<usize>,
    },
}

/// A validated ring homomorphism.
#[derive(Clone)]
pub struct RingHom {
    source: Ring,
    target: Ring,
    kind: HomKind,
    name: String,
}

impl fmt::Debug for RingHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?} -> {:?}", self.name, self.source, self.target)
    }
}

impl RingHom {
    pub fn identity(ring: &Ring) -> RingHom {
        RingHom {
            source: ring.clone(),
            target: ring.clone(),
            kind: HomKind::Identity,
            name: "identity".into(),
        }
    }

    /// Z/m → Z/m′ with m′ | m.
    pub fn zmod_projection(source: &Ring, target: &Ring) -> Result<RingHom> {
        match (source.data(), target.data()) {
            (RingData::ZMod { m }, RingData::ZMod { m: mp }) if m % mp == 0 => {
                let h = RingHom {
                    source: source.clone(),
                    target: target.clone(),
                    kind: HomKind::ZModProjection,
                    name: format!("zmod({m}->{mp})"),
                };
                h.validate()?;
                Ok(h)
            }
            _ => Err(Error::HomValidationFailed(
                "zmod projection needs Z/m -> Z/m' with m' | m".into(),
            )),
        }
    }

    /// Λ[G] → Λ, summing coefficients.
    pub fn augmentation(source: &Ring) -> Result<RingHom> {
        match source.data() {
            RingData::GroupRing { m, .. } => {
                let h = RingHom {
                    source: source.clone(),
                    target: Ring::zmod(*m)?,
                    kind: HomKind::Augmentation,
                    name: "augmentation".into(),
                };
                h.validate()?;
                Ok(h)
            }
            _ => Err(Error::HomValidationFailed(
                "augmentation needs a group ring source".into(),
            )),
        }
    }

    /// Character of a cyclic group ring: generator ↦ ζ, for ζ with
    /// ζ^|G| = 1 in the target.
    pub fn character(source: &Ring, target: &Ring, zeta: &RingElem) -> Result<RingHom> {
        let group = match source.data() {
            RingData::GroupRing { group, .. } => group.clone(),
            _ => {
                return Err(Error::HomValidationFailed(
                    "character needs a group ring source".into(),
                ))
            }
        };
        let gen = group.cyclic_generator().ok_or(Error::NonCyclicGroup)?;
        let r = group.order() as u64;
        assert!(zeta.ring() == target, "zeta must live in the target ring");
        if !target.is_unit(zeta) || !target.pow(zeta, r).is_one() {
            return Err(Error::BadCharacterOrder(format!(
                "character value must be a unit with zeta^{r} = 1"
            )));
        }
        // exponent table: g_i = gen^{power_of[i]}
        let mut power_of = vec![u64::MAX; group.order()];
        let mut x = group.identity();
        for k in 0..group.order() {
            power_of[x] = k as u64;
            x = group.mul(x, gen);
        }
        let h = RingHom {
            source: source.clone(),
            target: target.clone(),
            kind: HomKind::Character {
                zeta: zeta.clone(),
                power_of,
            },
            name: format!("character(zeta={zeta})"),
        };
        h.validate()?;
        Ok(h)
    }

    /// Λ[G] → Λ[G^ab], coefficients transported along g ↦ [g].
    pub fn abelianization(source: &Ring) -> Result<RingHom> {
        match source.data() {
            RingData::GroupRing { m, group } => {
                let (ab, class_of) = group.abelianization();
                let target = Ring::group_ring(*m, ab)?;
                let h = RingHom {
                    source: source.clone(),
                    target,
                    kind: HomKind::Abelianization { class_of },
                    name: "abelianization".into(),
                };
                h.validate()?;
                Ok(h)
            }
            _ => Err(Error::HomValidationFailed(
                "abelianization needs a group ring source".into(),
            )),
        }
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, a: &RingElem) -> RingElem {
        assert!(
            a.ring() == &self.source,
            "element not in the hom's source ring"
        );
        match (&self.kind, a.data()) {
            (HomKind::Identity, _) => a.clone(),
            (HomKind::ZModProjection, ElemData::Z(v)) => self.target.from_u64(*v),
            (HomKind::Augmentation, ElemData::Gr(c)) => {
                let sum = c.iter().fold(0u64, |s, &v| s.wrapping_add(v));
                self.target.from_u64(sum)
            }
            (HomKind::Character { zeta, power_of }, ElemData::Gr(c)) => {
                let mut acc = self.target.zero();
                for (i, &ci) in c.iter().enumerate() {
                    if ci != 0 {
                        let term = self.target.mul(
                            &self.target.from_u64(ci),
                            &self.target.pow(zeta, power_of[i]),
                        );
                        acc = self.target.add(&acc, &term);
                    }
                }
                acc
            }
            (HomKind::Abelianization { class_of }, ElemData::Gr(c)) => {
                let ab_order = self.target.group().unwrap().order();
                let mut out = vec![0u64; ab_order];
                let m = self.target.base_modulus().unwrap();
                for (i, &ci) in c.iter().enumerate() {
                    let k = class_of[i];
                    out[k] = (out[k] + ci) % m;
                }
                self.target.gr_elem(&out)
            }
            _ => unreachable!("hom kind does not match element payload"),
        }
    }

    /// 1 ↦ 1 plus additivity/multiplicativity on a deterministic sample.
    fn validate(&self) -> Result<()> {
        if !self.apply(&self.source.one()).is_one() {
            return Err(Error::HomValidationFailed(format!(
                "{} does not map 1 to 1",
                self.name
            )));
        }
        // the integral image of the base modulus must vanish in the target
        if let Some(m) = self.source.base_modulus() {
            if !self.target.from_u64(m).is_zero() && !matches!(self.kind, HomKind::ZModProjection) {
                return Err(Error::HomValidationFailed(format!(
                    "{}: target characteristic does not annihilate the source modulus",
                    self.name
                )));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x4011);
        let size = self.source.size();
        for _ in 0..24 {
            let a = self.source.element_from_index(rng.gen_range(0..size));
            let b = self.source.element_from_index(rng.gen_range(0..size));
            let add_ok = self.apply(&self.source.add(&a, &b))
                == self.target.add(&self.apply(&a), &self.apply(&b));
            let mul_ok = self.apply(&self.source.mul(&a, &b))
                == self.target.mul(&self.apply(&a), &self.apply(&b));
            if !add_ok || !mul_ok {
                return Err(Error::HomValidationFailed(format!(
                    "{} fails additivity/multiplicativity on a sampled pair",
                    self.name
                )));
            }
        }
        Ok(())
    }
}
