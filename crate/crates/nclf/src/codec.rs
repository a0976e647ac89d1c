//! JSON models for fields, rings, schemes, sheaves, jobs, and reports.
//!
//! Parsing is strict (`deny_unknown_fields`) so malformed jobs fail fast
//! with a message instead of being silently reinterpreted. Serialized
//! output is byte-deterministic: struct field order is fixed and no timing
//! data is included.

use crate::error::{Error, Result};
use crate::ff::FqField;
use crate::k1::{Certificate, K1Class, Move, Verdict};
use crate::lfun::{LReport, Method};
use crate::matrix::Mat;
use crate::ring::{ElemData, GroupTable, Ring, RingData, RingElem};
use crate::series::{SeriesRing, TruncSeries};
use crate::sheaf::{GaloisCovering, PointKey, SheafRep};
use crate::variety::{Poly, Scheme, Term};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

// ---------- fields ----------

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDto {
    pub p: u64,
    pub nu: usize,
    /// Derived deterministically from (p, nu); verified when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

pub fn field_to_dto(f: &FqField) -> FieldDto {
    FieldDto {
        p: f.p(),
        nu: f.nu(),
        modulus: Some(f.modulus().to_vec()),
    }
}

pub fn field_from_dto(dto: &FieldDto) -> Result<FqField> {
    let f = FqField::new(dto.p, dto.nu)?;
    if let Some(m) = &dto.modulus {
        if m != f.modulus() {
            return Err(Error::Invalid(format!(
                "modulus {m:?} does not match the canonical modulus of F_{{{}^{}}}",
                dto.p, dto.nu
            )));
        }
    }
    Ok(f)
}

// ---------- groups and rings ----------

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupDto {
    Named { group: String },
    Table { order: usize, mult: Vec<Vec<usize>> },
}

pub fn group_to_dto(g: &GroupTable) -> GroupDto {
    match g.name() {
        Some(n) => GroupDto::Named {
            group: n.to_string(),
        },
        None => GroupDto::Table {
            order: g.order(),
            mult: g.mult_rows(),
        },
    }
}

pub fn group_from_dto(dto: &GroupDto) -> Result<GroupTable> {
    match dto {
        GroupDto::Named { group } => GroupTable::by_name(group),
        GroupDto::Table { order, mult } => {
            if mult.len() != *order {
                return Err(Error::TableInvalid(
                    "order does not match table size".into(),
                ));
            }
            GroupTable::from_table(mult.clone(), None, None)
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RingDto {
    Zmod { m: u64 },
    GroupRing { m: u64, group: GroupDto },
    Product { factors: Vec<RingDto> },
}

pub fn ring_to_dto(r: &Ring) -> RingDto {
    match r.data() {
        RingData::ZMod { m } => RingDto::Zmod { m: *m },
        RingData::GroupRing { m, group } => RingDto::GroupRing {
            m: *m,
            group: group_to_dto(group),
        },
        RingData::Product { factors } => RingDto::Product {
            factors: factors.iter().map(ring_to_dto).collect(),
        },
    }
}

pub fn ring_from_dto(dto: &RingDto) -> Result<Ring> {
    match dto {
        RingDto::Zmod { m } => Ring::zmod(*m),
        RingDto::GroupRing { m, group } => Ring::group_ring(*m, group_from_dto(group)?),
        RingDto::Product { factors } => Ring::product(
            factors
                .iter()
                .map(ring_from_dto)
                .collect::<Result<Vec<_>>>()?,
        ),
    }
}

/// Ring elements: a residue for Z/m, a coefficient vector for group rings,
/// a component list for products.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemDto {
    Int(u64),
    List(Vec<ElemDto>),
}

pub fn elem_to_dto(e: &RingElem) -> ElemDto {
    match e.data() {
        ElemData::Z(v) => ElemDto::Int(*v),
        ElemData::Gr(c) => ElemDto::List(c.iter().map(|&v| ElemDto::Int(v)).collect()),
        ElemData::Prod(p) => ElemDto::List(p.iter().map(elem_to_dto).collect()),
    }
}

pub fn elem_from_dto(ring: &Ring, dto: &ElemDto) -> Result<RingElem> {
    match (ring.data(), dto) {
        (RingData::ZMod { .. }, ElemDto::Int(v)) => Ok(ring.zmod_elem(*v)),
        (RingData::GroupRing { group, .. }, ElemDto::List(items)) => {
            if items.len() != group.order() {
                return Err(Error::Invalid(
                    "coefficient count does not match group order".into(),
                ));
            }
            let coeffs: Result<Vec<u64>> = items
                .iter()
                .map(|i| match i {
                    ElemDto::Int(v) => Ok(*v),
                    _ => Err(Error::Invalid(
                        "group-ring coefficients must be integers".into(),
                    )),
                })
                .collect();
            Ok(ring.gr_elem(&coeffs?))
        }
        (RingData::Product { factors }, ElemDto::List(items)) => {
            if items.len() != factors.len() {
                return Err(Error::Invalid(
                    "component count does not match product".into(),
                ));
            }
            let parts: Result<Vec<RingElem>> = factors
                .iter()
                .zip(items)
                .map(|(f, i)| elem_from_dto(f, i))
                .collect();
            Ok(ring.product_elem(parts?))
        }
        _ => Err(Error::Invalid(
            "element payload does not match ring kind".into(),
        )),
    }
}

// ---------- series ----------

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDto {
    pub m: usize,
    pub coeffs: Vec<ElemDto>,
}

pub fn series_to_dto(s: &TruncSeries) -> SeriesDto {
    SeriesDto {
        m: s.ring().truncation(),
        coeffs: s.coeffs().iter().map(elem_to_dto).collect(),
    }
}

pub fn series_from_dto(ring: &Ring, dto: &SeriesDto) -> Result<TruncSeries> {
    let sring = SeriesRing::new(ring, dto.m);
    let coeffs: Result<Vec<RingElem>> = dto.coeffs.iter().map(|c| elem_from_dto(ring, c)).collect();
    Ok(sring.from_coeffs(coeffs?))
}

// ---------- polynomials and schemes ----------

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDto {
    pub exps: Vec<u32>,
    /// Coefficient as a little-endian coefficient array over Z/p.
    pub coeff: Vec<u64>,
}

pub type PolyDto = Vec<TermDto>;

pub fn poly_to_dto(p: &Poly) -> PolyDto {
    p.terms()
        .iter()
        .map(|t| TermDto {
            exps: t.exps.clone(),
            coeff: t.coeff.coeffs().to_vec(),
        })
        .collect()
}

pub fn poly_from_dto(field: &FqField, vars: usize, dto: &PolyDto) -> Result<Poly> {
    let terms: Vec<Term> = dto
        .iter()
        .map(|t| {
            if t.coeff.len() > field.nu() {
                return Err(Error::Invalid(
                    "coefficient array longer than field degree".into(),
                ));
            }
            Ok(Term {
                exps: t.exps.clone(),
                coeff: field.from_coeffs(&t.coeff),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Poly::new(field, vars, terms)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDto {
    pub vars: usize,
    #[serde(default)]
    pub eqs: Vec<PolyDto>,
    #[serde(default)]
    pub neqs: Vec<PolyDto>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SchemeDto {
    Builtin {
        builtin: String,
        base: FieldDto,
    },
    Union {
        union: Vec<SchemeDto>,
    },
    Charts {
        base: FieldDto,
        charts: Vec<ChartDto>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        #[serde(default, skip_serializing_if = "is_false")]
        zero_dimensional: bool,
    },
}

pub fn scheme_from_dto(dto: &SchemeDto) -> Result<Scheme> {
    match dto {
        SchemeDto::Builtin { builtin, base } => Scheme::builtin(builtin, &field_from_dto(base)?),
        SchemeDto::Union { union } => {
            let mut parts = union.iter().map(scheme_from_dto);
            let first = parts
                .next()
                .ok_or_else(|| Error::Invalid("empty union".into()))??;
            parts.try_fold(first, |acc, s| acc.disjoint_union(&s?))
        }
        SchemeDto::Charts {
            base,
            charts,
            name,
            zero_dimensional,
        } => {
            let field = field_from_dto(base)?;
            let mut parts = Vec::new();
            for c in charts {
                let eqs: Result<Vec<Poly>> = c
                    .eqs
                    .iter()
                    .map(|p| poly_from_dto(&field, c.vars, p))
                    .collect();
                let neqs: Result<Vec<Poly>> = c
                    .neqs
                    .iter()
                    .map(|p| poly_from_dto(&field, c.vars, p))
                    .collect();
                parts.push(Scheme::affine(&field, c.vars, eqs?, neqs?)?);
            }
            let mut iter = parts.into_iter();
            let mut s = iter
                .next()
                .ok_or_else(|| Error::Invalid("no charts".into()))?;
            for part in iter {
                s = s.disjoint_union(&part)?;
            }
            s.set_name(name.clone());
            if *zero_dimensional {
                for chart in s.charts() {
                    if chart.eqs.is_empty() {
                        return Err(Error::Invalid(
                            "a zero-dimensional chart needs at least one equation".into(),
                        ));
                    }
                }
                s = s.into_zero_dimensional();
            }
            Ok(s)
        }
    }
}

pub fn scheme_to_dto(s: &Scheme) -> SchemeDto {
    if let Some(name) = s.name() {
        if matches!(name, "A1" | "Gm" | "P1") || name.starts_with("point(") {
            return SchemeDto::Builtin {
                builtin: name.to_string(),
                base: field_to_dto(s.base()),
            };
        }
    }
    SchemeDto::Charts {
        base: field_to_dto(s.base()),
        charts: s
            .charts()
            .iter()
            .map(|c| ChartDto {
                vars: c.vars,
                eqs: c.eqs.iter().map(poly_to_dto).collect(),
                neqs: c.neqs.iter().map(poly_to_dto).collect(),
            })
            .collect(),
        name: s.name().map(|n| n.to_string()),
        zero_dimensional: s.is_zero_dimensional(),
    }
}

// ---------- coverings and sheaves ----------

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntryDto {
    pub chart: usize,
    pub degree: usize,
    /// Representative coordinates (one coefficient array per coordinate);
    /// omitted to target every closed point of this chart and degree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep: Option<Vec<Vec<u64>>>,
    pub class: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoveringDto {
    Trivial,
    Kummer {
        r: u64,
        f: PolyDto,
    },
    Table {
        group: GroupDto,
        classes: Vec<TableEntryDto>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RepDto {
    /// Constant sheaf of this rank.
    Trivial { rank: usize },
    /// Rank-1 character sheaf of a cyclic covering: generator ↦ zeta.
    Character { zeta: ElemDto },
    /// The rank-|G| permutation sheaf of the covering.
    Regular,
    /// Explicit matrices, one per group element.
    Rho { matrices: Vec<Vec<Vec<ElemDto>>> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheafDto {
    pub covering: CoveringDto,
    pub ring: RingDto,
    pub rep: RepDto,
}

pub fn covering_from_dto(scheme: &Scheme, dto: &CoveringDto) -> Result<Arc<GaloisCovering>> {
    match dto {
        CoveringDto::Trivial => Ok(GaloisCovering::trivial(scheme.clone())),
        CoveringDto::Kummer { r, f } => {
            let chart_vars = scheme
                .charts()
                .first()
                .map(|c| c.vars)
                .ok_or_else(|| Error::Invalid("scheme has no charts".into()))?;
            let f = poly_from_dto(scheme.base(), chart_vars, f)?;
            GaloisCovering::kummer(scheme.clone(), *r, f)
        }
        CoveringDto::Table { group, classes } => {
            let group = group_from_dto(group)?;
            let mut exact: BTreeMap<PointKey, usize> = BTreeMap::new();
            let mut defaults: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            for e in classes {
                match &e.rep {
                    Some(coords) => {
                        let ext = crate::ff::FieldExtension::new(scheme.base(), e.degree)?;
                        let encodings: Vec<u64> = coords
                            .iter()
                            .map(|c| ext.top().from_coeffs(c).encoding())
                            .collect();
                        exact.insert((e.chart, e.degree, encodings), e.class);
                    }
                    None => {
                        defaults.insert((e.chart, e.degree), e.class);
                    }
                }
            }
            GaloisCovering::table_with_defaults(scheme.clone(), group, exact, defaults)
        }
    }
}

pub fn sheaf_from_dto(scheme: &Scheme, dto: &SheafDto) -> Result<SheafRep> {
    let covering = covering_from_dto(scheme, &dto.covering)?;
    let ring = ring_from_dto(&dto.ring)?;
    match &dto.rep {
        RepDto::Trivial { rank } => Ok(SheafRep::trivial(covering, &ring, *rank)),
        RepDto::Character { zeta } => {
            let z = elem_from_dto(&ring, zeta)?;
            SheafRep::character(covering, &ring, &z)
        }
        RepDto::Regular => Ok(SheafRep::regular(covering, &ring)),
        RepDto::Rho { matrices } => {
            let mats: Result<Vec<Mat<Ring>>> = matrices
                .iter()
                .map(|rows| {
                    let rows: Result<Vec<Vec<RingElem>>> = rows
                        .iter()
                        .map(|r| r.iter().map(|e| elem_from_dto(&ring, e)).collect())
                        .collect();
                    Ok(Mat::from_rows(&ring, rows?))
                })
                .collect();
            SheafRep::from_rho(covering, &ring, mats?)
        }
    }
}

// ---------- jobs ----------

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobDto {
    /// One of "lfun" or "verify"; checked against the CLI subcommand when
    /// present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    pub scheme: SchemeDto,
    pub sheaf: SheafDto,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verify: Vec<String>,
}

pub fn job_from_str(s: &str) -> Result<JobDto> {
    Ok(serde_json::from_str(s)?)
}

pub fn job_methods(job: &JobDto) -> Result<Vec<Method>> {
    job.verify.iter().map(|m| Method::parse(m)).collect()
}

// ---------- certificates ----------

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MoveDto {
    Addrow {
        src: usize,
        dst: usize,
        factor: ElemDto,
    },
    Addcol {
        src: usize,
        dst: usize,
        factor: ElemDto,
    },
    SwapAsWhitehead {
        a: usize,
        b: usize,
    },
    ScalePair {
        a: usize,
        b: usize,
        factor: ElemDto,
    },
}

pub fn move_to_dto(mv: &Move<RingElem>) -> MoveDto {
    match mv {
        Move::AddRow { src, dst, factor } => MoveDto::Addrow {
            src: *src,
            dst: *dst,
            factor: elem_to_dto(factor),
        },
        Move::AddCol { src, dst, factor } => MoveDto::Addcol {
            src: *src,
            dst: *dst,
            factor: elem_to_dto(factor),
        },
        Move::SwapRows { a, b } => MoveDto::SwapAsWhitehead { a: *a, b: *b },
        Move::ScalePair { a, b, factor } => MoveDto::ScalePair {
            a: *a,
            b: *b,
            factor: elem_to_dto(factor),
        },
    }
}

pub fn move_from_dto(ring: &Ring, dto: &MoveDto) -> Result<Move<RingElem>> {
    Ok(match dto {
        MoveDto::Addrow { src, dst, factor } => Move::AddRow {
            src: *src,
            dst: *dst,
            factor: elem_from_dto(ring, factor)?,
        },
        MoveDto::Addcol { src, dst, factor } => Move::AddCol {
            src: *src,
            dst: *dst,
            factor: elem_from_dto(ring, factor)?,
        },
        MoveDto::SwapAsWhitehead { a, b } => Move::SwapRows { a: *a, b: *b },
        MoveDto::ScalePair { a, b, factor } => Move::ScalePair {
            a: *a,
            b: *b,
            factor: elem_from_dto(ring, factor)?,
        },
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDto {
    pub moves: Vec<MoveDto>,
    pub final_unit: ElemDto,
}

pub fn certificate_to_dto(c: &Certificate<RingElem>) -> CertificateDto {
    CertificateDto {
        moves: c.moves.iter().map(move_to_dto).collect(),
        final_unit: elem_to_dto(&c.final_unit),
    }
}

pub fn certificate_from_dto(ring: &Ring, dto: &CertificateDto) -> Result<Certificate<RingElem>> {
    Ok(Certificate {
        moves: dto
            .moves
            .iter()
            .map(|m| move_from_dto(ring, m))
            .collect::<Result<Vec<_>>>()?,
        final_unit: elem_from_dto(ring, &dto.final_unit)?,
    })
}

// ---------- reports ----------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GlobalSideDto {
    pub method: String,
    pub series: SeriesDto,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportDto {
    pub scheme: String,
    pub ring: RingDto,
    pub m: usize,
    pub euler_product: SeriesDto,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series_form: Option<SeriesDto>,
    pub global_sides: Vec<GlobalSideDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<(String, String)>,
    pub closed_point_counts: Vec<u64>,
    pub all_equal: bool,
}

pub fn report_to_dto(report: &LReport) -> ReportDto {
    let ring = report.euler_product.ring().coeff_ring().clone();
    ReportDto {
        scheme: report.scheme_name.clone(),
        ring: ring_to_dto(&ring),
        m: report.m,
        euler_product: series_to_dto(report.euler_product.rep()),
        series_form: report.series_form.as_ref().map(series_to_dto),
        global_sides: report
            .global_sides
            .iter()
            .map(|g| GlobalSideDto {
                method: g.method.name().to_string(),
                series: series_to_dto(g.class.rep()),
                verdict: g.verdict.to_string(),
                notes: g.notes.clone(),
            })
            .collect(),
        skipped: report
            .skipped
            .iter()
            .map(|(m, why)| (m.name().to_string(), why.clone()))
            .collect(),
        closed_point_counts: report.closed_point_counts.clone(),
        all_equal: report.all_equal(),
    }
}

/// Verdict round-trip helper for report consumers.
pub fn verdict_from_str(s: &str) -> Verdict {
    match s {
        "EqualCertified" => Verdict::EqualCertified,
        "EqualOnAllInvariants" => Verdict::EqualOnAllInvariants,
        other => Verdict::Distinguished(other.to_string()),
    }
}

/// A matrix as nested element DTOs (for the `k1` CLI input).
pub fn matrix_from_dto(ring: &Ring, rows: &[Vec<ElemDto>]) -> Result<Mat<Ring>> {
    let rows: Result<Vec<Vec<RingElem>>> = rows
        .iter()
        .map(|r| r.iter().map(|e| elem_from_dto(ring, e)).collect())
        .collect();
    Ok(Mat::from_rows(ring, rows?))
}

/// A K₁ class over a coefficient ring: representative, certificate, and
/// determinant value when the ring is commutative.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct K1ClassDto {
    pub rep: ElemDto,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det: Option<ElemDto>,
}

pub fn k1_class_to_dto(c: &K1Class<Ring>) -> K1ClassDto {
    K1ClassDto {
        rep: elem_to_dto(c.rep()),
        certificate: c.certificate().map(certificate_to_dto),
        det: c.det().ok().map(|d| elem_to_dto(&d)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_roundtrip() {
        let gr = Ring::group_ring(9, GroupTable::cyclic(2)).unwrap();
        let dto = ring_to_dto(&gr);
        let s = serde_json::to_string(&dto).unwrap();
        let back = ring_from_dto(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(gr, back);

        let e = gr.gr_elem(&[1, 3]);
        let edto = elem_to_dto(&e);
        let back = elem_from_dto(
            &gr,
            &serde_json::from_str(&serde_json::to_string(&edto).unwrap()).unwrap(),
        )
        .unwrap();
        assert_eq!(e, back);
    }

    #[test]
    fn scheme_roundtrip() {
        let f5 = FqField::new(5, 1).unwrap();
        for name in ["A1", "Gm", "P1", "point(3)"] {
            let s = Scheme::builtin(name, &f5).unwrap();
            let dto = scheme_to_dto(&s);
            let back = scheme_from_dto(&dto).unwrap();
            assert_eq!(back.name(), Some(name));
            assert_eq!(back.point_count(2).unwrap(), s.point_count(2).unwrap());
            assert_eq!(back.is_zero_dimensional(), s.is_zero_dimensional());
        }
    }

    #[test]
    fn job_parsing() {
        let json = r#"{
            "command": "verify",
            "scheme": {"builtin": "Gm", "base": {"p": 5, "nu": 1}},
            "sheaf": {
                "covering": {"kind": "kummer", "r": 4, "f": [{"exps": [1], "coeff": [1]}]},
                "ring": {"kind": "zmod", "m": 13},
                "rep": "regular"
            },
            "m": 4,
            "verify": ["covering-zeta"]
        }"#;
        let job = job_from_str(json).unwrap();
        let scheme = scheme_from_dto(&job.scheme).unwrap();
        let sheaf = sheaf_from_dto(&scheme, &job.sheaf).unwrap();
        assert_eq!(sheaf.rank(), 4);
        assert_eq!(job_methods(&job).unwrap(), vec![Method::CoveringZeta]);
    }

    #[test]
    fn unknown_fields_rejected() {
        let json = r#"{"scheme": {"builtin": "Gm", "base": {"p": 5, "nu": 1}},
                       "sheaf": {"covering": {"kind": "trivial"},
                                 "ring": {"kind": "zmod", "m": 9},
                                 "rep": {"trivial": {"rank": 1}}},
                       "surprise": 1}"#;
        assert!(job_from_str(json).is_err());
    }

    #[test]
    fn table_covering_from_dto_with_defaults() {
        let f5 = FqField::new(5, 1).unwrap();
        let s = Scheme::builtin("point(2)", &f5).unwrap();
        let dto = CoveringDto::Table {
            group: GroupDto::Named { group: "C2".into() },
            classes: vec![TableEntryDto {
                chart: 0,
                degree: 2,
                rep: None,
                class: 1,
            }],
        };
        let cov = covering_from_dto(&s, &dto).unwrap();
        let pts = s.closed_points(2).unwrap();
        assert_eq!(cov.frob_class(&pts[0]).unwrap(), 1);
    }

    #[test]
    fn certificate_roundtrip() {
        let ring = Ring::zmod(9).unwrap();
        let m = Mat::from_rows(
            &ring,
            vec![
                vec![ring.zmod_elem(2), ring.one()],
                vec![ring.one(), ring.one()],
            ],
        );
        let c = K1Class::of_matrix(&m).unwrap();
        let dto = k1_class_to_dto(&c);
        let s = serde_json::to_string(&dto).unwrap();
        let parsed: K1ClassDto = serde_json::from_str(&s).unwrap();
        let cert = certificate_from_dto(&ring, parsed.certificate.as_ref().unwrap()).unwrap();
        let u = cert.replay(&ring, &m).unwrap();
        assert_eq!(&u, c.rep());
    }
}
