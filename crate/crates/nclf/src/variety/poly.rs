//! Multivariate polynomials over F_q with exact evaluation over extension
//! fields.

use crate::error::{Error, Result};
use crate::ff::{FieldExtension, FqElem, FqField};
use std::fmt;

/// A term: exponent vector (one entry per variable) and coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub exps: Vec<u32>,
    pub coeff: FqElem,
}

/// A polynomial over F_q in a fixed number of variables, kept in canonical
/// form (terms sorted by exponent vector, zero coefficients dropped).
#[derive(Clone, PartialEq)]
pub struct Poly {
    field: FqField,
    vars: usize,
    terms: Vec<Term>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn var_name(i: usize) -> String {
    match i {
        0 => "x".into(),
        1 => "y".into(),
        2 => "z".into(),
        3 => "w".into(),
        i => format!("x{i}"),
    }
}

impl Poly {
    pub fn new(field: &FqField, vars: usize, terms: Vec<Term>) -> Result<Poly> {
        for t in &terms {
            if t.exps.len() != vars {
                return Err(Error::Invalid(
                    "term exponent vector has wrong length".into(),
                ));
            }
            if t.coeff.field() != field {
                return Err(Error::Invalid("coefficient in wrong field".into()));
            }
        }
        let mut p = Poly {
            field: field.clone(),
            vars,
            terms,
        };
        p.canonicalize();
        Ok(p)
    }

    pub fn zero(field: &FqField, vars: usize) -> Poly {
        Poly {
            field: field.clone(),
            vars,
            terms: Vec::new(),
        }
    }

    pub fn constant(field: &FqField, vars: usize, c: FqElem) -> Poly {
        Poly::new(
            field,
            vars,
            vec![Term {
                exps: vec![0; vars],
                coeff: c,
            }],
        )
        .unwrap()
    }

    /// The variable x_i.
    pub fn var(field: &FqField, vars: usize, i: usize) -> Poly {
        assert!(i < vars);
        let mut exps = vec![0; vars];
        exps[i] = 1;
        Poly::new(
            field,
            vars,
            vec![Term {
                exps,
                coeff: field.one(),
            }],
        )
        .unwrap()
    }

    /// c · x_i^e.
    pub fn monomial(field: &FqField, vars: usize, i: usize, e: u32, c: FqElem) -> Poly {
        assert!(i < vars);
        let mut exps = vec![0; vars];
        exps[i] = e;
        Poly::new(field, vars, vec![Term { exps, coeff: c }]).unwrap()
    }

    fn canonicalize(&mut self) {
        self.terms.sort_by(|a, b| a.exps.cmp(&b.exps));
        let mut out: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match out.last_mut() {
                Some(last) if last.exps == t.exps => {
                    last.coeff = last.coeff.add(&t.coeff);
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        self.terms = out;
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert!(self.field == other.field && self.vars == other.vars);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        let mut p = Poly {
            field: self.field.clone(),
            vars: self.vars,
            terms,
        };
        p.canonicalize();
        p
    }

    pub fn neg(&self) -> Poly {
        Poly {
            field: self.field.clone(),
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exps: t.exps.clone(),
                    coeff: t.coeff.neg(),
                })
                .collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert!(self.field == other.field && self.vars == other.vars);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let exps: Vec<u32> = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
                terms.push(Term {
                    exps,
                    coeff: a.coeff.mul(&b.coeff),
                });
            }
        }
        let mut p = Poly {
            field: self.field.clone(),
            vars: self.vars,
            terms,
        };
        p.canonicalize();
        p
    }

    /// Reinterpret in a larger variable set (new variables get exponent 0).
    pub fn lift_vars(&self, vars: usize) -> Poly {
        assert!(vars >= self.vars);
        Poly {
            field: self.field.clone(),
            vars,
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let mut exps = t.exps.clone();
                    exps.resize(vars, 0);
                    Term {
                        exps,
                        coeff: t.coeff.clone(),
                    }
                })
                .collect(),
        }
    }

    /// Total degree in variable i.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|t| t.exps[i]).max().unwrap_or(0)
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.iter().any(|t| t.exps[i] > 0)
    }

    /// Evaluate at a base-field point.
    pub fn eval_base(&self, point: &[FqElem]) -> FqElem {
        assert_eq!(point.len(), self.vars);
        let mut acc = self.field.zero();
        for t in &self.terms {
            let mut v = t.coeff.clone();
            for (x, &e) in point.iter().zip(&t.exps) {
                if e > 0 {
                    v = v.mul(&x.pow(e as i64).expect("nonnegative power"));
                }
            }
            acc = acc.add(&v);
        }
        acc
    }

    /// Pre-embed the coefficients into an extension for fast repeated
    /// evaluation at extension points.
    pub fn embed(&self, ext: &FieldExtension) -> EmbeddedPoly {
        assert!(ext.base() == &self.field, "extension has wrong base");
        EmbeddedPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|t| (t.exps.clone(), ext.embed(&t.coeff)))
                .collect(),
            field: ext.top().clone(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|t| {
                let mut vars_part = Vec::new();
                for (i, &e) in t.exps.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => vars_part.push(var_name(i)),
                        e => vars_part.push(format!("{}^{e}", var_name(i))),
                    }
                }
                let vp = vars_part.join("*");
                if vp.is_empty() {
                    format!("{}", t.coeff)
                } else if t.coeff.is_one() {
                    vp
                } else {
                    format!("({})*{vp}", t.coeff)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A polynomial with coefficients already pushed into an extension field.
pub struct EmbeddedPoly {
    field: FqField,
    vars: usize,
    terms: Vec<(Vec<u32>, FqElem)>,
}

impl EmbeddedPoly {
    pub fn eval(&self, point: &[FqElem]) -> FqElem {
        assert_eq!(point.len(), self.vars);
        let mut acc = self.field.zero();
        for (exps, coeff) in &self.terms {
            let mut v = coeff.clone();
            for (x, &e) in point.iter().zip(exps) {
                if e > 0 {
                    v = v.mul(&x.pow(e as i64).expect("nonnegative power"));
                }
            }
            acc = acc.add(&v);
        }
        acc
    }

    pub fn is_zero_at(&self, point: &[FqElem]) -> bool {
        self.eval(point).is_zero()
    }
}

/// Dense univariate arithmetic over F_q, used for irreducible-polynomial
/// scans when building degree-d points.
pub(crate) fn univ_rem(a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
    // b monic
    let db = b.len() - 1;
    let mut r: Vec<FqElem> = a.to_vec();
    while r.len() > db {
        let lead = r.last().unwrap().clone();
        if !lead.is_zero() {
            let shift = r.len() - 1 - db;
            for i in 0..=db {
                r[shift + i] = r[shift + i].sub(&lead.mul(&b[i]));
            }
        }
        r.pop();
        while r.len() > 1 && r.last().unwrap().is_zero() {
            r.pop();
        }
    }
    r
}

pub(crate) fn univ_is_irreducible(poly: &[FqElem], field: &FqField) -> bool {
    let deg = poly.len() - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = (field.size() as u128).pow(d as u32);
        for idx in 0..count {
            let mut div: Vec<FqElem> = Vec::with_capacity(d + 1);
            let mut k = idx;
            for _ in 0..d {
                div.push(field.element_from_index((k % field.size() as u128) as u64));
                k /= field.size() as u128;
            }
            div.push(field.one());
            let r = univ_rem(poly, &div);
            if r.iter().all(|c| c.is_zero()) {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible of degree d over F_q with the smallest coefficient
/// encoding; deterministic.
pub fn smallest_irreducible(field: &FqField, d: usize) -> Result<Vec<FqElem>> {
    assert!(d >= 1);
    let total = (field.size() as u128)
        .checked_pow(d as u32)
        .ok_or(Error::SizeOverflow)?;
    for idx in 0..total {
        let mut cand: Vec<FqElem> = Vec::with_capacity(d + 1);
        let mut k = idx;
        for _ in 0..d {
            cand.push(field.element_from_index((k % field.size() as u128) as u64));
            k /= field.size() as u128;
        }
        cand.push(field.one());
        if univ_is_irreducible(&cand, field) {
            return Ok(cand);
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}
