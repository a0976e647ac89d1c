//! Rational zeta reconstruction from integer point counts, in exact
//! big-rational arithmetic.
//!
//! Given N_1..N_K, the series Z with T·Z′/Z = Σ N_n Tⁿ and Z(0) = 1 is
//! computed by the coefficient recursion, and a rational function P/Q with
//! bounded degrees is recovered by solving the Padé linear system exactly.

use crate::error::{Error, Result};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;

type Q = BigRational;

fn q_from(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// z_0..z_K of the zeta series from the counts, via k·z_k = Σ N_j z_{k−j}.
pub fn zeta_series_rational(counts: &[u64], upto: usize) -> Vec<Q> {
    assert!(counts.len() >= upto, "not enough counts");
    let mut z = vec![Q::zero(); upto + 1];
    z[0] = Q::one();
    for k in 1..=upto {
        let mut acc = Q::zero();
        for j in 1..=k {
            acc += q_from(counts[j - 1] as i64) * &z[k - j];
        }
        z[k] = acc / q_from(k as i64);
    }
    z
}

/// A rational function in T with big-rational coefficients, gcd-reduced,
/// denominator constant term 1.
#[derive(Clone, PartialEq)]
pub struct RationalFunction {
    num: Vec<Q>,
    den: Vec<Q>,
}

fn poly_trim(v: &mut Vec<Q>) {
    while v.len() > 1 && v.last().unwrap().is_zero() {
        v.pop();
    }
}

fn poly_rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let c = r.last().unwrap() / lead;
        let shift = r.len() - 1 - db;
        for i in 0..=db {
            let t = &c * &b[i];
            r[shift + i] -= t;
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

fn poly_is_zero(a: &[Q]) -> bool {
    a.iter().all(|c| c.is_zero())
}

fn poly_monic(a: &[Q]) -> Vec<Q> {
    let lead = a.last().unwrap();
    a.iter().map(|c| c / lead).collect()
}

fn poly_gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !poly_is_zero(&y) {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    if poly_is_zero(&x) {
        vec![Q::one()]
    } else {
        poly_monic(&x)
    }
}

fn poly_div_exact(a: &[Q], b: &[Q]) -> Vec<Q> {
    // a = q·b exactly
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    let mut q = vec![Q::zero(); r.len().saturating_sub(db)];
    while r.len() > db || (r.len() == db + 1) {
        if r.len() < db + 1 || poly_is_zero(&r) {
            break;
        }
        let c = r.last().unwrap() / lead;
        let shift = r.len() - 1 - db;
        q[shift] = c.clone();
        for i in 0..=db {
            let t = &c * &b[i];
            r[shift + i] -= t;
        }
        r.pop();
        poly_trim(&mut r);
        if poly_is_zero(&r) {
            break;
        }
    }
    assert!(poly_is_zero(&r), "division was not exact");
    poly_trim(&mut q);
    q
}

/// Truncated series inverse of a polynomial with unit constant term.
fn series_inverse(p: &[Q], upto: usize) -> Vec<Q> {
    assert!(!p[0].is_zero());
    let c0inv = Q::one() / &p[0];
    let mut g = vec![Q::zero(); upto + 1];
    g[0] = c0inv.clone();
    for k in 1..=upto {
        let mut acc = Q::zero();
        for i in 1..=k.min(p.len() - 1) {
            acc += &p[i] * &g[k - i];
        }
        g[k] = -&c0inv * acc;
    }
    g
}

impl RationalFunction {
    fn new_reduced(num: Vec<Q>, den: Vec<Q>) -> RationalFunction {
        let g = poly_gcd(&num, &den);
        let mut num = poly_div_exact(&num, &g);
        let mut den = poly_div_exact(&den, &g);
        // normalize: den(0) = 1
        let c = den[0].clone();
        assert!(!c.is_zero(), "denominator vanishes at 0");
        for v in num.iter_mut() {
            *v /= &c;
        }
        for v in den.iter_mut() {
            *v /= &c;
        }
        RationalFunction { num, den }
    }

    pub fn numerator(&self) -> &[Q] {
        &self.num
    }

    pub fn denominator(&self) -> &[Q] {
        &self.den
    }

    /// Series expansion to T^upto.
    pub fn expand(&self, upto: usize) -> Vec<Q> {
        let deninv = series_inverse(&self.den, upto);
        let mut out = vec![Q::zero(); upto + 1];
        for (i, a) in self.num.iter().enumerate() {
            if i > upto || a.is_zero() {
                continue;
            }
            for k in 0..=(upto - i) {
                let t = a * &deninv[k];
                out[i + k] += t;
            }
        }
        out
    }

    /// Coefficients of T·Z′/Z up to T^upto (power sums / point counts).
    pub fn power_sums(&self, upto: usize) -> Vec<Q> {
        let z = self.expand(upto);
        let zinv = series_inverse(&z, upto);
        let mut out = vec![Q::zero(); upto + 1];
        // T·Z' has coefficient k z_k at T^k
        for n in 1..=upto {
            let mut acc = Q::zero();
            for k in 1..=n {
                acc += q_from(k as i64) * &z[k] * &zinv[n - k];
            }
            out[n] = acc;
        }
        out
    }

    /// Integer coefficient vectors when all coefficients are integral.
    pub fn as_integer_coeffs(&self) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
        let conv = |v: &[Q]| -> Option<Vec<BigInt>> {
            v.iter()
                .map(|c| {
                    if c.denom().is_one() {
                        Some(c.numer().clone())
                    } else {
                        None
                    }
                })
                .collect()
        };
        Some((conv(&self.num)?, conv(&self.den)?))
    }
}

fn fmt_poly(v: &[Q], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (sign, mag) = if c.is_negative() {
            (" - ", -c)
        } else {
            (" + ", c.clone())
        };
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
        } else {
            write!(f, "{sign}")?;
        }
        let show_coeff = !mag.is_one() || i == 0;
        if show_coeff {
            write!(f, "{mag}")?;
        }
        match i {
            0 => {}
            1 => write!(f, "{}T", if show_coeff { "*" } else { "" })?,
            i => write!(f, "{}T^{i}", if show_coeff { "*" } else { "" })?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        fmt_poly(&self.num, f)?;
        write!(f, ") / (")?;
        fmt_poly(&self.den, f)?;
        write!(f, ")")
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Row-reduce an augmented system and return (particular solution with free
/// variables set to 0, nullspace basis). None when inconsistent.
fn solve_affine(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<(Vec<Q>, Vec<Vec<Q>>)> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivot_col_of_row = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let piv = (r..rows).find(|&i| !a[i][c].is_zero());
        let Some(p) = piv else { continue };
        a.swap(r, p);
        b.swap(r, p);
        let inv = Q::one() / &a[r][c];
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        b[r] *= &inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
                let t = &f * &b[r];
                b[i] -= t;
            }
        }
        pivot_col_of_row.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    // inconsistency: zero row with nonzero rhs
    for i in r..rows {
        if !b[i].is_zero() {
            return None;
        }
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
    let is_pivot = |c: usize| pivot_cols.contains(&c);
    let mut sol = vec![Q::zero(); cols];
    for (row, &pc) in pivot_col_of_row.iter().enumerate() {
        sol[pc] = b[row].clone();
    }
    let mut nullspace = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot(c)) {
        let mut v = vec![Q::zero(); cols];
        v[free] = Q::one();
        for (row, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = -a[row][free].clone();
        }
        nullspace.push(v);
    }
    Some((sol, nullspace))
}

/// Recover the unique rational function Z with Z(0) = 1, deg(num) ≤ a,
/// deg(den) ≤ b, and T·Z′/Z ≡ Σ N_n Tⁿ mod T^{K+1}. Consistency is
/// re-verified by re-expanding the result.
pub fn zeta_reconstruct(
    counts: &[u64],
    num_deg_bound: usize,
    den_deg_bound: usize,
) -> Result<RationalFunction> {
    let k = counts.len();
    let (a, b) = (num_deg_bound, den_deg_bound);
    if k < a + b + 1 {
        return Err(Error::Invalid(format!(
            "need at least {} counts for degree bounds ({a}, {b}), got {k}",
            a + b + 1
        )));
    }
    let z = zeta_series_rational(counts, k);
    // unknowns q_1..q_b; rows n = a+1..K: Σ_i q_i z_{n−i} = −z_n
    let mut mat = Vec::new();
    let mut rhs = Vec::new();
    for n in a + 1..=k {
        let row: Vec<Q> = (1..=b)
            .map(|i| if i <= n { z[n - i].clone() } else { Q::zero() })
            .collect();
        mat.push(row);
        rhs.push(-&z[n]);
    }
    let (sol, nullspace) = solve_affine(mat, rhs).ok_or(Error::NoSolutionWithinBounds)?;

    let build = |qs: &[Q]| -> RationalFunction {
        let mut den = vec![Q::one()];
        den.extend(qs.iter().cloned());
        poly_trim(&mut den);
        let mut num = vec![Q::one()];
        for n in 1..=a {
            let mut v = z[n].clone();
            for i in 1..=b.min(n) {
                v += &qs[i - 1] * &z[n - i];
            }
            num.push(v);
        }
        poly_trim(&mut num);
        RationalFunction::new_reduced(num, den)
    };

    let candidate = build(&sol);
    if !nullspace.is_empty() {
        // all solutions must reduce to the same function, else the bounds
        // are genuinely too loose
        let alt: Vec<Q> = sol.iter().zip(&nullspace[0]).map(|(s, n)| s + n).collect();
        if build(&alt) != candidate {
            return Err(Error::AmbiguousSolution);
        }
    }
    // re-expand and verify the power sums reproduce the counts
    let ps = candidate.power_sums(k);
    for n in 1..=k {
        if ps[n] != q_from(counts[n - 1] as i64) {
            return Err(Error::NoSolutionWithinBounds);
        }
    }
    Ok(candidate)
}
