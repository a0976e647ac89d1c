//! Exact linear algebra over Z/m for composite m.
//!
//! Pivots must be units mod m; when no entry of a column is a unit, one is
//! manufactured by row combinations that strictly decrease gcd with m
//! (stable range 1 guarantees this succeeds exactly when the column is
//! unimodular).

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of a mod m, when gcd(a, m) = 1.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    let mi = m as i128;
    Some(((old_s % mi + mi) % mi) as u64)
}

/// Invert a square matrix over Z/m. Returns None when not invertible.
pub fn invert(m: u64, mat: &[Vec<u64>]) -> Option<Vec<Vec<u64>>> {
    let n = mat.len();
    let mut a: Vec<Vec<u64>> = mat
        .iter()
        .map(|r| r.iter().map(|&v| v % m).collect())
        .collect();
    let mut inv: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect();

    for k in 0..n {
        if !make_unit_pivot(m, &mut a, &mut inv, k) {
            return None;
        }
        let piv_inv = inv_mod(a[k][k], m).expect("pivot is a unit");
        scale_row(m, &mut a[k], piv_inv);
        scale_row(m, &mut inv[k], piv_inv);
        for i in 0..n {
            if i != k && a[i][k] != 0 {
                let f = a[i][k];
                sub_scaled(m, &mut a, i, k, f);
                sub_scaled(m, &mut inv, i, k, f);
            }
        }
    }
    Some(inv)
}

pub fn is_invertible(m: u64, mat: &[Vec<u64>]) -> bool {
    invert(m, mat).is_some()
}

fn scale_row(m: u64, row: &mut [u64], f: u64) {
    for v in row.iter_mut() {
        *v = *v * f % m;
    }
}

/// row_i -= f * row_k
fn sub_scaled(m: u64, rows: &mut [Vec<u64>], i: usize, k: usize, f: u64) {
    let src = rows[k].clone();
    for (v, s) in rows[i].iter_mut().zip(src) {
        *v = (*v + (m - f) * s) % m;
    }
}

/// row_i += t * row_j, applied to both halves of an augmented system
fn add_scaled_pair(m: u64, a: &mut [Vec<u64>], b: &mut [Vec<u64>], i: usize, j: usize, t: u64) {
    let src_a = a[j].clone();
    for (v, s) in a[i].iter_mut().zip(src_a) {
        *v = (*v + t * s) % m;
    }
    let src_b = b[j].clone();
    for (v, s) in b[i].iter_mut().zip(src_b) {
        *v = (*v + t * s) % m;
    }
}

fn make_unit_pivot(m: u64, a: &mut [Vec<u64>], inv: &mut [Vec<u64>], k: usize) -> bool {
    let n = a.len();
    if gcd(a[k][k], m) == 1 {
        return true;
    }
    // direct unit somewhere below: bring it in with a single row addition
    for j in k + 1..n {
        if gcd(a[j][k], m) == 1 {
            let t = (1 + m - a[k][k] % m) % m * inv_mod(a[j][k], m).unwrap() % m;
            add_scaled_pair(m, a, inv, k, j, t);
            debug_assert_eq!(a[k][k], 1);
            return true;
        }
    }
    // gcd-improvement loop against the rows below
    loop {
        let g = gcd(a[k][k], m);
        if g == 1 {
            return true;
        }
        let mut improved = false;
        'search: for j in k + 1..n {
            if a[j][k] == 0 {
                continue;
            }
            for t in 1..m {
                if gcd((a[k][k] + t * a[j][k]) % m, m) < g {
                    add_scaled_pair(m, a, inv, k, j, t);
                    improved = true;
                    break 'search;
                }
            }
        }
        if !improved {
            return false;
        }
    }
}
