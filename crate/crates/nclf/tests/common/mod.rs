//! Shared oracles and generators for the integration suites. Everything
//! here stays independent of the implementation paths it is used to check:
//! determinants by cofactor expansion, random matrices built from explicit
//! elementary moves, closed-form series by direct multiplication.

use nclf::k1::{apply_move, Move};
use nclf::matrix::Mat;
use nclf::ring::{Ring, RingElem};
use nclf::series::{SeriesRing, TruncSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rand_elem(ring: &Ring, rng: &mut ChaCha8Rng) -> RingElem {
    let idx = rng.gen_range(0..ring.size());
    ring.element_from_index(idx)
}

pub fn rand_unit(ring: &Ring, rng: &mut ChaCha8Rng) -> RingElem {
    loop {
        let e = rand_elem(ring, rng);
        if ring.is_unit(&e) {
            return e;
        }
    }
}

/// Random invertible matrix: a unit diagonal scrambled by elementary moves.
pub fn rand_invertible(ring: &Ring, n: usize, rng: &mut ChaCha8Rng) -> Mat<Ring> {
    let mut m = Mat::from_fn(ring, n, n, |i, j| {
        if i == j {
            rand_unit(ring, rng)
        } else {
            ring.zero()
        }
    });
    if n > 1 {
        for _ in 0..3 * n {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n);
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

/// Determinant by cofactor expansion (commutative rings; exponential but
/// exact — the independent oracle).
pub fn naive_det(ring: &Ring, m: &Mat<Ring>) -> RingElem {
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

/// Matrix inverse over a commutative ring by the adjugate formula.
pub fn adjugate_inverse(ring: &Ring, m: &Mat<Ring>) -> Mat<Ring> {
    let n = m.rows();
    let det_inv = ring.inverse(&naive_det(ring, m)).expect("matrix is invertible");
    Mat::from_fn(ring, n, n, |i, j| {
        let minor = Mat::from_fn(ring, n - 1, n - 1, |r, c| {
            m.at(if r < j { r } else { r + 1 }, if c < i { c } else { c + 1 }).clone()
        });
        let mut v = ring.mul(&naive_det(ring, &minor), &det_inv);
        if (i + j) % 2 == 1 {
            v = ring.neg(&v);
        }
        v
    })
}

/// Π (1 − c_i·T)^{±1} expanded by direct series arithmetic.
pub fn closed_form(ring: &Ring, m: usize, factors: &[(u64, i32)]) -> TruncSeries {
    let sring = SeriesRing::new(ring, m);
    let mut acc = sring.one();
    for &(c, e) in factors {
        let f = sring.one_minus(&ring.from_u64(c), 1);
        let f = if e < 0 { f.inverse().unwrap() } else { f };
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&f).unwrap();
        }
    }
    acc
}

pub fn series_u64(s: &TruncSeries) -> Vec<u64> {
    s.coeffs().iter().map(|c| c.as_zmod().unwrap()).collect()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Location of the shipped example gallery.
pub fn gallery_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../nclf-cli/gallery")
}
