//! Square and rectangular matrices over any [`SemilocalRing`].

use crate::error::{Error, Result};
use crate::ring::SemilocalRing;
use std::fmt;

/// A dense matrix with entries in a semilocal ring R.
#[derive(Clone)]
pub struct Mat<R: SemilocalRing> {
    ring: R,
    rows: usize,
    cols: usize,
    data: Vec<R::Elem>,
}

impl<R: SemilocalRing> PartialEq for Mat<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl<R: SemilocalRing> fmt::Debug for Mat<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:?}", self.at(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<R: SemilocalRing> Mat<R> {
    pub fn from_fn(
        ring: &R,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> R::Elem,
    ) -> Mat<R> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat {
            ring: ring.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(ring: &R, rows: Vec<Vec<R::Elem>>) -> Mat<R> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            ring: ring.clone(),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn zero(ring: &R, rows: usize, cols: usize) -> Mat<R> {
        Mat::from_fn(ring, rows, cols, |_, _| ring.zero())
    }

    pub fn identity(ring: &R, n: usize) -> Mat<R> {
        Mat::from_fn(
            ring,
            n,
            n,
            |i, j| if i == j { ring.one() } else { ring.zero() },
        )
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &R::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<R::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn add(&self, other: &Mat<R>) -> Result<Mat<R>> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        Ok(Mat::from_fn(&self.ring, self.rows, self.cols, |i, j| {
            self.ring.add(self.at(i, j), other.at(i, j))
        }))
    }

    pub fn mul(&self, other: &Mat<R>) -> Result<Mat<R>> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        assert_eq!(self.cols, other.rows, "shape mismatch");
        Ok(Mat::from_fn(&self.ring, self.rows, other.cols, |i, j| {
            let mut acc = self.ring.zero();
            for k in 0..self.cols {
                acc = self
                    .ring
                    .add(&acc, &self.ring.mul(self.at(i, k), other.at(k, j)));
            }
            acc
        }))
    }

    pub fn scale(&self, c: &R::Elem) -> Mat<R> {
        Mat::from_fn(&self.ring, self.rows, self.cols, |i, j| {
            self.ring.mul(c, self.at(i, j))
        })
    }

    pub fn neg(&self) -> Mat<R> {
        Mat::from_fn(&self.ring, self.rows, self.cols, |i, j| {
            self.ring.neg(self.at(i, j))
        })
    }

    pub fn trace(&self) -> R::Elem {
        assert!(self.is_square());
        let mut acc = self.ring.zero();
        for i in 0..self.rows {
            acc = self.ring.add(&acc, self.at(i, i));
        }
        acc
    }

    pub fn pow(&self, mut k: u64) -> Mat<R> {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Mat::identity(&self.ring, self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            base = base.mul(&base).expect("same ring");
            k >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.ring.is_one(self.at(i, j))
                    } else {
                        self.ring.is_zero(self.at(i, j))
                    }
                })
            })
    }

    /// Entrywise map into another ring.
    pub fn map<S: SemilocalRing>(&self, ring: &S, f: impl Fn(&R::Elem) -> S::Elem) -> Mat<S> {
        Mat::from_fn(ring, self.rows, self.cols, |i, j| f(self.at(i, j)))
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &Mat<R>) -> Result<Mat<R>> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let (r1, c1) = (self.rows, self.cols);
        Ok(Mat::from_fn(
            &self.ring,
            r1 + other.rows,
            c1 + other.cols,
            |i, j| {
                if i < r1 && j < c1 {
                    self.at(i, j).clone()
                } else if i >= r1 && j >= c1 {
                    other.at(i - r1, j - c1).clone()
                } else {
                    self.ring.zero()
                }
            },
        ))
    }

    /// Exact invertibility via the ring's decision procedure.
    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.ring.matrix_invertible(&self.to_rows())
    }
}
