//! Dense exact linear algebra over the rational-function field.
//!
//! Rank is computed fraction-free: rows are cleared to primitive integer
//! polynomials and updated by cross-multiplication, stripping content after
//! every step. Nullspace and inverse use field elimination on canonical
//! scalars. Pivots are chosen by least total polynomial size to control
//! expression swell.

use crate::error::Error;
use crate::scalars::{Polynomial, Scalar};
use crate::Result;

/// A rectangular matrix of scalars, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScalarMat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ScalarMat {
    pub fn zero(rows: usize, cols: usize) -> ScalarMat {
        ScalarMat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> ScalarMat {
        let mut m = ScalarMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> ScalarMat {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ScalarMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &ScalarMat) -> ScalarMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = ScalarMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Scalar::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(&v[k]));
                }
                acc
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Rank over the rational-function field, by fraction-free elimination.
    pub fn rank(&self) -> usize {
        // clearing denominators rowwise and stripping content leaves rank unchanged
        let mut rows: Vec<Vec<Polynomial>> = (0..self.rows)
            .filter_map(|i| primitive_row(self.row(i)))
            .collect();
        let cols = self.cols;
        let mut rank = 0;
        for c in 0..cols {
            if rank >= rows.len() {
                break;
            }
            let pivot = (rank..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by_key(|&i| rows[i][c].size());
            let p = match pivot {
                None => continue,
                Some(p) => p,
            };
            rows.swap(rank, p);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let prow = &head[rank];
            for row in tail.iter_mut() {
                if row[c].is_zero() {
                    continue;
                }
                let a = prow[c].clone();
                let b = row[c].clone();
                for j in 0..cols {
                    row[j] = a.mul(&row[j]).sub(&b.mul(&prow[j]));
                }
                strip_content(row);
            }
            rank += 1;
        }
        rank
    }

    /// A reduced basis of the row space.
    pub fn row_basis(&self) -> Vec<Vec<Scalar>> {
        let mut rows: Vec<Vec<Scalar>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let pivots = rref(&mut rows, self.cols);
        rows.truncate(pivots.len());
        rows
    }

    /// Basis of the right nullspace `{x : Mx = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut rows: Vec<Vec<Scalar>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let pivots = rref(&mut rows, self.cols);
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut x = vec![Scalar::zero(); self.cols];
            x[free] = Scalar::one();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = rows[r][free].neg();
            }
            basis.push(x);
        }
        basis
    }

    /// Inverse over the field; fails when the matrix is singular
    /// (as a matrix of rational functions).
    pub fn inverse(&self) -> Result<ScalarMat> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut rows: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| {
                    if i == j {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                }));
                row
            })
            .collect();
        let pivots = rref(&mut rows, n);
        if pivots.len() < n {
            return Err(Error::NotInvertible);
        }
        let mut out = ScalarMat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, rows[i][n + j].clone());
            }
        }
        Ok(out)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

/// Reduced row echelon form on the leading `lead_cols` columns (any extra
/// columns are carried along, which is how `inverse` augments). Returns the
/// pivot columns in row order.
fn rref(rows: &mut [Vec<Scalar>], lead_cols: usize) -> Vec<usize> {
    let nrows = rows.len();
    let width = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..lead_cols {
        if r >= nrows {
            break;
        }
        let pivot = (r..nrows)
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| rows[i][c].size());
        let p = match pivot {
            None => continue,
            Some(p) => p,
        };
        rows.swap(r, p);
        let inv = rows[r][c].inverse().expect("nonzero pivot");
        for j in 0..width {
            rows[r][j] = rows[r][j].mul(&inv);
        }
        for i in 0..nrows {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let factor = rows[i][c].clone();
            for j in 0..width {
                let delta = factor.mul(&rows[r][j]);
                rows[i][j] = rows[i][j].sub(&delta);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Scale a scalar row to a primitive integer-polynomial row.
/// Returns `None` for an all-zero row.
fn primitive_row(row: &[Scalar]) -> Option<Vec<Polynomial>> {
    if row.iter().all(|s| s.is_zero()) {
        return None;
    }
    // multiply through by every other entry's denominator
    let mut polys: Vec<Polynomial> = row.iter().map(|s| s.numer().clone()).collect();
    for (j, s) in row.iter().enumerate() {
        if s.denom().is_one() {
            continue;
        }
        for (k, p) in polys.iter_mut().enumerate() {
            if k != j {
                *p = p.mul(s.denom());
            }
        }
    }
    strip_content(&mut polys);
    Some(polys)
}

fn strip_content(row: &mut [Polynomial]) {
    let mut g = Polynomial::zero();
    for p in row.iter() {
        if !p.is_zero() {
            g = crate::scalars::poly_gcd(&g, p);
            if g.is_one() {
                break;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for p in row.iter_mut() {
        if !p.is_zero() {
            *p = p.div_exact(&g).expect("content divides row");
        }
    }
}
