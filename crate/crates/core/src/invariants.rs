//! Semicontinuous invariants used to bound orbit closures: powers of the
//! algebra, annihilator, derivation algebra and orbit dimension.
//!
//! Families are handled generically: ranks are taken over the field of
//! rational functions in the parameters, which equals the rank at generic
//! parameter values.

use crate::algebra::{unit_vector, Algebra, SquareMatrix};
use crate::linalg::ScalarMat;
use crate::scalars::Scalar;

/// Basis of the solution space of the derivation equations.
#[derive(Clone, Debug)]
pub struct DerivationSpace {
    pub dim: usize,
    pub basis: Vec<SquareMatrix>,
}

/// Dimensions of the descending power chain `A ⊇ A² ⊇ …`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PowerSeries {
    /// `dims[k]` is the dimension of the (k+1)-st power; the list stops at
    /// the first repeated value or at zero.
    pub dims: Vec<usize>,
    /// The chain reached zero.
    pub nilpotent: bool,
    /// `A·A² = A²·A = 0`.
    pub two_step: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ProfileMode {
    Paper,
    Extended,
}

/// Invariants recorded on degeneration-graph nodes and used by the
/// necessary-condition tests.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvariantProfile {
    pub square_dim: usize,
    pub der_dim: usize,
    pub orbit_dim: usize,
    pub extended: Option<ExtendedProfile>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtendedProfile {
    pub power_dims: Vec<usize>,
    pub nilpotent: bool,
    pub two_step: bool,
    pub annihilator_dim: usize,
}

impl InvariantProfile {
    /// `(label, value, monotonicity along a degeneration source -> target)`.
    pub fn entries(&self) -> Vec<(String, String, &'static str)> {
        let mut out = vec![
            (
                "dim A^2".into(),
                self.square_dim.to_string(),
                "non-increasing",
            ),
            ("dim Der".into(), self.der_dim.to_string(), "non-decreasing"),
            (
                "orbit dim".into(),
                self.orbit_dim.to_string(),
                "strictly decreasing when proper",
            ),
        ];
        if let Some(ext) = &self.extended {
            out.push((
                "power dims".into(),
                format!("{:?}", ext.power_dims),
                "non-increasing levelwise",
            ));
            out.push((
                "nilpotent".into(),
                format!("{} (2-step: {})", ext.nilpotent, ext.two_step),
                "",
            ));
            out.push((
                "dim Ann".into(),
                ext.annihilator_dim.to_string(),
                "non-decreasing",
            ));
        }
        out
    }
}

/// Rank of the n^2 x n matrix of all basis products: the dimension of `A²`.
pub fn square_dimension(a: &Algebra) -> usize {
    let n = a.dim();
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            rows.push(a.product_basis(i, j));
        }
    }
    ScalarMat::from_rows(rows).rank()
}

fn span_products(a: &Algebra, left: &[Vec<Scalar>], right: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut rows = Vec::new();
    for u in left {
        for v in right {
            rows.push(a.product(u, v).expect("dimensions agree"));
        }
    }
    rows
}

/// The chain `A^(k+1) = Σ_{i+j=k+1} A^i A^j` until it stabilizes, with the
/// nilpotency verdict and the 2-step flag.
pub fn power_series_dims(a: &Algebra) -> PowerSeries {
    let n = a.dim();
    let full: Vec<Vec<Scalar>> = (0..n).map(|i| unit_vector(n, i)).collect();
    // bases[k] is a basis of the (k+1)-st power
    let mut bases: Vec<Vec<Vec<Scalar>>> = vec![full];
    let mut dims = vec![n];
    loop {
        let next_power = bases.len() + 1; // computing A^next_power
        let mut rows = Vec::new();
        for i in 1..next_power {
            let j = next_power - i;
            rows.extend(span_products(a, &bases[i - 1], &bases[j - 1]));
        }
        let basis = if rows.is_empty() {
            Vec::new()
        } else {
            ScalarMat::from_rows(rows).row_basis()
        };
        let dim = basis.len();
        let stop = dim == 0 || dim == *dims.last().unwrap();
        dims.push(dim);
        bases.push(basis);
        if stop {
            break;
        }
    }
    let nilpotent = *dims.last().unwrap() == 0;
    let square = &bases[1];
    let two_step = span_products(a, &bases[0], square)
        .iter()
        .chain(span_products(a, square, &bases[0]).iter())
        .all(|row| row.iter().all(|c| c.is_zero()));
    PowerSeries {
        dims,
        nilpotent,
        two_step,
    }
}

/// Dimension of `{x : xA = Ax = 0}`.
pub fn annihilator_dimension(a: &Algebra) -> usize {
    let n = a.dim();
    let mut rows = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for k in 0..n {
            // (x e_j)_k = sum_p x_p c_{p,j}^k
            rows.push((0..n).map(|p| a.c(p, j, k).clone()).collect::<Vec<_>>());
            // (e_j x)_k = sum_p x_p c_{j,p}^k
            rows.push((0..n).map(|p| a.c(j, p, k).clone()).collect::<Vec<_>>());
        }
    }
    ScalarMat::from_rows(rows).nullspace().len()
}

/// Solve the derivation conditions `D(e_i e_j) = D(e_i) e_j + e_i D(e_j)`:
/// n^3 scalar equations in the n^2 entries of `D`. Unknown `(p, q)` is the
/// coefficient of `e_p` in `D(e_q)`.
pub fn derivation_algebra(a: &Algebra) -> DerivationSpace {
    let n = a.dim();
    let idx = |p: usize, q: usize| p * n + q;
    let mut rows = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut row = vec![Scalar::zero(); n * n];
                // D(e_i e_j)_k contributes c_{i,j}^m d_{k,m}
                for m in 0..n {
                    let c = a.c(i, j, m);
                    if !c.is_zero() {
                        row[idx(k, m)] = row[idx(k, m)].add(c);
                    }
                }
                // -(D(e_i) e_j)_k contributes -c_{p,j}^k d_{p,i}
                for p in 0..n {
                    let c = a.c(p, j, k);
                    if !c.is_zero() {
                        row[idx(p, i)] = row[idx(p, i)].sub(c);
                    }
                    // -(e_i D(e_j))_k contributes -c_{i,p}^k d_{p,j}
                    let c2 = a.c(i, p, k);
                    if !c2.is_zero() {
                        row[idx(p, j)] = row[idx(p, j)].sub(c2);
                    }
                }
                rows.push(row);
            }
        }
    }
    let nullspace = ScalarMat::from_rows(rows).nullspace();
    let basis = nullspace
        .into_iter()
        .map(|x| {
            let mut d = SquareMatrix::zero(n);
            for p in 0..n {
                for q in 0..n {
                    d.set(p, q, x[idx(p, q)].clone());
                }
            }
            d
        })
        .collect::<Vec<_>>();
    DerivationSpace {
        dim: basis.len(),
        basis,
    }
}

/// `n^2 - dim Der(A)`: the dimension of the orbit closure.
pub fn orbit_dimension(a: &Algebra) -> usize {
    a.dim() * a.dim() - derivation_algebra(a).dim
}

pub fn invariant_profile(a: &Algebra, mode: ProfileMode) -> InvariantProfile {
    let square_dim = square_dimension(a);
    let der_dim = derivation_algebra(a).dim;
    let orbit_dim = a.dim() * a.dim() - der_dim;
    let extended = match mode {
        ProfileMode::Paper => None,
        ProfileMode::Extended => {
            let ps = power_series_dims(a);
            Some(ExtendedProfile {
                power_dims: ps.dims,
                nilpotent: ps.nilpotent,
                two_step: ps.two_step,
                annihilator_dim: annihilator_dimension(a),
            })
        }
    };
    InvariantProfile {
        square_dim,
        der_dim,
        orbit_dim,
        extended,
    }
}
