//! Structure-constant model of a finite-dimensional algebra and the
//! base-change action of the general linear group.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::linalg::ScalarMat;
use crate::scalars::{Scalar, Sym};
use crate::Result;

/// An n-dimensional algebra given by its n^3 structure constants
/// `c_{i,j}^k`, entries of the multiplication table
/// `e_i e_j = sum_k c_{i,j}^k e_k`.
///
/// Constants may depend on the declared parameters but never on `t`;
/// the deformation variable is reserved for certificates.
#[derive(Clone, Debug)]
pub struct Algebra {
    name: String,
    dim: usize,
    params: Vec<Sym>,
    constants: Vec<Scalar>,
}

impl Algebra {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        params: Vec<Sym>,
        constants: Vec<Scalar>,
    ) -> Result<Algebra> {
        let name = name.into();
        if dim == 0 {
            return Err(Error::DimensionMismatch("dim must be at least 1".into()));
        }
        if constants.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} structure constants, got {}",
                dim * dim * dim,
                constants.len()
            )));
        }
        for c in &constants {
            if c.contains_var(Sym::t()) {
                return Err(Error::TReserved);
            }
            for v in c.vars() {
                if !params.contains(&v) {
                    return Err(Error::DimensionMismatch(format!(
                        "constant uses undeclared parameter {}",
                        v
                    )));
                }
            }
        }
        Ok(Algebra {
            name,
            dim,
            params,
            constants,
        })
    }

    /// The algebra with all products zero.
    pub fn zero_algebra(name: impl Into<String>, dim: usize) -> Algebra {
        Algebra {
            name: name.into(),
            dim,
            params: Vec::new(),
            constants: vec![Scalar::zero(); dim * dim * dim],
        }
    }

    pub fn builder(name: impl Into<String>, dim: usize, params: Vec<Sym>) -> AlgebraBuilder {
        AlgebraBuilder {
            name: name.into(),
            dim,
            params,
            constants: vec![Scalar::zero(); dim * dim * dim],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Algebra {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &[Sym] {
        &self.params
    }

    pub fn is_family(&self) -> bool {
        !self.params.is_empty()
    }

    /// Structure constant `c_{i,j}^k`, all indices 0-based.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.constants[(i * self.dim + j) * self.dim + k]
    }

    pub fn constants(&self) -> &[Scalar] {
        &self.constants
    }

    /// The coordinate row of `e_i e_j`.
    pub fn product_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        (0..self.dim).map(|k| self.c(i, j, k).clone()).collect()
    }

    /// Bilinear product of two coordinate vectors.
    pub fn product(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "product expects vectors of length {}",
                self.dim
            )));
        }
        Ok(bilinear(self.dim, &self.constants, x, y))
    }

    /// Left and right multiplication operators of `a`:
    /// `L x = a x`, `R x = x a`, as matrices acting on coordinates.
    pub fn mul_operators(&self, a: &[Scalar]) -> Result<(SquareMatrix, SquareMatrix)> {
        if a.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "operator vector must have length {}",
                self.dim
            )));
        }
        let n = self.dim;
        let mut l = ScalarMat::zero(n, n);
        let mut r = ScalarMat::zero(n, n);
        for j in 0..n {
            for k in 0..n {
                // L column j = a * e_j, R column j = e_j * a
                let mut lk = Scalar::zero();
                let mut rk = Scalar::zero();
                for p in 0..n {
                    if !a[p].is_zero() {
                        lk = lk.add(&a[p].mul(self.c(p, j, k)));
                        rk = rk.add(&a[p].mul(self.c(j, p, k)));
                    }
                }
                l.set(k, j, lk);
                r.set(k, j, rk);
            }
        }
        Ok((SquareMatrix::from_mat(l), SquareMatrix::from_mat(r)))
    }

    /// Structure constants of `g * mu` where
    /// `(g * mu)(x, y) = g mu(g^{-1} x, g^{-1} y)`. Same dim and params.
    pub fn base_change(&self, g: &SquareMatrix) -> Result<Algebra> {
        if g.dim() != self.dim {
            return Err(Error::DimensionMismatch(
                "base change matrix has wrong dimension".into(),
            ));
        }
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                if g.get(i, j).contains_var(Sym::t()) {
                    return Err(Error::TReserved);
                }
            }
        }
        let constants = base_change_tensor(self.dim, &self.constants, g.mat())?;
        Algebra::new(self.name.clone(), self.dim, self.params.clone(), constants)
    }

    /// Specialize family parameters. The parameter list shrinks by the
    /// assigned names (and grows by any parameter the values introduce).
    pub fn substitute_params(&self, assignment: &BTreeMap<Sym, Scalar>) -> Result<Algebra> {
        for (k, v) in assignment {
            if k.is_t() || v.contains_var(Sym::t()) {
                return Err(Error::TReserved);
            }
        }
        let constants = self
            .constants
            .iter()
            .map(|c| c.substitute(assignment))
            .collect::<Result<Vec<_>>>()?;
        let mut params: Vec<Sym> = self
            .params
            .iter()
            .copied()
            .filter(|p| !assignment.contains_key(p))
            .collect();
        for v in assignment.values() {
            for s in v.vars() {
                if !params.contains(&s) {
                    params.push(s);
                }
            }
        }
        params.sort();
        Algebra::new(self.name.clone(), self.dim, params, constants)
    }

    /// Entrywise equality of canonical structure constants.
    pub fn structurally_equal(&self, other: &Algebra) -> bool {
        self.dim == other.dim && self.constants == other.constants
    }

    /// Nonzero products as `(i, j, coordinate row)`, 0-based, row-major order.
    pub fn nonzero_products(&self) -> Vec<(usize, usize, Vec<Scalar>)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let row = self.product_basis(i, j);
                if row.iter().any(|c| !c.is_zero()) {
                    out.push((i, j, row));
                }
            }
        }
        out
    }
}

/// Incremental construction of a multiplication table.
pub struct AlgebraBuilder {
    name: String,
    dim: usize,
    params: Vec<Sym>,
    constants: Vec<Scalar>,
}

impl AlgebraBuilder {
    /// Set `c_{i,j}^k`, 0-based.
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Scalar) -> &mut Self {
        assert!(i < self.dim && j < self.dim && k < self.dim, "index out of range");
        self.constants[(i * self.dim + j) * self.dim + k] = value;
        self
    }

    pub fn finish(self) -> Result<Algebra> {
        Algebra::new(self.name, self.dim, self.params, self.constants)
    }
}

/// A square matrix of scalars: group elements, multiplication operators,
/// derivations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SquareMatrix {
    mat: ScalarMat,
}

impl SquareMatrix {
    pub fn zero(n: usize) -> SquareMatrix {
        SquareMatrix {
            mat: ScalarMat::zero(n, n),
        }
    }

    pub fn identity(n: usize) -> SquareMatrix {
        SquareMatrix {
            mat: ScalarMat::identity(n),
        }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<SquareMatrix> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix is not square".into()));
        }
        Ok(SquareMatrix {
            mat: ScalarMat::from_rows(rows),
        })
    }

    pub fn from_mat(mat: ScalarMat) -> SquareMatrix {
        assert_eq!(mat.nrows(), mat.ncols(), "matrix is not square");
        SquareMatrix { mat }
    }

    pub fn scalar_diag(n: usize, v: Scalar) -> SquareMatrix {
        let mut m = ScalarMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, v.clone());
        }
        SquareMatrix { mat: m }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &ScalarMat {
        &self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        self.mat.get(i, j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.mat.set(i, j, v);
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        self.mat.column(j)
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.mat.mul_vec(v)
    }

    pub fn mul(&self, other: &SquareMatrix) -> SquareMatrix {
        SquareMatrix {
            mat: self.mat.mul(&other.mat),
        }
    }

    pub fn add(&self, other: &SquareMatrix) -> SquareMatrix {
        let n = self.dim();
        let mut out = ScalarMat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(i, j).add(other.get(i, j)));
            }
        }
        SquareMatrix { mat: out }
    }

    pub fn sub(&self, other: &SquareMatrix) -> SquareMatrix {
        let n = self.dim();
        let mut out = ScalarMat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(i, j).sub(other.get(i, j)));
            }
        }
        SquareMatrix { mat: out }
    }

    /// `[self, other] = self other - other self`.
    pub fn commutator(&self, other: &SquareMatrix) -> SquareMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn inverse(&self) -> Result<SquareMatrix> {
        Ok(SquareMatrix {
            mat: self.mat.inverse()?,
        })
    }

    pub fn is_invertible(&self) -> bool {
        self.mat.is_invertible()
    }

    pub fn is_zero(&self) -> bool {
        (0..self.dim()).all(|i| (0..self.dim()).all(|j| self.get(i, j).is_zero()))
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim()).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub(crate) fn bilinear(
    dim: usize,
    constants: &[Scalar],
    x: &[Scalar],
    y: &[Scalar],
) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); dim];
    for p in 0..dim {
        if x[p].is_zero() {
            continue;
        }
        for q in 0..dim {
            if y[q].is_zero() {
                continue;
            }
            let xy = x[p].mul(&y[q]);
            for (k, o) in out.iter_mut().enumerate() {
                let c = &constants[(p * dim + q) * dim + k];
                if !c.is_zero() {
                    *o = o.add(&xy.mul(c));
                }
            }
        }
    }
    out
}

/// Structure constants of `g * mu` on a raw tensor. Used both by
/// [`Algebra::base_change`] and by certificate verification, where the
/// matrix may involve `t`.
pub(crate) fn base_change_tensor(
    dim: usize,
    constants: &[Scalar],
    g: &ScalarMat,
) -> Result<Vec<Scalar>> {
    let ginv = g.inverse().map_err(|_| Error::NotInvertible)?;
    let mut out = vec![Scalar::zero(); dim * dim * dim];
    for i in 0..dim {
        let u = ginv.column(i);
        for j in 0..dim {
            let v = ginv.column(j);
            let w = bilinear(dim, constants, &u, &v);
            let res = g.mul_vec(&w);
            for (k, r) in res.into_iter().enumerate() {
                out[(i * dim + j) * dim + k] = r;
            }
        }
    }
    Ok(out)
}

/// Structure constants of `mu` in the basis given by the columns of `basis`:
/// `c'_{i,j} = basis^{-1} mu(basis e_i, basis e_j)`.
pub(crate) fn change_of_basis_tensor(
    dim: usize,
    constants: &[Scalar],
    basis: &ScalarMat,
) -> Result<Vec<Scalar>> {
    let binv = basis.inverse().map_err(|_| Error::NotInvertible)?;
    let mut out = vec![Scalar::zero(); dim * dim * dim];
    for i in 0..dim {
        let u = basis.column(i);
        for j in 0..dim {
            let v = basis.column(j);
            let w = bilinear(dim, constants, &u, &v);
            let res = binv.mul_vec(&w);
            for (k, r) in res.into_iter().enumerate() {
                out[(i * dim + j) * dim + k] = r;
            }
        }
    }
    Ok(out)
}

/// Basis coordinate vector `e_i` (0-based).
pub fn unit_vector(dim: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); dim];
    v[i] = Scalar::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rational;

    // e1 e1 = e2 in dimension 2
    fn a_sq() -> Algebra {
        let mut b = Algebra::builder("Asq", 2, vec![]);
        b.set(0, 0, 1, Scalar::one());
        b.finish().unwrap()
    }

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn product_is_bilinear() {
        let a = a_sq();
        let x = vec![s(3), s(5)];
        let y = vec![s(2), s(7)];
        // (3e1 + 5e2)(2e1 + 7e2) = 6 e1e1 = 6 e2
        assert_eq!(a.product(&x, &y).unwrap(), vec![s(0), s(6)]);
        // zero argument gives zero
        let zero = vec![s(0), s(0)];
        assert_eq!(a.product(&zero, &y).unwrap(), zero);
        // length mismatch
        assert!(a.product(&[s(1)], &y).is_err());
    }

    #[test]
    fn mul_operators_match_products() {
        let a = a_sq();
        let v = vec![s(2), s(3)];
        let (l, r) = a.mul_operators(&v).unwrap();
        for j in 0..2 {
            let ej = unit_vector(2, j);
            assert_eq!(l.column(j), a.product(&v, &ej).unwrap());
            assert_eq!(r.column(j), a.product(&ej, &v).unwrap());
        }
        // zero algebra has zero operators
        let z = Algebra::zero_algebra("Z", 3);
        let (l, r) = z.mul_operators(&unit_vector(3, 0)).unwrap();
        assert!(l.is_zero() && r.is_zero());
    }

    #[test]
    fn base_change_identity_fixes_constants() {
        let a = a_sq();
        let id = SquareMatrix::identity(2);
        assert!(a.base_change(&id).unwrap().structurally_equal(&a));
    }

    #[test]
    fn base_change_diagonal_example() {
        // e1 e1 = e2, g = diag(2, 1): new c_{1,1}^2 = 1/4
        let a = a_sq();
        let mut g = SquareMatrix::identity(2);
        g.set(0, 0, s(2));
        let b = a.base_change(&g).unwrap();
        assert_eq!(
            *b.c(0, 0, 1),
            Scalar::from_rational(Rational::new(1.into(), 4.into()))
        );
    }

    #[test]
    fn base_change_is_a_left_action() {
        let a = a_sq();
        let g = SquareMatrix::from_rows(vec![vec![s(1), s(2)], vec![s(0), s(1)]]).unwrap();
        let h = SquareMatrix::from_rows(vec![vec![s(3), s(0)], vec![s(1), s(1)]]).unwrap();
        let gh = g.mul(&h);
        let once = a.base_change(&gh).unwrap();
        let twice = a.base_change(&h).unwrap().base_change(&g).unwrap();
        assert!(once.structurally_equal(&twice));
    }

    #[test]
    fn base_change_rejects_singular_and_t() {
        let a = a_sq();
        let sing = SquareMatrix::from_rows(vec![vec![s(1), s(2)], vec![s(2), s(4)]]).unwrap();
        assert_eq!(a.base_change(&sing).unwrap_err(), Error::NotInvertible);
        let mut tmat = SquareMatrix::identity(2);
        tmat.set(0, 0, Scalar::t());
        assert_eq!(a.base_change(&tmat).unwrap_err(), Error::TReserved);
    }

    #[test]
    fn substitute_params_specializes_families() {
        let alpha = Sym::new("alpha");
        let mut b = Algebra::builder("F", 2, vec![alpha]);
        b.set(0, 0, 1, Scalar::var(alpha));
        let f = b.finish().unwrap();
        let mut assign = BTreeMap::new();
        assign.insert(alpha, s(0));
        let specialized = f.substitute_params(&assign).unwrap();
        assert!(specialized.structurally_equal(&Algebra::zero_algebra("Z", 2)));
        assert!(specialized.params().is_empty());

        let mut bad = BTreeMap::new();
        bad.insert(Sym::t(), s(1));
        assert_eq!(f.substitute_params(&bad).unwrap_err(), Error::TReserved);
        let mut bad2 = BTreeMap::new();
        bad2.insert(alpha, Scalar::t());
        assert_eq!(f.substitute_params(&bad2).unwrap_err(), Error::TReserved);
    }

    #[test]
    fn constants_must_avoid_t() {
        let c = vec![Scalar::t(); 1];
        assert_eq!(
            Algebra::new("bad", 1, vec![], c).unwrap_err(),
            Error::TReserved
        );
    }
}
