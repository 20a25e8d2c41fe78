//! Membership tests for the identity-defined classes: algebras whose
//! multiplication-operator commutators are derivations, and the
//! commutative/anticommutative split.

use crate::algebra::{unit_vector, Algebra, SquareMatrix};
use crate::error::Error;
use crate::Result;

/// Outcome of the three operator-commutator checks. `LL` covers
/// `[L_a, L_b]`, `LR` covers `[L_a, R_b]`, `RR` covers `[R_a, R_b]`;
/// the algebra belongs to the class when all three are derivations
/// for every pair of elements.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CdReport {
    pub ll: bool,
    pub lr: bool,
    pub rr: bool,
}

impl CdReport {
    pub fn is_cd(&self) -> bool {
        self.ll && self.lr && self.rr
    }
}

/// Whether `D(e_i e_j) = D(e_i) e_j + e_i D(e_j)` for all basis pairs.
/// Exact scalar equality; by bilinearity the basis sweep decides the
/// condition for arbitrary arguments.
pub fn is_derivation(a: &Algebra, d: &SquareMatrix) -> Result<bool> {
    if d.dim() != a.dim() {
        return Err(Error::DimensionMismatch(
            "derivation matrix must match algebra dimension".into(),
        ));
    }
    let n = a.dim();
    for i in 0..n {
        let dei = d.column(i);
        for j in 0..n {
            let dej = d.column(j);
            let lhs = d.apply(&a.product_basis(i, j));
            let ei = unit_vector(n, i);
            let ej = unit_vector(n, j);
            let rhs_left = a.product(&dei, &ej)?;
            let rhs_right = a.product(&ei, &dej)?;
            for k in 0..n {
                if lhs[k] != rhs_left[k].add(&rhs_right[k]) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Sweep all basis pairs `(a, b)` and test whether the operator
/// commutators `[L_a, L_b]`, `[L_a, R_b]`, `[R_a, R_b]` are derivations.
/// Families are checked symbolically, so one run covers every parameter
/// value.
pub fn check_cd(a: &Algebra) -> CdReport {
    let n = a.dim();
    let ops: Vec<(SquareMatrix, SquareMatrix)> = (0..n)
        .map(|p| {
            a.mul_operators(&unit_vector(n, p))
                .expect("basis vector has the right length")
        })
        .collect();
    let mut report = CdReport {
        ll: true,
        lr: true,
        rr: true,
    };
    for p in 0..n {
        for q in 0..n {
            // [X, Y] = -[Y, X] and negatives of derivations are derivations,
            // so unordered pairs suffice for LL and RR
            if p < q {
                if report.ll {
                    let c = ops[p].0.commutator(&ops[q].0);
                    report.ll = is_derivation(a, &c).expect("dimensions agree");
                }
                if report.rr {
                    let c = ops[p].1.commutator(&ops[q].1);
                    report.rr = is_derivation(a, &c).expect("dimensions agree");
                }
            }
            if report.lr {
                let c = ops[p].0.commutator(&ops[q].1);
                report.lr = is_derivation(a, &c).expect("dimensions agree");
            }
            if !report.ll && !report.lr && !report.rr {
                return report;
            }
        }
    }
    report
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Symmetry {
    Commutative,
    Anticommutative,
    Neither,
}

/// Both symmetry flags; they hold simultaneously only for the zero algebra.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SymmetryReport {
    pub commutative: bool,
    pub anticommutative: bool,
}

impl SymmetryReport {
    pub fn kind(&self) -> Symmetry {
        if self.commutative {
            Symmetry::Commutative
        } else if self.anticommutative {
            Symmetry::Anticommutative
        } else {
            Symmetry::Neither
        }
    }

    pub fn describe(&self) -> String {
        match (self.commutative, self.anticommutative) {
            (true, true) => "commutative (also anticommutative)".into(),
            (true, false) => "commutative".into(),
            (false, true) => "anticommutative".into(),
            (false, false) => "neither commutative nor anticommutative".into(),
        }
    }
}

/// Compare `c_{i,j}^k` with `c_{j,i}^k` entrywise.
pub fn check_symmetry(a: &Algebra) -> SymmetryReport {
    let n = a.dim();
    let mut commutative = true;
    let mut anticommutative = true;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let cij = a.c(i, j, k);
                let cji = a.c(j, i, k);
                if commutative && cij != cji {
                    commutative = false;
                }
                if anticommutative && *cij != cji.neg() {
                    anticommutative = false;
                }
            }
        }
    }
    SymmetryReport {
        commutative,
        anticommutative,
    }
}
