use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use super::poly::{format_rational, gcd, Polynomial};
use super::{Rational, Sym};
use crate::error::Error;
use crate::Result;

/// An element of the field of multivariate rational functions over the
/// rationals.
///
/// Canonical form: numerator and denominator share no factor, the
/// denominator's leading coefficient under the graded-lexicographic order
/// is 1, the zero scalar is `0/1`. Structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Scalar {
    num: Polynomial,
    den: Polynomial,
}

impl Scalar {
    fn normalized(num: Polynomial, den: Polynomial) -> Scalar {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Scalar {
                num,
                den: Polynomial::one(),
            };
        }
        let (mut num, mut den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (
                    num.div_exact(&g).expect("gcd divides numerator"),
                    den.div_exact(&g).expect("gcd divides denominator"),
                )
            }
        };
        let lc = den.leading_coeff();
        if !lc.is_one() {
            let inv = Rational::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Scalar { num, den }
    }

    /// Build `num/den`; fails when `den` is the zero polynomial.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        Ok(Scalar::normalized(num, den))
    }

    pub fn zero() -> Scalar {
        Scalar {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Scalar {
        Scalar {
            num: Polynomial::one(),
            den: Polynomial::one(),
        }
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar {
            num: Polynomial::from_int(n),
            den: Polynomial::one(),
        }
    }

    pub fn from_rational(r: Rational) -> Scalar {
        Scalar {
            num: Polynomial::constant(r),
            den: Polynomial::one(),
        }
    }

    pub fn from_poly(p: Polynomial) -> Scalar {
        Scalar {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn var(v: Sym) -> Scalar {
        Scalar::from_poly(Polynomial::var(v))
    }

    pub fn t() -> Scalar {
        Scalar::var(Sym::t())
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The constant value, when this scalar is a plain rational.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    /// Variables of numerator and denominator, each listed once.
    pub fn vars(&self) -> Vec<Sym> {
        let mut vars: Vec<Sym> = self.num.vars().to_vec();
        for &v in self.den.vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars.sort();
        vars
    }

    pub fn contains_var(&self, v: Sym) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        if self.den.is_one() && other.den.is_one() {
            return Scalar::normalized(self.num.add(&other.num), Polynomial::one());
        }
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        Scalar::normalized(num, self.den.mul(&other.den))
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        Scalar::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, c: &Rational) -> Scalar {
        Scalar::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn inverse(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        Ok(Scalar::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, n: u32) -> Scalar {
        Scalar {
            num: self.num.pow(n),
            den: self.den.pow(n),
        }
    }

    /// t-adic valuation: lowest t-degree of the numerator minus lowest
    /// t-degree of the denominator. Parameter coefficients count as
    /// generically nonzero. Undefined for zero.
    pub fn valuation_at_t(&self) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ValuationOfZero);
        }
        let t = Sym::t();
        Ok(i64::from(self.num.min_degree_in(t)) - i64::from(self.den.min_degree_in(t)))
    }

    /// The limit as t goes to 0: zero for positive valuation, the t=0
    /// substitution for valuation zero, an error for negative valuation.
    pub fn limit_at_zero(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Ok(Scalar::zero());
        }
        let t = Sym::t();
        let vn = self.num.min_degree_in(t);
        let vd = self.den.min_degree_in(t);
        // in reduced form t divides at most one of numerator and denominator
        if vn > vd {
            return Ok(Scalar::zero());
        }
        if vn < vd {
            return Err(Error::LimitDiverges);
        }
        let k = vn; // common factor t^k, zero in canonical form
        let num0 = self
            .num
            .div_by_var_power(t, k)
            .substitute_var_zero(t);
        let den0 = self
            .den
            .div_by_var_power(t, k)
            .substitute_var_zero(t);
        Scalar::new(num0, den0)
    }

    /// Exact substitution of variables by scalars; names not occurring in
    /// `self` are ignored. Fails when the denominator vanishes identically.
    pub fn substitute(&self, assignment: &BTreeMap<Sym, Scalar>) -> Result<Scalar> {
        if assignment.keys().all(|v| !self.contains_var(*v)) {
            return Ok(self.clone());
        }
        let num = eval_poly(&self.num, assignment);
        let den = eval_poly(&self.den, assignment);
        if den.is_zero() {
            return Err(Error::SubstitutionPole);
        }
        num.div(&den)
    }

    /// Substitute a single variable.
    pub fn substitute_one(&self, v: Sym, value: &Scalar) -> Result<Scalar> {
        let mut map = BTreeMap::new();
        map.insert(v, value.clone());
        self.substitute(&map)
    }

    /// Pivot-size heuristic for elimination: total term count weighted by
    /// coefficient magnitude.
    pub fn size(&self) -> usize {
        self.num.size() + self.den.size()
    }

    /// Render in a form the expression grammar parses back to an equal scalar.
    pub fn to_input_string(&self) -> String {
        if self.den.is_one() {
            format!("{}", self.num)
        } else {
            format!("({})/({})", self.num, self.den)
        }
    }

    /// True when safe to splice into a product without parentheses.
    pub fn is_simple_factor(&self) -> bool {
        self.den.is_one() && self.num.num_terms() == 1
    }
}

fn eval_poly(p: &Polynomial, assignment: &BTreeMap<Sym, Scalar>) -> Scalar {
    let vars = p.vars().to_vec();
    let mut acc = Scalar::zero();
    for (exps, coeff) in p.terms() {
        let mut term = Scalar::from_rational(coeff.clone());
        for (j, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let base = match assignment.get(&vars[j]) {
                Some(s) => s.clone(),
                None => Scalar::var(vars[j]),
            };
            term = term.mul(&base.pow(e));
        }
        acc = acc.add(&term);
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            if let Some(r) = self.num.as_constant() {
                return write!(f, "{}", format_rational(&r));
            }
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
