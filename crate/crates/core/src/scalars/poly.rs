use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Int, Rational, Sym};

/// A multivariate polynomial with rational coefficients.
///
/// `vars` is the ordered support of the polynomial: `t` first when present,
/// the rest alphabetical. Every exponent vector has length `vars.len()`,
/// no zero coefficients are stored, and variables that appear in no term
/// are dropped, so structural equality is semantic equality. Terms are kept
/// sorted in descending graded-lexicographic order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    vars: Vec<Sym>,
    terms: Vec<Term>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
struct Term {
    exps: Vec<u32>,
    coeff: Rational,
}

fn cmp_grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| u64::from(e)).sum();
    let db: u64 = b.iter().map(|&e| u64::from(e)).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial {
            vars: Vec::new(),
            terms: Vec::new(),
        }
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            vars: Vec::new(),
            terms: vec![Term {
                exps: Vec::new(),
                coeff: c,
            }],
        }
    }

    pub fn from_int(n: i64) -> Polynomial {
        Polynomial::constant(Rational::from(Int::from(n)))
    }

    pub fn var(v: Sym) -> Polynomial {
        Polynomial {
            vars: vec![v],
            terms: vec![Term {
                exps: vec![1],
                coeff: Rational::one(),
            }],
        }
    }

    fn from_map(vars: Vec<Sym>, map: BTreeMap<Vec<u32>, Rational>) -> Polynomial {
        let mut terms: Vec<Term> = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exps, coeff)| Term { exps, coeff })
            .collect();
        terms.sort_by(|a, b| cmp_grlex(&b.exps, &a.exps));
        let mut p = Polynomial { vars, terms };
        p.trim_vars();
        p
    }

    /// Drop variables that no term uses, keeping exponent vectors aligned.
    fn trim_vars(&mut self) {
        if self.terms.is_empty() {
            self.vars.clear();
            return;
        }
        let used: Vec<bool> = (0..self.vars.len())
            .map(|i| self.terms.iter().any(|t| t.exps[i] != 0))
            .collect();
        if used.iter().all(|&u| u) {
            return;
        }
        let keep: Vec<usize> = (0..self.vars.len()).filter(|&i| used[i]).collect();
        self.vars = keep.iter().map(|&i| self.vars[i]).collect();
        for t in &mut self.terms {
            t.exps = keep.iter().map(|&i| t.exps[i]).collect();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.terms.len() == 1 && self.terms[0].coeff.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            Some(self.terms[0].coeff.clone())
        } else {
            None
        }
    }

    pub fn vars(&self) -> &[Sym] {
        &self.vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn contains_var(&self, v: Sym) -> bool {
        self.vars.contains(&v)
    }

    /// Leading coefficient in the graded-lexicographic order.
    pub fn leading_coeff(&self) -> Rational {
        self.terms
            .first()
            .map(|t| t.coeff.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .first()
            .map(|t| t.exps.iter().map(|&e| u64::from(e)).sum())
            .unwrap_or(0)
    }

    pub fn degree_in(&self, v: Sym) -> u32 {
        match self.vars.iter().position(|&w| w == v) {
            None => 0,
            Some(i) => self.terms.iter().map(|t| t.exps[i]).max().unwrap_or(0),
        }
    }

    /// Smallest exponent of `v` over all terms; 0 for the zero polynomial.
    pub fn min_degree_in(&self, v: Sym) -> u32 {
        match self.vars.iter().position(|&w| w == v) {
            None => 0,
            Some(i) => self.terms.iter().map(|t| t.exps[i]).min().unwrap_or(0),
        }
    }

    /// Keep only terms with exponent 0 in `v` (substitutes `v = 0`).
    pub fn substitute_var_zero(&self, v: Sym) -> Polynomial {
        let i = match self.vars.iter().position(|&w| w == v) {
            None => return self.clone(),
            Some(i) => i,
        };
        let mut p = Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|t| t.exps[i] == 0)
                .cloned()
                .collect(),
        };
        p.trim_vars();
        p
    }

    /// The coefficient of `v^k`: terms with exponent exactly `k` in `v`,
    /// with `v` removed.
    pub fn coeff_of_power(&self, v: Sym, k: u32) -> Polynomial {
        let i = match self.vars.iter().position(|&w| w == v) {
            None => {
                return if k == 0 {
                    self.clone()
                } else {
                    Polynomial::zero()
                };
            }
            Some(i) => i,
        };
        let mut p = Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|t| t.exps[i] == k)
                .map(|t| {
                    let mut t = t.clone();
                    t.exps[i] = 0;
                    t
                })
                .collect(),
        };
        p.terms.sort_by(|a, b| cmp_grlex(&b.exps, &a.exps));
        p.trim_vars();
        p
    }

    /// Divide by `v^k`; every term must have exponent >= k in `v`.
    pub fn div_by_var_power(&self, v: Sym, k: u32) -> Polynomial {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        let i = self
            .vars
            .iter()
            .position(|&w| w == v)
            .expect("variable not present");
        let mut p = self.clone();
        for t in &mut p.terms {
            assert!(t.exps[i] >= k, "term not divisible by variable power");
            t.exps[i] -= k;
        }
        p.trim_vars();
        p
    }

    /// Map this polynomial's exponent vectors into a superset variable list.
    fn remap(&self, vars: &[Sym]) -> Vec<Term> {
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("var superset"))
            .collect();
        self.terms
            .iter()
            .map(|t| {
                let mut exps = vec![0u32; vars.len()];
                for (j, &e) in t.exps.iter().enumerate() {
                    exps[idx[j]] = e;
                }
                Term {
                    exps,
                    coeff: t.coeff.clone(),
                }
            })
            .collect()
    }

    fn merged_vars(a: &Polynomial, b: &Polynomial) -> Vec<Sym> {
        let mut vars = a.vars.clone();
        for &v in &b.vars {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars.sort();
        vars
    }

    pub fn neg(&self) -> Polynomial {
        let mut p = self.clone();
        for t in &mut p.terms {
            t.coeff = -t.coeff.clone();
        }
        p
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let vars = Polynomial::merged_vars(self, other);
        let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for t in self.remap(&vars).into_iter().chain(other.remap(&vars)) {
            let entry = map.entry(t.exps).or_insert_with(Rational::zero);
            *entry += t.coeff;
        }
        Polynomial::from_map(vars, map)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let vars = Polynomial::merged_vars(self, other);
        let a = self.remap(&vars);
        let b = other.remap(&vars);
        let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for ta in &a {
            for tb in &b {
                let exps: Vec<u32> = ta
                    .exps
                    .iter()
                    .zip(&tb.exps)
                    .map(|(&x, &y)| x + y)
                    .collect();
                let entry = map.entry(exps).or_insert_with(Rational::zero);
                *entry += &ta.coeff * &tb.coeff;
            }
        }
        Polynomial::from_map(vars, map)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        let mut p = self.clone();
        for t in &mut p.terms {
            t.coeff = &t.coeff * c;
        }
        p
    }

    pub fn pow(&self, mut n: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Write `self = factor * P` with `P` an integer-coefficient primitive
    /// polynomial whose leading coefficient is positive. Returns `(factor, P)`;
    /// the zero polynomial yields `(1, 0)`.
    pub fn primitive_int(&self) -> (Rational, Polynomial) {
        if self.is_zero() {
            return (Rational::one(), Polynomial::zero());
        }
        let mut den_lcm = Int::one();
        for t in &self.terms {
            den_lcm = den_lcm.lcm(t.coeff.denom());
        }
        let mut num_gcd = Int::zero();
        for t in &self.terms {
            let scaled = t.coeff.numer() * (&den_lcm / t.coeff.denom());
            num_gcd = num_gcd.gcd(&scaled);
        }
        // num_gcd > 0 here since self is nonzero
        let mut sign = Int::one();
        if self.terms[0].coeff.is_negative() {
            sign = -sign;
        }
        let unit = &num_gcd * &sign;
        let factor = Rational::new(unit.clone(), den_lcm.clone());
        let mut prim = self.clone();
        for t in &mut prim.terms {
            let scaled = t.coeff.numer() * (&den_lcm / t.coeff.denom());
            t.coeff = Rational::from(&scaled / &unit);
        }
        (factor, prim)
    }

    /// Exact multivariate division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        let vars = Polynomial::merged_vars(self, divisor);
        let mut rem: Vec<Term> = self.remap(&vars);
        let div: Vec<Term> = divisor.remap(&vars);
        let lead = &div[0];
        let mut quot: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        while let Some(top) = rem.first().cloned() {
            let mut qexps = Vec::with_capacity(vars.len());
            for (&e, &d) in top.exps.iter().zip(&lead.exps) {
                if e < d {
                    return None;
                }
                qexps.push(e - d);
            }
            let qcoeff = &top.coeff / &lead.coeff;
            // rem -= (qcoeff * x^qexps) * divisor
            let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
            for t in &rem {
                let entry = map.entry(t.exps.clone()).or_insert_with(Rational::zero);
                *entry += t.coeff.clone();
            }
            for t in &div {
                let exps: Vec<u32> = t.exps.iter().zip(&qexps).map(|(&x, &y)| x + y).collect();
                let entry = map.entry(exps).or_insert_with(Rational::zero);
                *entry -= &qcoeff * &t.coeff;
            }
            rem = map
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(exps, coeff)| Term { exps, coeff })
                .collect();
            rem.sort_by(|a, b| cmp_grlex(&b.exps, &a.exps));
            quot.insert(qexps, qcoeff);
        }
        Some(Polynomial::from_map(vars, quot))
    }

    /// View as univariate in `v`: index k holds the coefficient of `v^k`,
    /// a polynomial in the remaining variables.
    fn univar(&self, v: Sym) -> Vec<Polynomial> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Polynomial::zero(); deg + 1];
        let pos = self.vars.iter().position(|&w| w == v);
        for t in &self.terms {
            let (k, rest_exps): (usize, Vec<u32>) = match pos {
                None => (0, t.exps.clone()),
                Some(i) => (
                    t.exps[i] as usize,
                    t.exps
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &e)| e)
                        .collect(),
                ),
            };
            let rest_vars: Vec<Sym> = self
                .vars
                .iter()
                .copied()
                .filter(|&w| w != v)
                .collect();
            let coeff_term = Polynomial {
                vars: rest_vars,
                terms: vec![Term {
                    exps: rest_exps,
                    coeff: t.coeff.clone(),
                }],
            };
            let mut trimmed = coeff_term;
            trimmed.trim_vars();
            out[k] = out[k].add(&trimmed);
        }
        out
    }

    fn from_univar(coeffs: &[Polynomial], v: Sym) -> Polynomial {
        let vp = Polynomial::var(v);
        let mut acc = Polynomial::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(&vp).add(c);
        }
        acc
    }

    /// Iterate over `(exponent vector, coefficient)` pairs, aligned with [`Self::vars`].
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|t| (t.exps.as_slice(), &t.coeff))
    }

    /// Largest absolute numerator over all coefficients (for integer
    /// polynomials this is the max-norm).
    fn max_abs_numer(&self) -> Int {
        self.terms
            .iter()
            .map(|t| t.coeff.numer().abs())
            .max()
            .unwrap_or_else(Int::zero)
    }

    /// Substitute the integer `x` for `v` (Horner on the univariate view).
    fn eval_var_int(&self, v: Sym, x: &Int) -> Polynomial {
        if !self.contains_var(v) {
            return self.clone();
        }
        let coeffs = self.univar(v);
        let xr = Rational::from(x.clone());
        let mut acc = Polynomial::zero();
        for c in coeffs.iter().rev() {
            acc = acc.scale(&xr).add(c);
        }
        acc
    }

    /// Divide every coefficient by the integer `x`; must be exact.
    fn div_coeffs_exact(&self, x: &Int) -> Polynomial {
        let inv = Rational::new(Int::one(), x.clone());
        self.scale(&inv)
    }

    /// Apply the symmetric remainder mod `x` to every coefficient.
    fn smod_coeffs(&self, x: &Int) -> Polynomial {
        let mut p = self.clone();
        for t in &mut p.terms {
            t.coeff = Rational::from(smod(t.coeff.numer(), x));
        }
        p.terms.retain(|t| !t.coeff.is_zero());
        p.trim_vars();
        p
    }

    /// A cheap size measure used by elimination pivoting heuristics.
    pub fn size(&self) -> usize {
        self.terms
            .iter()
            .map(|t| {
                1 + (t.coeff.numer().bits() as usize + t.coeff.denom().bits() as usize) / 64
            })
            .sum()
    }
}

fn univar_degree(coeffs: &[Polynomial]) -> Option<usize> {
    coeffs.iter().rposition(|c| !c.is_zero())
}

/// Pseudo-remainder of coefficient vectors in one variable: repeatedly scales
/// the dividend by the divisor's leading coefficient so every reduction step
/// stays in the polynomial ring.
fn pseudo_rem(a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    let db = univar_degree(b).expect("pseudo_rem by zero");
    let lc_b = b[db].clone();
    let mut r: Vec<Polynomial> = a.to_vec();
    loop {
        let dr = match univar_degree(&r) {
            None => return r,
            Some(d) => d,
        };
        if dr < db {
            return r;
        }
        r.truncate(dr + 1);
        let lc_r = r[dr].clone();
        // r = lc_b * r - lc_r * x^(dr-db) * b
        let shift = dr - db;
        let mut next = vec![Polynomial::zero(); dr + 1];
        for (i, c) in r.iter().enumerate() {
            next[i] = lc_b.mul(c);
        }
        for (j, c) in b.iter().enumerate().take(db + 1) {
            next[j + shift] = next[j + shift].sub(&lc_r.mul(c));
        }
        // the top coefficient cancels by construction
        r = next;
        if let Some(d) = univar_degree(&r) {
            assert!(d < dr, "pseudo-remainder degree did not drop");
        }
    }
}

fn vec_content(coeffs: &[Polynomial]) -> Polynomial {
    let mut g = Polynomial::zero();
    for c in coeffs {
        if !c.is_zero() {
            g = gcd(&g, c);
            if g.is_one() {
                return g;
            }
        }
    }
    g
}

/// Symmetric remainder: the representative of `a` mod `m` in
/// `(-m/2, m/2]`.
fn smod(a: &Int, m: &Int) -> Int {
    let mut r = a.mod_floor(m);
    let twice = &r * 2;
    if &twice > m {
        r -= m;
    }
    r
}

/// Greatest common divisor, returned as a primitive integer polynomial with
/// positive leading coefficient (`gcd(0, 0) = 0`). Any associate works for
/// fraction reduction; this choice makes the result canonical.
///
/// Coprime pairs (the common case when reducing fractions) are recognized
/// first by projecting to one variable at a time: a projection that keeps
/// both leading coefficients alive preserves the gcd degree in that
/// variable, so univariate pseudo-remainder gcds of degree zero in every
/// variable prove coprimality. The workhorse for the remaining pairs is the
/// heuristic gcd: evaluate at a large integer, take an integer gcd,
/// reconstruct a candidate from balanced base digits and verify it by exact
/// integer division. Multivariate pseudo-remainder sequences stay as the
/// last fallback.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.primitive_int().1;
    }
    if b.is_zero() {
        return a.primitive_int().1;
    }
    let (_, p) = a.primitive_int();
    let (_, q) = b.primitive_int();
    if p.is_constant() || q.is_constant() {
        return Polynomial::one();
    }
    if provably_coprime(&p, &q) {
        return Polynomial::one();
    }
    match gcd_heuristic(&p, &q) {
        Some(g) => g.primitive_int().1,
        None => gcd_primitive(&p, &q),
    }
}

// Fixed evaluation points for the coprimality projections; chosen values
// only need to dodge the leading-coefficient vanishing locus.
const PROJECTION_POINTS: [i64; 8] = [2, -3, 5, -7, 11, -13, 17, -19];

/// Sound one-sided test: `true` proves `gcd(p, q) = 1` for primitive p, q.
fn provably_coprime(p: &Polynomial, q: &Polynomial) -> bool {
    let mut vars: Vec<Sym> = p.vars().to_vec();
    for &v in q.vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    'vars: for &x in &vars {
        if !p.contains_var(x) || !q.contains_var(x) {
            // the gcd cannot involve a variable missing from either side
            continue;
        }
        let lc_p = p.coeff_of_power(x, p.degree_in(x));
        let lc_q = q.coeff_of_power(x, q.degree_in(x));
        for attempt in 0..PROJECTION_POINTS.len() {
            let point = |v: Sym| {
                let mut h = 0usize;
                for b in v.name().bytes() {
                    h = h.wrapping_mul(31).wrapping_add(b as usize);
                }
                Int::from(PROJECTION_POINTS[(h + attempt) % PROJECTION_POINTS.len()])
            };
            let project = |f: &Polynomial| {
                let mut out = f.clone();
                for &v in &vars {
                    if v != x {
                        out = out.eval_var_int(v, &point(v));
                    }
                }
                out
            };
            if project(&lc_p).is_zero() || project(&lc_q).is_zero() {
                continue;
            }
            // leading coefficients survive, so deg_x of the gcd is preserved
            let g = gcd_primitive(&project(p), &project(q));
            if g.degree_in(x) == 0 {
                continue 'vars;
            }
            return false;
        }
        return false;
    }
    true
}

/// Gcd of the integer coefficients (the content of an integer polynomial).
fn int_content(p: &Polynomial) -> Int {
    let mut g = Int::zero();
    for (_, c) in p.terms() {
        g = g.gcd(c.numer());
        if g.is_one() {
            break;
        }
    }
    g.max(Int::one())
}

/// Heuristic gcd of integer-coefficient polynomials, content included;
/// `None` when every evaluation point fails.
///
/// The integer content is split off first and its gcd multiplied back into
/// the result, so recursive calls always see primitive inputs. The
/// evaluation point is padded past a Mignotte-style factor bound: a
/// single-digit (constant) reconstruction then proves the primitive parts
/// coprime. Spurious integer factors shared by the evaluated cofactors are
/// stripped by taking the primitive part of the reconstruction.
fn gcd_heuristic(p: &Polynomial, q: &Polynomial) -> Option<Polynomial> {
    // base case: integers
    if p.is_constant() && q.is_constant() {
        let pa = p.as_constant().expect("constant").numer().abs();
        let qa = q.as_constant().expect("constant").numer().abs();
        return Some(Polynomial::constant(Rational::from(pa.gcd(&qa))));
    }
    let cont_p = int_content(p);
    let cont_q = int_content(q);
    let ci = Polynomial::constant(Rational::from(cont_p.gcd(&cont_q)));
    let pp = p.div_coeffs_exact(&cont_p);
    let qq = q.div_coeffs_exact(&cont_q);
    if pp.is_constant() || qq.is_constant() {
        return Some(ci);
    }

    // evaluation variable: present in either, smallest max degree
    let mut vars: Vec<Sym> = pp.vars().to_vec();
    for &v in qq.vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    let x = *vars
        .iter()
        .min_by_key(|&&v| pp.degree_in(v).max(qq.degree_in(v)))
        .expect("at least one variable");
    let deg_bound = pp.degree_in(x).min(qq.degree_in(x)) as usize + 1;

    let norm = pp.max_abs_numer().min(qq.max_abs_numer()).max(Int::one());
    let pad = pp.total_degree().min(qq.total_degree()) * 2 + 4;
    let mut xi: Int = (norm << pad) + 2;
    for _ in 0..8 {
        let pe = pp.eval_var_int(x, &xi);
        let qe = qq.eval_var_int(x, &xi);
        if !pe.is_zero() && !qe.is_zero() {
            if let Some(gamma) = gcd_heuristic(&pe, &qe) {
                if let Some(g) = reconstruct_from_digits(&gamma, x, &xi, deg_bound) {
                    if g.is_constant() {
                        // xi exceeds the factor-coefficient bound, so a
                        // nonconstant gcd would have reconstructed with
                        // more than one digit
                        return Some(ci);
                    }
                    let (_, g) = g.primitive_int();
                    if divides_int(&g, &pp) && divides_int(&g, &qq) {
                        return Some(ci.mul(&g));
                    }
                }
            }
        }
        // grow the evaluation point and try again
        xi = (&xi * 73i32) / 32i32 + 1i32;
    }
    None
}

/// Integer-coefficient divisibility: the quotient must live in Z[vars].
fn divides_int(g: &Polynomial, p: &Polynomial) -> bool {
    match p.div_exact(g) {
        Some(q) => q.terms().all(|(_, c)| c.denom().is_one()),
        None => false,
    }
}

/// Rebuild a polynomial in `x` from the balanced base-`xi` digits of `gamma`.
fn reconstruct_from_digits(
    gamma: &Polynomial,
    x: Sym,
    xi: &Int,
    deg_bound: usize,
) -> Option<Polynomial> {
    let mut g = Polynomial::zero();
    let mut rest = gamma.clone();
    let xpow = Polynomial::var(x);
    let mut power = Polynomial::one();
    let mut digits = 0;
    while !rest.is_zero() {
        if digits > deg_bound {
            return None;
        }
        let digit = rest.smod_coeffs(xi);
        g = g.add(&digit.mul(&power));
        rest = rest.sub(&digit).div_coeffs_exact(xi);
        power = power.mul(&xpow);
        digits += 1;
    }
    if g.is_zero() {
        None
    } else {
        Some(g)
    }
}

fn gcd_primitive(p: &Polynomial, q: &Polynomial) -> Polynomial {
    if p.is_constant() || q.is_constant() {
        return Polynomial::one();
    }
    // main variable: shared, smallest max-degree to limit growth
    let shared: Vec<Sym> = p
        .vars
        .iter()
        .copied()
        .filter(|&v| q.contains_var(v))
        .collect();
    let x = match shared
        .into_iter()
        .min_by_key(|&v| p.degree_in(v).max(q.degree_in(v)))
    {
        // no shared variable: common divisors are constants
        None => return Polynomial::one(),
        Some(v) => v,
    };

    let pu = p.univar(x);
    let qu = q.univar(x);
    let cont_p = vec_content(&pu);
    let cont_q = vec_content(&qu);
    let c = gcd_primitive(&cont_p, &cont_q);
    let pp = p.div_exact(&cont_p).expect("content divides");
    let qq = q.div_exact(&cont_q).expect("content divides");

    let mut a = pp.univar(x);
    let mut b = qq.univar(x);
    if univar_degree(&a) < univar_degree(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = pseudo_rem(&a, &b);
        match univar_degree(&r) {
            None => {
                // b divides a (up to content); gcd = c * primpart_x(b)
                let bp = Polynomial::from_univar(&b, x);
                let cont_b = vec_content(&b);
                let prim = bp.div_exact(&cont_b).expect("content divides");
                let (_, result) = c.mul(&prim).primitive_int();
                return result;
            }
            Some(0) => {
                // nonzero remainder constant in x: coprime apart from content
                return c;
            }
            Some(_) => {
                a = b;
                let rp = Polynomial::from_univar(&r, x);
                let cont_r = vec_content(&r);
                let prim = rp.div_exact(&cont_r).expect("content divides");
                b = prim.univar(x);
            }
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            let mag = t.coeff.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || t.exps.iter().all(|&e| e == 0) {
                parts.push(format_rational(&mag));
            }
            for (j, &e) in t.exps.iter().enumerate() {
                if e == 1 {
                    parts.push(self.vars[j].name().to_owned());
                } else if e > 1 {
                    parts.push(format!("{}^{}", self.vars[j], e));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

pub(crate) fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p_t() -> Polynomial {
        Polynomial::var(Sym::t())
    }

    fn p_a() -> Polynomial {
        Polynomial::var(Sym::new("a"))
    }

    #[test]
    fn arithmetic_basics() {
        let t = p_t();
        let one = Polynomial::one();
        let sum = t.add(&one); // t + 1
        let sq = sum.mul(&sum); // t^2 + 2t + 1
        assert_eq!(sq.total_degree(), 2);
        assert_eq!(sq.num_terms(), 3);
        assert_eq!(sq.sub(&sq), Polynomial::zero());
        assert_eq!(sum.pow(2), sq);
    }

    #[test]
    fn cancellation_trims_vars() {
        let t = p_t();
        let a = p_a();
        let p = t.add(&a);
        let q = p.sub(&t); // a
        assert_eq!(q, a);
        assert_eq!(q.vars(), &[Sym::new("a")]);
    }

    #[test]
    fn grlex_order_puts_t_first() {
        // t and a have the same total degree; t must lead
        let p = p_t().add(&p_a());
        assert_eq!(format!("{}", p), "t + a");
        // higher total degree leads regardless of variable
        let q = p_a().pow(2).add(&p_t());
        assert_eq!(format!("{}", q), "a^2 + t");
    }

    #[test]
    fn min_degree_and_substitution() {
        let t = p_t();
        // t^2 + 3t
        let p = t.pow(2).add(&t.scale(&Rational::from(Int::from(3))));
        assert_eq!(p.min_degree_in(Sym::t()), 1);
        assert!(p.substitute_var_zero(Sym::t()).is_zero());
        let q = p.div_by_var_power(Sym::t(), 1);
        assert_eq!(format!("{}", q), "t + 3");
        assert_eq!(
            q.substitute_var_zero(Sym::t()),
            Polynomial::from_int(3)
        );
    }

    #[test]
    fn primitive_int_normalizes() {
        // -3/2 t + 9/4  ->  factor -3/4, primitive 2t - 3
        let p = p_t()
            .scale(&Rational::new(Int::from(-3), Int::from(2)))
            .add(&Polynomial::constant(Rational::new(
                Int::from(9),
                Int::from(4),
            )));
        let (factor, prim) = p.primitive_int();
        assert_eq!(format!("{}", prim), "2*t - 3");
        assert_eq!(factor, Rational::new(Int::from(-3), Int::from(4)));
        assert_eq!(prim.scale(&factor), p);
    }

    #[test]
    fn exact_division() {
        let t = p_t();
        let a = p_a();
        let f = t.add(&a); // t + a
        let g = t.sub(&a); // t - a
        let prod = f.mul(&g);
        assert_eq!(prod.div_exact(&f), Some(g.clone()));
        assert_eq!(prod.div_exact(&g), Some(f.clone()));
        assert_eq!(f.div_exact(&g), None);
        assert_eq!(prod.div_exact(&prod), Some(Polynomial::one()));
    }

    #[test]
    fn gcd_univariate() {
        let t = p_t();
        let one = Polynomial::one();
        let f = t.add(&one).pow(2).mul(&t.sub(&one)); // (t+1)^2 (t-1)
        let g = t.add(&one).mul(&t); // (t+1) t
        let d = gcd(&f, &g);
        assert_eq!(format!("{}", d), "t + 1");
    }

    #[test]
    fn gcd_multivariate() {
        let t = p_t();
        let a = p_a();
        let b = Polynomial::var(Sym::new("b"));
        let common = t.add(&a).add(&b); // t + a + b
        let f = common.mul(&t.sub(&a));
        let g = common.mul(&a.mul(&b).add(&Polynomial::one()));
        let d = gcd(&f, &g);
        assert_eq!(d, common);
    }

    #[test]
    fn gcd_coprime_and_zero() {
        let t = p_t();
        let a = p_a();
        assert!(gcd(&t, &a).is_one());
        assert_eq!(gcd(&Polynomial::zero(), &t), t);
        assert!(gcd(&Polynomial::zero(), &Polynomial::zero()).is_zero());
        // constants are units
        assert!(gcd(&Polynomial::from_int(6), &Polynomial::from_int(4)).is_one());
    }

    #[test]
    fn gcd_with_rational_coefficients() {
        let t = p_t();
        let half = Rational::new(Int::from(1), Int::from(2));
        let f = t.add(&Polynomial::one()).scale(&half); // (t+1)/2
        let g = t.add(&Polynomial::one()).mul(&t); // (t+1) t
        let d = gcd(&f, &g);
        assert_eq!(format!("{}", d), "t + 1");
    }
}
