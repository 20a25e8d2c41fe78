//! Property tests: field axioms of the scalar arithmetic, valuation and
//! limit laws, the base-change action law, isomorphism invariance, the
//! two-step nilpotent class, and serialization round trips.

use std::collections::BTreeMap;

use proptest::prelude::*;

use degen_core::scalars::{poly_gcd, Polynomial};
use degen_core::{
    check_cd, check_necessary_conditions, parse_algebra_file, serialize_algebra,
    square_dimension, trivial_scaling_certificate, verify_certificate, Algebra, NecessaryVerdict,
    ProfileMode, Rational, Scalar, SquareMatrix, Sym, VerifyOptions,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=10).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn var_pool() -> Vec<Sym> {
    vec![Sym::t(), Sym::new("a"), Sym::new("b")]
}

fn polynomial() -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec((rational(), 0u32..3, 0u32..3, 0u32..2), 0..4).prop_map(|terms| {
        let vars = var_pool();
        let mut acc = Polynomial::zero();
        for (c, e0, e1, e2) in terms {
            let mut term = Polynomial::constant(c);
            for (v, e) in vars.iter().zip([e0, e1, e2]) {
                term = term.mul(&Polynomial::var(*v).pow(e));
            }
            acc = acc.add(&term);
        }
        acc
    })
}

fn nonzero_polynomial() -> impl Strategy<Value = Polynomial> {
    polynomial().prop_filter("nonzero", |p| !p.is_zero())
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (polynomial(), nonzero_polynomial()).prop_map(|(n, d)| Scalar::new(n, d).unwrap())
}

fn nonzero_scalar() -> impl Strategy<Value = Scalar> {
    scalar().prop_filter("nonzero", |s| !s.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.add(&Scalar::zero()), a.clone());
        prop_assert_eq!(a.mul(&Scalar::one()), a.clone());
    }

    #[test]
    fn multiplicative_inverses(a in nonzero_scalar()) {
        prop_assert!(a.mul(&a.inverse().unwrap()).is_one());
        prop_assert_eq!(a.inverse().unwrap().inverse().unwrap(), a);
    }

    #[test]
    fn gcd_divides_and_is_symmetric_up_to_units(p in nonzero_polynomial(), q in nonzero_polynomial()) {
        let g = poly_gcd(&p, &q);
        prop_assert!(p.div_exact(&g).is_some());
        prop_assert!(q.div_exact(&g).is_some());
        prop_assert_eq!(poly_gcd(&q, &p), g);
    }

    #[test]
    fn gcd_absorbs_common_factors(p in nonzero_polynomial(), q in nonzero_polynomial(), r in nonzero_polynomial()) {
        let g = poly_gcd(&p.mul(&r), &q.mul(&r));
        prop_assert!(g.div_exact(&poly_gcd(&r, &r)).is_some());
    }

    #[test]
    fn valuation_is_additive(f in nonzero_scalar(), g in nonzero_scalar()) {
        let sum = f.valuation_at_t().unwrap() + g.valuation_at_t().unwrap();
        prop_assert_eq!(f.mul(&g).valuation_at_t().unwrap(), sum);
    }

    #[test]
    fn limit_is_multiplicative_when_finite(f in scalar(), g in scalar()) {
        if let (Ok(lf), Ok(lg)) = (f.limit_at_zero(), g.limit_at_zero()) {
            // products of finite limits cannot diverge
            let lfg = f.mul(&g).limit_at_zero().unwrap();
            prop_assert_eq!(lfg, lf.mul(&lg));
        }
    }

    #[test]
    fn substitute_commutes_with_limit(f in scalar(), v in rational()) {
        // t-free assignment of a
        let a = Sym::new("a");
        let value = Scalar::from_rational(v);
        let mut map = BTreeMap::new();
        map.insert(a, value);
        let sub_first = f.substitute(&map).and_then(|s| s.limit_at_zero());
        let limit_first = f.limit_at_zero().and_then(|l| l.substitute(&map));
        if let (Ok(x), Ok(y)) = (sub_first, limit_first) {
            prop_assert_eq!(x, y);
        }
    }
}

fn small_scalar() -> impl Strategy<Value = Scalar> {
    (-3i64..=3).prop_map(Scalar::from_int)
}

fn algebra(dim: usize) -> impl Strategy<Value = Algebra> {
    proptest::collection::vec(small_scalar(), dim * dim * dim).prop_map(move |constants| {
        Algebra::new("Rand", dim, vec![], constants).unwrap()
    })
}

fn invertible_matrix(dim: usize) -> impl Strategy<Value = SquareMatrix> {
    proptest::collection::vec(-2i64..=2, dim * dim)
        .prop_map(move |entries| {
            let rows: Vec<Vec<Scalar>> = (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| {
                            let mut v = Scalar::from_int(entries[i * dim + j]);
                            if i == j {
                                // push the diagonal away from zero
                                v = v.add(&Scalar::from_int(3));
                            }
                            v
                        })
                        .collect()
                })
                .collect();
            SquareMatrix::from_rows(rows).unwrap()
        })
        .prop_filter("invertible", |g| g.is_invertible())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn base_change_action_law(a in algebra(3), g in invertible_matrix(3), h in invertible_matrix(3)) {
        let once = a.base_change(&g.mul(&h)).unwrap();
        let twice = a.base_change(&h).unwrap().base_change(&g).unwrap();
        prop_assert!(once.structurally_equal(&twice));
    }

    #[test]
    fn product_is_bilinear(a in algebra(3), x in proptest::collection::vec(small_scalar(), 3),
                           xp in proptest::collection::vec(small_scalar(), 3),
                           y in proptest::collection::vec(small_scalar(), 3)) {
        let sum: Vec<Scalar> = x.iter().zip(&xp).map(|(u, v)| u.add(v)).collect();
        let lhs = a.product(&sum, &y).unwrap();
        let r1 = a.product(&x, &y).unwrap();
        let r2 = a.product(&xp, &y).unwrap();
        for k in 0..3 {
            prop_assert_eq!(&lhs[k], &r1[k].add(&r2[k]));
        }
    }

    #[test]
    fn mul_operators_agree_with_products(a in algebra(3), v in proptest::collection::vec(small_scalar(), 3),
                                         y in proptest::collection::vec(small_scalar(), 3)) {
        let (l, _r) = a.mul_operators(&v).unwrap();
        let lhs = l.apply(&y);
        let rhs = a.product(&v, &y).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cd_flags_invariant_under_base_change(a in algebra(2), g in invertible_matrix(2)) {
        let before = check_cd(&a);
        let after = check_cd(&a.base_change(&g).unwrap());
        prop_assert_eq!(before, after);
    }

    #[test]
    fn square_dimension_invariant_under_base_change(a in algebra(3), g in invertible_matrix(3)) {
        prop_assert_eq!(square_dimension(&a), square_dimension(&a.base_change(&g).unwrap()));
    }

    #[test]
    fn trivial_scaling_is_always_accepted(a in algebra(3)) {
        let cert = trivial_scaling_certificate(&a);
        let verdict = verify_certificate(&cert, &VerifyOptions::default()).unwrap();
        prop_assert!(verdict.is_accepted());
        // soundness cross-check: the necessary conditions never block it
        let verdict = check_necessary_conditions(&a, &cert.target, ProfileMode::Paper).unwrap();
        if !a.structurally_equal(&cert.target) {
            prop_assert_eq!(verdict, NecessaryVerdict::Possible { proper: true });
        }
    }

    #[test]
    fn serialization_round_trips(a in algebra(3)) {
        let text = serialize_algebra(&a);
        let back = parse_algebra_file(&text).unwrap();
        prop_assert!(back.structurally_equal(&a));
    }
}

// Random 2-step nilpotent algebras: products of the non-central part land in
// the central part, everything else is zero, then the split is hidden by a
// random change of basis.
fn two_step_algebra(dim: usize) -> impl Strategy<Value = Algebra> {
    (1..dim, proptest::collection::vec(-3i64..=3, dim * dim * dim))
        .prop_map(move |(central, entries)| {
            let split = dim - central;
            let mut b = Algebra::builder("TwoStep", dim, vec![]);
            for i in 0..split {
                for j in 0..split {
                    for k in split..dim {
                        let v = entries[(i * dim + j) * dim + k];
                        if v != 0 {
                            b.set(i, j, k, Scalar::from_int(v));
                        }
                    }
                }
            }
            b.finish().unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn two_step_nilpotent_algebras_are_cd(a in two_step_algebra(4), g in invertible_matrix(4)) {
        let hidden = a.base_change(&g).unwrap();
        let report = check_cd(&hidden);
        prop_assert!(report.is_cd());
        let ps = degen_core::power_series_dims(&hidden);
        prop_assert!(ps.nilpotent);
        prop_assert!(ps.two_step);
    }
}

// The basis-pair sweep decides the operator-commutator conditions for all
// arguments: on an algebra that passes, commutators built from arbitrary
// vectors are derivations too.
#[test]
fn basis_sweep_decides_cd_for_arbitrary_vectors() {
    use degen_core::is_derivation;
    use rand::{Rng, SeedableRng};
    let alpha = Sym::new("alpha");
    let mut b = Algebra::builder("T", 3, vec![alpha]);
    b.set(0, 0, 2, Scalar::var(alpha));
    b.set(1, 0, 2, Scalar::one());
    let a = b.finish().unwrap();
    assert!(check_cd(&a).is_cd());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let v: Vec<Scalar> = (0..3).map(|_| Scalar::from_int(rng.gen_range(-5..=5))).collect();
        let w: Vec<Scalar> = (0..3).map(|_| Scalar::from_int(rng.gen_range(-5..=5))).collect();
        let (lv, rv) = a.mul_operators(&v).unwrap();
        let (lw, rw) = a.mul_operators(&w).unwrap();
        assert!(is_derivation(&a, &lv.commutator(&lw)).unwrap());
        assert!(is_derivation(&a, &lv.commutator(&rw)).unwrap());
        assert!(is_derivation(&a, &rv.commutator(&rw)).unwrap());
    }
}

// Accepting a certificate is stable under changing the target's
// presentation: conjugating the parametric basis by a constant invertible
// matrix verifies against the base-changed target.
#[test]
fn acceptance_survives_constant_conjugation_of_the_target() {
    use degen_core::scalars::SqrtExpr;
    use degen_core::Certificate;

    let mut b = Algebra::builder("C3", 3, vec![]);
    b.set(0, 0, 1, Scalar::one());
    b.set(0, 1, 2, Scalar::one());
    let source = b.finish().unwrap();
    let mut bt = Algebra::builder("C3cut", 3, vec![]);
    bt.set(0, 0, 1, Scalar::one());
    let target = bt.finish().unwrap();
    let t = Scalar::t();
    let g_entries = [t.clone(), t.pow(2), t.pow(2)];

    let s = Scalar::from_int;
    let m = SquareMatrix::from_rows(vec![
        vec![s(1), s(2), s(0)],
        vec![s(0), s(1), s(1)],
        vec![s(1), s(0), s(1)],
    ])
    .unwrap();
    assert!(m.is_invertible());
    let minv = m.inverse().unwrap();

    // basis matrix G = diag(entries); conjugated basis H = G * M^{-1}
    let n = 3;
    let mut basis = vec![vec![SqrtExpr::plain(Scalar::zero()); n]; n];
    for i in 0..n {
        for j in 0..n {
            // H[j][i] is the coefficient of e_j in E'_i
            let h = g_entries[j].mul(minv.get(j, i));
            basis[i][j] = SqrtExpr::plain(h);
        }
    }
    let cert = Certificate {
        name: "conjugated".into(),
        source,
        index: vec![],
        basis,
        target: target.base_change(&m).unwrap(),
    };
    let verdict = verify_certificate(&cert, &VerifyOptions::default()).unwrap();
    assert!(verdict.is_accepted(), "{:?}", verdict);
}
