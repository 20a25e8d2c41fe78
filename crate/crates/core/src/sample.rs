//! Random rational points for sampled verification and closure estimates.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalars::{Int, Rational, Scalar, Sym};

/// The sampling RNG; a fixed seed makes every sampled run reproducible.
pub fn rng_from_seed(seed: Option<u64>) -> ChaCha8Rng {
    match seed {
        Some(s) => ChaCha8Rng::seed_from_u64(s),
        None => ChaCha8Rng::from_entropy(),
    }
}

/// Uniform rational with numerator in [-10^6, 10^6] and denominator in
/// [1, 10^6].
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    let num: i64 = rng.gen_range(-1_000_000..=1_000_000);
    let den: i64 = rng.gen_range(1..=1_000_000);
    Rational::new(Int::from(num), Int::from(den))
}

/// Small random rational, handy where expression growth matters more than
/// sample spread.
pub fn random_small_rational(rng: &mut impl Rng) -> Rational {
    let num: i64 = rng.gen_range(-9..=9);
    let den: i64 = rng.gen_range(1..=9);
    Rational::new(Int::from(num), Int::from(den))
}

/// A random rational point for each listed parameter.
pub fn random_point(rng: &mut impl Rng, params: &[Sym]) -> BTreeMap<Sym, Scalar> {
    params
        .iter()
        .map(|&p| (p, Scalar::from_rational(random_rational(rng))))
        .collect()
}
