//! Seeded random ideals for cross-checking the engine against the oracle.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{Exponent, Poly};
use crate::standard_basis::IdealPresentation;

/// Shape of the random ideals.
#[derive(Clone, Copy, Debug)]
pub struct CorpusSpec {
    pub nvars: &'static [usize],
    pub max_generators: usize,
    pub max_terms: usize,
    pub max_degree: u32,
    pub coefficient_bound: i64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            nvars: &[2, 3],
            max_generators: 3,
            max_terms: 4,
            max_degree: 4,
            coefficient_bound: 5,
        }
    }
}

/// Terms have degree between 1 and `max_degree`, so every ideal is proper.
/// The ideal depends only on `(seed, index)`.
pub fn random_ideal(spec: &CorpusSpec, seed: u64, index: u64) -> IdealPresentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let n = spec.nvars[rng.gen_range(0..spec.nvars.len())];
    let count = rng.gen_range(1..=spec.max_generators);
    let mut gens = Vec::with_capacity(count);
    while gens.len() < count {
        let terms = rng.gen_range(1..=spec.max_terms);
        let mut f = Poly::zero(n);
        for _ in 0..terms {
            let e = loop {
                let e = Exponent::new((0..n).map(|_| rng.gen_range(0..=spec.max_degree)));
                if (1..=u64::from(spec.max_degree)).contains(&e.degree()) {
                    break e;
                }
            };
            let c = loop {
                let c = rng.gen_range(-spec.coefficient_bound..=spec.coefficient_bound);
                if c != 0 {
                    break c;
                }
            };
            f.add_term(e, BigRational::from_integer(c.into()));
        }
        if !f.is_zero() {
            gens.push(f);
        }
    }
    IdealPresentation::new(n, gens).expect("generators share the ring")
}
