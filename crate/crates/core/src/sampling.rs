//! Seeded sample points for polynomial identity checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{c64, C64};

pub const ANNULUS_INNER: f64 = 0.5;
pub const ANNULUS_OUTER: f64 = 2.0;

/// Minimum number of sample points for bivariate total-degree-2 identities.
pub const MIN_SAMPLES: usize = 6;

/// Sampling and tolerance settings shared by the membership and linearization checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckConfig {
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self { samples: 12, tol: 1e-9, seed: 0 }
    }
}

impl CheckConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn points(&self) -> Vec<(C64, C64)> {
        sample_points(self.samples, self.seed)
    }
}

/// One complex number drawn area-uniformly from `0.5 ≤ |z| ≤ 2`.
pub fn annulus_point<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let r2 = rng.gen_range(ANNULUS_INNER * ANNULUS_INNER..ANNULUS_OUTER * ANNULUS_OUTER);
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    C64::from_polar(r2.sqrt(), phi)
}

/// `count` deterministic `(λ, μ)` pairs for the given seed.
pub fn sample_points(count: usize, seed: u64) -> Vec<(C64, C64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (annulus_point(&mut rng), annulus_point(&mut rng))).collect()
}

/// Complex entry with independent real and imaginary parts in `[-1, 1)`.
pub fn unit_box<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}
