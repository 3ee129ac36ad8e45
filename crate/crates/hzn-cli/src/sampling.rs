//! Deterministic sampling for the check suites. The generator is ChaCha8
//! seeded from the user-supplied integer, so suites reproduce bit-for-bit
//! across platforms.

use hzn_core::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.gen::<f64>()
    }

    pub fn pick<T: Copy>(&mut self, items: &[T]) -> T {
        items[self.rng.gen_range(0..items.len())]
    }

    /// Twist in `[margin, 1 - margin]`, safely away from integers.
    pub fn twist(&mut self, margin: f64) -> f64 {
        self.uniform(margin, 1.0 - margin)
    }

    /// Complex argument off the cut: log-uniform modulus in `[rlo, rhi]`,
    /// argument bounded away from `pi`.
    pub fn complex_off_cut(&mut self, rlo: f64, rhi: f64) -> Complex64 {
        let r = (self.uniform(rlo.ln(), rhi.ln())).exp();
        let arg_max = core::f64::consts::PI - 0.35;
        let phi = self.uniform(-arg_max, arg_max);
        Complex64::from_polar(r, phi)
    }
}
