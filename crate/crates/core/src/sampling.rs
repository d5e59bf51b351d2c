//! Seeded sample points for the pointwise checks.

use std::f64::consts::PI;

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Rational;

/// Complex points in the annulus `0.5 ≤ |z| ≤ 2` with `|arg z| < 0.9π`, which
/// keeps them off the branch cut of the principal logarithm, and small
/// rationals for exact checks.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn complex(&mut self) -> Complex64 {
        let r = self.rng.gen_range(0.5..=2.0);
        let theta = self.rng.gen_range(-0.9 * PI..0.9 * PI);
        Complex64::from_polar(r, theta)
    }

    pub fn complex_point(&mut self, n: usize, m: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        let x = (0..n).map(|_| self.complex()).collect();
        let y = (0..m).map(|_| self.complex()).collect();
        (x, y)
    }

    /// `±p/d` with `1 ≤ p, d ≤ 9`.
    pub fn rational(&mut self) -> Rational {
        let p: i64 = self.rng.gen_range(1..=9);
        let d: i64 = self.rng.gen_range(1..=9);
        let s = if self.rng.gen_bool(0.5) { 1 } else { -1 };
        Rational::new((s * p).into(), d.into())
    }

    pub fn rational_point(&mut self, n: usize, m: usize) -> (Vec<Rational>, Vec<Rational>) {
        let x = (0..n).map(|_| self.rational()).collect();
        let y = (0..m).map(|_| self.rational()).collect();
        (x, y)
    }

    /// Uniform angles on the tori `|x_i| = xi`, `|y_j| = xip`.
    pub fn torus_point(&mut self, n: usize, xi: f64, m: usize, xip: f64) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut draw = |r: f64| Complex64::from_polar(r, self.rng.gen_range(-PI..PI));
        let x = (0..n).map(|_| draw(xi)).collect();
        let y = (0..m).map(|_| draw(xip)).collect();
        (x, y)
    }

    pub fn index(&mut self, bound: usize) -> usize {
        self.rng.gen_range(0..bound)
    }
}
