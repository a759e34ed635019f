//! Reproducible random power diagram specs.
//!
//! The generator is ChaCha8 seeded with the caller's `u64`, so output is
//! identical on every platform. Each coordinate is drawn as a denominator
//! `q` uniform in `2..=100` and then a numerator `p` uniform in `0..=q`
//! (inside the unit box or simplex) or `-q..=q` (for all of `R^d`). Offsets
//! are `v_i = m / 100` with `m` uniform in `-10..=10`, and gammas follow as
//! `(s_i . s_i - v_i) / 2`. Sites that repeat an earlier site are redrawn.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::PowerDiagramSpec;
use crate::scalar::{Rational, Scalar};

/// Region the sites are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteRegion {
    /// Coordinates in `[-1, 1]`.
    Symmetric,
    /// Coordinates in `[0, 1]`.
    UnitBox,
    /// Coordinates in `[0, 1]` with sum at most 1.
    Simplex,
}

pub struct SpecGenerator {
    rng: ChaCha8Rng,
}

impl SpecGenerator {
    pub fn new(seed: u64) -> Self {
        SpecGenerator {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rational(&mut self, symmetric: bool) -> Rational {
        let den = self.rng.random_range(2..=100i64);
        let lo = if symmetric { -den } else { 0 };
        let num = self.rng.random_range(lo..=den);
        Rational::from_frac(num, den)
    }

    /// An integer in `lo..=hi`.
    pub fn integer(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.random_range(lo..=hi)
    }

    pub fn point(&mut self, dim: usize, region: SiteRegion) -> Vec<Rational> {
        loop {
            let p: Vec<Rational> = (0..dim)
                .map(|_| self.rational(region == SiteRegion::Symmetric))
                .collect();
            let inside = region != SiteRegion::Simplex
                || p.iter().fold(Rational::zero(), |a, x| a + x) <= Rational::one();
            if inside {
                return p;
            }
        }
    }

    pub fn spec(&mut self, dim: usize, k: usize, region: SiteRegion) -> PowerDiagramSpec<Rational> {
        let mut sites: Vec<Vec<Rational>> = Vec::with_capacity(k);
        while sites.len() < k {
            let p = self.point(dim, region);
            if !sites.contains(&p) {
                sites.push(p);
            }
        }
        let offsets: Vec<Rational> = (0..k)
            .map(|_| Rational::from_frac(self.integer(-10, 10), 100))
            .collect();
        PowerDiagramSpec::from_offsets(sites, &offsets).expect("sites are distinct")
    }
}

/// One spec from a seed; see the module docs for the algorithm.
pub fn random_spec(seed: u64, dim: usize, k: usize, region: SiteRegion) -> PowerDiagramSpec<Rational> {
    SpecGenerator::new(seed).spec(dim, k, region)
}
