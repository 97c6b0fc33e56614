//! Fixed inputs shared by the benchmarks, so that runs are comparable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trigcurve::rational::RationalMap;
use trigcurve::{Complex64, LaurentPoly};

fn disk(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if z.norm_sqr() < 1.0 {
            return z;
        }
    }
}

/// A random polynomial with exact support `[m, n]` and support gcd 1.
pub fn random_poly(seed: u64, m: i64, n: i64) -> LaurentPoly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let coeffs = (m..=n).map(|_| disk(&mut rng)).collect();
        if let Ok(p) = LaurentPoly::new(m, coeffs) {
            if p.m() == m && p.n() == n && p.support_gcd() == 1 {
                return p;
            }
        }
    }
}

/// A random non-Blaschke rational map of the given degree.
pub fn random_rational(seed: u64, degree: usize) -> RationalMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let p = (0..=degree).map(|_| disk(&mut rng)).collect();
        let q = (0..=degree).map(|_| disk(&mut rng)).collect();
        if let Ok(map) = RationalMap::new(p, q) {
            if map.degree() == degree && !map.is_blaschke() {
                return map;
            }
        }
    }
}

/// `(m, n)` pairs of increasing size used across the groups.
pub const SIZES: [(i64, i64); 4] = [(1, 3), (-2, 4), (2, 6), (-4, 8)];
