//! Seeded quasi-random point sets. Every experiment that samples points goes
//! through here so runs are reproducible from the seed alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default seed for sample sets.
pub const DEFAULT_SEED: u64 = 0x5eed_a1e8;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while index > 0 {
        r += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    r
}

/// First `n` points of the (2, 3) Halton sequence in the unit square with a
/// random Cranley–Patterson rotation drawn from `seed`.
pub fn halton_square(n: usize, seed: u64) -> Vec<[f64; 2]> {
    let mut r = rng(seed);
    let shift: [f64; 2] = [r.gen(), r.gen()];
    (1..=n as u64)
        .map(|i| [(radical_inverse(i, 2) + shift[0]).fract(), (radical_inverse(i, 3) + shift[1]).fract()])
        .collect()
}

/// Area-uniform quasi-random points on the unit sphere.
pub fn halton_sphere(n: usize, seed: u64) -> Vec<[f64; 3]> {
    halton_square(n, seed)
        .into_iter()
        .map(|[u, v]| {
            let z = 1.0 - 2.0 * u;
            let s = (1.0 - z * z).max(0.0).sqrt();
            let phi = 2.0 * std::f64::consts::PI * v;
            [s * phi.cos(), s * phi.sin(), z]
        })
        .collect()
}

/// Index pairs `(i, j)` with `i < j` over `n` points.
pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_inverse_base_two() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(2, 2), 0.25);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert!((radical_inverse(5, 3) - (2.0 / 3.0 + 1.0 / 9.0)).abs() < 1e-15);
    }

    #[test]
    fn samples_are_seed_deterministic() {
        assert_eq!(halton_square(16, 7), halton_square(16, 7));
        assert_ne!(halton_square(16, 7), halton_square(16, 8));
        for p in halton_sphere(50, 1) {
            assert!(((p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) - 1.0).abs() < 1e-14);
        }
    }
}
