//! Seeded random draws.

use std::f64::consts::TAU;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{CMatrix, C64};
use crate::space::{build_tangent, Coordinates, SpaceSpec};

/// Default radius of the coordinate disc.
pub const DEFAULT_RADIUS: f64 = 0.7;

/// Deterministic generator for a seed; identical streams on every platform.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the closed complex disc of the given radius.
pub fn disc_point<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> C64 {
    let r = radius * rng.gen::<f64>().sqrt();
    let angle = TAU * rng.gen::<f64>();
    C64::from_polar(r, angle)
}

pub fn disc_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, radius: f64) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| disc_point(rng, radius))
}

/// A random tangent vector together with the coordinates it came from.
pub fn random_tangent<R: Rng + ?Sized>(spec: &SpaceSpec, rng: &mut R, radius: f64) -> (Coordinates, CMatrix) {
    let coords = Coordinates::random(spec, rng, radius);
    let x = build_tangent(spec, &coords).expect("random coordinates always match their spec");
    (coords, x)
}

/// Random skew-Hermitian matrix with entries of modulus at most `radius`.
pub fn random_skew_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, radius: f64) -> CMatrix {
    let a = disc_matrix(rng, n, n, radius);
    (&a - &a.adjoint()).scale_real(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_points_stay_in_disc() {
        let mut rng = rng_from_seed(1);
        for _ in 0..1000 {
            assert!(disc_point(&mut rng, 0.7).norm() <= 0.7);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = disc_matrix(&mut rng_from_seed(42), 3, 3, 1.0);
        let b = disc_matrix(&mut rng_from_seed(42), 3, 3, 1.0);
        assert_eq!(a, b);
    }
}
