//! The Cayley map `X -> (1 - X)(1 + X)^-1` and membership checks on its image.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{antitranspose, det, inverse, solve, CMatrix, ONE};
use crate::space::{symplectic_tau, Group, SpaceSpec};

/// Cutoff for `|det(1 + g)|` relative to its Hadamard bound in [`cayley_inverse`].
pub const SPECTRUM_TOL: f64 = 1e-12;

/// `g = (1 - X)(1 + X)^-1`, computed as the solution of `(1 + X) g = 1 - X`.
pub fn cayley(x: &CMatrix) -> Result<CMatrix> {
    if !x.is_square() {
        return Err(Error::Dimension("Cayley map needs a square matrix".into()));
    }
    let id = CMatrix::identity(x.rows());
    solve(&(&id + x), &(&id - x))
}

/// `X = (1 - g)(1 + g)^-1`; fails when `-1` is (numerically) in the spectrum of `g`.
pub fn cayley_inverse(g: &CMatrix) -> Result<CMatrix> {
    if !g.is_square() {
        return Err(Error::Dimension("inverse Cayley map needs a square matrix".into()));
    }
    let id = CMatrix::identity(g.rows());
    let one_plus = &id + g;
    let d = det(&one_plus).norm();
    let bound: f64 = one_plus.row_norms().iter().product();
    if d <= SPECTRUM_TOL * bound.max(f64::MIN_POSITIVE) {
        return Err(Error::Domain(d));
    }
    solve(&one_plus, &(&id - g)).map_err(|_| Error::Domain(d))
}

/// Diagnostics for `g` lying in the image of the Cartan embedding.
#[derive(Clone, Debug, Serialize)]
pub struct ImageReport {
    /// `max |g* g - 1|`.
    pub unitarity: f64,
    /// `max |theta(g) - g^-1|`.
    pub theta_inverse: f64,
    /// `|det g - 1|`.
    pub det_one: f64,
    /// `max |g^tau - g^-1|` (orthogonal) or `max |I_{n,n} (g^-1)^tau I_{n,n} - g|`
    /// (symplectic); absent for `SU(N)`.
    pub family_condition: Option<f64>,
}

impl ImageReport {
    pub fn checks(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![("unitarity", self.unitarity), ("theta_inverse", self.theta_inverse), ("det_one", self.det_one)];
        if let Some(v) = self.family_condition {
            out.push(("family_condition", v));
        }
        out
    }

    pub fn max_violation(&self) -> f64 {
        self.checks().iter().map(|c| c.1).fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.checks().iter().all(|(_, v)| *v <= tol)
    }
}

pub fn verify_image(spec: &SpaceSpec, g: &CMatrix) -> Result<ImageReport> {
    let n = spec.ambient();
    if g.rows() != n || g.cols() != n {
        return Err(Error::Dimension(format!("{spec} points are {n}x{n}, got {}x{}", g.rows(), g.cols())));
    }
    let id = CMatrix::identity(n);
    let unitarity = (&g.adjoint() * g).max_abs_diff(&id);
    let g_inv = inverse(g).ok();
    let theta = spec.involution().apply(g);
    let theta_inverse = g_inv.as_ref().map_or(f64::INFINITY, |gi| theta.max_abs_diff(gi));
    let det_one = (det(g) - ONE).norm();
    let family_condition = match spec.group() {
        Group::Special => None,
        Group::Orthogonal => Some(g_inv.as_ref().map_or(f64::INFINITY, |gi| antitranspose(g).max_abs_diff(gi))),
        Group::Symplectic => Some(g_inv.as_ref().map_or(f64::INFINITY, |gi| symplectic_tau(gi).max_abs_diff(g))),
    };
    Ok(ImageReport { unitarity, theta_inverse, det_one, family_condition })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{leading_block, C64, ZERO};
    use crate::sample::{random_skew_hermitian, random_tangent, rng_from_seed};
    use crate::space::{specs_with_ambient, Coordinates};

    #[test]
    fn cayley_of_zero_is_identity() {
        assert_eq!(cayley(&CMatrix::zeros(4, 4)).unwrap(), CMatrix::identity(4));
        assert_eq!(cayley_inverse(&CMatrix::identity(4)).unwrap(), CMatrix::zeros(4, 4));
    }

    #[test]
    fn cayley_of_rotation_generator() {
        let x = CMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let g = cayley(&x).unwrap();
        let expected = CMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert!(g.max_abs_diff(&expected) < 1e-15);
        assert!(cayley_inverse(&g).unwrap().max_abs_diff(&x) < 1e-15);
    }

    #[test]
    fn s2_leading_minor() {
        // |z|^2 = 1/3 gives det g[1] = (1 - 1/3) / (1 + 1/3) = 1/2
        let z = C64::from_polar((1.0f64 / 3.0).sqrt(), 0.9);
        let x = CMatrix::from_rows(vec![vec![ZERO, z], vec![-z.conj(), ZERO]]).unwrap();
        let g = cayley(&x).unwrap();
        assert!((det(&leading_block(&g, 1)) - C64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn minus_identity_is_outside_the_domain() {
        let g = CMatrix::identity(3).scale_real(-1.0);
        assert!(matches!(cayley_inverse(&g), Err(Error::Domain(_))));
    }

    #[test]
    fn round_trip_on_aiii() {
        let spec = SpaceSpec::aiii(3, 3).unwrap();
        let mut rng = rng_from_seed(3);
        for _ in 0..20 {
            let (_, x) = random_tangent(&spec, &mut rng, 0.7);
            let back = cayley_inverse(&cayley(&x).unwrap()).unwrap();
            assert!(back.max_abs_diff(&x) < 1e-9);
        }
    }

    #[test]
    fn round_trip_on_generic_skew_hermitian() {
        let mut rng = rng_from_seed(4);
        for n in 1..8 {
            let x = random_skew_hermitian(&mut rng, n, 2.0);
            let g = cayley(&x).unwrap();
            assert!((&g.adjoint() * &g).max_abs_diff(&CMatrix::identity(n)) < 1e-10);
            assert!(cayley_inverse(&g).unwrap().max_abs_diff(&x) < 1e-9);
        }
    }

    #[test]
    fn image_membership_across_families() {
        let mut rng = rng_from_seed(5);
        for spec in specs_with_ambient(2..=8) {
            for _ in 0..10 {
                let (_, x) = random_tangent(&spec, &mut rng, 0.7);
                let report = verify_image(&spec, &cayley(&x).unwrap()).unwrap();
                assert!(report.passes(1e-9), "{spec}: {report:?}");
            }
        }
    }

    #[test]
    fn identity_passes_and_nonunitary_fails() {
        for spec in specs_with_ambient(2..=6) {
            let id = CMatrix::identity(spec.ambient());
            assert!(verify_image(&spec, &id).unwrap().passes(1e-14));
        }
        let spec = SpaceSpec::aiii(1, 1).unwrap();
        let g = CMatrix::from_real_rows(&[&[2.0, 0.0], &[0.0, 0.5]]);
        let report = verify_image(&spec, &g).unwrap();
        assert!(!report.passes(1e-9));
        assert!(report.unitarity > 1.0);
    }

    #[test]
    fn theta_of_image_is_inverse() {
        let mut rng = rng_from_seed(6);
        for spec in specs_with_ambient(3..=7) {
            let coords = Coordinates::random(&spec, &mut rng, 0.7);
            let x = crate::space::build_tangent(&spec, &coords).unwrap();
            let g = cayley(&x).unwrap();
            let theta_g = spec.involution().apply(&g);
            assert!(theta_g.max_abs_diff(&inverse(&g).unwrap()) < 1e-10, "{spec}");
        }
    }
}
