//! Standard versus antidiagonal representations of the orthogonal and
//! symplectic Lie algebras.
//!
//! The antidiagonal forms are the ones whose involutions preserve the
//! triangular decomposition. The orthogonal conjugator is
//! `P = (J + i) / sqrt(2)`, with `P^2 = iJ`. For the symplectic case the
//! standard involution is `X -> -Omega X^t Omega^-1`, `Omega = [[0, 1], [-1, 0]]`,
//! and the conjugator is the real orthogonal `P = diag(1_n, -J_n)`, which
//! satisfies `P Omega P^t = I_{n,n} J`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{antitranspose, exchange, rank, CMatrix, C64, ONE, ZERO};
use crate::sample::{disc_matrix, rng_from_seed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RepInvolution {
    /// `A -> -A^t`.
    Standard,
    /// `A -> -A^tau`.
    Antidiagonal,
    /// `A -> Ad(I_{n,n})(-A^tau)` on `2n x 2n` matrices.
    SymplecticAntidiagonal,
    /// `A -> -Omega A^t Omega^-1` on `2n x 2n` matrices.
    SymplecticStandard,
}

impl RepInvolution {
    pub fn apply(self, a: &CMatrix) -> CMatrix {
        match self {
            RepInvolution::Standard => -&a.transpose(),
            RepInvolution::Antidiagonal => -&antitranspose(a),
            RepInvolution::SymplecticAntidiagonal => {
                let h = a.rows() / 2;
                let t = antitranspose(a);
                CMatrix::from_fn(a.rows(), a.cols(), |i, j| if (i < h) == (j < h) { -t.get(i, j) } else { t.get(i, j) })
            }
            RepInvolution::SymplecticStandard => {
                // Omega A^t Omega^-1 in blocks: [[D^t, -B^t], [-C^t, A^t]] for A = [[A, B], [C, D]]
                let h = a.rows() / 2;
                let t = a.transpose();
                CMatrix::from_fn(a.rows(), a.cols(), |i, j| {
                    let (si, sj) = ((i + h) % (2 * h), (j + h) % (2 * h));
                    let v = t.get(si, sj);
                    if (i < h) == (j < h) {
                        -v
                    } else {
                        v
                    }
                })
            }
        }
    }
}

/// `Omega = [[0, 1_n], [-1_n, 0]]`.
pub fn symplectic_form(n: usize) -> CMatrix {
    CMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if j == i + n {
            ONE
        } else if i == j + n {
            -ONE
        } else {
            ZERO
        }
    })
}

/// `P = (J + i 1) / sqrt(2)`.
pub fn conjugator(n: usize) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::Argument("conjugator size must be at least 1".into()));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut p = exchange(n).scale_real(s);
    for i in 0..n {
        let v = p.get(i, i) + C64::new(0.0, s);
        p.set(i, i, v);
    }
    Ok(p)
}

/// `diag(1_n, -J_n)`.
pub fn symplectic_conjugator(n: usize) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::Argument("conjugator size must be at least 1".into()));
    }
    Ok(CMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if i < n && i == j {
            ONE
        } else if i >= n && j >= n && i - n + j - n == n - 1 {
            -ONE
        } else {
            ZERO
        }
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugacyReport {
    pub n: usize,
    pub samples: usize,
    /// `max |P P* - 1|`.
    pub conjugator_unitarity: f64,
    /// `max |Theta_1(A) - P Theta_0(P^-1 A P) P^-1|` over the samples.
    pub max_conjugacy_dev: f64,
    /// `max |Theta_1(P A P^-1) - P A P^-1|` over real skew-symmetric `A`.
    pub max_fixed_transport_dev: f64,
    pub symplectic_max_conjugacy_dev: f64,
    pub symplectic_max_fixed_transport_dev: f64,
    /// All four involutions square to the identity with exact equality.
    pub involutive_exact: bool,
    pub fixed_rank: usize,
    pub expected_fixed_rank: usize,
    /// `Theta_1` maps strictly upper, diagonal and strictly lower parts into themselves.
    pub triangular_split: bool,
}

impl ConjugacyReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.conjugator_unitarity <= tol
            && self.max_conjugacy_dev <= tol
            && self.max_fixed_transport_dev <= tol
            && self.symplectic_max_conjugacy_dev <= tol
            && self.symplectic_max_fixed_transport_dev <= tol
            && self.involutive_exact
            && self.fixed_rank == self.expected_fixed_rank
            && self.triangular_split
    }
}

fn conjugacy_dev(theta1: RepInvolution, theta0: RepInvolution, p: &CMatrix, p_inv: &CMatrix, a: &CMatrix) -> f64 {
    let lhs = theta1.apply(a);
    let rhs = &(p * &theta0.apply(&(&(p_inv * a) * p))) * p_inv;
    lhs.max_abs_diff(&rhs)
}

fn fixed_transport_dev(theta1: RepInvolution, p: &CMatrix, p_inv: &CMatrix, a: &CMatrix) -> f64 {
    let moved = &(p * a) * p_inv;
    theta1.apply(&moved).max_abs_diff(&moved)
}

/// Support of the strictly upper, diagonal and strictly lower parts.
fn split_preserved(theta: RepInvolution, a: &CMatrix) -> bool {
    let n = a.rows();
    let parts = [
        CMatrix::from_fn(n, n, |i, j| if i < j { a.get(i, j) } else { ZERO }),
        CMatrix::from_fn(n, n, |i, j| if i == j { a.get(i, j) } else { ZERO }),
        CMatrix::from_fn(n, n, |i, j| if i > j { a.get(i, j) } else { ZERO }),
    ];
    let inside: [fn(usize, usize) -> bool; 3] = [|i, j| i < j, |i, j| i == j, |i, j| i > j];
    parts.iter().zip(inside).all(|(part, keep)| {
        let image = theta.apply(part);
        (0..n).all(|i| (0..n).all(|j| keep(i, j) || image.get(i, j) == ZERO))
    })
}

/// Checks `Theta_1 = Ad_P o Theta_0 o Ad_P^-1` on random samples, for both
/// the orthogonal algebra at size `n` and the symplectic algebra at size `2n`.
pub fn verify_conjugacy(n: usize, samples: usize, seed: u64) -> Result<ConjugacyReport> {
    let p = conjugator(n)?;
    let p_inv = p.adjoint();
    let sp = symplectic_conjugator(n)?;
    let sp_inv = sp.transpose();
    let mut rng = rng_from_seed(seed);
    let mut report = ConjugacyReport {
        n,
        samples,
        conjugator_unitarity: (&p * &p_inv).max_abs_diff(&CMatrix::identity(n)),
        max_conjugacy_dev: 0.0,
        max_fixed_transport_dev: 0.0,
        symplectic_max_conjugacy_dev: 0.0,
        symplectic_max_fixed_transport_dev: 0.0,
        involutive_exact: true,
        fixed_rank: 0,
        expected_fixed_rank: n * (n - 1) / 2,
        triangular_split: true,
    };
    use RepInvolution::*;
    for _ in 0..samples {
        let a = disc_matrix(&mut rng, n, n, 1.0);
        report.max_conjugacy_dev = report.max_conjugacy_dev.max(conjugacy_dev(Antidiagonal, Standard, &p, &p_inv, &a));

        let r = disc_matrix(&mut rng, n, n, 1.0);
        let skew = CMatrix::from_fn(n, n, |i, j| C64::new(r.get(i, j).re - r.get(j, i).re, 0.0));
        report.max_fixed_transport_dev = report.max_fixed_transport_dev.max(fixed_transport_dev(Antidiagonal, &p, &p_inv, &skew));

        let b = disc_matrix(&mut rng, 2 * n, 2 * n, 1.0);
        report.symplectic_max_conjugacy_dev = report
            .symplectic_max_conjugacy_dev
            .max(conjugacy_dev(SymplecticAntidiagonal, SymplecticStandard, &sp, &sp_inv, &b));

        // Omega S with S symmetric is fixed by the standard symplectic involution
        let s = disc_matrix(&mut rng, 2 * n, 2 * n, 1.0);
        let hamiltonian = &symplectic_form(n) * &(&s + &s.transpose());
        report.symplectic_max_fixed_transport_dev = report
            .symplectic_max_fixed_transport_dev
            .max(fixed_transport_dev(SymplecticAntidiagonal, &sp, &sp_inv, &hamiltonian));

        report.involutive_exact &= [Standard, Antidiagonal].iter().all(|t| t.apply(&t.apply(&a)) == a)
            && [SymplecticAntidiagonal, SymplecticStandard].iter().all(|t| t.apply(&t.apply(&b)) == b);
        report.triangular_split &= split_preserved(Antidiagonal, &a) && split_preserved(SymplecticAntidiagonal, &b);
    }
    report.fixed_rank = fixed_space_rank(n, seed ^ 0x5eed)?;
    Ok(report)
}

/// Rank of `{(A + Theta_1 A) / 2}` over `n^2` random `A`, flattened.
pub fn fixed_space_rank(n: usize, seed: u64) -> Result<usize> {
    if n == 0 {
        return Err(Error::Argument("size must be at least 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let count = n * n;
    let mut rows = Vec::with_capacity(count);
    for _ in 0..count {
        let a = disc_matrix(&mut rng, n, n, 1.0);
        let fixed = (&a + &RepInvolution::Antidiagonal.apply(&a)).scale_real(0.5);
        rows.push(fixed.row_major().to_vec());
    }
    Ok(rank(&CMatrix::from_rows(rows)?, 1e-10))
}
