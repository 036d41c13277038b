//! LDU factorization and the diagonal `d(g)` of generic elements.
//!
//! Five routes compute the same diagonal:
//!
//! * [`ldu`]: unpivoted Gaussian elimination on `g`;
//! * [`d_via_minors`]: ratios of leading principal minors `det g[k] / det g[k-1]`;
//! * [`d_via_cayley`]: ratios `det(1 + I_k X) / det(1 + I_{k-1} X)` for `g = Phi(X)`;
//! * [`d_via_fredholm`]: the same ratios with every determinant expanded as a sum
//!   of principal minors of `I_k X`;
//! * [`d_via_coroots`]: products of `det(1 + I_k X) / det(1 + X)` raised to coroot
//!   exponents.
//!
//! Non-generic inputs fail with [`Error::NonGeneric`] carrying the first bad `k`.

use serde::Serialize;
use serde_json::{json, Value};

use crate::cayley::cayley;
use crate::error::{Error, Result};
use crate::linalg::{
    det, flip_leading_rows, leading_block, principal_minor_expansion, rel_dev, submatrix, CMatrix, IndexSet, C64,
    DEFAULT_EXPANSION_CAP, ONE, ZERO,
};
use crate::space::{coroots, one_plus_flipped, CorootSystem, SpaceSpec};

/// Relative cutoff below which a minor counts as vanishing.
pub const GENERICITY_TOL: f64 = 1e-10;

/// Number of points on `t X, t in [0, 1]` used to continue a square root.
pub const BRANCH_PATH_POINTS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Gauss,
    MinorRatio,
    CayleyDet,
    Fredholm,
    CorootProduct,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Gauss => "gauss",
            Method::MinorRatio => "minor_ratio",
            Method::CayleyDet => "cayley_det",
            Method::Fredholm => "fredholm",
            Method::CorootProduct => "coroot_product",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gauss" => Ok(Method::Gauss),
            "minor_ratio" => Ok(Method::MinorRatio),
            "cayley_det" => Ok(Method::CayleyDet),
            "fredholm" => Ok(Method::Fredholm),
            "coroot_product" => Ok(Method::CorootProduct),
            other => Err(Error::Argument(format!("unknown method {other:?}"))),
        }
    }
}

/// `g = L D U` with `L` unit lower triangular, `D` diagonal, `U` unit upper triangular.
#[derive(Clone, Debug)]
pub struct LduFactorization {
    pub l: CMatrix,
    pub d: CMatrix,
    pub u: CMatrix,
}

impl LduFactorization {
    pub fn product(&self) -> CMatrix {
        &(&self.l * &self.d) * &self.u
    }

    pub fn to_json(&self) -> Value {
        json!({ "L": self.l.to_json(), "D": self.d.to_json(), "U": self.u.to_json() })
    }
}

/// Side diagnostics that are not part of the report's JSON form.
#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    /// `min_k |minor_k| / scale_k`; small values mean the point is close to a
    /// lower Bruhat cell.
    pub min_relative_minor: f64,
    /// `max_k` relative deviation of `det(g[k]) det(1 + X)` from `det(1 + I_k X)`.
    pub minor_identity_max_dev: Option<f64>,
    /// Squares of the entries, reported when half-integer coroot exponents occur.
    pub squared_entries: Option<Vec<C64>>,
}

/// The diagonal `d(g)` as produced by one method.
#[derive(Clone, Debug)]
pub struct DiagonalReport {
    pub method: Method,
    pub entries: Vec<C64>,
    pub generic: Vec<bool>,
    pub product: C64,
    pub diagnostics: Diagnostics,
}

impl DiagonalReport {
    fn new(method: Method, entries: Vec<C64>, generic: Vec<bool>, diagnostics: Diagnostics) -> Self {
        let product = entries.iter().fold(ONE, |acc, z| acc * z);
        Self { method, entries, generic, product, diagnostics }
    }

    /// `{"method", "entries", "generic", "product"}`.
    pub fn to_json(&self) -> Value {
        json!({
            "method": self.method.name(),
            "entries": self.entries.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            "generic": self.generic,
            "product": [self.product.re, self.product.im],
        })
    }

    /// Largest entrywise relative deviation from another report.
    pub fn max_rel_dev(&self, other: &DiagonalReport) -> f64 {
        if self.entries.len() != other.entries.len() {
            return f64::INFINITY;
        }
        self.entries.iter().zip(&other.entries).map(|(&a, &b)| rel_dev(a, b)).fold(0.0, f64::max)
    }
}

fn require_square(a: &CMatrix, what: &str) -> Result<()> {
    if a.is_square() && a.rows() > 0 {
        Ok(())
    } else {
        Err(Error::Dimension(format!("{what} needs a non-empty square matrix, got {}x{}", a.rows(), a.cols())))
    }
}

/// `1e-10 * (max |g_ij|)^k`.
fn minor_threshold(max_norm: f64, k: usize) -> f64 {
    GENERICITY_TOL * max_norm.powi(k as i32)
}

/// Unpivoted elimination; the leading minor `det g[k]` is the running product
/// of pivots and is checked at every step.
pub fn ldu(g: &CMatrix) -> Result<LduFactorization> {
    require_square(g, "LDU")?;
    let n = g.rows();
    let max_norm = g.max_abs();
    let mut w = g.clone();
    let mut l = CMatrix::identity(n);
    let mut u = CMatrix::identity(n);
    let mut d = CMatrix::zeros(n, n);
    let mut minor = ONE;
    for k in 0..n {
        let pivot = w.get(k, k);
        minor *= pivot;
        if minor.norm() <= minor_threshold(max_norm, k + 1) {
            return Err(Error::NonGeneric { k: k + 1, magnitude: minor.norm() });
        }
        d.set(k, k, pivot);
        for i in k + 1..n {
            l.set(i, k, w.get(i, k) / pivot);
        }
        for j in k + 1..n {
            u.set(k, j, w.get(k, j) / pivot);
        }
        for i in k + 1..n {
            let f = l.get(i, k);
            if f == ZERO {
                continue;
            }
            for j in k + 1..n {
                let v = w.get(i, j) - f * w.get(k, j);
                w.set(i, j, v);
            }
        }
    }
    Ok(LduFactorization { l, d, u })
}

/// `det g[k]` for `k = 1..=n`.
pub fn leading_minors(g: &CMatrix) -> Vec<C64> {
    (1..=g.rows()).map(|k| det(&leading_block(g, k))).collect()
}

/// Per-`k` flags `|det g[k]| > 1e-10 * (max |g_ij|)^k`.
pub fn genericity_point(g: &CMatrix) -> Vec<bool> {
    let m = g.max_abs();
    leading_minors(g).iter().enumerate().map(|(i, v)| v.norm() > minor_threshold(m, i + 1)).collect()
}

fn ratios(method: Method, minors: &[C64], scales: &[f64]) -> Result<DiagonalReport> {
    // minors[0] is the k = 0 term
    let mut generic = Vec::with_capacity(minors.len() - 1);
    let mut min_rel = f64::INFINITY;
    for k in 1..minors.len() {
        let rel = minors[k].norm() / scales[k];
        min_rel = min_rel.min(rel);
        generic.push(rel > GENERICITY_TOL);
    }
    if let Some(k) = generic.iter().position(|ok| !ok) {
        return Err(Error::NonGeneric { k: k + 1, magnitude: minors[k + 1].norm() });
    }
    let entries = (1..minors.len()).map(|k| minors[k] / minors[k - 1]).collect();
    Ok(DiagonalReport::new(method, entries, generic, Diagnostics { min_relative_minor: min_rel, ..Default::default() }))
}

/// Telescoping ratios of leading principal minors of `g`.
pub fn d_via_minors(g: &CMatrix) -> Result<DiagonalReport> {
    require_square(g, "minor ratios")?;
    let m = g.max_abs();
    let mut minors = vec![ONE];
    minors.extend(leading_minors(g));
    let scales: Vec<f64> = (0..minors.len()).map(|k| m.powi(k as i32)).collect();
    ratios(Method::MinorRatio, &minors, &scales)
}

/// The diagonal from [`ldu`], as a report.
pub fn d_via_ldu(g: &CMatrix) -> Result<DiagonalReport> {
    let f = ldu(g)?;
    let n = g.rows();
    let diag = Diagnostics { min_relative_minor: f64::NAN, ..Default::default() };
    Ok(DiagonalReport::new(Method::Gauss, f.d.diagonal(), vec![true; n], diag))
}

fn check_skew_hermitian(x: &CMatrix) -> Result<()> {
    require_square(x, "tangent input")?;
    let v = (x + &x.adjoint()).max_abs();
    if v > 1e-9 * (1.0 + x.max_abs()) {
        return Err(Error::Validation(format!("tangent input is not skew-Hermitian (|X + X*| = {v:e})")));
    }
    Ok(())
}

/// Hadamard bound `prod_i |row_i|` of `1 + I_k X`, the scale for genericity.
fn hadamard_scale(m: &CMatrix) -> f64 {
    m.row_norms().iter().product::<f64>().max(f64::MIN_POSITIVE)
}

/// `det(1 + I_k X)` for `k = 0..=N` and their Hadamard scales.
fn flipped_dets(x: &CMatrix) -> (Vec<C64>, Vec<f64>) {
    (0..=x.rows())
        .map(|k| {
            let m = one_plus_flipped(x, k);
            (det(&m), hadamard_scale(&m))
        })
        .unzip()
}

/// Per-`k` flags `|det(1 + I_k X)| > 1e-10 * prod_i |row_i(1 + I_k X)|`.
pub fn genericity_tangent(x: &CMatrix) -> Vec<bool> {
    let (dets, scales) = flipped_dets(x);
    (1..dets.len()).map(|k| dets[k].norm() / scales[k] > GENERICITY_TOL).collect()
}

/// `d_kk = det(1 + I_k X) / det(1 + I_{k-1} X)`; also records how well
/// `det(Phi(X)[k]) det(1 + X) = det(1 + I_k X)` holds.
pub fn d_via_cayley(x: &CMatrix) -> Result<DiagonalReport> {
    check_skew_hermitian(x)?;
    let (dets, scales) = flipped_dets(x);
    let mut report = ratios(Method::CayleyDet, &dets, &scales)?;
    report.diagnostics.minor_identity_max_dev = Some(minor_identity_deviation(x, &dets)?);
    Ok(report)
}

fn minor_identity_deviation(x: &CMatrix, dets: &[C64]) -> Result<f64> {
    let g = cayley(x)?;
    Ok(leading_minors(&g)
        .iter()
        .enumerate()
        .map(|(i, m)| rel_dev(m * dets[0], dets[i + 1]))
        .fold(0.0, f64::max))
}

/// `max_k` relative deviation of `det(Phi(X)[k]) det(1 + X)` from `det(1 + I_k X)`.
pub fn minor_identity_check(x: &CMatrix) -> Result<f64> {
    check_skew_hermitian(x)?;
    let (dets, _) = flipped_dets(x);
    minor_identity_deviation(x, &dets)
}

/// Same ratios as [`d_via_cayley`], with each determinant computed as the sum
/// of all principal minors of `I_k X`.
pub fn d_via_fredholm(x: &CMatrix, cap: usize) -> Result<DiagonalReport> {
    require_square(x, "Fredholm expansion")?;
    if x.rows() > cap {
        return Err(Error::Capacity { n: x.rows(), cap });
    }
    check_skew_hermitian(x)?;
    let mut dets = Vec::with_capacity(x.rows() + 1);
    let mut scales = Vec::with_capacity(x.rows() + 1);
    for k in 0..=x.rows() {
        dets.push(principal_minor_expansion(&flip_leading_rows(x, k), cap)?);
        scales.push(hadamard_scale(&one_plus_flipped(x, k)));
    }
    ratios(Method::Fredholm, &dets, &scales)
}

/// [`d_via_fredholm`] with the default cap of 10.
pub fn d_via_fredholm_default(x: &CMatrix) -> Result<DiagonalReport> {
    d_via_fredholm(x, DEFAULT_EXPANSION_CAP)
}

/// Coroot product formula for the family of `spec`.
pub fn d_via_coroots(spec: &SpaceSpec, x: &CMatrix) -> Result<DiagonalReport> {
    let n = spec.ambient();
    if x.rows() != n || x.cols() != n {
        return Err(Error::Dimension(format!("{spec} tangents are {n}x{n}, got {}x{}", x.rows(), x.cols())));
    }
    d_from_coroots(&coroots(spec), x)
}

/// Evaluates `prod_k (det(1 + I_k X) / det(1 + X))^{e_k}` for an arbitrary
/// coroot system. Half-integer exponents are resolved by continuing the square
/// root from `X = 0` along `t X`; the squares are always reported.
pub fn d_from_coroots(system: &CorootSystem, x: &CMatrix) -> Result<DiagonalReport> {
    check_skew_hermitian(x)?;
    let n = x.rows();
    let exps = system.ratio_exponents();
    if exps.iter().any(|(k, e)| *k > n || e.len() != n) {
        return Err(Error::Dimension("coroot system does not match the tangent size".into()));
    }
    let (dets, scales) = flipped_dets(x);
    let mut generic = vec![true; n];
    let mut min_rel = f64::INFINITY;
    for (k, _) in &exps {
        let rel = dets[*k].norm() / scales[*k];
        min_rel = min_rel.min(rel);
        if rel <= GENERICITY_TOL {
            generic[*k - 1] = false;
            return Err(Error::NonGeneric { k: *k, magnitude: dets[*k].norm() });
        }
    }
    let squares = squared_products(&exps, &dets);
    let half = (0..n).filter(|&j| exps.iter().any(|(_, e)| e[j] % 2 != 0)).collect::<Vec<_>>();
    let mut entries = Vec::with_capacity(n);
    for j in 0..n {
        if half.contains(&j) {
            entries.push(continued_root(&exps, x, j)?);
        } else {
            let v = exps.iter().fold(ONE, |acc, (k, e)| acc * (dets[*k] / dets[0]).powi(e[j] / 2));
            entries.push(v);
        }
    }
    let diagnostics = Diagnostics {
        min_relative_minor: min_rel,
        minor_identity_max_dev: None,
        squared_entries: if half.is_empty() { None } else { Some(squares) },
    };
    Ok(DiagonalReport::new(Method::CorootProduct, entries, generic, diagnostics))
}

fn squared_products(exps: &[(usize, Vec<i32>)], dets: &[C64]) -> Vec<C64> {
    let n = exps.first().map_or(0, |(_, e)| e.len());
    (0..n).map(|j| exps.iter().fold(ONE, |acc, (k, e)| acc * (dets[*k] / dets[0]).powi(e[j]))).collect()
}

/// Square root of the `j`-th squared entry, continued from 1 at `t = 0`.
fn continued_root(exps: &[(usize, Vec<i32>)], x: &CMatrix, j: usize) -> Result<C64> {
    let mut root = ONE;
    for step in 1..=BRANCH_PATH_POINTS {
        let t = step as f64 / BRANCH_PATH_POINTS as f64;
        let (dets, scales) = flipped_dets(&x.scale_real(t));
        if exps.iter().any(|(k, _)| dets[*k].norm() / scales[*k] <= GENERICITY_TOL) {
            return Err(Error::BranchAmbiguity { position: j + 1 });
        }
        let sq = squared_products(exps, &dets)[j];
        let r = sq.sqrt();
        let (near, far) = if (r - root).norm() <= (r + root).norm() { (r, -r) } else { (-r, r) };
        // neither branch is clearly closer: the path passed near zero
        if (near - root).norm() >= 0.5 * (far - root).norm() {
            return Err(Error::BranchAmbiguity { position: j + 1 });
        }
        root = near;
    }
    Ok(root)
}

/// Every term `det (I_k X)[alpha, alpha]` of the expansion of `det(1 + I_k X)`.
pub fn flipped_minor_terms(x: &CMatrix, k: usize, cap: usize) -> Result<Vec<(IndexSet, C64)>> {
    crate::linalg::principal_minor_terms(&flip_leading_rows(x, k), cap)
}

/// Term-by-term check of the AIII expansion of `det(1 + I_k X)` over square
/// submatrices of `Z`.
#[derive(Clone, Debug, Serialize)]
pub struct HermReport {
    /// Largest `|det (I_k X)[alpha, alpha]|` over index sets where
    /// `|alpha_m| != |alpha_hat_m|`; these must vanish.
    pub max_nonsquare_term: f64,
    /// Largest deviation of a square term from `(-1)^{|alpha_k|} det(W W*)`,
    /// `W = Z[alpha_m, alpha_hat_m]`.
    pub max_term_deviation: f64,
    /// Largest deviation of the signed sum from `det(1 + I_k X)`.
    pub max_sum_deviation: f64,
    pub terms_checked: usize,
}

impl HermReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_nonsquare_term <= tol && self.max_term_deviation <= tol && self.max_sum_deviation <= tol
    }
}

pub fn herm_expansion_check(spec: &SpaceSpec, x: &CMatrix) -> Result<HermReport> {
    let SpaceSpec::Aiii { m, n } = *spec else {
        return Err(Error::Argument(format!("the signed Z-expansion applies to AIII, not {spec}")));
    };
    let big_n = m + n;
    if x.rows() != big_n || x.cols() != big_n {
        return Err(Error::Dimension(format!("{spec} tangents are {big_n}x{big_n}")));
    }
    let z = submatrix(x, &IndexSet::leading(m, big_n), &IndexSet::new((m + 1..=big_n).collect(), big_n)?)?;
    let mut report = HermReport { max_nonsquare_term: 0.0, max_term_deviation: 0.0, max_sum_deviation: 0.0, terms_checked: 0 };
    for k in 0..=big_n {
        let terms = flipped_minor_terms(x, k, DEFAULT_EXPANSION_CAP.max(big_n))?;
        let mut signed_sum = ZERO;
        for (alpha, term) in &terms {
            report.terms_checked += 1;
            let top: Vec<usize> = alpha.indices().iter().copied().filter(|&i| i <= m).collect();
            let bottom: Vec<usize> = alpha.indices().iter().filter(|&&i| i > m).map(|i| i - m).collect();
            if top.len() != bottom.len() {
                report.max_nonsquare_term = report.max_nonsquare_term.max(term.norm());
                continue;
            }
            let w = submatrix(&z, &IndexSet::new(top, m)?, &IndexSet::new(bottom, n)?)?;
            let sign = if alpha.count_at_most(k) % 2 == 1 { -1.0 } else { 1.0 };
            let predicted = det(&(&w * &w.adjoint())) * sign;
            report.max_term_deviation = report.max_term_deviation.max((predicted - term).norm());
            signed_sum += predicted;
        }
        let direct = det(&one_plus_flipped(x, k));
        report.max_sum_deviation = report.max_sum_deviation.max(rel_dev(signed_sum, direct));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inverse;
    use crate::sample::{disc_matrix, random_tangent, rng_from_seed};
    use crate::space::{build_tangent, specs_with_ambient, Coordinates, TerminalRule};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn s2(z: C64) -> CMatrix {
        CMatrix::from_rows(vec![vec![ZERO, z], vec![-z.conj(), ZERO]]).unwrap()
    }

    #[test]
    fn ldu_of_identity() {
        let f = ldu(&CMatrix::identity(4)).unwrap();
        assert_eq!(f.l, CMatrix::identity(4));
        assert_eq!(f.d, CMatrix::identity(4));
        assert_eq!(f.u, CMatrix::identity(4));
    }

    #[test]
    fn ldu_rejects_rotation_at_step_one() {
        let g = CMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert!(matches!(ldu(&g), Err(Error::NonGeneric { k: 1, .. })));
        assert!(matches!(d_via_minors(&g), Err(Error::NonGeneric { k: 1, .. })));
    }

    #[test]
    fn ldu_reconstructs_random_matrix() {
        let mut rng = rng_from_seed(11);
        for _ in 0..20 {
            let g = disc_matrix(&mut rng, 6, 6, 1.0);
            let f = ldu(&g).unwrap();
            assert!(f.product().max_abs_diff(&g) <= 1e-9);
            for i in 0..6 {
                assert_eq!(f.l.get(i, i), ONE);
                assert_eq!(f.u.get(i, i), ONE);
                for j in i + 1..6 {
                    assert_eq!(f.l.get(i, j), ZERO);
                    assert_eq!(f.u.get(j, i), ZERO);
                    assert_eq!(f.d.get(i, j), ZERO);
                }
            }
            let minors = d_via_minors(&g).unwrap();
            for (a, b) in f.d.diagonal().iter().zip(&minors.entries) {
                assert!(rel_dev(*a, *b) < 1e-9);
            }
        }
    }

    #[test]
    fn minor_ratios_of_diagonals() {
        let d = d_via_minors(&CMatrix::identity(3)).unwrap();
        assert!(d.entries.iter().all(|&z| z == ONE));
        let (a, b) = (c(0.3, 0.4), c(-2.0, 1.0));
        let d = d_via_minors(&CMatrix::from_diag(&[a, b])).unwrap();
        assert!((d.entries[0] - a).norm() < 1e-15 && (d.entries[1] - b).norm() < 1e-15);
    }

    #[test]
    fn s2_diagonal_by_every_route() {
        let z = C64::from_polar((1.0f64 / 3.0).sqrt(), 0.4);
        let x = s2(z);
        let g = cayley(&x).unwrap();
        let expected = [c(0.5, 0.0), c(2.0, 0.0)];
        let spec = SpaceSpec::aiii(1, 1).unwrap();
        let reports = [
            d_via_ldu(&g).unwrap(),
            d_via_minors(&g).unwrap(),
            d_via_cayley(&x).unwrap(),
            d_via_fredholm_default(&x).unwrap(),
            d_via_coroots(&spec, &x).unwrap(),
        ];
        for r in &reports {
            for (got, want) in r.entries.iter().zip(&expected) {
                assert!((got - want).norm() < 1e-12, "{:?}: {got}", r.method);
            }
        }
    }

    #[test]
    fn zero_tangent_gives_ones() {
        for spec in specs_with_ambient(2..=6) {
            let x = CMatrix::zeros(spec.ambient(), spec.ambient());
            for r in [d_via_cayley(&x).unwrap(), d_via_fredholm_default(&x).unwrap(), d_via_coroots(&spec, &x).unwrap()] {
                assert!(r.entries.iter().all(|&z| (z - ONE).norm() < 1e-15));
            }
            assert!(genericity_tangent(&x).iter().all(|&b| b));
        }
    }

    #[test]
    fn cpn_closed_form() {
        let mut rng = rng_from_seed(12);
        for n in 1..=4 {
            let spec = SpaceSpec::aiii(1, n).unwrap();
            let (coords, x) = random_tangent(&spec, &mut rng, 0.5);
            let Coordinates::Aiii { z } = coords else { unreachable!() };
            let a: Vec<f64> = (0..n).map(|j| z.get(0, j).norm_sqr()).collect();
            // det(1 + I_k X) = 1 + sum_{i < k} |z_i|^2 - sum_{j >= k} |z_j|^2
            let big_d = |k: usize| -> f64 {
                if k == 0 {
                    1.0 + a.iter().sum::<f64>()
                } else {
                    1.0 + a[..k - 1].iter().sum::<f64>() - a[k - 1..].iter().sum::<f64>()
                }
            };
            let r = d_via_cayley(&x).unwrap();
            for k in 1..=n + 1 {
                let want = big_d(k) / big_d(k - 1);
                assert!(rel_dev(r.entries[k - 1], c(want, 0.0)) < 1e-10);
            }
        }
    }

    #[test]
    fn unit_modulus_is_not_generic() {
        let x = s2(ONE);
        // det(1 + I_1 X) = 1 - |z|^2 vanishes, det(1 - X) = 1 + |z|^2 does not
        assert_eq!(genericity_tangent(&x), vec![false, true]);
        assert!(matches!(d_via_cayley(&x), Err(Error::NonGeneric { k: 1, .. })));
        let g = cayley(&x).unwrap();
        assert!(!genericity_point(&g)[0]);
    }

    #[test]
    fn small_draws_are_generic() {
        let mut rng = rng_from_seed(13);
        for spec in specs_with_ambient(2..=8) {
            for _ in 0..5 {
                let (_, x) = random_tangent(&spec, &mut rng, 0.2);
                assert!(genericity_tangent(&x).iter().all(|&b| b), "{spec}");
            }
        }
    }

    #[test]
    fn all_routes_agree_across_families() {
        let mut rng = rng_from_seed(14);
        for spec in specs_with_ambient(2..=8) {
            for _ in 0..4 {
                let (_, x) = random_tangent(&spec, &mut rng, 0.7);
                let g = cayley(&x).unwrap();
                let reference = d_via_cayley(&x).unwrap();
                assert!(reference.diagnostics.minor_identity_max_dev.unwrap() < 1e-9);
                for other in [
                    d_via_ldu(&g).unwrap(),
                    d_via_minors(&g).unwrap(),
                    d_via_fredholm_default(&x).unwrap(),
                    d_via_coroots(&spec, &x).unwrap(),
                ] {
                    let dev = reference.max_rel_dev(&other);
                    assert!(dev < 1e-8, "{spec} {:?}: {dev:e}", other.method);
                }
                assert!(rel_dev(reference.product, ONE) < 1e-8, "{spec}");
            }
        }
    }

    #[test]
    fn fredholm_capacity() {
        let x = CMatrix::zeros(11, 11);
        assert!(matches!(d_via_fredholm_default(&x), Err(Error::Capacity { n: 11, cap: 10 })));
    }

    #[test]
    fn herm_sign_rule() {
        let mut rng = rng_from_seed(15);
        for (m, n) in [(1, 1), (1, 3), (2, 2), (2, 3), (3, 3), (2, 4)] {
            let spec = SpaceSpec::aiii(m, n).unwrap();
            let (_, x) = random_tangent(&spec, &mut rng, 0.7);
            let r = herm_expansion_check(&spec, &x).unwrap();
            assert!(r.passes(1e-12), "{spec}: {r:?}");
            assert_eq!(r.terms_checked, (m + n + 1) << (m + n));
        }
        let spec = SpaceSpec::aiii(2, 2).unwrap();
        let (_, x) = random_tangent(&spec, &mut rng, 0.7);
        // all non-square terms are exactly zero
        assert_eq!(herm_expansion_check(&spec, &x).unwrap().max_nonsquare_term, 0.0);
    }

    #[test]
    fn real_diagonals_and_antidiagonal_pairing() {
        let mut rng = rng_from_seed(16);
        for spec in specs_with_ambient(3..=8) {
            let (_, x) = random_tangent(&spec, &mut rng, 0.7);
            let d = d_via_cayley(&x).unwrap().entries;
            let n = d.len();
            if !matches!(spec, SpaceSpec::BdiOddOdd { .. }) {
                assert!(d.iter().all(|z| z.im.abs() < 1e-9 * z.norm()), "{spec}");
            }
            if spec.group() != crate::space::Group::Special {
                for k in 0..n {
                    assert!(((d[k] * d[n - 1 - k]).norm() - 1.0).abs() < 1e-9, "{spec}");
                }
            }
        }
    }

    #[test]
    fn half_exponents_follow_the_identity_branch() {
        // A synthetic system whose only ratio carries exponent 1/2 on the first
        // entry: d_1^2 = det(1 + I_1 X) / det(1 + X).
        let system = CorootSystem { vectors: vec![vec![1, -1]], terminal: TerminalRule::HalfLast };
        let z = c(0.3, 0.2);
        let x = s2(z);
        let r = d_from_coroots(&system, &x).unwrap();
        let sq = r.diagnostics.squared_entries.clone().unwrap();
        let want = (1.0 - z.norm_sqr()) / (1.0 + z.norm_sqr());
        assert!((sq[0] - c(want, 0.0)).norm() < 1e-14);
        assert!((r.entries[0] - c(want.sqrt(), 0.0)).norm() < 1e-14);
        assert!((r.entries[0] * r.entries[0] - sq[0]).norm() < 1e-14);

        // crossing |z| = 1 on the path is reported, not guessed
        let x = s2(c(1.5, 0.0));
        assert!(matches!(d_from_coroots(&system, &x), Err(Error::BranchAmbiguity { position: 1 })));
    }

    #[test]
    fn family_coroot_exponents_are_integral() {
        for spec in specs_with_ambient(2..=10) {
            for (_, e) in coroots(&spec).ratio_exponents() {
                assert!(e.iter().all(|v| v % 2 == 0), "{spec}");
            }
        }
    }

    #[test]
    fn report_json_shape() {
        let x = s2(c(0.5, 0.0));
        let v = d_via_cayley(&x).unwrap().to_json();
        assert_eq!(v["method"], "cayley_det");
        assert_eq!(v["entries"].as_array().unwrap().len(), 2);
        assert_eq!(v["generic"], serde_json::json!([true, true]));
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys.len(), 4);
    }

    #[test]
    fn non_skew_input_rejected() {
        assert!(matches!(d_via_cayley(&CMatrix::identity(2)), Err(Error::Validation(_))));
    }

    #[test]
    fn minors_independent_of_inverse() {
        // det(g[k]) via the inverse route: det g[k] = det g * det (g^-1)[k+1..n]
        let spec = SpaceSpec::cii(1, 1).unwrap();
        let mut rng = rng_from_seed(17);
        let coords = Coordinates::random(&spec, &mut rng, 0.7);
        let g = cayley(&build_tangent(&spec, &coords).unwrap()).unwrap();
        let gi = inverse(&g).unwrap();
        let n = g.rows();
        let minors = leading_minors(&g);
        for k in 1..n {
            let tail = IndexSet::new((k + 1..=n).collect(), n).unwrap();
            let via_inv = det(&g) * det(&submatrix(&gi, &tail, &tail).unwrap());
            assert!(rel_dev(minors[k - 1], via_inv) < 1e-10);
        }
    }
}
