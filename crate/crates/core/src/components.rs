//! Sign-vector representatives of the connected components of the generic
//! stratum, witness tangents converging to them, and the limit check.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::bruhat::d_via_cayley;
use crate::error::{Error, Result};
use crate::linalg::{antitranspose, det, submatrix, CMatrix, IndexSet, C64, ONE, ZERO};
use crate::space::{structural_support, symplectic_tau, validate_tangent, Group, SpaceSpec};

/// Default `t` grid for [`limit_check`].
pub const DEFAULT_T_GRID: [f64; 3] = [10.0, 100.0, 1000.0];

/// Final deviation at or below which a witness counts as converged.
pub const LIMIT_TOL: f64 = 1e-3;

/// A diagonal `w` with entries `+-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentRep {
    pub signs: Vec<i8>,
    pub alpha_w: IndexSet,
    pub spec: SpaceSpec,
}

impl ComponentRep {
    /// Builds a representative from its `-1` positions (0-based).
    fn from_negative(spec: &SpaceSpec, negative: &[usize]) -> Self {
        let n = spec.ambient();
        let mut signs = vec![1i8; n];
        for &i in negative {
            signs[i] = -1;
        }
        Self::from_signs(spec, signs).expect("negative positions are in range")
    }

    pub fn from_signs(spec: &SpaceSpec, signs: Vec<i8>) -> Result<Self> {
        let n = spec.ambient();
        if signs.len() != n {
            return Err(Error::Dimension(format!("{spec} sign vectors have length {n}, got {}", signs.len())));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Argument("signs must be +1 or -1".into()));
        }
        let alpha = IndexSet::new((1..=n).filter(|&i| signs[i - 1] == -1).collect(), n)?;
        Ok(Self { signs, alpha_w: alpha, spec: *spec })
    }

    pub fn parse(spec: &SpaceSpec, s: &str) -> Result<Self> {
        let signs = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(Error::Argument(format!("unexpected sign character {other:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::from_signs(spec, signs)
    }

    pub fn is_identity(&self) -> bool {
        self.alpha_w.is_empty()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        self.signs.iter().map(|&s| C64::new(s as f64, 0.0)).collect()
    }

    /// Whether the signs satisfy the component rule of the family.
    pub fn satisfies_family_rule(&self) -> bool {
        satisfies_rule(&self.spec, &self.signs)
    }

    pub fn to_json(&self) -> Value {
        json!({ "signs": self.to_string(), "alpha_w": self.alpha_w.indices() })
    }
}

impl fmt::Display for ComponentRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.signs {
            f.write_str(if s < 0 { "-" } else { "+" })?;
        }
        Ok(())
    }
}

fn count_negative(signs: &[i8]) -> usize {
    signs.iter().filter(|&&s| s < 0).count()
}

fn tau_symmetric(signs: &[i8]) -> bool {
    signs.iter().eq(signs.iter().rev())
}

/// Family rules stated on full sign vectors.
fn satisfies_rule(spec: &SpaceSpec, signs: &[i8]) -> bool {
    let n = signs.len();
    if n != spec.ambient() {
        return false;
    }
    match *spec {
        SpaceSpec::Aiii { m, .. } => count_negative(&signs[..m]) == count_negative(&signs[m..]),
        SpaceSpec::Diii { n: h } => {
            tau_symmetric(signs) && count_negative(&signs[..h]).is_multiple_of(2) && count_negative(&signs[h..]).is_multiple_of(2)
        }
        SpaceSpec::Ci { .. } => tau_symmetric(signs),
        SpaceSpec::Cii { p, q } => {
            let (outer, center) = split_outer_center(signs, p, 2 * q);
            tau_symmetric(signs) && outer == center && outer % 2 == 0
        }
        SpaceSpec::BdiEven { p, q } => {
            let (outer, center) = split_outer_center(signs, p / 2, q);
            let middle_ok = q % 2 == 0 || signs[n / 2] == 1;
            tau_symmetric(signs) && middle_ok && outer == center && outer % 2 == 0
        }
        SpaceSpec::BdiOddOdd { p, .. } => {
            let (c1, c2) = spec.middle_pair().expect("outer layout has a middle pair");
            let a = (p - 1) / 2;
            let outer = count_negative(&signs[..a]) + count_negative(&signs[n - a..]);
            let center = (a..n - a).filter(|&i| i != c1 && i != c2 && signs[i] < 0).count();
            tau_symmetric(signs) && signs[c1] == 1 && signs[c2] == 1 && outer == center && outer.is_multiple_of(2)
        }
    }
}

fn split_outer_center(signs: &[i8], outer_len: usize, center_len: usize) -> (usize, usize) {
    let outer = count_negative(&signs[..outer_len]) + count_negative(&signs[outer_len + center_len..]);
    let center = count_negative(&signs[outer_len..outer_len + center_len]);
    (outer, center)
}

/// All `l`-subsets of `range` as 0-based index lists.
fn choose(range: std::ops::Range<usize>, l: usize) -> Vec<Vec<usize>> {
    let start = range.start;
    let len = range.len();
    if l > len {
        return Vec::new();
    }
    IndexSet::combinations(l, len).map(|s| s.indices().iter().map(|&i| start + i - 1).collect()).collect()
}

/// Negative positions in the first half, mirrored across the antidiagonal.
fn mirrored(n: usize, half: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = half.iter().flat_map(|&i| [i, n - 1 - i]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Pairs of equal-size choices from two ranges.
fn balanced(a: std::ops::Range<usize>, b: std::ops::Range<usize>) -> Vec<Vec<usize>> {
    let max = a.len().min(b.len());
    let mut out = Vec::new();
    for l in 0..=max {
        for x in choose(a.clone(), l) {
            for y in choose(b.clone(), l) {
                out.push(x.iter().chain(&y).copied().collect());
            }
        }
    }
    out
}

/// Representatives in graded lexicographic order on `alpha_w`; the identity is first.
pub fn enumerate_components(spec: &SpaceSpec) -> Vec<ComponentRep> {
    let n = spec.ambient();
    let negatives: Vec<Vec<usize>> = match *spec {
        SpaceSpec::Aiii { m, .. } => balanced(0..m, m..n),
        SpaceSpec::Diii { n: h } => (0..=h).step_by(2).flat_map(|l| choose(0..h, l)).map(|s| mirrored(n, &s)).collect(),
        SpaceSpec::Ci { n: h } => (0..=h).flat_map(|l| choose(0..h, l)).map(|s| mirrored(n, &s)).collect(),
        SpaceSpec::Cii { p, q } => balanced(0..p, p..p + q).into_iter().map(|s| mirrored(n, &s)).collect(),
        SpaceSpec::BdiEven { p, q } => {
            let a = p / 2;
            balanced(0..a, a..a + q / 2).into_iter().map(|s| mirrored(n, &s)).collect()
        }
        SpaceSpec::BdiOddOdd { p, q } => {
            let (a, b) = ((p - 1) / 2, (q - 1) / 2);
            balanced(0..a, a..a + b).into_iter().map(|s| mirrored(n, &s)).collect()
        }
    };
    let mut reps: Vec<ComponentRep> = negatives.iter().map(|neg| ComponentRep::from_negative(spec, neg)).collect();
    reps.sort_by(|x, y| {
        (x.alpha_w.len(), x.alpha_w.indices()).cmp(&(y.alpha_w.len(), y.alpha_w.indices()))
    });
    reps.dedup();
    reps
}

/// Brute-force filter of all `2^N` sign vectors by the family rule.
pub fn enumerate_by_filter(spec: &SpaceSpec) -> Result<Vec<ComponentRep>> {
    let n = spec.ambient();
    if n > 20 {
        return Err(Error::Capacity { n, cap: 20 });
    }
    let mut reps = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let signs: Vec<i8> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        if satisfies_rule(spec, &signs) {
            reps.push(ComponentRep::from_signs(spec, signs)?);
        }
    }
    reps.sort_by(|x, y| {
        (x.alpha_w.len(), x.alpha_w.indices()).cmp(&(y.alpha_w.len(), y.alpha_w.indices()))
    });
    Ok(reps)
}

/// Orthogonal projection of an arbitrary matrix onto `i p`: the average over
/// the group generated by `Y -> -Y*`, `Y -> -theta(Y)` and the family `tau` map.
pub fn project_tangent(spec: &SpaceSpec, y: &CMatrix) -> Result<CMatrix> {
    let n = spec.ambient();
    if y.rows() != n || y.cols() != n {
        return Err(Error::Dimension(format!("{spec} tangents are {n}x{n}")));
    }
    let skew = (y - &y.adjoint()).scale_real(0.5);
    let theta = spec.involution();
    let odd = (&skew - &theta.apply(&skew)).scale_real(0.5);
    Ok(match spec.group() {
        Group::Special => odd,
        Group::Orthogonal => (&odd - &antitranspose(&odd)).scale_real(0.5),
        Group::Symplectic => (&odd - &symplectic_tau(&odd)).scale_real(0.5),
    })
}

fn reflected(n: usize, (i, j): (usize, usize)) -> (usize, usize) {
    (n - 1 - j, n - 1 - i)
}

/// Whether `(i, j)` may be chosen given the remaining indices.
fn admissible(spec: &SpaceSpec, support: &[Vec<bool>], remaining: &[usize], i: usize, j: usize) -> bool {
    if i == j || !support[i][j] || !remaining.contains(&j) {
        return false;
    }
    if spec.group() == Group::Special {
        return true;
    }
    let n = spec.ambient();
    let (ri, rj) = reflected(n, (i, j));
    let (lo, hi) = (ri.min(rj), ri.max(rj));
    if (lo, hi) == (i.min(j), i.max(j)) {
        return true;
    }
    [lo, hi].iter().all(|r| *r != i && *r != j && remaining.contains(r))
}

fn remove_pair(spec: &SpaceSpec, remaining: &[usize], i: usize, j: usize) -> Vec<usize> {
    let mut gone = vec![i, j];
    if spec.group() != Group::Special {
        let (ri, rj) = reflected(spec.ambient(), (i, j));
        gone.extend([ri, rj]);
    }
    remaining.iter().copied().filter(|r| !gone.contains(r)).collect()
}

/// Depth-first search over pairings; candidates for the smallest index are
/// tried from the largest admissible partner down. With `all` false the first
/// complete pairing is returned.
fn pairings(
    spec: &SpaceSpec,
    support: &[Vec<bool>],
    remaining: Vec<usize>,
    chosen: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
    all: bool,
) {
    let Some(&i) = remaining.first() else {
        out.push(chosen.clone());
        return;
    };
    for &j in remaining.iter().rev() {
        if !admissible(spec, support, &remaining, i, j) {
            continue;
        }
        chosen.push((i, j));
        pairings(spec, support, remove_pair(spec, &remaining, i, j), chosen, out, all);
        chosen.pop();
        if !all && !out.is_empty() {
            return;
        }
    }
}

fn witness_from_pairs(spec: &SpaceSpec, pairs: &[(usize, usize)]) -> Result<CMatrix> {
    let n = spec.ambient();
    let mut y = CMatrix::zeros(n, n);
    for &(i, j) in pairs {
        y.set(i, j, ONE);
        y.set(j, i, -ONE);
    }
    let x = project_tangent(spec, &y)?;
    let scale = x.max_abs();
    if scale == 0.0 {
        return Err(Error::Internal("pairing projects to zero".into()));
    }
    Ok(x.scale_real(1.0 / scale))
}

fn check_witness(rep: &ComponentRep, x: &CMatrix) -> bool {
    let alpha = &rep.alpha_w;
    let minor_ok = submatrix(x, alpha, alpha).map(|m| det(&m).norm() >= 1.0 - 1e-12).unwrap_or(false);
    let tangent_ok = validate_tangent(&rep.spec, x).map(|r| r.passes(1e-14)).unwrap_or(false);
    let support_ok = (0..x.rows()).all(|i| {
        (0..x.cols()).all(|j| x.get(i, j) == ZERO || (alpha.contains(i + 1) && alpha.contains(j + 1)))
    });
    minor_ok && tangent_ok && support_ok
}

/// Witness tangent `X` with `d(Phi(tX)) -> w`: supported on `alpha_w x alpha_w`,
/// entries in `{0, +-1, +-i}`, `|det X[alpha_w, alpha_w]| >= 1`. The identity gives `X = 0`.
pub fn construct_witness(rep: &ComponentRep) -> Result<CMatrix> {
    let n = rep.spec.ambient();
    if rep.is_identity() {
        return Ok(CMatrix::zeros(n, n));
    }
    let support = structural_support(&rep.spec);
    let remaining: Vec<usize> = rep.alpha_w.indices().iter().map(|i| i - 1).collect();
    // greedy first; the search backtracks only when the greedy choice dead-ends
    let mut found = Vec::new();
    pairings(&rep.spec, &support, remaining.clone(), &mut Vec::new(), &mut found, false);
    if let Some(pairs) = found.first() {
        let x = witness_from_pairs(&rep.spec, pairs)?;
        if check_witness(rep, &x) {
            return Ok(x);
        }
    }
    let mut all = Vec::new();
    pairings(&rep.spec, &support, remaining, &mut Vec::new(), &mut all, true);
    for pairs in &all {
        let x = witness_from_pairs(&rep.spec, pairs)?;
        if check_witness(rep, &x) {
            return Ok(x);
        }
    }
    Err(Error::Internal(format!("no valid pairing for {rep} in {}", rep.spec)))
}

/// Every valid pairing's witness, deduplicated; intended for small `N`.
pub fn all_witnesses(rep: &ComponentRep) -> Result<Vec<CMatrix>> {
    let n = rep.spec.ambient();
    if n > 10 {
        return Err(Error::Capacity { n, cap: 10 });
    }
    if rep.is_identity() {
        return Ok(vec![CMatrix::zeros(n, n)]);
    }
    let support = structural_support(&rep.spec);
    let remaining: Vec<usize> = rep.alpha_w.indices().iter().map(|i| i - 1).collect();
    let mut all = Vec::new();
    pairings(&rep.spec, &support, remaining, &mut Vec::new(), &mut all, true);
    let mut out: Vec<CMatrix> = Vec::new();
    for pairs in &all {
        let x = witness_from_pairs(&rep.spec, pairs)?;
        if check_witness(rep, &x) && !out.contains(&x) {
            out.push(x);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitPoint {
    pub t: f64,
    /// `max_k |d_kk(tX) - w_kk|`, absent when `tX` is not generic.
    pub deviation: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    pub signs: String,
    pub points: Vec<LimitPoint>,
    pub monotone: bool,
    pub final_deviation: Option<f64>,
    pub converged: bool,
}

impl LimitReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("limit report is serializable")
    }
}

/// Evaluates `d(Phi(tX))` along `t_grid` and compares with `w`.
pub fn limit_check(rep: &ComponentRep, x: &CMatrix, t_grid: &[f64]) -> Result<LimitReport> {
    let n = rep.spec.ambient();
    if x.rows() != n || x.cols() != n {
        return Err(Error::Dimension(format!("{} tangents are {n}x{n}", rep.spec)));
    }
    if t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Argument("t grid must be increasing".into()));
    }
    let target = rep.diagonal();
    let mut points = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let deviation = match d_via_cayley(&x.scale_real(t)) {
            Ok(r) => Some(r.entries.iter().zip(&target).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)),
            Err(Error::NonGeneric { .. }) => None,
            Err(e) => return Err(e),
        };
        points.push(LimitPoint { t, deviation });
    }
    let devs: Vec<f64> = points.iter().filter_map(|p| p.deviation).collect();
    let monotone = devs.windows(2).all(|w| w[1] <= w[0]);
    let final_deviation = devs.last().copied();
    let converged = final_deviation.is_some_and(|d| d <= LIMIT_TOL);
    Ok(LimitReport { signs: rep.to_string(), points, monotone, final_deviation, converged })
}

/// [`construct_witness`] followed by [`limit_check`] on the default grid.
pub fn check_rep(rep: &ComponentRep) -> Result<LimitReport> {
    let x = construct_witness(rep)?;
    limit_check(rep, &x, &DEFAULT_T_GRID)
}
