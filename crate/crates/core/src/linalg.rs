//! Dense complex matrices and the determinant primitives used everywhere else.
//!
//! Storage is row-major and 0-based internally. Everything that names a row,
//! column or index set in the public API is 1-based: `IndexSet` holds values in
//! `1..=n`, `entry(i, j)` takes 1-based positions, and `I_k` flips the first `k`
//! rows.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest side length accepted by [`principal_minor_expansion`] by default.
pub const DEFAULT_EXPANSION_CAP: usize = 10;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix.
///
/// Most operations require a square matrix; rectangular matrices exist for
/// coordinate payloads and extracted blocks.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ONE);
        }
        m
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Builds a matrix from 0-based `(row, col)` positions.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("rows have unequal lengths".into()));
        }
        let data: Vec<C64> = rows.into_iter().flatten().collect();
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Argument("matrix entries must be finite".into()));
        }
        Ok(Self { rows: r, cols: c, data })
    }

    /// Convenience constructor from real-valued rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect()).collect(),
        )
        .expect("real rows must be rectangular and finite")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn n(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    /// Entry at 1-based `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        assert!(i >= 1 && i <= self.rows && j >= 1 && j <= self.cols, "entry ({i}, {j}) out of range");
        self.get(i - 1, j - 1)
    }

    /// Sets the entry at 1-based `(i, j)`.
    pub fn set_entry(&mut self, i: usize, j: usize, v: C64) {
        assert!(i >= 1 && i <= self.rows && j >= 1 && j <= self.cols, "entry ({i}, {j}) out of range");
        self.set(i - 1, j - 1, v);
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row_major(&self) -> &[C64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[C64]>::to_vec).collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(C64::conj).collect() }
    }

    /// Conjugate transpose `A*`.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise distance; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Position (1-based) and magnitude of the largest entry.
    pub fn argmax_abs(&self) -> ((usize, usize), f64) {
        let mut best = ((1, 1), 0.0);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j).norm();
                if v > best.1 {
                    best = ((i + 1, j + 1), v);
                }
            }
        }
        best
    }

    pub(crate) fn row_norms(&self) -> Vec<f64> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).norm_sqr()).sum::<f64>().sqrt())
            .collect()
    }

    /// Multiplies row `i` (0-based) by `s` in place.
    pub(crate) fn scale_row(&mut self, i: usize, s: C64) {
        for j in 0..self.cols {
            let v = self.get(i, j) * s;
            self.set(i, j, v);
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale_real(-1.0)
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] += a * rhs.get(k, j);
                }
            }
        }
        out
    }
}

/// Strictly increasing 1-based index sequence inside `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    indices: Vec<usize>,
    n: usize,
}

impl IndexSet {
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        for (pos, &i) in indices.iter().enumerate() {
            if i == 0 || i > n {
                return Err(Error::Range { index: i, n });
            }
            if pos > 0 && indices[pos - 1] >= i {
                return Err(Error::Argument(format!("index set {indices:?} is not strictly increasing")));
            }
        }
        Ok(Self { indices, n })
    }

    pub fn empty(n: usize) -> Self {
        Self { indices: Vec::new(), n }
    }

    /// The leading block `(1, ..., k)`.
    pub fn leading(k: usize, n: usize) -> Self {
        assert!(k <= n);
        Self { indices: (1..=k).collect(), n }
    }

    pub fn full(n: usize) -> Self {
        Self::leading(n, n)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// `|{ j in self : j <= k }|`.
    pub fn count_at_most(&self, k: usize) -> usize {
        self.indices.partition_point(|&j| j <= k)
    }

    /// Every member of `Q_{l,n}` in lexicographic order.
    pub fn combinations(l: usize, n: usize) -> Combinations {
        Combinations { n, current: if l <= n { Some((1..=l).collect()) } else { None } }
    }

    /// All subsets of `1..=n`, ordered by size and then lexicographically.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = IndexSet> {
        (0..=n).flat_map(move |l| Self::combinations(l, n))
    }

    fn zero_based(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().map(|i| i - 1)
    }
}

/// Lexicographic iterator over `Q_{l,n}`.
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for Combinations {
    type Item = IndexSet;

    fn next(&mut self) -> Option<IndexSet> {
        let cur = self.current.take()?;
        let out = IndexSet { indices: cur.clone(), n: self.n };
        let l = cur.len();
        let mut next = cur;
        let mut i = l;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - (l - 1 - i) {
                next[i] += 1;
                for j in i + 1..l {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                return Some(out);
            }
        }
        Some(out)
    }
}

/// Run lengths `(a, b, c, ...)` of a signature matrix `I_{a,b,c,...}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureSpec {
    runs: Vec<usize>,
}

impl SignatureSpec {
    pub fn new(runs: &[i64]) -> Result<Self> {
        let runs = runs
            .iter()
            .map(|&r| usize::try_from(r).map_err(|_| Error::Argument(format!("negative run length {r}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { runs })
    }

    /// `I_k = I_{k, n-k}`.
    pub fn leading(k: usize, n: usize) -> Self {
        assert!(k <= n);
        Self { runs: vec![k, n - k] }
    }

    pub fn runs(&self) -> &[usize] {
        &self.runs
    }

    pub fn n(&self) -> usize {
        self.runs.iter().sum()
    }

    /// Diagonal signs: the first run is `-1`, and signs alternate run by run.
    pub fn signs(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n());
        for (r, &len) in self.runs.iter().enumerate() {
            let s = if r % 2 == 0 { -1.0 } else { 1.0 };
            out.extend(std::iter::repeat_n(s, len));
        }
        out
    }
}

pub fn signature_matrix(spec: &SignatureSpec) -> CMatrix {
    let d: Vec<C64> = spec.signs().into_iter().map(|s| C64::new(s, 0.0)).collect();
    CMatrix::from_diag(&d)
}

/// `I_k A`: negates the first `k` rows.
pub fn flip_leading_rows(a: &CMatrix, k: usize) -> CMatrix {
    let mut out = a.clone();
    for i in 0..k.min(a.rows) {
        out.scale_row(i, -ONE);
    }
    out
}

/// Reflection across the antidiagonal, `J A^t J`. Works for rectangular input:
/// an `r x c` matrix maps to a `c x r` one.
pub fn antitranspose(a: &CMatrix) -> CMatrix {
    let (r, c) = (a.rows, a.cols);
    CMatrix::from_fn(c, r, |i, j| a.get(r - 1 - j, c - 1 - i))
}

/// The exchange matrix `J` with ones on the antidiagonal.
pub fn exchange(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| if i + j + 1 == n { ONE } else { ZERO })
}

/// `A[rows, cols]`.
pub fn submatrix(a: &CMatrix, rows: &IndexSet, cols: &IndexSet) -> Result<CMatrix> {
    if let Some(&bad) = rows.indices().iter().find(|&&i| i > a.rows) {
        return Err(Error::Range { index: bad, n: a.rows });
    }
    if let Some(&bad) = cols.indices().iter().find(|&&j| j > a.cols) {
        return Err(Error::Range { index: bad, n: a.cols });
    }
    let r: Vec<usize> = rows.zero_based().collect();
    let c: Vec<usize> = cols.zero_based().collect();
    Ok(CMatrix::from_fn(r.len(), c.len(), |i, j| a.get(r[i], c[j])))
}

/// `A[k]`, the leading `k x k` principal block.
pub fn leading_block(a: &CMatrix, k: usize) -> CMatrix {
    assert!(k <= a.rows && k <= a.cols);
    CMatrix::from_fn(k, k, |i, j| a.get(i, j))
}

struct Lu {
    n: usize,
    lu: Vec<C64>,
    perm: Vec<usize>,
    parity: f64,
}

fn lu_partial_pivot(a: &CMatrix) -> Lu {
    assert!(a.is_square(), "LU needs a square matrix");
    let n = a.rows;
    let mut lu = a.data.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut parity = 1.0;
    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, lu[i * n + k].norm()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if p != k {
            for j in 0..n {
                lu.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
            parity = -parity;
        }
        if pmax == 0.0 {
            continue;
        }
        let pivot = lu[k * n + k];
        for i in k + 1..n {
            let f = lu[i * n + k] / pivot;
            lu[i * n + k] = f;
            if f == ZERO {
                continue;
            }
            for j in k + 1..n {
                let u = lu[k * n + j];
                lu[i * n + j] -= f * u;
            }
        }
    }
    Lu { n, lu, perm, parity }
}

/// Determinant by partially pivoted LU. The empty matrix has determinant 1.
pub fn det(a: &CMatrix) -> C64 {
    let f = lu_partial_pivot(a);
    (0..f.n).fold(C64::new(f.parity, 0.0), |acc, i| acc * f.lu[i * f.n + i])
}

/// Solves `A Y = B`.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() || a.rows != b.rows {
        return Err(Error::Dimension(format!(
            "solve: A is {}x{}, B is {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let f = lu_partial_pivot(a);
    let n = f.n;
    let cutoff = f64::EPSILON * (n.max(1) as f64) * a.max_abs();
    if (0..n).any(|i| f.lu[i * n + i].norm() <= cutoff) {
        return Err(Error::Singular);
    }
    let mut y = CMatrix::zeros(n, b.cols);
    for col in 0..b.cols {
        let mut x: Vec<C64> = f.perm.iter().map(|&p| b.get(p, col)).collect();
        for i in 0..n {
            for k in 0..i {
                let l = f.lu[i * n + k];
                x[i] = x[i] - l * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = f.lu[i * n + k];
                x[i] = x[i] - u * x[k];
            }
            x[i] /= f.lu[i * n + i];
        }
        for (i, v) in x.into_iter().enumerate() {
            y.set(i, col, v);
        }
    }
    Ok(y)
}

pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    solve(a, &CMatrix::identity(a.rows))
}

/// Rank by Gaussian elimination with complete pivoting; entries below
/// `rel_tol * max|A|` count as zero.
pub fn rank(a: &CMatrix, rel_tol: f64) -> usize {
    let mut m = a.clone();
    let cutoff = rel_tol * m.max_abs();
    let (rows, cols) = (m.rows, m.cols);
    let mut r = 0;
    let mut col_used = vec![false; cols];
    while r < rows {
        let mut best = (0, 0, 0.0);
        for i in r..rows {
            for j in 0..cols {
                if !col_used[j] && m.get(i, j).norm() > best.2 {
                    best = (i, j, m.get(i, j).norm());
                }
            }
        }
        if best.2 <= cutoff {
            break;
        }
        let (pi, pj) = (best.0, best.1);
        for j in 0..cols {
            m.data.swap(r * cols + j, pi * cols + j);
        }
        col_used[pj] = true;
        let pivot = m.get(r, pj);
        for i in r + 1..rows {
            let f = m.get(i, pj) / pivot;
            for j in 0..cols {
                let v = m.get(i, j) - f * m.get(r, j);
                m.set(i, j, v);
            }
        }
        r += 1;
    }
    r
}

/// Every principal minor `det A[alpha, alpha]` with its index set, including the
/// empty set (value 1), ordered by size then lexicographically.
pub fn principal_minor_terms(a: &CMatrix, cap: usize) -> Result<Vec<(IndexSet, C64)>> {
    if !a.is_square() {
        return Err(Error::Dimension("principal minors need a square matrix".into()));
    }
    let n = a.rows;
    if n > cap {
        return Err(Error::Capacity { n, cap });
    }
    IndexSet::all_subsets(n)
        .map(|alpha| {
            let m = submatrix(a, &alpha, &alpha)?;
            let v = det(&m);
            Ok((alpha, v))
        })
        .collect()
}

/// `sum_l sum_{alpha in Q_{l,n}} det A[alpha, alpha]`, which equals `det(1 + A)`.
pub fn principal_minor_expansion(a: &CMatrix, cap: usize) -> Result<C64> {
    Ok(principal_minor_terms(a, cap)?.into_iter().map(|(_, v)| v).sum())
}

/// Relative distance `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_dev(a: C64, b: C64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// JSON form `{"n": int, "entries": [[[re, im], ...], ...]}` for square matrices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        Self { n: m.rows, entries: complex_rows_to_json(m) }
    }
}

impl TryFrom<MatrixJson> for CMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<CMatrix> {
        if j.entries.len() != j.n || j.entries.iter().any(|r| r.len() != j.n) {
            return Err(Error::Json(format!("field \"entries\" must be {0}x{0} to match \"n\"", j.n)));
        }
        if j.n == 0 {
            return Err(Error::Json("field \"n\" must be positive".into()));
        }
        complex_rows_from_json(&j.entries).map_err(|e| Error::Json(format!("field \"entries\": {e}")))
    }
}

pub(crate) fn complex_rows_to_json(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(|z| [z.re, z.im]).collect()).collect()
}

pub(crate) fn complex_rows_from_json(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    CMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect()).collect())
}

impl CMatrix {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(MatrixJson::from(self)).expect("matrix JSON is always serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: MatrixJson = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        CMatrix::try_from(j)
    }
}
