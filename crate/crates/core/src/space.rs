//! The five families of compact symmetric spaces handled by the crate.
//!
//! A [`SpaceSpec`] fixes the ambient size `N`, the involution `theta`, the block
//! layout of the tangent space `i p`, and the coroots. Tangent matrices are always
//! produced from [`Coordinates`] by [`build_tangent`], so they lie in `i p` by
//! construction.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::linalg::{
    antitranspose, complex_rows_from_json, complex_rows_to_json, flip_leading_rows, CMatrix, C64, ONE, ZERO,
};
use crate::sample::disc_point;

/// Family tag, spelled as in the JSON and CLI forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "AIII")]
    Aiii,
    #[serde(rename = "DIII")]
    Diii,
    #[serde(rename = "CI")]
    Ci,
    #[serde(rename = "CII")]
    Cii,
    #[serde(rename = "BDI_even")]
    BdiEven,
    #[serde(rename = "BDI_oddodd")]
    BdiOddOdd,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Aiii => "AIII",
            Family::Diii => "DIII",
            Family::Ci => "CI",
            Family::Cii => "CII",
            Family::BdiEven => "BDI_even",
            Family::BdiOddOdd => "BDI_oddodd",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "AIII" => Ok(Family::Aiii),
            "DIII" => Ok(Family::Diii),
            "CI" => Ok(Family::Ci),
            "CII" => Ok(Family::Cii),
            "BDI_even" => Ok(Family::BdiEven),
            "BDI_oddodd" => Ok(Family::BdiOddOdd),
            other => Err(Error::Argument(format!(
                "unknown family {other:?} (expected AIII, DIII, CI, CII, BDI, BDI_even or BDI_oddodd)"
            ))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Compact group the symmetric space lives in, as represented in `SU(N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Group {
    /// `SU(N)`.
    Special,
    /// `SO(N)`, realized as `{ g : g^tau = g^-1 }`.
    Orthogonal,
    /// `Sp(N/2)`, realized as `{ g : I_{n,n} (g^-1)^tau I_{n,n} = g }`.
    Symplectic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceSpec {
    /// `SU(m+n)/S(U(m) x U(n))`, `m <= n`.
    Aiii { m: usize, n: usize },
    /// `SO(2n)/U(n)`.
    Diii { n: usize },
    /// `Sp(n)/U(n)`.
    Ci { n: usize },
    /// `Sp(p+q)/Sp(p) x Sp(q)`.
    Cii { p: usize, q: usize },
    /// `SO(p+q)/SO(p) x SO(q)` with `p` even; `theta` is inner.
    BdiEven { p: usize, q: usize },
    /// `SO(p+q)/SO(p) x SO(q)` with `p`, `q` odd; `theta` is outer.
    BdiOddOdd { p: usize, q: usize },
}

impl SpaceSpec {
    pub fn aiii(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Argument("AIII needs m >= 1 and n >= 1".into()));
        }
        if m > n {
            return Err(Error::Argument(format!("AIII assumes m <= n, got m = {m}, n = {n}")));
        }
        Ok(Self::Aiii { m, n })
    }

    pub fn diii(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("DIII needs n >= 1".into()));
        }
        Ok(Self::Diii { n })
    }

    pub fn ci(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("CI needs n >= 1".into()));
        }
        Ok(Self::Ci { n })
    }

    pub fn cii(p: usize, q: usize) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::Argument("CII needs p >= 1 and q >= 1".into()));
        }
        Ok(Self::Cii { p, q })
    }

    pub fn bdi_even(p: usize, q: usize) -> Result<Self> {
        if p < 2 || !p.is_multiple_of(2) || q == 0 {
            return Err(Error::Argument(format!("BDI_even needs p even, p >= 2, q >= 1; got p = {p}, q = {q}")));
        }
        Ok(Self::BdiEven { p, q })
    }

    pub fn bdi_oddodd(p: usize, q: usize) -> Result<Self> {
        if p.is_multiple_of(2) || q.is_multiple_of(2) {
            return Err(Error::Argument(format!("BDI_oddodd needs p and q odd; got p = {p}, q = {q}")));
        }
        Ok(Self::BdiOddOdd { p, q })
    }

    /// `SO(p+q)/SO(p) x SO(q)` for any `p`, `q`: picks the case by parity and
    /// swaps the factors when only `q` is even.
    pub fn bdi(p: usize, q: usize) -> Result<Self> {
        match (p % 2, q % 2) {
            (1, 1) => Self::bdi_oddodd(p, q),
            (0, _) => Self::bdi_even(p, q),
            _ => Self::bdi_even(q, p),
        }
    }

    /// Builds a spec from a family name and named dimension parameters.
    pub fn from_parts(family: &str, m: Option<usize>, n: Option<usize>, p: Option<usize>, q: Option<usize>) -> Result<Self> {
        let need = |v: Option<usize>, name: &str| {
            v.ok_or_else(|| Error::Argument(format!("family {family} needs parameter {name}")))
        };
        match family {
            "AIII" => Self::aiii(need(m, "m")?, need(n, "n")?),
            "DIII" => Self::diii(need(n, "n")?),
            "CI" => Self::ci(need(n, "n")?),
            "CII" => Self::cii(need(p, "p")?, need(q, "q")?),
            "BDI" => Self::bdi(need(p, "p")?, need(q, "q")?),
            "BDI_even" => Self::bdi_even(need(p, "p")?, need(q, "q")?),
            "BDI_oddodd" => Self::bdi_oddodd(need(p, "p")?, need(q, "q")?),
            other => Family::parse(other).map(|_| unreachable!()),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            Self::Aiii { .. } => Family::Aiii,
            Self::Diii { .. } => Family::Diii,
            Self::Ci { .. } => Family::Ci,
            Self::Cii { .. } => Family::Cii,
            Self::BdiEven { .. } => Family::BdiEven,
            Self::BdiOddOdd { .. } => Family::BdiOddOdd,
        }
    }

    /// Ambient matrix size `N`.
    pub fn ambient(&self) -> usize {
        match *self {
            Self::Aiii { m, n } => m + n,
            Self::Diii { n } | Self::Ci { n } => 2 * n,
            Self::Cii { p, q } => 2 * (p + q),
            Self::BdiEven { p, q } | Self::BdiOddOdd { p, q } => p + q,
        }
    }

    pub fn group(&self) -> Group {
        match self {
            Self::Aiii { .. } => Group::Special,
            Self::Diii { .. } | Self::BdiEven { .. } | Self::BdiOddOdd { .. } => Group::Orthogonal,
            Self::Ci { .. } | Self::Cii { .. } => Group::Symplectic,
        }
    }

    /// Diagonal of the inner involution matrix; `None` for the outer BDI case.
    pub fn theta_signs(&self) -> Option<Vec<f64>> {
        let runs: Vec<(usize, f64)> = match *self {
            Self::Aiii { m, n } => vec![(m, -1.0), (n, 1.0)],
            Self::Diii { n } | Self::Ci { n } => vec![(n, -1.0), (n, 1.0)],
            Self::Cii { p, q } => vec![(p, -1.0), (2 * q, 1.0), (p, -1.0)],
            Self::BdiEven { p, q } => vec![(p / 2, -1.0), (q, 1.0), (p / 2, -1.0)],
            Self::BdiOddOdd { .. } => return None,
        };
        Some(runs.into_iter().flat_map(|(len, s)| std::iter::repeat_n(s, len)).collect())
    }

    pub fn involution(&self) -> Involution {
        match self.theta_signs() {
            Some(signs) => Involution {
                kind: InvolutionKind::Inner,
                matrix: CMatrix::from_diag(&signs.iter().map(|&s| C64::new(s, 0.0)).collect::<Vec<_>>()),
            },
            None => {
                let Self::BdiOddOdd { p, q } = *self else { unreachable!() };
                let (a, b) = ((p - 1) / 2, (q - 1) / 2);
                let n = p + q;
                let mut m = CMatrix::zeros(n, n);
                for i in 0..a {
                    m.set(i, i, ONE);
                    m.set(n - 1 - i, n - 1 - i, ONE);
                }
                for i in a..a + b {
                    m.set(i, i, -ONE);
                    m.set(n - 1 - i, n - 1 - i, -ONE);
                }
                let c = a + b;
                m.set(c, c + 1, ONE);
                m.set(c + 1, c, ONE);
                Involution { kind: InvolutionKind::OuterBdi, matrix: m }
            }
        }
    }

    /// The two middle positions (0-based) of the outer BDI layout.
    pub(crate) fn middle_pair(&self) -> Option<(usize, usize)> {
        match *self {
            Self::BdiOddOdd { p, q } => {
                let c = (p - 1) / 2 + (q - 1) / 2;
                Some((c, c + 1))
            }
            _ => None,
        }
    }

    pub fn params_json(&self) -> Value {
        let mut m = Map::new();
        let mut put = |k: &str, v: usize| {
            m.insert(k.to_string(), Value::from(v));
        };
        match *self {
            Self::Aiii { m, n } => {
                put("m", m);
                put("n", n);
            }
            Self::Diii { n } | Self::Ci { n } => put("n", n),
            Self::Cii { p, q } | Self::BdiEven { p, q } | Self::BdiOddOdd { p, q } => {
                put("p", p);
                put("q", q);
            }
        }
        Value::Object(m)
    }

    pub fn from_json_parts(family: &str, params: &Value) -> Result<Self> {
        let obj = params
            .as_object()
            .ok_or_else(|| Error::Json("field \"params\" must be an object".into()))?;
        let get = |k: &str| -> Result<Option<usize>> {
            match obj.get(k) {
                None => Ok(None),
                Some(v) => v
                    .as_u64()
                    .map(|x| Some(x as usize))
                    .ok_or_else(|| Error::Json(format!("field \"params.{k}\" must be a non-negative integer"))),
            }
        };
        Self::from_parts(family, get("m")?, get("n")?, get("p")?, get("q")?)
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Aiii { m, n } => write!(f, "AIII({m},{n})"),
            Self::Diii { n } => write!(f, "DIII(n={n})"),
            Self::Ci { n } => write!(f, "CI(n={n})"),
            Self::Cii { p, q } => write!(f, "CII({p},{q})"),
            Self::BdiEven { p, q } => write!(f, "BDI_even({p},{q})"),
            Self::BdiOddOdd { p, q } => write!(f, "BDI_oddodd({p},{q})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvolutionKind {
    /// Conjugation by a diagonal signature matrix.
    Inner,
    /// Conjugation by the non-diagonal matrix of the odd/odd BDI case.
    OuterBdi,
}

/// `theta = Ad(I_hat)` with `I_hat^2 = 1`.
#[derive(Clone, Debug)]
pub struct Involution {
    pub kind: InvolutionKind,
    pub matrix: CMatrix,
}

impl Involution {
    pub fn apply(&self, a: &CMatrix) -> CMatrix {
        match self.kind {
            InvolutionKind::Inner => {
                let s = self.matrix.diagonal();
                CMatrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j) * s[i] * s[j])
            }
            InvolutionKind::OuterBdi => &(&self.matrix * a) * &self.matrix,
        }
    }
}

/// `theta(A) = I_hat A I_hat`.
pub fn involution_apply(spec: &SpaceSpec, a: &CMatrix) -> Result<CMatrix> {
    let n = spec.ambient();
    if a.rows() != n || a.cols() != n {
        return Err(Error::Dimension(format!("{spec} acts on {n}x{n} matrices, got {}x{}", a.rows(), a.cols())));
    }
    Ok(spec.involution().apply(a))
}

/// Family-specific free parameters of a tangent vector in `i p`.
#[derive(Clone, Debug, PartialEq)]
pub enum Coordinates {
    /// `Z` is `m x n`.
    Aiii { z: CMatrix },
    /// `Z` is `n x n` with `Z = -Z^tau`.
    Diii { z: CMatrix },
    /// `Z` is `n x n` with `Z = Z^tau`.
    Ci { z: CMatrix },
    /// `Z1`, `Z2` are `p x q`.
    Cii { z1: CMatrix, z2: CMatrix },
    /// `Z` is `(p/2) x q`.
    BdiEven { z: CMatrix },
    /// `Z1`, `Z2` are `a x b` with `a = (p-1)/2`, `b = (q-1)/2`; `w1` has length
    /// `a`, `w2` length `b`; `s` fills the middle `diag(is, -is)`.
    BdiOddOdd { z1: CMatrix, z2: CMatrix, w1: Vec<C64>, w2: Vec<C64>, s: f64 },
}

/// Tolerance on the payload symmetry of DIII and CI coordinates.
pub const PAYLOAD_SYMMETRY_TOL: f64 = 1e-12;

impl Coordinates {
    pub fn zeros(spec: &SpaceSpec) -> Self {
        Self::filled(spec, |_| ZERO, 0.0)
    }

    /// Coordinates with every free entry drawn uniformly from the complex disc of
    /// the given radius; `s` is uniform in `[-radius, radius]`.
    pub fn random<R: Rng + ?Sized>(spec: &SpaceSpec, rng: &mut R, radius: f64) -> Self {
        let mut draws: Vec<C64> = Vec::new();
        let count = Self::free_count(spec);
        for _ in 0..count {
            draws.push(disc_point(rng, radius));
        }
        let s = if matches!(spec, SpaceSpec::BdiOddOdd { .. }) { rng.gen_range(-radius..=radius) } else { 0.0 };
        let mut it = draws.into_iter();
        Self::filled(spec, move |_| it.next().expect("free_count covers every slot"), s)
    }

    /// Number of free complex parameters.
    pub fn free_count(spec: &SpaceSpec) -> usize {
        match *spec {
            SpaceSpec::Aiii { m, n } => m * n,
            SpaceSpec::Diii { n } => n * (n - 1) / 2,
            SpaceSpec::Ci { n } => n * (n + 1) / 2,
            SpaceSpec::Cii { p, q } => 2 * p * q,
            SpaceSpec::BdiEven { p, q } => p / 2 * q,
            SpaceSpec::BdiOddOdd { p, q } => {
                let (a, b) = ((p - 1) / 2, (q - 1) / 2);
                2 * a * b + a + b
            }
        }
    }

    /// Fills every free complex slot in a fixed order by calling `next`.
    pub(crate) fn filled(spec: &SpaceSpec, mut next: impl FnMut(usize) -> C64, s: f64) -> Self {
        let mut slot = 0usize;
        let mut take = || {
            let v = next(slot);
            slot += 1;
            v
        };
        match *spec {
            SpaceSpec::Aiii { m, n } => Self::Aiii { z: CMatrix::from_fn(m, n, |_, _| take()) },
            SpaceSpec::Diii { n } => {
                let mut z = CMatrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        if i + j + 1 < n {
                            let v = take();
                            z.set(i, j, v);
                            z.set(n - 1 - j, n - 1 - i, -v);
                        }
                    }
                }
                Self::Diii { z }
            }
            SpaceSpec::Ci { n } => {
                let mut z = CMatrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        if i + j < n {
                            let v = take();
                            z.set(i, j, v);
                            z.set(n - 1 - j, n - 1 - i, v);
                        }
                    }
                }
                Self::Ci { z }
            }
            SpaceSpec::Cii { p, q } => {
                let z1 = CMatrix::from_fn(p, q, |_, _| take());
                let z2 = CMatrix::from_fn(p, q, |_, _| take());
                Self::Cii { z1, z2 }
            }
            SpaceSpec::BdiEven { p, q } => Self::BdiEven { z: CMatrix::from_fn(p / 2, q, |_, _| take()) },
            SpaceSpec::BdiOddOdd { p, q } => {
                let (a, b) = ((p - 1) / 2, (q - 1) / 2);
                let z1 = CMatrix::from_fn(a, b, |_, _| take());
                let z2 = CMatrix::from_fn(a, b, |_, _| take());
                let w1 = (0..a).map(|_| take()).collect();
                let w2 = (0..b).map(|_| take()).collect();
                Self::BdiOddOdd { z1, z2, w1, w2, s }
            }
        }
    }

    pub fn family(&self) -> Family {
        match self {
            Self::Aiii { .. } => Family::Aiii,
            Self::Diii { .. } => Family::Diii,
            Self::Ci { .. } => Family::Ci,
            Self::Cii { .. } => Family::Cii,
            Self::BdiEven { .. } => Family::BdiEven,
            Self::BdiOddOdd { .. } => Family::BdiOddOdd,
        }
    }

    /// Checks shapes against `spec` and the DIII/CI payload symmetry.
    pub fn check(&self, spec: &SpaceSpec) -> Result<()> {
        if self.family() != spec.family() {
            return Err(Error::Dimension(format!("{} coordinates given for {spec}", self.family())));
        }
        let shape = |name: &str, m: &CMatrix, r: usize, c: usize| {
            if m.rows() == r && m.cols() == c {
                Ok(())
            } else {
                Err(Error::Dimension(format!("{name} must be {r}x{c} for {spec}, got {}x{}", m.rows(), m.cols())))
            }
        };
        let length = |name: &str, v: &[C64], len: usize| {
            if v.len() == len {
                Ok(())
            } else {
                Err(Error::Dimension(format!("{name} must have length {len} for {spec}, got {}", v.len())))
            }
        };
        match (self, *spec) {
            (Self::Aiii { z }, SpaceSpec::Aiii { m, n }) => shape("Z", z, m, n),
            (Self::Diii { z }, SpaceSpec::Diii { n }) => {
                shape("Z", z, n, n)?;
                let v = (z + &antitranspose(z)).max_abs();
                if v > PAYLOAD_SYMMETRY_TOL {
                    return Err(Error::Validation(format!("DIII payload must satisfy Z = -Z^tau (violation {v:e})")));
                }
                Ok(())
            }
            (Self::Ci { z }, SpaceSpec::Ci { n }) => {
                shape("Z", z, n, n)?;
                let v = (z - &antitranspose(z)).max_abs();
                if v > PAYLOAD_SYMMETRY_TOL {
                    return Err(Error::Validation(format!("CI payload must satisfy Z = Z^tau (violation {v:e})")));
                }
                Ok(())
            }
            (Self::Cii { z1, z2 }, SpaceSpec::Cii { p, q }) => {
                shape("Z1", z1, p, q)?;
                shape("Z2", z2, p, q)
            }
            (Self::BdiEven { z }, SpaceSpec::BdiEven { p, q }) => shape("Z", z, p / 2, q),
            (Self::BdiOddOdd { z1, z2, w1, w2, s }, SpaceSpec::BdiOddOdd { p, q }) => {
                let (a, b) = ((p - 1) / 2, (q - 1) / 2);
                shape("Z1", z1, a, b)?;
                shape("Z2", z2, a, b)?;
                length("w1", w1, a)?;
                length("w2", w2, b)?;
                if !s.is_finite() {
                    return Err(Error::Argument("s must be finite".into()));
                }
                Ok(())
            }
            _ => unreachable!("family equality checked above"),
        }
    }

    /// Payload object with keys `Z`, `Z1`, `Z2`, `w1`, `w2`, `s` as applicable.
    pub fn payload_json(&self) -> Value {
        let mut m = Map::new();
        let mat = |x: &CMatrix| serde_json::to_value(complex_rows_to_json(x)).expect("serializable");
        let vec = |v: &[C64]| Value::from(v.iter().map(|z| Value::from(vec![z.re, z.im])).collect::<Vec<_>>());
        match self {
            Self::Aiii { z } | Self::Diii { z } | Self::Ci { z } | Self::BdiEven { z } => {
                m.insert("Z".into(), mat(z));
            }
            Self::Cii { z1, z2 } => {
                m.insert("Z1".into(), mat(z1));
                m.insert("Z2".into(), mat(z2));
            }
            Self::BdiOddOdd { z1, z2, w1, w2, s } => {
                m.insert("Z1".into(), mat(z1));
                m.insert("Z2".into(), mat(z2));
                m.insert("w1".into(), vec(w1));
                m.insert("w2".into(), vec(w2));
                m.insert("s".into(), Value::from(*s));
            }
        }
        Value::Object(m)
    }

    /// Parses a payload object for `spec`; errors name the offending field.
    pub fn from_payload_json(spec: &SpaceSpec, payload: &Value) -> Result<Self> {
        let obj = payload.as_object().ok_or_else(|| Error::Json("payload must be a JSON object".into()))?;
        let allowed: &[&str] = match spec.family() {
            Family::Aiii | Family::Diii | Family::Ci | Family::BdiEven => &["Z"],
            Family::Cii => &["Z1", "Z2"],
            Family::BdiOddOdd => &["Z1", "Z2", "w1", "w2", "s"],
        };
        if let Some(extra) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::Json(format!("unexpected payload field \"{extra}\" for {spec}")));
        }
        let (a, b) = match *spec {
            SpaceSpec::BdiOddOdd { p, q } => ((p - 1) / 2, (q - 1) / 2),
            _ => (0, 0),
        };
        let matrix = |key: &str, rows: usize, cols: usize| -> Result<CMatrix> {
            match obj.get(key) {
                // empty blocks may be omitted
                None if rows == 0 || cols == 0 => Ok(CMatrix::zeros(rows, cols)),
                None => Err(Error::Json(format!("missing payload field \"{key}\""))),
                Some(v) => {
                    let parsed: Vec<Vec<[f64; 2]>> = serde_json::from_value(v.clone()).map_err(|e| {
                        Error::Json(format!("payload field \"{key}\" must be rows of [re, im] pairs: {e}"))
                    })?;
                    if parsed.is_empty() {
                        return Ok(CMatrix::zeros(rows, cols));
                    }
                    if parsed.iter().all(Vec::is_empty) {
                        return Ok(CMatrix::zeros(parsed.len(), 0));
                    }
                    complex_rows_from_json(&parsed)
                        .map_err(|e| Error::Json(format!("payload field \"{key}\": {e}")))
                }
            }
        };
        let vector = |key: &str, len: usize| -> Result<Vec<C64>> {
            match obj.get(key) {
                None if len == 0 => Ok(Vec::new()),
                None => Err(Error::Json(format!("missing payload field \"{key}\""))),
                Some(v) => {
                    let parsed: Vec<[f64; 2]> = serde_json::from_value(v.clone())
                        .map_err(|e| Error::Json(format!("payload field \"{key}\" must be a list of [re, im]: {e}")))?;
                    Ok(parsed.into_iter().map(|[re, im]| C64::new(re, im)).collect())
                }
            }
        };
        let coords = match *spec {
            SpaceSpec::Aiii { m, n } => Self::Aiii { z: matrix("Z", m, n)? },
            SpaceSpec::Diii { n } => Self::Diii { z: matrix("Z", n, n)? },
            SpaceSpec::Ci { n } => Self::Ci { z: matrix("Z", n, n)? },
            SpaceSpec::Cii { p, q } => Self::Cii { z1: matrix("Z1", p, q)?, z2: matrix("Z2", p, q)? },
            SpaceSpec::BdiEven { p, q } => Self::BdiEven { z: matrix("Z", p / 2, q)? },
            SpaceSpec::BdiOddOdd { .. } => {
                let s = match obj.get("s") {
                    None => 0.0,
                    Some(v) => v.as_f64().ok_or_else(|| Error::Json("payload field \"s\" must be a real number".into()))?,
                };
                Self::BdiOddOdd {
                    z1: matrix("Z1", a, b)?,
                    z2: matrix("Z2", a, b)?,
                    w1: vector("w1", a)?,
                    w2: vector("w2", b)?,
                    s,
                }
            }
        };
        coords.check(spec)?;
        Ok(coords)
    }

    /// Full coordinates document `{"family", "params", "payload"}`.
    pub fn document_json(&self, spec: &SpaceSpec) -> Value {
        serde_json::json!({
            "family": spec.family().name(),
            "params": spec.params_json(),
            "payload": self.payload_json(),
        })
    }

    pub fn from_document_json(doc: &Value) -> Result<(SpaceSpec, Self)> {
        let family = doc
            .get("family")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Json("missing string field \"family\"".into()))?;
        let params = doc.get("params").ok_or_else(|| Error::Json("missing field \"params\"".into()))?;
        let payload = doc.get("payload").ok_or_else(|| Error::Json("missing field \"payload\"".into()))?;
        let spec = SpaceSpec::from_json_parts(family, params)?;
        let coords = Self::from_payload_json(&spec, payload)?;
        Ok((spec, coords))
    }
}

fn place(x: &mut CMatrix, r0: usize, c0: usize, block: &CMatrix) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            x.set(r0 + i, c0 + j, block.get(i, j));
        }
    }
}

fn column(v: &[C64]) -> CMatrix {
    CMatrix::from_fn(v.len(), 1, |i, _| v[i])
}

/// `(Z*)^tau`.
fn adjoint_tau(z: &CMatrix) -> CMatrix {
    antitranspose(&z.adjoint())
}

/// Assembles `X in i p` from coordinates.
pub fn build_tangent(spec: &SpaceSpec, coords: &Coordinates) -> Result<CMatrix> {
    coords.check(spec)?;
    let big_n = spec.ambient();
    let mut x = CMatrix::zeros(big_n, big_n);
    match (coords, *spec) {
        (Coordinates::Aiii { z }, SpaceSpec::Aiii { m, .. }) => {
            place(&mut x, 0, m, z);
            place(&mut x, m, 0, &-&z.adjoint());
        }
        (Coordinates::Diii { z } | Coordinates::Ci { z }, SpaceSpec::Diii { n } | SpaceSpec::Ci { n }) => {
            place(&mut x, 0, n, z);
            place(&mut x, n, 0, &-&z.adjoint());
        }
        (Coordinates::Cii { z1, z2 }, SpaceSpec::Cii { p, q }) => {
            let o = [0, p, p + q, p + 2 * q];
            place(&mut x, o[0], o[1], z1);
            place(&mut x, o[0], o[2], z2);
            place(&mut x, o[1], o[0], &-&z1.adjoint());
            place(&mut x, o[1], o[3], &antitranspose(z2));
            place(&mut x, o[2], o[0], &-&z2.adjoint());
            place(&mut x, o[2], o[3], &-&antitranspose(z1));
            place(&mut x, o[3], o[1], &-&adjoint_tau(z2));
            place(&mut x, o[3], o[2], &adjoint_tau(z1));
        }
        (Coordinates::BdiEven { z }, SpaceSpec::BdiEven { p, q }) => {
            let a = p / 2;
            place(&mut x, 0, a, z);
            place(&mut x, a, 0, &-&z.adjoint());
            place(&mut x, a, a + q, &-&antitranspose(z));
            place(&mut x, a + q, a, &adjoint_tau(z));
        }
        (Coordinates::BdiOddOdd { z1, z2, w1, w2, s }, SpaceSpec::BdiOddOdd { p, q }) => {
            let (a, b) = ((p - 1) / 2, (q - 1) / 2);
            let (ra, rb, c1, c2, rb2, ra2) = (0, a, a + b, a + b + 1, a + b + 2, a + 2 * b + 2);
            let (w1c, w2c) = (column(w1), column(w2));
            // row block A
            place(&mut x, ra, rb, z1);
            place(&mut x, ra, c1, &w1c);
            place(&mut x, ra, c2, &-&w1c);
            place(&mut x, ra, rb2, z2);
            // row block B
            place(&mut x, rb, ra, &-&z1.adjoint());
            place(&mut x, rb, c1, &w2c);
            place(&mut x, rb, c2, &w2c);
            place(&mut x, rb, ra2, &-&antitranspose(z2));
            // middle rows
            place(&mut x, c1, ra, &-&w1c.adjoint());
            place(&mut x, c1, rb, &-&w2c.adjoint());
            x.set(c1, c1, C64::new(0.0, *s));
            place(&mut x, c1, rb2, &-&antitranspose(&w2c));
            place(&mut x, c1, ra2, &antitranspose(&w1c));
            place(&mut x, c2, ra, &w1c.adjoint());
            place(&mut x, c2, rb, &-&w2c.adjoint());
            x.set(c2, c2, C64::new(0.0, -*s));
            place(&mut x, c2, rb2, &-&antitranspose(&w2c));
            place(&mut x, c2, ra2, &-&antitranspose(&w1c));
            // row block B'
            place(&mut x, rb2, ra, &-&z2.adjoint());
            place(&mut x, rb2, c1, &adjoint_tau(&w2c));
            place(&mut x, rb2, c2, &adjoint_tau(&w2c));
            place(&mut x, rb2, ra2, &-&antitranspose(z1));
            // row block A'
            place(&mut x, ra2, rb, &adjoint_tau(z2));
            place(&mut x, ra2, c1, &-&adjoint_tau(&w1c));
            place(&mut x, ra2, c2, &adjoint_tau(&w1c));
            place(&mut x, ra2, rb2, &adjoint_tau(z1));
        }
        _ => unreachable!("coordinates were checked against the spec"),
    }
    Ok(x)
}

/// Largest violation of one constraint and where it occurs (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub magnitude: f64,
    pub at: (usize, usize),
}

impl Violation {
    fn of(residual: &CMatrix) -> Self {
        let (at, magnitude) = residual.argmax_abs();
        Self { magnitude, at }
    }
}

/// Membership diagnostics for a candidate tangent vector.
#[derive(Clone, Debug, Serialize)]
pub struct TangentReport {
    /// `X + X*`.
    pub skew_hermitian: Violation,
    /// `theta(X) + X`.
    pub theta_anti_invariance: Violation,
    /// `X + X^tau` (orthogonal) or `X + Ad(I_{n,n}) X^tau` (symplectic); absent for AIII.
    pub family_condition: Option<Violation>,
    /// Entries outside the structural support of `i p`.
    pub zero_blocks: Violation,
}

impl TangentReport {
    pub fn constraints(&self) -> Vec<(&'static str, Violation)> {
        let mut out = vec![("skew_hermitian", self.skew_hermitian), ("theta_anti_invariance", self.theta_anti_invariance)];
        if let Some(v) = self.family_condition {
            out.push(("family_condition", v));
        }
        out.push(("zero_blocks", self.zero_blocks));
        out
    }

    pub fn worst(&self) -> (&'static str, Violation) {
        self.constraints()
            .into_iter()
            .fold(("none", Violation { magnitude: 0.0, at: (1, 1) }), |best, cur| {
                if cur.1.magnitude > best.1.magnitude {
                    cur
                } else {
                    best
                }
            })
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.constraints().iter().all(|(_, v)| v.magnitude <= tol)
    }
}

/// `Ad(I_{n,n}) A^tau` for the symplectic condition.
pub(crate) fn symplectic_tau(a: &CMatrix) -> CMatrix {
    let n = a.rows() / 2;
    let t = antitranspose(a);
    CMatrix::from_fn(t.rows(), t.cols(), |i, j| {
        let s = if (i < n) == (j < n) { 1.0 } else { -1.0 };
        t.get(i, j) * s
    })
}

/// Positions that may be nonzero in some element of `i p`.
pub fn structural_support(spec: &SpaceSpec) -> Vec<Vec<bool>> {
    let probe = Coordinates::filled(spec, |k| C64::new(1.0 + 0.37 * k as f64, 0.61 + 0.11 * k as f64), 1.0);
    let x = build_tangent(spec, &probe).expect("probe coordinates match spec");
    x.to_rows().into_iter().map(|r| r.into_iter().map(|z| z != ZERO).collect()).collect()
}

pub fn validate_tangent(spec: &SpaceSpec, x: &CMatrix) -> Result<TangentReport> {
    let n = spec.ambient();
    if x.rows() != n || x.cols() != n {
        return Err(Error::Dimension(format!("{spec} tangents are {n}x{n}, got {}x{}", x.rows(), x.cols())));
    }
    let skew = Violation::of(&(x + &x.adjoint()));
    let theta = Violation::of(&(&spec.involution().apply(x) + x));
    let family_condition = match spec.group() {
        Group::Special => None,
        Group::Orthogonal => Some(Violation::of(&(x + &antitranspose(x)))),
        Group::Symplectic => Some(Violation::of(&(x + &symplectic_tau(x)))),
    };
    let support = structural_support(spec);
    let outside = CMatrix::from_fn(n, n, |i, j| if support[i][j] { ZERO } else { x.get(i, j) });
    Ok(TangentReport {
        skew_hermitian: skew,
        theta_anti_invariance: theta,
        family_condition,
        zero_blocks: Violation::of(&outside),
    })
}

/// How the last coroot factor enters the product formula for `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TerminalRule {
    /// Every ratio `k` is raised to `h_k`.
    None,
    /// The last ratio is raised to `(-h_{r-1} + h_r) / 2`.
    HalfDifference,
    /// The last ratio is raised to `h_r / 2`.
    HalfLast,
}

/// Coroots `h_1, ..., h_r` as diagonal exponent vectors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorootSystem {
    pub vectors: Vec<Vec<i32>>,
    pub terminal: TerminalRule,
}

impl CorootSystem {
    /// `(k, 2 * exponent)` for every ratio `det(1 + I_k X) / det(1 + X)` in the
    /// product formula. Exponents are doubled so half-integers stay exact.
    pub fn ratio_exponents(&self) -> Vec<(usize, Vec<i32>)> {
        let r = self.vectors.len();
        let doubled = |v: &[i32]| v.iter().map(|x| 2 * x).collect::<Vec<_>>();
        let mut out: Vec<(usize, Vec<i32>)> = Vec::with_capacity(r);
        let plain = if self.terminal == TerminalRule::None { r } else { r - 1 };
        for k in 0..plain {
            out.push((k + 1, doubled(&self.vectors[k])));
        }
        match self.terminal {
            TerminalRule::None => {}
            TerminalRule::HalfDifference => {
                let last: Vec<i32> = self.vectors[r - 1].iter().zip(&self.vectors[r - 2]).map(|(h, prev)| h - prev).collect();
                out.push((r, last));
            }
            TerminalRule::HalfLast => out.push((r, self.vectors[r - 1].clone())),
        }
        out
    }
}

fn unit(n: usize, terms: &[(usize, i32)]) -> Vec<i32> {
    let mut v = vec![0; n];
    for &(pos, c) in terms {
        v[pos - 1] += c;
    }
    v
}

/// `e_k - e_{k+1} + e_{N-k} - e_{N-k+1}`.
fn paired_coroot(n: usize, k: usize) -> Vec<i32> {
    unit(n, &[(k, 1), (k + 1, -1), (n - k, 1), (n - k + 1, -1)])
}

/// Even orthogonal (`D`-type) coroots at ambient size `n = 2r`.
fn even_orthogonal(n: usize) -> CorootSystem {
    let r = n / 2;
    if r == 1 {
        return CorootSystem { vectors: vec![unit(n, &[(1, 1), (2, -1)])], terminal: TerminalRule::None };
    }
    let mut vectors: Vec<Vec<i32>> = (1..r).map(|k| paired_coroot(n, k)).collect();
    vectors.push(unit(n, &[(r - 1, 1), (r, 1), (r + 1, -1), (r + 2, -1)]));
    CorootSystem { vectors, terminal: TerminalRule::HalfDifference }
}

pub fn coroots(spec: &SpaceSpec) -> CorootSystem {
    let n = spec.ambient();
    match *spec {
        SpaceSpec::Aiii { .. } => CorootSystem {
            vectors: (1..n).map(|k| unit(n, &[(k, 1), (k + 1, -1)])).collect(),
            terminal: TerminalRule::None,
        },
        SpaceSpec::Ci { .. } | SpaceSpec::Cii { .. } => {
            let r = n / 2;
            let mut vectors: Vec<Vec<i32>> = (1..r).map(|k| paired_coroot(n, k)).collect();
            vectors.push(unit(n, &[(r, 1), (r + 1, -1)]));
            CorootSystem { vectors, terminal: TerminalRule::None }
        }
        SpaceSpec::Diii { .. } | SpaceSpec::BdiOddOdd { .. } => even_orthogonal(n),
        SpaceSpec::BdiEven { .. } if n.is_multiple_of(2) => even_orthogonal(n),
        SpaceSpec::BdiEven { .. } => {
            let r = n / 2;
            let mut vectors: Vec<Vec<i32>> = (1..r).map(|k| paired_coroot(n, k)).collect();
            vectors.push(unit(n, &[(r, 2), (r + 2, -2)]));
            CorootSystem { vectors, terminal: TerminalRule::HalfLast }
        }
    }
}

/// `1 + I_k X`.
pub(crate) fn one_plus_flipped(x: &CMatrix, k: usize) -> CMatrix {
    &CMatrix::identity(x.rows()) + &flip_leading_rows(x, k)
}

/// Every spec of every family whose ambient size lies in `range`.
pub fn specs_with_ambient(range: std::ops::RangeInclusive<usize>) -> Vec<SpaceSpec> {
    let max = *range.end();
    let mut out = Vec::new();
    for big_n in range {
        for m in 1..=big_n / 2 {
            out.push(SpaceSpec::Aiii { m, n: big_n - m });
        }
        if big_n % 2 == 0 {
            out.push(SpaceSpec::Diii { n: big_n / 2 });
            out.push(SpaceSpec::Ci { n: big_n / 2 });
        }
        if big_n % 2 == 0 {
            let half = big_n / 2;
            for p in 1..half {
                out.push(SpaceSpec::Cii { p, q: half - p });
            }
        }
        for p in (2..big_n).step_by(2) {
            out.push(SpaceSpec::BdiEven { p, q: big_n - p });
        }
        for p in (1..big_n).step_by(2) {
            let q = big_n - p;
            if q % 2 == 1 {
                out.push(SpaceSpec::BdiOddOdd { p, q });
            }
        }
    }
    debug_assert!(out.iter().all(|s| s.ambient() <= max));
    out
}
