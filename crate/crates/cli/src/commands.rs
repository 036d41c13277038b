use std::fmt::Write as _;

use serde_json::{json, Value};

use cayley_bruhat::bruhat::{d_via_ldu, minor_identity_check, DiagonalReport, Method};
use cayley_bruhat::components::{check_rep, LIMIT_TOL};
use cayley_bruhat::golden::{self, Suite};
use cayley_bruhat::linalg::MatrixJson;
use cayley_bruhat::rep_compat::verify_conjugacy;
use cayley_bruhat::sample::{rng_from_seed, DEFAULT_RADIUS};
use cayley_bruhat::{
    build_tangent, cayley, d_via_cayley, d_via_coroots, d_via_fredholm, d_via_minors, enumerate_components, ldu,
    validate_tangent, verify_image, CMatrix, Coordinates, Error, SpaceSpec,
};

use crate::format;

/// Default tolerance for agreement between the routes to `d`.
pub const D_TOL: f64 = 1e-8;
/// Default tolerance for membership checks on tangents and images.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// Largest ambient size at which the principal-minor expansion joins `verify`.
pub const FREDHOLM_MAX: usize = 10;

/// The six spaces checked by `verify` when no family is given.
pub fn standard_cases() -> Vec<SpaceSpec> {
    vec![
        SpaceSpec::aiii(2, 3).expect("valid"),
        SpaceSpec::diii(3).expect("valid"),
        SpaceSpec::ci(3).expect("valid"),
        SpaceSpec::cii(2, 2).expect("valid"),
        SpaceSpec::bdi_even(4, 3).expect("valid"),
        SpaceSpec::bdi_oddodd(3, 3).expect("valid"),
    ]
}

/// What a command produced: both renderings and whether its checks passed.
pub struct Report {
    pub json: Value,
    pub table: String,
    pub ok: bool,
}

impl Report {
    fn pass(json: Value, table: String) -> Self {
        Self { json, table, ok: true }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or input; exit status 1.
    Usage(String),
    /// A check failed before a full report could be produced; exit status 2.
    Check(Value, String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonGeneric { k, magnitude } => CliError::Check(
                json!({ "status": "fail", "error": { "kind": "non_generic", "k": k, "magnitude": magnitude } }),
                format!("FAIL: {e}"),
            ),
            Error::Domain(d) => CliError::Check(
                json!({ "status": "fail", "error": { "kind": "domain", "det_one_plus_g": d } }),
                format!("FAIL: {e}"),
            ),
            Error::BranchAmbiguity { position } => CliError::Check(
                json!({ "status": "fail", "error": { "kind": "branch_ambiguity", "position": position } }),
                format!("FAIL: {e}"),
            ),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Space selection and point input shared by the verbs.
pub struct Input {
    pub family: Option<String>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub payload: Option<String>,
    pub seed: u64,
}

fn read_json_arg(arg: &str, what: &str) -> CliResult<Value> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {what} file {path}: {e}")))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("malformed JSON in {what}: {e}")))
}

impl Input {
    pub fn spec(&self) -> CliResult<SpaceSpec> {
        let family = self.family.as_deref().ok_or_else(|| CliError::Usage("--family is required".into()))?;
        Ok(SpaceSpec::from_parts(family, self.m, self.n, self.p, self.q)?)
    }

    pub fn has_payload(&self) -> bool {
        self.payload.is_some()
    }

    /// The space and coordinates: from `--payload` (a bare payload or a full
    /// document with `family`/`params`/`payload`), otherwise a seeded draw.
    pub fn point(&self) -> CliResult<(SpaceSpec, Coordinates)> {
        match &self.payload {
            Some(arg) => {
                let v = read_json_arg(arg, "payload")?;
                if v.get("family").is_some() {
                    let (spec, coords) = Coordinates::from_document_json(&v)?;
                    if self.family.is_some() && self.spec()? != spec {
                        return Err(CliError::Usage(format!("payload document is for {spec}, flags select {}", self.spec()?)));
                    }
                    Ok((spec, coords))
                } else {
                    let spec = self.spec()?;
                    let coords = Coordinates::from_payload_json(&spec, &v)?;
                    Ok((spec, coords))
                }
            }
            None => {
                let spec = self.spec()?;
                let mut rng = rng_from_seed(self.seed);
                Ok((spec, Coordinates::random(&spec, &mut rng, DEFAULT_RADIUS)))
            }
        }
    }
}

pub fn build(input: &Input, tol: Option<f64>) -> CliResult<Report> {
    let (spec, coords) = input.point()?;
    let x = build_tangent(&spec, &coords)?;
    let tangent = validate_tangent(&spec, &x)?;
    let ok = tangent.passes(tol.unwrap_or(MEMBERSHIP_TOL));
    let mut doc = coords.document_json(&spec);
    doc["X"] = x.to_json();
    doc["tangent"] = serde_json::to_value(&tangent).expect("serializable");
    let table = format!("{spec}\nX =\n{}", format::matrix(&x));
    Ok(Report { json: doc, table, ok })
}

pub fn cayley_cmd(input: &Input, tol: Option<f64>) -> CliResult<Report> {
    let (spec, coords) = input.point()?;
    let x = build_tangent(&spec, &coords)?;
    let g = cayley(&x)?;
    let image = verify_image(&spec, &g)?;
    let ok = image.passes(tol.unwrap_or(MEMBERSHIP_TOL));
    let mut table = format!("{spec}\ng =\n{}\n", format::matrix(&g));
    for (name, v) in image.checks() {
        let _ = writeln!(table, "{name}: {}", format::real(v));
    }
    let json = json!({ "spec": spec.to_string(), "g": g.to_json(), "image": image });
    Ok(Report { json, table: table.trim_end().to_string(), ok })
}

pub fn factorize(input: &Input, matrix: Option<&str>, tol: Option<f64>) -> CliResult<Report> {
    let (label, g) = match matrix {
        Some(arg) => {
            let v = read_json_arg(arg, "matrix")?;
            let mj: MatrixJson = serde_json::from_value(v).map_err(|e| CliError::Usage(format!("malformed matrix: {e}")))?;
            ("matrix".to_string(), CMatrix::try_from(mj)?)
        }
        None => {
            let (spec, coords) = input.point()?;
            (spec.to_string(), cayley(&build_tangent(&spec, &coords)?)?)
        }
    };
    let f = ldu(&g)?;
    let residual = f.product().max_abs_diff(&g);
    let ok = residual <= tol.unwrap_or(D_TOL) * g.max_abs().max(1.0);
    let mut json = f.to_json();
    json["residual"] = json!(residual);
    json["input"] = json!(label);
    let table = format!(
        "{label}\nL =\n{}\nD =\n{}\nU =\n{}\nresidual: {}",
        format::matrix(&f.l),
        format::matrix(&f.d),
        format::matrix(&f.u),
        format::real(residual)
    );
    Ok(Report { json, table, ok })
}

fn diagonal(spec: &SpaceSpec, x: &CMatrix, method: Method) -> cayley_bruhat::Result<DiagonalReport> {
    match method {
        Method::Gauss => d_via_ldu(&cayley(x)?),
        Method::MinorRatio => d_via_minors(&cayley(x)?),
        Method::CayleyDet => d_via_cayley(x),
        Method::Fredholm => d_via_fredholm(x, FREDHOLM_MAX),
        Method::CorootProduct => d_via_coroots(spec, x),
    }
}

pub fn d(input: &Input, method: &str) -> CliResult<Report> {
    let (spec, coords) = input.point()?;
    let x = build_tangent(&spec, &coords)?;
    let methods: Vec<Method> = if method == "all" {
        let mut all = vec![Method::Gauss, Method::MinorRatio, Method::CayleyDet];
        if spec.ambient() <= FREDHOLM_MAX {
            all.push(Method::Fredholm);
        }
        all.push(Method::CorootProduct);
        all
    } else {
        vec![Method::parse(method)?]
    };
    let mut reports = Vec::new();
    let mut table = format!("{spec}");
    for m in methods {
        let r = diagonal(&spec, &x, m)?;
        let _ = write!(table, "\nmethod: {}\n{}\nproduct = {}", m.name(), format::entries("d", &r.entries), format::complex(r.product));
        reports.push(r);
    }
    let json = if reports.len() == 1 {
        reports[0].to_json()
    } else {
        Value::Array(reports.iter().map(DiagonalReport::to_json).collect())
    };
    Ok(Report::pass(json, table))
}

struct PointCheck {
    d_dev: f64,
    minor_identity: f64,
    tangent: f64,
    image: f64,
}

fn check_point(spec: &SpaceSpec, coords: &Coordinates) -> cayley_bruhat::Result<PointCheck> {
    let x = build_tangent(spec, coords)?;
    let g = cayley(&x)?;
    let reference = d_via_cayley(&x)?;
    let mut others = vec![d_via_ldu(&g)?, d_via_minors(&g)?, d_via_coroots(spec, &x)?];
    if spec.ambient() <= FREDHOLM_MAX {
        others.push(d_via_fredholm(&x, FREDHOLM_MAX)?);
    }
    let d_dev = others.iter().map(|r| reference.max_rel_dev(r)).fold(0.0, f64::max);
    Ok(PointCheck {
        d_dev,
        minor_identity: minor_identity_check(&x)?,
        tangent: validate_tangent(spec, &x)?.worst().1.magnitude,
        image: verify_image(spec, &g)?.max_violation(),
    })
}

pub fn verify(input: &Input, samples: usize, tol: Option<f64>) -> CliResult<Report> {
    let (d_tol, m_tol) = tol.map_or((D_TOL, MEMBERSHIP_TOL), |t| (t, t));
    let mut cases: Vec<(SpaceSpec, Vec<Coordinates>)> = Vec::new();
    if input.has_payload() {
        let (spec, coords) = input.point()?;
        cases.push((spec, vec![coords]));
    } else {
        let specs = if input.family.is_some() { vec![input.spec()?] } else { standard_cases() };
        let mut rng = rng_from_seed(input.seed);
        for spec in specs {
            let draws = (0..samples).map(|_| Coordinates::random(&spec, &mut rng, DEFAULT_RADIUS)).collect();
            cases.push((spec, draws));
        }
    }
    let mut rows = Vec::new();
    let mut table = String::new();
    let mut all_ok = true;
    for (spec, draws) in &cases {
        let (mut d_dev, mut minor_identity, mut tangent, mut image) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        let mut failures = 0usize;
        let mut non_generic = 0usize;
        for coords in draws {
            match check_point(spec, coords) {
                Ok(c) => {
                    if c.d_dev > d_tol || c.minor_identity > m_tol || c.tangent > m_tol || c.image > m_tol {
                        failures += 1;
                    }
                    d_dev = d_dev.max(c.d_dev);
                    minor_identity = minor_identity.max(c.minor_identity);
                    tangent = tangent.max(c.tangent);
                    image = image.max(c.image);
                }
                Err(Error::NonGeneric { .. }) => {
                    non_generic += 1;
                    failures += 1;
                }
                Err(e) => return Err(e.into()),
            }
        }
        all_ok &= failures == 0;
        let status = if failures == 0 { "PASS" } else { "FAIL" };
        let _ = writeln!(
            table,
            "{status} {spec} draws={} max_d_dev={} minor_identity={} tangent={} image={} failures={failures}",
            draws.len(),
            format::real(d_dev),
            format::real(minor_identity),
            format::real(tangent),
            format::real(image)
        );
        rows.push(json!({
            "spec": spec.to_string(),
            "draws": draws.len(),
            "max_d_dev": d_dev,
            "max_minor_identity_dev": minor_identity,
            "max_tangent_violation": tangent,
            "max_image_violation": image,
            "non_generic": non_generic,
            "failures": failures,
        }));
    }
    let json = json!({
        "status": if all_ok { "pass" } else { "fail" },
        "d_tol": d_tol,
        "membership_tol": m_tol,
        "cases": rows,
    });
    Ok(Report { json, table: table.trim_end().to_string(), ok: all_ok })
}

pub fn enumerate(input: &Input, check_limits: bool) -> CliResult<Report> {
    let spec = input.spec()?;
    let reps = enumerate_components(&spec);
    let mut lines = Vec::new();
    let mut items = Vec::new();
    let mut ok = true;
    for rep in &reps {
        let mut item = rep.to_json();
        if check_limits {
            let r = check_rep(rep)?;
            ok &= r.converged;
            let final_dev = r.final_deviation.map_or("n/a".to_string(), format::real);
            lines.push(format!(
                "{rep} {} final_deviation={final_dev} monotone={}",
                if r.converged { "converged" } else { "not-converged" },
                r.monotone
            ));
            item["limit"] = r.to_json();
        } else {
            lines.push(rep.to_string());
        }
        items.push(item);
    }
    let mut json = json!({ "spec": spec.to_string(), "count": reps.len(), "components": items });
    if check_limits {
        json["limit_tol"] = json!(LIMIT_TOL);
    }
    Ok(Report { json, table: lines.join("\n"), ok })
}

pub fn golden_cmd(suite: &str, seed: Option<u64>, tol: Option<f64>) -> CliResult<Report> {
    let suites = if suite == "all" { Suite::ALL.to_vec() } else { vec![Suite::parse(suite)?] };
    let mut reports = Vec::new();
    let mut lines = Vec::new();
    for s in suites {
        let r = golden::run_suite(
            s,
            golden::GOLDEN_DRAWS,
            seed.unwrap_or(golden::GOLDEN_SEED),
            golden::GOLDEN_RADIUS,
            tol.unwrap_or(golden::GOLDEN_TOL),
        )?;
        lines.push(format!(
            "{} {} draws={} max_rel_dev={} failing_draws={}",
            s.name(),
            if r.passed { "PASS" } else { "FAIL" },
            r.draws,
            format::real(r.max_rel_dev),
            r.failing_draws
        ));
        reports.push(r);
    }
    let ok = reports.iter().all(|r| r.passed);
    let json = json!({ "status": if ok { "pass" } else { "fail" }, "suites": reports });
    Ok(Report { json, table: lines.join("\n"), ok })
}

pub fn verify_rep(n: usize, samples: usize, seed: u64, tol: Option<f64>) -> CliResult<Report> {
    let r = verify_conjugacy(n, samples, seed)?;
    let ok = r.passes(tol.unwrap_or(1e-10));
    let table = format!(
        "{} n={n} samples={samples} conjugacy={} fixed_transport={} symplectic_conjugacy={} symplectic_fixed_transport={} fixed_rank={}/{} involutive={} triangular_split={}",
        if ok { "PASS" } else { "FAIL" },
        format::real(r.max_conjugacy_dev),
        format::real(r.max_fixed_transport_dev),
        format::real(r.symplectic_max_conjugacy_dev),
        format::real(r.symplectic_max_fixed_transport_dev),
        r.fixed_rank,
        r.expected_fixed_rank,
        r.involutive_exact,
        r.triangular_split
    );
    let json = serde_json::to_value(&r).expect("serializable");
    Ok(Report { json, table, ok })
}
