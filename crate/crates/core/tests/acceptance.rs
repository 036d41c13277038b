//! Exit criteria: one PASS/FAIL line per criterion; exits non-zero if any fails.

use std::process::ExitCode;

use cayley_bruhat::bruhat::{d_via_ldu, minor_identity_check};
use cayley_bruhat::components::{enumerate_by_filter, limit_check, DEFAULT_T_GRID, LIMIT_TOL};
use cayley_bruhat::golden::{run_default, Suite};
use cayley_bruhat::linalg::rel_dev;
use cayley_bruhat::rep_compat::verify_conjugacy;
use cayley_bruhat::sample::{random_tangent, rng_from_seed};
use cayley_bruhat::space::specs_with_ambient;
use cayley_bruhat::{
    cayley, construct_witness, d_via_cayley, d_via_fredholm, d_via_minors, enumerate_components, ldu, verify_image,
    CMatrix, ComponentRep, Error, SpaceSpec, C64,
};

const ORACLE_TOL: f64 = 1e-8;
const MINOR_IDENTITY_TOL: f64 = 1e-9;
const MEMBERSHIP_TOL: f64 = 1e-9;
const S2_TOL: f64 = 1e-12;
const CONJUGACY_TOL: f64 = 1e-10;
const DRAW_RADIUS: f64 = 0.7;
const ORACLE_DRAWS: usize = 200;
const MEMBERSHIP_DRAWS: usize = 1000;
const FREDHOLM_MAX: usize = 10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn cases() -> Vec<SpaceSpec> {
    vec![
        SpaceSpec::aiii(2, 3).unwrap(),
        SpaceSpec::diii(3).unwrap(),
        SpaceSpec::ci(3).unwrap(),
        SpaceSpec::cii(2, 2).unwrap(),
        SpaceSpec::bdi_even(4, 3).unwrap(),
        SpaceSpec::bdi_oddodd(3, 3).unwrap(),
    ]
}

fn max_pairwise(reports: &[Vec<C64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in reports.iter().enumerate() {
        for b in &reports[i + 1..] {
            for (x, y) in a.iter().zip(b) {
                worst = worst.max(rel_dev(*x, *y));
            }
        }
    }
    worst
}

/// Oracle equivalence (1) and the minor identity (2) over the same draws.
fn oracle_and_minor_identity() -> (Outcome, Outcome) {
    let mut d_worst = 0.0f64;
    let mut l_worst = 0.0f64;
    let mut failures = Vec::new();
    for (i, spec) in cases().iter().enumerate() {
        let mut rng = rng_from_seed(100 + i as u64);
        let mut case_worst = 0.0f64;
        for _ in 0..ORACLE_DRAWS {
            let (_, x) = random_tangent(spec, &mut rng, DRAW_RADIUS);
            let g = cayley(&x).expect("1 + X is invertible for skew-Hermitian X");
            let routes = (|| -> cayley_bruhat::Result<Vec<Vec<C64>>> {
                let mut r = vec![ldu(&g)?.d.diagonal(), d_via_minors(&g)?.entries, d_via_cayley(&x)?.entries];
                if spec.ambient() <= FREDHOLM_MAX {
                    r.push(d_via_fredholm(&x, FREDHOLM_MAX)?.entries);
                }
                Ok(r)
            })();
            match routes {
                Ok(r) => case_worst = case_worst.max(max_pairwise(&r)),
                Err(e) => failures.push(format!("{spec}: {e}")),
            }
            l_worst = l_worst.max(minor_identity_check(&x).unwrap_or(f64::INFINITY));
        }
        d_worst = d_worst.max(case_worst);
    }
    let d = Outcome {
        pass: failures.is_empty() && d_worst <= ORACLE_TOL,
        detail: format!("6 cases x {ORACLE_DRAWS} draws, max relative deviation {d_worst:.3e} (tol {ORACLE_TOL:e}), errors {}", failures.len()),
    };
    let l = Outcome {
        pass: l_worst <= MINOR_IDENTITY_TOL,
        detail: format!("max relative deviation {l_worst:.3e} (tol {MINOR_IDENTITY_TOL:e})"),
    };
    (d, l)
}

fn membership() -> Outcome {
    let mut worst = 0.0f64;
    let mut failing = 0usize;
    for (i, spec) in cases().iter().enumerate() {
        let mut rng = rng_from_seed(200 + i as u64);
        for _ in 0..MEMBERSHIP_DRAWS {
            let (_, x) = random_tangent(spec, &mut rng, DRAW_RADIUS);
            let report = verify_image(spec, &cayley(&x).unwrap()).unwrap();
            worst = worst.max(report.max_violation());
            if !report.passes(MEMBERSHIP_TOL) || report.family_condition.is_none() && spec.family().name() != "AIII" {
                failing += 1;
            }
        }
    }
    Outcome {
        pass: failing == 0,
        detail: format!("6 families x {MEMBERSHIP_DRAWS} draws, worst violation {worst:.3e} (tol {MEMBERSHIP_TOL:e}), failing {failing}"),
    }
}

fn golden() -> Outcome {
    let suites = [Suite::Cpn, Suite::So6u3, Suite::Hp1, Suite::Rp6, Suite::Rp5];
    let mut parts = Vec::new();
    let mut pass = true;
    for s in suites {
        let r = run_default(s).unwrap();
        pass &= r.passed;
        parts.push(format!("{} {} ({:.2e})", s.name(), if r.passed { "ok" } else { "FAIL" }, r.max_rel_dev));
    }
    Outcome { pass, detail: parts.join(", ") }
}

fn sphere() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let z = C64::from_polar((1.0f64 / 3.0).sqrt(), 0.3);
    let x = CMatrix::from_rows(vec![vec![C64::new(0.0, 0.0), z], vec![-z.conj(), C64::new(0.0, 0.0)]]).unwrap();
    let expected = [C64::new(0.5, 0.0), C64::new(2.0, 0.0)];
    let routes = [d_via_cayley(&x).unwrap().entries, d_via_minors(&cayley(&x).unwrap()).unwrap().entries];
    let dev = routes.iter().flat_map(|r| r.iter().zip(&expected).map(|(a, b)| (a - b).norm())).fold(0.0, f64::max);
    pass &= dev <= S2_TOL;
    notes.push(format!("|z|^2 = 1/3 deviation {dev:.1e}"));

    let spec = SpaceSpec::aiii(1, 1).unwrap();
    let rep = ComponentRep::parse(&spec, "--").unwrap();
    let w = construct_witness(&rep).unwrap();
    let mut worst = 0.0f64;
    for t in DEFAULT_T_GRID {
        let d = d_via_cayley(&w.scale_real(t)).unwrap().entries;
        // closed form at |z| = t: d = ((1 - t^2)/(1 + t^2), (1 + t^2)/(1 - t^2))
        let d11 = (1.0 - t * t) / (1.0 + t * t);
        let oracle = [(d11 + 1.0).abs(), (1.0 / d11 + 1.0).abs()];
        worst = worst.max(((d[0] + 1.0).norm() - 2.0 / (1.0 + t * t)).abs());
        for k in 0..2 {
            worst = worst.max(((d[k] + 1.0).norm() - oracle[k]).abs());
        }
    }
    pass &= worst <= S2_TOL;
    notes.push(format!("witness deviations match closed form to {worst:.1e} (entry 2 follows 2/(t^2-1))"));
    Outcome { pass, detail: notes.join("; ") }
}

fn enumeration() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    let s2 = enumerate_components(&SpaceSpec::aiii(1, 1).unwrap()).len();
    pass &= s2 == 2;
    notes.push(format!("S^2 reps {s2}"));
    let rp_even: Vec<usize> = (1..=4).map(|n| enumerate_components(&SpaceSpec::bdi(1, 2 * n).unwrap()).len()).collect();
    pass &= rp_even.iter().all(|&c| c == 1);
    notes.push(format!("RP^2..RP^8 reps {rp_even:?}"));
    let mut mismatches = 0;
    let mut unconverged = 0;
    let mut checked = 0;
    for spec in specs_with_ambient(1..=8) {
        let reps = enumerate_components(&spec);
        if reps != enumerate_by_filter(&spec).unwrap() {
            mismatches += 1;
        }
        for rep in reps.iter().filter(|r| !r.is_identity()) {
            checked += 1;
            let converged = construct_witness(rep)
                .and_then(|x| limit_check(rep, &x, &DEFAULT_T_GRID))
                .map(|r| r.final_deviation.is_some_and(|d| d <= LIMIT_TOL))
                .unwrap_or(false);
            if !converged {
                unconverged += 1;
            }
        }
    }
    pass &= mismatches == 0 && unconverged == 0;
    notes.push(format!("brute-force mismatches {mismatches}; witnesses {checked}, unconverged {unconverged}"));
    Outcome { pass, detail: notes.join("; ") }
}

fn conjugacy() -> Outcome {
    let mut worst = 0.0f64;
    let mut pass = true;
    for n in 2..=8 {
        let r = verify_conjugacy(n, 100, 300 + n as u64).unwrap();
        pass &= r.passes(CONJUGACY_TOL);
        worst = worst
            .max(r.max_conjugacy_dev)
            .max(r.max_fixed_transport_dev)
            .max(r.symplectic_max_conjugacy_dev)
            .max(r.symplectic_max_fixed_transport_dev);
    }
    Outcome { pass, detail: format!("n = 2..8, worst deviation {worst:.2e} (tol {CONJUGACY_TOL:e}), split preserved: {pass}") }
}

fn nongeneric() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for phase in [0.0, 1.1] {
        let z = C64::from_polar(1.0, phase);
        let x = CMatrix::from_rows(vec![vec![C64::new(0.0, 0.0), z], vec![-z.conj(), C64::new(0.0, 0.0)]]).unwrap();
        let g = cayley(&x).unwrap();
        let at_one = |r: Result<_, Error>| matches!(r, Err(Error::NonGeneric { k: 1, .. }));
        let minor = at_one(d_via_minors(&g).map(|_| ()));
        let det = at_one(d_via_cayley(&x).map(|_| ()));
        let lu = at_one(ldu(&g).map(|_| ())) && at_one(d_via_ldu(&g).map(|_| ()));
        pass &= minor && det && lu;
        notes.push(format!("arg z = {phase}: minors {minor}, cayley {det}, ldu {lu}"));
    }
    Outcome { pass, detail: notes.join("; ") }
}

fn main() -> ExitCode {
    let (c1, c2) = oracle_and_minor_identity();
    let results = [
        ("1 three-way oracle equivalence", c1),
        ("2 leading-minor identity", c2),
        ("3 image membership", membership()),
        ("4 closed-form suites", golden()),
        ("5 sphere quantitative check", sphere()),
        ("6 component enumeration", enumeration()),
        ("7 representation conjugacy", conjugacy()),
        ("8 nongenericity detection", nongeneric()),
    ];
    let mut all = true;
    for (name, o) in &results {
        all &= o.pass;
        println!("criterion {name}: {} [{}]", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
