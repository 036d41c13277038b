use proptest::prelude::*;

use cayley_bruhat::bruhat::{d_via_coroots, d_via_fredholm, genericity_tangent, ldu};
use cayley_bruhat::linalg::{antitranspose, det, principal_minor_expansion, rel_dev, DEFAULT_EXPANSION_CAP};
use cayley_bruhat::rep_compat::RepInvolution;
use cayley_bruhat::sample::{disc_matrix, random_tangent, rng_from_seed};
use cayley_bruhat::space::{specs_with_ambient, Group};
use cayley_bruhat::{build_tangent, cayley, cayley_inverse, d_via_cayley, verify_image, CMatrix, Coordinates, SpaceSpec};

fn specs() -> Vec<SpaceSpec> {
    specs_with_ambient(2..=8)
}

fn arb_spec() -> impl Strategy<Value = SpaceSpec> {
    let all = specs();
    (0..all.len()).prop_map(move |i| all[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn principal_minors_sum_to_det(n in 1usize..=7, seed in any::<u64>()) {
        let a = disc_matrix(&mut rng_from_seed(seed), n, n, 1.0);
        let expansion = principal_minor_expansion(&a, DEFAULT_EXPANSION_CAP).unwrap();
        let direct = det(&(&CMatrix::identity(n) + &a));
        prop_assert!((expansion - direct).norm() <= 1e-10 * (1.0 + direct.norm()));
    }

    #[test]
    fn antitranspose_reverses_products(n in 1usize..=6, k in 1usize..=6, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let a = disc_matrix(&mut rng, n, k, 1.0);
        let b = disc_matrix(&mut rng, k, n, 1.0);
        prop_assert_eq!(antitranspose(&antitranspose(&a)), a.clone());
        let lhs = antitranspose(&(&a * &b));
        let rhs = &antitranspose(&b) * &antitranspose(&a);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-14);
    }

    #[test]
    fn ldu_reconstructs(n in 1usize..=8, seed in any::<u64>()) {
        let g = disc_matrix(&mut rng_from_seed(seed), n, n, 1.0);
        if let Ok(f) = ldu(&g) {
            prop_assert!(f.product().max_abs_diff(&g) <= 1e-8 * (1.0 + g.max_abs()));
        }
    }

    #[test]
    fn cayley_images_are_members(spec in arb_spec(), seed in any::<u64>()) {
        let (_, x) = random_tangent(&spec, &mut rng_from_seed(seed), 0.7);
        let g = cayley(&x).unwrap();
        prop_assert!(verify_image(&spec, &g).unwrap().passes(1e-9));
        prop_assert!(cayley_inverse(&g).unwrap().max_abs_diff(&x) <= 1e-9);
    }

    #[test]
    fn routes_to_d_agree(spec in arb_spec(), seed in any::<u64>()) {
        let (_, x) = random_tangent(&spec, &mut rng_from_seed(seed), 0.7);
        prop_assume!(genericity_tangent(&x).iter().all(|&b| b));
        let a = d_via_cayley(&x).unwrap();
        let b = d_via_fredholm(&x, DEFAULT_EXPANSION_CAP).unwrap();
        let c = d_via_coroots(&spec, &x).unwrap();
        prop_assert!(a.max_rel_dev(&b) <= 1e-8);
        prop_assert!(a.max_rel_dev(&c) <= 1e-8);
        prop_assert!(rel_dev(a.product, 1.0.into()) <= 1e-8);
        if spec.group() != Group::Special {
            let n = a.entries.len();
            for k in 0..n {
                prop_assert!(((a.entries[k] * a.entries[n - 1 - k]).norm() - 1.0).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn payload_json_round_trips(spec in arb_spec(), seed in any::<u64>()) {
        let coords = Coordinates::random(&spec, &mut rng_from_seed(seed), 0.7);
        let text = serde_json::to_string(&coords.document_json(&spec)).unwrap();
        let (spec2, back) = Coordinates::from_document_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(spec2, spec);
        prop_assert_eq!(build_tangent(&spec, &back).unwrap(), build_tangent(&spec, &coords).unwrap());
    }

    #[test]
    fn rep_involutions_are_exact(n in 1usize..=5, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let a = disc_matrix(&mut rng, n, n, 1.0);
        let b = disc_matrix(&mut rng, 2 * n, 2 * n, 1.0);
        for t in [RepInvolution::Standard, RepInvolution::Antidiagonal] {
            prop_assert_eq!(t.apply(&t.apply(&a)), a.clone());
        }
        for t in [RepInvolution::SymplecticAntidiagonal, RepInvolution::SymplecticStandard] {
            prop_assert_eq!(t.apply(&t.apply(&b)), b.clone());
        }
    }
}
