//! Property-based checks of the structural identities: facts that must
//! hold on the whole parameter space, not just at reference tuples.

use ckn::engine::{ckn_ratio, refined_holder_residual, remainder_rp, rp_integral_form};
use ckn::extremals::{make_test_profile, TestProfileKind};
use ckn::geometry::ModelSpace;
use ckn::params::CknParams;
use proptest::prelude::*;

fn admissible_params() -> impl Strategy<Value = CknParams> {
    (2u32..=6, 1.2f64..3.5, 0.4f64..4.0, -1.5f64..1.5, -2.5f64..2.5)
        .prop_filter_map("inadmissible", |(n, p, r, alpha, beta)| {
            let params = CknParams::new(n, p, r, alpha, beta).ok()?;
            params.is_admissible().then_some(params)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    // The balance condition in its product form: γr = 1 + α − β/p + β.
    #[test]
    fn balance_identity(params in admissible_params()) {
        let lhs = params.gamma() * params.r;
        let rhs = 1.0 + params.alpha - params.beta / params.p + params.beta;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    // Discrete refined Hölder: the weighted pairing equals the product of
    // norms times one minus the mean R_p remainder, exactly.
    #[test]
    fn refined_holder_is_exact(
        p in 1.2f64..4.0,
        rows in prop::collection::vec(
            ((-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0),
             (-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0),
             0.01f64..1.0),
            3..12,
        ),
    ) {
        let f: Vec<Vec<f64>> = rows.iter().map(|(a, _, _)| vec![a.0, a.1, a.2]).collect();
        let g: Vec<Vec<f64>> = rows.iter().map(|(_, b, _)| vec![b.0, b.1, b.2]).collect();
        let w: Vec<f64> = rows.iter().map(|(_, _, w)| *w).collect();
        prop_assert!(refined_holder_residual(p, &f, &g, &w).abs() <= 1e-10);
    }

    // R_p has two faces: the algebraic convexity gap and the Taylor
    // remainder of |x|^p/p. They agree wherever both are defined; below
    // p = 2 the Hessian form needs the segment away from the origin.
    #[test]
    fn rp_dual_forms_agree(
        p in 2.0f64..5.0,
        xi in (-3.0f64..3.0, -3.0f64..3.0),
        eta in (-3.0f64..3.0, -3.0f64..3.0),
    ) {
        let xi = [xi.0, xi.1];
        let eta = [eta.0, eta.1];
        let direct = remainder_rp(p, &xi, &eta);
        let dual = rp_integral_form(p, &xi, &eta).unwrap();
        prop_assert!((direct - dual).abs() <= 1e-9 * direct.abs().max(1.0));
        // Nonnegativity of the convexity gap.
        prop_assert!(direct >= -1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    // Dilation invariance of the Euclidean ratio: every term scales by a
    // matching power of δ, so the quotient cannot move.
    #[test]
    fn euclidean_ratio_scaling_invariance(
        delta in prop::sample::select(vec![0.1f64, 0.5, 1.0, 2.0, 10.0]),
        kind in prop::sample::select(vec![TestProfileKind::Gaussian, TestProfileKind::PolyBump]),
    ) {
        let params = CknParams::new(3, 2.0, 2.0, 0.0, -2.0).unwrap();
        let space = ModelSpace::euclidean(3);
        let base = make_test_profile(kind, 1.0);
        let reference = ckn_ratio(&params, &space, &base).unwrap();
        let scaled = ckn_ratio(&params, &space, &base.dilate(delta)).unwrap();
        prop_assert!((scaled - reference).abs() <= 1e-9 * reference.abs());
    }
}
