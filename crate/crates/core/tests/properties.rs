//! Property tests for invariants that hold on every admissible input.

use proptest::prelude::*;

use staticgeo::boundary::{classify, measure_boundary, BoundaryClassification, ClassifyTolerances};
use staticgeo::config::RunConfig;
use staticgeo::conformal::{build_pair, scalar_transform_check, Sign};
use staticgeo::mass::{horizon_mass, photon_mass};
use staticgeo::report::format_float;
use staticgeo::rigidity::{solve_exterior_laplace, LaplaceGrid};
use staticgeo::sampling::shell_point;
use staticgeo::schwarzschild::{Cut, SchwarzschildModel};
use staticgeo::spectral::{friedcomp_check, Branch, EQUALITY_TOL};
use staticgeo::tensor::curvature::curvature_at;
use staticgeo::triple::static_vacuum_residual;

fn horizon_radius(n: usize, m: f64) -> f64 {
    (2.0 * m).powf(1.0 / (n as f64 - 2.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn schwarzschild_is_static_vacuum_and_conformally_flat(
        n in 3usize..=5,
        m in 0.2f64..3.0,
        areal in any::<bool>(),
        u in prop::collection::vec(0.0f64..1.0, 5),
    ) {
        let model = SchwarzschildModel::new(n, m).unwrap();
        let t = if areal { model.areal_triple(None) } else { model.isotropic_triple(None) }.unwrap();
        let x = shell_point(&u[..n], n, t.chart.layout, t.sample_shell);
        prop_assert!(static_vacuum_residual(&t, &x).unwrap().max_abs() <= 1e-8);
        for sign in [Sign::Plus, Sign::Minus] {
            let pair = build_pair(&t, sign).unwrap();
            prop_assert!(curvature_at(&pair.derived, &x).unwrap().max_abs_riemann() <= 1e-7);
            let check = scalar_transform_check(&pair, &t.lapse, &x).unwrap();
            prop_assert!(check.residual <= 1e-8 * check.direct.abs().max(1.0));
        }
    }

    #[test]
    fn sphere_cuts_are_photon_surfaces_with_constant_inverse_lapse_squared(
        n in 3usize..=5,
        m in 0.3f64..2.0,
        factor in 1.1f64..6.0,
    ) {
        let model = SchwarzschildModel::new(n, m).unwrap();
        let r = factor * horizon_radius(n, m);
        let t = model.areal_triple(Some(Cut::Areal(r))).unwrap();
        let data = measure_boundary(&t, &t.boundaries[0]).unwrap();
        let class = classify(&data, &ClassifyTolerances::default());
        let BoundaryClassification::GeneralizedQps { c, n0, .. } = class else {
            return Err(TestCaseError::fail(format!("not a photon surface: {class:?}")));
        };
        prop_assert!((c - 1.0 / (n0 * n0)).abs() <= 1e-8 * c);
        prop_assert!((c - model.photon_sphere_constant(r).unwrap()).abs() <= 1e-8 * c);
        prop_assert!((photon_mass(data.area, c, n) - m).abs() <= 1e-8 * m.max(1.0));
    }

    #[test]
    fn horizon_area_determines_the_mass(n in 3usize..=5, m in 0.2f64..3.0) {
        let t = SchwarzschildModel::new(n, m).unwrap().isotropic_triple(Some(Cut::Horizon)).unwrap();
        let data = measure_boundary(&t, &t.boundaries[0]).unwrap();
        prop_assert!(classify(&data, &ClassifyTolerances::default()).is_horizon());
        prop_assert!((horizon_mass(data.area, n) - m).abs() <= 1e-8 * m.max(1.0));
    }

    #[test]
    fn friedcomp_margin_factors(c in 1.0001f64..10.0, n0 in 0.01f64..0.99) {
        let f = friedcomp_check(c, n0);
        let factored = (c - 1.0) * (1.0 - c * n0 * n0);
        prop_assert!((f.margin - factored).abs() <= 1e-12 * c * c);
        let expected = if factored.abs() <= EQUALITY_TOL {
            Branch::Both
        } else if n0 < c.powf(-0.5) {
            Branch::Friedrich
        } else {
            Branch::GMinus
        };
        prop_assert_eq!(f.branch, expected);
    }

    #[test]
    fn formatted_floats_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let s = format_float(x);
        prop_assert_eq!(s.parse::<f64>().unwrap(), x);
    }

    #[test]
    fn unknown_config_keys_are_rejected(key in "[a-z]{3,10}") {
        prop_assume!(!["fixture", "n", "m", "cut", "declared_flat", "expression"].contains(&key.as_str()));
        let text = format!("[triple]\nfixture = \"flat\"\n{key} = 1\n");
        prop_assert!(RunConfig::from_str_any(&text).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn laplace_error_shrinks_under_refinement(n in 3usize..=5, s0 in 0.2f64..3.0, bv in 1.05f64..3.0) {
        let coarse = LaplaceGrid { intervals: 2_000, tolerance: 1.0, ..LaplaceGrid::default() };
        let fine = LaplaceGrid { intervals: 8_000, tolerance: 1.0, ..LaplaceGrid::default() };
        let a = solve_exterior_laplace(n, s0, bv, &coarse).unwrap();
        let b = solve_exterior_laplace(n, s0, bv, &fine).unwrap();
        prop_assert!(b.max_error() < a.max_error());
        prop_assert!(b.max_error() <= 1e-6);
        let exact = 2.0 * (bv - 1.0) * s0.powf(n as f64 - 2.0);
        prop_assert!((b.mass() - exact).abs() <= 1e-5 * exact.max(1.0));
    }
}
