use helixwg::geometry::*;
use proptest::prelude::*;

fn curve(r0: f64, b0: f64, amp: f64, center: f64, eps: f64) -> PerturbedHelix {
    PerturbedHelix::new(HelixParams::new(r0, b0).unwrap(), PerturbationProfile::bump(amp, center, 1.0, eps)).unwrap()
}

fn params() -> impl Strategy<Value = (f64, f64, f64, f64, f64)> {
    (0.3f64..3.0, 0.3f64..3.0, -1.0f64..1.0, -1.0f64..1.0, 0.0f64..0.1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn frames_are_orthonormal_and_right_handed((r0, b0, amp, c, eps) in params(), t in -3.0f64..3.0) {
        let f = frenet_frame(&curve(r0, b0, amp, c, eps), t).unwrap();
        let (a, n, b) = (f.tangent, f.normal, f.binormal);
        for (u, v, want) in [(a, a, 1.0), (n, n, 1.0), (b, b, 1.0), (a, n, 0.0), (a, b, 0.0), (n, b, 0.0)] {
            prop_assert!((u.dot(&v) - want).abs() < 1e-12);
        }
        prop_assert!((a.cross(&n) - b).norm() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn unperturbed_curvature_and_torsion(r0 in 0.1f64..5.0, b0 in 0.1f64..5.0, t in -10.0f64..10.0) {
        let (k, tau) = curvature_torsion(&curve(r0, b0, 1.0, 0.0, 0.0), t);
        let p2 = (r0 * b0).powi(2);
        prop_assert!((k - r0 * b0 * b0 / (1.0 + p2)).abs() < 1e-10);
        prop_assert!((tau - b0 / (1.0 + p2)).abs() < 1e-10);
    }

    #[test]
    fn frenet_serret_by_finite_differences((r0, b0, amp, c, eps) in params(), t in -2.0f64..2.0) {
        let g = curve(r0, b0, amp, c, eps);
        let h = 1e-4;
        let (fm, f0, fp) = (frenet_frame(&g, t - h).unwrap(), frenet_frame(&g, t).unwrap(), frenet_frame(&g, t + h).unwrap());
        let ds = 2.0 * h * g.speed(t);
        let dt = (fp.tangent - fm.tangent) / ds;
        let dn = (fp.normal - fm.normal) / ds;
        let db = (fp.binormal - fm.binormal) / ds;
        prop_assert!((dt - f0.kappa * f0.normal).norm() < 1e-6);
        prop_assert!((dn - (-f0.kappa * f0.tangent + f0.tau * f0.binormal)).norm() < 1e-6);
        prop_assert!((db + f0.tau * f0.normal).norm() < 1e-6);
    }

    #[test]
    fn arc_length_increases_and_inverts((r0, b0, amp, c, eps) in params(), s in -4.0f64..4.0, ds in 0.01f64..1.0) {
        let g = curve(r0, b0, amp, c, eps);
        let t1 = arc_length_param(&g, s).unwrap();
        let t2 = arc_length_param(&g, s + ds).unwrap();
        prop_assert!(t2 > t1);
        prop_assert!(arc_length(&g, t2) > arc_length(&g, t1));
        prop_assert!((arc_length(&g, t1) - s).abs() < 1e-9);
    }
}
