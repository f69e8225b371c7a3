use hypgraph_core::capping::{psi, psi_inverse, psi_prime};
use hypgraph_core::levels::{level_set_area, perimeter_function};
use hypgraph_core::mass::extrapolate;
use hypgraph_core::regions::diameter_bound;
use hypgraph_core::{ball_volume, GraphManifold};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn psi_inverse_round_trip(v in 0.0f64..=1.0) {
        let x = psi_inverse(v);
        prop_assert!((0.0..=1.0).contains(&x));
        prop_assert!((psi(x) - v).abs() <= 1e-14, "v = {v}, psi(x) = {}", psi(x));
    }

    #[test]
    fn psi_is_increasing_bijection(a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(psi(lo) <= psi(hi));
        prop_assert!((0.0..=1.0).contains(&psi(a)));
        prop_assert!(psi_prime(a) >= 0.0);
    }

    #[test]
    fn ball_volume_increasing(n in 3usize..7, r in 0.01f64..4.0, dr in 0.001f64..1.0) {
        prop_assert!(ball_volume(n, r).unwrap() < ball_volume(n, r + dr).unwrap());
    }

    #[test]
    fn graph_profile_monotone_and_bounded(m in 0.001f64..2.0, t in 0.01f64..20.0) {
        let g = GraphManifold::ads_schwarzschild(3, m).unwrap();
        let p = &g.profile;
        let rho = p.rho_plus() + t;
        let v = p.value(rho).unwrap();
        prop_assert!(v >= 0.0 && v <= p.sup() * (1.0 + 1e-12));
        prop_assert!(p.slope(rho).unwrap() > 0.0);
        prop_assert!(g.gradient_decay(rho).unwrap() >= 0.0);
    }

    #[test]
    fn level_area_grows_with_height(m in 0.01f64..1.0, a in 0.05f64..0.95, b in 0.05f64..0.95) {
        let g = GraphManifold::ads_schwarzschild(3, m).unwrap();
        let s = g.profile.sup();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi - lo > 1e-3);
        prop_assert!(level_set_area(&g, lo * s).unwrap() < level_set_area(&g, hi * s).unwrap());
        prop_assert_eq!(perimeter_function(&g, s).unwrap(), f64::INFINITY);
    }

    #[test]
    fn diameter_bound_grows_with_radius(rho0 in 0.1f64..2.0, gamma in 0.0f64..3.0, depth in 0.0f64..5.0, dr in 0.0f64..3.0) {
        let a = diameter_bound(rho0, gamma, depth, rho0).unwrap();
        let b = diameter_bound(rho0, gamma, depth, rho0 + dr + 0.01).unwrap();
        prop_assert!(a < b);
    }

    #[test]
    fn extrapolation_recovers_exponential_tail(m in 0.01f64..5.0, amp in -1.0f64..1.0, c in 0.5f64..3.0) {
        let samples: Vec<(f64, f64)> = [6.0, 8.0, 10.0]
            .iter()
            .map(|&r| (r, m + amp * (-c * r).exp()))
            .collect();
        let rep = extrapolate(samples, 1e-3);
        prop_assert!((rep.mass - m).abs() <= 1e-9 * m.max(1.0), "mass {} vs {m}", rep.mass);
    }
}
