use approx::assert_relative_eq;
use hypgraph_core::mass::DEFAULT_SCHEDULE;
use hypgraph_core::profile::horizon_radius;
use hypgraph_core::{ball_volume, mass_estimate, omega, sphere_area, GraphManifold};
use statrs::function::gamma::gamma;

/// 1 + ρ² − 2mρ^{2−n}; the graph metric is dρ²/F + ρ²σ.
fn lapse_sq(n: usize, m: f64, rho: f64) -> f64 {
    1.0 + rho * rho - 2.0 * m * rho.powi(2 - n as i32)
}

fn bisect_oracle(mut g: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0) == (g(hi) > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn omega_matches_gamma_function() {
    for n in 2..=9 {
        let expected = 2.0 * std::f64::consts::PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0);
        assert_relative_eq!(omega(n).unwrap(), expected, max_relative = 1e-13);
    }
}

#[test]
fn ball_volume_closed_forms() {
    let pi = std::f64::consts::PI;
    for &r in &[0.1f64, 0.7, 1.5, 3.0] {
        let three = pi * ((2.0 * r).sinh() - 2.0 * r);
        assert_relative_eq!(ball_volume(3, r).unwrap(), three, max_relative = 1e-11);
        let c = r.cosh();
        let four = 2.0 * pi * pi / 3.0 * (c * c * c - 3.0 * c + 2.0);
        assert_relative_eq!(ball_volume(4, r).unwrap(), four, max_relative = 1e-11);
    }
}

#[test]
fn sphere_area_is_derivative_of_ball_volume() {
    for n in 3..=5 {
        for &r in &[0.4, 1.0, 2.5] {
            let h = 1e-3;
            let v = |x: f64| ball_volume(n, x).unwrap();
            let fd = (v(r - 2.0 * h) - 8.0 * v(r - h) + 8.0 * v(r + h) - v(r + 2.0 * h)) / (12.0 * h);
            assert_relative_eq!(fd, sphere_area(n, r).unwrap(), max_relative = 1e-9);
        }
    }
}

#[test]
fn horizon_is_zero_of_lapse() {
    for n in 3..=6 {
        for &m in &[1e-3, 0.02, 0.5, 1.0, 7.0] {
            let oracle = bisect_oracle(|x| lapse_sq(n, m, x), 1e-12, 10.0);
            assert_relative_eq!(horizon_radius(n, m).unwrap(), oracle, max_relative = 1e-12);
        }
    }
}

#[test]
fn induced_metric_matches_schwarzschild_form() {
    for n in 3..=5 {
        let m = 0.5;
        let g = GraphManifold::ads_schwarzschild(n, m).unwrap();
        let rp = g.profile.rho_plus();
        for &rho in &[rp * 1.5, rp + 1.0, 4.0, 30.0] {
            let met = g.induced_metric(rho).unwrap();
            assert_relative_eq!(met.g_rhorho, 1.0 / lapse_sq(n, m, rho), max_relative = 1e-10);
            let decay = 2.0 * m * rho.powi(2 - n as i32) / lapse_sq(n, m, rho);
            assert_relative_eq!(g.gradient_decay(rho).unwrap(), decay, max_relative = 1e-10);
        }
    }
}

#[test]
fn slope_matches_finite_difference_of_profile() {
    let g = GraphManifold::ads_schwarzschild(3, 0.5).unwrap();
    let p = &g.profile;
    for &rho in &[1.2, 2.0, 5.0] {
        let h = 1e-4;
        let fd = (p.value(rho + h).unwrap() - p.value(rho - h).unwrap()) / (2.0 * h);
        assert_relative_eq!(p.slope(rho).unwrap(), fd, max_relative = 1e-6);
    }
}

#[test]
fn vacuum_scalar_curvature() {
    for n in 3..=5 {
        let g = GraphManifold::ads_schwarzschild(n, 0.3).unwrap();
        let rp = g.profile.rho_plus();
        let expected = -((n * (n - 1)) as f64);
        for &rho in &[rp * 1.2, 2.0, 10.0] {
            let r = g.scalar_curvature(rho).unwrap();
            assert!((r - expected).abs() < 1e-8, "n = {n}, ρ = {rho}: R = {r}");
        }
    }
}

#[test]
fn mass_recovered_across_dimensions() {
    for n in 3..=5 {
        for &m in &[0.02, 0.5, 1.0] {
            let g = GraphManifold::ads_schwarzschild(n, m).unwrap();
            let rep = mass_estimate(&g, &DEFAULT_SCHEDULE).unwrap();
            assert!(rep.convergence_ok, "n = {n}, m = {m}: {:?}", rep.warning);
            assert_relative_eq!(rep.mass, m, max_relative = 1e-6);
        }
    }
}

#[test]
fn profile_value_stable_under_quadrature_refinement() {
    let g = GraphManifold::ads_schwarzschild(3, 0.1).unwrap();
    let coarse = g.profile.clone();
    let fine = coarse.clone().with_quadrature(coarse.quadrature().refined()).unwrap();
    for &rho in &[0.5, 2.0, 8.0] {
        assert_relative_eq!(coarse.value(rho).unwrap(), fine.value(rho).unwrap(), max_relative = 1e-9);
    }
    assert_relative_eq!(coarse.sup(), fine.sup(), max_relative = 1e-9);
}
