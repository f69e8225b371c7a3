//! Volumes of Ω(ρ) and the explicit estimates built on them.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::graph::GraphManifold;
use crate::hyperbolic::{ball_volume, omega, sphere_area};
use crate::levels::{height_h0, height_threshold};
use crate::profile::RadialProfile;
use crate::quadrature::Quadrature;
use crate::roots::bisect;

/// Grid resolution used to locate crossings before bisection.
const SCAN_POINTS: usize = 96;

#[derive(Debug, Clone, PartialEq)]
pub struct VolumeBounds {
    pub vol_omega: f64,
    pub vol_ball: f64,
    pub vol_u: f64,
    /// vol B − vol U
    pub lower: f64,
    /// Closed-form upper bound with C = 1 and |h₀ − min f| ≤ D₀.
    pub upper: f64,
    /// Upper bound assembled from the explicit coarea pieces.
    pub upper_exact: f64,
    /// vol Ω(ρ) ∩ {f < h₀} and its bound threshold·(1/(n−1) + cosh ρ·(h₀ − min f)).
    pub vol_minus: f64,
    pub minus_bound: f64,
    /// vol Ω(ρ) ∩ {f ≥ h₀} and its bound vol B + cosh ρ·vol ∂B·(max f − h₀)₊.
    pub vol_plus: f64,
    pub plus_bound: f64,
    /// h₀ − min f over the region, computed exactly.
    pub h0_minus_min_f: f64,
    pub d0: f64,
    /// Set: the constant in `upper` is taken as 1, so it is a scaling check.
    pub scale_audit: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaBound {
    pub bound: f64,
    pub measured: f64,
}

/// Mass of the explicit filling between graph(f − h₀) and the slice s = 0
/// inside the ambient ball of coordinate radius ρ̄.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FlatBound {
    pub total: f64,
    /// (n+1)-volume between graph and slice.
    pub slab: f64,
    /// n-volume of the slice over U.
    pub disk: f64,
    /// n-area of ∂U × [−h₀, 0] clipped to the ball.
    pub wall: f64,
    /// n-area of the band of the ball's boundary between graph and slice.
    pub lateral: f64,
    /// Height by which the graph was shifted down.
    pub shift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionReport {
    pub rho: f64,
    pub vol_omega: f64,
    pub vol_ball: f64,
    pub upper_bound: f64,
    pub lower_bound: f64,
    pub d0: f64,
    pub c0: f64,
    pub gamma_lip: f64,
    pub flat_bound: f64,
    pub all_bounds_hold: bool,
}

/// ω ρ^{n−1} √(1 + V²|∇f|²)/√W in the variable u with ρ = ρ₊ + u² (including dρ = 2u du).
fn volume_density(p: &RadialProfile, w_n: f64, u: f64) -> f64 {
    let rho = p.rho_plus() + u * u;
    let w = 1.0 + rho * rho;
    let rs = p.regular_slope(u);
    w_n * rho.powi(p.n() as i32 - 1) * (4.0 * u * u + w * w * rs * rs).sqrt() / w.sqrt()
}

fn volume_between(p: &RadialProfile, quad: &Quadrature, rho_a: f64, rho_b: f64) -> Result<f64> {
    let w_n = omega(p.n())?;
    let rp = p.rho_plus();
    let ua = (rho_a - rp).max(0.0).sqrt();
    let ub = (rho_b - rp).max(0.0).sqrt();
    quad.integrate(ua, ub, |u| volume_density(p, w_n, u))
}

fn check_radius(p: &RadialProfile, rho_r: f64) -> Result<()> {
    let r_plus = p.r_plus();
    if !(rho_r >= r_plus * (1.0 + 1e-9)) || !rho_r.is_finite() {
        return Err(domain!("region radius {rho_r} must exceed r₊ = {r_plus}"));
    }
    Ok(())
}

/// vol_g Ω(ρ) for the geodesic radius `rho_r`.
pub fn omega_volume(g: &GraphManifold, rho_r: f64) -> Result<f64> {
    omega_volume_with(g, rho_r, g.profile.quadrature())
}

pub fn omega_volume_with(g: &GraphManifold, rho_r: f64, quad: &Quadrature) -> Result<f64> {
    check_radius(&g.profile, rho_r)?;
    volume_between(&g.profile, quad, g.profile.rho_plus(), rho_r.sinh())
}

/// Volumes of Ω(ρ) ∩ {ρ < ρ_split} and Ω(ρ) ∩ {ρ ≥ ρ_split}.
pub fn omega_volume_split(g: &GraphManifold, rho_r: f64, rho_split: f64) -> Result<(f64, f64)> {
    check_radius(&g.profile, rho_r)?;
    let p = &g.profile;
    let quad = p.quadrature();
    let outer = rho_r.sinh();
    let cut = rho_split.clamp(p.rho_plus(), outer);
    Ok((
        volume_between(p, quad, p.rho_plus(), cut)?,
        volume_between(p, quad, cut, outer)?,
    ))
}

/// 2D + 2(ρ − ρ₀)√(1+γ²) + π sinh(ρ₀)√(1+γ²).
pub fn diameter_bound(rho0: f64, gamma: f64, depth: f64, rho: f64) -> Result<f64> {
    if !(rho0 > 0.0) || !(rho >= rho0) {
        return Err(domain!("diameter bound needs ρ ≥ ρ₀ > 0, got ρ₀ = {rho0}, ρ = {rho}"));
    }
    let k = (1.0 + gamma * gamma).sqrt();
    Ok(2.0 * depth + 2.0 * (rho - rho0) * k + core::f64::consts::PI * rho0.sinh() * k)
}

/// max(1, π sinh ρ / (ρ − ρ₀/2)) √(1+γ²).
pub fn annulus_lipschitz(rho0: f64, rho: f64, gamma: f64) -> Result<f64> {
    if !(rho > 0.5 * rho0) {
        return Err(domain!("annulus constant needs ρ > ρ₀/2, got ρ₀ = {rho0}, ρ = {rho}"));
    }
    let k = (1.0 + gamma * gamma).sqrt();
    Ok((core::f64::consts::PI * rho.sinh() / (rho - 0.5 * rho0)).max(1.0) * k)
}

/// Bound 2ω m + √(1+γ²) vol ∂B(ρ) against the measured vol ∂U + vol Σ(ρ).
pub fn boundary_area_bound(g: &GraphManifold, mass: f64, rho: f64) -> Result<AreaBound> {
    let n = g.n();
    let w = omega(n)?;
    let sphere = sphere_area(n, rho)?;
    let bound = 2.0 * w * mass + (1.0 + g.gamma * g.gamma).sqrt() * sphere;
    let measured = w * g.profile.rho_plus().powi(n as i32 - 1) + sphere;
    Ok(AreaBound { bound, measured })
}

pub fn volume_bounds(g: &GraphManifold, mass: f64, rho_r: f64, beta: f64) -> Result<VolumeBounds> {
    if !(mass < 1.0) {
        return Err(Error::OutOfHypothesis(alloc::format!("volume bound requires mass < 1, got {mass}")));
    }
    let p = &g.profile;
    check_radius(p, rho_r)?;
    let n = g.n();
    let nf = n as f64;
    let w_n = omega(n)?;
    let heights = height_h0(g, mass, beta)?;
    let h0 = heights.h0;
    let vol_ball = ball_volume(n, rho_r)?;
    let vol_u = ball_volume(n, p.r_plus())?;
    let sphere = sphere_area(n, rho_r)?;
    let ch = rho_r.cosh();
    let d0 = diameter_bound(g.rho0, g.gamma, g.depth, rho_r)?;

    let rho_split = if mass == 0.0 { p.rho_plus() } else { heights.rho_h };
    let (vol_minus, vol_plus) = omega_volume_split(g, rho_r, rho_split)?;
    let vol_omega = vol_minus + vol_plus;

    let min_f = 0.0;
    let max_f = p.value(rho_r.sinh())?;
    let h0_minus_min_f = (h0 - min_f).max(0.0).min(max_f.max(h0));
    let threshold = height_threshold(n, mass, beta)?;
    let minus_bound = threshold * (1.0 / (nf - 1.0) + ch * h0_minus_min_f);
    let plus_bound = vol_ball + ch * sphere * (max_f - h0).max(0.0);

    let c_n = 1.0 / (nf - 1.0);
    let upper = vol_ball
        + mass.powf(1.0 / (nf - 2.0)) * ch * sphere
        + 2.0 * beta * w_n * mass * (c_n + ch * d0);
    Ok(VolumeBounds {
        vol_omega,
        vol_ball,
        vol_u,
        lower: vol_ball - vol_u,
        upper,
        upper_exact: minus_bound + plus_bound,
        vol_minus,
        minus_bound,
        vol_plus,
        plus_bound,
        h0_minus_min_f,
        d0,
        scale_audit: true,
    })
}

/// Splits [a, b] at the sign changes of `k`, located on a uniform grid and refined by bisection.
fn crossings<F: Fn(f64) -> f64>(k: F, a: f64, b: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    let mut prev_x = a;
    let mut prev = k(a);
    for i in 1..=SCAN_POINTS {
        let x = a + (b - a) * i as f64 / SCAN_POINTS as f64;
        let v = k(x);
        if prev != 0.0 && v != 0.0 && prev.signum() != v.signum() && prev.is_finite() && v.is_finite() {
            if let Ok(root) = bisect(&k, prev_x, x, 0.0, 200) {
                pts.push(root);
            }
        }
        prev_x = x;
        prev = v;
    }
    pts
}

pub fn flat_distance_bound(g: &GraphManifold, mass: f64, rho_bar: f64, beta: f64) -> Result<FlatBound> {
    flat_distance_bound_with(g, mass, rho_bar, beta, g.profile.quadrature())
}

pub fn flat_distance_bound_with(
    g: &GraphManifold,
    mass: f64,
    rho_bar: f64,
    beta: f64,
    quad: &Quadrature,
) -> Result<FlatBound> {
    let p = &g.profile;
    let rp = p.rho_plus();
    if !(rho_bar > rp) || !rho_bar.is_finite() {
        return Err(domain!("ambient ball radius {rho_bar} must exceed ρ₊ = {rp}"));
    }
    if p.is_flat() {
        return Ok(FlatBound::default());
    }
    let n = g.n();
    let k = n as i32 - 1;
    let w_n = omega(n)?;
    let h0 = height_h0(g, mass, beta)?.h0;
    let f = |rho: f64| p.value(rho).map(|v| v - h0);
    // half-height of the ball over the point at coordinate ρ
    let s_max = |rho: f64| ((rho_bar * rho_bar - rho * rho).max(0.0) / (1.0 + rho * rho)).sqrt();

    // slab ω∫ ρ^{n−1} min(|f − h₀|, S(ρ)) dρ, pieces in u (ρ = ρ₊ + u²)
    let u_end = (rho_bar - rp).sqrt();
    let gap_vs_height = |u: f64| {
        let rho = rp + u * u;
        f(rho).map(|v| v.abs() - s_max(rho)).unwrap_or(f64::NAN)
    };
    let level_u = |u: f64| f(rp + u * u).unwrap_or(f64::NAN);
    let mut cuts = alloc::vec![0.0];
    cuts.extend(crossings(gap_vs_height, 0.0, u_end));
    cuts.extend(crossings(level_u, 0.0, u_end));
    cuts.push(u_end);
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite cut points"));
    cuts.dedup();
    let mut slab = 0.0;
    for w in cuts.windows(2) {
        let (ua, ub) = (w[0], w[1]);
        if ub <= ua {
            continue;
        }
        let mid = 0.5 * (ua + ub);
        if gap_vs_height(mid) <= 0.0 {
            slab += quad.integrate(ua, ub, |u| {
                let rho = rp + u * u;
                rho.powi(k) * f(rho).map(|v| v.abs()).unwrap_or(f64::NAN) * 2.0 * u
            })?;
        } else {
            // ρ = ρ̄ − v², so that S(ρ) = v √((ρ̄ + ρ)/(1 + ρ²)) stays smooth
            let va = (rho_bar - (rp + ub * ub)).max(0.0).sqrt();
            let vb = (rho_bar - (rp + ua * ua)).max(0.0).sqrt();
            slab += quad.integrate(va, vb, |v| {
                let rho = rho_bar - v * v;
                rho.powi(k) * v * ((rho_bar + rho) / (1.0 + rho * rho)).sqrt() * 2.0 * v
            })?;
        }
    }
    slab *= w_n;

    let disk = ball_volume(n, p.r_plus())?;
    let wall = w_n * rp.powi(k) * (1.0 + rp * rp).sqrt() * h0.min(s_max(rp));

    // lateral band on the ball boundary, parametrized by s with ρ(s)² = (ρ̄² − s²)/(1 + s²)
    let rb2 = rho_bar * rho_bar;
    let rho_of = |s: f64| ((rb2 - s * s).max(0.0) / (1.0 + s * s)).sqrt();
    let s_lim = s_max(rp);
    let band_test = |s: f64| s - f(rho_of(s)).unwrap_or(f64::NAN);
    let density = |s: f64| {
        let rho = rho_of(s);
        let w = 1.0 + rho * rho;
        let drho = -s * (1.0 + rb2) / ((1.0 + s * s) * (1.0 + s * s) * rho);
        w_n * rho.powi(k) * (w + drho * drho / w).sqrt()
    };
    let mut lateral = 0.0;
    for (lo, hi) in [(-s_lim, 0.0), (0.0, s_lim)] {
        let mut cuts = alloc::vec![lo];
        cuts.extend(crossings(band_test, lo, hi));
        cuts.push(hi);
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = 0.5 * (a + b);
            if b > a && mid * band_test(mid) <= 0.0 {
                lateral += quad.integrate(a, b, density)?;
            }
        }
    }
    Ok(FlatBound {
        total: slab + disk + wall + lateral,
        slab,
        disk,
        wall,
        lateral,
        shift: h0,
    })
}

pub fn region_report(g: &GraphManifold, mass: f64, rho_r: f64, rho_bar: f64, beta: f64) -> Result<RegionReport> {
    let vb = volume_bounds(g, mass, rho_r, beta)?;
    let area = boundary_area_bound(g, mass, rho_r)?;
    let gamma_lip = annulus_lipschitz(g.rho0, rho_r, g.gamma)?;
    let flat = flat_distance_bound(g, mass, rho_bar, beta)?;
    let all_bounds_hold = vb.lower <= vb.vol_omega
        && vb.vol_omega <= vb.upper_exact
        && vb.vol_omega <= vb.upper
        && vb.vol_minus <= vb.minus_bound
        && vb.vol_plus <= vb.plus_bound
        && area.measured <= area.bound;
    Ok(RegionReport {
        rho: rho_r,
        vol_omega: vb.vol_omega,
        vol_ball: vb.vol_ball,
        upper_bound: vb.upper,
        lower_bound: vb.lower,
        d0: vb.d0,
        c0: area.bound,
        gamma_lip,
        flat_bound: flat.total,
        all_bounds_hold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn flat_region_is_the_ball() {
        let g = GraphManifold::ads_schwarzschild(3, 0.0).unwrap();
        let v = omega_volume(&g, 1.0).unwrap();
        assert!((v - PI * ((2.0f64).sinh() - 2.0)).abs() < 1e-10);
        let b = volume_bounds(&g, 0.0, 1.0, 2.0).unwrap();
        assert_eq!(b.upper, b.lower);
        assert_eq!(flat_distance_bound(&g, 0.0, 3.0, 2.0).unwrap().total, 0.0);
    }

    #[test]
    fn diameter_examples() {
        let s1 = (1.0f64).sinh();
        assert!((diameter_bound(1.0, 0.0, 1.0, 2.0).unwrap() - (4.0 + PI * s1)).abs() < 1e-12);
        assert!((diameter_bound(1.0, 0.0, 0.0, 1.0).unwrap() - PI * s1).abs() < 1e-12);
        let v = diameter_bound(1.0, 1.0, 1.0, 2.0).unwrap();
        assert!((v - (2.0 + (2.0 + PI * s1) * 2f64.sqrt())).abs() < 1e-12);
        assert!(diameter_bound(1.0, 0.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn annulus_examples() {
        let a = annulus_lipschitz(1.0, 2.0, 0.0).unwrap();
        assert!((a - PI * (2.0f64).sinh() / 1.5).abs() < 1e-12);
        let b = annulus_lipschitz(1.0, 2.0, 1.0).unwrap();
        assert!((b - a * 2f64.sqrt()).abs() < 1e-12);
        assert!(annulus_lipschitz(0.2, 0.11, 0.0).unwrap() > 1.0);
        assert_eq!(annulus_lipschitz(1e-9, 100.0, 0.0).unwrap(), PI * (100.0f64).sinh() / (100.0 - 5e-10));
        assert!(annulus_lipschitz(1.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn out_of_hypothesis_mass() {
        let g = GraphManifold::ads_schwarzschild(3, 1.0).unwrap();
        assert!(matches!(volume_bounds(&g, 1.0, 3.0, 2.0), Err(Error::OutOfHypothesis(_))));
    }

    #[test]
    fn split_is_consistent() {
        let g = GraphManifold::ads_schwarzschild(3, 0.1).unwrap();
        let total = omega_volume(&g, 2.0).unwrap();
        let (a, b) = omega_volume_split(&g, 2.0, 0.6).unwrap();
        assert!((a + b - total).abs() < 1e-8);
    }
}
