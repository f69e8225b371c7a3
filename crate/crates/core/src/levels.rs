//! Level sets of radial graphs: areas, the height h₀ and the Penrose-type bound.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::graph::GraphManifold;
use crate::hyperbolic::{ball_volume, omega, sphere_area};
use crate::profile::RadialProfile;
use crate::roots::bisect;

/// Default β in the height threshold.
pub const DEFAULT_BETA: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct HeightReport {
    pub beta: f64,
    pub mass: f64,
    pub h0: f64,
    pub sup_f: f64,
    /// sup f − h₀
    pub gap: f64,
    /// gap / mass^{1/(n−2)}; zero when both vanish.
    pub gap_ratio: f64,
    pub threshold: f64,
    /// ρ at which the level-set area equals the threshold.
    pub rho_h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenroseReport {
    /// 2ω m / V(r₀) − vol(∂U)
    pub margin: f64,
    /// 2ω m − vol(∂U)
    pub weak_margin: f64,
    pub boundary_area: f64,
    pub bound: f64,
}

fn require_monotone(p: &RadialProfile) -> Result<()> {
    if !p.is_monotone() {
        return Err(Error::Unsupported("level sets are only computed for monotone profiles".into()));
    }
    Ok(())
}

/// The coordinate ρ with f(ρ) = h, for 0 < h < sup f.
pub fn radius_at_height(p: &RadialProfile, h: f64) -> Result<f64> {
    require_monotone(p)?;
    if !(h > 0.0 && h < p.sup()) {
        return Err(domain!("height {h} outside (0, sup f = {})", p.sup()));
    }
    let mut hi = 1.0;
    let mut steps = 0;
    while p.value_at_offset(hi)? < h {
        hi *= 2.0;
        steps += 1;
        if steps > 200 {
            return Err(Error::Root(alloc::format!("could not bracket the level {h}")));
        }
    }
    let d = bisect(
        |d| p.value_at_offset(d).map(|v| v - h).unwrap_or(f64::NAN),
        0.0,
        hi,
        1e-13 * hi.max(p.rho_plus()),
        200,
    )?;
    Ok(p.rho_plus() + d)
}

/// Area of f⁻¹(h) in the base metric.
pub fn level_set_area(g: &GraphManifold, h: f64) -> Result<f64> {
    let p = &g.profile;
    require_monotone(p)?;
    let n = g.n();
    let w = omega(n)?;
    if h < 0.0 || h >= p.sup() {
        return Ok(0.0);
    }
    if h == 0.0 {
        return Ok(w * p.rho_plus().powi(n as i32 - 1));
    }
    Ok(w * radius_at_height(p, h)?.powi(n as i32 - 1))
}

/// Perimeter of {f̄ < h}, with f̄ extended by 0 over U.
pub fn perimeter_function(g: &GraphManifold, h: f64) -> Result<f64> {
    let p = &g.profile;
    require_monotone(p)?;
    if h >= p.sup() {
        return Ok(f64::INFINITY);
    }
    if h <= 0.0 {
        return Ok(omega(g.n())? * p.rho_plus().powi(g.n() as i32 - 1));
    }
    level_set_area(g, h)
}

/// max{2βω m^{(n−1)/(n−2)}, 2βω m}.
pub fn height_threshold(n: usize, mass: f64, beta: f64) -> Result<f64> {
    let w = omega(n)?;
    let nf = n as f64;
    Ok((2.0 * beta * w * mass.powf((nf - 1.0) / (nf - 2.0))).max(2.0 * beta * w * mass))
}

pub fn height_h0(g: &GraphManifold, mass: f64, beta: f64) -> Result<HeightReport> {
    if !(beta > 1.0) {
        return Err(domain!("β must exceed 1, got {beta}"));
    }
    if !(mass >= 0.0) {
        return Err(domain!("mass must be non-negative, got {mass}"));
    }
    let p = &g.profile;
    require_monotone(p)?;
    let n = g.n();
    let w = omega(n)?;
    let sup_f = p.sup();
    let threshold = height_threshold(n, mass, beta)?;
    let rho_h = (threshold / w).powf(1.0 / (n as f64 - 1.0));
    let h0 = if mass == 0.0 {
        sup_f
    } else if rho_h > p.rho_plus() {
        p.value(rho_h)?
    } else {
        0.0
    };
    let gap = sup_f - h0;
    let gap_ratio = if gap == 0.0 { 0.0 } else { gap / mass.powf(1.0 / (n as f64 - 2.0)) };
    Ok(HeightReport {
        beta,
        mass,
        h0,
        sup_f,
        gap,
        gap_ratio,
        threshold,
        rho_h,
    })
}

pub fn penrose_check(g: &GraphManifold, mass: f64) -> Result<PenroseReport> {
    let p = &g.profile;
    if p.is_entire() || !p.has_minimal_boundary() {
        return Err(Error::NotApplicable("the graph has no minimal inner boundary".into()));
    }
    let n = g.n();
    let w = omega(n)?;
    let rp = p.rho_plus();
    let boundary_area = w * rp.powi(n as i32 - 1);
    let bound = 2.0 * w * mass / (1.0 + rp * rp).sqrt();
    Ok(PenroseReport {
        margin: bound - boundary_area,
        weak_margin: 2.0 * w * mass - boundary_area,
        boundary_area,
        bound,
    })
}

/// sphere_area(r)/(n−1) − ball_volume(r) for the geodesic radius r.
pub fn isoperimetric_check(n: usize, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(domain!("radius must be positive, got {r}"));
    }
    Ok(sphere_area(n, r)? / (n as f64 - 1.0) - ball_volume(n, r)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn flat_level_sets_are_empty() {
        let g = GraphManifold::ads_schwarzschild(3, 0.0).unwrap();
        assert_eq!(level_set_area(&g, 0.5).unwrap(), 0.0);
        let h = height_h0(&g, 0.0, 2.0).unwrap();
        assert_eq!((h.threshold, h.gap), (0.0, 0.0));
        assert!(penrose_check(&g, 0.0).is_err());
    }

    #[test]
    fn horizon_level_set() {
        let g = GraphManifold::ads_schwarzschild(3, 0.5).unwrap();
        let rp = g.profile.rho_plus();
        assert!((rp - 0.68233).abs() < 1e-5);
        assert!((level_set_area(&g, 0.0).unwrap() - 4.0 * PI * rp * rp).abs() < 1e-12);
        assert!((perimeter_function(&g, -1.0).unwrap() - 4.0 * PI * rp * rp).abs() < 1e-12);
        assert!(perimeter_function(&g, g.profile.sup()).unwrap().is_infinite());
    }

    #[test]
    fn threshold_branches() {
        let t = height_threshold(3, 1.0, 2.0).unwrap();
        assert!((t - 16.0 * PI).abs() < 1e-12);
        let g = GraphManifold::ads_schwarzschild(3, 1.0).unwrap();
        let h = height_h0(&g, 1.0, 2.0).unwrap();
        assert!((h.rho_h - 2.0).abs() < 1e-12);
        assert!(height_h0(&g, 1.0, 1.0).is_err());
    }

    #[test]
    fn isoperimetric_example() {
        let s = isoperimetric_check(3, 1.0).unwrap();
        assert!((s - 3.567).abs() < 1e-3);
    }
}
