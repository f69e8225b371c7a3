//! Graphical manifolds (ℍⁿ∖U, g = b + V² df⊗df) over radial profiles.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::hyperbolic::HyperbolicSpace;
use crate::profile::RadialProfile;

/// Tolerance on R + n(n−1) in the admissibility report.
pub const CURVATURE_TOL: f64 = 1e-6;

/// A graph together with the class constants (ρ₀, γ, D) it is checked against.
///
/// `rho0` is a geodesic radius; `depth` is the bound D on the distance from the
/// inner boundary to Σ(ρ₀).
#[derive(Debug, Clone, PartialEq)]
pub struct GraphManifold {
    pub profile: RadialProfile,
    pub rho0: f64,
    pub gamma: f64,
    pub depth: f64,
}

/// Diagonal coefficients of g = A dρ² + ρ²σ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InducedMetric {
    pub g_rhorho: f64,
    pub g_sphere: f64,
    /// The deformation e = g − b in the ρρ slot.
    pub e_rhorho: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    Entire,
    Minimal,
    Undetected,
}

/// Admissibility flags and margins; a positive margin means the condition holds.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    /// U ⊂ B(ρ₀/2); margin ρ₀/2 − r₊.
    pub horizon_inside: bool,
    pub horizon_margin: f64,
    /// sup_{r ≥ ρ₀/2} V²|∇f|² ≤ γ²; margin γ² − sup.
    pub decay_ok: bool,
    pub gamma_margin: f64,
    pub boundary: BoundaryKind,
    pub boundary_ok: bool,
    pub monotone: bool,
    /// min R + n(n−1) on the sample grid.
    pub curvature_ok: bool,
    pub curvature_margin: f64,
    /// Assumed for radial profiles, not verified.
    pub assumed_balanced: bool,
    /// Assumed for radial monotone profiles, not verified.
    pub assumed_upward_mean_curvature: bool,
}

impl AdmissibilityReport {
    pub fn all_pass(&self) -> bool {
        self.horizon_inside && self.decay_ok && self.boundary_ok && self.monotone && self.curvature_ok
    }
}

impl GraphManifold {
    pub fn new(profile: RadialProfile, rho0: f64, gamma: f64, depth: f64) -> Result<Self> {
        if !(rho0 > 0.0) || !(gamma >= 0.0) || !(depth >= 0.0) {
            return Err(domain!(
                "class constants must satisfy ρ₀ > 0, γ ≥ 0, D ≥ 0 (got {rho0}, {gamma}, {depth})"
            ));
        }
        Ok(Self {
            profile,
            rho0,
            gamma,
            depth,
        })
    }

    /// AdS-Schwarzschild graph with class constants derived from the member itself.
    pub fn ads_schwarzschild(n: usize, m: f64) -> Result<Self> {
        let profile = RadialProfile::ads_schwarzschild(n, m)?;
        Self::with_derived_constants(profile, None)
    }

    /// ρ₀ = 2.2 r₊ (or `rho0` if given), γ = 1.1·sup_{r ≥ ρ₀/2} √(V²|∇f|²), D = radial depth.
    pub fn with_derived_constants(profile: RadialProfile, rho0: Option<f64>) -> Result<Self> {
        let r_plus = profile.r_plus();
        let rho0 = rho0.unwrap_or(if r_plus > 0.0 { 2.2 * r_plus } else { 1.0 });
        let sup = sup_gradient_decay(&profile, 0.5 * rho0)?;
        let depth = radial_depth(&profile, rho0)?;
        Self::new(profile, rho0, 1.1 * sup.sqrt(), depth)
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }

    pub fn space(&self) -> HyperbolicSpace {
        HyperbolicSpace::new(self.profile.n()).expect("profile dimension is validated")
    }

    fn check_outside(&self, rho: f64) -> Result<()> {
        let rp = self.profile.rho_plus();
        if !(rho > rp || (rho >= 0.0 && rp == 0.0)) || !rho.is_finite() {
            return Err(domain!("ρ = {rho} is not outside the inner boundary ρ₊ = {rp}"));
        }
        Ok(())
    }

    /// V²|∇f|²_b at coordinate ρ.
    pub fn gradient_decay(&self, rho: f64) -> Result<f64> {
        self.check_outside(rho)?;
        self.profile.weighted_gradient_sq(rho)
    }

    pub fn induced_metric(&self, rho: f64) -> Result<InducedMetric> {
        self.check_outside(rho)?;
        let w = 1.0 + rho * rho;
        let gd = self.profile.weighted_gradient_sq(rho)?;
        Ok(InducedMetric {
            g_rhorho: (1.0 + gd) / w,
            g_sphere: rho * rho,
            e_rhorho: gd / w,
        })
    }

    /// Scalar curvature of g = A dρ² + ρ²σ:
    /// R = (n−1)/ρ² [(n−2)(1 − 1/A) + ρ A′/A²].
    pub fn scalar_curvature(&self, rho: f64) -> Result<f64> {
        self.check_outside(rho)?;
        if rho == 0.0 {
            return Err(domain!("scalar curvature is evaluated at ρ > 0"));
        }
        let n = self.n() as f64;
        let p = &self.profile;
        let w = 1.0 + rho * rho;
        let a_of = |x: f64| -> Result<f64> {
            let s = p.slope(x)?;
            Ok(1.0 / w_of(x) + w_of(x) * s * s)
        };
        let a = a_of(rho)?;
        let da = match p.slope_derivative(rho) {
            Some(ds) => {
                let s = p.slope(rho)?;
                -2.0 * rho / (w * w) + 2.0 * rho * s * s + 2.0 * w * s * ds
            }
            None => {
                let gap = rho - p.rho_plus();
                let h = 1e-3 * gap.min(rho.max(1.0));
                if !(h > 64.0 * f64::EPSILON * rho.max(1.0)) || 2.0 * h >= gap && p.rho_plus() > 0.0 {
                    return Err(Error::Numerical(alloc::format!(
                        "finite-difference step {h:e} underflows at ρ = {rho} (offset {gap:e} from the boundary)"
                    )));
                }
                (a_of(rho - 2.0 * h)? - 8.0 * a_of(rho - h)? + 8.0 * a_of(rho + h)? - a_of(rho + 2.0 * h)?)
                    / (12.0 * h)
            }
        };
        Ok((n - 1.0) / (rho * rho) * ((n - 2.0) * (1.0 - 1.0 / a) + rho * da / (a * a)))
    }

    pub fn check_admissibility(&self) -> Result<AdmissibilityReport> {
        let p = &self.profile;
        let n = self.n() as f64;
        let r_plus = p.r_plus();
        let horizon_margin = 0.5 * self.rho0 - r_plus;
        let sup = sup_gradient_decay(p, 0.5 * self.rho0)?;
        let gamma_margin = self.gamma * self.gamma - sup;
        let boundary = if p.is_entire() {
            BoundaryKind::Entire
        } else if p.has_minimal_boundary() {
            BoundaryKind::Minimal
        } else {
            BoundaryKind::Undetected
        };
        let mut curvature_margin = f64::INFINITY;
        for rho in curvature_grid(p) {
            let r = self.scalar_curvature(rho)?;
            curvature_margin = curvature_margin.min(r + n * (n - 1.0));
        }
        Ok(AdmissibilityReport {
            horizon_inside: horizon_margin > 0.0,
            horizon_margin,
            decay_ok: gamma_margin >= 0.0,
            gamma_margin,
            boundary,
            boundary_ok: boundary != BoundaryKind::Undetected,
            monotone: p.is_monotone(),
            curvature_ok: curvature_margin >= -CURVATURE_TOL,
            curvature_margin,
            assumed_balanced: true,
            assumed_upward_mean_curvature: true,
        })
    }

    /// Radial graph length from the inner boundary to the sphere of geodesic radius `r0`.
    pub fn radial_depth(&self, r0: f64) -> Result<f64> {
        radial_depth(&self.profile, r0)
    }
}

fn w_of(x: f64) -> f64 {
    1.0 + x * x
}

fn curvature_grid(p: &RadialProfile) -> Vec<f64> {
    let rp = p.rho_plus();
    let base = if rp > 0.0 { rp } else { 0.05 };
    let mut grid: Vec<f64> = (0..24).map(|k| base * (1.01 + 0.25 * k as f64 * (1.0 + k as f64))).collect();
    if let Some(g) = p.grid() {
        grid.retain(|&x| x > g[0] && x < g[g.len() - 1]);
        let lo = g[0];
        let hi = g[g.len() - 1];
        grid.extend((1..40).map(|k| lo + (hi - lo) * k as f64 / 40.0));
    }
    grid
}

/// sup of V²|∇f|² over geodesic radii r ≥ `r_min`, by a grid scan in ρ
/// refined around the largest sample.
pub fn sup_gradient_decay(p: &RadialProfile, r_min: f64) -> Result<f64> {
    if p.is_flat() {
        return Ok(0.0);
    }
    let rho_min = r_min.sinh().max(p.rho_plus());
    if rho_min <= p.rho_plus() && p.has_minimal_boundary() {
        return Ok(f64::INFINITY);
    }
    let eval = |rho: f64| p.weighted_gradient_sq(rho);
    let rho_max = match p.grid() {
        Some(g) => g[g.len() - 1].max(rho_min),
        None => (rho_min.max(1.0)) * 1e4,
    };
    let samples = 400;
    let ratio = (rho_max / rho_min.max(1e-6)).max(1.0 + 1e-9);
    let mut best = eval(rho_min)?;
    let mut best_k = 0usize;
    let at = |k: usize| -> f64 {
        if rho_min > 0.0 {
            rho_min * ratio.powf(k as f64 / samples as f64)
        } else {
            rho_max * k as f64 / samples as f64
        }
    };
    for k in 1..=samples {
        let v = eval(at(k))?;
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let (mut lo, mut hi) = (at(best_k.saturating_sub(1)), at((best_k + 1).min(samples)));
    for _ in 0..60 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if eval(m1)? < eval(m2)? {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    Ok(best.max(eval(0.5 * (lo + hi))?))
}

/// ∫_{r₊}^{r0} √(1 + V²|∇f|²) dr, i.e. the graph length of a radial curve.
pub fn radial_depth(p: &RadialProfile, r0: f64) -> Result<f64> {
    let r_plus = p.r_plus();
    if !(r0 >= r_plus) {
        return Err(domain!("depth radius {r0} lies inside the inner boundary r₊ = {r_plus}"));
    }
    let rp = p.rho_plus();
    let u_end = (r0.sinh() - rp).max(0.0).sqrt();
    // dr = dρ/√W and ρ = ρ₊ + u²: √(1+gd)·2u = √(4u² + W² (2u f′)²)
    p.quadrature().integrate(0.0, u_end, |u| {
        let rho = rp + u * u;
        let w = 1.0 + rho * rho;
        let rs = p.regular_slope(u);
        (4.0 * u * u + w * w * rs * rs).sqrt() / w.sqrt()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_profile_is_hyperbolic() {
        let g = GraphManifold::ads_schwarzschild(3, 0.0).unwrap();
        assert_eq!(g.gradient_decay(2.0).unwrap(), 0.0);
        assert!((g.scalar_curvature(1.3).unwrap() + 6.0).abs() < 1e-12);
        let rep = g.check_admissibility().unwrap();
        assert!(rep.all_pass());
        assert_eq!(rep.boundary, BoundaryKind::Entire);
        assert_eq!(rep.gamma_margin, g.gamma * g.gamma);
    }

    #[test]
    fn gradient_decay_rejects_inside() {
        let g = GraphManifold::ads_schwarzschild(3, 1.0).unwrap();
        assert!(g.gradient_decay(1.0).is_err());
        assert!(g.gradient_decay(1.0 + 1e-9).unwrap() > 100.0);
    }

    #[test]
    fn depth_of_flat_profile_is_radius() {
        let p = RadialProfile::ads_schwarzschild(3, 0.0).unwrap();
        assert!((radial_depth(&p, 1.5).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn induced_metric_matches_a() {
        let g = GraphManifold::ads_schwarzschild(3, 1.0).unwrap();
        let rho = 2.0;
        let im = g.induced_metric(rho).unwrap();
        let big_f = 1.0 + rho * rho - 2.0 / rho;
        assert!((im.g_rhorho - 1.0 / big_f).abs() < 1e-14);
        assert_eq!(im.g_sphere, 4.0);
    }
}
