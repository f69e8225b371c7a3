//! Geometry of hyperbolic space ℍⁿ and the warped product ℍⁿ⁺¹ = ℍⁿ ×_V ℝ.
//!
//! Radii passed as `r` are geodesic; `rho` denotes the coordinate ρ = sinh r in
//! which b = dρ²/(1+ρ²) + ρ²σ.

use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, Result};
use crate::quadrature::Quadrature;

/// ℍⁿ together with its warped extension; `n ≥ 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HyperbolicSpace {
    n: usize,
}

impl HyperbolicSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(domain!("dimension must be at least 3, got {n}"));
        }
        Ok(Self { n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Area of the unit (n−1)-sphere.
    pub fn omega(&self) -> f64 {
        omega_unchecked(self.n)
    }

    pub fn sphere_area(&self, r: f64) -> Result<f64> {
        sphere_area(self.n, r)
    }

    pub fn ball_volume(&self, r: f64) -> Result<f64> {
        ball_volume(self.n, r)
    }

    /// Coefficients of b̄ = W ds² + dρ²/W + ρ²σ at coordinate ρ, with W = 1 + ρ².
    pub fn ambient_metric(&self, rho: f64) -> AmbientMetric {
        let w = 1.0 + rho * rho;
        AmbientMetric {
            g_ss: w,
            g_rhorho: 1.0 / w,
            g_sphere: rho * rho,
        }
    }
}

/// Diagonal coefficients of the ambient metric in (s, ρ, θ) coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmbientMetric {
    pub g_ss: f64,
    pub g_rhorho: f64,
    pub g_sphere: f64,
}

fn omega_unchecked(n: usize) -> f64 {
    // ω_{n+1} = 2π/(n−1) ω_{n−1}, starting from ω_1 = 2π, ω_2 = 4π
    let (mut k, mut w) = if n.is_multiple_of(2) { (2, 2.0 * PI) } else { (3, 4.0 * PI) };
    while k < n {
        w *= 2.0 * PI / k as f64;
        k += 2;
    }
    w
}

/// Area of the unit (n−1)-sphere, 2π^{n/2}/Γ(n/2).
pub fn omega(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(domain!("omega needs n >= 2, got {n}"));
    }
    Ok(omega_unchecked(n))
}

/// Area of the geodesic sphere of radius `r` in ℍⁿ.
pub fn sphere_area(n: usize, r: f64) -> Result<f64> {
    HyperbolicSpace::new(n)?;
    if !(r >= 0.0) {
        return Err(domain!("radius must be non-negative, got {r}"));
    }
    Ok(omega_unchecked(n) * r.sinh().powi(n as i32 - 1))
}

/// Volume of the geodesic ball of radius `r` in ℍⁿ.
pub fn ball_volume(n: usize, r: f64) -> Result<f64> {
    ball_volume_with(n, r, &Quadrature::default())
}

pub fn ball_volume_with(n: usize, r: f64, quad: &Quadrature) -> Result<f64> {
    HyperbolicSpace::new(n)?;
    if !(r >= 0.0) {
        return Err(domain!("radius must be non-negative, got {r}"));
    }
    let k = n as i32 - 1;
    let integral = quad.integrate(0.0, r, |t| t.sinh().powi(k))?;
    Ok(omega_unchecked(n) * integral)
}

/// Lapse V = cosh r.
pub fn lapse(r: f64) -> f64 {
    r.cosh()
}

/// Lapse in the ρ coordinate, √(1+ρ²).
pub fn lapse_rho(rho: f64) -> f64 {
    (1.0 + rho * rho).sqrt()
}

/// ρ − ρ₊ for ρ = sinh(r₊ + t), without cancellation.
pub fn rho_offset(r_plus: f64, t: f64) -> f64 {
    2.0 * (r_plus + 0.5 * t).cosh() * (0.5 * t).sinh()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_small_dimensions() {
        assert!((omega(2).unwrap() - 2.0 * PI).abs() < 1e-14);
        assert!((omega(3).unwrap() - 4.0 * PI).abs() < 1e-14);
        assert!((omega(4).unwrap() - 2.0 * PI * PI).abs() < 1e-13);
        assert!(omega(1).is_err());
    }

    #[test]
    fn sphere_area_examples() {
        assert_eq!(sphere_area(3, 0.0).unwrap(), 0.0);
        assert!((sphere_area(3, 1.0).unwrap() - 17.355387).abs() < 1e-6);
        assert!((sphere_area(4, 1.0).unwrap() - 32.0380).abs() < 1e-3);
        assert!(sphere_area(3, -0.1).is_err());
        assert!(sphere_area(2, 1.0).is_err());
    }

    #[test]
    fn ball_volume_n3_closed_form() {
        assert_eq!(ball_volume(3, 0.0).unwrap(), 0.0);
        let v = ball_volume(3, 1.0).unwrap();
        let exact = PI * ((2.0f64).sinh() - 2.0);
        assert!((v - exact).abs() < 1e-12 * exact);
        assert!((v - 5.11094).abs() < 1e-5);
    }

    #[test]
    fn rho_offset_matches_direct_difference() {
        let r = 0.7;
        let t = 0.3;
        let direct = (r + t).sinh() - r.sinh();
        assert!((rho_offset(r, t) - direct).abs() < 1e-15);
        assert!(rho_offset(r, 1e-14) > 0.0);
    }

    #[test]
    fn ambient_metric_coefficients() {
        let h = HyperbolicSpace::new(3).unwrap();
        let g = h.ambient_metric(2.0);
        assert_eq!(g.g_ss, 5.0);
        assert_eq!(g.g_rhorho, 0.2);
        assert_eq!(g.g_sphere, 4.0);
        assert!(HyperbolicSpace::new(2).is_err());
    }
}
