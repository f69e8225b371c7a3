//! The mass functional of a graph and its extrapolation to infinity.

use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::graph::GraphManifold;

/// Default sampling radii for [`mass_estimate`].
pub const DEFAULT_SCHEDULE: [f64; 6] = [5.0, 8.0, 11.0, 14.0, 17.0, 20.0];

/// Default relative tolerance on the last two samples.
pub const DEFAULT_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct MassReport {
    /// (r, integrand) pairs, increasing in r.
    pub samples: Vec<(f64, f64)>,
    pub mass: f64,
    pub convergence_ok: bool,
    /// Fitted c in |sample − mass| ~ b e^{−cr}; NaN when the tail is below roundoff.
    pub tail_slope: f64,
    pub warning: Option<String>,
}

/// The four terms of the mass 1-form evaluated on ν = ∂_r for the radial tensor
/// e = φ(r) dr⊗dr on ℍⁿ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassTerms {
    pub lapse: f64,
    pub div_e: f64,
    pub d_tr_e: f64,
    pub tr_e_dv: f64,
    pub e_grad_v: f64,
}

impl MassTerms {
    pub fn one_form(&self) -> f64 {
        self.lapse * (self.div_e - self.d_tr_e) + self.tr_e_dv - self.e_grad_v
    }
}

/// Terms of the mass 1-form on the sphere of geodesic radius `r`.
pub fn mass_terms(g: &GraphManifold, r: f64) -> Result<MassTerms> {
    let p = &g.profile;
    let rho = r.sinh();
    if !(rho > p.rho_plus()) || !(r > 0.0) {
        return Err(domain!("r = {r} is not outside the inner boundary r₊ = {}", p.r_plus()));
    }
    let n = g.n() as f64;
    let (sh, ch) = (rho, r.cosh());
    // φ = e(∂_r, ∂_r) = V² (df/dr)² = (1+ρ²)² f′(ρ)²
    let phi = p.weighted_gradient_sq(rho)?;
    let dphi = match p.slope_derivative(rho) {
        Some(ds) => {
            let s = p.slope(rho)?;
            let w = 1.0 + rho * rho;
            (4.0 * rho * w * s * s + 2.0 * w * w * s * ds) * ch
        }
        None => {
            let h = 1e-3 * (r - p.r_plus()).min(1.0);
            if !(h > 64.0 * f64::EPSILON * r) {
                return Err(Error::Numerical(alloc::format!(
                    "finite-difference step {h:e} underflows at r = {r}"
                )));
            }
            let f = |x: f64| p.weighted_gradient_sq(x.sinh());
            (f(r - 2.0 * h)? - 8.0 * f(r - h)? + 8.0 * f(r + h)? - f(r + 2.0 * h)?) / (12.0 * h)
        }
    };
    let coth = ch / sh;
    Ok(MassTerms {
        lapse: ch,
        div_e: dphi + (n - 1.0) * coth * phi,
        d_tr_e: dphi,
        tr_e_dv: phi * sh,
        e_grad_v: phi * sh,
    })
}

/// (1/(2(n−1)ω)) ∫_{S_r} of the mass 1-form on the outward normal.
pub fn mass_integrand(g: &GraphManifold, r: f64) -> Result<f64> {
    let terms = mass_terms(g, r)?;
    let n = g.n() as f64;
    // ∫_{S_r} dvol = ω sinh^{n−1} r, and ω cancels against the normalization
    let area_over_omega = r.sinh().powi(g.n() as i32 - 1);
    Ok(terms.one_form() * area_over_omega / (2.0 * (n - 1.0)))
}

pub fn mass_estimate(g: &GraphManifold, schedule: &[f64]) -> Result<MassReport> {
    mass_estimate_with(g, schedule, DEFAULT_REL_TOL)
}

pub fn mass_estimate_with(g: &GraphManifold, schedule: &[f64], rel_tol: f64) -> Result<MassReport> {
    if schedule.len() < 4 {
        return Err(domain!("mass schedule needs at least 4 radii, got {}", schedule.len()));
    }
    if schedule.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(domain!("mass schedule must be strictly increasing"));
    }
    let samples = schedule
        .iter()
        .map(|&r| mass_integrand(g, r).map(|v| (r, v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(extrapolate(samples, rel_tol))
}

/// Fits a + b e^{−cr} through the last three samples.
pub fn extrapolate(samples: Vec<(f64, f64)>, rel_tol: f64) -> MassReport {
    let k = samples.len();
    let (r1, y1) = samples[k - 3];
    let (r2, y2) = samples[k - 2];
    let (r3, y3) = samples[k - 1];
    let scale = samples.iter().fold(0.0f64, |acc, s| acc.max(s.1.abs()));
    let noise = 64.0 * f64::EPSILON * scale;
    let (d1, d2) = (y2 - y1, y3 - y2);
    let tail_slope = latest_slope(&samples, noise);

    let converged = |mass: f64| (y3 - y2).abs() <= rel_tol * (1.0 + mass.abs());
    if d2.abs() <= noise {
        return MassReport {
            samples,
            mass: y3,
            convergence_ok: true,
            tail_slope,
            warning: None,
        };
    }
    let fit = if d1.abs() > noise && d1.signum() == d2.signum() {
        fit_exponential(r1, r2, r3, d1, d2)
    } else {
        None
    };
    match fit {
        Some(c) => {
            let h2 = r3 - r2;
            let mass = y3 + d2 / (c * h2).exp_m1();
            let ok = converged(mass);
            MassReport {
                convergence_ok: ok,
                samples,
                mass,
                tail_slope: c,
                warning: (!ok).then(|| {
                    alloc::format!("last two samples differ by {:e}, above the tolerance {rel_tol:e}", d2.abs())
                }),
            }
        }
        None => MassReport {
            samples,
            mass: y3,
            convergence_ok: false,
            tail_slope,
            warning: Some(alloc::format!(
                "tail is not monotonically decaying (last differences {d1:e}, {d2:e}); reporting the last sample"
            )),
        },
    }
}

/// Decay exponent c with d2/d1 = e^{−c h1}(1 − e^{−c h2})/(1 − e^{−c h1}).
fn fit_exponential(r1: f64, r2: f64, r3: f64, d1: f64, d2: f64) -> Option<f64> {
    let (h1, h2) = (r2 - r1, r3 - r2);
    let q = d2 / d1;
    if !(q > 0.0) || !(q < h2 / h1) {
        return None;
    }
    let ratio = |c: f64| (-c * h1).exp() * (-(-c * h2).exp_m1()) / (-(-c * h1).exp_m1());
    if (h1 - h2).abs() <= 1e-14 * h1 {
        return Some(-q.ln() / h1);
    }
    let (mut lo, mut hi) = (1e-12, 1.0);
    while ratio(hi) > q {
        hi *= 2.0;
        if hi > 1e6 {
            return None;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ratio(mid) > q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

fn latest_slope(samples: &[(f64, f64)], noise: f64) -> f64 {
    for w in samples.windows(3).rev() {
        let d1 = w[1].1 - w[0].1;
        let d2 = w[2].1 - w[1].1;
        if d1.abs() > noise && d2.abs() > noise && d1.signum() == d2.signum() {
            if let Some(c) = fit_exponential(w[0].0, w[1].0, w[2].0, d1, d2) {
                return c;
            }
        }
    }
    f64::NAN
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_graph_has_zero_mass() {
        let g = GraphManifold::ads_schwarzschild(3, 0.0).unwrap();
        assert_eq!(mass_integrand(&g, 3.0).unwrap(), 0.0);
        let rep = mass_estimate(&g, &DEFAULT_SCHEDULE).unwrap();
        assert_eq!(rep.mass, 0.0);
        assert!(rep.convergence_ok);
    }

    #[test]
    fn exact_exponential_is_recovered() {
        let rs = [1.0, 2.0, 3.5, 5.0, 7.5];
        let samples = rs.iter().map(|&r| (r, 2.0 - 0.7 * (-1.3 * r).exp())).collect();
        let rep = extrapolate(samples, 1e-2);
        assert!((rep.mass - 2.0).abs() < 1e-10, "{}", rep.mass);
        assert!((rep.tail_slope - 1.3).abs() < 1e-6);
    }

    #[test]
    fn oscillating_tail_is_flagged() {
        let samples = [(1.0, 1.0), (2.0, 1.1), (3.0, 0.9), (4.0, 1.2)].to_vec();
        let rep = extrapolate(samples, 1e-6);
        assert!(!rep.convergence_ok);
        assert_eq!(rep.mass, 1.2);
        assert!(rep.warning.is_some());
    }

    #[test]
    fn rejects_short_or_unsorted_schedule() {
        let g = GraphManifold::ads_schwarzschild(3, 0.1).unwrap();
        assert!(mass_estimate(&g, &[5.0, 6.0, 7.0]).is_err());
        assert!(mass_estimate(&g, &[5.0, 8.0, 7.0, 9.0]).is_err());
        assert!(mass_integrand(&g, 0.1).is_err());
    }

    #[test]
    fn div_and_trace_derivatives_cancel() {
        let g = GraphManifold::ads_schwarzschild(4, 0.5).unwrap();
        let t = mass_terms(&g, 3.0).unwrap();
        assert!(t.d_tr_e != 0.0);
        assert!((t.tr_e_dv - t.e_grad_v).abs() == 0.0);
    }
}
