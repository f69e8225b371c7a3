//! Radial graph profiles f(ρ) on ρ ≥ ρ₊.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::quadrature::Quadrature;
use crate::roots::bisect;

/// Slope above which a tabulated profile is treated as having a minimal boundary.
pub const MINIMAL_BOUNDARY_SLOPE: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    ClosedForm,
    Tabulated,
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Flat,
    Ads { mass: f64 },
    Table(Hermite),
}

/// A rotationally symmetric graph function, in the ρ = sinh r coordinate.
///
/// Values are normalized so that f(ρ₊) = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    n: usize,
    rho_plus: f64,
    sup: f64,
    monotone: bool,
    shape: Shape,
    quad: Quadrature,
}

impl RadialProfile {
    /// The AdS-Schwarzschild graph of mass `m`; `m = 0` is the flat slice.
    pub fn ads_schwarzschild(n: usize, m: f64) -> Result<Self> {
        Self::ads_schwarzschild_with(n, m, Quadrature::default())
    }

    pub fn ads_schwarzschild_with(n: usize, m: f64, quad: Quadrature) -> Result<Self> {
        if n < 3 {
            return Err(domain!("dimension must be at least 3, got {n}"));
        }
        if !(m >= 0.0) || !m.is_finite() {
            return Err(domain!("mass must be finite and non-negative, got {m}"));
        }
        if m == 0.0 {
            return Ok(Self {
                n,
                rho_plus: 0.0,
                sup: 0.0,
                monotone: true,
                shape: Shape::Flat,
                quad,
            });
        }
        let rho_plus = horizon_radius(n, m)?;
        let mut p = Self {
            n,
            rho_plus,
            sup: 0.0,
            monotone: true,
            shape: Shape::Ads { mass: m },
            quad,
        };
        p.sup = p.ads_head(1.0)? + p.ads_tail(rho_plus + 1.0)?;
        Ok(p)
    }

    /// A profile given by samples (ρᵢ, fᵢ) and optional slopes, interpolated by
    /// piecewise cubic Hermite polynomials. Missing slopes are chosen by the
    /// Fritsch–Carlson rule, which preserves monotone data.
    pub fn tabulated(n: usize, rho: Vec<f64>, f: Vec<f64>, df: Option<Vec<f64>>) -> Result<Self> {
        if n < 3 {
            return Err(domain!("dimension must be at least 3, got {n}"));
        }
        if rho.len() < 2 || rho.len() != f.len() {
            return Err(domain!(
                "table needs at least two rows of equal length, got {} and {}",
                rho.len(),
                f.len()
            ));
        }
        if rho.iter().chain(&f).any(|v| !v.is_finite()) {
            return Err(domain!("table contains non-finite values"));
        }
        if rho[0] < 0.0 || rho.windows(2).any(|w| w[1] <= w[0]) {
            return Err(domain!("ρ grid must be non-negative and strictly increasing"));
        }
        let f0 = f[0];
        let y: Vec<f64> = f.iter().map(|v| v - f0).collect();
        let (d, slopes) = match df {
            Some(d) => {
                if d.len() != rho.len() || d.iter().any(|v| !v.is_finite()) {
                    return Err(domain!("slope column must be finite and match the grid"));
                }
                let slopes = Hermite {
                    x: rho.clone(),
                    d: fritsch_carlson(&rho, &d),
                    y: d.clone(),
                    slopes: None,
                };
                (d, Some(alloc::boxed::Box::new(slopes)))
            }
            None => (fritsch_carlson(&rho, &y), None),
        };
        let monotone = y.windows(2).all(|w| w[1] >= w[0]) && d.iter().all(|&s| s >= 0.0);
        let sup = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            n,
            rho_plus: rho[0],
            sup,
            monotone,
            shape: Shape::Table(Hermite { x: rho, y, d, slopes }),
            quad: Quadrature::default(),
        })
    }

    /// Replaces the quadrature used for profile values (recomputes sup f).
    pub fn with_quadrature(mut self, quad: Quadrature) -> Result<Self> {
        self.quad = quad;
        if let Shape::Ads { .. } = self.shape {
            self.sup = self.ads_head(1.0)? + self.ads_tail(self.rho_plus + 1.0)?;
        }
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho_plus(&self) -> f64 {
        self.rho_plus
    }

    /// Geodesic radius of the inner boundary, arcsinh(ρ₊).
    pub fn r_plus(&self) -> f64 {
        self.rho_plus.asinh()
    }

    pub fn kind(&self) -> ProfileKind {
        match self.shape {
            Shape::Table(_) => ProfileKind::Tabulated,
            _ => ProfileKind::ClosedForm,
        }
    }

    /// The AdS-Schwarzschild mass parameter, if this is a member of that family.
    pub fn ads_mass(&self) -> Option<f64> {
        match self.shape {
            Shape::Flat => Some(0.0),
            Shape::Ads { mass } => Some(mass),
            Shape::Table(_) => None,
        }
    }

    pub fn is_entire(&self) -> bool {
        self.rho_plus == 0.0
    }

    /// True when the slope blows up at ρ₊ > 0.
    pub fn has_minimal_boundary(&self) -> bool {
        match &self.shape {
            Shape::Flat => false,
            Shape::Ads { .. } => true,
            Shape::Table(h) => self.rho_plus > 0.0 && h.d[0] > MINIMAL_BOUNDARY_SLOPE,
        }
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    /// True when f vanishes identically.
    pub fn is_flat(&self) -> bool {
        match &self.shape {
            Shape::Flat => true,
            Shape::Ads { .. } => false,
            Shape::Table(h) => h.y.iter().all(|&v| v == 0.0) && h.d.iter().all(|&v| v == 0.0),
        }
    }

    /// lim_{ρ→∞} f for monotone profiles (the largest tabulated value otherwise).
    pub fn sup(&self) -> f64 {
        self.sup
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quad
    }

    /// Grid of a tabulated profile.
    pub fn grid(&self) -> Option<&[f64]> {
        match &self.shape {
            Shape::Table(h) => Some(&h.x),
            _ => None,
        }
    }

    /// f(ρ); returns 0 at and below ρ₊.
    pub fn value(&self, rho: f64) -> Result<f64> {
        if !rho.is_finite() {
            return Err(domain!("ρ must be finite, got {rho}"));
        }
        self.value_at_offset(rho - self.rho_plus)
    }

    /// f(ρ₊ + d), accurate for tiny offsets d.
    pub fn value_at_offset(&self, d: f64) -> Result<f64> {
        if d <= 0.0 {
            return Ok(0.0);
        }
        match &self.shape {
            Shape::Flat => Ok(0.0),
            Shape::Ads { .. } => {
                if d <= 1.0 {
                    self.ads_head(d.sqrt())
                } else {
                    Ok(self.sup - self.ads_tail(self.rho_plus + d)?)
                }
            }
            Shape::Table(h) => Ok(h.value(self.rho_plus + d)),
        }
    }

    /// df/dρ for ρ > ρ₊ (ρ ≥ 0 for entire profiles).
    pub fn slope(&self, rho: f64) -> Result<f64> {
        self.slope_at_offset(rho - self.rho_plus)
    }

    pub fn slope_at_offset(&self, d: f64) -> Result<f64> {
        if !(d > 0.0 || (d == 0.0 && !self.has_minimal_boundary())) {
            return Err(domain!("slope requested at offset {d:e} from the inner boundary"));
        }
        let rho = self.rho_plus + d;
        Ok(match &self.shape {
            Shape::Flat => 0.0,
            Shape::Ads { mass } => {
                let w = 1.0 + rho * rho;
                (2.0 * mass).sqrt() / (w * (d * self.ads_q(rho)).sqrt())
            }
            Shape::Table(h) => h.slope(rho),
        })
    }

    /// d²f/dρ² when available in closed form.
    pub fn slope_derivative(&self, rho: f64) -> Option<f64> {
        let d = rho - self.rho_plus;
        match &self.shape {
            Shape::Flat => Some(0.0),
            Shape::Ads { .. } if d > 0.0 => {
                let n = self.n as i32;
                let s = self.slope_at_offset(d).ok()?;
                let w = 1.0 + rho * rho;
                let p = d * self.ads_q(rho);
                let dp = n as f64 * rho.powi(n - 1) + (n - 2) as f64 * rho.powi(n - 3);
                Some(s * (-2.0 * rho / w - dp / (2.0 * p)))
            }
            _ => None,
        }
    }

    /// 2u · f′(ρ₊ + u²), bounded at u = 0 for minimal-boundary profiles.
    pub fn regular_slope(&self, u: f64) -> f64 {
        let u = u.abs();
        let rho = self.rho_plus + u * u;
        match &self.shape {
            Shape::Flat => 0.0,
            Shape::Ads { mass } => {
                let w = 1.0 + rho * rho;
                2.0 * (2.0 * mass).sqrt() / (w * self.ads_q(rho).sqrt())
            }
            Shape::Table(h) => 2.0 * u * h.slope(rho),
        }
    }

    /// V²|∇f|²_b = (1+ρ²)² f′(ρ)².
    pub fn weighted_gradient_sq(&self, rho: f64) -> Result<f64> {
        self.weighted_gradient_sq_at_offset(rho - self.rho_plus)
    }

    pub fn weighted_gradient_sq_at_offset(&self, d: f64) -> Result<f64> {
        if !(d > 0.0 || (d == 0.0 && !self.has_minimal_boundary())) {
            return Err(domain!("gradient requested at offset {d:e} from the inner boundary"));
        }
        let rho = self.rho_plus + d;
        Ok(match &self.shape {
            Shape::Flat => 0.0,
            Shape::Ads { mass } => 2.0 * mass / (d * self.ads_q(rho)),
            Shape::Table(h) => {
                let w = 1.0 + rho * rho;
                let s = h.slope(rho);
                w * w * s * s
            }
        })
    }

    /// Q(ρ) with ρⁿ + ρ^{n−2} − 2m = (ρ − ρ₊) Q(ρ).
    fn ads_q(&self, rho: f64) -> f64 {
        let rp = self.rho_plus;
        let n = self.n;
        let mut sum = 0.0;
        let mut rk = 1.0;
        let mut upper = 0.0;
        for k in 0..n {
            sum += rk * rp.powi((n - 1 - k) as i32);
            if k + 3 <= n {
                upper += rk * rp.powi((n - 3 - k) as i32);
            }
            rk *= rho;
        }
        sum + upper
    }

    /// ∫₀^{u_end} 2u f′(ρ₊+u²) du = f(ρ₊ + u_end²).
    fn ads_head(&self, u_end: f64) -> Result<f64> {
        self.quad.integrate(0.0, u_end, |u| self.regular_slope(u))
    }

    /// ∫_a^∞ f′ via s = a/w².
    fn ads_tail(&self, a: f64) -> Result<f64> {
        let Shape::Ads { mass } = self.shape else {
            return Ok(0.0);
        };
        let c = (2.0 * mass).sqrt();
        self.quad.integrate(0.0, 1.0, |w| {
            let s = a / (w * w);
            let d = s - self.rho_plus;
            let ws = 1.0 + s * s;
            let fp = c / (ws * (d * self.ads_q(s)).sqrt());
            fp * 2.0 * a / (w * w * w)
        })
    }
}

/// Largest positive root of ρⁿ + ρ^{n−2} − 2m.
pub fn horizon_radius(n: usize, m: f64) -> Result<f64> {
    let p = |r: f64| r.powi(n as i32) + r.powi(n as i32 - 2) - 2.0 * m;
    let hi = (2.0 * m).powf(1.0 / n as f64).max((2.0 * m).powf(1.0 / (n as f64 - 2.0)));
    let root = bisect(p, 0.0, hi * (1.0 + 1e-12) + 1e-300, 0.0, 400)?;
    if !(root > 0.0) {
        return Err(Error::Root(alloc::format!("horizon root collapsed to {root} for m = {m}")));
    }
    Ok(root)
}

/// Relative size below which a difference of table values carries too few digits for a slope.
const UNRESOLVED_SECANT: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
struct Hermite {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
    /// Interpolant of supplied slope samples; differencing far-field values loses all digits.
    slopes: Option<alloc::boxed::Box<Hermite>>,
}

impl Hermite {
    fn locate(&self, t: f64) -> Option<(usize, f64, f64)> {
        let last = self.x.len() - 1;
        if t <= self.x[0] || t >= self.x[last] {
            return None;
        }
        let i = self.x.partition_point(|&v| v <= t) - 1;
        let h = self.x[i + 1] - self.x[i];
        Some((i, h, (t - self.x[i]) / h))
    }

    fn value(&self, t: f64) -> f64 {
        let last = self.x.len() - 1;
        match self.locate(t) {
            None if t <= self.x[0] => self.y[0],
            None => self.y[last],
            Some((i, h, s)) => {
                let s2 = s * s;
                let s3 = s2 * s;
                let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
                let h10 = s3 - 2.0 * s2 + s;
                let h01 = -2.0 * s3 + 3.0 * s2;
                let h11 = s3 - s2;
                h00 * self.y[i] + h * h10 * self.d[i] + h01 * self.y[i + 1] + h * h11 * self.d[i + 1]
            }
        }
    }

    fn slope(&self, t: f64) -> f64 {
        let last = self.x.len() - 1;
        if t == self.x[0] {
            return self.d[0];
        }
        if t == self.x[last] {
            return self.d[last];
        }
        if let (Some(sl), Some((i, _, _))) = (&self.slopes, self.locate(t)) {
            let (a, b) = (self.y[i], self.y[i + 1]);
            if (b - a).abs() <= UNRESOLVED_SECANT * a.abs().max(b.abs()) {
                return sl.value(t);
            }
        }
        match self.locate(t) {
            None => 0.0,
            Some((i, h, s)) => {
                let s2 = s * s;
                let dh00 = 6.0 * s2 - 6.0 * s;
                let dh10 = 3.0 * s2 - 4.0 * s + 1.0;
                let dh01 = -6.0 * s2 + 6.0 * s;
                let dh11 = 3.0 * s2 - 2.0 * s;
                (dh00 * self.y[i] + dh01 * self.y[i + 1]) / h + dh10 * self.d[i] + dh11 * self.d[i + 1]
            }
        }
    }
}

fn fritsch_carlson(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    let mut d = alloc::vec![0.0; n];
    d[0] = delta[0];
    d[n - 1] = delta[n - 2];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horizon_examples() {
        let p = RadialProfile::ads_schwarzschild(3, 1.0).unwrap();
        assert!((p.rho_plus() - 1.0).abs() < 1e-14);
        let p = RadialProfile::ads_schwarzschild(3, 0.1).unwrap();
        assert!((p.rho_plus() - 0.1927).abs() < 1e-3);
        let p0 = RadialProfile::ads_schwarzschild(3, 0.0).unwrap();
        assert!(p0.is_entire() && p0.is_flat());
        assert_eq!(p0.value(5.0).unwrap(), 0.0);
    }

    #[test]
    fn horizon_residual_is_tiny() {
        for n in 3..=6 {
            for m in [1e-4, 0.1, 0.5, 1.0, 7.0] {
                let r = horizon_radius(n, m).unwrap();
                let res = r.powi(n as i32) + r.powi(n as i32 - 2) - 2.0 * m;
                assert!(res.abs() <= 1e-12, "n={n} m={m} residual {res:e}");
            }
        }
    }

    #[test]
    fn slope_matches_textbook_formula() {
        let p = RadialProfile::ads_schwarzschild(4, 0.5).unwrap();
        for rho in [1.0, 2.0, 5.0] {
            let w = 1.0 + rho * rho;
            let big_f = w - 2.0 * 0.5 * rho.powi(-2);
            let textbook = (1.0 / w.sqrt()) * (1.0 / big_f - 1.0 / w).sqrt();
            let got = p.slope(rho).unwrap();
            assert!((got - textbook).abs() < 1e-12 * textbook);
        }
    }

    #[test]
    fn value_head_and_tail_join_continuously() {
        let p = RadialProfile::ads_schwarzschild(3, 0.5).unwrap();
        let below = p.value_at_offset(1.0 - 1e-9).unwrap();
        let above = p.value_at_offset(1.0 + 1e-9).unwrap();
        assert!((above - below).abs() < 1e-8);
        assert!(p.value(1e6).unwrap() < p.sup());
    }

    #[test]
    fn tabulated_hermite_reproduces_cubic() {
        let xs: Vec<f64> = (0..6).map(|i| i as f64 * 0.5).collect();
        let f = |x: f64| x * x * x + x;
        let df = |x: f64| 3.0 * x * x + 1.0;
        let p = RadialProfile::tabulated(
            3,
            xs.clone(),
            xs.iter().map(|&x| f(x)).collect(),
            Some(xs.iter().map(|&x| df(x)).collect()),
        )
        .unwrap();
        for x in [0.1, 0.77, 1.3, 2.4] {
            assert!((p.value(x).unwrap() - f(x)).abs() < 1e-12);
            assert!((p.slope(x).unwrap() - df(x)).abs() < 1e-12);
        }
        assert!(p.is_monotone() && p.is_entire());
    }

    #[test]
    fn tabulated_detects_decrease() {
        let p = RadialProfile::tabulated(3, alloc::vec![0.5, 1.0, 2.0, 3.0], alloc::vec![0.0, 0.3, 0.2, 0.4], None).unwrap();
        assert!(!p.is_monotone());
        assert!(RadialProfile::tabulated(3, alloc::vec![1.0, 1.0], alloc::vec![0.0, 1.0], None).is_err());
    }
}
