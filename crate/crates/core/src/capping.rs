//! Closing off a minimal inner boundary: a cylinder of length L over ∂U and a
//! graphical cap over U, glued to Ω(ρ) by the C¹ map Φ^λ.
//!
//! Everything is reduced to the radial normal form: the collar coordinate t is
//! the geodesic offset from the horizon sphere, so the collar metrics are
//! ω_t = sinh²(r₊ + t) σ and all rescalings depend on t only.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::graph::GraphManifold;
use crate::hyperbolic::{ball_volume, omega, rho_offset};
use crate::profile::RadialProfile;
use crate::quadrature::{GaussLegendre, Quadrature};
use crate::roots::bisect;

/// Smallest gluing width accepted before the construction gives up.
pub const EPSILON_FLOOR: f64 = 1e-10;

/// Tolerance of the metric lower bound check.
pub const RATIO_TOL: f64 = 1e-8;

const KERNEL_ORDER: usize = 16;

/// The cap profile ψ on [0, 1]: ψ(x) = 1 − (1 − √x)³.
pub fn psi(x: f64) -> f64 {
    if x >= 1.0 {
        return 1.0;
    }
    let y = x.max(0.0).sqrt();
    y * (3.0 - 3.0 * y + y * y)
}

pub fn psi_prime(x: f64) -> f64 {
    if x >= 1.0 {
        return 0.0;
    }
    let y = x.max(0.0).sqrt();
    1.5 * (1.0 - y).powi(2) / y
}

pub fn psi_inverse(v: f64) -> f64 {
    let v = v.clamp(0.0, 1.0);
    let c = (1.0 - v).cbrt();
    let y = v / (1.0 + c + c * c);
    y * y
}

/// asinh(y + d) − asinh(y) without cancellation.
fn asinh_diff(y: f64, d: f64) -> f64 {
    let x = y + d;
    (d * (x + y) / (x * (1.0 + y * y).sqrt() + y * (1.0 + x * x).sqrt())).asinh()
}

/// Which side of the cylinder a rescaling serves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Graph,
    Cap,
}

/// The horizon collar: the graph profile seen in normal coordinates, f̂(a) = f(sinh(r₊ + a)),
/// and the cap profile f̂_c*(a) = −χ(−a).
#[derive(Debug, Clone)]
struct Collar {
    profile: RadialProfile,
    r_plus: f64,
    rho_plus: f64,
    eps_star: f64,
}

impl Collar {
    fn fhat(&self, side: Side, a: f64) -> Result<f64> {
        match side {
            Side::Graph => self.profile.value_at_offset(rho_offset(self.r_plus, a)),
            Side::Cap => Ok(psi(2.0 * a / self.eps_star)),
        }
    }

    fn fhat_prime(&self, side: Side, a: f64) -> Result<f64> {
        match side {
            Side::Graph => {
                let d = rho_offset(self.r_plus, a);
                Ok(self.profile.slope_at_offset(d)? * (self.r_plus + a).cosh())
            }
            Side::Cap => Ok(2.0 / self.eps_star * psi_prime(2.0 * a / self.eps_star)),
        }
    }

    /// Root a of f̂(a) = c·t below `a_max`, with its t-derivative c / f̂′(a).
    fn root(&self, side: Side, c: f64, t: f64, a_max: f64) -> Result<(f64, f64)> {
        let y = c * t;
        if t == 0.0 {
            return Ok((0.0, 0.0));
        }
        match side {
            Side::Cap => {
                if !(y < 1.0) {
                    return Err(domain!("cap level {y} is outside (0, 1)"));
                }
                let a = 0.5 * self.eps_star * psi_inverse(y);
                Ok((a, c / self.fhat_prime(Side::Cap, a)?))
            }
            Side::Graph => {
                let p = &self.profile;
                let u_max = rho_offset(self.r_plus, a_max).sqrt();
                let u = solve_monotone(
                    |u| p.value_at_offset(u * u).map(|v| v - y),
                    |u| p.regular_slope(u),
                    0.0,
                    u_max,
                )?;
                let d = u * u;
                let a = asinh_diff(self.rho_plus, d);
                let rho = self.rho_plus + d;
                let da = 2.0 * u * c / (p.regular_slope(u) * (1.0 + rho * rho).sqrt());
                Ok((a, da))
            }
        }
    }
}

/// Bracketed Newton iteration for an increasing function g on [lo, hi]; falls
/// back to bisection whenever a Newton step leaves the bracket.
fn solve_monotone<G, D>(g: G, dg: D, lo: f64, hi: f64) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let ga = g(a)?;
    let gb = g(b)?;
    if !(ga <= 0.0 && gb >= 0.0) {
        return Err(Error::Root(alloc::format!(
            "target not bracketed on [{lo:e}, {hi:e}] (g = {ga:e}, {gb:e})"
        )));
    }
    let mut x = if gb - ga > 0.0 { a - ga * (b - a) / (gb - ga) } else { 0.5 * (a + b) };
    for _ in 0..200 {
        let gx = g(x)?;
        if gx == 0.0 {
            return Ok(x);
        }
        if gx < 0.0 {
            a = x;
        } else {
            b = x;
        }
        if b - a <= 4.0 * f64::EPSILON * b.abs() {
            return Ok(0.5 * (a + b));
        }
        let step = gx / dg(x);
        let next = x - step;
        x = if next > a && next < b && step.is_finite() { next } else { 0.5 * (a + b) };
        if step.abs() <= 2.0 * f64::EPSILON * x.abs() {
            return Ok(x);
        }
    }
    Err(Error::Root(alloc::format!("no convergence on [{a:e}, {b:e}]")))
}

/// A rescaling t ↦ v on (0, end): the root segment f̂(v) = c·t up to ξ, a linear
/// segment to the knot, then v = t + shift; both corners smoothed by convolution
/// with a polynomial bump of half-width δ.
#[derive(Debug, Clone)]
pub struct Rescaling {
    pub side: Side,
    pub c: f64,
    pub xi: f64,
    pub v_xi: f64,
    pub knot_t: f64,
    pub knot_v: f64,
    pub shift: f64,
    pub delta: f64,
    pub lin_slope: f64,
    /// Width of t on which the root segment is solvable.
    pub delta0: f64,
    /// Largest v used as the root bracket.
    a_star: f64,
}

impl Rescaling {
    fn build(collar: &Collar, side: Side, c: f64, knot_t: f64, knot_v: f64, shift: f64, a_cap: f64) -> Result<Self> {
        // geometric scan down to the boundary: keep the largest a below which f̂ is increasing
        let mut a_star = a_cap;
        let mut prev: Option<f64> = None;
        for k in (0..=60).rev() {
            let a = a_cap * 0.5f64.powi(k);
            let v = collar.fhat(side, a)?;
            let ok = collar.fhat_prime(side, a)? > 1e-6 && prev.is_none_or(|p| v > p);
            if !ok {
                return Err(Error::CapConstruction(alloc::format!(
                    "f̂ is not increasing near the horizon at offset {a:e} ({side:?} side)"
                )));
            }
            prev = Some(v);
            a_star = a;
        }
        let delta0 = collar.fhat(side, a_star)? / c;
        let mut r = Self {
            side,
            c,
            xi: 0.0,
            v_xi: 0.0,
            knot_t,
            knot_v,
            shift,
            delta: 0.0,
            lin_slope: 1.0,
            delta0,
            a_star,
        };
        let mut xi = 0.5 * delta0.min(2.0 * knot_t / 3.0);
        let mut accepted = false;
        for _ in 0..80 {
            let mut ok = true;
            for j in 1..=8 {
                let (_, d) = collar.root(side, c, xi * j as f64 / 8.0, a_star)?;
                if !(d < 1.0) {
                    ok = false;
                    break;
                }
            }
            if ok {
                accepted = true;
                break;
            }
            xi *= 0.5;
        }
        if !accepted {
            return Err(Error::CapConstruction(alloc::format!(
                "no ξ with root-segment slope below 1 ({side:?} side)"
            )));
        }
        r.xi = xi;
        r.v_xi = collar.root(side, c, xi, a_star)?.0;
        r.lin_slope = (knot_v - r.v_xi) / (knot_t - xi);
        if !(r.lin_slope >= 1.0) {
            return Err(Error::CapConstruction(alloc::format!(
                "linear segment slope {} < 1 ({side:?} side)",
                r.lin_slope
            )));
        }
        r.delta = (knot_t / 25.0).min(xi / 4.0).min((knot_t - xi) / 4.0);
        let rule = GaussLegendre::new(KERNEL_ORDER);
        for _ in 0..40 {
            if r.dichotomy_holds(collar, &rule)? {
                return Ok(r);
            }
            r.delta *= 0.5;
        }
        Err(Error::CapConstruction(alloc::format!(
            "mollified corner violates the slope dichotomy for every width tried ({side:?} side)"
        )))
    }

    /// Either v′·f̂′(v) ≥ 1 or v′ ≥ 1 at sampled points of both smoothing windows.
    fn dichotomy_holds(&self, collar: &Collar, rule: &GaussLegendre) -> Result<bool> {
        for corner in [self.xi, self.knot_t] {
            for j in 0..=32 {
                let t = corner - self.delta + 2.0 * self.delta * j as f64 / 32.0;
                let (v, dv) = self.eval_with(collar, rule, t)?;
                if !(dv > 0.0) {
                    return Ok(false);
                }
                if dv >= 1.0 {
                    continue;
                }
                let shift_free = v - if t > self.knot_t { self.shift } else { 0.0 };
                let fp = if shift_free > 0.0 { collar.fhat_prime(self.side, v)? } else { f64::INFINITY };
                if !(dv * fp >= 1.0) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn raw(&self, collar: &Collar, t: f64) -> Result<(f64, f64)> {
        if t <= self.xi {
            collar.root(self.side, self.c, t.max(0.0), self.a_star)
        } else if t <= self.knot_t {
            Ok((self.v_xi + self.lin_slope * (t - self.xi), self.lin_slope))
        } else {
            Ok((t + self.shift, 1.0))
        }
    }

    fn in_window(&self, t: f64) -> Option<f64> {
        [self.xi, self.knot_t].into_iter().find(|&c| (t - c).abs() < self.delta)
    }

    fn eval_with(&self, collar: &Collar, rule: &GaussLegendre, t: f64) -> Result<(f64, f64)> {
        let Some(corner) = self.in_window(t) else {
            return self.raw(collar, t);
        };
        // ∫ raw(t − τ) K_δ(τ) dτ with K(x) = (35/32)(1 − x²)³, split where t − τ hits the corner
        let d = self.delta;
        let split = t - corner;
        let mut v = 0.0;
        let mut dv = 0.0;
        for (lo, hi) in [(-d, split), (split, d)] {
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for (x, w) in rule.nodes().iter().zip(rule.weights()) {
                let tau = mid + half * x;
                let s = tau / d;
                let k = 35.0 / 32.0 * (1.0 - s * s).powi(3) / d;
                let (rv, rd) = self.raw(collar, t - tau)?;
                v += w * half * k * rv;
                dv += w * half * k * rd;
            }
        }
        Ok((v, dv))
    }

    /// Start of the identity (shifted) tail.
    pub fn tail_start(&self) -> f64 {
        self.knot_t + self.delta
    }

    /// End of the pure root segment.
    pub fn root_end(&self) -> f64 {
        self.xi - self.delta
    }
}

/// The capped collar with its gluing data.
#[derive(Debug, Clone)]
pub struct CapComplex {
    collar: Collar,
    rule: GaussLegendre,
    pub n: usize,
    pub r_plus: f64,
    pub rho0: f64,
    pub gamma: f64,
    pub depth: f64,
    pub region_radius: f64,
    pub length: f64,
    pub lambda: f64,
    pub epsilon: f64,
    pub epsilon_star: f64,
    /// 2L/ε
    pub slope: f64,
    pub alpha: Rescaling,
    /// α_c(t) = −β(−t − ε/2) on (−ε, −ε/2).
    pub beta: Rescaling,
    /// L > D + ½ sinh(ρ₀) π √(1+γ²).
    pub distance_preserving: bool,
}

/// A point of the capped manifold in ambient coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiPoint {
    /// Normal offset from the horizon of the base point.
    pub base: f64,
    pub rho: f64,
    pub s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricCheck {
    pub min_ratio: f64,
    pub pass: bool,
    pub worst_t: f64,
    pub worst_angle: f64,
    pub samples: usize,
}

/// One-sided difference quotients of Φ^λ at the two junctions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C1Check {
    pub h: f64,
    pub expected_ds: f64,
    /// (dρ/dt, ds/dt) on the graph side and cylinder side of t = 0.
    pub graph_side: (f64, f64),
    pub cylinder_at_zero: (f64, f64),
    /// (dρ/dt, ds/dt) on the cylinder side and cap side of t = −ε/2.
    pub cylinder_at_junction: (f64, f64),
    pub cap_side: (f64, f64),
    pub max_error: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapBounds {
    pub d_tilde: f64,
    pub v_tilde: f64,
    pub measured_diam: f64,
    pub measured_vol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapInvariants {
    pub alpha_increasing: bool,
    pub alpha_identity_tail: bool,
    pub alpha_c_increasing: bool,
    pub alpha_c_identity_tail: bool,
    pub chi_ok: bool,
    pub max_root_residual: f64,
}

impl CapInvariants {
    pub fn all_pass(&self) -> bool {
        self.alpha_increasing
            && self.alpha_identity_tail
            && self.alpha_c_increasing
            && self.alpha_c_identity_tail
            && self.chi_ok
            && self.max_root_residual <= 1e-10
    }
}

/// Largest ε with sinh²(r₊ − ε)/sinh²(r₊ + ε) ≥ √λ.
pub fn collar_ratio_width(r_plus: f64, lambda: f64) -> Result<f64> {
    let target = lambda.sqrt();
    bisect(
        |e| ((r_plus - e).sinh() / (r_plus + e).sinh()).powi(2) - target,
        0.0,
        r_plus,
        0.0,
        200,
    )
}

pub fn build_cap(g: &GraphManifold, rho_r: f64, length: f64, lambda: f64) -> Result<CapComplex> {
    let p = &g.profile;
    if !p.has_minimal_boundary() {
        return Err(Error::NotApplicable("capping needs a minimal inner boundary".into()));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(domain!("λ must lie in (0, 1), got {lambda}"));
    }
    if !(length > 0.0) || !length.is_finite() {
        return Err(domain!("cylinder length must be positive, got {length}"));
    }
    let r_plus = p.r_plus();
    if !(rho_r > r_plus) {
        return Err(domain!("region radius {rho_r} must exceed r₊ = {r_plus}"));
    }
    let eps_star = 0.5 * r_plus.min(1.0);
    let collar = Collar {
        profile: p.clone(),
        r_plus,
        rho_plus: p.rho_plus(),
        eps_star,
    };
    let ratio_width = collar_ratio_width(r_plus, lambda)?;
    let limits: [(f64, String); 4] = [
        (0.99 * ratio_width, alloc::format!("collar ratio sinh²(r₊−ε)/sinh²(r₊+ε) ≥ √λ = {}", lambda.sqrt())),
        (2.0 * length, alloc::format!("2L/ε ≥ 1 with L = {length:e}")),
        (0.25 * eps_star, alloc::format!("ε ≤ ε*/4 with ε* = {eps_star}")),
        (0.5 * (rho_r - r_plus), alloc::format!("collar inside Ω(ρ) with ρ = {rho_r}")),
    ];
    let (mut epsilon, binding) = limits
        .iter()
        .min_by(|a, b| a.0.partial_cmp(&b.0).expect("finite limits"))
        .map(|(e, why)| (*e, why.clone()))
        .expect("non-empty");
    let fail = |eps: f64, why: &str| {
        Error::CapConstruction(alloc::format!(
            "gluing width ε = {eps:e} fell below {EPSILON_FLOOR:e}; binding inequality: {why}"
        ))
    };
    if !(epsilon >= EPSILON_FLOOR) {
        return Err(fail(epsilon, &binding));
    }
    // f̂′ > 1 and f̂_c*′ > 1 on (0, ε]
    loop {
        let mut ok = true;
        for k in 0..=40 {
            let a = epsilon * 0.7f64.powi(k);
            if collar.fhat_prime(Side::Graph, a)? <= 1.0 || collar.fhat_prime(Side::Cap, a)? <= 1.0 {
                ok = false;
                break;
            }
        }
        if ok {
            break;
        }
        epsilon *= 0.5;
        if epsilon < EPSILON_FLOOR {
            return Err(fail(epsilon, "∂_t f̂ > 1 on (0, ε]"));
        }
    }
    let slope = 2.0 * length / epsilon;
    let alpha = Rescaling::build(&collar, Side::Graph, slope, 0.5 * epsilon, 0.5 * epsilon, 0.0, epsilon / 3.0)?;
    let beta = Rescaling::build(&collar, Side::Cap, slope, 0.25 * epsilon, 0.75 * epsilon, 0.5 * epsilon, epsilon / 3.0)?;
    let k = (1.0 + g.gamma * g.gamma).sqrt();
    Ok(CapComplex {
        collar,
        rule: GaussLegendre::new(KERNEL_ORDER),
        n: g.n(),
        r_plus,
        rho0: g.rho0,
        gamma: g.gamma,
        depth: g.depth,
        region_radius: rho_r,
        length,
        lambda,
        epsilon,
        epsilon_star: eps_star,
        slope,
        alpha,
        beta,
        distance_preserving: length > g.depth + 0.5 * g.rho0.sinh() * PI * k,
    })
}

impl CapComplex {
    /// χ on (−ε*, 0]: −ψ(−2t/ε*), constant −1 below −ε*/2.
    pub fn chi(&self, t: f64) -> f64 {
        -psi(-2.0 * t / self.epsilon_star)
    }

    pub fn chi_prime(&self, t: f64) -> f64 {
        2.0 / self.epsilon_star * psi_prime(-2.0 * t / self.epsilon_star)
    }

    /// The offset t ∈ [−ε*/2, 0] with χ(t) = s.
    pub fn chi_inverse(&self, s: f64) -> f64 {
        -0.5 * self.epsilon_star * psi_inverse(-s)
    }

    /// Area of the level set {f_c = s} for s ∈ (−1, 0].
    pub fn cap_level_area(&self, s: f64) -> f64 {
        omega(self.n).expect("n ≥ 3") * (self.r_plus + self.chi_inverse(s)).sinh().powi(self.n as i32 - 1)
    }

    pub fn boundary_area(&self) -> f64 {
        omega(self.n).expect("n ≥ 3") * self.collar.rho_plus.powi(self.n as i32 - 1)
    }

    /// f̂(a) = f(sinh(r₊ + a)).
    pub fn fhat(&self, a: f64) -> Result<f64> {
        self.collar.fhat(Side::Graph, a)
    }

    /// The root α̃(t) of f̂(α̃) = (2L/ε) t for t ∈ (0, δ₀).
    pub fn solve_alpha(&self, t: f64) -> Result<f64> {
        self.solve_alpha_with(self.slope, t)
    }

    /// As [`Self::solve_alpha`] with an arbitrary slope constant.
    pub fn solve_alpha_with(&self, c: f64, t: f64) -> Result<f64> {
        let delta0 = self.collar.fhat(Side::Graph, self.alpha.a_star)? / c;
        if !(t > 0.0 && t < delta0) {
            return Err(domain!("t = {t:e} outside the solvable range (0, δ₀ = {delta0:e})"));
        }
        Ok(self.collar.root(Side::Graph, c, t, self.alpha.a_star)?.0)
    }

    /// α and α′ on (0, ε).
    pub fn alpha(&self, t: f64) -> Result<(f64, f64)> {
        if !(t > 0.0 && t < self.epsilon) {
            return Err(domain!("α is defined on (0, ε), got t = {t:e}"));
        }
        self.alpha.eval_with(&self.collar, &self.rule, t)
    }

    /// α_c and α_c′ on (−ε, −ε/2).
    pub fn alpha_c(&self, t: f64) -> Result<(f64, f64)> {
        if !(t > -self.epsilon && t < -0.5 * self.epsilon) {
            return Err(domain!("α_c is defined on (−ε, −ε/2), got t = {t:e}"));
        }
        let sigma = -t - 0.5 * self.epsilon;
        if sigma >= self.beta.tail_start() {
            return Ok((t, 1.0));
        }
        let (b, db) = self.beta.eval_with(&self.collar, &self.rule, sigma)?;
        Ok((-b, db))
    }

    /// Φ^λ(t) on (−ε, ε), extended by the graph of f for t ≥ ε and by the cap for t ≤ −ε.
    pub fn phi(&self, t: f64) -> Result<PhiPoint> {
        let rp = self.r_plus;
        let point = |a: f64, s: f64| PhiPoint { base: a, rho: (rp + a).sinh(), s };
        if t >= self.epsilon {
            return Ok(point(t, self.fhat(t)?));
        }
        if t > 0.0 {
            let (a, _) = self.alpha(t)?;
            return Ok(point(a, self.fhat(a)?));
        }
        if t >= -0.5 * self.epsilon {
            return Ok(point(0.0, self.slope * t));
        }
        if t > -self.epsilon {
            let (a, _) = self.alpha_c(t)?;
            return Ok(point(a, self.chi(a) - self.length));
        }
        if t > -rp {
            return Ok(point(t, self.chi(t) - self.length));
        }
        Err(domain!("t = {t} lies beyond the centre of U"))
    }

    /// g(Φ_*u, Φ_*u) / b(u, u) for u = cos φ ∂_t + sin φ ê, with ê a unit sphere direction.
    pub fn tangent_ratio(&self, t: f64, angle: f64) -> Result<f64> {
        let rp = self.r_plus;
        let (c, s) = (angle.cos(), angle.sin());
        // ω_base(ū, ū) for ū of unit ω_t-length
        let stretch = |base: f64| ((rp + base).sinh() / (rp + t).sinh()).powi(2);
        let inputs = if t > 0.0 {
            let (a, da) = self.alpha(t)?;
            let product = if t <= self.alpha.root_end() {
                self.slope
            } else {
                self.collar.fhat_prime(Side::Graph, a)? * da
            };
            FormInputs {
                a: c,
                dalpha: da,
                lapse: (rp + a).cosh(),
                fhat_dalpha: product,
                u_dot_a: 0.0,
                u_dot_b: 0.0,
                omega_uu: s * s * stretch(a),
            }
        } else if t >= -0.5 * self.epsilon {
            FormInputs {
                a: c,
                dalpha: 0.0,
                lapse: rp.cosh(),
                fhat_dalpha: self.slope,
                u_dot_a: 0.0,
                u_dot_b: 0.0,
                omega_uu: s * s * stretch(0.0),
            }
        } else {
            let (a, da) = self.alpha_c(t)?;
            let sigma = -t - 0.5 * self.epsilon;
            let product = if sigma <= self.beta.root_end() {
                self.slope
            } else {
                self.chi_prime(a) * da
            };
            FormInputs {
                a: c,
                dalpha: da,
                lapse: (rp + a).cosh(),
                fhat_dalpha: product,
                u_dot_a: 0.0,
                u_dot_b: 0.0,
                omega_uu: s * s * stretch(a),
            }
        };
        Ok(pullback_quadratic_form(&inputs))
    }

    /// Sampling windows of t covering (−ε, ε), including both smoothing windows on each side.
    pub fn zones(&self) -> Vec<(&'static str, f64, f64)> {
        let e = self.epsilon;
        let h = 0.5 * e;
        let a = &self.alpha;
        let b = &self.beta;
        let cap = |s0: f64, s1: f64| (-s1 - h, -s0 - h);
        let mut z = Vec::new();
        let (lo, hi) = cap(b.tail_start(), h);
        z.push(("cap tail", lo, hi));
        let (lo, hi) = cap(b.knot_t - b.delta, b.knot_t + b.delta);
        z.push(("cap knot window", lo, hi));
        let (lo, hi) = cap(b.xi + b.delta, b.knot_t - b.delta);
        z.push(("cap linear", lo, hi));
        let (lo, hi) = cap(b.xi - b.delta, b.xi + b.delta);
        z.push(("cap corner window", lo, hi));
        let (lo, hi) = cap(0.0, b.root_end());
        z.push(("cap root", lo, hi));
        z.push(("cylinder", -h, 0.0));
        z.push(("graph root", 0.0, a.root_end()));
        z.push(("graph corner window", a.xi - a.delta, a.xi + a.delta));
        z.push(("graph linear", a.xi + a.delta, a.knot_t - a.delta));
        z.push(("graph knot window", a.knot_t - a.delta, a.knot_t + a.delta));
        z.push(("graph tail", a.tail_start(), e));
        z
    }

    /// The (t, angle) pairs used by [`Self::verify_metric_lower_bound`].
    pub fn sample_points(&self, samples: usize) -> Vec<(f64, f64)> {
        let zones = self.zones();
        let nz = zones.len();
        let golden = 0.5 * (5f64.sqrt() - 1.0);
        let mut pts = Vec::with_capacity(samples);
        let mut idx = 0usize;
        for (zi, &(name, lo, hi)) in zones.iter().enumerate() {
            let k = samples / nz + usize::from(zi < samples % nz);
            let root_zone = name.ends_with("root");
            for i in 0..k {
                let frac = (i as f64 + 0.5) / k as f64;
                // half of each root zone is spread geometrically towards the junction
                let t = if root_zone && i % 2 == 1 {
                    let w = (hi - lo) * 1e-12f64.powf(frac);
                    if lo == 0.0 { w } else { lo + (hi - lo) - w }
                } else {
                    lo + (hi - lo) * frac
                };
                let angle = match idx % 4 {
                    0 => 0.0,
                    1 => 0.5 * PI,
                    _ => (idx as f64 * golden).fract() * PI,
                };
                pts.push((t, angle));
                idx += 1;
            }
        }
        pts
    }

    pub fn verify_metric_lower_bound(&self, samples: usize) -> Result<MetricCheck> {
        if samples == 0 {
            return Err(domain!("at least one sample is required"));
        }
        let mut best = MetricCheck {
            min_ratio: f64::INFINITY,
            pass: false,
            worst_t: f64::NAN,
            worst_angle: f64::NAN,
            samples,
        };
        for (t, angle) in self.sample_points(samples) {
            let r = self.tangent_ratio(t, angle)?;
            if !(r >= best.min_ratio) {
                best.min_ratio = r;
                best.worst_t = t;
                best.worst_angle = angle;
            }
        }
        best.pass = best.min_ratio >= self.lambda - RATIO_TOL;
        Ok(best)
    }

    /// Step for [`Self::c1_check`]: well inside both root segments.
    pub fn default_c1_step(&self) -> f64 {
        1e-3 * self.alpha.root_end().min(self.beta.root_end())
    }

    /// One-sided difference quotients at t = 0 and t = −ε/2, taken with steps h and h/2
    /// and Richardson-extrapolated to h → 0.
    pub fn c1_check(&self, h: f64) -> Result<C1Check> {
        if !(h > 0.0 && h < self.alpha.root_end() && h < self.beta.root_end()) {
            return Err(domain!("step {h:e} must lie inside both root segments"));
        }
        let rp = self.r_plus;
        let c = self.slope;
        let graph = |h: f64| -> Result<(f64, f64)> {
            let (a, _) = self.alpha(h)?;
            Ok((rho_offset(rp, a) / h, self.fhat(a)? / h))
        };
        let cap = |h: f64| -> Result<(f64, f64)> {
            let (b, _) = self.beta.eval_with(&self.collar, &self.rule, h)?;
            Ok((rho_offset(rp - b, b) / h, psi(2.0 * b / self.epsilon_star) / h))
        };
        let extrapolate = |q: (f64, f64), q2: (f64, f64)| (2.0 * q2.0 - q.0, 2.0 * q2.1 - q.1);
        let graph_side = extrapolate(graph(h)?, graph(0.5 * h)?);
        let cap_side = extrapolate(cap(h)?, cap(0.5 * h)?);
        // the cylinder is linear in t: s = (2L/ε) t
        let cylinder_at_zero = (0.0, c * h / h);
        let cylinder_at_junction = (0.0, c * h / h);
        let mut max_error = 0.0f64;
        for (dr, ds) in [graph_side, cylinder_at_zero, cylinder_at_junction, cap_side] {
            max_error = max_error.max(dr.abs()).max((ds - c).abs());
        }
        Ok(C1Check {
            h,
            expected_ds: c,
            graph_side,
            cylinder_at_zero,
            cylinder_at_junction,
            cap_side,
            max_error,
            pass: max_error <= 1e-6 * self.epsilon,
        })
    }

    /// Largest |f̂(α(t)) − (2L/ε) t| over `samples` points of the root segment.
    pub fn alpha_residual(&self, samples: usize) -> Result<f64> {
        let end = self.alpha.root_end();
        let mut worst = 0.0f64;
        for i in 0..samples {
            let frac = (i as f64 + 0.5) / samples as f64;
            let t = if i % 2 == 0 { end * frac } else { end * 1e-12f64.powf(frac) };
            let (a, _) = self.alpha(t)?;
            worst = worst.max((self.fhat(a)? - self.slope * t).abs());
        }
        Ok(worst)
    }

    /// Monotonicity, identity tails and χ properties on a uniform grid of `points`.
    pub fn check_invariants(&self, points: usize) -> Result<CapInvariants> {
        let e = self.epsilon;
        let mut alpha_increasing = true;
        let mut alpha_identity_tail = true;
        let mut prev = 0.0;
        for i in 1..points {
            let t = e * i as f64 / points as f64;
            let (v, dv) = self.alpha(t)?;
            alpha_increasing &= v > prev && dv > 0.0;
            prev = v;
            if t > 2.0 * e / 3.0 {
                alpha_identity_tail &= v == t;
            }
        }
        let mut alpha_c_increasing = true;
        let mut alpha_c_identity_tail = true;
        let mut prev = -e;
        for i in 1..points {
            let t = -e + 0.5 * e * i as f64 / points as f64;
            let (v, dv) = self.alpha_c(t)?;
            alpha_c_increasing &= v > prev && dv > 0.0;
            prev = v;
            if t < -5.0 * e / 6.0 {
                alpha_c_identity_tail &= v == t;
            }
        }
        let es = self.epsilon_star;
        let chi_ok = self.chi(0.0) == 0.0
            && (0..points).all(|i| self.chi(-es + 0.5 * es * i as f64 / points as f64) == -1.0)
            && self.chi_prime(-1e-12 * es) > 1e5 / es;
        Ok(CapInvariants {
            alpha_increasing,
            alpha_identity_tail,
            alpha_c_increasing,
            alpha_c_identity_tail,
            chi_ok,
            max_root_residual: self.alpha_residual(points.min(200))?,
        })
    }

    pub fn cap_bounds(&self) -> Result<CapBounds> {
        let n = self.n;
        let nf = n as f64;
        let (rp, es, len) = (self.r_plus, self.epsilon_star, self.length);
        let ch0 = (0.5 * self.rho0).cosh();
        let area = self.boundary_area();
        let d_tilde = 2.0 * ch0 * len + 0.5 + ch0 + self.rho0;
        let v_tilde = (len * ch0 + 1.0 / (nf - 1.0) + 2.0 * ch0) * area;
        // collar of the cap in y with t = −(ε*/2) y²: √(1 + V²χ′²)|dt| = √((ε* y)² + 9V²(1 − y)⁴) dy
        let quad = Quadrature::default();
        let element = |y: f64| {
            let t = -0.5 * es * y * y;
            let v = (rp + t).cosh();
            ((es * y).powi(2) + 9.0 * v * v * (1.0 - y).powi(4)).sqrt()
        };
        let w = omega(n)?;
        let collar_vol = quad.integrate(0.0, 1.0, |y| {
            w * (rp - 0.5 * es * y * y).sinh().powi(n as i32 - 1) * element(y)
        })?;
        let cap_arc = quad.integrate(0.0, 1.0, element)?;
        let measured_vol = ball_volume(n, rp - 0.5 * es)? + collar_vol + len * rp.cosh() * area;
        let measured_diam = 2.0 * len * rp.cosh() + cap_arc + 2.0 * (rp - 0.5 * es);
        Ok(CapBounds {
            d_tilde,
            v_tilde,
            measured_diam,
            measured_vol,
        })
    }
}

/// Entries of the pullback quadratic form g(Φ_*u, Φ_*u) for u = a∂_t + ū.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormInputs {
    pub a: f64,
    /// ∂_t α
    pub dalpha: f64,
    /// V at the base point
    pub lapse: f64,
    /// ∂_t f̂ · ∂_t α, passed as a product since ∂_t f̂ blows up where ∂_t α vanishes
    pub fhat_dalpha: f64,
    /// ⟨ū, A⟩_ω
    pub u_dot_a: f64,
    /// ⟨ū, B⟩_ω
    pub u_dot_b: f64,
    /// ω at α applied to (ū, ū)
    pub omega_uu: f64,
}

/// a²α′² + a²V²(f̂′α′)² + 2a⟨ū,A⟩α′ + 2aV²⟨ū,B⟩f̂′α′ + ⟨ū,A⟩² + ω(ū,ū) + V²⟨ū,B⟩².
pub fn pullback_quadratic_form(x: &FormInputs) -> f64 {
    let v2 = x.lapse * x.lapse;
    let a = x.a;
    a * a * x.dalpha * x.dalpha
        + a * a * v2 * x.fhat_dalpha * x.fhat_dalpha
        + 2.0 * a * x.u_dot_a * x.dalpha
        + 2.0 * a * v2 * x.u_dot_b * x.fhat_dalpha
        + x.u_dot_a * x.u_dot_a
        + x.omega_uu
        + v2 * x.u_dot_b * x.u_dot_b
}
