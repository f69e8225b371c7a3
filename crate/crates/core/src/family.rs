//! Mass-to-zero families: class constants frozen over the family and one
//! stability row per member.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::capping::build_cap;
use crate::error::{Error, Result};
use crate::graph::{radial_depth, sup_gradient_decay, GraphManifold};
use crate::hyperbolic::ball_volume;
use crate::levels::{height_h0, penrose_check};
use crate::mass::{mass_estimate_with, DEFAULT_REL_TOL, DEFAULT_SCHEDULE};
use crate::profile::RadialProfile;
use crate::quadrature::Quadrature;
use crate::regions::{boundary_area_bound, diameter_bound, flat_distance_bound_with, omega_volume_with};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Ads,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub model: Model,
    pub n: usize,
    /// Strictly decreasing, ≥ 0.
    pub masses: Vec<f64>,
    /// Geodesic radius of the regions Ω(ρ).
    pub rho: f64,
    /// Geodesic radius of the ambient ball holding the flat filling.
    pub rho_bar: f64,
    pub beta: f64,
    pub lambda: f64,
    pub length: f64,
    pub samples: usize,
    pub schedule: Vec<f64>,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for FamilySpec {
    fn default() -> Self {
        let q = Quadrature::default();
        Self {
            model: Model::Ads,
            n: 3,
            masses: alloc::vec![1.0, 0.5, 0.1, 0.02],
            rho: 2.0,
            rho_bar: 3.0,
            beta: 2.0,
            lambda: 0.9,
            length: 1.0,
            samples: 10_000,
            schedule: DEFAULT_SCHEDULE.to_vec(),
            abs_tol: q.abs_tol,
            rel_tol: q.rel_tol,
        }
    }
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n < 3 {
            return bad(format!("n must be at least 3, got {}", self.n));
        }
        if self.masses.is_empty() {
            return bad("the family has no members".into());
        }
        for (i, &m) in self.masses.iter().enumerate() {
            if !(m >= 0.0) || !m.is_finite() {
                return bad(format!("mass #{i} = {m} is not a finite non-negative number"));
            }
            if i > 0 && !(m < self.masses[i - 1]) {
                return bad(format!("masses must be strictly decreasing ({} then {m})", self.masses[i - 1]));
            }
        }
        let positive = [
            ("rho", self.rho),
            ("rho-bar", self.rho_bar),
            ("beta", self.beta),
            ("L", self.length),
            ("abs_tol", self.abs_tol),
            ("rel_tol", self.rel_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return bad(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return bad(format!("lambda must lie in (0, 1), got {}", self.lambda));
        }
        if self.samples == 0 {
            return bad("samples must be at least 1".into());
        }
        if self.schedule.len() < 3 || self.schedule.windows(2).any(|w| !(w[1] > w[0])) {
            return bad("the radius schedule needs at least 3 increasing entries".into());
        }
        Ok(())
    }

    pub fn quadrature(&self) -> Quadrature {
        Quadrature::new(16, self.abs_tol, self.rel_tol)
    }

    fn profile(&self, m: f64) -> Result<RadialProfile> {
        match self.model {
            Model::Ads => RadialProfile::ads_schwarzschild_with(self.n, m, self.quadrature()),
        }
    }
}

/// (ρ₀, γ, D) shared by every member of the family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassConstants {
    pub rho0: f64,
    pub gamma: f64,
    pub depth: f64,
}

/// ρ₀ = 2.2 r₊ of the largest member clamped to ρ (ρ/2 when every member is entire),
/// γ = 1.1·√(sup over r ≥ ρ₀/2 of V²|∇f|²) and D the largest radial depth.
pub fn class_constants(spec: &FamilySpec) -> Result<ClassConstants> {
    spec.validate()?;
    let profiles: Vec<RadialProfile> = spec.masses.iter().map(|&m| spec.profile(m)).collect::<Result<_>>()?;
    let r_max = profiles.iter().map(RadialProfile::r_plus).fold(0.0, f64::max);
    let rho0 = if r_max > 0.0 { (2.2 * r_max).min(spec.rho) } else { 0.5 * spec.rho };
    let mut sup: f64 = 0.0;
    let mut depth: f64 = 0.0;
    for p in &profiles {
        sup = sup.max(sup_gradient_decay(p, 0.5 * rho0)?);
        depth = depth.max(radial_depth(p, rho0)?);
    }
    Ok(ClassConstants {
        rho0,
        gamma: 1.1 * sup.sqrt(),
        depth,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRow {
    pub mass: f64,
    pub mass_numeric: f64,
    pub h0: f64,
    pub gap: f64,
    pub gap_ratio: f64,
    pub penrose_margin: f64,
    pub vol_omega: f64,
    pub vol_ball: f64,
    pub vol_gap: f64,
    pub flat_bound: f64,
    pub d0: f64,
    pub c0_slack: f64,
    pub cap_min_ratio: f64,
    pub cap_pass: bool,
    /// One entry per quantity that could not be computed, in evaluation order.
    pub diagnostics: Vec<String>,
}

impl StabilityRow {
    fn blank(mass: f64) -> Self {
        Self {
            mass,
            mass_numeric: f64::NAN,
            h0: f64::NAN,
            gap: f64::NAN,
            gap_ratio: f64::NAN,
            penrose_margin: f64::NAN,
            vol_omega: f64::NAN,
            vol_ball: f64::NAN,
            vol_gap: f64::NAN,
            flat_bound: f64::NAN,
            d0: f64::NAN,
            c0_slack: f64::NAN,
            cap_min_ratio: f64::NAN,
            cap_pass: false,
            diagnostics: Vec::new(),
        }
    }

    /// The real-valued columns in table order (cap_pass excluded).
    pub fn reals(&self) -> [f64; 13] {
        [
            self.mass,
            self.mass_numeric,
            self.h0,
            self.gap,
            self.gap_ratio,
            self.penrose_margin,
            self.vol_omega,
            self.vol_ball,
            self.vol_gap,
            self.flat_bound,
            self.d0,
            self.c0_slack,
            self.cap_min_ratio,
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub spec: FamilySpec,
    pub constants: ClassConstants,
    pub rows: Vec<StabilityRow>,
}

pub const COLUMNS: [&str; 14] = [
    "mass",
    "mass_numeric",
    "h0",
    "gap",
    "gap_ratio",
    "penrose_margin",
    "vol_omega",
    "vol_ball",
    "vol_gap",
    "flat_bound",
    "D0",
    "C0_slack",
    "cap_min_ratio",
    "cap_pass",
];

impl StabilityReport {
    /// Whether `column` is non-increasing along the rows, allowing `tol` relative slack.
    pub fn non_increasing(&self, column: impl Fn(&StabilityRow) -> f64, tol: f64) -> bool {
        self.rows.windows(2).all(|w| {
            let (a, b) = (column(&w[0]), column(&w[1]));
            b <= a + tol * a.abs().max(b.abs())
        })
    }

    pub fn vol_gap_monotone(&self) -> bool {
        self.non_increasing(|r| r.vol_gap, 1e-8)
    }

    pub fn flat_bound_monotone(&self) -> bool {
        self.non_increasing(|r| r.flat_bound, 1e-8)
    }
}

fn record<T>(row: &mut StabilityRow, what: &str, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            row.diagnostics.push(format!("{what}: {e}"));
            None
        }
    }
}

/// Every check for one member; failures land in the row's diagnostics.
pub fn evaluate_member(spec: &FamilySpec, constants: &ClassConstants, mass: f64) -> StabilityRow {
    let mut row = StabilityRow::blank(mass);
    let quad = spec.quadrature();
    let Some(profile) = record(&mut row, "profile", spec.profile(mass)) else {
        return row;
    };
    let built = GraphManifold::new(profile, constants.rho0, constants.gamma, constants.depth);
    let Some(g) = record(&mut row, "graph", built) else {
        return row;
    };
    let n = spec.n as f64;

    if let Some(rep) = record(&mut row, "mass", mass_estimate_with(&g, &spec.schedule, DEFAULT_REL_TOL)) {
        row.mass_numeric = rep.mass;
        if let Some(w) = rep.warning {
            row.diagnostics.push(format!("mass: {w}"));
        }
    }
    if let Some(h) = record(&mut row, "height", height_h0(&g, mass, spec.beta)) {
        row.h0 = h.h0;
        row.gap = h.gap;
        row.gap_ratio = if h.gap == 0.0 { 0.0 } else { h.gap / mass.powf(1.0 / (n - 2.0)) };
    }
    if mass > 0.0 {
        if let Some(p) = record(&mut row, "penrose", penrose_check(&g, mass)) {
            row.penrose_margin = p.margin;
        }
    } else {
        row.diagnostics.push("penrose: n/a for an entire graph".into());
    }
    let vol = record(&mut row, "volume", omega_volume_with(&g, spec.rho, &quad));
    let ball = record(&mut row, "ball", ball_volume(spec.n, spec.rho));
    if let (Some(v), Some(b)) = (vol, ball) {
        row.vol_omega = v;
        row.vol_ball = b;
        row.vol_gap = v - b;
    }
    if let Some(f) = record(&mut row, "flat", flat_distance_bound_with(&g, mass, spec.rho_bar, spec.beta, &quad)) {
        row.flat_bound = f.total;
    }
    if let Some(d) = record(&mut row, "D0", diameter_bound(g.rho0, g.gamma, g.depth, spec.rho)) {
        row.d0 = d;
    }
    if let Some(a) = record(&mut row, "C0", boundary_area_bound(&g, mass, spec.rho)) {
        row.c0_slack = a.bound - a.measured;
    }
    if g.profile.has_minimal_boundary() {
        let check = build_cap(&g, spec.rho, spec.length, spec.lambda)
            .and_then(|cap| cap.verify_metric_lower_bound(spec.samples));
        if let Some(c) = record(&mut row, "cap", check) {
            row.cap_min_ratio = c.min_ratio;
            row.cap_pass = c.pass;
        }
    } else {
        row.diagnostics.push("cap: n/a without a minimal boundary".into());
    }
    row
}

/// Validates the spec, freezes the class constants and evaluates each member in order.
pub fn run_family(spec: &FamilySpec) -> Result<StabilityReport> {
    let constants = class_constants(spec)?;
    let rows = spec.masses.iter().map(|&m| evaluate_member(spec, &constants, m)).collect();
    Ok(StabilityReport {
        spec: spec.clone(),
        constants,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn quick(masses: Vec<f64>) -> FamilySpec {
        FamilySpec {
            masses,
            samples: 220,
            ..FamilySpec::default()
        }
    }

    #[test]
    fn validation() {
        assert!(quick(vec![]).validate().is_err());
        assert!(quick(vec![0.5, 0.5]).validate().is_err());
        assert!(quick(vec![0.1, 0.5]).validate().is_err());
        assert!(quick(vec![0.5, -0.1]).validate().is_err());
        assert!(FamilySpec { lambda: 1.0, ..quick(vec![0.5]) }.validate().is_err());
        assert!(quick(vec![0.5, 0.0]).validate().is_ok());
        assert!(matches!(run_family(&quick(vec![])), Err(Error::Config(_))));
    }

    #[test]
    fn zero_mass_member() {
        let rep = run_family(&quick(vec![0.0])).unwrap();
        let r = &rep.rows[0];
        assert_eq!(rep.rows.len(), 1);
        assert_eq!(r.gap, 0.0);
        assert_eq!(r.gap_ratio, 0.0);
        assert_eq!(r.flat_bound, 0.0);
        assert!(r.vol_gap.abs() < 1e-10);
        assert!(r.penrose_margin.is_nan());
        assert!(r.cap_min_ratio.is_nan() && !r.cap_pass);
    }

    #[test]
    fn failing_cap_is_isolated() {
        let spec = FamilySpec {
            lambda: 0.999,
            length: 1e-12,
            ..quick(vec![0.5, 0.1])
        };
        let rep = run_family(&spec).unwrap();
        for r in &rep.rows {
            assert!(!r.cap_pass);
            assert!(r.diagnostics.iter().any(|d| d.starts_with("cap:") && d.contains("2L/ε")));
            assert!(r.vol_gap.is_finite() && r.h0.is_finite());
        }
    }
}
