//! Verification suites: each criterion runs a fixed experiment and compares it
//! against pinned tolerances.

use std::time::{Duration, Instant};

use hypgraph_core::capping::build_cap;
use hypgraph_core::family::FamilySpec;
use hypgraph_core::levels::isoperimetric_check;
use hypgraph_core::mass::DEFAULT_SCHEDULE;
use hypgraph_core::regions::{flat_distance_bound, omega_volume, omega_volume_split, volume_bounds};
use hypgraph_core::{ball_volume, height_h0, mass_estimate, penrose_check, sphere_area, GraphManifold};

use crate::report::emit_csv;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Core,
    Mass,
    Levels,
    Regions,
    Cap,
    All,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Core => &[2, 8],
            Suite::Mass => &[1],
            Suite::Levels => &[3, 4],
            Suite::Regions => &[5, 6],
            Suite::Cap => &[7],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} {} {}: {}", self.id, self.name, self.detail)
    }
}

pub const MASS_REL_TOL: f64 = 1e-3;
pub const CURVATURE_TOL: f64 = 1e-6;
pub const PENROSE_CLOSED_FORM_TOL: f64 = 1e-6;
pub const GAP_RATIO_FACTOR: f64 = 2.0;
pub const VOL_GAP_FINAL_FRACTION: f64 = 1e-2;
pub const SPLIT_TOL: f64 = 1e-8;
pub const FLAT_FINAL_FRACTION: f64 = 0.05;
pub const CAP_RATIO_TOL: f64 = 1e-8;
pub const CAP_SAMPLES: usize = 10_000;
pub const ALPHA_RESIDUAL_TOL: f64 = 1e-10;
pub const BALL_REL_TOL: f64 = 1e-10;
pub const DERIVATIVE_REL_TOL: f64 = 1e-6;

/// Dimensions and masses of the AdS grid used by the mass and curvature checks.
pub const GRID_DIMS: [usize; 3] = [3, 4, 5];
pub const GRID_MASSES: [f64; 3] = [0.1, 0.5, 1.0];
/// Monotone family for the volume and flat-distance checks.
pub const REGION_FAMILY: [f64; 4] = [0.5, 0.1, 0.02, 0.004];
pub const CAP_LAMBDAS: [f64; 3] = [0.5, 0.9, 0.99];

type Check = anyhow::Result<(bool, String)>;

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Check) -> (bool, String) {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    match result {
        Ok((pass, detail)) => {
            let in_time = limit.is_none_or(|l| elapsed <= l);
            let budget = limit.map_or(String::new(), |l| format!(" / {:.0} s", l.as_secs_f64()));
            (pass && in_time, format!("{detail} [{:.2} s{budget}]", elapsed.as_secs_f64()))
        }
        Err(e) => (false, format!("error: {e:#}")),
    }
}

pub fn run(id: u8) -> Outcome {
    let secs = |s: u64| Some(Duration::from_secs(s));
    let (name, (pass, detail)) = match id {
        1 => ("mass recovery", timed(secs(5), mass_recovery)),
        2 => ("vacuum curvature", timed(secs(5), vacuum_curvature)),
        3 => ("penrose inequality", timed(None, penrose)),
        4 => ("height gap scaling", timed(secs(10), height_gap)),
        5 => ("volume sandwich and convergence", timed(None, volume_sandwich)),
        6 => ("flat distance bound", timed(None, flat_distance)),
        7 => ("capping", timed(secs(30), capping)),
        8 => ("core identities", timed(None, core_identities)),
        9 => ("determinism", timed(None, determinism)),
        _ => ("unknown", (false, format!("no criterion {id}"))),
    };
    Outcome { id, name, pass, detail }
}

pub fn run_suite(suite: Suite) -> Vec<Outcome> {
    suite.criteria().iter().map(|&id| run(id)).collect()
}

pub fn reference_family() -> FamilySpec {
    FamilySpec::default()
}

fn mass_recovery() -> Check {
    let mut worst = 0.0f64;
    for n in GRID_DIMS {
        for m in GRID_MASSES {
            let g = GraphManifold::ads_schwarzschild(n, m)?;
            let rep = mass_estimate(&g, &DEFAULT_SCHEDULE)?;
            worst = worst.max((rep.mass - m).abs() / m);
        }
    }
    Ok((worst <= MASS_REL_TOL, format!("max relative error {worst:.3e} (tol {MASS_REL_TOL:e})")))
}

fn vacuum_curvature() -> Check {
    let mut worst = 0.0f64;
    for n in GRID_DIMS {
        let target = -((n * (n - 1)) as f64);
        for m in GRID_MASSES {
            let g = GraphManifold::ads_schwarzschild(n, m)?;
            let rp = g.profile.rho_plus();
            for k in 0..20 {
                let rho = rp + 1e-3 * 1e5f64.powf(k as f64 / 19.0);
                worst = worst.max((g.scalar_curvature(rho)? - target).abs());
            }
        }
    }
    Ok((worst <= CURVATURE_TOL, format!("max |R + n(n-1)| {worst:.3e} over 180 points")))
}

fn penrose() -> Check {
    let mut min_margin = f64::INFINITY;
    for n in GRID_DIMS {
        for m in GRID_MASSES.iter().chain(&REGION_FAMILY) {
            let g = GraphManifold::ads_schwarzschild(n, *m)?;
            min_margin = min_margin.min(penrose_check(&g, *m)?.margin);
        }
    }
    let g = GraphManifold::ads_schwarzschild(3, 1.0)?;
    let margin = penrose_check(&g, 1.0)?.margin;
    let closed = 4.0 * std::f64::consts::PI * (2f64.sqrt() - 1.0);
    let err = (margin - closed).abs();
    Ok((
        min_margin >= 0.0 && err <= PENROSE_CLOSED_FORM_TOL,
        format!("min margin {min_margin:.4e}; n=3 m=1 margin {margin:.9} vs {closed:.9}"),
    ))
}

fn height_gap() -> Check {
    let mut gaps = Vec::new();
    for k in 0..7 {
        let m = 10f64.powf(-1.0 - 2.0 * k as f64 / 6.0);
        let g = GraphManifold::ads_schwarzschild(3, m)?;
        gaps.push((m, height_h0(&g, m, 2.0)?.gap));
    }
    let positive = gaps.iter().all(|&(_, g)| g > 0.0);
    let monotone = gaps.windows(2).all(|w| w[1].1 <= w[0].1);
    let ratios: Vec<f64> = gaps.iter().map(|&(m, g)| g / m).collect();
    let spread = ratios.iter().cloned().fold(0.0, f64::max) / ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok((
        positive && monotone && spread < GAP_RATIO_FACTOR,
        format!(
            "positive {positive}, monotone {monotone}, gap/m spread {spread:.3} (limit {GAP_RATIO_FACTOR}); gap {:.4e} -> {:.4e}",
            gaps[0].1, gaps[6].1
        ),
    ))
}

fn volume_sandwich() -> Check {
    let (rho, beta) = (2.0, 2.0);
    let vol_ball = ball_volume(3, rho)?;
    let mut sandwich = true;
    let mut split_err = 0.0f64;
    let mut gaps = Vec::new();
    for m in REGION_FAMILY {
        let g = GraphManifold::ads_schwarzschild(3, m)?;
        let vb = volume_bounds(&g, m, rho, beta)?;
        let direct = omega_volume(&g, rho)?;
        sandwich &= vb.lower <= direct && direct <= vb.upper_exact;
        let h = height_h0(&g, m, beta)?;
        let (minus, plus) = omega_volume_split(&g, rho, h.rho_h.max(g.profile.rho_plus()))?;
        split_err = split_err.max((minus + plus - direct).abs());
        gaps.push(direct - vol_ball);
    }
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    let fraction = gaps[3] / gaps[0];
    Ok((
        sandwich && decreasing && fraction <= VOL_GAP_FINAL_FRACTION && split_err <= SPLIT_TOL,
        format!(
            "sandwich {sandwich}, gap decreasing {decreasing}, final/first {fraction:.4e} (limit {VOL_GAP_FINAL_FRACTION:e}), split error {split_err:.2e}"
        ),
    ))
}

fn flat_distance() -> Check {
    let (rho_bar, beta) = (3.0, 2.0);
    let mut totals = Vec::new();
    for m in REGION_FAMILY {
        let g = GraphManifold::ads_schwarzschild(3, m)?;
        totals.push(flat_distance_bound(&g, m, rho_bar, beta)?.total);
    }
    let flat = GraphManifold::ads_schwarzschild(3, 0.0)?;
    let zero = flat_distance_bound(&flat, 0.0, rho_bar, beta)?.total;
    let decreasing = totals.windows(2).all(|w| w[1] < w[0]);
    let fraction = totals[3] / totals[0];
    Ok((
        decreasing && fraction <= FLAT_FINAL_FRACTION && zero == 0.0,
        format!(
            "bounds {:?}, strictly decreasing {decreasing}, final/first {fraction:.4} (limit {FLAT_FINAL_FRACTION}), m=0 gives {zero}",
            totals.iter().map(|t| format!("{t:.4}")).collect::<Vec<_>>()
        ),
    ))
}

fn capping() -> Check {
    let g = GraphManifold::ads_schwarzschild(3, 0.5)?;
    let mut pass = true;
    let mut parts = Vec::new();
    for lambda in CAP_LAMBDAS {
        let cap = build_cap(&g, 2.0, 1.0, lambda)?;
        let metric = cap.verify_metric_lower_bound(CAP_SAMPLES)?;
        let bounds = cap.cap_bounds()?;
        let residual = cap.alpha_residual(200)?;
        let c1 = cap.c1_check(cap.default_c1_step())?;
        let ok = metric.min_ratio >= lambda - CAP_RATIO_TOL
            && bounds.measured_vol <= bounds.v_tilde
            && bounds.measured_diam <= bounds.d_tilde
            && residual <= ALPHA_RESIDUAL_TOL
            && c1.pass;
        pass &= ok;
        parts.push(format!(
            "λ={lambda}: min ratio {:.6}, vol {:.3}/{:.3}, diam {:.3}/{:.3}, residual {residual:.1e}, C1 {:.1e}/{:.1e}",
            metric.min_ratio,
            bounds.measured_vol,
            bounds.v_tilde,
            bounds.measured_diam,
            bounds.d_tilde,
            c1.max_error,
            1e-6 * cap.epsilon
        ));
    }
    Ok((pass, parts.join("; ")))
}

fn core_identities() -> Check {
    let mut ball_err = 0.0f64;
    let mut deriv_err = 0.0f64;
    let mut min_slack = f64::INFINITY;
    for k in 1..=50 {
        let r = 0.1 * k as f64;
        let exact = std::f64::consts::PI * ((2.0 * r).sinh() - 2.0 * r);
        ball_err = ball_err.max((ball_volume(3, r)? - exact).abs() / exact);
        for n in 3..=6 {
            let h = 1e-5;
            let fd = (ball_volume(n, r + h)? - ball_volume(n, r - h)?) / (2.0 * h);
            let area = sphere_area(n, r)?;
            deriv_err = deriv_err.max((fd - area).abs() / area);
            min_slack = min_slack.min(isoperimetric_check(n, r)?);
        }
    }
    Ok((
        ball_err <= BALL_REL_TOL && deriv_err <= DERIVATIVE_REL_TOL && min_slack >= 0.0,
        format!("ball rel error {ball_err:.2e}, derivative rel error {deriv_err:.2e}, min isoperimetric slack {min_slack:.3e}"),
    ))
}

fn determinism() -> Check {
    let spec = reference_family();
    let a = emit_csv(&crate::run_family(&spec)?);
    let b = emit_csv(&crate::run_family(&spec)?);
    let c = emit_csv(&hypgraph_core::family::run_family(&spec)?);
    Ok((
        a == b && a == c,
        format!("reference family CSV identical across 3 runs: {}", a == b && a == c),
    ))
}
