use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use hypgraph::core::capping::build_cap;
use hypgraph::core::family::{FamilySpec, Model};
use hypgraph::core::mass::{mass_estimate, DEFAULT_SCHEDULE};
use hypgraph::core::{GraphManifold, Quadrature};
use hypgraph::report::{emit_csv, write_csv};
use hypgraph::suites::{self, Suite};
use hypgraph::{config, table};

const SUBCOMMANDS: [&str; 4] = ["family", "mass", "cap", "verify"];

#[derive(Parser)]
#[command(version, about = "Stability checks for asymptotically hyperbolic graphs", args_override_self = true)]
struct Cli {
    /// key = value file mirroring the long flags; flags on the command line override it
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Ads,
}

#[derive(Subcommand)]
enum Command {
    /// Run a mass-to-zero family and write the stability table
    Family {
        #[arg(long, value_enum, default_value = "ads")]
        model: ModelArg,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 0.5, 0.1, 0.02])]
        masses: Vec<f64>,
        #[arg(long, default_value_t = 2.0)]
        rho: f64,
        #[arg(long = "rho-bar", default_value_t = 3.0)]
        rho_bar: f64,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        #[arg(long, default_value_t = 0.9)]
        lambda: f64,
        #[arg(long = "L", default_value_t = 1.0)]
        length: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long = "abs-tol", default_value_t = Quadrature::default().abs_tol)]
        abs_tol: f64,
        #[arg(long = "rel-tol", default_value_t = Quadrature::default().rel_tol)]
        rel_tol: f64,
        /// Output CSV; standard output when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the mass from the far-field integrals
    Mass {
        #[arg(long, value_enum, default_value = "ads")]
        model: ModelArg,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        m: f64,
        /// Profile table (rho f [df]) used instead of the model
        #[arg(long, value_name = "FILE")]
        table: Option<PathBuf>,
        #[arg(long = "r-schedule", value_delimiter = ',', default_values_t = DEFAULT_SCHEDULE)]
        r_schedule: Vec<f64>,
    },
    /// Build the capped manifold and check the metric lower bound
    Cap {
        #[arg(long, value_enum, default_value = "ads")]
        model: ModelArg,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        m: f64,
        #[arg(long, default_value_t = 2.0)]
        rho: f64,
        #[arg(long, default_value_t = 0.9)]
        lambda: f64,
        #[arg(long = "L", default_value_t = 1.0)]
        length: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Run verification suites; exits nonzero when any criterion fails
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Also write the reference family table here
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn model(m: ModelArg) -> Model {
    match m {
        ModelArg::Ads => Model::Ads,
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Family {
            model: mdl,
            n,
            masses,
            rho,
            rho_bar,
            beta,
            lambda,
            length,
            samples,
            abs_tol,
            rel_tol,
            out,
        } => {
            let spec = FamilySpec {
                model: model(mdl),
                n,
                masses,
                rho,
                rho_bar,
                beta,
                lambda,
                length,
                samples,
                schedule: DEFAULT_SCHEDULE.to_vec(),
                abs_tol,
                rel_tol,
            };
            let report = hypgraph::run_family(&spec)?;
            for row in &report.rows {
                for d in &row.diagnostics {
                    eprintln!("m = {}: {d}", row.mass);
                }
            }
            match out {
                Some(path) => write_csv(&report, &path)?,
                None => print!("{}", emit_csv(&report)),
            }
            Ok(true)
        }
        Command::Mass {
            model: _,
            n,
            m,
            table: tbl,
            r_schedule,
        } => {
            let g = match tbl {
                Some(path) => {
                    let p = table::load_profile(&path, n)?;
                    let end = p.grid().map(|g| g[g.len() - 1]).unwrap_or(f64::INFINITY);
                    if let Some(r) = r_schedule.iter().find(|r| r.sinh() > end) {
                        bail!("schedule radius {r} lies beyond the table (rho <= {end})");
                    }
                    GraphManifold::with_derived_constants(p, None)?
                }
                None => GraphManifold::ads_schwarzschild(n, m)?,
            };
            let rep = mass_estimate(&g, &r_schedule)?;
            for (r, v) in &rep.samples {
                println!("r = {r}: {v:.12e}");
            }
            println!("mass = {:.12e}", rep.mass);
            if let Some(w) = &rep.warning {
                eprintln!("warning: {w}");
            }
            Ok(rep.convergence_ok)
        }
        Command::Cap {
            model: _,
            n,
            m,
            rho,
            lambda,
            length,
            samples,
        } => {
            let g = GraphManifold::ads_schwarzschild(n, m)?;
            let cap = build_cap(&g, rho, length, lambda)?;
            let check = cap.verify_metric_lower_bound(samples)?;
            let bounds = cap.cap_bounds()?;
            let c1 = cap.c1_check(cap.default_c1_step())?;
            println!("epsilon = {:.6e}", cap.epsilon);
            println!("epsilon_star = {:.6e}", cap.epsilon_star);
            println!("slope = {:.6e}", cap.slope);
            println!("min_ratio = {:.12}", check.min_ratio);
            println!("pass = {}", check.pass);
            println!("c1_max_error = {:.3e}", c1.max_error);
            println!("diameter = {:.6} <= {:.6}", bounds.measured_diam, bounds.d_tilde);
            println!("volume = {:.6} <= {:.6}", bounds.measured_vol, bounds.v_tilde);
            println!("distance_preserving = {}", cap.distance_preserving);
            Ok(check.pass && c1.pass)
        }
        Command::Verify { suite, out } => {
            let outcomes = suites::run_suite(suite);
            for o in &outcomes {
                println!("{o}");
            }
            if let Some(path) = out {
                let report = hypgraph::run_family(&suites::reference_family())?;
                write_csv(&report, &path)?;
            }
            Ok(outcomes.iter().all(|o| o.pass))
        }
    }
}

fn main() -> ExitCode {
    let parsed = config::expand(std::env::args().collect(), &SUBCOMMANDS)
        .context("loading configuration")
        .map(Cli::parse_from);
    match parsed.and_then(run) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
