#![no_std]
// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! Asymptotically hyperbolic graphs over ℍⁿ: mass, level-set heights, volume
//! and diameter estimates for the regions Ω(ρ), and the capping construction
//! that closes off a minimal inner boundary.
//!
//! The crate is `no_std` and needs only `alloc`.

extern crate alloc;

pub mod capping;
pub mod error;
pub mod family;
pub mod graph;
pub mod hyperbolic;
pub mod levels;
pub mod mass;
pub mod profile;
pub mod regions;
pub mod quadrature;
pub mod roots;

pub use capping::{build_cap, CapBounds, CapComplex, MetricCheck};
pub use error::{Error, Result};
pub use family::{run_family, ClassConstants, FamilySpec, Model, StabilityReport, StabilityRow};
pub use graph::{AdmissibilityReport, BoundaryKind, GraphManifold};
pub use hyperbolic::{ball_volume, omega, sphere_area, HyperbolicSpace};
pub use levels::{height_h0, level_set_area, penrose_check, perimeter_function, HeightReport};
pub use mass::{mass_estimate, mass_integrand, MassReport};
pub use profile::{ProfileKind, RadialProfile};
pub use quadrature::{GaussLegendre, Quadrature};
