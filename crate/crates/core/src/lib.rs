//! Numerical tools for Lawson-Osserman minimal cones built from maps between
//! spheres with equal nonzero singular values.
//!
//! - [`params`]: validation of `(n, p, k)` triples and the derived scalars.
//! - [`geometry`]: closed-form cone geometry and graph densities.
//! - [`dynamics`]: the phase-plane system, orbits, profiles and barrier certificates.
//! - [`dirichlet`]: solution counts for the radial Dirichlet problem.
//! - [`hopf`]: checks on the Hopf map `S^3 -> S^2`.

pub mod dirichlet;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod hopf;
pub mod params;
pub mod quad;

pub use dirichlet::{dirichlet_multiplicity, epsilon_window, nonminimizing_verdict, DirichletReport, Multiplicity};
pub use dynamics::{
    barrier_certificate_a3, barrier_certificate_a4, extract_profile, integrate_orbit, oscillation_record,
    seed_unstable, vector_field, BarrierCertificate, Orbit, OrbitOptions, PhasePoint, Profile, Terminal, Tolerances,
};
pub use error::{LomseError, Result};
pub use exact::Rational;
pub use geometry::{density_report, geometry_report, graph_volume, DensityReport, GeometryReport, Verdict};
pub use hopf::{verify_hopf, HopfReport};
pub use params::{spectra, validate_params, validate_params_relaxed, Family, LomseParams, SpectralData, Stability};
