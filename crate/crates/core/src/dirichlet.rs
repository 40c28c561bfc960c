//! Radial solutions of the Dirichlet problem on the unit ball with boundary
//! data `phi f`, read off from a single orbit by rescaling.
//!
//! Every `t_i` with `phi(t_i) = phi_b` yields the solution `rho(d_i r)/d_i`,
//! `d_i = e^{t_i}`, whose boundary value at `r = 1` is `phi_b`.

use crate::dynamics::{oscillation_record, Orbit, RadialGraph};
use crate::error::{LomseError, Result};
use crate::geometry::{density_report, DensityReport};
use crate::params::{LomseParams, Stability};
use serde::Serialize;

/// `|phi_b - phi0|` below which the boundary amplitude is treated as `phi0`.
pub const PHI0_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Multiplicity {
    Zero,
    Finite(usize),
    /// Crossings accumulate; only a finite prefix is resolved.
    UnboundedSequence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirichletReport {
    pub phi_boundary: f64,
    pub crossing_ts: Vec<f64>,
    pub d_values: Vec<f64>,
    pub multiplicity: Multiplicity,
    /// Largest `phi` along the orbit; `phi0` for node-type orbits.
    pub phi1: f64,
    /// `phi` at the second zero of `psi`, spiral orbits only.
    pub phi2: Option<f64>,
    pub epsilon_window: Option<f64>,
    /// The truncated cone `rho = phi0 r` also solves the problem (Lipschitz, not smooth).
    pub singular_cone_solution: bool,
    /// Fitted contraction of `|phi(T_i) - phi0|` per half turn.
    pub decay_ratio: Option<f64>,
}

fn require_converged(orbit: &Orbit) -> Result<()> {
    if orbit.converged() {
        Ok(())
    } else {
        Err(LomseError::NotConverged)
    }
}

fn spiral_extrema(orbit: &Orbit) -> (f64, Option<f64>) {
    let mut zeros = orbit.psi_zero_events();
    let phi1 = zeros.next().map_or_else(|| orbit.max_phi(), |e| e.point.phi);
    let phi2 = zeros.next().map(|e| e.point.phi);
    (phi1.max(orbit.max_phi()), phi2)
}

pub fn dirichlet_multiplicity(orbit: &Orbit, params: &LomseParams, phi_boundary: f64) -> Result<DirichletReport> {
    require_converged(orbit)?;
    if phi_boundary.is_nan() || phi_boundary < 0.0 || phi_boundary.is_infinite() {
        return Err(LomseError::InvalidInput(format!("boundary amplitude must be finite and >= 0, got {phi_boundary}")));
    }
    let phi0 = params.phi0();
    let at_phi0 = (phi_boundary - phi0).abs() < PHI0_MATCH_TOL;
    let spiral = params.stability() == Stability::TypeII;

    let (phi1, phi2) = if spiral { spiral_extrema(orbit) } else { (phi0, None) };
    let epsilon_window = spiral.then_some(phi1 - phi0);

    let level = if at_phi0 { phi0 } else { phi_boundary };
    let crossing_ts = if phi_boundary > phi1 || (!spiral && at_phi0) { Vec::new() } else { orbit.crossings(level) };
    let d_values = crossing_ts.iter().map(|t| t.exp()).collect();

    let multiplicity = if spiral && at_phi0 {
        Multiplicity::UnboundedSequence
    } else if crossing_ts.is_empty() {
        Multiplicity::Zero
    } else {
        Multiplicity::Finite(crossing_ts.len())
    };
    let decay_ratio = if spiral { oscillation_record(orbit).ok().and_then(|r| r.decay_ratio) } else { None };

    Ok(DirichletReport {
        phi_boundary,
        crossing_ts,
        d_values,
        multiplicity,
        phi1,
        phi2,
        epsilon_window,
        singular_cone_solution: at_phi0,
        decay_ratio,
    })
}

/// `phi1 - phi0`: the overshoot of a spiral orbit above the cone slope.
pub fn epsilon_window(orbit: &Orbit, params: &LomseParams) -> Result<f64> {
    if params.stability() != Stability::TypeII {
        return Err(LomseError::WrongType);
    }
    require_converged(orbit)?;
    Ok(spiral_extrema(orbit).0 - params.phi0())
}

/// Densities of `profile` at the radii `d_i` where the orbit meets `phi0`,
/// compared with the cone density.
pub fn nonminimizing_verdict<G: RadialGraph + ?Sized>(
    profile: &G,
    orbit: &Orbit,
    params: &LomseParams,
) -> Result<DensityReport> {
    require_converged(orbit)?;
    let mut radii: Vec<f64> = orbit.crossings(params.phi0()).iter().map(|t| t.exp()).collect();
    if radii.is_empty() {
        return Err(LomseError::InsufficientEvents { found: 0, needed: 1 });
    }
    radii.sort_by(f64::total_cmp);
    density_report(profile, params, &radii)
}
