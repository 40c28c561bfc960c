//! Radial profiles `r -> rho(r)` of minimal graphs `y -> rho(|y|) f(y/|y|)`.

use super::orbit::{linear_slope, Orbit, Terminal};
use crate::error::{LomseError, Result};
use crate::exact;
use crate::params::LomseParams;
use serde::Serialize;

/// A radial profile seen in logarithmic coordinates: `phi = rho / r` and
/// `psi = phi_t` as functions of `t = log r`.
pub trait RadialGraph {
    fn log_state(&self, t: f64) -> (f64, f64);

    /// Largest `t` at which the profile is known; `+inf` for closed forms.
    fn max_log_radius(&self) -> f64 {
        f64::INFINITY
    }

    fn rho(&self, r: f64) -> f64 {
        r * self.log_state(r.ln()).0
    }

    fn rho_r(&self, r: f64) -> f64 {
        let (phi, psi) = self.log_state(r.ln());
        phi + psi
    }
}

/// The cone `rho = phi0 r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeProfile {
    pub slope: f64,
}

impl RadialGraph for ConeProfile {
    fn log_state(&self, _t: f64) -> (f64, f64) {
        (self.slope, 0.0)
    }
}

/// The coordinate plane `rho = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FlatProfile;

impl RadialGraph for FlatProfile {
    fn log_state(&self, _t: f64) -> (f64, f64) {
        (0.0, 0.0)
    }
}

/// Left-hand side of the radial minimal surface equation for an
/// equal-singular-value map of rank `p` on `S^n`:
///
/// `rho_rr/(1+rho_r^2) + (n-p) rho_r/r + p (rho_r/r - lambda^2 rho/r^2) / (1 + lambda^2 rho^2/r^2)`
pub fn ode1_lhs(r: f64, rho: f64, rho_r: f64, rho_rr: f64, n: f64, p: f64, lambda_sq: f64) -> f64 {
    rho_rr / (1.0 + rho_r * rho_r)
        + (n - p) * rho_r / r
        + p * (rho_r / r - lambda_sq * rho / (r * r)) / (1.0 + lambda_sq * rho * rho / (r * r))
}

/// The profile `rho(r) = r phi(log r)` of a converged orbit, sampled at the
/// step nodes and step midpoints.
///
/// `residuals` holds `r * lhs`, which is invariant under `rho -> rho(d r)/d`
/// and so comparable across scales.
#[derive(Debug, Clone, Serialize)]
pub struct Profile {
    pub r_samples: Vec<f64>,
    pub rho: Vec<f64>,
    pub rho_r: Vec<f64>,
    pub rho_rr: Vec<f64>,
    pub residuals: Vec<f64>,
    #[serde(skip)]
    orbit: Orbit,
    #[serde(skip)]
    growth_rate: f64,
}

pub fn extract_profile(orbit: &Orbit, params: &LomseParams) -> Result<Profile> {
    if orbit.terminal != Terminal::ConvergedToP1 {
        return Err(LomseError::NotConverged);
    }
    let (n, p) = (f64::from(params.n()), f64::from(params.p()));
    let lambda_sq = exact::to_f64(params.lambda_sq());

    let mut ts = Vec::with_capacity(2 * orbit.samples.len());
    for seg in orbit.segments() {
        let (lo, hi) = seg.bounds();
        ts.push(lo);
        ts.push(0.5 * (lo + hi));
    }
    ts.push(orbit.t_end());

    let mut prof = Profile {
        r_samples: Vec::with_capacity(ts.len()),
        rho: Vec::with_capacity(ts.len()),
        rho_r: Vec::with_capacity(ts.len()),
        rho_rr: Vec::with_capacity(ts.len()),
        residuals: Vec::with_capacity(ts.len()),
        orbit: orbit.clone(),
        growth_rate: f64::from(params.k()) - 1.0,
    };
    for t in ts {
        let pt = orbit.eval(t).expect("t inside orbit range");
        let [_, psi_t] = orbit.eval_derivative(t).expect("t inside orbit range");
        let r = t.exp();
        let rho = r * pt.phi;
        let rho_r = pt.phi + pt.psi;
        let rho_rr = (psi_t + pt.psi) / r;
        prof.r_samples.push(r);
        prof.rho.push(rho);
        prof.rho_r.push(rho_r);
        prof.rho_rr.push(rho_rr);
        prof.residuals.push(r * ode1_lhs(r, rho, rho_r, rho_rr, n, p, lambda_sq));
    }
    Ok(prof)
}

impl Profile {
    pub fn orbit(&self) -> &Orbit {
        &self.orbit
    }

    pub fn r_min(&self) -> f64 {
        self.orbit.t_start().exp()
    }

    pub fn r_max(&self) -> f64 {
        self.orbit.t_end().exp()
    }

    pub fn max_abs_residual(&self) -> f64 {
        // endpoints excluded
        let n = self.residuals.len();
        if n < 3 {
            return 0.0;
        }
        self.residuals[1..n - 1].iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    /// Slope of `log rho` against `log r` over samples with `rho/r` below
    /// `fraction * phi0`; near the origin `rho = O(r^k)`.
    pub fn small_r_slope(&self, fraction: f64) -> Option<f64> {
        let cutoff = fraction * self.orbit.phi0();
        let pts: Vec<(f64, f64)> = self
            .r_samples
            .iter()
            .zip(&self.rho)
            .take_while(|(r, rho)| **rho / **r < cutoff)
            .map(|(r, rho)| (r.ln(), rho.ln()))
            .collect();
        linear_slope(&pts)
    }

    /// Rescaled profile `r -> rho(d r) / d` evaluated at `r`, with its first two derivatives.
    pub fn rescaled(&self, d: f64, r: f64) -> Option<(f64, f64, f64)> {
        let t = (d * r).ln();
        let pt = self.orbit.eval(t)?;
        let [_, psi_t] = self.orbit.eval_derivative(t)?;
        let rho = d * r * pt.phi / d;
        let rho_r = pt.phi + pt.psi;
        let rho_rr = d * (psi_t + pt.psi) / (d * r);
        Some((rho, rho_r, rho_rr))
    }
}

impl RadialGraph for Profile {
    fn log_state(&self, t: f64) -> (f64, f64) {
        let (t0, t1) = (self.orbit.t_start(), self.orbit.t_end());
        if t < t0 {
            // linear regime on the unstable manifold: phi ~ e^{(k-1) t}
            let first = self.orbit.samples[0];
            let phi = first.phi * (self.growth_rate * (t - t0)).exp();
            return (phi, self.growth_rate * phi);
        }
        if t > t1 {
            let last = self.orbit.last();
            return (last.phi, last.psi);
        }
        let pt = self.orbit.eval(t).expect("inside range");
        (pt.phi, pt.psi)
    }

    fn max_log_radius(&self) -> f64 {
        self.orbit.t_end()
    }
}
