//! Orbits of the phase-plane system: seeding on the unstable manifold of the
//! saddle, adaptive integration with dense output, and event location.

use super::field::{FieldCoefficients, PhasePoint};
use super::integrator::{DenseSegment, StepControl, Stepper};
use crate::error::{LomseError, Result};
use crate::params::{spectra, LomseParams};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
    /// Accuracy in `t` for located events.
    pub event: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { abs: 1e-10, rel: 1e-10, event: 1e-12 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitOptions {
    pub tolerances: Tolerances,
    /// Radius of the ball around `(phi0, 0)` that counts as converged.
    pub convergence_radius: f64,
    /// Leaving the box `|phi|, |psi| <= domain_bound` ends the run.
    pub domain_bound: f64,
    pub h_min: f64,
    pub h_max: f64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            convergence_radius: 1e-9,
            domain_bound: 1e6,
            h_min: 1e-14,
            h_max: 0.25,
        }
    }
}

impl OrbitOptions {
    pub fn with_tolerances(abs: f64, rel: f64) -> Self {
        Self { tolerances: Tolerances { abs, rel, ..Tolerances::default() }, ..Self::default() }
    }
}

/// Default horizon in `t = log r`.
pub const DEFAULT_T_MAX: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EventKind {
    PsiZero,
    PhiEqualsPhi0,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event {
    pub kind: EventKind,
    pub t: f64,
    pub point: PhasePoint,
    /// Sign of the crossing: the monitored quantity goes from negative to positive.
    pub rising: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Terminal {
    ConvergedToP1,
    LeftDomain,
    MaxTimeReached,
}

/// A trajectory with step-node samples, its piecewise interpolant and the
/// detected events. Samples and segments are ordered by increasing `t`.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub samples: Vec<PhasePoint>,
    pub events: Vec<Event>,
    pub terminal: Terminal,
    segments: Vec<DenseSegment>,
    phi0: f64,
    convergence_radius: f64,
    event_tol: f64,
}

/// `(eps, eps (k-1))` at `t = 0`: a point on the linear unstable direction
/// `V1 = (1, k-1)` of the saddle.
pub fn seed_unstable(params: &LomseParams, epsilon: f64) -> PhasePoint {
    PhasePoint::new(epsilon, epsilon * f64::from(params.k() - 1), 0.0)
}

pub const DEFAULT_SEED_EPSILON: f64 = 1e-8;

/// Integrates from `seed` to `t_end` (forward or backward). Forward runs stop
/// early once the orbit settles at `(phi0, 0)`; around a spiral equilibrium the
/// run continues to the next zero of `psi` inside the convergence ball.
pub fn integrate_orbit(params: &LomseParams, seed: PhasePoint, t_end: f64, opts: &OrbitOptions) -> Result<Orbit> {
    if !seed.is_finite() || !t_end.is_finite() {
        return Err(LomseError::InvalidInput("seed and t_max must be finite".into()));
    }
    let tol = opts.tolerances;
    if !(tol.abs > 0.0 && tol.rel > 0.0 && tol.event > 0.0) {
        return Err(LomseError::InvalidInput("tolerances must be positive".into()));
    }
    let coeffs = FieldCoefficients::new(params);
    let phi0 = params.phi0();
    let forward = t_end >= seed.t;
    let spec = spectra(params);
    let contracting = spec.cone_equilibrium_contracting();
    let half_turn = if spec.mu3.im != 0.0 { std::f64::consts::PI / spec.mu3.im.abs() } else { f64::INFINITY };
    let mut entered: Option<f64> = None;

    let ctrl = StepControl { abs_tol: tol.abs, rel_tol: tol.rel, h_min: opts.h_min, h_max: opts.h_max };
    let direction = if forward { 1.0 } else { -1.0 };
    let mut stepper = Stepper::new(|y: &[f64; 2]| coeffs.eval(y[0], y[1]), seed.t, [seed.phi, seed.psi], direction, ctrl);

    let mut samples = vec![seed];
    let mut segments = Vec::new();
    let mut events = Vec::new();
    let mut distances = vec![(seed.phi - phi0).hypot(seed.psi)];
    let mut terminal = Terminal::MaxTimeReached;

    while stepper.t() != t_end {
        let acc = stepper.step(t_end)?;
        let point = PhasePoint::new(acc.y[0], acc.y[1], acc.t);
        if !point.is_finite() {
            return Err(LomseError::NonFiniteState { t: acc.t });
        }
        let prev = *samples.last().expect("seeded");
        locate_events(&acc.segment, &prev, &point, phi0, tol.event, &mut events);
        samples.push(point);
        segments.push(acc.segment);

        if point.phi.abs() > opts.domain_bound || point.psi.abs() > opts.domain_bound {
            terminal = Terminal::LeftDomain;
            break;
        }
        let dist = (point.phi - phi0).hypot(point.psi);
        distances.push(dist);
        if let Some(t_in) = entered {
            // spiral: settle at the next turning point, or after one full turn
            let turned = events.iter().any(|e: &Event| e.kind == EventKind::PsiZero && e.t > t_in);
            if (turned || point.t - t_in > 2.0 * half_turn) && dist < opts.convergence_radius {
                terminal = Terminal::ConvergedToP1;
                break;
            }
        } else if forward && contracting && dist < opts.convergence_radius && distances.len() > 10 {
            let earlier = distances[distances.len() - 11];
            if dist < earlier {
                if half_turn.is_finite() {
                    entered = Some(point.t);
                } else {
                    terminal = Terminal::ConvergedToP1;
                    break;
                }
            }
        }
    }

    if !forward {
        samples.reverse();
        segments.reverse();
        events.reverse();
        for e in &mut events {
            e.rising = !e.rising;
        }
    }

    Ok(Orbit {
        samples,
        events,
        terminal,
        segments,
        phi0,
        convergence_radius: opts.convergence_radius,
        event_tol: tol.event,
    })
}

fn sign_change(a: f64, b: f64) -> bool {
    (a > 0.0 && b <= 0.0) || (a < 0.0 && b >= 0.0)
}

fn locate_events(seg: &DenseSegment, prev: &PhasePoint, cur: &PhasePoint, phi0: f64, tol: f64, out: &mut Vec<Event>) {
    let mut found = Vec::new();
    if sign_change(prev.psi, cur.psi) {
        let t = find_root(|t| seg.eval(t)[1], prev.t, cur.t, tol);
        found.push((EventKind::PsiZero, t, cur.psi > prev.psi));
    }
    if sign_change(prev.phi - phi0, cur.phi - phi0) {
        let t = find_root(|t| seg.eval(t)[0] - phi0, prev.t, cur.t, tol);
        found.push((EventKind::PhiEqualsPhi0, t, cur.phi > prev.phi));
    }
    found.sort_by(|a, b| a.1.total_cmp(&b.1));
    for (kind, t, rising) in found {
        let y = seg.eval(t);
        out.push(Event { kind, t, point: PhasePoint::new(y[0], y[1], t), rising });
    }
}

/// Bracketed root of `g` between `a` and `b` by the Illinois variant of
/// regula falsi, falling back to bisection, until the bracket is below `tol`.
pub(crate) fn find_root<G: Fn(f64) -> f64>(g: G, a: f64, b: f64, tol: f64) -> f64 {
    let (mut lo, mut hi) = (a, b);
    let (mut glo, mut ghi) = (g(lo), g(hi));
    if glo == 0.0 {
        return lo;
    }
    if ghi == 0.0 {
        return hi;
    }
    let mut side = 0i8;
    for iter in 0..200 {
        if (hi - lo).abs() <= tol {
            break;
        }
        let secant = hi - ghi * (hi - lo) / (ghi - glo);
        let mid = 0.5 * (lo + hi);
        let inside = secant.is_finite() && (secant - lo) * (secant - hi) < 0.0;
        // every fourth iteration bisects to guarantee bracket shrinkage
        let t = if inside && iter % 4 != 3 { secant } else { mid };
        let gt = g(t);
        if gt == 0.0 {
            return t;
        }
        if (gt > 0.0) == (glo > 0.0) {
            lo = t;
            glo = gt;
            if side == -1 {
                ghi *= 0.5;
            }
            side = -1;
        } else {
            hi = t;
            ghi = gt;
            if side == 1 {
                glo *= 0.5;
            }
            side = 1;
        }
    }
    0.5 * (lo + hi)
}

impl Orbit {
    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    pub fn segments(&self) -> &[DenseSegment] {
        &self.segments
    }

    pub fn event_tolerance(&self) -> f64 {
        self.event_tol
    }

    pub fn t_start(&self) -> f64 {
        self.samples.first().map_or(0.0, |s| s.t)
    }

    pub fn t_end(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }

    pub fn last(&self) -> PhasePoint {
        *self.samples.last().expect("orbit has at least the seed")
    }

    fn segment_at(&self, t: f64) -> Option<&DenseSegment> {
        if self.segments.is_empty() || t < self.t_start() || t > self.t_end() {
            return None;
        }
        let idx = self.segments.partition_point(|s| s.bounds().1 < t);
        self.segments.get(idx.min(self.segments.len() - 1))
    }

    /// Interpolated state at `t`, or `None` outside the integrated range.
    pub fn eval(&self, t: f64) -> Option<PhasePoint> {
        self.segment_at(t).map(|s| {
            let y = s.eval(t);
            PhasePoint::new(y[0], y[1], t)
        })
    }

    /// `(phi_t, psi_t)` of the interpolant at `t`.
    pub fn eval_derivative(&self, t: f64) -> Option<[f64; 2]> {
        self.segment_at(t).map(|s| s.eval_derivative(t))
    }

    pub fn psi_zero_events(&self) -> impl Iterator<Item = &Event> {
        self.events.iter().filter(|e| e.kind == EventKind::PsiZero)
    }

    pub fn psi_zero_count(&self) -> usize {
        self.psi_zero_events().count()
    }

    /// Whether the final point is inside the convergence ball.
    pub fn final_distance_to_cone(&self) -> f64 {
        let p = self.last();
        (p.phi - self.phi0).hypot(p.psi)
    }

    pub fn converged(&self) -> bool {
        self.terminal == Terminal::ConvergedToP1 && self.final_distance_to_cone() < self.convergence_radius
    }

    /// All `t` with `phi(t) = level`, located on the interpolant.
    pub fn crossings(&self, level: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for seg in &self.segments {
            let (lo, hi) = seg.bounds();
            let g_lo = seg.eval(lo)[0] - level;
            let g_hi = seg.eval(hi)[0] - level;
            if g_lo == 0.0 {
                if out.last().is_none_or(|&t: &f64| (t - lo).abs() > self.event_tol) {
                    out.push(lo);
                }
                continue;
            }
            if sign_change(g_lo, g_hi) {
                let t = find_root(|t| seg.eval(t)[0] - level, lo, hi, self.event_tol);
                if out.last().is_none_or(|&prev: &f64| (t - prev).abs() > self.event_tol) {
                    out.push(t);
                }
            }
        }
        out
    }

    pub fn max_phi(&self) -> f64 {
        let from_events = self.psi_zero_events().map(|e| e.point.phi).fold(f64::NEG_INFINITY, f64::max);
        self.samples.iter().map(|s| s.phi).fold(from_events, f64::max)
    }
}

/// Alternating extrema of `phi` at the zeros `T_i` of `psi`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscillationRecord {
    pub times: Vec<f64>,
    pub phis: Vec<f64>,
    pub phi0: f64,
    /// Geometric decay factor of `|phi_i - phi0|` per half turn, fitted by least squares.
    pub decay_ratio: Option<f64>,
}

pub fn oscillation_record(orbit: &Orbit) -> Result<OscillationRecord> {
    let events: Vec<&Event> = orbit.psi_zero_events().collect();
    if events.len() < 2 {
        return Err(LomseError::InsufficientEvents { found: events.len(), needed: 2 });
    }
    let times: Vec<f64> = events.iter().map(|e| e.t).collect();
    let phis: Vec<f64> = events.iter().map(|e| e.point.phi).collect();
    let amplitudes: Vec<f64> = phis.iter().map(|p| (p - orbit.phi0()).abs()).collect();
    Ok(OscillationRecord { decay_ratio: geometric_ratio(&amplitudes), times, phis, phi0: orbit.phi0() })
}

/// Least-squares fit of `log a_i = c + i log q`, returning `q`.
pub fn geometric_ratio(amplitudes: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = amplitudes
        .iter()
        .enumerate()
        .filter(|(_, a)| **a > 0.0)
        .map(|(i, a)| (i as f64, a.ln()))
        .collect();
    linear_slope(&pts).map(f64::exp)
}

pub(crate) fn linear_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

impl OscillationRecord {
    /// `phi(T_1) > phi(T_3) > ...`
    pub fn odd_decreasing(&self) -> bool {
        self.phis.iter().step_by(2).collect::<Vec<_>>().windows(2).all(|w| w[1] < w[0])
    }

    /// `phi(T_2) < phi(T_4) < ...`
    pub fn even_increasing(&self) -> bool {
        self.phis.iter().skip(1).step_by(2).collect::<Vec<_>>().windows(2).all(|w| w[1] > w[0])
    }

    /// Odd-indexed extrema lie above `phi0`, even-indexed ones below.
    pub fn brackets_phi0(&self) -> bool {
        self.phis
            .iter()
            .enumerate()
            .all(|(i, &p)| if i % 2 == 0 { p > self.phi0 } else { p < self.phi0 })
    }

    pub fn times_increasing(&self) -> bool {
        self.times.windows(2).all(|w| w[1] > w[0])
    }
}
