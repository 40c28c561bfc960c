//! Invariant-region certificates for the phase-plane system.
//!
//! For node-type equilibria the region under the graph of
//! `h(phi) = f1(phi) phi / (c (n - p))` is forward invariant; the inward
//! pointing condition reduces to positivity of a cubic `F(s)` in
//! `s = (1 + lambda^2 phi0^2)/(1 + lambda^2 phi^2) - 1`, which is certified in
//! exact rational arithmetic. For spiral-type equilibria the barrier is
//! `g(phi) = (2 f1(phi) + 1/5) phi` and the accompanying one-variable bound and
//! no-limit-cycle inequality are checked numerically.

use super::field::FieldCoefficients;
use super::integrator::{State, StepControl, Stepper};
use super::orbit::{find_root, Orbit, OrbitOptions};
use crate::error::{LomseError, Result};
use crate::exact::{self, int, rat, serialize_opt_rational, QPoly, Rational};
use crate::params::{LomseParams, Stability};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseId {
    A3Case1,
    A3Case2,
    A3Case3,
    A3Case4,
    A4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RequiredSign {
    Positive,
    NonNegative,
    Negative,
    /// Agreement with a reference value within the stated tolerance.
    Matches,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BarrierCheck {
    pub name: String,
    pub value: f64,
    /// Exact value as `num/den` when computed in rational arithmetic.
    pub exact: Option<String>,
    pub required_sign: RequiredSign,
    pub pass: bool,
}

impl BarrierCheck {
    fn exact(name: &str, q: &Rational, required: RequiredSign) -> Self {
        let s = exact::sign(q);
        let pass = match required {
            RequiredSign::Positive => s > 0,
            RequiredSign::NonNegative => s >= 0,
            RequiredSign::Negative => s < 0,
            RequiredSign::Matches => s == 0,
        };
        Self {
            name: name.to_string(),
            value: exact::to_f64(q),
            exact: Some(exact::fmt_rational(q)),
            required_sign: required,
            pass,
        }
    }

    fn float(name: &str, value: f64, required: RequiredSign) -> Self {
        let pass = match required {
            RequiredSign::Positive => value > 0.0,
            RequiredSign::NonNegative => value >= 0.0,
            RequiredSign::Negative => value < 0.0,
            RequiredSign::Matches => value == 0.0,
        };
        Self { name: name.to_string(), value, exact: None, required_sign: required, pass }
    }

    fn matches(name: &str, value: f64, reference: f64, tol: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            exact: None,
            required_sign: RequiredSign::Matches,
            pass: (value - reference).abs() <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BarrierCertificate {
    pub case_id: CaseId,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub c: Option<Rational>,
    pub checks: Vec<BarrierCheck>,
    pub grid_resolution: usize,
    pub pass: bool,
}

impl BarrierCertificate {
    fn new(case_id: CaseId, c: Option<Rational>, checks: Vec<BarrierCheck>, grid_resolution: usize) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self { case_id, c, checks, grid_resolution, pass }
    }

    pub fn check(&self, name: &str) -> Option<&BarrierCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const GRID_POINTS: usize = 2000;

/// The cubic `F(s) = I(s) + II(s) + III(s) IV(s)` bounding the inward-pointing
/// margin of the `h` barrier from below, together with `G(s) = (F(s) - F(0))/s`
/// and the right end `s_max = lambda^2 phi0^2` of the admissible range.
#[derive(Debug, Clone, PartialEq)]
pub struct BarrierCubic {
    pub f: QPoly,
    pub g: QPoly,
    pub s_max: Rational,
}

pub fn barrier_cubic(params: &LomseParams, c: &Rational) -> BarrierCubic {
    let n = int(i64::from(params.n()));
    let p = int(i64::from(params.p()));
    let np = &n - &p;
    let l2 = params.lambda_sq().clone();
    let one = exact::one();
    let s_max = (&l2 * &p - &n) / &np;

    let s = QPoly::linear(Rational::from_integer(0.into()), one.clone());
    let cst = |q: Rational| QPoly::constant(q);
    let l_minus_s = &cst(s_max.clone()) - &s;

    let i = QPoly::linear(one.clone(), &one / c);
    let ii = (&l_minus_s * &QPoly::linear(one.clone(), one.clone()))
        .scale(&(-(int(2) * &np) / (c * (&l2 - &one) * &p)));
    let iii = QPoly::linear(&l2 - c * (&l2 - &one), one.clone()).scale(&(&np / (&l2 - &one)));
    let iv = &cst(one.clone()) + &(&l_minus_s * &QPoly::linear(one.clone(), &one / c)).scale(&(&one / &l2));
    let f = &(&i + &ii) + &(&iii * &iv);
    let g = f.deflate_at_zero();
    BarrierCubic { f, g, s_max }
}

fn a3_case(params: &LomseParams) -> Result<(CaseId, Rational)> {
    if params.stability() != Stability::TypeI {
        return Err(LomseError::WrongCase("the h barrier applies to Type I triples only".into()));
    }
    match (params.n(), params.p(), params.k()) {
        (3, 2, 2) => Ok((CaseId::A3Case1, int(1))),
        (5, 4, 2) => Ok((CaseId::A3Case2, int(1))),
        (5, 4, 4) => Ok((CaseId::A3Case3, rat(6, 7))),
        (n, _, _) if n >= 7 => Ok((CaseId::A3Case4, rat(1, 2))),
        (n, p, k) => Err(LomseError::WrongCase(format!("no barrier constant is listed for ({n}, {p}, {k})"))),
    }
}

/// Interior sample points of `(0, upper)`: a uniform grid plus geometric
/// refinement toward both endpoints.
fn interior_grid(upper: f64, n: usize) -> Vec<f64> {
    let mut pts: Vec<f64> = (1..n).map(|i| upper * i as f64 / n as f64).collect();
    for j in 1..=9 {
        let e = 10f64.powi(-j);
        pts.push(upper * e);
        pts.push(upper * (1.0 - e));
    }
    pts.sort_by(f64::total_cmp);
    pts
}

/// Smallest value of `X2(phi, 0)` on `(0, phi0)`; positive means the flow
/// crosses the `phi` axis upward.
fn axis_margin(coeffs: &FieldCoefficients, grid: &[f64]) -> f64 {
    grid.iter().map(|&phi| coeffs.eval(phi, 0.0)[1]).fold(f64::INFINITY, f64::min)
}

/// Smallest value of `b'(phi) - X2/X1` along the graph `psi = b(phi)`.
fn graph_margin<B, D>(coeffs: &FieldCoefficients, grid: &[f64], barrier: B, slope: D) -> f64
where
    B: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    grid.iter()
        .map(|&phi| {
            let psi = barrier(phi);
            let [x1, x2] = coeffs.eval(phi, psi);
            slope(phi) - x2 / x1
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn barrier_certificate_a3(params: &LomseParams) -> Result<BarrierCertificate> {
    let (case_id, c) = a3_case(params)?;
    let cubic = barrier_cubic(params, &c);
    let zero = Rational::from_integer(0.into());
    let mut checks = vec![
        BarrierCheck::exact("F(0)", &cubic.f.eval(&zero), RequiredSign::NonNegative),
        BarrierCheck::exact("G(0)", &cubic.g.eval(&zero), RequiredSign::Positive),
        BarrierCheck::exact("G(s_max)", &cubic.g.eval(&cubic.s_max), RequiredSign::Positive),
        BarrierCheck::exact("cubic leading coefficient", &cubic.f.coeff(3), RequiredSign::Negative),
    ];

    let coeffs = FieldCoefficients::new(params);
    let phi0 = params.phi0();
    let cn = exact::to_f64(&c) * (coeffs.n - coeffs.p);
    let grid = interior_grid(phi0, GRID_POINTS);
    let h = |phi: f64| coeffs.f1(phi) * phi / cn;
    let dh = |phi: f64| (coeffs.f1(phi) + coeffs.f1_prime(phi) * phi) / cn;
    checks.push(BarrierCheck::float("(A) min X2(phi, 0)", axis_margin(&coeffs, &grid), RequiredSign::Positive));
    checks.push(BarrierCheck::float("(B) min h' - X2/X1", graph_margin(&coeffs, &grid, h, dh), RequiredSign::Positive));
    let mu1 = f64::from(params.k()) - 1.0;
    checks.push(BarrierCheck::float("h'(0) - mu1", dh(0.0) - mu1, RequiredSign::Positive));

    Ok(BarrierCertificate::new(case_id, Some(c), checks, grid.len()))
}

/// `(4/25) ((3 + 5s)/(1 + s))^2 (1 + 5s)/(1 + 10s)`
pub fn spiral_bound(s: f64) -> f64 {
    let q = (3.0 + 5.0 * s) / (1.0 + s);
    0.16 * q * q * (1.0 + 5.0 * s) / (1.0 + 10.0 * s)
}

pub fn spiral_bound_exact(s: &Rational) -> Rational {
    let one = exact::one();
    let q = (int(3) + int(5) * s) / (&one + s);
    rat(4, 25) * &q * &q * (&one + int(5) * s) / (&one + int(10) * s)
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while (b - a).abs() > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

pub fn barrier_certificate_a4(params: &LomseParams) -> Result<BarrierCertificate> {
    if params.stability() != Stability::TypeII {
        return Err(LomseError::WrongCase("the g barrier applies to Type II triples only".into()));
    }
    if params.n() - params.p() != 1 {
        return Err(LomseError::WrongCase("the g barrier analysis assumes n - p = 1".into()));
    }
    let mut checks = Vec::new();

    let (s_star, f_min) = golden_min(spiral_bound, 1e-9, 10.0, 1e-12);
    checks.push(BarrierCheck::matches("min_{s>0} F(s)", f_min, 32.0 / 27.0, 1e-10));
    checks.push(BarrierCheck::matches("argmin F", s_star, 0.2, 1e-6));
    let exact_val = spiral_bound_exact(&rat(1, 5)) - rat(32, 27);
    checks.push(BarrierCheck::exact("F(1/5) - 32/27", &exact_val, RequiredSign::Matches));
    // d log F / ds has numerator -11 + 20 s + 175 s^2, vanishing at s = 1/5
    let s = rat(1, 5);
    let numer = int(-11) + int(20) * &s + int(175) * &s * &s;
    checks.push(BarrierCheck::exact("dF/ds numerator at 1/5", &numer, RequiredSign::Matches));

    let coeffs = FieldCoefficients::new(params);
    let phi0 = params.phi0();
    let grid = interior_grid(phi0, GRID_POINTS);
    let g = |phi: f64| (2.0 * coeffs.f1(phi) + 0.2) * phi;
    let dg = |phi: f64| 2.0 * coeffs.f1_prime(phi) * phi + 2.0 * coeffs.f1(phi) + 0.2;
    checks.push(BarrierCheck::float("(A) min X2(phi, 0)", axis_margin(&coeffs, &grid), RequiredSign::Positive));
    checks.push(BarrierCheck::float("(B) min g' - X2/X1", graph_margin(&coeffs, &grid, g, dg), RequiredSign::Positive));
    let mu1 = f64::from(params.k()) - 1.0;
    checks.push(BarrierCheck::float("g'(0) - mu1", dg(0.0) - mu1, RequiredSign::Positive));

    let thr = params.lemma_threshold();
    checks.push(BarrierCheck::float("4/5 phi0 - threshold", 0.8 * phi0 - thr, RequiredSign::Positive));
    checks.push(BarrierCheck::float(
        "max Y2 + X2 (phi >= threshold, psi > 0)",
        lemma_grid_max(&coeffs, thr, phi0, 100),
        RequiredSign::Negative,
    ));

    Ok(BarrierCertificate::new(CaseId::A4, None, checks, grid.len()))
}

/// Largest `Y2 + X2` over a `m x m` grid of `phi in [threshold, threshold + 3 phi0]`,
/// `psi in (0, 3 phi0]`.
pub fn lemma_grid_max(coeffs: &FieldCoefficients, threshold: f64, phi0: f64, m: usize) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for i in 0..m {
        let phi = threshold + 3.0 * phi0 * i as f64 / (m - 1) as f64;
        for j in 1..=m {
            let psi = 3.0 * phi0 * j as f64 / m as f64;
            let x2 = coeffs.eval(phi, psi)[1];
            let y2 = coeffs.eval_reflected(phi, psi)[1];
            worst = worst.max(x2 + y2);
        }
    }
    worst
}

/// Three consecutive zeros of `psi` with `psi > 0` on the first gap and
/// `psi < 0` on the second.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaTriple {
    pub b: [f64; 3],
    pub phi: [f64; 3],
    /// `phi(b_i) - phi0`, resolved below the spacing of floats near `phi0`.
    pub deviation: [f64; 3],
    /// `phi(b0)` is at or above the threshold, so the conclusion is claimed.
    pub applies: bool,
    /// `phi(b1) > phi0` and `phi(b0) < phi(b2) < phi0`.
    pub holds: bool,
}

fn triple(b: [f64; 3], u: [f64; 3], phi0: f64, threshold: f64) -> LemmaTriple {
    LemmaTriple {
        b,
        phi: u.map(|u| phi0 + u),
        deviation: u,
        applies: phi0 + u[0] >= threshold,
        holds: u[1] > 0.0 && u[0] < u[2] && u[2] < 0.0,
    }
}

/// A zero of `psi`: time, `phi - phi0`, and whether `psi` turns positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TurningPoint {
    pub t: f64,
    pub deviation: f64,
    pub rising: bool,
}

fn triples_from(points: &[TurningPoint], params: &LomseParams) -> Vec<LemmaTriple> {
    points
        .windows(3)
        .filter(|w| w[0].rising && !w[1].rising && w[2].rising)
        .map(|w| {
            triple(
                [w[0].t, w[1].t, w[2].t],
                [w[0].deviation, w[1].deviation, w[2].deviation],
                params.phi0(),
                params.lemma_threshold(),
            )
        })
        .collect()
}

fn orbit_turning_points(orbit: &Orbit) -> Vec<TurningPoint> {
    orbit
        .psi_zero_events()
        .map(|e| TurningPoint { t: e.t, deviation: e.point.phi - orbit.phi0(), rising: e.rising })
        .collect()
}

/// Every event triple of the orbit matching the sign pattern.
pub fn lemma_triples(orbit: &Orbit, params: &LomseParams) -> Vec<LemmaTriple> {
    triples_from(&orbit_turning_points(orbit), params)
}

/// Field in `(u, psi)` with `u = phi - phi0`; `f1` is factored through `u`
/// so that it carries full relative accuracy near the equilibrium.
fn deviation_field(c: &FieldCoefficients, phi0: f64, u: f64, psi: f64) -> [f64; 2] {
    let l = c.lambda_sq;
    let phi = phi0 + u;
    let f1 = -(l - 1.0) * c.p * l * u * (2.0 * phi0 + u) / ((1.0 + l * phi * phi) * (1.0 + l * phi0 * phi0));
    let s = phi + psi;
    [psi, -psi - (c.f2(phi) * psi - f1 * phi) * (1.0 + s * s)]
}

/// Follows the solution through `(phi0 + u, 0)` at time `t` to its next zero of `psi`.
/// Error control is purely relative, so arbitrarily small turns are resolved.
pub fn next_turning_point(params: &LomseParams, t: f64, u: f64, opts: &OrbitOptions) -> Result<TurningPoint> {
    if u == 0.0 || !u.is_finite() {
        return Err(LomseError::InvalidInput(format!("turning point needs a finite nonzero offset, got {u}")));
    }
    let c = FieldCoefficients::new(params);
    let phi0 = params.phi0();
    let tol = opts.tolerances;
    let ctrl = StepControl { abs_tol: f64::MIN_POSITIVE, rel_tol: tol.rel, h_min: opts.h_min, h_max: opts.h_max };
    let mut st = Stepper::new(|y: &State| deviation_field(&c, phi0, y[0], y[1]), t, [u, 0.0], 1.0, ctrl);
    // psi leaves zero with the sign of -u
    let outgoing = -u.signum();
    let t_stop = t + TURN_HORIZON;
    let mut prev_psi = 0.0;
    while st.t() < t_stop {
        let acc = st.step(t_stop)?;
        let psi = acc.y[1];
        if prev_psi * outgoing > 0.0 && psi * outgoing <= 0.0 {
            let seg = &acc.segment;
            let (lo, hi) = seg.bounds();
            let tz = find_root(|s| seg.eval(s)[1], lo, hi, tol.event);
            let y = seg.eval(tz);
            return Ok(TurningPoint { t: tz, deviation: y[0], rising: outgoing < 0.0 });
        }
        prev_psi = psi;
    }
    Err(LomseError::InsufficientEvents { found: 0, needed: 1 })
}

/// Time allowed for one half turn.
const TURN_HORIZON: f64 = 100.0;

/// `count` successive zeros of `psi` after the start `(phi0 + u, 0)` at time `t`.
pub fn turning_points(
    params: &LomseParams,
    t: f64,
    u: f64,
    count: usize,
    opts: &OrbitOptions,
) -> Result<Vec<TurningPoint>> {
    let mut out = Vec::with_capacity(count);
    let (mut t, mut u) = (t, u);
    for _ in 0..count {
        let tp = next_turning_point(params, t, u, opts)?;
        (t, u) = (tp.t, tp.deviation);
        out.push(tp);
    }
    Ok(out)
}

/// Event triples of a spiral orbit, with the zeros of `psi` continued past the
/// end of the orbit for `extra` further half turns.
pub fn lemma_triples_extended(
    orbit: &Orbit,
    params: &LomseParams,
    extra: usize,
    opts: &OrbitOptions,
) -> Result<Vec<LemmaTriple>> {
    if params.stability() != Stability::TypeII {
        return Err(LomseError::WrongType);
    }
    let mut points = orbit_turning_points(orbit);
    let last = *points.last().ok_or(LomseError::InsufficientEvents { found: 0, needed: 1 })?;
    points.extend(turning_points(params, last.t, last.deviation, extra, opts)?);
    Ok(triples_from(&points, params))
}

/// Starts at `(a, 0)` and follows the solution through its next two zeros of `psi`.
pub fn lemma_from_axis(params: &LomseParams, a: f64, opts: &OrbitOptions) -> Result<LemmaTriple> {
    let u0 = a - params.phi0();
    let tp = turning_points(params, 0.0, u0, 2, opts)?;
    Ok(triple(
        [0.0, tp[0].t, tp[1].t],
        [u0, tp[0].deviation, tp[1].deviation],
        params.phi0(),
        params.lemma_threshold(),
    ))
}
