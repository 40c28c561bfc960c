//! One PASS/FAIL line per acceptance criterion. Each criterion is checked
//! against values computed here, independently of the library code paths.

use lomse_core::dynamics::{
    finite_difference_jacobian, lemma_from_axis, lemma_triples, lemma_triples_extended, ConeProfile, DEFAULT_SEED_EPSILON, DEFAULT_T_MAX,
};
use lomse_core::exact::rat;
use lomse_core::geometry::density_report;
use lomse_core::{
    barrier_certificate_a3, barrier_certificate_a4, dirichlet_multiplicity, extract_profile, geometry_report,
    integrate_orbit, nonminimizing_verdict, oscillation_record, seed_unstable, spectra, validate_params,
    verify_hopf, LomseParams, Multiplicity, Orbit, OrbitOptions, Stability, Verdict,
};
use nalgebra::{Matrix2, Matrix3x4, Matrix4};
use std::f64::consts::PI;
use std::time::Instant;

const SWEEP: [(i64, i64, i64); 8] =
    [(3, 2, 2), (3, 2, 4), (3, 2, 6), (5, 4, 2), (5, 4, 4), (5, 4, 6), (7, 4, 2), (15, 8, 2)];

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($msg)+));
        }
    };
}

fn params(n: i64, p: i64, k: i64) -> LomseParams {
    validate_params(n, p, k).expect("admissible triple")
}

fn orbit(prm: &LomseParams) -> Orbit {
    integrate_orbit(prm, seed_unstable(prm, DEFAULT_SEED_EPSILON), DEFAULT_T_MAX, &OrbitOptions::default())
        .expect("orbit integrates")
}

/// Scalars of a triple in plain floating point.
struct Oracle {
    n: f64,
    p: f64,
    kk: f64,
    lambda_sq: f64,
    phi0: f64,
    cos_theta: f64,
}

impl Oracle {
    fn new(n: i64, p: i64, k: i64) -> Self {
        let (n, p, k) = (n as f64, p as f64, k as f64);
        let kk = k * (k + n - 1.0);
        let lambda_sq = kk / p;
        let phi0 = ((p - n / lambda_sq) / (n - p)).sqrt();
        let cos_theta = ((1.0 - p / n) / (1.0 - p / kk)).sqrt();
        Self { n, p, kk, lambda_sq, phi0, cos_theta }
    }

    fn field(&self, phi: f64, psi: f64) -> [f64; 2] {
        let w = 1.0 + self.lambda_sq * phi * phi;
        let a = (self.lambda_sq - 1.0) * self.p / w - (self.n - self.p);
        let b = self.n - self.p + self.p / w;
        [psi, -psi - (b * psi - a * phi) * (1.0 + (phi + psi).powi(2))]
    }

    fn jacobian(&self, phi: f64, psi: f64) -> Matrix2<f64> {
        let h = 1e-6;
        let d = |dp: f64, ds: f64| {
            let a = self.field(phi + dp, psi + ds);
            let b = self.field(phi - dp, psi - ds);
            [(a[0] - b[0]) / (2.0 * h), (a[1] - b[1]) / (2.0 * h)]
        };
        let (c0, c1) = (d(h, 0.0), d(0.0, h));
        Matrix2::new(c0[0], c1[0], c0[1], c1[1])
    }

    fn cos_alpha(&self) -> f64 {
        self.cos_theta * ((self.n - self.p) / (self.kk - self.p)).powf(self.p / 2.0)
    }

    fn volume_ratio(&self) -> f64 {
        (self.kk / self.n).powf(self.p / 2.0) * (self.cos_theta * self.cos_theta).powf((self.n - self.p) / 2.0)
    }

    /// Field in `u = phi - phi0`; `f1` vanishes at `phi0` and is divided out as
    /// `phi0^2 - phi^2 = -u (2 phi0 + u)`.
    fn deviation_field(&self, u: f64, psi: f64) -> [f64; 2] {
        let (l, phi) = (self.lambda_sq, self.phi0 + u);
        let w = 1.0 + l * phi * phi;
        let a = -(l - 1.0) * self.p * l * u * (2.0 * self.phi0 + u) / (w * (1.0 + l * self.phi0 * self.phi0));
        let b = self.n - self.p + self.p / w;
        [psi, -psi - (b * psi - a * phi) * (1.0 + (phi + psi).powi(2))]
    }

    /// Classical RK4 in `(u, psi)` from `(u0, 0)` to the second zero of `psi`,
    /// with the step shortened to follow each half turn.
    fn two_psi_zeros(&self, u0: f64) -> [f64; 2] {
        let h = 1e-3;
        let mut y = [u0, 0.0];
        let mut found = Vec::new();
        let mut prev_sign = 0.0;
        for _ in 0..400_000 {
            let f = |y: [f64; 2]| self.deviation_field(y[0], y[1]);
            let k1 = f(y);
            let k2 = f([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
            let k3 = f([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
            let k4 = f([y[0] + h * k3[0], y[1] + h * k3[1]]);
            let next = [
                y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
                y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            ];
            if prev_sign != 0.0 && next[1].signum() != prev_sign {
                let s = y[1] / (y[1] - next[1]);
                found.push(y[0] + s * (next[0] - y[0]));
                if found.len() == 2 {
                    return [found[0], found[1]];
                }
            }
            prev_sign = next[1].signum();
            y = next;
        }
        panic!("fewer than two zeros of psi");
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() < tol
}

fn criterion_1() -> Outcome {
    let cases = [
        ((3, 2, 2), 1.0 / 9.0),
        ((7, 4, 2), 1.0 / (8.0 * 7f64.sqrt())),
        ((15, 8, 2), 7f64.powi(4) / (2f64.powi(11) * 3f64.powi(5)) * (7.0f64 / 5.0).sqrt()),
    ];
    for ((n, p, k), expected) in cases {
        let got = geometry_report(&params(n, p, k)).cos_alpha;
        ensure!(close(got, expected, 1e-12), "cos alpha ({n},{p},{k}) = {got}, expected {expected}");
        let indep = Oracle::new(n, p, k).cos_alpha();
        ensure!(close(got, indep, 1e-12), "cos alpha ({n},{p},{k}) = {got}, direct formula {indep}");
    }
    let hopf = params(3, 2, 2);
    ensure!(*hopf.cos_theta_sq() == rat(4, 9), "cos^2 theta = {}", hopf.cos_theta_sq());
    let m: f64 = 2.0;
    let theta_m = (4.0 * (m - 1.0) / (3.0 * (2.0 * m - 1.0))).sqrt().acos();
    ensure!(close(hopf.theta(), (2.0f64 / 3.0).acos(), 1e-12), "theta = {}", hopf.theta());
    ensure!(close(hopf.theta(), theta_m, 1e-12), "theta = {}, theta_2 = {theta_m}", hopf.theta());
    ensure!(*hopf.lambda_sq() == rat(4, 1), "lambda^2 = {}", hopf.lambda_sq());
    ensure!(hopf.lambda() == 2.0, "lambda = {}", hopf.lambda());
    ensure!(hopf.lambda_sq() * rat(2, 1) == rat(8, 1), "lambda^2 p != 8");
    ensure!(hopf.harmonic_eigenvalue() == 8.into(), "k(k+n-1) = {}", hopf.harmonic_eigenvalue());
    Ok(())
}

fn exact_check(cert: &lomse_core::BarrierCertificate, name: &str, expected: &str) -> Outcome {
    let check = cert.check(name).ok_or_else(|| format!("missing check {name}"))?;
    ensure!(check.exact.as_deref() == Some(expected), "{name} = {:?}, expected {expected}", check.exact);
    Ok(())
}

fn criterion_2() -> Outcome {
    for ((n, p, k), f0, g0, c) in [
        ((3, 2, 2), "1/12", "3/4", None),
        ((5, 4, 2), "11/12", "13/6", None),
        ((5, 4, 4), "0/1", "5/7", Some(rat(6, 7))),
    ] {
        let cert = barrier_certificate_a3(&params(n, p, k)).map_err(|e| e.to_string())?;
        exact_check(&cert, "F(0)", f0)?;
        exact_check(&cert, "G(0)", g0)?;
        if let Some(c) = c {
            ensure!(cert.c.as_ref() == Some(&c), "c = {:?}", cert.c);
        }
        ensure!(cert.pass, "certificate ({n},{p},{k}) fails");
    }
    let bound = |s: f64| 0.16 * ((3.0 + 5.0 * s) / (1.0 + s)).powi(2) * (1.0 + 5.0 * s) / (1.0 + 10.0 * s);
    let (mut lo, mut hi) = (1e-6, 5.0);
    for _ in 0..200 {
        let (a, b) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
        if bound(a) < bound(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    ensure!(close(lo, 0.2, 1e-6) && close(bound(lo), 32.0 / 27.0, 1e-10), "ternary search minimum {}", bound(lo));
    for (n, p, k) in [(3, 2, 4), (5, 4, 6)] {
        let cert = barrier_certificate_a4(&params(n, p, k)).map_err(|e| e.to_string())?;
        let min = cert.check("min_{s>0} F(s)").ok_or("missing minimum")?;
        ensure!(close(min.value, 32.0 / 27.0, 1e-10), "min F = {}", min.value);
        exact_check(&cert, "F(1/5) - 32/27", "0/1")?;
        ensure!(cert.pass, "certificate ({n},{p},{k}) fails");
    }
    Ok(())
}

fn is_listed_type_ii(n: i64, p: i64, k: i64) -> bool {
    matches!((n, p), (3, 2) if k >= 4) || matches!((n, p), (5, 4) if k >= 6)
}

fn sorted_real_eigenvalues(m: &Matrix2<f64>) -> Result<[f64; 2], String> {
    let eig = m.complex_eigenvalues();
    ensure!(eig.iter().all(|z| z.im.abs() < 1e-12), "complex eigenvalues {eig:?}");
    let mut v = [eig[0].re, eig[1].re];
    v.sort_by(f64::total_cmp);
    Ok(v)
}

fn criterion_3() -> Outcome {
    for (n, p, k) in SWEEP {
        let prm = params(n, p, k);
        let sp = spectra(&prm);
        let (mu1, mu2) = ((k - 1) as f64, (-n - k) as f64);
        ensure!(sp.mu1 == mu1 && sp.mu2 == mu2, "({n},{p},{k}) closed-form spectra {} {}", sp.mu1, sp.mu2);
        let [lo, hi] = sorted_real_eigenvalues(&sp.a())?;
        ensure!(close(lo, mu2, 1e-10) && close(hi, mu1, 1e-10), "({n},{p},{k}) eigensolve {lo} {hi}");
        let [lo, hi] = sorted_real_eigenvalues(&Oracle::new(n, p, k).jacobian(0.0, 0.0))?;
        ensure!(close(lo, mu2, 1e-6) && close(hi, mu1, 1e-6), "({n},{p},{k}) difference quotients {lo} {hi}");

        let o = Oracle::new(n, p, k);
        let disc = o.n * o.n - 6.0 * o.n + 1.0 + 8.0 * o.n * o.n / o.kk;
        let listed = is_listed_type_ii(n, p, k);
        ensure!((disc < 0.0) == listed, "({n},{p},{k}) discriminant {disc} against list");
        ensure!(
            (prm.stability() == Stability::TypeII) == listed,
            "({n},{p},{k}) classified {:?}",
            prm.stability()
        );
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let prm = params(3, 2, 2);
    let o = orbit(&prm);
    ensure!(o.converged(), "terminal {:?}", o.terminal);
    let last = o.last();
    let target = 5f64.sqrt() / 2.0;
    ensure!(close(last.phi, target, 1e-8) && last.psi.abs() < 1e-8, "end point {last:?}");
    ensure!(o.samples.windows(2).all(|w| w[1].phi > w[0].phi), "phi not strictly increasing");
    ensure!(o.samples.iter().all(|s| s.psi > 0.0), "psi not positive");

    let prof = extract_profile(&o, &prm).map_err(|e| e.to_string())?;
    let ode1 = |r: f64, rho: f64, rho_r: f64, rho_rr: f64| {
        let q = 4.0 * rho * rho / (r * r);
        rho_rr / (1.0 + rho_r * rho_r) + rho_r / r + 2.0 * (rho_r / r - 4.0 * rho / (r * r)) / (1.0 + q)
    };
    let m = prof.r_samples.len();
    let worst = (1..m - 1)
        .map(|i| ode1(prof.r_samples[i], prof.rho[i], prof.rho_r[i], prof.rho_rr[i]).abs())
        .fold(0.0, f64::max);
    ensure!(worst < 1e-8, "max residual {worst}");

    let pts: Vec<(f64, f64)> = (0..m)
        .filter(|&i| prof.rho[i] / prof.r_samples[i] < 0.01 * target)
        .map(|i| (prof.r_samples[i].ln(), prof.rho[i].ln()))
        .collect();
    let slope = (pts.last().unwrap().1 - pts[0].1) / (pts.last().unwrap().0 - pts[0].0);
    ensure!((slope - 2.0).abs() < 0.1, "small-r slope {slope}");
    Ok(())
}

fn criterion_5() -> Outcome {
    let prm = params(3, 2, 4);
    let o = orbit(&prm);
    let rec = oscillation_record(&o).map_err(|e| e.to_string())?;
    let phi0 = Oracle::new(3, 2, 4).phi0;
    ensure!(rec.phis.len() >= 4, "{} zeros of psi", rec.phis.len());
    ensure!(rec.odd_decreasing() && rec.even_increasing(), "extrema {:?}", rec.phis);
    let odd_ok = rec.phis.iter().step_by(2).all(|&p| p > phi0);
    let even_ok = rec.phis.iter().skip(1).step_by(2).all(|&p| p < phi0);
    ensure!(odd_ok && even_ok, "extrema do not alternate around phi0");

    // linearization at (phi0, 0): eigenvalues (-(n+1) +- i sqrt(-disc))/2
    let o4 = Oracle::new(3, 2, 4);
    let disc = o4.n * o4.n - 6.0 * o4.n + 1.0 + 8.0 * o4.n * o4.n / o4.kk;
    let predicted = (-PI * (o4.n + 1.0) / (-disc).sqrt()).exp();
    let amps: Vec<f64> = rec.phis.iter().map(|p| (p - phi0).abs()).collect();
    for w in amps.windows(2).skip(1) {
        let ratio = w[1] / w[0];
        ensure!((ratio / predicted - 1.0).abs() < 0.1, "ratio {ratio}, linearization {predicted}");
    }
    ensure!(amps.windows(2).all(|w| w[1] < w[0]), "amplitudes not decaying {amps:?}");

    let (phi1, phi2) = (rec.phis[0], rec.phis[1]);
    ensure!(phi1 > phi0 && phi1 <= 1.2 * phi0, "phi1 = {phi1}, phi0 = {phi0}");
    ensure!(phi2 >= 0.8 * phi0 && phi2 < phi0, "phi2 = {phi2}, phi0 = {phi0}");
    let min_slope = o.samples.iter().map(|s| s.phi + s.psi).fold(f64::INFINITY, f64::min);
    ensure!(min_slope > 0.0, "min phi + psi = {min_slope}");
    Ok(())
}

fn criterion_6() -> Outcome {
    for (n, p, k) in [(3, 2, 4), (5, 4, 6)] {
        let prm = params(n, p, k);
        let o = orbit(&prm);
        let opts = OrbitOptions::default();
        let mut applicable = 0;
        let in_orbit = lemma_triples(&o, &prm);
        let extended = lemma_triples_extended(&o, &prm, 6, &opts).map_err(|e| e.to_string())?;
        ensure!(extended.len() >= 2, "({n},{p},{k}) only {} extended triples", extended.len());
        for tr in in_orbit.iter().chain(&extended) {
            if tr.applies {
                applicable += 1;
                ensure!(tr.holds, "({n},{p},{k}) orbit triple {tr:?}");
            }
        }
        let oracle = Oracle::new(n, p, k);
        // half-turn contraction of the linearization at (phi0, 0)
        let disc = oracle.n * oracle.n - 6.0 * oracle.n + 1.0 + 8.0 * oracle.n * oracle.n / oracle.kk;
        let predicted = (-PI * (oracle.n + 1.0) / (-disc).sqrt()).exp();
        let last = extended.last().expect("nonempty");
        for pair in [[0, 1], [1, 2]] {
            let ratio = (last.deviation[pair[1]] / last.deviation[pair[0]]).abs();
            ensure!((ratio / predicted - 1.0).abs() < 1e-3, "({n},{p},{k}) ratio {ratio} vs {predicted}");
        }
        let thr = ((3.0 * oracle.p - oracle.n - 1.0) / (3.0 * (oracle.n - oracle.p))).sqrt();
        ensure!(close(prm.lemma_threshold(), thr, 1e-14), "threshold {}", prm.lemma_threshold());
        for i in 0..8 {
            let a = thr + (0.95 * oracle.phi0 - thr) * i as f64 / 7.0;
            let tr = lemma_from_axis(&prm, a, &opts).map_err(|e| e.to_string())?;
            ensure!(tr.applies && tr.holds, "({n},{p},{k}) start {a}: {tr:?}");
            applicable += 1;
            let [u1, u2] = oracle.two_psi_zeros(a - oracle.phi0);
            let rel = |x: f64, y: f64| ((x - y) / y).abs() < 1e-4;
            ensure!(
                rel(tr.deviation[1], u1) && rel(tr.deviation[2], u2),
                "({n},{p},{k}) start {a}: {:?} vs RK4 {u1} {u2}",
                tr.deviation
            );
        }
        ensure!(applicable > 0, "({n},{p},{k}) no triple reaches the threshold");
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let prm = params(3, 2, 4);
    let o = orbit(&prm);
    let prof = extract_profile(&o, &prm).map_err(|e| e.to_string())?;
    let phi0 = Oracle::new(3, 2, 4).phi0;
    let at = dirichlet_multiplicity(&o, &prm, phi0).map_err(|e| e.to_string())?;
    ensure!(at.multiplicity == Multiplicity::UnboundedSequence, "{:?}", at.multiplicity);
    ensure!(at.d_values.len() >= 3, "{} d values", at.d_values.len());
    let phi_b = phi0 + 0.5 * (at.phi1 - phi0);
    let mid = dirichlet_multiplicity(&o, &prm, phi_b).map_err(|e| e.to_string())?;
    ensure!(matches!(mid.multiplicity, Multiplicity::Finite(c) if c >= 2), "{:?}", mid.multiplicity);
    for rep in [&at, &mid] {
        for &d in &rep.d_values {
            let (rho, _, _) = prof.rescaled(d, 1.0).ok_or("rescaled profile out of range")?;
            ensure!(close(rho, rep.phi_boundary, 1e-8), "boundary value {rho} at d = {d}");
        }
    }

    let node = params(3, 2, 2);
    let on = orbit(&node);
    let half = Oracle::new(3, 2, 2).phi0 / 2.0;
    let rep = dirichlet_multiplicity(&on, &node, half).map_err(|e| e.to_string())?;
    ensure!(rep.multiplicity == Multiplicity::Finite(1), "{:?}", rep.multiplicity);
    Ok(())
}

fn criterion_8() -> Outcome {
    let prm = params(3, 2, 4);
    let o = orbit(&prm);
    let prof = extract_profile(&o, &prm).map_err(|e| e.to_string())?;
    let rep = nonminimizing_verdict(&prof, &o, &prm).map_err(|e| e.to_string())?;
    let oracle = Oracle::new(3, 2, 4).volume_ratio();
    ensure!(close(rep.theta_cone, oracle, 1e-12), "cone density {} vs {oracle}", rep.theta_cone);
    ensure!(close(rep.theta_cone_quadrature, oracle, 1e-6), "quadrature {}", rep.theta_cone_quadrature);
    let mono = rep.theta_seq.windows(2).all(|w| w[1] >= w[0] - 1e-6);
    ensure!(mono, "densities {:?}", rep.theta_seq);
    ensure!(rep.theta_seq[0] < oracle, "theta_1 = {} >= theta_0 = {oracle}", rep.theta_seq[0]);
    ensure!(rep.verdict == Verdict::NonMinimizing, "{:?}", rep.verdict);

    let cone = ConeProfile { slope: Oracle::new(3, 2, 4).phi0 };
    let flat = density_report(&cone, &prm, &[0.1, 1.0, 7.0, 1e3]).map_err(|e| e.to_string())?;
    ensure!(flat.theta_seq.iter().all(|&t| close(t, oracle, 1e-6)), "cone densities {:?}", flat.theta_seq);
    Ok(())
}

fn hopf_singular_values(x: [f64; 4]) -> [f64; 3] {
    let [a, b, c, d] = x;
    // (z1, z2) = (a + ib, c + id) -> (2 z1 conj(z2), |z1|^2 - |z2|^2)
    let jac = Matrix3x4::new(
        2.0 * c, 2.0 * d, 2.0 * a, 2.0 * b,
        -2.0 * d, 2.0 * c, 2.0 * b, -2.0 * a,
        2.0 * a, 2.0 * b, -2.0 * c, -2.0 * d,
    );
    let xv = nalgebra::Vector4::new(a, b, c, d);
    let proj = Matrix4::identity() - xv * xv.transpose();
    let mut s: Vec<f64> = (jac * proj).singular_values().iter().copied().collect();
    s.sort_by(|p, q| q.total_cmp(p));
    [s[0], s[1], s[2]]
}

fn criterion_9() -> Outcome {
    let rep = verify_hopf(1000, 2024).map_err(|e| e.to_string())?;
    ensure!(rep.samples == 1000, "{} samples", rep.samples);
    for c in &rep.checks {
        ensure!(c.pass, "{} deviates by {}", c.name, c.max_deviation);
    }
    ensure!(rep.harmonic.pass, "harmonic check {:?}", rep.harmonic);
    ensure!(close(rep.los_root, (2.0f64 / 3.0).acos(), 1e-10), "root {}", rep.los_root);

    let points = lomse_core::hopf::random_sphere_points(1000, 2024);
    for x in points {
        let s = hopf_singular_values(x);
        ensure!(close(s[0], 2.0, 1e-9) && close(s[1], 2.0, 1e-9) && s[2] < 1e-9, "singular values {s:?}");
    }
    for name in [
        "angle condition at arccos(2/3)",
        "general equation agrees with equal-singular-value form",
        "ODE4 (m = 2) equals equal-singular-value form",
    ] {
        ensure!(rep.check(name).is_some_and(|c| c.pass), "missing or failing: {name}");
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    for (n, p, k) in SWEEP {
        let prm = params(n, p, k);
        let sp = spectra(&prm);
        let oracle = Oracle::new(n, p, k);
        for (at, expected) in [(0.0, sp.a()), (oracle.phi0, sp.b())] {
            let fd = oracle.jacobian(at, 0.0);
            ensure!((fd - expected).amax() < 1e-6, "({n},{p},{k}) at phi = {at}: {fd} vs {expected}");
            let lib = finite_difference_jacobian(&prm, at, 0.0, 1e-6);
            let lib = Matrix2::new(lib[0][0], lib[0][1], lib[1][0], lib[1][1]);
            ensure!((lib - expected).amax() < 1e-6, "({n},{p},{k}) library quotients at phi = {at}");
        }
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("closed-form cone constants", criterion_1),
        ("exact barrier constants", criterion_2),
        ("saddle spectra and stability lists", criterion_3),
        ("node orbit and profile (3,2,2)", criterion_4),
        ("spiral orbit (3,2,4)", criterion_5),
        ("reflection lemma on event triples", criterion_6),
        ("Dirichlet multiplicities", criterion_7),
        ("density monotonicity and cone comparison", criterion_8),
        ("Hopf map verification", criterion_9),
        ("Jacobians at both equilibria", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_secs_f64() * 1e3;
        match result {
            Ok(()) => println!("PASS {:>2} {name} ({ms:.1} ms)", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({ms:.1} ms): {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
