//! The Hopf map `S^3 -> S^2` in the coordinates
//! `H(x) = (2(x1 x3 + x2 x4), 2(x2 x3 - x1 x4), x1^2 + x2^2 - x3^2 - x4^2)`
//! and numerical checks of its singular values, the twisted-sphere angle
//! condition and the radial minimal-graph equations.

use crate::dynamics::{extract_profile, integrate_orbit, ode1_lhs, seed_unstable, OrbitOptions, Profile};
use crate::dynamics::{DEFAULT_SEED_EPSILON, DEFAULT_T_MAX};
use crate::error::{LomseError, Result};
use crate::params::validate_params;
use nalgebra::{Matrix3, Matrix3x4, SymmetricEigen, Vector4};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

pub type Point4 = [f64; 4];

const SPHERE_TOL: f64 = 1e-9;

fn check_on_sphere(x: &Point4) -> Result<()> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > SPHERE_TOL {
        return Err(LomseError::NotOnSphere { norm });
    }
    Ok(())
}

pub fn hopf_map(x: &Point4) -> Result<[f64; 3]> {
    check_on_sphere(x)?;
    Ok(hopf_polynomial(x))
}

fn hopf_polynomial(x: &Point4) -> [f64; 3] {
    let [a, b, c, d] = *x;
    [2.0 * (a * c + b * d), 2.0 * (b * c - a * d), a * a + b * b - c * c - d * d]
}

/// Ambient differential of the quadratic map at `x`.
fn ambient_jacobian(x: &Point4) -> Matrix3x4<f64> {
    let [a, b, c, d] = *x;
    Matrix3x4::new(
        2.0 * c, 2.0 * d, 2.0 * a, 2.0 * b, //
        -2.0 * d, 2.0 * c, 2.0 * b, -2.0 * a, //
        2.0 * a, 2.0 * b, -2.0 * c, -2.0 * d,
    )
}

/// Orthonormal frame of `T_x S^3` from right multiplication by the unit quaternions `i, j, k`.
fn tangent_frame(x: &Point4) -> [Vector4<f64>; 3] {
    let [a, b, c, d] = *x;
    [Vector4::new(-b, a, -d, c), Vector4::new(-c, d, a, -b), Vector4::new(-d, -c, b, a)]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereSample {
    pub x: Point4,
    pub fx: [f64; 3],
    /// Differential restricted to `T_x S^3`, as a map on the ambient space.
    pub jacobian: [[f64; 4]; 3],
    /// Descending.
    pub singular_values: [f64; 3],
}

pub fn singular_value_sample(x: &Point4) -> Result<SphereSample> {
    let fx = hopf_map(x)?;
    let xv = Vector4::from_column_slice(x);
    let j = ambient_jacobian(x);
    let projected = j * (nalgebra::Matrix4::identity() - xv * xv.transpose());
    let frame = tangent_frame(x);
    let m = Matrix3::from_columns(&[j * frame[0], j * frame[1], j * frame[2]]);
    let gram = m.transpose() * m;
    let mut sv: Vec<f64> = SymmetricEigen::new(gram).eigenvalues.iter().map(|e| e.max(0.0).sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(SphereSample {
        x: *x,
        fx,
        jacobian: std::array::from_fn(|r| std::array::from_fn(|c| projected[(r, c)])),
        singular_values: [sv[0], sv[1], sv[2]],
    })
}

/// Trace of the pulled-back Gram form; the sum of squared singular values.
pub fn gram_trace(sample: &SphereSample) -> f64 {
    sample.singular_values.iter().map(|s| s * s).sum()
}

/// `sum_j 1/(cos^2 theta + sin^2 theta lambda_j^2) - n`.
pub fn los_residual(singular_values: &[f64], theta: f64) -> f64 {
    let (c2, s2) = (theta.cos().powi(2), theta.sin().powi(2));
    singular_values.iter().map(|l| 1.0 / (c2 + s2 * l * l)).sum::<f64>() - singular_values.len() as f64
}

pub fn los_condition_b(x: &Point4, theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
        return Err(LomseError::InvalidInput(format!("angle must lie in (0, pi/2), got {theta}")));
    }
    Ok(los_residual(&singular_value_sample(x)?.singular_values, theta))
}

/// Bisection for a sign change of `f` on `[a, b]`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if (fa > 0.0) == (fb > 0.0) {
        return Err(LomseError::InvalidInput("bisection needs a sign change".into()));
    }
    while (b - a).abs() > tol {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// All roots of the angle condition at `x` inside `(0, pi/2)`, from sign changes
/// on a grid of `grid` cells refined by bisection.
pub fn los_roots(x: &Point4, grid: usize, tol: f64) -> Result<Vec<f64>> {
    let sv = singular_value_sample(x)?.singular_values;
    let f = |th: f64| los_residual(&sv, th);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let nodes: Vec<f64> = (1..grid).map(|i| half_pi * i as f64 / grid as f64).collect();
    let mut roots = Vec::new();
    for w in nodes.windows(2) {
        let (fa, fb) = (f(w[0]), f(w[1]));
        if fa == 0.0 {
            roots.push(w[0]);
        } else if (fa > 0.0) != (fb > 0.0) && fb != 0.0 {
            roots.push(bisect(f, w[0], w[1], tol)?);
        }
    }
    Ok(roots)
}

/// Left side of the minimal-graph equation for a map with singular values `lambda_i`:
///
/// `rho_rr/(1+rho_r^2) + sum_i (rho_r/r - lambda_i^2 rho/r^2)/(1 + lambda_i^2 rho^2/r^2)`
pub fn general_ode_lhs(r: f64, rho: f64, rho_r: f64, rho_rr: f64, singular_values: &[f64]) -> f64 {
    rho_rr / (1.0 + rho_r * rho_r)
        + singular_values
            .iter()
            .map(|l| {
                let l2 = l * l;
                (rho_r / r - l2 * rho / (r * r)) / (1.0 + l2 * rho * rho / (r * r))
            })
            .sum::<f64>()
}

/// The radial equation for `H^{2m-1,m}` in its original form.
pub fn ode4_lhs(m: u32, r: f64, rho: f64, rho_r: f64, rho_rr: f64) -> f64 {
    let m = f64::from(m);
    rho_rr / (1.0 + rho_r * rho_r)
        + (m - 1.0) * rho_r / r
        + m * (rho_r / r - 4.0 * rho / (r * r)) / (1.0 + 4.0 * rho * rho / (r * r))
}

/// `r` times the general equation along `profile`, with singular values sampled at `x`.
pub fn general_ode_residuals(profile: &Profile, x: &Point4) -> Result<Vec<f64>> {
    let sv = singular_value_sample(x)?.singular_values;
    Ok((0..profile.r_samples.len())
        .map(|i| {
            let r = profile.r_samples[i];
            r * general_ode_lhs(r, profile.rho[i], profile.rho_r[i], profile.rho_rr[i], &sv)
        })
        .collect())
}

/// Largest deviation between the general equation at `x` and the
/// equal-singular-value equation along `profile`.
pub fn general_ode_residual(profile: &Profile, x: &Point4) -> Result<f64> {
    let general = general_ode_residuals(profile, x)?;
    Ok(general.iter().zip(&profile.residuals).map(|(g, s)| (g - s).abs()).fold(0.0, f64::max))
}

/// A homogeneous quadratic form `x^T Q x` in four variables with integer `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadraticForm(pub [[i64; 4]; 4]);

impl QuadraticForm {
    /// Ambient Laplacian, the constant `2 tr Q`.
    pub fn laplacian(&self) -> i64 {
        2 * (0..4).map(|i| self.0[i][i]).sum::<i64>()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| self.0[i][j] == self.0[j][i]))
    }

    pub fn eval(&self, x: &Point4) -> f64 {
        (0..4).map(|i| (0..4).map(|j| self.0[i][j] as f64 * x[i] * x[j]).sum::<f64>()).sum()
    }
}

/// The three components of the Hopf map as quadratic forms.
pub fn hopf_components() -> [QuadraticForm; 3] {
    [
        QuadraticForm([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]),
        QuadraticForm([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]]),
        QuadraticForm([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicReport {
    pub degree: u32,
    pub laplacians: [i64; 3],
    /// `k(k + n - 1)` for degree `k` on `S^n`.
    pub eigenvalue: i64,
    /// `lambda^2 p` from the parameter triple `(3, 2, 2)`.
    pub lambda_sq_times_p: i64,
    pub pass: bool,
}

pub fn harmonic_degree_check() -> HarmonicReport {
    let comps = hopf_components();
    let laplacians = [comps[0].laplacian(), comps[1].laplacian(), comps[2].laplacian()];
    let (n, k) = (3i64, 2i64);
    let eigenvalue = k * (k + n - 1);
    let params = validate_params(3, 2, 2).expect("valid triple");
    let lp = params.lambda_sq() * crate::exact::int(i64::from(params.p()));
    let lambda_sq_times_p = if lp.is_integer() { i64::try_from(lp.to_integer()).unwrap_or(-1) } else { -1 };
    let pass = comps.iter().all(QuadraticForm::is_symmetric)
        && laplacians.iter().all(|&l| l == 0)
        && lambda_sq_times_p == eigenvalue;
    HarmonicReport { degree: 2, laplacians, eigenvalue, lambda_sq_times_p, pass }
}

/// Uniform points on `S^3` from normalized Gaussian vectors.
pub fn random_sphere_points(count: usize, seed: u64) -> Vec<Point4> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let v: Point4 = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm > 1e-6 {
                break v.map(|a| a / norm);
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HopfCheck {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl HopfCheck {
    fn new(name: &str, max_deviation: f64, tolerance: f64) -> Self {
        Self { name: name.to_string(), max_deviation, tolerance, pass: max_deviation < tolerance }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HopfReport {
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<HopfCheck>,
    pub harmonic: HarmonicReport,
    pub los_root: f64,
    pub pass: bool,
}

impl HopfReport {
    pub fn check(&self, name: &str) -> Option<&HopfCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn max_over<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

/// Runs every check on `samples` random points drawn with `seed`.
pub fn verify_hopf(samples: usize, seed: u64) -> Result<HopfReport> {
    let points = random_sphere_points(samples.max(1), seed);
    let data = points.iter().map(singular_value_sample).collect::<Result<Vec<_>>>()?;
    let mut checks = Vec::new();

    checks.push(HopfCheck::new(
        "image on S^2",
        max_over(data.iter().map(|s| (s.fx.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0).abs())),
        1e-12,
    ));
    checks.push(HopfCheck::new(
        "singular values (2, 2, 0)",
        max_over(data.iter().map(|s| {
            let [a, b, c] = s.singular_values;
            (a - 2.0).abs().max((b - 2.0).abs()).max(c.abs())
        })),
        1e-9,
    ));
    checks.push(HopfCheck::new("Gram trace 8", max_over(data.iter().map(|s| (gram_trace(s) - 8.0).abs())), 1e-9));

    let theta = (2.0f64 / 3.0).acos();
    checks.push(HopfCheck::new(
        "angle condition at arccos(2/3)",
        max_over(points.iter().take(100).map(|x| los_condition_b(x, theta).map(f64::abs).unwrap_or(f64::INFINITY))),
        1e-9,
    ));
    let roots = los_roots(&points[0], 1000, 1e-12)?;
    let los_root = roots.first().copied().unwrap_or(f64::NAN);
    let root_dev = if roots.len() == 1 { (los_root - theta).abs() } else { f64::INFINITY };
    checks.push(HopfCheck::new("unique angle root", root_dev, 1e-10));

    let params = validate_params(3, 2, 2)?;
    let opts = OrbitOptions::default();
    let orbit = integrate_orbit(&params, seed_unstable(&params, DEFAULT_SEED_EPSILON), DEFAULT_T_MAX, &opts)?;
    let profile = extract_profile(&orbit, &params)?;
    let general = points.iter().take(20).map(|x| general_ode_residual(&profile, x)).collect::<Result<Vec<_>>>()?;
    checks.push(HopfCheck::new("general equation agrees with equal-singular-value form", max_over(general), 1e-8));

    let phi0 = params.phi0();
    let cone_dev = max_over(points.iter().take(20).flat_map(|x| {
        let sv = singular_value_sample(x).map(|s| s.singular_values).unwrap_or([f64::NAN; 3]);
        [0.01, 1.0, 100.0].map(|r| (r * general_ode_lhs(r, phi0 * r, phi0, 0.0, &sv)).abs())
    }));
    checks.push(HopfCheck::new("cone solves general equation", cone_dev, 1e-9));

    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let uniform = rand_distr::Uniform::new(0.1f64, 10.0).expect("valid range");
    let ode4_dev = max_over((0..100).map(|_| {
        let [r, rho, rho_r, rho_rr]: [f64; 4] = std::array::from_fn(|_| uniform.sample(&mut rng));
        let a = ode4_lhs(2, r, rho, rho_r, rho_rr);
        let b = ode1_lhs(r, rho, rho_r, rho_rr, 3.0, 2.0, 4.0);
        (a - b).abs() / a.abs().max(1.0)
    }));
    checks.push(HopfCheck::new("ODE4 (m = 2) equals equal-singular-value form", ode4_dev, 1e-12));

    let harmonic = harmonic_degree_check();
    let pass = harmonic.pass && checks.iter().all(|c| c.pass);
    Ok(HopfReport { seed, samples: points.len(), checks, harmonic, los_root, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poles_and_equator() {
        assert_eq!(hopf_map(&[1.0, 0.0, 0.0, 0.0]).unwrap(), [0.0, 0.0, 1.0]);
        let s = 0.5f64.sqrt();
        let y = hopf_map(&[s, 0.0, s, 0.0]).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-15 && y[1].abs() < 1e-15 && y[2].abs() < 1e-15);
    }

    #[test]
    fn rejects_off_sphere() {
        assert!(matches!(hopf_map(&[1.0, 1.0, 0.0, 0.0]), Err(LomseError::NotOnSphere { .. })));
    }

    #[test]
    fn tangent_frame_orthonormal() {
        let x = random_sphere_points(1, 3)[0];
        let xv = Vector4::from_column_slice(&x);
        let f = tangent_frame(&x);
        for i in 0..3 {
            assert!(f[i].dot(&xv).abs() < 1e-15);
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((f[i].dot(&f[j]) - e).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn angle_residual_values() {
        let sv = [2.0, 2.0, 0.0];
        assert!((los_residual(&sv, std::f64::consts::FRAC_PI_4) + 0.2).abs() < 1e-14);
        assert!(los_residual(&sv, 1e-8).abs() < 1e-14);
        assert!(los_residual(&sv, (2.0f64 / 3.0).acos()).abs() < 1e-14);
    }

    #[test]
    fn forms_match_map() {
        let comps = hopf_components();
        for x in random_sphere_points(10, 9) {
            let h = hopf_polynomial(&x);
            for i in 0..3 {
                assert!((comps[i].eval(&x) - h[i]).abs() < 1e-14);
            }
        }
        assert!(harmonic_degree_check().pass);
    }
}
