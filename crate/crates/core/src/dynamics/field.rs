//! The planar vector field for `phi = rho / r`, `psi = phi_t`, `t = log r`.

use crate::exact;
use crate::params::LomseParams;
use serde::Serialize;

/// A point of the phase plane at log-radius `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePoint {
    pub phi: f64,
    pub psi: f64,
    pub t: f64,
}

impl PhasePoint {
    pub fn new(phi: f64, psi: f64, t: f64) -> Self {
        Self { phi, psi, t }
    }

    pub fn is_finite(&self) -> bool {
        self.phi.is_finite() && self.psi.is_finite() && self.t.is_finite()
    }
}

/// Floating-point coefficients of the field, precomputed from the parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldCoefficients {
    pub n: f64,
    pub p: f64,
    pub lambda_sq: f64,
}

impl FieldCoefficients {
    pub fn new(params: &LomseParams) -> Self {
        Self {
            n: f64::from(params.n()),
            p: f64::from(params.p()),
            lambda_sq: exact::to_f64(params.lambda_sq()),
        }
    }

    /// `(lambda^2 - 1) p / (1 + lambda^2 phi^2) - (n - p)`
    #[inline]
    pub fn f1(&self, phi: f64) -> f64 {
        (self.lambda_sq - 1.0) * self.p / (1.0 + self.lambda_sq * phi * phi) - (self.n - self.p)
    }

    /// `n - p + p / (1 + lambda^2 phi^2)`
    #[inline]
    pub fn f2(&self, phi: f64) -> f64 {
        self.n - self.p + self.p / (1.0 + self.lambda_sq * phi * phi)
    }

    /// Derivative of `f1` in `phi`.
    #[inline]
    pub fn f1_prime(&self, phi: f64) -> f64 {
        let d = 1.0 + self.lambda_sq * phi * phi;
        -2.0 * (self.lambda_sq - 1.0) * self.p * self.lambda_sq * phi / (d * d)
    }

    #[inline]
    pub fn eval(&self, phi: f64, psi: f64) -> [f64; 2] {
        let s = phi + psi;
        [psi, -psi - (self.f2(phi) * psi - self.f1(phi) * phi) * (1.0 + s * s)]
    }

    /// Conjugate of the field by the reflection `(phi, psi) -> (phi, -psi)`.
    #[inline]
    pub fn eval_reflected(&self, phi: f64, psi: f64) -> [f64; 2] {
        let s = phi - psi;
        [-psi, -psi - (self.f2(phi) * psi + self.f1(phi) * phi) * (1.0 + s * s)]
    }
}

pub fn vector_field(point: &PhasePoint, params: &LomseParams) -> (f64, f64) {
    let [x1, x2] = FieldCoefficients::new(params).eval(point.phi, point.psi);
    (x1, x2)
}

pub fn f1(phi: f64, params: &LomseParams) -> f64 {
    FieldCoefficients::new(params).f1(phi)
}

pub fn f2(phi: f64, params: &LomseParams) -> f64 {
    FieldCoefficients::new(params).f2(phi)
}

/// Central-difference Jacobian of the field at `(phi, psi)`.
pub fn finite_difference_jacobian(params: &LomseParams, phi: f64, psi: f64, step: f64) -> [[f64; 2]; 2] {
    let c = FieldCoefficients::new(params);
    let dphi_p = c.eval(phi + step, psi);
    let dphi_m = c.eval(phi - step, psi);
    let dpsi_p = c.eval(phi, psi + step);
    let dpsi_m = c.eval(phi, psi - step);
    let col = |a: [f64; 2], b: [f64; 2], i: usize| (a[i] - b[i]) / (2.0 * step);
    [
        [col(dphi_p, dphi_m, 0), col(dpsi_p, dpsi_m, 0)],
        [col(dphi_p, dphi_m, 1), col(dpsi_p, dpsi_m, 1)],
    ]
}
