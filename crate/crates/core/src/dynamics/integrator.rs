//! Dormand-Prince 5(4) stepper for planar autonomous systems, with the
//! standard fourth-order continuous extension.

use crate::error::{LomseError, Result};

pub type State = [f64; 2];

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Continuous extension over one accepted step.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSegment {
    pub t0: f64,
    pub h: f64,
    rcont: [State; 5],
}

impl DenseSegment {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn contains(&self, t: f64) -> bool {
        let (lo, hi) = self.bounds();
        t >= lo && t <= hi
    }

    pub fn bounds(&self) -> (f64, f64) {
        if self.h >= 0.0 {
            (self.t0, self.t0 + self.h)
        } else {
            (self.t0 + self.h, self.t0)
        }
    }

    pub fn eval(&self, t: f64) -> State {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let r = &self.rcont;
        std::array::from_fn(|i| r[0][i] + s * (r[1][i] + s1 * (r[2][i] + s * (r[3][i] + s1 * r[4][i]))))
    }

    /// Time derivative of the interpolant.
    pub fn eval_derivative(&self, t: f64) -> State {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let r = &self.rcont;
        std::array::from_fn(|i| {
            let in3 = r[3][i] + s1 * r[4][i];
            let in2 = r[2][i] + s * in3;
            let in1 = r[1][i] + s1 * in2;
            let d_in2 = in3 - s * r[4][i];
            let d_in1 = -in2 + s1 * d_in2;
            (in1 + s * d_in1) / self.h
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub h_min: f64,
    pub h_max: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-10, h_min: 1e-14, h_max: 0.5 }
    }
}

/// An accepted step: the new state, its derivative and the interpolant.
#[derive(Debug, Clone)]
pub struct Accepted {
    pub t: f64,
    pub y: State,
    pub dy: State,
    pub segment: DenseSegment,
}

/// Adaptive stepper over an autonomous planar field. Time may run backward
/// (negative direction).
pub struct Stepper<F: Fn(&State) -> State> {
    field: F,
    ctrl: StepControl,
    t: f64,
    y: State,
    dy: State,
    h: f64,
    direction: f64,
    evals: usize,
}

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

impl<F: Fn(&State) -> State> Stepper<F> {
    pub fn new(field: F, t0: f64, y0: State, direction: f64, ctrl: StepControl) -> Self {
        let dy = field(&y0);
        let direction = if direction < 0.0 { -1.0 } else { 1.0 };
        let mut s = Self { field, ctrl, t: t0, y: y0, dy, h: 0.0, direction, evals: 1 };
        s.h = s.initial_step();
        s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> State {
        self.y
    }

    pub fn evals(&self) -> usize {
        self.evals
    }

    fn scale(&self, a: f64, b: f64) -> f64 {
        self.ctrl.abs_tol + self.ctrl.rel_tol * a.abs().max(b.abs())
    }

    fn initial_step(&mut self) -> f64 {
        let ctrl = self.ctrl;
        let norm = |v: &State, w: &State| -> f64 {
            let sc = |b: f64| ctrl.abs_tol + ctrl.rel_tol * b.abs();
            (v.iter().zip(w).map(|(a, b)| (a / sc(*b)).powi(2)).sum::<f64>() / 2.0).sqrt()
        };
        let d0 = norm(&self.y, &self.y);
        let d1 = norm(&self.dy, &self.y);
        let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h0 = h0.min(self.ctrl.h_max);
        let y1 = axpy(&self.y, self.direction * h0, &[(1.0, &self.dy)]);
        let f1 = (self.field)(&y1);
        self.evals += 1;
        let diff: State = std::array::from_fn(|i| f1[i] - self.dy[i]);
        let d2 = norm(&diff, &self.y) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(self.ctrl.h_max).max(self.ctrl.h_min)
    }

    /// Advances by one accepted step, never past `t_end`.
    pub fn step(&mut self, t_end: f64) -> Result<Accepted> {
        loop {
            let remaining = (t_end - self.t) * self.direction;
            let mut h = self.h.min(remaining).min(self.ctrl.h_max);
            if h < self.ctrl.h_min {
                if remaining <= self.ctrl.h_min {
                    h = remaining;
                } else {
                    return Err(LomseError::StepSizeUnderflow { t: self.t, h_min: self.ctrl.h_min });
                }
            }
            let hs = h * self.direction;
            let f = &self.field;
            let y = &self.y;
            let k1 = self.dy;
            let k2 = f(&axpy(y, hs, &[(A21, &k1)]));
            let k3 = f(&axpy(y, hs, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(&axpy(y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(&axpy(y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
            let k6 = f(&axpy(y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
            let y_new = axpy(y, hs, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = f(&y_new);
            self.evals += 6;

            if y_new.iter().chain(k7.iter()).any(|v| !v.is_finite()) {
                if h <= self.ctrl.h_min {
                    return Err(LomseError::NonFiniteState { t: self.t });
                }
                self.h = h * 0.25;
                continue;
            }

            let err_vec = axpy(&[0.0; 2], hs, &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)]);
            let err = (err_vec
                .iter()
                .enumerate()
                .map(|(i, e)| (e / self.scale(y[i], y_new[i])).powi(2))
                .sum::<f64>()
                / 2.0)
                .sqrt();

            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 {
                let ydiff: State = std::array::from_fn(|i| y_new[i] - y[i]);
                let bspl: State = std::array::from_fn(|i| hs * k1[i] - ydiff[i]);
                let rcont = [
                    *y,
                    ydiff,
                    bspl,
                    std::array::from_fn(|i| ydiff[i] - hs * k7[i] - bspl[i]),
                    std::array::from_fn(|i| {
                        hs * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
                    }),
                ];
                let segment = DenseSegment { t0: self.t, h: hs, rcont };
                self.t = if h == remaining { t_end } else { self.t + hs };
                self.y = y_new;
                self.dy = k7;
                self.h = (h * fac).min(self.ctrl.h_max);
                return Ok(Accepted { t: self.t, y: y_new, dy: k7, segment });
            }
            self.h = h * fac.min(1.0);
        }
    }
}
