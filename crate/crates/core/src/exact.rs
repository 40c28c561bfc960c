//! Exact rational arithmetic helpers and a small dense polynomial type over Q.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serializer;
use std::ops::{Add, Mul, Neg, Sub};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn to_f64(q: &Rational) -> f64 {
    // BigRational::to_f64 rounds correctly even for huge numerators/denominators.
    q.to_f64().unwrap_or(f64::NAN)
}

/// Formats as `num/den`, always with an explicit denominator (`0/1`, `3/1`).
pub fn fmt_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn serialize_rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(q))
}

pub fn serialize_opt_rational<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&fmt_rational(q)),
        None => s.serialize_none(),
    }
}

pub fn sign(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Dense univariate polynomial with rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        Self { coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `a + b s`
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::new(vec![a, b])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs[self.degree()].clone()
    }

    pub fn eval(&self, s: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * s + c)
    }

    pub fn eval_f64(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * s + to_f64(c))
    }

    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::constant(Rational::zero());
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    /// `(P(s) - P(0)) / s`
    pub fn deflate_at_zero(&self) -> Self {
        if self.degree() == 0 {
            return Self::constant(Rational::zero());
        }
        Self::new(self.coeffs[1..].to_vec())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        self + &(-rhs)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }
}

pub fn one() -> Rational {
    Rational::one()
}
