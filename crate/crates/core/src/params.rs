//! Parameter triples `(n, p, k)` of equal-singular-value Lawson-Osserman maps,
//! their closed-form scalars and the linear stability data of the phase-plane
//! equilibria.

use crate::error::{LomseError, Result};
use crate::exact::{self, int, rat, serialize_rational, Rational};
use nalgebra::Matrix2;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

/// Which Hopf-type fibration the rank-`p` submersion factors through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    /// `S^{2l+1} -> CP^l`, `(n, p) = (2l+1, 2l)`.
    ComplexProjective(u32),
    /// `S^{4l+3} -> HP^l`, `(n, p) = (4l+3, 4l)`.
    QuaternionicProjective(u32),
    /// `S^15 -> S^8`.
    OctonionicLine,
    /// Only produced by relaxed validation when `(n, p)` fits no family.
    Unclassified,
}

impl Family {
    pub fn classify(n: i64, p: i64) -> Option<Family> {
        if n <= 0 || p <= 0 {
            return None;
        }
        if (n, p) == (15, 8) {
            return Some(Family::OctonionicLine);
        }
        if p % 2 == 0 && n == p + 1 {
            return Some(Family::ComplexProjective((p / 2) as u32));
        }
        if p % 4 == 0 && n == p + 3 {
            return Some(Family::QuaternionicProjective((p / 4) as u32));
        }
        None
    }
}

/// Character of the equilibrium `(phi0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stability {
    /// Stable node: both eigenvalues real and negative.
    TypeI,
    /// Stable spiral: complex-conjugate eigenvalues with negative real part.
    TypeII,
}

/// A validated `(n, p, k)` triple with every derived scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct LomseParams {
    n: u32,
    p: u32,
    k: u32,
    family: Family,
    relaxed: bool,
    lambda_sq: Rational,
    phi0_sq: Rational,
    cos_theta_sq: Rational,
    discriminant: Rational,
    lambda: f64,
    theta: f64,
    phi0: f64,
    stability: Stability,
}

/// Checks a triple against the existence classification and builds the
/// derived data. Family is checked before degree.
pub fn validate_params(n: i64, p: i64, k: i64) -> Result<LomseParams> {
    let family = Family::classify(n, p).ok_or(LomseError::InvalidFamily { n, p })?;
    if k < 2 || k % 2 != 0 {
        return Err(LomseError::InvalidDegree { k });
    }
    Ok(LomseParams::build(n as u32, p as u32, k as u32, family, false))
}

/// Exploratory validation: accepts any `0 < p < n` and `k >= 2`, which is all
/// the phase-plane dynamics needs (`lambda > sqrt(n/p)` then holds). Triples
/// accepted here need not correspond to an existing map.
pub fn validate_params_relaxed(n: i64, p: i64, k: i64) -> Result<LomseParams> {
    if p <= 0 || n <= p || n > u32::MAX as i64 {
        return Err(LomseError::InvalidFamily { n, p });
    }
    if k < 2 || k > u32::MAX as i64 {
        return Err(LomseError::InvalidDegree { k });
    }
    let family = Family::classify(n, p).unwrap_or(Family::Unclassified);
    let strict = family != Family::Unclassified && k % 2 == 0;
    Ok(LomseParams::build(n as u32, p as u32, k as u32, family, !strict))
}

/// Stability read off the published lists: Type II exactly for
/// `(3, 2, k >= 4)` and `(5, 4, k >= 6)`.
pub fn listed_stability(n: u32, p: u32, k: u32) -> Stability {
    match (n, p) {
        (3, 2) if k >= 4 => Stability::TypeII,
        (5, 4) if k >= 6 => Stability::TypeII,
        _ => Stability::TypeI,
    }
}

impl LomseParams {
    fn build(n: u32, p: u32, k: u32, family: Family, relaxed: bool) -> Self {
        let (ni, pi) = (i64::from(n), i64::from(p));
        let kk = harmonic_eigenvalue(n, k);
        let lambda_sq = Rational::new(kk.clone(), BigInt::from(pi));
        // phi0^2 = (p - n / lambda^2) / (n - p)
        let phi0_sq = (int(pi) - int(ni) / &lambda_sq) / int(ni - pi);
        // cos^2 theta = (1 - p/n) / (1 - p/(k(k+n-1)))
        let kk_q = Rational::from_integer(kk.clone());
        let cos_theta_sq = (int(1) - rat(pi, ni)) / (int(1) - int(pi) / &kk_q);
        // b^2 + 4a = n^2 - 6n + 1 + 8 n^2 / (k(k+n-1))
        let discriminant = int(ni * ni - 6 * ni + 1) + int(8 * ni * ni) / &kk_q;

        let stability = if relaxed {
            if exact::sign(&discriminant) < 0 {
                Stability::TypeII
            } else {
                Stability::TypeI
            }
        } else {
            listed_stability(n, p, k)
        };

        let lambda = exact::to_f64(&lambda_sq).sqrt();
        let theta = exact::to_f64(&cos_theta_sq).sqrt().acos();
        let phi0 = exact::to_f64(&phi0_sq).sqrt();

        Self {
            n,
            p,
            k,
            family,
            relaxed,
            lambda_sq,
            phi0_sq,
            cos_theta_sq,
            discriminant,
            lambda,
            theta,
            phi0,
            stability,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// True when the triple was accepted only by relaxed validation.
    pub fn is_relaxed(&self) -> bool {
        self.relaxed
    }

    /// `k(k+n-1)`, the Laplace eigenvalue of degree-`k` spherical harmonics on `S^n`.
    pub fn harmonic_eigenvalue(&self) -> BigInt {
        harmonic_eigenvalue(self.n, self.k)
    }

    pub fn lambda_sq(&self) -> &Rational {
        &self.lambda_sq
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn phi0_sq(&self) -> &Rational {
        &self.phi0_sq
    }

    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    pub fn cos_theta_sq(&self) -> &Rational {
        &self.cos_theta_sq
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn discriminant(&self) -> &Rational {
        &self.discriminant
    }

    pub fn stability(&self) -> Stability {
        self.stability
    }

    pub fn is_type_ii(&self) -> bool {
        self.stability == Stability::TypeII
    }

    /// `sqrt((3p - n - 1) / (3(n - p)))`: below this amplitude the no-limit-cycle
    /// lemma for spiral orbits does not apply.
    pub fn lemma_threshold(&self) -> f64 {
        let (n, p) = (f64::from(self.n), f64::from(self.p));
        ((3.0 * p - n - 1.0) / (3.0 * (n - p))).max(0.0).sqrt()
    }
}

fn harmonic_eigenvalue(n: u32, k: u32) -> BigInt {
    let k = BigInt::from(k);
    &k * (&k + BigInt::from(n) - 1)
}

/// The nonzero singular value `lambda = sqrt(k(k+n-1)/p)`.
pub fn singular_value(params: &LomseParams) -> f64 {
    params.lambda()
}

/// The cone angle `theta` in radians.
pub fn cone_angle(params: &LomseParams) -> f64 {
    params.theta()
}

/// The cone slope `phi0 = tan(theta)`.
pub fn slope_phi0(params: &LomseParams) -> f64 {
    params.phi0()
}

/// Linearizations of the phase-plane field at the saddle `(0, 0)` and at the
/// cone equilibrium `(phi0, 0)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralData {
    /// Linearization at the origin.
    pub a_matrix: [[f64; 2]; 2],
    pub mu1: f64,
    pub mu2: f64,
    pub v1: [f64; 2],
    pub v2: [f64; 2],
    /// Linearization at `(phi0, 0)`.
    pub b_matrix: [[f64; 2]; 2],
    #[serde(serialize_with = "serialize_rational")]
    pub a: Rational,
    pub b: i64,
    pub mu3: ComplexValue,
    pub mu4: ComplexValue,
    #[serde(serialize_with = "serialize_rational")]
    pub discriminant: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexValue> for Complex64 {
    fn from(z: ComplexValue) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl SpectralData {
    pub fn a(&self) -> Matrix2<f64> {
        to_matrix(&self.a_matrix)
    }

    pub fn b(&self) -> Matrix2<f64> {
        to_matrix(&self.b_matrix)
    }

    /// Both eigenvalues at the cone equilibrium have negative real part.
    pub fn cone_equilibrium_contracting(&self) -> bool {
        self.mu3.re < 0.0 && self.mu4.re < 0.0
    }
}

fn to_matrix(m: &[[f64; 2]; 2]) -> Matrix2<f64> {
    Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1])
}

/// `a = 2n(n/(k(k+n-1)) - 1)`, lower-left entry of the linearization at `(phi0, 0)`.
pub fn cone_lower_left(params: &LomseParams) -> Rational {
    let n = int(i64::from(params.n()));
    let kk = Rational::from_integer(params.harmonic_eigenvalue());
    int(2) * &n * (&n / kk - int(1))
}

pub fn spectra(params: &LomseParams) -> SpectralData {
    let n = i64::from(params.n());
    let k = i64::from(params.k());
    let kk = exact::to_f64(&Rational::from_integer(params.harmonic_eigenvalue()));
    let a = cone_lower_left(params);
    let b = -n - 1;
    let disc = params.discriminant().clone();

    let mu1 = (k - 1) as f64;
    let mu2 = (-n - k) as f64;

    let disc_f = exact::to_f64(&disc);
    let half_b = b as f64 / 2.0;
    let (mu3, mu4) = if disc.is_zero() || disc_f >= 0.0 {
        let r = disc_f.max(0.0).sqrt() / 2.0;
        (Complex64::new(half_b + r, 0.0), Complex64::new(half_b - r, 0.0))
    } else {
        let i = (-disc_f).sqrt() / 2.0;
        (Complex64::new(half_b, i), Complex64::new(half_b, -i))
    };

    SpectralData {
        a_matrix: [[0.0, 1.0], [kk - n as f64, (-n - 1) as f64]],
        mu1,
        mu2,
        v1: [1.0, mu1],
        v2: [1.0, mu2],
        b_matrix: [[0.0, 1.0], [exact::to_f64(&a), b as f64]],
        a,
        b,
        mu3: mu3.into(),
        mu4: mu4.into(),
        discriminant: disc,
    }
}

impl Serialize for LomseParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("LomseParams", 13)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("family", &self.family)?;
        st.serialize_field("relaxed", &self.relaxed)?;
        st.serialize_field("lambda", &self.lambda)?;
        st.serialize_field("lambda_sq", &exact::fmt_rational(&self.lambda_sq))?;
        st.serialize_field("theta", &self.theta)?;
        st.serialize_field("cos_theta_sq", &exact::fmt_rational(&self.cos_theta_sq))?;
        st.serialize_field("phi0", &self.phi0)?;
        st.serialize_field("phi0_sq", &exact::fmt_rational(&self.phi0_sq))?;
        st.serialize_field("discriminant", &exact::fmt_rational(&self.discriminant))?;
        st.serialize_field("stability", &self.stability)?;
        st.end()
    }
}
