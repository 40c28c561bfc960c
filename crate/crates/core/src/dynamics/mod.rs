//! The autonomous system in `t = log r` for `phi = rho/r`, `psi = phi_t`.

pub mod barrier;
pub mod field;
pub mod integrator;
pub mod orbit;
pub mod profile;

pub use barrier::{
    barrier_certificate_a3, barrier_certificate_a4, lemma_from_axis, lemma_triples, lemma_triples_extended,
    next_turning_point, turning_points, BarrierCertificate, BarrierCheck, CaseId, LemmaTriple, RequiredSign, TurningPoint,
};
pub use field::{f1, f2, finite_difference_jacobian, vector_field, FieldCoefficients, PhasePoint};
pub use orbit::{
    integrate_orbit, oscillation_record, seed_unstable, Event, EventKind, Orbit, OrbitOptions, OscillationRecord,
    Terminal, Tolerances, DEFAULT_SEED_EPSILON, DEFAULT_T_MAX,
};
pub use profile::{extract_profile, ode1_lhs, ConeProfile, FlatProfile, Profile, RadialGraph};
