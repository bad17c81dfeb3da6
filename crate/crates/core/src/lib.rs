//! The first Weyl algebra over the rationals and a decision procedure for
//! strict nilpotency.
//!
//! An element `L` is strictly nilpotent when `L = phi(Q(D))` for an
//! automorphism `phi` and a nonconstant polynomial `Q`. [`decide`] answers
//! the question exactly and returns a [`Certificate`] `(phi, Q)` that
//! [`verify_certificate`] can recheck independently. Certified operators
//! have bispectral partners ([`bispectral_partner`]) and a one-generator
//! centraliser ([`centralizer_generator`]).

pub mod automorphism;
pub mod descent;
pub mod error;
pub mod filtration;
pub mod poly;
pub mod weyl;

/// Exact coefficient field.
pub type Rational = num::BigRational;

pub use automorphism::{
    anti_involution_b0, anti_involution_b0_inverse, apply, ccr_preserved, invert, orbit_element, substitute, AutoWord,
    Generator,
};
pub use descent::{
    ad_nilpotency_test, bispectral_partner, ccr_check, ccr_to_generators, centralizer_generator, decide, descent_step,
    normalize_subleading, random_orbit_element, verify_certificate, AdTestResult, BispectralPartner, CcrOutcome,
    CertSide, Certificate, DescentStep, GenerationWitness, OrbitParams, Reason, StageRecord, StepOutcome, TraceEvent,
    Verdict, DEFAULT_AD_CAP,
};
pub use error::{Error, Result};
pub use filtration::{
    associated_poly, choose_weights, factor_form, weight_value, BiPoly, FactoredForm, NewtonData, NotOfForm, ShapeHint,
    Weight,
};
pub use poly::Poly;
pub use weyl::{ad_power, commutator, eval_poly, normalize_product, Monomial, OperatorProfile, Side, WeylElement};
