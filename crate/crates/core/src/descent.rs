//! Strict nilpotency decision by Newton-polygon descent.
//!
//! An operator `L = D^N + V_{N-1} D^{N-1} + ...` is first normalised so that
//! `V_{N-1} = 0`. Each descent stage then
//!
//! 1. picks the weight `(rho, sigma)` of the upper Newton edge through `(0, N)`,
//! 2. requires the associated polynomial to be `(Y^r - lambda X)^k`,
//! 3. applies `ShiftX(S)` with `S = D^(r+1) / (lambda (r+1)) + S0`, which sends
//!    `L` to `c x^k + (terms of lower x-degree)` with the `x^(k-1)` row killed,
//! 4. Fourier-transforms back to a monic operator of order `k = N / r`.
//!
//! The iteration stops once the operator is free of `x` or of `D`. A strictly
//! nilpotent operator always passes step 2; the other shapes of the
//! associated polynomial are the rejection reasons. Every positive verdict
//! carries a [`Certificate`] that is re-verified before it is returned.

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automorphism::{orbit_element, AutoWord, Generator};
use crate::error::{Error, Result};
use crate::filtration::{associated_poly, choose_weights, factor_form, BiPoly, FactoredForm, NotOfForm, Weight};
use crate::poly::Poly;
use crate::weyl::{commutator, eval_poly, Side, WeylElement};
use crate::Rational;

/// Which generator the certificate polynomial is evaluated at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CertSide {
    X,
    D,
}

/// Witness that `apply(word, Q(g)) == L` with `g` the generator named by
/// `side`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub word: AutoWord,
    pub gen_poly: Poly,
    pub side: CertSide,
}

impl Certificate {
    /// `Q(x)` or `Q(D)`.
    pub fn base_element(&self) -> WeylElement {
        match self.side {
            CertSide::X => WeylElement::poly_in_x(Side::X, &self.gen_poly),
            CertSide::D => WeylElement::poly_in_d(Side::X, &self.gen_poly),
        }
    }

    pub fn reconstruct(&self) -> WeylElement {
        self.word.apply(&self.base_element())
    }

    /// Equivalent certificate on the `D` side, using `Q(x) = Fourier(Q(-D))`.
    pub fn to_d_side(&self) -> Certificate {
        match self.side {
            CertSide::D => self.clone(),
            CertSide::X => Certificate {
                word: AutoWord::new(vec![Generator::Fourier]).compose(&self.word).reduced(),
                gen_poly: self.gen_poly.reflect(),
                side: CertSide::D,
            },
        }
    }
}

/// One descent stage, for the audit trail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub stage: usize,
    pub order: u32,
    pub weight: Weight,
    /// Edge point `(k0, m0)` with the largest `x`-exponent.
    pub anchor: (u32, u32),
    pub value: u64,
    pub assoc: BiPoly,
    pub factored: Option<FactoredForm>,
    /// Generators applied in this stage, in order.
    pub generators: Vec<Generator>,
    pub new_order: Option<u32>,
    /// Soundness of a rejection at this stage rests on strict nilpotency
    /// being invariant under the automorphisms applied in earlier stages.
    pub transported: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    /// The input was Fourier-transformed because its leading coefficient in
    /// `D` is not constant.
    FourierSwap,
    /// Divided by the constant leading coefficient.
    Scaled {
        leading: Rational,
        order: u32,
    },
    /// `ShiftD` killing the `D^(N-1)` coefficient.
    Normalized {
        generator: Generator,
    },
    Stage(StageRecord),
    /// Terminal iterate reached: a polynomial in `x` or in `D`.
    Terminal {
        side: CertSide,
        poly: Poly,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    NonconstantLeading,
    AssocNotFactored(NotOfForm),
    PositiveYMultiplicity(FactoredForm),
}

impl Reason {
    pub fn code(&self) -> &'static str {
        match self {
            Reason::NonconstantLeading => "NonconstantLeading",
            Reason::AssocNotFactored(_) => "AssocNotFactored",
            Reason::PositiveYMultiplicity(_) => "PositiveYMultiplicity",
        }
    }
}

impl std::fmt::Display for Reason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Reason::NonconstantLeading => f.write_str("NonconstantLeading"),
            Reason::AssocNotFactored(d) => write!(f, "AssocNotFactored: {d}"),
            Reason::PositiveYMultiplicity(form) => write!(f, "PositiveYMultiplicity: {form}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    StrictlyNilpotent { certificate: Certificate, trace: Vec<TraceEvent> },
    NotStrictlyNilpotent { reason: Reason, stage: usize, trace: Vec<TraceEvent> },
    TriviallyConstant,
}

impl Verdict {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::StrictlyNilpotent { certificate, .. } => Some(certificate),
            _ => None,
        }
    }

    pub fn trace(&self) -> &[TraceEvent] {
        match self {
            Verdict::StrictlyNilpotent { trace, .. } | Verdict::NotStrictlyNilpotent { trace, .. } => trace,
            Verdict::TriviallyConstant => &[],
        }
    }

    pub fn stages(&self) -> impl Iterator<Item = &StageRecord> {
        self.trace().iter().filter_map(|e| match e {
            TraceEvent::Stage(s) => Some(s),
            _ => None,
        })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::StrictlyNilpotent { .. } => "StrictlyNilpotent",
            Verdict::NotStrictlyNilpotent { .. } => "NotStrictlyNilpotent",
            Verdict::TriviallyConstant => "TriviallyConstant",
        }
    }
}

/// Result of iterating `ad_L` on `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdTestResult {
    /// `ad_L^m(H) == 0` and `ad_L^(m-1)(H) != 0`. `m == 0` only for `H == 0`.
    NilpotentAt(u32),
    /// Some iterate `G != 0` satisfies `ad_L(G) == c G`, so no power vanishes.
    EigenObstruction(Rational),
    /// Cap reached; `last_weight` is the total degree of the last iterate.
    BoundExhausted { cap: u32, last_weight: i64 },
}

pub const DEFAULT_AD_CAP: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BispectralPartner {
    /// `Lambda(z, Dz)`.
    pub lambda_op: WeylElement,
    /// `f(z)` with `L psi = f(z) psi`.
    pub f_poly: Poly,
    /// `theta(x)` with `Lambda psi = theta(x) psi`; always `x`.
    pub theta: WeylElement,
}

/// Constructive proof that a CCR pair generates `A_1`:
/// `L = word(a D + b)` and `P = word(x / a + R(D))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationWitness {
    pub word: AutoWord,
    pub a: Rational,
    pub b: Rational,
    pub r_poly: Poly,
}

impl GenerationWitness {
    pub fn images(&self) -> (WeylElement, WeylElement) {
        let d = WeylElement::d(Side::X);
        let x = WeylElement::x(Side::X);
        let l = &d.scale(&self.a) + &WeylElement::constant(Side::X, self.b.clone());
        let p = &x.scale(&self.a.recip()) + &WeylElement::poly_in_d(Side::X, &self.r_poly);
        (self.word.apply(&l), self.word.apply(&p))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CcrOutcome {
    Witness(GenerationWitness),
    /// `L` was not certified, which would contradict the Dixmier conjecture.
    CounterexampleCandidate(Verdict),
}

/// Outcome of one [`descent_step`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Advanced(DescentStep),
    Rejected { reason: Reason, record: StageRecord },
}

/// `apply(fragment, L) == scale * next`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentStep {
    pub next: WeylElement,
    pub fragment: AutoWord,
    pub scale: Rational,
    pub record: StageRecord,
}

fn constant_leading(l: &WeylElement) -> Option<Rational> {
    let lead = l.profile().leading;
    lead.is_constant().then(|| lead.coeff(0))
}

/// Applies `ShiftD(R)` with `R' = V_{N-1} / (N c)`, where `c` is the constant
/// leading coefficient, so the image has no `D^(N-1)` term.
pub fn normalize_subleading(l: &WeylElement) -> Result<(WeylElement, Generator)> {
    let prof = l.profile();
    if prof.order < 1 {
        return Err(Error::Precondition("normalisation needs order >= 1".into()));
    }
    if !prof.leading.is_constant() {
        return Err(Error::NotNormalizable);
    }
    let n = Rational::from_integer(prof.order.into());
    let r_prime = prof.subleading.scale(&(n * prof.leading.coeff(0)).recip());
    let gen = Generator::shift_d(r_prime.antiderivative());
    let image = gen.apply(l);
    if !image.profile().subleading.is_zero() {
        return Err(Error::InvariantViolation(format!("subleading coefficient survives normalisation of {l}")));
    }
    Ok((image, gen))
}

/// One stage of the descent on a monic, normalised operator that depends
/// on `x`.
pub fn descent_step(l: &WeylElement) -> Result<StepOutcome> {
    descent_stage(l, 1)
}

fn descent_stage(l: &WeylElement, stage: usize) -> Result<StepOutcome> {
    let prof = l.profile();
    if prof.order < 1 || prof.leading != Poly::one() || !prof.subleading.is_zero() || l.is_free_of_x() {
        return Err(Error::Precondition(format!(
            "descent step needs a monic operator with vanishing subleading term that depends on x, got {l}"
        )));
    }
    let order = prof.order as u32;
    let (weight, anchor) = choose_weights(l)?;
    let nd = associated_poly(l, weight)?;
    let mut record = StageRecord {
        stage,
        order,
        weight,
        anchor,
        value: nd.value,
        assoc: nd.assoc.clone(),
        factored: None,
        generators: Vec::new(),
        new_order: None,
        transported: stage > 1,
    };
    let form = match factor_form(&nd, order) {
        Ok(form) => form,
        Err(NotOfForm::PositiveYMultiplicity { form }) => {
            return Ok(StepOutcome::Rejected { reason: Reason::PositiveYMultiplicity(form), record })
        }
        Err(diag) => return Ok(StepOutcome::Rejected { reason: Reason::AssocNotFactored(diag), record }),
    };
    record.factored = Some(form.clone());
    if form.r < 2 {
        // (Y - lambda X)^N has X Y^(N-1) coefficient -N lambda, which the
        // normalisation has already removed.
        return Err(Error::InvariantViolation(format!("r = {} < 2 after normalisation of {l}", form.r)));
    }
    let (r, k) = (form.r, form.k);

    // x -> x + D^r / lambda sends (Y^r - lambda X)^k to (-lambda X)^k.
    let s_main =
        Poly::monomial((form.lambda.clone() * Rational::from_integer((r + 1).into())).recip(), (r + 1) as usize);
    let l1 = Generator::shift_x(s_main.clone()).apply(l);
    let lead = l1.x_coefficient(k);
    let expected = (-form.lambda.clone()).pow(k as i32);
    if l1.x_degree() != k as i64 || lead != Poly::constant(expected.clone()) {
        return Err(Error::InvariantViolation(format!(
            "after ShiftX the operator is not {expected}*x^{k} + lower: {l1}"
        )));
    }

    // Kill the x^(k-1) row; its D-degree is below r by weight.
    let row = l1.x_coefficient(k - 1);
    if row.degree().is_some_and(|deg| deg >= r as usize) {
        return Err(Error::InvariantViolation(format!(
            "x^{} coefficient {} has degree >= r = {r}",
            k - 1,
            row.display_in("D")
        )));
    }
    let s_fix = row.scale(&-(expected.clone() * Rational::from_integer(k.into())).recip()).antiderivative();
    let l2 = Generator::shift_x(s_fix.clone()).apply(&l1);
    if k >= 1 && !l2.x_coefficient(k - 1).is_zero() {
        return Err(Error::InvariantViolation(format!("x^{} row survives: {l2}", k - 1)));
    }
    let shift = Generator::shift_x(&s_main + &s_fix);
    record.generators.push(shift.clone());
    record.new_order = Some(k);
    let mut fragment = AutoWord::new(vec![shift]);

    if l2.is_free_of_d() {
        return Ok(StepOutcome::Advanced(DescentStep { next: l2, fragment, scale: Rational::one(), record }));
    }

    // Inverse Fourier: c x^k -> c (-1)^k D^k.
    let inv_fourier = AutoWord::new(vec![Generator::Fourier; 3]);
    let l3 = inv_fourier.apply(&l2);
    let c = if k % 2 == 0 { expected } else { -expected };
    let monic = l3.scale(&c.recip());
    record.generators.extend(inv_fourier.gens().iter().cloned());
    fragment.extend(&inv_fourier);
    let (next, norm) = normalize_subleading(&monic)?;
    if !norm.is_identity() {
        record.generators.push(norm.clone());
        fragment.push(norm);
    }
    if next.order() != k as i64 {
        return Err(Error::InvariantViolation(format!("order after stage is {}, expected {k}", next.order())));
    }
    Ok(StepOutcome::Advanced(DescentStep { next, fragment, scale: c, record }))
}

/// Decides strict nilpotency of `l`, producing a verified certificate on
/// success.
pub fn decide(l: &WeylElement) -> Result<Verdict> {
    if l.side() != Side::X {
        return Err(Error::WrongSide { expected: Side::X, found: l.side() });
    }
    if l.is_constant() {
        return Ok(Verdict::TriviallyConstant);
    }
    if let Some(p) = l.as_poly_in_x() {
        let certificate = Certificate { word: AutoWord::identity(), gen_poly: p, side: CertSide::X };
        return Ok(Verdict::StrictlyNilpotent { certificate, trace: Vec::new() });
    }
    if let Some(p) = l.as_poly_in_d() {
        let certificate = Certificate { word: AutoWord::identity(), gen_poly: p, side: CertSide::D };
        return Ok(Verdict::StrictlyNilpotent { certificate, trace: Vec::new() });
    }

    let mut trace = Vec::new();
    let mut word = AutoWord::identity();
    let mut target = l.clone();
    if constant_leading(&target).is_none() {
        let inv_fourier = AutoWord::new(vec![Generator::Fourier; 3]);
        let swapped = inv_fourier.apply(&target);
        if constant_leading(&swapped).is_none() {
            return Ok(Verdict::NotStrictlyNilpotent { reason: Reason::NonconstantLeading, stage: 0, trace });
        }
        trace.push(TraceEvent::FourierSwap);
        word.extend(&inv_fourier);
        target = swapped;
    }
    let mut scale = constant_leading(&target).expect("checked above");
    trace.push(TraceEvent::Scaled { leading: scale.clone(), order: target.order() as u32 });
    let (mut cur, norm) = normalize_subleading(&target.scale(&scale.recip()))?;
    if !norm.is_identity() {
        trace.push(TraceEvent::Normalized { generator: norm.clone() });
        word.push(norm);
    }

    // Orders at least halve per stage, so this bound is never reached.
    let max_stages = 2 + 64 - (cur.order().max(1) as u64).leading_zeros() as usize;
    let mut stage = 0;
    let certificate = loop {
        if let Some(p) = cur.as_poly_in_d() {
            let q = p.scale(&scale);
            trace.push(TraceEvent::Terminal { side: CertSide::D, poly: q.clone() });
            break Certificate { word: word.invert(), gen_poly: q, side: CertSide::D };
        }
        if let Some(p) = cur.as_poly_in_x() {
            let q = p.scale(&scale);
            trace.push(TraceEvent::Terminal { side: CertSide::X, poly: q.clone() });
            break Certificate { word: word.invert(), gen_poly: q, side: CertSide::X }.to_d_side();
        }
        stage += 1;
        if stage > max_stages {
            return Err(Error::InvariantViolation(format!("descent did not terminate on {l}")));
        }
        match descent_stage(&cur, stage)? {
            StepOutcome::Rejected { reason, record } => {
                trace.push(TraceEvent::Stage(record));
                return Ok(Verdict::NotStrictlyNilpotent { reason, stage, trace });
            }
            StepOutcome::Advanced(step) => {
                trace.push(TraceEvent::Stage(step.record));
                word.extend(&step.fragment);
                scale *= step.scale;
                cur = step.next;
            }
        }
    };
    if !verify_certificate(l, &certificate) {
        return Err(Error::InvariantViolation(format!("certificate for {l} does not verify")));
    }
    Ok(Verdict::StrictlyNilpotent { certificate, trace })
}

/// `apply(cert.word, Q(g)) == l`, with `Q` nonconstant.
pub fn verify_certificate(l: &WeylElement, cert: &Certificate) -> bool {
    l.side() == Side::X && !cert.gen_poly.is_constant() && cert.reconstruct() == *l
}

/// Iterates `ad_L` on `H` until zero, a scalar eigen-relation, or `cap`
/// commutators.
pub fn ad_nilpotency_test(l: &WeylElement, h: &WeylElement, cap: u32) -> Result<AdTestResult> {
    if h.is_zero() {
        return Ok(AdTestResult::NilpotentAt(0));
    }
    let mut cur = h.clone();
    for s in 1..=cap {
        let next = commutator(l, &cur)?;
        if next.is_zero() {
            return Ok(AdTestResult::NilpotentAt(s));
        }
        if let Some(c) = scalar_ratio(&next, &cur) {
            return Ok(AdTestResult::EigenObstruction(c));
        }
        cur = next;
    }
    Ok(AdTestResult::BoundExhausted { cap, last_weight: cur.total_degree() })
}

/// `Some(c)` when `a == c * b`.
fn scalar_ratio(a: &WeylElement, b: &WeylElement) -> Option<Rational> {
    if a.num_terms() != b.num_terms() {
        return None;
    }
    let mut ratio: Option<Rational> = None;
    for ((ma, ca), (mb, cb)) in a.terms().zip(b.terms()) {
        if ma != mb {
            return None;
        }
        let r = ca / cb;
        match &ratio {
            None => ratio = Some(r),
            Some(prev) if *prev != r => return None,
            Some(_) => {}
        }
    }
    ratio
}

fn certified(l: &WeylElement) -> Result<Certificate> {
    match decide(l)? {
        Verdict::StrictlyNilpotent { certificate, .. } => Ok(certificate),
        other => Err(Error::NotCertified(Box::new(other))),
    }
}

/// Partner `Lambda = b0(phi^-1(x))` with `f = Q` and `theta = x`, for
/// `L = Q(phi(D))`.
pub fn bispectral_partner(l: &WeylElement) -> Result<BispectralPartner> {
    let cert = certified(l)?;
    if cert.side == CertSide::X {
        return Err(Error::Unsupported(
            "polynomials in x are bispectral only with distributional wave functions".into(),
        ));
    }
    let preimage = cert.word.invert().apply(&WeylElement::x(Side::X));
    let lambda_op = crate::automorphism::anti_involution_b0(&preimage)?;
    Ok(BispectralPartner { lambda_op, f_poly: cert.gen_poly, theta: WeylElement::x(Side::X) })
}

/// Generator `L' = phi(D)` of the centraliser of `L = Q(phi(D))`.
pub fn centralizer_generator(l: &WeylElement) -> Result<WeylElement> {
    let cert = certified(l)?.to_d_side();
    let gen = cert.word.apply(&WeylElement::d(Side::X));
    if !commutator(l, &gen)?.is_zero() || eval_poly(&cert.gen_poly, &gen) != *l {
        return Err(Error::InvariantViolation(format!("centraliser generator {gen} does not generate {l}")));
    }
    Ok(gen)
}

/// `[L, P] == 1`.
pub fn ccr_check(l: &WeylElement, p: &WeylElement) -> bool {
    commutator(l, p).is_ok_and(|c| c == WeylElement::one(l.side()))
}

/// For a CCR pair, either a constructive proof that `(L, P)` generate `A_1`
/// or a flagged counterexample candidate.
pub fn ccr_to_generators(l: &WeylElement, p: &WeylElement) -> Result<CcrOutcome> {
    if !ccr_check(l, p) {
        return Err(Error::Precondition("[L, P] != 1".into()));
    }
    let verdict = decide(l)?;
    let Verdict::StrictlyNilpotent { certificate, .. } = &verdict else {
        return Ok(CcrOutcome::CounterexampleCandidate(verdict));
    };
    let cert = certificate.to_d_side();
    if cert.gen_poly.degree() != Some(1) {
        return Err(Error::InvariantViolation(format!(
            "CCR partner certified with Q = {} of degree != 1",
            cert.gen_poly
        )));
    }
    let (b, a) = (cert.gen_poly.coeff(0), cert.gen_poly.coeff(1));
    let m = cert.word.invert().apply(p);
    let residual = &m - &WeylElement::x(Side::X).scale(&a.recip());
    let Some(r_poly) = residual.as_poly_in_d() else {
        return Err(Error::InvariantViolation(format!("preimage of P is not x/a + R(D): {m}")));
    };
    let witness = GenerationWitness { word: cert.word, a, b, r_poly };
    let (wl, wp) = witness.images();
    if wl != *l || wp != *p {
        return Err(Error::InvariantViolation("generation witness does not reproduce the pair".into()));
    }
    Ok(CcrOutcome::Witness(witness))
}

/// Parameters for [`random_orbit_element`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitParams {
    /// Number of generators, `0..=MAX_WORD_LEN`.
    pub word_len: usize,
    /// Maximal degree of shift polynomials, `3..=MAX_SHIFT_DEG`.
    pub max_deg: u32,
    /// Maximal degree of `Q`, `1..=MAX_Q_DEG`.
    pub max_q_deg: u32,
    /// Allow the last generator to be `Fourier`.
    pub trailing_fourier: bool,
    /// Resample until the element has at most this order.
    pub max_order: Option<u32>,
}

impl Default for OrbitParams {
    fn default() -> Self {
        OrbitParams { word_len: 2, max_deg: 4, max_q_deg: 3, trailing_fourier: true, max_order: Some(16) }
    }
}

pub const MAX_WORD_LEN: usize = 6;
pub const MAX_SHIFT_DEG: u32 = 8;
pub const MAX_Q_DEG: u32 = 8;
const MAX_ATTEMPTS: usize = 10_000;

impl OrbitParams {
    fn validate(&self) -> Result<()> {
        if self.word_len > MAX_WORD_LEN {
            return Err(Error::InvalidParams(format!("word length {} exceeds {MAX_WORD_LEN}", self.word_len)));
        }
        if !(3..=MAX_SHIFT_DEG).contains(&self.max_deg) {
            return Err(Error::InvalidParams(format!("max degree must lie in 3..={MAX_SHIFT_DEG}")));
        }
        if !(1..=MAX_Q_DEG).contains(&self.max_q_deg) {
            return Err(Error::InvalidParams(format!("max Q degree must lie in 1..={MAX_Q_DEG}")));
        }
        if self.max_order == Some(0) {
            return Err(Error::InvalidParams("max order must be positive".into()));
        }
        Ok(())
    }
}

/// Small nonzero rational with numerator in `-3..=3` and denominator in `1..=3`.
pub(crate) fn small_rational<R: Rng>(rng: &mut R, allow_zero: bool) -> Rational {
    loop {
        let num: i64 = rng.gen_range(-3..=3);
        let den: i64 = rng.gen_range(1..=3);
        if num != 0 || allow_zero {
            return Rational::new(num.into(), den.into());
        }
    }
}

/// Random polynomial of exact degree `deg` with `low..=deg` coefficients
/// drawn, lower ones zero.
pub(crate) fn random_poly<R: Rng>(rng: &mut R, low: usize, deg: usize) -> Poly {
    let mut coeffs = vec![Rational::zero(); deg + 1];
    for c in coeffs.iter_mut().take(deg).skip(low) {
        *c = small_rational(rng, true);
    }
    coeffs[deg] = small_rational(rng, false);
    Poly::from_coeffs(coeffs)
}

/// Deterministic orbit element `apply(word, Q(D))` with its ground-truth
/// certificate. The word alternates `ShiftD`, `ShiftX`, ... with shift
/// polynomials of degree `3..=max_deg`.
pub fn random_orbit_element(seed: u64, params: &OrbitParams) -> Result<(WeylElement, Certificate)> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let mut gens = Vec::with_capacity(params.word_len);
        for i in 0..params.word_len {
            let last = i + 1 == params.word_len;
            if last && params.trailing_fourier && rng.gen_bool(0.5) {
                gens.push(Generator::Fourier);
                continue;
            }
            let deg = rng.gen_range(3..=params.max_deg) as usize;
            let p = random_poly(&mut rng, 1, deg);
            gens.push(if i % 2 == 0 { Generator::shift_d(p) } else { Generator::shift_x(p) });
        }
        let q_deg = rng.gen_range(1..=params.max_q_deg) as usize;
        let q = random_poly(&mut rng, 0, q_deg);
        let word = AutoWord::new(gens);
        // Cheap order bound before expanding: ShiftD keeps the order,
        // ShiftX multiplies the x-degree into it.
        if let Some(cap) = params.max_order {
            if predicted_order(&word, q_deg as u64) > cap as u64 {
                continue;
            }
        }
        let l = orbit_element(&word, &q);
        if params.max_order.is_some_and(|cap| l.order() > cap as i64) {
            continue;
        }
        return Ok((l, Certificate { word, gen_poly: q, side: CertSide::D }));
    }
    Err(Error::InvalidParams("could not meet the order bound; relax max_order".into()))
}

/// Upper bound on the order of `apply(word, Q(D))` from degrees alone.
fn predicted_order(word: &AutoWord, q_deg: u64) -> u64 {
    // (order, x-degree)
    let (mut ord, mut xdeg) = (q_deg, 0u64);
    for g in word.gens() {
        match g {
            Generator::ShiftD(r) => {
                let e = r.degree().unwrap_or(1).saturating_sub(1) as u64;
                xdeg = xdeg.max(ord * e.max(1)) + xdeg;
            }
            Generator::ShiftX(s) => {
                let e = s.degree().unwrap_or(1).saturating_sub(1) as u64;
                ord += xdeg * e.max(1);
            }
            Generator::Fourier => std::mem::swap(&mut ord, &mut xdeg),
        }
    }
    ord
}
