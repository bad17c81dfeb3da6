//! `(rho, sigma)`-weights, associated commutative polynomials and the
//! upper Newton-polygon edge through `(0, N)`.
//!
//! For a weight `(rho, sigma)` the monomial `x^i D^j` has weight
//! `rho*i + sigma*j`. The associated polynomial of `G` collects the terms of
//! maximal weight as a commutative polynomial in `X` (for `x`) and `Y` (for
//! `D`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::integer::gcd;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::push_term;
use crate::weyl::WeylElement;
use crate::Rational;

/// A primitive positive weight: `gcd(rho, sigma) == 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    rho: u64,
    sigma: u64,
}

impl Weight {
    pub fn new(rho: u64, sigma: u64) -> Result<Self> {
        if rho == 0 || sigma == 0 || gcd(rho, sigma) != 1 {
            return Err(Error::InvalidWeight { rho, sigma });
        }
        Ok(Weight { rho, sigma })
    }

    /// The primitive representative of the ray through `(rho, sigma)`.
    pub fn primitive(rho: u64, sigma: u64) -> Result<Self> {
        if rho == 0 || sigma == 0 {
            return Err(Error::InvalidWeight { rho, sigma });
        }
        let g = gcd(rho, sigma);
        Ok(Weight { rho: rho / g, sigma: sigma / g })
    }

    pub fn rho(&self) -> u64 {
        self.rho
    }

    pub fn sigma(&self) -> u64 {
        self.sigma
    }

    pub fn of(&self, x: u32, d: u32) -> u64 {
        self.rho * x as u64 + self.sigma * d as u64
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.rho, self.sigma)
    }
}

/// Commutative polynomial in `X`, `Y`, keyed by `(deg_X, deg_Y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        BiPoly::monomial(Rational::one(), 0, 0)
    }

    pub fn monomial(c: Rational, x: u32, y: u32) -> Self {
        BiPoly::from_terms([((x, y), c)])
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Rational)>>(terms: I) -> Self {
        let mut map: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for (k, c) in terms {
            *map.entry(k).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        BiPoly { terms: map }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, x: u32, y: u32) -> Rational {
        self.terms.get(&(x, y)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn x_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .flat_map(|((a, b), c)| other.terms.iter().map(move |((p, q), e)| ((a + p, b + q), c * e))),
        )
    }

    pub fn pow(&self, n: u32) -> BiPoly {
        (0..n).fold(BiPoly::one(), |acc, _| acc.mul(self))
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut keys: Vec<_> = self.terms.iter().collect();
        // Y-power first, matching the operator display.
        keys.sort_by_key(|(k, _)| std::cmp::Reverse((k.1, k.0)));
        let mut out = String::new();
        for ((i, j), c) in keys {
            let mut factors = Vec::new();
            match i {
                0 => {}
                1 => factors.push("X".to_string()),
                e => factors.push(format!("X^{e}")),
            }
            match j {
                0 => {}
                1 => factors.push("Y".to_string()),
                e => factors.push(format!("Y^{e}")),
            }
            push_term(&mut out, c, &factors.join("*"));
        }
        f.write_str(&out)
    }
}

/// Newton data of one element for one weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonData {
    pub weight: Weight,
    /// `v_{rho,sigma}(G)`.
    pub value: u64,
    /// Support points of maximal weight.
    pub top_support: BTreeSet<(u32, u32)>,
    pub assoc: BiPoly,
}

/// Successful factorisation `assoc = Y^n (Y^r - lambda X)^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredForm {
    pub n: u32,
    pub r: u32,
    pub k: u32,
    pub lambda: Rational,
}

impl FactoredForm {
    pub fn reconstruct(&self) -> BiPoly {
        let binom = BiPoly::from_terms([((0, self.r), Rational::one()), ((1, 0), -self.lambda.clone())]);
        BiPoly::monomial(Rational::one(), 0, self.n).mul(&binom.pow(self.k))
    }
}

impl fmt::Display for FactoredForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ypow = match self.n {
            0 => String::new(),
            1 => "Y*".to_string(),
            n => format!("Y^{n}*"),
        };
        let mut binom = if self.r == 1 { "Y".to_string() } else { format!("Y^{}", self.r) };
        push_term(&mut binom, &-self.lambda.clone(), "X");
        match self.k {
            1 => write!(f, "{ypow}({binom})"),
            k => write!(f, "{ypow}({binom})^{k}"),
        }
    }
}

/// Extra classification attached to a failed lambda check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeHint {
    None,
    /// `rho == sigma`: the two-linear-factor shape with equal weights.
    EqualWeights,
    /// `Y^2 + c X^2` with equal weights: the harmonic-oscillator shape, whose
    /// elements are strictly semisimple.
    StrictlySemisimple,
}

/// Why an associated polynomial is not `Y^n (Y^r - lambda X)^k` with `n = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotOfForm {
    /// The associated polynomial lacks the monic `Y^N` term.
    NotMonicInY,
    Monomial,
    /// `sigma` does not divide `rho`, so `Y^r` cannot balance `X`.
    NonIntegerRatio {
        rho: u64,
        sigma: u64,
    },
    /// Reconstruction from the extracted lambda does not match.
    LambdaInconsistent {
        lambda: Rational,
        hint: ShapeHint,
    },
    /// Factors exactly, but with a positive power of `Y` in front.
    PositiveYMultiplicity {
        form: FactoredForm,
    },
}

impl fmt::Display for NotOfForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotOfForm::NotMonicInY => f.write_str("associated polynomial is not monic in Y"),
            NotOfForm::Monomial => f.write_str("associated polynomial is a monomial"),
            NotOfForm::NonIntegerRatio { rho, sigma } => {
                write!(f, "sigma = {sigma} does not divide rho = {rho}")
            }
            NotOfForm::LambdaInconsistent { lambda, hint } => {
                write!(f, "lambda inconsistency (extracted lambda = {lambda})")?;
                match hint {
                    ShapeHint::None => Ok(()),
                    ShapeHint::EqualWeights => f.write_str("; equal-weight two-factor shape"),
                    ShapeHint::StrictlySemisimple => f.write_str("; harmonic-oscillator shape, strictly semisimple"),
                }
            }
            NotOfForm::PositiveYMultiplicity { form } => {
                write!(f, "positive Y-multiplicity n = {}: factors as {form}", form.n)
            }
        }
    }
}

/// `v_{rho,sigma}(G)`: the maximal weight over the support.
pub fn weight_value(g: &WeylElement, w: Weight) -> Result<u64> {
    g.terms().map(|(m, _)| w.of(m.x, m.d)).max().ok_or(Error::ZeroElement)
}

pub fn associated_poly(g: &WeylElement, w: Weight) -> Result<NewtonData> {
    let value = weight_value(g, w)?;
    let top: Vec<_> = g.terms().filter(|(m, _)| w.of(m.x, m.d) == value).collect();
    Ok(NewtonData {
        weight: w,
        value,
        top_support: top.iter().map(|(m, _)| (m.x, m.d)).collect(),
        assoc: BiPoly::from_terms(top.into_iter().map(|(m, c)| ((m.x, m.d), c.clone()))),
    })
}

/// Weight of the upper Newton edge through `(0, N)`.
///
/// Among support points with `i > 0` the edge passes through those
/// minimising `(N - j) / i`; the returned anchor is the one with the largest
/// `i`. All support points satisfy `rho*i + sigma*j <= N*sigma`.
pub fn choose_weights(l: &WeylElement) -> Result<(Weight, (u32, u32))> {
    let prof = l.profile();
    if prof.order < 0 {
        return Err(Error::ZeroElement);
    }
    if l.is_free_of_x() {
        return Err(Error::SignalConstantCoefficients);
    }
    if !prof.leading.is_constant() {
        return Err(Error::NotNormalizable);
    }
    let n = prof.order as u64;
    // Minimise (n - j)/i, then maximise i. Compare fractions by cross
    // multiplication.
    let mut best: Option<(u64, u64, u32, u32)> = None;
    for (m, _) in l.terms().filter(|(m, _)| m.x > 0) {
        let num = n - m.d as u64;
        let den = m.x as u64;
        let better = match best {
            None => true,
            Some((bn, bd, bx, _)) => {
                let lhs = num * bd;
                let rhs = bn * den;
                lhs < rhs || (lhs == rhs && m.x > bx)
            }
        };
        if better {
            best = Some((num, den, m.x, m.d));
        }
    }
    let (num, den, k0, m0) = best.expect("element depends on x");
    Ok((Weight::primitive(num, den)?, (k0, m0)))
}

/// Recognise `Y^n (Y^r - lambda X)^k`.
///
/// Succeeds only with `n = 0`; an exact factorisation with `n > 0` is
/// reported as [`NotOfForm::PositiveYMultiplicity`].
pub fn factor_form(nd: &NewtonData, order: u32) -> std::result::Result<FactoredForm, NotOfForm> {
    let f = &nd.assoc;
    if !f.coeff(0, order).is_one() || nd.value != nd.weight.of(0, order) {
        return Err(NotOfForm::NotMonicInY);
    }
    if f.is_monomial() {
        return Err(NotOfForm::Monomial);
    }
    let (rho, sigma) = (nd.weight.rho(), nd.weight.sigma());
    if rho % sigma != 0 {
        return Err(NotOfForm::NonIntegerRatio { rho, sigma });
    }
    let r = (rho / sigma) as u32;
    let k = f.x_degree().expect("nonzero");
    let hint = shape_hint(nd, order);
    let inconsistent = |lambda: Rational| NotOfForm::LambdaInconsistent { lambda, hint };
    let Some(n) = order.checked_sub(r * k) else {
        return Err(inconsistent(Rational::zero()));
    };
    let lambda = -f.coeff(1, n + r * (k - 1)) / Rational::from_integer(k.into());
    if lambda.is_zero() {
        return Err(inconsistent(lambda));
    }
    let form = FactoredForm { n, r, k, lambda };
    if &form.reconstruct() != f {
        return Err(inconsistent(form.lambda));
    }
    if n > 0 {
        return Err(NotOfForm::PositiveYMultiplicity { form });
    }
    Ok(form)
}

fn shape_hint(nd: &NewtonData, order: u32) -> ShapeHint {
    if nd.weight.rho() != nd.weight.sigma() {
        return ShapeHint::None;
    }
    let oscillator: BTreeSet<(u32, u32)> = [(0, 2), (2, 0)].into_iter().collect();
    if order == 2 && nd.top_support == oscillator {
        ShapeHint::StrictlySemisimple
    } else {
        ShapeHint::EqualWeights
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::Side;

    fn int(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn el(terms: &[(i64, u32, u32)]) -> WeylElement {
        WeylElement::from_terms(Side::X, terms.iter().map(|&(c, i, j)| (crate::weyl::Monomial::new(i, j), int(c))))
    }

    fn bp(terms: &[(i64, u32, u32)]) -> BiPoly {
        BiPoly::from_terms(terms.iter().map(|&(c, i, j)| ((i, j), int(c))))
    }

    fn w(r: u64, s: u64) -> Weight {
        Weight::new(r, s).unwrap()
    }

    #[test]
    fn weight_validation() {
        assert!(Weight::new(2, 2).is_err());
        assert!(Weight::new(0, 1).is_err());
        assert_eq!(Weight::primitive(4, 2).unwrap(), w(2, 1));
    }

    #[test]
    fn weight_value_examples() {
        assert_eq!(weight_value(&el(&[(1, 2, 3), (1, 1, 0)]), w(1, 2)).unwrap(), 8);
        assert_eq!(weight_value(&el(&[(1, 1, 0)]), w(3, 5)).unwrap(), 3);
        assert_eq!(weight_value(&el(&[(1, 0, 2), (-1, 1, 0)]), w(2, 1)).unwrap(), 2);
        assert_eq!(weight_value(&WeylElement::zero(Side::X), w(1, 1)), Err(Error::ZeroElement));
    }

    #[test]
    fn associated_poly_examples() {
        let l = el(&[(1, 0, 4), (2, 1, 2), (2, 0, 1), (1, 2, 0)]);
        let nd = associated_poly(&l, w(2, 1)).unwrap();
        assert_eq!(nd.assoc, bp(&[(1, 0, 4), (2, 1, 2), (1, 2, 0)]));
        assert_eq!(nd.top_support, [(0, 4), (1, 2), (2, 0)].into_iter().collect());
        assert_eq!(nd.value, 4);

        let airy = el(&[(1, 0, 2), (-1, 1, 0)]);
        assert_eq!(associated_poly(&airy, w(2, 1)).unwrap().assoc, bp(&[(1, 0, 2), (-1, 1, 0)]));
        assert_eq!(associated_poly(&el(&[(1, 1, 0)]), w(1, 1)).unwrap().assoc, bp(&[(1, 1, 0)]));
    }

    #[test]
    fn choose_weights_examples() {
        assert_eq!(choose_weights(&el(&[(1, 0, 2), (-1, 1, 0)])).unwrap(), (w(2, 1), (1, 0)));
        assert_eq!(choose_weights(&el(&[(1, 0, 3), (1, 1, 1)])).unwrap(), (w(2, 1), (1, 1)));
        let l = el(&[(1, 0, 4), (2, 1, 2), (2, 0, 1), (1, 2, 0)]);
        assert_eq!(choose_weights(&l).unwrap(), (w(2, 1), (2, 0)));
    }

    #[test]
    fn choose_weights_errors() {
        assert_eq!(choose_weights(&el(&[(1, 0, 3), (4, 0, 1)])), Err(Error::SignalConstantCoefficients));
        assert_eq!(choose_weights(&el(&[(1, 1, 1)])), Err(Error::NotNormalizable));
    }

    #[test]
    fn factor_form_examples() {
        let nd = |f: BiPoly, wt: Weight, v: u64| NewtonData {
            weight: wt,
            value: v,
            top_support: f.terms().map(|(k, _)| *k).collect(),
            assoc: f,
        };
        let ok = factor_form(&nd(bp(&[(1, 0, 4), (2, 1, 2), (1, 2, 0)]), w(2, 1), 4), 4).unwrap();
        assert_eq!(ok, FactoredForm { n: 0, r: 2, k: 2, lambda: int(-1) });

        match factor_form(&nd(bp(&[(1, 0, 3), (1, 1, 1)]), w(2, 1), 3), 3) {
            Err(NotOfForm::PositiveYMultiplicity { form }) => {
                assert_eq!(form, FactoredForm { n: 1, r: 2, k: 1, lambda: int(-1) })
            }
            other => panic!("unexpected {other:?}"),
        }

        match factor_form(&nd(bp(&[(1, 0, 2), (1, 2, 0)]), w(1, 1), 2), 2) {
            Err(NotOfForm::LambdaInconsistent { lambda, hint }) => {
                assert!(lambda.is_zero());
                assert_eq!(hint, ShapeHint::StrictlySemisimple);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn factor_form_other_diagnostics() {
        let mk = |f: BiPoly, wt: Weight, v: u64| NewtonData {
            weight: wt,
            value: v,
            top_support: f.terms().map(|(k, _)| *k).collect(),
            assoc: f,
        };
        assert_eq!(factor_form(&mk(bp(&[(1, 0, 3)]), w(1, 1), 3), 3), Err(NotOfForm::Monomial));
        // Y^3 + X^2 under (3, 2)
        assert_eq!(
            factor_form(&mk(bp(&[(1, 0, 3), (1, 2, 0)]), w(3, 2), 6), 3),
            Err(NotOfForm::NonIntegerRatio { rho: 3, sigma: 2 })
        );
        assert_eq!(factor_form(&mk(bp(&[(2, 0, 2), (1, 2, 0)]), w(1, 1), 2), 2), Err(NotOfForm::NotMonicInY));
        // (Y - X)^2 with equal weights factors with r = 1
        let sq = bp(&[(1, 0, 2), (-2, 1, 1), (1, 2, 0)]);
        assert_eq!(factor_form(&mk(sq, w(1, 1), 2), 2).unwrap(), FactoredForm { n: 0, r: 1, k: 2, lambda: int(1) });
        // Y^2 + XY + X^2: equal-weight shape that is not a square
        match factor_form(&mk(bp(&[(1, 0, 2), (1, 1, 1), (1, 2, 0)]), w(1, 1), 2), 2) {
            Err(NotOfForm::LambdaInconsistent { hint: ShapeHint::EqualWeights, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(bp(&[(1, 0, 4), (2, 1, 2), (1, 2, 0)]).to_string(), "Y^4 + 2*X*Y^2 + X^2");
        let f = FactoredForm { n: 0, r: 2, k: 2, lambda: int(-1) };
        assert_eq!(f.to_string(), "(Y^2 + X)^2");
        let g = FactoredForm { n: 1, r: 2, k: 1, lambda: Rational::new(3.into(), 2.into()) };
        assert_eq!(g.to_string(), "Y*(Y^2 - 3/2*X)");
    }
}
