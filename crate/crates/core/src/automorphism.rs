//! Generator automorphisms of `A_1`, words of them, and the anti-involution
//! `b0` used to build bispectral partners.
//!
//! Generators act on `x` and `D` as
//!
//! ```text
//! ShiftX(S):  x -> x + S'(D),  D -> D          (exp ad_{S(D)})
//! ShiftD(R):  x -> x,          D -> D - R'(x)  (exp ad_{R(x)})
//! Fourier:    x -> D,          D -> -x
//! ```
//!
//! A word is applied left to right: `apply([g1, g2], a) = g2(g1(a))`.
//! Application substitutes the generator images and re-normal-orders; the
//! exponential series of `ad` is never expanded.

use std::collections::BTreeMap;
use std::fmt;

use num::One;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::weyl::{commutator, linear_combination, Monomial, Side, WeylElement};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `exp ad_{S(D)}`; `S` is stored without its constant term.
    ShiftX(Poly),
    /// `exp ad_{R(x)}`; `R` is stored without its constant term.
    ShiftD(Poly),
    Fourier,
}

impl Generator {
    pub fn shift_x(s: Poly) -> Self {
        Generator::ShiftX(s.without_constant())
    }

    pub fn shift_d(r: Poly) -> Self {
        Generator::ShiftD(r.without_constant())
    }

    /// Acts trivially (zero shift polynomial).
    pub fn is_identity(&self) -> bool {
        match self {
            Generator::ShiftX(p) | Generator::ShiftD(p) => p.is_zero(),
            Generator::Fourier => false,
        }
    }

    /// Images of the two generators of the `side` copy of `A_1`.
    pub fn images(&self, side: Side) -> (WeylElement, WeylElement) {
        let x = WeylElement::x(side);
        let d = WeylElement::d(side);
        match self {
            Generator::ShiftX(s) => (&x + &WeylElement::poly_in_d(side, &s.derivative()), d),
            Generator::ShiftD(r) => {
                let dd = &d - &WeylElement::poly_in_x(side, &r.derivative());
                (x, dd)
            }
            Generator::Fourier => (d, -x),
        }
    }

    /// The inverse as a word; the inverse Fourier transform is `Fourier^3`.
    pub fn inverse(&self) -> Vec<Generator> {
        match self {
            Generator::ShiftX(s) => vec![Generator::ShiftX(-s)],
            Generator::ShiftD(r) => vec![Generator::ShiftD(-r)],
            Generator::Fourier => vec![Generator::Fourier; 3],
        }
    }

    pub fn apply(&self, a: &WeylElement) -> WeylElement {
        match self {
            _ if self.is_identity() => a.clone(),
            Generator::Fourier => fourier(a),
            _ => {
                let (ix, id) = self.images(a.side());
                substitute(a, &ix, &id)
            }
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::ShiftX(s) => write!(f, "shiftX({})", s.display_in("D")),
            Generator::ShiftD(r) => write!(f, "shiftD({})", r.display_in("x")),
            Generator::Fourier => f.write_str("fourier"),
        }
    }
}

/// A finite sequence of generators, applied left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AutoWord {
    gens: Vec<Generator>,
}

impl AutoWord {
    pub fn identity() -> Self {
        AutoWord::default()
    }

    pub fn new(gens: Vec<Generator>) -> Self {
        AutoWord { gens }
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn push(&mut self, g: Generator) {
        self.gens.push(g);
    }

    pub fn extend(&mut self, other: &AutoWord) {
        self.gens.extend(other.gens.iter().cloned());
    }

    /// `self` followed by `other`: `apply(compose(a, b), e) == apply(b, apply(a, e))`.
    pub fn compose(&self, other: &AutoWord) -> AutoWord {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    /// Two-sided inverse. Runs of `Fourier` are reduced modulo 4.
    pub fn invert(&self) -> AutoWord {
        let gens = self.gens.iter().rev().flat_map(Generator::inverse).collect();
        AutoWord { gens: reduce_fourier_runs(gens) }
    }

    /// Same automorphism with runs of `Fourier` reduced modulo 4.
    pub fn reduced(&self) -> AutoWord {
        AutoWord { gens: reduce_fourier_runs(self.gens.clone()) }
    }

    pub fn apply(&self, a: &WeylElement) -> WeylElement {
        self.gens.iter().fold(a.clone(), |acc, g| g.apply(&acc))
    }

    /// Images of `x` and `D` under the whole word.
    pub fn images(&self, side: Side) -> (WeylElement, WeylElement) {
        (self.apply(&WeylElement::x(side)), self.apply(&WeylElement::d(side)))
    }

    pub fn ccr_preserved(&self) -> bool {
        ccr_preserved(self)
    }
}

impl fmt::Display for AutoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gens.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

fn reduce_fourier_runs(gens: Vec<Generator>) -> Vec<Generator> {
    let mut out: Vec<Generator> = Vec::with_capacity(gens.len());
    let mut run = 0usize;
    for g in gens {
        if g == Generator::Fourier {
            run += 1;
            continue;
        }
        out.extend(std::iter::repeat_n(Generator::Fourier, run % 4));
        run = 0;
        out.push(g);
    }
    out.extend(std::iter::repeat_n(Generator::Fourier, run % 4));
    out
}

pub fn apply(w: &AutoWord, a: &WeylElement) -> WeylElement {
    w.apply(a)
}

pub fn invert(w: &AutoWord) -> AutoWord {
    w.invert()
}

/// `[w(D), w(x)] == 1`.
pub fn ccr_preserved(w: &AutoWord) -> bool {
    let (ix, id) = w.images(Side::X);
    commutator(&id, &ix).is_ok_and(|c| c == WeylElement::one(Side::X))
}

/// Image of `a` under the algebra homomorphism `x -> img_x`, `D -> img_d`.
pub fn substitute(a: &WeylElement, img_x: &WeylElement, img_d: &WeylElement) -> WeylElement {
    let side = a.side();
    // Group by x-power: a = sum_i x^i * (sum_j a_ij D^j).
    let mut rows: BTreeMap<u32, Vec<(u32, &Rational)>> = BTreeMap::new();
    for (m, c) in a.terms() {
        rows.entry(m.x).or_default().push((m.d, c));
    }
    let max_d = a.terms().map(|(m, _)| m.d).max().unwrap_or(0);
    let d_pows = powers(img_d, max_d);
    let mut x_pow = WeylElement::one(side);
    let mut cur_x = 0u32;
    let mut products = Vec::with_capacity(rows.len());
    for (i, row) in rows {
        while cur_x < i {
            x_pow = &x_pow * img_x;
            cur_x += 1;
        }
        let inner = linear_combination(side, row.into_iter().map(|(j, c)| (c.clone(), &d_pows[j as usize])));
        products.push(&x_pow * &inner);
    }
    linear_combination(side, products.iter().map(|p| (Rational::one(), p)))
}

fn powers(e: &WeylElement, n: u32) -> Vec<WeylElement> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(WeylElement::one(e.side()));
    for k in 1..=n as usize {
        let next = &out[k - 1] * e;
        out.push(next);
    }
    out
}

/// `x^i D^j -> D^i (-x)^j`, normal-ordered.
fn fourier(a: &WeylElement) -> WeylElement {
    let side = a.side();
    let mut out = WeylElement::zero(side);
    for (m, c) in a.terms() {
        let sign = if m.d % 2 == 1 { -c.clone() } else { c.clone() };
        let left = WeylElement::monomial(side, sign, 0, m.x);
        let right = WeylElement::monomial(side, Rational::one(), m.d, 0);
        out += &(&left * &right);
    }
    out
}

/// The anti-involution `x -> Dz`, `D -> z`, taking an `x`-side element to the
/// `z`-side: `x^i D^j -> z^j Dz^i`, coefficients unchanged.
pub fn anti_involution_b0(a: &WeylElement) -> Result<WeylElement> {
    transpose(a, Side::X)
}

/// Inverse of [`anti_involution_b0`], from the `z`-side back to `x`.
pub fn anti_involution_b0_inverse(a: &WeylElement) -> Result<WeylElement> {
    transpose(a, Side::Z)
}

fn transpose(a: &WeylElement, from: Side) -> Result<WeylElement> {
    if a.side() != from {
        return Err(Error::WrongSide { expected: from, found: a.side() });
    }
    Ok(WeylElement::from_terms(from.flip(), a.terms().map(|(m, c)| (Monomial::new(m.d, m.x), c.clone()))))
}

/// Orbit element `apply(w, q(D))`.
pub fn orbit_element(w: &AutoWord, q: &Poly) -> WeylElement {
    w.apply(&WeylElement::poly_in_d(Side::X, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn x() -> WeylElement {
        WeylElement::x(Side::X)
    }

    fn d() -> WeylElement {
        WeylElement::d(Side::X)
    }

    fn cubic(c: Rational) -> Poly {
        Poly::monomial(c, 3)
    }

    #[test]
    fn shift_x_on_x() {
        // S = D^3/3, S' = D^2
        let g = Generator::shift_x(cubic(q(1, 3)));
        assert_eq!(g.apply(&x()), &x() + &d().pow(2));
        assert_eq!(g.apply(&d()), d());
    }

    #[test]
    fn fourier_on_generators() {
        assert_eq!(Generator::Fourier.apply(&d()), -x());
        assert_eq!(Generator::Fourier.apply(&x()), d());
        // x D -> D (-x) = -(x D + 1)
        let xd = &x() * &d();
        assert_eq!(Generator::Fourier.apply(&xd), -(&xd + &WeylElement::one(Side::X)));
    }

    #[test]
    fn airy_word_on_d() {
        // [Fourier, ShiftX(-D^3/3)]: D -> -x -> -(x - D^2)
        let w = AutoWord::new(vec![Generator::Fourier, Generator::shift_x(cubic(q(-1, 3)))]);
        assert_eq!(w.apply(&d()), &d().pow(2) - &x());
        // The ShiftD variant fixes x, so the image of D stays -x.
        let w2 = AutoWord::new(vec![Generator::Fourier, Generator::shift_d(cubic(q(-1, 3)))]);
        assert_eq!(w2.apply(&d()), -x());
    }

    #[test]
    fn invert_examples() {
        let s = cubic(q(2, 1));
        assert_eq!(
            AutoWord::new(vec![Generator::shift_x(s.clone())]).invert(),
            AutoWord::new(vec![Generator::shift_x(-&s)])
        );
        assert_eq!(AutoWord::identity().invert(), AutoWord::identity());
        let w = AutoWord::new(vec![Generator::shift_d(s.clone()), Generator::Fourier]);
        let mut expected = vec![Generator::Fourier; 3];
        expected.push(Generator::shift_d(-&s));
        assert_eq!(w.invert(), AutoWord::new(expected));
        // Fourier runs collapse modulo 4.
        assert_eq!(w.invert().invert(), w);
    }

    #[test]
    fn invert_round_trip_on_generators() {
        let w = AutoWord::new(vec![
            Generator::shift_d(cubic(q(1, 3))),
            Generator::Fourier,
            Generator::shift_x(Poly::from_ints(&[0, 1, 1])),
        ]);
        let inv = w.invert();
        assert_eq!(inv.apply(&w.apply(&x())), x());
        assert_eq!(inv.apply(&w.apply(&d())), d());
        assert_eq!(w.apply(&inv.apply(&x())), x());
    }

    #[test]
    fn ccr_preserved_examples() {
        assert!(ccr_preserved(&AutoWord::identity()));
        let w = AutoWord::new(vec![Generator::shift_d(cubic(q(1, 3)))]);
        assert_eq!(w.apply(&d()), &d() - &x().pow(2));
        assert!(ccr_preserved(&w));
        assert!(ccr_preserved(&AutoWord::new(vec![Generator::Fourier])));
    }

    #[test]
    fn constant_terms_dropped() {
        let g = Generator::shift_d(Poly::from_ints(&[7, 0, 1]));
        assert_eq!(g, Generator::ShiftD(Poly::from_ints(&[0, 0, 1])));
        assert!(Generator::shift_x(Poly::from_ints(&[5])).is_identity());
    }

    #[test]
    fn b0_examples() {
        let z_d = WeylElement::d(Side::Z);
        let z = WeylElement::x(Side::Z);
        assert_eq!(anti_involution_b0(&x()).unwrap(), z_d);
        assert_eq!(anti_involution_b0(&(&x() * &d())).unwrap(), &z * &z_d);
        let a = &(&x().pow(2) * &d()) + &d().pow(3);
        assert_eq!(anti_involution_b0_inverse(&anti_involution_b0(&a).unwrap()).unwrap(), a);
        assert!(matches!(anti_involution_b0(&z), Err(Error::WrongSide { .. })));
    }

    #[test]
    fn b0_is_anti_multiplicative() {
        let a = &(&x() * &d().pow(2)) + &x();
        let b = &d() - &x().pow(3);
        let lhs = anti_involution_b0(&(&a * &b)).unwrap();
        let rhs = &anti_involution_b0(&b).unwrap() * &anti_involution_b0(&a).unwrap();
        assert_eq!(lhs, rhs);
    }
}
