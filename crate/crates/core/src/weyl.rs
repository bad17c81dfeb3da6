//! Exact arithmetic in the first Weyl algebra `A_1 = <x, D>` with `[D, x] = 1`.
//!
//! Elements are kept in normal order: each monomial is `x^i D^j` with every
//! `x` to the left of every `D`. Products are reordered with the closed form
//!
//! ```text
//! D^j x^i = sum_{t >= 0} t! C(i,t) C(j,t) x^(i-t) D^(j-t)
//! ```
//!
//! Two copies of the algebra are used by the bispectral construction, one in
//! `(x, D)` and one in `(z, Dz)`; the [`Side`] label keeps them apart.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num::{BigInt, Integer, One, Zero};

use crate::error::{Error, Result};
use crate::poly::{push_term, Poly};
use crate::Rational;

/// Which copy of `A_1` an element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    X,
    Z,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::X => Side::Z,
            Side::Z => Side::X,
        }
    }

    /// Surface symbols for the multiplication and differentiation generators.
    pub fn symbols(self) -> (&'static str, &'static str) {
        match self {
            Side::X => ("x", "D"),
            Side::Z => ("z", "Dz"),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::X => "x",
            Side::Z => "z",
        })
    }
}

/// The exponent pair of `x^x D^d`. Ordered by `x` first, then `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub x: u32,
    pub d: u32,
}

impl Monomial {
    pub const fn new(x: u32, d: u32) -> Self {
        Monomial { x, d }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    side: Side,
    terms: BTreeMap<Monomial, Rational>,
}

/// Order `N`, leading coefficient `V_N(x)` and subleading coefficient
/// `V_{N-1}(x)` of an operator written as `sum_j V_j(x) D^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorProfile {
    /// `-1` for the zero element.
    pub order: i64,
    pub leading: Poly,
    pub subleading: Poly,
}

impl WeylElement {
    pub fn zero(side: Side) -> Self {
        WeylElement { side, terms: BTreeMap::new() }
    }

    pub fn one(side: Side) -> Self {
        WeylElement::constant(side, Rational::one())
    }

    pub fn constant(side: Side, c: Rational) -> Self {
        WeylElement::monomial(side, c, 0, 0)
    }

    pub fn monomial(side: Side, c: Rational, x: u32, d: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(x, d), c);
        }
        WeylElement { side, terms }
    }

    /// The multiplication generator (`x` or `z`).
    pub fn x(side: Side) -> Self {
        WeylElement::monomial(side, Rational::one(), 1, 0)
    }

    /// The differentiation generator (`D` or `Dz`).
    pub fn d(side: Side) -> Self {
        WeylElement::monomial(side, Rational::one(), 0, 1)
    }

    /// Builds an element from possibly repeated, possibly zero terms.
    pub fn from_terms<I>(side: Side, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            *map.entry(m).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        WeylElement { side, terms: map }
    }

    pub fn poly_in_x(side: Side, p: &Poly) -> Self {
        WeylElement::from_terms(
            side,
            p.coeffs().iter().enumerate().map(|(i, c)| (Monomial::new(i as u32, 0), c.clone())),
        )
    }

    pub fn poly_in_d(side: Side, p: &Poly) -> Self {
        WeylElement::from_terms(
            side,
            p.coeffs().iter().enumerate().map(|(j, c)| (Monomial::new(0, j as u32), c.clone())),
        )
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// Same terms, relabelled onto `side`.
    pub fn with_side(mut self, side: Side) -> Self {
        self.side = side;
        self
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, x: u32, d: u32) -> Rational {
        self.terms.get(&Monomial::new(x, d)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.x == 0 && m.d == 0)
    }

    pub fn is_free_of_x(&self) -> bool {
        self.terms.keys().all(|m| m.x == 0)
    }

    pub fn is_free_of_d(&self) -> bool {
        self.terms.keys().all(|m| m.d == 0)
    }

    /// Highest power of `D`; `-1` for zero.
    pub fn order(&self) -> i64 {
        self.terms.keys().map(|m| m.d as i64).max().unwrap_or(-1)
    }

    /// Highest power of `x`; `-1` for zero.
    pub fn x_degree(&self) -> i64 {
        self.terms.keys().map(|m| m.x as i64).max().unwrap_or(-1)
    }

    /// Total degree `i + j` of the largest monomial; `-1` for zero.
    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|m| (m.x + m.d) as i64).max().unwrap_or(-1)
    }

    /// Coefficient of `D^j` as a polynomial in `x`.
    pub fn d_coefficient(&self, j: u32) -> Poly {
        let mut coeffs = vec![Rational::zero(); (self.x_degree() + 1).max(0) as usize];
        for (m, c) in self.terms.iter().filter(|(m, _)| m.d == j) {
            coeffs[m.x as usize] = c.clone();
        }
        Poly::from_coeffs(coeffs)
    }

    /// Coefficient of `x^i` as a polynomial in `D`.
    pub fn x_coefficient(&self, i: u32) -> Poly {
        let mut coeffs = vec![Rational::zero(); (self.order() + 1).max(0) as usize];
        for (m, c) in self.terms.iter().filter(|(m, _)| m.x == i) {
            coeffs[m.d as usize] = c.clone();
        }
        Poly::from_coeffs(coeffs)
    }

    /// `Some(p)` when the element is `p(x)`.
    pub fn as_poly_in_x(&self) -> Option<Poly> {
        self.is_free_of_d().then(|| self.d_coefficient(0))
    }

    /// `Some(p)` when the element is `p(D)`.
    pub fn as_poly_in_d(&self) -> Option<Poly> {
        self.is_free_of_x().then(|| self.x_coefficient(0))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return WeylElement::zero(self.side);
        }
        WeylElement { side: self.side, terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = WeylElement::one(self.side);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn profile(&self) -> OperatorProfile {
        profile(self)
    }

    fn check_side(&self, other: &WeylElement) -> Result<()> {
        if self.side == other.side {
            Ok(())
        } else {
            Err(Error::SideMismatch { left: self.side, right: other.side })
        }
    }

    fn add_scaled(&mut self, other: &WeylElement, c: &Rational) {
        for (m, a) in &other.terms {
            let entry = self.terms.entry(*m).or_insert_with(Rational::zero);
            *entry += a * c;
            if entry.is_zero() {
                self.terms.remove(m);
            }
        }
    }
}

/// `sum_k c_k e_k`, accumulated over a common denominator.
pub(crate) fn linear_combination<'a, I>(side: Side, parts: I) -> WeylElement
where
    I: IntoIterator<Item = (Rational, &'a WeylElement)>,
{
    let parts: Vec<(BigInt, Vec<(Monomial, BigInt)>)> = parts
        .into_iter()
        .map(|(c, e)| {
            let (den, terms) = integer_form(e);
            let terms = terms.into_iter().map(|(m, n)| (m, n * c.numer())).collect();
            (den * c.denom(), terms)
        })
        .collect();
    let den = parts.iter().fold(BigInt::one(), |acc, (d, _)| acc.lcm(d));
    let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
    for (d, terms) in parts {
        let factor = &den / d;
        for (m, n) in terms {
            *acc.entry(m).or_insert_with(BigInt::zero) += n * &factor;
        }
    }
    let terms =
        acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(m, c)| (m, Rational::new(c, den.clone()))).collect();
    WeylElement { side, terms }
}

/// Coefficients `t! C(i,t) C(j,t)` of `D^j x^i`, for `t = 0..=min(i,j)`.
fn reorder_coefficients(i: u32, j: u32) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(i.min(j) as usize + 1);
    let mut c = BigInt::one();
    out.push(c.clone());
    for t in 0..i.min(j) {
        c = c * BigInt::from((i - t) as u64 * (j - t) as u64) / BigInt::from(t + 1);
        out.push(c.clone());
    }
    out
}

/// Common denominator and integer numerators of the terms of `a`.
fn integer_form(a: &WeylElement) -> (BigInt, Vec<(Monomial, BigInt)>) {
    let den = a.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let terms = a.terms.iter().map(|(m, c)| (*m, c.numer() * (&den / c.denom()))).collect();
    (den, terms)
}

// Accumulates over the integers and divides once per output term; summing
// rationals directly would pay a gcd on every addition.
fn product_unchecked(a: &WeylElement, b: &WeylElement) -> WeylElement {
    let (da, ta) = integer_form(a);
    let (db, tb) = integer_form(b);
    let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
    let mut cache: HashMap<(u32, u32), Vec<BigInt>> = HashMap::new();
    for (ma, ca) in &ta {
        for (mb, cb) in &tb {
            let base = ca * cb;
            let coefs = cache.entry((mb.x, ma.d)).or_insert_with(|| reorder_coefficients(mb.x, ma.d));
            for (t, k) in coefs.iter().enumerate() {
                let t = t as u32;
                let m = Monomial::new(ma.x + mb.x - t, ma.d + mb.d - t);
                let entry = acc.entry(m).or_insert_with(BigInt::zero);
                if k.is_one() {
                    *entry += &base;
                } else {
                    *entry += &base * k;
                }
            }
        }
    }
    let den = da * db;
    let terms =
        acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(m, c)| (m, Rational::new(c, den.clone()))).collect();
    WeylElement { side: a.side, terms }
}

/// Normal-ordered product `a * b`.
pub fn normalize_product(a: &WeylElement, b: &WeylElement) -> Result<WeylElement> {
    a.check_side(b)?;
    Ok(product_unchecked(a, b))
}

/// `ab - ba`.
pub fn commutator(a: &WeylElement, b: &WeylElement) -> Result<WeylElement> {
    a.check_side(b)?;
    Ok(&product_unchecked(a, b) - &product_unchecked(b, a))
}

/// `ad_m^s(h)`, the `s`-fold iterated commutator `[m, [m, ..., h]]`.
pub fn ad_power(m: &WeylElement, h: &WeylElement, s: u32) -> Result<WeylElement> {
    m.check_side(h)?;
    let mut cur = h.clone();
    for _ in 0..s {
        if cur.is_zero() {
            break;
        }
        cur = commutator(m, &cur)?;
    }
    Ok(cur)
}

pub fn profile(l: &WeylElement) -> OperatorProfile {
    let order = l.order();
    if order < 0 {
        return OperatorProfile { order, leading: Poly::zero(), subleading: Poly::zero() };
    }
    let n = order as u32;
    let subleading = if n == 0 { Poly::zero() } else { l.d_coefficient(n - 1) };
    OperatorProfile { order, leading: l.d_coefficient(n), subleading }
}

/// `q(e)`, evaluated by Horner's rule in the algebra.
pub fn eval_poly(q: &Poly, e: &WeylElement) -> WeylElement {
    let mut acc = WeylElement::zero(e.side);
    for c in q.coeffs().iter().rev() {
        acc = &(&acc * e) + &WeylElement::constant(e.side, c.clone());
    }
    acc
}

impl Add for &WeylElement {
    type Output = WeylElement;
    fn add(self, rhs: &WeylElement) -> WeylElement {
        self.check_side(rhs).expect("adding elements of different sides");
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &WeylElement {
    type Output = WeylElement;
    fn sub(self, rhs: &WeylElement) -> WeylElement {
        self.check_side(rhs).expect("subtracting elements of different sides");
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl AddAssign<&WeylElement> for WeylElement {
    fn add_assign(&mut self, rhs: &WeylElement) {
        self.check_side(rhs).expect("adding elements of different sides");
        self.add_scaled(rhs, &Rational::one());
    }
}

impl SubAssign<&WeylElement> for WeylElement {
    fn sub_assign(&mut self, rhs: &WeylElement) {
        self.check_side(rhs).expect("subtracting elements of different sides");
        self.add_scaled(rhs, &-Rational::one());
    }
}

impl Neg for &WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        self.scale(&-Rational::one())
    }
}

/// Panics on a side mismatch; use [`normalize_product`] for a checked product.
impl Mul for &WeylElement {
    type Output = WeylElement;
    fn mul(self, rhs: &WeylElement) -> WeylElement {
        normalize_product(self, rhs).expect("multiplying elements of different sides")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for WeylElement {
            type Output = WeylElement;
            fn $m(self, rhs: WeylElement) -> WeylElement {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        -&self
    }
}

/// Canonical text form: terms ordered by `D`-power, then `x`-power, both
/// descending, e.g. `D^2 - x`, `x*D + 1`, `Dz^2 - z`.
impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let (xs, ds) = self.side.symbols();
        let mut keys: Vec<_> = self.terms.iter().collect();
        keys.sort_by_key(|(m, _)| std::cmp::Reverse((m.d, m.x)));
        let mut out = String::new();
        for (m, c) in keys {
            let mut factors = Vec::new();
            match m.x {
                0 => {}
                1 => factors.push(xs.to_string()),
                e => factors.push(format!("{xs}^{e}")),
            }
            match m.d {
                0 => {}
                1 => factors.push(ds.to_string()),
                e => factors.push(format!("{ds}^{e}")),
            }
            push_term(&mut out, c, &factors.join("*"));
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn x() -> WeylElement {
        WeylElement::x(Side::X)
    }

    fn d() -> WeylElement {
        WeylElement::d(Side::X)
    }

    fn mono(c: i64, i: u32, j: u32) -> WeylElement {
        WeylElement::monomial(Side::X, int(c), i, j)
    }

    #[test]
    fn d_times_x_is_ccr() {
        assert_eq!(&d() * &x(), &mono(1, 1, 1) + &mono(1, 0, 0));
    }

    #[test]
    fn d2_times_x2() {
        // D^2 x^2 = x^2 D^2 + 4 x D + 2
        let expected = WeylElement::from_terms(
            Side::X,
            [(Monomial::new(2, 2), int(1)), (Monomial::new(1, 1), int(4)), (Monomial::new(0, 0), int(2))],
        );
        assert_eq!(&d().pow(2) * &x().pow(2), expected);
    }

    #[test]
    fn x_times_x() {
        assert_eq!(&x() * &x(), mono(1, 2, 0));
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(commutator(&d(), &x()).unwrap(), WeylElement::one(Side::X));
        let a = &mono(3, 2, 1) + &mono(-1, 0, 4);
        assert!(commutator(&a, &a).unwrap().is_zero());
        assert_eq!(commutator(&mono(1, 1, 1), &x()).unwrap(), x());
    }

    #[test]
    fn ad_power_examples() {
        let d2 = d().pow(2);
        assert_eq!(ad_power(&d2, &x(), 1).unwrap(), mono(2, 0, 1));
        assert!(ad_power(&d2, &x(), 2).unwrap().is_zero());
        let h = &mono(1, 3, 2) + &mono(5, 0, 0);
        assert_eq!(ad_power(&d2, &h, 0).unwrap(), h);
        for s in 0..5 {
            assert_eq!(ad_power(&mono(1, 1, 1), &x(), s).unwrap(), x());
        }
    }

    #[test]
    fn side_mismatch_is_an_error() {
        let z = WeylElement::x(Side::Z);
        assert!(matches!(normalize_product(&x(), &z), Err(Error::SideMismatch { .. })));
        assert!(commutator(&x(), &z).is_err());
        assert!(ad_power(&z, &x(), 2).is_err());
    }

    #[test]
    fn profile_examples() {
        let airy = &d().pow(2) - &x();
        let p = profile(&airy);
        assert_eq!((p.order, p.leading, p.subleading), (2, Poly::one(), Poly::zero()));

        let p = profile(&mono(1, 1, 1));
        assert_eq!((p.order, p.leading, p.subleading), (1, Poly::from_ints(&[0, 1]), Poly::zero()));

        let p = profile(&mono(1, 3, 0));
        assert_eq!((p.order, p.leading), (0, Poly::from_ints(&[0, 0, 0, 1])));

        let p = profile(&WeylElement::zero(Side::X));
        assert_eq!(p.order, -1);
        assert!(p.leading.is_zero());
    }

    #[test]
    fn eval_poly_horner() {
        // (D - x^2)^2 via q(t) = t^2
        let k = &d() - &mono(1, 2, 0);
        assert_eq!(eval_poly(&Poly::from_ints(&[0, 0, 1]), &k), &k * &k);
        assert!(eval_poly(&Poly::zero(), &k).is_zero());
    }

    #[test]
    fn display_canonical() {
        assert_eq!(WeylElement::zero(Side::X).to_string(), "0");
        assert_eq!((&mono(1, 1, 1) + &mono(1, 0, 0)).to_string(), "x*D + 1");
        let zd = WeylElement::d(Side::Z);
        let z = WeylElement::x(Side::Z);
        assert_eq!((&zd.pow(2) - &z).to_string(), "Dz^2 - z");
        let e = WeylElement::monomial(Side::X, Rational::new((-3).into(), 2.into()), 2, 3);
        assert_eq!(e.to_string(), "-3/2*x^2*D^3");
    }

    #[test]
    fn reorder_coefficient_table() {
        // D^3 x^2: t = 0, 1, 2 -> 1, 6, 6
        assert_eq!(reorder_coefficients(2, 3), vec![BigInt::from(1), BigInt::from(6), BigInt::from(6)]);
    }
}
