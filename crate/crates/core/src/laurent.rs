//! Sparse Laurent polynomials in `a`, `q`, `t` with big-integer coefficients,
//! rational invariants with denominators `(q - q^{-1})^k`, and evaluation in
//! the Gaussian integers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exponent triple of a monomial `a^a q^q t^t`. Ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Exp {
    pub a: i64,
    pub q: i64,
    pub t: i64,
}

impl Exp {
    pub const ZERO: Exp = Exp { a: 0, q: 0, t: 0 };

    pub fn new(a: i64, q: i64, t: i64) -> Self {
        Exp { a, q, t }
    }
}

impl Add for Exp {
    type Output = Exp;
    fn add(self, o: Exp) -> Exp {
        Exp::new(self.a + o.a, self.q + o.q, self.t + o.t)
    }
}

/// Canonical sparse Laurent polynomial. No stored coefficient is zero, so
/// structural equality is polynomial equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<Exp, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0, 0, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, a: i64, q: i64, t: i64) -> Self {
        Self::term(c.into(), Exp::new(a, q, t))
    }

    pub fn term(c: BigInt, e: Exp) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// Builds a polynomial from `(coefficient, a, q, t)` tuples; repeated
    /// exponents are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (C, i64, i64, i64)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (c, a, q, t) in terms {
            p.add_term(Exp::new(a, q, t), c.into());
        }
        p
    }

    /// `a`-free, `t`-free polynomial from `(coefficient, q-exponent)` pairs.
    pub fn in_q<C: Into<BigInt>>(terms: impl IntoIterator<Item = (C, i64)>) -> Self {
        Self::from_terms(terms.into_iter().map(|(c, q)| (c, 0, q, 0)))
    }

    /// `q - q^{-1}`.
    pub fn z() -> Self {
        Self::in_q([(1, 1), (-1, -1)])
    }

    pub fn add_term(&mut self, e: Exp, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Exp::ZERO).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: Exp) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn has_t(&self) -> bool {
        self.terms.keys().any(|e| e.t != 0)
    }

    /// Multiplies by the monomial `c a^e.a q^e.q t^e.t`.
    pub fn shift(&self, c: impl Into<BigInt>, e: Exp) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k + e, v * &c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Applies an arbitrary exponent map; colliding images are summed.
    pub fn map_exponents(&self, f: impl Fn(Exp) -> Exp) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(f(*e), c.clone());
        }
        out
    }

    /// `a -> q^n`.
    pub fn substitute_a(&self, n: i64) -> Self {
        self.map_exponents(|e| Exp::new(0, e.q + n * e.a, e.t))
    }

    /// `(a, q) -> (a^{-1}, q^{-1})`.
    pub fn mirror(&self) -> Self {
        self.map_exponents(|e| Exp::new(-e.a, -e.q, e.t))
    }

    /// `t -> -1`.
    pub fn at_t_minus_one(&self) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let c = if e.t.rem_euclid(2) == 1 { -c } else { c.clone() };
            out.add_term(Exp::new(e.a, e.q, 0), c);
        }
        out
    }

    /// Sum of coefficients, i.e. the value at `a = q = t = 1`.
    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Restriction to the terms with the given `t` exponent.
    pub fn t_slice(&self, t: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.t == t)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn all_coefficients_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    /// Exact evaluation with `a`, `q`, `t` set to units of `Z[i]`.
    pub fn eval_units(&self, a: Unit, q: Unit, t: Unit) -> GaussianInt {
        let mut acc = GaussianInt::zero();
        for (e, c) in &self.terms {
            let u = a.pow(e.a) * q.pow(e.q) * t.pow(e.t);
            acc += GaussianInt::from(u).scale(c);
        }
        acc
    }

    /// Exact division by `q - q^{-1}`; `None` if not divisible.
    pub fn div_z(&self) -> Option<Self> {
        // Group by (a, t) and divide each q-polynomial by q^{-1}(q^2 - 1).
        let mut groups: BTreeMap<(i64, i64), BTreeMap<i64, BigInt>> = BTreeMap::new();
        for (e, c) in &self.terms {
            groups.entry((e.a, e.t)).or_default().insert(e.q + 1, c.clone());
        }
        let mut out = Self::zero();
        for ((a, t), mut g) in groups {
            let lo = *g.keys().next().unwrap();
            while let Some((&d, c)) = g.iter().next_back() {
                if d < lo + 2 {
                    return None;
                }
                let c = c.clone();
                out.add_term(Exp::new(a, d - 2, t), c.clone());
                g.remove(&d);
                let low = g.entry(d - 2).or_insert_with(BigInt::zero);
                *low += c;
                if low.is_zero() {
                    g.remove(&(d - 2));
                }
            }
        }
        Some(out)
    }

    /// Minimum and maximum `q` exponents.
    pub fn q_range(&self) -> Option<(i64, i64)> {
        let lo = self.terms.keys().map(|e| e.q).min()?;
        let hi = self.terms.keys().map(|e| e.q).max()?;
        Some((lo, hi))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mono = [('a', e.a), ('q', e.q), ('t', e.t)]
                .iter()
                .filter(|(_, k)| *k != 0)
                .map(|(v, k)| if *k == 1 { v.to_string() } else { format!("{v}^{k}") })
                .collect::<Vec<_>>()
                .join("");
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}{mono}")?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, o: &LaurentPoly) {
        for (e, c) in &o.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, o: &LaurentPoly) {
        for (e, c) in &o.terms {
            self.add_term(*e, -c);
        }
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                r.add_term(*e1 + *e2, c1 * c2);
            }
        }
        r
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, o: &'a $t) -> $t { (&self).$m(o) }
        }
    )*};
}
forward_owned!(LaurentPoly, Add add, Sub sub, Mul mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    a: i64,
    q: i64,
    t: i64,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    terms: Vec<TermJson>,
}

impl LaurentPoly {
    fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(e, c)| TermJson { a: e.a, q: e.q, t: e.t, c: c.to_string() })
            .collect()
    }

    fn from_json_terms(terms: Vec<TermJson>) -> std::result::Result<Self, String> {
        let mut p = Self::zero();
        for t in terms {
            let c: BigInt = t.c.parse().map_err(|_| format!("bad coefficient {:?}", t.c))?;
            p.add_term(Exp::new(t.a, t.q, t.t), c);
        }
        Ok(p)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson { terms: self.to_json_terms() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        Self::from_json_terms(raw.terms).map_err(serde::de::Error::custom)
    }
}

/// `num / (q - q^{-1})^dpow`, kept reduced: when `dpow > 0` the numerator is
/// not divisible by `q - q^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalInvariant {
    num: LaurentPoly,
    dpow: u32,
}

impl RationalInvariant {
    /// Reduces `num / z^dpow` by cancelling common factors of `z`.
    pub fn new(num: LaurentPoly, dpow: u32) -> Self {
        let mut num = num;
        let mut dpow = dpow;
        if num.is_zero() {
            return Self { num, dpow: 0 };
        }
        while dpow > 0 {
            match num.div_z() {
                Some(n) => {
                    num = n;
                    dpow -= 1;
                }
                None => break,
            }
        }
        Self { num, dpow }
    }

    pub fn poly(p: LaurentPoly) -> Self {
        Self { num: p, dpow: 0 }
    }

    pub fn zero() -> Self {
        Self::poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::poly(LaurentPoly::one())
    }

    /// HOMFLY of the two-component unlink, `(a - a^{-1}) / (q - q^{-1})`.
    pub fn unlink_factor() -> Self {
        Self::new(LaurentPoly::from_terms([(1, 1, 0, 0), (-1, -1, 0, 0)]), 1)
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn dpow(&self) -> u32 {
        self.dpow
    }

    pub fn is_polynomial(&self) -> bool {
        self.dpow == 0
    }

    pub fn as_polynomial(&self) -> Option<&LaurentPoly> {
        (self.dpow == 0).then_some(&self.num)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn lift(&self, d: u32) -> LaurentPoly {
        &self.num * &LaurentPoly::z().pow(d - self.dpow)
    }

    pub fn shift(&self, c: impl Into<BigInt>, e: Exp) -> Self {
        Self { num: self.num.shift(c, e), dpow: self.dpow }
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        Self::new(&self.num * p, self.dpow)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn substitute_a(&self, n: i64) -> Self {
        Self::new(self.num.substitute_a(n), self.dpow)
    }

    /// `(a, q) -> (a^{-1}, q^{-1})`. Since `z -> -z`, odd denominators flip sign.
    pub fn mirror(&self) -> Self {
        let num = self.num.mirror();
        let num = if self.dpow % 2 == 1 { -num } else { num };
        Self { num, dpow: self.dpow }
    }

    /// Exact value at `a`, `q` units. Fails when `q = ±1` meets a denominator
    /// or when the quotient leaves `Z[i]`.
    pub fn eval_units(&self, a: Unit, q: Unit) -> Result<GaussianInt> {
        let n = self.num.eval_units(a, q, Unit::ONE);
        if self.dpow == 0 {
            return Ok(n);
        }
        let z = GaussianInt::from(q) - GaussianInt::from(q.inv());
        if z.is_zero() {
            return Err(Error::DenominatorVanishes);
        }
        let mut acc = n;
        for _ in 0..self.dpow {
            acc = acc.div_exact(&z).ok_or(Error::NonIntegralQuotient)?;
        }
        Ok(acc)
    }
}

impl<'a> Add<&'a RationalInvariant> for &'a RationalInvariant {
    type Output = RationalInvariant;
    fn add(self, o: &RationalInvariant) -> RationalInvariant {
        let d = self.dpow.max(o.dpow);
        RationalInvariant::new(&self.lift(d) + &o.lift(d), d)
    }
}

impl<'a> Sub<&'a RationalInvariant> for &'a RationalInvariant {
    type Output = RationalInvariant;
    fn sub(self, o: &RationalInvariant) -> RationalInvariant {
        let d = self.dpow.max(o.dpow);
        RationalInvariant::new(&self.lift(d) - &o.lift(d), d)
    }
}

impl<'a> Mul<&'a RationalInvariant> for &'a RationalInvariant {
    type Output = RationalInvariant;
    fn mul(self, o: &RationalInvariant) -> RationalInvariant {
        RationalInvariant::new(&self.num * &o.num, self.dpow + o.dpow)
    }
}

impl Neg for &RationalInvariant {
    type Output = RationalInvariant;
    fn neg(self) -> RationalInvariant {
        RationalInvariant { num: -&self.num, dpow: self.dpow }
    }
}

forward_owned!(RationalInvariant, Add add, Sub sub, Mul mul);

impl fmt::Display for RationalInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.dpow {
            0 => write!(f, "{}", self.num),
            1 => write!(f, "({}) / (q - q^-1)", self.num),
            d => write!(f, "({}) / (q - q^-1)^{d}", self.num),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RatJson {
    terms: Vec<TermJson>,
    dpow: u32,
}

impl Serialize for RationalInvariant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RatJson { terms: self.num.to_json_terms(), dpow: self.dpow }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalInvariant {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RatJson::deserialize(d)?;
        let num = LaurentPoly::from_json_terms(raw.terms).map_err(serde::de::Error::custom)?;
        Ok(RationalInvariant::new(num, raw.dpow))
    }
}

/// A unit of `Z[i]`, stored as the exponent `k` in `i^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Unit(u8);

impl Unit {
    pub const ONE: Unit = Unit(0);
    pub const I: Unit = Unit(1);
    pub const MINUS_ONE: Unit = Unit(2);
    pub const MINUS_I: Unit = Unit(3);

    pub fn i_pow(k: i64) -> Unit {
        Unit(k.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn pow(self, k: i64) -> Unit {
        Unit::i_pow(self.0 as i64 * k)
    }

    pub fn inv(self) -> Unit {
        Unit::i_pow(-(self.0 as i64))
    }
}

impl Mul for Unit {
    type Output = Unit;
    fn mul(self, o: Unit) -> Unit {
        // units multiply by adding exponents of i
        #[allow(clippy::suspicious_arithmetic_impl)]
        Unit::i_pow(self.0 as i64 + o.0 as i64)
    }
}

/// Element of `Z[i]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        Self { re: re.into(), im: im.into() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self { re: &self.re * c, im: &self.im * c }
    }

    pub fn mul_unit(&self, u: Unit) -> Self {
        self * &GaussianInt::from(u)
    }

    pub fn div_exact(&self, d: &GaussianInt) -> Option<GaussianInt> {
        let n = d.norm();
        if n.is_zero() {
            return None;
        }
        let p = self * &d.conj();
        let (qr, rr) = p.re.div_rem(&n);
        let (qi, ri) = p.im.div_rem(&n);
        (rr.is_zero() && ri.is_zero()).then_some(GaussianInt { re: qr, im: qi })
    }

    /// `Some(k)` when this equals `m * i^k` for a positive integer `m`.
    pub fn phase(&self) -> Option<Unit> {
        match (self.re.sign(), self.im.sign()) {
            (num_bigint::Sign::Plus, num_bigint::Sign::NoSign) => Some(Unit::ONE),
            (num_bigint::Sign::NoSign, num_bigint::Sign::Plus) => Some(Unit::I),
            (num_bigint::Sign::Minus, num_bigint::Sign::NoSign) => Some(Unit::MINUS_ONE),
            (num_bigint::Sign::NoSign, num_bigint::Sign::Minus) => Some(Unit::MINUS_I),
            _ => None,
        }
    }

    /// `|x|` when `x` lies on one of the four axes.
    pub fn axis_abs(&self) -> Option<BigInt> {
        if self.re.is_zero() {
            Some(self.im.abs())
        } else if self.im.is_zero() {
            Some(self.re.abs())
        } else {
            None
        }
    }
}

impl From<Unit> for GaussianInt {
    fn from(u: Unit) -> Self {
        match u.0 {
            0 => GaussianInt::new(1, 0),
            1 => GaussianInt::new(0, 1),
            2 => GaussianInt::new(-1, 0),
            _ => GaussianInt::new(0, -1),
        }
    }
}

impl<'a> Add<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn add(self, o: &GaussianInt) -> GaussianInt {
        GaussianInt { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn sub(self, o: &GaussianInt) -> GaussianInt {
        GaussianInt { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn mul(self, o: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl AddAssign<GaussianInt> for GaussianInt {
    fn add_assign(&mut self, o: GaussianInt) {
        self.re += o.re;
        self.im += o.im;
    }
}

forward_owned!(GaussianInt, Add add, Sub sub, Mul mul);

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) if self.im.is_negative() => write!(f, "{} - {}i", self.re, -&self.im),
            _ => write!(f, "{} + {}i", self.re, self.im),
        }
    }
}
