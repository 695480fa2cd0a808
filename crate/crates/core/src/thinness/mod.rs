//! Alternating HOMFLY polynomials, superpolynomials and the predicted
//! reduced sl(N) Poincaré polynomials of thin knots and links.

pub mod certificate;
pub mod criterion;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::homfly::HomflyEngine;
use crate::invariants;
use crate::laurent::{Exp, GaussianInt, LaurentPoly, RationalInvariant, Unit};

/// Homological and quantum shifts of the three maps in a skein exact
/// sequence.
pub fn shift_singular_to_minus(n: i64) -> (i64, i64) {
    (1, -n)
}
pub fn shift_minus_to_zero(n: i64) -> (i64, i64) {
    (0, n - 1)
}
pub const SHIFT_ZERO_TO_SINGULAR: (i64, i64) = (0, 1);

/// Rejects `N <= 4` unless the caller opts in.
pub fn check_n(n: i64, conjectural: bool) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("N = {n} must be at least 2")));
    }
    if n <= 4 && !conjectural {
        return Err(Error::RankOutOfRange(n));
    }
    Ok(())
}

/// `c * (-1)^m * i^n`, the phase carried by the term `c a^m q^n`.
fn term_phase(e: &Exp, c: &BigInt) -> GaussianInt {
    GaussianInt::from(Unit::i_pow(2 * e.a + e.q)).scale(c)
}

/// True iff all terms `c a^m q^n` have the same phase `c (-1)^m i^n`.
pub fn is_alternating(p: &LaurentPoly) -> bool {
    let mut phase = None;
    for (e, c) in p.terms() {
        let Some(u) = term_phase(e, c).phase() else { return false };
        match phase {
            None => phase = Some(u),
            Some(v) if v != u => return false,
            _ => {}
        }
    }
    true
}

/// `sum |c_mn| a^m q^n t^{(sigma - 2m - n)/2}`.
pub fn superpolynomial(p: &LaurentPoly, sigma: i64) -> Result<LaurentPoly> {
    if !is_alternating(p) {
        return Err(Error::NotAlternating);
    }
    let mut out = LaurentPoly::zero();
    for (e, c) in p.terms() {
        let d = sigma - 2 * e.a - e.q;
        if d % 2 != 0 {
            return Err(Error::ParityViolation { m: e.a, n: e.q, sigma });
        }
        out.add_term(Exp::new(e.a, e.q, d / 2), c.abs());
    }
    Ok(out)
}

/// Every term `a^m q^n t^l` has `2l + 2m + n = expected`.
pub fn delta_homogeneous(s: &LaurentPoly, expected: i64) -> bool {
    s.terms().all(|(e, _)| 2 * e.t + 2 * e.a + e.q == expected)
}

/// Every term `q^j t^i` of a Poincaré polynomial has `2i + j = expected`
/// modulo `N - 2`.
pub fn delta_homogeneous_mod(pn: &LaurentPoly, expected: i64, n: i64) -> bool {
    pn.terms().all(|(e, _)| congruent(2 * e.t + e.q, expected, n - 2))
}

/// `x = y (mod m)`, with `m = 0` meaning equality.
pub fn congruent(x: i64, y: i64, m: i64) -> bool {
    if m == 0 {
        x == y
    } else {
        (x - y).rem_euclid(m) == 0
    }
}

/// `q^sigma (-a)^{2lk} (a q^{-1} - a^{-1} q) / (q - q^{-1})`.
pub fn q_part(sigma: i64, twice_lk: i64) -> RationalInvariant {
    let sign = if twice_lk.rem_euclid(2) == 0 { 1 } else { -1 };
    let num = LaurentPoly::from_terms([(1, 1, -1, 0), (-1, -1, 1, 0)]);
    RationalInvariant::new(num, 1).shift(sign, Exp::new(twice_lk, sigma, 0))
}

/// `q^sigma (q^N t^{-1})^{2lk} (q^{-N+2} + q^{-N+4} + ... + q^{N-2})`.
pub fn q_summand(n: i64, sigma: i64, twice_lk: i64) -> LaurentPoly {
    let base = LaurentPoly::in_q((0..n - 1).map(|k| (1, -n + 2 + 2 * k)));
    base.shift(1, Exp::new(0, sigma + n * twice_lk, -twice_lk))
}

/// Lowest and highest terms of [`q_summand`].
pub fn q_summand_ends(n: i64, sigma: i64, twice_lk: i64) -> (LaurentPoly, LaurentPoly) {
    let s = sigma + n * twice_lk;
    (LaurentPoly::monomial(1, 0, s - n + 2, -twice_lk), LaurentPoly::monomial(1, 0, s + n - 2, -twice_lk))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThinDecomposition {
    pub ptilde: LaurentPoly,
    pub sigma: i64,
    pub twice_lk: i64,
    pub has_q_part: bool,
}

/// `P~ = P - Q`, required to be a Laurent polynomial.
pub fn decompose_link(p: &RationalInvariant, sigma: i64, twice_lk: i64) -> Result<ThinDecomposition> {
    if invariants::complex_det(p)?.is_zero() {
        return Err(Error::ZeroDeterminant);
    }
    let rest = p - &q_part(sigma, twice_lk);
    let ptilde = rest.as_polynomial().ok_or(Error::FractionalRemainder)?.clone();
    Ok(ThinDecomposition { ptilde, sigma, twice_lk, has_q_part: true })
}

/// HOMFLY-side data that determines the Poincaré polynomial of a thin link.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThinData {
    pub components: usize,
    pub sigma: i64,
    pub twice_lk: i64,
    pub homfly: RationalInvariant,
    /// Superpolynomial of `P` for knots, of `P~` for two-component links.
    pub superpoly: LaurentPoly,
}

impl ThinData {
    pub fn new(components: usize, homfly: RationalInvariant, sigma: i64, twice_lk: i64) -> Result<Self> {
        let base = match components {
            1 => homfly.as_polynomial().ok_or(Error::FractionalRemainder)?.clone(),
            2 => decompose_link(&homfly, sigma, twice_lk)?.ptilde,
            _ => return Err(Error::NotATwoComponentLink),
        };
        let superpoly = superpolynomial(&base, sigma)?;
        Ok(ThinData { components, sigma, twice_lk, homfly, superpoly })
    }

    pub fn from_diagram(engine: &HomflyEngine, d: &Diagram) -> Result<Self> {
        let s = invariants::summarize(engine, d)?;
        Self::new(s.components, s.homfly, s.signature.sigma, s.twice_lk)
    }

    /// Predicted reduced Poincaré polynomial in `q`, `t`.
    pub fn poincare(&self, n: i64) -> LaurentPoly {
        let reduced = self.superpoly.substitute_a(n);
        if self.components == 2 {
            &reduced + &q_summand(n, self.sigma, self.twice_lk)
        } else {
            reduced
        }
    }

    /// `P~_N` alone (equal to `P_N` for knots).
    pub fn poincare_tilde(&self, n: i64) -> LaurentPoly {
        self.superpoly.substitute_a(n)
    }

    pub fn delta_ok(&self) -> bool {
        delta_homogeneous(&self.superpoly, self.sigma)
    }
}

pub fn poincare_thin_knot(engine: &HomflyEngine, d: &Diagram, n: i64) -> Result<LaurentPoly> {
    let t = ThinData::from_diagram(engine, d)?;
    if t.components != 1 {
        return Err(Error::NotAKnot);
    }
    Ok(t.poincare(n))
}

pub fn poincare_thin_link(engine: &HomflyEngine, d: &Diagram, n: i64) -> Result<LaurentPoly> {
    let t = ThinData::from_diagram(engine, d)?;
    if t.components != 2 {
        return Err(Error::NotATwoComponentLink);
    }
    Ok(t.poincare(n))
}

/// `P_N(q, t = -1) = P(q^N, q)`.
pub fn euler_check(pn: &LaurentPoly, p: &RationalInvariant, n: i64) -> bool {
    match p.substitute_a(n).as_polynomial() {
        Some(rhs) => &pn.at_t_minus_one() == rhs,
        None => false,
    }
}

/// `(-t)^{sigma/2} P(q^N t^{-1}, i q t^{-1/2})` for even `sigma`, computed on
/// the lattice of `t^{1/2}` and mapped back. `None` when a coefficient is
/// not real or a `t` exponent is fractional.
pub fn substitution_form(p: &LaurentPoly, sigma: i64, n: i64) -> Option<LaurentPoly> {
    if sigma % 2 != 0 {
        return None;
    }
    let sign = if (sigma / 2) % 2 == 0 { Unit::ONE } else { Unit::MINUS_ONE };
    // exponents of T = t^{1/2}
    let mut doubled = LaurentPoly::zero();
    let mut imaginary = LaurentPoly::zero();
    for (e, c) in p.terms() {
        let coeff = GaussianInt::from(sign * Unit::i_pow(e.q)).scale(c);
        let exp = Exp::new(0, n * e.a + e.q, sigma - 2 * e.a - e.q);
        doubled.add_term(exp, coeff.re.clone());
        imaginary.add_term(exp, coeff.im.clone());
    }
    if !imaginary.is_zero() || doubled.terms().any(|(e, _)| e.t % 2 != 0) {
        return None;
    }
    Some(doubled.map_exponents(|e| Exp::new(0, e.q, e.t / 2)))
}

pub fn dimension(pn: &LaurentPoly) -> BigInt {
    pn.coefficient_sum()
}

/// `det` for knots, `det + N - 2` for two-component links.
pub fn expected_dimension(det: &BigInt, components: usize, n: i64) -> BigInt {
    if components == 2 {
        det + BigInt::from(n - 2)
    } else {
        det.clone()
    }
}
