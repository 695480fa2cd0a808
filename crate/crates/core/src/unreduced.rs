//! Unreduced sl(N) Poincaré polynomials for the positive (2, n) torus knots
//! and the figure-eight, with spectral-sequence consistency checks.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::{Exp, LaurentPoly, RationalInvariant};

/// `[N] = q^{-N+1} + q^{-N+3} + ... + q^{N-1}`.
pub fn quantum_int(n: i64) -> LaurentPoly {
    LaurentPoly::in_q((0..n.max(0)).map(|k| (1, -n + 1 + 2 * k)))
}

fn check_rank(n: i64) -> Result<()> {
    if n <= 4 {
        return Err(Error::InvalidParameter(format!("unreduced formulas need N > 4, got {n}")));
    }
    Ok(())
}

/// `q^{(n-1)(N-1)} ([N] + [N-1] q^{-1} (1 + q^{2N} t^{-1}) sum_{i=1}^{(n-1)/2} q^{4i} t^{-2i})`.
pub fn unreduced_torus2n(rank: i64, n: i64) -> Result<LaurentPoly> {
    check_rank(rank)?;
    if n < 1 || n % 2 == 0 {
        return Err(Error::InvalidParameter(format!("T(2,{n}) needs odd n >= 1")));
    }
    let sum = LaurentPoly::from_terms((1..=(n - 1) / 2).map(|i| (1, 0, 4 * i, -2 * i)));
    let pair = LaurentPoly::from_terms([(1, 0, -1, 0), (1, 0, 2 * rank - 1, -1)]);
    let tail = &(&quantum_int(rank - 1) * &pair) * &sum;
    let inner = &quantum_int(rank) + &tail;
    Ok(inner.shift(1, Exp::new(0, (n - 1) * (rank - 1), 0)))
}

/// `[N] + [N-1] (q^{2N+1} t^{-2} + q t^{-1} + q^{-1} t + q^{-2N-1} t^2)`.
pub fn unreduced_fig8(rank: i64) -> Result<LaurentPoly> {
    check_rank(rank)?;
    let wing = LaurentPoly::from_terms([
        (1, 0, 2 * rank + 1, -2),
        (1, 0, 1, -1),
        (1, 0, -1, 1),
        (1, 0, -2 * rank - 1, 2),
    ]);
    Ok(&quantum_int(rank) + &(&quantum_int(rank - 1) * &wing))
}

/// Graded dimension of the `E_1` page: `P_N [N]`.
pub fn e1_poincare(pn: &LaurentPoly, rank: i64) -> LaurentPoly {
    pn * &quantum_int(rank)
}

/// `[N] P(q^N, q)`, the Euler characteristic of the unreduced theory.
pub fn unreduced_euler(p: &RationalInvariant, rank: i64) -> Result<LaurentPoly> {
    let spec = p.substitute_a(rank);
    let poly = spec
        .as_polynomial()
        .ok_or_else(|| Error::InvalidParameter("HOMFLY of a link has a denominator".into()))?;
    Ok(&quantum_int(rank) * poly)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralReport {
    #[serde(serialize_with = "ser_display")]
    pub dim_unreduced: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub dim_e1: BigInt,
    /// `dim H_N <= dim E_1`, with even difference in every q-degree.
    pub pages_ok: bool,
    /// The `t^0` part has dimension `N`.
    pub gornik_ok: bool,
    /// Unreduced polynomial at `t = -1` equals `[N] P(q^N, q)`.
    pub euler_ok: bool,
}

impl SpectralReport {
    pub fn ok(&self) -> bool {
        self.pages_ok && self.gornik_ok && self.euler_ok
    }
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn q_graded_dims(p: &LaurentPoly) -> BTreeMap<i64, BigInt> {
    let mut out: BTreeMap<i64, BigInt> = BTreeMap::new();
    for (e, c) in p.terms() {
        *out.entry(e.q).or_default() += c;
    }
    out
}

/// Compares an unreduced polynomial with the `E_1` page built from the
/// reduced one.
pub fn spectral_checks(unreduced: &LaurentPoly, reduced: &LaurentPoly, p: &RationalInvariant, rank: i64) -> Result<SpectralReport> {
    let e1 = e1_poincare(reduced, rank);
    let (h, e) = (q_graded_dims(unreduced), q_graded_dims(&e1));
    let mut pages_ok = true;
    for j in h.keys().chain(e.keys()) {
        let diff = e.get(j).cloned().unwrap_or_default() - h.get(j).cloned().unwrap_or_default();
        if diff.is_negative() || !(&diff % 2u8).is_zero() {
            pages_ok = false;
        }
    }
    let gornik_ok = unreduced.t_slice(0).coefficient_sum() == BigInt::from(rank);
    let euler_ok = unreduced.at_t_minus_one() == unreduced_euler(p, rank)?;
    Ok(SpectralReport {
        dim_unreduced: unreduced.coefficient_sum(),
        dim_e1: e1.coefficient_sum(),
        pages_ok,
        gornik_ok,
        euler_ok,
    })
}
