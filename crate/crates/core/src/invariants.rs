//! Complex determinant, signature and linking data of (singular) links.

use num_bigint::BigInt;
use serde::Serialize;

use crate::diagram::goeritz;
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::homfly::HomflyEngine;
use crate::laurent::{GaussianInt, RationalInvariant, Unit};

/// `Det(L) = P(L)(a = -1, q = i)`.
pub fn complex_det(p: &RationalInvariant) -> Result<GaussianInt> {
    p.eval_units(Unit::MINUS_ONE, Unit::I)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignatureData {
    #[serde(serialize_with = "ser_display")]
    pub cdet: GaussianInt,
    #[serde(serialize_with = "ser_display")]
    pub det: BigInt,
    /// `k` with `Det / det = i^k`, when `det != 0`.
    #[serde(rename = "phase_pow")]
    pub phase: Option<u8>,
    pub sigma: i64,
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Signature of a classical link, checked against the phase of `Det`.
pub fn signature_regular(d: &Diagram, p: &RationalInvariant) -> Result<SignatureData> {
    let cdet = complex_det(p)?;
    let g = goeritz::signature_det(d)?;
    let phase = cdet.phase().map(|u| u.exponent());
    let det = cdet.axis_abs().ok_or_else(|| {
        Error::InternalInconsistency(format!("Det = {cdet} is off the axes"))
    })?;
    if det != g.det {
        return Err(Error::InternalInconsistency(format!("|Det| = {det} but Goeritz det = {}", g.det)));
    }
    if let Some(k) = phase {
        if Unit::i_pow(g.sigma) != Unit::i_pow(k as i64) {
            return Err(Error::PhaseMismatch { phase: k, sigma: g.sigma });
        }
    }
    Ok(SignatureData { cdet, det, phase, sigma: g.sigma })
}

/// Signature of a singular link: the unique `sigma` with `i^sigma` equal to
/// the phase of `Det` and `|sigma - sigma(L0)| <= 1`.
pub fn signature_singular(d: &Diagram, p: &RationalInvariant) -> Result<SignatureData> {
    let s = d
        .singular_crossing()
        .ok_or_else(|| Error::InvalidParameter("diagram has no singular crossing".into()))?;
    let cdet = complex_det(p)?;
    if cdet.is_zero() {
        return Err(Error::ZeroDeterminant);
    }
    let sigma0 = goeritz::signature_det(&d.oriented_smooth(s)?)?.sigma;
    let Some(u) = cdet.phase() else {
        return Err(Error::NoAdmissibleSigma { phase: u8::MAX, sigma0 });
    };
    let sigma = (sigma0 - 1..=sigma0 + 1)
        .find(|&k| Unit::i_pow(k) == u)
        .ok_or(Error::NoAdmissibleSigma { phase: u.exponent(), sigma0 })?;
    let det = cdet.axis_abs().expect("unit phase");
    Ok(SignatureData { cdet, det, phase: Some(u.exponent()), sigma })
}

pub fn signature(d: &Diagram, p: &RationalInvariant) -> Result<SignatureData> {
    if d.is_singular() {
        signature_singular(d, p)
    } else {
        signature_regular(d, p)
    }
}

/// Expected invariants of a diagram obtained from `child` by `tw` twists at
/// the singular crossing, `tw = 2lk(node) - 2lk(child)`.
pub fn twist_homfly(child: &RationalInvariant, tw: i64) -> RationalInvariant {
    let mut v = child.clone();
    if tw >= 0 {
        for _ in 0..tw {
            v = v.shift(-1, crate::laurent::Exp::new(1, 1, 0));
        }
    } else {
        for _ in 0..-tw {
            v = crate::homfly::twist(&v);
        }
    }
    v
}

pub fn twist_signature(child: &SignatureData, tw: i64) -> SignatureData {
    SignatureData {
        cdet: child.cdet.mul_unit(Unit::i_pow(tw)),
        det: child.det.clone(),
        phase: child.phase.map(|k| Unit::i_pow(k as i64 + tw).exponent()),
        sigma: child.sigma + tw,
    }
}

/// Everything the CLI reports for one diagram.
#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub components: usize,
    pub singular: bool,
    pub i_parity: u8,
    pub twice_lk: i64,
    pub homfly: RationalInvariant,
    #[serde(flatten)]
    pub signature: SignatureData,
}

pub fn summarize(engine: &HomflyEngine, d: &Diagram) -> Result<Summary> {
    let homfly = engine.homfly(d)?;
    let signature = signature(d, &homfly)?;
    let class = d.link_class();
    Ok(Summary {
        components: class.num_components,
        singular: d.is_singular(),
        i_parity: class.i_parity,
        twice_lk: class.twice_lk,
        homfly,
        signature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::pd;
    use crate::diagram::plat::{normalize_code, plat_from_cf, plat_from_word, LinkOrientation};
    use num_integer::Integer;

    #[test]
    fn examples() {
        let e = HomflyEngine::default();
        let t = plat_from_word(&[3], LinkOrientation::Standard);
        let s = summarize(&e, &t).unwrap();
        assert_eq!((s.signature.sigma, s.signature.det.clone()), (2, BigInt::from(3)));
        for o in [LinkOrientation::Standard, LinkOrientation::Reversed] {
            let h = summarize(&e, &plat_from_word(&[2], o)).unwrap();
            assert_eq!(h.components, 2);
            assert_eq!(h.twice_lk.abs(), 2);
            assert_eq!(h.signature.sigma, h.twice_lk / 2);
        }
        let theta = pd::parse("S[1,2,2,1]").unwrap();
        let s = summarize(&e, &theta).unwrap();
        assert_eq!(s.signature.cdet, GaussianInt::new(1, 0));
        assert_eq!((s.signature.sigma, s.twice_lk), (0, 0));
        let u2 = plat_from_word(&[0], LinkOrientation::Standard);
        let s = summarize(&e, &u2).unwrap();
        assert_eq!((s.signature.det.clone(), s.signature.phase, s.signature.sigma), (BigInt::from(0), None, 0));
    }

    #[test]
    fn phase_matches_signature_for_two_bridge() {
        let e = HomflyEngine::default();
        for p in 2..30i64 {
            for q in 1..p {
                if p.gcd(&q) != 1 {
                    continue;
                }
                for o in [LinkOrientation::Standard, LinkOrientation::Reversed] {
                    let d = plat_from_cf(&normalize_code(p, q).unwrap(), o);
                    let s = summarize(&e, &d).unwrap();
                    assert_eq!(s.signature.det, BigInt::from(p));
                    let sm = summarize(&e, &d.mirror()).unwrap();
                    assert_eq!(sm.signature.sigma, -s.signature.sigma);
                    let sing = d.make_singular(0).unwrap();
                    let ss = summarize(&e, &sing).unwrap();
                    let dm = summarize(&e, &d.switch(0).unwrap()).unwrap();
                    let d0 = summarize(&e, &d.oriented_smooth(0).unwrap()).unwrap();
                    let (plus, minus) = if d.crossings()[0].sign() > 0 { (&s, &dm) } else { (&dm, &s) };
                    let i = GaussianInt::from(Unit::I);
                    let mi = GaussianInt::from(Unit::MINUS_I);
                    assert_eq!(ss.signature.cdet, &(&i * &d0.signature.cdet) + &minus.signature.cdet);
                    assert_eq!(ss.signature.cdet, &(&mi * &d0.signature.cdet) + &plus.signature.cdet);
                }
            }
        }
    }

    #[test]
    fn twist_bookkeeping_matches_diagrams() {
        let e = HomflyEngine::default();
        for w in [vec![3i64], vec![2, 1, 1], vec![1, 2, 3], vec![4, 1, 2]] {
            for o in [LinkOrientation::Standard, LinkOrientation::Reversed] {
                let s = plat_from_word(&w, o).make_singular(0).unwrap();
                let Ok(child) = summarize(&e, &s) else { continue };
                for sign in [-1, 1] {
                    let node = s.add_twist(sign).unwrap();
                    let n = summarize(&e, &node).unwrap();
                    let tw = n.twice_lk - child.twice_lk;
                    assert_eq!(tw, sign as i64, "{w:?}");
                    assert_eq!(n.homfly, twist_homfly(&child.homfly, tw));
                    assert_eq!(n.signature, twist_signature(&child.signature, tw));
                }
            }
        }
    }
}
