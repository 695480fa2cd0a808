//! Crossing-change criterion: a knot `L2` obtained from a thin knot `L1` by
//! switching one crossing is thin when the phases agree, the determinant
//! goes up and the oriented smoothing `L0` is thin.

use num_bigint::BigInt;
use serde::Serialize;

use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::homfly::HomflyEngine;
use crate::invariants;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CriterionOutcome {
    /// `L2` is N-thin whenever `L1` and `L0` are.
    Implied,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionVerdict {
    /// Crossing of `L1` whose switch gives `L2`.
    pub crossing: usize,
    pub phase_equal: bool,
    pub det_increases: bool,
    pub applies: bool,
    #[serde(serialize_with = "ser_display")]
    pub det_l1: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub det_l2: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub det_l0: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub det_ls: BigInt,
    pub outcome: CriterionOutcome,
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Finds a crossing `c` of `l1` with `switch(c) = l2` and
/// `oriented_smooth(c) = l0`, up to relabelling.
pub fn related_crossing(l1: &Diagram, l2: &Diagram, l0: &Diagram) -> Option<usize> {
    let k2 = l2.canonical_key();
    let k0 = l0.canonical_key();
    (0..l1.num_crossings()).find(|&c| {
        l1.switch(c).is_ok_and(|d| d.canonical_key() == k2)
            && l1.oriented_smooth(c).is_ok_and(|d| d.canonical_key() == k0)
    })
}

pub fn criterion_crossing_change(
    engine: &HomflyEngine,
    l1: &Diagram,
    l2: &Diagram,
    l0: &Diagram,
) -> Result<CriterionVerdict> {
    if l1.is_singular() || l2.is_singular() || l1.num_components() != 1 || l2.num_components() != 1 {
        return Err(Error::NotAKnot);
    }
    let c = related_crossing(l1, l2, l0).ok_or(Error::DiagramsNotRelated)?;
    criterion_at(engine, l1, c)
}

/// The criterion for `L1 = d` and `L2 = d` with crossing `c` switched.
pub fn criterion_at(engine: &HomflyEngine, d: &Diagram, c: usize) -> Result<CriterionVerdict> {
    let s1 = invariants::summarize(engine, d)?;
    let s2 = invariants::summarize(engine, &d.switch(c)?)?;
    let s0 = invariants::summarize(engine, &d.oriented_smooth(c)?)?;
    let ss = invariants::summarize(engine, &d.make_singular(c)?)?;
    let (d1, d2, d0, ds) = (
        s1.signature.det.clone(),
        s2.signature.det.clone(),
        s0.signature.det.clone(),
        ss.signature.det.clone(),
    );
    let phase_equal = s1.signature.phase.is_some() && s1.signature.phase == s2.signature.phase;
    let det_increases = d1 < d2;
    let applies = phase_equal && det_increases;
    if applies && (ds != &d1 + &d0 || d2 != &ds + &d0) {
        return Err(Error::InternalInconsistency(format!(
            "determinant chain fails: det Ls = {ds}, det L1 = {d1}, det L0 = {d0}, det L2 = {d2}"
        )));
    }
    Ok(CriterionVerdict {
        crossing: c,
        phase_equal,
        det_increases,
        applies,
        det_l1: d1,
        det_l2: d2,
        det_l0: d0,
        det_ls: ds,
        outcome: if applies { CriterionOutcome::Implied } else { CriterionOutcome::Inconclusive },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::plat::{normalize_code, plat_from_cf, LinkOrientation};

    fn first_unknotting(e: &HomflyEngine, d: &Diagram) -> usize {
        (0..d.num_crossings())
            .find(|&c| {
                let s = invariants::summarize(e, &d.switch(c).unwrap()).unwrap();
                s.homfly.num().is_one() && s.homfly.dpow() == 0
            })
            .unwrap()
    }

    #[test]
    fn figure_eight_from_unknot() {
        let e = HomflyEngine::default();
        let f = plat_from_cf(&normalize_code(5, 2).unwrap(), LinkOrientation::Standard);
        let c = first_unknotting(&e, &f);
        let u = f.switch(c).unwrap();
        let v = criterion_crossing_change(&e, &u, &f, &u.oriented_smooth(c).unwrap()).unwrap();
        assert!(v.applies);
        assert_eq!((v.det_l1.clone(), v.det_l0.clone(), v.det_ls.clone(), v.det_l2.clone()),
            (1.into(), 2.into(), 3.into(), 5.into()));
        assert_eq!(v.outcome, CriterionOutcome::Implied);
    }

    #[test]
    fn hypotheses_fail() {
        let e = HomflyEngine::default();
        let t = plat_from_cf(&normalize_code(3, 1).unwrap(), LinkOrientation::Standard);
        let c = first_unknotting(&e, &t);
        let u = t.switch(c).unwrap();
        // unknot to trefoil: phases 1 and -1
        let v = criterion_at(&e, &u, c).unwrap();
        assert!(!v.phase_equal && !v.applies);
        assert_eq!(v.outcome, CriterionOutcome::Inconclusive);
        // figure-eight to unknot: det decreases
        let f = plat_from_cf(&normalize_code(5, 2).unwrap(), LinkOrientation::Standard);
        let c = first_unknotting(&e, &f);
        let v = criterion_at(&e, &f, c).unwrap();
        assert!(v.phase_equal && !v.det_increases && !v.applies);
    }

    #[test]
    fn unrelated_diagrams() {
        let e = HomflyEngine::default();
        let t = plat_from_cf(&normalize_code(3, 1).unwrap(), LinkOrientation::Standard);
        let f = plat_from_cf(&normalize_code(5, 2).unwrap(), LinkOrientation::Standard);
        let r = criterion_crossing_change(&e, &t, &f, &t.oriented_smooth(0).unwrap());
        assert_eq!(r.unwrap_err(), Error::DiagramsNotRelated);
    }
}
