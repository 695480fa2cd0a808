//! HOMFLY polynomial by descending skein resolution.
//!
//! Normalization: `a P(L-) - a^{-1} P(L+) = z P(L0)`, `z = q - q^{-1}`,
//! `P(unknot) = 1`. Singular crossings are resolved by
//! `P(L) = q P(L0) - a P(L-) = q^{-1} P(L0) - a^{-1} P(L+)`.

use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;

use crate::cache::DiskCache;
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::laurent::{Exp, LaurentPoly, RationalInvariant};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

/// Memoizing HOMFLY evaluator, safe to share between threads.
pub struct HomflyEngine {
    memo: DashMap<Vec<u8>, RationalInvariant>,
    budget: u64,
    expanded: AtomicU64,
    disk: Option<DiskCache>,
}

impl Default for HomflyEngine {
    fn default() -> Self {
        Self::new(DEFAULT_NODE_BUDGET)
    }
}

impl HomflyEngine {
    /// `budget` bounds the number of skein nodes expanded over the engine's
    /// lifetime.
    pub fn new(budget: u64) -> Self {
        HomflyEngine { memo: DashMap::new(), budget, expanded: AtomicU64::new(0), disk: None }
    }

    pub fn with_disk_cache(mut self, disk: DiskCache) -> Self {
        self.disk = Some(disk);
        self
    }

    pub fn nodes_expanded(&self) -> u64 {
        self.expanded.load(Ordering::Relaxed)
    }

    pub fn homfly(&self, d: &Diagram) -> Result<RationalInvariant> {
        let key = d.canonical_key();
        if let Some(disk) = &self.disk {
            if let Some(v) = disk.get(&key) {
                return Ok(v);
            }
        }
        let v = self.eval(d)?;
        if let Some(disk) = &self.disk {
            // a failed write only loses the cache entry
            let _ = disk.put(&key, &v);
        }
        Ok(v)
    }

    fn eval(&self, d: &Diagram) -> Result<RationalInvariant> {
        let d = d.simplified();
        let pieces = d.pieces();
        let n_parts = pieces.len() + d.free_loops() as usize;
        let mut acc = RationalInvariant::unlink_factor().pow(n_parts.saturating_sub(1) as u32);
        for p in &pieces {
            acc = &acc * &self.eval_piece(p)?;
        }
        Ok(acc)
    }

    fn eval_piece(&self, d: &Diagram) -> Result<RationalInvariant> {
        let key = d.canonical_key();
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        if self.expanded.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Error::ResourceLimit(self.budget));
        }
        let v = if let Some(s) = d.singular_crossing() {
            self.eval_singular(d, s)?
        } else if let Some(c) = d.first_ascending_crossing() {
            let sign = d.crossings()[c].sign();
            let sw = self.eval(&d.switch(c)?)?;
            let zero = self.eval(&d.oriented_smooth(c)?)?;
            let zero = zero.mul_poly(&LaurentPoly::z());
            if sign > 0 {
                &sw.shift(1, Exp::new(2, 0, 0)) - &zero.shift(1, Exp::new(1, 0, 0))
            } else {
                &sw.shift(1, Exp::new(-2, 0, 0)) + &zero.shift(1, Exp::new(-1, 0, 0))
            }
        } else {
            // descending diagram: unlink of its components
            RationalInvariant::unlink_factor().pow(d.num_components() as u32 - 1)
        };
        self.memo.insert(key, v.clone());
        Ok(v)
    }

    fn eval_singular(&self, d: &Diagram, s: usize) -> Result<RationalInvariant> {
        let zero = self.eval(&d.oriented_smooth(s)?)?;
        let minus = self.eval(&d.with_sign(s, -1)?)?;
        let plus = self.eval(&d.with_sign(s, 1)?)?;
        let v1 = &zero.shift(1, Exp::new(0, 1, 0)) - &minus.shift(1, Exp::new(1, 0, 0));
        let v2 = &zero.shift(1, Exp::new(0, -1, 0)) - &plus.shift(1, Exp::new(-1, 0, 0));
        if v1 != v2 {
            return Err(Error::InternalInconsistency(format!(
                "singular skein expressions differ: {v1} vs {v2}"
            )));
        }
        Ok(v1)
    }
}

/// `P(L^-)` where `L^-` adds a negative twist at the singular crossing.
pub fn twist(p: &RationalInvariant) -> RationalInvariant {
    p.shift(-1, Exp::new(-1, -1, 0))
}

/// Closed form for the torus link `T(2, n)` with positive crossings.
pub fn torus2n(n: i64) -> Result<LaurentPoly> {
    if n < 1 || n % 2 == 0 {
        return Err(Error::InvalidParameter(format!("T(2,{n}) closed form needs odd n >= 1")));
    }
    let top = LaurentPoly::in_q((0..=(n - 1) / 2).map(|i| (1, 4 * i)));
    let bottom = LaurentPoly::in_q((0..=(n - 3) / 2).map(|i| (1, 4 * i)));
    let inner = &top - &bottom.shift(1, Exp::new(2, 2, 0));
    Ok(inner.shift(1, Exp::new(n - 1, 1 - n, 0)))
}

/// Jones polynomial in `q` (the `a = q^2` specialization).
pub fn jones(p: &RationalInvariant) -> RationalInvariant {
    p.substitute_a(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::plat::{closed_braid, normalize_code, plat_from_cf, plat_from_word, LinkOrientation};
    use crate::diagram::pd;

    fn poly(v: &RationalInvariant) -> LaurentPoly {
        v.as_polynomial().expect("polynomial").clone()
    }

    #[test]
    fn trefoil() {
        let e = HomflyEngine::default();
        let t = e.homfly(&plat_from_word(&[3], LinkOrientation::Standard)).unwrap();
        assert_eq!(poly(&t), LaurentPoly::from_terms([(1, 2, -2, 0), (1, 2, 2, 0), (-1, 4, 0, 0)]));
        let m = e.homfly(&plat_from_word(&[3], LinkOrientation::Standard).mirror()).unwrap();
        assert_eq!(m, t.mirror());
    }

    #[test]
    fn torus_closed_form() {
        let e = HomflyEngine::default();
        for n in [1i64, 3, 5, 7, 9, 11] {
            let d = plat_from_word(&[n], LinkOrientation::Standard);
            assert_eq!(poly(&e.homfly(&d).unwrap()), torus2n(n).unwrap(), "n={n}");
        }
        assert!(torus2n(4).is_err());
    }

    #[test]
    fn figure_eight_and_unlinks() {
        let e = HomflyEngine::default();
        let f = plat_from_cf(&normalize_code(5, 2).unwrap(), LinkOrientation::Standard);
        let want = LaurentPoly::from_terms([(1, 2, 0, 0), (1, -2, 0, 0), (1, 0, 0, 0), (-1, 0, 2, 0), (-1, 0, -2, 0)]);
        assert_eq!(poly(&e.homfly(&f).unwrap()), want);
        assert_eq!(e.homfly(&Diagram::unlink(3)).unwrap(), RationalInvariant::unlink_factor().pow(2));
        let u2 = plat_from_word(&[0], LinkOrientation::Standard);
        assert_eq!(e.homfly(&u2).unwrap(), RationalInvariant::unlink_factor());
    }

    #[test]
    fn theta_curve() {
        let e = HomflyEngine::default();
        let theta = pd::parse("S[1,2,2,1]").unwrap();
        let want = RationalInvariant::new(LaurentPoly::from_terms([(1, 1, -1, 0), (-1, -1, 1, 0)]), 1);
        assert_eq!(e.homfly(&theta).unwrap(), want);
    }

    #[test]
    fn twist_rule() {
        let e = HomflyEngine::default();
        for w in [vec![3i64], vec![2, 1, 1], vec![1, 2, 3]] {
            for o in [LinkOrientation::Standard, LinkOrientation::Reversed] {
                let s = plat_from_word(&w, o).make_singular(0).unwrap();
                let p = e.homfly(&s).unwrap();
                let tw = e.homfly(&s.add_twist(-1).unwrap()).unwrap();
                assert_eq!(tw, twist(&p), "{w:?}");
            }
        }
    }

    #[test]
    fn torus_3_4_jones() {
        let e = HomflyEngine::default();
        let d = closed_braid(3, &[1, 2, 1, 2, 1, 2, 1, 2]).unwrap();
        let j = jones(&e.homfly(&d).unwrap());
        assert_eq!(poly(&j), LaurentPoly::in_q([(1, 6), (1, 10), (-1, 16)]));
    }

    #[test]
    fn budget_exhaustion() {
        let e = HomflyEngine::new(2);
        let d = plat_from_cf(&normalize_code(29, 12).unwrap(), LinkOrientation::Standard);
        assert!(matches!(e.homfly(&d), Err(Error::ResourceLimit(2))));
    }
}
