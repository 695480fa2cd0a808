//! Acceptance suite. Prints one `criterion k: PASS|FAIL` line per
//! criterion, then fails the test if any criterion failed.
//!
//! Criterion 9 reads a PD code for 11a263 from `$KNOTTHIN_11A263_PD` or
//! `tests/data/11a263.pd`; without one that part is skipped with a warning.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;

use knotthin::diagram::goeritz;
use knotthin::diagram::plat::{closed_braid, normalize_code, plat_from_cf, singular_plat, LinkOrientation};
use knotthin::diagram::{pd, Diagram};
use knotthin::homfly::{self, torus2n, HomflyEngine};
use knotthin::invariants::{self, complex_det};
use knotthin::laurent::{Exp, LaurentPoly, RationalInvariant, Unit};
use knotthin::thinness::certificate::{sweep, sweep_jobs};
use knotthin::thinness::{self, euler_check, expected_dimension, substitution_form, ThinData};
use knotthin::unreduced::{quantum_int, spectral_checks, unreduced_fig8, unreduced_torus2n};

type Outcome = Result<String, String>;
type Criterion = fn(&HomflyEngine) -> Outcome;

const BOTH: [LinkOrientation; 2] = [LinkOrientation::Standard, LinkOrientation::Reversed];

fn diagrams(pmax: i64, orientations: &[LinkOrientation]) -> Vec<(i64, i64, LinkOrientation, Diagram)> {
    sweep_jobs(pmax, orientations)
        .into_iter()
        .map(|(p, q, o)| (p, q, o, plat_from_cf(&normalize_code(p, q).unwrap(), o)))
        .collect()
}

fn knots(pmax: i64) -> Vec<(i64, i64, LinkOrientation, Diagram)> {
    diagrams(pmax, &[LinkOrientation::Standard]).into_iter().filter(|j| j.0 % 2 == 1).collect()
}

/// Runs `check` on every item in parallel and reports the first failures.
fn all<T: Sync>(items: &[T], check: impl Fn(&T) -> Result<(), String> + Sync) -> Result<usize, String> {
    let mut bad: Vec<String> = items.par_iter().filter_map(|x| check(x).err()).collect();
    if bad.is_empty() {
        Ok(items.len())
    } else {
        let n = bad.len();
        bad.truncate(3);
        Err(format!("{n} failures, e.g. {}", bad.join("; ")))
    }
}

fn lbl(p: i64, q: i64, o: LinkOrientation) -> String {
    format!("K({p},{q}) {o:?}")
}

fn c1_det_law(e: &HomflyEngine) -> Outcome {
    let mut cases: Vec<(i64, i64)> = Vec::new();
    for p in 2..=60i64 {
        for q in 1..p {
            if num_integer::gcd(p, q) == 1 {
                cases.push((p, q));
            }
        }
    }
    let n = all(&cases, |&(p, q)| {
        let d = plat_from_cf(&normalize_code(p, q).map_err(|x| x.to_string())?, LinkOrientation::Standard);
        let h = e.homfly(&d).map_err(|x| x.to_string())?;
        let det = complex_det(&h).map_err(|x| x.to_string())?.norm();
        if det == BigInt::from(p * p) {
            Ok(())
        } else {
            Err(format!("K({p},{q}): |Det|^2 = {det}"))
        }
    })?;
    Ok(format!("{n} coprime pairs, p <= 60"))
}

fn c2_euler(e: &HomflyEngine) -> Outcome {
    let ks = knots(60);
    let n = all(&ks, |(p, q, o, d)| {
        let t = ThinData::from_diagram(e, d).map_err(|x| format!("{}: {x}", lbl(*p, *q, *o)))?;
        for n in [5, 6, 7] {
            if !euler_check(&t.poincare(n), &t.homfly, n) {
                return Err(format!("{} N={n}", lbl(*p, *q, *o)));
            }
        }
        Ok(())
    })?;
    Ok(format!("{n} knots x N in {{5,6,7}}"))
}

fn c3_dimension(e: &HomflyEngine) -> Outcome {
    let ds = diagrams(60, &BOTH);
    let n = all(&ds, |(p, q, o, d)| {
        let s = invariants::summarize(e, d).map_err(|x| x.to_string())?;
        let t = ThinData::new(s.components, s.homfly, s.signature.sigma, s.twice_lk)
            .map_err(|x| format!("{}: {x}", lbl(*p, *q, *o)))?;
        for n in [5, 6, 7] {
            let dim = thinness::dimension(&t.poincare(n));
            let want = expected_dimension(&BigInt::from(*p), s.components, n);
            if dim != want || dim != expected_dimension(&s.signature.det, s.components, n) {
                return Err(format!("{} N={n}: dim {dim}, want {want}", lbl(*p, *q, *o)));
            }
        }
        Ok(())
    })?;
    Ok(format!("{n} knots and links, both orientations"))
}

fn c4_sweep(e: &HomflyEngine) -> Outcome {
    let started = Instant::now();
    let entries = sweep(e, 100, 5, &BOTH);
    let mut nodes = 0;
    let mut bad = Vec::new();
    for s in &entries {
        match (&s.certificate, &s.report) {
            (Ok(_), Some(r)) if r.ok() => nodes += r.nodes_checked,
            (Err(x), _) => bad.push(format!("{}: {x}", lbl(s.p, s.q, s.orientation))),
            (_, Some(r)) => bad.push(format!("{}: {:?}", lbl(s.p, s.q, s.orientation), r.failures.first())),
            (_, None) => bad.push(format!("{}: not verified", lbl(s.p, s.q, s.orientation))),
        }
    }
    if !bad.is_empty() {
        let n = bad.len();
        bad.truncate(3);
        return Err(format!("{n} of {} failed, e.g. {}", entries.len(), bad.join("; ")));
    }
    Ok(format!(
        "{} certificates, {nodes} nodes verified, {:.1}s",
        entries.len(),
        started.elapsed().as_secs_f64()
    ))
}

fn c5_skein(e: &HomflyEngine) -> Outcome {
    let ds = diagrams(30, &BOTH);
    let z = LaurentPoly::z();
    let mut crossings = 0;
    for (_, _, _, d) in &ds {
        crossings += d.num_crossings();
    }
    all(&ds, |(p, q, o, d)| {
        let err = |x: knotthin::Error| format!("{}: {x}", lbl(*p, *q, *o));
        for c in 0..d.num_crossings() {
            let plus = e.homfly(&d.with_sign(c, 1).map_err(err)?).map_err(err)?;
            let minus = e.homfly(&d.with_sign(c, -1).map_err(err)?).map_err(err)?;
            let zero = e.homfly(&d.oriented_smooth(c).map_err(err)?).map_err(err)?;
            let lhs = &minus.shift(1, Exp::new(1, 0, 0)) - &plus.shift(1, Exp::new(-1, 0, 0));
            if lhs != zero.mul_poly(&z) {
                return Err(format!("{} crossing {c}: skein fails", lbl(*p, *q, *o)));
            }
            // both singular expressions, recomputed from the resolutions
            let s = e.homfly(&d.make_singular(c).map_err(err)?).map_err(err)?;
            let v1 = &zero.shift(1, Exp::new(0, 1, 0)) - &minus.shift(1, Exp::new(1, 0, 0));
            let v2 = &zero.shift(1, Exp::new(0, -1, 0)) - &plus.shift(1, Exp::new(-1, 0, 0));
            if s != v1 || s != v2 {
                return Err(format!("{} crossing {c}: singular expressions differ", lbl(*p, *q, *o)));
            }
        }
        Ok(())
    })?;
    if crossings < 200 {
        return Err(format!("only {crossings} singular diagrams generated"));
    }
    Ok(format!("{crossings} crossings in {} plats, {crossings} singular diagrams", ds.len()))
}

fn c6_phase(e: &HomflyEngine) -> Outcome {
    let ds = diagrams(60, &BOTH);
    let regular = all(&ds, |(p, q, o, d)| {
        let h = e.homfly(d).map_err(|x| x.to_string())?;
        let cdet = complex_det(&h).map_err(|x| x.to_string())?;
        let g = goeritz::signature_det(d).map_err(|x| x.to_string())?;
        match cdet.phase() {
            Some(u) if u == Unit::i_pow(g.sigma) && cdet.norm() == &g.det * &g.det => Ok(()),
            _ => Err(format!("{}: Det {cdet}, sigma {}", lbl(*p, *q, *o), g.sigma)),
        }
    })?;
    // special singular links: top crossing of a canonical plat made singular
    let specials: Vec<_> = ds.iter().filter(|j| j.0 >= 2).collect();
    let singular = all(&specials, |(p, q, o, _)| {
        let word = normalize_code(*p, *q).unwrap().word();
        let ls = singular_plat(&word, *o).map_err(|x| x.to_string())?;
        let lu = ls.unoriented_smooth(0).map_err(|x| x.to_string())?;
        let ds_ = complex_det(&e.homfly(&ls).map_err(|x| x.to_string())?).map_err(|x| x.to_string())?;
        let du = complex_det(&e.homfly(&lu).map_err(|x| x.to_string())?).map_err(|x| x.to_string())?;
        let gu = goeritz::signature_det(&lu).map_err(|x| x.to_string())?;
        if ds_.norm() == du.norm() && ds_.norm() == &gu.det * &gu.det {
            Ok(())
        } else {
            Err(format!("{}: det Ls^2 {}, det Lu^2 {}", lbl(*p, *q, *o), ds_.norm(), du.norm()))
        }
    })?;
    Ok(format!("{regular} regular links, {singular} special singular links"))
}

fn c7_twist(e: &HomflyEngine) -> Outcome {
    let ds = diagrams(30, &BOTH);
    let twisted = std::sync::atomic::AtomicUsize::new(0);
    let with_lk = std::sync::atomic::AtomicUsize::new(0);
    all(&ds, |(p, q, o, d)| {
        let err = |x: knotthin::Error| format!("{}: {x}", lbl(*p, *q, *o));
        for c in 0..d.num_crossings() {
            let s = d.make_singular(c).map_err(err)?;
            let base = invariants::summarize(e, &s).map_err(err)?;
            let minus = s.add_twist(-1).map_err(err)?;
            let hm = e.homfly(&minus).map_err(err)?;
            // -a^{-1} q^{-1} P(L)
            if hm != homfly::twist(&base.homfly) || hm != base.homfly.shift(-1, Exp::new(-1, -1, 0)) {
                return Err(format!("{} crossing {c}: twisted HOMFLY", lbl(*p, *q, *o)));
            }
            twisted.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            // lk is only defined when the singular link resolves to two components
            if base.components != 2 {
                continue;
            }
            with_lk.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            for sign in [-1, 1] {
                let node = invariants::summarize(e, &s.add_twist(sign).map_err(err)?).map_err(err)?;
                let tw = node.twice_lk - base.twice_lk;
                if tw != sign as i64 {
                    return Err(format!("{} crossing {c}: 2lk moved by {tw}", lbl(*p, *q, *o)));
                }
                if node.homfly != invariants::twist_homfly(&base.homfly, tw)
                    || node.signature != invariants::twist_signature(&base.signature, tw)
                {
                    return Err(format!("{} crossing {c}: twist bookkeeping, sign {sign}", lbl(*p, *q, *o)));
                }
            }
        }
        Ok(())
    })?;
    Ok(format!(
        "{} twisted singular diagrams, lk/sigma bookkeeping on the {} with two components",
        twisted.into_inner(),
        with_lk.into_inner()
    ))
}

fn c8_unreduced(e: &HomflyEngine) -> Outcome {
    let mut checked = 0;
    for rank in [5i64, 6, 7] {
        for n in [3i64, 5, 7, 9, 11] {
            let h = unreduced_torus2n(rank, n).map_err(|x| x.to_string())?;
            if h.coefficient_sum() != BigInt::from(rank + (rank - 1) * (n - 1)) {
                return Err(format!("T(2,{n}) N={rank}: dimension {}", h.coefficient_sum()));
            }
            if h.t_slice(0) != quantum_int(rank).shift(1, Exp::new(0, (n - 1) * (rank - 1), 0)) {
                return Err(format!("T(2,{n}) N={rank}: t^0 slice"));
            }
            let d = plat_from_cf(&normalize_code(n, 1).unwrap(), LinkOrientation::Standard);
            let p = e.homfly(&d).map_err(|x| x.to_string())?;
            let reduced = thinness::poincare_thin_knot(e, &d, rank).map_err(|x| x.to_string())?;
            let r = spectral_checks(&h, &reduced, &p, rank).map_err(|x| x.to_string())?;
            if !r.ok() {
                return Err(format!("T(2,{n}) N={rank}: {r:?}"));
            }
            checked += 1;
        }
        let f = unreduced_fig8(rank).map_err(|x| x.to_string())?;
        let d = plat_from_cf(&normalize_code(5, 2).unwrap(), LinkOrientation::Standard);
        let p = e.homfly(&d).map_err(|x| x.to_string())?;
        let reduced = thinness::poincare_thin_knot(e, &d, rank).map_err(|x| x.to_string())?;
        let r = spectral_checks(&f, &reduced, &p, rank).map_err(|x| x.to_string())?;
        if f.coefficient_sum() != BigInt::from(5 * rank - 4) || f.t_slice(0) != quantum_int(rank) || !r.ok() {
            return Err(format!("figure-eight N={rank}: {r:?}"));
        }
        // the displayed polynomial, expanded independently term by term
        let mut want = quantum_int(rank);
        for k in 0..rank - 1 {
            let j = -rank + 2 + 2 * k;
            for (dq, t) in [(2 * rank + 1, -2), (1, -1), (-1, 1), (-2 * rank - 1, 2)] {
                want.add_term(Exp::new(0, j + dq, t), BigInt::from(1));
            }
        }
        if f != want {
            return Err(format!("figure-eight N={rank}: expansion differs"));
        }
        checked += 1;
    }
    Ok(format!("{checked} closed forms"))
}

/// HOMFLY of 11a263 as displayed, in the `a`, `q` convention used here.
fn homfly_11a263() -> LaurentPoly {
    let rows: [(i64, &[(i64, i64)]); 4] = [
        (-8, &[(1, -8), (-1, -6), (4, -4), (-3, -2), (6, 0), (-3, 2), (4, 4), (-1, 6), (1, 8)]),
        (-10, &[(1, -8), (-4, -6), (4, -4), (-9, -2), (5, 0), (-9, 2), (4, 4), (-4, 6), (1, 8)]),
        (-12, &[(-1, -6), (3, -4), (-2, -2), (5, 0), (-2, 2), (3, 4), (-1, 6)]),
        (-14, &[(-1, 0)]),
    ];
    LaurentPoly::from_terms(rows.iter().flat_map(|(a, ts)| ts.iter().map(move |&(c, q)| (c, *a, q, 0))))
}

fn pd_11a263() -> Option<(PathBuf, String)> {
    let path = std::env::var_os("KNOTTHIN_11A263_PD")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/11a263.pd"));
    std::fs::read_to_string(&path).ok().map(|s| (path, s))
}

fn c9_non_alternating(e: &HomflyEngine) -> Outcome {
    for n in [1i64, 3, 5, 7, 9, 11] {
        let closed = torus2n(n).map_err(|x| x.to_string())?;
        let plat = e
            .homfly(&plat_from_cf(&normalize_code(n, 1).unwrap(), LinkOrientation::Standard))
            .map_err(|x| x.to_string())?;
        let mirror = e
            .homfly(&plat_from_cf(&normalize_code(n, n - 1).unwrap(), LinkOrientation::Standard))
            .map_err(|x| x.to_string())?;
        let braid = e.homfly(&closed_braid(2, &vec![1; n as usize]).unwrap()).map_err(|x| x.to_string())?;
        let closed = RationalInvariant::poly(closed);
        if plat != closed || braid != closed || mirror != closed.mirror() {
            return Err(format!("T(2,{n}): plat {plat}, braid {braid}, closed form {closed}"));
        }
    }
    let shown = homfly_11a263();
    if thinness::is_alternating(&shown) {
        return Err("displayed 11a263 polynomial reported alternating".into());
    }
    let det = complex_det(&RationalInvariant::poly(shown.clone())).map_err(|x| x.to_string())?;
    if det.norm() != BigInt::from(81 * 81) {
        return Err(format!("displayed 11a263 polynomial has Det {det}"));
    }
    let Some((path, src)) = pd_11a263() else {
        eprintln!(
            "warning: no PD code for 11a263 (set KNOTTHIN_11A263_PD or add tests/data/11a263.pd); \
             skipping the data-ingestion part of criterion 9"
        );
        return Ok("T(2,n) conventions for n <= 11; 11a263 PD check SKIPPED (no PD file)".into());
    };
    let d = pd::parse(&src).map_err(|x| format!("{}: {x}", path.display()))?;
    let h = e.homfly(&d).map_err(|x| x.to_string())?;
    let h = h.as_polynomial().ok_or("11a263 HOMFLY has a denominator")?;
    let chirality = if *h == shown {
        "as given"
    } else if h.mirror() == shown {
        "after mirroring the input"
    } else {
        return Err(format!("11a263 HOMFLY differs: {h}"));
    };
    if thinness::is_alternating(h) {
        return Err("computed 11a263 HOMFLY reported alternating".into());
    }
    let shown_path = path.strip_prefix(env!("CARGO_MANIFEST_DIR")).unwrap_or(&path);
    Ok(format!("T(2,n) conventions for n <= 11; 11a263 from {} matches {chirality}", shown_path.display()))
}

fn c10_formulations(e: &HomflyEngine) -> Outcome {
    let ks = knots(30);
    let n = all(&ks, |(p, q, o, d)| {
        let t = ThinData::from_diagram(e, d).map_err(|x| x.to_string())?;
        let h = t.homfly.as_polynomial().unwrap();
        for n in [5, 6, 7] {
            if substitution_form(h, t.sigma, n).as_ref() != Some(&t.poincare(n)) {
                return Err(format!("{} N={n}", lbl(*p, *q, *o)));
            }
        }
        Ok(())
    })?;
    Ok(format!("{n} knots x N in {{5,6,7}}"))
}

#[test]
fn acceptance() {
    let engine = HomflyEngine::new(u64::MAX);
    let criteria: [(usize, Criterion); 10] = [
        (1, c1_det_law),
        (2, c2_euler),
        (3, c3_dimension),
        (4, c4_sweep),
        (5, c5_skein),
        (6, c6_phase),
        (7, c7_twist),
        (8, c8_unreduced),
        (9, c9_non_alternating),
        (10, c10_formulations),
    ];
    // written to the handle directly so the lines survive output capture
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    let mut failed = Vec::new();
    for (k, f) in criteria {
        match f(&engine) {
            Ok(detail) => writeln!(out, "criterion {k}: PASS ({detail})").unwrap(),
            Err(detail) => {
                writeln!(out, "criterion {k}: FAIL ({detail})").unwrap();
                failed.push(k);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
