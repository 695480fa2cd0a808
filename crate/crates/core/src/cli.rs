//! Command-line front end for the `knotthin` binary.
//!
//! Exit codes: 0 success, 1 I/O and other failures, 2 invalid input,
//! 3 node budget exhausted, 4 `N <= 4` without `--conjectural`, 5 a checked
//! identity or certificate failed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::cache::{DiskCache, CACHE_DIR_ENV};
use crate::diagram::plat::{code_of_word, normalize_code, plat_from_cf, LinkOrientation, TwoBridgeCode};
use crate::diagram::{pd, Diagram};
use crate::error::Error;
use crate::homfly::{self, HomflyEngine, DEFAULT_NODE_BUDGET};
use crate::invariants::{self, Summary};
use crate::laurent::{Exp, LaurentPoly, RationalInvariant};
use crate::thinness::certificate::{sweep_jobs, CertNode, Certifier, Report, Verifier};
use crate::thinness::{self, ThinData};
use crate::unreduced;

#[derive(Parser, Debug)]
#[command(name = "knotthin", version, about = "HOMFLY, signatures and sl(N) thinness of two-bridge links")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory for the persistent HOMFLY cache.
    #[arg(long, global = true, env = CACHE_DIR_ENV)]
    pub cache_dir: Option<PathBuf>,
    /// Maximum number of skein nodes expanded per run.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    pub node_budget: u64,
    /// Re-check the identities behind every reported value.
    #[arg(long, global = true)]
    pub verify: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrientationArg {
    Standard,
    Reversed,
}

impl From<OrientationArg> for LinkOrientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::Standard => LinkOrientation::Standard,
            OrientationArg::Reversed => LinkOrientation::Reversed,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// HOMFLY, Jones, determinant, signature and linking data.
    Invariants {
        #[command(flatten)]
        link: LinkArgs,
    },
    /// Predicted reduced (and closed-form unreduced) sl(N) Poincaré polynomials.
    Hkr {
        #[command(flatten)]
        link: LinkArgs,
        /// Sweep all coprime (p, q) with p <= PMAX instead of a single link.
        #[arg(long, value_name = "PMAX", conflicts_with_all = ["pq", "cf", "pd"])]
        sweep: Option<i64>,
        /// Rank of sl(N); results are theorem-backed for N > 4.
        #[arg(long = "N", value_name = "N")]
        rank: i64,
        /// Also report the unreduced polynomial where a closed form exists.
        #[arg(long)]
        unreduced: bool,
        /// Allow N <= 4, where the results are conjectural.
        #[arg(long)]
        conjectural: bool,
    },
    /// Build and verify thinness certificates.
    Certify {
        #[command(flatten)]
        link: LinkArgs,
        #[arg(long, value_name = "PMAX", conflicts_with_all = ["pq", "cf", "pd"])]
        sweep: Option<i64>,
        /// Rank of sl(N); results are theorem-backed for N > 4.
        #[arg(long = "N", value_name = "N")]
        rank: i64,
        #[arg(long)]
        conjectural: bool,
        /// Directory receiving one certificate JSON file per link.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Verify certificate JSON files produced by `certify`.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Rank of sl(N); results are theorem-backed for N > 4.
        #[arg(long = "N", value_name = "N")]
        rank: i64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct LinkArgs {
    /// Two-bridge link K(p, q).
    #[arg(long, num_args = 2, value_names = ["P", "Q"], allow_negative_numbers = true)]
    pub pq: Option<Vec<i64>>,
    /// Two-bridge link with continued fraction a1,a2,...
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "pq")]
    pub cf: Option<Vec<i64>>,
    /// File of PD codes, one diagram per line.
    #[arg(long, conflicts_with_all = ["pq", "cf"])]
    pub pd: Option<PathBuf>,
    /// Orientation of the second component of two-bridge links.
    #[arg(long, value_enum, default_value_t = OrientationArg::Standard)]
    pub orientation: OrientationArg,
}

/// What a report row is about.
#[derive(Clone, Debug, Serialize)]
pub struct LinkLabel {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cf: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orientation: Option<LinkOrientation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pd: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
}

struct Target {
    label: LinkLabel,
    code: Option<TwoBridgeCode>,
    orientation: LinkOrientation,
    diagram: Diagram,
}

fn code_target(code: TwoBridgeCode, orientation: LinkOrientation) -> Target {
    let orientation = if code.p % 2 == 1 { LinkOrientation::Standard } else { orientation };
    Target {
        label: LinkLabel {
            p: Some(code.p),
            q: Some(code.q),
            cf: Some(code.cf.clone()),
            orientation: Some(orientation),
            pd: None,
            index: None,
        },
        diagram: plat_from_cf(&code, orientation),
        code: Some(code),
        orientation,
    }
}

fn targets(link: &LinkArgs) -> anyhow::Result<Vec<Target>> {
    let o = link.orientation.into();
    if let Some(pq) = &link.pq {
        return Ok(vec![code_target(normalize_code(pq[0], pq[1])?, o)]);
    }
    if let Some(cf) = &link.cf {
        if cf.is_empty() {
            return Err(Error::InvalidParameter("empty continued fraction".into()).into());
        }
        return Ok(vec![code_target(code_of_word(cf)?, o)]);
    }
    if let Some(path) = &link.pd {
        let src = read_input(path)?;
        let ds = pd::parse_many(&src)?;
        if ds.is_empty() {
            return Err(Error::Parse(format!("{} contains no diagrams", path.display())).into());
        }
        return Ok(ds
            .into_iter()
            .enumerate()
            .map(|(i, d)| Target {
                label: LinkLabel {
                    p: None,
                    q: None,
                    cf: None,
                    orientation: None,
                    pd: Some(path.display().to_string()),
                    index: Some(i),
                },
                code: None,
                orientation: LinkOrientation::Standard,
                diagram: d,
            })
            .collect());
    }
    Err(Error::InvalidParameter("specify a link with --pq, --cf or --pd".into()).into())
}

fn sweep_targets(pmax: i64, orientation: LinkOrientation) -> anyhow::Result<Vec<Target>> {
    if pmax < 1 {
        return Err(Error::InvalidParameter(format!("sweep bound {pmax} must be positive")).into());
    }
    Ok(sweep_jobs(pmax, &[orientation])
        .into_iter()
        .map(|(p, q, o)| {
            let mut t = code_target(normalize_code(p, q).expect("coprime"), o);
            t.label.p = Some(p);
            t.label.q = Some(q);
            t
        })
        .collect())
}

/// Exit code for an error raised while running a command.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if let Some(e) = err.downcast_ref::<Error>() {
        return e.code();
    }
    if let Some(CheckFailed(_)) = err.downcast_ref::<CheckFailed>() {
        return 5;
    }
    1
}

/// Reads a user-supplied file; failures count as invalid input.
fn read_input(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidParameter(format!("reading {}: {e}", path.display())).into())
}

/// A report was written but some identity or certificate check failed.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct CheckFailed(pub String);

/// Parses `args`, runs the command writing to `out`, and returns the exit
/// code. Errors are reported on stderr.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("knotthin: {e:#}");
            exit_code(&e)
        }
    }
}

fn engine(cli: &Cli) -> anyhow::Result<HomflyEngine> {
    let e = HomflyEngine::new(cli.node_budget);
    Ok(match &cli.cache_dir {
        Some(dir) => e.with_disk_cache(DiskCache::open(dir).with_context(|| format!("opening cache {}", dir.display()))?),
        None => e,
    })
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> anyhow::Result<()> {
    let engine = engine(cli)?;
    match &cli.command {
        Command::Invariants { link } => {
            let ts = targets(link)?;
            let rows = ts.iter().map(|t| invariants_report(&engine, t, cli.verify)).collect::<anyhow::Result<Vec<_>>>()?;
            emit(out, cli.format, &rows, ts.len() == 1, invariants_csv)?;
            let bad: Vec<_> = rows.iter().filter(|r| r.checks.as_ref().is_some_and(|c| !c.ok())).collect();
            if !bad.is_empty() {
                return Err(CheckFailed(format!("{} report(s) failed verification", bad.len())).into());
            }
        }
        Command::Hkr { link, sweep, rank, unreduced, conjectural } => {
            thinness::check_n(*rank, *conjectural)?;
            let (ts, single) = match sweep {
                Some(pmax) => (sweep_targets(*pmax, link.orientation.into())?, false),
                None => {
                    let ts = targets(link)?;
                    let single = ts.len() == 1;
                    (ts, single)
                }
            };
            let opts = HkrOptions { rank: *rank, unreduced: *unreduced, conjectural: *conjectural, verify: cli.verify };
            let rows = ts
                .par_iter()
                .map(|t| hkr_report(&engine, t, &opts))
                .collect::<Vec<_>>()
                .into_iter()
                .collect::<anyhow::Result<Vec<_>>>()?;
            emit(out, cli.format, &rows, single, hkr_csv)?;
            let bad = rows.iter().filter(|r| r.failed_checks()).count();
            if bad > 0 {
                return Err(CheckFailed(format!("{bad} link(s) failed a theorem-backed check")).into());
            }
        }
        Command::Certify { link, sweep, rank, conjectural, out: dir } => {
            thinness::check_n(*rank, *conjectural)?;
            let (ts, single) = match sweep {
                Some(pmax) => (sweep_targets(*pmax, link.orientation.into())?, false),
                None => {
                    if link.pd.is_some() {
                        return Err(Error::InvalidParameter("certificates need a two-bridge input".into()).into());
                    }
                    (targets(link)?, true)
                }
            };
            if let Some(dir) = dir {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            let rows = certify_rows(&engine, &ts, *rank, dir.as_deref(), cli.verify.then_some(cli.node_budget))?;
            let summary = CertifySummary {
                n: *rank,
                produced: rows.len(),
                verified: rows.iter().filter(|r| r.verified).count(),
                failed: rows.iter().filter(|r| !r.verified).count(),
                certificates: rows,
            };
            match cli.format {
                Format::Csv => emit(out, Format::Csv, &summary.certificates, false, certify_csv)?,
                Format::Json if single => emit(out, Format::Json, &summary.certificates, true, certify_csv)?,
                Format::Json => write_json(out, &summary)?,
                Format::Plain => {
                    for r in &summary.certificates {
                        writeln!(
                            out,
                            "K({},{}) {:?}: {} ({} nodes, depth {})",
                            r.label.p.unwrap_or(0),
                            r.label.q.unwrap_or(0),
                            r.label.orientation.unwrap_or(LinkOrientation::Standard),
                            if r.verified { "verified" } else { "FAILED" },
                            r.nodes,
                            r.depth
                        )?;
                    }
                    writeln!(out, "N = {}: produced {}, verified {}, failed {}", summary.n, summary.produced, summary.verified, summary.failed)?;
                }
            }
            if summary.failed > 0 {
                return Err(CheckFailed(format!("{} certificate(s) failed verification", summary.failed)).into());
            }
        }
        Command::Check { files, rank } => {
            let verifier = Verifier::new(&engine);
            let mut rows = Vec::new();
            for f in files {
                let src = read_input(f)?;
                let cert = CertNode::from_json(&src)?;
                let report = verifier.verify(&cert, *rank);
                rows.push(CheckRow { file: f.display().to_string(), ok: report.ok(), report });
            }
            emit(out, cli.format, &rows, rows.len() == 1, check_csv)?;
            let bad = rows.iter().filter(|r| !r.ok).count();
            if bad > 0 {
                return Err(CheckFailed(format!("{bad} certificate file(s) failed verification")).into());
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- invariants

#[derive(Clone, Debug, Serialize)]
pub struct InvariantsReport {
    #[serde(flatten)]
    pub label: LinkLabel,
    pub components: usize,
    pub singular: bool,
    pub i_parity: u8,
    pub twice_lk: i64,
    /// Linking number as an exact fraction, e.g. `-1/2`.
    pub lk: String,
    pub homfly: RationalInvariant,
    pub homfly_text: String,
    pub jones: RationalInvariant,
    pub jones_text: String,
    pub cdet: String,
    pub det: String,
    pub phase_pow: Option<u8>,
    pub sigma: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<InvariantChecks>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantChecks {
    /// Skein relation at every classical crossing.
    pub skein: bool,
    /// `det K(p, q) = p` for two-bridge input.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det_law: Option<bool>,
    /// `i(L) = sigma (mod 2)` when `det != 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parity: Option<bool>,
}

impl InvariantChecks {
    pub fn ok(&self) -> bool {
        self.skein && self.det_law != Some(false) && self.parity != Some(false)
    }
}

fn lk_string(twice_lk: i64) -> String {
    if twice_lk % 2 == 0 {
        (twice_lk / 2).to_string()
    } else {
        format!("{twice_lk}/2")
    }
}

/// `a P(L-) - a^{-1} P(L+) = z P(L0)` at every classical crossing.
pub fn skein_holds_everywhere(engine: &HomflyEngine, d: &Diagram) -> crate::Result<bool> {
    for c in 0..d.num_crossings() {
        if d.crossings()[c].is_singular() {
            continue;
        }
        let minus = engine.homfly(&d.with_sign(c, -1)?)?;
        let plus = engine.homfly(&d.with_sign(c, 1)?)?;
        let zero = engine.homfly(&d.oriented_smooth(c)?)?;
        let lhs = &minus.shift(1, Exp::new(1, 0, 0)) - &plus.shift(1, Exp::new(-1, 0, 0));
        if lhs != zero.mul_poly(&LaurentPoly::z()) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn invariants_report(engine: &HomflyEngine, t: &Target, verify: bool) -> anyhow::Result<InvariantsReport> {
    let s = invariants::summarize(engine, &t.diagram)?;
    let checks = if verify {
        let nonzero = s.signature.det != BigInt::from(0);
        Some(InvariantChecks {
            skein: skein_holds_everywhere(engine, &t.diagram)?,
            det_law: t.code.as_ref().map(|c| s.signature.det == BigInt::from(c.p)),
            parity: nonzero.then(|| (s.i_parity as i64 - s.signature.sigma).rem_euclid(2) == 0),
        })
    } else {
        None
    };
    let jones = homfly::jones(&s.homfly);
    Ok(InvariantsReport {
        label: t.label.clone(),
        components: s.components,
        singular: s.singular,
        i_parity: s.i_parity,
        twice_lk: s.twice_lk,
        lk: lk_string(s.twice_lk),
        homfly_text: s.homfly.to_string(),
        homfly: s.homfly,
        jones_text: jones.to_string(),
        jones,
        cdet: s.signature.cdet.to_string(),
        det: s.signature.det.to_string(),
        phase_pow: s.signature.phase,
        sigma: s.signature.sigma,
        checks,
    })
}

// ---------------------------------------------------------------------- hkr

struct HkrOptions {
    rank: i64,
    unreduced: bool,
    conjectural: bool,
    verify: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThinVerdict {
    /// Two-bridge input with `N > 4`: the prediction is a theorem.
    Thin,
    /// Two-bridge input with `N <= 4`.
    Conjectural,
    /// Thin form exists but no proof applies to this diagram.
    Inconclusive,
    /// The HOMFLY polynomial rules out thinness.
    NotThin,
    /// Some theorem-backed check failed.
    Failed,
}

impl ThinVerdict {
    fn as_str(self) -> &'static str {
        match self {
            ThinVerdict::Thin => "thin",
            ThinVerdict::Conjectural => "conjectural",
            ThinVerdict::Inconclusive => "inconclusive",
            ThinVerdict::NotThin => "not-thin",
            ThinVerdict::Failed => "failed",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HkrReport {
    #[serde(flatten)]
    pub label: LinkLabel,
    #[serde(rename = "N")]
    pub rank: i64,
    pub components: usize,
    pub det: String,
    pub sigma: i64,
    pub twice_lk: i64,
    pub homfly: RationalInvariant,
    pub superpolynomial: Option<LaurentPoly>,
    pub poincare: Option<LaurentPoly>,
    pub poincare_text: Option<String>,
    pub euler_check: Option<bool>,
    pub dimension: Option<String>,
    pub expected_dimension: Option<String>,
    pub dimension_check: Option<bool>,
    pub delta_check: Option<bool>,
    /// Agreement with the `(-t)^{sigma/2} P(q^N t^-1, i q t^-1/2)` form, knots only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub substitution_check: Option<bool>,
    /// Certificate verified, with `--verify` on two-bridge input.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_check: Option<bool>,
    pub thin_verdict: ThinVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unreduced: Option<UnreducedReport>,
}

impl HkrReport {
    fn failed_checks(&self) -> bool {
        self.thin_verdict == ThinVerdict::Failed
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UnreducedReport {
    pub family: String,
    pub poincare: LaurentPoly,
    pub poincare_text: String,
    pub e1: LaurentPoly,
    #[serde(flatten)]
    pub checks: unreduced::SpectralReport,
}

fn unreduced_for(code: &TwoBridgeCode, rank: i64) -> crate::Result<Option<(String, LaurentPoly)>> {
    if rank <= 4 {
        return Ok(None);
    }
    Ok(match (code.p, code.q) {
        (1, 0) => Some(("unknot".into(), unreduced::quantum_int(rank))),
        (5, 2) => Some(("figure-eight".into(), unreduced::unreduced_fig8(rank)?)),
        (n, 1) if n % 2 == 1 => Some((format!("T(2,{n})"), unreduced::unreduced_torus2n(rank, n)?)),
        _ => None,
    })
}

fn hkr_report(engine: &HomflyEngine, t: &Target, o: &HkrOptions) -> anyhow::Result<HkrReport> {
    let s: Summary = invariants::summarize(engine, &t.diagram)?;
    let n = o.rank;
    let thin = match ThinData::new(s.components, s.homfly.clone(), s.signature.sigma, s.twice_lk) {
        Ok(x) => Some(x),
        Err(e) if t.code.is_some() => return Err(e.into()),
        Err(Error::NotAlternating | Error::ParityViolation { .. }) => None,
        Err(e @ (Error::ZeroDeterminant | Error::NotATwoComponentLink)) => return Err(e.into()),
        Err(_) => None,
    };
    let mut r = HkrReport {
        label: t.label.clone(),
        rank: n,
        components: s.components,
        det: s.signature.det.to_string(),
        sigma: s.signature.sigma,
        twice_lk: s.twice_lk,
        homfly: s.homfly.clone(),
        superpolynomial: None,
        poincare: None,
        poincare_text: None,
        euler_check: None,
        dimension: None,
        expected_dimension: None,
        dimension_check: None,
        delta_check: None,
        substitution_check: None,
        certificate_check: None,
        thin_verdict: ThinVerdict::NotThin,
        unreduced: None,
    };
    let Some(thin) = thin else {
        return Ok(r);
    };
    let pn = thin.poincare(n);
    let euler = thinness::euler_check(&pn, &s.homfly, n);
    let dim = thinness::dimension(&pn);
    let want = thinness::expected_dimension(&s.signature.det, s.components, n);
    let delta = thin.delta_ok() && thinness::delta_homogeneous_mod(&thin.poincare_tilde(n), thin.sigma, n);
    let mut ok = euler && dim == want && delta;
    if s.components == 1 {
        let sub = s
            .homfly
            .as_polynomial()
            .and_then(|p| thinness::substitution_form(p, s.signature.sigma, n))
            .is_some_and(|f| f == pn);
        r.substitution_check = Some(sub);
        ok &= sub;
    }
    if o.verify {
        if let Some(code) = &t.code {
            let cert = Certifier::new(engine, n).certify(code, t.orientation)?;
            let good = Verifier::new(engine).verify(&cert, n).ok();
            r.certificate_check = Some(good);
            ok &= good;
        }
    }
    r.superpolynomial = Some(thin.superpoly.clone());
    r.poincare_text = Some(pn.to_string());
    r.poincare = Some(pn.clone());
    r.euler_check = Some(euler);
    r.dimension = Some(dim.to_string());
    r.expected_dimension = Some(want.to_string());
    r.dimension_check = Some(dim == want);
    r.delta_check = Some(delta);
    r.thin_verdict = match (&t.code, ok) {
        (Some(_), false) => ThinVerdict::Failed,
        (Some(_), true) if o.conjectural && n <= 4 => ThinVerdict::Conjectural,
        (Some(_), true) => ThinVerdict::Thin,
        (None, _) => ThinVerdict::Inconclusive,
    };
    if o.unreduced {
        if let Some(code) = &t.code {
            if let Some((family, h)) = unreduced_for(code, n)? {
                let checks = unreduced::spectral_checks(&h, &pn, &s.homfly, n)?;
                if !checks.ok() {
                    r.thin_verdict = ThinVerdict::Failed;
                }
                r.unreduced = Some(UnreducedReport {
                    family,
                    poincare_text: h.to_string(),
                    e1: unreduced::e1_poincare(&pn, n),
                    poincare: h,
                    checks,
                });
            }
        }
    }
    Ok(r)
}

// ------------------------------------------------------------------ certify

#[derive(Clone, Debug, Serialize)]
pub struct CertifyRow {
    #[serde(flatten)]
    pub label: LinkLabel,
    pub components: usize,
    pub det: String,
    pub sigma: i64,
    #[serde(skip)]
    pub homfly: Option<RationalInvariant>,
    #[serde(skip)]
    pub poincare: Option<LaurentPoly>,
    pub nodes: usize,
    pub depth: usize,
    pub verified: bool,
    pub failures: Vec<crate::thinness::certificate::Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifySummary {
    #[serde(rename = "N")]
    pub n: i64,
    pub produced: usize,
    pub verified: usize,
    pub failed: usize,
    pub certificates: Vec<CertifyRow>,
}

fn cert_file_name(label: &LinkLabel) -> String {
    format!(
        "K_{}_{}_{}.json",
        label.p.unwrap_or(0),
        label.q.unwrap_or(0),
        match label.orientation {
            Some(LinkOrientation::Reversed) => "reversed",
            _ => "standard",
        }
    )
}

/// With `reverify = Some(budget)`, every certificate is also re-read from
/// its JSON and checked against a fresh engine.
fn certify_rows(engine: &HomflyEngine, ts: &[Target], n: i64, dir: Option<&Path>, reverify: Option<u64>) -> anyhow::Result<Vec<CertifyRow>> {
    let certifier = Certifier::new(engine, n);
    let verifier = Verifier::new(engine);
    let fresh = HomflyEngine::new(reverify.unwrap_or(0));
    let reverifier = Verifier::new(&fresh);
    let rows: Vec<anyhow::Result<CertifyRow>> = ts
        .par_iter()
        .map(|t| {
            let code = t.code.as_ref().expect("two-bridge target");
            let cert = certifier.certify(code, t.orientation)?;
            let mut report: Report = verifier.verify(&cert, n);
            let json = cert.to_json();
            let file = match dir {
                Some(d) => {
                    let path = d.join(cert_file_name(&t.label));
                    fs::write(&path, &json).with_context(|| format!("writing {}", path.display()))?;
                    Some(path)
                }
                None => None,
            };
            if reverify.is_some() {
                let src = match &file {
                    Some(p) => fs::read_to_string(p)?,
                    None => json,
                };
                let again = reverifier.verify(&CertNode::from_json(&src)?, n);
                report.failures.extend(again.failures);
            }
            let s = invariants::summarize(engine, &t.diagram)?;
            let pn = ThinData::new(s.components, s.homfly.clone(), s.signature.sigma, s.twice_lk).ok().map(|x| x.poincare(n));
            Ok(CertifyRow {
                label: t.label.clone(),
                components: s.components,
                det: s.signature.det.to_string(),
                sigma: s.signature.sigma,
                homfly: Some(s.homfly),
                poincare: pn,
                nodes: cert.size(),
                depth: cert.depth(),
                verified: report.ok(),
                failures: report.failures,
                file: file.map(|p| p.display().to_string()),
            })
        })
        .collect();
    rows.into_iter().collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRow {
    pub file: String,
    pub ok: bool,
    #[serde(flatten)]
    pub report: Report,
}

// ------------------------------------------------------------------- output

fn write_json<T: Serialize>(out: &mut dyn Write, v: &T) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

const CSV_HEADER: [&str; 9] = ["p", "q", "cf", "components", "det", "sigma", "homfly_json", "pN_json", "thin_verdict"];

type CsvRow = [String; 9];

fn cf_cell(l: &LinkLabel) -> String {
    l.cf.as_ref().map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).unwrap_or_default()
}

fn opt_cell(v: Option<i64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn json_cell<T: Serialize>(v: &Option<T>) -> String {
    v.as_ref().map(|x| serde_json::to_string(x).expect("serializes")).unwrap_or_default()
}

fn invariants_csv(r: &InvariantsReport) -> CsvRow {
    [
        opt_cell(r.label.p),
        opt_cell(r.label.q),
        cf_cell(&r.label),
        r.components.to_string(),
        r.det.clone(),
        r.sigma.to_string(),
        json_cell(&Some(&r.homfly)),
        String::new(),
        String::new(),
    ]
}

fn hkr_csv(r: &HkrReport) -> CsvRow {
    [
        opt_cell(r.label.p),
        opt_cell(r.label.q),
        cf_cell(&r.label),
        r.components.to_string(),
        r.det.clone(),
        r.sigma.to_string(),
        json_cell(&Some(&r.homfly)),
        json_cell(&r.poincare),
        r.thin_verdict.as_str().to_string(),
    ]
}

fn certify_csv(r: &CertifyRow) -> CsvRow {
    [
        opt_cell(r.label.p),
        opt_cell(r.label.q),
        cf_cell(&r.label),
        r.components.to_string(),
        r.det.clone(),
        r.sigma.to_string(),
        json_cell(&r.homfly),
        json_cell(&r.poincare),
        if r.verified { "certified" } else { "failed" }.to_string(),
    ]
}

fn check_csv(r: &CheckRow) -> CsvRow {
    let mut row: CsvRow = Default::default();
    row[8] = if r.ok { "certified".into() } else { "failed".into() };
    row
}

fn emit<T: Serialize>(out: &mut dyn Write, format: Format, rows: &[T], single: bool, csv_row: fn(&T) -> CsvRow) -> anyhow::Result<()> {
    match format {
        Format::Json if single && rows.len() == 1 => write_json(out, &rows[0]),
        Format::Json => write_json(out, &rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(CSV_HEADER)?;
            for r in rows {
                w.write_record(csv_row(r))?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Plain => {
            for (i, r) in rows.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                let v = serde_json::to_value(r)?;
                write_plain(out, "", &v)?;
            }
            Ok(())
        }
    }
}

fn is_poly(v: &Value) -> bool {
    v.as_object().is_some_and(|m| m.contains_key("terms"))
}

/// `key: value` lines; polynomial objects are skipped in favour of their
/// `*_text` twins.
fn write_plain(out: &mut dyn Write, prefix: &str, v: &Value) -> anyhow::Result<()> {
    let Some(map) = v.as_object() else {
        writeln!(out, "{prefix}: {v}")?;
        return Ok(());
    };
    for (k, x) in map {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match x {
            _ if is_poly(x) => {}
            Value::Null => {}
            Value::Object(_) => write_plain(out, &key, x)?,
            Value::String(s) => writeln!(out, "{key}: {s}")?,
            Value::Array(items) if items.iter().all(|i| !i.is_object()) => {
                let parts: Vec<String> = items.iter().map(|i| i.to_string()).collect();
                writeln!(out, "{key}: {}", parts.join(" "))?;
            }
            Value::Array(items) => {
                for (i, item) in items.iter().enumerate() {
                    write_plain(out, &format!("{key}[{i}]"), item)?;
                }
            }
            _ => writeln!(out, "{key}: {x}")?,
        }
    }
    Ok(())
}
