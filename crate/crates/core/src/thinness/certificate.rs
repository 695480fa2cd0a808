//! Thinness certificates for two-bridge links.
//!
//! A certificate is a tree. Skein nodes hold a link `L2` whose children
//! `L1`, `L3` sit in a skein exact sequence `L1 -> L2 -> L3 -> L1`; twist
//! nodes remove twists at a singular crossing; leaves are the unknot and
//! the singular theta graph. The verifier rebuilds every diagram from its
//! descriptor and recomputes all invariants.

use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{q_summand_ends, shift_minus_to_zero, shift_singular_to_minus, ThinData, SHIFT_ZERO_TO_SINGULAR};
use crate::diagram::pd;
use crate::diagram::plat::{
    code_of_word, normalize_code, vertical_code, plat_from_cf, singular_plat, top_strands, LinkOrientation, TopStrands,
    TwoBridgeCode,
};
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::homfly::HomflyEngine;
use crate::invariants::{self, twist_homfly, Summary};
use crate::laurent::{Exp, GaussianInt, LaurentPoly, RationalInvariant, Unit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    BaseUnknot,
    BaseTheta,
    TwistStep,
    SkeinRegular,
    /// Singular crossing with parallel strands.
    SkeinSingularA,
    /// Singular crossing with antiparallel strands.
    SkeinSingularB,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkType {
    Unknot,
    Theta,
    Regular,
    Singular,
}

/// Which resolution of its parent's top crossing a child is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Zero,
    Singular,
    Plus,
    Minus,
    Untwisted,
}

/// Enough data to rebuild a diagram.
///
/// Regular links are canonical plats of `(p, q)`. Singular links are plats
/// of the word `cf` with the top crossing made singular, `(p, q)` being the
/// class of the unoriented smoothing there. `twists` extra twists are added
/// at the singular crossing, negative for negative twists.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinkSpec {
    #[serde(rename = "type")]
    pub kind: LinkType,
    pub p: i64,
    pub q: i64,
    pub cf: Vec<i64>,
    pub orientation: LinkOrientation,
    pub twists: i64,
}

impl LinkSpec {
    pub fn unknot() -> Self {
        LinkSpec { kind: LinkType::Unknot, p: 1, q: 0, cf: vec![1], orientation: LinkOrientation::Standard, twists: 0 }
    }

    pub fn theta() -> Self {
        LinkSpec { kind: LinkType::Theta, p: 1, q: 0, cf: vec![], orientation: LinkOrientation::Standard, twists: 0 }
    }

    pub fn regular(code: &TwoBridgeCode, orientation: LinkOrientation) -> Self {
        if code.p == 1 {
            return Self::unknot();
        }
        LinkSpec { kind: LinkType::Regular, p: code.p, q: code.q, cf: code.cf.clone(), orientation, twists: 0 }
    }

    pub fn singular(word: &[i64], orientation: LinkOrientation) -> Result<Self> {
        let d = singular_plat(word, orientation)?;
        let u = unoriented_code(word, top_strands(&d))?;
        Ok(LinkSpec { kind: LinkType::Singular, p: u.p, q: u.q, cf: word.to_vec(), orientation, twists: 0 })
    }

    pub fn diagram(&self) -> Result<Diagram> {
        let mut d = match self.kind {
            LinkType::Unknot => Diagram::unknot(),
            LinkType::Theta => pd::parse("S[1,2,2,1]")?,
            LinkType::Regular => {
                let code = normalize_code(self.p, self.q)?;
                if code.cf != self.cf || code.q != self.q {
                    return Err(Error::InvalidParameter(format!(
                        "({}, {}) with cf {:?} is not a canonical code",
                        self.p, self.q, self.cf
                    )));
                }
                plat_from_cf(&code, self.orientation)
            }
            LinkType::Singular => singular_plat(&self.cf, self.orientation)?,
        };
        for _ in 0..self.twists.unsigned_abs() {
            d = d.add_twist(self.twists.signum() as i32)?;
        }
        Ok(d)
    }

    pub fn describe(&self) -> String {
        match self.kind {
            LinkType::Unknot => "unknot".into(),
            LinkType::Theta => format!("theta{:+}", self.twists),
            LinkType::Regular => format!("K({},{}) {:?}", self.p, self.q, self.orientation).to_lowercase(),
            LinkType::Singular => format!("singular {:?} {:?}", self.cf, self.orientation).to_lowercase(),
        }
    }
}

/// Class of the unoriented smoothing of the top crossing of the plat of `word`.
fn unoriented_code(word: &[i64], strands: TopStrands) -> Result<TwoBridgeCode> {
    match strands {
        TopStrands::Parallel => vertical_code(word),
        TopStrands::Antiparallel => {
            let mut w = word.to_vec();
            w[0] -= 1;
            code_of_word(&w)
        }
    }
}

/// Class of the oriented smoothing of the top crossing.
fn oriented_code(word: &[i64], strands: TopStrands) -> Result<TwoBridgeCode> {
    unoriented_code(
        word,
        match strands {
            TopStrands::Parallel => TopStrands::Antiparallel,
            TopStrands::Antiparallel => TopStrands::Parallel,
        },
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertNode {
    pub kind: NodeKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub role: Option<Role>,
    pub link: LinkSpec,
    pub det: u64,
    pub sigma: i64,
    pub twice_lk: i64,
    #[serde(rename = "N")]
    pub n: i64,
    pub shifts: Vec<[i64; 2]>,
    pub children: Vec<CertNode>,
}

impl CertNode {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn det_u64(s: &Summary) -> Result<u64> {
    u64::try_from(&s.signature.det).map_err(|_| Error::InvalidParameter("determinant out of range".into()))
}

fn pair(s: (i64, i64)) -> [i64; 2] {
    [s.0, s.1]
}

/// Shifts `[f1, f2, f3]` for the given parent/child roles.
fn expected_shifts(parent_singular: bool, parent_sign: i32, children: [Role; 2], n: i64) -> Option<Vec<[i64; 2]>> {
    let sm = pair(shift_singular_to_minus(n));
    let mz = pair(shift_minus_to_zero(n));
    let zs = pair(SHIFT_ZERO_TO_SINGULAR);
    Some(match (parent_singular, parent_sign, children) {
        (false, 1, [Role::Zero, Role::Singular]) => vec![mz, sm, zs],
        (false, -1, [Role::Singular, Role::Zero]) => vec![sm, mz, zs],
        (true, _, [Role::Plus, Role::Zero]) => vec![sm, zs, mz],
        (true, _, [Role::Zero, Role::Minus]) => vec![zs, sm, mz],
        _ => return None,
    })
}

/// Builds certificates; shares a HOMFLY engine and memoizes subtrees.
pub struct Certifier<'a> {
    engine: &'a HomflyEngine,
    n: i64,
    summaries: DashMap<LinkSpec, Arc<Summary>>,
    nodes: DashMap<LinkSpec, CertNode>,
}

impl<'a> Certifier<'a> {
    pub fn new(engine: &'a HomflyEngine, n: i64) -> Self {
        Certifier { engine, n, summaries: DashMap::new(), nodes: DashMap::new() }
    }

    fn summary(&self, spec: &LinkSpec) -> Result<Arc<Summary>> {
        if let Some(s) = self.summaries.get(spec) {
            return Ok(s.clone());
        }
        let s = Arc::new(invariants::summarize(self.engine, &spec.diagram()?)?);
        self.summaries.insert(spec.clone(), s.clone());
        Ok(s)
    }

    fn node(&self, kind: NodeKind, spec: LinkSpec, s: &Summary, shifts: Vec<[i64; 2]>, children: Vec<CertNode>) -> Result<CertNode> {
        Ok(CertNode {
            kind,
            role: None,
            link: spec,
            det: det_u64(s)?,
            sigma: s.signature.sigma,
            twice_lk: s.twice_lk,
            n: self.n,
            shifts,
            children,
        })
    }

    /// Canonical regular spec with the same oriented invariants as `actual`.
    fn match_regular(&self, code: &TwoBridgeCode, actual: &Summary) -> Result<LinkSpec> {
        let flags: &[LinkOrientation] = if code.p % 2 == 0 {
            &[LinkOrientation::Standard, LinkOrientation::Reversed]
        } else {
            &[LinkOrientation::Standard]
        };
        for &f in flags {
            let spec = LinkSpec::regular(code, f);
            let s = self.summary(&spec)?;
            if s.homfly == actual.homfly && s.signature.sigma == actual.signature.sigma && s.twice_lk == actual.twice_lk {
                return Ok(spec);
            }
        }
        Err(Error::InternalInconsistency(format!("no orientation of {code:?} matches the resolution")))
    }

    /// Singular plat of `word` related to `node` by `2lk(node) - 2lk(child)`
    /// twists.
    fn match_twisted(&self, word: &[i64], node: &Summary) -> Result<LinkSpec> {
        for f in [LinkOrientation::Standard, LinkOrientation::Reversed] {
            let spec = LinkSpec::singular(word, f)?;
            let s = self.summary(&spec)?;
            let tw = node.twice_lk - s.twice_lk;
            if twist_homfly(&s.homfly, tw) == node.homfly && s.signature.sigma + tw == node.signature.sigma {
                return Ok(spec);
            }
        }
        Err(Error::InternalInconsistency(format!("singular plat {word:?} is not twist equivalent")))
    }

    pub fn certify(&self, code: &TwoBridgeCode, orientation: LinkOrientation) -> Result<CertNode> {
        if code.p == 0 {
            return Err(Error::ZeroDeterminant);
        }
        self.certify_spec(&LinkSpec::regular(code, orientation))
    }

    fn certify_spec(&self, spec: &LinkSpec) -> Result<CertNode> {
        if let Some(n) = self.nodes.get(spec) {
            return Ok(n.clone());
        }
        let node = match spec.kind {
            LinkType::Unknot => {
                let s = self.summary(spec)?;
                self.node(NodeKind::BaseUnknot, spec.clone(), &s, vec![], vec![])?
            }
            LinkType::Theta if spec.twists == 0 => {
                let s = self.summary(spec)?;
                self.node(NodeKind::BaseTheta, spec.clone(), &s, vec![], vec![])?
            }
            LinkType::Theta => {
                let s = self.summary(spec)?;
                let child = self.with_role(self.certify_spec(&LinkSpec::theta())?, Role::Untwisted);
                self.node(NodeKind::TwistStep, spec.clone(), &s, vec![], vec![child])?
            }
            LinkType::Regular => self.certify_regular(spec)?,
            LinkType::Singular => self.certify_singular(spec)?,
        };
        self.nodes.insert(spec.clone(), node.clone());
        Ok(node)
    }

    fn with_role(&self, mut node: CertNode, role: Role) -> CertNode {
        node.role = Some(role);
        node
    }

    fn certify_regular(&self, spec: &LinkSpec) -> Result<CertNode> {
        let s = self.summary(spec)?;
        let d = spec.diagram()?;
        let word = normalize_code(spec.p, spec.q)?.word();
        let strands = top_strands(&d);
        let sign = d.crossings()[0].sign();
        let zero_actual = invariants::summarize(self.engine, &d.oriented_smooth(0)?)?;
        let zero_spec = self.match_regular(&oriented_code(&word, strands)?, &zero_actual)?;
        let sing_spec = LinkSpec::singular(&word, spec.orientation)?;
        let zero = self.with_role(self.certify_spec(&zero_spec)?, Role::Zero);
        let sing = self.with_role(self.certify_spec(&sing_spec)?, Role::Singular);
        let (children, roles) = if sign > 0 {
            (vec![zero, sing], [Role::Zero, Role::Singular])
        } else {
            (vec![sing, zero], [Role::Singular, Role::Zero])
        };
        let shifts = expected_shifts(false, sign, roles, self.n).unwrap();
        self.node(NodeKind::SkeinRegular, spec.clone(), &s, shifts, children)
    }

    fn certify_singular(&self, spec: &LinkSpec) -> Result<CertNode> {
        let s = self.summary(spec)?;
        if s.signature.det == BigInt::from(1) {
            let child = self.with_role(self.certify_spec(&LinkSpec::theta())?, Role::Untwisted);
            return self.node(NodeKind::TwistStep, spec.clone(), &s, vec![], vec![child]);
        }
        let d = spec.diagram()?;
        let word = &spec.cf;
        let strands = top_strands(&d);
        match strands {
            TopStrands::Parallel if word[0] > 1 => {
                let mut w = word.clone();
                w[0] = 1;
                let child_spec = self.match_twisted(&w, &s)?;
                let child = self.with_role(self.certify_spec(&child_spec)?, Role::Untwisted);
                self.node(NodeKind::TwistStep, spec.clone(), &s, vec![], vec![child])
            }
            TopStrands::Antiparallel if word[0] == 1 => {
                if word.len() < 3 {
                    return Err(Error::InternalInconsistency(format!("singular plat {word:?} has no reduction")));
                }
                let mut w = vec![word[2] + 1];
                w.extend_from_slice(&word[3..]);
                let child_spec = self.match_twisted(&w, &s)?;
                let child = self.with_role(self.certify_spec(&child_spec)?, Role::Untwisted);
                self.node(NodeKind::TwistStep, spec.clone(), &s, vec![], vec![child])
            }
            _ => {
                let kind = match strands {
                    TopStrands::Parallel => NodeKind::SkeinSingularA,
                    TopStrands::Antiparallel => NodeKind::SkeinSingularB,
                };
                // The crossing this plat had before it was made singular.
                let plain = singular_plat(word, spec.orientation)?;
                let regular = crate::diagram::plat::plat_from_word(word, spec.orientation);
                let switched_sign = -regular.crossings()[0].sign();
                let mut w = word.clone();
                w[0] -= 2;
                let sw_actual = invariants::summarize(self.engine, &plain.with_sign(0, switched_sign)?)?;
                let sw_spec = self.match_regular(&code_of_word(&w)?, &sw_actual)?;
                let zero_actual = invariants::summarize(self.engine, &plain.oriented_smooth(0)?)?;
                let zero_spec = self.match_regular(&oriented_code(word, strands)?, &zero_actual)?;
                let zero = self.with_role(self.certify_spec(&zero_spec)?, Role::Zero);
                let (children, roles) = if switched_sign > 0 {
                    let sw = self.with_role(self.certify_spec(&sw_spec)?, Role::Plus);
                    (vec![sw, zero], [Role::Plus, Role::Zero])
                } else {
                    let sw = self.with_role(self.certify_spec(&sw_spec)?, Role::Minus);
                    (vec![zero, sw], [Role::Zero, Role::Minus])
                };
                let shifts = expected_shifts(true, 0, roles, self.n).unwrap();
                self.node(kind, spec.clone(), &s, shifts, children)
            }
        }
    }
}

/// Convenience wrapper around [`Certifier`].
pub fn certify_two_bridge(
    engine: &HomflyEngine,
    code: &TwoBridgeCode,
    orientation: LinkOrientation,
    n: i64,
) -> Result<CertNode> {
    Certifier::new(engine, n).certify(code, orientation)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// Child indices from the root, e.g. `root/1/0`.
    pub path: String,
    pub link: String,
    pub check: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub nodes_checked: usize,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

struct NodeData {
    summary: Summary,
    thin: Option<ThinData>,
    pn: Option<LaurentPoly>,
}

/// Independent re-check of certificates.
pub struct Verifier<'a> {
    engine: &'a HomflyEngine,
    data: DashMap<LinkSpec, Arc<std::result::Result<NodeData, String>>>,
    verified: DashMap<(CertNodeKey, i64), Arc<Vec<Failure>>>,
}

type CertNodeKey = String;

impl<'a> Verifier<'a> {
    pub fn new(engine: &'a HomflyEngine) -> Self {
        Verifier { engine, data: DashMap::new(), verified: DashMap::new() }
    }

    fn data(&self, spec: &LinkSpec, n: i64) -> Arc<std::result::Result<NodeData, String>> {
        if let Some(v) = self.data.get(spec) {
            return v.clone();
        }
        let compute = || -> Result<NodeData> {
            let d = spec.diagram()?;
            let summary = invariants::summarize(self.engine, &d)?;
            let thin = ThinData::new(
                summary.components,
                summary.homfly.clone(),
                summary.signature.sigma,
                summary.twice_lk,
            )
            .ok();
            let pn = thin.as_ref().map(|t| t.poincare(n));
            Ok(NodeData { summary, thin, pn })
        };
        let v = Arc::new(compute().map_err(|e| e.to_string()));
        self.data.insert(spec.clone(), v.clone());
        v
    }

    pub fn verify(&self, cert: &CertNode, n: i64) -> Report {
        let mut report = Report::default();
        self.visit(cert, n, "root", &mut report);
        report
    }

    fn visit(&self, node: &CertNode, n: i64, path: &str, report: &mut Report) {
        report.nodes_checked += node.size();
        let key = (serde_json::to_string(node).unwrap(), n);
        if let Some(f) = self.verified.get(&key) {
            report.failures.extend(f.iter().map(|x| Failure { path: format!("{path}{}", x.path), ..x.clone() }));
            return;
        }
        let mut local = Vec::new();
        self.check_node(node, n, &mut local);
        let mut failures: Vec<Failure> = local
            .into_iter()
            .map(|(check, detail)| Failure { path: String::new(), link: node.link.describe(), check, detail })
            .collect();
        for (i, c) in node.children.iter().enumerate() {
            let mut sub = Report::default();
            self.visit(c, n, "", &mut sub);
            failures.extend(sub.failures.into_iter().map(|f| Failure { path: format!("/{i}{}", f.path), ..f }));
        }
        let failures = Arc::new(failures);
        self.verified.insert(key, failures.clone());
        report.failures.extend(failures.iter().map(|x| Failure { path: format!("{path}{}", x.path), ..x.clone() }));
        // nodes_checked already counted for the whole subtree
    }

    fn check_node(&self, node: &CertNode, n: i64, out: &mut Vec<(&'static str, String)>) {
        let mut fail = |check: &'static str, detail: String| out.push((check, detail));
        if node.n != n {
            fail("rank", format!("node records N = {}, verifying N = {n}", node.n));
        }
        let data = self.data(&node.link, n);
        let me = match data.as_ref() {
            Ok(d) => d,
            Err(e) => return fail("rebuild", e.clone()),
        };
        let s = &me.summary;
        if BigInt::from(node.det) != s.signature.det {
            fail("det", format!("recorded {}, computed {}", node.det, s.signature.det));
        }
        if node.sigma != s.signature.sigma {
            fail("sigma", format!("recorded {}, computed {}", node.sigma, s.signature.sigma));
        }
        if node.twice_lk != s.twice_lk {
            fail("linking", format!("recorded {}, computed {}", node.twice_lk, s.twice_lk));
        }
        if node.link.kind == LinkType::Singular && BigInt::from(node.link.p) != s.signature.det {
            fail("det-unoriented", format!("det {} but unoriented smoothing has p = {}", s.signature.det, node.link.p));
        }
        let (Some(thin), Some(pn)) = (&me.thin, &me.pn) else {
            return fail("thin-form", "HOMFLY data is not of thin form".into());
        };
        if !thin.delta_ok() {
            fail("delta", format!("superpolynomial not delta-homogeneous at sigma = {}", thin.sigma));
        }
        if !super::delta_homogeneous_mod(&thin.poincare_tilde(n), thin.sigma, n) {
            fail("delta-mod", "reduced part not delta-homogeneous mod N-2".into());
        }
        if !super::euler_check(pn, &s.homfly, n) {
            fail("euler", "P_N at t = -1 differs from P(q^N, q)".into());
        }
        let want_dim = super::expected_dimension(&s.signature.det, s.components, n);
        if super::dimension(pn) != want_dim {
            fail("dimension", format!("dim {} expected {want_dim}", super::dimension(pn)));
        }

        let kids: Vec<(&CertNode, Arc<std::result::Result<NodeData, String>>)> =
            node.children.iter().map(|c| (c, self.data(&c.link, n))).collect();
        let mut child_data = Vec::new();
        for (c, d) in &kids {
            match d.as_ref() {
                Ok(d) => child_data.push((*c, d)),
                Err(e) => return fail("rebuild-child", e.clone()),
            }
        }
        match node.kind {
            NodeKind::BaseUnknot => {
                if node.link.kind != LinkType::Unknot || !node.children.is_empty() || !s.homfly.num().is_one() {
                    fail("base", "unknot leaf is not the unknot".into());
                }
            }
            NodeKind::BaseTheta => {
                let theta = RationalInvariant::new(LaurentPoly::from_terms([(1, 1, -1, 0), (-1, -1, 1, 0)]), 1);
                if node.link.kind != LinkType::Theta || node.link.twists != 0 || !node.children.is_empty() {
                    fail("base", "theta leaf is not the theta graph".into());
                }
                if s.homfly != theta || s.signature.sigma != 0 || s.twice_lk != 0 || s.signature.det != BigInt::from(1) {
                    fail("base", "theta invariants differ".into());
                }
                if *pn != super::q_summand(n, 0, 0) {
                    fail("base", "theta Poincaré polynomial differs".into());
                }
            }
            NodeKind::TwistStep => {
                let [(c, cd)] = child_data[..] else {
                    return fail("shape", "twist step needs one child".into());
                };
                if c.role != Some(Role::Untwisted) {
                    fail("shape", "twist child must be marked untwisted".into());
                }
                if !s.singular || !cd.summary.singular {
                    fail("twist", "twist steps relate singular links".into());
                }
                let tw = s.twice_lk - cd.summary.twice_lk;
                if twist_homfly(&cd.summary.homfly, tw) != s.homfly {
                    fail("twist-homfly", format!("P(node) != (-aq)^{tw} P(child)"));
                }
                let shifted = invariants::twist_signature(&cd.summary.signature, tw);
                if shifted != s.signature {
                    fail("twist-signature", format!("sigma/Det do not shift by {tw} twists"));
                }
                if let Some(cpn) = &cd.pn {
                    let factor = LaurentPoly::monomial(1, 0, (n + 1) * tw, -tw);
                    if &(cpn * &factor) != pn {
                        fail("twist-poincare", "P_N does not shift by (t^-1 q^(N+1))^tw".into());
                    }
                }
            }
            NodeKind::SkeinRegular | NodeKind::SkeinSingularA | NodeKind::SkeinSingularB => {
                self.check_skein(node, me, &child_data, n, &mut fail);
            }
        }
    }

    fn check_skein(
        &self,
        node: &CertNode,
        me: &NodeData,
        kids: &[(&CertNode, &NodeData)],
        n: i64,
        fail: &mut impl FnMut(&'static str, String),
    ) {
        let [(c1, d1), (c3, d3)] = kids else {
            return fail("shape", "skein node needs two children".into());
        };
        let s = &me.summary;
        let singular = node.kind != NodeKind::SkeinRegular;
        if singular != s.singular {
            return fail("shape", "node kind does not match the link".into());
        }
        let Ok(d) = node.link.diagram() else { return };
        if singular {
            let want = if top_strands(&d) == TopStrands::Parallel {
                NodeKind::SkeinSingularA
            } else {
                NodeKind::SkeinSingularB
            };
            if want != node.kind {
                fail("orientation-type", format!("traced type is {want:?}"));
            }
        }
        let roles = [c1.role.unwrap_or(Role::Untwisted), c3.role.unwrap_or(Role::Untwisted)];
        let sign = if singular { 0 } else { d.crossings()[0].sign() };
        let Some(shifts) = expected_shifts(singular, sign, roles, n) else {
            return fail("roles", format!("children roles {roles:?} do not form a skein sequence"));
        };
        if node.shifts != shifts {
            fail("shifts", format!("recorded {:?}, expected {shifts:?}", node.shifts));
        }
        if node.det != c1.det + c3.det || s.signature.det != &d1.summary.signature.det + &d3.summary.signature.det {
            fail("det-additivity", format!("{} != {} + {}", node.det, c1.det, c3.det));
        }
        for v in [d1.summary.signature.det.clone(), d3.summary.signature.det.clone()] {
            if v >= s.signature.det {
                fail("induction", "child determinant does not decrease".into());
            }
        }

        // children against the actual resolutions of the top crossing
        let resolve = |role: Role| -> Result<Diagram> {
            match role {
                Role::Zero => d.oriented_smooth(0),
                Role::Singular => d.make_singular(0),
                Role::Plus => d.with_sign(0, 1),
                Role::Minus => d.with_sign(0, -1),
                Role::Untwisted => Err(Error::InvalidParameter("no resolution".into())),
            }
        };
        for ((c, cd), role) in kids.iter().zip(roles) {
            match resolve(role).and_then(|r| invariants::summarize(self.engine, &r)) {
                Ok(r) => {
                    if r.homfly != cd.summary.homfly || r.signature != cd.summary.signature || r.twice_lk != cd.summary.twice_lk {
                        fail("resolution", format!("child {} is not the {role:?} resolution", c.link.describe()));
                    }
                }
                Err(e) => fail("resolution", e.to_string()),
            }
        }

        // skein relation on HOMFLY
        let by_role = |r: Role| kids.iter().zip(roles).find(|(_, x)| *x == r).map(|((_, d), _)| &d.summary);
        let zero = by_role(Role::Zero);
        let (sing, other, other_sign) = if singular {
            let (o, sg) = match (by_role(Role::Plus), by_role(Role::Minus)) {
                (Some(p), None) => (p, 1),
                (None, Some(m)) => (m, -1),
                _ => return fail("roles", "singular node needs one switched child".into()),
            };
            (s, o, sg)
        } else {
            match by_role(Role::Singular) {
                Some(x) => (x, s, sign),
                None => return fail("roles", "regular node needs a singular child".into()),
            }
        };
        let Some(zero) = zero else {
            return fail("roles", "missing oriented smoothing".into());
        };
        let rhs = if other_sign > 0 {
            &zero.homfly.shift(1, Exp::new(0, -1, 0)) - &other.homfly.shift(1, Exp::new(-1, 0, 0))
        } else {
            &zero.homfly.shift(1, Exp::new(0, 1, 0)) - &other.homfly.shift(1, Exp::new(1, 0, 0))
        };
        if rhs != sing.homfly {
            fail("skein-homfly", "P(L_s) differs from the skein combination".into());
        }
        let i = GaussianInt::from(if other_sign > 0 { Unit::MINUS_I } else { Unit::I });
        if sing.signature.cdet != &(&i * &zero.signature.cdet) + &other.signature.cdet {
            fail("skein-det", "complex determinants are not additive".into());
        }

        // Poincaré polynomials across the exact sequence
        let (Some(p1), Some(p3), Some(p2)) = (&d1.pn, &d3.pn, &me.pn) else {
            return fail("thin-form", "child is not of thin form".into());
        };
        let sh = |f: [i64; 2]| LaurentPoly::monomial(1, 0, f[1], f[0]);
        let shinv = |f: [i64; 2]| LaurentPoly::monomial(1, 0, -f[1], -f[0]);
        let predicted = if s.components == 1 {
            let (Some(t1), Some(t3)) = (&d1.thin, &d3.thin) else { return };
            let (lo, _) = q_summand_ends(n, t1.sigma, t1.twice_lk);
            let (_, hi) = q_summand_ends(n, t3.sigma, t3.twice_lk);
            let a = &(&t1.poincare_tilde(n) + &lo) * &sh(shifts[0]);
            let b = &(&t3.poincare_tilde(n) + &hi) * &shinv(shifts[1]);
            &a + &b
        } else {
            &(p1 * &sh(shifts[0])) + &(p3 * &shinv(shifts[1]))
        };
        if &predicted != p2 {
            fail("sequence", "P_N(L2) is not assembled from P_N(L1), P_N(L3)".into());
        }
        let sig = [d1.summary.signature.sigma, s.signature.sigma, d3.summary.signature.sigma];
        for (k, (src, dst)) in [(0usize, 1usize), (1, 2), (2, 0)].into_iter().enumerate() {
            let f = shifts[k];
            let delta = 2 * f[0] + f[1] - sig[dst] + sig[src];
            let want = if k == 2 { 2 } else { 0 };
            if !super::congruent(delta, want, n - 2) {
                fail("delta-shift", format!("map {} changes Delta by {delta}", k + 1));
            }
        }
    }
}

/// One row of a sweep.
#[derive(Debug)]
pub struct SweepEntry {
    pub p: i64,
    pub q: i64,
    pub code: TwoBridgeCode,
    pub orientation: LinkOrientation,
    pub certificate: Result<CertNode>,
    pub report: Option<Report>,
}

impl SweepEntry {
    pub fn ok(&self) -> bool {
        self.report.as_ref().is_some_and(|r| r.ok())
    }
}

/// Coprime pairs `0 < q < p <= pmax`, plus `(1, 0)`. Links get one job per
/// requested orientation, knots a single `Standard` job.
pub fn sweep_jobs(pmax: i64, orientations: &[LinkOrientation]) -> Vec<(i64, i64, LinkOrientation)> {
    let mut jobs = Vec::new();
    for p in 1..=pmax {
        for q in 0..p {
            if num_integer::Integer::gcd(&p, &q) != 1 || (q == 0 && p != 1) {
                continue;
            }
            if p % 2 == 1 {
                jobs.push((p, q, LinkOrientation::Standard));
            } else {
                jobs.extend(orientations.iter().map(|&o| (p, q, o)));
            }
        }
    }
    jobs
}

/// Certifies and verifies every job of [`sweep_jobs`] in parallel. Rows come
/// back in job order.
pub fn sweep(engine: &HomflyEngine, pmax: i64, n: i64, orientations: &[LinkOrientation]) -> Vec<SweepEntry> {
    use rayon::prelude::*;
    let certifier = Certifier::new(engine, n);
    let verifier = Verifier::new(engine);
    sweep_jobs(pmax, orientations)
        .into_par_iter()
        .map(|(p, q, orientation)| {
            let code = normalize_code(p, q).expect("coprime");
            let certificate = certifier.certify(&code, orientation);
            let report = certificate.as_ref().ok().map(|c| verifier.verify(c, n));
            SweepEntry { p, q, code, orientation, certificate, report }
        })
        .collect()
}
