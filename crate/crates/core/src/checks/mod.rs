//! Registry of theorem checks: identities evaluated as residuals,
//! inequalities as slacks, each gated on curvature hypotheses.

mod eval;
mod runner;

pub use runner::{convergence_study, run_check, run_suite, ConvergenceRow, RunOptions};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Hypothesis;
use crate::jensen::{phi_catalog, PhiFamily, PhiSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Identity,
    Inequality,
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckKind::Identity => "identity",
            CheckKind::Inequality => "inequality",
        })
    }
}

/// Where the origin is placed before a check is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OriginPolicy {
    AsGiven,
    Circumcenter,
    SteinerPoint,
}

impl fmt::Display for OriginPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OriginPolicy::AsGiven => "as-given",
            OriginPolicy::Circumcenter => "circumcenter",
            OriginPolicy::SteinerPoint => "steiner",
        })
    }
}

impl FromStr for OriginPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as-given" => Ok(OriginPolicy::AsGiven),
            "circumcenter" => Ok(OriginPolicy::Circumcenter),
            "steiner" | "steiner-point" => Ok(OriginPolicy::SteinerPoint),
            _ => Err(Error::Usage(format!(
                "unknown origin policy '{s}' (expected as-given, circumcenter or steiner)"
            ))),
        }
    }
}

/// The formula a check evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CheckFamily {
    AfIdentity,
    Minkowski,
    WeightedMinkowski(PhiSpec),
    SuppIdentity(PhiSpec),
    SuppJensenBounds(PhiSpec),
    HnX2,
    Thm1Identity,
    Circumradius,
    RnInvU,
    RnLog,
    TanRn(f64),
    UmRnI(f64),
    UmRnII(f64),
    AfClassical,
    AreaVolumeAf,
    KmWeight,
    GiraoWeight,
    Km2Weight,
    SteinerMin,
    GroemerBound,
    CorIsop,
    HausdorffL2,
}

/// One registered check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckSpec {
    pub id: String,
    pub kind: CheckKind,
    pub family: CheckFamily,
    pub k: usize,
    pub hypotheses: Vec<Hypothesis>,
    pub origin: OriginPolicy,
    /// Comparison inequalities the theory does not guarantee in general.
    pub exploratory: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "skipped-hypothesis")]
    SkippedHypothesis,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::SkippedHypothesis => "skipped-hypothesis",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisStatus {
    pub passed: bool,
    /// Human-readable summary; names the failing level and worst node.
    pub detail: String,
    pub worst_node: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridMeta {
    pub size: String,
    pub refined_size: Option<String>,
    /// `max(|lhs(N) − lhs(2N)|, |rhs(N) − rhs(2N)|)`.
    pub refinement_delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub id: String,
    pub kind: CheckKind,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs − rhs|` for identities, `rhs − lhs` for inequalities.
    pub residual_or_slack: f64,
    pub tol: f64,
    /// Magnitude of the sides and their constituent terms.
    pub scale: f64,
    pub verdict: Verdict,
    pub hypothesis_status: HypothesisStatus,
    pub grid: GridMeta,
    pub origin: OriginPolicy,
    pub exploratory: bool,
    /// Named intermediate values, including second evaluation routes.
    pub details: Vec<(String, f64)>,
}

impl CheckResult {
    /// Residual divided by the magnitude of the larger side. When both
    /// sides vanish to within `1e-9` of the term scale (equality cases) the
    /// term scale is used instead.
    pub fn relative_residual(&self) -> f64 {
        let side = self.lhs.abs().max(self.rhs.abs());
        let denom = if side > 1e-9 * self.scale { side } else { self.scale };
        if denom == 0.0 {
            self.residual_or_slack.abs()
        } else {
            self.residual_or_slack.abs() / denom
        }
    }

    pub fn detail(&self, name: &str) -> Option<f64> {
        self.details.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

/// The φ functions used by the φ-indexed families.
pub fn registry_phis() -> Vec<PhiSpec> {
    [
        PhiFamily::Identity,
        PhiFamily::Square,
        PhiFamily::Reciprocal,
        PhiFamily::Power(0.5),
        PhiFamily::NegPower(0.5),
        PhiFamily::Log,
        PhiFamily::InvOnePlusPow(0.5),
        PhiFamily::InvOnePlusPow(1.0),
        PhiFamily::InvOnePlusPow(2.0),
    ]
    .into_iter()
    .map(|f| phi_catalog(f).expect("catalog parameters are in range"))
    .collect()
}

pub const TAN_RN_MS: [f64; 4] = [0.5, 1.0, 1.5, 2.0];
pub const UM_RN_I_MS: [f64; 4] = [0.0, 0.25, 0.5, 0.75];
pub const UM_RN_II_MS: [f64; 3] = [0.0, 0.5, 1.0];

fn phi_hypotheses(phi: &PhiSpec, mut base: Vec<Hypothesis>) -> Vec<Hypothesis> {
    if phi.domain() != crate::jensen::PhiDomain::Real {
        base.push(Hypothesis::StarShaped);
    }
    base
}

/// All checks applicable to surfaces of dimension `n`, sorted by id.
pub fn registry(n: usize) -> Vec<CheckSpec> {
    use CheckFamily as F;
    use Hypothesis as H;
    let mut out = Vec::new();
    let mut push = |id: String, kind, family, k, hypotheses, origin, exploratory| {
        out.push(CheckSpec {
            id,
            kind,
            family,
            k,
            hypotheses,
            origin,
            exploratory,
        })
    };
    let ident = CheckKind::Identity;
    let ineq = CheckKind::Inequality;
    let given = OriginPolicy::AsGiven;
    let circ = OriginPolicy::Circumcenter;

    for k in 1..=n {
        push(format!("af-identity-{k}"), ident, F::AfIdentity, k, vec![H::KNonNegative(k)], given, false);
        push(format!("minkowski-{k}"), ident, F::Minkowski, k, vec![], given, false);
        push(format!("af-classical-{k}"), ineq, F::AfClassical, k, vec![H::Convex], given, false);
        push(format!("rn-inv-u-{k}"), ineq, F::RnInvU, k, vec![H::StarShaped, H::KPositive(k - 1)], circ, false);
        push(format!("rn-log-{k}"), ineq, F::RnLog, k, vec![H::StarShaped, H::KPositive(k)], circ, false);
        for m in TAN_RN_MS {
            push(format!("tan-rn-{k}-{m}"), ineq, F::TanRn(m), k, vec![H::Convex], circ, false);
        }
        for m in UM_RN_I_MS {
            push(format!("um-rn-i-{k}-{m}"), ineq, F::UmRnI(m), k, vec![H::StrictlyConvex], circ, false);
        }
        for m in UM_RN_II_MS {
            push(format!("um-rn-ii-{k}-{m}"), ineq, F::UmRnII(m), k, vec![H::StrictlyConvex], circ, false);
        }
        for phi in registry_phis() {
            push(
                format!("weighted-minkowski-{phi}-{k}"),
                ident,
                F::WeightedMinkowski(phi),
                k,
                phi_hypotheses(&phi, vec![]),
                given,
                false,
            );
        }
        if k >= 2 {
            push(format!("km2-weight-{k}"), ineq, F::Km2Weight, k, vec![H::KPositive(k)], given, false);
        }
    }
    for k in 0..=n {
        push(format!("circumradius-{k}"), ineq, F::Circumradius, k, vec![H::KPositive(k)], circ, false);
        for phi in registry_phis() {
            push(
                format!("supp-identity-{phi}-{k}"),
                ident,
                F::SuppIdentity(phi),
                k,
                phi_hypotheses(&phi, vec![H::KNonNegative(k)]),
                given,
                false,
            );
            push(
                format!("supp-jensen-bounds-{phi}-{k}"),
                ineq,
                F::SuppJensenBounds(phi),
                k,
                phi_hypotheses(&phi, vec![H::KNonNegative(k)]),
                given,
                false,
            );
        }
    }
    push("hn-x2".into(), ineq, F::HnX2, n, vec![H::Convex], given, false);
    push("thm1-identity".into(), ident, F::Thm1Identity, n, vec![H::Convex], given, false);
    push("area-volume-af".into(), ineq, F::AreaVolumeAf, 1, vec![H::Convex], given, true);
    push("km-weight".into(), ineq, F::KmWeight, 1, vec![H::StarShaped, H::KNonNegative(1)], given, false);
    push("girao-weight".into(), ineq, F::GiraoWeight, 1, vec![H::StarShaped, H::KNonNegative(1)], given, false);
    push("steiner-min".into(), ineq, F::SteinerMin, n, vec![H::Convex], given, false);
    push("groemer-bound".into(), ineq, F::GroemerBound, n, vec![H::Convex], given, false);
    push("cor-isop".into(), ineq, F::CorIsop, n, vec![H::Convex], OriginPolicy::SteinerPoint, false);
    push("hausdorff-l2".into(), ineq, F::HausdorffL2, n, vec![H::Convex], given, false);
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

/// The rows of the convex-curve summary table, one check per row.
pub const TABLE1: [&str; 10] = [
    "af-identity-1",
    "hn-x2",
    "rn-inv-u-1",
    "rn-log-1",
    "tan-rn-1-0.5",
    "tan-rn-1-1.5",
    "um-rn-i-1-0.5",
    "um-rn-ii-1-0.5",
    "thm1-identity",
    "cor-isop",
];

/// Resolves a selection (`all`, `table1`, or explicit ids) against the
/// registry for dimension `n`.
pub fn select(n: usize, selection: &[String]) -> Result<Vec<CheckSpec>> {
    let reg = registry(n);
    let mut ids: Vec<String> = Vec::new();
    for s in selection {
        match s.as_str() {
            "all" => ids.extend(reg.iter().map(|c| c.id.clone())),
            "table1" if n == 1 => ids.extend(TABLE1.iter().map(|s| s.to_string())),
            "table1" => return Err(Error::Usage("the table1 selection applies to curves (dim 1)".into())),
            _ => ids.push(s.clone()),
        }
    }
    ids.sort();
    ids.dedup();
    ids.iter()
        .map(|id| {
            reg.iter()
                .find(|c| &c.id == id)
                .cloned()
                .ok_or_else(|| Error::Usage(format!("unknown check id '{id}' for dimension {n}")))
        })
        .collect()
}
