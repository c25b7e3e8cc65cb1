use std::sync::OnceLock;

use nalgebra::Vector3;
use rayon::prelude::*;

use super::eval::{evaluate, Evaluation, Prepared};
use super::{select, CheckKind, CheckResult, CheckSpec, GridMeta, HypothesisStatus, OriginPolicy, Verdict};
use crate::error::{Error, Result};
use crate::geometry::{check_hypotheses, Shape, SphereGrid};
use crate::measures::{circumball, steiner_point, steiner_point_samples};

/// Relative floor of every tolerance.
const REL_TOL: f64 = 1e-9;
/// Multiple of the grid-refinement change added to the tolerance.
const REFINE_FACTOR: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Also evaluate on the doubled grid and widen tolerances by the change.
    pub refine: bool,
    /// Replaces the origin of checks registered with [`OriginPolicy::AsGiven`].
    pub origin_override: Option<OriginPolicy>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            refine: true,
            origin_override: None,
        }
    }
}

struct Origin {
    base: Prepared,
    refined: Option<Prepared>,
}

/// Lazily sampled versions of one shape, one per origin policy.
struct Context<'a> {
    shape: &'a Shape,
    grid: SphereGrid,
    refine: bool,
    slots: [OnceLock<Result<Origin>>; 3],
}

fn slot_index(policy: OriginPolicy) -> usize {
    match policy {
        OriginPolicy::AsGiven => 0,
        OriginPolicy::Circumcenter => 1,
        OriginPolicy::SteinerPoint => 2,
    }
}

impl<'a> Context<'a> {
    fn new(shape: &'a Shape, grid: &SphereGrid, refine: bool) -> Self {
        Context {
            shape,
            grid: grid.clone(),
            refine,
            slots: Default::default(),
        }
    }

    fn prepare(&self, shape: &Shape) -> Result<Origin> {
        let base = Prepared::new(shape.sample(&self.grid)?, self.grid.clone());
        let refined = if self.refine {
            let g = self.grid.refined();
            Some(Prepared::new(shape.sample(&g)?, g))
        } else {
            None
        };
        Ok(Origin { base, refined })
    }

    fn center(&self, policy: OriginPolicy) -> Result<Vector3<f64>> {
        let given = self.origin(OriginPolicy::AsGiven)?;
        Ok(match policy {
            OriginPolicy::AsGiven => Vector3::zeros(),
            OriginPolicy::Circumcenter => circumball(&given.base.set).center,
            OriginPolicy::SteinerPoint => match given.base.set.support_field() {
                Some(h) => steiner_point(h, &self.grid),
                None => steiner_point_samples(&given.base.set),
            },
        })
    }

    fn origin(&self, policy: OriginPolicy) -> Result<&Origin> {
        self.slots[slot_index(policy)]
            .get_or_init(|| match policy {
                OriginPolicy::AsGiven => self.prepare(self.shape),
                _ => {
                    let c = self.center(policy)?;
                    self.prepare(&self.shape.translate(&-c)?)
                }
            })
            .as_ref()
            .map_err(Clone::clone)
    }
}

fn is_hypothesis_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::Hypothesis(_) | Error::StarShaped(_) | Error::Convexity { .. } | Error::NodeDomain { .. }
    )
}

fn skipped(spec: &CheckSpec, origin: OriginPolicy, grid: &SphereGrid, status: HypothesisStatus) -> CheckResult {
    CheckResult {
        id: spec.id.clone(),
        kind: spec.kind,
        lhs: f64::NAN,
        rhs: f64::NAN,
        residual_or_slack: f64::NAN,
        tol: f64::NAN,
        scale: f64::NAN,
        verdict: Verdict::SkippedHypothesis,
        hypothesis_status: status,
        grid: GridMeta {
            size: grid.size_label(),
            refined_size: None,
            refinement_delta: None,
        },
        origin,
        exploratory: spec.exploratory,
        details: Vec::new(),
    }
}

fn from_error(spec: &CheckSpec, origin: OriginPolicy, grid: &SphereGrid, e: Error) -> Result<CheckResult> {
    if is_hypothesis_failure(&e) {
        let status = HypothesisStatus {
            passed: false,
            detail: e.to_string(),
            worst_node: match e {
                Error::NodeDomain { node, .. } | Error::Convexity { node, .. } => Some(node),
                _ => None,
            },
        };
        Ok(skipped(spec, origin, grid, status))
    } else {
        Err(e)
    }
}

fn run_in(spec: &CheckSpec, ctx: &Context, opts: &RunOptions) -> Result<CheckResult> {
    let policy = match (spec.origin, opts.origin_override) {
        (OriginPolicy::AsGiven, Some(p)) => p,
        (p, _) => p,
    };
    let origin = match ctx.origin(policy) {
        Ok(o) => o,
        Err(e) => return from_error(spec, policy, &ctx.grid, e),
    };
    let set = &origin.base.set;
    let mut notes = Vec::new();
    for &h in &spec.hypotheses {
        let report = check_hypotheses(set, h);
        if !report.passed {
            let status = HypothesisStatus {
                passed: false,
                detail: report.describe(),
                worst_node: Some(report.worst_node),
            };
            return Ok(skipped(spec, policy, &ctx.grid, status));
        }
        notes.push(report.describe());
    }
    let base: Evaluation = match evaluate(&spec.family, spec.k, &origin.base) {
        Ok(e) => e,
        Err(e) => return from_error(spec, policy, &ctx.grid, e),
    };
    let refined = origin
        .refined
        .as_ref()
        .and_then(|p| evaluate(&spec.family, spec.k, p).ok());
    let delta = refined
        .as_ref()
        .map(|r| (base.lhs - r.lhs).abs().max((base.rhs - r.rhs).abs()));
    let tol = (REL_TOL * base.scale).max(REFINE_FACTOR * delta.unwrap_or(0.0));
    let (residual, passed) = match spec.kind {
        CheckKind::Identity => {
            let r = (base.lhs - base.rhs).abs();
            (r, r <= tol)
        }
        CheckKind::Inequality => {
            let s = base.rhs - base.lhs;
            (s, s >= -tol)
        }
    };
    Ok(CheckResult {
        id: spec.id.clone(),
        kind: spec.kind,
        lhs: base.lhs,
        rhs: base.rhs,
        residual_or_slack: residual,
        tol,
        scale: base.scale,
        verdict: if passed { Verdict::Pass } else { Verdict::Fail },
        hypothesis_status: HypothesisStatus {
            passed: true,
            detail: if notes.is_empty() {
                "none required".into()
            } else {
                notes.join("; ")
            },
            worst_node: None,
        },
        grid: GridMeta {
            size: ctx.grid.size_label(),
            refined_size: origin.refined.as_ref().map(|p| p.grid.size_label()),
            refinement_delta: delta,
        },
        origin: policy,
        exploratory: spec.exploratory,
        details: base.details,
    })
}

/// Runs one check on `shape` sampled on `grid`.
pub fn run_check(spec: &CheckSpec, shape: &Shape, grid: &SphereGrid, opts: &RunOptions) -> Result<CheckResult> {
    run_in(spec, &Context::new(shape, grid, opts.refine), opts)
}

/// Runs the selected checks in parallel; results are sorted by id.
pub fn run_suite(
    shape: &Shape,
    grid: &SphereGrid,
    selection: &[String],
    opts: &RunOptions,
) -> Result<Vec<CheckResult>> {
    let specs = select(shape.dim(), selection)?;
    let ctx = Context::new(shape, grid, opts.refine);
    let mut out = specs
        .par_iter()
        .map(|s| run_in(s, &ctx, opts))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

/// One grid of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub size: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual_or_slack: f64,
}

/// Evaluates one check across a sequence of grids, without refinement.
pub fn convergence_study(shape: &Shape, id: &str, grids: &[SphereGrid]) -> Result<Vec<ConvergenceRow>> {
    if grids.len() < 2 {
        return Err(Error::Usage("a convergence study needs at least two grids".into()));
    }
    let spec = select(shape.dim(), &[id.to_string()])?.remove(0);
    let opts = RunOptions {
        refine: false,
        origin_override: None,
    };
    grids
        .iter()
        .map(|g| {
            let r = run_check(&spec, shape, g, &opts)?;
            Ok(ConvergenceRow {
                size: r.grid.size,
                lhs: r.lhs,
                rhs: r.rhs,
                residual_or_slack: r.residual_or_slack,
            })
        })
        .collect()
}
