//! Pointwise curvature-sign and star-shapedness tests over a sample set.

use std::fmt;

use super::sample::SampleSet;

/// Hypothesis levels that theorem checks may require.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Hypothesis {
    /// All principal curvatures nonnegative.
    Convex,
    /// All principal curvatures positive.
    StrictlyConvex,
    /// `H_j ≥ 0` for `1 ≤ j ≤ k`.
    KConvex(usize),
    /// `H_k ≥ 0`.
    KNonNegative(usize),
    /// `H_k > 0`.
    KPositive(usize),
    /// `u > 0` everywhere: the surface is star-shaped about the origin.
    StarShaped,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hypothesis::Convex => f.write_str("convex"),
            Hypothesis::StrictlyConvex => f.write_str("strictly-convex"),
            Hypothesis::KConvex(k) => write!(f, "{k}-convex"),
            Hypothesis::KNonNegative(k) => write!(f, "H_{k}>=0"),
            Hypothesis::KPositive(k) => write!(f, "H_{k}>0"),
            Hypothesis::StarShaped => f.write_str("star-shaped"),
        }
    }
}

/// Outcome of one hypothesis test, with the node where the tested quantity
/// is smallest.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub level: Hypothesis,
    pub passed: bool,
    pub worst_node: usize,
    pub worst_value: f64,
    pub threshold: f64,
}

impl HypothesisReport {
    pub fn describe(&self) -> String {
        format!(
            "{} {}: minimum {:.6e} at node {} (threshold {:.3e})",
            self.level,
            if self.passed { "holds" } else { "fails" },
            self.worst_value,
            self.worst_node,
            self.threshold
        )
    }
}

/// Relative slack used for "≥ 0" tests, to absorb quadrature-level noise.
const NONNEG_REL: f64 = 1e-9;
/// Relative margin used for "> 0" tests.
const POS_REL: f64 = 1e-12;

fn argmin(values: impl Iterator<Item = f64>) -> (usize, f64) {
    values
        .enumerate()
        .fold((0, f64::INFINITY), |best, (j, v)| if v < best.1 { (j, v) } else { best })
}

fn max_abs(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0f64, |a, v| a.max(v.abs()))
}

/// Tests `level` at every node.
pub fn check_hypotheses(set: &SampleSet, level: Hypothesis) -> HypothesisReport {
    let n = set.dim();
    let samples = set.samples();
    let report = |(node, value): (usize, f64), threshold: f64, strict: bool| HypothesisReport {
        level,
        passed: if strict { value > threshold } else { value >= threshold },
        worst_node: node,
        worst_value: value,
        threshold,
    };
    match level {
        Hypothesis::Convex | Hypothesis::StrictlyConvex => {
            let scale = max_abs(samples.iter().flat_map(|s| s.kappa.as_slice().iter().copied()));
            let worst = argmin(samples.iter().map(|s| s.kappa.min()));
            if level == Hypothesis::Convex {
                report(worst, -NONNEG_REL * scale, false)
            } else {
                report(worst, POS_REL * scale, true)
            }
        }
        Hypothesis::KConvex(k) => {
            let k = k.min(n);
            let mut out = None::<HypothesisReport>;
            for j in 1..=k {
                let scale = max_abs((0..set.len()).map(|i| set.h(i, j)));
                let r = report(argmin((0..set.len()).map(|i| set.h(i, j))), -NONNEG_REL * scale, false);
                let replace = match &out {
                    None => true,
                    Some(o) => o.passed && !r.passed,
                };
                if replace {
                    out = Some(r);
                }
            }
            out.unwrap_or(HypothesisReport {
                level,
                passed: true,
                worst_node: 0,
                worst_value: 1.0,
                threshold: 0.0,
            })
        }
        Hypothesis::KNonNegative(k) | Hypothesis::KPositive(k) => {
            if k > n {
                return HypothesisReport {
                    level,
                    passed: false,
                    worst_node: 0,
                    worst_value: f64::NAN,
                    threshold: 0.0,
                };
            }
            let scale = max_abs((0..set.len()).map(|i| set.h(i, k)));
            let worst = argmin((0..set.len()).map(|i| set.h(i, k)));
            if matches!(level, Hypothesis::KPositive(_)) {
                report(worst, POS_REL * scale, true)
            } else {
                report(worst, -NONNEG_REL * scale, false)
            }
        }
        Hypothesis::StarShaped => {
            let scale = max_abs(samples.iter().map(|s| s.x.norm()));
            report(argmin(samples.iter().map(|s| s.u)), 1e-10 * scale, true)
        }
    }
}
