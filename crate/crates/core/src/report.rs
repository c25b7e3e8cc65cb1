//! JSON and CSV report writers with fixed field order and 17 significant
//! digits, so identical inputs give byte-identical output.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::checks::{CheckResult, ConvergenceRow, Verdict};
use crate::error::{Error, Result};
use crate::oracle::OracleReport;

/// Columns of the CSV check report, in order.
pub const CSV_COLUMNS: [&str; 16] = [
    "id",
    "kind",
    "lhs",
    "rhs",
    "residual_or_slack",
    "tol",
    "scale",
    "verdict",
    "hypothesis_passed",
    "hypothesis_detail",
    "worst_node",
    "grid",
    "refined_grid",
    "refinement_delta",
    "origin",
    "exploratory",
];

/// Formats a float with 17 significant digits; non-finite values give an
/// empty string.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

struct Num(f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            RawValue::from_string(format_number(self.0))
                .map_err(serde::ser::Error::custom)?
                .serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

struct OptNum(Option<f64>);

impl Serialize for OptNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            Some(v) => Num(v).serialize(s),
            None => s.serialize_none(),
        }
    }
}

#[derive(Serialize)]
struct HypothesisOut<'a> {
    passed: bool,
    detail: &'a str,
    worst_node: Option<usize>,
}

#[derive(Serialize)]
struct GridOut<'a> {
    size: &'a str,
    refined_size: Option<&'a str>,
    refinement_delta: OptNum,
}

struct Details<'a>(&'a [(String, f64)]);

impl Serialize for Details<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            m.serialize_entry(k, &Num(*v))?;
        }
        m.end()
    }
}

#[derive(Serialize)]
struct ResultOut<'a> {
    id: &'a str,
    kind: String,
    lhs: Num,
    rhs: Num,
    residual_or_slack: Num,
    tol: Num,
    scale: Num,
    verdict: Verdict,
    hypothesis_status: HypothesisOut<'a>,
    grid: GridOut<'a>,
    origin: String,
    exploratory: bool,
    details: Details<'a>,
}

impl<'a> From<&'a CheckResult> for ResultOut<'a> {
    fn from(r: &'a CheckResult) -> Self {
        ResultOut {
            id: &r.id,
            kind: r.kind.to_string(),
            lhs: Num(r.lhs),
            rhs: Num(r.rhs),
            residual_or_slack: Num(r.residual_or_slack),
            tol: Num(r.tol),
            scale: Num(r.scale),
            verdict: r.verdict,
            hypothesis_status: HypothesisOut {
                passed: r.hypothesis_status.passed,
                detail: &r.hypothesis_status.detail,
                worst_node: r.hypothesis_status.worst_node,
            },
            grid: GridOut {
                size: &r.grid.size,
                refined_size: r.grid.refined_size.as_deref(),
                refinement_delta: OptNum(r.grid.refinement_delta),
            },
            origin: r.origin.to_string(),
            exploratory: r.exploratory,
            details: Details(&r.details),
        }
    }
}

#[derive(Serialize)]
struct Summary {
    pass: usize,
    fail: usize,
    skipped: usize,
}

#[derive(Serialize)]
struct ReportOut<'a> {
    summary: Summary,
    results: Vec<ResultOut<'a>>,
}

fn to_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// The JSON check report: a verdict summary and one record per result.
pub fn results_json(results: &[CheckResult]) -> Result<String> {
    let count = |v: Verdict| results.iter().filter(|r| r.verdict == v).count();
    to_pretty(&ReportOut {
        summary: Summary {
            pass: count(Verdict::Pass),
            fail: count(Verdict::Fail),
            skipped: count(Verdict::SkippedHypothesis),
        },
        results: results.iter().map(ResultOut::from).collect(),
    })
}

fn csv_string(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w).map_err(|e| Error::Usage(e.to_string()))?;
    let bytes = w.into_inner().map_err(|e| Error::Usage(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Usage(e.to_string()))
}

/// The CSV check report with the columns of [`CSV_COLUMNS`].
pub fn results_csv(results: &[CheckResult]) -> Result<String> {
    csv_string(|w| {
        w.write_record(CSV_COLUMNS)?;
        for r in results {
            w.write_record([
                r.id.clone(),
                r.kind.to_string(),
                format_number(r.lhs),
                format_number(r.rhs),
                format_number(r.residual_or_slack),
                format_number(r.tol),
                format_number(r.scale),
                r.verdict.to_string(),
                r.hypothesis_status.passed.to_string(),
                r.hypothesis_status.detail.clone(),
                r.hypothesis_status.worst_node.map(|n| n.to_string()).unwrap_or_default(),
                r.grid.size.clone(),
                r.grid.refined_size.clone().unwrap_or_default(),
                r.grid.refinement_delta.map(format_number).unwrap_or_default(),
                r.origin.to_string(),
                r.exploratory.to_string(),
            ])?;
        }
        Ok(())
    })
}

#[derive(Serialize)]
struct RowOut<'a> {
    size: &'a str,
    lhs: Num,
    rhs: Num,
    residual_or_slack: Num,
}

#[derive(Serialize)]
struct ConvergenceOut<'a> {
    check: &'a str,
    rows: Vec<RowOut<'a>>,
}

pub fn convergence_json(check: &str, rows: &[ConvergenceRow]) -> Result<String> {
    to_pretty(&ConvergenceOut {
        check,
        rows: rows
            .iter()
            .map(|r| RowOut {
                size: &r.size,
                lhs: Num(r.lhs),
                rhs: Num(r.rhs),
                residual_or_slack: Num(r.residual_or_slack),
            })
            .collect(),
    })
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> Result<String> {
    csv_string(|w| {
        w.write_record(["size", "lhs", "rhs", "residual_or_slack"])?;
        for r in rows {
            w.write_record([
                r.size.clone(),
                format_number(r.lhs),
                format_number(r.rhs),
                format_number(r.residual_or_slack),
            ])?;
        }
        Ok(())
    })
}

#[derive(Serialize)]
struct OracleOut<'a> {
    quantity: &'a str,
    oracle: Num,
    main: Num,
    rel_error: Num,
    tolerance: Num,
    passed: bool,
}

pub fn oracle_json(reports: &[OracleReport]) -> Result<String> {
    to_pretty(
        &reports
            .iter()
            .map(|r| OracleOut {
                quantity: &r.quantity,
                oracle: Num(r.oracle),
                main: Num(r.main),
                rel_error: Num(r.rel_error),
                tolerance: Num(r.tolerance),
                passed: r.passed(),
            })
            .collect::<Vec<_>>(),
    )
}

pub fn oracle_csv(reports: &[OracleReport]) -> Result<String> {
    csv_string(|w| {
        w.write_record(["quantity", "oracle", "main", "rel_error", "tolerance", "passed"])?;
        for r in reports {
            w.write_record([
                r.quantity.clone(),
                format_number(r.oracle),
                format_number(r.main),
                format_number(r.rel_error),
                format_number(r.tolerance),
                r.passed().to_string(),
            ])?;
        }
        Ok(())
    })
}
