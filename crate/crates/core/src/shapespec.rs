//! Strict JSON shape descriptions.
//!
//! ```json
//! {"family": "ball", "dim": 2, "radius": 1.0, "center": [0.3, 0, 0]}
//! {"family": "ellipse", "axes": [2, 1]}
//! {"family": "support_harmonic", "dim": 2, "radius": 1,
//!  "terms": [{"degree": 3, "order": 1, "amplitude": 0.05}]}
//! {"family": "parametric_curve", "x": "2*cos(t)", "y": "sin(t)"}
//! ```
//!
//! Unknown fields are rejected. `center` defaults to the origin and
//! `representation` (ball and ellipse only) to `support`.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::expr::parse_expression;
use crate::geometry::{HarmonicTerm, Representation, Shape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReprName {
    Support,
    Radial,
    Parametric,
}

impl From<ReprName> for Representation {
    fn from(r: ReprName) -> Self {
        match r {
            ReprName::Support => Representation::Support,
            ReprName::Radial => Representation::Radial,
            ReprName::Parametric => Representation::Parametric,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub degree: usize,
    pub order: i64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeSpec {
    Ball {
        dim: Option<usize>,
        radius: f64,
        center: Option<Vec<f64>>,
        representation: Option<ReprName>,
    },
    Ellipse {
        axes: Vec<f64>,
        center: Option<Vec<f64>>,
        representation: Option<ReprName>,
    },
    SupportHarmonic {
        dim: usize,
        radius: f64,
        #[serde(default)]
        terms: Vec<TermSpec>,
        center: Option<Vec<f64>>,
    },
    RadialHarmonic {
        dim: usize,
        radius: f64,
        #[serde(default)]
        terms: Vec<TermSpec>,
        center: Option<Vec<f64>>,
    },
    ParametricCurve {
        x: String,
        y: String,
        center: Option<Vec<f64>>,
    },
}

/// Parses a shape description; JSON and schema errors become
/// [`Error::Parse`], bad values [`Error::Config`].
pub fn parse_shape_spec(document: &str) -> Result<ShapeSpec> {
    let spec: ShapeSpec = serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    spec.validate()?;
    Ok(spec)
}

fn positive(radius: f64) -> Result<()> {
    if radius > 0.0 && radius.is_finite() {
        Ok(())
    } else {
        Err(Error::Config("radius must be positive".into()))
    }
}

fn center_or_origin(center: &Option<Vec<f64>>, dim: usize) -> Vec<f64> {
    center.clone().unwrap_or_else(|| vec![0.0; dim + 1])
}

fn terms(ts: &[TermSpec]) -> Vec<HarmonicTerm> {
    ts.iter().map(|t| HarmonicTerm::new(t.degree, t.order, t.amplitude)).collect()
}

impl ShapeSpec {
    /// Surface dimension; a ball without `dim` takes it from `center`, or
    /// is a circle.
    pub fn dim(&self) -> usize {
        match self {
            ShapeSpec::Ball { dim, center, .. } => dim.unwrap_or_else(|| center.as_ref().map_or(1, |c| c.len().max(2) - 1)),
            ShapeSpec::Ellipse { axes, .. } => axes.len().max(2) - 1,
            ShapeSpec::SupportHarmonic { dim, .. } | ShapeSpec::RadialHarmonic { dim, .. } => *dim,
            ShapeSpec::ParametricCurve { .. } => 1,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ShapeSpec::Ball { radius, .. }
            | ShapeSpec::SupportHarmonic { radius, .. }
            | ShapeSpec::RadialHarmonic { radius, .. } => positive(*radius)?,
            _ => {}
        }
        self.to_shape().map(|_| ())
    }

    pub fn to_shape(&self) -> Result<Shape> {
        let dim = self.dim();
        match self {
            ShapeSpec::Ball {
                radius,
                center,
                representation,
                ..
            } => Shape::ball(
                dim,
                *radius,
                &center_or_origin(center, dim),
                representation.unwrap_or(ReprName::Support).into(),
            ),
            ShapeSpec::Ellipse {
                axes,
                center,
                representation,
            } => Shape::ellipsoid(
                axes,
                &center_or_origin(center, dim),
                representation.unwrap_or(ReprName::Support).into(),
            ),
            ShapeSpec::SupportHarmonic {
                radius,
                terms: ts,
                center,
                ..
            } => Shape::support_harmonic(dim, *radius, terms(ts), &center_or_origin(center, dim)),
            ShapeSpec::RadialHarmonic {
                radius,
                terms: ts,
                center,
                ..
            } => Shape::radial_harmonic(dim, *radius, terms(ts), &center_or_origin(center, dim)),
            ShapeSpec::ParametricCurve { x, y, center } => {
                let parse = |name: &str, src: &str| {
                    parse_expression(src).map_err(|e| Error::Parse(format!("{name} coordinate {e}")))
                };
                Shape::parametric(parse("x", x)?, parse("y", y)?, &center_or_origin(center, 1))
            }
        }
    }
}
