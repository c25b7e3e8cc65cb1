//! Declarative shapes: support-function bodies, radial graphs and
//! parametric plane curves, each with a translation offset.

use std::f64::consts::PI;

use nalgebra::Vector3;
use rayon::prelude::*;

use super::grid::SphereGrid;
use super::harmonics::{circle_harmonic, sphere_harmonic, HarmonicTerm};
use super::sample::{sample_parametric_values, sample_radial_graph, sample_support_body, SampleSet};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::numeric::bracketed_root;

/// Colatitude and longitude of a unit vector (on S¹ only the longitude is
/// used).
pub fn sphere_angles(xi: &Vector3<f64>) -> (f64, f64) {
    let theta = xi[2].clamp(-1.0, 1.0).acos();
    let phi = xi[1].atan2(xi[0]);
    (theta, phi)
}

/// `Σ a · Y` at a point of `S^dim`.
pub fn harmonic_sum(dim: usize, terms: &[HarmonicTerm], xi: &Vector3<f64>) -> f64 {
    let (theta, phi) = sphere_angles(xi);
    terms
        .iter()
        .map(|t| {
            let y = if dim == 1 {
                circle_harmonic(t.degree, t.order, phi)[0]
            } else {
                sphere_harmonic(t.degree, t.order, theta, phi)[0]
            };
            t.amplitude * y
        })
        .sum()
}

fn validate_terms(dim: usize, terms: &[HarmonicTerm]) -> Result<()> {
    terms.iter().try_for_each(|t| t.validate(dim))
}

fn validate_axes(dim: usize, axes: &[f64]) -> Result<()> {
    if axes.len() != dim + 1 {
        return Err(Error::Config(format!(
            "expected {} semi-axes, got {}",
            dim + 1,
            axes.len()
        )));
    }
    if axes.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
        return Err(Error::Config("semi-axes must be positive".into()));
    }
    Ok(())
}

fn validate_dim(dim: usize) -> Result<()> {
    if dim == 1 || dim == 2 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "surface dimension must be 1 (curves) or 2 (surfaces), got {dim}"
        )))
    }
}

/// A support function of a body centred at the origin.
#[derive(Debug, Clone, PartialEq)]
pub enum SupportFn {
    /// `radius + Σ a Y`.
    Harmonic { radius: f64, terms: Vec<HarmonicTerm> },
    /// The axis-aligned ellipsoid `h(ξ) = (Σ a_i² ξ_i²)^{1/2}`.
    Ellipsoid { axes: Vec<f64> },
}

impl SupportFn {
    pub fn value(&self, dim: usize, xi: &Vector3<f64>) -> f64 {
        match self {
            SupportFn::Harmonic { radius, terms } => radius + harmonic_sum(dim, terms, xi),
            SupportFn::Ellipsoid { axes } => axes
                .iter()
                .enumerate()
                .map(|(i, a)| (a * xi[i]).powi(2))
                .sum::<f64>()
                .sqrt(),
        }
    }
}

/// A radial function of a star body about the origin.
#[derive(Debug, Clone, PartialEq)]
pub enum RadialFn {
    /// `radius + Σ a Y`.
    Harmonic { radius: f64, terms: Vec<HarmonicTerm> },
    /// The axis-aligned ellipsoid `r(ξ) = (Σ ξ_i² / a_i²)^{-1/2}`.
    Ellipsoid { axes: Vec<f64> },
}

impl RadialFn {
    pub fn value(&self, dim: usize, xi: &Vector3<f64>) -> f64 {
        match self {
            RadialFn::Harmonic { radius, terms } => radius + harmonic_sum(dim, terms, xi),
            RadialFn::Ellipsoid { axes } => {
                let q: f64 = axes
                    .iter()
                    .enumerate()
                    .map(|(i, a)| (xi[i] / a).powi(2))
                    .sum();
                1.0 / q.sqrt()
            }
        }
    }

    fn upper_bound(&self) -> f64 {
        match self {
            RadialFn::Harmonic { radius, terms } => {
                radius
                    + terms
                        .iter()
                        .map(|t| t.amplitude.abs() * ((2 * t.degree + 1) as f64 / (2.0 * PI)).sqrt())
                        .sum::<f64>()
            }
            RadialFn::Ellipsoid { axes } => axes.iter().copied().fold(0.0, f64::max),
        }
    }
}

/// Convex body given by a support function, translated by `shift`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportBody {
    pub dim: usize,
    pub base: SupportFn,
    pub shift: Vector3<f64>,
}

/// Star body given by a radial function about its own origin, translated by
/// `shift`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGraph {
    pub dim: usize,
    pub base: RadialFn,
    pub shift: Vector3<f64>,
}

/// Closed plane curve `(x(t), y(t))`, `t ∈ [0, 2π)`, translated by `shift`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParametricCurve {
    pub x: Expr,
    pub y: Expr,
    pub shift: Vector3<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Support(SupportBody),
    Radial(RadialGraph),
    Parametric(ParametricCurve),
}

/// Which representation to use for the built-in ball and ellipse shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Support,
    Radial,
    Parametric,
}

fn shift_vec(dim: usize, center: &[f64]) -> Result<Vector3<f64>> {
    if center.len() != dim + 1 {
        return Err(Error::Config(format!(
            "center must have {} coordinates, got {}",
            dim + 1,
            center.len()
        )));
    }
    let mut v = Vector3::zeros();
    for (i, c) in center.iter().enumerate() {
        v[i] = *c;
    }
    Ok(v)
}

impl Shape {
    /// Ball of the given radius and center in `R^{dim+1}`.
    pub fn ball(dim: usize, radius: f64, center: &[f64], repr: Representation) -> Result<Shape> {
        validate_dim(dim)?;
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Config("radius must be positive".into()));
        }
        let shift = shift_vec(dim, center)?;
        Ok(match repr {
            Representation::Support => Shape::Support(SupportBody {
                dim,
                base: SupportFn::Harmonic { radius, terms: vec![] },
                shift,
            }),
            Representation::Radial => Shape::Radial(RadialGraph {
                dim,
                base: RadialFn::Harmonic { radius, terms: vec![] },
                shift,
            }),
            Representation::Parametric => {
                if dim != 1 {
                    return Err(Error::Config(
                        "the parametric representation is only available for curves".into(),
                    ));
                }
                let r = |f| {
                    Expr::Bin(
                        crate::expr::BinOp::Mul,
                        Box::new(Expr::Num(radius)),
                        Box::new(Expr::Call(f, Box::new(Expr::Var))),
                    )
                };
                Shape::Parametric(ParametricCurve {
                    x: r(crate::expr::Func::Cos),
                    y: r(crate::expr::Func::Sin),
                    shift,
                })
            }
        })
    }

    /// Axis-aligned ellipse (two semi-axes) or ellipsoid (three).
    pub fn ellipsoid(axes: &[f64], center: &[f64], repr: Representation) -> Result<Shape> {
        let dim = axes.len().saturating_sub(1);
        validate_dim(dim)?;
        validate_axes(dim, axes)?;
        let shift = shift_vec(dim, center)?;
        Ok(match repr {
            Representation::Support => Shape::Support(SupportBody {
                dim,
                base: SupportFn::Ellipsoid { axes: axes.to_vec() },
                shift,
            }),
            Representation::Radial => Shape::Radial(RadialGraph {
                dim,
                base: RadialFn::Ellipsoid { axes: axes.to_vec() },
                shift,
            }),
            Representation::Parametric => {
                if dim != 1 {
                    return Err(Error::Config(
                        "the parametric representation is only available for curves".into(),
                    ));
                }
                let term = |a: f64, f| {
                    Expr::Bin(
                        crate::expr::BinOp::Mul,
                        Box::new(Expr::Num(a)),
                        Box::new(Expr::Call(f, Box::new(Expr::Var))),
                    )
                };
                Shape::Parametric(ParametricCurve {
                    x: term(axes[0], crate::expr::Func::Cos),
                    y: term(axes[1], crate::expr::Func::Sin),
                    shift,
                })
            }
        })
    }

    /// Support body `radius + Σ a Y`.
    pub fn support_harmonic(dim: usize, radius: f64, terms: Vec<HarmonicTerm>, center: &[f64]) -> Result<Shape> {
        validate_dim(dim)?;
        if !(radius > 0.0) {
            return Err(Error::Config("radius must be positive".into()));
        }
        validate_terms(dim, &terms)?;
        Ok(Shape::Support(SupportBody {
            dim,
            base: SupportFn::Harmonic { radius, terms },
            shift: shift_vec(dim, center)?,
        }))
    }

    /// Radial graph `radius + Σ a Y`.
    pub fn radial_harmonic(dim: usize, radius: f64, terms: Vec<HarmonicTerm>, center: &[f64]) -> Result<Shape> {
        validate_dim(dim)?;
        if !(radius > 0.0) {
            return Err(Error::Config("radius must be positive".into()));
        }
        validate_terms(dim, &terms)?;
        Ok(Shape::Radial(RadialGraph {
            dim,
            base: RadialFn::Harmonic { radius, terms },
            shift: shift_vec(dim, center)?,
        }))
    }

    pub fn parametric(x: Expr, y: Expr, center: &[f64]) -> Result<Shape> {
        Ok(Shape::Parametric(ParametricCurve {
            x,
            y,
            shift: shift_vec(1, center)?,
        }))
    }

    /// Surface dimension `n` (1 for curves, 2 for surfaces).
    pub fn dim(&self) -> usize {
        match self {
            Shape::Support(s) => s.dim,
            Shape::Radial(r) => r.dim,
            Shape::Parametric(_) => 1,
        }
    }

    pub fn shift(&self) -> Vector3<f64> {
        match self {
            Shape::Support(s) => s.shift,
            Shape::Radial(r) => r.shift,
            Shape::Parametric(p) => p.shift,
        }
    }

    /// Whether the body is known to be convex by construction, so that
    /// Steiner-point quantities can be read off the support function.
    pub fn is_support(&self) -> bool {
        matches!(self, Shape::Support(_))
    }

    /// The shape translated by `v`. Radial graphs are rejected when the
    /// origin leaves the interior of the translated body.
    pub fn translate(&self, v: &Vector3<f64>) -> Result<Shape> {
        let mut out = self.clone();
        match &mut out {
            Shape::Support(s) => s.shift += v,
            Shape::Parametric(p) => p.shift += v,
            Shape::Radial(r) => {
                r.shift += v;
                r.origin_depth()?;
            }
        }
        Ok(out)
    }

    /// Support-function values on the grid nodes (support bodies only).
    pub fn support_field(&self, grid: &SphereGrid) -> Option<Vec<f64>> {
        match self {
            Shape::Support(s) => Some(grid.sample(|xi| s.base.value(s.dim, xi) + s.shift.dot(xi))),
            _ => None,
        }
    }

    /// Samples the surface on `grid`.
    pub fn sample(&self, grid: &SphereGrid) -> Result<SampleSet> {
        if grid.dim() != self.dim() {
            return Err(Error::Usage(format!(
                "a shape of surface dimension {} needs a grid on S^{}, got S^{}",
                self.dim(),
                self.dim(),
                grid.dim()
            )));
        }
        match self {
            Shape::Support(s) => {
                let h = grid.sample(|xi| s.base.value(s.dim, xi) + s.shift.dot(xi));
                sample_support_body(&h, grid)
            }
            Shape::Radial(r) => sample_radial_graph(&r.radial_values(grid)?, grid),
            Shape::Parametric(p) => {
                let t: Vec<f64> = (0..grid.len()).map(|j| grid.angles(j).1).collect();
                let x: Vec<f64> = t.iter().map(|&t| p.x.eval(t) + p.shift[0]).collect();
                let y: Vec<f64> = t.iter().map(|&t| p.y.eval(t) + p.shift[1]).collect();
                if let Some(j) = x.iter().chain(&y).position(|v| !v.is_finite()) {
                    return Err(Error::NodeDomain {
                        node: j % grid.len(),
                        message: "curve coordinate is not finite".into(),
                    });
                }
                sample_parametric_values(&x, &y, grid)
            }
        }
    }
}

impl RadialGraph {
    /// Value of the base radial function minus the distance, at the base-frame
    /// point `w + ρξ`; positive inside the body.
    fn ray_gap(&self, w: &Vector3<f64>, xi: &Vector3<f64>, rho: f64) -> f64 {
        let p = w + xi * rho;
        let d = p.norm();
        if d == 0.0 {
            return self.base.value(self.dim, xi);
        }
        self.base.value(self.dim, &(p / d)) - d
    }

    /// How far inside the base body the new origin sits (must be positive).
    fn origin_depth(&self) -> Result<f64> {
        let w = -self.shift;
        let d = w.norm();
        let depth = if d == 0.0 {
            self.base.value(self.dim, &Vector3::new(1.0, 0.0, 0.0))
        } else {
            self.base.value(self.dim, &(w / d)) - d
        };
        if depth > 0.0 {
            Ok(depth)
        } else {
            Err(Error::StarShaped(format!(
                "translation by ({:.6}, {:.6}, {:.6}) moves the origin outside the radial body",
                self.shift[0], self.shift[1], self.shift[2]
            )))
        }
    }

    /// Radial function about the current origin, one ray at a time.
    pub fn radial_values(&self, grid: &SphereGrid) -> Result<Vec<f64>> {
        if self.shift == Vector3::zeros() {
            return Ok(grid.sample(|xi| self.base.value(self.dim, xi)));
        }
        self.origin_depth()?;
        let w = -self.shift;
        let hi = 1.001 * (self.base.upper_bound() + w.norm());
        let scan = 24;
        grid.nodes()
            .par_iter()
            .enumerate()
            .map(|(j, xi)| {
                let mut crossings = 0;
                let mut bracket = (0.0, hi);
                let mut prev = (0.0, self.ray_gap(&w, xi, 0.0));
                for s in 1..=scan {
                    let rho = hi * s as f64 / scan as f64;
                    let g = self.ray_gap(&w, xi, rho);
                    if g.signum() != prev.1.signum() {
                        crossings += 1;
                        bracket = (prev.0, rho);
                    }
                    prev = (rho, g);
                }
                if crossings != 1 {
                    return Err(Error::StarShaped(format!(
                        "ray through node {j} crosses the translated surface {crossings} times"
                    )));
                }
                bracketed_root(|rho| self.ray_gap(&w, xi, rho), bracket.0, bracket.1, 1e-15 * hi).ok_or_else(|| {
                    Error::StarShaped(format!("no boundary crossing along the ray through node {j}"))
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    #[test]
    fn translate_updates_support() {
        let grid = SphereGrid::s2(8, 16).unwrap();
        let ball = Shape::ball(2, 1.0, &[0.0; 3], Representation::Support).unwrap();
        let v = Vector3::new(0.1, 0.2, -0.3);
        let moved = ball.translate(&v).unwrap();
        let h = moved.support_field(&grid).unwrap();
        for (hj, xi) in h.iter().zip(grid.nodes()) {
            assert!((hj - (1.0 + v.dot(xi))).abs() < 1e-15);
        }
        assert_eq!(ball.translate(&Vector3::zeros()).unwrap(), ball);
        let back = moved.translate(&-v).unwrap().support_field(&grid).unwrap();
        for hj in back {
            assert!((hj - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn translated_radial_ball_is_off_center_ball() {
        let grid = SphereGrid::s1(32).unwrap();
        let c = Vector3::new(0.3, -0.2, 0.0);
        let shape = Shape::ball(1, 1.0, &[0.0, 0.0], Representation::Radial)
            .unwrap()
            .translate(&c)
            .unwrap();
        let r = match &shape {
            Shape::Radial(g) => g.radial_values(&grid).unwrap(),
            _ => unreachable!(),
        };
        for (rj, xi) in r.iter().zip(grid.nodes()) {
            assert!((((xi * *rj) - c).norm() - 1.0).abs() < 1e-13);
        }
        assert!(matches!(
            Shape::ball(1, 1.0, &[0.0, 0.0], Representation::Radial)
                .unwrap()
                .translate(&Vector3::new(1.5, 0.0, 0.0)),
            Err(Error::StarShaped(_))
        ));
    }

    #[test]
    fn parametric_shift_moves_points() {
        let grid = SphereGrid::s1(16).unwrap();
        let shape = Shape::parametric(
            parse_expression("cos(t)").unwrap(),
            parse_expression("sin(t)").unwrap(),
            &[0.3, 0.0],
        )
        .unwrap();
        let set = shape.sample(&grid).unwrap();
        assert!((set.samples()[0].x[0] - 1.3).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Shape::ball(1, -1.0, &[0.0, 0.0], Representation::Support).is_err());
        assert!(Shape::ball(3, 1.0, &[0.0; 4], Representation::Support).is_err());
        assert!(Shape::ball(2, 1.0, &[0.0; 2], Representation::Support).is_err());
        assert!(Shape::ball(2, 1.0, &[0.0; 3], Representation::Parametric).is_err());
        assert!(Shape::ellipsoid(&[1.0, 0.0], &[0.0, 0.0], Representation::Support).is_err());
        let grid = SphereGrid::s2(8, 16).unwrap();
        let curve = Shape::ball(1, 1.0, &[0.0, 0.0], Representation::Support).unwrap();
        assert!(matches!(curve.sample(&grid), Err(Error::Usage(_))));
    }
}
