//! Per-node surface data and the three samplers that produce it.

use nalgebra::{Matrix2, Vector2, Vector3};

use super::grid::SphereGrid;
use crate::error::{Error, Result};
use crate::symfun::{mean_curvatures, CurvatureTuple, Small};

/// Geometric state of the hypersurface at one quadrature node.
#[derive(Debug, Clone)]
pub struct SurfaceSample {
    /// Position `X`.
    pub x: Vector3<f64>,
    /// Outward unit normal `ν`.
    pub nu: Vector3<f64>,
    /// Support value `u = ⟨X, ν⟩`.
    pub u: f64,
    pub kappa: CurvatureTuple,
    /// Components of `X^T = X − uν` along the principal directions.
    pub tangential_comps: Small,
    /// Area Jacobian: `dμ = jac · (grid weight)`.
    pub jac: f64,
}

impl SurfaceSample {
    pub fn dim(&self) -> usize {
        self.kappa.dim()
    }

    /// `|X^T|²` from the principal-frame components.
    pub fn tangential_norm2(&self) -> f64 {
        self.tangential_comps.iter().map(|p| p * p).sum()
    }
}

/// All samples of one shape on one grid, with the grid weights and the
/// per-node normalized mean curvatures `H_0..H_n` cached.
#[derive(Debug, Clone)]
pub struct SampleSet {
    dim: usize,
    samples: Vec<SurfaceSample>,
    weights: Vec<f64>,
    mean_curv: Vec<Small>,
    grid_label: String,
    support: Option<Vec<f64>>,
}

impl SampleSet {
    /// Assembles a sample set; `weights[j]` is the grid weight of node `j`.
    pub fn new(dim: usize, samples: Vec<SurfaceSample>, weights: Vec<f64>, grid_label: String) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Usage("sample set must be nonempty".into()));
        }
        if samples.len() != weights.len() {
            return Err(Error::Usage(format!(
                "{} samples but {} weights",
                samples.len(),
                weights.len()
            )));
        }
        if let Some(s) = samples.iter().find(|s| s.dim() != dim) {
            return Err(Error::Usage(format!(
                "sample of dimension {} in a set of dimension {dim}",
                s.dim()
            )));
        }
        let mean_curv = samples.iter().map(|s| mean_curvatures(&s.kappa)).collect();
        Ok(SampleSet {
            dim,
            samples,
            weights,
            mean_curv,
            grid_label,
            support: None,
        })
    }

    pub(crate) fn with_support(mut self, h: Vec<f64>) -> Self {
        self.support = Some(h);
        self
    }

    /// Surface dimension `n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[SurfaceSample] {
        &self.samples
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `H_k` at node `j`, `0 ≤ k ≤ n`.
    pub fn h(&self, j: usize, k: usize) -> f64 {
        self.mean_curv[j][k]
    }

    /// Measure of node `j` in `dμ`.
    pub fn area_weight(&self, j: usize) -> f64 {
        self.weights[j] * self.samples[j].jac
    }

    pub fn grid_label(&self) -> &str {
        &self.grid_label
    }

    /// Support function values on the grid nodes when the shape was
    /// sampled from a support function.
    pub fn support_field(&self) -> Option<&[f64]> {
        self.support.as_deref()
    }
}

fn sym_eigen2(a: f64, b: f64, c: f64) -> ([f64; 2], [Vector2<f64>; 2]) {
    let mean = 0.5 * (a + c);
    let half = 0.5 * (a - c);
    let d = (half * half + b * b).sqrt();
    let (l1, l2) = (mean - d, mean + d);
    let scale = a.abs() + c.abs() + b.abs();
    if d <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return ([l1, l2], [Vector2::new(1.0, 0.0), Vector2::new(0.0, 1.0)]);
    }
    let c1 = Vector2::new(b, l1 - a);
    let c2 = Vector2::new(l1 - c, b);
    let v = if c1.norm_squared() >= c2.norm_squared() { c1 } else { c2 };
    let v1 = v.normalize();
    let v2 = Vector2::new(-v1[1], v1[0]);
    ([l1, l2], [v1, v2])
}

fn convexity_check(node: usize, rho: [f64; 2], trace: f64) -> Result<()> {
    let floor = 1e-10 * trace.abs();
    if rho[0] > floor && rho[1] > floor && rho[0].is_finite() && rho[1].is_finite() {
        Ok(())
    } else {
        Err(Error::Convexity {
            node,
            min_eigen: rho[0].min(rho[1]),
            max_eigen: rho[0].max(rho[1]),
        })
    }
}

fn check_len(name: &str, f: &[f64], grid: &SphereGrid) -> Result<()> {
    if f.len() != grid.len() {
        return Err(Error::Usage(format!(
            "{name} has {} values but the grid has {} nodes",
            f.len(),
            grid.len()
        )));
    }
    Ok(())
}

/// Samples the convex hypersurface with support function `h` (values at
/// the grid nodes), parametrized over the sphere as `X = hξ + ∇h`.
pub fn sample_support_body(h: &[f64], grid: &SphereGrid) -> Result<SampleSet> {
    check_len("support field", h, grid)?;
    let d = grid.derivatives(h)?;
    let n = grid.dim();
    let mut out = Vec::with_capacity(grid.len());
    for (j, xi) in grid.nodes().iter().enumerate() {
        let [e1, e2] = grid.frame(j);
        let hj = h[j];
        let g = d.grad[j];
        let sample = if n == 1 {
            let w = d.hess[j][0] + hj;
            convexity_check(j, [w, w], w)?;
            SurfaceSample {
                x: xi * hj + e1 * g[0],
                nu: *xi,
                u: hj,
                kappa: CurvatureTuple::new(&[1.0 / w])?,
                tangential_comps: Small::from_slice(&[g[0]]),
                jac: w,
            }
        } else {
            let [h11, h12, h22] = d.hess[j];
            let (w11, w22) = (h11 + hj, h22 + hj);
            let (rho, vecs) = sym_eigen2(w11, h12, w22);
            convexity_check(j, rho, w11 + w22)?;
            let grad = Vector2::new(g[0], g[1]);
            SurfaceSample {
                x: xi * hj + e1 * g[0] + e2 * g[1],
                nu: *xi,
                u: hj,
                kappa: CurvatureTuple::new(&[1.0 / rho[0], 1.0 / rho[1]])?,
                tangential_comps: Small::from_slice(&[grad.dot(&vecs[0]), grad.dot(&vecs[1])]),
                jac: rho[0] * rho[1],
            }
        };
        out.push(sample);
    }
    Ok(SampleSet::new(n, out, grid.weights().to_vec(), grid.size_label())?.with_support(h.to_vec()))
}

/// Samples the star-shaped hypersurface `X = r(ξ)ξ`.
pub fn sample_radial_graph(r: &[f64], grid: &SphereGrid) -> Result<SampleSet> {
    check_len("radial field", r, grid)?;
    if let Some(j) = r.iter().position(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::StarShaped(format!(
            "radial function is not positive at node {j} (r = {})",
            r[j]
        )));
    }
    let d = grid.derivatives(r)?;
    let n = grid.dim();
    let mut out = Vec::with_capacity(grid.len());
    for (j, xi) in grid.nodes().iter().enumerate() {
        let [e1, e2] = grid.frame(j);
        let rj = r[j];
        let g = d.grad[j];
        let sample = if n == 1 {
            let (r1, r2) = (g[0], d.hess[j][0]);
            let q = (rj * rj + r1 * r1).sqrt();
            SurfaceSample {
                x: xi * rj,
                nu: (xi * rj - e1 * r1) / q,
                u: rj * rj / q,
                kappa: CurvatureTuple::new(&[(rj * rj + 2.0 * r1 * r1 - rj * r2) / (q * q * q)])?,
                tangential_comps: Small::from_slice(&[rj * r1 / q]),
                jac: q,
            }
        } else {
            let [r11, r12, r22] = d.hess[j];
            let gr = Vector2::new(g[0], g[1]);
            let q = (rj * rj + gr.norm_squared()).sqrt();
            let metric = Matrix2::identity() * (rj * rj) + gr * gr.transpose();
            let hess = Matrix2::new(r11, r12, r12, r22);
            let second = (Matrix2::identity() * (rj * rj) + gr * gr.transpose() * 2.0 - hess * rj) / q;
            let chol = metric.cholesky().ok_or_else(|| Error::NodeDomain {
                node: j,
                message: "induced metric is not positive definite".into(),
            })?;
            let linv = chol.l().try_inverse().ok_or_else(|| Error::NodeDomain {
                node: j,
                message: "induced metric is singular".into(),
            })?;
            let c = linv * second * linv.transpose();
            let (kap, ys) = sym_eigen2(c[(0, 0)], 0.5 * (c[(0, 1)] + c[(1, 0)]), c[(1, 1)]);
            let comps: Small = ys
                .iter()
                .map(|y| {
                    let z = linv.transpose() * y;
                    rj * z.dot(&gr)
                })
                .collect();
            let grad_amb = e1 * g[0] + e2 * g[1];
            SurfaceSample {
                x: xi * rj,
                nu: (xi * rj - grad_amb) / q,
                u: rj * rj / q,
                kappa: CurvatureTuple::new(&kap)?,
                tangential_comps: comps,
                jac: rj * q,
            }
        };
        out.push(sample);
    }
    SampleSet::new(n, out, grid.weights().to_vec(), grid.size_label())
}

/// Samples a closed plane curve given its coordinates at the circle-grid
/// nodes `t_j = 2πj/N`. Orientation is normalized so the normal points out
/// of the enclosed region.
pub fn sample_parametric_values(x: &[f64], y: &[f64], grid: &SphereGrid) -> Result<SampleSet> {
    if grid.dim() != 1 {
        return Err(Error::Usage("parametric curves need a circle grid".into()));
    }
    check_len("x coordinate", x, grid)?;
    check_len("y coordinate", y, grid)?;
    let dx = grid.derivatives(x)?;
    let dy = grid.derivatives(y)?;
    let signed_area: Vec<f64> = (0..grid.len())
        .map(|j| 0.5 * (x[j] * dy.grad[j][0] - y[j] * dx.grad[j][0]))
        .collect();
    let orient = if grid.integrate(&signed_area) < 0.0 { -1.0 } else { 1.0 };
    let mut out = Vec::with_capacity(grid.len());
    for j in 0..grid.len() {
        let (x1, y1) = (dx.grad[j][0], dy.grad[j][0]);
        let (x2, y2) = (dx.hess[j][0], dy.hess[j][0]);
        let speed = (x1 * x1 + y1 * y1).sqrt();
        if !(speed >= 1e-10) {
            return Err(Error::Regularity { node: j, speed });
        }
        let pos = Vector3::new(x[j], y[j], 0.0);
        let nu = Vector3::new(y1, -x1, 0.0) * (orient / speed);
        out.push(SurfaceSample {
            x: pos,
            nu,
            u: pos.dot(&nu),
            kappa: CurvatureTuple::new(&[orient * (x1 * y2 - y1 * x2) / speed.powi(3)])?,
            tangential_comps: Small::from_slice(&[(x[j] * x1 + y[j] * y1) / speed]),
            jac: speed,
        });
    }
    SampleSet::new(1, out, grid.weights().to_vec(), grid.size_label())
}
