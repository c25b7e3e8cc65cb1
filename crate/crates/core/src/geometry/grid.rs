//! Quadrature grids on S¹ and S² with spectral tangential differentiation.
//!
//! On S¹ the grid is the uniform periodic grid with trapezoid weights and
//! FFT differentiation. On S² it is the Gauss–Legendre × uniform longitude
//! product grid; derivatives go through a full spherical-harmonic transform
//! (FFT in longitude, Gauss–Legendre projection onto `Λ_l^m` in latitude),
//! which is exact for band-limited fields up to the grid's truncation.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::Vector3;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::harmonics::{legendre_column, legendre_second};
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;

/// First and second tangential derivatives of a node-sampled field, in the
/// orthonormal tangent frame returned by [`SphereGrid::frame`].
///
/// On S¹ only `grad[_][0]` and `hess[_][0]` are meaningful (`f'` and `f''`).
/// On S² `hess` stores the covariant Hessian as `[H11, H12, H22]`.
#[derive(Debug, Clone)]
pub struct Derivatives {
    pub grad: Vec<[f64; 2]>,
    pub hess: Vec<[f64; 3]>,
}

#[derive(Clone)]
struct S2Transform {
    lmax: usize,
    mmax: usize,
    gl_weights: Vec<f64>,
    // Per order m: rows of length lmax - m + 1 for each latitude.
    lam: Vec<Vec<f64>>,
    dlam: Vec<Vec<f64>>,
    ddlam: Vec<Vec<f64>>,
}

#[derive(Clone)]
struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Quadrature nodes and weights on `S^dim` (dim 1 or 2) plus differentiation
/// operators acting on node-sampled scalar fields.
#[derive(Clone)]
pub struct SphereGrid {
    dim: usize,
    nlat: usize,
    nlon: usize,
    colat: Vec<f64>,
    lon: Vec<f64>,
    nodes: Vec<Vector3<f64>>,
    weights: Vec<f64>,
    plans: Plans,
    s2: Option<S2Transform>,
}

impl fmt::Debug for SphereGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SphereGrid")
            .field("dim", &self.dim)
            .field("size", &self.size_label())
            .finish()
    }
}

/// Gauss–Legendre nodes (descending in `[-1, 1]`) and weights.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn plans(n: usize) -> Plans {
    let mut planner = FftPlanner::new();
    Plans {
        forward: planner.plan_fft_forward(n),
        inverse: planner.plan_fft_inverse(n),
    }
}

/// Signed wavenumber of FFT bin `k` on an `n`-point grid; `None` marks the
/// Nyquist bin of an even grid.
fn wavenumber(k: usize, n: usize) -> Option<f64> {
    if 2 * k == n {
        None
    } else if 2 * k < n {
        Some(k as f64)
    } else {
        Some(k as f64 - n as f64)
    }
}

impl SphereGrid {
    /// Uniform grid of `n` angles `θ_j = 2πj/n` on the circle.
    pub fn s1(n: usize) -> Result<Self> {
        if n < 8 {
            return Err(Error::Config(format!("circle grid needs N >= 8, got {n}")));
        }
        let lon: Vec<f64> = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
        let nodes = lon.iter().map(|t| Vector3::new(t.cos(), t.sin(), 0.0)).collect();
        Ok(SphereGrid {
            dim: 1,
            nlat: 1,
            nlon: n,
            colat: vec![],
            lon,
            nodes,
            weights: vec![2.0 * PI / n as f64; n],
            plans: plans(n),
            s2: None,
        })
    }

    /// Gauss–Legendre (in cos colatitude) × uniform longitude grid on S².
    /// Node `(i, j)` is stored at index `i * nlon + j`.
    pub fn s2(nlat: usize, nlon: usize) -> Result<Self> {
        if nlat < 8 || nlon < 16 {
            return Err(Error::Config(format!(
                "sphere grid needs Nlat >= 8 and Nlon >= 16, got {nlat}x{nlon}"
            )));
        }
        let (x, w) = gauss_legendre(nlat);
        let colat: Vec<f64> = x.iter().map(|xi| xi.acos()).collect();
        let lon: Vec<f64> = (0..nlon)
            .map(|j| 2.0 * PI * j as f64 / nlon as f64)
            .collect();
        let mut nodes = Vec::with_capacity(nlat * nlon);
        let mut weights = Vec::with_capacity(nlat * nlon);
        let dphi = 2.0 * PI / nlon as f64;
        for (i, &t) in colat.iter().enumerate() {
            let (st, ct) = t.sin_cos();
            for &p in &lon {
                nodes.push(Vector3::new(st * p.cos(), st * p.sin(), ct));
                weights.push(w[i] * dphi);
            }
        }
        let lmax = nlat - 1;
        let mmax = lmax.min((nlon - 1) / 2);
        let mut lam = Vec::with_capacity(mmax + 1);
        let mut dlam = Vec::with_capacity(mmax + 1);
        let mut ddlam = Vec::with_capacity(mmax + 1);
        for m in 0..=mmax {
            let width = lmax - m + 1;
            let mut a = Vec::with_capacity(nlat * width);
            let mut b = Vec::with_capacity(nlat * width);
            let mut c = Vec::with_capacity(nlat * width);
            for &t in &colat {
                let (v, d) = legendre_column(m, lmax, t);
                for l in m..=lmax {
                    a.push(v[l]);
                    b.push(d[l]);
                    c.push(legendre_second(l, m, t, v[l], d[l]));
                }
            }
            lam.push(a);
            dlam.push(b);
            ddlam.push(c);
        }
        Ok(SphereGrid {
            dim: 2,
            nlat,
            nlon,
            colat,
            lon,
            nodes,
            weights,
            plans: plans(nlon),
            s2: Some(S2Transform {
                lmax,
                mmax,
                gl_weights: w,
                lam,
                dlam,
                ddlam,
            }),
        })
    }

    /// The grid with every resolution parameter doubled.
    pub fn refined(&self) -> Self {
        match self.dim {
            1 => SphereGrid::s1(2 * self.nlon).expect("doubling keeps the grid valid"),
            _ => SphereGrid::s2(2 * self.nlat, 2 * self.nlon).expect("doubling keeps the grid valid"),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(Nlat, Nlon)`; `Nlat = 1` on the circle.
    pub fn shape(&self) -> (usize, usize) {
        (self.nlat, self.nlon)
    }

    /// `"N"` on S¹, `"NlatxNlon"` on S².
    pub fn size_label(&self) -> String {
        if self.dim == 1 {
            self.nlon.to_string()
        } else {
            format!("{}x{}", self.nlat, self.nlon)
        }
    }

    pub fn nodes(&self) -> &[Vector3<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(colatitude, longitude)` of node `j`; on S¹ the colatitude is π/2
    /// and the longitude is the polar angle.
    pub fn angles(&self, j: usize) -> (f64, f64) {
        if self.dim == 1 {
            (PI / 2.0, self.lon[j])
        } else {
            (self.colat[j / self.nlon], self.lon[j % self.nlon])
        }
    }

    /// Orthonormal tangent frame at node `j`: `e_θ` on S¹ (second entry
    /// zero), `(e_θ, e_φ)` on S².
    pub fn frame(&self, j: usize) -> [Vector3<f64>; 2] {
        if self.dim == 1 {
            let t = self.lon[j];
            [Vector3::new(-t.sin(), t.cos(), 0.0), Vector3::zeros()]
        } else {
            let (t, p) = self.angles(j);
            let (st, ct) = t.sin_cos();
            let (sp, cp) = p.sin_cos();
            [
                Vector3::new(ct * cp, ct * sp, -st),
                Vector3::new(-sp, cp, 0.0),
            ]
        }
    }

    /// `Σ_j w_j f_j`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        assert_eq!(f.len(), self.len(), "field length does not match grid");
        let terms: Vec<f64> = f.iter().zip(&self.weights).map(|(a, w)| a * w).collect();
        pairwise_sum(&terms)
    }

    /// Samples `f(ξ)` at every node.
    pub fn sample<F: Fn(&Vector3<f64>) -> f64>(&self, f: F) -> Vec<f64> {
        self.nodes.iter().map(f).collect()
    }

    /// Tangential gradient and covariant Hessian of a node-sampled field.
    pub fn derivatives(&self, f: &[f64]) -> Result<Derivatives> {
        if f.len() != self.len() {
            return Err(Error::Usage(format!(
                "field has {} values but the grid has {} nodes",
                f.len(),
                self.len()
            )));
        }
        if self.dim == 1 {
            Ok(self.derivatives_s1(f))
        } else {
            Ok(self.derivatives_s2(f))
        }
    }

    fn derivatives_s1(&self, f: &[f64]) -> Derivatives {
        let n = self.nlon;
        let mut spec: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.plans.forward.process(&mut spec);
        let mut d1 = spec.clone();
        let mut d2 = spec;
        for k in 0..n {
            match wavenumber(k, n) {
                Some(kk) => {
                    d1[k] *= Complex64::new(0.0, kk);
                    d2[k] *= -kk * kk;
                }
                None => {
                    d1[k] = Complex64::new(0.0, 0.0);
                    d2[k] *= -((n / 2) as f64).powi(2);
                }
            }
        }
        self.plans.inverse.process(&mut d1);
        self.plans.inverse.process(&mut d2);
        let scale = 1.0 / n as f64;
        Derivatives {
            grad: d1.iter().map(|c| [c.re * scale, 0.0]).collect(),
            hess: d2.iter().map(|c| [c.re * scale, 0.0, 0.0]).collect(),
        }
    }

    fn derivatives_s2(&self, f: &[f64]) -> Derivatives {
        let tr = self.s2.as_ref().expect("sphere grid carries its transform");
        let (nlat, nlon) = (self.nlat, self.nlon);
        let (lmax, mmax) = (tr.lmax, tr.mmax);
        let zero = Complex64::new(0.0, 0.0);

        let mut rings: Vec<Vec<Complex64>> = f
            .chunks(nlon)
            .map(|row| {
                let mut r: Vec<Complex64> = row.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                self.plans.forward.process(&mut r);
                r
            })
            .collect();

        // Synthesized half spectra per ring: G, dG/dθ, d²G/dθ².
        let mut g0 = vec![vec![zero; mmax + 1]; nlat];
        let mut g1 = vec![vec![zero; mmax + 1]; nlat];
        let mut g2 = vec![vec![zero; mmax + 1]; nlat];
        let mut coef = vec![zero; lmax + 1];
        for m in 0..=mmax {
            let width = lmax - m + 1;
            let (lam, dlam, ddlam) = (&tr.lam[m], &tr.dlam[m], &tr.ddlam[m]);
            coef[..width].iter_mut().for_each(|c| *c = zero);
            for i in 0..nlat {
                let fw = rings[i][m] * tr.gl_weights[i];
                let row = &lam[i * width..(i + 1) * width];
                for (c, &p) in coef[..width].iter_mut().zip(row) {
                    *c += fw * p;
                }
            }
            for i in 0..nlat {
                let rows = i * width..(i + 1) * width;
                let (mut a, mut b, mut c) = (zero, zero, zero);
                for ((&cf, &p), (&dp, &ddp)) in coef[..width]
                    .iter()
                    .zip(&lam[rows.clone()])
                    .zip(dlam[rows.clone()].iter().zip(&ddlam[rows]))
                {
                    a += cf * p;
                    b += cf * dp;
                    c += cf * ddp;
                }
                g0[i][m] = a;
                g1[i][m] = b;
                g2[i][m] = c;
            }
        }

        let inverse = |half: &dyn Fn(usize) -> Complex64, buf: &mut Vec<Complex64>| -> Vec<f64> {
            buf.iter_mut().for_each(|c| *c = zero);
            for m in 0..=mmax {
                let v = half(m);
                buf[m] = v;
                if m > 0 {
                    buf[nlon - m] = v.conj();
                }
            }
            self.plans.inverse.process(buf);
            buf.iter().map(|c| c.re / nlon as f64).collect()
        };

        let mut grad = vec![[0.0; 2]; nlat * nlon];
        let mut hess = vec![[0.0; 3]; nlat * nlon];
        let mut buf = vec![zero; nlon];
        for i in 0..nlat {
            let im = |m: usize| Complex64::new(0.0, m as f64);
            let ft = inverse(&|m| g1[i][m], &mut buf);
            let ftt = inverse(&|m| g2[i][m], &mut buf);
            let fp = inverse(&|m| im(m) * g0[i][m], &mut buf);
            let fpp = inverse(&|m| -((m * m) as f64) * g0[i][m], &mut buf);
            let ftp = inverse(&|m| im(m) * g1[i][m], &mut buf);
            let (s, c) = self.colat[i].sin_cos();
            let cot = c / s;
            for j in 0..nlon {
                let k = i * nlon + j;
                grad[k] = [ft[j], fp[j] / s];
                hess[k] = [
                    ftt[j],
                    (ftp[j] - cot * fp[j]) / s,
                    fpp[j] / (s * s) + cot * ft[j],
                ];
            }
        }
        rings.clear();
        Derivatives { grad, hess }
    }
}
