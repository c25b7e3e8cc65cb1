//! Real orthonormal harmonics on S¹ and S², plus the associated Legendre
//! tables used by the spectral transform on the Gauss–Legendre grid.
//!
//! Conventions, fixed because shape amplitudes depend on them:
//!
//! * On S¹ the degree-0 harmonic is `1/√(2π)`; order `+l` is `cos(lθ)/√π`
//!   and order `-l` is `sin(lθ)/√π`.
//! * On S², with colatitude `θ` and longitude `φ`, `Y_l0 = Λ_l^0(cos θ)/√(2π)`,
//!   `Y_lm = Λ_l^m(cos θ) cos(mφ)/√π` for `m > 0` and
//!   `Y_l,-m = Λ_l^m(cos θ) sin(mφ)/√π`, where `Λ_l^m` is the associated
//!   Legendre function normalized to unit L² norm on `[-1, 1]` without the
//!   Condon–Shortley phase.
//!
//! All harmonics have unit L² norm with respect to the round measure.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// One term `amplitude · Y_{degree, order}` of a harmonic expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicTerm {
    pub degree: usize,
    pub order: i64,
    pub amplitude: f64,
}

impl HarmonicTerm {
    pub fn new(degree: usize, order: i64, amplitude: f64) -> Self {
        HarmonicTerm {
            degree,
            order,
            amplitude,
        }
    }

    /// Checks that `(degree, order)` names a harmonic on `S^dim`.
    pub fn validate(&self, dim: usize) -> Result<()> {
        if !self.amplitude.is_finite() {
            return Err(Error::Config(format!(
                "harmonic ({}, {}) has a non-finite amplitude",
                self.degree, self.order
            )));
        }
        let l = self.degree as i64;
        let ok = match dim {
            1 => (l == 0 && self.order == 0) || (l > 0 && self.order.abs() == l),
            2 => self.order.abs() <= l,
            _ => false,
        };
        if ok {
            Ok(())
        } else if dim == 1 {
            Err(Error::Config(format!(
                "harmonic ({}, {}) is not valid on the circle: order must be ±degree (or 0 for degree 0)",
                self.degree, self.order
            )))
        } else {
            Err(Error::Config(format!(
                "harmonic ({}, {}) is not valid on the sphere: need |order| <= degree",
                self.degree, self.order
            )))
        }
    }
}

/// Value, first and second derivative of a circle harmonic at angle `theta`.
pub fn circle_harmonic(degree: usize, order: i64, theta: f64) -> [f64; 3] {
    if degree == 0 {
        return [1.0 / (2.0 * PI).sqrt(), 0.0, 0.0];
    }
    let l = degree as f64;
    let c = 1.0 / PI.sqrt();
    let (s, co) = (l * theta).sin_cos();
    if order > 0 {
        [c * co, -c * l * s, -c * l * l * co]
    } else {
        [c * s, c * l * co, -c * l * l * s]
    }
}

/// `Λ_l^m(cos θ)` for `l = m..=lmax` together with `dΛ/dθ`, at one
/// colatitude.
pub fn legendre_column(m: usize, lmax: usize, theta: f64) -> (Vec<f64>, Vec<f64>) {
    let (s, x) = theta.sin_cos();
    let mut val = vec![0.0; lmax + 1];
    let mut der = vec![0.0; lmax + 1];
    if m > lmax {
        return (val, der);
    }
    let mut pmm = 1.0 / 2f64.sqrt();
    for k in 1..=m {
        let kf = k as f64;
        pmm *= ((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * s;
    }
    val[m] = pmm;
    if m < lmax {
        val[m + 1] = (2.0 * m as f64 + 3.0).sqrt() * x * pmm;
    }
    let mf = m as f64;
    for l in (m + 2)..=lmax {
        let lf = l as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let lm1 = lf - 1.0;
        let b = ((lm1 * lm1 - mf * mf) / (4.0 * lm1 * lm1 - 1.0)).sqrt();
        val[l] = a * (x * val[l - 1] - b * val[l - 2]);
    }
    for l in m..=lmax {
        let lf = l as f64;
        let prev = if l > m {
            ((2.0 * lf + 1.0) * (lf * lf - mf * mf) / (2.0 * lf - 1.0)).sqrt() * val[l - 1]
        } else {
            0.0
        };
        der[l] = (lf * x * val[l] - prev) / s;
    }
    (val, der)
}

/// `d²Λ/dθ²` from the associated Legendre equation.
pub fn legendre_second(l: usize, m: usize, theta: f64, val: f64, der: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let lf = l as f64;
    let mf = m as f64;
    -(c / s) * der - (lf * (lf + 1.0) - mf * mf / (s * s)) * val
}

/// Partial derivatives of a scalar field in spherical coordinates:
/// `[f, f_θ, f_φ, f_θθ, f_θφ, f_φφ]`.
pub type SphericalPartials = [f64; 6];

/// Value and coordinate partials of `Y_{l,order}` at `(θ, φ)`.
pub fn sphere_harmonic(degree: usize, order: i64, theta: f64, phi: f64) -> SphericalPartials {
    let m = order.unsigned_abs() as usize;
    let (val, der) = legendre_column(m, degree, theta);
    let p = val[degree];
    let dp = der[degree];
    let ddp = legendre_second(degree, m, theta, p, dp);
    let mf = m as f64;
    let (norm, g, dg, ddg) = if order == 0 {
        (1.0 / (2.0 * PI).sqrt(), 1.0, 0.0, 0.0)
    } else {
        let (s, c) = (mf * phi).sin_cos();
        if order > 0 {
            (1.0 / PI.sqrt(), c, -mf * s, -mf * mf * c)
        } else {
            (1.0 / PI.sqrt(), s, mf * c, -mf * mf * s)
        }
    };
    [
        norm * p * g,
        norm * dp * g,
        norm * p * dg,
        norm * ddp * g,
        norm * dp * dg,
        norm * p * ddg,
    ]
}
