use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::CheckFamily;
use crate::error::{Error, Result};
use crate::geometry::{SampleSet, SphereGrid};
use crate::jensen::{jensen_parts_with, phi_values, second_derivative_bounds, PhiSpec, RangeInterval};
use crate::measures::{
    circumball, diameter, hausdorff_to_ball, integrate, isoperimetric_deficit, l2_distance_support,
    l2_distance_to_ball_sq, newton_form_integral, quermass, steiner_point, steiner_point_samples, volume,
    weighted_curvature_integral, weighted_l2_distance_sq, Ball, BodyConstants,
};

/// A sampled surface at one origin and one grid, with lazily cached φ values.
pub(crate) struct Prepared {
    pub set: SampleSet,
    pub grid: SphereGrid,
    phis: Mutex<HashMap<String, Arc<Vec<f64>>>>,
}

impl Prepared {
    pub fn new(set: SampleSet, grid: SphereGrid) -> Self {
        Prepared {
            set,
            grid,
            phis: Mutex::new(HashMap::new()),
        }
    }

    fn phi_values(&self, phi: &PhiSpec) -> Result<Arc<Vec<f64>>> {
        let key = phi.to_string();
        if let Some(v) = self.phis.lock().expect("phi cache poisoned").get(&key) {
            return Ok(v.clone());
        }
        let v = Arc::new(phi_values(&self.set, phi)?);
        self.phis.lock().expect("phi cache poisoned").insert(key, v.clone());
        Ok(v)
    }

    fn steiner(&self) -> Vector3<f64> {
        match self.set.support_field() {
            Some(h) => steiner_point(h, &self.grid),
            None => steiner_point_samples(&self.set),
        }
    }
}

/// Both sides of one check plus the magnitude used to scale its tolerance.
pub(crate) struct Evaluation {
    pub lhs: f64,
    pub rhs: f64,
    pub scale: f64,
    pub details: Vec<(String, f64)>,
}

impl Evaluation {
    fn new(lhs: f64, rhs: f64, terms: &[f64]) -> Self {
        let scale = terms.iter().fold(lhs.abs().max(rhs.abs()), |a, t| a.max(t.abs()));
        Evaluation {
            lhs,
            rhs,
            scale,
            details: Vec::new(),
        }
    }

    fn with(mut self, name: &str, value: f64) -> Self {
        self.details.push((name.to_string(), value));
        self
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::Hypothesis(format!("{name} = {v:.6e} is not positive")))
    }
}

struct Quermass {
    /// `I_{k-2}`, `I_{k-1}`, `I_k`.
    km2: f64,
    km1: f64,
    k: f64,
}

impl Quermass {
    fn new(set: &SampleSet, k: usize) -> Result<Self> {
        let k = k as i32;
        let q = |j: i32| if j < -1 { Ok(f64::NAN) } else { quermass(set, j) };
        Ok(Quermass {
            km2: q(k - 2)?,
            km1: q(k - 1)?,
            k: q(k)?,
        })
    }

    fn af_deficit(&self) -> f64 {
        self.km1 * self.km1 - self.k * self.km2
    }
}

fn x2_integral(set: &SampleSet, k: usize) -> Result<f64> {
    weighted_curvature_integral(set, k, |a| a.x2)
}

/// `δ_2(Ω, B_0(I_{n-1}/ω_n))²` through `dθ = H_n dμ`, with the support-field
/// value when one is available.
fn steiner_radius_distance(p: &Prepared, r: f64) -> Result<(f64, Option<f64>)> {
    let n = p.set.dim();
    let sample_route = weighted_l2_distance_sq(&p.set, n, r)?;
    let field_route = match p.set.support_field() {
        Some(h) => Some(l2_distance_support(h, &vec![r; h.len()], &p.grid)?.powi(2)),
        None => None,
    };
    Ok((sample_route, field_route))
}

fn thm1_sides(p: &Prepared) -> Result<Evaluation> {
    let set = &p.set;
    let n = set.dim();
    let c = BodyConstants::new(n);
    let q = Quermass::new(set, n)?;
    let x2 = x2_integral(set, n)?;
    let a = (n as f64 + 1.0) * q.km1 * q.km1 / c.omega_n;
    let b = n as f64 * q.km2;
    let lhs = x2 - a + b;
    let r = q.km1 / c.omega_n;
    let (d2, d2_field) = steiner_radius_distance(p, r)?;
    let rhs = (n as f64 + 1.0) * d2;
    let mut e = Evaluation::new(lhs, rhs, &[x2, a, b]).with("radius", r).with("delta2_sq", d2);
    if let Some(f) = d2_field {
        e = e.with("rhs_support_route", (n as f64 + 1.0) * f);
    }
    Ok(e)
}

/// `∫ |H_k u φ'(u)| dμ`, the size of rounding errors in `φ(u)` propagated
/// through the integrals. Keeps the scale meaningful when `φ(u)` vanishes.
fn phi_sensitivity(set: &SampleSet, k: usize, phi: &PhiSpec) -> f64 {
    integrate(set, |j| {
        let u = set.samples()[j].u;
        (set.h(j, k) * u * phi.d1(u)).abs()
    })
}

/// Size of the terms whose difference is the isoperimetric deficit.
fn iso_scale(set: &SampleSet) -> f64 {
    let n = set.dim();
    (quermass(set, 0).unwrap_or(0.0) / BodyConstants::new(n).omega_n).powi(n as i32 + 1)
}

fn two_distances(set: &SampleSet, k: usize, q: &Quermass) -> Result<(f64, f64)> {
    let upper = weighted_l2_distance_sq(set, k, q.km1 / q.k)?;
    let lower = weighted_l2_distance_sq(set, k - 1, q.km2 / q.km1)?;
    Ok((upper, lower))
}

pub(crate) fn evaluate(family: &CheckFamily, k: usize, p: &Prepared) -> Result<Evaluation> {
    let set = &p.set;
    let n = set.dim();
    let c = BodyConstants::new(n);
    Ok(match *family {
        CheckFamily::AfIdentity => {
            let q = Quermass::new(set, k)?;
            positive(&format!("I_{k}"), q.k)?;
            let def = q.af_deficit() / q.k;
            let d2 = weighted_l2_distance_sq(set, k, q.km1 / q.k)?;
            let rhs = newton_form_integral(set, k, |_| 1.0)?;
            Evaluation::new(def + d2, rhs, &[q.km1 * q.km1 / q.k, q.km2])
                .with("deficit_term", def)
                .with("distance_term", d2)
        }
        CheckFamily::Minkowski => {
            let lhs = quermass(set, k as i32 - 1)?;
            let rhs = weighted_curvature_integral(set, k, |a| a.u)?;
            Evaluation::new(lhs, rhs, &[])
        }
        CheckFamily::WeightedMinkowski(phi) => {
            let vals = p.phi_values(&phi)?;
            let lhs = integrate(set, |j| vals[j] * (set.h(j, k - 1) - set.h(j, k) * set.samples()[j].u));
            let mag = integrate(set, |j| {
                vals[j].abs() * (set.h(j, k - 1).abs() + (set.h(j, k) * set.samples()[j].u).abs())
            });
            let sens = integrate(set, |j| {
                let s = &set.samples()[j];
                (s.u * phi.d1(s.u)).abs() * (set.h(j, k - 1).abs() + (set.h(j, k) * s.u).abs())
            });
            let rhs = -newton_form_integral(set, k, |u| phi.d1(u))?;
            Evaluation::new(lhs, rhs, &[mag, sens])
        }
        CheckFamily::SuppIdentity(phi) => {
            let vals = p.phi_values(&phi)?;
            let parts = jensen_parts_with(set, k, &phi, &vals)?;
            let mag = integrate(set, |j| (set.h(j, k) * vals[j]).abs());
            let rhs = parts.phi_at_mean + parts.deficit;
            let sens = phi_sensitivity(set, k, &phi);
            Evaluation::new(parts.phi_integral, rhs, &[mag, parts.phi_at_mean, sens])
                .with("taylor_route", parts.deficit)
                .with("direct_route", parts.phi_integral - parts.phi_at_mean)
                .with("ubar", parts.ubar)
        }
        CheckFamily::SuppJensenBounds(phi) => {
            let vals = p.phi_values(&phi)?;
            let parts = jensen_parts_with(set, k, &phi, &vals)?;
            let d2 = weighted_l2_distance_sq(set, k, parts.ubar)?;
            let range = RangeInterval::of_support(set).hull(parts.ubar);
            let (lo, hi) = second_derivative_bounds(&phi, range)?;
            let lower = 0.5 * lo * d2;
            let upper = 0.5 * hi * d2;
            let mag = integrate(set, |j| (set.h(j, k) * vals[j]).abs());
            let (lhs, rhs) = if parts.deficit - lower <= upper - parts.deficit {
                (lower, parts.deficit)
            } else {
                (parts.deficit, upper)
            };
            let sens = phi_sensitivity(set, k, &phi);
            Evaluation::new(lhs, rhs, &[mag, lower, upper, sens])
                .with("lower_bound", lower)
                .with("deficit", parts.deficit)
                .with("upper_bound", upper)
        }
        CheckFamily::HnX2 => {
            let q = Quermass::new(set, n)?;
            let x2 = x2_integral(set, n)?;
            let r = q.km1 / c.omega_n;
            let (d2, _) = steiner_radius_distance(p, r)?;
            let lhs = n as f64 * d2;
            let sub = ((n as f64 + 1.0) * q.km1 * q.km1 - n as f64 * c.omega_n * q.km2) / c.omega_n;
            Evaluation::new(lhs, x2 - sub, &[x2, sub])
        }
        CheckFamily::Thm1Identity => thm1_sides(p)?,
        CheckFamily::Circumradius => {
            let q = Quermass::new(set, k)?;
            positive(&format!("I_{k}"), q.k)?;
            let rho = circumball(set).radius;
            Evaluation::new(q.km1 / q.k, rho, &[])
        }
        CheckFamily::RnInvU => {
            let q = Quermass::new(set, k)?;
            positive(&format!("I_{}", k as i32 - 2), q.km2)?;
            positive(&format!("I_{}", k - 1), q.km1)?;
            let r = circumball(set).radius;
            let d2 = weighted_l2_distance_sq(set, k - 1, q.km2 / q.km1)?;
            let def = q.af_deficit() / q.km2;
            let rhs = newton_form_integral(set, k, |u| 1.0 / (u * u))?;
            Evaluation::new(def + d2 / r.powi(3), rhs, &[q.km1 * q.km1 / q.km2])
                .with("circumradius", r)
                .with("deficit_term", def)
        }
        CheckFamily::RnLog => {
            let q = Quermass::new(set, k)?;
            for (name, v) in [(k as i32, q.k), (k as i32 - 1, q.km1), (k as i32 - 2, q.km2)] {
                positive(&format!("I_{name}"), v)?;
            }
            let r = circumball(set).radius;
            let (dk, dkm1) = two_distances(set, k, &q)?;
            let log_term = q.km1 * (q.km1 * q.km1 / (q.k * q.km2)).ln();
            let lhs = log_term + dk / (2.0 * r) + dkm1 / (2.0 * r * r);
            let rhs = newton_form_integral(set, k, |u| 1.0 / u)?;
            Evaluation::new(lhs, rhs, &[q.km1])
                .with("circumradius", r)
                .with("log_term", log_term)
        }
        CheckFamily::TanRn(m) => {
            let q = Quermass::new(set, k)?;
            positive(&format!("I_{k}"), q.k)?;
            let r = circumball(set).radius;
            let (dk, dkm1) = two_distances(set, k, &q)?;
            let rm = r.powf(m);
            let def = q.k.powf(m - 1.0) * q.af_deficit() / (q.k.powf(m) + q.km1.powf(m));
            let mut lhs = def + (2.0 + (2.0 - m) * rm) / (2.0 * (1.0 + rm).powi(2)) * dk;
            if m <= 1.0 {
                lhs += m / (2.0 * (1.0 + rm).powi(2) * r.powf(1.0 - m)) * dkm1;
            }
            let rhs = newton_form_integral(set, k, |u| 1.0 / (1.0 + u.powf(m)))?;
            Evaluation::new(lhs, rhs, &[q.k.powf(m - 1.0) * q.km1 * q.km1 / (q.k.powf(m) + q.km1.powf(m))])
                .with("circumradius", r)
                .with("deficit_term", def)
        }
        CheckFamily::UmRnI(m) => {
            let q = Quermass::new(set, k)?;
            positive(&format!("I_{k}"), q.k)?;
            let r = circumball(set).radius;
            let (dk, dkm1) = two_distances(set, k, &q)?;
            let def = (q.k / q.km1).powf(1.0 - m) * q.af_deficit() / q.k;
            let lhs = def + (m + 1.0) / (2.0 * r.powf(1.0 - m)) * dk + (1.0 - m) / (2.0 * r.powf(2.0 - m)) * dkm1;
            let rhs = newton_form_integral(set, k, |u| u.powf(m - 1.0))?;
            Evaluation::new(lhs, rhs, &[(q.k / q.km1).powf(1.0 - m) * q.km1 * q.km1 / q.k])
                .with("circumradius", r)
                .with("deficit_term", def)
        }
        CheckFamily::UmRnII(m) => {
            let q = Quermass::new(set, k)?;
            positive(&format!("I_{k}"), q.k)?;
            positive(&format!("I_{}", k as i32 - 2), q.km2)?;
            let r = circumball(set).radius;
            let (dk, dkm1) = two_distances(set, k, &q)?;
            let def = (q.km2 / q.km1).powf(1.0 - m) * q.af_deficit() / q.km2;
            let dist = (1.0 - m) / (2.0 * r.powf(m + 1.0)) * dk + (m + 1.0) / (2.0 * r.powf(m + 2.0)) * dkm1;
            let rhs = newton_form_integral(set, k, |u| u.powf(-m - 1.0))?;
            // Coefficient obtained from the mean value theorem at the larger
            // ratio I_{k-1}/I_k.
            let mvt_def = (q.k / q.km1).powf(m) * q.af_deficit() / q.km1;
            Evaluation::new(def + dist, rhs, &[(q.km2 / q.km1).powf(1.0 - m) * q.km1 * q.km1 / q.km2])
                .with("circumradius", r)
                .with("deficit_term", def)
                .with("mvt_slack", rhs - mvt_def - dist)
        }
        CheckFamily::AfClassical => {
            let q = Quermass::new(set, k)?;
            Evaluation::new(q.k * q.km2, q.km1 * q.km1, &[])
        }
        CheckFamily::AreaVolumeAf => {
            let area = quermass(set, 0)?;
            let lhs = (n as f64 + 1.0) * quermass(set, 1)? * volume(set);
            Evaluation::new(lhs, area * area, &[])
        }
        CheckFamily::KmWeight => {
            let rhs = x2_integral(set, 1)?;
            Evaluation::new((n as f64 + 1.0) * volume(set), rhs, &[])
        }
        CheckFamily::GiraoWeight => {
            let rhs = x2_integral(set, 1)?;
            let area = quermass(set, 0)?;
            let lhs = c.omega_n * (area / c.omega_n).powf((n as f64 + 1.0) / n as f64);
            Evaluation::new(lhs, rhs, &[])
        }
        CheckFamily::Km2Weight => {
            let rhs = x2_integral(set, k)?;
            Evaluation::new(quermass(set, k as i32 - 2)?, rhs, &[])
        }
        CheckFamily::SteinerMin => {
            let z = p.steiner();
            let moment = |x0: Vector3<f64>| {
                integrate(set, |j| set.h(j, n) * (set.samples()[j].x - x0).norm_squared())
            };
            let at_z = moment(z);
            let diam = diameter(set);
            let mut rng = ChaCha8Rng::seed_from_u64(0x57e1);
            let mut best = f64::INFINITY;
            for i in 0..24 {
                let scale = diam * [1e-3, 1e-2, 1e-1][i % 3];
                let mut d = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), 0.0);
                if n == 2 {
                    d[2] = rng.gen_range(-1.0..1.0);
                }
                best = best.min(moment(z + scale * d.normalize()));
            }
            let q = Quermass::new(set, n)?;
            let r = q.km1 / c.omega_n;
            let d2 = l2_distance_to_ball_sq(set, &Ball::new(z, r));
            let identity_rhs = (n as f64 + 1.0) * q.km1 * q.km1 / c.omega_n - n as f64 * q.km2
                + (n as f64 + 1.0) * d2;
            Evaluation::new(at_z, best, &[])
                .with("steiner_x", z[0])
                .with("steiner_y", z[1])
                .with("steiner_z", z[2])
                .with("moment_identity_rhs", identity_rhs)
        }
        CheckFamily::GroemerBound => {
            let z = p.steiner();
            let q = Quermass::new(set, n)?;
            positive(&format!("I_{}", n as i32 - 2), q.km2)?;
            let d2 = l2_distance_to_ball_sq(set, &Ball::new(z, q.km1 / c.omega_n));
            let vol = volume(set);
            let lhs = c.eta_n * vol.powi(n as i32) / q.km2 * d2;
            Evaluation::new(lhs, isoperimetric_deficit(set), &[iso_scale(set)])
        }
        CheckFamily::CorIsop => {
            let thm1 = thm1_sides(p)?;
            let q = Quermass::new(set, n)?;
            let vol = volume(set);
            let factor = (n as f64 + 1.0) * q.km2 / (c.eta_n * vol.powi(n as i32));
            let rhs = factor * isoperimetric_deficit(set);
            Evaluation::new(thm1.lhs, rhs, &[thm1.scale, factor * iso_scale(set)])
                .with("isoperimetric_deficit", isoperimetric_deficit(set))
        }
        CheckFamily::HausdorffL2 => {
            let z = p.steiner();
            let q = Quermass::new(set, n)?;
            let ball = Ball::new(z, q.km1 / c.omega_n);
            let delta = hausdorff_to_ball(set, &ball);
            let d2 = l2_distance_to_ball_sq(set, &ball);
            let far = set
                .samples()
                .iter()
                .fold(0.0f64, |a, s| a.max((s.x - z).norm()));
            let d = diameter(set).max(2.0 * ball.radius).max(far + ball.radius);
            let lhs = c.c_n * d.powi(-(n as i32)) * delta.powi(n as i32 + 2);
            Evaluation::new(lhs, d2, &[ball.radius.powi(2) * quermass(set, 0)?])
                .with("hausdorff", delta)
                .with("union_diameter", d)
        }
    })
}
