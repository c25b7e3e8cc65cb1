//! Integral quantities over sampled hypersurfaces: quermassintegrals,
//! weighted curvature integrals, distances to balls, the Steiner point,
//! mean width, circumball and isoperimetric deficit.

mod ball;
mod constants;

pub use ball::{min_enclosing_ball, Ball};
pub use constants::{unit_ball_volume, BodyConstants};

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::geometry::{SampleSet, SphereGrid};
use crate::numeric::pairwise_sum;
use crate::symfun::{binomial, newton_quadratic_unchecked};

/// `∫_Σ f dμ` for a per-node integrand.
pub fn integrate<F: Fn(usize) -> f64>(set: &SampleSet, f: F) -> f64 {
    let terms: Vec<f64> = (0..set.len()).map(|j| set.area_weight(j) * f(j)).collect();
    pairwise_sum(&terms)
}

fn check_k(set: &SampleSet, k: usize) -> Result<()> {
    if k > set.dim() {
        Err(Error::Domain(format!(
            "curvature index {k} out of range 0..={}",
            set.dim()
        )))
    } else {
        Ok(())
    }
}

/// `I_k = ∫ H_k dμ` for `0 ≤ k ≤ n`, and `I_{-1} = ∫ u dμ = (n+1)|Ω|`.
pub fn quermass(set: &SampleSet, k: i32) -> Result<f64> {
    if k == -1 {
        return Ok(integrate(set, |j| set.samples()[j].u));
    }
    if k < -1 {
        return Err(Error::Domain(format!("curvature index {k} out of range -1..={}", set.dim())));
    }
    let k = k as usize;
    check_k(set, k)?;
    Ok(integrate(set, |j| set.h(j, k)))
}

/// Enclosed volume `|Ω| = (1/(n+1)) ∫ u dμ`.
pub fn volume(set: &SampleSet) -> f64 {
    integrate(set, |j| set.samples()[j].u) / (set.dim() + 1) as f64
}

/// Arguments handed to a pointwise weight.
#[derive(Debug, Clone, Copy)]
pub struct WeightArgs {
    pub u: f64,
    /// `|X|²`.
    pub x2: f64,
    pub node: usize,
}

fn checked_values<F: Fn(usize) -> f64>(set: &SampleSet, f: F, what: &str) -> Result<Vec<f64>> {
    (0..set.len())
        .map(|j| {
            let v = f(j);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NodeDomain {
                    node: j,
                    message: format!("{what} is not finite (u = {})", set.samples()[j].u),
                })
            }
        })
        .collect()
}

/// `∫ H_k · weight dμ`.
pub fn weighted_curvature_integral<W: Fn(WeightArgs) -> f64>(set: &SampleSet, k: usize, weight: W) -> Result<f64> {
    check_k(set, k)?;
    let w = checked_values(
        set,
        |j| {
            let s = &set.samples()[j];
            weight(WeightArgs {
                u: s.u,
                x2: s.x.norm_squared(),
                node: j,
            })
        },
        "weight",
    )?;
    Ok(integrate(set, |j| set.h(j, k) * w[j]))
}

/// `T_{k-1} ∘ A (X^T, X^T)` at node `j`.
pub fn newton_quadratic(set: &SampleSet, j: usize, k: usize) -> f64 {
    let s = &set.samples()[j];
    newton_quadratic_unchecked(s.kappa.as_slice(), k, &s.tangential_comps)
}

/// `(1/(k C(n,k))) ∫ T_{k-1} ∘ A (X^T, X^T) ψ(u) dμ`.
pub fn newton_form_integral<P: Fn(f64) -> f64>(set: &SampleSet, k: usize, psi: P) -> Result<f64> {
    let n = set.dim();
    if k == 0 || k > n {
        return Err(Error::Domain(format!("curvature index {k} out of range 1..={n}")));
    }
    let w = checked_values(set, |j| psi(set.samples()[j].u), "psi(u)")?;
    let norm = k as f64 * binomial(n, k);
    Ok(integrate(set, |j| newton_quadratic(set, j, k) * w[j]) / norm)
}

fn require_nonneg_hk(set: &SampleSet, k: usize) -> Result<()> {
    check_k(set, k)?;
    let scale = (0..set.len()).fold(0.0f64, |a, j| a.max(set.h(j, k).abs()));
    if let Some(j) = (0..set.len()).find(|&j| set.h(j, k) < -1e-9 * scale) {
        return Err(Error::Hypothesis(format!(
            "H_{k} = {:.6e} < 0 at node {j}",
            set.h(j, k)
        )));
    }
    Ok(())
}

/// Squared weighted L² distance `∫ (u − r)² H_k dμ` to the ball `B_0(r)`.
pub fn weighted_l2_distance_sq(set: &SampleSet, k: usize, r: f64) -> Result<f64> {
    require_nonneg_hk(set, k)?;
    Ok(integrate(set, |j| (set.samples()[j].u - r).powi(2) * set.h(j, k)))
}

/// `δ_{2,k}(Ω, B_0(r)) = (∫ (u − r)² H_k dμ)^{1/2}`.
pub fn weighted_l2_distance(set: &SampleSet, k: usize, ball: &Ball) -> Result<f64> {
    if ball.center.norm() != 0.0 {
        return Err(Error::Usage("the weighted distance is defined against balls centred at the origin".into()));
    }
    Ok(weighted_l2_distance_sq(set, k, ball.radius)?.sqrt())
}

fn same_grid(a: &[f64], b: &[f64], grid: &SphereGrid) -> Result<()> {
    if a.len() != grid.len() || b.len() != grid.len() {
        return Err(Error::Usage(format!(
            "support fields have {} and {} values but the grid has {} nodes",
            a.len(),
            b.len(),
            grid.len()
        )));
    }
    Ok(())
}

/// `δ_2(K, L) = ‖h_K − h_L‖_{L²(S^n)}` for support fields on one grid.
pub fn l2_distance_support(hk: &[f64], hl: &[f64], grid: &SphereGrid) -> Result<f64> {
    same_grid(hk, hl, grid)?;
    let d: Vec<f64> = hk.iter().zip(hl).map(|(a, b)| (a - b).powi(2)).collect();
    Ok(grid.integrate(&d).sqrt())
}

/// Hausdorff distance `max |h_K − h_L|` over the grid nodes. This is a
/// lower bound for the true supremum that converges with the grid.
pub fn hausdorff_support(hk: &[f64], hl: &[f64]) -> f64 {
    hk.iter().zip(hl).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
}

/// Steiner point `z = (1/|B^{n+1}|) ∫ h(ξ) ξ dθ`.
pub fn steiner_point(h: &[f64], grid: &SphereGrid) -> Vector3<f64> {
    let vol = unit_ball_volume(grid.dim() + 1);
    let mut z = Vector3::zeros();
    for i in 0..3 {
        let f: Vec<f64> = h.iter().zip(grid.nodes()).map(|(hj, x)| hj * x[i]).collect();
        z[i] = grid.integrate(&f) / vol;
    }
    z
}

/// Mean width `2 · (mean of h over the sphere)`.
pub fn mean_width(h: &[f64], grid: &SphereGrid) -> f64 {
    let omega = BodyConstants::new(grid.dim()).omega_n;
    2.0 * grid.integrate(h) / omega
}

/// Steiner point of a convex sample set, pushing the sphere measure forward
/// through the Gauss map (`dθ = H_n dμ`).
pub fn steiner_point_samples(set: &SampleSet) -> Vector3<f64> {
    let n = set.dim();
    let vol = unit_ball_volume(n + 1);
    let mut z = Vector3::zeros();
    for i in 0..3 {
        z[i] = integrate(set, |j| {
            let s = &set.samples()[j];
            set.h(j, n) * s.u * s.nu[i]
        }) / vol;
    }
    z
}

/// Mean width `2 I_{n-1} / ω_n` of a convex sample set.
pub fn mean_width_samples(set: &SampleSet) -> f64 {
    let n = set.dim();
    2.0 * integrate(set, |j| set.h(j, n - 1)) / BodyConstants::new(n).omega_n
}

/// `δ_2(Ω, B_c(r))²` for a convex sample set, via `dθ = H_n dμ`.
pub fn l2_distance_to_ball_sq(set: &SampleSet, ball: &Ball) -> f64 {
    let n = set.dim();
    integrate(set, |j| {
        let s = &set.samples()[j];
        (s.u - ball.center.dot(&s.nu) - ball.radius).powi(2) * set.h(j, n)
    })
}

/// Hausdorff distance between a convex sample set and a ball, as the grid
/// maximum of the support-function difference.
pub fn hausdorff_to_ball(set: &SampleSet, ball: &Ball) -> f64 {
    set.samples()
        .iter()
        .fold(0.0f64, |m, s| m.max((s.u - ball.center.dot(&s.nu) - ball.radius).abs()))
}

/// Diameter of the sampled point set by repeated farthest-point ascent from
/// a few starts. The result never exceeds the true diameter of the samples.
pub fn diameter(set: &SampleSet) -> f64 {
    let pts: Vec<Vector3<f64>> = set.samples().iter().map(|s| s.x).collect();
    let farthest = |p: &Vector3<f64>| {
        pts.iter()
            .enumerate()
            .map(|(i, q)| (i, (q - p).norm()))
            .fold((0, -1.0), |a, b| if b.1 > a.1 { b } else { a })
    };
    let mut best = 0.0f64;
    let starts = [0, pts.len() / 3, (2 * pts.len()) / 3, pts.len() - 1];
    for &s in &starts {
        let mut a = s;
        let mut last = -1.0;
        for _ in 0..16 {
            let (b, d) = farthest(&pts[a]);
            best = best.max(d);
            if d <= last {
                break;
            }
            last = d;
            a = b;
        }
    }
    best
}

/// Isoperimetric deficit `(|Σ|/ω_n)^{n+1} − (|Ω|/|B^{n+1}|)^n`.
pub fn isoperimetric_deficit(set: &SampleSet) -> f64 {
    let n = set.dim();
    let c = BodyConstants::new(n);
    let area = integrate(set, |_| 1.0);
    (area / c.omega_n).powi(n as i32 + 1) - (volume(set) / c.unit_ball_vol).powi(n as i32)
}

/// Smallest ball containing the sampled positions.
pub fn circumball(set: &SampleSet) -> Ball {
    let pts: Vec<Vector3<f64>> = set.samples().iter().map(|s| s.x).collect();
    min_enclosing_ball(&pts, set.dim() + 1).expect("sample sets are nonempty")
}
