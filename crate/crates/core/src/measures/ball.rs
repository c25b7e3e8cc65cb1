use nalgebra::{DMatrix, DVector, Vector3};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A closed ball `B_c(r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub center: Vector3<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vector3<f64>, radius: f64) -> Self {
        Ball { center, radius }
    }

    /// Like [`Ball::new`] but rejects non-positive or non-finite radii.
    pub fn checked(center: Vector3<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain(format!("ball radius must be positive, got {radius}")));
        }
        Ok(Ball { center, radius })
    }

    pub fn contains(&self, p: &Vector3<f64>) -> bool {
        (p - self.center).norm() <= self.radius * (1.0 + 1e-12) + 1e-14
    }
}

/// Smallest ball through every point of `support`, living in their affine hull.
fn circumball(support: &[Vector3<f64>]) -> Option<Ball> {
    match support.len() {
        0 => return None,
        1 => return Some(Ball::new(support[0], 0.0)),
        _ => {}
    }
    let p0 = support[0];
    let d: Vec<Vector3<f64>> = support[1..].iter().map(|p| p - p0).collect();
    let m = d.len();
    let g = DMatrix::from_fn(m, m, |i, j| d[i].dot(&d[j]));
    let b = DVector::from_fn(m, |i, _| 0.5 * d[i].norm_squared());
    let scale = g.diagonal().max();
    let lu = g.clone().full_piv_lu();
    let lambda = lu.solve(&b)?;
    if (&g * &lambda - &b).norm() > 1e-10 * scale.max(f64::MIN_POSITIVE)
        || lu.determinant().abs() <= 1e-14 * scale.powi(m as i32)
    {
        return None;
    }
    let mut c = p0;
    for (l, di) in lambda.iter().zip(&d) {
        c += *l * di;
    }
    let r = support.iter().map(|p| (p - c).norm()).fold(0.0, f64::max);
    Some(Ball::new(c, r))
}

/// Smallest ball containing `support` when the points are affinely
/// dependent: the best circumball over proper subsets.
fn degenerate_ball(support: &[Vector3<f64>]) -> Ball {
    let m = support.len();
    let mut best: Option<Ball> = None;
    for mask in 1u32..(1 << m) - 1 {
        let sub: Vec<Vector3<f64>> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| support[i]).collect();
        if let Some(b) = circumball(&sub) {
            if support.iter().all(|p| b.contains(p)) && best.is_none_or(|x| b.radius < x.radius) {
                best = Some(b);
            }
        }
    }
    best.expect("some pair of points spans a containing ball")
}

fn ball_of(support: &[Vector3<f64>]) -> Ball {
    circumball(support).unwrap_or_else(|| degenerate_ball(support))
}

fn move_to_front(
    pts: &[Vector3<f64>],
    order: &mut Vec<usize>,
    end: usize,
    support: &mut Vec<Vector3<f64>>,
    max_support: usize,
) -> Ball {
    let mut ball = if support.is_empty() {
        Ball::new(pts[order[0]], 0.0)
    } else {
        ball_of(support)
    };
    if support.len() == max_support {
        return ball;
    }
    for i in 0..end {
        let p = pts[order[i]];
        if !ball.contains(&p) {
            support.push(p);
            ball = move_to_front(pts, order, i, support, max_support);
            support.pop();
            order[..=i].rotate_right(1);
        }
    }
    ball
}

/// Exact smallest enclosing ball of points in `R^dim` (`dim` is 2 or 3;
/// planar points carry a zero third coordinate).
pub fn min_enclosing_ball(points: &[Vector3<f64>], dim: usize) -> Result<Ball> {
    if points.is_empty() {
        return Err(Error::Usage("min_enclosing_ball needs at least one point".into()));
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5eed));
    let mut support = Vec::with_capacity(dim + 1);
    Ok(move_to_front(points, &mut order, points.len(), &mut support, dim + 1))
}
