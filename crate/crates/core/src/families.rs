//! Seeded random shape families for property tests and randomized suites.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{HarmonicTerm, Shape, SphereGrid};

/// Largest principal curvature accepted for a random convex body.
const MAX_CURVATURE: f64 = 8.0;
/// Smallest radial value accepted for a random star-shaped body.
const MIN_RADIUS: f64 = 0.4;
const SHRINK: f64 = 0.7;
const ATTEMPTS: usize = 40;

/// Parameters shared by the random families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    pub max_degree: usize,
    /// Bound on the absolute amplitude of each harmonic term.
    pub amplitude: f64,
    /// Bound on each coordinate of the random translation.
    pub max_shift: f64,
}

impl FamilyParams {
    pub fn convex() -> Self {
        FamilyParams {
            max_degree: 4,
            amplitude: 0.15,
            max_shift: 0.2,
        }
    }

    pub fn star() -> Self {
        FamilyParams {
            max_degree: 4,
            amplitude: 0.2,
            max_shift: 0.1,
        }
    }
}

fn random_term<R: Rng>(dim: usize, min_degree: usize, params: &FamilyParams, rng: &mut R) -> HarmonicTerm {
    let l = rng.gen_range(min_degree..=params.max_degree);
    let order = if dim == 1 {
        if rng.gen_bool(0.5) {
            l as i64
        } else {
            -(l as i64)
        }
    } else {
        rng.gen_range(-(l as i64)..=l as i64)
    };
    HarmonicTerm::new(l, order, rng.gen_range(-params.amplitude..=params.amplitude))
}

fn random_terms<R: Rng>(dim: usize, min_degree: usize, params: &FamilyParams, rng: &mut R) -> Vec<HarmonicTerm> {
    let count = rng.gen_range(1..=4);
    (0..count).map(|_| random_term(dim, min_degree, params, rng)).collect()
}

fn random_center<R: Rng>(dim: usize, params: &FamilyParams, rng: &mut R) -> Vec<f64> {
    (0..=dim).map(|_| rng.gen_range(-params.max_shift..=params.max_shift)).collect()
}

fn scaled(terms: &[HarmonicTerm], s: f64) -> Vec<HarmonicTerm> {
    terms
        .iter()
        .map(|t| HarmonicTerm::new(t.degree, t.order, t.amplitude * s))
        .collect()
}

fn well_convex(shape: &Shape, grid: &SphereGrid) -> bool {
    match shape.sample(grid) {
        Ok(set) => set
            .samples()
            .iter()
            .all(|s| s.kappa.min() > 0.0 && s.kappa.max() < MAX_CURVATURE),
        Err(_) => false,
    }
}

/// A convex body with support function `1 + Σ a Y` (degrees 2 to
/// `max_degree`), translated by a small random vector. Perturbations that
/// break convexity on `grid` are shrunk until the body is uniformly convex.
pub fn convex_harmonic_body<R: Rng>(dim: usize, params: &FamilyParams, grid: &SphereGrid, rng: &mut R) -> Result<Shape> {
    let terms = random_terms(dim, 2, params, rng);
    let center = random_center(dim, params, rng);
    let mut s = 1.0;
    for _ in 0..ATTEMPTS {
        let shape = Shape::support_harmonic(dim, 1.0, scaled(&terms, s), &center)?;
        if well_convex(&shape, grid) {
            return Ok(shape);
        }
        s *= SHRINK;
    }
    Err(Error::Config("could not shrink a random perturbation to a convex body".into()))
}

/// A star-shaped radial graph `1 + Σ a Y` (degrees 1 to `max_degree`),
/// translated by a small random vector.
pub fn radial_harmonic_body<R: Rng>(dim: usize, params: &FamilyParams, grid: &SphereGrid, rng: &mut R) -> Result<Shape> {
    let terms = random_terms(dim, 1, params, rng);
    let center = random_center(dim, params, rng);
    let mut s = 1.0;
    for _ in 0..ATTEMPTS {
        let base = Shape::radial_harmonic(dim, 1.0, scaled(&terms, s), &vec![0.0; dim + 1])?;
        let ok = base
            .sample(grid)
            .map(|set| set.samples().iter().all(|p| p.x.norm() >= MIN_RADIUS))
            .unwrap_or(false);
        if ok {
            let shape = Shape::radial_harmonic(dim, 1.0, scaled(&terms, s), &center)?;
            if shape.sample(grid).is_ok() {
                return Ok(shape);
            }
        }
        s *= SHRINK;
    }
    Err(Error::Config("could not shrink a random perturbation to a star-shaped body".into()))
}

/// `count` convex bodies from a fixed seed.
pub fn convex_family(dim: usize, count: usize, seed: u64, grid: &SphereGrid) -> Result<Vec<Shape>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = FamilyParams::convex();
    (0..count).map(|_| convex_harmonic_body(dim, &params, grid, &mut rng)).collect()
}

/// `count` star-shaped radial graphs from a fixed seed.
pub fn radial_family(dim: usize, count: usize, seed: u64, grid: &SphereGrid) -> Result<Vec<Shape>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = FamilyParams::star();
    (0..count).map(|_| radial_harmonic_body(dim, &params, grid, &mut rng)).collect()
}
