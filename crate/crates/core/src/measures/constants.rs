use std::f64::consts::PI;

/// Volume of the unit ball in `R^d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(d - 2) * 2.0 * PI / d as f64,
    }
}

/// Dimension-dependent constants for hypersurfaces `Σ^n ⊂ R^{n+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyConstants {
    pub n: usize,
    /// `|S^n|`.
    pub omega_n: f64,
    /// `|B^{n+1}|`.
    pub unit_ball_vol: f64,
    /// `(n+2) / (n |B^{n+1}|^n)`.
    pub eta_n: f64,
    /// `2 |B^n| / ((n+1)(n+2))`.
    pub c_n: f64,
}

impl BodyConstants {
    pub fn new(n: usize) -> Self {
        let vol = unit_ball_volume(n + 1);
        let nf = n as f64;
        BodyConstants {
            n,
            omega_n: (nf + 1.0) * vol,
            unit_ball_vol: vol,
            eta_n: (nf + 2.0) / (nf * vol.powi(n as i32)),
            c_n: 2.0 * unit_ball_volume(n) / ((nf + 1.0) * (nf + 2.0)),
        }
    }
}
