//! The φ catalog and the Jensen deficit `∫ H_k φ(u) dμ − I_k φ(ū)`,
//! `ū = I_{k-1}/I_k`, evaluated through the Taylor remainder of φ.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::SampleSet;
use crate::measures::{integrate, quermass};

/// Families of test functions φ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiFamily {
    Identity,
    Square,
    Reciprocal,
    /// `x^m`, `0 ≤ m < 1`.
    Power(f64),
    /// `x^{-m}`, `0 ≤ m ≤ 1`.
    NegPower(f64),
    Log,
    /// `φ(x) = ∫_0^x dt/(1+t^m)`, `0 < m ≤ 2`.
    InvOnePlusPow(f64),
}

/// Admissible values of `u` for a φ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiDomain {
    Real,
    Positive,
    NonNegative,
}

impl PhiDomain {
    pub fn contains(self, x: f64) -> bool {
        x.is_finite()
            && match self {
                PhiDomain::Real => true,
                PhiDomain::Positive => x > 0.0,
                PhiDomain::NonNegative => x >= 0.0,
            }
    }
}

/// Numeric `Range(u)` over a sample set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeInterval {
    pub lo: f64,
    pub hi: f64,
}

impl RangeInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo <= hi {
            Ok(RangeInterval { lo, hi })
        } else {
            Err(Error::Domain(format!("empty interval [{lo}, {hi}]")))
        }
    }

    pub fn of_support(set: &SampleSet) -> Self {
        let (lo, hi) = set
            .samples()
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), s| (a.min(s.u), b.max(s.u)));
        RangeInterval { lo, hi }
    }

    pub fn hull(self, x: f64) -> Self {
        RangeInterval {
            lo: self.lo.min(x),
            hi: self.hi.max(x),
        }
    }
}

/// A validated member of the φ catalog.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiSpec {
    family: PhiFamily,
}

pub fn phi_catalog(family: PhiFamily) -> Result<PhiSpec> {
    let bad = |what: &str, m: f64| Err(Error::Config(format!("{what}: m = {m} out of range")));
    match family {
        PhiFamily::Power(m) if !(0.0..1.0).contains(&m) => bad("power needs 0 <= m < 1", m),
        PhiFamily::NegPower(m) if !(0.0..=1.0).contains(&m) => bad("neg_power needs 0 <= m <= 1", m),
        PhiFamily::InvOnePlusPow(m) if !(m > 0.0 && m <= 2.0) => bad("inv_one_plus_pow needs 0 < m <= 2", m),
        _ => Ok(PhiSpec { family }),
    }
}

/// `∫_a^b dt/(1+t^m)`, in closed form for `m ∈ {1/2, 1, 2}`.
fn inv_one_plus_pow_integral(m: f64, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if m == 1.0 {
        return ((b - a) / (1.0 + a)).ln_1p();
    }
    if m == 2.0 {
        return ((b - a) / (1.0 + a * b)).atan();
    }
    if m == 0.5 {
        let (sa, sb) = (a.sqrt(), b.sqrt());
        let d = (b - a) / (sa + sb);
        return 2.0 * d - 2.0 * (d / (1.0 + sa)).ln_1p();
    }
    inv_one_plus_pow_quadrature(m, a, b)
}

fn inv_one_plus_pow_quadrature(m: f64, a: f64, b: f64) -> f64 {
    let f = |t: f64| 1.0 / (1.0 + t.powf(m));
    quadrature::double_exponential::integrate(f, a, b, 1e-12 * (b - a).abs()).integral
}

impl PhiSpec {
    pub fn family(&self) -> PhiFamily {
        self.family
    }

    pub fn domain(&self) -> PhiDomain {
        match self.family {
            PhiFamily::Identity | PhiFamily::Square => PhiDomain::Real,
            PhiFamily::InvOnePlusPow(_) => PhiDomain::NonNegative,
            _ => PhiDomain::Positive,
        }
    }

    /// True when φ″ ≥ 0 on the domain.
    pub fn is_convex(&self) -> bool {
        matches!(
            self.family,
            PhiFamily::Identity | PhiFamily::Square | PhiFamily::Reciprocal | PhiFamily::NegPower(_)
        ) || self.family == PhiFamily::Power(0.0)
    }

    /// True when φ″ ≤ 0 on the domain.
    pub fn is_concave(&self) -> bool {
        matches!(
            self.family,
            PhiFamily::Identity | PhiFamily::Power(_) | PhiFamily::Log | PhiFamily::InvOnePlusPow(_)
        ) || self.family == PhiFamily::NegPower(0.0)
    }

    pub fn value(&self, x: f64) -> f64 {
        match self.family {
            PhiFamily::Identity => x,
            PhiFamily::Square => x * x,
            PhiFamily::Reciprocal => 1.0 / x,
            PhiFamily::Power(m) => x.powf(m),
            PhiFamily::NegPower(m) => x.powf(-m),
            PhiFamily::Log => x.ln(),
            PhiFamily::InvOnePlusPow(m) => inv_one_plus_pow_integral(m, 0.0, x),
        }
    }

    pub fn d1(&self, x: f64) -> f64 {
        match self.family {
            PhiFamily::Identity => 1.0,
            PhiFamily::Square => 2.0 * x,
            PhiFamily::Reciprocal => -1.0 / (x * x),
            PhiFamily::Power(m) => m * x.powf(m - 1.0),
            PhiFamily::NegPower(m) => -m * x.powf(-m - 1.0),
            PhiFamily::Log => 1.0 / x,
            PhiFamily::InvOnePlusPow(m) => 1.0 / (1.0 + x.powf(m)),
        }
    }

    pub fn d2(&self, x: f64) -> f64 {
        match self.family {
            PhiFamily::Identity => 0.0,
            PhiFamily::Square => 2.0,
            PhiFamily::Reciprocal => 2.0 / (x * x * x),
            PhiFamily::Power(m) => m * (m - 1.0) * x.powf(m - 2.0),
            PhiFamily::NegPower(m) => m * (m + 1.0) * x.powf(-m - 2.0),
            PhiFamily::Log => -1.0 / (x * x),
            PhiFamily::InvOnePlusPow(m) => {
                if x == 0.0 {
                    return if m == 1.0 { -1.0 } else { 0.0 };
                }
                let xm = x.powf(m);
                -m * xm / x / (1.0 + xm).powi(2)
            }
        }
    }

    /// `φ(b) − φ(a)`.
    pub fn increment(&self, a: f64, b: f64) -> f64 {
        match self.family {
            PhiFamily::InvOnePlusPow(m) => inv_one_plus_pow_integral(m, a, b),
            PhiFamily::Square => (b - a) * (b + a),
            PhiFamily::Log => (b / a).ln(),
            _ => self.value(b) - self.value(a),
        }
    }

    fn require(&self, x: f64) -> Result<()> {
        if self.domain().contains(x) {
            Ok(())
        } else {
            Err(Error::Domain(format!("{self}: argument {x} outside the domain")))
        }
    }
}

impl fmt::Display for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            PhiFamily::Identity => f.write_str("identity"),
            PhiFamily::Square => f.write_str("square"),
            PhiFamily::Reciprocal => f.write_str("reciprocal"),
            PhiFamily::Power(m) => write!(f, "power({m})"),
            PhiFamily::NegPower(m) => write!(f, "neg_power({m})"),
            PhiFamily::Log => f.write_str("log"),
            PhiFamily::InvOnePlusPow(m) => write!(f, "inv_one_plus_pow({m})"),
        }
    }
}

impl FromStr for PhiSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let family = match s {
            "identity" => PhiFamily::Identity,
            "square" => PhiFamily::Square,
            "reciprocal" => PhiFamily::Reciprocal,
            "log" => PhiFamily::Log,
            _ => {
                let (name, rest) = s
                    .split_once('(')
                    .ok_or_else(|| Error::Parse(format!("unknown phi '{s}'")))?;
                let m: f64 = rest
                    .strip_suffix(')')
                    .and_then(|v| v.trim().parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad parameter in phi '{s}'")))?;
                match name {
                    "power" => PhiFamily::Power(m),
                    "neg_power" => PhiFamily::NegPower(m),
                    "inv_one_plus_pow" => PhiFamily::InvOnePlusPow(m),
                    _ => return Err(Error::Parse(format!("unknown phi family '{name}'"))),
                }
            }
        };
        phi_catalog(family)
    }
}

/// `φ(u) − φ(ū) − φ′(ū)(u − ū)`.
pub fn taylor_remainder(phi: &PhiSpec, u: f64, ubar: f64) -> Result<f64> {
    phi.require(u)?;
    phi.require(ubar)?;
    Ok(match phi.family {
        PhiFamily::Square => (u - ubar).powi(2),
        PhiFamily::Identity => 0.0,
        _ => phi.increment(ubar, u) - phi.d1(ubar) * (u - ubar),
    })
}

/// Extremes of φ″ over `interval`: endpoints plus a 1024-point scan.
pub fn second_derivative_bounds(phi: &PhiSpec, interval: RangeInterval) -> Result<(f64, f64)> {
    phi.require(interval.lo)?;
    phi.require(interval.hi)?;
    let mut lo = phi.d2(interval.lo).min(phi.d2(interval.hi));
    let mut hi = phi.d2(interval.lo).max(phi.d2(interval.hi));
    for i in 1..1023 {
        let x = interval.lo + (interval.hi - interval.lo) * i as f64 / 1023.0;
        let v = phi.d2(x);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

/// Jensen ingredients for one `(k, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JensenParts {
    pub ubar: f64,
    pub i_k: f64,
    /// `∫ H_k R(u, ū) dμ` with `R` the Taylor remainder.
    pub deficit: f64,
    /// `∫ H_k φ(u) dμ`.
    pub phi_integral: f64,
    /// `I_k φ(ū)`.
    pub phi_at_mean: f64,
}

fn mean_support(set: &SampleSet, k: usize) -> Result<(f64, f64)> {
    let n = set.dim();
    if k > n {
        return Err(Error::Domain(format!("curvature index {k} out of range 0..={n}")));
    }
    let i_k = quermass(set, k as i32)?;
    if i_k.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Hypothesis(format!("I_{k} = {i_k:.6e} is not positive")));
    }
    let scale = (0..set.len()).fold(0.0f64, |a, j| a.max(set.h(j, k).abs()));
    if let Some(j) = (0..set.len()).find(|&j| set.h(j, k) < -1e-9 * scale) {
        return Err(Error::Hypothesis(format!("H_{k} = {:.6e} < 0 at node {j}", set.h(j, k))));
    }
    Ok((quermass(set, k as i32 - 1)? / i_k, i_k))
}

/// `φ(u)` at every node, failing on the first node outside the domain.
pub fn phi_values(set: &SampleSet, phi: &PhiSpec) -> Result<Vec<f64>> {
    set.samples()
        .iter()
        .enumerate()
        .map(|(j, s)| {
            phi.require(s.u).map_err(|e| Error::NodeDomain {
                node: j,
                message: e.to_string(),
            })?;
            Ok(phi.value(s.u))
        })
        .collect()
}

/// Both evaluation routes of the Jensen deficit.
pub fn jensen_parts(set: &SampleSet, k: usize, phi: &PhiSpec) -> Result<JensenParts> {
    let values = phi_values(set, phi)?;
    jensen_parts_with(set, k, phi, &values)
}

/// [`jensen_parts`] reusing node values from [`phi_values`].
pub fn jensen_parts_with(set: &SampleSet, k: usize, phi: &PhiSpec, values: &[f64]) -> Result<JensenParts> {
    if values.len() != set.len() {
        return Err(Error::Usage(format!("{} phi values for {} nodes", values.len(), set.len())));
    }
    let (ubar, i_k) = mean_support(set, k)?;
    phi.require(ubar)?;
    let phi_ubar = phi.value(ubar);
    let slope = phi.d1(ubar);
    let rem: Vec<f64> = match phi.family {
        PhiFamily::InvOnePlusPow(_) => set
            .samples()
            .iter()
            .zip(values)
            .map(|(s, v)| (v - phi_ubar) - slope * (s.u - ubar))
            .collect(),
        _ => set
            .samples()
            .iter()
            .map(|s| taylor_remainder(phi, s.u, ubar))
            .collect::<Result<_>>()?,
    };
    Ok(JensenParts {
        ubar,
        i_k,
        deficit: integrate(set, |j| set.h(j, k) * rem[j]),
        phi_integral: integrate(set, |j| set.h(j, k) * values[j]),
        phi_at_mean: i_k * phi_ubar,
    })
}

/// `∫ H_k (φ(u) − φ(ū) − φ′(ū)(u − ū)) dμ` with `ū = I_{k-1}/I_k`.
pub fn jensen_deficit(set: &SampleSet, k: usize, phi: &PhiSpec) -> Result<f64> {
    Ok(jensen_parts(set, k, phi)?.deficit)
}
