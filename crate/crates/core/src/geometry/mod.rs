//! Shape representations, sphere grids and the samplers that turn a shape
//! into per-node surface data.

pub mod grid;
pub mod harmonics;
pub mod hypotheses;
pub mod sample;
pub mod shape;

pub use grid::{Derivatives, SphereGrid};
pub use harmonics::HarmonicTerm;
pub use hypotheses::{check_hypotheses, Hypothesis, HypothesisReport};
pub use sample::{sample_parametric_values, sample_radial_graph, sample_support_body, SampleSet, SurfaceSample};
pub use shape::{ParametricCurve, RadialFn, RadialGraph, Representation, Shape, SupportBody, SupportFn};
