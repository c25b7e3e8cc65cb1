//! Curvature integrals of closed curves and surfaces, and numerical checks of
//! the identities and inequalities that bound the Alexandrov–Fenchel deficit.
//!
//! Shapes ([`geometry::Shape`]) are sampled on spectral grids
//! ([`geometry::SphereGrid`]); [`measures`] integrates curvature functions
//! over the samples and [`checks`] compares both sides of each relation.
//! The guide in `book/` walks through the concepts with runnable examples.

pub mod checks;
pub mod error;
pub mod expr;
pub mod families;
pub mod geometry;
pub mod jensen;
pub mod measures;
pub mod numeric;
pub mod oracle;
pub mod report;
pub mod shapespec;
pub mod symfun;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/shapes.md")]
    mod shapes {}
    #[doc = include_str!("../../../book/src/curvature.md")]
    mod curvature {}
    #[doc = include_str!("../../../book/src/deficits.md")]
    mod deficits {}
    #[doc = include_str!("../../../book/src/checks.md")]
    mod checks {}
    #[doc = include_str!("../../../book/src/steiner.md")]
    mod steiner {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
