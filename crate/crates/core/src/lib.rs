//! Fractional Fourier transform toolkit.
//!
//! Sampled signals live on uniform centered grids in one or two dimensions.
//! On top of the transform sit the θ-operator algebra, semi-discrete frame
//! diagnostics, a θ-scattering feature extractor, optimal approximation by
//! θ-shift-invariant spaces and the fractional multi-tile construction.

pub mod approx;
pub mod error;
pub mod fourier;
pub mod frames;
pub mod frft;
pub mod grid;
pub mod linalg;
pub mod multitile;
pub mod ops;
pub mod scatter;

pub use error::{Error, Result};
pub use grid::{inner_product, l2_norm, Grid, SampledSignal, ThetaParam};
