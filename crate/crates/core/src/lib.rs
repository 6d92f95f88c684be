//! Numerical time-frequency analysis on symmetric sample grids: weight
//! functions with their Young conjugates, the short-time Fourier transform
//! and its inversion, cross-Wigner and Wigner-like transforms, Weyl
//! quantization, localization operators, weighted mixed-norm functionals,
//! and phase-space decay diagnostics.
//!
//! Conventions used throughout (they matter; every identity test pins them):
//!
//! * Fourier transform `f̂(ξ) = ∫ e^{-it·ξ} f(t) dt`, inverse carries
//!   `(2π)^{-d}`.
//! * Grids are symmetric, `x_n = -L + nΔ` with `Δ = 2L/N` and `N` a power
//!   of two; the frequency grid is the exact DFT dual, `ΔΔξN = 2π`.
//! * Inner products are conjugate-linear in the second slot.
//! * Functions are truncated (not periodized) outside `[-L, L)`; windowed
//!   transforms zero-fill off-grid window samples.

pub mod diagnostics;
pub mod fieldio;
pub mod fixtures;
pub mod grids;
pub mod identities;
pub mod modspaces;
pub mod operators;
pub mod tolerances;
pub mod transforms;
pub mod weights;

pub use grids::{Axis, Grid, GridError, SampledFunction, SpaceTag};
pub use transforms::{FieldKind, PhaseSpaceField, TransformError};
