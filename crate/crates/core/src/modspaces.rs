//! Weighted mixed-norm functionals on phase-space fields, modulation norms,
//! and the duality pairing.
//!
//! `L^{p,q}_λ` takes the p-quadrature over the shift block of
//! `|F(x,ξ)|·e^{λω(x,ξ)}` for each modulation point, then the q-quadrature
//! over the modulation block; `∞` is the lattice maximum (the fields are
//! continuous, so the essential supremum is the supremum).

use serde::{Deserialize, Serialize};

use crate::grids::GridError;
use crate::transforms::{field_pairing, stft, PhaseSpaceField, TransformError};
use crate::weights::Weight;
use num_complex::Complex64;

/// Norm parameters: exponents in `[1, ∞]` (`f64::INFINITY` for `∞`) and the
/// exponential weight `e^{λω}`; `λ` may be negative (dual-side quantities).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MixedNormSpec {
    pub p: f64,
    pub q: f64,
    pub lambda: f64,
    pub weight: Weight,
}

impl MixedNormSpec {
    pub fn new(p: f64, q: f64, lambda: f64, weight: Weight) -> Result<Self, GridError> {
        if !(p >= 1.0) || !(q >= 1.0) {
            return Err(GridError::BadExtent(p.min(q)));
        }
        Ok(MixedNormSpec { p, q, lambda, weight })
    }
}

/// `‖F‖_{L^{p,q}_λ}` over the field's lattice.
pub fn mixed_norm(field: &PhaseSpaceField, spec: &MixedNormSpec) -> f64 {
    let n_mods: usize = field.mod_axes.iter().map(|a| a.n).product();
    let n_shifts: usize = field.shift_axes.iter().map(|a| a.n).product();
    let shift_cell: f64 = field.shift_axes.iter().map(|a| a.spacing()).product();
    let mod_cell: f64 = field.mod_axes.iter().map(|a| a.spacing()).product();

    let weighted = |s: usize, m: usize| {
        let flat = s * n_mods + m;
        let point = field.lattice_point(flat);
        field.values[flat].norm() * (spec.lambda * spec.weight.eval_vec(&point)).exp()
    };

    let mut outer_acc = 0.0_f64;
    let mut outer_max = 0.0_f64;
    for m in 0..n_mods {
        let inner = if spec.p.is_infinite() {
            (0..n_shifts).map(|s| weighted(s, m)).fold(0.0, f64::max)
        } else {
            let sum: f64 = (0..n_shifts).map(|s| weighted(s, m).powf(spec.p)).sum();
            (sum * shift_cell).powf(1.0 / spec.p)
        };
        if spec.q.is_infinite() {
            outer_max = outer_max.max(inner);
        } else {
            outer_acc += inner.powf(spec.q);
        }
    }
    if spec.q.is_infinite() {
        outer_max
    } else {
        (outer_acc * mod_cell).powf(1.0 / spec.q)
    }
}

/// Modulation norm `‖f‖_{M^{p,q}_λ} = ‖V_ψ f‖_{L^{p,q}_λ}` on the full
/// lattice.
pub fn modulation_norm(
    f: &crate::grids::SampledFunction,
    window: &crate::grids::SampledFunction,
    spec: &MixedNormSpec,
) -> Result<f64, TransformError> {
    Ok(mixed_norm(&stft(f, window)?, spec))
}

/// Duality pairing `∫ V_ψf(z)·conj(V_ψh(z)) dz` as written in the dual-space
/// description; under this convention it carries the constant
/// `(2π)^d·‖ψ‖²` against the plain inner product, which the tests measure
/// rather than normalize away.
pub fn duality_pairing(
    f: &crate::grids::SampledFunction,
    h: &crate::grids::SampledFunction,
    window: &crate::grids::SampledFunction,
) -> Result<Complex64, TransformError> {
    let vf = stft(f, window)?;
    let vh = stft(h, window)?;
    field_pairing(&vf, &vh)
}
