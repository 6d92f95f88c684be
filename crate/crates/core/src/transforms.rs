//! Phase-space transforms: STFT with its inversion, cross-Wigner,
//! Wigner-like transform with its inverse, cross-ambiguity, and the
//! 4-variable STFT of 2-d symbols.
//!
//! Half-step scheme: every quadratic transform integrates over `y` on the
//! lattice `y_m = 2mΔ`, so that `x ± y/2` lands on the sample grid exactly
//! and no interpolation enters. The price is a Wigner frequency axis with
//! spacing `Δξ/2` and range `[-π/(2Δ), π/(2Δ))`; cross-transform
//! comparisons resample only by exact lattice intersection.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grids::{
    bridge_axis, inner_product, refine_axis_x2, Axis, Grid, GridError, SampledFunction, SpaceTag,
};

#[derive(Debug, Error, PartialEq)]
pub enum TransformError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("window must not vanish")]
    ZeroWindow,
    #[error("⟨γ, ψ⟩ ≈ 0: the window pair cannot invert the STFT")]
    DegeneratePair,
    #[error("field would hold {0} values, over the 2^28 budget")]
    MemoryBudgetExceeded(usize),
    #[error("fields live on incompatible lattices")]
    LatticeIncompatible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldKind {
    Stft,
    Wigner,
    Ambiguity,
    Stft4,
}

/// Values of a phase-space transform on a shift × modulation lattice.
/// Row-major with shift axes first, then modulation axes; the 4-variable
/// field is ordered `(x, ξ, η, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceField {
    pub kind: FieldKind,
    pub shift_axes: Vec<Axis>,
    pub mod_axes: Vec<Axis>,
    pub values: Vec<Complex64>,
}

impl PhaseSpaceField {
    pub fn axes(&self) -> Vec<Axis> {
        self.shift_axes.iter().chain(&self.mod_axes).copied().collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Lattice cell volume (product of all axis spacings).
    pub fn cell_volume(&self) -> f64 {
        self.axes().iter().map(|a| a.spacing()).product()
    }

    /// Coordinates of a flat index, shift block then modulation block.
    pub fn lattice_point(&self, flat: usize) -> Vec<f64> {
        let axes = self.axes();
        let mut idx = vec![0usize; axes.len()];
        let mut rest = flat;
        for d in (0..axes.len()).rev() {
            idx[d] = rest % axes[d].n;
            rest /= axes[d].n;
        }
        idx.iter().zip(&axes).map(|(&i, a)| a.point(i)).collect()
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Reinterpret the field as a sampled function on the concatenated axes.
    pub fn to_sampled(&self) -> SampledFunction {
        SampledFunction::new(Grid::from_axes(self.axes()), self.values.clone())
    }
}

/// Quadrature pairing `⟨F, G⟩ = Σ F·conj(G)·cell` of two fields on the
/// same lattice.
pub fn field_pairing(f: &PhaseSpaceField, g: &PhaseSpaceField) -> Result<Complex64, TransformError> {
    if f.shift_axes != g.shift_axes || f.mod_axes != g.mod_axes {
        return Err(TransformError::LatticeIncompatible);
    }
    let w = f.cell_volume();
    Ok(f.values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| a * b.conj())
        .sum::<Complex64>()
        * w)
}

fn check_same_1d_grid(f: &SampledFunction, g: &SampledFunction) -> Result<Axis, TransformError> {
    if f.grid != g.grid {
        return Err(GridError::GridMismatch.into());
    }
    if f.grid.dims() != 1 {
        return Err(GridError::DimensionMismatch { fixture: f.grid.dims(), grid: 1 }.into());
    }
    Ok(f.grid.axes[0])
}

/// Window sample `w(x_n - x_m)` with zero fill off grid (truncation, not
/// periodization).
#[inline]
fn window_at(w: &[Complex64], n: usize, m: usize, half: usize) -> Complex64 {
    let j = n as i64 - m as i64 + half as i64;
    if j < 0 || j >= w.len() as i64 {
        Complex64::ZERO
    } else {
        w[j as usize]
    }
}

/// STFT on the full sample lattice:
/// `V_ψf(x_m, ξ_k) = Δ Σ_n f(x_n)·conj(ψ(x_n - x_m))·e^{-i x_n ξ_k}`.
pub fn stft(f: &SampledFunction, window: &SampledFunction) -> Result<PhaseSpaceField, TransformError> {
    let ax = check_same_1d_grid(f, window)?;
    if window.max_modulus() == 0.0 {
        return Err(TransformError::ZeroWindow);
    }
    let n = ax.n;
    let mut values = vec![Complex64::ZERO; n * n];
    values
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(m, row)| {
            for i in 0..n {
                row[i] = f.values[i] * window_at(&window.values, i, m, n / 2).conj();
            }
            bridge_axis(row, &[n], 0, ax, true);
        });
    Ok(PhaseSpaceField {
        kind: FieldKind::Stft,
        shift_axes: vec![ax],
        mod_axes: vec![ax.dual()],
        values,
    })
}

/// Synthesis quadrature `Σ_z V(z)·Π(z)γ·ΔΔξ` over the full lattice.
pub fn stft_synthesis(
    field: &PhaseSpaceField,
    gamma: &SampledFunction,
) -> Result<SampledFunction, TransformError> {
    if field.kind != FieldKind::Stft
        || field.shift_axes.len() != 1
        || field.shift_axes[0] != gamma.grid.axes[0]
    {
        return Err(TransformError::LatticeIncompatible);
    }
    let ax = gamma.grid.axes[0];
    let n = ax.n;
    // Σ_k V(x_m, ξ_k) e^{i x_n ξ_k} = (2π/Δξ)·(inverse bridge of row m)(x_n)
    let mut rows = field.values.clone();
    rows.par_chunks_mut(n).for_each(|row| {
        bridge_axis(row, &[n], 0, ax.dual(), false);
    });
    let dxi = ax.dual().spacing();
    let prefactor = ax.spacing() * dxi * (2.0 * std::f64::consts::PI / dxi);
    let mut out = SampledFunction::zeros(gamma.grid.clone());
    for m in 0..n {
        for i in 0..n {
            // circular translation of γ, matching the phase-shift operator
            let j = (i + n - m + n / 2) % n;
            out.values[i] += rows[m * n + i] * gamma.values[j] * prefactor;
        }
    }
    Ok(out)
}

/// Inversion formula `f = (2π)^{-d} ⟨γ,ψ⟩^{-1} Σ_z V_ψf(z)·Π(z)γ·ΔΔξ`.
pub fn stft_invert(
    field: &PhaseSpaceField,
    window: &SampledFunction,
    gamma: &SampledFunction,
) -> Result<SampledFunction, TransformError> {
    let pair = inner_product(gamma, window)?;
    if pair.norm() <= 1e-12 {
        return Err(TransformError::DegeneratePair);
    }
    let synth = stft_synthesis(field, gamma)?;
    let c = Complex64::new(1.0, 0.0) / (pair * 2.0 * std::f64::consts::PI);
    Ok(synth.scaled(c))
}

/// Shared half-step core: `out(x_n, ·) = s·Δy · DFT-bridge over y of h`,
/// where `h_m = left[n+m-N/2] · conj(right[n-m+N/2])` with zero fill.
fn half_step_transform(
    left: &[Complex64],
    right: &[Complex64],
    ax: Axis,
) -> (Vec<Complex64>, Axis, Axis) {
    let n = ax.n;
    let y_axis = Axis { n, half_extent: 2.0 * ax.half_extent, tag: SpaceTag::Time };
    let mut values = vec![Complex64::ZERO; n * n];
    values.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for m in 0..n {
            let p = i as i64 + m as i64 - (n / 2) as i64;
            let q = i as i64 - m as i64 + (n / 2) as i64;
            if p >= 0 && p < n as i64 && q >= 0 && q < n as i64 {
                row[m] = left[p as usize] * right[q as usize].conj();
            }
        }
        bridge_axis(row, &[n], 0, y_axis, true);
    });
    (values, ax, y_axis.dual())
}

/// Cross-Wigner transform
/// `Wig(g,f)(x,ξ) = ∫ g(x+y/2)·conj(f(x-y/2))·e^{-iy·ξ} dy`
/// on the lattice `y_m = 2mΔ`; the output frequency axis has spacing `Δξ/2`.
pub fn cross_wigner(
    g: &SampledFunction,
    f: &SampledFunction,
) -> Result<PhaseSpaceField, TransformError> {
    let ax = check_same_1d_grid(g, f)?;
    let (values, x_axis, xi_axis) = half_step_transform(&g.values, &f.values, ax);
    Ok(PhaseSpaceField {
        kind: FieldKind::Wigner,
        shift_axes: vec![x_axis],
        mod_axes: vec![xi_axis],
        values,
    })
}

fn require_square_time(f: &SampledFunction) -> Result<Axis, TransformError> {
    if f.grid.dims() != 2 {
        return Err(GridError::DimensionMismatch { fixture: f.grid.dims(), grid: 2 }.into());
    }
    if f.grid.axes[0] != f.grid.axes[1] {
        return Err(GridError::NonSquareGrid.into());
    }
    if f.grid.axes[0].tag != SpaceTag::Time {
        return Err(GridError::SpaceTagMismatch { expected: SpaceTag::Time }.into());
    }
    Ok(f.grid.axes[0])
}

/// Wigner-like transform `Wig[F] = F₂(TF)` with
/// `TF(x,y) = F(x+y/2, x-y/2)` evaluated by the paired-index scheme.
/// Output axes: `(x, ξ)` with the half-spaced frequency axis.
pub fn wigner_like(f: &SampledFunction) -> Result<SampledFunction, TransformError> {
    let ax = require_square_time(f)?;
    let n = ax.n;
    let y_axis = Axis { n, half_extent: 2.0 * ax.half_extent, tag: SpaceTag::Time };
    let mut values = vec![Complex64::ZERO; n * n];
    values.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for m in 0..n {
            let p = i as i64 + m as i64 - (n / 2) as i64;
            let q = i as i64 - m as i64 + (n / 2) as i64;
            if p >= 0 && p < n as i64 && q >= 0 && q < n as i64 {
                row[m] = f.values[p as usize * n + q as usize];
            }
        }
        bridge_axis(row, &[n], 0, y_axis, true);
    });
    let mut out = SampledFunction::new(
        Grid::from_axes(vec![ax, y_axis.dual()]),
        values,
    );
    out.truncated = f.truncated;
    Ok(out)
}

/// Inverse Wigner-like transform `T^{-1} F₂^{-1}`; accepts a symbol whose
/// frequency axis is either the half-spaced Wigner axis or the standard
/// dual axis. Index pairs needing half-grid values are evaluated on the
/// band-limited (trigonometric) refinement, which is exact on
/// grid-representable fields.
pub fn wigner_like_inv(a: &SampledFunction) -> Result<SampledFunction, TransformError> {
    if a.grid.dims() != 2 {
        return Err(GridError::DimensionMismatch { fixture: a.grid.dims(), grid: 2 }.into());
    }
    let x_axis = a.grid.axes[0];
    let xi_axis = a.grid.axes[1];
    if xi_axis.tag != SpaceTag::Freq {
        return Err(GridError::SpaceTagMismatch { expected: SpaceTag::Freq }.into());
    }
    if x_axis.n != xi_axis.n {
        return Err(GridError::NonSquareGrid.into());
    }
    let n = x_axis.n;

    let spread = partial_fourier_axis1_inverse(a)?;
    let fine = refine_axis_x2(&refine_axis_x2(&spread, 0), 1);
    let u_axis = fine.grid.axes[0];
    let w_axis = fine.grid.axes[1];

    // K(x_p, x_q) = G((x_p+x_q)/2, x_p-x_q); u-index is exactly p+q on the
    // refined axis, the w-index must land on the refined lattice.
    let dx = x_axis.spacing();
    let mut out = SampledFunction::zeros(Grid::from_axes(vec![x_axis, x_axis]));
    out.truncated = a.truncated;
    let wn = w_axis.n;
    for p in 0..n {
        for q in 0..n {
            let w = (p as f64 - q as f64) * dx;
            let raw = (w + w_axis.half_extent) / w_axis.spacing();
            let widx = raw.round();
            if (raw - widx).abs() > 1e-9 || widx < 0.0 || widx >= wn as f64 {
                continue; // off the spread-kernel grid: truncated to zero
            }
            let uidx = p + q;
            out.values[p * n + q] = fine.values[uidx * wn + widx as usize];
        }
    }
    debug_assert_eq!(u_axis.n, 2 * n);
    Ok(out)
}

fn partial_fourier_axis1_inverse(a: &SampledFunction) -> Result<SampledFunction, TransformError> {
    Ok(crate::grids::partial_fourier(a, 1, false)?)
}

/// Cross-ambiguity function
/// `A(f,g)(x,ξ) = ∫ f(t+x/2)·conj(g(t-x/2))·e^{-it·ξ} dt`,
/// computed from the integral form on the doubled shift lattice
/// `x ∈ 2ΔZ`; equals `e^{ixξ/2}·V_g f(x,ξ)` at common lattice points.
pub fn cross_ambiguity(
    f: &SampledFunction,
    g: &SampledFunction,
) -> Result<PhaseSpaceField, TransformError> {
    let ax = check_same_1d_grid(f, g)?;
    let n = ax.n;
    let x_axis = Axis { n, half_extent: 2.0 * ax.half_extent, tag: SpaceTag::Time };
    let mut values = vec![Complex64::ZERO; n * n];
    values.par_chunks_mut(n).enumerate().for_each(|(m, row)| {
        for t in 0..n {
            let p = t as i64 + m as i64 - (n / 2) as i64;
            let q = t as i64 - m as i64 + (n / 2) as i64;
            if p >= 0 && p < n as i64 && q >= 0 && q < n as i64 {
                row[t] = f.values[p as usize] * g.values[q as usize].conj();
            }
        }
        bridge_axis(row, &[n], 0, ax, true);
    });
    Ok(PhaseSpaceField {
        kind: FieldKind::Ambiguity,
        shift_axes: vec![x_axis],
        mod_axes: vec![ax.dual()],
        values,
    })
}

/// 4-variable STFT of a 2-d symbol on a strided outer lattice:
/// for each shift `(x, ξ)` the 2-d DFT bridge of `a·conj(T_{(x,ξ)}Ψ)`,
/// stored at `(x, ξ, η, y)` with modulations subsampled by the same stride.
pub fn symbol_stft4(
    a: &SampledFunction,
    window: &SampledFunction,
    stride: usize,
) -> Result<PhaseSpaceField, TransformError> {
    if a.grid != window.grid {
        return Err(GridError::GridMismatch.into());
    }
    if a.grid.dims() != 2 {
        return Err(GridError::DimensionMismatch { fixture: a.grid.dims(), grid: 2 }.into());
    }
    if window.max_modulus() == 0.0 {
        return Err(TransformError::ZeroWindow);
    }
    let (ax0, ax1) = (a.grid.axes[0], a.grid.axes[1]);
    let stride = stride.max(1);
    if ax0.n % stride != 0 || ax1.n % stride != 0 {
        return Err(TransformError::LatticeIncompatible);
    }
    let (s0, s1) = (ax0.n / stride, ax1.n / stride);
    let total = s0 * s1 * s0 * s1;
    if total > 1 << 28 {
        return Err(TransformError::MemoryBudgetExceeded(total));
    }

    let mut values = vec![Complex64::ZERO; total];
    values
        .par_chunks_mut(s0 * s1)
        .enumerate()
        .for_each(|(shift_flat, block)| {
            let i = shift_flat / s1;
            let j = shift_flat % s1;
            let plane = stft4_mod_plane_impl(a, window, (i * stride, j * stride));
            for r0 in 0..s0 {
                for r1 in 0..s1 {
                    block[r0 * s1 + r1] = plane[(r0 * stride) * ax1.n + r1 * stride];
                }
            }
        });

    Ok(PhaseSpaceField {
        kind: FieldKind::Stft4,
        shift_axes: vec![ax0.strided(stride), ax1.strided(stride)],
        mod_axes: vec![ax0.dual().strided(stride), ax1.dual().strided(stride)],
        values,
    })
}

/// Full modulation plane of the symbol STFT at one shift index pair.
pub fn stft4_mod_plane(
    a: &SampledFunction,
    window: &SampledFunction,
    shift_idx: (usize, usize),
) -> Result<SampledFunction, TransformError> {
    if a.grid != window.grid || a.grid.dims() != 2 {
        return Err(GridError::GridMismatch.into());
    }
    let values = stft4_mod_plane_impl(a, window, shift_idx);
    Ok(SampledFunction::new(
        Grid::from_axes(vec![a.grid.axes[0].dual(), a.grid.axes[1].dual()]),
        values,
    ))
}

fn stft4_mod_plane_impl(
    a: &SampledFunction,
    window: &SampledFunction,
    shift_idx: (usize, usize),
) -> Vec<Complex64> {
    let (n0, n1) = (a.grid.axes[0].n, a.grid.axes[1].n);
    let (off0, off1) = (
        shift_idx.0 as i64 - (n0 / 2) as i64,
        shift_idx.1 as i64 - (n1 / 2) as i64,
    );
    let mut plane = vec![Complex64::ZERO; n0 * n1];
    for u in 0..n0 {
        let p = u as i64 - off0;
        if p < 0 || p >= n0 as i64 {
            continue;
        }
        for v in 0..n1 {
            let q = v as i64 - off1;
            if q < 0 || q >= n1 as i64 {
                continue;
            }
            plane[u * n1 + v] =
                a.values[u * n1 + v] * window.values[p as usize * n1 + q as usize].conj();
        }
    }
    let shape = [n0, n1];
    bridge_axis(&mut plane, &shape, 0, a.grid.axes[0], true);
    bridge_axis(&mut plane, &shape, 1, a.grid.axes[1], true);
    plane
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::Fixture;
    use crate::grids::{fourier, phase_space_shift, reflect};
    use std::f64::consts::PI;

    fn line() -> Grid {
        Grid::line(128, 12.0).unwrap()
    }

    fn gaussian(grid: &Grid) -> SampledFunction {
        Fixture::gaussian(0.0, 1.0, 0.0).sample(grid).unwrap()
    }

    /// Direct quadrature oracle ⟨f, Π(z)ψ⟩ for the STFT.
    fn stft_oracle(
        f: &SampledFunction,
        w: &SampledFunction,
        m: usize,
        k: usize,
    ) -> Complex64 {
        let ax = f.grid.axes[0];
        let xi = ax.dual().point(k);
        let dx = ax.spacing();
        let mut acc = Complex64::ZERO;
        for n in 0..ax.n {
            let j = n as i64 - m as i64 + (ax.n / 2) as i64;
            if j < 0 || j >= ax.n as i64 {
                continue;
            }
            acc += f.values[n]
                * w.values[j as usize].conj()
                * Complex64::from_polar(1.0, -ax.point(n) * xi);
        }
        acc * dx
    }

    #[test]
    fn stft_matches_direct_quadrature() {
        let g = line();
        let f = Fixture::gaussian(0.5, 1.2, 0.3).sample(&g).unwrap();
        let w = gaussian(&g);
        let field = stft(&f, &w).unwrap();
        let n = g.axes[0].n;
        let max = field.max_modulus();
        // deterministic pseudo-random lattice points
        let mut state = 0x9e3779b97f4a7c15u64;
        for _ in 0..20 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let m = (state >> 33) as usize % n;
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let k = (state >> 33) as usize % n;
            let oracle = stft_oracle(&f, &w, m, k);
            assert!((field.values[m * n + k] - oracle).norm() <= 1e-12 * max);
        }
    }

    #[test]
    fn stft_gaussian_closed_form() {
        // V_ψf(x,ξ) = √π·e^{-(x²+ξ²)/4}·e^{-ixξ/2} for f = ψ = e^{-t²/2}
        let g = line();
        let f = gaussian(&g);
        let field = stft(&f, &f).unwrap();
        let n = g.axes[0].n;
        let (xa, ka) = (field.shift_axes[0], field.mod_axes[0]);
        let mut worst = 0.0_f64;
        for m in 0..n {
            for k in 0..n {
                let (x, xi) = (xa.point(m), ka.point(k));
                let expect = Complex64::from_polar(
                    PI.sqrt() * (-(x * x + xi * xi) / 4.0).exp(),
                    -x * xi / 2.0,
                );
                let err = (field.values[m * n + k] - expect).norm();
                worst = worst.max(err);
            }
        }
        assert!(worst <= 1e-9 * PI.sqrt(), "worst err {worst:e}");
    }

    #[test]
    fn stft_covariance_modulus() {
        let g = line();
        let f = gaussian(&g);
        let w = Fixture::gaussian(0.0, 0.8, 0.0).sample(&g).unwrap();
        let dx = g.axes[0].spacing();
        let dxi = g.axes[0].dual().spacing();
        let shifted = phase_space_shift(&f, &[8.0 * dx], &[5.0 * dxi]).unwrap();
        let v0 = stft(&f, &w).unwrap();
        let v1 = stft(&shifted, &w).unwrap();
        let n = g.axes[0].n;
        let max = v0.max_modulus();
        // |V_ψ(Π(w)f)(z)| = |V_ψf(z - w)| on the overlapping lattice
        for m in 20..n - 20 {
            for k in 20..n - 20 {
                let a = v1.values[m * n + k].norm();
                let b = v0.values[(m - 8) * n + (k - 5)].norm();
                assert!((a - b).abs() <= 1e-11 * max);
            }
        }
    }

    #[test]
    fn stft_inversion_reconstructs() {
        let g = line();
        let w = gaussian(&g);
        let f = Fixture::hermite(2).sample(&g).unwrap();
        let field = stft(&f, &w).unwrap();
        let rec = stft_invert(&field, &w, &w).unwrap();
        let diff = rec.add(&f.scaled(Complex64::new(-1.0, 0.0))).unwrap();
        assert!(diff.norm_l2() / f.norm_l2() <= 1e-6);
        // with γ = ψ the inversion constant is (2π)^{-d}·‖ψ‖^{-2}
        let synth = stft_synthesis(&field, &w).unwrap();
        let c = 1.0 / (2.0 * PI * w.norm_l2().powi(2));
        let rec2 = synth.scaled(Complex64::new(c, 0.0));
        for (a, b) in rec.values.iter().zip(&rec2.values) {
            assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn degenerate_pair_is_rejected() {
        let g = line();
        let even = gaussian(&g);
        let odd = Fixture::hermite(1).sample(&g).unwrap();
        let field = stft(&even, &even).unwrap();
        assert_eq!(stft_invert(&field, &even, &odd), Err(TransformError::DegeneratePair));
    }

    #[test]
    fn wigner_gaussian_closed_form() {
        // Wig f(x,ξ) = 2√π·e^{-x²-ξ²} for f = e^{-t²/2}
        let g = line();
        let f = gaussian(&g);
        let wig = cross_wigner(&f, &f).unwrap();
        let n = g.axes[0].n;
        let (xa, ka) = (wig.shift_axes[0], wig.mod_axes[0]);
        assert!((ka.spacing() - xa.dual().spacing() / 2.0).abs() < 1e-14);
        let mut worst = 0.0_f64;
        for m in 0..n {
            for k in 0..n {
                let (x, xi) = (xa.point(m), ka.point(k));
                let expect = 2.0 * PI.sqrt() * (-(x * x + xi * xi)).exp();
                worst = worst.max((wig.values[m * n + k] - Complex64::new(expect, 0.0)).norm());
            }
        }
        assert!(worst <= 1e-9 * 2.0 * PI.sqrt(), "worst err {worst:e}");
    }

    #[test]
    fn wigner_conjugate_symmetry() {
        let g = line();
        let f = Fixture::gaussian(0.5, 1.0, 0.4).sample(&g).unwrap();
        let h = Fixture::hermite(1).sample(&g).unwrap();
        let a = cross_wigner(&h, &f).unwrap();
        let b = cross_wigner(&f, &h).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y.conj()).norm() <= 1e-12);
        }
    }

    #[test]
    fn wigner_marginal_identity() {
        // Δξ'-quadrature over ξ of Wig(g,f)(x,·) = (2π)^d g(x)·conj(f(x))
        let g = line();
        let f = gaussian(&g);
        let h = Fixture::hermite(2).sample(&g).unwrap();
        let wig = cross_wigner(&h, &f).unwrap();
        let n = g.axes[0].n;
        let dxi = wig.mod_axes[0].spacing();
        let mut worst = 0.0_f64;
        for m in n / 4..3 * n / 4 {
            let marginal: Complex64 = (0..n).map(|k| wig.values[m * n + k]).sum::<Complex64>() * dxi;
            let expect = 2.0 * PI * h.values[m] * f.values[m].conj();
            worst = worst.max((marginal - expect).norm());
        }
        assert!(worst <= 1e-6 * 2.0 * PI, "worst err {worst:e}");
    }

    #[test]
    fn wigner_like_of_tensor_is_cross_wigner() {
        let g = line();
        let f = Fixture::gaussian(0.3, 1.1, 0.0).sample(&g).unwrap();
        let h = Fixture::hermite(3).sample(&g).unwrap();
        let tensor = SampledFunction::outer(&f, &h.conj()).unwrap();
        let via_like = wigner_like(&tensor).unwrap();
        let direct = cross_wigner(&f, &h).unwrap();
        for (a, b) in via_like.values.iter().zip(&direct.values) {
            assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn wigner_like_round_trip() {
        let g = line();
        let f = Fixture::gaussian(0.4, 0.9, 0.2).sample(&g).unwrap();
        let h = Fixture::hermite(2).sample(&g).unwrap();
        let tensor = SampledFunction::outer(&f, &h).unwrap();
        let back = wigner_like_inv(&wigner_like(&tensor).unwrap()).unwrap();
        let max = tensor.max_modulus();
        let mut worst = 0.0_f64;
        for (a, b) in back.values.iter().zip(&tensor.values) {
            worst = worst.max((a - b).norm());
        }
        assert!(worst <= 1e-10 * max, "worst err {worst:e}");
    }

    #[test]
    fn ambiguity_at_origin_is_energy() {
        let g = line();
        let f = Fixture::gaussian(0.2, 1.3, 0.1).sample(&g).unwrap();
        let amb = cross_ambiguity(&f, &f).unwrap();
        let n = g.axes[0].n;
        let center = amb.values[(n / 2) * n + n / 2];
        let energy = f.norm_l2().powi(2);
        assert!((center - Complex64::new(energy, 0.0)).norm() <= 1e-10 * energy);
    }

    #[test]
    fn ambiguity_is_phase_times_stft() {
        let g = line();
        let f = Fixture::gaussian(0.5, 1.0, 0.0).sample(&g).unwrap();
        let h = gaussian(&g);
        let amb = cross_ambiguity(&f, &h).unwrap();
        let v = stft(&f, &h).unwrap();
        let n = g.axes[0].n;
        let max = v.max_modulus();
        // common lattice points: ambiguity shifts 2ΔZ = even STFT shifts
        for ma in 0..n {
            let x = amb.shift_axes[0].point(ma);
            let mv = match v.shift_axes[0].index_of(x) {
                Some(i) => i,
                None => continue,
            };
            for k in 0..n {
                let xi = amb.mod_axes[0].point(k);
                let expect = v.values[mv * n + k] * Complex64::from_polar(1.0, 0.5 * x * xi);
                assert!((amb.values[ma * n + k] - expect).norm() <= 1e-12 * max);
            }
        }
    }

    #[test]
    fn fourier_wigner_relation() {
        // F(Wig(f,g))(x,ξ) = π^d · Wig(f, Ig)(-ξ/2, x/2); the constant is
        // pinned by the Gaussian oracle F(Wig φ)(x,ξ) = 2π^{3/2}e^{-(x²+ξ²)/4}.
        let g = line();
        let f = Fixture::gaussian(0.2, 1.0, 0.0).sample(&g).unwrap();
        let h = Fixture::gaussian(-0.4, 1.1, 0.0).sample(&g).unwrap();
        let wig = cross_wigner(&f, &h).unwrap();
        let mut w2 = wig.to_sampled();
        for ax in &mut w2.grid.axes {
            ax.tag = SpaceTag::Time;
        }
        let big_f = fourier(&w2).unwrap();
        let refl = reflect(&h);
        let target = cross_wigner(&f, &refl).unwrap();
        let n = g.axes[0].n;
        let (fx, fxi) = (big_f.grid.axes[0], big_f.grid.axes[1]);
        let max = big_f.max_modulus();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 1..n {
                // -ξ̃/2 lands on the x-grid at index N-j; x̃/2 on the Wigner
                // frequency grid at index i
                let expect = PI * target.values[(n - j) * n + i];
                let got = big_f.values[i * n + j];
                worst = worst.max((got - expect).norm());
                let _ = (fx, fxi);
            }
        }
        assert!(worst <= 1e-6 * max, "worst err {worst:e}");
    }

    #[test]
    fn wig_psi_one_closed_form() {
        // Wig(ψ,1)(x,ξ) = 2^d e^{2ixξ} ψ̂(2ξ). The reflected point x - y/2
        // exits the grid once |2x| + 4σ exceeds L, so the comparison runs
        // over |x| ≤ L/4.
        let g = line();
        let psi = gaussian(&g);
        let one = Fixture::constant(1.0).sample(&g).unwrap();
        let wig = cross_wigner(&psi, &one).unwrap();
        let n = g.axes[0].n;
        let (xa, ka) = (wig.shift_axes[0], wig.mod_axes[0]);
        let scale = (2.0 * PI).sqrt();
        let mut worst = 0.0_f64;
        for m in 3 * n / 8..5 * n / 8 {
            for k in 0..n {
                let (x, xi) = (xa.point(m), ka.point(k));
                let expect = Complex64::from_polar(
                    2.0 * scale * (-(2.0 * xi) * (2.0 * xi) / 2.0).exp(),
                    2.0 * x * xi,
                );
                worst = worst.max((wig.values[m * n + k] - expect).norm());
            }
        }
        assert!(worst <= 1e-6 * 2.0 * scale, "worst err {worst:e}");
    }

    #[test]
    fn moyal_formula_hermite_battery() {
        // (2π)^{-d}·⟨Wig(g,f), Wig(k,h)⟩ = ⟨g,k⟩·conj(⟨f,h⟩); with
        // orthonormal Hermite fixtures the right side is δ_{gk}·δ_{fh}.
        let g = line();
        let hs: Vec<_> = (0..4)
            .map(|k| Fixture::hermite(k).sample(&g).unwrap())
            .collect();
        for a in 0..4 {
            for b in 0..4 {
                let wab = cross_wigner(&hs[a], &hs[b]).unwrap();
                for c in 0..4 {
                    for d in 0..4 {
                        let wcd = cross_wigner(&hs[c], &hs[d]).unwrap();
                        let lhs = field_pairing(&wab, &wcd).unwrap() / (2.0 * PI);
                        let expect = if a == c && b == d { 1.0 } else { 0.0 };
                        assert!(
                            (lhs - Complex64::new(expect, 0.0)).norm() <= 1e-8,
                            "orders ({a},{b},{c},{d}): {lhs}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn stft_energy_constant() {
        // ⟨V_ψf, V_ψh⟩ over the full lattice = (2π)^d·‖ψ‖²·⟨f,h⟩
        let g = line();
        let w = gaussian(&g);
        let f = Fixture::hermite(1).sample(&g).unwrap();
        let h = Fixture::gaussian(0.3, 1.0, 0.0).sample(&g).unwrap();
        let vf = stft(&f, &w).unwrap();
        let vh = stft(&h, &w).unwrap();
        let lhs = field_pairing(&vf, &vh).unwrap();
        let rhs = inner_product(&f, &h).unwrap() * 2.0 * PI * w.norm_l2().powi(2);
        assert!((lhs - rhs).norm() <= 1e-8 * rhs.norm());
    }

    #[test]
    fn stft4_matches_quadrature_and_decays() {
        let g2 = Grid::square(64, 6.0).unwrap();
        let a = Fixture::Tensor {
            f1: Box::new(Fixture::gaussian(0.0, 0.6, 0.0)),
            f2: Box::new(Fixture::gaussian(0.0, 0.6, 0.0)),
        }
        .sample(&g2)
        .unwrap();
        let w = Fixture::Tensor {
            f1: Box::new(Fixture::gaussian(0.0, 0.6, 0.0)),
            f2: Box::new(Fixture::gaussian(0.0, 0.6, 0.0)),
        }
        .sample(&g2)
        .unwrap();
        let field = symbol_stft4(&a, &w, 4).unwrap();
        let s = field.shift_axes[0].n;
        assert_eq!(field.values.len(), s * s * s * s);

        // direct 2-d quadrature oracle at pseudo-random quadruples
        let n = 64usize;
        let (dx, dxi) = (g2.axes[0].spacing(), g2.axes[0].dual().spacing());
        let mut state = 0x51c6_a2e7_93d1_4b2fu64;
        let mut rand_idx = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as usize) % s
        };
        let max = field.max_modulus();
        for _ in 0..20 {
            let (i, j, r0, r1) = (rand_idx(), rand_idx(), rand_idx(), rand_idx());
            let (sx, sxi) = (field.shift_axes[0].point(i), field.shift_axes[1].point(j));
            let (eta, y) = (field.mod_axes[0].point(r0), field.mod_axes[1].point(r1));
            let mut acc = Complex64::ZERO;
            for u in 0..n {
                let xu = g2.axes[0].point(u);
                for v in 0..n {
                    let xv = g2.axes[1].point(v);
                    let wu = xu - sx;
                    let wv = xv - sxi;
                    let wi = g2.axes[0].index_of(wu);
                    let wj = g2.axes[1].index_of(wv);
                    if let (Some(wi), Some(wj)) = (wi, wj) {
                        acc += a.values[u * n + v]
                            * w.values[wi * n + wj].conj()
                            * Complex64::from_polar(1.0, -(xu * eta + xv * y));
                    }
                }
            }
            acc *= dx * dx;
            let got = field.values[((i * s + j) * s + r0) * s + r1];
            assert!((got - acc).norm() <= 1e-10 * max, "({i},{j},{r0},{r1})");
        }
        let _ = dxi;

        // super-exponential decay: boundary of the stored lattice below 1e-8
        let mut boundary_max = 0.0_f64;
        for flat in 0..field.values.len() {
            let mut rest = flat;
            let mut idx = [0usize; 4];
            for d in (0..4).rev() {
                idx[d] = rest % s;
                rest /= s;
            }
            if idx.iter().any(|&i| i == 0 || i + 1 == s) {
                boundary_max = boundary_max.max(field.values[flat].norm());
            }
        }
        assert!(boundary_max <= 1e-8 * max, "boundary {boundary_max:e} vs max {max:e}");
    }
}
