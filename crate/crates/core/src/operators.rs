//! Weyl quantization (symbol ↔ kernel ↔ dense matrix), multiplication and
//! convolution operators, localization operators by both constructions, and
//! spectra.
//!
//! A symbol `a(x, ξ)` lives on a 2-d grid whose frequency axis is either the
//! half-spaced Wigner axis (spacing `Δξ/2`, the output lattice of
//! `cross_wigner`) or the standard dual axis (spacing `Δξ`, the STFT
//! lattice). The kernel is `K = Wig^{-1}[a]`, realized on the function grid;
//! midpoints `(x+y)/2` off the sample lattice are evaluated on the
//! band-limited refinement.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

use crate::grids::{
    fourier, inner_product, inverse_fourier, refine_axis_x2, Axis, Grid, GridError,
    SampledFunction, SpaceTag,
};
use crate::transforms::{
    cross_wigner, field_pairing, stft, stft_synthesis, wigner_like_inv, PhaseSpaceField,
    TransformError,
};

#[derive(Debug, Error, PartialEq)]
pub enum OperatorError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("eigenvalue iteration failed to converge")]
    SpectrumFailed,
}

/// Dense realization of an operator on sampled functions with the
/// quadrature convention `(Tf)(x_n) = Σ_s entries[n,s]·f(x_s)·Δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub grid: Grid,
    pub entries: Vec<Complex64>,
}

impl OperatorMatrix {
    pub fn n(&self) -> usize {
        self.grid.axes[0].n
    }

    pub fn apply(&self, f: &SampledFunction) -> Result<SampledFunction, OperatorError> {
        if f.grid != self.grid {
            return Err(GridError::GridMismatch.into());
        }
        let n = self.n();
        let dx = self.grid.axes[0].spacing();
        let mut out = SampledFunction::zeros(self.grid.clone());
        for i in 0..n {
            let row = &self.entries[i * n..(i + 1) * n];
            out.values[i] = row
                .iter()
                .zip(&f.values)
                .map(|(k, v)| k * v)
                .sum::<Complex64>()
                * dx;
        }
        Ok(out)
    }
}

/// The 2-d grid carrying Wigner-transform output: `(x, ξ)` with the
/// half-spaced frequency axis.
pub fn wigner_symbol_grid(ax: Axis) -> Grid {
    let xi = Axis {
        n: ax.n,
        half_extent: ax.dual().half_extent / 2.0,
        tag: SpaceTag::Freq,
    };
    Grid::from_axes(vec![ax, xi])
}

/// The 2-d grid of the full STFT lattice: `(x, ξ)` with the standard dual
/// frequency axis.
pub fn stft_symbol_grid(ax: Axis) -> Grid {
    Grid::from_axes(vec![ax, ax.dual()])
}

/// Kernel of the Weyl operator, `K = Wig^{-1}[a]`.
pub fn weyl_kernel(a: &SampledFunction) -> Result<SampledFunction, OperatorError> {
    Ok(wigner_like_inv(a)?)
}

/// Explicit kernel path: `K(x,y) = (2π)^{-d} Σ_k e^{i(x-y)ξ_k} a((x+y)/2, ξ_k) Δξ`,
/// with the symbol refined along the x-axis to reach the midpoints and the
/// frequency sum evaluated directly at the exact separation `x - y`.
pub fn weyl_kernel_direct(a: &SampledFunction) -> Result<SampledFunction, OperatorError> {
    if a.grid.dims() != 2 {
        return Err(GridError::DimensionMismatch { fixture: a.grid.dims(), grid: 2 }.into());
    }
    let x_axis = a.grid.axes[0];
    let xi_axis = a.grid.axes[1];
    if xi_axis.tag != SpaceTag::Freq {
        return Err(GridError::SpaceTagMismatch { expected: SpaceTag::Freq }.into());
    }
    let n = x_axis.n;
    let refined = refine_axis_x2(a, 0);
    let nxi = xi_axis.n;
    let dx = x_axis.spacing();
    let scale = xi_axis.spacing() / (2.0 * PI);
    // the spread kernel G(u, w) is 2π/Δξ-periodic in w; separations beyond
    // half a period are off the representable range and truncate to zero
    let w_max = PI / xi_axis.spacing();
    let mut out = SampledFunction::zeros(Grid::from_axes(vec![x_axis, x_axis]));
    out.truncated = a.truncated;
    for p in 0..n {
        for q in 0..n {
            let w = (p as f64 - q as f64) * dx;
            if w.abs() >= w_max {
                continue;
            }
            let row = &refined.values[(p + q) * nxi..(p + q + 1) * nxi];
            let mut acc = Complex64::ZERO;
            for (k, av) in row.iter().enumerate() {
                acc += av * Complex64::from_polar(1.0, w * xi_axis.point(k));
            }
            out.values[p * n + q] = acc * scale;
        }
    }
    Ok(out)
}

pub fn weyl_matrix(a: &SampledFunction) -> Result<OperatorMatrix, OperatorError> {
    let kernel = weyl_kernel(a)?;
    Ok(OperatorMatrix {
        grid: Grid::from_axes(vec![kernel.grid.axes[0]]),
        entries: kernel.values,
    })
}

pub fn weyl_apply(
    a: &SampledFunction,
    f: &SampledFunction,
) -> Result<SampledFunction, OperatorError> {
    weyl_matrix(a)?.apply(f)
}

/// Both sides of the weak definition
/// `⟨a^w f, g⟩ = (2π)^{-d} ⟨a, Wig(g,f)⟩`, returned for comparison. The
/// symbol must live on the Wigner lattice of the function grid.
pub fn weak_pairing_check(
    a: &SampledFunction,
    f: &SampledFunction,
    g: &SampledFunction,
) -> Result<(Complex64, Complex64), OperatorError> {
    let lhs = inner_product(&weyl_apply(a, f)?, g)?;
    let wig = cross_wigner(g, f)?;
    if a.grid != wig.to_sampled().grid {
        return Err(TransformError::LatticeIncompatible.into());
    }
    let cell = wig.cell_volume();
    let pairing: Complex64 = a
        .values
        .iter()
        .zip(&wig.values)
        .map(|(x, w)| x * w.conj())
        .sum::<Complex64>()
        * cell;
    Ok((lhs, pairing / (2.0 * PI)))
}

/// Diagonal realization of the multiplication operator `f ↦ a₁·f`.
pub fn multiplication_operator(a1: &SampledFunction) -> Result<OperatorMatrix, OperatorError> {
    if a1.grid.dims() != 1 {
        return Err(GridError::DimensionMismatch { fixture: a1.grid.dims(), grid: 1 }.into());
    }
    let n = a1.grid.axes[0].n;
    let dx = a1.grid.axes[0].spacing();
    let mut entries = vec![Complex64::ZERO; n * n];
    for i in 0..n {
        entries[i * n + i] = a1.values[i] / dx;
    }
    Ok(OperatorMatrix { grid: a1.grid.clone(), entries })
}

/// Convolution operator `f ↦ b ∗ f` with `b(x_n - x_s)` truncated to zero
/// off the sample grid.
pub fn convolution_operator(b: &SampledFunction) -> Result<OperatorMatrix, OperatorError> {
    if b.grid.dims() != 1 {
        return Err(GridError::DimensionMismatch { fixture: b.grid.dims(), grid: 1 }.into());
    }
    let n = b.grid.axes[0].n;
    let mut entries = vec![Complex64::ZERO; n * n];
    for i in 0..n {
        for s in 0..n {
            let j = i as i64 - s as i64 + (n / 2) as i64;
            if j >= 0 && j < n as i64 {
                entries[i * n + s] = b.values[j as usize];
            }
        }
    }
    Ok(OperatorMatrix { grid: b.grid.clone(), entries })
}

/// Localization operator by its defining composition
/// `L^a_{ψ,γ} f = Σ_z a(z)·V_ψf(z)·Π(z)γ·ΔΔξ`; the symbol lives on the
/// full STFT lattice.
pub fn localization_compose(
    a: &SampledFunction,
    window: &SampledFunction,
    gamma: &SampledFunction,
    f: &SampledFunction,
) -> Result<SampledFunction, OperatorError> {
    let field = stft(f, window)?;
    if a.grid.axes != field.to_sampled().grid.axes {
        return Err(TransformError::LatticeIncompatible.into());
    }
    let weighted = PhaseSpaceField {
        kind: field.kind,
        shift_axes: field.shift_axes.clone(),
        mod_axes: field.mod_axes.clone(),
        values: field
            .values
            .iter()
            .zip(&a.values)
            .map(|(v, s)| v * s)
            .collect(),
    };
    Ok(stft_synthesis(&weighted, gamma)?)
}

/// Resample a Wigner-lattice symbol onto the standard STFT lattice by exact
/// lattice intersection in frequency (every second half-spaced point) with
/// zero extension outside the Wigner frequency range.
pub fn wigner_to_stft_lattice(w: &PhaseSpaceField) -> Result<SampledFunction, OperatorError> {
    let x_axis = w.shift_axes[0];
    let n = x_axis.n;
    let target = stft_symbol_grid(x_axis);
    let mut out = SampledFunction::zeros(target);
    for k in 0..n {
        // ξ_k on the standard lattice sits at half-index 2k - N/2
        let j = 2 * k as i64 - (n / 2) as i64;
        if j < 0 || j >= n as i64 {
            continue;
        }
        for i in 0..n {
            out.values[i * n + k] = w.values[i * n + j as usize];
        }
    }
    Ok(out)
}

/// Zero-padded 2-d convolution `(a ∗ b)(x_r) = Σ_v a(x_v)·b(x_r - x_v)·cell`
/// of two symbols on the same grid.
pub fn convolve2(
    a: &SampledFunction,
    b: &SampledFunction,
) -> Result<SampledFunction, OperatorError> {
    if a.grid != b.grid || a.grid.dims() != 2 {
        return Err(GridError::GridMismatch.into());
    }
    let (n0, n1) = (a.grid.axes[0].n, a.grid.axes[1].n);
    let (m0, m1) = (2 * n0, 2 * n1);
    let mut pa = vec![Complex64::ZERO; m0 * m1];
    let mut pb = vec![Complex64::ZERO; m0 * m1];
    for i in 0..n0 {
        for j in 0..n1 {
            pa[i * m1 + j] = a.values[i * n1 + j];
            pb[i * m1 + j] = b.values[i * n1 + j];
        }
    }
    fft2(&mut pa, m0, m1, false);
    fft2(&mut pb, m0, m1, false);
    for (x, y) in pa.iter_mut().zip(&pb) {
        *x *= y;
    }
    fft2(&mut pa, m0, m1, true);
    let cell = a.grid.cell_volume();
    let inv = cell / (m0 * m1) as f64;
    let mut out = SampledFunction::zeros(a.grid.clone());
    // linear-convolution index r+N/2 recenters the symmetric grids
    for r0 in 0..n0 {
        for r1 in 0..n1 {
            let s0 = r0 + n0 / 2;
            let s1 = r1 + n1 / 2;
            out.values[r0 * n1 + r1] = pa[s0 * m1 + s1] * inv;
        }
    }
    Ok(out)
}

fn fft2(values: &mut [Complex64], n0: usize, n1: usize, inverse: bool) {
    use rustfft::FftDirection;
    let dir = if inverse { FftDirection::Inverse } else { FftDirection::Forward };
    let planner = |n: usize| {
        let mut p = rustfft::FftPlanner::new();
        p.plan_fft(n, dir)
    };
    let fft1 = planner(n1);
    for row in values.chunks_mut(n1) {
        fft1.process(row);
    }
    let fft0 = planner(n0);
    let mut col = vec![Complex64::ZERO; n0];
    for j in 0..n1 {
        for i in 0..n0 {
            col[i] = values[i * n1 + j];
        }
        fft0.process(&mut col);
        for i in 0..n0 {
            values[i * n1 + j] = col[i];
        }
    }
}

/// Localization operator through its Weyl symbol
/// `L^a_{ψ,γ} = (a ∗ Wig(γ,ψ))^w(x,D)`.
pub fn localization_via_weyl(
    a: &SampledFunction,
    window: &SampledFunction,
    gamma: &SampledFunction,
) -> Result<OperatorMatrix, OperatorError> {
    let wig = cross_wigner(gamma, window)?;
    let wig_std = wigner_to_stft_lattice(&wig)?;
    if a.grid != wig_std.grid {
        return Err(TransformError::LatticeIncompatible.into());
    }
    let symbol = convolve2(a, &wig_std)?;
    weyl_matrix(&symbol)
}

/// Top-k eigenvalues (by modulus, descending) of the quadrature-weighted
/// operator `entries·Δ`.
pub fn spectrum(t: &OperatorMatrix, k: usize) -> Result<Vec<Complex64>, OperatorError> {
    let n = t.n();
    let dx = t.grid.axes[0].spacing();
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| t.entries[i * n + j] * dx);
    let schur = nalgebra::linalg::Schur::try_new(m, 1e-14, 0)
        .ok_or(OperatorError::SpectrumFailed)?;
    let tri = schur.unpack().1;
    let mut eig: Vec<Complex64> = (0..n).map(|i| tri[(i, i)]).collect();
    eig.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then(a.re.total_cmp(&b.re))
            .then(a.im.total_cmp(&b.im))
    });
    eig.truncate(k.min(n));
    Ok(eig)
}

/// Closed-form operator for the distributional symbol `δ_x ⊗ a₂(ξ)`:
/// `f ↦ 2^d·F^{-1}(a₂)(2t)·(If)(t)`. The inverse transform is evaluated at
/// the doubled points by a direct phase sum over the frequency samples.
pub fn op_delta_tensor(a2: &SampledFunction, grid: &Grid) -> Result<OperatorMatrix, OperatorError> {
    if a2.grid.dims() != 1 || a2.grid.axes[0].tag != SpaceTag::Freq {
        return Err(GridError::SpaceTagMismatch { expected: SpaceTag::Freq }.into());
    }
    let ax = grid.axes[0];
    let n = ax.n;
    let dx = ax.spacing();
    let mut entries = vec![Complex64::ZERO; n * n];
    for i in 0..n {
        let t2 = 2.0 * ax.point(i);
        let inv_ft = phase_sum_inverse_ft(a2, t2);
        let s = (n - i) % n;
        entries[i * n + s] = 2.0 * inv_ft / dx;
    }
    Ok(OperatorMatrix { grid: grid.clone(), entries })
}

/// Closed-form operator for the distributional symbol `a₁(x) ⊗ δ_ξ`:
/// `f ↦ Λ₂a₁ ∗ If` with `Λ₂a₁(x) = a₁(x/2)`, i.e. kernel `a₁((x+s)/2)`.
pub fn op_tensor_delta(a1: &SampledFunction) -> Result<OperatorMatrix, OperatorError> {
    if a1.grid.dims() != 1 || a1.grid.axes[0].tag != SpaceTag::Time {
        return Err(GridError::SpaceTagMismatch { expected: SpaceTag::Time }.into());
    }
    let n = a1.grid.axes[0].n;
    let refined = refine_axis_x2(a1, 0);
    let mut entries = vec![Complex64::ZERO; n * n];
    for i in 0..n {
        for s in 0..n {
            entries[i * n + s] = refined.values[i + s];
        }
    }
    Ok(OperatorMatrix { grid: a1.grid.clone(), entries })
}

fn phase_sum_inverse_ft(a: &SampledFunction, t: f64) -> Complex64 {
    let ax = a.grid.axes[0];
    let scale = ax.spacing() / (2.0 * PI);
    a.values
        .iter()
        .enumerate()
        .map(|(k, v)| v * Complex64::from_polar(1.0, t * ax.point(k)))
        .sum::<Complex64>()
        * scale
}

/// `(2π)^{-d}`-normalized phase-space pairing of two Wigner-lattice fields;
/// with this normalization the Moyal formula is constant-free:
/// `moyal_pairing(Wig(g,f), Wig(k,h)) = ⟨g,k⟩·conj(⟨f,h⟩)`.
pub fn moyal_pairing(
    a: &PhaseSpaceField,
    b: &PhaseSpaceField,
) -> Result<Complex64, OperatorError> {
    Ok(field_pairing(a, b)? / (2.0 * PI))
}

/// Multiply the frequency content of a 2-d symbol by a mask `m(x̃, ξ̃)` given
/// on the grid of its full Fourier transform: `F^{-1}(m·F(w))`. This is the
/// convolution `a ∗ w` when `m = â`.
pub fn fourier_multiplier(
    w: &SampledFunction,
    mask: impl Fn(f64, f64) -> f64,
) -> Result<SampledFunction, OperatorError> {
    let mut spatial = w.clone();
    for ax in &mut spatial.grid.axes {
        ax.tag = SpaceTag::Time;
    }
    let mut hat = fourier(&spatial)?;
    let (n0, n1) = (hat.grid.axes[0].n, hat.grid.axes[1].n);
    for i in 0..n0 {
        let x = hat.grid.axes[0].point(i);
        for j in 0..n1 {
            let xi = hat.grid.axes[1].point(j);
            hat.values[i * n1 + j] *= mask(x, xi);
        }
    }
    let mut back = inverse_fourier(&hat)?;
    back.grid = w.grid.clone();
    back.truncated = w.truncated;
    Ok(back)
}
