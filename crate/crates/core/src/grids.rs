//! Symmetric sample grids, sampled functions, and the bridge between the
//! DFT and the continuous Fourier convention `f̂(ξ) = ∫ e^{-it·ξ} f(t) dt`.
//!
//! An axis holds `N` points `x_n = -H + nΔ` with `Δ = 2H/N`. Its dual axis
//! holds the frequencies `ξ_k = -π/Δ + kΔξ` with `Δξ = 2π/(NΔ)`, which is
//! again a symmetric axis (`Δ·Δξ·N = 2π`). On these grids
//!
//! `f̂(ξ_k) = Δ Σ_n e^{-i x_n ξ_k} f(x_n)`
//!
//! is evaluated exactly (to round-off) by pre/post sign twiddles around a
//! standard FFT, because `e^{-i x_n ξ_k} = i^{-N} (-1)^{n+k} e^{-2πink/N}`.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("sample counts must be powers of two, got {0}")]
    NotPowerOfTwo(usize),
    #[error("half extent must be positive, got {0}")]
    BadExtent(f64),
    #[error("fixture dimension {fixture} does not match grid dimension {grid}")]
    DimensionMismatch { fixture: usize, grid: usize },
    #[error("operands live on different grids")]
    GridMismatch,
    #[error("operation requires {expected:?}-tagged axes")]
    SpaceTagMismatch { expected: SpaceTag },
    #[error("shift {value} on axis {axis} is not a lattice multiple of the spacing")]
    OffLattice { axis: usize, value: f64 },
    #[error("operation requires a square 2-d grid")]
    NonSquareGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceTag {
    Time,
    Freq,
}

impl SpaceTag {
    fn flipped(self) -> Self {
        match self {
            SpaceTag::Time => SpaceTag::Freq,
            SpaceTag::Freq => SpaceTag::Time,
        }
    }
}

/// One axis of a symmetric grid: `n` points `-H + iΔ`, `Δ = 2H/n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub n: usize,
    pub half_extent: f64,
    pub tag: SpaceTag,
}

impl Axis {
    pub fn time(n: usize, half_extent: f64) -> Result<Self, GridError> {
        Self::new(n, half_extent, SpaceTag::Time)
    }

    pub fn new(n: usize, half_extent: f64, tag: SpaceTag) -> Result<Self, GridError> {
        if !n.is_power_of_two() {
            return Err(GridError::NotPowerOfTwo(n));
        }
        if !(half_extent > 0.0) {
            return Err(GridError::BadExtent(half_extent));
        }
        Ok(Axis { n, half_extent, tag })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_extent / self.n as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        -self.half_extent + i as f64 * self.spacing()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.point(i))
    }

    /// The DFT-dual axis: same point count, spacing `2π/(NΔ)`, flipped tag.
    pub fn dual(&self) -> Axis {
        Axis {
            n: self.n,
            half_extent: PI / self.spacing(),
            tag: self.tag.flipped(),
        }
    }

    /// Index of a lattice point, if `x` is one (to 1e-9 of a spacing).
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let raw = (x + self.half_extent) / self.spacing();
        let rounded = raw.round();
        if (raw - rounded).abs() > 1e-9 || rounded < 0.0 || rounded >= self.n as f64 {
            None
        } else {
            Some(rounded as usize)
        }
    }

    /// Axis covering the same extent with every `stride`-th point.
    pub fn strided(&self, stride: usize) -> Axis {
        Axis {
            n: self.n / stride,
            half_extent: self.half_extent,
            tag: self.tag,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub axes: Vec<Axis>,
}

impl Grid {
    pub fn line(n: usize, half_extent: f64) -> Result<Self, GridError> {
        Ok(Grid { axes: vec![Axis::time(n, half_extent)?] })
    }

    pub fn square(n: usize, half_extent: f64) -> Result<Self, GridError> {
        let ax = Axis::time(n, half_extent)?;
        Ok(Grid { axes: vec![ax, ax] })
    }

    pub fn from_axes(axes: Vec<Axis>) -> Self {
        Grid { axes }
    }

    pub fn dims(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Quadrature weight of one cell: the product of the axis spacings.
    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.spacing()).product()
    }

    /// Row-major flat index.
    pub fn flat(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims());
        let mut out = 0;
        for (i, ax) in idx.iter().zip(&self.axes) {
            debug_assert!(*i < ax.n);
            out = out * ax.n + i;
        }
        out
    }

    /// Coordinates of the row-major flat index.
    pub fn unflat(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims()];
        for d in (0..self.dims()).rev() {
            idx[d] = flat % self.axes[d].n;
            flat /= self.axes[d].n;
        }
        idx
    }

    pub fn point(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter().zip(&self.axes).map(|(&i, a)| a.point(i)).collect()
    }
}

/// Complex samples on a grid, row-major in axis order. `truncated` marks
/// values that do not decay at the boundary (constants, chirps, clipped
/// fixtures); identity tests against closed forms then restrict themselves
/// to interior lattice points.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub grid: Grid,
    pub values: Vec<Complex64>,
    pub truncated: bool,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        SampledFunction { grid, values, truncated: false }
    }

    pub fn zeros(grid: Grid) -> Self {
        let n = grid.len();
        SampledFunction { grid, values: vec![Complex64::ZERO; n], truncated: false }
    }

    pub fn conj(&self) -> Self {
        SampledFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v.conj()).collect(),
            truncated: self.truncated,
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        SampledFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
            truncated: self.truncated,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, GridError> {
        if self.grid != other.grid {
            return Err(GridError::GridMismatch);
        }
        Ok(SampledFunction {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
            truncated: self.truncated || other.truncated,
        })
    }

    /// Tensor (outer) product `h(x, y) = f(x) g(y)` of two 1-d functions.
    pub fn outer(f: &Self, g: &Self) -> Result<Self, GridError> {
        if f.grid.dims() != 1 || g.grid.dims() != 1 {
            return Err(GridError::DimensionMismatch {
                fixture: f.grid.dims().max(g.grid.dims()),
                grid: 1,
            });
        }
        let grid = Grid::from_axes(vec![f.grid.axes[0], g.grid.axes[0]]);
        let mut values = Vec::with_capacity(grid.len());
        for a in &f.values {
            for b in &g.values {
                values.push(a * b);
            }
        }
        Ok(SampledFunction { grid, values, truncated: f.truncated || g.truncated })
    }

    pub fn norm_l2(&self) -> f64 {
        let w = self.grid.cell_volume();
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * w).sqrt()
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus on the boundary shell of the grid.
    pub fn boundary_modulus(&self) -> f64 {
        let mut max = 0.0_f64;
        for flat in 0..self.values.len() {
            let idx = self.grid.unflat(flat);
            let on_boundary = idx
                .iter()
                .zip(&self.grid.axes)
                .any(|(&i, a)| i == 0 || i + 1 == a.n);
            if on_boundary {
                max = max.max(self.values[flat].norm());
            }
        }
        max
    }
}

/// `⟨f, g⟩ = Σ f·conj(g)·(cell volume)`, conjugate-linear in `g`.
pub fn inner_product(f: &SampledFunction, g: &SampledFunction) -> Result<Complex64, GridError> {
    if f.grid != g.grid {
        return Err(GridError::GridMismatch);
    }
    let w = f.grid.cell_volume();
    Ok(f.values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| a * b.conj())
        .sum::<Complex64>()
        * w)
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft(n, direction))
}

/// `i^(-n)` for the bridge phase `e^{-iπN/2}`, kept exact.
fn quarter_phase(n: usize, forward: bool) -> Complex64 {
    let c = match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    if forward {
        c
    } else {
        c.conj()
    }
}

/// In-place bridge along one axis of a row-major array.
///
/// Forward: multiplies by the axis spacing (quadrature weight); inverse
/// divides by `2π` and multiplies by the input spacing, so that
/// `inverse ∘ forward` is the identity.
pub(crate) fn bridge_axis(
    values: &mut [Complex64],
    shape: &[usize],
    axis: usize,
    in_axis: Axis,
    forward: bool,
) -> Axis {
    let n = in_axis.n;
    debug_assert_eq!(shape[axis], n);
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let scale = if forward {
        in_axis.spacing()
    } else {
        in_axis.spacing() / (2.0 * PI)
    };
    let phase = quarter_phase(n, forward) * scale;
    let fft = plan(n, if forward { FftDirection::Forward } else { FftDirection::Inverse });

    let mut line = vec![Complex64::ZERO; n];
    for o in 0..outer {
        for i in 0..inner {
            let base = o * n * inner + i;
            for k in 0..n {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                line[k] = values[base + k * inner] * sign;
            }
            fft.process(&mut line);
            for k in 0..n {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                values[base + k * inner] = line[k] * sign * phase;
            }
        }
    }
    in_axis.dual()
}

/// Full Fourier transform; every axis must be `Time`-tagged.
pub fn fourier(f: &SampledFunction) -> Result<SampledFunction, GridError> {
    transform_all(f, true)
}

/// Full inverse Fourier transform; every axis must be `Freq`-tagged.
pub fn inverse_fourier(f: &SampledFunction) -> Result<SampledFunction, GridError> {
    transform_all(f, false)
}

fn transform_all(f: &SampledFunction, forward: bool) -> Result<SampledFunction, GridError> {
    let want = if forward { SpaceTag::Time } else { SpaceTag::Freq };
    if f.grid.axes.iter().any(|a| a.tag != want) {
        return Err(GridError::SpaceTagMismatch { expected: want });
    }
    let shape: Vec<usize> = f.grid.axes.iter().map(|a| a.n).collect();
    let mut values = f.values.clone();
    let mut axes = Vec::with_capacity(f.grid.dims());
    for (d, &ax) in f.grid.axes.iter().enumerate() {
        axes.push(bridge_axis(&mut values, &shape, d, ax, forward));
    }
    Ok(SampledFunction {
        grid: Grid::from_axes(axes),
        values,
        truncated: f.truncated,
    })
}

/// Partial Fourier transform along one axis (0-based).
pub fn partial_fourier(
    f: &SampledFunction,
    axis: usize,
    forward: bool,
) -> Result<SampledFunction, GridError> {
    let want = if forward { SpaceTag::Time } else { SpaceTag::Freq };
    if f.grid.axes[axis].tag != want {
        return Err(GridError::SpaceTagMismatch { expected: want });
    }
    let shape: Vec<usize> = f.grid.axes.iter().map(|a| a.n).collect();
    let mut values = f.values.clone();
    let new_axis = bridge_axis(&mut values, &shape, axis, f.grid.axes[axis], forward);
    let mut axes = f.grid.axes.clone();
    axes[axis] = new_axis;
    Ok(SampledFunction {
        grid: Grid::from_axes(axes),
        values,
        truncated: f.truncated,
    })
}

/// Phase-shift operator `Π(z) f(t) = e^{it·ξ} f(t - x)` with `x` on the
/// sample lattice and `ξ` on the dual lattice. Translation is a circular
/// index shift; modulation phases are evaluated at the exact lattice points.
pub fn phase_space_shift(
    f: &SampledFunction,
    shift: &[f64],
    modulation: &[f64],
) -> Result<SampledFunction, GridError> {
    let d = f.grid.dims();
    if shift.len() != d || modulation.len() != d {
        return Err(GridError::DimensionMismatch { fixture: shift.len(), grid: d });
    }
    let mut shift_idx = Vec::with_capacity(d);
    for (axis, (&x, ax)) in shift.iter().zip(&f.grid.axes).enumerate() {
        let steps = x / ax.spacing();
        if (steps - steps.round()).abs() > 1e-9 {
            return Err(GridError::OffLattice { axis, value: x });
        }
        shift_idx.push(steps.round() as i64);
    }
    for (axis, (&xi, ax)) in modulation.iter().zip(&f.grid.axes).enumerate() {
        let dual_spacing = ax.dual().spacing();
        let steps = xi / dual_spacing;
        if (steps - steps.round()).abs() > 1e-9 {
            return Err(GridError::OffLattice { axis, value: xi });
        }
    }

    let mut out = SampledFunction::zeros(f.grid.clone());
    out.truncated = f.truncated;
    for flat in 0..f.values.len() {
        let idx = f.grid.unflat(flat);
        let mut src = 0usize;
        let mut phase = 0.0;
        for (d, (&i, ax)) in idx.iter().zip(&f.grid.axes).enumerate() {
            let n = ax.n as i64;
            let j = (i as i64 - shift_idx[d]).rem_euclid(n) as usize;
            src = src * ax.n + j;
            phase += ax.point(i) * modulation[d];
        }
        out.values[flat] = f.values[src] * Complex64::from_polar(1.0, phase);
    }
    Ok(out)
}

/// Reflection `(If)(t) = f(-t)`: index `n` maps to `(N - n) mod N`, which
/// pairs `x_n` with `-x_n` (the leftmost point `-H` maps to itself since
/// `+H` is off grid).
pub fn reflect(f: &SampledFunction) -> SampledFunction {
    let mut out = SampledFunction::zeros(f.grid.clone());
    out.truncated = f.truncated;
    for flat in 0..f.values.len() {
        let idx = f.grid.unflat(flat);
        let mut src = 0usize;
        for (&i, ax) in idx.iter().zip(&f.grid.axes) {
            let j = (ax.n - i) % ax.n;
            src = src * ax.n + j;
        }
        out.values[flat] = f.values[src];
    }
    out
}

/// Band-limited refinement of one axis by factor two: forward bridge,
/// zero-extend the spectrum to twice the range, inverse bridge. The result
/// samples the same trigonometric interpolant on the half-spaced grid; at
/// the original nodes it reproduces the input to round-off.
pub(crate) fn refine_axis_x2(f: &SampledFunction, axis: usize) -> SampledFunction {
    let ax = f.grid.axes[axis];
    let spectrum = partial_fourier(f, axis, matches!(ax.tag, SpaceTag::Time))
        .expect("tag checked by construction");
    // zero-extend the transformed axis symmetrically: N → 2N points
    let old = spectrum.grid.axes[axis];
    let wide = Axis { n: 2 * old.n, half_extent: 2.0 * old.half_extent, tag: old.tag };
    let mut axes = spectrum.grid.axes.clone();
    axes[axis] = wide;
    let grid = Grid::from_axes(axes);
    let mut padded = SampledFunction::zeros(grid);
    padded.truncated = f.truncated;
    let dims = spectrum.grid.dims();
    for flat in 0..spectrum.values.len() {
        let mut idx = spectrum.grid.unflat(flat);
        idx[axis] += old.n / 2;
        let mut dst = 0usize;
        for d in 0..dims {
            dst = dst * padded.grid.axes[d].n + idx[d];
        }
        padded.values[dst] = spectrum.values[flat];
    }
    partial_fourier(&padded, axis, matches!(ax.tag, SpaceTag::Freq))
        .expect("tag flipped by the forward bridge")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::Fixture;

    fn gaussian_128() -> SampledFunction {
        Fixture::gaussian(0.0, 1.0, 0.0)
            .sample(&Grid::line(128, 12.0).unwrap())
            .unwrap()
    }

    /// O(N²) quadrature oracle for the forward bridge.
    fn direct_dft(f: &SampledFunction) -> Vec<Complex64> {
        let ax = f.grid.axes[0];
        let dual = ax.dual();
        (0..dual.n)
            .map(|k| {
                let xi = dual.point(k);
                f.values
                    .iter()
                    .enumerate()
                    .map(|(n, v)| v * Complex64::from_polar(1.0, -ax.point(n) * xi))
                    .sum::<Complex64>()
                    * ax.spacing()
            })
            .collect()
    }

    #[test]
    fn bridge_matches_direct_quadrature() {
        let f = gaussian_128();
        let fhat = fourier(&f).unwrap();
        let oracle = direct_dft(&f);
        let max = oracle.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (a, b) in fhat.values.iter().zip(&oracle) {
            assert!((a - b).norm() <= 1e-12 * max);
        }
    }

    #[test]
    fn gaussian_fourier_closed_form() {
        // ĝ(ξ) = √(2π)·e^{-ξ²/2} for g(t) = e^{-t²/2}
        let fhat = fourier(&gaussian_128()).unwrap();
        let ax = fhat.grid.axes[0];
        let scale = (2.0 * PI).sqrt();
        let mut worst = 0.0_f64;
        for (k, v) in fhat.values.iter().enumerate() {
            let xi = ax.point(k);
            let expect = scale * (-xi * xi / 2.0).exp();
            worst = worst.max((v - Complex64::new(expect, 0.0)).norm());
        }
        assert!(worst <= 1e-10 * scale, "worst abs err {worst:e}");
    }

    #[test]
    fn inverse_fourier_round_trip() {
        let f = gaussian_128();
        let back = inverse_fourier(&fourier(&f).unwrap()).unwrap();
        assert_eq!(back.grid, f.grid);
        let mut worst = 0.0_f64;
        for (a, b) in back.values.iter().zip(&f.values) {
            worst = worst.max((a - b).norm());
        }
        assert!(worst <= 1e-12);
    }

    #[test]
    fn fourier_is_linear() {
        let g = Grid::line(64, 10.0).unwrap();
        let f1 = Fixture::gaussian(0.5, 1.0, 0.0).sample(&g).unwrap();
        let f2 = Fixture::hermite(2).sample(&g).unwrap();
        let alpha = Complex64::new(1.25, -0.5);
        let beta = Complex64::new(-0.75, 2.0);
        let lhs = fourier(&f1.scaled(alpha).add(&f2.scaled(beta)).unwrap()).unwrap();
        let rhs = fourier(&f1)
            .unwrap()
            .scaled(alpha)
            .add(&fourier(&f2).unwrap().scaled(beta))
            .unwrap();
        for (a, b) in lhs.values.iter().zip(&rhs.values) {
            assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn partial_fourier_respects_separability() {
        let g = Grid::line(64, 10.0).unwrap();
        let f = Fixture::gaussian(0.0, 1.0, 0.0).sample(&g).unwrap();
        let h = Fixture::hermite(1).sample(&g).unwrap();
        let tensor = SampledFunction::outer(&f, &h).unwrap();
        let lhs = partial_fourier(&tensor, 1, true).unwrap();
        let rhs = SampledFunction::outer(&f, &fourier(&h).unwrap()).unwrap();
        for (a, b) in lhs.values.iter().zip(&rhs.values) {
            assert!((a - b).norm() <= 1e-12);
        }
        let back = partial_fourier(&lhs, 1, false).unwrap();
        for (a, b) in back.values.iter().zip(&tensor.values) {
            assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn parseval_constant() {
        let g = Grid::line(128, 12.0).unwrap();
        let f = Fixture::gaussian(0.0, 1.0, 0.0).sample(&g).unwrap();
        let h = Fixture::hermite(3).sample(&g).unwrap();
        let lhs = inner_product(&fourier(&f).unwrap(), &fourier(&h).unwrap()).unwrap();
        let rhs = inner_product(&f, &h).unwrap() * 2.0 * PI;
        assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0));
    }

    #[test]
    fn gaussian_overlap_oracle() {
        // ⟨e^{-t²/2}, e^{-(t-1)²/2}⟩ = √π·e^{-1/4} (analytic Gaussian overlap)
        let g = Grid::line(128, 12.0).unwrap();
        let f = Fixture::gaussian(0.0, 1.0, 0.0).sample(&g).unwrap();
        let h = Fixture::gaussian(1.0, 1.0, 0.0).sample(&g).unwrap();
        let overlap = inner_product(&f, &h).unwrap();
        let oracle = PI.sqrt() * (-0.25_f64).exp();
        assert!((overlap.re - oracle).abs() <= 1e-10 && overlap.im.abs() <= 1e-12);
        // conjugate symmetry
        let swapped = inner_product(&h, &f).unwrap();
        assert!((swapped - overlap.conj()).norm() <= 1e-14);
    }

    #[test]
    fn shift_preserves_modulus_and_composes() {
        let g = Grid::line(64, 8.0).unwrap();
        let f = Fixture::gaussian(0.0, 1.0, 0.0).sample(&g).unwrap();
        let dx = g.axes[0].spacing();
        let dxi = g.axes[0].dual().spacing();

        let id = phase_space_shift(&f, &[0.0], &[0.0]).unwrap();
        assert_eq!(id.values, f.values);

        let z1 = (3.0 * dx, 5.0 * dxi);
        let z2 = (-7.0 * dx, 2.0 * dxi);
        let once = phase_space_shift(&f, &[z1.0], &[z1.1]).unwrap();
        for (n, v) in once.values.iter().enumerate() {
            let expect = f.values[(n + 64 - 3) % 64].norm();
            assert!((v.norm() - expect).abs() <= 1e-14);
        }
        // composition equals the combined shift up to a scalar phase
        let twice = phase_space_shift(&once, &[z2.0], &[z2.1]).unwrap();
        let combined = phase_space_shift(&f, &[z1.0 + z2.0], &[z1.1 + z2.1]).unwrap();
        for (a, b) in twice.values.iter().zip(&combined.values) {
            assert!((a.norm() - b.norm()).abs() <= 1e-13);
        }

        assert!(matches!(
            phase_space_shift(&f, &[0.5 * dx], &[0.0]),
            Err(GridError::OffLattice { .. })
        ));
    }

    #[test]
    fn reflect_is_involutive() {
        let g = Grid::line(64, 8.0).unwrap();
        let f = Fixture::gaussian(0.7 - 8.0 / 64.0 * 3.0, 0.8, 0.0).sample(&g).unwrap();
        let back = reflect(&reflect(&f));
        assert_eq!(back.values, f.values);
    }

    #[test]
    fn refinement_reproduces_original_nodes() {
        let f = gaussian_128();
        let fine = refine_axis_x2(&f, 0);
        assert_eq!(fine.grid.axes[0].n, 256);
        assert!((fine.grid.axes[0].spacing() - f.grid.axes[0].spacing() / 2.0).abs() < 1e-15);
        for (n, v) in f.values.iter().enumerate() {
            assert!((fine.values[2 * n] - v).norm() <= 1e-12);
        }
        // interpolated values match the true Gaussian
        let ax = fine.grid.axes[0];
        for k in (1..fine.values.len()).step_by(2) {
            let x = ax.point(k);
            let expect = (-x * x / 2.0).exp();
            assert!((fine.values[k] - Complex64::new(expect, 0.0)).norm() <= 1e-10);
        }
    }
}
