//! Tolerances used by the identity suite and the acceptance tests.
//!
//! Grouped by what limits the accuracy: exact index algebra and FFT
//! round-off sit near 1e-12; quadrature of super-exponentially decaying
//! integrands on the default grids (N = 128, L = 12) is spectrally accurate
//! and lands near 1e-9; chains of several transforms accumulate to 1e-6.

/// DFT bridge against the O(N²) quadrature sum: same sum reordered by the
/// FFT, so only round-off separates them.
pub const BRIDGE_VS_QUADRATURE: f64 = 1e-12;

/// STFT inversion: quadrature of the synthesis integral over the full
/// lattice, relative L² reconstruction error.
pub const STFT_INVERSION: f64 = 1e-6;

/// Moyal formula across Hermite fixtures of order 0–3.
pub const MOYAL: f64 = 1e-8;

/// Wigner frequency marginal against `(2π)^d g(x)·conj(f(x))`, interior
/// points.
pub const WIGNER_MARGINAL: f64 = 1e-6;

/// `Wig[f ⊗ conj(g)] = Wig(f, g)` and the Wigner-like round trip.
pub const WIGNER_LIKE: f64 = 1e-10;

/// Weyl kernel two-path equality and symbol→kernel→symbol round trip.
pub const KERNEL_BIJECTION: f64 = 1e-10;

/// Weak-pairing agreement `⟨a^w f, g⟩` vs `(2π)^{-d}⟨a, Wig(g,f)⟩`.
pub const WEAK_PAIRING: f64 = 1e-6;

/// Rank-one Weyl operator: action against the closed form, and the single
/// non-negligible eigenvalue.
pub const RANK_ONE: f64 = 1e-8;

/// Eigenvalues below this modulus count as numerically zero.
pub const SPECTRUM_FLOOR: f64 = 1e-8;

/// Chirp-symbol Weyl operator: coefficient of variation of the (constant)
/// output and the match of its mean against the closed-form integral.
pub const CHIRP_CONSTANT: f64 = 1e-6;

/// Localization identity `L^1_{ψ,γ} f = (2π)^d ⟨γ,ψ⟩ f`.
pub const LOCALIZATION_IDENTITY: f64 = 1e-6;

/// Composition path vs Weyl-symbol path of the localization operator.
pub const LOCALIZATION_TWO_PATH: f64 = 1e-4;

/// Fourier–Wigner relation at common lattice points.
pub const FOURIER_WIGNER: f64 = 1e-6;

/// Cross-ambiguity vs phase-times-STFT: exact identity on the lattice.
pub const CROSS_AMBIGUITY: f64 = 1e-12;

/// Band-limited example: relative modulus of `F(Wig(f, If))` outside the
/// predicted frequency band.
pub const BANDLIMIT_SUPPORT: f64 = 1e-8;

/// Band-limited example: `a ∗ Wig(f, If) = Wig(f, If)`.
pub const BANDLIMIT_CONVOLUTION: f64 = 1e-6;

/// Closed-form Gaussian transforms (Fourier pair, STFT, Wigner) against
/// their analytic expressions.
pub const GAUSSIAN_CLOSED_FORM: f64 = 1e-9;

/// Plain Gaussian quadrature identities (overlaps, Parseval).
pub const GAUSSIAN_QUADRATURE: f64 = 1e-10;

/// STFT energy / duality-pairing constant `(2π)^d ‖ψ‖²`.
pub const STFT_ENERGY: f64 = 1e-8;

/// `Wig(ψ, 1)` against `2^d e^{2ixξ} ψ̂(2ξ)`, interior lattice points.
pub const WIG_PSI_ONE: f64 = 1e-6;

/// 4-variable symbol STFT against direct 2-d quadrature.
pub const STFT4_VS_QUADRATURE: f64 = 1e-10;

/// Boundary modulus below which a sampled decaying fixture is considered
/// fully captured by the grid.
pub const BOUNDARY_DECAY: f64 = 1e-10;

/// Convexity slack for Young-conjugate tables (second differences).
pub const CONJUGATE_CONVEXITY: f64 = -1e-10;

/// Subadditivity slack for weight-function condition checks.
pub const SUBADDITIVITY: f64 = 1e-12;
