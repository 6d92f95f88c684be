//! The identity suite: every closed-form identity and two-path agreement
//! the toolkit is built around, evaluated as named checks with pinned
//! tolerances, plus the diagnostics classification battery. The CLI's
//! `identities` command serializes these results; the acceptance tests
//! assert them.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::diagnostics::{
    self, default_lambda_list, default_mu_grid, localization_compactness_test,
    localization_symbol_report, weyl_compactness_test, HeuristicParams, Verdict,
};
use crate::fixtures::Fixture;
use crate::grids::{
    fourier, inner_product, reflect, Grid, SampledFunction, SpaceTag,
};
use crate::operators::{
    fourier_multiplier, localization_compose, localization_via_weyl,
    moyal_pairing, spectrum, stft_symbol_grid, weak_pairing_check,
    weyl_kernel, weyl_kernel_direct, weyl_apply, wigner_symbol_grid,
};
use crate::tolerances as tol;
use crate::transforms::{
    cross_ambiguity, cross_wigner, stft, stft_invert, symbol_stft4, wigner_like,
    wigner_like_inv,
};
use crate::weights::Weight;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// Scalar identity sides as `(re, im)`, when the check compares scalars;
    /// lattice-wide checks report only the deviation.
    pub lhs: Option<(f64, f64)>,
    pub rhs: Option<(f64, f64)>,
    /// Measured deviation (relative to the natural scale stated in `detail`).
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, error: f64, tolerance: f64, detail: String) -> Self {
        CheckResult {
            name: name.into(),
            lhs: None,
            rhs: None,
            error,
            tolerance,
            pass: error <= tolerance,
            detail,
        }
    }

    fn scalar(
        name: &str,
        lhs: Complex64,
        rhs: Complex64,
        tolerance: f64,
        detail: String,
    ) -> Self {
        let error = (lhs - rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE);
        CheckResult {
            name: name.into(),
            lhs: Some((lhs.re, lhs.im)),
            rhs: Some((rhs.re, rhs.im)),
            error,
            tolerance,
            pass: error <= tolerance,
            detail,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SuiteConfig {
    pub n: usize,
    pub half_extent: f64,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { n: 128, half_extent: 12.0, seed: 0 }
    }
}

/// Deterministic splitmix64 stream for the randomized oracle points.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }
}

fn diff_norm(a: &SampledFunction, b: &SampledFunction) -> f64 {
    a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Run the full identity suite on the standard 1-d grid (N, L) plus the
/// 64-point symbol grid for the 4-variable check.
pub fn run_identity_suite(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let mut rng = SplitMix64(cfg.seed ^ 0x5bd1e995);
    let mut out = Vec::new();
    let grid = Grid::line(cfg.n, cfg.half_extent).expect("valid suite grid");
    let n = cfg.n;
    let ax = grid.axes[0];

    let gauss = Fixture::gaussian(0.0, 1.0, 0.0).sample(&grid).unwrap();
    let herm: Vec<SampledFunction> = (0..4)
        .map(|k| Fixture::hermite(k).sample(&grid).unwrap())
        .collect();

    // ---- criterion 1: DFT bridge vs brute-force quadrature ----
    {
        let fixtures = [
            Fixture::gaussian(0.0, 1.0, 0.0),
            Fixture::gaussian(0.5, 1.3, 0.8),
            Fixture::hermite(3),
        ];
        let mut worst = 0.0_f64;
        for fx in &fixtures {
            let f = fx.sample(&grid).unwrap();
            let fhat = fourier(&f).unwrap();
            let dual = ax.dual();
            let mut scale = 0.0_f64;
            let mut err = 0.0_f64;
            for k in 0..n {
                let xi = dual.point(k);
                let direct = (0..n)
                    .map(|i| f.values[i] * Complex64::from_polar(1.0, -ax.point(i) * xi))
                    .sum::<Complex64>()
                    * ax.spacing();
                scale = scale.max(direct.norm());
                err = err.max((fhat.values[k] - direct).norm());
            }
            worst = worst.max(err / scale);
        }
        out.push(CheckResult::new(
            "dft-bridge-vs-quadrature",
            worst,
            tol::BRIDGE_VS_QUADRATURE,
            format!("max rel deviation over {} fixtures", fixtures.len()),
        ));
    }

    // ---- criterion 2: STFT inversion ----
    {
        let f = herm[2]
            .add(&gauss.scaled(Complex64::new(0.6, 0.2)))
            .unwrap();
        let field = stft(&f, &gauss).unwrap();
        let rec = stft_invert(&field, &gauss, &gauss).unwrap();
        let err = rec.add(&f.scaled((-1.0).into())).unwrap().norm_l2() / f.norm_l2();
        out.push(CheckResult::new(
            "stft-inversion",
            err,
            tol::STFT_INVERSION,
            "relative L² reconstruction error, Gaussian window".into(),
        ));
    }

    // ---- criterion 3: Moyal formula across Hermite orders 0–3 ----
    {
        let wigs: Vec<Vec<_>> = (0..4)
            .map(|a| {
                (0..4)
                    .map(|b| cross_wigner(&herm[a], &herm[b]).unwrap())
                    .collect()
            })
            .collect();
        let mut worst = 0.0_f64;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let lhs = moyal_pairing(&wigs[a][b], &wigs[c][d]).unwrap();
                        let rhs = if a == c && b == d { 1.0 } else { 0.0 };
                        worst = worst.max((lhs - Complex64::new(rhs, 0.0)).norm());
                    }
                }
            }
        }
        out.push(CheckResult::new(
            "moyal-hermite",
            worst,
            tol::MOYAL,
            "⟨Wig(h_a,h_b), Wig(h_c,h_d)⟩/(2π) vs δ_ac·δ_bd, 256 combos".into(),
        ));
    }

    // ---- criterion 4: Wigner frequency marginal ----
    {
        let f = &herm[2];
        let wig = cross_wigner(f, &gauss).unwrap();
        let dxi = wig.mod_axes[0].spacing();
        let mut err = 0.0_f64;
        for m in n / 4..3 * n / 4 {
            let marginal: Complex64 =
                (0..n).map(|k| wig.values[m * n + k]).sum::<Complex64>() * dxi;
            let expect = 2.0 * PI * f.values[m] * gauss.values[m].conj();
            err = err.max((marginal - expect).norm());
        }
        out.push(CheckResult::new(
            "wigner-marginal",
            err / (2.0 * PI),
            tol::WIGNER_MARGINAL,
            "∫Wig(g,f)(x,·)dξ vs (2π)·g(x)·conj(f(x)), interior points".into(),
        ));
    }

    // ---- criterion 5: Wigner-like transform ----
    {
        let f = Fixture::gaussian(0.3, 1.1, 0.4).sample(&grid).unwrap();
        let tensor = SampledFunction::outer(&f, &herm[3].conj()).unwrap();
        let via_like = wigner_like(&tensor).unwrap();
        let direct = cross_wigner(&f, &herm[3]).unwrap();
        let scale = direct.max_modulus();
        let err = via_like
            .values
            .iter()
            .zip(&direct.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        out.push(CheckResult::new(
            "wigner-like-tensor",
            err / scale,
            tol::WIGNER_LIKE,
            "Wig[f ⊗ conj(g)] vs Wig(f,g)".into(),
        ));

        let tensor2 = SampledFunction::outer(&f, &herm[2]).unwrap();
        let back = wigner_like_inv(&wigner_like(&tensor2).unwrap()).unwrap();
        out.push(CheckResult::new(
            "wigner-like-round-trip",
            diff_norm(&back, &tensor2) / tensor2.max_modulus(),
            tol::WIGNER_LIKE,
            "Wig^{-1}[Wig[F]] vs F".into(),
        ));
    }

    // ---- criterion 6: kernel two-path equality + symbol round trip ----
    {
        let a = cross_wigner(&gauss, &herm[2]).unwrap().to_sampled();
        let k1 = weyl_kernel(&a).unwrap();
        let k2 = weyl_kernel_direct(&a).unwrap();
        out.push(CheckResult::new(
            "weyl-kernel-two-path",
            diff_norm(&k1, &k2) / k1.max_modulus(),
            tol::KERNEL_BIJECTION,
            "Wig^{-1}[a] via index algebra vs explicit inverse-FT path".into(),
        ));
        let back = wigner_like(&k1).unwrap();
        out.push(CheckResult::new(
            "weyl-symbol-round-trip",
            diff_norm(&back, &a) / a.max_modulus(),
            tol::KERNEL_BIJECTION,
            "Wig[Wig^{-1}[a]] vs a".into(),
        ));
    }

    // ---- criterion 7: weak pairing battery (3 symbols × 3 × 3) ----
    {
        let team = [
            Fixture::gaussian(0.0, 1.0, 0.0).sample(&grid).unwrap(),
            Fixture::gaussian(0.5, 1.2, 0.4).sample(&grid).unwrap(),
            Fixture::gaussian(-0.3, 0.8, -0.2).sample(&grid).unwrap(),
        ];
        let symbols = [
            cross_wigner(&team[0], &team[1]).unwrap().to_sampled(),
            cross_wigner(&team[2], &herm[1]).unwrap().to_sampled(),
            {
                let wgrid = wigner_symbol_grid(ax);
                let mut a = SampledFunction::zeros(wgrid.clone());
                for i in 0..n {
                    let x = wgrid.axes[0].point(i);
                    for j in 0..n {
                        let xi = wgrid.axes[1].point(j);
                        a.values[i * n + j] =
                            Complex64::new((-(x * x + xi * xi) / 4.0).exp(), 0.0);
                    }
                }
                a
            },
        ];
        let mut worst = 0.0_f64;
        for a in &symbols {
            for f in &team {
                for g in &team {
                    let (lhs, rhs) = weak_pairing_check(a, f, g).unwrap();
                    worst = worst.max((lhs - rhs).norm() / lhs.norm().max(1e-3));
                }
            }
        }
        out.push(CheckResult::new(
            "weak-pairing-battery",
            worst,
            tol::WEAK_PAIRING,
            "⟨a^w f, g⟩ vs (2π)^{-1}⟨a, Wig(g,f)⟩ over 27 combinations".into(),
        ));
    }

    // ---- criterion 8: rank-one Weyl operator ----
    {
        let g = Fixture::gaussian(0.4, 1.0, 0.0).sample(&grid).unwrap();
        let f = Fixture::gaussian(-0.3, 1.2, 0.5).sample(&grid).unwrap();
        let a = cross_wigner(&g, &f).unwrap().to_sampled();
        let h = &herm[1];
        let action = weyl_apply(&a, h).unwrap();
        let expect = g.scaled(inner_product(&f, h).unwrap().conj());
        out.push(CheckResult::new(
            "rank-one-action",
            diff_norm(&action, &expect) / expect.max_modulus(),
            tol::RANK_ONE,
            "a = Wig(g,f): a^w h vs conj(⟨f,h⟩)·g".into(),
        ));

        let eig = spectrum(&crate::operators::weyl_matrix(&a).unwrap(), n).unwrap();
        let big = eig.iter().filter(|l| l.norm() > tol::SPECTRUM_FLOOR).count();
        let target = inner_product(&f, &g).unwrap().conj();
        let mut check = CheckResult::scalar(
            "rank-one-spectrum",
            eig[0],
            target,
            tol::RANK_ONE,
            format!("{big} eigenvalue(s) above 1e-8; leading vs conj(⟨f,g⟩)"),
        );
        if big != 1 {
            check.error = 1.0;
            check.pass = false;
        }
        out.push(check);
    }

    // ---- criterion 9: chirp counterexample ----
    {
        let g = Fixture::gaussian(0.3, 1.0, 0.0).sample(&grid).unwrap();
        let a = Fixture::chirp_symbol(-1.0, Fixture::gaussian(0.0, 1.0, 0.0))
            .sample(&stft_symbol_grid(ax))
            .unwrap();
        let outp = weyl_apply(&a, &g).unwrap();
        let interior: Vec<Complex64> = (n / 4..3 * n / 4).map(|i| outp.values[i]).collect();
        let mean = interior.iter().sum::<Complex64>() / interior.len() as f64;
        let var = interior
            .iter()
            .map(|v| (v - mean).norm_sqr())
            .sum::<f64>()
            / interior.len() as f64;
        out.push(CheckResult::new(
            "chirp-constant-cv",
            var.sqrt() / mean.norm(),
            tol::CHIRP_CONSTANT,
            "coefficient of variation of a^w g on the interior".into(),
        ));
        let oracle: Complex64 = (0..n)
            .map(|s| {
                let xs = ax.point(s);
                g.values[s] * (2.0 * PI).sqrt() * (-2.0 * xs * xs).exp()
            })
            .sum::<Complex64>()
            * ax.spacing()
            / (2.0 * PI);
        out.push(CheckResult::scalar(
            "chirp-mean",
            mean,
            oracle,
            tol::CHIRP_CONSTANT,
            "mean of a^w g vs (2π)^{-1}·∫f̂(2s)g(s)ds".into(),
        ));
    }

    // ---- criterion 10: localization identity and two-path agreement ----
    {
        let psi = &gauss;
        let gamma = Fixture::gaussian(0.0, 1.3, 0.0).sample(&grid).unwrap();
        let f = &herm[2];
        let one = Fixture::constant(1.0).sample(&stft_symbol_grid(ax)).unwrap();
        let lhs = localization_compose(&one, psi, &gamma, f).unwrap();
        let expect = f.scaled(inner_product(&gamma, psi).unwrap() * 2.0 * PI);
        let err = lhs.add(&expect.scaled((-1.0).into())).unwrap().norm_l2()
            / expect.norm_l2();
        out.push(CheckResult::new(
            "localization-identity",
            err,
            tol::LOCALIZATION_IDENTITY,
            "L^1_{ψ,γ} f vs (2π)·⟨γ,ψ⟩·f".into(),
        ));

        let sgrid = stft_symbol_grid(ax);
        let mut a = SampledFunction::zeros(sgrid.clone());
        for i in 0..n {
            let x = sgrid.axes[0].point(i);
            for j in 0..n {
                let xi = sgrid.axes[1].point(j);
                a.values[i * n + j] = Complex64::new((-(x * x + xi * xi) / 4.0).exp(), 0.0);
            }
        }
        let via_compose = localization_compose(&a, psi, &gamma, f).unwrap();
        let via_weyl = localization_via_weyl(&a, psi, &gamma)
            .unwrap()
            .apply(f)
            .unwrap();
        let err = via_compose
            .add(&via_weyl.scaled((-1.0).into()))
            .unwrap()
            .norm_l2()
            / via_weyl.norm_l2();
        out.push(CheckResult::new(
            "localization-two-path",
            err,
            tol::LOCALIZATION_TWO_PATH,
            "V*_γ M_a V_ψ vs (a ∗ Wig(γ,ψ))^w".into(),
        ));
    }

    // ---- criterion 11: Fourier–Wigner relation and cross-ambiguity ----
    {
        let f = Fixture::gaussian(0.2, 1.0, 0.0).sample(&grid).unwrap();
        let h = Fixture::gaussian(-0.4, 1.1, 0.0).sample(&grid).unwrap();
        let wig = cross_wigner(&f, &h).unwrap();
        let mut w2 = wig.to_sampled();
        for a in &mut w2.grid.axes {
            a.tag = SpaceTag::Time;
        }
        let hat = fourier(&w2).unwrap();
        let target = cross_wigner(&f, &reflect(&h)).unwrap();
        let scale = hat.max_modulus();
        let mut err = 0.0_f64;
        for i in 0..n {
            for j in 1..n {
                let expect = PI * target.values[(n - j) * n + i];
                err = err.max((hat.values[i * n + j] - expect).norm());
            }
        }
        out.push(CheckResult::new(
            "fourier-wigner",
            err / scale,
            tol::FOURIER_WIGNER,
            "F(Wig(f,g))(x,ξ) vs π·Wig(f,Ig)(-ξ/2, x/2) at common lattice points".into(),
        ));

        let amb = cross_ambiguity(&f, &gauss).unwrap();
        let v = stft(&f, &gauss).unwrap();
        let vmax = v.max_modulus();
        let mut err = 0.0_f64;
        for ma in 0..n {
            let x = amb.shift_axes[0].point(ma);
            if let Some(mv) = v.shift_axes[0].index_of(x) {
                for k in 0..n {
                    let xi = amb.mod_axes[0].point(k);
                    let expect =
                        v.values[mv * n + k] * Complex64::from_polar(1.0, 0.5 * x * xi);
                    err = err.max((amb.values[ma * n + k] - expect).norm());
                }
            }
        }
        out.push(CheckResult::new(
            "cross-ambiguity",
            err / vmax,
            tol::CROSS_AMBIGUITY,
            "A(f,g) vs e^{ixξ/2}·V_g f on the common lattice".into(),
        ));
    }

    // ---- criterion 12: band-limited counterexample ----
    {
        let (lo, hi, s) = (0.5, 4.5, 3.0);
        let f = Fixture::bump(lo, hi, s).sample(&grid).unwrap();
        let w = cross_wigner(&f, &reflect(&f)).unwrap().to_sampled();
        let mut spatial = w.clone();
        for a in &mut spatial.grid.axes {
            a.tag = SpaceTag::Time;
        }
        let hat = fourier(&spatial).unwrap();
        let hmax = hat.max_modulus();
        let mut outside = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let xi = hat.grid.axes[1].point(j);
                if xi < -2.0 * hi || xi > -2.0 * lo {
                    outside = outside.max(hat.values[i * n + j].norm());
                }
            }
        }
        out.push(CheckResult::new(
            "bandlimit-support",
            outside / hmax,
            tol::BANDLIMIT_SUPPORT,
            "relative modulus of F(Wig(f,If)) outside ξ ∈ [-2b,-2a]".into(),
        ));

        let conv = fourier_multiplier(&w, |_, xi| {
            if (-2.0 * hi..=-2.0 * lo).contains(&xi) {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        out.push(CheckResult::new(
            "bandlimit-convolution",
            diff_norm(&conv, &w) / w.max_modulus(),
            tol::BANDLIMIT_CONVOLUTION,
            "a ∗ Wig(f,If) vs Wig(f,If) with â the band indicator".into(),
        ));
    }

    // ---- module identities: closed forms and constants ----
    {
        let field = stft(&gauss, &gauss).unwrap();
        let (xa, ka) = (field.shift_axes[0], field.mod_axes[0]);
        let mut err = 0.0_f64;
        for m in 0..n {
            for k in 0..n {
                let (x, xi) = (xa.point(m), ka.point(k));
                let expect = Complex64::from_polar(
                    PI.sqrt() * (-(x * x + xi * xi) / 4.0).exp(),
                    -x * xi / 2.0,
                );
                err = err.max((field.values[m * n + k] - expect).norm());
            }
        }
        out.push(CheckResult::new(
            "stft-gaussian-closed-form",
            err / PI.sqrt(),
            tol::GAUSSIAN_CLOSED_FORM,
            "V_φφ vs √π·e^{-(x²+ξ²)/4}·e^{-ixξ/2}".into(),
        ));

        let wig = cross_wigner(&gauss, &gauss).unwrap();
        let (xa, ka) = (wig.shift_axes[0], wig.mod_axes[0]);
        let mut err = 0.0_f64;
        for m in 0..n {
            for k in 0..n {
                let (x, xi) = (xa.point(m), ka.point(k));
                let expect = 2.0 * PI.sqrt() * (-(x * x + xi * xi)).exp();
                err = err.max((wig.values[m * n + k] - Complex64::new(expect, 0.0)).norm());
            }
        }
        out.push(CheckResult::new(
            "wigner-gaussian-closed-form",
            err / (2.0 * PI.sqrt()),
            tol::GAUSSIAN_CLOSED_FORM,
            "Wig φ vs 2√π·e^{-x²-ξ²}".into(),
        ));

        let shifted = Fixture::gaussian(0.5, 1.2, 0.3).sample(&grid).unwrap();
        let lhs = inner_product(&fourier(&gauss).unwrap(), &fourier(&shifted).unwrap())
            .unwrap();
        let rhs = inner_product(&gauss, &shifted).unwrap() * 2.0 * PI;
        out.push(CheckResult::scalar(
            "parseval",
            lhs,
            rhs,
            tol::GAUSSIAN_QUADRATURE,
            "⟨f̂,ĝ⟩ vs (2π)·⟨f,g⟩".into(),
        ));

        let vf = stft(&herm[1], &gauss).unwrap();
        let vh = stft(&herm[1], &gauss).unwrap();
        let lhs = crate::transforms::field_pairing(&vf, &vh).unwrap();
        let rhs = inner_product(&herm[1], &herm[1]).unwrap()
            * 2.0
            * PI
            * gauss.norm_l2().powi(2);
        out.push(CheckResult::scalar(
            "stft-energy",
            lhs,
            rhs,
            tol::STFT_ENERGY,
            "⟨V_ψf, V_ψf⟩ vs (2π)·‖ψ‖²·⟨f,f⟩".into(),
        ));

        let one = Fixture::constant(1.0).sample(&grid).unwrap();
        let wig1 = cross_wigner(&gauss, &one).unwrap();
        let (xa, ka) = (wig1.shift_axes[0], wig1.mod_axes[0]);
        let scale = 2.0 * (2.0 * PI).sqrt();
        let mut err = 0.0_f64;
        for m in 3 * n / 8..5 * n / 8 {
            for k in 0..n {
                let (x, xi) = (xa.point(m), ka.point(k));
                let expect = Complex64::from_polar(
                    scale * (-2.0 * xi * xi).exp(),
                    2.0 * x * xi,
                );
                err = err.max((wig1.values[m * n + k] - expect).norm());
            }
        }
        out.push(CheckResult::new(
            "wig-psi-one",
            err / scale,
            tol::WIG_PSI_ONE,
            "Wig(ψ,1) vs 2·e^{2ixξ}·ψ̂(2ξ), |x| ≤ L/4".into(),
        ));
    }

    // ---- 4-variable STFT vs direct quadrature at seeded lattice points ----
    {
        let g2 = Grid::square(64, 6.0).unwrap();
        let mk = |w: f64| {
            let mut a = SampledFunction::zeros(g2.clone());
            for i in 0..64 {
                let x = g2.axes[0].point(i);
                for j in 0..64 {
                    let xi = g2.axes[1].point(j);
                    a.values[i * 64 + j] =
                        Complex64::new((-(x * x + xi * xi) / (2.0 * w * w)).exp(), 0.0);
                }
            }
            a
        };
        let a = mk(0.6);
        let win = mk(0.6);
        let field = symbol_stft4(&a, &win, 4).unwrap();
        let s = field.shift_axes[0].n;
        let scale = field.max_modulus();
        let mut err = 0.0_f64;
        let dx = g2.axes[0].spacing();
        for _ in 0..20 {
            let (i, j, r0, r1) =
                (rng.below(s), rng.below(s), rng.below(s), rng.below(s));
            let (sx, sxi) = (field.shift_axes[0].point(i), field.shift_axes[1].point(j));
            let (eta, y) = (field.mod_axes[0].point(r0), field.mod_axes[1].point(r1));
            let mut acc = Complex64::ZERO;
            for u in 0..64 {
                let xu = g2.axes[0].point(u);
                for v in 0..64 {
                    let xv = g2.axes[1].point(v);
                    if let (Some(wi), Some(wj)) =
                        (g2.axes[0].index_of(xu - sx), g2.axes[1].index_of(xv - sxi))
                    {
                        acc += a.values[u * 64 + v]
                            * win.values[wi * 64 + wj].conj()
                            * Complex64::from_polar(1.0, -(xu * eta + xv * y));
                    }
                }
            }
            acc *= dx * dx;
            let got = field.values[((i * s + j) * s + r0) * s + r1];
            err = err.max((got - acc).norm());
        }
        out.push(CheckResult::new(
            "stft4-vs-quadrature",
            err / scale,
            tol::STFT4_VS_QUADRATURE,
            "V_Ψa(x,ξ,η,y) vs direct 2-d quadrature at 20 seeded points".into(),
        ));
    }

    out
}

/// One battery entry of the diagnostics classification (criterion-level
/// expectations for a symbol under one weight).
#[derive(Debug, Clone, Serialize)]
pub struct BatteryEntry {
    pub weight: Weight,
    pub symbol: String,
    pub weyl: Verdict,
    pub convolutor: Verdict,
    pub localization: Option<Verdict>,
    pub expected_weyl: Verdict,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatteryReport {
    pub entries: Vec<BatteryEntry>,
    pub chain_violations: usize,
    pub band_limited_localization: Verdict,
    pub pass: bool,
}

/// Criterion-13 battery: classify the three reference symbols under both
/// default weights, check the implication chain, and run the band-limited
/// localization example under the Schwartz weight.
pub fn run_diagnostics_battery() -> BatteryReport {
    let n = 64;
    let l = 6.0;
    let square = Grid::square(n, l).unwrap();
    let line = Grid::line(n, l).unwrap();
    let heur = HeuristicParams::default();
    let lambda = default_lambda_list();
    let mu = default_mu_grid();
    let stride = 4;

    let window = {
        let mut w = SampledFunction::zeros(square.clone());
        for i in 0..n {
            let x = square.axes[0].point(i);
            for j in 0..n {
                let xi = square.axes[1].point(j);
                w.values[i * n + j] =
                    Complex64::new((-(x * x + xi * xi) / (2.0 * 0.36)).exp(), 0.0);
            }
        }
        w
    };
    let psi = Fixture::gaussian(0.0, 1.0, 0.0).sample(&line).unwrap();

    let wig_gauss = {
        let mut a = SampledFunction::zeros(square.clone());
        let scale = 2.0 * PI.sqrt();
        for i in 0..n {
            let x = square.axes[0].point(i);
            for j in 0..n {
                let xi = square.axes[1].point(j);
                a.values[i * n + j] =
                    Complex64::new(scale * (-(x * x + xi * xi)).exp(), 0.0);
            }
        }
        a
    };
    let chirp_fixture = Fixture::chirp_symbol(-1.0, Fixture::gaussian(0.0, 1.0, 0.0));
    let cases: Vec<(String, SampledFunction, Option<Fixture>, Verdict)> = vec![
        (
            "wigner-gaussian".into(),
            wig_gauss,
            None,
            Verdict::CompactLike,
        ),
        (
            "identity".into(),
            Fixture::constant(1.0).sample(&square).unwrap(),
            Some(Fixture::constant(1.0)),
            Verdict::ContinuousLike,
        ),
        (
            "chirp".into(),
            chirp_fixture.sample(&square).unwrap(),
            Some(chirp_fixture.clone()),
            Verdict::Fail,
        ),
    ];

    let mut entries = Vec::new();
    let mut chain_violations = 0usize;
    for weight in [Weight::log1p(), Weight::power(0.5).unwrap()] {
        for (name, symbol, fixture, expected) in &cases {
            let weyl =
                weyl_compactness_test(symbol, &window, &weight, &lambda, &mu, stride, heur)
                    .map(|r| r.verdict)
                    .unwrap_or(Verdict::Fail);
            let convolutor = diagnostics::convolutor_test_2d(
                symbol, &window, &weight, &lambda, &mu, stride, heur,
            )
            .map(|r| r.verdict)
            .unwrap_or(Verdict::Fail);
            let localization = fixture.as_ref().map(|fx| {
                localization_compactness_test(
                    fx, &psi, &psi, &window, &weight, &lambda, &mu, stride, heur,
                )
                .map(|r| r.symbol_report.verdict)
                .unwrap_or(Verdict::Fail)
            });

            // (i) Weyl compact ⇒ convolutor does not fail
            if weyl == Verdict::CompactLike && convolutor == Verdict::Fail {
                chain_violations += 1;
            }
            // (ii) convolutor passes ⇒ localization compact (Gaussian windows)
            if convolutor != Verdict::Fail {
                if let Some(loc) = localization {
                    if loc != Verdict::CompactLike {
                        chain_violations += 1;
                    }
                }
            }

            entries.push(BatteryEntry {
                weight,
                symbol: name.clone(),
                weyl,
                convolutor,
                localization,
                expected_weyl: *expected,
                pass: weyl == *expected,
            });
        }
    }

    // band-limited localization operator: compact under the Schwartz weight
    let band_limited_localization = {
        let grid = Grid::line(128, 12.0).unwrap();
        let f = Fixture::bump(0.5, 4.5, 3.0).sample(&grid).unwrap();
        let w = cross_wigner(&f, &reflect(&f)).unwrap().to_sampled();
        let mut wwin = SampledFunction::zeros(w.grid.clone());
        for i in 0..128 {
            let x = w.grid.axes[0].point(i);
            for j in 0..128 {
                let xi = w.grid.axes[1].point(j);
                wwin.values[i * 128 + j] =
                    Complex64::new((-(x * x + xi * xi) / (2.0 * 0.36)).exp(), 0.0);
            }
        }
        localization_symbol_report(&w, &wwin, &Weight::log1p(), &lambda, &mu, stride, heur)
            .map(|r| r.verdict)
            .unwrap_or(Verdict::Fail)
    };

    let pass = entries.iter().all(|e| e.pass)
        && chain_violations == 0
        && band_limited_localization == Verdict::CompactLike
        && entries
            .iter()
            .filter(|e| e.symbol == "chirp")
            .all(|e| e.convolutor != Verdict::Fail && e.localization == Some(Verdict::CompactLike));

    BatteryReport {
        entries,
        chain_violations,
        band_limited_localization,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_suite_all_pass() {
        let results = run_identity_suite(&SuiteConfig::default());
        assert!(results.len() >= 20);
        for r in &results {
            assert!(
                r.pass,
                "{}: error {:e} exceeds tolerance {:e} ({})",
                r.name, r.error, r.tolerance, r.detail
            );
        }
    }

    #[test]
    fn identity_suite_is_deterministic() {
        let a = run_identity_suite(&SuiteConfig::default());
        let b = run_identity_suite(&SuiteConfig::default());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.error.to_bits(), y.error.to_bits());
        }
    }
}
