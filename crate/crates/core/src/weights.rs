//! Braun–Meise–Taylor weight functions.
//!
//! A weight `ω: [0,∞) → [0,∞)` is increasing, continuous, `ω(0) = 0`, and
//! satisfies
//!
//! * (α)  `ω(2t) ≤ L·ω(t) + L` for some `L ≥ 1`,
//! * (β)  `∫₁^∞ ω(t)/(1+t²) dt < ∞`,
//! * (γ)  `ω(t) ≥ a + b·log(1+t)` for some `a ∈ ℝ`, `b > 0`,
//! * (δ)  `φ_ω(s) = ω(e^s)` is convex.
//!
//! Subadditive weights additionally satisfy (α') `ω(s+t) ≤ ω(s) + ω(t)`.
//! Weights extend radially to vectors: `ω(v) = ω(|v|)`.
//!
//! Three parametric families are provided as a closed enum so that the
//! condition checks and the Young conjugate `φ*_ω(t) = sup_{s≥0}(st − φ_ω(s))`
//! stay well-defined and testable.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, gamma_ur};
use thiserror::Error;

use crate::tolerances;

#[derive(Debug, Error, PartialEq)]
pub enum WeightError {
    #[error("invalid weight parameter: {0}")]
    InvalidParameter(String),
    /// The inner supremum of the Young conjugate was attained at the end of
    /// the s-grid, so the table value at this t would be a truncation
    /// artifact rather than the conjugate.
    #[error("Young conjugate supremum attained at s_max for t = {0}")]
    BoundaryAttained(f64),
}

/// The three weight families.
///
/// `Log1p` is `ω(t) = log(1+t)` (the Schwartz case), `Power` is `ω(t) = t^a`
/// with `0 < a < 1` (subadditive, genuinely ultradifferentiable), `LogPower`
/// is `ω(t) = log(1+t)^a` with `a ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    Log1p,
    Power,
    LogPower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    pub kind: WeightKind,
    /// Exponent; ignored for `Log1p`.
    pub a: f64,
    /// Positive scale multiplying the kernel.
    pub c: f64,
}

impl Weight {
    pub fn log1p() -> Self {
        Weight { kind: WeightKind::Log1p, a: 1.0, c: 1.0 }
    }

    pub fn power(a: f64) -> Result<Self, WeightError> {
        if !(0.0 < a && a < 1.0) {
            return Err(WeightError::InvalidParameter(format!(
                "power exponent must lie in (0,1), got {a}"
            )));
        }
        Ok(Weight { kind: WeightKind::Power, a, c: 1.0 })
    }

    pub fn logpower(a: f64) -> Result<Self, WeightError> {
        if a < 1.0 {
            return Err(WeightError::InvalidParameter(format!(
                "logpower exponent must be >= 1, got {a}"
            )));
        }
        Ok(Weight { kind: WeightKind::LogPower, a, c: 1.0 })
    }

    pub fn scaled(mut self, c: f64) -> Result<Self, WeightError> {
        if !(c > 0.0) {
            return Err(WeightError::InvalidParameter(format!(
                "scale must be positive, got {c}"
            )));
        }
        self.c = c;
        Ok(self)
    }

    /// `ω(t)` for scalar `t ≥ 0` (negative inputs are clamped to 0 so the
    /// radial extension is total on finite inputs).
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.max(0.0);
        let kernel = match self.kind {
            WeightKind::Log1p => t.ln_1p(),
            WeightKind::Power => t.powf(self.a),
            WeightKind::LogPower => t.ln_1p().powf(self.a),
        };
        self.c * kernel
    }

    /// Radial extension: `ω(v) = ω(|v|)`.
    pub fn eval_vec(&self, v: &[f64]) -> f64 {
        self.eval(v.iter().map(|x| x * x).sum::<f64>().sqrt())
    }

    /// `φ_ω(s) = ω(e^s)`; the domain is all of ℝ.
    pub fn phi(&self, s: f64) -> f64 {
        self.eval(s.exp())
    }
}

/// Witnessed outcome of the condition checks (α), (α'), (β), (γ), (δ).
///
/// Flags are reproducible from the stored witnesses and the sampling
/// parameters; β is reported as a number (finite part plus an analytic
/// tail bound) rather than a flag, since all built-in families satisfy it.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub alpha_ok: bool,
    /// Witness constant for (α): `ω(2t) ≤ L·ω(t) + L` on all samples.
    pub alpha_l: f64,
    pub alpha_prime_ok: bool,
    /// Adaptive quadrature of `∫₁^{t_max} ω(t)/(1+t²) dt`.
    pub beta_integral: f64,
    /// Analytic bound for `∫_{t_max}^∞ ω(t)/(1+t²) dt` for this family.
    pub beta_tail_bound: f64,
    pub gamma_ok: bool,
    /// Witness `(a, b)` for (γ): `ω(t) ≥ a + b·log(1+t)` on all samples.
    pub gamma_witness: (f64, f64),
    pub delta_ok: bool,
    pub t_max: f64,
    pub n_samples: usize,
}

/// Tabulated Young conjugate `φ*_ω` on `t_grid`, with the parameters of the
/// inner s-grid recorded for reproducibility.
#[derive(Debug, Clone, Serialize)]
pub struct ConjugateTable {
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub s_max: f64,
    pub n_s: usize,
}

pub fn check_conditions(
    w: &Weight,
    t_max: f64,
    n_samples: usize,
) -> Result<ConditionReport, WeightError> {
    if !(t_max > 1.0) {
        return Err(WeightError::InvalidParameter(format!(
            "t_max must exceed 1, got {t_max}"
        )));
    }
    if n_samples < 100 {
        return Err(WeightError::InvalidParameter(format!(
            "need at least 100 samples, got {n_samples}"
        )));
    }

    let samples = sample_points(t_max, n_samples);

    // (α) with witness L: the least L with ω(2t) ≤ L(ω(t)+1) over samples.
    let mut alpha_l: f64 = 1.0;
    for &t in &samples {
        alpha_l = alpha_l.max(w.eval(2.0 * t) / (w.eval(t) + 1.0));
    }
    let alpha_ok = samples
        .iter()
        .all(|&t| w.eval(2.0 * t) <= alpha_l * w.eval(t) + alpha_l + tolerances::SUBADDITIVITY);

    // (α') on a deterministic pair grid; subadditivity violations sit near
    // zero for the log-power family, so the grid mixes scales.
    let k = 100.min(n_samples);
    let step = samples.len() as f64 / k as f64;
    let pair_grid: Vec<f64> = (0..k).map(|i| samples[(i as f64 * step) as usize]).collect();
    let mut alpha_prime_ok = true;
    'outer: for &s in &pair_grid {
        for &t in &pair_grid {
            if w.eval(s + t) > w.eval(s) + w.eval(t) + tolerances::SUBADDITIVITY {
                alpha_prime_ok = false;
                break 'outer;
            }
        }
    }

    // (β): finite part by adaptive quadrature, tail analytically per family.
    let beta_integral = beta_quadrature(|t| w.eval(t), t_max);
    let beta_tail_bound = beta_tail(w, t_max);

    // (γ): fix b per family, take the sampled minimum of ω − b·log(1+t) as
    // the witness intercept.
    let b = match w.kind {
        WeightKind::Log1p | WeightKind::LogPower => w.c,
        WeightKind::Power => w.c * w.a,
    };
    let mut a_witness = f64::INFINITY;
    for &t in &samples {
        a_witness = a_witness.min(w.eval(t) - b * (1.0 + t).ln());
    }
    // Growth beyond t_max: the same margin must hold out to 100·t_max.
    for &t in &[2.0 * t_max, 10.0 * t_max, 100.0 * t_max] {
        a_witness = a_witness.min(w.eval(t) - b * (1.0 + t).ln());
    }
    let gamma_ok = a_witness.is_finite()
        && samples
            .iter()
            .all(|&t| w.eval(t) + tolerances::SUBADDITIVITY >= a_witness + b * (1.0 + t).ln());

    // (δ): convexity of φ_ω on a symmetric s-grid via second differences.
    let s_hi = t_max.ln();
    let s_grid: Vec<f64> = (0..n_samples)
        .map(|i| -5.0 + (s_hi + 5.0) * i as f64 / (n_samples - 1) as f64)
        .collect();
    let phi: Vec<f64> = s_grid.iter().map(|&s| w.phi(s)).collect();
    let scale = phi.iter().cloned().fold(1.0_f64, f64::max);
    let delta_ok = phi
        .windows(3)
        .all(|win| win[2] - 2.0 * win[1] + win[0] >= -1e-9 * scale);

    Ok(ConditionReport {
        alpha_ok,
        alpha_l,
        alpha_prime_ok,
        beta_integral,
        beta_tail_bound,
        gamma_ok,
        gamma_witness: (a_witness, b),
        delta_ok,
        t_max,
        n_samples,
    })
}

/// Finite part of the (β)-integral for an arbitrary kernel; exposed so that
/// fixtures that are not `Weight`s (e.g. `ω(t) = t`, which violates β) can be
/// probed with the same quadrature.
pub fn beta_quadrature(omega: impl Fn(f64) -> f64, t_max: f64) -> f64 {
    adaptive_simpson(&|t| omega(t) / (1.0 + t * t), 1.0, t_max, 1e-12, 40)
}

fn beta_tail(w: &Weight, t_big: f64) -> f64 {
    let u = (1.0 + t_big).ln();
    match w.kind {
        // ∫_T^∞ log(1+t)/t² dt = log(1+T)/T + log((1+T)/T) ≤ (log(1+T)+1)/T
        WeightKind::Log1p => w.c * ((1.0 + t_big).ln() + 1.0) / t_big,
        // ∫_T^∞ t^{a-2} dt = T^{a-1}/(1-a)
        WeightKind::Power => w.c * t_big.powf(w.a - 1.0) / (1.0 - w.a),
        // substitute t = e^u - 1:
        //   ∫_T^∞ log(1+t)^a/(1+t²) dt ≤ (1-e^{-u_T})^{-2} ∫_{u_T}^∞ u^a e^{-u} du
        // and the incomplete-gamma factor is Γ(a+1)·Q(a+1, u_T).
        WeightKind::LogPower => {
            let front = (1.0 - (-u).exp()).powi(-2);
            w.c * front * gamma(w.a + 1.0) * gamma_ur(w.a + 1.0, u)
        }
    }
}

pub fn young_conjugate(
    w: &Weight,
    t_grid: &[f64],
    s_max: f64,
    n_s: usize,
) -> Result<ConjugateTable, WeightError> {
    if t_grid.is_empty() || t_grid.windows(2).any(|p| p[1] <= p[0]) || t_grid[0] < 0.0 {
        return Err(WeightError::InvalidParameter(
            "t_grid must be nonnegative and strictly increasing".into(),
        ));
    }
    if n_s < 16 || !(s_max > 0.0) {
        return Err(WeightError::InvalidParameter(
            "need s_max > 0 and at least 16 s-samples".into(),
        ));
    }

    let s_grid = log_spaced_with_zero(s_max, n_s);
    let mut values = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let g = |s: f64| s * t - w.phi(s);
        let (idx, _) = s_grid
            .iter()
            .map(|&s| g(s))
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty s-grid");
        if idx + 1 == s_grid.len() {
            return Err(WeightError::BoundaryAttained(t));
        }
        // Refine within the bracketing cells around the discrete argmax; the
        // objective is concave in s, so golden-section applies.
        let lo = if idx == 0 { s_grid[0] } else { s_grid[idx - 1] };
        let hi = s_grid[idx + 1];
        values.push(golden_section_max(&g, lo, hi, 1e-10));
    }
    Ok(ConjugateTable { t_grid: t_grid.to_vec(), values, s_max, n_s })
}

fn sample_points(t_max: f64, n: usize) -> Vec<f64> {
    let half = n / 2;
    let mut pts: Vec<f64> = (0..half)
        .map(|i| t_max * i as f64 / (half - 1) as f64)
        .collect();
    // log-spaced refinement near zero, where the conditions are tightest
    let lo: f64 = 1e-3;
    let ratio = (t_max / lo).ln();
    pts.extend((0..n - half).map(|i| lo * (ratio * i as f64 / (n - half - 1) as f64).exp()));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

fn log_spaced_with_zero(s_max: f64, n: usize) -> Vec<f64> {
    let lo: f64 = 1e-4_f64.min(s_max / 2.0);
    let ratio = (s_max / lo).ln();
    let mut grid = vec![0.0];
    grid.extend((0..n - 1).map(|i| lo * (ratio * i as f64 / (n - 2) as f64).exp()));
    grid
}

fn golden_section_max(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, rel_tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut g1, mut g2) = (g(x1), g(x2));
    while hi - lo > rel_tol * hi.abs().max(1.0) {
        if g1 < g2 {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + INV_PHI * (hi - lo);
            g2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - INV_PHI * (hi - lo);
            g1 = g(x1);
        }
    }
    g(0.5 * (lo + hi)).max(g1).max(g2)
}

fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let left = simpson(f, a, m);
        let right = simpson(f, m, b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            recurse(f, a, m, left, tol / 2.0, depth - 1)
                + recurse(f, m, b, right, tol / 2.0, depth - 1)
        }
    }
    recurse(f, lo, hi, simpson(f, lo, hi), tol, depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_matches_analytic_points() {
        let w = Weight::log1p();
        assert_eq!(w.eval(0.0), 0.0);
        // |(3,4)| = 5
        assert!((w.eval_vec(&[3.0, 4.0]) - 6.0_f64.ln()).abs() < 1e-15);
        let p = Weight::power(0.5).unwrap();
        assert!((p.eval(4.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn radial_extension_is_exact() {
        let w = Weight::power(0.5).unwrap();
        for v in [[1.0_f64, 2.0], [0.0, -3.5], [-2.0, 2.0]] {
            let r = (v[0] * v[0] + v[1] * v[1]).sqrt();
            assert_eq!(w.eval_vec(&v), w.eval(r));
        }
    }

    #[test]
    fn log1p_satisfies_all_conditions() {
        let r = check_conditions(&Weight::log1p(), 1e4, 400).unwrap();
        assert!(r.alpha_ok && r.alpha_prime_ok && r.gamma_ok && r.delta_ok);
        assert!(r.beta_integral + r.beta_tail_bound < 10.0);
        assert!(r.beta_tail_bound < 1e-2);
    }

    #[test]
    fn power_half_is_subadditive_on_pair_grid() {
        let r = check_conditions(&Weight::power(0.5).unwrap(), 1e4, 400).unwrap();
        assert!(r.alpha_prime_ok);
        assert!(r.alpha_ok && r.gamma_ok && r.delta_ok);
    }

    #[test]
    fn logpower_two_fails_subadditivity_near_zero() {
        // (log(1+2t))^2 > 2(log(1+t))^2 for small t
        let r = check_conditions(&Weight::logpower(2.0).unwrap(), 1e3, 400).unwrap();
        assert!(!r.alpha_prime_ok);
        assert!(r.alpha_ok && r.gamma_ok && r.delta_ok);
    }

    #[test]
    fn linear_fixture_beta_diverges() {
        // Analytic oracle: ∫₁^T t/(1+t²) dt = ½ log((1+T²)/2), unbounded in T.
        let omega = |t: f64| t;
        let mut prev = beta_quadrature(omega, 1e2);
        for t_max in [1e3, 1e4, 1e5] {
            let next = beta_quadrature(omega, t_max);
            let analytic = 0.5 * ((1.0 + t_max * t_max) / 2.0).ln();
            assert!((next - analytic).abs() < 1e-6 * analytic);
            assert!(next > prev + 1.0, "quadrature must keep growing");
            prev = next;
        }
    }

    #[test]
    fn conjugate_log1p_at_zero() {
        // φ*(0) = −inf_{s≥0} φ_ω(s) = −ω(1) = −log 2; brute-force sup oracle.
        let w = Weight::log1p();
        let table = young_conjugate(&w, &[0.0, 0.25, 0.5], 30.0, 400).unwrap();
        let brute = (0..200_000)
            .map(|i| {
                let s = 30.0 * i as f64 / 199_999.0;
                -w.phi(s)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((table.values[0] - brute).abs() < 1e-9);
        assert!((table.values[0] + 2.0_f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn conjugate_log1p_beyond_one_hits_boundary() {
        let w = Weight::log1p();
        match young_conjugate(&w, &[0.5, 1.5], 30.0, 400) {
            Err(WeightError::BoundaryAttained(t)) => assert_eq!(t, 1.5),
            other => panic!("expected BoundaryAttained, got {other:?}"),
        }
    }

    #[test]
    fn conjugate_exponential_fixture_matches_calculus() {
        // Fixture φ(s) = e^s ⇒ φ*(t) = t·log t − t (calculus oracle); at
        // t = e the value is 0. Realized via a ConjugateTable on the raw
        // functional with the same solver.
        let g = |s: f64, t: f64| s * t - s.exp();
        let s_grid = log_spaced_with_zero(40.0, 2000);
        for &t in &[std::f64::consts::E, 2.0, 5.0] {
            let (idx, _) = s_grid
                .iter()
                .map(|&s| g(s, t))
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            let lo = if idx == 0 { 0.0 } else { s_grid[idx - 1] };
            let hi = s_grid[idx + 1];
            let refined = golden_section_max(&|s| g(s, t), lo, hi, 1e-12);
            let oracle = t * t.ln() - t;
            assert!((refined - oracle).abs() < 1e-9, "t={t}: {refined} vs {oracle}");
        }
    }

    #[test]
    fn conjugate_tables_are_monotone_and_convex() {
        for w in [Weight::power(0.5).unwrap(), Weight::logpower(2.0).unwrap()] {
            let t_grid: Vec<f64> = (0..64).map(|i| 0.1 * i as f64).collect();
            let table = young_conjugate(&w, &t_grid, 200.0, 600).unwrap();
            for pair in table.values.windows(2) {
                assert!(pair[1] >= pair[0] - 1e-12);
            }
            let dt = 0.1;
            for win in table.values.windows(3) {
                let second = (win[2] - 2.0 * win[1] + win[0]) / (dt * dt);
                assert!(second >= tolerances::CONJUGATE_CONVEXITY);
            }
        }
    }

    #[test]
    fn conjugate_at_zero_is_minus_omega_one() {
        for w in [
            Weight::log1p(),
            Weight::power(0.5).unwrap(),
            Weight::logpower(1.5).unwrap(),
        ] {
            let table = young_conjugate(&w, &[0.0], 50.0, 500).unwrap();
            assert!((table.values[0] + w.eval(1.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(Weight::power(1.0).is_err());
        assert!(Weight::power(0.0).is_err());
        assert!(Weight::logpower(0.5).is_err());
        assert!(Weight::log1p().scaled(0.0).is_err());
        assert!(check_conditions(&Weight::log1p(), 0.5, 400).is_err());
        assert!(check_conditions(&Weight::log1p(), 10.0, 10).is_err());
    }
}
