//! Property tests for the contract-level invariants: subadditivity and
//! radiality of weights, conjugate-table shape, phase-shift covariance,
//! norm monotonicity, and the binary format round trip.

use num_complex::Complex64;
use proptest::prelude::*;
use tfweyl_core::fieldio;
use tfweyl_core::fixtures::Fixture;
use tfweyl_core::grids::{phase_space_shift, Axis, Grid, SampledFunction, SpaceTag};
use tfweyl_core::modspaces::{mixed_norm, MixedNormSpec};
use tfweyl_core::transforms::stft;
use tfweyl_core::weights::{young_conjugate, Weight};

/// Fixed-size battery: 10⁴ seeded pairs in [0,100]².
#[test]
fn subadditive_families_on_ten_thousand_pairs() {
    let mut state = 0x6a09e667f3bcc908u64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 * 100.0
    };
    for w in [Weight::log1p(), Weight::power(0.5).unwrap()] {
        for _ in 0..10_000 {
            let (s, t) = (next(), next());
            assert!(
                w.eval(s + t) <= w.eval(s) + w.eval(t) + 1e-12,
                "{:?}: ω({s}+{t}) > ω(s)+ω(t)",
                w.kind
            );
        }
    }
}

proptest! {
    #[test]
    fn power_weights_are_subadditive(
        a in 0.05f64..0.95,
        s in 0.0f64..100.0,
        t in 0.0f64..100.0,
    ) {
        let w = Weight::power(a).unwrap();
        prop_assert!(w.eval(s + t) <= w.eval(s) + w.eval(t) + 1e-12);
    }

    #[test]
    fn weights_are_radial_and_monotone(
        x in -50.0f64..50.0,
        y in -50.0f64..50.0,
        bump in 0.0f64..10.0,
    ) {
        for w in [Weight::log1p(), Weight::power(0.5).unwrap(), Weight::logpower(2.0).unwrap()] {
            let r = (x * x + y * y).sqrt();
            prop_assert_eq!(w.eval_vec(&[x, y]), w.eval(r));
            prop_assert!(w.eval(r + bump) >= w.eval(r));
        }
    }

    #[test]
    fn conjugate_tables_monotone_and_convex(
        kind in 0usize..2,
        a in 0.2f64..0.8,
    ) {
        let w = if kind == 0 { Weight::power(a).unwrap() } else { Weight::logpower(1.0 + a).unwrap() };
        let t_grid: Vec<f64> = (0..32).map(|i| 0.05 * i as f64).collect();
        let table = young_conjugate(&w, &t_grid, 150.0, 400).unwrap();
        for pair in table.values.windows(2) {
            prop_assert!(pair[1] >= pair[0] - 1e-12);
        }
        for win in table.values.windows(3) {
            prop_assert!(win[2] - 2.0 * win[1] + win[0] >= -1e-10);
        }
    }

    #[test]
    fn phase_shift_composition_preserves_moduli(
        s1 in -10i64..10,
        s2 in -10i64..10,
        m1 in -10i64..10,
        m2 in -10i64..10,
    ) {
        let g = Grid::line(64, 8.0).unwrap();
        let f = Fixture::gaussian(0.4, 1.0, 0.3).sample(&g).unwrap();
        let dx = g.axes[0].spacing();
        let dxi = g.axes[0].dual().spacing();
        let once = phase_space_shift(&f, &[s1 as f64 * dx], &[m1 as f64 * dxi]).unwrap();
        let twice = phase_space_shift(&once, &[s2 as f64 * dx], &[m2 as f64 * dxi]).unwrap();
        let joined = phase_space_shift(
            &f,
            &[(s1 + s2) as f64 * dx],
            &[(m1 + m2) as f64 * dxi],
        ).unwrap();
        for (a, b) in twice.values.iter().zip(&joined.values) {
            prop_assert!((a.norm() - b.norm()).abs() <= 1e-13);
        }
    }

    #[test]
    fn sampled_function_format_round_trip(
        log_n in 3u32..6,
        l in 1.0f64..20.0,
        seed in any::<u64>(),
        freq in any::<bool>(),
    ) {
        let n = 1usize << log_n;
        let tag = if freq { SpaceTag::Freq } else { SpaceTag::Time };
        let grid = Grid::from_axes(vec![Axis::new(n, l, tag).unwrap()]);
        let mut state = seed | 1;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let values: Vec<Complex64> = (0..n).map(|_| Complex64::new(next(), next())).collect();
        let f = SampledFunction::new(grid, values);
        let mut buf = Vec::new();
        fieldio::write_sampled(&mut buf, &f).unwrap();
        let back = fieldio::read_sampled(&mut buf.as_slice()).unwrap();
        prop_assert_eq!(back.grid, f.grid);
        prop_assert_eq!(back.values, f.values);
    }

    #[test]
    fn mixed_norms_nest_in_lambda(
        p_idx in 0usize..3,
        q_idx in 0usize..3,
        lo in 0.0f64..1.0,
        gap in 0.01f64..1.0,
    ) {
        let exps = [1.0, 2.0, f64::INFINITY];
        let g = Grid::line(32, 6.0).unwrap();
        let w = Fixture::gaussian(0.0, 1.0, 0.0).sample(&g).unwrap();
        let f = Fixture::gaussian(0.5, 0.8, 0.4).sample(&g).unwrap();
        let field = stft(&f, &w).unwrap();
        let weight = Weight::log1p();
        let n_lo = mixed_norm(&field, &MixedNormSpec::new(exps[p_idx], exps[q_idx], lo, weight).unwrap());
        let n_hi = mixed_norm(&field, &MixedNormSpec::new(exps[p_idx], exps[q_idx], lo + gap, weight).unwrap());
        prop_assert!(n_hi >= n_lo);
    }
}
