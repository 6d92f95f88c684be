//! Test-function library: Gaussians, Hermite functions, bumps, constants,
//! chirp symbols and tensor products, sampled pointwise onto grids.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::grids::{Grid, GridError, SampledFunction};
use crate::tolerances;

/// Test-function recipe; `sample` evaluates it pointwise on a grid.
///
/// Decaying fixtures (Gaussian, Hermite, bump) are checked for boundary
/// decay at sampling time; non-decaying ones (constant, chirp symbol) come
/// back with the `truncated` flag set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum Fixture {
    /// `e^{-(t-center)²/(2 width²)} · e^{i modulation·t}`
    Gaussian { center: f64, width: f64, modulation: f64 },
    /// L²-normalized Hermite function of the given order.
    Hermite { order: usize },
    /// Smooth bump supported on `[a, b]`, `exp(s·(b-a)²/4) · exp(-s/((t-a)(b-t)))`
    /// normalized to peak value 1 at the midpoint.
    Bump { a: f64, b: f64, smoothness: f64 },
    Constant { value: f64 },
    /// 2-d chirp symbol `a(x, ξ) = e^{sign·2i x ξ} f(ξ)` with a 1-d factor.
    ChirpSymbol { sign: f64, factor: Box<Fixture> },
    /// `f1(x) · f2(y)` of two 1-d fixtures.
    Tensor { f1: Box<Fixture>, f2: Box<Fixture> },
}

impl Fixture {
    pub fn gaussian(center: f64, width: f64, modulation: f64) -> Self {
        Fixture::Gaussian { center, width, modulation }
    }

    pub fn hermite(order: usize) -> Self {
        Fixture::Hermite { order }
    }

    pub fn bump(a: f64, b: f64, smoothness: f64) -> Self {
        Fixture::Bump { a, b, smoothness }
    }

    pub fn constant(value: f64) -> Self {
        Fixture::Constant { value }
    }

    pub fn chirp_symbol(sign: f64, factor: Fixture) -> Self {
        Fixture::ChirpSymbol { sign, factor: Box::new(factor) }
    }

    pub fn arity(&self) -> usize {
        match self {
            Fixture::ChirpSymbol { .. } | Fixture::Tensor { .. } => 2,
            _ => 1,
        }
    }

    /// Pointwise evaluation at an arbitrary (off-grid) point.
    pub fn eval_at(&self, point: &[f64]) -> Complex64 {
        match point.len() {
            1 => self.eval1(point[0]),
            2 => self.eval2(point[0], point[1]),
            _ => Complex64::ZERO,
        }
    }

    fn decays(&self) -> bool {
        match self {
            Fixture::Gaussian { .. } | Fixture::Hermite { .. } | Fixture::Bump { .. } => true,
            Fixture::Constant { .. } | Fixture::ChirpSymbol { .. } => false,
            Fixture::Tensor { f1, f2 } => f1.decays() && f2.decays(),
        }
    }

    fn eval1(&self, t: f64) -> Complex64 {
        match self {
            Fixture::Gaussian { center, width, modulation } => {
                let u = (t - center) / width;
                Complex64::from_polar((-0.5 * u * u).exp(), modulation * t)
            }
            Fixture::Hermite { order } => Complex64::new(hermite_fn(*order, t), 0.0),
            Fixture::Bump { a, b, smoothness } => {
                if t <= *a || t >= *b {
                    Complex64::ZERO
                } else {
                    let peak = smoothness * (b - a) * (b - a) / 4.0;
                    Complex64::new((peak - smoothness / ((t - a) * (b - t))).exp(), 0.0)
                }
            }
            Fixture::Constant { value } => Complex64::new(*value, 0.0),
            _ => unreachable!("2-d fixture evaluated as 1-d"),
        }
    }

    fn eval2(&self, x: f64, y: f64) -> Complex64 {
        match self {
            Fixture::ChirpSymbol { sign, factor } => {
                factor.eval1(y) * Complex64::from_polar(1.0, sign * 2.0 * x * y)
            }
            Fixture::Tensor { f1, f2 } => f1.eval1(x) * f2.eval1(y),
            Fixture::Constant { value } => Complex64::new(*value, 0.0),
            _ => unreachable!("1-d fixture evaluated as 2-d"),
        }
    }

    pub fn sample(&self, grid: &Grid) -> Result<SampledFunction, GridError> {
        let arity = self.arity();
        let ok = match self {
            // constants sample onto any dimension
            Fixture::Constant { .. } => true,
            _ => arity == grid.dims(),
        };
        if !ok {
            return Err(GridError::DimensionMismatch { fixture: arity, grid: grid.dims() });
        }
        let mut out = SampledFunction::zeros(grid.clone());
        match grid.dims() {
            1 => {
                for (i, v) in out.values.iter_mut().enumerate() {
                    *v = self.eval1(grid.axes[0].point(i));
                }
            }
            2 => {
                let (nx, ny) = (grid.axes[0].n, grid.axes[1].n);
                for ix in 0..nx {
                    let x = grid.axes[0].point(ix);
                    for iy in 0..ny {
                        out.values[ix * ny + iy] = self.eval2(x, grid.axes[1].point(iy));
                    }
                }
            }
            d => return Err(GridError::DimensionMismatch { fixture: arity, grid: d }),
        }
        out.truncated =
            !self.decays() || out.boundary_modulus() > tolerances::BOUNDARY_DECAY;
        Ok(out)
    }
}

/// L²-normalized Hermite function `h_k(t) = (2^k k! √π)^{-1/2} H_k(t) e^{-t²/2}`
/// via the stable normalized recurrence.
pub fn hermite_fn(order: usize, t: f64) -> f64 {
    let mut h_prev = 0.0;
    let mut h = std::f64::consts::PI.powf(-0.25) * (-0.5 * t * t).exp();
    for k in 0..order {
        let next = (2.0 / (k as f64 + 1.0)).sqrt() * t * h
            - (k as f64 / (k as f64 + 1.0)).sqrt() * h_prev;
        h_prev = h;
        h = next;
    }
    h
}
