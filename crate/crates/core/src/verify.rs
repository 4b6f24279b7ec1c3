//! Independent checks of the algebraic spectrum: Schrödinger residuals by
//! finite differences, and the Hill discriminant over one period `2K` of the
//! potential.

use rayon::prelude::*;

use crate::algebraize::{lame_potential, LameParameters};
use crate::elliptic::EllipticModulus;
use crate::error::Result;
use crate::ode::{integrate, OdeTolerance};
use crate::spectra::{BandEdgeState, SpectrumResult};

pub const DEFAULT_GRID_N: usize = 2001;
pub const RESIDUAL_TOL: f64 = 1e-6;
pub const EDGE_TOL: f64 = 1e-6;
pub const ODE_TOL: f64 = 1e-11;

/// Finite-difference step used by [`schrodinger_residual`]: the spacing of
/// the `grid_n`-point grid on `[0, 2K]`. After one Richardson level the
/// truncation error is `O(h⁶)`, so a step this size keeps the roundoff term
/// `~ε/h²` near 1e-10 instead of dominating.
pub fn residual_step(modulus: &EllipticModulus<f64>, grid_n: usize) -> f64 {
    modulus.half_period() / (grid_n.max(2) - 1) as f64
}

fn second_derivative<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    let five_point = |h: f64| {
        (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h)
    };
    (16.0 * five_point(h / 2.0) - five_point(h)) / 15.0
}

/// `max |−ψ″ + Vψ − Eψ| / max |ψ|` over `grid_n` equally spaced points of
/// `[0, 2K]`, with an explicit finite-difference step.
pub fn schrodinger_residual_with_step<F: Fn(f64) -> f64>(
    psi: F,
    energy: f64,
    params: &LameParameters,
    modulus: &EllipticModulus<f64>,
    grid_n: usize,
    h: f64,
) -> f64 {
    assert!(grid_n >= 2, "grid needs at least two points");
    let span = modulus.half_period();
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 0..grid_n {
        let x = span * i as f64 / (grid_n - 1) as f64;
        let value = psi(x);
        let v = lame_potential(x, params, modulus);
        let r = -second_derivative(&psi, x, h) + (v - energy) * value;
        worst = worst.max(r.abs());
        scale = scale.max(value.abs());
    }
    if scale == 0.0 {
        return f64::INFINITY;
    }
    worst / scale
}

pub fn schrodinger_residual<F: Fn(f64) -> f64>(
    psi: F,
    energy: f64,
    params: &LameParameters,
    modulus: &EllipticModulus<f64>,
    grid_n: usize,
) -> f64 {
    schrodinger_residual_with_step(psi, energy, params, modulus, grid_n, residual_step(modulus, grid_n))
}

/// Largest residual over all real functions attached to a state.
pub fn state_residual(
    state: &BandEdgeState,
    params: &LameParameters,
    modulus: &EllipticModulus<f64>,
    grid_n: usize,
) -> f64 {
    state
        .samplers
        .iter()
        .map(|s| schrodinger_residual(|x| s.eval(x), state.energy, params, modulus, grid_n))
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscriminantSample {
    pub energy: f64,
    /// Trace of the monodromy matrix over `2K`.
    pub delta: f64,
    /// Determinant of the monodromy matrix; 1 up to integration error.
    pub determinant: f64,
}

/// Monodromy of `u″ = (V − E) u` over `[0, period]`, columns are the
/// solutions started at `(u, u′) = (1, 0)` and `(0, 1)`.
pub fn monodromy<V: Fn(f64) -> f64>(potential: V, energy: f64, period: f64, tol: f64) -> Result<[[f64; 2]; 2]> {
    let rhs = |x: f64, y: &[f64; 4]| {
        let w = potential(x) - energy;
        [y[1], w * y[0], y[3], w * y[2]]
    };
    let (y, _) = integrate(rhs, 0.0, period, [1.0, 0.0, 0.0, 1.0], OdeTolerance { abs: tol, rel: tol })?;
    Ok([[y[0], y[2]], [y[1], y[3]]])
}

pub fn discriminant_for<V: Fn(f64) -> f64>(potential: V, energy: f64, period: f64, tol: f64) -> Result<DiscriminantSample> {
    let m = monodromy(potential, energy, period, tol)?;
    Ok(DiscriminantSample {
        energy,
        delta: m[0][0] + m[1][1],
        determinant: m[0][0] * m[1][1] - m[0][1] * m[1][0],
    })
}

pub fn hill_discriminant(
    energy: f64,
    params: &LameParameters,
    modulus: &EllipticModulus<f64>,
    tol: f64,
) -> Result<DiscriminantSample> {
    discriminant_for(|x| lame_potential(x, params, modulus), energy, modulus.half_period(), tol)
}

/// `Δ(E)` on `samples` equally spaced energies of `[e_min, e_max]`, in parallel.
pub fn band_scan(
    params: &LameParameters,
    modulus: &EllipticModulus<f64>,
    e_min: f64,
    e_max: f64,
    samples: usize,
    tol: f64,
) -> Result<Vec<DiscriminantSample>> {
    let step = if samples > 1 { (e_max - e_min) / (samples - 1) as f64 } else { 0.0 };
    (0..samples)
        .into_par_iter()
        .map(|i| hill_discriminant(e_min + step * i as f64, params, modulus, tol))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    BandEdgePeriodic,
    BandEdgeAntiperiodic,
    InBandDegenerate,
    Inconsistent,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::BandEdgePeriodic => "band_edge_periodic",
            Self::BandEdgeAntiperiodic => "band_edge_antiperiodic",
            Self::InBandDegenerate => "in_band_degenerate",
            Self::Inconsistent => "inconsistent",
        }
    }

    pub fn is_band_edge(self) -> bool {
        matches!(self, Self::BandEdgePeriodic | Self::BandEdgeAntiperiodic)
    }
}

pub fn classify(delta: f64, degeneracy: usize, tol: f64) -> Classification {
    if (delta.abs() - 2.0).abs() <= tol {
        if delta > 0.0 {
            Classification::BandEdgePeriodic
        } else {
            Classification::BandEdgeAntiperiodic
        }
    } else if delta.abs() < 2.0 - tol && degeneracy == 2 {
        Classification::InBandDegenerate
    } else {
        Classification::Inconsistent
    }
}

#[derive(Clone, Debug)]
pub struct StateClassification {
    pub label: usize,
    pub sample: DiscriminantSample,
    pub class: Classification,
}

/// Classifies every state by the Hill discriminant at its energy.
pub fn classify_spectrum(spectrum: &SpectrumResult, tol: f64) -> Result<Vec<StateClassification>> {
    spectrum
        .states
        .par_iter()
        .map(|s| {
            let sample = hill_discriminant(s.energy, &spectrum.params, &spectrum.modulus, ODE_TOL)?;
            Ok(StateClassification {
                label: s.label,
                sample,
                class: classify(sample.delta, s.degeneracy, tol),
            })
        })
        .collect()
}
