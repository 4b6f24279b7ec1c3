//! Band-edge energies and eigenfunctions of the associated Lamé operator.
//!
//! Every eigenpair `(λ, p)` of a family's gauged Hamiltonian gives a
//! Schrödinger eigenfunction `ψ = μ · p(ξ)` with energy `λ`. Because `σ = n`
//! for these families, the cn-power of `μ` cancels the poles of `p(sn/cn)`:
//!
//! ```text
//! ψ(x) = dn^τ · Σⱼ cⱼ snʲ cn^{σ−j} · exp(−β/4 · am x) · exp(phase · θ(x))
//! ```
//!
//! which is finite on the whole real line.
//!
//! Integer `(m, l)` merges families A and B into `2m + 1` non-degenerate
//! states. Half-odd `m` uses family C; family D is its complex conjugate, so
//! each level carries the two real functions `Re ψ` and `Im ψ`, unless they
//! turn out to be linearly dependent (then the level is simple).

use num_complex::Complex64;

use crate::algebraize::{admissible_families, solve_family, AlgebraizationParams, Family, LameCase, LameParameters};
use crate::eigen::{eigen_decomposition, eigenvalues, frobenius_norm, EigenPair};
use crate::elliptic::{jacobi_amplitude, EllipticModulus};
use crate::error::{Error, Result};
use crate::gauge::{gauge_spec, unwrapped_angle, GaugeFactorSpec};
use crate::sl2core::build_gauged_hamiltonian;

/// Allowed `|Im λ| / max(1, |λ|)` before an eigenvalue is declared non-real.
pub const IMAG_TOL: f64 = 1e-9;
/// Required `‖H v − λ v‖ / ‖H‖` for every eigenpair.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-10;
/// Relative agreement required between conjugate families C and D.
pub const CONJUGATE_TOL: f64 = 1e-10;
/// Energies closer than this (absolute) are flagged as coincident.
pub const COINCIDENCE_TOL: f64 = 1e-10;
/// Minimum max-normalized Wronskian for a degenerate pair.
pub const WRONSKIAN_TOL: f64 = 1e-8;

/// Which real function a sampler extracts from the complex `ψ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Real,
    Imaginary,
}

/// Pole-free evaluator of one band-edge wavefunction.
#[derive(Clone, Debug)]
pub struct WaveSampler {
    spec: GaugeFactorSpec,
    coeffs: Vec<Complex64>,
    cn_power: i32,
    part: Part,
}

impl WaveSampler {
    pub fn eval_complex(&self, x: f64) -> Complex64 {
        let modulus = &self.spec.modulus;
        let (sn, cn, dn) = modulus.sn_cn_dn(x);
        let mut poly = Complex64::new(0.0, 0.0);
        let mut sn_pow = 1.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            poly += c * (sn_pow * cn.powi(self.cn_power - j as i32));
            sn_pow *= sn;
        }
        let mut factor = (self.spec.tau * dn.ln()).exp();
        if self.spec.arctan_coeff.norm() != 0.0 {
            factor *= (self.spec.arctan_coeff * jacobi_amplitude(x, modulus)).exp();
        }
        if self.spec.phase_coeff.norm() != 0.0 {
            factor *= (self.spec.phase_coeff * unwrapped_angle(x, modulus)).exp();
        }
        poly * factor
    }

    pub fn eval(&self, x: f64) -> f64 {
        let z = self.eval_complex(x);
        match self.part {
            Part::Real => z.re,
            Part::Imaginary => z.im,
        }
    }

    pub fn part(&self) -> Part {
        self.part
    }

    pub fn with_part(&self, part: Part) -> Self {
        Self { part, ..self.clone() }
    }
}

/// Builds `ψ = μ · p` in distributed form; the cn-power of `μ` must be an
/// integer at least `deg p` so that no negative cn power survives.
pub fn wavefunction_sampler(spec: &GaugeFactorSpec, poly_coeffs: &[Complex64]) -> Result<WaveSampler> {
    let degree = poly_coeffs.len().saturating_sub(1) as i32;
    let cn_power = spec.integer_sigma().ok_or_else(|| Error::Exponent {
        exponent: format!("{}", spec.sigma),
        reason: "not an integer".into(),
    })?;
    if cn_power < degree {
        return Err(Error::Exponent {
            exponent: cn_power.to_string(),
            reason: format!("smaller than the polynomial degree {degree}, leaving a negative cn power"),
        });
    }
    Ok(WaveSampler {
        spec: *spec,
        coeffs: poly_coeffs.to_vec(),
        cn_power,
        part: Part::Real,
    })
}

#[derive(Clone, Debug)]
pub struct BandEdgeState {
    pub label: usize,
    pub energy: f64,
    /// Imaginary part of the raw eigenvalue, before truncation to real.
    pub raw_imag: f64,
    pub degeneracy: usize,
    pub family: Family,
    /// Eigenvector in the monomial basis; largest-magnitude entry equals 1.
    pub poly_coeffs: Vec<Complex64>,
    /// Only even powers of ξ appear.
    pub even: bool,
    /// `‖H v − λ v‖ / ‖H‖`.
    pub eigen_residual: f64,
    pub samplers: Vec<WaveSampler>,
    /// Another state (from any family) lies within [`COINCIDENCE_TOL`].
    pub coincident: bool,
}

#[derive(Clone, Debug)]
pub struct SpectrumResult {
    pub params: LameParameters,
    pub modulus: EllipticModulus<f64>,
    pub states: Vec<BandEdgeState>,
    /// Number of eigenfunctions, counting degeneracy.
    pub total_count: usize,
    pub families: Vec<Family>,
}

impl SpectrumResult {
    pub fn energies(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.energy).collect()
    }
}

/// Rescales so that the largest-magnitude coefficient becomes exactly 1.
pub fn normalize_coeffs(v: &[Complex64]) -> Vec<Complex64> {
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(Complex64::new(1.0, 0.0));
    v.iter().map(|z| z / pivot).collect()
}

fn is_even(coeffs: &[Complex64]) -> bool {
    coeffs.iter().skip(1).step_by(2).all(|z| z.norm() < 1e-12)
}

struct FamilyData {
    ap: AlgebraizationParams,
    spec: GaugeFactorSpec,
    pairs: Vec<EigenPair>,
    norm: f64,
}

fn solve_one(params: &LameParameters, family: Family, modulus: &EllipticModulus<f64>) -> Result<FamilyData> {
    let ap = solve_family(params, family, modulus)?;
    let h = build_gauged_hamiltonian(&ap)?;
    let norm = frobenius_norm(&h.matrix);
    let pairs = eigen_decomposition(&h.matrix)?;
    for p in &pairs {
        let e = p.value;
        if e.im.abs() > IMAG_TOL * e.norm().max(1.0) {
            return Err(Error::NonRealEigenvalue { family, re: e.re, im: e.im });
        }
        if p.residual(&h.matrix) > EIGEN_RESIDUAL_TOL * norm.max(1.0) {
            return Err(Error::EigenFailure { size: h.n + 1 });
        }
    }
    let spec = gauge_spec(&ap)?;
    Ok(FamilyData { ap, spec, pairs, norm })
}

fn simple_state(data: &FamilyData, pair: &EigenPair) -> Result<BandEdgeState> {
    let coeffs = normalize_coeffs(&pair.vector);
    let sampler = wavefunction_sampler(&data.spec, &coeffs)?;
    Ok(BandEdgeState {
        label: 0,
        energy: pair.value.re,
        raw_imag: pair.value.im,
        degeneracy: 1,
        family: data.ap.family,
        even: is_even(&coeffs),
        eigen_residual: 0.0,
        poly_coeffs: coeffs,
        samplers: vec![sampler],
        coincident: false,
    })
}

/// Max-normalized Wronskian `f g′ − f′ g` at `x`, derivatives by a
/// Richardson-extrapolated central difference.
pub fn normalized_wronskian(f: &WaveSampler, g: &WaveSampler, x: f64, scale_f: f64, scale_g: f64) -> f64 {
    let deriv = |s: &WaveSampler, h: f64| (s.eval(x + h) - s.eval(x - h)) / (2.0 * h);
    let rich = |s: &WaveSampler| {
        let h = 1e-3;
        (4.0 * deriv(s, h / 2.0) - deriv(s, h)) / 3.0
    };
    (f.eval(x) * rich(g) - rich(f) * g.eval(x)) / (scale_f * scale_g)
}

fn max_abs_on_period(s: &WaveSampler, modulus: &EllipticModulus<f64>) -> f64 {
    let span = modulus.period();
    (0..=400)
        .map(|i| s.eval(span * i as f64 / 400.0).abs())
        .fold(0.0, f64::max)
}

/// Splits a complex family-C eigenfunction into its real and imaginary parts
/// and keeps both when they are linearly independent.
fn conjugate_pair_state(data: &FamilyData, pair: &EigenPair) -> Result<BandEdgeState> {
    let mut state = simple_state(data, pair)?;
    let modulus = &data.ap.modulus;
    let re = state.samplers[0].with_part(Part::Real);
    let im = state.samplers[0].with_part(Part::Imaginary);
    let (re_max, im_max) = (max_abs_on_period(&re, modulus), max_abs_on_period(&im, modulus));
    let independent = re_max > 1e-9 * im_max
        && im_max > 1e-9 * re_max
        && normalized_wronskian(&re, &im, modulus.quarter_period() / 2.0, re_max, im_max).abs() > WRONSKIAN_TOL;
    if independent {
        state.degeneracy = 2;
        state.samplers = vec![re, im];
    } else if im_max > re_max {
        state.samplers = vec![im];
    } else {
        state.samplers = vec![re];
    }
    Ok(state)
}

/// All algebraic band-edge states of `(m, l)` at modulus `k²`, sorted by
/// energy (ties: family, then even polynomials first).
pub fn band_edge_spectrum(params: &LameParameters, modulus: &EllipticModulus<f64>) -> Result<SpectrumResult> {
    let families = admissible_families(params);
    let mut states = Vec::new();
    match params.case() {
        LameCase::Integer => {
            for &family in &families {
                let data = solve_one(params, family, modulus)?;
                for pair in &data.pairs {
                    let mut s = simple_state(&data, pair)?;
                    s.eigen_residual = pair_residual(&data, pair)?;
                    states.push(s);
                }
            }
        }
        LameCase::HalfOdd => {
            let data = solve_one(params, Family::C, modulus)?;
            check_conjugate_family(params, modulus, &data)?;
            for pair in &data.pairs {
                let mut s = conjugate_pair_state(&data, pair)?;
                s.eigen_residual = pair_residual(&data, pair)?;
                states.push(s);
            }
        }
    }

    states.sort_by(|a, b| {
        a.energy
            .total_cmp(&b.energy)
            .then(a.family.cmp(&b.family))
            .then(b.even.cmp(&a.even))
    });
    for i in 0..states.len() {
        let close = |j: usize| (states[i].energy - states[j].energy).abs() < COINCIDENCE_TOL;
        let flagged = (i > 0 && close(i - 1)) || (i + 1 < states.len() && close(i + 1));
        states[i].coincident = flagged;
        states[i].label = i;
    }
    let total_count = states.iter().map(|s| s.degeneracy).sum();
    Ok(SpectrumResult {
        params: *params,
        modulus: *modulus,
        states,
        total_count,
        families,
    })
}

fn pair_residual(data: &FamilyData, pair: &EigenPair) -> Result<f64> {
    let h = build_gauged_hamiltonian(&data.ap)?;
    Ok(pair.residual(&h.matrix) / data.norm.max(f64::MIN_POSITIVE))
}

/// Family D is the conjugate of family C; its spectrum must coincide.
fn check_conjugate_family(params: &LameParameters, modulus: &EllipticModulus<f64>, c: &FamilyData) -> Result<()> {
    let d = build_gauged_hamiltonian(&solve_family(params, Family::D, modulus)?)?;
    let mut from_d: Vec<f64> = eigenvalues(&d.matrix)?.iter().map(|z| z.re).collect();
    let mut from_c: Vec<f64> = c.pairs.iter().map(|p| p.value.re).collect();
    from_d.sort_by(f64::total_cmp);
    from_c.sort_by(f64::total_cmp);
    for (a, b) in from_c.iter().zip(&from_d) {
        if (a - b).abs() > CONJUGATE_TOL * a.abs().max(1.0) {
            return Err(Error::InconsistentParams(format!(
                "families C and D disagree: {a} vs {b}"
            )));
        }
    }
    Ok(())
}
