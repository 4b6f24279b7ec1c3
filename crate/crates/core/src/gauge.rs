//! Coordinate map `ξ = sn x / cn x`, the gauge function
//! `𝒜 = (B₄′ − 2B₃) / (4√B₄)` and its closed-form exponential
//! `μ = exp(−∫𝒜 dx)`.
//!
//! Splitting `(B₄′ − 2B₃)/B₄` over the two quadratic factors of `B₄`,
//!
//! ```text
//! (αξ + β)/(1 + ξ²) + (γξ + δ)/(1 + k′²ξ²)
//! ```
//!
//! integrates to logarithms and arctangents. With `1 + ξ² = 1/cn²`,
//! `1 + k′²ξ² = dn²/cn²` and `arctan(k′ξ) = θ` this gives
//!
//! ```text
//! μ = cn^σ · dn^τ · exp(−β/4 · am x) · exp(−δ/(4k′) · θ)
//! σ = α/4 + γ/(4k′²),   τ = −γ/(4k′²)
//! ```
//!
//! normalized so that `μ(0) = 1`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::algebraize::AlgebraizationParams;
use crate::elliptic::{jacobi_amplitude, EllipticModulus};
use crate::error::{Error, Result};
use crate::quad::{integrate, QuadTolerance};
use crate::sl2core::{build_b_polynomials, BPolynomials};

/// Pole exclusion radius around odd multiples of `K`, in units of `K`.
pub const POLE_EPS: f64 = 1e-6;

/// Tolerance for treating an exponent as an integer.
const INTEGER_EXPONENT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
pub struct GaugeFactorSpec {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
    /// Net power of `cn x`.
    pub sigma: Complex64,
    /// Net power of `dn x`.
    pub tau: Complex64,
    /// Coefficient of the unwrapped angle `θ`.
    pub phase_coeff: Complex64,
    /// Coefficient of `arctan ξ = am x`.
    pub arctan_coeff: Complex64,
    pub modulus: EllipticModulus<f64>,
}

impl GaugeFactorSpec {
    /// `σ` as an exact integer, when it is one.
    pub fn integer_sigma(&self) -> Option<i32> {
        as_integer(self.sigma)
    }
}

fn as_integer(z: Complex64) -> Option<i32> {
    let r = z.re.round();
    ((z.re - r).abs() < INTEGER_EXPONENT_TOL && z.im.abs() < INTEGER_EXPONENT_TOL).then_some(r as i32)
}

fn distance_to_pole(x: f64, modulus: &EllipticModulus<f64>) -> f64 {
    let k = modulus.quarter_period();
    let two_k = modulus.half_period();
    let shifted = x - k;
    (shifted - (shifted / two_k).round() * two_k).abs()
}

/// `ξ(x) = sn x / cn x`, defined away from odd multiples of `K`.
pub fn xi_of_x(x: f64, modulus: &EllipticModulus<f64>) -> Result<f64> {
    let eps = POLE_EPS * modulus.quarter_period();
    if distance_to_pole(x, modulus) < eps {
        return Err(Error::Pole { x, eps });
    }
    let (sn, cn, _) = modulus.sn_cn_dn(x);
    Ok(sn / cn)
}

/// `x(ξ) = ∫₀^ξ dτ / √B₄(τ)`, evaluated after `τ = tan φ` as
/// `∫₀^{atan ξ} dφ / √(1 − k² sin²φ)`; inverse of [`xi_of_x`] on `(−K, K)`.
pub fn x_of_xi(xi: f64, modulus: &EllipticModulus<f64>) -> Result<f64> {
    if !xi.is_finite() {
        return Err(Error::Domain(format!("ξ must be finite, got {xi}")));
    }
    let k2 = modulus.k2();
    integrate(
        |phi| 1.0 / (1.0 - k2 * phi.sin().powi(2)).sqrt(),
        0.0,
        xi.atan(),
        QuadTolerance { abs: 1e-15, rel: 1e-15 },
    )
}

/// The continuous angle `θ` with `cos θ = cn/dn`, `sin θ = k′ sn/dn`,
/// `θ(0) = 0`; it advances by `2π` per period `4K` and `θ(2K) = π`.
pub fn unwrapped_angle(x: f64, modulus: &EllipticModulus<f64>) -> f64 {
    let period = modulus.period();
    let turns = (x / period).round();
    let reduced = x - turns * period;
    let (sn, cn, _) = modulus.sn_cn_dn(reduced);
    let mut angle = (modulus.kprime() * sn).atan2(cn);
    if reduced < 0.0 && angle > FRAC_PI_2 {
        angle -= 2.0 * PI;
    } else if reduced > 0.0 && angle < -FRAC_PI_2 {
        angle += 2.0 * PI;
    }
    angle + 2.0 * PI * turns
}

fn cubic_numerator(b: &BPolynomials<Complex64>) -> [Complex64; 4] {
    // B₄′ − 2B₃ in ascending powers
    let b4 = &b.b4;
    let db4 = [b4[1], b4[2] * 2.0, b4[3] * 3.0, b4[4] * 4.0];
    [
        db4[0] - b.b3[0] * 2.0,
        db4[1] - b.b3[1] * 2.0,
        db4[2] - b.b3[2] * 2.0,
        db4[3] - b.b3[3] * 2.0,
    ]
}

/// Residues of `(B₄′ − 2B₃)/B₄` over the two quadratic factors and the
/// exponents derived from them.
pub fn gauge_spec(ap: &AlgebraizationParams) -> Result<GaugeFactorSpec> {
    let modulus = ap.modulus;
    let k2 = modulus.k2();
    let kp2 = modulus.kprime2();
    let kp = modulus.kprime();
    if k2 <= 0.0 {
        return Err(Error::Domain("partial fractions need k² > 0".into()));
    }
    let c = cubic_numerator(&build_b_polynomials(ap));
    // (αξ+β)(1+k′²ξ²) + (γξ+δ)(1+ξ²): odd and even parts decouple
    //   ξ: α + γ = c₁,   ξ³: k′²α + γ = c₃
    //   1: β + δ = c₀,   ξ²: k′²β + δ = c₂
    let alpha = (c[1] - c[3]) / k2;
    let gamma = c[1] - alpha;
    let beta = (c[0] - c[2]) / k2;
    let delta = c[0] - beta;
    Ok(GaugeFactorSpec {
        alpha,
        beta,
        gamma,
        delta,
        sigma: alpha / 4.0 + gamma / (4.0 * kp2),
        tau: -gamma / (4.0 * kp2),
        phase_coeff: -delta / (4.0 * kp),
        arctan_coeff: -beta / 4.0,
        modulus,
    })
}

/// `𝒜(x)` straight from the B-polynomials, for `x` inside `(−K, K)`.
pub fn gauge_function(x: f64, b: &BPolynomials<Complex64>, modulus: &EllipticModulus<f64>) -> Result<Complex64> {
    let xi = xi_of_x(x, modulus)?;
    let num = cubic_numerator(b);
    let poly = |c: &[Complex64]| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, v| acc * xi + v);
    let b4 = poly(&b.b4);
    Ok(poly(&num) / (4.0 * b4.sqrt()))
}

/// `μ(x)` in closed form.
///
/// Integer `σ` (every algebraization of the Lamé potential has `σ = n`) is
/// applied as an exact power of `cn`, so the formula holds on the whole line.
/// A non-integer `σ` needs `cn > 0` and is rejected near or beyond the poles.
pub fn gauge_factor(x: f64, spec: &GaugeFactorSpec) -> Result<Complex64> {
    let modulus = &spec.modulus;
    let (_, cn, dn) = modulus.sn_cn_dn(x);
    let cn_part = match spec.integer_sigma() {
        Some(p) => Complex64::new(cn.powi(p), 0.0),
        None => {
            let k = modulus.quarter_period();
            let eps = POLE_EPS * k;
            if x.abs() >= k - eps || cn <= 0.0 {
                return Err(Error::Pole { x, eps });
            }
            (spec.sigma * cn.ln()).exp()
        }
    };
    let dn_part = (spec.tau * dn.ln()).exp();
    let am_part = (spec.arctan_coeff * jacobi_amplitude(x, modulus)).exp();
    let phase = (spec.phase_coeff * unwrapped_angle(x, modulus)).exp();
    Ok(cn_part * dn_part * am_part * phase)
}
