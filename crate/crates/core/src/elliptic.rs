//! Jacobi elliptic functions of real argument and the complete elliptic
//! integral of the first kind.
//!
//! The parameter convention throughout is `k2 = k²` (the "parameter" `m` in
//! DLMF notation). Both routines rely on the arithmetic–geometric mean:
//!
//! ```text
//! K(k)  = π / (2 · AGM(1, k′))
//! sn, cn, dn  by descending Landen transformation of the AGM sequence
//! ```
//!
//! Arguments are reduced modulo the real period `4K` before the Landen
//! recursion so the error does not grow with `|x|`.

use num_traits::{Float, FloatConst};

use crate::error::{Error, Result};

/// Safety cap on AGM steps; quadratic convergence needs fewer than 10 in f64.
const MAX_AGM_STEPS: usize = 64;

/// Validated modulus data: `k²`, `k′² = 1 − k²` and the quarter period `K(k)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipticModulus<T> {
    k2: T,
    kprime2: T,
    quarter_period: T,
}

impl<T: Float + FloatConst> EllipticModulus<T> {
    /// Builds the modulus for `0 < k2 < 1`.
    pub fn new(k2: T) -> Result<Self> {
        if !(k2 > T::zero() && k2 < T::one()) {
            return Err(Error::Domain(format!(
                "modulus k² must lie in the open interval (0, 1), got {}",
                k2.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(Self {
            k2,
            kprime2: T::one() - k2,
            quarter_period: complete_elliptic_k(k2)?,
        })
    }

    pub fn k2(&self) -> T {
        self.k2
    }

    pub fn kprime2(&self) -> T {
        self.kprime2
    }

    pub fn k(&self) -> T {
        self.k2.sqrt()
    }

    pub fn kprime(&self) -> T {
        self.kprime2.sqrt()
    }

    /// `K(k)`.
    pub fn quarter_period(&self) -> T {
        self.quarter_period
    }

    /// `2K`, the period of `sn²`, `cn²/dn²` and `dn`.
    pub fn half_period(&self) -> T {
        self.quarter_period + self.quarter_period
    }

    /// `4K`, the real period of `sn` and `cn`.
    pub fn period(&self) -> T {
        self.half_period() + self.half_period()
    }

    pub fn sn_cn_dn(&self, x: T) -> (T, T, T) {
        jacobi_sn_cn_dn(x, self)
    }
}

/// Arithmetic–geometric mean of two positive numbers.
pub fn agm<T: Float>(a: T, b: T) -> T {
    let two = T::one() + T::one();
    let (mut a, mut b) = (a, b);
    for _ in 0..MAX_AGM_STEPS {
        if (a - b).abs() <= T::epsilon() * a.abs() {
            break;
        }
        let next = (a + b) / two;
        b = (a * b).sqrt();
        a = next;
    }
    a
}

/// Complete elliptic integral of the first kind `K(k)` for `0 ≤ k2 < 1`.
pub fn complete_elliptic_k<T: Float + FloatConst>(k2: T) -> Result<T> {
    if !(k2 >= T::zero() && k2 < T::one()) {
        return Err(Error::Domain(format!(
            "K(k) requires 0 <= k² < 1, got {}",
            k2.to_f64().unwrap_or(f64::NAN)
        )));
    }
    if k2 == T::zero() {
        return Ok(T::FRAC_PI_2());
    }
    let kprime = (T::one() - k2).sqrt();
    Ok(T::FRAC_PI_2() / agm(T::one(), kprime))
}

/// The triple `(sn x, cn x, dn x)` for real `x`.
///
/// Uses the descending Landen sequence
/// `a₀ = 1, b₀ = k′, c₀ = k`, `φ_N = 2^N a_N x`,
/// `φ_{j−1} = (φ_j + asin(c_j/a_j · sin φ_j)) / 2`. `dn` is taken as
/// `√(k′² + k² cn²)`, which stays accurate near `x = K` where `k²sn² → 1`.
pub fn jacobi_sn_cn_dn<T: Float + FloatConst>(x: T, modulus: &EllipticModulus<T>) -> (T, T, T) {
    let k2 = modulus.k2;
    let kp2 = modulus.kprime2;

    // reduce to [-2K, 2K]
    let period = modulus.period();
    let x = x - (x / period).round() * period;

    let two = T::one() + T::one();
    let mut a = T::one();
    let mut b = kp2.sqrt();
    let mut c = k2.sqrt();
    let mut ratios: Vec<T> = Vec::with_capacity(16);
    let mut scale = T::one();
    for _ in 0..MAX_AGM_STEPS {
        if c.abs() <= T::epsilon() * a {
            break;
        }
        let next_a = (a + b) / two;
        let next_c = (a - b) / two;
        b = (a * b).sqrt();
        a = next_a;
        c = next_c;
        ratios.push(c / a);
        scale = scale * two;
    }

    let mut phi = scale * a * x;
    for r in ratios.iter().rev() {
        phi = (phi + (*r * phi.sin()).asin()) / two;
    }
    let sn = phi.sin();
    let cn = phi.cos();
    let dn = (kp2 + k2 * cn * cn).sqrt();
    (sn, cn, dn)
}

/// The Jacobi amplitude `am x`, continuous on the whole real line.
///
/// `am` increases by `2π` per period `4K`; `dam/dx = dn`.
pub fn jacobi_amplitude<T: Float + FloatConst>(x: T, modulus: &EllipticModulus<T>) -> T {
    let period = modulus.period();
    let turns = (x / period).round();
    let reduced = x - turns * period;
    let (sn, cn, _) = jacobi_sn_cn_dn(reduced, modulus);
    let mut angle = sn.atan2(cn);
    // reduced ∈ [-2K, 2K] maps to angle ∈ [-π, π]; fix the branch at the ends
    if reduced < T::zero() && angle > T::FRAC_PI_2() {
        angle = angle - T::PI() - T::PI();
    } else if reduced > T::zero() && angle < -T::FRAC_PI_2() {
        angle = angle + T::PI() + T::PI();
    }
    angle + turns * (T::PI() + T::PI())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn modulus(k2: f64) -> EllipticModulus<f64> {
        EllipticModulus::new(k2).unwrap()
    }

    #[test]
    fn k_at_zero_is_half_pi() {
        assert!((complete_elliptic_k(0.0_f64).unwrap() - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn k_rejects_out_of_domain() {
        assert!(complete_elliptic_k(1.0_f64).is_err());
        assert!(complete_elliptic_k(-0.1_f64).is_err());
        assert!(complete_elliptic_k(f64::NAN).is_err());
        assert!(EllipticModulus::new(0.0_f64).is_err());
        assert!(EllipticModulus::new(1.0_f64).is_err());
    }

    #[test]
    fn modulus_complement_is_exact() {
        for &k2 in &[0.1, 0.3, 0.5, 0.7, 0.9, 1e-12, 1.0 - 1e-9] {
            let m = modulus(k2);
            assert_eq!(m.k2() + m.kprime2(), 1.0);
        }
    }

    #[test]
    fn origin_and_quarter_period_values() {
        for &k2 in &[0.1, 0.5, 0.9] {
            let m = modulus(k2);
            let (s, c, d) = m.sn_cn_dn(0.0);
            assert_eq!((s, c, d), (0.0, 1.0, 1.0));
            let (s, c, d) = m.sn_cn_dn(m.quarter_period());
            assert!((s - 1.0).abs() < 1e-15);
            assert!(c.abs() < 1e-15);
            assert!((d - m.kprime()).abs() < 1e-15);
        }
    }

    #[test]
    fn f32_instantiation() {
        let m = EllipticModulus::<f32>::new(0.5).unwrap();
        let (s, c, d) = m.sn_cn_dn(m.quarter_period());
        assert!((s - 1.0).abs() < 1e-6);
        assert!(c.abs() < 1e-3);
        assert!((d - 0.5f32.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn amplitude_is_continuous_and_anchored() {
        let m = modulus(0.7);
        assert_eq!(jacobi_amplitude(0.0, &m), 0.0);
        let two_k = m.half_period();
        assert!((jacobi_amplitude(two_k, &m) - PI).abs() < 1e-14);
        assert!((jacobi_amplitude(-two_k, &m) + PI).abs() < 1e-14);
        assert!((jacobi_amplitude(2.0 * two_k, &m) - 2.0 * PI).abs() < 1e-13);
        let mut prev = jacobi_amplitude(-10.0, &m);
        for i in 1..=4000 {
            let x = -10.0 + 20.0 * i as f64 / 4000.0;
            let a = jacobi_amplitude(x, &m);
            assert!(a > prev && a - prev < 0.01, "jump at x = {x}");
            prev = a;
        }
    }
}
