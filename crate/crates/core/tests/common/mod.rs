//! Reference implementations that share no code with the library.
#![allow(dead_code)]

use std::f64::consts::PI;

/// `K(k)` from its Maclaurin series in `k²`.
pub fn k_series(k2: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0.0;
    while term > 1e-18 * sum {
        n += 1.0;
        let ratio = (2.0 * n - 1.0) / (2.0 * n);
        term *= ratio * ratio * k2;
        sum += term;
        assert!(n < 20000.0, "series did not converge for k² = {k2}");
    }
    PI / 2.0 * sum
}

/// `(sn, cn, dn)` from their Fourier series in the nome `q = exp(−πK′/K)`.
pub fn jacobi_fourier(u: f64, k2: f64) -> (f64, f64, f64) {
    let big_k = k_series(k2);
    let big_kp = k_series(1.0 - k2);
    let q: f64 = (-PI * big_kp / big_k).exp();
    let k = k2.sqrt();
    let v = PI * u / (2.0 * big_k);
    let (mut sn, mut cn, mut dn) = (0.0, 0.0, PI / (2.0 * big_k));
    for n in 0..200 {
        let nf = n as f64;
        let odd = 2.0 * nf + 1.0;
        let qh = q.powf(nf + 0.5);
        let qo = q.powf(odd);
        sn += qh / (1.0 - qo) * (odd * v).sin();
        cn += qh / (1.0 + qo) * (odd * v).cos();
        if n >= 1 {
            let qn = q.powi(n);
            dn += 2.0 * PI / big_k * qn / (1.0 + qn * qn) * (2.0 * nf * v).cos();
        }
        if qh < 1e-20 {
            break;
        }
    }
    let pref = 2.0 * PI / (big_k * k);
    (pref * sn, pref * cn, dn)
}

/// Richardson-extrapolated central first derivative.
pub fn derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

pub const K2_SET: [f64; 3] = [0.1, 0.5, 0.9];

/// Case-1 golden pairs, as twice their values.
pub const CASE1: [(i64, i64); 5] = [(2, 0), (2, 2), (4, 0), (4, 2), (4, 4)];
/// Case-2 golden pairs, as twice their values.
pub const CASE2: [(i64, i64); 6] = [(1, 0), (1, 1), (3, 0), (3, 1), (3, 2), (3, 3)];

/// Every admissible `(2m, 2l)` with `m ≤ max_m2 / 2`.
pub fn admissible_pairs(max_m2: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for m2 in 0..=max_m2 {
        for l2 in 0..=m2 {
            if lame_qes::LameParameters::from_twice(m2, l2).is_ok() {
                out.push((m2, l2));
            }
        }
    }
    out
}
