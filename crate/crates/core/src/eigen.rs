//! Dense complex eigensolver for the small unsymmetric matrices produced by
//! the gauged Hamiltonian.
//!
//! Eigenvalues come from Householder reduction to Hessenberg form followed by
//! single-shift QR sweeps (Wilkinson shift, Givens rotations) with deflation.
//! Eigenvectors come from inverse iteration on the original matrix, with
//! Gram–Schmidt inside clusters of numerically coincident eigenvalues.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sl2core::SquareMatrix;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;
const INVERSE_ITERATIONS: usize = 3;
/// Relative gap below which two eigenvalues share one invariant subspace search.
pub const CLUSTER_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: Complex64,
    pub vector: Vec<Complex64>,
}

impl EigenPair {
    /// `‖A v − λ v‖₂ / ‖v‖₂`.
    pub fn residual(&self, a: &SquareMatrix<Complex64>) -> f64 {
        let av = a.apply(&self.vector);
        let num: f64 = av
            .iter()
            .zip(&self.vector)
            .map(|(x, v)| (x - self.value * v).norm_sqr())
            .sum::<f64>()
            .sqrt();
        num / vector_norm(&self.vector)
    }
}

pub fn frobenius_norm(a: &SquareMatrix<Complex64>) -> f64 {
    a.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn vector_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

type Dense = Vec<Vec<Complex64>>;

fn to_dense(a: &SquareMatrix<Complex64>) -> Dense {
    let n = a.dim();
    (0..n).map(|i| (0..n).map(|j| a[(i, j)]).collect()).collect()
}

fn hessenberg(h: &mut Dense) {
    let n = h.len();
    for k in 0..n.saturating_sub(2) {
        let alpha_norm: f64 = (k + 1..n).map(|i| h[i][k].norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = h[k + 1][k];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        // v = x + phase·‖x‖·e₁, reflector P = I − 2vv*/v*v
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[i][k]).collect();
        v[0] += phase * alpha_norm;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // left: rows k+1.., all columns
        for j in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(r, vi)| vi.conj() * h[k + 1 + r][j]).sum();
            let f = dot * 2.0 / vnorm2;
            for (r, vi) in v.iter().enumerate() {
                h[k + 1 + r][j] -= vi * f;
            }
        }
        // right: columns k+1.., all rows
        for row in h.iter_mut() {
            let dot: Complex64 = v.iter().enumerate().map(|(c, vi)| row[k + 1 + c] * vi).sum();
            let f = dot * 2.0 / vnorm2;
            for (c, vi) in v.iter().enumerate() {
                row[k + 1 + c] -= f * vi.conj();
            }
        }
        for row in h.iter_mut().skip(k + 2) {
            row[k] = Complex64::new(0.0, 0.0);
        }
    }
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let root = disc.sqrt();
    let (l1, l2) = (half_tr + root, half_tr - root);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Eigenvalues of a complex square matrix.
pub fn eigenvalues(a: &SquareMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = a.dim();
    let mut h = to_dense(a);
    hessenberg(&mut h);
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(values);
    }
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut sweeps = 0usize;
    loop {
        if hi == 0 {
            values[0] = h[0][0];
            break;
        }
        // find the start of the unreduced block ending at hi
        let mut lo = hi;
        while lo > 0 {
            let scale = h[lo - 1][lo - 1].norm() + h[lo][lo].norm();
            let scale = if scale == 0.0 { 1.0 } else { scale };
            if h[lo][lo - 1].norm() <= eps * scale {
                h[lo][lo - 1] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            values[hi] = h[hi][hi];
            hi -= 1;
            sweeps = 0;
            continue;
        }
        sweeps += 1;
        if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(Error::EigenFailure { size: n });
        }
        let mut mu = wilkinson_shift(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi]);
        if sweeps.is_multiple_of(11) {
            // exceptional shift to break cycles
            mu += Complex64::new(h[hi][hi - 1].norm(), 0.0) * 0.75;
        }
        for k in lo..=hi {
            h[k][k] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let x = h[k][k];
            let y = h[k + 1][k];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
            } else {
                (x / r, y / r)
            };
            for j in k..=hi {
                let (p, q) = (h[k][j], h[k + 1][j]);
                h[k][j] = c.conj() * p + s.conj() * q;
                h[k + 1][j] = -s * p + c * q;
            }
            rotations.push((c, s));
        }
        for (offset, (c, s)) in rotations.into_iter().enumerate() {
            let k = lo + offset;
            for row in h.iter_mut().take((k + 2).min(hi) + 1).skip(lo) {
                let (p, q) = (row[k], row[k + 1]);
                row[k] = p * c + q * s;
                row[k + 1] = -p * s.conj() + q * c.conj();
            }
        }
        for k in lo..=hi {
            h[k][k] += mu;
        }
    }
    Ok(values)
}

/// Solves `(A − λI) x = b` by LU with partial pivoting; tiny pivots are
/// replaced by `floor` so that exact eigenvalues do not divide by zero.
fn shifted_solve(a: &SquareMatrix<Complex64>, lambda: Complex64, b: &[Complex64], floor: f64) -> Vec<Complex64> {
    let n = a.dim();
    let mut m = to_dense(a);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= lambda;
    }
    let mut rhs = b.to_vec();
    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&i, &j| m[i][k].norm().total_cmp(&m[j][k].norm()))
            .unwrap_or(k);
        m.swap(k, pivot_row);
        rhs.swap(k, pivot_row);
        if m[k][k].norm() < floor {
            m[k][k] = Complex64::new(floor, 0.0);
        }
        let pivot = m[k][k];
        for i in k + 1..n {
            let f = m[i][k] / pivot;
            if f.norm() == 0.0 {
                continue;
            }
            for j in k..n {
                let t = m[k][j];
                m[i][j] -= f * t;
            }
            let t = rhs[k];
            rhs[i] -= f * t;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for k in (0..n).rev() {
        let s: Complex64 = (k + 1..n).map(|j| m[k][j] * x[j]).sum();
        x[k] = (rhs[k] - s) / m[k][k];
    }
    x
}

fn normalize(v: &mut [Complex64]) {
    let norm = vector_norm(v);
    if norm > 0.0 {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
}

fn project_out(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for u in basis {
        let dot: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
        for (vi, ui) in v.iter_mut().zip(u) {
            *vi -= dot * ui;
        }
    }
}

/// Eigenvalues and unit eigenvectors, in the order returned by the QR sweep.
pub fn eigen_decomposition(a: &SquareMatrix<Complex64>) -> Result<Vec<EigenPair>> {
    let n = a.dim();
    let values = eigenvalues(a)?;
    let norm = match frobenius_norm(a) {
        v if v > 0.0 => v,
        _ => 1.0,
    };
    let floor = f64::EPSILON * norm;

    let mut pairs: Vec<EigenPair> = Vec::with_capacity(n);
    for (idx, &lambda) in values.iter().enumerate() {
        let cluster: Vec<Vec<Complex64>> = pairs
            .iter()
            .filter(|p| (p.value - lambda).norm() <= CLUSTER_TOL * lambda.norm().max(1.0))
            .map(|p| p.vector.clone())
            .collect();
        // deterministic, generic start vector
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(1.0 + 0.1 * ((i * 7 + idx * 3) % 5) as f64, 0.05 * i as f64))
            .collect();
        project_out(&mut v, &cluster);
        normalize(&mut v);
        for _ in 0..INVERSE_ITERATIONS {
            let mut next = shifted_solve(a, lambda, &v, floor);
            // the solve amplifies the known directions too; one pass is not enough
            normalize(&mut next);
            project_out(&mut next, &cluster);
            normalize(&mut next);
            project_out(&mut next, &cluster);
            normalize(&mut next);
            v = next;
        }
        pairs.push(EigenPair { value: lambda, vector: v });
    }
    Ok(pairs)
}
