//! Finite-dimensional sl(2) realization on polynomials of degree ≤ n and
//! the quadratic (gauged) Hamiltonian built from it.
//!
//! Generators act on monomial coefficient vectors in the basis
//! `{1, ξ, …, ξⁿ}`; column `j` of every matrix is the image of `ξʲ`:
//!
//! ```text
//! T⁺ = ξ²∂ − nξ      T⁰ = ξ∂ − n/2      T⁻ = ∂
//! ```
//!
//! The Hamiltonian is `H_G = −Σ C_ab TᵃTᵇ − Σ C_a Tᵃ − d` with symmetric
//! `C_ab` and `C₊₋ = 0`; as a differential operator it equals
//! `−(B₄∂² + B₃∂ + B₂)`, see [`b_polynomials`] and [`apply_operator`].

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::algebraize::AlgebraizationParams;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> SquareMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| v.clone() * factor.clone()).collect(),
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                (0..self.dim).fold(T::zero(), |acc, j| acc + self[(i, j)].clone() * v[j].clone())
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.dim).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> SquareMatrix<U> {
        SquareMatrix {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }
}

impl<T> SquareMatrix<T> {
    pub fn entries(&self) -> &[T] {
        &self.data
    }
}

impl<T> std::ops::Index<(usize, usize)> for SquareMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.dim + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for SquareMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Scalar> Add for &SquareMatrix<T> {
    type Output = SquareMatrix<T>;
    fn add(self, rhs: Self) -> SquareMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        SquareMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: Scalar> Sub for &SquareMatrix<T> {
    type Output = SquareMatrix<T>;
    fn sub(self, rhs: Self) -> SquareMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        SquareMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: Scalar> Mul for &SquareMatrix<T> {
    type Output = SquareMatrix<T>;
    fn mul(self, rhs: Self) -> SquareMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = SquareMatrix::<T>::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * rhs[(k, j)].clone();
                }
            }
        }
        out
    }
}

/// Matrices of `T⁺, T⁰, T⁻` on polynomials of degree ≤ n.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet<T> {
    pub n: usize,
    pub t_plus: SquareMatrix<T>,
    pub t_zero: SquareMatrix<T>,
    pub t_minus: SquareMatrix<T>,
}

pub fn build_generators<T: Scalar>(n: usize) -> GeneratorSet<T> {
    let dim = n + 1;
    let mut t_plus = SquareMatrix::zeros(dim);
    let mut t_zero = SquareMatrix::zeros(dim);
    let mut t_minus = SquareMatrix::zeros(dim);
    let n_i = n as i64;
    for i in 0..dim {
        let i_i = i as i64;
        t_zero[(i, i)] = T::from_ratio(2 * i_i - n_i, 2);
        if i + 1 < dim {
            t_plus[(i + 1, i)] = T::from_i64(i_i - n_i);
        }
        if i >= 1 {
            t_minus[(i - 1, i)] = T::from_i64(i_i);
        }
    }
    GeneratorSet {
        n,
        t_plus,
        t_zero,
        t_minus,
    }
}

/// Symmetric quadratic coefficients `C₊₊, C₊₀, C₀₀, C₀₋, C₋₋` (`C₊₋ = 0`).
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticCoefficients<T> {
    pub pp: T,
    pub pz: T,
    pub zz: T,
    pub zm: T,
    pub mm: T,
}

impl<T: Scalar> QuadraticCoefficients<T> {
    /// The choice that makes `B₄(ξ) = (1 + ξ²)(1 + k′²ξ²)`.
    pub fn lame(k2: T) -> Self {
        let one = T::one();
        Self {
            pp: one.clone() - k2.clone(),
            pz: T::zero(),
            zz: one.clone() + one.clone() - k2,
            zm: T::zero(),
            mm: one,
        }
    }
}

/// Every coefficient of the quadratic combination.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianCoefficients<T> {
    pub quad: QuadraticCoefficients<T>,
    pub c_plus: T,
    pub c_zero: T,
    pub c_minus: T,
    pub d: T,
}

/// `−Σ C_ab TᵃTᵇ − Σ C_a Tᵃ − d·I` on the `(n+1)`-dimensional module.
pub fn gauged_matrix<T: Scalar>(n: usize, c: &HamiltonianCoefficients<T>) -> SquareMatrix<T> {
    let g = build_generators::<T>(n);
    let (tp, tz, tm) = (&g.t_plus, &g.t_zero, &g.t_minus);
    let q = &c.quad;
    let quadratic = [
        (tp * tp).scale(&q.pp),
        (&(tp * tz) + &(tz * tp)).scale(&q.pz),
        (tz * tz).scale(&q.zz),
        (&(tz * tm) + &(tm * tz)).scale(&q.zm),
        (tm * tm).scale(&q.mm),
    ];
    let linear = [
        tp.scale(&c.c_plus),
        tz.scale(&c.c_zero),
        tm.scale(&c.c_minus),
        SquareMatrix::identity(n + 1).scale(&c.d),
    ];
    let total = quadratic
        .iter()
        .chain(linear.iter())
        .fold(SquareMatrix::zeros(n + 1), |acc, m| &acc + m);
    total.scale(&-T::one())
}

/// Coefficient lists (ascending powers of ξ) of `B₄`, `B₃`, `B₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct BPolynomials<T> {
    pub b4: [T; 5],
    pub b3: [T; 4],
    pub b2: [T; 3],
}

/// `B₂, B₃, B₄` written out term by term for representation label `n`.
pub fn b_polynomials<T: Scalar>(n: usize, c: &HamiltonianCoefficients<T>) -> BPolynomials<T> {
    let q = &c.quad;
    let two = T::from_i64(2);
    let n_t = T::from_i64(n as i64);
    let one_minus_n = T::one() - n_t.clone();

    let b4 = [
        q.mm.clone(),
        two.clone() * q.zm.clone(),
        q.zz.clone(),
        two.clone() * q.pz.clone(),
        q.pp.clone(),
    ];
    let b3 = [
        one_minus_n.clone() * q.zm.clone() + c.c_minus.clone(),
        one_minus_n.clone() * q.zz.clone() + c.c_zero.clone(),
        T::from_i64(3) * one_minus_n.clone() * q.pz.clone() + c.c_plus.clone(),
        two.clone() * one_minus_n.clone() * q.pp.clone(),
    ];
    let b2 = [
        n_t.clone() * n_t.clone() / T::from_i64(4) * q.zz.clone() - n_t.clone() * c.c_zero.clone() / two
            + c.d.clone(),
        n_t.clone() * ((n_t.clone() - T::one()) * q.pz.clone() - c.c_plus.clone()),
        n_t.clone() * (n_t - T::one()) * q.pp.clone(),
    ];
    BPolynomials { b4, b3, b2 }
}

fn poly_mul<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

fn poly_derivative<T: Scalar>(p: &[T]) -> Vec<T> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| T::from_i64(j as i64) * c.clone())
        .collect()
}

/// Applies `−(B₄∂² + B₃∂ + B₂)` to a polynomial; the result carries every
/// power the product can reach (up to `deg p + 2`).
pub fn apply_operator<T: Scalar>(b: &BPolynomials<T>, poly: &[T]) -> Vec<T> {
    let d1 = poly_derivative(poly);
    let d2 = poly_derivative(&d1);
    let terms = [poly_mul(&b.b4, &d2), poly_mul(&b.b3, &d1), poly_mul(&b.b2, poly)];
    let len = terms.iter().map(Vec::len).max().unwrap_or(0).max(poly.len());
    let mut out = vec![T::zero(); len];
    for t in &terms {
        for (i, c) in t.iter().enumerate() {
            out[i] = out[i].clone() - c.clone();
        }
    }
    out
}

/// Gauged Hamiltonian of one algebraization family.
#[derive(Clone, Debug)]
pub struct GaugedHamiltonian {
    pub n: usize,
    pub matrix: SquareMatrix<Complex64>,
    pub params: AlgebraizationParams,
}

impl GaugedHamiltonian {
    pub fn is_real(&self) -> bool {
        self.matrix.entries().iter().all(|z| z.im == 0.0)
    }
}

pub fn build_gauged_hamiltonian(params: &AlgebraizationParams) -> Result<GaugedHamiltonian> {
    let coeffs = params.coefficients();
    let matrix = gauged_matrix(params.n, &coeffs);
    if matrix.dim() != params.n + 1 {
        return Err(Error::InconsistentParams(format!(
            "matrix dimension {} does not match n + 1 = {}",
            matrix.dim(),
            params.n + 1
        )));
    }
    if matrix.entries().iter().any(|z| !z.is_finite()) {
        return Err(Error::InconsistentParams(
            "non-finite entry in gauged Hamiltonian".into(),
        ));
    }
    Ok(GaugedHamiltonian {
        n: params.n,
        matrix,
        params: params.clone(),
    })
}

pub fn build_b_polynomials(params: &AlgebraizationParams) -> BPolynomials<Complex64> {
    b_polynomials(params.n, &params.coefficients())
}
