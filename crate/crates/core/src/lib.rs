//! Quasi-exact solvability of the associated Lamé equation
//!
//! ```text
//! −ψ″ + [m(m+1) k² sn²x + l(l+1) k² cn²x / dn²x] ψ = E ψ
//! ```
//!
//! through a finite sl(2) representation: band-edge energies are eigenvalues
//! of small matrices, eigenfunctions are gauge factors times polynomials in
//! `ξ = sn/cn`.

pub mod algebraize;
pub mod eigen;
pub mod elliptic;
pub mod error;
pub mod fixtures;
pub mod gauge;
pub mod ode;
pub mod quad;
pub mod scalar;
pub mod sl2core;
pub mod spectra;
pub mod verify;

use num_rational::Ratio;

pub use algebraize::{admissible_families, solve_family, AlgebraizationParams, Family, HalfInteger, LameCase, LameParameters};
pub use elliptic::{complete_elliptic_k, jacobi_sn_cn_dn, EllipticModulus};
pub use error::{Error, Result};
pub use gauge::{gauge_spec, GaugeFactorSpec};
pub use scalar::Scalar;
pub use sl2core::{build_gauged_hamiltonian, GaugedHamiltonian, GeneratorSet, SquareMatrix};
pub use spectra::{band_edge_spectrum, BandEdgeState, SpectrumResult, WaveSampler};

pub type Modulus = EllipticModulus<f64>;
pub type ExactRational = Ratio<i64>;
pub type ExactGenerators = GeneratorSet<ExactRational>;
pub type Generators = GeneratorSet<f64>;
