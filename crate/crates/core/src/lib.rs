//! Verification-grade toolkit for narrow-band (Hubble-line) collapse-noise
//! phenomenology.
//!
//! The library models a bath whose connected current correlator is a single
//! Wightman line at `|omega| = 2*omega0`, and provides everything needed to
//! take that correlator through to laboratory and cosmological observables:
//!
//! - [`params`]: physical constants, microscopic parameter sets, and the
//!   derived amplitudes (`A_J`, the surrogate `kappa^2`, the holographic
//!   per-mode mass).
//! - [`fock`]: a brute-force truncated Fock-space oracle (dense ladder
//!   matrices, vacuum/thermal correlators, Bateman-pair spectra) used to
//!   verify every closed form independently.
//! - [`spectral`]: symbolic spectrum models (delta lines, Lorentzians,
//!   zero-frequency pedestals) and the off-resonance suppression arithmetic.
//! - [`dephasing`]: closed-form dephasing kernels `D(T)`, the quasi-static
//!   `T^2` law, and Monte-Carlo Gaussian-noise verification.
//! - [`dynamics`]: secular GKLS generators with spatial kernels, channel
//!   propagation, Choi/complete-positivity checks, and the homogeneous-bath
//!   localization obstruction.
//! - [`cosmo`]: de Sitter mode counting, rate formulas, amplification
//!   thresholds, and scaling-exponent classification.
//! - [`quad`]: adaptive Gauss-Kronrod quadrature used as the independent
//!   oracle for the closed-form dephasing kernels.
//! - [`verify`]: machine-readable verification suites driving the oracles.
//! - [`tables`]: reference-table row builders (suppression, populated bath,
//!   amplification thresholds).
//!
//! Fourier convention, fixed project-wide: `S(omega) = Integral dtau
//! exp(-i omega tau) C(tau)`, so a correlator `A exp(-2i omega0 tau)` is a
//! line at `omega = -2 omega0`.

pub mod cosmo;
pub mod dephasing;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod params;
pub mod quad;
pub mod spectral;
pub mod tables;
pub mod verify;

pub use error::{Error, Result};
pub use params::{GtdParams, PhysicalConstants};

/// Complex scalar used throughout the dense-matrix oracles.
pub type C64 = num_complex::Complex64;
