//! Exact adiabatic decoherence of a finite quantum system coupled to a
//! bosonic heat bath through an interaction that commutes with the system
//! Hamiltonian.
//!
//! * [`evolution`]: closed-form reduced density matrix and decoherence
//!   function for a discrete set of bath modes.
//! * [`continuum`]: the continuum limit for spectral functions
//!   `A w^n exp(-w/w_c)`, regime classification and growth-law fits.
//! * [`oracle`]: brute-force truncated-Fock-space reference used to check the
//!   closed form.
//!
//! The closed-form and continuum code is generic over [`Real`] (`f32`, `f64`);
//! the aliases below fix the scalar to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0)` also rejects NaN.

pub mod continuum;
pub mod error;
pub mod evolution;
pub mod oracle;
pub mod scalar;
pub mod system;

pub use continuum::{
    analyze_regimes, decoherence_complete, discretize_spectral, fit_asymptotic_exponent,
    gamma_continuum, regime, spectral_weight, CurveSource, Estimate, FitModel, FitResult, Regime,
    RegimeAnalysis, RegimeReport, RegimeWindows,
};
pub use error::{Error, Result};
pub use evolution::{free_evolution, gamma_discrete, p_factor, reduced_density_matrix, s_factor};
pub use scalar::Real;
pub use system::validate_system;

pub use num_complex::{Complex, Complex64};

pub type SystemSpec = system::SystemSpec<f64>;
pub type DensityMatrix = system::DensityMatrix<f64>;
pub type BathMode = system::BathMode<f64>;
pub type DiscreteBath = system::DiscreteBath<f64>;
pub type Temperature = system::Temperature<f64>;
pub type SpectralFunction = continuum::SpectralFunction<f64>;
pub type DecoherenceCurve = continuum::DecoherenceCurve<f64>;

pub type SystemSpec32 = system::SystemSpec<f32>;
pub type DensityMatrix32 = system::DensityMatrix<f32>;
pub type DiscreteBath32 = system::DiscreteBath<f32>;
pub type Temperature32 = system::Temperature<f32>;
pub type SpectralFunction32 = continuum::SpectralFunction<f32>;
