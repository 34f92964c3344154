//! Continuum limit: spectral functions, the decoherence integral, regime
//! classification and asymptotic growth fits.

pub mod curve;
pub mod fit;
pub mod gamma;
#[allow(clippy::excessive_precision)]
pub mod quadrature;
pub mod regime;
pub mod spectral;

pub use curve::{linear_grid, log_grid, CurveSource, DecoherenceCurve};
pub use fit::{fit_asymptotic_exponent, FitModel, FitResult};
pub use gamma::gamma_continuum;
pub use quadrature::Estimate;
pub use regime::{
    analyze_regimes, regime, Regime, RegimeAnalysis, RegimeReport, RegimeWindows, WindowFit,
};
pub use spectral::{decoherence_complete, discretize_spectral, spectral_weight, SpectralFunction};
