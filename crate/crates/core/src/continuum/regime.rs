//! Time regimes of the continuum decoherence function.
//!
//! With `1/w_c << beta`, times split into a quiet regime (`t < 1/w_c`, growth
//! like `t^2`), a quantum regime (`1/w_c <= t < beta`, logarithmic growth for
//! the ohmic bath), and a thermal regime (`t >= beta`, growth like `t^(2-n)`
//! for `n < 2`, saturation otherwise).

use std::fmt;

use super::curve::{log_grid, DecoherenceCurve};
use super::fit::{fit_asymptotic_exponent, FitModel, FitResult};
use super::gamma::gamma_continuum;
use super::spectral::{decoherence_complete, SpectralFunction};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::system::Temperature;

/// Below this `beta * w_c` the regimes are reported as weakly separated.
pub const WELL_SEPARATED_RATIO: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Quiet,
    Quantum,
    Thermal,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Quiet => "quiet",
            Regime::Quantum => "quantum",
            Regime::Thermal => "thermal",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A classification together with the boundaries it was made against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport<T> {
    pub regime: Regime,
    pub inverse_cutoff: T,
    pub beta: T,
    /// `beta * w_c`, the separation between the two boundaries.
    pub separation: T,
    pub weakly_separated: bool,
}

/// Classifies `t` with half-open intervals `[0, 1/w_c)`, `[1/w_c, beta)`,
/// `[beta, inf)`.
pub fn regime<T: Real>(
    t: T,
    beta: Temperature<T>,
    spec: &SpectralFunction<T>,
) -> Result<RegimeReport<T>> {
    let inverse_cutoff = spec.cutoff().recip();
    let b = beta.beta();
    if !(inverse_cutoff < b) {
        return Err(Error::RegimeUndefined {
            inverse_cutoff: inverse_cutoff.as_f64(),
            beta: b.as_f64(),
        });
    }
    if !(t >= T::zero()) {
        return Err(Error::NegativeTime { t: t.as_f64() });
    }
    let regime = if t < inverse_cutoff {
        Regime::Quiet
    } else if t < b {
        Regime::Quantum
    } else {
        Regime::Thermal
    };
    let separation = b * spec.cutoff();
    Ok(RegimeReport {
        regime,
        inverse_cutoff,
        beta: b,
        separation,
        weakly_separated: separation < T::lit(WELL_SEPARATED_RATIO),
    })
}

/// Fit windows (absolute times) for each regime; `None` skips the regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeWindows<T> {
    pub quiet: Option<(T, T)>,
    pub quantum: Option<(T, T)>,
    pub thermal: Option<(T, T)>,
}

impl<T: Real> RegimeWindows<T> {
    /// Quiet `[1e-3, 1e-2]/w_c`, quantum `[10/w_c, beta/10]`, thermal
    /// `[1e5, 1e7] beta`.
    ///
    /// The thermal window sits deep in the asymptotic range because for
    /// `n` close to 2 the bounded part of gamma dominates the `t^(2-n)` growth
    /// until `t ~ 1e5 beta`.
    pub fn standard(spec: &SpectralFunction<T>, beta: Temperature<T>) -> Self {
        let tc = spec.cutoff().recip();
        let b = beta.beta();
        let quantum = (T::lit(10.0) * tc, T::lit(0.1) * b);
        let thermal = (T::lit(1e5) * b, T::lit(1e7) * b);
        Self {
            quiet: Some((T::lit(1e-3) * tc, T::lit(1e-2) * tc)),
            quantum: if quantum.0 < quantum.1 && quantum.1.is_finite() {
                Some(quantum)
            } else {
                None
            },
            thermal: if b.is_finite() { Some(thermal) } else { None },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowFit<T> {
    pub regime: Regime,
    pub model: FitModel,
    pub window: (T, T),
    pub fit: FitResult<T>,
}

/// Per-regime fits plus the completeness verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeAnalysis<T> {
    pub fits: Vec<WindowFit<T>>,
    pub complete: bool,
    /// `(gamma(100 beta) - gamma(10 beta)) / gamma(10 beta)`; `None` at zero temperature.
    pub saturation_growth: Option<T>,
    pub separation: T,
    pub weakly_separated: bool,
}

impl<T: Real> RegimeAnalysis<T> {
    pub fn fit_for(&self, regime: Regime) -> Option<&WindowFit<T>> {
        self.fits.iter().find(|f| f.regime == regime)
    }
}

/// Samples the continuum decoherence function on each window and fits the
/// expected growth law: power law in the quiet and thermal windows, log law
/// in the quantum window.
pub fn analyze_regimes<T: Real>(
    spec: &SpectralFunction<T>,
    beta: Temperature<T>,
    windows: &RegimeWindows<T>,
    samples_per_window: usize,
    tol: T,
) -> Result<RegimeAnalysis<T>> {
    let classification = regime(T::zero(), beta, spec)?;
    let mut fits = Vec::new();
    let plan = [
        (Regime::Quiet, FitModel::PowerLaw, windows.quiet),
        (Regime::Quantum, FitModel::LogLaw, windows.quantum),
        (Regime::Thermal, FitModel::PowerLaw, windows.thermal),
    ];
    for (regime, model, window) in plan {
        let Some(window) = window else { continue };
        let times = log_grid(window.0, window.1, samples_per_window);
        let curve = DecoherenceCurve::from_continuum(spec, beta, times, tol)?;
        let fit = fit_asymptotic_exponent(&curve, window, model)?;
        fits.push(WindowFit {
            regime,
            model,
            window,
            fit,
        });
    }
    let saturation_growth = if beta.is_zero_temperature() {
        None
    } else {
        let b = beta.beta();
        let early = gamma_continuum(spec, beta, T::lit(10.0) * b, tol)?.value;
        let late = gamma_continuum(spec, beta, T::lit(100.0) * b, tol)?.value;
        Some((late - early) / early)
    };
    Ok(RegimeAnalysis {
        fits,
        complete: decoherence_complete(spec),
        saturation_growth,
        separation: classification.separation,
        weakly_separated: classification.weakly_separated,
    })
}
