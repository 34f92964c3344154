use std::fmt;

use super::gamma::gamma_continuum;
use super::spectral::SpectralFunction;
use crate::error::{Error, Result};
use crate::evolution::gamma_discrete;
use crate::scalar::Real;
use crate::system::{DiscreteBath, Temperature};

/// Which formula produced a [`DecoherenceCurve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveSource {
    Discrete,
    Continuum,
}

impl CurveSource {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveSource::Discrete => "discrete",
            CurveSource::Continuum => "continuum",
        }
    }
}

impl fmt::Display for CurveSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sampled decoherence function with per-point quadrature error.
///
/// Values are not required to be monotone: a discrete bath gives an
/// oscillating curve.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceCurve<T: Real> {
    times: Vec<T>,
    values: Vec<T>,
    errors: Vec<T>,
    source: CurveSource,
}

fn check_times<T: Real>(times: &[T]) -> Result<()> {
    if let Some(&t0) = times.first() {
        if !(t0 >= T::zero()) {
            return Err(Error::NegativeTime { t: t0.as_f64() });
        }
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidCurve(
            "times must be strictly increasing".into(),
        ));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidCurve("times must be finite".into()));
    }
    Ok(())
}

impl<T: Real> DecoherenceCurve<T> {
    /// Wraps precomputed samples.
    pub fn new(times: Vec<T>, values: Vec<T>, errors: Vec<T>, source: CurveSource) -> Result<Self> {
        check_times(&times)?;
        if values.len() != times.len() || errors.len() != times.len() {
            return Err(Error::DimensionMismatch {
                what: "curve samples",
                expected: times.len(),
                found: if values.len() != times.len() {
                    values.len()
                } else {
                    errors.len()
                },
            });
        }
        Ok(Self {
            times,
            values,
            errors,
            source,
        })
    }

    pub fn from_discrete(
        bath: &DiscreteBath<T>,
        beta: Temperature<T>,
        times: Vec<T>,
    ) -> Result<Self> {
        check_times(&times)?;
        let values = times
            .iter()
            .map(|&t| gamma_discrete(bath, beta, t))
            .collect::<Result<Vec<_>>>()?;
        let errors = vec![T::zero(); times.len()];
        Self::new(times, values, errors, CurveSource::Discrete)
    }

    pub fn from_continuum(
        spec: &SpectralFunction<T>,
        beta: Temperature<T>,
        times: Vec<T>,
        tol: T,
    ) -> Result<Self> {
        check_times(&times)?;
        let mut values = Vec::with_capacity(times.len());
        let mut errors = Vec::with_capacity(times.len());
        for &t in &times {
            let est = gamma_continuum(spec, beta, t, tol)?;
            values.push(est.value);
            errors.push(est.error);
        }
        Self::new(times, values, errors, CurveSource::Continuum)
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn errors(&self) -> &[T] {
        &self.errors
    }

    pub fn source(&self) -> CurveSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Every value multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            times: self.times.clone(),
            values: self.values.iter().map(|&v| v * factor).collect(),
            errors: self.errors.iter().map(|&e| e * factor.abs()).collect(),
            source: self.source,
        }
    }
}

/// `count` evenly spaced points from `start` to `stop` inclusive.
pub fn linear_grid<T: Real>(start: T, stop: T, count: usize) -> Vec<T> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let last = T::from_usize(count - 1).expect("grid size");
            (0..count)
                .map(|i| {
                    if i == count - 1 {
                        stop
                    } else {
                        start + (stop - start) * T::from_usize(i).expect("grid index") / last
                    }
                })
                .collect()
        }
    }
}

/// `count` logarithmically spaced points from `start > 0` to `stop` inclusive.
pub fn log_grid<T: Real>(start: T, stop: T, count: usize) -> Vec<T> {
    linear_grid(start.ln(), stop.ln(), count)
        .into_iter()
        .enumerate()
        .map(|(i, x)| match i {
            0 => start,
            i if i + 1 == count => stop,
            _ => x.exp(),
        })
        .collect()
}
