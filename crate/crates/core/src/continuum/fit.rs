//! Least-squares estimation of asymptotic growth laws of the decoherence
//! function.

use super::curve::DecoherenceCurve;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Minimum number of samples a fit window must contain.
pub const MIN_FIT_SAMPLES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// `ln gamma = p ln t + c`; reports the exponent `p`.
    PowerLaw,
    /// `gamma = s ln t + c`; reports the slope `s`.
    LogLaw,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult<T> {
    /// Power-law exponent or log-law slope.
    pub value: T,
    pub intercept: T,
    /// `sqrt(SS_res / SS_tot)` of the linear fit; zero for an exact fit.
    pub residual: T,
    pub samples: usize,
}

fn linear_fit<T: Real>(xs: &[T], ys: &[T]) -> (T, T, T) {
    let n = T::from_usize(xs.len()).expect("sample count");
    let x_mean = xs.iter().copied().sum::<T>() / n;
    let y_mean = ys.iter().copied().sum::<T>() / n;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    let mut syy = T::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - x_mean;
        let dy = y - y_mean;
        sxx = sxx + dx * dx;
        sxy = sxy + dx * dy;
        syy = syy + dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ss_res: T = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let residual = if syy > T::zero() {
        (ss_res / syy).sqrt()
    } else {
        T::zero()
    };
    (slope, intercept, residual)
}

/// Fits `model` to the curve samples with `window.0 <= t <= window.1`.
pub fn fit_asymptotic_exponent<T: Real>(
    curve: &DecoherenceCurve<T>,
    window: (T, T),
    model: FitModel,
) -> Result<FitResult<T>> {
    let (lo, hi) = window;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&t, &g) in curve.times().iter().zip(curve.values()) {
        if t < lo || t > hi {
            continue;
        }
        if !(t > T::zero()) {
            // ln t undefined; the window must exclude the origin.
            continue;
        }
        if !(g > T::zero()) {
            return Err(Error::NonpositiveGamma {
                t: t.as_f64(),
                gamma: g.as_f64(),
            });
        }
        xs.push(t.ln());
        ys.push(match model {
            FitModel::PowerLaw => g.ln(),
            FitModel::LogLaw => g,
        });
    }
    if xs.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientSamples {
            found: xs.len(),
            required: MIN_FIT_SAMPLES,
        });
    }
    let (value, intercept, residual) = linear_fit(&xs, &ys);
    Ok(FitResult {
        value,
        intercept,
        residual,
        samples: xs.len(),
    })
}
