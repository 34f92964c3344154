use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::system::{BathMode, DiscreteBath};

/// Continuum bath described by the spectral function `A w^n exp(-w/w_c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralFunction<T: Real> {
    amplitude: T,
    exponent: T,
    cutoff: T,
}

impl<T: Real> SpectralFunction<T> {
    pub fn new(amplitude: T, exponent: T, cutoff: T) -> Result<Self> {
        let positive = |x: T| x > T::zero() && x.is_finite();
        if !positive(amplitude) {
            return Err(Error::InvalidSpectralFunction(format!(
                "amplitude must be positive, got {amplitude}"
            )));
        }
        if !positive(exponent) {
            return Err(Error::InvalidSpectralFunction(format!(
                "exponent n must be positive, got {exponent}"
            )));
        }
        if !positive(cutoff) {
            return Err(Error::InvalidSpectralFunction(format!(
                "cutoff omega_c must be positive, got {cutoff}"
            )));
        }
        Ok(Self {
            amplitude,
            exponent,
            cutoff,
        })
    }

    /// Ohmic spectrum (`n = 1`).
    pub fn ohmic(amplitude: T, cutoff: T) -> Result<Self> {
        Self::new(amplitude, T::one(), cutoff)
    }

    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    pub fn exponent(&self) -> T {
        self.exponent
    }

    pub fn cutoff(&self) -> T {
        self.cutoff
    }

    #[inline]
    pub(crate) fn weight_unchecked(&self, omega: T) -> T {
        self.amplitude * omega.powf(self.exponent) * (-omega / self.cutoff).exp()
    }
}

/// `A w^n exp(-w/w_c)` for `w > 0`.
pub fn spectral_weight<T: Real>(omega: T, spec: &SpectralFunction<T>) -> Result<T> {
    if !(omega > T::zero()) {
        return Err(Error::NonpositiveOmega {
            omega: omega.as_f64(),
        });
    }
    Ok(spec.weight_unchecked(omega))
}

/// Whether the decoherence function grows without bound (`n < 2`).
pub fn decoherence_complete<T: Real>(spec: &SpectralFunction<T>) -> bool {
    spec.exponent < T::lit(2.0)
}

/// Midpoint discretization of `[0, omega_max]` into `k` equal cells, each mode
/// carrying `|g|^2 = J(w_k) dw` with a real, nonnegative coupling.
pub fn discretize_spectral<T: Real>(
    spec: &SpectralFunction<T>,
    k: usize,
    omega_max: T,
) -> Result<DiscreteBath<T>> {
    if k == 0 {
        return Err(Error::InvalidDiscretization(
            "mode count must be at least 1".into(),
        ));
    }
    if !(omega_max > T::zero() && omega_max.is_finite()) {
        return Err(Error::InvalidDiscretization(format!(
            "omega_max must be positive, got {omega_max}"
        )));
    }
    let k_t = T::from_usize(k).expect("mode count representable");
    let dw = omega_max / k_t;
    let half = T::lit(0.5);
    let modes = (0..k)
        .map(|j| {
            let omega = (T::from_usize(j).expect("index representable") + half) * dw;
            let g = (spec.weight_unchecked(omega) * dw).sqrt();
            BathMode::new(omega, Complex::new(g, T::zero()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiscreteBath::new(modes))
}
