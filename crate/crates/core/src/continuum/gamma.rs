//! Continuum decoherence function
//!
//! ```text
//! gamma(t) = 8 int_0^inf A w^(n-2) exp(-w/w_c) sin^2(w t/2) coth(beta w/2) dw
//! ```
//!
//! which is the infinite-mode limit of `gamma_discrete` under
//! `discretize_spectral`.
//!
//! The integral is cut at `L w_c` with `L` chosen from an incomplete-gamma
//! bound on the tail. For short times it is integrated directly with panel
//! breaks every half period `pi/t`. Once the range holds more than
//! `MAX_DIRECT_HALF_PERIODS` half periods, only the first few periods are
//! integrated directly; beyond `a = 8 pi / t` the identity
//! `8 sin^2(x/2) = 4 (1 - cos x)` splits the rest into a smooth integral
//! (done in `ln w`) and a Fourier integral, which is moved onto the vertical
//! lines `Re w = a` and `Re w = b` where `exp(iwt)` decays instead of
//! oscillating. The integrand is analytic for `Re w > 0` (the poles of
//! `coth(beta w/2)` sit on the imaginary axis), so the deformation is exact.

use num_complex::Complex;

use super::quadrature::{integrate, Estimate};
use super::spectral::SpectralFunction;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::system::Temperature;

const MAX_DIRECT_HALF_PERIODS: f64 = 64.0;
/// Half periods integrated directly before switching to the contour form.
const DIRECT_HALF_PERIODS: usize = 8;
const MAX_PANELS: usize = 4000;
/// `exp(-CONTOUR_DEPTH)` is the neglected weight on the vertical contours.
const CONTOUR_DEPTH: f64 = 60.0;

/// `coth(z)` for `Re z > 0`, written through `expm1(-2z)` so it neither
/// overflows for large `Re z` nor cancels for small `|z|`.
fn coth_complex<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.norm() < T::lit(5e-5) {
        return z.inv() + z / T::lit(3.0);
    }
    let w = z * T::lit(-2.0);
    let ex = w.re.exp();
    let (s, c) = w.im.sin_cos();
    let half_sin = (w.im / T::lit(2.0)).sin();
    // expm1(w) = (expm1(x) cos y - 2 sin^2(y/2)) + i e^x sin y
    let em1 = Complex::new(
        w.re.exp_m1() * c - T::lit(2.0) * half_sin * half_sin,
        ex * s,
    );
    -(em1 + T::lit(2.0)) / em1
}

struct Integrand<T: Real> {
    amplitude: T,
    exponent: T,
    cutoff: T,
    beta: Temperature<T>,
}

impl<T: Real> Integrand<T> {
    /// `A w^(n-2) exp(-w/w_c) coth(beta w/2)` on the real axis.
    #[inline]
    fn smooth(&self, w: T) -> T {
        self.amplitude
            * w.powf(self.exponent - T::lit(2.0))
            * (-w / self.cutoff).exp()
            * self.beta.coth_half(w)
    }

    /// The same function continued to `Re z > 0`.
    #[inline]
    fn smooth_complex(&self, z: Complex<T>) -> Complex<T> {
        let coth = if self.beta.is_zero_temperature() {
            Complex::new(T::one(), T::zero())
        } else {
            coth_complex(z * (self.beta.beta() / T::lit(2.0)))
        };
        z.powf(self.exponent - T::lit(2.0)) * (-z / self.cutoff).exp() * coth * self.amplitude
    }

    /// Full integrand `8 smooth(w) sin^2(wt/2)`.
    #[inline]
    fn full(&self, w: T, t: T) -> T {
        let s = (w * t / T::lit(2.0)).sin();
        T::lit(8.0) * self.smooth(w) * s * s
    }
}

/// Upper bound on `Gamma(s, x)` valid for `x >= max(1, 2(s - 1))`.
fn upper_gamma_bound<T: Real>(s: T, x: T) -> T {
    T::lit(2.0) * x.powf(s - T::one()) * (-x).exp()
}

/// Bound on the integral beyond `b = l * w_c`.
fn tail_bound<T: Real>(f: &Integrand<T>, t: T, l: T) -> T {
    let n = f.exponent;
    let wc = f.cutoff;
    let b = l * wc;
    let coth = f.beta.coth_half(b);
    let plain = wc.powf(n - T::one()) * upper_gamma_bound(n - T::one(), l);
    let small_t =
        (t / T::lit(2.0)).powi(2) * wc.powf(n + T::one()) * upper_gamma_bound(n + T::one(), l);
    T::lit(8.0) * f.amplitude * coth * plain.min(small_t)
}

/// Integral of `f.full` over `[0, h]` with `w = h u^r`, which removes the
/// `w^(n-1)` behaviour at the origin for `n < 2`.
fn first_panel<T: Real>(f: &Integrand<T>, t: T, h: T, rel_tol: T) -> (Estimate<T>, bool) {
    let two = T::lit(2.0);
    let r = if f.exponent < two {
        two / f.exponent
    } else {
        T::one()
    };
    let g = |u: T| {
        if u <= T::zero() {
            return T::zero();
        }
        let w = h * u.powf(r);
        if w <= T::zero() {
            return T::zero();
        }
        f.full(w, t) * h * r * u.powf(r - T::one())
    };
    let breaks = [T::zero(), T::lit(0.25), T::lit(0.5), T::one()];
    let out = integrate(g, &breaks, rel_tol, T::zero(), MAX_PANELS);
    (out.estimate, out.converged)
}

/// Direct integration of the full integrand over `[0, upper]` with breaks at
/// every half period.
fn direct<T: Real>(f: &Integrand<T>, t: T, upper: T, rel_tol: T) -> (Estimate<T>, bool) {
    let half_period = T::PI() / t;
    let h = half_period.min(upper);
    let (first, ok_first) = first_panel(f, t, h, rel_tol);
    if h >= upper {
        return (first, ok_first);
    }
    let mut breaks = Vec::new();
    let mut k = 1usize;
    loop {
        let x = T::from_usize(k).expect("panel index") * half_period;
        if x >= upper {
            break;
        }
        breaks.push(x);
        k += 1;
    }
    breaks.push(upper);
    let rest = integrate(
        |w| f.full(w, t),
        &breaks,
        rel_tol,
        T::zero(),
        MAX_PANELS.max(4 * breaks.len()),
    );
    (
        Estimate {
            value: first.value + rest.estimate.value,
            error: first.error + rest.estimate.error,
        },
        ok_first && rest.converged,
    )
}

/// `int_0^inf smooth(x + i y) exp(-y t) dy`, as an integral over `s = y t`.
fn vertical_line<T: Real>(f: &Integrand<T>, x: T, t: T, rel_tol: T) -> (Complex<T>, T, bool) {
    let breaks: Vec<T> = [0.0, 0.5, 2.0, 6.0, 15.0, 30.0, CONTOUR_DEPTH]
        .iter()
        .map(|&v| T::lit(v))
        .collect();
    let eval = |s: T| f.smooth_complex(Complex::new(x, s / t)) * (-s).exp() / t;
    let re = integrate(|s| eval(s).re, &breaks, rel_tol, T::zero(), MAX_PANELS);
    let im = integrate(|s| eval(s).im, &breaks, rel_tol, T::zero(), MAX_PANELS);
    (
        Complex::new(re.estimate.value, im.estimate.value),
        re.estimate.error + im.estimate.error,
        re.converged && im.converged,
    )
}

/// Contour form for many oscillations: returns the integral over `[0, upper]`.
fn contour<T: Real>(f: &Integrand<T>, t: T, upper: T, rel_tol: T) -> (Estimate<T>, bool) {
    let a = T::from_usize(DIRECT_HALF_PERIODS).expect("small integer") * T::PI() / t;
    let (head, ok_head) = direct(f, t, a, rel_tol);

    // 4 int_a^b smooth(w) dw, in the variable u = ln w.
    let (la, lb) = (a.ln(), upper.ln());
    let pieces = ((lb - la) / T::LN_10()).ceil().max(T::one());
    let count = pieces.to_usize().unwrap_or(1).max(1);
    let step = (lb - la) / T::from_usize(count).expect("piece count");
    let mut breaks: Vec<T> = (0..count)
        .map(|j| la + T::from_usize(j).expect("index") * step)
        .collect();
    breaks.push(lb);
    let body = integrate(
        |u: T| {
            let w = u.exp();
            f.smooth(w) * w
        },
        &breaks,
        rel_tol,
        T::zero(),
        MAX_PANELS,
    );

    // -4 Re int_a^b smooth(w) e^{iwt} dw = 4 Im(e^{iat} C(a) - e^{ibt} C(b)).
    let (ca, ea, ok_a) = vertical_line(f, a, t, rel_tol);
    let (cb, eb, ok_b) = vertical_line(f, upper, t, rel_tol);
    let phase = |x: T| Complex::from_polar(T::one(), x * t);
    let fourier = (phase(a) * ca - phase(upper) * cb).im;

    let four = T::lit(4.0);
    let value = head.value + four * body.estimate.value + four * fourier;
    let error = head.error + four * (body.estimate.error + ea + eb);
    (
        Estimate { value, error },
        ok_head && body.converged && ok_a && ok_b,
    )
}

/// Continuum decoherence function at time `t` to relative tolerance `tol`.
pub fn gamma_continuum<T: Real>(
    spec: &SpectralFunction<T>,
    beta: Temperature<T>,
    t: T,
    tol: T,
) -> Result<Estimate<T>> {
    if !(t >= T::zero() && t.is_finite()) {
        return Err(Error::NegativeTime { t: t.as_f64() });
    }
    if !(tol > T::zero() && tol.is_finite()) {
        return Err(Error::InvalidTolerance { tol: tol.as_f64() });
    }
    if t == T::zero() {
        return Ok(Estimate {
            value: T::zero(),
            error: T::zero(),
        });
    }
    let f = Integrand {
        amplitude: spec.amplitude(),
        exponent: spec.exponent(),
        cutoff: spec.cutoff(),
        beta,
    };
    let n = spec.exponent();
    let mut l = T::lit(40.0).max(T::lit(2.0) * (n + T::one()) + T::lit(10.0));

    let mut last = None;
    for attempt in 0..4 {
        let piece_tol = tol / T::lit(8.0) * T::lit(1e-3).powi(attempt.min(2));
        let upper = l * spec.cutoff();
        let half_periods = upper * t / T::PI();
        let (est, converged) = if half_periods <= T::lit(MAX_DIRECT_HALF_PERIODS) {
            direct(&f, t, upper, piece_tol)
        } else {
            contour(&f, t, upper, piece_tol)
        };
        let tail = tail_bound(&f, t, l);
        let error = est.error + tail;
        let est = Estimate {
            value: est.value,
            error,
        };
        // Pieces that nearly cancel cannot meet their own relative target;
        // the summed error estimate is what decides.
        if (converged || attempt > 0) && error <= tol * est.value.abs() {
            return Ok(est);
        }
        if tail > tol * est.value.abs() / T::lit(10.0) {
            l = l + T::lit(20.0);
        }
        last = Some(est);
    }
    let est = last.expect("at least one attempt");
    Err(Error::QuadratureNonconvergence {
        estimate: est.value.as_f64(),
        error: est.error.as_f64(),
    })
}
