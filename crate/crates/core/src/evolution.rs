//! Closed-form evolution of the reduced density matrix for a discrete bath.
//!
//! Every off-diagonal element picks up the free phase `exp(i(E_n - E_m)t)`
//! and one factor per bath mode,
//!
//! ```text
//! S_mn,k = exp(-|g_k|^2 / w_k^2 * P_mn,k)
//! P_mn,k = 2 (l_m - l_n)^2 sin^2(w_k t / 2) coth(beta w_k / 2)
//!        + i (l_m^2 - l_n^2) (sin(w_k t) - w_k t)
//! ```
//!
//! where `l` are the pointer eigenvalues. With the renormalization counter-term
//! `Lambda^2 sum_k |g_k|^2 / w_k` in the Hamiltonian, the `- w_k t` in the
//! imaginary part drops out. Diagonal elements never change.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{pairwise_sum, Real};
use crate::system::{BathMode, DensityMatrix, DiscreteBath, SystemSpec, Temperature};

fn check_time<T: Real>(t: T) -> Result<()> {
    if t >= T::zero() && t.is_finite() {
        Ok(())
    } else {
        Err(Error::NegativeTime { t: t.as_f64() })
    }
}

/// Decoupled evolution: `rho_mn(t) = rho_mn(0) exp(i(E_n - E_m)t)`. Negative
/// times are allowed.
pub fn free_evolution<T: Real>(system: &SystemSpec<T>, t: T) -> DensityMatrix<T> {
    let e = system.energies();
    let rho0 = system.rho0().entries();
    let d = system.dim();
    let entries = DMatrix::from_fn(d, d, |m, n| {
        if m == n {
            rho0[(m, n)]
        } else {
            rho0[(m, n)] * Complex::from_polar(T::one(), (e[n] - e[m]) * t)
        }
    });
    DensityMatrix::from_entries_unchecked(entries)
}

/// The per-mode exponent `P_mn,k` (without the `|g|^2/w^2` prefactor).
pub fn p_factor<T: Real>(
    lambda_m: T,
    lambda_n: T,
    mode: &BathMode<T>,
    beta: Temperature<T>,
    t: T,
    renormalize: bool,
) -> Result<Complex<T>> {
    check_time(t)?;
    let omega = mode.omega();
    if !(omega > T::zero()) {
        return Err(Error::NonpositiveOmega {
            omega: omega.as_f64(),
        });
    }
    let two = T::lit(2.0);
    let wt = omega * t;
    let half_sin = (wt / two).sin();
    let dl = lambda_m - lambda_n;
    let re = two * dl * dl * half_sin * half_sin * beta.coth_half(omega);
    let sq = lambda_m * lambda_m - lambda_n * lambda_n;
    let im = if renormalize {
        sq * wt.sin()
    } else {
        sq * (wt.sin() - wt)
    };
    Ok(Complex::new(re, im))
}

/// Applies the underflow policy: exponents with real part below the type's
/// underflow threshold give exactly zero.
#[inline]
fn exp_or_zero<T: Real>(exponent: Complex<T>) -> Complex<T> {
    if exponent.re < T::lit(T::EXP_UNDERFLOW) {
        Complex::new(T::zero(), T::zero())
    } else {
        exponent.exp()
    }
}

/// The per-mode decoherence factor `S_mn,k = exp(-|g|^2/w^2 P_mn,k)`.
pub fn s_factor<T: Real>(
    lambda_m: T,
    lambda_n: T,
    mode: &BathMode<T>,
    beta: Temperature<T>,
    t: T,
    renormalize: bool,
) -> Result<Complex<T>> {
    let p = p_factor(lambda_m, lambda_n, mode, beta, t, renormalize)?;
    Ok(exp_or_zero(-p * mode.coupling_weight()))
}

/// Exact reduced density matrix at time `t >= 0`.
///
/// The mode factors are combined in the exponent, so the product over modes
/// is one complex exponential per element.
pub fn reduced_density_matrix<T: Real>(
    system: &SystemSpec<T>,
    bath: &DiscreteBath<T>,
    beta: Temperature<T>,
    t: T,
    renormalize: bool,
) -> Result<DensityMatrix<T>> {
    check_time(t)?;
    let d = system.dim();
    let e = system.energies();
    let lambda = system.pointer_values();
    let rho0 = system.rho0().entries();
    let mut out = rho0.clone();

    let mut exps = Vec::with_capacity(bath.len());
    for m in 0..d {
        for n in (m + 1)..d {
            exps.clear();
            for mode in bath.modes() {
                let p = p_factor(lambda[m], lambda[n], mode, beta, t, renormalize)?;
                exps.push(-p * mode.coupling_weight());
            }
            let re: Vec<T> = exps.iter().map(|z| z.re).collect();
            let im: Vec<T> = exps.iter().map(|z| z.im).collect();
            let exponent = Complex::new(pairwise_sum(&re), pairwise_sum(&im) + (e[n] - e[m]) * t);
            let value = rho0[(m, n)] * exp_or_zero(exponent);
            out[(m, n)] = value;
            out[(n, m)] = value.conj();
        }
    }
    let rho = DensityMatrix::from_entries_unchecked(out);
    debug_assert!((rho.trace().re - T::one()).abs() <= T::tolerance(1e-10));
    Ok(rho)
}

/// Decoherence function of a discrete bath,
/// `8 sum_k |g_k|^2/w_k^2 sin^2(w_k t/2) coth(beta w_k/2)`, so that
/// `|rho_mn(t)| = |rho_mn(0)| exp(-(l_m - l_n)^2 gamma / 4)`.
pub fn gamma_discrete<T: Real>(bath: &DiscreteBath<T>, beta: Temperature<T>, t: T) -> Result<T> {
    check_time(t)?;
    let half = T::lit(0.5);
    let terms: Vec<T> = bath
        .modes()
        .iter()
        .map(|mode| {
            let s = (mode.omega() * t * half).sin();
            mode.coupling_weight() * s * s * beta.coth_half(mode.omega())
        })
        .collect();
    Ok(T::lit(8.0) * pairwise_sum(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::validate_system;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus_system(energies: [f64; 2], lambdas: [f64; 2]) -> SystemSpec<f64> {
        let rho = DMatrix::from_element(2, 2, c(0.5, 0.0));
        validate_system(energies.to_vec(), lambdas.to_vec(), rho).unwrap()
    }

    fn mode(omega: f64, g: f64) -> BathMode<f64> {
        BathMode::new(omega, c(g, 0.0)).unwrap()
    }

    #[test]
    fn free_evolution_half_period_flips_coherence() {
        let sys = plus_system([0.0, 1.0], [0.0, 1.0]);
        let rho = free_evolution(&sys, PI);
        assert!((rho.get(0, 1) - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((rho.get(1, 0) - c(-0.5, 0.0)).norm() < 1e-15);
        assert_eq!(rho.get(0, 0), c(0.5, 0.0));
    }

    #[test]
    fn free_evolution_identity_cases() {
        let sys = plus_system([0.0, 1.0], [0.0, 1.0]);
        assert_eq!(free_evolution(&sys, 0.0), *sys.rho0());
        let degenerate = plus_system([0.0, 0.0], [0.0, 1.0]);
        assert_eq!(free_evolution(&degenerate, 17.3), *degenerate.rho0());
        assert_eq!(free_evolution(&degenerate, -4.0), *degenerate.rho0());
    }

    #[test]
    fn p_factor_vanishes_for_equal_pointer_values_and_at_zero_time() {
        let beta = Temperature::new(2.0).unwrap();
        let m = mode(1.3, 0.5);
        assert_eq!(
            p_factor(0.7, 0.7, &m, beta, 3.1, false).unwrap(),
            c(0.0, 0.0)
        );
        assert_eq!(
            p_factor(1.0, -0.2, &m, beta, 0.0, false).unwrap(),
            c(0.0, 0.0)
        );
        assert_eq!(
            p_factor(1.0, -0.2, &m, beta, 0.0, true).unwrap(),
            c(0.0, 0.0)
        );
    }

    #[test]
    fn p_factor_reference_value() {
        let beta = Temperature::new(2.0).unwrap();
        let p = p_factor(1.0, 0.0, &mode(1.0, 1.0), beta, PI, false).unwrap();
        let coth1 = 1.0 / 1.0_f64.tanh();
        assert!((p.re - 2.0 * coth1).abs() < 1e-14);
        assert!((p.re - 2.626_070_570_998_662).abs() < 1e-12);
        assert!((p.im + PI).abs() < 1e-14);
        let pr = p_factor(1.0, 0.0, &mode(1.0, 1.0), beta, PI, true).unwrap();
        assert_eq!(pr.re, p.re);
        assert!(pr.im.abs() < 1e-15);
    }

    #[test]
    fn p_factor_zero_temperature_uses_unit_coth() {
        let p = p_factor(
            1.0,
            0.0,
            &mode(1.0, 1.0),
            Temperature::zero_temperature(),
            PI,
            false,
        )
        .unwrap();
        assert!((p.re - 2.0).abs() < 1e-15);
    }

    #[test]
    fn p_factor_rejects_negative_time() {
        let beta = Temperature::new(2.0).unwrap();
        assert!(matches!(
            p_factor(1.0, 0.0, &mode(1.0, 1.0), beta, -0.1, false),
            Err(Error::NegativeTime { .. })
        ));
    }

    #[test]
    fn s_factor_trivial_cases() {
        let beta = Temperature::new(2.0).unwrap();
        assert_eq!(
            s_factor(1.0, 0.0, &mode(1.0, 0.0), beta, 2.0, false).unwrap(),
            c(1.0, 0.0)
        );
        assert_eq!(
            s_factor(0.3, 0.3, &mode(1.0, 0.9), beta, 2.0, false).unwrap(),
            c(1.0, 0.0)
        );
        // sin(wt/2) = 0 at a full period: magnitude returns to one.
        let s = s_factor(1.0, 0.0, &mode(1.0, 0.9), beta, 2.0 * PI, true).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn s_factor_composes_p_factor() {
        let beta = Temperature::new(2.0).unwrap();
        let s = s_factor(1.0, 0.0, &mode(1.0, 1.0), beta, PI, false).unwrap();
        let expected = (-c(2.0 / 1.0_f64.tanh(), -PI)).exp();
        assert!((s - expected).norm() < 1e-15);
    }

    #[test]
    fn s_factor_underflow_gives_exact_zero() {
        let beta = Temperature::new(1e-3).unwrap();
        let s = s_factor(10.0, -10.0, &mode(1.0, 5.0), beta, PI, false).unwrap();
        assert_eq!(s, c(0.0, 0.0));
    }

    #[test]
    fn empty_bath_is_free_evolution() {
        let sys = plus_system([0.0, 1.0], [0.0, 1.0]);
        let beta = Temperature::new(1.0).unwrap();
        for t in [0.0, 0.4, 2.5] {
            let rho =
                reduced_density_matrix(&sys, &DiscreteBath::default(), beta, t, false).unwrap();
            assert!(rho.max_abs_diff(&free_evolution(&sys, t)) < 1e-15);
        }
    }

    #[test]
    fn degenerate_pointer_values_do_not_decohere() {
        let sys = plus_system([0.0, 2.0], [1.0, 1.0]);
        let bath = DiscreteBath::from_pairs([(1.0, c(0.8, 0.1)), (0.3, c(0.2, -0.5))]).unwrap();
        let beta = Temperature::new(0.5).unwrap();
        for t in [0.0, 0.3, 1.0, 7.0, 40.0] {
            let rho = reduced_density_matrix(&sys, &bath, beta, t, false).unwrap();
            assert!(rho.max_abs_diff(&free_evolution(&sys, t)) < 1e-13);
        }
    }

    #[test]
    fn reduced_rejects_negative_time() {
        let sys = plus_system([0.0, 1.0], [0.0, 1.0]);
        let beta = Temperature::new(1.0).unwrap();
        assert!(reduced_density_matrix(&sys, &DiscreteBath::default(), beta, -1.0, false).is_err());
    }

    #[test]
    fn gamma_discrete_reference_values() {
        let bath = DiscreteBath::from_pairs([(1.0, c(1.0, 0.0))]).unwrap();
        let zero_t = Temperature::zero_temperature();
        assert_eq!(gamma_discrete(&bath, zero_t, 0.0).unwrap(), 0.0);
        assert!((gamma_discrete(&bath, zero_t, PI).unwrap() - 8.0).abs() < 1e-14);
        assert_eq!(
            gamma_discrete(&DiscreteBath::default(), zero_t, 3.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn single_precision_path_agrees_with_double() {
        let rho32 = DMatrix::from_element(2, 2, Complex::new(0.5_f32, 0.0));
        let sys32 = validate_system(vec![0.0_f32, 1.0], vec![0.0, 1.0], rho32).unwrap();
        let bath32 = DiscreteBath::from_pairs([(1.0_f32, Complex::new(0.4, 0.0))]).unwrap();
        let r32 = reduced_density_matrix(
            &sys32,
            &bath32,
            Temperature::new(2.0_f32).unwrap(),
            1.5,
            false,
        )
        .unwrap();

        let sys = plus_system([0.0, 1.0], [0.0, 1.0]);
        let bath = DiscreteBath::from_pairs([(1.0, c(0.4, 0.0))]).unwrap();
        let r64 = reduced_density_matrix(&sys, &bath, Temperature::new(2.0).unwrap(), 1.5, false)
            .unwrap();
        let z32 = r32.get(0, 1);
        assert!((f64::from(z32.re) - r64.get(0, 1).re).abs() < 1e-6);
        assert!((f64::from(z32.im) - r64.get(0, 1).im).abs() < 1e-6);
    }
}
