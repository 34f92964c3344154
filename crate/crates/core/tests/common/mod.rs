#![allow(dead_code)]

use dephase::{Complex64, DiscreteBath, SystemSpec};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random full-rank density matrix `A A^dagger / tr`.
pub fn random_density(rng: &mut impl Rng, d: usize) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let rho = &a * a.adjoint();
    let tr = rho.trace();
    let mut rho = rho / tr;
    // Exact Hermiticity after rounding.
    for i in 0..d {
        rho[(i, i)].im = 0.0;
        for j in (i + 1)..d {
            rho[(j, i)] = rho[(i, j)].conj();
        }
    }
    rho
}

pub fn random_system(rng: &mut impl Rng, max_dim: usize) -> SystemSpec {
    let d = rng.random_range(2..=max_dim);
    let energies = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
    let pointers = (0..d).map(|_| rng.random_range(-1.5..1.5)).collect();
    dephase::validate_system(energies, pointers, random_density(rng, d)).unwrap()
}

pub fn random_bath(rng: &mut impl Rng, max_modes: usize) -> DiscreteBath {
    let k = rng.random_range(1..=max_modes);
    DiscreteBath::from_pairs((0..k).map(|_| {
        let omega = rng.random_range(0.2..3.0);
        let g = Complex64::from_polar(
            rng.random_range(0.0..0.8),
            rng.random_range(0.0..std::f64::consts::TAU),
        );
        (omega, g)
    }))
    .unwrap()
}

pub fn random_beta(rng: &mut impl Rng) -> dephase::Temperature {
    if rng.random_bool(0.2) {
        dephase::Temperature::zero_temperature()
    } else {
        dephase::Temperature::new(rng.random_range(0.1..20.0)).unwrap()
    }
}
