//! Domain types: the quantum system in its preferred basis, the discrete
//! bosonic bath, and the bath temperature.

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};

use crate::error::{Error, Result};
use crate::scalar::{coth, Real};

/// Absolute tolerance on Hermiticity and on the trace.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Allowed negative excursion of the smallest eigenvalue.
pub const PSD_TOL: f64 = 1e-10;

/// A Hermitian, unit-trace, positive-semidefinite matrix in the preferred basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    entries: DMatrix<Complex<T>>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates `entries` against every density-matrix invariant.
    pub fn new(entries: DMatrix<Complex<T>>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                what: "density matrix columns",
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        let rho = Self { entries };
        rho.check_hermitian()?;
        rho.check_trace()?;
        rho.check_positive_semidefinite()?;
        Ok(rho)
    }

    /// Builds a matrix the caller guarantees to be valid (closed-form outputs).
    pub(crate) fn from_entries_unchecked(entries: DMatrix<Complex<T>>) -> Self {
        Self { entries }
    }

    /// Builds `rows` into a matrix and validates it.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let d = rows.len();
        for row in rows {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    what: "density matrix row length",
                    expected: d,
                    found: row.len(),
                });
            }
        }
        Self::new(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
    }

    /// `|psi><psi|` for a normalized state vector.
    pub fn pure(psi: &[Complex<T>]) -> Result<Self> {
        let d = psi.len();
        Self::new(DMatrix::from_fn(d, d, |i, j| psi[i] * psi[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex<T>> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex<T>> {
        self.entries
    }

    #[inline]
    pub fn get(&self, m: usize, n: usize) -> Complex<T> {
        self.entries[(m, n)]
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim()).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
            acc + self.entries[(i, i)]
        })
    }

    /// Smallest eigenvalue, computed in double precision.
    pub fn min_eigenvalue(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        let m: DMatrix<Complex64> = self
            .entries
            .map(|z| Complex64::new(z.re.as_f64(), z.im.as_f64()));
        m.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest element-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(
            self.dim(),
            other.dim(),
            "dimension mismatch in max_abs_diff"
        );
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    fn check_hermitian(&self) -> Result<()> {
        let tol = T::tolerance(HERMITIAN_TOL);
        let d = self.dim();
        for i in 0..d {
            for j in i..d {
                let dev = (self.entries[(i, j)] - self.entries[(j, i)].conj()).norm();
                if !(dev <= tol) {
                    return Err(Error::NotHermitian {
                        row: i,
                        col: j,
                        deviation: dev.as_f64(),
                    });
                }
            }
        }
        Ok(())
    }

    fn check_trace(&self) -> Result<()> {
        let tr = self.trace();
        let tol = T::tolerance(HERMITIAN_TOL);
        if !((tr.re - T::one()).abs() <= tol && tr.im.abs() <= tol) {
            return Err(Error::TraceNotOne {
                trace: tr.re.as_f64(),
            });
        }
        Ok(())
    }

    fn check_positive_semidefinite(&self) -> Result<()> {
        let min = self.min_eigenvalue();
        if !(min >= -T::tolerance(PSD_TOL).as_f64()) {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min,
            });
        }
        Ok(())
    }
}

/// The system, stored only through the eigenvalues of its Hamiltonian and of
/// the pointer observable in their common eigenbasis, plus the initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec<T: Real> {
    energies: Vec<T>,
    pointer_values: Vec<T>,
    rho0: DensityMatrix<T>,
}

impl<T: Real> SystemSpec<T> {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[T] {
        &self.energies
    }

    pub fn pointer_values(&self) -> &[T] {
        &self.pointer_values
    }

    pub fn rho0(&self) -> &DensityMatrix<T> {
        &self.rho0
    }
}

/// Checks dimensions and density-matrix invariants and assembles a [`SystemSpec`].
pub fn validate_system<T: Real>(
    energies: Vec<T>,
    pointer_values: Vec<T>,
    rho0: DMatrix<Complex<T>>,
) -> Result<SystemSpec<T>> {
    let d = energies.len();
    if d == 0 {
        return Err(Error::DimensionMismatch {
            what: "system dimension (must be at least 1)",
            expected: 1,
            found: 0,
        });
    }
    if pointer_values.len() != d {
        return Err(Error::DimensionMismatch {
            what: "pointer_values length",
            expected: d,
            found: pointer_values.len(),
        });
    }
    if rho0.nrows() != d || rho0.ncols() != d {
        return Err(Error::DimensionMismatch {
            what: "rho0 dimension",
            expected: d,
            found: if rho0.nrows() != d {
                rho0.nrows()
            } else {
                rho0.ncols()
            },
        });
    }
    let rho0 = DensityMatrix::new(rho0)?;
    Ok(SystemSpec {
        energies,
        pointer_values,
        rho0,
    })
}

/// One bath oscillator: frequency `omega > 0` and complex coupling `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathMode<T: Real> {
    omega: T,
    g: Complex<T>,
}

impl<T: Real> BathMode<T> {
    pub fn new(omega: T, g: Complex<T>) -> Result<Self> {
        if !(omega > T::zero() && omega.is_finite()) {
            return Err(Error::NonpositiveOmega {
                omega: omega.as_f64(),
            });
        }
        Ok(Self { omega, g })
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn g(&self) -> Complex<T> {
        self.g
    }

    /// `|g|^2 / omega^2`, the weight of this mode in every decoherence factor.
    #[inline]
    pub fn coupling_weight(&self) -> T {
        self.g.norm_sqr() / (self.omega * self.omega)
    }
}

/// A finite collection of independent bath modes; empty means free evolution.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiscreteBath<T: Real> {
    modes: Vec<BathMode<T>>,
}

impl<T: Real> DiscreteBath<T> {
    pub fn new(modes: Vec<BathMode<T>>) -> Self {
        Self { modes }
    }

    /// Builds and validates modes from `(omega, g)` pairs.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, Complex<T>)>,
    {
        let modes = pairs
            .into_iter()
            .map(|(omega, g)| BathMode::new(omega, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { modes })
    }

    pub fn modes(&self) -> &[BathMode<T>] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }
}

/// Inverse temperature `beta = 1/(kT)`; `+inf` is zero temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Temperature<T: Real> {
    beta: T,
}

impl<T: Real> Temperature<T> {
    pub fn new(beta: T) -> Result<Self> {
        if beta.is_nan() || beta <= T::zero() {
            return Err(Error::InvalidTemperature {
                beta: beta.as_f64(),
            });
        }
        Ok(Self { beta })
    }

    pub fn zero_temperature() -> Self {
        Self {
            beta: T::infinity(),
        }
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.beta.is_infinite()
    }

    /// `coth(beta * omega / 2)`, exactly 1 at zero temperature.
    #[inline]
    pub fn coth_half(&self, omega: T) -> T {
        if self.is_zero_temperature() {
            T::one()
        } else {
            coth(self.beta * omega / T::lit(2.0))
        }
    }
}
