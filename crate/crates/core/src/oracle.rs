//! Brute-force reference for the closed form: the full system-plus-bath
//! Hamiltonian on a truncated Fock space, evolved exactly by Hermitian
//! eigendecomposition, with the bath traced out afterwards.
//!
//! Basis ordering is fixed: the system index is the most significant digit,
//! followed by the modes in input order (mode 0 next most significant). A
//! basis state `|s; n_0, ..., n_{K-1}>` therefore has flat index
//! `s * N_B + ((n_0 * N_1 + n_1) * N_2 + ...)`, with `N_B = prod N_k`.
//!
//! The oracle evolves the closed system-plus-bath unitarily from the product
//! of the system state and thermal mode states. No rethermalization of the
//! bath is applied, and none is needed: the closed form describes exactly
//! this evolution.
//!
//! This path works in `f64` only.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolution::reduced_density_matrix;
use crate::system::{BathMode, DensityMatrix, DiscreteBath, SystemSpec, Temperature};

/// Default cap on the total Hilbert-space dimension `d * prod N_k`.
pub const DEFAULT_BUDGET: usize = 4096;

const HERMITIAN_TOL: f64 = 1e-12;

/// Fock-space truncation: levels `0..N_k` are kept for mode `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationSpec {
    levels_per_mode: Vec<usize>,
    convergence_tol: f64,
    budget: usize,
}

impl TruncationSpec {
    pub fn new(levels_per_mode: Vec<usize>, convergence_tol: f64, budget: usize) -> Result<Self> {
        if let Some(&n) = levels_per_mode.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidTruncation(format!(
                "each mode needs at least 2 levels, got {n}"
            )));
        }
        if !(convergence_tol > 0.0 && convergence_tol.is_finite()) {
            return Err(Error::InvalidTolerance {
                tol: convergence_tol,
            });
        }
        if budget == 0 {
            return Err(Error::InvalidTruncation("budget must be positive".into()));
        }
        Ok(Self {
            levels_per_mode,
            convergence_tol,
            budget,
        })
    }

    /// Same number of levels for each of `modes` modes.
    pub fn uniform(
        modes: usize,
        levels: usize,
        convergence_tol: f64,
        budget: usize,
    ) -> Result<Self> {
        Self::new(vec![levels; modes], convergence_tol, budget)
    }

    pub fn levels_per_mode(&self) -> &[usize] {
        &self.levels_per_mode
    }

    pub fn convergence_tol(&self) -> f64 {
        self.convergence_tol
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Dimension of the truncated bath space, `prod N_k` (saturating).
    pub fn bath_dim(&self) -> usize {
        self.levels_per_mode
            .iter()
            .fold(1usize, |acc, &n| acc.saturating_mul(n))
    }

    /// Total dimension for a system of dimension `d`, checked against the budget.
    pub fn total_dim(&self, d: usize) -> Result<usize> {
        let dim = d.saturating_mul(self.bath_dim());
        if dim > self.budget {
            return Err(Error::DimensionBudgetExceeded {
                dimension: dim,
                budget: self.budget,
                best_delta: None,
            });
        }
        Ok(dim)
    }
}

/// A Hermitian matrix with a descriptive label.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: DMatrix<Complex64>,
    label: String,
}

impl HermitianOperator {
    pub fn new(matrix: DMatrix<Complex64>, label: impl Into<String>) -> Result<Self> {
        let dev = hermiticity_deviation(&matrix);
        if !(dev <= HERMITIAN_TOL) {
            let (row, col) = worst_hermitian_pair(&matrix);
            return Err(Error::NotHermitian {
                row,
                col,
                deviation: dev,
            });
        }
        Ok(Self {
            matrix,
            label: label.into(),
        })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

fn hermiticity_deviation(m: &DMatrix<Complex64>) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let mut worst = 0.0_f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn worst_hermitian_pair(m: &DMatrix<Complex64>) -> (usize, usize) {
    let mut best = (0, 0, -1.0);
    for i in 0..m.nrows() {
        for j in i..m.ncols().min(m.nrows()) {
            let dev = (m[(i, j)] - m[(j, i)].conj()).norm();
            if dev > best.2 {
                best = (i, j, dev);
            }
        }
    }
    (best.0, best.1)
}

/// Truncated lowering operator, `a|j> = sqrt(j)|j-1>`.
pub fn lowering_operator(levels: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(levels, levels);
    for j in 1..levels {
        a[(j - 1, j)] = Complex64::new((j as f64).sqrt(), 0.0);
    }
    a
}

/// Thermal state of one oscillator restricted to `levels` Fock states and
/// renormalized over them.
pub fn thermal_mode_state(
    mode: &BathMode<f64>,
    beta: Temperature<f64>,
    levels: usize,
) -> Result<DensityMatrix<f64>> {
    if levels < 2 {
        return Err(Error::InvalidTruncation(format!(
            "need at least 2 levels, got {levels}"
        )));
    }
    Ok(DensityMatrix::from_entries_unchecked(
        DMatrix::from_diagonal(&DVector::from_vec(
            thermal_populations(mode.omega(), beta, levels)
                .into_iter()
                .map(|p| Complex64::new(p, 0.0))
                .collect(),
        )),
    ))
}

fn thermal_populations(omega: f64, beta: Temperature<f64>, levels: usize) -> Vec<f64> {
    if beta.is_zero_temperature() {
        let mut p = vec![0.0; levels];
        p[0] = 1.0;
        return p;
    }
    let x = (-beta.beta() * omega).exp();
    let mut p = Vec::with_capacity(levels);
    let mut w = 1.0;
    for _ in 0..levels {
        p.push(w);
        w *= x;
    }
    let z: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= z);
    p
}

/// Digits of a bath index in the mixed-radix basis (mode 0 most significant).
fn bath_digits(mut index: usize, levels: &[usize], digits: &mut [usize]) {
    for k in (0..levels.len()).rev() {
        digits[k] = index % levels[k];
        index /= levels[k];
    }
}

/// `diag(E) (x) 1 + 1 (x) sum_k w_k a_k^+ a_k + diag(l) (x) sum_k (g_k^* a_k + g_k a_k^+)`,
/// plus `diag(l^2) (x) sum_k |g_k|^2 / w_k` when `renormalize` is set.
pub fn build_total_hamiltonian(
    system: &SystemSpec<f64>,
    bath: &DiscreteBath<f64>,
    trunc: &TruncationSpec,
    renormalize: bool,
) -> Result<HermitianOperator> {
    let levels = trunc.levels_per_mode();
    if levels.len() != bath.len() {
        return Err(Error::DimensionMismatch {
            what: "truncation levels per bath mode",
            expected: bath.len(),
            found: levels.len(),
        });
    }
    let d = system.dim();
    let dim = trunc.total_dim(d)?;
    let nb = trunc.bath_dim();
    let k = bath.len();

    // Stride of mode k in the bath index.
    let mut stride = vec![1usize; k];
    for j in (0..k.saturating_sub(1)).rev() {
        stride[j] = stride[j + 1] * levels[j + 1];
    }
    let counter_term: f64 = bath
        .modes()
        .iter()
        .map(|m| m.g().norm_sqr() / m.omega())
        .sum();

    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    let mut digits = vec![0usize; k];
    for s in 0..d {
        let e = system.energies()[s];
        let lambda = system.pointer_values()[s];
        for b in 0..nb {
            bath_digits(b, levels, &mut digits);
            let row = s * nb + b;
            let mut diag = e;
            for (j, mode) in bath.modes().iter().enumerate() {
                diag += mode.omega() * digits[j] as f64;
            }
            if renormalize {
                diag += lambda * lambda * counter_term;
            }
            h[(row, row)] += Complex64::new(diag, 0.0);
            // lambda g_k a_k^+ raises n_k; its adjoint fills the mirror entry.
            for (j, mode) in bath.modes().iter().enumerate() {
                let n = digits[j];
                if n + 1 < levels[j] {
                    let up = row + stride[j];
                    let amp = mode.g() * (lambda * ((n + 1) as f64).sqrt());
                    h[(up, row)] += amp;
                    h[(row, up)] += amp.conj();
                }
            }
        }
    }
    HermitianOperator::new(
        h,
        if renormalize {
            "H_S + H_B + H_I + H_R"
        } else {
            "H_S + H_B + H_I"
        },
    )
}

/// `diag(E) (x) 1_B`, the system Hamiltonian embedded in the total space.
pub fn embedded_system_hamiltonian(
    system: &SystemSpec<f64>,
    trunc: &TruncationSpec,
) -> Result<HermitianOperator> {
    let d = system.dim();
    let dim = trunc.total_dim(d)?;
    let nb = trunc.bath_dim();
    let diag = DVector::from_fn(dim, |i, _| Complex64::new(system.energies()[i / nb], 0.0));
    HermitianOperator::new(DMatrix::from_diagonal(&diag), "H_S (x) 1")
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &HermitianOperator, b: &HermitianOperator) -> DMatrix<Complex64> {
    a.matrix() * b.matrix() - b.matrix() * a.matrix()
}

/// Spectral decomposition `H = V diag(eps) V^+`, reused across time points.
#[derive(Debug, Clone)]
pub struct Propagator {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl Propagator {
    pub fn new(h: &HermitianOperator) -> Result<Self> {
        Self::from_matrix(h.matrix().clone())
    }

    fn from_matrix(h: DMatrix<Complex64>) -> Result<Self> {
        let dim = h.nrows();
        let eig = nalgebra::SymmetricEigen::try_new(h, 1e-15, 100_000)
            .ok_or(Error::EigendecompositionFailure { dimension: dim })?;
        Ok(Self {
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    fn phases(&self, t: f64) -> Vec<Complex64> {
        self.eigenvalues
            .iter()
            .map(|&e| Complex64::from_polar(1.0, -e * t))
            .collect()
    }

    /// `U(t) = exp(-iHt) = V diag(exp(-i eps t)) V^+`.
    pub fn unitary(&self, t: f64) -> DMatrix<Complex64> {
        let p = self.phases(t);
        let mut vp = self.eigenvectors.clone();
        for (j, mut col) in vp.column_iter_mut().enumerate() {
            col *= p[j];
        }
        vp * self.eigenvectors.adjoint()
    }
}

/// Diagonal of `prod_k theta_k` in the bath basis.
fn bath_weights(
    bath: &DiscreteBath<f64>,
    beta: Temperature<f64>,
    trunc: &TruncationSpec,
) -> Vec<f64> {
    let levels = trunc.levels_per_mode();
    let pops: Vec<Vec<f64>> = bath
        .modes()
        .iter()
        .zip(levels)
        .map(|(m, &n)| thermal_populations(m.omega(), beta, n))
        .collect();
    let mut digits = vec![0usize; levels.len()];
    (0..trunc.bath_dim())
        .map(|b| {
            bath_digits(b, levels, &mut digits);
            digits
                .iter()
                .enumerate()
                .map(|(k, &n)| pops[k][n])
                .product()
        })
        .collect()
}

/// Initial state `rho0 (x) prod_k theta_k` in the total space.
fn initial_total_state(system: &SystemSpec<f64>, theta: &[f64]) -> DMatrix<Complex64> {
    let d = system.dim();
    let nb = theta.len();
    let rho0 = system.rho0().entries();
    let mut rho = DMatrix::zeros(d * nb, d * nb);
    for s in 0..d {
        for s2 in 0..d {
            let r = rho0[(s, s2)];
            if r == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (b, &w) in theta.iter().enumerate() {
                rho[(s * nb + b, s2 * nb + b)] = r * w;
            }
        }
    }
    rho
}

/// The diagonal blocks of `h` per system state, or `None` if `h` couples
/// different system states.
fn system_blocks(h: &DMatrix<Complex64>, d: usize, nb: usize) -> Option<Vec<DMatrix<Complex64>>> {
    for s in 0..d {
        for s2 in 0..d {
            if s != s2
                && h.view((s * nb, s2 * nb), (nb, nb))
                    .iter()
                    .any(|z| *z != Complex64::new(0.0, 0.0))
            {
                return None;
            }
        }
    }
    Some(
        (0..d)
            .map(|s| h.view((s * nb, s * nb), (nb, nb)).into_owned())
            .collect(),
    )
}

/// `a b` through four real products, which use the blocked `f64` kernel.
fn complex_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (ar, ai) = (a.map(|z| z.re), a.map(|z| z.im));
    let (br, bi) = (b.map(|z| z.re), b.map(|z| z.im));
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    re.zip_map(&im, Complex64::new)
}

/// `sum_ij p_i conj(p'_j) q_ij`.
fn phase_sum(q: &DMatrix<Complex64>, p: &[Complex64], p2: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, col) in q.column_iter().enumerate() {
        let mut inner = Complex64::new(0.0, 0.0);
        for (i, z) in col.iter().enumerate() {
            inner += p[i] * z;
        }
        acc += inner * p2[j].conj();
    }
    acc
}

/// Evolution through one eigendecomposition of the whole space; valid for
/// any Hermitian `h`.
///
/// `rho_total(t) = V X(t) V^+` with `X_ij(t) = W_ij exp(-i(eps_i - eps_j)t)`
/// and `W = V^+ rho_total(0) V`. Tracing the bath,
/// `rho_mn(t) = sum_ij X_ij(t) M^{mn}_ji` with `M^{mn} = V_n^+ V_m`, where
/// `V_m` holds the rows of `V` belonging to system state `m`.
fn evolve_dense(
    h: &HermitianOperator,
    system: &SystemSpec<f64>,
    theta: &[f64],
    times: &[f64],
) -> Result<Vec<DMatrix<Complex64>>> {
    let d = system.dim();
    let nb = theta.len();
    let dim = h.dim();
    let prop = Propagator::new(h)?;
    let v = &prop.eigenvectors;
    let w = v.adjoint() * initial_total_state(system, theta) * v;
    let phases: Vec<Vec<Complex64>> = times.iter().map(|&t| prop.phases(t)).collect();
    let mut out = vec![DMatrix::<Complex64>::zeros(d, d); times.len()];
    for m in 0..d {
        let vm = v.rows(m * nb, nb);
        for n in 0..d {
            let vn = v.rows(n * nb, nb);
            let mmn = vn.adjoint() * vm;
            let q = DMatrix::from_fn(dim, dim, |i, j| w[(i, j)] * mmn[(j, i)]);
            for (ti, p) in phases.iter().enumerate() {
                out[ti][(m, n)] = phase_sum(&q, p, p);
            }
        }
    }
    Ok(out)
}

/// Evolves `rho0 (x) prod_k theta_k` under `h` and partial-traces the bath,
/// for every time in `times` (all `>= 0`), from one eigendecomposition.
pub fn evolve_and_trace_many(
    h: &HermitianOperator,
    system: &SystemSpec<f64>,
    bath: &DiscreteBath<f64>,
    beta: Temperature<f64>,
    trunc: &TruncationSpec,
    times: &[f64],
) -> Result<Vec<DensityMatrix<f64>>> {
    if let Some(&t) = times.iter().find(|&&t| !(t >= 0.0 && t.is_finite())) {
        return Err(Error::NegativeTime { t });
    }
    let d = system.dim();
    let dim = trunc.total_dim(d)?;
    if h.dim() != dim {
        return Err(Error::DimensionMismatch {
            what: "Hamiltonian dimension",
            expected: dim,
            found: h.dim(),
        });
    }
    let nb = trunc.bath_dim();
    let theta = bath_weights(bath, beta, trunc);
    let mut out = vec![DMatrix::<Complex64>::zeros(d, d); times.len()];

    if let Some(blocks) = system_blocks(h.matrix(), d, nb) {
        // H = sum_s |s><s| (x) H_s, so the (m, n) block evolves as
        // U_m rho0_mn theta U_n^+ and
        // rho_mn(t) = rho0_mn sum_ij p^m_i conj(p^n_j) (V_m^+ theta V_n)_ij (V_n^+ V_m)_ji.
        let props = blocks
            .into_iter()
            .map(Propagator::from_matrix)
            .collect::<Result<Vec<_>>>()?;
        let phases: Vec<Vec<Vec<Complex64>>> = props
            .iter()
            .map(|p| times.iter().map(|&t| p.phases(t)).collect())
            .collect();
        let rho0 = system.rho0().entries();
        for m in 0..d {
            let vm = &props[m].eigenvectors;
            for n in m..d {
                let r0 = rho0[(m, n)];
                if r0 == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let vn = &props[n].eigenvectors;
                let mut theta_vn = vn.clone();
                for (b, mut row) in theta_vn.row_iter_mut().enumerate() {
                    row *= Complex64::new(theta[b], 0.0);
                }
                let w = complex_product(&vm.adjoint(), &theta_vn);
                let mmn = complex_product(&vn.adjoint(), vm);
                let q = DMatrix::from_fn(nb, nb, |i, j| w[(i, j)] * mmn[(j, i)]);
                for ti in 0..times.len() {
                    let value = r0 * phase_sum(&q, &phases[m][ti], &phases[n][ti]);
                    out[ti][(m, n)] = value;
                    out[ti][(n, m)] = value.conj();
                }
            }
        }
    } else {
        out = evolve_dense(h, system, &theta, times)?;
    }
    Ok(out
        .into_iter()
        .map(DensityMatrix::from_entries_unchecked)
        .collect())
}

/// Single-time form of [`evolve_and_trace_many`].
pub fn evolve_and_trace(
    h: &HermitianOperator,
    system: &SystemSpec<f64>,
    bath: &DiscreteBath<f64>,
    beta: Temperature<f64>,
    trunc: &TruncationSpec,
    t: f64,
) -> Result<DensityMatrix<f64>> {
    Ok(evolve_and_trace_many(h, system, bath, beta, trunc, &[t])?.remove(0))
}

/// Outcome of [`converge_truncation`].
#[derive(Debug, Clone, PartialEq)]
pub struct Convergence {
    pub truncation: TruncationSpec,
    /// Max-norm change between the last two levels tried.
    pub achieved_delta: f64,
    /// `(levels, delta to the previous level)` for each level tried after the first.
    pub history: Vec<(usize, f64)>,
}

/// Starting level: enough to hold the displaced thermal state,
/// `max(4, ceil(4 max |l_m g_k / w_k|^2))`.
pub fn initial_levels(system: &SystemSpec<f64>, bath: &DiscreteBath<f64>) -> usize {
    let lmax = system
        .pointer_values()
        .iter()
        .fold(0.0_f64, |a, l| a.max(l.abs()));
    let shift = bath
        .modes()
        .iter()
        .map(|m| (lmax * m.g().norm() / m.omega()).powi(2))
        .fold(0.0_f64, f64::max);
    4usize.max((4.0 * shift).ceil() as usize)
}

/// Raises the (uniform) level count on the schedule `N -> ceil(3N/2)` until
/// the reduced matrix at `t_max` moves by less than `tol` in max-norm, and
/// returns the larger level of the accepted pair.
pub fn converge_truncation(
    system: &SystemSpec<f64>,
    bath: &DiscreteBath<f64>,
    beta: Temperature<f64>,
    t_max: f64,
    tol: f64,
    renormalize: bool,
    budget: usize,
) -> Result<Convergence> {
    Ok(converge_on_grid(system, bath, beta, &[t_max], tol, renormalize, budget)?.0)
}

/// [`converge_truncation`] with the change measured over every time in
/// `times`; also returns the evolved states at the accepted level.
fn converge_on_grid(
    system: &SystemSpec<f64>,
    bath: &DiscreteBath<f64>,
    beta: Temperature<f64>,
    times: &[f64],
    tol: f64,
    renormalize: bool,
    budget: usize,
) -> Result<(Convergence, Vec<DensityMatrix<f64>>)> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance { tol });
    }
    let k = bath.len();
    let at = |levels: usize| -> Result<Vec<DensityMatrix<f64>>> {
        let trunc = TruncationSpec::uniform(k, levels, tol, budget)?;
        let h = build_total_hamiltonian(system, bath, &trunc, renormalize)?;
        evolve_and_trace_many(&h, system, bath, beta, &trunc, times)
    };
    if bath.modes().iter().all(|m| m.g().norm_sqr() == 0.0) {
        let truncation = TruncationSpec::uniform(k, 2, tol, budget)?;
        truncation.total_dim(system.dim())?;
        let states = at(2)?;
        return Ok((
            Convergence {
                truncation,
                achieved_delta: 0.0,
                history: Vec::new(),
            },
            states,
        ));
    }
    let mut levels = initial_levels(system, bath);
    let mut previous = at(levels)?;
    let mut history = Vec::new();
    let mut best_delta: Option<f64> = None;
    loop {
        let next = (3 * levels).div_ceil(2);
        let trunc = TruncationSpec::uniform(k, next, tol, budget)?;
        if let Err(Error::DimensionBudgetExceeded {
            dimension, budget, ..
        }) = trunc.total_dim(system.dim())
        {
            return Err(Error::DimensionBudgetExceeded {
                dimension,
                budget,
                best_delta,
            });
        }
        let current = at(next)?;
        let delta = current
            .iter()
            .zip(&previous)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max);
        history.push((next, delta));
        best_delta = Some(best_delta.map_or(delta, |b: f64| b.min(delta)));
        if delta < tol {
            return Ok((
                Convergence {
                    truncation: trunc,
                    achieved_delta: delta,
                    history,
                },
                current,
            ));
        }
        levels = next;
        previous = current;
    }
}

/// Result of comparing the oracle against the closed form on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub convergence: Convergence,
    /// `(t, max-norm difference)` per time point.
    pub differences: Vec<(f64, f64)>,
}

impl Comparison {
    pub fn max_difference(&self) -> f64 {
        self.differences.iter().map(|&(_, d)| d).fold(0.0, f64::max)
    }
}

/// Converges the truncation over the whole time grid and compares the
/// evolved states against [`reduced_density_matrix`].
pub fn compare_with_closed_form(
    system: &SystemSpec<f64>,
    bath: &DiscreteBath<f64>,
    beta: Temperature<f64>,
    times: &[f64],
    convergence_tol: f64,
    renormalize: bool,
    budget: usize,
) -> Result<Comparison> {
    let (convergence, evolved) = converge_on_grid(
        system,
        bath,
        beta,
        times,
        convergence_tol,
        renormalize,
        budget,
    )?;
    let differences = times
        .iter()
        .zip(&evolved)
        .map(|(&t, rho)| {
            let exact = reduced_density_matrix(system, bath, beta, t, renormalize)?;
            Ok((t, rho.max_abs_diff(&exact)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Comparison {
        convergence,
        differences,
    })
}
