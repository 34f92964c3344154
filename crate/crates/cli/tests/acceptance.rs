//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any failed.

use std::path::Path;
use std::process::{Command, ExitCode};

use dephase::continuum::{analyze_regimes, discretize_spectral, gamma_continuum, RegimeWindows};
use dephase::oracle::{
    build_total_hamiltonian, compare_with_closed_form, evolve_and_trace_many, TruncationSpec,
    DEFAULT_BUDGET,
};
use dephase::{
    free_evolution, gamma_discrete, reduced_density_matrix, Complex64, DiscreteBath, Regime,
    SpectralFunction, SystemSpec, Temperature,
};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn plus_qubit() -> SystemSpec {
    dephase::validate_system(
        vec![0.0, 1.0],
        vec![0.0, 1.0],
        DMatrix::from_element(2, 2, c(0.5, 0.0)),
    )
    .unwrap()
}

fn random_density(rng: &mut impl Rng, d: usize) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(d, d, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let rho = &a * a.adjoint();
    let mut rho = &rho / rho.trace();
    for i in 0..d {
        rho[(i, i)].im = 0.0;
        for j in (i + 1)..d {
            rho[(j, i)] = rho[(i, j)].conj();
        }
    }
    rho
}

/// Random instance with `d <= 4`, `K <= 5`; `tie` forces `l_0 = l_1`.
fn random_instance(rng: &mut impl Rng, tie: bool) -> (SystemSpec, DiscreteBath, Temperature) {
    let d = rng.random_range(2..=4);
    let energies = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
    let mut pointers: Vec<f64> = (0..d).map(|_| rng.random_range(-1.5..1.5)).collect();
    if tie {
        pointers[1] = pointers[0];
    }
    let sys = dephase::validate_system(energies, pointers, random_density(rng, d)).unwrap();
    let k = rng.random_range(1..=5);
    let bath = DiscreteBath::from_pairs((0..k).map(|_| {
        (
            rng.random_range(0.2..3.0),
            Complex64::from_polar(
                rng.random_range(0.0..1.0),
                rng.random_range(0.0..std::f64::consts::TAU),
            ),
        )
    }))
    .unwrap();
    let beta = if rng.random_bool(0.2) {
        Temperature::zero_temperature()
    } else {
        Temperature::new(rng.random_range(0.1..20.0)).unwrap()
    };
    (sys, bath, beta)
}

const RANDOM_TIMES: [f64; 6] = [0.0, 0.3, 1.7, 9.0, 55.0, 400.0];

fn oracle_equivalence() -> Outcome {
    let sys = plus_qubit();
    let bath = DiscreteBath::from_pairs([(1.0, c(0.4, 0.0)), (2.3, c(0.7, 0.0))]).unwrap();
    let beta = Temperature::new(2.0).unwrap();
    let times: Vec<f64> = (0..8).map(|i| 5.0 * i as f64 / 7.0).collect();
    let mut worst = 0.0_f64;
    let mut levels = Vec::new();
    for renormalize in [false, true] {
        let cmp =
            compare_with_closed_form(&sys, &bath, beta, &times, 1e-8, renormalize, DEFAULT_BUDGET)
                .map_err(|e| e.to_string())?;
        worst = worst.max(cmp.max_difference());
        levels.push(cmp.convergence.truncation.levels_per_mode()[0]);
    }
    check(
        worst < 1e-6,
        format!("max |oracle - closed form| = {worst:.3e} (< 1e-6), levels {levels:?}"),
    )
}

fn populations_constant() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let (sys, bath, beta) = random_instance(&mut rng, false);
        for renormalize in [false, true] {
            for t in RANDOM_TIMES {
                let rho = reduced_density_matrix(&sys, &bath, beta, t, renormalize)
                    .map_err(|e| e.to_string())?;
                for m in 0..sys.dim() {
                    worst = worst.max((rho.get(m, m) - sys.rho0().get(m, m)).norm());
                }
            }
        }
    }
    check(
        worst < 1e-10,
        format!("100 instances, max population drift {worst:.3e} (< 1e-10)"),
    )
}

fn decoherence_free_pairs() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2025);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let (sys, bath, beta) = random_instance(&mut rng, true);
        for t in RANDOM_TIMES {
            let rho =
                reduced_density_matrix(&sys, &bath, beta, t, false).map_err(|e| e.to_string())?;
            worst = worst.max((rho.get(0, 1).norm() - sys.rho0().get(0, 1).norm()).abs());
        }
    }
    // The same through the oracle: a qutrit with two equal pointer values.
    let rho0 = random_density(&mut rng, 3);
    let sys = dephase::validate_system(vec![0.0, 0.5, 1.2], vec![0.4, 0.4, -0.6], rho0).unwrap();
    let bath = DiscreteBath::from_pairs([(1.1, c(0.3, 0.2))]).unwrap();
    let trunc = TruncationSpec::uniform(1, 30, 1e-10, DEFAULT_BUDGET).unwrap();
    let h = build_total_hamiltonian(&sys, &bath, &trunc, false).map_err(|e| e.to_string())?;
    let times = [0.0, 1.0, 4.0, 10.0];
    let states = evolve_and_trace_many(
        &h,
        &sys,
        &bath,
        Temperature::new(3.0).unwrap(),
        &trunc,
        &times,
    )
    .map_err(|e| e.to_string())?;
    let mut worst_oracle = 0.0_f64;
    for rho in &states {
        worst_oracle = worst_oracle.max((rho.get(0, 1).norm() - sys.rho0().get(0, 1).norm()).abs());
    }
    check(
        worst < 1e-10 && worst_oracle < 1e-10,
        format!("closed form drift {worst:.3e}, oracle drift {worst_oracle:.3e} (< 1e-10)"),
    )
}

fn renormalization_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let (sys, bath, beta) = random_instance(&mut rng, false);
        for t in RANDOM_TIMES {
            let a =
                reduced_density_matrix(&sys, &bath, beta, t, false).map_err(|e| e.to_string())?;
            let b =
                reduced_density_matrix(&sys, &bath, beta, t, true).map_err(|e| e.to_string())?;
            for m in 0..sys.dim() {
                for n in 0..sys.dim() {
                    worst = worst.max((a.get(m, n).norm() - b.get(m, n).norm()).abs());
                }
            }
        }
    }
    let sys = plus_qubit();
    let bath = DiscreteBath::from_pairs([(1.0, c(0.4, 0.0)), (2.3, c(0.7, 0.0))]).unwrap();
    let beta = Temperature::new(2.0).unwrap();
    let trunc = TruncationSpec::uniform(2, 14, 1e-8, DEFAULT_BUDGET).unwrap();
    let times = [0.0, 1.0, 2.5, 5.0];
    let mut oracle = Vec::new();
    for renormalize in [false, true] {
        let h =
            build_total_hamiltonian(&sys, &bath, &trunc, renormalize).map_err(|e| e.to_string())?;
        oracle.push(
            evolve_and_trace_many(&h, &sys, &bath, beta, &trunc, &times)
                .map_err(|e| e.to_string())?,
        );
    }
    let mut worst_oracle = 0.0_f64;
    for (a, b) in oracle[0].iter().zip(&oracle[1]) {
        for m in 0..2 {
            for n in 0..2 {
                worst_oracle = worst_oracle.max((a.get(m, n).norm() - b.get(m, n).norm()).abs());
            }
        }
    }
    check(
        worst < 1e-10 && worst_oracle < 1e-10,
        format!("closed form {worst:.3e}, oracle {worst_oracle:.3e} (< 1e-10)"),
    )
}

fn continuum_limit() -> Outcome {
    let spec = SpectralFunction::ohmic(1.0, 1.0).unwrap();
    let beta = Temperature::new(10.0).unwrap();
    let bath = discretize_spectral(&spec, 20_000, 40.0).map_err(|e| e.to_string())?;
    let mut worst = 0.0_f64;
    for t in [0.1, 1.0, 10.0] {
        let discrete = gamma_discrete(&bath, beta, t).map_err(|e| e.to_string())?;
        let continuum = gamma_continuum(&spec, beta, t, 1e-10)
            .map_err(|e| e.to_string())?
            .value;
        worst = worst.max(((discrete - continuum) / continuum).abs());
    }
    check(
        worst < 1e-4,
        format!("K = 20000, max relative difference {worst:.3e} (< 1e-4)"),
    )
}

fn ohmic_regimes() -> Outcome {
    let spec = SpectralFunction::ohmic(1.0, 1.0).unwrap();
    let beta = Temperature::new(1e4).unwrap();
    let windows = RegimeWindows::standard(&spec, beta);
    let a = analyze_regimes(&spec, beta, &windows, 16, 1e-10).map_err(|e| e.to_string())?;
    let quiet = a.fit_for(Regime::Quiet).ok_or("no quiet fit")?.fit;
    let quantum = a.fit_for(Regime::Quantum).ok_or("no quantum fit")?.fit;
    let thermal = a.fit_for(Regime::Thermal).ok_or("no thermal fit")?.fit;
    check(
        (quiet.value - 2.0).abs() < 0.05
            && (thermal.value - 1.0).abs() < 0.05
            && quantum.residual < 0.02,
        format!(
            "quiet exponent {:.4}, thermal exponent {:.4}, log-law slope {:.4} residual {:.2}%",
            quiet.value,
            thermal.value,
            quantum.value,
            100.0 * quantum.residual
        ),
    )
}

fn exponent_family() -> Outcome {
    let beta = Temperature::new(1e4).unwrap();
    let mut parts = Vec::new();
    let mut ok = true;
    for n in [0.5, 1.5] {
        let spec = SpectralFunction::new(1.0, n, 1.0).unwrap();
        let windows = RegimeWindows::standard(&spec, beta);
        let a = analyze_regimes(&spec, beta, &windows, 16, 1e-10).map_err(|e| e.to_string())?;
        let p = a
            .fit_for(Regime::Thermal)
            .ok_or("no thermal fit")?
            .fit
            .value;
        ok &= (p - (2.0 - n)).abs() < 0.05 && a.complete;
        parts.push(format!("n={n}: thermal exponent {p:.4} (want {})", 2.0 - n));
    }
    let spec = SpectralFunction::new(1.0, 3.0, 1.0).unwrap();
    let windows = RegimeWindows::standard(&spec, beta);
    let a = analyze_regimes(&spec, beta, &windows, 16, 1e-10).map_err(|e| e.to_string())?;
    let growth = a.saturation_growth.ok_or("no saturation measure")?;
    ok &= growth.abs() < 0.01 && !a.complete;
    parts.push(format!("n=3: growth 10b->100b {growth:.3e} (< 1%)"));
    check(ok, parts.join("; "))
}

fn uncoupled_bath() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2027);
    let mut worst = 0.0_f64;
    let mut worst_oracle = 0.0_f64;
    for i in 0..20 {
        let (sys, bath, beta) = random_instance(&mut rng, false);
        let zero = DiscreteBath::from_pairs(bath.modes().iter().map(|m| (m.omega(), c(0.0, 0.0))))
            .unwrap();
        for t in RANDOM_TIMES {
            for renormalize in [false, true] {
                let rho = reduced_density_matrix(&sys, &zero, beta, t, renormalize)
                    .map_err(|e| e.to_string())?;
                worst = worst.max(rho.max_abs_diff(&free_evolution(&sys, t)));
            }
        }
        if i < 5 {
            let cmp_bath =
                DiscreteBath::from_pairs(zero.modes().iter().take(2).map(|m| (m.omega(), m.g())))
                    .unwrap();
            let trunc = TruncationSpec::uniform(cmp_bath.len(), 2, 1e-10, DEFAULT_BUDGET).unwrap();
            let h = build_total_hamiltonian(&sys, &cmp_bath, &trunc, true)
                .map_err(|e| e.to_string())?;
            let states = evolve_and_trace_many(&h, &sys, &cmp_bath, beta, &trunc, &RANDOM_TIMES)
                .map_err(|e| e.to_string())?;
            for (rho, &t) in states.iter().zip(&RANDOM_TIMES) {
                worst_oracle = worst_oracle.max(rho.max_abs_diff(&free_evolution(&sys, t)));
            }
        }
    }
    check(
        worst < 1e-12 && worst_oracle < 1e-12,
        format!("closed form {worst:.3e}, oracle {worst_oracle:.3e} (< 1e-12)"),
    )
}

const GAMMA_CONFIG: &str = r#"{
  "bath": {"spectral": {"amplitude": 1.0, "exponent": 1.0, "cutoff": 1.0}},
  "temperature": {"beta": 10.0},
  "time": {"start": 0.01, "stop": 100.0, "count": 25, "spacing": "log"}
}"#;

const RHO_CONFIG: &str = r#"{
  "system": {"energies": [0.0, 1.0], "pointer_values": [0.0, 1.0],
             "rho0": [[{"re": 0.5}, {"re": 0.5}], [{"re": 0.5}, {"re": 0.5}]]},
  "bath": {"discrete": {"modes": [{"omega": 1.0, "g": {"re": 0.4}}, {"omega": 2.3, "g": {"re": 0.7}}]}},
  "temperature": {"beta": 2.0},
  "time": {"start": 0.0, "stop": 5.0, "count": 8}
}"#;

fn run_cli(args: &[&str], dir: &Path, out: &str) -> Result<Vec<u8>, String> {
    let path = dir.join(out);
    let status = Command::new(env!("CARGO_BIN_EXE_dephase"))
        .args(args)
        .arg("-o")
        .arg(&path)
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(format!(
            "{args:?} failed: {}",
            String::from_utf8_lossy(&status.stderr)
        ));
    }
    std::fs::read(&path).map_err(|e| e.to_string())
}

fn reproducible_output() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let gamma_cfg = dir.path().join("gamma.json");
    let rho_cfg = dir.path().join("rho.json");
    std::fs::write(&gamma_cfg, GAMMA_CONFIG).map_err(|e| e.to_string())?;
    std::fs::write(&rho_cfg, RHO_CONFIG).map_err(|e| e.to_string())?;
    let (g, r) = (gamma_cfg.to_str().unwrap(), rho_cfg.to_str().unwrap());
    let mut checked = Vec::new();
    for (name, args) in [
        ("gamma", vec!["gamma", "-c", g]),
        ("rho", vec!["rho", "-c", r]),
        ("rho-renormalized", vec!["rho", "-c", r, "--renormalize"]),
    ] {
        let first = run_cli(&args, dir.path(), &format!("{name}-1.csv"))?;
        let second = run_cli(&args, dir.path(), &format!("{name}-2.csv"))?;
        if first != second {
            return Err(format!("{name}: runs differ"));
        }
        if first.is_empty() {
            return Err(format!("{name}: empty output"));
        }
        checked.push(format!("{name} ({} bytes)", first.len()));
    }
    check(
        true,
        format!("byte-identical reruns: {}", checked.join(", ")),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("populations constant", populations_constant),
        ("decoherence-free pairs", decoherence_free_pairs),
        ("renormalization invariance", renormalization_invariance),
        ("continuum limit", continuum_limit),
        ("ohmic regimes", ohmic_regimes),
        ("exponent family", exponent_family),
        ("uncoupled bath", uncoupled_bath),
        ("reproducible output", reproducible_output),
    ];
    let mut failed = 0;
    println!("\nrunning {} acceptance criteria", criteria.len());
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS — {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL — {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed\n",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
