//! The four subcommands. Each builds its whole table in memory before
//! anything is written.

use dephase::continuum::{analyze_regimes, decoherence_complete, gamma_continuum, RegimeWindows};
use dephase::oracle::{compare_with_closed_form, DEFAULT_BUDGET};
use dephase::{gamma_discrete, reduced_density_matrix};
use rayon::prelude::*;

use crate::config::{Bath, ScenarioConfig};
use crate::error::CliError;
use crate::output::{number, Table};

pub const DEFAULT_QUADRATURE_TOL: f64 = 1e-10;
pub const DEFAULT_COMPARISON_TOL: f64 = 1e-6;
/// Truncation convergence is demanded this much tighter than the comparison.
const CONVERGENCE_MARGIN: f64 = 1e-2;
const VERDICT_INCOMPLETE: &str = "incomplete decoherence: Γ saturates";
const VERDICT_COMPLETE: &str = "complete decoherence: Γ grows without bound";

fn preamble(table: &mut Table, command: &str, config: &ScenarioConfig) {
    table.comment(format!("dephase {} {command}", env!("CARGO_PKG_VERSION")));
    table.comment(format!("config: {}", config.canonical()));
}

pub fn gamma(config: &ScenarioConfig) -> Result<Table, CliError> {
    let times = config.times()?;
    let beta = config.temperature()?;
    let mut table = Table::new(
        config.output.format,
        &["t", "gamma", "source", "quad_error"],
    );
    preamble(&mut table, "gamma", config);
    let rows: Vec<(f64, f64, &str, f64)> = match config.bath()? {
        Bath::Discrete(bath) => times
            .par_iter()
            .map(|&t| Ok((t, gamma_discrete(&bath, beta, t)?, "discrete", 0.0)))
            .collect::<Result<_, dephase::Error>>()?,
        Bath::Spectral { spec, .. } => {
            table.comment(format!(
                "decoherence_complete: {}",
                decoherence_complete(&spec)
            ));
            let tol = config.flags.tolerance.unwrap_or(DEFAULT_QUADRATURE_TOL);
            times
                .par_iter()
                .map(|&t| {
                    let e = gamma_continuum(&spec, beta, t, tol)?;
                    Ok((t, e.value, "continuum", e.error))
                })
                .collect::<Result<_, dephase::Error>>()?
        }
    };
    for (t, g, source, err) in rows {
        table.row(vec![number(t), number(g), source.to_string(), number(err)]);
    }
    Ok(table)
}

pub fn rho(config: &ScenarioConfig) -> Result<Table, CliError> {
    let system = config.system()?;
    let bath = config.discrete_bath()?;
    let beta = config.temperature()?;
    let times = config.times()?;
    let renormalize = config.flags.renormalize;
    let states = times
        .par_iter()
        .map(|&t| reduced_density_matrix(&system, &bath, beta, t, renormalize))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(config.output.format, &["t", "m", "n", "re", "im", "abs"]);
    preamble(&mut table, "rho", config);
    for (&t, rho) in times.iter().zip(&states) {
        for m in 0..rho.dim() {
            for n in 0..rho.dim() {
                let z = rho.get(m, n);
                table.row(vec![
                    number(t),
                    m.to_string(),
                    n.to_string(),
                    number(z.re),
                    number(z.im),
                    number(z.norm()),
                ]);
            }
        }
    }
    Ok(table)
}

/// Returns the table and whether every time point passed.
pub fn oracle_compare(config: &ScenarioConfig) -> Result<(Table, bool), CliError> {
    let system = config.system()?;
    let bath = config.discrete_bath()?;
    let beta = config.temperature()?;
    let times = config.times()?;
    let tol = config.flags.tolerance.unwrap_or(DEFAULT_COMPARISON_TOL);
    let budget = config.flags.budget.unwrap_or(DEFAULT_BUDGET);
    let cmp = compare_with_closed_form(
        &system,
        &bath,
        beta,
        &times,
        tol * CONVERGENCE_MARGIN,
        config.flags.renormalize,
        budget,
    )?;
    let levels = cmp.convergence.truncation.levels_per_mode();
    let mut table = Table::new(
        config.output.format,
        &["t", "max_abs_diff", "levels", "verdict"],
    );
    preamble(&mut table, "oracle-compare", config);
    table.comment(format!("tolerance: {}", number(tol)));
    table.comment(format!(
        "levels_per_mode: {levels:?} (total dimension {})",
        cmp.convergence.truncation.total_dim(system.dim())?
    ));
    table.comment(format!(
        "truncation_delta: {}",
        number(cmp.convergence.achieved_delta)
    ));
    let level = levels.first().copied().unwrap_or(0).to_string();
    let mut pass = true;
    for &(t, diff) in &cmp.differences {
        let ok = diff < tol;
        pass &= ok;
        table.row(vec![
            number(t),
            number(diff),
            level.clone(),
            if ok { "PASS" } else { "FAIL" }.to_string(),
        ]);
    }
    table.comment(format!("max_abs_diff: {}", number(cmp.max_difference())));
    table.comment(format!("result: {}", if pass { "PASS" } else { "FAIL" }));
    Ok((table, pass))
}

/// Returns the table and a human-readable verdict.
pub fn regimes(config: &ScenarioConfig) -> Result<(Table, String), CliError> {
    let spec = match config.bath()? {
        Bath::Spectral { spec, .. } => spec,
        Bath::Discrete(_) => {
            return Err(CliError::validation(
                "field `bath`: regimes needs a spectral bath",
            ))
        }
    };
    let beta = config.temperature()?;
    let tol = config.flags.tolerance.unwrap_or(DEFAULT_QUADRATURE_TOL);
    let standard = RegimeWindows::standard(&spec, beta);
    let (windows, samples) = match &config.regimes {
        Some(block) => {
            let pick = |w: Option<[f64; 2]>, fallback| w.map(|[a, b]| (a, b)).or(fallback);
            (
                RegimeWindows {
                    quiet: pick(block.quiet, standard.quiet),
                    quantum: pick(block.quantum, standard.quantum),
                    thermal: pick(block.thermal, standard.thermal),
                },
                block.samples_per_window,
            )
        }
        None => (standard, 16),
    };
    for (name, w) in [
        ("quiet", windows.quiet),
        ("quantum", windows.quantum),
        ("thermal", windows.thermal),
    ] {
        if let Some((a, b)) = w {
            if !(a > 0.0 && b > a && b.is_finite()) {
                return Err(CliError::validation(format!(
                    "field `regimes.{name}`: window must satisfy 0 < start < stop, got [{a}, {b}]"
                )));
            }
        }
    }
    let analysis = analyze_regimes(&spec, beta, &windows, samples, tol)?;

    let mut table = Table::new(
        config.output.format,
        &[
            "regime",
            "model",
            "t_lo",
            "t_hi",
            "samples",
            "value",
            "intercept",
            "residual",
        ],
    );
    preamble(&mut table, "regimes", config);
    table.comment(format!(
        "separation_beta_wc: {}",
        number(analysis.separation)
    ));
    table.comment(format!("weakly_separated: {}", analysis.weakly_separated));
    if let Some(g) = analysis.saturation_growth {
        table.comment(format!("saturation_growth_10b_100b: {}", number(g)));
    }
    let verdict = if analysis.complete {
        VERDICT_COMPLETE
    } else {
        VERDICT_INCOMPLETE
    };
    table.comment(format!("verdict: {verdict}"));
    for f in &analysis.fits {
        let model = match f.model {
            dephase::FitModel::PowerLaw => "power",
            dephase::FitModel::LogLaw => "log",
        };
        table.row(vec![
            f.regime.to_string(),
            model.to_string(),
            number(f.window.0),
            number(f.window.1),
            f.fit.samples.to_string(),
            number(f.fit.value),
            number(f.fit.intercept),
            number(f.fit.residual),
        ]);
    }
    let mut summary = verdict.to_string();
    if analysis.weakly_separated {
        summary.push_str(&format!(
            "\nwarning: beta * omega_c = {} is small; regime boundaries overlap",
            analysis.separation
        ));
    }
    Ok((table, summary))
}
