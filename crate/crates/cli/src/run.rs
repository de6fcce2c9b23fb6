//! Experiment dispatch: a validated [`RunConfig`] in, a [`ResultTable`] out.

use std::time::{SystemTime, UNIX_EPOCH};

use photon_detect_core::experiments::{
    lineshape_reference, run_commutator_report, run_lineshape, run_mzi, run_perturbation_scaling,
    run_povm_check,
};
use photon_detect_core::ModeSet;

use crate::config::{Experiment, RunConfig};
use crate::table::{format_value, ResultTable};
use crate::CliResult;

/// Run the configured experiment deterministically. Identical configs give
/// identical tables; the only nondeterministic output line is the timestamp,
/// which `reproducible` suppresses.
pub fn run(config: &RunConfig, reproducible: bool) -> CliResult<ResultTable> {
    let mut table = match &config.experiment {
        Experiment::Lineshape(cfg) => {
            let scan = run_lineshape(cfg)?;
            let reference = lineshape_reference(cfg)?;
            let rows = scan
                .abscissa
                .iter()
                .zip(&scan.probability)
                .zip(&reference)
                .map(|((&x, &p), &r)| vec![x, p, r])
                .collect();
            ResultTable::new(
                vec![
                    "detuning".into(),
                    "probability".into(),
                    "analytic_reference".into(),
                ],
                rows,
            )?
        }
        Experiment::Mzi(cfg) => {
            let (scan, metrics) = run_mzi(cfg)?;
            let rows = scan
                .abscissa
                .iter()
                .zip(&scan.probability)
                .map(|(&x, &p)| vec![x, p])
                .collect();
            let mut table = ResultTable::new(vec!["x".into(), "probability".into()], rows)?;
            table
                .footer
                .push(format!("V = {}", format_value(metrics.visibility)));
            table
                .footer
                .push(format!("D = {}", format_value(metrics.distinguishability)));
            table
        }
        Experiment::Commutator {
            k_grid,
            volume,
            config: cfg,
        } => {
            let ms = ModeSet::plane_waves(k_grid, *volume)?;
            let entries = run_commutator_report(&ms, cfg)?;
            let rows = entries
                .iter()
                .map(|e| {
                    vec![
                        e.j as f64,
                        e.k as f64,
                        e.t,
                        e.numeric.re,
                        e.numeric.im,
                        e.analytic.re,
                        e.analytic.im,
                        e.deviation,
                    ]
                })
                .collect();
            let mut table = ResultTable::new(
                vec![
                    "j".into(),
                    "k".into(),
                    "t".into(),
                    "numeric_re".into(),
                    "numeric_im".into(),
                    "analytic_re".into(),
                    "analytic_im".into(),
                    "max_deviation".into(),
                ],
                rows,
            )?;
            let worst = entries.iter().map(|e| e.deviation).fold(0.0, f64::max);
            table
                .footer
                .push(format!("max_deviation = {}", format_value(worst)));
            table
        }
        Experiment::PovmCheck(cfg) => {
            let check = run_povm_check(cfg)?;
            ResultTable::new(
                vec!["sum_p".into(), "deviation".into()],
                vec![vec![check.sum, check.deviation]],
            )?
        }
        Experiment::PerturbationScaling(cfg) => {
            let study = run_perturbation_scaling(cfg)?;
            let rows = study
                .points
                .iter()
                .map(|p| {
                    vec![
                        p.coupling,
                        p.first_order,
                        p.exact,
                        p.absolute_gap,
                        p.relative_gap,
                    ]
                })
                .collect();
            let mut table = ResultTable::new(
                vec![
                    "coupling".into(),
                    "first_order".into(),
                    "exact".into(),
                    "absolute_gap".into(),
                    "relative_gap".into(),
                ],
                rows,
            )?;
            table
                .footer
                .push(format!("absolute_ratio = {}", format_value(study.absolute_ratio)));
            table
                .footer
                .push(format!("relative_ratio = {}", format_value(study.relative_ratio)));
            table
        }
    };

    let mut provenance = vec![
        format!("photon-detect {}", env!("CARGO_PKG_VERSION")),
        format!("experiment = {}", config.experiment.kind().name()),
        format!("config-sha256 = {}", config.config_hash),
    ];
    if !reproducible {
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        provenance.push(format!("generated-unix = {stamp}"));
    }
    provenance.push("resolved config:".to_string());
    for line in config.resolved.lines() {
        provenance.push(format!("  {line}"));
    }
    table.provenance = provenance;
    Ok(table)
}
