use std::io::Write;

use ebm_core::measurement::{classify_events, collapse_with_tol, PROJECTOR_TOL};
use ebm_core::{
    classify, ebm_evidence, events, scenario_momentum_projection, scenario_position_windows, schmidt,
    Error, EventPair, ScenarioResult, SpaceSpec, DEFAULT_RANK_TOL,
};

use crate::config::{Command, OutputFormat, RunConfig};
use crate::error::CliError;
use crate::format::{parse_measure_file, parse_state_file};
use crate::report::{EventSummary, Report};

const MEASURE_NOTE: &str =
    "entanglement is quantified as Schmidt rank/entropy across the two particle slots, plus Slater rank for antisymmetric states";

/// Runs one command, writing the report to `out` and diagnostics to `err`.
/// Returns the process exit status.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(config) {
        Ok((report, warnings)) => {
            for w in warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let rendered = match config.output_format {
                OutputFormat::Json => report.to_json() + "\n",
                OutputFormat::Text => report.to_text(),
            };
            let _ = out.write_all(rendered.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Builds the report for `config` together with any input warnings.
pub fn execute(config: &RunConfig) -> Result<(Report, Vec<String>), CliError> {
    config.validate()?;
    match &config.command {
        Command::MomentumScenario => {
            let space = SpaceSpec::spin_half(config.lattice_size)?;
            let result = scenario_momentum_projection(space, config.mode_a, config.mode_b, config.statistics)?;
            Ok((scenario_report(config, result), Vec::new()))
        }
        Command::PositionScenario => {
            let space = SpaceSpec::spin_half(config.lattice_size)?;
            let result = scenario_position_windows(
                space,
                config.mode_a,
                config.mode_b,
                config.x_a,
                config.x_b,
                config.width,
                config.statistics,
            )?;
            Ok((scenario_report(config, result), Vec::new()))
        }
        Command::Classify { state, measure } => {
            let state = parse_state_file(state)?;
            let measure = parse_measure_file(measure)?;
            let mut warnings = state.warnings;
            warnings.extend(measure.warnings);
            Ok((classify_report(config, &state.value, &measure.value)?, warnings))
        }
    }
}

fn overlaps_agree(pair: &EventPair, scale: f64, tol: f64) -> bool {
    (pair.event_overlap - pair.state_overlap).norm() <= tol * scale * scale
}

fn scenario_report(config: &RunConfig, r: ScenarioResult) -> Report {
    let verdict = classify_events(&r.events, r.verdict.scale, config.tolerance);
    let mut notes = vec![MEASURE_NOTE.to_string()];
    if r.windows_overlap {
        notes.push("the two position windows overlap; no relative-phase check".into());
    }
    if r.phase_check.is_some() {
        notes.push(
            "the relative-phase sign is obtained by direct projection: minus for fermions, plus for bosons".into(),
        );
    }
    if !overlaps_agree(&r.events, verdict.scale, config.tolerance) {
        notes.push("<M psi|M P psi> and <psi|M P psi> disagree".into());
    }
    Report {
        command: config.command.name(),
        statistics: config.statistics,
        lattice_size: Some(config.lattice_size),
        verdict: verdict.kind,
        tolerance: config.tolerance,
        events: EventSummary::from(&r.events),
        probability: r.probability,
        probability_label: "probability",
        entanglement: Some(r.report),
        evidence: Some(r.evidence),
        phase: r.phase_check,
        spin_state: r.relabeled,
        notes,
    }
}

fn classify_report(
    config: &RunConfig,
    psi: &ebm_core::TwoParticleState,
    m: &ebm_core::SelectiveMeasure,
) -> Result<Report, CliError> {
    if psi.space() != m.space() {
        return Err(CliError::Format {
            line: 0,
            message: format!(
                "state space {}x{} does not match measure space {}x{}",
                psi.space().extrinsic_dim(),
                psi.space().spin_dim(),
                m.space().extrinsic_dim(),
                m.space().spin_dim()
            ),
        });
    }
    let verdict = classify(m, psi, config.tolerance)?;
    let pair = events(m, psi)?;
    let mut notes = vec![MEASURE_NOTE.to_string()];
    let projective = m.is_projective(PROJECTOR_TOL);
    if !overlaps_agree(&pair, verdict.scale, config.tolerance) {
        notes.push("<M psi|M P psi> and <psi|M P psi> disagree; the verdict uses the former".into());
    }

    let (probability, entanglement, evidence) = match collapse_with_tol(m, psi, config.statistics, config.tolerance) {
        Ok(c) => {
            let report = schmidt(&c.normalized, DEFAULT_RANK_TOL)?;
            let evidence = ebm_evidence(m, psi, config.statistics, DEFAULT_RANK_TOL).ok();
            (c.probability, Some(report), evidence)
        }
        Err(Error::ImpossibleOutcome(msg)) | Err(Error::DegenerateInput(msg)) => {
            notes.push(format!("no post-measurement state: {msg}"));
            (0.0, None, None)
        }
        Err(e) => return Err(e.into()),
    };

    Ok(Report {
        command: config.command.name(),
        statistics: config.statistics,
        lattice_size: None,
        verdict: verdict.kind,
        tolerance: config.tolerance,
        events: EventSummary::from(&pair),
        probability,
        probability_label: if projective { "probability" } else { "squared event norm" },
        entanglement,
        evidence,
        phase: None,
        spin_state: None,
        notes,
    })
}
