//! Batch runs for the `nonlocal` binary: exact verification, the local
//! hidden-variable search, rotation sweeps and Monte Carlo sampling.
//!
//! Every command is deterministic given its flags. Floating-point values in
//! text and CSV output carry 17 significant digits; JSON uses the shortest
//! representation that parses back to the same `f64`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use nonlocal_core::{
    canonical_observables, constraint_report, exhaustive_search, invariance_defect,
    nine_constraints, parity_argument, rotated_constraints, rotation_operator, rotation_stream,
    run_experiment, singlet, verify_perfect, ConstraintReport, ExperimentStats, LhvSearchReport,
    ParityReport, RotationSpec, Spin,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Bound on the invariance defect and violating probability in a sweep.
pub const SWEEP_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "nonlocal", version, about = "Spin-3/2 singlet Bell contradiction checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write output here instead of stdout.
    #[arg(long, env = "NONLOCAL_OUTPUT", global = true)]
    pub output: Option<PathBuf>,

    /// Master seed for every random choice.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the nine perfect correlations on the singlet.
    Verify(VerifyArgs),
    /// Search all 4096 local ±1 assignments.
    Lhv,
    /// Re-check the nine correlations after common rotations of every device.
    RotateSweep(SweepArgs),
    /// Born-rule Monte Carlo of the nine correlation experiments.
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Flip the sign of constraint ID before checking (exercises the failure path).
    #[arg(long, value_name = "ID", hide = true)]
    pub flip_sign: Option<u8>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Number of seeded random rotations.
    #[arg(long)]
    pub rotations: Option<usize>,

    /// Explicit rotation axis as x,y,z (normalized if not unit).
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true, requires = "angle")]
    pub axis: Option<[f64; 3]>,

    /// Explicit rotation angle in radians.
    #[arg(long, allow_hyphen_values = true, requires = "axis")]
    pub angle: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Rounds per constraint.
    #[arg(long, default_value_t = 100_000)]
    pub shots: u64,
}

pub fn parse_axis(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z, got {s:?}"));
    }
    let mut axis = [0.0; 3];
    for (slot, p) in axis.iter_mut().zip(&parts) {
        *slot = p.parse().map_err(|_| format!("invalid component {p:?}"))?;
    }
    let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !norm.is_finite() || norm == 0.0 {
        return Err("axis must be a finite nonzero vector".into());
    }
    Ok(axis)
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] nonlocal_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_FAILED,
        }
    }
}

/// Formats with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Result of one command: the rendered output and the process exit code.
#[derive(Debug)]
pub struct Rendered {
    pub body: String,
    pub diagnostics: Vec<String>,
    pub exit: u8,
}

pub fn run(cli: &Cli) -> Result<Rendered, CliError> {
    match &cli.command {
        Command::Verify(args) => cmd_verify(cli.format, args),
        Command::Lhv => cmd_lhv(cli.format),
        Command::RotateSweep(args) => cmd_rotate_sweep(cli.format, cli.seed, args),
        Command::Sample(args) => cmd_sample(cli.format, cli.seed, args),
    }
}

/// Runs the command and writes its output to `--output` or `stdout`, and
/// diagnostics to `stderr`. Returns the exit code.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    match run(cli) {
        Ok(r) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &r.body),
                None => stdout.write_all(r.body.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_FAILED;
            }
            for d in &r.diagnostics {
                let _ = writeln!(stderr, "{d}");
            }
            r.exit
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn to_csv(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn cmd_verify(format: Format, args: &VerifyArgs) -> Result<Rendered, CliError> {
    let psi = singlet(Spin::THREE_HALVES)?;
    let obs = canonical_observables();
    let mut constraints = nine_constraints();
    if let Some(id) = args.flip_sign {
        let c = constraints
            .iter_mut()
            .find(|c| c.id == id)
            .ok_or_else(|| CliError::Usage(format!("no constraint with id {id}")))?;
        *c = c.with_sign(-c.sign);
    }
    let reports = constraints
        .iter()
        .map(|c| constraint_report(&psi, c, &obs))
        .collect::<Result<Vec<ConstraintReport>, _>>()?;

    let body = match format {
        Format::Json => to_json(&reports)?,
        Format::Csv => to_csv(
            &["id", "alice", "bob", "sign", "value", "holds", "max_violating_probability"],
            reports
                .iter()
                .map(|r| {
                    vec![
                        r.id.to_string(),
                        r.alice.join(" "),
                        r.bob.join(" "),
                        r.sign.to_string(),
                        fmt_f64(r.value),
                        r.holds.to_string(),
                        fmt_f64(r.max_violating_probability),
                    ]
                })
                .collect(),
        )?,
        Format::Text => constraints
            .iter()
            .zip(&reports)
            .map(|(c, r)| {
                format!(
                    "{} {:<28} value={} holds={} max_violating_probability={}\n",
                    r.id,
                    c.describe(),
                    fmt_f64(r.value),
                    r.holds,
                    fmt_f64(r.max_violating_probability)
                )
            })
            .collect(),
    };
    let diagnostics: Vec<String> = reports
        .iter()
        .filter(|r| !r.holds)
        .map(|r| {
            format!(
                "constraint {} failed: value {} vs sign {}, violating probability {}",
                r.id,
                fmt_f64(r.value),
                r.sign,
                fmt_f64(r.max_violating_probability)
            )
        })
        .collect();
    let exit = if diagnostics.is_empty() { EXIT_OK } else { EXIT_FAILED };
    Ok(Rendered {
        body,
        diagnostics,
        exit,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LhvOutput {
    #[serde(flatten)]
    pub search: LhvSearchReport,
    pub parity: ParityReport,
}

pub fn cmd_lhv(format: Format) -> Result<Rendered, CliError> {
    let out = LhvOutput {
        search: exhaustive_search(),
        parity: parity_argument(),
    };
    let s = &out.search;
    let body = match format {
        Format::Json => to_json(&out)?,
        Format::Csv => to_csv(
            &["total", "perfect", "max_satisfied", "witness_index", "lhs_sign", "rhs_sign"],
            vec![vec![
                s.total_assignments.to_string(),
                s.perfectly_satisfying.to_string(),
                s.max_satisfied.to_string(),
                s.witness.map(|w| w.index().to_string()).unwrap_or_default(),
                out.parity.lhs_sign.to_string(),
                out.parity.rhs_sign.to_string(),
            ]],
        )?,
        Format::Text => {
            let mut t = String::new();
            t += &format!("total assignments: {}\n", s.total_assignments);
            t += &format!("perfectly satisfying: {}\n", s.perfectly_satisfying);
            t += &format!("max satisfied: {} of 9\n", s.max_satisfied);
            if let Some(w) = &s.witness {
                t += &format!("witness (index {}): {w}\n", w.index());
            }
            t += &format!("satisfied-count histogram: {:?}\n", s.histogram);
            t += &format!("violations always odd: {}\n", s.violations_always_odd);
            t += &format!(
                "parity: lhs {:+} rhs {:+}, label counts {:?}\n",
                out.parity.lhs_sign, out.parity.rhs_sign, out.parity.label_counts
            );
            t
        }
    };
    let exit = if s.perfectly_satisfying == 0 { EXIT_OK } else { EXIT_FAILED };
    Ok(Rendered {
        body,
        diagnostics: Vec::new(),
        exit,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub index: usize,
    pub axis: [f64; 3],
    pub angle: f64,
    pub invariance_defect: f64,
    pub max_violating_probability: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rotations: Vec<SweepEntry>,
    pub worst_invariance_defect: f64,
    pub worst_violating_probability: f64,
    pub all_hold: bool,
}

pub fn sweep(specs: &[RotationSpec]) -> Result<SweepReport, CliError> {
    let psi = singlet(Spin::THREE_HALVES)?;
    let mut rotations = Vec::with_capacity(specs.len());
    for (index, spec) in specs.iter().enumerate() {
        let r = rotation_operator(spec, Spin::THREE_HALVES)?;
        let defect = invariance_defect(&psi, &r)?;
        let (obs, cs) = rotated_constraints(&r)?;
        let mut worst: f64 = 0.0;
        let mut holds = true;
        for c in &cs {
            let check = verify_perfect(&psi, c, &obs)?;
            holds &= check.holds;
            worst = worst.max(check.max_violating_probability);
        }
        holds &= defect.abs() <= SWEEP_TOLERANCE && worst <= SWEEP_TOLERANCE;
        rotations.push(SweepEntry {
            index,
            axis: spec.axis,
            angle: spec.angle,
            invariance_defect: defect,
            max_violating_probability: worst,
            holds,
        });
    }
    Ok(SweepReport {
        worst_invariance_defect: rotations.iter().map(|e| e.invariance_defect.abs()).fold(0.0, f64::max),
        worst_violating_probability: rotations
            .iter()
            .map(|e| e.max_violating_probability)
            .fold(0.0, f64::max),
        all_hold: rotations.iter().all(|e| e.holds),
        rotations,
    })
}

pub fn cmd_rotate_sweep(format: Format, seed: u64, args: &SweepArgs) -> Result<Rendered, CliError> {
    let specs: Vec<RotationSpec> = match (args.axis, args.angle, args.rotations) {
        (Some(axis), Some(angle), None) => vec![RotationSpec::normalized(axis, angle)
            .map_err(|e| CliError::Usage(e.to_string()))?],
        (Some(_), Some(_), Some(_)) => {
            return Err(CliError::Usage("--rotations cannot be combined with --axis/--angle".into()))
        }
        (_, _, Some(0)) => {
            return Err(CliError::Usage("--rotations must be at least 1 without --axis/--angle".into()))
        }
        (_, _, n) => rotation_stream(seed).take(n.unwrap_or(100)).collect(),
    };
    let report = sweep(&specs)?;
    let body = match format {
        Format::Json => to_json(&report)?,
        Format::Csv => to_csv(
            &["index", "axis_x", "axis_y", "axis_z", "angle", "invariance_defect", "max_violating_probability", "holds"],
            report
                .rotations
                .iter()
                .map(|e| {
                    vec![
                        e.index.to_string(),
                        fmt_f64(e.axis[0]),
                        fmt_f64(e.axis[1]),
                        fmt_f64(e.axis[2]),
                        fmt_f64(e.angle),
                        fmt_f64(e.invariance_defect),
                        fmt_f64(e.max_violating_probability),
                        e.holds.to_string(),
                    ]
                })
                .collect(),
        )?,
        Format::Text => {
            let mut t = String::new();
            for e in &report.rotations {
                t += &format!(
                    "{} axis=({}, {}, {}) angle={} defect={} max_violating_probability={} holds={}\n",
                    e.index,
                    fmt_f64(e.axis[0]),
                    fmt_f64(e.axis[1]),
                    fmt_f64(e.axis[2]),
                    fmt_f64(e.angle),
                    fmt_f64(e.invariance_defect),
                    fmt_f64(e.max_violating_probability),
                    e.holds
                );
            }
            t += &format!(
                "rotations={} worst_defect={} worst_violating_probability={} all_hold={}\n",
                report.rotations.len(),
                fmt_f64(report.worst_invariance_defect),
                fmt_f64(report.worst_violating_probability),
                report.all_hold
            );
            t
        }
    };
    let diagnostics = report
        .rotations
        .iter()
        .filter(|e| !e.holds)
        .map(|e| format!("rotation {} failed: axis {:?} angle {}", e.index, e.axis, e.angle))
        .collect::<Vec<_>>();
    let exit = if report.all_hold { EXIT_OK } else { EXIT_FAILED };
    Ok(Rendered {
        body,
        diagnostics,
        exit,
    })
}

pub fn cmd_sample(format: Format, seed: u64, args: &SampleArgs) -> Result<Rendered, CliError> {
    let psi = singlet(Spin::THREE_HALVES)?;
    let stats: ExperimentStats =
        run_experiment(&psi, &nine_constraints(), &canonical_observables(), args.shots, seed)?;
    let body = match format {
        Format::Json => to_json(&stats)?,
        Format::Csv => to_csv(
            &["id", "shots", "agree", "disagree", "empirical_value"],
            stats
                .per_constraint
                .iter()
                .map(|t| {
                    vec![
                        t.id.to_string(),
                        t.shots.to_string(),
                        t.agree.to_string(),
                        t.disagree.to_string(),
                        fmt_f64(t.empirical_value),
                    ]
                })
                .collect(),
        )?,
        Format::Text => stats
            .per_constraint
            .iter()
            .map(|t| {
                format!(
                    "{} shots={} agree={} disagree={} empirical_value={}{}\n",
                    t.id,
                    t.shots,
                    t.agree,
                    t.disagree,
                    fmt_f64(t.empirical_value),
                    if t.no_data { " (no data)" } else { "" }
                )
            })
            .collect(),
    };
    Ok(Rendered {
        body,
        diagnostics: Vec::new(),
        exit: EXIT_OK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_parsing() {
        assert_eq!(parse_axis("0,0,1").unwrap(), [0.0, 0.0, 1.0]);
        assert_eq!(parse_axis("-1, 2 ,3").unwrap(), [-1.0, 2.0, 3.0]);
        assert!(parse_axis("0,0").is_err());
        assert!(parse_axis("a,b,c").is_err());
        assert!(parse_axis("0,0,0").is_err());
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_f64(-1.0), "-1.0000000000000000e0");
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
    }
}
