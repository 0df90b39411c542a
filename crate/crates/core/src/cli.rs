//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 malformed input, 3 a
//! verification mismatch, 4 race search exhausted.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::construction::{build_sets, verify_differences};
use crate::discrete::{search_race_sets, SearchOutcome};
use crate::error::Error as CoreError;
use crate::interval::IntervalUnion;
use crate::rational::Rational;
use crate::realization::{realize, verify_tau_race};
use crate::render::{render_svg, RenderSpec};
use crate::schema::{BuildOutput, ProblemSpec, RaceOutput, RaceTargets, SetsFile};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("search exhausted: {0}")]
    Exhausted(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Schema(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Exhausted(_) => 4,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Consistency(_) => CliError::Verification(e.to_string()),
            other => CliError::Schema(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "sumrace",
    version,
    about = "Exact sumset-measure race constructions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build sets realizing the difference targets of a problem file.
    Build { input: PathBuf, output: PathBuf },
    /// Re-check a sets file against a problem file.
    Verify { sets: PathBuf, spec: PathBuf },
    /// Search small integer sets for prescribed sumset-size orders and
    /// realize them as interval unions.
    Race {
        targets: PathBuf,
        output: PathBuf,
        #[arg(long, default_value_t = 12)]
        ground: u32,
        #[arg(long, default_value_t = 5)]
        maxsize: usize,
    },
    /// Render each set and its sumsets as an SVG number line.
    Plot {
        sets: PathBuf,
        svg: PathBuf,
        #[arg(long, default_value_t = 2)]
        hmax: usize,
    },
    /// Cross-check exact measures against grid counts.
    Oracle {
        sets: PathBuf,
        #[arg(long = "grid-step")]
        grid_step: String,
    },
}

pub fn main_with(cli: Cli) -> ExitCode {
    let mut stdout = std::io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Build { input, output } => cmd_build(&input, &output, out),
        Command::Verify { sets, spec } => cmd_verify(&sets, &spec, out),
        Command::Race {
            targets,
            output,
            ground,
            maxsize,
        } => cmd_race(&targets, &output, ground, maxsize, out),
        Command::Plot { sets, svg, hmax } => cmd_plot(&sets, &svg, hmax, out),
        Command::Oracle { sets, grid_step } => cmd_oracle(&sets, &grid_step, out),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn say(out: &mut dyn Write, line: std::fmt::Arguments<'_>) {
    let _ = writeln!(out, "{line}");
}

pub fn cmd_build(input: &Path, output: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let spec: ProblemSpec = parse(input)?;
    let m = spec.diff_matrix()?;
    let built = build_sets(&m, &spec.theta)?;
    let report = verify_differences(&built.sets, &m, &spec.theta)?;
    let pass = report.all_pass();
    let doc = BuildOutput {
        params: built.params,
        scale: built.scale,
        ell: built.ell,
        sets: built.sets,
        report: report.entries,
        telescoping: report.telescoping,
    };
    write_file(output, &to_json(&doc))?;
    let failed = doc.report.iter().filter(|e| !e.pass).count();
    say(
        out,
        format_args!("wrote {} sets to {}", doc.sets.len(), output.display()),
    );
    say(
        out,
        format_args!(
            "{} of {} differences exact",
            doc.report.len() - failed,
            doc.report.len()
        ),
    );
    if !pass {
        return Err(CliError::Verification(format!(
            "{failed} difference checks failed"
        )));
    }
    Ok(())
}

pub fn cmd_verify(sets_path: &Path, spec_path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let sets: SetsFile = parse(sets_path)?;
    let spec: ProblemSpec = parse(spec_path)?;
    let m = spec.diff_matrix()?;
    if sets.sets.len() != m.n() {
        return Err(CliError::Schema(format!(
            "{} sets but n = {}",
            sets.sets.len(),
            m.n()
        )));
    }
    let report = verify_differences(&sets.sets, &m, &spec.theta)?;
    say(
        out,
        format_args!(
            "{:>3} {:>3}  {:>24}  {:>24}  result",
            "i", "h", "computed", "target"
        ),
    );
    for e in &report.entries {
        let verdict = if e.pass { "pass" } else { "FAIL" };
        say(
            out,
            format_args!(
                "{:>3} {:>3}  {:>24}  {:>24}  {verdict}",
                e.i,
                e.h,
                e.computed.to_string(),
                e.target.to_string()
            ),
        );
    }
    let bad_tel = report.telescoping.iter().filter(|t| !t.pass).count();
    say(
        out,
        format_args!(
            "telescoping: {} of {} pairs exact",
            report.telescoping.len() - bad_tel,
            report.telescoping.len()
        ),
    );
    if !report.all_pass() {
        let rows: Vec<String> = report
            .failures()
            .map(|e| format!("(i={}, h={})", e.i, e.h))
            .collect();
        return Err(CliError::Verification(format!(
            "failing rows: {}",
            rows.join(", ")
        )));
    }
    Ok(())
}

pub fn cmd_race(
    targets_path: &Path,
    output: &Path,
    ground: u32,
    maxsize: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let targets = parse::<RaceTargets>(targets_path)?.into_targets();
    let outcome = search_race_sets(&targets, ground, maxsize)?;
    let SearchOutcome::Found(witness) = outcome else {
        return Err(CliError::Exhausted(format!(
            "no witness with ground {ground} and maxsize {maxsize}"
        )));
    };
    let h_max = targets.len();
    let (sets, plan) = realize(&witness, h_max)?;
    let report = verify_tau_race(&sets, &plan)?;
    for (e, t) in report.entries.iter().zip(&targets) {
        let ok = e.pass && e.tau_measures == *t;
        say(
            out,
            format_args!(
                "h={} sizes={:?} tau={:?} {}",
                e.h,
                e.sizes,
                e.tau_measures.values(),
                if ok { "pass" } else { "FAIL" }
            ),
        );
    }
    let hits_targets = report
        .entries
        .iter()
        .zip(&targets)
        .all(|(e, t)| e.tau_measures == *t);
    let pass = report.all_pass() && hits_targets;
    let doc = RaceOutput {
        targets,
        ground,
        maxsize,
        witness,
        eta: plan.eta,
        h_max,
        sets,
        report: report.entries,
    };
    write_file(output, &to_json(&doc))?;
    if !pass {
        return Err(CliError::Verification(
            "realized measures do not follow the targets".into(),
        ));
    }
    Ok(())
}

pub fn cmd_plot(
    sets_path: &Path,
    svg_path: &Path,
    hmax: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if hmax == 0 {
        return Err(CliError::Schema("--hmax must be at least 1".into()));
    }
    let sets: SetsFile = parse(sets_path)?;
    let mut rows: Vec<(String, IntervalUnion)> = Vec::new();
    for (i, a) in sets.sets.iter().enumerate() {
        let folds = if a.is_empty() {
            vec![IntervalUnion::empty(); hmax]
        } else {
            a.hfold_profile(hmax)?
        };
        for (h, f) in folds.into_iter().enumerate() {
            let label = if h == 0 {
                format!("A_{}", i + 1)
            } else {
                format!("{}A_{}", h + 1, i + 1)
            };
            rows.push((label, f));
        }
    }
    let spec = RenderSpec::new(1000.0, rows)?;
    write_file(svg_path, &render_svg(&spec))?;
    say(
        out,
        format_args!("wrote {} rows to {}", spec.rows.len(), svg_path.display()),
    );
    Ok(())
}

pub fn cmd_oracle(sets_path: &Path, grid_step: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let g: Rational = grid_step.parse()?;
    let sets: SetsFile = parse(sets_path)?;
    let mut bad = Vec::new();
    for (i, a) in sets.sets.iter().enumerate() {
        let b = a.grid_measure_oracle(&g)?;
        let mu = a.measure();
        let gap_bound = Rational::from_integer(2 * a.len() as i64) * &g;
        let ok = b.inner <= mu && mu <= b.outer && &b.outer - &b.inner <= gap_bound;
        say(
            out,
            format_args!(
                "A_{}: inner {} <= measure {} <= outer {} {}",
                i + 1,
                b.inner,
                mu,
                b.outer,
                if ok { "pass" } else { "FAIL" }
            ),
        );
        if !ok {
            bad.push(i + 1);
        }
    }
    if !bad.is_empty() {
        return Err(CliError::Verification(format!(
            "grid sandwich violated for sets {bad:?}"
        )));
    }
    Ok(())
}
