//! Command-line front end: `analyze`, `verify` and `oracle` over instance files.

pub mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use morse_orbit::engine::verify::{verify_instance, VerifyOptions};
use morse_orbit::engine::{analyze_instance, AnalysisResult, Certification, EngineError};
use morse_orbit::groups::{FiniteGroupExpr, GroupError, DEFAULT_ORDER_CAP};
use morse_orbit::model::{parse_instance, ModelError, ProblemInstance};
use morse_orbit::oracle::{self, OracleError};
use morse_orbit::torus::{AffineTorusMap, TorusAction, TorusError};

use report::{AnalysisReport, InstanceSummary, MapReport, OraclePiece, Report, VerificationReport, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_CAP: i32 = 4;
pub const EXIT_FAILED: i32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "morse-orbit", version, about = "Homotopy models of orbits of Morse maps on surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// largest group order that is enumerated
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER_CAP)]
    max_order: u64,
    /// skip the automorphism oracle during `verify`
    #[arg(long, global = true)]
    skip_oracle: bool,
    /// seed for sampled checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// seed a fault into the action (verify) or the engine group (oracle)
    #[arg(long, global = true, hide = true)]
    corrupt: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// compute G, p, H1 and the homotopy type
    Analyze { path: PathBuf },
    /// analyze, then run the property checks
    Verify { path: PathBuf },
    /// compare the engine group with the tree automorphism group
    Oracle { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(exit_code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        stderr.push('\n');
        Outcome { exit_code, stdout: String::new(), stderr }
    }
}

fn model_exit(e: &ModelError) -> i32 {
    match e {
        ModelError::UnsupportedSurface(_) => EXIT_UNSUPPORTED,
        _ => EXIT_INVALID,
    }
}

fn engine_exit(e: &EngineError) -> i32 {
    match e {
        _ if e.is_cap_exceeded() => EXIT_CAP,
        EngineError::Model(m) => model_exit(m),
        EngineError::Torus(TorusError::NotFree { .. }) => EXIT_FAILED,
        _ => EXIT_INVALID,
    }
}

fn load(path: &Path) -> Result<ProblemInstance, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::error(EXIT_INVALID, format!("error: cannot read {}: {e}", path.display())))?;
    let instance = parse_instance(&text).map_err(|e| Outcome::error(model_exit(&e), format!("error: {e}")))?;
    instance.surface.validate().map_err(|e| Outcome::error(model_exit(&e), format!("error: {e}")))?;
    Ok(instance)
}

fn generators(a: &AnalysisResult) -> Vec<MapReport> {
    a.target
        .generators()
        .into_iter()
        .filter_map(|g| {
            let map = a.action.evaluate(&g).ok()?;
            Some(MapReport {
                element: g.to_string(),
                perm: map.perm().to_vec(),
                trans: map.trans().iter().map(ToString::to_string).collect(),
            })
        })
        .collect()
}

/// Zeroes the translation of the first non-identity element; for a trivial
/// group the identity is moved by a half turn instead.
fn corrupt_action(action: &TorusAction, cap: u64) -> Result<TorusAction, EngineError> {
    let table = action.tabulate(cap)?;
    let identity = action.group().identity();
    let Some((g, map)) = table.iter().find(|(g, _)| *g != identity).or(table.first()) else {
        return Ok(action.clone());
    };
    let mut trans = vec![BigRational::from_integer(0.into()); map.dim()];
    if *g == identity {
        if let Some(t) = trans.first_mut() {
            *t = "1/2".parse().expect("literal rational");
        }
    }
    let bad = AffineTorusMap::new(map.perm().to_vec(), trans)?;
    Ok(action.with_override(g, bad, cap)?)
}

struct Context {
    cli: Cli,
    file: String,
}

impl Context {
    fn render(&self, report: &Report, exit_code: i32, stderr: String) -> Outcome {
        let stdout = match self.cli.format {
            Format::Text => report.to_text(),
            Format::Machine => report.to_machine(),
        };
        Outcome { exit_code, stdout, stderr }
    }

    fn base(&self, command: &str, instance: &ProblemInstance) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            instance: InstanceSummary::new(&self.file, instance),
            analysis: None,
            verification: None,
            oracle: None,
        }
    }

    fn analyze(&self, instance: &ProblemInstance) -> Result<(AnalysisResult, Report), Outcome> {
        let a = analyze_instance(instance, self.cli.max_order)
            .map_err(|e| Outcome::error(engine_exit(&e), format!("error: {e}")))?;
        let mut report = self.base("analyze", instance);
        report.analysis = Some(AnalysisReport::new(instance, &a, generators(&a)));
        Ok((a, report))
    }

    fn skipped_message(&self, a: &AnalysisResult) -> String {
        format!("error: |G| = {} exceeds --max-order {}; certification skipped\n", a.order, self.cli.max_order)
    }

    fn cmd_analyze(&self, instance: &ProblemInstance) -> Outcome {
        let (a, report) = match self.analyze(instance) {
            Ok(x) => x,
            Err(o) => return o,
        };
        match a.certification {
            Certification::Certified { .. } => self.render(&report, EXIT_OK, String::new()),
            Certification::Skipped { .. } => self.render(&report, EXIT_CAP, self.skipped_message(&a)),
        }
    }

    fn cmd_verify(&self, instance: &ProblemInstance) -> Outcome {
        let (mut a, mut report) = match self.analyze(instance) {
            Ok(x) => x,
            Err(o) => return o,
        };
        report.command = "verify".into();
        if !a.is_certified() {
            return self.render(&report, EXIT_CAP, self.skipped_message(&a));
        }
        if self.cli.corrupt {
            match corrupt_action(&a.action, self.cli.max_order) {
                Ok(bad) => a.action = bad,
                Err(e) => return Outcome::error(engine_exit(&e), format!("error: {e}")),
            }
        }
        let opts = VerifyOptions {
            cap: self.cli.max_order,
            seed: self.cli.seed,
            skip_oracle: self.cli.skip_oracle,
            ..VerifyOptions::default()
        };
        match verify_instance(instance, &a, &opts) {
            Ok(checks) => {
                let v = VerificationReport::new(&checks);
                let (code, stderr) = if v.passed {
                    (EXIT_OK, String::new())
                } else {
                    let failed: Vec<&str> = v.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
                    (EXIT_FAILED, format!("error: failed checks: {}\n", failed.join(", ")))
                };
                report.verification = Some(v);
                self.render(&report, code, stderr)
            }
            Err(e) if e.is_cap_exceeded() => self.render(&report, EXIT_CAP, format!("error: {e}\n")),
            Err(e) => Outcome::error(engine_exit(&e), format!("error: {e}")),
        }
    }

    fn cmd_oracle(&self, instance: &ProblemInstance) -> Outcome {
        let a = match analyze_instance(instance, self.cli.max_order) {
            Ok(a) => a,
            Err(e) => return Outcome::error(engine_exit(&e), format!("error: {e}")),
        };
        let mut report = self.base("oracle", instance);
        let mut pieces = Vec::new();
        for (i, (tree, piece)) in instance.pieces.iter().zip(&a.pieces).enumerate() {
            let target = if self.cli.corrupt {
                let n = piece.target.order_within(self.cli.max_order).unwrap_or(0) as usize;
                FiniteGroupExpr::cyclic(n + 1)
            } else {
                piece.target.clone()
            };
            match oracle::compare(&target, tree, self.cli.max_order) {
                Ok(r) => pieces.push(OraclePiece::new(i, &r)),
                Err(e @ (OracleError::CapExceeded { .. } | OracleError::Group(GroupError::CapExceeded { .. }))) => {
                    report.oracle = Some(pieces);
                    return self.render(&report, EXIT_CAP, format!("error: piece {i}: {e}\n"));
                }
                Err(e) => {
                    report.oracle = Some(pieces);
                    return self.render(&report, EXIT_FAILED, format!("error: piece {i}: {e}\n"));
                }
            }
        }
        let all_match = pieces.iter().all(|p| p.verdict == "MATCH");
        report.oracle = Some(pieces);
        if all_match {
            self.render(&report, EXIT_OK, String::new())
        } else {
            self.render(&report, EXIT_FAILED, "error: oracle MISMATCH\n".into())
        }
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { exit_code: EXIT_INVALID, stdout: String::new(), stderr: text }
            } else {
                Outcome { exit_code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let path = match &cli.command {
        Command::Analyze { path } | Command::Verify { path } | Command::Oracle { path } => path.clone(),
    };
    let instance = match load(&path) {
        Ok(i) => i,
        Err(o) => return o,
    };
    let file = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
    let ctx = Context { cli, file };
    match ctx.cli.command {
        Command::Analyze { .. } => ctx.cmd_analyze(&instance),
        Command::Verify { .. } => ctx.cmd_verify(&instance),
        Command::Oracle { .. } => ctx.cmd_oracle(&instance),
    }
}
