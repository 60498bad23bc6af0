//! Command-line front end: argument parsing, input loading and the
//! plain-text `key: value` reports.

mod commands;
mod report;

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand};

pub use report::Report;

const GROUP_FORMAT: &str = "Input: a group file (README, \"Group file\"), a group-law file (README, \"Group-law file\") or presets:NAME.";
const BRACE_FORMAT: &str = "Input: a brace file (README, \"Brace file\"), a brace-law file (README, \"Brace-law file\") or presets:NAME.";
const STRUCTURE_FORMAT: &str = "Input: a brace file (README, \"Brace file\"), a Lie algebra file (README, \"Lie algebra file\"), a post-Lie file (README, \"Post-Lie file\") or presets:NAME.";
const POSTLIE_FORMAT: &str = "Input: a post-Lie file (README, \"Post-Lie file\") or presets:NAME.";
const BRACELAW_FORMAT: &str = "Input: a brace-law file (README, \"Brace-law file\") or presets:NAME.";

#[derive(Parser, Debug)]
#[command(
    name = "lsb",
    version,
    about = "Finite skew braces, post-Lie algebras and Lie group laws",
    after_help = "Exit status: 0 pass, 1 mathematical failure, 2 usage or I/O error.\nInputs are file paths or presets:NAME (see `lsb presets`)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Number of random samples for numeric checks.
    #[arg(long, global = true, default_value = "1000")]
    pub samples: usize,
    /// Pass threshold for numeric residuals.
    #[arg(long, global = true, default_value = "1e-8")]
    pub tol: f64,
    /// Seed for the sample generator.
    #[arg(long, global = true, default_value = "42")]
    pub seed: u64,
    /// Largest denominator accepted when rationalizing extracted tensors.
    #[arg(long = "max-den", global = true, default_value = "64")]
    pub max_den: u64,
    /// Largest finite order handled by ideal searches and enumeration.
    #[arg(long = "max-order", global = true, default_value = "60")]
    pub max_order: usize,
    /// Output destination; `-` is standard output.
    #[arg(long, global = true, default_value = "-")]
    pub out: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify group axioms of a table, or sample a closed-form group law.
    #[command(after_help = GROUP_FORMAT)]
    CheckGroup { input: String },
    /// Verify a finite skew brace and summarize it, or sample a brace law.
    #[command(after_help = BRACE_FORMAT)]
    CheckBrace { input: String },
    /// List the ideals of a brace, Lie algebra or post-Lie algebra.
    #[command(after_help = STRUCTURE_FORMAT)]
    Ideals { input: String },
    /// Print the derived series of a brace, Lie algebra or post-Lie algebra.
    #[command(after_help = STRUCTURE_FORMAT)]
    Derived { input: String },
    /// Quotient of a finite brace by an ideal, written as a brace file.
    #[command(after_help = "Input: a brace file (README, \"Brace file\") or presets:NAME.")]
    Quotient {
        input: String,
        /// Elements of the ideal, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        ideal: Vec<usize>,
    },
    /// Enumerate all skew braces with a given additive group.
    #[command(after_help = "Input: a group file (README, \"Group file\") or presets:NAME.")]
    Enumerate {
        /// Additive group.
        #[arg(long)]
        additive: String,
        /// Also report the simple braces, grouped by multiplicative group.
        #[arg(long = "report-simple")]
        report_simple: bool,
    },
    /// Verify the post-Lie axioms on every basis triple.
    #[command(name = "postlie-check", after_help = POSTLIE_FORMAT)]
    PostlieCheck { input: String },
    /// Classify a post-Lie algebra whose sub-adjacent algebra is simple.
    #[command(after_help = POSTLIE_FORMAT)]
    Rigidity { input: String },
    /// Sample the brace identity of a pair of closed-form laws.
    #[command(name = "lsb-check", after_help = BRACELAW_FORMAT)]
    LsbCheck { input: String },
    /// Extract and rationalize the post-Lie algebra of a brace law.
    #[command(after_help = "Input: a brace-law file (README, \"Brace-law file\") or presets:NAME.\nOutput: a post-Lie file (README, \"Post-Lie file\").")]
    Extract { input: String },
    /// List built-in structures, or print one in file format.
    #[command(after_help = "Every file format in the README has built-in examples.")]
    Presets { name: Option<String> },
}

/// Exit status and text produced by one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
pub(crate) enum CliError {
    Usage(String),
    Io(String),
    Math(String),
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let opts = cli.options.clone();
    let (name, input) = describe(&cli.command);
    let mut report = Report::new(name, input.as_deref());
    let result = match &cli.command {
        Command::CheckGroup { input } => commands::check_group(input, &opts, &mut report),
        Command::CheckBrace { input } => commands::check_brace(input, &opts, &mut report),
        Command::Ideals { input } => commands::ideals(input, &opts, &mut report),
        Command::Derived { input } => commands::derived(input, &opts, &mut report),
        Command::Quotient { input, ideal } => commands::quotient(input, ideal, &opts, &mut report),
        Command::Enumerate {
            additive,
            report_simple,
        } => commands::enumerate(additive, *report_simple, &opts, &mut report),
        Command::PostlieCheck { input } => commands::postlie_check(input, &mut report),
        Command::Rigidity { input } => commands::rigidity(input, &mut report),
        Command::LsbCheck { input } => commands::lsb_check(input, &opts, &mut report),
        Command::Extract { input } => commands::extract(input, &opts, &mut report),
        Command::Presets { name } => commands::presets(name.as_deref(), &mut report),
    };
    match result {
        Ok(()) => {}
        Err(CliError::Math(reason)) => report.fail(&reason),
        Err(CliError::Usage(msg)) => return usage_error(&msg),
        Err(CliError::Io(msg)) => return usage_error(&msg),
    }
    emit(&report, &opts.out)
}

fn usage_error(msg: &str) -> Outcome {
    Outcome {
        code: 2,
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
    }
}

fn describe(command: &Command) -> (&'static str, Option<String>) {
    match command {
        Command::CheckGroup { input } => ("check-group", Some(input.clone())),
        Command::CheckBrace { input } => ("check-brace", Some(input.clone())),
        Command::Ideals { input } => ("ideals", Some(input.clone())),
        Command::Derived { input } => ("derived", Some(input.clone())),
        Command::Quotient { input, .. } => ("quotient", Some(input.clone())),
        Command::Enumerate { additive, .. } => ("enumerate", Some(additive.clone())),
        Command::PostlieCheck { input } => ("postlie-check", Some(input.clone())),
        Command::Rigidity { input } => ("rigidity", Some(input.clone())),
        Command::LsbCheck { input } => ("lsb-check", Some(input.clone())),
        Command::Extract { input } => ("extract", Some(input.clone())),
        Command::Presets { .. } => ("presets", None),
    }
}

/// Writes the rendered output to `--out`. When a file receives an artifact,
/// the plain report still goes to standard output.
fn emit(report: &Report, out: &str) -> Outcome {
    let code = if report.passed() { 0 } else { 1 };
    let rendered = report.render();
    if out == "-" {
        return Outcome {
            code,
            stdout: rendered,
            stderr: String::new(),
        };
    }
    if let Err(e) = std::fs::write(out, &rendered) {
        return usage_error(&format!("cannot write {out}: {e}"));
    }
    let stdout = if report.has_artifact() { report.render_plain() } else { String::new() };
    Outcome {
        code,
        stdout,
        stderr: String::new(),
    }
}
