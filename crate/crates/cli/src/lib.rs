//! The `gslice` command line: `run`, `slice` and `check`.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use gslice::interp::display::{fibre_json, show_fibre, show_tangent, tangent_json, value_json};
use gslice::lattice::{bottom, top, FibreDesc};
use gslice::oracle::{check_galois, rng, sampled_galois, seed_from_env, Report};
use gslice::program::Loaded;
use serde_json::json;
use thiserror::Error;

/// Largest fibre `check` will enumerate.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 16;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Load { path: PathBuf, source: gslice::Error },
    #[error(transparent)]
    Core(#[from] gslice::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "gslice", version, about = "Galois slicing for a small functional language")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a program and print its output and fibre shapes.
    Run(Target),
    /// Push an input slice forward or pull an output slice back.
    Slice(SliceArgs),
    /// Check the adjunction and evaluator agreement at each input.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct Target {
    /// Program file.
    pub file: PathBuf,
    /// Signature interpretation; overrides the file's `-- sig:` line.
    #[arg(long)]
    pub sig: Option<String>,
    /// Argument tuple literal; defaults to the file's first `-- input:` line.
    #[arg(long)]
    pub input: Option<String>,
    /// Slice the call-by-name translation.
    #[arg(long)]
    pub cbn: bool,
    /// Machine-readable output.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SliceArgs {
    #[command(flatten)]
    pub target: Target,
    /// Output slice to pull back.
    #[arg(long, conflicts_with = "fwd", required_unless_present = "fwd")]
    pub bwd: Option<String>,
    /// Input slice to push forward.
    #[arg(long)]
    pub fwd: Option<String>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Program file.
    pub file: PathBuf,
    #[arg(long)]
    pub sig: Option<String>,
    #[arg(long)]
    pub cbn: bool,
    /// A file with one input per line, or inline literals separated by `;`.
    /// Defaults to the file's `-- input:` lines.
    #[arg(long)]
    pub inputs: Option<String>,
    /// Check random pairs instead of enumerating fibres. `GSLICE_SEED` fixes the seed.
    #[arg(long)]
    pub sampled: bool,
    /// Pairs per input in sampled mode.
    #[arg(long, default_value_t = 100)]
    pub pairs: usize,
}

/// How `check` covers the fibres.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { seed: u64, pairs: usize },
}

/// Runs a parsed command. `Ok(false)` means a check found a violation.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<bool, CliError> {
    match &cli.command {
        Command::Run(t) => run(t, out).map(|_| true),
        Command::Slice(s) => slice(s, out).map(|_| true),
        Command::Check(c) => check(c, out),
    }
}

fn load(file: &Path, sig: Option<&str>, cbn: bool) -> Result<(Loaded, Vec<String>), CliError> {
    let src = std::fs::read_to_string(file).map_err(|source| CliError::Read { path: file.into(), source })?;
    let (loaded, program) =
        Loaded::load(&src, sig, cbn).map_err(|source| CliError::Load { path: file.into(), source })?;
    Ok((loaded, program.inputs))
}

fn pick_input(given: Option<&str>, pragma: &[String]) -> Result<String, CliError> {
    given
        .map(str::to_string)
        .or_else(|| pragma.first().cloned())
        .ok_or_else(|| CliError::Usage("no --input given and the file has no `-- input:` line".into()))
}

fn run(t: &Target, out: &mut dyn Write) -> Result<(), CliError> {
    let (loaded, pragma) = load(&t.file, t.sig.as_deref(), t.cbn)?;
    let args = loaded.parse_input(&pick_input(t.input.as_deref(), &pragma)?)?;
    let x = loaded.slice_input(&args);
    let c = loaded.compiled();
    let s = c.session(&x)?;
    let output = loaded.run(&args);
    if t.json {
        let j = json!({
            "output": value_json(&output),
            "fibre": { "input": fibre_json(s.input_fibre()), "output": fibre_json(s.output_fibre()) },
            "tangent": null,
        });
        writeln!(out, "{j}")?;
    } else {
        writeln!(out, "output: {output}")?;
        writeln!(out, "input fibre: {}", show_fibre(c.input_ty(), &x, s.input_fibre()))?;
        writeln!(out, "output fibre: {}", show_fibre(c.output_ty(), s.output(), s.output_fibre()))?;
    }
    Ok(())
}

fn slice(a: &SliceArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let t = &a.target;
    let (loaded, pragma) = load(&t.file, t.sig.as_deref(), t.cbn)?;
    let args = loaded.parse_input(&pick_input(t.input.as_deref(), &pragma)?)?;
    let x = loaded.slice_input(&args);
    let c = loaded.compiled();
    let s = c.session(&x)?;
    let (ity, oty) = (c.input_ty(), c.output_ty());
    let (text, fibre, elem, usage) = match (&a.bwd, &a.fwd) {
        (Some(dy), _) => {
            let dy = gslice::interp::display::read_tangent(oty, s.output(), s.output_fibre(), dy)?;
            let e = s.bwd_unchecked(&dy);
            let usage = match &loaded {
                Loaded::Cbn(p) => Some(p.usage_summary(&args, s.input_fibre(), &e)),
                Loaded::Direct(_) => None,
            };
            (show_tangent(ity, &x, s.input_fibre(), &e), s.input_fibre(), e, usage)
        }
        (None, Some(dx)) => {
            let dx = gslice::interp::display::read_tangent(ity, &x, s.input_fibre(), dx)?;
            let e = s.fwd_unchecked(&dx);
            (show_tangent(oty, s.output(), s.output_fibre(), &e), s.output_fibre(), e, None)
        }
        (None, None) => return Err(CliError::Usage("slice needs --bwd or --fwd".into())),
    };
    if t.json {
        let mut j = json!({
            "output": value_json(&loaded.run(&args)),
            "fibre": fibre_json(fibre),
            "tangent": tangent_json(fibre, &elem),
        });
        if let Some(u) = usage {
            j["usage"] = json!(u);
        }
        writeln!(out, "{j}")?;
    } else {
        writeln!(out, "{text}")?;
        if let Some(u) = usage {
            writeln!(out, "usage: {u}")?;
        }
    }
    Ok(())
}

fn read_inputs(arg: &str) -> Result<Vec<String>, CliError> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?
    } else {
        arg.replace(';', "\n")
    };
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect())
}

fn check(a: &CheckArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    let (loaded, pragma) = load(&a.file, a.sig.as_deref(), a.cbn)?;
    let inputs = match &a.inputs {
        Some(arg) => read_inputs(arg)?,
        None => pragma,
    };
    if inputs.is_empty() {
        return Err(CliError::Usage("no inputs: pass --inputs or add `-- input:` lines".into()));
    }
    let mode = if a.sampled { Mode::Sampled { seed: seed_from_env(), pairs: a.pairs } } else { Mode::Exhaustive };
    check_inputs(&loaded, &inputs, mode, out)
}

fn enumerable(d: &FibreDesc, side: &str) -> Result<(), CliError> {
    match d.size() {
        Some(n) if n <= EXHAUSTIVE_LIMIT => Ok(()),
        Some(n) => Err(CliError::Usage(format!(
            "the {side} fibre has {n} elements, over the exhaustive limit of {EXHAUSTIVE_LIMIT}; rerun with --sampled"
        ))),
        None => Err(CliError::Usage(format!("the {side} fibre is infinite; rerun with --sampled"))),
    }
}

/// Checks the adjunction and plain-evaluator agreement of `loaded` at each
/// input, printing one line per input and a summary. Returns whether all
/// checks passed.
pub fn check_inputs(loaded: &Loaded, inputs: &[String], mode: Mode, out: &mut dyn Write) -> Result<bool, CliError> {
    let c = loaded.compiled();
    let mut failed = 0;
    for (i, input) in inputs.iter().enumerate() {
        let args = loaded.parse_input(input)?;
        let s = c.session(&loaded.slice_input(&args))?;
        let (dx, dy) = (s.input_fibre(), s.output_fibre());
        let report = match mode {
            Mode::Exhaustive => {
                enumerable(dx, "input")?;
                enumerable(dy, "output")?;
                check_galois(dx, dy, |e| s.fwd_unchecked(e), |e| s.bwd_unchecked(e)).map_err(gslice::Error::from)?
            }
            Mode::Sampled { seed, pairs } => {
                let mut g = rng(seed.wrapping_add(i as u64));
                let mut r = Report::default();
                r.checks += 2;
                r.failures += u64::from(s.bwd_unchecked(&bottom(dy)) != bottom(dx));
                r.failures += u64::from(s.fwd_unchecked(&top(dx)) != top(dy));
                r.merge(sampled_galois(dx, dy, |e| s.fwd_unchecked(e), |e| s.bwd_unchecked(e), &mut g, pairs));
                r
            }
        };
        let got = loaded.run(&args);
        let want = loaded.run_plain(&args)?;
        let agrees = got == want;
        let ok = report.passed() && agrees;
        failed += usize::from(!ok);
        writeln!(out, "{} {input}", if ok { "ok  " } else { "FAIL" })?;
        for w in &report.witnesses {
            writeln!(out, "  VIOLATION {w}")?;
        }
        writeln!(out, "  {} checks, {} violations", report.checks, report.failures)?;
        if !agrees {
            writeln!(out, "  plain evaluator gives {want}, interpretation gives {got}")?;
        }
    }
    writeln!(out, "{} inputs, {failed} failed", inputs.len())?;
    Ok(failed == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_inputs_split_on_semicolons() {
        assert_eq!(read_inputs("1; 2 ;;3").unwrap(), ["1", "2", "3"]);
    }

    #[test]
    fn slice_needs_a_direction() {
        assert!(Cli::try_parse_from(["gslice", "slice", "f.gs"]).is_err());
        assert!(Cli::try_parse_from(["gslice", "slice", "f.gs", "--bwd", "^", "--fwd", "_"]).is_err());
    }
}
