//! Command implementations for the `sullivan` binary.
//!
//! Exit codes: 0 when everything passes, 1 when a computation or check
//! fails, 2 for usage errors.

pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use sullivan_core::expr::{load_model, print_element, save_model, ModelDocument};
use sullivan_core::reduction::minimize;
use sullivan_core::{BuiltinModel, FreeCdga};

pub use verify::{verify_rank, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "sullivan",
    version,
    about = "Exact Sullivan-model computations over the rationals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a built-in model.
    Model {
        /// cpn, ptangent, flag-min or flag-big
        name: String,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print Betti numbers of a built-in model or a model file.
    Betti {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        max_degree: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the full verification pipeline for each rank in a range.
    Verify {
        /// A rank `N` or an inclusive range `A..B`
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<u32>,
        /// Highest degree for cohomology checks (default 4n, the minimum)
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Include per-check wall-clock timings
        #[arg(long)]
        timings: bool,
    },
    /// Eliminate contractible pairs until the model is minimal.
    Reduce {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct Source {
    /// Built-in model name (requires --n)
    #[arg(conflicts_with = "file", required_unless_present = "file")]
    pub name: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    /// Model document, text or JSON
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// JSON
    Structured,
}

fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
        None => (parse(s)?, parse(s)?),
    };
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok(lo..=hi)
}

/// A failed command: message for stderr plus exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn failure(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_FAILURE,
        message: message.into(),
    }
}

/// Parses `args` (program name first) and runs the command, writing results
/// to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Model { name, n, format } => cmd_model(&name, n, format, out),
        Command::Betti {
            source,
            max_degree,
            format,
        } => cmd_betti(&source, max_degree, format, out),
        Command::Verify {
            n,
            max_degree,
            format,
            timings,
        } => cmd_verify(n, max_degree, format, timings, out),
        Command::Reduce {
            source,
            max_steps,
            format,
        } => cmd_reduce(&source, max_steps, format, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn builtin(name: &str, n: u32) -> Result<FreeCdga, Failure> {
    let model: BuiltinModel = name.parse().map_err(|_| {
        usage(format!(
            "unknown model `{name}`; expected one of cpn, ptangent, flag-min, flag-big"
        ))
    })?;
    if n < model.min_rank() {
        return Err(usage(format!(
            "{model} needs --n {} or larger",
            model.min_rank()
        )));
    }
    model.build(n).map_err(|e| failure(e.to_string()))
}

fn read_document(path: &Path) -> Result<ModelDocument, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    ModelDocument::parse(&text).map_err(|e| failure(format!("{}: {e}", path.display())))
}

fn resolve(source: &Source) -> Result<(FreeCdga, String), Failure> {
    match (&source.name, &source.file) {
        (Some(name), None) => {
            let n = source
                .n
                .ok_or_else(|| usage(format!("model `{name}` needs --n")))?;
            Ok((builtin(name, n)?, format!("{name} n={n}")))
        }
        (None, Some(path)) => {
            if source.n.is_some() {
                return Err(usage("--n applies to built-in models only"));
            }
            let doc = read_document(path)?;
            let c = load_model(&doc).map_err(|e| failure(format!("{}: {e}", path.display())))?;
            Ok((c, path.display().to_string()))
        }
        _ => Err(usage("give either a built-in model name or --file")),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<i32, Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| failure(format!("cannot write output: {e}")))?;
    Ok(EXIT_OK)
}

fn pretty(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn cmd_model(name: &str, n: u32, format: Format, out: &mut dyn Write) -> Result<i32, Failure> {
    let c = builtin(name, n)?;
    let doc = save_model(&c)
        .with_metadata("name", name)
        .with_metadata("n", n);
    match format {
        Format::Text => emit(out, &doc.to_text()),
        Format::Structured => emit(out, &pretty(&doc)),
    }
}

fn cmd_betti(
    source: &Source,
    max_degree: u32,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let (c, label) = resolve(source)?;
    let table = c.betti(max_degree);
    match format {
        Format::Text => {
            let mut text = format!("# {label}\n{table}\n");
            for (d, b) in table.dims().iter().enumerate() {
                text.push_str(&format!("{d}\t{b}\n"));
            }
            emit(out, &text)
        }
        Format::Structured => {
            let map: Map<String, Value> = table
                .dims()
                .iter()
                .enumerate()
                .map(|(d, &b)| (d.to_string(), json!(b)))
                .collect();
            emit(out, &pretty(&map))
        }
    }
}

fn cmd_verify(
    range: RangeInclusive<u32>,
    max_degree: Option<u32>,
    format: Format,
    timings: bool,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    if *range.start() < 2 {
        return Err(usage("verification needs n >= 2"));
    }
    if let Some(d) = max_degree {
        let needed = 4 * range.end();
        if d < needed {
            return Err(usage(format!(
                "--max-degree {d} is too low: degree 4n = {needed} is needed to see the top class and the vanishing above it"
            )));
        }
    }
    let ranks: Vec<u32> = range.collect();
    let reports: Vec<VerificationReport> = ranks
        .par_iter()
        .map(|&n| verify_rank(n, max_degree.unwrap_or(4 * n), timings))
        .collect();
    let all_passed = reports.iter().all(|r| r.passed);
    match format {
        Format::Text => {
            let mut text = String::new();
            for r in &reports {
                text.push_str(&format!("n = {}\n", r.n));
                for check in &r.checks {
                    text.push_str(&format!("  {check}"));
                    if let Some(ms) = r.timings_ms.as_ref().and_then(|t| t.get(&check.name)) {
                        text.push_str(&format!(" [{ms:.1} ms]"));
                    }
                    text.push('\n');
                }
                for (name, dims) in &r.betti_tables {
                    let dims: Vec<String> = dims.iter().map(usize::to_string).collect();
                    text.push_str(&format!("  betti {name}: {}\n", dims.join(",")));
                }
            }
            emit(out, &text)?;
        }
        Format::Structured => {
            emit(
                out,
                &pretty(&json!({ "passed": all_passed, "reports": reports })),
            )?;
        }
    }
    match reports
        .iter()
        .find_map(|r| r.first_failure().map(|c| (r.n, c)))
    {
        None => Ok(EXIT_OK),
        Some((n, check)) => Err(failure(format!("n = {n}: check `{}` failed", check.name))),
    }
}

fn cmd_reduce(
    source: &Source,
    max_steps: Option<usize>,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let (c, _) = resolve(source)?;
    let cascade = minimize(&c, max_steps).map_err(|e| failure(e.to_string()))?;
    let final_doc = save_model(cascade.reduced());
    let steps: Vec<Value> = cascade
        .steps
        .iter()
        .zip(&cascade.models[1..])
        .map(|(s, m)| {
            json!({
                "odd": s.killed_odd.name(),
                "even": s.killed_even.name(),
                "coefficient": s.coefficient.to_string(),
                "substitution": print_element(m.algebra(), &s.substitution),
            })
        })
        .collect();
    match format {
        Format::Text => {
            let mut text = String::new();
            for (i, s) in steps.iter().enumerate() {
                text.push_str(&format!(
                    "step {}: cancel ({}, {}), {} = {}\n",
                    i + 1,
                    s["odd"].as_str().unwrap_or_default(),
                    s["even"].as_str().unwrap_or_default(),
                    s["even"].as_str().unwrap_or_default(),
                    s["substitution"].as_str().unwrap_or_default(),
                ));
            }
            text.push_str(&format!("eliminations: {}\n", steps.len()));
            text.push_str(&final_doc.to_text());
            emit(out, &text)
        }
        Format::Structured => emit(out, &pretty(&json!({ "steps": steps, "model": final_doc }))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..4").unwrap(), 2..=4);
        assert_eq!(parse_range("3").unwrap(), 3..=3);
        assert_eq!(parse_range("2..=5").unwrap(), 2..=5);
        assert!(parse_range("4..2").is_err());
        assert!(parse_range("x").is_err());
    }
}
