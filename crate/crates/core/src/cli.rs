//! The `egsimp` command line.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};

use clap::{Parser, ValueEnum};

use crate::eg::{compute_stats, Formula};
use crate::engine::{simplify, EngineConfig};
use crate::error::Error;
use crate::oracle::equiv_check;
use crate::parse::{parse_auto, parse_dimacs, parse_pl};
use crate::render::{export_dot, render_pl, to_cnf, DotTarget, DEFAULT_CNF_CAP};
use crate::rules::EquivClasses;

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;
pub const EXIT_LIMIT: i32 = 70;
const EXIT_IO: i32 = 74;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Simplify,
    Stats,
    Prove,
    Cnf,
    Dot,
    Check,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Auto,
    Pl,
    Dimacs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Pl,
    Dimacs,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DotKind {
    Eg,
    Big,
}

impl From<DotKind> for DotTarget {
    fn from(k: DotKind) -> Self {
        match k {
            DotKind::Eg => DotTarget::Eg,
            DotKind::Big => DotTarget::Big,
        }
    }
}

/// Simplify propositional formulas with existential-graph rules.
#[derive(Debug, Parser)]
#[command(name = "egsimp", version)]
pub struct CliInvocation {
    #[arg(value_enum)]
    pub command: Command,
    /// Formula text; overrides --input.
    pub formula: Option<String>,
    /// Input file, or `-` for stdin.
    #[arg(long, default_value = "-")]
    pub input: String,
    #[arg(long, value_enum, default_value = "auto")]
    pub format: InputFormat,
    #[arg(long, value_enum)]
    pub emit: Option<Emit>,
    /// Write the JSON-lines trace here.
    #[arg(long)]
    pub trace: Option<String>,
    /// Write exported equivalence classes here (read them for `check`).
    #[arg(long)]
    pub classes: Option<String>,
    #[arg(long)]
    pub dot: Option<String>,
    #[arg(long, value_enum, default_value = "eg")]
    pub dot_target: DotKind,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub noninjective_twsr: bool,
    /// Original formula for `check`.
    #[arg(long)]
    pub against: Option<String>,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::TooManyVariables { .. } => EXIT_PARSE,
            _ => EXIT_LIMIT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &str, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("{path}: {e}"),
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
}

impl Io<'_> {
    fn read(&mut self, path: &str) -> Result<String, Failure> {
        if path == "-" {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| io_failure("stdin", e))?;
            Ok(s)
        } else {
            fs::read_to_string(path).map_err(|e| io_failure(path, e))
        }
    }

    fn write(&mut self, path: &str, text: &str) -> Result<(), Failure> {
        if path == "-" {
            self.stdout
                .write_all(text.as_bytes())
                .map_err(|e| io_failure("stdout", e))
        } else {
            fs::write(path, text).map_err(|e| io_failure(path, e))
        }
    }
}

fn parse_with(text: &str, format: InputFormat) -> Result<Formula, Failure> {
    Ok(match format {
        InputFormat::Auto => parse_auto(text)?,
        InputFormat::Pl => parse_pl(text)?,
        InputFormat::Dimacs => parse_dimacs(text)?,
    })
}

fn emit_formula(
    f: &Formula,
    emit: Emit,
    extra: Option<serde_json::Value>,
) -> Result<String, Failure> {
    Ok(match emit {
        Emit::Pl => format!("{}\n", render_pl(f)),
        Emit::Dimacs => to_cnf(f, DEFAULT_CNF_CAP)?.to_dimacs(),
        Emit::Json => {
            let mut v = serde_json::json!({
                "formula": render_pl(f),
                "stats": compute_stats(f).to_json(),
            });
            if let Some(serde_json::Value::Object(m)) = extra {
                v.as_object_mut().expect("object").extend(m);
            }
            format!("{v}\n")
        }
    })
}

/// Parses `args` (program name first) and runs one command. Returns the
/// process exit status.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let inv = match CliInvocation::try_parse_from(args) {
        Ok(inv) => inv,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
        }
    };
    let mut io = Io { stdin, stdout };
    match run_command(&inv, &mut io) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "egsimp: {}", f.message);
            f.code
        }
    }
}

fn run_command(inv: &CliInvocation, io: &mut Io) -> Result<i32, Failure> {
    if inv.dot.is_some() && !matches!(inv.command, Command::Simplify | Command::Dot) {
        return Err(usage("--dot applies to simplify and dot"));
    }
    if inv.against.is_some() != (inv.command == Command::Check) {
        return Err(usage(
            "--against is required by check and only accepted there",
        ));
    }
    let text = match &inv.formula {
        Some(t) => t.clone(),
        None => io.read(&inv.input)?,
    };
    let input = parse_with(&text, inv.format)?;
    let cfg = EngineConfig {
        max_steps: inv.max_steps,
        injective_twsr: !inv.noninjective_twsr,
        ..EngineConfig::default()
    };
    match inv.command {
        Command::Simplify | Command::Prove => {
            let r = simplify(&input, &cfg)?;
            let names = r.formula.names();
            if let Some(path) = &inv.trace {
                io.write(path, &r.trace.to_json_lines())?;
            }
            if let Some(path) = &inv.classes {
                io.write(path, &format!("{}\n", r.classes.to_json(names)))?;
            }
            if let Some(path) = &inv.dot {
                io.write(path, &export_dot(&r.formula, inv.dot_target.into()))?;
            }
            let extra = serde_json::json!({
                "classes": r.classes.to_json(names),
                "steps": r.trace.len(),
            });
            let out = emit_formula(&r.formula, inv.emit.unwrap_or(Emit::Pl), Some(extra))?;
            io.write("-", &out)?;
            if r.step_limit_hit {
                return Err(Error::StepLimit(inv.max_steps.unwrap_or(0)).into());
            }
            if inv.command == Command::Simplify || r.formula.is_top() {
                Ok(0)
            } else if r.formula.is_bottom() {
                Ok(1)
            } else {
                Ok(2)
            }
        }
        Command::Stats => {
            io.write("-", &format!("{}\n", compute_stats(&input).to_json()))?;
            Ok(0)
        }
        Command::Cnf => {
            let cnf = to_cnf(&input, cfg.cnf_cap)?;
            let out = match inv.emit.unwrap_or(Emit::Dimacs) {
                Emit::Dimacs => cnf.to_dimacs(),
                other => emit_formula(&cnf.to_formula(), other, None)?,
            };
            io.write("-", &out)?;
            Ok(0)
        }
        Command::Dot => {
            let out = export_dot(&input, inv.dot_target.into());
            io.write(inv.dot.as_deref().unwrap_or("-"), &out)?;
            Ok(0)
        }
        Command::Check => {
            let orig_path = inv.against.as_deref().expect("checked above");
            let original = parse_with(&io.read(orig_path)?, inv.format)?;
            let mut names = input.names().clone();
            let classes = match &inv.classes {
                None => EquivClasses::new(),
                Some(path) => {
                    let text = io.read(path)?;
                    let value: serde_json::Value =
                        serde_json::from_str(&text).map_err(|e| usage(format!("{path}: {e}")))?;
                    EquivClasses::from_json(&value, &mut names)
                        .ok_or_else(|| usage(format!("{path}: not a class list")))?
                }
            };
            let candidate = input.remap_into(&mut names);
            let ok = equiv_check(&original, &candidate, &classes)?;
            io.write(
                "-",
                if ok {
                    "equivalent\n"
                } else {
                    "not equivalent\n"
                },
            )?;
            Ok(if ok { 0 } else { 1 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut input = stdin.as_bytes();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["egsimp"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut input, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn peirce() {
        let (code, out, _) = call(&["simplify", "((P->Q)->P)->P"], "");
        assert_eq!((code, out.as_str()), (0, "true\n"));
        let (code, out, _) = call(&["prove"], "((P->Q)->P)->P");
        assert_eq!((code, out.as_str()), (0, "true\n"));
    }

    #[test]
    fn prove_verdicts() {
        assert_eq!(call(&["prove", "P & ~P"], "").0, 1);
        assert_eq!(call(&["prove", "P | Q"], "").0, 2);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["frobnicate"], "").0, EXIT_USAGE);
        assert_eq!(call(&["simplify", "--emit", "xml", "P"], "").0, EXIT_USAGE);
        assert_eq!(call(&["check", "P"], "").0, EXIT_USAGE);
        assert_eq!(call(&["simplify", "(P &"], "").0, EXIT_PARSE);
        assert_eq!(
            call(&["simplify", "--format", "dimacs", "p cnf 1 1\n2 0\n"], "").0,
            EXIT_PARSE
        );
        let wide: Vec<String> = (0..24).map(|i| format!("(a{i}&b{i})")).collect();
        assert_eq!(call(&["cnf", &wide.join("|")], "").0, EXIT_LIMIT);
        assert_eq!(
            call(
                &["simplify", "--max-steps", "1", "(A|B)&(~A|B)&(~B|C)&~C"],
                ""
            )
            .0,
            EXIT_LIMIT
        );
    }

    #[test]
    fn stats_json() {
        let (code, out, _) = call(&["stats", "(A|B)&~C&(A|~B|C)"], "");
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["variables"], 3);
        assert_eq!(v["clauses"], 3);
        assert_eq!(v["literals"], 6);
        assert_eq!(v["symbols"]["s"], 1);
        assert_eq!(v["symbols"]["kappa"], 1);
    }

    #[test]
    fn cnf_command() {
        let (code, out, _) = call(&["cnf", "--format", "pl", "(A&B)|C"], "");
        assert_eq!(code, 0);
        assert!(out.contains("p cnf 3 2\n"));
    }

    #[test]
    fn check_with_classes() {
        let dir = std::env::temp_dir().join(format!("egsimp-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let orig = dir.join("orig.pl");
        let classes = dir.join("classes.json");
        let src = "(~A|B)&(~B|A)&(A|C)&(~C|B|D)";
        fs::write(&orig, src).unwrap();
        let (code, out, _) = call(
            &["simplify", "--classes", classes.to_str().unwrap(), src],
            "",
        );
        assert_eq!(code, 0);
        let (code, _, _) = call(
            &[
                "check",
                "--against",
                orig.to_str().unwrap(),
                "--classes",
                classes.to_str().unwrap(),
                out.trim(),
            ],
            "",
        );
        assert_eq!(code, 0);
        let (code, _, _) = call(
            &["check", "--against", orig.to_str().unwrap(), out.trim()],
            "",
        );
        assert_eq!(code, 1);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn deterministic() {
        let src = "(a|b|c)&(~a|b)&(~b|c)&(~c|a)&(d|~e)&((x&y)|~(z|a))";
        let a = call(&["simplify", "--emit", "json", src], "");
        let b = call(&["simplify", "--emit", "json", src], "");
        assert_eq!(a, b);
    }
}
