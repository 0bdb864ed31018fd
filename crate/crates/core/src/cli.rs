//! The `loopwhile` command line.
//!
//! [`main_with`] takes the arguments and the three standard streams
//! explicitly and returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | usage error: bad flags, unreadable file, unsupported option |
//! | 2 | the program or schema text does not parse |
//! | 3 | `run` or `universal` ran out of fuel |
//!
//! Diagnostics go to the error stream only.

use std::io::{Read, Write};
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::complexity::growth_profile;
use crate::corpus::declared_arity;
use crate::encoding::{compact, decode, encode};
use crate::nat::Nat;
use crate::semantics::{run, trace, Fuel, Outcome};
use crate::syntax::{parse, pretty, Program};
use crate::transforms::{
    compile_recursive, desugar, for_to_while, normalize_single_while, parse_schema, to_goto, SchemaError,
};
use crate::universal::{diagonal, specialize, universal_executable};

const DEFAULT_FUEL: u64 = 1_000_000;
const UNIVERSAL_FUEL: u64 = 10_000_000;

#[derive(Debug, Parser)]
#[command(name = "loopwhile", version, about = "Run, transform and encode LOOP/WHILE programs")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Step budget (default 1000000; 10000000 for `universal`).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    fuel: Option<u64>,
    /// Output format. `json` suits `run`, `trace`, `universal` and `bench`;
    /// `csv` only `bench`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// What `normalize` and `diagonal` print.
    #[arg(long, global = true, value_enum)]
    emit: Option<Emit>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    While,
    Goto,
    Code,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Run a program and print `x0` with the step count.
    Run {
        /// `.loop`/`.while` program, `.rec` schema, or `-` for stdin.
        file: String,
        /// Comma-separated inputs bound to x1, x2, ...
        #[arg(long = "in", value_delimiter = ',', value_parser = parse_nat)]
        inputs: Vec<Nat>,
    },
    /// Print every charged step of a run.
    Trace {
        file: String,
        #[arg(long = "in", value_delimiter = ',', value_parser = parse_nat)]
        inputs: Vec<Nat>,
    },
    /// Rewrite sugar into kernel statements.
    Desugar { file: String },
    /// Desugar, then replace every `loop` with a `while`.
    For2while { file: String },
    /// Rewrite into an equivalent program with a single `while`.
    Normalize { file: String },
    /// Print the Goedel number of a kernel program.
    Encode {
        file: String,
        /// Regroup sequences first so the code stays short.
        #[arg(long)]
        compact: bool,
    },
    /// Print the program with the given code (decimal or 0x-hex).
    Decode {
        #[arg(value_parser = parse_nat)]
        code: Nat,
    },
    /// Code of the program `e` with its first input fixed to `v`.
    Smn {
        #[arg(value_parser = parse_nat)]
        code: Nat,
        #[arg(value_parser = parse_nat)]
        value: Nat,
    },
    /// Run the program with code `E` on one input through the universal program.
    Universal {
        #[arg(value_parser = parse_nat)]
        code: Nat,
        #[arg(long = "in", value_delimiter = ',', value_parser = parse_nat)]
        inputs: Vec<Nat>,
    },
    /// Print the diagonal program, or run it on its own code.
    Diagonal {
        /// Run the diagonal program on its own code under the fuel budget.
        #[arg(long)]
        self_apply: bool,
    },
    /// Step counts on the inputs (n, ..., n) for several sizes.
    Bench {
        file: String,
        /// `a..b` (both ends included), `a..=b`, or a list like `0,2,4`.
        #[arg(long, default_value = "0..8", value_parser = parse_sizes)]
        sizes: Sizes,
        /// Number of inputs; defaults to the `# arity:` header, else 1.
        #[arg(long)]
        arity: Option<usize>,
    },
    /// Compile a recursion schema into a program.
    CompileRec { file: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sizes(pub Vec<u64>);

fn parse_nat(s: &str) -> Result<Nat, String> {
    Nat::parse_literal(s).ok_or_else(|| format!("`{s}` is not a natural number"))
}

fn parse_sizes(s: &str) -> Result<Sizes, String> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("bad size `{t}`"));
    let sizes = if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(format!("empty range `{s}`"));
        }
        (a..=b).collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    Ok(Sizes(sizes))
}

/// Validated settings for one invocation.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub command: Command,
    pub fuel: u64,
    pub format: Format,
    pub emit: Emit,
}

impl CliConfig {
    fn from_args(args: Args) -> Result<CliConfig, Failure> {
        let (name, formats, emits): (&str, &[Format], &[Emit]) = match &args.command {
            Command::Run { .. } => ("run", &[Format::Text, Format::Json], &[]),
            Command::Trace { .. } => ("trace", &[Format::Text, Format::Json], &[]),
            Command::Universal { .. } => ("universal", &[Format::Text, Format::Json], &[]),
            Command::Bench { .. } => ("bench", &[Format::Csv, Format::Json, Format::Text], &[]),
            Command::Normalize { .. } => ("normalize", &[Format::Text], &[Emit::While, Emit::Goto, Emit::Code]),
            Command::Diagonal { .. } => ("diagonal", &[Format::Text], &[Emit::While, Emit::Code]),
            Command::Desugar { .. } => ("desugar", &[Format::Text], &[]),
            Command::For2while { .. } => ("for2while", &[Format::Text], &[]),
            Command::Encode { .. } => ("encode", &[Format::Text], &[]),
            Command::Decode { .. } => ("decode", &[Format::Text], &[]),
            Command::Smn { .. } => ("smn", &[Format::Text], &[]),
            Command::CompileRec { .. } => ("compile-rec", &[Format::Text], &[]),
        };
        let format = args.format.unwrap_or(formats[0]);
        if !formats.contains(&format) {
            return Err(Failure::usage(format!("`{name}` does not support --format {format:?}").to_lowercase()));
        }
        let emit = match args.emit {
            None => Emit::While,
            Some(e) if emits.contains(&e) => e,
            Some(e) => return Err(Failure::usage(format!("`{name}` does not support --emit {e:?}").to_lowercase())),
        };
        let default_fuel = if name == "universal" { UNIVERSAL_FUEL } else { DEFAULT_FUEL };
        Ok(CliConfig { command: args.command, fuel: args.fuel.unwrap_or(default_fuel), format, emit })
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: 1, message: message.into() }
    }

    fn syntax(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }

    fn fuel(steps: u64) -> Failure {
        Failure { code: 3, message: format!("fuel exhausted after {steps} steps") }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::usage(e.to_string())
    }
}

impl From<SchemaError> for Failure {
    fn from(e: SchemaError) -> Failure {
        match e {
            SchemaError::Parse { .. } => Failure::syntax(e.to_string()),
            SchemaError::Arity(_) => Failure::usage(e.to_string()),
        }
    }
}

/// Entry point of the binary.
pub fn main_with<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = CliConfig::from_args(args).and_then(|cfg| execute(&cfg, stdin, out));
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "loopwhile: {}", f.message);
            f.code
        }
    }
}

struct Source {
    text: String,
    is_schema: bool,
}

fn read_source(path: &str, stdin: &mut dyn Read) -> Result<Source, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{path}: {e}")))?
    };
    let is_schema = Path::new(path).extension().is_some_and(|e| e == "rec");
    Ok(Source { text, is_schema })
}

fn load_program(path: &str, stdin: &mut dyn Read) -> Result<(Program, Source), Failure> {
    let src = read_source(path, stdin)?;
    let p = if src.is_schema {
        compile_recursive(&parse_schema(&src.text)?)?
    } else {
        parse(&src.text).map_err(|e| Failure::syntax(format!("{path}: {e}")))?
    };
    Ok((p, src))
}

fn fuel_outcome(outcome: &Outcome) -> Result<(), Failure> {
    match outcome {
        Outcome::Halted { .. } => Ok(()),
        Outcome::FuelExhausted { steps, .. } => Err(Failure::fuel(*steps)),
    }
}

fn execute(cfg: &CliConfig, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<(), Failure> {
    match &cfg.command {
        Command::Run { file, inputs } => {
            let (p, _) = load_program(file, stdin)?;
            let o = run(&p, inputs, Fuel::Limited(cfg.fuel)).expect("limited fuel never fails");
            if cfg.format == Format::Json {
                let v = json!({ "halted": o.is_halted(), "output": o.value(), "steps": o.steps() });
                writeln!(out, "{v}")?;
            } else if let Some(v) = o.value() {
                writeln!(out, "x0 = {v} (steps={})", o.steps())?;
            }
            fuel_outcome(&o)
        }
        Command::Trace { file, inputs } => {
            let (p, _) = load_program(file, stdin)?;
            let events = trace(&p, inputs, cfg.fuel);
            let o = run(&p, inputs, Fuel::Limited(cfg.fuel)).expect("limited fuel never fails");
            if cfg.format == Format::Json {
                let evs: Vec<_> = events
                    .iter()
                    .map(|e| {
                        let writes: Vec<_> = e
                            .writes
                            .iter()
                            .map(|w| json!({ "var": w.var.to_string(), "old": w.old, "new": w.new }))
                            .collect();
                        json!({ "step": e.step, "stmt": e.stmt, "writes": writes })
                    })
                    .collect();
                let v = json!({ "events": evs, "halted": o.is_halted(), "output": o.value(), "steps": o.steps() });
                writeln!(out, "{v}")?;
            } else {
                for e in &events {
                    let writes: Vec<String> =
                        e.writes.iter().map(|w| format!("{}: {} -> {}", w.var, w.old, w.new)).collect();
                    writeln!(out, "{:>8}  {}  {}", e.step, e.stmt, writes.join(", "))?;
                }
                match o.value() {
                    Some(v) => writeln!(out, "x0 = {v} (steps={})", o.steps())?,
                    None => writeln!(out, "fuel exhausted after {} steps", o.steps())?,
                }
            }
            Ok(())
        }
        Command::Desugar { file } => {
            let (p, _) = load_program(file, stdin)?;
            writeln!(out, "{}", pretty(&desugar(&p)))?;
            Ok(())
        }
        Command::For2while { file } => {
            let (p, _) = load_program(file, stdin)?;
            let w = for_to_while(&desugar(&p)).expect("desugared programs are kernel");
            writeln!(out, "{}", pretty(&w))?;
            Ok(())
        }
        Command::Normalize { file } => {
            let (p, _) = load_program(file, stdin)?;
            match cfg.emit {
                Emit::While => writeln!(out, "{}", pretty(&normalize_single_while(&p)))?,
                Emit::Goto => {
                    let w = for_to_while(&desugar(&p)).expect("desugared programs are kernel");
                    writeln!(out, "{}", to_goto(&w).expect("for_to_while output has no loop"))?;
                }
                Emit::Code => {
                    let n = compact(&normalize_single_while(&p));
                    writeln!(out, "{}", encode(&n).expect("normal forms are kernel"))?;
                }
            }
            Ok(())
        }
        Command::Encode { file, compact: regroup } => {
            let (p, _) = load_program(file, stdin)?;
            let p = if *regroup { compact(&p) } else { p };
            let code = encode(&p).map_err(|e| Failure::usage(e.to_string()))?;
            writeln!(out, "{code}")?;
            Ok(())
        }
        Command::Decode { code } => {
            writeln!(out, "{}", pretty(&decode(code)))?;
            Ok(())
        }
        Command::Smn { code, value } => {
            writeln!(out, "{}", specialize(code, value))?;
            Ok(())
        }
        Command::Universal { code, inputs } => {
            if inputs.len() > 1 {
                return Err(Failure::usage("the universal program takes a single input"));
            }
            let x = inputs.first().cloned().unwrap_or(Nat::ZERO);
            let o = universal_executable()
                .run(&[code.clone(), x.clone()], Fuel::Limited(cfg.fuel))
                .expect("limited fuel never fails");
            // The simulated program's own step count, from a direct run.
            let direct = run(&decode(code), &[x], Fuel::Limited(cfg.fuel)).expect("limited fuel never fails");
            let simulated = direct.is_halted().then(|| direct.steps());
            if cfg.format == Format::Json {
                let v = json!({
                    "halted": o.is_halted(),
                    "output": o.value(),
                    "steps": o.steps(),
                    "simulated_steps": simulated,
                });
                writeln!(out, "{v}")?;
            } else if let Some(v) = o.value() {
                match simulated {
                    Some(s) => writeln!(out, "x0 = {v} (steps={}, simulated steps={s})", o.steps())?,
                    None => writeln!(out, "x0 = {v} (steps={})", o.steps())?,
                }
            }
            fuel_outcome(&o)
        }
        Command::Diagonal { self_apply } => {
            let d = diagonal();
            let code = || encode(d).expect("the diagonal program is kernel");
            if *self_apply {
                let o = run(d, &[code()], Fuel::Limited(cfg.fuel)).expect("limited fuel never fails");
                match o.value() {
                    Some(v) => writeln!(out, "D(code of D) halted: x0 = {v} (steps={})", o.steps())?,
                    None => writeln!(out, "D(code of D): fuel exhausted after {} steps", o.steps())?,
                }
            } else if cfg.emit == Emit::Code {
                writeln!(out, "{}", code())?;
            } else {
                writeln!(out, "{}", pretty(d))?;
            }
            Ok(())
        }
        Command::Bench { file, sizes, arity } => {
            let (p, src) = load_program(file, stdin)?;
            let arity = match arity {
                Some(a) => *a,
                None if src.is_schema => parse_schema(&src.text)?.arity()?,
                None => declared_arity(&src.text).unwrap_or(1),
            };
            let prof = growth_profile(&p, arity, &sizes.0, cfg.fuel);
            match cfg.format {
                Format::Json => writeln!(out, "{}", prof.to_json())?,
                Format::Csv => write!(out, "{}", prof.to_csv())?,
                Format::Text => {
                    writeln!(out, "{:>6} {:>12}  output", "n", "steps")?;
                    for r in &prof.rows {
                        let v = r.output.as_ref().map_or("(fuel exhausted)".to_string(), |v| v.to_string());
                        writeln!(out, "{:>6} {:>12}  {v}", r.n, r.steps)?;
                    }
                }
            }
            Ok(())
        }
        Command::CompileRec { file } => {
            let src = read_source(file, stdin)?;
            let p = compile_recursive(&parse_schema(&src.text)?)?;
            writeln!(out, "{}", pretty(&p))?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str], stdin: &str) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("loopwhile").chain(args.iter().copied());
        let code = main_with(argv, &mut stdin.as_bytes(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn run_from_stdin() {
        let (code, out, _) = cli(&["run", "-", "--in", "2,3"], "x0 := x1; loop x2 do x0 := x0 + 1 end");
        assert_eq!(code, 0);
        assert_eq!(out, "x0 = 5 (steps=5)\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(cli(&["run", "-", "--in", "1", "--fuel", "100"], "while x1 /= 0 do skip end").0, 3);
        assert_eq!(cli(&["run", "-"], "x0 := ").0, 2);
        assert_eq!(cli(&["frobnicate"], "").0, 1);
        assert_eq!(cli(&["run", "-", "--fuel", "0"], "skip").0, 1);
        assert_eq!(cli(&["decode", "0", "--format", "json"], "").0, 1);
        assert_eq!(cli(&["normalize", "-", "--emit", "code", "--format", "csv"], "skip").0, 1);
        assert_eq!(cli(&["--help"], "").0, 0);
        assert_eq!(cli(&["compile-rec", "-"], "(comp succ").0, 2);
    }

    #[test]
    fn decode_and_smn() {
        assert_eq!(cli(&["decode", "0"], "").1, "x0 := x0 + 0\n");
        assert_eq!(cli(&["decode", "0x9"], "").1, "while x1 /= 0 do\n  x0 := x0 + 0\nend\n");
        let (code, out, _) = cli(&["smn", "0", "4"], "");
        assert_eq!(code, 0);
        let spec = Nat::parse_literal(out.trim()).unwrap();
        assert_eq!(crate::semantics::eval_fn(&decode(&spec), &[], 100u64).unwrap(), Some(Nat::ZERO));
    }

    #[test]
    fn size_lists() {
        assert_eq!(parse_sizes("0..3").unwrap().0, vec![0, 1, 2, 3]);
        assert_eq!(parse_sizes("2..=3").unwrap().0, vec![2, 3]);
        assert_eq!(parse_sizes("1,5").unwrap().0, vec![1, 5]);
        assert!(parse_sizes("4..1").is_err());
    }

    #[test]
    fn bench_csv_uses_arity_header() {
        let src = "# arity: 2\nx0 := x1; loop x2 do x0 := x0 + 1 end";
        let (code, out, _) = cli(&["bench", "-", "--sizes", "0..2"], src);
        assert_eq!(code, 0);
        assert_eq!(out, "n,steps,output,exhausted\n0,2,0,false\n1,3,2,false\n2,4,4,false\n");
    }
}
