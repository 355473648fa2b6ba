//! The `scpkit` command line. `main` only forwards to [`run`].

use std::ffi::OsString;
use std::fmt::Display;
use std::io::{Read, Write};
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::linearity::{lin_all, lin_check};
use crate::metatheory::{enumerate_typed_cp, instances, run_suite, Suite, SuiteConfig};
use crate::reduction::{
    equiv_check, step, trace, EnumOptions, EquivDerivation, Reducible, StepError, Strategy,
};
use crate::syntax::{Calculus, Name, ProcessExt, TypingContext};
use crate::textio::{self, json as js, AnyProcess};
use crate::translation::{decode, decode_derivation, encode, encode_derivation};
use crate::typing::{cp_diagnose, scp_diagnose};

#[derive(Parser, Debug)]
#[command(
    name = "scpkit",
    version,
    about = "Checkers, translations and reduction for CP and SCP"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CalcArg {
    Cp,
    Scp,
}

impl From<CalcArg> for Calculus {
    fn from(c: CalcArg) -> Calculus {
        match c {
            CalcArg::Cp => Calculus::Cp,
            CalcArg::Scp => Calculus::Scp,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    First,
    PrincipalFirst,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    SubjectReduction,
    Adequacy,
    Lemmas,
    Agreement,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Type-check a judgment `ctx |- P` and print its derivation.
    Check {
        file: String,
        #[arg(long, value_enum)]
        calculus: Option<CalcArg>,
        /// Also require lin(x; P) for each listed name (SCP only).
        #[arg(long, value_delimiter = ',', conflicts_with = "lin_all")]
        lin: Vec<String>,
        /// Also require lin(x; P) for every name in the context (SCP only).
        #[arg(long)]
        lin_all: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decide lin(x; P) for an SCP process and print the derivation.
    Lin {
        file: String,
        #[arg(long)]
        channel: String,
        #[arg(long)]
        json: bool,
    },
    /// List the redexes of a process, or apply one.
    Step {
        file: String,
        #[arg(long, value_enum)]
        calculus: Option<CalcArg>,
        #[arg(long, value_enum, conflicts_with = "index")]
        strategy: Option<StrategyArg>,
        #[arg(long)]
        index: Option<usize>,
        /// Close the step relation under this many structural rewrites.
        #[arg(long)]
        equiv_depth: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Reduce repeatedly and print the trace.
    Normalize {
        file: String,
        #[arg(long, value_enum)]
        calculus: Option<CalcArg>,
        #[arg(long, default_value_t = 100)]
        max_steps: usize,
        #[arg(long, value_enum, default_value = "first")]
        strategy: StrategyArg,
        #[arg(long)]
        equiv_depth: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Translate between CP and SCP.
    Translate {
        file: String,
        #[arg(long, value_enum)]
        to: CalcArg,
        /// Translate the typing derivation of a judgment as well.
        #[arg(long)]
        with_derivation: bool,
        #[arg(long)]
        json: bool,
    },
    /// Search for a structural equivalence between two processes.
    Equiv {
        file_a: String,
        file_b: String,
        #[arg(long, value_enum)]
        calculus: Option<CalcArg>,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print every typed judgment up to a size.
    Enumerate {
        #[arg(long)]
        size: usize,
        #[arg(long, value_enum, default_value = "cp")]
        calculus: CalcArg,
        #[arg(long)]
        json: bool,
    },
    /// Run property suites.
    Properties {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, env = "SCPKIT_SEED", default_value_t = 0)]
        seed: u64,
        /// Number of random instances.
        #[arg(long, default_value_t = 500)]
        count: usize,
        /// Size bound of the exhaustive instances.
        #[arg(long, default_value_t = 4)]
        size: usize,
        #[arg(long)]
        json: bool,
    },
}

/// Outcome of a command: exit code 0, 1 (negative verdict) or 2 (usage).
struct Fail(i32, String);

type Outcome = Result<bool, Fail>;

fn usage(msg: impl Display) -> Fail {
    Fail(2, msg.to_string())
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
}

impl Io<'_> {
    fn read(&mut self, file: &str) -> Result<String, Fail> {
        if file == "-" {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| usage(format!("stdin: {e}")))?;
            Ok(s)
        } else {
            std::fs::read_to_string(file).map_err(|e| usage(format!("{file}: {e}")))
        }
    }

    fn say(&mut self, text: impl Display) {
        let _ = writeln!(self.out, "{text}");
    }

    fn json(&mut self, v: &Value) {
        let _ = writeln!(
            self.out,
            "{}",
            serde_json::to_string_pretty(v).expect("values serialize")
        );
    }
}

/// `--calculus`, else the file extension.
fn calculus(file: &str, flag: Option<CalcArg>) -> Result<Calculus, Fail> {
    if let Some(c) = flag {
        return Ok(c.into());
    }
    match Path::new(file).extension().and_then(|e| e.to_str()) {
        Some("cp") => Ok(Calculus::Cp),
        Some("scp") => Ok(Calculus::Scp),
        _ => Err(usage(format!(
            "cannot tell the calculus of {file}; pass --calculus"
        ))),
    }
}

/// A judgment if the text has a turnstile, else a bare process.
fn parse_input(src: &str, calc: Calculus) -> Result<(Option<TypingContext>, AnyProcess), Fail> {
    let has_turnstile = src
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .any(|l| l.contains("|-"));
    if has_turnstile {
        let (c, p) = textio::parse_judgment(src, calc).map_err(usage)?;
        Ok((Some(c), p))
    } else {
        Ok((None, textio::parse_process(src, calc).map_err(usage)?))
    }
}

fn judgment_input(src: &str, calc: Calculus) -> Result<(TypingContext, AnyProcess), Fail> {
    match parse_input(src, calc)? {
        (Some(c), p) => Ok((c, p)),
        (None, _) => Err(usage("expected a judgment `ctx |- P`")),
    }
}

fn name(text: &str) -> Result<Name, Fail> {
    Name::parse(text.trim()).ok_or_else(|| usage(format!("not a name: {text:?}")))
}

fn options(equiv_depth: Option<usize>) -> EnumOptions {
    match equiv_depth {
        Some(k) => EnumOptions::with_closure(k),
        None => EnumOptions::default(),
    }
}

fn strategy(s: StrategyArg) -> Strategy {
    match s {
        StrategyArg::First => Strategy::First,
        StrategyArg::PrincipalFirst => Strategy::PrincipalFirst,
    }
}

fn cmd_check(
    io: &mut Io,
    file: &str,
    calc: Option<CalcArg>,
    lin: &[String],
    lin_every: bool,
    as_json: bool,
) -> Outcome {
    let calc = calculus(file, calc)?;
    let (ctx, p) = judgment_input(&io.read(file)?, calc)?;
    match p {
        AnyProcess::Cp(p) => {
            if !lin.is_empty() || lin_every {
                return Err(usage("linearity checks apply to SCP only"));
            }
            match cp_diagnose(&ctx, &p) {
                Ok(d) if as_json => {
                    io.json(&json!({"ok": true, "derivation": js::cp_derivation(&d)}))
                }
                Ok(d) => io.say(js::cp_tree(&d).trim_end()),
                Err(f) => return verdict(io, as_json, format!("not typable: {f}")),
            }
        }
        AnyProcess::Scp(p) => {
            let d = match scp_diagnose(&ctx, &p) {
                Ok(d) => d,
                Err(f) => return verdict(io, as_json, format!("not typable: {f}")),
            };
            let names: Vec<Name> = if lin_every {
                ctx.iter().map(|(n, _)| n.clone()).collect()
            } else {
                lin.iter().map(|s| name(s)).collect::<Result<_, _>>()?
            };
            let mut lins = Vec::new();
            for x in &names {
                match lin_check(x, &d.process) {
                    Some(l) => lins.push(l),
                    None => {
                        return verdict(io, as_json, format!("no linearity derivation for {x}"))
                    }
                }
            }
            if as_json {
                io.json(&json!({
                    "ok": true,
                    "derivation": js::scp_derivation(&d),
                    "lin": lins.iter().map(js::lin_derivation).collect::<Vec<_>>(),
                }));
            } else {
                io.say(js::scp_tree(&d).trim_end());
                for l in &lins {
                    io.say(js::lin_tree(l).trim_end());
                }
            }
        }
    }
    Ok(true)
}

/// Reports a negative verdict.
fn verdict(io: &mut Io, as_json: bool, msg: String) -> Outcome {
    if as_json {
        io.json(&json!({"ok": false, "error": msg}));
    } else {
        io.say(msg);
    }
    Ok(false)
}

fn cmd_lin(io: &mut Io, file: &str, channel: &str, as_json: bool) -> Outcome {
    let x = name(channel)?;
    let p = match parse_input(&io.read(file)?, Calculus::Scp)?.1 {
        AnyProcess::Scp(p) => p,
        AnyProcess::Cp(_) => unreachable!("parsed as SCP"),
    };
    match lin_check(&x, &p) {
        Some(d) if as_json => io.json(&json!({"ok": true, "derivation": js::lin_derivation(&d)})),
        Some(d) => io.say(js::lin_tree(&d).trim_end()),
        None => return verdict(io, as_json, format!("no linearity derivation for {x}")),
    }
    Ok(true)
}

fn step_error(e: StepError) -> Fail {
    usage(e)
}

fn run_step<P: Reducible + Display>(
    io: &mut Io,
    p: &P,
    pick: Option<Strategy>,
    opts: EnumOptions,
    as_json: bool,
) -> Outcome {
    match pick {
        None => {
            let steps = crate::reduction::enumerate_steps(p, opts);
            if as_json {
                io.json(&Value::Array(steps.iter().map(js::step).collect()));
            } else if steps.is_empty() {
                io.say("stuck");
            } else {
                for (i, s) in steps.iter().enumerate() {
                    let pos: String = s
                        .position
                        .iter()
                        .map(|side| match side {
                            crate::reduction::Side::Left => 'L',
                            crate::reduction::Side::Right => 'R',
                        })
                        .collect();
                    io.say(format!("{i}: {} [{pos}] {}", s.rule, s.target));
                }
            }
            Ok(true)
        }
        Some(strategy) => match step(p, strategy, opts).map_err(step_error)? {
            Some(s) if as_json => {
                io.json(&js::step(&s));
                Ok(true)
            }
            Some(s) => {
                io.say(format!("{}: {}", s.rule, s.target));
                Ok(true)
            }
            None => verdict(io, as_json, "stuck".into()),
        },
    }
}

fn run_normalize<P: Reducible + Display>(
    io: &mut Io,
    p: &P,
    strategy: Strategy,
    opts: EnumOptions,
    max_steps: usize,
    as_json: bool,
) -> Outcome {
    let steps = trace(p, strategy, opts, max_steps).map_err(step_error)?;
    let last = steps.last().map_or(p.clone(), |s| s.target.clone());
    let stuck = step(&last, strategy, opts).map_err(step_error)?.is_none();
    if as_json {
        io.json(&json!({
            "steps": steps.iter().map(js::step).collect::<Vec<_>>(),
            "final": last.to_string(),
            "stuck": stuck,
        }));
    } else {
        for s in &steps {
            io.say(format!("{}: {}", s.rule, s.target));
        }
        io.say(format!(
            "{} after {} steps{}",
            last,
            steps.len(),
            if stuck { "" } else { " (budget exhausted)" }
        ));
    }
    Ok(true)
}

fn equiv_json<P: Display>(d: &EquivDerivation<P>) -> Value {
    json!({
        "rule": d.rule.name(),
        "sides": [d.sides.0.to_string(), d.sides.1.to_string()],
        "premises": d.premises.iter().map(equiv_json).collect::<Vec<_>>(),
    })
}

fn equiv_lines<P: Display>(d: &EquivDerivation<P>, depth: usize, out: &mut Vec<String>) {
    out.push(format!(
        "{:indent$}{:<6} {} == {}",
        "",
        d.rule.name(),
        d.sides.0,
        d.sides.1,
        indent = 2 * depth
    ));
    for p in &d.premises {
        equiv_lines(p, depth + 1, out);
    }
}

fn run_equiv<P: Reducible + Display>(
    io: &mut Io,
    a: &P,
    b: &P,
    depth: usize,
    as_json: bool,
) -> Outcome {
    match equiv_check(a, b, depth) {
        Some(d) if as_json => {
            io.json(&json!({"ok": true, "derivation": equiv_json(&d)}));
            Ok(true)
        }
        Some(d) => {
            let mut lines = Vec::new();
            equiv_lines(&d, 0, &mut lines);
            io.say(lines.join("\n"));
            Ok(true)
        }
        None => verdict(
            io,
            as_json,
            format!("not equivalent within {depth} rewrites"),
        ),
    }
}

fn cmd_translate(
    io: &mut Io,
    file: &str,
    to: CalcArg,
    with_derivation: bool,
    as_json: bool,
) -> Outcome {
    let from = match to {
        CalcArg::Scp => Calculus::Cp,
        CalcArg::Cp => Calculus::Scp,
    };
    let src = io.read(file)?;
    if !with_derivation {
        let out = match parse_input(&src, from)?.1 {
            AnyProcess::Cp(p) => encode(&p).to_string(),
            AnyProcess::Scp(p) => decode(&p).to_string(),
        };
        if as_json {
            io.json(&json!({"ok": true, "process": out}));
        } else {
            io.say(out);
        }
        return Ok(true);
    }
    let (ctx, p) = judgment_input(&src, from)?;
    match p {
        AnyProcess::Cp(p) => {
            let d = match cp_diagnose(&ctx, &p) {
                Ok(d) => d,
                Err(f) => return verdict(io, as_json, format!("not typable: {f}")),
            };
            let (sd, lins) = encode_derivation(&d).map_err(|e| Fail(1, e.to_string()))?;
            if as_json {
                io.json(&json!({
                    "ok": true,
                    "derivation": js::scp_derivation(&sd),
                    "lin": lins.values().map(js::lin_derivation).collect::<Vec<_>>(),
                }));
            } else {
                io.say(js::scp_tree(&sd).trim_end());
                for l in lins.values() {
                    io.say(js::lin_tree(l).trim_end());
                }
            }
        }
        AnyProcess::Scp(p) => {
            let d = match scp_diagnose(&ctx, &p) {
                Ok(d) => d,
                Err(f) => return verdict(io, as_json, format!("not typable: {f}")),
            };
            let used = ctx.restrict(&d.process.free_names());
            let Some(lins) = lin_all(&used, &d.process) else {
                let bad = used
                    .iter()
                    .find(|(n, _)| lin_check(n, &d.process).is_none())
                    .map(|(n, _)| n.clone())
                    .expect("some witness is missing");
                return verdict(io, as_json, format!("no linearity derivation for {bad}"));
            };
            match decode_derivation(&d, &lins) {
                Ok(cd) if as_json => {
                    io.json(&json!({"ok": true, "derivation": js::cp_derivation(&cd)}))
                }
                Ok(cd) => io.say(js::cp_tree(&cd).trim_end()),
                Err(e) => return verdict(io, as_json, e.to_string()),
            }
        }
    }
    Ok(true)
}

fn cmd_enumerate(io: &mut Io, size: usize, calc: CalcArg, as_json: bool) -> Outcome {
    let items = enumerate_typed_cp(size);
    let lines: Vec<String> = items
        .iter()
        .map(|(c, p, _)| match calc {
            CalcArg::Cp => textio::judgment(c, p),
            CalcArg::Scp => textio::judgment(c, &encode(p)),
        })
        .collect();
    if as_json {
        io.json(&json!(lines));
    } else {
        for l in lines {
            io.say(l);
        }
    }
    Ok(true)
}

fn cmd_properties(io: &mut Io, suite: SuiteArg, cfg: SuiteConfig, as_json: bool) -> Outcome {
    let suites: Vec<Suite> = match suite {
        SuiteArg::SubjectReduction => vec![Suite::SubjectReduction],
        SuiteArg::Adequacy => vec![Suite::Adequacy],
        SuiteArg::Lemmas => vec![Suite::Lemmas],
        SuiteArg::Agreement => vec![Suite::Agreement],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let items = instances(&cfg).map_err(|e| Fail(1, e.to_string()))?;
    let reports: Vec<_> = suites.into_iter().map(|s| run_suite(s, &items)).collect();
    let ok = reports.iter().all(|r| r.is_ok());
    if as_json {
        io.json(&json!({"ok": ok, "instances": items.len(), "reports": reports}));
    } else {
        for r in &reports {
            io.say(r.to_string().trim_end());
        }
    }
    Ok(ok)
}

fn dispatch(io: &mut Io, cmd: Command) -> Outcome {
    match cmd {
        Command::Check {
            file,
            calculus: c,
            lin,
            lin_all,
            json,
        } => cmd_check(io, &file, c, &lin, lin_all, json),
        Command::Lin {
            file,
            channel,
            json,
        } => cmd_lin(io, &file, &channel, json),
        Command::Step {
            file,
            calculus: c,
            strategy: s,
            index,
            equiv_depth,
            json,
        } => {
            let calc = calculus(&file, c)?;
            let pick = index.map(Strategy::ByIndex).or(s.map(strategy));
            let opts = options(equiv_depth);
            match parse_input(&io.read(&file)?, calc)?.1 {
                AnyProcess::Cp(p) => run_step(io, &p, pick, opts, json),
                AnyProcess::Scp(p) => run_step(io, &p, pick, opts, json),
            }
        }
        Command::Normalize {
            file,
            calculus: c,
            max_steps,
            strategy: s,
            equiv_depth,
            json,
        } => {
            let calc = calculus(&file, c)?;
            let opts = options(equiv_depth);
            match parse_input(&io.read(&file)?, calc)?.1 {
                AnyProcess::Cp(p) => run_normalize(io, &p, strategy(s), opts, max_steps, json),
                AnyProcess::Scp(p) => run_normalize(io, &p, strategy(s), opts, max_steps, json),
            }
        }
        Command::Translate {
            file,
            to,
            with_derivation,
            json,
        } => cmd_translate(io, &file, to, with_derivation, json),
        Command::Equiv {
            file_a,
            file_b,
            calculus: c,
            depth,
            json,
        } => {
            let calc = calculus(&file_a, c)?;
            let a = parse_input(&io.read(&file_a)?, calc)?.1;
            let b = parse_input(&io.read(&file_b)?, calc)?.1;
            match (a, b) {
                (AnyProcess::Cp(a), AnyProcess::Cp(b)) => run_equiv(io, &a, &b, depth, json),
                (AnyProcess::Scp(a), AnyProcess::Scp(b)) => run_equiv(io, &a, &b, depth, json),
                _ => unreachable!("both parsed in one calculus"),
            }
        }
        Command::Enumerate {
            size,
            calculus: c,
            json,
        } => cmd_enumerate(io, size, c, json),
        Command::Properties {
            suite,
            seed,
            count,
            size,
            json,
        } => {
            let cfg = SuiteConfig {
                seed,
                count,
                exhaustive_size: size,
                ..SuiteConfig::default()
            };
            cmd_properties(io, suite, cfg, json)
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code: 0 on success, 1 on a negative verdict, 2 on usage or parse errors.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let mut io = Io { stdin, out };
    match dispatch(&mut io, cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}
