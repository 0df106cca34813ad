use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use bstkit_core::decide::{decide_with, encode, SolverOptions, Verdict};
use bstkit_core::models::{
    solve_nested_with, LiftOptions, NestedVerdict, PipelineOptions, PipelineStats,
};
use bstkit_core::oracle::{flat_sat, generate, nested_witness, Profile};
use bstkit_core::suites;
use bstkit_core::syntax::{parse_formula, parse_problem};
use bstkit_core::translate::{flat_formula, translate};

const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;
const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "bstkit",
    version,
    about = "Satisfiability for Boolean set terms with singletons"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the flat translation of a problem, one conjunct per line.
    Translate { file: PathBuf },
    /// Decide problems; exits 10 when all are satisfiable, 20 when any is not.
    Solve(SolveArgs),
    /// Decide a problem by bounded enumeration.
    Oracle(OracleArgs),
    /// Print a generated problem.
    Gen {
        #[arg(long)]
        seed: u64,
        /// `empty`, `planted:V:D:S` or `random:V:D:S`.
        #[arg(long)]
        profile: Profile,
    },
    /// Run the property suites.
    Check {
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
}

#[derive(Args)]
struct SolveArgs {
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Read each file as a formula without singletons and decide it directly.
    #[arg(long)]
    flat: bool,
    /// Write the CNF handed to the solver in DIMACS format.
    #[arg(long, value_name = "PATH")]
    dump_cnf: Option<PathBuf>,
    /// Print the model after every lifting step to stderr.
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Use activity-based branching with restarts.
    #[arg(long)]
    activity: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("bound").required(true)))]
struct OracleArgs {
    file: PathBuf,
    /// Read the file as a flat formula and search universes of K elements.
    #[arg(long, value_name = "K", group = "bound")]
    flat_k: Option<u32>,
    /// Search assignments drawn from the sets of rank below L.
    #[arg(long, value_name = "L", group = "bound")]
    level: Option<u32>,
}

#[derive(Serialize)]
struct RunReport {
    schema_version: u32,
    command: &'static str,
    input: InputDigest,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    model: Option<Vec<ModelEntry>>,
    timings_us: Timings,
    counts: Counts,
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct ModelEntry {
    var: String,
    value: String,
}

#[derive(Serialize, Default)]
struct Timings {
    translate: u128,
    decide: u128,
    flatten: u128,
    lift: u128,
    verify: u128,
    total: u128,
}

#[derive(Serialize, Default)]
struct Counts {
    vars: usize,
    atoms: usize,
    xi_conjuncts: usize,
    cnf_vars: usize,
    cnf_clauses: usize,
    flat_rank: u32,
    lift_steps: usize,
}

struct Outcome {
    sat: bool,
    text: String,
    trace: String,
}

fn digest(path: &Path, text: &str) -> InputDigest {
    InputDigest {
        path: path.display().to_string(),
        sha256: format!("{:x}", Sha256::digest(text.as_bytes())),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn verdict_line(sat: bool) -> &'static str {
    if sat {
        "SAT"
    } else {
        "UNSAT"
    }
}

fn solve_one(path: &Path, args: &SolveArgs) -> Result<Outcome> {
    let text = read(path)?;
    let solver = SolverOptions {
        activity: args.activity,
    };
    let started = Instant::now();
    if args.flat {
        let f = parse_formula(&text).with_context(|| path.display().to_string())?;
        if let Some(dump) = &args.dump_cnf {
            fs::write(dump, encode(&f)?.cnf.to_dimacs())?;
        }
        let report = decide_with(&f, solver)?;
        let total = started.elapsed();
        let model = match &report.verdict {
            Verdict::Sat(a) => Some(a),
            Verdict::Unsat => None,
        };
        let sat = model.is_some();
        let text = if args.json {
            let counts = Counts {
                vars: f.vars().len(),
                cnf_vars: report.cnf_vars,
                cnf_clauses: report.cnf_clauses,
                ..Counts::default()
            };
            let timings = Timings {
                decide: total.as_micros(),
                total: total.as_micros(),
                ..Timings::default()
            };
            json(RunReport {
                schema_version: SCHEMA_VERSION,
                command: "solve --flat",
                input: digest(path, &text),
                verdict: if sat { "sat" } else { "unsat" },
                model: None,
                timings_us: timings,
                counts,
            })?
        } else {
            let mut out = format!("{}\n", verdict_line(sat));
            if let Some(a) = model {
                out.push_str(&a.to_string());
            }
            out
        };
        return Ok(Outcome {
            sat,
            text,
            trace: String::new(),
        });
    }

    let p = parse_problem(&text).with_context(|| path.display().to_string())?;
    if let Some(dump) = &args.dump_cnf {
        let xi = translate(&p);
        fs::write(dump, encode(&flat_formula(&p, &xi))?.cnf.to_dimacs())?;
    }
    let options = PipelineOptions {
        solver,
        lift: LiftOptions {
            trace: args.trace,
            ..LiftOptions::default()
        },
    };
    let out = solve_nested_with(&p, options)?;
    let total = started.elapsed();
    let mut trace = String::new();
    for (i, step) in out.steps.iter().enumerate().filter(|_| args.trace) {
        trace.push_str(&format!("step {}: {}\n", i + 1, step.chosen));
        if let Some(m) = &step.model {
            for line in m.to_string().lines() {
                trace.push_str(&format!("  {line}\n"));
            }
        }
    }
    let sat = out.verdict.is_sat();
    let model = match &out.verdict {
        NestedVerdict::Sat(m) => Some(m),
        NestedVerdict::Unsat => None,
    };
    let text = if args.json {
        json(RunReport {
            schema_version: SCHEMA_VERSION,
            command: "solve",
            input: digest(path, &text),
            verdict: if sat { "sat" } else { "unsat" },
            model: model.map(|m| {
                m.iter()
                    .map(|(v, s)| ModelEntry {
                        var: v.to_string(),
                        value: s.to_string(),
                    })
                    .collect()
            }),
            timings_us: timings(&out.stats, total),
            counts: counts(&out.stats),
        })?
    } else {
        let mut text = format!("{}\n", verdict_line(sat));
        if let Some(m) = model {
            text.push_str(&m.to_string());
        }
        text
    };
    Ok(Outcome { sat, text, trace })
}

fn timings(s: &PipelineStats, total: Duration) -> Timings {
    let t = &s.timings;
    Timings {
        translate: t.translate.as_micros(),
        decide: t.decide.as_micros(),
        flatten: t.flatten.as_micros(),
        lift: t.lift.as_micros(),
        verify: t.verify.as_micros(),
        total: total.as_micros(),
    }
}

fn counts(s: &PipelineStats) -> Counts {
    Counts {
        vars: s.vars,
        atoms: s.atoms,
        xi_conjuncts: s.xi_conjuncts,
        cnf_vars: s.cnf_vars,
        cnf_clauses: s.cnf_clauses,
        flat_rank: s.flat_rank,
        lift_steps: s.lift_steps,
    }
}

fn json(report: RunReport) -> Result<String> {
    Ok(serde_json::to_string(&report)? + "\n")
}

fn solve(args: SolveArgs) -> Result<u8> {
    if args.dump_cnf.is_some() && args.files.len() > 1 {
        bail!("--dump-cnf takes a single input file");
    }
    let jobs = args.jobs.max(1).min(args.files.len());
    let mut results: Vec<Option<Result<Outcome>>> = (0..args.files.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunk = args.files.len().div_ceil(jobs);
        let handles: Vec<_> = args
            .files
            .chunks(chunk)
            .map(|files| {
                scope.spawn(|| {
                    files
                        .iter()
                        .map(|f| solve_one(f, &args))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut slot = results.iter_mut();
        for h in handles {
            for r in h.join().expect("worker panicked") {
                *slot.next().expect("one slot per file") = Some(r);
            }
        }
    });

    let batch = args.files.len() > 1;
    let (mut any_unsat, mut any_error) = (false, false);
    for (path, result) in args.files.iter().zip(results) {
        match result.expect("every file is processed") {
            Ok(o) => {
                eprint!("{}", o.trace);
                if batch && !args.json {
                    println!(
                        "{}: {}",
                        path.display(),
                        o.text.trim_end().replace('\n', "\n  ")
                    );
                } else {
                    print!("{}", o.text);
                }
                any_unsat |= !o.sat;
            }
            Err(e) => {
                eprintln!("error: {}: {e:#}", path.display());
                any_error = true;
            }
        }
    }
    Ok(match (any_error, any_unsat) {
        (true, _) => 1,
        (false, true) => EXIT_UNSAT,
        (false, false) => EXIT_SAT,
    })
}

fn oracle(args: OracleArgs) -> Result<u8> {
    let text = read(&args.file)?;
    let sat = match (args.flat_k, args.level) {
        (Some(k), _) => flat_sat(&parse_formula(&text)?, k)?,
        (None, Some(level)) => {
            let witness = nested_witness(&parse_problem(&text)?, level)?;
            if let Some(w) = &witness {
                println!("SAT");
                for (v, s) in w {
                    println!("{v} = {s}");
                }
                return Ok(EXIT_SAT);
            }
            false
        }
        (None, None) => unreachable!("clap requires a bound"),
    };
    if sat {
        println!("SAT");
        Ok(EXIT_SAT)
    } else {
        println!("UNSAT within bound");
        Ok(EXIT_UNSAT)
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Translate { file } => {
            let p = parse_problem(&read(&file)?).with_context(|| file.display().to_string())?;
            print!("{}", translate(&p));
            Ok(0)
        }
        Command::Solve(args) => solve(args),
        Command::Oracle(args) => oracle(args),
        Command::Gen { seed, profile } => {
            println!("{}", generate(seed, profile));
            Ok(0)
        }
        Command::Check { seed } => {
            let reports = suites::all(seed);
            for r in &reports {
                println!("{r}");
            }
            Ok(u8::from(!reports.iter().all(|r| r.passed())))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
