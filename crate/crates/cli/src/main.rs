//! `replay`: check a recorded JSONL trace against a specification offline.
//!
//! Exit status: 0 when the trace is accepted or still a viable prefix, 1
//! when it is violated, 2 on unreadable or invalid input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use serde_json::json;
use tracemon_core::enumerate::{enumerate, MAX_ENUMERATION_LEN};
use tracemon_core::oracle::{Oracle, DEFAULT_ORACLE_BOUND};
use tracemon_core::replay::{load_spec, load_trace, replay, ReplayError, ReplayVerdict};
use tracemon_core::{Event, SpecProgram, DEFAULT_FRONTIER_CAP};

#[derive(Debug, Parser)]
#[command(version, about = "Replay a JSONL event trace against a trace expression specification")]
struct Args {
    /// Specification file (.texp).
    spec: PathBuf,
    /// Trace file, one JSON event per line.
    trace: Option<PathBuf>,
    /// Decide the trace with the naive backtracking checker instead of the
    /// streaming monitor.
    #[arg(long, conflicts_with = "enumerate")]
    oracle: bool,
    /// Upper bound on the trace length accepted by --oracle.
    #[arg(long, default_value_t = DEFAULT_ORACLE_BOUND, requires = "oracle")]
    oracle_bound: usize,
    /// List every accepted trace over the events of this JSONL file.
    #[arg(long, value_name = "ALPHABET", requires = "max_len")]
    enumerate: Option<PathBuf>,
    /// Longest trace listed by --enumerate.
    #[arg(long, requires = "enumerate")]
    max_len: Option<usize>,
    /// Largest number of simultaneous derivations.
    #[arg(long, default_value_t = DEFAULT_FRONTIER_CAP, value_parser = positive)]
    frontier_cap: usize,
    /// Print a JSON document instead of text.
    #[arg(long)]
    json: bool,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        Ok(_) => Err("must be at least 1".into()),
        Err(e) => Err(e.to_string()),
    }
}

/// A failure that maps to exit status 2.
struct Failure(String);

impl From<ReplayError> for Failure {
    fn from(e: ReplayError) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match run(&args) {
        Ok(code) => code,
        Err(Failure(message)) => {
            eprintln!("{message}");
            ExitCode::from(2)
        }
    }
}

fn run(args: &Args) -> Result<ExitCode, Failure> {
    let program = load_spec(&args.spec)?;
    for w in program.warnings() {
        eprintln!("{}:{w}", args.spec.display());
    }
    if let Some(alphabet) = &args.enumerate {
        let max_len = args.max_len.expect("clap requires --max-len");
        return run_enumerate(args, &program, alphabet, max_len);
    }
    let Some(trace_path) = &args.trace else {
        return Err(Failure("a trace file is required unless --enumerate is given".into()));
    };
    let events = load_trace(trace_path)?;
    if args.oracle {
        run_oracle(args, &program, &events)
    } else {
        run_replay(args, &program, &events)
    }
}

fn exit_for(verdict: ReplayVerdict) -> ExitCode {
    match verdict {
        ReplayVerdict::Violated { .. } => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}

fn describe(verdict: ReplayVerdict, events: &[Event]) -> String {
    match verdict {
        ReplayVerdict::Accepted => format!("accepted ({} events)", events.len()),
        ReplayVerdict::PrefixAlive => {
            format!("prefix alive ({} events, not a complete trace)", events.len())
        }
        ReplayVerdict::Violated { at_index } => {
            format!("violated at event {at_index}: {}", events[at_index - 1])
        }
    }
}

fn run_replay(args: &Args, program: &SpecProgram, events: &[Event]) -> Result<ExitCode, Failure> {
    let report = replay(program, events, args.frontier_cap).map_err(|e| Failure(e.to_string()))?;
    if args.json {
        println!("{}", serde_json::to_string(&report).expect("report serializes"));
    } else {
        println!("{}", describe(report.verdict, events));
    }
    Ok(exit_for(report.verdict))
}

#[derive(Serialize)]
struct OracleReport {
    #[serde(flatten)]
    verdict: ReplayVerdict,
    events: usize,
}

fn run_oracle(args: &Args, program: &SpecProgram, events: &[Event]) -> Result<ExitCode, Failure> {
    let oracle = Oracle::new(program);
    let fail = |e: tracemon_core::oracle::OracleError| Failure(e.to_string());
    let verdict = if oracle.accepts(events, args.oracle_bound).map_err(fail)? {
        ReplayVerdict::Accepted
    } else if oracle.viable(events, args.oracle_bound).map_err(fail)? {
        ReplayVerdict::PrefixAlive
    } else {
        // The shortest prefix no derivation can consume.
        let mut at_index = events.len();
        while at_index > 1 && !oracle.viable(&events[..at_index - 1], args.oracle_bound).map_err(fail)? {
            at_index -= 1;
        }
        ReplayVerdict::Violated { at_index }
    };
    if args.json {
        let report = OracleReport {
            verdict,
            events: events.len(),
        };
        println!("{}", serde_json::to_string(&report).expect("report serializes"));
    } else {
        println!("{}", describe(verdict, events));
    }
    Ok(exit_for(verdict))
}

fn run_enumerate(
    args: &Args,
    program: &SpecProgram,
    alphabet_path: &Path,
    max_len: usize,
) -> Result<ExitCode, Failure> {
    if max_len > MAX_ENUMERATION_LEN {
        return Err(Failure(format!(
            "--max-len {max_len} exceeds the limit of {MAX_ENUMERATION_LEN}"
        )));
    }
    let alphabet = load_trace(alphabet_path)?;
    let traces = enumerate(program, &alphabet, max_len, args.frontier_cap)
        .map_err(|e| Failure(e.to_string()))?;
    if args.json {
        let doc: Vec<Vec<serde_json::Value>> = traces
            .iter()
            .map(|t| t.iter().map(|&i| alphabet[i].to_json()).collect())
            .collect();
        println!("{}", json!({ "traces": doc }));
    } else {
        for t in &traces {
            let word: Vec<String> = t.iter().map(|i| i.to_string()).collect();
            println!("[{}]", word.join(","));
        }
    }
    Ok(ExitCode::SUCCESS)
}
