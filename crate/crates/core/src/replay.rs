//! Offline replay of a recorded trace through the streaming monitor.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::domain::{decode_event, DecodeError, Event};
use crate::engine::{EngineError, Verdict};
use crate::program::SpecProgram;
use crate::syntax::{parse_spec, Diagnostic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "camelCase")]
pub enum ReplayVerdict {
    /// The whole trace is a complete trace of the specification.
    Accepted,
    /// No event was rejected, but the trace is only a proper prefix.
    PrefixAlive,
    /// The event at this 1-based position was the first one rejected.
    #[serde(rename_all = "camelCase")]
    Violated { at_index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReplayReport {
    #[serde(flatten)]
    pub verdict: ReplayVerdict,
    pub events: usize,
    /// Frontier size after each event; zero once violated.
    pub frontier_sizes: Vec<usize>,
}

impl ReplayReport {
    /// What the monitoring service answers for each event: `true` once the
    /// trace has been rejected.
    pub fn error_flags(&self) -> Vec<bool> {
        (1..=self.events)
            .map(|i| matches!(self.verdict, ReplayVerdict::Violated { at_index } if i >= at_index))
            .collect()
    }
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}", render_diagnostics(path, diagnostics))]
    Parse {
        path: PathBuf,
        diagnostics: Vec<Diagnostic>,
    },
    #[error("{}:{line}: invalid event: {source}", path.display())]
    Decode {
        path: PathBuf,
        line: usize,
        #[source]
        source: DecodeError,
    },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

fn render_diagnostics(path: &Path, diagnostics: &[Diagnostic]) -> String {
    diagnostics
        .iter()
        .map(|d| format!("{}:{d}", path.display()))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn load_spec(path: &Path) -> Result<SpecProgram, ReplayError> {
    let source = fs::read_to_string(path).map_err(|source| ReplayError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_spec(&source).map_err(|diagnostics| ReplayError::Parse {
        path: path.to_owned(),
        diagnostics,
    })
}

/// Reads a JSONL file: one event object per line, blank lines ignored.
pub fn load_trace(path: &Path) -> Result<Vec<Event>, ReplayError> {
    let text = fs::read_to_string(path).map_err(|source| ReplayError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_trace(&text).map_err(|(line, source)| ReplayError::Decode {
        path: path.to_owned(),
        line,
        source,
    })
}

/// Parses JSONL text; on failure returns the 1-based line number.
pub fn parse_trace(text: &str) -> Result<Vec<Event>, (usize, DecodeError)> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| decode_event(line).map_err(|e| (i + 1, e)))
        .collect()
}

pub fn replay(program: &SpecProgram, events: &[Event], cap: usize) -> Result<ReplayReport, EngineError> {
    let mut state = program.initial_state();
    let mut frontier_sizes = Vec::with_capacity(events.len());
    for event in events {
        state = program.step(&state, event, cap)?;
        frontier_sizes.push(state.frontier().len());
    }
    let verdict = match state.verdict() {
        Verdict::Violated { at_event } => ReplayVerdict::Violated { at_index: at_event },
        Verdict::Alive if program.accepts_final(&state) => ReplayVerdict::Accepted,
        Verdict::Alive => ReplayVerdict::PrefixAlive,
    };
    Ok(ReplayReport {
        verdict,
        events: events.len(),
        frontier_sizes,
    })
}

pub fn replay_files(spec: &Path, trace: &Path, cap: usize) -> Result<ReplayReport, ReplayError> {
    let program = load_spec(spec)?;
    let events = load_trace(trace)?;
    Ok(replay(&program, &events, cap)?)
}
