//! Bounded enumeration of the language of a specification.

use thiserror::Error;

use crate::domain::Event;
use crate::engine::{EngineError, MonitorState};
use crate::program::SpecProgram;

pub const MAX_ENUMERATION_LEN: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("maximum trace length {0} exceeds the limit of {MAX_ENUMERATION_LEN}")]
    TooLong(usize),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Every trace over `alphabet` of length at most `max_len` that the engine
/// accepts as complete, as lists of alphabet indices, ordered by length
/// and then lexicographically.
///
/// Prefixes the monitor already rejects are pruned.
pub fn enumerate(
    program: &SpecProgram,
    alphabet: &[Event],
    max_len: usize,
    cap: usize,
) -> Result<Vec<Vec<usize>>, EnumerateError> {
    if max_len > MAX_ENUMERATION_LEN {
        return Err(EnumerateError::TooLong(max_len));
    }
    let mut accepted = Vec::new();
    let mut level: Vec<(Vec<usize>, MonitorState)> = vec![(Vec::new(), program.initial_state())];
    for len in 0..=max_len {
        for (trace, state) in &level {
            if program.accepts_final(state) {
                accepted.push(trace.clone());
            }
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for (trace, state) in &level {
            for (i, event) in alphabet.iter().enumerate() {
                let stepped = program.step(state, event, cap)?;
                if !stepped.is_violated() {
                    let mut longer = trace.clone();
                    longer.push(i);
                    next.push((longer, stepped));
                }
            }
        }
        level = next;
    }
    Ok(accepted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::decode_event;
    use crate::engine::DEFAULT_FRONTIER_CAP;
    use crate::syntax::parse_spec;

    #[test]
    fn eps_accepts_only_the_empty_trace() {
        let p = parse_spec("domain messages; main M; M = eps;").unwrap();
        let alphabet = [decode_event(r#"{"type":"a"}"#).unwrap()];
        assert_eq!(enumerate(&p, &alphabet, 3, DEFAULT_FRONTIER_CAP).unwrap(), vec![Vec::<usize>::new()]);
        assert_eq!(
            enumerate(&p, &alphabet, 7, DEFAULT_FRONTIER_CAP),
            Err(EnumerateError::TooLong(7))
        );
    }
}
