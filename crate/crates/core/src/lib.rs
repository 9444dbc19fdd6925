//! Runtime verification with parametric trace expressions.
//!
//! A specification is a set of equations over trace expressions built from
//! event types (`ϑ : τ`), concatenation, union, intersection, shuffle and
//! variable binders. [`syntax::parse_spec`] loads one from text, and the
//! engine in [`engine`] recognizes event streams against it one event at a
//! time, keeping every viable derivation so that no nondeterministic choice
//! has to be guessed.
//!
//! ```
//! use tracemon_core::{decode_event, parse_spec, DEFAULT_FRONTIER_CAP};
//!
//! let spec = parse_spec(
//!     r#"domain messages;
//!        main P;
//!        P = eps \/ req : resp : P;
//!        type req matches msg("req", _);
//!        type resp matches msg("resp", _);"#,
//! )
//! .unwrap();
//! let req = decode_event(r#"{"type":"req","payload":1}"#).unwrap();
//! let resp = decode_event(r#"{"type":"resp","payload":2}"#).unwrap();
//! assert!(spec.accepts(&[req.clone(), resp], DEFAULT_FRONTIER_CAP).unwrap());
//! assert!(!spec.accepts(&[req], DEFAULT_FRONTIER_CAP).unwrap());
//! ```

pub mod domain;
pub mod engine;
pub mod enumerate;
pub mod graph;
pub mod oracle;
pub mod program;
pub mod replay;
pub mod syntax;
pub mod term;
pub mod value;

pub use domain::{decode_event, DecodeError, Domain, Event, MatchContext, MatchError, TypeClause};
pub use engine::{EngineError, MonitorState, Verdict, DEFAULT_FRONTIER_CAP};
pub use graph::{BinOp, Node, NodeId, TermStore};
pub use program::SpecProgram;
pub use replay::{replay, ReplayReport, ReplayVerdict};
pub use syntax::{format_spec, parse_spec, Diagnostic};
pub use term::{EventType, Pattern, Substitution, VarName};
pub use value::Value;
