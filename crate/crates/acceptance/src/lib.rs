//! Shared helpers for the acceptance suite: a seeded generator of random
//! binder-free specifications over the `messages` domain, and exhaustive
//! trace enumeration over a three-event alphabet.

use std::fmt;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tracemon_core::{decode_event, parse_spec, Event, SpecProgram};

/// The binary operators, in surface syntax: concatenation, intersection,
/// union and shuffle.
pub const OPERATORS: [&str; 4] = [".", "/\\", "\\/", "|"];

/// The event types of the generated specifications.
pub const EVENT_TYPES: [&str; 3] = ["a", "b", "c"];

/// Type clauses shared by every generated specification.
pub const CLAUSES: &str = r#"type a matches msg("a", _);
type b matches msg("b", _);
type c matches msg("c", _);
"#;

/// A random trace expression without binders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RandomExpr {
    Eps,
    /// An event type followed by a continuation.
    Prefix(&'static str, Box<RandomExpr>),
    Binary(&'static str, Box<RandomExpr>, Box<RandomExpr>),
    /// A reference to the enclosing equation; only generated directly behind
    /// a prefix, so every recursion is guarded.
    Recur,
}

impl RandomExpr {
    /// Renders the expression fully parenthesized, with `Recur` printed as
    /// `own`.
    pub fn source(&self, own: &str) -> String {
        match self {
            RandomExpr::Eps => "eps".to_owned(),
            RandomExpr::Recur => own.to_owned(),
            RandomExpr::Prefix(ty, tail) => format!("{ty} : ({})", tail.source(own)),
            RandomExpr::Binary(op, l, r) => {
                format!("({}) {op} ({})", l.source(own), r.source(own))
            }
        }
    }
}

impl fmt::Display for RandomExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source("SELF"))
    }
}

/// Deterministic generator of random expressions.
pub struct SpecGenerator {
    rng: ChaCha8Rng,
    max_depth: u32,
}

impl SpecGenerator {
    pub fn new(seed: u64, max_depth: u32) -> SpecGenerator {
        SpecGenerator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_depth,
        }
    }

    /// An expression of depth at most `max_depth`; operators and event
    /// types are drawn uniformly.
    pub fn expr(&mut self) -> RandomExpr {
        self.expr_at(self.max_depth)
    }

    fn expr_at(&mut self, depth: u32) -> RandomExpr {
        // Leaves are `eps` or a single event, so most languages are not
        // trivially empty.
        if depth == 0 {
            return if self.rng.random_bool(0.5) {
                RandomExpr::Eps
            } else {
                self.prefix(RandomExpr::Eps)
            };
        }
        // eps, prefix or binary operator
        match self.rng.random_range(0..6) {
            0 => RandomExpr::Eps,
            1..=2 => {
                let tail = if self.rng.random_bool(0.3) {
                    RandomExpr::Recur
                } else {
                    self.expr_at(depth - 1)
                };
                self.prefix(tail)
            }
            _ => {
                let op = OPERATORS[self.rng.random_range(0..OPERATORS.len())];
                let l = self.expr_at(depth - 1);
                let r = self.expr_at(depth - 1);
                RandomExpr::Binary(op, Box::new(l), Box::new(r))
            }
        }
    }

    fn prefix(&mut self, tail: RandomExpr) -> RandomExpr {
        let ty = EVENT_TYPES[self.rng.random_range(0..EVENT_TYPES.len())];
        RandomExpr::Prefix(ty, Box::new(tail))
    }
}

/// Source text of a `messages` specification with the given equations.
pub fn spec_source(main: &str, equations: &[(&str, String)]) -> String {
    let mut src = format!("domain messages;\nmain {main};\n");
    for (name, body) in equations {
        src.push_str(&format!("{name} = {body};\n"));
    }
    src.push_str(CLAUSES);
    src
}

/// A one-equation specification `M = e`.
pub fn single(e: &RandomExpr) -> SpecProgram {
    load(&spec_source("M", &[("M", e.source("M"))]))
}

/// The specification `M = A op B` with `A = l` and `B = r`.
pub fn combined(op: &str, l: &RandomExpr, r: &RandomExpr) -> SpecProgram {
    load(&spec_source(
        "M",
        &[
            ("M", format!("A {op} B")),
            ("A", l.source("A")),
            ("B", r.source("B")),
        ],
    ))
}

fn load(src: &str) -> SpecProgram {
    parse_spec(src).unwrap_or_else(|d| panic!("generated specification rejected:\n{src}\n{d:?}"))
}

/// The events `a`, `b`, `c`.
pub fn alphabet() -> Vec<Event> {
    EVENT_TYPES
        .iter()
        .map(|t| decode_event(&format!(r#"{{"type":"{t}"}}"#)).expect("valid event"))
        .collect()
}

/// Every word over `0..letters` of length at most `max_len`, shortest
/// first and in lexicographic order within a length.
pub fn all_words(letters: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * letters);
        for w in &layer {
            for i in 0..letters {
                let mut x = w.clone();
                x.push(i);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Location of the shared fixture corpus.
pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}
