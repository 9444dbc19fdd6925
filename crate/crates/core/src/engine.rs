//! The transition system over trace expressions and its lifting to a
//! streaming monitor.
//!
//! [`step_aux`] computes every `(τ', σ)` derivable from one node and one
//! event. A [`MonitorState`] keeps the whole set of live derivations (the
//! frontier), so the monitor never commits to one nondeterministic choice
//! and accepts exactly the prefixes of the specified language.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::rc::Rc;
use std::sync::atomic::Ordering;

use serde::Serialize;
use thiserror::Error;

use crate::domain::{Event, MatchContext, MatchError};
use crate::graph::{BinOp, Node, NodeId, TermStore};
use crate::program::SpecProgram;
use crate::term::Substitution;

pub const DEFAULT_FRONTIER_CAP: usize = 4096;

/// Successors of one node for one event, deduplicated.
pub type StepResult = BTreeSet<(NodeId, Substitution)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Alive,
    /// 1-based index of the first rejected event.
    Violated { at_event: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonitorState {
    frontier: BTreeSet<NodeId>,
    verdict: Verdict,
    event_count: usize,
}

impl MonitorState {
    pub fn new(start: NodeId) -> Self {
        MonitorState {
            frontier: BTreeSet::from([start]),
            verdict: Verdict::Alive,
            event_count: 0,
        }
    }

    pub fn frontier(&self) -> &BTreeSet<NodeId> {
        &self.frontier
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    pub fn is_violated(&self) -> bool {
        matches!(self.verdict, Verdict::Violated { .. })
    }

    pub fn event_count(&self) -> usize {
        self.event_count
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("frontier of {size} states exceeds the cap of {cap} at event {at_event}")]
    FrontierOverflow {
        cap: usize,
        size: usize,
        at_event: usize,
    },
    #[error(transparent)]
    Match(#[from] MatchError),
}

/// The `ε` predicate: does the term accept the empty trace?
///
/// Computed as a least fixpoint: a node met again during its own evaluation
/// counts as false. Results that relied on such an assumption are not
/// cached, except for the root, whose answer is exact.
pub fn epsilon(store: &mut TermStore, node: NodeId) -> bool {
    let mut visiting = HashSet::new();
    let (value, _) = epsilon_rec(store, node, &mut visiting);
    store.nullable[node.index()] = Some(value);
    value
}

fn epsilon_rec(store: &mut TermStore, n: NodeId, visiting: &mut HashSet<NodeId>) -> (bool, bool) {
    if let Some(v) = store.nullable[n.index()] {
        return (v, false);
    }
    if !visiting.insert(n) {
        return (false, true);
    }
    let (value, assumed) = match store.node(n).clone() {
        Node::Eps => (true, false),
        Node::Prefix(..) => (false, false),
        Node::Binder(_, body) => epsilon_rec(store, body, visiting),
        Node::Ref(rid) => {
            let body = store.ref_body(rid);
            epsilon_rec(store, body, visiting)
        }
        Node::Binary(op, l, r) => {
            let (lv, la) = epsilon_rec(store, l, visiting);
            // Short-circuit exactly as the inference rules do.
            let short = match op {
                BinOp::Or => lv,
                _ => !lv,
            };
            if short {
                (lv, la)
            } else {
                let (rv, ra) = epsilon_rec(store, r, visiting);
                (rv, la || ra)
            }
        }
    };
    visiting.remove(&n);
    if !assumed {
        store.nullable[n.index()] = Some(value);
    }
    (value, assumed)
}

struct Stepper<'a> {
    store: &'a mut TermStore,
    ctx: &'a MatchContext,
    event: &'a Event,
    memo: HashMap<NodeId, Rc<StepResult>>,
    visiting: HashSet<NodeId>,
}

impl Stepper<'_> {
    fn step(&mut self, n: NodeId) -> Result<Rc<StepResult>, MatchError> {
        if let Some(done) = self.memo.get(&n) {
            return Ok(done.clone());
        }
        // Loaded programs are guarded, so this only trips on hand-built
        // graphs; an unguarded cycle contributes no transitions.
        if !self.visiting.insert(n) {
            return Ok(Rc::new(StepResult::new()));
        }
        let out = self.step_node(n)?;
        self.visiting.remove(&n);
        let out = Rc::new(out);
        self.memo.insert(n, out.clone());
        Ok(out)
    }

    fn step_node(&mut self, n: NodeId) -> Result<StepResult, MatchError> {
        let mut out = StepResult::new();
        match self.store.node(n).clone() {
            Node::Eps => {}
            Node::Prefix(ty, tail) => {
                if let Some(s) = self.ctx.match_event(self.event, &ty)? {
                    out.insert((tail, s));
                }
            }
            Node::Ref(rid) => {
                let body = self.store.ref_body(rid);
                out.extend(self.step(body)?.iter().cloned());
            }
            Node::Binary(BinOp::Or, l, r) => {
                out.extend(self.step(l)?.iter().cloned());
                out.extend(self.step(r)?.iter().cloned());
            }
            Node::Binary(BinOp::Shuffle, l, r) => {
                for (l2, s) in self.step(l)?.iter() {
                    out.insert((self.store.binary(BinOp::Shuffle, *l2, r), s.clone()));
                }
                for (r2, s) in self.step(r)?.iter() {
                    out.insert((self.store.binary(BinOp::Shuffle, l, *r2), s.clone()));
                }
            }
            Node::Binary(BinOp::Cat, l, r) => {
                for (l2, s) in self.step(l)?.iter() {
                    out.insert((self.store.binary(BinOp::Cat, *l2, r), s.clone()));
                }
                if epsilon(self.store, l) {
                    out.extend(self.step(r)?.iter().cloned());
                }
            }
            Node::Binary(BinOp::And, l, r) => {
                let left = self.step(l)?;
                if !left.is_empty() {
                    let right = self.step(r)?;
                    for (l2, s1) in left.iter() {
                        for (r2, s2) in right.iter() {
                            if let Ok(s) = s1.merge(s2) {
                                out.insert((self.store.binary(BinOp::And, *l2, *r2), s));
                            }
                        }
                    }
                }
            }
            Node::Binder(x, body) => {
                for (b2, s) in self.step(body)?.iter() {
                    match s.get(&x) {
                        Some(v) => {
                            let bound = Substitution::from_iter([(x.clone(), v.clone())]);
                            let next = self.store.apply_subst(&bound, *b2);
                            out.insert((next, s.without(&x)));
                        }
                        None => {
                            out.insert((self.store.binder(x.clone(), *b2), s.clone()));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// All `(τ', σ)` such that `node` rewrites to `τ'` with substitution `σ` on
/// `event`.
pub fn step_aux(
    store: &mut TermStore,
    ctx: &MatchContext,
    node: NodeId,
    event: &Event,
) -> Result<StepResult, MatchError> {
    let mut stepper = Stepper {
        store,
        ctx,
        event,
        memo: HashMap::new(),
        visiting: HashSet::new(),
    };
    let out = stepper.step(node)?;
    Ok((*out).clone())
}

impl SpecProgram {
    pub fn initial_state(&self) -> MonitorState {
        MonitorState::new(self.main_node())
    }

    pub fn epsilon(&self, node: NodeId) -> bool {
        epsilon(&mut self.store(), node)
    }

    pub fn step_aux(&self, node: NodeId, event: &Event) -> Result<StepResult, MatchError> {
        step_aux(&mut self.store(), self.context(), node, event)
    }

    /// One monitoring step. A violated state stays violated.
    pub fn step(
        &self,
        state: &MonitorState,
        event: &Event,
        cap: usize,
    ) -> Result<MonitorState, EngineError> {
        let at_event = state.event_count + 1;
        if state.is_violated() {
            return Ok(MonitorState {
                event_count: at_event,
                ..state.clone()
            });
        }
        let mut store = self.store();
        let mut stepper = Stepper {
            store: &mut store,
            ctx: self.context(),
            event,
            memo: HashMap::new(),
            visiting: HashSet::new(),
        };
        let mut frontier = BTreeSet::new();
        for &n in &state.frontier {
            for (next, s) in stepper.step(n)?.iter() {
                if s.is_empty() {
                    frontier.insert(*next);
                } else if !self.reported_open_subst.swap(true, Ordering::Relaxed) {
                    log::warn!("dropping a transition that leaves variables {s} unbound at top level");
                }
            }
            if frontier.len() > cap {
                return Err(EngineError::FrontierOverflow {
                    cap,
                    size: frontier.len(),
                    at_event,
                });
            }
        }
        let verdict = if frontier.is_empty() {
            Verdict::Violated { at_event }
        } else {
            Verdict::Alive
        };
        Ok(MonitorState {
            frontier,
            verdict,
            event_count: at_event,
        })
    }

    /// True when the events consumed so far form a complete trace of the
    /// language, not merely a prefix of one.
    pub fn accepts_final(&self, state: &MonitorState) -> bool {
        if state.is_violated() {
            return false;
        }
        let mut store = self.store();
        state.frontier.iter().any(|&n| epsilon(&mut store, n))
    }

    pub fn run(&self, trace: &[Event], cap: usize) -> Result<MonitorState, EngineError> {
        let mut state = self.initial_state();
        for e in trace {
            state = self.step(&state, e, cap)?;
        }
        Ok(state)
    }

    pub fn accepts(&self, trace: &[Event], cap: usize) -> Result<bool, EngineError> {
        let state = self.run(trace, cap)?;
        Ok(self.accepts_final(&state))
    }
}
