//! A deliberately naive acceptance checker used as ground truth in tests.
//!
//! It shares nothing with the engine beyond the loaded equations and event
//! matching: terms are plain trees, references carry a pending
//! substitution and are unfolded on demand with a fuel budget, and every
//! rule choice is explored by depth-first backtracking without frontier
//! sets, hash-consing or memoization.

use std::collections::HashMap;
use std::rc::Rc;

use thiserror::Error;

use crate::domain::{Event, MatchContext, MatchError};
use crate::graph::{BinOp, Node, NodeId, TermStore};
use crate::program::SpecProgram;
use crate::term::{EventType, Substitution, VarName};

pub const DEFAULT_ORACLE_BOUND: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("trace of {len} events exceeds the oracle bound of {bound}")]
    BoundExceeded { len: usize, bound: usize },
    #[error(transparent)]
    Match(#[from] MatchError),
}

#[derive(Debug, Clone)]
enum Term {
    Eps,
    Prefix(EventType, Rc<Term>),
    Bin(BinOp, Rc<Term>, Rc<Term>),
    Binder(VarName, Rc<Term>),
    /// An equation name with the substitution still to be applied to its
    /// body.
    Ref(Rc<str>, Substitution),
}

fn apply(s: &Substitution, t: &Rc<Term>) -> Rc<Term> {
    if s.is_empty() {
        return t.clone();
    }
    Rc::new(match &**t {
        Term::Eps => Term::Eps,
        Term::Prefix(ty, rest) => Term::Prefix(ty.apply(s), apply(s, rest)),
        Term::Bin(op, l, r) => Term::Bin(*op, apply(s, l), apply(s, r)),
        Term::Binder(x, body) => Term::Binder(x.clone(), apply(&s.without(x), body)),
        Term::Ref(name, pending) => {
            // Values are ground, so variables already substituted are gone
            // from the body; only the rest of `s` still applies.
            let mut composed = pending.clone();
            for (x, v) in s.iter() {
                if !composed.contains(x) {
                    composed.insert(x.clone(), v.clone());
                }
            }
            Term::Ref(name.clone(), composed)
        }
    })
}

pub struct Oracle<'p> {
    ctx: &'p MatchContext,
    bodies: HashMap<Rc<str>, Rc<Term>>,
    main: Rc<str>,
    graph_size: usize,
}

impl<'p> Oracle<'p> {
    pub fn new(program: &'p SpecProgram) -> Self {
        let store = program.store();
        let mut bodies = HashMap::new();
        for (name, eq) in program.equations() {
            let body = tree(&store, store.ref_body(eq.ref_id));
            bodies.insert(Rc::from(name.as_str()), body);
        }
        Oracle {
            ctx: program.context(),
            bodies,
            main: Rc::from(program.main()),
            graph_size: store.reachable(program.main_node()).len(),
        }
    }

    /// Is `trace` a complete trace of the specification?
    pub fn accepts(&self, trace: &[Event], bound: usize) -> Result<bool, OracleError> {
        self.search(trace, bound, true)
    }

    /// Is `trace` consumable by some derivation (a prefix of some trace)?
    pub fn viable(&self, trace: &[Event], bound: usize) -> Result<bool, OracleError> {
        self.search(trace, bound, false)
    }

    fn search(&self, trace: &[Event], bound: usize, complete: bool) -> Result<bool, OracleError> {
        if trace.len() > bound {
            return Err(OracleError::BoundExceeded {
                len: trace.len(),
                bound,
            });
        }
        let run = Run {
            oracle: self,
            fuel: trace.len() + self.graph_size,
            complete,
        };
        let start = Rc::new(Term::Ref(self.main.clone(), Substitution::new()));
        run.derive(&start, trace)
    }
}

fn tree(store: &TermStore, id: NodeId) -> Rc<Term> {
    Rc::new(match store.node(id) {
        Node::Eps => Term::Eps,
        Node::Prefix(ty, rest) => Term::Prefix(ty.clone(), tree(store, *rest)),
        Node::Binary(op, l, r) => Term::Bin(*op, tree(store, *l), tree(store, *r)),
        Node::Binder(x, body) => Term::Binder(x.clone(), tree(store, *body)),
        Node::Ref(rid) => Term::Ref(Rc::from(store.ref_name(*rid)), Substitution::new()),
    })
}

struct Run<'a, 'p> {
    oracle: &'a Oracle<'p>,
    fuel: usize,
    complete: bool,
}

impl Run<'_, '_> {
    fn unfold(&self, name: &str, pending: &Substitution) -> Rc<Term> {
        apply(pending, &self.oracle.bodies[name])
    }

    fn derive(&self, t: &Rc<Term>, trace: &[Event]) -> Result<bool, OracleError> {
        let Some((first, rest)) = trace.split_first() else {
            return Ok(!self.complete || self.nullable(t, self.fuel));
        };
        for (next, s) in self.steps(t, first, self.fuel)? {
            if s.is_empty() && self.derive(&next, rest)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn nullable(&self, t: &Rc<Term>, fuel: usize) -> bool {
        match &**t {
            Term::Eps => true,
            Term::Prefix(..) => false,
            Term::Bin(BinOp::Or, l, r) => self.nullable(l, fuel) || self.nullable(r, fuel),
            Term::Bin(_, l, r) => self.nullable(l, fuel) && self.nullable(r, fuel),
            Term::Binder(_, body) => self.nullable(body, fuel),
            Term::Ref(name, pending) => fuel > 0 && self.nullable(&self.unfold(name, pending), fuel - 1),
        }
    }

    fn steps(
        &self,
        t: &Rc<Term>,
        e: &Event,
        fuel: usize,
    ) -> Result<Vec<(Rc<Term>, Substitution)>, OracleError> {
        let mut out = Vec::new();
        match &**t {
            Term::Eps => {}
            Term::Prefix(ty, rest) => {
                if let Some(s) = self.oracle.ctx.match_event(e, ty)? {
                    out.push((rest.clone(), s));
                }
            }
            Term::Ref(name, pending) => {
                if fuel > 0 {
                    out = self.steps(&self.unfold(name, pending), e, fuel - 1)?;
                }
            }
            Term::Bin(BinOp::Or, l, r) => {
                out = self.steps(l, e, fuel)?;
                out.extend(self.steps(r, e, fuel)?);
            }
            Term::Bin(BinOp::And, l, r) => {
                let left = self.steps(l, e, fuel)?;
                let right = self.steps(r, e, fuel)?;
                for (l2, s1) in &left {
                    for (r2, s2) in &right {
                        if let Ok(s) = s1.merge(s2) {
                            out.push((Rc::new(Term::Bin(BinOp::And, l2.clone(), r2.clone())), s));
                        }
                    }
                }
            }
            Term::Bin(BinOp::Shuffle, l, r) => {
                for (l2, s) in self.steps(l, e, fuel)? {
                    out.push((Rc::new(Term::Bin(BinOp::Shuffle, l2, r.clone())), s));
                }
                for (r2, s) in self.steps(r, e, fuel)? {
                    out.push((Rc::new(Term::Bin(BinOp::Shuffle, l.clone(), r2)), s));
                }
            }
            Term::Bin(BinOp::Cat, l, r) => {
                for (l2, s) in self.steps(l, e, fuel)? {
                    out.push((Rc::new(Term::Bin(BinOp::Cat, l2, r.clone())), s));
                }
                if self.nullable(l, fuel) {
                    out.extend(self.steps(r, e, fuel)?);
                }
            }
            Term::Binder(x, body) => {
                for (b2, s) in self.steps(body, e, fuel)? {
                    match s.get(x) {
                        Some(v) => {
                            let bound: Substitution = [(x.clone(), v.clone())].into_iter().collect();
                            out.push((apply(&bound, &b2), s.without(x)));
                        }
                        None => out.push((Rc::new(Term::Binder(x.clone(), b2)), s)),
                    }
                }
            }
        }
        Ok(out)
    }
}
