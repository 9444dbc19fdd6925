//! Event domains: wire events, base event types and derived type clauses.
//!
//! Two builtin domains exist. `funcs` observes function and callback calls
//! with the base types `func_pre`, `func_post`, `cb_pre` and `cb_post`, each
//! taking `(name, id, args)` plus an optional fourth `ret` argument.
//! `messages` observes typed messages through `msg(type, payload)`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::term::{EventType, Pattern, Substitution, VarName};
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    payload: BTreeMap<String, Value>,
}

impl Event {
    pub fn new(payload: BTreeMap<String, Value>) -> Self {
        Event { payload }
    }

    pub fn from_json(json: &serde_json::Value) -> Result<Self, DecodeError> {
        match Value::from(json) {
            Value::Map(payload) => Ok(Event { payload }),
            _ => Err(DecodeError {
                line: 1,
                column: 1,
                reason: "top-level value is not an object".into(),
            }),
        }
    }

    pub fn get(&self, field: &str) -> Option<&Value> {
        self.payload.get(field)
    }

    pub fn payload(&self) -> &BTreeMap<String, Value> {
        &self.payload
    }

    pub fn to_json(&self) -> serde_json::Value {
        Value::Map(self.payload.clone()).to_json()
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {reason}")]
pub struct DecodeError {
    pub line: usize,
    pub column: usize,
    pub reason: String,
}

pub fn decode_event(raw: &str) -> Result<Event, DecodeError> {
    let json: serde_json::Value = serde_json::from_str(raw).map_err(|e| DecodeError {
        line: e.line(),
        column: e.column(),
        reason: e.to_string(),
    })?;
    Event::from_json(&json)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Funcs,
    Messages,
}

const FUNC_HEADS: [&str; 4] = ["func_pre", "func_post", "cb_pre", "cb_post"];
const FUNC_FIELDS: [&str; 4] = ["name", "id", "args", "ret"];
const MSG_FIELDS: [&str; 2] = ["type", "payload"];

impl Domain {
    pub fn from_name(name: &str) -> Option<Domain> {
        match name {
            "funcs" => Some(Domain::Funcs),
            "messages" => Some(Domain::Messages),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Domain::Funcs => "funcs",
            Domain::Messages => "messages",
        }
    }

    pub fn is_base_name(self, head: &str) -> bool {
        match self {
            Domain::Funcs => FUNC_HEADS.contains(&head),
            Domain::Messages => head == "msg",
        }
    }

    pub fn is_base(self, head: &str, arity: usize) -> bool {
        match self {
            Domain::Funcs => FUNC_HEADS.contains(&head) && (arity == 3 || arity == 4),
            Domain::Messages => head == "msg" && arity == 2,
        }
    }

    /// Matches a base event type. `t` must satisfy [`Domain::is_base`].
    pub fn match_base(self, e: &Event, t: &EventType) -> Option<Substitution> {
        let fields: &[&str] = match self {
            Domain::Funcs => {
                if e.get("event").and_then(Value::as_str) != Some(t.head.as_str()) {
                    return None;
                }
                &FUNC_FIELDS
            }
            Domain::Messages => {
                e.get("type")?;
                &MSG_FIELDS
            }
        };
        let mut bindings = Substitution::new();
        for (pattern, field) in t.args.iter().zip(fields) {
            let ok = match e.get(field) {
                Some(v) => pattern.match_value(v, &mut bindings),
                None => matches!(pattern, Pattern::Wildcard),
            };
            if !ok {
                return None;
            }
        }
        Some(bindings)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GuardOp {
    Eq,
    Ne,
    Gt,
    Ge,
    Lt,
    Le,
}

impl GuardOp {
    pub fn symbol(self) -> &'static str {
        match self {
            GuardOp::Eq => "==",
            GuardOp::Ne => "!=",
            GuardOp::Gt => ">",
            GuardOp::Ge => ">=",
            GuardOp::Lt => "<",
            GuardOp::Le => "<=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Operand {
    Var(VarName),
    Lit(Value),
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Var(x) => write!(f, "{x}"),
            Operand::Lit(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Guard {
    pub op: GuardOp,
    pub lhs: Operand,
    pub rhs: Operand,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GuardError {
    #[error("guard `{0}` compares a non-number with an ordering operator")]
    NotANumber(String),
    #[error("guard `{guard}` reads unbound variable `{var}`")]
    Unbound { guard: String, var: VarName },
}

impl Guard {
    pub fn vars(&self) -> impl Iterator<Item = &VarName> {
        [&self.lhs, &self.rhs].into_iter().filter_map(|o| match o {
            Operand::Var(x) => Some(x),
            Operand::Lit(_) => None,
        })
    }

    pub fn eval(&self, env: &Substitution) -> Result<bool, GuardError> {
        let resolve = |o: &Operand| -> Result<Value, GuardError> {
            match o {
                Operand::Lit(v) => Ok(v.clone()),
                Operand::Var(x) => env.get(x).cloned().ok_or_else(|| GuardError::Unbound {
                    guard: self.to_string(),
                    var: x.clone(),
                }),
            }
        };
        let (l, r) = (resolve(&self.lhs)?, resolve(&self.rhs)?);
        if let GuardOp::Eq | GuardOp::Ne = self.op {
            return Ok((l == r) == (self.op == GuardOp::Eq));
        }
        let (Some(l), Some(r)) = (l.as_f64(), r.as_f64()) else {
            return Err(GuardError::NotANumber(self.to_string()));
        };
        Ok(match self.op {
            GuardOp::Gt => l > r,
            GuardOp::Ge => l >= r,
            GuardOp::Lt => l < r,
            GuardOp::Le => l <= r,
            GuardOp::Eq | GuardOp::Ne => unreachable!(),
        })
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op.symbol(), self.rhs)
    }
}

/// `type head matches body where guards`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeClause {
    pub head: EventType,
    pub body: EventType,
    pub guards: Vec<Guard>,
}

impl fmt::Display for TypeClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type {} matches {}", self.head, self.body)?;
        for (i, g) in self.guards.iter().enumerate() {
            f.write_str(if i == 0 { " where " } else { ", " })?;
            write!(f, "{g}")?;
        }
        f.write_str(";")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("unknown event type `{head}/{arity}`")]
    UnknownTypeName { head: String, arity: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind}")]
pub struct ClauseError {
    /// Index of the offending clause in declaration order.
    pub clause: usize,
    pub kind: ClauseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClauseErrorKind {
    #[error("clause head `{0}` shadows a base type of the domain")]
    ShadowsBase(String),
    #[error("unknown event type `{head}/{arity}` in clause body")]
    UnknownBody { head: String, arity: usize },
    #[error("variable `{0}` in clause head is not bound by the body or a guard")]
    UnboundHeadVar(VarName),
    #[error("guard variable `{0}` occurs neither in the head nor in the body")]
    UnboundGuardVar(VarName),
    #[error("recursive event type definition through `{0}`")]
    Recursive(String),
}

type TypeKey = (String, usize);

/// The active domain plus the user's derived event types.
#[derive(Debug, Clone)]
pub struct MatchContext {
    domain: Domain,
    clauses: Vec<TypeClause>,
    by_head: HashMap<TypeKey, Vec<usize>>,
}

impl MatchContext {
    pub fn new(domain: Domain, clauses: Vec<TypeClause>) -> Result<Self, ClauseError> {
        let mut by_head: HashMap<TypeKey, Vec<usize>> = HashMap::new();
        for (i, c) in clauses.iter().enumerate() {
            if domain.is_base_name(&c.head.head) {
                return Err(ClauseError {
                    clause: i,
                    kind: ClauseErrorKind::ShadowsBase(c.head.head.clone()),
                });
            }
            by_head
                .entry((c.head.head.clone(), c.head.args.len()))
                .or_default()
                .push(i);
        }
        let ctx = MatchContext {
            domain,
            clauses,
            by_head,
        };
        ctx.check_clauses()?;
        Ok(ctx)
    }

    fn check_clauses(&self) -> Result<(), ClauseError> {
        for (i, c) in self.clauses.iter().enumerate() {
            let err = |kind| ClauseError { clause: i, kind };
            if !self.is_known(&c.body.head, c.body.args.len()) {
                return Err(err(ClauseErrorKind::UnknownBody {
                    head: c.body.head.clone(),
                    arity: c.body.args.len(),
                }));
            }
            let head_vars = c.head.vars();
            let body_vars = c.body.vars();
            let guard_vars: HashSet<&VarName> = c.guards.iter().flat_map(Guard::vars).collect();
            if let Some(x) = head_vars
                .iter()
                .find(|x| !body_vars.contains(*x) && !guard_vars.contains(x))
            {
                return Err(err(ClauseErrorKind::UnboundHeadVar(x.clone())));
            }
            if let Some(x) = guard_vars
                .iter()
                .find(|x| !body_vars.contains(**x) && !head_vars.contains(**x))
            {
                return Err(err(ClauseErrorKind::UnboundGuardVar((*x).clone())));
            }
        }
        self.check_acyclic()
    }

    fn check_acyclic(&self) -> Result<(), ClauseError> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Active,
            Done,
        }
        fn visit(
            ctx: &MatchContext,
            key: &TypeKey,
            marks: &mut HashMap<TypeKey, Mark>,
        ) -> Result<(), ClauseError> {
            match marks.get(key) {
                Some(Mark::Done) => return Ok(()),
                Some(Mark::Active) => {
                    let clause = ctx.by_head[key][0];
                    return Err(ClauseError {
                        clause,
                        kind: ClauseErrorKind::Recursive(key.0.clone()),
                    });
                }
                None => {}
            }
            marks.insert(key.clone(), Mark::Active);
            for &i in ctx.by_head.get(key).into_iter().flatten() {
                let body = &ctx.clauses[i].body;
                let dep = (body.head.clone(), body.args.len());
                if ctx.by_head.contains_key(&dep) {
                    visit(ctx, &dep, marks)?;
                }
            }
            marks.insert(key.clone(), Mark::Done);
            Ok(())
        }
        let mut marks = HashMap::new();
        for c in &self.clauses {
            visit(self, &(c.head.head.clone(), c.head.args.len()), &mut marks)?;
        }
        Ok(())
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn clauses(&self) -> &[TypeClause] {
        &self.clauses
    }

    pub fn is_known(&self, head: &str, arity: usize) -> bool {
        self.domain.is_base(head, arity) || self.by_head.contains_key(&(head.to_owned(), arity))
    }

    /// `Ok(None)` is an ordinary non-match. On success the domain of the
    /// substitution is exactly the set of variables of `t`.
    pub fn match_event(&self, e: &Event, t: &EventType) -> Result<Option<Substitution>, MatchError> {
        if self.domain.is_base(&t.head, t.args.len()) {
            Ok(self.domain.match_base(e, t))
        } else {
            self.match_derived(e, t)
        }
    }

    pub fn match_derived(
        &self,
        e: &Event,
        t: &EventType,
    ) -> Result<Option<Substitution>, MatchError> {
        let Some(candidates) = self.by_head.get(&(t.head.clone(), t.args.len())) else {
            return Err(MatchError::UnknownTypeName {
                head: t.head.clone(),
                arity: t.args.len(),
            });
        };
        for &i in candidates {
            if let Some(s) = self.try_clause(e, t, &self.clauses[i])? {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }

    fn try_clause(
        &self,
        e: &Event,
        t: &EventType,
        clause: &TypeClause,
    ) -> Result<Option<Substitution>, MatchError> {
        // Ground arguments at the use site instantiate the head parameters.
        let mut env = Substitution::new();
        for (param, arg) in clause.head.args.iter().zip(&t.args) {
            if let Some(v) = arg.ground_value() {
                if !param.match_value(&v, &mut env) {
                    return Ok(None);
                }
            }
        }
        let body = clause.body.apply(&env);
        let Some(found) = self.match_event(e, &body)? else {
            return Ok(None);
        };
        let Ok(env) = env.merge(&found) else {
            return Ok(None);
        };
        for guard in &clause.guards {
            match guard.eval(&env) {
                Ok(true) => {}
                Ok(false) => return Ok(None),
                Err(err) => {
                    log::warn!("clause `{clause}` skipped: {err}");
                    return Ok(None);
                }
            }
        }
        // Read the use-site variables back from the instantiated head.
        let mut out = Substitution::new();
        for (param, arg) in clause.head.args.iter().zip(&t.args) {
            if matches!(arg, Pattern::Wildcard) {
                continue;
            }
            let Some(v) = param.apply(&env).ground_value() else {
                return Ok(None);
            };
            if !arg.match_value(&v, &mut out) {
                return Ok(None);
            }
        }
        Ok(Some(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn ev(j: serde_json::Value) -> Event {
        Event::from_json(&j).unwrap()
    }

    fn var(x: &str) -> Pattern {
        Pattern::var(x)
    }

    fn seq(items: Vec<Pattern>, tail: Option<Pattern>) -> Pattern {
        Pattern::Seq {
            items,
            tail: tail.map(Box::new),
        }
    }

    fn get<'a>(s: &'a Substitution, x: &str) -> Option<&'a Value> {
        s.get(&VarName::new(x))
    }

    fn funcs_ctx() -> MatchContext {
        let clause = |head: EventType, body: EventType| TypeClause {
            head,
            body,
            guards: vec![],
        };
        MatchContext::new(
            Domain::Funcs,
            vec![
                clause(
                    EventType::new("open", vec![var("ID")]),
                    EventType::new("func_pre", vec![Pattern::lit("fs.open"), var("ID"), Pattern::Wildcard]),
                ),
                clause(
                    EventType::new("write", vec![var("ID"), var("FD")]),
                    EventType::new(
                        "func_pre",
                        vec![Pattern::lit("fs.write"), var("ID"), seq(vec![var("FD")], Some(Pattern::Wildcard))],
                    ),
                ),
                clause(
                    EventType::new("cb", vec![var("ID")]),
                    EventType::new("cb_pre", vec![Pattern::Wildcard, var("ID"), Pattern::Wildcard]),
                ),
                clause(
                    EventType::new("cb", vec![var("ID"), var("FD")]),
                    EventType::new(
                        "cb_pre",
                        vec![
                            Pattern::Wildcard,
                            var("ID"),
                            seq(vec![Pattern::Wildcard, var("FD")], Some(Pattern::Wildcard)),
                        ],
                    ),
                ),
            ],
        )
        .unwrap()
    }

    fn ping_ctx() -> MatchContext {
        MatchContext::new(
            Domain::Messages,
            vec![TypeClause {
                head: EventType::new("ping", vec![var("V"), var("PREV")]),
                body: EventType::new("msg", vec![Pattern::lit("ping"), var("V")]),
                guards: vec![Guard {
                    op: GuardOp::Gt,
                    lhs: Operand::Var(VarName::new("V")),
                    rhs: Operand::Var(VarName::new("PREV")),
                }],
            }],
        )
        .unwrap()
    }

    #[test]
    fn decode_function_event() {
        let e = decode_event(r#"{"event":"func_pre","name":"fs.open","id":42,"args":["tmp.txt","w"]}"#)
            .unwrap();
        assert_eq!(e.payload().len(), 4);
        assert_eq!(e.get("id"), Some(&Value::from(42i64)));
    }

    #[test]
    fn decode_rejects_non_objects_and_garbage() {
        let err = decode_event("[]").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
        let err = decode_event("{\"type\":\n  ").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(decode_event(r#"{"type":"ping","payload":1}"#).is_ok());
    }

    #[test]
    fn base_match_binds_args() {
        let ctx = funcs_ctx();
        let e = ev(json!({"event":"func_post","name":"fs.openSync","id":1,"args":["tmp.txt","w"],"ret":9}));
        let t = EventType::new("func_post", vec![Pattern::lit("fs.openSync"), Pattern::Wildcard, var("args")]);
        let s = ctx.match_event(&e, &t).unwrap().unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(get(&s, "args"), Some(&Value::from(json!(["tmp.txt", "w"]))));

        // Four-argument form exposes the return value.
        let t = EventType::new("func_post", vec![var("name"), Pattern::Wildcard, var("args"), Pattern::lit(9i64)]);
        let s = ctx.match_event(&e, &t).unwrap().unwrap();
        assert_eq!(get(&s, "name"), Some(&Value::from("fs.openSync")));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn base_match_discriminator_mismatch() {
        let ctx = funcs_ctx();
        let e = ev(json!({"event":"func_pre","name":"fs.open","id":42,"args":[]}));
        let t = EventType::new("cb_pre", vec![Pattern::Wildcard, var("id"), Pattern::Wildcard]);
        assert_eq!(ctx.match_event(&e, &t).unwrap(), None);
    }

    #[test]
    fn base_match_nested_list_pattern() {
        let ctx = funcs_ctx();
        let e = ev(json!({"event":"cb_pre","name":"fs.open","id":42,"args":[null, 9]}));
        let t = EventType::new(
            "cb_pre",
            vec![Pattern::Wildcard, Pattern::lit(42i64), seq(vec![Pattern::Wildcard, var("fd")], Some(Pattern::Wildcard))],
        );
        let s = ctx.match_event(&e, &t).unwrap().unwrap();
        assert_eq!(get(&s, "fd"), Some(&Value::from(9i64)));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn missing_field_only_matches_wildcard() {
        let ctx = funcs_ctx();
        let e = ev(json!({"event":"func_post","name":"f","id":1,"args":[]}));
        let wild = EventType::new("func_post", vec![Pattern::Wildcard; 4]);
        assert!(ctx.match_event(&e, &wild).unwrap().is_some());
        let bind = EventType::new("func_post", vec![Pattern::Wildcard, Pattern::Wildcard, Pattern::Wildcard, var("r")]);
        assert!(ctx.match_event(&e, &bind).unwrap().is_none());
    }

    #[test]
    fn derived_write_binds_both_variables() {
        let ctx = funcs_ctx();
        let e = ev(json!({"event":"func_pre","name":"fs.write","id":43,"args":[9, "hello", "<fn>"]}));
        let t = EventType::new("write", vec![var("id2"), var("fd")]);
        let s = ctx.match_event(&e, &t).unwrap().unwrap();
        assert_eq!(get(&s, "id2"), Some(&Value::from(43i64)));
        assert_eq!(get(&s, "fd"), Some(&Value::from(9i64)));

        let partially_ground = EventType::new("write", vec![var("id2"), Pattern::lit(9i64)]);
        let s = ctx.match_event(&e, &partially_ground).unwrap().unwrap();
        assert_eq!(s.len(), 1);
        let other_fd = EventType::new("write", vec![var("id2"), Pattern::lit(10i64)]);
        assert!(ctx.match_event(&e, &other_fd).unwrap().is_none());
    }

    #[test]
    fn derived_callback_by_arity() {
        let ctx = funcs_ctx();
        let e = ev(json!({"event":"cb_pre","name":"fs.open","id":42,"args":[null, 9]}));
        let s = ctx.match_event(&e, &EventType::new("cb", vec![var("id")])).unwrap().unwrap();
        assert_eq!(get(&s, "id"), Some(&Value::from(42i64)));
        let s = ctx
            .match_event(&e, &EventType::new("cb", vec![Pattern::lit(42i64), var("fd")]))
            .unwrap()
            .unwrap();
        assert_eq!(get(&s, "fd"), Some(&Value::from(9i64)));
        assert!(ctx
            .match_event(&e, &EventType::new("cb", vec![Pattern::lit(43i64)]))
            .unwrap()
            .is_none());
    }

    #[test]
    fn ping_guard_is_strict() {
        let ctx = ping_ctx();
        let e = ev(json!({"type":"ping","payload":1}));
        let s = ctx
            .match_event(&e, &EventType::new("ping", vec![var("v1"), Pattern::lit(0i64)]))
            .unwrap()
            .unwrap();
        assert_eq!(get(&s, "v1"), Some(&Value::from(1i64)));
        assert_eq!(s.len(), 1);
        assert!(ctx
            .match_event(&e, &EventType::new("ping", vec![var("v1"), Pattern::lit(1i64)]))
            .unwrap()
            .is_none());
        let pong = ev(json!({"type":"pong","payload":5}));
        assert!(ctx
            .match_event(&pong, &EventType::new("ping", vec![var("v1"), Pattern::lit(1i64)]))
            .unwrap()
            .is_none());
    }

    #[test]
    fn guard_on_non_number_is_no_match() {
        let ctx = ping_ctx();
        let e = ev(json!({"type":"ping","payload":"high"}));
        assert!(ctx
            .match_event(&e, &EventType::new("ping", vec![var("v1"), Pattern::lit(0i64)]))
            .unwrap()
            .is_none());
        // The previous value is unknown: the guard cannot be decided.
        let e = ev(json!({"type":"ping","payload":3}));
        assert!(ctx
            .match_event(&e, &EventType::new("ping", vec![var("v1"), var("v0")]))
            .unwrap()
            .is_none());
    }

    #[test]
    fn unknown_type_name() {
        let ctx = funcs_ctx();
        let e = ev(json!({"event":"func_pre","name":"x","id":1,"args":[]}));
        assert_eq!(
            ctx.match_event(&e, &EventType::new("foo", vec![var("x")])),
            Err(MatchError::UnknownTypeName { head: "foo".into(), arity: 1 })
        );
    }

    #[test]
    fn clause_checks() {
        let shadow = TypeClause {
            head: EventType::new("func_pre", vec![]),
            body: EventType::new("func_pre", vec![Pattern::Wildcard; 3]),
            guards: vec![],
        };
        assert!(matches!(
            MatchContext::new(Domain::Funcs, vec![shadow]).unwrap_err().kind,
            ClauseErrorKind::ShadowsBase(_)
        ));

        let a = TypeClause {
            head: EventType::new("a", vec![]),
            body: EventType::new("b", vec![]),
            guards: vec![],
        };
        let b = TypeClause {
            head: EventType::new("b", vec![]),
            body: EventType::new("a", vec![]),
            guards: vec![],
        };
        assert!(matches!(
            MatchContext::new(Domain::Funcs, vec![a, b]).unwrap_err().kind,
            ClauseErrorKind::Recursive(_)
        ));

        let unbound = TypeClause {
            head: EventType::new("a", vec![var("X")]),
            body: EventType::new("msg", vec![Pattern::Wildcard, Pattern::Wildcard]),
            guards: vec![],
        };
        assert!(matches!(
            MatchContext::new(Domain::Messages, vec![unbound]).unwrap_err().kind,
            ClauseErrorKind::UnboundHeadVar(_)
        ));
    }

    #[test]
    fn every_wire_event_matches_one_base_head() {
        let ctx = funcs_ctx();
        for kind in FUNC_HEADS {
            let e = ev(json!({"event": kind, "name": "f", "id": 1, "args": [1], "ret": 2}));
            let hits = FUNC_HEADS
                .iter()
                .filter(|h| {
                    ctx.match_event(&e, &EventType::new(**h, vec![Pattern::Wildcard; 3]))
                        .unwrap()
                        .is_some()
                })
                .count();
            assert_eq!(hits, 1, "{kind}");
        }
    }
}
