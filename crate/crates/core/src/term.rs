//! Variables, patterns, event types and substitutions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarName(String);

impl VarName {
    /// Panics if `name` is not a valid identifier.
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(is_identifier(&name), "invalid variable name {name:?}");
        VarName(name)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    s != "_" && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    Literal(Value),
    Var(VarName),
    Wildcard,
    /// `[p1, ..., pn | tail]`; without a tail the length must be exactly `n`.
    Seq {
        items: Vec<Pattern>,
        tail: Option<Box<Pattern>>,
    },
    /// Matches a map with the single key `name` whose value is a sequence
    /// matched element-wise by `args`.
    Constructor { name: String, args: Vec<Pattern> },
}

impl Pattern {
    pub fn var(name: &str) -> Self {
        Pattern::Var(VarName::new(name))
    }

    pub fn lit(v: impl Into<Value>) -> Self {
        Pattern::Literal(v.into())
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<VarName>) {
        match self {
            Pattern::Var(x) => {
                out.insert(x.clone());
            }
            Pattern::Literal(_) | Pattern::Wildcard => {}
            Pattern::Seq { items, tail } => {
                items.iter().for_each(|p| p.collect_vars(out));
                if let Some(t) = tail {
                    t.collect_vars(out);
                }
            }
            Pattern::Constructor { args, .. } => args.iter().for_each(|p| p.collect_vars(out)),
        }
    }

    pub fn apply(&self, s: &Substitution) -> Pattern {
        match self {
            Pattern::Var(x) => match s.get(x) {
                Some(v) => Pattern::Literal(v.clone()),
                None => self.clone(),
            },
            Pattern::Literal(_) | Pattern::Wildcard => self.clone(),
            Pattern::Seq { items, tail } => Pattern::Seq {
                items: items.iter().map(|p| p.apply(s)).collect(),
                tail: tail.as_ref().map(|t| Box::new(t.apply(s))),
            },
            Pattern::Constructor { name, args } => Pattern::Constructor {
                name: name.clone(),
                args: args.iter().map(|p| p.apply(s)).collect(),
            },
        }
    }

    /// The value denoted by a pattern with no variables or wildcards.
    pub fn ground_value(&self) -> Option<Value> {
        match self {
            Pattern::Literal(v) => Some(v.clone()),
            Pattern::Var(_) | Pattern::Wildcard => None,
            Pattern::Seq { items, tail } => {
                let mut out = items
                    .iter()
                    .map(Pattern::ground_value)
                    .collect::<Option<Vec<_>>>()?;
                if let Some(t) = tail {
                    match t.ground_value()? {
                        Value::Seq(rest) => out.extend(rest),
                        _ => return None,
                    }
                }
                Some(Value::Seq(out))
            }
            Pattern::Constructor { name, args } => {
                let args = args
                    .iter()
                    .map(Pattern::ground_value)
                    .collect::<Option<Vec<_>>>()?;
                Some(Value::Map(BTreeMap::from([(name.clone(), Value::Seq(args))])))
            }
        }
    }

    /// Matches `value`, extending `bindings`. Variables already bound must be
    /// bound to an equal value. On failure `bindings` may hold partial
    /// results; callers discard it.
    pub fn match_value(&self, value: &Value, bindings: &mut Substitution) -> bool {
        match self {
            Pattern::Wildcard => true,
            Pattern::Literal(v) => v == value,
            Pattern::Var(x) => match bindings.get(x) {
                Some(bound) => bound == value,
                None => {
                    bindings.insert(x.clone(), value.clone());
                    true
                }
            },
            Pattern::Seq { items, tail } => {
                let Value::Seq(elems) = value else {
                    return false;
                };
                let fits = match tail {
                    Some(_) => elems.len() >= items.len(),
                    None => elems.len() == items.len(),
                };
                if !fits {
                    return false;
                }
                if !items
                    .iter()
                    .zip(elems)
                    .all(|(p, v)| p.match_value(v, bindings))
                {
                    return false;
                }
                match tail {
                    Some(t) => t.match_value(&Value::Seq(elems[items.len()..].to_vec()), bindings),
                    None => true,
                }
            }
            Pattern::Constructor { name, args } => {
                let Value::Map(m) = value else {
                    return false;
                };
                if m.len() != 1 {
                    return false;
                }
                match m.get(name) {
                    Some(Value::Seq(elems)) if elems.len() == args.len() => args
                        .iter()
                        .zip(elems)
                        .all(|(p, v)| p.match_value(v, bindings)),
                    _ => false,
                }
            }
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Literal(v) => write!(f, "{v}"),
            Pattern::Var(x) => write!(f, "{x}"),
            Pattern::Wildcard => f.write_str("_"),
            Pattern::Seq { items, tail } => {
                f.write_str("[")?;
                write_list(f, items)?;
                if let Some(t) = tail {
                    write!(f, " | {t}")?;
                }
                f.write_str("]")
            }
            Pattern::Constructor { name, args } => {
                write!(f, "{name}(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Pattern]) -> fmt::Result {
    for (i, p) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{p}")?;
    }
    Ok(())
}

/// A named pattern term, e.g. `write(id2, fd)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventType {
    pub head: String,
    pub args: Vec<Pattern>,
}

impl EventType {
    pub fn new(head: impl Into<String>, args: Vec<Pattern>) -> Self {
        EventType {
            head: head.into(),
            args,
        }
    }

    pub fn vars(&self) -> BTreeSet<VarName> {
        let mut out = BTreeSet::new();
        self.args.iter().for_each(|p| p.collect_vars(&mut out));
        out
    }

    pub fn apply(&self, s: &Substitution) -> EventType {
        if s.is_empty() {
            return self.clone();
        }
        EventType {
            head: self.head.clone(),
            args: self.args.iter().map(|p| p.apply(s)).collect(),
        }
    }
}

impl fmt::Display for EventType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.head)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            write_list(f, &self.args)?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Returned by [`Substitution::merge`] when both sides bind a shared
/// variable to different values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conflict {
    pub var: VarName,
}

/// A finite partial map from variables to values.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution(BTreeMap<VarName, Value>);

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, x: &VarName) -> Option<&Value> {
        self.0.get(x)
    }

    pub fn contains(&self, x: &VarName) -> bool {
        self.0.contains_key(x)
    }

    pub fn insert(&mut self, x: VarName, v: Value) -> Option<Value> {
        self.0.insert(x, v)
    }

    pub fn domain(&self) -> BTreeSet<VarName> {
        self.0.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarName, &Value)> {
        self.0.iter()
    }

    /// Union of two substitutions that agree on their shared domain.
    pub fn merge(&self, other: &Substitution) -> Result<Substitution, Conflict> {
        let mut out = self.clone();
        for (x, v) in &other.0 {
            match out.0.get(x) {
                Some(mine) if mine != v => return Err(Conflict { var: x.clone() }),
                Some(_) => {}
                None => {
                    out.0.insert(x.clone(), v.clone());
                }
            }
        }
        Ok(out)
    }

    /// The substitution with `x` removed from its domain.
    pub fn without(&self, x: &VarName) -> Substitution {
        if !self.0.contains_key(x) {
            return self.clone();
        }
        let mut out = self.clone();
        out.0.remove(x);
        out
    }

    /// Keeps only the bindings for variables in `vars`.
    pub fn restrict_to(&self, vars: &BTreeSet<VarName>) -> Substitution {
        Substitution(
            self.0
                .iter()
                .filter(|(x, _)| vars.contains(*x))
                .map(|(x, v)| (x.clone(), v.clone()))
                .collect(),
        )
    }
}

impl FromIterator<(VarName, Value)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (VarName, Value)>>(iter: I) -> Self {
        Substitution(iter.into_iter().collect())
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}={v}")?;
        }
        f.write_str("}")
    }
}
