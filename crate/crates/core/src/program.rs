use std::collections::HashMap;
use std::sync::atomic::AtomicBool;
use std::sync::{Mutex, MutexGuard};

use indexmap::IndexMap;

use crate::domain::{Domain, MatchContext, TypeClause};
use crate::graph::{Node, NodeId, RefId, TermStore};
use crate::syntax::Diagnostic;

#[derive(Debug, Clone, Copy)]
pub struct Equation {
    pub ref_id: RefId,
    /// The reference node standing for the equation name.
    pub node: NodeId,
}

/// A loaded specification: named equations over a shared term graph plus
/// the match context of its event domain.
///
/// The graph grows as monitors specialize equations at runtime, so it sits
/// behind a mutex; everything else is immutable after loading.
#[derive(Debug)]
pub struct SpecProgram {
    store: Mutex<TermStore>,
    equations: IndexMap<String, Equation>,
    main: String,
    ctx: MatchContext,
    warnings: Vec<Diagnostic>,
    pub(crate) reported_open_subst: AtomicBool,
}

impl SpecProgram {
    pub(crate) fn from_parts(
        store: TermStore,
        equations: IndexMap<String, Equation>,
        main: String,
        ctx: MatchContext,
        warnings: Vec<Diagnostic>,
    ) -> Self {
        assert!(equations.contains_key(&main));
        SpecProgram {
            store: Mutex::new(store),
            equations,
            main,
            ctx,
            warnings,
            reported_open_subst: AtomicBool::new(false),
        }
    }

    pub fn store(&self) -> MutexGuard<'_, TermStore> {
        // A panic while holding the lock leaves the store consistent: nodes
        // are only ever appended.
        self.store.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn equations(&self) -> &IndexMap<String, Equation> {
        &self.equations
    }

    pub fn equation(&self, name: &str) -> Option<NodeId> {
        self.equations.get(name).map(|eq| eq.node)
    }

    pub fn main(&self) -> &str {
        &self.main
    }

    pub fn main_node(&self) -> NodeId {
        self.equations[&self.main].node
    }

    pub fn context(&self) -> &MatchContext {
        &self.ctx
    }

    pub fn domain(&self) -> Domain {
        self.ctx.domain()
    }

    pub fn clauses(&self) -> &[TypeClause] {
        self.ctx.clauses()
    }

    pub fn warnings(&self) -> &[Diagnostic] {
        &self.warnings
    }

    pub fn render(&self, node: NodeId) -> String {
        self.store().render(node)
    }

    /// Structural equality of two programs: same header, clauses and
    /// equation names, and equation bodies that coincide node for node with
    /// references compared by name.
    pub fn graph_eq(&self, other: &SpecProgram) -> bool {
        if self.main != other.main
            || self.domain() != other.domain()
            || self.clauses() != other.clauses()
            || !self.equations.keys().eq(other.equations.keys())
        {
            return false;
        }
        let (a, b) = (self.store(), other.store());
        let mut paired: HashMap<NodeId, NodeId> = HashMap::new();
        self.equations.values().zip(other.equations.values()).all(|(x, y)| {
            let bx = a.ref_body(x.ref_id);
            let by = b.ref_body(y.ref_id);
            same_tree(&a, bx, &b, by, &mut paired)
        })
    }
}

fn same_tree(
    a: &TermStore,
    x: NodeId,
    b: &TermStore,
    y: NodeId,
    paired: &mut HashMap<NodeId, NodeId>,
) -> bool {
    if let Some(&seen) = paired.get(&x) {
        return seen == y;
    }
    let ok = match (a.node(x), b.node(y)) {
        (Node::Eps, Node::Eps) => true,
        (Node::Prefix(t1, c1), Node::Prefix(t2, c2)) => t1 == t2 && same_tree(a, *c1, b, *c2, paired),
        (Node::Binary(o1, l1, r1), Node::Binary(o2, l2, r2)) => {
            o1 == o2 && same_tree(a, *l1, b, *l2, paired) && same_tree(a, *r1, b, *r2, paired)
        }
        (Node::Binder(v1, c1), Node::Binder(v2, c2)) => v1 == v2 && same_tree(a, *c1, b, *c2, paired),
        (Node::Ref(r1), Node::Ref(r2)) => a.ref_name(*r1) == b.ref_name(*r2),
        _ => false,
    };
    if ok {
        paired.insert(x, y);
    }
    ok
}
