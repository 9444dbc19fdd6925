//! Trace expressions as a finite cyclic term graph.
//!
//! Interior nodes are hash-consed, so structurally identical constructions
//! share one [`NodeId`]. Cycles only pass through [`Node::Ref`] nodes, whose
//! bodies are filled in after allocation. Substitution creates new refs
//! lazily and memoizes them, which keeps the result a regular term.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::term::{EventType, Substitution, VarName};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RefId(u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Cat,
    And,
    Or,
    Shuffle,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Cat => ".",
            BinOp::And => "/\\",
            BinOp::Or => "\\/",
            BinOp::Shuffle => "|",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Eps,
    Prefix(EventType, NodeId),
    Binary(BinOp, NodeId, NodeId),
    Binder(VarName, NodeId),
    Ref(RefId),
}

#[derive(Debug)]
struct RefSlot {
    name: String,
    body: Option<NodeId>,
}

#[derive(Debug, Default)]
pub struct TermStore {
    nodes: Vec<Node>,
    interned: HashMap<Node, NodeId>,
    refs: Vec<RefSlot>,
    free_vars: Vec<Option<Arc<BTreeSet<VarName>>>>,
    pub(crate) nullable: Vec<Option<bool>>,
    specialized: HashMap<(NodeId, Substitution), NodeId>,
}

impl TermStore {
    pub fn new() -> Self {
        TermStore::default()
    }

    /// Number of distinct nodes created so far.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    fn push(&mut self, node: Node) -> NodeId {
        let id = NodeId(u32::try_from(self.nodes.len()).expect("term store exhausted"));
        self.nodes.push(node);
        self.free_vars.push(None);
        self.nullable.push(None);
        id
    }

    pub fn mk(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.interned.get(&node) {
            return id;
        }
        let id = self.push(node.clone());
        self.interned.insert(node, id);
        id
    }

    pub fn eps(&mut self) -> NodeId {
        self.mk(Node::Eps)
    }

    pub fn prefix(&mut self, ty: EventType, tail: NodeId) -> NodeId {
        self.mk(Node::Prefix(ty, tail))
    }

    pub fn binary(&mut self, op: BinOp, left: NodeId, right: NodeId) -> NodeId {
        self.mk(Node::Binary(op, left, right))
    }

    pub fn binder(&mut self, var: VarName, body: NodeId) -> NodeId {
        self.mk(Node::Binder(var, body))
    }

    /// Allocates a fresh, not yet resolved, reference node.
    pub fn new_ref(&mut self, name: impl Into<String>) -> (RefId, NodeId) {
        let rid = RefId(u32::try_from(self.refs.len()).expect("too many references"));
        self.refs.push(RefSlot {
            name: name.into(),
            body: None,
        });
        let node = self.mk(Node::Ref(rid));
        (rid, node)
    }

    pub fn set_ref_body(&mut self, rid: RefId, body: NodeId) {
        let slot = &mut self.refs[rid.0 as usize];
        assert!(slot.body.is_none(), "reference {} resolved twice", slot.name);
        slot.body = Some(body);
    }

    pub fn ref_name(&self, rid: RefId) -> &str {
        &self.refs[rid.0 as usize].name
    }

    /// Panics on an unresolved reference; loaded programs never contain one.
    pub fn ref_body(&self, rid: RefId) -> NodeId {
        let slot = &self.refs[rid.0 as usize];
        slot.body
            .unwrap_or_else(|| panic!("unresolved reference {}", slot.name))
    }

    pub fn children(&self, id: NodeId) -> Vec<NodeId> {
        match self.node(id) {
            Node::Eps => vec![],
            Node::Prefix(_, t) | Node::Binder(_, t) => vec![*t],
            Node::Binary(_, l, r) => vec![*l, *r],
            Node::Ref(rid) => vec![self.ref_body(*rid)],
        }
    }

    /// Nodes reachable from `root`, `root` included, in discovery order.
    pub fn reachable(&self, root: NodeId) -> Vec<NodeId> {
        let mut seen = HashSet::new();
        let mut order = Vec::new();
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            order.push(n);
            stack.extend(self.children(n).into_iter().rev());
        }
        order
    }

    /// Free variables of the (possibly cyclic) term rooted at `root`,
    /// computed as a least fixpoint over the uncached reachable nodes.
    pub fn free_vars(&mut self, root: NodeId) -> Arc<BTreeSet<VarName>> {
        if let Some(fv) = &self.free_vars[root.index()] {
            return fv.clone();
        }
        let mut pending = Vec::new();
        let mut seen = HashSet::new();
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            if self.free_vars[n.index()].is_some() || !seen.insert(n) {
                continue;
            }
            pending.push(n);
            stack.extend(self.children(n));
        }

        let mut work: HashMap<NodeId, BTreeSet<VarName>> =
            pending.iter().map(|&n| (n, BTreeSet::new())).collect();
        loop {
            let mut changed = false;
            for &n in pending.iter().rev() {
                let next = self.free_vars_step(n, &work);
                if work[&n] != next {
                    work.insert(n, next);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for (n, fv) in work {
            self.free_vars[n.index()] = Some(Arc::new(fv));
        }
        self.free_vars[root.index()].clone().expect("root analysed")
    }

    fn free_vars_step(
        &self,
        n: NodeId,
        work: &HashMap<NodeId, BTreeSet<VarName>>,
    ) -> BTreeSet<VarName> {
        let of = |c: NodeId| -> BTreeSet<VarName> {
            match &self.free_vars[c.index()] {
                Some(fv) => (**fv).clone(),
                None => work[&c].clone(),
            }
        };
        match self.node(n) {
            Node::Eps => BTreeSet::new(),
            Node::Prefix(ty, t) => {
                let mut out = ty.vars();
                out.extend(of(*t));
                out
            }
            Node::Binary(_, l, r) => {
                let mut out = of(*l);
                out.extend(of(*r));
                out
            }
            Node::Binder(x, b) => {
                let mut out = of(*b);
                out.remove(x);
                out
            }
            Node::Ref(rid) => of(self.ref_body(*rid)),
        }
    }

    /// Replaces every free occurrence of each variable bound by `s`.
    ///
    /// Specializations are memoized by `(node, s restricted to the node's
    /// free variables)`; a reference is registered in the memo table before
    /// its body is rewritten, so cycles map onto new cycles.
    pub fn apply_subst(&mut self, s: &Substitution, id: NodeId) -> NodeId {
        if s.is_empty() {
            return id;
        }
        let fv = self.free_vars(id);
        let s = s.restrict_to(&fv);
        if s.is_empty() {
            return id;
        }
        let key = (id, s);
        if let Some(&done) = self.specialized.get(&key) {
            return done;
        }
        let s = &key.1;
        let out = match self.node(id).clone() {
            Node::Eps => id,
            Node::Prefix(ty, tail) => {
                let tail = self.apply_subst(s, tail);
                self.prefix(ty.apply(s), tail)
            }
            Node::Binary(op, l, r) => {
                let l = self.apply_subst(s, l);
                let r = self.apply_subst(s, r);
                self.binary(op, l, r)
            }
            Node::Binder(x, body) => {
                let body = self.apply_subst(&s.without(&x), body);
                self.binder(x, body)
            }
            Node::Ref(rid) => {
                let name = format!("{}{}", self.ref_name(rid), s);
                let (new_rid, new_node) = self.new_ref(name);
                self.specialized.insert(key.clone(), new_node);
                let body = self.ref_body(rid);
                let body = self.apply_subst(s, body);
                self.set_ref_body(new_rid, body);
                new_node
            }
        };
        self.specialized.insert(key, out);
        out
    }

    /// Human-readable rendering; references print by name.
    pub fn render(&self, id: NodeId) -> String {
        crate::syntax::format::render_expr(self, id)
    }
}
