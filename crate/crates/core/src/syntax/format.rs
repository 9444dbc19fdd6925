//! Pretty-printing with the fewest parentheses that still parse back to the
//! same term.

use std::fmt::Write;

use crate::graph::{BinOp, Node, NodeId, TermStore};
use crate::program::SpecProgram;

const BINDER: u8 = 0;
const PREFIX: u8 = 5;
const ATOM: u8 = 6;

fn op_prec(op: BinOp) -> u8 {
    match op {
        BinOp::Shuffle => 1,
        BinOp::Or => 2,
        BinOp::And => 3,
        BinOp::Cat => 4,
    }
}

fn prec(store: &TermStore, id: NodeId) -> u8 {
    match store.node(id) {
        Node::Eps | Node::Ref(_) => ATOM,
        Node::Prefix(..) => PREFIX,
        Node::Binary(op, ..) => op_prec(*op),
        Node::Binder(..) => BINDER,
    }
}

/// Renders the term rooted at `id`; references print by name and are not
/// unfolded.
pub fn render_expr(store: &TermStore, id: NodeId) -> String {
    let mut out = String::new();
    write_expr(store, id, true, &mut out);
    out
}

/// `tail` is true when nothing follows this sub-term before the end of the
/// enclosing parenthesis, which is where a binder may stand unparenthesized.
fn write_expr(store: &TermStore, id: NodeId, tail: bool, out: &mut String) {
    match store.node(id) {
        Node::Eps => out.push_str("eps"),
        Node::Ref(rid) => out.push_str(store.ref_name(*rid)),
        Node::Prefix(ty, rest) => {
            let _ = write!(out, "{ty} : ");
            let p = prec(store, *rest);
            let bare = p >= PREFIX || (p == BINDER && tail);
            write_child(store, *rest, bare, tail, out);
        }
        Node::Binary(op, l, r) => {
            let p = op_prec(*op);
            let lp = prec(store, *l);
            write_child(store, *l, lp >= p, false, out);
            let _ = write!(out, " {} ", op.symbol());
            let rp = prec(store, *r);
            let bare = if rp == BINDER { tail } else { rp > p };
            write_child(store, *r, bare, tail, out);
        }
        Node::Binder(x, body) => {
            let _ = write!(out, "var {x}. ");
            write_expr(store, *body, tail, out);
        }
    }
}

fn write_child(store: &TermStore, id: NodeId, bare: bool, tail: bool, out: &mut String) {
    if bare {
        write_expr(store, id, tail, out);
    } else {
        out.push('(');
        write_expr(store, id, true, out);
        out.push(')');
    }
}

/// Canonical source text of a program; parsing it yields a structurally
/// equal program.
pub fn format_spec(program: &SpecProgram) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "domain {};", program.domain().name());
    let _ = writeln!(out, "main {};", program.main());
    {
        let store = program.store();
        for (name, eq) in program.equations() {
            let body = store.ref_body(eq.ref_id);
            let _ = writeln!(out, "{name} = {};", render_expr(&store, body));
        }
    }
    for clause in program.clauses() {
        let _ = writeln!(out, "{clause}");
    }
    out
}
