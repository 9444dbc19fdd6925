//! Name resolution and load-time checks.

use std::collections::{HashMap, HashSet};

use indexmap::IndexMap;

use crate::domain::{Domain, MatchContext};
use crate::graph::{Node, NodeId, RefId, TermStore};
use crate::program::{Equation, SpecProgram};

use super::ast::{Expr, ExprKind, ProgramAst};
use super::{Diagnostic, DiagnosticKind, SourceSpan};

pub(crate) fn lower(ast: &ProgramAst) -> Result<SpecProgram, Vec<Diagnostic>> {
    let mut diags = Vec::new();

    let domain = Domain::from_name(&ast.domain);
    if domain.is_none() {
        diags.push(Diagnostic::error(
            DiagnosticKind::UnknownDomain,
            ast.domain_span,
            format!("unknown event domain `{}` (expected `funcs` or `messages`)", ast.domain),
        ));
    }
    let ctx = domain.and_then(|d| {
        let clauses = ast.clauses.iter().map(|c| c.clause.clone()).collect();
        MatchContext::new(d, clauses)
            .map_err(|e| {
                diags.push(Diagnostic::error(
                    DiagnosticKind::BadClause,
                    ast.clauses[e.clause].span,
                    e.to_string(),
                ))
            })
            .ok()
    });

    let mut store = TermStore::new();
    let mut equations: IndexMap<String, Equation> = IndexMap::new();
    let mut spans: HashMap<String, SourceSpan> = HashMap::new();
    for eq in &ast.equations {
        if equations.contains_key(&eq.name) {
            diags.push(Diagnostic::error(
                DiagnosticKind::DuplicateEquation,
                eq.name_span,
                format!("equation `{}` is defined more than once", eq.name),
            ));
            continue;
        }
        let (ref_id, node) = store.new_ref(eq.name.clone());
        equations.insert(eq.name.clone(), Equation { ref_id, node });
        spans.insert(eq.name.clone(), eq.name_span);
    }

    let mut lowered = HashSet::new();
    for eq in &ast.equations {
        if !lowered.insert(eq.name.as_str()) {
            continue;
        }
        let mut cx = Lowering {
            store: &mut store,
            equations: &equations,
            ctx: ctx.as_ref(),
            diags: &mut diags,
        };
        let body = cx.expr(&eq.body);
        store.set_ref_body(equations[&eq.name].ref_id, body);
    }

    if !equations.contains_key(&ast.main) {
        diags.push(Diagnostic::error(
            DiagnosticKind::MissingMain,
            ast.main_span,
            format!("main equation `{}` is not defined", ast.main),
        ));
    }

    if diags.iter().any(Diagnostic::is_error) {
        return Err(diags);
    }

    check_guarded(&store, &equations, &spans, &mut diags);
    if diags.iter().any(Diagnostic::is_error) {
        return Err(diags);
    }

    let main = equations[&ast.main].node;
    let free = store.free_vars(main);
    if !free.is_empty() {
        let names: Vec<_> = free.iter().map(|v| v.as_str()).collect();
        diags.push(Diagnostic::error(
            DiagnosticKind::FreeVariable,
            ast.main_span,
            format!(
                "main expression `{}` has free variables after unfolding: {}",
                ast.main,
                names.join(", ")
            ),
        ));
        return Err(diags);
    }

    let reachable: HashSet<NodeId> = store.reachable(main).into_iter().collect();
    for (name, eq) in &equations {
        if !reachable.contains(&eq.node) {
            diags.push(Diagnostic::warning(
                DiagnosticKind::Unreachable,
                spans[name],
                format!("equation `{name}` is not reachable from `{}`", ast.main),
            ));
        }
    }

    let ctx = ctx.expect("no errors implies a match context");
    Ok(SpecProgram::from_parts(store, equations, ast.main.clone(), ctx, diags))
}

struct Lowering<'a> {
    store: &'a mut TermStore,
    equations: &'a IndexMap<String, Equation>,
    ctx: Option<&'a MatchContext>,
    diags: &'a mut Vec<Diagnostic>,
}

impl Lowering<'_> {
    fn expr(&mut self, e: &Expr) -> NodeId {
        match &e.kind {
            ExprKind::Eps => self.store.eps(),
            ExprKind::Name(name) => match self.equations.get(name) {
                Some(eq) => eq.node,
                None => {
                    self.diags.push(Diagnostic::error(
                        DiagnosticKind::UnknownEquation,
                        e.span,
                        format!("unknown equation `{name}`"),
                    ));
                    self.store.eps()
                }
            },
            ExprKind::Prefix(ty, tail) => {
                if let Some(ctx) = self.ctx {
                    if !ctx.is_known(&ty.head, ty.args.len()) {
                        self.diags.push(Diagnostic::error(
                            DiagnosticKind::UnknownTypeName,
                            e.head_span.unwrap_or(e.span),
                            format!(
                                "unknown event type `{}` with {} argument(s)",
                                ty.head,
                                ty.args.len()
                            ),
                        ));
                    }
                }
                let tail = self.expr(tail);
                self.store.prefix(ty.clone(), tail)
            }
            ExprKind::Binary(op, l, r) => {
                let l = self.expr(l);
                let r = self.expr(r);
                self.store.binary(*op, l, r)
            }
            ExprKind::Binder(x, body) => {
                let body = self.expr(body);
                self.store.binder(x.clone(), body)
            }
        }
    }
}

/// Every cycle through equation names must pass through the tail of a
/// prefix; otherwise the set of derivatives is not finite.
fn check_guarded(
    store: &TermStore,
    equations: &IndexMap<String, Equation>,
    spans: &HashMap<String, SourceSpan>,
    diags: &mut Vec<Diagnostic>,
) {
    // Equations reachable from each equation body without crossing a prefix.
    let mut edges: HashMap<RefId, Vec<RefId>> = HashMap::new();
    for eq in equations.values() {
        let mut out = Vec::new();
        let mut stack = vec![store.ref_body(eq.ref_id)];
        let mut seen = HashSet::new();
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            match store.node(n) {
                Node::Eps | Node::Prefix(..) => {}
                Node::Binary(_, l, r) => stack.extend([*l, *r]),
                Node::Binder(_, b) => stack.push(*b),
                Node::Ref(rid) => out.push(*rid),
            }
        }
        edges.insert(eq.ref_id, out);
    }

    let mut state: HashMap<RefId, bool> = HashMap::new();
    let mut reported = HashSet::new();
    for eq in equations.values() {
        let mut path = Vec::new();
        visit(eq.ref_id, &edges, &mut state, &mut path, &mut |cycle: &[RefId]| {
            let first = *cycle.iter().min().expect("non-empty cycle");
            if !reported.insert(first) {
                return;
            }
            let names: Vec<&str> = cycle.iter().map(|r| store.ref_name(*r)).collect();
            let name = store.ref_name(cycle[0]);
            diags.push(Diagnostic::error(
                DiagnosticKind::UnguardedRecursion,
                spans[name],
                format!(
                    "unguarded recursion: {} -> {}",
                    names.join(" -> "),
                    names[0]
                ),
            ));
        });
    }

    fn visit(
        r: RefId,
        edges: &HashMap<RefId, Vec<RefId>>,
        state: &mut HashMap<RefId, bool>,
        path: &mut Vec<RefId>,
        report: &mut dyn FnMut(&[RefId]),
    ) {
        match state.get(&r) {
            Some(true) => return,
            Some(false) => {
                let start = path.iter().position(|p| *p == r).expect("on path");
                report(&path[start..]);
                return;
            }
            None => {}
        }
        state.insert(r, false);
        path.push(r);
        for &next in &edges[&r] {
            visit(next, edges, state, path, report);
        }
        path.pop();
        state.insert(r, true);
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::{parse_spec, DiagnosticKind};

    fn kinds(src: &str) -> Vec<DiagnosticKind> {
        parse_spec(src)
            .unwrap_err()
            .into_iter()
            .filter(|d| d.is_error())
            .map(|d| d.kind)
            .collect()
    }

    #[test]
    fn smallest_program() {
        let p = parse_spec("domain funcs; main M; M = eps;").unwrap();
        assert!(p.epsilon(p.main_node()));
        assert!(p.warnings().is_empty());
    }

    #[test]
    fn unknown_type_name_in_prefix() {
        let d = parse_spec("domain funcs; main M; M = var fd. write(fd) : eps; ").unwrap_err();
        assert_eq!(d[0].kind, DiagnosticKind::UnknownTypeName);
        assert_eq!((d[0].span.start_line, d[0].span.start_col), (1, 35));
    }

    #[test]
    fn unknown_equation_and_missing_main() {
        assert_eq!(kinds("domain funcs; main M; N = X;"), [DiagnosticKind::UnknownEquation, DiagnosticKind::MissingMain]);
    }

    #[test]
    fn duplicate_equation() {
        assert_eq!(kinds("domain funcs; main M; M = eps; M = eps;"), [DiagnosticKind::DuplicateEquation]);
    }

    #[test]
    fn unknown_domain() {
        assert_eq!(kinds("domain http; main M; M = eps;"), [DiagnosticKind::UnknownDomain]);
    }

    #[test]
    fn free_variable_in_main() {
        let src = "domain funcs; main M; M = a(x) : eps; type a(X) matches func_pre(_, X, _);";
        assert_eq!(kinds(src), [DiagnosticKind::FreeVariable]);
        // Captured through another equation: still free at the top.
        let src = "domain funcs; main M; M = N; N = a(x) : M; type a(X) matches func_pre(_, X, _);";
        assert_eq!(kinds(src), [DiagnosticKind::FreeVariable]);
        let ok = "domain funcs; main M; M = var x. N; N = a(x) : eps; type a(X) matches func_pre(_, X, _);";
        assert!(parse_spec(ok).is_ok());
    }

    #[test]
    fn unguarded_recursion_is_rejected() {
        assert_eq!(kinds("domain funcs; main M; M = M \\/ eps;"), [DiagnosticKind::UnguardedRecursion]);
        assert_eq!(
            kinds("domain funcs; main M; M = N . eps; N = eps | M;"),
            [DiagnosticKind::UnguardedRecursion]
        );
        assert!(parse_spec(
            "domain funcs; main M; M = a : M \\/ eps; type a matches func_pre(_, _, _);"
        )
        .is_ok());
    }

    #[test]
    fn bad_clause() {
        let src = "domain funcs; main M; M = eps; type func_pre matches func_post(_, _, _);";
        assert_eq!(kinds(src), [DiagnosticKind::BadClause]);
    }

    #[test]
    fn unreachable_equation_warns() {
        let p = parse_spec("domain funcs; main M; M = eps; N = eps;").unwrap();
        assert_eq!(p.warnings().len(), 1);
        assert_eq!(p.warnings()[0].kind, DiagnosticKind::Unreachable);
    }
}
