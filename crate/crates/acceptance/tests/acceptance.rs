//! Acceptance suite: one PASS/FAIL line per criterion, with fixed seeds and
//! pinned thresholds. Exits non-zero when any criterion fails.

use std::collections::BTreeSet;
use std::fs;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{header, Request};
use http_body_util::BodyExt;
use tower::ServiceExt;
use tracemon_acceptance::{alphabet, all_words, combined, fixture, single, SpecGenerator};
use tracemon_core::enumerate::enumerate;
use tracemon_core::oracle::{Oracle, DEFAULT_ORACLE_BOUND};
use tracemon_core::replay::{load_spec, load_trace, replay, ReplayVerdict};
use tracemon_core::syntax::parse_expr;
use tracemon_core::{format_spec, parse_spec, BinOp, Node, SpecProgram, DEFAULT_FRONTIER_CAP};
use tracemon_service::{router, Monitor};

const CAP: usize = DEFAULT_FRONTIER_CAP;

/// Wall-clock budget for the synchronous protocol checks.
const PROTOCOL_BUDGET: Duration = Duration::from_secs(1);
/// Wall-clock budget for the whole oracle comparison.
const ORACLE_BUDGET: Duration = Duration::from_secs(60);
const ORACLE_SPECS: usize = 200;
const ORACLE_SEED: u64 = 0x7e57_0001;
const LAW_PAIRS: usize = 50;
const LAW_SEED: u64 = 0x7e57_0002;
/// Maximum nesting depth of generated expressions.
const GEN_DEPTH: u32 = 4;
/// Longest trace checked by the oracle comparison and the language laws.
const MAX_LEN: usize = 4;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn spec(name: &str) -> SpecProgram {
    load_spec(&fixture(name)).unwrap_or_else(|e| panic!("{e}"))
}

fn verdict_of(spec_name: &str, trace_name: &str) -> ReplayVerdict {
    let p = spec(spec_name);
    let events = load_trace(&fixture(trace_name)).unwrap_or_else(|e| panic!("{e}"));
    replay(&p, &events, CAP).unwrap().verdict
}

fn expect_verdict(spec_name: &str, trace_name: &str, want: ReplayVerdict) -> Result<(), String> {
    let got = verdict_of(spec_name, trace_name);
    check(got == want, || format!("{trace_name}: expected {want:?}, got {got:?}"))
}

fn synchronous_protocol() -> Outcome {
    let start = Instant::now();
    expect_verdict("t.texp", "t_empty.jsonl", ReplayVerdict::Accepted)?;
    expect_verdict("t.texp", "t_open_close.jsonl", ReplayVerdict::Accepted)?;
    expect_verdict("t.texp", "t_open_write_write_close.jsonl", ReplayVerdict::Accepted)?;
    expect_verdict("t.texp", "t_write.jsonl", ReplayVerdict::Violated { at_index: 1 })?;
    expect_verdict("t.texp", "t_open_close_write.jsonl", ReplayVerdict::Violated { at_index: 3 })?;
    let elapsed = start.elapsed();
    check(elapsed < PROTOCOL_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("5 exact verdicts in {elapsed:?} (budget {PROTOCOL_BUDGET:?})"))
}

fn parametric_protocol() -> Outcome {
    let pt = spec("pt.texp");
    let events = load_trace(&fixture("pt_interleaved.jsonl")).unwrap();
    let state = pt.run(&events[..2], CAP).unwrap();
    check(state.frontier().len() == 1, || {
        format!("frontier has {} members", state.frontier().len())
    })?;
    let node = *state.frontier().iter().next().unwrap();
    let rendered = pt.render(node);
    check(rendered == "PW{fd=9} | (PW{fd=10} | PT)", || format!("frontier is {rendered}"))?;
    {
        let store = pt.store();
        let Node::Binary(BinOp::Shuffle, _, rest) = store.node(node).clone() else {
            return Err("frontier is not a shuffle".into());
        };
        let Node::Binary(BinOp::Shuffle, _, tail) = store.node(rest).clone() else {
            return Err("frontier is not a nested shuffle".into());
        };
        check(tail == pt.main_node(), || "the last shuffle operand is not PT itself".into())?;
    }
    let verdict = replay(&pt, &events, CAP).unwrap().verdict;
    check(verdict == ReplayVerdict::Accepted, || format!("interleaved trace: {verdict:?}"))?;
    Ok(format!("frontier {rendered}; interleaved trace of {} events accepted", events.len()))
}

fn asynchronous_protocol() -> Outcome {
    expect_verdict("at.texp", "at_double_write.jsonl", ReplayVerdict::Violated { at_index: 4 })?;
    expect_verdict("at.texp", "at_corrected.jsonl", ReplayVerdict::Accepted)?;
    Ok("double write violated at event 4; corrected trace accepted".into())
}

fn ping_pong() -> Outcome {
    expect_verdict("pp.texp", "pp_not_increasing.jsonl", ReplayVerdict::Violated { at_index: 4 })?;
    let events = load_trace(&fixture("pp_increasing_20.jsonl")).unwrap();
    check(events.len() == 20, || format!("{} events", events.len()))?;
    let report = replay(&spec("pp.texp"), &events, CAP).unwrap();
    check(report.verdict == ReplayVerdict::PrefixAlive, || format!("{:?}", report.verdict))?;
    Ok("[1,2,3,3] violated at event 4; 20 increasing payloads alive".into())
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let alphabet = alphabet();
    let words = all_words(alphabet.len(), MAX_LEN);
    let mut gen = SpecGenerator::new(ORACLE_SEED, GEN_DEPTH);
    let mut disagreements = Vec::new();
    // Specs for which some non-empty trace is viable and some trace is
    // rejected; guards against a vacuous comparison.
    let mut discriminating = 0;
    for _ in 0..ORACLE_SPECS {
        let e = gen.expr();
        let p = single(&e);
        let oracle = Oracle::new(&p);
        let (mut alive, mut rejected) = (false, false);
        for w in &words {
            let trace: Vec<_> = w.iter().map(|&i| alphabet[i].clone()).collect();
            let state = p.run(&trace, CAP).map_err(|err| format!("{e}: {err}"))?;
            let accepts = oracle.accepts(&trace, DEFAULT_ORACLE_BOUND).map_err(|err| err.to_string())?;
            let viable = oracle.viable(&trace, DEFAULT_ORACLE_BOUND).map_err(|err| err.to_string())?;
            if p.accepts_final(&state) != accepts || state.is_violated() == viable {
                disagreements.push(format!("{e} on {w:?}"));
            }
            alive |= viable && !w.is_empty();
            rejected |= !viable;
        }
        discriminating += usize::from(alive && rejected);
    }
    let elapsed = start.elapsed();
    let checked = ORACLE_SPECS * words.len();
    check(disagreements.is_empty(), || {
        format!("{} disagreements, first: {}", disagreements.len(), disagreements[0])
    })?;
    check(elapsed < ORACLE_BUDGET, || format!("took {elapsed:?}"))?;
    check(discriminating * 2 > ORACLE_SPECS, || {
        format!("only {discriminating} specs both keep and reject traces")
    })?;
    Ok(format!(
        "{ORACLE_SPECS} specs ({discriminating} discriminating) x {} traces = {checked} checks, \
         0 disagreements in {elapsed:?} (budget {ORACLE_BUDGET:?})",
        words.len()
    ))
}

fn language_laws() -> Outcome {
    let alphabet = alphabet();
    let language = |p: &SpecProgram| -> BTreeSet<Vec<usize>> {
        enumerate(p, &alphabet, MAX_LEN, CAP).unwrap().into_iter().collect()
    };
    let mut gen = SpecGenerator::new(LAW_SEED, GEN_DEPTH);
    for _ in 0..LAW_PAIRS {
        let (l, r) = (gen.expr(), gen.expr());
        let (ll, lr) = (language(&single(&l)), language(&single(&r)));
        let union: BTreeSet<_> = ll.union(&lr).cloned().collect();
        let inter: BTreeSet<_> = ll.intersection(&lr).cloned().collect();
        check(language(&combined("\\/", &l, &r)) == union, || format!("union law: {l} and {r}"))?;
        check(language(&combined("/\\", &l, &r)) == inter, || {
            format!("intersection law: {l} and {r}")
        })?;
        check(language(&combined("|", &l, &r)) == language(&combined("|", &r, &l)), || {
            format!("shuffle commutativity: {l} and {r}")
        })?;
    }
    Ok(format!("union, intersection, shuffle commutativity on {LAW_PAIRS} pairs up to length {MAX_LEN}"))
}

async fn post(app: &axum::Router, body: &str) -> String {
    let request = Request::post("/")
        .header(header::CONTENT_TYPE, "application/json")
        .body(Body::from(body.to_owned()))
        .unwrap();
    let response = app.clone().oneshot(request).await.unwrap();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    String::from_utf8(bytes.to_vec()).unwrap()
}

fn reply_for(error: bool) -> &'static str {
    if error {
        r#"{"error":true}"#
    } else {
        r#"{"error":false}"#
    }
}

fn wire_conformance() -> Outcome {
    let corpus: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(fixture("corpus.json")).unwrap()).unwrap();
    let runtime = tokio::runtime::Builder::new_current_thread().build().unwrap();
    let mut replies = 0;
    for case in corpus.as_array().unwrap() {
        let (spec_name, trace_name) = (case["spec"].as_str().unwrap(), case["trace"].as_str().unwrap());
        let p = spec(spec_name);
        let events = load_trace(&fixture(trace_name)).unwrap();
        let expected: Vec<&str> = replay(&p, &events, CAP)
            .unwrap()
            .error_flags()
            .into_iter()
            .map(reply_for)
            .collect();
        let violated = expected.last() == Some(&reply_for(true));
        let app = router(Arc::new(Monitor::new(p, CAP)));
        let lines: Vec<String> = fs::read_to_string(fixture(trace_name))
            .unwrap()
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(str::to_owned)
            .collect();
        let got: Vec<String> = runtime.block_on(async {
            let mut got = Vec::new();
            for line in &lines {
                got.push(post(&app, line).await);
            }
            got
        });
        check(got == expected, || format!("{trace_name}: got {got:?}, expected {expected:?}"))?;
        replies += got.len();
        if violated {
            // Replaying the whole trace again must not clear the error.
            let again = runtime.block_on(async {
                let mut again = Vec::new();
                for line in &lines {
                    again.push(post(&app, line).await);
                }
                again
            });
            check(again.iter().all(|r| r == reply_for(true)), || {
                format!("{trace_name}: error not sticky: {again:?}")
            })?;
            replies += again.len();
        }
    }
    Ok(format!("{} traces, {replies} byte-identical replies, errors sticky", corpus.as_array().unwrap().len()))
}

const PRECEDENCE_GOLDEN: [(&str, &str); 4] = [
    (r"a : b . c \/ d | e", r"((((a : b) . c) \/ d) | e)"),
    (r"a | b \/ c /\ d . e", r"(a | (b \/ (c /\ (d . e))))"),
    (r"x(1) : y(2) : Z", r"(x(1) : (y(2) : Z))"),
    (r"var x. a(x) : eps \/ b : eps", r"(var x. ((a(x) : eps) \/ (b : eps)))"),
];

fn round_trip() -> Outcome {
    let specs = ["t.texp", "pt.texp", "at.texp", "pp.texp"];
    for name in specs {
        let p = spec(name);
        let text = format_spec(&p);
        let q = parse_spec(&text).map_err(|d| format!("{name}: formatted text rejected: {d:?}"))?;
        check(p.graph_eq(&q), || format!("{name}: graph changed"))?;
        check(format_spec(&q) == text, || format!("{name}: formatting is not a fixpoint"))?;
    }
    for (src, want) in PRECEDENCE_GOLDEN {
        let got = parse_expr(src).map_err(|d| format!("{src}: {d:?}"))?.to_string();
        check(got == want, || format!("{src} parsed as {got}"))?;
    }
    Ok(format!("{} fixtures fixpoint; {} precedence goldens", specs.len(), PRECEDENCE_GOLDEN.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("synchronous protocol", synchronous_protocol),
        ("parametric protocol", parametric_protocol),
        ("asynchronous protocol", asynchronous_protocol),
        ("ping-pong", ping_pong),
        ("oracle equivalence", oracle_equivalence),
        ("language laws", language_laws),
        ("wire conformance", wire_conformance),
        ("spec-language round-trip", round_trip),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match std::panic::catch_unwind(run) {
            Ok(Ok(detail)) => println!("PASS {name}: {detail}"),
            Ok(Err(detail)) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
            Err(_) => {
                failed += 1;
                println!("FAIL {name}: panicked");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
