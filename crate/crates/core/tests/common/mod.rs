#![allow(dead_code)]

use std::path::PathBuf;

use serde_json::json;
use tracemon_core::replay::{load_spec, load_trace};
use tracemon_core::{decode_event, Event, SpecProgram};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn spec(name: &str) -> SpecProgram {
    load_spec(&fixture(name)).unwrap_or_else(|e| panic!("{e}"))
}

pub fn trace(name: &str) -> Vec<Event> {
    load_trace(&fixture(name)).unwrap_or_else(|e| panic!("{e}"))
}

pub fn event(v: serde_json::Value) -> Event {
    Event::from_json(&v).unwrap()
}

pub fn func_post(name: &str, args: serde_json::Value, ret: serde_json::Value) -> Event {
    event(json!({"event": "func_post", "name": name, "id": 1, "args": args, "ret": ret}))
}

pub fn msg(ty: &str, payload: i64) -> Event {
    event(json!({"type": ty, "payload": payload}))
}

/// One entry of `fixtures/corpus.json`.
#[derive(Debug)]
pub struct Case {
    pub spec: String,
    pub trace: String,
    pub verdict: String,
    pub at_index: Option<usize>,
}

pub fn corpus() -> Vec<Case> {
    let text = std::fs::read_to_string(fixture("corpus.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v.as_array()
        .unwrap()
        .iter()
        .map(|c| Case {
            spec: c["spec"].as_str().unwrap().to_owned(),
            trace: c["trace"].as_str().unwrap().to_owned(),
            verdict: c["verdict"].as_str().unwrap().to_owned(),
            at_index: c.get("atIndex").and_then(|i| i.as_u64()).map(|i| i as usize),
        })
        .collect()
}

pub fn all_specs() -> Vec<&'static str> {
    vec!["t.texp", "pt.texp", "at.texp", "pp.texp"]
}

/// Every sequence over `alphabet` of length at most `max_len`.
pub fn all_traces(alphabet: &[Event], max_len: usize) -> Vec<Vec<Event>> {
    let mut out = vec![Vec::new()];
    let mut level = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for t in &level {
            for e in alphabet {
                let mut longer: Vec<Event> = t.clone();
                longer.push(e.clone());
                next.push(longer);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

pub fn parse_event(raw: &str) -> Event {
    decode_event(raw).unwrap()
}
