//! Check reports and their renderings.
//!
//! The JSON rendering is produced by a tiny self-contained emitter so the
//! bytes are fully pinned: keys sorted, floats printed with 17 significant
//! digits, no timing fields. Timing appears in the text rendering only,
//! keeping the JSON a pure function of (document, seed).

use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(BTreeMap<String, Json>),
}

impl Json {
    pub fn obj(entries: Vec<(&str, Json)>) -> Json {
        Json::Obj(
            entries
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        )
    }

    pub fn floats(vals: &[f64]) -> Json {
        Json::Arr(vals.iter().map(|&v| Json::Float(v)).collect())
    }

    fn write(&self, out: &mut String) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(n) => {
                let _ = write!(out, "{}", n);
            }
            Json::Float(v) => {
                // 17 significant digits round-trips any f64
                let _ = write!(out, "{:.16e}", v);
            }
            Json::Str(s) => write_escaped(s, out),
            Json::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            Json::Obj(map) => {
                out.push('{');
                for (i, (k, v)) in map.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_escaped(k, out);
                    out.push(':');
                    v.write(out);
                }
                out.push('}');
            }
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }
}

fn write_escaped(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub law: String,
    pub point: Vec<f64>,
    pub indices: Vec<usize>,
    pub value: f64,
}

impl WitnessReport {
    fn to_json(&self) -> Json {
        Json::obj(vec![
            ("indices", Json::Arr(self.indices.iter().map(|&i| Json::Int(i as i64)).collect())),
            ("law", Json::Str(self.law.clone())),
            ("point", Json::floats(&self.point)),
            ("value", Json::Float(self.value)),
        ])
    }
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub index: usize,
    pub verb: String,
    pub label: String,
    pub status: Status,
    pub summary: String,
    pub details: BTreeMap<String, Json>,
    pub witnesses: Vec<WitnessReport>,
    /// Text rendering only; never serialized to JSON.
    pub duration_ms: f64,
}

impl CheckReport {
    pub fn new(index: usize, verb: &str, label: &str) -> CheckReport {
        CheckReport {
            index,
            verb: verb.to_string(),
            label: label.to_string(),
            status: Status::Pass,
            summary: String::new(),
            details: BTreeMap::new(),
            witnesses: Vec::new(),
            duration_ms: 0.0,
        }
    }

    pub fn detail(&mut self, key: &str, value: Json) {
        self.details.insert(key.to_string(), value);
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub seed: u64,
    pub samples: usize,
    pub atol: f64,
    pub rtol: f64,
    pub checks: Vec<CheckReport>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn to_json(&self) -> Json {
        let checks = self
            .checks
            .iter()
            .map(|c| {
                Json::obj(vec![
                    ("details", Json::Obj(c.details.clone())),
                    ("index", Json::Int(c.index as i64)),
                    ("label", Json::Str(c.label.clone())),
                    ("status", Json::Str(c.status.as_str().to_string())),
                    ("summary", Json::Str(c.summary.clone())),
                    ("verb", Json::Str(c.verb.clone())),
                    (
                        "witnesses",
                        Json::Arr(c.witnesses.iter().map(|w| w.to_json()).collect()),
                    ),
                ])
            })
            .collect();
        Json::obj(vec![
            ("atol", Json::Float(self.atol)),
            ("checks", Json::Arr(checks)),
            ("rtol", Json::Float(self.rtol)),
            ("samples", Json::Int(self.samples as i64)),
            ("schema", Json::Str("omnijet-report/1".to_string())),
            ("seed", Json::Int(self.seed as i64)),
            (
                "status",
                Json::Str(if self.all_passed() { "pass" } else { "fail" }.to_string()),
            ),
        ])
    }

    pub fn render_json(&self) -> String {
        let mut s = self.to_json().render();
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "oracle: seed={} samples={} atol={:e} rtol={:e}",
            self.seed, self.samples, self.atol, self.rtol
        );
        for c in &self.checks {
            let head = if c.label.is_empty() {
                c.verb.clone()
            } else {
                format!("{} {}", c.verb, c.label)
            };
            let _ = writeln!(
                out,
                "[{}] {:5} {} ({:.1} ms){}{}",
                c.index,
                c.status.as_str().to_uppercase(),
                head,
                c.duration_ms,
                if c.summary.is_empty() { "" } else { ": " },
                c.summary
            );
            for (k, v) in &c.details {
                let _ = writeln!(out, "      {} = {}", k, v.render());
            }
            for w in &c.witnesses {
                let _ = writeln!(
                    out,
                    "      witness: {} at {:?} (indices {:?}, value {:.6e})",
                    w.law, w.point, w.indices, w.value
                );
            }
        }
        let _ = writeln!(
            out,
            "{} of {} checks passed",
            self.checks.iter().filter(|c| c.status == Status::Pass).count(),
            self.checks.len()
        );
        out
    }
}
