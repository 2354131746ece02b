//! Rendering of computed rank tables.

use std::fmt::Write;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

use khss_core::homology::{GradedRanks, PageTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Csv,
    Text,
}

/// Everything `compute` prints.
pub struct Report {
    pub input: String,
    pub theory: String,
    pub crossings: usize,
    pub decoration: String,
    pub generators: usize,
    pub delta: GradedRanks<i32>,
    /// `(q, h)` table, only for the Khovanov theory.
    pub bigraded: Option<GradedRanks<(i32, i32)>>,
    pub pages: Option<Vec<PageTable>>,
}

fn delta_map(r: &GradedRanks<i32>) -> Value {
    let mut m = Map::new();
    for (d, n) in r {
        m.insert(d.to_string(), json!(n));
    }
    Value::Object(m)
}

impl Report {
    pub fn render(&self, out: Output) -> String {
        match out {
            Output::Json => self.json(),
            Output::Csv => self.csv(),
            Output::Text => self.text(),
        }
    }

    fn json(&self) -> String {
        let mut ranks = Map::new();
        ranks.insert("delta".into(), delta_map(&self.delta));
        if let Some(b) = &self.bigraded {
            let qh: Vec<Value> = b.iter().map(|(&(q, h), n)| json!({"q": q, "h": h, "rank": n})).collect();
            ranks.insert("qh".into(), Value::Array(qh));
        }
        let mut top = Map::new();
        top.insert("input".into(), json!(self.input));
        top.insert("theory".into(), json!(self.theory));
        top.insert("crossings".into(), json!(self.crossings));
        top.insert("decoration".into(), json!(self.decoration));
        top.insert("generators".into(), json!(self.generators));
        top.insert("ranks".into(), Value::Object(ranks));
        if let Some(pages) = &self.pages {
            let pages: Vec<Value> = pages
                .iter()
                .map(|p| {
                    let ranks: Vec<Value> =
                        p.ranks.iter().map(|(&(h, d), n)| json!({"h": h, "delta": d, "rank": n})).collect();
                    json!({"page": p.page, "stabilized": p.stabilized, "total": p.total(), "ranks": ranks})
                })
                .collect();
            top.insert("pages".into(), Value::Array(pages));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("json");
        s.push('\n');
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("table,page,h,q,delta,rank\n");
        for (d, n) in &self.delta {
            writeln!(s, "delta,,,,{d},{n}").unwrap();
        }
        if let Some(b) = &self.bigraded {
            for ((q, h), n) in b {
                writeln!(s, "qh,,{h},{q},,{n}").unwrap();
            }
        }
        for p in self.pages.iter().flatten() {
            for ((h, d), n) in &p.ranks {
                writeln!(s, "page,{},{h},,{d},{n}", p.page).unwrap();
            }
        }
        s
    }

    fn text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "input: {}", self.input).unwrap();
        writeln!(s, "theory: {}  crossings: {}  generators: {}", self.theory, self.crossings, self.generators).unwrap();
        writeln!(s, "decoration: {}", if self.decoration.is_empty() { "-" } else { &self.decoration }).unwrap();
        writeln!(s, "delta ranks:").unwrap();
        for (d, n) in &self.delta {
            writeln!(s, "  {d:>4}: {n}").unwrap();
        }
        if let Some(b) = &self.bigraded {
            writeln!(s, "(q, h) ranks:").unwrap();
            for ((q, h), n) in b {
                writeln!(s, "  ({q}, {h}): {n}").unwrap();
            }
        }
        for p in self.pages.iter().flatten() {
            let mark = if p.stabilized { "  (stable)" } else { "" };
            writeln!(s, "E_{} total {}{}", p.page, p.total(), mark).unwrap();
            for ((h, d), n) in &p.ranks {
                writeln!(s, "  h={h} delta={d}: {n}").unwrap();
            }
        }
        s
    }
}
