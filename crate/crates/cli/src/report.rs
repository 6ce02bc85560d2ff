//! Reports and their JSON and text renderings.

use std::fmt::Write as _;

use moore_tower_core::compare::ExactSequenceReport;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

/// A titled table; the text format prints it column-aligned.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    /// The request as parsed: flags and the input's file name.
    pub request: Value,
    pub verdict: String,
    pub results: Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<Table>,
    pub provenance: Provenance,
    /// Only with `--timing`, so that default output is reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

fn yes(b: bool) -> String {
    String::from(if b { "yes" } else { "no" })
}

/// One row per term; interior rows carry the joint verdicts.
pub fn sequence_table(title: &str, r: &ExactSequenceReport) -> Table {
    let rows = r
        .labels
        .iter()
        .zip(&r.terms)
        .enumerate()
        .map(|(i, (label, term))| {
            let joint = r.joints.iter().find(|j| j.position == i);
            let mut row = vec![i.to_string(), label.clone(), term.canonical_form().to_string()];
            match joint {
                Some(j) => {
                    row.push(j.image.to_string());
                    row.push(j.kernel.to_string());
                    row.push(yes(j.composite_zero));
                    row.push(yes(j.exact));
                }
                None => row.extend(["-", "-", "-", "endpoint"].map(String::from)),
            }
            row
        })
        .collect();
    Table {
        title: title.into(),
        columns: ["#", "term", "module", "image in", "kernel out", "d∘d = 0", "exact"]
            .map(String::from)
            .to_vec(),
        rows,
    }
}

pub fn sequence_json(r: &ExactSequenceReport) -> Value {
    serde_json::json!({
        "construction": r.construction,
        "terms": r.labels.iter().zip(&r.terms).map(|(l, t)| serde_json::json!({
            "label": l,
            "module": t.canonical_form().to_string(),
        })).collect::<Vec<_>>(),
        "joints": r.joints.iter().map(|j| serde_json::json!({
            "position": j.position,
            "composite_zero": j.composite_zero,
            "exact": j.exact,
            "image": j.image.to_string(),
            "kernel": j.kernel.to_string(),
        })).collect::<Vec<_>>(),
        "exact": r.is_exact(),
    })
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_value(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) if !m.is_empty() => {
            let _ = writeln!(out, "{}{}:", pad, key);
            for (k, x) in m {
                render_value(out, k, x, indent + 1);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            let _ = writeln!(out, "{}{}:", pad, key);
            for (i, x) in a.iter().enumerate() {
                render_value(out, &format!("[{}]", i), x, indent + 1);
            }
        }
        other => {
            let _ = writeln!(out, "{}{}: {}", pad, key, scalar(other));
        }
    }
}

fn render_table(out: &mut String, t: &Table) {
    let mut widths: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
    for r in &t.rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| -> String {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{}{}", c, " ".repeat(w - c.chars().count())))
            .collect();
        parts.join(" | ").trim_end().to_string()
    };
    let _ = writeln!(out, "\n{}", t.title);
    let _ = writeln!(out, "{}", line(&t.columns));
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    let _ = writeln!(out, "{}", rule.join("-+-"));
    for r in &t.rows {
        let _ = writeln!(out, "{}", line(r));
    }
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "verdict: {}", self.verdict);
        render_value(&mut out, "request", &self.request, 0);
        render_value(&mut out, "results", &self.results, 0);
        for t in &self.tables {
            render_table(&mut out, t);
        }
        let _ = writeln!(out);
        let _ = write!(out, "provenance: {} {}", self.provenance.tool, self.provenance.version);
        if let Some(s) = self.provenance.seed {
            let _ = write!(out, ", seed {}", s);
        }
        let _ = writeln!(out);
        if let Some(t) = self.timing_ms {
            let _ = writeln!(out, "timing: {} ms", t);
        }
        out
    }
}
