//! Report lines collected by a command and rendered as text or JSON.

use serde_json::{json, Value};
use workbench_core::matrix::Matrix;
use workbench_core::scalar::Scalar;
use workbench_core::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone)]
enum Item {
    Verdict(Option<String>, Verdict),
    Value(Option<String>, String, Value),
    Document(Value),
}

/// Output of one command (or one input file of a batch).
#[derive(Debug, Clone, Default)]
pub struct Report {
    items: Vec<Item>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn verdict(&mut self, v: Verdict) -> &mut Self {
        self.items.push(Item::Verdict(None, v));
        self
    }

    pub fn labelled_verdict(&mut self, label: &str, v: Verdict) -> &mut Self {
        self.items.push(Item::Verdict(Some(label.to_string()), v));
        self
    }

    /// A bare value printed on its own line.
    pub fn value(&mut self, text: impl Into<String>) -> &mut Self {
        let text = text.into();
        self.items.push(Item::Value(None, text.clone(), Value::String(text)));
        self
    }

    pub fn field(&mut self, label: &str, text: impl Into<String>) -> &mut Self {
        let text = text.into();
        self.items
            .push(Item::Value(Some(label.to_string()), text.clone(), Value::String(text)));
        self
    }

    pub fn scalar(&mut self, label: Option<&str>, s: &Scalar) -> &mut Self {
        self.items.push(Item::Value(
            label.map(str::to_string),
            s.to_string(),
            Value::String(s.to_string()),
        ));
        self
    }

    /// A 1×1 matrix is shown as its entry.
    pub fn matrix(&mut self, label: Option<&str>, m: &Matrix) -> &mut Self {
        if m.rows() == 1 && m.cols() == 1 {
            return self.scalar(label, m.get(0, 0));
        }
        let rows: Vec<String> = m
            .to_rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(Scalar::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        let json_rows = m
            .to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(|s| Value::String(s.to_string())).collect()))
            .collect();
        self.items.push(Item::Value(
            label.map(str::to_string),
            rows.join("\n"),
            Value::Array(json_rows),
        ));
        self
    }

    /// A JSON document emitted verbatim (pretty-printed in text mode).
    pub fn document(&mut self, doc: Value) -> &mut Self {
        self.items.push(Item::Document(doc));
        self
    }

    pub fn failed(&self) -> bool {
        self.items
            .iter()
            .any(|i| matches!(i, Item::Verdict(_, v) if !v.passed()))
    }

    pub fn render_text(&self, prefix: Option<&str>) -> String {
        let mut out = String::new();
        let pre = prefix.map(|p| format!("{p}: ")).unwrap_or_default();
        for item in &self.items {
            let line = match item {
                Item::Verdict(None, v) => v.to_string(),
                Item::Verdict(Some(l), v) => format!("{l}: {v}"),
                Item::Value(None, text, _) => text.clone(),
                Item::Value(Some(l), text, _) if text.contains('\n') => format!("{l}:\n{text}"),
                Item::Value(Some(l), text, _) => format!("{l}: {text}"),
                Item::Document(d) => serde_json::to_string_pretty(d).expect("json"),
            };
            out.push_str(&pre);
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, input: Option<&str>) -> Value {
        let items: Vec<Value> = self
            .items
            .iter()
            .map(|item| match item {
                Item::Verdict(label, v) => {
                    let failure = v.failure.as_ref().map(|f| {
                        json!({"relation": f.relation, "witness": f.witness, "message": f.message})
                    });
                    json!({
                        "label": label,
                        "relation": v.relation,
                        "passed": v.passed(),
                        "checked": v.checked,
                        "total": v.total,
                        "unit": v.unit,
                        "failure": failure,
                        "text": v.to_string(),
                    })
                }
                Item::Value(label, _, value) => json!({"label": label, "value": value}),
                Item::Document(d) => json!({"document": d}),
            })
            .collect();
        json!({"input": input, "passed": !self.failed(), "items": items})
    }
}
