use serde_json::{json, Value};
use substoch::ratmat::rational::format_decimal;
use substoch::{Rational, SubstochMatrix};

pub struct Format {
    pub decimal: bool,
}

impl Format {
    pub fn num(&self, value: &Rational) -> String {
        if self.decimal {
            if let Some(d) = format_decimal(value) {
                return d;
            }
        }
        value.to_string()
    }

    pub fn list(&self, values: &[Rational]) -> String {
        let parts: Vec<String> = values.iter().map(|v| self.num(v)).collect();
        format!("({})", parts.join(","))
    }

    /// Right-aligned columns, one row per line.
    pub fn matrix(&self, a: &SubstochMatrix) -> String {
        let cells: Vec<Vec<String>> = a.rows().map(|row| row.iter().map(|x| self.num(x)).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        let mut out = String::new();
        for row in cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            out += &line.join(" ");
            out.push('\n');
        }
        out
    }
}

pub fn frac(value: &Rational) -> Value {
    Value::String(value.to_string())
}

pub fn fracs(values: &[Rational]) -> Value {
    Value::Array(values.iter().map(frac).collect())
}

pub fn matrix(a: &SubstochMatrix) -> Value {
    serde_json::to_value(a).expect("matrices serialize")
}

pub struct Outcome {
    pub human: String,
    pub result: Value,
    pub witness: Value,
    pub code: u8,
}

impl Outcome {
    pub fn new(human: String, result: Value) -> Self {
        Outcome {
            human,
            result,
            witness: Value::Null,
            code: 0,
        }
    }

    pub fn witness(mut self, witness: Value) -> Self {
        self.witness = witness;
        self
    }

    /// Exit code 1 when a checked property is false.
    pub fn holds(mut self, holds: bool) -> Self {
        self.code = if holds { 0 } else { 1 };
        self
    }

    pub fn json(&self, command: &str) -> String {
        let doc = json!({"command": command, "result": self.result, "witness": self.witness});
        serde_json::to_string_pretty(&doc).expect("json values serialize")
    }
}
