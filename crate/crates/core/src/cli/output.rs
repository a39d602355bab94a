use std::fmt::Write as _;

use crate::numeric::fmt17;

/// Floats with 17 significant digits; non-finite values become the strings "inf", "-inf", "NaN".
pub(crate) fn json_number(x: f64) -> String {
    if x.is_finite() {
        fmt17(x)
    } else {
        format!("\"{}\"", fmt17(x))
    }
}

pub(crate) fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("string serialises")
}

pub(crate) fn json_array(xs: &[f64]) -> String {
    format!("[{}]", xs.iter().map(|&x| json_number(x)).collect::<Vec<_>>().join(","))
}

/// Object with fields in insertion order.
#[derive(Default)]
pub(crate) struct JsonObject {
    fields: Vec<(String, String)>,
}

impl JsonObject {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn raw(mut self, key: &str, value: impl Into<String>) -> Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub(crate) fn num(self, key: &str, x: f64) -> Self {
        self.raw(key, json_number(x))
    }

    pub(crate) fn int(self, key: &str, x: impl std::fmt::Display) -> Self {
        self.raw(key, x.to_string())
    }

    pub(crate) fn flag(self, key: &str, b: bool) -> Self {
        self.raw(key, b.to_string())
    }

    pub(crate) fn text(self, key: &str, s: &str) -> Self {
        self.raw(key, json_string(s))
    }

    pub(crate) fn nums(self, key: &str, xs: &[f64]) -> Self {
        self.raw(key, json_array(xs))
    }

    pub(crate) fn compact(&self) -> String {
        let body: Vec<String> = self.fields.iter().map(|(k, v)| format!("{}:{}", json_string(k), v)).collect();
        format!("{{{}}}", body.join(","))
    }

    pub(crate) fn pretty(&self) -> String {
        let mut out = String::from("{\n");
        for (i, (k, v)) in self.fields.iter().enumerate() {
            let sep = if i + 1 < self.fields.len() { "," } else { "" };
            writeln!(out, "  {}: {}{}", json_string(k), v, sep).expect("write to string");
        }
        out.push_str("}\n");
        out
    }
}

/// A cross-check against an independent computation.
pub(crate) struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `residual <= tolerance`.
    pub(crate) fn at_most(name: &'static str, residual: f64, tolerance: f64) -> Self {
        Check { name, residual, tolerance, passed: residual <= tolerance }
    }

    pub(crate) fn line(&self) -> String {
        format!(
            "[{}] {}: residual={} tolerance={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            fmt17(self.residual),
            fmt17(self.tolerance)
        )
    }

    pub(crate) fn json(&self) -> String {
        JsonObject::new()
            .text("name", self.name)
            .num("residual", self.residual)
            .num("tolerance", self.tolerance)
            .flag("passed", self.passed)
            .compact()
    }
}

pub(crate) fn checks_json(checks: &[Check]) -> String {
    format!("[{}]", checks.iter().map(Check::json).collect::<Vec<_>>().join(","))
}
