//! Stable `key = value` reports.

use std::fmt;

/// Nine significant digits, trailing zeros dropped; `-0` prints as `0`.
pub fn fmt9(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..=12).contains(&mag) {
        return format!("{:.8e}", x);
    }
    let decimals = (8 - mag).max(0) as usize;
    let s = format!("{:.*}", decimals, x);
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// Ordered list of key/value lines.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub entries: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    pub fn num(&mut self, key: &str, value: f64) -> &mut Self {
        self.push(key, fmt9(value))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn extend(&mut self, other: Report) -> &mut Self {
        self.entries.extend(other.entries);
        self
    }

    pub fn to_json(&self) -> String {
        let body: Vec<String> =
            self.entries.iter().map(|(k, v)| format!("  \"{}\": \"{}\"", escape(k), escape(v))).collect();
        format!("{{\n{}\n}}\n", body.join(",\n"))
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_digits() {
        assert_eq!(fmt9(1.0), "1");
        assert_eq!(fmt9(3f64.sqrt()), "1.73205081");
        assert_eq!(fmt9(-0.0), "0");
        assert_eq!(fmt9(123.456), "123.456");
        assert_eq!(fmt9(0.001), "0.001");
    }

    #[test]
    fn display_is_key_value() {
        let mut r = Report::new();
        r.push("model", "cup").num("lambda", 3.0);
        assert_eq!(r.to_string(), "model = cup\nlambda = 3\n");
        assert_eq!(r.get("lambda"), Some("3"));
    }
}
