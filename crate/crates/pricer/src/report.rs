//! Fixed-decimal formatting and plain-text tables.

use serde_json::Value;

fn fixed(v: f64, dp: usize) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{v:.dp$}");
    // "-0.00" and friends
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Rates and other decimals, 6 dp.
pub fn rate(v: f64) -> String {
    fixed(v, 6)
}

/// Rates as percentages, 4 dp (6 dp as a decimal).
pub fn pct(v: f64) -> String {
    format!("{}%", fixed(v * 100.0, 4))
}

/// Basis points, 2 dp.
pub fn bp(v: f64) -> String {
    fixed(v, 2)
}

/// Currency amounts, 0 dp.
pub fn ccy(v: f64) -> String {
    fixed(v, 0)
}

fn round_to(v: f64, dp: i32) -> Value {
    if !v.is_finite() {
        return Value::String(if v.is_nan() {
            "nan".into()
        } else {
            fixed(v, 0)
        });
    }
    let s = fixed(v, dp as usize);
    serde_json::from_str(&s).unwrap_or(Value::Null)
}

pub fn j_rate(v: f64) -> Value {
    round_to(v, 6)
}

pub fn j_bp(v: f64) -> Value {
    round_to(v, 2)
}

pub fn j_ccy(v: f64) -> Value {
    round_to(v, 0)
}

/// A left-aligned first column followed by right-aligned columns.
#[derive(Debug, Default)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row<S: Into<String>>(&mut self, cells: impl IntoIterator<Item = S>) -> &mut Self {
        self.rows.push(cells.into_iter().map(Into::into).collect());
        self
    }

    pub fn render(&self) -> String {
        let cols = self
            .rows
            .iter()
            .map(Vec::len)
            .chain([self.header.len()])
            .max()
            .unwrap_or(0);
        let mut width = vec![0; cols];
        for r in std::iter::once(&self.header).chain(&self.rows) {
            for (i, c) in r.iter().enumerate() {
                width[i] = width[i].max(c.chars().count());
            }
        }
        let line = |r: &[String]| {
            let mut s = String::new();
            for (i, w) in width.iter().enumerate() {
                let c = r.get(i).map(String::as_str).unwrap_or("");
                if i == 0 {
                    s.push_str(&format!("{c:<w$}"));
                } else {
                    s.push_str(&format!("  {c:>w$}"));
                }
            }
            s.trim_end().to_string()
        };
        let mut out = String::new();
        if !self.header.is_empty() {
            out.push_str(&line(&self.header));
            out.push('\n');
            out.push_str(&"-".repeat(width.iter().sum::<usize>() + 2 * cols.saturating_sub(1)));
            out.push('\n');
        }
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }
}

/// Output of one command: a JSON document and the same content as text.
#[derive(Debug)]
pub struct Report {
    pub name: &'static str,
    pub json: Value,
    pub text: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_decimals() {
        assert_eq!(rate(0.0487712345), "0.048771");
        assert_eq!(bp(0.1049), "0.10");
        assert_eq!(bp(-0.001), "0.00");
        assert_eq!(ccy(-0.4), "0");
        assert_eq!(ccy(613_025.4), "613025");
        assert_eq!(ccy(f64::INFINITY), "inf");
        assert_eq!(pct(0.048771), "4.8771%");
        assert_eq!(j_rate(0.0487712345), serde_json::json!(0.048771));
        assert_eq!(j_ccy(f64::INFINITY), serde_json::json!("inf"));
    }

    #[test]
    fn table_alignment() {
        let mut t = Table::new(["a", "value"]);
        t.row(["long label", "1"]);
        let s = t.render();
        assert_eq!(s.lines().next().unwrap(), "a           value");
        assert_eq!(s.lines().nth(2).unwrap(), "long label      1");
    }
}
