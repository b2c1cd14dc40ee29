//! CSV and JSON artifacts.
//!
//! Numbers carry 9 significant digits. Every artifact ends with (CSV) or
//! wraps (JSON) the resolved run configuration and the library version.

use std::fmt::Write as _;

use serde_json::{Map, Value};

pub const SIG_DIGITS: usize = 9;

/// `x` to [`SIG_DIGITS`] significant digits, `%g` style.
pub fn sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// JSON number rounded to [`SIG_DIGITS`]; `"infinity"` for `+∞`, `null` for NaN.
pub fn num(x: f64) -> Value {
    if x == f64::INFINITY {
        return Value::from("infinity");
    }
    if x == f64::NEG_INFINITY {
        return Value::from("-infinity");
    }
    match sig9(x).parse::<f64>() {
        Ok(r) if r.is_finite() => Value::from(r),
        _ => Value::Null,
    }
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

/// Table with a header written once, then rows, then `# ` trailer lines.
#[derive(Debug, Default)]
pub struct Csv {
    buf: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut csv = Csv { buf: String::new(), columns: header.len() };
        csv.line(header.iter().map(|s| s.to_string()));
        csv
    }

    fn line<I: IntoIterator<Item = String>>(&mut self, fields: I) {
        let fields: Vec<String> = fields.into_iter().collect();
        self.buf.push_str(&fields.join(","));
        self.buf.push('\n');
    }

    pub fn row(&mut self, fields: Vec<String>) {
        assert_eq!(fields.len(), self.columns, "row width");
        self.line(fields.into_iter().map(|f| quote(&f)));
    }

    pub fn comment(&mut self, key: &str, value: &str) {
        let _ = writeln!(self.buf, "# {key}: {value}");
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

pub fn version_string() -> String {
    format!("hardy {}", hardy_core::VERSION)
}

/// `{version, config, result}`, pretty-printed with a trailing newline.
pub fn json_document(config: Value, result: Value) -> String {
    let mut doc = Map::new();
    doc.insert("version".into(), Value::from(version_string()));
    doc.insert("config".into(), config);
    doc.insert("result".into(), result);
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json");
    s.push('\n');
    s
}

/// CSV trailer with the version and the config on one line.
pub fn csv_trailer(csv: &mut Csv, config: &Value) {
    csv.comment("version", &version_string());
    csv.comment("config", &serde_json::to_string(config).expect("json"));
}
