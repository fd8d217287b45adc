//! Text serialisation shared by the reports: numbers with ten significant
//! digits, `key=value` blocks, CSV rows.

use std::fmt::{Display, Write};

/// `%.10g`-style rendering: ten significant digits, trailing zeros dropped,
/// scientific notation outside `[1e-5, 1e10)`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..10).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// `fmt_num`, or `undefined` for a missing value.
pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_else(|| "undefined".into())
}

/// Ordered `key=value` lines, LF-terminated.
#[derive(Debug, Default)]
pub struct KeyValue {
    buf: String,
}

impl KeyValue {
    pub fn push(&mut self, key: &str, value: impl Display) {
        writeln!(self.buf, "{key}={value}").expect("writing to a String");
    }

    pub fn push_num(&mut self, key: &str, value: f64) {
        self.push(key, fmt_num(value));
    }

    pub fn finish(self) -> String {
        self.buf
    }
}
