//! CSV and JSON rendering.
//!
//! CSV: header row, comma separated, LF line endings, no quoting. Floats are
//! printed with 12 significant digits (see [`format_float`]). Exact values get
//! separate numerator and denominator columns.
//!
//! JSON: one top-level object for single records, one array otherwise. Keys
//! follow the CSV column order. Floats are shortest round-trip; numerators and
//! denominators are decimal strings so big integers survive any parser.

use std::fmt::Write as _;

use mafia_odds::Rational;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// One field of a record.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(&'static str),
    /// Arbitrary-precision integer kept as decimal digits.
    Big(String),
    Empty,
}

impl Cell {
    pub fn numerator(value: &Rational) -> Cell {
        Cell::Big(value.numer().to_string())
    }

    pub fn denominator(value: &Rational) -> Cell {
        Cell::Big(value.denom().to_string())
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => (*s).to_string(),
            Cell::Big(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::from(*s),
            Cell::Big(s) => Value::from(s.as_str()),
            Cell::Empty => Value::Null,
        }
    }
}

/// Named columns plus rows of cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
    /// Render JSON as a single object rather than an array.
    pub single: bool,
}

impl Table {
    pub fn new(columns: &'static [&'static str]) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            single: false,
        }
    }

    pub fn single(columns: &'static [&'static str], row: Vec<Cell>) -> Self {
        Self {
            columns,
            rows: vec![row],
            single: true,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    fn object(&self, row: &[Cell]) -> Value {
        let map: Map<String, Value> = self
            .columns
            .iter()
            .zip(row)
            .map(|(k, v)| ((*k).to_string(), v.json()))
            .collect();
        Value::Object(map)
    }

    fn to_json(&self) -> String {
        let value = if self.single {
            self.object(self.rows.first().map_or(&[][..], |r| r.as_slice()))
        } else {
            Value::Array(self.rows.iter().map(|r| self.object(r)).collect())
        };
        let mut out = Vec::new();
        let mut ser =
            serde_json::Serializer::with_formatter(&mut out, serde_json::ser::PrettyFormatter::new());
        value
            .serialize(&mut ser)
            .expect("serializing a Value cannot fail");
        let mut text = String::from_utf8(out).expect("serde_json emits UTF-8");
        text.push('\n');
        text
    }
}

/// Renders `x` with 12 significant digits, like C's `%.12g`.
///
/// Rounding is Rust's exact decimal rounding of the binary value (ties to
/// even on the exact expansion), so the text is identical on every platform.
/// Trailing zeros are dropped; exponents below -5 or at/above 12 use
/// scientific notation.
pub fn format_float(x: f64) -> String {
    const DIGITS: usize = 12;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };

    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if !(-5..DIGITS as i32).contains(&exp) {
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        write!(out, "e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs()).unwrap();
    } else if exp < 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
        out.push_str(digits);
    } else {
        let int_len = exp as usize + 1;
        if digits.len() <= int_len {
            out.push_str(digits);
            out.extend(std::iter::repeat_n('0', int_len - digits.len()));
        } else {
            out.push_str(&digits[..int_len]);
            out.push('.');
            out.push_str(&digits[int_len..]);
        }
    }
    out
}
