//! Tables, their CSV and JSON encodings, and the reader for both.
//!
//! Numbers are written with 12 significant digits. CSV files carry one or
//! more tables, each introduced by `#table,NAME` and `#kinds,...` records
//! followed by a header row.

use crate::error::{CliError, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

/// `x` with 12 significant digits, in the style of `%.12g`.
pub fn fmt12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let s = format!("{:.*}", (11 - exp) as usize, x);
        trim_zeros(&s)
    } else {
        format!("{}e{}", trim_zeros(mant), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// `x` rounded to the 12 digits that would be written.
pub fn round12(x: f64) -> f64 {
    fmt12(x).parse().unwrap_or(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Num,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn num(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }

    pub fn text(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            Cell::Num(_) => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt12(*x),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Text(if b { "true" } else { "false" }.to_string())
    }
}

// Finite numbers go out as JSON numbers rounded to 12 digits; non-finite
// ones as the strings "nan", "inf", "-inf".
impl Serialize for Cell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cell::Num(x) if x.is_finite() => s.serialize_f64(round12(*x)),
            Cell::Num(x) => s.serialize_str(&fmt12(*x)),
            Cell::Text(t) => s.serialize_str(t),
        }
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(f64),
            S(String),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::N(x) => Cell::Num(x),
            Raw::S(s) => Cell::Text(s),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub kinds: Vec<Kind>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[(&str, Kind)]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|(c, _)| c.to_string()).collect(),
            kinds: columns.iter().map(|&(_, k)| k).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width for table {}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Every row has one cell per column and each cell matches its column kind.
    /// Text cells spelling non-finite numbers are accepted in numeric columns.
    pub fn check_schema(&self) -> Result<()> {
        if self.kinds.len() != self.columns.len() {
            return Err(CliError::Format(format!("table {}: {} kinds for {} columns", self.name, self.kinds.len(), self.columns.len())));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.columns.len() {
                return Err(CliError::Format(format!("table {} row {i}: {} cells for {} columns", self.name, row.len(), self.columns.len())));
            }
            for (j, (c, k)) in row.iter().zip(&self.kinds).enumerate() {
                let ok = match (c, k) {
                    (Cell::Num(_), Kind::Num) | (Cell::Text(_), Kind::Text) => true,
                    (Cell::Text(t), Kind::Num) => matches!(t.as_str(), "nan" | "inf" | "-inf"),
                    (Cell::Num(_), Kind::Text) => false,
                };
                if !ok {
                    return Err(CliError::Format(format!("table {} row {i}: column {} is not {k:?}", self.name, self.columns[j])));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub schema: u32,
    pub command: String,
    /// (name, value) pairs describing the run.
    pub parameters: Vec<(String, Cell)>,
    pub tables: Vec<Table>,
}

impl Document {
    pub fn new(command: &str) -> Self {
        Document { schema: SCHEMA_VERSION, command: command.to_string(), parameters: Vec::new(), tables: Vec::new() }
    }

    pub fn param(&mut self, name: &str, value: impl Into<Cell>) {
        self.parameters.push((name.to_string(), value.into()));
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn check_schema(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(CliError::Format(format!("schema {} (expected {SCHEMA_VERSION})", self.schema)));
        }
        self.tables.iter().try_for_each(Table::check_schema)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        w.write_record(["#schema", &SCHEMA_VERSION.to_string()])?;
        w.write_record(["#command", &self.command])?;
        for (k, v) in &self.parameters {
            let kind = if v.num().is_some() { "num" } else { "text" };
            w.write_record(["#param", k, kind, &v.render()])?;
        }
        for t in &self.tables {
            w.write_record(["#table", &t.name])?;
            let kinds: Vec<&str> = t.kinds.iter().map(|k| if *k == Kind::Num { "num" } else { "text" }).collect();
            w.write_record(std::iter::once("#kinds").chain(kinds))?;
            w.write_record(&t.columns)?;
            for r in &t.rows {
                w.write_record(r.iter().map(Cell::render))?;
            }
        }
        let bytes = w.into_inner().map_err(|e| CliError::Format(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Format(e.to_string()))
    }

    pub fn render(&self, json: bool) -> Result<String> {
        if json {
            self.to_json()
        } else {
            self.to_csv()
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: Document = serde_json::from_str(s)?;
        d.check_schema()?;
        Ok(d)
    }

    pub fn from_csv(s: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(s.as_bytes());
        let mut doc: Option<Document> = None;
        let mut schema = None;
        // pending header after #kinds
        let mut expect_header = false;
        for rec in r.records() {
            let rec = rec?;
            let first = rec.get(0).unwrap_or("");
            let bad = |m: &str| CliError::Format(format!("{m}: {:?}", rec.iter().collect::<Vec<_>>()));
            if expect_header {
                let t = doc.as_mut().and_then(|d| d.tables.last_mut()).ok_or_else(|| bad("header without table"))?;
                t.columns = rec.iter().map(str::to_string).collect();
                expect_header = false;
                continue;
            }
            match first {
                "#schema" => schema = Some(rec.get(1).and_then(|v| v.parse::<u32>().ok()).ok_or_else(|| bad("bad schema"))?),
                "#command" => {
                    let mut d = Document::new(rec.get(1).ok_or_else(|| bad("bad command"))?);
                    d.schema = schema.ok_or_else(|| bad("command before schema"))?;
                    doc = Some(d);
                }
                "#param" => {
                    let d = doc.as_mut().ok_or_else(|| bad("param before command"))?;
                    let (name, kind, val) = match (rec.get(1), rec.get(2), rec.get(3)) {
                        (Some(a), Some(b), Some(c)) => (a, b, c),
                        _ => return Err(bad("bad param")),
                    };
                    d.param(name, parse_cell(val, kind == "num"));
                }
                "#table" => {
                    let d = doc.as_mut().ok_or_else(|| bad("table before command"))?;
                    d.tables.push(Table { name: rec.get(1).unwrap_or("").to_string(), columns: vec![], kinds: vec![], rows: vec![] });
                }
                "#kinds" => {
                    let t = doc.as_mut().and_then(|d| d.tables.last_mut()).ok_or_else(|| bad("kinds without table"))?;
                    t.kinds = rec
                        .iter()
                        .skip(1)
                        .map(|k| match k {
                            "num" => Ok(Kind::Num),
                            "text" => Ok(Kind::Text),
                            _ => Err(CliError::Format(format!("unknown kind {k}"))),
                        })
                        .collect::<Result<_>>()?;
                    expect_header = true;
                }
                _ => {
                    let t = doc.as_mut().and_then(|d| d.tables.last_mut()).ok_or_else(|| bad("row without table"))?;
                    let row = rec.iter().enumerate().map(|(j, v)| parse_cell(v, t.kinds.get(j) == Some(&Kind::Num))).collect();
                    t.rows.push(row);
                }
            }
        }
        let d = doc.ok_or_else(|| CliError::Format("no #command record".into()))?;
        d.check_schema()?;
        Ok(d)
    }

    /// Reads either encoding, chosen by the first non-blank character.
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('{') {
            Self::from_json(s)
        } else {
            Self::from_csv(s)
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

fn parse_cell(v: &str, numeric: bool) -> Cell {
    if numeric {
        match v {
            "nan" | "inf" | "-inf" => Cell::Text(v.to_string()),
            _ => v.parse::<f64>().map(Cell::Num).unwrap_or_else(|_| Cell::Text(v.to_string())),
        }
    } else {
        Cell::Text(v.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt12(2.0 * 3f64.sqrt() / 1.5), "2.30940107676");
        assert_eq!(fmt12(1.0), "1");
        assert_eq!(fmt12(-0.315), "-0.315");
        assert_eq!(fmt12(1.5e-7), "1.5e-7");
        assert_eq!(fmt12(123456789012345.0), "1.23456789012e14");
        assert_eq!(fmt12(0.0001234), "0.0001234");
        assert_eq!(fmt12(f64::NAN), "nan");
        assert_eq!(fmt12(99999999999.99999), "100000000000");
    }

    fn sample() -> Document {
        let mut d = Document::new("test");
        d.param("alpha", 0.5);
        d.param("model", "free-particle");
        let mut t = Table::new("a", &[("x", Kind::Num), ("label", Kind::Text)]);
        t.push(vec![Cell::Num(1.0 / 3.0), "p,q".into()]);
        t.push(vec![Cell::Num(f64::INFINITY), "".into()]);
        d.tables.push(t);
        let mut t = Table::new("empty", &[("e", Kind::Num)]);
        t.rows.clear();
        d.tables.push(t);
        d
    }

    #[test]
    fn csv_round_trip() {
        let d = sample();
        let s = d.to_csv().unwrap();
        let back = Document::from_csv(&s).unwrap();
        assert_eq!(back.to_csv().unwrap(), s);
        assert_eq!(back.tables[0].rows[0][0], Cell::Num(0.333333333333));
        assert_eq!(back.tables[0].rows[0][1], Cell::Text("p,q".into()));
        assert_eq!(back.tables[1].rows.len(), 0);
    }

    #[test]
    fn json_round_trip() {
        let d = sample();
        let s = d.to_json().unwrap();
        assert!(s.contains("\"schema\": 1"));
        let back = Document::from_json(&s).unwrap();
        assert_eq!(back.to_json().unwrap(), s);
    }

    #[test]
    fn schema_violations_are_rejected() {
        let mut d = sample();
        d.tables[0].rows[0][0] = Cell::Text("oops".into());
        assert!(d.check_schema().is_err());
        let mut d = sample();
        d.tables[0].rows[0].pop();
        assert!(Document::from_json(&d.to_json().unwrap()).is_err());
        assert!(Document::from_json("{\"schema\":2,\"command\":\"x\",\"parameters\":[],\"tables\":[]}").is_err());
    }
}
