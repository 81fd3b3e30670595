//! Table and document rendering. Numbers in CSV carry 17 significant digits
//! in scientific notation, independent of locale.

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json_num(*x),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

impl From<u32> for Cell {
    fn from(i: u32) -> Self {
        Cell::Int(i.into())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

pub fn num(x: f64) -> String {
    // `+ 0.0` folds negative zero into zero
    format!("{:.16e}", x + 0.0)
}

/// Finite floats as JSON numbers; NaN and infinities become `null`.
pub fn json_num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    /// Free-text lines emitted as `# ...` ahead of the CSV header.
    pub notes: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => to_json(&self.to_json_value()),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        for n in &self.notes {
            out.push_str("# ");
            out.push_str(n);
            out.push('\n');
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::csv)).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input"));
        out
    }

    pub fn to_json_value(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(r)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut doc = Map::new();
        if !self.notes.is_empty() {
            doc.insert("notes".into(), self.notes.clone().into());
        }
        doc.insert("rows".into(), Value::Array(rows));
        Value::Object(doc)
    }
}

pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable value");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_seventeen_digits_and_quotes() {
        let mut t = Table::new(&["x", "label"]);
        t.notes.push("grid: test".into());
        t.push(vec![0.1.into(), "a,b".into()]);
        assert_eq!(
            t.render(Format::Csv),
            "# grid: test\nx,label\n1.0000000000000001e-1,\"a,b\"\n"
        );
    }

    #[test]
    fn csv_round_trips_doubles() {
        for x in [std::f64::consts::PI, -1.0718e-23, 2.0f64.sqrt() * 1e300] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(-0.0), "0.0000000000000000e0");
    }

    #[test]
    fn json_rows_keep_column_order() {
        let mut t = Table::new(&["z", "a"]);
        t.push(vec![1.0.into(), Cell::Int(2)]);
        assert_eq!(
            serde_json::to_string(&t.to_json_value()).unwrap(),
            r#"{"rows":[{"z":1.0,"a":2}]}"#
        );
        assert_eq!(json_num(f64::NAN), Value::Null);
    }
}
