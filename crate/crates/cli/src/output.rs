use serde_json::{Map, Value};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

pub type Record = Map<String, Value>;

/// Round to 12 significant digits. Non-finite values become JSON null.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    Value::from(rounded)
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn write_csv(rows: &[Record], mut out: impl Write) -> io::Result<()> {
    let Some(first) = rows.first() else {
        return Ok(());
    };
    let header: Vec<&str> = first.keys().map(String::as_str).collect();
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.values().map(csv_cell).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

/// A single record prints as an object, a table as an array.
pub fn write_json(rows: &[Record], single: bool, mut out: impl Write) -> io::Result<()> {
    let value = if single && rows.len() == 1 {
        Value::Object(rows[0].clone())
    } else {
        Value::Array(rows.iter().cloned().map(Value::Object).collect())
    };
    serde_json::to_writer_pretty(&mut out, &value)?;
    writeln!(out)
}

/// `path` or stdout when `None`.
pub fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}
