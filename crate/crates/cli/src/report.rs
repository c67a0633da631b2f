use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => format!("{v}\n"),
        Format::Csv => csv_table(v),
    }
}

/// Flattens nested values into `key.sub` / `key.0` columns.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&key(k), x, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten(&key(&i.to_string()), x, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        x => out.push((prefix.to_string(), x.to_string())),
    }
}

/// The first field holding a list of objects becomes the rows; otherwise the
/// whole report is one row.
fn csv_table(v: &Value) -> String {
    let empty = Map::new();
    let obj = v.as_object().unwrap_or(&empty);
    let listed = obj.iter().find(|(_, x)| {
        x.as_array().is_some_and(|a| !a.is_empty() && a.iter().all(Value::is_object))
    });
    let rows: Vec<Vec<(String, String)>> = match listed {
        Some((_, Value::Array(items))) => items
            .iter()
            .map(|item| {
                let mut row = Vec::new();
                flatten("", item, &mut row);
                row
            })
            .collect(),
        _ => {
            let mut row = Vec::new();
            flatten("", v, &mut row);
            vec![row]
        }
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(first) = rows.first() {
        w.write_record(first.iter().map(|(k, _)| k)).expect("in-memory write");
    }
    for row in &rows {
        w.write_record(row.iter().map(|(_, x)| x)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 input")
}
