//! The single output writer. Every record is a JSON object tagged with its
//! kind; csv and text are renderings of that same object.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

enum Sink {
    Plain(Box<dyn Write>),
    Csv {
        writer: Box<csv::Writer<Box<dyn Write>>>,
        header: Vec<String>,
    },
}

pub struct Emitter {
    format: Format,
    sink: Sink,
}

impl Emitter {
    pub fn new(format: Format, out: Box<dyn Write>) -> Self {
        let sink = match format {
            Format::Csv => Sink::Csv {
                writer: Box::new(csv::WriterBuilder::new().flexible(true).from_writer(out)),
                header: Vec::new(),
            },
            _ => Sink::Plain(out),
        };
        Emitter { format, sink }
    }

    pub fn emit(&mut self, kind: &str, record: &impl Serialize) -> io::Result<()> {
        let body = serde_json::to_value(record).map_err(io::Error::other)?;
        let mut obj = Map::new();
        obj.insert("record".into(), Value::String(kind.into()));
        match body {
            Value::Object(fields) => obj.extend(fields),
            other => {
                obj.insert("value".into(), other);
            }
        }
        let value = Value::Object(obj);
        match (&mut self.sink, self.format) {
            (Sink::Plain(out), Format::Json) => {
                serde_json::to_writer(&mut *out, &value).map_err(io::Error::other)?;
                writeln!(out)
            }
            (Sink::Plain(out), _) => write_text(out, &value),
            (Sink::Csv { writer, header }, _) => {
                let mut cells = Vec::new();
                flatten("", &value, &mut cells);
                let keys: Vec<String> = cells.iter().map(|(k, _)| k.clone()).collect();
                if *header != keys {
                    writer.write_record(&keys)?;
                    *header = keys;
                }
                writer.write_record(cells.iter().map(|(_, v)| v))?;
                writer.flush()
            }
        }
    }

    pub fn finish(&mut self) -> io::Result<()> {
        match &mut self.sink {
            Sink::Plain(out) => out.flush(),
            Sink::Csv { writer, .. } => writer.flush(),
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Dotted-path columns; arrays of scalars become one space-separated cell.
pub fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let joined = items.iter().map(scalar).collect::<Vec<_>>().join(" ");
            out.push((prefix.to_string(), joined));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn is_rational(map: &Map<String, Value>) -> bool {
    map.contains_key("num") && map.contains_key("den") && map.len() <= 3
}

fn rational_text(map: &Map<String, Value>) -> String {
    let (num, den) = (scalar(&map["num"]), scalar(&map["den"]));
    let exact = if den == "1" {
        num
    } else {
        format!("{num}/{den}")
    };
    match map.get("decimal") {
        Some(d) => format!("{exact} (~{})", scalar(d)),
        None => exact,
    }
}

fn write_text(out: &mut dyn Write, v: &Value) -> io::Result<()> {
    let Value::Object(map) = v else {
        return writeln!(out, "{v}");
    };
    writeln!(out, "[{}]", scalar(&map["record"]))?;
    for (k, v) in map.iter().filter(|(k, _)| *k != "record") {
        write_text_field(out, 1, k, v)?;
    }
    Ok(())
}

fn write_text_field(out: &mut dyn Write, depth: usize, key: &str, v: &Value) -> io::Result<()> {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) if is_rational(map) => {
            writeln!(out, "{pad}{key}: {}", rational_text(map))
        }
        Value::Object(map) => {
            writeln!(out, "{pad}{key}:")?;
            for (k, v) in map {
                write_text_field(out, depth + 1, k, v)?;
            }
            Ok(())
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            writeln!(out, "{pad}{key}:")?;
            for x in items {
                match x {
                    Value::Object(map) if is_rational(map) => {
                        writeln!(out, "{pad}  - {}", rational_text(map))?
                    }
                    Value::Object(map) => {
                        let parts: Vec<String> = map
                            .iter()
                            .map(|(k, v)| match v {
                                Value::Object(r) if is_rational(r) => {
                                    format!("{k}={}", rational_text(r))
                                }
                                other => format!("{k}={}", scalar(other)),
                            })
                            .collect();
                        writeln!(out, "{pad}  - {}", parts.join(", "))?;
                    }
                    other => writeln!(out, "{pad}  - {}", scalar(other))?,
                }
            }
            Ok(())
        }
        Value::Array(items) => {
            let joined = items.iter().map(scalar).collect::<Vec<_>>().join(", ");
            writeln!(out, "{pad}{key}: [{joined}]")
        }
        other => writeln!(out, "{pad}{key}: {}", scalar(other)),
    }
}
