//! Deterministic JSON, CSV and run manifests.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

/// Pretty JSON with every float printed to 17 significant digits.
struct FixedFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for FixedFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serialize with sorted keys and fixed float formatting. Non-finite
/// floats become `null`.
pub fn to_json<T: Serialize>(v: &T) -> serde_json::Result<String> {
    // Value maps are ordered by key
    let value: Value = serde_json::to_value(v)?;
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// Format a float for CSV cells.
pub fn cell(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<f64>]) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r.iter().map(|v| cell(*v)))?;
    }
    w.flush()
}

/// Record of one invocation, written next to its results.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// Fully resolved arguments, replayable with `toda <command> --config`.
    pub params: BTreeMap<String, Value>,
    pub tolerances: BTreeMap<String, f64>,
    pub seeds: BTreeMap<String, u64>,
    pub versions: BTreeMap<String, String>,
    pub wall_clock_seconds: f64,
    pub pass: bool,
    pub summary: String,
    pub outputs: Vec<String>,
}

/// Files produced by one command.
pub struct Sink {
    pub dir: PathBuf,
    pub command: String,
    outputs: Vec<String>,
}

impl Sink {
    pub fn new(dir: &Path, command: &str) -> io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Sink { dir: dir.to_path_buf(), command: command.to_string(), outputs: Vec::new() })
    }

    fn path(&mut self, suffix: &str) -> PathBuf {
        let name = format!("{}{suffix}", self.command);
        self.outputs.push(name.clone());
        self.dir.join(name)
    }

    pub fn json<T: Serialize>(&mut self, v: &T) -> io::Result<PathBuf> {
        let p = self.path(".json");
        std::fs::write(&p, to_json(v).map_err(io::Error::other)?)?;
        Ok(p)
    }

    pub fn csv(&mut self, header: &[String], rows: &[Vec<f64>]) -> io::Result<PathBuf> {
        let p = self.path(".csv");
        write_csv(&p, header, rows)?;
        Ok(p)
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    /// Resolved parameters as a config file, for `--config` replays.
    pub fn replay_config(&self, text: &str) -> io::Result<PathBuf> {
        let p = self.dir.join(format!("{}.replay.cfg", self.command));
        std::fs::write(&p, text)?;
        Ok(p)
    }

    pub fn manifest(&self, m: &RunManifest) -> io::Result<PathBuf> {
        let p = self.dir.join(format!("{}.manifest.json", self.command));
        std::fs::write(&p, to_json(m).map_err(io::Error::other)?)?;
        Ok(p)
    }
}

/// Render resolved parameters as a config file.
pub fn params_to_config(params: &BTreeMap<String, Value>) -> String {
    let mut s = String::new();
    for (k, v) in params {
        let text = match v {
            Value::Null => continue,
            Value::String(x) => x.clone(),
            Value::Array(a) => a.iter().map(scalar).collect::<Vec<_>>().join(","),
            other => scalar(other),
        };
        s.push_str(&format!("{k} = {text}\n"));
    }
    s
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(x) => x.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(f) if n.is_f64() => format!("{f:e}"),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct S {
        zeta: f64,
        alpha: Vec<f64>,
        name: &'static str,
        n: usize,
    }

    #[test]
    fn sorted_keys_and_fixed_floats() {
        let s = to_json(&S { zeta: 0.1, alpha: vec![1.0, -2.5e-300], name: "x", n: 3 }).unwrap();
        let a = s.find("\"alpha\"").unwrap();
        let n = s.find("\"n\"").unwrap();
        let z = s.find("\"zeta\"").unwrap();
        assert!(a < n && n < z);
        assert!(s.contains("1.0000000000000001e-1"));
        assert!(s.contains("-2.5000000000000000e-300"));
        assert!(s.contains("\"n\": 3"));
    }

    #[test]
    fn identical_input_identical_bytes() {
        let v = S { zeta: std::f64::consts::PI, alpha: vec![], name: "y", n: 0 };
        assert_eq!(to_json(&v).unwrap(), to_json(&v).unwrap());
    }

    #[test]
    fn nan_is_null() {
        assert!(to_json(&vec![f64::NAN]).unwrap().contains("null"));
    }

    #[test]
    fn config_round_trip() {
        let mut p = BTreeMap::new();
        p.insert("hbar".to_string(), serde_json::json!(0.5));
        p.insert("levels".to_string(), serde_json::json!([0, 1]));
        p.insert("genus".to_string(), Value::Null);
        let text = params_to_config(&p);
        assert_eq!(text, "hbar = 5e-1\nlevels = 0,1\n");
    }
}
