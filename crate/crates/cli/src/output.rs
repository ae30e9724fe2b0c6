//! Tabular artifacts: CSV with a `#` header block, or the equivalent JSON.
//!
//! Floats are always written with 17 significant digits in scientific
//! notation so that identical runs give identical bytes.

use std::fmt::Write as _;
use std::io::Write;

use crate::config::{Format, RunConfig};
use crate::Failure;

pub const TOOL_NAME: &str = "zitterkit";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Int(x as i64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        // keeps -0.0 and 0.0 byte-identical
        return format!("{:.16e}", 0.0);
    }
    format!("{x:.16e}")
}

impl Value {
    fn plain(&self) -> String {
        match self {
            Value::Float(x) => format_float(*x),
            Value::Int(i) => i.to_string(),
            Value::Text(s) => s.clone(),
            Value::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> String {
        match self {
            Value::Float(x) if x.is_finite() => format_float(*x),
            Value::Float(_) => "null".into(),
            Value::Int(i) => i.to_string(),
            Value::Text(s) => serde_json::to_string(s).expect("strings serialize"),
            Value::Bool(b) => b.to_string(),
        }
    }
}

pub type Fields = Vec<(String, Value)>;

/// One command's output: resolved config, a summary block and a table.
#[derive(Debug, Clone)]
pub struct Document {
    pub command: String,
    pub config: Fields,
    pub summary: Fields,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Document {
    pub fn new(command: &str, cfg: &RunConfig, columns: &[&str]) -> Self {
        Document {
            command: command.into(),
            config: config_fields(cfg),
            summary: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn add_summary(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.push((key.into(), value.into()));
    }

    pub fn summary_value(&self, key: &str) -> Option<&Value> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn render(&self, format: Format) -> Result<String, Failure> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json()),
        }
    }

    pub fn to_csv(&self) -> Result<String, Failure> {
        let mut out = String::new();
        let _ = writeln!(out, "# {TOOL_NAME} {TOOL_VERSION}");
        let _ = writeln!(out, "# command = {}", self.command);
        for (k, v) in &self.config {
            let _ = writeln!(out, "# config.{k} = {}", v.plain());
        }
        for (k, v) in &self.summary {
            let _ = writeln!(out, "# summary.{k} = {}", v.plain());
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Failure::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Value::plain)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
        out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        fn object(fields: &[(String, Value)], indent: &str) -> String {
            if fields.is_empty() {
                return "{}".into();
            }
            let body: Vec<String> = fields
                .iter()
                .map(|(k, v)| format!("{indent}  {}: {}", Value::Text(k.clone()).json(), v.json()))
                .collect();
            format!("{{\n{}\n{indent}}}", body.join(",\n"))
        }

        let mut meta: Fields = vec![
            ("tool".into(), TOOL_NAME.into()),
            ("version".into(), TOOL_VERSION.into()),
            ("command".into(), self.command.clone().into()),
        ];
        meta.extend(self.config.iter().cloned());
        let columns: Vec<String> = self.columns.iter().map(|c| Value::Text(c.clone()).json()).collect();
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|row| {
                let fields: Vec<String> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| format!("{}: {}", Value::Text(c.clone()).json(), v.json()))
                    .collect();
                format!("    {{{}}}", fields.join(", "))
            })
            .collect();
        let rows = if rows.is_empty() {
            "[]".to_string()
        } else {
            format!("[\n{}\n  ]", rows.join(",\n"))
        };
        format!(
            "{{\n  \"meta\": {},\n  \"summary\": {},\n  \"columns\": [{}],\n  \"rows\": {}\n}}\n",
            object(&meta, "  "),
            object(&self.summary, "  "),
            columns.join(", "),
            rows
        )
    }
}

fn config_fields(cfg: &RunConfig) -> Fields {
    let rep = &cfg.rep;
    let p = cfg.center.0;
    let mut f: Fields = vec![
        ("rep".into(), rep.kind().name().into()),
        ("mass".into(), rep.mass().into()),
        ("spin".into(), rep.spin().value().into()),
    ];
    match rep.gfv_n() {
        Some(n) => f.push(("gfv_n".into(), n.into())),
        None => f.push(("gfv_n".into(), "auto".into())),
    }
    f.extend([
        ("p_x".into(), p[0].into()),
        ("p_y".into(), p[1].into()),
        ("p_z".into(), p[2].into()),
        ("sigma".into(), cfg.sigma.into()),
        ("samples".into(), cfg.samples.into()),
        (
            "geometry".into(),
            match cfg.geometry {
                zitterkit_core::wavepacket::GridGeometry::Line => "line",
                zitterkit_core::wavepacket::GridGeometry::Cube => "cube",
            }
            .into(),
        ),
        ("axis".into(), cfg.axis.index().into()),
        ("mix_positive".into(), cfg.mix.0.into()),
        ("mix_negative".into(), cfg.mix.1.into()),
    ]);
    match cfg.tmax {
        Some(t) => f.push(("tmax".into(), t.into())),
        None => f.push(("tmax".into(), "auto".into())),
    }
    f.push(("steps".into(), cfg.steps.into()));
    let (r, c) = cfg.entry_or_default();
    f.push(("entry".into(), format!("{r};{c}").into()));
    f.push(("tolerance".into(), cfg.tolerance.into()));
    f.push(("random_momenta".into(), cfg.random_momenta.into()));
    f.push(("seed".into(), Value::Int(cfg.seed as i64)));
    f.push(("format".into(), cfg.format.name().into()));
    f
}

/// Writes to the configured path, or stdout when none is set.
pub fn emit(doc: &Document, cfg: &RunConfig) -> Result<(), Failure> {
    let text = doc.render(cfg.format)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Io(e.to_string()))
        }
    }
}
