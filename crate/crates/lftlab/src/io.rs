//! Instance and result documents. Rationals are written as `"p/q"` strings and
//! every map is key-sorted, so identical inputs give byte-identical output.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::error::LftError;
use crate::fixtures::{ex2, ex3, quadratic_ex1, random_convex_quadratic};
use crate::function::FunctionSpec;
use crate::grid::RegularGrid;
use crate::hardness::HiddenStringInstance;
use crate::multi::{separable_sum, TensorGrid, TensorSamples};
use crate::scalar::{format_decimal, format_rational, int, parse_rational, Rational};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("builtin `{builtin}` needs parameter `{param}`")]
    MissingParam { builtin: &'static str, param: &'static str },
    #[error(transparent)]
    Lft(#[from] LftError),
}

/// A rational that serializes as `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact(pub Rational);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map(Exact).ok_or_else(|| serde::de::Error::custom(format!("not a rational: {text:?}")))
    }
}

impl From<Rational> for Exact {
    fn from(r: Rational) -> Self {
        Exact(r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub x0: Exact,
    pub gamma_x: Exact,
    pub n: usize,
}

impl AxisSpec {
    pub fn of(grid: &RegularGrid) -> Self {
        Self { x0: Exact(grid.x0().clone()), gamma_x: Exact(grid.gamma_x().clone()), n: grid.n() }
    }

    pub fn grid(&self) -> Result<RegularGrid, LftError> {
        RegularGrid::new(self.x0.0.clone(), self.gamma_x.0.clone(), self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    /// `x^2 - 3x/4 + 1/2` on `n` points of [0, 1] (default 5).
    QuadraticEx1,
    PwlEx2,
    PwlEx3,
    /// `scale * max_i |x_i - z_i|` on `{0,1}^d`.
    HypercubeZ,
    /// `sum_a q(x_a)` with `q` the `n`-point quadratic (defaults d = 2, n = 4).
    SeparableSum,
    /// Seeded convex quadratic on `n` points (default 8).
    RandomConvexQuadratic,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuiltinParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<Exact>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl BuiltinParams {
    fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InstanceFile {
    /// Row-major samples, axis 0 slowest.
    Samples { axes: Vec<AxisSpec>, samples: Vec<Exact> },
    Builtin {
        name: Builtin,
        #[serde(default, skip_serializing_if = "BuiltinParams::is_empty")]
        params: BuiltinParams,
    },
}

/// A resolved instance.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    OneD(FunctionSpec),
    MultiD(TensorSamples),
}

impl Instance {
    pub fn d(&self) -> usize {
        match self {
            Instance::OneD(_) => 1,
            Instance::MultiD(t) => t.d(),
        }
    }
}

impl InstanceFile {
    pub fn from_function(f: &FunctionSpec) -> Self {
        InstanceFile::Samples {
            axes: vec![AxisSpec::of(f.grid())],
            samples: f.samples().iter().cloned().map(Exact).collect(),
        }
    }

    pub fn from_tensor(t: &TensorSamples) -> Result<Self, LftError> {
        let axes = (0..t.d()).map(|a| t.primal_axis(a).map(AxisSpec::of)).collect::<Result<_, _>>()?;
        Ok(InstanceFile::Samples { axes, samples: t.values().iter().cloned().map(Exact).collect() })
    }

    pub fn builtin(name: Builtin, params: BuiltinParams) -> Self {
        InstanceFile::Builtin { name, params }
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance documents always serialize");
        s.push('\n');
        s
    }

    /// Samples `f` on its grid. One axis gives a 1D instance except for `hypercube-z`.
    pub fn resolve(&self) -> Result<Instance, DocumentError> {
        match self {
            InstanceFile::Samples { axes, samples } => {
                let values: Vec<Rational> = samples.iter().map(|e| e.0.clone()).collect();
                if axes.len() == 1 {
                    return Ok(Instance::OneD(FunctionSpec::new(axes[0].grid()?, values)?));
                }
                let grids = axes.iter().map(AxisSpec::grid).collect::<Result<Vec<_>, _>>()?;
                Ok(Instance::MultiD(TensorSamples::new(TensorGrid::new(grids)?, values)?))
            }
            InstanceFile::Builtin { name, params } => resolve_builtin(*name, params),
        }
    }
}

fn resolve_builtin(name: Builtin, p: &BuiltinParams) -> Result<Instance, DocumentError> {
    Ok(match name {
        Builtin::QuadraticEx1 => Instance::OneD(quadratic_ex1(p.n.unwrap_or(5))),
        Builtin::PwlEx2 => Instance::OneD(ex2()),
        Builtin::PwlEx3 => Instance::OneD(ex3()),
        Builtin::RandomConvexQuadratic => Instance::OneD(random_convex_quadratic(p.seed.unwrap_or(0), p.n.unwrap_or(8))),
        Builtin::SeparableSum => Instance::MultiD(separable_sum(&quadratic_ex1(p.n.unwrap_or(4)), p.d.unwrap_or(2))),
        Builtin::HypercubeZ => {
            let z = p.z.as_deref().ok_or(DocumentError::MissingParam { builtin: "hypercube-z", param: "z" })?;
            let z = HiddenStringInstance::parse_bits(z)?;
            if p.d.is_some_and(|d| d != z.len()) {
                return Err(LftError::BadHiddenString.into());
            }
            let scale = p.scale.as_ref().map_or_else(|| int(1), |s| s.0.clone());
            Instance::MultiD(HiddenStringInstance::new(z, scale)?.samples()?)
        }
    })
}

/// Output format of a [`ResultFile`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Rational(Rational),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn render(&self, precision: Option<usize>) -> String {
        match self {
            Cell::Rational(r) => match precision {
                Some(d) => format_decimal(r, d),
                None => format_rational(r),
            },
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(t) => t.clone(),
        }
    }

    fn json(&self, precision: Option<usize>) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => Value::from(*b),
            other => Value::from(other.render(precision)),
        }
    }
}

impl From<Rational> for Cell {
    fn from(r: Rational) -> Self {
        Cell::Rational(r)
    }
}

impl From<&Rational> for Cell {
    fn from(r: &Rational) -> Self {
        Cell::Rational(r.clone())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, precision: Option<usize>) -> Result<String, DocumentError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.render(precision)))?;
        }
        let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("cells are UTF-8"))
    }
}

/// Output of one command: a one-line summary, scalar diagnostics and named tables.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultFile {
    pub command: String,
    pub summary: String,
    pub diagnostics: Vec<(String, Cell)>,
    pub tables: Vec<Table>,
}

impl ResultFile {
    pub fn new(command: &str) -> Self {
        Self { command: command.into(), summary: String::new(), diagnostics: Vec::new(), tables: Vec::new() }
    }

    pub fn diag(&mut self, key: &str, value: impl Into<Cell>) -> &mut Self {
        self.diagnostics.push((key.into(), value.into()));
        self
    }

    pub fn diagnostic(&self, key: &str) -> Option<&Cell> {
        self.diagnostics.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn to_json_value(&self, precision: Option<usize>) -> Value {
        let mut root = Map::new();
        root.insert("command".into(), self.command.clone().into());
        root.insert("summary".into(), self.summary.clone().into());
        if let Some(d) = precision {
            root.insert("decimal_precision".into(), d.into());
        }
        let diags: Map<String, Value> = self.diagnostics.iter().map(|(k, v)| (k.clone(), v.json(precision))).collect();
        root.insert("diagnostics".into(), diags.into());
        let tables: Map<String, Value> = self
            .tables
            .iter()
            .map(|t| {
                let mut m = Map::new();
                m.insert("columns".into(), t.columns.clone().into());
                let rows: Vec<Value> =
                    t.rows.iter().map(|r| Value::Array(r.iter().map(|c| c.json(precision)).collect())).collect();
                m.insert("rows".into(), rows.into());
                (t.name.clone(), Value::Object(m))
            })
            .collect();
        root.insert("tables".into(), tables.into());
        Value::Object(root)
    }

    /// JSON renders everything; CSV renders the first table only.
    pub fn render(&self, format: Format, precision: Option<usize>) -> Result<String, DocumentError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json_value(precision))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => match self.tables.first() {
                Some(t) => t.to_csv(precision),
                None => Ok(String::new()),
            },
        }
    }
}

impl fmt::Display for ResultFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::ex1;
    use crate::scalar::rat;

    #[test]
    fn instance_round_trip() {
        let doc = InstanceFile::from_function(&ex1());
        let text = doc.to_json();
        assert!(text.contains("\"1/2\"") && text.contains("\"kind\": \"samples\""));
        assert_eq!(InstanceFile::parse(&text).unwrap(), doc);
        assert_eq!(InstanceFile::parse(&text).unwrap().to_json(), text);
        let Instance::OneD(f) = doc.resolve().unwrap() else { panic!() };
        assert_eq!(f.samples(), ex1().samples());
    }

    #[test]
    fn builtin_round_trip() {
        let doc = InstanceFile::builtin(
            Builtin::HypercubeZ,
            BuiltinParams { z: Some("101".into()), scale: Some(Exact(int(8))), ..Default::default() },
        );
        let text = doc.to_json();
        assert!(text.contains("hypercube-z"));
        assert_eq!(InstanceFile::parse(&text).unwrap(), doc);
        let Instance::MultiD(t) = doc.resolve().unwrap() else { panic!() };
        assert_eq!(t.len(), 8);
        assert_eq!(t.value(&[1, 0, 1]), &int(0));
        assert_eq!(t.value(&[0, 1, 0]), &int(8));
    }

    #[test]
    fn decimal_and_integer_inputs() {
        let text = r#"{"kind":"samples","axes":[{"x0":"0","gamma_x":"0.25","n":3}],"samples":["1","0.5","1/2"]}"#;
        let Instance::OneD(f) = InstanceFile::parse(text).unwrap().resolve().unwrap() else { panic!() };
        assert_eq!(f.grid().gamma_x(), &rat(1, 4));
        assert_eq!(f.samples()[1], rat(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        assert!(InstanceFile::parse(r#"{"kind":"samples","axes":[],"samples":["x"]}"#).is_err());
        assert!(InstanceFile::parse(r#"{"kind":"nope"}"#).is_err());
        let missing = InstanceFile::builtin(Builtin::HypercubeZ, BuiltinParams::default());
        assert!(matches!(missing.resolve(), Err(DocumentError::MissingParam { .. })));
        let short = r#"{"kind":"samples","axes":[{"x0":"0","gamma_x":"1","n":3}],"samples":["1"]}"#;
        assert!(matches!(InstanceFile::parse(short).unwrap().resolve(), Err(DocumentError::Lft(_))));
    }

    #[test]
    fn multi_axis_samples() {
        let t = separable_sum(&quadratic_ex1(3), 2);
        let doc = InstanceFile::from_tensor(&t).unwrap();
        assert_eq!(doc.resolve().unwrap(), Instance::MultiD(t));
    }

    #[test]
    fn result_rendering() {
        let mut r = ResultFile::new("lft");
        r.summary = "ok".into();
        r.diag("w", 2usize).diag("p", rat(1, 3));
        let mut t = Table::new("conjugate", &["j", "fstar"]);
        t.push(vec![0usize.into(), rat(-3, 8).into()]);
        r.tables.push(t);
        let json = r.render(Format::Json, None).unwrap();
        assert!(json.contains("\"-3/8\"") && json.contains("\"w\": 2"));
        assert_eq!(r.render(Format::Csv, None).unwrap(), "j,fstar\n0,-3/8\n");
        assert_eq!(r.render(Format::Csv, Some(3)).unwrap(), "j,fstar\n0,-0.375\n");
        assert_eq!(r.render(Format::Json, None).unwrap(), json);
    }
}
