//! Tables and figure datasets with their CSV and JSON encodings.
//!
//! CSV: comma separated, header row, LF line endings, reals as `{:.16e}`
//! (17 significant digits, so every f64 reads back bit-exactly).

use serde::{Deserialize, Serialize};

use noncentral::thermo::ThermoPoint;

use crate::manifest::RunManifest;
use crate::CliError;

pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::io("buffering csv", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn csv_io(e: csv::Error) -> CliError {
    CliError::io("writing csv", std::io::Error::other(e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => format_real(*x),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(i64::from(x))
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

/// Heterogeneous table (spectrum and partition output).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv_writer();
        w.write_record(&self.columns).map_err(csv_io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(csv_io)?;
        }
        finish(w)
    }

    pub fn to_json(&self, manifest: &RunManifest) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            manifest: &'a RunManifest,
            columns: &'a [String],
            rows: &'a [Vec<Cell>],
        }
        let doc = Doc {
            manifest,
            columns: &self.columns,
            rows: &self.rows,
        };
        serde_json::to_string_pretty(&doc).expect("table serializes") + "\n"
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FigureId {
    #[serde(rename = "f1")]
    F1FreeEnergy,
    #[serde(rename = "f2")]
    F2MeanEnergy,
    #[serde(rename = "f3")]
    F3Entropy,
    #[serde(rename = "f4")]
    F4SpecificHeat,
    /// All four functions for the 1D ladder.
    #[serde(rename = "f5")]
    F5OneDPanel,
}

impl FigureId {
    pub fn columns(&self) -> &'static [&'static str] {
        match self {
            FigureId::F1FreeEnergy => &["alpha_bar", "f_bar"],
            FigureId::F2MeanEnergy => &["alpha_bar", "u_bar"],
            FigureId::F3Entropy => &["alpha_bar", "s_bar"],
            FigureId::F4SpecificHeat => &["alpha_bar", "c_bar"],
            FigureId::F5OneDPanel => &["alpha_bar", "f_bar", "u_bar", "s_bar", "c_bar"],
        }
    }
}

/// Columns of an unlabelled sweep.
pub const SWEEP_COLUMNS: [&str; 6] = ["alpha_bar", "z", "f_bar", "u_bar", "s_bar", "c_bar"];

fn column_value(p: &ThermoPoint, name: &str) -> f64 {
    match name {
        "alpha_bar" => p.alpha_bar,
        "z" => p.z,
        "f_bar" => p.f_bar,
        "u_bar" => p.u_bar,
        "s_bar" => p.s_bar,
        "c_bar" => p.c_bar,
        other => unreachable!("unknown column {other}"),
    }
}

/// Plot-ready real-valued columns, rows sorted by ᾱ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureDataset {
    pub figure: Option<FigureId>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl FigureDataset {
    pub fn from_points(figure: Option<FigureId>, points: &[ThermoPoint]) -> Self {
        let names: &[&str] = match figure {
            Some(f) => f.columns(),
            None => &SWEEP_COLUMNS,
        };
        Self {
            figure,
            columns: names.iter().map(|s| s.to_string()).collect(),
            rows: points
                .iter()
                .map(|p| names.iter().map(|n| column_value(p, n)).collect())
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let want = match self.figure {
            Some(f) => f.columns().len(),
            None => self.columns.len(),
        };
        if self.columns.len() != want {
            return Err(CliError::Usage(format!(
                "figure {:?} needs {want} columns, got {}",
                self.figure,
                self.columns.len()
            )));
        }
        if let Some(bad) = self.rows.iter().position(|r| r.len() != want) {
            return Err(CliError::Usage(format!("row {bad} does not have {want} values")));
        }
        if self.rows.windows(2).any(|w| !(w[1][0] > w[0][0])) {
            return Err(CliError::Usage("rows are not sorted by alpha_bar".into()));
        }
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv_writer();
        w.write_record(&self.columns).map_err(csv_io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|x| format_real(*x))).map_err(csv_io)?;
        }
        finish(w)
    }

    pub fn from_csv(text: &str, figure: Option<FigureId>) -> Result<Self, CliError> {
        let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let bad = |e: csv::Error| CliError::Usage(format!("malformed csv: {e}"));
        let columns = r.headers().map_err(bad)?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for record in r.records() {
            let record = record.map_err(bad)?;
            let row = record
                .iter()
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|e| CliError::Usage(format!("bad number {s:?}: {e}")))
                })
                .collect::<Result<Vec<f64>, _>>()?;
            rows.push(row);
        }
        let ds = Self {
            figure,
            columns,
            rows,
        };
        ds.validate()?;
        Ok(ds)
    }

    pub fn to_json(&self, manifest: &RunManifest) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            manifest: &'a RunManifest,
            #[serde(flatten)]
            dataset: &'a FigureDataset,
        }
        serde_json::to_string_pretty(&Doc {
            manifest,
            dataset: self,
        })
        .expect("dataset serializes")
            + "\n"
    }
}
