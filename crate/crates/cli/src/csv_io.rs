//! CSV ingestion. Headers must match exactly; every value is checked and
//! bad rows are reported with their 1-based data-row number.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use bachelier_core::esg::EsgRecord;
use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Relative tolerance on step sizes for a series to count as uniform.
pub const UNIFORM_SPACING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Schema {
    Prices,
    EsgRecords,
    FactorChanges,
}

impl Schema {
    pub fn header(self) -> &'static [&'static str] {
        match self {
            Schema::Prices => &["t", "value"],
            Schema::EsgRecords => &["date", "price", "company_score", "benchmark_score"],
            Schema::FactorChanges => &["t", "change"],
        }
    }
}

/// Observed prices on strictly increasing times (fractional years).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PriceSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl PriceSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> bachelier_core::Result<Self> {
        use bachelier_core::Error;
        if times.len() != values.len() {
            return Err(Error::Input(format!(
                "{} times for {} values",
                times.len(),
                values.len()
            )));
        }
        if times.len() < 2 {
            return Err(Error::Input("a price series needs at least 2 points".into()));
        }
        if let Some(i) = times.iter().chain(&values).position(|x| !x.is_finite()) {
            return Err(Error::Input(format!("non-finite entry at position {i}")));
        }
        if let Some(i) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::Input(format!(
                "times not strictly increasing at index {}",
                i + 1
            )));
        }
        Ok(Self { times, values })
    }

    /// The common step size, or an error if steps differ by more than
    /// [`UNIFORM_SPACING_TOL`] relative.
    pub fn uniform_step(&self) -> bachelier_core::Result<f64> {
        uniform_step(&self.times)
    }

    pub fn changes(&self) -> Vec<f64> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

pub(crate) fn uniform_step(times: &[f64]) -> bachelier_core::Result<f64> {
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    for (i, w) in times.windows(2).enumerate() {
        if ((w[1] - w[0]) - dt).abs() > UNIFORM_SPACING_TOL * dt {
            return Err(bachelier_core::Error::Input(format!(
                "non-uniform spacing at step {}: {} vs mean step {dt}",
                i + 1,
                w[1] - w[0]
            )));
        }
    }
    Ok(dt)
}

/// Factor price changes, one per row, on strictly increasing times.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorChanges {
    pub times: Vec<f64>,
    pub changes: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Loaded {
    Prices(PriceSeries),
    EsgRecords(Vec<EsgRecord>),
    FactorChanges(FactorChanges),
}

/// ACT/365 fixed year fraction between two dates.
pub fn year_fraction(from: NaiveDate, to: NaiveDate) -> f64 {
    (to - from).num_days() as f64 / 365.0
}

pub fn load_csv(path: &Path, schema: Schema) -> Result<Loaded> {
    let schema_err = |message: String| CliError::Schema {
        path: path.to_path_buf(),
        message,
    };
    let file = File::open(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let header = reader
        .headers()
        .map_err(|e| schema_err(e.to_string()))?
        .clone();
    let expected = schema.header();
    if header.is_empty() || header.iter().ne(expected.iter().copied()) {
        return Err(schema_err(format!(
            "expected header \"{}\", found \"{}\"",
            expected.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }

    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let row = i + 1;
        let row_err = |message: String| CliError::Row {
            path: path.to_path_buf(),
            row,
            message,
        };
        let rec = rec.map_err(|e| row_err(e.to_string()))?;
        if rec.len() != expected.len() {
            return Err(row_err(format!(
                "expected {} fields, found {}",
                expected.len(),
                rec.len()
            )));
        }
        rows.push((row, rec));
    }
    if rows.is_empty() {
        return Err(schema_err("no data rows".into()));
    }

    let number = |row: usize, field: &str, text: &str| -> Result<f64> {
        let x: f64 = text.parse().map_err(|_| CliError::Row {
            path: path.to_path_buf(),
            row,
            message: format!("{field}: cannot parse \"{text}\" as a number"),
        })?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(CliError::Row {
                path: path.to_path_buf(),
                row,
                message: format!("{field}: non-finite value {text}"),
            })
        }
    };

    let mut times = Vec::with_capacity(rows.len());
    let mut values = Vec::with_capacity(rows.len());
    let mut records = Vec::new();
    let mut first_date = None;
    for (row, rec) in &rows {
        let t = if schema == Schema::EsgRecords {
            let date = NaiveDate::parse_from_str(&rec[0], "%Y-%m-%d").map_err(|e| CliError::Row {
                path: path.to_path_buf(),
                row: *row,
                message: format!("date: \"{}\": {e}", &rec[0]),
            })?;
            year_fraction(*first_date.get_or_insert(date), date)
        } else {
            number(*row, expected[0], &rec[0])?
        };
        if let Some(&prev) = times.last() {
            if t <= prev {
                return Err(CliError::Row {
                    path: path.to_path_buf(),
                    row: *row,
                    message: format!("timestamps not strictly increasing ({t} after {prev})"),
                });
            }
        }
        times.push(t);
        if schema == Schema::EsgRecords {
            let record = EsgRecord {
                time: t,
                stock_price: number(*row, "price", &rec[1])?,
                company_score: number(*row, "company_score", &rec[2])?,
                benchmark_score: number(*row, "benchmark_score", &rec[3])?,
            };
            record.validate().map_err(|e| CliError::Row {
                path: path.to_path_buf(),
                row: *row,
                message: e.to_string(),
            })?;
            records.push(record);
        } else {
            values.push(number(*row, expected[1], &rec[1])?);
        }
    }

    Ok(match schema {
        Schema::Prices => Loaded::Prices(
            PriceSeries::new(times, values).map_err(|e| schema_err(e.to_string()))?,
        ),
        Schema::EsgRecords => Loaded::EsgRecords(records),
        Schema::FactorChanges => Loaded::FactorChanges(FactorChanges {
            times,
            changes: values,
        }),
    })
}

pub fn load_prices(path: &Path) -> Result<PriceSeries> {
    match load_csv(path, Schema::Prices)? {
        Loaded::Prices(p) => Ok(p),
        _ => unreachable!(),
    }
}

pub fn load_esg_records(path: &Path) -> Result<Vec<EsgRecord>> {
    match load_csv(path, Schema::EsgRecords)? {
        Loaded::EsgRecords(r) => Ok(r),
        _ => unreachable!(),
    }
}

pub fn load_factor_changes(path: &Path) -> Result<FactorChanges> {
    match load_csv(path, Schema::FactorChanges)? {
        Loaded::FactorChanges(f) => Ok(f),
        _ => unreachable!(),
    }
}

/// Writes a series in the `prices` schema. Values use the shortest
/// representation that parses back to the same `f64`.
pub fn write_prices(path: &Path, series: &PriceSeries) -> Result<()> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = std::io::BufWriter::new(File::create(path).map_err(io)?);
    writeln!(out, "{}", Schema::Prices.header().join(",")).map_err(io)?;
    for (t, v) in series.times.iter().zip(&series.values) {
        writeln!(out, "{t},{v}").map_err(io)?;
    }
    out.flush().map_err(io)
}
