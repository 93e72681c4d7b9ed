//! CSV signals and JSON reports.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use qpfb::{RadialGrid, Signal};
use serde::{Serialize, Serializer};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{CliError, CliResult};

/// Decimal with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// A float that serializes as `null` when it is not finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_none()
        }
    }
}

/// Pretty JSON with every float written by [`fmt17`].
struct Digits17(PrettyFormatter<'static>);

impl Formatter for Digits17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        writer.write_all(fmt17(value).as_bytes())
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_object_value(w)
    }
}

fn parse_error(path: &Path, err: &csv::Error) -> CliError {
    let line = err.position().map_or(0, |p| p.line());
    let message = match err.kind() {
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => {
            format!("expected {expected_len} fields, found {len}")
        }
        _ => err.to_string(),
    };
    CliError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    }
}

/// Reads a CSV with header `s,re,im` (or `t,re,im`) into a sampled signal.
pub fn read_signal(path: &Path) -> CliResult<Signal> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let header = reader.headers().map_err(|e| parse_error(path, &e))?.clone();
    let names: Vec<&str> = header.iter().collect();
    if !(names == ["s", "re", "im"] || names == ["t", "re", "im"]) {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: format!("header must be `s,re,im`, found `{}`", names.join(",")),
        });
    }

    let mut points = Vec::new();
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_error(path, &e))?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize, name: &str| -> CliResult<f64> {
            let raw = &record[i];
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("{name} `{raw}` is not a finite number"),
                })
        };
        let s = field(0, names[0])?;
        let (re, im) = (field(1, "re")?, field(2, "im")?);
        if let Some(&prev) = points.last() {
            if s <= prev {
                return Err(CliError::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("{} = {s} does not increase", names[0]),
                });
            }
        }
        points.push(s);
        values.push(Complex64::new(re, im));
    }
    let radius = *points.last().ok_or_else(|| CliError::Parse {
        path: path.to_path_buf(),
        line: 1,
        message: "no samples".into(),
    })?;
    let grid = RadialGrid::new(points, radius)?;
    Ok(Signal::new(grid, values)?)
}

/// Writes `column,re,im` rows.
pub fn write_samples(
    out: &mut dyn Write,
    column: &str,
    grid: &RadialGrid,
    values: &[Complex64],
) -> std::io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record([column, "re", "im"])?;
    for (&x, v) in grid.points().iter().zip(values) {
        writer.write_record([fmt17(x), fmt17(v.re), fmt17(v.im)])?;
    }
    writer.flush()
}

/// Opens `--out` or falls back to stdout.
pub fn sink(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    match out {
        Some(path) => Ok(Box::new(
            File::create(path).map_err(|e| CliError::io(path, e))?,
        )),
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

/// `<out>.json` next to a CSV output.
pub fn metadata_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> std::io::Result<()> {
    let mut ser =
        serde_json::Serializer::with_formatter(&mut *out, Digits17(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    writeln!(out)
}
