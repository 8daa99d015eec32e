//! JSON reports with 17-significant-digit floats and CSV profiles.

use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::config::RunConfig;
use crate::error::{GeoError, Result};
use crate::rigidity::RadialProfile;

/// Pretty JSON formatter printing every float as `{:.16e}`.
pub struct FixedFloatFormatter<'a>(PrettyFormatter<'a>);

impl Default for FixedFloatFormatter<'_> {
    fn default() -> Self {
        Self(PrettyFormatter::with_indent(b"  "))
    }
}

impl Formatter for FixedFloatFormatter<'_> {
    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", format_float(value))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// 17 significant digits in scientific notation.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloatFormatter::default());
    value
        .serialize(&mut ser)
        .map_err(|e| GeoError::Io(io::Error::other(e)))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    HypothesisViolated,
    ConfigError,
    NumericalFailure,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Pass => 0,
            Self::HypothesisViolated => 1,
            Self::ConfigError => 2,
            Self::NumericalFailure => 3,
        }
    }
}

/// Report envelope shared by all commands.
#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub status: Status,
    pub exit_code: i32,
    pub findings: Vec<String>,
    pub config: RunConfig,
    pub result: Option<T>,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &str, status: Status, findings: Vec<String>, config: RunConfig, result: Option<T>) -> Self {
        Self {
            tool: "staticgeo",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            status,
            exit_code: status.exit_code(),
            findings,
            config,
            result,
        }
    }
}

/// Writes `s,psi,closed_form` rows.
pub fn write_profile_csv<W: Write>(profile: &RadialProfile, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io_err = |e: csv::Error| GeoError::Io(io::Error::other(e));
    w.write_record(["s", "psi", "closed_form"]).map_err(io_err)?;
    for (s, p, c) in profile.rows() {
        w.write_record([format_float(s), format_float(p), format_float(c)])
            .map_err(io_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_profile_file(profile: &RadialProfile, path: &Path) -> Result<()> {
    write_profile_csv(profile, std::fs::File::create(path)?)
}
