//! Result tables: CSV with a fixed header, or one JSON object per line.

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use mmwave_lab::SweepRow;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

pub const COLUMNS: [&str; 8] = [
    "sweep_value",
    "mean_capacity_bps_hz",
    "ci_low",
    "ci_high",
    "mean_inv_condition",
    "siso_mean_bps_hz",
    "k_per_m",
    "snr_db_or_power_mode",
];

/// One output row. `snr_db_or_power_mode` holds the SNR in dB for
/// constant-SNR runs and the literal `constant_power` otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub sweep_value: f64,
    pub mean_capacity_bps_hz: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_inv_condition: f64,
    pub siso_mean_bps_hz: f64,
    pub k_per_m: f64,
    pub snr_db_or_power_mode: String,
}

impl ResultRow {
    pub fn from_sweep(row: &SweepRow, budget_label: &str) -> Self {
        Self {
            sweep_value: row.value,
            mean_capacity_bps_hz: row.stats.mean,
            ci_low: row.stats.ci_low,
            ci_high: row.stats.ci_high,
            mean_inv_condition: row.stats.mean_inverse_condition,
            siso_mean_bps_hz: row.stats.siso_mean,
            k_per_m: row.absorption,
            snr_db_or_power_mode: budget_label.to_string(),
        }
    }
}

/// Shortest string that parses back to the same `f64`; plain decimal in
/// the everyday range, exponent notation outside it.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn render(rows: &[ResultRow], format: OutputFormat) -> Vec<u8> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(COLUMNS).expect("in-memory write");
            for r in rows {
                let numbers = [
                    r.sweep_value,
                    r.mean_capacity_bps_hz,
                    r.ci_low,
                    r.ci_high,
                    r.mean_inv_condition,
                    r.siso_mean_bps_hz,
                    r.k_per_m,
                ];
                let mut record: Vec<String> = numbers.iter().map(|&x| format_number(x)).collect();
                record.push(r.snr_db_or_power_mode.clone());
                w.write_record(&record).expect("in-memory write");
            }
            w.into_inner().expect("in-memory flush")
        }
        OutputFormat::Json => {
            let mut out = Vec::new();
            for r in rows {
                serde_json::to_writer(&mut out, r).expect("rows serialize");
                out.push(b'\n');
            }
            out
        }
    }
}

/// Reads a table written by [`render`].
pub fn read_results<R: Read>(source: R, format: OutputFormat) -> io::Result<Vec<ResultRow>> {
    match format {
        OutputFormat::Csv => {
            let mut reader = csv::Reader::from_reader(source);
            let headers = reader.headers().map_err(io::Error::other)?.clone();
            if headers.iter().ne(COLUMNS) {
                return Err(io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("unexpected header {:?}", headers.iter().collect::<Vec<_>>()),
                ));
            }
            reader.deserialize().map(|r| r.map_err(io::Error::other)).collect()
        }
        OutputFormat::Json => {
            let mut text = String::new();
            let mut source = source;
            source.read_to_string(&mut text)?;
            text.lines()
                .filter(|l| !l.trim().is_empty())
                .map(|l| serde_json::from_str(l).map_err(io::Error::other))
                .collect()
        }
    }
}

/// Writes `bytes` to a temporary file beside `path` and renames it into
/// place, so readers never see a partial table.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let fail = |source: io::Error| CliError::Output {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(fail)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(bytes).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: f64) -> ResultRow {
        ResultRow {
            sweep_value: v,
            mean_capacity_bps_hz: 6.658211482751795,
            ci_low: 6.5,
            ci_high: 6.75,
            mean_inv_condition: 1.0 / 3.0,
            siso_mean_bps_hz: 6.658211482751795,
            k_per_m: 1e-6,
            snr_db_or_power_mode: "20".into(),
        }
    }

    #[test]
    fn numbers_round_trip() {
        for x in [
            0.0,
            -0.0,
            1.0,
            20.0,
            1e-6,
            1.5e-300,
            6e10,
            1e16,
            1.0 / 3.0,
            -2.7e-2,
            f64::MAX,
            f64::MIN_POSITIVE,
        ] {
            let s = format_number(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(format_number(60e9), "60000000000");
        assert_eq!(format_number(1e-6), "1e-6");
        assert_eq!(format_number(20.0), "20");
    }

    #[test]
    fn csv_round_trip() {
        let rows = vec![row(50e9), row(50.5e9)];
        let bytes = render(&rows, OutputFormat::Csv);
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(text.starts_with(&(COLUMNS.join(",") + "\n")));
        assert_eq!(read_results(&bytes[..], OutputFormat::Csv).unwrap(), rows);
    }

    #[test]
    fn json_round_trip() {
        let rows = vec![row(1.0), row(2.0)];
        let bytes = render(&rows, OutputFormat::Json);
        assert_eq!(bytes.iter().filter(|&&b| b == b'\n').count(), 2);
        assert_eq!(read_results(&bytes[..], OutputFormat::Json).unwrap(), rows);
    }

    #[test]
    fn rejects_foreign_header() {
        let text = "a,b\n1,2\n";
        assert!(read_results(text.as_bytes(), OutputFormat::Csv).is_err());
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested").join("out.csv");
        write_atomic(&path, b"first").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"second");
        assert_eq!(fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }
}
