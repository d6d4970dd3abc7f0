//! CSV and JSON rendering of result rows.

use crate::config::Format;
use crate::CliError;
use serde::Serialize;

/// A result row with a fixed CSV header.
pub trait Row: Serialize {
    const HEADER: &'static [&'static str];
}

#[derive(Debug, Clone, Serialize)]
pub struct PaprRow {
    pub waveform: &'static str,
    pub bias_db: Option<f64>,
    pub m: usize,
    pub threshold_db: f64,
    pub ccdf: f64,
}

impl Row for PaprRow {
    const HEADER: &'static [&'static str] = &["waveform", "bias_db", "m", "threshold_db", "ccdf"];
}

#[derive(Debug, Clone, Serialize)]
pub struct BerRow {
    pub waveform: &'static str,
    pub bias_db: Option<f64>,
    pub m: usize,
    pub noise: &'static str,
    pub metric: &'static str,
    pub eb_db: f64,
    pub ber: f64,
    pub errors: u64,
    pub bits: u64,
}

impl Row for BerRow {
    const HEADER: &'static [&'static str] = &[
        "waveform", "bias_db", "m", "noise", "metric", "eb_db", "ber", "errors", "bits",
    ];
}

#[derive(Debug, Clone, Serialize)]
pub struct RequiredRow {
    pub waveform: &'static str,
    pub bias_db: Option<f64>,
    pub m: usize,
    pub noise: &'static str,
    pub metric: &'static str,
    pub normalized_bit_rate: f64,
    pub required_db: Option<f64>,
    pub ber: Option<f64>,
    pub symbols: usize,
    pub status: &'static str,
}

impl Row for RequiredRow {
    const HEADER: &'static [&'static str] = &[
        "waveform",
        "bias_db",
        "m",
        "noise",
        "metric",
        "normalized_bit_rate",
        "required_db",
        "ber",
        "symbols",
        "status",
    ];
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepOutRow {
    pub waveform: &'static str,
    pub m: usize,
    pub bias_db: Option<f64>,
    pub normalized_bit_rate: f64,
    pub required_db: Option<f64>,
    pub metric: &'static str,
    pub selected: bool,
    pub symbols: usize,
}

impl Row for SweepOutRow {
    const HEADER: &'static [&'static str] = &[
        "waveform",
        "m",
        "bias_db",
        "normalized_bit_rate",
        "required_db",
        "metric",
        "selected",
        "symbols",
    ];
}

pub fn render<R: Row>(rows: &[R], format: Format) -> Result<Vec<u8>, CliError> {
    let io = |e: &dyn std::fmt::Display| CliError::Config(format!("rendering output: {e}"));
    match format {
        Format::Json => {
            let mut buf = serde_json::to_vec_pretty(rows).map_err(|e| io(&e))?;
            buf.push(b'\n');
            Ok(buf)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(R::HEADER).map_err(|e| io(&e))?;
            for r in rows {
                w.serialize(r).map_err(|e| io(&e))?;
            }
            w.into_inner().map_err(|e| io(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows() -> Vec<RequiredRow> {
        vec![
            RequiredRow {
                waveform: "x2",
                bias_db: None,
                m: 4096,
                noise: "indep",
                metric: "elec_sigma",
                normalized_bit_rate: 4.0,
                required_db: Some(36.946391537635),
                ber: Some(1.0123e-3),
                symbols: 200,
                status: "converged",
            },
            RequiredRow {
                waveform: "x1",
                bias_db: None,
                m: 4096,
                noise: "mixed40",
                metric: "elec_xi",
                normalized_bit_rate: 4.0,
                required_db: None,
                ber: None,
                symbols: 200,
                status: "unreachable",
            },
        ]
    }

    #[test]
    fn csv_round_trips_and_blanks_unreachable() {
        let text = String::from_utf8(render(&rows(), Format::Csv).unwrap()).unwrap();
        assert!(!text.contains('\r'));
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        assert_eq!(rd.headers().unwrap(), RequiredRow::HEADER);
        let recs: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
        assert_eq!(recs[0][6].parse::<f64>().unwrap(), 36.946391537635);
        assert_eq!(recs[0][7].parse::<f64>().unwrap(), 1.0123e-3);
        assert_eq!(&recs[1][6], "");
    }

    #[test]
    fn json_uses_null() {
        let v: serde_json::Value =
            serde_json::from_slice(&render(&rows(), Format::Json).unwrap()).unwrap();
        assert!(v[1]["required_db"].is_null());
        assert_eq!(v[0]["required_db"].as_f64(), Some(36.946391537635));
    }

    #[test]
    fn empty_csv_keeps_header() {
        let text = String::from_utf8(render::<SweepOutRow>(&[], Format::Csv).unwrap()).unwrap();
        assert_eq!(
            text,
            "waveform,m,bias_db,normalized_bit_rate,required_db,metric,selected,symbols\n"
        );
    }
}
