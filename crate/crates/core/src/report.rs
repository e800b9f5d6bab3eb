//! JSON and CSV serialization of campaign reports.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::campaign::{CampaignReport, REPORT_FORMAT};
use crate::error::{Error, Result};

pub const CSV_COLUMNS: [&str; 10] = ["check", "n", "N", "f", "g", "t", "pass", "fail", "worst_margin", "clamps"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Config(format!("unknown format `{other}` (json or csv)"))),
        }
    }
}

pub fn to_json(report: &CampaignReport) -> Result<String> {
    serde_json::to_string_pretty(report)
        .map(|s| s + "\n")
        .map_err(|e| Error::Io(e.to_string()))
}

pub fn from_json(json: &str) -> Result<CampaignReport> {
    let report: CampaignReport =
        serde_json::from_str(json).map_err(|e| Error::Config(format!("malformed report: {e}")))?;
    if report.format != REPORT_FORMAT {
        return Err(Error::Config(format!(
            "report format `{}`, expected `{REPORT_FORMAT}`",
            report.format
        )));
    }
    Ok(report)
}

/// One row per (check, n, N, f, g, t) cell.
pub fn to_csv(report: &CampaignReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_COLUMNS).map_err(csv_err)?;
    let opt = |v: &Option<String>| v.clone().unwrap_or_default();
    for r in &report.rows {
        w.write_record([
            r.check.to_string(),
            r.n.to_string(),
            r.num_obs.to_string(),
            opt(&r.f),
            opt(&r.g),
            r.t.map(|t| t.to_string()).unwrap_or_default(),
            r.pass.to_string(),
            r.fail.to_string(),
            r.worst_margin.map(|m| format!("{m:e}")).unwrap_or_default(),
            r.clamps.to_string(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

pub fn render(report: &CampaignReport, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report),
    }
}

/// Writes to `path`, or to stdout when `path` is None.
pub fn emit_report(report: &CampaignReport, format: Format, path: Option<&Path>) -> Result<()> {
    let text = render(report, format)?;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::campaign::{run_campaign, CampaignConfig};

    fn tiny(instances: usize) -> CampaignReport {
        let cfg = CampaignConfig {
            dims: vec![2],
            num_obs: vec![1, 2],
            instances_per_cell: instances,
            t_grid: vec![0.5],
            ..CampaignConfig::default()
        };
        run_campaign(&cfg, Some(1)).unwrap()
    }

    #[test]
    fn json_round_trip() {
        let r = tiny(2);
        assert_eq!(from_json(&to_json(&r).unwrap()).unwrap(), r);
        let empty = tiny(0);
        let back = from_json(&to_json(&empty).unwrap()).unwrap();
        assert_eq!(back.instances, 0);
        assert!(back.totals.values().all(|t| t.pass + t.fail + t.skipped == 0));
    }

    #[test]
    fn csv_has_one_row_per_cell() {
        let r = tiny(1);
        let text = to_csv(&r).unwrap();
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), CSV_COLUMNS);
        assert_eq!(rd.records().count(), r.rows.len());
    }

    #[test]
    fn rejects_other_formats() {
        let json = to_json(&tiny(0)).unwrap().replace(REPORT_FORMAT, "qfi-report/0");
        assert!(from_json(&json).is_err());
        assert!("xml".parse::<Format>().is_err());
    }
}
