//! CSV records and JSON summaries, each written atomically through a
//! sibling temporary file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::Algorithm;
use crate::error::{LabError, Result};
use crate::experiment::{ExperimentRecord, Status};
use crate::summary::SummaryStats;

pub const CSV_HEADER: [&str; 10] = [
    "experiment",
    "algorithm",
    "d",
    "T",
    "replication",
    "seed",
    "regret",
    "queries_used",
    "wall_ns",
    "status",
];

#[derive(Debug, Clone, Default)]
pub struct OutputPaths {
    pub records: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

/// Shortest decimal that parses back to the same `f64`; NaN is `nan`.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:?}")
    }
}

pub fn records_to_csv(records: &[ExperimentRecord]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| LabError::Format {
        path: PathBuf::from("<memory>"),
        message: e.to_string(),
    };
    w.write_record(CSV_HEADER).map_err(to_err)?;
    for r in records {
        w.write_record([
            r.experiment.clone(),
            r.algorithm.name().to_string(),
            r.d.to_string(),
            r.budget.to_string(),
            r.replication.to_string(),
            r.seed.to_string(),
            format_float(r.regret),
            r.queries_used.to_string(),
            r.wall_ns.to_string(),
            r.status.as_str().to_string(),
        ])
        .map_err(to_err)?;
    }
    w.into_inner().map_err(|e| LabError::Format {
        path: PathBuf::from("<memory>"),
        message: e.to_string(),
    })
}

pub fn summary_to_json(stats: &SummaryStats) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(&stats.rows).expect("summary rows serialize");
    out.push(b'\n');
    out
}

/// Writes whichever of the two files `paths` names.
pub fn write_outputs(records: &[ExperimentRecord], stats: Option<&SummaryStats>, paths: &OutputPaths) -> Result<()> {
    if let Some(p) = &paths.records {
        write_atomic(p, &records_to_csv(records)?)?;
    }
    if let (Some(p), Some(stats)) = (&paths.summary, stats) {
        write_atomic(p, &summary_to_json(stats))?;
    }
    Ok(())
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir).map_err(|e| LabError::io(&dir, e))?;
    let name = path
        .file_name()
        .ok_or_else(|| LabError::Format {
            path: path.to_path_buf(),
            message: "not a file path".into(),
        })?
        .to_string_lossy();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(LabError::io(path, e));
    }
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<ExperimentRecord>> {
    let bytes = fs::read(path).map_err(|e| LabError::io(path, e))?;
    parse_records(&bytes).map_err(|message| LabError::Format {
        path: path.to_path_buf(),
        message,
    })
}

pub fn parse_records(bytes: &[u8]) -> std::result::Result<Vec<ExperimentRecord>, String> {
    let mut rdr = csv::Reader::from_reader(bytes);
    let header = rdr.headers().map_err(|e| e.to_string())?;
    if header.iter().ne(CSV_HEADER) {
        return Err(format!("unexpected header {header:?}"));
    }
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| e.to_string())?;
        let field = |k: usize| row.get(k).unwrap_or("");
        let bad = |k: usize| format!("row {}: bad {} `{}`", i + 1, CSV_HEADER[k], field(k));
        let algorithm = match field(1) {
            "dependent" => Algorithm::Dependent,
            "universal" => Algorithm::Universal,
            "kl1d" => Algorithm::Kl1d,
            _ => return Err(bad(1)),
        };
        let status = match field(9) {
            "ok" => Status::Ok,
            "failed" => Status::Failed,
            _ => return Err(bad(9)),
        };
        let regret = match field(6) {
            "nan" => f64::NAN,
            v => v.parse().map_err(|_| bad(6))?,
        };
        out.push(ExperimentRecord {
            experiment: field(0).to_string(),
            algorithm,
            d: field(2).parse().map_err(|_| bad(2))?,
            budget: field(3).parse().map_err(|_| bad(3))?,
            replication: field(4).parse().map_err(|_| bad(4))?,
            seed: field(5).parse().map_err(|_| bad(5))?,
            regret,
            queries_used: field(7).parse().map_err(|_| bad(7))?,
            wall_ns: field(8).parse().map_err(|_| bad(8))?,
            status,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for v in [0.0, 1.0, 0.1, 1e-300, 4.2014e-5, 1.0 / 3.0, f64::MAX, f64::MIN_POSITIVE] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_float(f64::NAN), "nan");
        assert_eq!(format_float(0.1), "0.1");
    }
}
