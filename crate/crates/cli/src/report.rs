use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Result;
use quatcomp::imaging::write_atomic;
use serde::Serialize;

use crate::run::Row;

pub fn csv_bytes(rows: &[Row]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    Ok(w.into_inner()?)
}

pub fn write_csv(path: &Path, rows: &[Row]) -> Result<()> {
    write_atomic(path, &csv_bytes(rows)?)?;
    Ok(())
}

/// Non-finite values (an infinite PSNR, a missing SSIM) are written as `null`.
pub fn write_json_rows(path: &Path, rows: &[Row]) -> Result<()> {
    write_atomic(path, serde_json::to_string_pretty(rows)?.as_bytes())?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct MethodSummary {
    pub method: String,
    pub runs: usize,
    pub converged: usize,
    pub mean_wall_seconds: f64,
    pub mean_psnr: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub runs: usize,
    pub methods: Vec<MethodSummary>,
}

pub fn summarize(rows: &[Row]) -> Summary {
    let mut by: BTreeMap<&str, Vec<&Row>> = BTreeMap::new();
    for row in rows {
        by.entry(&row.method).or_default().push(row);
    }
    let methods = by
        .into_iter()
        .map(|(method, rs)| {
            let n = rs.len() as f64;
            let finite: Vec<f64> = rs.iter().map(|r| r.psnr).filter(|p| p.is_finite()).collect();
            MethodSummary {
                method: method.to_string(),
                runs: rs.len(),
                converged: rs.iter().filter(|r| r.converged).count(),
                mean_wall_seconds: rs.iter().map(|r| r.wall_seconds).sum::<f64>() / n,
                mean_psnr: (!finite.is_empty()).then(|| finite.iter().sum::<f64>() / finite.len() as f64),
            }
        })
        .collect();
    Summary { runs: rows.len(), methods }
}

pub fn write_summary(path: &Path, summary: &Summary) -> Result<()> {
    write_atomic(path, serde_json::to_string_pretty(summary)?.as_bytes())?;
    Ok(())
}
