//! On-disk formats: intersection-data JSON, measure JSON, the walk CSV and
//! the audit CSV.
//!
//! Data file:
//! ```json
//! { "N": [[2, 1], [0, 3]], "row_mult": [1, 2], "col_mult": [1, 1] }
//! ```
//! (`row_mult`/`col_mult` default to all ones.)
//!
//! Measure file:
//! ```json
//! { "atoms": [ { "word": "a", "prob": 0.5 }, { "word": "B", "prob": 0.5 } ] }
//! ```
//!
//! Walk CSV columns: `traj,n,word_norm,cyclic_norm,class,log_lambda,displacement`
//! with `class` one of `identity`, `conj_a`, `conj_b`, `conj_ab`,
//! `pseudo_anosov`, and an empty `log_lambda` for non-pseudo-Anosov steps.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use thurston_core::bounds::BoundReport;
use thurston_core::construction::IntersectionData;
use thurston_core::walk::{MeasureEntry, MeasureSpec, StepRecord, TrajectoryRun};
use thurston_core::words::ElementClass;

use crate::errors::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DataFile {
    #[serde(rename = "N")]
    n: Vec<Vec<u64>>,
    #[serde(default)]
    row_mult: Option<Vec<u64>>,
    #[serde(default)]
    col_mult: Option<Vec<u64>>,
}

/// Loads and validates an intersection-data file.
pub fn load_data(path: &Path) -> Result<IntersectionData, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let file: DataFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let rows = file.n.len();
    let cols = file.n.first().map_or(0, Vec::len);
    let row_mult = file.row_mult.unwrap_or_else(|| vec![1; rows]);
    let col_mult = file.col_mult.unwrap_or_else(|| vec![1; cols]);
    Ok(IntersectionData::with_multiplicities(
        file.n, row_mult, col_mult,
    )?)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureFile {
    atoms: Vec<MeasureAtom>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureAtom {
    word: String,
    prob: f64,
}

/// Loads a measure file into the unvalidated spec form.
pub fn load_measure(path: &Path) -> Result<MeasureSpec, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let file: MeasureFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(MeasureSpec {
        entries: file
            .atoms
            .into_iter()
            .map(|a| MeasureEntry {
                word: a.word,
                prob: a.prob,
            })
            .collect(),
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct WalkRow {
    traj: u64,
    n: u64,
    word_norm: u64,
    cyclic_norm: u64,
    class: String,
    log_lambda: Option<f64>,
    displacement: f64,
}

fn class_from_tag(tag: &str) -> Option<ElementClass> {
    [
        ElementClass::Identity,
        ElementClass::ConjPowerA,
        ElementClass::ConjPowerB,
        ElementClass::ConjPowerAB,
        ElementClass::PseudoAnosov,
    ]
    .into_iter()
    .find(|c| c.tag() == tag)
}

/// Writes trajectory records as the walk CSV.
pub fn write_walk_csv(path: &Path, runs: &[TrajectoryRun]) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    for run in runs {
        for record in &run.records {
            writer.serialize(WalkRow {
                traj: run.traj,
                n: record.n,
                word_norm: record.word_norm,
                cyclic_norm: record.cyclic_norm,
                class: record.class.tag().to_string(),
                log_lambda: record.log_lambda,
                displacement: record.displacement,
            })?;
        }
    }
    writer.flush()?;
    Ok(())
}

/// Reads a walk CSV back into trajectory runs (grouped by `traj`, rows kept
/// in file order within each trajectory).
///
/// The flag for a numerically unreadable stretch factor is not a CSV
/// column; such steps were written as `log_lambda = 0`, so a
/// pseudo-Anosov row with a stored 0 is marked flagged on re-read.
pub fn read_walk_csv(path: &Path) -> Result<Vec<TrajectoryRun>, CliError> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let mut by_traj: BTreeMap<u64, Vec<StepRecord>> = BTreeMap::new();
    for row in reader.deserialize() {
        let row: WalkRow = row?;
        let class = class_from_tag(&row.class).ok_or_else(|| {
            CliError::Input(format!("unknown class tag {:?} in {}", row.class, path.display()))
        })?;
        let flagged = class == ElementClass::PseudoAnosov && row.log_lambda == Some(0.0);
        by_traj.entry(row.traj).or_default().push(StepRecord {
            n: row.n,
            word_norm: row.word_norm,
            cyclic_norm: row.cyclic_norm,
            class,
            log_lambda: row.log_lambda,
            stretch_flagged_zero: flagged,
            displacement: row.displacement,
        });
    }
    if by_traj.is_empty() {
        return Err(CliError::Input(format!(
            "{}: no walk records",
            path.display()
        )));
    }
    Ok(by_traj
        .into_iter()
        .map(|(traj, records)| TrajectoryRun { traj, records })
        .collect())
}

#[derive(Debug, Serialize)]
struct AuditRow<'a> {
    word: &'a str,
    cyclic_norm: u64,
    log_lambda: f64,
    lower: Option<f64>,
    upper: f64,
    pass_lower: bool,
    pass_upper: bool,
}

/// Writes audit reports as CSV
/// (`word,cyclic_norm,log_lambda,lower,upper,pass_lower,pass_upper`).
pub fn write_audit_csv(path: &Path, reports: &[BoundReport]) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    for report in reports {
        let word = report.word.to_text();
        writer.serialize(AuditRow {
            word: &word,
            cyclic_norm: report.cyclic_norm,
            log_lambda: report.log_lambda,
            lower: report.lower,
            upper: report.upper,
            pass_lower: report.pass_lower,
            pass_upper: report.pass_upper,
        })?;
    }
    writer.flush()?;
    Ok(())
}
