use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use szne::mitigation::{Dataset, EntryTag, MitigationRun, TrainingRecord};
use szne::surrogates::Surrogate;

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn write_lines<T: Serialize>(path: &Path, items: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    for item in items {
        serde_json::to_writer(&mut w, &item)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

fn read_lines<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).with_context(|| format!("{}:{}", path.display(), i + 1))?);
    }
    Ok(out)
}

/// One JSON record per line, all levels in one file.
pub fn write_datasets(path: &Path, datasets: &[Dataset]) -> Result<()> {
    write_lines(path, datasets.iter().flat_map(|d| d.records.iter()))
}

pub fn read_datasets(path: &Path) -> Result<Vec<Dataset>> {
    let records: Vec<TrainingRecord> = read_lines(path)?;
    if records.is_empty() {
        bail!("{} holds no training records", path.display());
    }
    let mut by_level: BTreeMap<u32, Vec<TrainingRecord>> = BTreeMap::new();
    for r in records {
        by_level.entry(r.lambda).or_default().push(r);
    }
    Ok(by_level
        .into_iter()
        .map(|(level, records)| Dataset { level, records })
        .collect())
}

pub fn write_surrogates(path: &Path, surrogates: &[Surrogate]) -> Result<()> {
    write_lines(path, surrogates)
}

pub fn read_surrogates(path: &Path) -> Result<Vec<Surrogate>> {
    read_lines(path)
}

fn fmt_x(x: &[f64]) -> String {
    x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Result rows: input, per-level values and tags, estimate, ideal, residual.
pub fn write_runs(path: &Path, runs: &[MitigationRun]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    let levels = runs.first().map_or(&[][..], |r| r.levels.as_slice());
    let mut header = vec!["x".to_string()];
    for l in levels {
        header.push(format!("z{l}"));
        header.push(format!("tag{l}"));
    }
    header.extend(["estimate", "ideal", "residual", "cost"].map(String::from));
    w.write_record(&header)?;
    for r in runs {
        let mut row = vec![fmt_x(&r.x)];
        for e in &r.z {
            row.push(e.value.to_string());
            row.push(
                match e.tag {
                    EntryTag::Measured => "measured",
                    EntryTag::Predicted => "predicted",
                }
                .to_string(),
            );
        }
        row.extend([r.estimate.to_string(), opt(r.ideal), opt(r.residual), r.cost.to_string()]);
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// The `residual` column of a results CSV; rows without one are an error.
pub fn read_residuals(path: &Path) -> Result<Vec<f64>> {
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let col = rdr
        .headers()?
        .iter()
        .position(|h| h == "residual")
        .with_context(|| format!("{} has no residual column", path.display()))?;
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let cell = rec.get(col).unwrap_or("");
        if cell.is_empty() {
            bail!("{} row {}: cannot compute residuals without an ideal reference", path.display(), i + 1);
        }
        out.push(cell.parse()?);
    }
    Ok(out)
}

pub fn write_table(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}
