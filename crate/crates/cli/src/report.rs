//! Statistics reports over column-aligned sample CSVs.

use std::path::Path;

use regen_core::stats::{anova_one_way, pairwise_t_bh, wilcoxon_signed_rank, SampleGroup};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Anova,
    Pairwise,
    Wilcoxon,
}

impl std::str::FromStr for Mode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "anova" => Ok(Mode::Anova),
            "pairwise" => Ok(Mode::Pairwise),
            "wilcoxon" => Ok(Mode::Wilcoxon),
            other => Err(CliError::Config(format!(
                "unknown mode '{other}' (expected anova, pairwise or wilcoxon)"
            ))),
        }
    }
}

/// Reads labelled columns from a CSV with a header row. Every row must have
/// a value in every column.
pub fn read_columns(path: &Path) -> Result<Vec<(String, Vec<f64>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    let headers: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let mut columns = vec![Vec::new(); headers.len()];
    for (row, record) in reader.records().enumerate() {
        let record = record
            .map_err(|e| CliError::Config(format!("{}: ragged columns: {e}", path.display())))?;
        for (col, field) in record.iter().enumerate() {
            if field.is_empty() {
                return Err(CliError::Config(format!(
                    "{}: ragged columns: row {} has no value for '{}'",
                    path.display(),
                    row + 2,
                    headers[col]
                )));
            }
            let v = field.parse::<f64>().map_err(|_| {
                CliError::Config(format!(
                    "{}: row {}: '{field}' is not a number",
                    path.display(),
                    row + 2
                ))
            })?;
            columns[col].push(v);
        }
    }
    Ok(headers.into_iter().zip(columns).collect())
}

/// Label with any trailing crossover suffix such as `X06` removed.
fn family(label: &str) -> &str {
    match label.rfind('X') {
        Some(i) if i + 1 < label.len() && label[i + 1..].bytes().all(|b| b.is_ascii_digit()) => {
            &label[..i]
        }
        _ => label,
    }
}

/// True when `regen` is `classic` with one `ReGen` inserted.
fn is_regen_of(regen: &str, classic: &str) -> bool {
    regen.contains("ReGen") && regen.replacen("ReGen", "", 1) == classic
}

/// Paired comparisons for the Wilcoxon report. With exactly two columns the
/// pair is those columns. Otherwise every classic column is paired with its
/// ReGen counterpart, and every classic family (columns sharing a label up to
/// the crossover suffix) is pooled in column order against its ReGen family.
pub fn wilcoxon_pairings(
    columns: &[(String, Vec<f64>)],
) -> Vec<(String, Vec<f64>, String, Vec<f64>)> {
    if columns.len() == 2 {
        let (a, b) = (&columns[0], &columns[1]);
        return vec![(a.0.clone(), a.1.clone(), b.0.clone(), b.1.clone())];
    }
    let mut pairs = Vec::new();
    let mut families: Vec<&str> = Vec::new();
    for (label, _) in columns {
        let f = family(label);
        if !families.contains(&f) {
            families.push(f);
        }
    }
    let pooled = |fam: &str| -> Vec<f64> {
        columns
            .iter()
            .filter(|(l, _)| family(l) == fam)
            .flat_map(|(_, v)| v.iter().copied())
            .collect()
    };
    for &classic in &families {
        if let Some(&regen) = families.iter().find(|r| is_regen_of(r, classic)) {
            if families.len() < columns.len() {
                pairs.push((
                    classic.to_string(),
                    pooled(classic),
                    regen.to_string(),
                    pooled(regen),
                ));
            }
        }
    }
    for (label, values) in columns {
        if let Some((rl, rv)) = columns.iter().find(|(r, _)| is_regen_of(r, label)) {
            pairs.push((label.clone(), values.clone(), rl.clone(), rv.clone()));
        }
    }
    pairs
}

fn groups(columns: &[(String, Vec<f64>)]) -> Result<Vec<SampleGroup>> {
    columns
        .iter()
        .map(|(l, v)| SampleGroup::new(l.clone(), v.clone()).map_err(CliError::from))
        .collect()
}

/// Runs the selected analysis over the columns of all inputs and writes it
/// as CSV to `out`.
pub fn stats_report(inputs: &[&Path], mode: Mode, out: &Path) -> Result<()> {
    if inputs.is_empty() {
        return Err(CliError::Config("no input files".into()));
    }
    let mut columns = Vec::new();
    for path in inputs {
        columns.extend(read_columns(path)?);
    }
    if let Some(first) = columns.first() {
        if let Some((label, v)) = columns.iter().find(|(_, v)| v.len() != first.1.len()) {
            return Err(CliError::Config(format!(
                "ragged columns: '{label}' has {} values, '{}' has {}",
                v.len(),
                first.0,
                first.1.len()
            )));
        }
    }
    let mut w = csv::Writer::from_path(out)?;
    match mode {
        Mode::Anova => {
            let r = anova_one_way(&groups(&columns)?)?;
            let total_df = r.df_between + r.df_within;
            w.write_record(["source", "ss", "df", "ms", "f", "p_value"])?;
            w.write_record([
                "between".to_string(),
                r.ss_between.to_string(),
                r.df_between.to_string(),
                r.ms_between.to_string(),
                r.f_statistic.to_string(),
                r.p_value.to_string(),
            ])?;
            w.write_record([
                "within".to_string(),
                r.ss_within.to_string(),
                r.df_within.to_string(),
                r.ms_within.to_string(),
                String::new(),
                String::new(),
            ])?;
            w.write_record([
                "total".to_string(),
                r.ss_total().to_string(),
                total_df.to_string(),
                String::new(),
                String::new(),
                String::new(),
            ])?;
        }
        Mode::Pairwise => {
            let r = pairwise_t_bh(&groups(&columns)?)?;
            let mut header = vec![String::new()];
            header.extend(r.labels.iter().cloned());
            w.write_record(&header)?;
            for (i, label) in r.labels.iter().enumerate() {
                let mut row = vec![label.clone()];
                row.extend(
                    r.adjusted[i]
                        .iter()
                        .map(|p| p.map_or(String::new(), |p| p.to_string())),
                );
                w.write_record(&row)?;
            }
        }
        Mode::Wilcoxon => {
            let pairs = wilcoxon_pairings(&columns);
            if pairs.is_empty() {
                return Err(CliError::Config(
                    "no classic/ReGen column pairs found for the Wilcoxon test".into(),
                ));
            }
            w.write_record(["x", "y", "n", "v", "p_value"])?;
            for (xl, x, yl, y) in pairs {
                let r = wilcoxon_signed_rank(&x, &y)
                    .map_err(|e| CliError::Runtime(format!("{xl} vs {yl}: {e}")))?;
                w.write_record([
                    xl,
                    yl,
                    r.n.to_string(),
                    r.v.to_string(),
                    r.p_value.to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
