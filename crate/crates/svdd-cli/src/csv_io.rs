//! CSV ingestion: numeric feature columns with optional weight and label
//! columns, locale-independent parsing, and header auto-detection.

use std::path::Path;

use svdd::{Dataset, Label};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeaderMode {
    /// Header if and only if the first row has a non-numeric cell.
    #[default]
    Auto,
    Yes,
    No,
}

/// How to read one CSV into a dataset.
#[derive(Debug, Clone, Default)]
pub struct CsvSpec {
    pub header: HeaderMode,
    /// Weight column, by header name or 0-based index.
    pub weights_col: Option<String>,
    /// Label column, by header name or 0-based index.
    pub label_col: Option<String>,
}

/// Raw parse result before dataset validation. `rows` may be empty, which
/// only the scoring command accepts.
#[derive(Debug)]
pub struct CsvTable {
    pub rows: Vec<Vec<f64>>,
    pub weights: Option<Vec<f64>>,
    pub labels: Option<Vec<Label>>,
    pub header: Option<Vec<String>>,
}

/// Reads and validates a dataset; empty input is an error here.
pub fn read_dataset(path: &Path, spec: &CsvSpec) -> CliResult<Dataset> {
    let table = read_table(path, spec)?;
    table_to_dataset(table)
}

pub fn table_to_dataset(table: CsvTable) -> CliResult<Dataset> {
    let mut dataset = Dataset::from_rows(table.rows)?;
    if let Some(weights) = table.weights {
        dataset = dataset.with_weights_f64(weights)?;
    }
    if let Some(labels) = table.labels {
        dataset = dataset.with_labels(labels)?;
    }
    Ok(dataset)
}

/// Reads the file into feature rows plus optional weight/label columns.
pub fn read_table(path: &Path, spec: &CsvSpec) -> CliResult<CsvTable> {
    let err_at = |message: String| CliError::Csv {
        path: path.display().to_string(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| err_at(e.to_string()))?;

    let mut records: Vec<Vec<String>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| err_at(format!("record {i}: {e}")))?;
        records.push(record.iter().map(str::to_owned).collect());
    }

    let has_header = match spec.header {
        HeaderMode::Yes => true,
        HeaderMode::No => false,
        HeaderMode::Auto => records
            .first()
            .is_some_and(|row| row.iter().any(|cell| parse_number(cell).is_none())),
    };
    let header: Option<Vec<String>> = if has_header {
        if records.is_empty() {
            return Err(err_at("expected a header row, file is empty".into()));
        }
        Some(records.remove(0))
    } else {
        None
    };
    let n_cols = match (&header, records.first()) {
        (Some(h), _) => h.len(),
        (None, Some(first)) => first.len(),
        (None, None) => 0,
    };

    let weights_idx = spec
        .weights_col
        .as_deref()
        .map(|sel| resolve_column(sel, header.as_deref(), n_cols).map_err(&err_at))
        .transpose()?;
    let label_idx = spec
        .label_col
        .as_deref()
        .map(|sel| resolve_column(sel, header.as_deref(), n_cols).map_err(&err_at))
        .transpose()?;
    if weights_idx.is_some() && weights_idx == label_idx {
        return Err(err_at("weight and label columns coincide".into()));
    }

    let mut rows = Vec::with_capacity(records.len());
    let mut weights = weights_idx.map(|_| Vec::with_capacity(records.len()));
    let mut labels = label_idx.map(|_| Vec::with_capacity(records.len()));
    for (data_row, record) in records.iter().enumerate() {
        if record.len() != n_cols {
            return Err(err_at(format!(
                "row {data_row} has {} columns, expected {n_cols}",
                record.len()
            )));
        }
        let mut features = Vec::with_capacity(n_cols);
        for (col, cell) in record.iter().enumerate() {
            if Some(col) == weights_idx {
                let value = parse_number(cell).ok_or_else(|| {
                    err_at(format!("row {data_row}: weight {cell:?} is not numeric"))
                })?;
                weights.as_mut().unwrap().push(value);
            } else if Some(col) == label_idx {
                labels.as_mut().unwrap().push(parse_label(cell).ok_or_else(|| {
                    err_at(format!(
                        "row {data_row}: label {cell:?} is not 0/1/inlier/outlier"
                    ))
                })?);
            } else {
                features.push(parse_number(cell).ok_or_else(|| {
                    err_at(format!("row {data_row}: cell {cell:?} is not numeric"))
                })?);
            }
        }
        rows.push(features);
    }

    Ok(CsvTable {
        rows,
        weights,
        labels,
        header,
    })
}

/// Column selector: a header name when one matches, otherwise a 0-based
/// index if the selector is an integer.
fn resolve_column(selector: &str, header: Option<&[String]>, n_cols: usize) -> Result<usize, String> {
    if let Some(names) = header {
        if let Some(idx) = names.iter().position(|n| n == selector) {
            return Ok(idx);
        }
    }
    match selector.parse::<usize>() {
        Ok(idx) if idx < n_cols => Ok(idx),
        Ok(idx) => Err(format!("column index {idx} out of range (0..{n_cols})")),
        Err(_) => Err(format!("no column named {selector:?}")),
    }
}

fn parse_number(cell: &str) -> Option<f64> {
    // f64::from_str is locale independent: the decimal separator is always
    // a point, regardless of the environment.
    cell.trim().parse::<f64>().ok()
}

fn parse_label(cell: &str) -> Option<Label> {
    match cell.trim().to_ascii_lowercase().as_str() {
        "1" | "inlier" => Some(Label::Inlier),
        "0" | "outlier" => Some(Label::Outlier),
        _ => None,
    }
}

/// Full-precision rendering used for every real written to output files:
/// 17 significant digits round-trip any f64 exactly.
pub fn fmt_full(value: f64) -> String {
    format!("{value:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(content.as_bytes()).unwrap();
        file
    }

    #[test]
    fn header_is_autodetected() {
        let file = write_tmp("x,y\n1.0,2.0\n3.0,4.0\n");
        let table = read_table(file.path(), &CsvSpec::default()).unwrap();
        assert_eq!(table.header, Some(vec!["x".into(), "y".into()]));
        assert_eq!(table.rows, vec![vec![1.0, 2.0], vec![3.0, 4.0]]);

        let file = write_tmp("1.0,2.0\n3.0,4.0\n");
        let table = read_table(file.path(), &CsvSpec::default()).unwrap();
        assert_eq!(table.header, None);
        assert_eq!(table.rows.len(), 2);
    }

    #[test]
    fn forced_header_mode_wins() {
        let file = write_tmp("1.0,2.0\n3.0,4.0\n");
        let spec = CsvSpec {
            header: HeaderMode::Yes,
            ..Default::default()
        };
        let table = read_table(file.path(), &spec).unwrap();
        assert_eq!(table.rows, vec![vec![3.0, 4.0]]);
    }

    #[test]
    fn weight_and_label_columns_are_split_out() {
        let file = write_tmp("x,y,w,lab\n0.0,1.0,2,inlier\n3.0,4.0,1,0\n");
        let spec = CsvSpec {
            weights_col: Some("w".into()),
            label_col: Some("lab".into()),
            ..Default::default()
        };
        let table = read_table(file.path(), &spec).unwrap();
        assert_eq!(table.rows, vec![vec![0.0, 1.0], vec![3.0, 4.0]]);
        assert_eq!(table.weights, Some(vec![2.0, 1.0]));
        assert_eq!(table.labels, Some(vec![Label::Inlier, Label::Outlier]));

        let dataset = table_to_dataset(read_table(file.path(), &spec).unwrap()).unwrap();
        assert_eq!(dataset.weights(), Some(&[2u64, 1][..]));
    }

    #[test]
    fn index_selectors_work_without_a_header() {
        let file = write_tmp("0.0,1.0,5\n2.0,3.0,1\n");
        let spec = CsvSpec {
            weights_col: Some("2".into()),
            ..Default::default()
        };
        let table = read_table(file.path(), &spec).unwrap();
        assert_eq!(table.weights, Some(vec![5.0, 1.0]));
        assert_eq!(table.rows[0], vec![0.0, 1.0]);
    }

    #[test]
    fn bad_cells_report_the_row() {
        let file = write_tmp("1.0,2.0\n3.0,oops\n");
        let err = read_table(file.path(), &CsvSpec::default()).unwrap_err();
        assert!(err.to_string().contains("row 1"), "{err}");
    }

    #[test]
    fn nan_cells_pass_parsing_and_fail_validation_with_the_row() {
        let file = write_tmp("1.0,2.0\nnan,4.0\n");
        let err = read_dataset(file.path(), &CsvSpec::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains('1'), "{err}");
    }

    #[test]
    fn full_precision_round_trips() {
        for v in [0.1, 1.0 / 3.0, 2.5e-300, -7.123456789012345e17, svdd::DEFAULT_DELTA] {
            let printed = fmt_full(v);
            assert_eq!(printed.parse::<f64>().unwrap(), v, "{printed}");
        }
    }
}
