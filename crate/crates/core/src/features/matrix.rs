//! Feature matrix file: a header of expanded column names, then one row per
//! patch as `patch_id, project, tool, label, v_1..v_n`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Correct,
    Overfitting,
}

impl Label {
    /// Class index: 1 for overfitting, the positive class.
    pub fn as_int(self) -> u8 {
        match self {
            Label::Correct => 0,
            Label::Overfitting => 1,
        }
    }

    pub fn from_int(v: u8) -> Option<Self> {
        match v {
            0 => Some(Label::Correct),
            1 => Some(Label::Overfitting),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixRow {
    pub patch_id: String,
    pub project: String,
    pub tool: String,
    pub label: Option<Label>,
    pub values: Vec<f64>,
}

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("malformed matrix: {0}")]
    Malformed(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

const META: [&str; 4] = ["patch_id", "project", "tool", "label"];

pub fn write_matrix<W: Write>(out: W, columns: &[String], rows: &[MatrixRow]) -> Result<(), MatrixError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(META.iter().copied().chain(columns.iter().map(String::as_str)))?;
    for row in rows {
        if row.values.len() != columns.len() {
            return Err(MatrixError::Malformed(format!(
                "row {} has {} values for {} columns",
                row.patch_id,
                row.values.len(),
                columns.len()
            )));
        }
        let label = row.label.map_or(String::new(), |l| l.as_int().to_string());
        let mut record = vec![row.patch_id.clone(), row.project.clone(), row.tool.clone(), label];
        record.extend(row.values.iter().map(|v| v.to_string()));
        w.write_record(&record)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_matrix<R: Read>(input: R) -> Result<(Vec<String>, Vec<MatrixRow>), MatrixError> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(input);
    let mut records = r.records();
    let header = records.next().ok_or_else(|| MatrixError::Malformed("missing header".into()))??;
    if header.len() < META.len() || header.iter().take(META.len()).ne(META) {
        return Err(MatrixError::Malformed("header must start with patch_id,project,tool,label".into()));
    }
    let columns: Vec<String> = header.iter().skip(META.len()).map(str::to_string).collect();
    let mut rows = Vec::new();
    for record in records {
        let record = record?;
        if record.len() != header.len() {
            return Err(MatrixError::Malformed(format!("row with {} fields, header has {}", record.len(), header.len())));
        }
        let label = match &record[3] {
            "" => None,
            s => Some(
                s.parse::<u8>()
                    .ok()
                    .and_then(Label::from_int)
                    .ok_or_else(|| MatrixError::Malformed(format!("bad label `{s}`")))?,
            ),
        };
        let values = record
            .iter()
            .skip(META.len())
            .map(|v| v.parse::<f64>().map_err(|_| MatrixError::Malformed(format!("bad value `{v}`"))))
            .collect::<Result<_, _>>()?;
        rows.push(MatrixRow {
            patch_id: record[0].to_string(),
            project: record[1].to_string(),
            tool: record[2].to_string(),
            label,
            values,
        });
    }
    Ok((columns, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let cols = vec!["a".to_string(), "b".to_string()];
        let rows = vec![
            MatrixRow { patch_id: "p1".into(), project: "Math".into(), tool: "Arja".into(), label: Some(Label::Overfitting), values: vec![1.0, 0.0] },
            MatrixRow { patch_id: "p2".into(), project: "Lang".into(), tool: "jGenProg".into(), label: None, values: vec![0.25, 3.0] },
        ];
        let mut buf = Vec::new();
        write_matrix(&mut buf, &cols, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("patch_id,project,tool,label,a,b\np1,Math,Arja,1,1,0\n"));
        let (c, r) = read_matrix(buf.as_slice()).unwrap();
        assert_eq!(c, cols);
        assert_eq!(r, rows);
    }
}
