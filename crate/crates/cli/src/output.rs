use serde_json::Value;

use crate::Format;

/// Text printed on stdout plus the exit status.
pub struct Outcome {
    pub text: String,
    pub status: Status,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Mismatch = 1,
}

/// One rendering per output format.
pub struct Rendered {
    pub json: Value,
    pub csv: Vec<Vec<String>>,
    pub pretty: String,
}

pub fn finish(format: Format, r: Rendered, status: Status) -> heller::Result<Outcome> {
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&r.json)?;
            s.push('\n');
            s
        }
        Format::Csv => to_csv(&r.csv)?,
        Format::Pretty => r.pretty,
    };
    Ok(Outcome { text, status })
}

pub fn to_csv(rows: &[Vec<String>]) -> heller::Result<String> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(vec![]);
    for row in rows {
        w.write_record(row).map_err(|e| heller::Error::Internal(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| heller::Error::Internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| heller::Error::Internal(format!("csv: {e}")))
}

pub fn matrix_rows(labels: &[String], entries: &[Vec<usize>]) -> Vec<Vec<String>> {
    let mut rows = vec![std::iter::once("label".to_string()).chain(labels.iter().cloned()).collect()];
    for (l, r) in labels.iter().zip(entries) {
        rows.push(std::iter::once(l.clone()).chain(r.iter().map(|x| x.to_string())).collect());
    }
    rows
}
