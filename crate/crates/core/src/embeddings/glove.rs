//! GloVe text format: one `token v1 v2 ... vd` record per line.

use std::io::{BufRead, Read};
use std::path::Path;

use super::io::{open_maybe_gzip, wrap_maybe_gzip};
use super::{EmbeddingTable, Source};
use crate::error::{ParseError, Result};

pub fn load_glove_text(path: impl AsRef<Path>) -> Result<EmbeddingTable> {
    read_lines(open_maybe_gzip(path.as_ref())?)
}

pub fn read_glove_text<R: Read>(reader: R) -> Result<EmbeddingTable> {
    read_lines(wrap_maybe_gzip(reader)?)
}

fn read_lines<R: BufRead>(reader: R) -> Result<EmbeddingTable> {
    let mut table: Option<EmbeddingTable> = None;
    let mut vector = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(' ').filter(|f| !f.is_empty());
        let token = fields.next().unwrap_or_default();
        vector.clear();
        for field in fields {
            let v: f32 = field.parse().map_err(|_| ParseError::Line {
                line: line_no,
                msg: format!("non-numeric field {field:?}"),
            })?;
            vector.push(v);
        }
        let table = match &mut table {
            Some(t) => t,
            None => {
                if vector.is_empty() {
                    return Err(ParseError::Line {
                        line: line_no,
                        msg: "record has no vector components".into(),
                    }
                    .into());
                }
                table.insert(EmbeddingTable::with_capacity(vector.len(), Source::GloVe, 1024))
            }
        };
        if vector.len() != table.dim() {
            return Err(ParseError::Line {
                line: line_no,
                msg: format!("expected {} components, found {}", table.dim(), vector.len()),
            }
            .into());
        }
        table.insert(token.to_owned(), &vector);
    }
    table.ok_or_else(|| ParseError::Format("empty GloVe file".into()).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn two_lines() {
        let table = read_glove_text(&b"x 0.5 -0.5\ny 1.0 0.0\n"[..]).unwrap();
        assert_eq!(table.len(), 2);
        assert_eq!(table.dim(), 2);
        assert_eq!(table.get("x"), Some(&[0.5f32, -0.5][..]));
        assert_eq!(table.source_label(), "glove");
    }

    #[test]
    fn non_numeric_field_reports_line() {
        let err = read_glove_text(&b"x 0.5 -0.5\nz 1.0 oops\n"[..]).unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError::Line { line: 2, .. })), "{err:?}");
    }

    #[test]
    fn inconsistent_columns_report_line() {
        let err = read_glove_text(&b"x 0.5 -0.5\n\ny 1.0\n"[..]).unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError::Line { line: 3, .. })), "{err:?}");
    }

    #[test]
    fn crlf_and_blank_lines() {
        let table = read_glove_text(&b"\r\nx 1 2\r\n\r\ny 3 4\r\n"[..]).unwrap();
        assert_eq!(table.len(), 2);
        assert_eq!(table.get("y"), Some(&[3f32, 4.][..]));
    }
}
