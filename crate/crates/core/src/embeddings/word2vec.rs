//! Reader and writer for the word2vec binary format.
//!
//! Layout: an ASCII header `"<vocab_count> <dim>\n"`, then per record a
//! token terminated by a single space followed by `dim` little-endian
//! `f32` values. Writers conventionally emit a newline after each record;
//! leading whitespace before a token is skipped on read.

use std::io::{self, BufRead, Write};
use std::path::Path;

use byteorder::{LittleEndian, WriteBytesExt};

use super::io::{open_maybe_gzip, wrap_maybe_gzip};
use super::{EmbeddingTable, Source};
use crate::error::{ParseError, Result};

pub fn load_word2vec_binary(path: impl AsRef<Path>) -> Result<EmbeddingTable> {
    let mut reader = open_maybe_gzip(path.as_ref())?;
    read_word2vec_binary(&mut reader)
}

/// Parse from any reader; gzip input is detected and decompressed.
pub fn read_word2vec_binary<R: io::Read>(reader: R) -> Result<EmbeddingTable> {
    let mut reader = CountingReader::new(wrap_maybe_gzip(reader)?);

    let mut header = Vec::new();
    reader.read_until(b'\n', &mut header)?;
    if header.last() != Some(&b'\n') {
        return Err(ParseError::Header("missing newline after header".into()).into());
    }
    let header = String::from_utf8_lossy(&header);
    let mut fields = header.split_ascii_whitespace();
    let (count, dim) = match (fields.next(), fields.next(), fields.next()) {
        (Some(c), Some(d), None) => (c, d),
        _ => return Err(ParseError::Header(format!("expected \"<count> <dim>\", got {:?}", header.trim_end())).into()),
    };
    let count: u64 = count
        .parse()
        .map_err(|_| ParseError::Header(format!("bad vocabulary count {count:?}")))?;
    let dim: i64 = dim
        .parse()
        .map_err(|_| ParseError::Header(format!("bad dimension {dim:?}")))?;
    if dim <= 0 {
        return Err(ParseError::Dim(dim).into());
    }
    let dim = dim as usize;

    let mut table = EmbeddingTable::with_capacity(dim, Source::Word2Vec, count.min(1 << 24) as usize);
    let mut raw = vec![0u8; dim * 4];
    let mut vector = vec![0f32; dim];
    let mut token = Vec::new();
    for _ in 0..count {
        let record_start = reader.offset;
        skip_whitespace(&mut reader)?;
        token.clear();
        reader.read_until(b' ', &mut token)?;
        if token.pop() != Some(b' ') {
            return Err(ParseError::Truncated { offset: record_start }.into());
        }
        let vec_start = reader.offset;
        if let Err(e) = reader.read_exact(&mut raw) {
            return Err(if e.kind() == io::ErrorKind::UnexpectedEof {
                ParseError::Truncated { offset: vec_start }.into()
            } else {
                e.into()
            });
        }
        for (v, b) in vector.iter_mut().zip(raw.chunks_exact(4)) {
            *v = f32::from_le_bytes([b[0], b[1], b[2], b[3]]);
        }
        table.insert(String::from_utf8_lossy(&token).into_owned(), &vector);
    }
    Ok(table)
}

/// Write `table` in first-insertion order; reading the output back yields a
/// bit-identical table.
pub fn write_word2vec_binary<W: Write>(table: &EmbeddingTable, mut writer: W) -> Result<()> {
    writeln!(writer, "{} {}", table.len(), table.dim())?;
    for (word, vector) in table.iter() {
        writer.write_all(word.as_bytes())?;
        writer.write_all(b" ")?;
        for &v in vector {
            writer.write_f32::<LittleEndian>(v)?;
        }
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(())
}

fn skip_whitespace<R: BufRead>(reader: &mut CountingReader<R>) -> io::Result<()> {
    loop {
        let buf = reader.inner.fill_buf()?;
        if buf.is_empty() {
            return Ok(());
        }
        let n = buf.iter().take_while(|b| b.is_ascii_whitespace()).count();
        let done = n < buf.len();
        reader.consume(n);
        if done {
            return Ok(());
        }
    }
}

/// Tracks the byte offset into the decompressed stream for error reporting.
struct CountingReader<R> {
    inner: R,
    offset: u64,
}

impl<R: BufRead> CountingReader<R> {
    fn new(inner: R) -> Self {
        CountingReader { inner, offset: 0 }
    }

    fn consume(&mut self, n: usize) {
        self.inner.consume(n);
        self.offset += n as u64;
    }

    fn read_until(&mut self, delim: u8, buf: &mut Vec<u8>) -> io::Result<usize> {
        let n = self.inner.read_until(delim, buf)?;
        self.offset += n as u64;
        Ok(n)
    }

    fn read_exact(&mut self, buf: &mut [u8]) -> io::Result<()> {
        self.inner.read_exact(buf)?;
        self.offset += buf.len() as u64;
        Ok(())
    }
}
