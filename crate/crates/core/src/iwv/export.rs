//! Binary feature cache shared by the `build-vectors` and `train` commands.
//!
//! Layout, all little-endian:
//!
//! ```text
//! u32 count, u32 max_len, u32 dim
//! count × { f32[max_len * dim] rows, u8 label (255 = none), u32 length }
//! ```

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use super::PaddedBatch;
use crate::error::{ParseError, Result};

const NO_LABEL: u8 = u8::MAX;

pub fn write_feature_cache<W: Write>(batch: &PaddedBatch, mut w: W) -> Result<()> {
    let as_u32 =
        |x: usize| u32::try_from(x).map_err(|_| io::Error::new(io::ErrorKind::InvalidInput, "value exceeds u32"));
    w.write_u32::<LittleEndian>(as_u32(batch.len())?)?;
    w.write_u32::<LittleEndian>(as_u32(batch.max_len())?)?;
    w.write_u32::<LittleEndian>(as_u32(batch.dim())?)?;
    for b in 0..batch.len() {
        for &x in batch.item(b) {
            w.write_f32::<LittleEndian>(x as f32)?;
        }
        w.write_u8(batch.labels()[b].unwrap_or(NO_LABEL))?;
        w.write_u32::<LittleEndian>(as_u32(batch.length(b))?)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_feature_cache<R: Read>(mut r: R) -> Result<PaddedBatch> {
    let eof = |e: io::Error| -> crate::error::Error {
        if e.kind() == io::ErrorKind::UnexpectedEof {
            ParseError::Format("feature cache is truncated".into()).into()
        } else {
            e.into()
        }
    };
    let count = r.read_u32::<LittleEndian>().map_err(eof)? as usize;
    let max_len = r.read_u32::<LittleEndian>().map_err(eof)? as usize;
    let dim = r.read_u32::<LittleEndian>().map_err(eof)? as usize;
    let stride = max_len * dim;
    let mut data = Vec::with_capacity(count.min(1 << 16) * stride);
    let mut lengths = Vec::with_capacity(count.min(1 << 16));
    let mut labels = Vec::with_capacity(count.min(1 << 16));
    let mut buf = vec![0f32; stride];
    for _ in 0..count {
        r.read_f32_into::<LittleEndian>(&mut buf).map_err(eof)?;
        data.extend(buf.iter().map(|&x| x as f64));
        let label = r.read_u8().map_err(eof)?;
        labels.push((label != NO_LABEL).then_some(label));
        let n = r.read_u32::<LittleEndian>().map_err(eof)? as usize;
        if n > max_len {
            return Err(ParseError::Format(format!("item length {n} exceeds max_len {max_len}")).into());
        }
        lengths.push(n);
    }
    PaddedBatch::from_parts(max_len, dim, data, lengths, labels)
}

pub fn save_feature_cache(batch: &PaddedBatch, path: impl AsRef<Path>) -> Result<()> {
    write_feature_cache(batch, BufWriter::new(File::create(path)?))
}

pub fn load_feature_cache(path: impl AsRef<Path>) -> Result<PaddedBatch> {
    read_feature_cache(BufReader::new(File::open(path)?))
}
