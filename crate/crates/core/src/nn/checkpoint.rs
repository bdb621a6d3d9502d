//! Model checkpoint file.
//!
//! All integers and floats are little-endian.
//!
//! ```text
//! b"IWVCNN\0\0"                      magic
//! u32 version                        currently 1
//! u32 n_widths, u32 × n_widths       filter widths
//! u32 feature_maps, dense_units, input_dim, classes, batch_size, epochs, patience
//! f64 dropout_rate, learning_rate, min_delta
//! u64 seed
//! u32 n_tensors
//! n_tensors × { u32 name_len, name (utf-8), u32 rank, u32 × rank dims, f32 × prod(dims) }
//! ```

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use super::{CnnConfig, CnnModel, Params};
use crate::error::{Error, ParseError, Result};

const MAGIC: &[u8; 8] = b"IWVCNN\0\0";
pub const CHECKPOINT_VERSION: u32 = 1;

fn u32_of(x: usize) -> io::Result<u32> {
    u32::try_from(x).map_err(|_| io::Error::new(io::ErrorKind::InvalidInput, "value exceeds u32"))
}

pub fn write_checkpoint<W: Write>(model: &CnnModel, mut w: W) -> Result<()> {
    let c = model.config();
    w.write_all(MAGIC)?;
    w.write_u32::<LittleEndian>(CHECKPOINT_VERSION)?;
    w.write_u32::<LittleEndian>(u32_of(c.filter_widths.len())?)?;
    for &width in &c.filter_widths {
        w.write_u32::<LittleEndian>(u32_of(width)?)?;
    }
    for v in [
        c.feature_maps,
        c.dense_units,
        c.input_dim,
        c.classes,
        c.batch_size,
        c.epochs,
        c.patience,
    ] {
        w.write_u32::<LittleEndian>(u32_of(v)?)?;
    }
    for v in [c.dropout_rate, c.learning_rate, c.min_delta] {
        w.write_f64::<LittleEndian>(v)?;
    }
    w.write_u64::<LittleEndian>(c.seed)?;

    let tensors = model.params().named();
    w.write_u32::<LittleEndian>(u32_of(tensors.len())?)?;
    for (name, t) in tensors {
        w.write_u32::<LittleEndian>(u32_of(name.len())?)?;
        w.write_all(name.as_bytes())?;
        w.write_u32::<LittleEndian>(u32_of(t.shape.len())?)?;
        for &d in &t.shape {
            w.write_u32::<LittleEndian>(u32_of(d)?)?;
        }
        for &x in &t.data {
            w.write_f32::<LittleEndian>(x as f32)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_checkpoint<R: Read>(mut r: R) -> Result<CnnModel> {
    let trunc = |e: io::Error| -> Error {
        if e.kind() == io::ErrorKind::UnexpectedEof {
            ParseError::Format("checkpoint is truncated".into()).into()
        } else {
            e.into()
        }
    };
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic).map_err(trunc)?;
    if &magic != MAGIC {
        return Err(ParseError::Header("not a model checkpoint".into()).into());
    }
    let version = r.read_u32::<LittleEndian>().map_err(trunc)?;
    if version != CHECKPOINT_VERSION {
        return Err(ParseError::Header(format!(
            "checkpoint version {version} is not supported (expected {CHECKPOINT_VERSION})"
        ))
        .into());
    }
    let read_u32 = |r: &mut R| r.read_u32::<LittleEndian>().map(|v| v as usize).map_err(trunc);
    let n_widths = read_u32(&mut r)?;
    if n_widths > 1024 {
        return Err(ParseError::Format("implausible filter count".into()).into());
    }
    let filter_widths = (0..n_widths).map(|_| read_u32(&mut r)).collect::<Result<Vec<_>>>()?;
    let mut ints = [0usize; 7];
    for v in ints.iter_mut() {
        *v = read_u32(&mut r)?;
    }
    let mut floats = [0f64; 3];
    for v in floats.iter_mut() {
        *v = r.read_f64::<LittleEndian>().map_err(trunc)?;
    }
    let seed = r.read_u64::<LittleEndian>().map_err(trunc)?;
    let [feature_maps, dense_units, input_dim, classes, batch_size, epochs, patience] = ints;
    let [dropout_rate, learning_rate, min_delta] = floats;
    let config = CnnConfig {
        filter_widths,
        feature_maps,
        dense_units,
        input_dim,
        classes,
        dropout_rate,
        learning_rate,
        batch_size,
        epochs,
        seed,
        patience,
        min_delta,
    };
    config.validate()?;

    let mut params = Params::zeros(&config);
    let n_tensors = read_u32(&mut r)?;
    let expected: Vec<(String, Vec<usize>)> = params.named().into_iter().map(|(n, t)| (n, t.shape.clone())).collect();
    if n_tensors != expected.len() {
        return Err(ParseError::Format(format!("expected {} tensors, found {n_tensors}", expected.len())).into());
    }
    for ((want_name, want_shape), tensor) in expected.into_iter().zip(params.tensors_mut()) {
        let name_len = read_u32(&mut r)?;
        let mut name = vec![0u8; name_len.min(4096)];
        r.read_exact(&mut name).map_err(trunc)?;
        if name != want_name.as_bytes() {
            return Err(ParseError::Format(format!(
                "expected tensor {want_name}, found {}",
                String::from_utf8_lossy(&name)
            ))
            .into());
        }
        let rank = read_u32(&mut r)?;
        let shape = (0..rank.min(8)).map(|_| read_u32(&mut r)).collect::<Result<Vec<_>>>()?;
        if shape != want_shape {
            return Err(Error::Shape(format!(
                "{want_name}: expected {want_shape:?}, found {shape:?}"
            )));
        }
        let mut buf = vec![0f32; tensor.data.len()];
        r.read_f32_into::<LittleEndian>(&mut buf).map_err(trunc)?;
        for (dst, src) in tensor.data.iter_mut().zip(buf) {
            *dst = src as f64;
        }
    }
    CnnModel::from_parts(config, params)
}

pub fn save_checkpoint(model: &CnnModel, path: impl AsRef<Path>) -> Result<()> {
    write_checkpoint(model, BufWriter::new(File::create(path)?))
}

pub fn load_checkpoint(path: impl AsRef<Path>) -> Result<CnnModel> {
    read_checkpoint(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> CnnModel {
        CnnModel::init(CnnConfig {
            filter_widths: vec![2, 3],
            feature_maps: 3,
            dense_units: 4,
            input_dim: 5,
            seed: 17,
            ..CnnConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn round_trip_to_f32_precision() {
        let m = model();
        let mut bytes = Vec::new();
        write_checkpoint(&m, &mut bytes).unwrap();
        let back = read_checkpoint(&bytes[..]).unwrap();
        assert_eq!(back.config(), m.config());
        for ((_, a), (_, b)) in m.params().named().iter().zip(back.params().named()) {
            for (x, y) in a.data.iter().zip(&b.data) {
                assert_eq!(*x as f32, *y as f32);
            }
        }
        // a second save of the reloaded model is byte-identical
        let mut again = Vec::new();
        write_checkpoint(&back, &mut again).unwrap();
        assert_eq!(bytes, again);
    }

    #[test]
    fn rejects_other_versions() {
        let mut bytes = Vec::new();
        write_checkpoint(&model(), &mut bytes).unwrap();
        bytes[8] = 2;
        let err = read_checkpoint(&bytes[..]).unwrap_err();
        assert!(err.to_string().contains("version 2"), "{err}");
        bytes[8] = 1;
        bytes[0] = b'X';
        assert!(read_checkpoint(&bytes[..]).is_err());
    }

    #[test]
    fn rejects_truncation() {
        let mut bytes = Vec::new();
        write_checkpoint(&model(), &mut bytes).unwrap();
        bytes.truncate(bytes.len() - 3);
        assert!(matches!(read_checkpoint(&bytes[..]), Err(Error::Parse(_))));
    }
}
