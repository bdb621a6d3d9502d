use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};

use rand::Rng;

use super::TagSet;
use crate::embeddings::OOV_RANGE;
use crate::error::{Error, ParseError, Result};
use crate::seed::keyed_rng;

pub const DEFAULT_POS_DIM: usize = 50;

/// One constant vector per tag, frozen once generated.
#[derive(Clone, Debug, PartialEq)]
pub struct PosCodebook {
    dim: usize,
    seed: u64,
    tagset: TagSet,
    vectors: Vec<Vec<f64>>,
}

/// Draw a vector for every tag, components uniform in `[-0.25, 0.25]`,
/// keyed by `(seed, tag)`.
pub fn build_pos_codebook(tagset: &TagSet, dim: usize, seed: u64) -> Result<PosCodebook> {
    if dim == 0 {
        return Err(Error::config("POS vector dimension must be positive"));
    }
    if tagset.is_empty() {
        return Err(Error::config("empty tag set"));
    }
    let vectors: Vec<Vec<f64>> = tagset
        .iter()
        .map(|tag| {
            let mut rng = keyed_rng(seed, &format!("pos:{tag}"));
            (0..dim).map(|_| rng.gen_range(-OOV_RANGE..=OOV_RANGE)).collect()
        })
        .collect();
    PosCodebook::from_parts(tagset.clone(), dim, seed, vectors)
}

impl PosCodebook {
    fn from_parts(tagset: TagSet, dim: usize, seed: u64, vectors: Vec<Vec<f64>>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(vectors.len());
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::config(format!(
                    "vector for tag {} has length {}, expected {dim}",
                    tagset.tag(i),
                    v.len()
                )));
            }
            let bits: Vec<u64> = v.iter().map(|x| x.to_bits()).collect();
            if !seen.insert(bits) {
                return Err(Error::config(format!("tag {} shares its vector", tagset.tag(i))));
            }
        }
        Ok(PosCodebook {
            dim,
            seed,
            tagset,
            vectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn tagset(&self) -> &TagSet {
        &self.tagset
    }

    /// Constant vector for `tag`.
    pub fn vector(&self, tag: &str) -> Result<&[f64]> {
        self.tagset
            .index_of(tag)
            .map(|i| self.vectors[i].as_slice())
            .ok_or_else(|| Error::config(format!("tag {tag:?} is not in the codebook")))
    }
}

/// Write `tag<TAB>v1 v2 ... vd` per line. Values use the shortest
/// representation that parses back to the same `f64`.
pub fn write_codebook<W: Write>(codebook: &PosCodebook, mut writer: W) -> Result<()> {
    let mut line = String::new();
    for (tag, v) in codebook.tagset.iter().zip(&codebook.vectors) {
        line.clear();
        line.push_str(tag);
        line.push('\t');
        for (j, x) in v.iter().enumerate() {
            if j > 0 {
                line.push(' ');
            }
            write!(line, "{x}").unwrap();
        }
        line.push('\n');
        writer.write_all(line.as_bytes())?;
    }
    writer.flush()?;
    Ok(())
}

/// Inverse of [`write_codebook`]. The seed is not stored in the text format.
pub fn read_codebook<R: Read>(reader: R, seed: u64) -> Result<PosCodebook> {
    let mut tags = Vec::new();
    let mut vectors = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (tag, values) = line.split_once('\t').ok_or_else(|| ParseError::Line {
            line: idx + 1,
            msg: "expected tag<TAB>values".into(),
        })?;
        let v = values
            .split_ascii_whitespace()
            .map(|f| {
                f.parse::<f64>().map_err(|_| ParseError::Line {
                    line: idx + 1,
                    msg: format!("non-numeric value {f:?}"),
                })
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        tags.push(tag.to_owned());
        vectors.push(v);
    }
    let dim = vectors
        .first()
        .map(Vec::len)
        .ok_or_else(|| ParseError::Format("empty codebook".into()))?;
    PosCodebook::from_parts(TagSet::new(tags)?, dim, seed, vectors)
}
