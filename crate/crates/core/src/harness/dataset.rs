use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, ParseError, Result};
use crate::iwv::{tokenize, Sentence};

/// Binary-labeled sentences, optionally with a fixed train/test split.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledCorpus {
    pub name: String,
    pub sentences: Vec<Sentence>,
    pub predefined_split: Option<(Vec<usize>, Vec<usize>)>,
}

impl LabeledCorpus {
    pub fn new(name: impl Into<String>, sentences: Vec<Sentence>) -> Result<Self> {
        let corpus = LabeledCorpus {
            name: name.into(),
            sentences,
            predefined_split: None,
        };
        corpus.validate()?;
        Ok(corpus)
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn labels(&self) -> Vec<u8> {
        self.sentences.iter().map(|s| s.label.unwrap_or(u8::MAX)).collect()
    }

    /// Count of sentences per label value (0 and 1).
    pub fn class_counts(&self) -> [usize; 2] {
        let mut counts = [0; 2];
        for s in &self.sentences {
            if let Some(l @ 0..=1) = s.label {
                counts[l as usize] += 1;
            }
        }
        counts
    }

    fn validate(&self) -> Result<()> {
        for (i, s) in self.sentences.iter().enumerate() {
            match s.label {
                Some(0 | 1) => {}
                other => return Err(Error::data(format!("{}: sentence {i} has label {other:?}", self.name))),
            }
        }
        if let Some((train, test)) = &self.predefined_split {
            let mut seen = vec![false; self.len()];
            for &i in train.iter().chain(test) {
                if i >= self.len() || seen[i] {
                    return Err(Error::data(format!(
                        "{}: predefined split is not a partition",
                        self.name
                    )));
                }
                seen[i] = true;
            }
            if seen.contains(&false) {
                return Err(Error::data(format!(
                    "{}: predefined split does not cover the corpus",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

fn read_lossy(path: &Path) -> Result<String> {
    let bytes =
        fs::read(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

fn push_line(sentences: &mut Vec<Sentence>, text: &str, label: u8, skipped: &mut usize) {
    let tokens = tokenize(text);
    if tokens.is_empty() {
        *skipped += 1;
    } else {
        sentences.push(Sentence::new(tokens, Some(label)));
    }
}

/// One review per line: every line of `pos` is labeled 1, of `neg` 0.
pub fn load_pos_neg(name: &str, pos: &Path, neg: &Path) -> Result<LabeledCorpus> {
    let mut sentences = Vec::new();
    let mut skipped = 0;
    for (path, label) in [(pos, 1u8), (neg, 0u8)] {
        for line in read_lossy(path)?.lines() {
            push_line(&mut sentences, line, label, &mut skipped);
        }
    }
    if skipped > 0 {
        log::warn!("{name}: skipped {skipped} empty lines");
    }
    LabeledCorpus::new(name, sentences)
}

/// `label<TAB>sentence` files with a fixed split.
pub fn load_split(name: &str, train: &Path, test: &Path) -> Result<LabeledCorpus> {
    let mut sentences = Vec::new();
    let mut ids = (Vec::new(), Vec::new());
    let mut skipped = 0;
    for (path, is_train) in [(train, true), (test, false)] {
        for (idx, line) in read_lossy(path)?.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (label, text) = line.split_once('\t').ok_or_else(|| ParseError::Line {
                line: idx + 1,
                msg: format!("{}: expected label<TAB>sentence", path.display()),
            })?;
            let label: u8 = match label.trim() {
                "0" => 0,
                "1" => 1,
                other => {
                    return Err(ParseError::Line {
                        line: idx + 1,
                        msg: format!("{}: label {other:?} is not 0 or 1", path.display()),
                    }
                    .into())
                }
            };
            let before = sentences.len();
            push_line(&mut sentences, text, label, &mut skipped);
            if sentences.len() > before {
                if is_train { &mut ids.0 } else { &mut ids.1 }.push(before);
            }
        }
    }
    if skipped > 0 {
        log::warn!("{name}: skipped {skipped} empty sentences");
    }
    let corpus = LabeledCorpus {
        name: name.to_owned(),
        sentences,
        predefined_split: Some(ids),
    };
    corpus.validate()?;
    Ok(corpus)
}

fn first_existing(dir: &Path, candidates: &[&str]) -> Result<PathBuf> {
    candidates
        .iter()
        .map(|c| dir.join(c))
        .find(|p| p.is_file())
        .ok_or_else(|| {
            Error::Io(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!("none of {candidates:?} found in {}", dir.display()),
            ))
        })
}

/// Load a known dataset from a directory.
///
/// * `mr`: `rt-polarity.pos` / `rt-polarity.neg`
/// * `cr`: `custrev.pos` / `custrev.neg`
/// * `sst`: `train.tsv` / `test.tsv` with `label<TAB>sentence` lines
///
/// MR and CR also accept `pos.txt` / `neg.txt`.
pub fn load_dataset(name: &str, dir: impl AsRef<Path>) -> Result<LabeledCorpus> {
    let dir = dir.as_ref();
    match name.to_ascii_lowercase().as_str() {
        "mr" => load_pos_neg(
            "MR",
            &first_existing(dir, &["rt-polarity.pos", "pos.txt"])?,
            &first_existing(dir, &["rt-polarity.neg", "neg.txt"])?,
        ),
        "cr" => load_pos_neg(
            "CR",
            &first_existing(dir, &["custrev.pos", "pos.txt"])?,
            &first_existing(dir, &["custrev.neg", "neg.txt"])?,
        ),
        "sst" | "sst2" | "sst-2" => load_split(
            "SST",
            &first_existing(dir, &["train.tsv", "train.txt"])?,
            &first_existing(dir, &["test.tsv", "test.txt"])?,
        ),
        other => Err(Error::config(format!(
            "unknown dataset {other:?} (expected mr, cr or sst)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_line_fixture() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("pos.txt"), "A fine film.\nLoved it!\n").unwrap();
        fs::write(dir.path().join("neg.txt"), "Dull.\n\nNot good at all\n").unwrap();
        let corpus = load_dataset("mr", dir.path()).unwrap();
        assert_eq!(corpus.len(), 4);
        assert_eq!(corpus.labels(), vec![1, 1, 0, 0]);
        assert_eq!(corpus.sentences[1].tokens, ["loved", "it", "!"]);
        assert_eq!(corpus.class_counts(), [2, 2]);
        assert!(corpus.predefined_split.is_none());
    }

    #[test]
    fn sst_split() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("train.tsv"), "1\tgreat\n0\tawful\n1\tfun\n").unwrap();
        fs::write(dir.path().join("test.tsv"), "0\tboring\n").unwrap();
        let corpus = load_dataset("sst", dir.path()).unwrap();
        assert_eq!(corpus.predefined_split, Some((vec![0, 1, 2], vec![3])));
        assert_eq!(corpus.labels(), vec![1, 0, 1, 0]);
    }

    #[test]
    fn errors() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(load_dataset("trec", dir.path()), Err(Error::Config(_))));
        assert!(matches!(load_dataset("cr", dir.path()), Err(Error::Io(_))));
        fs::write(dir.path().join("train.tsv"), "2\tgreat\n").unwrap();
        fs::write(dir.path().join("test.tsv"), "").unwrap();
        assert!(matches!(load_dataset("sst", dir.path()), Err(Error::Parse(_))));
    }
}
