use std::io::{BufRead, Read};
use std::path::Path;

use crate::embeddings::io::{open_maybe_gzip, wrap_maybe_gzip};
use crate::error::{ParseError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedSentence {
    pub tokens: Vec<String>,
    pub tags: Vec<String>,
}

impl TaggedSentence {
    pub fn new<S: Into<String>>(pairs: impl IntoIterator<Item = (S, S)>) -> Self {
        let (tokens, tags) = pairs.into_iter().map(|(w, t)| (w.into(), t.into())).unzip();
        TaggedSentence { tokens, tags }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

pub fn load_tagged_corpus(path: impl AsRef<Path>) -> Result<Vec<TaggedSentence>> {
    parse(open_maybe_gzip(path.as_ref())?)
}

/// One `token<TAB>tag` pair per line, blank lines between sentences.
pub fn read_tagged_corpus<R: Read>(reader: R) -> Result<Vec<TaggedSentence>> {
    parse(wrap_maybe_gzip(reader)?)
}

fn parse<R: BufRead>(reader: R) -> Result<Vec<TaggedSentence>> {
    let mut corpus = Vec::new();
    let mut current = TaggedSentence {
        tokens: Vec::new(),
        tags: Vec::new(),
    };
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            if !current.is_empty() {
                corpus.push(std::mem::replace(
                    &mut current,
                    TaggedSentence {
                        tokens: Vec::new(),
                        tags: Vec::new(),
                    },
                ));
            }
            continue;
        }
        let mut fields = line.split('\t');
        match (fields.next(), fields.next()) {
            (Some(token), Some(tag)) if !token.is_empty() && !tag.is_empty() => {
                current.tokens.push(token.to_owned());
                current.tags.push(tag.trim().to_owned());
            }
            _ => {
                return Err(ParseError::Line {
                    line: idx + 1,
                    msg: "expected token<TAB>tag".into(),
                }
                .into())
            }
        }
    }
    if !current.is_empty() {
        corpus.push(current);
    }
    Ok(corpus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentences_split_on_blank_lines() {
        let text = "the\tDT\ndog\tNN\n\n\nruns\tVBZ\n";
        let corpus = read_tagged_corpus(text.as_bytes()).unwrap();
        assert_eq!(corpus.len(), 2);
        assert_eq!(corpus[0].tags, ["DT", "NN"]);
        assert_eq!(corpus[1].tokens, ["runs"]);
    }

    #[test]
    fn missing_tab_is_reported() {
        let err = read_tagged_corpus("the\tDT\ndog NN\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
