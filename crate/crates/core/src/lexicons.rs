//! Sentiment lexicons and the normalized per-token lexicon feature.
//!
//! Each lexicon contributes one slot. Raw scores are scaled by the largest
//! absolute score observed in that lexicon so the extreme entry lands on
//! ±0.995 and zero stays zero; tokens missing from a lexicon get 0.

use std::collections::HashMap;
use std::io::BufRead;
use std::path::{Path, PathBuf};

use crate::embeddings::io::open_maybe_gzip;
use crate::error::{Error, ParseError, Result};

/// Magnitude of the most extreme normalized score.
pub const SCORE_BOUND: f64 = 0.995;

/// Column layout of a lexicon file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Columns {
    /// `term<TAB>score[<TAB>...]` (NRC distributions)
    #[default]
    TermScore,
    /// `score<TAB>term` (SemEval-2015 Twitter lexicon)
    ScoreTerm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lexicon {
    name: String,
    entries: HashMap<String, f64>,
    observed_min: f64,
    observed_max: f64,
}

impl Lexicon {
    /// Build from `(term, score)` pairs. The first occurrence of a term wins;
    /// terms with internal whitespace are dropped.
    pub fn from_entries<I, S>(name: impl Into<String>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let name = name.into();
        let mut map = HashMap::new();
        for (term, score) in entries {
            let term = term.into();
            if !is_unigram(&term) {
                continue;
            }
            if !score.is_finite() {
                return Err(Error::data(format!("lexicon {name}: non-finite score for {term:?}")));
            }
            map.entry(term).or_insert(score);
        }
        Self::finish(name, map)
    }

    fn finish(name: String, entries: HashMap<String, f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::data(format!("lexicon {name} has no unigram entries")));
        }
        let (observed_min, observed_max) = entries
            .values()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &s| {
                (lo.min(s), hi.max(s))
            });
        Ok(Lexicon {
            name,
            entries,
            observed_min,
            observed_max,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn observed_min(&self) -> f64 {
        self.observed_min
    }

    pub fn observed_max(&self) -> f64 {
        self.observed_max
    }

    pub fn score(&self, term: &str) -> Option<f64> {
        self.entries.get(term).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, &v)| (k.as_str(), v))
    }

    fn max_abs(&self) -> f64 {
        self.observed_min.abs().max(self.observed_max.abs())
    }
}

fn is_unigram(term: &str) -> bool {
    !term.is_empty() && !term.chars().any(char::is_whitespace)
}

/// Load one lexicon resource from one or more files. Affirmative/negated
/// pairs are passed as two paths; earlier files win on conflicts.
pub fn load_lexicon<P: AsRef<Path>>(paths: &[P], name: &str, columns: Columns) -> Result<Lexicon> {
    let mut map = HashMap::new();
    let mut skipped = 0usize;
    for path in paths {
        let path = path.as_ref();
        let reader = open_maybe_gzip(path)?;
        for (idx, line) in reader.split(b'\n').enumerate() {
            let line = line?;
            let line = String::from_utf8_lossy(&line);
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let (first, second) = (fields.next().unwrap_or(""), fields.next());
            let Some(second) = second else {
                return Err(ParseError::Line {
                    line: idx + 1,
                    msg: format!("{}: expected at least two tab-separated columns", path.display()),
                }
                .into());
            };
            let (term, score) = match columns {
                Columns::TermScore => (first, second),
                Columns::ScoreTerm => (second, first),
            };
            let score: f64 = score.trim().parse().map_err(|_| ParseError::Line {
                line: idx + 1,
                msg: format!("{}: non-numeric score {score:?}", path.display()),
            })?;
            if !score.is_finite() {
                return Err(ParseError::Line {
                    line: idx + 1,
                    msg: format!("{}: non-finite score", path.display()),
                }
                .into());
            }
            if !is_unigram(term) {
                skipped += 1;
                continue;
            }
            map.entry(term.to_owned()).or_insert(score);
        }
    }
    if skipped > 0 {
        log::debug!("lexicon {name}: skipped {skipped} non-unigram entries");
    }
    Lexicon::finish(name.to_owned(), map)
}

/// Scale `raw` into `[-0.995, 0.995]` by the lexicon's largest absolute
/// observed score.
pub fn normalize_score(raw: f64, lexicon: &Lexicon) -> Result<f64> {
    let scale = lexicon.max_abs();
    if scale == 0.0 {
        return Err(Error::config(format!("lexicon {} has only zero scores", lexicon.name)));
    }
    Ok(raw / scale * SCORE_BOUND)
}

/// Where to find one lexicon resource.
#[derive(Clone, Debug, PartialEq)]
pub struct LexiconSource {
    pub name: String,
    pub paths: Vec<PathBuf>,
    pub columns: Columns,
}

/// Ordered lexicons; the order fixes the feature slot order.
#[derive(Clone, Debug, PartialEq)]
pub struct LexiconSet {
    lexicons: Vec<Lexicon>,
    scales: Vec<f64>,
}

impl LexiconSet {
    pub fn new(lexicons: Vec<Lexicon>) -> Result<Self> {
        let scales = lexicons
            .iter()
            .map(|lex| {
                let m = lex.max_abs();
                if m == 0.0 {
                    Err(Error::config(format!("lexicon {} has only zero scores", lex.name)))
                } else {
                    Ok(m)
                }
            })
            .collect::<Result<_>>()?;
        Ok(LexiconSet { lexicons, scales })
    }

    pub fn empty() -> Self {
        LexiconSet {
            lexicons: Vec::new(),
            scales: Vec::new(),
        }
    }

    pub fn load(sources: &[LexiconSource]) -> Result<Self> {
        let lexicons = sources
            .iter()
            .map(|s| load_lexicon(&s.paths, &s.name, s.columns))
            .collect::<Result<Vec<_>>>()?;
        LexiconSet::new(lexicons)
    }

    pub fn len(&self) -> usize {
        self.lexicons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lexicons.is_empty()
    }

    pub fn lexicons(&self) -> &[Lexicon] {
        &self.lexicons
    }

    /// Normalized score per lexicon, 0 where the token is absent.
    pub fn feature(&self, token: &str) -> Vec<f64> {
        self.lexicons
            .iter()
            .zip(&self.scales)
            .map(|(lex, &scale)| lex.score(token).map_or(0.0, |raw| raw / scale * SCORE_BOUND))
            .collect()
    }

    /// Bit `k` is set when the token is present in lexicon `k` (first 64).
    pub fn hits(&self, token: &str) -> u64 {
        self.lexicons
            .iter()
            .take(64)
            .enumerate()
            .filter(|(_, lex)| lex.score(token).is_some())
            .fold(0, |mask, (k, _)| mask | 1 << k)
    }
}

/// Lexicon feature vector of length `set.len()`.
pub fn lexicon_feature(token: &str, set: &LexiconSet) -> Vec<f64> {
    set.feature(token)
}
