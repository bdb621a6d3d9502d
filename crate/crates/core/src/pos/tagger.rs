//! Greedy left-to-right averaged-perceptron tagger.

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{TagSet, TaggedSentence};
use crate::error::{Error, ParseError, Result};

const START: [&str; 2] = ["-START-", "-START2-"];
const END: &str = "-END-";

#[derive(Clone, Copy, Debug)]
pub struct TrainOptions {
    pub epochs: usize,
    pub seed: u64,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions { epochs: 5, seed: 0 }
    }
}

/// Averaged feature weights, one score per tag for every feature string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaggerModel {
    tagset: TagSet,
    averaged: bool,
    weights: HashMap<String, Vec<f64>>,
}

/// Running state for one feature during training.
struct Accumulator {
    weights: Vec<f64>,
    totals: Vec<f64>,
    stamps: Vec<u64>,
}

impl Accumulator {
    fn new(n: usize) -> Self {
        Accumulator {
            weights: vec![0.0; n],
            totals: vec![0.0; n],
            stamps: vec![0; n],
        }
    }

    fn bump(&mut self, tag: usize, delta: f64, now: u64) {
        self.totals[tag] += (now - self.stamps[tag]) as f64 * self.weights[tag];
        self.stamps[tag] = now;
        self.weights[tag] += delta;
    }

    fn averaged(mut self, now: u64) -> Vec<f64> {
        for t in 0..self.weights.len() {
            self.totals[t] += (now - self.stamps[t]) as f64 * self.weights[t];
        }
        self.totals.iter().map(|total| total / now as f64).collect()
    }
}

/// Train on `corpus`. Sentence order is reshuffled every epoch from
/// `options.seed`; the returned weights are averaged over all updates.
pub fn train_tagger(corpus: &[TaggedSentence], tagset: &TagSet, options: TrainOptions) -> Result<TaggerModel> {
    if corpus.is_empty() {
        return Err(Error::data("tagger training corpus is empty"));
    }
    if options.epochs == 0 {
        return Err(Error::config("tagger epochs must be positive"));
    }
    let mut gold = Vec::with_capacity(corpus.len());
    for (i, sentence) in corpus.iter().enumerate() {
        if sentence.tokens.len() != sentence.tags.len() {
            return Err(Error::data(format!("sentence {i}: token and tag counts differ")));
        }
        let ids = sentence
            .tags
            .iter()
            .map(|t| {
                tagset
                    .index_of(t)
                    .ok_or_else(|| Error::data(format!("sentence {i}: tag {t:?} is not in the tag set")))
            })
            .collect::<Result<Vec<_>>>()?;
        gold.push(ids);
    }

    let n_tags = tagset.len();
    let mut acc: HashMap<String, Accumulator> = HashMap::new();
    let mut now: u64 = 0;
    let mut order: Vec<usize> = (0..corpus.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut scores = vec![0.0; n_tags];

    for epoch in 0..options.epochs {
        order.shuffle(&mut rng);
        let mut correct = 0usize;
        let mut total = 0usize;
        for &s in &order {
            let words = &corpus[s].tokens;
            let mut history: Vec<&str> = Vec::with_capacity(words.len());
            for (i, &truth) in gold[s].iter().enumerate() {
                let features = features(words, i, &history);
                scores.iter_mut().for_each(|x| *x = 0.0);
                for f in &features {
                    if let Some(a) = acc.get(f) {
                        for (s, w) in scores.iter_mut().zip(&a.weights) {
                            *s += w;
                        }
                    }
                }
                let guess = argmax(&scores);
                now += 1;
                if guess != truth {
                    for f in features {
                        let a = acc.entry(f).or_insert_with(|| Accumulator::new(n_tags));
                        a.bump(truth, 1.0, now);
                        a.bump(guess, -1.0, now);
                    }
                } else {
                    correct += 1;
                }
                total += 1;
                // greedy history uses the model's own guesses, matching decoding
                history.push(tagset.tag(guess));
            }
        }
        log::debug!(
            "tagger epoch {}: {:.2}% token accuracy",
            epoch + 1,
            100.0 * correct as f64 / total.max(1) as f64
        );
    }

    let weights = acc
        .into_iter()
        .map(|(f, a)| (f, a.averaged(now)))
        .filter(|(_, w)| w.iter().any(|&x| x != 0.0))
        .collect();
    Ok(TaggerModel {
        tagset: tagset.clone(),
        averaged: true,
        weights,
    })
}

impl TaggerModel {
    pub fn tagset(&self) -> &TagSet {
        &self.tagset
    }

    pub fn is_averaged(&self) -> bool {
        self.averaged
    }

    pub fn weights(&self) -> &HashMap<String, Vec<f64>> {
        &self.weights
    }

    /// One tag per token, decoded greedily left to right.
    pub fn tag(&self, tokens: &[String]) -> Vec<String> {
        let mut history: Vec<&str> = Vec::with_capacity(tokens.len());
        let mut scores = vec![0.0; self.tagset.len()];
        for i in 0..tokens.len() {
            scores.iter_mut().for_each(|x| *x = 0.0);
            for f in features(tokens, i, &history) {
                if let Some(w) = self.weights.get(&f) {
                    for (s, w) in scores.iter_mut().zip(w) {
                        *s += w;
                    }
                }
            }
            history.push(self.tagset.tag(argmax(&scores)));
        }
        history.into_iter().map(str::to_owned).collect()
    }

    /// JSON with features in sorted order, so equal models serialize to
    /// equal bytes.
    pub fn save<W: Write>(&self, writer: W) -> Result<()> {
        #[derive(Serialize)]
        struct Sorted<'a> {
            tagset: &'a TagSet,
            averaged: bool,
            weights: BTreeMap<&'a str, &'a Vec<f64>>,
        }
        let sorted = Sorted {
            tagset: &self.tagset,
            averaged: self.averaged,
            weights: self.weights.iter().map(|(k, v)| (k.as_str(), v)).collect(),
        };
        serde_json::to_writer(writer, &sorted).map_err(|e| Error::Io(e.into()))
    }

    pub fn load<R: Read>(reader: R) -> Result<Self> {
        let model: TaggerModel =
            serde_json::from_reader(reader).map_err(|e| ParseError::Format(format!("tagger model: {e}")))?;
        if let Some((f, _)) = model.weights.iter().find(|(_, w)| w.len() != model.tagset.len()) {
            return Err(ParseError::Format(format!("feature {f:?} has the wrong number of weights")).into());
        }
        Ok(model)
    }
}

/// Tags for `tokens`; an empty sentence yields an empty list.
pub fn tag_sentence(model: &TaggerModel, tokens: &[String]) -> Vec<String> {
    model.tag(tokens)
}

/// Lowest index wins ties.
fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

fn shape(word: &str) -> String {
    let mut out = String::new();
    for c in word.chars() {
        let class = if c.is_uppercase() {
            'X'
        } else if c.is_lowercase() {
            'x'
        } else if c.is_ascii_digit() {
            'd'
        } else {
            c
        };
        if !out.ends_with(class) {
            out.push(class);
        }
    }
    out
}

fn prefix(word: &str, n: usize) -> &str {
    match word.char_indices().nth(n) {
        Some((i, _)) => &word[..i],
        None => word,
    }
}

fn suffix(word: &str, n: usize) -> &str {
    let count = word.chars().count();
    if count <= n {
        return word;
    }
    let (i, _) = word.char_indices().nth(count - n).unwrap();
    &word[i..]
}

fn features(words: &[String], i: usize, history: &[&str]) -> Vec<String> {
    let word = words[i].to_lowercase();
    let prev_tag = if i >= 1 { history[i - 1] } else { START[0] };
    let prev2_tag = if i >= 2 {
        history[i - 2]
    } else if i == 1 {
        START[0]
    } else {
        START[1]
    };
    let prev_word = if i >= 1 {
        words[i - 1].to_lowercase()
    } else {
        START[0].to_owned()
    };
    let next_word = words
        .get(i + 1)
        .map(|w| w.to_lowercase())
        .unwrap_or_else(|| END.to_owned());

    let mut out = Vec::with_capacity(18);
    out.push("bias".to_owned());
    out.push(format!("w={word}"));
    for n in 1..=3 {
        out.push(format!("suf{n}={}", suffix(&word, n)));
        out.push(format!("pre{n}={}", prefix(&word, n)));
    }
    out.push(format!("shape={}", shape(&words[i])));
    out.push(format!("t-1={prev_tag}"));
    out.push(format!("t-2={prev2_tag}"));
    out.push(format!("t-1,t-2={prev_tag},{prev2_tag}"));
    out.push(format!("t-1,w={prev_tag},{word}"));
    out.push(format!("w-1={prev_word}"));
    out.push(format!("w+1={next_word}"));
    out.push(format!("suf3-1={}", suffix(&prev_word, 3)));
    out.push(format!("suf3+1={}", suffix(&next_word, 3)));
    out
}
