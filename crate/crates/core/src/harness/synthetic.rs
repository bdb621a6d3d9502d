//! Generated corpora whose labels are a function of lexicon scores while
//! every base vector is random. Used to check that the lexicon slots carry
//! signal the classifier can pick up.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::LabeledCorpus;
use crate::embeddings::{EmbeddingTable, Source};
use crate::error::Result;
use crate::iwv::{FeatureStores, Sentence};
use crate::lexicons::{Lexicon, LexiconSet};
use crate::pos::{build_pos_codebook, train_tagger, TagSet, TaggedSentence, TrainOptions};
use crate::seed::keyed_rng;

const DETERMINERS: [&str; 4] = ["the", "a", "this", "that"];
const NOUNS: [&str; 12] = [
    "film", "plot", "actor", "story", "scene", "score", "cast", "script", "ending", "camera", "dialogue", "pacing",
];
const VERBS: [&str; 8] = ["seems", "feels", "looks", "plays", "runs", "moves", "works", "reads"];
const ADVERBS: [&str; 6] = ["really", "quite", "truly", "very", "rather", "fairly"];

/// Largest absolute score per lexicon slot, loosely modeled on real lexicon
/// ranges.
const LEXICON_SCALES: [f64; 6] = [5.844, 10.661, 5.0, 7.526, 0.984, 5.27];

#[derive(Clone, Debug)]
pub struct SyntheticOptions {
    pub sentences: usize,
    pub base_dim: usize,
    pub pos_dim: usize,
    pub lexicons: usize,
    pub seed: u64,
}

impl Default for SyntheticOptions {
    fn default() -> Self {
        SyntheticOptions {
            sentences: 200,
            base_dim: 300,
            pos_dim: 50,
            lexicons: 6,
            seed: 0,
        }
    }
}

pub struct SyntheticTask {
    pub corpus: LabeledCorpus,
    pub stores: FeatureStores,
    pub treebank: Vec<TaggedSentence>,
}

fn pick<'a>(rng: &mut ChaCha8Rng, words: &[&'a str]) -> &'a str {
    words.choose(rng).copied().expect("non-empty word list")
}

/// `DT [RB] JJ NN VBZ RB [.]` with the adjective supplied by the caller.
fn template(rng: &mut ChaCha8Rng, adjective: &str) -> Vec<(String, &'static str)> {
    let mut out = vec![(pick(rng, &DETERMINERS).to_owned(), "DT")];
    if rng.gen_bool(0.4) {
        out.push((pick(rng, &ADVERBS).to_owned(), "RB"));
    }
    out.push((adjective.to_owned(), "JJ"));
    out.push((pick(rng, &NOUNS).to_owned(), "NN"));
    out.push((pick(rng, &VERBS).to_owned(), "VBZ"));
    out.push((pick(rng, &ADVERBS).to_owned(), "RB"));
    if rng.gen_bool(0.5) {
        out.push((".".to_owned(), "."));
    }
    out
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f32> {
    (0..dim).map(|_| rng.gen_range(-0.25f32..=0.25)).collect()
}

/// Every sentence carries one adjective that appears nowhere else in the
/// corpus; its lexicon scores share the sign of the label. All other words
/// are shared across classes and get label-independent scores.
pub fn lexicon_separable(options: &SyntheticOptions) -> Result<SyntheticTask> {
    let mut rng = keyed_rng(options.seed, "synthetic");
    let n_lex = options.lexicons;

    let treebank: Vec<TaggedSentence> = (0..40)
        .map(|i| {
            let words = template(&mut rng, &format!("tb{i}ish"));
            TaggedSentence::new(words.into_iter().map(|(w, t)| (w, t.to_owned())))
        })
        .collect();
    let tagset = TagSet::penn_treebank();
    let tagger = train_tagger(
        &treebank,
        &tagset,
        TrainOptions {
            epochs: 5,
            seed: options.seed,
        },
    )?;
    let codebook = build_pos_codebook(&tagset, options.pos_dim, options.seed)?;

    let mut entries: Vec<Vec<(String, f64)>> = vec![Vec::new(); n_lex];
    for (k, lex) in entries.iter_mut().enumerate() {
        let scale = LEXICON_SCALES[k % LEXICON_SCALES.len()];
        // pin both extremes so the observed range is exactly ±scale
        lex.push((format!("maxterm{k}"), scale));
        lex.push((format!("minterm{k}"), -scale));
        for w in NOUNS.iter().chain(&VERBS).chain(&ADVERBS) {
            if rng.gen_bool(0.5) {
                lex.push(((*w).to_owned(), rng.gen_range(-0.2..0.2) * scale));
            }
        }
    }

    let mut sentences = Vec::with_capacity(options.sentences);
    for i in 0..options.sentences {
        let label = (i % 2) as u8;
        let sign = if label == 1 { 1.0 } else { -1.0 };
        let adjective = format!("adj{i:04}");
        // at least two lexicons cover each adjective
        let mut slots: Vec<usize> = (0..n_lex).collect();
        slots.shuffle(&mut rng);
        let covered = rng.gen_range(n_lex.min(2)..=n_lex);
        for &k in &slots[..covered] {
            let scale = LEXICON_SCALES[k % LEXICON_SCALES.len()];
            entries[k].push((adjective.clone(), sign * rng.gen_range(0.3..1.0) * scale));
        }
        let tokens = template(&mut rng, &adjective).into_iter().map(|(w, _)| w).collect();
        sentences.push(Sentence::new(tokens, Some(label)));
    }

    let lexicons = entries
        .into_iter()
        .enumerate()
        .map(|(k, e)| Lexicon::from_entries(format!("synthetic-{k}"), e))
        .collect::<Result<Vec<_>>>()?;

    let mut vec_rng = keyed_rng(options.seed, "synthetic-vectors");
    let w2v = EmbeddingTable::from_entries(
        options.base_dim,
        Source::Word2Vec,
        NOUNS
            .iter()
            .chain(&VERBS)
            .map(|w| (*w, random_vector(&mut vec_rng, options.base_dim))),
    )?;
    let glove = EmbeddingTable::from_entries(
        options.base_dim,
        Source::GloVe,
        ADVERBS
            .iter()
            .chain(&DETERMINERS)
            .map(|w| (*w, random_vector(&mut vec_rng, options.base_dim))),
    )?;

    let stores = FeatureStores::new(w2v, glove, tagger, codebook, LexiconSet::new(lexicons)?, options.seed)?;
    Ok(SyntheticTask {
        corpus: LabeledCorpus::new("synthetic", sentences)?,
        stores,
        treebank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_and_deterministic() {
        let opts = SyntheticOptions {
            sentences: 20,
            ..Default::default()
        };
        let a = lexicon_separable(&opts).unwrap();
        let b = lexicon_separable(&opts).unwrap();
        assert_eq!(a.corpus, b.corpus);
        assert_eq!(a.stores.lexicons, b.stores.lexicons);
        assert_eq!(a.corpus.class_counts(), [10, 10]);
        assert_eq!(a.stores.lexicons.len(), 6);
    }

    #[test]
    fn labels_follow_lexicon_sign() {
        let task = lexicon_separable(&SyntheticOptions {
            sentences: 40,
            ..Default::default()
        })
        .unwrap();
        for s in &task.corpus.sentences {
            let total: f64 = s
                .tokens
                .iter()
                .filter(|t| t.starts_with("adj"))
                .flat_map(|t| task.stores.lexicons.feature(t))
                .sum();
            assert_eq!(total > 0.0, s.label == Some(1));
        }
    }
}
