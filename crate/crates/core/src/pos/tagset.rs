use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The 45 tags of the Penn Treebank: 36 part-of-speech tags plus 9
/// punctuation tags.
const PENN_TREEBANK: [&str; 45] = [
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD", "NN", "NNS", "NNP", "NNPS", "PDT", "POS",
    "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT", "WP",
    "WP$", "WRB", "#", "$", "``", "''", "-LRB-", "-RRB-", ",", ".", ":",
];

/// Ordered, duplicate-free list of tags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct TagSet {
    tags: Vec<String>,
    index: HashMap<String, usize>,
}

impl TagSet {
    pub fn new<I, S>(tags: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tags: Vec<String> = tags.into_iter().map(Into::into).collect();
        if tags.is_empty() {
            return Err(Error::config("tag set must contain at least one tag"));
        }
        let mut index = HashMap::with_capacity(tags.len());
        for (i, tag) in tags.iter().enumerate() {
            if tag.is_empty() || tag.chars().any(char::is_whitespace) {
                return Err(Error::config(format!("invalid tag {tag:?}")));
            }
            if index.insert(tag.clone(), i).is_some() {
                return Err(Error::config(format!("duplicate tag {tag:?}")));
            }
        }
        Ok(TagSet { tags, index })
    }

    pub fn penn_treebank() -> Self {
        TagSet::new(PENN_TREEBANK).expect("static tag set is valid")
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn index_of(&self, tag: &str) -> Option<usize> {
        self.index.get(tag).copied()
    }

    pub fn contains(&self, tag: &str) -> bool {
        self.index.contains_key(tag)
    }

    pub fn tag(&self, i: usize) -> &str {
        &self.tags[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tags.iter().map(String::as_str)
    }
}

impl TryFrom<Vec<String>> for TagSet {
    type Error = Error;

    fn try_from(tags: Vec<String>) -> Result<Self> {
        TagSet::new(tags)
    }
}

impl From<TagSet> for Vec<String> {
    fn from(set: TagSet) -> Self {
        set.tags
    }
}
