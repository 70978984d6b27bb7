//! Word lists and the tag lexicon.
//!
//! All lists share one text format: UTF-8, one entry per line, blank lines and
//! lines starting with `#` ignored. The tag lexicon adds a tab-separated tag.

use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::{Arc, LazyLock};

use super::Tag;
use crate::error::{Error, Result};

const POS_LEXICON: &str = include_str!("../../data/pos_lexicon.tsv");
const FUNCTION_WORDS: &str = include_str!("../../data/function_words.txt");
const PARTICIPLES: &str = include_str!("../../data/participles.txt");
const DICTIONARY: &str = include_str!("../../data/dictionary.txt");

fn entries(src: &str) -> impl Iterator<Item = &str> {
    src.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// A set of lower-cased words.
#[derive(Debug, Clone, Default)]
pub struct WordSet(HashSet<String>);

impl WordSet {
    pub fn parse(src: &str) -> Self {
        WordSet(entries(src).map(normalize).collect())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&src))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn insert(&mut self, word: &str) {
        self.0.insert(normalize(word));
    }
}

impl<'a> FromIterator<&'a str> for WordSet {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        WordSet(iter.into_iter().map(normalize).collect())
    }
}

/// Lower-cases and folds typographic apostrophes.
pub fn normalize(word: &str) -> String {
    word.to_lowercase().replace(['\u{2019}', '\u{2018}'], "'")
}

/// Lower-cased word to most-frequent coarse tag.
#[derive(Debug, Clone, Default)]
pub struct TagLexicon(HashMap<String, Tag>);

impl TagLexicon {
    pub fn parse(src: &str) -> Result<Self> {
        let mut map = HashMap::new();
        for (n, line) in src.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, tag) = line.split_once('\t').ok_or_else(|| Error::Parse {
                line: n as u64 + 1,
                message: "expected word<TAB>tag".into(),
            })?;
            let tag: Tag = tag.trim().parse().map_err(|_| Error::Parse {
                line: n as u64 + 1,
                message: format!("unknown tag {tag:?}"),
            })?;
            map.insert(normalize(word), tag);
        }
        Ok(TagLexicon(map))
    }

    pub fn get(&self, lower: &str) -> Option<Tag> {
        self.0.get(lower).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Everything the analyzer needs besides the text.
#[derive(Debug, Clone)]
pub struct Lexicons {
    pub tags: Arc<TagLexicon>,
    pub function_words: Arc<WordSet>,
    pub participles: Arc<WordSet>,
    pub dictionary: Arc<WordSet>,
    /// Per-corpus words (usually proper nouns) that are never typos.
    pub allowlist: Arc<WordSet>,
}

static EMBEDDED: LazyLock<Lexicons> = LazyLock::new(|| Lexicons {
    tags: Arc::new(TagLexicon::parse(POS_LEXICON).expect("embedded tag lexicon is well formed")),
    function_words: Arc::new(WordSet::parse(FUNCTION_WORDS)),
    participles: Arc::new(WordSet::parse(PARTICIPLES)),
    dictionary: Arc::new(WordSet::parse(DICTIONARY)),
    allowlist: Arc::new(WordSet::default()),
});

impl Lexicons {
    /// The lexicons compiled into the crate, with an empty allowlist.
    pub fn embedded() -> Self {
        EMBEDDED.clone()
    }

    pub fn with_dictionary(mut self, dictionary: WordSet) -> Self {
        self.dictionary = Arc::new(dictionary);
        self
    }

    pub fn with_allowlist(mut self, allowlist: WordSet) -> Self {
        self.allowlist = Arc::new(allowlist);
        self
    }
}

impl Default for Lexicons {
    fn default() -> Self {
        Self::embedded()
    }
}
