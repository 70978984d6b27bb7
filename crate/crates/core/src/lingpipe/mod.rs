//! Rule and lexicon based text analysis.
//!
//! [`Analyzer::analyze`] turns raw review text into an [`AnalyzedDoc`]:
//! tokens with coarse part-of-speech tags, grouped into sentences, with
//! noun-phrase chunks, clause and passive-voice counts, and a typo count.
//! Everything is deterministic; the only inputs are the text and the
//! [`Lexicons`].

pub mod lexicon;
pub mod patterns;
pub mod tagger;
pub mod tokenize;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use lexicon::{Lexicons, TagLexicon, WordSet};
pub use patterns::{chunk_noun_phrases, count_clauses, count_typos, detect_passive, Span};
pub use tagger::Tagger;

use crate::error::{Error, Result};

/// Coarse part-of-speech tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Tag {
    Noun,
    Verb,
    Aux,
    Adj,
    Adv,
    Pron,
    Det,
    Adp,
    Conj,
    Num,
    Part,
    Punct,
    Modal,
    Other,
}

impl Tag {
    pub const ALL: [Tag; 14] = [
        Tag::Noun,
        Tag::Verb,
        Tag::Aux,
        Tag::Adj,
        Tag::Adv,
        Tag::Pron,
        Tag::Det,
        Tag::Adp,
        Tag::Conj,
        Tag::Num,
        Tag::Part,
        Tag::Punct,
        Tag::Modal,
        Tag::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Noun => "NOUN",
            Tag::Verb => "VERB",
            Tag::Aux => "AUX",
            Tag::Adj => "ADJ",
            Tag::Adv => "ADV",
            Tag::Pron => "PRON",
            Tag::Det => "DET",
            Tag::Adp => "ADP",
            Tag::Conj => "CONJ",
            Tag::Num => "NUM",
            Tag::Part => "PART",
            Tag::Punct => "PUNCT",
            Tag::Modal => "MODAL",
            Tag::Other => "OTHER",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Tag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown tag {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub lower: String,
    pub pos: Tag,
    pub is_function_word: bool,
    /// Alphabetic characters in the surface form.
    pub char_len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub tokens: Vec<Token>,
    pub np_chunks: Vec<Span>,
    pub clause_count: usize,
    pub passive_count: usize,
}

impl Sentence {
    pub fn tags(&self) -> Vec<Tag> {
        self.tokens.iter().map(|t| t.pos).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzedDoc {
    pub sentences: Vec<Sentence>,
    /// Tokens whose tag is not `PUNCT`.
    pub word_count: usize,
    pub punctuation_count: usize,
    pub typo_count: usize,
}

impl AnalyzedDoc {
    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.sentences.iter().flat_map(|s| s.tokens.iter())
    }

    pub fn words(&self) -> impl Iterator<Item = &Token> {
        self.tokens().filter(|t| t.pos != Tag::Punct)
    }

    pub fn count_tag(&self, tag: Tag) -> usize {
        self.tokens().filter(|t| t.pos == tag).count()
    }

    pub fn total_tokens(&self) -> usize {
        self.sentences.iter().map(|s| s.tokens.len()).sum()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Analyzer {
    lexicons: Lexicons,
}

impl Analyzer {
    pub fn new(lexicons: Lexicons) -> Self {
        Analyzer { lexicons }
    }

    pub fn lexicons(&self) -> &Lexicons {
        &self.lexicons
    }

    pub fn tagger(&self) -> Tagger<'_> {
        Tagger::new(&self.lexicons.tags)
    }

    /// Tokenizes, segments, tags and annotates `text`.
    ///
    /// Fails only for text with no tokens at all.
    pub fn analyze(&self, text: &str) -> Result<AnalyzedDoc> {
        let raw = tokenize::tokenize(text);
        if raw.is_empty() {
            return Err(Error::EmptyDocument);
        }
        let tagger = self.tagger();
        let mut sentences = Vec::new();
        for (start, end) in tokenize::segment(&raw) {
            let slice = &raw[start..end];
            let pairs: Vec<(&str, &str)> = slice
                .iter()
                .map(|t| (t.surface.as_str(), t.lower.as_str()))
                .collect();
            let tags = tagger.tag_pairs(&pairs);
            let tokens: Vec<Token> = slice
                .iter()
                .zip(&tags)
                .map(|(t, &pos)| Token {
                    is_function_word: self.lexicons.function_words.contains(&t.lower),
                    char_len: t.surface.chars().filter(|c| c.is_alphabetic()).count(),
                    surface: t.surface.clone(),
                    lower: t.lower.clone(),
                    pos,
                })
                .collect();
            let passive_count = detect_passive(&tokens, &self.lexicons.participles);
            sentences.push(Sentence {
                np_chunks: chunk_noun_phrases(&tags),
                clause_count: count_clauses(&tags),
                passive_count,
                tokens,
            });
        }

        let punctuation_count = sentences
            .iter()
            .flat_map(|s| &s.tokens)
            .filter(|t| t.pos == Tag::Punct)
            .count();
        let total: usize = sentences.iter().map(|s| s.tokens.len()).sum();
        let mut doc = AnalyzedDoc {
            sentences,
            word_count: total - punctuation_count,
            punctuation_count,
            typo_count: 0,
        };
        doc.typo_count = count_typos(&doc, &self.lexicons.dictionary, &self.lexicons.allowlist);
        Ok(doc)
    }
}
