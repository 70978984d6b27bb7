//! Tag-pattern detectors over a tagged sentence.

use super::lexicon::WordSet;
use super::tagger::is_be_form;
use super::{AnalyzedDoc, Tag, Token};

/// Half-open token range `[start, end)`.
pub type Span = (usize, usize);

/// Noun-phrase chunks matching `DET? ADJ* NOUN+`, maximal munch, left to right.
pub fn chunk_noun_phrases(tags: &[Tag]) -> Vec<Span> {
    let mut spans = Vec::new();
    let mut i = 0;
    while i < tags.len() {
        let mut j = i;
        if tags[j] == Tag::Det {
            j += 1;
        }
        while j < tags.len() && tags[j] == Tag::Adj {
            j += 1;
        }
        let nouns_start = j;
        while j < tags.len() && tags[j] == Tag::Noun {
            j += 1;
        }
        if j > nouns_start {
            spans.push((i, j));
            i = j;
        } else {
            i += 1;
        }
    }
    spans
}

pub fn is_participle(token: &Token, participles: &WordSet) -> bool {
    token.pos == Tag::Verb
        && (participles.contains(&token.lower)
            || token.lower.ends_with("ed")
            || token.lower.ends_with("en"))
}

/// Counts past participles preceded within two tokens by a form of *be*.
///
/// Each participle counts at most once, so "was being served" is one passive.
pub fn detect_passive(tokens: &[Token], participles: &WordSet) -> usize {
    (0..tokens.len())
        .filter(|&j| is_participle(&tokens[j], participles))
        .filter(|&j| {
            (j.saturating_sub(2)..j)
                .any(|k| tokens[k].pos == Tag::Aux && is_be_form(&tokens[k].lower))
        })
        .count()
}

fn is_verbal(tag: Tag) -> bool {
    matches!(tag, Tag::Verb | Tag::Aux | Tag::Modal)
}

/// Number of verb groups.
///
/// A verb, auxiliary or modal opens a new group unless the nearest preceding
/// token that is not an adverb or particle is itself verbal ("would not have
/// gone", "wanted to eat" are one group each).
pub fn count_clauses(tags: &[Tag]) -> usize {
    let mut groups = 0;
    let mut prev_verbal = false;
    for &tag in tags {
        if is_verbal(tag) {
            if !prev_verbal {
                groups += 1;
            }
            prev_verbal = true;
        } else if !matches!(tag, Tag::Adv | Tag::Part) {
            prev_verbal = false;
        }
    }
    groups
}

/// Candidate for spell checking: letters with optional inner hyphens/apostrophes,
/// excluding clitic fragments such as `n't` and `'s`.
fn typo_candidate(token: &Token) -> bool {
    token.pos != Tag::Punct
        && token.lower.chars().next().is_some_and(char::is_alphabetic)
        && token.lower != "n't"
        && token
            .lower
            .chars()
            .all(|c| c.is_alphabetic() || c == '-' || c == '\'')
}

pub fn is_typo(token: &Token, dictionary: &WordSet, allowlist: &WordSet) -> bool {
    if !typo_candidate(token) || allowlist.contains(&token.lower) {
        return false;
    }
    token
        .lower
        .split('-')
        .filter(|part| !part.is_empty())
        .any(|part| !dictionary.contains(part) && !allowlist.contains(part))
}

/// Alphabetic word tokens absent from both the dictionary and the allowlist.
pub fn count_typos(doc: &AnalyzedDoc, dictionary: &WordSet, allowlist: &WordSet) -> usize {
    doc.tokens()
        .filter(|t| is_typo(t, dictionary, allowlist))
        .count()
}
