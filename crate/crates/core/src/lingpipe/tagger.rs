//! Lexicon-first part-of-speech tagger.
//!
//! Order of precedence for a token:
//! punctuation / symbols / numbers, closed-class tables (modals, auxiliaries,
//! negation), the tag lexicon, suffix rules, capitalization, then `OTHER`.
//! A second pass decides whether forms of *have* and *do* are auxiliaries.

use super::lexicon::TagLexicon;
use super::tokenize::is_punct;
use super::Tag;

pub const MODALS: &[&str] = &[
    "can", "could", "may", "might", "must", "shall", "should", "will", "would", "'ll", "'d",
];

pub const BE_FORMS: &[&str] = &["be", "am", "is", "are", "was", "were", "been", "being", "'m", "'re"];

const HAVE_DO_FORMS: &[&str] = &["have", "has", "had", "having", "'ve", "do", "does", "did"];

const SUBJECT_LIKE: &[&str] = &[
    "i", "you", "he", "she", "it", "we", "they", "that", "there", "here", "what", "who", "where",
    "how", "this",
];

/// Suffix rules for words missing from the lexicon, checked in order.
const SUFFIX_RULES: &[(&str, Tag)] = &[
    ("ly", Tag::Adv),
    ("ing", Tag::Verb),
    ("ed", Tag::Verb),
    ("ize", Tag::Verb),
    ("ise", Tag::Verb),
    ("ify", Tag::Verb),
    ("ous", Tag::Adj),
    ("ful", Tag::Adj),
    ("ive", Tag::Adj),
    ("able", Tag::Adj),
    ("ible", Tag::Adj),
    ("less", Tag::Adj),
    ("ish", Tag::Adj),
    ("ical", Tag::Adj),
    ("ic", Tag::Adj),
    ("est", Tag::Adj),
    ("tion", Tag::Noun),
    ("sion", Tag::Noun),
    ("ment", Tag::Noun),
    ("ness", Tag::Noun),
    ("ity", Tag::Noun),
    ("ance", Tag::Noun),
    ("ence", Tag::Noun),
    ("ship", Tag::Noun),
    ("hood", Tag::Noun),
    ("ism", Tag::Noun),
    ("ist", Tag::Noun),
    ("er", Tag::Noun),
    ("or", Tag::Noun),
];

pub fn is_be_form(lower: &str) -> bool {
    BE_FORMS.contains(&lower)
}

fn is_number(surface: &str) -> bool {
    surface.starts_with(|c: char| c.is_ascii_digit())
        && surface
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | ',' | ':' | '/' | '-'))
}

/// Tag from suffix rules alone; `None` if no rule matches.
pub fn suffix_tag(lower: &str) -> Option<Tag> {
    if !lower.chars().all(char::is_alphabetic) {
        return None;
    }
    SUFFIX_RULES
        .iter()
        .find(|(suffix, _)| lower.len() > suffix.len() + 1 && lower.ends_with(suffix))
        .map(|&(_, tag)| tag)
}

#[derive(Debug, Clone)]
pub struct Tagger<'a> {
    lexicon: &'a TagLexicon,
}

impl<'a> Tagger<'a> {
    pub fn new(lexicon: &'a TagLexicon) -> Self {
        Tagger { lexicon }
    }

    fn base_tag(&self, surface: &str, lower: &str, prev_lower: Option<&str>) -> Tag {
        if surface.chars().all(is_punct) {
            return Tag::Punct;
        }
        if !surface.chars().any(char::is_alphanumeric) {
            return Tag::Other;
        }
        if is_number(surface) {
            return Tag::Num;
        }
        if lower == "n't" || lower == "not" {
            return Tag::Part;
        }
        if MODALS.contains(&lower) {
            return Tag::Modal;
        }
        if is_be_form(lower) || HAVE_DO_FORMS.contains(&lower) {
            return Tag::Aux;
        }
        if lower == "'s" {
            return match prev_lower {
                Some(p) if SUBJECT_LIKE.contains(&p) => Tag::Aux,
                _ => Tag::Part,
            };
        }
        if let Some(tag) = self.lexicon.get(lower) {
            return tag;
        }
        if let Some(tag) = suffix_tag(lower) {
            return tag;
        }
        if surface.starts_with(char::is_uppercase) {
            return Tag::Noun;
        }
        Tag::Other
    }

    /// Tags surface strings; lower forms are derived by plain lower-casing.
    pub fn tag_pos(&self, tokens: &[&str]) -> Vec<Tag> {
        let lowers: Vec<String> = tokens.iter().map(|t| super::lexicon::normalize(t)).collect();
        let pairs: Vec<(&str, &str)> = tokens
            .iter()
            .zip(&lowers)
            .map(|(s, l)| (*s, l.as_str()))
            .collect();
        self.tag_pairs(&pairs)
    }

    /// Tags `(surface, lower)` pairs.
    pub fn tag_pairs(&self, tokens: &[(&str, &str)]) -> Vec<Tag> {
        let mut tags: Vec<Tag> = tokens
            .iter()
            .enumerate()
            .map(|(i, (surface, lower))| {
                let prev = i.checked_sub(1).map(|p| tokens[p].1);
                self.base_tag(surface, lower, prev)
            })
            .collect();

        // have/do are auxiliaries only when a verb follows (adverbs, negation
        // and pronouns may intervene); otherwise they are main verbs.
        for i in 0..tokens.len() {
            if tags[i] != Tag::Aux || !HAVE_DO_FORMS.contains(&tokens[i].1) {
                continue;
            }
            let next = (i + 1..tokens.len())
                .find(|&j| !matches!(tags[j], Tag::Adv | Tag::Part | Tag::Pron))
                .map(|j| tags[j]);
            if !matches!(next, Some(Tag::Verb | Tag::Aux)) {
                tags[i] = Tag::Verb;
            }
        }
        tags
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lingpipe::lexicon::Lexicons;

    fn tag(words: &[&str]) -> Vec<Tag> {
        let lex = Lexicons::embedded();
        Tagger::new(&lex.tags).tag_pos(words)
    }

    #[test]
    fn modal_lexicon() {
        for m in ["can", "could", "may", "might", "must", "shall", "should", "will", "would"] {
            assert_eq!(tag(&[m]), [Tag::Modal], "{m}");
        }
    }

    #[test]
    fn adverb_by_lexicon_and_by_suffix() {
        assert_eq!(tag(&["quickly"]), [Tag::Adv]);
        // not in the lexicon; falls through to the -ly rule
        assert_eq!(suffix_tag("zorbly"), Some(Tag::Adv));
        assert_eq!(tag(&["zorbly"]), [Tag::Adv]);
    }

    #[test]
    fn punctuation_and_fallbacks() {
        assert_eq!(tag(&["???"]), [Tag::Punct]);
        assert_eq!(tag(&["42"]), [Tag::Num]);
        assert_eq!(tag(&["\u{1F600}"]), [Tag::Other]);
        assert_eq!(tag(&["xqzt"]), [Tag::Other]);
        assert_eq!(tag(&["Xqzt"]), [Tag::Noun]);
    }

    #[test]
    fn reference_sentence() {
        assert_eq!(
            tag(&["The", "food", "was", "great", "!"]),
            [Tag::Det, Tag::Noun, Tag::Aux, Tag::Adj, Tag::Punct]
        );
    }

    #[test]
    fn have_as_main_verb_or_auxiliary() {
        assert_eq!(tag(&["I", "had", "the", "steak"])[1], Tag::Verb);
        assert_eq!(tag(&["I", "have", "never", "eaten"])[1], Tag::Aux);
        assert_eq!(tag(&["I", "did", "it"])[1], Tag::Verb);
    }
}
