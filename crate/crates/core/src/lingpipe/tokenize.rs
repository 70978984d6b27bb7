//! Tokenization and sentence segmentation.

/// A token before tagging.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawToken {
    pub surface: String,
    /// Normalized lower-case form (`ca` in `can't` becomes `can`).
    pub lower: String,
    pub space_before: bool,
}

const ABBREVIATIONS: &[&str] = &[
    "mr.", "mrs.", "ms.", "dr.", "st.", "jr.", "sr.", "prof.", "vs.", "etc.", "e.g.", "i.e.",
    "a.m.", "p.m.", "approx.", "ave.", "blvd.", "rd.", "no.", "min.", "hr.", "hrs.", "lb.",
    "lbs.", "oz.", "u.s.", "u.k.", "inc.", "ltd.", "co.", "jan.", "feb.", "mar.", "apr.",
    "jun.", "jul.", "aug.", "sep.", "sept.", "oct.", "nov.", "dec.",
];

const CLITICS: &[&str] = &["'s", "'re", "'ve", "'ll", "'d", "'m"];

pub fn is_punct(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '\u{2018}'..='\u{201F}' | '\u{2010}'..='\u{2015}' | '\u{2026}' | '\u{00AB}' | '\u{00BB}'
                | '\u{00A1}' | '\u{00BF}' | '\u{2039}' | '\u{203A}' | '\u{2022}' | '\u{00B7}'
        )
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn lower(s: &str) -> String {
    super::lexicon::normalize(s)
}

/// Splits text into tokens. Deterministic and allocation-only; never fails.
pub fn tokenize(text: &str) -> Vec<RawToken> {
    let mut out = Vec::new();
    for (chunk_idx, chunk) in text.split_whitespace().enumerate() {
        let chars: Vec<char> = chunk.chars().collect();
        let mut first = true;
        let mut push = |out: &mut Vec<RawToken>, surface: String, lower_form: String| {
            out.push(RawToken {
                surface,
                lower: lower_form,
                space_before: first && (chunk_idx > 0 || text.starts_with(char::is_whitespace)),
            });
            first = false;
        };

        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_alphanumeric() {
                let mut j = i + 1;
                while j < chars.len() {
                    let d = chars[j];
                    if d.is_alphanumeric() {
                        j += 1;
                        continue;
                    }
                    let joins = j + 1 < chars.len() && chars[j + 1].is_alphanumeric() && {
                        match d {
                            '-' | '.' => true,
                            ',' => chars[j - 1].is_ascii_digit() && chars[j + 1].is_ascii_digit(),
                            _ => is_apostrophe(d),
                        }
                    };
                    if !joins {
                        break;
                    }
                    j += 1;
                }
                let mut word: String = chars[i..j].iter().collect();
                if j < chars.len() && chars[j] == '.' && takes_period(&word) {
                    word.push('.');
                    j += 1;
                }
                for (surface, lower_form) in split_contraction(&word) {
                    push(&mut out, surface, lower_form);
                }
                i = j;
            } else if is_apostrophe(c) && clitic_at(&chars, i).is_some() {
                let len = clitic_at(&chars, i).unwrap();
                let surface: String = chars[i..i + len].iter().collect();
                let l = lower(&surface);
                push(&mut out, surface, l);
                i += len;
            } else if is_punct(c) {
                let mut j = i + 1;
                if is_terminator(c) {
                    while j < chars.len() && is_terminator(chars[j]) {
                        j += 1;
                    }
                } else {
                    while j < chars.len() && chars[j] == c {
                        j += 1;
                    }
                }
                let surface: String = chars[i..j].iter().collect();
                let l = lower(&surface);
                push(&mut out, surface, l);
                i = j;
            } else {
                // symbols and emoji: one token per char
                let surface = c.to_string();
                push(&mut out, surface.clone(), surface);
                i += 1;
            }
        }
    }
    out
}

/// A standalone clitic chunk such as `'s` following a space.
fn clitic_at(chars: &[char], i: usize) -> Option<usize> {
    let rest: String = chars[i..].iter().collect();
    let l = lower(&rest);
    CLITICS
        .iter()
        .find(|c| l == **c)
        .map(|c| c.chars().count())
}

fn takes_period(word: &str) -> bool {
    let with_period = format!("{}.", lower(word));
    if ABBREVIATIONS.contains(&with_period.as_str()) {
        return true;
    }
    // dotted initialisms such as "U.S" or "a.k.a"
    word.contains('.')
        && word
            .split('.')
            .all(|seg| !seg.is_empty() && seg.chars().count() <= 2 && seg.chars().all(char::is_alphabetic))
}

fn ends_with_ci(chars: &[char], suffix: &str) -> bool {
    let suf: Vec<char> = suffix.chars().collect();
    chars.len() > suf.len()
        && chars[chars.len() - suf.len()..]
            .iter()
            .zip(&suf)
            .all(|(&a, &b)| {
                if b == '\'' {
                    is_apostrophe(a)
                } else {
                    a.to_ascii_lowercase() == b
                }
            })
}

fn split_contraction(word: &str) -> Vec<(String, String)> {
    let chars: Vec<char> = word.chars().collect();
    let split_at = |n: usize| -> (String, String) {
        let k = chars.len() - n;
        (chars[..k].iter().collect(), chars[k..].iter().collect())
    };

    if ends_with_ci(&chars, "n't") {
        let (stem, tail) = split_at(3);
        let stem_lower = match lower(&stem).as_str() {
            "ca" => "can".to_string(),
            "wo" => "will".to_string(),
            "sha" => "shall".to_string(),
            other => other.to_string(),
        };
        return vec![(stem, stem_lower), (tail, "n't".to_string())];
    }
    if lower(word) == "cannot" {
        let (stem, tail) = split_at(3);
        return vec![(stem, "can".into()), (tail, "not".into())];
    }
    for clitic in CLITICS {
        if ends_with_ci(&chars, clitic) {
            let (stem, tail) = split_at(clitic.chars().count());
            let (sl, tl) = (lower(&stem), lower(&tail));
            return vec![(stem, sl), (tail, tl)];
        }
    }
    vec![(word.to_string(), lower(word))]
}

fn is_closing(surface: &str) -> bool {
    surface
        .chars()
        .all(|c| matches!(c, '"' | '\'' | ')' | ']' | '}' | '\u{201D}' | '\u{2019}' | '\u{00BB}'))
}

fn is_opening(surface: &str) -> bool {
    surface
        .chars()
        .all(|c| matches!(c, '"' | '\'' | '(' | '[' | '{' | '\u{201C}' | '\u{2018}' | '\u{00AB}'))
}

/// Groups tokens into sentences, returning `[start, end)` index ranges.
///
/// A sentence ends after a token made of `.`, `!` or `?` when the next token
/// follows whitespace and starts with a capital letter, or at end of text.
/// Closing quotes and brackets glued to the terminator stay with the sentence.
/// Text without any boundary is one sentence.
pub fn segment(tokens: &[RawToken]) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < tokens.len() {
        let t = &tokens[i];
        let terminator = !t.surface.is_empty() && t.surface.chars().all(is_terminator);
        if terminator {
            let mut end = i + 1;
            while end < tokens.len() && !tokens[end].space_before && is_closing(&tokens[end].surface) {
                end += 1;
            }
            let boundary = end == tokens.len() || (tokens[end].space_before && starts_upper(&tokens[end..]));
            if boundary {
                spans.push((start, end));
                start = end;
                i = end;
                continue;
            }
        }
        i += 1;
    }
    if start < tokens.len() {
        spans.push((start, tokens.len()));
    }
    spans
}

fn starts_upper(rest: &[RawToken]) -> bool {
    rest.iter()
        .find(|t| !is_opening(&t.surface))
        .and_then(|t| t.surface.chars().next())
        .is_some_and(char::is_uppercase)
}
