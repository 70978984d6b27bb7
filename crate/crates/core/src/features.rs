//! The fifteen linguistic cues and the per-corpus feature matrix.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Label};
use crate::error::{Error, Result};
use crate::lingpipe::{AnalyzedDoc, Analyzer, Tag, Token};

pub const N_FEATURES: usize = 15;

/// Column order of every feature vector and of `features.csv`.
pub const FEATURE_NAMES: [&str; N_FEATURES] = [
    "n_words",
    "n_verbs",
    "n_adjectives",
    "n_modal_verbs",
    "n_passive_voice",
    "n_clauses",
    "n_typos",
    "avg_sentence_length",
    "avg_word_length",
    "avg_np_length",
    "pausality",
    "emotiveness",
    "lexical_diversity",
    "content_diversity",
    "redundancy",
];

/// Features that are mostly zero on short reviews.
pub const SPARSE_FEATURES: [&str; 3] = ["n_typos", "n_passive_voice", "n_modal_verbs"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Feature {
    NWords,
    NVerbs,
    NAdjectives,
    NModalVerbs,
    NPassiveVoice,
    NClauses,
    NTypos,
    AvgSentenceLength,
    AvgWordLength,
    AvgNpLength,
    Pausality,
    Emotiveness,
    LexicalDiversity,
    ContentDiversity,
    Redundancy,
}

impl Feature {
    pub const ALL: [Feature; N_FEATURES] = [
        Feature::NWords,
        Feature::NVerbs,
        Feature::NAdjectives,
        Feature::NModalVerbs,
        Feature::NPassiveVoice,
        Feature::NClauses,
        Feature::NTypos,
        Feature::AvgSentenceLength,
        Feature::AvgWordLength,
        Feature::AvgNpLength,
        Feature::Pausality,
        Feature::Emotiveness,
        Feature::LexicalDiversity,
        Feature::ContentDiversity,
        Feature::Redundancy,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        FEATURE_NAMES[self.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector(pub [f64; N_FEATURES]);

impl FeatureVector {
    pub fn get(&self, f: Feature) -> f64 {
        self.0[f.index()]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ExtractOptions {
    /// Report typos as a fraction of words instead of a raw count.
    pub typo_ratio: bool,
}

fn ratio(num: f64, den: f64, what: &str) -> f64 {
    if den == 0.0 {
        log::warn!("{what}: zero denominator, using 0");
        0.0
    } else {
        num / den
    }
}

fn is_content_word(t: &Token) -> bool {
    matches!(t.pos, Tag::Noun | Tag::Verb | Tag::Adj | Tag::Adv) && !t.is_function_word
}

/// (adjectives + adverbs) / (nouns + verbs); 0 when there are no nouns or verbs.
pub fn emotiveness(doc: &AnalyzedDoc) -> f64 {
    let modifiers = (doc.count_tag(Tag::Adj) + doc.count_tag(Tag::Adv)) as f64;
    let heads = (doc.count_tag(Tag::Noun) + doc.count_tag(Tag::Verb)) as f64;
    if heads == 0.0 {
        0.0
    } else {
        modifiers / heads
    }
}

/// Punctuation marks per sentence.
pub fn pausality(doc: &AnalyzedDoc) -> f64 {
    ratio(
        doc.punctuation_count as f64,
        doc.sentences.len() as f64,
        "pausality",
    )
}

/// `(lexical_diversity, content_diversity, redundancy)`.
///
/// Lexical diversity is unique lower-cased words over words, content diversity
/// the same over content words (0 if none), redundancy the share of function words.
pub fn diversity_measures(doc: &AnalyzedDoc) -> Result<(f64, f64, f64)> {
    if doc.word_count == 0 {
        return Err(Error::EmptyDocument);
    }
    let words = doc.word_count as f64;
    let unique: HashSet<&str> = doc.words().map(|t| t.lower.as_str()).collect();
    let content: Vec<&str> = doc
        .words()
        .filter(|t| is_content_word(t))
        .map(|t| t.lower.as_str())
        .collect();
    let unique_content: HashSet<&str> = content.iter().copied().collect();
    let function = doc.words().filter(|t| t.is_function_word).count() as f64;

    let content_div = if content.is_empty() {
        0.0
    } else {
        unique_content.len() as f64 / content.len() as f64
    };
    Ok((unique.len() as f64 / words, content_div, function / words))
}

pub fn extract(doc: &AnalyzedDoc) -> FeatureVector {
    extract_with(doc, ExtractOptions::default())
}

pub fn extract_with(doc: &AnalyzedDoc, opts: ExtractOptions) -> FeatureVector {
    let words = doc.word_count as f64;
    let sentences = doc.sentences.len() as f64;
    let letters: usize = doc.words().map(|t| t.char_len).sum();
    let (np_count, np_words) = doc
        .sentences
        .iter()
        .flat_map(|s| s.np_chunks.iter())
        .fold((0usize, 0usize), |(n, w), &(a, b)| (n + 1, w + (b - a)));
    let (lexical, content, redundancy) = diversity_measures(doc).unwrap_or_else(|_| {
        log::warn!("document without words; diversity measures set to 0");
        (0.0, 0.0, 0.0)
    });
    let typos = if opts.typo_ratio {
        ratio(doc.typo_count as f64, words, "typo ratio")
    } else {
        doc.typo_count as f64
    };

    let mut v = [0.0; N_FEATURES];
    v[Feature::NWords.index()] = words;
    v[Feature::NVerbs.index()] = doc.count_tag(Tag::Verb) as f64;
    v[Feature::NAdjectives.index()] = doc.count_tag(Tag::Adj) as f64;
    v[Feature::NModalVerbs.index()] = doc.count_tag(Tag::Modal) as f64;
    v[Feature::NPassiveVoice.index()] = doc.sentences.iter().map(|s| s.passive_count).sum::<usize>() as f64;
    v[Feature::NClauses.index()] = doc.sentences.iter().map(|s| s.clause_count).sum::<usize>() as f64;
    v[Feature::NTypos.index()] = typos;
    v[Feature::AvgSentenceLength.index()] = ratio(words, sentences, "avg_sentence_length");
    v[Feature::AvgWordLength.index()] = ratio(letters as f64, words, "avg_word_length");
    v[Feature::AvgNpLength.index()] = ratio(np_words as f64, np_count as f64, "avg_np_length");
    v[Feature::Pausality.index()] = pausality(doc);
    v[Feature::Emotiveness.index()] = emotiveness(doc);
    v[Feature::LexicalDiversity.index()] = lexical;
    v[Feature::ContentDiversity.index()] = content;
    v[Feature::Redundancy.index()] = redundancy;
    FeatureVector(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub id: String,
    pub label: Label,
    pub values: Vec<f64>,
}

/// Labelled feature table. Columns follow `feature_names`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub feature_names: Vec<String>,
    pub rows: Vec<FeatureRow>,
}

impl FeatureMatrix {
    pub fn new(feature_names: Vec<String>, rows: Vec<FeatureRow>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.values.len() != feature_names.len()) {
            return Err(Error::DimensionMismatch {
                expected: feature_names.len(),
                got: bad.values.len(),
            });
        }
        Ok(FeatureMatrix { feature_names, rows })
    }

    /// Analyzes every review (in parallel, order preserved) and extracts its cues.
    pub fn from_corpus(corpus: &Corpus, analyzer: &Analyzer, opts: ExtractOptions) -> Result<Self> {
        let rows = corpus
            .reviews()
            .par_iter()
            .map(|r| {
                let doc = analyzer.analyze(&r.text)?;
                Ok(FeatureRow {
                    id: r.id.clone(),
                    label: r.label,
                    values: extract_with(&doc, opts).0.to_vec(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FeatureMatrix {
            feature_names: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
            rows,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.values[j]).collect()
    }

    pub fn column_by_name(&self, name: &str) -> Option<Vec<f64>> {
        self.feature_index(name).map(|j| self.column(j))
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|n| n == name)
    }

    pub fn labels(&self) -> Vec<Label> {
        self.rows.iter().map(|r| r.label).collect()
    }

    /// Values of column `j` split into (fake, real).
    pub fn split_by_label(&self, j: usize) -> (Vec<f64>, Vec<f64>) {
        let mut fake = Vec::new();
        let mut real = Vec::new();
        for r in &self.rows {
            match r.label {
                Label::Fake => fake.push(r.values[j]),
                Label::Real => real.push(r.values[j]),
            }
        }
        (fake, real)
    }

    /// Keeps only the named columns, in the given order.
    pub fn select(&self, names: &[String]) -> Result<Self> {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| {
                self.feature_index(n)
                    .ok_or_else(|| Error::invalid(format!("unknown feature {n:?}")))
            })
            .collect::<Result<_>>()?;
        Ok(FeatureMatrix {
            feature_names: names.to_vec(),
            rows: self
                .rows
                .iter()
                .map(|r| FeatureRow {
                    id: r.id.clone(),
                    label: r.label,
                    values: idx.iter().map(|&j| r.values[j]).collect(),
                })
                .collect(),
        })
    }

    /// Writes `id,label,<features...>` with six decimals per value.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let mut header = vec!["id".to_string(), "label".to_string()];
        header.extend(self.feature_names.iter().cloned());
        wtr.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![r.id.clone(), r.label.to_string()];
            rec.extend(r.values.iter().map(|v| format!("{v:.6}")));
            wtr.write_record(&rec)?;
        }
        wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let header = rdr.headers()?.clone();
        if header.len() < 3 || &header[0] != "id" || &header[1] != "label" {
            return Err(Error::Parse {
                line: 1,
                message: "expected header id,label,<features...>".into(),
            });
        }
        let feature_names: Vec<String> = header.iter().skip(2).map(str::to_string).collect();
        let mut rows = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let values = record
                .iter()
                .skip(2)
                .map(|v| {
                    v.trim().parse::<f64>().map_err(|_| Error::Parse {
                        line,
                        message: format!("not a number: {v:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::Parse {
                    line,
                    message: "non-finite feature value".into(),
                });
            }
            rows.push(FeatureRow {
                id: record[0].to_string(),
                label: record[1].parse()?,
                values,
            });
        }
        Self::new(feature_names, rows)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv(file)
    }
}
