//! Labelled review corpora and the canonical CSV format.
//!
//! Canonical files are UTF-8 CSV with the header `id,text,label,sentiment,source`.
//! Text is stored verbatim; no normalization happens at ingestion.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CANONICAL_HEADER: [&str; 5] = ["id", "text", "label", "sentiment", "source"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Fake,
    Real,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Fake => "fake",
            Label::Real => "real",
        }
    }

    /// Binary class index used by the learners: fake is the positive class.
    pub fn class_index(self) -> usize {
        match self {
            Label::Fake => 1,
            Label::Real => 0,
        }
    }

    pub fn from_class_index(idx: usize) -> Self {
        if idx == 1 {
            Label::Fake
        } else {
            Label::Real
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fake" => Ok(Label::Fake),
            "real" => Ok(Label::Real),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sentiment {
    Positive,
    Negative,
}

impl Sentiment {
    pub fn as_str(self) -> &'static str {
        match self {
            Sentiment::Positive => "positive",
            Sentiment::Negative => "negative",
        }
    }

    fn parse_optional(s: &str) -> Result<Option<Self>> {
        match s.trim().to_ascii_lowercase().as_str() {
            "" => Ok(None),
            "positive" => Ok(Some(Sentiment::Positive)),
            "negative" => Ok(Some(Sentiment::Negative)),
            _ => Err(Error::UnknownSentiment(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Review {
    pub id: String,
    pub text: String,
    pub label: Label,
    pub sentiment: Option<Sentiment>,
    pub source: Option<String>,
}

impl Review {
    pub fn new(id: impl Into<String>, text: impl Into<String>, label: Label) -> Result<Self> {
        let review = Review {
            id: id.into(),
            text: text.into(),
            label,
            sentiment: None,
            source: None,
        };
        if review.text.trim().is_empty() {
            return Err(Error::invalid(format!("review {:?} has empty text", review.id)));
        }
        Ok(review)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    reviews: Vec<Review>,
}

impl Corpus {
    /// Builds a corpus, rejecting duplicate ids and blank texts.
    pub fn new(reviews: Vec<Review>) -> Result<Self> {
        let mut seen = HashSet::new();
        for r in &reviews {
            if r.text.trim().is_empty() {
                return Err(Error::invalid(format!("review {:?} has empty text", r.id)));
            }
            if !seen.insert(r.id.as_str()) {
                return Err(Error::DuplicateId(r.id.clone()));
            }
        }
        Ok(Corpus { reviews })
    }

    pub fn reviews(&self) -> &[Review] {
        &self.reviews
    }

    pub fn len(&self) -> usize {
        self.reviews.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reviews.is_empty()
    }

    /// Counts per label. Both labels are always present in the map.
    pub fn class_balance(&self) -> BTreeMap<Label, usize> {
        let mut counts = BTreeMap::from([(Label::Fake, 0), (Label::Real, 0)]);
        for r in &self.reviews {
            *counts.entry(r.label).or_default() += 1;
        }
        counts
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(file)
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_reader(reader);

        let header = rdr.headers()?.clone();
        let got: Vec<&str> = header.iter().map(str::trim).collect();
        if got != CANONICAL_HEADER {
            return Err(Error::Parse {
                line: 1,
                message: format!(
                    "expected header {:?}, found {:?}",
                    CANONICAL_HEADER.join(","),
                    got.join(",")
                ),
            });
        }

        let mut reviews = Vec::new();
        let mut seen = HashSet::new();
        for record in rdr.records() {
            let record = record.map_err(|e| {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                Error::Parse {
                    line,
                    message: e.to_string(),
                }
            })?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            if record.len() != CANONICAL_HEADER.len() {
                return Err(Error::Parse {
                    line,
                    message: format!("expected 5 fields, found {}", record.len()),
                });
            }
            let id = record[0].to_string();
            let text = record[1].to_string();
            if text.trim().is_empty() {
                return Err(Error::Parse {
                    line,
                    message: format!("review {id:?} has empty text"),
                });
            }
            let label: Label = record[2].parse()?;
            let sentiment = Sentiment::parse_optional(&record[3])?;
            let source = Some(record[4].to_string()).filter(|s| !s.is_empty());
            if !seen.insert(id.clone()) {
                return Err(Error::DuplicateId(id));
            }
            reviews.push(Review {
                id,
                text,
                label,
                sentiment,
                source,
            });
        }
        Ok(Corpus { reviews })
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(CANONICAL_HEADER)?;
        for r in &self.reviews {
            wtr.write_record([
                r.id.as_str(),
                r.text.as_str(),
                r.label.as_str(),
                r.sentiment.map(Sentiment::as_str).unwrap_or(""),
                r.source.as_deref().unwrap_or(""),
            ])?;
        }
        wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }
}

/// Column mapping for converting a third-party delimited file into a [`Corpus`].
///
/// Any column left as `None` is looked up among common header names.
#[derive(Debug, Clone)]
pub struct ImportOptions {
    pub delimiter: u8,
    pub id_column: Option<String>,
    pub text_column: Option<String>,
    pub label_column: Option<String>,
    pub sentiment_column: Option<String>,
    pub source_column: Option<String>,
    /// Extra raw label values (lower-cased) that mean "fake".
    pub fake_values: Vec<String>,
    /// Extra raw label values (lower-cased) that mean "real".
    pub real_values: Vec<String>,
}

impl Default for ImportOptions {
    fn default() -> Self {
        ImportOptions {
            delimiter: b',',
            id_column: None,
            text_column: None,
            label_column: None,
            sentiment_column: None,
            source_column: None,
            fake_values: Vec::new(),
            real_values: Vec::new(),
        }
    }
}

const TEXT_NAMES: &[&str] = &["text", "review", "review_text", "reviews", "content", "body"];
const LABEL_NAMES: &[&str] = &[
    "label", "class", "deceptive", "fake", "is_fake", "real/fake", "fake/real", "type",
];
const SENTIMENT_NAMES: &[&str] = &["sentiment", "polarity", "positive/negative"];
const SOURCE_NAMES: &[&str] = &["source", "restaurant", "restaurant_id", "business", "hotel"];
const ID_NAMES: &[&str] = &["id", "review_id", "index"];

const FAKE_TOKENS: &[&str] = &["fake", "deceptive", "f", "spam", "yes", "true", "1"];
const REAL_TOKENS: &[&str] = &["real", "truthful", "genuine", "t", "r", "ham", "no", "false", "0"];

fn find_column(
    header: &csv::StringRecord,
    explicit: Option<&str>,
    candidates: &[&str],
) -> Result<Option<usize>> {
    let norm = |s: &str| s.trim().to_ascii_lowercase();
    if let Some(name) = explicit {
        return header
            .iter()
            .position(|h| norm(h) == norm(name))
            .map(Some)
            .ok_or_else(|| Error::invalid(format!("column {name:?} not found in header")));
    }
    Ok(candidates
        .iter()
        .find_map(|c| header.iter().position(|h| norm(h) == *c)))
}

/// Converts a delimited file with arbitrary column names into canonical form.
///
/// Rows without an id column get sequential ids `r0001`, `r0002`, ... in file order.
pub fn import_delimited<R: Read>(reader: R, opts: &ImportOptions) -> Result<Corpus> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(opts.delimiter)
        .flexible(true)
        .from_reader(reader);
    let header = rdr.headers()?.clone();

    let text_col = find_column(&header, opts.text_column.as_deref(), TEXT_NAMES)?
        .ok_or_else(|| Error::invalid("no text column found; pass one explicitly"))?;
    let label_col = find_column(&header, opts.label_column.as_deref(), LABEL_NAMES)?
        .ok_or_else(|| Error::invalid("no label column found; pass one explicitly"))?;
    let id_col = find_column(&header, opts.id_column.as_deref(), ID_NAMES)?;
    let sentiment_col = find_column(&header, opts.sentiment_column.as_deref(), SENTIMENT_NAMES)?;
    let source_col = find_column(&header, opts.source_column.as_deref(), SOURCE_NAMES)?;

    let mut reviews = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize| record.get(i).unwrap_or("").trim().to_string();

        let text = record.get(text_col).unwrap_or("").to_string();
        if text.trim().is_empty() {
            log::warn!("line {line}: skipping row with empty text");
            continue;
        }
        let raw_label = field(label_col).to_ascii_lowercase();
        let label = if opts.fake_values.contains(&raw_label) || FAKE_TOKENS.contains(&raw_label.as_str())
        {
            Label::Fake
        } else if opts.real_values.contains(&raw_label) || REAL_TOKENS.contains(&raw_label.as_str()) {
            Label::Real
        } else {
            return Err(Error::Parse {
                line,
                message: format!("unknown label {raw_label:?}"),
            });
        };
        let sentiment = match sentiment_col.map(field) {
            None => None,
            Some(s) => match s.to_ascii_lowercase().as_str() {
                "" => None,
                "positive" | "pos" | "+" => Some(Sentiment::Positive),
                "negative" | "neg" | "-" => Some(Sentiment::Negative),
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown sentiment {other:?}"),
                    })
                }
            },
        };
        let id = id_col
            .map(field)
            .filter(|s| !s.is_empty())
            .unwrap_or_else(|| format!("r{:04}", row + 1));
        let source = source_col.map(field).filter(|s| !s.is_empty());
        reviews.push(Review {
            id,
            text,
            label,
            sentiment,
            source,
        });
    }
    Corpus::new(reviews)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "id,text,label,sentiment,source\n";

    fn load(s: &str) -> Result<Corpus> {
        Corpus::from_reader(s.as_bytes())
    }

    #[test]
    fn header_only_is_empty() {
        let c = load(HEADER).unwrap();
        assert!(c.is_empty());
        let bal = c.class_balance();
        assert_eq!(bal[&Label::Fake], 0);
        assert_eq!(bal[&Label::Real], 0);
    }

    #[test]
    fn labels_are_case_insensitive() {
        let c = load(&format!("{HEADER}a,Nice food.,FAKE,,\nb,Bad.,Real,negative,r1\n")).unwrap();
        assert_eq!(c.reviews()[0].label, Label::Fake);
        assert_eq!(c.reviews()[1].label, Label::Real);
        assert_eq!(c.reviews()[1].sentiment, Some(Sentiment::Negative));
        assert_eq!(c.reviews()[1].source.as_deref(), Some("r1"));
        assert_eq!(c.reviews()[0].source, None);
    }

    #[test]
    fn unknown_label_names_the_token() {
        let err = load(&format!("{HEADER}a,Nice.,bogus,,\n")).unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn duplicate_ids_rejected() {
        let err = load(&format!("{HEADER}a,x,fake,,\na,y,real,,\n")).unwrap_err();
        assert!(matches!(err, Error::DuplicateId(ref id) if id == "a"));
    }

    #[test]
    fn malformed_row_reports_line() {
        let err = load(&format!("{HEADER}a,x,fake,,\nb,y,real\n")).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn blank_text_rejected() {
        assert!(load(&format!("{HEADER}a,\"   \",fake,,\n")).is_err());
    }

    #[test]
    fn wrong_header_rejected() {
        assert!(load("id,body,label\n").is_err());
    }

    #[test]
    fn class_balance_counts() {
        let reviews = (0..3)
            .map(|i| Review::new(format!("f{i}"), "text", Label::Fake).unwrap())
            .collect();
        let bal = Corpus::new(reviews).unwrap().class_balance();
        assert_eq!(bal[&Label::Fake], 3);
        assert_eq!(bal[&Label::Real], 0);
    }

    #[test]
    fn quoted_text_round_trips() {
        let src = format!("{HEADER}a,\"He said \"\"wow\"\", then left.\nNew line\",fake,positive,\n");
        let c = load(&src).unwrap();
        let mut out = Vec::new();
        c.write_csv(&mut out).unwrap();
        assert_eq!(Corpus::from_reader(out.as_slice()).unwrap(), c);
    }

    #[test]
    fn import_maps_columns_and_labels() {
        let src = "Review\tDeceptive\tPolarity\tRestaurant\nGreat food!\tdeceptive\tpositive\tA\nMeh.\ttruthful\tnegative\tB\n";
        let opts = ImportOptions {
            delimiter: b'\t',
            ..Default::default()
        };
        let c = import_delimited(src.as_bytes(), &opts).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.reviews()[0].id, "r0001");
        assert_eq!(c.reviews()[0].label, Label::Fake);
        assert_eq!(c.reviews()[1].label, Label::Real);
        assert_eq!(c.reviews()[1].source.as_deref(), Some("B"));
    }

    #[test]
    fn import_custom_label_values() {
        let src = "text,kind\nx,lie\ny,honest\n";
        let opts = ImportOptions {
            label_column: Some("kind".into()),
            fake_values: vec!["lie".into()],
            real_values: vec!["honest".into()],
            ..Default::default()
        };
        let c = import_delimited(src.as_bytes(), &opts).unwrap();
        assert_eq!(c.class_balance()[&Label::Fake], 1);
    }
}
