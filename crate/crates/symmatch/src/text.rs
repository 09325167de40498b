//! Text normalization pipeline: tokenize, drop stop words, stem.
//!
//! The fixed composition order is tokenize → remove_stopwords → stem, and
//! the whole pipeline is idempotent: running it on its own (space-joined)
//! output changes nothing.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered sequence of lowercase, punctuation-free tokens.
pub type TokenSeq = Vec<String>;

/// Punctuation stripped from token boundaries. Interior punctuation
/// ("e-mail") is left alone.
const BOUNDARY_PUNCT: &[char] = &[':', ';', '.', ',', '!', '?', '(', ')', '-', '>'];

/// Lowercase, split on whitespace, strip boundary punctuation, drop
/// tokens that end up empty (pure punctuation like "->").
pub fn tokenize(raw: &str) -> TokenSeq {
    raw.split_whitespace()
        .map(|t| t.to_lowercase())
        .map(|t| t.trim_matches(BOUNDARY_PUNCT).to_string())
        .filter(|t| !t.is_empty())
        .collect()
}

/// A set of tokens removed before indexing. Entries are stored lowercase
/// and never empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopList {
    entries: BTreeSet<String>,
}

impl StopList {
    pub fn new<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        StopList {
            entries: entries
                .into_iter()
                .map(|s| s.as_ref().trim().to_lowercase())
                .filter(|s| !s.is_empty())
                .collect(),
        }
    }

    pub fn empty() -> Self {
        StopList {
            entries: BTreeSet::new(),
        }
    }

    /// Parse the stop list file format: one token per line, `#` comments.
    pub fn parse(text: &str) -> Self {
        StopList::new(text.lines().map(strip_comment))
    }

    /// The stop list shipped with the crate.
    pub fn default_list() -> Self {
        StopList::parse(include_str!("../data/stopwords.txt"))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.entries.contains(token)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }
}

/// Lookup table mapping inflected forms to root forms. Roots are fixed
/// points of the mapping, so stemming twice equals stemming once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StemTable {
    map: BTreeMap<String, String>,
}

impl StemTable {
    pub fn empty() -> Self {
        StemTable {
            map: BTreeMap::new(),
        }
    }

    pub fn new<I, K, V>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        let mut map = BTreeMap::new();
        for (k, v) in pairs {
            let key = k.as_ref().trim().to_lowercase();
            let val = v.as_ref().trim().to_lowercase();
            if key.is_empty() || val.is_empty() {
                return Err(Error::parse("stem table entry with empty form"));
            }
            map.insert(key, val);
        }
        let table = StemTable { map };
        table.check_roots()?;
        Ok(table)
    }

    /// Parse the stem table file format: `inflected<TAB>root` per line,
    /// `#` comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = strip_comment(line);
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let (key, val) = match (fields.next(), fields.next(), fields.next()) {
                (Some(k), Some(v), None) => (k.trim().to_lowercase(), v.trim().to_lowercase()),
                _ => {
                    return Err(Error::parse_at(
                        idx + 1,
                        "expected `inflected<TAB>root`".to_string(),
                    ))
                }
            };
            if key.is_empty() || val.is_empty() {
                return Err(Error::parse_at(idx + 1, "empty form in stem table entry"));
            }
            map.insert(key, val);
        }
        let table = StemTable { map };
        table.check_roots()?;
        Ok(table)
    }

    /// The stem table shipped with the crate.
    pub fn default_table() -> Self {
        StemTable::parse(include_str!("../data/stem_table.tsv"))
            .expect("bundled stem table is valid")
    }

    fn check_roots(&self) -> Result<()> {
        for root in self.map.values() {
            if let Some(target) = self.map.get(root) {
                if target != root {
                    return Err(Error::parse(format!(
                        "stem root `{root}` is itself mapped to `{target}`; roots must be fixed points"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn apply<'a>(&'a self, token: &'a str) -> &'a str {
        self.map.get(token).map(String::as_str).unwrap_or(token)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn roots(&self) -> impl Iterator<Item = &str> {
        self.map.values().map(String::as_str)
    }
}

/// Keep every token not in the stop list, preserving order and
/// multiplicity.
pub fn remove_stopwords(tokens: TokenSeq, stops: &StopList) -> TokenSeq {
    tokens.into_iter().filter(|t| !stops.contains(t)).collect()
}

/// Replace each token by its root form where the table has one.
pub fn stem(tokens: TokenSeq, table: &StemTable) -> TokenSeq {
    tokens
        .into_iter()
        .map(|t| table.apply(&t).to_string())
        .collect()
}

/// The full pipeline in its fixed order.
pub fn preprocess(raw: &str, stops: &StopList, stems: &StemTable) -> TokenSeq {
    stem(remove_stopwords(tokenize(raw), stops), stems)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}
