//! Term weighting, vectorization, weighted cosine similarity, and ranked
//! retrieval.
//!
//! A text T maps to a sparse vector whose coordinate for term i is
//! `½·(1 + tf_i/max_tf) · log(N/n_i)`, where N is the corpus size and n_i
//! the number of entries containing the term. Two vectors are compared
//! with a cosine measure carrying optional per-term importance factors.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::index::CorpusIndex;

/// How the `max_tf` denominator of the augmented term frequency is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxTfMode {
    /// Maximum term frequency over the tokens of the text itself.
    WithinText,
    /// Document count of the text's most frequent in-vocabulary term
    /// (ties broken lexicographically).
    Literal,
}

/// Scoring parameters: per-term importance factors, logarithm base, and
/// the `max_tf` interpretation.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightConfig {
    alpha: BTreeMap<String, f64>,
    log_base: f64,
    pub max_tf_mode: MaxTfMode,
}

impl Default for WeightConfig {
    fn default() -> Self {
        WeightConfig {
            alpha: BTreeMap::new(),
            log_base: std::f64::consts::E,
            max_tf_mode: MaxTfMode::WithinText,
        }
    }
}

impl WeightConfig {
    /// Importance factor for a term; unlisted terms weigh 1.
    pub fn alpha(&self, term: &str) -> f64 {
        self.alpha.get(term).copied().unwrap_or(1.0)
    }

    pub fn set_alpha(&mut self, term: impl Into<String>, value: f64) -> Result<()> {
        if value.is_nan() || value <= 0.0 {
            return Err(Error::domain(format!(
                "alpha must be positive, got {value}"
            )));
        }
        self.alpha.insert(term.into(), value);
        Ok(())
    }

    pub fn log_base(&self) -> f64 {
        self.log_base
    }

    pub fn set_log_base(&mut self, base: f64) -> Result<()> {
        if base.is_nan() || base <= 1.0 {
            return Err(Error::domain(format!("log base must exceed 1, got {base}")));
        }
        self.log_base = base;
        Ok(())
    }

    /// Parse the weight-configuration file format: `key = value` lines
    /// with an optional `[alpha]` section of per-term overrides.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = WeightConfig::default();
        let mut in_alpha = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if line == "[alpha]" {
                in_alpha = true;
                continue;
            }
            if line.starts_with('[') {
                return Err(Error::parse_at(
                    idx + 1,
                    format!("unknown section `{line}`"),
                ));
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::parse_at(idx + 1, "expected `key = value`"))?;
            if in_alpha {
                let v: f64 = value
                    .parse()
                    .map_err(|_| Error::parse_at(idx + 1, format!("`{value}` is not a number")))?;
                cfg.set_alpha(key, v)
                    .map_err(|e| Error::parse_at(idx + 1, e.to_string()))?;
            } else {
                match key {
                    "log_base" => {
                        let base = match value {
                            "e" => std::f64::consts::E,
                            other => other.parse().map_err(|_| {
                                Error::parse_at(idx + 1, format!("`{other}` is not a log base"))
                            })?,
                        };
                        cfg.set_log_base(base)
                            .map_err(|e| Error::parse_at(idx + 1, e.to_string()))?;
                    }
                    "max_tf_mode" => {
                        cfg.max_tf_mode = match value {
                            "within" => MaxTfMode::WithinText,
                            "literal" => MaxTfMode::Literal,
                            other => {
                                return Err(Error::parse_at(
                                    idx + 1,
                                    format!(
                                        "max_tf_mode must be `within` or `literal`, got `{other}`"
                                    ),
                                ))
                            }
                        };
                    }
                    other => {
                        return Err(Error::parse_at(idx + 1, format!("unknown key `{other}`")))
                    }
                }
            }
        }
        Ok(cfg)
    }
}

/// Sparse term vector; absent terms have weight 0, present weights are
/// non-negative.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TermVector {
    weights: BTreeMap<String, f64>,
}

impl TermVector {
    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        TermVector {
            weights: pairs
                .into_iter()
                .map(|(t, w)| {
                    debug_assert!(w >= 0.0, "term weights must be non-negative");
                    (t.into(), w)
                })
                .filter(|(_, w)| *w != 0.0)
                .collect(),
        }
    }

    pub fn weight(&self, term: &str) -> f64 {
        self.weights.get(term).copied().unwrap_or(0.0)
    }

    pub fn weights(&self) -> &BTreeMap<String, f64> {
        &self.weights
    }

    pub fn is_zero(&self) -> bool {
        self.weights.values().all(|w| *w == 0.0)
    }

    /// Dense projection over an ordered vocabulary.
    pub fn project(&self, vocabulary: &[String]) -> Vec<f64> {
        vocabulary.iter().map(|t| self.weight(t)).collect()
    }
}

/// One ranked retrieval hit.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SimilarityResult {
    pub id: u64,
    pub score: f64,
}

/// The augmented-frequency term weight
/// `½·(1 + tf/max_tf)·log(n_docs/doc_freq)`.
pub fn term_weight(
    tf: usize,
    max_tf: usize,
    n_docs: usize,
    doc_freq: usize,
    cfg: &WeightConfig,
) -> Result<f64> {
    if tf == 0 {
        return Err(Error::domain("term frequency must be at least 1"));
    }
    if max_tf == 0 {
        return Err(Error::domain("max term frequency must be at least 1"));
    }
    if doc_freq == 0 {
        return Err(Error::domain(
            "term occurs in no database entry; it cannot be weighted",
        ));
    }
    if doc_freq > n_docs {
        return Err(Error::domain(format!(
            "document frequency {doc_freq} exceeds corpus size {n_docs}"
        )));
    }
    let augmented = 0.5 * (1.0 + tf as f64 / max_tf as f64);
    let idf = (n_docs as f64 / doc_freq as f64).ln() / cfg.log_base().ln();
    Ok(augmented * idf)
}

/// Map a term-frequency bag to its weighted vector against a corpus.
/// Terms outside the corpus vocabulary carry no weight. An empty bag, or
/// one with no in-vocabulary term, yields the zero vector.
pub fn vectorize(
    tokens: &BTreeMap<String, usize>,
    index: &CorpusIndex,
    cfg: &WeightConfig,
) -> TermVector {
    if tokens.is_empty() {
        return TermVector::default();
    }
    let max_tf = match cfg.max_tf_mode {
        MaxTfMode::WithinText => tokens.values().copied().max().unwrap_or(0),
        MaxTfMode::Literal => {
            // Most frequent in-vocabulary term; ties fall to the
            // lexicographically first (BTreeMap iteration order).
            let mut best: Option<(&str, usize)> = None;
            for (term, tf) in tokens {
                let beats = best.is_none_or(|(_, btf)| *tf > btf);
                if index.doc_frequency(term).is_some() && beats {
                    best = Some((term, *tf));
                }
            }
            match best {
                Some((term, _)) => index
                    .doc_frequency(term)
                    .expect("term came from the vocabulary"),
                None => return TermVector::default(),
            }
        }
    };
    let pairs = tokens.iter().filter_map(|(term, tf)| {
        index.doc_frequency(term).map(|n_i| {
            let w = term_weight(*tf, max_tf, index.n_docs(), n_i, cfg)
                .expect("corpus statistics satisfy the weight preconditions");
            (term.clone(), w)
        })
    });
    TermVector::from_pairs(pairs)
}

/// Weighted cosine between two vectors:
/// `Σ α_i a_i b_i / √(Σ α_i² a_i² · Σ α_i² b_i²)`, 0 if either norm is 0.
/// The result is clamped to [0, 1].
pub fn cosine(a: &TermVector, b: &TermVector, cfg: &WeightConfig) -> f64 {
    let mut dot = 0.0;
    for (term, wa) in a.weights() {
        let wb = b.weight(term);
        if wb != 0.0 {
            dot += cfg.alpha(term) * wa * wb;
        }
    }
    let norm = |v: &TermVector| {
        v.weights()
            .iter()
            .map(|(term, w)| {
                let aw = cfg.alpha(term) * w;
                aw * aw
            })
            .sum::<f64>()
            .sqrt()
    };
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na * nb)).clamp(0.0, 1.0)
}

/// Run a query text through the index's own pipeline, score it against
/// every stored entry, and return at most `k` results ordered by score
/// descending, ties broken by ascending id. A query that is empty after
/// the pipeline, or shares no vocabulary with the corpus, matches nothing.
pub fn rank_query(
    query: &str,
    index: &CorpusIndex,
    cfg: &WeightConfig,
    k: usize,
) -> Vec<SimilarityResult> {
    let tokens = index.config.preprocess(query);
    let mut tf: BTreeMap<String, usize> = BTreeMap::new();
    for token in tokens {
        *tf.entry(token).or_insert(0) += 1;
    }
    let query_vec = vectorize(&tf, index, cfg);
    if query_vec.is_zero() {
        return Vec::new();
    }
    let mut results: Vec<SimilarityResult> = index
        .docs()
        .iter()
        .map(|(id, doc_tf)| {
            let doc_vec = vectorize(doc_tf, index, cfg);
            SimilarityResult {
                id: *id,
                score: cosine(&query_vec, &doc_vec, cfg),
            }
        })
        .collect();
    results.sort_by(|x, y| {
        y.score
            .partial_cmp(&x.score)
            .expect("scores are finite")
            .then_with(|| x.id.cmp(&y.id))
    });
    results.truncate(k);
    results
}
