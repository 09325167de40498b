//! Similarity matching for fault-symptom texts.
//!
//! The engine indexes short fault descriptions through a tokenize /
//! stop-word / stemming pipeline, weights terms by augmented frequency and
//! corpus rarity, and ranks stored faults against a queried symptom with a
//! weighted cosine measure. Reference implementations of the classic
//! string distances, PageRank, and k-means clustering ship alongside for
//! comparison studies.
//!
//! ```
//! use symmatch::{build_index, rank_query, FaultRecord, IndexConfig, WeightConfig};
//!
//! let records = vec![
//!     FaultRecord::new(49, "", "radio hu"),
//!     FaultRecord::new(50, "", "radio"),
//!     FaultRecord::new(32, "", "display remains dark"),
//! ];
//! let index = build_index(&records, IndexConfig::default_config()).unwrap();
//! let hits = rank_query("radio hu", &index, &WeightConfig::default(), 3);
//! assert_eq!(hits[0].id, 49);
//! assert!((hits[0].score - 1.0).abs() < 1e-9);
//! ```

pub mod cluster;
pub mod edit_distance;
pub mod error;
pub mod index;
pub mod pagerank;
pub mod similarity;
pub mod text;

pub use error::{Error, Result};
pub use index::{
    build_index, load_index, load_records, parse_records_tsv, save_index, CorpusIndex, FaultRecord,
    IndexConfig,
};
pub use similarity::{
    cosine, rank_query, term_weight, vectorize, MaxTfMode, SimilarityResult, TermVector,
    WeightConfig,
};
pub use text::{preprocess, remove_stopwords, stem, tokenize, StemTable, StopList, TokenSeq};
