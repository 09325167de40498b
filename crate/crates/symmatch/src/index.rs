//! Corpus statistics over a fault database: entry count, per-term document
//! frequencies, and per-entry term frequencies. All numbers the weighting
//! formula consumes come from here.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{preprocess, StemTable, StopList, TokenSeq};

/// One database row: a defect id, optional attachment text, and the fault
/// characteristics text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultRecord {
    pub id: u64,
    pub attachment: String,
    pub characteristics: String,
}

impl FaultRecord {
    pub fn new(id: u64, attachment: impl Into<String>, characteristics: impl Into<String>) -> Self {
        FaultRecord {
            id,
            attachment: attachment.into(),
            characteristics: characteristics.into(),
        }
    }
}

/// Pipeline configuration an index is built with. Queries against the
/// index reuse the same configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexConfig {
    pub stops: StopList,
    pub stems: StemTable,
    /// Concatenate attachment text with characteristics before indexing.
    pub include_attachment: bool,
}

impl IndexConfig {
    pub fn new(stops: StopList, stems: StemTable) -> Result<Self> {
        for root in stems.roots() {
            if stops.contains(root) {
                return Err(Error::domain(format!(
                    "stem root `{root}` is also a stop word; the pipeline would not be idempotent"
                )));
            }
        }
        Ok(IndexConfig {
            stops,
            stems,
            include_attachment: true,
        })
    }

    pub fn with_attachment(mut self, include: bool) -> Self {
        self.include_attachment = include;
        self
    }

    /// The bundled default stop list and stem table.
    pub fn default_config() -> Self {
        IndexConfig::new(StopList::default_list(), StemTable::default_table())
            .expect("bundled defaults are compatible")
    }

    pub fn preprocess(&self, raw: &str) -> TokenSeq {
        preprocess(raw, &self.stops, &self.stems)
    }

    fn document_text(&self, record: &FaultRecord) -> String {
        if self.include_attachment {
            format!("{} {}", record.attachment, record.characteristics)
        } else {
            record.characteristics.clone()
        }
    }

    /// Stable fingerprint of the configuration, stored in index files.
    pub fn fingerprint(&self) -> u64 {
        let mut hash = Fnv1a::new();
        for entry in self.stops.iter() {
            hash.write(entry.as_bytes());
            hash.write(b"\n");
        }
        hash.write(b"--stems--");
        let json = serde_json::to_string(&self.stems).expect("stem table serializes");
        hash.write(json.as_bytes());
        hash.write(if self.include_attachment {
            b"+att"
        } else {
            b"-att"
        });
        hash.finish()
    }
}

/// FNV-1a, used only as a config fingerprint.
struct Fnv1a(u64);

impl Fnv1a {
    fn new() -> Self {
        Fnv1a(0xcbf2_9ce4_8422_2325)
    }
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    fn finish(&self) -> u64 {
        self.0
    }
}

/// Immutable corpus statistics: `n_docs` entries, per-term document
/// frequencies, and per-entry term-frequency maps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusIndex {
    pub config: IndexConfig,
    n_docs: usize,
    doc_freq: BTreeMap<String, usize>,
    docs: BTreeMap<u64, BTreeMap<String, usize>>,
}

impl CorpusIndex {
    /// Number of database entries (every record counts, even ones whose
    /// token sequence is empty after the pipeline).
    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    /// Number of entries containing `term`, if the term is indexed.
    pub fn doc_frequency(&self, term: &str) -> Option<usize> {
        self.doc_freq.get(term).copied()
    }

    pub fn doc_freq(&self) -> &BTreeMap<String, usize> {
        &self.doc_freq
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = u64> + '_ {
        self.docs.keys().copied()
    }

    pub fn docs(&self) -> &BTreeMap<u64, BTreeMap<String, usize>> {
        &self.docs
    }

    /// The stored term-frequency map of one entry.
    pub fn document_tokens(&self, id: u64) -> Result<&BTreeMap<String, usize>> {
        self.docs
            .get(&id)
            .ok_or_else(|| Error::not_found(format!("no database entry with defect id {id}")))
    }

    pub fn vocabulary(&self) -> impl Iterator<Item = &str> {
        self.doc_freq.keys().map(String::as_str)
    }
}

/// Build corpus statistics from fault records. Records keep their
/// identity; ids must be unique and the record set non-empty.
pub fn build_index(records: &[FaultRecord], config: IndexConfig) -> Result<CorpusIndex> {
    if records.is_empty() {
        return Err(Error::domain("empty corpus"));
    }
    let mut docs: BTreeMap<u64, BTreeMap<String, usize>> = BTreeMap::new();
    for record in records {
        let tokens = config.preprocess(&config.document_text(record));
        let mut tf: BTreeMap<String, usize> = BTreeMap::new();
        for token in tokens {
            *tf.entry(token).or_insert(0) += 1;
        }
        if docs.insert(record.id, tf).is_some() {
            return Err(Error::domain(format!("duplicate defect id {}", record.id)));
        }
    }
    let mut doc_freq: BTreeMap<String, usize> = BTreeMap::new();
    for tf in docs.values() {
        for term in tf.keys() {
            *doc_freq.entry(term.clone()).or_insert(0) += 1;
        }
    }
    Ok(CorpusIndex {
        config,
        n_docs: docs.len(),
        doc_freq,
        docs,
    })
}

/// Parse the fault database format: TSV with header
/// `attachment<TAB>defect_id<TAB>characteristics`. Empty attachment cells
/// are allowed.
pub fn parse_records_tsv(text: &str) -> Result<Vec<FaultRecord>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == "attachment\tdefect_id\tcharacteristics" => {}
        Some((_, header)) => {
            return Err(Error::parse_at(
                1,
                format!(
                    "expected header `attachment<TAB>defect_id<TAB>characteristics`, got `{}`",
                    header.trim_end()
                ),
            ))
        }
        None => return Err(Error::parse("empty file")),
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::parse_at(
                idx + 1,
                format!("expected 3 tab-separated fields, got {}", fields.len()),
            ));
        }
        let id: u64 = fields[1].trim().parse().map_err(|_| {
            Error::parse_at(
                idx + 1,
                format!("defect_id `{}` is not an integer", fields[1]),
            )
        })?;
        records.push(FaultRecord::new(id, fields[0], fields[2]));
    }
    Ok(records)
}

pub fn load_records(path: impl AsRef<Path>) -> Result<Vec<FaultRecord>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    parse_records_tsv(&text).map_err(|e| e.with_path(path.display().to_string()))
}

const INDEX_FORMAT: &str = "symmatch-index";
const INDEX_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct IndexFile {
    format: String,
    version: u32,
    config_hash: String,
    index: CorpusIndex,
}

/// Write a versioned, self-describing text representation of the index.
pub fn save_index(index: &CorpusIndex, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = IndexFile {
        format: INDEX_FORMAT.to_string(),
        version: INDEX_VERSION,
        config_hash: format!("{:016x}", index.config.fingerprint()),
        index: index.clone(),
    };
    let json = serde_json::to_string_pretty(&file).expect("index serializes");
    fs::write(path, json + "\n").map_err(|e| Error::io(path.display().to_string(), e))
}

/// Read an index file written by [`save_index`].
pub fn load_index(path: impl AsRef<Path>) -> Result<CorpusIndex> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let file: IndexFile = serde_json::from_str(&text).map_err(|e| {
        Error::parse(format!("not a valid index file: {e}")).with_path(path.display().to_string())
    })?;
    if file.format != INDEX_FORMAT {
        return Err(
            Error::parse(format!("unknown index format `{}`", file.format))
                .with_path(path.display().to_string()),
        );
    }
    if file.version != INDEX_VERSION {
        return Err(Error::parse(format!(
            "unsupported index version {} (supported: {INDEX_VERSION})",
            file.version
        ))
        .with_path(path.display().to_string()));
    }
    let expected = format!("{:016x}", file.index.config.fingerprint());
    if file.config_hash != expected {
        return Err(Error::parse(
            "config hash does not match the stored pipeline configuration".to_string(),
        )
        .with_path(path.display().to_string()));
    }
    Ok(file.index)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plain_config() -> IndexConfig {
        IndexConfig::new(StopList::empty(), StemTable::empty()).unwrap()
    }

    #[test]
    fn single_record_counts_repeated_terms() {
        let records = vec![FaultRecord::new(1, "", "radio radio")];
        let index = build_index(&records, plain_config()).unwrap();
        assert_eq!(index.n_docs(), 1);
        assert_eq!(index.doc_frequency("radio"), Some(1));
        assert_eq!(index.document_tokens(1).unwrap().get("radio"), Some(&2));
    }

    #[test]
    fn disjoint_vocabularies_have_unit_doc_freq() {
        let records = vec![
            FaultRecord::new(1, "", "alpha beta"),
            FaultRecord::new(2, "", "gamma delta"),
        ];
        let index = build_index(&records, plain_config()).unwrap();
        for n in index.doc_freq().values() {
            assert_eq!(*n, 1);
        }
    }

    #[test]
    fn duplicate_id_is_rejected_naming_the_id() {
        let records = vec![
            FaultRecord::new(7, "", "radio"),
            FaultRecord::new(7, "", "hu"),
        ];
        let err = build_index(&records, plain_config()).unwrap_err();
        assert!(err.to_string().contains('7'), "{err}");
    }

    #[test]
    fn empty_corpus_is_rejected() {
        let err = build_index(&[], plain_config()).unwrap_err();
        assert!(err.to_string().contains("empty corpus"));
    }

    #[test]
    fn unknown_id_is_not_found() {
        let records = vec![FaultRecord::new(1, "", "radio")];
        let index = build_index(&records, plain_config()).unwrap();
        assert!(matches!(index.document_tokens(99), Err(Error::NotFound(_))));
    }

    #[test]
    fn all_stopword_documents_stay_in_the_count() {
        let config = IndexConfig::new(StopList::new(["the", "a"]), StemTable::empty()).unwrap();
        let records = vec![
            FaultRecord::new(1, "", "the a"),
            FaultRecord::new(2, "", "radio"),
        ];
        let index = build_index(&records, config).unwrap();
        assert_eq!(index.n_docs(), 2);
        assert!(index.document_tokens(1).unwrap().is_empty());
    }

    #[test]
    fn attachment_concatenation_is_configurable() {
        let records = vec![FaultRecord::new(1, "message", "radio hu")];
        let with = build_index(&records, plain_config()).unwrap();
        assert_eq!(with.document_tokens(1).unwrap().len(), 3);
        let without = build_index(&records, plain_config().with_attachment(false)).unwrap();
        assert_eq!(without.document_tokens(1).unwrap().len(), 2);
    }

    #[test]
    fn doc_freq_matches_brute_force_recount() {
        let records = vec![
            FaultRecord::new(1, "x", "radio hu radio"),
            FaultRecord::new(2, "", "hu message"),
            FaultRecord::new(3, "radio", "message message"),
            FaultRecord::new(4, "", ""),
        ];
        let index = build_index(&records, plain_config()).unwrap();
        for (term, n) in index.doc_freq() {
            let recount = index
                .docs()
                .values()
                .filter(|tf| tf.get(term).copied().unwrap_or(0) > 0)
                .count();
            assert_eq!(*n, recount, "doc_freq mismatch for `{term}`");
        }
        assert_eq!(index.n_docs(), index.docs().len());
    }

    #[test]
    fn rebuild_is_deterministic() {
        let records = vec![
            FaultRecord::new(1, "m", "radio hu"),
            FaultRecord::new(2, "", "message"),
        ];
        let a = build_index(&records, plain_config()).unwrap();
        let b = build_index(&records, plain_config()).unwrap();
        assert_eq!(a, b);
    }

    mod random_corpus_invariants {
        use super::*;
        use proptest::prelude::*;

        fn arb_records() -> impl Strategy<Value = Vec<FaultRecord>> {
            let word = proptest::sample::select(vec!["radio", "hu", "message", "sds", "no"]);
            let text = proptest::collection::vec(word, 0..6).prop_map(|ws| ws.join(" "));
            proptest::collection::vec((text.clone(), text), 1..8).prop_map(|rows| {
                rows.into_iter()
                    .enumerate()
                    .map(|(i, (att, chars))| FaultRecord::new(i as u64, att, chars))
                    .collect()
            })
        }

        proptest! {
            #[test]
            fn doc_freq_and_counts_hold(records in arb_records()) {
                let index = build_index(&records, plain_config()).unwrap();
                prop_assert_eq!(index.n_docs(), index.docs().len());
                prop_assert_eq!(index.n_docs(), records.len());
                for (term, n) in index.doc_freq() {
                    let recount = index
                        .docs()
                        .values()
                        .filter(|tf| tf.contains_key(term))
                        .count();
                    prop_assert_eq!(*n, recount);
                    prop_assert!(*n >= 1 && *n <= index.n_docs());
                }
                for tf in index.docs().values() {
                    for term in tf.keys() {
                        prop_assert!(index.doc_frequency(term).is_some());
                    }
                }
            }
        }
    }

    #[test]
    fn tsv_parse_errors_carry_line_numbers() {
        let bad_header = parse_records_tsv("wrong\theader\there\n").unwrap_err();
        assert!(bad_header.to_string().contains("line 1"));

        let text = "attachment\tdefect_id\tcharacteristics\n\t40\tradio hu\nonly-one-field\n";
        let err = parse_records_tsv(text).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");

        let text = "attachment\tdefect_id\tcharacteristics\n\tforty\tradio hu\n";
        let err = parse_records_tsv(text).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(err.to_string().contains("forty"), "{err}");
    }

    #[test]
    fn tsv_allows_empty_attachment() {
        let text = "attachment\tdefect_id\tcharacteristics\n\t50\tradio\n";
        let records = parse_records_tsv(text).unwrap();
        assert_eq!(records[0].attachment, "");
        assert_eq!(records[0].characteristics, "radio");
    }

    #[test]
    fn index_roundtrips_through_file() {
        let dir = std::env::temp_dir().join(format!("symmatch-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("roundtrip.json");
        let records = vec![FaultRecord::new(1, "m", "radio hu")];
        let index = build_index(&records, IndexConfig::default_config()).unwrap();
        save_index(&index, &path).unwrap();
        let loaded = load_index(&path).unwrap();
        assert_eq!(index, loaded);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn fingerprint_tracks_configuration() {
        let a = IndexConfig::default_config();
        let b = IndexConfig::default_config().with_attachment(false);
        let c = IndexConfig::new(StopList::empty(), StemTable::empty()).unwrap();
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_ne!(a.fingerprint(), c.fingerprint());
        assert_eq!(a.fingerprint(), IndexConfig::default_config().fingerprint());
    }

    #[test]
    fn shared_index_serves_concurrent_readers() {
        let records = vec![
            FaultRecord::new(1, "", "radio hu"),
            FaultRecord::new(2, "", "radio"),
        ];
        let index = std::sync::Arc::new(build_index(&records, plain_config()).unwrap());
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let index = std::sync::Arc::clone(&index);
                std::thread::spawn(move || index.document_tokens(1).unwrap().len())
            })
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), 2);
        }
    }
}
