//! Ranked retrieval against the bundled 14-entry sample database, with
//! expected scores frozen from an independent dense recomputation of the
//! weighting and cosine formulas.

use symmatch::{
    build_index, load_records, rank_query, vectorize, CorpusIndex, IndexConfig, WeightConfig,
};

fn fixture_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/paper_table.tsv")
}

fn fixture_index() -> CorpusIndex {
    let records = load_records(fixture_path()).expect("fixture parses");
    build_index(&records, IndexConfig::default_config()).expect("fixture indexes")
}

#[test]
fn fixture_has_fourteen_entries() {
    assert_eq!(fixture_index().n_docs(), 14);
}

#[test]
fn fixture_document_frequencies() {
    let index = fixture_index();
    let expect = [
        ("radio", 11),
        ("hu", 8),
        ("message", 8),
        ("no", 3),
        ("sds", 2),
        ("dark", 1),
        ("display", 1),
        ("headunit", 1),
        ("on", 1),
        ("receive", 1),
        ("sdars", 1),
        ("sent", 1),
        ("signal", 1),
    ];
    for (term, n) in expect {
        assert_eq!(index.doc_frequency(term), Some(n), "doc_freq({term})");
    }
    assert_eq!(index.doc_freq().len(), expect.len());
}

#[test]
fn fixture_document_token_maps() {
    let index = fixture_index();
    let d49 = index.document_tokens(49).unwrap();
    assert_eq!(d49.len(), 2);
    assert_eq!(d49.get("radio"), Some(&1));
    assert_eq!(d49.get("hu"), Some(&1));

    let d52 = index.document_tokens(52).unwrap();
    assert_eq!(d52.len(), 1);
    assert_eq!(d52.get("radio"), Some(&3));

    let d41 = index.document_tokens(41).unwrap();
    assert_eq!(d41.get("radio"), Some(&3));
    assert_eq!(d41.get("message"), Some(&3));
    assert_eq!(d41.get("hu"), Some(&1));
    assert_eq!(d41.len(), 3);

    assert!(index.document_tokens(99).is_err());
}

#[test]
fn doc_49_vector_weights_match_the_formula() {
    let index = fixture_index();
    let v = vectorize(
        index.document_tokens(49).unwrap(),
        &index,
        &WeightConfig::default(),
    );
    // tf = max_tf = 1, so each weight is log(14 / n_term).
    let expect_radio = (14.0f64 / 11.0).ln();
    let expect_hu = (14.0f64 / 8.0).ln();
    assert!((v.weight("radio") - expect_radio).abs() < 1e-12);
    assert!((v.weight("hu") - expect_hu).abs() < 1e-12);
}

fn top_scores(query: &str) -> Vec<(u64, f64)> {
    let index = fixture_index();
    rank_query(query, &index, &WeightConfig::default(), 14)
        .into_iter()
        .map(|r| (r.id, r.score))
        .collect()
}

#[test]
fn query_radio_hu_ranks_49_first_at_one() {
    let results = top_scores("radio hu");
    assert_eq!(results[0].0, 49);
    assert!((results[0].1 - 1.0).abs() < 1e-9, "score {}", results[0].1);
    assert_eq!(results[1].0, 40);
    assert!((results[1].1 - 0.736534459032).abs() < 1e-9);
    assert_eq!(results[2].0, 41);
    assert!((results[2].1 - 0.613095547900).abs() < 1e-9);
}

#[test]
fn query_radio_hu_message_puts_41_and_45_in_the_top_three() {
    let results = top_scores("radio hu message");
    assert_eq!(results[0].0, 40);
    assert!((results[0].1 - 1.0).abs() < 1e-9);
    let top3: Vec<u64> = results.iter().take(3).map(|(id, _)| *id).collect();
    assert!(top3.contains(&41), "top 3 was {top3:?}");
    assert!(top3.contains(&45), "top 3 was {top3:?}");
    let s41 = results.iter().find(|(id, _)| *id == 41).unwrap().1;
    let s45 = results.iter().find(|(id, _)| *id == 45).unwrap().1;
    assert!((s41 - 0.981338094947).abs() < 1e-9, "41 scored {s41}");
    assert!((s45 - 0.980064359433).abs() < 1e-9, "45 scored {s45}");
}

#[test]
fn query_radio_dvd_message_orders_41_above_45() {
    let results = top_scores("radio dvd message");
    let s41 = results.iter().find(|(id, _)| *id == 41).unwrap().1;
    let s45 = results.iter().find(|(id, _)| *id == 45).unwrap().1;
    assert!(s41 > s45, "41 = {s41}, 45 = {s45}");
    assert!((s41 - 0.852854457906).abs() < 1e-9);
    assert!((s45 - 0.835190192139).abs() < 1e-9);
}

#[test]
fn query_radio_dvd_scores_50_51_52_identically() {
    let results = top_scores("radio dvd");
    let score_of = |want: u64| results.iter().find(|(id, _)| *id == want).unwrap().1;
    let (s50, s51, s52) = (score_of(50), score_of(51), score_of(52));
    assert!((s50 - s51).abs() < 1e-9);
    assert!((s51 - s52).abs() < 1e-9);
    // Repetition of a single term is pure scaling, so all three match the
    // query's radio direction exactly.
    assert!((s50 - 1.0).abs() < 1e-9);
}

#[test]
fn self_similar_query_scores_exactly_one() {
    // This query normalizes to entry 45's own token multiset
    // {radio:1, hu:1, message:3}.
    let results = top_scores("radio hu message message message");
    let s45 = results.iter().find(|(id, _)| *id == 45).unwrap().1;
    assert!((s45 - 1.0).abs() < 1e-9, "45 scored {s45}");
    assert_eq!(results[0].0, 45);
}

#[test]
fn identical_documents_tie_and_break_by_ascending_id() {
    // Docs 46 and 47 normalize to the same token multiset.
    let index = fixture_index();
    assert_eq!(
        index.document_tokens(46).unwrap(),
        index.document_tokens(47).unwrap()
    );
    let results = top_scores("radio hu no message");
    let pos46 = results.iter().position(|(id, _)| *id == 46).unwrap();
    let pos47 = results.iter().position(|(id, _)| *id == 47).unwrap();
    assert_eq!(pos46 + 1, pos47);
    assert!((results[pos46].1 - results[pos47].1).abs() < 1e-15);
}

#[test]
fn ranking_is_stable_across_reruns() {
    let index = fixture_index();
    let cfg = WeightConfig::default();
    let a = rank_query("radio hu message", &index, &cfg, 14);
    let b = rank_query("radio hu message", &index, &cfg, 14);
    assert_eq!(a, b);
}

#[test]
fn rebuilding_the_index_is_deterministic() {
    let records = load_records(fixture_path()).unwrap();
    let a = build_index(&records, IndexConfig::default_config()).unwrap();
    let b = build_index(&records, IndexConfig::default_config()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn attachment_handling_is_a_config_switch() {
    let records = load_records(fixture_path()).unwrap();
    let chars_only = IndexConfig::default_config().with_attachment(false);
    let index = build_index(&records, chars_only).unwrap();
    // Without the attachment column, entry 40 collapses to "radio hu" and
    // ties entry 49 at 1.0; ascending id then puts 40 first.
    let results = rank_query("radio hu", &index, &WeightConfig::default(), 3);
    assert_eq!(results[0].id, 40);
    assert_eq!(results[1].id, 49);
    assert!((results[0].score - results[1].score).abs() < 1e-15);
}
