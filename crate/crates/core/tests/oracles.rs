mod common;

use common::oracle;
use proptest::prelude::*;
use satd_miner::classify::{contains_word, PatternSet, PatternSource};
use satd_miner::comments::{group_adjacent, scan_comments};
use satd_miner::diff::{diff_lines, hunk_impacts, split_lines, DiffAlgorithm, Hunk, LineInterval};
use satd_miner::tracker::{levenshtein, normalized_levenshtein};

fn interval() -> impl Strategy<Value = Option<LineInterval>> {
    prop::option::of((1usize..12, 0usize..4).prop_map(|(s, len)| LineInterval::new(s, s + len)))
}

fn hunk() -> impl Strategy<Value = Hunk> {
    (1usize..12, 0usize..4, 1usize..12, 0usize..4).prop_map(|(old_start, old_len, new_start, new_len)| Hunk {
        old_start,
        old_len,
        new_start,
        new_len,
        added: Vec::new(),
    })
}

fn lines_of(range: Option<LineInterval>) -> Vec<usize> {
    range.map_or(Vec::new(), |r| (r.start..=r.end).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn levenshtein_matches_recursive_oracle(a in oracle::short_string(), b in oracle::short_string()) {
        prop_assert_eq!(levenshtein(&a, &b), oracle::edit_distance(&a, &b));
        prop_assert_eq!(normalized_levenshtein(&a, &b), oracle::normalized(&a, &b));
    }

    #[test]
    fn normalized_levenshtein_is_a_metric(
        a in oracle::short_string(),
        b in oracle::short_string(),
        c in oracle::short_string(),
    ) {
        let d = normalized_levenshtein;
        prop_assert!((0.0..=1.0).contains(&d(&a, &b)));
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert_eq!(d(&a, &b) == 0.0, a == b);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
    }

    #[test]
    fn diffs_round_trip(a in oracle::line_file(12), b in oracle::line_file(12)) {
        for algorithm in [DiffAlgorithm::Myers, DiffAlgorithm::Histogram] {
            let script = diff_lines(&a, &b, algorithm);
            prop_assert_eq!(script.apply(&a), b.clone());
        }
    }

    #[test]
    fn myers_is_minimal(a in oracle::line_file(10), b in oracle::line_file(10)) {
        let (la, lb) = (split_lines(&a), split_lines(&b));
        let lcs = oracle::exhaustive_lcs(&la, &lb);
        let script = diff_lines(&a, &b, DiffAlgorithm::Myers);
        prop_assert_eq!(script.edit_len(), la.len() + lb.len() - 2 * lcs);
    }

    #[test]
    fn hunk_impacts_matches_line_sets(h in hunk(), old in interval(), new in interval()) {
        let old_hunk: Vec<usize> = (h.old_start..h.old_start + h.old_len).collect();
        let new_hunk: Vec<usize> = (h.new_start..h.new_start + h.new_len).collect();
        let expected = lines_of(old).iter().any(|l| old_hunk.contains(l))
            || lines_of(new).iter().any(|l| new_hunk.contains(l));
        prop_assert_eq!(hunk_impacts(&h, old, new), expected);
    }

    #[test]
    fn grouping_is_idempotent(src in "(( *// [a-z ]{0,6})|( *int x;)|( */\\* [a-z\n]{0,6}\\*/)|)(\n(( *// [a-z ]{0,6})|( *int x;( // t)?)|))*") {
        let once = group_adjacent(scan_comments(&src));
        prop_assert_eq!(group_adjacent(once.clone()), once.clone());
        for pair in once.windows(2) {
            prop_assert!(pair[0].end_line < pair[1].start_line || pair[0].start_line == pair[1].start_line);
        }
    }

    #[test]
    fn scanner_is_total(src in "[a-z /*\"'\\\\\n{}();]{0,80}") {
        let line_count = src.split('\n').count();
        for c in scan_comments(&src) {
            prop_assert!(1 <= c.start_line && c.start_line <= c.end_line && c.end_line <= line_count);
            prop_assert!(c.offset < src.len());
        }
    }

    #[test]
    fn word_match_matches_scan_oracle(text in "[a-z_ :-]{0,16}", pattern in "[a-z_:-]{1,4}") {
        prop_assert_eq!(contains_word(&text, &pattern), oracle::word_match(&text, &pattern));
    }

    #[test]
    fn pattern_matching_ignores_case(text in "[a-zA-Z ]{0,20}") {
        let set = PatternSet::built_in();
        prop_assert_eq!(set.matches(&text), set.matches(&text.to_uppercase()));
        prop_assert_eq!(set.matches(&text), set.matches(&text.to_lowercase()));
    }

    #[test]
    fn more_patterns_never_unflag(text in "[a-z ]{0,20}", extra in "[a-z]{1,5}") {
        let base = PatternSet::new(["todo", "fixme"], PatternSource::BuiltIn).unwrap();
        let wider = base.clone().with_pattern(&extra);
        prop_assert!(!base.matches(&text) || wider.matches(&text));
    }
}
