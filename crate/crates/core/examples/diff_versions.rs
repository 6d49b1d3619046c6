//! Line diffs between two file versions with both algorithms.

use satd_miner::diff::{diff_lines, DiffAlgorithm, LineInterval};

const OLD: &str = "\
logger.log(\"Init successful\");
// Moved this config to the bottom
super.init();
";

const NEW: &str = "\
logger.log(\"Init successful\");
// Moved this config
// to the bottom
super.init();
";

fn main() {
    for algorithm in [DiffAlgorithm::Myers, DiffAlgorithm::Histogram] {
        let script = diff_lines(OLD, NEW, algorithm);
        println!("{algorithm:?}: {} changed lines", script.edit_len());
        for h in &script.hunks {
            println!(
                "  -{},{} +{},{}  {:?}",
                h.old_start, h.old_len, h.new_start, h.new_len, h.added
            );
        }
        assert_eq!(script.apply(OLD), NEW);
        let comment_old = Some(LineInterval::new(2, 2));
        let comment_new = Some(LineInterval::new(2, 3));
        println!("  touches the comment on both sides: {}", script.impacts(comment_old, comment_new));
    }
}
