//! Pattern-based SATD classification and the distance used to pair edits.

use satd_miner::classify::{PatternClassifier, PatternSet, SatdClassifier};
use satd_miner::tracker::normalized_levenshtein;

fn main() -> satd_miner::Result<()> {
    let set = PatternSet::built_in().with_pattern("can we avoid");
    println!("patterns: {}", set.patterns().join(", "));
    let classifier = PatternClassifier::new(set);

    let texts = [
        "TODO: what if exchange.isFailed()?",
        "can we avoid copy-pasting?",
        "no outputs",
        "Bug 1402",
        "debugging aid",
    ];
    for (text, satd) in texts.iter().zip(classifier.classify_batch(&texts)?) {
        println!("{:>5}  {text}", satd);
    }

    for (a, b) in [
        ("Maybe this already exitst", "Maybe this already exists"),
        ("TODO", "TODO check if the message is oneway message"),
        ("TODO: what if creation fails?", "Bug 1402"),
    ] {
        println!("{:.3}  {a:?} -> {b:?}", normalized_levenshtein(a, b));
    }
    Ok(())
}
