//! Plugs a shell command in as the SATD classifier.
//!
//! The command reads one escaped comment per line on stdin and answers
//! `1` or `0` per line on stdout.

use satd_miner::classify::{escape_line, register_external};

fn main() -> satd_miner::Result<()> {
    let cmd = r#"while IFS= read -r line; do case "$line" in *later*|*TODO*) echo 1;; *) echo 0;; esac; done"#;
    let classifier = register_external(cmd)?;

    let texts = ["fix this later", "TODO\nsecond line", "returns the index"];
    for (text, satd) in texts.iter().zip(classifier.classify_batch(&texts)?) {
        println!("{satd:>5}  sent {:?}", escape_line(text));
    }
    Ok(())
}
