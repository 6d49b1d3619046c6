//! Extracts comments from a Java source with their enclosing class and method.

use satd_miner::comments::extract;

const SOURCE: &str = r#"package demo;

/** Talks to the remote server. */
public class Client {
    private String url = "http://x // not a comment";

    protected void connectIfNecessary() {
        // can we avoid copy-pasting?
        // second line of the same note
        if (!client.isConnected()) {
            connect(); // trailing comments stay separate
        }
        /* block
           comment */
    }
}
"#;

fn main() {
    for c in extract(SOURCE, "src/Client.java") {
        println!(
            "{:<7} lines {}-{}  class={:?} method={:?}\n        {:?}",
            c.comment.kind,
            c.comment.start_line,
            c.comment.end_line,
            c.containing_class,
            c.containing_method,
            c.text()
        );
    }
}
