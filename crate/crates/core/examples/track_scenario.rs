//! Builds a scripted history, mines it, and prints each operation.
//!
//! Pass a script file to run it instead of the built-in one:
//! `cargo run --example track_scenario -- tests/corpus/tomcat_lifecycle.script`

use satd_miner::synth::{run_script, HistoryScript};
use satd_miner::tracker::MinerConfig;

const SCRIPT: &str = "\
commit import
write src/Service.java
<<<
public class Service {
    public void init() {
        logger.log(\"Init successful\");
        // TODO: move this config to the bottom
        super.init();
    }
}
>>>
expect SATD_ADDED TODO: move this config to the bottom
commit reflow
edit src/Service.java 4 1
<<<
        // TODO: move this config
        // to the bottom
>>>
expect SATD_CHANGED TODO: move this config\\nto the bottom
commit rename
rename src/Service.java core/Service.java
expect FILE_PATH_CHANGED TODO: move this config\\nto the bottom
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => SCRIPT.to_string(),
    };
    let script = HistoryScript::parse(&text)?;
    let dir = tempfile::tempdir()?;
    let run = run_script(&script, dir.path(), &MinerConfig::default())?;

    for op in &run.outcome.operations {
        let at = op.new_occurrence.as_ref().or(op.old_occurrence.as_ref());
        println!(
            "#{:<3} instance {:<3} {:<24} {}  {:<22} {:?}",
            op.satd_id,
            op.instance_id,
            op.resolution.to_string(),
            op.child_commit.short_sha(),
            at.map_or("", |o| o.path()),
            op.text()
        );
    }
    for e in &run.outcome.errors {
        println!("error: {e}");
    }
    println!("matches the script's expectations: {}", run.report.is_perfect());
    Ok(())
}
