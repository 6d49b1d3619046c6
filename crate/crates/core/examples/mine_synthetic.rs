//! Generates random histories and scores the miner against their ground truth.
//!
//! `cargo run --release --example mine_synthetic -- <runs> <commits>`

use satd_miner::synth::{random_script, run_script, GeneratorConfig, ScoreReport};
use satd_miner::tracker::MinerConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let runs: u64 = args.next().map_or(Ok(20), |s| s.parse())?;
    let commits: usize = args.next().map_or(Ok(15), |s| s.parse())?;
    let cfg = GeneratorConfig {
        commits,
        ..GeneratorConfig::default()
    };

    let mut total = ScoreReport::default();
    for seed in 0..runs {
        let dir = tempfile::tempdir()?;
        let run = run_script(&random_script(seed, &cfg), dir.path(), &MinerConfig::default())?;
        total.merge(&run.report);
    }

    println!("{:<24} {:>6} {:>6} {:>9} {:>7}", "resolution", "truth", "mined", "precision", "recall");
    for (res, t) in &total.per_resolution {
        println!(
            "{:<24} {:>6} {:>6} {:>9.3} {:>7.3}",
            res.to_string(),
            t.truth,
            t.mined,
            t.precision(),
            t.recall()
        );
    }
    println!("{} mismatches over {runs} histories", total.mismatches.len());
    Ok(())
}
