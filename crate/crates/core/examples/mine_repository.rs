//! Mines a local clone (or remote URL) and prints a per-resolution summary.
//!
//! `cargo run --example mine_repository -- /path/to/java/repo [terminal_sha]`

use std::collections::BTreeMap;

use satd_miner::git_walk::{open_repo, resolve_terminal, RepoSource};
use satd_miner::tracker::{mine_handle, Ledger, MinerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let location = args.next().ok_or("usage: mine_repository <path-or-url> [terminal_sha]")?;
    let mut source = RepoSource::new(location);
    if let Some(sha) = args.next() {
        source = source.with_terminal(sha)?;
    }

    let workdir = std::env::temp_dir().join("satd-miner-clones");
    let handle = open_repo(&source, &workdir)?;
    let terminal = resolve_terminal(&handle, source.terminal_sha())?;
    let outcome = mine_handle(&handle, &terminal, &MinerConfig::default(), Ledger::new(), &mut |p| {
        if p.done % 50 == 0 {
            eprintln!("{:5.1}% {}", p.percent(), &p.commit[..7]);
        }
    })?;

    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for op in &outcome.operations {
        *counts.entry(op.resolution.to_string()).or_default() += 1;
    }
    println!("{} at {}: {} diffs", outcome.project_name, terminal.short_sha(), outcome.diffs);
    for (res, n) in counts {
        println!("  {res:<24} {n}");
    }
    println!("  {} errors", outcome.errors.len());
    Ok(())
}
