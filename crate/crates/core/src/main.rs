use clap::Parser;
use satd_miner::cli::{run, RunConfig};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let config = RunConfig::parse();
    let mut status = std::io::stderr();
    match run(&config, &mut status) {
        Ok(summary) => std::process::exit(summary.exit_code()),
        Err(e) => {
            eprintln!("satd-miner: {e}");
            std::process::exit(2);
        }
    }
}
