//! Command-line front end: flag/INI configuration, experiment orchestration,
//! CSV emission, and the acceptance-suite runner. All randomness in a run
//! derives from the single configured seed, and identical configurations
//! produce byte-identical output files.

mod config;
mod runners;

pub use config::{Command, OperatorSpec, RunConfig};
pub use runners::reference_table;

use std::path::Path;

/// Exit codes: 0 success, 1 check failure, 2 usage/validation error,
/// 3 numerical divergence.
pub fn run(args: &[String]) -> i32 {
    let parsed = match config::parse(args) {
        Ok(p) => p,
        Err(msg) => {
            eprintln!("error: {msg}");
            eprintln!("{}", config::USAGE);
            return 2;
        }
    };
    let (cmd, cfg) = parsed;
    if let Err(msg) = cfg.validate(&cmd) {
        eprintln!("error: {msg}");
        return 2;
    }
    if let Err(e) = std::fs::create_dir_all(&cfg.out_dir) {
        eprintln!("error: cannot create output directory {}: {e}", cfg.out_dir);
        return 2;
    }
    // reproducibility: echo the effective configuration next to the outputs
    let echo = cfg.echo_ini(&cmd);
    if let Err(e) = std::fs::write(Path::new(&cfg.out_dir).join("effective_config"), echo) {
        eprintln!("error: cannot write effective_config: {e}");
        return 2;
    }
    runners::dispatch(&cmd, &cfg)
}
