//! Runs a shipped config in-process and writes the report files to a temp directory.
use std::path::Path;

use frac_hausdorff::cli::{run, ExperimentConfig};
use frac_hausdorff::Result;

fn main() -> Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/constants.json");
    let cfg = ExperimentConfig::load(&path)?;
    let bundle = run(&cfg)?;
    let out = std::env::temp_dir().join("fhaus-example");
    bundle.write(&out)?;
    print!("{}", bundle.jsonl());
    println!("all verdicts pass: {}; files in {}", bundle.all_pass(), out.display());
    Ok(())
}
