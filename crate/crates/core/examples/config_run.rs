//! Driving an experiment from a TOML config, as the CLI does, and listing the
//! artifacts it writes.
//!
//! cargo run --release --example config_run [OUT_DIR]

use mathieu_lab::cli::{run_experiment, ExperimentConfig};

const CONFIG: &str = r#"
kind = "phase"
frequency = "silver"
min_denominator = 5000
delta = 0.6
resonances = [20]
"#;

fn main() -> mathieu_lab::Result<()> {
    let out = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("mathieu-lab-config-run"), Into::into);
    let cfg = ExperimentConfig::from_toml(CONFIG)?;
    let outcome = run_experiment(&cfg, &out)?;
    println!("{outcome:?}; artifacts in {}:", out.display());
    let mut names: Vec<_> = std::fs::read_dir(&out)?.filter_map(|e| e.ok()).map(|e| e.file_name()).collect();
    names.sort();
    for n in names {
        println!("  {}", n.to_string_lossy());
    }
    println!("\nresolved config:\n{}", cfg.to_toml());
    Ok(())
}
