//! Scenarios from JSON: unspecified blocks come from the scenario preset.
//! Writes the CSV files and report to a temporary directory.
//!
//! Run with `cargo run --release --example custom_config`.

use bloch_drive::scenarios::{run_scenario, ScenarioConfig};

const CONFIG: &str = r#"{
  "scenario": "custom",
  "lattice": {"kind": "ring", "sites": 128, "hopping": 1.0},
  "flux": {"source": "direct", "profile": {"type": "ac_dc", "n": 0, "f_a": 0.8, "omega": 1.5}},
  "packet": {"k0": 0.7, "n_a": 64, "alpha": 0.08},
  "grid": {"t_end": 12.0, "eps": 0.01, "sample_every": 50},
  "output": {"precision": 12}
}"#;

fn main() -> bloch_drive::Result<()> {
    let outcome = run_scenario(ScenarioConfig::from_json(CONFIG)?)?;
    let dir = std::env::temp_dir().join("bloch-drive-custom");
    outcome.write_to(&dir)?;
    print!("{}", outcome.report);
    println!("files in {}:", dir.display());
    for (name, contents) in &outcome.files {
        println!("  {name} ({} lines)", contents.lines().count());
    }
    Ok(())
}
