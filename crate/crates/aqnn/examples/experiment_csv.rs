//! Drives the batch experiment runner programmatically: configure a sweep
//! from JSON, run it to a CSV file, and confirm the output is byte-identical
//! across reruns (rows are computed in parallel but written in grid order).
//!
//! Run with `cargo run --release --example experiment_csv`.

use aqnn::{run_experiment, ExperimentConfig, Result};

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join("aqnn-experiment-example");
    std::fs::create_dir_all(&dir).map_err(|e| aqnn::Error::Io {
        path: dir.display().to_string(),
        source: e,
    })?;
    let out = dir.join("diamond_sweep.csv");

    let config = ExperimentConfig::from_json(&format!(
        r#"{{
            "experiment": "prop3_diamond_sweep",
            "parameters": {{ "n": 2, "eps_grid": [0.1, 0.2, 0.3], "trials": 4 }},
            "output_path": "{}"
        }}"#,
        out.display()
    ))?;

    let summary = run_experiment(&config)?;
    println!(
        "{}: {} row(s), {} failure(s) -> {}",
        summary.experiment,
        summary.rows,
        summary.failures,
        summary.output_path
    );

    let first = std::fs::read(&out).map_err(|e| aqnn::Error::Io {
        path: out.display().to_string(),
        source: e,
    })?;
    run_experiment(&config)?;
    let second = std::fs::read(&out).map_err(|e| aqnn::Error::Io {
        path: out.display().to_string(),
        source: e,
    })?;
    println!(
        "rerun is byte-identical: {}",
        if first == second { "yes" } else { "NO" }
    );

    for line in String::from_utf8_lossy(&first).lines() {
        println!("  {line}");
    }
    Ok(())
}
