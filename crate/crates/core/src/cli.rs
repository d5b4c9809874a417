//! Subcommand bodies behind the `pitchgraph` binary, returning exit codes:
//! 0 success, 1 invalid configuration or arguments, 2 unreadable input or
//! failed output.

use std::path::{Path, PathBuf};

use crate::config::PipelineConfig;
use crate::error::Error;
use crate::ingest::write_actions;
use crate::pipeline;
use crate::syngen::{generate, ScenarioSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_IO: i32 = 2;

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io { .. } | Error::Csv(_) | Error::MissingColumn(_) | Error::Json(_) => EXIT_IO,
        _ => EXIT_CONFIG,
    }
}

fn report(err: Error) -> i32 {
    eprintln!("error: {err}");
    exit_code(&err)
}

pub fn cmd_run(config: &PipelineConfig) -> i32 {
    match pipeline::run(config) {
        Ok(s) => {
            println!(
                "{} records ({} rejected), {} cells, {} windows, {} files written to {}",
                s.records,
                s.rejected,
                s.cells,
                s.windows,
                s.files.len(),
                config.output.display()
            );
            EXIT_OK
        }
        Err(e) => report(e),
    }
}

pub fn cmd_stats(config: &PipelineConfig) -> i32 {
    match pipeline::run_stats(config) {
        Ok(s) => {
            println!(
                "{} windows, stats written to {}",
                s.windows,
                config.output.join("stats.csv").display()
            );
            EXIT_OK
        }
        Err(e) => report(e),
    }
}

pub fn cmd_render(dir: &Path, normalized: Option<bool>) -> i32 {
    match pipeline::render_saved(dir, normalized) {
        Ok(files) => {
            println!("{} SVG files written under {}", files.len(), dir.join("svg").display());
            EXIT_OK
        }
        Err(e) => report(e),
    }
}

/// Writes the generated CSV to `csv_path` and the ground truth next to it
/// (or to `truth_path`).
pub fn cmd_generate(spec: &ScenarioSpec, csv_path: &Path, truth_path: Option<&Path>) -> i32 {
    let generated = match generate(spec) {
        Ok(g) => g,
        Err(e) => return report(e),
    };
    let truth_path: PathBuf = truth_path.map(Path::to_path_buf).unwrap_or_else(|| {
        let stem = csv_path.file_stem().and_then(|s| s.to_str()).unwrap_or("synthetic");
        csv_path.with_file_name(format!("{stem}_truth.json"))
    });
    let write = || -> crate::Result<()> {
        if let Some(parent) = csv_path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        let mut csv = Vec::new();
        write_actions(&mut csv, &generated.records)?;
        std::fs::write(csv_path, csv).map_err(|e| Error::io(csv_path, e))?;
        std::fs::write(&truth_path, generated.truth.to_json()? + "\n").map_err(|e| Error::io(&truth_path, e))?;
        Ok(())
    };
    match write() {
        Ok(()) => {
            println!(
                "{} actions ({} scenario, seed {}) -> {}, truth -> {}",
                generated.records.len(),
                spec.scenario,
                spec.seed,
                csv_path.display(),
                truth_path.display()
            );
            EXIT_OK
        }
        Err(e) => report(e),
    }
}
