//! Library side of the `noncentral` command line tool: run manifests,
//! table and figure encodings, and the `verify` self-check.

pub mod commands;
pub mod dataset;
pub mod error;
pub mod manifest;
pub mod verify;

pub use error::CliError;
pub use manifest::RunManifest;

use manifest::{OutputFormat, Subcommand};

/// Rendered data plus human-readable summary lines.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub data: String,
    pub summary: Vec<String>,
    /// Failed checks, only non-zero for `verify`.
    pub failures: usize,
}

pub fn execute(manifest: &RunManifest) -> Result<RunOutput, CliError> {
    manifest.params.validate()?;
    let json = manifest.format == OutputFormat::Json;
    match &manifest.run {
        Subcommand::Spectrum(opts) => {
            let t = commands::spectrum_table(&manifest.params, opts)?;
            Ok(RunOutput {
                data: if json { t.to_json(manifest) } else { t.to_csv()? },
                summary: vec![format!("{} rows", t.rows.len())],
                failures: 0,
            })
        }
        Subcommand::Partition(opts) => {
            let t = commands::partition_table(opts)?;
            Ok(RunOutput {
                data: if json { t.to_json(manifest) } else { t.to_csv()? },
                summary: vec![format!("{} rows", t.rows.len())],
                failures: 0,
            })
        }
        Subcommand::Sweep(opts) => {
            let (ds, summary) = commands::sweep_dataset(opts)?;
            Ok(RunOutput {
                data: if json { ds.to_json(manifest) } else { ds.to_csv()? },
                summary,
                failures: 0,
            })
        }
        Subcommand::Verify(config) => {
            let report = verify::run_checks(config);
            let failures = report.failures();
            let data = if json {
                serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
            } else {
                report.render()
            };
            Ok(RunOutput {
                data,
                summary: Vec::new(),
                failures,
            })
        }
    }
}
