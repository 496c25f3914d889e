use std::path::PathBuf;

use clap::Parser;

use crate::error::CliError;

/// Run one epilab scenario and print a report.
#[derive(Debug, Clone, Parser)]
#[command(name = "epilab", version, about)]
pub struct Args {
    /// Scenario to run, or `list` to show all scenarios.
    pub scenario: String,

    /// Seed for every random draw.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Emit a single JSON object.
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,

    /// Emit a CSV header and one data row of results.
    #[arg(long)]
    pub csv: bool,

    /// Evaluate acceptance thresholds; exit with status 3 if any fails.
    #[arg(long)]
    pub check: bool,

    /// Write the report here instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Sample size, trial count or path count, depending on the scenario.
    #[arg(long)]
    pub n: Option<u64>,

    /// JSON input document.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,

    /// Search for the optimal settings.
    #[arg(long)]
    pub optimize: bool,

    /// Grid resolution.
    #[arg(long)]
    pub grid: Option<usize>,

    /// Model or measure name.
    #[arg(long)]
    pub model: Option<String>,

    /// Hilbert-space dimension.
    #[arg(long)]
    pub dim: Option<usize>,

    /// Parameter value.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,

    /// Number of random probes per object.
    #[arg(long)]
    pub trials: Option<usize>,

    /// Number of time steps.
    #[arg(long)]
    pub steps: Option<usize>,

    /// Time step.
    #[arg(long)]
    pub dt: Option<f64>,

    /// Write a wave-function snapshot as CSV.
    #[arg(long, value_name = "FILE")]
    pub snapshot: Option<PathBuf>,

    /// Write final ensemble positions as CSV.
    #[arg(long, value_name = "FILE")]
    pub ensemble: Option<PathBuf>,
}

impl Args {
    /// Scenario-specific flags present on the command line.
    pub fn scenario_flags(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut note = |set: bool, name: &'static str| {
            if set {
                out.push(name);
            }
        };
        note(self.n.is_some(), "n");
        note(self.input.is_some(), "input");
        note(self.optimize, "optimize");
        note(self.grid.is_some(), "grid");
        note(self.model.is_some(), "model");
        note(self.dim.is_some(), "dim");
        note(self.theta.is_some(), "theta");
        note(self.trials.is_some(), "trials");
        note(self.steps.is_some(), "steps");
        note(self.dt.is_some(), "dt");
        note(self.snapshot.is_some(), "snapshot");
        note(self.ensemble.is_some(), "ensemble");
        out
    }

    pub fn read_input(&self) -> Result<Option<String>, CliError> {
        match &self.input {
            None => Ok(None),
            Some(p) => std::fs::read_to_string(p).map(Some).map_err(|e| CliError::Input {
                path: p.display().to_string(),
                message: e.to_string(),
            }),
        }
    }
}
