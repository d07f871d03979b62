// Copyright 2026 The qitime Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Command-line front end. Exit codes: 0 success, 1 internal failure,
//! 2 configuration error, 3 post-selection failure on the sweep grid.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qitime::Error;
use qitime_cli::config::{resolve, ExperimentConfig, Overrides};
use qitime_cli::csv_io::emit_csv;
use qitime_cli::report::bounds_report;
use qitime_cli::svg::emit_plot;
use qitime_cli::sweep::{run_sweep, SweepOutcome};

#[derive(Parser)]
#[command(
    name = "qitime",
    about = "Ground-state preparation by truncated imaginary-time expansion",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep tau, writing sweep.csv (and sweep.svg with --plot)
    Sweep(RunArgs),
    /// Print the closed-form bound and resource table
    Bounds(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// key = value config file applied over the preset
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named parameter bundle (toy-paper)
    #[arg(long)]
    preset: Option<String>,
    /// tfim, toy, or file
    #[arg(long)]
    model: Option<String>,
    /// Chain length (tfim)
    #[arg(long = "L")]
    sites: Option<usize>,
    /// Transverse coupling (tfim)
    #[arg(long)]
    g: Option<f64>,
    /// Pauli term file (model = file)
    #[arg(long)]
    hamiltonian: Option<PathBuf>,
    /// Expansion orders, comma separated
    #[arg(long = "N", value_delimiter = ',')]
    orders: Option<Vec<usize>>,
    #[arg(long)]
    tau_min: Option<f64>,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    dtau: Option<f64>,
    /// Initial state: basis bit string or comma list of real amplitudes
    #[arg(long)]
    state: Option<String>,
    /// Accepted shots per run; 0 disables sampling
    #[arg(long)]
    shots: Option<usize>,
    /// Sampling runs averaged per grid point
    #[arg(long)]
    runs: Option<usize>,
    /// Fault probability after one-qubit gates (toy model)
    #[arg(long)]
    noise_p1: Option<f64>,
    /// Fault probability after multi-qubit gates (toy model)
    #[arg(long)]
    noise_p2: Option<f64>,
    /// Read-out bit-flip probability
    #[arg(long)]
    noise_ro: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for sweep.csv / sweep.svg
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write sweep.svg
    #[arg(long)]
    plot: bool,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            model: self.model.clone(),
            sites: self.sites,
            g: self.g,
            hamiltonian: self.hamiltonian.clone(),
            orders: self.orders.clone(),
            tau_min: self.tau_min,
            tau_max: self.tau_max,
            dtau: self.dtau,
            state: self.state.clone(),
            shots: self.shots,
            runs: self.runs,
            noise_p1: self.noise_p1,
            noise_p2: self.noise_p2,
            noise_ro: self.noise_ro,
            seed: self.seed,
            out: self.out.clone(),
            plot: self.plot,
        }
    }

    fn resolve(&self) -> Result<ExperimentConfig, Error> {
        resolve(self.preset.as_deref(), self.config.as_deref(), &self.overrides())
    }
}

const EXIT_INTERNAL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_POST_SELECTION: u8 = 3;

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_) | Error::Parse { .. } | Error::UnknownRegister(_) => EXIT_CONFIG,
        Error::PostSelectionFailure { .. } | Error::ZeroAcceptance => EXIT_POST_SELECTION,
        Error::Io(_) => EXIT_CONFIG,
        _ => EXIT_INTERNAL,
    }
}

fn fail(err: Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit_for(&err))
}

fn print_summary(outcome: &SweepOutcome) {
    println!(
        "gap {:.6}, ground overlap {:.6}, excited overlap {:.6}",
        outcome.spectral.delta_e, outcome.spectral.psi_ground, outcome.spectral.psi_exc
    );
    println!(
        "{:>4} {:>10} {:>14} {:>9} {:>10} {:>8} {:>9}",
        "N", "argmin", "min_distance", "tau_bar", "bound", "select", "prepare"
    );
    for s in &outcome.summaries {
        println!(
            "{:>4} {:>10.4} {:>14.6e} {:>9.4} {:>10.4} {:>8} {:>9}",
            s.order,
            s.argmin_tau,
            s.min_distance,
            s.tau_bar,
            s.bound,
            s.resources.select_queries,
            s.resources.prepare_queries
        );
    }
}

fn sweep_command(args: &RunArgs) -> ExitCode {
    let cfg = match args.resolve() {
        Ok(cfg) => cfg,
        Err(e) => return fail(e),
    };
    let outcome = match run_sweep(&cfg) {
        Ok(outcome) => outcome,
        Err(e) => return fail(e),
    };
    if let Err(e) = std::fs::create_dir_all(&cfg.out_dir) {
        return fail(e.into());
    }
    let csv_path = cfg.out_dir.join("sweep.csv");
    if let Err(e) = emit_csv(&outcome.records, &csv_path) {
        return fail(e);
    }
    if cfg.plot {
        if let Err(e) = emit_plot(&outcome.records, &cfg.out_dir.join("sweep.svg")) {
            return fail(e);
        }
    }
    print_summary(&outcome);
    println!("wrote {}", csv_path.display());
    if outcome.any_flagged() {
        eprintln!("error: post-selection failed on at least one grid point");
        return ExitCode::from(EXIT_POST_SELECTION);
    }
    ExitCode::SUCCESS
}

fn bounds_command(args: &RunArgs) -> ExitCode {
    let cfg = match args.resolve() {
        Ok(cfg) => cfg,
        Err(e) => return fail(e),
    };
    match bounds_report(&cfg) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Sweep(args) => sweep_command(&args),
        Command::Bounds(args) => bounds_command(&args),
    }
}
