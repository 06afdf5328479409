//! Command-line companion to the `rotadapt` library: dataset CSV I/O,
//! configuration resolution, experiment orchestration across threads, and
//! CSV/JSON/SVG artifact emission.
//!
//! The binary (`rotadapt`) is a thin wrapper over [`run`].

use anyhow::Result;
use clap::{Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod driver;
pub mod io;
pub mod report;
pub mod svg;

/// Domain adaptation for 2D linear regression under an unknown rotation.
#[derive(Debug, Parser)]
#[command(name = "rotadapt", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Adapt a source regression line to a rotated target domain.
    Adapt(commands::AdaptArgs),
    /// Estimate the rotation angle between two datasets.
    EstimateAngle(commands::EstimateAngleArgs),
    /// Generate a synthetic noisy-line dataset.
    Simulate(commands::SimulateArgs),
    /// Monte-Carlo experiment suites.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Debug, Subcommand)]
pub enum ExperimentCommand {
    /// Sweep the source size n_s (median MSE of both methods per size).
    NsSweep(commands::NsSweepArgs),
    /// Map median variation over an inclination/noise grid.
    ThetaSigma(commands::ThetaSigmaArgs),
}

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Adapt(args) => commands::cmd_adapt(args),
        Command::EstimateAngle(args) => commands::cmd_estimate_angle(args),
        Command::Simulate(args) => commands::cmd_simulate(args),
        Command::Experiment(ExperimentCommand::NsSweep(args)) => commands::cmd_ns_sweep(args),
        Command::Experiment(ExperimentCommand::ThetaSigma(args)) => {
            commands::cmd_theta_sigma(args)
        }
    }
}
