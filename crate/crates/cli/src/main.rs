use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nldiff_core::config::RunConfig;

mod pipeline;

#[derive(Parser, Debug)]
#[command(name = "nldiff", version, about = "Nonlocal nonlinear diffusion denoising")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Nonlocal filter on a CSV signal.
    Denoise1d(Opts),
    /// Nonlocal filter on a PGM or PNG image.
    Denoise2d(Opts),
    /// Perona-Malik baseline on a CSV signal.
    Pm1d(Opts),
    /// Perona-Malik baseline on an image.
    Pm2d(Opts),
    /// Linear diffusion for a given time (CSV input is treated as a signal).
    Linear(Opts),
    /// Write a synthetic signal or image and its clean version.
    Synth(Opts),
    /// Compare a file against a reference.
    Metrics(Opts),
}

#[derive(Args, Debug, Default)]
struct Opts {
    /// Read settings from a key=value file; flags take precedence.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Ground truth for PSNR reporting.
    #[arg(long, value_name = "FILE")]
    truth: Option<PathBuf>,
    /// Per-step statistics as CSV.
    #[arg(long, value_name = "FILE")]
    metrics: Option<PathBuf>,
    /// 1D window length in samples.
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Presmoothing width, in units of h for signals and pixels for images.
    #[arg(long)]
    sigma0: Option<f64>,
    /// Square window half-width (sets both q1 and q2).
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    q1: Option<usize>,
    #[arg(long)]
    q2: Option<usize>,
    /// Harmonic modes per edge.
    #[arg(long)]
    modes: Option<usize>,
    /// Boundary gradient sample count.
    #[arg(long)]
    bmesh: Option<usize>,
    #[arg(long)]
    eps_tv: Option<f64>,
    #[arg(long)]
    eps_g: Option<f64>,
    #[arg(long, value_parser = ["poly", "pm"])]
    edge_stop: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    refresh_every: Option<usize>,
    #[arg(long)]
    snapshot_stride: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads, 0 for all cores.
    #[arg(long)]
    threads: Option<usize>,
    /// piecewise, spiketrain, stepedge or testcard.
    #[arg(long)]
    kind: Option<String>,
    /// Standard deviation of the added noise.
    #[arg(long)]
    noise: Option<f64>,
    /// Diffusion time for `linear`.
    #[arg(long)]
    time: Option<f64>,
    /// Sample spacing of generated signals.
    #[arg(long)]
    h: Option<f64>,
    /// Length of generated signals or side of generated images.
    #[arg(long)]
    size: Option<usize>,
}

impl Opts {
    fn to_config(&self, mode: &str) -> RunConfig {
        RunConfig {
            mode: Some(mode.to_string()),
            input: self.input.clone(),
            output: self.out.clone(),
            truth: self.truth.clone(),
            metrics: self.metrics.clone(),
            l: self.l,
            tau: self.tau,
            steps: self.steps,
            sigma0: self.sigma0,
            q1: self.q1.or(self.q),
            q2: self.q2.or(self.q),
            modes: self.modes,
            bmesh: self.bmesh,
            eps_tv: self.eps_tv,
            eps_g: self.eps_g,
            edge_stop: self.edge_stop.clone(),
            lambda: self.lambda,
            refresh_every: self.refresh_every,
            snapshot_stride: self.snapshot_stride,
            seed: self.seed,
            threads: self.threads,
            kind: self.kind.clone(),
            noise: self.noise,
            time: self.time,
            h: self.h,
            size: self.size,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, opts) = match &cli.command {
        Command::Denoise1d(o) => ("denoise1d", o),
        Command::Denoise2d(o) => ("denoise2d", o),
        Command::Pm1d(o) => ("pm1d", o),
        Command::Pm2d(o) => ("pm2d", o),
        Command::Linear(o) => ("linear", o),
        Command::Synth(o) => ("synth", o),
        Command::Metrics(o) => ("metrics", o),
    };
    let result = (|| {
        let mut cfg = match &opts.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        cfg.merge(&opts.to_config(mode));
        pipeline::run(&cfg)
    })();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nldiff: {e}");
            if e.is_usage() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
