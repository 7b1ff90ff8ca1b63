use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use polyvol::harness::varcurve::{linspace, varcurve2d, varcurve3d};
use polyvol::harness::volfit::vol_fit;
use polyvol::harness::{replicate, replicate_with_threads, ReplicationConfig};
use polyvol::{estimate, sample_distances, AnyEstimate, DistanceSample, Error, EstimatorOptions, Method, Result, Shape};

#[derive(Parser)]
#[command(name = "polyvol", version, about = "Boundary measure estimation from band distance samples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw distances of uniform band points to a shape.
    Sample {
        /// Shape JSON file.
        #[arg(long)]
        shape: PathBuf,
        #[arg(long = "R")]
        band: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate L0 (and M in 3D) from a distance CSV.
    Estimate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        method: Method,
        #[arg(long, default_value_t = 1.0)]
        phi0: f64,
        #[arg(long = "K", default_value_t = polyvol::estim2d::DEFAULT_K)]
        k: usize,
        #[arg(long, default_value_t = polyvol::estim2d::DEFAULT_EM_TOLERANCE)]
        em_tol: f64,
        /// Print the estimate as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run a replication study described by a JSON config.
    Replicate {
        #[arg(long)]
        config: PathBuf,
        /// Summary CSV.
        #[arg(long)]
        out: PathBuf,
        /// Per-replication estimates CSV.
        #[arg(long)]
        raw: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Asymptotic standard deviations over a grid of R.
    Varcurve {
        #[arg(long, value_parser = ["2", "3"])]
        dim: String,
        #[arg(long)]
        l0: f64,
        #[arg(long)]
        m: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        phi0: f64,
        #[arg(long)]
        rmin: f64,
        #[arg(long)]
        rmax: f64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Fit a polynomial to Monte Carlo volumes of B(S, r).
    Volfit {
        #[arg(long)]
        shape: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 1_000_000)]
        nmc: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.05)]
        rmin: f64,
        #[arg(long, default_value_t = 1.0)]
        rmax: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_else(|| "NA".into())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sample { shape, band, n, seed, out } => {
            let shape = Shape::from_json(&fs::read_to_string(shape)?)?;
            let sample = sample_distances(&shape, band, n, seed)?;
            match out {
                Some(path) => sample.save(path)?,
                None => sample.write_csv(io::stdout().lock())?,
            }
        }
        Command::Estimate { input, method, phi0, k, em_tol, json } => {
            let sample = DistanceSample::load(input)?;
            let opts = EstimatorOptions { phi0, k, em_tolerance: em_tol, ..EstimatorOptions::default() };
            let est = estimate(&sample, method, &opts)?;
            let mut stdout = io::stdout().lock();
            if json {
                writeln!(stdout, "{}", serde_json::to_string(&est)?)?;
            } else {
                match est {
                    AnyEstimate::Planar(e) => writeln!(
                        stdout,
                        "method={} n={} L0={} asymp_var={} flags={}",
                        e.method,
                        e.n,
                        e.value,
                        fmt_opt(e.asymp_variance),
                        e.flags
                    )?,
                    AnyEstimate::Spatial(e) => writeln!(
                        stdout,
                        "method={} n={} L0={} M={} asymp_var_l0={} asymp_var_m={} flags={}",
                        e.method,
                        e.n,
                        e.l0,
                        e.m,
                        fmt_opt(e.asymp_var_l0),
                        fmt_opt(e.asymp_var_m),
                        e.flags
                    )?,
                }
            }
        }
        Command::Replicate { config, out, raw, threads } => {
            let cfg = ReplicationConfig::load(config)?;
            let summary = match threads {
                Some(t) => replicate_with_threads(&cfg, t)?,
                None => replicate(&cfg)?,
            };
            if summary.beyond_polynomial_range {
                eprintln!("warning: R exceeds the range where the volume polynomial is exact");
            }
            fs::write(out, summary.to_csv_string())?;
            if let Some(path) = raw {
                fs::write(path, summary.raw_csv_string())?;
            }
        }
        Command::Varcurve { dim, l0, m, phi0, rmin, rmax, steps, out, svg } => {
            let grid = linspace(rmin, rmax, steps);
            let curve = if dim == "2" {
                varcurve2d(l0, phi0, &grid)?
            } else {
                let m = m.ok_or_else(|| Error::InvalidParams("--m is required for --dim 3".into()))?;
                varcurve3d(l0, m, phi0, &grid)?
            };
            fs::write(out, curve.to_csv_string())?;
            if let Some(path) = svg {
                fs::write(path, curve.to_svg())?;
            }
        }
        Command::Volfit { shape, degree, nmc, seed, rmin, rmax, steps, out } => {
            let shape = Shape::from_json(&fs::read_to_string(shape)?)?;
            let fit = vol_fit(&shape, &linspace(rmin, rmax, steps), nmc, degree, seed)?;
            fs::write(out, fit.to_csv_string())?;
            println!(
                "max_studentized_residual={} chi2_per_dof={}",
                fit.max_studentized_residual, fit.chi2_per_dof
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 3 })
        }
    }
}
