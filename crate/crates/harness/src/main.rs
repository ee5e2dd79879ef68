//! `irsbc`: sum-rate and energy-efficiency experiments for an IRS-assisted
//! MISO broadcast channel under random phase rotations.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use irsbc_harness::config::ExperimentConfig;
use irsbc_harness::{eerun, output, pathloss, sumrate, validate, HarnessError};

#[derive(Parser)]
#[command(name = "irsbc", version, about = "IRS-assisted MISO broadcast channel experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Config file (flat key = value lines); defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed, overriding the config.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory (created if missing). Default: current directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format for result files.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Worker threads for Monte Carlo trials (0 = all cores). Outputs are
    /// identical for any thread count under a fixed seed.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo sum-rate curves for the configured schemes.
    Sumrate,
    /// Energy-efficiency solver table across the P_max sweep.
    Ee,
    /// Run the oracle validation suite and print one line per check.
    Validate,
    /// Write element positions and the covariance spectrum of the geometry.
    GeometryDump,
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(threads) = cli.threads {
        cfg.threads = threads;
    }
    Ok(cfg)
}

fn write_out(cli: &Cli, name: &str, contents: &str) -> Result<PathBuf, HarnessError> {
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

fn run(cli: &Cli) -> Result<(), HarnessError> {
    let cfg = load_config(cli)?;
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global()
            .map_err(|e| HarnessError::Io(std::io::Error::other(e.to_string())))?;
    }
    match cli.command {
        Command::Sumrate => {
            let points = sumrate::run_sumrate(&cfg)?;
            let (name, body) = match cli.format {
                Format::Csv => ("sumrate.csv", output::sumrate_csv(&points)),
                Format::Json => ("sumrate.json", output::sumrate_json(&points)),
            };
            let path = write_out(cli, name, &body)?;
            eprintln!("wrote {} points to {}", points.len(), path.display());
        }
        Command::Ee => {
            let rows = eerun::run_ee(&cfg)?;
            let (name, body) = match cli.format {
                Format::Csv => ("ee.csv", output::ee_csv(&rows)),
                Format::Json => ("ee.json", output::ee_json(&rows)),
            };
            let path = write_out(cli, name, &body)?;
            eprintln!("wrote {} rows to {}", rows.len(), path.display());
        }
        Command::Validate => {
            let checks = validate::run_validation(&cfg)?;
            let mut all = true;
            for c in &checks {
                all &= c.pass;
                println!(
                    "{:<24} {}  measured {:.3e} vs threshold {:.3e}  ({})",
                    c.name,
                    if c.pass { "PASS" } else { "FAIL" },
                    c.measured,
                    c.threshold,
                    c.detail
                );
            }
            if !all {
                return Err(HarnessError::Core(irsbc_core::Error::Guard(
                    "validation checks failed".into(),
                )));
            }
        }
        Command::GeometryDump => {
            let bs = cfg.bs_array(cfg.m)?;
            let irs = cfg.irs_array(cfg.n)?;
            let mut body = String::from("array,index,x_m,y_m,z_m\n");
            for (i, p) in irsbc_core::geometry::element_positions(&bs).iter().enumerate() {
                body.push_str(&format!("bs,{},{},{},{}\n", i, p.x, p.y, p.z));
            }
            for (i, p) in irsbc_core::geometry::element_positions(&irs).iter().enumerate() {
                body.push_str(&format!("irs,{},{},{},{}\n", i, p.x, p.y, p.z));
            }
            let path = write_out(cli, "positions.csv", &body)?;
            let gains = pathloss::mean_path_gains(&cfg)?;
            let h1 = irsbc_core::geometry::los_channel(&bs, &irs)?.h1;
            let cov = irsbc_core::channel::covariance(
                &h1,
                &vec![cfg.alpha; cfg.n],
                gains.beta_r,
                gains.beta_d,
            )?;
            println!("beta_r = {:e}, beta_d = {:e}", gains.beta_r, gains.beta_d);
            println!(
                "covariance spectrum: {:?}, ln det = {:.6}",
                cov.lambda_bar().as_slice(),
                cov.log_det_rbar()
            );
            eprintln!("wrote positions to {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
