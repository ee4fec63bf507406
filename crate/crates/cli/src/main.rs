use clap::{Parser, Subcommand};
use homflow_cli::output::write_json;
use homflow_cli::{cmd_run, cmd_sweep, cmd_verify, CliError, CliResult, RunConfig, SweepConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "homflow", version, about = "Homogeneous Ricci flow on SO(3)⋉R³/SO(2) and SL(2,C)/U(1)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one flow and write the sampled trajectory and a summary.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_csv: PathBuf,
        #[arg(long)]
        out_json: PathBuf,
    },
    /// Integrate a grid or random sample of initial conditions.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_json: PathBuf,
        #[arg(long)]
        parallel: bool,
    },
    /// Run the algebra, Ricci, gauge and flow checks.
    Verify {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Run { config, out_csv, out_json } => {
            let cfg = RunConfig::load(&config, out_csv, out_json)?;
            let s = cmd_run(&cfg)?;
            println!(
                "{}: t_end={} t_g={}",
                s.termination_kind,
                s.end_time,
                s.t_g.map_or("none".to_string(), |t| t.to_string())
            );
        }
        Command::Sweep { config, out_json, parallel } => {
            let cfg = SweepConfig::load(&config)?;
            let r = cmd_sweep(&cfg, parallel)?;
            write_json(&out_json, &r)?;
            println!(
                "{} points: {} extinct, {} horizon, {} step collapse; {} monitor failures",
                r.points, r.counts.extinct, r.counts.horizon, r.counts.step_collapse, r.monitor_failures
            );
        }
        Command::Verify { samples, seed } => {
            let report = cmd_verify(samples, seed);
            println!("{report}");
            if report.failures() > 0 {
                return Err(CliError::Verification(report.failures()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("homflow: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
