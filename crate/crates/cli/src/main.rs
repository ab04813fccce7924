use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use singular_plap::report::{moser_csv, regime_csv};
use singular_plap::{emit_reports, parse_config, run_experiment, CliError, ReportBundle};
use singular_plap_core::theory::{classify_regime, moser_bound, MoserInputs, RegimeInput};

#[derive(Parser)]
#[command(
    name = "singular-plap",
    version,
    about = "Regularized singular p-Laplacian experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `out` in the configuration.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify (N, p, alpha, m) into its regularity regime.
    Classify {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        alpha: f64,
        /// Summability of the source; `inf` for bounded data.
        #[arg(long)]
        m: f64,
    },
    /// Evaluate the Moser sup-norm bound.
    Bound {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        m: f64,
        #[arg(long)]
        norm_f_m: f64,
        #[arg(long)]
        norm_f_1: f64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long = "C", default_value_t = 1.0)]
        c: f64,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Run { config, out } => {
            let cfg = parse_config(&config)?;
            let bundle = run_experiment(&cfg)?;
            print!("{}", bundle.summary());
            if let Some(dir) = out.or_else(|| cfg.out.clone()) {
                for path in emit_reports(&bundle, &dir)? {
                    eprintln!("wrote {}", path.display());
                }
            }
            Ok(bundle.all_passed())
        }
        Command::Classify { n, p, alpha, m } => {
            let report = classify_regime(RegimeInput { n, p, alpha, m })?;
            println!("case {} ({})", report.case.label(), report.predicted_space);
            print!("{}", regime_csv(std::slice::from_ref(&report)));
            Ok(true)
        }
        Command::Bound {
            n,
            p,
            m,
            norm_f_m,
            norm_f_1,
            mu,
            c,
        } => {
            let report = moser_bound(
                n,
                p,
                m,
                MoserInputs {
                    mu,
                    c,
                    norm_f_m,
                    norm_f_1,
                },
            )?;
            println!(
                "d0 = {}  sup bound = {}  printed d0 = {}",
                report.d0, report.sup_bound, report.d0_printed
            );
            print!("{}", moser_csv(&report));
            let bundle = ReportBundle {
                moser: Some(report),
                ..Default::default()
            };
            Ok(bundle.all_passed())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
