use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dustflame::diagnostics::Field;
use dustflame::io;
use dustflame::run::{self, Threshold};
use dustflame::Error;

#[derive(Parser)]
#[command(name = "dustflame", version, about = "1D low-Mach dust flame solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation from a config file.
    Run {
        config: PathBuf,
        /// Override `out_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the latest snapshots of two run directories.
    Compare {
        run_a: PathBuf,
        run_b: PathBuf,
        /// Fields to compare (snapshot column names).
        #[arg(long, value_delimiter = ',', default_value = "yF,theta")]
        fields: Vec<String>,
        /// Threshold as `field=max_linf`, repeatable.
        #[arg(long = "max-linf")]
        max_linf: Vec<String>,
        /// Write the comparison CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Primitive reference run followed by flame-velocity runs over `delta`.
    Sweep {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        deltas: Vec<f64>,
        /// Use this flame velocity instead of the reference run's.
        #[arg(long)]
        u_f: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } => 2,
        _ => 3,
    }
}

fn parse_threshold(s: &str) -> Result<Threshold, Error> {
    let (f, v) = s
        .split_once('=')
        .ok_or_else(|| Error::config(format!("threshold `{s}` is not `field=value`")))?;
    let max_linf = v
        .parse()
        .map_err(|_| Error::config(format!("threshold `{s}` has no numeric value")))?;
    Ok(Threshold {
        field: f.parse()?,
        max_linf,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("dustflame: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn execute(command: Command) -> Result<u8, Error> {
    match command {
        Command::Run { config, out } => {
            let mut cfg = io::read_config(&config)?;
            if let Some(out) = out {
                cfg.out_dir = out;
            }
            let result = run::run_simulation(&cfg)?;
            print!("{}", io::report_text(cfg.model, &result.report));
            Ok(0)
        }
        Command::Compare {
            run_a,
            run_b,
            fields,
            max_linf,
            out,
        } => {
            let fields = fields.iter().map(|f| f.parse()).collect::<Result<Vec<Field>, _>>()?;
            let thresholds = max_linf
                .iter()
                .map(|s| parse_threshold(s))
                .collect::<Result<Vec<_>, _>>()?;
            let cmp = run::compare_runs(&run_a, &run_b, &fields, &thresholds)?;
            match out {
                Some(path) => std::fs::write(path, cmp.csv())?,
                None => print!("{}", cmp.csv()),
            }
            for r in &cmp.rows {
                eprintln!(
                    "{}: linf={:.3e} l2={:.3e} thickness_ratio={:.4} {}",
                    r.field,
                    r.metrics.linf,
                    r.metrics.l2,
                    r.metrics.thickness_ratio,
                    if r.passed() { "ok" } else { "over threshold" }
                );
            }
            Ok(if cmp.passed() { 0 } else { 4 })
        }
        Command::Sweep {
            config,
            deltas,
            u_f,
            out,
        } => {
            let cfg = io::read_config(&config)?;
            let root = out.unwrap_or_else(|| cfg.out_dir.clone());
            let result = run::sweep(&cfg, &deltas, &root, u_f)?;
            print!("{}", result.csv());
            Ok(0)
        }
    }
}
