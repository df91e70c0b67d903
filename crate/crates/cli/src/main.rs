use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wehrlsim::scenarios::ScenarioKind;
use wehrlsim_cli::{
    env_entries, execute, flag_entries, list_scenarios, parse_file, resolve, CliError, RunManifest, Verb,
};

#[derive(Parser)]
#[command(name = "wehrlsim", version, about = "Wehrl-entropy dynamics of open spin systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate one of the trajectory scenarios.
    Simulate(RunArgs),
    /// Run a parameter sweep.
    Sweep(RunArgs),
    /// Compare the truncated spectrum with the continuous solver.
    Eigs(RunArgs),
    /// Evaluate the experimental parameter calculator.
    Expparams(RunArgs),
    /// Print every scenario and the figure it regenerates.
    List,
}

#[derive(Args)]
struct RunArgs {
    /// Flat `key = value` configuration file.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Scenario name, overriding the file.
    #[arg(short, long)]
    scenario: Option<String>,
    /// Extra `key=value` overrides, applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Rerun the configuration embedded in a manifest.
    #[arg(long, conflicts_with_all = ["config", "scenario", "set"])]
    manifest: Option<PathBuf>,
    #[arg(short, long, default_value = "out")]
    out: PathBuf,
    /// Worker threads; defaults to the number of cores.
    #[arg(short = 'j', long)]
    threads: Option<usize>,
}

fn fallback(verb: Verb) -> Option<ScenarioKind> {
    match verb {
        Verb::Eigs => Some(ScenarioKind::EigenCompare),
        Verb::ExpParams => Some(ScenarioKind::ExpParams),
        Verb::Simulate | Verb::Sweep => None,
    }
}

fn run(args: RunArgs, verb: Verb) -> Result<(), CliError> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Validation(vec![format!("threads: {e}")]))?;
    }
    let cfg = match &args.manifest {
        Some(path) => {
            let cfg = RunManifest::load(path)?.config;
            cfg.validate()?;
            cfg
        }
        None => {
            let mut entries = match &args.config {
                Some(path) => parse_file(path)?,
                None => Vec::new(),
            };
            if let Some(s) = &args.scenario {
                entries.extend(flag_entries(&[format!("scenario={s}")])?);
            }
            entries.extend(env_entries(std::env::vars())?);
            entries.extend(flag_entries(&args.set)?);
            resolve(&entries, fallback(verb))?
        }
    };
    let manifest = execute(&cfg, verb, &args.out)?;
    if verb == Verb::ExpParams {
        let json = std::fs::read_to_string(args.out.join("expparams.json"))
            .map_err(|e| CliError::io(&args.out, e))?;
        print!("{json}");
    }
    for f in &manifest.flags {
        if !f.ness_detected && cfg.extend_to_ness {
            eprintln!("warning: no steady state detected for {} {:?}", f.output, f.param);
        }
    }
    eprintln!(
        "{} finished in {:.2} s, {} files in {}",
        cfg.scenario,
        manifest.duration_seconds,
        manifest.outputs.len() + 1,
        args.out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::List => {
            print!("{}", list_scenarios());
            Ok(())
        }
        Command::Simulate(a) => run(a, Verb::Simulate),
        Command::Sweep(a) => run(a, Verb::Sweep),
        Command::Eigs(a) => run(a, Verb::Eigs),
        Command::Expparams(a) => run(a, Verb::ExpParams),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
