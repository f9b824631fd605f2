use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bloch_drive::scenarios::{
    compare_trains, csv, description, predict_scenario, preset, resolve_out_dir, run_scenario, sawtooth_counterpart,
    ScenarioConfig, ScenarioKind,
};
use bloch_drive::Error;

#[derive(Parser)]
#[command(name = "bloch-drive", version, about = "Wave packets on driven tight-binding lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a scenario numerically and compare against the analytic solution.
    Run(ScenarioArgs),
    /// Write the analytic prediction only.
    Predict(ScenarioArgs),
    /// Compare two pulse trains; without configs, the Gaussian preset
    /// against its sawtooth counterpart.
    CompareTrains {
        #[arg(long)]
        config_a: Option<PathBuf>,
        #[arg(long)]
        config_b: Option<PathBuf>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Largest shaking across drive frequencies.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    ListScenarios,
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
}

/// Config file (if any), scenario flag, then grid overrides.
fn load(config: Option<&Path>, scenario: Option<&str>, eps: Option<f64>, t_end: Option<f64>) -> Result<ScenarioConfig, Error> {
    let mut cfg = match config {
        Some(p) => ScenarioConfig::load(p)?,
        None => ScenarioConfig::default(),
    };
    if let Some(name) = scenario {
        cfg.scenario = Some(ScenarioKind::from_name(name)?);
    }
    if eps.is_some() || t_end.is_some() {
        let kind = cfg.kind();
        cfg = cfg.over(preset(kind));
        let grid = cfg
            .grid
            .as_mut()
            .ok_or_else(|| Error::Config(format!("{kind} has no time grid")))?;
        if let Some(e) = eps {
            grid.eps = e;
        }
        if let Some(t) = t_end {
            grid.t_end = t;
        }
    }
    Ok(cfg)
}

fn write_files(dir: &Path, files: &[(String, String)]) -> Result<(), Error> {
    for (name, contents) in files {
        csv::write(dir, name, contents)?;
    }
    eprintln!("wrote {} file(s) to {}", files.len(), dir.display());
    Ok(())
}

fn execute(command: Command) -> Result<bool, Error> {
    match command {
        Command::Run(a) => {
            let cfg = load(a.config.as_deref(), a.scenario.as_deref(), a.eps, a.t_end)?;
            let out = run_scenario(cfg)?;
            let dir = resolve_out_dir(a.out_dir.as_deref(), &out.config);
            out.write_to(&dir)?;
            print!("{}", out.report);
            Ok(out.passed())
        }
        Command::Predict(a) => {
            let cfg = load(a.config.as_deref(), a.scenario.as_deref(), a.eps, a.t_end)?;
            let dir = resolve_out_dir(a.out_dir.as_deref(), &cfg);
            let (prediction, files) = predict_scenario(cfg)?;
            match prediction {
                Some(p) => println!("{}", serde_json::to_string_pretty(&p).expect("prediction serializes")),
                None => println!("no closed-form phenomenon for this drive"),
            }
            write_files(&dir, &files)?;
            Ok(true)
        }
        Command::CompareTrains { config_a, config_b, out_dir, eps } => {
            let a = load(config_a.as_deref(), config_a.is_none().then(|| ScenarioKind::PulseTrain.name()), eps, None)?;
            let b = match config_b {
                Some(p) => load(Some(&p), None, eps, None)?,
                None => {
                    let mut b = a.clone().over(preset(a.kind()));
                    b.field = Some(sawtooth_counterpart(b.field()?)?);
                    b
                }
            };
            let report = compare_trains(a.clone(), b)?;
            let mut named = ScenarioConfig::default();
            named.output.directory = a.output.directory.clone().or_else(|| Some(Path::new("out").join("compare_trains")));
            let dir = resolve_out_dir(out_dir.as_deref(), &named);
            write_files(&dir, &[("report.txt".into(), report.render())])?;
            print!("{report}");
            Ok(report.passed())
        }
        Command::Sweep { config, out_dir } => {
            let mut cfg = load(config.as_deref(), None, None, None)?;
            cfg.scenario = Some(ScenarioKind::ShakingSweep);
            let out = run_scenario(cfg)?;
            let dir = resolve_out_dir(out_dir.as_deref(), &out.config);
            out.write_to(&dir)?;
            print!("{}", out.report);
            Ok(out.passed())
        }
        Command::ListScenarios => {
            for kind in ScenarioKind::ALL {
                println!("{:<24} {}", kind.name(), description(kind));
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ (Error::Config(_) | Error::Argument(_))) => {
            eprintln!("config error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("aborted: {e}");
            ExitCode::from(3)
        }
    }
}
