use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fmq_core::analysis::{
    alpha_threshold, coherence_time, Interpolation, ThresholdOptions, ThresholdResult,
    DEFAULT_ALPHA_BRACKET,
};
use fmq_core::config::{validate, SimulationConfig};
use fmq_core::dynamics::{positivity_audit, simulate};
use fmq_core::error::{Diagnostic, Error, Result};
use fmq_core::io::{self, GridDescription, ManifestRun, OutputDir};
use fmq_core::presets::{self, Preset, PresetRun};
use fmq_core::sweep::{self, SweepParam};

#[derive(Parser)]
#[command(name = "fmq", version, about = "Frequency-modulated qubit under thermal dissipative and dephasing noise")]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true, env = "FMQ_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one configuration or every run of a preset.
    Simulate {
        #[command(flatten)]
        source: Source,
        /// Output directory.
        #[arg(long, default_value = "fmq-out")]
        out: PathBuf,
    },
    /// Locate the dephasing coupling where modulation stops helping.
    Threshold {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = DEFAULT_ALPHA_BRACKET.0)]
        alpha_lo: f64,
        #[arg(long, default_value_t = DEFAULT_ALPHA_BRACKET.1)]
        alpha_hi: f64,
        #[arg(long, default_value_t = ThresholdOptions::default().alpha_tol)]
        alpha_tol: f64,
        /// Matching tolerance relative to the undriven coherence time.
        #[arg(long, default_value_t = ThresholdOptions::default().match_rel_tol)]
        match_tol: f64,
        #[arg(long, value_enum, default_value_t = EnvelopeKind::Linear)]
        envelope: EnvelopeKind,
        /// Also write the result to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate a grid of parameter values.
    Sweep {
        #[command(flatten)]
        source: Source,
        /// `PATH=V1,V2,...`, e.g. `dephasing.alpha=0.01,0.1`. At most two.
        #[arg(long = "param", value_name = "PATH=VALUES")]
        params: Vec<String>,
        #[arg(long, default_value = "fmq-sweep")]
        out: PathBuf,
    },
    /// Inspect the built-in presets.
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    List,
    /// Print the base configuration of a preset.
    Show { name: String },
}

#[derive(Args)]
struct Source {
    /// JSON configuration file; missing fields take their defaults.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in preset (see `fmq preset list`).
    #[arg(long)]
    preset: Option<String>,
    /// Print the effective configuration and exit.
    #[arg(long)]
    print_config: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnvelopeKind {
    Linear,
    MonotoneCubic,
}

impl From<EnvelopeKind> for Interpolation {
    fn from(k: EnvelopeKind) -> Self {
        match k {
            EnvelopeKind::Linear => Interpolation::Linear,
            EnvelopeKind::MonotoneCubic => Interpolation::MonotoneCubic,
        }
    }
}

fn unknown_preset(name: &str) -> Error {
    Error::InvalidConfig(vec![Diagnostic {
        path: "preset".into(),
        message: format!("unknown preset {name:?}; available: {}", presets::names().join(", ")),
    }])
}

fn find_preset(name: &str) -> Result<Preset> {
    presets::find(name).ok_or_else(|| unknown_preset(name))
}

impl Source {
    fn preset(&self) -> Result<Option<Preset>> {
        self.preset.as_deref().map(find_preset).transpose()
    }

    fn base(&self) -> Result<SimulationConfig> {
        match (&self.config, self.preset()?) {
            (Some(path), _) => io::load_config(path),
            (None, Some(p)) => Ok(p.base),
            (None, None) => Ok(SimulationConfig::default()),
        }
    }

    /// Labelled runs: every run of a preset, or the single configured run.
    fn runs(&self) -> Result<(String, Vec<PresetRun>)> {
        match self.preset()? {
            Some(p) if self.config.is_none() => Ok((p.name.to_string(), p.runs())),
            _ => Ok((
                "run".into(),
                vec![PresetRun {
                    label: "trajectory".into(),
                    config: self.base()?,
                }],
            )),
        }
    }
}

/// Print to stdout, tolerating a closed pipe (`fmq ... | head`).
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_config(source: &Source) -> Result<()> {
    emit(&(io::config_to_json(&source.base()?) + "\n"));
    Ok(())
}

fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

#[derive(Serialize)]
struct RunSummary {
    label: String,
    file: String,
    n_bar: f64,
    t_c: Option<f64>,
    positivity_worst_margin: f64,
}

fn cmd_simulate(source: &Source, out: &Path) -> Result<()> {
    let started = unix_now();
    let clock = Instant::now();
    let (stem, runs) = source.runs()?;
    let validated = runs
        .iter()
        .map(|r| validate(r.config.clone()))
        .collect::<Result<Vec<_>>>()?;

    let mut dir = OutputDir::create(out)?;
    let mut summaries = Vec::new();
    let mut manifest_runs = Vec::new();
    for (run, config) in runs.iter().zip(&validated) {
        let sim = simulate(config)?;
        let name = if runs.len() == 1 {
            format!("{}.csv", run.label)
        } else {
            format!("{stem}_{}.csv", run.label)
        };
        dir.write(&name, io::trajectory_csv(&sim).as_bytes())?;
        let traj = &sim.trajectory;
        let t_c = coherence_time(
            &traj.times,
            &traj.coherence_abs,
            run.config.initial.zeta0.norm(),
            Interpolation::Linear,
        );
        let audit = positivity_audit(traj);
        emit(&format!(
            "{name}: t_c = {}, n_bar = {:.6}, positivity margin = {:.3e}\n",
            t_c.map_or("none within t_max".to_string(), |t| format!("{t:.6}")),
            config.n_bar(),
            audit.worst_margin
        ));
        summaries.push(RunSummary {
            label: run.label.clone(),
            file: name,
            n_bar: config.n_bar(),
            t_c,
            positivity_worst_margin: audit.worst_margin,
        });
        manifest_runs.push(ManifestRun {
            label: run.label.clone(),
            config: run.config.clone(),
            grid: GridDescription::of(&run.config),
        });
    }
    let summary = serde_json::to_string_pretty(&summaries).expect("summary serializes") + "\n";
    dir.write("summary.json", summary.as_bytes())?;
    dir.finish(
        "simulate",
        manifest_runs,
        started,
        clock.elapsed().as_secs_f64(),
    )?;
    Ok(())
}

#[derive(Serialize)]
struct ThresholdReport<'a> {
    #[serde(flatten)]
    result: &'a ThresholdResult,
    omega_c_over_gamma: f64,
    calibration_note: &'static str,
    config: &'a SimulationConfig,
}

fn cmd_threshold(source: &Source, bracket: (f64, f64), options: &ThresholdOptions, out: Option<&Path>) -> Result<()> {
    let base = source.base()?;
    let result = alpha_threshold(&base, bracket, options)?;
    let report = ThresholdReport {
        result: &result,
        omega_c_over_gamma: base.dephasing.omega_c_over_gamma,
        calibration_note: "alpha_th depends on the dephasing cutoff omega_c/gamma, which is a free calibration",
        config: &base,
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    emit(&text);
    if let Some(path) = out {
        std::fs::write(path, &text).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
    }
    Ok(())
}

fn cmd_sweep(source: &Source, specs: &[String], out: &Path) -> Result<()> {
    let started = unix_now();
    let clock = Instant::now();
    let base = source.base()?;
    let params = specs
        .iter()
        .map(|s| SweepParam::parse(s))
        .collect::<Result<Vec<_>>>()?;
    let points = sweep::run(&base, &params)?;

    let names: Vec<&str> = params.iter().map(|p| p.path.as_str()).collect();
    let mut long = format!("point,{},{}\n", names.join(","), io::CSV_HEADER);
    let mut scalars = format!(
        "point,{},n_bar,t_c,final_coherence_abs,final_pg,positivity_worst_margin\n",
        names.join(",")
    );
    let mut dir = OutputDir::create(out)?;
    let mut manifest_runs = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let values: Vec<String> = p.assignments.iter().map(|(_, v)| io::fmt_f64(*v)).collect();
        let prefix = format!("{i},{},", values.join(","));
        io::write_trajectory_rows(&mut long, &p.simulation, &prefix);
        let s = &p.summary;
        let _ = writeln!(
            scalars,
            "{prefix}{},{},{},{},{}",
            io::fmt_f64(s.n_bar),
            s.t_c.map(io::fmt_f64).unwrap_or_default(),
            io::fmt_f64(s.final_coherence_abs),
            io::fmt_f64(s.final_pg),
            io::fmt_f64(s.positivity_worst_margin),
        );
        let label = format!("point_{i:04}");
        dir.write(&format!("{label}.csv"), io::trajectory_csv(&p.simulation).as_bytes())?;
        let config = p.simulation.config.config().clone();
        manifest_runs.push(ManifestRun {
            label,
            grid: GridDescription::of(&config),
            config,
        });
    }
    dir.write("sweep_long.csv", long.as_bytes())?;
    dir.write("sweep_scalars.csv", scalars.as_bytes())?;
    dir.finish("sweep", manifest_runs, started, clock.elapsed().as_secs_f64())?;
    emit(&format!("{} points written to {}\n", points.len(), out.display()));
    Ok(())
}

fn cmd_preset(action: &PresetAction) -> Result<()> {
    match action {
        PresetAction::List => {
            for p in presets::all() {
                emit(&format!("{:<6}  {}\n", p.name, p.description));
            }
        }
        PresetAction::Show { name } => {
            emit(&(io::config_to_json(&find_preset(name)?.base) + "\n"));
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.workers {
        // Fails only if a pool already exists, in which case it is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match &cli.command {
        Command::Simulate { source, .. }
        | Command::Threshold { source, .. }
        | Command::Sweep { source, .. }
            if source.print_config =>
        {
            print_config(source)
        }
        Command::Simulate { source, out } => cmd_simulate(source, out),
        Command::Threshold {
            source,
            alpha_lo,
            alpha_hi,
            alpha_tol,
            match_tol,
            envelope,
            out,
        } => {
            let options = ThresholdOptions {
                alpha_tol: *alpha_tol,
                match_rel_tol: *match_tol,
                interpolation: (*envelope).into(),
                ..Default::default()
            };
            cmd_threshold(source, (*alpha_lo, *alpha_hi), &options, out.as_deref())
        }
        Command::Sweep { source, params, out } => cmd_sweep(source, params, out),
        Command::Preset { action } => cmd_preset(action),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
