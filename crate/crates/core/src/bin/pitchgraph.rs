use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pitchgraph::cli::{self, EXIT_CONFIG};
use pitchgraph::config::PipelineConfig;
use pitchgraph::syngen::{Scenario, ScenarioSpec};

/// Time-window spatial activity graphs from field-sport action data.
///
/// Log verbosity follows PITCHGRAPH_LOG (error, warn, info, debug, trace).
#[derive(Parser)]
#[command(name = "pitchgraph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build window graphs and write reports, stats, grid and heatmaps.
    Run(PipelineArgs),
    /// Descriptive statistics only.
    Stats(PipelineArgs),
    /// Re-render heatmaps from a previous run's output directory.
    Render {
        #[arg(long, default_value = "out")]
        output: PathBuf,
        /// Show normalized (true) or raw (false) betweenness; defaults to the run's setting.
        #[arg(long)]
        normalize: Option<bool>,
    },
    /// Write a synthetic match CSV and its ground truth.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct PipelineArgs {
    /// key = value config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    resolution: Option<String>,
    #[arg(long)]
    margin: Option<String>,
    #[arg(long)]
    window_width: Option<String>,
    #[arg(long)]
    window_step: Option<String>,
    #[arg(long)]
    match_duration: Option<String>,
    /// weighted or unweighted
    #[arg(long)]
    betweenness_mode: Option<String>,
    #[arg(long)]
    normalize: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// lat,lon,lat,lon corners of the playing area
    #[arg(long, allow_hyphen_values = true)]
    poi: Option<String>,
    /// mean or duration_weighted
    #[arg(long)]
    speed_aggregation: Option<String>,
    #[arg(long)]
    no_render: bool,
}

impl PipelineArgs {
    fn config(&self) -> pitchgraph::Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(p) => PipelineConfig::from_file(p)?,
            None => PipelineConfig::default(),
        };
        if let Some(p) = &self.input {
            cfg.input = Some(p.clone());
        }
        if let Some(p) = &self.output {
            cfg.output = p.clone();
        }
        let flags = [
            ("resolution", &self.resolution),
            ("margin", &self.margin),
            ("window_width", &self.window_width),
            ("window_step", &self.window_step),
            ("match_duration", &self.match_duration),
            ("betweenness_mode", &self.betweenness_mode),
            ("normalize", &self.normalize),
            ("louvain_seed", &self.seed),
            ("poi", &self.poi),
            ("speed_aggregation", &self.speed_aggregation),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        if self.no_render {
            cfg.render = false;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct GenerateArgs {
    /// uniform, two_zones, bridge or corridor
    #[arg(long, default_value = "uniform")]
    scenario: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    players: Option<u32>,
    /// Minutes.
    #[arg(long)]
    duration: Option<f64>,
    /// Mean actions per player per minute.
    #[arg(long)]
    action_rate: Option<f64>,
    #[arg(long)]
    pitch_length: Option<f64>,
    #[arg(long)]
    pitch_width: Option<f64>,
    #[arg(long)]
    crossing_rate: Option<f64>,
    #[arg(long, default_value = "synthetic.csv")]
    output: PathBuf,
    /// Ground-truth JSON path; defaults to <output stem>_truth.json.
    #[arg(long)]
    truth: Option<PathBuf>,
}

impl GenerateArgs {
    fn spec(&self) -> pitchgraph::Result<ScenarioSpec> {
        let scenario: Scenario = self.scenario.parse()?;
        let mut spec = ScenarioSpec::for_scenario(scenario, self.seed);
        if let Some(v) = self.players {
            spec.players = v;
        }
        if let Some(v) = self.duration {
            spec.duration = v;
        }
        if let Some(v) = self.action_rate {
            spec.action_rate = v;
        }
        if let Some(v) = self.pitch_length {
            spec.pitch_length = v;
        }
        if let Some(v) = self.pitch_width {
            spec.pitch_width = v;
        }
        if let Some(v) = self.crossing_rate {
            spec.crossing_rate = v;
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("PITCHGRAPH_LOG", "warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { 0 });
        }
    };
    let code = match cli.command {
        Command::Run(args) => match args.config() {
            Ok(cfg) => cli::cmd_run(&cfg),
            Err(e) => config_error(e),
        },
        Command::Stats(args) => match args.config() {
            Ok(cfg) => cli::cmd_stats(&cfg),
            Err(e) => config_error(e),
        },
        Command::Render { output, normalize } => cli::cmd_render(&output, normalize),
        Command::Generate(args) => match args.spec() {
            Ok(spec) => cli::cmd_generate(&spec, &args.output, args.truth.as_deref()),
            Err(e) => config_error(e),
        },
    };
    ExitCode::from(code as u8)
}

fn config_error(e: pitchgraph::Error) -> i32 {
    eprintln!("error: {e}");
    EXIT_CONFIG
}
