//! Command-line driver for the corpus pipeline.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{error, warn};

use stagegraph::fetch::{fetch_rawdata, FetchOptions, DEFAULT_URL};
use stagegraph::pipeline::{discover_plays, run, CorpusSteps, Stage, PLAY_STAGES};
use stagegraph::repr::ce::simple_edges;
use stagegraph::{CorpusLayout, DegreeWeight, FlushPolicy, PipelineConfig, PlayGraphs, PlaySelection, RunReport};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "stagegraph",
    version,
    about = "Graphs and hypergraphs of who is on stage with whom"
)]
struct Cli {
    /// Corpus root holding rawdata/, data/, graphdata/ and metadata/.
    #[arg(long, env = "STAGEGRAPH_ROOT", default_value = ".", global = true)]
    root: PathBuf,

    /// Log progress (repeat for debug output).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(flatten)]
    pipeline: PipelineArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PipelineArgs {
    /// Comma-separated play names; all plays when omitted.
    #[arg(long, value_delimiter = ',', global = true)]
    plays: Vec<String>,

    /// Keep characters on stage across scene boundaries.
    #[arg(long, global = true)]
    no_flush: bool,

    #[arg(long, value_enum, default_value_t = Weight::Lines, global = true)]
    weight: Weight,

    /// Settings per prominence window.
    #[arg(long, default_value_t = stagegraph::analysis::DEFAULT_WINDOW, global = true)]
    window: usize,

    /// Character identifiers to keep in rankings and correlations.
    #[arg(long, global = true)]
    allowlist: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(short, long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Weight {
    Lines,
    Tokens,
}

#[derive(Args)]
struct FetchArgs {
    #[arg(long, default_value = DEFAULT_URL)]
    url: String,

    /// Unpack this archive instead of downloading.
    #[arg(long)]
    zip: Option<PathBuf>,

    /// Never use the network.
    #[arg(long)]
    offline: bool,

    #[arg(long, default_value_t = 3)]
    attempts: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Download the TEI archive into rawdata/.
    Fetch(FetchArgs),
    /// Parse rawdata into cast and raw tables.
    Extract,
    /// Collapse raw tables into settings.
    Aggregate,
    /// Write the graphdata files.
    Build,
    /// Degree rankings per representation.
    Rank,
    /// Correlation matrices and residuals across plays.
    Correlate,
    /// Prominence time series.
    Timeseries,
    /// Lines and speakers per play.
    Summary,
    /// Run a toy script through every per-play stage.
    Toy {
        /// A `.toy` file; the play is named after its stem.
        file: Option<PathBuf>,
        /// The script itself, e.g. "|->A,B; A*; B*|".
        #[arg(long, conflicts_with = "file")]
        script: Option<String>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Everything, fetching first when rawdata is empty.
    All(FetchArgs),
}

fn config(args: &PipelineArgs) -> PipelineConfig {
    PipelineConfig {
        plays: if args.plays.is_empty() {
            PlaySelection::All
        } else {
            PlaySelection::Only(args.plays.clone())
        },
        flush_policy: if args.no_flush {
            FlushPolicy::EXPLICIT
        } else {
            FlushPolicy::TEI
        },
        degree_weight: match args.weight {
            Weight::Lines => DegreeWeight::Lines,
            Weight::Tokens => DegreeWeight::Tokens,
        },
        window: args.window,
        allowlist: args.allowlist.clone(),
        jobs: args.jobs,
    }
}

fn fetch(layout: &CorpusLayout, args: &FetchArgs) -> stagegraph::Result<()> {
    let options = FetchOptions {
        zip: args.zip.clone(),
        offline: args.offline,
        attempts: Some(args.attempts),
    };
    let report = fetch_rawdata(&args.url, layout, &options)?;
    println!(
        "fetched {} XML files into {}",
        report.xml_files,
        layout.rawdata().display()
    );
    Ok(())
}

fn report(report: &RunReport) -> ExitCode {
    for play in &report.plays {
        for w in &play.warnings {
            warn!("{}: {w}", play.play);
        }
    }
    for play in report.failed_plays() {
        error!("{}: {}", play.play, play.error.as_deref().unwrap_or_default());
    }
    for e in &report.errors {
        error!("{e}");
    }
    let failed = report.failed_plays().count();
    println!(
        "{} plays ok, {failed} failed, {} other errors, {:.2?}",
        report.plays.len() - failed,
        report.errors.len(),
        report.elapsed
    );
    if report.is_success() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILURE)
    }
}

fn toy(
    layout: &CorpusLayout,
    config: &mut PipelineConfig,
    file: Option<PathBuf>,
    script: Option<String>,
    name: Option<String>,
) -> Result<ExitCode, String> {
    let (text, stem) = match (file, script) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned());
            (text, stem)
        }
        (None, Some(text)) => (text, None),
        (None, None) => return Err("give a .toy file or --script".into()),
    };
    let name = name.or(stem).unwrap_or_else(|| "toy".into());
    let parsed = stagegraph::parse_toy(&text).map_err(|e| e.to_string())?;
    std::fs::create_dir_all(layout.rawdata()).map_err(|e| e.to_string())?;
    std::fs::write(layout.rawdata().join(format!("{name}.toy")), parsed.to_string() + "\n")
        .map_err(|e| e.to_string())?;
    config.plays = PlaySelection::Only(vec![name.clone()]);
    let result = run(layout, config, &PLAY_STAGES, CorpusSteps::default()).map_err(|e| e.to_string())?;
    let code = report(&result);
    if result.is_success() {
        let graphs = PlayGraphs::build(&stagegraph::toy_to_settings(&parsed));
        println!(
            "{name}: hypergraph n={} m={}; clique expansion n={} m={}; star expansion n={} m={}",
            graphs.hg_group.nodes.len(),
            graphs.hg_group.edges.len(),
            graphs.ce_group.nodes.len(),
            simple_edges(&graphs.ce_group.edges).len(),
            graphs.se_group.nodes.len(),
            graphs.se_group.edges.len(),
        );
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let layout = CorpusLayout::new(&cli.root);
    let mut config = config(&cli.pipeline);
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }

    let stage = |stages: &[Stage], corpus: CorpusSteps| match run(&layout, &config, stages, corpus) {
        Ok(r) => report(&r),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAILURE)
        }
    };
    let none = CorpusSteps::default();
    match cli.command {
        Command::Fetch(args) => match fetch(&layout, &args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_FAILURE)
            }
        },
        Command::Extract => stage(&[Stage::Extract], none),
        Command::Aggregate => stage(&[Stage::Aggregate], none),
        Command::Build => stage(&[Stage::Build], none),
        Command::Rank => stage(&[Stage::Rank], none),
        Command::Timeseries => stage(&[Stage::Timeseries], none),
        Command::Correlate => stage(
            &[],
            CorpusSteps {
                correlate: true,
                summary: false,
            },
        ),
        Command::Summary => stage(
            &[],
            CorpusSteps {
                correlate: false,
                summary: true,
            },
        ),
        Command::All(args) => {
            if discover_plays(&layout).is_err() {
                if let Err(e) = fetch(&layout, &args) {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_FAILURE);
                }
            }
            stage(&PLAY_STAGES, CorpusSteps::ALL)
        }
        Command::Toy { file, script, name } => match toy(&layout, &mut config, file, script, name) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_FAILURE)
            }
        },
    }
}
