use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{debug, info};
use serde::Serialize;
use stlmon_core::formula::{to_nnf, TargetSpec};
use stlmon_core::metrics::AggregateReport;
use stlmon_core::monitor::{
    episode_report, monitor_offline, EpisodeReport, MonitorConfig, RewardMode, StreamMonitor,
};
use stlmon_core::trace::{read_csv, TraceReader};
use stlmon_core::{parse_spec, Decls64, Formula64, Trace64};

#[derive(Parser)]
#[command(name = "stlmon", version, about = "Signal temporal logic monitor")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a trace step by step, printing one JSON record per step.
    Monitor(MonitorArgs),
    /// Aggregate episode indicators over a directory of traces.
    Metrics(MetricsArgs),
    /// Print the sampling window a target spec needs.
    WindowInfo(WindowArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Offline,
    Online,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reward {
    Cau,
    Cls,
    Lse,
}

impl From<Reward> for RewardMode {
    fn from(r: Reward) -> Self {
        match r {
            Reward::Cau => RewardMode::Cau,
            Reward::Cls => RewardMode::Cls,
            Reward::Lse => RewardMode::Lse,
        }
    }
}

#[derive(Args)]
struct MonitorArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Trace CSV, `-` for standard input.
    #[arg(long)]
    trace: PathBuf,
    /// Spec whose instantaneous part defines a per-step violation.
    #[arg(long)]
    safety_spec: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "offline")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "cau")]
    reward: Reward,
    /// Use log-sum-exp in place of min and max for the causation value.
    #[arg(long)]
    smooth: bool,
    #[arg(long, default_value_t = 10.0)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    dt: f64,
    /// Window length; at least the length the spec needs.
    #[arg(long)]
    k: Option<usize>,
    /// Cost charged per step of safety violation.
    #[arg(long, default_value_t = 1.0)]
    cost: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Episode length in seconds. Required in online mode.
    #[arg(long)]
    horizon: Option<f64>,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    safety_spec: Option<PathBuf>,
    #[arg(long)]
    traces_dir: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    dt: f64,
    #[arg(long, default_value_t = 1.0)]
    cost: f64,
    #[arg(long)]
    horizon: Option<f64>,
    /// Also write the report as JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WindowArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    dt: f64,
    /// Replaces `inf` in nested intervals.
    #[arg(long)]
    horizon: Option<f64>,
}

struct Loaded {
    formula: Formula64,
    decls: Decls64,
}

fn load_spec(path: &Path) -> Result<Loaded> {
    let src = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec = parse_spec::<f64>(&src).with_context(|| format!("in {}", path.display()))?;
    let formula = to_nnf(&spec.formula)?;
    debug!("{} parsed as {formula}", path.display());
    Ok(Loaded {
        formula,
        decls: spec.decls,
    })
}

fn open_input(path: &Path) -> Result<Box<dyn Read>> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(io::stdin().lock()));
    }
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(Box::new(BufReader::new(f)))
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_line(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Safety formula from `--safety-spec`; its variables must match the main spec's.
fn load_safety(path: Option<&Path>) -> Result<Option<Formula64>> {
    path.map(|p| load_spec(p).map(|s| s.formula)).transpose()
}

fn monitor(args: MonitorArgs) -> Result<ExitCode> {
    let spec = load_spec(&args.spec)?;
    let safety = load_safety(args.safety_spec.as_deref())?;
    let mut out = open_output(args.out.as_deref())?;
    let cfg = |horizon: f64| {
        let mut c = MonitorConfig::new(args.dt, horizon);
        c.reward = args.reward.into();
        c.smooth = args.smooth;
        c.beta = args.beta;
        c.k = args.k;
        c
    };
    let trace = match args.mode {
        Mode::Offline => {
            let trace: Trace64 = read_csv(open_input(&args.trace)?, args.dt)?;
            let horizon = args.horizon.unwrap_or_else(|| trace.duration());
            let records = monitor_offline(&trace, &spec.formula, &spec.decls, cfg(horizon))?;
            for r in &records {
                write_line(&mut out, r)?;
            }
            trace
        }
        Mode::Online => {
            let Some(horizon) = args.horizon else {
                bail!("online mode needs --horizon, the episode length is not known in advance");
            };
            let mut reader = TraceReader::new(open_input(&args.trace)?, args.dt)?;
            let mut m =
                StreamMonitor::new(&spec.formula, &spec.decls, reader.names(), cfg(horizon))?;
            info!("streaming with window k = {}", m.k());
            while let Some(row) = reader.next_row::<f64>() {
                let rec = m.push(row?)?;
                write_line(&mut out, &rec)?;
                out.flush()?;
            }
            let trace = m.into_trace();
            if trace.is_empty() {
                return Err(stlmon_core::Error::EmptyTrace.into());
            }
            trace
        }
    };
    let report = episode_report(
        &trace,
        &spec.formula,
        safety.as_ref(),
        &spec.decls,
        args.cost,
        args.horizon,
    )?;
    write_line(&mut out, &report)?;
    out.flush()?;
    Ok(if report.full_sat == 1 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Serialize)]
struct EpisodeEntry {
    file: String,
    #[serde(flatten)]
    report: EpisodeReport<f64>,
}

#[derive(Serialize)]
struct MetricsReport {
    #[serde(flatten)]
    aggregate: AggregateReport<f64>,
    per_episode: Vec<EpisodeEntry>,
}

fn trace_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<io::Result<_>>()?;
    files.retain(|p| p.is_file() && p.extension().is_some_and(|e| e == "csv"));
    files.sort();
    Ok(files)
}

fn metrics(args: MetricsArgs) -> Result<ExitCode> {
    let spec = load_spec(&args.spec)?;
    let safety = load_safety(args.safety_spec.as_deref())?;
    let files = trace_files(&args.traces_dir)?;
    if files.is_empty() {
        bail!("no .csv traces in {}", args.traces_dir.display());
    }
    let mut names: Option<Vec<String>> = None;
    let mut entries = Vec::with_capacity(files.len());
    for path in &files {
        let trace: Trace64 = read_csv(open_input(path)?, args.dt)
            .with_context(|| format!("in {}", path.display()))?;
        match &names {
            Some(n) if n.as_slice() != trace.names() => bail!(
                "{} has columns {:?}, earlier traces have {:?}",
                path.display(),
                trace.names(),
                n
            ),
            Some(_) => {}
            None => names = Some(trace.names().to_vec()),
        }
        let report = episode_report(
            &trace,
            &spec.formula,
            safety.as_ref(),
            &spec.decls,
            args.cost,
            args.horizon,
        )
        .with_context(|| format!("in {}", path.display()))?;
        debug!("{}: {report:?}", path.display());
        entries.push(EpisodeEntry {
            file: path
                .file_name()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned(),
            report,
        });
    }
    let reports: Vec<_> = entries.iter().map(|e| e.report).collect();
    let aggregate = AggregateReport::from_reports(&reports).expect("at least one episode");
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "episodes    {}", aggregate.episodes)?;
    writeln!(stdout, "full_sat    {}", aggregate.full_sat)?;
    writeln!(stdout, "safety_sat  {}", aggregate.safety_sat)?;
    writeln!(stdout, "cost_return {}", aggregate.cost_return)?;
    if let Some(p) = &args.out {
        let mut w = open_output(Some(p))?;
        serde_json::to_writer_pretty(
            &mut w,
            &MetricsReport {
                aggregate,
                per_episode: entries,
            },
        )?;
        w.write_all(b"\n")?;
        w.flush()?;
    }
    Ok(ExitCode::SUCCESS)
}

fn window_info(args: WindowArgs) -> Result<ExitCode> {
    let spec = load_spec(&args.spec)?;
    let target = TargetSpec::new(&spec.formula)?;
    let horizon = args.horizon.unwrap_or(f64::INFINITY);
    let u = target.window_upper(horizon);
    let Some(k) = target.window_k(args.dt, horizon) else {
        return Err(stlmon_core::Error::UnboundedWithoutHorizon.into());
    };
    println!("window [0,{u}]");
    println!("k {k}");
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("STLMON_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Monitor(a) => monitor(a),
        Command::Metrics(a) => metrics(a),
        Command::WindowInfo(a) => window_info(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("stlmon: {e:#}");
            ExitCode::from(2)
        }
    }
}
