//! Command-line front end: synthesis, filtering, q sweeps and baseline comparison.
//!
//! Every run writes `manifest.json` next to its outputs with the fully resolved
//! configuration, so a run can be repeated from the manifest alone.

mod svg;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::focuss::Init;
use crate::pipeline::{
    error_norm, fft_baseline, separate, sweep_q_with, Execution, SeparationConfig,
};
use crate::signal::{synth_broadband, synth_noise, Signal, SynthSpec};
use crate::spline::Partition;

/// Environment variable capping sweep parallelism; `0` runs serially.
pub const THREADS_ENV: &str = "SUBSEP_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "subsep",
    version,
    about = "Separate low-frequency Fourier noise from a sampled trace"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a seeded noise + wavelet-train scenario.
    Synth(SynthArgs),
    /// Separate a trace at a fixed q.
    Filter(FilterArgs),
    /// Sweep q over a grid and score each separation against a truth trace.
    Sweep(SweepArgs),
    /// FFT band-stop filtering of the noise band.
    Baseline(BaselineArgs),
    /// Pointwise errors of the separation and of the FFT baseline.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// JSON configuration; flags take precedence over its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Also write an SVG line plot for every CSV series.
    #[arg(long)]
    svg: bool,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long)]
    length: Option<usize>,
    #[arg(long = "n-max")]
    n_max: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// RMS amplitude of the noise.
    #[arg(long = "noise-amp")]
    noise_amp: Option<f64>,
    /// Number of wavelets in the signal.
    #[arg(long)]
    wavelets: Option<usize>,
    /// Sampling interval.
    #[arg(long)]
    dt: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InitArg {
    Ridge,
    Ones,
}

/// Flags shared by every command that runs a separation.
#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,
    #[arg(long, value_enum)]
    init: Option<InitArg>,
    /// Interior knot count.
    #[arg(long)]
    knots: Option<usize>,
    /// Spline order (degree + 1).
    #[arg(long)]
    order: Option<usize>,
    #[arg(long = "n-max")]
    n_max: Option<usize>,
    /// Fixed partition (as written to knots.json) instead of curvature placement.
    #[arg(long = "knot-file")]
    knot_file: Option<PathBuf>,
    /// Recorded in the manifest; the separation itself is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct FilterArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    q: Option<f64>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    /// Grid step in (0, 1].
    #[arg(long)]
    step: f64,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct BaselineArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long = "n-max")]
    n_max: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    #[arg(long)]
    q: Option<f64>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    common: Common,
}

/// Sidecar describing a run.
#[derive(Debug, Serialize)]
struct Manifest<'a> {
    command: &'static str,
    version: &'static str,
    seed: u64,
    config_path: Option<&'a Path>,
    output_dir: &'a Path,
    inputs: Vec<&'a Path>,
    /// Only meaningful for sweeps.
    step: Option<f64>,
    /// Only meaningful for synthesis.
    synth: Option<&'a SynthSpec>,
    separation: &'a SeparationConfig,
    outputs: Vec<String>,
}

/// Parses `argv` (program name first) and runs the command.
///
/// Returns 0 on success, 2 on a usage error and 1 on a runtime error.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Synth(a) => synth(a),
        Command::Filter(a) => filter(a),
        Command::Sweep(a) => sweep(a),
        Command::Baseline(a) => baseline(a),
        Command::Compare(a) => compare(a),
    }
}

/// Reads a JSON config, naming the offending key on failure.
fn read_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> anyhow::Result<T> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text =
        fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let key = e.path().to_string();
        anyhow::anyhow!(
            "config {}: bad key `{key}`: {}",
            path.display(),
            e.into_inner()
        )
    })
}

fn separation_config(
    common: &Common,
    model: &ModelArgs,
    q: Option<f64>,
    length: usize,
) -> anyhow::Result<SeparationConfig> {
    let mut cfg: SeparationConfig = read_config(common.config.as_deref())?;
    // the subspace always spans the actual input
    cfg.noise.length = length;
    if let Some(v) = q {
        cfg.solver.q = v;
    }
    if let Some(v) = model.lambda {
        cfg.solver.lambda = v;
    }
    if let Some(v) = model.epsilon {
        cfg.solver.epsilon = v;
    }
    if let Some(v) = model.max_iter {
        cfg.solver.max_iter = v;
    }
    if let Some(v) = model.init {
        cfg.solver.init = match v {
            InitArg::Ridge => Init::Ridge,
            InitArg::Ones => Init::Ones,
        };
    }
    if let Some(v) = model.knots {
        cfg.knot_target = v;
    }
    if let Some(v) = model.order {
        cfg.spline_order = v;
    }
    if let Some(v) = model.n_max {
        cfg.noise.n_max = v;
    }
    if let Some(path) = &model.knot_file {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading knot file {}", path.display()))?;
        cfg.knots = Some(Partition::from_json(&text).with_context(|| path.display().to_string())?);
    }
    cfg.validate().context("invalid configuration")?;
    Ok(cfg)
}

fn load(path: &Path) -> anyhow::Result<Signal> {
    Signal::load(path).with_context(|| format!("loading {}", path.display()))
}

/// Collects output files and writes them under one directory.
struct Outputs<'a> {
    dir: &'a Path,
    svg: bool,
    written: Vec<String>,
}

impl<'a> Outputs<'a> {
    fn new(common: &'a Common) -> anyhow::Result<Self> {
        fs::create_dir_all(&common.out)
            .with_context(|| format!("creating {}", common.out.display()))?;
        Ok(Outputs {
            dir: &common.out,
            svg: common.svg,
            written: Vec::new(),
        })
    }

    fn signal(&mut self, name: &str, s: &Signal) -> anyhow::Result<()> {
        let path = self.dir.join(format!("{name}.csv"));
        s.save(&path)
            .with_context(|| format!("writing {}", path.display()))?;
        self.written.push(format!("{name}.csv"));
        if self.svg {
            self.text(
                &format!("{name}.svg"),
                &svg::line_plot(name, &s.times(), s.samples()),
            )?;
        }
        Ok(())
    }

    fn text(&mut self, name: &str, body: &str) -> anyhow::Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> anyhow::Result<()> {
        let body = serde_json::to_string_pretty(value)? + "\n";
        self.text(name, &body)
    }

    fn manifest(mut self, mut manifest: Manifest<'_>) -> anyhow::Result<()> {
        manifest.outputs = std::mem::take(&mut self.written);
        self.json("manifest.json", &manifest)
    }
}

fn manifest<'a>(
    command: &'static str,
    seed: u64,
    common: &'a Common,
    inputs: Vec<&'a Path>,
    separation: &'a SeparationConfig,
) -> Manifest<'a> {
    Manifest {
        command,
        version: env!("CARGO_PKG_VERSION"),
        seed,
        config_path: common.config.as_deref(),
        output_dir: &common.out,
        inputs,
        step: None,
        synth: None,
        separation,
        outputs: Vec::new(),
    }
}

fn synth(a: SynthArgs) -> anyhow::Result<()> {
    let mut spec: SynthSpec = read_config(a.common.config.as_deref())?;
    if let Some(v) = a.length {
        spec.length = v;
    }
    if let Some(v) = a.n_max {
        spec.noise_n_max = v;
    }
    if let Some(v) = a.seed {
        spec.seed = v;
    }
    if let Some(v) = a.noise_amp {
        spec.noise_amplitude = v;
    }
    if let Some(v) = a.wavelets {
        spec.wavelet_count = v;
    }
    if let Some(v) = a.dt {
        spec.dt = v;
    }
    spec.validate().context("invalid synthesis parameters")?;

    let noise = synth_noise(&spec)?;
    let signal = synth_broadband(&spec)?;
    let mixed = signal.with_samples(
        noise
            .samples()
            .iter()
            .zip(signal.samples())
            .map(|(a, b)| a + b)
            .collect(),
    )?;

    // the separation defaults that match this scenario
    let mut separation = SeparationConfig::default();
    separation.noise.length = spec.length;
    separation.noise.n_max = spec.noise_n_max;

    let mut out = Outputs::new(&a.common)?;
    out.signal("noise", &noise)?;
    out.signal("signal", &signal)?;
    out.signal("mixed", &mixed)?;
    let mut m = manifest("synth", spec.seed, &a.common, Vec::new(), &separation);
    m.synth = Some(&spec);
    out.manifest(m)
}

#[derive(Serialize)]
struct FilterReport {
    q: f64,
    iterations: usize,
    converged: bool,
    residual_norm: f64,
    support_size: usize,
    critical_points: Option<usize>,
    interior_knots: usize,
}

fn filter(a: FilterArgs) -> anyhow::Result<()> {
    let f = load(&a.input)?;
    let cfg = separation_config(&a.common, &a.model, a.q, f.len())?;
    let r = separate(&f, &cfg)?;

    let mut out = Outputs::new(&a.common)?;
    out.signal("filtered", &r.f_v)?;
    out.signal("noise_estimate", &r.noise_estimate)?;
    out.text("knots.json", &(r.knots.to_json() + "\n"))?;
    out.json(
        "result.json",
        &FilterReport {
            q: cfg.solver.q,
            iterations: r.solver.iterations,
            converged: r.solver.converged,
            residual_norm: r.solver.residual_norm,
            support_size: r.solver.support().len(),
            critical_points: r.critical_points,
            interior_knots: r.knots.len(),
        },
    )?;
    let seed = a.model.seed.unwrap_or(0);
    out.manifest(manifest("filter", seed, &a.common, vec![&a.input], &cfg))
}

/// Scheduling requested through [`THREADS_ENV`]: `None` means the global pool.
fn thread_cap() -> anyhow::Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n = v
                .trim()
                .parse::<usize>()
                .with_context(|| format!("{THREADS_ENV} must be a thread count, got `{v}`"))?;
            Ok(Some(n))
        }
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => bail!("{THREADS_ENV}: {e}"),
    }
}

fn sweep(a: SweepArgs) -> anyhow::Result<()> {
    let f = load(&a.input)?;
    let truth = load(&a.truth)?;
    let cfg = separation_config(&a.common, &a.model, None, f.len())?;
    let run = |exec| sweep_q_with(&f, &truth, a.step, &cfg, exec);
    let result = match thread_cap()? {
        None => run(Execution::Parallel)?,
        Some(0) => run(Execution::Serial)?,
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("building thread pool")?
            .install(|| run(Execution::Parallel))?,
    };

    let mut out = Outputs::new(&a.common)?;
    let mut csv = Vec::new();
    result.write_csv(&mut csv)?;
    out.text("sweep.csv", std::str::from_utf8(&csv)?)?;
    out.json("summary.json", &result.summary())?;
    if out.svg {
        let plot = svg::line_plot("error vs q", &result.q_values(), &result.errors());
        out.text("sweep.svg", &plot)?;
    }
    let seed = a.model.seed.unwrap_or(0);
    let mut m = manifest("sweep", seed, &a.common, vec![&a.input, &a.truth], &cfg);
    m.step = Some(a.step);
    out.manifest(m)
}

fn baseline(a: BaselineArgs) -> anyhow::Result<()> {
    let f = load(&a.input)?;
    let mut cfg: SeparationConfig = read_config(a.common.config.as_deref())?;
    cfg.noise.length = f.len();
    if let Some(v) = a.n_max {
        cfg.noise.n_max = v;
    }
    cfg.noise.validate().context("invalid noise subspace")?;
    let filtered = fft_baseline(&f, &cfg.noise)?;

    let mut out = Outputs::new(&a.common)?;
    out.signal("baseline", &filtered)?;
    let seed = a.seed.unwrap_or(0);
    out.manifest(manifest("baseline", seed, &a.common, vec![&a.input], &cfg))
}

#[derive(Serialize)]
struct CompareReport {
    q: f64,
    error_q: f64,
    error_fft: f64,
}

fn abs_difference(a: &Signal, b: &Signal) -> anyhow::Result<Signal> {
    Ok(a.with_samples(
        a.samples()
            .iter()
            .zip(b.samples())
            .map(|(x, y)| (x - y).abs())
            .collect(),
    )?)
}

fn compare(a: CompareArgs) -> anyhow::Result<()> {
    let f = load(&a.input)?;
    let truth = load(&a.truth)?;
    if truth.len() != f.len() {
        bail!("truth has {} samples, input has {}", truth.len(), f.len());
    }
    let cfg = separation_config(&a.common, &a.model, a.q, f.len())?;
    let r = separate(&f, &cfg)?;
    let fft = fft_baseline(&f, &cfg.noise)?;

    let mut out = Outputs::new(&a.common)?;
    out.signal("filtered", &r.f_v)?;
    out.signal("baseline", &fft)?;
    out.signal("error_q", &abs_difference(&r.f_v, &truth)?)?;
    out.signal("error_fft", &abs_difference(&fft, &truth)?)?;
    out.json(
        "summary.json",
        &CompareReport {
            q: cfg.solver.q,
            error_q: error_norm(&r.f_v, &truth)?,
            error_fft: error_norm(&fft, &truth)?,
        },
    )?;
    let seed = a.model.seed.unwrap_or(0);
    out.manifest(manifest(
        "compare",
        seed,
        &a.common,
        vec![&a.input, &a.truth],
        &cfg,
    ))
}
