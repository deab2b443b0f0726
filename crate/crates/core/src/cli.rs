//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when an audit has failing checks, 2 on any
//! error (bad arguments, unreadable input, unwritable output).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::audit::{self, features, ObservedFeatures};
use crate::error::{Error, Result};
use crate::fringe_metrics::{self, VisibilityEstimate};
use crate::geometry::{self, ApparatusConfig, FringePrediction, PhotonFlux};
use crate::io;
use crate::spectral;
use crate::svg;
use crate::synthesis::{self, CameraExposure, EnvelopeModel, SynthesisParams, Trace};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SLITSCOPE_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "slitscope", version, about = "Double-slit pattern simulation, spectral visibility and apparatus audit")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output directory.
    #[arg(long, global = true, env = OUT_DIR_ENV, default_value = ".")]
    pub out: PathBuf,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    pub plots: bool,
    /// Seed for simulated detector noise.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a simulated trace.
    Simulate(SimulateArgs),
    /// Power spectrum of a trace.
    Spectrum(TraceArgs),
    /// Visibility estimates from a trace or a features file.
    Visibility(VisibilityArgs),
    /// Audit an apparatus description against an observed pattern.
    Audit(AuditArgs),
    /// Fit the extended-envelope coefficient A to a trace.
    Fit(TraceArgs),
    /// Closed-form predictions for an apparatus.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Angular reference pattern: 10004 samples of 2e-4 rad.
    #[arg(long, conflicts_with_all = ["config", "a"])]
    pub reference: bool,
    /// Apparatus config; the trace is sampled on its camera.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Fringe visibility.
    #[arg(long = "v", default_value_t = 1.0)]
    pub visibility: f64,
    /// Extended-envelope coefficient; selects the Fourier-envelope model.
    #[arg(long)]
    pub a: Option<f64>,
    /// Fringe wavenumber for the Fourier-envelope model without a config.
    #[arg(long, default_value_t = 44.0)]
    pub k: f64,
    /// Peak intensity above the offset.
    #[arg(long, default_value_t = 787.0)]
    pub i0: f64,
    /// Detector offset.
    #[arg(long, default_value_t = 245.0)]
    pub i_dc: f64,
    /// Standard deviation of Gaussian detector noise.
    #[arg(long)]
    pub noise: Option<f64>,
    /// Pixel count without a config.
    #[arg(long, default_value_t = synthesis::DEFAULT_PIXEL_COUNT)]
    pub pixels: usize,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    /// Trace CSV.
    #[arg(long)]
    pub trace: PathBuf,
    /// Config supplying the pixel pitch.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VisibilityArgs {
    #[arg(long, required_unless_present = "features", conflicts_with = "features")]
    pub trace: Option<PathBuf>,
    /// Features file instead of a trace.
    #[arg(long)]
    pub features: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Envelope coefficient; overrides the fitted or recorded value.
    #[arg(long)]
    pub a: Option<f64>,
    /// Beam intensities and coherence degree for the coherence route.
    #[arg(long, requires_all = ["i2", "gamma"])]
    pub i1: Option<f64>,
    #[arg(long, requires_all = ["i1", "gamma"])]
    pub i2: Option<f64>,
    #[arg(long, requires_all = ["i1", "i2"])]
    pub gamma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, required_unless_present = "features", conflicts_with = "features")]
    pub trace: Option<PathBuf>,
    /// Features file for patterns without raw data.
    #[arg(long)]
    pub features: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Simulate,
    Spectrum,
    Visibility,
    Audit,
    Fit,
    Report,
}

/// What a single invocation reads and where it writes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: CommandKind,
    pub config_path: Option<PathBuf>,
    pub input_trace_path: Option<PathBuf>,
    pub features_path: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub emit_plots: bool,
    pub seed: u64,
}

impl RunManifest {
    pub fn from_cli(cli: &Cli) -> Self {
        let (command, config, trace, features) = match &cli.command {
            Command::Simulate(a) => (CommandKind::Simulate, a.config.clone(), None, None),
            Command::Spectrum(a) => (CommandKind::Spectrum, a.config.clone(), Some(a.trace.clone()), None),
            Command::Visibility(a) => (CommandKind::Visibility, a.config.clone(), a.trace.clone(), a.features.clone()),
            Command::Audit(a) => (CommandKind::Audit, Some(a.config.clone()), a.trace.clone(), a.features.clone()),
            Command::Fit(a) => (CommandKind::Fit, a.config.clone(), Some(a.trace.clone()), None),
            Command::Report(a) => (CommandKind::Report, Some(a.config.clone()), None, None),
        };
        RunManifest {
            command,
            config_path: config,
            input_trace_path: trace,
            features_path: features,
            output_dir: cli.global.out.clone(),
            emit_plots: cli.global.plots,
            seed: cli.global.seed,
        }
    }

    /// Fails before any work if an input is missing or the output
    /// directory cannot be created.
    pub fn check(&self) -> Result<()> {
        for path in [&self.config_path, &self.input_trace_path, &self.features_path]
            .into_iter()
            .flatten()
        {
            if !path.is_file() {
                return Err(Error::File {
                    path: path.clone(),
                    message: "no such file".into(),
                });
            }
        }
        std::fs::create_dir_all(&self.output_dir).map_err(|e| Error::File {
            path: self.output_dir.clone(),
            message: e.to_string(),
        })
    }

    fn output(&self, name: &str) -> PathBuf {
        self.output_dir.join(name)
    }
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    ChecksFailed,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    io::write_atomic(path, text.as_bytes())
}

fn load_config(path: Option<&Path>) -> Result<Option<ApparatusConfig>> {
    path.map(ApparatusConfig::load).transpose()
}

fn load_trace(path: &Path, config: Option<&ApparatusConfig>) -> Result<Trace> {
    let pitch = config.map_or(synthesis::DEFAULT_PIXEL_PITCH, |c| c.pixel_pitch);
    io::read_trace(path, pitch)
}

fn trace_plot(trace: &Trace, manifest: &RunManifest, name: &str) -> Result<()> {
    if !manifest.emit_plots {
        return Ok(());
    }
    let points: Vec<(f64, f64)> = trace
        .samples()
        .iter()
        .enumerate()
        .map(|(i, &v)| (i as f64, v))
        .collect();
    let svg = svg::line_plot(&points, "intensity", "pixel", "intensity (a.u.)");
    io::write_atomic(&manifest.output(name), svg.as_bytes())
}

fn simulate(args: &SimulateArgs, manifest: &RunManifest) -> Result<Outcome> {
    let config = load_config(manifest.config_path.as_deref())?;
    let (trace, name) = if args.reference {
        (
            synthesis::simulate_reference(synthesis::REFERENCE_POINTS, synthesis::REFERENCE_STEP)?,
            "reference_trace",
        )
    } else {
        let params = |k: f64, pitch: f64, envelope: EnvelopeModel| SynthesisParams {
            i0: args.i0,
            visibility: args.visibility,
            i_dc: args.i_dc,
            k,
            envelope,
            noise_sigma: args.noise,
            rng_seed: manifest.seed,
            pixel_pitch: pitch,
        };
        let envelope = match args.a {
            Some(a) => EnvelopeModel::extended(a)?,
            None => EnvelopeModel::RaisedCosine,
        };
        let trace = match (&config, args.a) {
            (Some(c), None) => synthesis::sample_apparatus(
                c,
                &CameraExposure {
                    i0: args.i0,
                    visibility: args.visibility,
                    i_dc: args.i_dc,
                    noise_sigma: args.noise,
                    rng_seed: manifest.seed,
                },
            )?,
            (Some(c), Some(_)) => {
                c.validate()?;
                let k = c.pixel_count as f64 / geometry::fringe_spacing(c).pixels;
                synthesis::synthesize_trace(&params(k, c.pixel_pitch, envelope), c.pixel_count)?
            }
            (None, _) => synthesis::synthesize_trace(
                &params(args.k, synthesis::DEFAULT_PIXEL_PITCH, envelope),
                args.pixels,
            )?,
        };
        (trace, "trace")
    };
    let path = manifest.output(&format!("{name}.csv"));
    io::write_atomic(&path, io::trace_to_csv(&trace).as_bytes())?;
    trace_plot(&trace, manifest, &format!("{name}.svg"))?;
    println!("wrote {} ({} samples)", path.display(), trace.len());
    Ok(Outcome::Success)
}

fn spectrum(args: &TraceArgs, manifest: &RunManifest) -> Result<Outcome> {
    let config = load_config(args.config.as_deref())?;
    let trace = load_trace(&args.trace, config.as_ref())?;
    let spec = spectral::power_spectrum(&trace)?;
    let path = manifest.output("spectrum.csv");
    io::write_atomic(&path, io::spectrum_to_csv(&spec, true).as_bytes())?;
    if manifest.emit_plots {
        let points: Vec<(f64, f64)> = spec
            .log10_powers()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &p)| (spec.wavenumber(k), p))
            .collect();
        let svg = svg::line_plot(&points, "power spectrum", "wavenumber", "log10 power");
        io::write_atomic(&manifest.output("spectrum.svg"), svg.as_bytes())?;
    }
    let (k, power) = spectral::detect_interference_peak(&spec, features::interference_search_floor(&trace))?;
    println!(
        "wrote {}; interference peak at bin {k} (wavenumber {:.2}), power {power:.6e}",
        path.display(),
        spec.wavenumber(k)
    );
    match spectral::r_statistic(&spec, k) {
        Ok(r) => println!("R = P_K/P_1 = {r:.6}"),
        Err(e) => println!("R undefined: {e}"),
    }
    Ok(Outcome::Success)
}

#[derive(Debug, Serialize)]
struct VisibilityOutput {
    estimates: Vec<VisibilityEstimate>,
    /// Estimates that could not be formed, with the reason.
    skipped: BTreeMap<String, String>,
}

fn features_from_inputs(
    trace: Option<&Path>,
    features_path: Option<&Path>,
    config: Option<&ApparatusConfig>,
) -> Result<ObservedFeatures> {
    match (trace, features_path) {
        (_, Some(f)) => ObservedFeatures::load(f),
        (Some(t), None) => audit::extract_features(&load_trace(t, config)?),
        (None, None) => Err(Error::domain("need a trace or a features file")),
    }
}

fn visibility(args: &VisibilityArgs, manifest: &RunManifest) -> Result<Outcome> {
    let config = load_config(args.config.as_deref())?;
    let f = features_from_inputs(args.trace.as_deref(), args.features.as_deref(), config.as_ref())?;
    let a = args.a.or(f.envelope_a).unwrap_or(0.0);
    let mut estimates = Vec::new();
    let mut skipped = BTreeMap::new();
    let mut push = |name: &str, r: Result<VisibilityEstimate>| match r {
        Ok(v) => estimates.push(v),
        Err(e) => {
            skipped.insert(name.to_string(), e.to_string());
        }
    };
    push("extrema", fringe_metrics::visibility_extrema(f.i_max, f.i_min));
    push(
        "elevation-corrected",
        fringe_metrics::visibility_elevation_corrected(f.i_max, f.i_min, f.i_elev),
    );
    push("from-r", fringe_metrics::visibility_from_r(f.r_value));
    push("from-r-envelope", fringe_metrics::visibility_from_r_envelope(f.r_value, a));
    match (args.i1, args.i2, args.gamma) {
        (Some(i1), Some(i2), Some(g)) => push("coherence", fringe_metrics::visibility_from_coherence(i1, i2, g)),
        _ => {
            skipped.insert("coherence".into(), "needs --i1, --i2 and --gamma".into());
        }
    }
    let out = VisibilityOutput { estimates, skipped };
    let path = manifest.output("visibility.json");
    write_json(&path, &out)?;
    for v in &out.estimates {
        println!("{:<20} {:.4}", serde_json::to_value(v.method)?.as_str().unwrap_or("?"), v.value);
    }
    println!("wrote {}", path.display());
    Ok(Outcome::Success)
}

fn run_audit(args: &AuditArgs, manifest: &RunManifest) -> Result<Outcome> {
    let config = ApparatusConfig::load(&args.config)?;
    let f = features_from_inputs(args.trace.as_deref(), args.features.as_deref(), Some(&config))?;
    let report = audit::audit(&config, &f)?;
    write_json(&manifest.output("audit_report.json"), &report)?;
    let text = report.to_text();
    io::write_atomic(&manifest.output("audit_report.txt"), text.as_bytes())?;
    print!("{text}");
    Ok(if report.passed() {
        Outcome::Success
    } else {
        Outcome::ChecksFailed
    })
}

fn fit(args: &TraceArgs, manifest: &RunManifest) -> Result<Outcome> {
    let config = load_config(args.config.as_deref())?;
    let trace = load_trace(&args.trace, config.as_ref())?;
    let result = audit::fit_envelope_a(&trace)?;
    let path = manifest.output("fit.json");
    write_json(&path, &result)?;
    println!(
        "A = {:.4}, RMS residual {:.4} (raised cosine {:.4}){}",
        result.a,
        result.residual,
        result.residual_at_zero,
        if result.warn { "; no improvement over A = 0" } else { "" }
    );
    println!("wrote {}", path.display());
    Ok(Outcome::Success)
}

#[derive(Debug, Serialize)]
struct PredictionOutput {
    config: ApparatusConfig,
    prediction: FringePrediction,
    photon_flux: PhotonFlux,
}

fn report(args: &ReportArgs, manifest: &RunManifest) -> Result<Outcome> {
    let config = ApparatusConfig::load(&args.config)?;
    let prediction = geometry::predict(&config)?;
    let photon_flux = geometry::photon_flux_per_slit(&config);
    let p = &prediction;
    println!("missing order d/a          {:.4}", p.missing_order);
    println!("fringes in principal max   {}", p.fringe_count);
    println!("fringe spacing             {:.3} px ({:.4e} m)", p.fringe_spacing.pixels, p.fringe_spacing.meters);
    println!("principal width 2X         {:.3} px ({:.4e} m)", p.principal_width.pixels, p.principal_width.meters);
    println!(
        "secondary maximum          pixel {:.1} ({}), height {:.3} of peak",
        p.secondary_max.absolute_pixel,
        if p.secondary_max.in_view { "in view" } else { "outside camera view" },
        p.secondary_max.rel_height
    );
    println!(
        "far-field number a²/(Dλ)   {:.4e} ({})",
        p.fraunhofer_number,
        if p.fraunhofer_satisfied { "far field" } else { "near field" }
    );
    println!("photons per slit           {:.4e} /s", photon_flux.per_slit_rate);
    println!("transit time D/c           {:.4e} s", photon_flux.transit_time);
    let path = manifest.output("prediction.json");
    write_json(
        &path,
        &PredictionOutput {
            config,
            prediction,
            photon_flux,
        },
    )?;
    println!("wrote {}", path.display());
    Ok(Outcome::Success)
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let manifest = RunManifest::from_cli(cli);
    manifest.check()?;
    match &cli.command {
        Command::Simulate(a) => simulate(a, &manifest),
        Command::Spectrum(a) => spectrum(a, &manifest),
        Command::Visibility(a) => visibility(a, &manifest),
        Command::Audit(a) => run_audit(a, &manifest),
        Command::Fit(a) => fit(a, &manifest),
        Command::Report(a) => report(a, &manifest),
    }
}

/// Entry point for the binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
