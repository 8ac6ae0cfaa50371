//! Command-line front end. Each subcommand is one phase of the inspection
//! workflow; `pipeline` chains interpolate, plan and simulate.
//!
//! All outputs of a command are rendered in memory first and written only
//! once the whole command has succeeded, so a failing run leaves no partial
//! files behind. Set `PTZ_INSPECT_LOG` to `error`, `warn` (default) or `info`.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::SectionsConfig;
use crate::error::{Error, Result};
use crate::geometry::{CameraPose, CylinderModel};
use crate::loss::{batch_loss, combined_loss_gradient, finite_difference_grad, optimal_log_variance, IcscFallback, LossWeights};
use crate::pantilt::{compute_alpha, grid_to_pantilt, PanTiltGrid, Quadrant, QuadrantSetup};
use crate::planner::{plan_full, ScanConfig, ScanPlan, SectionInput};
use crate::pose_eval::{evaluate, load_external_predictions, noisy_oracle_with, PoseEstimate};
use crate::randomizer::{generate_manifest, validate_deployment, DeploymentBoundary, SplitSizes};
use crate::records::{read_poses, read_samples};
use crate::simulator::{execute_plan, propagate_pose_error, ScanScene, SceneSection};
use crate::surface::grid::{read_grids_csv, write_grids_csv};
use crate::surface::{interpolate_section, load_point_cloud, section_points, CloudFormat, SurfaceGrid};

pub const LOG_ENV: &str = "PTZ_INSPECT_LOG";

#[derive(Debug, Parser)]
#[command(name = "ptz-inspect", version, about = "PTZ aircraft inspection: surface grids, scan planning, simulation and pose-loss tooling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Section a point cloud and interpolate each section onto a 5 cm grid.
    Interpolate(InterpolateArgs),
    /// Convert grids to pan/tilt under an estimated pose and select scan points.
    Plan(PlanArgs),
    /// Execute a plan from the true pose, or run a Monte-Carlo over noisy estimates.
    Simulate(SimulateArgs),
    /// Generate a domain-randomisation dataset manifest.
    Randomize(RandomizeArgs),
    /// Median and RMSE of position and orientation errors.
    Evaluate(EvaluateArgs),
    /// Loss breakdown over a sample batch with a finite-difference gradient check.
    LossCheck(LossCheckArgs),
    /// interpolate, plan and simulate in one run.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// Point cloud (.xyz or .ply, ASCII).
    #[arg(long)]
    pub cloud: Option<PathBuf>,
    /// Section definitions (TOML).
    #[arg(long)]
    pub sections: Option<PathBuf>,
    /// Previously exported grids, instead of --cloud.
    #[arg(long, conflicts_with = "cloud")]
    pub grids: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 6.15)]
    pub hfov_deg: f64,
    #[arg(long, default_value_t = 3.46)]
    pub vfov_deg: f64,
    /// Minimum overlap ratio between consecutive images, in [0, 1).
    #[arg(long, default_value_t = 0.15)]
    pub mu: f64,
}

impl ScanArgs {
    fn config(&self) -> Result<ScanConfig> {
        ScanConfig::new(self.hfov_deg, self.vfov_deg, self.mu)
    }
}

#[derive(Debug, Args)]
pub struct InterpolateArgs {
    #[arg(long)]
    pub cloud: PathBuf,
    #[arg(long)]
    pub sections: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub quadrant: u8,
    /// Estimated camera pose (pose CSV; the first row is used).
    #[arg(long)]
    pub pose: PathBuf,
    #[command(flatten)]
    pub scan: ScanArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub quadrant: u8,
    /// Ground-truth camera pose (pose CSV).
    #[arg(long)]
    pub true_pose: PathBuf,
    /// Estimated pose the plan was computed under; defaults to the true pose.
    #[arg(long)]
    pub pose: Option<PathBuf>,
    /// Plan to execute (JSON from `plan`); replanned under --pose when absent.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// Monte-Carlo draws of noisy pose estimates instead of a single run.
    #[arg(long)]
    pub draws: Option<usize>,
    #[arg(long, default_value_t = 0.24)]
    pub sigma_pos: f64,
    #[arg(long, default_value_t = 2.0)]
    pub sigma_yaw_deg: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub scan: ScanArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RandomizeArgs {
    /// Boundary file (TOML); the quadrant's defaults are used when absent.
    #[arg(long, required_unless_present = "quadrant")]
    pub boundary: Option<PathBuf>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub quadrant: Option<u8>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4000)]
    pub train: usize,
    #[arg(long, default_value_t = 700)]
    pub val: usize,
    #[arg(long, default_value_t = 300)]
    pub test: usize,
    /// Camera HFOV at 1x zoom, recorded in the manifest header.
    #[arg(long)]
    pub hfov_deg: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Ground-truth poses (pose CSV).
    #[arg(long)]
    pub gt: PathBuf,
    /// Predicted poses, row-aligned with --gt. Without it, predictions are
    /// drawn from the noisy oracle.
    #[arg(long)]
    pub pred: Option<PathBuf>,
    #[arg(long, default_value_t = 0.24)]
    pub sigma_pos: f64,
    #[arg(long, default_value_t = 2.0)]
    pub sigma_yaw_deg: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FallbackArg {
    Skip,
    Error,
}

#[derive(Debug, Args)]
pub struct LossCheckArgs {
    /// Sample batch CSV (true and predicted poses, optional log-variances).
    #[arg(long)]
    pub samples: PathBuf,
    /// Fuselage cylinder axis height.
    #[arg(long)]
    pub h0: f64,
    /// Fuselage cylinder radius.
    #[arg(long)]
    pub r0: f64,
    /// Add the ICSC term.
    #[arg(long)]
    pub icsc: bool,
    #[arg(long, value_enum, default_value_t = FallbackArg::Skip)]
    pub fallback: FallbackArg,
    /// Log-variances for samples that carry none.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub s_x: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub s_q: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub s_c: f64,
    #[arg(long, default_value_t = 1e-5)]
    pub fd_step: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long)]
    pub cloud: PathBuf,
    #[arg(long)]
    pub sections: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub quadrant: u8,
    /// Estimated camera pose used for planning.
    #[arg(long)]
    pub pose: PathBuf,
    /// Ground-truth pose for simulation; defaults to --pose.
    #[arg(long)]
    pub true_pose: Option<PathBuf>,
    /// Deployment boundary to validate the estimated pose against.
    #[arg(long)]
    pub boundary: Option<PathBuf>,
    #[command(flatten)]
    pub scan: ScanArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Error,
    Warn,
    Info,
}

fn log_level() -> Level {
    match std::env::var(LOG_ENV).as_deref() {
        Ok("error") | Ok("quiet") => Level::Error,
        Ok("info") | Ok("debug") => Level::Info,
        _ => Level::Warn,
    }
}

/// Files produced by a command, written together at the end.
#[derive(Debug, Default)]
struct Outputs {
    dir: Option<PathBuf>,
    files: Vec<(String, Vec<u8>)>,
    warnings: Vec<String>,
    notes: Vec<String>,
}

impl Outputs {
    fn to(dir: &Path) -> Self {
        Self {
            dir: Some(dir.to_path_buf()),
            ..Default::default()
        }
    }

    fn add(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.push((name.into(), bytes));
    }

    fn add_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Inconsistent(e.to_string()))?;
        text.push('\n');
        self.add(name, text.into_bytes());
        Ok(())
    }

    fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    /// Write every file via a temporary name and rename into place.
    fn commit(self) -> Result<()> {
        let level = log_level();
        if level >= Level::Warn {
            for w in &self.warnings {
                eprintln!("warning: {w}");
            }
        }
        if let Some(dir) = &self.dir {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            for (name, bytes) in &self.files {
                let path = dir.join(name);
                let tmp = dir.join(format!(".{name}.tmp"));
                std::fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
                std::fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))?;
                if level >= Level::Info {
                    eprintln!("wrote {}", path.display());
                }
            }
        }
        for n in &self.notes {
            println!("{n}");
        }
        Ok(())
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            e.exit_code()
        }
    }
}

pub fn run(command: Command) -> Result<()> {
    let out = match command {
        Command::Interpolate(a) => cmd_interpolate(&a)?,
        Command::Plan(a) => cmd_plan(&a)?,
        Command::Simulate(a) => cmd_simulate(&a)?,
        Command::Randomize(a) => cmd_randomize(&a)?,
        Command::Evaluate(a) => cmd_evaluate(&a)?,
        Command::LossCheck(a) => cmd_loss_check(&a)?,
        Command::Pipeline(a) => cmd_pipeline(&a)?,
    };
    out.commit()
}

fn first_pose(path: &Path) -> Result<CameraPose> {
    read_poses(path)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::InvalidArgument(format!("{}: no pose rows", path.display())))
}

fn quadrant(q: u8) -> Result<Quadrant> {
    Quadrant::new(q)
}

struct LoadedSection {
    grid: SurfaceGrid,
    half: crate::surface::AircraftHalf,
    analytic: Option<CylinderModel>,
}

/// Interpolate every usable section of `cloud`; empty sections are reported
/// and skipped.
fn interpolate_all(cloud: &Path, sections: &Path, out: &mut Outputs) -> Result<Vec<LoadedSection>> {
    let cfg = SectionsConfig::load(sections)?;
    let cloud = load_point_cloud(cloud, CloudFormat::from_path(cloud))?;
    let mut loaded = Vec::new();
    for spec in &cfg.sections {
        let sub = section_points(&cloud, spec);
        if sub.is_empty() {
            out.warn(format!("section '{}' contains no points and is skipped", spec.name));
            continue;
        }
        loaded.push(LoadedSection {
            grid: interpolate_section(&sub, spec)?,
            half: spec.half,
            analytic: cfg.analytic_for(spec.kind),
        });
    }
    if loaded.is_empty() {
        return Err(Error::Degenerate("no section of the cloud is usable".into()));
    }
    Ok(loaded)
}

fn load_surface(args: &SurfaceArgs, out: &mut Outputs) -> Result<Vec<LoadedSection>> {
    match (&args.grids, &args.cloud, &args.sections) {
        (Some(grids), _, sections) => {
            let file = std::fs::File::open(grids).map_err(|e| Error::io(grids, e))?;
            let grids_list = read_grids_csv(file, &grids.display().to_string())?;
            let cfg = sections.as_deref().map(SectionsConfig::load).transpose()?;
            grids_list
                .into_iter()
                .map(|grid| {
                    let spec = cfg.as_ref().and_then(|c| c.sections.iter().find(|s| s.name == grid.name()));
                    let half = spec.map_or(crate::surface::AircraftHalf::Back, |s| s.half);
                    let analytic = cfg.as_ref().and_then(|c| c.analytic_for(grid.kind()));
                    Ok(LoadedSection { grid, half, analytic })
                })
                .collect()
        }
        (None, Some(cloud), Some(sections)) => interpolate_all(cloud, sections, out),
        _ => Err(Error::InvalidArgument(
            "give either --grids or both --cloud and --sections".into(),
        )),
    }
}

fn grids_csv(sections: &[LoadedSection]) -> Result<Vec<u8>> {
    let grids: Vec<SurfaceGrid> = sections.iter().map(|s| s.grid.clone()).collect();
    let mut buf = Vec::new();
    write_grids_csv(&mut buf, &grids)?;
    Ok(buf)
}

fn plan_outputs(
    sections: &[LoadedSection],
    quadrant: Quadrant,
    pose: &CameraPose,
    cfg: &ScanConfig,
    out: &mut Outputs,
) -> Result<ScanPlan> {
    let setup = QuadrantSetup {
        quadrant,
        estimated_yaw_deg: pose.yaw_deg(),
        camera_position: pose.position,
    };
    if let Some(w) = compute_alpha(&setup).warning {
        out.warn(w);
    }
    let arrays: Vec<PanTiltGrid> = sections
        .iter()
        .map(|s| grid_to_pantilt(&s.grid, &setup))
        .collect::<Result<_>>()?;
    let inputs: Vec<SectionInput<'_>> = sections
        .iter()
        .zip(&arrays)
        .map(|(s, u)| SectionInput {
            grid: &s.grid,
            pantilt: u,
            half: s.half,
        })
        .collect();
    let plan = plan_full(&inputs, cfg, quadrant)?;
    for w in &plan.warnings {
        out.warn(w.clone());
    }
    for (s, u) in sections.iter().zip(&arrays) {
        let mut buf = Vec::new();
        u.write_csv(&mut buf)?;
        out.add(format!("pantilt_{}.csv", s.grid.name()), buf);
    }
    let mut csv = Vec::new();
    plan.write_csv(&mut csv)?;
    out.add("plan.csv", csv);
    out.add("plan.json", format!("{}\n", plan.to_json()?).into_bytes());
    out.note(format!("planned {} scan points over {} sections", plan.len(), plan.sections.len()));
    Ok(plan)
}

fn scene_sections(sections: Vec<LoadedSection>) -> Vec<SceneSection> {
    sections
        .into_iter()
        .map(|s| SceneSection {
            grid: s.grid,
            half: s.half,
            analytic: s.analytic,
        })
        .collect()
}

fn cmd_interpolate(a: &InterpolateArgs) -> Result<Outputs> {
    let mut out = Outputs::to(&a.out);
    let sections = interpolate_all(&a.cloud, &a.sections, &mut out)?;
    out.add("grids.csv", grids_csv(&sections)?);
    for s in &sections {
        out.note(format!(
            "{}: {}x{} grid, {} present cells",
            s.grid.name(),
            s.grid.rows(),
            s.grid.cols(),
            s.grid.present_count()
        ));
    }
    Ok(out)
}

fn cmd_plan(a: &PlanArgs) -> Result<Outputs> {
    let cfg = a.scan.config()?;
    let q = quadrant(a.quadrant)?;
    let pose = first_pose(&a.pose)?;
    let mut out = Outputs::to(&a.out);
    let sections = load_surface(&a.surface, &mut out)?;
    plan_outputs(&sections, q, &pose, &cfg, &mut out)?;
    Ok(out)
}

fn cmd_simulate(a: &SimulateArgs) -> Result<Outputs> {
    let cfg = a.scan.config()?;
    let q = quadrant(a.quadrant)?;
    let truth = first_pose(&a.true_pose)?;
    let estimated = match &a.pose {
        Some(p) => first_pose(p)?,
        None => truth,
    };
    let mut out = Outputs::to(&a.out);
    let scene = ScanScene {
        quadrant: q,
        sections: scene_sections(load_surface(&a.surface, &mut out)?),
        cfg,
    };
    if let Some(draws) = a.draws {
        let prop = propagate_pose_error(&scene, &truth, a.sigma_pos, a.sigma_yaw_deg, draws, a.seed)?;
        out.add("propagation.json", format!("{}\n", prop.to_json()?).into_bytes());
        if let Some(s) = prop.pooled_labelling_error_m {
            out.note(format!(
                "{draws} draws: labelling error median {:.4} m, rmse {:.4} m, max {:.4} m",
                s.median, s.rmse, s.max
            ));
        }
        return Ok(out);
    }
    let plan = match &a.plan {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            ScanPlan::from_json(&text)?
        }
        None => scene.plan(&estimated)?,
    };
    let report = execute_plan(&plan, &truth, &estimated, q, &scene.sections, &cfg)?;
    simulation_outputs(&report, &mut out)?;
    Ok(out)
}

fn simulation_outputs(report: &crate::simulator::SimulationReport, out: &mut Outputs) -> Result<()> {
    out.add("report.json", format!("{}\n", report.to_json()?).into_bytes());
    let mut csv = Vec::new();
    report.write_images_csv(&mut csv)?;
    out.add("images.csv", csv);
    out.note(format!(
        "{} images, coverage {:.4}, {} missed shots",
        report.image_count, report.coverage, report.missed_shots
    ));
    Ok(())
}

fn cmd_randomize(a: &RandomizeArgs) -> Result<Outputs> {
    let boundary = match (&a.boundary, a.quadrant) {
        (Some(p), q) => {
            let b = DeploymentBoundary::load(p)?;
            if let Some(q) = q {
                if b.quadrant.number() != q {
                    return Err(Error::InvalidArgument(format!(
                        "boundary file is for quadrant {} but --quadrant {q} was given",
                        b.quadrant.number()
                    )));
                }
            }
            b
        }
        (None, Some(q)) => DeploymentBoundary::default_for(quadrant(q)?),
        (None, None) => return Err(Error::InvalidArgument("give --boundary or --quadrant".into())),
    };
    if let Some(h) = a.hfov_deg {
        if h.is_nan() || h <= 0.0 {
            return Err(Error::InvalidArgument(format!("hfov must be positive, got {h}")));
        }
    }
    let sizes = SplitSizes {
        train: a.train,
        val: a.val,
        test: a.test,
    };
    let manifest = generate_manifest(&boundary, sizes, a.seed, a.hfov_deg)?;
    let mut out = Outputs::to(&a.out);
    out.add("manifest.json", format!("{}\n", manifest.to_json()?).into_bytes());
    out.note(format!(
        "{} samples (train {}, val {}, test {}), seed {}",
        sizes.total(),
        sizes.train,
        sizes.val,
        sizes.test,
        a.seed
    ));
    Ok(out)
}

fn cmd_evaluate(a: &EvaluateArgs) -> Result<Outputs> {
    let gt = read_poses(&a.gt)?;
    let preds: Vec<PoseEstimate> = match &a.pred {
        Some(p) => load_external_predictions(p)?,
        None => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(a.seed);
            gt.iter()
                .map(|g| noisy_oracle_with(g, a.sigma_pos, a.sigma_yaw_deg, &mut rng))
                .collect::<Result<_>>()?
        }
    };
    let stats = evaluate(&preds, &gt)?;
    let mut out = match &a.out {
        Some(d) => Outputs::to(d),
        None => Outputs::default(),
    };
    let text = serde_json::to_string_pretty(&stats).map_err(|e| Error::Inconsistent(e.to_string()))?;
    if a.out.is_some() {
        out.add("stats.json", format!("{text}\n").into_bytes());
    }
    out.note(text);
    Ok(out)
}

#[derive(Debug, Serialize)]
struct LossReport {
    batch: crate::loss::BatchLoss,
    /// Log-variances minimising the batch loss for fixed component losses.
    optimal_log_variance: [Option<f64>; 3],
    /// Finite-difference gradient of the mean total w.r.t. shared
    /// `(s_x, s_q, s_c)` at the optimum; zero up to truncation error.
    gradient_at_optimum: Vec<f64>,
    per_sample_gradient: Vec<crate::loss::LossGradient>,
}

fn cmd_loss_check(a: &LossCheckArgs) -> Result<Outputs> {
    let cyl = CylinderModel::new(a.h0, a.r0)?;
    let fallback = match a.fallback {
        FallbackArg::Skip => IcscFallback::Skip,
        FallbackArg::Error => IcscFallback::Error,
    };
    let default_w = LossWeights::new(a.s_x, a.s_q, a.s_c)?;
    let records = read_samples(&a.samples)?;
    let samples: Vec<_> = records.iter().map(|r| r.sample).collect();
    let weights: Vec<_> = records.iter().map(|r| r.weights.unwrap_or(default_w)).collect();
    let batch = batch_loss(&samples, &weights, &cyl, a.icsc, fallback)?;

    let opt = [
        optimal_log_variance(batch.mean_l_x).ok(),
        optimal_log_variance(batch.mean_l_q).ok(),
        batch.mean_l_c.and_then(|l| optimal_log_variance(l).ok()),
    ];
    let at: Vec<f64> = opt.iter().map(|s| s.unwrap_or(0.0)).collect();
    let gradient_at_optimum = finite_difference_grad(
        |s| {
            let w = vec![LossWeights::new(s[0], s[1], s[2])?; samples.len()];
            Ok(batch_loss(&samples, &w, &cyl, a.icsc, fallback)?.mean_total)
        },
        &at,
        a.fd_step,
    )?;
    let per_sample_gradient = samples
        .iter()
        .zip(&weights)
        .map(|(s, w)| combined_loss_gradient(s, w, &cyl, a.icsc, fallback, a.fd_step))
        .collect::<Result<Vec<_>>>()?;
    let report = LossReport {
        batch,
        optimal_log_variance: opt,
        gradient_at_optimum,
        per_sample_gradient,
    };
    let mut out = match &a.out {
        Some(d) => Outputs::to(d),
        None => Outputs::default(),
    };
    if a.out.is_some() {
        out.add_json("loss.json", &report)?;
    }
    out.note(format!(
        "n={} mean total {:.6} (l_x {:.6}, l_q {:.6}, l_c {}), icsc skipped {}",
        report.batch.n,
        report.batch.mean_total,
        report.batch.mean_l_x,
        report.batch.mean_l_q,
        report.batch.mean_l_c.map_or("n/a".to_string(), |v| format!("{v:.6}")),
        report.batch.icsc_skipped
    ));
    Ok(out)
}

fn cmd_pipeline(a: &PipelineArgs) -> Result<Outputs> {
    let cfg = a.scan.config()?;
    let q = quadrant(a.quadrant)?;
    let estimated = first_pose(&a.pose)?;
    let truth = match &a.true_pose {
        Some(p) => first_pose(p)?,
        None => estimated,
    };
    let mut out = Outputs::to(&a.out);
    if let Some(b) = &a.boundary {
        let boundary = DeploymentBoundary::load(b)?;
        let r = validate_deployment(&estimated, &boundary);
        for v in &r.violations {
            out.warn(format!("estimated pose violates {:?} by {:.3}", v.constraint, v.margin));
        }
    }
    let sections = interpolate_all(&a.cloud, &a.sections, &mut out)?;
    out.add("grids.csv", grids_csv(&sections)?);
    let plan = plan_outputs(&sections, q, &estimated, &cfg, &mut out)?;
    let scene_secs = scene_sections(sections);
    let report = execute_plan(&plan, &truth, &estimated, q, &scene_secs, &cfg)?;
    simulation_outputs(&report, &mut out)?;
    Ok(out)
}
