//! Command-line entry point binding the library modules into reproducible
//! experiments. Every subcommand writes its CSV artifacts plus a
//! `manifest.json` echoing the resolved configuration, the tolerances in
//! effect, the run metrics and the wall-clock time. The manifest is written
//! even when a run fails, with the error recorded.
//!
//! Exit codes: 0 success, 2 argument parsing (from the parser itself),
//! 3 config validation, 4 unreadable/unwritable paths, 5 geometric domain
//! errors (curvature, unit speed, sphere constraint), 6 singular or
//! insufficient data, 7 blow-up.

use clap::{Args, Parser, Subcommand, ValueEnum};
use g2flow::curve::{self, Boundary, CurveState};
use g2flow::error::Error;
use g2flow::flow::{
    conservation_curve, conservation_sphere, evolve_curve, evolve_sphere, u_presets, CurveFlow,
    FlowConfig, Projection, Scheme, Trajectory,
};
use g2flow::frame::{
    build_g2_frame, complex_frame_relations, complex_frenet_residual, complexify_frame,
    frenet_residual, hasimoto_fields, FrameThresholds,
};
use g2flow::nlss::{
    cross_validate_refinement, evolve_nlss, nonlocal_integrand_means, presets as nlss_presets,
    CrossValidateOptions, NlssConfig, NlssSystem, DIVISOR_FLOOR,
};
use g2flow::octonion::{mat7_identity, mat7_orthogonality_dev, ImOctonion, Mat7, BLOCK_ROTATION_A};
use g2flow::surface::{rotate_frame, second_fundamental_form, trajectory_plane_check};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::time::Instant;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug, Serialize)]
#[command(name = "g2flow", version, about = "Octonionic binormal-flow laboratory")]
struct Cli {
    /// Output directory (joined to $G2FLOW_OUTPUT_ROOT when relative)
    #[arg(long, global = true, default_value = "g2flow-out")]
    out_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
enum Command {
    /// Dump the imaginary multiplication and cross-product tables as CSV
    Tables,
    /// Build the moving frame of a curve and report its residuals
    Frame(FrameArgs),
    /// Evolve a curve under the binormal flow
    SimulateCurve(CurveRunArgs),
    /// Evolve a unit-sphere map under u_t = u × u_ss
    SimulateU(SphereRunArgs),
    /// Evolve the three-field system
    SimulateNlss(NlssRunArgs),
    /// Evolve a curve under the modified flow twisted by an orthogonal matrix
    SimulateModified(ModifiedRunArgs),
    /// Compare the curve pipeline against the field pipeline over a grid sweep
    CrossValidate(CrossValidateArgs),
    /// Fundamental-form diagnostics of the swept surface
    Surface(SurfaceRunArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CurvePresetArg {
    Line,
    Circle,
    TiltedCircle,
    Helix,
    PerturbedCircle,
    RandomFourier,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SchemeArg {
    Rk4,
    Midpoint,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ProjectionArg {
    None,
    Renormalize,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum BoundaryArg {
    Periodic,
    Clamped,
}

#[derive(Args, Debug, Serialize, Clone)]
struct CurveSourceArgs {
    /// Analytic preset
    #[arg(long, value_enum)]
    preset: Option<CurvePresetArg>,
    /// CSV input (columns s,c1..c7) as an alternative to a preset
    #[arg(long, conflicts_with = "preset")]
    input: Option<PathBuf>,
    /// Boundary treatment for CSV input
    #[arg(long, value_enum, default_value = "periodic")]
    boundary: BoundaryArg,
    /// Resample CSV input to uniform arclength before use
    #[arg(long, default_value_t = false)]
    reparameterize: bool,
    /// Number of samples
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Helix radius
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Helix pitch
    #[arg(long, default_value_t = 1.0)]
    pitch: f64,
    /// Line length
    #[arg(long, default_value_t = 5.0)]
    length: f64,
    /// Perturbation amplitude
    #[arg(long, default_value_t = 0.05)]
    amplitude: f64,
    /// Perturbation modes (comma separated)
    #[arg(long, value_delimiter = ',', default_value = "2")]
    modes: Vec<usize>,
    /// Seed for the random presets
    #[arg(long, default_value_t = 11)]
    seed: u64,
}

impl CurveSourceArgs {
    fn build(&self) -> Result<CurveState, Error> {
        if self.n < curve::MIN_SAMPLES {
            return Err(Error::InvalidInput(format!(
                "n must be at least {}, got {}",
                curve::MIN_SAMPLES,
                self.n
            )));
        }
        if let Some(path) = &self.input {
            let text = std::fs::read_to_string(path)?;
            let boundary = match self.boundary {
                BoundaryArg::Periodic => Boundary::periodic(),
                BoundaryArg::Clamped => Boundary::Clamped,
            };
            let state = g2flow::csvio::curve_from_csv(&text, boundary)?;
            return if self.reparameterize {
                curve::reparameterize(&state)
            } else {
                Ok(state)
            };
        }
        match self.preset.unwrap_or(CurvePresetArg::Circle) {
            CurvePresetArg::Line => curve::line(self.length, self.n),
            CurvePresetArg::Circle => curve::circle(self.n),
            CurvePresetArg::TiltedCircle => curve::tilted_circle(self.n),
            CurvePresetArg::Helix => curve::helix(self.radius, self.pitch, self.n),
            CurvePresetArg::PerturbedCircle => {
                curve::perturbed_circle(self.n, self.amplitude, &self.modes, self.seed)
            }
            CurvePresetArg::RandomFourier => {
                curve::random_fourier(self.n, 3, self.amplitude, self.seed)
            }
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct FrameArgs {
    #[command(flatten)]
    source: CurveSourceArgs,
}

#[derive(Args, Debug, Serialize)]
struct EvolveArgs {
    /// Time step
    #[arg(long, default_value_t = 1e-4)]
    dt: f64,
    /// Final time
    #[arg(long, default_value_t = 0.1)]
    t_end: f64,
    /// Number of output snapshots (after the initial one)
    #[arg(long, default_value_t = 4)]
    outputs: usize,
    /// Step bound factor: dt must not exceed cfl * ds^2
    #[arg(long, default_value_t = 0.2)]
    cfl: f64,
    #[arg(long, value_enum, default_value = "rk4")]
    scheme: SchemeArg,
}

impl EvolveArgs {
    fn flow_config(&self, projection: Projection) -> FlowConfig {
        FlowConfig {
            dt: self.dt,
            t_end: self.t_end,
            scheme: match self.scheme {
                SchemeArg::Rk4 => Scheme::Rk4,
                SchemeArg::Midpoint => Scheme::Midpoint,
            },
            projection,
            cfl_limit: self.cfl,
            n_outputs: self.outputs,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct CurveRunArgs {
    #[command(flatten)]
    source: CurveSourceArgs,
    #[command(flatten)]
    evolve: EvolveArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SpherePresetArg {
    Constant,
    GreatCircle,
    Perturbed,
}

#[derive(Args, Debug, Serialize)]
struct SphereRunArgs {
    #[arg(long, value_enum, default_value = "great-circle")]
    preset: SpherePresetArg,
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Great-circle mode number
    #[arg(long, default_value_t = 1)]
    mode: usize,
    #[arg(long, default_value_t = 0.1)]
    amplitude: f64,
    #[arg(long, default_value_t = 11)]
    seed: u64,
    #[arg(long, value_enum, default_value = "renormalize")]
    projection: ProjectionArg,
    #[command(flatten)]
    evolve: EvolveArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum NlssPresetArg {
    Soliton,
    PlaneWave,
    Gaussian,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SystemArg {
    Standard,
    Variant,
}

#[derive(Args, Debug, Serialize)]
struct NlssRunArgs {
    #[arg(long, value_enum)]
    preset: Option<NlssPresetArg>,
    /// CSV input (columns s,re1,im1,re2,im2,re3,im3)
    #[arg(long, conflicts_with = "preset")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "periodic")]
    boundary: BoundaryArg,
    #[arg(long, default_value_t = 1024)]
    n: usize,
    /// Soliton amplitude
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Half-width of the s interval for soliton and gaussian presets
    #[arg(long, default_value_t = 20.0)]
    s_half: f64,
    /// Plane-wave amplitude
    #[arg(long, default_value_t = 0.7)]
    c_amp: f64,
    /// Plane-wave integer mode
    #[arg(long, default_value_t = 3)]
    mode: i32,
    /// Gaussian width
    #[arg(long, default_value_t = 2.0)]
    width: f64,
    #[arg(long, value_enum, default_value = "standard")]
    system: SystemArg,
    #[command(flatten)]
    evolve: EvolveArgs,
}

#[derive(Args, Debug, Serialize)]
struct ModifiedRunArgs {
    #[command(flatten)]
    source: CurveSourceArgs,
    #[command(flatten)]
    evolve: EvolveArgs,
    /// Twisting matrix: "identity", "block-rotation" or a CSV path with 7
    /// rows of 7 entries
    #[arg(long, default_value = "block-rotation")]
    matrix: String,
}

#[derive(Args, Debug, Serialize)]
struct CrossValidateArgs {
    #[command(flatten)]
    source: CurveSourceArgs,
    /// Grid sizes to sweep (comma separated)
    #[arg(long, value_delimiter = ',', default_value = "128,256")]
    n_list: Vec<usize>,
    #[arg(long, default_value_t = 0.05)]
    t_end: f64,
    #[arg(long, default_value_t = 4)]
    outputs: usize,
    /// dt = cfl-frac * ds^2 in both pipelines
    #[arg(long, default_value_t = 0.1)]
    cfl_frac: f64,
}

#[derive(Args, Debug, Serialize)]
struct SurfaceRunArgs {
    #[command(flatten)]
    source: CurveSourceArgs,
    /// Evolve for this long before taking the diagnostic slice (0 = none)
    #[arg(long, default_value_t = 0.0)]
    t_end: f64,
    #[arg(long, default_value_t = 1e-4)]
    dt: f64,
}

fn mat_from_arg(spec: &str) -> Result<Mat7, Error> {
    match spec {
        "identity" => Ok(mat7_identity()),
        "block-rotation" => Ok(BLOCK_ROTATION_A),
        path => {
            let text = std::fs::read_to_string(path)?;
            let mut m = [[0.0; 7]; 7];
            let mut rows = 0;
            for line in text.lines().filter(|l| !l.trim().is_empty()) {
                let fields: Vec<&str> = line.split(',').collect();
                if fields.len() != 7 || rows >= 7 {
                    return Err(Error::Parse(format!(
                        "matrix file must have 7 rows of 7 entries, bad row {}",
                        rows + 1
                    )));
                }
                for (j, f) in fields.iter().enumerate() {
                    m[rows][j] = f
                        .trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("matrix entry: {e}")))?;
                }
                rows += 1;
            }
            if rows != 7 {
                return Err(Error::Parse("matrix file must have 7 rows".into()));
            }
            Ok(m)
        }
    }
}

fn tolerances() -> Value {
    let thresholds = FrameThresholds::default();
    json!({
        "k1_min": thresholds.k1_min,
        "kappa2_min": thresholds.kappa2_min,
        "divisor_floor": DIVISOR_FLOOR,
        "matrix_orthogonality_tol": 1e-10,
        "sphere_constraint_tol": 1e-9,
        "blowup_norm": 1e6,
        "unit_speed_tol": "10 * ds^2 (>= 1e-9)",
        "associative_plane_tol": g2flow::surface::ASSOCIATIVE_TOL,
    })
}

struct OutDir {
    path: PathBuf,
    files: Vec<String>,
}

impl OutDir {
    fn create(path: &Path) -> Result<Self, Error> {
        std::fs::create_dir_all(path)?;
        Ok(OutDir {
            path: path.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), Error> {
        std::fs::write(self.path.join(name), contents)?;
        self.files.push(name.to_string());
        Ok(())
    }
}

fn curve_trajectory_csvs(out: &mut OutDir, traj: &Trajectory<CurveState>) -> Result<(), Error> {
    for (idx, state) in traj.states.iter().enumerate() {
        out.write(
            &format!("curve_{idx:04}.csv"),
            &g2flow::csvio::curve_to_csv(state),
        )?;
    }
    Ok(())
}

fn run_command(cli: &Cli, out: &mut OutDir) -> Result<Value, Error> {
    match &cli.command {
        Command::Tables => {
            out.write("mul_table.csv", &g2flow::octonion::mul_table_csv())?;
            out.write("cross_table.csv", &g2flow::octonion::cross_table_csv())?;
            Ok(json!({}))
        }
        Command::Frame(args) => {
            let curve = args.source.build()?;
            let frame = build_g2_frame(&curve, ImOctonion::basis(3), &FrameThresholds::default())?;
            let cframe = complexify_frame(&frame);
            let fields = hasimoto_fields(&frame, &cframe);
            out.write("frame.csv", &g2flow::csvio::frame_to_csv(&frame))?;
            out.write("fields.csv", &g2flow::csvio::fields_to_csv(&fields))?;
            let res = frenet_residual(&frame);
            let cres = complex_frenet_residual(&cframe, &fields);
            let rel = complex_frame_relations(&cframe);
            Ok(json!({
                "gram_max_dev": frame.gram_max_dev(),
                "closure_max_dev": frame.closure_max_dev(),
                "rho_constraint_max": frame.rho_constraint_max(),
                "beta_constraint_max": frame.beta_constraint_max(),
                "degenerate_samples": frame.degenerate.iter().filter(|d| **d).count(),
                "frenet_residual_max": res.max_residual,
                "complex_frenet_residual_max": cres.max_residual,
                "mul_table_dev": cres.mul_table_dev,
                "cross_table_dev": cres.cross_table_dev,
                "inner_relations_dev": rel.inner_dev,
                "triple_product_dev": rel.triple_dev,
            }))
        }
        Command::SimulateCurve(args) => {
            let curve = args.source.build()?;
            let config = args.evolve.flow_config(Projection::None);
            let traj = evolve_curve(&curve, &CurveFlow::Binormal, &config)?;
            curve_trajectory_csvs(out, &traj)?;
            let report = conservation_curve(&traj)?;
            Ok(json!({
                "times": traj.times,
                "arclength_rel_drift_max": report.max_arclength_drift(),
                "speed_max_dev": report.max_speed_dev(),
            }))
        }
        Command::SimulateU(args) => {
            let state = match args.preset {
                SpherePresetArg::Constant => u_presets::constant(args.n)?,
                SpherePresetArg::GreatCircle => u_presets::great_circle(args.n, args.mode)?,
                SpherePresetArg::Perturbed => {
                    u_presets::perturbed(args.n, args.amplitude, args.seed)?
                }
            };
            let projection = match args.projection {
                ProjectionArg::None => Projection::None,
                ProjectionArg::Renormalize => Projection::Renormalize,
            };
            let config = args.evolve.flow_config(projection);
            let traj = evolve_sphere(&state, &config)?;
            for (idx, s) in traj.states.iter().enumerate() {
                out.write(&format!("u_{idx:04}.csv"), &g2flow::csvio::sphere_to_csv(s))?;
            }
            let report = conservation_sphere(&traj)?;
            Ok(json!({
                "times": traj.times,
                "norm_max_dev": report.max_norm_dev(),
                "energy_rel_drift_max": report.max_energy_drift(),
            }))
        }
        Command::SimulateNlss(args) => {
            let state = if let Some(path) = &args.input {
                let text = std::fs::read_to_string(path)?;
                g2flow::csvio::nlss_from_csv(
                    &text,
                    matches!(args.boundary, BoundaryArg::Periodic),
                )?
            } else {
                match args.preset.unwrap_or(NlssPresetArg::Soliton) {
                    NlssPresetArg::Soliton => {
                        nlss_presets::soliton(args.eta, args.s_half, args.n)?
                    }
                    NlssPresetArg::PlaneWave => nlss_presets::plane_wave(
                        args.c_amp,
                        args.mode,
                        2.0 * std::f64::consts::PI,
                        args.n,
                    )?,
                    NlssPresetArg::Gaussian => {
                        nlss_presets::gaussian(args.c_amp, args.width, args.s_half, args.n)?
                    }
                }
            };
            let config = NlssConfig {
                dt: args.evolve.dt,
                t_end: args.evolve.t_end,
                cfl_limit: args.evolve.cfl,
                n_outputs: args.evolve.outputs,
                system: match args.system {
                    SystemArg::Standard => NlssSystem::Standard,
                    SystemArg::Variant => NlssSystem::Variant,
                },
            };
            let traj = evolve_nlss(&state, &config)?;
            for (idx, s) in traj.states.iter().enumerate() {
                out.write(&format!("fields_{idx:04}.csv"), &g2flow::csvio::nlss_to_csv(s))?;
            }
            let last = traj.states.last().unwrap();
            let mass0 = state.mass();
            let means = nonlocal_integrand_means(last)?;
            let mean_max = means
                .map(|m| m.iter().map(|v| v.abs()).fold(0.0, f64::max))
                .unwrap_or(0.0);
            let mut warnings: Vec<String> = Vec::new();
            if mean_max > 1e-10 {
                warnings.push(format!(
                    "nonlocal integrands have nonzero period mean (max |mean| = {mean_max:.3e})"
                ));
            }
            Ok(json!({
                "times": traj.times,
                "mass_rel_drift": (last.mass() - mass0).abs() / mass0.max(1e-300),
                "integrand_mean_max": mean_max,
                "final_windings": last.windings,
                "warnings": warnings,
            }))
        }
        Command::SimulateModified(args) => {
            let curve = args.source.build()?;
            let matrix = mat_from_arg(&args.matrix)?;
            let config = args.evolve.flow_config(Projection::None);
            let traj = evolve_curve(&curve, &CurveFlow::Modified(matrix), &config)?;
            curve_trajectory_csvs(out, &traj)?;
            let report = conservation_curve(&traj)?;
            Ok(json!({
                "times": traj.times,
                "matrix_orthogonality_dev": mat7_orthogonality_dev(&matrix),
                "arclength_rel_drift_max": report.max_arclength_drift(),
                "speed_max_dev": report.max_speed_dev(),
            }))
        }
        Command::CrossValidate(args) => {
            for &n in &args.n_list {
                if n < curve::MIN_SAMPLES {
                    return Err(Error::InvalidInput(format!("grid size {n} too small")));
                }
            }
            let source = args.source.clone();
            let build = move |n: usize| {
                let mut s = source.clone();
                s.n = n;
                s.build()
            };
            let opts = CrossValidateOptions {
                t_end: args.t_end,
                n_outputs: args.outputs,
                cfl_frac: args.cfl_frac,
                fallback_seed: ImOctonion::basis(3),
            };
            let refine = cross_validate_refinement(&build, &args.n_list, &opts)?;
            let reports: Vec<Value> = refine
                .reports
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "mag_disc": r.mag_disc,
                        "mag_disc_max": r.mag_disc_max,
                        "phase_disc_max": r.phase_disc_max,
                        "winding_disc_max": r.winding_disc_max,
                        "integrand_mean_max": r.integrand_mean_max,
                        "warnings": r.warnings,
                    })
                })
                .collect();
            Ok(json!({
                "grids": args.n_list,
                "reports": reports,
                "orders": refine.orders,
            }))
        }
        Command::Surface(args) => {
            let curve = args.source.build()?;
            let (slice, plane): (CurveState, Value) = if args.t_end > 0.0 {
                let config = FlowConfig {
                    dt: args.dt,
                    t_end: args.t_end,
                    scheme: Scheme::Rk4,
                    projection: Projection::None,
                    cfl_limit: 0.2,
                    n_outputs: 4,
                };
                let traj = evolve_curve(&curve, &CurveFlow::Binormal, &config)?;
                let check = trajectory_plane_check(&traj);
                let plane = json!({
                    "residual": check.residual,
                    "associativity_residual": check.associativity_residual,
                    "is_associative": check.is_associative,
                });
                (traj.states.last().unwrap().clone(), plane)
            } else {
                (curve, Value::Null)
            };
            let frame = build_g2_frame(&slice, ImOctonion::basis(3), &FrameThresholds::default())?;
            let cframe = complexify_frame(&frame);
            let fields = hasimoto_fields(&frame, &cframe);
            let h = second_fundamental_form(&fields)?;
            out.write("surface.csv", &g2flow::csvio::surface_to_csv(&h))?;
            let rotated = match rotate_frame(&h, &fields) {
                Ok(r) => {
                    out.write("surface_rotated.csv", &g2flow::csvio::surface_to_csv(&r))?;
                    json!("written")
                }
                Err(Error::DegenerateRotation { index }) => {
                    json!(format!("degenerate at sample {index}"))
                }
                Err(e) => return Err(e),
            };
            let max_extra = (0..h.len())
                .map(|m| {
                    h.h4_22[m]
                        .abs()
                        .max(h.h5_12[m].abs())
                        .max(h.h5_22[m].unwrap_or(0.0).abs())
                        .max(h.h6_22[m].unwrap_or(0.0).abs())
                        .max(h.h7_22[m].unwrap_or(0.0).abs())
                })
                .fold(0.0, f64::max);
            Ok(json!({
                "max_extra_normal_entry": max_extra,
                "rotation": rotated,
                "plane_check": plane,
            }))
        }
    }
}

fn command_name(cli: &Cli) -> &'static str {
    match cli.command {
        Command::Tables => "tables",
        Command::Frame(_) => "frame",
        Command::SimulateCurve(_) => "simulate-curve",
        Command::SimulateU(_) => "simulate-u",
        Command::SimulateNlss(_) => "simulate-nlss",
        Command::SimulateModified(_) => "simulate-modified",
        Command::CrossValidate(_) => "cross-validate",
        Command::Surface(_) => "surface",
    }
}

fn main() {
    let cli = Cli::parse();
    let out_path = match std::env::var_os("G2FLOW_OUTPUT_ROOT") {
        Some(root) if cli.out_dir.is_relative() => PathBuf::from(root).join(&cli.out_dir),
        _ => cli.out_dir.clone(),
    };
    let mut out = match OutDir::create(&out_path) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    };
    let start = Instant::now();
    let result = run_command(&cli, &mut out);
    let wall = start.elapsed().as_secs_f64();
    let (metrics, error, code) = match result {
        Ok(metrics) => (metrics, Value::Null, 0),
        Err(e) => {
            eprintln!("error: {e}");
            (Value::Null, json!(e.to_string()), e.exit_code())
        }
    };
    let manifest = json!({
        "schema_version": SCHEMA_VERSION,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "subcommand": command_name(&cli),
        "config": serde_json::to_value(&cli).unwrap_or(Value::Null),
        "tolerances": tolerances(),
        "metrics": metrics,
        "outputs": out.files,
        "error": error,
        "wall_time_seconds": wall,
    });
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serialization");
    if let Err(e) = std::fs::write(out.path.join("manifest.json"), text) {
        eprintln!("error writing manifest: {e}");
        std::process::exit(4);
    }
    std::process::exit(code);
}
