//! Argument parsing and command dispatch for the `beamnet` binary.
//!
//! Exit codes: 0 on success, 1 when a solver or generation failure was
//! recorded in the output directory, 2 on usage errors (nothing written).

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use beamnet::beam::SectionError;
use beamnet::netgen::{self, GenError, NetworkModel, NotchSpec};
use beamnet::report;
use beamnet::solver::{self, SolveError};
use beamnet::{Scheme, SolveConfig, Termination};
use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::compare::{grid_csv, grid_table, parse_scheme_spec, run_grid, SchemeSpec};
use crate::output::{self, error_json, OutputDir, OutputError};
use crate::plot;
use crate::scenarios;
use crate::settings::{
    load_settings, solve_config, FileSettings, RunFlags, ScenarioDefaults,
    SettingsError,
};

const CANTILEVER_DEFAULTS: ScenarioDefaults = ScenarioDefaults {
    scheme: "hybrid",
    steps: 500,
    displacement: 0.25,
};
const TENSILE_DEFAULTS: ScenarioDefaults = ScenarioDefaults {
    scheme: "hybrid",
    steps: 100,
    displacement: 2.0,
};
const NOTCHED_DEFAULTS: ScenarioDefaults = ScenarioDefaults {
    scheme: "hybrid",
    steps: 100,
    displacement: 1.0,
};
const NETWORK_DEFAULTS: ScenarioDefaults = ScenarioDefaults {
    scheme: "hybrid",
    steps: 100,
    displacement: f64::NAN,
};

#[derive(Debug, Parser)]
#[command(
    name = "beamnet",
    version,
    about = "Quasi-static fracture of fiber networks with embedded hinges"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Clamped axial bar with one weakened element, swept over fracture
    /// energies and mesh sizes
    Cantilever(CantileverArgs),
    /// Random fiber sheet stretched between two grips
    Tensile(TensileArgs),
    /// Tensile sheet weakened by a triangular edge notch
    Notched(NotchedArgs),
    /// Run a previously generated model file
    Network(NetworkArgs),
    /// Compare tangent schemes over a grid of step counts
    Compare(CompareArgs),
}

/// Solver and output flags shared by every run command.
#[derive(Debug, Clone, Args)]
struct RunArgs {
    /// Tangent scheme: monolithic, staggered or hybrid
    #[arg(long)]
    scheme: Option<String>,
    /// Stiffness floor of the hybrid scheme, as a fraction of EA/l
    #[arg(long)]
    htol: Option<f64>,
    /// Number of displacement steps
    #[arg(long)]
    steps: Option<usize>,
    /// Total imposed displacement [mm]
    #[arg(long)]
    displacement: Option<f64>,
    /// Relative residual tolerance
    #[arg(long)]
    tol_rel: Option<f64>,
    /// Absolute residual tolerance [N]
    #[arg(long)]
    tol_abs: Option<f64>,
    /// Iteration cap per step
    #[arg(long)]
    max_iters: Option<usize>,
    /// Bisection depth when a step fails
    #[arg(long)]
    bisections: Option<usize>,
    /// Output directory (default $BEAMNET_OUTPUT_ROOT/<label>)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replace artifacts already present in the output directory
    #[arg(long)]
    overwrite: bool,
    /// TOML config file whose keys mirror these flags
    #[arg(long)]
    config: Option<PathBuf>,
    /// Also write SVG plots of the curve and the final network state
    #[arg(long)]
    plot: bool,
}

impl RunArgs {
    fn flags(&self) -> RunFlags {
        RunFlags {
            scheme: self.scheme.clone(),
            htol: self.htol,
            steps: self.steps,
            displacement: self.displacement,
            tol_rel: self.tol_rel,
            tol_abs: self.tol_abs,
            max_iters: self.max_iters,
            bisections: self.bisections,
        }
    }
}

#[derive(Debug, Args)]
struct CantileverArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Fracture energies to sweep [N/mm]
    #[arg(long = "gf", value_delimiter = ',', default_values_t = vec![0.02, 0.05, 0.1])]
    gf: Vec<f64>,
    /// Element counts to sweep
    #[arg(long, value_delimiter = ',', default_values_t = vec![1, 10])]
    elements: Vec<usize>,
}

#[derive(Debug, Args)]
struct TensileArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Sheet width between the grips [mm]
    #[arg(long, default_value_t = 18.0)]
    width: f64,
    /// Sheet height [mm]
    #[arg(long, default_value_t = 6.0)]
    height: f64,
    /// Sheet grammage [g/m^2]
    #[arg(long, default_value_t = 1000.0)]
    density: f64,
    /// Fiber fracture energy [N/mm]
    #[arg(long, default_value_t = scenarios::DEFAULT_G_F)]
    gf: f64,
    /// Seed for the fiber deposition (default 7)
    #[arg(long)]
    seed: Option<u64>,
    /// Depth of the clamped band at each grip [mm]
    #[arg(long, default_value_t = 0.5)]
    grip_band: f64,
}

#[derive(Debug, Args)]
struct NotchedArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Sheet width between the grips [mm]
    #[arg(long, default_value_t = 9.0)]
    width: f64,
    /// Sheet height [mm]
    #[arg(long, default_value_t = 3.0)]
    height: f64,
    /// Sheet grammage [g/m^2]
    #[arg(long, default_value_t = 500.0)]
    density: f64,
    /// Fiber fracture energy [N/mm]
    #[arg(long, default_value_t = scenarios::DEFAULT_G_F)]
    gf: f64,
    /// Seed for the fiber deposition (default 7)
    #[arg(long)]
    seed: Option<u64>,
    /// Depth of the clamped band at each grip [mm]
    #[arg(long, default_value_t = 0.5)]
    grip_band: f64,
    /// Notch depth from the bottom edge [mm]
    #[arg(long, default_value_t = 1.5)]
    notch_depth: f64,
    /// Notch opening angle [deg]
    #[arg(long, default_value_t = 20.0)]
    notch_angle: f64,
    /// Notch apex x position (default: mid-width) [mm]
    #[arg(long)]
    notch_apex: Option<f64>,
}

#[derive(Debug, Args)]
struct NetworkArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Model JSON file produced by a previous run
    model: PathBuf,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Scenario to compare on: cantilever, tensile or notched
    #[arg(long, default_value = "notched", conflicts_with = "model")]
    scenario: String,
    /// Model JSON file to compare on instead of a built-in scenario
    #[arg(long)]
    model: Option<PathBuf>,
    /// Schemes to compare; hybrid takes an optional tolerance as hybrid:0.1
    #[arg(
        long,
        value_delimiter = ',',
        default_values_t = [
            "staggered".to_string(),
            "hybrid:0.1".to_string(),
            "hybrid:0.01".to_string(),
            "monolithic".to_string(),
        ]
    )]
    schemes: Vec<String>,
    /// Step counts to compare
    #[arg(long, value_delimiter = ',', default_values_t = vec![20, 100, 200, 500])]
    steps: Vec<usize>,
    /// Total imposed displacement [mm]
    #[arg(long)]
    displacement: Option<f64>,
    /// Fiber fracture energy [N/mm]
    #[arg(long)]
    gf: Option<f64>,
    /// Seed for the fiber deposition (default 7)
    #[arg(long)]
    seed: Option<u64>,
    /// Sheet grammage [g/m^2]
    #[arg(long)]
    density: Option<f64>,
    /// Output directory (default $BEAMNET_OUTPUT_ROOT/<label>)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replace artifacts already present in the output directory
    #[arg(long)]
    overwrite: bool,
    /// TOML config file whose keys mirror the run flags
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Settings(#[from] SettingsError),
    #[error(transparent)]
    Output(#[from] OutputError),
    #[error(transparent)]
    Section(#[from] SectionError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

impl CliError {
    /// 2 for usage-level problems (nothing useful was written), 1 for
    /// failures of a prepared run.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Settings(_) | CliError::Section(_) => 2,
            CliError::Output(OutputError::WouldClobber { .. }) => 2,
            CliError::Output(OutputError::Io { .. }) | CliError::Solve(_) => 1,
        }
    }
}

/// Parses the command line, runs the command and maps errors to exit codes.
pub fn run_cli() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Cantilever(args) => run_cantilever(args),
        Command::Tensile(args) => run_tensile(args),
        Command::Notched(args) => run_notched(args),
        Command::Network(args) => run_network(args),
        Command::Compare(args) => run_compare(args),
    }
}

fn require(condition: bool, message: &str) -> Result<(), CliError> {
    if condition {
        Ok(())
    } else {
        Err(CliError::Usage(message.into()))
    }
}

/// Validates the merged solve config up front so bad values become usage
/// errors before any directory is created.
fn check_config(config: &SolveConfig) -> Result<(), CliError> {
    require(config.n_steps >= 1, "steps must be at least 1")?;
    require(
        config.total_displacement.is_finite() && config.total_displacement != 0.0,
        "displacement must be finite and nonzero",
    )?;
    require(config.tol_rel > 0.0, "tol-rel must be positive")?;
    require(config.max_iters >= 1, "max-iters must be at least 1")?;
    if let Scheme::Hybrid { h_tol } = config.scheme {
        require(
            h_tol > 0.0 && h_tol < 1.0,
            "htol must lie strictly between 0 and 1",
        )?;
    }
    Ok(())
}

fn file_out(file: &FileSettings) -> Option<PathBuf> {
    file.out.clone().map(PathBuf::from)
}

fn gen_error_kind(err: &GenError) -> &'static str {
    match err {
        GenError::NotPercolated { .. } => "not-percolated",
        GenError::NotchDisconnects { .. } => "notch-disconnects",
        GenError::BadFormat { .. } | GenError::Invalid { .. } => "bad-model",
        _ => "bad-spec",
    }
}

fn solve_error_kind(err: &SolveError) -> &'static str {
    match err {
        SolveError::SnapBack { .. } => "snap-back",
        SolveError::Model(e) => gen_error_kind(e),
        SolveError::BadConfig(_) => "config",
        SolveError::Element { .. } => "element",
        SolveError::Resource => "resource",
    }
}

/// Runs one prepared model and writes all artifacts. Returns whether the
/// ramp completed; failures are recorded in `error.json` next to the
/// artifacts of the converged part.
fn execute_run(
    out: &OutputDir,
    label: &str,
    model: &NetworkModel,
    config: &SolveConfig,
    want_plot: bool,
) -> Result<bool, CliError> {
    out.write(output::MODEL_FILE, &model.to_json())?;
    let t0 = Instant::now();
    match solver::run(model, config) {
        Ok(run_report) => {
            let wall = t0.elapsed().as_secs_f64();
            let summary = report::summarize(config, &run_report, wall);
            out.write(output::HISTORY_FILE, &report::history_csv(&run_report.records))?;
            out.write(output::SUMMARY_FILE, &summary.to_json())?;
            out.write(output::STATES_FILE, &report::states_json(&run_report.final_states))?;
            if want_plot {
                out.write(output::CURVE_FILE, &plot::curve_svg(&run_report.records))?;
                out.write(
                    output::NETWORK_FILE,
                    &plot::network_svg(model, &run_report.final_states),
                )?;
            }
            match &run_report.termination {
                Termination::Completed => {
                    println!(
                        "{label}: completed {} steps, {} iterations, peak {:.4} N -> {}",
                        run_report.records.len(),
                        run_report.cumulative_iterations,
                        summary.peak_reaction,
                        out.dir.display()
                    );
                    Ok(true)
                }
                Termination::StepFailed { step, failure } => {
                    let message = format!("step {step}: {failure}");
                    out.write(output::ERROR_FILE, &error_json("solver", &message))?;
                    eprintln!("{label}: failed at {message}");
                    Ok(false)
                }
            }
        }
        Err(err) => {
            out.write(
                output::ERROR_FILE,
                &error_json(solve_error_kind(&err), &err.to_string()),
            )?;
            eprintln!("{label}: {err}");
            Ok(false)
        }
    }
}

/// Generates a network, recording generation failures in the prepared
/// output directory.
fn generate_into(
    out: &OutputDir,
    label: &str,
    spec: &netgen::NetworkSpec,
) -> Result<Option<NetworkModel>, CliError> {
    match netgen::generate(spec) {
        Ok(model) => {
            println!(
                "{label}: generated {} nodes, {} elements",
                model.nodes.len(),
                model.elements.len()
            );
            Ok(Some(model))
        }
        Err(err) => {
            out.write(
                output::ERROR_FILE,
                &error_json(gen_error_kind(&err), &err.to_string()),
            )?;
            eprintln!("{label}: {err}");
            Ok(None)
        }
    }
}

fn run_cantilever(args: CantileverArgs) -> Result<ExitCode, CliError> {
    let file = load_settings(args.run.config.as_deref())?;
    require(!args.gf.is_empty(), "at least one fracture energy is required")?;
    require(!args.elements.is_empty(), "at least one element count is required")?;
    for &gf in &args.gf {
        require(gf.is_finite() && gf > 0.0, "fracture energies must be positive")?;
    }
    for &n in &args.elements {
        require(n >= 1, "element counts must be at least 1")?;
    }
    let config = solve_config(&args.run.flags(), &file, CANTILEVER_DEFAULTS)?;
    check_config(&config)?;
    let root = OutputDir::resolve(args.run.out.clone(), file_out(&file), "cantilever");

    let mut all_ok = true;
    for &gf in &args.gf {
        for &n in &args.elements {
            let sub = root.subdir(&format!("gf{gf}-n{n}"));
            sub.prepare(args.run.overwrite)?;
            let label = format!("cantilever gf={gf} n={n}");
            let model = scenarios::bar_model(n, gf)?;
            all_ok &= execute_run(&sub, &label, &model, &config, args.run.plot)?;
        }
    }
    Ok(ExitCode::from(u8::from(!all_ok)))
}

fn run_tensile(args: TensileArgs) -> Result<ExitCode, CliError> {
    let file = load_settings(args.run.config.as_deref())?;
    let config = solve_config(&args.run.flags(), &file, TENSILE_DEFAULTS)?;
    check_config(&config)?;
    require(
        args.width > 0.0 && args.height > 0.0,
        "sheet dimensions must be positive",
    )?;
    require(args.density > 0.0, "density must be positive")?;
    require(
        args.grip_band > 0.0 && 2.0 * args.grip_band < args.width,
        "grip band must be positive and the grips must not overlap",
    )?;
    let seed = args.seed.or(file.seed).unwrap_or(7);
    let spec = scenarios::tensile_spec(
        args.width,
        args.height,
        args.density,
        args.gf,
        seed,
        args.grip_band,
    )?;
    let label = format!("tensile-s{seed}");
    let out = OutputDir::resolve(args.run.out.clone(), file_out(&file), &label);
    out.prepare(args.run.overwrite)?;
    let Some(model) = generate_into(&out, &label, &spec)? else {
        return Ok(ExitCode::from(1));
    };
    let ok = execute_run(&out, &label, &model, &config, args.run.plot)?;
    Ok(ExitCode::from(u8::from(!ok)))
}

fn run_notched(args: NotchedArgs) -> Result<ExitCode, CliError> {
    let file = load_settings(args.run.config.as_deref())?;
    let config = solve_config(&args.run.flags(), &file, NOTCHED_DEFAULTS)?;
    check_config(&config)?;
    require(
        args.width > 0.0 && args.height > 0.0,
        "sheet dimensions must be positive",
    )?;
    require(args.density > 0.0, "density must be positive")?;
    require(
        args.grip_band > 0.0 && 2.0 * args.grip_band < args.width,
        "grip band must be positive and the grips must not overlap",
    )?;
    require(
        args.notch_depth > 0.0 && args.notch_depth < args.height,
        "notch depth must lie within the sheet height",
    )?;
    require(
        args.notch_angle > 0.0 && args.notch_angle < 180.0,
        "notch angle must lie strictly between 0 and 180 degrees",
    )?;
    let notch = NotchSpec {
        angle_deg: args.notch_angle,
        depth: args.notch_depth,
        apex_x: args.notch_apex.unwrap_or(args.width / 2.0),
    };
    let seed = args.seed.or(file.seed).unwrap_or(7);
    let spec = scenarios::notched_spec(
        args.width,
        args.height,
        args.density,
        args.gf,
        seed,
        args.grip_band,
        notch,
    )?;
    let label = format!("notched-s{seed}");
    let out = OutputDir::resolve(args.run.out.clone(), file_out(&file), &label);
    out.prepare(args.run.overwrite)?;
    let Some(model) = generate_into(&out, &label, &spec)? else {
        return Ok(ExitCode::from(1));
    };
    let ok = execute_run(&out, &label, &model, &config, args.run.plot)?;
    Ok(ExitCode::from(u8::from(!ok)))
}

fn load_model(path: &std::path::Path) -> Result<NetworkModel, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Usage(format!("cannot read model {}: {e}", path.display()))
    })?;
    NetworkModel::from_json(&text).map_err(|e| {
        CliError::Usage(format!("cannot load model {}: {e}", path.display()))
    })
}

fn run_network(args: NetworkArgs) -> Result<ExitCode, CliError> {
    let file = load_settings(args.run.config.as_deref())?;
    let config = solve_config(&args.run.flags(), &file, NETWORK_DEFAULTS)?;
    require(
        config.total_displacement.is_finite(),
        "--displacement is required when running a model file",
    )?;
    check_config(&config)?;
    let model = load_model(&args.model)?;
    let stem = args
        .model
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "model".into());
    let label = format!("network-{stem}");
    let out = OutputDir::resolve(args.run.out.clone(), file_out(&file), &label);
    out.prepare(args.run.overwrite)?;
    let ok = execute_run(&out, &label, &model, &config, args.run.plot)?;
    Ok(ExitCode::from(u8::from(!ok)))
}

fn run_compare(args: CompareArgs) -> Result<ExitCode, CliError> {
    let file = load_settings(args.config.as_deref())?;
    require(!args.schemes.is_empty(), "at least one scheme is required")?;
    require(!args.steps.is_empty(), "at least one step count is required")?;
    for &steps in &args.steps {
        require(steps >= 1, "step counts must be at least 1")?;
    }
    let schemes: Vec<SchemeSpec> = args
        .schemes
        .iter()
        .map(|text| parse_scheme_spec(text).map_err(CliError::Usage))
        .collect::<Result<_, _>>()?;

    let seed = args.seed.or(file.seed).unwrap_or(7);
    let gf = args.gf.unwrap_or(scenarios::DEFAULT_G_F);
    require(gf.is_finite() && gf > 0.0, "fracture energy must be positive")?;

    let (label, defaults, source) = match (&args.model, args.scenario.as_str()) {
        (Some(path), _) => {
            let stem = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "model".into());
            (format!("compare-{stem}"), NETWORK_DEFAULTS, ModelSource::File(path.clone()))
        }
        (None, "cantilever") => (
            "compare-cantilever".into(),
            CANTILEVER_DEFAULTS,
            ModelSource::Bar(gf),
        ),
        (None, "tensile") => {
            let spec = scenarios::tensile_spec(
                18.0,
                6.0,
                args.density.unwrap_or(1000.0),
                gf,
                seed,
                0.5,
            )?;
            ("compare-tensile".into(), TENSILE_DEFAULTS, ModelSource::Spec(spec))
        }
        (None, "notched") => {
            let notch = NotchSpec { angle_deg: 20.0, depth: 1.5, apex_x: 4.5 };
            let spec = scenarios::notched_spec(
                9.0,
                3.0,
                args.density.unwrap_or(500.0),
                gf,
                seed,
                0.5,
                notch,
            )?;
            ("compare-notched".into(), NOTCHED_DEFAULTS, ModelSource::Spec(spec))
        }
        (None, other) => {
            return Err(CliError::Usage(format!(
                "unknown scenario {other:?} (expected cantilever, tensile or notched)"
            )))
        }
    };

    let flags = RunFlags {
        displacement: args.displacement,
        ..RunFlags::default()
    };
    let base = solve_config(&flags, &file, defaults)?;
    require(
        base.total_displacement.is_finite(),
        "--displacement is required when comparing on a model file",
    )?;
    check_config(&base)?;

    let out = OutputDir::resolve(args.out.clone(), file_out(&file), &label);
    out.prepare(args.overwrite)?;

    let model = match source {
        ModelSource::Bar(gf) => scenarios::bar_model(10, gf)?,
        ModelSource::File(path) => load_model(&path)?,
        ModelSource::Spec(spec) => match generate_into(&out, &label, &spec)? {
            Some(model) => model,
            None => return Ok(ExitCode::from(1)),
        },
    };
    out.write(output::MODEL_FILE, &model.to_json())?;

    match run_grid(&model, &base, &schemes, &args.steps) {
        Ok(entries) => {
            out.write(output::COMPARE_FILE, &grid_csv(&entries))?;
            print!("{}", grid_table(&entries, &schemes, &args.steps));
            println!("{label}: {} cells -> {}", entries.len(), out.dir.display());
            Ok(ExitCode::SUCCESS)
        }
        Err(err) => {
            out.write(
                output::ERROR_FILE,
                &error_json(solve_error_kind(&err), &err.to_string()),
            )?;
            eprintln!("{label}: {err}");
            Ok(ExitCode::from(1))
        }
    }
}

enum ModelSource {
    Bar(f64),
    File(PathBuf),
    Spec(netgen::NetworkSpec),
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn scenario_flags_parse() {
        let cli = Cli::try_parse_from([
            "beamnet",
            "cantilever",
            "--gf",
            "0.05",
            "--steps",
            "200",
            "--scheme",
            "staggered",
        ])
        .unwrap();
        let Command::Cantilever(args) = cli.command else {
            panic!("wrong command")
        };
        assert_eq!(args.gf, vec![0.05]);
        assert_eq!(args.run.steps, Some(200));
        assert_eq!(args.run.scheme.as_deref(), Some("staggered"));
        assert_eq!(args.elements, vec![1, 10]);

        let cli = Cli::try_parse_from([
            "beamnet", "tensile", "--density", "1000", "--htol", "0.01", "--seed", "42",
        ])
        .unwrap();
        let Command::Tensile(args) = cli.command else {
            panic!("wrong command")
        };
        assert_eq!(args.density, 1000.0);
        assert_eq!(args.run.htol, Some(0.01));
        assert_eq!(args.seed, Some(42));
    }

    #[test]
    fn compare_defaults_span_the_scheme_grid() {
        let cli = Cli::try_parse_from(["beamnet", "compare"]).unwrap();
        let Command::Compare(args) = cli.command else {
            panic!("wrong command")
        };
        assert_eq!(args.schemes.len(), 4);
        assert_eq!(args.steps, vec![20, 100, 200, 500]);
        assert_eq!(args.scenario, "notched");
        for text in &args.schemes {
            parse_scheme_spec(text).unwrap();
        }
    }

    #[test]
    fn bad_config_values_are_usage_errors() {
        let config = SolveConfig::new(Scheme::Monolithic, 0.0, 10);
        let err = check_config(&config).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let config = SolveConfig::new(Scheme::Hybrid { h_tol: 1.5 }, 1.0, 10);
        assert!(check_config(&config).is_err());
    }
}
