//! Command-line front end: curvature profiles, cross-section spectra,
//! bound-state counting curves, interval δ models, and the validation
//! suite.
//!
//! Exit codes: 2 malformed input, 3 geometry failure, 4 spectral
//! ambiguity (uncertain summand count), 5 oracle disagreement or numeric
//! failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cone_spectra_core::asymptotics::{
    reports_to_json_lines, reports_to_summary_csv, run_validation_suite, suite_passed, SuiteConfig,
};
use cone_spectra_core::cross_section_operator::{
    accumulation_constant, spectrum_with_negatives, AccumulationConstant, SpectrumExport,
    SpectrumResult,
};
use cone_spectra_core::point_interaction_models::{
    solve_finite_difference, solve_transcendental, BoundaryCondition, IntervalDeltaSpec,
    ModelExport,
};
use cone_spectra_core::radial_counting::{
    delta_mode_specs, layer_mode_specs, predict_delta_counting, predict_layer_counting,
    verify_against_matrix_oracle, CountingCurve, EnergyGrid, SlopeExport,
};
use cone_spectra_core::sphere_curves::{enclosed_area, CurvatureProfile, CurveSpec};
use cone_spectra_core::Error as CoreError;

#[derive(Parser)]
#[command(
    name = "cone-spectra",
    about = "Curvature-induced spectra of conical surfaces: cross-section operators, \
             delta-interaction models, and bound-state counting",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a curvature profile from a curve spec; write the κ(s) table
    /// and print a geometry summary.
    Curve(CurveArgs),
    /// Diagonalize the cross-section operator and report the accumulation
    /// constant k_S.
    Ks(KsArgs),
    /// Bound-state counting curve of a reduced model, with the fitted
    /// logarithmic slope.
    Count(CountArgs),
    /// First two eigenvalues of the interval operator with a δ well.
    Model1d(Model1dArgs),
    /// Run the validation suite and print a summary table.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct SpecInput {
    /// Inline curve spec JSON.
    #[arg(long, value_name = "JSON")]
    spec: Option<String>,
    /// File containing the curve spec JSON.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
}

impl SpecInput {
    fn parse(&self) -> Result<CurveSpec, CliError> {
        let text = match (&self.spec, &self.input) {
            (Some(s), None) => s.clone(),
            (None, Some(p)) => std::fs::read_to_string(p)
                .map_err(|e| CliError::input(format!("cannot read {}: {e}", p.display())))?,
            _ => {
                return Err(CliError::input(
                    "exactly one of --spec or --in is required".into(),
                ))
            }
        };
        // Specs may carry an explicit schema version; unknown majors are
        // rejected rather than silently reinterpreted.
        if let Ok(value) = serde_json::from_str::<serde_json::Value>(&text) {
            if let Some(major) = value.get("schema").and_then(|v| v.as_u64()) {
                if major != 1 {
                    return Err(CliError::input(format!(
                        "unsupported schema major {major} (this build reads schema 1)"
                    )));
                }
            }
        }
        serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("malformed curve spec: {e}")))
    }
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    spec: SpecInput,
    /// Profile grid size (power of two, ≥ 64).
    #[arg(long, default_value_t = 2048)]
    n: usize,
    /// Output path for the profile table.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct KsArgs {
    #[command(flatten)]
    spec: SpecInput,
    /// Profile grid size (power of two, ≥ 64).
    #[arg(long, default_value_t = 2048)]
    n: usize,
    /// Minimum number of eigenvalues to report.
    #[arg(long, default_value_t = 8)]
    count: usize,
    /// Output path for the spectrum JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Model {
    /// Layer reduction, Dirichlet (lower-bound model).
    #[value(alias = "layer-D")]
    LayerD,
    /// Layer reduction, Neumann (upper-bound model).
    #[value(alias = "layer-N")]
    LayerN,
    /// δ-interaction reduction.
    Delta,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    spec: SpecInput,
    /// Profile grid size (power of two, ≥ 64).
    #[arg(long, default_value_t = 2048)]
    n: usize,
    #[arg(long, value_enum)]
    model: Model,
    /// Smallest energy distance to the essential-spectrum threshold.
    #[arg(long, default_value_t = 1e-12)]
    emin: f64,
    /// Largest energy distance.
    #[arg(long, default_value_t = 1e-4)]
    emax: f64,
    /// Grid points per decade of E.
    #[arg(long, default_value_t = 6)]
    per_decade: usize,
    /// 1/ρ³ remainder coefficient of the layer models.
    #[arg(long, default_value_t = 0.0)]
    b: f64,
    /// Coefficient shift of the δ model, in [0, 0.1].
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    /// Left endpoint of the layer half-line families.
    #[arg(long, default_value_t = 1.0)]
    x0: f64,
    /// Output path for the counting table.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum BcArg {
    D,
    N,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Transcendental,
    Fd,
}

#[derive(Args)]
struct Model1dArgs {
    /// Interval half-length L ≥ 1.
    #[arg(long = "L")]
    half_length: f64,
    #[arg(long, value_enum)]
    bc: BcArg,
    #[arg(long, value_enum, default_value_t = MethodArg::Transcendental)]
    method: MethodArg,
    /// Finite-difference grid (multiple of 4, ≥ 256); used with --method fd.
    #[arg(long, default_value_t = 4096)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Seed for the randomized loop and operator suites.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Reduced grids; inconclusive entries are expected and allowed.
    #[arg(long)]
    quick: bool,
    /// Output path for the JSON-lines report file (summary CSV goes to
    /// `<out>.csv`).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// CLI error carrying its exit code.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: String) -> Self {
        CliError { code: 2, message }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::InvalidInput(_) => 2,
            CoreError::NonRegularCurve { .. }
            | CoreError::NonInjectiveCurve { .. }
            | CoreError::ClosureViolated { .. }
            | CoreError::FrameIdentityViolated { .. }
            | CoreError::OrientationAmbiguous
            | CoreError::WindowOverlap { .. } => 3,
            CoreError::NearZeroEigenvalue { .. } => 4,
            CoreError::ConvergenceFailure(_)
            | CoreError::NoNegativeRoot { .. }
            | CoreError::StiffIntegration { .. }
            | CoreError::WallTooClose { .. } => 5,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

/// Write atomically: temp file in the target directory, then rename.
fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let dir = if dir.as_os_str().is_empty() {
        Path::new(".")
    } else {
        dir
    };
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "out".into())
    ));
    std::fs::write(&tmp, contents)
        .and_then(|_| std::fs::rename(&tmp, path))
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

fn spectrum_for(
    spec: &CurveSpec,
    n: usize,
    count: usize,
) -> Result<(CurvatureProfile, SpectrumResult, AccumulationConstant), CliError> {
    let profile = spec.profile(n)?;
    let spectrum = spectrum_with_negatives(&profile, count)?;
    let acc = accumulation_constant(&spectrum)?;
    Ok((profile, spectrum, acc))
}

fn cmd_curve(args: &CurveArgs) -> Result<(), CliError> {
    let spec = args.spec.parse()?;
    let profile = spec.profile(args.n)?;

    let (area, gb_residual) = match spec.as_loop() {
        Some(l) => {
            let a = enclosed_area(&l)?;
            let gb = profile.integral_kappa() + a - 2.0 * std::f64::consts::PI;
            (Some(a), Some(gb))
        }
        None => (None, None),
    };
    let summary = serde_json::json!({
        "schema": 1,
        "length": profile.length,
        "n": profile.n(),
        "max_abs_kappa": profile.max_abs_kappa(),
        "area": area,
        "gauss_bonnet_residual": gb_residual,
    });
    println!("{summary}");

    if let Some(out) = &args.out {
        let body = match args.format {
            Format::Csv => profile.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string(&serde_json::json!({
                    "schema": 1,
                    "length": profile.length,
                    "kappa": profile.kappa,
                }))
                .expect("profile serialization");
                s.push('\n');
                s
            }
        };
        write_atomic(out, &body)?;
    }
    Ok(())
}

fn cmd_ks(args: &KsArgs) -> Result<(), CliError> {
    let spec = args.spec.parse()?;
    let (profile, spectrum, acc) = spectrum_for(&spec, args.n, args.count)?;
    if profile.max_abs_kappa() < 1e-9 {
        eprintln!(
            "warning: κ ≡ 0 (flat cross-section): the operators have no discrete spectrum \
             and k_S = 0; the standing non-great-circle assumption is violated"
        );
    }
    let export = SpectrumExport::new(&spectrum, &acc);
    let line = serde_json::to_string(&export).expect("spectrum serialization");
    println!("{line}");
    if let Some(out) = &args.out {
        write_atomic(out, &format!("{line}\n"))?;
    }
    Ok(())
}

fn cmd_count(args: &CountArgs) -> Result<(), CliError> {
    let spec = args.spec.parse()?;
    let (_, spectrum, acc) = spectrum_for(&spec, args.n, 8)?;
    let grid = EnergyGrid::new(args.emin, args.emax, args.per_decade)?;

    let (curve, mode_specs): (CountingCurve, Vec<_>) = match args.model {
        Model::LayerD => (
            predict_layer_counting(&spectrum, args.b, args.b, args.x0, &grid)?.0,
            layer_mode_specs(&spectrum, args.b, args.b, args.x0)?.0,
        ),
        Model::LayerN => (
            predict_layer_counting(&spectrum, args.b, args.b, args.x0, &grid)?.1,
            layer_mode_specs(&spectrum, args.b, args.b, args.x0)?.1,
        ),
        Model::Delta => (
            predict_delta_counting(&spectrum, args.delta, &grid)?,
            delta_mode_specs(&spectrum, args.delta)?,
        ),
    };

    // Cross-check rows against the independent matrix oracle at the two
    // cheapest wall sizes (the largest grid energies above 1e−8).
    for row in curve.rows.iter().rev().filter(|r| r.energy >= 1e-8).take(2) {
        verify_against_matrix_oracle(&mode_specs, row.energy, row.count)?;
    }

    let slope = SlopeExport::new(&curve, acc.k_s);
    println!(
        "{}",
        serde_json::to_string(&slope).expect("slope serialization")
    );

    if let Some(out) = &args.out {
        let body = match args.format {
            Format::Csv => curve.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string(&serde_json::json!({
                    "schema": 1,
                    "rows": curve.rows,
                    "slope_fit": curve.slope_fit,
                }))
                .expect("curve serialization");
                s.push('\n');
                s
            }
        };
        write_atomic(out, &body)?;
    }
    Ok(())
}

fn cmd_model1d(args: &Model1dArgs) -> Result<(), CliError> {
    let bc = match args.bc {
        BcArg::D => BoundaryCondition::Dirichlet,
        BcArg::N => BoundaryCondition::Neumann,
    };
    let spec = IntervalDeltaSpec::new(args.half_length, bc)?;
    let solution = match args.method {
        MethodArg::Transcendental => solve_transcendental(&spec)?,
        MethodArg::Fd => solve_finite_difference(&spec, args.n)?,
    };
    let line =
        serde_json::to_string(&ModelExport::new(&spec, &solution)).expect("model serialization");
    println!("{line}");
    if let Some(out) = &args.out {
        write_atomic(out, &format!("{line}\n"))?;
    }
    Ok(())
}

fn cmd_validate(args: &ValidateArgs) -> Result<bool, CliError> {
    let config = SuiteConfig {
        seed: args.seed,
        quick: args.quick,
    };
    let reports = run_validation_suite(&config);
    print!("{}", reports_to_summary_csv(&reports));
    if let Some(out) = &args.out {
        write_atomic(out, &reports_to_json_lines(&reports))?;
        let csv_path = out.with_extension(match out.extension() {
            Some(e) => format!("{}.csv", e.to_string_lossy()),
            None => "csv".into(),
        });
        write_atomic(&csv_path, &reports_to_summary_csv(&reports))?;
    }
    Ok(suite_passed(&reports))
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("CONE_SPECTRA_THREADS") {
        if let Ok(t) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build_global();
        }
    }

    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Curve(a) => cmd_curve(a).map(|_| true),
        Command::Ks(a) => cmd_ks(a).map(|_| true),
        Command::Count(a) => cmd_count(a).map(|_| true),
        Command::Model1d(a) => cmd_model1d(a).map(|_| true),
        Command::Validate(a) => cmd_validate(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
