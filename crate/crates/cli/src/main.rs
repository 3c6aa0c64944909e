//! Command-line driver: builds street configurations, verifies equilibrium
//! residuals, integrates trajectories, samples asymptotic curves and emits
//! gnuplot scripts.
//!
//! Exit codes: 0 success, 2 validation failure, 3 numerical failure.

mod schema;

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use schema::{ConfigJson, TolerancesJson};
use vortex_streets::asymptotics::moving_curve;
use vortex_streets::dynamics::integrate;
use vortex_streets::elliptic::{hermite_street, stieltjes_elliptic_residual, Lattice};
use vortex_streets::equilibrium::{
    residuals_background, residuals_doubly_periodic, residuals_periodic, EquilibriumReport,
};
use vortex_streets::streets::{build_critical, build_street, Periodicity, VortexConfiguration};
use vortex_streets::trigpoly::StreetSpec;
use vortex_streets::whittaker_hill::{wh_street, WHSpec};
use vortex_streets::Error as CoreError;

const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const TOL_ENV: &str = "VORTEX_STREETS_TOL";

#[derive(Parser)]
#[command(
    name = "vortex-streets",
    about = "Periodic point-vortex relative equilibria from Wronskians",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a trigonometric street (or its critical degeneration) and write
    /// its configuration JSON.
    Street(StreetArgs),
    /// Re-verify the equilibrium residuals of a configuration JSON and write
    /// a residual table CSV.
    Verify(VerifyArgs),
    /// Integrate the vortex motion of a configuration and write a trajectory
    /// CSV plus the rigid-motion error.
    Simulate(SimulateArgs),
    /// Sample the asymptotic street-shape curves as CSV.
    Curve(CurveArgs),
    /// Build a Whittaker-Hill background-flow equilibrium.
    Wh(WhArgs),
    /// Build a doubly-periodic Hermite street on a lattice.
    Elliptic(EllipticArgs),
    /// Emit a deterministic gnuplot script for a configuration JSON.
    Gnuplot(GnuplotArgs),
}

#[derive(Args)]
struct StreetArgs {
    /// Comma-separated wavenumbers, e.g. 7,8
    #[arg(long)]
    k: String,
    /// Comma-separated phases matching --k (complex, e.g. 0,1.5708 or 0.1+0.2i); default all zero
    #[arg(long)]
    phi: Option<String>,
    /// Spectral parameter (complex)
    #[arg(long)]
    kappa: String,
    /// Build the critical degeneration at kappa = k_j (1-based index)
    #[arg(long)]
    critical: Option<usize>,
    /// Root-finding tolerance (env VORTEX_STREETS_TOL overrides the default)
    #[arg(long)]
    tol: Option<f64>,
    /// Residual gate deciding the exit code
    #[arg(long, default_value_t = 1e-9)]
    residual_tol: f64,
    /// Output JSON path (stdout when omitted)
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Configuration JSON produced by street/wh/elliptic
    #[arg(long)]
    input: String,
    /// Residual table CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<String>,
    /// Residual gate deciding the exit code
    #[arg(long, default_value_t = 1e-9)]
    residual_tol: f64,
}

#[derive(Args)]
struct SimulateArgs {
    /// Configuration JSON
    #[arg(long)]
    input: String,
    /// Final time
    #[arg(long, default_value_t = 1.0)]
    t_final: f64,
    /// Step size
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    /// Trajectory CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<String>,
    /// When given, exit nonzero if the rigid-motion error exceeds this
    #[arg(long)]
    max_drift: Option<f64>,
}

#[derive(Args)]
struct CurveArgs {
    /// Smaller wavenumber
    #[arg(long)]
    m: i64,
    /// Larger wavenumber
    #[arg(long)]
    n: i64,
    /// Real spectral parameter (0 for the fixed-street curve)
    #[arg(long, default_value_t = 0.0)]
    kappa: f64,
    /// Number of abscissas over (0, pi)
    #[arg(long, default_value_t = 400)]
    samples: usize,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct WhArgs {
    /// Odd operator parameter
    #[arg(long)]
    s: i64,
    /// Background strength (complex)
    #[arg(long)]
    alpha: String,
    /// Numerator eigenfunction indices, e.g. 4,5
    #[arg(long = "J")]
    j_set: String,
    /// Denominator eigenfunction indices (may be empty)
    #[arg(long = "I", default_value = "")]
    i_set: String,
    /// Root-finding tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Residual gate deciding the exit code
    #[arg(long, default_value_t = 1e-8)]
    residual_tol: f64,
    /// Output JSON path (stdout when omitted)
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct EllipticArgs {
    /// First half-period (complex)
    #[arg(long)]
    omega1: String,
    /// Second half-period (complex), Im(omega2/omega1) > 0
    #[arg(long)]
    omega2: String,
    /// Comma-separated positive-vortex positions, e.g. 0.5+0.3i,1.1+0.2i
    #[arg(long)]
    a_points: String,
    /// Residual gate deciding the exit code
    #[arg(long, default_value_t = 1e-8)]
    residual_tol: f64,
    /// Output JSON path (stdout when omitted)
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct GnuplotArgs {
    /// Configuration JSON
    #[arg(long)]
    input: String,
    /// Optional curve CSV (from the curve command) to overlay
    #[arg(long)]
    curve: Option<String>,
    /// Number of horizontal periods to draw
    #[arg(long, default_value_t = 1)]
    periods: usize,
    /// Output script path (stdout when omitted)
    #[arg(long)]
    out: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Street(args) => cmd_street(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Curve(args) => cmd_curve(args),
        Command::Wh(args) => cmd_wh(args),
        Command::Elliptic(args) => cmd_elliptic(args),
        Command::Gnuplot(args) => cmd_gnuplot(args),
    };
    match outcome {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("{}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }

    fn from_core(module: &str, e: CoreError) -> Self {
        let code = match e {
            CoreError::RootResidual { .. }
            | CoreError::AmbiguousMatch(_)
            | CoreError::MixedParity
            | CoreError::QuadratureNonConvergent(_)
            | CoreError::NewtonDiverged(_)
            | CoreError::Collision { .. } => EXIT_NUMERICAL,
            _ => EXIT_VALIDATION,
        };
        Self {
            code,
            message: format!("{module}: {e}"),
        }
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn parse_complex(s: &str) -> Result<Complex64, Failure> {
    let t = s.trim();
    let err = || Failure::validation(format!("cannot parse complex number from '{s}'"));
    if let Ok(re) = t.parse::<f64>() {
        return Ok(Complex64::new(re, 0.0));
    }
    // forms: a+bi, a-bi, bi, i, -i
    let body = t.strip_suffix(['i', 'j']).ok_or_else(err)?;
    if body.is_empty() || body == "+" || body == "-" {
        let sign = if body == "-" { -1.0 } else { 1.0 };
        return Ok(Complex64::new(0.0, sign));
    }
    if let Ok(im) = body.parse::<f64>() {
        return Ok(Complex64::new(0.0, im));
    }
    // split at the last +/- that is not an exponent sign
    let bytes = body.as_bytes();
    for idx in (1..bytes.len()).rev() {
        let c = bytes[idx] as char;
        if (c == '+' || c == '-') && !matches!(bytes[idx - 1] as char, 'e' | 'E') {
            let re: f64 = body[..idx].parse().map_err(|_| err())?;
            let im_str = &body[idx..];
            let im: f64 = if im_str == "+" {
                1.0
            } else if im_str == "-" {
                -1.0
            } else {
                im_str.parse().map_err(|_| err())?
            };
            return Ok(Complex64::new(re, im));
        }
    }
    Err(err())
}

fn parse_list<T, F: Fn(&str) -> Result<T, Failure>>(
    s: &str,
    parse: F,
) -> Result<Vec<T>, Failure> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|item| parse(item)).collect()
}

fn root_tolerance(flag: Option<f64>) -> Result<f64, Failure> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var(TOL_ENV) {
        Ok(v) => v
            .parse()
            .map_err(|_| Failure::validation(format!("{TOL_ENV}='{v}' is not a number"))),
        Err(_) => Ok(1e-10),
    }
}

fn write_output(path: &Option<String>, contents: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, contents)
            .map_err(|e| Failure::validation(format!("cannot write {p}: {e}"))),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn read_config(path: &str) -> Result<(ConfigJson, VortexConfiguration, Option<Lattice>), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::validation(format!("cannot read {path}: {e}")))?;
    let doc: ConfigJson = serde_json::from_str(&text)
        .map_err(|e| Failure::validation(format!("{path}: invalid configuration JSON: {e}")))?;
    let (config, lattice) = doc
        .to_config()
        .map_err(|e| Failure::from_core("schema", e))?;
    Ok((doc, config, lattice))
}

/// Residuals of the equilibrium equation matching the configuration's
/// periodicity and background.
fn compute_report(
    config: &VortexConfiguration,
    lattice: Option<&Lattice>,
) -> Result<EquilibriumReport, Failure> {
    match (&config.periodicity, lattice) {
        (Periodicity::Lattice(lat), _) => residuals_doubly_periodic(config, lat)
            .map_err(|e| Failure::from_core("equilibrium", e)),
        (Periodicity::Strip, _) if config.background_alpha.norm() != 0.0 => {
            residuals_background(config, config.background_alpha)
                .map_err(|e| Failure::from_core("equilibrium", e))
        }
        (Periodicity::Strip, _) => {
            residuals_periodic(config).map_err(|e| Failure::from_core("equilibrium", e))
        }
    }
}

fn emit_config(
    config: &VortexConfiguration,
    report: &EquilibriumReport,
    tolerances: TolerancesJson,
    out: &Option<String>,
) -> Result<(), Failure> {
    let doc = ConfigJson::from_config(config, &report.per_vortex, tolerances);
    let mut text = serde_json::to_string_pretty(&doc)
        .map_err(|e| Failure::validation(format!("serialization failed: {e}")))?;
    text.push('\n');
    write_output(out, &text)
}

fn gate(max_residual: f64, residual_tol: f64) -> ExitCode {
    if max_residual <= residual_tol {
        ExitCode::SUCCESS
    } else {
        eprintln!("residual {max_residual:.3e} exceeds gate {residual_tol:.3e}");
        ExitCode::from(EXIT_NUMERICAL)
    }
}

fn cmd_street(args: StreetArgs) -> CmdResult {
    let k = parse_list(&args.k, |s| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| Failure::validation(format!("bad wavenumber '{s}'")))
    })?;
    let phi = match &args.phi {
        Some(s) => parse_list(s, parse_complex)?,
        None => vec![Complex64::new(0.0, 0.0); k.len()],
    };
    let kappa = parse_complex(&args.kappa)?;
    let tol = root_tolerance(args.tol)?;
    let spec =
        StreetSpec::new(k, phi, kappa).map_err(|e| Failure::from_core("trigpoly", e))?;
    let (config, _wave) = match args.critical {
        Some(j) => build_critical(&spec, j, tol),
        None => build_street(&spec, tol),
    }
    .map_err(|e| Failure::from_core("streets", e))?;
    let report = compute_report(&config, None)?;
    emit_config(
        &config,
        &report,
        TolerancesJson {
            root: Some(tol),
            residual: args.residual_tol,
        },
        &args.out,
    )?;
    Ok(gate(report.max_residual, args.residual_tol))
}

fn cmd_verify(args: VerifyArgs) -> CmdResult {
    let (doc, config, lattice) = read_config(&args.input)?;
    let report = compute_report(&config, lattice.as_ref())?;
    let mut csv = String::from("j,re,im,gamma,residual_re,residual_im,residual_abs\n");
    for (j, (v, r)) in doc.vortices.iter().zip(&report.per_vortex).enumerate() {
        writeln!(
            csv,
            "{j},{},{},{},{},{},{}",
            v.re,
            v.im,
            v.gamma,
            r.re,
            r.im,
            r.norm()
        )
        .unwrap();
    }
    write_output(&args.out, &csv)?;
    eprintln!("max residual {:.3e}", report.max_residual);
    Ok(gate(report.max_residual, args.residual_tol))
}

fn cmd_simulate(args: SimulateArgs) -> CmdResult {
    let (_, config, _) = read_config(&args.input)?;
    let traj = integrate(&config, args.t_final, args.dt)
        .map_err(|e| Failure::from_core("dynamics", e))?;
    let mut csv = String::from("t");
    for j in 0..config.vortices.len() {
        write!(csv, ",re_{j},im_{j}").unwrap();
    }
    csv.push('\n');
    for (t, state) in traj.times.iter().zip(&traj.states) {
        write!(csv, "{t}").unwrap();
        for z in state {
            write!(csv, ",{},{}", z.re, z.im).unwrap();
        }
        csv.push('\n');
    }
    write_output(&args.out, &csv)?;

    let first = &traj.states[0];
    let last = traj.states.last().unwrap();
    let elapsed = traj.times.last().unwrap();
    let drift = first
        .iter()
        .zip(last)
        .map(|(z0, z1)| (z1 - z0 - config.velocity * *elapsed).norm())
        .fold(0.0, f64::max);
    eprintln!("rigid-motion error {drift:.3e} over T = {elapsed}");
    match args.max_drift {
        Some(max) if drift > max => {
            eprintln!("error exceeds --max-drift {max:.3e}");
            Ok(ExitCode::from(EXIT_NUMERICAL))
        }
        _ => Ok(ExitCode::SUCCESS),
    }
}

fn cmd_curve(args: CurveArgs) -> CmdResult {
    if args.samples == 0 {
        return Err(Failure::validation("need at least one sample"));
    }
    let mut csv = String::from("x,y_plus,y_minus\n");
    let mut written = 0usize;
    for i in 1..=args.samples {
        let x = PI * i as f64 / (args.samples + 1) as f64;
        match moving_curve(args.m, args.n, args.kappa, x) {
            Ok((plus, minus)) => {
                writeln!(csv, "{x},{plus},{minus}").unwrap();
                written += 1;
            }
            Err(CoreError::AtSingularity(_)) => continue,
            Err(e) => return Err(Failure::from_core("asymptotics", e)),
        }
    }
    if written == 0 {
        return Err(Failure::validation(
            "every sample hit a curve singularity; check m, n, kappa",
        ));
    }
    write_output(&args.out, &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_wh(args: WhArgs) -> CmdResult {
    let alpha = parse_complex(&args.alpha)?;
    let parse_idx = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Failure::validation(format!("bad eigenfunction index '{s}'")))
    };
    let j_set = parse_list(&args.j_set, parse_idx)?;
    let i_set = parse_list(&args.i_set, parse_idx)?;
    let tol = root_tolerance(args.tol)?;
    let spec = WHSpec::new(args.s, alpha, i_set, j_set)
        .map_err(|e| Failure::from_core("whittaker_hill", e))?;
    let (config, _wave) =
        wh_street(&spec, tol).map_err(|e| Failure::from_core("whittaker_hill", e))?;
    let report = compute_report(&config, None)?;
    emit_config(
        &config,
        &report,
        TolerancesJson {
            root: Some(tol),
            residual: args.residual_tol,
        },
        &args.out,
    )?;
    Ok(gate(report.max_residual, args.residual_tol))
}

fn cmd_elliptic(args: EllipticArgs) -> CmdResult {
    let omega1 = parse_complex(&args.omega1)?;
    let omega2 = parse_complex(&args.omega2)?;
    let a_points = parse_list(&args.a_points, parse_complex)?;
    let lat = Lattice::new(omega1, omega2).map_err(|e| Failure::from_core("elliptic", e))?;
    eprintln!(
        "lattice: eta1 = {}, eta2 = {}, legendre defect {:.3e}",
        lat.eta1,
        lat.eta2,
        lat.legendre_defect()
    );
    let (config, wave) =
        hermite_street(&a_points, &lat).map_err(|e| Failure::from_core("elliptic", e))?;
    let stieltjes = stieltjes_elliptic_residual(&wave)
        .map_err(|e| Failure::from_core("elliptic", e))?;
    let worst = stieltjes.iter().map(|r| r.norm()).fold(0.0, f64::max);
    eprintln!("max Stieltjes residual {worst:.3e}");
    let report = compute_report(&config, Some(&lat))?;
    emit_config(
        &config,
        &report,
        TolerancesJson {
            root: None,
            residual: args.residual_tol,
        },
        &args.out,
    )?;
    Ok(gate(report.max_residual, args.residual_tol))
}

fn cmd_gnuplot(args: GnuplotArgs) -> CmdResult {
    if args.periods == 0 {
        return Err(Failure::validation("--periods must be at least 1"));
    }
    let (doc, _, _) = read_config(&args.input)?;
    let mut positive = String::new();
    let mut negative = String::new();
    for p in 0..args.periods {
        let shift = PI * p as f64;
        for v in &doc.vortices {
            let line = format!("{} {} {}\n", v.re + shift, v.im, v.gamma);
            if v.gamma > 0 {
                positive.push_str(&line);
            } else {
                negative.push_str(&line);
            }
        }
    }

    let mut script = String::new();
    script.push_str("set xlabel 'Re z'\n");
    script.push_str("set ylabel 'Im z'\n");
    script.push_str("set size ratio -1\n");
    let mut clauses: Vec<String> = Vec::new();
    if let Some(curve) = &args.curve {
        clauses.push(format!(
            "'{curve}' using 1:2 with lines lc rgb 'gray40' title 'y_+'"
        ));
        clauses.push(format!(
            "'{curve}' using 1:3 with lines lc rgb 'gray40' title 'y_-'"
        ));
    }
    if !positive.is_empty() {
        clauses.push("'-' using 1:2 with points pt 7 ps 1.5 lc rgb 'red' title 'positive'".into());
    }
    if !negative.is_empty() {
        clauses.push("'-' using 1:2 with points pt 7 ps 1.5 lc rgb 'blue' title 'negative'".into());
    }
    if clauses.is_empty() {
        script.push_str("plot NaN notitle\n");
    } else {
        script.push_str("plot ");
        script.push_str(&clauses.join(", \\\n     "));
        script.push('\n');
        if !positive.is_empty() {
            script.push_str(&positive);
            script.push_str("e\n");
        }
        if !negative.is_empty() {
            script.push_str(&negative);
            script.push_str("e\n");
        }
    }
    write_output(&args.out, &script)?;
    Ok(ExitCode::SUCCESS)
}
