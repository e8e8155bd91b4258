//! Command-line driver for the specific-heat library: temperature
//! sweeps, densities of states, the free-particle negativity threshold,
//! and bath-discretization convergence, all as deterministic CSV/JSON.
//!
//! Output is byte-identical between runs: floats are printed with 12
//! significant digits, JSON keys keep a fixed order, and nothing
//! depends on wall-clock time or randomness.

use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use specheat::bathdisc::{discretize_drude, normal_modes, specific_heat_difference};
use specheat::dos::{
    bromwich_dos, delta_comb_osc_minimal, dos_free_minimal, reciprocal_energy_grid,
    BromwichConfig,
};
use specheat::drude::{specific_heat_free_drude, specific_heat_osc_drude, DrudeParams};
use specheat::minimal::{
    free_curve_minimum, free_threshold_mass_ratio, specific_heat_free_minimal,
    specific_heat_osc_minimal, MinimalModelParams,
};
use specheat::HeatCurvePoint;

#[derive(Parser)]
#[command(
    name = "specheat",
    version,
    about = "Specific heat of damped quantum systems: the bath-normalized \
             C = C_coupled - C_bath for free particles and oscillators",
    after_help = "Temperatures and frequencies are in natural units (hbar = k_B = 1); \
                  theta = k_B T / hbar in the frequency unit of the chosen parameters."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Specific heat over a temperature sweep (CSV: theta,c_total,c_coupled,c_bath)
    Curve(CurveArgs),
    /// Density of states or level comb behind the partition function (CSV)
    Dos(DosArgs),
    /// Free-particle negativity threshold in the bath/system mass ratio (JSON)
    Threshold(ThresholdArgs),
    /// Distance of finite-bath curves to the continuum closed form (JSON)
    Converge(ConvergeArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CurveModel {
    /// Free particle coupled to one bath oscillator
    MinimalFree,
    /// Oscillator coupled to one bath oscillator
    MinimalOsc,
    /// Free particle in a Drude (Ohmic, cut-off) bath
    DrudeFree,
    /// Oscillator in a Drude bath
    DrudeOsc,
    /// Oscillator or free particle in an explicitly discretized Drude bath
    Bathdisc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DosModel {
    /// Signed level comb of the single-mode oscillator model (energy,weight)
    MinimalOsc,
    /// Analytic branch expansion of the single-mode free model (energy,rho)
    MinimalFree,
    /// Numerically inverted Drude-oscillator transform (energy,rho)
    DrudeOsc,
}

/// Shortcuts that reproduce the published curves.
#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    /// Free particle, slow Drude bath (gamma = 5, omega_D = 1): negative window
    #[value(name = "1")]
    DrudeFreeSlow,
    /// Free particle, one heavy bath mode (r = 10, omega = 1)
    #[value(name = "3")]
    MinimalFreeHeavy,
    /// Resonant oscillator pair (r = 10, omega = omega_0 = 1): interior dip
    #[value(name = "4")]
    MinimalOscResonant,
    /// Strongly damped Drude oscillator (gamma = 5, omega_D = 0.1, omega_0 = 1)
    #[value(name = "cho")]
    DrudeOscDamped,
    /// Density of states of the same damped Drude oscillator
    #[value(name = "5")]
    DrudeOscDos,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scale {
    Log,
    Linear,
}

#[derive(Parser)]
struct CurveArgs {
    /// Reproduce a published curve (sets model and parameters)
    #[arg(long, value_enum)]
    figure: Option<Figure>,
    /// Model to sweep
    #[arg(long, value_enum)]
    model: Option<CurveModel>,
    /// Bath/system mass ratio r (minimal models)
    #[arg(long)]
    mass_ratio: Option<f64>,
    /// Bath mode frequency omega (minimal models)
    #[arg(long)]
    omega: Option<f64>,
    /// System frequency omega_0 (0 selects the free particle where allowed)
    #[arg(long = "omega0")]
    omega_0: Option<f64>,
    /// Damping strength gamma (Drude models)
    #[arg(long)]
    gamma: Option<f64>,
    /// Drude cutoff frequency omega_D
    #[arg(long)]
    omega_d: Option<f64>,
    /// Number of explicit bath modes (bathdisc)
    #[arg(long, default_value_t = 64)]
    n_modes: usize,
    /// Bath discretization cutoff (bathdisc; default 20 * omega_D)
    #[arg(long)]
    omega_max: Option<f64>,
    /// Lowest temperature of the sweep
    #[arg(long, default_value_t = 1e-3)]
    tmin: f64,
    /// Highest temperature of the sweep
    #[arg(long, default_value_t = 1e2)]
    tmax: f64,
    /// Number of sweep points
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(2..))]
    points: u32,
    /// Spacing of the sweep points
    #[arg(long, value_enum, default_value_t = Scale::Log)]
    scale: Scale,
    /// Write to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Parser)]
struct DosArgs {
    /// Reproduce a published curve (sets model and parameters)
    #[arg(long, value_enum)]
    figure: Option<Figure>,
    /// Model whose density of states to compute
    #[arg(long, value_enum)]
    model: Option<DosModel>,
    /// Bath/system mass ratio r (minimal models)
    #[arg(long)]
    mass_ratio: Option<f64>,
    /// Bath mode frequency omega (minimal models)
    #[arg(long)]
    omega: Option<f64>,
    /// System frequency omega_0
    #[arg(long = "omega0")]
    omega_0: Option<f64>,
    /// Damping strength gamma (Drude model)
    #[arg(long)]
    gamma: Option<f64>,
    /// Drude cutoff frequency omega_D
    #[arg(long)]
    omega_d: Option<f64>,
    /// Top of the energy range
    #[arg(long, default_value_t = 20.0)]
    emax: f64,
    /// Number of energy grid points (minimal-free; the Drude grid spacing
    /// is fixed by pi / tau_max instead)
    #[arg(long, default_value_t = 400, value_parser = clap::value_parser!(u32).range(2..))]
    points: u32,
    /// Laplace contour abscissa (drude-osc)
    #[arg(long, default_value_t = 0.5)]
    sigma: f64,
    /// Laplace contour half-length (drude-osc)
    #[arg(long, default_value_t = 400.0)]
    tau_max: f64,
    /// Number of contour samples, a power of two (drude-osc)
    #[arg(long, default_value_t = 8192)]
    samples: usize,
    /// Write to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Parser)]
struct ThresholdArgs {
    /// Write to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Parser)]
struct ConvergeArgs {
    /// Damping strength gamma
    #[arg(long, default_value_t = 5.0)]
    gamma: f64,
    /// Drude cutoff frequency omega_D
    #[arg(long, default_value_t = 0.1)]
    omega_d: f64,
    /// System frequency omega_0
    #[arg(long = "omega0", default_value_t = 1.0)]
    omega_0: f64,
    /// Mode counts to test
    #[arg(long, value_delimiter = ',', default_values_t = vec![16, 32, 64, 128, 256])]
    n_list: Vec<usize>,
    /// Bath discretization cutoff (default 40 * omega_D, far enough out
    /// that the cutoff error stays below the finest discretization error)
    #[arg(long)]
    omega_max: Option<f64>,
    /// Lowest temperature of the comparison grid
    #[arg(long, default_value_t = 0.1)]
    tmin: f64,
    /// Highest temperature of the comparison grid
    #[arg(long, default_value_t = 100.0)]
    tmax: f64,
    /// Number of comparison temperatures
    #[arg(long, default_value_t = 61, value_parser = clap::value_parser!(u32).range(2..))]
    points: u32,
    /// Write to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

/// 12 significant digits, scientific: the one float format used in CSV
/// and comment lines.
fn fmt(x: f64) -> String {
    format!("{x:.11e}")
}

fn usage_error(msg: &str) -> ! {
    Cli::command()
        .error(ErrorKind::InvalidValue, msg)
        .exit()
}

fn theta_grid(tmin: f64, tmax: f64, points: u32, scale: Scale) -> Vec<f64> {
    if !(tmin.is_finite() && tmin > 0.0 && tmax.is_finite() && tmin < tmax) {
        usage_error(&format!(
            "temperature range must satisfy 0 < tmin < tmax, got [{tmin}, {tmax}]"
        ));
    }
    let n = points as usize;
    match scale {
        Scale::Log => {
            let (a, b) = (tmin.ln(), tmax.ln());
            (0..n)
                .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
                .collect()
        }
        Scale::Linear => (0..n)
            .map(|k| tmin + (tmax - tmin) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

fn emit(output: Option<&PathBuf>, content: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => std::fs::write(path, content)?,
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn curve_row(p: &HeatCurvePoint) -> String {
    let opt = |v: Option<f64>| v.map(fmt).unwrap_or_default();
    format!(
        "{},{},{},{}",
        fmt(p.theta),
        fmt(p.c_total),
        opt(p.c_coupled),
        opt(p.c_bath)
    )
}

fn cmd_curve(mut args: CurveArgs) -> anyhow::Result<()> {
    // Figure presets fill model and parameters the user left unset.
    if let Some(figure) = args.figure {
        let (model, r, w, w0, g, wd) = match figure {
            Figure::DrudeFreeSlow => (CurveModel::DrudeFree, None, None, None, Some(5.0), Some(1.0)),
            Figure::MinimalFreeHeavy => {
                (CurveModel::MinimalFree, Some(10.0), Some(1.0), None, None, None)
            }
            Figure::MinimalOscResonant => (
                CurveModel::MinimalOsc,
                Some(10.0),
                Some(1.0),
                Some(1.0),
                None,
                None,
            ),
            Figure::DrudeOscDamped => (
                CurveModel::DrudeOsc,
                None,
                None,
                Some(1.0),
                Some(5.0),
                Some(0.1),
            ),
            Figure::DrudeOscDos => {
                usage_error("figure 5 is a density of states; use `specheat dos --figure 5`")
            }
        };
        args.model.get_or_insert(model);
        if args.mass_ratio.is_none() {
            args.mass_ratio = r;
        }
        if args.omega.is_none() {
            args.omega = w;
        }
        if args.omega_0.is_none() {
            args.omega_0 = w0;
        }
        if args.gamma.is_none() {
            args.gamma = g;
        }
        if args.omega_d.is_none() {
            args.omega_d = wd;
        }
    }
    let Some(model) = args.model else {
        usage_error("either --model or --figure is required");
    };

    let mass_ratio = args.mass_ratio.unwrap_or(10.0);
    let omega = args.omega.unwrap_or(1.0);
    let gamma = args.gamma.unwrap_or(5.0);
    let omega_d = args.omega_d.unwrap_or(0.1);
    let thetas = theta_grid(args.tmin, args.tmax, args.points, args.scale);

    let points: Vec<HeatCurvePoint> = match model {
        CurveModel::MinimalFree => {
            let params = MinimalModelParams::free(mass_ratio, omega)?;
            thetas
                .iter()
                .map(|&t| specific_heat_free_minimal(&params, t))
                .collect::<Result<_, _>>()?
        }
        CurveModel::MinimalOsc => {
            let params =
                MinimalModelParams::oscillator(mass_ratio, omega, args.omega_0.unwrap_or(1.0))?;
            thetas
                .iter()
                .map(|&t| specific_heat_osc_minimal(&params, t))
                .collect::<Result<_, _>>()?
        }
        CurveModel::DrudeFree => {
            let params = DrudeParams::free(gamma, omega_d)?;
            thetas
                .iter()
                .map(|&t| specific_heat_free_drude(&params, t))
                .collect::<Result<_, _>>()?
        }
        CurveModel::DrudeOsc => {
            let params = DrudeParams::oscillator(gamma, omega_d, args.omega_0.unwrap_or(1.0))?;
            thetas
                .iter()
                .map(|&t| specific_heat_osc_drude(&params, t))
                .collect::<Result<_, _>>()?
        }
        CurveModel::Bathdisc => {
            let omega_0 = args.omega_0.unwrap_or(1.0);
            let params = DrudeParams::new(gamma, omega_d, omega_0)?;
            let omega_max = args.omega_max.unwrap_or(20.0 * omega_d);
            let spec = discretize_drude(&params, args.n_modes, omega_max)?;
            let spectrum = normal_modes(&spec)?;
            let free = omega_0 == 0.0;
            thetas
                .iter()
                .map(|&t| specific_heat_difference(&spectrum, t, free))
                .collect::<Result<_, _>>()?
        }
    };

    let mut out = String::from("theta,c_total,c_coupled,c_bath\n");
    for p in &points {
        out.push_str(&curve_row(p));
        out.push('\n');
    }
    emit(args.output.as_ref(), &out)
}

fn cmd_dos(mut args: DosArgs) -> anyhow::Result<()> {
    if let Some(figure) = args.figure {
        match figure {
            Figure::DrudeOscDos => {
                args.model.get_or_insert(DosModel::DrudeOsc);
                if args.gamma.is_none() {
                    args.gamma = Some(5.0);
                }
                if args.omega_d.is_none() {
                    args.omega_d = Some(0.1);
                }
                if args.omega_0.is_none() {
                    args.omega_0 = Some(1.0);
                }
            }
            _ => usage_error("only figure 5 is a density of states; see `specheat curve --figure`"),
        }
    }
    let Some(model) = args.model else {
        usage_error("either --model or --figure is required");
    };
    if !(args.emax.is_finite() && args.emax > 0.0) {
        usage_error(&format!("--emax must be > 0, got {}", args.emax));
    }

    let mut out = String::new();
    match model {
        DosModel::MinimalOsc => {
            let params = MinimalModelParams::oscillator(
                args.mass_ratio.unwrap_or(10.0),
                args.omega.unwrap_or(1.0),
                args.omega_0.unwrap_or(1.0),
            )?;
            let comb = delta_comb_osc_minimal(&params, args.emax)?;
            out.push_str(&format!("# E0 = {}\n", fmt(comb.entries[0].energy)));
            out.push_str("energy,weight\n");
            for e in &comb.entries {
                out.push_str(&format!("{},{}\n", fmt(e.energy), e.weight));
            }
        }
        DosModel::MinimalFree => {
            let params = MinimalModelParams::free(
                args.mass_ratio.unwrap_or(10.0),
                args.omega.unwrap_or(1.0),
            )?;
            let n = args.points as usize;
            let step = args.emax / n as f64;
            let grid: Vec<f64> = (1..=n).map(|k| k as f64 * step).collect();
            let curve = dos_free_minimal(&params, &grid)?;
            out.push_str(&format!("# E0 = {}\n", fmt(curve.ground_energy)));
            out.push_str("energy,rho\n");
            for (e, v) in curve.energies.iter().zip(&curve.values) {
                out.push_str(&format!("{},{}\n", fmt(*e), fmt(*v)));
            }
        }
        DosModel::DrudeOsc => {
            let params = DrudeParams::oscillator(
                args.gamma.unwrap_or(5.0),
                args.omega_d.unwrap_or(0.1),
                args.omega_0.unwrap_or(1.0),
            )?;
            let config = BromwichConfig {
                sigma: args.sigma,
                tau_max: args.tau_max,
                samples: args.samples,
            };
            let grid = reciprocal_energy_grid(0.0, args.emax, config.tau_max);
            let curve = bromwich_dos(&params, &grid, &config)?;
            out.push_str(&format!("# E0 = {}\n", fmt(curve.ground_energy)));
            out.push_str("energy,rho\n");
            for (e, v) in curve.energies.iter().zip(&curve.values) {
                out.push_str(&format!("{},{}\n", fmt(*e), fmt(*v)));
            }
        }
    }
    emit(args.output.as_ref(), &out)
}

#[derive(Serialize)]
struct ThresholdReport {
    /// Mass ratio above which the free-particle curve goes negative.
    r_star: f64,
    /// Temperature of the curve minimum at the threshold.
    theta_at_min: f64,
    /// Curve minimum just below threshold (positive).
    c_min_at_4: f64,
    /// Curve minimum well above threshold (negative).
    c_min_at_10: f64,
}

fn cmd_threshold(args: ThresholdArgs) -> anyhow::Result<()> {
    let r_star = free_threshold_mass_ratio();
    let (theta_at_min, _) = free_curve_minimum(r_star);
    let (_, c_min_at_4) = free_curve_minimum(4.0);
    let (_, c_min_at_10) = free_curve_minimum(10.0);
    let report = ThresholdReport {
        r_star,
        theta_at_min,
        c_min_at_4,
        c_min_at_10,
    };
    let mut out = serde_json::to_string_pretty(&report)?;
    out.push('\n');
    emit(args.output.as_ref(), &out)
}

#[derive(Serialize)]
struct ConvergencePoint {
    n_modes: usize,
    max_norm_distance: f64,
}

fn cmd_converge(args: ConvergeArgs) -> anyhow::Result<()> {
    if args.n_list.is_empty() || args.n_list.contains(&0) {
        usage_error("--n-list needs at least one positive mode count");
    }
    let params = DrudeParams::oscillator(args.gamma, args.omega_d, args.omega_0)?;
    let omega_max = args.omega_max.unwrap_or(40.0 * args.omega_d);
    let thetas = theta_grid(args.tmin, args.tmax, args.points, Scale::Log);
    let closed: Vec<f64> = thetas
        .iter()
        .map(|&t| Ok(specific_heat_osc_drude(&params, t)?.c_total))
        .collect::<anyhow::Result<_>>()?;

    let mut report = Vec::with_capacity(args.n_list.len());
    for &n_modes in &args.n_list {
        let spec = discretize_drude(&params, n_modes, omega_max)?;
        let spectrum = normal_modes(&spec)?;
        let mut dist = 0.0f64;
        for (&t, &c) in thetas.iter().zip(&closed) {
            let disc = specific_heat_difference(&spectrum, t, false)?.c_total;
            dist = dist.max((disc - c).abs());
        }
        report.push(ConvergencePoint {
            n_modes,
            max_norm_distance: dist,
        });
    }
    let mut out = serde_json::to_string_pretty(&report)?;
    out.push('\n');
    emit(args.output.as_ref(), &out)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Curve(args) => cmd_curve(args),
        Command::Dos(args) => cmd_dos(args),
        Command::Threshold(args) => cmd_threshold(args),
        Command::Converge(args) => cmd_converge(args),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        // Numerical non-convergence gets its own exit code so sweep
        // scripts can tell it apart from bad input.
        let convergence = err.chain().any(|cause| {
            matches!(
                cause.downcast_ref::<specheat::Error>(),
                Some(specheat::Error::Convergence(_))
                    | Some(specheat::Error::WindowSensitivity { .. })
            )
        });
        std::process::exit(if convergence { 3 } else { 1 });
    }
}
