// `!(x > 0.0)` is the NaN-rejecting form used throughout input validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;
mod settings;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use settings::CliError;

#[derive(Parser, Debug)]
#[command(name = "polder", version, about = "Fluctuation-induced particle-surface interactions")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Emit JSON instead of CSV.
    #[arg(long, global = true)]
    pub json: bool,
    /// Omit the `#` metadata lines.
    #[arg(long, global = true)]
    pub no_meta: bool,
    /// Worker threads for grid sweeps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// key=value file supplying any long flag of the subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Relative tolerance; overrides POLDER_TOL.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GridArgs {
    /// Single distance in m.
    #[arg(long = "L")]
    pub l: Option<f64>,
    #[arg(long = "Lmin")]
    pub lmin: Option<f64>,
    #[arg(long = "Lmax")]
    pub lmax: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Linear spacing instead of logarithmic.
    #[arg(long)]
    pub linear: bool,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ParticleArgs {
    /// Atom preset (rb87, rb87-excited) or atom file.
    #[arg(long)]
    pub atom: Option<String>,
    /// Overrides --atom: `static:ALPHA0`, `oscillator:ALPHA0,OMEGA0,GAMMA`,
    /// `sphere:RADIUS:MATERIAL` or `magnetic-sphere:RADIUS:MATERIAL`.
    #[arg(long)]
    pub particle: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List presets, or tabulate one material's permittivity.
    Materials(MaterialsArgs),
    /// Scattering Green tensor above a half-space.
    Green(GreenArgs),
    /// Equilibrium free energy over a distance grid.
    Potential(PotentialArgs),
    /// Free energy of a prepared atomic state.
    StatePotential(StatePotentialArgs),
    /// Surface hotter or colder than the environment.
    Noneq(NoneqArgs),
    /// Velocity-dependent forces.
    Friction(FrictionArgs),
    /// Trap-frequency shift and Bloch-period shift.
    #[command(subcommand)]
    Observables(ObservablesCommand),
}

#[derive(Args, Debug)]
pub struct MaterialsArgs {
    #[arg(long)]
    pub material: Option<String>,
    /// Single angular frequency in rad/s.
    #[arg(long)]
    pub freq: Option<f64>,
    #[arg(long)]
    pub wmin: Option<f64>,
    #[arg(long)]
    pub wmax: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Args, Debug)]
pub struct GreenArgs {
    #[arg(long)]
    pub material: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Angular frequency (rad/s), or ξ with --imag-axis.
    #[arg(long)]
    pub freq: Option<f64>,
    #[arg(long)]
    pub imag_axis: bool,
    #[arg(long)]
    pub magnetic: bool,
    /// Append the regime and its closed-form table entry (real axis only).
    #[arg(long)]
    pub asymptotic: bool,
}

#[derive(Args, Debug)]
pub struct PotentialArgs {
    #[command(flatten)]
    pub particle: ParticleArgs,
    #[arg(long)]
    pub material: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Temperature in K; 0 uses the zero-temperature integral.
    #[arg(long)]
    pub temp: Option<f64>,
    /// Append F_vdw, F_cp and F_lifshitz.
    #[arg(long)]
    pub asymptotes: bool,
    /// Append the force −∂F/∂L.
    #[arg(long)]
    pub force: bool,
    /// Append the non-perturbative free energy of the matching damped oscillator.
    #[arg(long)]
    pub nonperturbative: bool,
    #[arg(long, value_enum)]
    pub vdw_reflectivity: Option<Reflectivity>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reflectivity {
    Perfect,
    Metal,
    Electrostatic,
}

#[derive(Args, Debug)]
pub struct StatePotentialArgs {
    /// Atom preset or atom file selecting the line set.
    #[arg(long)]
    pub state: Option<String>,
    #[arg(long)]
    pub material: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub temp: Option<f64>,
    /// Append the high-temperature resonant form.
    #[arg(long)]
    pub high_t: bool,
    /// Append the decay-rate diagnostic.
    #[arg(long)]
    pub decay: bool,
}

#[derive(Args, Debug)]
pub struct NoneqArgs {
    #[command(flatten)]
    pub particle: ParticleArgs,
    #[arg(long)]
    pub material: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Surface temperature in K.
    #[arg(long = "TS")]
    pub t_s: Option<f64>,
    /// Environment temperature in K.
    #[arg(long = "TE")]
    pub t_e: Option<f64>,
    /// Append the total force including the equilibrium part at T_E.
    #[arg(long)]
    pub total: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrictionMode {
    Blackbody,
    Dk,
    Hotfield,
    Surface,
    Sb,
    Hs,
}

#[derive(Args, Debug)]
pub struct FrictionArgs {
    #[arg(long, value_enum)]
    pub mode: Option<FrictionMode>,
    #[command(flatten)]
    pub particle: ParticleArgs,
    #[arg(long)]
    pub material: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Speed in m/s.
    #[arg(long)]
    pub v: Option<f64>,
    /// Common temperature in K (surface and blackbody modes).
    #[arg(long)]
    pub temp: Option<f64>,
    /// Field temperature in K.
    #[arg(long = "TF")]
    pub t_f: Option<f64>,
    /// Particle temperature in K.
    #[arg(long = "TA")]
    pub t_a: Option<f64>,
    /// Dress the polarizability with the surface response.
    #[arg(long)]
    pub dressed: bool,
}

#[derive(Subcommand, Debug)]
enum ObservablesCommand {
    /// Centre-of-mass frequency shift of a trapped cloud.
    TrapShift(TrapShiftArgs),
    /// Bloch-oscillation period and its shift against a reference force.
    Bloch(BlochArgs),
    /// Interpolating model potential −C4/((L + a)L³).
    Shimizu(ShimizuArgs),
}

#[derive(Args, Debug)]
pub struct TrapShiftArgs {
    #[command(flatten)]
    pub particle: ParticleArgs,
    #[arg(long)]
    pub material: Option<String>,
    /// Trap-centre distance grid.
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub temp: Option<f64>,
    /// Trap angular frequency in rad/s.
    #[arg(long)]
    pub omega_trap: Option<f64>,
    /// Thomas-Fermi radius in m.
    #[arg(long = "Rz")]
    pub r_z: Option<f64>,
    /// Atomic mass in kg (default Rb-87).
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub amplitude: Option<f64>,
}

#[derive(Args, Debug)]
pub struct BlochArgs {
    #[command(flatten)]
    pub particle: ParticleArgs,
    #[arg(long)]
    pub material: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub temp: Option<f64>,
    /// Brillouin-zone width in 1/m.
    #[arg(long)]
    pub q: Option<f64>,
    /// Lattice laser wavelength in m; sets q = 4π/λ.
    #[arg(long)]
    pub lattice_wavelength: Option<f64>,
    /// Width of the cloud along the normal in m.
    #[arg(long)]
    pub extent: Option<f64>,
    /// Compare against gravity acting on --mass.
    #[arg(long)]
    pub gravity: bool,
    #[arg(long)]
    pub mass: Option<f64>,
}

#[derive(Args, Debug)]
pub struct ShimizuArgs {
    #[arg(long = "C4")]
    pub c4: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
}

fn run(argv: Vec<String>) -> Result<(), CliError> {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) if e.use_stderr() => return Err(CliError::Usage(e.render().to_string())),
        Err(e) => {
            // --help and --version.
            print!("{}", e.render());
            std::process::exit(0);
        }
    };
    let s = settings::Settings::load(&cli.global)?;
    let table = s.pool()?.install(|| match cli.command {
        Command::Materials(a) => commands::materials(&s, a),
        Command::Green(a) => commands::green(&s, a),
        Command::Potential(a) => commands::potential(&s, a),
        Command::StatePotential(a) => commands::state_potential(&s, a),
        Command::Noneq(a) => commands::noneq(&s, a),
        Command::Friction(a) => commands::friction(&s, a),
        Command::Observables(ObservablesCommand::TrapShift(a)) => commands::trap_shift(&s, a),
        Command::Observables(ObservablesCommand::Bloch(a)) => commands::bloch(&s, a),
        Command::Observables(ObservablesCommand::Shimizu(a)) => commands::shimizu(&s, a),
    })?;
    let mut out = std::io::stdout().lock();
    let written = if s.json {
        table.write_json(&mut out, s.meta)
    } else {
        table.write_csv(&mut out, s.meta)
    };
    written.and_then(|_| out.flush()).map_err(|e| CliError::Config(format!("writing output: {e}")))
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
