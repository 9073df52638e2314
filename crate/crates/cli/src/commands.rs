//! One function per subcommand, each producing a [`Table`].

use std::f64::consts::PI;

use polder::atom_state::{decay_rate_diagnostic, free_energy_state_with, resonant_high_t};
use polder::equilibrium::{
    asymptote_cp, asymptote_lifshitz, asymptote_vdw, force_with, free_energy, free_energy_nonperturbative_with,
    Thermal, VdwReflectivity,
};
use polder::friction::{
    blackbody_friction, dedkov_kyasov, harris_schaich_scale, hot_field_force, scheel_buhmann_for, surface_friction,
    FrictionResult, SurfaceFrictionOptions,
};
use polder::green_planar::{self as gp, classify_regime, green_asymptotic, Flavor, HalfSpace, Regime};
use polder::materials::{preset, DielectricModel, MaybeInfinite};
use polder::noneq_field::{
    neq_asymptote_for, neq_dipole_potential_with, neq_force_total_with, neq_force_with, ThermalConditions,
};
use polder::observables::{self as obs, bloch_period, shimizu_potential, TrapConfig, STANDARD_GRAVITY};
use polder::response::{Freq, Polarizability, RB87_MASS};
use polder::{PolderError, Result};

use crate::output::{Cell, Table};
use crate::settings::{config_err, once, oscillator, spaced, sweep, CliError, Settings};
use crate::{
    BlochArgs, FrictionArgs, FrictionMode, GreenArgs, MaterialsArgs, NoneqArgs, PotentialArgs, Reflectivity,
    ShimizuArgs, StatePotentialArgs, TrapShiftArgs,
};

type Out = std::result::Result<Table, CliError>;

/// Optional columns: a model outside its domain gives `nan` instead of failing the run.
fn optional(r: Result<f64>) -> Result<f64> {
    match r {
        Err(PolderError::Unsupported(_)) | Err(PolderError::Domain(_)) => Ok(f64::NAN),
        other => other,
    }
}

fn finite_or_inf(m: MaybeInfinite) -> f64 {
    m.finite().unwrap_or(f64::INFINITY)
}

fn thermal(t: f64) -> Thermal {
    if t == 0.0 {
        Thermal::ZeroTemperature
    } else {
        Thermal::Temperature(t)
    }
}

fn kind(m: &DielectricModel) -> &'static str {
    match m {
        DielectricModel::Drude { .. } => "drude",
        DielectricModel::Lorentz { .. } => "lorentz",
        DielectricModel::Constant { .. } => "constant",
        DielectricModel::Vacuum => "vacuum",
        DielectricModel::PerfectReflector => "perfect",
    }
}

pub fn materials(s: &Settings, a: MaterialsArgs) -> Out {
    let Some(name) = s.get::<String>("material", a.material)? else {
        let mut t = Table::new(&["name", "type", "eps_static", "omega_p", "skin_depth_10GHz"]);
        for name in ["gold", "silica", "sapphire", "vacuum", "perfect"] {
            let m = preset(name).expect("bundled preset");
            let wp = m.plasma_frequency().unwrap_or(f64::NAN);
            let delta = m.skin_depth(2.0 * PI * 1e10).map_or(f64::NAN, finite_or_inf);
            t.rows.push(vec![name.into(), kind(&m).into(), finite_or_inf(m.static_permittivity()).into(), wp.into(), delta.into()]);
        }
        return Ok(t);
    };
    let m = polder::io::resolve_material(&name).map_err(config_err)?;
    let freqs = match s.get("freq", a.freq)? {
        Some(w) if w > 0.0 => vec![w],
        Some(w) => return Err(config_err(format!("--freq must be positive, got {w:e}"))),
        None => spaced(s.required("wmin", a.wmin)?, s.required("wmax", a.wmax)?, s.or("points", a.points, 50)?, true, "omega")?,
    };
    let mut t = Table::new(&["omega", "Re_eps", "Im_eps", "eps_imag_axis", "skin_depth"]);
    t.meta("material", &name).meta("type", kind(&m));
    t.rows = sweep("materials", &format!("material={name}"), "omega", &freqs, |w| {
        let (re, im) = match &m {
            DielectricModel::PerfectReflector => (f64::INFINITY, 0.0),
            _ => {
                let e = m.permittivity_real_axis(w)?;
                (e.re, e.im)
            }
        };
        let xi = finite_or_inf(m.permittivity_imag_axis(w)?);
        Ok(vec![w.into(), re.into(), im.into(), xi.into(), finite_or_inf(m.skin_depth(w)?).into()])
    })?;
    Ok(t)
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::SubSkin => "sub-skin",
        Regime::NonRetarded => "non-retarded",
        Regime::Retarded => "retarded",
        Regime::Crossover => "crossover",
    }
}

pub fn green(s: &Settings, a: GreenArgs) -> Out {
    let (name, geom) = s.material(&a.material)?;
    let grid = s.grid(&a.grid)?;
    let w: f64 = s.required("freq", a.freq)?;
    if !(w > 0.0) {
        return Err(config_err(format!("--freq must be positive, got {w:e}")));
    }
    let imag = s.flag("imag-axis", a.imag_axis)?;
    let flavor = if s.flag("magnetic", a.magnetic)? { Flavor::Magnetic } else { Flavor::Electric };
    let asym = s.flag("asymptotic", a.asymptotic)?;
    if asym && imag {
        return Err(config_err("--asymptotic applies to the real axis only"));
    }
    let mut cols = vec!["L", "freq", "axis", "flavor", "Re_gxx", "Im_gxx", "Re_gzz", "Im_gzz"];
    if asym {
        cols.extend(["regime", "Re_gxx_table", "Im_gxx_table", "Re_gzz_table", "Im_gzz_table"]);
    }
    let mut t = Table::new(&cols);
    t.meta("command", "green").meta("material", &name);
    let freq = if imag { Freq::Imag(w) } else { Freq::Real(w) };
    let tol = s.tolerance(1e-10);
    let axis = if imag { "imag" } else { "real" };
    let fl = if flavor == Flavor::Magnetic { "magnetic" } else { "electric" };
    t.rows = sweep("green", &format!("material={name}, freq={w:e}, axis={axis}"), "L", &grid, |l| {
        let g = gp::green(&geom, l, freq, flavor, &tol)?;
        let mut row: Vec<Cell> =
            vec![l.into(), w.into(), axis.into(), fl.into(), g.xx.re.into(), g.xx.im.into(), g.zz.re.into(), g.zz.im.into()];
        if asym {
            let regime = classify_regime(&geom, l, w)?;
            row.push(regime_name(regime).into());
            match green_asymptotic(&geom, l, w, flavor, regime) {
                Ok(t) => row.extend([t.green.xx.re, t.green.xx.im, t.green.zz.re, t.green.zz.im].map(Cell::from)),
                Err(PolderError::Unsupported(_)) => row.extend([f64::NAN; 4].map(Cell::from)),
                Err(e) => return Err(e),
            }
        }
        Ok(row)
    })?;
    Ok(t)
}

fn default_reflectivity(m: &DielectricModel) -> Reflectivity {
    match m {
        DielectricModel::PerfectReflector => Reflectivity::Perfect,
        DielectricModel::Drude { .. } => Reflectivity::Metal,
        _ => Reflectivity::Electrostatic,
    }
}

pub fn potential(s: &Settings, a: PotentialArgs) -> Out {
    let (pname, p) = s.particle(&a.particle, "rb87")?;
    let (mname, geom) = s.material(&a.material)?;
    let grid = s.grid(&a.grid)?;
    let temp = s.temperature("temp", a.temp, 0.0)?;
    let with_asym = s.flag("asymptotes", a.asymptotes)?;
    let with_force = s.flag("force", a.force)?;
    let with_np = s.flag("nonperturbative", a.nonperturbative)?;
    let alpha0 = p.static_alpha().map_err(config_err)?;
    let refl = match s.choice("vdw-reflectivity", a.vdw_reflectivity)?.unwrap_or(default_reflectivity(&geom.material)) {
        Reflectivity::Perfect => VdwReflectivity::PerfectReflector,
        Reflectivity::Metal => VdwReflectivity::TableMetal(geom.material.clone()),
        Reflectivity::Electrostatic => VdwReflectivity::Electrostatic(geom.material.clone()),
    };
    let np = if with_np {
        if temp == 0.0 {
            return Err(config_err("--nonperturbative needs --temp > 0"));
        }
        let w0 = p.characteristic_frequency().ok_or_else(|| config_err("--nonperturbative needs a resonant particle"))?;
        let gamma = match &p {
            Polarizability::AtomLines(st) => st.lines.iter().find_map(|l| l.width).unwrap_or(st.damping_ratio * w0),
            Polarizability::DampedOscillator { gamma, .. } => *gamma,
            _ => 1e-6 * w0,
        };
        Some(oscillator(alpha0, w0, gamma)?)
    } else {
        None
    };
    let mut cols = vec!["L", "F"];
    if with_force {
        cols.push("force");
    }
    if with_asym {
        cols.extend(["F_vdw", "F_cp", "F_lifshitz"]);
    }
    if with_np {
        cols.push("F_np");
    }
    let mut t = Table::new(&cols);
    t.meta("command", "potential").meta("particle", &pname).meta("material", &mname).meta("temperature_K", temp);
    let opts = s.eq_opts();
    let th = thermal(temp);
    t.rows = sweep("potential", &format!("particle={pname}, material={mname}, T={temp}"), "L", &grid, |l| {
        let mut row: Vec<Cell> = vec![l.into(), free_energy(&p, &geom, l, th, &opts)?.into()];
        if with_force {
            row.push(force_with(&p, &geom, l, th, &opts)?.into());
        }
        if with_asym {
            row.push(optional(asymptote_vdw(&p, l, &refl))?.into());
            row.push(asymptote_cp(alpha0, l).into());
            row.push(asymptote_lifshitz(alpha0, l, temp).into());
        }
        if let Some(osc) = &np {
            row.push(free_energy_nonperturbative_with(osc, &geom, l, temp, &opts)?.into());
        }
        Ok(row)
    })?;
    Ok(t)
}

pub fn state_potential(s: &Settings, a: StatePotentialArgs) -> Out {
    let name = s.or("state", a.state, "rb87-excited".to_string())?;
    let state = polder::io::resolve_atom(&name).map_err(config_err)?;
    let (mname, geom) = s.material(&a.material)?;
    let grid = s.grid(&a.grid)?;
    let temp = s.temperature("temp", a.temp, 0.0)?;
    let high_t = s.flag("high-t", a.high_t)?;
    let decay = s.flag("decay", a.decay)?;
    if high_t && temp == 0.0 {
        return Err(config_err("--high-t needs --temp > 0"));
    }
    let mut cols = vec!["L", "F_nonresonant", "F_resonant", "F_total"];
    if high_t {
        cols.extend(["F_resonant_high_t", "high_t_valid"]);
    }
    if decay {
        cols.push("decay_diagnostic");
    }
    let mut t = Table::new(&cols);
    t.meta("command", "state-potential").meta("state", &state.label).meta("material", &mname).meta("temperature_K", temp);
    let opts = s.eq_opts();
    t.rows = sweep("state-potential", &format!("state={name}, material={mname}, T={temp}"), "L", &grid, |l| {
        let f = free_energy_state_with(&state, &geom, l, temp, &opts)?;
        let mut row: Vec<Cell> = vec![l.into(), f.non_resonant.into(), f.resonant.into(), f.total().into()];
        if high_t {
            let h = resonant_high_t(&state, &geom, l, temp)?;
            row.extend([h.value.into(), h.valid.into()]);
        }
        if decay {
            row.push(decay_rate_diagnostic(&state, &geom, l)?.into());
        }
        Ok(row)
    })?;
    Ok(t)
}

pub fn noneq(s: &Settings, a: NoneqArgs) -> Out {
    let (pname, p) = s.particle(&a.particle, "rb87")?;
    let (mname, geom) = s.material(&a.material)?;
    let grid = s.grid(&a.grid)?;
    let t_s = s.temperature("TS", a.t_s, 300.0)?;
    let t_e = s.temperature("TE", a.t_e, 300.0)?;
    let cond = ThermalConditions::new(t_s, t_e).map_err(config_err)?;
    let total = s.flag("total", a.total)?;
    let alpha0 = p.static_alpha().map_err(config_err)?;
    let mut cols = vec!["L", "U_neq", "F_neq", "U_asymptote"];
    if total {
        cols.push("F_total");
    }
    let mut t = Table::new(&cols);
    t.meta("command", "noneq")
        .meta("particle", &pname)
        .meta("material", &mname)
        .meta("T_S_K", t_s)
        .meta("T_E_K", t_e)
        .meta("alpha0_SI", format!("{alpha0:e}"))
        .meta("U_neq", "evanescent part at T_S minus the same at T_E");
    let (no, eo) = (s.neq_opts(), s.eq_opts());
    t.rows = sweep("noneq", &format!("particle={pname}, material={mname}, TS={t_s}, TE={t_e}"), "L", &grid, |l| {
        let u = neq_dipole_potential_with(alpha0, &geom, l, t_s, &no)? - neq_dipole_potential_with(alpha0, &geom, l, t_e, &no)?;
        let f = neq_force_with(alpha0, &geom, l, t_s, &no)? - neq_force_with(alpha0, &geom, l, t_e, &no)?;
        let asym = optional(neq_asymptote_for(alpha0, &geom.material, l, t_s, t_e))?;
        let mut row: Vec<Cell> = vec![l.into(), u.into(), f.into(), asym.into()];
        if total {
            row.push(neq_force_total_with(alpha0, &geom, l, cond, &no, &eo)?.into());
        }
        Ok(row)
    })?;
    Ok(t)
}

fn friction_cells(r: &FrictionResult) -> Vec<Cell> {
    vec![
        r.force.into(),
        format!("{:?}", r.regime).into(),
        r.relativistic.into(),
        r.small_velocity.into(),
        r.order_of_magnitude.into(),
        r.trivial.into(),
    ]
}

const FRICTION_COLS: [&str; 6] = ["force", "regime", "relativistic", "small_velocity", "order_of_magnitude", "trivial"];

pub fn friction(s: &Settings, a: FrictionArgs) -> Out {
    let mode = s.choice("mode", a.mode)?.ok_or_else(|| config_err("--mode is required"))?;
    let v: f64 = s.required("v", a.v)?;
    let temp = s.temperature("temp", a.temp, 300.0)?;
    let t_f = s.temperature("TF", a.t_f, temp)?;
    let t_a = s.temperature("TA", a.t_a, t_f)?;
    let (pname, p) = s.particle(&a.particle, "rb87")?;
    let mode_name = format!("{mode:?}").to_lowercase();
    let mut t = Table::new(&[]);
    t.meta("command", "friction").meta("mode", &mode_name).meta("particle", &pname).meta("v_m_per_s", format!("{v:e}"));
    let params = format!("mode={mode_name}, particle={pname}, v={v:e}");
    if matches!(mode, FrictionMode::Blackbody | FrictionMode::Dk | FrictionMode::Hotfield) {
        let r = once("friction", &params, match mode {
            FrictionMode::Blackbody => blackbody_friction(&p, temp, v),
            FrictionMode::Dk => dedkov_kyasov(&p, t_f, t_a, v),
            _ => hot_field_force(&p, t_f, v),
        })?;
        t.columns = ["v"].iter().chain(FRICTION_COLS.iter()).map(|c| c.to_string()).collect();
        t.meta("T_F_K", t_f).meta("T_A_K", t_a);
        let mut row: Vec<Cell> = vec![v.into()];
        row.extend(friction_cells(&r));
        t.rows.push(row);
        return Ok(t);
    }
    let (mname, geom) = s.material(&a.material)?;
    let grid = s.grid(&a.grid)?;
    t.columns = ["L"].iter().chain(FRICTION_COLS.iter()).map(|c| c.to_string()).collect();
    t.meta("material", &mname).meta("temperature_K", temp);
    let opts = SurfaceFrictionOptions { tol: s.tolerance(1e-7), dressed: s.flag("dressed", a.dressed)? };
    let atom = match (&p, mode) {
        (Polarizability::AtomLines(st), _) => Some(st.clone()),
        (_, FrictionMode::Sb) => return Err(config_err("--mode sb needs an atom with line widths")),
        _ => None,
    };
    let alpha0 = p.static_alpha().map_err(config_err)?;
    let omega_s = match mode {
        FrictionMode::Hs => Some(geom.material.surface_plasmon_frequency().map_err(config_err)?),
        _ => None,
    };
    t.rows = sweep("friction", &format!("{params}, material={mname}"), "L", &grid, |l| {
        let r = match mode {
            FrictionMode::Surface => surface_friction(&p, &geom, l, temp, v, &opts)?,
            FrictionMode::Sb => scheel_buhmann_for(atom.as_ref().expect("checked above"), &geom.material, l, v)?,
            _ => harris_schaich_scale(alpha0, l, omega_s.expect("checked above"), v)?,
        };
        let mut row: Vec<Cell> = vec![l.into()];
        row.extend(friction_cells(&r));
        Ok(row)
    })?;
    Ok(t)
}

/// Distance-dependent potential used by the observables: Matsubara sum, or the
/// zero-temperature integral at `T = 0`.
fn cp_potential<'a>(p: &'a Polarizability, geom: &'a HalfSpace, temp: f64, s: &Settings) -> impl Fn(f64) -> Result<f64> + Sync + 'a {
    let opts = s.eq_opts();
    let th = thermal(temp);
    move |l| free_energy(p, geom, l, th, &opts)
}

pub fn trap_shift(s: &Settings, a: TrapShiftArgs) -> Out {
    let (pname, p) = s.particle(&a.particle, "rb87")?;
    let (mname, geom) = s.material(&a.material)?;
    let grid = s.grid(&a.grid)?;
    let temp = s.temperature("temp", a.temp, 300.0)?;
    let omega = s.or("omega-trap", a.omega_trap, 2.0 * PI * 230.0)?;
    let r_z: f64 = s.required("Rz", a.r_z)?;
    let mass = s.or("mass", a.mass, RB87_MASS)?;
    let amp = s.or("amplitude", a.amplitude, 0.0)?;
    let trap_at = |l: f64| TrapConfig::new(omega, r_z, mass, l).and_then(|c| c.with_amplitude(amp));
    for &l in &grid {
        trap_at(l).map_err(config_err)?;
    }
    let mut t = Table::new(&["L", "gamma", "omega_cm", "mean_curvature", "nonlinear"]);
    t.meta("command", "observables trap-shift")
        .meta("particle", &pname)
        .meta("material", &mname)
        .meta("temperature_K", temp)
        .meta("omega_trap", format!("{omega:e}"))
        .meta("R_z", format!("{r_z:e}"));
    let u = cp_potential(&p, &geom, temp, s);
    t.rows = sweep("observables trap-shift", &format!("particle={pname}, material={mname}, T={temp}"), "L", &grid, |l| {
        let r = obs::trap_shift(&u, &trap_at(l)?)?;
        Ok(vec![l.into(), r.gamma.into(), r.omega_cm.into(), r.mean_curvature.into(), r.nonlinear.into()])
    })?;
    Ok(t)
}

pub fn bloch(s: &Settings, a: BlochArgs) -> Out {
    let (pname, p) = s.particle(&a.particle, "rb87")?;
    let (mname, geom) = s.material(&a.material)?;
    let grid = s.grid(&a.grid)?;
    let temp = s.temperature("temp", a.temp, 300.0)?;
    let q = match (s.get("q", a.q)?, s.get::<f64>("lattice-wavelength", a.lattice_wavelength)?) {
        (Some(q), None) => q,
        (None, Some(lambda)) if lambda > 0.0 => 4.0 * PI / lambda,
        (None, None) => 4.0 * PI / 532e-9,
        _ => return Err(config_err("give exactly one of --q and a positive --lattice-wavelength")),
    };
    let extent = s.or("extent", a.extent, 0.0)?;
    let mass = s.or("mass", a.mass, RB87_MASS)?;
    let reference = if s.flag("gravity", a.gravity)? { Some(-mass * STANDARD_GRAVITY) } else { None };
    let mut t = Table::new(&["L", "period", "mean_force", "relative_shift"]);
    t.meta("command", "observables bloch")
        .meta("particle", &pname)
        .meta("material", &mname)
        .meta("temperature_K", temp)
        .meta("q", format!("{q:e}"))
        .meta("reference", if reference.is_some() { "gravity" } else { "none" });
    let u = cp_potential(&p, &geom, temp, s);
    t.rows = sweep("observables bloch", &format!("particle={pname}, material={mname}, T={temp}"), "L", &grid, |l| {
        let b = bloch_period(&u, q, l, extent, reference)?;
        Ok(vec![l.into(), b.period.into(), b.mean_force.into(), b.relative_shift.unwrap_or(f64::NAN).into()])
    })?;
    Ok(t)
}

pub fn shimizu(s: &Settings, a: ShimizuArgs) -> Out {
    let c4: f64 = s.required("C4", a.c4)?;
    let fit: f64 = s.required("a", a.a)?;
    let grid = s.grid(&a.grid)?;
    let mut t = Table::new(&["L", "U"]);
    t.meta("command", "observables shimizu").meta("C4", format!("{c4:e}")).meta("a", format!("{fit:e}"));
    t.rows = sweep("observables shimizu", &format!("C4={c4:e}, a={fit:e}"), "L", &grid, |l| {
        Ok(vec![l.into(), shimizu_potential(c4, fit, l)?.into()])
    })?;
    Ok(t)
}
