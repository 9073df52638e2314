//! Flag/config merging, grids, presets and the worker pool.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use polder::equilibrium::EquilibriumOptions;
use polder::green_planar::HalfSpace;
use polder::io::{parse_config, resolve_atom, resolve_material};
use polder::materials::{DielectricModel, ELEMENTARY_CHARGE};
use polder::noneq_field::NeqOptions;
use polder::response::Polarizability;
use polder::{PolderError, Tolerance};
use rayon::prelude::*;

use crate::output::Cell;
use crate::{GlobalArgs, GridArgs, ParticleArgs};

/// Every long flag, usable as a config key.
const KNOWN_KEYS: &[&str] = &[
    "json", "no-meta", "jobs", "tol", "L", "Lmin", "Lmax", "points", "linear", "atom", "particle", "material", "freq",
    "wmin", "wmax", "imag-axis", "magnetic", "asymptotic", "temp", "asymptotes", "force", "nonperturbative",
    "vdw-reflectivity", "state", "high-t", "decay", "TS", "TE", "total", "mode", "v", "TF", "TA", "dressed",
    "omega-trap", "Rz", "mass", "amplitude", "q", "lattice-wavelength", "extent", "gravity", "C4", "a",
];

const DEFAULT_POINTS: usize = 50;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(String),
    Numerical { command: String, params: String, source: PolderError },
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Numerical { .. } => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "{}", s.trim_end()),
            CliError::Config(s) => write!(f, "polder: configuration error: {s}"),
            CliError::Numerical { command, params, source } => {
                write!(f, "polder: numerical failure in {command} ({params}): {source}")?;
                if !std::ptr::eq(source.root(), source) {
                    write!(f, "\n  root cause: {}", source.root())?;
                }
                Ok(())
            }
        }
    }
}

pub fn config_err(e: impl fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

pub struct Settings {
    config: BTreeMap<String, String>,
    pub json: bool,
    pub meta: bool,
    jobs: Option<usize>,
    tol: Option<f64>,
}

fn parse_value<T: FromStr>(key: &str, v: &str, source: &str) -> Result<T, CliError> {
    v.trim().parse().map_err(|_| CliError::Config(format!("invalid value '{v}' for '{key}' in {source}")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool, CliError> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(CliError::Config(format!("invalid boolean '{v}' for '{key}' in config"))),
    }
}

impl Settings {
    pub fn load(g: &GlobalArgs) -> Result<Self, CliError> {
        let config = match &g.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
                parse_config(&text, KNOWN_KEYS).map_err(|e| config_err(format!("{}: {e}", path.display())))?
            }
            None => BTreeMap::new(),
        };
        let env_tol = match std::env::var("POLDER_TOL") {
            Ok(v) => Some(parse_value::<f64>("POLDER_TOL", &v, "the environment")?),
            Err(_) => None,
        };
        let mut s = Settings { config, json: false, meta: true, jobs: None, tol: None };
        s.json = s.flag("json", g.json)?;
        s.meta = !s.flag("no-meta", g.no_meta)?;
        s.jobs = s.get("jobs", g.jobs)?;
        s.tol = s.get("tol", g.tol)?.or(env_tol);
        if let Some(t) = s.tol {
            if !(t > 0.0 && t < 1.0) {
                return Err(config_err(format!("tolerance must lie in (0, 1), got {t}")));
            }
        }
        if s.jobs == Some(0) {
            return Err(config_err("--jobs must be at least 1"));
        }
        Ok(s)
    }

    /// Command-line value, else the config entry.
    pub fn get<T: FromStr>(&self, key: &str, cli: Option<T>) -> Result<Option<T>, CliError> {
        match cli {
            Some(v) => Ok(Some(v)),
            None => self.config.get(key).map(|v| parse_value(key, v, "config")).transpose(),
        }
    }

    pub fn required<T: FromStr>(&self, key: &str, cli: Option<T>) -> Result<T, CliError> {
        self.get(key, cli)?.ok_or_else(|| config_err(format!("--{key} is required")))
    }

    pub fn or<T: FromStr>(&self, key: &str, cli: Option<T>, default: T) -> Result<T, CliError> {
        Ok(self.get(key, cli)?.unwrap_or(default))
    }

    pub fn flag(&self, key: &str, cli: bool) -> Result<bool, CliError> {
        if cli {
            return Ok(true);
        }
        self.config.get(key).map_or(Ok(false), |v| parse_bool(key, v))
    }

    pub fn choice<T: ValueEnum>(&self, key: &str, cli: Option<T>) -> Result<Option<T>, CliError> {
        match cli {
            Some(v) => Ok(Some(v)),
            None => self
                .config
                .get(key)
                .map(|v| T::from_str(v, true).map_err(|e| config_err(format!("'{key}' in config: {e}"))))
                .transpose(),
        }
    }

    pub fn temperature(&self, key: &str, cli: Option<f64>, default: f64) -> Result<f64, CliError> {
        let t = self.or(key, cli, default)?;
        if !(t >= 0.0 && t.is_finite()) {
            return Err(config_err(format!("--{key} must be a finite temperature >= 0, got {t}")));
        }
        Ok(t)
    }

    pub fn tolerance(&self, default: f64) -> Tolerance {
        Tolerance::rel(self.tol.unwrap_or(default))
    }

    pub fn eq_opts(&self) -> EquilibriumOptions {
        self.tol.map_or_else(EquilibriumOptions::default, EquilibriumOptions::with_rel_tol)
    }

    pub fn neq_opts(&self) -> NeqOptions {
        match self.tol {
            Some(t) => NeqOptions { k_tol: Tolerance::rel((t * 1e-2).max(1e-13)), omega_tol: Tolerance::rel(t) },
            None => NeqOptions::default(),
        }
    }

    pub fn pool(&self) -> Result<rayon::ThreadPool, CliError> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.jobs {
            b = b.num_threads(n);
        }
        b.build().map_err(config_err)
    }

    pub fn grid(&self, g: &GridArgs) -> Result<Vec<f64>, CliError> {
        if let Some(l) = self.get("L", g.l)? {
            if !(l > 0.0 && l.is_finite()) {
                return Err(config_err(format!("--L must be a positive distance, got {l:e}")));
            }
            return Ok(vec![l]);
        }
        let lmin: f64 = self.required("Lmin", g.lmin)?;
        let lmax: f64 = self.required("Lmax", g.lmax)?;
        let points = self.or("points", g.points, DEFAULT_POINTS)?;
        let linear = self.flag("linear", g.linear)?;
        spaced(lmin, lmax, points, !linear, "L")
    }

    pub fn material(&self, cli: &Option<String>) -> Result<(String, HalfSpace), CliError> {
        let name: String = self.required("material", cli.clone())?;
        let m = resolve_material(&name).map_err(config_err)?;
        Ok((name, HalfSpace::new(m).map_err(config_err)?))
    }

    pub fn particle(&self, p: &ParticleArgs, default_atom: &str) -> Result<(String, Polarizability), CliError> {
        if let Some(spec) = self.get::<String>("particle", p.particle.clone())? {
            return Ok((spec.clone(), parse_particle(&spec)?));
        }
        let name = self.or("atom", p.atom.clone(), default_atom.to_string())?;
        let atom = resolve_atom(&name).map_err(config_err)?;
        Ok((name, Polarizability::AtomLines(atom)))
    }
}

/// `points` values from `lo` to `hi`, geometric when `log`.
pub fn spaced(lo: f64, hi: f64, points: usize, log: bool, name: &str) -> Result<Vec<f64>, CliError> {
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(config_err(format!("{name} range needs 0 < min < max, got [{lo:e}, {hi:e}]")));
    }
    if points < 2 {
        return Err(config_err(format!("--points must be at least 2, got {points}")));
    }
    let n = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let t = i as f64 / n;
            match i {
                0 => lo,
                _ if i == points - 1 => hi,
                _ if log => lo * (hi / lo).powf(t),
                _ => lo + (hi - lo) * t,
            }
        })
        .collect())
}

fn numbers(spec: &str, s: &str, n: usize) -> Result<Vec<f64>, CliError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| config_err(format!("bad number '{x}' in particle '{spec}'"))))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(config_err(format!("particle '{spec}' needs {n} values")));
    }
    Ok(v)
}

/// Oscillator of the same static polarizability: `q = e`, `m = e²/(α0ω0²)`.
pub fn oscillator(alpha0: f64, omega_0: f64, gamma: f64) -> Result<Polarizability, CliError> {
    if !(alpha0 > 0.0 && omega_0 > 0.0 && gamma >= 0.0) {
        return Err(config_err("oscillator needs alpha0 > 0, omega0 > 0, gamma >= 0"));
    }
    let q = ELEMENTARY_CHARGE;
    Ok(Polarizability::DampedOscillator { q, m: q * q / (alpha0 * omega_0 * omega_0), omega_0, gamma })
}

fn parse_particle(spec: &str) -> Result<Polarizability, CliError> {
    let (kind, rest) = spec.split_once(':').ok_or_else(|| config_err(format!("particle '{spec}' needs KIND:PARAMS")))?;
    let sphere = |rest: &str| -> Result<(f64, DielectricModel), CliError> {
        let (r, m) = rest.split_once(':').ok_or_else(|| config_err(format!("particle '{spec}' needs RADIUS:MATERIAL")))?;
        let r = numbers(spec, r, 1)?[0];
        if !(r > 0.0) {
            return Err(config_err("sphere radius must be positive"));
        }
        Ok((r, resolve_material(m).map_err(config_err)?))
    };
    match kind {
        "static" => {
            let a = numbers(spec, rest, 1)?[0];
            if !(a >= 0.0) {
                return Err(config_err("static polarizability must be >= 0"));
            }
            Ok(Polarizability::Static { alpha0: a })
        }
        "oscillator" => {
            let v = numbers(spec, rest, 3)?;
            oscillator(v[0], v[1], v[2])
        }
        "sphere" => sphere(rest).map(|(radius, material)| Polarizability::NanosphereElectric { radius, material }),
        "magnetic-sphere" => sphere(rest).map(|(radius, material)| Polarizability::NanosphereMagnetic { radius, material }),
        _ => Err(config_err(format!("unknown particle kind '{kind}'"))),
    }
}

/// Evaluate `f` at every grid point on the pool; rows come back in grid order and
/// the first failure in grid order is reported.
pub fn sweep<F>(command: &str, params: &str, axis: &str, grid: &[f64], f: F) -> Result<Vec<Vec<Cell>>, CliError>
where
    F: Fn(f64) -> polder::Result<Vec<Cell>> + Sync,
{
    let results: Vec<_> = grid.par_iter().map(|&x| (x, f(x))).collect();
    results
        .into_iter()
        .map(|(x, r)| {
            r.map_err(|source| CliError::Numerical {
                command: command.to_string(),
                params: format!("{params}, {axis}={x:e}"),
                source,
            })
        })
        .collect()
}

/// A single evaluation outside any grid.
pub fn once<T>(command: &str, params: &str, r: polder::Result<T>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Numerical { command: command.to_string(), params: params.to_string(), source })
}
