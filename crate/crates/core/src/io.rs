//! Plain-text `key=value` records for materials, atoms and run configuration.
//!
//! One record per line; `#` starts a comment; repeated keys are allowed only
//! where noted. Unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{PolderError, Result};
use crate::materials::{preset, DielectricModel, LorentzLine, HBAR};
use crate::response::{rb87_excited, rb87_ground, AtomState, TransitionLine, DEFAULT_DAMPING_RATIO};

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

fn parse_err<T>(line: usize, msg: impl std::fmt::Display) -> Result<T> {
    Err(PolderError::Parse(format!("line {line}: {msg}")))
}

/// Split text into entries, checking every key against `allowed`.
pub fn parse_entries(text: &str, allowed: &[&str]) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((k, v)) = body.split_once('=') else {
            return parse_err(line, format!("expected key=value, got '{body}'"));
        };
        let (key, value) = (k.trim(), v.trim());
        if !allowed.contains(&key) {
            return parse_err(line, format!("unknown key '{key}' (allowed: {})", allowed.join(", ")));
        }
        if value.is_empty() {
            return parse_err(line, format!("empty value for '{key}'"));
        }
        out.push(Entry { key: key.to_string(), value: value.to_string(), line });
    }
    Ok(out)
}

/// Entries as a map; every key may appear at most once.
pub fn parse_config(text: &str, allowed: &[&str]) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for e in parse_entries(text, allowed)? {
        if map.insert(e.key.clone(), e.value).is_some() {
            return parse_err(e.line, format!("duplicate key '{}'", e.key));
        }
    }
    Ok(map)
}

fn number(e: &Entry, s: &str) -> Result<f64> {
    match s.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => parse_err(e.line, format!("'{}' is not a finite number in '{}'", s.trim(), e.key)),
    }
}

fn numbers(e: &Entry, min: usize, max: usize) -> Result<Vec<f64>> {
    let v = e.value.split(',').map(|s| number(e, s)).collect::<Result<Vec<_>>>()?;
    if v.len() < min || v.len() > max {
        let want = if min == max { format!("{min}") } else { format!("{min} to {max}") };
        return parse_err(e.line, format!("'{}' needs {want} comma-separated values, got {}", e.key, v.len()));
    }
    Ok(v)
}

struct Fields<'a> {
    entries: &'a [Entry],
}

impl<'a> Fields<'a> {
    fn single(&self, key: &str) -> Result<Option<&'a Entry>> {
        let mut found = self.entries.iter().filter(|e| e.key == key);
        let first = found.next();
        if let Some(dup) = found.next() {
            return parse_err(dup.line, format!("duplicate key '{key}'"));
        }
        Ok(first)
    }

    fn num(&self, key: &str) -> Result<Option<f64>> {
        self.single(key)?.map(|e| number(e, &e.value)).transpose()
    }

    fn required(&self, key: &str, kind: &str) -> Result<f64> {
        self.num(key)?.ok_or_else(|| PolderError::Parse(format!("{kind} needs '{key}'")))
    }

    fn forbid(&self, keys: &[&str], kind: &str) -> Result<()> {
        match self.entries.iter().find(|e| keys.contains(&e.key.as_str())) {
            Some(e) => parse_err(e.line, format!("'{}' does not apply to type {kind}", e.key)),
            None => Ok(()),
        }
    }
}

const MATERIAL_KEYS: &[&str] = &["type", "omega_p", "gamma", "eps_inf", "eps", "line"];

/// Parse a material record: `type` is one of `drude`, `lorentz`, `constant`, `vacuum`, `perfect`.
/// Lorentz lines are repeated `line=strength,omega_T,gamma` entries.
pub fn parse_material(text: &str) -> Result<DielectricModel> {
    let entries = parse_entries(text, MATERIAL_KEYS)?;
    let f = Fields { entries: &entries };
    let kind = f.single("type")?.ok_or_else(|| PolderError::Parse("material needs 'type'".into()))?;
    let model = match kind.value.as_str() {
        "drude" => {
            f.forbid(&["eps_inf", "eps", "line"], "drude")?;
            DielectricModel::drude(f.required("omega_p", "drude")?, f.required("gamma", "drude")?)?
        }
        "lorentz" => {
            f.forbid(&["omega_p", "gamma", "eps"], "lorentz")?;
            let lines = entries
                .iter()
                .filter(|e| e.key == "line")
                .map(|e| {
                    let v = numbers(e, 3, 3)?;
                    Ok(LorentzLine { strength: v[0], omega_t: v[1], gamma: v[2] })
                })
                .collect::<Result<Vec<_>>>()?;
            DielectricModel::lorentz(f.num("eps_inf")?.unwrap_or(1.0), lines)?
        }
        "constant" => {
            f.forbid(&["omega_p", "gamma", "eps_inf", "line"], "constant")?;
            DielectricModel::constant(f.required("eps", "constant")?)?
        }
        "vacuum" | "perfect" => {
            f.forbid(&["omega_p", "gamma", "eps_inf", "eps", "line"], &kind.value)?;
            if kind.value == "vacuum" {
                DielectricModel::Vacuum
            } else {
                DielectricModel::PerfectReflector
            }
        }
        other => return parse_err(kind.line, format!("unknown material type '{other}'")),
    };
    Ok(model)
}

/// Inverse of [`parse_material`]; numbers use shortest round-trip formatting.
pub fn format_material(m: &DielectricModel) -> String {
    match m {
        DielectricModel::Drude { omega_p, gamma } => format!("type=drude\nomega_p={omega_p:e}\ngamma={gamma:e}\n"),
        DielectricModel::Lorentz { eps_inf, lines } => {
            let mut s = format!("type=lorentz\neps_inf={eps_inf:e}\n");
            for l in lines {
                s += &format!("line={:e},{:e},{:e}\n", l.strength, l.omega_t, l.gamma);
            }
            s
        }
        DielectricModel::Constant { eps } => format!("type=constant\neps={eps:e}\n"),
        DielectricModel::Vacuum => "type=vacuum\n".into(),
        DielectricModel::PerfectReflector => "type=perfect\n".into(),
    }
}

const ATOM_KEYS: &[&str] = &["label", "energy", "damping_ratio", "line", "alpha0", "omega_0"];

/// Parse an atom record. Lines are repeated `line=d_sq,omega_ba[,width]` entries
/// (C²m², signed rad/s, rad/s), or a single two-level line from `alpha0` (C·m²/V)
/// and `omega_0`.
pub fn parse_atom(text: &str) -> Result<AtomState> {
    let entries = parse_entries(text, ATOM_KEYS)?;
    let f = Fields { entries: &entries };
    let label = f.single("label")?.map_or("atom".to_string(), |e| e.value.clone());
    let energy = f.num("energy")?.unwrap_or(0.0);
    let mut lines = Vec::new();
    for e in entries.iter().filter(|e| e.key == "line") {
        let v = numbers(e, 2, 3)?;
        if v[0] < 0.0 || v[1] == 0.0 {
            return parse_err(e.line, "line needs d_sq >= 0 and omega_ba != 0");
        }
        let mut line = TransitionLine::isotropic(v[0], v[1]);
        if let Some(&w) = v.get(2) {
            if !(w > 0.0) {
                return parse_err(e.line, "line width must be positive");
            }
            line = line.with_width(w);
        }
        lines.push(line);
    }
    match (f.num("alpha0")?, f.num("omega_0")?) {
        (Some(a), Some(w)) => {
            if !lines.is_empty() {
                return Err(PolderError::Parse("give either 'line' entries or alpha0/omega_0, not both".into()));
            }
            if !(a > 0.0 && w > 0.0) {
                return Err(PolderError::Parse("alpha0 and omega_0 must be positive".into()));
            }
            lines.push(TransitionLine::isotropic(1.5 * HBAR * w * a, w));
        }
        (None, None) => {}
        _ => return Err(PolderError::Parse("alpha0 and omega_0 go together".into())),
    }
    if lines.is_empty() {
        return Err(PolderError::Parse("atom needs at least one transition".into()));
    }
    let mut state = AtomState::new(label, energy, lines);
    state.damping_ratio = f.num("damping_ratio")?.unwrap_or(DEFAULT_DAMPING_RATIO);
    if !(state.damping_ratio >= 0.0) {
        return Err(PolderError::Parse("damping_ratio must be >= 0".into()));
    }
    Ok(state)
}

pub fn atom_preset(name: &str) -> Option<AtomState> {
    match name {
        "rb87" | "rb87-ground" => Some(rb87_ground()),
        "rb87-excited" => Some(rb87_excited()),
        _ => None,
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| PolderError::Parse(format!("{}: {e}", path.display())))
}

/// A preset name, or else a path to a material file.
pub fn resolve_material(name_or_path: &str) -> Result<DielectricModel> {
    match preset(name_or_path) {
        Some(m) => Ok(m),
        None => parse_material(&read(Path::new(name_or_path))?)
            .map_err(|e| PolderError::Parse(format!("{name_or_path}: {e}"))),
    }
}

/// A preset name, or else a path to an atom file.
pub fn resolve_atom(name_or_path: &str) -> Result<AtomState> {
    match atom_preset(name_or_path) {
        Some(a) => Ok(a),
        None => parse_atom(&read(Path::new(name_or_path))?).map_err(|e| PolderError::Parse(format!("{name_or_path}: {e}"))),
    }
}
