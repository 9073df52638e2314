//! Electric and magnetic polarizabilities: atoms, oscillators, nanospheres.

use std::f64::consts::PI;

use crate::error::{domain, PolderError, Result};
use crate::green_planar::GreenDiagonal;
use crate::materials::{DielectricModel, MaybeInfinite, C, EPS0, HBAR, K_B, MU0};
use crate::numerics::{feature_breakpoints, try_integrate_breakpoints};
use crate::{Complex, Tolerance};

/// Evaluation point: real frequency `ω` or imaginary frequency `iξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Freq {
    Real(f64),
    Imag(f64),
}

impl Freq {
    pub fn value(self) -> f64 {
        match self {
            Freq::Real(w) | Freq::Imag(w) => w,
        }
    }
}

/// Diagonal tensor `(xx, yy, zz)`.
pub type Diag3 = [Complex; 3];

pub const ISOTROPIC: [f64; 3] = [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];

/// Default `i0⁺` regularization, relative to the transition frequency.
pub const DEFAULT_DAMPING_RATIO: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionLine {
    /// `|d^{ab}|²` in C²m².
    pub d_sq: f64,
    /// Signed Bohr frequency `(E_b − E_a)/ħ`.
    pub omega_ba: f64,
    /// Fraction of `d_sq` along x, y, z.
    pub axis_weights: [f64; 3],
    /// Radiative width of the upper state, when known.
    pub width: Option<f64>,
}

impl TransitionLine {
    pub fn isotropic(d_sq: f64, omega_ba: f64) -> Self {
        TransitionLine { d_sq, omega_ba, axis_weights: ISOTROPIC, width: None }
    }

    pub fn with_width(mut self, width: f64) -> Self {
        self.width = Some(width);
        self
    }
}

/// An atomic level with its dipole transitions to every other level.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomState {
    pub label: String,
    /// Level energy in J, used for Boltzmann weights.
    pub energy: f64,
    pub lines: Vec<TransitionLine>,
    /// `η/|ω_ba|` standing in for `i0⁺` on the real axis; zero exposes the bare poles.
    pub damping_ratio: f64,
}

impl AtomState {
    pub fn new(label: impl Into<String>, energy: f64, lines: Vec<TransitionLine>) -> Self {
        AtomState { label: label.into(), energy, lines, damping_ratio: DEFAULT_DAMPING_RATIO }
    }

    /// `α^a_jj(ω) = Σ_b d²w_j/ħ · 2ω_ba/(ω_ba² − (ω + iη)²)`.
    pub fn alpha(&self, freq: Freq) -> Result<Diag3> {
        if self.lines.is_empty() {
            return domain(format!("state '{}' has no transition lines", self.label));
        }
        let mut out = [Complex::new(0.0, 0.0); 3];
        for line in &self.lines {
            let wba = line.omega_ba;
            let denom = match freq {
                Freq::Imag(xi) => Complex::new(wba * wba + xi * xi, 0.0),
                Freq::Real(w) => {
                    let eta = self.damping_ratio * wba.abs();
                    let z = Complex::new(w, eta);
                    // Factored so the line centre keeps full relative precision.
                    (z - wba) * (-z - wba)
                }
            };
            if denom.norm() == 0.0 {
                return Err(PolderError::Pole(format!("undamped transition at omega = {wba:e}")));
            }
            let common = 2.0 * wba * line.d_sq / HBAR / denom;
            for (slot, w) in out.iter_mut().zip(line.axis_weights) {
                *slot += common * w;
            }
        }
        Ok(out)
    }

    pub fn is_ground_like(&self) -> bool {
        self.lines.iter().all(|l| l.omega_ba > 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Polarizability {
    AtomLines(AtomState),
    TwoLevel { d_sq: f64, omega_0: f64 },
    DampedOscillator { q: f64, m: f64, omega_0: f64, gamma: f64 },
    NanosphereElectric { radius: f64, material: DielectricModel },
    NanosphereMagnetic { radius: f64, material: DielectricModel },
    Static { alpha0: f64 },
}

fn splat(z: Complex) -> Diag3 {
    [z, z, z]
}

fn imag_eps(material: &DielectricModel, xi: f64) -> Result<MaybeInfinite> {
    material.permittivity_imag_axis(xi)
}

impl Polarizability {
    /// Two-level atom with a given static polarizability `α(0)` at `ω_0`.
    pub fn two_level_from_static(alpha0: f64, omega_0: f64) -> Self {
        Polarizability::TwoLevel { d_sq: 1.5 * HBAR * omega_0 * alpha0, omega_0 }
    }

    pub fn is_magnetic(&self) -> bool {
        matches!(self, Polarizability::NanosphereMagnetic { .. })
    }

    /// Diagonal polarizability tensor.
    pub fn alpha(&self, freq: Freq) -> Result<Diag3> {
        match self {
            Polarizability::AtomLines(state) => state.alpha(freq),
            Polarizability::TwoLevel { d_sq, omega_0 } => {
                AtomState::new("two-level", 0.0, vec![TransitionLine::isotropic(*d_sq, *omega_0)]).alpha(freq)
            }
            Polarizability::DampedOscillator { q, m, omega_0, gamma } => {
                Ok(splat(damped_oscillator_alpha(*q, *m, *omega_0, *gamma, freq)?))
            }
            Polarizability::NanosphereElectric { radius, material } => {
                Ok(splat(alpha_nanosphere_electric(*radius, material, freq)?))
            }
            Polarizability::NanosphereMagnetic { radius, material } => {
                Ok(splat(beta_nanosphere_magnetic(*radius, material, freq)?))
            }
            Polarizability::Static { alpha0 } => Ok(splat(Complex::new(*alpha0, 0.0))),
        }
    }

    /// Isotropic average `tr α / 3`.
    pub fn alpha_iso(&self, freq: Freq) -> Result<Complex> {
        let a = self.alpha(freq)?;
        Ok((a[0] + a[1] + a[2]) / 3.0)
    }

    /// Real diagonal on the imaginary axis.
    pub fn alpha_imag(&self, xi: f64) -> Result<[f64; 3]> {
        let a = self.alpha(Freq::Imag(xi))?;
        Ok([a[0].re, a[1].re, a[2].re])
    }

    pub fn static_alpha(&self) -> Result<f64> {
        Ok(self.alpha_imag(0.0)?.iter().sum::<f64>() / 3.0)
    }

    /// Frequency scale where the response changes (used for sum cutoffs and breakpoints).
    pub fn characteristic_frequency(&self) -> Option<f64> {
        match self {
            Polarizability::AtomLines(s) => s.lines.iter().map(|l| l.omega_ba.abs()).fold(None, |m: Option<f64>, w| {
                Some(m.map_or(w, |m| m.min(w)))
            }),
            Polarizability::TwoLevel { omega_0, .. } => Some(*omega_0),
            Polarizability::DampedOscillator { omega_0, .. } => Some(*omega_0),
            Polarizability::NanosphereElectric { material, .. } | Polarizability::NanosphereMagnetic { material, .. } => {
                material.resonances().into_iter().fold(None, |m: Option<f64>, w| Some(m.map_or(w, |m| m.max(w))))
            }
            Polarizability::Static { .. } => None,
        }
    }

    /// Narrow real-axis features `(center, width)` of `Im α`.
    pub fn spectral_features(&self) -> Vec<(f64, f64)> {
        match self {
            Polarizability::AtomLines(s) => s
                .lines
                .iter()
                .map(|l| (l.omega_ba.abs(), (s.damping_ratio * l.omega_ba.abs()).max(l.omega_ba.abs() * 1e-12)))
                .collect(),
            Polarizability::TwoLevel { omega_0, .. } => vec![(*omega_0, DEFAULT_DAMPING_RATIO * omega_0)],
            Polarizability::DampedOscillator { omega_0, gamma, .. } => vec![(*omega_0, gamma.max(omega_0 * 1e-12))],
            Polarizability::NanosphereElectric { material, .. } | Polarizability::NanosphereMagnetic { material, .. } => {
                material_features(material)
            }
            Polarizability::Static { .. } => Vec::new(),
        }
    }
}

fn material_features(material: &DielectricModel) -> Vec<(f64, f64)> {
    match material {
        DielectricModel::Drude { omega_p, gamma } => vec![
            (omega_p / 3f64.sqrt(), *gamma),
            (omega_p / 2f64.sqrt(), *gamma),
            (*gamma, *gamma),
        ],
        DielectricModel::Lorentz { lines, .. } => lines.iter().map(|l| (l.omega_t, l.gamma.max(l.omega_t * 1e-9))).collect(),
        _ => Vec::new(),
    }
}

/// Bare oscillator `α_v = (q²/m)/(ω_0² − ω² − iγω)`.
pub fn damped_oscillator_alpha(q: f64, m: f64, omega_0: f64, gamma: f64, freq: Freq) -> Result<Complex> {
    if !(m > 0.0 && omega_0 > 0.0 && gamma >= 0.0) {
        return domain(format!("invalid oscillator m={m:e}, omega_0={omega_0:e}, gamma={gamma:e}"));
    }
    let denom = match freq {
        Freq::Real(w) => Complex::new((omega_0 - w) * (omega_0 + w), -gamma * w),
        Freq::Imag(xi) => Complex::new(omega_0 * omega_0 + xi * xi + gamma * xi, 0.0),
    };
    if denom.norm() == 0.0 {
        return Err(PolderError::Pole(format!("undamped oscillator at omega = {omega_0:e}")));
    }
    Ok(q * q / m / denom)
}

/// Clausius-Mossotti sphere `4πε_0R³(ε − 1)/(ε + 2)`.
pub fn alpha_nanosphere_electric(radius: f64, material: &DielectricModel, freq: Freq) -> Result<Complex> {
    if !(radius > 0.0) {
        return domain(format!("sphere radius must be positive, got {radius:e}"));
    }
    let pref = 4.0 * PI * EPS0 * radius.powi(3);
    let eps = match freq {
        Freq::Real(w) => material.permittivity_real_axis(w)?,
        Freq::Imag(xi) => match imag_eps(material, xi)? {
            MaybeInfinite::Finite(e) => Complex::new(e, 0.0),
            MaybeInfinite::Infinite => return Ok(Complex::new(pref, 0.0)),
        },
    };
    let d = eps + 2.0;
    if d.norm() == 0.0 {
        return Err(PolderError::Pole("undamped particle plasmon, eps = -2".into()));
    }
    Ok(pref * (eps - 1.0) / d)
}

/// Magnetic sphere `(2π/15μ_0)(Rω/c)²(ε − 1)R³`, continued to `ω = iξ`.
pub fn beta_nanosphere_magnetic(radius: f64, material: &DielectricModel, freq: Freq) -> Result<Complex> {
    if !(radius > 0.0) {
        return domain(format!("sphere radius must be positive, got {radius:e}"));
    }
    let pref = 2.0 * PI / (15.0 * MU0) * radius.powi(5) / (C * C);
    match freq {
        Freq::Real(w) => Ok(pref * w * w * (material.permittivity_real_axis(w)? - 1.0)),
        Freq::Imag(xi) => {
            if xi == 0.0 {
                return Ok(Complex::new(0.0, 0.0));
            }
            match imag_eps(material, xi)? {
                MaybeInfinite::Finite(e) => Ok(Complex::new(-pref * xi * xi * (e - 1.0), 0.0)),
                MaybeInfinite::Infinite => Err(PolderError::Unsupported("magnetic sphere of a perfect reflector".into())),
            }
        }
    }
}

/// Levels with Boltzmann populations.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalEnsemble {
    pub states: Vec<AtomState>,
}

impl ThermalEnsemble {
    /// Ground and excited state of a two-level atom.
    pub fn two_level_pair(d_sq: f64, omega_0: f64) -> Self {
        ThermalEnsemble {
            states: vec![
                AtomState::new("g", 0.0, vec![TransitionLine::isotropic(d_sq, omega_0)]),
                AtomState::new("e", HBAR * omega_0, vec![TransitionLine::isotropic(d_sq, -omega_0)]),
            ],
        }
    }

    /// Normalized Boltzmann weights; energies are shifted to the lowest level.
    pub fn weights(&self, temperature: f64) -> Result<Vec<f64>> {
        if self.states.is_empty() {
            return domain("empty state set");
        }
        if !(temperature > 0.0) {
            return domain(format!("thermal average needs T > 0, got {temperature}"));
        }
        let e_min = self.states.iter().map(|s| s.energy).fold(f64::INFINITY, f64::min);
        let w: Vec<f64> = self.states.iter().map(|s| (-(s.energy - e_min) / (K_B * temperature)).exp()).collect();
        let z: f64 = w.iter().sum();
        Ok(w.into_iter().map(|x| x / z).collect())
    }

    /// `α^T = Σ_a e^{−E_a/k_BT} α^a / Z`.
    pub fn alpha_thermal(&self, temperature: f64, freq: Freq) -> Result<Diag3> {
        let w = self.weights(temperature)?;
        let mut out = [Complex::new(0.0, 0.0); 3];
        for (state, p) in self.states.iter().zip(w) {
            if p == 0.0 {
                continue;
            }
            let a = state.alpha(freq)?;
            for j in 0..3 {
                out[j] += a[j] * p;
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorStrengths {
    /// `∫_0^∞ Im α dω`.
    pub electric: f64,
    /// `∫_0^cutoff Im β dω`.
    pub magnetic: f64,
}

/// Oscillator-strength integrals over the positive real axis.
///
/// For nanospheres both integrals refer to the same sphere; `cutoff` bounds the
/// magnetic integral, which diverges otherwise.
pub fn oscillator_strength_integrals(p: &Polarizability, cutoff: f64) -> Result<OscillatorStrengths> {
    if !(cutoff > 0.0) {
        return domain(format!("cutoff must be positive, got {cutoff:e}"));
    }
    let tol = Tolerance::rel(1e-7);
    let bps = feature_breakpoints(&p.spectral_features());
    let (elec, mag) = match p {
        Polarizability::NanosphereElectric { radius, material } | Polarizability::NanosphereMagnetic { radius, material } => {
            if material.is_vacuum() {
                return Ok(OscillatorStrengths { electric: 0.0, magnetic: 0.0 });
            }
            let e = Polarizability::NanosphereElectric { radius: *radius, material: material.clone() };
            let m = Polarizability::NanosphereMagnetic { radius: *radius, material: material.clone() };
            (Some(e), Some(m))
        }
        Polarizability::Static { .. } => return Ok(OscillatorStrengths { electric: 0.0, magnetic: 0.0 }),
        other => (Some(other.clone()), None),
    };
    let electric = match elec {
        Some(e) => try_integrate_breakpoints(|w: f64| Ok::<f64, PolderError>(e.alpha_iso(Freq::Real(w))?.im), 0.0, &bps, None, &tol)?.value,
        None => 0.0,
    };
    let magnetic = match mag {
        Some(m) => {
            try_integrate_breakpoints(|w: f64| Ok::<f64, PolderError>(m.alpha_iso(Freq::Real(w))?.im), 0.0, &bps, Some(cutoff), &tol)?.value
        }
        None => 0.0,
    };
    Ok(OscillatorStrengths { electric, magnetic })
}

/// Surface-dressed polarizability `α_ii = α_v/(1 − α_v 𝒢_ii)`.
pub fn alpha_dressed(alpha_v: Complex, g: &GreenDiagonal) -> Result<Diag3> {
    let mut out = [Complex::new(0.0, 0.0); 3];
    for (slot, gii) in out.iter_mut().zip([g.xx, g.xx, g.zz]) {
        let d = Complex::new(1.0, 0.0) - alpha_v * gii;
        if d.norm() <= f64::EPSILON * (alpha_v * gii).norm().max(1.0) {
            return Err(PolderError::Pole("surface-shifted oscillator resonance".into()));
        }
        *slot = alpha_v / d;
    }
    Ok(out)
}

/// Rb-87 ground state: one line at 780 nm, `α(0)/(4πε_0) = 47.3e-30 m³`, natural width 2π·6.07 MHz.
pub fn rb87_ground() -> AtomState {
    let omega = rb87_line_frequency();
    let alpha0 = 4.0 * PI * EPS0 * 47.3e-30;
    let d_sq = 1.5 * HBAR * omega * alpha0;
    AtomState::new("rb87-ground", 0.0, vec![TransitionLine::isotropic(d_sq, omega).with_width(2.0 * PI * 6.07e6)])
}

/// The first excited level paired with [`rb87_ground`].
pub fn rb87_excited() -> AtomState {
    let g = rb87_ground();
    let line = &g.lines[0];
    AtomState::new("rb87-excited", HBAR * line.omega_ba, vec![TransitionLine { omega_ba: -line.omega_ba, ..line.clone() }])
}

/// Rb-87 atomic mass in kg.
pub const RB87_MASS: f64 = 1.443_160_648e-25;

pub fn rb87_line_frequency() -> f64 {
    2.0 * PI * C / 780e-9
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::green_planar::{Axis, Flavor};
    use crate::materials::gold;
    use proptest::prelude::*;

    const W0: f64 = 2.4e15;

    fn two_level() -> Polarizability {
        Polarizability::two_level_from_static(4.0 * PI * EPS0 * 1e-29, W0)
    }

    #[test]
    fn two_level_examples() {
        let p = two_level();
        let Polarizability::TwoLevel { d_sq, omega_0 } = p else { unreachable!() };
        let a0 = p.alpha_iso(Freq::Imag(0.0)).unwrap().re;
        assert!((a0 / (2.0 * d_sq / (3.0 * HBAR * omega_0)) - 1.0).abs() < 1e-12);
        let half = p.alpha_imag(W0).unwrap()[0];
        assert!((half / a0 - 0.5).abs() < 1e-12);
        let single = Polarizability::AtomLines(AtomState::new("x", 0.0, vec![TransitionLine::isotropic(d_sq, omega_0)]));
        assert_eq!(single.static_alpha().unwrap(), p.static_alpha().unwrap());
    }

    #[test]
    fn up_down_cancellation() {
        let s = AtomState::new("mid", 0.0, vec![TransitionLine::isotropic(1e-58, W0), TransitionLine::isotropic(1e-58, -W0)]);
        for f in [Freq::Real(0.3 * W0), Freq::Real(2.0 * W0), Freq::Imag(W0)] {
            assert!(s.alpha(f).unwrap().iter().all(|z| z.norm() < 1e-60));
        }
    }

    #[test]
    fn pole_marker_without_damping() {
        let mut s = AtomState::new("g", 0.0, vec![TransitionLine::isotropic(1e-58, W0)]);
        s.damping_ratio = 0.0;
        assert!(matches!(s.alpha(Freq::Real(W0)), Err(PolderError::Pole(_))));
    }

    #[test]
    fn thermal_examples() {
        let Polarizability::TwoLevel { d_sq, .. } = two_level() else { unreachable!() };
        let ens = ThermalEnsemble::two_level_pair(d_sq, W0);
        let g = ens.states[0].alpha(Freq::Imag(0.0)).unwrap()[0].re;
        let cold_t = HBAR * W0 / (K_B * 60.0);
        let cold = ens.alpha_thermal(cold_t, Freq::Imag(0.0)).unwrap()[0].re;
        assert!((cold / g - 1.0).abs() < 1e-12);
        let t = HBAR * W0 / (2.0 * K_B * 0.5f64.atanh());
        let half = ens.alpha_thermal(t, Freq::Imag(0.0)).unwrap()[0].re;
        assert!((half / g - 0.5).abs() < 1e-9);
        let mut degenerate = ens.clone();
        degenerate.states[1].energy = 0.0;
        let z = degenerate.alpha_thermal(300.0, Freq::Imag(1e14)).unwrap();
        assert!(z[0].norm() < 1e-20 * g);
        assert!(ThermalEnsemble { states: vec![] }.alpha_thermal(300.0, Freq::Imag(0.0)).is_err());
    }

    #[test]
    fn nanosphere_electric_examples() {
        let r = 10e-9;
        let a = alpha_nanosphere_electric(r, &gold(), Freq::Imag(1.0)).unwrap();
        assert!((a.re / (4.0 * PI * EPS0 * r.powi(3)) - 1.0).abs() < 1e-10);
        let a = alpha_nanosphere_electric(r, &gold(), Freq::Imag(0.0)).unwrap();
        assert_eq!(a.re, 4.0 * PI * EPS0 * r.powi(3));
        assert_eq!(alpha_nanosphere_electric(r, &DielectricModel::Vacuum, Freq::Real(1e15)).unwrap().norm(), 0.0);
        let ws = 1.37e16 / 3f64.sqrt();
        let eps = gold().permittivity_real_axis(ws).unwrap();
        assert!((eps.re + 2.0).abs() < 1e-4);
    }

    #[test]
    fn nanosphere_magnetic_examples() {
        let r = 10e-9;
        assert_eq!(beta_nanosphere_magnetic(r, &gold(), Freq::Imag(0.0)).unwrap().norm(), 0.0);
        let b = beta_nanosphere_magnetic(r, &gold(), Freq::Real(1e12)).unwrap();
        assert!(beta_nanosphere_magnetic(r, &gold(), Freq::Real(1e3)).unwrap().norm() < 1e-6 * b.norm());
        assert!(b.re < 0.0);
        let b2 = beta_nanosphere_magnetic(2.0 * r, &gold(), Freq::Real(1e12)).unwrap();
        assert!((b2 / b - 32.0).norm() < 1e-10);
        assert!(beta_nanosphere_magnetic(r, &gold(), Freq::Imag(1e14)).unwrap().re < 0.0);
    }

    #[test]
    fn oscillator_strengths_drude_sphere() {
        // Lorentzian resonance at ω_s = ω_p/√3 integrates to (π/2)·ω_s·4πε_0R³ = (3/2)π ε_0 ω_s V.
        let (wp, r) = (1.37e16, 5e-9);
        let m = DielectricModel::Drude { omega_p: wp, gamma: 1e-3 * wp };
        let p = Polarizability::NanosphereElectric { radius: r, material: m };
        let v = 4.0 * PI * r.powi(3) / 3.0;
        let s = oscillator_strength_integrals(&p, wp).unwrap();
        let expected = 1.5 * PI * EPS0 * wp / 3f64.sqrt() * v;
        assert!((s.electric / expected - 1.0).abs() < 0.01, "{}", s.electric / expected);
        // ∫_0^{ω_p} ω² Im ε dω ≈ ω_p²γ ln(ω_p/γ) gives (2π²/5μ_0) γ ln(ω_p/γ)(R/λ_p)² V.
        let gamma = 1e-3 * wp;
        let lp = 2.0 * PI * C / wp;
        let expected_m = 2.0 * PI * PI / (5.0 * MU0) * gamma * (wp / gamma).ln() * (r / lp).powi(2) * v;
        assert!((s.magnetic / expected_m - 1.0).abs() < 0.01, "{}", s.magnetic / expected_m);
        let vac = Polarizability::NanosphereElectric { radius: r, material: DielectricModel::Vacuum };
        assert_eq!(oscillator_strength_integrals(&vac, wp).unwrap(), OscillatorStrengths { electric: 0.0, magnetic: 0.0 });
    }

    #[test]
    fn oscillator_strength_two_level() {
        let p = two_level();
        let Polarizability::TwoLevel { d_sq, .. } = p else { unreachable!() };
        let s = oscillator_strength_integrals(&p, 1.0).unwrap();
        assert!((s.electric / (PI * d_sq / (3.0 * HBAR)) - 1.0).abs() < 1e-4);
    }

    fn green(xx: Complex, zz: Complex) -> GreenDiagonal {
        GreenDiagonal { xx, zz, flavor: Flavor::Electric, axis: Axis::Imag, distance: 1e-6, freq: 1e14 }
    }

    #[test]
    fn dressed_examples() {
        let av = damped_oscillator_alpha(1.6e-19, 9.1e-31, 1e15, 1e12, Freq::Imag(1e14)).unwrap();
        let d = alpha_dressed(av, &green(Complex::new(0.0, 0.0), Complex::new(0.0, 0.0))).unwrap();
        assert_eq!(d[0], av);
        for eps in [1e-4, 1e-5, 1e-6, 1e-7] {
            let g = Complex::new(eps / av.re, 0.0);
            let d = alpha_dressed(av, &green(g, g * 2.0)).unwrap();
            let series = av + av * av * g;
            assert!(((d[0] - series) / (av * av * g)).norm() < 2.0 * eps);
            assert_eq!(d[0].im, 0.0);
        }
        let g = Complex::new(1.0 / av.re, 0.0);
        assert!(matches!(alpha_dressed(av, &green(g, g)), Err(PolderError::Pole(_))));
    }

    fn variants() -> Vec<Polarizability> {
        vec![
            two_level(),
            Polarizability::AtomLines(rb87_ground()),
            Polarizability::DampedOscillator { q: 1.6e-19, m: 9.1e-31, omega_0: 1e15, gamma: 1e13 },
            Polarizability::NanosphereElectric { radius: 5e-9, material: gold() },
            Polarizability::NanosphereMagnetic { radius: 5e-9, material: gold() },
            Polarizability::Static { alpha0: 1e-39 },
        ]
    }

    proptest! {
        #[test]
        fn crossing_symmetry(w in 1e10..1e17f64) {
            // α(−ω)* = α(ω): evaluate the analytic forms at ±ω.
            for p in variants() {
                if let Polarizability::NanosphereElectric { .. } | Polarizability::NanosphereMagnetic { .. } = p {
                    continue;
                }
                let plus = p.alpha_iso(Freq::Real(w)).unwrap();
                let minus = p.alpha_iso(Freq::Real(-w)).unwrap();
                prop_assert!((plus - minus.conj()).norm() <= 1e-12 * plus.norm().max(1e-300));
            }
        }

        #[test]
        fn imaginary_axis_positivity(xi in 1e8..1e18f64) {
            for p in variants() {
                if p.is_magnetic() { continue; }
                let a = p.alpha_imag(xi).unwrap();
                prop_assert!(a.iter().all(|&x| x >= 0.0 && x.is_finite()));
            }
        }

        #[test]
        fn thermal_to_ground(ratio in 60.0..400.0f64) {
            let Polarizability::TwoLevel { d_sq, .. } = two_level() else { unreachable!() };
            let ens = ThermalEnsemble::two_level_pair(d_sq, W0);
            let t = HBAR * W0 / (K_B * ratio);
            let th = ens.alpha_thermal(t, Freq::Imag(1e15)).unwrap()[2].re;
            let g = ens.states[0].alpha(Freq::Imag(1e15)).unwrap()[2].re;
            prop_assert!((th / g - 1.0).abs() < 1e-10);
        }
    }
}
