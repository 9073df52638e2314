//! Equilibrium free energies and forces of a particle above a half-space.

use std::f64::consts::PI;

use crate::error::{domain, PolderError, Result};
use crate::green_planar::{green, green_imag_axis, Flavor, GreenDiagonal, HalfSpace};
use crate::materials::{DielectricModel, MaybeInfinite, C, EPS0, HBAR, K_B};
use crate::numerics::{
    feature_breakpoints, try_derivative_central_positive, try_integrate_breakpoints, try_matsubara_sum_with_tail,
};
use crate::response::{damped_oscillator_alpha, Freq, Polarizability};
use crate::{Complex, MatsubaraOptions, Tolerance};

#[derive(Debug, Clone, Copy)]
pub struct EquilibriumOptions {
    pub tol: Tolerance,
    pub matsubara: MatsubaraOptions,
    /// Cap on explicitly summed Matsubara terms before the integral tail takes over.
    pub max_direct_terms: usize,
}

impl Default for EquilibriumOptions {
    fn default() -> Self {
        EquilibriumOptions { tol: Tolerance::rel(1e-8), matsubara: MatsubaraOptions::default(), max_direct_terms: 20_000 }
    }
}

impl EquilibriumOptions {
    pub fn with_rel_tol(rel: f64) -> Self {
        EquilibriumOptions {
            tol: Tolerance::rel(rel),
            matsubara: MatsubaraOptions { rel_tol: rel, ..Default::default() },
            ..Default::default()
        }
    }

    /// Tighter settings used underneath numerical derivatives.
    fn for_derivative(&self) -> Self {
        let rel = (self.tol.rel * 1e-2).max(1e-12);
        EquilibriumOptions {
            tol: Tolerance { rel, ..self.tol },
            matsubara: MatsubaraOptions { rel_tol: rel, ..self.matsubara },
            ..*self
        }
    }
}

/// `n`-th Matsubara frequency `2πn k_BT/ħ`.
pub fn matsubara_frequency(n: f64, temperature: f64) -> f64 {
    2.0 * PI * n * K_B * temperature / HBAR
}

fn flavor_of(p: &Polarizability) -> Flavor {
    if p.is_magnetic() {
        Flavor::Magnetic
    } else {
        Flavor::Electric
    }
}

fn contract(a: [f64; 3], g: &GreenDiagonal) -> f64 {
    (a[0] + a[1]) * g.xx.re + a[2] * g.zz.re
}

/// `Σ_j α_jj(iξ) G_jj(L, iξ)`, real on the imaginary axis.
pub fn coupling_imag(p: &Polarizability, geom: &HalfSpace, l: f64, xi: f64, tol: &Tolerance) -> Result<f64> {
    let a = p.alpha_imag(xi)?;
    if a.iter().all(|x| *x == 0.0) {
        return Ok(0.0);
    }
    let g = green_imag_axis(geom, l, xi, flavor_of(p), tol)?;
    Ok(contract(a, &g))
}

fn check(l: f64) -> Result<()> {
    if !(l > 0.0 && l.is_finite()) {
        return domain(format!("distance must be positive, got {l:e}"));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return domain(format!("temperature must be positive, got {t}"));
    }
    Ok(())
}

/// Imaginary frequency below which the summand is still changing appreciably.
fn structure_scale(p: &Polarizability, geom: &HalfSpace, l: f64) -> f64 {
    let mut s = C / (2.0 * l);
    if let Some(w) = p.characteristic_frequency() {
        s = s.min(w);
    }
    for w in geom.material.resonances() {
        s = s.min(w.max(1.0));
    }
    s
}

fn direct_terms(scale: f64, temperature: f64, cap: usize) -> usize {
    let xi1 = matsubara_frequency(1.0, temperature);
    ((4.0 * scale / xi1).ceil() as usize).clamp(16, cap.max(16))
}

fn matsubara_with(
    p: &Polarizability,
    geom: &HalfSpace,
    l: f64,
    temperature: f64,
    opts: &EquilibriumOptions,
    n_direct: usize,
) -> Result<f64> {
    let sum = try_matsubara_sum_with_tail(
        |x: f64| coupling_imag(p, geom, l, matsubara_frequency(x, temperature), &opts.tol),
        temperature,
        &opts.matsubara,
        n_direct,
    )?;
    Ok(-K_B * temperature * sum)
}

/// `F(L, T) = −k_BT Σ′_n α_jj(iξ_n) G_jj(L, iξ_n)`.
pub fn free_energy_matsubara_with(
    p: &Polarizability,
    geom: &HalfSpace,
    l: f64,
    temperature: f64,
    opts: &EquilibriumOptions,
) -> Result<f64> {
    check(l)?;
    check_t(temperature)?;
    if geom.material.is_vacuum() {
        return Ok(0.0);
    }
    let n = direct_terms(structure_scale(p, geom, l), temperature, opts.max_direct_terms);
    matsubara_with(p, geom, l, temperature, opts, n)
}

pub fn free_energy_matsubara(p: &Polarizability, geom: &HalfSpace, l: f64, temperature: f64) -> Result<f64> {
    free_energy_matsubara_with(p, geom, l, temperature, &EquilibriumOptions::default())
}

/// The `n = 0` term alone, `−(k_BT/2) α_jj(0) G_jj(L, 0)`.
pub fn matsubara_static_term(p: &Polarizability, geom: &HalfSpace, l: f64, temperature: f64) -> Result<f64> {
    check(l)?;
    check_t(temperature)?;
    Ok(-0.5 * K_B * temperature * coupling_imag(p, geom, l, 0.0, &Tolerance::default())?)
}

fn xi_breakpoints(p: &Polarizability, geom: &HalfSpace, l: f64) -> Vec<f64> {
    let mut centers = vec![C / (2.0 * l)];
    centers.extend(p.characteristic_frequency());
    centers.extend(geom.material.resonances().into_iter().filter(|w| *w > 0.0));
    let mut bps = Vec::new();
    for c in centers {
        for m in [0.01, 0.1, 0.3, 1.0, 3.0, 10.0] {
            bps.push(c * m);
        }
    }
    bps
}

/// `F(L) = −(ħ/2π) ∫_0^∞ dξ α_jj(iξ) G_jj(L, iξ)`.
pub fn free_energy_zero_t_with(p: &Polarizability, geom: &HalfSpace, l: f64, opts: &EquilibriumOptions) -> Result<f64> {
    check(l)?;
    if geom.material.is_vacuum() {
        return Ok(0.0);
    }
    let bps = xi_breakpoints(p, geom, l);
    let r = try_integrate_breakpoints(|xi: f64| coupling_imag(p, geom, l, xi, &opts.tol), 0.0, &bps, None, &opts.tol)?;
    Ok(-HBAR / (2.0 * PI) * r.value)
}

pub fn free_energy_zero_t(p: &Polarizability, geom: &HalfSpace, l: f64) -> Result<f64> {
    free_energy_zero_t_with(p, geom, l, &EquilibriumOptions::default())
}

/// Real-frequency representation `−(ħ/2π)∫_0^∞ dω coth(ħω/2k_BT) Im[α_jj G_jj](ω)`.
///
/// Low-accuracy cross-check only: narrow lines and surface modes are resolved
/// through the damping floor, and the oscillatory far tail is cut at thirty
/// times the highest spectral scale. `temperature = 0` drops the coth.
pub fn free_energy_real_axis(p: &Polarizability, geom: &HalfSpace, l: f64, temperature: f64) -> Result<f64> {
    check(l)?;
    if !(temperature >= 0.0) {
        return domain(format!("temperature must be >= 0, got {temperature}"));
    }
    if geom.material.is_vacuum() {
        return Ok(0.0);
    }
    let tol = Tolerance::rel(1e-5);
    let flavor = flavor_of(p);
    let integrand = |w: f64| -> Result<f64> {
        let a = p.alpha(Freq::Real(w))?;
        let g = green(geom, l, Freq::Real(w), flavor, &tol)?;
        let s: Complex = (a[0] + a[1]) * g.xx + a[2] * g.zz;
        let coth = if temperature > 0.0 { 1.0 / (HBAR * w / (2.0 * K_B * temperature)).tanh() } else { 1.0 };
        Ok(coth * s.im)
    };
    let mut features = p.spectral_features();
    if let Some(ws) = surface_mode(&geom.material) {
        features.push(ws);
    }
    let mut bps = feature_breakpoints(&features);
    bps.extend(xi_breakpoints(p, geom, l));
    let top = features.iter().map(|f| f.0).chain(geom.material.resonances()).fold(C / l, f64::max);
    let r = try_integrate_breakpoints(integrand, 0.0, &bps, Some(30.0 * top), &tol)?;
    Ok(-HBAR / (2.0 * PI) * r.value)
}

fn surface_mode(m: &DielectricModel) -> Option<(f64, f64)> {
    match m {
        DielectricModel::Drude { omega_p, gamma } => Some((omega_p / 2f64.sqrt(), *gamma)),
        _ => None,
    }
}

/// Retarded asymptote `−3ħcα_0/(32π²ε_0L⁴)`.
pub fn asymptote_cp(alpha0: f64, l: f64) -> f64 {
    -3.0 * HBAR * C * alpha0 / (32.0 * PI * PI * EPS0 * l.powi(4))
}

/// High-temperature asymptote `−k_BTα_0/(16πε_0L³)`.
pub fn asymptote_lifshitz(alpha0: f64, l: f64, temperature: f64) -> f64 {
    -K_B * temperature * alpha0 / (16.0 * PI * EPS0 * l.powi(3))
}

/// Reflectivity folded into the non-retarded asymptote.
#[derive(Debug, Clone, PartialEq)]
pub enum VdwReflectivity {
    PerfectReflector,
    /// Metal correction `1 − 2/ε(iξ)`.
    TableMetal(DielectricModel),
    /// Electrostatic image strength `(ε(iξ) − 1)/(ε(iξ) + 1)`.
    Electrostatic(DielectricModel),
}

impl VdwReflectivity {
    fn factor(&self, xi: f64) -> Result<f64> {
        let eps = |m: &DielectricModel| m.permittivity_imag_axis(xi);
        Ok(match self {
            VdwReflectivity::PerfectReflector => 1.0,
            VdwReflectivity::TableMetal(m) => match eps(m)? {
                MaybeInfinite::Finite(e) => 1.0 - 2.0 / e,
                MaybeInfinite::Infinite => 1.0,
            },
            VdwReflectivity::Electrostatic(m) => match eps(m)? {
                MaybeInfinite::Finite(e) => (e - 1.0) / (e + 1.0),
                MaybeInfinite::Infinite => 1.0,
            },
        })
    }

    fn resonances(&self) -> Vec<f64> {
        match self {
            VdwReflectivity::PerfectReflector => Vec::new(),
            VdwReflectivity::TableMetal(m) | VdwReflectivity::Electrostatic(m) => m.resonances(),
        }
    }
}

/// `∫_0^∞ dξ α_iso(iξ) r(iξ)`.
pub fn alpha_xi_integral(p: &Polarizability, refl: &VdwReflectivity) -> Result<f64> {
    let mut centers: Vec<f64> = p.characteristic_frequency().into_iter().collect();
    centers.extend(refl.resonances());
    if centers.is_empty() {
        return Err(PolderError::Unsupported("frequency-independent polarizability has a divergent xi integral".into()));
    }
    let bps: Vec<f64> = centers.iter().flat_map(|c| [0.1 * c, *c, 10.0 * c]).collect();
    let tol = Tolerance::rel(1e-10);
    let r = try_integrate_breakpoints(
        |xi: f64| Ok::<f64, PolderError>(p.alpha_iso(Freq::Imag(xi))?.re * refl.factor(xi)?),
        0.0,
        &bps,
        None,
        &tol,
    )?;
    Ok(r.value)
}

/// Non-retarded asymptote `−(ħ/16π²ε_0L³)∫_0^∞ dξ α(iξ) r(iξ)`.
pub fn asymptote_vdw(p: &Polarizability, l: f64, refl: &VdwReflectivity) -> Result<f64> {
    check(l)?;
    Ok(-HBAR / (16.0 * PI * PI * EPS0 * l.powi(3)) * alpha_xi_integral(p, refl)?)
}

/// Distance `3c/(πω_0)` where the vdW and CP asymptotes of a two-level atom cross.
pub fn vdw_cp_crossover(omega_0: f64) -> f64 {
    3.0 * C / (PI * omega_0)
}

/// `k_BT Σ′_n ln[(1 − α_v g_xx)²(1 − α_v g_zz)]` for an isotropic damped oscillator.
pub fn free_energy_nonperturbative_with(
    osc: &Polarizability,
    geom: &HalfSpace,
    l: f64,
    temperature: f64,
    opts: &EquilibriumOptions,
) -> Result<f64> {
    let Polarizability::DampedOscillator { q, m, omega_0, gamma } = *osc else {
        return Err(PolderError::Unsupported("non-perturbative free energy needs a damped oscillator".into()));
    };
    check(l)?;
    check_t(temperature)?;
    if geom.material.is_vacuum() || q == 0.0 {
        return Ok(0.0);
    }
    let term = |x: f64| -> Result<f64> {
        let xi = matsubara_frequency(x, temperature);
        let a = damped_oscillator_alpha(q, m, omega_0, gamma, Freq::Imag(xi))?.re;
        let g = green_imag_axis(geom, l, xi, Flavor::Electric, &opts.tol)?;
        let (cx, cz) = (a * g.xx.re, a * g.zz.re);
        if !(cx < 1.0 && cz < 1.0) {
            return Err(PolderError::Unstable { n: x.round() as usize, value: 1.0 - cx.max(cz) });
        }
        Ok(2.0 * (-cx).ln_1p() + (-cz).ln_1p())
    };
    let n = direct_terms(structure_scale(osc, geom, l), temperature, opts.max_direct_terms);
    let sum = try_matsubara_sum_with_tail(term, temperature, &opts.matsubara, n)?;
    Ok(K_B * temperature * sum)
}

pub fn free_energy_nonperturbative(osc: &Polarizability, geom: &HalfSpace, l: f64, temperature: f64) -> Result<f64> {
    free_energy_nonperturbative_with(osc, geom, l, temperature, &EquilibriumOptions::default())
}

/// Largest `|α_v G_ii|` over the Matsubara frequencies up to `n_max`.
pub fn max_coupling(osc: &Polarizability, geom: &HalfSpace, l: f64, temperature: f64, n_max: usize) -> Result<f64> {
    let mut m: f64 = 0.0;
    for n in 0..=n_max {
        let xi = matsubara_frequency(n as f64, temperature);
        let a = osc.alpha_imag(xi)?;
        let g = green_imag_axis(geom, l, xi, flavor_of(osc), &Tolerance::rel(1e-8))?;
        m = m.max((a[0] * g.xx.re).abs()).max((a[2] * g.zz.re).abs());
    }
    Ok(m)
}

/// Selects which equilibrium free energy a force is taken from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Thermal {
    ZeroTemperature,
    Temperature(f64),
}

/// `F = −∂_L F(L)`; negative values attract toward the surface.
pub fn force_with(p: &Polarizability, geom: &HalfSpace, l: f64, thermal: Thermal, opts: &EquilibriumOptions) -> Result<f64> {
    check(l)?;
    if geom.material.is_vacuum() {
        return Ok(0.0);
    }
    let fine = opts.for_derivative();
    let d = match thermal {
        Thermal::ZeroTemperature => {
            try_derivative_central_positive(|u: f64| free_energy_zero_t_with(p, geom, u * l, &fine), 1.0, 10.0)?
        }
        Thermal::Temperature(t) => {
            check_t(t)?;
            // One summation split for all samples keeps the stencil smooth.
            let n = direct_terms(structure_scale(p, geom, l), t, opts.max_direct_terms);
            try_derivative_central_positive(|u: f64| matsubara_with(p, geom, u * l, t, &fine, n), 1.0, 10.0)?
        }
    };
    Ok(-d / l)
}

pub fn force(p: &Polarizability, geom: &HalfSpace, l: f64, thermal: Thermal) -> Result<f64> {
    force_with(p, geom, l, thermal, &EquilibriumOptions::default())
}

/// Free energy selected by `thermal`.
pub fn free_energy(p: &Polarizability, geom: &HalfSpace, l: f64, thermal: Thermal, opts: &EquilibriumOptions) -> Result<f64> {
    match thermal {
        Thermal::ZeroTemperature => free_energy_zero_t_with(p, geom, l, opts),
        Thermal::Temperature(t) => free_energy_matsubara_with(p, geom, l, t, opts),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    FreeEnergy,
    Force,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveMeta {
    pub atom: String,
    pub material: String,
    pub temperature: Option<f64>,
    pub kind: CurveKind,
}

/// Values on a strictly increasing distance grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialCurve {
    pub entries: Vec<(f64, f64)>,
    pub meta: CurveMeta,
}

impl PotentialCurve {
    pub fn new(entries: Vec<(f64, f64)>, meta: CurveMeta) -> Result<Self> {
        if entries.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return domain("curve distances must be strictly increasing");
        }
        if let Some((l, v)) = entries.iter().find(|(_, v)| !v.is_finite()) {
            return domain(format!("non-finite curve value {v} at L = {l:e}"));
        }
        Ok(PotentialCurve { entries, meta })
    }

    /// Evaluate `f` on each grid point.
    pub fn sample(ls: &[f64], meta: CurveMeta, mut f: impl FnMut(f64) -> Result<f64>) -> Result<Self> {
        let entries = ls.iter().map(|&l| Ok((l, f(l)?))).collect::<Result<Vec<_>>>()?;
        Self::new(entries, meta)
    }
}
