//! Surface and environment at different temperatures.
//!
//! The kernel `S_ij` is the volume integral of `Im ε · G*G` over the emitting
//! half-space. It is evaluated in plane waves: the transmitted amplitude of each
//! transverse wavenumber `k` is absorbed with depth as `e^{2 Im(w1) z}`, so the
//! depth integral is `1/(2 Im w1)`. Propagating waves (`k < ω/c`) give an
//! `L`-independent part, evanescent waves the distance dependence.

use std::f64::consts::PI;

use crate::equilibrium::{force_with, EquilibriumOptions, Thermal};
use crate::error::{domain, PolderError, Result};
use crate::green_planar::HalfSpace;
use crate::materials::{DielectricModel, MaybeInfinite, C, EPS0, HBAR, K_B};
use crate::numerics::{feature_breakpoints, try_integrate_breakpoints, try_integrate_finite, CPair};
use crate::atom_state::occupation;
use crate::response::{Freq, Polarizability};
use crate::{Complex, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalConditions {
    pub t_s: f64,
    pub t_e: f64,
    /// Internal atom temperature; only `0` is supported.
    pub t_a: f64,
}

impl ThermalConditions {
    pub fn new(t_s: f64, t_e: f64) -> Result<Self> {
        for (name, t) in [("T_S", t_s), ("T_E", t_e)] {
            if !(t >= 0.0 && t.is_finite()) {
                return domain(format!("{name} must be finite and >= 0, got {t}"));
            }
        }
        Ok(ThermalConditions { t_s, t_e, t_a: 0.0 })
    }

    pub fn is_equilibrium(&self) -> bool {
        self.t_s == self.t_e
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct STensorDiag {
    pub s_xx: f64,
    pub s_zz: f64,
    pub distance: f64,
    pub omega: f64,
}

impl STensorDiag {
    pub fn trace(&self) -> f64 {
        2.0 * self.s_xx + self.s_zz
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NeqOptions {
    /// Transverse-wavenumber quadrature.
    pub k_tol: Tolerance,
    /// Frequency quadrature.
    pub omega_tol: Tolerance,
}

impl Default for NeqOptions {
    fn default() -> Self {
        NeqOptions { k_tol: Tolerance::rel(1e-9), omega_tol: Tolerance::rel(1e-7) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sector {
    Propagating,
    Evanescent,
}

/// Extra factor under the `k` integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Weight {
    One,
    /// `∂_L` of the evanescent decay, `−2κ`.
    DistanceDerivative,
    /// Phase gradient `Re w2` of the propagating waves.
    PhaseGradient,
}

/// Root with `Im ≥ 0`.
fn upper_sqrt(z: Complex) -> Complex {
    let s = z.sqrt();
    if s.im < 0.0 {
        -s
    } else {
        s
    }
}

/// `(xx, zz)` integrand per `k dk`, without the `Im ε k0⁴/(16π²ε0)` prefactor.
fn plane_wave(eps: Complex, k0: f64, k2: f64, w2: Complex, l: f64) -> CPair<f64> {
    let k02 = k0 * k0;
    let w1 = upper_sqrt(eps * k02 - k2);
    let ts = w1 * 2.0 / (w1 + w2);
    let tp = eps.sqrt() * w1 * 2.0 / (w1 + eps * w2);
    let p1 = (k2 + w1.norm_sqr()) / (eps.norm() * k02);
    let w = (-2.0 * w2.im * l).exp() / (2.0 * w1.norm_sqr() * w1.im);
    let xx = PI * w * (ts.norm_sqr() + tp.norm_sqr() * p1 * w2.norm_sqr() / k02);
    let zz = 2.0 * PI * w * tp.norm_sqr() * p1 * k2 / k02;
    CPair(Complex::new(xx, 0.0), Complex::new(zz, 0.0))
}

fn lossy_eps(material: &DielectricModel, omega: f64) -> Result<Option<Complex>> {
    if material.is_vacuum() {
        return Ok(None);
    }
    if let DielectricModel::PerfectReflector = material {
        return Err(PolderError::Unsupported("a perfect reflector does not emit".into()));
    }
    let eps = material.permittivity_real_axis(omega)?;
    if !(eps.im > 0.0) {
        return Err(PolderError::Domain(format!(
            "S-tensor diverges for a lossless material (Im eps = {:e} at omega = {omega:e})",
            eps.im
        )));
    }
    Ok(Some(eps))
}

fn sector(eps: Complex, l: f64, omega: f64, sector: Sector, weight: Weight, tol: &Tolerance) -> Result<(f64, f64)> {
    let k0 = omega / C;
    let k02 = k0 * k0;
    let pref = eps.im * k02 * k02 / (16.0 * PI * PI * EPS0);
    let r = match sector {
        Sector::Propagating => {
            let f = |q: f64| -> Result<CPair<f64>> {
                let g = match weight {
                    Weight::One => 1.0,
                    Weight::PhaseGradient => q,
                    Weight::DistanceDerivative => 0.0,
                };
                Ok(plane_wave(eps, k0, k02 - q * q, Complex::new(q, 0.0), l) * (q * g))
            };
            try_integrate_finite(f, 0.0, k0, tol)?
        }
        Sector::Evanescent => {
            let f = |kappa: f64| -> Result<CPair<f64>> {
                let g = match weight {
                    Weight::One => 1.0,
                    Weight::DistanceDerivative => -2.0 * kappa,
                    Weight::PhaseGradient => 0.0,
                };
                Ok(plane_wave(eps, k0, k02 + kappa * kappa, Complex::new(0.0, kappa), l) * (kappa * g))
            };
            let mut bps: Vec<f64> = [1.0, 4.0, 16.0].iter().map(|m| m / (2.0 * l)).collect();
            // Medium light line and the surface mode.
            bps.push(k0 * (eps - 1.0).norm().sqrt());
            bps.push(k0 / (eps + 1.0).norm().sqrt());
            try_integrate_breakpoints(f, 0.0, &bps, None, tol)?
        }
    };
    Ok((pref * r.value.0.re, pref * r.value.1.re))
}

fn check(l: f64, omega: f64) -> Result<()> {
    if !(l > 0.0 && l.is_finite()) {
        return domain(format!("distance must be positive, got {l:e}"));
    }
    if !(omega > 0.0 && omega.is_finite()) {
        return domain(format!("frequency must be positive, got {omega:e}"));
    }
    Ok(())
}

fn s_parts(geom: &HalfSpace, l: f64, omega: f64, sectors: &[Sector], weight: Weight, tol: &Tolerance) -> Result<(f64, f64)> {
    check(l, omega)?;
    let Some(eps) = lossy_eps(&geom.material, omega)? else {
        return Ok((0.0, 0.0));
    };
    let mut acc = (0.0, 0.0);
    for &s in sectors {
        let (xx, zz) = sector(eps, l, omega, s, weight, tol)?;
        acc = (acc.0 + xx, acc.1 + zz);
    }
    Ok(acc)
}

fn diag(xx_zz: (f64, f64), l: f64, omega: f64) -> STensorDiag {
    STensorDiag { s_xx: xx_zz.0, s_zz: xx_zz.1, distance: l, omega }
}

/// Full kernel `S_ii(r, r, ω)` at height `L`.
pub fn s_tensor_with(geom: &HalfSpace, l: f64, omega: f64, tol: &Tolerance) -> Result<STensorDiag> {
    let s = s_parts(geom, l, omega, &[Sector::Propagating, Sector::Evanescent], Weight::One, tol)?;
    Ok(diag(s, l, omega))
}

pub fn s_tensor(geom: &HalfSpace, l: f64, omega: f64) -> Result<STensorDiag> {
    s_tensor_with(geom, l, omega, &NeqOptions::default().k_tol)
}

/// Evanescent part of the kernel, the only part that depends on `L`.
pub fn s_tensor_evanescent(geom: &HalfSpace, l: f64, omega: f64, tol: &Tolerance) -> Result<STensorDiag> {
    let s = s_parts(geom, l, omega, &[Sector::Evanescent], Weight::One, tol)?;
    Ok(diag(s, l, omega))
}

/// Frequency integral `∫₀^∞ dω/2π 2ħN(ω, T) f(ω)` with the thermal window cut at `80 k_BT/ħ`.
///
/// `2ħN` is the Rytov source spectrum per unit `Im ε0ε`. With it a black half-space
/// radiates exactly half the Planck field energy.
fn thermal_integral(
    temperature: f64,
    bps: &mut Vec<f64>,
    tol: &Tolerance,
    mut f: impl FnMut(f64) -> Result<f64>,
) -> Result<f64> {
    let wt = K_B * temperature / HBAR;
    bps.extend([0.1, 0.3, 1.0, 3.0, 10.0, 30.0].iter().map(|m| m * wt));
    let upper = 80.0 * wt;
    let g = |omega: f64| -> Result<f64> {
        if omega == 0.0 {
            return Ok(0.0);
        }
        let n = occupation(omega, temperature)?;
        if n == 0.0 {
            return Ok(0.0);
        }
        Ok(2.0 * HBAR * n * f(omega)? / (2.0 * PI))
    };
    Ok(try_integrate_breakpoints(g, 0.0, bps, Some(upper), tol)?.value)
}

fn distance_breakpoints(geom: &HalfSpace, l: f64) -> Vec<f64> {
    let mut bps: Vec<f64> = [0.1, 1.0, 10.0].iter().map(|m| m * C / l).collect();
    bps.extend(feature_breakpoints(&material_lines(&geom.material)));
    bps
}

fn material_lines(material: &DielectricModel) -> Vec<(f64, f64)> {
    match material {
        DielectricModel::Lorentz { lines, .. } => {
            lines.iter().map(|l| (l.omega_t, l.gamma.max(1e-9 * l.omega_t))).collect()
        }
        DielectricModel::Drude { gamma, .. } => material.resonances().into_iter().map(|w| (w, gamma.max(1e-9 * w))).collect(),
        _ => Vec::new(),
    }
}

fn check_alpha(alpha0: f64, l: f64, temperature: f64) -> Result<()> {
    if !alpha0.is_finite() {
        return domain("static polarizability must be finite");
    }
    if !(l > 0.0) {
        return domain(format!("distance must be positive, got {l:e}"));
    }
    if !(temperature >= 0.0 && temperature.is_finite()) {
        return domain(format!("temperature must be finite and >= 0, got {temperature}"));
    }
    Ok(())
}

/// Dipole potential `−α0 ∫ dω/2π 2ħN(ω, T_S) (2 s_xx + s_zz)` of a surface at `T_S`,
/// environment at zero temperature. Only the evanescent kernel enters; see
/// [`neq_potential_offset`] for the constant propagating part.
pub fn neq_dipole_potential_with(alpha0: f64, geom: &HalfSpace, l: f64, t_s: f64, opts: &NeqOptions) -> Result<f64> {
    check_alpha(alpha0, l, t_s)?;
    if t_s == 0.0 || alpha0 == 0.0 || geom.material.is_vacuum() {
        return Ok(0.0);
    }
    let mut bps = distance_breakpoints(geom, l);
    let tr = thermal_integral(t_s, &mut bps, &opts.omega_tol, |w| {
        let (xx, zz) = s_parts(geom, l, w, &[Sector::Evanescent], Weight::One, &opts.k_tol)?;
        Ok(2.0 * xx + zz)
    })?;
    Ok(-alpha0 * tr)
}

pub fn neq_dipole_potential(alpha0: f64, geom: &HalfSpace, l: f64, t_s: f64) -> Result<f64> {
    neq_dipole_potential_with(alpha0, geom, l, t_s, &NeqOptions::default())
}

/// Distance-independent potential of the propagating waves emitted at `T_S`.
pub fn neq_potential_offset(alpha0: f64, geom: &HalfSpace, t_s: f64, opts: &NeqOptions) -> Result<f64> {
    check_alpha(alpha0, 1.0, t_s)?;
    if t_s == 0.0 || alpha0 == 0.0 || geom.material.is_vacuum() {
        return Ok(0.0);
    }
    let mut bps = feature_breakpoints(&material_lines(&geom.material));
    let tr = thermal_integral(t_s, &mut bps, &opts.omega_tol, |w| {
        let (xx, zz) = s_parts(geom, 1.0, w, &[Sector::Propagating], Weight::One, &opts.k_tol)?;
        Ok(2.0 * xx + zz)
    })?;
    Ok(-alpha0 * tr)
}

/// `−∂_L` of [`neq_dipole_potential`], differentiated under the integral.
pub fn neq_force_with(alpha0: f64, geom: &HalfSpace, l: f64, t_s: f64, opts: &NeqOptions) -> Result<f64> {
    check_alpha(alpha0, l, t_s)?;
    if t_s == 0.0 || alpha0 == 0.0 || geom.material.is_vacuum() {
        return Ok(0.0);
    }
    let mut bps = distance_breakpoints(geom, l);
    let d = thermal_integral(t_s, &mut bps, &opts.omega_tol, |w| {
        let (xx, zz) = s_parts(geom, l, w, &[Sector::Evanescent], Weight::DistanceDerivative, &opts.k_tol)?;
        Ok(2.0 * xx + zz)
    })?;
    Ok(alpha0 * d)
}

pub fn neq_force(alpha0: f64, geom: &HalfSpace, l: f64, t_s: f64) -> Result<f64> {
    neq_force_with(alpha0, geom, l, t_s, &NeqOptions::default())
}

/// `F_neq(T_S) + [F_eq(T_E) − F_neq(T_E)]` for a ground-state atom with static polarizability.
pub fn neq_force_total_with(
    alpha0: f64,
    geom: &HalfSpace,
    l: f64,
    cond: ThermalConditions,
    opts: &NeqOptions,
    eq: &EquilibriumOptions,
) -> Result<f64> {
    if cond.t_a != 0.0 {
        return Err(PolderError::Unsupported("only an atom at T_A = 0 is supported".into()));
    }
    let thermal = if cond.t_e == 0.0 { Thermal::ZeroTemperature } else { Thermal::Temperature(cond.t_e) };
    let f_eq = force_with(&Polarizability::Static { alpha0 }, geom, l, thermal, eq)?;
    let hot = neq_force_with(alpha0, geom, l, cond.t_s, opts)?;
    let cold = neq_force_with(alpha0, geom, l, cond.t_e, opts)?;
    Ok(f_eq + (hot - cold))
}

pub fn neq_force_total(alpha0: f64, geom: &HalfSpace, l: f64, cond: ThermalConditions) -> Result<f64> {
    neq_force_total_with(alpha0, geom, l, cond, &NeqOptions::default(), &EquilibriumOptions::default())
}

/// Large-distance potential over a dielectric,
/// `−(π/12) α̃0 (ε0+1)/√(ε0−1) · k_B²(T_S² − T_E²)/(ħcL²)` with `α̃0 = α0/(4πε0)`.
pub fn neq_asymptote(alpha0: f64, eps_static: f64, l: f64, t_s: f64, t_e: f64) -> Result<f64> {
    if !(eps_static > 1.0 && eps_static.is_finite()) {
        return domain(format!("asymptote needs a finite static permittivity > 1, got {eps_static}"));
    }
    check_alpha(alpha0, l, t_s)?;
    check_alpha(alpha0, l, t_e)?;
    let shape = (eps_static + 1.0) / (eps_static - 1.0).sqrt();
    Ok(-PI / 12.0 * alpha0 / (4.0 * PI * EPS0) * shape * K_B * K_B * (t_s * t_s - t_e * t_e) / (HBAR * C * l * l))
}

/// [`neq_asymptote`] with `ε(0)` taken from the material; metals are unsupported.
pub fn neq_asymptote_for(alpha0: f64, material: &DielectricModel, l: f64, t_s: f64, t_e: f64) -> Result<f64> {
    match material.static_permittivity() {
        MaybeInfinite::Finite(e) => neq_asymptote(alpha0, e, l, t_s, t_e),
        MaybeInfinite::Infinite => Err(PolderError::Unsupported("non-equilibrium asymptote for a conductor".into())),
    }
}

fn electric_alpha(p: &Polarizability, omega: f64) -> Result<[f64; 3]> {
    if p.is_magnetic() {
        return Err(PolderError::Unsupported("radiation pressure on a magnetic dipole".into()));
    }
    let a = p.alpha(Freq::Real(omega))?;
    Ok([a[0].im, a[1].im, a[2].im])
}

/// Radiation-pressure spectral density at `ω`, `2 · 2ħN(ω,T_S) Σ_i Im α_ii Im ∂₂S_ii`.
///
/// The phase gradient exists only for propagating waves, so the value does not
/// depend on `L`; the argument is kept for symmetry with the dipole term.
/// Positive values push away from the surface. Integrate with `dω/2π`.
pub fn radiation_pressure_spectrum(p: &Polarizability, geom: &HalfSpace, l: f64, omega: f64, t_s: f64) -> Result<f64> {
    check(l, omega)?;
    let im = electric_alpha(p, omega)?;
    let n = occupation(omega, t_s)?;
    if n == 0.0 || im.iter().all(|&a| a == 0.0) {
        return Ok(0.0);
    }
    let (xx, zz) = s_parts(geom, l, omega, &[Sector::Propagating], Weight::PhaseGradient, &NeqOptions::default().k_tol)?;
    Ok(4.0 * HBAR * n * ((im[0] + im[1]) * xx + im[2] * zz))
}

/// Total radiation-pressure force `∫₀^∞ dω/2π` of the spectrum.
pub fn radiation_pressure_force(p: &Polarizability, geom: &HalfSpace, t_s: f64, opts: &NeqOptions) -> Result<f64> {
    if !(t_s >= 0.0) {
        return domain(format!("temperature must be >= 0, got {t_s}"));
    }
    if t_s == 0.0 || geom.material.is_vacuum() {
        return Ok(0.0);
    }
    let mut bps = feature_breakpoints(&p.spectral_features());
    bps.extend(feature_breakpoints(&material_lines(&geom.material)));
    thermal_integral(t_s, &mut bps, &opts.omega_tol, |w| {
        let im = electric_alpha(p, w)?;
        let (xx, zz) = s_parts(geom, 1.0, w, &[Sector::Propagating], Weight::PhaseGradient, &opts.k_tol)?;
        Ok(2.0 * ((im[0] + im[1]) * xx + im[2] * zz))
    })
}
