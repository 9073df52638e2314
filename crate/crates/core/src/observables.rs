//! Experiment-facing quantities built on a distance-dependent potential.

use crate::error::{domain, PolderError, Result};
use crate::numerics::{try_derivative_central, try_integrate_finite};
use crate::materials::HBAR;
use crate::Tolerance;

/// Standard gravity in m/s².
pub const STANDARD_GRAVITY: f64 = 9.80665;

/// Normalized Thomas-Fermi column density `(15/16R)(1 − (z/R)²)²` on `|z| ≤ R`.
pub fn thomas_fermi_profile(r_z: f64, z: f64) -> f64 {
    if !(r_z > 0.0) || z.abs() > r_z {
        return 0.0;
    }
    let s = 1.0 - (z / r_z).powi(2);
    15.0 / (16.0 * r_z) * s * s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapConfig {
    pub omega_trap: f64,
    /// Thomas-Fermi radius along the surface normal.
    pub r_z: f64,
    pub mass: f64,
    /// Distance from the surface to the trap centre.
    pub l_center: f64,
    /// Oscillation amplitude used only for the nonlinearity flag; `0` skips it.
    pub amplitude: f64,
}

impl TrapConfig {
    pub fn new(omega_trap: f64, r_z: f64, mass: f64, l_center: f64) -> Result<Self> {
        TrapConfig { omega_trap, r_z, mass, l_center, amplitude: 0.0 }.validated()
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Result<Self> {
        self.amplitude = amplitude;
        self.validated()
    }

    fn validated(self) -> Result<Self> {
        if !(self.omega_trap > 0.0 && self.mass > 0.0) {
            return domain("trap frequency and mass must be positive");
        }
        if !(self.r_z > 0.0 && self.r_z < self.l_center) {
            return domain(format!("cloud radius {:e} must lie in (0, L_center = {:e})", self.r_z, self.l_center));
        }
        if !(self.amplitude >= 0.0 && self.amplitude < self.l_center) {
            return domain(format!("oscillation amplitude {:e} out of range", self.amplitude));
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapShift {
    /// `(ω_cm − ω_trap)/ω_trap`.
    pub gamma: f64,
    pub omega_cm: f64,
    /// Profile-averaged `∂²ℱ`.
    pub mean_curvature: f64,
    /// `|∂³ℱ|·amplitude ≥ ½|∂²ℱ|` at the trap centre.
    pub nonlinear: bool,
}

fn at(l: f64, e: PolderError) -> PolderError {
    PolderError::At { at: l, source: Box::new(e) }
}

/// `∂²ℱ(L)` by two nested central differences with independent step scales,
/// taken in the scaled variable `L/L0`.
pub fn second_derivative(potential: &mut impl FnMut(f64) -> Result<f64>, l: f64) -> Result<f64> {
    if !(l > 0.0) {
        return domain(format!("distance must be positive, got {l:e}"));
    }
    let mut outer = |s: f64| -> Result<f64> { try_derivative_central(|t: f64| potential(t * l), s, 10.0) };
    let d2 = try_derivative_central(&mut outer, 1.0, 13.0)?;
    Ok(d2 / (l * l))
}

/// Small-amplitude centre-of-mass frequency shift,
/// `ω_cm² = ω_trap² + (1/m) ∫ dz n₀(z) ∂²ℱ(L_center + z)`.
pub fn trap_shift(mut potential: impl FnMut(f64) -> Result<f64>, trap: &TrapConfig) -> Result<TrapShift> {
    let trap = trap.validated()?;
    let r = trap.r_z;
    let mut curvature = |l: f64| second_derivative(&mut potential, l).map_err(|e| at(l, e));
    let mean = try_integrate_finite(
        |z: f64| -> Result<f64> {
            let n = thomas_fermi_profile(r, z);
            if n == 0.0 {
                return Ok(0.0);
            }
            Ok(n * curvature(trap.l_center + z)?)
        },
        -r,
        r,
        &Tolerance::rel(1e-6),
    )?
    .value;
    let w2 = trap.omega_trap * trap.omega_trap + mean / trap.mass;
    if !(w2 > 0.0) {
        return domain(format!("cloud is not confined: omega_cm^2 = {w2:e}"));
    }
    let omega_cm = w2.sqrt();
    let nonlinear = if trap.amplitude > 0.0 {
        let a = trap.amplitude;
        let c0 = curvature(trap.l_center)?;
        let third = (curvature(trap.l_center + a)? - curvature(trap.l_center - a)?) / (2.0 * a);
        third.abs() * a >= 0.5 * c0.abs()
    } else {
        false
    };
    Ok(TrapShift { gamma: omega_cm / trap.omega_trap - 1.0, omega_cm, mean_curvature: mean, nonlinear })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPeriod {
    /// Period `ħq/|F̄|`; infinite when the mean force vanishes.
    pub period: f64,
    /// Mean of `−∂_L U` over the probe.
    pub mean_force: f64,
    /// `τ/τ_ref − 1` with `F̄` added to the reference force, when one is given.
    pub relative_shift: Option<f64>,
}

/// Bloch period `1/τ = F̄/(ħq)` with `F̄` the mean of `−∂_L U` over `[L − e/2, L + e/2]`.
///
/// The mean of a derivative is a difference quotient, so a finite extent needs
/// only the two edge values. `extent = 0` falls back to a central difference.
pub fn bloch_period(
    mut potential: impl FnMut(f64) -> Result<f64>,
    q_width: f64,
    l: f64,
    extent: f64,
    reference_force: Option<f64>,
) -> Result<BlochPeriod> {
    if !(q_width > 0.0) {
        return domain(format!("Brillouin-zone width must be positive, got {q_width:e}"));
    }
    if !(extent >= 0.0 && l - 0.5 * extent > 0.0) {
        return domain(format!("probe [{:e}, {:e}] must stay above the surface", l - 0.5 * extent, l + 0.5 * extent));
    }
    let mean_force = if extent > 0.0 {
        let (lo, hi) = (l - 0.5 * extent, l + 0.5 * extent);
        let (ulo, uhi) = (potential(lo).map_err(|e| at(lo, e))?, potential(hi).map_err(|e| at(hi, e))?);
        -(uhi - ulo) / extent
    } else {
        -try_derivative_central(|s: f64| potential(s * l), 1.0, 10.0).map_err(|e| at(l, e))? / l
    };
    let period = |f: f64| if f == 0.0 { f64::INFINITY } else { HBAR * q_width / f.abs() };
    let relative_shift = reference_force.map(|f_ref| {
        if f_ref == 0.0 {
            f64::INFINITY
        } else {
            period(f_ref + mean_force) / period(f_ref) - 1.0
        }
    });
    Ok(BlochPeriod { period: period(mean_force), mean_force, relative_shift })
}

/// Model potential `−C4/((d + a) d³)` interpolating between `d⁻³` and `d⁻⁴`.
pub fn shimizu_potential(c4: f64, a: f64, d: f64) -> Result<f64> {
    if !(d > 0.0 && a >= 0.0) {
        return domain(format!("need d > 0 and a >= 0, got d = {d:e}, a = {a:e}"));
    }
    Ok(-c4 / ((d + a) * d.powi(3)))
}
