//! State-resolved free energies, including the resonant real-photon terms.

use crate::equilibrium::{free_energy_matsubara_with, free_energy_zero_t_with, EquilibriumOptions};
use crate::error::{domain, PolderError, Result};
use crate::green_planar::{green_real_axis, Flavor, GreenDiagonal, HalfSpace};
use crate::materials::{HBAR, K_B};
use crate::response::{AtomState, Polarizability, TransitionLine};
use crate::Complex;

/// Bose-Einstein occupation `1/(e^{ħω/k_BT} − 1)`, with `N(−ω) = −1 − N(ω)`.
pub fn occupation(omega: f64, temperature: f64) -> Result<f64> {
    if omega == 0.0 {
        return Err(PolderError::Pole("occupation number diverges at omega = 0".into()));
    }
    if !(temperature >= 0.0) {
        return domain(format!("temperature must be >= 0, got {temperature}"));
    }
    if temperature == 0.0 {
        return Ok(if omega > 0.0 { 0.0 } else { -1.0 });
    }
    let n = |w: f64| 1.0 / (HBAR * w / (K_B * temperature)).exp_m1();
    Ok(if omega > 0.0 { n(omega) } else { -1.0 - n(-omega) })
}

/// Line-weighted tensor element `d²(w_x + w_y) G_xx + d² w_z G_zz`.
fn line_projection(line: &TransitionLine, g: &GreenDiagonal) -> Complex {
    let w = line.axis_weights;
    (g.xx * (w[0] + w[1]) + g.zz * w[2]) * line.d_sq
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateFreeEnergy {
    pub non_resonant: f64,
    pub resonant: f64,
}

impl StateFreeEnergy {
    pub fn total(&self) -> f64 {
        self.non_resonant + self.resonant
    }
}

fn real_axis_green(geom: &HalfSpace, l: f64, line: &TransitionLine, opts: &EquilibriumOptions) -> Result<GreenDiagonal> {
    // Re 𝒢 is even in ω, so every line is evaluated at |ω_ba|.
    green_real_axis(geom, l, line.omega_ba.abs(), Flavor::Electric, &opts.tol)
}

/// Free energy of an atom prepared in `state`: Matsubara part plus `Σ_b N(ω_ba) d² Re 𝒢(L, ω_ba)`.
///
/// `temperature = 0` uses the imaginary-axis integral and `N → −θ(−ω)`.
pub fn free_energy_state_with(
    state: &AtomState,
    geom: &HalfSpace,
    l: f64,
    temperature: f64,
    opts: &EquilibriumOptions,
) -> Result<StateFreeEnergy> {
    let p = Polarizability::AtomLines(state.clone());
    let non_resonant = if temperature == 0.0 {
        free_energy_zero_t_with(&p, geom, l, opts)?
    } else {
        free_energy_matsubara_with(&p, geom, l, temperature, opts)?
    };
    let mut resonant = 0.0;
    for line in &state.lines {
        let n = occupation(line.omega_ba, temperature)?;
        if n == 0.0 {
            continue;
        }
        let g = real_axis_green(geom, l, line, opts)?;
        resonant += n * line_projection(line, &g).re;
    }
    Ok(StateFreeEnergy { non_resonant, resonant })
}

pub fn free_energy_state(state: &AtomState, geom: &HalfSpace, l: f64, temperature: f64) -> Result<StateFreeEnergy> {
    free_energy_state_with(state, geom, l, temperature, &EquilibriumOptions::default())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighTemperatureResonant {
    pub value: f64,
    /// `k_BT > 10 ħ|ω_ba|` for every line.
    pub valid: bool,
}

/// `(k_BT/ħ) Σ_b Re 𝒢^{ba}(L, |ω_ba|)/ω_ba` with signed `ω_ba`: upward lines add, downward lines subtract.
pub fn resonant_high_t(state: &AtomState, geom: &HalfSpace, l: f64, temperature: f64) -> Result<HighTemperatureResonant> {
    if !(temperature > 0.0) {
        return domain(format!("high-temperature form needs T > 0, got {temperature}"));
    }
    let opts = EquilibriumOptions::default();
    let kt = K_B * temperature;
    let mut sum = 0.0;
    let mut valid = true;
    for line in &state.lines {
        if line.omega_ba == 0.0 {
            return Err(PolderError::Pole("degenerate transition in the high-temperature form".into()));
        }
        valid &= kt > 10.0 * HBAR * line.omega_ba.abs();
        let g = real_axis_green(geom, l, line, &opts)?;
        sum += line_projection(line, &g).re / line.omega_ba;
    }
    Ok(HighTemperatureResonant { value: kt / HBAR * sum, valid })
}

/// Unnormalized decay-rate change `Σ_{b<a} d² Im 𝒢(L, ω_ab)`.
pub fn decay_rate_diagnostic(state: &AtomState, geom: &HalfSpace, l: f64) -> Result<f64> {
    let opts = EquilibriumOptions::default();
    let mut sum = 0.0;
    for line in state.lines.iter().filter(|l| l.omega_ba < 0.0) {
        let g = real_axis_green(geom, l, line, &opts)?;
        sum += line_projection(line, &g).im;
    }
    Ok(sum)
}
