//! Dielectric response models and derived length scales.

use std::f64::consts::PI;

use crate::error::{domain, PolderError, Result};
use crate::Complex;

/// CODATA 2018 values, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub c: f64,
    pub k_b: f64,
    pub eps0: f64,
    pub mu0: f64,
    pub elementary_charge: f64,
    pub fine_structure: f64,
}

pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    hbar: 1.054_571_817e-34,
    c: 299_792_458.0,
    k_b: 1.380_649e-23,
    eps0: 8.854_187_812_8e-12,
    mu0: 1.256_637_062_12e-6,
    elementary_charge: 1.602_176_634e-19,
    fine_structure: 7.297_352_569_3e-3,
};

pub const HBAR: f64 = CODATA_2018.hbar;
pub const C: f64 = CODATA_2018.c;
pub const K_B: f64 = CODATA_2018.k_b;
pub const EPS0: f64 = CODATA_2018.eps0;
pub const MU0: f64 = CODATA_2018.mu0;
pub const ELEMENTARY_CHARGE: f64 = CODATA_2018.elementary_charge;
pub const FINE_STRUCTURE: f64 = CODATA_2018.fine_structure;

/// A real quantity that may be unbounded (Drude static permittivity, lossless skin depth).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaybeInfinite {
    Finite(f64),
    Infinite,
}

impl MaybeInfinite {
    pub fn finite(self) -> Option<f64> {
        match self {
            MaybeInfinite::Finite(x) => Some(x),
            MaybeInfinite::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, MaybeInfinite::Infinite)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzLine {
    pub strength: f64,
    pub omega_t: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DielectricModel {
    Drude { omega_p: f64, gamma: f64 },
    Lorentz { eps_inf: f64, lines: Vec<LorentzLine> },
    Constant { eps: f64 },
    Vacuum,
    /// Formal `ε → ∞`: `r_TE = −1`, `r_TM = +1` at every frequency.
    PerfectReflector,
}

impl DielectricModel {
    pub fn drude(omega_p: f64, gamma: f64) -> Result<Self> {
        let m = DielectricModel::Drude { omega_p, gamma };
        m.validate()?;
        Ok(m)
    }

    pub fn lorentz(eps_inf: f64, lines: Vec<LorentzLine>) -> Result<Self> {
        let m = DielectricModel::Lorentz { eps_inf, lines };
        m.validate()?;
        Ok(m)
    }

    pub fn constant(eps: f64) -> Result<Self> {
        let m = DielectricModel::Constant { eps };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DielectricModel::Drude { omega_p, gamma } => {
                if !(*omega_p > 0.0 && *gamma > 0.0) {
                    return domain(format!("Drude needs omega_p > 0 and gamma > 0, got {omega_p:e}, {gamma:e}"));
                }
            }
            DielectricModel::Lorentz { eps_inf, lines } => {
                if !(*eps_inf >= 1.0) {
                    return domain(format!("Lorentz eps_inf must be >= 1, got {eps_inf}"));
                }
                for l in lines {
                    if !(l.strength > 0.0 && l.omega_t > 0.0 && l.gamma >= 0.0) {
                        return domain(format!("invalid Lorentz line {l:?}"));
                    }
                }
            }
            DielectricModel::Constant { eps } => {
                if !(*eps >= 1.0) || !eps.is_finite() {
                    return domain(format!("constant permittivity must be finite and >= 1, got {eps}"));
                }
            }
            DielectricModel::Vacuum | DielectricModel::PerfectReflector => {}
        }
        Ok(())
    }

    pub fn is_vacuum(&self) -> bool {
        match self {
            DielectricModel::Vacuum => true,
            DielectricModel::Constant { eps } => *eps == 1.0,
            DielectricModel::Lorentz { eps_inf, lines } => *eps_inf == 1.0 && lines.is_empty(),
            _ => false,
        }
    }

    /// `ε(ω)` for real `ω > 0`.
    pub fn permittivity_real_axis(&self, omega: f64) -> Result<Complex> {
        if !(omega > 0.0) {
            return domain(format!("real-axis permittivity needs omega > 0, got {omega:e}"));
        }
        Ok(match self {
            DielectricModel::Drude { omega_p, gamma } => {
                Complex::new(1.0, 0.0) - omega_p * omega_p / (omega * Complex::new(omega, *gamma))
            }
            DielectricModel::Lorentz { eps_inf, lines } => lines.iter().fold(Complex::new(*eps_inf, 0.0), |acc, l| {
                let wt2 = l.omega_t * l.omega_t;
                acc + l.strength * wt2 / Complex::new(wt2 - omega * omega, -l.gamma * omega)
            }),
            DielectricModel::Constant { eps } => Complex::new(*eps, 0.0),
            DielectricModel::Vacuum => Complex::new(1.0, 0.0),
            DielectricModel::PerfectReflector => {
                return Err(PolderError::Unsupported("perfect reflector has no finite permittivity".into()))
            }
        })
    }

    /// `ε(iξ)` for `ξ ≥ 0`, real and ≥ 1.
    pub fn permittivity_imag_axis(&self, xi: f64) -> Result<MaybeInfinite> {
        if !(xi >= 0.0) {
            return domain(format!("imaginary-axis permittivity needs xi >= 0, got {xi:e}"));
        }
        Ok(match self {
            DielectricModel::Drude { omega_p, gamma } => {
                if xi == 0.0 {
                    MaybeInfinite::Infinite
                } else {
                    MaybeInfinite::Finite(1.0 + omega_p * omega_p / (xi * (xi + gamma)))
                }
            }
            DielectricModel::Lorentz { eps_inf, lines } => MaybeInfinite::Finite(lines.iter().fold(*eps_inf, |acc, l| {
                let wt2 = l.omega_t * l.omega_t;
                acc + l.strength * wt2 / (wt2 + xi * xi + l.gamma * xi)
            })),
            DielectricModel::Constant { eps } => MaybeInfinite::Finite(*eps),
            DielectricModel::Vacuum => MaybeInfinite::Finite(1.0),
            DielectricModel::PerfectReflector => MaybeInfinite::Infinite,
        })
    }

    pub fn static_permittivity(&self) -> MaybeInfinite {
        self.permittivity_imag_axis(0.0).expect("xi = 0 is in the domain")
    }

    /// `δ_ω = c/(ω Im√ε(ω))`; infinite for lossless media.
    pub fn skin_depth(&self, omega: f64) -> Result<MaybeInfinite> {
        if let DielectricModel::PerfectReflector = self {
            return Ok(MaybeInfinite::Finite(0.0));
        }
        let n = self.permittivity_real_axis(omega)?.sqrt();
        if n.im <= 0.0 {
            return Ok(MaybeInfinite::Infinite);
        }
        Ok(MaybeInfinite::Finite(C / (omega * n.im)))
    }

    pub fn plasma_frequency(&self) -> Result<f64> {
        match self {
            DielectricModel::Drude { omega_p, .. } => Ok(*omega_p),
            _ => Err(PolderError::Unsupported("plasma frequency is defined for the Drude model only".into())),
        }
    }

    /// `λ_p = 2πc/ω_p`.
    pub fn plasma_wavelength(&self) -> Result<f64> {
        Ok(2.0 * PI * C / self.plasma_frequency()?)
    }

    /// Non-retarded surface plasmon `ω_s = ω_p/√2`.
    pub fn surface_plasmon_frequency(&self) -> Result<f64> {
        Ok(self.plasma_frequency()? / 2f64.sqrt())
    }

    /// Magnetic diffusion constant `D = γc²/ω_p²`.
    pub fn diffusion_constant(&self) -> Result<f64> {
        match self {
            DielectricModel::Drude { omega_p, gamma } => Ok(gamma * C * C / (omega_p * omega_p)),
            _ => Err(PolderError::Unsupported("diffusion constant is defined for the Drude model only".into())),
        }
    }

    /// Frequencies where `ε(ω)` has structure; used as quadrature breakpoints.
    pub fn resonances(&self) -> Vec<f64> {
        match self {
            DielectricModel::Drude { omega_p, gamma } => vec![*gamma, omega_p / 3f64.sqrt(), omega_p / 2f64.sqrt(), *omega_p],
            DielectricModel::Lorentz { lines, .. } => lines.iter().map(|l| l.omega_t).collect(),
            _ => Vec::new(),
        }
    }
}

/// Drude gold: `ω_p = 1.37e16 rad/s`, `γ = 4.06e13 rad/s` (skin depth ≈ 0.79 μm at 10 GHz).
pub fn gold() -> DielectricModel {
    DielectricModel::Drude { omega_p: 1.37e16, gamma: 4.06e13 }
}

/// Illustrative two-line fused silica, `ε(0) ≈ 3.8`, `ε` ≈ 2.1 in the visible.
pub fn fused_silica() -> DielectricModel {
    DielectricModel::Lorentz {
        eps_inf: 1.0,
        lines: vec![
            LorentzLine { strength: 1.1, omega_t: 2.0e16, gamma: 1.0e14 },
            LorentzLine { strength: 1.7, omega_t: 2.0e14, gamma: 1.0e13 },
        ],
    }
}

/// Illustrative two-line sapphire, `ε(0) ≈ 9.5`.
pub fn sapphire() -> DielectricModel {
    DielectricModel::Lorentz {
        eps_inf: 1.0,
        lines: vec![
            LorentzLine { strength: 2.1, omega_t: 2.0e16, gamma: 1.0e14 },
            LorentzLine { strength: 6.4, omega_t: 1.0e14, gamma: 2.0e12 },
        ],
    }
}

pub fn preset(name: &str) -> Option<DielectricModel> {
    match name {
        "gold" => Some(gold()),
        "silica" | "fused-silica" => Some(fused_silica()),
        "sapphire" => Some(sapphire()),
        "vacuum" => Some(DielectricModel::Vacuum),
        "perfect" | "perfect-reflector" => Some(DielectricModel::PerfectReflector),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constants_consistent() {
        let alpha = ELEMENTARY_CHARGE.powi(2) / (4.0 * PI * EPS0 * HBAR * C);
        assert!((alpha / FINE_STRUCTURE - 1.0).abs() < 1e-9);
        assert!((1.0 / FINE_STRUCTURE - 137.036).abs() < 1e-3);
        assert!((EPS0 * MU0 * C * C - 1.0).abs() < 1e-9);
    }

    #[test]
    fn real_axis_examples() {
        assert_eq!(DielectricModel::Vacuum.permittivity_real_axis(3.0).unwrap(), Complex::new(1.0, 0.0));
        let d = DielectricModel::drude(1e16, 1e13).unwrap();
        let e = d.permittivity_real_axis(1e16).unwrap();
        let exact = Complex::new(1.0, 0.0) - 1.0 / Complex::new(1.0, 1e-3);
        assert!((e - exact).norm() < 1e-15);
        assert!((e.re - 1e-6).abs() < 1e-9 && (e.im - 1e-3).abs() < 1e-8);
        let far = d.permittivity_real_axis(1e22).unwrap();
        assert!((far - 1.0).norm() < 1e-11);
        assert!(d.permittivity_real_axis(0.0).is_err());
    }

    #[test]
    fn imag_axis_examples() {
        let d = DielectricModel::drude(1e16, 1e13).unwrap();
        let v = d.permittivity_imag_axis(1e15).unwrap().finite().unwrap();
        assert!((v - (1.0 + 1e32 / (1e15 * 1.01e15))).abs() < 1e-12);
        assert!((v - 100.0099).abs() < 1e-3);
        assert_eq!(DielectricModel::constant(4.0).unwrap().permittivity_imag_axis(7.0).unwrap(), MaybeInfinite::Finite(4.0));
        assert!(d.permittivity_imag_axis(0.0).unwrap().is_infinite());
        let big = d.permittivity_imag_axis(1e25).unwrap().finite().unwrap();
        assert!((big - 1.0).abs() < 1e-15);
    }

    #[test]
    fn skin_depth_gold() {
        let g = gold();
        let w = 2.0 * PI * 1e10;
        let d = g.skin_depth(w).unwrap().finite().unwrap();
        assert!((d / 0.79e-6 - 1.0).abs() < 0.05, "{d}");
        let diffusive = (2.0 * g.diffusion_constant().unwrap() / w).sqrt();
        assert!((d / diffusive - 1.0).abs() < 1e-2);
        let d4 = g.skin_depth(4.0 * w).unwrap().finite().unwrap();
        assert!((d4 / d - 0.5).abs() < 0.01 * 0.5);
        assert!(DielectricModel::constant(4.0).unwrap().skin_depth(w).unwrap().is_infinite());
    }

    #[test]
    fn plasma_wavelength_examples() {
        let lp = gold().plasma_wavelength().unwrap();
        assert!((lp - 2.0 * PI * C / 1.37e16).abs() < 1e-20);
        assert!((lp / 137.5e-9 - 1.0).abs() < 0.01);
        let exact = DielectricModel::drude(2.0 * PI * C / 1e-7, 1.0).unwrap();
        assert!((exact.plasma_wavelength().unwrap() - 1e-7).abs() < 1e-20);
        let doubled = DielectricModel::drude(2.0 * 1.37e16, 4.06e13).unwrap();
        assert!((doubled.plasma_wavelength().unwrap() * 2.0 / lp - 1.0).abs() < 1e-14);
        assert!(fused_silica().plasma_wavelength().is_err());
    }

    #[test]
    fn static_examples() {
        assert_eq!(DielectricModel::constant(2.0).unwrap().static_permittivity(), MaybeInfinite::Finite(2.0));
        let l = DielectricModel::lorentz(1.0, vec![LorentzLine { strength: 3.0, omega_t: 1e14, gamma: 1e12 }]).unwrap();
        assert_eq!(l.static_permittivity(), MaybeInfinite::Finite(4.0));
        assert!(gold().static_permittivity().is_infinite());
        for m in [fused_silica(), sapphire()] {
            let e0 = m.static_permittivity().finite().unwrap();
            assert!((2.0..=10.0).contains(&e0), "{e0}");
        }
    }

    #[test]
    fn validation() {
        assert!(DielectricModel::drude(-1.0, 1.0).is_err());
        assert!(DielectricModel::constant(0.5).is_err());
        assert!(DielectricModel::lorentz(1.0, vec![LorentzLine { strength: -1.0, omega_t: 1.0, gamma: 0.0 }]).is_err());
    }

    fn models() -> impl Strategy<Value = DielectricModel> {
        prop_oneof![
            (1e14..1e17f64, 1e11..1e15f64).prop_map(|(omega_p, gamma)| DielectricModel::Drude { omega_p, gamma }),
            (1.0..3.0f64, 0.1..5.0f64, 1e13..1e16f64, 0.0..1e14f64).prop_map(|(eps_inf, strength, omega_t, gamma)| {
                DielectricModel::Lorentz { eps_inf, lines: vec![LorentzLine { strength, omega_t, gamma }] }
            }),
            (1.0..20.0f64).prop_map(|eps| DielectricModel::Constant { eps }),
        ]
    }

    proptest! {
        #[test]
        fn imag_axis_real_ge_one_and_nonincreasing(m in models(), xi in 1e10..1e18f64, f in 1.0..10.0f64) {
            let a = m.permittivity_imag_axis(xi).unwrap().finite().unwrap();
            let b = m.permittivity_imag_axis(xi * f).unwrap().finite().unwrap();
            prop_assert!(a >= 1.0);
            prop_assert!(b <= a * (1.0 + 1e-15));
        }

        #[test]
        fn passivity(m in models(), omega in 1e10..1e18f64) {
            prop_assert!(m.permittivity_real_axis(omega).unwrap().im >= 0.0);
        }

        #[test]
        fn drude_gamma_dependence_vanishes(omega_p in 1e15..1e17f64, ratio in 10.0..1e4f64) {
            let omega = 1e15f64;
            let gamma = omega / ratio;
            let damped = DielectricModel::Drude { omega_p, gamma }.permittivity_real_axis(omega).unwrap();
            let lossless_re = 1.0 - omega_p * omega_p / (omega * omega);
            prop_assert!(((damped.re - lossless_re) / (omega_p * omega_p / (omega * omega))).abs() <= 2.0 * (gamma / omega).powi(2));
            prop_assert!((damped.im / (omega_p * omega_p / (omega * omega))) <= 1.01 * gamma / omega);
        }
    }
}
