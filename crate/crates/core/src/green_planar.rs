//! Scattered Green tensors of a dielectric half-space `z < 0`, evaluated at a
//! vacuum point a distance `L` above the interface.
//!
//! Imaginary-axis values use `κ = ξ/c + u/(2L)` so the exponential becomes
//! `e^{−u}`. On the real axis the transverse wavenumber integral is split at
//! `k = ω/c` into a propagating sector (variable `q = √(ω²/c² − k²)`,
//! oscillating as `e^{2iqL}`) and an evanescent sector (variable `κ`).

use std::f64::consts::PI;

use crate::error::{domain, PolderError, Result};
use crate::materials::{DielectricModel, MaybeInfinite, C, EPS0, MU0};
use crate::numerics::{try_integrate_breakpoints, try_integrate_panels, CPair, QuadValue};
use crate::response::Freq;
use crate::{Complex, Tolerance};

/// A nonmagnetic half-space.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpace {
    pub material: DielectricModel,
}

impl HalfSpace {
    pub fn new(material: DielectricModel) -> Result<Self> {
        material.validate()?;
        Ok(HalfSpace { material })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Electric,
    Magnetic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Real,
    Imag,
}

/// Diagonal of the scattered tensor; `yy = xx`, off-diagonals vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenDiagonal {
    pub xx: Complex,
    pub zz: Complex,
    pub flavor: Flavor,
    pub axis: Axis,
    pub distance: f64,
    pub freq: f64,
}

impl GreenDiagonal {
    pub fn trace(&self) -> Complex {
        self.xx * 2.0 + self.zz
    }

    fn zero(flavor: Flavor, axis: Axis, distance: f64, freq: f64) -> Self {
        let z = Complex::new(0.0, 0.0);
        GreenDiagonal { xx: z, zz: z, flavor, axis, distance, freq }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaPair {
    pub kappa: Complex,
    pub kappa_m: Complex,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reflection {
    pub r_te: Complex,
    pub r_tm: Complex,
}

/// Relative damping floor applied on the real axis: `Im ε ≥ 1e-6·|ε − 1|`.
pub const DAMPING_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
pub(crate) enum Surface {
    Perfect,
    Eps(Complex),
}

/// Square root with `Re ≥ 0`, `Im ≤ 0` wherever the radicand allows.
pub(crate) fn branch_sqrt(z: Complex) -> Complex {
    let s = z.sqrt();
    if s.im > 0.0 {
        -s
    } else {
        s
    }
}

/// Fresnel coefficients from the vacuum `κ` and `w2 = ω²/c²` (`−ξ²/c²` on the imaginary axis).
pub(crate) fn reflect(surface: Surface, kappa: Complex, w2: Complex) -> Reflection {
    match surface {
        Surface::Perfect => Reflection { r_te: Complex::new(-1.0, 0.0), r_tm: Complex::new(1.0, 0.0) },
        Surface::Eps(eps) => {
            let km = branch_sqrt(kappa * kappa - (eps - 1.0) * w2);
            let s = kappa + km;
            // (κ − κ_m)/(κ + κ_m) rewritten to avoid cancellation at large k.
            let r_te = (eps - 1.0) * w2 / (s * s);
            let r_tm = (eps * kappa - km) / (eps * kappa + km);
            Reflection { r_te, r_tm }
        }
    }
}

/// Surface seen at `freq`; `None` for vacuum.
pub(crate) fn surface_at(material: &DielectricModel, freq: Freq, floor: bool) -> Result<Option<Surface>> {
    if material.is_vacuum() {
        return Ok(None);
    }
    if let DielectricModel::PerfectReflector = material {
        return Ok(Some(Surface::Perfect));
    }
    let eps = match freq {
        Freq::Imag(xi) => match material.permittivity_imag_axis(xi)? {
            MaybeInfinite::Finite(e) => Complex::new(e, 0.0),
            MaybeInfinite::Infinite => return Ok(Some(Surface::Perfect)),
        },
        Freq::Real(w) => {
            let mut e = material.permittivity_real_axis(w)?;
            if floor {
                let min = DAMPING_FLOOR * (e - 1.0).norm();
                if e.im < min {
                    e.im = min;
                }
            }
            e
        }
    };
    Ok(Some(Surface::Eps(eps)))
}

fn w2_of(freq: Freq) -> Complex {
    match freq {
        Freq::Real(w) => Complex::new(w * w / (C * C), 0.0),
        Freq::Imag(xi) => Complex::new(-xi * xi / (C * C), 0.0),
    }
}

/// Vacuum and medium propagation constants for transverse wavenumber `k`.
pub fn kappa_pair(freq: Freq, k: f64, material: &DielectricModel) -> Result<KappaPair> {
    if !(k >= 0.0) {
        return domain(format!("transverse wavenumber must be >= 0, got {k:e}"));
    }
    let w2 = w2_of(freq);
    let kappa = branch_sqrt(Complex::new(k * k, 0.0) - w2);
    let eps = match freq {
        Freq::Real(w) => material.permittivity_real_axis(w)?,
        Freq::Imag(xi) => match material.permittivity_imag_axis(xi)? {
            MaybeInfinite::Finite(e) => Complex::new(e, 0.0),
            MaybeInfinite::Infinite => {
                return Err(PolderError::Unsupported("kappa_m of a perfect reflector".into()));
            }
        },
    };
    let kappa_m = branch_sqrt(Complex::new(k * k, 0.0) - eps * w2);
    Ok(KappaPair { kappa, kappa_m })
}

/// `r_te`, `r_tm` at transverse wavenumber `k`.
pub fn fresnel(freq: Freq, k: f64, material: &DielectricModel) -> Result<Reflection> {
    if !(k >= 0.0) {
        return domain(format!("transverse wavenumber must be >= 0, got {k:e}"));
    }
    let w2 = w2_of(freq);
    let kappa = branch_sqrt(Complex::new(k * k, 0.0) - w2);
    Ok(match surface_at(material, freq, false)? {
        None => Reflection { r_te: Complex::new(0.0, 0.0), r_tm: Complex::new(0.0, 0.0) },
        Some(s) => reflect(s, kappa, w2),
    })
}

fn check_distance(l: f64) -> Result<()> {
    if !(l > 0.0 && l.is_finite()) {
        return domain(format!("distance must be positive, got {l:e}"));
    }
    Ok(())
}

fn flavor_scale(flavor: Flavor) -> f64 {
    match flavor {
        Flavor::Electric => 1.0 / (8.0 * PI * EPS0),
        Flavor::Magnetic => MU0 / (8.0 * PI),
    }
}

fn swapped(r: Reflection, flavor: Flavor) -> Reflection {
    match flavor {
        Flavor::Electric => r,
        Flavor::Magnetic => Reflection { r_te: r.r_tm, r_tm: r.r_te },
    }
}

fn default_tol() -> Tolerance {
    Tolerance::rel(1e-9)
}

/// Imaginary-axis tensor; both components real.
pub fn green_imag_axis(geom: &HalfSpace, l: f64, xi: f64, flavor: Flavor, tol: &Tolerance) -> Result<GreenDiagonal> {
    check_distance(l)?;
    if !(xi >= 0.0) {
        return domain(format!("imaginary frequency must be >= 0, got {xi:e}"));
    }
    let Some(surface) = surface_at(&geom.material, Freq::Imag(xi), false)? else {
        return Ok(GreenDiagonal::zero(flavor, Axis::Imag, l, xi));
    };
    let pref = flavor_scale(flavor);
    if xi == 0.0 {
        // Static limit with κ = k: only the incidence-independent r_tm (or r_te) survives.
        let r0 = match (flavor, surface, geom.material.static_permittivity()) {
            (Flavor::Electric, Surface::Perfect, _) => 1.0,
            (Flavor::Electric, _, MaybeInfinite::Finite(e)) => (e - 1.0) / (e + 1.0),
            (Flavor::Electric, _, MaybeInfinite::Infinite) => 1.0,
            (Flavor::Magnetic, Surface::Perfect, _) if matches!(geom.material, DielectricModel::PerfectReflector) => -1.0,
            (Flavor::Magnetic, _, _) => 0.0,
        };
        let xx = pref * r0 / (4.0 * l.powi(3));
        return Ok(GreenDiagonal {
            xx: Complex::new(xx, 0.0),
            zz: Complex::new(2.0 * xx, 0.0),
            flavor,
            axis: Axis::Imag,
            distance: l,
            freq: 0.0,
        });
    }
    let a = xi / C;
    let w2 = Complex::new(-a * a, 0.0);
    let two_l = 2.0 * l;
    let integrand = |u: f64| -> Result<Complex> {
        let du = u / two_l;
        let kappa = a + du;
        let r = swapped(reflect(surface, Complex::new(kappa, 0.0), w2), flavor);
        let e = (-u).exp();
        let xx = (kappa * kappa * r.r_tm.re - a * a * r.r_te.re) * e;
        let zz = 2.0 * du * (2.0 * a + du) * r.r_tm.re * e;
        Ok(Complex::new(xx, zz))
    };
    let mut bps = vec![1.0, 4.0, 16.0];
    if let Surface::Eps(eps) = surface {
        let uf = two_l * a * (eps.re - 1.0).abs().sqrt();
        if uf > 1e-6 && uf < 1e3 {
            bps.push(uf);
        }
    }
    let r = try_integrate_breakpoints(integrand, 0.0, &bps, None, tol)?;
    let scale = pref / two_l * (-two_l * a).exp();
    Ok(GreenDiagonal {
        xx: Complex::new(scale * r.value.re, 0.0),
        zz: Complex::new(scale * r.value.im, 0.0),
        flavor,
        axis: Axis::Imag,
        distance: l,
        freq: xi,
    })
}

pub fn green_electric_imag_axis(geom: &HalfSpace, l: f64, xi: f64) -> Result<GreenDiagonal> {
    green_imag_axis(geom, l, xi, Flavor::Electric, &default_tol())
}

/// Optional extra factor under the `k` integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum KWeight {
    One,
    /// `k²/2`, the in-plane gradient pair of the surface-friction kernel.
    HalfKSquared,
}

/// Real-axis `(xx, zz)` integrals, without the flavor prefactor.
pub(crate) fn real_axis_integrals(
    surface: Surface,
    l: f64,
    omega: f64,
    flavor: Flavor,
    weight: KWeight,
    tol: &Tolerance,
) -> Result<(Complex, Complex)> {
    let k0 = omega / C;
    let k02 = k0 * k0;
    let w2 = Complex::new(k02, 0.0);
    let i = Complex::new(0.0, 1.0);
    let wfac = |k2: f64| match weight {
        KWeight::One => 1.0,
        KWeight::HalfKSquared => 0.5 * k2,
    };
    let prop = |q: f64| -> Result<CPair<f64>> {
        let kappa = Complex::new(0.0, -q);
        let r = swapped(reflect(surface, kappa, w2), flavor);
        let k2 = (k02 - q * q).max(0.0);
        let ph = Complex::new(0.0, 2.0 * q * l).exp() * wfac(k2);
        let xx = i * (r.r_te * k02 - r.r_tm * (q * q)) * ph;
        let zz = i * r.r_tm * (2.0 * k2) * ph;
        Ok(CPair(xx, zz))
    };
    let periods = k0 * l / PI;
    let panels = ((8.0 * periods).ceil() as usize).clamp(4, 200_000);
    let p = try_integrate_panels(prop, 0.0, k0, panels, tol)?;
    let evan = |kappa: f64| -> Result<CPair<f64>> {
        let r = swapped(reflect(surface, Complex::new(kappa, 0.0), w2), flavor);
        let k2 = kappa * kappa + k02;
        let e = (-2.0 * kappa * l).exp() * wfac(k2);
        let xx = (r.r_tm * (kappa * kappa) + r.r_te * k02) * e;
        let zz = r.r_tm * (2.0 * k2) * e;
        Ok(CPair(xx, zz))
    };
    let mut bps: Vec<f64> = [1.0, 4.0, 16.0].iter().map(|m| m / (2.0 * l)).collect();
    if let Surface::Eps(eps) = surface {
        bps.push(k0 / (eps + 1.0).norm().sqrt());
        bps.push(k0 * eps.norm().sqrt());
        bps.push(k0 * (eps - 1.0).norm().sqrt());
    }
    // Evanescent sector carries the absolute scale set by the propagating part.
    let etol = Tolerance { abs: tol.abs.max(tol.rel * QuadValue::<f64>::norm(p.value)), ..*tol };
    let e = try_integrate_breakpoints(evan, 0.0, &bps, None, &etol)?;
    Ok((p.value.0 + e.value.0, p.value.1 + e.value.1))
}

/// Real-axis tensor at `ω > 0` with the damping floor applied.
pub fn green_real_axis(geom: &HalfSpace, l: f64, omega: f64, flavor: Flavor, tol: &Tolerance) -> Result<GreenDiagonal> {
    check_distance(l)?;
    if !(omega > 0.0) {
        return domain(format!("real frequency must be positive, got {omega:e}"));
    }
    let Some(surface) = surface_at(&geom.material, Freq::Real(omega), true)? else {
        return Ok(GreenDiagonal::zero(flavor, Axis::Real, l, omega));
    };
    let (xx, zz) = real_axis_integrals(surface, l, omega, flavor, KWeight::One, tol)?;
    let pref = flavor_scale(flavor);
    Ok(GreenDiagonal { xx: xx * pref, zz: zz * pref, flavor, axis: Axis::Real, distance: l, freq: omega })
}

pub fn green_electric_real_axis(geom: &HalfSpace, l: f64, omega: f64) -> Result<GreenDiagonal> {
    green_real_axis(geom, l, omega, Flavor::Electric, &default_tol())
}

/// Magnetic tensor `ℋ` on either axis.
pub fn green_magnetic(geom: &HalfSpace, l: f64, freq: f64, axis: Axis) -> Result<GreenDiagonal> {
    match axis {
        Axis::Real => green_real_axis(geom, l, freq, Flavor::Magnetic, &default_tol()),
        Axis::Imag => green_imag_axis(geom, l, freq, Flavor::Magnetic, &default_tol()),
    }
}

/// Any flavor at a real or imaginary frequency.
pub fn green(geom: &HalfSpace, l: f64, freq: Freq, flavor: Flavor, tol: &Tolerance) -> Result<GreenDiagonal> {
    match freq {
        Freq::Real(w) => green_real_axis(geom, l, w, flavor, tol),
        Freq::Imag(xi) => green_imag_axis(geom, l, xi, flavor, tol),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    SubSkin,
    NonRetarded,
    Retarded,
    Crossover,
}

pub const REGIME_GUARD: f64 = 3.0;

/// Retardation length `λ_ω/4π = c/(2ω)`, where the table phase `4πL/λ_ω` reaches one.
pub fn retardation_length(omega: f64) -> f64 {
    C / (2.0 * omega)
}

/// Place `L` relative to the skin depth and the retardation length with a guard factor.
pub fn classify_regime(geom: &HalfSpace, l: f64, omega: f64) -> Result<Regime> {
    check_distance(l)?;
    if !(omega > 0.0) {
        return domain(format!("real frequency must be positive, got {omega:e}"));
    }
    let lr = retardation_length(omega);
    let g = REGIME_GUARD;
    let delta = geom.material.skin_depth(omega)?.finite().filter(|d| *d < lr);
    if let Some(d) = delta {
        if l * g < d {
            return Ok(Regime::SubSkin);
        }
        if l < d * g {
            return Ok(Regime::Crossover);
        }
    }
    Ok(if l * g < lr {
        Regime::NonRetarded
    } else if l > lr * g {
        Regime::Retarded
    } else {
        Regime::Crossover
    })
}

/// Closed-form table entry and whether `L` actually lies in that regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asymptotic {
    pub green: GreenDiagonal,
    pub regime_mismatch: bool,
}

/// Leading-order metal asymptotes of the real-axis tensor; `zz = 2xx` throughout.
///
/// The electric sub-skin entry has no closed form and is reported as unsupported.
pub fn green_asymptotic(geom: &HalfSpace, l: f64, omega: f64, flavor: Flavor, row: Regime) -> Result<Asymptotic> {
    let actual = classify_regime(geom, l, omega)?;
    let x = 2.0 * omega * l / C;
    let phase = Complex::new(1.0 - 0.5 * x * x, -x) * Complex::new(0.0, x).exp();
    let static_mirror = match flavor {
        Flavor::Electric => {
            let eps = match geom.material {
                DielectricModel::PerfectReflector => None,
                _ => Some(geom.material.permittivity_real_axis(omega)?),
            };
            let corr = eps.map_or(Complex::new(1.0, 0.0), |e| Complex::new(1.0, 0.0) - 2.0 / e);
            corr / (32.0 * PI * EPS0 * l.powi(3))
        }
        Flavor::Magnetic => Complex::new(-MU0 / (32.0 * PI * l.powi(3)), 0.0),
    };
    let xx = match (flavor, row) {
        (Flavor::Electric, Regime::SubSkin) => {
            return Err(PolderError::Unsupported("no closed-form electric sub-skin-depth asymptote".into()));
        }
        (Flavor::Magnetic, Regime::SubSkin) => {
            let d = geom
                .material
                .skin_depth(omega)?
                .finite()
                .ok_or_else(|| PolderError::Unsupported("sub-skin asymptote needs a finite skin depth".into()))?;
            Complex::new(0.0, MU0 / (32.0 * PI * d * d * l))
        }
        (_, Regime::NonRetarded) => static_mirror,
        (_, Regime::Retarded) => static_mirror * phase,
        (_, Regime::Crossover) => return Err(PolderError::Unsupported("no asymptote in a crossover band".into())),
    };
    Ok(Asymptotic {
        green: GreenDiagonal { xx, zz: xx * 2.0, flavor, axis: Axis::Real, distance: l, freq: omega },
        regime_mismatch: actual != row,
    })
}

/// Exact perfect-mirror tensor from the image dipole at `2L`.
pub fn perfect_mirror_exact(l: f64, omega: f64, flavor: Flavor) -> GreenDiagonal {
    let x = 2.0 * omega * l / C;
    let ph = Complex::new(0.0, x).exp();
    let (s, axis) = match flavor {
        Flavor::Electric => (1.0 / (32.0 * PI * EPS0 * l.powi(3)), Axis::Real),
        Flavor::Magnetic => (-MU0 / (32.0 * PI * l.powi(3)), Axis::Real),
    };
    let xx = Complex::new(1.0 - x * x, -x) * ph * s;
    let zz = Complex::new(1.0, -x) * ph * (2.0 * s);
    GreenDiagonal { xx, zz, flavor, axis, distance: l, freq: omega }
}
