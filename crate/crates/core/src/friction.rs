//! Velocity-dependent radiative forces on a moving polarizable particle.
//!
//! Forces are components along the velocity: negative values are drag.

use std::f64::consts::PI;

use crate::atom_state::occupation;
use crate::error::{domain, PolderError, Result};
use crate::green_planar::{green_real_axis, real_axis_integrals, surface_at, Flavor, HalfSpace, KWeight};
use crate::materials::{DielectricModel, C, EPS0, FINE_STRUCTURE, HBAR, K_B};
use crate::numerics::{feature_breakpoints, try_integrate_breakpoints, try_integrate_finite};
use crate::response::{alpha_dressed, AtomState, Diag3, Freq, Polarizability};
use crate::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrictionRegime {
    FreeSpace,
    NearSurface,
    NonRetarded,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrictionResult {
    pub force: f64,
    pub regime: FrictionRegime,
    /// Lorentz factors kept (exact in `v/c`).
    pub relativistic: bool,
    /// First order in `v` by construction.
    pub small_velocity: bool,
    /// Scaling estimate without a reliable prefactor.
    pub order_of_magnitude: bool,
    /// Zero returned without integration (`T = 0`, `v = 0`, no absorption).
    pub trivial: bool,
}

impl FrictionResult {
    fn new(force: f64, regime: FrictionRegime) -> Self {
        FrictionResult {
            force,
            regime,
            relativistic: false,
            small_velocity: true,
            order_of_magnitude: false,
            trivial: false,
        }
    }

    fn zero(regime: FrictionRegime) -> Self {
        FrictionResult { trivial: true, ..Self::new(0.0, regime) }
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return domain(format!("temperature must be finite and >= 0, got {t}"));
    }
    Ok(())
}

fn check_v(v: f64) -> Result<()> {
    if !v.is_finite() || v.abs() >= C {
        return domain(format!("speed must satisfy |v| < c, got {v:e}"));
    }
    Ok(())
}

fn mean_im_alpha(p: &Polarizability, omega: f64) -> Result<f64> {
    if p.is_magnetic() {
        return Err(PolderError::Unsupported("friction of a magnetic dipole".into()));
    }
    Ok(p.alpha_iso(Freq::Real(omega))?.im)
}

/// Frequency window `(breakpoints, cutoff)` covering thermal photons and the absorption lines.
fn window(p: &Polarizability, temperatures: &[f64]) -> (Vec<f64>, f64) {
    let features = p.spectral_features();
    let mut bps = feature_breakpoints(&features);
    let mut top: f64 = features.iter().map(|f| f.0).fold(0.0, f64::max) * 10.0;
    if let Some(w) = p.characteristic_frequency() {
        bps.push(w);
        top = top.max(10.0 * w);
    }
    for &t in temperatures {
        let wt = K_B * t / HBAR;
        if wt > 0.0 {
            bps.extend([0.1, 0.3, 1.0, 3.0, 10.0].iter().map(|m| m * wt));
            top = top.max(50.0 * wt);
        }
    }
    (bps, top)
}

/// `−∂_ω N = (ħ/k_BT) N(N + 1)`.
fn minus_dn(omega: f64, t: f64) -> Result<f64> {
    let n = occupation(omega, t)?;
    Ok(HBAR / (K_B * t) * n * (n + 1.0))
}

/// Free-space friction to first order in `v/c`:
/// `−v (ħ²/k_BT)/(12π²ε0c⁵) ∫ dω ω⁵ Im α / sinh²(ħω/2k_BT)`.
pub fn blackbody_friction(p: &Polarizability, t: f64, v: f64) -> Result<FrictionResult> {
    check_t(t)?;
    check_v(v)?;
    if t == 0.0 || v == 0.0 {
        return Ok(FrictionResult::zero(FrictionRegime::FreeSpace));
    }
    let (bps, top) = window(p, &[t]);
    let x = HBAR / (2.0 * K_B * t);
    let f = |w: f64| -> Result<f64> {
        let s = (x * w).sinh();
        if !s.is_finite() {
            return Ok(0.0);
        }
        Ok(w.powi(5) * mean_im_alpha(p, w)? / (s * s))
    };
    let i = try_integrate_breakpoints(f, 0.0, &bps, Some(top), &Tolerance::rel(1e-8))?.value;
    let pref = HBAR * HBAR / (K_B * t) / (12.0 * PI * PI * EPS0 * C.powi(5));
    Ok(FrictionResult::new(-v * pref * i, FrictionRegime::FreeSpace))
}

/// Two-temperature free-space force, exact in `v/c`.
///
/// The `d³k` integral is reduced to the polar cosine `u` of `k` and the rest-frame
/// frequency `ω′ = γ(ω + kv u)`, so narrow lines stay at fixed `ω′`. Contributions
/// from `u` and `−u` are combined under one integral before quadrature.
pub fn dedkov_kyasov(p: &Polarizability, t_f: f64, t_a: f64, v: f64) -> Result<FrictionResult> {
    check_t(t_f)?;
    check_t(t_a)?;
    check_v(v)?;
    let mut out = FrictionResult { relativistic: true, small_velocity: false, ..FrictionResult::new(0.0, FrictionRegime::FreeSpace) };
    if v == 0.0 {
        out.trivial = true;
        return Ok(out);
    }
    let beta = v.abs() / C;
    let gamma = 1.0 / (1.0 - beta * beta).sqrt();
    let (bps, top) = window(p, &[t_f, t_a]);
    let top = top * (1.0 + beta) * gamma;
    let kernel = |wp: f64, u: f64| -> Result<f64> {
        let dop = gamma * (1.0 + beta * u);
        let w = wp / dop;
        Ok(w * w / dop * (occupation(w, t_f)? - occupation(wp, t_a)?))
    };
    // The u/−u difference is O(v/c) of either side; its tolerance floor comes from one side.
    let side = |wp: f64| -> Result<f64> {
        if wp == 0.0 {
            return Ok(0.0);
        }
        Ok(wp.powi(4) * mean_im_alpha(p, wp)?.abs() * (occupation(wp, t_f)? + occupation(wp, t_a)?))
    };
    let scale = try_integrate_breakpoints(side, 0.0, &bps, Some(top), &Tolerance::rel(1e-6))?.value;
    let tol_w = Tolerance::rel(1e-10).with_abs(1e-14 * scale);
    let tol_u = Tolerance::rel(1e-8).with_abs(1e-14 * scale);
    let inner = |u: f64| -> Result<f64> {
        if u == 0.0 {
            return Ok(0.0);
        }
        let f = |wp: f64| -> Result<f64> {
            if wp == 0.0 {
                return Ok(0.0);
            }
            let a = mean_im_alpha(p, wp)?;
            if a == 0.0 {
                return Ok(0.0);
            }
            Ok(wp * wp * a * (kernel(wp, u)? - kernel(wp, -u)?))
        };
        Ok(u * try_integrate_breakpoints(f, 0.0, &bps, Some(top), &tol_w)?.value)
    };
    let i = try_integrate_finite(inner, 0.0, 1.0, &tol_u)?.value;
    let pref = HBAR / (4.0 * PI * EPS0 * C * gamma) * 2.0 / (PI * C.powi(3));
    out.force = -v.signum() * pref * i;
    Ok(out)
}

/// Ground-state particle in a hot field, first order in `v`:
/// `v ħ/(3π²ε0c⁵) ∫ dω ω² Im α ∂_ω[ω³N(ω, T_F)]`.
pub fn hot_field_force(p: &Polarizability, t_f: f64, v: f64) -> Result<FrictionResult> {
    check_t(t_f)?;
    check_v(v)?;
    if t_f == 0.0 || v == 0.0 {
        return Ok(FrictionResult::zero(FrictionRegime::FreeSpace));
    }
    let (bps, top) = window(p, &[t_f]);
    let f = |w: f64| -> Result<f64> {
        if w == 0.0 {
            return Ok(0.0);
        }
        let n = occupation(w, t_f)?;
        let slope = 3.0 * w * w * n - w.powi(3) * minus_dn(w, t_f)?;
        Ok(w * w * mean_im_alpha(p, w)? * slope)
    };
    let i = try_integrate_breakpoints(f, 0.0, &bps, Some(top), &Tolerance::rel(1e-8))?.value;
    Ok(FrictionResult::new(v * HBAR / (3.0 * PI * PI * EPS0 * C.powi(5)) * i, FrictionRegime::FreeSpace))
}

#[derive(Debug, Clone, Copy)]
pub struct SurfaceFrictionOptions {
    pub tol: Tolerance,
    /// Use the surface-dressed polarizability instead of the bare one.
    pub dressed: bool,
}

impl Default for SurfaceFrictionOptions {
    fn default() -> Self {
        SurfaceFrictionOptions { tol: Tolerance::rel(1e-7), dressed: false }
    }
}

/// Surface-induced friction for motion parallel to the interface:
/// `−(ħ/2π²ε0) ∫ dω (−∂_ωN) Im α (v̂·∇)(v·∇′) tr Im G`, with `G = 4πε0𝒢` the
/// scattered tensor. The gradients act on `e^{ik·(ρ−ρ′)}` and give `k_x²`, whose
/// azimuthal mean is `k²/2`. Add [`blackbody_friction`] for the free-space part.
pub fn surface_friction(
    p: &Polarizability,
    geom: &HalfSpace,
    l: f64,
    t: f64,
    v: f64,
    opts: &SurfaceFrictionOptions,
) -> Result<FrictionResult> {
    check_t(t)?;
    check_v(v)?;
    if !(l > 0.0) {
        return domain(format!("distance must be positive, got {l:e}"));
    }
    if t == 0.0 || v == 0.0 || geom.material.is_vacuum() {
        return Ok(FrictionResult::zero(FrictionRegime::NearSurface));
    }
    if p.is_magnetic() {
        return Err(PolderError::Unsupported("friction of a magnetic dipole".into()));
    }
    let (mut bps, top) = window(p, &[t]);
    bps.extend(feature_breakpoints(&material_lines(&geom.material)));
    let f = |w: f64| -> Result<f64> {
        if w == 0.0 {
            return Ok(0.0);
        }
        let weight = minus_dn(w, t)?;
        if weight == 0.0 {
            return Ok(0.0);
        }
        let a = uniaxial_alpha(p, geom, l, w, opts)?;
        let Some(surface) = surface_at(&geom.material, Freq::Real(w), true)? else {
            return Ok(0.0);
        };
        let (xx, zz) = real_axis_integrals(surface, l, w, Flavor::Electric, KWeight::HalfKSquared, &opts.tol)?;
        // 4πε0 · 1/(8πε0) from the scattered prefactor.
        let g = (xx * 2.0 * a[0].im + zz * a[2].im) * 0.5;
        Ok(weight * g.im)
    };
    let i = try_integrate_breakpoints(f, 0.0, &bps, Some(top), &Tolerance::rel(1e-7))?.value;
    Ok(FrictionResult::new(-v * HBAR / (2.0 * PI * PI * EPS0) * i, FrictionRegime::NearSurface))
}

fn material_lines(m: &DielectricModel) -> Vec<(f64, f64)> {
    match m {
        DielectricModel::Lorentz { lines, .. } => lines.iter().map(|l| (l.omega_t, l.gamma.max(1e-9 * l.omega_t))).collect(),
        DielectricModel::Drude { gamma, .. } => m.resonances().into_iter().map(|w| (w, gamma.max(1e-9 * w))).collect(),
        _ => Vec::new(),
    }
}

/// Polarizability with `α_xx = α_yy`; dressed by the scattered tensor on request.
fn uniaxial_alpha(p: &Polarizability, geom: &HalfSpace, l: f64, w: f64, opts: &SurfaceFrictionOptions) -> Result<Diag3> {
    let a = p.alpha(Freq::Real(w))?;
    if (a[0] - a[1]).norm() > 1e-12 * a[0].norm() {
        return domain("surface friction needs alpha_xx = alpha_yy");
    }
    if !opts.dressed {
        return Ok(a);
    }
    let g = green_real_axis(geom, l, w, Flavor::Electric, &opts.tol)?;
    let iso = (a[0] + a[1] + a[2]) / 3.0;
    if (a[2] - iso).norm() > 1e-12 * iso.norm() {
        return domain("dressing needs an isotropic bare polarizability");
    }
    alpha_dressed(iso, &g)
}

/// Non-retarded ground-state friction over a Drude metal,
/// `−v/(16πε0L⁵) Σ_{a>g} |d^{ag}|² ω_s Γ_a/(ω_ag + ω_s)³`.
pub fn scheel_buhmann_nonretarded(atom: &AtomState, omega_s: f64, l: f64, v: f64) -> Result<FrictionResult> {
    if !(l > 0.0) {
        return domain(format!("distance must be positive, got {l:e}"));
    }
    if !(omega_s > 0.0) {
        return domain(format!("surface plasmon frequency must be positive, got {omega_s:e}"));
    }
    let mut sum = 0.0;
    for line in atom.lines.iter().filter(|l| l.omega_ba > 0.0) {
        let Some(width) = line.width else {
            return domain(format!("line at {:e} rad/s has no radiative width", line.omega_ba));
        };
        sum += line.d_sq * omega_s * width / (line.omega_ba + omega_s).powi(3);
    }
    let mut r = FrictionResult::new(-v / (16.0 * PI * EPS0 * l.powi(5)) * sum, FrictionRegime::NonRetarded);
    r.trivial = sum == 0.0;
    Ok(r)
}

/// [`scheel_buhmann_nonretarded`] with `ω_s = ω_p/√2` taken from a Drude metal.
pub fn scheel_buhmann_for(atom: &AtomState, metal: &DielectricModel, l: f64, v: f64) -> Result<FrictionResult> {
    scheel_buhmann_nonretarded(atom, metal.surface_plasmon_frequency()?, l, v)
}

/// Harris–Schaich scaling `−v ħα_fs²/L¹⁰ (α0c/(4πε0ω_s))²`; an order-of-magnitude estimate.
pub fn harris_schaich_scale(alpha0: f64, l: f64, omega_s: f64, v: f64) -> Result<FrictionResult> {
    if !(l > 0.0 && omega_s > 0.0) {
        return domain("Harris-Schaich scaling needs L > 0 and omega_s > 0");
    }
    let b = alpha0 * C / (4.0 * PI * EPS0 * omega_s);
    let force = -v * HBAR * FINE_STRUCTURE * FINE_STRUCTURE / l.powi(10) * b * b;
    Ok(FrictionResult { order_of_magnitude: true, ..FrictionResult::new(force, FrictionRegime::NonRetarded) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::{gold, LorentzLine};
    use crate::response::TransitionLine;

    const T: f64 = 300.0;

    fn wt(t: f64) -> f64 {
        K_B * t / HBAR
    }

    fn oscillator(omega_0: f64) -> Polarizability {
        let e = crate::materials::ELEMENTARY_CHARGE;
        Polarizability::DampedOscillator { q: e, m: 1e-25, omega_0, gamma: 0.2 * omega_0 }
    }

    #[test]
    fn blackbody_examples() {
        let p = oscillator(wt(T));
        assert!(blackbody_friction(&p, T, 0.0).unwrap().trivial);
        assert!(blackbody_friction(&p, 0.0, 10.0).unwrap().trivial);
        let f1 = blackbody_friction(&p, T, 10.0).unwrap().force;
        let f2 = blackbody_friction(&p, T, 20.0).unwrap().force;
        assert!(f1 < 0.0);
        assert!((f2 / f1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn boltzmann_suppression() {
        // Lorentzian tails of a regularized line would dominate at 30 k_BT.
        let line = |x: f64| {
            let mut s = AtomState::new("g", 0.0, vec![TransitionLine::isotropic(1e-58, x * wt(T))]);
            s.damping_ratio = 1e-10;
            Polarizability::AtomLines(s)
        };
        let (lo, hi) = (line(1.0), line(30.0));
        let r = blackbody_friction(&hi, T, 1.0).unwrap().force / blackbody_friction(&lo, T, 1.0).unwrap().force;
        // Narrow lines: equal line strength, weights ω⁵/sinh²(x/2).
        let expect = 30f64.powi(5) * 0.5f64.sinh().powi(2) / 15f64.sinh().powi(2);
        assert!((r / expect - 1.0).abs() < 1e-3, "{r:e} {expect:e}");
        assert!(r < 1e-5);
    }

    #[test]
    fn dedkov_kyasov_equilibrium_limit() {
        for p in [oscillator(wt(T)), Polarizability::TwoLevel { d_sq: 1e-58, omega_0: 2.0 * wt(T) }] {
            let v = 1e-5 * C;
            let dk = dedkov_kyasov(&p, T, T, v).unwrap().force;
            let bb = blackbody_friction(&p, T, v).unwrap().force;
            assert!((dk / bb - 1.0).abs() < 0.01, "{dk:e} {bb:e}");
        }
    }

    #[test]
    fn dedkov_kyasov_rest_and_domain() {
        let p = oscillator(wt(T));
        assert_eq!(dedkov_kyasov(&p, T, T, 0.0).unwrap().force, 0.0);
        assert!(dedkov_kyasov(&p, T, T, C).is_err());
    }

    #[test]
    fn equilibrium_drag_over_velocity_sweep() {
        let p = oscillator(wt(T));
        for b in [1e-6, 1e-5, 1e-4, 1e-3, 1e-2] {
            let f = dedkov_kyasov(&p, T, T, b * C).unwrap().force;
            assert!(f < 0.0, "v/c = {b}: {f:e}");
            let g = dedkov_kyasov(&p, T, T, -b * C).unwrap().force;
            assert!((g + f).abs() <= 1e-12 * f.abs());
        }
    }

    #[test]
    fn linear_response() {
        let p = oscillator(wt(T));
        let r: Vec<f64> = [1e-8, 1e-7, 1e-6].iter().map(|b| dedkov_kyasov(&p, T, T, b * C).unwrap().force / b).collect();
        for x in &r[1..] {
            assert!((x / r[0] - 1.0).abs() < 0.01, "{r:?}");
        }
    }

    #[test]
    fn hot_field_sign_flip() {
        let v = 1.0;
        let below = Polarizability::TwoLevel { d_sq: 1e-58, omega_0: 0.3 * wt(T) };
        let above = Polarizability::TwoLevel { d_sq: 1e-58, omega_0: 10.0 * wt(T) };
        assert!(hot_field_force(&below, T, v).unwrap().force > 0.0);
        assert!(hot_field_force(&above, T, v).unwrap().force < 0.0);
        let dk = dedkov_kyasov(&below, T, 0.0, v).unwrap().force;
        assert!(dk > 0.0);
    }

    #[test]
    fn hot_field_matches_dedkov_kyasov() {
        for p in [oscillator(0.5 * wt(T)), Polarizability::TwoLevel { d_sq: 1e-58, omega_0: 5.0 * wt(T) }] {
            let v = 1e-6 * C;
            let hf = hot_field_force(&p, T, v).unwrap().force;
            let dk = dedkov_kyasov(&p, T, 0.0, v).unwrap().force;
            assert!((dk / hf - 1.0).abs() < 0.02, "{dk:e} {hf:e}");
        }
    }

    #[test]
    fn surface_friction_drag_and_zero_t() {
        let geom = HalfSpace::new(gold()).unwrap();
        let p = oscillator(wt(T));
        let opts = SurfaceFrictionOptions::default();
        assert!(surface_friction(&p, &geom, 1e-8, 0.0, 1.0, &opts).unwrap().trivial);
        let f = surface_friction(&p, &geom, 1e-8, T, 1.0, &opts).unwrap();
        assert!(f.force < 0.0, "{:e}", f.force);
    }

    #[test]
    fn surface_friction_free_space_normalization() {
        // The free-space kernel `(v̂·∇)(v·∇′) tr Im G0 = v (2/3) k0⁵` in the same
        // normalization must reproduce blackbody friction.
        let p = oscillator(wt(T));
        let f = |w: f64| -> Result<f64> {
            Ok(minus_dn(w, T)? * mean_im_alpha(&p, w)? * (2.0 / 3.0) * (w / C).powi(5))
        };
        let (bps, top) = window(&p, &[T]);
        let i = try_integrate_breakpoints(f, 0.0, &bps, Some(top), &Tolerance::rel(1e-9)).unwrap().value;
        let via_kernel = -HBAR / (2.0 * PI * PI * EPS0) * i;
        let bb = blackbody_friction(&p, T, 1.0).unwrap().force;
        assert!((via_kernel / bb - 1.0).abs() < 1e-6);
    }

    #[test]
    fn surface_friction_nonretarded_scaling() {
        let m = DielectricModel::lorentz(2.0, vec![LorentzLine { strength: 3.0, omega_t: 4e13, gamma: 1e13 }]).unwrap();
        let geom = HalfSpace::new(m).unwrap();
        let p = oscillator(wt(T));
        let opts = SurfaceFrictionOptions::default();
        let f1 = surface_friction(&p, &geom, 2e-9, T, 1.0, &opts).unwrap().force;
        let f2 = surface_friction(&p, &geom, 2e-8, T, 1.0, &opts).unwrap().force;
        let slope = (f2 / f1).ln() / 10f64.ln();
        assert!((slope + 5.0).abs() < 0.1, "{slope}");
    }

    #[test]
    fn dressed_reduces_to_bare_far_away() {
        let geom = HalfSpace::new(gold()).unwrap();
        let p = oscillator(wt(T));
        let bare = surface_friction(&p, &geom, 1e-6, T, 1.0, &SurfaceFrictionOptions::default()).unwrap().force;
        let opts = SurfaceFrictionOptions { dressed: true, ..Default::default() };
        let dressed = surface_friction(&p, &geom, 1e-6, T, 1.0, &opts).unwrap().force;
        assert!((dressed / bare - 1.0).abs() < 1e-3);
    }

    fn sb_atom(width: Option<f64>) -> AtomState {
        let mut line = TransitionLine::isotropic(1e-58, 2.4e15);
        line.width = width;
        AtomState::new("g", 0.0, vec![line])
    }

    #[test]
    fn scheel_buhmann_examples() {
        let a = sb_atom(Some(3.8e7));
        let f1 = scheel_buhmann_for(&a, &gold(), 1e-8, 1.0).unwrap();
        let f2 = scheel_buhmann_for(&a, &gold(), 2e-8, 1.0).unwrap();
        assert!(f1.force < 0.0);
        assert!((f1.force / f2.force - 32.0).abs() < 1e-9);
        let direct = scheel_buhmann_nonretarded(&a, 1.37e16 / 2f64.sqrt(), 1e-8, 1.0).unwrap();
        assert!((direct.force / f1.force - 1.0).abs() < 1e-12);
        assert_eq!(scheel_buhmann_nonretarded(&sb_atom(Some(0.0)), 1e16, 1e-8, 1.0).unwrap().force, 0.0);
        assert!(scheel_buhmann_nonretarded(&sb_atom(None), 1e16, 1e-8, 1.0).is_err());
    }

    #[test]
    fn harris_schaich_examples() {
        let a0 = 4.0 * PI * EPS0 * 47.3e-30;
        let ws = 1.37e16 / 2f64.sqrt();
        let f1 = harris_schaich_scale(a0, 1e-9, ws, 1.0).unwrap();
        assert!(f1.order_of_magnitude && f1.force < 0.0);
        let f2 = harris_schaich_scale(a0, 2e-9, ws, 1.0).unwrap();
        assert!((f1.force / f2.force - 1024.0).abs() < 1e-6);
        let f3 = harris_schaich_scale(2.0 * a0, 1e-9, ws, 1.0).unwrap();
        assert!((f3.force / f1.force - 4.0).abs() < 1e-12);
        let a = sb_atom(Some(3.8e7));
        let r = |l: f64| harris_schaich_scale(a0, l, ws, 1.0).unwrap().force / scheel_buhmann_nonretarded(&a, ws, l, 1.0).unwrap().force;
        assert!((r(1e-9) / r(2e-9) - 32.0).abs() < 1e-6);
    }
}
