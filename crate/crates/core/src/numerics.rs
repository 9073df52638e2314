//! Quadrature, Matsubara summation and numerical differentiation.
//!
//! Everything here is generic over the scalar type so the engines can be
//! exercised in `f32` as well as `f64`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_traits::{Float, FromPrimitive};
use thiserror::Error;

/// Scalar field the engines operate on.
pub trait Real: Float + FromPrimitive + Debug + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FromPrimitive + Debug + Send + Sync + 'static {}

#[inline]
fn cst<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("constant representable in scalar type")
}

fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Values that can be integrated: real scalars and complex numbers.
pub trait QuadValue<T: Real>:
    Copy + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self>
{
    fn zero() -> Self;
    fn norm(self) -> T;
    fn parts(self) -> (f64, f64);
}

impl<T: Real> QuadValue<T> for T {
    fn zero() -> Self {
        T::zero()
    }
    fn norm(self) -> T {
        self.abs()
    }
    fn parts(self) -> (f64, f64) {
        (to_f64(self), 0.0)
    }
}

impl<T: Real> QuadValue<T> for Complex<T> {
    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn norm(self) -> T {
        self.re.hypot(self.im)
    }
    fn parts(self) -> (f64, f64) {
        (to_f64(self.re), to_f64(self.im))
    }
}

/// Two complex values integrated together, e.g. the `xx` and `zz` tensor components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CPair<T>(pub Complex<T>, pub Complex<T>);

impl<T: Real> Add for CPair<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        CPair(self.0 + o.0, self.1 + o.1)
    }
}

impl<T: Real> Sub for CPair<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        CPair(self.0 - o.0, self.1 - o.1)
    }
}

impl<T: Real> Mul<T> for CPair<T> {
    type Output = Self;
    fn mul(self, x: T) -> Self {
        CPair(self.0 * x, self.1 * x)
    }
}

impl<T: Real> QuadValue<T> for CPair<T> {
    fn zero() -> Self {
        CPair(Complex::new(T::zero(), T::zero()), Complex::new(T::zero(), T::zero()))
    }
    fn norm(self) -> T {
        QuadValue::norm(self.0).hypot(QuadValue::norm(self.1))
    }
    fn parts(self) -> (f64, f64) {
        (to_f64(QuadValue::norm(self.0)), to_f64(QuadValue::norm(self.1)))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("quadrature did not converge after {evaluations} evaluations: partial ({partial_re:e}, {partial_im:e}), error estimate {error_estimate:e}")]
    NoConvergence {
        partial_re: f64,
        partial_im: f64,
        error_estimate: f64,
        evaluations: usize,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("non-finite integrand or function value at x = {0:e}")]
    NonFinite(f64),
    #[error("series terms not decaying after {terms} terms (last term {last:e})")]
    NotDecaying { terms: usize, last: f64 },
}

/// Adaptive quadrature controls.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance<T> {
    pub rel: T,
    pub abs: T,
    pub max_subdivisions: usize,
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Tolerance {
            rel: cst(1e-8),
            abs: T::from_f64(1e-300).unwrap_or_else(T::zero),
            max_subdivisions: 2000,
        }
    }
}

impl<T: Real> Tolerance<T> {
    pub fn rel(rel: T) -> Self {
        Tolerance { rel, ..Default::default() }
    }

    pub fn with_abs(mut self, abs: T) -> Self {
        self.abs = abs;
        self
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult<T, V> {
    pub value: V,
    pub error_estimate: T,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Segment<T, V> {
    a: T,
    b: T,
    value: V,
    error: T,
}

impl<T: Real, V> PartialEq for Segment<T, V> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Real, V> Eq for Segment<T, V> {}
impl<T: Real, V> PartialOrd for Segment<T, V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real, V> Ord for Segment<T, V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

/// One Gauss-Kronrod 7/15 panel with the QUADPACK error heuristic.
fn gk15<T, V, E, F>(f: &mut F, a: T, b: T) -> Result<(V, T), E>
where
    T: Real,
    V: QuadValue<T>,
    E: From<NumericsError>,
    F: FnMut(T) -> Result<V, E>,
{
    let half = cst::<T>(0.5);
    let center = half * (a + b);
    let hl = half * (b - a);
    let mut eval = |x: T| -> Result<V, E> {
        let v = f(x)?;
        if !v.norm().is_finite() {
            return Err(NumericsError::NonFinite(to_f64(x)).into());
        }
        Ok(v)
    };
    let fc = eval(center)?;
    let mut resk = fc * cst(WGK[7]);
    let mut resg = fc * cst(WG[3]);
    let mut resabs = fc.norm() * cst(WGK[7]);
    let mut fv1 = [V::zero(); 7];
    let mut fv2 = [V::zero(); 7];
    for j in 0..7 {
        let dx = hl * cst(XGK[j]);
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk = resk + (f1 + f2) * cst(WGK[j]);
        resabs = resabs + (f1.norm() + f2.norm()) * cst(WGK[j]);
        if j % 2 == 1 {
            resg = resg + (f1 + f2) * cst(WG[j / 2]);
        }
    }
    let mean = resk * half;
    let mut resasc = (fc - mean).norm() * cst(WGK[7]);
    for j in 0..7 {
        resasc = resasc + ((fv1[j] - mean).norm() + (fv2[j] - mean).norm()) * cst(WGK[j]);
    }
    let ahl = hl.abs();
    let resasc = resasc * ahl;
    let resabs = resabs * ahl;
    let mut err = ((resk - resg) * hl).norm();
    if resasc != T::zero() && err != T::zero() {
        let ratio = (cst::<T>(200.0) * err / resasc).powf(cst(1.5));
        err = resasc * ratio.min(T::one());
    }
    let eps = T::epsilon();
    if resabs > T::min_positive_value() / (cst::<T>(50.0) * eps) {
        err = err.max(cst::<T>(50.0) * eps * resabs);
    }
    Ok((resk * hl, err))
}

/// Fallible adaptive Gauss-Kronrod quadrature over `[a, b]`.
pub fn try_integrate_finite<T, V, E, F>(
    mut f: F,
    a: T,
    b: T,
    tol: &Tolerance<T>,
) -> Result<QuadratureResult<T, V>, E>
where
    T: Real,
    V: QuadValue<T>,
    E: From<NumericsError>,
    F: FnMut(T) -> Result<V, E>,
{
    if !(a < b) {
        if a == b {
            return Ok(QuadratureResult { value: V::zero(), error_estimate: T::zero(), evaluations: 1 });
        }
        return Err(NumericsError::Domain(format!("integration bounds out of order: a={:e}, b={:e}", to_f64(a), to_f64(b))).into());
    }
    let (v0, e0) = gk15(&mut f, a, b)?;
    let mut evaluations = 15;
    let mut total = v0;
    let mut total_err = e0;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v0, error: e0 });
    let half = cst::<T>(0.5);
    loop {
        if total_err <= (tol.rel * total.norm()).max(tol.abs) {
            break;
        }
        if heap.len() >= tol.max_subdivisions {
            let (re, im) = total.parts();
            return Err(NumericsError::NoConvergence {
                partial_re: re,
                partial_im: im,
                error_estimate: to_f64(total_err),
                evaluations,
            }
            .into());
        }
        let seg = heap.pop().expect("heap never empty");
        let mid = half * (seg.a + seg.b);
        if !(seg.a < mid && mid < seg.b) {
            // Interval exhausted at machine resolution; keep its estimate.
            heap.push(Segment { error: T::zero(), ..seg });
            total_err = heap.iter().fold(T::zero(), |s, x| s + x.error);
            continue;
        }
        let (v1, e1) = gk15(&mut f, seg.a, mid)?;
        let (v2, e2) = gk15(&mut f, mid, seg.b)?;
        evaluations += 30;
        total = total - seg.value + v1 + v2;
        total_err = total_err - seg.error + e1 + e2;
        heap.push(Segment { a: seg.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, error: e2 });
        if total_err < T::zero() {
            total_err = heap.iter().fold(T::zero(), |s, x| s + x.error);
        }
    }
    // Re-sum to shed accumulated cancellation in the running totals.
    let value = heap.iter().fold(V::zero(), |s, x| s + x.value);
    let error_estimate = heap.iter().fold(T::zero(), |s, x| s + x.error);
    Ok(QuadratureResult { value, error_estimate, evaluations })
}

/// Adaptive Gauss-Kronrod quadrature over `[a, b]`.
pub fn integrate_finite<T, V, F>(
    mut f: F,
    a: T,
    b: T,
    tol: &Tolerance<T>,
) -> Result<QuadratureResult<T, V>, NumericsError>
where
    T: Real,
    V: QuadValue<T>,
    F: FnMut(T) -> V,
{
    try_integrate_finite(|x| Ok::<V, NumericsError>(f(x)), a, b, tol)
}

/// Integral over `[a, ∞)` via `x = a + s·t/(1−t)`, `t ∈ [0, 1)`, anchored at `decay_scale = s`.
pub fn try_integrate_semiinfinite_from<T, V, E, F>(
    mut f: F,
    a: T,
    decay_scale: T,
    tol: &Tolerance<T>,
) -> Result<QuadratureResult<T, V>, E>
where
    T: Real,
    V: QuadValue<T>,
    E: From<NumericsError>,
    F: FnMut(T) -> Result<V, E>,
{
    if !(decay_scale > T::zero()) || !decay_scale.is_finite() {
        return Err(NumericsError::Domain(format!("decay_scale must be positive, got {:e}", to_f64(decay_scale))).into());
    }
    let one = T::one();
    let mapped = |t: T| -> Result<V, E> {
        let u = one - t;
        let x = a + decay_scale * t / u;
        if !x.is_finite() {
            return Ok(V::zero());
        }
        let jac = decay_scale / (u * u);
        let v = f(x)?;
        if v.norm() == T::zero() {
            return Ok(V::zero());
        }
        Ok(v * jac)
    };
    try_integrate_finite(mapped, T::zero(), one, tol)
}

/// Integral over `[0, ∞)` of an exponentially or algebraically decaying integrand.
pub fn integrate_semiinfinite<T, V, F>(
    mut f: F,
    decay_scale: T,
    tol: &Tolerance<T>,
) -> Result<QuadratureResult<T, V>, NumericsError>
where
    T: Real,
    V: QuadValue<T>,
    F: FnMut(T) -> V,
{
    try_integrate_semiinfinite_from(|x| Ok::<V, NumericsError>(f(x)), T::zero(), decay_scale, tol)
}

/// Finite integral split into equal panels, each integrated adaptively.
///
/// Used for oscillatory integrands: pass at least eight panels per period.
pub fn try_integrate_panels<T, V, E, F>(
    mut f: F,
    a: T,
    b: T,
    panels: usize,
    tol: &Tolerance<T>,
) -> Result<QuadratureResult<T, V>, E>
where
    T: Real,
    V: QuadValue<T>,
    E: From<NumericsError>,
    F: FnMut(T) -> Result<V, E>,
{
    let n = panels.max(1);
    let width = (b - a) / cst(n as f64);
    let mut value = V::zero();
    let mut error_estimate = T::zero();
    let mut evaluations = 0;
    // Each panel carries the absolute target implied by the running scale so
    // that panels near a node of the integrand do not over-refine.
    let mut scale = T::zero();
    for i in 0..n {
        let lo = a + width * cst(i as f64);
        let hi = if i + 1 == n { b } else { a + width * cst((i + 1) as f64) };
        let local = Tolerance { abs: tol.abs.max(tol.rel * scale / cst(n as f64)), ..*tol };
        let r = try_integrate_finite(&mut f, lo, hi, &local)?;
        value = value + r.value;
        error_estimate = error_estimate + r.error_estimate;
        evaluations += r.evaluations;
        scale = scale.max(value.norm());
    }
    Ok(QuadratureResult { value, error_estimate, evaluations })
}

/// Integral from `a` over sorted interior breakpoints, then either to `upper`
/// or to infinity with a tail anchored at the last breakpoint.
pub fn try_integrate_breakpoints<T, V, E, F>(
    mut f: F,
    a: T,
    breakpoints: &[T],
    upper: Option<T>,
    tol: &Tolerance<T>,
) -> Result<QuadratureResult<T, V>, E>
where
    T: Real,
    V: QuadValue<T>,
    E: From<NumericsError>,
    F: FnMut(T) -> Result<V, E>,
{
    let mut pts: Vec<T> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x.is_finite() && upper.is_none_or(|u| x < u))
        .collect();
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    pts.dedup();
    let mut value = V::zero();
    let mut error_estimate = T::zero();
    let mut evaluations = 0;
    let mut lo = a;
    // Later pieces inherit an absolute floor from the running total.
    for &p in &pts {
        let local = Tolerance { abs: tol.abs.max(tol.rel * value.norm()), ..*tol };
        let r = try_integrate_finite(&mut f, lo, p, &local)?;
        value = value + r.value;
        error_estimate = error_estimate + r.error_estimate;
        evaluations += r.evaluations;
        lo = p;
    }
    let local = Tolerance { abs: tol.abs.max(tol.rel * value.norm()), ..*tol };
    let r = match upper {
        Some(u) => try_integrate_finite(&mut f, lo, u, &local)?,
        None => {
            let scale = if lo > T::zero() { lo } else { T::one() };
            try_integrate_semiinfinite_from(&mut f, lo, scale, &local)?
        }
    };
    value = value + r.value;
    error_estimate = error_estimate + r.error_estimate;
    evaluations += r.evaluations;
    Ok(QuadratureResult { value, error_estimate, evaluations })
}

/// Breakpoints bracketing narrow spectral features `(center, width)` on `(0, ∞)`.
pub fn feature_breakpoints<T: Real>(features: &[(T, T)]) -> Vec<T> {
    let mut pts = Vec::new();
    for &(c, w) in features {
        if !(c > T::zero()) {
            continue;
        }
        pts.push(c);
        for k in [1.0, 10.0, 100.0, 1000.0] {
            let d = w * cst(k);
            if d > T::zero() {
                pts.push(c + d);
                if c - d > T::zero() {
                    pts.push(c - d);
                }
            }
        }
    }
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    pts.dedup();
    pts
}

/// Controls for Matsubara-type primed sums.
#[derive(Debug, Clone, Copy)]
pub struct MatsubaraOptions<T> {
    pub rel_tol: T,
    /// Hard cap on the number of explicitly summed terms.
    pub n_max: usize,
    /// Terms always summed before the tail test is applied.
    pub min_terms: usize,
}

impl<T: Real> Default for MatsubaraOptions<T> {
    fn default() -> Self {
        MatsubaraOptions { rel_tol: cst(1e-8), n_max: 100_000, min_terms: 2 }
    }
}

fn tail_converged<T: Real>(prev: T, last: T, sum: T, rel_tol: T) -> bool {
    let (p, l) = (prev.abs(), last.abs());
    if l == T::zero() && p == T::zero() {
        return true;
    }
    if p == T::zero() || l >= p {
        return false;
    }
    let r = l / p;
    let tail = l * r / (T::one() - r);
    tail <= rel_tol * sum.abs()
}

/// Primed sum `term(0)/2 + Σ_{n≥1} term(n)` with a geometric tail bound.
///
/// The temperature is only validated here; the caller folds it into `term`.
pub fn try_matsubara_sum<T, E, F>(mut term: F, temperature: T, opts: &MatsubaraOptions<T>) -> Result<T, E>
where
    T: Real,
    E: From<NumericsError>,
    F: FnMut(usize) -> Result<T, E>,
{
    if !(temperature > T::zero()) {
        return Err(NumericsError::Domain(format!("temperature must be positive, got {:e}", to_f64(temperature))).into());
    }
    let mut sum = term(0)? * cst(0.5);
    let mut prev = sum * cst(2.0);
    for n in 1..=opts.n_max {
        let t = term(n)?;
        if !t.is_finite() {
            return Err(NumericsError::NonFinite(n as f64).into());
        }
        sum = sum + t;
        if n >= opts.min_terms.max(1) && tail_converged(prev, t, sum, opts.rel_tol) {
            return Ok(sum);
        }
        prev = t;
    }
    Err(NumericsError::NotDecaying { terms: opts.n_max, last: to_f64(prev) }.into())
}

pub fn matsubara_sum<T, F>(mut term: F, temperature: T, opts: &MatsubaraOptions<T>) -> Result<T, NumericsError>
where
    T: Real,
    F: FnMut(usize) -> T,
{
    try_matsubara_sum(|n| Ok::<T, NumericsError>(term(n)), temperature, opts)
}

/// Primed sum over a term defined for real index, with an integral tail.
///
/// Terms are summed explicitly up to `n_direct`; if the geometric tail bound
/// has not been met by then, the remainder is replaced by the midpoint
/// Euler-Maclaurin estimate `∫_{N+½}^∞ term + (term(N+1) − term(N))/24`.
/// This keeps algebraically decaying series (atomic polarizabilities at short
/// distance) affordable.
pub fn try_matsubara_sum_with_tail<T, E, F>(
    mut term: F,
    temperature: T,
    opts: &MatsubaraOptions<T>,
    n_direct: usize,
) -> Result<T, E>
where
    T: Real,
    E: From<NumericsError>,
    F: FnMut(T) -> Result<T, E>,
{
    if !(temperature > T::zero()) {
        return Err(NumericsError::Domain(format!("temperature must be positive, got {:e}", to_f64(temperature))).into());
    }
    let t0 = term(T::zero())?;
    let mut sum = t0 * cst(0.5);
    let mut prev = t0;
    let n_direct = n_direct.max(opts.min_terms).max(2);
    for n in 1..=n_direct {
        let t = term(cst(n as f64))?;
        if !t.is_finite() {
            return Err(NumericsError::NonFinite(n as f64).into());
        }
        sum = sum + t;
        if n >= opts.min_terms.max(1) && tail_converged(prev, t, sum, opts.rel_tol) {
            return Ok(sum);
        }
        prev = t;
    }
    let start = cst::<T>(n_direct as f64 + 0.5);
    let next = term(cst((n_direct + 1) as f64))?;
    let tol = Tolerance::rel(opts.rel_tol);
    let tail = try_integrate_semiinfinite_from(&mut term, start, start, &tol)?;
    Ok(sum + tail.value + (next - prev) / cst(24.0))
}

/// Central difference with one Richardson step, `h = scale·max(|x|, scale)·∛ε`.
pub fn try_derivative_central<T, E, F>(mut f: F, x: T, scale: T) -> Result<T, E>
where
    T: Real,
    E: From<NumericsError>,
    F: FnMut(T) -> Result<T, E>,
{
    if !(scale > T::zero()) {
        return Err(NumericsError::Domain(format!("step scale must be positive, got {:e}", to_f64(scale))).into());
    }
    let h = scale * x.abs().max(scale) * T::epsilon().cbrt();
    central_richardson(&mut f, x, h)
}

fn central_richardson<T, E, F>(f: &mut F, x: T, h: T) -> Result<T, E>
where
    T: Real,
    E: From<NumericsError>,
    F: FnMut(T) -> Result<T, E>,
{
    let mut sample = |y: T| -> Result<T, E> {
        let v = f(y)?;
        if !v.is_finite() {
            return Err(NumericsError::NonFinite(to_f64(y)).into());
        }
        Ok(v)
    };
    let two = cst::<T>(2.0);
    let d1 = (sample(x + h)? - sample(x - h)?) / (two * h);
    let h2 = h / two;
    let d2 = (sample(x + h2)? - sample(x - h2)?) / (two * h2);
    Ok((cst::<T>(4.0) * d2 - d1) / cst(3.0))
}

/// As [`try_derivative_central`], for functions defined only on `x > 0`:
/// the step is shrunk so that every sample stays positive.
pub fn try_derivative_central_positive<T, E, F>(mut f: F, x: T, scale: T) -> Result<T, E>
where
    T: Real,
    E: From<NumericsError>,
    F: FnMut(T) -> Result<T, E>,
{
    if !(x > T::zero()) {
        return Err(NumericsError::Domain(format!("positive-domain derivative at x = {:e}", to_f64(x))).into());
    }
    if !(scale > T::zero()) {
        return Err(NumericsError::Domain(format!("step scale must be positive, got {:e}", to_f64(scale))).into());
    }
    let mut h = scale * x.abs().max(scale) * T::epsilon().cbrt();
    if x - h <= T::zero() {
        h = x * cst(0.25);
    }
    central_richardson(&mut f, x, h)
}

pub fn derivative_central<T, F>(mut f: F, x: T, scale: T) -> Result<T, NumericsError>
where
    T: Real,
    F: FnMut(T) -> T,
{
    try_derivative_central(|y| Ok::<T, NumericsError>(f(y)), x, scale)
}

/// `n` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn log_grid<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            let step = (b - a) / cst((n - 1) as f64);
            (0..n)
                .map(|i| if i + 1 == n { hi } else { (a + step * cst(i as f64)).exp() })
                .collect()
        }
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linear_grid<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / cst((n - 1) as f64);
            (0..n).map(|i| if i + 1 == n { hi } else { lo + step * cst(i as f64) }).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    #[test]
    fn finite_examples() {
        let r = integrate_finite(|_| 1.0, 0.0, 1.0, &tol()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
        assert!(r.error_estimate >= 0.0 && r.evaluations >= 1);
        let r = integrate_finite(f64::sin, 0.0, PI, &tol()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8 * 2.0);
        // sin(50π)/50: zero up to the rounding of π itself.
        let r = integrate_finite(|x: f64| (50.0 * x).cos(), 0.0, PI, &tol().with_abs(1e-12)).unwrap();
        assert!(r.value.abs() < 1e-12);
    }

    #[test]
    fn semiinfinite_examples() {
        let r = integrate_semiinfinite(|x: f64| (-x).exp(), 1.0, &tol()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8);
        let r = integrate_semiinfinite(|x: f64| x * (-x).exp(), 1.0, &tol()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8);
        let r = integrate_semiinfinite(|x: f64| x * x * (-2.0 * x).exp(), 0.5, &tol()).unwrap();
        assert!((r.value - 0.25).abs() < 0.25e-8);
    }

    #[test]
    fn complex_integrand() {
        // ∫_0^π e^{ix} dx = 2i
        let r = integrate_finite(|x: f64| Complex::new(x.cos(), x.sin()), 0.0, PI, &tol()).unwrap();
        assert!(r.value.re.abs() < 1e-12 && (r.value.im - 2.0).abs() < 1e-8);
    }

    #[test]
    fn panels_oscillatory() {
        let r = try_integrate_panels(
            |x: f64| Ok::<_, NumericsError>((40.0 * x).sin().powi(2)),
            0.0,
            PI,
            8 * 40,
            &tol(),
        )
        .unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-8);
    }

    #[test]
    fn nonconvergence_reports_partial() {
        let tight = Tolerance { rel: 1e-14, abs: 0.0, max_subdivisions: 3 };
        let err = integrate_finite(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &tight).unwrap_err();
        match err {
            NumericsError::NoConvergence { partial_re, evaluations, .. } => {
                assert!(partial_re > 1.0 && evaluations > 15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn matsubara_examples() {
        let o = MatsubaraOptions::default();
        let s = matsubara_sum(|n| if n == 0 { 1.0 } else { 0.0 }, 300.0, &o).unwrap();
        assert_eq!(s, 0.5);
        let s = matsubara_sum(|n| 0.5f64.powi(n as i32), 300.0, &o).unwrap();
        assert!((s - 1.5).abs() < 1.5e-8);
        let s = matsubara_sum(|_| 0.0, 300.0, &o).unwrap();
        assert_eq!(s, 0.0);
        assert!(matches!(matsubara_sum(|_| 1.0, 0.0, &o), Err(NumericsError::Domain(_))));
        let few = MatsubaraOptions { n_max: 50, ..o };
        assert!(matches!(matsubara_sum(|_| 1.0, 1.0, &few), Err(NumericsError::NotDecaying { .. })));
    }

    #[test]
    fn matsubara_tail_on_power_law() {
        // ½·1 + Σ_{n≥1} 1/(1+n)² = ½ + π²/6 − 1
        let exact = 0.5 + PI * PI / 6.0 - 1.0;
        let o = MatsubaraOptions { rel_tol: 1e-10, ..Default::default() };
        let s = try_matsubara_sum_with_tail(|x: f64| Ok::<_, NumericsError>(1.0 / (1.0 + x).powi(2)), 1.0, &o, 40).unwrap();
        assert!((s - exact).abs() < 1e-7 * exact, "{s} vs {exact}");
    }

    #[test]
    fn derivative_examples() {
        let d = derivative_central(|x: f64| x * x, 3.0, 1.0).unwrap();
        assert!((d - 6.0).abs() < 1e-5);
        let d = derivative_central(|x: f64| x.powi(-3), 2.0, 1.0).unwrap();
        assert!((d + 0.1875).abs() < 1e-5);
        let d = derivative_central(|x: f64| (-2.0 * x).exp(), 1.0, 1.0).unwrap();
        assert!((d + 2.0 * (-2.0f64).exp()).abs() < 1e-5);
        assert!(derivative_central(|x: f64| (x - 3.0).ln(), 3.0, 1.0).is_err());
    }

    #[test]
    fn derivative_positive_shrinks_step() {
        let d = try_derivative_central_positive(
            |x: f64| if x > 0.0 { Ok(x.ln()) } else { Err(NumericsError::Domain("neg".into())) },
            1e-6,
            1.0,
        )
        .unwrap();
        assert!((d * 1e-6 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn f32_engines() {
        let t = Tolerance::<f32>::rel(1e-5);
        let r = integrate_finite(|x: f32| x.sin(), 0.0f32, std::f32::consts::PI, &t).unwrap();
        assert!((r.value - 2.0).abs() < 1e-4);
        let r = integrate_semiinfinite(|x: f32| (-x).exp(), 1.0f32, &t).unwrap();
        assert!((r.value - 1.0).abs() < 1e-4);
        let d = derivative_central(|x: f32| x * x, 3.0f32, 1.0).unwrap();
        assert!((d - 6.0).abs() < 1e-2);
    }

    #[test]
    fn grids() {
        let g = log_grid(1e-9, 1e-4, 6);
        assert_eq!(g.len(), 6);
        assert_eq!(g[5], 1e-4);
        assert!((g[1] / 1e-8 - 1.0).abs() < 1e-12);
        let g = linear_grid(0.0, 1.0, 5);
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }
}
