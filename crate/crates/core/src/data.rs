//! Initial data `(u₀, u₁)` in the energy space `W₀^{1,2} × L²`.

use std::fmt;
use std::sync::Arc;

use crate::quad::{integrate, QuadConfig};
use crate::spectrum::{eigenfunction, find_eigenvalues, Branch, SpectralProblem, SpectrumError};
use crate::spline::{CubicSpline, SplineError};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("no real eigenvalue with index {index} for alpha = {alpha}")]
    NoSuchMode { index: usize, alpha: f64 },
    #[error("sample positions must lie in [0, 1]")]
    OutOfRange,
    #[error(transparent)]
    Spline(#[from] SplineError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// Displacement `u₀` (with its derivative) and velocity `u₁` as functions
/// on `[0, 1]`.
#[derive(Clone)]
pub struct InitialData {
    u0: RealFn,
    du0: RealFn,
    u1: RealFn,
    label: String,
}

impl fmt::Debug for InitialData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InitialData").field("label", &self.label).finish()
    }
}

impl InitialData {
    pub fn new<A, B, C>(u0: A, du0: B, u1: C, label: impl Into<String>) -> Self
    where
        A: Fn(f64) -> f64 + Send + Sync + 'static,
        B: Fn(f64) -> f64 + Send + Sync + 'static,
        C: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            u0: Arc::new(u0),
            du0: Arc::new(du0),
            u1: Arc::new(u1),
            label: label.into(),
        }
    }

    pub fn zero() -> Self {
        Self::new(|_| 0.0, |_| 0.0, |_| 0.0, "zero")
    }

    /// `u₀ = sin(mπx)`, `u₁ = 0`.
    pub fn sine(m: u32) -> Self {
        let k = m as f64 * std::f64::consts::PI;
        Self::new(move |x| (k * x).sin(), move |x| k * (k * x).cos(), |_| 0.0, format!("sine:{m}"))
    }

    /// Smooth bump `exp(−1/(1−s²))`, `s = (x − ½)/¼`, at rest.
    pub fn bump() -> Self {
        const C: f64 = 0.5;
        const W: f64 = 0.25;
        let u0 = |x: f64| {
            let s = (x - C) / W;
            if s.abs() < 1.0 {
                (-1.0 / (1.0 - s * s)).exp()
            } else {
                0.0
            }
        };
        let du0 = move |x: f64| {
            let s = (x - C) / W;
            if s.abs() < 1.0 {
                let q = 1.0 - s * s;
                u0(x) * (-2.0 * s / (q * q)) / W
            } else {
                0.0
            }
        };
        Self::new(u0, du0, |_| 0.0, "bump")
    }

    /// Standing wave `(f, λf)` for the `k`-th real eigenvalue (ascending,
    /// counted from 1). The solution is `e^{λt} f(x)`.
    pub fn mode(problem: &SpectralProblem, k: usize) -> Result<Self, DataError> {
        let evs = find_eigenvalues(problem, 1, 1.0)?;
        let ev = evs
            .into_iter()
            .filter(|e| e.branch == Branch::Real)
            .nth(k.wrapping_sub(1))
            .ok_or(DataError::NoSuchMode { index: k, alpha: problem.alpha() })?;
        let mode = eigenfunction(problem, ev);
        let lam = ev.value.re;
        let (m1, m2, m3) = (mode, mode, mode);
        Ok(Self::new(
            move |x| m1.eval(x).re,
            move |x| m2.eval_with_derivative(x).1.re,
            move |x| lam * m3.eval(x).re,
            format!("mode:{k}"),
        ))
    }

    /// Cubic-spline interpolation of sampled data. Missing endpoints are
    /// filled with the Dirichlet values `u₀ = u₁ = 0`.
    pub fn from_samples(x: &[f64], u0: &[f64], u1: &[f64], label: impl Into<String>) -> Result<Self, DataError> {
        if x.iter().any(|&t| !(0.0..=1.0).contains(&t)) {
            return Err(DataError::OutOfRange);
        }
        if x.len() != u0.len() || x.len() != u1.len() {
            return Err(SplineError::LengthMismatch(x.len(), u0.len().min(u1.len())).into());
        }
        let (mut xs, mut a, mut b) = (x.to_vec(), u0.to_vec(), u1.to_vec());
        if xs.first().map_or(true, |&t| t > 0.0) {
            xs.insert(0, 0.0);
            a.insert(0, 0.0);
            b.insert(0, 0.0);
        }
        if xs.last().map_or(true, |&t| t < 1.0) {
            xs.push(1.0);
            a.push(0.0);
            b.push(0.0);
        }
        let s0 = Arc::new(CubicSpline::new(xs.clone(), a)?);
        let s1 = CubicSpline::new(xs, b)?;
        let d0 = Arc::clone(&s0);
        Ok(Self::new(move |t| s0.eval(t), move |t| d0.derivative(t), move |t| s1.eval(t), label))
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &InitialData, b: f64) -> Self {
        let (p, q) = (self.clone(), other.clone());
        let (p2, q2) = (self.clone(), other.clone());
        let (p3, q3) = (self.clone(), other.clone());
        Self::new(
            move |x| a * p.u0(x) + b * q.u0(x),
            move |x| a * p2.du0(x) + b * q2.du0(x),
            move |x| a * p3.u1(x) + b * q3.u1(x),
            format!("{a}*{}+{b}*{}", self.label, other.label),
        )
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn u0(&self, x: f64) -> f64 {
        (self.u0)(x)
    }

    pub fn du0(&self, x: f64) -> f64 {
        (self.du0)(x)
    }

    pub fn u1(&self, x: f64) -> f64 {
        (self.u1)(x)
    }

    /// `u₀(x)/x`, continued by `u₀'(0)` at the origin.
    pub fn u0_over_x(&self, x: f64) -> f64 {
        if x == 0.0 {
            self.du0(0.0)
        } else {
            self.u0(x) / x
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Samples `(u₀(xᵢ), u₁(xᵢ))`.
    pub fn sample(&self, xs: &[f64]) -> (Vec<f64>, Vec<f64>) {
        (xs.iter().map(|&x| self.u0(x)).collect(), xs.iter().map(|&x| self.u1(x)).collect())
    }

    /// `⟨u₀', g₀'⟩ + ⟨u₁, g₁⟩` against another pair given through
    /// `(g₀', g₁)`.
    pub fn energy_inner<G, H>(&self, dg0: G, g1: H) -> f64
    where
        G: Fn(f64) -> f64,
        H: Fn(f64) -> f64,
    {
        let cfg = fine_quad();
        integrate(|x| self.du0(x) * dg0(x) + self.u1(x) * g1(x), 0.0, 1.0, cfg).0
    }

    /// Energy norm `(‖u₀'‖² + ‖u₁‖²)^{1/2}`.
    pub fn energy_norm(&self) -> f64 {
        self.energy_inner(|x| self.du0(x), |x| self.u1(x)).max(0.0).sqrt()
    }
}

/// Tight tolerances for inner products of smooth data.
pub(crate) fn fine_quad() -> QuadConfig {
    QuadConfig {
        abs_tol: 1e-14,
        rel_tol: 1e-13,
        max_intervals: 4000,
    }
}

/// Parses `sine:m`, `bump`, `mode:k` and `zero`. File data is read by the
/// caller and passed to [`InitialData::from_samples`].
pub fn preset(spec: &str, problem: &SpectralProblem) -> Result<InitialData, DataError> {
    let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let index = |s: &str| s.parse::<u32>().ok().filter(|&m| m >= 1);
    match name {
        "sine" => index(if arg.is_empty() { "1" } else { arg })
            .map(InitialData::sine)
            .ok_or_else(|| DataError::UnknownPreset(spec.into())),
        "bump" if arg.is_empty() => Ok(InitialData::bump()),
        "zero" if arg.is_empty() => Ok(InitialData::zero()),
        "mode" => {
            let k = index(if arg.is_empty() { "1" } else { arg }).ok_or_else(|| DataError::UnknownPreset(spec.into()))?;
            InitialData::mode(problem, k as usize)
        }
        _ => Err(DataError::UnknownPreset(spec.into())),
    }
}
