//! Laplace-domain solution for integer `α = n+1`.
//!
//! The transform `U(x,τ)` of a solution solves `T(τ)U = r` with
//! `r(x,τ) = τu₀ + u₁ + 2(n+1)u₀/x`. Its Green's function factors as
//! `y_L(min(x,y)) R(max(x,y)) / (n+1)` with `y_L(s) = s e^{τs} Lₙ⁽¹⁾(−2τs)`.
//! The right solution `R` is the bracket of 𝒢₁ minus the rank-one 𝒢₂
//! correction, so `U = U₁ + U₂` is assembled from two cumulative integrals.

use crate::data::InitialData;
use crate::evolution::projection_condition;
use crate::quad::{integrate_complex, GaussLegendre, QuadConfig};
use crate::specfun::{exp_integral_e1, laguerre, laguerre_derivative, p_poly, PolynomialCoeffs, SpecfunError};
use crate::spectrum::{integer_modes, laguerre_eigenvalues, SpectralProblem};
use crate::C64;

/// Smallest admissible `|aₖ|`.
pub const MIN_COEFF: f64 = 1e-12;
/// `U` is not evaluated closer than this to a pole.
pub const POLE_GUARD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LaplaceError {
    #[error("partial fractions need n >= 1")]
    DegreeZero,
    #[error("partial-fraction coefficient a_{k} = {value:e} is numerically zero")]
    VanishingCoefficient { k: usize, value: f64 },
    #[error("kernel needs Re tau > 0, got tau = {0}")]
    Domain(C64),
    #[error("tau = {tau} lies within {distance:e} of the pole {pole}")]
    PoleProximity { tau: C64, pole: f64, distance: f64 },
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

/// `Pₙ(−2τ)/Lₙ⁽¹⁾(−2τ) = 1 + Σ aₖ/(τ − μₖ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractions {
    pub n: usize,
    /// `μₖ`, ascending.
    pub poles: Vec<f64>,
    pub coeffs: Vec<f64>,
}

/// Residues `aₖ = Pₙ(−2μₖ) / (−2 Lₙ⁽¹⁾'(−2μₖ))`.
pub fn partial_fractions(n: usize) -> Result<PartialFractions, LaplaceError> {
    if n == 0 {
        return Err(LaplaceError::DegreeZero);
    }
    let problem = SpectralProblem::new(n as f64 + 1.0).expect("positive alpha");
    let poles: Vec<f64> = laguerre_eigenvalues(&problem, n).iter().map(|e| e.value.re).collect();
    let p = p_poly(n);
    let mut coeffs = Vec::with_capacity(n);
    for (k, &mu) in poles.iter().enumerate() {
        let xi = C64::new(-2.0 * mu, 0.0);
        let a = p.eval_real(xi.re) / (-2.0 * laguerre_derivative(n, 1, xi).re);
        if !(a.abs() > MIN_COEFF) {
            return Err(LaplaceError::VanishingCoefficient { k: k + 1, value: a });
        }
        coeffs.push(a);
    }
    Ok(PartialFractions { n, poles, coeffs })
}

impl PartialFractions {
    /// `Σ aₖ/(τ − μₖ)`.
    pub fn pole_sum(&self, tau: C64) -> C64 {
        self.poles.iter().zip(&self.coeffs).map(|(&mu, &a)| a / (tau - mu)).sum()
    }

    /// `Pₙ(−2τ)/Lₙ⁽¹⁾(−2τ) − 1 − Σ aₖ/(τ − μₖ)`.
    pub fn reconstruction_residual(&self, tau: C64) -> C64 {
        let xi = -2.0 * tau;
        p_poly(self.n).eval(xi) / laguerre(self.n, 1, xi) - 1.0 - self.pole_sum(tau)
    }

    fn check_pole_distance(&self, tau: C64) -> Result<(), LaplaceError> {
        for &mu in &self.poles {
            let distance = (tau - mu).norm();
            if distance < POLE_GUARD {
                return Err(LaplaceError::PoleProximity { tau, pole: mu, distance });
            }
        }
        Ok(())
    }
}

/// `r(x,τ) = τu₀(x) + u₁(x) + 2(n+1)u₀(x)/x`.
#[derive(Debug, Clone)]
pub struct LaplaceRHS {
    pub data: InitialData,
    pub n: usize,
}

impl LaplaceRHS {
    pub fn new(data: InitialData, n: usize) -> Self {
        Self { data, n }
    }

    pub fn eval(&self, x: f64, tau: C64) -> C64 {
        tau * self.data.u0(x) + self.data.u1(x) + 2.0 * (self.n as f64 + 1.0) * self.data.u0_over_x(x)
    }
}

/// Pieces of the Green's function at fixed `τ`.
struct Kernel {
    n: usize,
    tau: C64,
    p: PolynomialCoeffs,
    e2: C64,
    pole_sum: C64,
    gl: GaussLegendre,
}

impl Kernel {
    fn new(n: usize, tau: C64, pole_sum: C64) -> Self {
        Self {
            n,
            tau,
            p: p_poly(n),
            e2: (-2.0 * tau).exp(),
            pole_sum,
            gl: GaussLegendre::new(32),
        }
    }

    fn y_left(&self, s: f64) -> C64 {
        s * (self.tau * s).exp() * laguerre(self.n, 1, -2.0 * self.tau * s)
    }

    /// `∫ₛ¹ e^{−2τt}/t dt`.
    fn tail_integral(&self, s: f64) -> Result<C64, SpecfunError> {
        let tau = self.tau;
        if tau.re > 0.0 {
            return Ok(exp_integral_e1(2.0 * tau * s)? - exp_integral_e1(2.0 * tau)?);
        }
        // −ln s + ∫ₛ¹ (e^{−2τt} − 1)/t dt, the second integrand being entire
        let panels = (2.0 * tau.norm() * (1.0 - s)).ceil() as usize + 1;
        let h = (1.0 - s) / panels as f64;
        let mut acc = C64::new(-s.ln(), 0.0);
        for k in 0..panels {
            let lo = s + k as f64 * h;
            for (t, w) in self.gl.mapped(lo, lo + h) {
                let z = -2.0 * tau * t;
                let g = if z.norm() < 1e-6 { -2.0 * tau * (1.0 + 0.5 * z) } else { (z.exp() - 1.0) / t };
                acc += w * g;
            }
        }
        Ok(acc)
    }

    /// `e^{−τs}Pₙ(−2τs) − y_L(s)(2τ∫ₛ¹e^{−2τt}/t dt + e^{−2τ})`, the bracket
    /// of 𝒢₁.
    fn phi(&self, s: f64) -> Result<C64, SpecfunError> {
        let tau = self.tau;
        if s == 0.0 {
            // y_L(s) ln s → 0
            return Ok(self.p.eval(C64::new(0.0, 0.0)));
        }
        let i = self.tail_integral(s)?;
        Ok((-tau * s).exp() * self.p.eval(-2.0 * tau * s) - self.y_left(s) * (2.0 * tau * i + self.e2))
    }

    /// Right solution, vanishing at `s = 1`.
    #[cfg(test)]
    fn right(&self, s: f64) -> Result<C64, SpecfunError> {
        Ok(self.phi(s)? - self.y_left(s) * self.e2 * self.pole_sum)
    }
}

/// 𝒢₁(x, y, τ) for `0 < y ≤ x < 1` and `Re τ > 0`.
pub fn green_g1(n: usize, x: f64, y: f64, tau: C64) -> Result<C64, LaplaceError> {
    if tau.re <= 0.0 {
        return Err(LaplaceError::Domain(tau));
    }
    let k = Kernel::new(n, tau, C64::new(0.0, 0.0));
    Ok(k.y_left(y) * k.phi(x)? / (n as f64 + 1.0))
}

/// 𝒢₂(x, y, τ) = −x y e^{τ(x+y−2)} Lₙ⁽¹⁾(−2τx) Lₙ⁽¹⁾(−2τy) / (n+1).
pub fn green_g2(n: usize, x: f64, y: f64, tau: C64) -> C64 {
    -x * y * (tau * (x + y - 2.0)).exp() * laguerre(n, 1, -2.0 * tau * x) * laguerre(n, 1, -2.0 * tau * y) / (n as f64 + 1.0)
}

fn quad_cfg() -> QuadConfig {
    QuadConfig {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        max_intervals: 200,
    }
}

/// `U₁` and `U₂` on an increasing grid in `[0, 1]`.
pub fn solve_laplace_parts(data: &InitialData, n: usize, tau: C64, x_grid: &[f64]) -> Result<(Vec<C64>, Vec<C64>), LaplaceError> {
    let pf = if n > 0 {
        let pf = partial_fractions(n)?;
        pf.check_pole_distance(tau)?;
        Some(pf)
    } else {
        None
    };
    let s = pf.as_ref().map_or(C64::new(0.0, 0.0), |p| p.pole_sum(tau));
    let k = Kernel::new(n, tau, s);
    let rhs = LaplaceRHS::new(data.clone(), n);
    let cfg = quad_cfg();
    let m = x_grid.len();

    // breakpoints 0 = b₀ ≤ x₀ ≤ … ≤ x_{m−1} ≤ 1
    let mut bounds = Vec::with_capacity(m + 2);
    bounds.push(0.0);
    bounds.extend_from_slice(x_grid);
    bounds.push(1.0);

    let mut err: Option<SpecfunError> = None;
    let mut guarded = |v: Result<C64, SpecfunError>| -> C64 {
        v.unwrap_or_else(|e| {
            err.get_or_insert(e);
            C64::new(0.0, 0.0)
        })
    };

    // pieces over [bᵢ, bᵢ₊₁] of ∫ y_L r, ∫ Φ r and ∫ y_L r for the rank-one term
    let mut left = vec![C64::new(0.0, 0.0); m + 1];
    let mut phi_r = vec![C64::new(0.0, 0.0); m + 1];
    for i in 0..=m {
        let (a, b) = (bounds[i], bounds[i + 1]);
        if b <= a {
            continue;
        }
        left[i] = integrate_complex(|y| k.y_left(y) * rhs.eval(y, tau), a, b, cfg).value;
        phi_r[i] = integrate_complex(|y| guarded(k.phi(y)) * rhs.eval(y, tau), a, b, cfg).value;
    }
    if let Some(e) = err {
        return Err(e.into());
    }

    let total_left: C64 = left.iter().sum();
    let mut u1 = vec![C64::new(0.0, 0.0); m];
    let mut u2 = vec![C64::new(0.0, 0.0); m];
    let scale = 1.0 / (n as f64 + 1.0);
    let mut acc_left = C64::new(0.0, 0.0);
    let mut acc_phi: C64 = phi_r.iter().sum();
    for (j, &x) in x_grid.iter().enumerate() {
        acc_left += left[j];
        acc_phi -= phi_r[j];
        let yl = k.y_left(x);
        let phi = k.phi(x)?;
        u1[j] = scale * (phi * acc_left + yl * acc_phi);
        u2[j] = -scale * k.e2 * k.pole_sum * yl * total_left;
    }
    Ok((u1, u2))
}

/// `U(x,τ) = U₁ + U₂` on `x_grid`, for `τ` off the poles `μₖ`.
pub fn solve_laplace_u(data: &InitialData, n: usize, tau: C64, x_grid: &[f64]) -> Result<Vec<C64>, LaplaceError> {
    let (u1, u2) = solve_laplace_parts(data, n, tau, x_grid)?;
    Ok(u1.iter().zip(&u2).map(|(a, b)| a + b).collect())
}

/// Closed form for `α = 1`:
///
/// ```text
/// U(x,τ) = x ∫ₓ¹ u₀(r)/r e^{τ(x−r)} dr
///        + x ∫ₓ¹ r⁻² ∫₀ʳ (u₀(s) − s u₀'(s) + s u₁(s)) e^{τ(x−2r+s)} ds dr
/// ```
pub fn laplace_u_alpha1(data: &InitialData, x: f64, tau: C64) -> C64 {
    let cfg = quad_cfg();
    let first = integrate_complex(|r| data.u0_over_x(r) * (tau * (x - r)).exp(), x, 1.0, cfg).value;
    let inner = |r: f64| {
        integrate_complex(
            |s| (data.u0(s) - s * data.du0(s) + s * data.u1(s)) * (tau * (x - 2.0 * r + s)).exp(),
            0.0,
            r,
            cfg,
        )
        .value
    };
    let second = integrate_complex(|r| inner(r) / (r * r), x, 1.0, cfg).value;
    x * (first + second)
}

/// Tail of the solution for `t > 2`,
///
/// ```text
/// u₂(x,t) = −Σₖ aₖ/(n+1) e^{μₖ(t−2)} fₖ(x) ⟨r(·,μₖ), fₖ⟩
/// ```
///
/// where the pairing is taken as `−μₖ⁻¹⟨(u₀,u₁),(fₖ,−μₖfₖ)⟩_H`.
pub fn tail_u2(data: &InitialData, n: usize, t: f64, x_grid: &[f64]) -> Result<Vec<f64>, LaplaceError> {
    let pf = partial_fractions(n)?;
    let modes = integer_modes(n);
    let h_pairing = projection_condition(data, n);
    let mut out = vec![0.0; x_grid.len()];
    for ((mode, &a), (&mu, &hp)) in modes.iter().zip(&pf.coeffs).zip(pf.poles.iter().zip(&h_pairing)) {
        let l2_pairing = -hp / mu;
        let weight = -a / (n as f64 + 1.0) * (mu * (t - 2.0)).exp() * l2_pairing;
        for (o, &x) in out.iter_mut().zip(x_grid) {
            *o += weight * mode.eval(x).re;
        }
    }
    Ok(out)
}

/// `⟨r(·,μₖ), fₖ⟩_{L²}` by direct quadrature, `k = 1..n`.
pub fn rhs_mode_pairing(data: &InitialData, n: usize) -> Vec<f64> {
    let modes = integer_modes(n);
    let rhs = LaplaceRHS::new(data.clone(), n);
    let cfg = crate::data::fine_quad();
    modes
        .iter()
        .map(|m| {
            let mu = m.lambda();
            integrate_complex(|x| rhs.eval(x, mu) * m.eval(x), 0.0, 1.0, cfg).value.re
        })
        .collect()
}
