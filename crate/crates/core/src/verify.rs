//! Numerical certificates: the Hardy inequality, the resolvent lower bound,
//! the bound on the largest eigenvalue for integer `α`, and the identity
//! between the orthogonality condition and the Laplace right-hand side.
//!
//! Randomised checks take a seed; trial `i` draws from the ChaCha stream `i`
//! so results do not depend on the number of worker threads.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::data::{fine_quad, InitialData};
use crate::evolution::{projection_condition, Grid};
use crate::laplace::rhs_mode_pairing;
use crate::quad::integrate;
use crate::spectrum::integer_modes;
use crate::spline::{CubicSpline, SplineError};
use crate::C64;

/// Slack allowed in `∫ψ²/x² ≤ 4∫ψ'²`.
pub const HARDY_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("need 0 <= sigma < alpha and eta != 0 (alpha = {alpha}, sigma = {sigma}, eta = {eta})")]
    InvalidProbe { alpha: f64, sigma: f64, eta: f64 },
    #[error("n must be at least 1")]
    DegreeZero,
    #[error("bound violated at n = {n}: |mu_0| = {value} > {bound}")]
    GuptaViolation { n: usize, value: f64, bound: f64 },
    #[error("grid function must vanish at x = 0 and x = 1")]
    BoundaryValues,
    #[error(transparent)]
    Spline(#[from] SplineError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HardyCheck {
    /// `∫ψ²/x²`
    pub lhs: f64,
    /// `4∫ψ'²`
    pub rhs: f64,
}

impl HardyCheck {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }

    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs * (1.0 + HARDY_SLACK)
    }
}

/// Hardy quotient for `ψ` given with its derivative.
pub fn hardy_check_fn<F, G>(psi: F, dpsi: G) -> HardyCheck
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let cfg = fine_quad();
    let lhs = integrate(|x| (psi(x) / x).powi(2), 0.0, 1.0, cfg).0;
    let rhs = 4.0 * integrate(|x| dpsi(x).powi(2), 0.0, 1.0, cfg).0;
    HardyCheck { lhs, rhs }
}

/// Hardy quotient for a grid function, interpolated by a cubic spline.
pub fn hardy_check(x: &[f64], psi: &[f64]) -> Result<HardyCheck, VerifyError> {
    let (first, last) = (x.first().copied(), x.last().copied());
    if first != Some(0.0) || last != Some(1.0) || psi[0] != 0.0 || psi[psi.len() - 1] != 0.0 {
        return Err(VerifyError::BoundaryValues);
    }
    let s = CubicSpline::new(x.to_vec(), psi.to_vec())?;
    Ok(hardy_check_fn(|t| s.eval(t), |t| s.derivative(t)))
}

/// Random spline on `knots` equispaced knots with zero end values.
fn random_spline(rng: &mut ChaCha8Rng, knots: usize) -> (Vec<f64>, Vec<f64>) {
    let x: Vec<f64> = (0..knots).map(|i| i as f64 / (knots - 1) as f64).collect();
    let mut y: Vec<f64> = (0..knots).map(|_| rng.gen_range(-1.0..1.0)).collect();
    y[0] = 0.0;
    y[knots - 1] = 0.0;
    (x, y)
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Hardy quotients of `trials` random splines with 4 to 40 knots.
pub fn hardy_sweep(trials: usize, seed: u64) -> Vec<HardyCheck> {
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let knots = rng.gen_range(4..=40);
            let (x, y) = random_spline(&mut rng, knots);
            hardy_check(&x, &y).expect("valid spline")
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolventCheck {
    pub alpha: f64,
    pub sigma: f64,
    pub eta: f64,
    pub nodes: usize,
    pub trials: usize,
    pub seed: u64,
    /// `(α − σ)/(1 + 3α/|η|)`
    pub bound: f64,
    /// `min ‖(G − τ)w‖_H / bound` over the witnesses.
    pub worst_ratio: f64,
}

/// Discrete energy norm of a complex pair.
fn h_norm(grid: &Grid, u: &[C64], v: &[C64]) -> f64 {
    let zero = C64::new(0.0, 0.0);
    let mut grad = 0.0;
    let mut prev = zero;
    for i in 0..=u.len() {
        let cur = if i < u.len() { u[i] } else { zero };
        grad += (cur - prev).norm_sqr();
        prev = cur;
    }
    (grad / grid.h + grid.h * v.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
}

/// Lower bound `‖(G − τ)w‖_H ≥ (α−σ)/(1+3α/|η|)‖w‖_H`, `τ = −σ + iη`,
/// tested on complex spline witnesses sampled on `nodes` interior points.
pub fn resolvent_bound_check(alpha: f64, sigma: f64, eta: f64, trials: usize, nodes: usize, seed: u64) -> Result<ResolventCheck, VerifyError> {
    if !(sigma >= 0.0 && sigma < alpha) || eta == 0.0 {
        return Err(VerifyError::InvalidProbe { alpha, sigma, eta });
    }
    let grid = Grid::new(nodes).map_err(|_| VerifyError::InvalidProbe { alpha, sigma, eta })?;
    let xs = grid.nodes();
    let tau = C64::new(-sigma, eta);
    let bound = (alpha - sigma) / (1.0 + 3.0 * alpha / eta.abs());
    let h2 = 1.0 / (grid.h * grid.h);
    let sample = |rng: &mut ChaCha8Rng, knots: usize| -> Vec<C64> {
        let (kx, re) = random_spline(rng, knots);
        let (_, im) = random_spline(rng, knots);
        let sr = CubicSpline::new(kx.clone(), re).expect("valid spline");
        let si = CubicSpline::new(kx, im).expect("valid spline");
        xs.iter().map(|&x| C64::new(sr.eval(x), si.eval(x))).collect()
    };
    let worst = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let knots = rng.gen_range(4..=40);
            let mut u = sample(&mut rng, knots);
            let mut v = sample(&mut rng, knots);
            let norm = h_norm(&grid, &u, &v);
            u.iter_mut().chain(v.iter_mut()).for_each(|z| *z /= norm);
            let zero = C64::new(0.0, 0.0);
            let n = u.len();
            let gu: Vec<C64> = (0..n).map(|j| v[j] - tau * u[j]).collect();
            let gv: Vec<C64> = (0..n)
                .map(|j| {
                    let l = if j > 0 { u[j - 1] } else { zero };
                    let r = if j + 1 < n { u[j + 1] } else { zero };
                    (l - 2.0 * u[j] + r) * h2 - 2.0 * alpha / xs[j] * v[j] - tau * v[j]
                })
                .collect();
            h_norm(&grid, &gu, &gv) / bound
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(ResolventCheck {
        alpha,
        sigma,
        eta,
        nodes,
        trials,
        seed,
        bound,
        worst_ratio: worst,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GuptaRow {
    pub n: usize,
    /// `|μ₀|`, the eigenvalue closest to the origin.
    pub value: f64,
    /// `3/(2+n)`
    pub bound: f64,
}

impl GuptaRow {
    pub fn margin(&self) -> f64 {
        self.bound - self.value
    }
}

/// `|μ₀⁽ⁿ⁾| ≤ 3/(2+n)` for `n = 1..=n_max`. Equality at `n = 1` is accepted
/// within 1e−14.
pub fn gupta_bound_check(n_max: usize) -> Result<Vec<GuptaRow>, VerifyError> {
    if n_max == 0 {
        return Err(VerifyError::DegreeZero);
    }
    (1..=n_max)
        .map(|n| {
            let value = integer_modes(n).last().expect("n >= 1").lambda().re.abs();
            let bound = 3.0 / (2.0 + n as f64);
            if value > bound * (1.0 + 1e-14) {
                return Err(VerifyError::GuptaViolation { n, value, bound });
            }
            Ok(GuptaRow { n, value, bound })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub n: usize,
    /// `⟨(u₀,u₁),(fₖ,−μₖfₖ)⟩_H`
    pub energy_pairing: Vec<f64>,
    /// `⟨r(·,μₖ), fₖ⟩_{L²}`
    pub rhs_pairing: Vec<f64>,
    /// `maxₖ |energy − rhs|`
    pub literal: f64,
    /// `maxₖ |energy + μₖ·rhs|`
    pub corrected: f64,
    pub data_norm: f64,
}

/// Compares the energy pairing with the `L²` pairing against
/// `r(·,μₖ)`. The two agree up to the factor `−μₖ`, so the literal
/// discrepancy vanishes only when `μₖ = −1`.
pub fn lemma_condition_identity(data: &InitialData, n: usize) -> Result<IdentityCheck, VerifyError> {
    if n == 0 {
        return Err(VerifyError::DegreeZero);
    }
    let energy_pairing = projection_condition(data, n);
    let rhs_pairing = rhs_mode_pairing(data, n);
    let modes = integer_modes(n);
    let mut literal: f64 = 0.0;
    let mut corrected: f64 = 0.0;
    for ((h, l), m) in energy_pairing.iter().zip(&rhs_pairing).zip(&modes) {
        literal = literal.max((h - l).abs());
        corrected = corrected.max((h + m.lambda().re * l).abs());
    }
    Ok(IdentityCheck {
        n,
        energy_pairing,
        rhs_pairing,
        literal,
        corrected,
        data_norm: data.energy_norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hardy_closed_form() {
        let c = hardy_check_fn(|x| x * (1.0 - x), |x| 1.0 - 2.0 * x);
        assert!((c.lhs - 1.0 / 3.0).abs() < 1e-12);
        assert!((c.rhs - 4.0 / 3.0).abs() < 1e-12);
        assert!(c.holds());
    }

    #[test]
    fn hardy_rejects_nonzero_ends() {
        assert_eq!(hardy_check(&[0.0, 0.5, 1.0], &[0.1, 1.0, 0.0]), Err(VerifyError::BoundaryValues));
    }

    #[test]
    fn sweeps_are_reproducible() {
        assert_eq!(hardy_sweep(10, 3), hardy_sweep(10, 3));
        let a = resolvent_bound_check(2.0, 0.5, 4.0, 8, 100, 1).unwrap();
        let b = resolvent_bound_check(2.0, 0.5, 4.0, 8, 100, 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn resolvent_rejects_bad_probes() {
        assert!(resolvent_bound_check(2.0, 2.5, 1.0, 1, 10, 0).is_err());
        assert!(resolvent_bound_check(2.0, 0.5, 0.0, 1, 10, 0).is_err());
    }

    #[test]
    fn gupta_small_n() {
        let rows = gupta_bound_check(2).unwrap();
        assert!((rows[0].value - 1.0).abs() < 1e-14 && rows[0].bound == 1.0);
        assert!((rows[1].value - (3.0 - 3f64.sqrt()) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn identity_on_zero_data() {
        let c = lemma_condition_identity(&InitialData::zero(), 2).unwrap();
        assert_eq!(c.literal, 0.0);
        assert_eq!(c.corrected, 0.0);
    }
}
