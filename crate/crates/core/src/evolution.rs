//! Finite-difference time evolution of
//!
//! ```text
//! u_t = v,   v_t = u_xx − (2α/x) v
//! ```
//!
//! on the interior nodes `xᵢ = i/(N+1)`, `i = 1..N`. The damping enters at
//! its exact nodal value, with no regularisation at the origin. Both schemes
//! are implicit and solve one tridiagonal system per step with a
//! factorisation computed once.

use serde::Serialize;

use crate::data::InitialData;
use crate::linalg::{solve_dense, TridiagonalLu};
use crate::spectrum::integer_modes;

/// Allowed energy growth per step, relative to `E(0)`.
pub const ENERGY_TOL: f64 = 1e-10;
/// Gram matrices with reciprocal condition below this are rejected.
pub const GRAM_RCOND_MIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvolutionError {
    #[error("time step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("grid needs at least one interior node")]
    EmptyGrid,
    #[error("linear solver failed at step {step}")]
    SolverFailure { step: usize },
    #[error("energy grew by {increase:e} (relative to E(0)) at step {step}")]
    EnergyIncrease { step: usize, increase: f64 },
    #[error("Gram matrix is singular (rcond = {rcond:e})")]
    SingularGram { rcond: f64 },
    #[error("energy is not positive in the fitting window")]
    NonPositiveEnergy,
    #[error("fitting window [{0}, {1}] holds fewer than two samples")]
    EmptyWindow(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub n: usize,
    pub h: f64,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self, EvolutionError> {
        if n == 0 {
            return Err(EvolutionError::EmptyGrid);
        }
        Ok(Self { n, h: 1.0 / (n as f64 + 1.0) })
    }

    pub fn node(&self, i: usize) -> f64 {
        (i + 1) as f64 * self.h
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct State {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl State {
    pub fn zeros(n: usize) -> Self {
        Self { u: vec![0.0; n], v: vec![0.0; n] }
    }

    pub fn from_data(grid: &Grid, data: &InitialData) -> Self {
        let (u, v) = data.sample(&grid.nodes());
        Self { u, v }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            u: self.u.iter().map(|x| c * x).collect(),
            v: self.v.iter().map(|x| c * x).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    #[default]
    ImplicitMidpoint,
    CrankNicolson,
}

impl Scheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::ImplicitMidpoint => "implicit-midpoint",
            Scheme::CrankNicolson => "crank-nicolson",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "implicit-midpoint" | "midpoint" => Ok(Scheme::ImplicitMidpoint),
            "crank-nicolson" | "cn" => Ok(Scheme::CrankNicolson),
            other => Err(format!("unknown scheme `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct EnergyTrace {
    pub times: Vec<f64>,
    pub energies: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    /// Interior nodes.
    pub n: usize,
    pub dt: f64,
    pub t_final: f64,
    pub scheme: Scheme,
    /// Snapshots are stored at the steps closest to these times.
    pub snapshot_times: Vec<f64>,
}

impl SimulationConfig {
    pub fn new(n: usize, dt: f64, t_final: f64) -> Self {
        Self {
            n,
            dt,
            t_final,
            scheme: Scheme::default(),
            snapshot_times: Vec::new(),
        }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_snapshots(mut self, times: Vec<f64>) -> Self {
        self.snapshot_times = times;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationRun {
    pub alpha: f64,
    pub grid: Grid,
    pub dt: f64,
    pub scheme: Scheme,
    pub steps: usize,
    pub snapshots: Vec<(f64, State)>,
    pub trace: EnergyTrace,
    /// Largest single-step energy increase relative to `E(0)` (0 if the
    /// energy never grew).
    pub max_energy_increase: f64,
    pub final_state: State,
}

/// Second difference with homogeneous Dirichlet closure.
fn second_difference(u: &[f64], h: f64, out: &mut [f64]) {
    let n = u.len();
    let h2 = 1.0 / (h * h);
    for i in 0..n {
        let left = if i > 0 { u[i - 1] } else { 0.0 };
        let right = if i + 1 < n { u[i + 1] } else { 0.0 };
        out[i] = (left - 2.0 * u[i] + right) * h2;
    }
}

/// `(v, D₂u − (2α/xᵢ)vᵢ)`.
pub fn apply_generator(alpha: f64, grid: &Grid, state: &State) -> State {
    let mut dv = vec![0.0; grid.n];
    second_difference(&state.u, grid.h, &mut dv);
    for (i, d) in dv.iter_mut().enumerate() {
        *d -= 2.0 * alpha / grid.node(i) * state.v[i];
    }
    State { u: state.v.clone(), v: dv }
}

/// `h Σᵢ₌₀ᴺ ((u_{i+1} − uᵢ)/h)² + h Σ vᵢ²` with `u₀ = u_{N+1} = 0`.
pub fn energy(grid: &Grid, state: &State) -> f64 {
    let n = state.u.len();
    let mut grad = 0.0;
    let mut prev = 0.0;
    for i in 0..=n {
        let cur = if i < n { state.u[i] } else { 0.0 };
        let d = cur - prev;
        grad += d * d;
        prev = cur;
    }
    grad / grid.h + grid.h * state.v.iter().map(|v| v * v).sum::<f64>()
}

/// Runs the scheme from `initial` up to `t_final`.
pub fn simulate(alpha: f64, initial: &InitialData, cfg: &SimulationConfig) -> Result<SimulationRun, EvolutionError> {
    let grid = Grid::new(cfg.n)?;
    simulate_state(alpha, grid, State::from_data(&grid, initial), cfg)
}

/// As [`simulate`], from a state already on the grid.
pub fn simulate_state(alpha: f64, grid: Grid, mut state: State, cfg: &SimulationConfig) -> Result<SimulationRun, EvolutionError> {
    let dt = cfg.dt;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(EvolutionError::InvalidStep(dt));
    }
    let n = grid.n;
    let h = grid.h;
    let steps = (cfg.t_final / dt).round().max(0.0) as usize;

    // (I − dt²/4 D₂ + dt/2 diag(2α/x))
    let off = -dt * dt / (4.0 * h * h);
    let diag: Vec<f64> = (0..n).map(|i| 1.0 + dt * dt / (2.0 * h * h) + dt * alpha / grid.node(i)).collect();
    let offs = vec![off; n - 1];
    let lu = TridiagonalLu::factor(&offs, &diag, &offs).ok_or(EvolutionError::SolverFailure { step: 0 })?;
    let damping: Vec<f64> = (0..n).map(|i| 2.0 * alpha / grid.node(i)).collect();

    let mut snapshot_steps: Vec<(usize, f64)> = cfg
        .snapshot_times
        .iter()
        .map(|&t| (((t / dt).round().max(0.0) as usize).min(steps), t))
        .collect();
    snapshot_steps.sort_by_key(|s| s.0);
    let mut next_snapshot = 0;
    let mut snapshots = Vec::with_capacity(snapshot_steps.len());

    let e0 = energy(&grid, &state);
    let mut trace = EnergyTrace {
        times: Vec::with_capacity(steps + 1),
        energies: Vec::with_capacity(steps + 1),
    };
    trace.times.push(0.0);
    trace.energies.push(e0);
    let mut max_increase: f64 = 0.0;
    let mut d2u = vec![0.0; n];
    let mut d2v = vec![0.0; n];
    let mut rhs = vec![0.0; n];

    let mut take_snapshots = |step: usize, state: &State, snapshots: &mut Vec<(f64, State)>| {
        while next_snapshot < snapshot_steps.len() && snapshot_steps[next_snapshot].0 == step {
            snapshots.push((step as f64 * dt, state.clone()));
            next_snapshot += 1;
        }
    };
    take_snapshots(0, &state, &mut snapshots);

    let mut e_prev = e0;
    for step in 1..=steps {
        second_difference(&state.u, h, &mut d2u);
        match cfg.scheme {
            Scheme::ImplicitMidpoint => {
                // w = v + v⁺ from (I − dt²/4 D₂ + dt/2 D) w = 2v + dt D₂u
                for i in 0..n {
                    rhs[i] = 2.0 * state.v[i] + dt * d2u[i];
                }
                lu.solve_in_place(&mut rhs);
                for i in 0..n {
                    state.u[i] += 0.5 * dt * rhs[i];
                    state.v[i] = rhs[i] - state.v[i];
                }
            }
            Scheme::CrankNicolson => {
                // trapezoidal rule with u⁺ eliminated, solved for v⁺
                second_difference(&state.v, h, &mut d2v);
                for i in 0..n {
                    rhs[i] = state.v[i] + dt * d2u[i] + 0.25 * dt * dt * d2v[i] - 0.5 * dt * damping[i] * state.v[i];
                }
                lu.solve_in_place(&mut rhs);
                for i in 0..n {
                    state.u[i] += 0.5 * dt * (state.v[i] + rhs[i]);
                    state.v[i] = rhs[i];
                }
            }
        }
        if state.u.iter().chain(&state.v).any(|x| !x.is_finite()) {
            return Err(EvolutionError::SolverFailure { step });
        }
        let e = energy(&grid, &state);
        if e0 > 0.0 {
            let increase = (e - e_prev) / e0;
            max_increase = max_increase.max(increase);
            if increase > ENERGY_TOL {
                return Err(EvolutionError::EnergyIncrease { step, increase });
            }
        }
        e_prev = e;
        trace.times.push(step as f64 * dt);
        trace.energies.push(e);
        take_snapshots(step, &state, &mut snapshots);
    }

    Ok(SimulationRun {
        alpha,
        grid,
        dt,
        scheme: cfg.scheme,
        steps,
        snapshots,
        trace,
        max_energy_increase: max_increase,
        final_state: state,
    })
}

/// `⟨(u₀,u₁), (fₖ, −μₖfₖ)⟩_H = ⟨u₀', fₖ'⟩ − μₖ⟨u₁, fₖ⟩` for `k = 1..n`.
pub fn projection_condition(data: &InitialData, n: usize) -> Vec<f64> {
    integer_modes(n)
        .iter()
        .map(|m| {
            let mu = m.lambda().re;
            data.energy_inner(|x| m.eval_with_derivative(x).1.re, |x| -mu * m.eval(x).re)
        })
        .collect()
}

/// Removes the components along the standing waves `(fⱼ, μⱼfⱼ)` so that
/// every entry of [`projection_condition`] vanishes.
pub fn project_out(data: &InitialData, n: usize) -> Result<InitialData, EvolutionError> {
    let modes = integer_modes(n);
    if modes.is_empty() {
        return Ok(data.clone());
    }
    let b = projection_condition(data, n);
    // G[k][j] = ⟨(fⱼ, μⱼfⱼ), (fₖ, −μₖfₖ)⟩_H
    let gram: Vec<Vec<f64>> = modes
        .iter()
        .map(|mk| {
            let muk = mk.lambda().re;
            modes
                .iter()
                .map(|mj| {
                    let muj = mj.lambda().re;
                    let g = InitialData::new(
                        {
                            let m = *mj;
                            move |x| m.eval(x).re
                        },
                        {
                            let m = *mj;
                            move |x| m.eval_with_derivative(x).1.re
                        },
                        {
                            let m = *mj;
                            move |x| muj * m.eval(x).re
                        },
                        "",
                    );
                    g.energy_inner(|x| mk.eval_with_derivative(x).1.re, |x| -muk * mk.eval(x).re)
                })
                .collect()
        })
        .collect();
    let (c, rcond) = solve_dense(&gram, &b).ok_or(EvolutionError::SingularGram { rcond: 0.0 })?;
    if rcond < GRAM_RCOND_MIN {
        return Err(EvolutionError::SingularGram { rcond });
    }
    let terms: Vec<(crate::spectrum::Mode, f64)> = modes.into_iter().zip(c).collect();
    let (t0, t1, t2) = (terms.clone(), terms.clone(), terms);
    let (d0, d1, d2) = (data.clone(), data.clone(), data.clone());
    Ok(InitialData::new(
        move |x| d0.u0(x) - t0.iter().map(|(m, c)| c * m.eval(x).re).sum::<f64>(),
        move |x| d1.du0(x) - t1.iter().map(|(m, c)| c * m.eval_with_derivative(x).1.re).sum::<f64>(),
        move |x| d2.u1(x) - t2.iter().map(|(m, c)| c * m.lambda().re * m.eval(x).re).sum::<f64>(),
        format!("{}|projected", data.label()),
    ))
}

/// First recorded time after which the energy stays below
/// `threshold_ratio · E(0)`.
pub fn extinction_time(run: &SimulationRun, threshold_ratio: f64) -> Option<f64> {
    let e0 = *run.trace.energies.first()?;
    let limit = threshold_ratio * e0;
    let last_above = run.trace.energies.iter().rposition(|&e| e >= limit);
    match last_above {
        None => Some(0.0),
        Some(i) if i + 1 < run.trace.times.len() => Some(run.trace.times[i + 1]),
        Some(_) => None,
    }
}

/// Least-squares slope of `½ log E(t)` over `window`.
pub fn decay_rate(trace: &EnergyTrace, window: (f64, f64)) -> Result<f64, EvolutionError> {
    let (t0, t1) = window;
    let pts: Vec<(f64, f64)> = trace
        .times
        .iter()
        .zip(&trace.energies)
        .filter(|(t, _)| **t >= t0 && **t <= t1)
        .map(|(&t, &e)| (t, e))
        .collect();
    if pts.len() < 2 {
        return Err(EvolutionError::EmptyWindow(t0, t1));
    }
    if pts.iter().any(|&(_, e)| !(e > 0.0)) {
        return Err(EvolutionError::NonPositiveEnergy);
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| 0.5 * p.1.ln()).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (0.5 * p.1.ln() - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt) * (p.0 - mt)).sum();
    Ok(sxy / sxx)
}
