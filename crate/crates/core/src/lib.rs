//! Spectral analysis and time evolution of the damped wave equation
//!
//! ```text
//! u_tt + (2α/x) u_t = u_xx,   x ∈ (0,1),   u(0,t) = u(1,t) = 0
//! ```
//!
//! The damping `2α/x` is singular at the left end. The library computes the
//! eigenvalues of the generator of the first-order system through the
//! characteristic function `F(λ) = M(1−α, 2, −2λ)`, the Laplace-domain
//! Green's function for integer `α`, and finite-difference simulations that
//! expose finite-time extinction.
//!
//! Module map:
//!
//! - [`specfun`]: Kummer `M`, Laguerre polynomials, the auxiliary polynomials
//!   `P_n`, the exponential integral `E₁` and the second Laguerre solution.
//! - [`spectrum`]: eigenvalue location (argument principle, Newton, Laguerre
//!   fast path), eigenfunctions and α-sweeps.
//! - [`laplace`]: Green's kernels, partial fractions, the transformed solution
//!   `U(x,τ)` and the post-extinction tail.
//! - [`evolution`]: implicit time stepping, energy tracking, spectral
//!   projection of initial data, extinction and decay-rate diagnostics.
//! - [`verify`]: numerical certificates for the inequalities the rest relies on.

pub mod data;
pub mod evolution;
pub mod laplace;
pub mod linalg;
pub mod quad;
pub mod specfun;
pub mod spectrum;
pub mod spline;
pub mod verify;

pub use num_complex::Complex64 as C64;

pub use data::InitialData;
pub use evolution::{Grid, Scheme, SimulationRun, State};
pub use spectrum::{Branch, Eigenvalue, SpectralProblem};
