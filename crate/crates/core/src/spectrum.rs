//! Eigenvalues of the generator through `F(λ) = M(1−α, 2, −2λ)`.
//!
//! Real eigenvalues are bracketed by a sign scan on the negative axis,
//! complex ones are seeded from the large-`k` asymptotics and polished by
//! Newton's method. Every result set is audited by the argument principle on
//! rectangles covering the search region; a rectangle whose winding number
//! exceeds the zeros found inside it is searched again by subdivision. For
//! integer `α = n+1` the spectrum is the root set of `Lₙ⁽¹⁾(−2μ)`, computed
//! from the symmetric Jacobi matrix of the Laguerre recurrence.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::symmetric_tridiagonal_eigenvalues;
use crate::specfun::{gamma, kummer_m, kummer_m_with_derivative, laguerre, laguerre_derivative, SpecfunError};
use crate::C64;

/// `α` within this distance of a positive integer takes the Laguerre path.
pub const INTEGER_TOL: f64 = 1e-14;
/// Residual bound every reported eigenvalue must satisfy.
pub const RESIDUAL_TOL: f64 = 1e-9;
const NEWTON_MAX_ITER: usize = 50;
const NEWTON_TOL: f64 = 1e-12;
/// Half-height of the strip around the real axis audited for real zeros.
const REAL_STRIP: f64 = 0.5;
/// No search reaches beyond this real part.
const MAX_REACH: f64 = 300.0;
const CONTOUR_RETRIES: usize = 5;
const CONTOUR_MAX_DEPTH: u32 = 40;
/// Initial samples per unit length of a contour edge.
const CONTOUR_DENSITY: f64 = 8.0;
const SUBDIVISION_DEPTH: u32 = 30;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectrumError {
    #[error("alpha must be positive and finite, got {0}")]
    InvalidAlpha(f64),
    #[error("{what} is not defined for integer alpha = {alpha}")]
    NotApplicable { what: &'static str, alpha: f64 },
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error("zero of F on the boundary of {rect} persists after {retries} perturbations")]
    BoundaryZero { rect: Rect, retries: usize },
    #[error("winding number over {rect} is not an integer: {winding}")]
    ContourNonConvergence { rect: Rect, winding: f64 },
    #[error("audit mismatch in {rect}: {counted} zeros counted, {found} found")]
    AuditMismatch { rect: Rect, counted: usize, found: usize },
    #[error("Newton iteration stagnated from seed {seed}")]
    NewtonStagnation { seed: C64 },
    #[error("clustered zeros in {rect} could not be separated")]
    Degenerate { rect: Rect },
}

/// Axis-aligned rectangle in the λ-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        Self { re_min, re_max, im_min, im_max }
    }

    pub fn contains(&self, z: C64) -> bool {
        z.re > self.re_min && z.re < self.re_max && z.im > self.im_min && z.im < self.im_max
    }

    fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    fn center(&self) -> C64 {
        C64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    fn grow(&self, d: f64) -> Self {
        Self::new(self.re_min - d, self.re_max + d, self.im_min - d, self.im_max + d)
    }

    fn split_re(&self, at: f64) -> (Self, Self) {
        (
            Self::new(self.re_min, at, self.im_min, self.im_max),
            Self::new(at, self.re_max, self.im_min, self.im_max),
        )
    }

    fn split_im(&self, at: f64) -> (Self, Self) {
        (
            Self::new(self.re_min, self.re_max, self.im_min, at),
            Self::new(self.re_min, self.re_max, at, self.im_max),
        )
    }
}

impl std::fmt::Display for Rect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]x[{}i, {}i]", self.re_min, self.re_max, self.im_min, self.im_max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralProblem {
    alpha: f64,
    integer_n: Option<usize>,
}

impl SpectralProblem {
    /// Integer detection uses [`INTEGER_TOL`].
    pub fn new(alpha: f64) -> Result<Self, SpectrumError> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(SpectrumError::InvalidAlpha(alpha));
        }
        let r = alpha.round();
        let integer_n = ((alpha - r).abs() <= INTEGER_TOL && r >= 1.0).then(|| r as usize - 1);
        Ok(Self { alpha, integer_n })
    }

    /// Overrides integer detection: `Some(true)` forces the Laguerre path at
    /// the nearest integer, `Some(false)` forces the generic Kummer path.
    pub fn with_integer_override(alpha: f64, integer: Option<bool>) -> Result<Self, SpectrumError> {
        let mut p = Self::new(alpha)?;
        match integer {
            None => {}
            Some(false) => p.integer_n = None,
            Some(true) => {
                let r = alpha.round().max(1.0);
                p.alpha = r;
                p.integer_n = Some(r as usize - 1);
            }
        }
        Ok(p)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn integer_n(&self) -> Option<usize> {
        self.integer_n
    }

    /// `⌈α−1⌉`, the number of negative real eigenvalues.
    pub fn expected_real_count(&self) -> usize {
        match self.integer_n {
            Some(n) => n,
            None => (self.alpha - 1.0).ceil().max(0.0) as usize,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Real,
    Upper,
    Lower,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Real => "real",
            Branch::Upper => "upper",
            Branch::Lower => "lower",
        }
    }
}

/// Where the Newton iteration for an eigenvalue started.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedSource {
    Laguerre,
    Asymptotic,
    Scan,
    /// Recovered by subdividing an audit rectangle.
    Contour,
}

impl SeedSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeedSource::Laguerre => "laguerre",
            SeedSource::Asymptotic => "asymptotic",
            SeedSource::Scan => "scan",
            SeedSource::Contour => "contour",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    pub value: C64,
    /// Real eigenvalues count from 1 in ascending order; complex ones count
    /// conjugate pairs from 1 by increasing `|Im λ|`.
    pub index: usize,
    pub branch: Branch,
    /// `|F(λ)| / max(1, |e^{−2λ}|)`, the characteristic function relative
    /// to its natural size.
    pub residual: f64,
    pub multiplicity: u32,
    pub source: SeedSource,
}

/// `F(λ) = M(1−α, 2, −2λ)`.
pub fn char_fn(problem: &SpectralProblem, lambda: C64) -> Result<C64, SpectrumError> {
    Ok(kummer_m(1.0 - problem.alpha, 2.0, -2.0 * lambda)?)
}

/// `|F(λ)|` relative to `max(1, |e^{−2λ}|)`, the size of `F` away from its
/// zeros.
pub fn scaled_residual(problem: &SpectralProblem, lambda: C64) -> Result<f64, SpectrumError> {
    Ok(char_fn(problem, lambda)?.norm() * (2.0 * lambda.re).min(0.0).exp())
}

/// `F(λ)` and `dF/dλ`.
pub fn char_fn_with_derivative(problem: &SpectralProblem, lambda: C64) -> Result<(C64, C64), SpectrumError> {
    let (m, dm) = kummer_m_with_derivative(1.0 - problem.alpha, 2.0, -2.0 * lambda)?;
    Ok((m, -2.0 * dm))
}

// ---------------------------------------------------------------------------
// argument principle

struct BoundaryHit;

enum WindingError {
    Boundary,
    Fatal(SpectrumError),
}

impl From<SpectrumError> for WindingError {
    fn from(e: SpectrumError) -> Self {
        WindingError::Fatal(e)
    }
}

impl From<BoundaryHit> for WindingError {
    fn from(_: BoundaryHit) -> Self {
        WindingError::Boundary
    }
}

/// Number of zeros of `F` inside `rect`, by tracking the phase of `F`
/// around its boundary.
pub fn count_zeros(problem: &SpectralProblem, rect: Rect) -> Result<usize, SpectrumError> {
    let scale = 1e-3 * (1.0 + rect.width().min(rect.height()));
    for attempt in 0..=CONTOUR_RETRIES {
        // alternate shrinking and growing so the retries straddle the original
        let d = match attempt {
            0 => 0.0,
            a if a % 2 == 1 => scale * a as f64,
            a => -scale * a as f64 * 0.5,
        };
        let r = rect.grow(d);
        match winding_number(problem, r) {
            Ok(w) => return Ok(w),
            Err(WindingError::Boundary) => continue,
            Err(WindingError::Fatal(e)) => return Err(e),
        }
    }
    Err(SpectrumError::BoundaryZero { rect, retries: CONTOUR_RETRIES })
}

fn winding_number(problem: &SpectralProblem, rect: Rect) -> Result<usize, WindingError> {
    let corners = [
        C64::new(rect.re_min, rect.im_min),
        C64::new(rect.re_max, rect.im_min),
        C64::new(rect.re_max, rect.im_max),
        C64::new(rect.re_min, rect.im_max),
    ];
    let f = |z: C64| char_fn(problem, z);
    let mut total = 0.0;
    for e in 0..4 {
        let p = corners[e];
        let q = corners[(e + 1) % 4];
        let samples = ((q - p).norm() * CONTOUR_DENSITY).ceil().max(4.0) as usize;
        let mut prev_z = p;
        let mut prev_f = f(p)?;
        for s in 1..=samples {
            let z = p + (q - p) * (s as f64 / samples as f64);
            let fz = f(z)?;
            total += segment_phase(&f, prev_z, z, prev_f, fz, 0)?;
            prev_z = z;
            prev_f = fz;
        }
    }
    let w = total / (2.0 * PI);
    if (w - w.round()).abs() > 0.05 || w.round() < 0.0 {
        return Err(WindingError::Fatal(SpectrumError::ContourNonConvergence { rect, winding: w }));
    }
    Ok(w.round() as usize)
}

fn phase(a: C64, b: C64) -> f64 {
    (b / a).arg()
}

/// Phase change of `F` from `p` to `q`, refined until each piece turns by
/// less than π/4 and the two halves agree with the whole.
fn segment_phase<F>(f: &F, p: C64, q: C64, fp: C64, fq: C64, depth: u32) -> Result<f64, WindingError>
where
    F: Fn(C64) -> Result<C64, SpectrumError>,
{
    if fp == C64::new(0.0, 0.0) || fq == C64::new(0.0, 0.0) || !fp.is_finite() || !fq.is_finite() {
        return Err(BoundaryHit.into());
    }
    let m = 0.5 * (p + q);
    let fm = f(m)?;
    if fm == C64::new(0.0, 0.0) {
        return Err(BoundaryHit.into());
    }
    let whole = phase(fp, fq);
    let d1 = phase(fp, fm);
    let d2 = phase(fm, fq);
    if d1.abs() < PI / 4.0 && d2.abs() < PI / 4.0 && (d1 + d2 - whole).abs() < 1e-6 {
        return Ok(d1 + d2);
    }
    if depth >= CONTOUR_MAX_DEPTH {
        return Err(BoundaryHit.into());
    }
    Ok(segment_phase(f, p, m, fp, fm, depth + 1)? + segment_phase(f, m, q, fm, fq, depth + 1)?)
}

// ---------------------------------------------------------------------------
// Newton

/// Damped Newton iteration on `F` from `seed`; returns the zero and `|F|`.
pub fn refine_eigenvalue(problem: &SpectralProblem, seed: C64) -> Result<(C64, f64), SpectrumError> {
    let mut lam = seed;
    let (mut f, mut df) = char_fn_with_derivative(problem, lam)?;
    for _ in 0..NEWTON_MAX_ITER {
        if f.norm() == 0.0 {
            return Ok((lam, 0.0));
        }
        let step = f / df;
        if !step.is_finite() {
            break;
        }
        let mut t = 1.0;
        let (cand, fc, dfc) = loop {
            let cand = lam - step * t;
            let (fc, dfc) = char_fn_with_derivative(problem, cand)?;
            if fc.norm() < f.norm() || t < 1.0 / 64.0 {
                break (cand, fc, dfc);
            }
            t *= 0.5;
        };
        lam = cand;
        f = fc;
        df = dfc;
        if (step * t).norm() < NEWTON_TOL * (1.0 + lam.norm()) {
            return Ok((lam, f.norm()));
        }
    }
    Err(SpectrumError::NewtonStagnation { seed })
}

/// Newton restricted to the real axis, used after a sign-change bracket.
fn refine_real(problem: &SpectralProblem, mut lo: f64, mut hi: f64) -> Result<(f64, f64), SpectrumError> {
    let f = |x: f64| char_fn(problem, C64::new(x, 0.0)).map(|v| v.re);
    let mut flo = f(lo)?;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < 1e-9 * (1.0 + mid.abs()) {
            break;
        }
        let fm = f(mid)?;
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..NEWTON_MAX_ITER {
        let (v, d) = char_fn_with_derivative(problem, C64::new(x, 0.0))?;
        let step = v.re / d.re;
        let next = x - step;
        x = if next > lo - (hi - lo) && next < hi + (hi - lo) { next } else { x };
        if step.abs() < NEWTON_TOL * (1.0 + x.abs()) {
            break;
        }
    }
    let r = char_fn(problem, C64::new(x, 0.0))?.norm();
    Ok((x, r))
}

// ---------------------------------------------------------------------------
// asymptotic seeds

/// Large-`k` approximation of the `k`-th eigenvalue on the given branch.
///
/// ```text
/// λₖ ≈ ±(2k+1−α)πi/2 − ½ Log(−Γ(1−α)/Γ(1+α) · (∓2kπi)^{2α})
/// ```
/// with upper signs for `Im λ > 0`. Principal logarithms throughout.
pub fn asymptotic_eigenvalue(problem: &SpectralProblem, k: usize, branch: Branch) -> Result<C64, SpectrumError> {
    let alpha = problem.alpha;
    if problem.integer_n.is_some() || alpha == alpha.round() {
        return Err(SpectrumError::NotApplicable { what: "asymptotic_eigenvalue", alpha });
    }
    let s = match branch {
        Branch::Upper => 1.0,
        Branch::Lower => -1.0,
        Branch::Real => return Err(SpectrumError::NotApplicable { what: "asymptotic_eigenvalue on the real branch", alpha }),
    };
    let kf = k.max(1) as f64;
    let lead = C64::new(0.0, s * (2.0 * kf + 1.0 - alpha) * PI / 2.0);
    let power = (2.0 * alpha * C64::new(0.0, -s * 2.0 * kf * PI).ln()).exp();
    let ratio = -gamma(1.0 - alpha) / gamma(1.0 + alpha);
    Ok(lead - 0.5 * (power * ratio).ln())
}

// ---------------------------------------------------------------------------
// search

/// Settings for [`find_eigenvalues`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Number of conjugate pairs to report.
    pub k_max: usize,
    /// All eigenvalues with `|λ|` below this are reported as well.
    pub search_radius: f64,
}

impl SearchConfig {
    pub fn new(k_max: usize, search_radius: f64) -> Self {
        Self { k_max, search_radius }
    }
}

/// Eigenvalues of the generator: all real ones, the first `k_max` conjugate
/// pairs and everything inside `search_radius`. Sorted by branch, then by
/// index.
pub fn find_eigenvalues(problem: &SpectralProblem, k_max: usize, search_radius: f64) -> Result<Vec<Eigenvalue>, SpectrumError> {
    if let Some(n) = problem.integer_n {
        return Ok(laguerre_eigenvalues(problem, n));
    }
    find_eigenvalues_generic(problem, k_max, search_radius)
}

/// Roots of `Lₙ⁽¹⁾(−2μ)`, i.e. `μ = −x/2` over the Laguerre nodes `x`.
pub fn laguerre_eigenvalues(problem: &SpectralProblem, n: usize) -> Vec<Eigenvalue> {
    let diag: Vec<f64> = (0..n).map(|j| 2.0 * j as f64 + 2.0).collect();
    let off: Vec<f64> = (1..n).map(|j| ((j * (j + 1)) as f64).sqrt()).collect();
    let nodes = symmetric_tridiagonal_eigenvalues(&diag, &off);
    let mut mus: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            // polish on the polynomial itself
            let mut x = x;
            for _ in 0..3 {
                let l = laguerre(n, 1, C64::new(x, 0.0)).re;
                let dl = laguerre_derivative(n, 1, C64::new(x, 0.0)).re;
                if dl != 0.0 {
                    x -= l / dl;
                }
            }
            -0.5 * x
        })
        .collect();
    mus.sort_by(|a, b| a.partial_cmp(b).unwrap());
    mus.into_iter()
        .enumerate()
        .map(|(i, mu)| {
            let value = C64::new(mu, 0.0);
            let residual = scaled_residual(problem, value).unwrap_or(f64::NAN);
            Eigenvalue {
                value,
                index: i + 1,
                branch: Branch::Real,
                residual,
                multiplicity: 1,
                source: SeedSource::Laguerre,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
struct Found {
    z: C64,
    source: SeedSource,
}

fn same_zero(a: C64, b: C64) -> bool {
    (a - b).norm() < 1e-8 * (1.0 + a.norm())
}

fn insert_unique(list: &mut Vec<Found>, item: Found) {
    if !list.iter().any(|f| same_zero(f.z, item.z)) {
        list.push(item);
    }
}

/// Generic path through `F`, usable for every `α` (for integer `α` the
/// function is a polynomial times nothing more, and the scan finds its roots).
pub fn find_eigenvalues_generic(problem: &SpectralProblem, k_max: usize, search_radius: f64) -> Result<Vec<Eigenvalue>, SpectrumError> {
    let expected_real = problem.expected_real_count();
    let mut reach = search_radius.clamp(20.0, MAX_REACH);

    // real axis
    let mut reals = scan_real_axis(problem, reach)?;
    while reals.len() < expected_real && reach < MAX_REACH {
        reach = (2.0 * reach).min(MAX_REACH);
        reals = scan_real_axis(problem, reach)?;
    }

    // complex seeds
    let mut uppers: Vec<Found> = Vec::new();
    let seeded = problem.integer_n.is_none() && problem.alpha != problem.alpha.round();
    if seeded {
        let mut k = 1;
        loop {
            let seed = asymptotic_eigenvalue(problem, k, Branch::Upper)?;
            if let Ok((z, _)) = refine_eigenvalue(problem, seed) {
                if z.im > REAL_STRIP && z.re < 0.0 {
                    insert_unique(&mut uppers, Found { z, source: SeedSource::Asymptotic });
                }
            }
            let enough_pairs = uppers.len() > k_max && k > k_max;
            let beyond_radius = seed.norm() > search_radius + PI;
            if (enough_pairs && beyond_radius) || k > 3 * (k_max + 1) + 20 {
                break;
            }
            k += 1;
        }
    }
    uppers.sort_by(|a, b| a.z.im.partial_cmp(&b.z.im).unwrap());

    // audit region
    let deepest = reals
        .iter()
        .map(|f| f.z.re)
        .chain(uppers.iter().map(|f| f.z.re))
        .fold(0.0f64, f64::min);
    let x_left = -(search_radius.max(2.0 * deepest.abs() + 10.0).max(40.0)).min(MAX_REACH);
    let strip = Rect::new(x_left, 1.0, -REAL_STRIP, REAL_STRIP);
    let mut strip_found: Vec<Found> = reals.clone();
    audit(problem, strip, &mut strip_found, 0, Axis::Re)?;

    let height = audit_height(&uppers, k_max, search_radius);
    if height > REAL_STRIP {
        let upper = Rect::new(x_left, 1.0, REAL_STRIP, height);
        uppers.retain(|f| upper.contains(f.z));
        audit(problem, upper, &mut uppers, 0, Axis::Im)?;
    } else {
        uppers.clear();
    }

    // strip zeros off the axis belong to the complex branches
    for f in strip_found.iter() {
        if f.z.im.abs() > 1e-10 {
            if f.z.im > 0.0 {
                insert_unique(&mut uppers, *f);
            }
        }
    }
    let mut reals: Vec<Found> = strip_found.into_iter().filter(|f| f.z.im.abs() <= 1e-10).collect();
    for f in reals.iter_mut() {
        f.z.im = 0.0;
    }
    reals.sort_by(|a, b| a.z.re.partial_cmp(&b.z.re).unwrap());
    uppers.sort_by(|a, b| a.z.im.partial_cmp(&b.z.im).unwrap());

    let keep = uppers
        .iter()
        .enumerate()
        .filter(|(i, f)| *i < k_max || f.z.norm() <= search_radius)
        .count();
    uppers.truncate(keep);

    let mut out = Vec::with_capacity(reals.len() + 2 * uppers.len());
    for (i, f) in reals.iter().enumerate() {
        out.push(Eigenvalue {
            value: f.z,
            index: i + 1,
            branch: Branch::Real,
            residual: scaled_residual(problem, f.z)?,
            multiplicity: 1,
            source: f.source,
        });
    }
    for (i, f) in uppers.iter().enumerate() {
        out.push(Eigenvalue {
            value: f.z,
            index: i + 1,
            branch: Branch::Upper,
            residual: scaled_residual(problem, f.z)?,
            multiplicity: 1,
            source: f.source,
        });
    }
    for (i, f) in uppers.iter().enumerate() {
        let z = f.z.conj();
        out.push(Eigenvalue {
            value: z,
            index: i + 1,
            branch: Branch::Lower,
            residual: scaled_residual(problem, z)?,
            multiplicity: 1,
            source: f.source,
        });
    }
    Ok(out)
}

/// Top edge of the audited region: halfway between the last wanted pair and
/// the next one, and above the search radius.
fn audit_height(uppers: &[Found], k_max: usize, search_radius: f64) -> f64 {
    let mut h = search_radius.min(MAX_REACH);
    if k_max > 0 && uppers.len() > k_max {
        h = h.max(0.5 * (uppers[k_max - 1].z.im + uppers[k_max].z.im));
    } else if let Some(last) = uppers.last() {
        h = h.max(last.z.im + 1.0);
    }
    if let Some(next) = uppers.iter().find(|f| f.z.im > h) {
        // keep the edge away from a zero
        let below = uppers.iter().filter(|f| f.z.im < h).map(|f| f.z.im).fold(REAL_STRIP, f64::max);
        if next.z.im - h < 0.25 {
            h = 0.5 * (below + next.z.im);
        }
    }
    h
}

/// Sign scan of `F` on `[−reach, 0)`, then bisection and Newton.
fn scan_real_axis(problem: &SpectralProblem, reach: f64) -> Result<Vec<Found>, SpectrumError> {
    let mut grid = Vec::new();
    let mut x = -1e-4;
    while x > -0.1 {
        grid.push(x);
        x *= 1.25;
    }
    x = -0.1;
    while x > -reach {
        grid.push(x);
        let step = if x > -2.0 { 0.01 } else { 0.02 * (1.0 + x.abs().ln()) };
        x -= step;
    }
    grid.push(-reach);
    let values: Vec<f64> = grid
        .iter()
        .map(|&x| char_fn(problem, C64::new(x, 0.0)).map(|v| v.re))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for i in 1..grid.len() {
        let (a, b) = (values[i - 1], values[i]);
        if a == 0.0 {
            out.push(Found { z: C64::new(grid[i - 1], 0.0), source: SeedSource::Scan });
            continue;
        }
        if (a < 0.0) != (b < 0.0) && b != 0.0 {
            let (z, _) = refine_real(problem, grid[i], grid[i - 1])?;
            out.push(Found { z: C64::new(z, 0.0), source: SeedSource::Scan });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
enum Axis {
    Re,
    Im,
}

/// Checks the winding number of `rect` against the zeros listed inside it,
/// recovering missed zeros, and recurses until every piece holds at most
/// two zeros. `found` is updated in place.
fn audit(problem: &SpectralProblem, rect: Rect, found: &mut Vec<Found>, depth: u32, axis: Axis) -> Result<(), SpectrumError> {
    let counted = count_zeros(problem, rect)?;
    let inside: Vec<Found> = found.iter().copied().filter(|f| rect.contains(f.z)).collect();
    if counted != inside.len() {
        if counted < inside.len() {
            return Err(SpectrumError::AuditMismatch { rect, counted, found: inside.len() });
        }
        let recovered = locate_zeros(problem, rect, counted, 0)?;
        for f in recovered {
            insert_unique(found, f);
        }
        let now = found.iter().filter(|f| rect.contains(f.z)).count();
        if now != counted {
            return Err(SpectrumError::AuditMismatch { rect, counted, found: now });
        }
    }
    if counted <= 2 {
        return Ok(());
    }
    if depth >= SUBDIVISION_DEPTH {
        return Err(SpectrumError::Degenerate { rect });
    }
    let mut inside: Vec<C64> = found.iter().map(|f| f.z).filter(|z| rect.contains(*z)).collect();
    let key = |z: &C64| match axis {
        Axis::Re => z.re,
        Axis::Im => z.im,
    };
    inside.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
    let mid = inside.len() / 2;
    let cut = 0.5 * (key(&inside[mid - 1]) + key(&inside[mid]));
    let (lo, hi) = match axis {
        Axis::Re => rect.split_re(cut),
        Axis::Im => rect.split_im(cut),
    };
    let degenerate_cut = match axis {
        Axis::Re => (cut - rect.re_min).min(rect.re_max - cut) < 1e-9,
        Axis::Im => (cut - rect.im_min).min(rect.im_max - cut) < 1e-9,
    };
    if degenerate_cut {
        return Err(SpectrumError::Degenerate { rect });
    }
    audit(problem, lo, found, depth + 1, axis)?;
    audit(problem, hi, found, depth + 1, axis)
}

/// All `count` zeros inside `rect`, by quadrisection and Newton.
fn locate_zeros(problem: &SpectralProblem, rect: Rect, count: usize, depth: u32) -> Result<Vec<Found>, SpectrumError> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if count == 1 {
        if let Ok((z, _)) = refine_eigenvalue(problem, rect.center()) {
            if rect.contains(z) {
                return Ok(vec![Found { z, source: SeedSource::Contour }]);
            }
        }
    }
    if depth >= SUBDIVISION_DEPTH || rect.width().max(rect.height()) < 1e-7 {
        return Err(SpectrumError::Degenerate { rect });
    }
    let c = rect.center();
    // offset the cuts slightly so symmetric configurations do not land on them
    let (left, right) = rect.split_re(c.re + 1e-3 * rect.width() * 0.618);
    let mut out = Vec::new();
    for half in [left, right] {
        let (bottom, top) = half.split_im(c.im + 1e-3 * rect.height() * 0.382);
        for quarter in [bottom, top] {
            let n = count_zeros(problem, quarter)?;
            out.extend(locate_zeros(problem, quarter, n, depth + 1)?);
        }
    }
    if out.len() != count {
        return Err(SpectrumError::AuditMismatch { rect, counted: count, found: out.len() });
    }
    Ok(out)
}

/// Largest real part over `evs`; `None` for an empty spectrum.
pub fn spectral_abscissa(evs: &[Eigenvalue]) -> Option<f64> {
    evs.iter().map(|e| e.value.re).reduce(f64::max)
}

// ---------------------------------------------------------------------------
// eigenfunctions

/// Eigenfunction `f_λ(x) = x e^{λx} M(1−α, 2, −2λx)`, or its Laguerre form
/// `x e^{μx} Lₙ⁽¹⁾(−2μx)` for integer `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub eigenvalue: Eigenvalue,
    alpha: f64,
    integer_n: Option<usize>,
}

pub fn eigenfunction(problem: &SpectralProblem, ev: Eigenvalue) -> Mode {
    Mode {
        eigenvalue: ev,
        alpha: problem.alpha,
        integer_n: problem.integer_n,
    }
}

impl Mode {
    pub fn lambda(&self) -> C64 {
        self.eigenvalue.value
    }

    pub fn eval(&self, x: f64) -> C64 {
        self.eval_with_derivative(x).0
    }

    /// `(f(x), f'(x))`.
    pub fn eval_with_derivative(&self, x: f64) -> (C64, C64) {
        let lam = self.lambda();
        let e = (lam * x).exp();
        let z = -2.0 * lam * x;
        let (g, dg) = match self.integer_n {
            Some(n) => (laguerre(n, 1, z), laguerre_derivative(n, 1, z)),
            None => kummer_m_with_derivative(1.0 - self.alpha, 2.0, z).unwrap_or((C64::new(f64::NAN, f64::NAN), C64::new(f64::NAN, f64::NAN))),
        };
        let f = x * e * g;
        let df = e * g + lam * x * e * g - 2.0 * lam * x * e * dg;
        (f, df)
    }

    pub fn sample(&self, xs: &[f64]) -> Vec<C64> {
        xs.iter().map(|&x| self.eval(x)).collect()
    }
}

/// Modes `fₖ = x e^{μₖx} Lₙ⁽¹⁾(−2μₖx)`, `k = 1..n`, of `α = n+1` in
/// ascending order of `μₖ`.
pub fn integer_modes(n: usize) -> Vec<Mode> {
    let p = SpectralProblem::new(n as f64 + 1.0).expect("positive alpha");
    laguerre_eigenvalues(&p, n).into_iter().map(|ev| eigenfunction(&p, ev)).collect()
}

// ---------------------------------------------------------------------------
// α-sweeps

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub alpha: f64,
    pub trajectory: usize,
    pub value: C64,
    pub branch: Branch,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Sweep {
    pub points: Vec<SweepPoint>,
    /// `(α, number of real eigenvalues)` for every swept value.
    pub real_counts: Vec<(f64, usize)>,
    pub warnings: Vec<String>,
}

/// Uniform grid `lo, lo+step, …, ≤ hi`. With `refine`, also the points
/// `m ± 10⁻ʲ`, `j = 2..=10`, around every integer `m` inside the range, where
/// the complex branches escape to `Re λ → −∞`. Exact integers are dropped
/// unless `at_integers` is set.
pub fn sweep_grid(lo: f64, hi: f64, step: f64, at_integers: bool, refine: bool) -> Vec<f64> {
    let mut out = Vec::new();
    if !(step > 0.0) || !(hi >= lo) {
        return out;
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    out.extend((0..=count).map(|i| lo + i as f64 * step));
    let first = lo.ceil() as i64;
    let last = hi.floor() as i64;
    for m in first.max(1)..=last {
        let m = m as f64;
        for j in (2..=10).filter(|_| refine) {
            let d = 10f64.powi(-j);
            out.extend([m - d, m + d].into_iter().filter(|a| *a >= lo && *a <= hi));
        }
        if at_integers {
            out.push(m);
        }
    }
    let is_integer = |a: f64| (a - a.round()).abs() <= INTEGER_TOL * a.abs().max(1.0);
    out.retain(|&a| a > 0.0 && (at_integers || !is_integer(a)));
    out.iter_mut().filter(|a| is_integer(**a)).for_each(|a| *a = a.round());
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-13);
    out
}

/// Eigenvalues over a sorted list of `α`, joined into trajectories by
/// nearest-neighbour matching between consecutive values. Only the real and
/// upper branches are tracked; the lower one is their mirror image.
pub fn alpha_sweep(alphas: &[f64], k_max: usize) -> Result<Sweep, SpectrumError> {
    let spectra: Vec<Vec<Eigenvalue>> = alphas
        .par_iter()
        .map(|&a| {
            let p = SpectralProblem::new(a)?;
            let evs = find_eigenvalues(&p, k_max, 0.0)?;
            Ok(evs.into_iter().filter(|e| e.branch != Branch::Lower).collect())
        })
        .collect::<Result<_, SpectrumError>>()?;

    let mut sweep = Sweep::default();
    let mut next_id = 0;
    let mut previous: Vec<(usize, C64)> = Vec::new();
    for (&alpha, evs) in alphas.iter().zip(&spectra) {
        sweep.real_counts.push((alpha, evs.iter().filter(|e| e.branch == Branch::Real).count()));
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (i, e) in evs.iter().enumerate() {
            for (j, (_, z)) in previous.iter().enumerate() {
                pairs.push(((e.value - z).norm(), i, j));
            }
        }
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut assigned: Vec<Option<usize>> = vec![None; evs.len()];
        let mut taken = vec![false; previous.len()];
        for &(d, i, j) in &pairs {
            if assigned[i].is_some() || taken[j] {
                continue;
            }
            let rival = pairs
                .iter()
                .find(|&&(_, i2, j2)| i2 == i && j2 != j && !taken[j2])
                .map(|p| p.0);
            if let Some(d2) = rival {
                if d2 < 1.05 * d && d > 0.0 {
                    sweep.warnings.push(format!("ambiguous pairing at alpha={alpha} near {}", evs[i].value));
                }
            }
            assigned[i] = Some(previous[j].0);
            taken[j] = true;
        }
        let mut current = Vec::with_capacity(evs.len());
        for (i, e) in evs.iter().enumerate() {
            let id = assigned[i].unwrap_or_else(|| {
                next_id += 1;
                next_id - 1
            });
            current.push((id, e.value));
            sweep.points.push(SweepPoint {
                alpha,
                trajectory: id,
                value: e.value,
                branch: e.branch,
            });
        }
        previous = current;
    }
    Ok(sweep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn integer_detection() {
        assert_eq!(SpectralProblem::new(2.0).unwrap().integer_n(), Some(1));
        assert_eq!(SpectralProblem::new(1.0).unwrap().integer_n(), Some(0));
        assert_eq!(SpectralProblem::new(2.0 + 1e-15).unwrap().integer_n(), Some(1));
        assert_eq!(SpectralProblem::new(2.0 + 1e-12).unwrap().integer_n(), None);
        assert_eq!(SpectralProblem::new(0.5).unwrap().integer_n(), None);
        assert!(SpectralProblem::new(0.0).is_err());
        assert!(SpectralProblem::new(f64::NAN).is_err());
        let forced = SpectralProblem::with_integer_override(2.0, Some(false)).unwrap();
        assert_eq!(forced.integer_n(), None);
    }

    #[test]
    fn char_fn_trivial_cases() {
        let p = SpectralProblem::new(1.0).unwrap();
        assert_eq!(char_fn(&p, c(-3.0, 7.0)).unwrap(), c(1.0, 0.0));
        let p = SpectralProblem::new(2.0).unwrap();
        assert!(char_fn(&p, c(-1.0, 0.0)).unwrap().norm() < 1e-12);
    }

    #[test]
    fn count_small_rectangles() {
        let p = SpectralProblem::new(2.0).unwrap();
        assert_eq!(count_zeros(&p, Rect::new(-2.0, -0.5, -1.0, 1.0)).unwrap(), 1);
        assert_eq!(count_zeros(&p, Rect::new(-0.9, 0.5, -1.0, 1.0)).unwrap(), 0);
    }

    #[test]
    fn boundary_zero_is_perturbed_away() {
        // μ = −1 sits exactly on the left edge
        let p = SpectralProblem::new(2.0).unwrap();
        let n = count_zeros(&p, Rect::new(-1.0, 0.5, -1.0, 1.0)).unwrap();
        assert!(n <= 1);
    }

    #[test]
    fn laguerre_path_small_n() {
        let p = SpectralProblem::new(3.0).unwrap();
        let evs = find_eigenvalues(&p, 5, 10.0).unwrap();
        assert_eq!(evs.len(), 2);
        let s3 = 3f64.sqrt();
        assert!((evs[0].value.re - (-3.0 - s3) / 2.0).abs() < 1e-13);
        assert!((evs[1].value.re - (-3.0 + s3) / 2.0).abs() < 1e-13);
        assert_eq!(evs[0].index, 1);
    }

    #[test]
    fn newton_converges_near_root() {
        let p = SpectralProblem::new(2.0).unwrap();
        let (z, r) = refine_eigenvalue(&p, c(-1.3, 0.2)).unwrap();
        assert!((z - c(-1.0, 0.0)).norm() < 1e-12);
        assert!(r < 1e-14);
    }

    #[test]
    fn asymptotic_branches_are_conjugate() {
        let p = SpectralProblem::new(1.5).unwrap();
        for k in [1, 5, 40] {
            let u = asymptotic_eigenvalue(&p, k, Branch::Upper).unwrap();
            let l = asymptotic_eigenvalue(&p, k, Branch::Lower).unwrap();
            assert!(u.im > 0.0);
            assert!((u - l.conj()).norm() < 1e-12 * u.norm());
        }
        assert!(asymptotic_eigenvalue(&SpectralProblem::new(2.0).unwrap(), 3, Branch::Upper).is_err());
    }

    #[test]
    fn mode_derivative_matches_difference_quotient() {
        let p = SpectralProblem::new(1.5).unwrap();
        let ev = Eigenvalue {
            value: c(-2.0, 3.0),
            index: 1,
            branch: Branch::Upper,
            residual: 0.0,
            multiplicity: 1,
            source: SeedSource::Asymptotic,
        };
        let m = eigenfunction(&p, ev);
        let h = 1e-6;
        for x in [0.1, 0.5, 0.9] {
            let fd = (m.eval(x + h) - m.eval(x - h)) / (2.0 * h);
            let (_, d) = m.eval_with_derivative(x);
            assert!((fd - d).norm() < 1e-7 * d.norm().max(1.0));
        }
        assert_eq!(m.eval(0.0), c(0.0, 0.0));
    }

    #[test]
    fn abscissa_of_empty_set() {
        assert_eq!(spectral_abscissa(&[]), None);
    }
}
