//! Test-only oracles, independent of the library's evaluation paths.
#![allow(dead_code)]

pub mod dd;

use num_complex::Complex64 as C64;

/// Kummer `M(a, b, z)` and `dM/dz` by the raw power series in
/// double-double complex arithmetic (~32 significant digits before
/// cancellation). Suitable for `|z|` up to about 40.
pub fn kummer_dd(a: f64, b: f64, z: C64) -> (C64, C64) {
    use dd::{Cdd, Dd};
    let zz = Cdd::from_c64(z);
    let mut term = Cdd::one();
    let mut sum = Cdd::one();
    let mut dterm = Cdd::from_dd(Dd::from(a) / Dd::from(b), Dd::from(0.0));
    let mut dsum = dterm;
    for k in 0..4000 {
        let kf = k as f64;
        let f = (Dd::from(a) + Dd::from(kf)) / ((Dd::from(b) + Dd::from(kf)) * Dd::from(kf + 1.0));
        term = term * zz * f;
        let g = (Dd::from(a) + Dd::from(kf + 1.0)) / ((Dd::from(b) + Dd::from(kf + 1.0)) * Dd::from(kf + 1.0));
        dterm = dterm * zz * g;
        sum = sum + term;
        dsum = dsum + dterm;
        if k > 10 && term.norm_f64() < 1e-34 * sum.norm_f64() && dterm.norm_f64() < 1e-34 * dsum.norm_f64() {
            break;
        }
    }
    (sum.to_c64(), dsum.to_c64())
}

/// Zero of `λ ↦ M(1−α, 2, −2λ)` near `seed`, by Newton iteration on the
/// double-double series.
pub fn char_zero_dd(alpha: f64, seed: C64) -> C64 {
    let mut lam = seed;
    for _ in 0..100 {
        let (m, dm) = kummer_dd(1.0 - alpha, 2.0, -2.0 * lam);
        let step = m / (-2.0 * dm);
        lam -= step;
        if step.norm() < 1e-15 * (1.0 + lam.norm()) {
            break;
        }
    }
    lam
}

/// Real zero of `λ ↦ M(1−α, 2, −2λ)` in `[lo, hi]` by bisection on the
/// double-double series.
pub fn char_real_zero_bisect(alpha: f64, mut lo: f64, mut hi: f64) -> f64 {
    let f = |l: f64| kummer_dd(1.0 - alpha, 2.0, C64::new(-2.0 * l, 0.0)).0.re;
    let mut flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "no sign change in bracket");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Five-point stencil first and second derivatives of a complex function.
pub fn fd_derivatives<F: Fn(C64) -> C64>(f: F, x: C64, h: f64) -> (C64, C64) {
    let f2m = f(x - 2.0 * h);
    let f1m = f(x - h);
    let f0 = f(x);
    let f1p = f(x + h);
    let f2p = f(x + 2.0 * h);
    let d1 = (f2m - 8.0 * f1m + 8.0 * f1p - f2p) / (12.0 * h);
    let d2 = (-f2m + 16.0 * f1m - 30.0 * f0 + 16.0 * f1p - f2p) / (12.0 * h * h);
    (d1, d2)
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
