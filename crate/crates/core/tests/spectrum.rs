mod support;

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use singwave::spectrum::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn problem(alpha: f64) -> SpectralProblem {
    SpectralProblem::new(alpha).unwrap()
}

#[test]
fn integer_alpha_spectra_are_laguerre_roots() {
    let evs = find_eigenvalues(&problem(2.0), 10, 50.0).unwrap();
    assert_eq!(evs.len(), 1);
    assert!((evs[0].value - c(-1.0, 0.0)).norm() < 1e-10);
    assert_eq!(evs[0].source, SeedSource::Laguerre);

    // 2μ² + 6μ + 3 = 0
    let evs = find_eigenvalues(&problem(3.0), 10, 50.0).unwrap();
    let s3 = 3f64.sqrt();
    let expected = [(-3.0 - s3) / 2.0, (-3.0 + s3) / 2.0];
    assert_eq!(evs.len(), 2);
    for (e, x) in evs.iter().zip(expected) {
        assert!((e.value.re - x).abs() < 1e-10 && e.value.im == 0.0);
    }
}

#[test]
fn alpha_one_has_empty_spectrum() {
    let p = problem(1.0);
    assert!(find_eigenvalues(&p, 20, 50.0).unwrap().is_empty());
    assert_eq!(count_zeros(&p, Rect::new(-50.0, -0.01, -50.0, 50.0)).unwrap(), 0);
    let forced = SpectralProblem::with_integer_override(1.0, Some(false)).unwrap();
    assert!(find_eigenvalues(&forced, 5, 50.0).unwrap().is_empty());
}

#[test]
fn counting_examples() {
    assert_eq!(count_zeros(&problem(2.0), Rect::new(-2.0, -0.5, -1.0, 1.0)).unwrap(), 1);
    assert_eq!(count_zeros(&problem(2.5), Rect::new(-10.0, -1e-3, -0.5, 0.5)).unwrap(), 2);
}

#[test]
fn real_eigenvalue_count_is_ceiling_of_alpha_minus_one() {
    for (alpha, expected) in [(0.4, 0), (0.9, 0), (1.3, 1), (1.99, 1), (2.5, 2), (3.7, 3), (4.2, 4)] {
        let evs = find_eigenvalues(&problem(alpha), 3, 0.0).unwrap();
        let reals = evs.iter().filter(|e| e.branch == Branch::Real).count();
        assert_eq!(reals, expected, "alpha={alpha}");
    }
}

#[test]
fn char_fn_matches_double_double_oracle_on_grid() {
    let p = problem(1.5);
    for i in 0..12 {
        for j in 0..12 {
            let lam = c(-8.0 + 8.5 * i as f64 / 11.0, -10.0 + 20.0 * j as f64 / 11.0);
            let f = char_fn(&p, lam).unwrap();
            let (o, _) = support::kummer_dd(-0.5, 2.0, -2.0 * lam);
            let scale = o.norm().max(1e-2);
            assert!((f - o).norm() < 1e-10 * scale, "lambda={lam}: {f} vs {o}");
        }
    }
}

#[test]
fn eigenvalues_match_double_double_newton() {
    let p = problem(1.5);
    let evs = find_eigenvalues(&p, 6, 0.0).unwrap();
    for e in evs.iter().filter(|e| e.branch != Branch::Lower) {
        let oracle = support::char_zero_dd(1.5, e.value + c(1e-3, -1e-3));
        assert!((e.value - oracle).norm() < 1e-11 * (1.0 + oracle.norm()), "{} vs {oracle}", e.value);
    }
    let real = support::char_real_zero_bisect(1.5, -2.0, -1.0);
    assert!((evs[0].value.re - real).abs() < 1e-12);
}

fn assert_spectrum_invariants(alpha: f64, k_max: usize) {
    let p = problem(alpha);
    let evs = find_eigenvalues(&p, k_max, 0.0).unwrap();
    let uppers: Vec<_> = evs.iter().filter(|e| e.branch == Branch::Upper).collect();
    let lowers: Vec<_> = evs.iter().filter(|e| e.branch == Branch::Lower).collect();
    assert_eq!(uppers.len(), k_max, "alpha={alpha}");
    assert_eq!(lowers.len(), k_max);
    for e in &evs {
        assert!(e.value.re < 0.0, "alpha={alpha}: {}", e.value);
        assert!(e.residual < RESIDUAL_TOL, "alpha={alpha}: residual {}", e.residual);
        assert_eq!(e.multiplicity, 1);
    }
    for (u, l) in uppers.iter().zip(&lowers) {
        assert_eq!(u.index, l.index);
        assert!((u.value.conj() - l.value).norm() == 0.0);
        assert!((u.residual - l.residual).abs() < 1e-12);
    }
    for w in uppers.windows(2) {
        assert!(w[0].value.im < w[1].value.im);
    }
}

#[test]
fn spectrum_invariants_for_noninteger_alpha() {
    for alpha in [0.3, 0.7, 1.3, 1.5, 2.5, 3.7] {
        assert_spectrum_invariants(alpha, 12);
    }
}

#[test]
fn independent_audit_on_shifted_rectangles() {
    // rectangles unrelated to the ones used internally
    let p = problem(1.5);
    let evs = find_eigenvalues(&p, 15, 0.0).unwrap();
    let top = evs.iter().filter(|e| e.branch == Branch::Upper).map(|e| e.value.im).fold(0.0, f64::max);
    let mut y = -top - 1.3;
    while y < top - 3.0 {
        let rect = Rect::new(-30.0, 0.7, y, y + 3.7);
        let inside = evs.iter().filter(|e| rect.contains(e.value)).count();
        assert_eq!(count_zeros(&p, rect).unwrap(), inside, "{rect}");
        y += 3.7;
    }
}

#[test]
fn generic_path_reproduces_laguerre_roots() {
    for n in 1..=5usize {
        let alpha = n as f64 + 1.0;
        let fast = find_eigenvalues(&problem(alpha), 3, 20.0).unwrap();
        let forced = SpectralProblem::with_integer_override(alpha, Some(false)).unwrap();
        let generic = find_eigenvalues_generic(&forced, 3, 20.0).unwrap();
        assert_eq!(fast.len(), n);
        assert_eq!(generic.len(), n, "n={n}: {generic:?}");
        for (a, b) in fast.iter().zip(&generic) {
            assert!((a.value - b.value).norm() < 1e-10, "n={n}");
        }
    }
}

#[test]
fn asymptotic_remainder_is_order_log_k_over_k() {
    // the seed for pair k lands on the zero reached by Newton from it
    for alpha in [1.5, 0.7] {
        let p = problem(alpha);
        let mut scaled = Vec::new();
        for k in (10..=100).step_by(10) {
            let seed = asymptotic_eigenvalue(&p, k, Branch::Upper).unwrap();
            let (zero, _) = refine_eigenvalue(&p, seed).unwrap();
            let kf = k as f64;
            scaled.push((zero - seed).norm() * kf / kf.ln());
        }
        let first = scaled[0];
        assert!(scaled.iter().all(|&s| s <= 1.5 * first), "alpha={alpha}: {scaled:?}");
    }
}

#[test]
fn asymptotic_seed_at_k_twenty() {
    let p = problem(1.5);
    let seed = asymptotic_eigenvalue(&p, 20, Branch::Upper).unwrap();
    let (zero, _) = refine_eigenvalue(&p, seed).unwrap();
    let evs = find_eigenvalues(&p, 25, 0.0).unwrap();
    assert!(evs.iter().any(|e| (e.value - zero).norm() < 1e-9));
    assert!((zero - seed).norm() <= 2.0 * 20f64.ln() / 20.0);
    // leading imaginary part and logarithmic real part
    let s100 = asymptotic_eigenvalue(&p, 100, Branch::Upper).unwrap();
    let s400 = asymptotic_eigenvalue(&p, 400, Branch::Upper).unwrap();
    assert!((s400.im - s100.im - 300.0 * std::f64::consts::PI).abs() < 1e-9);
    assert!((s400.re - s100.re + 1.5 * 4f64.ln()).abs() < 1e-9);
}

#[test]
fn eigenfunctions_satisfy_the_boundary_value_problem() {
    let p = problem(1.5);
    let evs = find_eigenvalues(&p, 2, 0.0).unwrap();
    for ev in evs.iter().filter(|e| e.branch != Branch::Lower) {
        let mode = eigenfunction(&p, *ev);
        let lam = ev.value;
        assert_eq!(mode.eval(0.0), c(0.0, 0.0));
        assert!(mode.eval(1.0).norm() < 1e-8, "f(1) = {}", mode.eval(1.0));
        let mut worst: f64 = 0.0;
        for i in 1..=1000 {
            let x = i as f64 / 1001.0;
            let (_, d2) = support::fd_derivatives(|t: C64| mode.eval(t.re), c(x, 0.0), (0.25 * x.min(1.0 - x)).min(1e-3));
            let f = mode.eval(x);
            let res = -d2 + 2.0 * lam * 1.5 / x * f + lam * lam * f;
            let scale = d2.norm() + (2.0 * lam * 1.5 / x * f).norm() + (lam * lam * f).norm();
            worst = worst.max(res.norm() / scale);
        }
        assert!(worst < 1e-5, "relative residual {worst}");
    }
    // α = 2, μ = −1: f(x) = x e^{−x}(2 − 2x)
    let p = problem(2.0);
    let ev = find_eigenvalues(&p, 1, 1.0).unwrap()[0];
    let mode = eigenfunction(&p, ev);
    assert_eq!(mode.eval(1.0), c(0.0, 0.0));
    for x in [0.1, 0.4, 0.8] {
        let exact = x * (-x as f64).exp() * (2.0 - 2.0 * x);
        assert!((mode.eval(x).re - exact).abs() < 1e-14);
    }
}

#[test]
fn spectral_abscissa_examples() {
    assert_eq!(spectral_abscissa(&find_eigenvalues(&problem(2.0), 1, 1.0).unwrap()), Some(-1.0));
    let s = spectral_abscissa(&find_eigenvalues(&problem(3.0), 1, 1.0).unwrap()).unwrap();
    assert!((s - (-3.0 + 3f64.sqrt()) / 2.0).abs() < 1e-12);
    assert_eq!(spectral_abscissa(&find_eigenvalues(&problem(1.0), 5, 50.0).unwrap()), None);
    for n in 1..=10usize {
        let s = spectral_abscissa(&find_eigenvalues(&problem(n as f64 + 1.0), 1, 1.0).unwrap()).unwrap();
        assert!(s.abs() <= 3.0 / (2.0 + n as f64) + 1e-12, "n={n}");
    }
}

#[test]
fn sweep_real_counts_step_at_integers() {
    let alphas: Vec<f64> = (0..=36).map(|i| 1.1 + 0.05 * i as f64).collect();
    let sweep = alpha_sweep(&alphas, 3).unwrap();
    for &(a, n) in &sweep.real_counts {
        let expected = if (a - a.round()).abs() < 1e-12 { a.round() as usize - 1 } else { (a - 1.0).ceil() as usize };
        assert_eq!(n, expected, "alpha={a}");
    }
    let at_two = sweep.points.iter().filter(|pt| (pt.alpha - 2.0).abs() < 1e-12).count();
    let is_two = alphas.iter().any(|&a| (a - 2.0).abs() < 1e-12);
    if is_two {
        assert_eq!(at_two, 1);
    }
    // trajectory ids are stable along a smooth stretch
    let first: Vec<_> = sweep.points.iter().filter(|pt| pt.alpha < 1.5 && pt.branch == Branch::Upper && pt.value.im < 5.0).collect();
    assert!(first.windows(2).all(|w| w[0].trajectory == w[1].trajectory));
}

#[test]
fn sweep_trajectories_plunge_near_two() {
    let alphas = [1.9, 1.99, 1.999, 1.9999, 1.99999, 1.999999];
    let sweep = alpha_sweep(&alphas, 1).unwrap();
    let lowest: Vec<f64> = alphas
        .iter()
        .map(|&a| sweep.points.iter().filter(|pt| pt.alpha == a && pt.branch == Branch::Upper).map(|pt| pt.value.re).next().unwrap())
        .collect();
    assert!(lowest.windows(2).all(|w| w[1] < w[0]), "{lowest:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn conjugate_symmetry_and_negative_real_parts(alpha in 0.2f64..4.8) {
        prop_assume!((alpha - alpha.round()).abs() > 1e-3);
        let p = problem(alpha);
        let evs = find_eigenvalues(&p, 4, 0.0).unwrap();
        for e in &evs {
            prop_assert!(e.value.re < 0.0);
            prop_assert!(e.residual < RESIDUAL_TOL);
            if e.branch != Branch::Real {
                prop_assert!(evs.iter().any(|o| o.value == e.value.conj()));
            }
        }
        let reals = evs.iter().filter(|e| e.branch == Branch::Real).count();
        prop_assert_eq!(reals, p.expected_real_count());
    }
}

#[test]
fn sweep_grid_refines_around_integers() {
    let g = sweep_grid(1.1, 2.9, 0.01, false, true);
    assert!(g.windows(2).all(|w| w[1] > w[0]));
    assert!(g.iter().all(|&a| (a - 2.0).abs() > 1e-11));
    assert!(g.iter().any(|&a| a == 2.0 - 1e-10) && g.iter().any(|&a| a == 2.0 + 1e-10));
    assert_eq!(g.iter().filter(|&&a| (a - 2.0).abs() < 0.005).count(), 16);
    assert!(sweep_grid(1.5, 2.5, 0.5, true, true).contains(&2.0));
    assert!(sweep_grid(1.0, 0.5, 0.1, false, true).is_empty());
    assert_eq!(sweep_grid(1.5, 2.5, 0.25, false, false), vec![1.5, 1.75, 2.25, 2.5]);
}
