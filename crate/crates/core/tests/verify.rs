use singwave::data::InitialData;
use singwave::verify::*;

#[test]
fn hardy_examples() {
    let c = hardy_check_fn(|x| x * (1.0 - x), |x| 1.0 - 2.0 * x);
    assert!((c.lhs - 1.0 / 3.0).abs() < 1e-12 && (c.rhs - 4.0 / 3.0).abs() < 1e-12);
    let pi = std::f64::consts::PI;
    let s = hardy_check_fn(|x| (pi * x).sin(), |x| pi * (pi * x).cos());
    assert!(s.holds() && s.ratio() < 1.0);
    let sweep = hardy_sweep(100, 7);
    assert_eq!(sweep.len(), 100);
    assert!(sweep.iter().all(|c| c.holds()), "{:?}", sweep.iter().map(|c| c.ratio()).fold(0.0, f64::max));
}

#[test]
fn hardy_on_sampled_grid_function() {
    let x: Vec<f64> = (0..=50).map(|i| i as f64 / 50.0).collect();
    let psi: Vec<f64> = x.iter().map(|t| t * t * (1.0 - t)).collect();
    let c = hardy_check(&x, &psi).unwrap();
    // ∫x²(1−x)² = 1/30, 4∫(2x − 3x²)² = 4·2/15
    assert!((c.lhs - 1.0 / 30.0).abs() < 1e-4);
    assert!((c.rhs - 8.0 / 15.0).abs() < 1e-3);
}

#[test]
fn resolvent_bound_at_the_reference_probe() {
    let c = resolvent_bound_check(2.0, 0.0, 5.0, 200, 1000, 2024).unwrap();
    assert!((c.bound - 2.0 / 2.2).abs() < 1e-15);
    assert!(c.worst_ratio >= 0.95, "{}", c.worst_ratio);
}

#[test]
fn resolvent_bound_limits() {
    // σ → α: the bound tends to 0
    let c = resolvent_bound_check(2.0, 1.999, 3.0, 20, 200, 1).unwrap();
    assert!(c.bound < 1e-3 && c.worst_ratio > 1.0);
    // η large: bound → α − σ
    for eta in [1e2, 1e4, -1e4] {
        let c = resolvent_bound_check(1.5, 0.5, eta, 40, 400, 3).unwrap();
        assert!(c.worst_ratio >= 0.95, "eta={eta}: {}", c.worst_ratio);
    }
}

#[test]
fn resolvent_ratio_under_refinement() {
    let ratios: Vec<f64> = [250, 500, 1000]
        .iter()
        .map(|&n| resolvent_bound_check(2.0, 1.0, 2.0, 50, n, 9).unwrap().worst_ratio)
        .collect();
    assert!(ratios.iter().all(|&r| r >= 0.95), "{ratios:?}");
}

#[test]
fn gupta_bound_up_to_twenty() {
    let rows = gupta_bound_check(20).unwrap();
    assert_eq!(rows.len(), 20);
    assert!(rows[0].margin().abs() < 1e-14);
    assert!(rows[1..].iter().all(|r| r.margin() > 0.0));
    assert!(matches!(gupta_bound_check(0), Err(VerifyError::DegreeZero)));
}

#[test]
fn condition_identity_examples() {
    let parabola = InitialData::new(|x| x * (1.0 - x), |x| 1.0 - 2.0 * x, |_| 0.0, "parabola");
    let c = lemma_condition_identity(&parabola, 1).unwrap();
    assert!(c.literal < 1e-8 * c.data_norm, "{}", c.literal);
    let pi = std::f64::consts::PI;
    let velocity = InitialData::new(|_| 0.0, |_| 0.0, move |x| (pi * x).sin(), "velocity");
    let c = lemma_condition_identity(&velocity, 2).unwrap();
    assert!(c.corrected < 1e-8 * c.data_norm, "{}", c.corrected);
    assert!(c.literal > 1e-2, "{}", c.literal);
}
