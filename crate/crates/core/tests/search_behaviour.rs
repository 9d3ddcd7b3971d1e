use zeta_resonance::bounds::{kappa_max, Theorem};
use zeta_resonance::search::{
    grid_scan, local_refine, run_search, sample_grid_joint_products, SearchConfig,
};
use zeta_resonance::zeta::{joint_harmonic_product, EvalConfig};

#[test]
fn sigma_two_values_respect_euler_bounds() {
    let z2 = std::f64::consts::PI.powi(2) / 6.0;
    for x in [0.0, 50.0] {
        let mut cfg = SearchConfig::new(400.0, 0.5, 2.0, 1);
        cfg.grid_step = 0.05;
        cfg.x = x;
        let report = run_search(&cfg).unwrap();
        assert!(report.value <= z2 + 0.01 && report.value >= 1.0 / z2 - 0.01, "{}", report.value);
        assert!(report.prediction.is_none() && report.ratio.is_none());
        report.validate().unwrap();
    }
}

#[test]
fn guided_top_candidate_beats_sampled_median() {
    let mut cfg = SearchConfig::new(1e4, 0.75, 1.0, 1);
    cfg.grid_step = 0.01;
    let top = grid_scan(&cfg).unwrap()[0];
    let eval = EvalConfig::default();
    let guided = joint_harmonic_product(1.0, top.t, 1, &eval).unwrap();
    let mut sample = sample_grid_joint_products(&cfg, 2001).unwrap();
    sample.sort_by(f64::total_cmp);
    let median = sample[sample.len() / 2];
    assert!(guided >= median, "guided {guided} vs median {median}");
}

#[test]
fn refinement_matches_fine_brute_force() {
    let eval = EvalConfig::default();
    let f = |t: f64| joint_harmonic_product(1.0, t, 1, &eval).unwrap();
    // Coarse scan to put a local peak well inside the bracket.
    let (centre, _) = (0..=1000)
        .map(|k| 5175.5 + k as f64 * 1e-3)
        .map(|t| (t, f(t)))
        .fold((f64::NAN, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let (w, step) = (0.01, 1e-5);
    let (t_brute, _) = (0..=2000)
        .map(|k| centre - w + k as f64 * step)
        .map(|t| (t, joint_harmonic_product(1.0, t, 1, &eval).unwrap()))
        .fold((f64::NAN, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    assert!((t_brute - centre).abs() < 0.9 * w, "peak not interior");
    let r = local_refine(1.0, 1, t_brute, w, 1e-7).unwrap();
    assert!((r.t_star - t_brute).abs() <= 1e-5, "{} vs {}", r.t_star, t_brute);
    assert!(r.value >= joint_harmonic_product(1.0, t_brute, 1, &eval).unwrap());
}

#[test]
fn report_invariants_on_the_line() {
    let mut cfg = SearchConfig::new(3000.0, 0.5, 1.0, 2);
    cfg.grid_step = 0.02;
    let report = run_search(&cfg).unwrap();
    report.validate().unwrap();
    let (lo, hi) = cfg.window();
    assert!(lo <= report.t_star && report.t_star <= hi);
    let best = report.candidates.iter().map(|c| c.joint_product).fold(0.0, f64::max);
    assert!(report.value >= best);
    let ratio = report.ratio.unwrap();
    assert!(ratio.is_finite() && ratio > 0.0);
    let p = report.prediction.unwrap();
    assert_eq!(p.which, Theorem::Thm1);
    assert!(p.asymptotic_only && report.asymptotic_only);
}

#[test]
fn strip_search_uses_scaled_kappa() {
    let mut cfg = SearchConfig::new(2000.0, 0.5, 0.75, 1);
    cfg.grid_step = 0.05;
    let report = run_search(&cfg).unwrap();
    let p = report.prediction.unwrap();
    assert_eq!(p.which, Theorem::Thm2);
    let k = kappa_max(0.75, 0.5, false).unwrap();
    assert!((p.params.kappa.unwrap() - 0.9 * k).abs() < 1e-15);
    report.validate().unwrap();
}

#[test]
fn pole_free_empty_window_rejected() {
    let mut cfg = SearchConfig::new(1e4, 0.5, 1.0, 1);
    cfg.t_height = 1.0;
    assert!(grid_scan(&cfg).is_err());
}
