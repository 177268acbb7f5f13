use multicrit_core::expansion::{fit_log_branch, log_window, DensityModel};
use multicrit_core::{
    fit_and_compare, rayleigh_quotient, sobolev_constant, test_function, Error, ExpansionConfig,
};

#[test]
fn euclidean_six_dimensional_coefficients() {
    let cfg = ExpansionConfig::euclidean(6, 1.0);
    let fit = fit_and_compare(&cfg).unwrap();
    let limit = 1.0 / sobolev_constant(6).unwrap();
    assert!(((fit.limit_fitted - limit) / limit).abs() < 1e-3, "{fit:?}");
    assert!((fit.c1_predicted - 5.0 / 12.0).abs() < 1e-15);
    assert!(((fit.c1_fitted - 5.0 / 12.0) / (5.0 / 12.0)).abs() < 0.1, "{fit:?}");
}

#[test]
fn halving_quadrature_tolerance_is_invisible() {
    let cfg = ExpansionConfig::euclidean(6, 1.0);
    let finer = ExpansionConfig { quad_tol: cfg.quad_tol / 2.0, ..cfg.clone() };
    for &e in &cfg.epsilons {
        let a = rayleigh_quotient(&cfg, e).unwrap();
        let b = rayleigh_quotient(&finer, e).unwrap();
        assert!((a - b).abs() < 1e-10, "ε={e}: {a} vs {b}");
    }
}

#[test]
fn fibre_curvature_shifts_first_coefficient() {
    let n = 6u32;
    let nn = f64::from(n);
    let base = fit_and_compare(&ExpansionConfig::euclidean(n, 1.0)).unwrap();
    for q in [-2.0, 1.0, 3.0] {
        let cfg = ExpansionConfig { q, ..ExpansionConfig::euclidean(n, 1.0) };
        let fit = fit_and_compare(&cfg).unwrap();
        let shift = fit.c1_fitted - base.c1_fitted;
        let expect = -3.0 * q / (nn * (nn - 4.0));
        assert!(((shift - expect) / expect).abs() < 0.1, "q={q}: {shift} vs {expect}");
    }
}

#[test]
fn first_coefficient_sign_on_grid() {
    for alpha in [0.5, 1.0, 2.0] {
        for q in [-2.0, 0.0, 2.0] {
            let cfg = ExpansionConfig { q, ..ExpansionConfig::euclidean(6, alpha) };
            let fit = fit_and_compare(&cfg).unwrap();
            assert_eq!(fit.c1_fitted.signum(), fit.c1_predicted.signum(), "α={alpha} q={q}: {fit:?}");
        }
    }
}

#[test]
fn conformal_value_on_round_sphere_kills_first_correction() {
    // α = (N-2)S/(4(N-1)) = 6 for N = 6 and unit curvature.
    let n = 6;
    let windows = [(1e-3, 1e-5), (1e-4, 1e-6), (1e-5, 1e-7)];
    let mut last = f64::INFINITY;
    for (hi, lo) in windows {
        let cfg = ExpansionConfig {
            density: DensityModel::RoundSphere { curvature: 1.0 },
            epsilons: log_window(1.0, hi, lo, 16),
            ..ExpansionConfig::euclidean(n, 6.0)
        };
        let fit = fit_and_compare(&cfg).unwrap();
        assert!(fit.c1_predicted.abs() < 1e-14);
        assert!(fit.c1_fitted.abs() < last, "window {hi}..{lo}: {fit:?}");
        last = fit.c1_fitted.abs();
    }
}

#[test]
fn four_dimensional_log_term_sign() {
    for (alpha, q) in [(1.0, 0.0), (0.5, 3.0)] {
        let cfg = ExpansionConfig { q, ..ExpansionConfig::euclidean(4, alpha) };
        let fit = fit_log_branch(&cfg).unwrap();
        let limit = 1.0 / sobolev_constant(4).unwrap();
        assert!(((fit.limit_fitted - limit) / limit).abs() < 1e-2, "{fit:?}");
        assert_eq!(fit.log_coeff_fitted.signum(), fit.log_coeff_sign_predicted, "{fit:?}");
    }
    assert!(matches!(
        fit_and_compare(&ExpansionConfig::euclidean(4, 1.0)),
        Err(Error::Hypothesis(_))
    ));
}

#[test]
fn test_function_vanishes_on_the_boundary() {
    for n in 3..9 {
        assert_eq!(test_function(1e-3, 0.7, n, 0.7).unwrap(), 0.0);
        assert!(test_function(1e-3, 0.7, n, 0.0).unwrap() > 0.0);
    }
    assert!(test_function(1e-3, 0.7, 6, 0.8).is_err());
}

#[test]
fn short_windows_rejected() {
    let cfg = ExpansionConfig { epsilons: vec![1e-3, 1e-4, 1e-5], ..ExpansionConfig::euclidean(6, 1.0) };
    assert!(matches!(fit_and_compare(&cfg), Err(Error::Precondition(_))));
}
